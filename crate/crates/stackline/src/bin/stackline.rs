//! Pipeline CLI: one JSON config drives every stage; subcommands run the
//! stages and write their artifacts plus a run manifest.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use stackline::config::PipelineConfig;
use stackline::error::{Error, Result};
use stackline::pipeline;
use stackline::util::worker_threads_from_env;

#[derive(Parser)]
#[command(
    name = "stackline",
    version,
    about = "Tabular classification pipeline: preprocess, select, train, evaluate, compare, predict, synth"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct ConfigArgs {
    /// Pipeline configuration (JSON).
    #[arg(long, short)]
    config: PathBuf,
    /// Dotted-path overrides, e.g. --set stacking.n_folds=10
    #[arg(long = "set", value_name = "PATH=VALUE")]
    overrides: Vec<String>,
}

impl ConfigArgs {
    fn load(&self) -> Result<PipelineConfig> {
        let text = std::fs::read_to_string(&self.config).map_err(|e| {
            Error::Config(format!("cannot read config {}: {e}", self.config.display()))
        })?;
        let mut value: serde_json::Value = serde_json::from_str(&text)
            .map_err(|e| Error::Config(format!("config is not valid JSON: {e}")))?;
        PipelineConfig::apply_overrides(&mut value, &self.overrides)?;
        PipelineConfig::from_value(value)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Generate the configured synthetic dataset and write it to the
    /// config's input path.
    Synth {
        #[command(flatten)]
        config: ConfigArgs,
        /// Write the CSV here instead of the config's input path.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Clean, split, balance the training split, fit the encoder, and
    /// encode every split.
    Preprocess {
        #[command(flatten)]
        config: ConfigArgs,
    },
    /// Chi-square feature selection on the training split.
    Select {
        #[command(flatten)]
        config: ConfigArgs,
    },
    /// Train the stacked ensemble on the kept features.
    Train {
        #[command(flatten)]
        config: ConfigArgs,
    },
    /// Score a saved model on one split and write the report and plots.
    Evaluate {
        #[command(flatten)]
        config: ConfigArgs,
        /// Model file (defaults to the trained stack in the output dir).
        #[arg(long)]
        model: Option<PathBuf>,
        /// Which split to score: train, test, or val.
        #[arg(long, default_value = "test")]
        split: String,
    },
    /// Train all eight models on identical splits and seeds and print the
    /// comparison table.
    Compare {
        #[command(flatten)]
        config: Option<ConfigArgs>,
        /// Reproduction mode: run the full survey pipeline on this CSV
        /// with the built-in survey configuration.
        #[arg(long, value_name = "CSV")]
        paper_data: Option<PathBuf>,
        /// Output directory for reproduction mode.
        #[arg(long, default_value = "repro_out")]
        out: PathBuf,
        /// Seed for reproduction mode.
        #[arg(long, default_value_t = 42)]
        seed: u64,
    },
    /// Append probability and label columns to a CSV using a saved model.
    Predict {
        #[command(flatten)]
        config: ConfigArgs,
        #[arg(long)]
        model: Option<PathBuf>,
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: PathBuf,
    },
}

fn run(cli: Cli) -> Result<()> {
    let threads = worker_threads_from_env();
    match cli.command {
        Command::Synth { config, out } => {
            let mut cfg = config.load()?;
            if let Some(path) = out {
                cfg.input = path;
            }
            let manifest = pipeline::run_synth(&cfg)?;
            println!(
                "wrote {} ({} rows)",
                cfg.input.display(),
                manifest.stages.first().map_or(0, |s| s.rows)
            );
        }
        Command::Preprocess { config } => {
            let cfg = config.load()?;
            let manifest = pipeline::run_preprocess(&cfg)?;
            if let Some(report) = &manifest.clean_report {
                println!(
                    "cleaned {}x{} -> {}x{}",
                    report.rows_before, report.cols_before, report.rows_after, report.cols_after
                );
            }
            for stage in &manifest.stages {
                println!("  {:<18} rows {:>6}  cols {:>3}", stage.name, stage.rows, stage.cols);
            }
        }
        Command::Select { config } => {
            let cfg = config.load()?;
            pipeline::run_select(&cfg)?;
            let kept: Vec<String> = serde_json::from_str(&std::fs::read_to_string(
                pipeline::kept_features_path(&cfg),
            )?)?;
            println!("kept {} features: {}", kept.len(), kept.join(", "));
        }
        Command::Train { config } => {
            let cfg = config.load()?;
            pipeline::run_train(&cfg, threads)?;
            println!("wrote {}", pipeline::model_path(&cfg).display());
        }
        Command::Evaluate {
            config,
            model,
            split,
        } => {
            let cfg = config.load()?;
            let model = model.unwrap_or_else(|| pipeline::model_path(&cfg));
            let (report, _) = pipeline::run_evaluate(&cfg, &model, &split)?;
            println!(
                "{split}: accuracy {:.4}  precision {:.4}  recall {:.4}  f1 {:.4}  auc {:.4}",
                report.scores.accuracy.weighted,
                report.scores.precision.weighted,
                report.scores.recall.weighted,
                report.scores.f1.weighted,
                report.auc,
            );
        }
        Command::Compare {
            config,
            paper_data,
            out,
            seed,
        } => match (paper_data, config) {
            (Some(data), _) => {
                if !data.exists() {
                    return Err(Error::Config(format!(
                        "input file {} does not exist",
                        data.display()
                    )));
                }
                let cfg = pipeline::repro_config(&data, &out, seed);
                let summary = pipeline::run_repro(&cfg, threads)?;
                println!(
                    "shape: {}x{} raw -> {}x{} after cleaning",
                    summary.raw_rows, summary.raw_cols, summary.clean_rows, summary.clean_cols
                );
                println!(
                    "top features by significance: {}",
                    summary.top_features.join(", ")
                );
                print!("{}", pipeline::render_compare_table(&summary.table));
            }
            (None, Some(config)) => {
                let cfg = config.load()?;
                let (rows, _) = pipeline::run_compare(&cfg, threads)?;
                print!("{}", pipeline::render_compare_table(&rows));
            }
            (None, None) => {
                return Err(Error::Config(
                    "compare needs --config or --paper-data".into(),
                ))
            }
        },
        Command::Predict {
            config,
            model,
            input,
            output,
        } => {
            let cfg = config.load()?;
            let model = model.unwrap_or_else(|| pipeline::model_path(&cfg));
            pipeline::run_predict(&cfg, &model, &input, &output)?;
            println!("wrote {}", output.display());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
