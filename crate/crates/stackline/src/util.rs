//! Small shared helpers.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

/// A unit of work for [`run_tasks`].
pub type Task<'a, T> = Box<dyn FnOnce() -> T + Send + 'a>;

/// Runs independent tasks, optionally on a bounded pool of scoped
/// threads, and returns their results in task order. `threads <= 1` means
/// serial execution. Output is identical either way because results are
/// placed by task index.
pub fn run_tasks<'a, T: Send>(tasks: Vec<Task<'a, T>>, threads: usize) -> Vec<T> {
    let n = tasks.len();
    if threads <= 1 || n <= 1 {
        return tasks.into_iter().map(|t| t()).collect();
    }
    let slots: Mutex<Vec<Option<T>>> = Mutex::new((0..n).map(|_| None).collect());
    let queue: Mutex<Vec<Option<Task<'a, T>>>> =
        Mutex::new(tasks.into_iter().map(Some).collect());
    let next = AtomicUsize::new(0);
    std::thread::scope(|scope| {
        for _ in 0..threads.min(n) {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::SeqCst);
                if i >= n {
                    break;
                }
                let task = queue.lock().unwrap()[i].take().expect("task taken once");
                let out = task();
                slots.lock().unwrap()[i] = Some(out);
            });
        }
    });
    slots
        .into_inner()
        .unwrap()
        .into_iter()
        .map(|slot| slot.expect("task completed"))
        .collect()
}

/// Worker count from the `STACKLINE_THREADS` environment variable;
/// 0 or unset means serial.
pub fn worker_threads_from_env() -> usize {
    std::env::var("STACKLINE_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .unwrap_or(0)
}
