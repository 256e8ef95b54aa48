//! Library half of the `jacobi-wronskian` command-line tool: number formatting,
//! the convergence study and the verification suites.

pub mod format;
pub mod study;
pub mod verify;

use jacobi_wronskian::Error;

/// Process exit status for a failed command: 2 for domain errors, 3 for
/// quadrature that did not converge, 1 otherwise.
pub fn exit_code(err: &anyhow::Error) -> i32 {
    match err.chain().find_map(|e| e.downcast_ref::<Error>()) {
        Some(Error::Convergence { .. }) => 3,
        Some(e) if e.is_domain() => 2,
        _ => 1,
    }
}

/// Thread count from the `THREADS` variable, if set to a positive integer.
pub fn thread_cap() -> Option<usize> {
    std::env::var("THREADS")
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .filter(|&n: &usize| n > 0)
}

/// Run `f` on a rayon pool capped by [`thread_cap`].
pub fn with_pool<T: Send>(f: impl FnOnce() -> T + Send) -> anyhow::Result<T> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = thread_cap() {
        builder = builder.num_threads(n);
    }
    Ok(builder.build()?.install(f))
}
