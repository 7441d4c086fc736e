//! Worker pool sizing.

/// Environment variable capping the number of worker threads.
pub const THREADS_ENV: &str = "CONTRACTION_LAB_THREADS";

/// Positive integer from [`THREADS_ENV`], if set.
pub fn thread_cap() -> Option<usize> {
    std::env::var(THREADS_ENV).ok()?.trim().parse().ok().filter(|&n| n > 0)
}

/// Runs `f` inside a rayon pool sized by [`thread_cap`]. Output order of
/// indexed parallel iterators does not depend on the pool size.
pub fn install<R: Send>(f: impl FnOnce() -> R + Send) -> R {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = thread_cap() {
        builder = builder.num_threads(n);
    }
    match builder.build() {
        Ok(pool) => pool.install(f),
        Err(_) => f(),
    }
}
