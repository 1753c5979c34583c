use rayon::prelude::*;

/// Runs `f` on every unit index and returns the results in index order.
///
/// `jobs == 1` runs on the calling thread with no pool; `jobs == 0` uses
/// rayon's default pool size.
pub fn map_units<T, F>(jobs: usize, units: &[usize], f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    if jobs == 1 {
        return units.iter().map(|&u| f(u)).collect();
    }
    let run = || units.par_iter().with_max_len(1).map(|&u| f(u)).collect();
    if jobs == 0 {
        return run();
    }
    match rayon::ThreadPoolBuilder::new().num_threads(jobs).build() {
        Ok(pool) => pool.install(run),
        Err(_) => run(),
    }
}
