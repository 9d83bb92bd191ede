//! Deterministic data-parallel sharding over an index space.

/// Splits `[0, total)` into `shard_count` contiguous ranges, runs `job`
/// on each (in parallel when possible), and returns the results in shard
/// order. Results never depend on the shard count as long as `job` is a
/// pure function of its range.
pub(crate) fn run_sharded<R, F>(total: u128, shard_count: usize, job: F) -> Vec<R>
where
    R: Send,
    F: Fn(u128, u128) -> R + Sync,
{
    let shards = shard_count
        .max(1)
        .min(usize::try_from(total).unwrap_or(usize::MAX).max(1));
    if shards == 1 {
        return vec![job(0, total)];
    }
    let job = &job;
    std::thread::scope(|scope| {
        let handles: Vec<_> = (0..shards)
            .map(|s| {
                let start = total * s as u128 / shards as u128;
                let end = total * (s as u128 + 1) / shards as u128;
                scope.spawn(move || job(start, end))
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("shard worker panicked"))
            .collect()
    })
}
