//! Thread-parallel drivers whose results do not depend on the worker count.

use std::num::NonZeroUsize;
use std::thread;

use chaosdet_core::montecarlo::{edet_chunk, merge_in_order, DetLambdaSampler, McPlan, RunningStats};
use chaosdet_core::{ChaosPair, McEstimate};

pub fn default_workers() -> usize {
    thread::available_parallelism().map(NonZeroUsize::get).unwrap_or(1)
}

/// Maps `f` over `items` on `workers` threads, returning results in input
/// order.
pub fn ordered_map<T, R, F>(items: &[T], workers: usize, f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync,
{
    let workers = workers.clamp(1, items.len().max(1));
    if workers == 1 {
        return items.iter().map(f).collect();
    }
    let f = &f;
    let mut tagged: Vec<(usize, R)> = thread::scope(|s| {
        let handles: Vec<_> = (0..workers)
            .map(|w| s.spawn(move || items.iter().enumerate().skip(w).step_by(workers).map(|(i, t)| (i, f(t))).collect::<Vec<_>>()))
            .collect();
        handles.into_iter().flat_map(|h| h.join().expect("worker panicked")).collect()
    });
    tagged.sort_by_key(|(i, _)| *i);
    tagged.into_iter().map(|(_, r)| r).collect()
}

/// Monte Carlo estimate of `E det Λ`. Chunk `c` always draws from substream
/// `(seed, c)` and chunk summaries are merged in chunk order, so the result
/// is bit-identical for every `workers`.
pub fn estimate_edet(pair: &ChaosPair<f64>, n_samples: usize, seed: u64, workers: usize) -> chaosdet_core::Result<McEstimate> {
    let plan = McPlan::new(n_samples, seed)?;
    let sampler = DetLambdaSampler::new(pair)?;
    let chunks = plan.chunks();
    let workers = workers.clamp(1, chunks);
    let mut parts: Vec<RunningStats> = vec![RunningStats::default(); chunks];
    thread::scope(|s| {
        let handles: Vec<_> = (0..workers)
            .map(|w| {
                let mut sampler = sampler.clone();
                s.spawn(move || (w..chunks).step_by(workers).map(|c| (c, edet_chunk(&mut sampler, &plan, c))).collect::<Vec<_>>())
            })
            .collect();
        for h in handles {
            for (c, st) in h.join().expect("worker panicked") {
                parts[c] = st;
            }
        }
    });
    Ok(McEstimate::from_stats(&merge_in_order(&parts), seed))
}

#[cfg(test)]
mod tests {
    use super::*;
    use chaosdet_core::verify::Case;

    #[test]
    fn worker_count_does_not_change_result() {
        let p = Case::new(2, 2, 2, 3).pair();
        let one = estimate_edet(&p, 20_000, 5, 1).unwrap();
        let four = estimate_edet(&p, 20_000, 5, 4).unwrap();
        assert_eq!(one.mean.to_bits(), four.mean.to_bits());
        assert_eq!(one, four);
        assert_eq!(one, chaosdet_core::montecarlo::estimate_edet(&p, 20_000, 5).unwrap());
    }

    #[test]
    fn proportional_pair_samples_zero() {
        let f = chaosdet_core::SymTensor::random_unit(1, 3, 2).unwrap();
        let p = ChaosPair::new(f.clone(), f.scale(-2.0)).unwrap();
        let est = estimate_edet(&p, 10_000, 0, 3).unwrap();
        assert_eq!((est.mean, est.stderr), (0.0, 0.0));
    }

    #[test]
    fn ordered_map_keeps_order() {
        let xs: Vec<u32> = (0..100).collect();
        assert_eq!(ordered_map(&xs, 7, |x| x * 2), xs.iter().map(|x| x * 2).collect::<Vec<_>>());
    }
}
