use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rayon::prelude::*;

use crate::metrics::RunSummary;
use crate::packet::Strategy;
use crate::sim::{Sim, SimConfig};
use crate::topo::{self, TopoParams};

pub const DEFAULT_SEEDS: std::ops::RangeInclusive<u64> = 1..=20;

/// One sweep point: topology scale plus run knobs.
#[derive(Clone, Debug)]
pub struct Point {
    pub seed: u64,
    pub strategy: Strategy,
    /// Distinct prefixes requested by the consumer population (C).
    pub prefixes: usize,
    pub consumers: usize,
    pub producers: usize,
    pub parallel_links: usize,
}

fn run_point(p: &Point) -> RunSummary {
    let params = TopoParams {
        consumers: p.consumers,
        producers: p.producers,
        prefixes: p.prefixes,
        parallel_links: p.parallel_links,
        ..TopoParams::default()
    };
    // The topology depends only on the seed, never the strategy, so the two
    // strategies of a pair see identical networks and workloads.
    let mut rng = ChaCha12Rng::seed_from_u64(p.seed);
    let topo = topo::generate(&params, &mut rng).expect("valid sweep parameters");
    let cfg = SimConfig {
        strategy: p.strategy,
        seed: p.seed,
        ..SimConfig::default()
    };
    let report = Sim::new(cfg, topo).run();
    RunSummary::from_report(&report, p.prefixes, p.producers, p.parallel_links)
}

/// Run every point (both strategies) in parallel and return rows in a
/// stable order.
pub fn run_sweep(points: &[Point]) -> Vec<RunSummary> {
    let mut rows: Vec<RunSummary> = points.par_iter().map(run_point).collect();
    rows.sort_by(|a, b| a.key().cmp(&b.key()));
    rows
}

fn grid(
    seeds: impl Iterator<Item = u64> + Clone,
    combos: &[(usize, usize, usize, usize)],
) -> Vec<Point> {
    let mut points = Vec::new();
    for &(prefixes, consumers, producers, parallel_links) in combos {
        for seed in seeds.clone() {
            for strategy in [Strategy::Samba, Strategy::SelfLearning] {
                points.push(Point {
                    seed,
                    strategy,
                    prefixes,
                    consumers,
                    producers,
                    parallel_links,
                });
            }
        }
    }
    points
}

/// The consumer population never shrinks below the baseline size; when the
/// prefix count exceeds it, every prefix still gets a dedicated consumer.
fn population(prefixes: usize) -> usize {
    prefixes.max(TopoParams::default().consumers)
}

/// FIB size and discovery overhead versus prefix count C (fixed P).
pub fn fib_vs_c(
    seeds: impl Iterator<Item = u64> + Clone,
    c_values: &[usize],
    producers: usize,
) -> Vec<RunSummary> {
    let combos: Vec<_> = c_values
        .iter()
        .map(|&c| (c, population(c), producers, 1))
        .collect();
    run_sweep(&grid(seeds, &combos))
}

/// FIB size versus producer connection points P (fixed C).
pub fn fib_vs_p(
    seeds: impl Iterator<Item = u64> + Clone,
    p_values: &[usize],
    prefixes: usize,
) -> Vec<RunSummary> {
    let combos: Vec<_> = p_values
        .iter()
        .map(|&p| (prefixes, population(prefixes), p, 1))
        .collect();
    run_sweep(&grid(seeds, &combos))
}

/// Paths-per-prefix versus parallel-link degree k.
pub fn app_vs_k(
    seeds: impl Iterator<Item = u64> + Clone,
    k_values: &[usize],
    prefixes: usize,
    producers: usize,
) -> Vec<RunSummary> {
    let combos: Vec<_> = k_values
        .iter()
        .map(|&k| (prefixes, population(prefixes), producers, k))
        .collect();
    run_sweep(&grid(seeds, &combos))
}

/// Mean of a metric over all rows matching a strategy and sweep value.
pub fn mean_where<F, V>(rows: &[RunSummary], strategy: Strategy, var: V, value: usize, metric: F) -> f64
where
    F: Fn(&RunSummary) -> f64,
    V: Fn(&RunSummary) -> usize,
{
    let vals: Vec<f64> = rows
        .iter()
        .filter(|r| r.strategy == strategy && var(r) == value)
        .map(metric)
        .collect();
    if vals.is_empty() {
        0.0
    } else {
        vals.iter().sum::<f64>() / vals.len() as f64
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tiny_sweep_is_paired_and_sorted() {
        let rows = fib_vs_c(1..=2, &[5], 2);
        assert_eq!(rows.len(), 4); // 1 value × 2 seeds × 2 strategies
        for pair in rows.chunks(2) {
            assert_eq!(pair[0].seed, pair[1].seed);
            assert_ne!(pair[0].strategy, pair[1].strategy);
        }
        // Some routing state was learned in every run.
        assert!(rows.iter().all(|r| r.avg_fib_all > 0.0));
        assert!(rows.iter().all(|r| r.delivered_total > 0));
    }
}
