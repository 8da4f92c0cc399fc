use std::fmt::Write as _;

use crate::packet::Strategy;
use crate::sim::RunReport;

/// How much smaller the baseline metric is under the aggregating strategy;
/// > 1 means an improvement. Both values zero compare as neutral.
pub fn improvement_ratio(baseline: f64, samba: f64) -> f64 {
    if samba == 0.0 {
        if baseline == 0.0 {
            1.0
        } else {
            f64::INFINITY
        }
    } else {
        baseline / samba
    }
}

/// One summarized run inside a sweep.
#[derive(Clone, Debug)]
pub struct RunSummary {
    pub seed: u64,
    pub strategy: Strategy,
    pub prefixes: usize,
    pub producers: usize,
    pub parallel_links: usize,
    pub avg_fib_all: f64,
    pub avg_fib_core: f64,
    pub discovery_interest_tx: u64,
    pub discovery_data_tx: u64,
    pub app_all: f64,
    pub app_core: f64,
    pub leaf_face_counts: Vec<usize>,
    pub delivered_total: u64,
}

impl RunSummary {
    pub fn from_report(
        report: &RunReport,
        prefixes: usize,
        producers: usize,
        parallel_links: usize,
    ) -> RunSummary {
        RunSummary {
            seed: report.seed,
            strategy: report.strategy,
            prefixes,
            producers,
            parallel_links,
            avg_fib_all: report.avg_fib_all,
            avg_fib_core: report.avg_fib_core,
            discovery_interest_tx: report.discovery_interest_tx,
            discovery_data_tx: report.discovery_data_tx,
            app_all: report.app_all,
            app_core: report.app_core,
            leaf_face_counts: report.leaf_face_counts.clone(),
            delivered_total: report.delivered_total,
        }
    }

    /// Stable sort key so CSV output is byte-identical across runs.
    pub fn key(&self) -> (usize, usize, usize, u64, &'static str) {
        (
            self.prefixes,
            self.producers,
            self.parallel_links,
            self.seed,
            self.strategy.as_str(),
        )
    }
}

pub fn fib_size_csv(rows: &[RunSummary]) -> String {
    let mut out = String::from("seed,strategy,C,P,scope,avg_entries\n");
    for r in rows {
        for (scope, v) in [("all", r.avg_fib_all), ("core", r.avg_fib_core)] {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{:.6}",
                r.seed,
                r.strategy.as_str(),
                r.prefixes,
                r.producers,
                scope,
                v
            );
        }
    }
    out
}

pub fn overhead_csv(rows: &[RunSummary]) -> String {
    let mut out = String::from("seed,strategy,C,P,interest_discoveries,data_discoveries\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            r.seed,
            r.strategy.as_str(),
            r.prefixes,
            r.producers,
            r.discovery_interest_tx,
            r.discovery_data_tx
        );
    }
    out
}

pub fn app_csv(rows: &[RunSummary]) -> String {
    let mut out = String::from("seed,strategy,k,scope,app\n");
    for r in rows {
        for (scope, v) in [("all", r.app_all), ("core", r.app_core)] {
            let _ = writeln!(
                out,
                "{},{},{},{},{:.6}",
                r.seed,
                r.strategy.as_str(),
                r.parallel_links,
                scope,
                v
            );
        }
    }
    out
}

pub fn throughput_csv(report: &RunReport) -> String {
    let mut out = String::from("seed,strategy,time_bin,consumer,delivered\n");
    for (&(bin, ref consumer), &delivered) in &report.delivered_bins {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            report.seed,
            report.strategy.as_str(),
            bin,
            consumer,
            delivered
        );
    }
    out
}

/// Seed-paired ratios of a per-run metric (baseline / samba), keyed by the
/// sweep variable extracted with `var`.
pub fn paired_ratios<F, V>(
    rows: &[RunSummary],
    var: V,
    metric: F,
) -> Vec<(usize, u64, f64)>
where
    F: Fn(&RunSummary) -> f64,
    V: Fn(&RunSummary) -> usize,
{
    let mut out = Vec::new();
    for r in rows.iter().filter(|r| r.strategy == Strategy::Samba) {
        let Some(base) = rows.iter().find(|b| {
            b.strategy == Strategy::SelfLearning && b.seed == r.seed && var(b) == var(r)
        }) else {
            continue;
        };
        out.push((var(r), r.seed, improvement_ratio(metric(base), metric(r))));
    }
    out.sort_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));
    out
}
