//! Reproducible verification suites.
//!
//! Each suite confronts one theoretical statement with exact computation or
//! Monte Carlo data at a fixed scale and seed. A suite yields check rows
//! (`suite,check,expected,observed,tolerance,pass`) and, where an empirical
//! CDF is compared with a model, overlay points for plotting.

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use rand::Rng;
use rayon::prelude::*;

use crate::algo::{
    collect_samples, run_one_plus_one, BitAlgo, Metric, MutationOp, Retarget, RunConfig,
    SampleMeta, SampleSet, Task, DEFAULT_BUDGET,
};
use crate::analysis::{
    counterexample_probs, dkw_epsilon, empirical_dominates, fitprop_select_prob, jump_lower_spec,
    lo_exact_spec, lo_q_for_operator, lo_static_mean, lo_target_spec, mutation_monotone_check,
    optimal_k, optimal_static_rate, preset_levels, q_kbit, sssp_theorem_params,
    static_unbiased_audit, Counterexample, Evidence, Preset, Verdict,
};
use crate::bench::{leadingones, Bench, Objective, WeightedGraph};
use crate::bounds::{
    coupon_spec, coupon_sum_bound, geom_sum_lower, geom_sum_upper, harmonic_bound,
    harmonic_sum_bound, harmonic_sum_threshold, integer_threshold_at_least,
    integer_threshold_at_most, validate_bound, validate_lower_bound, witt_bounds, BoundFamily,
    LowerFamily, UpperFamily,
};
use crate::dist::{dominates_exact, DiscreteDist, GatedGeomSpec};
use crate::error::{Error, Result};
use crate::numeric::harmonic;
use crate::rng::{rng_from_seed, trial_seed};

/// Significance level of every statistical comparison in the suites.
pub const ALPHA: f64 = 1e-3;

/// Truncation budget for exact model distributions.
const MODEL_EPS: f64 = 1e-9;

/// Number of overlay points emitted per comparison.
const OVERLAY_POINTS: u64 = 200;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    LoClosedForm,
    EaClosedForm,
    StaticRate,
    RlsOptimality,
    QIdentity,
    FitnessLevel,
    LoExactness,
    BoundSoundness,
    Coupon,
    OnemaxEasiest,
    Counterexample,
    Sssp,
    JumpSandwich,
}

impl Suite {
    pub const ALL: [Suite; 13] = [
        Suite::LoClosedForm,
        Suite::EaClosedForm,
        Suite::StaticRate,
        Suite::RlsOptimality,
        Suite::QIdentity,
        Suite::FitnessLevel,
        Suite::LoExactness,
        Suite::BoundSoundness,
        Suite::Coupon,
        Suite::OnemaxEasiest,
        Suite::Counterexample,
        Suite::Sssp,
        Suite::JumpSandwich,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Suite::LoClosedForm => "lo-closed-form",
            Suite::EaClosedForm => "ea-closed-form",
            Suite::StaticRate => "static-rate",
            Suite::RlsOptimality => "rls-optimality",
            Suite::QIdentity => "q-identity",
            Suite::FitnessLevel => "fitness-level",
            Suite::LoExactness => "lo-exactness",
            Suite::BoundSoundness => "bound-soundness",
            Suite::Coupon => "coupon",
            Suite::OnemaxEasiest => "onemax-easiest",
            Suite::Counterexample => "counterexample",
            Suite::Sssp => "sssp",
            Suite::JumpSandwich => "jump-sandwich",
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            Suite::LoClosedForm => "RLS on LeadingOnes: exact mean n²/2 and simulation",
            Suite::EaClosedForm => "(1+1) EA on LeadingOnes: closed-form mean and simulation",
            Suite::StaticRate => "optimal static mutation rate on LeadingOnes",
            Suite::RlsOptimality => "RLS is the fastest static unbiased algorithm on LeadingOnes",
            Suite::QIdentity => "k-bit improvement probabilities sum to one",
            Suite::FitnessLevel => "fitness-level domination for the (1+1) EA on OneMax",
            Suite::LoExactness => "exact LeadingOnes runtime distribution for six operators",
            Suite::BoundSoundness => "tail bounds against exact tails; ordering of the bounds",
            Suite::Coupon => "sums of coupon collector times",
            Suite::OnemaxEasiest => "OneMax is the easiest function for mutation-based algorithms",
            Suite::Counterexample => "runtime domination can fail between natural algorithms",
            Suite::Sssp => "multi-criteria shortest path EA on a path graph",
            Suite::JumpSandwich => "Jump runtime between a lower and an upper model",
        }
    }

    pub fn run(self) -> Result<SuiteReport> {
        let mut r = SuiteReport::new(self);
        match self {
            Suite::LoClosedForm => lo_closed_form(&mut r)?,
            Suite::EaClosedForm => ea_closed_form(&mut r)?,
            Suite::StaticRate => static_rate(&mut r)?,
            Suite::RlsOptimality => rls_optimality(&mut r)?,
            Suite::QIdentity => q_identity(&mut r)?,
            Suite::FitnessLevel => fitness_level(&mut r)?,
            Suite::LoExactness => lo_exactness(&mut r)?,
            Suite::BoundSoundness => bound_soundness(&mut r)?,
            Suite::Coupon => coupon(&mut r)?,
            Suite::OnemaxEasiest => onemax_easiest(&mut r)?,
            Suite::Counterexample => counterexample(&mut r)?,
            Suite::Sssp => sssp(&mut r)?,
            Suite::JumpSandwich => jump_sandwich(&mut r)?,
        }
        Ok(r)
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .iter()
            .copied()
            .find(|x| x.id() == s)
            .ok_or_else(|| {
                let ids: Vec<_> = Suite::ALL.iter().map(|x| x.id()).collect();
                Error::Domain(format!(
                    "unknown suite {s:?}; valid ids: {}",
                    ids.join(", ")
                ))
            })
    }
}

/// One verified statement.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckRow {
    pub suite: &'static str,
    pub check: String,
    pub expected: String,
    pub observed: String,
    pub tolerance: String,
    pub pass: bool,
}

/// Empirical and model CDF at one point. `series` names the comparison
/// when a suite has several.
#[derive(Debug, Clone, PartialEq)]
pub struct OverlayPoint {
    pub series: String,
    pub lambda: u64,
    pub cdf_empirical: f64,
    pub cdf_model: f64,
    pub band: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteReport {
    pub suite: Suite,
    pub rows: Vec<CheckRow>,
    pub overlay: Vec<OverlayPoint>,
}

impl SuiteReport {
    fn new(suite: Suite) -> Self {
        SuiteReport {
            suite,
            rows: Vec::new(),
            overlay: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        !self.rows.is_empty() && self.rows.iter().all(|r| r.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckRow> {
        self.rows.iter().filter(|r| !r.pass)
    }

    pub fn write_rows_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        let io = |e: csv::Error| Error::Parse(e.to_string());
        out.write_record([
            "suite",
            "check",
            "expected",
            "observed",
            "tolerance",
            "pass",
        ])
        .map_err(io)?;
        for r in &self.rows {
            let pass = if r.pass { "true" } else { "false" };
            out.write_record([
                r.suite,
                &r.check,
                &r.expected,
                &r.observed,
                &r.tolerance,
                pass,
            ])
            .map_err(io)?;
        }
        out.flush().map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn write_overlay_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        let io = |e: csv::Error| Error::Parse(e.to_string());
        out.write_record(["series", "lambda", "cdf_empirical", "cdf_model", "band"])
            .map_err(io)?;
        for p in &self.overlay {
            out.write_record([
                p.series.clone(),
                p.lambda.to_string(),
                p.cdf_empirical.to_string(),
                p.cdf_model.to_string(),
                p.band.to_string(),
            ])
            .map_err(io)?;
        }
        out.flush().map_err(|e| Error::Parse(e.to_string()))
    }

    fn push(
        &mut self,
        check: impl Into<String>,
        expected: String,
        observed: String,
        tolerance: String,
        pass: bool,
    ) {
        self.rows.push(CheckRow {
            suite: self.suite.id(),
            check: check.into(),
            expected,
            observed,
            tolerance,
            pass,
        });
    }

    fn close(&mut self, check: impl Into<String>, expected: f64, observed: f64, abs_tol: f64) {
        let pass = (observed - expected).abs() <= abs_tol;
        self.push(
            check,
            num(expected),
            num(observed),
            format!("abs {abs_tol:e}"),
            pass,
        );
    }

    fn rel_close(&mut self, check: impl Into<String>, expected: f64, observed: f64, rel_tol: f64) {
        let pass = (observed - expected).abs() <= rel_tol * expected.abs();
        self.push(
            check,
            num(expected),
            num(observed),
            format!("rel {rel_tol}"),
            pass,
        );
    }

    fn within(&mut self, check: impl Into<String>, lo: f64, hi: f64, observed: f64) {
        self.push(
            check,
            format!("[{}, {}]", num(lo), num(hi)),
            num(observed),
            "interval".into(),
            (lo..=hi).contains(&observed),
        );
    }

    fn at_most(
        &mut self,
        check: impl Into<String>,
        limit: f64,
        observed: f64,
        slack: f64,
        slack_name: &str,
    ) {
        let pass = observed <= limit + slack;
        self.push(
            check,
            format!("<= {}", num(limit)),
            num(observed),
            format!("{slack_name} {}", num(slack)),
            pass,
        );
    }

    fn count_zero(&mut self, check: impl Into<String>, total: usize, bad: usize) {
        self.push(
            check,
            format!("0 of {total}"),
            format!("{bad} of {total}"),
            "exact".into(),
            bad == 0,
        );
    }

    fn verdict(
        &mut self,
        check: impl Into<String>,
        verdict: Verdict,
        want_consistent: bool,
        band: f64,
    ) {
        let expected = if want_consistent {
            "consistent"
        } else {
            "refuted"
        };
        let observed = match verdict {
            Verdict::Consistent => "consistent".to_string(),
            Verdict::Refuted { at, gap } => format!("refuted at {at} (gap {})", num(gap)),
        };
        let tolerance = format!("bands {} at alpha {ALPHA}", num(band));
        self.push(
            check,
            expected.into(),
            observed,
            tolerance,
            verdict.is_consistent() == want_consistent,
        );
    }

    fn add_overlay(&mut self, series: &str, samples: &SampleSet, model: &DiscreteDist) {
        let cdf = model.cdf_values();
        let model_at = |k: u64| {
            if k < model.lo() {
                0.0
            } else {
                cdf[((k - model.lo()) as usize).min(cdf.len() - 1)]
            }
        };
        let values = samples.values();
        let lo = values[0].min(model.lo());
        let hi = values[values.len() - 1].max(lo + 1);
        let step = ((hi - lo) / OVERLAY_POINTS).max(1);
        let band = dkw_epsilon(samples.n_samples(), ALPHA) + model.eps();
        let mut k = lo;
        while k <= hi {
            self.overlay.push(OverlayPoint {
                series: series.to_string(),
                lambda: k,
                cdf_empirical: samples.ecdf(k),
                cdf_model: model_at(k),
                band,
            });
            k += step;
        }
    }
}

fn num(x: f64) -> String {
    format!("{x:.9}")
        .trim_end_matches('0')
        .trim_end_matches('.')
        .to_string()
}

fn ea(p: f64) -> MutationOp {
    MutationOp::StandardBit(p)
}

fn samples(config: &RunConfig, runs: usize, seed: u64, metric: Metric) -> Result<SampleSet> {
    collect_samples(config, runs, seed, metric)
}

/// Two-sided agreement: samples and model each dominate the other within
/// the bands.
fn two_sided(r: &mut SuiteReport, label: &str, s: &SampleSet, model: &DiscreteDist) -> Result<()> {
    let band = dkw_epsilon(s.n_samples(), ALPHA) + model.eps();
    let up = empirical_dominates(Evidence::Samples(s), Evidence::Exact(model), ALPHA)?;
    let down = empirical_dominates(Evidence::Exact(model), Evidence::Samples(s), ALPHA)?;
    r.verdict(format!("{label}: empirical below model"), up, true, band);
    r.verdict(format!("{label}: model below empirical"), down, true, band);
    r.add_overlay(label, s, model);
    Ok(())
}

fn lo_closed_form(r: &mut SuiteReport) -> Result<()> {
    let n = 50;
    let model = lo_exact_spec(&lo_q_for_operator(&MutationOp::OneBit, n)?)?;
    r.close("exact model mean equals n²/2", 1250.0, model.mean(), 1e-9);
    let config = RunConfig::bits(
        BitAlgo::OnePlusOne(MutationOp::OneBit),
        Bench::LeadingOnes,
        n,
    );
    let s = samples(&config, 10_000, 101, Metric::Iterations)?;
    r.rel_close("empirical mean of 10^4 runs", 1250.0, s.mean(), 0.02);
    r.add_overlay("rls", &s, &model.exact_dist(MODEL_EPS)?);
    Ok(())
}

fn ea_closed_form(r: &mut SuiteReport) -> Result<()> {
    let n = 50;
    let p = 1.0 / n as f64;
    let model = lo_exact_spec(&lo_q_for_operator(&ea(p), n)?)?;
    let closed = (0.5 / (p * p)) * ((1.0 - p).powi(1 - n as i32) - (1.0 - p));
    r.rel_close("model mean equals closed form", closed, model.mean(), 1e-9);
    let config = RunConfig::bits(BitAlgo::OnePlusOne(ea(p)), Bench::LeadingOnes, n);
    let s = samples(&config, 10_000, 102, Metric::Iterations)?;
    r.rel_close("empirical mean of 10^4 runs", closed, s.mean(), 0.02);
    r.within("model mean / n²", 0.82, 0.90, model.mean() / (n * n) as f64);
    r.within("empirical mean / n²", 0.82, 0.90, s.mean() / (n * n) as f64);
    r.add_overlay("ea", &s, &model.exact_dist(MODEL_EPS)?);
    Ok(())
}

fn static_rate(r: &mut SuiteReport) -> Result<()> {
    let n = 500;
    let p = optimal_static_rate(n)?;
    let nf = n as f64;
    r.within("optimal rate times n", 1.55, 1.65, p * nf);
    let best = lo_static_mean(n, p);
    r.within(
        "expected runtime / n² at the optimal rate",
        0.74,
        0.80,
        best / (nf * nf),
    );
    r.at_most(
        "optimal rate beats rate 1/n",
        lo_static_mean(n, 1.0 / nf),
        best,
        0.0,
        "abs",
    );
    Ok(())
}

fn rls_optimality(r: &mut SuiteReport) -> Result<()> {
    let n = 10;
    let target = 0.5 * (n * n) as f64;
    let mut rls = vec![0.0; n + 1];
    rls[1] = 1.0;
    r.close(
        "RLS mixture gives n²/2",
        target,
        static_unbiased_audit(n, &rls)?.expected_runtime,
        1e-9,
    );

    let mut rng = rng_from_seed(104);
    let mut min_runtime = f64::INFINITY;
    let (mut below, mut tight_elsewhere, mut identity_bad) = (0, 0, 0);
    let trials = 1000;
    for t in 0..trials {
        let mut w: Vec<f64> = match t % 3 {
            // Dense mixtures, Dirichlet(1) weights.
            0 => (0..=n).map(|_| -(1.0 - rng.random::<f64>()).ln()).collect(),
            // Two active flip counts.
            1 => {
                let mut w = vec![0.0; n + 1];
                w[rng.random_range(0..=n)] += rng.random::<f64>();
                w[rng.random_range(1..=n)] += rng.random::<f64>() + 1e-3;
                w
            }
            // Perturbations of RLS.
            _ => {
                let mut w: Vec<f64> = (0..=n).map(|_| rng.random::<f64>()).collect();
                let eta = 10f64.powf(-rng.random_range(1.0..8.0));
                let s: f64 = w.iter().sum();
                w.iter_mut().for_each(|x| *x *= eta / s);
                w[1] += 1.0 - eta;
                w
            }
        };
        let s: f64 = w.iter().sum();
        w.iter_mut().for_each(|x| *x /= s);
        let a = static_unbiased_audit(n, &w)?;
        min_runtime = min_runtime.min(a.expected_runtime);
        if !a.lower_bound_holds || a.expected_runtime < target - 1e-9 {
            below += 1;
        }
        if (a.expected_runtime - target).abs() <= 1e-9 && (w[1] - 1.0).abs() > 1e-9 {
            tight_elsewhere += 1;
        }
        if !a.identity_holds {
            identity_bad += 1;
        }
    }
    r.at_most(
        "smallest runtime over random mixtures is not below n²/2",
        min_runtime,
        target,
        1e-9,
        "abs",
    );
    r.count_zero("mixtures below n²/2", trials, below);
    r.count_zero("mixtures at n²/2 other than RLS", trials, tight_elsewhere);
    r.count_zero("mixtures violating the q identity", trials, identity_bad);

    let mut argmax_bad = 0;
    let mut cases = 0;
    for n in 1..=50 {
        for i in 0..n {
            let best = q_kbit(n, optimal_k(n, i)?, i)?;
            let max = (1..=n)
                .map(|k| q_kbit(n, k, i))
                .collect::<Result<Vec<_>>>()?
                .into_iter()
                .fold(0.0, f64::max);
            cases += 1;
            if best < max * (1.0 - 1e-12) {
                argmax_bad += 1;
            }
        }
    }
    r.count_zero(
        "floor(n/(i+1)) bits is not the best flip count (n <= 50)",
        cases,
        argmax_bad,
    );
    Ok(())
}

fn q_identity(r: &mut SuiteReport) -> Result<()> {
    let mut worst: f64 = 0.0;
    for n in 1..=20 {
        for k in 1..=n {
            let s: f64 = (0..n)
                .map(|i| q_kbit(n, k, i))
                .collect::<Result<Vec<_>>>()?
                .iter()
                .sum();
            worst = worst.max((s - 1.0).abs());
        }
    }
    r.close(
        "max |sum_i q(n,k,i) - 1| over n <= 20, k <= n",
        0.0,
        worst,
        1e-12,
    );
    Ok(())
}

fn fitness_level(r: &mut SuiteReport) -> Result<()> {
    let n = 20u64;
    let model = preset_levels(&Preset::OneMax { n })?
        .to_spec()
        .exact_dist(MODEL_EPS)?;
    let config = RunConfig::bits(
        BitAlgo::OnePlusOne(ea(1.0 / n as f64)),
        Bench::OneMax,
        n as usize,
    );
    let s = samples(&config, 10_000, 106, Metric::Iterations)?;
    let band = dkw_epsilon(s.n_samples(), ALPHA);
    let v = empirical_dominates(Evidence::Samples(&s), Evidence::Exact(&model), ALPHA)?;
    r.verdict(
        "runtime dominated by the fitness-level model",
        v,
        true,
        band + model.eps(),
    );
    for delta in [0.5, 1.0] {
        let h = harmonic_bound(n, 1.0 / std::f64::consts::E, delta)?;
        let t = integer_threshold_at_least(h.threshold);
        r.at_most(
            format!("fraction of runs >= (1+{delta}) e n ln n"),
            h.tail_bound,
            s.upper_fraction(t),
            band,
            "DKW",
        );
    }
    r.add_overlay("onemax", &s, &model);
    Ok(())
}

/// The six operators checked for distributional exactness on LeadingOnes.
pub fn lo_exactness_operators(n: usize) -> Vec<MutationOp> {
    vec![
        MutationOp::OneBit,
        MutationOp::KBit(2),
        MutationOp::StandardBit(1.0 / n as f64),
        MutationOp::MixedOneTwo(0.5),
        MutationOp::FitnessDependentK,
        MutationOp::FitnessDependentRate,
    ]
}

/// LeadingOnes where reaching `target` leading ones counts as success.
struct LeadingOnesTarget {
    target: usize,
}

impl Objective for LeadingOnesTarget {
    fn id(&self) -> String {
        format!("leadingones>={}", self.target)
    }

    fn fitness(&self, x: &[bool]) -> i64 {
        leadingones(x) as i64
    }

    fn is_optimal(&self, _x: &[bool], fitness: i64) -> bool {
        fitness >= self.target as i64
    }
}

/// Operators that cannot improve from some level (a fixed `k >= 2` bits
/// at fitness `n-1`) are checked on the time to reach that level instead.
fn lo_exactness(r: &mut SuiteReport) -> Result<()> {
    let n = 12;
    let runs = 20_000u64;
    for (j, op) in lo_exactness_operators(n).into_iter().enumerate() {
        let q = lo_q_for_operator(&op, n)?;
        let target = q.iter().position(|&qi| qi == 0.0).unwrap_or(n);
        let model = lo_target_spec(&q, target)?.exact_dist(MODEL_EPS)?;
        let obj = LeadingOnesTarget { target };
        let master = 107 + j as u64;
        let values = (0..runs)
            .into_par_iter()
            .map(|i| {
                run_one_plus_one(&obj, &op, n, trial_seed(master, i), DEFAULT_BUDGET)
                    .map(|rec| rec.iterations)
            })
            .collect::<Result<Vec<u64>>>()?;
        let meta = SampleMeta {
            algo: format!("(1+1) {op}"),
            bench: obj.id(),
            n,
            master_seed: master,
        };
        let s = SampleSet::new(values, Metric::Iterations, meta)?;
        let label = if target == n {
            op.to_string()
        } else {
            format!("{op} to fitness {target}")
        };
        two_sided(r, &label, &s, &model)?;
    }
    Ok(())
}

/// Kind of a test spec in the bound battery; decides which families apply.
#[derive(Debug, Clone, Copy, PartialEq)]
enum CaseKind {
    General,
    Equal,
    Harmonic { n: u64, c: f64 },
    Coupon { n: u64, k: u64, m: u64 },
    HarmonicSum { n: u64, m: u64, c: f64 },
}

fn battery() -> Result<Vec<(GatedGeomSpec, CaseKind)>> {
    let mut rng = rng_from_seed(108);
    let mut out = Vec::with_capacity(50);
    for i in 0..50 {
        let case = match i % 5 {
            0 => {
                let len = rng.random_range(1..=12);
                let probs: Vec<f64> = (0..len).map(|_| rng.random_range(0.05..=1.0)).collect();
                (GatedGeomSpec::geometric_sum(&probs)?, CaseKind::General)
            }
            1 => {
                let len = rng.random_range(1..=12);
                let p = rng.random_range(0.05..=1.0);
                (
                    GatedGeomSpec::geometric_sum(&vec![p; len])?,
                    CaseKind::Equal,
                )
            }
            2 => {
                let n = rng.random_range(2..=12u64);
                let c = rng.random_range(0.2..=1.0);
                let probs: Vec<f64> = (1..=n)
                    .map(|j| {
                        let base = c * j as f64 / n as f64;
                        base + (1.0 - base) * rng.random_range(0.0..0.3)
                    })
                    .collect();
                (
                    GatedGeomSpec::geometric_sum(&probs)?,
                    CaseKind::Harmonic { n, c },
                )
            }
            3 => {
                let n = rng.random_range(1..=12u64);
                let k = rng.random_range(1..=n);
                let m = rng.random_range(1..=12 / k);
                (
                    coupon_spec(n, k)?.repeat(m as usize),
                    CaseKind::Coupon { n, k, m },
                )
            }
            _ => {
                let n = rng.random_range(2..=6u64);
                let m = rng.random_range(1..=12 / n);
                let c = rng.random_range(0.3..=1.0);
                let probs: Vec<f64> = (1..=n).map(|j| c * j as f64 / n as f64).collect();
                (
                    GatedGeomSpec::geometric_sum(&probs)?.repeat(m as usize),
                    CaseKind::HarmonicSum { n, m, c },
                )
            }
        };
        out.push(case);
    }
    Ok(out)
}

/// Worst excess of exact tail over bound, per family.
#[derive(Default, Clone, Copy)]
struct Tally {
    checks: usize,
    failures: usize,
    worst: f64,
}

fn bound_soundness(r: &mut SuiteReport) -> Result<()> {
    let families = BoundFamily::ALL;
    let mut tallies = vec![
        Tally {
            worst: f64::NEG_INFINITY,
            ..Tally::default()
        };
        families.len()
    ];
    let slot = |f: BoundFamily| {
        families
            .iter()
            .position(|&g| g == f)
            .expect("family listed")
    };
    let mut record = |f: BoundFamily, exact: f64, bound: f64, holds: bool| {
        let t = &mut tallies[slot(f)];
        t.checks += 1;
        t.worst = t.worst.max(exact - bound);
        if !holds {
            t.failures += 1;
        }
    };

    let specs = battery()?;
    for (spec, kind) in &specs {
        let terms = spec.terms().len();
        let mu = spec.mean();
        let p_min = spec.min_succ().expect("battery specs have terms");
        let mut upper = vec![
            (BoundFamily::Janson1, UpperFamily::Janson1),
            (BoundFamily::Janson2, UpperFamily::Janson2),
            (BoundFamily::Scheideler, UpperFamily::Scheideler),
            (BoundFamily::Weak, UpperFamily::Weak),
        ];
        if *kind == CaseKind::Equal {
            upper.push((BoundFamily::Equal, UpperFamily::Equal));
        }
        for delta in [0.1, 0.25, 0.5, 1.0, 2.0, 4.0] {
            let t = integer_threshold_at_least((1.0 + delta) * mu);
            for &(id, f) in &upper {
                let b = geom_sum_upper(f, terms, p_min, mu, delta)?;
                let c = validate_bound(spec, t, b)?;
                record(id, c.exact, c.bound, c.holds);
            }
        }
        for delta in [0.1, 0.3, 0.5, 0.8, 1.0] {
            let t = integer_threshold_at_most((1.0 - delta) * mu);
            for (id, f) in [
                (BoundFamily::LowerJanson, LowerFamily::Janson),
                (BoundFamily::LowerMiddle, LowerFamily::Middle),
                (BoundFamily::LowerScheideler, LowerFamily::Scheideler),
            ] {
                let b = geom_sum_lower(f, p_min, mu, delta)?;
                let c = validate_lower_bound(spec, t, b)?;
                record(id, c.exact, c.bound, c.holds);
            }
        }
        let s = spec.sum_inv_sq();
        for scale in [0.5, 1.0, 2.0, 4.0] {
            let w = witt_bounds(s, p_min, mu, scale * s.sqrt())?;
            let c = validate_bound(spec, integer_threshold_at_least(w.upper_threshold), w.upper)?;
            record(BoundFamily::Witt, c.exact, c.bound, c.holds);
            let c =
                validate_lower_bound(spec, integer_threshold_at_most(w.lower_threshold), w.lower)?;
            record(BoundFamily::Witt, c.exact, c.bound, c.holds);
        }
        match *kind {
            CaseKind::Harmonic { n, c } => {
                for delta in [0.0, 0.5, 1.0, 2.0] {
                    let h = harmonic_bound(n, c, delta)?;
                    let v = validate_bound(
                        spec,
                        integer_threshold_at_least(h.threshold),
                        h.tail_bound,
                    )?;
                    record(BoundFamily::Harmonic, v.exact, v.bound, v.holds);
                }
                let h = harmonic_bound(n, c, 0.0)?;
                record(
                    BoundFamily::Harmonic,
                    mu,
                    h.mean_bound,
                    mu <= h.mean_bound * (1.0 + 1e-12),
                );
                let a = spec.exact_dist(MODEL_EPS)?;
                let b = h.dominating_spec.exact_dist(MODEL_EPS)?;
                let holds = dominates_exact(&a, &b, 4.0 * MODEL_EPS)?.holds();
                record(BoundFamily::Harmonic, 0.0, 0.0, holds);
            }
            CaseKind::HarmonicSum { n, m, c } => {
                for scale in [0.0, 0.5, 1.0, 2.0, 5.0] {
                    let lambda = scale * (n * m) as f64 / c;
                    let b = harmonic_sum_bound(n, m, c, lambda)?;
                    let t = integer_threshold_at_least(harmonic_sum_threshold(n, m, c, lambda));
                    let v = validate_bound(spec, t, b)?;
                    record(BoundFamily::HarmonicSum, v.exact, v.bound, v.holds);
                }
            }
            CaseKind::Coupon { n, k, m } => {
                for delta in [0.0, 0.5, 1.0, 2.0, 4.0] {
                    let cb = coupon_sum_bound(n, m, k, delta)?;
                    let v = validate_bound(
                        spec,
                        integer_threshold_at_least(cb.threshold),
                        cb.tail_bound,
                    )?;
                    record(BoundFamily::Coupon, v.exact, v.bound, v.holds);
                }
                let cb = coupon_sum_bound(n, m, k, 0.0)?;
                record(
                    BoundFamily::Coupon,
                    0.0,
                    0.0,
                    (cb.mean - mu).abs() <= 1e-9 * mu,
                );
            }
            CaseKind::General | CaseKind::Equal => {}
        }
    }

    for (f, t) in families.iter().zip(&tallies) {
        let check = format!("{} sound on {} battery checks", f.id(), t.checks);
        let observed = if t.checks == 0 {
            "no checks".to_string()
        } else {
            format!(
                "{} failures; max exact - bound {}",
                t.failures,
                num(t.worst)
            )
        };
        let pass = t.checks > 0 && t.failures == 0;
        r.push(
            check,
            "0 failures".into(),
            observed,
            format!(
                "exact <= bound + {:e}",
                10.0 * crate::bounds::VALIDATION_EPS
            ),
            pass,
        );
    }

    // Ordering of the upper bounds at μ = n/p_min and of the lower bounds.
    let ns = [1usize, 2, 3, 5, 8, 12, 20, 35, 60, 100];
    let ps: Vec<f64> = (0..10).map(|i| 10f64.powf(-3.0 + i as f64 / 3.0)).collect();
    let deltas = [0.01, 0.05, 0.1, 0.3, 0.5, 1.0, 2.0, 4.0, 8.0, 20.0];
    let le = |a: f64, b: f64| a <= b * (1.0 + 1e-9) + 1e-300;
    let (mut points, mut bad) = (0, 0);
    for &n in &ns {
        for &p in &ps {
            for &d in &deltas {
                let mu = n as f64 / p;
                let v = [
                    UpperFamily::Janson1,
                    UpperFamily::Janson2,
                    UpperFamily::Scheideler,
                    UpperFamily::Weak,
                ]
                .map(|f| geom_sum_upper(f, n, p, mu, d));
                let v = v.into_iter().collect::<Result<Vec<f64>>>()?;
                points += 1;
                if !v.windows(2).all(|w| le(w[0], w[1])) {
                    bad += 1;
                }
            }
        }
    }
    r.count_zero(
        "janson1 <= janson2 <= scheideler <= weak on the grid",
        points,
        bad,
    );
    let mus: Vec<f64> = (0..10).map(|i| 10f64.powf(i as f64 / 3.0)).collect();
    let ldeltas: Vec<f64> = (1..=10).map(|i| i as f64 / 10.0).collect();
    let (mut points, mut bad) = (0, 0);
    for &p in &ps {
        for &mu in &mus {
            for &d in &ldeltas {
                let j = geom_sum_lower(LowerFamily::Janson, p, mu, d)?;
                let m = geom_sum_lower(LowerFamily::Middle, p, mu, d)?;
                let s = geom_sum_lower(LowerFamily::Scheideler, p, mu, d)?;
                points += 1;
                if !(le(j, m) && le(m, s)) {
                    bad += 1;
                }
            }
        }
    }
    r.count_zero(
        "lower janson <= middle <= scheideler on the grid",
        points,
        bad,
    );
    Ok(())
}

fn coupon(r: &mut SuiteReport) -> Result<()> {
    let (n, m, k) = (10, 3, 10);
    let spec = coupon_spec(n, k)?.repeat(m as usize);
    let mean = (m * n) as f64 * harmonic(k);
    r.close("exact mean m n H_k", 87.869, mean, 1e-3);
    r.close("spec mean equals m n H_k", mean, spec.mean(), 1e-9);
    for delta in [0.5, 1.0, 2.0] {
        let cb = coupon_sum_bound(n, m, k, delta)?;
        let c = validate_bound(
            &spec,
            integer_threshold_at_least(cb.threshold),
            cb.tail_bound,
        )?;
        r.at_most(
            format!("exact tail <= bound at delta {delta}"),
            c.bound,
            c.exact,
            10.0 * crate::bounds::VALIDATION_EPS,
            "abs",
        );
    }
    Ok(())
}

fn onemax_easiest(r: &mut SuiteReport) -> Result<()> {
    let (n, mu) = (8, 3);
    let op = ea(1.0 / n as f64);
    let easiest = RunConfig::bits(BitAlgo::BestOfMu { mu, op: op.clone() }, Bench::OneMax, n);
    let a = samples(&easiest, 10_000, 110, Metric::Evaluations)?;
    let band = 2.0 * dkw_epsilon(a.n_samples(), ALPHA);
    for (j, bench) in [Bench::LeadingOnes, Bench::Jump(2)].into_iter().enumerate() {
        let other = RunConfig::bits(BitAlgo::MuPlusOne { mu, op: op.clone() }, bench, n);
        let b = samples(&other, 10_000, 111 + j as u64, Metric::Evaluations)?;
        let v = empirical_dominates(Evidence::Samples(&a), Evidence::Samples(&b), ALPHA)?;
        r.verdict(
            format!(
                "(1+1) EA_3 on OneMax below (3+1) EA on {}",
                other.bench_id()
            ),
            v,
            true,
            band,
        );
    }
    let (mut cases, mut bad) = (0, 0);
    for n in 1..=10 {
        for step in 1..=10 {
            let p = 0.05 * step as f64;
            for a in 0..=n {
                for b in a..=n {
                    cases += 1;
                    if !mutation_monotone_check(n, p, a, b)? {
                        bad += 1;
                    }
                }
            }
        }
    }
    r.count_zero(
        "offspring one-count monotone in parent one-count (n <= 10)",
        cases,
        bad,
    );
    Ok(())
}

fn counterexample(r: &mut SuiteReport) -> Result<()> {
    let n = 4;
    let runs = 1_000_000;
    let rs = RunConfig::bits(BitAlgo::RandomSearch, Bench::OneMax, n);
    let ea_cfg = RunConfig::bits(BitAlgo::OnePlusOne(ea(1.0 / n as f64)), Bench::OneMax, n);
    let srs = samples(&rs, runs, 111, Metric::Evaluations)?;
    let sea = samples(&ea_cfg, runs, 112, Metric::Evaluations)?;
    let mut observed = [0.0; 2];
    for (j, (which, s)) in [(Counterexample::RsLe2, &srs), (Counterexample::EaLe2, &sea)]
        .into_iter()
        .enumerate()
    {
        let want = counterexample_probs(which, n as u64, 0)?;
        let got = s.ecdf(2);
        let se = (want * (1.0 - want) / runs as f64).sqrt();
        r.push(
            format!("{which}: Pr[evaluations <= 2]"),
            num(want),
            num(got),
            format!("3 SE = {}", num(3.0 * se)),
            (got - want).abs() <= 3.0 * se,
        );
        observed[j] = got;
    }
    r.push(
        "random search more likely done within 2 evaluations",
        "rs > ea".into(),
        format!("{} > {}", num(observed[0]), num(observed[1])),
        "strict".into(),
        observed[0] > observed[1],
    );
    let band = 2.0 * dkw_epsilon(runs, ALPHA);
    let v = empirical_dominates(Evidence::Samples(&sea), Evidence::Samples(&srs), ALPHA)?;
    let at_two = matches!(v, Verdict::Refuted { at: 2, .. });
    r.verdict(
        "EA runtime dominated by random search runtime",
        v,
        false,
        band,
    );
    r.push(
        "domination fails at lambda = 2",
        "2".into(),
        match v {
            Verdict::Refuted { at, .. } => at.to_string(),
            Verdict::Consistent => "none".into(),
        },
        "exact".into(),
        at_two,
    );

    let mut worst: f64 = 0.0;
    for mu in 2..=40usize {
        let mut fit = vec![1.0; mu];
        fit[0] = 9.0;
        let got = fitprop_select_prob(&fit, 8.0)?;
        worst =
            worst.max((got - counterexample_probs(Counterexample::Fitprop, 10, mu as u64)?).abs());
    }
    r.close(
        "fitness-proportionate selection reproduces 9/(mu+8), mu = 2..40",
        0.0,
        worst,
        0.0,
    );
    Ok(())
}

fn sssp(r: &mut SuiteReport) -> Result<()> {
    let graph = WeightedGraph::path(8)?;
    let ell = graph.shortest_path_hops() as u64;
    r.close("path graph needs 7 edges", 7.0, ell as f64, 0.0);
    let params = sssp_theorem_params(graph.n_vertices() as u64, ell)?;
    let config = RunConfig {
        task: Task::Sssp {
            graph,
            retarget: Retarget::ExcludeCurrent,
        },
        n: 8,
        budget: 100_000_000,
    };
    let s = samples(&config, 1000, 113, Metric::Iterations)?;
    r.at_most("empirical mean", params.mean_bound, s.mean(), 0.0, "abs");
    let band = dkw_epsilon(s.n_samples(), ALPHA);
    for eps in [0.5, 1.0] {
        let t = integer_threshold_at_least((1.0 + eps) * params.t0);
        r.at_most(
            format!("fraction of runs >= (1+{eps}) T0"),
            params.tail(eps),
            s.upper_fraction(t),
            band,
            "DKW",
        );
    }
    Ok(())
}

fn jump_sandwich(r: &mut SuiteReport) -> Result<()> {
    let (n, k) = (8u64, 2u64);
    let lower = jump_lower_spec(n, k)?.exact_dist(MODEL_EPS)?;
    let upper = preset_levels(&Preset::Jump { n, k })?
        .to_spec()
        .exact_dist(MODEL_EPS)?;
    let config = RunConfig::bits(
        BitAlgo::OnePlusOne(ea(1.0 / n as f64)),
        Bench::Jump(k as usize),
        n as usize,
    )
    .with_budget(10_000_000);
    let s = samples(&config, 1000, 114, Metric::Iterations)?;
    let band = dkw_epsilon(s.n_samples(), ALPHA) + MODEL_EPS;
    let v = empirical_dominates(Evidence::Exact(&lower), Evidence::Samples(&s), ALPHA)?;
    r.verdict("lower model below empirical runtime", v, true, band);
    let v = empirical_dominates(Evidence::Samples(&s), Evidence::Exact(&upper), ALPHA)?;
    r.verdict("empirical runtime below upper model", v, true, band);
    r.add_overlay("lower", &s, &lower);
    r.add_overlay("upper", &s, &upper);
    Ok(())
}
