use crate::algo::SampleSet;
use crate::dist::{dominates_exact, DiscreteDist};
use crate::error::{check_prob, domain, Result};
use crate::numeric::{binomial_pmf, convolve};

/// DKW band half-width `√(ln(2/α)/(2N))`.
pub fn dkw_epsilon(n: usize, alpha: f64) -> f64 {
    ((2.0 / alpha).ln() / (2.0 * n as f64)).sqrt()
}

/// An empirical or exact runtime distribution.
#[derive(Debug, Clone, Copy)]
pub enum Evidence<'a> {
    Samples(&'a SampleSet),
    Exact(&'a DiscreteDist),
}

impl Evidence<'_> {
    /// Half-width of the confidence band around the CDF.
    pub fn band(&self, alpha: f64) -> f64 {
        match self {
            Evidence::Samples(s) => dkw_epsilon(s.n_samples(), alpha),
            Evidence::Exact(d) => d.eps(),
        }
    }

    /// Points where the CDF jumps, with the CDF value at each.
    fn steps(&self) -> Vec<(u64, f64)> {
        match self {
            Evidence::Samples(s) => {
                let v = s.values();
                let n = v.len() as f64;
                let mut out: Vec<(u64, f64)> = Vec::new();
                for (i, &x) in v.iter().enumerate() {
                    match out.last_mut() {
                        Some(last) if last.0 == x => last.1 = (i + 1) as f64 / n,
                        _ => out.push((x, (i + 1) as f64 / n)),
                    }
                }
                out
            }
            Evidence::Exact(d) => (d.lo()..).zip(d.cdf_values()).collect(),
        }
    }
}

fn step_eval(steps: &[(u64, f64)], k: u64) -> f64 {
    match steps.partition_point(|s| s.0 <= k) {
        0 => 0.0,
        i => steps[i - 1].1,
    }
}

/// Outcome of a statistical domination test.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Verdict {
    /// No violation beyond the bands; this is not a proof of domination.
    Consistent,
    /// At `at`, `F_a + ε_a < F_b - ε_b`; `gap = F_b(at) - F_a(at)`.
    Refuted { at: u64, gap: f64 },
}

impl Verdict {
    pub fn is_consistent(&self) -> bool {
        matches!(self, Verdict::Consistent)
    }
}

/// Tests `a ⪯ b` (a stochastically smaller): refuted iff at some point the
/// upper band of `F_a` lies below the lower band of `F_b`. The first such
/// point is reported.
pub fn empirical_dominates(a: Evidence<'_>, b: Evidence<'_>, alpha: f64) -> Result<Verdict> {
    if !(alpha > 0.0 && alpha < 0.5) {
        return domain(format!("alpha = {alpha} must lie in (0, 0.5)"));
    }
    let (ea, eb) = (a.band(alpha), b.band(alpha));
    let (sa, sb) = (a.steps(), b.steps());
    let mut points: Vec<u64> = sa.iter().chain(&sb).map(|s| s.0).collect();
    points.sort_unstable();
    points.dedup();
    for k in points {
        let (fa, fb) = (step_eval(&sa, k), step_eval(&sb, k));
        if fa + ea < fb - eb {
            return Ok(Verdict::Refuted {
                at: k,
                gap: fb - fa,
            });
        }
    }
    Ok(Verdict::Consistent)
}

/// Distribution of the number of ones after standard-bit mutation with
/// rate `p` of a string with `a` ones out of `n`: `a - Bin(a,p) + Bin(n-a,p)`.
pub fn offspring_ones_dist(n: usize, p: f64, a: usize) -> Result<DiscreteDist> {
    check_prob("p", p)?;
    if a > n {
        return domain(format!("a = {a} exceeds n = {n}"));
    }
    let mut kept = binomial_pmf(a, p);
    kept.reverse();
    let pmf = convolve(&kept, &binomial_pmf(n - a, p));
    let total: f64 = pmf.iter().sum();
    DiscreteDist::finite(0, pmf.into_iter().map(|v| v / total).collect())
}

/// Exact check that a parent with `a <= b` ones yields a stochastically
/// smaller offspring one-count than a parent with `b` ones.
pub fn mutation_monotone_check(n: usize, p: f64, a: usize, b: usize) -> Result<bool> {
    if !(p > 0.0 && p <= 0.5) {
        return domain(format!("p = {p} must lie in (0, 0.5]"));
    }
    if a > b || b > n {
        return domain(format!("need 0 <= a <= b <= n (a = {a}, b = {b}, n = {n})"));
    }
    let da = offspring_ones_dist(n, p, a)?;
    let db = offspring_ones_dist(n, p, b)?;
    Ok(dominates_exact(&da, &db, 0.0)?.holds())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algo::{Metric, SampleMeta};
    use crate::dist::{sample_geom, GatedGeomSpec};
    use crate::rng::rng_from_seed;

    fn geom_samples(p: f64, n: usize, seed: u64) -> SampleSet {
        let mut rng = rng_from_seed(seed);
        let v = (0..n).map(|_| sample_geom(p, &mut rng)).collect();
        SampleSet::new(v, Metric::Iterations, SampleMeta::default()).unwrap()
    }

    fn geom_exact(p: f64) -> DiscreteDist {
        GatedGeomSpec::geometric_sum(&[p])
            .unwrap()
            .exact_dist(1e-9)
            .unwrap()
    }

    #[test]
    fn identical_inputs_consistent() {
        let s = geom_samples(0.3, 1000, 1);
        assert!(
            empirical_dominates(Evidence::Samples(&s), Evidence::Samples(&s), 0.01)
                .unwrap()
                .is_consistent()
        );
    }

    #[test]
    fn slow_samples_refute_fast_model() {
        let s = geom_samples(0.2, 100_000, 2);
        let fast = geom_exact(0.8);
        match empirical_dominates(Evidence::Samples(&s), Evidence::Exact(&fast), 0.01).unwrap() {
            Verdict::Refuted { at, gap } => {
                assert_eq!(at, 1);
                assert!((gap - 0.6).abs() < 0.01);
            }
            v => panic!("{v:?}"),
        }
        assert!((dkw_epsilon(100_000, 0.01) - 0.00515).abs() < 1e-4);
    }

    #[test]
    fn exact_fast_below_exact_slow() {
        let (fast, slow) = (geom_exact(0.8), geom_exact(0.2));
        assert!(
            empirical_dominates(Evidence::Exact(&fast), Evidence::Exact(&slow), 0.01)
                .unwrap()
                .is_consistent()
        );
        assert!(dominates_exact(&fast, &slow, 1e-8).unwrap().holds());
        assert!(
            !empirical_dominates(Evidence::Exact(&slow), Evidence::Exact(&fast), 0.01)
                .unwrap()
                .is_consistent()
        );
        assert!(empirical_dominates(Evidence::Exact(&fast), Evidence::Exact(&slow), 0.5).is_err());
    }

    #[test]
    fn monotone_check_examples() {
        assert!(mutation_monotone_check(6, 0.3, 3, 3).unwrap());
        assert!(mutation_monotone_check(6, 0.5, 1, 5).unwrap());
        assert!(mutation_monotone_check(6, 0.3, 2, 4).unwrap());
        assert!(mutation_monotone_check(6, 0.6, 2, 4).is_err());
        assert!(mutation_monotone_check(6, 0.3, 4, 2).is_err());
        let d = offspring_ones_dist(4, 0.5, 1).unwrap();
        assert!(d
            .pmf()
            .iter()
            .zip([1.0, 4.0, 6.0, 4.0, 1.0])
            .all(|(p, c)| (p - c / 16.0).abs() < 1e-15));
    }

    #[test]
    fn monotone_check_exhaustive() {
        for n in 1..=10 {
            for step in 1..=10 {
                let p = 0.05 * step as f64;
                for a in 0..=n {
                    for b in a..=n {
                        assert!(
                            mutation_monotone_check(n, p, a, b).unwrap(),
                            "n={n} p={p} a={a} b={b}"
                        );
                    }
                }
            }
        }
    }
}
