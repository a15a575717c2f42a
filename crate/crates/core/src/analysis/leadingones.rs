//! Exact runtime models for elitist algorithms on LeadingOnes.
//!
//! With improvement probabilities `q_i` from fitness `i`, the runtime of an
//! elitist algorithm with a suitably symmetric operator is distributed as
//! `Σ Xᵢ·Geom(qᵢ)` with independent fair coins `Xᵢ`.

use crate::algo::MutationOp;
use crate::dist::{GatedGeomSpec, GatedTerm};
use crate::error::{check_prob, domain, Error, Result};
use crate::numeric::compensated_sum;

/// Probability that flipping `k` uniformly chosen distinct bits of a string
/// with LeadingOnes value `i` increases the fitness:
/// `C(n-i-1, k-1) / C(n, k)`.
pub fn q_kbit(n: usize, k: usize, i: usize) -> Result<f64> {
    if k < 1 || k > n {
        return domain(format!("k = {k} must lie in [1, {n}]"));
    }
    if i >= n {
        return domain(format!("fitness i = {i} must lie in [0, {}]", n - 1));
    }
    if k - 1 > n - i - 1 {
        return Ok(0.0);
    }
    let mut q = k as f64 / n as f64;
    for j in 1..k {
        q *= (n - i - j) as f64 / (n - j) as f64;
    }
    Ok(q)
}

/// `⌊n/(i+1)⌋`, the number of flipped bits maximizing [`q_kbit`].
pub fn optimal_k(n: usize, i: usize) -> Result<usize> {
    if i >= n {
        return domain(format!(
            "fitness i = {i} must lie in [0, {}]",
            n.saturating_sub(1)
        ));
    }
    Ok(n / (i + 1))
}

/// `Σ Xᵢ·Geom(qᵢ)` with gates ½.
pub fn lo_exact_spec(q: &[f64]) -> Result<GatedGeomSpec> {
    lo_target_spec(q, q.len())
}

/// Time to reach fitness at least `a`: the first `a` terms of the exact model.
pub fn lo_target_spec(q: &[f64], a: usize) -> Result<GatedGeomSpec> {
    if a > q.len() {
        return domain(format!("target a = {a} exceeds n = {}", q.len()));
    }
    let terms = q[..a]
        .iter()
        .enumerate()
        .map(|(level, &qi)| {
            check_prob("improvement probability", qi)?;
            if qi == 0.0 {
                return Err(Error::InfiniteRuntime { level });
            }
            GatedTerm::new(0.5, qi)
        })
        .collect::<Result<Vec<_>>>()?;
    GatedGeomSpec::new(0, terms)
}

/// Improvement probabilities `q_0..q_{n-1}` of `op` on LeadingOnes.
pub fn lo_q_for_operator(op: &MutationOp, n: usize) -> Result<Vec<f64>> {
    op.validate(n)?;
    let sbm = |p: f64, i: usize| (1.0 - p).powi(i as i32) * p;
    let nf = n as f64;
    (0..n)
        .map(|i| {
            Ok(match op {
                MutationOp::OneBit => 1.0 / nf,
                MutationOp::KBit(k) => q_kbit(n, *k, i)?,
                MutationOp::StandardBit(p) => sbm(*p, i),
                MutationOp::PositionDependentOneBit(p) => p[i],
                MutationOp::PositionDependentRates(p) => {
                    p[i] * p[..i].iter().map(|pj| 1.0 - pj).product::<f64>()
                }
                MutationOp::FitnessDependentK => q_kbit(n, optimal_k(n, i)?, i)?,
                MutationOp::FitnessDependentRate => sbm(1.0 / (i as f64 + 1.0), i),
                MutationOp::MixedOneTwo(_) if n == 1 => 1.0,
                MutationOp::MixedOneTwo(p) => {
                    p / nf + 2.0 * (1.0 - p) * (n - i - 1) as f64 / (nf * (nf - 1.0))
                }
                MutationOp::HeavyTailed(beta) => {
                    let top = (n / 2).max(1);
                    let w: Vec<f64> = (1..=top).map(|a| (a as f64).powf(-beta)).collect();
                    let norm: f64 = w.iter().sum();
                    (1..=top)
                        .zip(&w)
                        .map(|(a, wa)| wa / norm * sbm(a as f64 / nf, i))
                        .sum()
                }
            })
        })
        .collect()
}

/// Expected runtime of the (1+1) EA with static rate `p` on LeadingOnes:
/// `((1-p)^{1-n} - (1-p)) / (2p²)`.
pub fn lo_static_mean(n: usize, p: f64) -> f64 {
    let growth = ((1.0 - n as f64) * (-p).ln_1p()).exp_m1();
    (growth + p) / (2.0 * p * p)
}

/// Static rate minimizing [`lo_static_mean`], by golden-section search on
/// `(1e-9, 0.5)` to relative tolerance `1e-6`.
pub fn optimal_static_rate(n: usize) -> Result<f64> {
    if n < 2 {
        return domain("optimal static rate needs n >= 2");
    }
    let f = |p: f64| lo_static_mean(n, p);
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (1e-9, 0.5);
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while (b - a) > 1e-6 * (a + b) / 2.0 {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    Ok((a + b) / 2.0)
}

/// Result of auditing a static unbiased mixture of `k`-bit flips.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Audit {
    /// `½ Σ 1/qᵢ`, infinite if some `qᵢ = 0`.
    pub expected_runtime: f64,
    /// `expected_runtime >= n²/2 - 1e-6`.
    pub lower_bound_holds: bool,
    /// `Σ qᵢ = Σ_{k>=1} r_k` within `1e-10`.
    pub identity_holds: bool,
}

/// Evaluates the mixture flipping `k` bits with probability `r[k]`,
/// `k = 0..=n`.
pub fn static_unbiased_audit(n: usize, r: &[f64]) -> Result<Audit> {
    if n < 1 {
        return domain("n must be at least 1");
    }
    if r.len() != n + 1 {
        return domain(format!("mixture needs {} weights, got {}", n + 1, r.len()));
    }
    for &rk in r {
        check_prob("mixture weight", rk)?;
    }
    if (compensated_sum(r.iter().copied()) - 1.0).abs() > 1e-12 {
        return domain("mixture weights must sum to 1");
    }
    let q = (0..n)
        .map(|i| {
            Ok(compensated_sum(
                (1..=n).map(|k| r[k] * q_kbit(n, k, i).unwrap_or(0.0)),
            ))
        })
        .collect::<Result<Vec<f64>>>()?;
    let expected_runtime = if q.contains(&0.0) {
        f64::INFINITY
    } else {
        0.5 * compensated_sum(q.iter().map(|qi| 1.0 / qi))
    };
    let active = compensated_sum(r[1..].iter().copied());
    Ok(Audit {
        expected_runtime,
        lower_bound_holds: expected_runtime >= 0.5 * (n * n) as f64 - 1e-6,
        identity_holds: (compensated_sum(q.iter().copied()) - active).abs() <= 1e-10,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn q_kbit_examples() {
        for n in 1..12 {
            for i in 0..n {
                assert!((q_kbit(n, 1, i).unwrap() - 1.0 / n as f64).abs() < 1e-15);
            }
            assert_eq!(q_kbit(n, n, 0).unwrap(), 1.0);
        }
        assert!((q_kbit(4, 2, 1).unwrap() - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(q_kbit(5, 4, 3).unwrap(), 0.0);
        assert!(q_kbit(4, 5, 0).is_err());
        assert!(q_kbit(4, 2, 4).is_err());
    }

    #[test]
    fn optimal_k_examples() {
        assert_eq!(optimal_k(10, 0).unwrap(), 10);
        assert_eq!(optimal_k(10, 4).unwrap(), 2);
        assert_eq!(optimal_k(10, 9).unwrap(), 1);
        assert!(optimal_k(10, 10).is_err());
    }

    #[test]
    fn exact_spec_examples() {
        assert!((lo_exact_spec(&[0.1; 10]).unwrap().mean() - 50.0).abs() < 1e-12);
        assert!((lo_exact_spec(&[0.5]).unwrap().mean() - 1.0).abs() < 1e-15);
        let p = 1.0 / 30.0;
        let q = lo_q_for_operator(&MutationOp::StandardBit(p), 30).unwrap();
        let m = lo_exact_spec(&q).unwrap().mean();
        assert!((m - lo_static_mean(30, p)).abs() < 1e-9);
        let direct: f64 = (0..30).map(|i| 0.5 / ((1.0 - p).powi(i) * p)).sum();
        assert!((m - direct).abs() < 1e-9);
        assert!((m - 767.782).abs() < 1e-3, "{m}");
        assert_eq!(
            lo_exact_spec(&[0.5, 0.0]),
            Err(Error::InfiniteRuntime { level: 1 })
        );
    }

    #[test]
    fn target_spec_examples() {
        let q = [0.1; 10];
        assert_eq!(lo_target_spec(&q, 0).unwrap(), GatedGeomSpec::point_mass(0));
        assert_eq!(lo_target_spec(&q, 10).unwrap(), lo_exact_spec(&q).unwrap());
        assert!((lo_target_spec(&q, 4).unwrap().mean() - 20.0).abs() < 1e-12);
        assert!(lo_target_spec(&q, 11).is_err());
    }

    #[test]
    fn operator_q_examples() {
        assert_eq!(
            lo_q_for_operator(&MutationOp::OneBit, 5).unwrap(),
            vec![0.2; 5]
        );
        assert_eq!(
            lo_q_for_operator(&MutationOp::StandardBit(0.5), 2).unwrap(),
            vec![0.5, 0.25]
        );
        for n in 2..8 {
            let q = lo_q_for_operator(&MutationOp::MixedOneTwo(1.0), n).unwrap();
            assert!(q.iter().all(|&x| (x - 1.0 / n as f64).abs() < 1e-15));
            // The mixture is the convex combination of 1- and 2-bit flips.
            let q = lo_q_for_operator(&MutationOp::MixedOneTwo(0.3), n).unwrap();
            for (i, qi) in q.iter().enumerate() {
                let want = 0.3 * q_kbit(n, 1, i).unwrap() + 0.7 * q_kbit(n, 2, i).unwrap();
                assert!((qi - want).abs() < 1e-15);
            }
        }
        let q = lo_q_for_operator(&MutationOp::FitnessDependentRate, 4).unwrap();
        assert_eq!(q[0], 1.0);
        assert!((q[1] - 0.25).abs() < 1e-15);
        let q =
            lo_q_for_operator(&MutationOp::PositionDependentRates(vec![0.5, 0.5, 0.1]), 3).unwrap();
        assert!((q[2] - 0.025).abs() < 1e-15);
        let q = lo_q_for_operator(&MutationOp::HeavyTailed(2.0), 10).unwrap();
        assert!(q.iter().all(|&x| x > 0.0 && x < 1.0));
    }

    #[test]
    fn static_rate_near_one_point_six() {
        let n = 500;
        let p = optimal_static_rate(n).unwrap();
        assert!((1.55..=1.65).contains(&(p * n as f64)), "{}", p * n as f64);
        assert!(lo_static_mean(n, p) <= lo_static_mean(n, 1.0 / n as f64));
        let ratio = lo_static_mean(n, p) / (n * n) as f64;
        assert!((ratio - 0.77).abs() < 0.03 * 0.77, "{ratio}");
    }

    #[test]
    fn audit_examples() {
        let mut r = vec![0.0; 11];
        r[1] = 1.0;
        let a = static_unbiased_audit(10, &r).unwrap();
        assert!(
            (a.expected_runtime - 50.0).abs() < 1e-12 && a.lower_bound_holds && a.identity_holds
        );
        let mut r = vec![0.0; 11];
        r[2] = 1.0;
        assert!(static_unbiased_audit(10, &r).unwrap().expected_runtime > 50.0 + 1e-9);
        let mut r = vec![0.0; 11];
        r[0] = 1.0;
        let a = static_unbiased_audit(10, &r).unwrap();
        assert!(a.expected_runtime.is_infinite() && a.identity_holds);
        assert!(static_unbiased_audit(10, &[0.5; 11]).is_err());
        assert!(static_unbiased_audit(10, &[1.0]).is_err());
    }

    proptest! {
        #[test]
        fn q_sums_to_one(n in 1usize..=20, k in 1usize..=20) {
            prop_assume!(k <= n);
            let s: f64 = (0..n).map(|i| q_kbit(n, k, i).unwrap()).sum();
            prop_assert!((s - 1.0).abs() <= 1e-12);
        }

        #[test]
        fn optimal_k_is_argmax(n in 1usize..=50, i in 0usize..50) {
            prop_assume!(i < n);
            let best = q_kbit(n, optimal_k(n, i).unwrap(), i).unwrap();
            let max = (1..=n).map(|k| q_kbit(n, k, i).unwrap()).fold(0.0, f64::max);
            prop_assert!(best >= max * (1.0 - 1e-12));
        }
    }
}
