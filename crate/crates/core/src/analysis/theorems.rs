use std::f64::consts::E;
use std::fmt;
use std::str::FromStr;

use crate::error::{domain, Error, Result};

/// Closed forms witnessing that runtime domination can fail.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Counterexample {
    /// `Pr[T <= 2]` for random search on OneMax: `2^{-n+1} - 2^{-2n}`.
    RsLe2,
    /// `Pr[T <= 2]` for the (1+1) EA with rate `1/n` on OneMax:
    /// `2^{-n+1} - (1-1/n)^n 2^{-n}`.
    EaLe2,
    /// Fitness-proportionate selection of the better individual: `9/(μ+8)`.
    Fitprop,
}

impl Counterexample {
    pub const IDS: [&'static str; 3] = ["rs_le2", "ea_le2", "fitprop"];
}

impl fmt::Display for Counterexample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Counterexample::RsLe2 => "rs_le2",
            Counterexample::EaLe2 => "ea_le2",
            Counterexample::Fitprop => "fitprop",
        })
    }
}

impl FromStr for Counterexample {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "rs_le2" => Ok(Counterexample::RsLe2),
            "ea_le2" => Ok(Counterexample::EaLe2),
            "fitprop" => Ok(Counterexample::Fitprop),
            _ => domain(format!(
                "unknown counterexample {s:?}; valid ids: {}",
                Self::IDS.join(", ")
            )),
        }
    }
}

/// Evaluates a counterexample formula. `n` is the problem size; `mu` is only
/// read by `fitprop`, which also requires `n` to be a multiple of 10.
pub fn counterexample_probs(which: Counterexample, n: u64, mu: u64) -> Result<f64> {
    let nf = n as f64;
    match which {
        Counterexample::RsLe2 | Counterexample::EaLe2 if n < 2 => domain("n must be at least 2"),
        Counterexample::RsLe2 => Ok(2f64.powf(1.0 - nf) - 2f64.powf(-2.0 * nf)),
        Counterexample::EaLe2 => {
            Ok(2f64.powf(1.0 - nf) - (1.0 - 1.0 / nf).powf(nf) * 2f64.powf(-nf))
        }
        Counterexample::Fitprop if mu < 2 || n == 0 || !n.is_multiple_of(10) => {
            domain("fitprop needs mu >= 2 and n a positive multiple of 10")
        }
        Counterexample::Fitprop => Ok(9.0 / (mu as f64 + 8.0)),
    }
}

/// Probability that fitness-proportionate selection picks an individual with
/// fitness at least `threshold`.
pub fn fitprop_select_prob(fitnesses: &[f64], threshold: f64) -> Result<f64> {
    if fitnesses.iter().any(|&f| !(f >= 0.0 && f.is_finite())) {
        return domain("fitnesses must be finite and non-negative");
    }
    let total: f64 = fitnesses.iter().sum();
    if total <= 0.0 {
        return domain("selection undefined: all fitnesses are zero");
    }
    let hit: f64 = fitnesses.iter().filter(|&&f| f >= threshold).sum();
    Ok(hit / total)
}

/// Parameters of the runtime guarantee for the multi-criteria shortest path
/// EA on graphs whose shortest paths need at most `ell` edges.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SsspParams {
    pub n: u64,
    pub delta: f64,
    /// `1/(e(n-1)(n-2))`.
    pub p: f64,
    /// `(1+δ)ℓ/p`.
    pub t0: f64,
    /// `(1 + 1/ln(n-1))·T₀`.
    pub mean_bound: f64,
}

impl SsspParams {
    /// Bound `(n-1)^{-ε}` on `Pr[T >= (1+ε)T₀]`.
    pub fn tail(&self, eps: f64) -> f64 {
        ((self.n - 1) as f64).powf(-eps).clamp(0.0, 1.0)
    }
}

pub fn sssp_theorem_params(n: u64, ell: u64) -> Result<SsspParams> {
    if n < 4 || ell < 2 {
        return domain(format!("need n >= 4 and ell >= 2 (n = {n}, ell = {ell})"));
    }
    let ln = ((n - 1) as f64).ln();
    let x = 4.0 * ln / (ell - 1) as f64;
    let delta = x.max(x.sqrt());
    let p = 1.0 / (E * (n - 1) as f64 * (n - 2) as f64);
    let t0 = (1.0 + delta) * ell as f64 / p;
    Ok(SsspParams {
        n,
        delta,
        p,
        t0,
        mean_bound: (1.0 + 1.0 / ln) * t0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counterexample_values() {
        assert_eq!(
            counterexample_probs(Counterexample::RsLe2, 4, 0).unwrap(),
            0.12109375
        );
        let ea = counterexample_probs(Counterexample::EaLe2, 4, 0).unwrap();
        assert!((ea - (0.125 - 0.75f64.powi(4) * 0.0625)).abs() < 1e-16);
        assert!((ea - 0.105225).abs() < 1e-6);
        assert!(
            (counterexample_probs(Counterexample::Fitprop, 10, 2).unwrap() - 0.9).abs() < 1e-16
        );
        assert!(counterexample_probs(Counterexample::Fitprop, 15, 2).is_err());
        assert!(counterexample_probs(Counterexample::RsLe2, 1, 0).is_err());
        assert_eq!(
            "ea_le2".parse::<Counterexample>().unwrap(),
            Counterexample::EaLe2
        );
        assert!("x".parse::<Counterexample>().is_err());
    }

    #[test]
    fn fitprop_examples() {
        assert_eq!(fitprop_select_prob(&[8.0, 0.0], 8.0).unwrap(), 1.0);
        assert_eq!(fitprop_select_prob(&[9.0, 1.0], 8.0).unwrap(), 0.9);
        assert_eq!(fitprop_select_prob(&[9.0, 1.0], 0.0).unwrap(), 1.0);
        assert!(fitprop_select_prob(&[0.0, 0.0], 1.0).is_err());
        assert!(fitprop_select_prob(&[-1.0, 2.0], 1.0).is_err());
    }

    #[test]
    fn fitprop_formula_matches_selection() {
        // One individual at 0.8n and μ-1 at 0, each improved by 0.1n.
        let n = 30.0;
        for mu in 2..40usize {
            let mut before = vec![0.0; mu];
            before[0] = 0.8 * n;
            assert_eq!(fitprop_select_prob(&before, 0.8 * n).unwrap(), 1.0);
            let after: Vec<f64> = before.iter().map(|f| f + 0.1 * n).collect();
            let got = fitprop_select_prob(&after, 0.8 * n).unwrap();
            let want = counterexample_probs(Counterexample::Fitprop, 30, mu as u64).unwrap();
            assert!((got - want).abs() < 1e-15, "mu={mu}: {got} vs {want}");
        }
    }

    #[test]
    fn sssp_params_examples() {
        let s = sssp_theorem_params(8, 7).unwrap();
        let x = 4.0 * 7f64.ln() / 6.0;
        assert!((s.delta - x.max(x.sqrt())).abs() < 1e-15);
        assert!((s.delta - 1.2972).abs() < 1e-4);
        assert!((s.p - 1.0 / (E * 42.0)).abs() < 1e-18);
        assert!((s.mean_bound / s.t0 - (1.0 + 1.0 / 7f64.ln())).abs() < 1e-15);
        assert_eq!(s.tail(0.0), 1.0);
        assert!((s.tail(1.0) - 1.0 / 7.0).abs() < 1e-15);
        assert!(sssp_theorem_params(3, 2).is_err());
        assert!(sssp_theorem_params(8, 1).is_err());
    }
}
