use std::f64::consts::E;
use std::fmt;

use crate::dist::{GatedGeomSpec, GatedTerm};
use crate::error::{check_prob, check_succ, domain, Result};

/// Lower bounds `p_1, ..., p_{m-1}` on the probabilities of leaving each
/// non-optimal fitness level.
#[derive(Debug, Clone, PartialEq)]
pub struct LevelSpec {
    probs: Vec<f64>,
}

impl LevelSpec {
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() {
            return domain("a level partition needs at least one non-optimal level");
        }
        for &p in &probs {
            check_succ("level probability", p)?;
        }
        Ok(LevelSpec { probs })
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }
}

/// Runtime `⪯ Σ Geom(pᵢ)`: offset 0 and one always-on term per level.
pub fn fitness_level_spec(levels: &LevelSpec) -> GatedGeomSpec {
    GatedGeomSpec::geometric_sum(&levels.probs).expect("level probabilities are validated")
}

/// Named dominating-distribution models.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Preset {
    /// (1+1) EA on OneMax: `pᵢ = (n-i)/(en)`, `i = 0..n-1`.
    OneMax { n: u64 },
    /// (1+1) EA minimizing inversions: `Geom(i/(e·C(n,2)))`, `i = 1..C(n,2)`.
    Sorting { n: u64 },
    /// (μ+1) EA on LeadingOnes over states `(a, b)`.
    MuPlusOneLo { n: u64, mu: u64 },
    /// (1+1) EA with rate `1/n` on `Jump_k`.
    Jump { n: u64, k: u64 },
    /// Any mutation-based algorithm with rate `p`: `Geom(pⁿ)`.
    General { n: u64, p: f64 },
    /// Eulerian cycles with `m` edges: `Geom(i/(2em))`, `i = 1..⌊m/3⌋`.
    Eulerian { m: u64 },
    /// (1+λ) EA on OneMax, counting iterations.
    OnePlusLambda { n: u64, lambda: u64 },
    /// Multi-criteria shortest paths: `n-1` levels of `Geom(1/(e(n-1)(n-2)))`.
    Sssp { n: u64 },
    /// Gated lower model `X·Geom(P_k)` for the (1+1) EA on `Jump_k`.
    JumpLower { n: u64, k: u64 },
}

impl Preset {
    pub const IDS: [&'static str; 9] = [
        "onemax",
        "sorting",
        "mu1-lo",
        "jump",
        "general",
        "eulerian",
        "1+lambda",
        "sssp",
        "jump-lower",
    ];

    pub fn id(&self) -> &'static str {
        match self {
            Preset::OneMax { .. } => "onemax",
            Preset::Sorting { .. } => "sorting",
            Preset::MuPlusOneLo { .. } => "mu1-lo",
            Preset::Jump { .. } => "jump",
            Preset::General { .. } => "general",
            Preset::Eulerian { .. } => "eulerian",
            Preset::OnePlusLambda { .. } => "1+lambda",
            Preset::Sssp { .. } => "sssp",
            Preset::JumpLower { .. } => "jump-lower",
        }
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

/// A preset is either a plain level partition or a general gated spec.
#[derive(Debug, Clone, PartialEq)]
pub enum PresetModel {
    Levels(LevelSpec),
    Spec(GatedGeomSpec),
}

impl PresetModel {
    pub fn to_spec(&self) -> GatedGeomSpec {
        match self {
            PresetModel::Levels(l) => fitness_level_spec(l),
            PresetModel::Spec(s) => s.clone(),
        }
    }
}

/// `P_k = n^{-k}(1-1/n)^{n-k}`.
pub fn jump_gap_prob(n: u64, k: u64) -> f64 {
    let nf = n as f64;
    (-(k as f64) * nf.ln() + (n - k) as f64 * (-1.0 / nf).ln_1p()).exp()
}

fn need(cond: bool, msg: &str) -> Result<()> {
    if cond {
        Ok(())
    } else {
        domain(msg.to_string())
    }
}

pub fn preset_levels(preset: &Preset) -> Result<PresetModel> {
    let probs: Vec<f64> = match *preset {
        Preset::OneMax { n } => {
            need(n >= 1, "onemax needs n >= 1")?;
            (0..n).map(|i| (n - i) as f64 / (E * n as f64)).collect()
        }
        Preset::Sorting { n } => {
            need(n >= 2, "sorting needs n >= 2")?;
            let pairs = n * (n - 1) / 2;
            (1..=pairs).map(|i| i as f64 / (E * pairs as f64)).collect()
        }
        Preset::MuPlusOneLo { n, mu } => {
            need(n >= 1 && mu >= 1, "mu1-lo needs n >= 1 and mu >= 1")?;
            let nf = n as f64;
            let big_m = ((nf / (E * nf).ln()).ceil() as u64).clamp(1, mu);
            let muf = mu as f64;
            let mut v = Vec::with_capacity((n * big_m) as usize);
            for a in 0..n {
                let stay = (a as f64 * (-1.0 / nf).ln_1p()).exp();
                for b in 1..big_m {
                    v.push(b as f64 / muf * stay);
                }
                v.push(big_m as f64 / muf / nf * stay);
            }
            v
        }
        Preset::Jump { n, k } => {
            need(
                n >= 2 && k >= 1 && k <= n,
                "jump needs n >= 2 and 1 <= k <= n",
            )?;
            let level = |i: u64| (n - i) as f64 / (E * n as f64);
            let mut v: Vec<f64> = (1..k).map(level).collect();
            v.extend((0..n - k).map(level));
            v.push(jump_gap_prob(n, k));
            v
        }
        Preset::General { n, p } => {
            need(n >= 1, "general needs n >= 1")?;
            check_succ("p", p)?;
            vec![p.powi(n as i32)]
        }
        Preset::Eulerian { m } => {
            need(m >= 3, "eulerian needs m >= 3 edges")?;
            (1..=m / 3)
                .map(|i| i as f64 / (2.0 * E * m as f64))
                .collect()
        }
        Preset::OnePlusLambda { n, lambda } => one_plus_lambda_probs(n, lambda)?,
        Preset::Sssp { n } => {
            need(n >= 3, "sssp needs n >= 3")?;
            let p = 1.0 / (E * (n - 1) as f64 * (n - 2) as f64);
            vec![p; (n - 1) as usize]
        }
        Preset::JumpLower { n, k } => return jump_lower_spec(n, k).map(PresetModel::Spec),
    };
    if probs.contains(&0.0) {
        return domain("a level probability underflowed to 0");
    }
    LevelSpec::new(probs).map(PresetModel::Levels)
}

/// Grouped low levels at `1 - 1/e` followed by the levels near the optimum
/// at `½·λi/(en)`. The group width `t` is at least 1.
fn one_plus_lambda_probs(n: u64, lambda: u64) -> Result<Vec<f64>> {
    need(
        n >= 1 && lambda >= 3,
        "1+lambda needs n >= 1 and lambda >= 3",
    )?;
    let (nf, lf) = (n as f64, lambda as f64);
    let ln_l = lf.ln();
    let t = (((ln_l - 1.0) / (2.0 * ln_l.ln())).floor() as i64).max(1) as f64;
    let big_l = (nf - nf / ln_l).floor().max(0.0);
    let t0 = (big_l / t).ceil() + (nf / ln_l).ceil() - (E * nf / lf).ceil() + 1.0;
    let tail = (E * nf / lf - 1.0).ceil().max(0.0) as u64;
    let mut v = vec![1.0 - 1.0 / E; t0.max(0.0) as usize];
    v.extend((1..=tail).map(|i| 0.5 * lf * i as f64 / (E * nf)));
    if v.is_empty() {
        v.push(1.0 - 1.0 / E);
    }
    Ok(v)
}

/// `X·Geom(P_k)` with `Pr[X = 1] = 1 - exp(-n/8)`, for `2 <= k <= n/4`.
pub fn jump_lower_spec(n: u64, k: u64) -> Result<GatedGeomSpec> {
    if k < 2 || 4 * k > n {
        return domain(format!(
            "jump lower model needs 2 <= k <= n/4 (n = {n}, k = {k})"
        ));
    }
    let gate = -(-(n as f64) / 8.0).exp_m1();
    check_prob("gate", gate)?;
    GatedGeomSpec::new(0, vec![GatedTerm::new(gate, jump_gap_prob(n, k))?])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::harmonic;

    fn probs(p: Preset) -> Vec<f64> {
        match preset_levels(&p).unwrap() {
            PresetModel::Levels(l) => l.probs().to_vec(),
            PresetModel::Spec(_) => panic!("expected levels"),
        }
    }

    #[test]
    fn level_spec_examples() {
        let s = fitness_level_spec(&LevelSpec::new(vec![1.0]).unwrap());
        let d = s.exact_dist(1e-9).unwrap();
        assert_eq!((d.lo(), d.pmf()), (1, &[1.0][..]));
        assert!(LevelSpec::new(vec![]).is_err());
        assert!(LevelSpec::new(vec![0.5, 0.0]).is_err());
    }

    #[test]
    fn onemax_preset() {
        let p = probs(Preset::OneMax { n: 2 });
        assert_eq!(p, vec![2.0 / (2.0 * E), 1.0 / (2.0 * E)]);
        let spec = preset_levels(&Preset::OneMax { n: 10 }).unwrap().to_spec();
        assert!((spec.mean() - 10.0 * E * harmonic(10)).abs() < 1e-9);
    }

    #[test]
    fn general_and_jump_presets() {
        assert_eq!(probs(Preset::General { n: 3, p: 0.5 }), vec![0.125]);
        let p = probs(Preset::Jump { n: 4, k: 2 });
        assert_eq!(p.len(), 4);
        assert!((p[3] - 9.0 / 256.0).abs() < 1e-15);
        assert!((jump_gap_prob(4, 2) - 9.0 / 256.0).abs() < 1e-16);
        assert!(preset_levels(&Preset::General { n: 3, p: 0.0 }).is_err());
    }

    #[test]
    fn sorting_and_eulerian_presets() {
        let p = probs(Preset::Sorting { n: 4 });
        assert_eq!(p.len(), 6);
        assert!((p[5] - 1.0 / E).abs() < 1e-15);
        assert_eq!(probs(Preset::Eulerian { m: 10 }).len(), 3);
        assert!(preset_levels(&Preset::Eulerian { m: 2 }).is_err());
    }

    #[test]
    fn mu_plus_one_preset_mean() {
        // With μ = 1 the model is the (1+1) EA level bound (1/n)(1-1/n)^a.
        let p = probs(Preset::MuPlusOneLo { n: 5, mu: 1 });
        assert_eq!(p.len(), 5);
        assert!((p[2] - 0.2 * 0.8f64.powi(2)).abs() < 1e-15);
        let (n, mu) = (20u64, 5u64);
        let spec = preset_levels(&Preset::MuPlusOneLo { n, mu })
            .unwrap()
            .to_spec();
        let nf = n as f64;
        let bound = E * nf * (2.0 * mu as f64 * (E * nf).ln() + nf);
        assert!(spec.mean() <= bound);
    }

    #[test]
    fn one_plus_lambda_preset_structure() {
        let p = probs(Preset::OnePlusLambda { n: 20, lambda: 8 });
        // t clamps to 1, L = 10, T0 = 10 + 10 - 7 + 1 = 14, tail ⌈20e/8 - 1⌉ = 6.
        assert_eq!(p.len(), 20);
        assert!(p[..14].iter().all(|&x| (x - (1.0 - 1.0 / E)).abs() < 1e-15));
        assert!((p[14] - 0.5 * 8.0 / (E * 20.0)).abs() < 1e-15);
        assert!(preset_levels(&Preset::OnePlusLambda { n: 20, lambda: 2 }).is_err());
        // Large λ groups t > 1 levels together.
        let p = probs(Preset::OnePlusLambda {
            n: 1000,
            lambda: 100_000,
        });
        assert!(p.len() < 1000);
    }

    #[test]
    fn jump_lower_examples() {
        let s = jump_lower_spec(8, 2).unwrap();
        let t = s.terms()[0];
        assert!((t.gate - (1.0 - (-1.0f64).exp())).abs() < 1e-15);
        assert!((t.succ - 0.875f64.powi(6) / 64.0).abs() < 1e-16);
        assert!((t.succ - 0.0070124).abs() < 1e-7);
        assert!(jump_lower_spec(8, 3).is_err());
        assert!(jump_lower_spec(8, 1).is_err());
        assert!(matches!(
            preset_levels(&Preset::JumpLower { n: 8, k: 2 }).unwrap(),
            PresetModel::Spec(_)
        ));
    }

    #[test]
    fn sssp_preset() {
        let p = probs(Preset::Sssp { n: 8 });
        assert_eq!(p.len(), 7);
        assert!((p[0] - 1.0 / (E * 42.0)).abs() < 1e-16);
    }
}
