//! Tail bounds for sums of independent geometric random variables.
//!
//! Every formula is returned clamped to `[0, 1]`. [`validate_bound`] and
//! [`validate_lower_bound`] compare a bound with the exact tail obtained from
//! [`GatedGeomSpec::exact_dist`].

use std::fmt;
use std::str::FromStr;

use crate::dist::{GatedGeomSpec, GatedTerm};
use crate::error::{check_succ, domain, Error, Result};
use crate::numeric::{harmonic, pow_one_minus};

/// Truncation budget used by the validators.
pub const VALIDATION_EPS: f64 = 1e-10;

/// Stable identifiers of the bound families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BoundFamily {
    Janson1,
    Janson2,
    Scheideler,
    Weak,
    Equal,
    Witt,
    Harmonic,
    HarmonicSum,
    Coupon,
    LowerJanson,
    LowerMiddle,
    LowerScheideler,
}

impl BoundFamily {
    pub const ALL: [BoundFamily; 12] = [
        BoundFamily::Janson1,
        BoundFamily::Janson2,
        BoundFamily::Scheideler,
        BoundFamily::Weak,
        BoundFamily::Equal,
        BoundFamily::Witt,
        BoundFamily::Harmonic,
        BoundFamily::HarmonicSum,
        BoundFamily::Coupon,
        BoundFamily::LowerJanson,
        BoundFamily::LowerMiddle,
        BoundFamily::LowerScheideler,
    ];

    pub fn id(self) -> &'static str {
        match self {
            BoundFamily::Janson1 => "janson1",
            BoundFamily::Janson2 => "janson2",
            BoundFamily::Scheideler => "scheideler",
            BoundFamily::Weak => "weak",
            BoundFamily::Equal => "equal",
            BoundFamily::Witt => "witt",
            BoundFamily::Harmonic => "harmonic",
            BoundFamily::HarmonicSum => "harmonic-sum",
            BoundFamily::Coupon => "coupon",
            BoundFamily::LowerJanson => "lower-janson",
            BoundFamily::LowerMiddle => "lower-middle",
            BoundFamily::LowerScheideler => "lower-scheideler",
        }
    }

    pub fn upper(self) -> Option<UpperFamily> {
        match self {
            BoundFamily::Janson1 => Some(UpperFamily::Janson1),
            BoundFamily::Janson2 => Some(UpperFamily::Janson2),
            BoundFamily::Scheideler => Some(UpperFamily::Scheideler),
            BoundFamily::Weak => Some(UpperFamily::Weak),
            BoundFamily::Equal => Some(UpperFamily::Equal),
            _ => None,
        }
    }

    pub fn lower(self) -> Option<LowerFamily> {
        match self {
            BoundFamily::LowerJanson => Some(LowerFamily::Janson),
            BoundFamily::LowerMiddle => Some(LowerFamily::Middle),
            BoundFamily::LowerScheideler => Some(LowerFamily::Scheideler),
            _ => None,
        }
    }
}

impl fmt::Display for BoundFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for BoundFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        BoundFamily::ALL
            .iter()
            .copied()
            .find(|f| f.id() == s)
            .ok_or_else(|| {
                let ids: Vec<_> = BoundFamily::ALL.iter().map(|f| f.id()).collect();
                Error::Domain(format!(
                    "unknown bound family {s:?}; valid ids: {}",
                    ids.join(", ")
                ))
            })
    }
}

/// Upper-tail bounds on `Pr[X >= (1+δ)μ]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UpperFamily {
    Janson1,
    Janson2,
    Scheideler,
    Weak,
    /// Only valid when all success probabilities coincide.
    Equal,
}

/// Lower-tail bounds on `Pr[X <= (1-δ)μ]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LowerFamily {
    Janson,
    Middle,
    Scheideler,
}

fn clamp01(x: f64) -> f64 {
    if x.is_nan() {
        1.0
    } else {
        x.clamp(0.0, 1.0)
    }
}

fn check_nonneg(name: &str, x: f64) -> Result<()> {
    if x >= 0.0 && x.is_finite() {
        Ok(())
    } else {
        domain(format!("{name} = {x} must be finite and non-negative"))
    }
}

/// Bound on `Pr[X >= (1+δ)μ]` for `X` a sum of `n` independent geometric
/// variables with smallest success probability `p_min` and mean `mu`.
pub fn geom_sum_upper(
    family: UpperFamily,
    n: usize,
    p_min: f64,
    mu: f64,
    delta: f64,
) -> Result<f64> {
    check_nonneg("delta", delta)?;
    check_succ("p_min", p_min)?;
    if n < 1 {
        return domain("n must be at least 1");
    }
    if !(mu >= n as f64 * (1.0 - 1e-12)) {
        return domain(format!("mu = {mu} must be at least n = {n}"));
    }
    let nf = n as f64;
    let x = delta * mu * p_min;
    let v = match family {
        UpperFamily::Janson1 => pow_one_minus(p_min, mu * (delta - delta.ln_1p())) / (1.0 + delta),
        UpperFamily::Janson2 => (-p_min * mu * (delta - delta.ln_1p())).exp(),
        UpperFamily::Scheideler => (nf * (x / nf).ln_1p() - x).exp(),
        UpperFamily::Weak => (-(x * x) / (2.0 * nf * (1.0 + x / nf))).exp(),
        UpperFamily::Equal => (-(delta * delta / 2.0) * (nf - 1.0) / (1.0 + delta)).exp(),
    };
    Ok(clamp01(v))
}

/// Bound on `Pr[X <= (1-δ)μ]` for `0 <= δ <= 1`.
pub fn geom_sum_lower(family: LowerFamily, p_min: f64, mu: f64, delta: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&delta) {
        return domain(format!("delta = {delta} must lie in [0, 1]"));
    }
    check_succ("p_min", p_min)?;
    check_nonneg("mu", mu)?;
    let x = p_min * mu;
    let v = match family {
        // (1-δ)^x · e^{δx}; the limit at δ = 1 is 0.
        LowerFamily::Janson => {
            if delta >= 1.0 {
                if x > 0.0 {
                    0.0
                } else {
                    1.0
                }
            } else {
                (x * ((-delta).ln_1p() + delta)).exp()
            }
        }
        LowerFamily::Middle => (-(delta * delta * x) / (2.0 - 4.0 * delta / 3.0)).exp(),
        LowerFamily::Scheideler => (-0.5 * delta * delta * x).exp(),
    };
    Ok(clamp01(v))
}

/// Both tails from the variance-sensitive bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WittBounds {
    /// Bound on `Pr[X >= E[X] + λ]`.
    pub upper: f64,
    /// Bound on `Pr[X <= E[X] - λ]`.
    pub lower: f64,
    pub upper_threshold: f64,
    pub lower_threshold: f64,
}

/// `s = Σ 1/pᵢ²`, `expect = E[X]`.
pub fn witt_bounds(s: f64, p_min: f64, expect: f64, lambda: f64) -> Result<WittBounds> {
    check_nonneg("s", s)?;
    check_nonneg("lambda", lambda)?;
    check_nonneg("expect", expect)?;
    check_succ("p_min", p_min)?;
    let (upper, lower) = if lambda == 0.0 {
        (1.0, 1.0)
    } else if s == 0.0 {
        (0.0, 0.0)
    } else {
        let m = (lambda * lambda / s).min(lambda * p_min);
        ((-0.25 * m).exp(), (-(lambda * lambda) / (2.0 * s)).exp())
    };
    Ok(WittBounds {
        upper: clamp01(upper),
        lower: clamp01(lower),
        upper_threshold: expect + lambda,
        lower_threshold: expect - lambda,
    })
}

/// Guarantees for a sum of `n` geometric variables with `pᵢ >= C·i/n`.
#[derive(Debug, Clone, PartialEq)]
pub struct HarmonicBound {
    /// `(1/C)·n·H_n`.
    pub mean_bound: f64,
    /// `n^{-δ}`, bounding `Pr[X >= threshold]`.
    pub tail_bound: f64,
    /// `(1+δ)(1/C)·n·ln n`.
    pub threshold: f64,
    /// `⌈(1/C) n ln n⌉ + Geom(C/n)`.
    pub dominating_spec: GatedGeomSpec,
}

pub fn harmonic_bound(n: u64, c: f64, delta: f64) -> Result<HarmonicBound> {
    if n < 2 {
        return domain("harmonic bound needs n >= 2");
    }
    check_harmonic_c(c)?;
    check_nonneg("delta", delta)?;
    let nf = n as f64;
    let base = nf * nf.ln() / c;
    let dominating_spec = GatedGeomSpec::new(base.ceil() as u64, vec![GatedTerm::always(c / nf)?])?;
    Ok(HarmonicBound {
        mean_bound: nf * harmonic(n) / c,
        tail_bound: clamp01(nf.powf(-delta)),
        threshold: (1.0 + delta) * base,
        dominating_spec,
    })
}

fn check_harmonic_c(c: f64) -> Result<()> {
    if c > 0.0 && c <= 1.0 {
        Ok(())
    } else {
        domain(format!("C = {c} must lie in (0, 1]"))
    }
}

/// Bound on `Pr[Y >= (1/C)(ln n + 1)·n·m + λ]` for `Y` a sum of `m`
/// independent harmonic-type sums.
pub fn harmonic_sum_bound(n: u64, m: u64, c: f64, lambda: f64) -> Result<f64> {
    if n < 2 {
        return domain("n must be at least 2");
    }
    if m < 1 {
        return domain("m must be at least 1");
    }
    check_harmonic_c(c)?;
    check_nonneg("lambda", lambda)?;
    let (nf, mf) = (n as f64, m as f64);
    let num = lambda * lambda * c * c;
    let den = 2.0 * nf * nf * mf * (1.0 + lambda * c / (nf * mf));
    Ok(clamp01((-num / den).exp()))
}

/// Threshold `(1/C)(ln n + 1)·n·m + λ` matching [`harmonic_sum_bound`].
pub fn harmonic_sum_threshold(n: u64, m: u64, c: f64, lambda: f64) -> f64 {
    ((n as f64).ln() + 1.0) * n as f64 * m as f64 / c + lambda
}

/// Mean and tail of a sum of `m` independent coupon collector times `D_n^k`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CouponBound {
    /// `m·n·H_k`.
    pub mean: f64,
    /// Bound on `Pr[Y >= threshold]`.
    pub tail_bound: f64,
    /// `m·n·(ln k + 1) + δ·n`.
    pub threshold: f64,
}

pub fn coupon_sum_bound(n: u64, m: u64, k: u64, delta: f64) -> Result<CouponBound> {
    if k < 1 || k > n {
        return domain(format!("k = {k} must lie in [1, n = {n}]"));
    }
    if m < 1 {
        return domain("m must be at least 1");
    }
    check_nonneg("delta", delta)?;
    let (nf, mf, kf) = (n as f64, m as f64, k as f64);
    Ok(CouponBound {
        mean: mf * nf * harmonic(k),
        tail_bound: clamp01((-(delta * delta) / (2.0 * mf * (1.0 + delta / mf))).exp()),
        threshold: mf * nf * (kf.ln() + 1.0) + delta * nf,
    })
}

/// `D_n^k = Σ_{i=1}^k Geom(i/n)`.
pub fn coupon_spec(n: u64, k: u64) -> Result<GatedGeomSpec> {
    if k < 1 || k > n {
        return domain(format!("k = {k} must lie in [1, n = {n}]"));
    }
    let probs: Vec<f64> = (1..=k).map(|i| i as f64 / n as f64).collect();
    GatedGeomSpec::geometric_sum(&probs)
}

/// Result of comparing a bound with the exact tail probability.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundCheck {
    pub exact: f64,
    pub bound: f64,
    pub holds: bool,
}

/// Smallest integer `t` with `t >= x`, i.e. `Pr[X >= x] = Pr[X >= t]`.
pub fn integer_threshold_at_least(x: f64) -> u64 {
    (x - 1e-9).ceil().max(0.0) as u64
}

/// Largest integer `t <= x`, or `None` when `x < 0`.
pub fn integer_threshold_at_most(x: f64) -> Option<u64> {
    let t = (x + 1e-9).floor();
    if t < 0.0 {
        None
    } else {
        Some(t as u64)
    }
}

/// Checks `Pr[X >= threshold] <= bound + 10·eps` by exact DP.
pub fn validate_bound(spec: &GatedGeomSpec, threshold: u64, bound: f64) -> Result<BoundCheck> {
    let d = spec.exact_dist(VALIDATION_EPS)?;
    let exact = d.upper_tail(threshold);
    Ok(BoundCheck {
        exact,
        bound,
        holds: exact <= bound + 10.0 * VALIDATION_EPS,
    })
}

/// Checks `Pr[X <= threshold] <= bound + 10·eps` by exact DP.
pub fn validate_lower_bound(
    spec: &GatedGeomSpec,
    threshold: Option<u64>,
    bound: f64,
) -> Result<BoundCheck> {
    let d = spec.exact_dist(VALIDATION_EPS)?;
    let exact = threshold.map_or(0.0, |t| d.cdf(t));
    Ok(BoundCheck {
        exact,
        bound,
        holds: exact <= bound + 10.0 * VALIDATION_EPS,
    })
}
