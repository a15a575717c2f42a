use std::fmt;
use std::str::FromStr;

use rand::seq::index::sample;
use rand::Rng;

use crate::dist::sample_geom;
use crate::error::{check_prob, domain, Error, Result};

/// Mutation operators on bit strings.
#[derive(Debug, Clone, PartialEq)]
pub enum MutationOp {
    /// Flip one uniformly chosen bit.
    OneBit,
    /// Flip `k` distinct uniformly chosen bits.
    KBit(usize),
    /// Flip each bit independently with probability `p`.
    StandardBit(f64),
    /// Flip exactly bit `i` with probability `p[i]`, and nothing with
    /// probability `1 - Σ p`.
    PositionDependentOneBit(Vec<f64>),
    /// Flip bit `i` independently with probability `p[i]`.
    PositionDependentRates(Vec<f64>),
    /// Flip `⌊n/(i+1)⌋` bits at fitness `i`.
    FitnessDependentK,
    /// Standard-bit mutation with rate `1/(i+1)` at fitness `i`.
    FitnessDependentRate,
    /// One bit with probability `P`, otherwise two distinct bits.
    MixedOneTwo(f64),
    /// Standard-bit mutation with rate `α/n`, `α` drawn from a power law
    /// with exponent `β` on `1..=max(1, n/2)`.
    HeavyTailed(f64),
}

impl MutationOp {
    pub fn validate(&self, n: usize) -> Result<()> {
        if n < 1 {
            return domain("n must be at least 1");
        }
        match self {
            MutationOp::KBit(k) if *k < 1 || *k > n => {
                domain(format!("k = {k} must lie in [1, {n}]"))
            }
            MutationOp::StandardBit(p) | MutationOp::MixedOneTwo(p) => {
                check_prob("mutation probability", *p)
            }
            MutationOp::PositionDependentOneBit(p) | MutationOp::PositionDependentRates(p) => {
                if p.len() != n {
                    return domain(format!(
                        "expected {n} position probabilities, got {}",
                        p.len()
                    ));
                }
                for &pi in p {
                    check_prob("position probability", pi)?;
                }
                if matches!(self, MutationOp::PositionDependentOneBit(_))
                    && p.iter().sum::<f64>() > 1.0 + 1e-12
                {
                    return domain("one-bit position probabilities must sum to at most 1");
                }
                Ok(())
            }
            MutationOp::HeavyTailed(beta) if !(*beta > 1.0 && beta.is_finite()) => {
                domain(format!("power-law exponent {beta} must exceed 1"))
            }
            _ => Ok(()),
        }
    }

    /// Writes the positions to flip into `out` (distinct, unordered).
    /// `fitness` is only read by the fitness-dependent variants.
    pub(crate) fn flip_positions<R: Rng + ?Sized>(
        &self,
        n: usize,
        fitness: usize,
        rng: &mut R,
        out: &mut Vec<usize>,
    ) {
        out.clear();
        match self {
            MutationOp::OneBit => out.push(rng.random_range(0..n)),
            MutationOp::KBit(k) => distinct(n, *k, rng, out),
            MutationOp::StandardBit(p) => standard_bit(n, *p, rng, out),
            MutationOp::PositionDependentOneBit(p) => {
                let u: f64 = rng.random();
                let mut acc = 0.0;
                for (i, &pi) in p.iter().enumerate() {
                    acc += pi;
                    if u < acc {
                        out.push(i);
                        break;
                    }
                }
            }
            MutationOp::PositionDependentRates(p) => {
                for (i, &pi) in p.iter().enumerate() {
                    if rng.random::<f64>() < pi {
                        out.push(i);
                    }
                }
            }
            MutationOp::FitnessDependentK => distinct(n, n / (fitness + 1), rng, out),
            MutationOp::FitnessDependentRate => {
                standard_bit(n, 1.0 / (fitness as f64 + 1.0), rng, out)
            }
            MutationOp::MixedOneTwo(p) => {
                let k = if n < 2 || rng.random::<f64>() < *p {
                    1
                } else {
                    2
                };
                distinct(n, k, rng, out);
            }
            MutationOp::HeavyTailed(beta) => {
                let alpha = power_law(n, *beta, rng);
                standard_bit(n, alpha as f64 / n as f64, rng, out);
            }
        }
    }
}

fn distinct<R: Rng + ?Sized>(n: usize, k: usize, rng: &mut R, out: &mut Vec<usize>) {
    match k {
        0 => {}
        1 => out.push(rng.random_range(0..n)),
        _ => out.extend(sample(rng, n, k.min(n)).iter()),
    }
}

/// Skips between flipped positions with geometric gaps.
fn standard_bit<R: Rng + ?Sized>(n: usize, p: f64, rng: &mut R, out: &mut Vec<usize>) {
    if p <= 0.0 {
        return;
    }
    if p >= 1.0 {
        out.extend(0..n);
        return;
    }
    let mut i = sample_geom(p, rng) - 1;
    while i < n as u64 {
        out.push(i as usize);
        i += sample_geom(p, rng);
    }
}

fn power_law<R: Rng + ?Sized>(n: usize, beta: f64, rng: &mut R) -> usize {
    let top = (n / 2).max(1);
    let norm: f64 = (1..=top).map(|a| (a as f64).powf(-beta)).sum();
    let u = rng.random::<f64>() * norm;
    let mut acc = 0.0;
    for a in 1..=top {
        acc += (a as f64).powf(-beta);
        if u < acc {
            return a;
        }
    }
    top
}

/// Returns a mutated copy of `x`; `fitness` is the parent's fitness.
pub fn mutate<R: Rng + ?Sized>(
    x: &[bool],
    op: &MutationOp,
    fitness: usize,
    rng: &mut R,
) -> Result<Vec<bool>> {
    op.validate(x.len())?;
    let mut flips = Vec::new();
    op.flip_positions(x.len(), fitness, rng, &mut flips);
    let mut y = x.to_vec();
    for i in flips {
        y[i] = !y[i];
    }
    Ok(y)
}

fn fmt_list(p: &[f64]) -> String {
    p.iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

impl fmt::Display for MutationOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MutationOp::OneBit => write!(f, "onebit"),
            MutationOp::KBit(k) => write!(f, "kbit:{k}"),
            MutationOp::StandardBit(p) => write!(f, "sbm:{p}"),
            MutationOp::PositionDependentOneBit(p) => write!(f, "pos1:{}", fmt_list(p)),
            MutationOp::PositionDependentRates(p) => write!(f, "posr:{}", fmt_list(p)),
            MutationOp::FitnessDependentK => write!(f, "fdk"),
            MutationOp::FitnessDependentRate => write!(f, "fdr"),
            MutationOp::MixedOneTwo(p) => write!(f, "mixed:{p}"),
            MutationOp::HeavyTailed(b) => write!(f, "heavy:{b}"),
        }
    }
}

impl FromStr for MutationOp {
    type Err = Error;

    /// Accepts `onebit`, `kbit:K`, `sbm:P`, `pos1:P1,..,Pn`, `posr:P1,..,Pn`,
    /// `fdk`, `fdr`, `mixed:P` and `heavy:BETA`.
    fn from_str(s: &str) -> Result<Self> {
        let (name, arg) = match s.split_once(':') {
            Some((a, b)) => (a, Some(b)),
            None => (s, None),
        };
        let num = |a: Option<&str>| -> Result<f64> {
            a.and_then(|v| v.trim().parse::<f64>().ok())
                .ok_or_else(|| Error::Parse(format!("operator {s:?} needs a numeric argument")))
        };
        let list = |a: Option<&str>| -> Result<Vec<f64>> {
            a.ok_or_else(|| Error::Parse(format!("operator {s:?} needs a probability list")))?
                .split(',')
                .map(|v| {
                    v.trim()
                        .parse::<f64>()
                        .map_err(|_| Error::Parse(format!("bad probability {v:?}")))
                })
                .collect()
        };
        match name {
            "onebit" => Ok(MutationOp::OneBit),
            "kbit" => {
                let k = num(arg)?;
                if k.fract() != 0.0 || k < 0.0 {
                    return Err(Error::Parse(format!("k must be a positive integer in {s:?}")));
                }
                Ok(MutationOp::KBit(k as usize))
            }
            "sbm" => Ok(MutationOp::StandardBit(num(arg)?)),
            "pos1" => Ok(MutationOp::PositionDependentOneBit(list(arg)?)),
            "posr" => Ok(MutationOp::PositionDependentRates(list(arg)?)),
            "fdk" => Ok(MutationOp::FitnessDependentK),
            "fdr" => Ok(MutationOp::FitnessDependentRate),
            "mixed" => Ok(MutationOp::MixedOneTwo(num(arg)?)),
            "heavy" => Ok(MutationOp::HeavyTailed(num(arg)?)),
            _ => Err(Error::Domain(format!(
                "unknown operator {s:?}; valid ids: onebit, kbit:K, sbm:P, pos1:P1,..,Pn, posr:P1,..,Pn, fdk, fdr, mixed:P, heavy:BETA"
            ))),
        }
    }
}
