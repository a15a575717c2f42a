//! Geometric distributions, gated geometric sums and their exact distributions.
//!
//! A [`GatedGeomSpec`] describes `offset + Σ Xᵢ·Geom(pᵢ)` with independent
//! Bernoulli gates `Xᵢ`. It is the common shape of every runtime model in this
//! crate. [`GatedGeomSpec::exact_dist`] turns a spec into an explicit
//! [`DiscreteDist`] with a bounded amount of truncated tail mass, which is what
//! domination checks and bound validation operate on.

use std::io::{BufRead, Write};

use rand::distr::Open01;
use rand::Rng;

use crate::error::{check_prob, check_succ, domain, Error, Result};
use crate::numeric::{compensated_sum, pow_one_minus};
use crate::rng::rng_from_seed;

/// Default cap on the number of support points of an exact distribution.
pub const DEFAULT_SUPPORT_CAP: usize = 10_000_000;

/// Absolute tolerance used when comparing CDF values that should agree exactly
/// but were reached through different floating-point paths.
pub const CDF_TOL: f64 = 1e-12;

/// `Pr[Geom(p) = k] = (1-p)^(k-1) p`.
pub fn geom_pmf(p: f64, k: u64) -> Result<f64> {
    check_succ("p", p)?;
    if k < 1 {
        return domain("geometric support starts at k = 1");
    }
    Ok(pow_one_minus(p, (k - 1) as f64) * p)
}

/// `Pr[Geom(p) >= k] = (1-p)^(k-1)`.
pub fn geom_tail(p: f64, k: u64) -> Result<f64> {
    check_succ("p", p)?;
    if k < 1 {
        return domain("geometric support starts at k = 1");
    }
    Ok(pow_one_minus(p, (k - 1) as f64))
}

/// Inverse-transform draw `⌈ln u / ln(1-p)⌉` for a uniform `u ∈ (0,1)`.
pub fn geom_from_uniform(p: f64, u: f64) -> u64 {
    if p >= 1.0 {
        return 1;
    }
    let v = (u.ln() / (-p).ln_1p()).ceil();
    if v >= u64::MAX as f64 {
        u64::MAX
    } else {
        (v as u64).max(1)
    }
}

/// Draws from `Geom(p)` in O(1).
pub fn sample_geom<R: Rng + ?Sized>(p: f64, rng: &mut R) -> u64 {
    let u: f64 = rng.sample(Open01);
    geom_from_uniform(p, u)
}

/// One summand `X·Geom(succ)` with `Pr[X = 1] = gate`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GatedTerm {
    pub gate: f64,
    pub succ: f64,
}

impl GatedTerm {
    pub fn new(gate: f64, succ: f64) -> Result<Self> {
        check_prob("gate", gate)?;
        check_succ("succ", succ)?;
        Ok(GatedTerm { gate, succ })
    }

    /// An ungated `Geom(succ)` term.
    pub fn always(succ: f64) -> Result<Self> {
        Self::new(1.0, succ)
    }
}

/// `offset + Σᵢ Xᵢ·Geom(succᵢ)`, all summands independent.
#[derive(Debug, Clone, PartialEq)]
pub struct GatedGeomSpec {
    offset: u64,
    terms: Vec<GatedTerm>,
}

impl GatedGeomSpec {
    pub fn new(offset: u64, terms: Vec<GatedTerm>) -> Result<Self> {
        for t in &terms {
            GatedTerm::new(t.gate, t.succ)?;
        }
        Ok(GatedGeomSpec { offset, terms })
    }

    /// Plain sum of independent geometric variables.
    pub fn geometric_sum(succ: &[f64]) -> Result<Self> {
        let terms = succ
            .iter()
            .map(|&p| GatedTerm::always(p))
            .collect::<Result<Vec<_>>>()?;
        Ok(GatedGeomSpec { offset: 0, terms })
    }

    pub fn point_mass(offset: u64) -> Self {
        GatedGeomSpec {
            offset,
            terms: Vec::new(),
        }
    }

    pub fn offset(&self) -> u64 {
        self.offset
    }

    pub fn terms(&self) -> &[GatedTerm] {
        &self.terms
    }

    /// Independent sum of `self` and `other`.
    pub fn plus(&self, other: &GatedGeomSpec) -> GatedGeomSpec {
        let mut terms = self.terms.clone();
        terms.extend_from_slice(&other.terms);
        GatedGeomSpec {
            offset: self.offset + other.offset,
            terms,
        }
    }

    /// Sum of `copies` independent copies of `self`.
    pub fn repeat(&self, copies: usize) -> GatedGeomSpec {
        let mut terms = Vec::with_capacity(self.terms.len() * copies);
        for _ in 0..copies {
            terms.extend_from_slice(&self.terms);
        }
        GatedGeomSpec {
            offset: self.offset * copies as u64,
            terms,
        }
    }

    /// `offset + Σ gateᵢ / succᵢ`.
    pub fn mean(&self) -> f64 {
        self.offset as f64 + compensated_sum(self.terms.iter().map(|t| t.gate / t.succ))
    }

    /// `Σ (gateᵢ(2 - succᵢ) - gateᵢ²) / succᵢ²`.
    pub fn variance(&self) -> f64 {
        compensated_sum(
            self.terms
                .iter()
                .map(|t| (t.gate * (2.0 - t.succ) - t.gate * t.gate) / (t.succ * t.succ)),
        )
    }

    /// Smallest success probability among terms that can fire.
    pub fn min_succ(&self) -> Option<f64> {
        self.terms
            .iter()
            .filter(|t| t.gate > 0.0)
            .map(|t| t.succ)
            .min_by(f64::total_cmp)
    }

    /// `Σ 1/succᵢ²` over terms that can fire.
    pub fn sum_inv_sq(&self) -> f64 {
        compensated_sum(
            self.terms
                .iter()
                .filter(|t| t.gate > 0.0)
                .map(|t| 1.0 / (t.succ * t.succ)),
        )
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        let mut total = self.offset;
        for t in &self.terms {
            let fires = t.gate >= 1.0 || (t.gate > 0.0 && rng.random::<f64>() < t.gate);
            if fires {
                total = total.saturating_add(sample_geom(t.succ, rng));
            }
        }
        total
    }

    pub fn exact_dist(&self, eps: f64) -> Result<DiscreteDist> {
        self.exact_dist_with_cap(eps, DEFAULT_SUPPORT_CAP)
    }

    /// Exact PMF by sequential convolution.
    ///
    /// Each fired geometric is cut at its `1 - eps/(2m)` quantile (m = number
    /// of terms that can fire) and the removed mass is booked as `tail_mass`,
    /// so `tail_mass <= eps/2`. `eps = 0` is accepted only when the support is
    /// finite, i.e. every term that can fire has `succ = 1`.
    pub fn exact_dist_with_cap(&self, eps: f64, cap: usize) -> Result<DiscreteDist> {
        let active: Vec<GatedTerm> = self
            .terms
            .iter()
            .copied()
            .filter(|t| t.gate > 0.0)
            .collect();
        if eps == 0.0 {
            if active.iter().any(|t| t.succ < 1.0) {
                return domain("eps = 0 requires a finite support (all succ = 1)");
            }
        } else if !(eps > 0.0 && eps <= 0.1) {
            return domain(format!("eps = {eps} must lie in (0, 0.1]"));
        }
        let budget = if active.is_empty() {
            0.0
        } else {
            eps / (2.0 * active.len() as f64)
        };

        let mut lo = self.offset;
        let mut pmf = vec![1.0_f64];
        let mut tail = 0.0_f64;
        let mut mass = 1.0_f64;
        for t in &active {
            let cut = truncation_point(t.succ, budget);
            if pmf.len().saturating_add(cut) > cap {
                return Err(Error::Resource(format!(
                    "support would exceed {cap} points (term succ = {})",
                    t.succ
                )));
            }
            let next = convolve_truncated_geom(&pmf, t.gate, t.succ, cut);
            let dropped = t.gate * pow_one_minus(t.succ, cut as f64) * mass;
            tail += dropped;
            mass -= dropped;
            pmf = next;
            if t.gate >= 1.0 {
                pmf.remove(0);
                lo += 1;
            }
        }
        Ok(DiscreteDist {
            lo,
            pmf,
            tail_mass: tail,
            eps,
        })
    }
}

/// Smallest `K >= 1` with `(1-p)^K <= budget`.
fn truncation_point(p: f64, budget: f64) -> usize {
    if p >= 1.0 {
        return 1;
    }
    let k = (budget.ln() / (-p).ln_1p()).ceil();
    if !k.is_finite() || k >= usize::MAX as f64 / 2.0 {
        usize::MAX / 2
    } else {
        (k as usize).max(1)
    }
}

/// `(1-g)·f + g·(f * Geom_K(p))` where `Geom_K` is `Geom(p)` restricted to
/// `1..=K` (not renormalised). Runs in O(len + K) through the recurrence
/// `h[j] = (1-p)h[j-1] + p f[j-1] - p(1-p)^K f[j-1-K]`.
fn convolve_truncated_geom(f: &[f64], gate: f64, p: f64, cut: usize) -> Vec<f64> {
    let len = f.len() + cut;
    let q = 1.0 - p;
    let qk = pow_one_minus(p, cut as f64);
    let mut out = vec![0.0_f64; len];
    let mut h = 0.0_f64;
    for j in 0..len {
        if j >= 1 {
            let add = f.get(j - 1).copied().unwrap_or(0.0);
            let sub = if j > cut {
                f.get(j - 1 - cut).copied().unwrap_or(0.0)
            } else {
                0.0
            };
            h = (q * h + p * add - p * qk * sub).max(0.0);
        }
        let own = f.get(j).copied().unwrap_or(0.0);
        out[j] = (1.0 - gate) * own + gate * h;
    }
    out
}

/// Draws one value of `spec` from a generator seeded with `seed`.
pub fn sample_spec(spec: &GatedGeomSpec, seed: u64) -> u64 {
    let mut rng = rng_from_seed(seed);
    spec.sample(&mut rng)
}

/// Explicit distribution on `lo, lo+1, …` plus a truncated tail.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteDist {
    lo: u64,
    pmf: Vec<f64>,
    tail_mass: f64,
    eps: f64,
}

const MASS_TOL: f64 = 1e-12;

impl DiscreteDist {
    pub fn new(lo: u64, pmf: Vec<f64>, tail_mass: f64, eps: f64) -> Result<Self> {
        if pmf.is_empty() {
            return domain("empty pmf");
        }
        if pmf.iter().any(|&v| !(v >= 0.0) || !v.is_finite()) {
            return domain("pmf entries must be finite and non-negative");
        }
        if !(tail_mass >= 0.0) || tail_mass > eps + MASS_TOL {
            return domain(format!("tail mass {tail_mass} exceeds eps {eps}"));
        }
        let total = compensated_sum(pmf.iter().copied()) + tail_mass;
        if (total - 1.0).abs() > MASS_TOL {
            return domain(format!("total mass {total} differs from 1"));
        }
        Ok(DiscreteDist {
            lo,
            pmf,
            tail_mass,
            eps,
        })
    }

    /// Exact finite distribution (no truncation).
    pub fn finite(lo: u64, pmf: Vec<f64>) -> Result<Self> {
        Self::new(lo, pmf, 0.0, 0.0)
    }

    pub fn point_mass(k: u64) -> Self {
        DiscreteDist {
            lo: k,
            pmf: vec![1.0],
            tail_mass: 0.0,
            eps: 0.0,
        }
    }

    pub fn lo(&self) -> u64 {
        self.lo
    }

    /// Last support point carried explicitly.
    pub fn hi(&self) -> u64 {
        self.lo + self.pmf.len() as u64 - 1
    }

    pub fn pmf(&self) -> &[f64] {
        &self.pmf
    }

    pub fn tail_mass(&self) -> f64 {
        self.tail_mass
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn prob(&self, k: u64) -> f64 {
        if k < self.lo {
            return 0.0;
        }
        self.pmf.get((k - self.lo) as usize).copied().unwrap_or(0.0)
    }

    /// `Pr[X <= k]`, counting the truncated tail as lying beyond `hi`.
    pub fn cdf(&self, k: u64) -> f64 {
        if k < self.lo {
            return 0.0;
        }
        let idx = ((k - self.lo) as usize).min(self.pmf.len() - 1);
        compensated_sum(self.pmf[..=idx].iter().copied()).min(1.0)
    }

    /// All CDF values at `lo..=hi`.
    pub fn cdf_values(&self) -> Vec<f64> {
        let mut acc = 0.0;
        let mut comp = 0.0;
        self.pmf
            .iter()
            .map(|&v| {
                let y = v - comp;
                let t = acc + y;
                comp = (t - acc) - y;
                acc = t;
                acc.min(1.0)
            })
            .collect()
    }

    /// `Pr[X >= k]`, including the truncated tail mass.
    pub fn upper_tail(&self, k: u64) -> f64 {
        if k <= self.lo {
            return 1.0;
        }
        (1.0 - self.cdf(k - 1)).clamp(0.0, 1.0)
    }

    /// Mean over the explicit support.
    pub fn mean(&self) -> f64 {
        compensated_sum(
            self.pmf
                .iter()
                .enumerate()
                .map(|(i, &v)| (self.lo + i as u64) as f64 * v),
        )
    }

    pub fn variance(&self) -> f64 {
        let m = self.mean();
        compensated_sum(self.pmf.iter().enumerate().map(|(i, &v)| {
            let d = (self.lo + i as u64) as f64 - m;
            d * d * v
        }))
    }

    /// Generalized inverse CDF: smallest support point with `CDF >= u`.
    pub fn quantile(&self, u: f64) -> Result<u64> {
        if !(u > 0.0 && u < 1.0) {
            return domain(format!("u = {u} must lie in (0, 1)"));
        }
        if u > 1.0 - self.tail_mass {
            return Err(Error::TruncatedTail {
                u,
                tail_mass: self.tail_mass,
            });
        }
        let cdf = self.cdf_values();
        let idx = cdf.partition_point(|&c| c < u);
        if idx >= cdf.len() {
            // Rounding left the last CDF value a hair below 1 - tail_mass.
            return Err(Error::TruncatedTail {
                u,
                tail_mass: self.tail_mass,
            });
        }
        Ok(self.lo + idx as u64)
    }

    /// Writes the `k,pmf,cdf` table followed by `# tail_mass=<value>`.
    pub fn write_csv<W: Write>(&self, w: W) -> std::io::Result<()> {
        let mut wtr = csv::Writer::from_writer(w);
        wtr.write_record(["k", "pmf", "cdf"])?;
        for (i, (p, c)) in self.pmf.iter().zip(self.cdf_values()).enumerate() {
            wtr.write_record(&[
                (self.lo + i as u64).to_string(),
                p.to_string(),
                c.to_string(),
            ])?;
        }
        let mut inner = wtr.into_inner().map_err(|e| e.into_error())?;
        writeln!(inner, "# tail_mass={}", self.tail_mass)?;
        inner.flush()
    }

    /// Reads the format produced by [`write_csv`](Self::write_csv).
    ///
    /// Other `#` lines are ignored except `# eps=<value>`; without it the
    /// truncation budget is taken to be the recorded tail mass.
    pub fn read_csv<R: BufRead>(r: R) -> Result<Self> {
        let mut tail_mass = None;
        let mut eps = None;
        let mut body = String::new();
        for line in r.lines() {
            let line = line.map_err(|e| Error::Parse(e.to_string()))?;
            let trimmed = line.trim();
            if let Some(comment) = trimmed.strip_prefix('#') {
                if let Some((k, v)) = comment.trim().split_once('=') {
                    match k.trim() {
                        "tail_mass" => tail_mass = Some(parse_f64(v)?),
                        "eps" => eps = Some(parse_f64(v)?),
                        _ => {}
                    }
                }
            } else if !trimmed.is_empty() {
                body.push_str(trimmed);
                body.push('\n');
            }
        }
        let mut rdr = csv::Reader::from_reader(body.as_bytes());
        let headers = rdr
            .headers()
            .map_err(|e| Error::Parse(e.to_string()))?
            .clone();
        if headers.iter().collect::<Vec<_>>() != ["k", "pmf", "cdf"] {
            return Err(Error::Parse("expected header k,pmf,cdf".into()));
        }
        let mut lo = None;
        let mut pmf = Vec::new();
        for rec in rdr.records() {
            let rec = rec.map_err(|e| Error::Parse(e.to_string()))?;
            let k: u64 = rec[0]
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad support point {:?}", &rec[0])))?;
            let start = *lo.get_or_insert(k);
            if k != start + pmf.len() as u64 {
                return Err(Error::Parse(format!(
                    "support point {k} is not consecutive"
                )));
            }
            pmf.push(parse_f64(&rec[1])?);
        }
        let lo = lo.ok_or_else(|| Error::Parse("no support points".into()))?;
        let tail_mass = tail_mass.ok_or_else(|| Error::Parse("missing # tail_mass line".into()))?;
        let eps = eps.unwrap_or(tail_mass).max(tail_mass);
        DiscreteDist::new(lo, pmf, tail_mass, eps)
    }
}

fn parse_f64(s: &str) -> Result<f64> {
    s.trim()
        .parse()
        .map_err(|_| Error::Parse(format!("bad number {s:?}")))
}

/// Outcome of an exact domination check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Dominance {
    Holds,
    /// First point where `CDF_a(at) < CDF_b(at) - slack`; `gap = CDF_b - CDF_a`.
    Fails {
        at: u64,
        gap: f64,
    },
}

impl Dominance {
    pub fn holds(&self) -> bool {
        matches!(self, Dominance::Holds)
    }
}

/// Tests `a ⪯ b`, i.e. `CDF_a(λ) >= CDF_b(λ) - slack` for every integer `λ`.
///
/// Both truncation budgets must be at most `slack / 4`. With `slack = 0`
/// only untruncated distributions are accepted; differences below
/// [`CDF_TOL`] are treated as rounding.
pub fn dominates_exact(a: &DiscreteDist, b: &DiscreteDist, slack: f64) -> Result<Dominance> {
    if !(slack >= 0.0) {
        return domain("slack must be non-negative");
    }
    if a.eps > slack / 4.0 || b.eps > slack / 4.0 {
        return domain(format!(
            "truncation budgets ({}, {}) exceed slack/4 = {}",
            a.eps,
            b.eps,
            slack / 4.0
        ));
    }
    let ca = a.cdf_values();
    let cb = b.cdf_values();
    let start = a.lo.min(b.lo);
    let end = a.hi().max(b.hi());
    let at = |d: &DiscreteDist, c: &[f64], k: u64| -> f64 {
        if k < d.lo {
            0.0
        } else {
            c[((k - d.lo) as usize).min(c.len() - 1)]
        }
    };
    for k in start..=end {
        let fa = at(a, &ca, k);
        let fb = at(b, &cb, k);
        if fa < fb - slack - CDF_TOL {
            return Ok(Dominance::Fails {
                at: k,
                gap: fb - fa,
            });
        }
    }
    Ok(Dominance::Holds)
}

/// Quantile coupling `(Q_a(u), Q_b(u))`.
pub fn quantile_couple(a: &DiscreteDist, b: &DiscreteDist, u: f64) -> Result<(u64, u64)> {
    Ok((a.quantile(u)?, b.quantile(u)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn geom(p: f64) -> DiscreteDist {
        GatedGeomSpec::geometric_sum(&[p])
            .unwrap()
            .exact_dist(1e-12)
            .unwrap()
    }

    #[test]
    fn geom_pmf_examples() {
        assert_eq!(geom_pmf(0.5, 1).unwrap(), 0.5);
        assert_eq!(geom_pmf(1.0, 1).unwrap(), 1.0);
        assert_eq!(geom_pmf(0.5, 3).unwrap(), 0.125);
    }

    #[test]
    fn geom_tail_examples() {
        assert_eq!(geom_tail(0.5, 1).unwrap(), 1.0);
        assert_eq!(geom_tail(0.5, 4).unwrap(), 0.125);
        assert!((geom_tail(0.25, 2).unwrap() - 0.75).abs() < 1e-15);
    }

    #[test]
    fn geom_domain_errors() {
        assert!(geom_pmf(0.0, 1).is_err());
        assert!(geom_pmf(1.5, 1).is_err());
        assert!(geom_pmf(0.5, 0).is_err());
        assert!(geom_tail(-0.1, 2).is_err());
    }

    #[test]
    fn tail_matches_summed_pmf() {
        for &p in &[0.9, 0.5, 0.1, 0.01] {
            for k in 1..20u64 {
                let direct = geom_tail(p, k).unwrap();
                let upto = (k..k + 20_000).map(|j| geom_pmf(p, j).unwrap());
                let summed = compensated_sum(upto) + geom_tail(p, k + 20_000).unwrap();
                assert!((direct - summed).abs() < 1e-12, "p={p} k={k}");
            }
        }
    }

    #[test]
    fn spec_mean_examples() {
        let lo = GatedGeomSpec::new(0, vec![GatedTerm::new(0.5, 0.1).unwrap(); 10]).unwrap();
        assert!((lo.mean() - 50.0).abs() < 1e-12);
        assert_eq!(GatedGeomSpec::point_mass(7).mean(), 7.0);
        assert_eq!(GatedGeomSpec::geometric_sum(&[0.25]).unwrap().mean(), 4.0);
    }

    /// Brute-force second moment of one gated term, summing the geometric
    /// series until the remaining tail is below 1e-15.
    fn brute_variance(gate: f64, p: f64) -> f64 {
        let (mut m1, mut m2, mut k, mut tail) = (0.0, 0.0, 1.0_f64, 1.0_f64);
        while tail > 1e-15 {
            let pk = tail * p;
            m1 += k * pk;
            m2 += k * k * pk;
            tail *= 1.0 - p;
            k += 1.0;
        }
        gate * m2 - (gate * m1).powi(2)
    }

    #[test]
    fn spec_variance_examples() {
        let one =
            |g: f64, p: f64| GatedGeomSpec::new(0, vec![GatedTerm::new(g, p).unwrap()]).unwrap();
        assert!((one(1.0, 0.5).variance() - 2.0).abs() < 1e-12);
        // Brute force gives 2 for gate 1/2, succ 1/2: 3 - 1.
        let oracle = brute_variance(0.5, 0.5);
        assert!((oracle - 2.0).abs() < 1e-10);
        assert!((one(0.5, 0.5).variance() - 2.0).abs() < 1e-12);
        assert_eq!(one(0.0, 0.9).variance(), 0.0);
        for &(g, p) in &[(0.3, 0.2), (0.9, 0.05), (1.0, 0.7)] {
            assert!((one(g, p).variance() - brute_variance(g, p)).abs() < 1e-8);
        }
    }

    #[test]
    fn exact_dist_examples() {
        let d = GatedGeomSpec::geometric_sum(&[1.0])
            .unwrap()
            .exact_dist(1e-9)
            .unwrap();
        assert_eq!(d.lo(), 1);
        assert_eq!(d.pmf(), &[1.0]);

        let d = GatedGeomSpec::geometric_sum(&[0.5, 0.5])
            .unwrap()
            .exact_dist(1e-9)
            .unwrap();
        assert_eq!(d.lo(), 2);
        // Negative binomial: Pr[X = k] = (k-1) 2^-k.
        for k in 2..30u64 {
            let nb = (k - 1) as f64 * 0.5_f64.powi(k as i32);
            assert!((d.prob(k) - nb).abs() < 1e-15, "k={k}");
        }
        assert!((d.prob(4) - 0.1875).abs() < 1e-15);

        let d = GatedGeomSpec::new(0, vec![GatedTerm::new(0.5, 1.0).unwrap()])
            .unwrap()
            .exact_dist(1e-9)
            .unwrap();
        assert_eq!(d.lo(), 0);
        assert_eq!(d.pmf(), &[0.5, 0.5]);
    }

    #[test]
    fn exact_dist_errors() {
        let s = GatedGeomSpec::geometric_sum(&[0.5]).unwrap();
        assert!(matches!(s.exact_dist(0.0), Err(Error::Domain(_))));
        assert!(matches!(s.exact_dist(0.5), Err(Error::Domain(_))));
        let tiny = GatedGeomSpec::geometric_sum(&[1e-9]).unwrap();
        assert!(matches!(tiny.exact_dist(1e-9), Err(Error::Resource(_))));
        // Finite support is fine with eps = 0.
        let fin = GatedGeomSpec::new(3, vec![GatedTerm::new(0.25, 1.0).unwrap()]).unwrap();
        let d = fin.exact_dist(0.0).unwrap();
        assert_eq!((d.lo(), d.pmf()), (3, &[0.75, 0.25][..]));
    }

    #[test]
    fn exact_dist_agrees_with_direct_convolution() {
        let spec = GatedGeomSpec::new(
            2,
            vec![
                GatedTerm::new(0.3, 0.4).unwrap(),
                GatedTerm::new(1.0, 0.7).unwrap(),
                GatedTerm::new(0.8, 0.2).unwrap(),
            ],
        )
        .unwrap();
        let d = spec.exact_dist(1e-10).unwrap();
        // Independent route: dense convolution of long untruncated term PMFs.
        let mut acc = vec![1.0];
        for t in spec.terms() {
            let mut term = vec![1.0 - t.gate];
            for k in 1..400u64 {
                term.push(t.gate * geom_pmf(t.succ, k).unwrap());
            }
            acc = crate::numeric::convolve(&acc, &term);
        }
        for k in 0..60u64 {
            let direct = if k < 2 { 0.0 } else { acc[(k - 2) as usize] };
            // Pointwise error is bounded by the truncated mass.
            assert!((d.prob(k) - direct).abs() <= d.tail_mass() + 1e-14, "k={k}");
        }
    }

    #[test]
    fn sample_examples() {
        let one = GatedGeomSpec::geometric_sum(&[1.0]).unwrap();
        for seed in 0..20 {
            assert_eq!(sample_spec(&one, seed), 1);
        }
        assert_eq!(geom_from_uniform(0.5, 0.3), 2);
        let spec = GatedGeomSpec::geometric_sum(&[0.3, 0.1]).unwrap();
        assert_eq!(sample_spec(&spec, 99), sample_spec(&spec, 99));
    }

    #[test]
    fn dominates_examples() {
        let a = geom(0.6);
        let b = geom(0.3);
        assert_eq!(dominates_exact(&a, &a, 1e-9).unwrap(), Dominance::Holds);
        assert_eq!(dominates_exact(&a, &b, 1e-9).unwrap(), Dominance::Holds);
        match dominates_exact(&b, &a, 1e-9).unwrap() {
            Dominance::Fails { at, gap } => {
                assert_eq!(at, 1);
                assert!((gap - 0.3).abs() < 1e-12);
            }
            Dominance::Holds => panic!("Geom(0.3) must not be dominated by Geom(0.6)"),
        }
        assert!(dominates_exact(&a, &b, 1e-13).is_err());
    }

    #[test]
    fn quantile_couple_examples() {
        let g5 = geom(0.5);
        let g25 = geom(0.25);
        assert_eq!(quantile_couple(&g5, &g5, 0.6).unwrap(), (2, 2));
        assert_eq!(quantile_couple(&g5, &g25, 0.7).unwrap(), (2, 5));
        assert_eq!(quantile_couple(&g5, &g25, 0.001).unwrap(), (1, 1));
        let coarse = GatedGeomSpec::geometric_sum(&[0.5])
            .unwrap()
            .exact_dist(0.01)
            .unwrap();
        assert!(matches!(
            coarse.quantile(1.0 - coarse.tail_mass() / 2.0),
            Err(Error::TruncatedTail { .. })
        ));
    }

    #[test]
    fn csv_roundtrip() {
        let d = GatedGeomSpec::new(1, vec![GatedTerm::new(0.7, 0.4).unwrap()])
            .unwrap()
            .exact_dist(1e-6)
            .unwrap();
        let mut buf = Vec::new();
        d.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("k,pmf,cdf\n1,"));
        assert!(text
            .trim_end()
            .lines()
            .last()
            .unwrap()
            .starts_with("# tail_mass="));
        let back = DiscreteDist::read_csv(&buf[..]).unwrap();
        assert_eq!(back.pmf(), d.pmf());
        assert_eq!(back.lo(), d.lo());
        assert_eq!(back.tail_mass(), d.tail_mass());
    }

    #[test]
    fn csv_rejects_gaps() {
        let text = "k,pmf,cdf\n1,0.5,0.5\n3,0.5,1\n# tail_mass=0\n";
        assert!(matches!(
            DiscreteDist::read_csv(text.as_bytes()),
            Err(Error::Parse(_))
        ));
    }
}
