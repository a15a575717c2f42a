use std::fmt;
use std::str::FromStr;

use rand::Rng;

use super::{check_budget, Outcome, RunRecord};
use crate::bench::{sssp_fitness, vector_at_least_as_good, PointerArray, WeightedGraph};
use crate::error::{domain, Error, Result};
use crate::rng::{rng_from_seed, SimRng};

/// How a mutated pointer picks its new target.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Retarget {
    /// Uniform over vertices other than the vertex itself and its current
    /// target (`n - 2` choices), so every specific change has probability
    /// `1/(n-2)`.
    #[default]
    ExcludeCurrent,
    /// Uniform over all vertices other than the vertex itself.
    AnyOther,
    /// Uniform over graph neighbours other than the current target.
    Adjacent,
}

impl Retarget {
    pub const IDS: [&'static str; 3] = ["exclude-current", "any-other", "adjacent"];
}

impl fmt::Display for Retarget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Retarget::ExcludeCurrent => "exclude-current",
            Retarget::AnyOther => "any-other",
            Retarget::Adjacent => "adjacent",
        })
    }
}

impl FromStr for Retarget {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exclude-current" => Ok(Retarget::ExcludeCurrent),
            "any-other" => Ok(Retarget::AnyOther),
            "adjacent" => Ok(Retarget::Adjacent),
            _ => domain(format!(
                "unknown retarget mode {s:?}; valid ids: {}",
                Self::IDS.join(", ")
            )),
        }
    }
}

/// Poisson(1) draw by inversion with cumulative products.
pub fn poisson_one<R: Rng + ?Sized>(rng: &mut R) -> u64 {
    let u: f64 = rng.random();
    let mut k = 0;
    let mut p = (-1.0f64).exp();
    let mut cdf = p;
    while u > cdf && k < 170 {
        k += 1;
        p /= k as f64;
        cdf += p;
    }
    k
}

/// Uniform index in `0..n` skipping `a` and, if given and distinct, `b`.
fn uniform_except(rng: &mut SimRng, n: usize, a: usize, b: Option<usize>) -> Option<usize> {
    let b = b.filter(|&b| b != a);
    let excluded = 1 + b.is_some() as usize;
    if n <= excluded {
        return None;
    }
    let mut r = rng.random_range(0..n - excluded);
    let (lo, hi) = match b {
        Some(b) => (a.min(b), a.max(b)),
        None => (a, usize::MAX),
    };
    if r >= lo {
        r += 1;
    }
    if r >= hi {
        r += 1;
    }
    Some(r)
}

fn new_target(
    g: &WeightedGraph,
    mode: Retarget,
    v: usize,
    current: usize,
    rng: &mut SimRng,
) -> usize {
    let n = g.n_vertices();
    let t = match mode {
        Retarget::ExcludeCurrent => uniform_except(rng, n, v, Some(current)),
        Retarget::AnyOther => uniform_except(rng, n, v, None),
        Retarget::Adjacent => {
            let nb = g.neighbors(v);
            let choices = nb.len() - nb.contains(&current) as usize;
            (choices > 0).then(|| {
                let mut r = rng.random_range(0..choices);
                for &u in nb {
                    if u == current {
                        continue;
                    }
                    if r == 0 {
                        return u;
                    }
                    r -= 1;
                }
                unreachable!("choice within neighbour list")
            })
        }
    };
    t.unwrap_or(current)
}

fn initial_pointers(g: &WeightedGraph, mode: Retarget, rng: &mut SimRng) -> PointerArray {
    let n = g.n_vertices();
    let targets = (0..n)
        .map(|v| {
            if v == g.source() {
                v
            } else if mode == Retarget::Adjacent {
                let nb = g.neighbors(v);
                nb[rng.random_range(0..nb.len())]
            } else {
                uniform_except(rng, n, v, None).expect("n >= 2")
            }
        })
        .collect();
    PointerArray::from_raw(targets)
}

/// Multi-criteria (1+1) EA on pointer arrays: each iteration changes
/// `k + 1` pointers with `k ~ Poisson(1)`, the mutated vertices drawn
/// uniformly with replacement among non-source vertices. The offspring is
/// accepted iff no vertex gets worse. Ends when every vertex has its
/// shortest-path distance.
pub fn run_sssp_ea(g: &WeightedGraph, mode: Retarget, seed: u64, budget: u64) -> Result<RunRecord> {
    check_budget(budget)?;
    let out = sssp_ea(g, mode, seed, budget);
    Ok(out.record(
        format!("sssp-ea {mode}"),
        "sssp".into(),
        g.n_vertices(),
        seed,
        budget,
    ))
}

pub(crate) fn sssp_ea(g: &WeightedGraph, mode: Retarget, seed: u64, budget: u64) -> Outcome {
    let mut rng = rng_from_seed(seed);
    let dist = g.distances();
    let target: Vec<Option<u64>> = g.non_source().map(|v| Some(dist[v])).collect();
    let movable: Vec<usize> = g.non_source().collect();
    let mut x = initial_pointers(g, mode, &mut rng);
    let mut fx = sssp_fitness(g, &x);
    if fx == target {
        return Outcome {
            iterations: 0,
            evaluations: 1,
            censored: false,
        };
    }
    for t in 1..=budget {
        let mut y = x.clone();
        for _ in 0..=poisson_one(&mut rng) {
            let v = movable[rng.random_range(0..movable.len())];
            let nt = new_target(g, mode, v, y.target(v), &mut rng);
            y.set(v, nt);
        }
        let fy = sssp_fitness(g, &y);
        if fy == target {
            return Outcome {
                iterations: t,
                evaluations: t + 1,
                censored: false,
            };
        }
        if vector_at_least_as_good(&fy, &fx).expect("equal lengths") {
            x = y;
            fx = fy;
        }
    }
    Outcome {
        iterations: budget,
        evaluations: budget + 1,
        censored: true,
    }
}
