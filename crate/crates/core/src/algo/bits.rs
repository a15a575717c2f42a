use rand::seq::index::sample;
use rand::Rng;
use rand_distr::{Binomial, Distribution};

use super::{check_budget, MutationOp, Outcome, RunRecord};
use crate::bench::Objective;
use crate::error::{domain, Result};
use crate::rng::{rng_from_seed, SimRng};

fn random_bits(n: usize, rng: &mut SimRng) -> Vec<bool> {
    (0..n).map(|_| rng.random::<bool>()).collect()
}

fn flip(x: &mut [bool], positions: &[usize]) {
    for &i in positions {
        x[i] = !x[i];
    }
}

fn op_fitness(f: i64) -> usize {
    f.max(0) as usize
}

/// Uniform tie-breaking for a running maximum: returns true when the
/// candidate should replace the incumbent.
fn better_or_tie(rng: &mut SimRng, f: i64, best: &mut i64, ties: &mut u64) -> bool {
    if f > *best {
        *best = f;
        *ties = 1;
        true
    } else if f == *best {
        *ties += 1;
        rng.random_range(0..*ties) == 0
    } else {
        false
    }
}

fn check_n(n: usize) -> Result<()> {
    if n < 1 {
        return domain("n must be at least 1");
    }
    Ok(())
}

/// (1+1) elitist algorithm: mutate the parent and keep the offspring if it
/// is not worse. `OneBit` gives RLS, `StandardBit(p)` the (1+1) EA.
pub fn run_one_plus_one<O: Objective + ?Sized>(
    obj: &O,
    op: &MutationOp,
    n: usize,
    seed: u64,
    budget: u64,
) -> Result<RunRecord> {
    run_one_plus_one_observed(obj, op, n, seed, budget, &mut |_, _| {})
}

/// As [`run_one_plus_one`], calling `observe(iteration, parent_fitness)`
/// after initialization and after every iteration.
pub fn run_one_plus_one_observed<O: Objective + ?Sized>(
    obj: &O,
    op: &MutationOp,
    n: usize,
    seed: u64,
    budget: u64,
    observe: &mut dyn FnMut(u64, i64),
) -> Result<RunRecord> {
    check_n(n)?;
    op.validate(n)?;
    check_budget(budget)?;
    let mut rng = rng_from_seed(seed);
    let x = random_bits(n, &mut rng);
    let out = one_plus_one_from(obj, op, x, 1, budget, &mut rng, observe);
    Ok(out.record(format!("(1+1) {op}"), obj.id(), n, seed, budget))
}

/// Runs the (1+1) loop from `x`; `spent` evaluations precede it.
fn one_plus_one_from<O: Objective + ?Sized>(
    obj: &O,
    op: &MutationOp,
    mut x: Vec<bool>,
    spent: u64,
    budget: u64,
    rng: &mut SimRng,
    observe: &mut dyn FnMut(u64, i64),
) -> Outcome {
    let n = x.len();
    let mut fx = obj.fitness(&x);
    observe(0, fx);
    if obj.is_optimal(&x, fx) {
        return Outcome {
            iterations: 0,
            evaluations: spent,
            censored: false,
        };
    }
    let mut flips = Vec::with_capacity(n);
    for t in 1..=budget {
        op.flip_positions(n, op_fitness(fx), rng, &mut flips);
        if !flips.is_empty() {
            flip(&mut x, &flips);
            let fy = obj.fitness(&x);
            if obj.is_optimal(&x, fy) {
                observe(t, fy);
                return Outcome {
                    iterations: t,
                    evaluations: spent + t,
                    censored: false,
                };
            }
            if fy >= fx {
                fx = fy;
            } else {
                flip(&mut x, &flips);
            }
        }
        observe(t, fx);
    }
    Outcome {
        iterations: budget,
        evaluations: spent + budget,
        censored: true,
    }
}

pub(crate) fn one_plus_one<O: Objective + ?Sized>(
    obj: &O,
    op: &MutationOp,
    n: usize,
    seed: u64,
    budget: u64,
) -> Outcome {
    let mut rng = rng_from_seed(seed);
    let x = random_bits(n, &mut rng);
    one_plus_one_from(obj, op, x, 1, budget, &mut rng, &mut |_, _| {})
}

/// Uniform random search; the first sample counts as iteration 0.
pub fn run_random_search<O: Objective + ?Sized>(
    obj: &O,
    n: usize,
    seed: u64,
    budget: u64,
) -> Result<RunRecord> {
    check_n(n)?;
    check_budget(budget)?;
    Ok(random_search(obj, n, seed, budget).record("rs".into(), obj.id(), n, seed, budget))
}

pub(crate) fn random_search<O: Objective + ?Sized>(
    obj: &O,
    n: usize,
    seed: u64,
    budget: u64,
) -> Outcome {
    let mut rng = rng_from_seed(seed);
    let mut x = vec![false; n];
    for t in 0..=budget {
        for b in x.iter_mut() {
            *b = rng.random();
        }
        if obj.is_optimal(&x, obj.fitness(&x)) {
            return Outcome {
                iterations: t,
                evaluations: t + 1,
                censored: false,
            };
        }
    }
    Outcome {
        iterations: budget,
        evaluations: budget + 1,
        censored: true,
    }
}

/// Evaluates up to `mu` random individuals in turn, stopping early at an
/// optimum. Returns the population and fitnesses, or the stop outcome.
fn sequential_init<O: Objective + ?Sized>(
    obj: &O,
    n: usize,
    mu: usize,
    rng: &mut SimRng,
) -> std::result::Result<(Vec<Vec<bool>>, Vec<i64>), Outcome> {
    let mut pop = Vec::with_capacity(mu);
    let mut fits = Vec::with_capacity(mu);
    for j in 0..mu {
        let x = random_bits(n, rng);
        let f = obj.fitness(&x);
        if obj.is_optimal(&x, f) {
            return Err(Outcome {
                iterations: 0,
                evaluations: j as u64 + 1,
                censored: false,
            });
        }
        pop.push(x);
        fits.push(f);
    }
    Ok((pop, fits))
}

fn check_pop(name: &str, size: usize) -> Result<()> {
    if size < 1 {
        return domain(format!("{name} must be at least 1"));
    }
    Ok(())
}

/// (μ+1) EA: a uniformly chosen parent creates one offspring, which replaces
/// a uniformly chosen worst individual if it is at least as fit.
pub fn run_mu_plus_one<O: Objective + ?Sized>(
    obj: &O,
    mu: usize,
    op: &MutationOp,
    n: usize,
    seed: u64,
    budget: u64,
) -> Result<RunRecord> {
    run_mu_plus_one_observed(obj, mu, op, n, seed, budget, &mut |_, _| {})
}

/// As [`run_mu_plus_one`], calling `observe(iteration, best_fitness)`.
pub fn run_mu_plus_one_observed<O: Objective + ?Sized>(
    obj: &O,
    mu: usize,
    op: &MutationOp,
    n: usize,
    seed: u64,
    budget: u64,
    observe: &mut dyn FnMut(u64, i64),
) -> Result<RunRecord> {
    check_n(n)?;
    check_pop("mu", mu)?;
    op.validate(n)?;
    check_budget(budget)?;
    let out = mu_plus_one(obj, mu, op, n, seed, budget, observe);
    Ok(out.record(format!("({mu}+1) {op}"), obj.id(), n, seed, budget))
}

pub(crate) fn mu_plus_one<O: Objective + ?Sized>(
    obj: &O,
    mu: usize,
    op: &MutationOp,
    n: usize,
    seed: u64,
    budget: u64,
    observe: &mut dyn FnMut(u64, i64),
) -> Outcome {
    let mut rng = rng_from_seed(seed);
    let (mut pop, mut fits) = match sequential_init(obj, n, mu, &mut rng) {
        Ok(p) => p,
        Err(done) => return done,
    };
    observe(0, *fits.iter().max().expect("mu >= 1"));
    let mu64 = mu as u64;
    let mut flips = Vec::with_capacity(n);
    let mut worst_idx = Vec::with_capacity(mu);
    for t in 1..=budget {
        let parent = rng.random_range(0..mu);
        op.flip_positions(n, op_fitness(fits[parent]), &mut rng, &mut flips);
        let mut y = pop[parent].clone();
        flip(&mut y, &flips);
        let fy = obj.fitness(&y);
        if obj.is_optimal(&y, fy) {
            observe(t, fy);
            return Outcome {
                iterations: t,
                evaluations: mu64 + t,
                censored: false,
            };
        }
        let worst = *fits.iter().min().expect("mu >= 1");
        if fy >= worst {
            worst_idx.clear();
            worst_idx.extend((0..mu).filter(|&i| fits[i] == worst));
            let r = worst_idx[rng.random_range(0..worst_idx.len())];
            pop[r] = y;
            fits[r] = fy;
        }
        observe(t, *fits.iter().max().expect("mu >= 1"));
    }
    Outcome {
        iterations: budget,
        evaluations: mu64 + budget,
        censored: true,
    }
}

/// (1+λ) EA: λ offspring per iteration; the best (ties uniform) replaces the
/// parent if not worse. A successful generation is counted in full.
pub fn run_one_plus_lambda<O: Objective + ?Sized>(
    obj: &O,
    lambda: usize,
    op: &MutationOp,
    n: usize,
    seed: u64,
    budget: u64,
) -> Result<RunRecord> {
    check_n(n)?;
    check_pop("lambda", lambda)?;
    op.validate(n)?;
    check_budget(budget)?;
    let out = one_plus_lambda(obj, lambda, op, n, seed, budget);
    Ok(out.record(format!("(1+{lambda}) {op}"), obj.id(), n, seed, budget))
}

pub(crate) fn one_plus_lambda<O: Objective + ?Sized>(
    obj: &O,
    lambda: usize,
    op: &MutationOp,
    n: usize,
    seed: u64,
    budget: u64,
) -> Outcome {
    let mut rng = rng_from_seed(seed);
    let mut x = random_bits(n, &mut rng);
    let mut fx = obj.fitness(&x);
    if obj.is_optimal(&x, fx) {
        return Outcome {
            iterations: 0,
            evaluations: 1,
            censored: false,
        };
    }
    let lam = lambda as u64;
    let mut flips = Vec::with_capacity(n);
    let mut best_flips = Vec::with_capacity(n);
    for t in 1..=budget {
        let mut best = i64::MIN;
        let mut ties = 0;
        let mut found = false;
        for _ in 0..lambda {
            op.flip_positions(n, op_fitness(fx), &mut rng, &mut flips);
            flip(&mut x, &flips);
            let fy = obj.fitness(&x);
            found |= obj.is_optimal(&x, fy);
            flip(&mut x, &flips);
            if better_or_tie(&mut rng, fy, &mut best, &mut ties) {
                std::mem::swap(&mut best_flips, &mut flips);
            }
        }
        if found {
            return Outcome {
                iterations: t,
                evaluations: 1 + lam * t,
                censored: false,
            };
        }
        if best >= fx {
            flip(&mut x, &best_flips);
            fx = best;
        }
    }
    Outcome {
        iterations: budget,
        evaluations: 1 + lam * budget,
        censored: true,
    }
}

/// (1+(λ,λ)) GA with mutation rate λ/n and crossover bias 1/λ. Every
/// generation costs 2λ evaluations, including the successful one.
pub fn run_ollga<O: Objective + ?Sized>(
    obj: &O,
    lambda: usize,
    n: usize,
    seed: u64,
    budget: u64,
) -> Result<RunRecord> {
    check_n(n)?;
    check_budget(budget)?;
    if lambda < 1 || lambda > n {
        return domain(format!("lambda = {lambda} must lie in [1, n = {n}]"));
    }
    let out = ollga(obj, lambda, n, seed, budget);
    Ok(out.record(
        format!("(1+({lambda},{lambda})) GA"),
        obj.id(),
        n,
        seed,
        budget,
    ))
}

pub(crate) fn ollga<O: Objective + ?Sized>(
    obj: &O,
    lambda: usize,
    n: usize,
    seed: u64,
    budget: u64,
) -> Outcome {
    let mut rng = rng_from_seed(seed);
    let mut x = random_bits(n, &mut rng);
    let mut fx = obj.fitness(&x);
    if obj.is_optimal(&x, fx) {
        return Outcome {
            iterations: 0,
            evaluations: 1,
            censored: false,
        };
    }
    let binom = Binomial::new(n as u64, lambda as f64 / n as f64).expect("rate in [0, 1]");
    let bias = 1.0 / lambda as f64;
    let cost = 2 * lambda as u64;
    let mut mutant = Vec::new();
    let mut best_mutant = Vec::new();
    let mut child = Vec::new();
    let mut best_child = Vec::new();
    for t in 1..=budget {
        let ell = binom.sample(&mut rng) as usize;
        let mut found = false;

        let mut best = i64::MIN;
        let mut ties = 0;
        for _ in 0..lambda {
            mutant.clear();
            if ell > 0 {
                mutant.extend(sample(&mut rng, n, ell).iter());
            }
            flip(&mut x, &mutant);
            let f = obj.fitness(&x);
            found |= obj.is_optimal(&x, f);
            flip(&mut x, &mutant);
            if better_or_tie(&mut rng, f, &mut best, &mut ties) {
                std::mem::swap(&mut best_mutant, &mut mutant);
            }
        }

        let mut best = i64::MIN;
        let mut ties = 0;
        for _ in 0..lambda {
            child.clear();
            child.extend(
                best_mutant
                    .iter()
                    .copied()
                    .filter(|_| rng.random::<f64>() < bias),
            );
            flip(&mut x, &child);
            let f = obj.fitness(&x);
            found |= obj.is_optimal(&x, f);
            flip(&mut x, &child);
            if better_or_tie(&mut rng, f, &mut best, &mut ties) {
                std::mem::swap(&mut best_child, &mut child);
            }
        }
        if found {
            return Outcome {
                iterations: t,
                evaluations: 1 + cost * t,
                censored: false,
            };
        }
        if best >= fx {
            flip(&mut x, &best_child);
            fx = best;
        }
    }
    Outcome {
        iterations: budget,
        evaluations: 1 + cost * budget,
        censored: true,
    }
}

/// (1+1) EA started from the best of `mu` random individuals (ties uniform).
/// The initial individuals are evaluated one by one, so an optimal one ends
/// the run early.
pub fn run_ea_best_of_mu<O: Objective + ?Sized>(
    obj: &O,
    mu: usize,
    op: &MutationOp,
    n: usize,
    seed: u64,
    budget: u64,
) -> Result<RunRecord> {
    check_n(n)?;
    check_pop("mu", mu)?;
    op.validate(n)?;
    check_budget(budget)?;
    let out = ea_best_of_mu(obj, mu, op, n, seed, budget);
    Ok(out.record(format!("(1+1)_{mu} {op}"), obj.id(), n, seed, budget))
}

pub(crate) fn ea_best_of_mu<O: Objective + ?Sized>(
    obj: &O,
    mu: usize,
    op: &MutationOp,
    n: usize,
    seed: u64,
    budget: u64,
) -> Outcome {
    let mut rng = rng_from_seed(seed);
    let (mut pop, fits) = match sequential_init(obj, n, mu, &mut rng) {
        Ok(p) => p,
        Err(done) => return done,
    };
    let mut best = i64::MIN;
    let mut ties = 0;
    let mut pick = 0;
    for (i, &f) in fits.iter().enumerate() {
        if better_or_tie(&mut rng, f, &mut best, &mut ties) {
            pick = i;
        }
    }
    let x = pop.swap_remove(pick);
    one_plus_one_from(obj, op, x, mu as u64, budget, &mut rng, &mut |_, _| {})
}
