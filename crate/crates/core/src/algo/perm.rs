use rand::seq::SliceRandom;
use rand::Rng;

use super::{check_budget, poisson_one, Outcome, RunRecord};
use crate::bench::count_inversions;
use crate::error::{domain, Result};
use crate::rng::rng_from_seed;

/// (1+1) EA minimizing inversions: each iteration performs `k + 1` random
/// exchanges of two distinct positions, `k ~ Poisson(1)`, and keeps the
/// offspring if it has at most as many inversions.
pub fn run_sorting_ea(n: usize, seed: u64, budget: u64) -> Result<RunRecord> {
    if n < 1 {
        return domain("n must be at least 1");
    }
    check_budget(budget)?;
    Ok(sorting_ea(n, seed, budget).record(
        "sorting-ea".into(),
        "inversions".into(),
        n,
        seed,
        budget,
    ))
}

pub(crate) fn sorting_ea(n: usize, seed: u64, budget: u64) -> Outcome {
    let mut rng = rng_from_seed(seed);
    let mut x: Vec<usize> = (1..=n).collect();
    x.shuffle(&mut rng);
    let mut fx = count_inversions(&x);
    if fx == 0 {
        return Outcome {
            iterations: 0,
            evaluations: 1,
            censored: false,
        };
    }
    let mut swaps = Vec::new();
    for t in 1..=budget {
        swaps.clear();
        for _ in 0..=poisson_one(&mut rng) {
            let i = rng.random_range(0..n);
            let mut j = rng.random_range(0..n - 1);
            if j >= i {
                j += 1;
            }
            x.swap(i, j);
            swaps.push((i, j));
        }
        let fy = count_inversions(&x);
        if fy == 0 {
            return Outcome {
                iterations: t,
                evaluations: t + 1,
                censored: false,
            };
        }
        if fy <= fx {
            fx = fy;
        } else {
            for &(i, j) in swaps.iter().rev() {
                x.swap(i, j);
            }
        }
    }
    Outcome {
        iterations: budget,
        evaluations: budget + 1,
        censored: true,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sorts_small_arrays() {
        for s in 0..50 {
            let r = run_sorting_ea(6, s, 1_000_000).unwrap();
            assert!(!r.censored);
            assert_eq!(r.evaluations, r.iterations + 1);
        }
        assert_eq!(run_sorting_ea(1, 0, 5).unwrap().iterations, 0);
        assert_eq!(
            run_sorting_ea(7, 3, 1_000_000).unwrap(),
            run_sorting_ea(7, 3, 1_000_000).unwrap()
        );
    }
}
