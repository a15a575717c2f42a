use std::io::{BufRead, Write};

use rayon::prelude::*;

use super::bits::{
    ea_best_of_mu, mu_plus_one, ollga, one_plus_lambda, one_plus_one, random_search,
};
use super::perm::sorting_ea;
use super::sssp::sssp_ea;
use super::{check_budget, Metric, MutationOp, Outcome, Retarget, RunRecord};
use crate::bench::{Bench, Objective, WeightedGraph};
use crate::error::{domain, Error, Result};
use crate::rng::trial_seed;

/// Iteration budget used when none is given.
pub const DEFAULT_BUDGET: u64 = 100_000_000;

/// Algorithms on bit strings.
#[derive(Debug, Clone, PartialEq)]
pub enum BitAlgo {
    OnePlusOne(MutationOp),
    RandomSearch,
    MuPlusOne { mu: usize, op: MutationOp },
    OnePlusLambda { lambda: usize, op: MutationOp },
    Ollga { lambda: usize },
    BestOfMu { mu: usize, op: MutationOp },
}

impl BitAlgo {
    pub fn id(&self) -> String {
        match self {
            BitAlgo::OnePlusOne(op) => format!("(1+1) {op}"),
            BitAlgo::RandomSearch => "rs".into(),
            BitAlgo::MuPlusOne { mu, op } => format!("({mu}+1) {op}"),
            BitAlgo::OnePlusLambda { lambda, op } => format!("(1+{lambda}) {op}"),
            BitAlgo::Ollga { lambda } => format!("(1+({lambda},{lambda})) GA"),
            BitAlgo::BestOfMu { mu, op } => format!("(1+1)_{mu} {op}"),
        }
    }
}

/// What to simulate.
#[derive(Debug, Clone, PartialEq)]
pub enum Task {
    Bits {
        algo: BitAlgo,
        bench: Bench,
    },
    Sorting,
    Sssp {
        graph: WeightedGraph,
        retarget: Retarget,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub task: Task,
    /// Problem size; ignored for shortest paths, where the graph decides.
    pub n: usize,
    pub budget: u64,
}

impl RunConfig {
    pub fn bits(algo: BitAlgo, bench: Bench, n: usize) -> Self {
        RunConfig {
            task: Task::Bits { algo, bench },
            n,
            budget: DEFAULT_BUDGET,
        }
    }

    pub fn with_budget(mut self, budget: u64) -> Self {
        self.budget = budget;
        self
    }

    pub fn problem_size(&self) -> usize {
        match &self.task {
            Task::Sssp { graph, .. } => graph.n_vertices(),
            _ => self.n,
        }
    }

    pub fn algo_id(&self) -> String {
        match &self.task {
            Task::Bits { algo, .. } => algo.id(),
            Task::Sorting => "sorting-ea".into(),
            Task::Sssp { retarget, .. } => format!("sssp-ea {retarget}"),
        }
    }

    pub fn bench_id(&self) -> String {
        match &self.task {
            Task::Bits { bench, .. } => bench.id(),
            Task::Sorting => "inversions".into(),
            Task::Sssp { .. } => "sssp".into(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        check_budget(self.budget)?;
        let n = self.n;
        match &self.task {
            Task::Bits { algo, bench } => {
                bench.validate(n)?;
                match algo {
                    BitAlgo::OnePlusOne(op) => op.validate(n),
                    BitAlgo::RandomSearch => Ok(()),
                    BitAlgo::MuPlusOne { mu: size, op }
                    | BitAlgo::BestOfMu { mu: size, op }
                    | BitAlgo::OnePlusLambda { lambda: size, op } => {
                        if *size < 1 {
                            return domain("population sizes must be at least 1");
                        }
                        op.validate(n)
                    }
                    BitAlgo::Ollga { lambda } => {
                        if *lambda < 1 || *lambda > n {
                            return domain(format!("lambda = {lambda} must lie in [1, n = {n}]"));
                        }
                        Ok(())
                    }
                }
            }
            Task::Sorting if n < 1 => domain("n must be at least 1"),
            Task::Sorting | Task::Sssp { .. } => Ok(()),
        }
    }

    fn outcome(&self, seed: u64) -> Outcome {
        let (n, budget) = (self.n, self.budget);
        match &self.task {
            Task::Bits { algo, bench } => match algo {
                BitAlgo::OnePlusOne(op) => one_plus_one(bench, op, n, seed, budget),
                BitAlgo::RandomSearch => random_search(bench, n, seed, budget),
                BitAlgo::MuPlusOne { mu, op } => {
                    mu_plus_one(bench, *mu, op, n, seed, budget, &mut |_, _| {})
                }
                BitAlgo::OnePlusLambda { lambda, op } => {
                    one_plus_lambda(bench, *lambda, op, n, seed, budget)
                }
                BitAlgo::Ollga { lambda } => ollga(bench, *lambda, n, seed, budget),
                BitAlgo::BestOfMu { mu, op } => ea_best_of_mu(bench, *mu, op, n, seed, budget),
            },
            Task::Sorting => sorting_ea(n, seed, budget),
            Task::Sssp { graph, retarget } => sssp_ea(graph, *retarget, seed, budget),
        }
    }

    /// A single run with the given seed.
    pub fn run(&self, seed: u64) -> Result<RunRecord> {
        self.validate()?;
        Ok(self.outcome(seed).record(
            self.algo_id(),
            self.bench_id(),
            self.problem_size(),
            seed,
            self.budget,
        ))
    }
}

/// Descriptive metadata carried by a sample set.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SampleMeta {
    pub algo: String,
    pub bench: String,
    pub n: usize,
    pub master_seed: u64,
}

/// Sorted, uncensored runtimes.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleSet {
    values: Vec<u64>,
    metric: Metric,
    meta: SampleMeta,
}

impl SampleSet {
    pub fn new(mut values: Vec<u64>, metric: Metric, meta: SampleMeta) -> Result<Self> {
        if values.is_empty() {
            return domain("sample sets must not be empty");
        }
        values.sort_unstable();
        Ok(SampleSet {
            values,
            metric,
            meta,
        })
    }

    pub fn values(&self) -> &[u64] {
        &self.values
    }

    pub fn n_samples(&self) -> usize {
        self.values.len()
    }

    pub fn metric(&self) -> Metric {
        self.metric
    }

    pub fn meta(&self) -> &SampleMeta {
        &self.meta
    }

    /// Fraction of values `<= k`.
    pub fn ecdf(&self, k: u64) -> f64 {
        self.values.partition_point(|&v| v <= k) as f64 / self.values.len() as f64
    }

    /// Fraction of values `>= k`.
    pub fn upper_fraction(&self, k: u64) -> f64 {
        1.0 - self.values.partition_point(|&v| v < k) as f64 / self.values.len() as f64
    }

    pub fn mean(&self) -> f64 {
        self.values.iter().map(|&v| v as f64).sum::<f64>() / self.values.len() as f64
    }

    /// Standard error of the mean (sample standard deviation over √N).
    pub fn std_err(&self) -> f64 {
        let n = self.values.len() as f64;
        if n < 2.0 {
            return 0.0;
        }
        let m = self.mean();
        let var = self
            .values
            .iter()
            .map(|&v| (v as f64 - m).powi(2))
            .sum::<f64>()
            / (n - 1.0);
        (var / n).sqrt()
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "# algo={}", self.meta.algo)?;
        writeln!(w, "# bench={}", self.meta.bench)?;
        writeln!(w, "# n={}", self.meta.n)?;
        writeln!(w, "# metric={}", self.metric)?;
        writeln!(w, "# master_seed={}", self.meta.master_seed)?;
        writeln!(w, "# n_samples={}", self.values.len())?;
        writeln!(w, "runtime")?;
        for v in &self.values {
            writeln!(w, "{v}")?;
        }
        w.flush()
    }

    /// Reads the format written by [`SampleSet::write_csv`]. Unknown `#`
    /// comments are ignored; missing metadata takes default values.
    pub fn read_csv<R: BufRead>(r: R) -> Result<Self> {
        let mut meta = SampleMeta::default();
        let mut metric = Metric::Iterations;
        let mut declared = None;
        let mut header = false;
        let mut values = Vec::new();
        for line in r.lines() {
            let line = line.map_err(|e| Error::Parse(e.to_string()))?;
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(c) = line.strip_prefix('#') {
                let Some((k, v)) = c.trim().split_once('=') else {
                    continue;
                };
                let (k, v) = (k.trim(), v.trim());
                let int = |v: &str| {
                    v.parse::<u64>()
                        .map_err(|_| Error::Parse(format!("bad {k} value {v:?}")))
                };
                match k {
                    "algo" => meta.algo = v.to_string(),
                    "bench" => meta.bench = v.to_string(),
                    "n" => meta.n = int(v)? as usize,
                    "metric" => metric = v.parse()?,
                    "master_seed" => meta.master_seed = int(v)?,
                    "n_samples" => declared = Some(int(v)? as usize),
                    "censored" if int(v)? > 0 => {
                        return Err(Error::Censored {
                            count: int(v)? as usize,
                            total: 0,
                        });
                    }
                    _ => {}
                }
                continue;
            }
            if !header {
                if line != "runtime" {
                    return Err(Error::Parse(format!(
                        "expected header `runtime`, found {line:?}"
                    )));
                }
                header = true;
                continue;
            }
            values.push(
                line.parse::<u64>()
                    .map_err(|_| Error::Parse(format!("bad runtime {line:?}")))?,
            );
        }
        if !header {
            return Err(Error::Parse("missing `runtime` header".into()));
        }
        if let Some(d) = declared {
            if d != values.len() {
                return Err(Error::Parse(format!(
                    "n_samples={d} but {} values present",
                    values.len()
                )));
            }
        }
        Self::new(values, metric, meta)
    }
}

/// Every run in trial order, censored ones included. Trial `i` uses seed
/// `trial_seed(master_seed, i)`.
pub fn collect_records(
    config: &RunConfig,
    runs: usize,
    master_seed: u64,
) -> Result<Vec<RunRecord>> {
    if runs < 1 {
        return domain("runs must be at least 1");
    }
    config.validate()?;
    let (algo, bench, n) = (config.algo_id(), config.bench_id(), config.problem_size());
    Ok((0..runs as u64)
        .into_par_iter()
        .map(|i| {
            let seed = trial_seed(master_seed, i);
            config
                .outcome(seed)
                .record(algo.clone(), bench.clone(), n, seed, config.budget)
        })
        .collect())
}

/// Runs `runs` independent simulations in parallel. Trial `i` uses seed
/// `trial_seed(master_seed, i)`, so the result does not depend on thread
/// scheduling. Fails with [`Error::Censored`] if any run hit the budget.
pub fn collect_samples(
    config: &RunConfig,
    runs: usize,
    master_seed: u64,
    metric: Metric,
) -> Result<SampleSet> {
    if runs < 1 {
        return domain("runs must be at least 1");
    }
    config.validate()?;
    let outcomes: Vec<Outcome> = (0..runs as u64)
        .into_par_iter()
        .map(|i| config.outcome(trial_seed(master_seed, i)))
        .collect();
    let censored = outcomes.iter().filter(|o| o.censored).count();
    if censored > 0 {
        return Err(Error::Censored {
            count: censored,
            total: runs,
        });
    }
    let meta = SampleMeta {
        algo: config.algo_id(),
        bench: config.bench_id(),
        n: config.problem_size(),
        master_seed,
    };
    SampleSet::new(
        outcomes.iter().map(|o| o.value(metric)).collect(),
        metric,
        meta,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ea(n: usize) -> RunConfig {
        RunConfig::bits(
            BitAlgo::OnePlusOne(MutationOp::StandardBit(1.0 / n as f64)),
            Bench::OneMax,
            n,
        )
    }

    #[test]
    fn singleton_and_determinism() {
        let s = collect_samples(&ea(10), 1, 3, Metric::Iterations).unwrap();
        assert_eq!(s.n_samples(), 1);
        let a = collect_samples(&ea(10), 500, 3, Metric::Evaluations).unwrap();
        let b = collect_samples(&ea(10), 500, 3, Metric::Evaluations).unwrap();
        assert_eq!(a, b);
        assert!(a.values().windows(2).all(|w| w[0] <= w[1]));
        // Parallel collection agrees with sequential single runs.
        let mut direct: Vec<u64> = (0..500)
            .map(|i| ea(10).run(trial_seed(3, i)).unwrap().evaluations)
            .collect();
        direct.sort_unstable();
        assert_eq!(a.values(), &direct[..]);
    }

    #[test]
    fn independent_master_seeds_agree_statistically() {
        let a = collect_samples(&ea(20), 10_000, 1, Metric::Iterations).unwrap();
        let b = collect_samples(&ea(20), 10_000, 2, Metric::Iterations).unwrap();
        let se = (a.std_err().powi(2) + b.std_err().powi(2)).sqrt();
        assert!((a.mean() - b.mean()).abs() < 6.0 * se);
    }

    #[test]
    fn censoring_reported() {
        let cfg = RunConfig::bits(
            BitAlgo::OnePlusOne(MutationOp::StandardBit(0.05)),
            Bench::Jump(5),
            20,
        )
        .with_budget(10);
        match collect_samples(&cfg, 50, 1, Metric::Iterations) {
            Err(Error::Censored { count, total }) => assert!(count > 40 && total == 50),
            other => panic!("{other:?}"),
        }
        let records = collect_records(&cfg, 50, 1).unwrap();
        assert_eq!(records.len(), 50);
        assert!(records
            .iter()
            .filter(|r| r.censored)
            .all(|r| r.iterations == 10));
    }

    #[test]
    fn records_match_samples() {
        let cfg = ea(12);
        let records = collect_records(&cfg, 200, 3).unwrap();
        assert!(records
            .iter()
            .enumerate()
            .all(|(i, r)| r.seed == trial_seed(3, i as u64)));
        let mut values: Vec<u64> = records.iter().map(|r| r.evaluations).collect();
        values.sort_unstable();
        let samples = collect_samples(&cfg, 200, 3, Metric::Evaluations).unwrap();
        assert_eq!(samples.values(), &values[..]);
    }

    #[test]
    fn csv_roundtrip() {
        let s = collect_samples(&ea(8), 100, 42, Metric::Evaluations).unwrap();
        let mut buf = Vec::new();
        s.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("# algo=(1+1) sbm:0.125\n# bench=onemax\n# n=8\n# metric=evaluations\n# master_seed=42\n# n_samples=100\nruntime\n"));
        assert_eq!(SampleSet::read_csv(&buf[..]).unwrap(), s);
        assert!(SampleSet::read_csv(&b"runtime\n1\nx\n"[..]).is_err());
        assert!(SampleSet::read_csv(&b"k,pmf,cdf\n1,0.5,0.5\n"[..]).is_err());
        assert!(SampleSet::read_csv(&b"# n_samples=3\nruntime\n1\n"[..]).is_err());
        assert!(SampleSet::read_csv(&b"# censored=2\nruntime\n1\n"[..]).is_err());
    }

    #[test]
    fn ecdf_and_fractions() {
        let s =
            SampleSet::new(vec![3, 1, 2, 2], Metric::Iterations, SampleMeta::default()).unwrap();
        assert_eq!(s.values(), &[1, 2, 2, 3]);
        assert_eq!((s.ecdf(0), s.ecdf(2), s.ecdf(9)), (0.0, 0.75, 1.0));
        assert_eq!((s.upper_fraction(2), s.upper_fraction(4)), (0.75, 0.0));
        assert!(SampleSet::new(vec![], Metric::Iterations, SampleMeta::default()).is_err());
    }

    #[test]
    fn other_tasks_run() {
        let cfg = RunConfig {
            task: Task::Sorting,
            n: 5,
            budget: 1_000_000,
        };
        assert_eq!(
            collect_samples(&cfg, 20, 1, Metric::Iterations)
                .unwrap()
                .n_samples(),
            20
        );
        let g = WeightedGraph::path(4).unwrap();
        let cfg = RunConfig {
            task: Task::Sssp {
                graph: g,
                retarget: Retarget::default(),
            },
            n: 0,
            budget: 1_000_000,
        };
        let s = collect_samples(&cfg, 20, 1, Metric::Iterations).unwrap();
        assert_eq!(s.meta().n, 4);
    }
}
