use std::fmt;
use std::io::Write;
use std::path::PathBuf;
use std::str::FromStr;

use anyhow::{Context, Result};
use clap::Args;
use domrt::algo::{
    collect_records, BitAlgo, Metric, MutationOp, Retarget, RunConfig, SampleMeta, SampleSet, Task,
    DEFAULT_BUDGET,
};
use domrt::bench::{Bench, WeightedGraph};

use crate::settings::Settings;
use crate::{emit, Status};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AlgoId {
    Rls,
    Ea,
    Rs,
    MuPlusOne,
    OnePlusLambda,
    Ollga,
    BestOfMu,
    Sorting,
    Sssp,
}

impl AlgoId {
    const ALL: [AlgoId; 9] = [
        AlgoId::Rls,
        AlgoId::Ea,
        AlgoId::Rs,
        AlgoId::MuPlusOne,
        AlgoId::OnePlusLambda,
        AlgoId::Ollga,
        AlgoId::BestOfMu,
        AlgoId::Sorting,
        AlgoId::Sssp,
    ];

    fn id(self) -> &'static str {
        match self {
            AlgoId::Rls => "rls",
            AlgoId::Ea => "ea",
            AlgoId::Rs => "rs",
            AlgoId::MuPlusOne => "mu+1",
            AlgoId::OnePlusLambda => "1+lambda",
            AlgoId::Ollga => "ollga",
            AlgoId::BestOfMu => "best-of-mu",
            AlgoId::Sorting => "sorting",
            AlgoId::Sssp => "sssp",
        }
    }
}

impl fmt::Display for AlgoId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for AlgoId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        AlgoId::ALL
            .iter()
            .copied()
            .find(|a| a.id() == s)
            .ok_or_else(|| {
                let ids: Vec<_> = AlgoId::ALL.iter().map(|a| a.id()).collect();
                format!("unknown algorithm {s:?}; valid ids: {}", ids.join(", "))
            })
    }
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// rls, ea, rs, mu+1, 1+lambda, ollga, best-of-mu, sorting or sssp.
    #[arg(long)]
    algo: Option<AlgoId>,
    /// onemax, leadingones or jump.
    #[arg(long)]
    bench: Option<String>,
    /// Gap size for jump.
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    n: Option<usize>,
    /// Number of independent runs [default: 100].
    #[arg(long)]
    runs: Option<usize>,
    /// Master seed; run i uses a seed derived from it and i [default: 0].
    #[arg(long)]
    seed: Option<u64>,
    /// Iteration budget per run [default: 100000000].
    #[arg(long)]
    budget: Option<u64>,
    /// iterations or evaluations [default: iterations].
    #[arg(long)]
    metric: Option<Metric>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    mu: Option<usize>,
    #[arg(long)]
    lambda: Option<usize>,
    /// Standard bit mutation rate when --op is not given [default: 1/n].
    #[arg(long)]
    rate: Option<f64>,
    /// Mutation operator: onebit, kbit:K, sbm:P, pos1:..., posr:..., fdk, fdr, mixed:P, heavy:B.
    #[arg(long)]
    op: Option<MutationOp>,
    /// Weighted graph file for sssp [default: path on --n vertices].
    #[arg(long, value_name = "FILE")]
    graph: Option<String>,
    /// exclude-current, any-other or adjacent [default: exclude-current].
    #[arg(long)]
    retarget: Option<Retarget>,
}

fn resolve_op(
    cfg: &mut Settings,
    op: Option<MutationOp>,
    rate: Option<f64>,
    n: usize,
) -> Result<MutationOp> {
    Ok(match cfg.opt("op", op)? {
        Some(op) => op,
        None => MutationOp::StandardBit(cfg.or("rate", rate, 1.0 / n as f64)?),
    })
}

pub fn run(args: SimulateArgs, mut cfg: Settings) -> Result<Status> {
    let algo: AlgoId = cfg.req("algo", args.algo)?;
    let runs = cfg.or("runs", args.runs, 100usize)?;
    let seed = cfg.or("seed", args.seed, 0u64)?;
    let budget = cfg.or("budget", args.budget, DEFAULT_BUDGET)?;
    let metric = cfg.or("metric", args.metric, Metric::Iterations)?;

    let config = match algo {
        AlgoId::Sorting => RunConfig {
            task: Task::Sorting,
            n: cfg.req("n", args.n)?,
            budget,
        },
        AlgoId::Sssp => {
            let graph = match cfg.opt::<String>("graph", args.graph)? {
                Some(path) => {
                    let text = std::fs::read_to_string(&path)
                        .with_context(|| format!("reading graph {path}"))?;
                    WeightedGraph::parse(&text).with_context(|| format!("in graph {path}"))?
                }
                None => WeightedGraph::path(cfg.req("n", args.n)?)?,
            };
            let retarget = cfg.or("retarget", args.retarget, Retarget::default())?;
            let n = graph.n_vertices();
            RunConfig {
                task: Task::Sssp { graph, retarget },
                n,
                budget,
            }
        }
        _ => {
            let n: usize = cfg.req("n", args.n)?;
            let bench_id: String = cfg.req("bench", args.bench)?;
            let k = if bench_id == "jump" {
                cfg.opt("k", args.k)?
            } else {
                None
            };
            let bench = Bench::from_id(&bench_id, k)?;
            let bits = match algo {
                AlgoId::Rls => BitAlgo::OnePlusOne(MutationOp::OneBit),
                AlgoId::Ea => BitAlgo::OnePlusOne(resolve_op(&mut cfg, args.op, args.rate, n)?),
                AlgoId::Rs => BitAlgo::RandomSearch,
                AlgoId::MuPlusOne => {
                    let mu = cfg.req("mu", args.mu)?;
                    BitAlgo::MuPlusOne {
                        mu,
                        op: resolve_op(&mut cfg, args.op, args.rate, n)?,
                    }
                }
                AlgoId::BestOfMu => {
                    let mu = cfg.req("mu", args.mu)?;
                    BitAlgo::BestOfMu {
                        mu,
                        op: resolve_op(&mut cfg, args.op, args.rate, n)?,
                    }
                }
                AlgoId::OnePlusLambda => {
                    let lambda = cfg.req("lambda", args.lambda)?;
                    BitAlgo::OnePlusLambda {
                        lambda,
                        op: resolve_op(&mut cfg, args.op, args.rate, n)?,
                    }
                }
                AlgoId::Ollga => BitAlgo::Ollga {
                    lambda: cfg.req("lambda", args.lambda)?,
                },
                AlgoId::Sorting | AlgoId::Sssp => unreachable!("handled above"),
            };
            RunConfig::bits(bits, bench, n).with_budget(budget)
        }
    };

    let records = collect_records(&config, runs, seed)?;
    let censored = records.iter().filter(|r| r.censored).count();
    let values: Vec<u64> = records
        .iter()
        .filter(|r| !r.censored)
        .map(|r| r.value(metric))
        .collect();

    let mut buf = Vec::new();
    cfg.echo(&mut buf)?;
    if censored > 0 {
        writeln!(buf, "# censored={censored}")?;
        writeln!(buf, "# runs={runs}")?;
    }
    let meta = SampleMeta {
        algo: config.algo_id(),
        bench: config.bench_id(),
        n: config.problem_size(),
        master_seed: seed,
    };
    if values.is_empty() {
        writeln!(
            buf,
            "# algo={}\n# bench={}\n# n={}",
            meta.algo, meta.bench, meta.n
        )?;
        writeln!(
            buf,
            "# metric={metric}\n# master_seed={seed}\n# n_samples=0\nruntime"
        )?;
    } else {
        SampleSet::new(values, metric, meta)?.write_csv(&mut buf)?;
    }
    emit(args.out.as_deref(), &buf)?;

    if censored > 0 {
        eprintln!("{censored} of {runs} runs censored at budget {budget}");
        return Ok(Status::Censored);
    }
    Ok(Status::Ok)
}
