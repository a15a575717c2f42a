use std::io::Write;
use std::path::PathBuf;

use anyhow::{bail, Result};
use clap::Args;
use domrt::algo::MutationOp;
use domrt::analysis::{lo_exact_spec, lo_q_for_operator, lo_target_spec, preset_levels, Preset};

use crate::settings::Settings;
use crate::{emit, Status};

#[derive(Debug, Args)]
pub struct ModelArgs {
    /// A preset id, or lo-exact for the exact LeadingOnes model of --op.
    #[arg(long)]
    preset: Option<String>,
    #[arg(long)]
    n: Option<u64>,
    #[arg(long)]
    k: Option<u64>,
    #[arg(long)]
    mu: Option<u64>,
    #[arg(long)]
    lambda: Option<u64>,
    /// Mutation rate for the general preset.
    #[arg(long)]
    p: Option<f64>,
    /// Number of edges for the eulerian preset.
    #[arg(long)]
    m: Option<u64>,
    /// Mutation operator for lo-exact [default: onebit].
    #[arg(long)]
    op: Option<MutationOp>,
    /// For lo-exact: time to reach this LeadingOnes value instead of n.
    #[arg(long)]
    target: Option<usize>,
    /// Truncated tail mass; 0 requires finite support [default: 1e-9].
    #[arg(long)]
    eps: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

pub fn run(args: ModelArgs, mut cfg: Settings) -> Result<Status> {
    let id: String = cfg.req("preset", args.preset)?;
    let spec = if id == "lo-exact" {
        let n: u64 = cfg.req("n", args.n)?;
        let op = cfg.or("op", args.op, MutationOp::OneBit)?;
        let q = lo_q_for_operator(&op, n as usize)?;
        match cfg.opt("target", args.target)? {
            Some(a) => lo_target_spec(&q, a)?,
            None => lo_exact_spec(&q)?,
        }
    } else {
        let preset = match id.as_str() {
            "onemax" => Preset::OneMax {
                n: cfg.req("n", args.n)?,
            },
            "sorting" => Preset::Sorting {
                n: cfg.req("n", args.n)?,
            },
            "mu1-lo" => Preset::MuPlusOneLo {
                n: cfg.req("n", args.n)?,
                mu: cfg.req("mu", args.mu)?,
            },
            "jump" => Preset::Jump {
                n: cfg.req("n", args.n)?,
                k: cfg.req("k", args.k)?,
            },
            "general" => Preset::General {
                n: cfg.req("n", args.n)?,
                p: cfg.req("p", args.p)?,
            },
            "eulerian" => Preset::Eulerian {
                m: cfg.req("m", args.m)?,
            },
            "1+lambda" => Preset::OnePlusLambda {
                n: cfg.req("n", args.n)?,
                lambda: cfg.req("lambda", args.lambda)?,
            },
            "sssp" => Preset::Sssp {
                n: cfg.req("n", args.n)?,
            },
            "jump-lower" => Preset::JumpLower {
                n: cfg.req("n", args.n)?,
                k: cfg.req("k", args.k)?,
            },
            _ => bail!(
                "unknown preset {id:?}; valid ids: {}, lo-exact",
                Preset::IDS.join(", ")
            ),
        };
        preset_levels(&preset)?.to_spec()
    };
    let eps = cfg.or("eps", args.eps, 1e-9)?;
    let dist = spec.exact_dist(eps)?;

    let mut buf = Vec::new();
    cfg.echo(&mut buf)?;
    writeln!(buf, "# mean={}", spec.mean())?;
    writeln!(buf, "# variance={}", spec.variance())?;
    writeln!(buf, "# eps={eps}")?;
    dist.write_csv(&mut buf)?;
    emit(args.out.as_deref(), &buf)?;
    Ok(Status::Ok)
}
