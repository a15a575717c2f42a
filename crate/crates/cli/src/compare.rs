use std::io::Write;
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::Args;
use domrt::algo::SampleSet;
use domrt::analysis::{empirical_dominates, Evidence, Verdict};
use domrt::dist::DiscreteDist;

use crate::settings::Settings;
use crate::{emit, Status};

#[derive(Debug, Args)]
pub struct CompareArgs {
    /// Sample or distribution CSV claimed to be stochastically smaller.
    #[arg(long, value_name = "FILE")]
    a: Option<String>,
    /// Sample or distribution CSV claimed to be stochastically larger.
    #[arg(long, value_name = "FILE")]
    b: Option<String>,
    /// Each sample band holds with probability 1 - alpha [default: 0.01].
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

enum Loaded {
    Samples(SampleSet),
    Exact(DiscreteDist),
}

impl Loaded {
    fn read(path: &str) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {path}"))?;
        let first = text
            .lines()
            .map(str::trim)
            .find(|l| !l.is_empty() && !l.starts_with('#'));
        let loaded = match first {
            Some("k,pmf,cdf") => DiscreteDist::read_csv(text.as_bytes()).map(Loaded::Exact),
            Some("runtime") => SampleSet::read_csv(text.as_bytes()).map(Loaded::Samples),
            _ => bail!("{path}: neither a sample CSV (header `runtime`) nor a distribution CSV (header `k,pmf,cdf`)"),
        };
        loaded.with_context(|| format!("in {path}"))
    }

    fn evidence(&self) -> Evidence<'_> {
        match self {
            Loaded::Samples(s) => Evidence::Samples(s),
            Loaded::Exact(d) => Evidence::Exact(d),
        }
    }

    fn describe(&self) -> String {
        match self {
            Loaded::Samples(s) => format!("samples n={} mean={}", s.n_samples(), s.mean()),
            Loaded::Exact(d) => format!(
                "distribution support={}..={} mean={}",
                d.lo(),
                d.hi(),
                d.mean()
            ),
        }
    }
}

pub fn run(args: CompareArgs, mut cfg: Settings) -> Result<Status> {
    let path_a: String = cfg.req("a", args.a)?;
    let path_b: String = cfg.req("b", args.b)?;
    let alpha = cfg.or("alpha", args.alpha, 0.01)?;
    let (a, b) = (Loaded::read(&path_a)?, Loaded::read(&path_b)?);
    let verdict = empirical_dominates(a.evidence(), b.evidence(), alpha)?;

    let mut buf = Vec::new();
    cfg.echo(&mut buf)?;
    writeln!(buf, "# a: {}", a.describe())?;
    writeln!(buf, "# b: {}", b.describe())?;
    writeln!(buf, "verdict,at,gap,band_a,band_b")?;
    let (band_a, band_b) = (a.evidence().band(alpha), b.evidence().band(alpha));
    let status = match verdict {
        Verdict::Consistent => {
            writeln!(buf, "consistent,,,{band_a},{band_b}")?;
            Status::Ok
        }
        Verdict::Refuted { at, gap } => {
            writeln!(buf, "refuted,{at},{gap},{band_a},{band_b}")?;
            Status::Refuted
        }
    };
    emit(args.out.as_deref(), &buf)?;
    Ok(status)
}
