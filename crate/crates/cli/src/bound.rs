use std::fmt::Write as _;
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::Args;
use domrt::bounds::{
    coupon_sum_bound, geom_sum_lower, geom_sum_upper, harmonic_bound, harmonic_sum_bound,
    harmonic_sum_threshold, integer_threshold_at_least, integer_threshold_at_most, validate_bound,
    validate_lower_bound, witt_bounds, BoundFamily,
};
use domrt::dist::GatedGeomSpec;

use crate::settings::Settings;
use crate::spec_arg::parse_spec;
use crate::{emit, Status};

#[derive(Debug, Args)]
pub struct BoundArgs {
    /// janson1, janson2, scheideler, weak, equal, witt, harmonic, harmonic-sum,
    /// coupon, lower-janson, lower-middle or lower-scheideler.
    #[arg(long)]
    family: Option<BoundFamily>,
    #[arg(long)]
    n: Option<u64>,
    #[arg(long)]
    p_min: Option<f64>,
    #[arg(long)]
    mu: Option<f64>,
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long)]
    lambda: Option<f64>,
    /// Sum of 1/p_i^2, for witt.
    #[arg(long)]
    s: Option<f64>,
    /// Expected value, for witt.
    #[arg(long)]
    expect: Option<f64>,
    /// Constant C in p_i >= C*i/n [default: 1].
    #[arg(long)]
    c: Option<f64>,
    /// Number of summed copies [default: 1].
    #[arg(long)]
    m: Option<u64>,
    /// Coupons to collect [default: n].
    #[arg(long)]
    k: Option<u64>,
    /// START:STOP:POINTS, evenly spaced over delta or lambda.
    #[arg(long)]
    grid: Option<String>,
    /// Check the bound against the exact tail of [OFFSET:]SUCC[@GATE][xCOUNT],...
    /// Parameters not given are derived from the spec.
    #[arg(long, value_name = "SPEC")]
    validate: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn grid_points(text: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = text.split(':').collect();
    let [start, stop, points] = parts[..] else {
        bail!("grid {text:?} must be START:STOP:POINTS");
    };
    let start: f64 = start
        .trim()
        .parse()
        .with_context(|| format!("bad grid start in {text:?}"))?;
    let stop: f64 = stop
        .trim()
        .parse()
        .with_context(|| format!("bad grid stop in {text:?}"))?;
    let points: usize = points
        .trim()
        .parse()
        .with_context(|| format!("bad grid size in {text:?}"))?;
    Ok(match points {
        0 => bail!("grid {text:?} needs at least one point"),
        1 => vec![start],
        _ => (0..points)
            .map(|i| start + (stop - start) * i as f64 / (points - 1) as f64)
            .collect(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Tail {
    Upper,
    Lower,
}

struct Row {
    tail: Tail,
    value: f64,
    threshold: Option<f64>,
    bound: f64,
}

/// A family with its parameters fixed, mapping the deviation to bound rows.
type Evaluator = Box<dyn Fn(f64) -> Result<Vec<Row>>>;

fn count_terms(spec: &GatedGeomSpec) -> u64 {
    spec.terms().len() as u64
}

fn evaluator(
    family: BoundFamily,
    args: &BoundArgs,
    spec: Option<&GatedGeomSpec>,
    cfg: &mut Settings,
) -> Result<Evaluator> {
    let derive_f =
        |cfg: &mut Settings, key: &str, flag: Option<f64>, from: Option<f64>| -> Result<f64> {
            match (cfg.opt(key, flag)?, from) {
                (Some(v), _) => Ok(v),
                (None, Some(v)) => {
                    cfg.derived(key, &v);
                    Ok(v)
                }
                (None, None) => bail!("missing required option --{key}"),
            }
        };
    let p_spec = spec.and_then(GatedGeomSpec::min_succ);
    let mu_spec = spec.map(GatedGeomSpec::mean);

    if let Some(upper) = family.upper() {
        let n = match (cfg.opt("n", args.n)?, spec) {
            (Some(n), _) => n,
            (None, Some(s)) => {
                cfg.derived("n", &count_terms(s));
                count_terms(s)
            }
            (None, None) => bail!("missing required option --n"),
        };
        let (p_min, mu) = if family == BoundFamily::Equal {
            let p = match cfg.opt("p-min", args.p_min)? {
                Some(p) => Some(p),
                None => p_spec.inspect(|p| cfg.derived("p-min", p)),
            };
            let mu = match cfg.opt("mu", args.mu)? {
                Some(mu) => Some(mu),
                None => mu_spec
                    .or(p.map(|p| n as f64 / p))
                    .inspect(|m| cfg.derived("mu", m)),
            };
            (p, mu)
        } else {
            let p = derive_f(cfg, "p-min", args.p_min, p_spec)?;
            (Some(p), Some(derive_f(cfg, "mu", args.mu, mu_spec)?))
        };
        return Ok(Box::new(move |delta| {
            // The equal-probability bound depends on n and delta alone.
            let bound = geom_sum_upper(
                upper,
                n as usize,
                p_min.unwrap_or(1.0),
                mu.unwrap_or(n as f64),
                delta,
            )?;
            Ok(vec![Row {
                tail: Tail::Upper,
                value: delta,
                threshold: mu.map(|m| (1.0 + delta) * m),
                bound,
            }])
        }));
    }
    if let Some(lower) = family.lower() {
        let p_min = derive_f(cfg, "p-min", args.p_min, p_spec)?;
        let mu = derive_f(cfg, "mu", args.mu, mu_spec)?;
        return Ok(Box::new(move |delta| {
            let bound = geom_sum_lower(lower, p_min, mu, delta)?;
            Ok(vec![Row {
                tail: Tail::Lower,
                value: delta,
                threshold: Some((1.0 - delta) * mu),
                bound,
            }])
        }));
    }
    match family {
        BoundFamily::Witt => {
            let s = derive_f(cfg, "s", args.s, spec.map(GatedGeomSpec::sum_inv_sq))?;
            let p_min = derive_f(cfg, "p-min", args.p_min, p_spec)?;
            let expect = derive_f(cfg, "expect", args.expect, mu_spec)?;
            Ok(Box::new(move |lambda| {
                let w = witt_bounds(s, p_min, expect, lambda)?;
                Ok(vec![
                    Row {
                        tail: Tail::Upper,
                        value: lambda,
                        threshold: Some(w.upper_threshold),
                        bound: w.upper,
                    },
                    Row {
                        tail: Tail::Lower,
                        value: lambda,
                        threshold: Some(w.lower_threshold),
                        bound: w.lower,
                    },
                ])
            }))
        }
        BoundFamily::Harmonic => {
            let n = cfg.req("n", args.n)?;
            let c = cfg.or("c", args.c, 1.0)?;
            Ok(Box::new(move |delta| {
                let h = harmonic_bound(n, c, delta)?;
                Ok(vec![Row {
                    tail: Tail::Upper,
                    value: delta,
                    threshold: Some(h.threshold),
                    bound: h.tail_bound,
                }])
            }))
        }
        BoundFamily::HarmonicSum => {
            let n = cfg.req("n", args.n)?;
            let m = cfg.or("m", args.m, 1)?;
            let c = cfg.or("c", args.c, 1.0)?;
            Ok(Box::new(move |lambda| {
                let bound = harmonic_sum_bound(n, m, c, lambda)?;
                let threshold = harmonic_sum_threshold(n, m, c, lambda);
                Ok(vec![Row {
                    tail: Tail::Upper,
                    value: lambda,
                    threshold: Some(threshold),
                    bound,
                }])
            }))
        }
        BoundFamily::Coupon => {
            let n = cfg.req("n", args.n)?;
            let m = cfg.or("m", args.m, 1)?;
            let k = cfg.or("k", args.k, n)?;
            Ok(Box::new(move |delta| {
                let cb = coupon_sum_bound(n, m, k, delta)?;
                Ok(vec![Row {
                    tail: Tail::Upper,
                    value: delta,
                    threshold: Some(cb.threshold),
                    bound: cb.tail_bound,
                }])
            }))
        }
        _ => unreachable!("upper and lower families are handled above"),
    }
}

pub fn run(args: BoundArgs, mut cfg: Settings) -> Result<Status> {
    let family: BoundFamily = cfg.req("family", args.family)?;
    let spec = cfg
        .opt::<String>("validate", args.validate.clone())?
        .map(|s| parse_spec(&s))
        .transpose()?;
    let param = match family {
        BoundFamily::Witt | BoundFamily::HarmonicSum => "lambda",
        _ => "delta",
    };
    let values = match cfg.opt::<String>("grid", args.grid.clone())? {
        Some(g) => grid_points(&g)?,
        None => {
            let flag = if param == "lambda" {
                args.lambda
            } else {
                args.delta
            };
            vec![cfg.req(param, flag)?]
        }
    };
    let eval = evaluator(family, &args, spec.as_ref(), &mut cfg)?;

    let mut text = String::new();
    let mut header = format!("family,tail,{param},threshold,bound");
    if spec.is_some() {
        header.push_str(",exact,holds");
    }
    writeln!(text, "{header}")?;
    let (mut checked, mut failed) = (0, 0);
    for v in values {
        for row in eval(v)? {
            let tail = match row.tail {
                Tail::Upper => "upper",
                Tail::Lower => "lower",
            };
            let threshold = row.threshold.map(|t| t.to_string()).unwrap_or_default();
            write!(
                text,
                "{family},{tail},{},{threshold},{}",
                row.value, row.bound
            )?;
            if let Some(spec) = &spec {
                let Some(t) = row.threshold else {
                    bail!("validation needs a threshold; give --mu or --p-min");
                };
                let check = match row.tail {
                    Tail::Upper => validate_bound(spec, integer_threshold_at_least(t), row.bound)?,
                    Tail::Lower => {
                        validate_lower_bound(spec, integer_threshold_at_most(t), row.bound)?
                    }
                };
                checked += 1;
                failed += usize::from(!check.holds);
                write!(text, ",{},{}", check.exact, check.holds)?;
            }
            writeln!(text)?;
        }
    }

    let mut buf = Vec::new();
    cfg.echo(&mut buf)?;
    buf.extend_from_slice(text.as_bytes());
    let status = if spec.is_some() {
        let verdict = if failed == 0 { "PASS" } else { "FAIL" };
        let line = format!(
            "validation {verdict}: {} of {checked} rows hold",
            checked - failed
        );
        buf.extend_from_slice(format!("# {line}\n").as_bytes());
        eprintln!("{line}");
        if failed == 0 {
            Status::Ok
        } else {
            Status::Refuted
        }
    } else {
        Status::Ok
    };
    emit(args.out.as_deref(), &buf)?;
    Ok(status)
}
