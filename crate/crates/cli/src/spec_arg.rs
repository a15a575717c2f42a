use anyhow::{anyhow, bail, Context, Result};
use domrt::dist::{GatedGeomSpec, GatedTerm};

/// Parses `[OFFSET:]TERM,TERM,...` where each term is `SUCC[@GATE][xCOUNT]`.
///
/// `0.5x12` is twelve `Geom(½)` terms; `3:0.2@0.5,1` is `3 + X·Geom(0.2) + 1`
/// with `Pr[X = 1] = ½`, and `4:` is the point mass at 4.
pub fn parse_spec(text: &str) -> Result<GatedGeomSpec> {
    let text = text.trim();
    let (offset, body) = match text.split_once(':') {
        Some((o, b)) => (
            o.trim()
                .parse::<u64>()
                .with_context(|| format!("bad offset {o:?}"))?,
            b,
        ),
        None => (0, text),
    };
    let mut terms = Vec::new();
    for item in body.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (head, count) = match item.rsplit_once('x') {
            Some((h, c)) => (
                h,
                c.trim()
                    .parse::<usize>()
                    .with_context(|| format!("bad count in {item:?}"))?,
            ),
            None => (item, 1),
        };
        let (succ, gate) = match head.split_once('@') {
            Some((s, g)) => (
                s,
                g.trim()
                    .parse::<f64>()
                    .with_context(|| format!("bad gate in {item:?}"))?,
            ),
            None => (head, 1.0),
        };
        let succ: f64 = succ
            .trim()
            .parse()
            .with_context(|| format!("bad success probability in {item:?}"))?;
        let term = GatedTerm::new(gate, succ).map_err(|e| anyhow!("{item:?}: {e}"))?;
        terms.extend(std::iter::repeat_n(term, count));
    }
    if terms.is_empty() && !text.contains(':') {
        bail!("spec {text:?} has no terms; write `OFFSET:` for a point mass");
    }
    Ok(GatedGeomSpec::new(offset, terms)?)
}
