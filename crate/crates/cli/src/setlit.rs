//! Set literals: `points:re,im;re,im;…`, `circle:cx,cy,r[,r2,…]`,
//! `segment:x1,y1,x2,y2`, `julia:<poly>`.

use num_complex::Complex64;
use preimage_core::parse::parse;
use preimage_core::sets::{julia_sample, CompactSet, JuliaParams};
use preimage_core::{Error, Field, Result};
use serde_json::{json, Value};

fn bad(msg: String) -> Error {
    Error::InvalidArgument(msg)
}

fn numbers(body: &str, what: &str) -> Result<Vec<f64>> {
    body.split(',')
        .map(|t| {
            let t = t.trim();
            t.parse::<f64>().ok().filter(|x| x.is_finite()).ok_or_else(|| bad(format!("{what}: not a number: {t:?}")))
        })
        .collect()
}

pub fn parse_set<F: Field>(literal: &str, julia: &JuliaParams, tol: f64) -> Result<CompactSet> {
    let (kind, body) = literal.split_once(':').ok_or_else(|| bad(format!("set literal needs a kind prefix: {literal:?}")))?;
    match kind.trim() {
        "points" => {
            let mut pts = Vec::new();
            for pair in body.split(';').filter(|p| !p.trim().is_empty()) {
                match numbers(pair, "points")?.as_slice() {
                    [re, im] => pts.push(Complex64::new(*re, *im)),
                    _ => return Err(bad(format!("points: expected re,im, got {pair:?}"))),
                }
            }
            if pts.is_empty() {
                return Err(bad("points: empty set".into()));
            }
            Ok(CompactSet::points_with_tol(pts, tol.min(1e-9)))
        }
        "circle" => {
            let v = numbers(body, "circle")?;
            if v.len() < 3 {
                return Err(bad("circle: expected cx,cy,r[,r2,…]".into()));
            }
            CompactSet::circles(Complex64::new(v[0], v[1]), v[2..].to_vec())
        }
        "segment" => match numbers(body, "segment")?.as_slice() {
            [x1, y1, x2, y2] => CompactSet::segment(Complex64::new(*x1, *y1), Complex64::new(*x2, *y2)),
            _ => Err(bad("segment: expected x1,y1,x2,y2".into())),
        },
        "julia" => {
            let f = parse::<F>(body)?;
            Ok(CompactSet::SampledJulia(julia_sample(&f, julia)?))
        }
        other => Err(bad(format!("unknown set kind {other:?}"))),
    }
}

/// The set as echoed in a report; sampled Julia sets are summarized rather than listed.
pub fn echo(literal: &str, set: &CompactSet) -> Value {
    let mut canonical = set.to_json();
    if let (CompactSet::SampledJulia(j), Some(obj)) = (set, canonical.as_object_mut()) {
        obj.remove("points");
        obj.insert("count".into(), json!(j.samples.len()));
    }
    json!({ "literal": literal, "set": canonical })
}

#[cfg(test)]
mod tests {
    use super::*;
    use preimage_core::GaussRat;

    fn set(s: &str) -> Result<CompactSet> {
        parse_set::<GaussRat>(s, &JuliaParams::with_samples(200), 1e-8)
    }

    #[test]
    fn literals() {
        assert_eq!(set("points:0,0;1,-1").unwrap().as_finite().unwrap().len(), 2);
        assert_eq!(set("circle:0,0,1,2").unwrap().kind(), CompactSet::circles(Complex64::new(0.0, 0.0), vec![1.0, 2.0]).unwrap().kind());
        assert!(matches!(set("segment:-1,0,1,0").unwrap(), CompactSet::Segment { .. }));
        assert!(matches!(set("julia:z^2-1").unwrap(), CompactSet::SampledJulia(_)));
    }

    #[test]
    fn malformed_literals_are_rejected() {
        for s in ["", "points:", "points:1", "circle:0,0", "segment:0,0,1", "disk:0,0,1", "circle:0,0,x", "julia:z^"] {
            assert!(set(s).is_err(), "{s}");
        }
    }
}
