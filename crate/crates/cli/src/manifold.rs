//! Manifold names: `pt`, `cpN`, `hypN_E` (degree `E` hypersurface of
//! dimension `N`), products joined by `x`, or inline JSON Chern data.

use serde::Deserialize;
use tatefgl::genus::{ChernBlock, ChernData};
use tatefgl::Error;

#[derive(Deserialize)]
struct BlockJson {
    var: String,
    top: u32,
    roots: Vec<(i64, i64)>,
    #[serde(default = "one")]
    degree: i64,
}

fn one() -> i64 {
    1
}

#[derive(Deserialize)]
struct ChernJson {
    blocks: Vec<BlockJson>,
}

fn factor(text: &str, var: &str) -> Result<ChernData, Error> {
    let bad = || Error::Parse(format!("unknown manifold factor {text:?}"));
    if text == "pt" {
        return Ok(ChernData::point());
    }
    if let Some(n) = text.strip_prefix("cp") {
        return Ok(ChernData::projective(var, n.parse().map_err(|_| bad())?));
    }
    if let Some(rest) = text.strip_prefix("hyp") {
        let (n, e) = rest.split_once('_').ok_or_else(bad)?;
        return Ok(ChernData::hypersurface(var, n.parse().map_err(|_| bad())?, e.parse().map_err(|_| bad())?));
    }
    Err(bad())
}

pub fn parse_manifold(text: &str) -> Result<ChernData, Error> {
    let text = text.trim();
    if text.starts_with('{') {
        let j: ChernJson = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let blocks = j
            .blocks
            .into_iter()
            .map(|b| ChernBlock { var: b.var, top: b.top, roots: b.roots, degree: b.degree })
            .collect();
        return Ok(ChernData { blocks });
    }
    let mut parts = Vec::new();
    let mut start = 0;
    for (i, _) in text.match_indices('x') {
        let rest = &text[i + 1..];
        if rest.starts_with("cp") || rest.starts_with("hyp") || rest.starts_with("pt") {
            parts.push(&text[start..i]);
            start = i + 1;
        }
    }
    parts.push(&text[start..]);
    let mut out = ChernData::point();
    for (i, p) in parts.iter().enumerate() {
        let var = if parts.len() == 1 { "h".to_string() } else { format!("h{}", i + 1) };
        out = out.product(&factor(p, &var)?)?;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names() {
        assert_eq!(parse_manifold("cp2").unwrap(), ChernData::projective("h", 2));
        let p = parse_manifold("cp1xcp1").unwrap();
        assert_eq!(p.dim(), 2);
        assert_eq!(p.vars(), vec!["h1", "h2"]);
        assert_eq!(parse_manifold("hyp4_6").unwrap(), ChernData::hypersurface("h", 4, 6));
        assert_eq!(parse_manifold("pt").unwrap().dim(), 0);
        let j = parse_manifold(r#"{"blocks":[{"var":"u","top":2,"roots":[[1,4],[4,-1]],"degree":4}]}"#).unwrap();
        assert_eq!(j, ChernData::hypersurface("u", 2, 4));
        assert!(parse_manifold("torus").is_err());
    }
}
