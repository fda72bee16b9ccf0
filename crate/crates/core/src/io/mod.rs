//! Line-oriented text formats: weighted graphs (`#wgraph v1`), two-layer
//! systems (`#tls v1`), modelled codes (`#code v1`), words, and affine specs
//! (`#affine v1`). Parse errors carry 1-based line numbers.

use crate::affine::AffineCodeSpec;
use crate::code::{ConstraintRow, LinearCodeModel, Word};
use crate::graph::WeightedGraph;
use crate::ratio::{fmt_frac, parse_rat, rat_int, Rat};
use crate::system::{SystemData, TwoLayerSystem};
use crate::{Error, Result};
use std::collections::HashMap;
use std::path::Path;

fn lines_of(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty())
}

fn expect_header(text: &str, header: &str) -> Result<()> {
    match lines_of(text).next() {
        Some((_, first)) if first.starts_with(header) => Ok(()),
        Some((line, first)) => Err(Error::parse(
            line,
            format!("expected header `{header}`, found `{first}`"),
        )),
        None => Err(Error::parse(1, "empty file".to_string())),
    }
}

/// Parses a rational token, or returns None when the token does not look like
/// one (used where a weight may be omitted, defaulting to 1).
fn try_weight(token: &str) -> Option<Rat> {
    if token.contains('/') || token.chars().next().is_some_and(|c| c.is_ascii_digit()) {
        parse_rat(token).ok()
    } else {
        None
    }
}

pub fn parse_wgraph(text: &str) -> Result<WeightedGraph> {
    expect_header(text, "#wgraph v1")?;
    let mut labels: Vec<String> = Vec::new();
    let mut index: HashMap<String, usize> = HashMap::new();
    let mut edges = Vec::new();
    for (ln, line) in lines_of(text).skip(1) {
        let mut tokens = line.split_whitespace();
        match tokens.next() {
            Some("vertex") => {
                let name = tokens
                    .next()
                    .ok_or_else(|| Error::parse(ln, "vertex needs a name".to_string()))?;
                if index.insert(name.to_string(), labels.len()).is_some() {
                    return Err(Error::parse(ln, format!("duplicate vertex `{name}`")));
                }
                labels.push(name.to_string());
            }
            Some("edge") => {
                let a = tokens
                    .next()
                    .ok_or_else(|| Error::parse(ln, "edge needs two endpoints".to_string()))?;
                let b = tokens
                    .next()
                    .ok_or_else(|| Error::parse(ln, "edge needs two endpoints".to_string()))?;
                let w = tokens
                    .next()
                    .ok_or_else(|| Error::parse(ln, "edge needs a weight".to_string()))?;
                let ia = *index
                    .get(a)
                    .ok_or_else(|| Error::parse(ln, format!("unknown vertex `{a}`")))?;
                let ib = *index
                    .get(b)
                    .ok_or_else(|| Error::parse(ln, format!("unknown vertex `{b}`")))?;
                let weight =
                    parse_rat(w).map_err(|e| Error::parse(ln, format!("bad weight: {e}")))?;
                edges.push((ia, ib, weight));
            }
            Some(other) => {
                return Err(Error::parse(ln, format!("unknown directive `{other}`")));
            }
            None => unreachable!("blank lines are filtered"),
        }
    }
    WeightedGraph::new(labels, edges).map_err(|e| Error::parse(0, e.to_string()))
}

pub fn write_wgraph(g: &WeightedGraph) -> String {
    let mut out = String::from("#wgraph v1\n");
    for label in g.labels() {
        out.push_str(&format!("vertex {label}\n"));
    }
    for (a, b, w) in g.edges() {
        out.push_str(&format!(
            "edge {} {} {}\n",
            g.labels()[*a],
            g.labels()[*b],
            fmt_frac(w)
        ));
    }
    out
}

pub fn parse_system(text: &str) -> Result<TwoLayerSystem> {
    expect_header(text, "#tls v1")?;
    let mut vertex_labels: Vec<String> = Vec::new();
    let mut vertex_index: HashMap<String, usize> = HashMap::new();
    let mut edge_labels: Vec<String> = Vec::new();
    let mut edge_index: HashMap<String, usize> = HashMap::new();
    let mut edges: Vec<Vec<usize>> = Vec::new();
    let mut tops = Vec::new();
    for (ln, line) in lines_of(text).skip(1) {
        let mut tokens = line.split_whitespace().peekable();
        match tokens.next() {
            Some("vertex") => {
                let name = tokens
                    .next()
                    .ok_or_else(|| Error::parse(ln, "vertex needs a name".to_string()))?;
                if vertex_index
                    .insert(name.to_string(), vertex_labels.len())
                    .is_some()
                {
                    return Err(Error::parse(ln, format!("duplicate vertex `{name}`")));
                }
                vertex_labels.push(name.to_string());
            }
            Some("edge") => {
                let name = tokens
                    .next()
                    .ok_or_else(|| Error::parse(ln, "edge needs a name".to_string()))?;
                if edge_index
                    .insert(name.to_string(), edge_labels.len())
                    .is_some()
                {
                    return Err(Error::parse(ln, format!("duplicate edge `{name}`")));
                }
                let mut members = Vec::new();
                for v in tokens {
                    let idx = *vertex_index
                        .get(v)
                        .ok_or_else(|| Error::parse(ln, format!("unknown vertex `{v}`")))?;
                    members.push(idx);
                }
                if members.is_empty() {
                    return Err(Error::parse(
                        ln,
                        "edge needs at least one vertex".to_string(),
                    ));
                }
                edge_labels.push(name.to_string());
                edges.push(members);
            }
            Some("top") => {
                // Optional leading weight token; defaults to 1.
                let first = tokens
                    .peek()
                    .copied()
                    .ok_or_else(|| Error::parse(ln, "top needs edges".to_string()))?;
                let weight = match try_weight(first) {
                    Some(w) => {
                        tokens.next();
                        w
                    }
                    None => rat_int(1),
                };
                let mut members = Vec::new();
                for e in tokens {
                    let idx = *edge_index
                        .get(e)
                        .ok_or_else(|| Error::parse(ln, format!("unknown edge `{e}`")))?;
                    members.push(idx);
                }
                if members.is_empty() {
                    return Err(Error::parse(ln, "top needs at least one edge".to_string()));
                }
                tops.push((weight, members));
            }
            Some(other) => {
                return Err(Error::parse(ln, format!("unknown directive `{other}`")));
            }
            None => unreachable!("blank lines are filtered"),
        }
    }
    TwoLayerSystem::build(SystemData {
        vertex_labels,
        edge_labels,
        edges,
        tops,
        declared: None,
    })
    .map_err(|e| Error::parse(0, e.to_string()))
}

pub fn write_system(x: &TwoLayerSystem) -> String {
    let mut out = String::from("#tls v1\n");
    for label in x.vertex_labels() {
        out.push_str(&format!("vertex {label}\n"));
    }
    for e in 0..x.edge_count() {
        out.push_str(&format!("edge {}", x.edge_labels()[e]));
        for &v in x.edge(e) {
            out.push_str(&format!(" {}", x.vertex_labels()[v]));
        }
        out.push('\n');
    }
    for t in 0..x.top_count() {
        out.push_str(&format!("top {}", fmt_frac(x.top_weight(t))));
        for &e in x.top(t) {
            out.push_str(&format!(" {}", x.edge_labels()[e]));
        }
        out.push('\n');
    }
    out
}

fn header_params(line: &str) -> HashMap<String, String> {
    line.split_whitespace()
        .filter_map(|tok| tok.split_once('='))
        .map(|(k, v)| (k.to_string(), v.to_string()))
        .collect()
}

/// Parses a `#code v1 p=<prime> system=<path>` file; the backing system is
/// loaded relative to `base_dir`.
pub fn parse_code(text: &str, base_dir: &Path) -> Result<LinearCodeModel> {
    expect_header(text, "#code v1")?;
    let (_, header) = lines_of(text).next().expect("header checked");
    let params = header_params(header);
    let p: u64 = params
        .get("p")
        .ok_or_else(|| Error::parse(1, "missing p=<prime>".to_string()))?
        .parse()
        .map_err(|_| Error::parse(1, "p must be an integer".to_string()))?;
    let system_path = params
        .get("system")
        .ok_or_else(|| Error::parse(1, "missing system=<path>".to_string()))?;
    let resolved = base_dir.join(system_path);
    let system_text = std::fs::read_to_string(&resolved).map_err(|e| {
        Error::parse(
            1,
            format!("cannot read system `{}`: {e}", resolved.display()),
        )
    })?;
    let system = parse_system(&system_text)?;

    let mut rows = Vec::new();
    let mut deps = Vec::new();
    let mut row_names: Vec<String> = Vec::new();
    for (ln, line) in lines_of(text).skip(1) {
        let mut tokens = line.split_whitespace();
        match tokens.next() {
            Some("row") => {
                let ename = tokens
                    .next()
                    .ok_or_else(|| Error::parse(ln, "row needs an edge name".to_string()))?;
                let e = system
                    .edge_index(ename)
                    .ok_or_else(|| Error::parse(ln, format!("unknown edge `{ename}`")))?;
                let support = system.edge(e);
                let coeffs: Vec<u64> = tokens
                    .map(|t| {
                        t.parse::<u64>()
                            .map_err(|_| Error::parse(ln, format!("bad coefficient `{t}`")))
                    })
                    .collect::<Result<_>>()?;
                if coeffs.len() != support.len() {
                    return Err(Error::parse(
                        ln,
                        format!(
                            "row `{ename}` has {} coefficients for a support of size {}",
                            coeffs.len(),
                            support.len()
                        ),
                    ));
                }
                let entries = support.iter().copied().zip(coeffs).collect();
                rows.push(
                    ConstraintRow::new(entries, p).map_err(|e| Error::parse(ln, e.to_string()))?,
                );
                row_names.push(ename.to_string());
            }
            Some("dep") => {
                let mut ld = Vec::new();
                for tok in tokens {
                    let (ename, coeff) = tok.split_once(':').ok_or_else(|| {
                        Error::parse(ln, format!("dep entries look like name:coeff, got `{tok}`"))
                    })?;
                    let row = row_names.iter().position(|n| n == ename).ok_or_else(|| {
                        Error::parse(ln, format!("dep references unknown row `{ename}`"))
                    })?;
                    let c: u64 = coeff
                        .parse()
                        .map_err(|_| Error::parse(ln, format!("bad coefficient `{coeff}`")))?;
                    ld.push((row, c));
                }
                if ld.is_empty() {
                    return Err(Error::parse(ln, "dep needs at least one entry".to_string()));
                }
                deps.push(ld);
            }
            Some(other) => {
                return Err(Error::parse(ln, format!("unknown directive `{other}`")));
            }
            None => unreachable!("blank lines are filtered"),
        }
    }
    LinearCodeModel::build(p, system, rows, deps).map_err(|e| Error::parse(0, e.to_string()))
}

/// Writes a code file; `system_ref` is the path recorded in the header.
pub fn write_code(code: &LinearCodeModel, system_ref: &str) -> String {
    let system = code.system();
    let mut out = format!("#code v1 p={} system={system_ref}\n", code.p());
    for (r, row) in code.rows().iter().enumerate() {
        let e = code.edge_of_row(r);
        out.push_str(&format!("row {}", system.edge_labels()[e]));
        for c in &row.coeffs {
            out.push_str(&format!(" {c}"));
        }
        out.push('\n');
    }
    for ld in code.deps() {
        out.push_str("dep");
        for &(r, c) in ld {
            let e = code.edge_of_row(r);
            out.push_str(&format!(" {}:{c}", system.edge_labels()[e]));
        }
        out.push('\n');
    }
    out
}

/// Parses `word <v=val> ...` lines against a system's vertex set. Unlisted
/// vertices default to 0.
pub fn parse_words(text: &str, system: &TwoLayerSystem, p: u64) -> Result<Vec<Word>> {
    let mut words = Vec::new();
    for (ln, line) in lines_of(text) {
        let mut tokens = line.split_whitespace();
        match tokens.next() {
            Some("word") => {
                let mut w = Word::zero(system.vertex_count());
                for tok in tokens {
                    let (name, val) = tok.split_once('=').ok_or_else(|| {
                        Error::parse(ln, format!("word entries look like v=val, got `{tok}`"))
                    })?;
                    let v = system
                        .vertex_index(name)
                        .ok_or_else(|| Error::parse(ln, format!("unknown vertex `{name}`")))?;
                    let x: u64 = val
                        .parse()
                        .map_err(|_| Error::parse(ln, format!("bad value `{val}`")))?;
                    if x >= p {
                        return Err(Error::parse(
                            ln,
                            format!("value {x} is not a residue mod {p}"),
                        ));
                    }
                    w.0[v] = x;
                }
                words.push(w);
            }
            Some(other) => {
                return Err(Error::parse(ln, format!("unknown directive `{other}`")));
            }
            None => unreachable!("blank lines are filtered"),
        }
    }
    if words.is_empty() {
        return Err(Error::parse(1, "no word lines found".to_string()));
    }
    Ok(words)
}

pub fn write_word(system: &TwoLayerSystem, w: &Word) -> String {
    let mut out = String::from("word");
    for (v, &val) in w.0.iter().enumerate() {
        if val != 0 {
            out.push_str(&format!(" {}={val}", system.vertex_labels()[v]));
        }
    }
    out.push('\n');
    out
}

/// `#affine v1 q=<prime> n=<int> p=<prime>` followed by one
/// `tau <c,c,...> ...` line of comma-separated coordinate vectors.
pub fn parse_affine_spec(text: &str) -> Result<AffineCodeSpec> {
    expect_header(text, "#affine v1")?;
    let (_, header) = lines_of(text).next().expect("header checked");
    let params = header_params(header);
    let get_int = |key: &str| -> Result<u64> {
        params
            .get(key)
            .ok_or_else(|| Error::parse(1, format!("missing {key}=<int>")))?
            .parse()
            .map_err(|_| Error::parse(1, format!("{key} must be an integer")))
    };
    let q = get_int("q")?;
    let n = get_int("n")? as usize;
    let p = get_int("p")?;
    let space = crate::affine::Space::new(q, n).map_err(|e| Error::parse(1, e.to_string()))?;
    let mut tau0 = Vec::new();
    for (ln, line) in lines_of(text).skip(1) {
        let mut tokens = line.split_whitespace();
        match tokens.next() {
            Some("tau") => {
                for tok in tokens {
                    let coords: Vec<u64> = tok
                        .split(',')
                        .map(|c| {
                            c.parse::<u64>()
                                .map_err(|_| Error::parse(ln, format!("bad coordinate `{c}`")))
                        })
                        .collect::<Result<_>>()?;
                    if coords.len() != n {
                        return Err(Error::parse(
                            ln,
                            format!(
                                "vector `{tok}` has {} coordinates, expected {n}",
                                coords.len()
                            ),
                        ));
                    }
                    if coords.iter().any(|&c| c >= q) {
                        return Err(Error::parse(
                            ln,
                            format!("vector `{tok}` has a coordinate >= {q}"),
                        ));
                    }
                    tau0.push(space.point(&coords));
                }
            }
            Some(other) => {
                return Err(Error::parse(ln, format!("unknown directive `{other}`")));
            }
            None => unreachable!("blank lines are filtered"),
        }
    }
    AffineCodeSpec::new(q, n, p, tau0).map_err(|e| Error::parse(0, e.to_string()))
}
