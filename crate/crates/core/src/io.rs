//! Plain-text hypergraph format.
//!
//! ```text
//! # comment
//! n 5
//! 0 1 2
//! 1 2 3
//! ```
//!
//! The first non-comment line declares the vertex count. Every further
//! non-comment line is one edge `i j k` with `0 <= i < j < k < n`. Duplicate
//! triples are rejected.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph3;

pub fn parse_hypergraph(text: &str) -> Result<Hypergraph3> {
    let mut h: Option<Hypergraph3> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let perr = |msg: String| Error::Parse { line: line_no, msg };
        let fields: Vec<&str> = line.split_whitespace().collect();
        match &mut h {
            None => {
                if fields.len() != 2 || fields[0] != "n" {
                    return Err(perr(format!("expected header `n <N>`, found `{line}`")));
                }
                let n: usize = fields[1]
                    .parse()
                    .map_err(|_| perr(format!("bad vertex count `{}`", fields[1])))?;
                h = Some(Hypergraph3::empty(n));
            }
            Some(h) => {
                if fields.len() != 3 {
                    return Err(perr(format!("expected three vertex ids, found `{line}`")));
                }
                let mut t = [0usize; 3];
                for (slot, f) in t.iter_mut().zip(&fields) {
                    *slot = f.parse().map_err(|_| perr(format!("bad vertex id `{f}`")))?;
                }
                let [i, j, k] = t;
                if !(i < j && j < k) {
                    return Err(perr(format!("edge `{line}` is not strictly increasing")));
                }
                if k >= h.n() {
                    return Err(perr(format!("vertex {k} out of range for n = {}", h.n())));
                }
                if !h.insert_edge(t) {
                    return Err(perr(format!("duplicate edge `{i} {j} {k}`")));
                }
            }
        }
    }
    h.ok_or(Error::Parse {
        line: text.lines().count().max(1),
        msg: "missing header `n <N>`".into(),
    })
}

/// Serialises `h` with edges in lexicographic order. `header` lines are
/// emitted first as `#` comments.
pub fn write_hypergraph(h: &Hypergraph3, header: &[String]) -> String {
    let mut out = String::new();
    for line in header {
        for l in line.lines() {
            let _ = writeln!(out, "# {l}");
        }
    }
    let _ = writeln!(out, "n {}", h.n());
    for [a, b, c] in h.edges() {
        let _ = writeln!(out, "{a} {b} {c}");
    }
    out
}
