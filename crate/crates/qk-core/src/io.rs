//! Edge-list text format and DOT export.
//!
//! The format is a single header line `p dgraph <n> <m>` followed by exactly
//! `m` lines `<u> <v>`, one arc each, 0-based. Lines starting with `#` are
//! comments and may appear anywhere; blank lines are ignored. Serialization
//! is canonical: arcs sorted by `(tail, head)`, so equal digraphs produce
//! byte-identical files.

use crate::digraph::Digraph;
use crate::error::{Error, Result};

pub fn parse_digraph(text: &str) -> Result<Digraph> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (line_no, header) = lines
        .next()
        .ok_or_else(|| Error::Parse { line: 1, msg: "missing header".into() })?;
    let mut fields = header.split_whitespace();
    let (p, kind) = (fields.next(), fields.next());
    if p != Some("p") || kind != Some("dgraph") {
        return Err(Error::Parse {
            line: line_no,
            msg: format!("expected 'p dgraph <n> <m>', got '{header}'"),
        });
    }
    let n: usize = parse_field(fields.next(), line_no, "vertex count")?;
    let m: usize = parse_field(fields.next(), line_no, "arc count")?;
    if fields.next().is_some() {
        return Err(Error::Parse { line: line_no, msg: "trailing fields in header".into() });
    }

    let mut arcs = Vec::with_capacity(m);
    let mut seen = std::collections::HashSet::new();
    for _ in 0..m {
        let (line_no, line) = lines.next().ok_or_else(|| Error::Parse {
            line: text.lines().count(),
            msg: format!("expected {m} arc lines, found {}", arcs.len()),
        })?;
        let mut fields = line.split_whitespace();
        let u: usize = parse_field(fields.next(), line_no, "arc tail")?;
        let v: usize = parse_field(fields.next(), line_no, "arc head")?;
        if fields.next().is_some() {
            return Err(Error::Parse { line: line_no, msg: "trailing fields in arc line".into() });
        }
        if u >= n || v >= n {
            return Err(Error::Parse {
                line: line_no,
                msg: format!("vertex id out of range in arc {u} -> {v} (order {n})"),
            });
        }
        if u == v {
            return Err(Error::Parse { line: line_no, msg: format!("self-loop at vertex {u}") });
        }
        if !seen.insert((u, v)) {
            return Err(Error::Parse { line: line_no, msg: format!("duplicate arc {u} -> {v}") });
        }
        arcs.push((u, v));
    }
    if let Some((line_no, _)) = lines.next() {
        return Err(Error::Parse { line: line_no, msg: "trailing content after arc list".into() });
    }
    Digraph::new(n, arcs)
}

fn parse_field(field: Option<&str>, line: usize, what: &str) -> Result<usize> {
    field
        .ok_or_else(|| Error::Parse { line, msg: format!("missing {what}") })?
        .parse()
        .map_err(|_| Error::Parse { line, msg: format!("malformed {what}") })
}

pub fn serialize_digraph(d: &Digraph) -> String {
    serialize_digraph_with_comments(d, &[])
}

/// Canonical serialization with leading `#` comment lines.
pub fn serialize_digraph_with_comments(d: &Digraph, comments: &[&str]) -> String {
    let mut out = String::new();
    for c in comments {
        out.push_str("# ");
        out.push_str(c);
        out.push('\n');
    }
    out.push_str(&format!("p dgraph {} {}\n", d.order(), d.arc_count()));
    for (u, v) in d.arcs() {
        out.push_str(&format!("{u} {v}\n"));
    }
    out
}

/// One-directional DOT export; isolated vertices are emitted as bare nodes.
pub fn to_dot(d: &Digraph) -> String {
    let mut out = String::from("digraph {\n");
    for (u, v) in d.arcs() {
        out.push_str(&format!("  {u} -> {v};\n"));
    }
    for v in d.vertices() {
        if d.out_degree(v) == 0 && d.in_degree(v) == 0 {
            out.push_str(&format!("  {v};\n"));
        }
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_minimal() {
        let d = parse_digraph("p dgraph 2 1\n0 1\n").unwrap();
        assert_eq!(d.order(), 2);
        assert_eq!(d.arcs().collect::<Vec<_>>(), vec![(0, 1)]);
    }

    #[test]
    fn serialize_is_canonical() {
        let d = Digraph::new(3, [(2, 0), (0, 1), (1, 2)]).unwrap();
        assert_eq!(serialize_digraph(&d), "p dgraph 3 3\n0 1\n1 2\n2 0\n");
    }

    #[test]
    fn parse_rejects_self_loop() {
        let err = parse_digraph("p dgraph 2 1\n0 0\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }), "{err}");
    }

    #[test]
    fn parse_rejects_duplicates_and_range() {
        assert!(parse_digraph("p dgraph 2 2\n0 1\n0 1\n").is_err());
        assert!(parse_digraph("p dgraph 2 1\n0 5\n").is_err());
        assert!(parse_digraph("p dgraph 2 2\n0 1\n").is_err());
        assert!(parse_digraph("p dgraph 2 1\n0 1\n1 0\n").is_err());
        assert!(parse_digraph("x dgraph 2 1\n0 1\n").is_err());
    }

    #[test]
    fn comments_and_blanks_are_skipped() {
        let d = parse_digraph("# a comment\n\np dgraph 2 1\n# another\n0 1\n\n").unwrap();
        assert_eq!(d.arc_count(), 1);
    }

    #[test]
    fn dot_export() {
        let d = Digraph::new(3, [(0, 1)]).unwrap();
        assert_eq!(to_dot(&d), "digraph {\n  0 -> 1;\n  2;\n}\n");
    }
}
