//! Whitespace-separated `<i> <j> <w>` edge lists, 0-based, `#` comments.

use std::collections::HashSet;
use std::io::Write;
use std::path::Path;

use super::{Edge, Graph};
use crate::{Error, Result};

pub fn load_edge_list(path: impl AsRef<Path>) -> Result<Graph> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)?;
    parse_edge_list(&text, path)
}

/// Parse edge-list text; `origin` only labels error messages.
pub fn parse_edge_list(text: &str, origin: impl AsRef<Path>) -> Result<Graph> {
    let origin = origin.as_ref();
    let parse_err = |line: usize, reason: String| Error::Parse {
        path: origin.to_path_buf(),
        line,
        reason,
    };
    let mut edges = Vec::new();
    let mut seen = HashSet::new();
    let mut n = 0;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 3 {
            return Err(parse_err(
                line_no,
                format!("expected 3 fields, found {}", fields.len()),
            ));
        }
        let node = |s: &str| {
            s.parse::<usize>()
                .map_err(|e| parse_err(line_no, format!("bad node index {s:?}: {e}")))
        };
        let i = node(fields[0])?;
        let j = node(fields[1])?;
        let w: f64 = fields[2]
            .parse()
            .map_err(|e| parse_err(line_no, format!("bad weight {:?}: {e}", fields[2])))?;
        if !(w > 0.0 && w.is_finite()) {
            return Err(parse_err(line_no, format!("weight {w} must be positive")));
        }
        if i == j {
            return Err(Error::SelfLoop {
                path: origin.to_path_buf(),
                line: line_no,
                node: i,
            });
        }
        if !seen.insert((i.min(j), i.max(j))) {
            return Err(Error::DuplicateEdge {
                path: origin.to_path_buf(),
                line: line_no,
                i,
                j,
            });
        }
        n = n.max(i + 1).max(j + 1);
        edges.push(Edge { i, j, w });
    }
    Graph::new(n, edges)
}

pub fn write_edge_list(graph: &Graph, mut out: impl Write) -> std::io::Result<()> {
    for e in graph.edges() {
        writeln!(out, "{} {} {}", e.i, e.j, e.w)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_edge() {
        let g = parse_edge_list("0 1 1.0\n", "mem").unwrap();
        assert_eq!(g.n(), 2);
        assert_eq!(g.edge_count(), 1);
    }

    #[test]
    fn comments_blank_lines_and_crlf() {
        let g = parse_edge_list("# header\r\n\r\n0 1 0.5\r\n1\t2  2\r\n", "mem").unwrap();
        assert_eq!(g.n(), 3);
        assert_eq!(g.edges()[1].w, 2.0);
    }

    #[test]
    fn error_kinds() {
        assert!(matches!(
            parse_edge_list("0 1 1\n3 3 1.0\n", "mem"),
            Err(Error::SelfLoop { line: 2, node: 3, .. })
        ));
        assert!(matches!(
            parse_edge_list("0 1 1\n1 0 1.0\n", "mem"),
            Err(Error::DuplicateEdge { line: 2, .. })
        ));
        assert!(matches!(
            parse_edge_list("0 1\n", "mem"),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(matches!(
            parse_edge_list("0 x 1\n", "mem"),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(matches!(
            parse_edge_list("0 1 -2\n", "mem"),
            Err(Error::Parse { line: 1, .. })
        ));
    }

    #[test]
    fn write_then_parse_is_identity() {
        let g = crate::graph::gen_sensor_graph(40, 0.4, 2).unwrap();
        let mut buf = Vec::new();
        write_edge_list(&g, &mut buf).unwrap();
        let back = parse_edge_list(std::str::from_utf8(&buf).unwrap(), "mem").unwrap();
        assert_eq!(back, g);
    }
}
