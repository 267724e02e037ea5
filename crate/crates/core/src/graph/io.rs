use std::fs;
use std::io::Write;
use std::path::Path;

use super::Graph;
use crate::error::{Error, Result};

/// Reads a whitespace-separated edge list. See [`parse_edge_list`].
pub fn load_graph(path: impl AsRef<Path>) -> Result<Graph> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_edge_list(&text)
}

/// Parses lines of `u v` (0-based ids). `#` starts a comment. An optional
/// first data line `n <count>` fixes the vertex count; otherwise it is one
/// more than the largest id seen.
pub fn parse_edge_list(text: &str) -> Result<Graph> {
    let mut declared: Option<usize> = None;
    let mut edges: Vec<(usize, usize, usize)> = Vec::new();
    let mut seen_data = false;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut fields = line.split_whitespace();
        let first = fields.next().unwrap_or_default();
        let second = fields.next().ok_or_else(|| Error::Parse {
            line: line_no,
            message: format!("expected two fields, got `{line}`"),
        })?;
        if fields.next().is_some() {
            return Err(Error::Parse {
                line: line_no,
                message: format!("expected two fields, got `{line}`"),
            });
        }
        if first == "n" {
            if seen_data {
                return Err(Error::Parse {
                    line: line_no,
                    message: "`n <count>` header must precede all edges".into(),
                });
            }
            declared = Some(parse_id(second, line_no)?);
            seen_data = true;
            continue;
        }
        seen_data = true;
        let u = parse_id(first, line_no)?;
        let v = parse_id(second, line_no)?;
        if u == v {
            return Err(Error::SelfLoop {
                line: line_no,
                vertex: u,
            });
        }
        edges.push((line_no, u, v));
    }

    let num_vertices = match declared {
        Some(n) => {
            if let Some(&(line, u, v)) = edges.iter().find(|&&(_, u, v)| u.max(v) >= n) {
                return Err(Error::VertexOutOfRange {
                    line,
                    id: u.max(v),
                    num_vertices: n,
                });
            }
            n
        }
        None => edges.iter().map(|&(_, u, v)| u.max(v) + 1).max().unwrap_or(0),
    };

    let mut adj = vec![Vec::new(); num_vertices];
    for (_, u, v) in edges {
        adj[u].push(v);
        adj[v].push(u);
    }
    Ok(Graph::from_adjacency_unchecked(adj))
}

fn parse_id(field: &str, line: usize) -> Result<usize> {
    field.parse().map_err(|_| Error::Parse {
        line,
        message: format!("`{field}` is not a non-negative integer"),
    })
}

/// Writes the `n <count>` header followed by one `u v` line per edge.
pub fn write_edge_list<W: Write>(g: &Graph, mut out: W) -> std::io::Result<()> {
    writeln!(out, "n {}", g.num_vertices())?;
    for (u, v) in g.edges() {
        writeln!(out, "{u} {v}")?;
    }
    Ok(())
}

pub fn save_graph(g: &Graph, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let mut buf = Vec::new();
    write_edge_list(g, &mut buf).map_err(|e| Error::io(path, e))?;
    fs::write(path, buf).map_err(|e| Error::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triangle() {
        let g = parse_edge_list("0 1\n1 2\n2 0\n").unwrap();
        assert_eq!(g.degrees(), vec![2, 2, 2]);
    }

    #[test]
    fn self_loop_rejected_with_line() {
        let err = parse_edge_list("# header\n0 1\n0 0\n").unwrap_err();
        assert!(matches!(err, Error::SelfLoop { line: 3, vertex: 0 }));
    }

    #[test]
    fn five_cycle_matches_hand_built_adjacency() {
        let g = parse_edge_list("0 1\n1\t2\n2 3\n3 4 # closing soon\n4 0\n").unwrap();
        let expected = [[1, 4], [0, 2], [1, 3], [2, 4], [0, 3]];
        for (v, nbrs) in expected.iter().enumerate() {
            assert_eq!(g.neighbors(v), nbrs);
        }
        assert!(g.degrees().iter().all(|&d| d == 2));
    }

    #[test]
    fn header_fixes_vertex_count_and_range() {
        let g = parse_edge_list("n 5\n0 1\n").unwrap();
        assert_eq!(g.num_vertices(), 5);
        let err = parse_edge_list("n 3\n0 1\n1 3\n").unwrap_err();
        assert!(matches!(
            err,
            Error::VertexOutOfRange {
                line: 3,
                id: 3,
                num_vertices: 3
            }
        ));
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        assert!(matches!(
            parse_edge_list("0 1\n1 x\n"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(
            parse_edge_list("0 1 2\n"),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(matches!(
            parse_edge_list("0 1\nn 4\n"),
            Err(Error::Parse { line: 2, .. })
        ));
    }

    #[test]
    fn write_then_parse_is_identity() {
        let g = parse_edge_list("n 6\n0 1\n3 2\n1 2\n").unwrap();
        let mut buf = Vec::new();
        write_edge_list(&g, &mut buf).unwrap();
        assert_eq!(parse_edge_list(std::str::from_utf8(&buf).unwrap()).unwrap(), g);
    }
}
