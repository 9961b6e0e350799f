use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use super::Graph;
use crate::error::{Error, Result};

/// Renders `g` in edge-list format: a `n m` header, then one `u v` line per
/// edge with `u < v`, sorted lexicographically.
pub fn to_edge_list(g: &Graph) -> String {
    let mut out = format!("{} {}\n", g.n(), g.edge_count());
    for (u, v) in g.edges() {
        writeln!(out, "{u} {v}").unwrap();
    }
    out
}

/// Parses the edge-list format. Edges may appear in any order and with
/// either endpoint first; duplicates and self-loops are rejected. Blank
/// trailing lines are ignored.
pub fn parse_edge_list(text: &str) -> Result<Graph> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim()));
    let (hline, header) = lines.next().ok_or(Error::Parse {
        line: 1,
        msg: "missing header".into(),
    })?;
    let (n, m) = parse_pair(hline, header)?;
    let mut g = Graph::empty(n);
    let mut seen = 0usize;
    for (line, text) in lines {
        if text.is_empty() {
            continue;
        }
        let (u, v) = parse_pair(line, text)?;
        g.try_add_edge(u, v).map_err(|e| Error::Parse {
            line,
            msg: strip(e),
        })?;
        seen += 1;
    }
    if seen != m {
        return Err(Error::Parse {
            line: hline,
            msg: format!("header declares {m} edges but {seen} were listed"),
        });
    }
    Ok(g)
}

fn strip(e: Error) -> String {
    match e {
        Error::InvalidArgument(m) => m,
        other => other.to_string(),
    }
}

fn parse_pair(line: usize, text: &str) -> Result<(usize, usize)> {
    let mut it = text.split_ascii_whitespace();
    let mut next = || -> Result<usize> {
        let tok = it.next().ok_or_else(|| Error::Parse {
            line,
            msg: format!("expected two integers, got {text:?}"),
        })?;
        tok.parse().map_err(|_| Error::Parse {
            line,
            msg: format!("not a non-negative integer: {tok:?}"),
        })
    };
    let a = next()?;
    let b = next()?;
    if it.next().is_some() {
        return Err(Error::Parse {
            line,
            msg: format!("trailing tokens in {text:?}"),
        });
    }
    Ok((a, b))
}

pub fn load_graph(path: impl AsRef<Path>) -> Result<Graph> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_owned(),
        source,
    })?;
    parse_edge_list(&text)
}

pub fn save_graph(g: &Graph, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, to_edge_list(g)).map_err(|source| Error::Io {
        path: path.to_owned(),
        source,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate_gnp, GenSpec};
    use crate::prob::EdgeProb;
    use proptest::prelude::*;

    #[test]
    fn parses_path() {
        let g = parse_edge_list("3 2\n0 1\n1 2\n").unwrap();
        assert_eq!(g, Graph::path(3));
    }

    #[test]
    fn saves_sorted() {
        assert_eq!(to_edge_list(&Graph::complete(3)), "3 3\n0 1\n0 2\n1 2\n");
        let g = parse_edge_list("3 3\n2 1\n0 2\n1 0\n").unwrap();
        assert_eq!(to_edge_list(&g), "3 3\n0 1\n0 2\n1 2\n");
    }

    #[test]
    fn errors_name_the_line() {
        let e = parse_edge_list("3 1\n0 3\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 2, .. }), "{e}");
        assert!(e.to_string().contains("vertex 3 out of range"), "{e}");

        let e = parse_edge_list("3 2\n0 1\n1 0\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 3, .. }), "{e}");
        assert!(e.to_string().contains("duplicate"));

        let e = parse_edge_list("3 1\n1 1\n").unwrap_err();
        assert!(e.to_string().contains("self-loop"));

        let e = parse_edge_list("3 1\n0 x\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 2, .. }));

        assert!(parse_edge_list("3 2\n0 1\n").is_err());
        assert!(parse_edge_list("").is_err());
    }

    #[test]
    fn file_round_trip() {
        let dir = std::env::temp_dir().join(format!("rgcount-io-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("g.txt");
        let g = generate_gnp(&GenSpec {
            n: 30,
            p: EdgeProb::HALF,
            seed: 5,
        });
        save_graph(&g, &path).unwrap();
        assert_eq!(load_graph(&path).unwrap(), g);
        std::fs::remove_dir_all(&dir).unwrap();
        assert!(matches!(
            load_graph(dir.join("missing")),
            Err(Error::Io { .. })
        ));
    }

    proptest! {
        #[test]
        fn text_round_trip(n in 0usize..40, seed in any::<u64>(), q in 0u64..=3) {
            let g = generate_gnp(&GenSpec { n, p: EdgeProb::new(q, 3).unwrap(), seed });
            prop_assert_eq!(parse_edge_list(&to_edge_list(&g)).unwrap(), g);
        }
    }
}
