//! On-disk formats: plain edge lists, list assignments and colorings as JSON.
//! Writers are canonical so write → read → write is byte-identical.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Color, Graph, ListAssignment, PartialColoring};

/// `n m` header followed by one `u v` line per edge, `u < v`, sorted.
pub fn write_edge_list(g: &Graph) -> String {
    let mut out = String::new();
    writeln!(out, "{} {}", g.n(), g.m()).unwrap();
    for (u, v) in g.edges() {
        writeln!(out, "{u} {v}").unwrap();
    }
    out
}

pub fn read_edge_list(text: &str) -> Result<Graph> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty());
    let (hline, header) = lines.next().ok_or(Error::Parse {
        line: 1,
        msg: "missing \"n m\" header".into(),
    })?;
    let (n, m) = parse_pair(hline, header)?;
    let mut edges = Vec::with_capacity(m);
    for (line, l) in lines {
        let (u, v) = parse_pair(line, l)?;
        if u >= n || v >= n {
            return Err(Error::Parse {
                line,
                msg: format!("vertex out of range for n = {n}"),
            });
        }
        edges.push((u, v));
    }
    if edges.len() != m {
        return Err(Error::Parse {
            line: hline,
            msg: format!("header promises {m} edges, found {}", edges.len()),
        });
    }
    Graph::from_edges(n, &edges).map_err(|e| Error::Parse {
        line: hline,
        msg: e.to_string(),
    })
}

fn parse_pair(line: usize, l: &str) -> Result<(usize, usize)> {
    let mut it = l.split_whitespace();
    let mut field = |name: &str| -> Result<usize> {
        let tok = it.next().ok_or_else(|| Error::Parse {
            line,
            msg: format!("missing field {name}"),
        })?;
        tok.parse().map_err(|_| Error::Parse {
            line,
            msg: format!("field {name}: not a non-negative integer: {tok:?}"),
        })
    };
    let a = field("1")?;
    let b = field("2")?;
    if it.next().is_some() {
        return Err(Error::Parse {
            line,
            msg: "trailing fields".into(),
        });
    }
    Ok((a, b))
}

#[derive(Serialize, Deserialize)]
struct ListsFile {
    lists: Vec<Vec<Color>>,
}

/// `{"lists": [[...], ...]}`, one vertex per line.
pub fn write_lists(l: &ListAssignment) -> String {
    let mut out = String::from("{\"lists\": [");
    for (v, list) in l.lists().iter().enumerate() {
        out.push_str(if v == 0 { "\n  " } else { ",\n  " });
        out.push_str(&serde_json::to_string(list).unwrap());
    }
    if l.n() > 0 {
        out.push('\n');
    }
    out.push_str("]}\n");
    out
}

pub fn read_lists(text: &str) -> Result<ListAssignment> {
    let file: ListsFile = serde_json::from_str(text)?;
    ListAssignment::new(file.lists)
}

#[derive(Serialize, Deserialize)]
struct ColoringFile {
    n: usize,
    colors: BTreeMap<usize, Color>,
}

/// `{"n": .., "colors": {"v": c, ...}}` with only colored vertices present.
pub fn write_coloring(phi: &PartialColoring) -> String {
    let file = ColoringFile {
        n: phi.n(),
        colors: phi
            .as_slice()
            .iter()
            .enumerate()
            .filter_map(|(v, c)| c.map(|c| (v, c)))
            .collect(),
    };
    let mut s = serde_json::to_string_pretty(&file).unwrap();
    s.push('\n');
    s
}

pub fn read_coloring(text: &str) -> Result<PartialColoring> {
    let file: ColoringFile = serde_json::from_str(text)?;
    let mut phi = PartialColoring::new(file.n);
    for (v, c) in file.colors {
        if v >= file.n {
            return Err(Error::InvalidVertex { vertex: v, n: file.n });
        }
        if c == 0 {
            return Err(Error::Argument(format!("vertex {v}: color 0 is reserved")));
        }
        phi.set(v, c);
    }
    Ok(phi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parse_errors_carry_line_numbers() {
        match read_edge_list("3 1\n0 x\n") {
            Err(Error::Parse { line: 2, .. }) => {}
            other => panic!("{other:?}"),
        }
        match read_edge_list("3 2\n0 1\n") {
            Err(Error::Parse { line: 1, .. }) => {}
            other => panic!("{other:?}"),
        }
        assert!(read_edge_list("2 1\n0 5\n").is_err());
    }

    #[test]
    fn empty_files() {
        let g = read_edge_list("0 0\n").unwrap();
        assert_eq!(write_edge_list(&g), "0 0\n");
        let l = ListAssignment::new(vec![]).unwrap();
        assert_eq!(read_lists(&write_lists(&l)).unwrap(), l);
    }

    proptest! {
        #[test]
        fn formats_round_trip(
            n in 1usize..12,
            raw in proptest::collection::vec((0usize..12, 0usize..12), 0..30),
            lists in proptest::collection::vec(proptest::collection::btree_set(1u32..20, 0..5), 12),
            colors in proptest::collection::vec(proptest::option::of(1u32..9), 12),
        ) {
            let mut edges: Vec<(usize, usize)> = raw
                .into_iter()
                .filter(|&(u, v)| u < n && v < n && u != v)
                .map(|(u, v)| (u.min(v), u.max(v)))
                .collect();
            edges.sort();
            edges.dedup();
            let g = Graph::from_edges(n, &edges).unwrap();
            let text = write_edge_list(&g);
            prop_assert_eq!(write_edge_list(&read_edge_list(&text).unwrap()), text);

            let l = ListAssignment::new(lists[..n].iter().map(|s| s.iter().copied().collect()).collect()).unwrap();
            let text = write_lists(&l);
            prop_assert_eq!(write_lists(&read_lists(&text).unwrap()), text);

            let phi = PartialColoring::from_vec(colors[..n].to_vec());
            let text = write_coloring(&phi);
            let back = read_coloring(&text).unwrap();
            prop_assert_eq!(&back, &phi);
            prop_assert_eq!(write_coloring(&back), text);
        }
    }
}
