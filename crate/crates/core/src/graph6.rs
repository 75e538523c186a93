//! graph6 encoding and decoding, plus the plain edge-list text format.
//!
//! graph6 packs the upper triangle of the adjacency matrix column by column
//! (`(0,1), (0,2), (1,2), (0,3), ...`) into 6-bit groups, each written as a
//! printable byte `63..=126`, preceded by a variable-length vertex count.

use std::io::BufRead;

use crate::error::{Error, Result};
use crate::graph::Graph;

pub const HEADER: &str = ">>graph6<<";
pub const MAX_VERTICES: u64 = 68_719_476_735;

fn err(offset: usize, reason: impl Into<String>) -> Error {
    Error::Graph6 {
        offset,
        reason: reason.into(),
    }
}

fn encode_n(n: u64, out: &mut Vec<u8>) {
    if n <= 62 {
        out.push(n as u8 + 63);
    } else if n <= 258_047 {
        out.push(126);
        for shift in [12, 6, 0] {
            out.push(((n >> shift) & 63) as u8 + 63);
        }
    } else {
        out.extend([126, 126]);
        for shift in [30, 24, 18, 12, 6, 0] {
            out.push(((n >> shift) & 63) as u8 + 63);
        }
    }
}

pub fn to_graph6(g: &Graph) -> String {
    let n = g.n();
    let mut out = Vec::with_capacity(8 + (n * n.saturating_sub(1) / 2).div_ceil(6));
    encode_n(n as u64, &mut out);
    let mut acc = 0u8;
    let mut k = 0;
    for j in 1..n {
        for i in 0..j {
            acc = acc << 1 | g.has_edge(i, j) as u8;
            k += 1;
            if k == 6 {
                out.push(acc + 63);
                acc = 0;
                k = 0;
            }
        }
    }
    if k > 0 {
        out.push((acc << (6 - k)) + 63);
    }
    String::from_utf8(out).expect("graph6 output is ASCII")
}

/// Decodes one graph6 line.  A leading `>>graph6<<` header and a trailing
/// newline are accepted; byte offsets in errors refer to the input text.
pub fn from_graph6(text: &str) -> Result<Graph> {
    let text = text.trim_end_matches(['\n', '\r']);
    let bytes = text.as_bytes();
    let start = if text.starts_with(HEADER) { HEADER.len() } else { 0 };
    if let Some(i) = bytes[start..].iter().position(|b| !(63..=126).contains(b)) {
        return Err(err(start + i, format!("byte 0x{:02x} is not a graph6 character", bytes[start + i])));
    }
    let body = &bytes[start..];
    let val = |i: usize| (body[i] - 63) as u64;
    if body.is_empty() {
        return Err(err(start, "missing vertex count"));
    }
    let (n, mut pos) = if body[0] != 126 {
        (val(0), 1)
    } else if body.len() >= 2 && body[1] == 126 {
        if body.len() < 8 {
            return Err(err(start + body.len(), "truncated 8-byte vertex count"));
        }
        let n = (2..8).fold(0, |acc, i| acc << 6 | val(i));
        if n <= 258_047 {
            return Err(err(start, format!("non-canonical 8-byte vertex count {n}")));
        }
        (n, 8)
    } else {
        if body.len() < 4 {
            return Err(err(start + body.len(), "truncated 4-byte vertex count"));
        }
        let n = (1..4).fold(0, |acc, i| acc << 6 | val(i));
        if n <= 62 {
            return Err(err(start, format!("non-canonical 4-byte vertex count {n}")));
        }
        (n, 4)
    };
    if n > MAX_VERTICES {
        return Err(err(start, format!("vertex count {n} exceeds graph6 range")));
    }
    let bits = n as u128 * n.saturating_sub(1) as u128 / 2;
    let need = bits.div_ceil(6);
    let have = (body.len() - pos) as u128;
    if have < need {
        return Err(err(text.len(), format!("truncated: expected {need} data bytes, found {have}")));
    }
    if have > need {
        return Err(err(start + pos + need as usize, "trailing garbage after adjacency data"));
    }
    let n = n as usize;
    let mut g = Graph::empty(n);
    let (mut i, mut j) = (0usize, 1usize);
    let mut remaining = bits as usize;
    while remaining > 0 {
        let b = val(pos);
        let take = remaining.min(6);
        for k in 0..take {
            if b >> (5 - k) & 1 == 1 {
                g.add_edge(i, j);
            }
            i += 1;
            if i == j {
                i = 0;
                j += 1;
            }
        }
        if take < 6 && b & ((1 << (6 - take)) - 1) != 0 {
            return Err(err(start + pos, "nonzero padding bits"));
        }
        remaining -= take;
        pos += 1;
    }
    Ok(g)
}

/// Parses the edge-list format: one `u v` pair per line (0-based), `#`
/// comments and blank lines ignored.  A line holding a single integer
/// declares the vertex count; otherwise it is one more than the largest
/// vertex mentioned.
pub fn parse_edge_list(text: &str) -> Result<Graph> {
    let mut declared: Option<usize> = None;
    let mut edges = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let nums: Vec<usize> = line
            .split_whitespace()
            .map(|t| t.parse::<usize>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| Error::EdgeList {
                line: line_no,
                reason: e.to_string(),
            })?;
        match nums[..] {
            [n] => declared = Some(n),
            [u, v] => {
                if u == v {
                    return Err(Error::EdgeList {
                        line: line_no,
                        reason: format!("self-loop at {u}"),
                    });
                }
                edges.push((u, v));
            }
            _ => {
                return Err(Error::EdgeList {
                    line: line_no,
                    reason: format!("expected 1 or 2 integers, found {}", nums.len()),
                })
            }
        }
    }
    let implied = edges.iter().map(|&(u, v)| u.max(v) + 1).max().unwrap_or(0);
    let n = match declared {
        Some(n) if n < implied => {
            return Err(Error::EdgeList {
                line: 0,
                reason: format!("declared {n} vertices but vertex {} appears", implied - 1),
            })
        }
        Some(n) => n,
        None => implied,
    };
    Graph::from_edges(n, edges)
}

/// A graph read from a corpus, with its 1-based line number and any label
/// text following the encoding on the same line.
#[derive(Debug, Clone)]
pub struct CorpusEntry {
    pub line: usize,
    pub graph6: String,
    pub label: Option<String>,
    pub graph: Graph,
}

/// Streams a graph6 corpus.  Blank lines and the `>>graph6<<` header are
/// skipped; malformed lines yield an error carrying the line number.
pub fn read_corpus<R: BufRead>(reader: R) -> impl Iterator<Item = (usize, Result<CorpusEntry>)> {
    reader.lines().enumerate().filter_map(|(idx, line)| {
        let line_no = idx + 1;
        let line = match line {
            Ok(l) => l,
            Err(e) => {
                return Some((
                    line_no,
                    Err(Error::InvalidArgument(format!("read error: {e}"))),
                ))
            }
        };
        let mut parts = line.trim().splitn(2, char::is_whitespace);
        let code = parts.next().unwrap_or("");
        let code = code.strip_prefix(HEADER).unwrap_or(code);
        if code.is_empty() {
            return None;
        }
        let label = parts.next().map(|s| s.trim().to_string()).filter(|s| !s.is_empty());
        Some((
            line_no,
            from_graph6(code).map(|graph| CorpusEntry {
                line: line_no,
                graph6: code.to_string(),
                label,
                graph,
            }),
        ))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_codes() {
        let g = from_graph6("@").unwrap();
        assert_eq!((g.n(), g.edge_count()), (1, 0));
        let g = from_graph6("A?").unwrap();
        assert_eq!((g.n(), g.edge_count()), (2, 0));
        let g = from_graph6("A_").unwrap();
        assert!(g.n() == 2 && g.has_edge(0, 1));
        assert_eq!(to_graph6(&Graph::complete(1)), "@");
        assert_eq!(to_graph6(&Graph::empty(2)), "A?");
        assert_eq!(to_graph6(&Graph::empty(0)), "?");
        assert_eq!(from_graph6(">>graph6<<A_\n").unwrap(), Graph::complete(2));
    }

    #[test]
    fn long_length_prefix() {
        let g = Graph::cycle(63);
        let code = to_graph6(&g);
        assert!(code.starts_with("~??~"));
        assert_eq!(from_graph6(&code).unwrap(), g);
    }

    #[test]
    fn errors_carry_offsets() {
        assert!(matches!(from_graph6(""), Err(Error::Graph6 { offset: 0, .. })));
        assert!(matches!(from_graph6("A_?"), Err(Error::Graph6 { offset: 2, .. })));
        assert!(matches!(from_graph6("A"), Err(Error::Graph6 { .. })));
        assert!(matches!(from_graph6("B w"), Err(Error::Graph6 { offset: 1, .. })));
        assert!(matches!(from_graph6("~?"), Err(Error::Graph6 { .. })));
        // n=2 has one data bit; '@' sets a padding bit
        assert!(matches!(from_graph6("A@"), Err(Error::Graph6 { offset: 1, .. })));
        // 4-byte prefix encoding n = 5
        assert!(matches!(from_graph6("~??D"), Err(Error::Graph6 { offset: 0, .. })));
        assert!(matches!(from_graph6(">>graph6<<A\u{1}"), Err(Error::Graph6 { offset: 11, .. })));
    }

    #[test]
    fn edge_list_format() {
        let g = parse_edge_list("# C4\n0 1\n1 2\n2 3\n3 0\n").unwrap();
        assert_eq!(g, Graph::cycle(4));
        let g = parse_edge_list("6\n0 1\n").unwrap();
        assert_eq!((g.n(), g.edge_count()), (6, 1));
        assert!(matches!(parse_edge_list("0 0"), Err(Error::EdgeList { line: 1, .. })));
        assert!(matches!(parse_edge_list("0 1\nx y"), Err(Error::EdgeList { line: 2, .. })));
        assert!(matches!(parse_edge_list("2\n0 5"), Err(Error::EdgeList { .. })));
    }

    #[test]
    fn corpus_reader_skips_and_reports() {
        let text = ">>graph6<<\nA_ K2\n\nbad!\nBw\n";
        let items: Vec<_> = read_corpus(text.as_bytes()).collect();
        assert_eq!(items.len(), 3);
        let first = items[0].1.as_ref().unwrap();
        assert_eq!((first.line, first.label.as_deref()), (2, Some("K2")));
        assert_eq!(items[1].0, 4);
        assert!(items[1].1.is_err());
        assert_eq!(items[2].1.as_ref().unwrap().graph, Graph::complete(3));
    }
}
