//! Short-form graph6 encoding (n <= 62).
//!
//! One byte `n + 63`, then the upper triangle in column order
//! `(0,1), (0,2), (1,2), (0,3), ...` packed big-endian into 6-bit groups,
//! zero-padded, each group offset by 63.

use thiserror::Error;

use crate::graph::{Graph, GraphBuilder};

/// Largest vertex count the short form can express.
pub const MAX_SHORT_N: usize = 62;

/// Optional file header some tools emit before the first record.
pub const HEADER: &str = ">>graph6<<";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Graph6Error {
    #[error("empty graph6 record")]
    Empty,
    #[error("byte {byte} at offset {offset} is outside 63..=126")]
    BadByte { byte: u8, offset: usize },
    #[error("long-form graph6 (n > {MAX_SHORT_N}) is not supported")]
    LongForm,
    #[error("payload has {got} bytes, expected {expected} for n={n}")]
    PayloadLength {
        n: usize,
        expected: usize,
        got: usize,
    },
    #[error("nonzero padding bits")]
    Padding,
    #[error("cannot encode {n} vertices in short-form graph6")]
    TooLarge { n: usize },
}

fn payload_len(n: usize) -> usize {
    (n * n.saturating_sub(1) / 2).div_ceil(6)
}

/// Decodes one graph6 record (no trailing newline, header already removed).
pub fn parse_graph6(record: &str) -> Result<Graph, Graph6Error> {
    let bytes = record.as_bytes();
    for (offset, &byte) in bytes.iter().enumerate() {
        if !(63..=126).contains(&byte) {
            return Err(Graph6Error::BadByte { byte, offset });
        }
    }
    let (&first, payload) = bytes.split_first().ok_or(Graph6Error::Empty)?;
    if first == 126 {
        return Err(Graph6Error::LongForm);
    }
    let n = (first - 63) as usize;
    let expected = payload_len(n);
    if payload.len() != expected {
        return Err(Graph6Error::PayloadLength {
            n,
            expected,
            got: payload.len(),
        });
    }

    let mut builder = GraphBuilder::new(n);
    let mut bit_index = 0usize;
    let bit = |k: usize| (payload[k / 6] - 63) >> (5 - k % 6) & 1 == 1;
    for j in 1..n {
        for i in 0..j {
            if bit(bit_index) {
                builder.add_edge(i, j);
            }
            bit_index += 1;
        }
    }
    while bit_index < expected * 6 {
        if bit(bit_index) {
            return Err(Graph6Error::Padding);
        }
        bit_index += 1;
    }
    Ok(builder.build())
}

/// Encodes `g` as a short-form graph6 record.
pub fn to_graph6(g: &Graph) -> Result<String, Graph6Error> {
    let n = g.n();
    if n > MAX_SHORT_N {
        return Err(Graph6Error::TooLarge { n });
    }
    let mut groups = vec![0u8; payload_len(n)];
    let mut k = 0usize;
    for j in 1..n {
        for i in 0..j {
            if g.has_edge(i, j) {
                groups[k / 6] |= 1 << (5 - k % 6);
            }
            k += 1;
        }
    }
    let mut out = String::with_capacity(groups.len() + 1);
    out.push((n as u8 + 63) as char);
    out.extend(groups.into_iter().map(|b| (b + 63) as char));
    Ok(out)
}
