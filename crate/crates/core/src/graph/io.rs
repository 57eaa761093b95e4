//! Plain-text edge lists: one `a b` pair per line, `#` comments and blank
//! lines ignored.

use super::LaborFlowNetwork;
use crate::error::{LfnError, Result};
use std::io::Write;
use std::path::Path;

/// Parses an edge list. The network size is one more than the largest id seen.
pub fn parse_edge_list(text: &str) -> Result<LaborFlowNetwork> {
    let mut edges = Vec::new();
    let mut max_id = None;
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut fields = line.split_whitespace();
        let mut next_id = |what: &str| -> Result<usize> {
            let tok = fields.next().ok_or_else(|| LfnError::Parse {
                line: idx + 1,
                reason: format!("missing {what} node id"),
            })?;
            tok.parse::<usize>().map_err(|_| LfnError::Parse {
                line: idx + 1,
                reason: format!("`{tok}` is not a non-negative integer"),
            })
        };
        let a = next_id("first")?;
        let b = next_id("second")?;
        if let Some(extra) = fields.next() {
            return Err(LfnError::Parse {
                line: idx + 1,
                reason: format!("unexpected trailing field `{extra}`"),
            });
        }
        if a == b {
            return Err(LfnError::SelfLoop { node: a });
        }
        max_id = Some(max_id.unwrap_or(0).max(a).max(b));
        edges.push((a, b));
    }
    let n = max_id.map_or(0, |m| m + 1);
    LaborFlowNetwork::from_edges(n, &edges)
}

pub fn read_edge_list(path: &Path) -> Result<LaborFlowNetwork> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| LfnError::Io(format!("{}: {e}", path.display())))?;
    parse_edge_list(&text)
}

/// Writes each undirected edge once, smaller id first, in sorted order.
pub fn write_edge_list_to<W: Write>(net: &LaborFlowNetwork, mut out: W) -> Result<()> {
    for (a, b) in net.edges() {
        writeln!(out, "{a} {b}")?;
    }
    out.flush()?;
    Ok(())
}

pub fn write_edge_list(net: &LaborFlowNetwork, path: &Path) -> Result<()> {
    let file = std::fs::File::create(path)
        .map_err(|e| LfnError::Io(format!("{}: {e}", path.display())))?;
    write_edge_list_to(net, std::io::BufWriter::new(file))
}
