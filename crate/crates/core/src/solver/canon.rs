//! Brute-force canonical forms for small graphs.

use crate::error::{Error, Result};
use crate::graph::Graph;

pub const CANONICAL_FORM_MAX_N: usize = 10;

/// Lexicographically minimal adjacency bit string over all vertex orders.
///
/// The string is `[n, bit(0,1), bit(0,2), bit(1,2), bit(0,3), ...]`: the
/// upper triangle read column by column, one byte (0 or 1) per pair. Column
/// order means that fixing the first `k` positions of the order fixes a
/// prefix of the string, which the search uses to prune.
pub fn canonical_form(g: &Graph) -> Result<Vec<u8>> {
    let n = g.n();
    if n > CANONICAL_FORM_MAX_N {
        return Err(Error::SizeLimit {
            what: "canonical_form",
            limit: CANONICAL_FORM_MAX_N,
            n,
        });
    }
    let mut best: Option<Vec<u8>> = None;
    let mut cur = Vec::with_capacity(n * n.saturating_sub(1) / 2);
    let mut order = Vec::with_capacity(n);
    let mut used = vec![false; n];
    search(g, &mut order, &mut used, &mut cur, &mut best);
    let mut out = vec![n as u8];
    out.extend(best.unwrap_or_default());
    Ok(out)
}

fn search(g: &Graph, order: &mut Vec<usize>, used: &mut [bool], cur: &mut Vec<u8>, best: &mut Option<Vec<u8>>) {
    let k = order.len();
    if k == g.n() {
        if best.as_ref().map_or(true, |b| *cur < *b) {
            *best = Some(cur.clone());
        }
        return;
    }
    for v in 0..g.n() {
        if used[v] {
            continue;
        }
        let mark = cur.len();
        cur.extend(order.iter().map(|&u| g.has_edge(u, v) as u8));
        let keep = match best {
            // prune once the prefix is already worse than the incumbent
            Some(b) => cur[..] <= b[..cur.len()],
            None => true,
        };
        if keep {
            used[v] = true;
            order.push(v);
            search(g, order, used, cur, best);
            order.pop();
            used[v] = false;
        }
        cur.truncate(mark);
    }
}
