//! Maximum common induced subgraph by McSplit-style branch and bound.
//!
//! Unmatched vertices of both graphs are grouped into label classes
//! ("bidomains"): two unmatched vertices share a class iff they have the same
//! adjacency pattern towards the vertices matched so far. Only vertices in
//! the same class can be matched to each other, which gives the bound
//! `|M| + sum over classes of min(|left|, |right|)`.

use serde::{Deserialize, Serialize};

use super::{Meter, SearchBudget};
use crate::graph::Graph;

/// Size of a maximum common induced subgraph.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum McisOutcome {
    Exact { size: usize, nodes: u64 },
    /// Budget ran out; `incumbent` is a lower bound on the true size.
    Timeout { incumbent: usize, nodes: u64 },
}

impl McisOutcome {
    pub fn exact(&self) -> Option<usize> {
        match *self {
            McisOutcome::Exact { size, .. } => Some(size),
            McisOutcome::Timeout { .. } => None,
        }
    }

    pub fn nodes(&self) -> u64 {
        match *self {
            McisOutcome::Exact { nodes, .. } | McisOutcome::Timeout { nodes, .. } => nodes,
        }
    }
}

/// Best mapping found, as `(vertex of g1, vertex of g2)` pairs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct McisWitness {
    pub mapping: Vec<(usize, usize)>,
    pub exact: bool,
    pub nodes: u64,
}

#[derive(Clone, Copy, Debug)]
struct Bidomain {
    l: usize,
    r: usize,
    left_len: usize,
    right_len: usize,
}

struct McSplit<'a> {
    g1: &'a Graph,
    g2: &'a Graph,
    incumbent: Vec<(usize, usize)>,
    meter: Meter,
}

/// Moves vertices adjacent to `v` to the front of `arr[start..start+len]`,
/// returns how many there are.
fn partition(arr: &mut [usize], start: usize, len: usize, g: &Graph, v: usize) -> usize {
    let seg = &mut arr[start..start + len];
    let mut i = 0;
    for j in 0..len {
        if g.has_edge(v, seg[j]) {
            seg.swap(i, j);
            i += 1;
        }
    }
    i
}

impl McSplit<'_> {
    fn bound(&self, current: usize, domains: &[Bidomain]) -> usize {
        current + domains.iter().map(|d| d.left_len.min(d.right_len)).sum::<usize>()
    }

    fn filter(&self, domains: &[Bidomain], left: &mut [usize], right: &mut [usize], v: usize, w: usize) -> Vec<Bidomain> {
        let mut out = Vec::with_capacity(domains.len() * 2);
        for d in domains {
            let l_adj = partition(left, d.l, d.left_len, self.g1, v);
            let r_adj = partition(right, d.r, d.right_len, self.g2, w);
            let l_non = d.left_len - l_adj;
            let r_non = d.right_len - r_adj;
            if l_non > 0 && r_non > 0 {
                out.push(Bidomain {
                    l: d.l + l_adj,
                    r: d.r + r_adj,
                    left_len: l_non,
                    right_len: r_non,
                });
            }
            if l_adj > 0 && r_adj > 0 {
                out.push(Bidomain {
                    l: d.l,
                    r: d.r,
                    left_len: l_adj,
                    right_len: r_adj,
                });
            }
        }
        out
    }

    fn solve(&mut self, mut domains: Vec<Bidomain>, left: &mut [usize], right: &mut [usize], current: &mut Vec<(usize, usize)>) {
        if !self.meter.tick() {
            return;
        }
        if current.len() > self.incumbent.len() {
            self.incumbent = current.clone();
        }
        if self.bound(current.len(), &domains) <= self.incumbent.len() {
            return;
        }
        // smallest class (by its larger side), ties by position
        let Some(bd_idx) = (0..domains.len()).min_by_key(|&i| domains[i].left_len.max(domains[i].right_len)) else {
            return;
        };
        let bd = domains[bd_idx];
        let (lpos, v) = (bd.l..bd.l + bd.left_len)
            .map(|p| (p, left[p]))
            .min_by_key(|&(_, x)| x)
            .unwrap();
        // move v to the end of its segment and drop it
        left.swap(lpos, bd.l + bd.left_len - 1);
        domains[bd_idx].left_len -= 1;

        let mut prev: Option<usize> = None;
        loop {
            let d = domains[bd_idx];
            let next = (d.r..d.r + d.right_len)
                .map(|p| (p, right[p]))
                .filter(|&(_, x)| prev.map_or(true, |pw| x > pw))
                .min_by_key(|&(_, x)| x);
            let Some((rpos, w)) = next else { break };
            prev = Some(w);
            right.swap(rpos, d.r + d.right_len - 1);
            domains[bd_idx].right_len -= 1;

            let child = self.filter(&domains, left, right, v, w);
            current.push((v, w));
            self.solve(child, left, right, current);
            current.pop();

            domains[bd_idx].right_len += 1;
            if self.meter.exhausted() {
                return;
            }
        }

        // branch where v stays unmatched
        if domains[bd_idx].left_len == 0 {
            domains.remove(bd_idx);
        }
        self.solve(domains, left, right, current);
    }
}

fn run(g1: &Graph, g2: &Graph, budget: SearchBudget) -> McisWitness {
    let mut search = McSplit {
        g1,
        g2,
        incumbent: Vec::new(),
        meter: Meter::new(budget),
    };
    let mut left: Vec<usize> = (0..g1.n()).collect();
    let mut right: Vec<usize> = (0..g2.n()).collect();
    let mut domains = Vec::new();
    if g1.n() > 0 && g2.n() > 0 {
        domains.push(Bidomain {
            l: 0,
            r: 0,
            left_len: g1.n(),
            right_len: g2.n(),
        });
    }
    let mut current = Vec::new();
    search.solve(domains, &mut left, &mut right, &mut current);
    let mut mapping = search.incumbent;
    mapping.sort_unstable();
    McisWitness {
        mapping,
        exact: !search.meter.exhausted(),
        nodes: search.meter.nodes(),
    }
}

/// Maximum `k` such that `g1` and `g2` have isomorphic induced subgraphs on
/// `k` vertices.
pub fn mcis_size(g1: &Graph, g2: &Graph, budget: SearchBudget) -> McisOutcome {
    let w = run(g1, g2, budget);
    if w.exact {
        McisOutcome::Exact {
            size: w.mapping.len(),
            nodes: w.nodes,
        }
    } else {
        McisOutcome::Timeout {
            incumbent: w.mapping.len(),
            nodes: w.nodes,
        }
    }
}

/// Same search as [`mcis_size`], returning the mapping itself.
pub fn mcis_with_witness(g1: &Graph, g2: &Graph, budget: SearchBudget) -> McisWitness {
    run(g1, g2, budget)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{gen_gnp, induced_subgraph, Seed};
    use crate::solver::{canonical_form, contains_induced, Outcome3};
    use std::collections::HashSet;

    const U: SearchBudget = SearchBudget::UNLIMITED;

    fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
        (0u32..(1 << n))
            .filter(|m| m.count_ones() as usize == k)
            .map(|m| (0..n).filter(|i| m >> i & 1 == 1).collect())
            .collect()
    }

    /// Largest k with some k-subset pair having equal canonical forms.
    fn oracle(g1: &Graph, g2: &Graph) -> usize {
        for k in (1..=g1.n().min(g2.n())).rev() {
            let forms: HashSet<Vec<u8>> = subsets(g2.n(), k)
                .iter()
                .map(|s| canonical_form(&induced_subgraph(g2, s).unwrap()).unwrap())
                .collect();
            if subsets(g1.n(), k)
                .iter()
                .any(|s| forms.contains(&canonical_form(&induced_subgraph(g1, s).unwrap()).unwrap()))
            {
                return k;
            }
        }
        0
    }

    #[test]
    fn examples() {
        let g = gen_gnp(9, 0.5, Seed::new(3)).unwrap();
        assert_eq!(mcis_size(&g, &g, U).exact(), Some(9));
        assert_eq!(mcis_size(&Graph::complete(3), &Graph::empty(3), U).exact(), Some(1));
        assert_eq!(mcis_size(&Graph::cycle(4), &Graph::complete(4), U).exact(), Some(2));
        assert_eq!(mcis_size(&Graph::empty(0), &Graph::complete(4), U).exact(), Some(0));
    }

    #[test]
    fn witness_is_valid() {
        let g1 = gen_gnp(10, 0.5, Seed::new(8)).unwrap();
        let g2 = gen_gnp(11, 0.4, Seed::new(9)).unwrap();
        let w = mcis_with_witness(&g1, &g2, U);
        assert!(w.exact);
        for &(a, b) in &w.mapping {
            for &(c, d) in &w.mapping {
                if a != c {
                    assert_eq!(g1.has_edge(a, c), g2.has_edge(b, d));
                }
            }
        }
        assert_eq!(Some(w.mapping.len()), mcis_size(&g1, &g2, U).exact());
    }

    #[test]
    fn timeout_keeps_incumbent() {
        let g1 = gen_gnp(30, 0.5, Seed::new(1)).unwrap();
        let g2 = gen_gnp(30, 0.5, Seed::new(2)).unwrap();
        match mcis_size(&g1, &g2, SearchBudget::nodes(200)) {
            McisOutcome::Timeout { incumbent, .. } => assert!(incumbent >= 1),
            other => panic!("expected timeout, got {other:?}"),
        }
    }

    #[test]
    fn agrees_with_oracle() {
        let base = Seed::new(21);
        for t in 0..40u64 {
            let s = base.substream(t);
            let g1 = gen_gnp(2 + t as usize % 6, 0.5, s.substream(0)).unwrap();
            let g2 = gen_gnp(3 + t as usize % 5, 0.5, s.substream(1)).unwrap();
            assert_eq!(mcis_size(&g1, &g2, U).exact(), Some(oracle(&g1, &g2)), "{g1:?} / {g2:?}");
        }
    }

    #[test]
    fn full_size_iff_contained() {
        let base = Seed::new(22);
        for t in 0..100u64 {
            let s = base.substream(t);
            let g1 = gen_gnp(2 + t as usize % 5, 0.5, s.substream(0)).unwrap();
            let g2 = gen_gnp(6 + t as usize % 3, 0.5, s.substream(1)).unwrap();
            let full = mcis_size(&g1, &g2, U).exact() == Some(g1.n());
            assert_eq!(full, contains_induced(&g1, &g2, U) == Outcome3::Yes);
        }
    }
}
