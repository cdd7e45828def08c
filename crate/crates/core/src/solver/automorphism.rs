//! Automorphism group order by individualisation and refinement.
//!
//! `|Aut(G)|` is computed as a product of orbit sizes along a stabiliser
//! chain: with base `b_1, .., b_k` (chosen so that individualising it
//! refines the colouring to discrete cells),
//! `|Aut| = prod_i |orbit of b_i under the pointwise stabiliser of b_1..b_{i-1}|`.
//! Each orbit is found by asking, for every candidate image `w`, whether some
//! automorphism fixing the prefix maps `b_i` to `w`. Generators found on the
//! way are merged into a union-find so known orbit members are not retested.

use num_bigint::BigUint;

use crate::graph::Graph;

type Colouring = Vec<u32>;

/// Equitable refinement. Colours are renumbered by sorted signature, so the
/// result is invariant under relabelling of the graph.
fn refine(g: &Graph, colours: &mut Colouring) {
    let n = g.n();
    if n == 0 {
        return;
    }
    let mut ncol = colours.iter().copied().max().unwrap() as usize + 1;
    let mut sig: Vec<(Vec<u32>, usize)> = Vec::with_capacity(n);
    loop {
        sig.clear();
        for v in 0..n {
            let mut s = vec![0u32; ncol + 1];
            s[0] = colours[v];
            for u in g.neighbors(v) {
                s[colours[u] as usize + 1] += 1;
            }
            sig.push((s, v));
        }
        sig.sort_unstable();
        let mut next = 0u32;
        for i in 0..n {
            if i > 0 && sig[i].0 != sig[i - 1].0 {
                next += 1;
            }
            colours[sig[i].1] = next;
        }
        let new_ncol = next as usize + 1;
        if new_ncol == ncol {
            return;
        }
        ncol = new_ncol;
    }
}

/// Gives `x` its own cell, ordered just before the rest of its old cell.
fn individualise(colours: &Colouring, x: usize) -> Colouring {
    let raw: Vec<u32> = colours
        .iter()
        .enumerate()
        .map(|(v, &c)| 2 * c + u32::from(v != x))
        .collect();
    let mut sorted = raw.clone();
    sorted.sort_unstable();
    sorted.dedup();
    raw.iter()
        .map(|c| sorted.binary_search(c).unwrap() as u32)
        .collect()
}

fn histogram(c: &Colouring) -> Vec<u32> {
    let mut h = vec![0u32; c.len()];
    for &x in c {
        h[x as usize] += 1;
    }
    h
}

/// First vertex of the first non-singleton cell.
fn target_cell_vertex(c: &Colouring) -> Option<usize> {
    let h = histogram(c);
    let cell = h.iter().position(|&k| k > 1)? as u32;
    c.iter().position(|&x| x == cell)
}

fn is_automorphism(g: &Graph, perm: &[usize]) -> bool {
    (0..g.n()).all(|u| {
        let pu = perm[u];
        (u + 1..g.n()).all(|v| g.has_edge(u, v) == g.has_edge(pu, perm[v]))
    })
}

/// Searches for an automorphism mapping colouring `a` onto colouring `b`.
fn find_iso(g: &Graph, a: &Colouring, b: &Colouring) -> Option<Vec<usize>> {
    if histogram(a) != histogram(b) {
        return None;
    }
    match target_cell_vertex(a) {
        None => {
            let mut by_colour = vec![0usize; g.n()];
            for (v, &c) in b.iter().enumerate() {
                by_colour[c as usize] = v;
            }
            let perm: Vec<usize> = a.iter().map(|&c| by_colour[c as usize]).collect();
            is_automorphism(g, &perm).then_some(perm)
        }
        Some(x) => {
            let mut a2 = individualise(a, x);
            refine(g, &mut a2);
            let cell = a[x];
            for y in (0..g.n()).filter(|&y| b[y] == cell) {
                let mut b2 = individualise(b, y);
                refine(g, &mut b2);
                if let Some(p) = find_iso(g, &a2, &b2) {
                    return Some(p);
                }
            }
            None
        }
    }
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            let next = self.0[y];
            self.0[y] = r;
            y = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Walks the stabiliser chain. With `stop_at_first` set it returns as soon
/// as any non-trivial automorphism is known (the result is then only a
/// lower bound, used for asymmetry tests).
fn group_order(g: &Graph, stop_at_first: bool) -> BigUint {
    let n = g.n();
    let mut c = vec![0u32; n];
    refine(g, &mut c);
    let mut levels: Vec<(usize, Colouring)> = Vec::new();
    while let Some(x) = target_cell_vertex(&c) {
        let mut next = individualise(&c, x);
        refine(g, &mut next);
        levels.push((x, std::mem::replace(&mut c, next)));
    }

    let mut uf = UnionFind((0..n).collect());
    let mut order = BigUint::from(1u32);
    for (i, (base, colouring)) in levels.iter().enumerate().rev() {
        let child = levels.get(i + 1).map_or(&c, |l| &l.1);
        let cell = colouring[*base];
        let mut failed: Vec<usize> = Vec::new();
        for w in (0..n).filter(|&w| colouring[w] == cell && w != *base) {
            if uf.find(w) == uf.find(*base) {
                continue;
            }
            let rw = uf.find(w);
            if failed.iter().any(|&f| uf.find(f) == rw) {
                continue;
            }
            let mut other = individualise(colouring, w);
            refine(g, &mut other);
            match find_iso(g, child, &other) {
                Some(perm) => {
                    if stop_at_first {
                        return BigUint::from(2u32);
                    }
                    for (v, &pv) in perm.iter().enumerate() {
                        uf.union(v, pv);
                    }
                }
                None => failed.push(w),
            }
        }
        let root = uf.find(*base);
        let orbit = (0..n)
            .filter(|&w| colouring[w] == cell)
            .filter(|&w| uf.find(w) == root)
            .count();
        order *= BigUint::from(orbit);
    }
    order
}

/// `|Aut(g)|`.
pub fn automorphism_count(g: &Graph) -> BigUint {
    group_order(g, false)
}

/// True iff the identity is the only automorphism.
pub fn is_asymmetric(g: &Graph) -> bool {
    group_order(g, true) == BigUint::from(1u32)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{gen_gnp, Seed};

    fn brute_force_aut(g: &Graph) -> u64 {
        fn rec(g: &Graph, perm: &mut Vec<usize>, used: &mut Vec<bool>, count: &mut u64) {
            let k = perm.len();
            if k == g.n() {
                *count += 1;
                return;
            }
            for v in 0..g.n() {
                if used[v] {
                    continue;
                }
                if (0..k).all(|i| g.has_edge(i, k) == g.has_edge(perm[i], v)) {
                    used[v] = true;
                    perm.push(v);
                    rec(g, perm, used, count);
                    perm.pop();
                    used[v] = false;
                }
            }
        }
        let mut count = 0;
        rec(g, &mut Vec::new(), &mut vec![false; g.n()], &mut count);
        count
    }

    #[test]
    fn examples() {
        assert_eq!(automorphism_count(&Graph::complete(3)), BigUint::from(6u32));
        assert_eq!(automorphism_count(&Graph::path(4)), BigUint::from(2u32));
        assert_eq!(automorphism_count(&Graph::empty(5)), BigUint::from(120u32));
        assert_eq!(automorphism_count(&Graph::cycle(5)), BigUint::from(10u32));
        let petersen = Graph::from_edges(
            10,
            &[
                (0, 1), (1, 2), (2, 3), (3, 4), (0, 4),
                (0, 5), (1, 6), (2, 7), (3, 8), (4, 9),
                (5, 7), (7, 9), (9, 6), (6, 8), (8, 5),
            ],
        )
        .unwrap();
        assert_eq!(automorphism_count(&petersen), BigUint::from(120u32));
    }

    #[test]
    fn large_symmetric_groups() {
        let fact = |n: u32| (1..=n).fold(BigUint::from(1u32), |a, k| a * k);
        assert_eq!(automorphism_count(&Graph::empty(20)), fact(20));
        assert_eq!(automorphism_count(&Graph::complete(25)), fact(25));
    }

    #[test]
    fn disjoint_union_multiplies() {
        let g = Graph::complete(3).disjoint_union(&Graph::path(3));
        assert_eq!(automorphism_count(&g), BigUint::from(12u32));
        // two isomorphic components also swap
        let h = Graph::path(3).disjoint_union(&Graph::path(3));
        assert_eq!(automorphism_count(&h), BigUint::from(8u32));
    }

    #[test]
    fn asymmetry() {
        assert!(is_asymmetric(&Graph::empty(1)));
        assert!(!is_asymmetric(&Graph::complete(2)));
        let g = Graph::from_edges(6, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (2, 4)]).unwrap();
        assert_eq!(brute_force_aut(&g), 1);
        assert!(is_asymmetric(&g));
    }

    #[test]
    fn no_asymmetric_graphs_below_six_vertices() {
        for n in 2..=5usize {
            let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
            for mask in 0u32..(1 << pairs.len()) {
                let edges: Vec<_> = pairs.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &e)| e).collect();
                let g = Graph::from_edges(n, &edges).unwrap();
                assert!(!is_asymmetric(&g), "{g:?}");
            }
        }
    }

    #[test]
    fn agrees_with_brute_force() {
        let base = Seed::new(31);
        for t in 0..150u64 {
            let n = 1 + (t as usize % 8);
            let p = [0.2, 0.5, 0.8][t as usize % 3];
            let g = gen_gnp(n, p, base.substream(t)).unwrap();
            assert_eq!(automorphism_count(&g), BigUint::from(brute_force_aut(&g)), "{g:?}");
        }
    }

    #[test]
    fn invariant_under_relabelling() {
        let g = gen_gnp(9, 0.3, Seed::new(4)).unwrap();
        let perm = [3, 7, 0, 8, 1, 5, 2, 6, 4];
        assert_eq!(automorphism_count(&g), automorphism_count(&g.permute(&perm)));
    }
}
