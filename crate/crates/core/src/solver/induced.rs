//! Induced subgraph isomorphism by backtracking over bitset domains.
//!
//! Every pattern vertex keeps a domain of admissible target vertices. After
//! mapping `u -> v`, each unassigned pattern vertex `w` intersects its domain
//! with the neighbourhood of `v` when `uw` is an edge and with the
//! non-neighbourhood of `v` otherwise, so edges and non-edges are both
//! enforced. Neither row contains `v` itself, which makes the map injective
//! for free. Branching picks the smallest domain, ties by smallest index.
//!
//! Once some vertices are assigned, the domain of an unassigned pattern
//! vertex lies inside one cell of the target: the vertices whose adjacency
//! to the assigned target vertices matches the pattern vertex's adjacency to
//! the assigned pattern vertices. When every occupied cell has at most 64
//! candidates the subtree is relabelled so each cell is one machine word and
//! continues with single-word domains.

use num_traits::ToPrimitive;

use super::{automorphism_count, Count, Meter, Outcome3, SearchBudget};
use crate::bits;
use crate::graph::Graph;

#[derive(Clone, Copy, PartialEq, Eq)]
enum Mode {
    Decide,
    Count,
}

/// Outcome of forward checking one candidate.
enum Scan {
    /// Position whose domain became empty.
    Wipeout(usize),
    /// Position of the smallest new domain and the size of the union.
    Alive(usize, usize),
}

#[inline(always)]
fn size_key(c: u32, k: u32) -> u64 {
    (c as u64) << 32 | k as u64
}

/// Row width in words. The fixed variant lets the compiler keep a row in
/// registers for the common small targets.
trait Width: Copy {
    fn get(self) -> usize;

    /// Writes `dst[i] = src[i] & (adj or non, by pattern adjacency)` for every
    /// row, stopping at the first empty one. `scratch` holds `get()` words.
    #[allow(clippy::too_many_arguments)]
    fn scan(self, src: &[u64], dst: &mut [u64], ids: &[u32], adj: &[u64], non: &[u64], padj: &[u64], scratch: &mut [u64]) -> Scan;
}

#[derive(Clone, Copy)]
struct Fixed<const W: usize>;

impl<const W: usize> Width for Fixed<W> {
    #[inline(always)]
    fn get(self) -> usize {
        W
    }

    #[inline(always)]
    fn scan(self, src: &[u64], dst: &mut [u64], ids: &[u32], adj: &[u64], non: &[u64], padj: &[u64], _: &mut [u64]) -> Scan {
        let adj: &[u64; W] = adj.try_into().unwrap();
        let non: &[u64; W] = non.try_into().unwrap();
        let mut union = [0u64; W];
        let mut best = u64::MAX;
        let mut best_pos = 0;
        let rows = src.chunks_exact(W).zip(dst.chunks_exact_mut(W)).zip(ids);
        for (pos, ((s, d), &k)) in rows.enumerate() {
            let sel = padj[k as usize];
            let mut c = 0;
            for i in 0..W {
                let x = s[i] & ((adj[i] & sel) | (non[i] & !sel));
                d[i] = x;
                union[i] |= x;
                c += x.count_ones();
            }
            if c == 0 {
                return Scan::Wipeout(pos);
            }
            let key = size_key(c, k);
            if key < best {
                best = key;
                best_pos = pos;
            }
        }
        Scan::Alive(best_pos, union.iter().map(|x| x.count_ones() as usize).sum())
    }
}

#[derive(Clone, Copy)]
struct Dynamic(usize);

impl Width for Dynamic {
    #[inline(always)]
    fn get(self) -> usize {
        self.0
    }

    fn scan(self, src: &[u64], dst: &mut [u64], ids: &[u32], adj: &[u64], non: &[u64], padj: &[u64], union: &mut [u64]) -> Scan {
        let w = self.0;
        union.fill(0);
        let mut best = u64::MAX;
        let mut best_pos = 0;
        let rows = src.chunks_exact(w).zip(dst.chunks_exact_mut(w)).zip(ids);
        for (pos, ((s, d), &k)) in rows.enumerate() {
            let sel = padj[k as usize];
            let mut c = 0;
            for i in 0..w {
                let x = s[i] & ((adj[i] & sel) | (non[i] & !sel));
                d[i] = x;
                union[i] |= x;
                c += x.count_ones();
            }
            if c == 0 {
                return Scan::Wipeout(pos);
            }
            let key = size_key(c, k);
            if key < best {
                best = key;
                best_pos = pos;
            }
        }
        Scan::Alive(best_pos, bits::count(union))
    }
}

/// Deepest level at which relabelling into cells is attempted.
const MAX_CELL_DEPTH: usize = 6;
/// Most cells (words per relabelled row).
const MAX_CELLS: usize = 16;
const ID_BITS: u32 = 24;
const ID_MASK: u32 = (1 << ID_BITS) - 1;

/// Relabelled target for a subtree: local vertex `64 * cell + bit`, rows of
/// `cells` words.
#[derive(Default)]
struct CellTables {
    cells: usize,
    adj: Vec<u64>,
    non: Vec<u64>,
    /// One word per domain, `np` per depth.
    dom: Vec<u64>,
    /// Pattern vertex in the low bits, its cell above `ID_BITS`.
    ids: Vec<u32>,
    local: Vec<u32>,
    unions: Vec<u64>,
}

struct Search<'a, W: Width> {
    np: usize,
    w: W,
    target: &'a Graph,
    /// Non-neighbourhood rows of the target, excluding the vertex itself.
    non: &'a [u64],
    /// Pattern adjacency as all-ones / all-zeros words.
    padj: &'a [u64],
    union: Vec<u64>,
    /// Assigned pattern vertices, outermost first.
    path: Vec<u32>,
    cell: CellTables,
    meter: Meter,
    mode: Mode,
    found: u64,
    stop: bool,
}

struct Tables {
    non: Vec<u64>,
    padj: Vec<u64>,
    /// One block of `np` domains per depth; a block lists the domains of the
    /// unassigned pattern vertices in the order given by `ids`.
    dom: Vec<u64>,
    ids: Vec<u32>,
    /// Position of the first vertex to branch on.
    first: usize,
}

impl Tables {
    /// Returns `None` when some pattern vertex has an empty initial domain.
    fn new(pattern: &Graph, target: &Graph) -> Option<Self> {
        let np = pattern.n();
        let nt = target.n();
        let w = target.words();
        let full = bits::full(nt);
        let mut non = vec![0u64; nt * w];
        for v in 0..nt {
            let row = target.row(v);
            let out = &mut non[v * w..(v + 1) * w];
            for k in 0..w {
                out[k] = !row[k] & full[k];
            }
            bits::clear(out, v);
        }
        let mut padj = vec![0u64; np * np];
        for (u, v) in pattern.edges() {
            padj[u * np + v] = u64::MAX;
            padj[v * np + u] = u64::MAX;
        }

        let mut dom = vec![0u64; (np + 1) * np * w];
        let tdeg: Vec<usize> = (0..nt).map(|v| target.degree(v)).collect();
        let mut best = (usize::MAX, 0);
        for u in 0..np {
            let du = pattern.degree(u);
            let nu = np - 1 - du;
            let d = &mut dom[u * w..(u + 1) * w];
            for v in 0..nt {
                if tdeg[v] >= du && nt - 1 - tdeg[v] >= nu {
                    bits::set(d, v);
                }
            }
            let c = bits::count(d);
            if c == 0 {
                return None;
            }
            best = best.min((c, u));
        }
        let mut ids = vec![0u32; (np + 1) * np];
        for u in 0..np {
            ids[u] = u as u32;
        }
        Some(Tables {
            non,
            padj,
            dom,
            ids,
            first: best.1,
        })
    }
}

impl<W: Width> Search<'_, W> {
    /// `dom` and `ids` start at the current depth's block; deeper blocks
    /// follow. `branch` is the position of the vertex with the smallest
    /// domain (ties by smallest index).
    fn go(&mut self, depth: usize, branch: usize, dom: &mut [u64], ids: &mut [u32]) {
        if !self.meter.tick() {
            return;
        }
        let np = self.np;
        let w = self.w.get();
        let rem = np - depth;
        let (cur, deeper) = dom.split_at_mut(np * w);
        let (cur_ids, deeper_ids) = ids.split_at_mut(np);
        if branch != 0 {
            cur_ids.swap(0, branch);
            for i in 0..w {
                cur.swap(i, branch * w + i);
            }
        }
        let cur = &mut cur[..rem * w];
        if rem == 1 {
            // last vertex: every remaining candidate completes an embedding
            self.record(bits::count(&cur[..w]) as u64);
            return;
        }
        if (1..=MAX_CELL_DEPTH).contains(&depth) && self.enter_cells(depth, cur, &cur_ids[..rem]) {
            return;
        }
        let (udom, src) = cur.split_at_mut(w);
        let u = cur_ids[0];
        let target = self.target;
        let non_all = self.non;
        let padj_all = self.padj;
        let padj = &padj_all[u as usize * np..(u as usize + 1) * np];
        let rest_ids = &mut cur_ids[1..rem];

        self.path.push(u);
        for v in bits::ones(udom) {
            let adj = &target.row(v)[..w];
            let non = &non_all[v * w..(v + 1) * w];
            let next = &mut deeper[..(rem - 1) * w];
            match self.w.scan(src, next, rest_ids, adj, non, padj, &mut self.union) {
                Scan::Wipeout(pos) => {
                    // check this vertex first for the remaining candidates
                    if pos > 0 {
                        rest_ids.swap(0, pos);
                        for i in 0..w {
                            src.swap(i, pos * w + i);
                        }
                    }
                }
                Scan::Alive(best_pos, union) => {
                    if union < rem - 1 {
                        continue;
                    }
                    deeper_ids[..rem - 1].copy_from_slice(rest_ids);
                    self.go(depth + 1, best_pos, deeper, deeper_ids);
                    if self.stop || self.meter.exhausted() {
                        break;
                    }
                }
            }
        }
        self.path.pop();
    }

    fn record(&mut self, completions: u64) {
        self.found += completions;
        if self.mode == Mode::Decide && self.found > 0 {
            self.stop = true;
        }
    }

    /// Tries to relabel the current node into cells and, on success, solves
    /// the whole subtree with single-word domains. Position 0 is the branch.
    fn enter_cells(&mut self, depth: usize, cur: &[u64], ids: &[u32]) -> bool {
        let np = self.np;
        let w = self.w.get();
        let rem = ids.len();
        let mut ct = std::mem::take(&mut self.cell);

        // group positions by adjacency signature towards the assigned vertices
        let mut group_of_sig = [u8::MAX; 1 << MAX_CELL_DEPTH];
        let mut groups = 0usize;
        let mut pos_group = Vec::with_capacity(rem);
        let mut ok = true;
        for &k in ids {
            let mut sig = 0usize;
            for (j, &a) in self.path.iter().enumerate() {
                sig |= ((self.padj[a as usize * np + k as usize] & 1) as usize) << j;
            }
            if group_of_sig[sig] == u8::MAX {
                if groups == MAX_CELLS {
                    ok = false;
                    break;
                }
                group_of_sig[sig] = groups as u8;
                groups += 1;
            }
            pos_group.push(group_of_sig[sig]);
        }
        if ok {
            ct.unions.clear();
            ct.unions.resize(groups * w, 0);
            for (pos, &g) in pos_group.iter().enumerate() {
                let g = g as usize;
                for i in 0..w {
                    ct.unions[g * w + i] |= cur[pos * w + i];
                }
            }
            ok = (0..groups).all(|g| bits::count(&ct.unions[g * w..(g + 1) * w]) <= 64);
        }
        if !ok {
            self.cell = ct;
            return false;
        }

        // local labels
        let nt = self.target.n();
        ct.local.clear();
        ct.local.resize(nt, u32::MAX);
        let mut members: Vec<usize> = Vec::new();
        for g in 0..groups {
            for (r, t) in bits::ones(&ct.unions[g * w..(g + 1) * w]).enumerate() {
                ct.local[t] = (g * 64 + r) as u32;
                members.push(t);
            }
        }
        ct.cells = groups;
        ct.adj.clear();
        ct.adj.resize(groups * 64 * groups, 0);
        ct.non.clear();
        ct.non.resize(groups * 64 * groups, 0);
        let full: Vec<u64> = (0..groups)
            .map(|g| {
                let c = bits::count(&ct.unions[g * w..(g + 1) * w]);
                if c == 64 {
                    u64::MAX
                } else {
                    (1u64 << c) - 1
                }
            })
            .collect();
        for &t in &members {
            let lt = ct.local[t] as usize;
            let row = self.target.row(t);
            let out = &mut ct.adj[lt * groups..(lt + 1) * groups];
            for (i, &word) in row.iter().enumerate() {
                let mut x = word;
                while x != 0 {
                    let s = i * 64 + x.trailing_zeros() as usize;
                    x &= x - 1;
                    let ls = ct.local[s];
                    if ls != u32::MAX {
                        out[(ls >> 6) as usize] |= 1u64 << (ls & 63);
                    }
                }
            }
            for g in 0..groups {
                let mut nw = full[g] & !ct.adj[lt * groups + g];
                if g == lt >> 6 {
                    nw &= !(1u64 << (lt & 63));
                }
                ct.non[lt * groups + g] = nw;
            }
        }

        // domains and ids in local terms
        ct.dom.clear();
        ct.dom.resize((np + 1) * np, 0);
        ct.ids.clear();
        ct.ids.resize((np + 1) * np, 0);
        for pos in 0..rem {
            let mut x = 0u64;
            for t in bits::ones(&cur[pos * w..(pos + 1) * w]) {
                x |= 1u64 << (ct.local[t] & 63);
            }
            ct.dom[pos] = x;
            ct.ids[pos] = ids[pos] | (pos_group[pos] as u32) << ID_BITS;
        }

        let (adj, non) = (std::mem::take(&mut ct.adj), std::mem::take(&mut ct.non));
        let (mut dom, mut cids) = (std::mem::take(&mut ct.dom), std::mem::take(&mut ct.ids));
        let cells = ct.cells;
        self.cell = ct;
        let ctx = CellCtx { cells, adj: &adj, non: &non };
        self.cgo(&ctx, depth, 0, &mut dom, &mut cids);
        self.cell.adj = adj;
        self.cell.non = non;
        self.cell.dom = dom;
        self.cell.ids = cids;
        true
    }

    /// Single-word version of [`Search::go`] over a relabelled subtree.
    fn cgo(&mut self, ctx: &CellCtx<'_>, depth: usize, branch: usize, dom: &mut [u64], ids: &mut [u32]) {
        if !self.meter.tick() {
            return;
        }
        let np = self.np;
        let rem = np - depth;
        let (cur, deeper) = dom.split_at_mut(np);
        let (cur_ids, deeper_ids) = ids.split_at_mut(np);
        cur.swap(0, branch);
        cur_ids.swap(0, branch);
        if rem == 1 {
            self.record(cur[0].count_ones() as u64);
            return;
        }
        let cells = ctx.cells;
        let udom = cur[0];
        let src = &mut cur[1..rem];
        let u = (cur_ids[0] & ID_MASK) as usize;
        let ucell = (cur_ids[0] >> ID_BITS) as usize;
        let padj = &self.padj[u * np..(u + 1) * np];
        let rest_ids = &mut cur_ids[1..rem];

        let mut cand = udom;
        while cand != 0 {
            let b = cand.trailing_zeros() as usize;
            cand &= cand - 1;
            let v = ucell * 64 + b;
            let vadj = &ctx.adj[v * cells..(v + 1) * cells];
            let vnon = &ctx.non[v * cells..(v + 1) * cells];
            let next = &mut deeper[..rem - 1];
            let mut union = [0u64; MAX_CELLS];
            let mut best = u64::MAX;
            let mut best_pos = 0;
            let mut wipeout = None;
            for (pos, ((&s, d), &id)) in src.iter().zip(next.iter_mut()).zip(rest_ids.iter()).enumerate() {
                let g = (id >> ID_BITS) as usize;
                let sel = padj[(id & ID_MASK) as usize];
                let x = s & ((vadj[g] & sel) | (vnon[g] & !sel));
                *d = x;
                union[g] |= x;
                let c = x.count_ones();
                if c == 0 {
                    wipeout = Some(pos);
                    break;
                }
                let key = size_key(c, id & ID_MASK);
                if key < best {
                    best = key;
                    best_pos = pos;
                }
            }
            if let Some(pos) = wipeout {
                // check this vertex first for the remaining candidates
                src.swap(0, pos);
                rest_ids.swap(0, pos);
                continue;
            }
            let covered: u32 = union[..cells].iter().map(|x| x.count_ones()).sum();
            if (covered as usize) < rem - 1 {
                continue;
            }
            deeper_ids[..rem - 1].copy_from_slice(rest_ids);
            self.cgo(ctx, depth + 1, best_pos, deeper, deeper_ids);
            if self.stop || self.meter.exhausted() {
                break;
            }
        }
    }
}

#[derive(Clone, Copy)]
struct CellCtx<'b> {
    cells: usize,
    adj: &'b [u64],
    non: &'b [u64],
}

/// Runs the search; returns `(found, nodes, timed_out)`.
fn search_with<W: Width>(w: W, pattern: &Graph, target: &Graph, t: &mut Tables, budget: SearchBudget, mode: Mode) -> (u64, u64, bool) {
    let mut s = Search {
        np: pattern.n(),
        w,
        target,
        non: &t.non,
        padj: &t.padj,
        union: vec![0; w.get()],
        path: Vec::with_capacity(pattern.n()),
        cell: CellTables::default(),
        meter: Meter::new(budget),
        mode,
        found: 0,
        stop: false,
    };
    if s.np == 0 {
        return (1, 0, false);
    }
    s.go(0, t.first, &mut t.dom, &mut t.ids);
    (s.found, s.meter.nodes(), s.meter.exhausted() && !s.stop)
}

fn run_search(pattern: &Graph, target: &Graph, budget: SearchBudget, mode: Mode) -> (u64, u64, bool) {
    if pattern.n() > target.n() {
        return (0, 0, false);
    }
    let Some(mut tables) = Tables::new(pattern, target) else {
        return (0, 0, false);
    };
    let t = &mut tables;
    match target.words() {
        1 => search_with(Fixed::<1>, pattern, target, t, budget, mode),
        2 => search_with(Fixed::<2>, pattern, target, t, budget, mode),
        3 => search_with(Fixed::<3>, pattern, target, t, budget, mode),
        4 => search_with(Fixed::<4>, pattern, target, t, budget, mode),
        w => search_with(Dynamic(w), pattern, target, t, budget, mode),
    }
}

/// Does `target` contain an induced copy of `pattern`?
pub fn contains_induced(pattern: &Graph, target: &Graph, budget: SearchBudget) -> Outcome3 {
    let (found, nodes, timed_out) = run_search(pattern, target, budget, Mode::Decide);
    if found > 0 {
        Outcome3::Yes
    } else if timed_out {
        Outcome3::Timeout { nodes }
    } else {
        Outcome3::No
    }
}

/// Number of injective maps `pattern -> target` preserving edges and non-edges.
pub fn count_embeddings(pattern: &Graph, target: &Graph, budget: SearchBudget) -> Count {
    let (found, nodes, timed_out) = run_search(pattern, target, budget, Mode::Count);
    if timed_out {
        Count::Timeout { nodes }
    } else {
        Count::Exact { value: found, nodes }
    }
}

/// Number of vertex subsets `S` of `target` with `target[S]` isomorphic to
/// `pattern`.
///
/// Each such subset carries exactly `|Aut(pattern)|` embeddings, so the
/// embedding count divides evenly.
pub fn count_induced_subsets(pattern: &Graph, target: &Graph, budget: SearchBudget) -> Count {
    assert!(pattern.n() >= 1, "count_induced_subsets needs a non-empty pattern");
    match count_embeddings(pattern, target, budget) {
        Count::Exact { value, nodes } => {
            if value == 0 {
                return Count::Exact { value: 0, nodes };
            }
            let aut = automorphism_count(pattern)
                .to_u64()
                .expect("automorphism group larger than embedding count");
            assert_eq!(value % aut, 0, "embedding count {value} not divisible by |Aut| = {aut}");
            Count::Exact { value: value / aut, nodes }
        }
        t => t,
    }
}
