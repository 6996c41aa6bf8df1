//! Canonical labelling and automorphism groups of codes, viewed as
//! multisets of points in GF(2)^k.
//!
//! The search individualizes points and refines the resulting ordered
//! partition by colour refinement on the incidence structure between points
//! and nonzero codewords. Codeword colours and point signatures are both
//! computed with a Walsh-Hadamard transform over GF(2)^k, so one refinement
//! round costs O(k 2^k) regardless of the number of points.
//!
//! A leaf of the search tree orders the points; its certificate is the list of
//! multiplicities in that order together with the reduced row echelon form of
//! the point matrix. Two leaves with equal trace and certificate differ by an
//! automorphism, which is recorded and used to prune the rest of the tree.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigUint;
use num_traits::One;

use crate::gf2core::echelon;
use crate::BinaryCode;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct CanonicalKey {
    pub bytes: Vec<u8>,
    pub aut_order: BigUint,
}

impl CanonicalKey {
    pub fn hex(&self) -> String {
        self.bytes.iter().map(|b| format!("{b:02x}")).collect()
    }
}

impl fmt::Display for CanonicalKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} aut={}", self.hex(), self.aut_order)
    }
}

/// Full result of a canonization.
#[derive(Clone, Debug)]
pub struct Canonical {
    pub key: CanonicalKey,
    /// The canonical representative: points in canonical order, each repeated
    /// by its multiplicity, followed by the zero columns.
    pub code: BinaryCode,
    /// Distinct nonzero columns of the input, in increasing order.
    pub points: Vec<u16>,
    pub multiplicities: Vec<usize>,
    /// Generators of the automorphism group as permutations of `points` indices.
    pub generators: Vec<Vec<usize>>,
}

pub fn canonical_form(code: &BinaryCode) -> CanonicalKey {
    canonize(code).key
}

pub fn automorphism_order(code: &BinaryCode) -> BigUint {
    canonize(code).key.aut_order
}

#[inline]
fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

#[inline]
fn combine(h: u64, v: u64) -> u64 {
    mix(h ^ v.wrapping_mul(0x100_0000_01b3))
}

fn walsh(v: &mut [u64]) {
    let mut h = 1;
    while h < v.len() {
        for i in (0..v.len()).step_by(2 * h) {
            for j in i..i + h {
                let (a, b) = (v[j], v[j + h]);
                v[j] = a.wrapping_add(b);
                v[j + h] = a.wrapping_sub(b);
            }
        }
        h *= 2;
    }
}

#[derive(Clone, Debug)]
struct Partition {
    order: Vec<usize>,
    /// start offsets of cells, increasing; the last cell ends at order.len()
    starts: Vec<usize>,
}

impl Partition {
    fn cell_end(&self, c: usize) -> usize {
        self.starts.get(c + 1).copied().unwrap_or(self.order.len())
    }

    /// First smallest cell of size at least two.
    fn target(&self) -> Option<usize> {
        let mut best: Option<(usize, usize)> = None;
        for c in 0..self.starts.len() {
            let size = self.cell_end(c) - self.starts[c];
            if size > 1 && best.is_none_or(|(_, s)| size < s) {
                best = Some((c, size));
            }
        }
        best.map(|(c, _)| c)
    }

    fn individualize(&self, cell: usize, v: usize) -> Partition {
        let (s, e) = (self.starts[cell], self.cell_end(cell));
        let mut order = self.order.clone();
        let at = order[s..e].iter().position(|&x| x == v).expect("vertex in cell") + s;
        order[s..=at].rotate_right(1);
        let mut starts = self.starts.clone();
        starts.insert(cell + 1, s + 1);
        Partition { order, starts }
    }
}

struct Ctx {
    k: usize,
    points: Vec<u16>,
    mults: Vec<usize>,
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
struct Cert {
    mults: Vec<usize>,
    rows: Vec<u128>,
}

#[derive(Clone, Debug)]
struct Leaf {
    order: Vec<usize>,
    trace: Vec<u64>,
    cert: Cert,
    path: Vec<usize>,
}

impl Ctx {
    /// Refines `p` to a stable partition and returns the hash of the process.
    fn refine(&self, p: &mut Partition) -> u64 {
        let size = 1usize << self.k;
        let npts = self.points.len();
        let mut trace = mix(p.starts.len() as u64);
        let mut f = vec![0u64; size];
        let mut sig = vec![0u64; npts];
        loop {
            let before = p.starts.len();
            f.iter_mut().for_each(|x| *x = 0);
            for c in 0..p.starts.len() {
                let h = mix(0x5151 + c as u64);
                for &v in &p.order[p.starts[c]..p.cell_end(c)] {
                    f[self.points[v] as usize] = h;
                }
            }
            let total = f.iter().fold(0u64, |a, &b| a.wrapping_add(b));
            walsh(&mut f);
            // f[c] now holds total - 2 * (sum over points with c.p = 1)
            let mut col_total = 0u64;
            for (c, x) in f.iter_mut().enumerate() {
                *x = if c == 0 { 0 } else { mix(total.wrapping_sub(*x)) };
                col_total = col_total.wrapping_add(*x);
            }
            walsh(&mut f);
            for (v, s) in sig.iter_mut().enumerate() {
                *s = col_total.wrapping_sub(f[self.points[v] as usize]);
            }

            let mut starts = Vec::with_capacity(npts);
            for c in 0..p.starts.len() {
                let (s, e) = (p.starts[c], p.cell_end(c));
                let cell = &mut p.order[s..e];
                cell.sort_by_key(|&v| (sig[v], v));
                starts.push(s);
                trace = combine(trace, (e - s) as u64);
                for i in s + 1..e {
                    if sig[p.order[i]] != sig[p.order[i - 1]] {
                        starts.push(i);
                    }
                }
                for i in s..e {
                    if i == s || sig[p.order[i]] != sig[p.order[i - 1]] {
                        trace = combine(trace, sig[p.order[i]]);
                    }
                }
            }
            p.starts = starts;
            if p.starts.len() == before {
                break;
            }
        }
        combine(trace, p.starts.len() as u64)
    }

    fn certificate(&self, order: &[usize]) -> Cert {
        let mut rows = vec![0u128; self.k];
        for (j, &v) in order.iter().enumerate() {
            let u = self.points[v];
            for (i, row) in rows.iter_mut().enumerate() {
                if (u >> i) & 1 == 1 {
                    *row |= 1u128 << j;
                }
            }
        }
        Cert { mults: order.iter().map(|&v| self.mults[v]).collect(), rows: echelon(&rows) }
    }
}

struct Search<'a> {
    ctx: &'a Ctx,
    first: Option<Leaf>,
    best: Option<Leaf>,
    generators: Vec<Vec<usize>>,
}

fn orbits(n: usize, gens: &[&Vec<usize>]) -> Vec<usize> {
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for g in gens {
        for (i, &j) in g.iter().enumerate() {
            let (a, b) = (find(&mut parent, i), find(&mut parent, j));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    (0..n).map(|i| find(&mut parent, i)).collect()
}

fn common_prefix(a: &[usize], b: &[usize]) -> usize {
    a.iter().zip(b).take_while(|(x, y)| x == y).count()
}

fn cmp_prefix(node: &[u64], leaf: &[u64]) -> Ordering {
    for (a, b) in node.iter().zip(leaf) {
        match a.cmp(b) {
            Ordering::Equal => {}
            o => return o,
        }
    }
    if node.len() > leaf.len() {
        Ordering::Greater
    } else {
        Ordering::Equal
    }
}

impl<'a> Search<'a> {
    fn permutation(&self, from: &[usize], to: &[usize]) -> Vec<usize> {
        let mut g = vec![0usize; from.len()];
        for (&a, &b) in from.iter().zip(to) {
            g[a] = b;
        }
        g
    }

    fn add_generator(&mut self, g: Vec<usize>) {
        if g.iter().enumerate().any(|(i, &j)| i != j) && !self.generators.contains(&g) {
            self.generators.push(g);
        }
    }

    fn stabilizer_orbits(&self, path: &[usize]) -> Vec<usize> {
        let gens: Vec<&Vec<usize>> = self.generators.iter().filter(|g| path.iter().all(|&v| g[v] == v)).collect();
        orbits(self.ctx.points.len(), &gens)
    }

    /// Descends along the first child at every level, then explores the
    /// remaining children bottom-up. Returns the orbit sizes per level.
    fn first_path(&mut self, part: Partition, trace: Vec<u64>, path: Vec<usize>) -> Vec<usize> {
        let Some(cell) = part.target() else {
            let cert = self.ctx.certificate(&part.order);
            let leaf = Leaf { order: part.order, trace, cert, path };
            self.first = Some(leaf.clone());
            self.best = Some(leaf);
            return Vec::new();
        };
        let members: Vec<usize> = {
            let mut m = part.order[part.starts[cell]..part.cell_end(cell)].to_vec();
            m.sort_unstable();
            m
        };
        let v = members[0];
        let mut child = part.individualize(cell, v);
        let t = self.ctx.refine(&mut child);
        let mut child_trace = trace.clone();
        child_trace.push(t);
        let mut child_path = path.clone();
        child_path.push(v);
        let mut sizes = self.first_path(child, child_trace, child_path);

        let depth = path.len();
        let mut done = vec![v];
        for &w in &members[1..] {
            let orb = self.stabilizer_orbits(&path);
            if done.iter().any(|&d| orb[d] == orb[w]) {
                continue;
            }
            done.push(w);
            let mut child = part.individualize(cell, w);
            let t = self.ctx.refine(&mut child);
            let mut child_trace = trace.clone();
            child_trace.push(t);
            let mut child_path = path.clone();
            child_path.push(w);
            if let Some(j) = self.other(child, child_trace, child_path, true) {
                debug_assert!(j >= depth);
            }
        }
        let orb = self.stabilizer_orbits(&path);
        let size = members.iter().filter(|&&w| orb[w] == orb[v]).count();
        sizes.insert(0, size);
        sizes
    }

    /// Explores a subtree off the first path. `Some(j)` asks the caller to
    /// unwind to the node at depth `j`.
    fn other(&mut self, part: Partition, trace: Vec<u64>, path: Vec<usize>, eq_first: bool) -> Option<usize> {
        let first_trace = &self.first.as_ref().expect("first leaf").trace;
        let eq_first =
            eq_first && trace.len() <= first_trace.len() && trace[trace.len() - 1] == first_trace[trace.len() - 1];
        let best_cmp = cmp_prefix(&trace, &self.best.as_ref().expect("best leaf").trace);
        if !eq_first && best_cmp == Ordering::Greater {
            return None;
        }
        let Some(cell) = part.target() else {
            let cert = self.ctx.certificate(&part.order);
            let first = self.first.as_ref().expect("first leaf");
            if eq_first && trace == first.trace && cert == first.cert {
                let g = self.permutation(&first.order, &part.order);
                let j = common_prefix(&first.path, &path);
                self.add_generator(g);
                return Some(j);
            }
            let best = self.best.as_ref().expect("best leaf");
            match (&trace, &cert).cmp(&(&best.trace, &best.cert)) {
                Ordering::Equal => {
                    let g = self.permutation(&best.order, &part.order);
                    let j = common_prefix(&best.path, &path);
                    self.add_generator(g);
                    return Some(j);
                }
                Ordering::Less => {
                    self.best = Some(Leaf { order: part.order, trace, cert, path });
                }
                Ordering::Greater => {}
            }
            return None;
        };
        let depth = path.len();
        let mut members = part.order[part.starts[cell]..part.cell_end(cell)].to_vec();
        members.sort_unstable();
        let mut done: Vec<usize> = Vec::new();
        for &w in &members {
            let orb = self.stabilizer_orbits(&path);
            if done.iter().any(|&d| orb[d] == orb[w]) {
                continue;
            }
            done.push(w);
            let mut child = part.individualize(cell, w);
            let t = self.ctx.refine(&mut child);
            let mut child_trace = trace.clone();
            child_trace.push(t);
            let mut child_path = path.clone();
            child_path.push(w);
            if let Some(j) = self.other(child, child_trace, child_path, eq_first) {
                if j < depth {
                    return Some(j);
                }
            }
        }
        None
    }
}

pub fn canonize(code: &BinaryCode) -> Canonical {
    let k = code.k();
    let cm = code.column_multiplicities(0);
    let (points, mults): (Vec<u16>, Vec<usize>) = cm.points().unzip();
    let zeros = code.n() - mults.iter().sum::<usize>();
    let ctx = Ctx { k, points: points.clone(), mults: mults.clone() };

    let mut order: Vec<usize> = (0..points.len()).collect();
    order.sort_by_key(|&v| (std::cmp::Reverse(mults[v]), v));
    let mut starts = vec![0];
    for i in 1..order.len() {
        if mults[order[i]] != mults[order[i - 1]] {
            starts.push(i);
        }
    }
    let mut root = Partition { order, starts };
    let t0 = ctx.refine(&mut root);

    let mut search = Search { ctx: &ctx, first: None, best: None, generators: Vec::new() };
    let sizes = search.first_path(root, vec![t0], Vec::new());
    let aut_order = sizes.iter().fold(BigUint::one(), |acc, &s| acc * BigUint::from(s));
    let best = search.best.expect("search reaches a leaf");

    let npts = points.len();
    let mut bytes = vec![k as u8, (code.n() - 1) as u8, zeros as u8, npts as u8];
    bytes.extend(best.cert.mults.iter().map(|&m| m as u8));
    let row_bytes = npts.div_ceil(8);
    for r in &best.cert.rows {
        bytes.extend_from_slice(&r.to_le_bytes()[..row_bytes]);
    }

    let mut cols = Vec::with_capacity(code.n());
    for (j, &m) in best.cert.mults.iter().enumerate() {
        let mut c = 0u16;
        for (i, r) in best.cert.rows.iter().enumerate() {
            c |= (((r >> j) & 1) as u16) << i;
        }
        cols.extend(std::iter::repeat_n(c, m));
    }
    cols.extend(std::iter::repeat_n(0, zeros));
    let canon_code = BinaryCode::from_columns(k, &cols).expect("canonical matrix has full rank");

    Canonical {
        key: CanonicalKey { bytes, aut_order },
        code: canon_code,
        points,
        multiplicities: mults,
        generators: search.generators,
    }
}
