//! Enumeration of one-dimensional extensions of a code.
//!
//! A child of dimension `k + 1` is described by how often each parent column
//! `u` is lifted to `(u, 1)` rather than `(u, 0)`; the remaining
//! `m = n' - n` columns are `(0, 1)`. Writing `y_u` for the number of lifted
//! copies of `u`, the functional `(g, 1)` has weight
//!
//! ```text
//! wt(g, 1) = wt(g) + m + sum_{g.u = 0} y_u - sum_{g.u = 1} y_u
//! ```
//!
//! and the search walks the `y_u` depth first, cutting off any branch in
//! which some `wt(g, 1)` can no longer reach an allowed weight.

use std::collections::{BTreeMap, BTreeSet};

use crate::{BinaryCode, Error, Result};

#[derive(Clone, Debug)]
pub struct ExtensionProblem {
    pub parent: BinaryCode,
    /// Effective length of the child.
    pub n_child: usize,
    pub delta: usize,
    pub a: usize,
    pub b: usize,
    pub allowed_weights: Option<BTreeSet<usize>>,
    /// Only emit children whose every point has multiplicity at least `n' - n`.
    pub min_multiplicity: bool,
}

impl ExtensionProblem {
    pub fn new(parent: BinaryCode, n_child: usize, delta: usize, a: usize, b: usize) -> Self {
        ExtensionProblem { parent, n_child, delta, a, b, allowed_weights: None, min_multiplicity: false }
    }

    pub fn with_weights(mut self, weights: BTreeSet<usize>) -> Self {
        self.allowed_weights = Some(weights);
        self
    }

    pub fn with_min_multiplicity(mut self, on: bool) -> Self {
        self.min_multiplicity = on;
        self
    }

    pub fn allows(&self, w: usize) -> bool {
        w.is_multiple_of(self.delta)
            && w >= self.a * self.delta
            && w <= self.b * self.delta
            && self.allowed_weights.as_ref().is_none_or(|s| s.contains(&w))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtensionSolution {
    k: usize,
    points: Vec<u16>,
    counts: Vec<usize>,
    ones: Vec<usize>,
    m: usize,
    new_weights: Vec<usize>,
}

impl ExtensionSolution {
    /// Column counts `x_v` for `v = u + t * 2^k`, zero entries omitted.
    pub fn x(&self) -> BTreeMap<u32, usize> {
        let mut x = BTreeMap::new();
        let top = 1u32 << self.k;
        for ((&u, &c), &y) in self.points.iter().zip(&self.counts).zip(&self.ones) {
            if c > y {
                x.insert(u as u32, c - y);
            }
            if y > 0 {
                x.insert(u as u32 | top, y);
            }
        }
        if self.m > 0 {
            x.insert(top, self.m);
        }
        x
    }

    /// Slack `y_h = (wt(h) - a*delta) / delta` for every nonzero functional `h`.
    pub fn y(&self, problem: &ExtensionProblem) -> BTreeMap<u32, usize> {
        let base = problem.a * problem.delta;
        let mut out = BTreeMap::new();
        let top = 1u32 << self.k;
        for g in 0..(1u32 << self.k) {
            if g != 0 {
                let w = self.parent_weight(g as u16);
                out.insert(g, (w - base) / problem.delta);
            }
            out.insert(g | top, (self.new_weights[g as usize] - base) / problem.delta);
        }
        out
    }

    fn parent_weight(&self, g: u16) -> usize {
        self.points.iter().zip(&self.counts).filter(|(&u, _)| (u & g).count_ones() % 2 == 1).map(|(_, &c)| c).sum()
    }

    /// Weights of the words `(g, 1)` outside the parent, indexed by `g`.
    pub fn new_weights(&self) -> &[usize] {
        &self.new_weights
    }

    /// Number of lifted copies of each distinct parent point, in increasing point order.
    pub fn lifted(&self) -> impl Iterator<Item = (u16, usize)> + '_ {
        self.points.iter().copied().zip(self.ones.iter().copied())
    }

    pub fn padding(&self) -> usize {
        self.m
    }
}

/// Depth-first enumerator over the feasible solutions of one problem.
pub struct Extensions {
    k: usize,
    m: usize,
    vars: Vec<Var>,
    points: Vec<u16>,
    counts: Vec<usize>,
    /// for variable i, bit g set iff g.u_i is odd (one bit per u64 lane)
    odd: Vec<Vec<u64>>,
    /// bounds on the sum of the unassigned y from level i on
    suf_lo: Vec<i64>,
    suf_hi: Vec<i64>,
    /// the same, restricted to the variables odd under g
    odd_lo: Vec<Vec<i64>>,
    odd_hi: Vec<Vec<i64>>,
    next_allowed: Vec<i64>,
    /// admissible weights of the word (0, 1), tried in turn
    targets: Vec<i64>,
    target: usize,
    /// per level, masks (over variable indices) of point sets whose y must
    /// sum to an even number and whose last variable sits at that level
    parity_masks: Vec<Vec<Vec<u64>>>,
    /// y mod 2 of the assigned variables
    parity_bits: Vec<u64>,
    cur: Vec<i64>,
    pos: Vec<usize>,
    value: Vec<usize>,
    level: usize,
    state: State,
}

#[derive(Clone, Debug)]
struct Var {
    point: u16,
    /// admissible values of y_u, in descending order
    domain: Vec<usize>,
    slot: usize,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum State {
    Fresh,
    Emitted,
    Done,
}

fn is_odd(lanes: &[u64], g: usize) -> bool {
    (lanes[g >> 6] >> (g & 63)) & 1 == 1
}

/// Point sets on which the lifted copies must have even total.
///
/// With every weight divisible by 4, the sum of y over the points odd under
/// a functional g is even; with every weight divisible by 8 it is 0 mod 4, so
/// the sum over the points odd under both g and g' is even as well.
fn parity_masks(vars: &[Var], k: usize, modulus: usize) -> Vec<Vec<Vec<u64>>> {
    let nv = vars.len();
    let mut per_level: Vec<BTreeSet<Vec<u64>>> = vec![BTreeSet::new(); nv];
    if modulus == 0 || !modulus.is_multiple_of(4) || nv == 0 {
        return vec![Vec::new(); nv];
    }
    let lanes = nv.div_ceil(64);
    let half: Vec<Vec<u64>> = (1..1usize << k)
        .map(|g| {
            let mut m = vec![0u64; lanes];
            for (i, v) in vars.iter().enumerate() {
                if (v.point as usize & g).count_ones() % 2 == 1 {
                    m[i >> 6] |= 1 << (i & 63);
                }
            }
            m
        })
        .collect();
    let mut sets: Vec<Vec<u64>> = half.clone();
    if modulus.is_multiple_of(8) && k <= 8 {
        for (a, ha) in half.iter().enumerate() {
            for hb in &half[a + 1..] {
                sets.push(ha.iter().zip(hb).map(|(x, y)| x & y).collect());
            }
        }
    }
    for m in sets {
        if let Some(l) = (0..lanes).rev().find(|&l| m[l] != 0) {
            let last = l * 64 + 63 - m[l].leading_zeros() as usize;
            per_level[last].insert(m);
        }
    }
    per_level.into_iter().map(|s| s.into_iter().collect()).collect()
}

pub fn enumerate_extensions(problem: &ExtensionProblem) -> Result<Extensions> {
    let parent = &problem.parent;
    let k = parent.k();
    if problem.delta == 0 || problem.a > problem.b {
        return Err(Error::invalid("weight window is empty"));
    }
    let n = parent.effective_length();
    if problem.n_child <= n {
        return Err(Error::invalid(format!("child length {} must exceed parent length {n}", problem.n_child)));
    }
    let m = problem.n_child - n;
    let mult = parent.column_multiplicities(m);
    for i in 0..k {
        if mult.get(1 << i) == 0 {
            return Err(Error::invalid("parent is not in systematic form"));
        }
    }
    let pw = parent.weight_enumerator();
    for (w, _) in pw.terms() {
        if w > 0 && !problem.allows(w) {
            return Err(Error::invalid(format!("parent has weight {w} outside the window")));
        }
    }

    let all_allowed: Vec<usize> = (1..=problem.n_child).filter(|&w| problem.allows(w)).collect();
    let modulus = all_allowed.iter().fold(0, |g, &w| num_integer::gcd(g, w));

    let (points, counts): (Vec<u16>, Vec<usize>) = mult.points().unzip();
    // Decreasing point order: once every point with top bit >= j is assigned,
    // the remaining points lie in span(e_0..e_{j-1}), so each functional built
    // from bits >= j has its weight fixed and the window check becomes exact.
    // Unit e_j closes its group, after every other point with bit j set.
    let order: Vec<usize> = (0..points.len()).rev().collect();
    let vars: Vec<Var> = order
        .iter()
        .map(|&i| {
            let (u, c) = (points[i], counts[i]);
            let unit = u.count_ones() == 1;
            let hi = if unit { c - 1 } else { c };
            let domain = (0..=hi)
                .rev()
                .filter(|&y| !problem.min_multiplicity || ((y == 0 || y >= m) && (c - y == 0 || c - y >= m)))
                .collect();
            Var { point: u, domain, slot: i }
        })
        .collect();

    let size = 1usize << k;
    let lanes = size.div_ceil(64);
    let odd: Vec<Vec<u64>> = vars
        .iter()
        .map(|v| {
            let mut bits = vec![0u64; lanes];
            for g in 0..size {
                if (v.point as usize & g).count_ones() % 2 == 1 {
                    bits[g >> 6] |= 1 << (g & 63);
                }
            }
            bits
        })
        .collect();

    let nv = vars.len();
    let mut suf_lo = vec![0i64; nv + 1];
    let mut suf_hi = vec![0i64; nv + 1];
    let mut odd_lo = vec![vec![0i64; size]; nv + 1];
    let mut odd_hi = vec![vec![0i64; size]; nv + 1];
    for i in (0..nv).rev() {
        let lo = *vars[i].domain.last().unwrap_or(&0) as i64;
        let hi = *vars[i].domain.first().unwrap_or(&0) as i64;
        suf_lo[i] = suf_lo[i + 1] + lo;
        suf_hi[i] = suf_hi[i + 1] + hi;
        for g in 0..size {
            let odd_g = is_odd(&odd[i], g) as i64;
            odd_lo[i][g] = odd_lo[i + 1][g] + odd_g * lo;
            odd_hi[i][g] = odd_hi[i + 1][g] + odd_g * hi;
        }
    }

    let cap = problem.n_child + 1;
    let mut next_allowed = vec![i64::MAX; cap + 1];
    for w in (0..cap).rev() {
        next_allowed[w] = if problem.allows(w) && w > 0 { w as i64 } else { next_allowed[w + 1] };
    }

    let mut cur = vec![m as i64; size];
    for (g, slot) in cur.iter_mut().enumerate() {
        for (&u, &c) in points.iter().zip(&counts) {
            if (u as usize & g).count_ones() % 2 == 1 {
                *slot += c as i64;
            }
        }
    }

    let targets: Vec<i64> =
        (m as i64 + suf_lo[0]..=m as i64 + suf_hi[0]).filter(|&w| problem.allows(w as usize)).collect();
    let masks = parity_masks(&vars, k, modulus);
    let empty = targets.is_empty() || vars.iter().any(|v| v.domain.is_empty());
    Ok(Extensions {
        k,
        m,
        pos: vec![0; nv + 1],
        value: vec![0; nv],
        vars,
        points,
        counts,
        odd,
        suf_lo,
        suf_hi,
        odd_lo,
        odd_hi,
        next_allowed,
        targets,
        target: 0,
        parity_masks: masks,
        parity_bits: vec![0; nv.div_ceil(64).max(1)],
        cur,
        level: 0,
        state: if empty { State::Done } else { State::Fresh },
    })
}

impl Extensions {
    fn feasible(&self, level: usize) -> bool {
        // with wt(0,1) fixed, the unassigned y sum to `rest`; of that, `o` falls
        // on the points odd under g and wt(g,1) ends at cur[g] + rest - 2o
        let rest = self.targets[self.target] - self.cur[0];
        if rest < self.suf_lo[level] || rest > self.suf_hi[level] {
            return false;
        }
        let (olo, ohi) = (&self.odd_lo[level], &self.odd_hi[level]);
        let (tlo, thi) = (self.suf_lo[level], self.suf_hi[level]);
        let cap = self.next_allowed.len() as i64 - 1;
        for g in 1..self.cur.len() {
            let omin = olo[g].max(rest - (thi - ohi[g]));
            let omax = ohi[g].min(rest - (tlo - olo[g]));
            if omin > omax {
                return false;
            }
            let base = self.cur[g] + rest;
            let lo = (base - 2 * omax).max(0);
            let hi = base - 2 * omin;
            if lo > cap {
                return false;
            }
            let w = self.next_allowed[lo as usize];
            if w > hi {
                return false;
            }
            // every reachable weight has the parity of `base`
            if (w - base) % 2 != 0 {
                let mut w = w;
                while w <= hi && (w - base) % 2 != 0 {
                    w = if w + 1 > cap { i64::MAX } else { self.next_allowed[(w + 1) as usize] };
                }
                if w > hi {
                    return false;
                }
            }
        }
        true
    }

    /// Parity that y_i must take, or `Some(2)` if the constraints ending at i disagree.
    fn forced_parity(&self, i: usize) -> Option<usize> {
        let mut forced = None;
        for mask in &self.parity_masks[i] {
            let p = mask.iter().zip(&self.parity_bits).map(|(a, b)| (a & b).count_ones()).sum::<u32>() as usize % 2;
            match forced {
                None => forced = Some(p),
                Some(q) if q != p => return Some(2),
                _ => {}
            }
        }
        forced
    }

    fn apply(&mut self, i: usize, y: usize, sign: i64) {
        let d = y as i64 * sign;
        let odd = &self.odd[i];
        for (g, c) in self.cur.iter_mut().enumerate() {
            if is_odd(odd, g) {
                *c -= d;
            } else {
                *c += d;
            }
        }
        if y % 2 == 1 {
            self.parity_bits[i >> 6] ^= 1 << (i & 63);
        }
    }

    fn emit(&self) -> ExtensionSolution {
        let mut ones = vec![0usize; self.points.len()];
        for (v, &y) in self.vars.iter().zip(&self.value) {
            ones[v.slot] = y;
        }
        ExtensionSolution {
            k: self.k,
            points: self.points.clone(),
            counts: self.counts.clone(),
            ones,
            m: self.m,
            new_weights: self.cur.iter().map(|&w| w as usize).collect(),
        }
    }
}

impl Iterator for Extensions {
    type Item = ExtensionSolution;

    fn next(&mut self) -> Option<ExtensionSolution> {
        loop {
            if self.state == State::Done {
                return None;
            }
            if let Some(sol) = self.search() {
                return Some(sol);
            }
            self.target += 1;
            if self.target < self.targets.len() {
                self.state = State::Fresh;
            }
        }
    }
}

impl Extensions {
    /// Next solution for the current target; sets `Done` once it is exhausted.
    fn search(&mut self) -> Option<ExtensionSolution> {
        let nv = self.vars.len();
        match self.state {
            State::Done => return None,
            State::Fresh => {
                self.state = State::Emitted;
                if !self.feasible(0) {
                    self.state = State::Done;
                    return None;
                }
                self.level = 0;
                self.pos[0] = 0;
                if nv == 0 {
                    self.state = State::Done;
                    return Some(self.emit());
                }
            }
            State::Emitted => {
                if nv == 0 {
                    self.state = State::Done;
                    return None;
                }
                self.level = nv - 1;
                self.apply(self.level, self.value[self.level], -1);
            }
        }
        loop {
            let i = self.level;
            let mut descended = false;
            let forced = self.forced_parity(i);
            if forced == Some(2) {
                self.pos[i] = self.vars[i].domain.len();
            }
            while self.pos[i] < self.vars[i].domain.len() {
                let y = self.vars[i].domain[self.pos[i]];
                self.pos[i] += 1;
                if forced.is_some_and(|b| y % 2 != b) {
                    continue;
                }
                self.apply(i, y, 1);
                if self.feasible(i + 1) {
                    self.value[i] = y;
                    descended = true;
                    break;
                }
                self.apply(i, y, -1);
            }
            if descended {
                if i + 1 == nv {
                    return Some(self.emit());
                }
                self.level = i + 1;
                self.pos[i + 1] = 0;
                continue;
            }
            if i == 0 {
                self.state = State::Done;
                return None;
            }
            self.level = i - 1;
            self.apply(self.level, self.value[self.level], -1);
        }
    }
}

/// Builds the child generator matrix: the parent rows over the parent's
/// nonzero columns, then `m` columns equal to the new unit vector.
pub fn realize(parent: &BinaryCode, sol: &ExtensionSolution) -> Result<BinaryCode> {
    let k = parent.k();
    let mult = parent.column_multiplicities(0);
    let (points, counts): (Vec<u16>, Vec<usize>) = mult.points().unzip();
    if sol.k != k || sol.points != points || sol.counts != counts {
        return Err(Error::invalid("solution does not belong to this parent"));
    }
    if sol.ones.iter().zip(&counts).any(|(y, c)| y > c) {
        return Err(Error::invalid("solution lifts more copies than the parent has"));
    }
    let mut seen = vec![0usize; 1 << k];
    let mut cols = Vec::with_capacity(parent.n() + sol.m);
    for c in parent.columns() {
        if c == 0 {
            continue;
        }
        let i = points.binary_search(&c).expect("column is a point");
        let t = seen[c as usize] >= counts[i] - sol.ones[i];
        seen[c as usize] += 1;
        cols.push(c | ((t as u16) << k));
    }
    cols.extend(std::iter::repeat_n(1u16 << k, sol.m));
    BinaryCode::from_columns(k + 1, &cols)
}

/// True iff every nonzero weight of `child` lies in `allowed`.
pub fn weight_filter(child: &BinaryCode, allowed: &BTreeSet<usize>) -> bool {
    child.weight_enumerator().terms().all(|(w, _)| w == 0 || allowed.contains(&w))
}
