//! Codes `K'` obtained from `K` by adjoining one word `c'` together with
//! `delta` new coordinates on which `c'` is one.
//!
//! For a nonzero `c` in `K` of weight `beta` meeting `c'` in `alpha` positions,
//! `wt(c + c') = gamma + beta - 2 alpha`. Requiring this to be 16 or to lie in
//! `[28, lambda]` gives the pair of rows
//!
//! ```text
//! R - (lambda/2 - 8) y_c <= alpha_c <= R - 6 y_c,      R = (gamma + beta)/2 - 8
//! ```
//!
//! with a selector `y_c` that is 0 exactly when the weight is 16. The rows do
//! not see weights modulo 4, so every solution is checked against the full
//! coset before it is accepted.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::time::{Duration, Instant};

use crate::gf2core::{echelon, orthogonal_complement, reduce};
use crate::{BinaryCode, Error, Result, WeightEnumerator};

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Constraint {
    pub terms: Vec<(usize, i64)>,
    pub lo: i64,
    pub hi: i64,
}

impl Constraint {
    pub fn new(terms: Vec<(usize, i64)>, lo: i64, hi: i64) -> Self {
        Constraint { terms, lo, hi }
    }

    pub fn at_most(terms: Vec<(usize, i64)>, hi: i64) -> Self {
        Constraint { terms, lo: i64::MIN, hi }
    }

    pub fn equal(terms: Vec<(usize, i64)>, rhs: i64) -> Self {
        Constraint { terms, lo: rhs, hi: rhs }
    }

    pub fn value(&self, assignment: &[u8]) -> i64 {
        self.terms.iter().map(|&(v, a)| a * assignment[v] as i64).sum()
    }

    pub fn holds(&self, assignment: &[u8]) -> bool {
        let s = self.value(assignment);
        self.lo <= s && s <= self.hi
    }
}

/// Ones of `mask` as unit-coefficient terms over the `x` variables.
pub fn support_terms(mask: u128) -> Vec<(usize, i64)> {
    let mut t = Vec::with_capacity(mask.count_ones() as usize);
    let mut m = mask;
    while m != 0 {
        t.push((m.trailing_zeros() as usize, 1));
        m &= m - 1;
    }
    t
}

#[derive(Clone, Debug)]
pub struct IlpInstance {
    /// Number of `x` variables; variable `i < n` is `x_{i+1}`.
    pub n: usize,
    pub gamma: usize,
    pub lambda: usize,
    pub delta: usize,
    /// The nonzero codeword behind each `y` variable; `y_j` is variable `n + j`.
    pub codewords: Vec<u128>,
    /// 0-based coordinate quads behind the `z` variables, which follow the `y` variables.
    pub quads: Vec<[usize; 4]>,
    pub constraints: Vec<Constraint>,
    /// Parity rows over the `x` variables: the ones of the mask sum to the given parity.
    pub parities: Vec<(u128, bool)>,
    pub objective: Option<Vec<(usize, i64)>>,
}

impl IlpInstance {
    pub fn num_vars(&self) -> usize {
        self.n + self.codewords.len() + self.quads.len()
    }

    pub fn y_var(&self, j: usize) -> usize {
        self.n + j
    }

    pub fn z_var(&self, t: usize) -> usize {
        self.n + self.codewords.len() + t
    }

    /// Index of the `y` variable of codeword `c`, if `c` is a nonzero codeword.
    pub fn y_of(&self, c: u128) -> Option<usize> {
        self.codewords.iter().position(|&w| w == c).map(|j| self.y_var(j))
    }

    pub fn add_constraint(&mut self, c: Constraint) -> Result<()> {
        if let Some(&(v, _)) = c.terms.iter().find(|&&(v, _)| v >= self.num_vars()) {
            return Err(Error::invalid(format!("constraint refers to undeclared variable {v}")));
        }
        self.constraints.push(c);
        Ok(())
    }

    /// `sum_{i in T} x_i + 2 z_T = 2` for every quad `T`.
    pub fn add_quad_cuts(&mut self, quads: &[[usize; 4]]) -> Result<()> {
        if quads.iter().flatten().any(|&i| i >= self.n) {
            return Err(Error::invalid("quad outside the coordinates of the code"));
        }
        for q in quads {
            self.quads.push(*q);
            let z = self.z_var(self.quads.len() - 1);
            let mut terms: Vec<(usize, i64)> = q.iter().map(|&i| (i, 1)).collect();
            terms.push((z, 2));
            self.constraints.push(Constraint::equal(terms, 2));
        }
        Ok(())
    }

    /// `x` meets every quad an even number of times, without the bound of [`Self::add_quad_cuts`].
    pub fn add_quad_parity_cuts(&mut self, quads: &[[usize; 4]]) -> Result<()> {
        if quads.iter().flatten().any(|&i| i >= self.n) {
            return Err(Error::invalid("quad outside the coordinates of the code"));
        }
        for q in quads {
            self.parities.push((q.iter().fold(0u128, |m, &i| m | 1u128 << i), false));
        }
        Ok(())
    }

    /// `sum_{i in E} x_i <= bound` over the ones of `mask`.
    pub fn add_cover_cut(&mut self, mask: u128, bound: i64) -> Result<()> {
        if mask >> self.n != 0 {
            return Err(Error::invalid("cover set outside the coordinates of the code"));
        }
        self.add_constraint(Constraint::at_most(support_terms(mask), bound))
    }

    /// `x` meets every word of `code` evenly, as it must for `K'` to be 4-divisible.
    pub fn add_parity_cuts(&mut self, code: &BinaryCode) -> Result<()> {
        if code.n() > self.n {
            return Err(Error::invalid("parity code is longer than the instance"));
        }
        for r in echelon(code.rows()) {
            self.parities.push((r, false));
        }
        Ok(())
    }

    pub fn set_objective(&mut self, terms: Vec<(usize, i64)>) {
        self.objective = Some(terms);
    }

    /// The `x` part of an assignment as a word over the code's coordinates.
    pub fn x_word(&self, assignment: &[u8]) -> u128 {
        (0..self.n).filter(|&i| assignment[i] == 1).fold(0u128, |m, i| m | 1u128 << i)
    }

    pub fn is_satisfied(&self, assignment: &[u8]) -> bool {
        assignment.len() == self.num_vars()
            && assignment.iter().all(|&v| v <= 1)
            && self.constraints.iter().all(|c| c.holds(assignment))
            && self.parities.iter().all(|&(m, odd)| (self.x_word(assignment) & m).count_ones() % 2 == odd as u32)
    }

    /// Completes an `x` word to a full assignment by propagation, if it is feasible.
    pub fn complete(&self, x: u128) -> Option<Vec<u8>> {
        let mut s = Solver::new(self).ok()?;
        for i in 0..self.n {
            if !s.assign(i, ((x >> i) & 1) as u8) {
                return None;
            }
        }
        if !s.propagate() {
            return None;
        }
        // anything left open is unconstrained by x; take the first consistent value
        while let Some(v) = s.val.iter().position(|&b| b < 0) {
            let mark = s.trail.len();
            if s.assign(v, 0) && s.propagate() {
                continue;
            }
            s.undo(mark);
            if !(s.assign(v, 1) && s.propagate()) {
                return None;
            }
        }
        let a: Vec<u8> = s.val.iter().map(|&b| b as u8).collect();
        self.is_satisfied(&a).then_some(a)
    }
}

/// The feasibility program for adjoining a word of weight `gamma` with
/// `delta` new coordinates to `code`.
///
/// `forced_y` pins selectors of individual codewords; `extra` rows may refer
/// to the `x` and `y` variables.
pub fn build_ilp(
    code: &BinaryCode,
    gamma: usize,
    lambda: usize,
    delta: usize,
    forced_y: &[(u128, bool)],
    extra: &[Constraint],
) -> Result<IlpInstance> {
    if gamma < 16 {
        return Err(Error::invalid(format!("gamma {gamma} is below the minimum weight 16")));
    }
    if !gamma.is_multiple_of(4) {
        return Err(Error::invalid(format!("gamma {gamma} is not a multiple of 4")));
    }
    if delta == 0 || delta >= gamma {
        return Err(Error::invalid(format!("delta must lie in 1..gamma, got {delta}")));
    }
    if !lambda.is_multiple_of(2) || lambda < 16 {
        return Err(Error::invalid(format!("lambda must be even and at least 16, got {lambda}")));
    }
    if gamma - delta > code.n() {
        return Err(Error::invalid("gamma - delta exceeds the length of the code"));
    }
    let n = code.n();
    let mut codewords: Vec<u128> = code.codewords().into_iter().filter(|&c| c != 0).collect();
    codewords.sort_unstable();
    let mut inst = IlpInstance {
        n,
        gamma,
        lambda,
        delta,
        codewords,
        quads: Vec::new(),
        constraints: Vec::new(),
        parities: Vec::new(),
        objective: Some((0..n).map(|i| (i, i as i64 + 1)).collect()),
    };
    inst.constraints.push(Constraint::equal(support_terms(mask(n)), (gamma - delta) as i64));
    let width = lambda as i64 / 2 - 8;
    for (j, &c) in inst.codewords.iter().enumerate() {
        let beta = c.count_ones() as usize;
        if !(gamma + beta).is_multiple_of(2) {
            return Err(Error::invalid("codeword weights must be even"));
        }
        let r = ((gamma + beta) / 2) as i64 - 8;
        let y = n + j;
        let mut upper = support_terms(c);
        upper.push((y, 6));
        let mut lower = support_terms(c);
        lower.push((y, width));
        inst.constraints.push(Constraint::at_most(upper, r));
        inst.constraints.push(Constraint::new(lower, r, i64::MAX));
    }
    for &(c, one) in forced_y {
        let y = inst.y_of(c).ok_or_else(|| Error::invalid("forced selector for a word outside the code"))?;
        inst.constraints.push(Constraint::equal(vec![(y, 1)], one as i64));
    }
    for c in extra {
        inst.add_constraint(c.clone())?;
    }
    Ok(inst)
}

fn mask(n: usize) -> u128 {
    if n == 128 {
        u128::MAX
    } else {
        (1u128 << n) - 1
    }
}

/// Selectors forced to one for every codeword whose weight is listed.
pub fn force_by_weight(code: &BinaryCode, weights: &[usize]) -> Vec<(u128, bool)> {
    code.codewords()
        .into_iter()
        .filter(|&c| c != 0 && weights.contains(&(c.count_ones() as usize)))
        .map(|c| (c, true))
        .collect()
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum SolveOutcome {
    Feasible(Vec<u8>),
    Infeasible,
    Timeout,
}

impl SolveOutcome {
    pub fn is_feasible(&self) -> bool {
        matches!(self, SolveOutcome::Feasible(_))
    }
}

impl fmt::Display for SolveOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SolveOutcome::Feasible(_) => f.write_str("feasible"),
            SolveOutcome::Infeasible => f.write_str("infeasible"),
            SolveOutcome::Timeout => f.write_str("timeout"),
        }
    }
}

pub fn solve(inst: &IlpInstance, budget: Duration) -> SolveOutcome {
    solve_with(inst, budget, |_| true)
}

/// Depth-first search that hands every complete assignment to `accept`
/// and keeps going while it returns false.
pub fn solve_with(inst: &IlpInstance, budget: Duration, mut accept: impl FnMut(&[u8]) -> bool) -> SolveOutcome {
    let mut s = match Solver::new(inst) {
        Ok(s) => s,
        Err(()) => return SolveOutcome::Infeasible,
    };
    let deadline = Instant::now() + budget;
    if !s.propagate() {
        return SolveOutcome::Infeasible;
    }
    // each frame: (trail mark, variable, next value to try or 2 when exhausted)
    let mut stack: Vec<(usize, usize, u8)> = Vec::new();
    let mut nodes = 0u64;
    loop {
        nodes += 1;
        if nodes.is_multiple_of(256) && Instant::now() > deadline {
            return SolveOutcome::Timeout;
        }
        match s.pick() {
            None => {
                let a: Vec<u8> = s.val.iter().map(|&b| b as u8).collect();
                if accept(&a) {
                    return SolveOutcome::Feasible(a);
                }
            }
            Some(v) => {
                stack.push((s.trail.len(), v, 1));
            }
        }
        // advance to the next untried branch
        loop {
            let Some(top) = stack.last_mut() else { return SolveOutcome::Infeasible };
            let (mark, v, next) = *top;
            if next > 1 {
                s.undo(mark);
                stack.pop();
                continue;
            }
            s.undo(mark);
            top.2 = if next == 1 { 0 } else { 2 };
            nodes += 1;
            if nodes.is_multiple_of(256) && Instant::now() > deadline {
                return SolveOutcome::Timeout;
            }
            if s.assign(v, next) && s.propagate() {
                break;
            }
        }
    }
}

struct Solver {
    nx: usize,
    cons: Vec<Constraint>,
    occ: Vec<Vec<(u32, i64)>>,
    minact: Vec<i64>,
    maxact: Vec<i64>,
    val: Vec<i8>,
    trail: Vec<usize>,
    queue: Vec<u32>,
    queued: Vec<bool>,
    conflict: bool,
    xors: Vec<Xor>,
    xocc: Vec<Vec<u32>>,
    xqueue: Vec<u32>,
    /// `x` columns outside the pivots of the parity system; fixing them fixes every `x`.
    free_x: Vec<usize>,
}

/// Gauss-Jordan on affine parity rows, pivoting on the highest bit. `Err` when inconsistent.
fn reduce_parities(rows: Vec<(u128, bool)>) -> std::result::Result<Vec<(u128, bool)>, ()> {
    let mut basis: Vec<(u128, bool)> = Vec::new();
    for (mut m, mut odd) in rows {
        for &(b, bo) in &basis {
            if m >> (127 - b.leading_zeros()) & 1 == 1 {
                m ^= b;
                odd ^= bo;
            }
        }
        if m == 0 {
            if odd {
                return Err(());
            }
            continue;
        }
        let lead = 127 - m.leading_zeros();
        for (b, bo) in basis.iter_mut() {
            if *b >> lead & 1 == 1 {
                *b ^= m;
                *bo ^= odd;
            }
        }
        basis.push((m, odd));
    }
    Ok(basis)
}

struct Xor {
    vars: Vec<usize>,
    rhs: u8,
    free: usize,
    par: u8,
}

impl Solver {
    fn new(inst: &IlpInstance) -> std::result::Result<Self, ()> {
        // merge rows with identical left sides
        let mut merged: HashMap<Vec<(usize, i64)>, (i64, i64)> = HashMap::new();
        let mut order = Vec::new();
        for c in &inst.constraints {
            let mut t = c.terms.clone();
            t.sort_unstable();
            let mut dedup: Vec<(usize, i64)> = Vec::with_capacity(t.len());
            for (v, a) in t {
                match dedup.last_mut() {
                    Some(last) if last.0 == v => last.1 += a,
                    _ => dedup.push((v, a)),
                }
            }
            dedup.retain(|&(_, a)| a != 0);
            match merged.get_mut(&dedup) {
                Some(r) => {
                    r.0 = r.0.max(c.lo);
                    r.1 = r.1.min(c.hi);
                }
                None => {
                    order.push(dedup.clone());
                    merged.insert(dedup, (c.lo, c.hi));
                }
            }
        }
        let nv = inst.num_vars();
        let mut cons = Vec::with_capacity(order.len());
        for t in order {
            let (lo, hi) = merged[&t];
            if lo > hi {
                return Err(());
            }
            cons.push(Constraint::new(t, lo, hi));
        }
        let mut occ = vec![Vec::new(); nv];
        let mut minact = Vec::with_capacity(cons.len());
        let mut maxact = Vec::with_capacity(cons.len());
        for (ci, c) in cons.iter().enumerate() {
            for &(v, a) in &c.terms {
                occ[v].push((ci as u32, a));
            }
            minact.push(c.terms.iter().map(|&(_, a)| a.min(0)).sum());
            maxact.push(c.terms.iter().map(|&(_, a)| a.max(0)).sum());
        }
        let nc = cons.len();
        let mut rows: Vec<(u128, bool)> = inst.parities.clone();
        // an equality whose odd coefficients all sit on x variables fixes their parity
        for c in &cons {
            if c.lo == c.hi && c.terms.iter().all(|&(v, a)| a % 2 == 0 || v < inst.n) {
                let m = c.terms.iter().filter(|&&(_, a)| a % 2 != 0).fold(0u128, |m, &(v, _)| m | 1u128 << v);
                if m != 0 {
                    rows.push((m, c.lo.rem_euclid(2) == 1));
                }
            }
        }
        if rows.iter().any(|&(m, _)| inst.n < 128 && m >> inst.n != 0) {
            return Err(());
        }
        let rows = reduce_parities(rows)?;
        let mut free_x = Vec::new();
        if !rows.is_empty() {
            let pivots = rows.iter().fold(0u128, |p, &(m, _)| p | 1u128 << (127 - m.leading_zeros()));
            free_x = (0..inst.n).filter(|&i| pivots >> i & 1 == 0).collect();
            if free_x.len() > 24 {
                free_x.clear();
            }
        }
        let mut xors = Vec::new();
        let mut xocc = vec![Vec::new(); nv];
        for (m, odd) in rows {
            let vars: Vec<usize> = support_terms(m).into_iter().map(|(v, _)| v).collect();
            for &v in &vars {
                xocc[v].push(xors.len() as u32);
            }
            xors.push(Xor { free: vars.len(), vars, rhs: odd as u8, par: 0 });
        }
        let xqueue = (0..xors.len() as u32).collect();
        Ok(Solver {
            nx: inst.n,
            cons,
            occ,
            minact,
            maxact,
            val: vec![-1; nv],
            trail: Vec::new(),
            queue: (0..nc as u32).collect(),
            queued: vec![true; nc],
            conflict: false,
            xors,
            xocc,
            xqueue,
            free_x,
        })
    }

    fn assign(&mut self, v: usize, b: u8) -> bool {
        if self.val[v] >= 0 {
            return self.val[v] == b as i8;
        }
        self.val[v] = b as i8;
        self.trail.push(v);
        for &(c, a) in &self.occ[v] {
            let c = c as usize;
            match (b, a > 0) {
                (1, true) => self.minact[c] += a,
                (1, false) => self.maxact[c] += a,
                (_, true) => self.maxact[c] -= a,
                (_, false) => self.minact[c] -= a,
            }
            if self.minact[c] > self.cons[c].hi || self.maxact[c] < self.cons[c].lo {
                self.conflict = true;
            }
            if !self.queued[c] {
                self.queued[c] = true;
                self.queue.push(c as u32);
            }
        }
        for &x in &self.xocc[v] {
            let e = &mut self.xors[x as usize];
            e.free -= 1;
            e.par ^= b;
            if e.free == 0 && e.par != e.rhs {
                self.conflict = true;
            } else if e.free == 1 {
                self.xqueue.push(x);
            }
        }
        !self.conflict
    }

    fn undo(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let v = self.trail.pop().expect("trail above mark");
            let b = self.val[v];
            self.val[v] = -1;
            for &(c, a) in &self.occ[v] {
                let c = c as usize;
                match (b, a > 0) {
                    (1, true) => self.minact[c] -= a,
                    (1, false) => self.maxact[c] -= a,
                    (_, true) => self.maxact[c] += a,
                    (_, false) => self.minact[c] += a,
                }
            }
            for &x in &self.xocc[v] {
                let e = &mut self.xors[x as usize];
                e.free += 1;
                e.par ^= b as u8;
            }
        }
        self.xqueue.clear();
        for &c in &self.queue {
            self.queued[c as usize] = false;
        }
        self.queue.clear();
        self.conflict = false;
    }

    fn propagate(&mut self) -> bool {
        loop {
            if self.conflict {
                return false;
            }
            if let Some(x) = self.xqueue.pop() {
                let e = &self.xors[x as usize];
                if e.free == 1 {
                    let v = *e.vars.iter().find(|&&v| self.val[v] < 0).expect("one free variable");
                    let b = e.rhs ^ e.par;
                    if !self.assign(v, b) {
                        return false;
                    }
                }
                continue;
            }
            let Some(c) = self.queue.pop() else { break };
            let c = c as usize;
            self.queued[c] = false;
            if self.conflict {
                return false;
            }
            let (lo, hi) = (self.cons[c].lo, self.cons[c].hi);
            let (mn, mx) = (self.minact[c], self.maxact[c]);
            if mn > hi || mx < lo {
                self.conflict = true;
                return false;
            }
            for t in 0..self.cons[c].terms.len() {
                let (v, a) = self.cons[c].terms[t];
                if self.val[v] >= 0 {
                    continue;
                }
                let (mn, mx) = (self.minact[c], self.maxact[c]);
                let forced = if a > 0 {
                    if mn + a > hi {
                        Some(0)
                    } else if mx - a < lo {
                        Some(1)
                    } else {
                        None
                    }
                } else if mn - a > hi {
                    Some(1)
                } else if mx + a < lo {
                    Some(0)
                } else {
                    None
                };
                if let Some(b) = forced {
                    if !self.assign(v, b) {
                        return false;
                    }
                }
            }
        }
        !self.conflict
    }

    /// Free parity columns first, then an unfixed `x` of the tightest open row, then anything unfixed.
    fn pick(&self) -> Option<usize> {
        if let Some(&v) = self.free_x.iter().find(|&&v| self.val[v] < 0) {
            return Some(v);
        }
        let mut best: Option<(i64, usize)> = None;
        for (ci, c) in self.cons.iter().enumerate() {
            let (mn, mx) = (self.minact[ci], self.maxact[ci]);
            if mn >= c.lo && mx <= c.hi {
                continue;
            }
            let slack = (c.hi.saturating_sub(mn)).min(mx.saturating_sub(c.lo));
            if best.is_some_and(|(s, _)| s <= slack) {
                continue;
            }
            if let Some(&(v, _)) = c.terms.iter().find(|&&(v, _)| v < self.nx && self.val[v] < 0) {
                best = Some((slack, v));
            }
        }
        best.map(|(_, v)| v).or_else(|| self.val.iter().position(|&b| b < 0))
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ExtensionVerdict {
    /// Enumerator of the coset `K' \ K`.
    pub enumerator: WeightEnumerator,
    pub min_weight_ok: bool,
    pub divisible_by_4: bool,
    pub avoids_20_24: bool,
    pub max_weight: usize,
}

impl ExtensionVerdict {
    pub fn passes(&self) -> bool {
        self.min_weight_ok && self.divisible_by_4 && self.avoids_20_24
    }

    pub fn passes_with_cap(&self, lambda: usize) -> bool {
        self.passes() && self.max_weight <= lambda
    }
}

impl fmt::Display for ExtensionVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let yn = |b: bool| if b { "yes" } else { "no" };
        writeln!(f, "W(z)={}", self.enumerator)?;
        writeln!(f, "min weight >= 16: {}", yn(self.min_weight_ok))?;
        writeln!(f, "4-divisible: {}", yn(self.divisible_by_4))?;
        writeln!(f, "no weight 20 or 24: {}", yn(self.avoids_20_24))?;
        write!(f, "max weight: {}", self.max_weight)
    }
}

fn check_row(code: &BinaryCode, row: u128, delta: usize) -> Result<()> {
    let total = code.n() + delta;
    if delta == 0 || total > 128 {
        return Err(Error::invalid(format!("cannot extend length {} by {delta}", code.n())));
    }
    if row >> total != 0 {
        return Err(Error::invalid(format!("row has entries beyond length {total}")));
    }
    let tail = mask(total) & !mask(code.n());
    if row & tail != tail {
        return Err(Error::invalid("the last delta entries of the row must be one"));
    }
    Ok(())
}

/// The code spanned by `code` (padded with `delta` zero columns) and `row`.
pub fn extended_code(code: &BinaryCode, row: u128, delta: usize) -> Result<BinaryCode> {
    check_row(code, row, delta)?;
    let mut rows = code.rows().to_vec();
    rows.push(row);
    BinaryCode::new(code.n() + delta, rows)
}

pub fn verify_extension_row(code: &BinaryCode, row: u128, delta: usize) -> Result<ExtensionVerdict> {
    check_row(code, row, delta)?;
    let total = code.n() + delta;
    let mut coeffs = vec![0u64; total + 1];
    code.for_each_codeword(|c| coeffs[(c ^ row).count_ones() as usize] += 1);
    let enumerator = WeightEnumerator::from_coeffs(coeffs);
    let weights: Vec<usize> = enumerator.terms().map(|(w, _)| w).collect();
    Ok(ExtensionVerdict {
        min_weight_ok: weights.iter().all(|&w| w >= 16),
        divisible_by_4: weights.iter().all(|&w| w % 4 == 0),
        avoids_20_24: weights.iter().all(|&w| w != 20 && w != 24),
        max_weight: weights.last().copied().unwrap_or(0),
        enumerator,
    })
}

/// A solver assignment as a row over `n + delta` coordinates.
pub fn row_from_assignment(inst: &IlpInstance, assignment: &[u8]) -> u128 {
    inst.x_word(assignment) | (mask(inst.n + inst.delta) & !mask(inst.n))
}

/// Coordinate quads (0-based, increasing) whose columns sum to zero.
pub fn dual_quads(code: &BinaryCode) -> Vec<[usize; 4]> {
    let cols = code.columns();
    let n = cols.len();
    let mut by_sum: BTreeMap<u16, Vec<(usize, usize)>> = BTreeMap::new();
    for i in 0..n {
        for j in i + 1..n {
            by_sum.entry(cols[i] ^ cols[j]).or_default().push((i, j));
        }
    }
    let mut out: BTreeSet<[usize; 4]> = BTreeSet::new();
    for pairs in by_sum.values() {
        for (a, &(i, j)) in pairs.iter().enumerate() {
            for &(p, q) in &pairs[a + 1..] {
                // each quad splits into pairs in three ways; keep the split with i smallest paired to j
                if i < p && i != q && j != p && j != q {
                    let mut t = [i, j, p, q];
                    t.sort_unstable();
                    out.insert(t);
                }
            }
        }
    }
    out.into_iter().collect()
}

/// `K'` built from the span of the weight-4 dual words, as for the
/// [65,12] code with 325 such words.
pub fn kprime_via_parity(code: &BinaryCode) -> Result<BinaryCode> {
    let n = code.n();
    if n >= 128 {
        return Err(Error::Length(n + 1));
    }
    let quads: Vec<u128> = dual_quads(code).iter().map(|q| q.iter().fold(0u128, |m, &i| m | 1u128 << i)).collect();
    let dperp = orthogonal_complement(n, &quads);
    let kbasis = echelon(code.rows());
    if code.rows().iter().any(|&r| reduce(&echelon(&dperp), r) != 0) {
        return Err(Error::invalid("the code is not contained in the dual of its weight-4 dual words"));
    }
    // complement of K inside D^perp
    let mut extra = Vec::new();
    let mut span = kbasis.clone();
    for &v in &dperp {
        if reduce(&echelon(&span), v) != 0 {
            extra.push(v);
            span.push(v);
        }
    }
    let mut candidates = Vec::new();
    for sel in 1u32..(1 << extra.len()) {
        let v = extra.iter().enumerate().filter(|(i, _)| (sel >> i) & 1 == 1).fold(0u128, |a, (_, &b)| a ^ b);
        let mut ok = true;
        code.for_each_codeword(|c| ok &= matches!((c ^ v).count_ones() % 4, 0 | 3));
        if ok {
            candidates.push(v);
        }
    }
    if candidates.len() != 1 {
        return Err(Error::invalid(format!(
            "expected one intermediate code with weights 0 or 3 mod 4, found {}",
            candidates.len()
        )));
    }
    let parity = |w: u128| ((w.count_ones() % 2) as u128) << n;
    let mut rows: Vec<u128> = code.rows().iter().map(|&r| r | parity(r)).collect();
    rows.push(candidates[0] | parity(candidates[0]));
    BinaryCode::new(n + 1, rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> BinaryCode {
        BinaryCode::new(24, vec![(1u128 << 24) - 1]).unwrap()
    }

    #[test]
    fn parameter_errors() {
        let k = small();
        assert!(build_ilp(&k, 12, 44, 1, &[], &[]).is_err());
        assert!(build_ilp(&k, 16, 44, 16, &[], &[]).is_err());
        assert!(build_ilp(&k, 16, 44, 0, &[], &[]).is_err());
        assert!(build_ilp(&k, 18, 44, 1, &[], &[]).is_err());
        assert!(build_ilp(&k, 16, 44, 1, &[], &[]).is_ok());
    }

    #[test]
    fn contradictory_rows_are_infeasible() {
        let k = small();
        let all = support_terms((1u128 << 24) - 1);
        let extra = [Constraint::equal(all, 14)];
        let inst = build_ilp(&k, 16, 44, 1, &[], &extra).unwrap();
        assert_eq!(solve(&inst, Duration::from_secs(1)), SolveOutcome::Infeasible);
    }

    #[test]
    fn repetition_quads() {
        let q = dual_quads(&small());
        assert_eq!(q.len(), 10626);
        assert!(dual_quads(&BinaryCode::from_columns(3, &[1, 2, 4]).unwrap()).is_empty());
    }

    #[test]
    fn codeword_row_shifts_weights() {
        let k = BinaryCode::parse("11111111000000001111111100000000\n00000000111111111111111100000000\n").unwrap();
        let row = k.rows()[0] | (0b11u128 << 32);
        let v = verify_extension_row(&k, row, 2).unwrap();
        assert_eq!(v.enumerator.to_string(), "1z^2 + 3z^18");
        assert!(!v.min_weight_ok);
        assert!(verify_extension_row(&k, k.rows()[0], 2).is_err());
    }
}
