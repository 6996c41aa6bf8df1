//! Bit-packed GF(2) generator matrices and the statistics computed from them.
//!
//! Row `i` of a code is a `u128` whose bit `j` is the entry in column `j`.
//! Columns are exposed as `u16` values whose bit `i` is the entry in row `i`.

use std::fmt;

use crate::{Error, Result};

pub const MAX_K: usize = 14;
pub const MAX_N: usize = 128;

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct BinaryCode {
    n: usize,
    rows: Vec<u128>,
}

#[derive(Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct WeightEnumerator {
    coeffs: Vec<u64>,
}

/// Census of the columns of a code, indexed by the column value in GF(2)^k.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ColumnMultiplicity {
    k: usize,
    counts: Vec<usize>,
}

fn mask(n: usize) -> u128 {
    if n == 128 {
        u128::MAX
    } else {
        (1u128 << n) - 1
    }
}

/// Row echelon basis of the span of `rows`, zero rows dropped.
pub fn echelon(rows: &[u128]) -> Vec<u128> {
    let mut basis: Vec<u128> = Vec::new();
    for &r in rows {
        let mut v = r;
        for &b in &basis {
            let lead = 127 - b.leading_zeros();
            if (v >> lead) & 1 == 1 {
                v ^= b;
            }
        }
        if v != 0 {
            let lead = 127 - v.leading_zeros();
            for b in basis.iter_mut() {
                if (*b >> lead) & 1 == 1 {
                    *b ^= v;
                }
            }
            basis.push(v);
            basis.sort_unstable_by(|a, b| b.cmp(a));
        }
    }
    basis
}

pub fn rank(rows: &[u128]) -> usize {
    echelon(rows).len()
}

/// Reduces `v` against a basis produced by [`echelon`]; zero iff `v` lies in the span.
pub fn reduce(basis: &[u128], mut v: u128) -> u128 {
    for &b in basis {
        let lead = 127 - b.leading_zeros();
        if (v >> lead) & 1 == 1 {
            v ^= b;
        }
    }
    v
}

/// Basis of the words of length `n` orthogonal to every word in `rows`.
pub fn orthogonal_complement(n: usize, rows: &[u128]) -> Vec<u128> {
    let basis = echelon(rows);
    let leads: Vec<u32> = basis.iter().map(|b| 127 - b.leading_zeros()).collect();
    let mut out = Vec::with_capacity(n - basis.len());
    for f in 0..n as u32 {
        if leads.contains(&f) {
            continue;
        }
        // free coordinate f set; each pivot coordinate takes the value of its row at f
        let mut v = 1u128 << f;
        for (b, &l) in basis.iter().zip(&leads) {
            if (b >> f) & 1 == 1 {
                v |= 1u128 << l;
            }
        }
        out.push(v);
    }
    out
}

impl BinaryCode {
    pub fn new(n: usize, rows: Vec<u128>) -> Result<Self> {
        if n == 0 || n > MAX_N {
            return Err(Error::Length(n));
        }
        let k = rows.len();
        if k == 0 || k > MAX_K {
            return Err(Error::Dimension(k));
        }
        if rows.iter().any(|&r| r & !mask(n) != 0) {
            return Err(Error::invalid("row has entries beyond the stated length"));
        }
        let r = rank(&rows);
        if r < k {
            return Err(Error::RankDeficient { rank: r, k });
        }
        Ok(BinaryCode { n, rows })
    }

    /// Builds the code whose generator matrix has the given columns.
    pub fn from_columns(k: usize, columns: &[u16]) -> Result<Self> {
        if k == 0 || k > MAX_K {
            return Err(Error::Dimension(k));
        }
        let n = columns.len();
        if n == 0 || n > MAX_N {
            return Err(Error::Length(n));
        }
        let mut rows = vec![0u128; k];
        for (j, &c) in columns.iter().enumerate() {
            if (c as usize) >> k != 0 {
                return Err(Error::invalid(format!("column {j} has more than {k} bits")));
            }
            for (i, row) in rows.iter_mut().enumerate() {
                if (c >> i) & 1 == 1 {
                    *row |= 1u128 << j;
                }
            }
        }
        BinaryCode::new(n, rows)
    }

    /// Code spanned by arbitrary words of length `n`; `None` when the span is trivial.
    pub fn spanned_by(n: usize, words: &[u128]) -> Result<Option<Self>> {
        let mut basis = echelon(words);
        if basis.is_empty() {
            return Ok(None);
        }
        basis.reverse();
        BinaryCode::new(n, basis).map(Some)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut header: Option<(usize, usize)> = None;
        let mut rows = Vec::new();
        let mut width = None;
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            let lineno = idx + 1;
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if let Some(rest) = line.strip_prefix("dcc1") {
                if header.is_some() || !rows.is_empty() {
                    return Err(Error::Parse { line: lineno, msg: "misplaced header".into() });
                }
                header = Some(parse_header(rest).map_err(|msg| Error::Parse { line: lineno, msg })?);
                continue;
            }
            if !line.bytes().all(|b| b == b'0' || b == b'1') {
                return Err(Error::Parse { line: lineno, msg: "expected a row of 0/1".into() });
            }
            if *width.get_or_insert(line.len()) != line.len() {
                return Err(Error::Parse { line: lineno, msg: "rows differ in length".into() });
            }
            if line.len() > MAX_N {
                return Err(Error::Length(line.len()));
            }
            let mut r = 0u128;
            for (j, b) in line.bytes().enumerate() {
                if b == b'1' {
                    r |= 1u128 << j;
                }
            }
            rows.push(r);
        }
        let n = width.unwrap_or(0);
        if let Some((k, hn)) = header {
            if k != rows.len() || hn != n {
                return Err(Error::Parse {
                    line: 1,
                    msg: format!("header says k={k} n={hn}, body has k={} n={n}", rows.len()),
                });
            }
        }
        BinaryCode::new(n, rows)
    }

    pub fn to_text(&self, header: bool) -> String {
        let mut s = String::new();
        if header {
            s.push_str(&format!("dcc1 q=2 k={} n={}\n", self.k(), self.n));
        }
        for &r in &self.rows {
            s.push_str(&row_string(r, self.n));
            s.push('\n');
        }
        s
    }

    pub fn k(&self) -> usize {
        self.rows.len()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rows(&self) -> &[u128] {
        &self.rows
    }

    pub fn column(&self, j: usize) -> u16 {
        let mut c = 0u16;
        for (i, &r) in self.rows.iter().enumerate() {
            c |= (((r >> j) & 1) as u16) << i;
        }
        c
    }

    pub fn columns(&self) -> Vec<u16> {
        (0..self.n).map(|j| self.column(j)).collect()
    }

    /// Visits every codeword in Gray-code order, starting with the zero word.
    pub fn for_each_codeword(&self, mut f: impl FnMut(u128)) {
        let mut w = 0u128;
        f(w);
        let total: u64 = 1 << self.k();
        for i in 1..total {
            w ^= self.rows[i.trailing_zeros() as usize];
            f(w);
        }
    }

    pub fn codewords(&self) -> Vec<u128> {
        let mut out = Vec::with_capacity(1 << self.k());
        self.for_each_codeword(|w| out.push(w));
        out
    }

    pub fn weight_enumerator(&self) -> WeightEnumerator {
        let mut coeffs = vec![0u64; self.n + 1];
        self.for_each_codeword(|w| coeffs[w.count_ones() as usize] += 1);
        WeightEnumerator { coeffs }
    }

    pub fn support_mask(&self) -> u128 {
        self.rows.iter().fold(0, |a, &r| a | r)
    }

    pub fn effective_length(&self) -> usize {
        self.support_mask().count_ones() as usize
    }

    /// Largest power of two dividing every nonzero weight.
    pub fn divisibility(&self) -> u64 {
        let mut g = 0u64;
        self.for_each_codeword(|w| g |= w.count_ones() as u64);
        if g == 0 {
            1
        } else {
            1 << g.trailing_zeros()
        }
    }

    pub fn min_distance(&self) -> usize {
        self.weight_enumerator().min_distance()
    }

    pub fn contains(&self, word: u128) -> bool {
        reduce(&echelon(&self.rows), word) == 0
    }

    /// True iff both codes have the same length and the same row space.
    pub fn same_row_space(&self, other: &BinaryCode) -> bool {
        self.n == other.n && echelon(&self.rows) == echelon(&other.rows)
    }

    /// The code with its columns reordered so that new column `j` is old column `perm[j]`.
    pub fn permute_columns(&self, perm: &[usize]) -> Result<Self> {
        if perm.len() != self.n {
            return Err(Error::invalid("permutation length differs from code length"));
        }
        let mut seen = vec![false; self.n];
        for &p in perm {
            if p >= self.n || std::mem::replace(&mut seen[p], true) {
                return Err(Error::invalid("not a permutation"));
            }
        }
        let cols = self.columns();
        let permuted: Vec<u16> = perm.iter().map(|&p| cols[p]).collect();
        BinaryCode::from_columns(self.k(), &permuted)
    }

    /// The same code with its zero columns removed.
    pub fn effective(&self) -> Self {
        let cols: Vec<u16> = self.columns().into_iter().filter(|&c| c != 0).collect();
        BinaryCode::from_columns(self.k(), &cols).expect("a full-rank code has a nonzero column")
    }

    pub fn with_zero_columns(&self, extra: usize) -> Result<Self> {
        BinaryCode::new(self.n + extra, self.rows.clone())
    }

    /// Row-reduced matrix with an identity block on the first `k` columns,
    /// plus the permutation `perm` with new column `j` = old column `perm[j]`.
    pub fn systematic_form(&self) -> (BinaryCode, Vec<usize>) {
        let k = self.k();
        let mut rows = self.rows.clone();
        let mut pivots = Vec::with_capacity(k);
        let mut r = 0;
        for j in 0..self.n {
            if r == k {
                break;
            }
            let Some(p) = (r..k).find(|&i| (rows[i] >> j) & 1 == 1) else { continue };
            rows.swap(r, p);
            for i in 0..k {
                if i != r && (rows[i] >> j) & 1 == 1 {
                    rows[i] ^= rows[r];
                }
            }
            pivots.push(j);
            r += 1;
        }
        let mut perm = pivots.clone();
        perm.extend((0..self.n).filter(|j| !pivots.contains(j)));
        let reduced = BinaryCode { n: self.n, rows };
        let sys = reduced.permute_columns(&perm).expect("pivot permutation is valid");
        (sys, perm)
    }

    /// Numbers of dual codewords of weights 1..=t, counted over column subsets.
    pub fn dual_low_terms(&self, t: usize) -> Result<Vec<u64>> {
        if t > 4 {
            return Err(Error::invalid(format!("dual_low_terms supports t <= 4, got {t}")));
        }
        let cols = self.columns();
        let n = cols.len();
        let mut positions: Vec<Vec<usize>> = vec![Vec::new(); 1 << self.k()];
        for (j, &c) in cols.iter().enumerate() {
            positions[c as usize].push(j);
        }
        // positions strictly after `after` whose column equals `v`
        let later = |v: u16, after: usize| -> u64 {
            let p = &positions[v as usize];
            (p.len() - p.partition_point(|&x| x <= after)) as u64
        };
        let mut out = Vec::with_capacity(t);
        if t >= 1 {
            out.push(positions[0].len() as u64);
        }
        if t >= 2 {
            out.push(positions.iter().map(|p| (p.len() * p.len().saturating_sub(1) / 2) as u64).sum());
        }
        if t >= 3 {
            let mut a3 = 0u64;
            for i in 0..n {
                for j in i + 1..n {
                    a3 += later(cols[i] ^ cols[j], j);
                }
            }
            out.push(a3);
        }
        if t >= 4 {
            let mut a4 = 0u64;
            for i in 0..n {
                for j in i + 1..n {
                    let s = cols[i] ^ cols[j];
                    for (l, &c) in cols.iter().enumerate().skip(j + 1) {
                        a4 += later(s ^ c, l);
                    }
                }
            }
            out.push(a4);
        }
        Ok(out)
    }

    pub fn column_multiplicities(&self, padding: usize) -> ColumnMultiplicity {
        let mut counts = vec![0usize; 1 << self.k()];
        for c in self.columns() {
            if c != 0 {
                counts[c as usize] += 1;
            }
        }
        counts[0] = padding;
        ColumnMultiplicity { k: self.k(), counts }
    }
}

fn parse_header(rest: &str) -> std::result::Result<(usize, usize), String> {
    let (mut k, mut n, mut q) = (None, None, None);
    for tok in rest.split_whitespace() {
        let (key, val) = tok.split_once('=').ok_or_else(|| format!("bad header token {tok:?}"))?;
        let v: usize = val.parse().map_err(|_| format!("bad header value {tok:?}"))?;
        match key {
            "k" => k = Some(v),
            "n" => n = Some(v),
            "q" => q = Some(v),
            _ => return Err(format!("unknown header key {key:?}")),
        }
    }
    if q.is_some_and(|q| q != 2) {
        return Err("only q=2 is supported".into());
    }
    Ok((k.ok_or("header lacks k")?, n.ok_or("header lacks n")?))
}

pub fn row_string(r: u128, n: usize) -> String {
    (0..n).map(|j| if (r >> j) & 1 == 1 { '1' } else { '0' }).collect()
}

impl fmt::Display for BinaryCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text(false))
    }
}

impl WeightEnumerator {
    pub fn from_coeffs(coeffs: Vec<u64>) -> Self {
        WeightEnumerator { coeffs }
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn get(&self, w: usize) -> u64 {
        self.coeffs.get(w).copied().unwrap_or(0)
    }

    pub fn total(&self) -> u64 {
        self.coeffs.iter().sum()
    }

    /// Smallest nonzero weight, or 0 for the zero code.
    pub fn min_distance(&self) -> usize {
        self.coeffs.iter().enumerate().skip(1).find(|(_, &a)| a > 0).map_or(0, |(i, _)| i)
    }

    pub fn max_weight(&self) -> usize {
        self.coeffs.iter().rposition(|&a| a > 0).unwrap_or(0)
    }

    /// Nonzero `(weight, count)` pairs in increasing weight.
    pub fn terms(&self) -> impl Iterator<Item = (usize, u64)> + '_ {
        self.coeffs.iter().enumerate().filter(|(_, &a)| a > 0).map(|(i, &a)| (i, a))
    }

    /// Parses `1z^0 + 3z^24` style polynomials; a leading `W(z)=` is accepted.
    pub fn parse(s: &str, n: usize) -> Result<Self> {
        let body = s.trim().trim_start_matches("W(z)=").trim_start_matches("W=");
        let mut coeffs = vec![0u64; n + 1];
        for term in body.split('+') {
            let term = term.trim();
            let bad = || Error::invalid(format!("bad enumerator term {term:?}"));
            let (c, w) = term.split_once("z^").ok_or_else(bad)?;
            let c: u64 = if c.is_empty() { 1 } else { c.trim().parse().map_err(|_| bad())? };
            let w: usize = w.trim().parse().map_err(|_| bad())?;
            if w > n {
                return Err(Error::invalid(format!("weight {w} exceeds length {n}")));
            }
            coeffs[w] += c;
        }
        Ok(WeightEnumerator { coeffs })
    }
}

impl fmt::Display for WeightEnumerator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (w, a) in self.terms() {
            if !first {
                f.write_str(" + ")?;
            }
            write!(f, "{a}z^{w}")?;
            first = false;
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

impl ColumnMultiplicity {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn get(&self, u: u16) -> usize {
        self.counts[u as usize]
    }

    pub fn total(&self) -> usize {
        self.counts.iter().sum()
    }

    /// Nonzero points with positive multiplicity, in increasing order.
    pub fn points(&self) -> impl Iterator<Item = (u16, usize)> + '_ {
        self.counts.iter().enumerate().skip(1).filter(|(_, &c)| c > 0).map(|(u, &c)| (u as u16, c))
    }

    pub fn is_projective(&self) -> bool {
        self.points().all(|(_, c)| c <= 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rep(n: usize) -> BinaryCode {
        BinaryCode::new(n, vec![mask(n)]).unwrap()
    }

    #[test]
    fn repetition_enumerator() {
        let c = rep(24);
        assert_eq!(c.weight_enumerator().to_string(), "1z^0 + 1z^24");
        assert_eq!(c.divisibility(), 8);
        assert_eq!(c.effective_length(), 24);
    }

    #[test]
    fn rejects_degenerate_input() {
        assert!(matches!(BinaryCode::new(5, vec![]), Err(Error::Dimension(0))));
        assert!(matches!(BinaryCode::new(5, vec![0]), Err(Error::RankDeficient { .. })));
        assert!(matches!(BinaryCode::new(5, vec![3, 5, 6]), Err(Error::RankDeficient { .. })));
        assert!(BinaryCode::new(129, vec![1]).is_err());
    }

    #[test]
    fn text_round_trip() {
        let c = BinaryCode::parse("dcc1 q=2 k=2 n=5\n11000\n01110\n").unwrap();
        assert_eq!(c.to_text(true), "dcc1 q=2 k=2 n=5\n11000\n01110\n");
        assert_eq!(BinaryCode::parse(&c.to_text(false)).unwrap(), c);
        assert!(BinaryCode::parse("dcc1 q=2 k=3 n=5\n11000\n01110\n").is_err());
        assert!(BinaryCode::parse("1100\n011\n").is_err());
    }

    #[test]
    fn identity_is_already_systematic() {
        let id = BinaryCode::new(4, vec![1, 2, 4, 8]).unwrap();
        let (s, perm) = id.systematic_form();
        assert_eq!(s, id);
        assert_eq!(perm, vec![0, 1, 2, 3]);
    }

    #[test]
    fn zero_columns_do_not_change_effective_length() {
        let c = BinaryCode::parse("1101\n0111\n").unwrap();
        let padded = c.with_zero_columns(2).unwrap();
        assert_eq!(padded.effective_length(), c.effective_length());
        assert_eq!(padded.dual_low_terms(1).unwrap(), vec![2]);
    }

    #[test]
    fn repeated_column_counts_as_dual_pair() {
        let c = BinaryCode::from_columns(2, &[1, 2, 3, 3]).unwrap();
        let t = c.dual_low_terms(4).unwrap();
        assert_eq!(t[0], 0);
        assert_eq!(t[1], 1);
        // {0,1,2} and {0,1,3} sum to zero
        assert_eq!(t[2], 2);
        assert!(c.dual_low_terms(5).is_err());
    }

    #[test]
    fn multiplicities_of_repetition_code() {
        let m = rep(24).column_multiplicities(12);
        assert_eq!(m.get(1), 24);
        assert_eq!(m.get(0), 12);
        assert_eq!(m.total(), 36);
    }

    #[test]
    fn enumerator_parse_round_trip() {
        let w = WeightEnumerator::parse("W(z)=1z^{0}".replace(['{', '}'], "").as_str(), 4).unwrap();
        assert_eq!(w.total(), 1);
        let w = WeightEnumerator::parse("1z^0 + 1008z^24 + 6174z^32 + 1008z^40 + 1z^64", 64).unwrap();
        assert_eq!(w.to_string(), "1z^0 + 1008z^24 + 6174z^32 + 1008z^40 + 1z^64");
        assert_eq!(w.total(), 1 << 13);
    }
}
