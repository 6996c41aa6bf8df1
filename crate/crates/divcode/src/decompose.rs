//! Residual codes and restrictions of the point multiset to subspaces.

use crate::gf2core::{echelon, reduce};
use crate::{BinaryCode, Error, Result};

#[derive(Clone, Debug)]
pub struct Residual {
    /// The code restricted to the coordinates outside the support, or `None`
    /// when that restriction is the zero code.
    pub code: Option<BinaryCode>,
    pub dim: usize,
    /// Dimension of the subcode of words supported inside the support of the chosen word.
    pub complement_dim: usize,
    /// Number of nonzero coordinates outside the support.
    pub length: usize,
}

fn restrict(word: u128, keep: u128) -> u128 {
    let mut out = 0u128;
    let mut j = 0;
    let mut bits = keep;
    while bits != 0 {
        let p = bits.trailing_zeros();
        out |= ((word >> p) & 1) << j;
        j += 1;
        bits &= bits - 1;
    }
    out
}

pub fn residual(code: &BinaryCode, word: u128) -> Result<Residual> {
    if word == 0 {
        return Err(Error::invalid("residual of the zero word"));
    }
    if !code.contains(word) {
        return Err(Error::invalid("word is not a codeword"));
    }
    let keep = code.support_mask() & !word;
    let len = keep.count_ones() as usize;
    let rows: Vec<u128> = code.rows().iter().map(|&r| restrict(r, keep)).collect();
    let basis = echelon(&rows);
    let dim = basis.len();
    let restricted = if len == 0 { None } else { BinaryCode::spanned_by(len, &basis)? };
    Ok(Residual { code: restricted, dim, complement_dim: code.k() - dim, length: len })
}

/// The code restricted to the coordinates whose column lies in the span of `basis`.
///
/// `basis` must consist of `k - l` independent vectors of GF(2)^k. Returns
/// `None` when no column lies in the subspace.
pub fn subspace_restriction(code: &BinaryCode, basis: &[u16], l: usize) -> Result<Option<BinaryCode>> {
    let k = code.k();
    if l > k || basis.len() != k - l {
        return Err(Error::invalid(format!("a codimension-{l} subspace needs {} basis vectors", k - l.min(k))));
    }
    if basis.iter().any(|&b| (b as usize) >> k != 0) {
        return Err(Error::invalid("basis vector outside GF(2)^k"));
    }
    let wide: Vec<u128> = basis.iter().map(|&b| b as u128).collect();
    let ech = echelon(&wide);
    if ech.len() != basis.len() {
        return Err(Error::invalid("subspace basis is linearly dependent"));
    }
    let mut keep = 0u128;
    for (j, c) in code.columns().into_iter().enumerate() {
        if c != 0 && reduce(&ech, c as u128) == 0 {
            keep |= 1u128 << j;
        }
    }
    let len = keep.count_ones() as usize;
    if len == 0 {
        return Ok(None);
    }
    let rows: Vec<u128> = code.rows().iter().map(|&r| restrict(r, keep)).collect();
    BinaryCode::spanned_by(len, &rows)
}

/// All hyperplanes of GF(2)^k, each given by a basis of `k - 1` vectors,
/// indexed by the nonzero normal vectors `h` in increasing order.
pub fn hyperplanes(k: usize) -> Vec<(u16, Vec<u16>)> {
    let mut out = Vec::new();
    for h in 1u16..(1 << k) {
        let vecs: Vec<u128> = (1u16..(1 << k)).filter(|v| (v & h).count_ones() % 2 == 0).map(|v| v as u128).collect();
        let mut basis: Vec<u16> = echelon(&vecs).into_iter().map(|v| v as u16).collect();
        basis.sort_unstable();
        out.push((h, basis));
    }
    out
}
