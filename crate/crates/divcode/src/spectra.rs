//! MacWilliams transform, the first four power moments and the a40 bounds
//! for twelve-dimensional codes.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::{Error, Result, WeightEnumerator};

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DualWeightDistribution {
    coeffs: Vec<BigInt>,
}

impl DualWeightDistribution {
    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn get(&self, j: usize) -> BigInt {
        self.coeffs.get(j).cloned().unwrap_or_default()
    }

    pub fn is_nonnegative(&self) -> bool {
        self.coeffs.iter().all(|c| !c.is_negative())
    }

    /// The distribution as a weight enumerator, if every entry is a non-negative `u64`.
    pub fn to_enumerator(&self) -> Option<WeightEnumerator> {
        let coeffs: Option<Vec<u64>> = self.coeffs.iter().map(|c| c.to_u64()).collect();
        coeffs.map(WeightEnumerator::from_coeffs)
    }
}

impl fmt::Display for DualWeightDistribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> =
            self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(j, c)| format!("{c}z^{j}")).collect();
        f.write_str(&terms.join(" + "))
    }
}

fn binomials(n: usize) -> Vec<Vec<BigInt>> {
    let mut c = vec![vec![BigInt::zero(); n + 1]; n + 1];
    for i in 0..=n {
        c[i][0] = BigInt::one();
        for j in 1..=i {
            c[i][j] = &c[i - 1][j - 1] + &c[i - 1][j];
        }
    }
    c
}

/// Krawtchouk value K_j(i) = sum_s (-1)^s C(i,s) C(n-i, j-s).
fn krawtchouk(binom: &[Vec<BigInt>], n: usize, j: usize, i: usize) -> BigInt {
    let mut acc = BigInt::zero();
    for s in 0..=j.min(i) {
        if j - s > n - i {
            continue;
        }
        let t = &binom[i][s] * &binom[n - i][j - s];
        if s % 2 == 0 {
            acc += t;
        } else {
            acc -= t;
        }
    }
    acc
}

/// Dual distribution of a length-`n`, dimension-`k` code with enumerator `w`.
pub fn macwilliams_dual(w: &WeightEnumerator, n: usize, k: usize) -> Result<DualWeightDistribution> {
    let coeffs: Vec<BigInt> = w.coeffs().iter().map(|&a| BigInt::from(a)).collect();
    macwilliams_big(&coeffs, n, k)
}

/// Transform of an arbitrary integer distribution; inverse of itself with `k` replaced by `n - k`.
pub fn macwilliams_big(a: &[BigInt], n: usize, k: usize) -> Result<DualWeightDistribution> {
    if a.len() > n + 1 && a[n + 1..].iter().any(|c| !c.is_zero()) {
        return Err(Error::invalid("enumerator has weights beyond the length"));
    }
    let total: BigInt = a.iter().sum();
    if total != BigInt::one() << k {
        return Err(Error::invalid(format!("enumerator sums to {total}, expected 2^{k}")));
    }
    let binom = binomials(n);
    let denom = BigInt::one() << k;
    let mut out = Vec::with_capacity(n + 1);
    for j in 0..=n {
        let mut s = BigInt::zero();
        for (i, ai) in a.iter().enumerate().take(n + 1) {
            if !ai.is_zero() {
                s += ai * krawtchouk(&binom, n, j, i);
            }
        }
        let (q, r) = s.div_rem(&denom);
        if !r.is_zero() {
            return Err(Error::InexactDivision);
        }
        out.push(q);
    }
    Ok(DualWeightDistribution { coeffs: out })
}

/// Left side minus right side of the first four power moment identities.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MomentResiduals(pub [BigRational; 4]);

impl MomentResiduals {
    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|r| r.is_zero())
    }
}

impl fmt::Display for MomentResiduals {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = &self.0;
        write!(f, "({a}, {b}, {c}, {d})")
    }
}

pub fn power_moment_residuals(w: &WeightEnumerator, n: usize, k: usize, a2s: u64, a3s: u64) -> MomentResiduals {
    let rat = |x: BigInt| BigRational::from_integer(x);
    let pow2 = |e: i64| -> BigRational {
        if e >= 0 {
            rat(BigInt::one() << e as usize)
        } else {
            BigRational::new(BigInt::one(), BigInt::one() << (-e) as usize)
        }
    };
    let mut sums = [BigInt::zero(), BigInt::zero(), BigInt::zero(), BigInt::zero()];
    for (i, a) in w.terms() {
        if i == 0 {
            continue;
        }
        let (i, a) = (BigInt::from(i), BigInt::from(a));
        sums[0] += &a;
        sums[1] += &a * &i;
        sums[2] += &a * &i * &i;
        sums[3] += &a * &i * &i * &i;
    }
    let nn = BigInt::from(n);
    let (a2, a3) = (BigInt::from(a2s), BigInt::from(a3s));
    let k = k as i64;
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let r0 = rat(sums[0].clone()) - (pow2(k) - rat(BigInt::one()));
    let r1 = rat(sums[1].clone()) - pow2(k - 1) * rat(nn.clone());
    let r2 = rat(sums[2].clone()) - pow2(k - 1) * (rat(a2.clone()) + rat(&nn * (&nn + 1)) * half.clone());
    let r3 = rat(sums[3].clone())
        - pow2(k - 2) * (rat(BigInt::from(3) * (&a2 * &nn - &a3)) + rat(&nn * &nn * (&nn + 3)) * half);
    MomentResiduals([r0, r1, r2, r3])
}

/// Lower bounds on a40 and a40 + a48 for an 8-divisible [n,12] code with d >= 24.
pub fn a40_bounds(n: usize) -> Result<(BigRational, BigRational)> {
    if !(24..=66).contains(&n) {
        return Err(Error::invalid(format!("a40 bounds are stated for 24 <= n <= 66, got {n}")));
    }
    let r = |num: i64, den: i64| BigRational::new(BigInt::from(num), BigInt::from(den));
    let x = r(n as i64, 1);
    let x2 = &x * &x;
    let x3 = &x2 * &x;
    let first = r(205, 2) * &x2 - r(6808, 1) * &x - r(1, 2) * &x3 + r(147420, 1);
    let second = r(71, 1) * &x2 - r(14504, 3) * &x - r(1, 3) * &x3 + r(106470, 1);
    Ok((first, second))
}

/// Lower bound on the effective length of a 4-divisible binary code of dimension `k`.
///
/// Such a code is self-orthogonal, so `n >= 2k`, and equality forces a
/// doubly-even self-dual code whose length is a multiple of 8.
pub fn min_doubly_even_length(k: usize) -> usize {
    if (2 * k).is_multiple_of(8) {
        2 * k
    } else {
        2 * k + 1
    }
}

/// Effective lengths `n <= 65` left open for an 8-divisible [n,12] code with d >= 24.
pub fn twelve_dim_length_window() -> BTreeSet<usize> {
    let mut out = BTreeSet::new();
    for n in 24..=65usize {
        let (first, second) = a40_bounds(n).expect("n in range");
        if second.is_negative() {
            continue;
        }
        if first >= BigRational::one() {
            // residual of a weight-40 word: 4-divisible, dimension 11, length n - 40
            if n < 40 || n - 40 < min_doubly_even_length(11) {
                continue;
            }
        }
        out.insert(n);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn repetition_dual_is_even_weight_code() {
        let n = 9;
        let mut c = vec![0u64; n + 1];
        c[0] = 1;
        c[n] = 1;
        let d = macwilliams_dual(&WeightEnumerator::from_coeffs(c), n, 1).unwrap();
        let binom = binomials(n);
        for (j, b) in binom[n].iter().enumerate() {
            let expect = if j % 2 == 0 { b.clone() } else { BigInt::zero() };
            assert_eq!(d.get(j), expect, "j={j}");
        }
    }

    #[test]
    fn inconsistent_input_is_rejected() {
        // sums to 4 but is not the enumerator of any code
        let w = WeightEnumerator::from_coeffs(vec![1, 0, 0, 1, 2]);
        assert!(matches!(macwilliams_dual(&w, 4, 2), Err(Error::InexactDivision)));
        let w = WeightEnumerator::from_coeffs(vec![1, 0, 0, 1]);
        assert!(macwilliams_dual(&w, 3, 2).is_err());
    }

    #[test]
    fn moments_of_repetition_code() {
        let n = 24usize;
        let mut c = vec![0u64; n + 1];
        c[0] = 1;
        c[n] = 1;
        let w = WeightEnumerator::from_coeffs(c);
        let a2 = (n * (n - 1) / 2) as u64;
        assert!(power_moment_residuals(&w, n, 1, a2, 0).is_zero());
    }

    #[test]
    fn perturbed_enumerator_shows_in_first_moment() {
        let w = WeightEnumerator::parse("1z^0 + 390z^24 + 3055z^32 + 650z^40", 65).unwrap();
        assert!(power_moment_residuals(&w, 65, 12, 0, 0).is_zero());
        let bad = WeightEnumerator::parse("1z^0 + 391z^24 + 3055z^32 + 650z^40", 65).unwrap();
        let r = power_moment_residuals(&bad, 65, 12, 0, 0);
        assert_eq!(r.0[0], BigRational::one());
    }

    #[test]
    fn a40_bound_examples() {
        let (first, _) = a40_bounds(63).unwrap();
        assert_eq!(first, BigRational::from_integer(BigInt::from(315)));
        assert!(a40_bounds(57).unwrap().1.is_negative());
        assert!(a40_bounds(53).unwrap().0 >= BigRational::one());
        assert!(a40_bounds(23).is_err());
        assert!(a40_bounds(67).is_err());
    }

    #[test]
    fn window_is_63_to_65() {
        assert_eq!(twelve_dim_length_window().into_iter().collect::<Vec<_>>(), vec![63, 64, 65]);
        assert_eq!(min_doubly_even_length(11), 23);
        assert_eq!(min_doubly_even_length(12), 24);
    }
}
