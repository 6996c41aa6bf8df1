//! Base numbers sigma_q(r, i), the S_q(r)-adic expansion and the resulting
//! characterization of lengths of q^r-divisible codes.

use std::fmt;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SadicExpansion {
    pub q: u64,
    pub r: u32,
    /// a_0 ..= a_r; all but the last lie in 0..q.
    pub digits: Vec<i128>,
}

impl SadicExpansion {
    pub fn leading(&self) -> i128 {
        *self.digits.last().expect("r + 1 digits")
    }

    pub fn value(&self) -> i128 {
        let sigma = base_numbers(self.q, self.r);
        self.digits.iter().zip(&sigma).map(|(a, s)| a * s).sum()
    }
}

impl fmt::Display for SadicExpansion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.digits.iter().map(|d| d.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// sigma_q(r, i) = (q^{r+1} - q^i) / (q - 1) for i = 0..=r.
pub fn base_numbers(q: u64, r: u32) -> Vec<i128> {
    assert!(q >= 2, "field size must be at least 2");
    let q = q as i128;
    (0..=r).map(|i| (q.pow(r + 1) - q.pow(i)) / (q - 1)).collect()
}

pub fn sadic_expansion(n: i128, q: u64, r: u32) -> SadicExpansion {
    let sigma = base_numbers(q, r);
    let qi = q as i128;
    let mut rest = n;
    let mut digits = Vec::with_capacity(r as usize + 1);
    for (i, s) in sigma.iter().enumerate().take(r as usize) {
        // sigma_i is q^i times a number congruent to 1 mod q, and q^i divides `rest`
        let a = (rest / qi.pow(i as u32)).rem_euclid(qi);
        rest -= a * s;
        digits.push(a);
    }
    digits.push(rest / qi.pow(r));
    SadicExpansion { q, r, digits }
}

/// Whether some q^r-divisible code has effective length `n`.
pub fn feasible_length(n: u64, q: u64, r: u32) -> bool {
    sadic_expansion(n as i128, q, r).leading() >= 0
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn base_number_examples() {
        assert_eq!(base_numbers(2, 2), vec![7, 6, 4]);
        assert_eq!(base_numbers(2, 0), vec![1]);
        assert_eq!(base_numbers(2, 3), vec![15, 14, 12, 8]);
    }

    #[test]
    fn expansion_examples() {
        assert_eq!(sadic_expansion(1, 2, 2).digits, vec![1, 1, -3]);
        assert_eq!(sadic_expansion(9, 2, 2).digits, vec![1, 1, -1]);
        assert_eq!(sadic_expansion(0, 2, 2).digits, vec![0, 0, 0]);
        assert_eq!(sadic_expansion(9, 2, 2).to_string(), "(1,1,-1)");
    }

    #[test]
    fn small_infeasible_lengths() {
        let bad: Vec<u64> = (0..=30).filter(|&n| !feasible_length(n, 2, 2)).collect();
        assert_eq!(bad, vec![1, 2, 3, 5, 9]);
        assert!(feasible_length(24, 2, 3));
    }

    #[test]
    fn reconstruction_and_digit_ranges() {
        for q in [2u64, 3, 4] {
            for r in 0..=4 {
                for n in -100..=200 {
                    let e = sadic_expansion(n, q, r);
                    assert_eq!(e.value(), n);
                    assert!(e.digits[..r as usize].iter().all(|&d| (0..q as i128).contains(&d)));
                }
            }
        }
    }
}
