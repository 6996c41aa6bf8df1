#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap, HashSet};

use divcode::canon::canonical_form;
use divcode::gf2core::rank;
use divcode::BinaryCode;
use rand::seq::SliceRandom;
use rand::Rng;

/// A random code of full rank `k` on `n` coordinates, zero columns allowed.
pub fn random_code(rng: &mut impl Rng, n: usize, k: usize) -> BinaryCode {
    loop {
        let rows: Vec<u128> = (0..k).map(|_| rng.gen::<u128>() & ((1u128 << n) - 1)).collect();
        if rank(&rows) == k {
            return BinaryCode::new(n, rows).unwrap();
        }
    }
}

/// Same code after a random column permutation and a random change of basis.
pub fn scramble(rng: &mut impl Rng, code: &BinaryCode) -> BinaryCode {
    let mut perm: Vec<usize> = (0..code.n()).collect();
    perm.shuffle(rng);
    let c = code.permute_columns(&perm).unwrap();
    let k = c.k();
    loop {
        let mix: Vec<u32> = (0..k).map(|_| rng.gen_range(1u32..(1 << k))).collect();
        let rows: Vec<u128> =
            mix.iter().map(|&m| (0..k).filter(|&i| m >> i & 1 == 1).fold(0u128, |r, i| r ^ c.rows()[i])).collect();
        if rank(&rows) == k {
            return BinaryCode::new(c.n(), rows).unwrap();
        }
    }
}

/// Sorted nonzero columns: equal iff the two generator matrices describe the same point multiset.
pub fn point_multiset(code: &BinaryCode) -> Vec<u16> {
    let mut v: Vec<u16> = code.columns().into_iter().filter(|&c| c != 0).collect();
    v.sort_unstable();
    v
}

/// Counts the invertible maps of GF(2)^k preserving the point multiset by
/// fixing the images of a basis chosen among the points, one vector at a time.
pub fn brute_aut(code: &BinaryCode) -> u64 {
    let k = code.k();
    let mut pts: HashMap<u16, usize> = HashMap::new();
    for c in code.columns() {
        if c != 0 {
            *pts.entry(c).or_insert(0) += 1;
        }
    }
    let mut plist: Vec<u16> = pts.keys().copied().collect();
    plist.sort_unstable();
    let mut basis = Vec::new();
    let mut span: Vec<u16> = vec![0];
    for &p in &plist {
        if basis.len() == k {
            break;
        }
        if !span.contains(&p) {
            basis.push(p);
            let shifted: Vec<u16> = span.iter().map(|x| x ^ p).collect();
            span.extend(shifted);
        }
    }
    assert_eq!(basis.len(), k, "points span the whole space");
    let mut coord: HashMap<u16, u16> = HashMap::new();
    for m in 0u16..(1 << k) {
        let v = (0..k).filter(|&i| m >> i & 1 == 1).fold(0u16, |v, i| v ^ basis[i]);
        coord.insert(v, m);
    }

    fn rec(
        i: usize,
        basis: &[u16],
        img: &mut Vec<u16>,
        pts: &HashMap<u16, usize>,
        plist: &[u16],
        coord: &HashMap<u16, u16>,
    ) -> u64 {
        let k = basis.len();
        if i == k {
            let w: Vec<u128> = img.iter().map(|&x| x as u128).collect();
            return (rank(&w) == k) as u64;
        }
        let mut total = 0;
        for &q in plist {
            if pts[&q] != pts[&basis[i]] {
                continue;
            }
            img.push(q);
            let consistent = plist.iter().all(|p| {
                let c = coord[p];
                if c >> (i + 1) != 0 {
                    return true;
                }
                let v = (0..=i).filter(|&j| c >> j & 1 == 1).fold(0u16, |v, j| v ^ img[j]);
                pts.get(&v) == Some(&pts[p])
            });
            if consistent {
                total += rec(i + 1, basis, img, pts, plist, coord);
            }
            img.pop();
        }
        total
    }
    rec(0, &basis, &mut Vec::new(), &pts, &plist, &coord)
}

/// Every codeword, by brute force over coefficient vectors.
pub fn all_words(code: &BinaryCode) -> Vec<u128> {
    let rows = code.rows();
    (0u32..(1 << rows.len()))
        .map(|m| (0..rows.len()).filter(|&i| m >> i & 1 == 1).fold(0u128, |w, i| w ^ rows[i]))
        .collect()
}

/// Whether some multiset of `n` nonzero points of GF(2)^k has all its
/// hyperplane complements (the codeword weights) divisible by `delta`.
pub fn exists_divisible(n: usize, k: usize, delta: usize) -> bool {
    let points = (1usize << k) - 1;
    let mut counts = vec![0usize; points];
    fn rec(i: usize, left: usize, k: usize, delta: usize, counts: &mut [usize]) -> bool {
        if i == counts.len() {
            if left != 0 {
                return false;
            }
            return (1..(1usize << k)).all(|g| {
                let w: usize = counts
                    .iter()
                    .enumerate()
                    .filter(|(u, _)| ((u + 1) & g).count_ones() % 2 == 1)
                    .map(|(_, &c)| c)
                    .sum();
                w.is_multiple_of(delta)
            });
        }
        for c in 0..=left {
            counts[i] = c;
            if rec(i + 1, left - c, k, delta, counts) {
                counts[i] = 0;
                return true;
            }
        }
        counts[i] = 0;
        false
    }
    rec(0, n, k, delta, &mut counts)
}

/// Keys of all children of effective length `n_child` obtained by appending
/// one row to `parent` (padded with ones on `n_child - n` new columns).
pub fn appended_rows(parent: &BinaryCode, n_child: usize, delta: usize) -> BTreeSet<Vec<u8>> {
    let k = parent.k();
    let cols = parent.columns();
    let m = n_child - parent.n();
    let mut seen: HashSet<Vec<u16>> = HashSet::new();
    let mut keys = BTreeSet::new();
    for r in 0u32..(1 << parent.n()) {
        let mut child: Vec<u16> = cols.iter().enumerate().map(|(j, &c)| c | ((r >> j & 1) as u16) << k).collect();
        child.extend(std::iter::repeat_n(1u16 << k, m));
        let divisible = (1u32..(1 << (k + 1))).all(|g| {
            let w = child.iter().filter(|&&c| (c as u32 & g).count_ones() % 2 == 1).count();
            w > 0 && w % delta == 0
        });
        if !divisible {
            continue;
        }
        child.sort_unstable();
        if seen.insert(child.clone()) {
            keys.insert(canonical_form(&BinaryCode::from_columns(k + 1, &child).unwrap()).bytes);
        }
    }
    keys
}
