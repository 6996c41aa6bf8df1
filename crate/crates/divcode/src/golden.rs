//! Reference corpus of generator matrices with their published invariants.
//!
//! Each entry of `data/golden.txt` reads
//!
//! ```text
//! [code <label>]
//! n=<n> k=<k> div=<divisibility> dmin=<d> [aut=<order>]
//! [W=<enumerator>]
//! <k rows of 0/1>
//! ```

use std::collections::BTreeMap;

use num_bigint::BigUint;

use crate::canon;
use crate::{BinaryCode, Error, Result, WeightEnumerator};

pub const CORPUS: &str = include_str!("../data/golden.txt");

#[derive(Clone, Debug)]
pub struct GoldenEntry {
    pub label: String,
    pub n: usize,
    pub k: usize,
    pub div: u64,
    pub dmin: usize,
    pub aut: Option<BigUint>,
    pub enumerator: Option<WeightEnumerator>,
    pub code: BinaryCode,
}

pub fn parse_corpus(text: &str) -> Result<Vec<GoldenEntry>> {
    let mut out = Vec::new();
    let blocks = text.split("[code ").skip(1);
    let mut line_base = 1 + text.split("[code ").next().map_or(0, |s| s.lines().count());
    for block in blocks {
        let err = |msg: String| Error::Parse { line: line_base, msg };
        let (label, body) = block.split_once(']').ok_or_else(|| err("unterminated label".into()))?;
        let mut meta: BTreeMap<&str, &str> = BTreeMap::new();
        let mut enumerator = None;
        let mut matrix = String::new();
        for line in body.lines().map(str::trim) {
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if let Some(w) = line.strip_prefix("W=") {
                enumerator = Some(w.to_string());
            } else if line.contains('=') {
                for tok in line.split_whitespace() {
                    let (key, val) = tok.split_once('=').ok_or_else(|| err(format!("bad token {tok:?}")))?;
                    meta.insert(key, val);
                }
            } else {
                matrix.push_str(line);
                matrix.push('\n');
            }
        }
        let num = |key: &str| -> Result<usize> {
            meta.get(key)
                .ok_or_else(|| err(format!("{label}: missing {key}")))?
                .parse()
                .map_err(|_| err(format!("{label}: bad {key}")))
        };
        let code = BinaryCode::parse(&matrix)?;
        let n = num("n")?;
        let enumerator = enumerator.map(|w| WeightEnumerator::parse(&w, n)).transpose()?;
        let aut = match meta.get("aut") {
            Some(a) => Some(a.parse::<BigUint>().map_err(|_| err(format!("{label}: bad aut")))?),
            None => None,
        };
        out.push(GoldenEntry {
            label: label.to_string(),
            n,
            k: num("k")?,
            div: num("div")? as u64,
            dmin: num("dmin")?,
            aut,
            enumerator,
            code,
        });
        line_base += block.lines().count();
    }
    Ok(out)
}

pub fn corpus() -> Vec<GoldenEntry> {
    parse_corpus(CORPUS).expect("embedded corpus parses")
}

pub fn entry(label: &str) -> Option<GoldenEntry> {
    corpus().into_iter().find(|e| e.label == label)
}

#[derive(Clone, Debug)]
pub struct EntryCheck {
    pub label: String,
    pub dimension_ok: bool,
    pub length_ok: bool,
    pub enumerator_ok: bool,
    pub divisibility_ok: bool,
    pub distance_ok: bool,
    /// `(expected, computed)` when an order is recorded and was checked.
    pub aut: Option<(BigUint, BigUint)>,
}

impl EntryCheck {
    pub fn passed(&self) -> bool {
        self.dimension_ok
            && self.length_ok
            && self.enumerator_ok
            && self.divisibility_ok
            && self.distance_ok
            && self.aut.as_ref().is_none_or(|(a, b)| a == b)
    }
}

pub fn check_entry(e: &GoldenEntry, with_aut: bool) -> EntryCheck {
    let w = e.code.weight_enumerator();
    EntryCheck {
        label: e.label.clone(),
        dimension_ok: e.code.k() == e.k,
        length_ok: e.code.effective_length() == e.n,
        enumerator_ok: e.enumerator.as_ref().is_none_or(|x| *x == w),
        divisibility_ok: e.code.divisibility().is_multiple_of(e.div),
        distance_ok: w.min_distance() >= e.dmin,
        aut: match (&e.aut, with_aut) {
            (Some(a), true) => Some((a.clone(), canon::automorphism_order(&e.code))),
            _ => None,
        },
    }
}

/// Numbers of optimal 8-divisible codes per dimension and effective length.
pub const OPTIMAL_COUNTS: &[(usize, &[(usize, usize)])] = &[
    (1, &[(24, 1)]),
    (2, &[(36, 1)]),
    (3, &[(42, 1), (44, 1)]),
    (4, &[(45, 1), (46, 1), (47, 2), (48, 4)]),
    (5, &[(47, 1), (48, 4), (49, 1), (50, 6)]),
    (6, &[(48, 1), (49, 1), (50, 2), (51, 5)]),
    (7, &[(50, 1), (51, 1), (52, 4), (53, 7), (54, 58)]),
    (8, &[(51, 1), (54, 1), (55, 4), (56, 55)]),
    (9, &[(56, 2)]),
];

/// Groups the optimal-code entries (labels `opt-*`) by `(n, k)`.
pub fn optimal_counts(entries: &[GoldenEntry]) -> BTreeMap<(usize, usize), usize> {
    let mut m = BTreeMap::new();
    for e in entries.iter().filter(|e| e.label.starts_with("opt-")) {
        *m.entry((e.code.effective_length(), e.code.k())).or_insert(0) += 1;
    }
    m
}

pub fn expected_optimal_counts() -> BTreeMap<(usize, usize), usize> {
    let mut m = BTreeMap::new();
    for &(k, row) in OPTIMAL_COUNTS {
        for &(n, c) in row {
            m.insert((n, k), c);
        }
    }
    m
}

/// A published extension row together with the enumerator of the new coset.
#[derive(Clone, Debug)]
pub struct ExtensionRow {
    pub code: &'static str,
    /// 1-based support over the code's coordinates followed by one new coordinate.
    pub support: &'static [usize],
    pub coset: &'static str,
}

pub const EXTENSION_ROWS: &[ExtensionRow] = &[
    ExtensionRow {
        code: "ext-63-11",
        support: &[
            2, 6, 9, 10, 17, 19, 22, 27, 28, 30, 33, 34, 35, 36, 39, 41, 42, 44, 45, 46, 48, 49, 50, 51, 53, 54, 55,
            56, 57, 58, 59, 60, 61, 62, 63, 64,
        ],
        coset: "896z^28 + 1152z^36",
    },
    // the new coordinate 64 completes the list to weight 40
    ExtensionRow {
        code: "ext-63-11",
        support: &[
            4, 6, 8, 9, 12, 14, 15, 21, 23, 25, 26, 28, 29, 30, 31, 33, 37, 38, 39, 41, 43, 44, 45, 46, 47, 48, 49, 50,
            51, 52, 53, 55, 56, 57, 58, 59, 60, 62, 63, 64,
        ],
        coset: "768z^28 + 384z^32 + 768z^36 + 128z^40",
    },
    // entry 49 replaces an erroneous 48
    ExtensionRow {
        code: "ext-64-11-a",
        support: &[
            2, 7, 11, 12, 14, 16, 18, 21, 22, 27, 29, 30, 31, 33, 34, 35, 37, 39, 40, 41, 42, 43, 45, 46, 47, 49, 50,
            51, 52, 55, 56, 57, 58, 59, 60, 61, 62, 63, 64, 65,
        ],
        coset: "672z^28 + 352z^32 + 864z^36 + 160z^40",
    },
];

/// The row of an [`ExtensionRow`] as a bit mask over `n + 1` coordinates.
pub fn support_mask(support: &[usize]) -> u128 {
    support.iter().fold(0u128, |m, &i| m | 1u128 << (i - 1))
}
