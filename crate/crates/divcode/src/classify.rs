//! Dimension-by-dimension classification with isomorph rejection.
//!
//! Every code of dimension `k + 1` and effective length `n'` has a
//! `k`-dimensional subcode of effective length `n' - m`, where `m` is the
//! smallest multiplicity of a point of the code. Children are therefore only
//! generated from parents whose length differs by at most the child's
//! smallest multiplicity, and every class is reached.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::{self, Write as _};
use std::fs;
use std::path::{Path, PathBuf};

use num_bigint::BigUint;
use rayon::prelude::*;

use crate::canon::{self, CanonicalKey};
use crate::extend::{enumerate_extensions, realize, ExtensionProblem};
use crate::gf2core::{row_string, MAX_K, MAX_N};
use crate::{BinaryCode, Error, Result, WeightEnumerator};

#[derive(Clone, Debug)]
pub struct Campaign {
    pub delta: usize,
    pub dmin: usize,
    pub weights: Option<BTreeSet<usize>>,
    pub kmax: usize,
    pub nmax: usize,
    pub jobs: usize,
    pub out: Option<PathBuf>,
}

impl Campaign {
    pub fn new(delta: usize, dmin: usize, kmax: usize, nmax: usize) -> Self {
        Campaign { delta, dmin, weights: None, kmax, nmax, jobs: 1, out: None }
    }

    pub fn with_weights(mut self, weights: impl IntoIterator<Item = usize>) -> Self {
        self.weights = Some(weights.into_iter().collect());
        self
    }

    pub fn with_jobs(mut self, jobs: usize) -> Self {
        self.jobs = jobs;
        self
    }

    pub fn with_out(mut self, dir: impl Into<PathBuf>) -> Self {
        self.out = Some(dir.into());
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.delta == 0 || self.dmin == 0 {
            return Err(Error::invalid("delta and dmin must be positive"));
        }
        if !self.dmin.is_multiple_of(self.delta) {
            return Err(Error::invalid(format!("dmin {} is not a multiple of delta {}", self.dmin, self.delta)));
        }
        if self.kmax == 0 || self.kmax > MAX_K {
            return Err(Error::Dimension(self.kmax));
        }
        if self.nmax == 0 || self.nmax > MAX_N {
            return Err(Error::Length(self.nmax));
        }
        if let Some(ws) = &self.weights {
            if let Some(w) = ws.iter().find(|&&w| w % self.delta != 0 || w < self.dmin) {
                return Err(Error::invalid(format!("weight {w} is not a multiple of delta at least dmin")));
            }
        }
        Ok(())
    }

    pub fn allows(&self, w: usize) -> bool {
        w.is_multiple_of(self.delta) && w >= self.dmin && self.weights.as_ref().is_none_or(|s| s.contains(&w))
    }

    /// Every nonzero weight is allowed.
    pub fn admits(&self, w: &WeightEnumerator) -> bool {
        w.terms().all(|(i, _)| i == 0 || self.allows(i))
    }

    fn problem(&self, parent: &BinaryCode, n_child: usize) -> ExtensionProblem {
        let p =
            ExtensionProblem::new(parent.clone(), n_child, self.delta, self.dmin / self.delta, n_child / self.delta)
                .with_min_multiplicity(true);
        match &self.weights {
            Some(ws) => p.with_weights(ws.clone()),
            None => p,
        }
    }

    fn header(&self) -> String {
        let mut s = format!("campaign delta={} dmin={}", self.delta, self.dmin);
        if let Some(ws) = &self.weights {
            let list: Vec<String> = ws.iter().map(usize::to_string).collect();
            write!(s, " weights={}", list.join(",")).unwrap();
        }
        s
    }
}

#[derive(Clone, Debug)]
pub struct CodeRecord {
    pub key: CanonicalKey,
    pub code: BinaryCode,
    pub enumerator: WeightEnumerator,
    pub n: usize,
    pub aut: BigUint,
}

impl CodeRecord {
    /// Canonizes `code` and stores the canonical representative.
    pub fn from_code(code: &BinaryCode) -> Self {
        let eff = code.effective();
        let can = canon::canonize(&eff);
        let enumerator = can.code.weight_enumerator();
        CodeRecord {
            aut: can.key.aut_order.clone(),
            key: can.key,
            n: can.code.effective_length(),
            code: can.code,
            enumerator,
        }
    }

    pub fn k(&self) -> usize {
        self.code.k()
    }

    fn min_multiplicity(&self) -> usize {
        self.code.column_multiplicities(0).points().map(|(_, c)| c).min().unwrap_or(0)
    }

    fn to_text(&self) -> String {
        let mut s = format!("record key={} n={} k={} aut={}\n", self.key.hex(), self.n, self.k(), self.aut);
        writeln!(s, "W={}", self.enumerator).unwrap();
        for &r in self.code.rows() {
            writeln!(s, "{}", row_string(r, self.code.n())).unwrap();
        }
        s
    }
}

#[derive(Clone, Default, PartialEq, Eq, Debug)]
pub struct CountsTable {
    counts: BTreeMap<(usize, usize), usize>,
}

impl CountsTable {
    pub fn get(&self, n: usize, k: usize) -> usize {
        self.counts.get(&(n, k)).copied().unwrap_or(0)
    }

    pub fn add(&mut self, n: usize, k: usize) {
        *self.counts.entry((n, k)).or_insert(0) += 1;
    }

    /// Nonzero cells as `((n, k), count)`.
    pub fn cells(&self) -> impl Iterator<Item = ((usize, usize), usize)> + '_ {
        self.counts.iter().map(|(&nk, &c)| (nk, c))
    }

    /// Nonzero entries of dimension `k`, by length.
    pub fn row(&self, k: usize) -> BTreeMap<usize, usize> {
        self.counts.iter().filter(|((_, kk), _)| *kk == k).map(|(&(n, _), &c)| (n, c)).collect()
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("n,k,count\n");
        let mut cells: Vec<_> = self.cells().collect();
        cells.sort_by_key(|&((n, k), _)| (k, n));
        for ((n, k), c) in cells {
            writeln!(s, "{n},{k},{c}").unwrap();
        }
        s
    }

    /// Dimensions as rows, lengths as columns; only lengths with some nonzero count appear.
    pub fn grid(&self) -> String {
        let lengths: BTreeSet<usize> = self.counts.keys().map(|&(n, _)| n).collect();
        let dims: BTreeSet<usize> = self.counts.keys().map(|&(_, k)| k).collect();
        let width = self.counts.values().map(|c| c.to_string().len()).max().unwrap_or(1).max(3);
        let mut s = format!("{:>3} |", "k/n");
        for n in &lengths {
            write!(s, " {n:>width$}").unwrap();
        }
        s.push('\n');
        s.push_str(&"-".repeat(5 + lengths.len() * (width + 1)));
        s.push('\n');
        for &k in &dims {
            write!(s, "{k:>3} |").unwrap();
            for &n in &lengths {
                write!(s, " {:>width$}", self.get(n, k)).unwrap();
            }
            s.push('\n');
        }
        s
    }
}

impl fmt::Display for CountsTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.grid())
    }
}

/// Dimension-one classes: the all-one words of admissible length.
pub fn initial_records(campaign: &Campaign) -> Vec<CodeRecord> {
    (1..=campaign.nmax)
        .filter(|&w| campaign.allows(w))
        .map(|w| CodeRecord::from_code(&BinaryCode::new(w, vec![(1u128 << w) - 1]).expect("valid length")))
        .collect()
}

fn children_of(parent: &CodeRecord, campaign: &Campaign) -> Result<BTreeMap<Vec<u8>, CodeRecord>> {
    let mut found = BTreeMap::new();
    let (sys, _) = parent.code.systematic_form();
    let n = parent.n;
    let top = parent.min_multiplicity().min(campaign.nmax.saturating_sub(n));
    for m in 1..=top {
        let problem = campaign.problem(&sys, n + m);
        for sol in enumerate_extensions(&problem)? {
            let child = realize(&sys, &sol)?;
            if !campaign.admits(&child.weight_enumerator()) {
                continue;
            }
            let rec = CodeRecord::from_code(&child);
            found.entry(rec.key.bytes.clone()).or_insert(rec);
        }
    }
    Ok(found)
}

fn pool(jobs: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| Error::invalid(format!("cannot start worker pool: {e}")))
}

/// All classes of dimension `k + 1` containing one of `parents`, in
/// increasing length and key order.
pub fn classify_step(parents: &[CodeRecord], campaign: &Campaign) -> Result<Vec<CodeRecord>> {
    let mut ordered: Vec<&CodeRecord> = parents.iter().collect();
    ordered.sort_by(|a, b| (a.n, &a.key.bytes).cmp(&(b.n, &b.key.bytes)));
    let pool = pool(campaign.jobs)?;
    let per_parent: Vec<Result<BTreeMap<Vec<u8>, CodeRecord>>> =
        pool.install(|| ordered.par_iter().map(|p| children_of(p, campaign)).collect());

    // bucket by (n, enumerator) first, then by canonical key
    let mut buckets: BTreeMap<(usize, Vec<u64>), BTreeMap<Vec<u8>, CodeRecord>> = BTreeMap::new();
    for found in per_parent {
        for (key, rec) in found? {
            let bucket = buckets.entry((rec.n, rec.enumerator.coeffs().to_vec())).or_default();
            bucket.entry(key).or_insert(rec);
        }
    }
    let mut out: Vec<CodeRecord> = buckets.into_values().flat_map(BTreeMap::into_values).collect();
    out.sort_by(|a, b| (a.n, &a.key.bytes).cmp(&(b.n, &b.key.bytes)));
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct Classification {
    pub counts: CountsTable,
    /// Records by dimension, index `k - 1`.
    pub levels: Vec<Vec<CodeRecord>>,
}

pub fn run(campaign: &Campaign) -> Result<Classification> {
    campaign.validate()?;
    let mut levels = vec![initial_records(campaign)];
    while levels.len() < campaign.kmax {
        let next = classify_step(levels.last().expect("nonempty"), campaign)?;
        if next.is_empty() {
            break;
        }
        levels.push(next);
    }
    let mut counts = CountsTable::default();
    for rec in levels.iter().flatten() {
        counts.add(rec.n, rec.k());
    }
    let result = Classification { counts, levels };
    if let Some(dir) = &campaign.out {
        write_outputs(dir, campaign, &result)?;
    }
    Ok(result)
}

pub const DB_FILE: &str = "codes.db";
pub const CSV_FILE: &str = "counts.csv";
pub const GRID_FILE: &str = "counts.txt";

fn write_file(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).map_err(|e| Error::io(path, e))
}

pub fn write_outputs(dir: &Path, campaign: &Campaign, result: &Classification) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let records: Vec<&CodeRecord> = result.levels.iter().flatten().collect();
    write_database(&dir.join(DB_FILE), campaign, &records)?;
    write_file(&dir.join(CSV_FILE), &result.counts.to_csv())?;
    write_file(&dir.join(GRID_FILE), &result.counts.grid())
}

pub fn write_database(path: &Path, campaign: &Campaign, records: &[&CodeRecord]) -> Result<()> {
    let mut s = campaign.header();
    s.push('\n');
    for rec in records {
        s.push('\n');
        s.push_str(&rec.to_text());
    }
    write_file(path, &s)
}

#[derive(Clone, Debug, Default)]
pub struct DbReport {
    pub records: usize,
    pub counts: CountsTable,
    pub violations: Vec<String>,
}

impl DbReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for DbReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} records, {} violations", self.records, self.violations.len())?;
        for v in &self.violations {
            writeln!(f, "  {v}")?;
        }
        Ok(())
    }
}

struct RawRecord {
    line: usize,
    meta: BTreeMap<String, String>,
    enumerator: String,
    rows: String,
}

fn parse_meta(line: &str, lineno: usize) -> Result<BTreeMap<String, String>> {
    line.split_whitespace()
        .skip(1)
        .map(|tok| {
            tok.split_once('=')
                .map(|(a, b)| (a.to_string(), b.to_string()))
                .ok_or_else(|| Error::Parse { line: lineno, msg: format!("bad token {tok:?}") })
        })
        .collect()
}

/// Re-checks every record of a database file written by [`run`].
pub fn verify_database(path: &Path) -> Result<DbReport> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim()));
    let (hl, header) = lines
        .by_ref()
        .find(|(_, l)| !l.is_empty())
        .ok_or_else(|| Error::Parse { line: 1, msg: "empty database".into() })?;
    if !header.starts_with("campaign ") {
        return Err(Error::Parse { line: hl, msg: "missing campaign header".into() });
    }
    let hm = parse_meta(header, hl)?;
    let num = |m: &BTreeMap<String, String>, key: &str, line: usize| -> Result<usize> {
        m.get(key)
            .and_then(|v| v.parse().ok())
            .ok_or_else(|| Error::Parse { line, msg: format!("missing or bad {key}") })
    };
    let mut campaign = Campaign::new(num(&hm, "delta", hl)?, num(&hm, "dmin", hl)?, MAX_K, MAX_N);
    if let Some(ws) = hm.get("weights") {
        let parsed: std::result::Result<Vec<usize>, _> = ws.split(',').map(str::parse).collect();
        campaign.weights =
            Some(parsed.map_err(|_| Error::Parse { line: hl, msg: "bad weights".into() })?.into_iter().collect());
    }

    let mut raws: Vec<RawRecord> = Vec::new();
    for (i, l) in lines {
        if l.is_empty() || l.starts_with('#') {
            continue;
        }
        if l.starts_with("record ") {
            raws.push(RawRecord { line: i, meta: parse_meta(l, i)?, enumerator: String::new(), rows: String::new() });
            continue;
        }
        let raw = raws.last_mut().ok_or_else(|| Error::Parse { line: i, msg: "data before first record".into() })?;
        if let Some(w) = l.strip_prefix("W=") {
            raw.enumerator = w.to_string();
        } else {
            raw.rows.push_str(l);
            raw.rows.push('\n');
        }
    }

    let mut report = DbReport { records: raws.len(), ..Default::default() };
    let mut seen: BTreeSet<String> = BTreeSet::new();
    for raw in &raws {
        let at = format!("record at line {}", raw.line);
        let code = match BinaryCode::parse(&raw.rows) {
            Ok(c) => c,
            Err(e) => {
                report.violations.push(format!("{at}: {e}"));
                continue;
            }
        };
        let n = num(&raw.meta, "n", raw.line)?;
        let k = num(&raw.meta, "k", raw.line)?;
        let key = raw.meta.get("key").cloned().unwrap_or_default();
        let aut = raw.meta.get("aut").cloned().unwrap_or_default();
        let mut bad = |msg: String| report.violations.push(format!("{at}: {msg}"));
        let w = code.weight_enumerator();
        if code.k() != k {
            bad(format!("rank {} but k={k}", code.k()));
        }
        if code.effective_length() != n {
            bad(format!("effective length {} but n={n}", code.effective_length()));
        }
        if w.to_string() != raw.enumerator {
            bad(format!("enumerator {w} differs from stored {}", raw.enumerator));
        }
        if !campaign.admits(&w) {
            bad(format!("weights {w} violate the campaign"));
        }
        let can = canon::canonical_form(&code.effective());
        if can.hex() != key {
            bad("canonical key is not stable".into());
        }
        if can.aut_order.to_string() != aut {
            bad(format!("automorphism order {} but aut={aut}", can.aut_order));
        }
        if !seen.insert(can.hex()) {
            bad("isomorphic to an earlier record".into());
        }
        report.counts.add(code.effective_length(), code.k());
    }
    Ok(report)
}
