use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::PathBuf;

use divcode::canon::canonical_form;
use divcode::classify::{self, verify_database, write_database, Campaign, CodeRecord, CSV_FILE, DB_FILE, GRID_FILE};
use divcode::gf2core::rank;
use divcode::{golden, BinaryCode};

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("divcode-{}-{name}", std::process::id()));
    let _ = fs::remove_dir_all(&dir);
    dir
}

/// Class counts by `(n, k)` from every multiset of points in GF(2)^k, k <= 3.
fn brute_counts(delta: usize, dmin: usize, nmax: usize) -> BTreeMap<(usize, usize), usize> {
    let mut keys: BTreeMap<(usize, usize), BTreeSet<Vec<u8>>> = BTreeMap::new();
    for k in 1..=3usize {
        let types = (1usize << k) - 1;
        let mut counts = vec![0usize; types];
        fn rec(i: usize, left: usize, counts: &mut Vec<usize>, emit: &mut dyn FnMut(&[usize])) {
            if i == counts.len() {
                emit(counts);
                return;
            }
            for c in 0..=left {
                counts[i] = c;
                rec(i + 1, left - c, counts, emit);
            }
            counts[i] = 0;
        }
        let mut emit = |c: &[usize]| {
            let cols: Vec<u16> =
                c.iter().enumerate().flat_map(|(u, &m)| std::iter::repeat_n(u as u16 + 1, m)).collect();
            if cols.is_empty() || rank(&cols.iter().map(|&x| x as u128).collect::<Vec<_>>()) < k {
                return;
            }
            let ok = (1u16..(1 << k)).all(|g| {
                let w = cols.iter().filter(|&&u| (u & g).count_ones() % 2 == 1).count();
                w % delta == 0 && w >= dmin
            });
            if ok {
                let code = BinaryCode::from_columns(k, &cols).unwrap();
                keys.entry((cols.len(), k)).or_default().insert(canonical_form(&code).bytes);
            }
        };
        rec(0, nmax, &mut counts, &mut emit);
    }
    keys.into_iter().map(|(nk, s)| (nk, s.len())).collect()
}

fn campaign_counts(c: &Campaign) -> BTreeMap<(usize, usize), usize> {
    let out = classify::run(c).unwrap();
    out.counts.cells().filter(|&(_, v)| v > 0).collect()
}

#[test]
fn small_campaigns_match_exhaustive_search() {
    for (delta, dmin, nmax) in [(2, 2, 10), (4, 4, 14), (4, 8, 16), (8, 8, 20)] {
        let want = brute_counts(delta, dmin, nmax);
        let got = campaign_counts(&Campaign::new(delta, dmin, 3, nmax));
        assert_eq!(got, want, "delta={delta} dmin={dmin} nmax={nmax}");
    }
}

#[test]
fn first_rows_of_the_triply_even_table() {
    let out = classify::run(&Campaign::new(8, 24, 4, 48)).unwrap();
    let row = |k: usize| -> Vec<(usize, usize)> { out.counts.row(k).into_iter().filter(|&(_, c)| c > 0).collect() };
    assert_eq!(row(1), vec![(24, 1), (32, 1), (40, 1), (48, 1)]);
    assert_eq!(row(2), vec![(36, 1), (40, 1), (44, 2), (48, 3)]);
    assert_eq!(row(4), vec![(45, 1), (46, 1), (47, 2), (48, 4)]);
    let restricted = classify::run(&Campaign::new(8, 24, 2, 48).with_weights([24, 32, 40])).unwrap();
    let row2: Vec<(usize, usize)> = restricted.counts.row(2).into_iter().filter(|&(_, c)| c > 0).collect();
    assert_eq!(row2, vec![(36, 1), (40, 1), (44, 2), (48, 2)]);
}

#[test]
fn job_count_does_not_change_the_output() {
    let a = scratch("jobs1");
    let b = scratch("jobs3");
    classify::run(&Campaign::new(8, 24, 5, 50).with_jobs(1).with_out(&a)).unwrap();
    classify::run(&Campaign::new(8, 24, 5, 50).with_jobs(3).with_out(&b)).unwrap();
    for f in [DB_FILE, CSV_FILE, GRID_FILE] {
        assert_eq!(fs::read(a.join(f)).unwrap(), fs::read(b.join(f)).unwrap(), "{f}");
    }
    let _ = fs::remove_dir_all(&a);
    let _ = fs::remove_dir_all(&b);
}

#[test]
fn written_database_verifies_and_tampering_is_caught() {
    let dir = scratch("tamper");
    let c = Campaign::new(4, 8, 4, 20).with_out(&dir);
    let out = classify::run(&c).unwrap();
    let db = dir.join(DB_FILE);
    let report = verify_database(&db).unwrap();
    assert!(report.is_clean(), "{report}");
    assert_eq!(report.counts, out.counts);

    let text = fs::read_to_string(&db).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    let row_lines: Vec<usize> = (0..lines.len())
        .filter(|&i| !lines[i].is_empty() && lines[i].bytes().all(|b| b == b'0' || b == b'1'))
        .collect();
    assert!(row_lines.len() > 10);
    for (t, &i) in row_lines.iter().enumerate().step_by(5) {
        let mut bytes = lines[i].as_bytes().to_vec();
        let j = t % bytes.len();
        bytes[j] = if bytes[j] == b'0' { b'1' } else { b'0' };
        let mut changed: Vec<String> = lines.iter().map(|s| s.to_string()).collect();
        changed[i] = String::from_utf8(bytes).unwrap();
        let path = dir.join("flipped.db");
        fs::write(&path, changed.join("\n")).unwrap();
        let r = verify_database(&path).unwrap();
        assert!(!r.is_clean(), "flip at line {} went unnoticed", i + 1);
    }

    // a record repeated verbatim
    let first = text.find("record ").unwrap();
    let second = text[first + 1..].find("record ").map_or(text.len(), |p| p + first + 1);
    let doubled = format!("{}\n{}", text, &text[first..second]);
    let path = dir.join("doubled.db");
    fs::write(&path, doubled).unwrap();
    assert!(!verify_database(&path).unwrap().is_clean());
    let _ = fs::remove_dir_all(&dir);
}

#[test]
fn corpus_database_reproduces_the_optimal_counts() {
    let dir = scratch("golden");
    fs::create_dir_all(&dir).unwrap();
    let entries = golden::corpus();
    let records: Vec<CodeRecord> =
        entries.iter().filter(|e| e.label.starts_with("opt-")).map(|e| CodeRecord::from_code(&e.code)).collect();
    let refs: Vec<&CodeRecord> = records.iter().collect();
    let path = dir.join(DB_FILE);
    write_database(&path, &Campaign::new(8, 24, 9, 56), &refs).unwrap();
    let report = verify_database(&path).unwrap();
    assert!(report.is_clean(), "{report}");
    let got: BTreeMap<(usize, usize), usize> = report.counts.cells().collect();
    assert_eq!(got, golden::expected_optimal_counts());
    for e in entries.iter().filter(|e| e.label.starts_with("opt-56-9-")) {
        assert_eq!(e.code.weight_enumerator().get(56), 1, "{}", e.label);
    }
    let _ = fs::remove_dir_all(&dir);
}

#[test]
fn invalid_campaigns_are_rejected() {
    assert!(classify::run(&Campaign::new(8, 20, 3, 48)).is_err());
    assert!(classify::run(&Campaign::new(0, 8, 3, 48)).is_err());
}
