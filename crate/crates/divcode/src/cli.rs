//! Command line front end: argument parsing and report rendering.

use std::collections::BTreeSet;
use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Duration;

use clap::{Parser, Subcommand};

use crate::classify::{self, Campaign};
use crate::extend::{enumerate_extensions, realize, ExtensionProblem};
use crate::{canon, divlen, extcode, golden, spectra};
use crate::{BinaryCode, Error, Result};

#[derive(Parser, Debug)]
#[command(name = "divcode", version, about = "Classification tools for divisible binary linear codes")]
pub struct CliConfig {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Weight enumerator of a generator matrix
    Wenum {
        file: PathBuf,
        /// Also print the dual weight distribution
        #[arg(long)]
        dual: bool,
        /// Also print the residuals of the first four power moments
        #[arg(long)]
        moments: bool,
    },
    /// Canonical key, automorphism group order and canonical matrix
    Canon { file: PathBuf },
    /// Whether a q^r-divisible code of effective length n exists
    Feasible {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        r: u32,
        #[arg(long)]
        n: u64,
    },
    /// All one-dimensional extensions of a code to a given effective length
    Extend {
        file: PathBuf,
        /// Effective length of the children
        #[arg(long)]
        length: usize,
        #[arg(long, default_value_t = 1)]
        delta: usize,
        /// Smallest allowed nonzero weight
        #[arg(long)]
        min_weight: usize,
        /// Largest allowed weight [default: the child length]
        #[arg(long)]
        max_weight: Option<usize>,
        /// Explicit list of allowed nonzero weights
        #[arg(long, value_delimiter = ',')]
        weights: Option<Vec<usize>>,
        /// Only children whose points all have multiplicity at least the length increase
        #[arg(long)]
        min_mult: bool,
    },
    /// Classify codes dimension by dimension
    Classify {
        #[arg(long)]
        delta: usize,
        #[arg(long)]
        dmin: usize,
        #[arg(long, value_delimiter = ',')]
        weights: Option<Vec<usize>>,
        #[arg(long)]
        kmax: usize,
        #[arg(long)]
        nmax: usize,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// Directory for the database and count tables
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Re-check every record of a code database
    VerifyDb { path: PathBuf },
    /// Search for an extension row with the 0/1 program
    Extcode {
        #[arg(long)]
        code: PathBuf,
        #[arg(long)]
        gamma: usize,
        #[arg(long)]
        lambda: usize,
        #[arg(long)]
        delta: usize,
        /// Force the selectors of codewords of weight 24 or 40 to one
        #[arg(long)]
        forbid_16: bool,
        /// Require every weight-4 dual word to meet the row in 0 or 2 places
        #[arg(long)]
        quad_cuts: bool,
        /// Require every weight-4 dual word to meet the row evenly
        #[arg(long)]
        quad_parity: bool,
        /// Require the row to be orthogonal to the code
        #[arg(long)]
        parity_cuts: bool,
        #[arg(long, default_value_t = 600)]
        budget: u64,
    },
    /// Check the built-in corpus of published codes
    Golden {
        /// Skip automorphism group orders
        #[arg(long)]
        no_aut: bool,
    },
}

/// Parses `args` (program name first) and runs the command; returns the exit code.
pub fn execute<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cfg = match CliConfig::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            if code == 0 {
                let _ = out.write_all(text.as_bytes());
            } else {
                let _ = err.write_all(text.as_bytes());
            }
            return code;
        }
    };
    match dispatch(cfg.command, out) {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            1
        }
    }
}

fn read_code(path: &Path) -> Result<BinaryCode> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    BinaryCode::parse(&text)
}

fn put(out: &mut dyn Write, s: impl AsRef<str>) -> Result<()> {
    out.write_all(s.as_ref().as_bytes()).map_err(|e| Error::io("<stdout>", e))
}

/// Runs one command; `Ok(false)` signals a negative verdict.
fn dispatch(cmd: Command, out: &mut dyn Write) -> Result<bool> {
    match cmd {
        Command::Wenum { file, dual, moments } => {
            let code = read_code(&file)?.effective();
            let w = code.weight_enumerator();
            put(out, format!("{w}\n"))?;
            if dual {
                let d = spectra::macwilliams_dual(&w, code.n(), code.k())?;
                put(out, format!("dual: {d}\n"))?;
            }
            if moments {
                let low = code.dual_low_terms(3)?;
                let r = spectra::power_moment_residuals(&w, code.n(), code.k(), low[1], low[2]);
                put(out, format!("moment residuals: {r}\n"))?;
            }
            Ok(true)
        }
        Command::Canon { file } => {
            let can = canon::canonize(&read_code(&file)?);
            put(out, format!("key={}\naut={}\n{}", can.key.hex(), can.key.aut_order, can.code.to_text(false)))?;
            Ok(true)
        }
        Command::Feasible { q, r, n } => {
            if q < 2 {
                return Err(Error::invalid("q must be at least 2"));
            }
            let e = divlen::sadic_expansion(n as i128, q, r);
            let verdict = if e.leading() >= 0 { "feasible" } else { "infeasible" };
            put(out, format!("{verdict}, expansion {e}\n"))?;
            Ok(true)
        }
        Command::Extend { file, length, delta, min_weight, max_weight, weights, min_mult } => {
            let parent = read_code(&file)?.effective().systematic_form().0;
            if delta == 0 {
                return Err(Error::invalid("delta must be positive"));
            }
            let b = max_weight.unwrap_or(length) / delta;
            let mut p = ExtensionProblem::new(parent.clone(), length, delta, min_weight.div_ceil(delta), b)
                .with_min_multiplicity(min_mult);
            if let Some(ws) = weights {
                p = p.with_weights(ws.into_iter().collect::<BTreeSet<_>>());
            }
            let mut count = 0;
            for sol in enumerate_extensions(&p)? {
                let child = realize(&parent, &sol)?;
                count += 1;
                put(out, format!("# child {count} W={}\n{}\n", child.weight_enumerator(), child.to_text(false)))?;
            }
            put(out, format!("# {count} children\n"))?;
            Ok(true)
        }
        Command::Classify { delta, dmin, weights, kmax, nmax, jobs, out: dir } => {
            let mut c = Campaign::new(delta, dmin, kmax, nmax).with_jobs(jobs);
            if let Some(ws) = weights {
                c = c.with_weights(ws);
            }
            if let Some(d) = dir {
                c = c.with_out(d);
            }
            let result = classify::run(&c)?;
            put(out, result.counts.to_csv())?;
            put(out, "\n")?;
            put(out, result.counts.grid())?;
            Ok(true)
        }
        Command::VerifyDb { path } => {
            let report = classify::verify_database(&path)?;
            put(out, report.to_string())?;
            put(out, report.counts.grid())?;
            Ok(report.is_clean())
        }
        Command::Extcode { code, gamma, lambda, delta, forbid_16, quad_cuts, quad_parity, parity_cuts, budget } => {
            let k = read_code(&code)?;
            let forced = if forbid_16 { extcode::force_by_weight(&k, &[24, 40]) } else { Vec::new() };
            let mut inst = extcode::build_ilp(&k, gamma, lambda, delta, &forced, &[])?;
            if quad_cuts {
                inst.add_quad_cuts(&extcode::dual_quads(&k))?;
            }
            if quad_parity {
                inst.add_quad_parity_cuts(&extcode::dual_quads(&k))?;
            }
            if parity_cuts {
                inst.add_parity_cuts(&k)?;
            }
            let mut verdict = None;
            let outcome = extcode::solve_with(&inst, Duration::from_secs(budget), |a| {
                let row = extcode::row_from_assignment(&inst, a);
                match extcode::verify_extension_row(&k, row, delta) {
                    Ok(v) if v.passes_with_cap(lambda) => {
                        verdict = Some((row, v));
                        true
                    }
                    _ => false,
                }
            });
            put(out, format!("{outcome}\n"))?;
            if let Some((row, v)) = verdict {
                let support: Vec<String> =
                    (0..k.n() + delta).filter(|&i| (row >> i) & 1 == 1).map(|i| (i + 1).to_string()).collect();
                put(out, format!("support: {{{}}}\n{v}\n", support.join(",")))?;
            }
            Ok(!matches!(outcome, extcode::SolveOutcome::Timeout))
        }
        Command::Golden { no_aut } => {
            let mut all_ok = true;
            for e in golden::corpus() {
                let chk = golden::check_entry(&e, !no_aut);
                let mut line = format!("{} [{},{}] ", e.label, e.n, e.k);
                line.push_str(if chk.passed() { "ok" } else { "FAILED" });
                if let Some((want, got)) = &chk.aut {
                    line.push_str(&format!(" aut={got} (stated {want})"));
                }
                all_ok &= chk.passed();
                put(out, line + "\n")?;
            }
            for row in golden::EXTENSION_ROWS {
                let e =
                    golden::entry(row.code).ok_or_else(|| Error::invalid(format!("no corpus entry {}", row.code)))?;
                let v = extcode::verify_extension_row(&e.code, golden::support_mask(row.support), 1)?;
                let ok = v.enumerator.to_string() == row.coset && v.passes();
                all_ok &= ok;
                put(
                    out,
                    format!("{} extension W(z)={} {}\n", row.code, v.enumerator, if ok { "ok" } else { "FAILED" }),
                )?;
            }
            Ok(all_ok)
        }
    }
}
