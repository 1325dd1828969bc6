// SPDX-License-Identifier: Apache-2.0
//! The `isw` command-line tool. [`run`] returns the exit code and the report
//! text so that tests can compare both without spawning a process.
//!
//! Exit codes: 0 success, 1 a checked property fails, 2 input error,
//! 3 a size limit was hit.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::appmap::apply_map;
use crate::classic::{ais_from_isw, cis_from_isw, isw_from_ais, isw_from_cis};
use crate::constructions::product;
use crate::domconv::{isw_from_poset, roundtrip_check};
use crate::error::{Error, Result};
use crate::finposet::{find_iso, FinPoset, LDomainFailure};
use crate::format::{self, Document};
use crate::frames::{frame_to_isw, isw_to_frame};
use crate::system::{Condition, Isw};

#[derive(Debug, Parser)]
#[command(name = "isw", version, about = "Check and convert information systems with witnesses")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Target {
    Isw,
    Frame,
    Cis,
    Ais,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check the axioms of any document.
    Validate {
        file: PathBuf,
        /// For ais files, also report the literal printed form of axiom 5.
        #[arg(long)]
        strict_printed: bool,
    },
    /// Check the side conditions; all four when no flag is given.
    Check {
        file: PathBuf,
        #[arg(long)]
        bc: bool,
        #[arg(long)]
        alg: bool,
        #[arg(long)]
        salg: bool,
        #[arg(long)]
        algplus: bool,
    },
    /// List the states (points, for cis and ais files).
    States {
        file: PathBuf,
        /// Use the brute-force subset filter.
        #[arg(long)]
        oracle: bool,
    },
    /// Print the state poset, or a poset file, with its order properties.
    Domain { file: PathBuf },
    /// Search for an order-isomorphism between two domains.
    Iso { first: PathBuf, second: PathBuf },
    /// Translate a document into another representation.
    Convert {
        file: PathBuf,
        #[arg(long, value_enum)]
        to: Target,
    },
    /// Product of two systems.
    Product { first: PathBuf, second: PathBuf },
    /// Composite of two mappings, first one applied first.
    Compose { first: PathBuf, second: PathBuf },
    /// Image of a state under a mapping.
    Apply {
        map: PathBuf,
        #[arg(long)]
        state: String,
    },
    /// Check that a finite L-domain is recovered from its system.
    Roundtrip { file: PathBuf },
    /// Hasse diagram of a poset or state poset in DOT.
    ExportDot { file: PathBuf },
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::SizeLimitExceeded { .. } => 3,
        Error::InvalidSystem(_)
        | Error::InvalidFrame(_)
        | Error::InvalidMap(_)
        | Error::NotLDomain(_)
        | Error::NoLocalLub { .. }
        | Error::BcViolated(_)
        | Error::AlgPlusViolated(_)
        | Error::NotMonotone(_)
        | Error::IsoCheckFailed(_) => 1,
        _ => 2,
    }
}

/// Runs the tool on `argv` (including the program name).
pub fn run<I, T>(argv: I) -> (i32, String)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            return (code, e.to_string());
        }
    };
    match execute(cli.command) {
        Ok((ok, text)) => (if ok { 0 } else { 1 }, text),
        Err(e) => (exit_code(&e), format!("error: {e}\n")),
    }
}

type Outcome = Result<(bool, String)>;

fn execute(cmd: Command) -> Outcome {
    match cmd {
        Command::Validate { file, strict_printed } => validate(&file, strict_printed),
        Command::Check {
            file,
            bc,
            alg,
            salg,
            algplus,
        } => {
            let picked: Vec<Condition> = [bc, alg, salg, algplus]
                .into_iter()
                .zip(Condition::ALL)
                .filter_map(|(on, c)| on.then_some(c))
                .collect();
            let which = if picked.is_empty() { Condition::ALL.to_vec() } else { picked };
            check(&file, &which)
        }
        Command::States { file, oracle } => states(&file, oracle),
        Command::Domain { file } => domain(&file),
        Command::Iso { first, second } => iso(&first, &second),
        Command::Convert { file, to } => convert(&file, to),
        Command::Product { first, second } => {
            let p = product(&system(&first)?, &system(&second)?)?;
            Ok((true, format::write_isw(&p.product)))
        }
        Command::Compose { first, second } => {
            let h = format::load_map(&first)?;
            let g = format::load_map(&second)?;
            h.map.require_valid()?;
            g.map.require_valid()?;
            let hg = h.map.then(&g.map)?;
            Ok((true, format::write_map(&hg, &display(&h.source_path), &display(&g.target_path))))
        }
        Command::Apply { map, state } => {
            let h = format::load_map(&map)?.map;
            h.require_valid()?;
            let x = format::parse_state(h.source().tokens(), &state)?;
            let y = apply_map(&h, x)?;
            Ok((true, format!("{}\n", format::format_state(h.target().tokens(), y))))
        }
        Command::Roundtrip { file } => roundtrip(&file),
        Command::ExportDot { file } => {
            let p = domain_of(&format::load(&file)?)?;
            Ok((true, format::write_dot(&p)))
        }
    }
}

fn display(p: &Path) -> String {
    p.display().to_string()
}

/// The system a document denotes; posets go through `I(D)`.
fn to_system(doc: &Document) -> Result<Isw> {
    match doc {
        Document::Isw(s) => Ok(s.clone()),
        Document::Frame(f) => frame_to_isw(f),
        Document::Cis(c) => isw_from_cis(c),
        Document::Ais(a) => isw_from_ais(a),
        Document::Poset(d) => isw_from_poset(d),
        Document::Map(_) => Err(Error::KindMismatch {
            expected: "a system".into(),
            found: "map".into(),
        }),
    }
}

fn system(path: &Path) -> Result<Isw> {
    to_system(&format::load(path)?)
}

/// The domain a document denotes: the poset itself, the point poset of a
/// witness-free system, or the state poset of a system.
fn domain_of(doc: &Document) -> Result<FinPoset> {
    match doc {
        Document::Poset(p) => Ok(p.clone()),
        Document::Cis(c) => c.point_poset(),
        Document::Ais(a) => a.point_poset(),
        other => Ok(to_system(other)?.state_poset()?.poset),
    }
}

fn validate(path: &Path, strict: bool) -> Outcome {
    Ok(match format::load(path)? {
        Document::Isw(s) => {
            let r = s.validate()?;
            (r.is_valid(), r.render(&s))
        }
        Document::Frame(f) => {
            let r = f.validate()?;
            (r.is_valid(), r.render(&f))
        }
        Document::Cis(c) => {
            let r = c.validate()?;
            (r.is_valid(), c.render_report(&r))
        }
        Document::Ais(a) => {
            let r = a.validate(strict)?;
            (r.is_valid(), a.render_report(&r))
        }
        Document::Map(h) => {
            let r = h.validate();
            (r.is_valid(), r.render(&h))
        }
        Document::Poset(p) => {
            let mut out = format!("poset with {} elements\n", p.len());
            out.push_str(&render_analysis(&p));
            (true, out)
        }
    })
}

fn check(path: &Path, which: &[Condition]) -> Outcome {
    let s = system(path)?;
    let mut ok = true;
    let mut out = String::new();
    for &c in which {
        let r = s.check_condition(c)?;
        ok &= r.holds();
        out.push_str(&r.render(&s));
    }
    Ok((ok, out))
}

fn states(path: &Path, oracle: bool) -> Outcome {
    let doc = format::load(path)?;
    let (tokens, list) = match &doc {
        Document::Cis(c) => (c.tokens().to_vec(), c.points()?),
        Document::Ais(a) => (a.tokens().to_vec(), a.points()?),
        other => {
            let s = to_system(other)?;
            s.require_valid()?;
            let list = if oracle { s.enumerate_states_oracle()? } else { s.enumerate_states() };
            (s.tokens().to_vec(), list)
        }
    };
    let mut out = String::new();
    for x in list {
        let _ = writeln!(out, "{}", format::format_state(&tokens, x));
    }
    Ok((true, out))
}

fn render_analysis(p: &FinPoset) -> String {
    let r = p.analyze();
    let mut out = String::new();
    match r.bottom {
        Some(b) => {
            let _ = writeln!(out, "bottom: {}", p.name(b));
        }
        None => out.push_str("bottom: none\n"),
    }
    match r.bc_counterexample {
        None => out.push_str("bounded-complete: yes\n"),
        Some((x, y)) => {
            let _ = writeln!(
                out,
                "bounded-complete: no ({} and {} are bounded without a least upper bound)",
                p.name(x),
                p.name(y)
            );
        }
    }
    match r.l_domain_counterexample {
        None => out.push_str("L-domain: yes\n"),
        Some(LDomainFailure::NotPointed) => out.push_str("L-domain: no (no least element)\n"),
        Some(LDomainFailure::NoLocalLub { z, x, y }) => {
            let _ = writeln!(
                out,
                "L-domain: no ({} and {} have no least upper bound below {})",
                p.name(x),
                p.name(y),
                p.name(z)
            );
        }
    }
    let compacts: Vec<&str> = r.compacts.iter().map(|&c| p.name(c)).collect();
    let _ = writeln!(out, "compact: {}", compacts.join(" "));
    out
}

fn domain(path: &Path) -> Outcome {
    let p = domain_of(&format::load(path)?)?;
    let mut out = String::new();
    let _ = writeln!(out, "elements ({}):", p.len());
    for x in p.elems() {
        let _ = writeln!(out, "  {}", p.name(x));
    }
    out.push_str("covers:\n");
    for (a, b) in p.covers() {
        let _ = writeln!(out, "  {} < {}", p.name(a), p.name(b));
    }
    out.push_str(&render_analysis(&p));
    Ok((p.analyze().l_domain(), out))
}

fn iso(first: &Path, second: &Path) -> Outcome {
    let p = domain_of(&format::load(first)?)?;
    let q = domain_of(&format::load(second)?)?;
    Ok(match find_iso(&p, &q)? {
        None => (false, "none\n".into()),
        Some(f) => {
            let mut out = String::new();
            for x in p.elems() {
                let _ = writeln!(out, "{} ↦ {}", p.name(x), q.name(f[x]));
            }
            (true, out)
        }
    })
}

fn convert(path: &Path, to: Target) -> Outcome {
    let doc = format::load(path)?;
    let out = match (&doc, to) {
        (Document::Cis(c), Target::Cis) => format::write_cis(c),
        (Document::Ais(a), Target::Ais) => format::write_ais(a),
        (Document::Ais(a), Target::Cis) => format::write_cis(&a.as_cis()),
        (Document::Frame(f), Target::Frame) => format::write_frame(f),
        _ => {
            let s = to_system(&doc)?;
            match to {
                Target::Isw => format::write_isw(&s),
                Target::Frame => format::write_frame(&isw_to_frame(&s)?),
                Target::Cis => format::write_cis(&cis_from_isw(&s)?),
                Target::Ais => format::write_ais(&ais_from_isw(&s)?),
            }
        }
    };
    Ok((true, out))
}

fn roundtrip(path: &Path) -> Outcome {
    let d = match format::load(path)? {
        Document::Poset(d) => d,
        other => {
            return Err(Error::KindMismatch {
                expected: "poset".into(),
                found: other.kind().into(),
            })
        }
    };
    let r = roundtrip_check(&d)?;
    let s = &r.bridge.system;
    let mut out = format!(
        "I(D): {} tokens, {} consistent pairs, {} entailments\n",
        s.len(),
        s.con_len(),
        s.ent_len()
    );
    out.push_str("st:\n");
    for x in d.elems() {
        let _ = writeln!(out, "  {} ↦ {}", d.name(x), r.state_poset.poset.name(r.iso[x]));
    }
    let yn = |b: bool| if b { "yes" } else { "no" };
    let _ = writeln!(out, "order-isomorphism: yes");
    let _ = writeln!(out, "bounded-complete: {}", yn(r.bounded_complete));
    let _ = writeln!(out, "BC: {}", if r.bc_condition { "holds" } else { "fails" });
    let _ = writeln!(out, "ALG: {}", if r.alg { "holds" } else { "fails" });
    Ok((true, out))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn usage_errors_exit_2() {
        let (code, _) = run(["isw", "frobnicate"]);
        assert_eq!(code, 2);
        let (code, _) = run(["isw", "validate", "/nonexistent/x.isw"]);
        assert_eq!(code, 2);
        let (code, _) = run(["isw", "--help"]);
        assert_eq!(code, 0);
    }

    #[test]
    fn exit_codes_by_error() {
        assert_eq!(exit_code(&Error::size("x", 2, 1)), 3);
        assert_eq!(exit_code(&Error::BcViolated(String::new())), 1);
        assert_eq!(exit_code(&Error::Parse { line: 1, msg: String::new() }), 2);
    }
}
