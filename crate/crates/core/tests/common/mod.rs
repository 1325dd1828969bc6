// SPDX-License-Identifier: Apache-2.0
//! CLI cases shared by the golden test and the acceptance suite.

#![allow(dead_code)]

use std::path::PathBuf;

pub const SYSTEMS: &[&str] = &[
    "fixtures/T.isw",
    "fixtures/IC2.isw",
    "fixtures/IM.isw",
    "fixtures/IFLAT2.isw",
    "fixtures/T.frame",
    "fixtures/IC2.frame",
    "fixtures/CIS1.cis",
    "fixtures/AIS1.ais",
];

pub const POSETS: &[&str] = &["fixtures/C2.poset", "fixtures/M.poset", "fixtures/FLAT2.poset"];

pub const MAPS: &[&str] = &[
    "fixtures/maps/id_IC2.map",
    "fixtures/maps/bang_IC2.map",
    "fixtures/maps/collapse.map",
];

fn case(args: &[&str]) -> Vec<String> {
    args.iter().map(|s| s.to_string()).collect()
}

/// Every CLI invocation with a checked-in report.
pub fn cases() -> Vec<Vec<String>> {
    let mut out = Vec::new();
    for &f in SYSTEMS {
        for cmd in ["validate", "check", "states", "domain", "export-dot"] {
            out.push(case(&[cmd, f]));
        }
        out.push(case(&["states", "--oracle", f]));
        for to in ["isw", "frame", "cis", "ais"] {
            out.push(case(&["convert", "--to", to, f]));
        }
    }
    out.push(case(&["validate", "--strict-printed", "fixtures/AIS1.ais"]));
    for c in ["--bc", "--alg", "--salg", "--algplus"] {
        out.push(case(&["check", c, "fixtures/IM.isw"]));
    }
    for &p in POSETS {
        for cmd in ["validate", "domain", "roundtrip", "export-dot"] {
            out.push(case(&[cmd, p]));
        }
        out.push(case(&["convert", "--to", "isw", p]));
    }
    for (a, b) in [
        ("fixtures/M.poset", "fixtures/IM.isw"),
        ("fixtures/C2.poset", "fixtures/FLAT2.poset"),
        ("fixtures/CIS1.cis", "fixtures/C2.poset"),
        ("fixtures/AIS1.ais", "fixtures/IC2.isw"),
        ("fixtures/IC2.frame", "fixtures/C2.poset"),
    ] {
        out.push(case(&["iso", a, b]));
    }
    for (a, b) in [
        ("fixtures/T.isw", "fixtures/T.isw"),
        ("fixtures/IC2.isw", "fixtures/T.isw"),
        ("fixtures/IC2.isw", "fixtures/IFLAT2.isw"),
    ] {
        out.push(case(&["product", a, b]));
    }
    for &m in MAPS {
        out.push(case(&["validate", m]));
    }
    out.push(case(&["compose", "fixtures/maps/collapse.map", "fixtures/maps/id_IC2.map"]));
    out.push(case(&["compose", "fixtures/maps/id_IC2.map", "fixtures/maps/bang_IC2.map"]));
    out.push(case(&["apply", "fixtures/maps/collapse.map", "--state", "{⊥,q}"]));
    out.push(case(&["apply", "fixtures/maps/id_IC2.map", "--state", "{b, t}"]));
    // error paths
    for args in [
        &["validate", "fixtures/bad/unknown_token.isw"][..],
        &["validate", "fixtures/bad/no_kind.isw"],
        &["validate", "fixtures/bad/cycle.poset"],
        &["validate", "fixtures/bad/missing.isw"],
        &["validate", "fixtures/bad/broken.isw"],
        &["validate", "fixtures/bad/broken.frame"],
        &["states", "fixtures/bad/broken.isw"],
        &["check", "fixtures/bad/broken.isw"],
        &["domain", "fixtures/bad/antichain.poset"],
        &["roundtrip", "fixtures/bad/antichain.poset"],
        &["roundtrip", "fixtures/T.isw"],
        &["convert", "--to", "isw", "fixtures/bad/chain17.poset"],
        &["apply", "fixtures/bad/bad.map", "--state", "{b}"],
        &["apply", "fixtures/maps/collapse.map", "--state", "{p}"],
        &["apply", "fixtures/maps/collapse.map", "--state", "{z}"],
        &["compose", "fixtures/maps/collapse.map", "fixtures/maps/collapse.map"],
        &["frobnicate"],
    ] {
        out.push(case(args));
    }
    out
}

/// File name of the checked-in report for a case.
pub fn golden_name(args: &[String]) -> String {
    let mut name: String = args
        .join("_")
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '-' || c == '.' { c } else { '_' })
        .collect();
    name = name.replace("fixtures_", "");
    format!("{name}.out")
}

pub fn golden_path(args: &[String]) -> PathBuf {
    PathBuf::from("tests/golden").join(golden_name(args))
}

/// The report as stored: exit code line, then the output.
pub fn render(args: &[String]) -> String {
    let argv = std::iter::once("isw".to_string()).chain(args.iter().cloned());
    let (code, text) = isw::cli::run(argv);
    format!("exit: {code}\n{text}")
}
