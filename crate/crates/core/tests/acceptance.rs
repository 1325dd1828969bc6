// SPDX-License-Identifier: Apache-2.0
//! Acceptance suite: one `[PASS]`/`[FAIL]` line per criterion, each with its
//! time limit. Expected values come from brute-force checks written here,
//! not from the library paths under test. Runs without the test harness so
//! the lines always reach the output.

mod common;

use std::path::Path;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use isw::appmap::{
    all_valid_maps, fn_from_map, identity_map, map_from_fn, monotone_functions, ApproxMap, StateFn,
    RELATION_BITS_LIMIT,
};
use isw::classic::{ais_from_isw, ais_isw_iso, cis_from_isw, cis_isw_iso, isw_from_cis};
use isw::constructions::product;
use isw::domconv::roundtrip_check;
use isw::finposet::{find_iso, FinPoset};
use isw::format::{self, Document};
use isw::gen::{random_l_domain, random_map, random_system, rng};
use isw::system::{Condition, Isw, WitnessedSet};
use isw::tokenset::TokenSet;

const SEED: u64 = 0x15_2026;

type Check = Result<(), String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Check {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn load(path: &str) -> Document {
    format::load(Path::new(path)).unwrap_or_else(|e| panic!("{path}: {e}"))
}

fn load_system(path: &str) -> Isw {
    match load(path) {
        Document::Isw(s) => s,
        Document::Frame(f) => isw::frames::frame_to_isw(&f).unwrap(),
        Document::Cis(c) => isw_from_cis(&c).unwrap(),
        Document::Ais(a) => isw::classic::isw_from_ais(&a).unwrap(),
        other => panic!("{path}: not a system ({})", other.kind()),
    }
}

// Brute-force oracles.

/// The three state conditions, read off `Con` and `⊢` directly.
fn is_state_by_definition(s: &Isw, x: TokenSet) -> bool {
    let pairs: Vec<(WitnessedSet, TokenSet)> = s.con_entries().collect();
    let inside = |p: &WitnessedSet| x.contains(p.witness) && p.body.is_subset(x);
    let witnessed = x
        .submasks()
        .all(|f| x.iter().any(|i| s.in_con(WitnessedSet::new(i, f))));
    let closed = pairs.iter().filter(|(p, _)| inside(p)).all(|(_, e)| e.is_subset(x));
    let derivable = x
        .iter()
        .all(|a| pairs.iter().any(|(p, e)| inside(p) && e.contains(a)));
    witnessed && closed && derivable
}

fn states_by_subset_filter(s: &Isw) -> Vec<TokenSet> {
    let mut out: Vec<TokenSet> = s
        .all_tokens()
        .submasks()
        .filter(|&x| is_state_by_definition(s, x))
        .collect();
    out.sort();
    out
}

fn least_by_inclusion(cands: &[TokenSet]) -> Option<TokenSet> {
    cands
        .iter()
        .copied()
        .find(|&c| cands.iter().all(|&d| c.is_subset(d)))
}

/// Every pair with an upper bound has a least one.
fn bounded_complete_by_search(p: &FinPoset) -> bool {
    p.elems().all(|x| {
        p.elems().all(|y| {
            let ubs: Vec<usize> = p.elems().filter(|&u| p.leq(x, u) && p.leq(y, u)).collect();
            ubs.is_empty() || ubs.iter().any(|&u| ubs.iter().all(|&v| p.leq(u, v)))
        })
    })
}

fn monotone_count_by_search(n: usize, m: usize, leq_p: impl Fn(usize, usize) -> bool, leq_q: impl Fn(usize, usize) -> bool) -> usize {
    let total = m.pow(n as u32);
    (0..total)
        .filter(|&code| {
            let f: Vec<usize> = (0..n).map(|k| code / m.pow(k as u32) % m).collect();
            (0..n).all(|a| (0..n).all(|b| !leq_p(a, b) || leq_q(f[a], f[b])))
        })
        .count()
}

// Criteria.

fn one_point_system() -> Check {
    let t = load_system("fixtures/T.isw");
    let r = t.validate().map_err(|e| e.to_string())?;
    ensure(r.passed() == 10, || format!("{}/10 axioms", r.passed()))?;
    let delta = TokenSet::singleton(t.delta());
    ensure(t.enumerate_states() == vec![delta], || "states differ from {{Δ}}".into())?;
    ensure(states_by_subset_filter(&t) == vec![delta], || "oracle disagrees".into())?;
    for c in [Condition::Bc, Condition::Alg, Condition::AlgPlus] {
        ensure(t.satisfies(c), || format!("{c} fails"))?;
    }
    Ok(())
}

fn random_systems(count: usize, max: usize, seed: u64) -> Vec<Isw> {
    let mut r = rng(seed);
    (0..count).map(|_| random_system(&mut r, max)).collect()
}

fn state_posets_are_l_domains(systems: &[Isw]) -> Check {
    for (k, s) in systems.iter().enumerate() {
        let sp = s.state_poset().map_err(|e| format!("system {k}: {e}"))?;
        let report = sp.poset.analyze();
        let bottom = s
            .principal_state(WitnessedSet::new(s.delta(), TokenSet::EMPTY))
            .map_err(|e| e.to_string())?;
        ensure(report.l_domain() && report.pointed(), || format!("system {k}: not a pointed L-domain"))?;
        let least = least_by_inclusion(&sp.states);
        ensure(least == Some(bottom) && sp.states[sp.bottom] == bottom, || {
            format!("system {k}: bottom is not [∅]_Δ")
        })?;
    }
    Ok(())
}

fn oracle_equivalence(fixtures: &[Isw], randoms: &[Isw]) -> Check {
    for (k, s) in fixtures.iter().chain(randoms).enumerate() {
        let fast = s.enumerate_states();
        let lib_oracle = s.enumerate_states_oracle().map_err(|e| e.to_string())?;
        let brute = states_by_subset_filter(s);
        ensure(fast == brute && lib_oracle == brute, || format!("system {k}: state sets differ"))?;
    }
    Ok(())
}

fn approximation_is_way_below(systems: &[Isw]) -> Check {
    for (k, s) in systems.iter().enumerate() {
        let sp = s.state_poset().map_err(|e| e.to_string())?;
        let wb = sp.poset.way_below();
        for (a, &x) in sp.states.iter().enumerate() {
            for (b, &y) in sp.states.iter().enumerate() {
                let approx = s.approx(x, y).map_err(|e| e.to_string())?;
                // in a finite poset every element is compact
                let expected = x.is_subset(y);
                ensure(approx == expected && wb.contains(a, b) == expected, || {
                    format!("system {k}: {} vs {}", s.fmt_set(x), s.fmt_set(y))
                })?;
            }
        }
    }
    Ok(())
}

fn local_lub_formula(systems: &[Isw]) -> Check {
    for (k, s) in systems.iter().enumerate() {
        let sp = s.state_poset().map_err(|e| e.to_string())?;
        let st = &sp.states;
        for (zi, &z) in st.iter().enumerate() {
            let below: Vec<usize> = (0..st.len()).filter(|&i| st[i].is_subset(z)).collect();
            for &xi in &below {
                for &yi in &below {
                    let (x, y) = (st[xi], st[yi]);
                    let ubs: Vec<TokenSet> = below
                        .iter()
                        .map(|&w| st[w])
                        .filter(|w| x.union(y).is_subset(*w))
                        .collect();
                    let expected = least_by_inclusion(&ubs).ok_or("no local lub")?;
                    let formula = s.state_local_lub(x, y, z).map_err(|e| e.to_string())?;
                    let poset = sp.poset.local_lub(zi, &[xi, yi]).map_err(|e| e.to_string())?;
                    ensure(formula == expected && st[poset] == expected, || {
                        format!("system {k}: {} ⊔ {} below {}", s.fmt_set(x), s.fmt_set(y), s.fmt_set(z))
                    })?;
                }
            }
        }
    }
    Ok(())
}

fn domain_round_trip() -> Check {
    let mut posets: Vec<FinPoset> = ["fixtures/C2.poset", "fixtures/M.poset", "fixtures/FLAT2.poset"]
        .iter()
        .map(|p| match load(p) {
            Document::Poset(d) => d,
            _ => unreachable!(),
        })
        .collect();
    let mut r = rng(SEED ^ 6);
    posets.extend((0..50).map(|_| random_l_domain(&mut r, 7)));
    for (k, d) in posets.iter().enumerate() {
        let rt = roundtrip_check(d).map_err(|e| format!("domain {k}: {e}"))?;
        let sp = &rt.state_poset;
        let iso_ok = rt.iso.len() == d.len()
            && d.elems().all(|a| d.elems().all(|b| d.leq(a, b) == sp.states[rt.iso[a]].is_subset(sp.states[rt.iso[b]])));
        ensure(iso_ok && sp.states.len() == d.len(), || format!("domain {k}: not an order-isomorphism"))?;
        let bc = rt.bridge.system.satisfies(Condition::Bc);
        ensure(bc == bounded_complete_by_search(d), || format!("domain {k}: BC disagrees"))?;
    }
    Ok(())
}

fn bc_gives_bounded_complete(systems: &[Isw]) -> Check {
    for (k, s) in systems.iter().enumerate() {
        if s.satisfies(Condition::Bc) {
            let sp = s.state_poset().map_err(|e| e.to_string())?;
            ensure(bounded_complete_by_search(&sp.poset), || format!("system {k}"))?;
        }
    }
    Ok(())
}

fn alg_iff_salg(systems: &[Isw]) -> Check {
    for (k, s) in systems.iter().enumerate() {
        ensure(s.satisfies(Condition::Alg) == s.satisfies(Condition::Salg), || format!("system {k}"))?;
    }
    Ok(())
}

fn small_domain_systems(count: usize) -> Vec<Isw> {
    let mut r = rng(SEED ^ 9);
    let mut out = Vec::new();
    while out.len() < count {
        let s = random_system(&mut r, 4);
        if s.enumerate_states().len() <= 4 {
            out.push(s);
        }
    }
    out
}

fn category_laws() -> Check {
    let systems = small_domain_systems(12);
    let mut r = rng(SEED ^ 99);
    let err = |e: isw::Error| e.to_string();
    for s in &systems {
        let id = identity_map(s).map_err(err)?;
        ensure(fn_from_map(&id) == StateFn::identity(&s.enumerate_states()), || "L(Id) ≠ id".into())?;
    }
    for (a, s) in systems.iter().enumerate() {
        let t = &systems[(a + 1) % systems.len()];
        let u = &systems[(a + 5) % systems.len()];
        let v = &systems[(a + 7) % systems.len()];
        for _ in 0..4 {
            let h = random_map(&mut r, s, t);
            let g = random_map(&mut r, t, u);
            let k = random_map(&mut r, u, v);
            let hg = h.then(&g).map_err(err)?;
            ensure(identity_map(s).map_err(err)?.then(&h).map_err(err)? == h, || "left unit".into())?;
            ensure(h.then(&identity_map(t).map_err(err)?).map_err(err)? == h, || "right unit".into())?;
            ensure(hg.then(&k).map_err(err)? == h.then(&g.then(&k).map_err(err)?).map_err(err)?, || {
                "associativity".into()
            })?;
            ensure(fn_from_map(&hg) == fn_from_map(&h).then(&fn_from_map(&g)).unwrap(), || {
                "L(H then G) ≠ L(G)∘L(H)".into()
            })?;
            ensure(map_from_fn(s, t, &fn_from_map(&h)).map_err(err)? == h, || "H^L(H) ≠ H".into())?;
        }
    }
    // fullness
    for s in &systems[..6] {
        for t in &systems[..6] {
            let p = s.state_poset().map_err(err)?;
            let q = t.state_poset().map_err(err)?;
            let fs = monotone_functions(&p, &q).map_err(err)?;
            let expected = monotone_count_by_search(
                p.states.len(),
                q.states.len(),
                |a, b| p.states[a].is_subset(p.states[b]),
                |a, b| q.states[a].is_subset(q.states[b]),
            );
            ensure(fs.len() == expected, || format!("{} monotone functions, expected {expected}", fs.len()))?;
            let mut maps: Vec<ApproxMap> = Vec::new();
            for f in &fs {
                let table = StateFn::new(p.states.clone(), f.iter().map(|&v| q.states[v]).collect());
                let h = map_from_fn(s, t, &table).map_err(err)?;
                ensure(h.is_valid() && fn_from_map(&h) == table, || "L(H^f) ≠ f".into())?;
                maps.push(h);
            }
            maps.sort_by_key(|h| format!("{:?}", h.pairs().collect::<Vec<_>>()));
            maps.dedup();
            ensure(maps.len() == fs.len(), || "f ↦ H^f is not injective".into())?;
            if s.con_len() * t.len() <= RELATION_BITS_LIMIT {
                let all = all_valid_maps(s, t).map_err(err)?;
                ensure(all.len() == fs.len(), || {
                    format!("{} valid maps but {} monotone functions", all.len(), fs.len())
                })?;
            }
        }
    }
    Ok(())
}

fn products() -> Check {
    let err = |e: isw::Error| e.to_string();
    let systems = [
        load_system("fixtures/T.isw"),
        load_system("fixtures/IC2.isw"),
        load_system("fixtures/IFLAT2.isw"),
    ];
    let mut r = rng(SEED ^ 10);
    for s1 in &systems {
        for s2 in &systems {
            let p = product(s1, s2).map_err(err)?;
            let b = p.state_bijection().map_err(err)?;
            let (l, rr) = (states_by_subset_filter(s1), states_by_subset_filter(s2));
            let prod = states_by_subset_filter(&p.product);
            ensure(prod.len() == l.len() * rr.len(), || "state counts differ".into())?;
            for &z in &prod {
                let (x1, x2) = p.project(z);
                ensure(l.contains(&x1) && rr.contains(&x2) && p.times(x1, x2) == z, || {
                    format!("{} does not split", p.product.fmt_set(z))
                })?;
            }
            ensure(b.image.len() == prod.len(), || "bijection size".into())?;
            for src in &systems {
                let h1 = random_map(&mut r, src, s1);
                let h2 = random_map(&mut r, src, s2);
                let pair = p.pairing(&h1, &h2).map_err(err)?;
                ensure(pair.is_valid(), || "pairing is not a map".into())?;
                ensure(pair.then(&p.pr1).map_err(err)? == h1, || "⟨H1,H2⟩ then Pr1 ≠ H1".into())?;
                ensure(pair.then(&p.pr2).map_err(err)? == h2, || "⟨H1,H2⟩ then Pr2 ≠ H2".into())?;
            }
            for c in [Condition::Bc, Condition::Alg] {
                if s1.satisfies(c) && s2.satisfies(c) {
                    ensure(p.product.satisfies(c), || format!("{c} not preserved"))?;
                }
            }
        }
    }
    Ok(())
}

fn classic_conversions() -> Check {
    let err = |e: isw::Error| e.to_string();
    let Document::Cis(cis1) = load("fixtures/CIS1.cis") else { unreachable!() };
    cis_isw_iso(&cis1).map_err(err)?;
    let s = isw_from_cis(&cis1).map_err(err)?;
    let points = cis1.point_poset().map_err(err)?;
    ensure(find_iso(&points, &s.state_poset().map_err(err)?.poset).map_err(err)?.is_some(), || {
        "points(CIS1) ≇ states".into()
    })?;
    let fixtures: Vec<Isw> = common::SYSTEMS.iter().map(|p| load_system(p)).collect();
    let mut bc_count = 0;
    let mut algplus_count = 0;
    for (k, s) in fixtures.iter().enumerate() {
        if !s.satisfies(Condition::Bc) {
            continue;
        }
        bc_count += 1;
        let c = cis_from_isw(s).map_err(err)?;
        ensure(c.points().map_err(err)? == states_by_subset_filter(s), || format!("fixture {k}: points ≠ states"))?;
        if s.satisfies(Condition::AlgPlus) {
            algplus_count += 1;
            ais_isw_iso(s).map_err(err)?;
            let a = ais_from_isw(s).map_err(err)?;
            let q = s.state_poset().map_err(err)?.poset;
            ensure(find_iso(&a.point_poset().map_err(err)?, &q).map_err(err)?.is_some(), || {
                format!("fixture {k}: L(R(A)) ≇ L(A)")
            })?;
        }
    }
    ensure(bc_count >= 5 && algplus_count >= 5, || format!("only {bc_count} BC and {algplus_count} ALG+ fixtures"))
}

fn cli_goldens() -> Check {
    let mut codes = [false; 4];
    for args in common::cases() {
        let got = common::render(&args);
        let want = std::fs::read_to_string(common::golden_path(&args)).map_err(|e| format!("{args:?}: {e}"))?;
        ensure(got == want, || format!("{args:?}: report differs"))?;
        let code: usize = got["exit: ".len()..got.find('\n').unwrap()].parse().unwrap();
        codes[code] = true;
    }
    ensure(codes.iter().all(|&c| c), || "not every exit code is exercised".into())
}

fn main() -> ExitCode {
    println!("acceptance suite, seed {SEED:#x}");
    let gen2 = random_systems(200, 6, SEED);
    let gen3 = random_systems(50, 8, SEED ^ 3);
    let fixtures: Vec<Isw> = common::SYSTEMS.iter().map(|p| load_system(p)).collect();
    let all: Vec<Isw> = gen2.iter().chain(&gen3).cloned().collect();
    let count = |c: Condition| gen2.iter().filter(|s| s.satisfies(c)).count();
    let max_states = gen2.iter().map(|s| s.enumerate_states().len()).max().unwrap_or(0);
    println!(
        "generated: {} systems, BC {}, ALG {}, ALG+ {}, up to {max_states} states",
        gen2.len(),
        count(Condition::Bc),
        count(Condition::Alg),
        count(Condition::AlgPlus)
    );

    type Crit<'a> = (&'a str, f64, Box<dyn Fn() -> Check + 'a>);
    let criteria: Vec<Crit> = vec![
        ("1. one-point system T", 0.1, Box::new(one_point_system)),
        ("2. 200 state posets are pointed L-domains", 60.0, Box::new(|| state_posets_are_l_domains(&gen2))),
        ("3. fast states = subset filter", 30.0, Box::new(|| oracle_equivalence(&fixtures, &gen3))),
        ("4. approximation = way-below", 60.0, Box::new(|| approximation_is_way_below(&gen2))),
        ("5. formula local lub = poset local lub", 60.0, Box::new(|| local_lub_formula(&gen2))),
        ("6. domain round trip and BC", 30.0, Box::new(domain_round_trip)),
        ("7. BC implies bounded-complete", 60.0, Box::new(|| bc_gives_bounded_complete(&all))),
        ("8. ALG iff SALG", 60.0, Box::new(|| alg_iff_salg(&all))),
        ("9. category laws and fullness", 60.0, Box::new(category_laws)),
        ("10. products", 60.0, Box::new(products)),
        ("11. witness-free conversions", 10.0, Box::new(classic_conversions)),
        ("12. CLI golden files", 60.0, Box::new(cli_goldens)),
    ];
    let mut failed = 0;
    for (name, limit, check) in &criteria {
        let start = Instant::now();
        let result = check();
        let took = start.elapsed();
        let result = result.and_then(|()| {
            ensure(took <= Duration::from_secs_f64(*limit), || "over the time limit".into())
        });
        match result {
            Ok(()) => println!("[PASS] {name} ({:.3} s, limit {limit} s, exact)", took.as_secs_f64()),
            Err(msg) => {
                failed += 1;
                println!("[FAIL] {name} ({:.3} s, limit {limit} s): {msg}", took.as_secs_f64());
            }
        }
    }
    println!("{}/{} criteria pass", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
