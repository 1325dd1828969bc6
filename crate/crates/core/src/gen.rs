// SPDX-License-Identifier: Apache-2.0
//! Seeded random generators for posets, systems, and mappings, used by the
//! property tests and the acceptance suite.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::appmap::{map_from_fn, ApproxMap, StateFn};
use crate::classic::{isw_from_ais, isw_from_cis, Ais};
use crate::constructions::product;
use crate::domconv::isw_from_poset;
use crate::finposet::FinPoset;
use crate::states::StatePoset;
use crate::system::{Isw, WitnessedSet};
use crate::tokenset::{Token, TokenSet};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A random finite L-domain with between 1 and `max` elements. Each new
/// element is placed directly above a random antichain, sometimes the lower
/// covers of an existing element; candidates that
/// break the L-domain property are dropped.
pub fn random_l_domain<R: Rng>(rng: &mut R, max: usize) -> FinPoset {
    assert!(max >= 1);
    // half of the draws use the full size, where the interesting shapes live
    let target = if rng.random_bool(0.5) { max } else { rng.random_range(1..=max) };
    let mut names = vec!["e0".to_string()];
    let mut edges: Vec<(usize, usize)> = Vec::new();
    let mut current = FinPoset::from_edges(names.clone(), &edges).expect("one point");
    let mut attempts = 0;
    while current.len() < target && attempts < 200 {
        attempts += 1;
        let n = current.len();
        let mut below: Vec<usize> = Vec::new();
        let joins: Vec<Vec<usize>> = (0..n)
            .map(|c| current.covers().into_iter().filter(|&(_, b)| b == c).map(|(a, _)| a).collect())
            .filter(|lower: &Vec<usize>| lower.len() >= 2)
            .collect();
        if !joins.is_empty() && rng.random_bool(0.5) {
            // a second minimal upper bound of the same antichain, which
            // breaks bounded completeness but not the L-domain property
            below = joins[rng.random_range(0..joins.len())].clone();
        } else {
            let k = rng.random_range(1..=n.min(3));
            // e0 is the bottom and comparable to everything
            let mut order: Vec<usize> = if k == 1 { (0..n).collect() } else { (1..n).collect() };
            order.shuffle(rng);
            for c in order {
                // keep an antichain
                if below.len() < k && below.iter().all(|&b| !current.leq(b, c) && !current.leq(c, b)) {
                    below.push(c);
                }
            }
        }
        let mut cand_names = names.clone();
        cand_names.push(format!("e{n}"));
        let mut cand_edges = edges.clone();
        cand_edges.extend(below.iter().map(|&b| (b, n)));
        let cand = FinPoset::from_edges(cand_names.clone(), &cand_edges).expect("acyclic");
        if cand.analyze().l_domain() {
            names = cand_names;
            edges = cand_edges;
            current = cand;
        }
    }
    current
}

/// A random algebraic system with `n ≥ 1` tokens (`Δ` first): Horn rules
/// generate entailment, random conflicting pairs bound consistency.
pub fn random_ais<R: Rng>(rng: &mut R, n: usize) -> Ais {
    assert!(n >= 1);
    let delta = Token(0);
    let all = TokenSet::full(n);
    loop {
        let mut rules: Vec<(TokenSet, Token)> = Vec::new();
        for _ in 0..rng.random_range(0..=n) {
            let body: TokenSet = (1..n).filter(|_| rng.random_bool(0.3)).map(Token).collect();
            rules.push((body, Token(rng.random_range(0..n))));
        }
        let mut conflicts: Vec<(Token, Token)> = Vec::new();
        for _ in 0..rng.random_range(0..=n / 2 + 1) {
            if n > 2 {
                let a = rng.random_range(1..n);
                let b = rng.random_range(1..n);
                if a != b {
                    conflicts.push((Token(a), Token(b)));
                }
            }
        }
        let closure = |x: TokenSet| {
            let mut c = x.with(delta);
            loop {
                let next = rules
                    .iter()
                    .filter(|(b, _)| b.is_subset(c))
                    .fold(c, |acc, &(_, h)| acc.with(h));
                if next == c {
                    return c;
                }
                c = next;
            }
        };
        let ok = |x: TokenSet| conflicts.iter().all(|&(a, b)| !(x.contains(a) && x.contains(b)));
        let con: Vec<TokenSet> = all.submasks().filter(|&x| ok(closure(x))).collect();
        if all.iter().any(|a| !con.contains(&TokenSet::singleton(a))) {
            continue;
        }
        let ent: Vec<(TokenSet, Token)> = con
            .iter()
            .flat_map(|&x| closure(x).iter().map(move |a| (x, a)))
            .collect();
        let tokens = std::iter::once("Δ".to_string())
            .chain((1..n).map(|k| format!("a{k}")))
            .collect();
        return Ais::new(tokens, delta, con, ent).expect("well-formed");
    }
}

/// A random valid system with at most `max` tokens (`max ≥ 2`), drawn from
/// domain systems, algebraic and continuous witness-free systems, and
/// products.
pub fn random_system<R: Rng>(rng: &mut R, max: usize) -> Isw {
    assert!(max >= 2);
    match rng.random_range(0..5) {
        0 | 4 => isw_from_poset(&random_l_domain(rng, max)).expect("L-domain"),
        1 => {
            let n = rng.random_range(1..=max);
            isw_from_ais(&random_ais(rng, n)).expect("valid ais")
        }
        2 => {
            let n = rng.random_range(1..max);
            isw_from_cis(&random_ais(rng, n).as_cis()).expect("valid cis")
        }
        3 => {
            let a = rng.random_range(1..=max / 2);
            let b = rng.random_range(1..=max / a);
            let s1 = isw_from_poset(&random_l_domain(rng, a)).expect("L-domain");
            let s2 = isw_from_poset(&random_l_domain(rng, b)).expect("L-domain");
            product(&s1, &s2).expect("small product").product
        }
        _ => unreachable!(),
    }
}

/// A copy of `s` with one random entailment fact toggled or one random
/// consistent pair dropped; usually invalid.
pub fn perturb<R: Rng>(rng: &mut R, s: &Isw) -> Isw {
    let mut entries: Vec<(WitnessedSet, TokenSet)> = s.con_entries().collect();
    let k = rng.random_range(0..entries.len());
    if rng.random_bool(0.25) && entries.len() > 1 {
        entries.remove(k);
    } else {
        let a = Token(rng.random_range(0..s.len()));
        let e = &mut entries[k].1;
        *e = if e.contains(a) { e.without(a) } else { e.with(a) };
    }
    Isw::from_entailment_map(s.tokens().to_vec(), s.delta(), entries).expect("same shape")
}

/// A random monotone function between two state posets, as target indices.
/// Source states are in canonical order, so predecessors come first.
pub fn random_monotone<R: Rng>(rng: &mut R, p: &StatePoset, q: &StatePoset) -> Vec<usize> {
    fn go<R: Rng>(rng: &mut R, p: &StatePoset, q: &StatePoset, cur: &mut Vec<usize>) -> bool {
        let k = cur.len();
        if k == p.states.len() {
            return true;
        }
        let mut opts: Vec<usize> = (0..q.states.len())
            .filter(|&v| (0..k).all(|a| !p.poset.leq(a, k) || q.poset.leq(cur[a], v)))
            .collect();
        opts.shuffle(rng);
        for v in opts {
            cur.push(v);
            if go(rng, p, q, cur) {
                return true;
            }
            cur.pop();
        }
        false
    }
    let mut cur = Vec::with_capacity(p.states.len());
    let found = go(rng, p, q, &mut cur);
    assert!(found, "constant functions are monotone");
    cur
}

/// A random valid mapping `s → t`, as `H^f` for a random monotone `f`.
pub fn random_map<R: Rng>(rng: &mut R, s: &Isw, t: &Isw) -> ApproxMap {
    let p = s.state_poset().expect("valid source");
    let q = t.state_poset().expect("valid target");
    let f = random_monotone(rng, &p, &q);
    let table = StateFn::new(p.states.clone(), f.iter().map(|&v| q.states[v]).collect());
    map_from_fn(s, t, &table).expect("monotone table")
}
