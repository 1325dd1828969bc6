// SPDX-License-Identifier: Apache-2.0
//! Approximable mappings between information systems with witnesses, the
//! state functions they induce, and the passage back from state functions
//! to mappings.
//!
//! A mapping `H ⊆ Con × A'` is stored as the image set `H(i, X)` of every
//! consistent pair of the source. Composition is diagrammatic: `H.then(G)`
//! applies `H` first.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::states::StatePoset;
use crate::system::{Isw, WitnessedSet};
use crate::tokenset::{Token, TokenSet};

/// Cap on `|Con| · |A'|` for exhaustive enumeration of candidate relations.
pub const RELATION_BITS_LIMIT: usize = 20;
/// Cap on `|states'|^|states|` for exhaustive enumeration of monotone functions.
pub const MONOTONE_SPACE_LIMIT: usize = 256;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ApproxMap {
    source: Isw,
    target: Isw,
    image: BTreeMap<WitnessedSet, TokenSet>,
}

/// A concrete instance falsifying one of the six mapping axioms.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MapViolation {
    /// `(i, X) H (k, Y)`, `(k, Y) ⊢' b`, not `(i, X) H b`.
    TargetClosed { p: WitnessedSet, q: WitnessedSet, b: Token },
    /// `X ⊆ X'`, `(i, X) H b`, not `(i, X') H b`.
    Monotone { p: WitnessedSet, x2: TokenSet, b: Token },
    /// `(i, X) ⊢ X'`, `(i, X') H b`, not `(i, X) H b`.
    SourceClosed { p: WitnessedSet, x2: TokenSet, b: Token },
    /// `{i} ∈ Con(j)`, `(i, X) H b`, not `(j, X) H b`.
    Inherited { p: WitnessedSet, j: Token, b: Token },
    /// `(i, X) H F` without an interpolating `(c, U)` and `(e, V)`.
    Interpolation { p: WitnessedSet, f: TokenSet },
    /// `(Δ, ∅)` is not related to `Δ'`.
    Delta,
}

/// Which half of the split interpolation condition fails.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SplitViolation {
    /// No `(c, U)` with `(i, X) ⊢ (c, U)` and `(c, U) H F`.
    Source { p: WitnessedSet, f: TokenSet },
    /// No `(e, V)` with `(i, X) H (e, V)` and `(e, V) ⊢' F`.
    Target { p: WitnessedSet, f: TokenSet },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MapReport {
    pub results: [Option<MapViolation>; 6],
    pub split: [Option<SplitViolation>; 2],
}

impl MapReport {
    pub fn is_valid(&self) -> bool {
        self.results.iter().all(Option::is_none)
    }

    pub fn passed(&self) -> usize {
        self.results.iter().filter(|r| r.is_none()).count()
    }

    pub fn axiom(&self, k: usize) -> Option<MapViolation> {
        self.results[k - 1]
    }

    /// Whether interpolation agrees with its split form. Only meaningful when
    /// axioms (1)–(4) hold.
    pub fn split_agrees(&self) -> bool {
        self.results[4].is_none() == self.split.iter().all(Option::is_none)
    }

    pub fn first_failure(&self) -> Option<(usize, MapViolation)> {
        self.results
            .iter()
            .enumerate()
            .find_map(|(k, r)| r.map(|v| (k + 1, v)))
    }

    pub fn render(&self, h: &ApproxMap) -> String {
        let mut out = String::new();
        for (k, r) in self.results.iter().enumerate() {
            match r {
                None => out.push_str(&format!("axiom {}: holds\n", k + 1)),
                Some(v) => out.push_str(&format!("axiom {}: FAILS: {}\n", k + 1, h.render_violation(v))),
            }
        }
        for (k, r) in self.split.iter().enumerate() {
            match r {
                None => out.push_str(&format!("split 5.{}: holds\n", k + 1)),
                Some(v) => out.push_str(&format!("split 5.{}: FAILS: {}\n", k + 1, h.render_split(v))),
            }
        }
        out.push_str(&format!("{}/6 axioms hold\n", self.passed()));
        out
    }
}

impl ApproxMap {
    /// Assembles a mapping from `(i, X) H b` facts, checking only that every
    /// pair is in `Con` and every `b` is a target token.
    pub fn new(
        source: Isw,
        target: Isw,
        rel: impl IntoIterator<Item = (WitnessedSet, Token)>,
    ) -> Result<Self> {
        let mut image: BTreeMap<WitnessedSet, TokenSet> =
            source.con_entries().map(|(p, _)| (p, TokenSet::EMPTY)).collect();
        for (p, b) in rel {
            if b.0 >= target.len() {
                return Err(Error::MalformedMap(format!("target token #{} out of range", b.0)));
            }
            match image.get_mut(&p) {
                Some(e) => e.insert(b),
                None => {
                    return Err(Error::MalformedMap(format!(
                        "{} is not in the source Con",
                        source.fmt_pair(p)
                    )))
                }
            }
        }
        Ok(ApproxMap { source, target, image })
    }

    /// Builds a mapping from a total image function on source pairs.
    pub fn from_images(source: Isw, target: Isw, f: impl Fn(WitnessedSet) -> TokenSet) -> Self {
        let image = source.con_entries().map(|(p, _)| (p, f(p))).collect();
        ApproxMap { source, target, image }
    }

    pub fn source(&self) -> &Isw {
        &self.source
    }

    pub fn target(&self) -> &Isw {
        &self.target
    }

    /// `{b : (i, X) H b}`; empty for pairs outside `Con`.
    pub fn image(&self, p: WitnessedSet) -> TokenSet {
        self.image.get(&p).copied().unwrap_or(TokenSet::EMPTY)
    }

    pub fn relates(&self, p: WitnessedSet, b: Token) -> bool {
        self.image(p).contains(b)
    }

    /// All `((i, X), b)` in canonical order.
    pub fn pairs(&self) -> impl Iterator<Item = (WitnessedSet, Token)> + '_ {
        self.source
            .con_entries()
            .flat_map(move |(p, _)| self.image(p).iter().map(move |b| (p, b)))
    }

    pub fn len(&self) -> usize {
        self.image.values().map(|e| e.len()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn render_violation(&self, v: &MapViolation) -> String {
        let (s, t) = (&self.source, &self.target);
        match *v {
            MapViolation::TargetClosed { p, q, b } => format!(
                "{} H {} and {} ⊢' {} but not {} H {}",
                s.fmt_pair(p),
                t.fmt_pair(q),
                t.fmt_pair(q),
                t.name(b),
                s.fmt_pair(p),
                t.name(b)
            ),
            MapViolation::Monotone { p, x2, b } => format!(
                "{} H {} but not ({},{}) H {}",
                s.fmt_pair(p),
                t.name(b),
                s.name(p.witness),
                s.fmt_set(x2),
                t.name(b)
            ),
            MapViolation::SourceClosed { p, x2, b } => format!(
                "{} ⊢ {} and ({},{}) H {} but not {} H {}",
                s.fmt_pair(p),
                s.fmt_set(x2),
                s.name(p.witness),
                s.fmt_set(x2),
                t.name(b),
                s.fmt_pair(p),
                t.name(b)
            ),
            MapViolation::Inherited { p, j, b } => format!(
                "{{{}}} ∈ Con({}) and {} H {} but not ({},{}) H {}",
                s.name(p.witness),
                s.name(j),
                s.fmt_pair(p),
                t.name(b),
                s.name(j),
                s.fmt_set(p.body),
                t.name(b)
            ),
            MapViolation::Interpolation { p, f } => {
                format!("{} H {} has no interpolant", s.fmt_pair(p), t.fmt_set(f))
            }
            MapViolation::Delta => format!(
                "({},{{}}) is not related to {}",
                s.name(s.delta()),
                t.name(t.delta())
            ),
        }
    }

    fn render_split(&self, v: &SplitViolation) -> String {
        match *v {
            SplitViolation::Source { p, f } => format!(
                "{} H {} but no (c,U) with {} ⊢ (c,U) H {}",
                self.source.fmt_pair(p),
                self.target.fmt_set(f),
                self.source.fmt_pair(p),
                self.target.fmt_set(f)
            ),
            SplitViolation::Target { p, f } => format!(
                "{} H {} but no (e,V) with {} H (e,V) ⊢' {}",
                self.source.fmt_pair(p),
                self.target.fmt_set(f),
                self.source.fmt_pair(p),
                self.target.fmt_set(f)
            ),
        }
    }

    /// Checks all six axioms and the split form of interpolation.
    pub fn validate(&self) -> MapReport {
        MapReport {
            results: [
                self.axiom1(),
                self.axiom2(),
                self.axiom3(),
                self.axiom4(),
                self.axiom5(),
                self.axiom6(),
            ],
            split: [self.split1(), self.split2()],
        }
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_valid()
    }

    pub fn require_valid(&self) -> Result<()> {
        match self.validate().first_failure() {
            None => Ok(()),
            Some((k, v)) => Err(Error::InvalidMap(format!(
                "axiom {k}: {}",
                self.render_violation(&v)
            ))),
        }
    }

    fn entries(&self) -> impl Iterator<Item = (WitnessedSet, TokenSet, TokenSet)> + '_ {
        self.source.con_entries().map(|(p, e)| (p, e, self.image(p)))
    }

    fn axiom1(&self) -> Option<MapViolation> {
        for (p, _, h) in self.entries() {
            for (q, eq) in self.target.con_entries() {
                if q.support().is_subset(h) {
                    if let Some(b) = eq.difference(h).iter().next() {
                        return Some(MapViolation::TargetClosed { p, q, b });
                    }
                }
            }
        }
        None
    }

    fn axiom2(&self) -> Option<MapViolation> {
        for (p, _, h) in self.entries() {
            for &x2 in self.source.con_of(p.witness).keys() {
                if p.body.is_subset(x2) {
                    let h2 = self.image(WitnessedSet::new(p.witness, x2));
                    if let Some(b) = h.difference(h2).iter().next() {
                        return Some(MapViolation::Monotone { p, x2, b });
                    }
                }
            }
        }
        None
    }

    fn axiom3(&self) -> Option<MapViolation> {
        for (p, e, h) in self.entries() {
            for &x2 in self.source.con_of(p.witness).keys() {
                if x2.is_subset(e) {
                    let h2 = self.image(WitnessedSet::new(p.witness, x2));
                    if let Some(b) = h2.difference(h).iter().next() {
                        return Some(MapViolation::SourceClosed { p, x2, b });
                    }
                }
            }
        }
        None
    }

    fn axiom4(&self) -> Option<MapViolation> {
        for (p, _, h) in self.entries() {
            let single = TokenSet::singleton(p.witness);
            for j in self.source.token_iter() {
                if self.source.in_con(WitnessedSet::new(j, single)) {
                    let hj = self.image(WitnessedSet::new(j, p.body));
                    if let Some(b) = h.difference(hj).iter().next() {
                        return Some(MapViolation::Inherited { p, j, b });
                    }
                }
            }
        }
        None
    }

    fn route_exists(&self, e: TokenSet, f: TokenSet) -> bool {
        self.entries().any(|(c, _, hc)| {
            c.support().is_subset(e)
                && self
                    .target
                    .con_entries()
                    .any(|(q, eq)| q.support().is_subset(hc) && f.is_subset(eq))
        })
    }

    fn axiom5(&self) -> Option<MapViolation> {
        for (p, e, h) in self.entries() {
            if h.is_empty() || self.route_exists(e, h) {
                continue;
            }
            let f = h
                .subsets_canonical()
                .into_iter()
                .find(|&f| !self.route_exists(e, f))
                .unwrap_or(h);
            return Some(MapViolation::Interpolation { p, f });
        }
        None
    }

    fn axiom6(&self) -> Option<MapViolation> {
        let bottom = WitnessedSet::new(self.source.delta(), TokenSet::EMPTY);
        (!self.relates(bottom, self.target.delta())).then_some(MapViolation::Delta)
    }

    fn split1(&self) -> Option<SplitViolation> {
        for (p, e, h) in self.entries() {
            let holds = |f: TokenSet| {
                self.entries()
                    .any(|(c, _, hc)| c.support().is_subset(e) && f.is_subset(hc))
            };
            if holds(h) {
                continue;
            }
            let f = h.subsets_canonical().into_iter().find(|&f| !holds(f)).unwrap_or(h);
            return Some(SplitViolation::Source { p, f });
        }
        None
    }

    fn split2(&self) -> Option<SplitViolation> {
        for (p, _, h) in self.entries() {
            let holds = |f: TokenSet| {
                self.target
                    .con_entries()
                    .any(|(q, eq)| q.support().is_subset(h) && f.is_subset(eq))
            };
            if holds(h) {
                continue;
            }
            let f = h.subsets_canonical().into_iter().find(|&f| !holds(f)).unwrap_or(h);
            return Some(SplitViolation::Target { p, f });
        }
        None
    }

    /// `(i, X) ⊢ (j, Y) ∧ (j, Y) H b ⇒ (i, X) H b`; the first failing triple.
    pub fn strong_source_closure_violation(&self) -> Option<(WitnessedSet, WitnessedSet, Token)> {
        for (p, e, h) in self.entries() {
            for (q, _, hq) in self.entries() {
                if q.support().is_subset(e) {
                    if let Some(b) = hq.difference(h).iter().next() {
                        return Some((p, q, b));
                    }
                }
            }
        }
        None
    }

    /// `H then G`: `(i, X) (H then G) c ⟺ ∃(j, Y) ∈ Con'. (i, X) H (j, Y) ∧ (j, Y) G c`.
    pub fn then(&self, g: &ApproxMap) -> Result<ApproxMap> {
        if self.target != g.source {
            return Err(Error::SystemMismatch(
                "target of the first map differs from the source of the second".into(),
            ));
        }
        let image = self
            .entries()
            .map(|(p, _, h)| {
                let mut out = TokenSet::EMPTY;
                for (q, _, gq) in g.entries() {
                    if q.support().is_subset(h) {
                        out = out.union(gq);
                    }
                }
                (p, out)
            })
            .collect();
        Ok(ApproxMap {
            source: self.source.clone(),
            target: g.target.clone(),
            image,
        })
    }

    /// `𝓛(H)(x) = {a : ∃(i, X) ∈ Con. {i} ∪ X ⊆ x ∧ (i, X) H a}`.
    pub fn apply(&self, x: TokenSet) -> Result<TokenSet> {
        if !self.source.is_state(x) {
            return Err(Error::NotAState(self.source.fmt_set(x)));
        }
        let y = self.apply_unchecked(x);
        debug_assert!(self.target.is_state(y) || !self.is_valid());
        Ok(y)
    }

    pub(crate) fn apply_unchecked(&self, x: TokenSet) -> TokenSet {
        let mut out = TokenSet::EMPTY;
        for (p, _, h) in self.entries() {
            if p.support().is_subset(x) {
                out = out.union(h);
            }
        }
        out
    }
}

/// The identity mapping: `(i, X) Id a ⟺ (i, X) ⊢ a`.
pub fn identity_map(s: &Isw) -> Result<ApproxMap> {
    s.require_valid()?;
    Ok(ApproxMap::from_images(s.clone(), s.clone(), |p| {
        s.entailed(p).expect("pair in Con")
    }))
}

/// Diagrammatic composition, `h` first.
pub fn compose(h: &ApproxMap, g: &ApproxMap) -> Result<ApproxMap> {
    h.then(g)
}

pub fn apply_map(h: &ApproxMap, x: TokenSet) -> Result<TokenSet> {
    h.apply(x)
}

/// A function between state sets, as an explicit table over the source states
/// in canonical order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StateFn {
    pub domain: Vec<TokenSet>,
    pub values: Vec<TokenSet>,
}

impl StateFn {
    pub fn new(domain: Vec<TokenSet>, values: Vec<TokenSet>) -> Self {
        assert_eq!(domain.len(), values.len());
        StateFn { domain, values }
    }

    pub fn identity(states: &[TokenSet]) -> Self {
        StateFn::new(states.to_vec(), states.to_vec())
    }

    pub fn get(&self, x: TokenSet) -> Option<TokenSet> {
        self.domain.binary_search(&x).ok().map(|k| self.values[k])
    }

    /// The first `x ⊆ y` with `f(x) ⊄ f(y)`.
    pub fn monotonicity_violation(&self) -> Option<(TokenSet, TokenSet)> {
        for (a, &x) in self.domain.iter().enumerate() {
            for (b, &y) in self.domain.iter().enumerate() {
                if x.is_subset(y) && !self.values[a].is_subset(self.values[b]) {
                    return Some((x, y));
                }
            }
        }
        None
    }

    pub fn is_monotone(&self) -> bool {
        self.monotonicity_violation().is_none()
    }

    /// `self` first, then `g`.
    pub fn then(&self, g: &StateFn) -> Option<StateFn> {
        let values = self.values.iter().map(|&y| g.get(y)).collect::<Option<Vec<_>>>()?;
        Some(StateFn::new(self.domain.clone(), values))
    }
}

/// `𝓛(H)` tabulated over all source states.
pub fn fn_from_map(h: &ApproxMap) -> StateFn {
    let domain = h.source.enumerate_states();
    let values = domain.iter().map(|&x| h.apply_unchecked(x)).collect();
    StateFn::new(domain, values)
}

/// `H^f`: `(i, X) H^f a ⟺ a ∈ f([X]_i)`.
pub fn map_from_fn(s: &Isw, t: &Isw, f: &StateFn) -> Result<ApproxMap> {
    let states = s.enumerate_states();
    if f.domain != states {
        return Err(Error::SystemMismatch(
            "the table is not indexed by the source states".into(),
        ));
    }
    if let Some(&y) = f.values.iter().find(|&&y| !t.is_state(y)) {
        return Err(Error::NotAState(t.fmt_set(y)));
    }
    if let Some((x, y)) = f.monotonicity_violation() {
        return Err(Error::NotMonotone(format!(
            "{} ⊆ {} but their images are not included",
            s.fmt_set(x),
            s.fmt_set(y)
        )));
    }
    Ok(ApproxMap::from_images(s.clone(), t.clone(), |p| {
        f.get(s.entailed(p).expect("pair in Con")).expect("principal states are states")
    }))
}

/// Every monotone function between two state posets, each as a vector of
/// target indices, in lexicographic order.
pub fn monotone_functions(p: &StatePoset, q: &StatePoset) -> Result<Vec<Vec<usize>>> {
    let (n, m) = (p.states.len(), q.states.len());
    let space = (m as f64).powi(n as i32);
    if space > MONOTONE_SPACE_LIMIT as f64 {
        return Err(Error::size(
            "monotone function space",
            space.min(usize::MAX as f64) as usize,
            MONOTONE_SPACE_LIMIT,
        ));
    }
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(n);
    fn go(p: &StatePoset, q: &StatePoset, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let k = cur.len();
        if k == p.states.len() {
            out.push(cur.clone());
            return;
        }
        for v in 0..q.states.len() {
            let ok = (0..k).all(|a| {
                (!p.poset.leq(a, k) || q.poset.leq(cur[a], v))
                    && (!p.poset.leq(k, a) || q.poset.leq(v, cur[a]))
            });
            if ok {
                cur.push(v);
                go(p, q, cur, out);
                cur.pop();
            }
        }
    }
    go(p, q, &mut cur, &mut out);
    Ok(out)
}

/// Every relation `H ⊆ Con × A'` that satisfies the six axioms, found by
/// exhaustive enumeration.
pub fn all_valid_maps(s: &Isw, t: &Isw) -> Result<Vec<ApproxMap>> {
    let pairs: Vec<WitnessedSet> = s.con_entries().map(|(p, _)| p).collect();
    let bits = pairs.len() * t.len();
    if bits > RELATION_BITS_LIMIT {
        return Err(Error::size("relation bits", bits, RELATION_BITS_LIMIT));
    }
    let width = t.len();
    let mask = (1u64 << width) - 1;
    let mut out = Vec::new();
    for code in 0u64..(1u64 << bits) {
        let image: BTreeMap<WitnessedSet, TokenSet> = pairs
            .iter()
            .enumerate()
            .map(|(k, &p)| (p, TokenSet::from_bits((code >> (k * width)) & mask)))
            .collect();
        let h = ApproxMap {
            source: s.clone(),
            target: t.clone(),
            image,
        };
        // cheap necessary conditions first
        if h.axiom6().is_none() && h.axiom2().is_none() && h.axiom3().is_none() && h.is_valid() {
            out.push(h);
        }
    }
    Ok(out)
}
