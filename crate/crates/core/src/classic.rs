// SPDX-License-Identifier: Apache-2.0
//! Witness-free information systems: continuous ones (`Cis`) and algebraic
//! ones with a distinguished token (`Ais`), their points, and the
//! conversions to and from information systems with witnesses.

use std::collections::{BTreeMap, HashSet};

use crate::error::{Error, Result};
use crate::finposet::{is_order_iso, FinPoset, Relation};
use crate::states::StatePoset;
use crate::system::{Condition, Isw, WitnessedSet};
use crate::tokenset::{Token, TokenSet, MAX_TOKENS};

/// Token bound for point enumeration by subset filtering.
pub const POINT_TOKEN_LIMIT: usize = 16;
/// Name of the token added by [`isw_from_cis`].
pub const FRESH_TOKEN: &str = "⊥ε";

/// Tokens, a consistency predicate and an entailment relation, stored as
/// the entailed set of every consistent set.
#[derive(Debug, Clone, PartialEq, Eq)]
struct Body {
    tokens: Vec<String>,
    con: BTreeMap<TokenSet, TokenSet>,
}

impl Body {
    fn new(
        tokens: Vec<String>,
        con: impl IntoIterator<Item = TokenSet>,
        ent: impl IntoIterator<Item = (TokenSet, Token)>,
    ) -> Result<Self> {
        if tokens.len() > MAX_TOKENS {
            return Err(Error::size("tokens", tokens.len(), MAX_TOKENS));
        }
        let mut seen = HashSet::new();
        for t in &tokens {
            if !seen.insert(t.as_str()) {
                return Err(Error::MalformedSystem(format!("duplicate token `{t}`")));
            }
        }
        let all = TokenSet::full(tokens.len());
        let mut b = Body {
            tokens,
            con: BTreeMap::new(),
        };
        for x in con {
            if !x.is_subset(all) {
                return Err(Error::MalformedSystem("consistent set mentions an unknown token".into()));
            }
            b.con.entry(x).or_default();
        }
        for (x, a) in ent {
            if !all.contains(a) {
                return Err(Error::MalformedSystem(format!("entailed token #{} out of range", a.0)));
            }
            let rendered = b.fmt_set(x);
            match b.con.get_mut(&x) {
                Some(e) => e.insert(a),
                None => {
                    return Err(Error::MalformedSystem(format!(
                        "entailment from {rendered}, which is not consistent"
                    )))
                }
            }
        }
        Ok(b)
    }

    fn all(&self) -> TokenSet {
        TokenSet::full(self.tokens.len())
    }

    fn fmt_set(&self, s: TokenSet) -> String {
        let names: Vec<&str> = s.iter().map(|t| self.tokens[t.0].as_str()).collect();
        format!("{{{}}}", names.join(","))
    }

    fn entailed(&self, x: TokenSet) -> TokenSet {
        self.con.get(&x).copied().unwrap_or(TokenSet::EMPTY)
    }

    fn down_closed(&self) -> bool {
        self.con
            .keys()
            .all(|x| x.iter().all(|a| self.con.contains_key(&x.without(a))))
    }

    fn missing_subset(&self, x: TokenSet) -> Option<TokenSet> {
        x.subsets_canonical().into_iter().find(|y| !self.con.contains_key(y))
    }

    fn closure_violation(&self) -> Option<(TokenSet, TokenSet)> {
        for &x in self.con.keys() {
            if let Some(y) = self.missing_subset(x) {
                return Some((x, y));
            }
        }
        None
    }

    /// Points under the first two conditions, plus derivability when
    /// `derivable` is set.
    fn points(&self, derivable: bool) -> Result<Vec<TokenSet>> {
        let n = self.tokens.len();
        if n > POINT_TOKEN_LIMIT {
            return Err(Error::size("point enumeration tokens", n, POINT_TOKEN_LIMIT));
        }
        let closed = self.down_closed();
        let mut out: Vec<TokenSet> = self
            .all()
            .submasks()
            .filter(|&x| {
                let consistent = if closed {
                    self.con.contains_key(&x)
                } else {
                    self.missing_subset(x).is_none()
                };
                if !consistent {
                    return false;
                }
                let mut derived = TokenSet::EMPTY;
                for (&y, &e) in &self.con {
                    if y.is_subset(x) {
                        if !e.is_subset(x) {
                            return false;
                        }
                        derived = derived.union(e);
                    }
                }
                !derivable || x.is_subset(derived)
            })
            .collect();
        out.sort();
        Ok(out)
    }
}

fn inclusion_poset(names: impl Fn(TokenSet) -> String, sets: &[TokenSet]) -> Result<FinPoset> {
    let leq = Relation::from_fn(sets.len(), |a, b| sets[a].is_subset(sets[b]));
    FinPoset::from_order(sets.iter().map(|&x| names(x)).collect(), leq)
}

/// A continuous information system `(A, con, ⊢)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cis {
    body: Body,
}

/// A concrete instance falsifying a `Cis` or `Ais` axiom.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClassicViolation {
    /// `∅ ∉ con`.
    EmptyMissing,
    /// `Y ⊆ X ∈ con`, `Y ∉ con`.
    DownwardClosure { x: TokenSet, y: TokenSet },
    /// `{a} ∉ con`.
    SingletonMissing { a: Token },
    /// `X ⊢ Y`, `Y ∉ con`.
    EntailmentConsistent { x: TokenSet, y: TokenSet },
    /// `X ⊆ Y`, `X ⊢ a`, `Y ⊬ a`.
    Monotone { x: TokenSet, y: TokenSet, a: Token },
    /// `X ⊢ Z ⊢ a`, `X ⊬ a`.
    Transitive { x: TokenSet, z: TokenSet, a: Token },
    /// `X ⊢ a` with no `Z ∈ con` such that `X ⊢ Z ⊢ a`.
    Interpolation { x: TokenSet, a: Token },
    /// `X ⊢ a`, `X ∪ {a} ∉ con`.
    ExtensionConsistent { x: TokenSet, a: Token },
    /// `X ⊬ Δ`.
    DeltaEntailed { x: TokenSet },
    /// `a ∈ X`, `X ⊬ a`.
    Reflexive { x: TokenSet, a: Token },
    /// `X ⊢ Y`, `X ⊢ a`, `Y ⊬ a`: the printed form of the algebraic axiom (5).
    Printed { x: TokenSet, y: TokenSet, a: Token },
}

impl ClassicViolation {
    fn render_with(&self, body: &Body, delta: Option<Token>) -> String {
        let s = |x: &TokenSet| body.fmt_set(*x);
        let n = |t: &Token| body.tokens[t.0].clone();
        match self {
            ClassicViolation::EmptyMissing => "{} ∉ con".into(),
            ClassicViolation::DownwardClosure { x, y } => {
                format!("{} ⊆ {} ∈ con but {} ∉ con", s(y), s(x), s(y))
            }
            ClassicViolation::SingletonMissing { a } => format!("{{{}}} ∉ con", n(a)),
            ClassicViolation::EntailmentConsistent { x, y } => {
                format!("{} ⊢ {} but {} ∉ con", s(x), s(y), s(y))
            }
            ClassicViolation::Monotone { x, y, a } => {
                format!("{} ⊢ {} and {} ⊆ {} but {} does not entail {}", s(x), n(a), s(x), s(y), s(y), n(a))
            }
            ClassicViolation::Transitive { x, z, a } => {
                format!("{} ⊢ {} ⊢ {} but {} does not entail {}", s(x), s(z), n(a), s(x), n(a))
            }
            ClassicViolation::Interpolation { x, a } => {
                format!("{} ⊢ {} has no interpolant in con", s(x), n(a))
            }
            ClassicViolation::ExtensionConsistent { x, a } => {
                format!("{} ⊢ {} but {} ∪ {{{}}} ∉ con", s(x), n(a), s(x), n(a))
            }
            ClassicViolation::DeltaEntailed { x } => format!(
                "{} does not entail {}",
                s(x),
                delta.map(|d| n(&d)).unwrap_or_default()
            ),
            ClassicViolation::Reflexive { x, a } => {
                format!("{} ∈ {} but {} does not entail {}", n(a), s(x), s(x), n(a))
            }
            ClassicViolation::Printed { x, y, a } => {
                format!("{} ⊢ {} and {} ⊢ {} but {} does not entail {}", s(x), s(y), s(x), n(a), s(y), n(a))
            }
        }
    }
}

/// Verdicts for the axioms of a witness-free system, with labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassicReport {
    pub results: Vec<(&'static str, Option<ClassicViolation>)>,
    /// Number of numbered axioms; a label like `6⇒` counts toward axiom 6.
    pub axioms: usize,
    /// Extra verdicts that do not affect validity.
    pub notes: Vec<(&'static str, Option<ClassicViolation>)>,
}

impl ClassicReport {
    pub fn is_valid(&self) -> bool {
        self.results.iter().all(|(_, r)| r.is_none())
    }

    pub fn verdict(&self, label: &str) -> Option<ClassicViolation> {
        self.results
            .iter()
            .chain(&self.notes)
            .find(|(l, _)| *l == label)
            .unwrap_or_else(|| panic!("no axiom `{label}`"))
            .1
    }

    pub fn passed(&self) -> usize {
        (1..=self.axioms)
            .filter(|k| {
                let k = k.to_string();
                self.results
                    .iter()
                    .filter(|(l, _)| l.trim_end_matches(['⇒', '⇐']) == k)
                    .all(|(_, r)| r.is_none())
            })
            .count()
    }

    pub fn first_failure(&self) -> Option<(&'static str, ClassicViolation)> {
        self.results.iter().find_map(|&(l, r)| r.map(|v| (l, v)))
    }

    fn render_with(&self, body: &Body, delta: Option<Token>) -> String {
        let mut out = String::new();
        for (label, r) in self.results.iter().chain(&self.notes) {
            match r {
                None => out.push_str(&format!("axiom {label:>2}: holds\n")),
                Some(v) => out.push_str(&format!(
                    "axiom {label:>2}: FAILS: {}\n",
                    v.render_with(body, delta)
                )),
            }
        }
        out.push_str(&format!("{}/{} axioms hold\n", self.passed(), self.axioms));
        out
    }
}

impl Cis {
    pub fn new(
        tokens: Vec<String>,
        con: impl IntoIterator<Item = TokenSet>,
        ent: impl IntoIterator<Item = (TokenSet, Token)>,
    ) -> Result<Self> {
        Ok(Cis {
            body: Body::new(tokens, con, ent)?,
        })
    }

    pub fn len(&self) -> usize {
        self.body.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.body.tokens.is_empty()
    }

    pub fn tokens(&self) -> &[String] {
        &self.body.tokens
    }

    pub fn token(&self, name: &str) -> Option<Token> {
        self.body.tokens.iter().position(|t| t == name).map(Token)
    }

    /// Consistent sets in canonical order, each with the tokens it entails.
    pub fn con_entries(&self) -> impl Iterator<Item = (TokenSet, TokenSet)> + '_ {
        self.body.con.iter().map(|(&x, &e)| (x, e))
    }

    pub fn in_con(&self, x: TokenSet) -> bool {
        self.body.con.contains_key(&x)
    }

    pub fn entailed(&self, x: TokenSet) -> TokenSet {
        self.body.entailed(x)
    }

    pub fn fmt_set(&self, s: TokenSet) -> String {
        self.body.fmt_set(s)
    }

    pub fn validate(&self) -> Result<ClassicReport> {
        let b = &self.body;
        if b.tokens.len() > POINT_TOKEN_LIMIT {
            return Err(Error::size("validator tokens", b.tokens.len(), POINT_TOKEN_LIMIT));
        }
        let ax1 = (!self.in_con(TokenSet::EMPTY)).then_some(ClassicViolation::EmptyMissing);
        let ax2 = b
            .closure_violation()
            .map(|(x, y)| ClassicViolation::DownwardClosure { x, y });
        let ax3 = b
            .all()
            .iter()
            .find(|&a| !self.in_con(TokenSet::singleton(a)))
            .map(|a| ClassicViolation::SingletonMissing { a });
        let ax4 = b.con.iter().find_map(|(&x, &e)| {
            b.missing_subset(e)
                .map(|y| ClassicViolation::EntailmentConsistent { x, y })
        });
        Ok(ClassicReport {
            results: vec![
                ("1", ax1),
                ("2", ax2),
                ("3", ax3),
                ("4", ax4),
                ("5", monotone_violation(b)),
                ("6⇒", transitive_violation(b)),
                ("6⇐", interpolation_violation(b)),
            ],
            axioms: 6,
            notes: Vec::new(),
        })
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_ok_and(|r| r.is_valid())
    }

    pub fn render_report(&self, r: &ClassicReport) -> String {
        r.render_with(&self.body, None)
    }

    fn require_valid(&self) -> Result<()> {
        match self.validate()?.first_failure() {
            None => Ok(()),
            Some((l, v)) => Err(Error::InvalidSystem(format!(
                "not a continuous information system, axiom {l}: {}",
                v.render_with(&self.body, None)
            ))),
        }
    }

    /// Sets that are finitely consistent, closed under entailment, and in
    /// which every member is entailed by a subset.
    pub fn points(&self) -> Result<Vec<TokenSet>> {
        self.body.points(true)
    }

    pub fn point_poset(&self) -> Result<FinPoset> {
        inclusion_poset(|x| self.fmt_set(x), &self.points()?)
    }
}

fn monotone_violation(b: &Body) -> Option<ClassicViolation> {
    for (&x, &ex) in &b.con {
        for (&y, &ey) in &b.con {
            if x.is_subset(y) {
                if let Some(a) = ex.difference(ey).iter().next() {
                    return Some(ClassicViolation::Monotone { x, y, a });
                }
            }
        }
    }
    None
}

fn transitive_violation(b: &Body) -> Option<ClassicViolation> {
    for (&x, &ex) in &b.con {
        for (&z, &ez) in &b.con {
            if z.is_subset(ex) {
                if let Some(a) = ez.difference(ex).iter().next() {
                    return Some(ClassicViolation::Transitive { x, z, a });
                }
            }
        }
    }
    None
}

fn interpolation_violation(b: &Body) -> Option<ClassicViolation> {
    for (&x, &ex) in &b.con {
        let mut reach = TokenSet::EMPTY;
        for (&z, &ez) in &b.con {
            if z.is_subset(ex) {
                reach = reach.union(ez);
            }
        }
        if let Some(a) = ex.difference(reach).iter().next() {
            return Some(ClassicViolation::Interpolation { x, a });
        }
    }
    None
}

/// An algebraic information system `(A, con, ⊢, Δ)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ais {
    body: Body,
    delta: Token,
}

impl Ais {
    pub fn new(
        tokens: Vec<String>,
        delta: Token,
        con: impl IntoIterator<Item = TokenSet>,
        ent: impl IntoIterator<Item = (TokenSet, Token)>,
    ) -> Result<Self> {
        let body = Body::new(tokens, con, ent)?;
        if delta.0 >= body.tokens.len() {
            return Err(Error::MalformedSystem("Δ is not a token".into()));
        }
        Ok(Ais { body, delta })
    }

    pub fn len(&self) -> usize {
        self.body.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.body.tokens.is_empty()
    }

    pub fn tokens(&self) -> &[String] {
        &self.body.tokens
    }

    pub fn token(&self, name: &str) -> Option<Token> {
        self.body.tokens.iter().position(|t| t == name).map(Token)
    }

    pub fn delta(&self) -> Token {
        self.delta
    }

    pub fn con_entries(&self) -> impl Iterator<Item = (TokenSet, TokenSet)> + '_ {
        self.body.con.iter().map(|(&x, &e)| (x, e))
    }

    pub fn in_con(&self, x: TokenSet) -> bool {
        self.body.con.contains_key(&x)
    }

    pub fn entailed(&self, x: TokenSet) -> TokenSet {
        self.body.entailed(x)
    }

    pub fn fmt_set(&self, s: TokenSet) -> String {
        self.body.fmt_set(s)
    }

    /// The same data read as a continuous system.
    pub fn as_cis(&self) -> Cis {
        Cis {
            body: self.body.clone(),
        }
    }

    /// Checks the six axioms, reading (5) as the cut rule
    /// `X ⊢ Y ∧ Y ⊢ a ⇒ X ⊢ a`. With `strict`, the form
    /// `X ⊢ Y ∧ X ⊢ a ⇒ Y ⊢ a` is evaluated as well and reported as a note.
    pub fn validate(&self, strict: bool) -> Result<ClassicReport> {
        let b = &self.body;
        if b.tokens.len() > POINT_TOKEN_LIMIT {
            return Err(Error::size("validator tokens", b.tokens.len(), POINT_TOKEN_LIMIT));
        }
        let ax1 = b
            .closure_violation()
            .map(|(x, y)| ClassicViolation::DownwardClosure { x, y });
        let ax2 = b
            .all()
            .iter()
            .find(|&a| !self.in_con(TokenSet::singleton(a)))
            .map(|a| ClassicViolation::SingletonMissing { a });
        let ax3 = b.con.iter().find_map(|(&x, &e)| {
            e.iter()
                .find(|&a| !self.in_con(x.with(a)))
                .map(|a| ClassicViolation::ExtensionConsistent { x, a })
        });
        let ax4 = b
            .con
            .iter()
            .find(|(_, e)| !e.contains(self.delta))
            .map(|(&x, _)| ClassicViolation::DeltaEntailed { x });
        let ax6 = b.con.iter().find_map(|(&x, &e)| {
            x.difference(e)
                .iter()
                .next()
                .map(|a| ClassicViolation::Reflexive { x, a })
        });
        let mut notes = Vec::new();
        if strict {
            let printed = b.con.iter().find_map(|(&x, &ex)| {
                b.con.iter().find_map(|(&y, &ey)| {
                    (y.is_subset(ex))
                        .then(|| ex.difference(ey).iter().next())
                        .flatten()
                        .map(|a| ClassicViolation::Printed { x, y, a })
                })
            });
            notes.push(("5 printed", printed));
        }
        Ok(ClassicReport {
            results: vec![
                ("1", ax1),
                ("2", ax2),
                ("3", ax3),
                ("4", ax4),
                ("5", transitive_violation(b)),
                ("6", ax6),
            ],
            axioms: 6,
            notes,
        })
    }

    pub fn is_valid(&self) -> bool {
        self.validate(false).is_ok_and(|r| r.is_valid())
    }

    pub fn render_report(&self, r: &ClassicReport) -> String {
        r.render_with(&self.body, Some(self.delta))
    }

    fn require_valid(&self) -> Result<()> {
        match self.validate(false)?.first_failure() {
            None => Ok(()),
            Some((l, v)) => Err(Error::InvalidSystem(format!(
                "not an algebraic information system, axiom {l}: {}",
                v.render_with(&self.body, Some(self.delta))
            ))),
        }
    }

    /// Sets that are finitely consistent and closed under entailment.
    pub fn points(&self) -> Result<Vec<TokenSet>> {
        self.body.points(false)
    }

    pub fn point_poset(&self) -> Result<FinPoset> {
        inclusion_poset(|x| self.fmt_set(x), &self.points()?)
    }
}

/// Adds the fresh token `⊥ε` as `Δ`, with `(i, X)` consistent when
/// `X \ {ε} ∈ con` and `(i, X) ⊨ a ⟺ X \ {ε} ⊢ a ∨ a = ε`.
pub fn isw_from_cis(c: &Cis) -> Result<Isw> {
    c.require_valid()?;
    if c.token(FRESH_TOKEN).is_some() {
        return Err(Error::FreshTokenClash(FRESH_TOKEN.into()));
    }
    let n = c.len();
    if n + 1 > MAX_TOKENS {
        return Err(Error::size("tokens", n + 1, MAX_TOKENS));
    }
    let eps = Token(n);
    let mut tokens = c.tokens().to_vec();
    tokens.push(FRESH_TOKEN.into());
    let mut entries = Vec::new();
    for i in 0..=n {
        for (x, e) in c.con_entries() {
            for body in [x, x.with(eps)] {
                entries.push((WitnessedSet::new(Token(i), body), e.with(eps)));
            }
        }
    }
    let s = Isw::from_entailment_map(tokens, eps, entries)?;
    s.require_valid()?;
    Ok(s)
}

/// The iso `x ↦ x ∪ {ε}` from the points of `c` onto the states of
/// [`isw_from_cis`]; entry `k` is the state index of point `k`.
pub fn cis_isw_iso(c: &Cis) -> Result<Vec<usize>> {
    let s = isw_from_cis(c)?;
    let eps = Token(c.len());
    let points = c.points()?;
    let sp = s.state_poset()?;
    let image = points
        .iter()
        .map(|&x| sp.index_of(x.with(eps)))
        .collect::<Option<Vec<_>>>()
        .ok_or_else(|| Error::IsoCheckFailed("a point does not extend to a state".into()))?;
    check_iso(&c.point_poset()?, &sp, &image)?;
    Ok(image)
}

fn check_iso(points: &FinPoset, sp: &StatePoset, image: &[usize]) -> Result<()> {
    if points.len() != sp.states.len() || !is_order_iso(points, &sp.poset, image) {
        return Err(Error::IsoCheckFailed("points and states are not order-isomorphic".into()));
    }
    Ok(())
}

fn require_condition(s: &Isw, c: Condition) -> Result<()> {
    let r = s.check_condition(c)?;
    match r.counterexample {
        None => Ok(()),
        Some(v) => {
            let msg = v.render(s);
            Err(match c {
                Condition::Bc => Error::BcViolated(msg),
                _ => Error::AlgPlusViolated(msg),
            })
        }
    }
}

/// `con = ⋃ Con(i)` and `X ⊩ a ⟺ ∃i. (i, X) ∈ Con ∧ (i, X) ⊢ a`.
pub fn cis_from_isw(s: &Isw) -> Result<Cis> {
    s.require_valid()?;
    require_condition(s, Condition::Bc)?;
    let mut con: BTreeMap<TokenSet, TokenSet> = BTreeMap::new();
    for (p, e) in s.con_entries() {
        let slot = con.entry(p.body).or_default();
        *slot = slot.union(e);
    }
    Ok(Cis {
        body: Body {
            tokens: s.tokens().to_vec(),
            con,
        },
    })
}

/// `Con = A × con` with witness-independent entailment.
pub fn isw_from_ais(a: &Ais) -> Result<Isw> {
    a.require_valid()?;
    let entries: Vec<(WitnessedSet, TokenSet)> = (0..a.len())
        .flat_map(|i| {
            a.con_entries()
                .map(move |(x, e)| (WitnessedSet::new(Token(i), x), e))
        })
        .collect();
    let s = Isw::from_entailment_map(a.tokens().to_vec(), a.delta, entries)?;
    s.require_valid()?;
    Ok(s)
}

/// The reflexive part: tokens `j` with `(j, {j}) ⊢ j`, the sets consistent
/// at a reflexive witness, and entailment at reflexive witnesses. Token
/// order follows `s`.
pub fn ais_from_isw(s: &Isw) -> Result<Ais> {
    s.require_valid()?;
    require_condition(s, Condition::Bc)?;
    require_condition(s, Condition::AlgPlus)?;
    let refl = s.reflexive_tokens();
    let old: Vec<Token> = refl.iter().collect();
    let renumber = |x: TokenSet| -> TokenSet {
        x.iter()
            .filter_map(|t| old.iter().position(|&o| o == t).map(Token))
            .collect()
    };
    let mut con: BTreeMap<TokenSet, TokenSet> = BTreeMap::new();
    for (p, e) in s.con_entries() {
        if refl.contains(p.witness) && p.body.is_subset(refl) {
            let slot = con.entry(renumber(p.body)).or_default();
            *slot = slot.union(renumber(e.intersection(refl)));
        }
    }
    let tokens = old.iter().map(|&t| s.name(t).to_string()).collect();
    let delta = Token(old.iter().position(|&t| t == s.delta()).ok_or_else(|| {
        Error::InvalidSystem("Δ is not reflexive".into())
    })?);
    Ok(Ais {
        body: Body { tokens, con },
        delta,
    })
}

/// The iso `x ↦ x ∩ A_refl` from the states of `s` onto the points of
/// [`ais_from_isw`]; entry `k` is the point index of state `k`.
pub fn ais_isw_iso(s: &Isw) -> Result<Vec<usize>> {
    let a = ais_from_isw(s)?;
    let refl: Vec<Token> = s.reflexive_tokens().iter().collect();
    let sp = s.state_poset()?;
    let points = a.points()?;
    let image = sp
        .states
        .iter()
        .map(|&x| {
            let y: TokenSet = refl
                .iter()
                .enumerate()
                .filter(|(_, &t)| x.contains(t))
                .map(|(k, _)| Token(k))
                .collect();
            points.binary_search(&y).ok()
        })
        .collect::<Option<Vec<_>>>()
        .ok_or_else(|| Error::IsoCheckFailed("a state does not restrict to a point".into()))?;
    let pp = a.point_poset()?;
    if pp.len() != sp.states.len() || !is_order_iso(&sp.poset, &pp, &image) {
        return Err(Error::IsoCheckFailed("states and points are not order-isomorphic".into()));
    }
    Ok(image)
}


#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;
    use crate::domconv::isw_from_poset;
    use crate::finposet::fixtures::{c2, m};
    use crate::system::fixtures::t;

    #[test]
    fn cis1_points_and_conversion() {
        let c = cis1();
        let r = c.validate().unwrap();
        assert!(r.is_valid(), "{}", c.render_report(&r));
        assert_eq!(c.points().unwrap(), vec![set(&[]), set(&[0])]);
        let s = isw_from_cis(&c).unwrap();
        assert_eq!(s.tokens(), ["a", FRESH_TOKEN]);
        assert_eq!(s.enumerate_states(), vec![set(&[1]), set(&[0, 1])]);
        assert!(s.satisfies(Condition::Bc));
        assert_eq!(cis_isw_iso(&c).unwrap(), vec![0, 1]);
    }

    #[test]
    fn cis_without_entailment() {
        let c = Cis::new(vec!["a".into()], [set(&[]), set(&[0])], []).unwrap();
        assert!(c.is_valid());
        assert_eq!(c.points().unwrap(), vec![set(&[])]);
        let s = isw_from_cis(&c).unwrap();
        assert_eq!(s.enumerate_states(), vec![set(&[1])]);
    }

    #[test]
    fn cis_with_uninterpolated_entailment() {
        let c = Cis::new(
            vec!["a".into()],
            [set(&[]), set(&[0])],
            [(set(&[]), Token(0)), (set(&[0]), Token(0))],
        )
        .unwrap();
        // ∅ ⊢ {a} ⊢ a interpolates
        assert!(c.validate().unwrap().verdict("6⇐").is_none());
        let c = Cis::new(vec!["a".into()], [set(&[]), set(&[0])], [(set(&[]), Token(0))]).unwrap();
        let r = c.validate().unwrap();
        assert!(r.verdict("5").is_some());
    }

    #[test]
    fn fresh_name_clash() {
        let c = Cis::new(vec![FRESH_TOKEN.into()], [set(&[]), set(&[0])], []).unwrap();
        assert!(matches!(isw_from_cis(&c), Err(Error::FreshTokenClash(_))));
    }

    #[test]
    fn ais1_axioms_and_points() {
        let a = ais1();
        let r = a.validate(true).unwrap();
        assert!(r.is_valid(), "{}", a.render_report(&r));
        assert!(r.verdict("5 printed").is_some());
        assert_eq!(a.points().unwrap(), vec![set(&[0]), set(&[0, 1])]);
        let s = isw_from_ais(&a).unwrap();
        assert_eq!(s.enumerate_states(), vec![set(&[0]), set(&[0, 1])]);
        for c in Condition::ALL {
            assert!(s.satisfies(c), "{c}");
        }
        let back = ais_from_isw(&s).unwrap();
        assert_eq!(back, a);
        assert_eq!(ais_isw_iso(&s).unwrap(), vec![0, 1]);
    }

    #[test]
    fn ais1_breakages() {
        let con = [set(&[]), set(&[0]), set(&[1]), set(&[0, 1])];
        let no_delta: Vec<(TokenSet, Token)> =
            con.iter().flat_map(|&x| x.iter().map(move |b| (x, b))).collect();
        let a = Ais::new(vec!["Δ".into(), "a".into()], Token(0), con, no_delta).unwrap();
        assert!(matches!(a.validate(false).unwrap().verdict("4"), Some(ClassicViolation::DeltaEntailed { .. })));

        let ent: Vec<(TokenSet, Token)> = ais1()
            .con_entries()
            .flat_map(|(x, e)| e.iter().map(move |b| (x, b)))
            .filter(|&(x, b)| !(x == set(&[1]) && b == Token(1)))
            .collect();
        let a = Ais::new(vec!["Δ".into(), "a".into()], Token(0), con, ent).unwrap();
        assert!(matches!(a.validate(false).unwrap().verdict("6"), Some(ClassicViolation::Reflexive { .. })));
    }

    #[test]
    fn witness_free_views_of_domain_systems() {
        let c = cis_from_isw(&t()).unwrap();
        assert!(c.is_valid());
        assert_eq!(c.points().unwrap(), t().enumerate_states());
        let s = isw_from_poset(&c2()).unwrap();
        assert_eq!(cis_from_isw(&s).unwrap().points().unwrap(), s.enumerate_states());
        let sm = isw_from_poset(&m()).unwrap();
        assert!(matches!(cis_from_isw(&sm), Err(Error::BcViolated(_))));
        assert!(matches!(ais_from_isw(&sm), Err(Error::BcViolated(_))));
        let a = ais_from_isw(&t()).unwrap();
        assert_eq!(a.points().unwrap(), vec![set(&[0])]);
    }
}
