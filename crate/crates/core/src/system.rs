// SPDX-License-Identifier: Apache-2.0
//! Information systems with witnesses: a token set `A`, a distinguished
//! token `Δ`, a witnessed consistency predicate `Con ⊆ A × Pf(A)` and an
//! entailment relation `⊢ ⊆ Con × A`.
//!
//! Entailment is stored extensionally, as the set of tokens entailed by each
//! consistent pair. The validator checks the ten axioms against that relation;
//! it never completes it.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use crate::error::{Error, Result};
use crate::tokenset::{Token, TokenSet, MAX_TOKENS};

/// Token bound for the exhaustive validator.
pub const VALIDATE_TOKEN_LIMIT: usize = 16;

/// A pair `(i, X)`: a finite set `X` together with its consistency witness `i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct WitnessedSet {
    pub witness: Token,
    pub body: TokenSet,
}

impl WitnessedSet {
    pub fn new(witness: Token, body: TokenSet) -> Self {
        WitnessedSet { witness, body }
    }

    /// `{i} ∪ X`, the tokens a state must contain for this pair to apply.
    pub fn support(self) -> TokenSet {
        self.body.with(self.witness)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Isw {
    tokens: Vec<String>,
    delta: Token,
    /// `con[i]` maps each `X ∈ Con(i)` to `[X]_i`, the tokens `(i, X)` entails.
    con: Vec<BTreeMap<TokenSet, TokenSet>>,
}

impl Isw {
    /// Assembles a system, checking only the structural invariants.
    pub fn new(
        tokens: Vec<String>,
        delta: Token,
        con: impl IntoIterator<Item = WitnessedSet>,
        ent: impl IntoIterator<Item = (WitnessedSet, Token)>,
    ) -> Result<Self> {
        let mut sys = Isw::empty(tokens, delta)?;
        let n = sys.len();
        for p in con {
            sys.check_pair(p)?;
            sys.con[p.witness.0].entry(p.body).or_default();
        }
        for (p, a) in ent {
            if a.0 >= n {
                return Err(Error::MalformedSystem(format!("entailed token #{} out of range", a.0)));
            }
            let rendered = sys.fmt_pair(p);
            match sys.con.get_mut(p.witness.0).and_then(|m| m.get_mut(&p.body)) {
                Some(e) => e.insert(a),
                None => {
                    return Err(Error::MalformedSystem(format!(
                        "entailment from {rendered}, which is not in Con"
                    )))
                }
            }
        }
        Ok(sys)
    }

    /// Builds a system from per-pair entailed sets.
    pub fn from_entailment_map(
        tokens: Vec<String>,
        delta: Token,
        entries: impl IntoIterator<Item = (WitnessedSet, TokenSet)>,
    ) -> Result<Self> {
        let mut sys = Isw::empty(tokens, delta)?;
        let all = TokenSet::full(sys.len());
        for (p, e) in entries {
            sys.check_pair(p)?;
            if !e.is_subset(all) {
                return Err(Error::MalformedSystem("entailed token out of range".into()));
            }
            sys.con[p.witness.0].insert(p.body, e);
        }
        Ok(sys)
    }

    fn empty(tokens: Vec<String>, delta: Token) -> Result<Self> {
        if tokens.len() > MAX_TOKENS {
            return Err(Error::size("tokens", tokens.len(), MAX_TOKENS));
        }
        if delta.0 >= tokens.len() {
            return Err(Error::MalformedSystem("Δ is not a token".into()));
        }
        let mut seen = HashMap::new();
        for t in &tokens {
            if seen.insert(t.as_str(), ()).is_some() {
                return Err(Error::MalformedSystem(format!("duplicate token `{t}`")));
            }
        }
        let n = tokens.len();
        Ok(Isw {
            tokens,
            delta,
            con: vec![BTreeMap::new(); n],
        })
    }

    fn check_pair(&self, p: WitnessedSet) -> Result<()> {
        if p.witness.0 >= self.len() || !p.body.is_subset(TokenSet::full(self.len())) {
            return Err(Error::MalformedSystem("consistent pair mentions an unknown token".into()));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn tokens(&self) -> &[String] {
        &self.tokens
    }

    pub fn token_iter(&self) -> impl Iterator<Item = Token> {
        (0..self.len()).map(Token)
    }

    pub fn all_tokens(&self) -> TokenSet {
        TokenSet::full(self.len())
    }

    pub fn delta(&self) -> Token {
        self.delta
    }

    pub fn name(&self, t: Token) -> &str {
        &self.tokens[t.0]
    }

    pub fn token(&self, name: &str) -> Option<Token> {
        self.tokens.iter().position(|t| t == name).map(Token)
    }

    /// `Con(i)`, each body mapped to the set it entails.
    pub fn con_of(&self, i: Token) -> &BTreeMap<TokenSet, TokenSet> {
        &self.con[i.0]
    }

    pub fn in_con(&self, p: WitnessedSet) -> bool {
        self.con[p.witness.0].contains_key(&p.body)
    }

    /// `[X]_i`, or `None` when `(i, X) ∉ Con`.
    pub fn entailed(&self, p: WitnessedSet) -> Option<TokenSet> {
        self.con.get(p.witness.0)?.get(&p.body).copied()
    }

    /// Every pair of `Con` with its entailed set, witness-major in canonical order.
    pub fn con_entries(&self) -> impl Iterator<Item = (WitnessedSet, TokenSet)> + '_ {
        self.con.iter().enumerate().flat_map(|(i, m)| {
            m.iter()
                .map(move |(&body, &e)| (WitnessedSet::new(Token(i), body), e))
        })
    }

    pub fn con_len(&self) -> usize {
        self.con.iter().map(|m| m.len()).sum()
    }

    /// Number of `((i, X), a)` entailment facts.
    pub fn ent_len(&self) -> usize {
        self.con_entries().map(|(_, e)| e.len()).sum()
    }

    /// `(i, X) ⊢ a`.
    pub fn entails(&self, p: WitnessedSet, a: Token) -> Result<bool> {
        Ok(self.entailed_or_err(p)?.contains(a))
    }

    /// `(i, X) ⊢ Y`.
    pub fn entails_set(&self, p: WitnessedSet, ys: TokenSet) -> Result<bool> {
        Ok(ys.is_subset(self.entailed_or_err(p)?))
    }

    /// `(i, X) ⊢ (e, Z)`, i.e. `(i, X) ⊢ e` and `(i, X) ⊢ Z`.
    pub fn entails_pair(&self, p: WitnessedSet, q: WitnessedSet) -> Result<bool> {
        Ok(q.support().is_subset(self.entailed_or_err(p)?))
    }

    pub(crate) fn entailed_or_err(&self, p: WitnessedSet) -> Result<TokenSet> {
        self.entailed(p)
            .ok_or_else(|| Error::NotConsistent(self.fmt_pair(p)))
    }

    pub fn fmt_set(&self, s: TokenSet) -> String {
        let names: Vec<&str> = s.iter().map(|t| self.name(t)).collect();
        format!("{{{}}}", names.join(","))
    }

    pub fn fmt_pair(&self, p: WitnessedSet) -> String {
        let w = self.tokens.get(p.witness.0).map_or("?", |s| s.as_str());
        format!("({},{})", w, self.fmt_set(p.body))
    }

    fn check_size(&self) -> Result<()> {
        if self.len() > VALIDATE_TOKEN_LIMIT {
            return Err(Error::size("validator tokens", self.len(), VALIDATE_TOKEN_LIMIT));
        }
        Ok(())
    }

    /// Checks axioms (1)–(10), reporting the first counterexample of each.
    pub fn validate(&self) -> Result<ValidationReport> {
        self.check_size()?;
        Ok(Validator::new(self).run())
    }

    pub fn is_valid(&self) -> bool {
        self.validate().map(|r| r.is_valid()).unwrap_or(false)
    }

    pub(crate) fn require_valid(&self) -> Result<()> {
        let report = self.validate()?;
        match report.first_failure() {
            None => Ok(()),
            Some((axiom, v)) => Err(Error::InvalidSystem(format!(
                "axiom ({axiom}) fails: {}",
                v.render(self)
            ))),
        }
    }

    /// First instance of `(i,X) ⊢ (j,Y) ∧ (j,Y) ⊢ a` without `(i,X) ⊢ a`.
    pub fn strong_transitivity_violation(&self) -> Option<(WitnessedSet, WitnessedSet, Token)> {
        for (p, e) in self.con_entries() {
            for j in e.iter() {
                for (&y, &ey) in self.con_of(j) {
                    if y.is_subset(e) {
                        if let Some(a) = ey.difference(e).iter().next() {
                            return Some((p, WitnessedSet::new(j, y), a));
                        }
                    }
                }
            }
        }
        None
    }

    /// `(j, V)` is reflexive when `(j, V) ⊢ (j, V)`.
    pub fn is_reflexive(&self, p: WitnessedSet) -> bool {
        self.entailed(p).is_some_and(|e| p.support().is_subset(e))
    }

    /// `Con_refl`, in canonical order.
    pub fn reflexive_pairs(&self) -> Vec<WitnessedSet> {
        self.con_entries()
            .filter(|&(p, e)| p.support().is_subset(e))
            .map(|(p, _)| p)
            .collect()
    }

    /// Tokens `j` with `(j, {j}) ⊢ j`.
    pub fn reflexive_tokens(&self) -> TokenSet {
        self.token_iter()
            .filter(|&j| {
                self.entailed(WitnessedSet::new(j, TokenSet::singleton(j)))
                    .is_some_and(|e| e.contains(j))
            })
            .collect()
    }

    /// Evaluates a side condition after validating the system.
    pub fn check_condition(&self, which: Condition) -> Result<ConditionReport> {
        self.require_valid()?;
        Ok(self.condition_report(which))
    }

    /// Evaluates a side condition without validating first.
    pub fn condition_report(&self, which: Condition) -> ConditionReport {
        let counterexample = match which {
            Condition::Bc => self.bc_violation(),
            Condition::Alg => self.alg_violation(),
            Condition::Salg => self.salg_violation(),
            Condition::AlgPlus => self.alg_plus_violation(),
        };
        let con_refl = (which == Condition::Alg).then(|| self.reflexive_pairs());
        ConditionReport {
            condition: which,
            counterexample,
            con_refl,
        }
    }

    pub fn satisfies(&self, which: Condition) -> bool {
        self.condition_report(which).holds()
    }

    fn bc_violation(&self) -> Option<ConditionViolation> {
        // group witnesses by body, bodies in canonical order
        let mut by_body: BTreeMap<TokenSet, Vec<(Token, TokenSet)>> = BTreeMap::new();
        for (p, e) in self.con_entries() {
            by_body.entry(p.body).or_default().push((p.witness, e));
        }
        for (x, ws) in by_body {
            for (k, &(i, ei)) in ws.iter().enumerate() {
                for &(j, ej) in &ws[k + 1..] {
                    let diff = ei.union(ej).difference(ei.intersection(ej));
                    if let Some(a) = diff.iter().next() {
                        return Some(ConditionViolation::Bc { x, i, j, a });
                    }
                }
            }
        }
        None
    }

    fn alg_violation(&self) -> Option<ConditionViolation> {
        let refl: Vec<(WitnessedSet, TokenSet)> = self
            .con_entries()
            .filter(|&(p, e)| p.support().is_subset(e))
            .collect();
        let interpolates = |e: TokenSet, f: TokenSet| {
            refl.iter()
                .any(|&(q, eq)| q.support().is_subset(e) && f.is_subset(eq))
        };
        for (p, e) in self.con_entries() {
            // the condition is monotone in F, so F = [X]_i decides it
            if !interpolates(e, e) {
                let f = e
                    .subsets_canonical()
                    .into_iter()
                    .find(|&f| !interpolates(e, f))
                    .unwrap_or(e);
                return Some(ConditionViolation::Alg { p, f });
            }
        }
        None
    }

    fn salg_violation(&self) -> Option<ConditionViolation> {
        for (p, e) in self.con_entries() {
            for a in e.iter() {
                let found = self.con_of(p.witness).iter().any(|(&z, &ez)| {
                    z.is_subset(e) && z.is_subset(ez) && ez.contains(a)
                });
                if !found {
                    return Some(ConditionViolation::Salg { p, a });
                }
            }
        }
        None
    }

    fn alg_plus_violation(&self) -> Option<ConditionViolation> {
        let refl = self.reflexive_tokens();
        let single = |j: Token| {
            self.entailed(WitnessedSet::new(j, TokenSet::singleton(j)))
                .unwrap_or(TokenSet::EMPTY)
        };
        let interpolates =
            |e: TokenSet, f: TokenSet| e.intersection(refl).iter().any(|j| f.is_subset(single(j)));
        for (p, e) in self.con_entries() {
            if !interpolates(e, e) {
                let f = e
                    .subsets_canonical()
                    .into_iter()
                    .find(|&f| !interpolates(e, f))
                    .unwrap_or(e);
                return Some(ConditionViolation::AlgPlus { p, f });
            }
        }
        None
    }
}

/// Least extension of `seed` over the given `Con` closed under
/// `(i, ∅) ⊢ Δ`, monotonicity in the body, and transitivity at a fixed
/// witness. Interpolation is not completed.
pub fn entailment_closure(
    tokens: Vec<String>,
    delta: Token,
    con: impl IntoIterator<Item = WitnessedSet>,
    seed: impl IntoIterator<Item = (WitnessedSet, Token)>,
) -> Result<Isw> {
    let mut sys = Isw::new(tokens, delta, con, seed)?;
    loop {
        let mut changed = false;
        for i in 0..sys.len() {
            let bodies: Vec<TokenSet> = sys.con[i].keys().copied().collect();
            for &x in &bodies {
                let mut e = sys.con[i][&x];
                if x.is_empty() {
                    e.insert(delta);
                }
                for &y in &bodies {
                    let ey = sys.con[i][&y];
                    if y.is_subset(x) || y.is_subset(e) {
                        e = e.union(ey);
                    }
                }
                if e != sys.con[i][&x] {
                    sys.con[i].insert(x, e);
                    changed = true;
                }
            }
        }
        if !changed {
            return Ok(sys);
        }
    }
}

/// A concrete instance falsifying one of axioms (1)–(10).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IswViolation {
    /// `{i} ∉ Con(i)`.
    SelfConsistency { i: Token },
    /// `Y ⊆ X ∈ Con(i)` but `Y ∉ Con(i)`.
    DownwardClosure { i: Token, x: TokenSet, y: TokenSet },
    /// `(i, ∅) ⊬ Δ`.
    DeltaEntailed { i: Token },
    /// `(i, X) ⊢ Y` but `Y ∉ Con(i)`.
    EntailmentConsistent { i: Token, x: TokenSet, y: TokenSet },
    /// `X ⊆ Y`, `(i, X) ⊢ a`, `(i, Y) ⊬ a`.
    Monotone { i: Token, x: TokenSet, y: TokenSet, a: Token },
    /// `(i, X) ⊢ Y`, `(i, Y) ⊢ a`, `(i, X) ⊬ a`.
    Transitive { i: Token, x: TokenSet, y: TokenSet, a: Token },
    /// `{i} ∈ Con(j)`, `X ∈ Con(i)`, `X ∉ Con(j)`.
    ConInherited { i: Token, j: Token, x: TokenSet },
    /// `{i} ∈ Con(j)`, `(i, X) ⊢ a`, `(j, X) ⊬ a`.
    EntailmentInherited { i: Token, j: Token, x: TokenSet, a: Token },
    /// `{i} ∈ Con(j)`, `(j, X) ⊢ a`, `(i, X) ⊬ a`.
    EntailmentConservative { i: Token, j: Token, x: TokenSet, a: Token },
    /// `(i, X) ⊢ Y` with no `(e, Z)` such that `(i, X) ⊢ (e, Z) ⊢ Y`.
    Interpolation { i: Token, x: TokenSet, y: TokenSet },
}

impl IswViolation {
    pub fn render(&self, s: &Isw) -> String {
        let set = |x: &TokenSet| s.fmt_set(*x);
        let n = |t: &Token| s.name(*t).to_string();
        match self {
            IswViolation::SelfConsistency { i } => format!("{{{}}} ∉ Con({})", n(i), n(i)),
            IswViolation::DownwardClosure { i, x, y } => {
                format!("{} ⊆ {} ∈ Con({}) but {} ∉ Con({})", set(y), set(x), n(i), set(y), n(i))
            }
            IswViolation::DeltaEntailed { i } => {
                format!("({},{{}}) does not entail {}", n(i), n(&s.delta()))
            }
            IswViolation::EntailmentConsistent { i, x, y } => format!(
                "({},{}) ⊢ {} but {} ∉ Con({})",
                n(i),
                set(x),
                set(y),
                set(y),
                n(i)
            ),
            IswViolation::Monotone { i, x, y, a } => format!(
                "({},{}) ⊢ {} and {} ⊆ {} but ({},{}) does not entail {}",
                n(i),
                set(x),
                n(a),
                set(x),
                set(y),
                n(i),
                set(y),
                n(a)
            ),
            IswViolation::Transitive { i, x, y, a } => format!(
                "({},{}) ⊢ {} and ({},{}) ⊢ {} but ({},{}) does not entail {}",
                n(i),
                set(x),
                set(y),
                n(i),
                set(y),
                n(a),
                n(i),
                set(x),
                n(a)
            ),
            IswViolation::ConInherited { i, j, x } => format!(
                "{{{}}} ∈ Con({}) and {} ∈ Con({}) but {} ∉ Con({})",
                n(i),
                n(j),
                set(x),
                n(i),
                set(x),
                n(j)
            ),
            IswViolation::EntailmentInherited { i, j, x, a } => format!(
                "{{{}}} ∈ Con({}) and ({},{}) ⊢ {} but ({},{}) does not entail {}",
                n(i),
                n(j),
                n(i),
                set(x),
                n(a),
                n(j),
                set(x),
                n(a)
            ),
            IswViolation::EntailmentConservative { i, j, x, a } => format!(
                "{{{}}} ∈ Con({}) and ({},{}) ⊢ {} but ({},{}) does not entail {}",
                n(i),
                n(j),
                n(j),
                set(x),
                n(a),
                n(i),
                set(x),
                n(a)
            ),
            IswViolation::Interpolation { i, x, y } => format!(
                "({},{}) ⊢ {} has no interpolating pair",
                n(i),
                set(x),
                set(y)
            ),
        }
    }
}

/// Verdicts for axioms (1)–(10); `results[k]` is axiom `k + 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationReport {
    pub results: [Option<IswViolation>; 10],
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.results.iter().all(Option::is_none)
    }

    pub fn passed(&self) -> usize {
        self.results.iter().filter(|r| r.is_none()).count()
    }

    pub fn axiom(&self, k: usize) -> Option<IswViolation> {
        self.results[k - 1]
    }

    pub fn first_failure(&self) -> Option<(usize, IswViolation)> {
        self.results
            .iter()
            .enumerate()
            .find_map(|(k, r)| r.map(|v| (k + 1, v)))
    }

    pub fn render(&self, s: &Isw) -> String {
        let mut out = String::new();
        for (k, r) in self.results.iter().enumerate() {
            match r {
                None => out.push_str(&format!("axiom {:>2}: holds\n", k + 1)),
                Some(v) => out.push_str(&format!("axiom {:>2}: FAILS: {}\n", k + 1, v.render(s))),
            }
        }
        out.push_str(&format!("{}/10 axioms hold\n", self.passed()));
        out
    }
}

struct Validator<'a> {
    s: &'a Isw,
    /// Per witness: every immediate subset of every body is present.
    downward_closed: Vec<bool>,
}

impl<'a> Validator<'a> {
    fn new(s: &'a Isw) -> Self {
        let downward_closed = s
            .con
            .iter()
            .map(|m| m.keys().all(|&x| x.iter().all(|b| m.contains_key(&x.without(b)))))
            .collect();
        Validator { s, downward_closed }
    }

    fn run(&self) -> ValidationReport {
        ValidationReport {
            results: [
                self.axiom1(),
                self.axiom2(),
                self.axiom3(),
                self.axiom4(),
                self.axiom5(),
                self.axiom6(),
                self.axiom7(),
                self.axiom8(),
                self.axiom9(),
                self.axiom10(),
            ],
        }
    }

    fn tokens(&self) -> impl Iterator<Item = Token> {
        self.s.token_iter()
    }

    /// First subset of `set` missing from `Con(i)`, in canonical order.
    fn missing_subset(&self, i: Token, set: TokenSet) -> Option<TokenSet> {
        let m = &self.s.con[i.0];
        if self.downward_closed[i.0] && m.contains_key(&set) {
            return None;
        }
        set.subsets_canonical()
            .into_iter()
            .find(|y| !m.contains_key(y))
    }

    fn axiom1(&self) -> Option<IswViolation> {
        self.tokens()
            .find(|&i| !self.s.in_con(WitnessedSet::new(i, TokenSet::singleton(i))))
            .map(|i| IswViolation::SelfConsistency { i })
    }

    fn axiom2(&self) -> Option<IswViolation> {
        for i in self.tokens() {
            if self.downward_closed[i.0] {
                continue;
            }
            for &x in self.s.con[i.0].keys() {
                if let Some(y) = self.missing_subset(i, x) {
                    return Some(IswViolation::DownwardClosure { i, x, y });
                }
            }
        }
        None
    }

    fn axiom3(&self) -> Option<IswViolation> {
        let delta = self.s.delta;
        self.tokens()
            .find(|&i| {
                !self
                    .s
                    .entailed(WitnessedSet::new(i, TokenSet::EMPTY))
                    .is_some_and(|e| e.contains(delta))
            })
            .map(|i| IswViolation::DeltaEntailed { i })
    }

    fn axiom4(&self) -> Option<IswViolation> {
        for i in self.tokens() {
            for (&x, &e) in &self.s.con[i.0] {
                if let Some(y) = self.missing_subset(i, e) {
                    return Some(IswViolation::EntailmentConsistent { i, x, y });
                }
            }
        }
        None
    }

    fn monotone_at(&self, i: Token) -> Option<IswViolation> {
        let m = &self.s.con[i.0];
        if self.downward_closed[i.0] {
            let ok = m.iter().all(|(&y, &ey)| {
                y.iter()
                    .all(|b| m.get(&y.without(b)).is_some_and(|&ex| ex.is_subset(ey)))
            });
            if ok {
                return None;
            }
        }
        for (&x, &ex) in m {
            for (&y, &ey) in m {
                if x.is_subset(y) {
                    if let Some(a) = ex.difference(ey).iter().next() {
                        return Some(IswViolation::Monotone { i, x, y, a });
                    }
                }
            }
        }
        None
    }

    fn axiom5(&self) -> Option<IswViolation> {
        self.tokens().find_map(|i| self.monotone_at(i))
    }

    fn axiom6(&self) -> Option<IswViolation> {
        for i in self.tokens() {
            let m = &self.s.con[i.0];
            let monotone = self.monotone_at(i).is_none();
            for (&x, &e) in m {
                // with monotonicity, Y = [X]_i is the largest candidate
                if monotone {
                    if let Some(&ee) = m.get(&e) {
                        if ee.is_subset(e) {
                            continue;
                        }
                    }
                }
                for y in e.subsets_canonical() {
                    if let Some(&ey) = m.get(&y) {
                        if let Some(a) = ey.difference(e).iter().next() {
                            return Some(IswViolation::Transitive { i, x, y, a });
                        }
                    }
                }
            }
        }
        None
    }

    /// Pairs `(i, j)` with `{i} ∈ Con(j)`, `i` major.
    fn accessible(&self) -> impl Iterator<Item = (Token, Token)> + '_ {
        self.tokens().flat_map(move |i| {
            self.tokens()
                .filter(move |&j| self.s.in_con(WitnessedSet::new(j, TokenSet::singleton(i))))
                .map(move |j| (i, j))
        })
    }

    fn axiom7(&self) -> Option<IswViolation> {
        for (i, j) in self.accessible() {
            if let Some(&x) = self.s.con[i.0].keys().find(|x| !self.s.con[j.0].contains_key(x)) {
                return Some(IswViolation::ConInherited { i, j, x });
            }
        }
        None
    }

    fn axiom8(&self) -> Option<IswViolation> {
        for (i, j) in self.accessible() {
            for (&x, &e) in &self.s.con[i.0] {
                let ej = self.s.con[j.0].get(&x).copied().unwrap_or(TokenSet::EMPTY);
                if let Some(a) = e.difference(ej).iter().next() {
                    return Some(IswViolation::EntailmentInherited { i, j, x, a });
                }
            }
        }
        None
    }

    fn axiom9(&self) -> Option<IswViolation> {
        for (i, j) in self.accessible() {
            for (&x, &e) in &self.s.con[i.0] {
                if let Some(&ej) = self.s.con[j.0].get(&x) {
                    if let Some(a) = ej.difference(e).iter().next() {
                        return Some(IswViolation::EntailmentConservative { i, j, x, a });
                    }
                }
            }
        }
        None
    }

    fn has_interpolant(&self, e: TokenSet, y: TokenSet) -> bool {
        e.iter().any(|k| {
            self.s.con[k.0]
                .iter()
                .any(|(&z, &ez)| z.is_subset(e) && y.is_subset(ez))
        })
    }

    fn axiom10(&self) -> Option<IswViolation> {
        for (p, e) in self.s.con_entries() {
            // monotone in Y: an interpolant for [X]_i serves every Y ⊆ [X]_i
            if self.has_interpolant(e, e) {
                continue;
            }
            let y = e
                .subsets_canonical()
                .into_iter()
                .find(|&y| !self.has_interpolant(e, y))
                .unwrap_or(e);
            return Some(IswViolation::Interpolation {
                i: p.witness,
                x: p.body,
                y,
            });
        }
        None
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Condition {
    Bc,
    Alg,
    Salg,
    AlgPlus,
}

impl Condition {
    pub const ALL: [Condition; 4] = [Condition::Bc, Condition::Alg, Condition::Salg, Condition::AlgPlus];

    pub fn label(self) -> &'static str {
        match self {
            Condition::Bc => "BC",
            Condition::Alg => "ALG",
            Condition::Salg => "SALG",
            Condition::AlgPlus => "ALG+",
        }
    }
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConditionViolation {
    /// `(i, X), (j, X) ∈ Con` disagree on `a`.
    Bc { x: TokenSet, i: Token, j: Token, a: Token },
    /// `(i, X) ⊢ F` with no reflexive interpolant.
    Alg { p: WitnessedSet, f: TokenSet },
    /// `(i, X) ⊢ a` with no `Z ∈ Con(i)` such that `(i,X) ⊢ Z`, `(i,Z) ⊢ Z`, `(i,Z) ⊢ a`.
    Salg { p: WitnessedSet, a: Token },
    /// `(i, X) ⊢ F` with no reflexive token `j` such that `(i,X) ⊢ j` and `(j,{j}) ⊢ F`.
    AlgPlus { p: WitnessedSet, f: TokenSet },
}

impl ConditionViolation {
    pub fn render(&self, s: &Isw) -> String {
        match *self {
            ConditionViolation::Bc { x, i, j, a } => {
                let (yes, no) = if s.entailed(WitnessedSet::new(i, x)).is_some_and(|e| e.contains(a)) {
                    (i, j)
                } else {
                    (j, i)
                };
                format!(
                    "X={} i={} j={}: ({},{}) ⊢ {} but not ({},{}) ⊢ {}",
                    s.fmt_set(x),
                    s.name(i),
                    s.name(j),
                    s.name(yes),
                    s.fmt_set(x),
                    s.name(a),
                    s.name(no),
                    s.fmt_set(x),
                    s.name(a)
                )
            }
            ConditionViolation::Alg { p, f } => format!(
                "{} ⊢ {} has no reflexive interpolant",
                s.fmt_pair(p),
                s.fmt_set(f)
            ),
            ConditionViolation::Salg { p, a } => format!(
                "{} ⊢ {} has no reflexive interpolant at the same witness",
                s.fmt_pair(p),
                s.name(a)
            ),
            ConditionViolation::AlgPlus { p, f } => format!(
                "{} ⊢ {} has no reflexive token interpolant",
                s.fmt_pair(p),
                s.fmt_set(f)
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConditionReport {
    pub condition: Condition,
    pub counterexample: Option<ConditionViolation>,
    /// `Con_refl`, reported for (ALG) only.
    pub con_refl: Option<Vec<WitnessedSet>>,
}

impl ConditionReport {
    pub fn holds(&self) -> bool {
        self.counterexample.is_none()
    }

    pub fn render(&self, s: &Isw) -> String {
        let mut out = match &self.counterexample {
            None => format!("{}: holds\n", self.condition),
            Some(v) => format!("{}: FAILS: {}\n", self.condition, v.render(s)),
        };
        if let Some(refl) = &self.con_refl {
            let pairs: Vec<String> = refl.iter().map(|&p| s.fmt_pair(p)).collect();
            out.push_str(&format!("  Con_refl = {{{}}}\n", pairs.join(", ")));
        }
        out
    }
}
