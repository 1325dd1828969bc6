// SPDX-License-Identifier: Apache-2.0
//! States of an information system with witnesses and the L-domain they form.
//!
//! A state is a token set that is finitely consistent, closed under
//! entailment, and in which every token is derivable. States are represented
//! as plain [`TokenSet`]s and compared extensionally.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::finposet::{FinPoset, Relation};
use crate::system::{Isw, WitnessedSet};
use crate::tokenset::{Token, TokenSet};

/// Token bound for the subset-filter enumeration.
pub const ORACLE_TOKEN_LIMIT: usize = 16;

/// The first of the three state conditions a token set violates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StateViolation {
    /// (1): the finite subset `f` has no witness inside the set.
    NoWitness { f: TokenSet },
    /// (2): `(i, X)` applies inside the set and entails `a`, which is missing.
    NotClosed { p: WitnessedSet, a: Token },
    /// (3): `a` is not entailed by any pair applying inside the set.
    NotDerivable { a: Token },
}

impl StateViolation {
    pub fn condition(&self) -> usize {
        match self {
            StateViolation::NoWitness { .. } => 1,
            StateViolation::NotClosed { .. } => 2,
            StateViolation::NotDerivable { .. } => 3,
        }
    }

    pub fn render(&self, s: &Isw) -> String {
        match *self {
            StateViolation::NoWitness { f } => {
                format!("condition (1): {} has no witness in the set", s.fmt_set(f))
            }
            StateViolation::NotClosed { p, a } => format!(
                "condition (2): {} ⊢ {} but {} is missing",
                s.fmt_pair(p),
                s.name(a),
                s.name(a)
            ),
            StateViolation::NotDerivable { a } => {
                format!("condition (3): {} is not derivable", s.name(a))
            }
        }
    }
}

/// The inclusion-ordered poset of all states, `𝓛(A)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StatePoset {
    pub poset: FinPoset,
    /// States in canonical order; element `k` of `poset` is `states[k]`.
    pub states: Vec<TokenSet>,
    /// Index of `[∅]_Δ`.
    pub bottom: usize,
    /// `(i, X) ↦ [X]_i`, as an index into `states`.
    pub principal_index: BTreeMap<WitnessedSet, usize>,
}

impl StatePoset {
    pub fn index_of(&self, x: TokenSet) -> Option<usize> {
        self.states.binary_search(&x).ok()
    }
}

impl Isw {
    /// Pairs `(i, X) ∈ Con` with `{i} ∪ X ⊆ x`, with their entailed sets.
    fn applicable(&self, x: TokenSet) -> impl Iterator<Item = (WitnessedSet, TokenSet)> + '_ {
        x.iter().flat_map(move |i| {
            self.con_of(i)
                .iter()
                .filter(move |(body, _)| body.is_subset(x))
                .map(move |(&body, &e)| (WitnessedSet::new(i, body), e))
        })
    }

    /// Checks the three state conditions, returning the first one violated.
    pub fn state_violation(&self, x: TokenSet) -> Option<StateViolation> {
        // (1); a witness of x itself with a downward-closed Con settles every subset
        let whole = x.iter().any(|i| {
            let m = self.con_of(i);
            m.contains_key(&x)
                && m.keys()
                    .all(|&y| y.iter().all(|b| m.contains_key(&y.without(b))))
        });
        if !whole {
            for f in x.subsets_canonical() {
                if !x.iter().any(|i| self.con_of(i).contains_key(&f)) {
                    return Some(StateViolation::NoWitness { f });
                }
            }
        }
        let mut derived = TokenSet::EMPTY;
        for (p, e) in self.applicable(x) {
            if let Some(a) = e.difference(x).iter().next() {
                return Some(StateViolation::NotClosed { p, a });
            }
            derived = derived.union(e);
        }
        x.difference(derived)
            .iter()
            .next()
            .map(|a| StateViolation::NotDerivable { a })
    }

    pub fn is_state(&self, x: TokenSet) -> bool {
        x.is_subset(self.all_tokens()) && self.state_violation(x).is_none()
    }

    /// The single condition (ST) replacing conditions (1) and (3):
    /// every finite `F ⊆ x` is entailed by one pair applying inside `x`.
    pub fn st_condition_combined(&self, x: TokenSet) -> bool {
        // monotone in F, and x is the largest finite subset of itself
        self.applicable(x).any(|(_, e)| x.is_subset(e))
    }

    /// `[X]_i`.
    pub fn principal_state(&self, p: WitnessedSet) -> Result<TokenSet> {
        let e = self.entailed_or_err(p)?;
        debug_assert!(self.is_state(e), "{} is not a state", self.fmt_set(e));
        Ok(e)
    }

    /// All states, in canonical order, as the distinct principal states.
    ///
    /// Complete for finite systems: every state is the union of a directed
    /// family of principal states, and a finite directed family has a maximum.
    pub fn enumerate_states(&self) -> Vec<TokenSet> {
        let set: BTreeSet<TokenSet> = self.con_entries().map(|(_, e)| e).collect();
        set.into_iter().collect()
    }

    /// All states, by filtering every subset of the token set.
    pub fn enumerate_states_oracle(&self) -> Result<Vec<TokenSet>> {
        if self.len() > ORACLE_TOKEN_LIMIT {
            return Err(Error::size("state oracle tokens", self.len(), ORACLE_TOKEN_LIMIT));
        }
        let mut out: Vec<TokenSet> = self
            .all_tokens()
            .submasks()
            .filter(|&x| self.state_violation(x).is_none())
            .collect();
        out.sort();
        Ok(out)
    }

    /// `𝓛(A)`: the states ordered by inclusion, with bottom `[∅]_Δ`.
    pub fn state_poset(&self) -> Result<StatePoset> {
        self.require_valid()?;
        let sp = self.state_poset_unchecked()?;
        let report = sp.poset.analyze();
        if !report.l_domain() || report.bottom != Some(sp.bottom) {
            return Err(Error::InvalidSystem(
                "state poset is not an L-domain with bottom [∅]_Δ".into(),
            ));
        }
        Ok(sp)
    }

    /// The state poset of a system already known to be valid.
    pub fn state_poset_unchecked(&self) -> Result<StatePoset> {
        let states = self.enumerate_states();
        let names = states.iter().map(|&x| self.fmt_set(x)).collect();
        let leq = Relation::from_fn(states.len(), |a, b| states[a].is_subset(states[b]));
        let poset = FinPoset::from_order(names, leq)?;
        let principal_index: BTreeMap<WitnessedSet, usize> = self
            .con_entries()
            .map(|(p, e)| (p, states.binary_search(&e).expect("principal state listed")))
            .collect();
        let bottom_pair = WitnessedSet::new(self.delta(), TokenSet::EMPTY);
        let bottom = *principal_index
            .get(&bottom_pair)
            .ok_or_else(|| Error::NotConsistent(self.fmt_pair(bottom_pair)))?;
        Ok(StatePoset {
            poset,
            states,
            bottom,
            principal_index,
        })
    }

    fn require_state(&self, x: TokenSet) -> Result<()> {
        if self.is_state(x) {
            Ok(())
        } else {
            Err(Error::NotAState(self.fmt_set(x)))
        }
    }

    /// `x ≪ y` via its entailment characterisation: some `(i, V) ∈ Con` has
    /// `{i} ∪ V ⊆ y` and `x ⊆ [V]_i`.
    pub fn approx(&self, x: TokenSet, y: TokenSet) -> Result<bool> {
        self.require_state(x)?;
        self.require_state(y)?;
        Ok(self.applicable(y).any(|(_, e)| x.is_subset(e)))
    }

    /// `x ⊔^z y` as the union of all `[Z]_k` with `k ∈ z` and `Z ⊆ x ∪ y`.
    pub fn state_local_lub(&self, x: TokenSet, y: TokenSet, z: TokenSet) -> Result<TokenSet> {
        for s in [x, y, z] {
            self.require_state(s)?;
        }
        for s in [x, y] {
            if !s.is_subset(z) {
                return Err(Error::NotBounded {
                    x: self.fmt_set(s),
                    z: self.fmt_set(z),
                });
            }
        }
        let xy = x.union(y);
        let mut out = TokenSet::EMPTY;
        for k in z.iter() {
            for (&body, &e) in self.con_of(k) {
                if body.is_subset(xy) {
                    out = out.union(e);
                }
            }
        }
        Ok(out)
    }

    /// Whether `[Z]_i` is compact, decided by the existence of a reflexive
    /// `(j, V)` with `(i, Z) ⊢ (j, V)` and `(j, V) ⊢ [Z]_i`.
    pub fn principal_is_compact(&self, p: WitnessedSet) -> Result<bool> {
        let e = self.entailed_or_err(p)?;
        Ok(self.con_entries().any(|(q, eq)| {
            q.support().is_subset(e) && q.support().is_subset(eq) && e.is_subset(eq)
        }))
    }
}
