// SPDX-License-Identifier: Apache-2.0
//! The information system `I(D)` of a finite L-domain `D`, the maps
//! `sp: |I(D)| → D` and `st: D → |I(D)|`, and the round trip
//! `D ≅ 𝓛(I(D))`.
//!
//! For finite `D` every element is compact, so the basis is all of `D` and
//! the tokens of `I(D)` are the elements of `D` in input order.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::finposet::{FinPoset, LDomainFailure, Relation};
use crate::states::StatePoset;
use crate::system::{Condition, Isw, WitnessedSet, VALIDATE_TOKEN_LIMIT};
use crate::tokenset::{Token, TokenSet};

/// A domain together with its information system and the two comparison maps.
#[derive(Debug, Clone)]
pub struct DomSysBridge {
    pub source: FinPoset,
    pub system: Isw,
    way_below: Relation,
    sp: BTreeMap<TokenSet, usize>,
    st: Vec<TokenSet>,
}

fn require_l_domain(d: &FinPoset) -> Result<()> {
    match d.analyze().l_domain_counterexample {
        None => Ok(()),
        Some(LDomainFailure::NotPointed) => Err(Error::NotLDomain("no least element".into())),
        Some(LDomainFailure::NoLocalLub { z, x, y }) => Err(Error::NotLDomain(format!(
            "{} and {} have no least upper bound below {}",
            d.name(x),
            d.name(y),
            d.name(z)
        ))),
    }
}

fn ideal_set(d: &FinPoset, rel: &Relation, alpha: usize) -> TokenSet {
    d.elems().filter(|&a| rel.contains(a, alpha)).map(Token).collect()
}

/// `I(D)`: `Con = {(i, X) : X ⊆ ↓i}` and `(i, X) ⊢ a ⟺ a ≪ ⊔^i X`.
pub fn isw_from_poset(d: &FinPoset) -> Result<Isw> {
    if d.len() > VALIDATE_TOKEN_LIMIT {
        return Err(Error::size("poset elements", d.len(), VALIDATE_TOKEN_LIMIT));
    }
    require_l_domain(d)?;
    let wb = d.way_below();
    let bottom = d.minimum().expect("L-domains are pointed");
    let mut entries = Vec::new();
    for i in d.elems() {
        let below = ideal_set(d, d.order(), i);
        for x in below.subsets_canonical() {
            let members: Vec<usize> = x.iter().map(Token::index).collect();
            let lub = d.local_lub(i, &members)?;
            entries.push((WitnessedSet::new(Token(i), x), ideal_set(d, &wb, lub)));
        }
    }
    Isw::from_entailment_map(d.names().to_vec(), Token(bottom), entries)
}

impl DomSysBridge {
    pub fn new(d: &FinPoset) -> Result<Self> {
        let system = isw_from_poset(d)?;
        let way_below = d.way_below();
        let st: Vec<TokenSet> = d.elems().map(|a| ideal_set(d, &way_below, a)).collect();
        let sp = st.iter().enumerate().map(|(a, &x)| (x, a)).collect();
        Ok(DomSysBridge {
            source: d.clone(),
            system,
            way_below,
            sp,
            st,
        })
    }

    /// `sp(x) = ⊔x`, computed directly in `D`.
    pub fn sp_map(&self, x: TokenSet) -> Result<usize> {
        if !self.system.is_state(x) {
            return Err(Error::NotAState(self.system.fmt_set(x)));
        }
        let members: Vec<usize> = x.iter().map(Token::index).collect();
        let lub = self
            .source
            .lub(&members)
            .ok_or_else(|| Error::NotAState(self.system.fmt_set(x)))?;
        debug_assert_eq!(self.sp.get(&x), Some(&lub));
        Ok(lub)
    }

    /// `st(α) = {a : a ≪ α}`.
    pub fn st_map(&self, alpha: usize) -> Result<TokenSet> {
        let x = *self
            .st
            .get(alpha)
            .ok_or_else(|| Error::UnknownElem(format!("#{alpha}")))?;
        debug_assert_eq!(x, ideal_set(&self.source, &self.way_below, alpha));
        debug_assert!(self.system.is_state(x));
        Ok(x)
    }

    pub fn st_by_name(&self, name: &str) -> Result<TokenSet> {
        let alpha = self
            .source
            .index_of(name)
            .ok_or_else(|| Error::UnknownElem(name.to_string()))?;
        self.st_map(alpha)
    }
}

/// The outcome of [`roundtrip_check`].
#[derive(Debug, Clone)]
pub struct RoundTrip {
    pub bridge: DomSysBridge,
    pub state_poset: StatePoset,
    /// `iso[α]` is the state-poset index of `st(α)`.
    pub iso: Vec<usize>,
    pub bounded_complete: bool,
    pub bc_condition: bool,
    pub alg: bool,
}

/// Verifies `D ≅ 𝓛(I(D))` through `st`, together with
/// `D` bounded-complete ⟺ (BC) in `I(D)`, and (ALG) in `I(D)`.
pub fn roundtrip_check(d: &FinPoset) -> Result<RoundTrip> {
    let bridge = DomSysBridge::new(d)?;
    let sys = &bridge.system;
    let state_poset = sys.state_poset()?;
    let fail = |msg: String| Err(Error::IsoCheckFailed(msg));

    let mut iso = Vec::with_capacity(d.len());
    for alpha in d.elems() {
        let x = bridge.st_map(alpha)?;
        let Some(k) = state_poset.index_of(x) else {
            return fail(format!("st({}) is not a state", d.name(alpha)));
        };
        if bridge.sp_map(x)? != alpha {
            return fail(format!("sp(st({})) differs", d.name(alpha)));
        }
        iso.push(k);
    }
    for &x in &state_poset.states {
        let alpha = bridge.sp_map(x)?;
        if bridge.st_map(alpha)? != x {
            return fail(format!("st(sp({})) differs", sys.fmt_set(x)));
        }
    }
    if !crate::finposet::is_order_iso(d, &state_poset.poset, &iso) {
        return fail("st is not an order-isomorphism".into());
    }

    let bounded_complete = d.analyze().bounded_complete();
    let bc_condition = sys.satisfies(Condition::Bc);
    let alg = sys.satisfies(Condition::Alg);
    if bounded_complete != bc_condition {
        return fail(format!(
            "bounded-complete = {bounded_complete} but (BC) = {bc_condition}"
        ));
    }
    if !alg {
        return fail("(ALG) fails for a finite domain".into());
    }
    Ok(RoundTrip {
        bridge,
        state_poset,
        iso,
        bounded_complete,
        bc_condition,
        alg,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finposet::fixtures::{c2, flat2, m, singleton};
    use crate::system::fixtures::ws;

    fn set(xs: &[usize]) -> TokenSet {
        xs.iter().map(|&i| Token(i)).collect()
    }

    #[test]
    fn chain_of_two() {
        let s = isw_from_poset(&c2()).unwrap();
        let con: Vec<WitnessedSet> = s.con_entries().map(|(p, _)| p).collect();
        assert_eq!(
            con,
            vec![ws(0, &[]), ws(0, &[0]), ws(1, &[]), ws(1, &[0]), ws(1, &[1]), ws(1, &[0, 1])]
        );
        assert_eq!(s.entailed(ws(1, &[0])), Some(set(&[0])));
        assert!(s.validate().unwrap().is_valid());

        let b = DomSysBridge::new(&c2()).unwrap();
        assert_eq!(b.sp_map(set(&[0])), Ok(0));
        assert_eq!(b.sp_map(set(&[0, 1])), Ok(1));
        assert_eq!(b.st_map(1), Ok(set(&[0, 1])));
    }

    #[test]
    fn singleton_gives_the_one_point_system() {
        let s = isw_from_poset(&singleton()).unwrap();
        let t = crate::system::fixtures::t();
        assert_eq!(s.con_entries().collect::<Vec<_>>(), t.con_entries().collect::<Vec<_>>());
    }

    #[test]
    fn fixture_m() {
        let b = DomSysBridge::new(&m()).unwrap();
        assert_eq!(b.sp_map(set(&[0, 1, 2, 3])), Ok(3));
        assert_eq!(b.st_map(0), Ok(set(&[0])));
        assert_eq!(b.st_map(4), Ok(set(&[0, 1, 2, 4])));
        assert_eq!(b.system.entails(ws(3, &[1, 2]), Token(3)), Ok(true));
        assert!(!b.system.satisfies(Condition::Bc));
    }

    #[test]
    fn roundtrips() {
        let r = roundtrip_check(&c2()).unwrap();
        assert_eq!(r.iso, vec![0, 1]);
        assert!(r.bc_condition);
        let r = roundtrip_check(&m()).unwrap();
        assert_eq!(r.state_poset.states.len(), 5);
        assert!(!r.bc_condition && !r.bounded_complete);
        let r = roundtrip_check(&flat2()).unwrap();
        assert!(r.bc_condition);
    }

    #[test]
    fn rejects_non_l_domains() {
        let antichain = FinPoset::from_pairs(&["p", "q"], &[]).unwrap();
        assert!(matches!(isw_from_poset(&antichain), Err(Error::NotLDomain(_))));
    }
}
