// SPDX-License-Identifier: Apache-2.0
//! The one-point system, the unique mapping into it, and binary products
//! with their projections and pairing.

use crate::appmap::{all_valid_maps, ApproxMap};
use crate::error::{Error, Result};
use crate::finposet::{is_order_iso, FinPoset, Relation};
use crate::states::StatePoset;
use crate::system::{Isw, WitnessedSet};
use crate::tokenset::{Token, TokenSet, MAX_TOKENS};

/// Cap on `|Con(S)|` for the uniqueness check of the terminal mapping.
pub const TERMINAL_UNIQUENESS_LIMIT: usize = 12;
/// Cap on the candidate bodies scanned per product witness, as a set size.
pub const PRODUCT_BODY_LIMIT: usize = 20;

/// `T`: one token `Δ`, `Con = {(Δ, ∅), (Δ, {Δ})}`, both entailing `Δ`.
pub fn terminal_system() -> Isw {
    let d = Token(0);
    let con = [
        WitnessedSet::new(d, TokenSet::EMPTY),
        WitnessedSet::new(d, TokenSet::singleton(d)),
    ];
    Isw::new(vec!["Δ".into()], d, con, con.map(|p| (p, d))).expect("well-formed")
}

/// `H = Con × {Δ}`, the mapping from `s` into `T`.
pub fn terminal_map(s: &Isw) -> Result<ApproxMap> {
    s.require_valid()?;
    let t = terminal_system();
    let d = TokenSet::singleton(t.delta());
    Ok(ApproxMap::from_images(s.clone(), t, |_| d))
}

/// Whether [`terminal_map`] is the only relation `Con × {Δ}` passing the
/// mapping axioms, by enumerating them all.
pub fn terminal_map_is_unique(s: &Isw) -> Result<bool> {
    if s.con_len() > TERMINAL_UNIQUENESS_LIMIT {
        return Err(Error::size("consistent pairs", s.con_len(), TERMINAL_UNIQUENESS_LIMIT));
    }
    let h = terminal_map(s)?;
    let all = all_valid_maps(s, h.target())?;
    Ok(all.len() == 1 && all[0] == h)
}

/// `S1 × S2` with its projections.
#[derive(Debug, Clone)]
pub struct ProductSystem {
    pub left: Isw,
    pub right: Isw,
    pub product: Isw,
    pub pr1: ApproxMap,
    pub pr2: ApproxMap,
}

fn pair_index(right_len: usize, a: Token, b: Token) -> Token {
    Token(a.0 * right_len + b.0)
}

/// `pr1` and `pr2` of a set of pair tokens.
fn project(right_len: usize, x: TokenSet) -> (TokenSet, TokenSet) {
    let mut l = TokenSet::EMPTY;
    let mut r = TokenSet::EMPTY;
    for t in x.iter() {
        l.insert(Token(t.0 / right_len));
        r.insert(Token(t.0 % right_len));
    }
    (l, r)
}

fn times(right_len: usize, x1: TokenSet, x2: TokenSet) -> TokenSet {
    let mut out = TokenSet::EMPTY;
    for a in x1.iter() {
        for b in x2.iter() {
            out.insert(pair_index(right_len, a, b));
        }
    }
    out
}

/// The product system of `s1` and `s2`; token `(p,q)` sits at index
/// `p · |A2| + q`.
pub fn product(s1: &Isw, s2: &Isw) -> Result<ProductSystem> {
    s1.require_valid()?;
    s2.require_valid()?;
    let (n1, n2) = (s1.len(), s2.len());
    if n1 * n2 > MAX_TOKENS {
        return Err(Error::size("product tokens", n1 * n2, MAX_TOKENS));
    }
    let mut names = Vec::with_capacity(n1 * n2);
    for a in s1.tokens() {
        for b in s2.tokens() {
            names.push(format!("({a},{b})"));
        }
    }
    let singles = |s: &Isw, i: Token| -> TokenSet {
        s.token_iter()
            .filter(|&a| s.in_con(WitnessedSet::new(i, TokenSet::singleton(a))))
            .collect()
    };
    let mut entries = Vec::new();
    for i in s1.token_iter() {
        for j in s2.token_iter() {
            let w = pair_index(n2, i, j);
            // consistent bodies only use pairs that are consistent singly
            let universe = times(n2, singles(s1, i), singles(s2, j));
            if universe.len() > PRODUCT_BODY_LIMIT {
                return Err(Error::size("product body candidates", universe.len(), PRODUCT_BODY_LIMIT));
            }
            for x in universe.submasks() {
                let (x1, x2) = project(n2, x);
                if let (Some(e1), Some(e2)) = (
                    s1.entailed(WitnessedSet::new(i, x1)),
                    s2.entailed(WitnessedSet::new(j, x2)),
                ) {
                    entries.push((WitnessedSet::new(w, x), times(n2, e1, e2)));
                }
            }
        }
    }
    let delta = pair_index(n2, s1.delta(), s2.delta());
    let prod = Isw::from_entailment_map(names, delta, entries)?;
    let pr = |nu: usize| {
        let factor = if nu == 1 { s1 } else { s2 };
        ApproxMap::from_images(prod.clone(), factor.clone(), |p| {
            let (i, j) = (Token(p.witness.0 / n2), Token(p.witness.0 % n2));
            let (x1, x2) = project(n2, p.body);
            let q = if nu == 1 {
                WitnessedSet::new(i, x1)
            } else {
                WitnessedSet::new(j, x2)
            };
            factor.entailed(q).expect("projections of consistent pairs are consistent")
        })
    };
    Ok(ProductSystem {
        left: s1.clone(),
        right: s2.clone(),
        pr1: pr(1),
        pr2: pr(2),
        product: prod,
    })
}

impl ProductSystem {
    pub fn pair_token(&self, a: Token, b: Token) -> Token {
        pair_index(self.right.len(), a, b)
    }

    pub fn split_token(&self, t: Token) -> (Token, Token) {
        let n2 = self.right.len();
        (Token(t.0 / n2), Token(t.0 % n2))
    }

    pub fn project(&self, x: TokenSet) -> (TokenSet, TokenSet) {
        project(self.right.len(), x)
    }

    pub fn times(&self, x1: TokenSet, x2: TokenSet) -> TokenSet {
        times(self.right.len(), x1, x2)
    }

    /// `⟨H1, H2⟩`: `(i, X) ⟨H1, H2⟩ (a1, a2) ⟺ (i, X) H1 a1 ∧ (i, X) H2 a2`.
    pub fn pairing(&self, h1: &ApproxMap, h2: &ApproxMap) -> Result<ApproxMap> {
        if h1.source() != h2.source() {
            return Err(Error::SystemMismatch("the two maps have different sources".into()));
        }
        if h1.target() != &self.left || h2.target() != &self.right {
            return Err(Error::SystemMismatch(
                "the targets are not the factors of the product".into(),
            ));
        }
        Ok(ApproxMap::from_images(h1.source().clone(), self.product.clone(), |p| {
            self.times(h1.image(p), h2.image(p))
        }))
    }

    /// The map `z ↦ (pr1 z, pr2 z)` from product states to pairs of factor
    /// states, checked to be a bijection that preserves and reflects the
    /// order. Entry `k` gives the factor-state indices of product state `k`.
    pub fn state_bijection(&self) -> Result<StateBijection> {
        let prod = self.product.state_poset()?;
        let l = self.left.state_poset()?;
        let r = self.right.state_poset()?;
        let fail = |msg: String| Err(Error::IsoCheckFailed(msg));
        let mut image = Vec::with_capacity(prod.states.len());
        for &z in &prod.states {
            let (x1, x2) = self.project(z);
            let (Some(a), Some(b)) = (l.index_of(x1), r.index_of(x2)) else {
                return fail(format!("a projection of {} is not a state", self.product.fmt_set(z)));
            };
            if self.times(x1, x2) != z {
                return fail(format!("{} is not the product of its projections", self.product.fmt_set(z)));
            }
            image.push(a * r.states.len() + b);
        }
        let grid = grid_poset(&l, &r)?;
        if image.len() != grid.len() || !is_order_iso(&prod.poset, &grid, &image) {
            return fail("projection pairing is not an order-isomorphism".into());
        }
        Ok(StateBijection {
            product: prod,
            left: l,
            right: r,
            grid,
            image,
        })
    }
}

/// The result of [`ProductSystem::state_bijection`].
#[derive(Debug, Clone)]
pub struct StateBijection {
    pub product: StatePoset,
    pub left: StatePoset,
    pub right: StatePoset,
    /// The coordinatewise product of `left` and `right`; element
    /// `a · |right| + b` is the pair `(a, b)`.
    pub grid: FinPoset,
    pub image: Vec<usize>,
}

/// The Cartesian product of two state posets, ordered coordinatewise.
pub fn grid_poset(l: &StatePoset, r: &StatePoset) -> Result<FinPoset> {
    let (n, m) = (l.states.len(), r.states.len());
    let mut names = Vec::with_capacity(n * m);
    for a in l.poset.names() {
        for b in r.poset.names() {
            names.push(format!("({a},{b})"));
        }
    }
    let leq = Relation::from_fn(n * m, |x, y| {
        l.poset.leq(x / m, y / m) && r.poset.leq(x % m, y % m)
    });
    FinPoset::from_order(names, leq)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::appmap::{fn_from_map, identity_map};
    use crate::domconv::isw_from_poset;
    use crate::finposet::find_iso;
    use crate::finposet::fixtures::{c2, m};
    use crate::system::fixtures::{t, ws};
    use crate::system::Condition;

    #[test]
    fn terminal_is_the_fixture() {
        let t0 = terminal_system();
        assert_eq!(t0, t());
        assert_eq!(t0.enumerate_states(), vec![TokenSet::singleton(Token(0))]);
        for c in [Condition::Bc, Condition::Alg, Condition::AlgPlus] {
            assert!(t0.satisfies(c));
        }
        assert_eq!(terminal_map(&t0).unwrap(), identity_map(&t0).unwrap());
    }

    #[test]
    fn terminal_map_from_chain() {
        let s = isw_from_poset(&c2()).unwrap();
        let h = terminal_map(&s).unwrap();
        assert!(h.is_valid());
        assert_eq!(h.len(), s.con_len());
        assert!(terminal_map_is_unique(&s).unwrap());
        let id_t = identity_map(&terminal_system()).unwrap();
        assert_eq!(h.then(&id_t).unwrap(), h);
    }

    #[test]
    fn one_point_square() {
        let p = product(&t(), &t()).unwrap();
        assert_eq!(p.product.tokens(), ["(Δ,Δ)"]);
        assert_eq!(p.product.enumerate_states(), vec![TokenSet::singleton(Token(0))]);
        let id = identity_map(&t()).unwrap();
        let pair = p.pairing(&id, &id).unwrap();
        assert!(pair.is_valid());
        assert_eq!(pair.apply(TokenSet::singleton(Token(0))), Ok(TokenSet::singleton(Token(0))));
    }

    #[test]
    fn chain_square_is_the_grid() {
        let s = isw_from_poset(&c2()).unwrap();
        let p = product(&s, &s).unwrap();
        assert!(p.product.is_valid());
        assert!(p.pr1.is_valid() && p.pr2.is_valid());
        let b = p.state_bijection().unwrap();
        assert_eq!(b.product.states.len(), 4);
        assert!(find_iso(&b.product.poset, &b.grid).unwrap().is_some());
        assert!(p.product.satisfies(Condition::Bc));
    }

    #[test]
    fn m_times_one_point_is_m() {
        let p = product(&isw_from_poset(&m()).unwrap(), &t()).unwrap();
        let sp = p.product.state_poset().unwrap();
        assert!(find_iso(&sp.poset, &m()).unwrap().is_some());
    }

    #[test]
    fn pairing_then_projection() {
        let s = isw_from_poset(&c2()).unwrap();
        let h = terminal_map(&s).unwrap();
        let p = product(&t(), &t()).unwrap();
        let pair = p.pairing(&h, &h).unwrap();
        assert!(pair.is_valid());
        assert_eq!(pair.then(&p.pr1).unwrap(), h);
        assert_eq!(pair.then(&p.pr2).unwrap(), h);
        let f = fn_from_map(&pair);
        for (x, y) in f.domain.iter().zip(&f.values) {
            assert_eq!(*y, p.times(h.apply(*x).unwrap(), h.apply(*x).unwrap()));
        }
        assert!(pair.relates(ws(0, &[]), Token(0)));
    }
}
