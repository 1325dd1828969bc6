// SPDX-License-Identifier: Apache-2.0
//! Finite partial orders and the order-theoretic predicates needed on the
//! domain side: way-below, pointedness, bounded completeness, the L-domain
//! property, local least upper bounds, and order-isomorphism search.
//!
//! Elements are addressed by their position in the input order; that order is
//! the iteration order of every scan, so reports are reproducible.

use std::collections::{HashMap, VecDeque};

use crate::error::{Error, Result};

/// Default element bound for [`find_iso`].
pub const ISO_SIZE_LIMIT: usize = 12;

/// Posets up to this size get the full subset enumeration in [`FinPoset::way_below`].
pub const WAY_BELOW_BRUTE_LIMIT: usize = 16;

/// A binary relation on `0..n`, stored as a dense matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Relation {
    n: usize,
    bits: Vec<bool>,
}

impl Relation {
    pub fn empty(n: usize) -> Self {
        Relation {
            n,
            bits: vec![false; n * n],
        }
    }

    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> bool) -> Self {
        let mut r = Relation::empty(n);
        for x in 0..n {
            for y in 0..n {
                r.bits[x * n + y] = f(x, y);
            }
        }
        r
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn contains(&self, x: usize, y: usize) -> bool {
        self.bits[x * self.n + y]
    }

    pub fn set(&mut self, x: usize, y: usize, v: bool) {
        self.bits[x * self.n + y] = v;
    }

    /// Related pairs in row-major order.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for x in 0..self.n {
            for y in 0..self.n {
                if self.contains(x, y) {
                    out.push((x, y));
                }
            }
        }
        out
    }

    pub fn is_reflexive(&self) -> bool {
        (0..self.n).all(|x| self.contains(x, x))
    }

    pub fn is_transitive(&self) -> bool {
        for x in 0..self.n {
            for y in 0..self.n {
                if !self.contains(x, y) {
                    continue;
                }
                for z in 0..self.n {
                    if self.contains(y, z) && !self.contains(x, z) {
                        return false;
                    }
                }
            }
        }
        true
    }
}

impl std::fmt::Debug for Relation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_set().entries(self.pairs()).finish()
    }
}

/// A finite partial order over named elements.
#[derive(Clone, PartialEq, Eq)]
pub struct FinPoset {
    names: Vec<String>,
    leq: Relation,
}

impl std::fmt::Debug for FinPoset {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FinPoset")
            .field("elems", &self.names)
            .field("covers", &self.covers())
            .finish()
    }
}

impl FinPoset {
    /// Builds the poset whose order is the reflexive-transitive closure of `pairs`.
    pub fn from_pairs<S: AsRef<str>>(names: &[S], pairs: &[(S, S)]) -> Result<Self> {
        let names: Vec<String> = names.iter().map(|s| s.as_ref().to_string()).collect();
        let mut index = HashMap::new();
        for (i, name) in names.iter().enumerate() {
            if index.insert(name.clone(), i).is_some() {
                return Err(Error::DuplicateElem(name.clone()));
            }
        }
        let lookup = |s: &S| {
            index
                .get(s.as_ref())
                .copied()
                .ok_or_else(|| Error::UnknownElem(s.as_ref().to_string()))
        };
        let mut edges = Vec::with_capacity(pairs.len());
        for (a, b) in pairs {
            edges.push((lookup(a)?, lookup(b)?));
        }
        Self::from_edges(names, &edges)
    }

    /// Same as [`FinPoset::from_pairs`] with pairs given by index.
    pub fn from_edges(names: Vec<String>, edges: &[(usize, usize)]) -> Result<Self> {
        let n = names.len();
        let mut adj = vec![Vec::new(); n];
        for &(a, b) in edges {
            if a >= n || b >= n {
                return Err(Error::UnknownElem(format!("#{}", a.max(b))));
            }
            if a != b {
                adj[a].push(b);
            }
        }
        let mut leq = Relation::empty(n);
        for (x, reach) in reachability(&adj).into_iter().enumerate() {
            for y in reach {
                leq.set(x, y, true);
            }
        }
        for x in 0..n {
            for y in x + 1..n {
                if leq.contains(x, y) && leq.contains(y, x) {
                    let mut cycle: Vec<String> = Vec::new();
                    let there = shortest_path(&adj, x, y);
                    let back = shortest_path(&adj, y, x);
                    cycle.extend(there.iter().map(|&i| names[i].clone()));
                    cycle.extend(back.iter().skip(1).map(|&i| names[i].clone()));
                    return Err(Error::CycleDetected(cycle));
                }
            }
        }
        Ok(FinPoset { names, leq })
    }

    /// Wraps a relation already known to be a partial order.
    pub fn from_order(names: Vec<String>, leq: Relation) -> Result<Self> {
        if names.len() != leq.size() {
            return Err(Error::UnknownElem(format!("relation over {} elements", leq.size())));
        }
        let edges = leq.pairs();
        let p = Self::from_edges(names, &edges)?;
        debug_assert_eq!(p.leq, leq);
        Ok(p)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, x: usize) -> &str {
        &self.names[x]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn leq(&self, x: usize, y: usize) -> bool {
        self.leq.contains(x, y)
    }

    pub fn order(&self) -> &Relation {
        &self.leq
    }

    pub fn elems(&self) -> std::ops::Range<usize> {
        0..self.len()
    }

    /// The principal ideal of `x`, in element order.
    pub fn down(&self, x: usize) -> Vec<usize> {
        self.elems().filter(|&y| self.leq(y, x)).collect()
    }

    pub fn up(&self, x: usize) -> Vec<usize> {
        self.elems().filter(|&y| self.leq(x, y)).collect()
    }

    /// Covering pairs `(x, y)`: `x < y` with nothing strictly between.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for x in self.elems() {
            for y in self.elems() {
                if x == y || !self.leq(x, y) {
                    continue;
                }
                let between = self
                    .elems()
                    .any(|z| z != x && z != y && self.leq(x, z) && self.leq(z, y));
                if !between {
                    out.push((x, y));
                }
            }
        }
        out
    }

    pub fn minimum(&self) -> Option<usize> {
        self.elems().find(|&x| self.elems().all(|y| self.leq(x, y)))
    }

    pub fn is_upper_bound(&self, u: usize, set: &[usize]) -> bool {
        set.iter().all(|&s| self.leq(s, u))
    }

    /// The least element of `candidates`, if there is one.
    pub fn least_of(&self, candidates: &[usize]) -> Option<usize> {
        candidates
            .iter()
            .copied()
            .find(|&c| candidates.iter().all(|&d| self.leq(c, d)))
    }

    pub fn greatest_of(&self, candidates: &[usize]) -> Option<usize> {
        candidates
            .iter()
            .copied()
            .find(|&c| candidates.iter().all(|&d| self.leq(d, c)))
    }

    /// Least upper bound of `set` in the whole poset.
    pub fn lub(&self, set: &[usize]) -> Option<usize> {
        let ubs: Vec<usize> = self.elems().filter(|&u| self.is_upper_bound(u, set)).collect();
        self.least_of(&ubs)
    }

    /// Whether `set` is directed: nonempty, and every pair has an upper bound inside it.
    pub fn is_directed(&self, set: &[usize]) -> bool {
        !set.is_empty()
            && set.iter().all(|&a| {
                set.iter()
                    .all(|&b| set.iter().any(|&u| self.leq(a, u) && self.leq(b, u)))
            })
    }

    /// The approximation relation, computed from its definition.
    ///
    /// `x << y` iff every directed `S` whose lub exists and is above `y`
    /// contains some `u` above `x`. Up to [`WAY_BELOW_BRUTE_LIMIT`] elements
    /// every subset is tried. Past that only the singletons are tried: a
    /// finite directed set has a maximum `m`, its lub is `m`, and the set of
    /// elements below some member equals the principal ideal of `m`, which is
    /// exactly the constraint the singleton `{m}` imposes.
    pub fn way_below(&self) -> Relation {
        let n = self.len();
        let mut wb = Relation::from_fn(n, |_, _| true);
        let mut restrict = |members: &[usize], top: usize| {
            for y in self.elems().filter(|&y| self.leq(y, top)) {
                for x in self.elems() {
                    let covered = members.iter().any(|&u| self.leq(x, u));
                    if !covered {
                        wb.set(x, y, false);
                    }
                }
            }
        };
        if n <= WAY_BELOW_BRUTE_LIMIT {
            let mut members = Vec::with_capacity(n);
            for mask in 1u64..(1u64 << n) {
                members.clear();
                members.extend((0..n).filter(|&i| mask >> i & 1 == 1));
                if !self.is_directed(&members) {
                    continue;
                }
                if let Some(top) = self.lub(&members) {
                    restrict(&members, top);
                }
            }
        } else {
            for m in 0..n {
                restrict(&[m], m);
            }
        }
        wb
    }

    pub fn analyze(&self) -> PosetReport {
        let bottom = self.minimum();
        let mut bc_counterexample = None;
        'bc: for x in self.elems() {
            for y in x + 1..self.len() {
                let ubs: Vec<usize> = self
                    .elems()
                    .filter(|&u| self.leq(x, u) && self.leq(y, u))
                    .collect();
                if !ubs.is_empty() && self.least_of(&ubs).is_none() {
                    bc_counterexample = Some((x, y));
                    break 'bc;
                }
            }
        }
        let l_domain_counterexample = match bottom {
            None => Some(LDomainFailure::NotPointed),
            Some(_) => self.first_missing_local_lub(),
        };
        let wb = self.way_below();
        let compacts = self.elems().filter(|&x| wb.contains(x, x)).collect();
        PosetReport {
            bottom,
            bc_counterexample,
            l_domain_counterexample,
            compacts,
        }
    }

    fn first_missing_local_lub(&self) -> Option<LDomainFailure> {
        for z in self.elems() {
            let below = self.down(z);
            for (k, &x) in below.iter().enumerate() {
                for &y in &below[k..] {
                    if self.local_lub_in(&below, &[x, y]).is_none() {
                        return Some(LDomainFailure::NoLocalLub { z, x, y });
                    }
                }
            }
        }
        None
    }

    fn local_lub_in(&self, ideal: &[usize], set: &[usize]) -> Option<usize> {
        let ubs: Vec<usize> = ideal
            .iter()
            .copied()
            .filter(|&u| self.is_upper_bound(u, set))
            .collect();
        self.least_of(&ubs)
    }

    /// Least upper bound of `set` relative to the principal ideal of `z`.
    pub fn local_lub(&self, z: usize, set: &[usize]) -> Result<usize> {
        for &f in set {
            if !self.leq(f, z) {
                return Err(Error::NotBelowZ {
                    elem: self.names[f].clone(),
                    z: self.names[z].clone(),
                });
            }
        }
        self.local_lub_in(&self.down(z), set).ok_or_else(|| Error::NoLocalLub {
            z: self.names[z].clone(),
        })
    }

    /// Longest chain length strictly below each element.
    fn heights(&self) -> Vec<usize> {
        let mut order: Vec<usize> = self.elems().collect();
        order.sort_by_key(|&x| self.down(x).len());
        let mut h = vec![0usize; self.len()];
        for &x in &order {
            h[x] = self
                .elems()
                .filter(|&y| y != x && self.leq(y, x))
                .map(|y| h[y] + 1)
                .max()
                .unwrap_or(0);
        }
        h
    }

    fn depths(&self) -> Vec<usize> {
        let mut order: Vec<usize> = self.elems().collect();
        order.sort_by_key(|&x| self.up(x).len());
        let mut d = vec![0usize; self.len()];
        for &x in &order {
            d[x] = self
                .elems()
                .filter(|&y| y != x && self.leq(x, y))
                .map(|y| d[y] + 1)
                .max()
                .unwrap_or(0);
        }
        d
    }

    /// Invariants preserved by every order-isomorphism.
    fn signatures(&self) -> Vec<(usize, usize, usize, usize)> {
        let h = self.heights();
        let d = self.depths();
        self.elems()
            .map(|x| (self.down(x).len(), self.up(x).len(), h[x], d[x]))
            .collect()
    }
}

/// Why a poset fails to be an L-domain.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LDomainFailure {
    NotPointed,
    /// `x, y` lie below `z` but have no least upper bound inside the ideal of `z`.
    NoLocalLub { z: usize, x: usize, y: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PosetReport {
    pub bottom: Option<usize>,
    /// A pair with an upper bound but no least one.
    pub bc_counterexample: Option<(usize, usize)>,
    pub l_domain_counterexample: Option<LDomainFailure>,
    pub compacts: Vec<usize>,
}

impl PosetReport {
    pub fn pointed(&self) -> bool {
        self.bottom.is_some()
    }

    pub fn bounded_complete(&self) -> bool {
        self.bc_counterexample.is_none()
    }

    pub fn l_domain(&self) -> bool {
        self.l_domain_counterexample.is_none()
    }
}

/// Searches for an order-isomorphism `P -> Q`, returned as the image of each
/// element of `P`. Candidates are tried in element order of `Q`, so the
/// result is the lexicographically first isomorphism.
pub fn find_iso(p: &FinPoset, q: &FinPoset) -> Result<Option<Vec<usize>>> {
    find_iso_with_limit(p, q, ISO_SIZE_LIMIT)
}

pub fn find_iso_with_limit(p: &FinPoset, q: &FinPoset, limit: usize) -> Result<Option<Vec<usize>>> {
    if p.len() != q.len() {
        return Ok(None);
    }
    if p.len() > limit {
        return Err(Error::size("find_iso elements", p.len(), limit));
    }
    let sp = p.signatures();
    let sq = q.signatures();
    let mut a = sp.clone();
    let mut b = sq.clone();
    a.sort();
    b.sort();
    if a != b {
        return Ok(None);
    }
    let mut image = vec![usize::MAX; p.len()];
    let mut used = vec![false; q.len()];
    if extend_iso(p, q, &sp, &sq, 0, &mut image, &mut used) {
        Ok(Some(image))
    } else {
        Ok(None)
    }
}

fn extend_iso(
    p: &FinPoset,
    q: &FinPoset,
    sp: &[(usize, usize, usize, usize)],
    sq: &[(usize, usize, usize, usize)],
    next: usize,
    image: &mut [usize],
    used: &mut [bool],
) -> bool {
    if next == p.len() {
        return true;
    }
    for cand in q.elems() {
        if used[cand] || sp[next] != sq[cand] {
            continue;
        }
        let consistent = (0..next).all(|j| {
            p.leq(next, j) == q.leq(cand, image[j]) && p.leq(j, next) == q.leq(image[j], cand)
        });
        if !consistent {
            continue;
        }
        image[next] = cand;
        used[cand] = true;
        if extend_iso(p, q, sp, sq, next + 1, image, used) {
            return true;
        }
        used[cand] = false;
    }
    image[next] = usize::MAX;
    false
}

/// Checks that `image` is a bijection `P -> Q` that preserves and reflects order.
pub fn is_order_iso(p: &FinPoset, q: &FinPoset, image: &[usize]) -> bool {
    if p.len() != q.len() || image.len() != p.len() {
        return false;
    }
    let mut hit = vec![false; q.len()];
    for &y in image {
        if y >= q.len() || hit[y] {
            return false;
        }
        hit[y] = true;
    }
    p.elems()
        .all(|x| p.elems().all(|y| p.leq(x, y) == q.leq(image[x], image[y])))
}

fn reachability(adj: &[Vec<usize>]) -> Vec<Vec<usize>> {
    (0..adj.len())
        .map(|start| {
            let mut seen = vec![false; adj.len()];
            let mut queue = VecDeque::from([start]);
            seen[start] = true;
            while let Some(v) = queue.pop_front() {
                for &w in &adj[v] {
                    if !seen[w] {
                        seen[w] = true;
                        queue.push_back(w);
                    }
                }
            }
            (0..adj.len()).filter(|&v| seen[v]).collect()
        })
        .collect()
}

fn shortest_path(adj: &[Vec<usize>], from: usize, to: usize) -> Vec<usize> {
    let mut prev = vec![usize::MAX; adj.len()];
    let mut queue = VecDeque::from([from]);
    prev[from] = from;
    while let Some(v) = queue.pop_front() {
        if v == to {
            break;
        }
        for &w in &adj[v] {
            if prev[w] == usize::MAX {
                prev[w] = v;
                queue.push_back(w);
            }
        }
    }
    let mut path = vec![to];
    let mut cur = to;
    while cur != from {
        cur = prev[cur];
        path.push(cur);
    }
    path.reverse();
    path
}
