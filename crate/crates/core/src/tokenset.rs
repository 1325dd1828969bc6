// SPDX-License-Identifier: Apache-2.0
//! Tokens are indices into a system's token list; finite token sets are
//! 64-bit masks over those indices.

use std::cmp::Ordering;
use std::fmt;

/// Largest token count a [`TokenSet`] can address.
pub const MAX_TOKENS: usize = 64;

/// Index of a token in the declared token order of its owning system.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Token(pub usize);

impl Token {
    pub fn index(self) -> usize {
        self.0
    }
}

/// A finite set of tokens.
///
/// The [`Ord`] instance is the canonical order used for every report:
/// smaller sets first, equal-size sets compared lexicographically on their
/// ascending member sequences.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct TokenSet(u64);

impl TokenSet {
    pub const EMPTY: TokenSet = TokenSet(0);

    pub fn from_bits(bits: u64) -> Self {
        TokenSet(bits)
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn singleton(t: Token) -> Self {
        TokenSet(1u64 << t.0)
    }

    /// All tokens `0..n`.
    pub fn full(n: usize) -> Self {
        if n >= 64 {
            TokenSet(u64::MAX)
        } else {
            TokenSet((1u64 << n) - 1)
        }
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn contains(self, t: Token) -> bool {
        self.0 >> t.0 & 1 == 1
    }

    pub fn insert(&mut self, t: Token) {
        self.0 |= 1u64 << t.0;
    }

    pub fn with(self, t: Token) -> Self {
        TokenSet(self.0 | 1u64 << t.0)
    }

    pub fn without(self, t: Token) -> Self {
        TokenSet(self.0 & !(1u64 << t.0))
    }

    pub fn union(self, other: TokenSet) -> Self {
        TokenSet(self.0 | other.0)
    }

    pub fn intersection(self, other: TokenSet) -> Self {
        TokenSet(self.0 & other.0)
    }

    pub fn difference(self, other: TokenSet) -> Self {
        TokenSet(self.0 & !other.0)
    }

    pub fn is_subset(self, other: TokenSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_superset(self, other: TokenSet) -> bool {
        other.is_subset(self)
    }

    /// Members in ascending index order.
    pub fn iter(self) -> Members {
        Members(self.0)
    }

    /// Every subset, in no particular order (submask walk).
    pub fn submasks(self) -> Submasks {
        Submasks {
            full: self.0,
            next: Some(self.0),
        }
    }

    /// Every subset, sorted canonically.
    pub fn subsets_canonical(self) -> Vec<TokenSet> {
        let mut all: Vec<TokenSet> = self.submasks().collect();
        all.sort();
        all
    }
}

impl Ord for TokenSet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len().cmp(&other.len()).then_with(|| {
            let diff = self.0 ^ other.0;
            if diff == 0 {
                Ordering::Equal
            } else if self.0 & (diff & diff.wrapping_neg()) != 0 {
                // the smallest differing member belongs to self
                Ordering::Less
            } else {
                Ordering::Greater
            }
        })
    }
}

impl PartialOrd for TokenSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for TokenSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter().map(|t| t.0)).finish()
    }
}

impl FromIterator<Token> for TokenSet {
    fn from_iter<I: IntoIterator<Item = Token>>(iter: I) -> Self {
        let mut s = TokenSet::EMPTY;
        for t in iter {
            s.insert(t);
        }
        s
    }
}

pub struct Members(u64);

impl Iterator for Members {
    type Item = Token;

    fn next(&mut self) -> Option<Token> {
        if self.0 == 0 {
            return None;
        }
        let i = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(Token(i))
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.0.count_ones() as usize;
        (n, Some(n))
    }
}

pub struct Submasks {
    full: u64,
    next: Option<u64>,
}

impl Iterator for Submasks {
    type Item = TokenSet;

    fn next(&mut self) -> Option<TokenSet> {
        let cur = self.next?;
        self.next = if cur == 0 {
            None
        } else {
            Some((cur - 1) & self.full)
        };
        Some(TokenSet(cur))
    }
}
