//! Free-group words over braid-group generator symbols.
//!
//! A [`Word`] is always stored freely reduced. Relators encode an equation
//! `L = R` as the single word `L * R^-1`.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// A generator of a finitely presented group.
///
/// The derived ordering is the one used by shortlex rewriting: `A` symbols
/// come first, then `Rho`, then `Plain`; within a kind the fields compare
/// lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GeneratorSymbol {
    /// Braid generator `A[i,j]` with `1 <= i < j`.
    A { i: u32, j: u32 },
    /// Non-orientable crosscap generator `rho[r,k]` with `r, k >= 1`.
    Rho { r: u32, k: u32 },
    /// Auxiliary symbol. Index 0 renders as the bare name.
    Plain { name: String, index: u32 },
}

impl GeneratorSymbol {
    pub fn a(i: u32, j: u32) -> Self {
        assert!(i >= 1 && i < j, "A[{i},{j}] violates 1 <= i < j");
        GeneratorSymbol::A { i, j }
    }

    pub fn rho(r: u32, k: u32) -> Self {
        assert!(r >= 1 && k >= 1, "rho[{r},{k}] needs positive indices");
        GeneratorSymbol::Rho { r, k }
    }

    pub fn plain(name: impl Into<String>, index: u32) -> Self {
        GeneratorSymbol::Plain {
            name: name.into(),
            index,
        }
    }

    /// Identifier-safe stem, used to derive the names of relabeled copies.
    pub fn stem(&self) -> String {
        match self {
            GeneratorSymbol::A { i, j } => format!("A{i}_{j}"),
            GeneratorSymbol::Rho { r, k } => format!("rho{r}_{k}"),
            GeneratorSymbol::Plain { name, index: 0 } => name.clone(),
            GeneratorSymbol::Plain { name, index } => format!("{name}{index}"),
        }
    }

    pub fn pos(&self) -> Letter {
        Letter::new(self.clone(), false)
    }

    pub fn neg(&self) -> Letter {
        Letter::new(self.clone(), true)
    }
}

impl fmt::Display for GeneratorSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GeneratorSymbol::A { i, j } => write!(f, "A[{i},{j}]"),
            GeneratorSymbol::Rho { r, k } => write!(f, "rho[{r},{k}]"),
            GeneratorSymbol::Plain { name, index: 0 } => write!(f, "{name}"),
            GeneratorSymbol::Plain { name, index } => write!(f, "{name}[{index}]"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("unexpected character {found:?} at byte {at}")]
    Unexpected { found: char, at: usize },
    #[error("unexpected end of input")]
    Eof,
    #[error("invalid index list in {0}")]
    BadIndices(String),
    #[error("symbol {0} violates its index invariant")]
    Invariant(String),
    #[error("bad exponent {0:?}")]
    BadExponent(String),
}

struct Cursor<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        Some(c)
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(c) if c.is_whitespace() || c == '*' || c == '.') {
            self.bump();
        }
    }

    fn unexpected(&self) -> ParseError {
        match self.peek() {
            Some(found) => ParseError::Unexpected {
                found,
                at: self.pos,
            },
            None => ParseError::Eof,
        }
    }

    fn take_while(&mut self, pred: impl Fn(char) -> bool) -> &'a str {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if pred(c)) {
            self.bump();
        }
        &self.src[start..self.pos]
    }

    fn symbol(&mut self) -> Result<GeneratorSymbol, ParseError> {
        let name = self.take_while(|c| c.is_ascii_alphanumeric() || c == '_');
        if name.is_empty() || name.starts_with(|c: char| c.is_ascii_digit()) {
            return Err(self.unexpected());
        }
        if self.peek() != Some('[') {
            return Ok(GeneratorSymbol::plain(name, 0));
        }
        self.bump();
        let inner = self.take_while(|c| c != ']');
        if self.bump() != Some(']') {
            return Err(ParseError::Eof);
        }
        let idx: Vec<u32> = inner
            .split(',')
            .map(|s| s.trim().parse::<u32>())
            .collect::<Result<_, _>>()
            .map_err(|_| ParseError::BadIndices(format!("{name}[{inner}]")))?;
        match (name, idx.as_slice()) {
            ("A", &[i, j]) if i >= 1 && i < j => Ok(GeneratorSymbol::A { i, j }),
            ("rho", &[r, k]) if r >= 1 && k >= 1 => Ok(GeneratorSymbol::Rho { r, k }),
            ("A" | "rho", &[_, _]) => Err(ParseError::Invariant(format!("{name}[{inner}]"))),
            (_, &[index]) => Ok(GeneratorSymbol::plain(name, index)),
            _ => Err(ParseError::BadIndices(format!("{name}[{inner}]"))),
        }
    }

    fn exponent(&mut self) -> Result<i64, ParseError> {
        if self.peek() != Some('^') {
            return Ok(1);
        }
        self.bump();
        let raw = self.take_while(|c| c == '-' || c == '+' || c.is_ascii_digit());
        raw.parse::<i64>()
            .map_err(|_| ParseError::BadExponent(raw.to_string()))
    }
}

impl FromStr for GeneratorSymbol {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut cur = Cursor {
            src: s.trim(),
            pos: 0,
        };
        let sym = cur.symbol()?;
        if cur.peek().is_some() {
            return Err(cur.unexpected());
        }
        Ok(sym)
    }
}

impl Serialize for GeneratorSymbol {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for GeneratorSymbol {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A generator or its formal inverse. A generator precedes its inverse.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub symbol: GeneratorSymbol,
    pub inverse: bool,
}

impl Letter {
    pub fn new(symbol: GeneratorSymbol, inverse: bool) -> Self {
        Letter { symbol, inverse }
    }

    pub fn inv(&self) -> Letter {
        Letter::new(self.symbol.clone(), !self.inverse)
    }

    pub fn exponent(&self) -> i64 {
        if self.inverse {
            -1
        } else {
            1
        }
    }

    fn cancels(&self, other: &Letter) -> bool {
        self.symbol == other.symbol && self.inverse != other.inverse
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.inverse {
            write!(f, "{}^-1", self.symbol)
        } else {
            write!(f, "{}", self.symbol)
        }
    }
}

/// A freely reduced word. The empty word is the identity.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    letters: Vec<Letter>,
}

impl Word {
    pub fn identity() -> Self {
        Word::default()
    }

    /// Free reduction of an arbitrary letter sequence.
    pub fn reduce(raw: impl IntoIterator<Item = Letter>) -> Self {
        let mut letters: Vec<Letter> = Vec::new();
        for l in raw {
            if letters.last().is_some_and(|last| last.cancels(&l)) {
                letters.pop();
            } else {
                letters.push(l);
            }
        }
        Word { letters }
    }

    pub fn letter(l: Letter) -> Self {
        Word { letters: vec![l] }
    }

    pub fn gen(sym: &GeneratorSymbol) -> Self {
        Word::letter(sym.pos())
    }

    /// `sym^e` for a signed exponent.
    pub fn power(sym: &GeneratorSymbol, e: i64) -> Self {
        let l = Letter::new(sym.clone(), e < 0);
        Word {
            letters: vec![l; e.unsigned_abs() as usize],
        }
    }

    /// Product of the given words, freely reduced.
    pub fn product<'a>(parts: impl IntoIterator<Item = &'a Word>) -> Self {
        Word::reduce(parts.into_iter().flat_map(|w| w.letters.iter().cloned()))
    }

    /// `x^-1 y^-1 x y`.
    pub fn commutator(x: &Word, y: &Word) -> Self {
        Word::product([&x.inverse(), &y.inverse(), x, y])
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn inverse(&self) -> Self {
        Word {
            letters: self.letters.iter().rev().map(Letter::inv).collect(),
        }
    }

    pub fn mul(&self, other: &Word) -> Self {
        Word::product([self, other])
    }

    pub fn symbols(&self) -> BTreeSet<GeneratorSymbol> {
        self.letters.iter().map(|l| l.symbol.clone()).collect()
    }

    pub fn exponent_sum(&self, sym: &GeneratorSymbol) -> i64 {
        self.letters
            .iter()
            .filter(|l| &l.symbol == sym)
            .map(Letter::exponent)
            .sum()
    }

    /// Replace every generator by the identity when it lies in `killed`.
    pub fn substitute_kill(&self, killed: &BTreeSet<GeneratorSymbol>) -> Self {
        Word::reduce(
            self.letters
                .iter()
                .filter(|l| !killed.contains(&l.symbol))
                .cloned(),
        )
    }

    /// Substitute a word for every generator; `image` sees the positive
    /// generator and the result is inverted for inverse letters.
    pub fn substitute<F>(&self, mut image: F) -> Self
    where
        F: FnMut(&GeneratorSymbol) -> Word,
    {
        let mut raw = Vec::new();
        for l in &self.letters {
            let w = image(&l.symbol);
            if l.inverse {
                raw.extend(w.inverse().letters);
            } else {
                raw.extend(w.letters);
            }
        }
        Word::reduce(raw)
    }

    /// Strip matching first/last inverse pairs.
    pub fn cyclically_reduce(&self) -> Self {
        let mut lo = 0;
        let mut hi = self.letters.len();
        while hi - lo >= 2 && self.letters[lo].cancels(&self.letters[hi - 1]) {
            lo += 1;
            hi -= 1;
        }
        Word {
            letters: self.letters[lo..hi].to_vec(),
        }
    }

    fn rotation(&self, k: usize) -> Word {
        let mut letters = self.letters[k..].to_vec();
        letters.extend_from_slice(&self.letters[..k]);
        Word { letters }
    }

    /// Least word among all rotations of the cyclic reduction and of its
    /// inverse. Two relators define the same normal closure contribution when
    /// their canonical forms agree.
    pub fn cyclic_canonical(&self) -> Word {
        let base = self.cyclically_reduce();
        if base.is_empty() {
            return base;
        }
        let inv = base.inverse();
        (0..base.len())
            .flat_map(|k| [base.rotation(k), inv.rotation(k)])
            .min()
            .expect("non-empty word has rotations")
    }

    /// Recognize `[x, y]` up to rotation and inversion.
    ///
    /// Returns the two symbols in increasing order.
    pub fn commutator_shape(&self) -> Option<(GeneratorSymbol, GeneratorSymbol)> {
        let l = &self.letters;
        if l.len() != 4 {
            return None;
        }
        if l[0].symbol == l[1].symbol || !l[0].cancels(&l[2]) || !l[1].cancels(&l[3]) {
            return None;
        }
        let (x, y) = (l[0].symbol.clone(), l[1].symbol.clone());
        Some(if x < y { (x, y) } else { (y, x) })
    }
}

impl FromIterator<Letter> for Word {
    fn from_iter<T: IntoIterator<Item = Letter>>(iter: T) -> Self {
        Word::reduce(iter)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "1");
        }
        for (n, l) in self.letters.iter().enumerate() {
            if n > 0 {
                write!(f, " ")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = ParseError;

    /// Accepts the rendering grammar plus arbitrary integer exponents, e.g.
    /// `A[1,2]^-1 A[2,3] A[1,2]`, `rho[2,1]^2 A[1,2]^-1`, `x y^-1`, `1`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut cur = Cursor { src: s, pos: 0 };
        let mut raw = Vec::new();
        cur.skip_ws();
        if cur.src[cur.pos..].trim() == "1" {
            return Ok(Word::identity());
        }
        while cur.peek().is_some() {
            let sym = cur.symbol()?;
            let e = cur.exponent()?;
            raw.extend(Word::power(&sym, e).letters);
            cur.skip_ws();
        }
        Ok(Word::reduce(raw))
    }
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Shorthand used throughout the tests and fixtures.
pub fn w(s: &str) -> Word {
    s.parse().unwrap_or_else(|e| panic!("bad word {s:?}: {e}"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn a(i: u32, j: u32) -> GeneratorSymbol {
        GeneratorSymbol::a(i, j)
    }

    #[test]
    fn reduce_examples() {
        let x = GeneratorSymbol::plain("a", 0);
        let y = GeneratorSymbol::plain("b", 0);
        assert!(Word::reduce(vec![]).is_identity());
        assert!(Word::reduce(vec![x.pos(), x.neg()]).is_identity());
        assert_eq!(
            Word::reduce(vec![x.pos(), y.pos(), y.neg(), x.pos()]),
            Word::power(&x, 2)
        );
    }

    #[test]
    fn kill_examples() {
        let killed: BTreeSet<_> = [a(2, 3)].into();
        assert!(w("A[1,2]^-1 A[2,3] A[1,2]")
            .substitute_kill(&killed)
            .is_identity());
        assert_eq!(
            w("A[1,3]").substitute_kill(&BTreeSet::new()),
            w("A[1,3]")
        );
        assert!(w("A[2,3] A[2,3]").substitute_kill(&killed).is_identity());
    }

    #[test]
    fn cyclic_reduction_examples() {
        assert_eq!(w("a b a^-1").cyclically_reduce(), w("b"));
        assert_eq!(w("a b").cyclically_reduce(), w("a b"));
        assert_eq!(w("a^-1 b c b^-1 a").cyclically_reduce(), w("c"));
        assert_eq!(w("a a^-1").cyclically_reduce(), Word::identity());
    }

    #[test]
    fn commutator_shape_examples() {
        let x = GeneratorSymbol::plain("x", 0);
        let y = GeneratorSymbol::plain("y", 0);
        assert_eq!(w("x^-1 y^-1 x y").commutator_shape(), Some((x.clone(), y.clone())));
        assert_eq!(w("y x^-1 y^-1 x").commutator_shape(), Some((x, y)));
        assert_eq!(w("x y").commutator_shape(), None);
        assert_eq!(w("x^-1 x^-1 x x").commutator_shape(), None);
        assert_eq!(w("x y x y^-1").commutator_shape(), None);
    }

    #[test]
    fn commutator_shape_all_variants_of_all_pairs() {
        let syms = [
            a(1, 2),
            a(1, 3),
            a(2, 3),
            GeneratorSymbol::rho(2, 1),
            GeneratorSymbol::plain("t", 1),
        ];
        for x in &syms {
            for y in &syms {
                if x == y {
                    continue;
                }
                let c = Word::commutator(&Word::gen(x), &Word::gen(y));
                let expected = if x < y {
                    (x.clone(), y.clone())
                } else {
                    (y.clone(), x.clone())
                };
                let mut seen = BTreeSet::new();
                for base in [c.clone(), c.inverse()] {
                    for k in 0..4 {
                        let r = base.rotation(k);
                        assert_eq!(r.commutator_shape(), Some(expected.clone()), "{r}");
                        seen.insert(r);
                    }
                }
                assert_eq!(seen.len(), 8);
            }
        }
    }

    #[test]
    fn render_and_parse() {
        let word = Word::reduce(vec![a(1, 2).neg(), a(2, 3).pos(), a(1, 2).pos()]);
        assert_eq!(word.to_string(), "A[1,2]^-1 A[2,3] A[1,2]");
        assert_eq!(word.to_string().parse::<Word>().unwrap(), word);
        assert_eq!(w("rho[2,1]^2 A[1,2]^-1").len(), 3);
        assert_eq!(w("A1[2]").letters()[0].symbol, GeneratorSymbol::plain("A1", 2));
        assert_eq!(Word::identity().to_string(), "1");
        assert!(w("1").is_identity());
        assert!("A[2,1]".parse::<Word>().is_err());
        assert!("rho[0,1]".parse::<Word>().is_err());
        assert!("A[1,2".parse::<Word>().is_err());
        assert!("3x".parse::<Word>().is_err());
    }

    #[test]
    fn symbol_order() {
        assert!(a(5, 9) < GeneratorSymbol::rho(1, 1));
        assert!(GeneratorSymbol::rho(9, 9) < GeneratorSymbol::plain("a", 0));
        assert!(a(1, 3) < a(2, 3));
        assert!(a(1, 2).pos() < a(1, 2).neg());
        assert!(a(1, 2).neg() < a(1, 3).pos());
    }

    #[test]
    fn canonical_form_identifies_rotations_and_inverses() {
        let r = w("x^-1 y^-1 x y");
        assert_eq!(r.cyclic_canonical(), w("y x^-1 y^-1 x").cyclic_canonical());
        assert_eq!(r.cyclic_canonical(), r.inverse().cyclic_canonical());
        assert_ne!(r.cyclic_canonical(), w("x y x^-1 y").cyclic_canonical());
    }

    fn letter_strategy() -> impl Strategy<Value = Letter> {
        (0u32..3, any::<bool>()).prop_map(|(i, inv)| {
            Letter::new(GeneratorSymbol::plain(["a", "b", "c"][i as usize], 0), inv)
        })
    }

    proptest! {
        #[test]
        fn reduce_is_idempotent(raw in prop::collection::vec(letter_strategy(), 0..24)) {
            let once = Word::reduce(raw);
            let twice = Word::reduce(once.letters().to_vec());
            prop_assert_eq!(once, twice);
        }

        #[test]
        fn word_times_inverse_is_identity(raw in prop::collection::vec(letter_strategy(), 0..24)) {
            let word = Word::reduce(raw);
            prop_assert!(word.mul(&word.inverse()).is_identity());
        }

        #[test]
        fn kill_matches_filter_and_is_idempotent(raw in prop::collection::vec(letter_strategy(), 0..24)) {
            let killed: BTreeSet<_> = [GeneratorSymbol::plain("b", 0)].into();
            let word = Word::reduce(raw.clone());
            let once = word.substitute_kill(&killed);
            let filtered = Word::reduce(raw.into_iter().filter(|l| !killed.contains(&l.symbol)));
            prop_assert_eq!(&once, &filtered);
            prop_assert_eq!(once.substitute_kill(&killed), once);
        }

        #[test]
        fn display_parse_roundtrip(raw in prop::collection::vec(letter_strategy(), 0..24)) {
            let word = Word::reduce(raw);
            prop_assert_eq!(word.to_string().parse::<Word>().unwrap(), word);
        }
    }
}
