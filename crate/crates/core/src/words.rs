//! Freely and cyclically reduced words in syllable form.
//!
//! A [`Word`] stores maximal runs `g^e` with arbitrary-precision exponents, so
//! `b^(2^(2^20))` costs one syllable. Adjacent syllables always carry distinct
//! generators, which makes the syllable sequence a normal form for the free
//! group element.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

use crate::budget::ExponentBudget;

/// A single-letter generator symbol.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Generator(u8);

impl Generator {
    pub fn new(letter: char) -> Option<Self> {
        letter.is_ascii_alphabetic().then_some(Self(letter as u8))
    }

    pub fn letter(self) -> char {
        self.0 as char
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter())
    }
}

/// The declared generators of a presentation, in declaration order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Alphabet(Vec<Generator>);

impl Alphabet {
    pub fn new(gens: impl IntoIterator<Item = Generator>) -> Self {
        let mut out: Vec<Generator> = Vec::new();
        for g in gens {
            if !out.contains(&g) {
                out.push(g);
            }
        }
        Self(out)
    }

    /// The alphabet `{a, b}` of the rank-two free group.
    pub fn ab() -> Self {
        Self(vec![Generator(b'a'), Generator(b'b')])
    }

    pub fn from_letters(letters: &str) -> Option<Self> {
        letters
            .chars()
            .map(Generator::new)
            .collect::<Option<Vec<_>>>()
            .map(Self::new)
    }

    pub fn contains(&self, g: Generator) -> bool {
        self.0.contains(&g)
    }

    pub fn generators(&self) -> &[Generator] {
        &self.0
    }
}

/// A power `gen^exp` with `exp != 0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Syllable {
    pub gen: Generator,
    pub exp: BigInt,
}

impl Syllable {
    pub fn new(gen: Generator, exp: impl Into<BigInt>) -> Self {
        let exp = exp.into();
        debug_assert!(!exp.is_zero());
        Self { gen, exp }
    }

    pub fn length(&self) -> BigUint {
        self.exp.magnitude().clone()
    }

    pub fn inverse(&self) -> Self {
        Self {
            gen: self.gen,
            exp: -&self.exp,
        }
    }

    /// Same generator and same exponent sign, i.e. the two runs spell the
    /// same letter.
    pub fn same_letter(&self, other: &Syllable) -> bool {
        self.gen == other.gen && self.exp.sign() == other.exp.sign()
    }

    fn with_length(&self, len: &BigUint) -> Self {
        let sign = self.exp.sign();
        Self {
            gen: self.gen,
            exp: BigInt::from_biguint(sign, len.clone()),
        }
    }
}

/// A freely reduced word in syllable form. The empty word is the identity.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct Word {
    syllables: Vec<Syllable>,
}

impl Word {
    pub fn identity() -> Self {
        Self::default()
    }

    pub fn generator(gen: Generator) -> Self {
        Self::power(gen, 1)
    }

    pub fn power(gen: Generator, exp: impl Into<BigInt>) -> Self {
        let mut w = Self::identity();
        w.push(gen, exp.into());
        w
    }

    /// Multiplies out the given powers left to right with free reduction.
    pub fn from_powers<I, E>(powers: I) -> Self
    where
        I: IntoIterator<Item = (Generator, E)>,
        E: Into<BigInt>,
    {
        let mut w = Self::identity();
        for (g, e) in powers {
            w.push(g, e.into());
        }
        w
    }

    pub fn syllables(&self) -> &[Syllable] {
        &self.syllables
    }

    pub fn is_empty(&self) -> bool {
        self.syllables.is_empty()
    }

    pub fn num_syllables(&self) -> usize {
        self.syllables.len()
    }

    /// Letter length: the sum of the absolute exponents.
    pub fn length(&self) -> BigUint {
        self.syllables.iter().map(|s| s.exp.magnitude()).sum()
    }

    /// Right-multiplies by `gen^exp`, cancelling against the last syllable.
    pub fn push(&mut self, gen: Generator, exp: BigInt) {
        if exp.is_zero() {
            return;
        }
        match self.syllables.last_mut() {
            Some(last) if last.gen == gen => {
                last.exp += exp;
                if last.exp.is_zero() {
                    self.syllables.pop();
                }
            }
            _ => self.syllables.push(Syllable { gen, exp }),
        }
    }

    fn push_syllable(&mut self, s: &Syllable) {
        self.push(s.gen, s.exp.clone());
    }

    /// Freely reduced product `self · other`.
    pub fn concat(&self, other: &Word) -> Word {
        let mut out = self.clone();
        for s in &other.syllables {
            out.push_syllable(s);
        }
        out
    }

    pub fn inverse(&self) -> Word {
        Word {
            syllables: self.syllables.iter().rev().map(Syllable::inverse).collect(),
        }
    }

    pub fn pow(&self, n: usize) -> Word {
        let mut out = Word::identity();
        for _ in 0..n {
            out = out.concat(self);
        }
        out
    }

    /// The factor of `len` letters starting at letter offset `start`.
    ///
    /// Panics if the range runs past the end of the word.
    pub fn letter_slice(&self, start: &BigUint, len: &BigUint) -> Word {
        let end = start + len;
        assert!(end <= self.length(), "letter range out of bounds");
        let mut out = Word::identity();
        let mut pos = BigUint::zero();
        for s in &self.syllables {
            let slen = s.length();
            let next = &pos + &slen;
            let lo = if &pos > start { pos.clone() } else { start.clone() };
            let hi = if next < end { next.clone() } else { end.clone() };
            if lo < hi {
                out.push_syllable(&s.with_length(&(hi - lo)));
            }
            pos = next;
            if pos >= end {
                break;
            }
        }
        out
    }

    /// Letter at `index`, as a syllable of length one.
    pub fn letter_at(&self, index: &BigUint) -> Option<Syllable> {
        let mut pos = BigUint::zero();
        for s in &self.syllables {
            pos += s.exp.magnitude();
            if index < &pos {
                return Some(s.with_length(&BigUint::one()));
            }
        }
        None
    }

    /// The rotation of the cyclic word spelled by `self` that starts at
    /// letter `offset` (taken modulo the length).
    pub fn rotate_letters(&self, offset: &BigUint) -> Word {
        let total = self.length();
        if total.is_zero() {
            return Word::identity();
        }
        let offset = offset % &total;
        let head = self.letter_slice(&offset, &(&total - &offset));
        let tail = self.letter_slice(&BigUint::zero(), &offset);
        head.concat(&tail)
    }

    /// Map every exponent through `f`, then freely reduce again.
    pub fn map_exponents(&self, mut f: impl FnMut(&Syllable) -> BigInt) -> Word {
        let mut out = Word::identity();
        for s in &self.syllables {
            out.push(s.gen, f(s));
        }
        out
    }

    pub fn generators(&self) -> impl Iterator<Item = Generator> + '_ {
        self.syllables.iter().map(|s| s.gen)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.syllables.is_empty() {
            return write!(f, "1");
        }
        for (i, s) in self.syllables.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            if s.exp.is_one() {
                write!(f, "{}", s.gen)?;
            } else {
                write!(f, "{}^{}", s.gen, s.exp)?;
            }
        }
        Ok(())
    }
}

impl std::ops::Mul for &Word {
    type Output = Word;

    fn mul(self, rhs: &Word) -> Word {
        self.concat(rhs)
    }
}

/// A cyclically reduced word in its canonical rotation.
///
/// Equality of two `CyclicWord`s is equality up to cyclic permutation (and,
/// for inputs that were not cyclically reduced, up to conjugacy).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CyclicWord {
    word: Word,
}

impl CyclicWord {
    /// Cyclically reduces `u` and picks the least syllable rotation under
    /// `(generator, exponent)` order.
    pub fn new(u: &Word) -> Self {
        let mut syl: std::collections::VecDeque<Syllable> = u.syllables.iter().cloned().collect();
        while syl.len() >= 2 && syl.front().map(|s| s.gen) == syl.back().map(|s| s.gen) {
            let last = syl.pop_back().unwrap();
            let first = syl.front_mut().unwrap();
            first.exp += last.exp;
            if first.exp.is_zero() {
                syl.pop_front();
            }
        }
        let mut syl: Vec<Syllable> = syl.into();
        let start = least_rotation(&syl);
        syl.rotate_left(start);
        Self {
            word: Word { syllables: syl },
        }
    }

    pub fn word(&self) -> &Word {
        &self.word
    }

    pub fn syllables(&self) -> &[Syllable] {
        &self.word.syllables
    }

    pub fn num_syllables(&self) -> usize {
        self.word.syllables.len()
    }

    pub fn is_empty(&self) -> bool {
        self.word.is_empty()
    }

    pub fn length(&self) -> BigUint {
        self.word.length()
    }

    pub fn inverse(&self) -> CyclicWord {
        CyclicWord::new(&self.word.inverse())
    }

    /// The canonical key of `{r, r^-1}`: the lesser of the two canonical forms.
    pub fn symmetric_key(&self) -> CyclicWord {
        let inv = self.inverse();
        if inv < *self {
            inv
        } else {
            self.clone()
        }
    }

    /// Writes `r = q^n` with `n` maximal.
    ///
    /// A single syllable `g^e` has root `g^(±1)` and `n = |e|`. Otherwise the
    /// period is the shortest cyclic period of the syllable sequence; a
    /// cyclically reduced word with two or more syllables cannot have a
    /// period that splits a syllable.
    pub fn primitive_root(&self) -> (CyclicWord, BigUint) {
        let syl = self.syllables();
        match syl.len() {
            0 => (self.clone(), BigUint::one()),
            1 => {
                let s = &syl[0];
                let unit = BigInt::from_biguint(s.exp.sign(), BigUint::one());
                (
                    CyclicWord::new(&Word::power(s.gen, unit)),
                    s.length(),
                )
            }
            n => {
                let p = smallest_period(syl);
                let p = if n % p == 0 { p } else { n };
                let root = Word {
                    syllables: syl[..p].to_vec(),
                };
                (CyclicWord::new(&root), BigUint::from(n / p))
            }
        }
    }

    /// The linear word of full length read from letter `offset`.
    pub fn rotation_at(&self, offset: &BigUint) -> Word {
        self.word.rotate_letters(offset)
    }

    /// The factor of `len <= |r|` letters starting at letter `offset`, read
    /// cyclically.
    pub fn factor_at(&self, offset: &BigUint, len: &BigUint) -> Word {
        self.rotation_at(offset).letter_slice(&BigUint::zero(), len)
    }
}

impl fmt::Display for CyclicWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.word.fmt(f)
    }
}

/// Minimum-expression index of the cyclic sequence (two-pointer scan, linear).
fn least_rotation<T: Ord>(s: &[T]) -> usize {
    let n = s.len();
    if n <= 1 {
        return 0;
    }
    let (mut i, mut j, mut k) = (0usize, 1usize, 0usize);
    while i < n && j < n && k < n {
        match s[(i + k) % n].cmp(&s[(j + k) % n]) {
            Ordering::Equal => k += 1,
            Ordering::Greater => {
                i += k + 1;
                if i == j {
                    i += 1;
                }
                k = 0;
            }
            Ordering::Less => {
                j += k + 1;
                if i == j {
                    j += 1;
                }
                k = 0;
            }
        }
    }
    i.min(j)
}

/// Smallest `p` with `s[t] == s[t + p]` for all valid `t` (prefix function).
fn smallest_period<T: Eq>(s: &[T]) -> usize {
    let n = s.len();
    let mut fail = vec![0usize; n];
    for i in 1..n {
        let mut k = fail[i - 1];
        while k > 0 && s[i] != s[k] {
            k = fail[k - 1];
        }
        if s[i] == s[k] {
            k += 1;
        }
        fail[i] = k;
    }
    n - fail[n - 1]
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("empty word (write `1` for the identity)")]
    Empty,
    #[error("unexpected character `{0}`")]
    UnexpectedChar(char),
    #[error("unexpected end of input")]
    UnexpectedEnd,
    #[error("generator `{0}` is not in the alphabet")]
    UnknownGenerator(char),
    #[error("malformed exponent")]
    MalformedExponent,
    #[error("exponent exceeds the budget of {0} bits")]
    ExponentTooLarge(u64),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse error at byte {offset}: {kind}")]
pub struct ParseError {
    pub offset: usize,
    pub kind: ParseErrorKind,
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
    alphabet: &'a Alphabet,
    budget: ExponentBudget,
}

impl<'a> Parser<'a> {
    fn err(&self, kind: ParseErrorKind) -> ParseError {
        ParseError {
            offset: self.pos,
            kind,
        }
    }

    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn skip_ws(&mut self) -> bool {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_whitespace()) {
            self.pos += 1;
        }
        self.pos > start
    }

    fn nat(&mut self) -> Result<BigUint, ParseError> {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(match self.peek() {
                None => self.err(ParseErrorKind::UnexpectedEnd),
                Some(_) => self.err(ParseErrorKind::MalformedExponent),
            });
        }
        let digits = std::str::from_utf8(&self.bytes[start..self.pos]).unwrap();
        let value: BigUint = digits.parse().unwrap();
        if value.bits() > self.budget.max_bits {
            self.pos = start;
            return Err(self.err(ParseErrorKind::ExponentTooLarge(self.budget.max_bits)));
        }
        Ok(value)
    }

    /// `"-"? nat ("^" nat ("^" nat)?)?`, right-associative.
    fn exponent(&mut self) -> Result<BigInt, ParseError> {
        let start = self.pos;
        let negative = self.peek() == Some(b'-');
        if negative {
            self.pos += 1;
        }
        let mut tower = vec![self.nat()?];
        while tower.len() < 3 && self.peek() == Some(b'^') {
            self.pos += 1;
            tower.push(self.nat()?);
        }
        if self.peek() == Some(b'^') {
            return Err(self.err(ParseErrorKind::MalformedExponent));
        }
        let too_large = ParseError {
            offset: start,
            kind: ParseErrorKind::ExponentTooLarge(self.budget.max_bits),
        };
        let mut value = tower.pop().unwrap();
        while let Some(base) = tower.pop() {
            value = checked_pow(&base, &value, self.budget).ok_or_else(|| too_large.clone())?;
        }
        let sign = if negative { Sign::Minus } else { Sign::Plus };
        Ok(BigInt::from_biguint(sign, value))
    }

    fn term(&mut self) -> Result<(Generator, BigInt), ParseError> {
        let c = match self.peek() {
            None => return Err(self.err(ParseErrorKind::UnexpectedEnd)),
            Some(c) => c,
        };
        let gen = match Generator::new(c as char) {
            Some(g) => g,
            None => {
                let ch = std::str::from_utf8(&self.bytes[self.pos..])
                    .ok()
                    .and_then(|s| s.chars().next())
                    .unwrap_or(c as char);
                return Err(self.err(ParseErrorKind::UnexpectedChar(ch)));
            }
        };
        if !self.alphabet.contains(gen) {
            return Err(self.err(ParseErrorKind::UnknownGenerator(c as char)));
        }
        self.pos += 1;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            Ok((gen, self.exponent()?))
        } else {
            Ok((gen, BigInt::one()))
        }
    }
}

/// `base^exp` if the result fits the budget.
fn checked_pow(base: &BigUint, exp: &BigUint, budget: ExponentBudget) -> Option<BigUint> {
    if exp.is_zero() {
        return Some(BigUint::one());
    }
    if base <= &BigUint::one() {
        return Some(base.clone());
    }
    let e = exp.to_u32()?;
    let approx_bits = (base.bits() - 1).checked_mul(e as u64)?;
    if approx_bits >= budget.max_bits {
        return None;
    }
    let v = base.pow(e);
    (v.bits() <= budget.max_bits).then_some(v)
}

/// Parses the textual word grammar into freely reduced syllable form.
///
/// ```text
/// word := "1" | term (whitespace term)*
/// term := gen | gen "^" exp
/// exp  := "-"? nat ("^" nat ("^" nat)?)?
/// ```
pub fn parse_word(text: &str, alphabet: &Alphabet) -> Result<Word, ParseError> {
    parse_word_with_budget(text, alphabet, ExponentBudget::default())
}

pub fn parse_word_with_budget(
    text: &str,
    alphabet: &Alphabet,
    budget: ExponentBudget,
) -> Result<Word, ParseError> {
    let mut p = Parser {
        bytes: text.as_bytes(),
        pos: 0,
        alphabet,
        budget,
    };
    p.skip_ws();
    if p.peek().is_none() {
        return Err(p.err(ParseErrorKind::Empty));
    }
    if p.peek() == Some(b'1') {
        p.pos += 1;
        p.skip_ws();
        return match p.peek() {
            None => Ok(Word::identity()),
            Some(c) => Err(p.err(ParseErrorKind::UnexpectedChar(c as char))),
        };
    }
    let mut w = Word::identity();
    loop {
        let (g, e) = p.term()?;
        w.push(g, e);
        let had_ws = p.skip_ws();
        match p.peek() {
            None => break,
            Some(c) if !had_ws => return Err(p.err(ParseErrorKind::UnexpectedChar(c as char))),
            Some(_) => {}
        }
    }
    Ok(w)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(c: char) -> Generator {
        Generator::new(c).unwrap()
    }

    fn w(text: &str) -> Word {
        parse_word(text, &Alphabet::ab()).unwrap()
    }

    fn syl(pairs: &[(char, i64)]) -> Word {
        Word::from_powers(pairs.iter().map(|&(c, e)| (g(c), e)))
    }

    #[test]
    fn parse_examples() {
        assert_eq!(w("a b b b"), syl(&[('a', 1), ('b', 3)]));
        assert!(w("a b^-1 b a^-1").is_empty());
        assert_eq!(w("a^2 a^-5 b^2^2^1"), syl(&[('a', -3), ('b', 4)]));
        assert_eq!(w("1"), Word::identity());
        assert_eq!(w("b^2^2^5").syllables()[0].exp, BigInt::from(1u64 << 32));
        assert_eq!(w("b^-2^3"), syl(&[('b', -8)]));
    }

    #[test]
    fn parse_errors_report_offsets() {
        let ab = Alphabet::ab();
        let e = parse_word("a c", &ab).unwrap_err();
        assert_eq!(e.offset, 2);
        assert_eq!(e.kind, ParseErrorKind::UnknownGenerator('c'));
        let e = parse_word("a^x", &ab).unwrap_err();
        assert_eq!((e.offset, e.kind), (2, ParseErrorKind::MalformedExponent));
        let e = parse_word("a^", &ab).unwrap_err();
        assert_eq!((e.offset, e.kind), (2, ParseErrorKind::UnexpectedEnd));
        let e = parse_word("ab", &ab).unwrap_err();
        assert_eq!((e.offset, e.kind), (1, ParseErrorKind::UnexpectedChar('b')));
        let e = parse_word("a * b", &ab).unwrap_err();
        assert_eq!((e.offset, e.kind), (2, ParseErrorKind::UnexpectedChar('*')));
        assert_eq!(parse_word("  ", &ab).unwrap_err().kind, ParseErrorKind::Empty);
        assert!(parse_word("a^2^2^2^2", &ab).is_err());
        let e = parse_word_with_budget("b^2^2^10", &ab, ExponentBudget::new(100)).unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::ExponentTooLarge(100));
    }

    #[test]
    fn concat_examples() {
        assert!((&syl(&[('a', 3)]) * &syl(&[('a', -3)])).is_empty());
        assert_eq!(
            &syl(&[('a', 1), ('b', 2)]) * &syl(&[('b', -2), ('a', 5)]),
            syl(&[('a', 6)])
        );
        assert_eq!(&Word::identity() * &syl(&[('b', 7)]), syl(&[('b', 7)]));
    }

    #[test]
    fn invert_examples() {
        assert_eq!(syl(&[('a', 1), ('b', 4)]).inverse(), syl(&[('b', -4), ('a', -1)]));
        assert!(Word::identity().inverse().is_empty());
    }

    #[test]
    fn render() {
        assert_eq!(w("a^-1 b^-4 a b^4").to_string(), "a^-1 b^-4 a b^4");
        assert_eq!(Word::identity().to_string(), "1");
    }

    #[test]
    fn cyclic_normalize_examples() {
        assert_eq!(CyclicWord::new(&w("a b a^-1")), CyclicWord::new(&w("b")));
        assert_eq!(CyclicWord::new(&w("b^4 a")), CyclicWord::new(&w("a b^4")));
        let c = CyclicWord::new(&w("a^2 b a^3"));
        assert_eq!(c.word(), &w("a^5 b"));
        assert!(CyclicWord::new(&w("a b a^-1 b^-1 b a b^-1 a^-1")).is_empty());
    }

    #[test]
    fn lengths() {
        assert_eq!(Word::identity().length(), BigUint::zero());
        assert_eq!(w("b^-256 a^100 b^256").length(), BigUint::from(612u32));
    }

    #[test]
    fn primitive_root_examples() {
        let (q, n) = CyclicWord::new(&w("b^16")).primitive_root();
        assert_eq!((q.word().clone(), n), (w("b"), BigUint::from(16u32)));
        let (q, n) = CyclicWord::new(&w("b^-5")).primitive_root();
        assert_eq!((q.word().clone(), n), (w("b^-1"), BigUint::from(5u32)));
        let r = w("a^256 b^256").pow(7);
        let (q, n) = CyclicWord::new(&r).primitive_root();
        assert_eq!((q, n), (CyclicWord::new(&w("a^256 b^256")), BigUint::from(7u32)));
        let (q, n) = CyclicWord::new(&w("a^2 b^3 a^2 b^3 a^2 b^3")).primitive_root();
        assert_eq!((q, n), (CyclicWord::new(&w("a^2 b^3")), BigUint::from(3u32)));
        let (q, n) = CyclicWord::new(&w("a b a b^2")).primitive_root();
        assert_eq!((q, n), (CyclicWord::new(&w("a b a b^2")), BigUint::one()));
    }

    #[test]
    fn slices_and_rotations() {
        let u = w("a^3 b^-2 a");
        assert_eq!(u.letter_slice(&2u32.into(), &3u32.into()), w("a b^-2"));
        assert_eq!(u.letter_at(&3u32.into()), Some(Syllable::new(g('b'), -1)));
        let c = CyclicWord::new(&w("a^2 b^2"));
        assert_eq!(c.rotation_at(&1u32.into()), w("a b^2 a"));
        assert_eq!(c.factor_at(&3u32.into(), &3u32.into()), w("b a^2"));
    }

    #[test]
    fn least_rotation_picks_minimum() {
        assert_eq!(least_rotation(&[3, 1, 2, 1, 1]), 3);
        assert_eq!(least_rotation(&[1, 1, 1]), 0);
        assert_eq!(least_rotation::<u8>(&[]), 0);
    }
}
