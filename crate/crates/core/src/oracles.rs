//! Brute-force referees on decompressed letter strings.
//!
//! Nothing here is used by the production paths. Every routine works on
//! explicit letters with quadratic or worse algorithms and literal readings of
//! the definitions, so the compressed algorithms can be checked against them.

use num_bigint::BigUint;
use num_traits::ToPrimitive;

use crate::words::{Generator, Word};

pub const DEFAULT_ORACLE_CAP: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub gen: Generator,
    pub inverted: bool,
}

impl Letter {
    pub fn inverse(self) -> Self {
        Self {
            gen: self.gen,
            inverted: !self.inverted,
        }
    }
}

pub type LetterString = Vec<Letter>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CapExceeded {
    pub length: BigUint,
    pub cap: usize,
}

pub fn decompress(u: &Word) -> Result<LetterString, CapExceeded> {
    decompress_capped(u, DEFAULT_ORACLE_CAP)
}

pub fn decompress_capped(u: &Word, cap: usize) -> Result<LetterString, CapExceeded> {
    let len = u.length();
    if len > BigUint::from(cap) {
        return Err(CapExceeded { length: len, cap });
    }
    let mut out = Vec::new();
    for s in u.syllables() {
        let n = s.exp.magnitude().to_usize().unwrap();
        let letter = Letter {
            gen: s.gen,
            inverted: s.exp.sign() == num_bigint::Sign::Minus,
        };
        out.extend(std::iter::repeat_n(letter, n));
    }
    Ok(out)
}

pub fn invert(s: &[Letter]) -> LetterString {
    s.iter().rev().map(|l| l.inverse()).collect()
}

/// Stack-based free reduction.
pub fn free_reduce(s: &[Letter]) -> LetterString {
    let mut out: LetterString = Vec::with_capacity(s.len());
    for &l in s {
        if out.last() == Some(&l.inverse()) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    out
}

/// Free reduction followed by stripping inverse pairs across the wrap.
pub fn cyclic_reduce(s: &[Letter]) -> LetterString {
    let mut v = free_reduce(s);
    while v.len() >= 2 && v[0] == v[v.len() - 1].inverse() {
        v.pop();
        v.remove(0);
    }
    v
}

pub fn rotate(s: &[Letter], start: usize) -> LetterString {
    let mut v = s.to_vec();
    if !v.is_empty() {
        v.rotate_left(start % s.len());
    }
    v
}

/// Whether two strings are equal up to rotation, by trying every rotation.
pub fn rotation_equivalent(a: &[Letter], b: &[Letter]) -> bool {
    a.len() == b.len() && (a.is_empty() || (0..a.len()).any(|i| rotate(a, i) == b))
}

/// The least `p` dividing `|s|` such that rotating by `p` fixes `s`, with
/// `|s| / p`.
pub fn primitive_period(s: &[Letter]) -> (usize, usize) {
    let n = s.len();
    for p in 1..=n {
        if n.is_multiple_of(p) && rotate(s, p) == s {
            return (p, n / p);
        }
    }
    (n, 1)
}

fn lcp_cyclic(a: &[Letter], sa: usize, b: &[Letter], sb: usize, cap: usize) -> usize {
    let mut k = 0;
    while k < cap && a[(sa + k) % a.len()] == b[(sb + k) % b.len()] {
        k += 1;
    }
    k
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleOccurrence {
    /// `+1` for the relator, `-1` for its inverse.
    pub sign: i8,
    /// Letter offset in the relator (or in its letter-reversed inverse).
    pub start: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OraclePiece {
    pub length: usize,
    pub piece: LetterString,
    pub occ1: OracleOccurrence,
    pub occ2: OracleOccurrence,
}

/// Longest piece between `r1` and `r2` by exhaustive enumeration of every
/// pair of occurrence starts over all rotations of `r1^±` and `r2^±`.
///
/// With `same_relator`, two occurrences in the same sign whose starts differ
/// by a multiple of the primitive period count as the same occurrence.
pub fn oracle_max_piece(r1: &[Letter], r2: &[Letter], same_relator: bool) -> Option<OraclePiece> {
    if r1.is_empty() || r2.is_empty() {
        return None;
    }
    let r1m = invert(r1);
    let r2m = invert(r2);
    let sides1 = [(1i8, r1), (-1i8, &r1m[..])];
    let sides2 = [(1i8, r2), (-1i8, &r2m[..])];
    let (period, _) = primitive_period(r1);
    let cap = r1.len().min(r2.len());
    let mut best: Option<OraclePiece> = None;
    for &(e1, a) in &sides1 {
        for s1 in 0..a.len() {
            for &(e2, b) in &sides2 {
                for s2 in 0..b.len() {
                    if same_relator && e1 == e2 && s1 % period == s2 % period {
                        continue;
                    }
                    let len = lcp_cyclic(a, s1, b, s2, cap);
                    if len > 0 && best.as_ref().is_none_or(|p| len > p.length) {
                        best = Some(OraclePiece {
                            length: len,
                            piece: (0..len).map(|k| a[(s1 + k) % a.len()]).collect(),
                            occ1: OracleOccurrence { sign: e1, start: s1 },
                            occ2: OracleOccurrence { sign: e2, start: s2 },
                        });
                    }
                }
            }
        }
    }
    best
}

/// Longest common factor of `u` (linear, or cyclic when `u_cyclic`) and the
/// cyclic word `v`, capped at `|v|` (and at `|u|` when `u` is cyclic).
pub fn oracle_longest_common_factor(u: &[Letter], u_cyclic: bool, v: &[Letter]) -> usize {
    if u.is_empty() || v.is_empty() {
        return 0;
    }
    let mut best = 0;
    for i in 0..u.len() {
        for j in 0..v.len() {
            let mut k = 0;
            loop {
                if k >= v.len() {
                    break;
                }
                let ui = if u_cyclic {
                    if k >= u.len() {
                        break;
                    }
                    u[(i + k) % u.len()]
                } else {
                    match u.get(i + k) {
                        Some(&l) => l,
                        None => break,
                    }
                };
                if ui != v[(j + k) % v.len()] {
                    break;
                }
                k += 1;
            }
            best = best.max(k);
        }
    }
    best
}

/// Whether `u` contains more than half of some cyclic rotation of `r^±` for a
/// relator `r` in `relators`.
pub fn oracle_has_major_subword(u: &[Letter], relators: &[LetterString]) -> bool {
    relators.iter().any(|r| {
        let best = oracle_longest_common_factor(u, false, r)
            .max(oracle_longest_common_factor(u, false, &invert(r)));
        2 * best > r.len()
    })
}

/// Least `k >= 1` relating `left` and `right`, scanning `k = 1, 2, 3, ...` and
/// checking both clauses literally.
pub fn oracle_min_k(left: &[BigUint], right: &[BigUint]) -> u64 {
    let mut k = 1u64;
    loop {
        if oracle_related(left, right, k) {
            return k;
        }
        k += 1;
    }
}

pub fn oracle_related(left: &[BigUint], right: &[BigUint], k: u64) -> bool {
    let covered = |from: &[BigUint], to: &[BigUint]| {
        let kk = BigUint::from(k);
        let threshold = (&kk + 1u32) * (&kk + 1u32);
        from.iter().all(|m| {
            *m <= threshold || to.iter().any(|mp| *m <= &kk * mp && *mp <= &kk * m)
        })
    };
    covered(left, right) && covered(right, left)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::{parse_word, Alphabet};

    fn letters(text: &str) -> LetterString {
        decompress(&parse_word(text, &Alphabet::ab()).unwrap()).unwrap()
    }

    #[test]
    fn decompress_examples() {
        let s = letters("a^2 b^-1");
        assert_eq!(s.len(), 3);
        assert!(!s[0].inverted && s[2].inverted);
        assert!(letters("1").is_empty());
        let big = parse_word("b^20000", &Alphabet::ab()).unwrap();
        assert!(decompress(&big).is_err());
    }

    #[test]
    fn torus_relator_has_unit_piece() {
        let r = letters("a b a^-1 b^-1");
        assert_eq!(oracle_max_piece(&r, &r, true).unwrap().length, 1);
    }

    #[test]
    fn pure_power_has_no_self_piece() {
        let r = letters("b^16");
        assert_eq!(oracle_max_piece(&r, &r, true), None);
    }

    #[test]
    fn reductions() {
        let s = letters("a b");
        let mut t = s.clone();
        t.extend(invert(&s));
        assert!(free_reduce(&t).is_empty());
        let mut c = letters("a");
        c.extend(letters("b"));
        c.push(c[0].inverse());
        assert_eq!(cyclic_reduce(&c), letters("b"));
    }

    #[test]
    fn min_k_scan() {
        let l: Vec<BigUint> = vec![2u32.into(), 16u32.into()];
        let r: Vec<BigUint> = vec![4u32.into()];
        assert_eq!(oracle_min_k(&l, &r), 3);
        assert_eq!(oracle_min_k(&l, &l), 1);
        let r2: Vec<BigUint> = vec![4u32.into(), 256u32.into()];
        assert_eq!(oracle_min_k(&l, &r2), 15);
    }

    #[test]
    fn period() {
        assert_eq!(primitive_period(&letters("a^2 b^3 a^2 b^3 a^2 b^3")), (5, 3));
        assert_eq!(primitive_period(&letters("b^16")), (1, 16));
    }
}
