//! Pieces between relators and the metric small-cancellation condition.
//!
//! A piece is a word with two essentially distinct occurrences among the
//! cyclic rotations of the relators and their inverses. For a relator
//! `r = q^n` with `q` primitive, two occurrences in `r` (same sign) whose
//! starts differ by a multiple of `|q|` are the same occurrence. Occurrences
//! in `r` and in `r^-1` are always distinct.
//!
//! Common factors are found without expanding letters. Any factor spanning
//! two or more syllables crosses a syllable boundary that is a boundary in
//! both words, so it suffices to try every pair of boundaries and extend
//! outwards: interior syllables must agree exactly and only the two end
//! syllables may overlap partially. Factors inside a single syllable are
//! handled separately. The cost depends on syllable counts only.

use std::cmp::Ordering;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::Zero;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::budget::ExponentBudget;
use crate::error::{Error, Result};
use crate::families::{format_rational, Presentation, Relator};
use crate::words::{CyclicWord, Syllable, Word};

/// A syllable sequence read linearly or cyclically, with letter offsets.
pub(crate) struct Track<'a> {
    syl: &'a [Syllable],
    cyclic: bool,
    lens: Vec<BigUint>,
    starts: Vec<BigUint>,
    total: BigUint,
}

impl<'a> Track<'a> {
    pub(crate) fn new(syl: &'a [Syllable], cyclic: bool) -> Self {
        let lens: Vec<BigUint> = syl.iter().map(Syllable::length).collect();
        let mut starts = Vec::with_capacity(syl.len());
        let mut total = BigUint::zero();
        for l in &lens {
            starts.push(total.clone());
            total += l;
        }
        Self {
            syl,
            cyclic,
            lens,
            starts,
            total,
        }
    }

    fn n(&self) -> isize {
        self.syl.len() as isize
    }

    /// Syllable at a virtual index; cyclic tracks repeat in both directions.
    fn get(&self, v: isize) -> Option<(&Syllable, &BigUint)> {
        let n = self.n();
        if n == 0 {
            return None;
        }
        let i = if self.cyclic {
            v.rem_euclid(n)
        } else if (0..n).contains(&v) {
            v
        } else {
            return None;
        };
        Some((&self.syl[i as usize], &self.lens[i as usize]))
    }

    /// Letter position of the start of virtual syllable `v`.
    fn position(&self, v: isize) -> BigInt {
        let n = self.n();
        let (q, r) = (v.div_euclid(n), v.rem_euclid(n));
        BigInt::from(q) * BigInt::from(self.total.clone()) + BigInt::from(self.starts[r as usize].clone())
    }

    fn normalize(&self, pos: BigInt) -> BigUint {
        if self.cyclic && !self.total.is_zero() {
            pos.mod_floor(&BigInt::from(self.total.clone())).magnitude().clone()
        } else {
            pos.magnitude().clone()
        }
    }

    /// Boundaries before syllable `v` that a multi-syllable factor can cross.
    fn boundaries(&self) -> std::ops::Range<isize> {
        match (self.cyclic, self.n()) {
            (true, n) if n >= 2 => 0..n,
            (false, n) if n >= 2 => 1..n,
            _ => 0..0,
        }
    }

    /// How far an extension may walk from a boundary.
    fn reach(&self) -> isize {
        self.n()
    }

    /// `(syllable index, offset in syllable)` of a letter position.
    pub(crate) fn locate(&self, pos: &BigUint) -> (usize, BigUint) {
        let i = match self.starts.binary_search(pos) {
            Ok(i) => i,
            Err(i) => i.saturating_sub(1),
        };
        (i, pos - &self.starts[i])
    }
}

/// Aligned occurrence of a common factor: letter starts in both tracks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Alignment {
    pub length: BigUint,
    pub start_x: BigUint,
    pub start_y: BigUint,
}

impl Alignment {
    fn better_than(&self, other: &Alignment) -> bool {
        match self.length.cmp(&other.length) {
            Ordering::Greater => true,
            Ordering::Less => false,
            Ordering::Equal => (&self.start_x, &self.start_y) < (&other.start_x, &other.start_y),
        }
    }
}

fn keep_best(best: &mut Option<Alignment>, cand: Alignment) {
    if cand.length.is_zero() {
        return;
    }
    if best.as_ref().is_none_or(|b| cand.better_than(b)) {
        *best = Some(cand);
    }
}

/// Longest common factor of two tracks.
///
/// `same_way` is the letter period `|q|` when `x` and `y` are the same
/// relator read in the same direction: occurrence pairs whose starts agree
/// modulo it are skipped.
pub(crate) fn search(x: &Track, y: &Track, same_way: Option<&BigUint>) -> Option<Alignment> {
    let forbidden = |sx: &BigInt, sy: &BigInt| match same_way {
        Some(p) => (sx - sy).mod_floor(&BigInt::from(p.clone())).is_zero(),
        None => false,
    };
    let mut cap: Option<BigUint> = None;
    for t in [x, y] {
        if t.cyclic {
            cap = Some(match cap {
                Some(c) => c.min(t.total.clone()),
                None => t.total.clone(),
            });
        }
    }
    let mut best: Option<Alignment> = None;
    let (pos_x, pos_y): (Vec<BigInt>, Vec<BigInt>) = (
        (0..x.n()).map(|v| x.position(v)).collect(),
        (0..y.n()).map(|v| y.position(v)).collect(),
    );

    for bx in x.boundaries() {
        for by in y.boundaries() {
            let quick = |dx: isize| match (x.get(bx + dx), y.get(by + dx)) {
                (Some((p, _)), Some((q, _))) => p.same_letter(q),
                _ => false,
            };
            if !quick(-1) || !quick(0) {
                // A factor through this boundary needs letters on both sides;
                // one-sided matches are single-syllable factors.
                continue;
            }
            let (bsx, bsy) = (&pos_x[bx as usize], &pos_y[by as usize]);
            if forbidden(bsx, bsy) {
                continue;
            }
            let mut back = BigUint::zero();
            let limit = x.reach().min(y.reach());
            let mut t = 1;
            while t <= limit {
                match (x.get(bx - t), y.get(by - t)) {
                    (Some((p, lp)), Some((q, _))) if p == q => back += lp,
                    (Some((p, lp)), Some((q, lq))) if p.same_letter(q) => {
                        back += lp.min(lq);
                        break;
                    }
                    _ => break,
                }
                t += 1;
            }
            let mut fwd = BigUint::zero();
            let mut t = 0;
            while t < limit {
                match (x.get(bx + t), y.get(by + t)) {
                    (Some((p, lp)), Some((q, _))) if p == q => fwd += lp,
                    (Some((p, lp)), Some((q, lq))) if p.same_letter(q) => {
                        fwd += lp.min(lq);
                        break;
                    }
                    _ => break,
                }
                t += 1;
            }
            let mut length = &back + &fwd;
            if let Some(c) = &cap {
                if &length > c {
                    length = c.clone();
                }
            }
            let back = BigInt::from(back);
            keep_best(
                &mut best,
                Alignment {
                    length,
                    start_x: x.normalize(bsx - &back),
                    start_y: y.normalize(bsy - &back),
                },
            );
        }
    }

    for ix in 0..x.n() {
        for iy in 0..y.n() {
            let (p, lp) = x.get(ix).unwrap();
            let (q, lq) = y.get(iy).unwrap();
            if !p.same_letter(q) || best.as_ref().is_some_and(|b| lp.min(lq) < &b.length) {
                continue;
            }
            let (sx, sy) = (&pos_x[ix as usize], &pos_y[iy as usize]);
            let one = BigUint::from(1u32);
            let shifts: &[(u32, u32)] = if forbidden(sx, sy) {
                if same_way.is_some_and(|per| per == &one) {
                    &[]
                } else {
                    &[(1, 0), (0, 1)]
                }
            } else {
                &[(0, 0)]
            };
            for &(ox, oy) in shifts {
                let (ox, oy) = (BigUint::from(ox), BigUint::from(oy));
                if &ox >= lp || &oy >= lq {
                    continue;
                }
                let length = (lp - &ox).min(lq - &oy);
                keep_best(
                    &mut best,
                    Alignment {
                        length,
                        start_x: x.normalize(sx.clone() + BigInt::from(ox)),
                        start_y: y.normalize(sy.clone() + BigInt::from(oy)),
                    },
                );
            }
        }
    }
    best
}

/// A located occurrence of a factor in `r` (`sign = 1`) or in `r^-1`
/// (`sign = -1`, positions in the reversed syllable sequence of `r`).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Occurrence {
    pub relator_index: usize,
    pub sign: i8,
    pub syllable: usize,
    pub offset: BigUint,
    /// Letter offset of the start from the beginning of `r^sign`.
    pub letter_start: BigUint,
    pub letter_length: BigUint,
}

impl Occurrence {
    pub fn to_json(&self) -> Value {
        json!({
            "relator_index": self.relator_index,
            "sign": self.sign,
            "syllable": self.syllable,
            "offset": self.offset.to_string(),
            "letter_start": self.letter_start.to_string(),
            "letter_length": self.letter_length.to_string(),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommonFactor {
    pub piece: Word,
    pub start_u: BigUint,
    pub start_v: BigUint,
    pub length: BigUint,
}

/// A longest common factor of `u` (cyclic when `u_cyclic`) and the cyclic
/// word `v`, read in the given directions.
pub fn longest_common_factor(u: &Word, u_cyclic: bool, v: &CyclicWord) -> Option<CommonFactor> {
    let (x, y) = (Track::new(u.syllables(), u_cyclic), Track::new(v.syllables(), true));
    let a = search(&x, &y, None)?;
    let piece = factor_from(u, u_cyclic, &a.start_x, &a.length);
    Some(CommonFactor {
        piece,
        start_u: a.start_x,
        start_v: a.start_y,
        length: a.length,
    })
}

/// Letters `[start, start + len)` of the cyclic word spelled by `w`.
pub fn factor_of(w: &Word, start: &BigUint, len: &BigUint) -> Word {
    factor_from(w, true, start, len)
}

/// Letters `[start, start + len)` of `w`, wrapping when `cyclic`.
pub(crate) fn factor_from(w: &Word, cyclic: bool, start: &BigUint, len: &BigUint) -> Word {
    if !cyclic {
        return w.letter_slice(start, len);
    }
    w.rotate_letters(start).letter_slice(&BigUint::zero(), len)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PieceReport {
    pub piece: Word,
    pub occ1: Occurrence,
    pub occ2: Occurrence,
    /// `|p| / |r|` for the shorter of the two relators.
    pub ratio: BigRational,
}

impl PieceReport {
    pub fn length(&self) -> &BigUint {
        &self.occ1.letter_length
    }

    pub fn to_json(&self) -> Value {
        json!({
            "piece": self.piece.to_string(),
            "length": self.length().to_string(),
            "ratio": format_rational(&self.ratio),
            "occ1": self.occ1.to_json(),
            "occ2": self.occ2.to_json(),
        })
    }
}

fn occurrence(track: &Track, relator_index: usize, sign: i8, start: &BigUint, len: &BigUint) -> Occurrence {
    let (syllable, offset) = track.locate(start);
    Occurrence {
        relator_index,
        sign,
        syllable,
        offset,
        letter_start: start.clone(),
        letter_length: len.clone(),
    }
}

/// The longest piece between two relators over all sign combinations.
///
/// With `same_relator`, `r1` and `r2` are the same relator and the identity
/// and `Z_n` rotations are not counted as second occurrences.
pub fn max_piece(r1: &Relator, r2: &Relator, same_relator: bool) -> Option<PieceReport> {
    let w1 = r1.word.word();
    let w2 = r2.word.word();
    let w2_inv = w2.inverse();
    let x = Track::new(w1.syllables(), true);
    let y_pos = Track::new(w2.syllables(), true);
    let y_neg = Track::new(w2_inv.syllables(), true);
    let period = if same_relator {
        let (q, _) = r1.word.primitive_root();
        Some(q.length())
    } else {
        None
    };
    // (r1^-, r2^-) and (r1^-, r2^+) mirror these two by inversion.
    let candidates = [
        (1i8, search(&x, &y_pos, period.as_ref()), &y_pos, w2),
        (-1i8, search(&x, &y_neg, None), &y_neg, &w2_inv),
    ];
    let mut best: Option<(i8, Alignment, &Track, &Word)> = None;
    for (sign, found, track, _) in candidates {
        if let Some(a) = found {
            let replace = match &best {
                None => true,
                Some((_, b, _, _)) => a.length > b.length,
            };
            if replace {
                best = Some((sign, a, track, w1));
            }
        }
    }
    let (sign, a, y, _) = best?;
    let piece = factor_from(w1, true, &a.start_x, &a.length);
    let shorter = r1.length().min(r2.length());
    Some(PieceReport {
        piece,
        occ1: occurrence(&x, r1.index, 1, &a.start_x, &a.length),
        occ2: occurrence(y, r2.index, sign, &a.start_y, &a.length),
        ratio: BigRational::new(BigInt::from(a.length.clone()), BigInt::from(shorter)),
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerificationReport {
    pub c_prime: bool,
    pub lambda: BigRational,
    pub max_ratio: BigRational,
    pub witness: Option<PieceReport>,
    pub relator_count: usize,
    pub checked_up_to_length: BigUint,
    /// No relator of the presentation is longer than the bound.
    pub complete: bool,
}

impl VerificationReport {
    pub fn to_json(&self) -> Value {
        json!({
            "c_prime": self.c_prime,
            "lambda": format_rational(&self.lambda),
            "max_ratio": format_rational(&self.max_ratio),
            "witness": self.witness.as_ref().map(PieceReport::to_json),
            "relator_count": self.relator_count,
            "checked_up_to_length": self.checked_up_to_length.to_string(),
            "complete": self.complete,
        })
    }
}

/// Every pair of relators `(i, j)` with `i <= j`, and its longest piece.
pub fn pairwise_pieces(relators: &[Relator]) -> Vec<((usize, usize), Option<PieceReport>)> {
    let pairs: Vec<(usize, usize)> = (0..relators.len())
        .flat_map(|i| (i..relators.len()).map(move |j| (i, j)))
        .collect();
    pairs
        .into_par_iter()
        .map(|(i, j)| ((i, j), max_piece(&relators[i], &relators[j], i == j)))
        .collect()
}

/// Checks `C'(λ)`: every piece `p` in a relator `r` has `|p| < λ|r|`.
///
/// Only relators of length at most `max_length` are considered; the report
/// says whether that covered the whole presentation.
pub fn verify_c_prime(
    p: &Presentation,
    max_length: Option<&BigUint>,
    budget: ExponentBudget,
) -> Result<VerificationReport> {
    let relators = p.enumerate_relators(max_length, budget)?;
    if relators.is_empty() {
        return Err(Error::EmptyRelatorSet(
            max_length.map_or_else(|| "unbounded".to_string(), BigUint::to_string),
        ));
    }
    let checked = match max_length {
        Some(m) => m.clone(),
        None => relators.iter().map(Relator::length).max().unwrap_or_default(),
    };
    let complete = !p.has_relators_beyond(&checked);
    let mut witness: Option<PieceReport> = None;
    // Deterministic merge: larger ratio wins, then the earlier pair and
    // occurrence in enumeration order.
    for (_, report) in pairwise_pieces(&relators) {
        let Some(report) = report else { continue };
        let replace = match &witness {
            None => true,
            Some(w) => match report.ratio.cmp(&w.ratio) {
                Ordering::Greater => true,
                Ordering::Equal => (&report.occ1, &report.occ2) < (&w.occ1, &w.occ2),
                Ordering::Less => false,
            },
        };
        if replace {
            witness = Some(report);
        }
    }
    let max_ratio = witness
        .as_ref()
        .map_or_else(BigRational::zero, |w| w.ratio.clone());
    Ok(VerificationReport {
        c_prime: max_ratio < p.lambda,
        lambda: p.lambda.clone(),
        max_ratio,
        witness,
        relator_count: relators.len(),
        checked_up_to_length: checked,
        complete,
    })
}
