//! Majority reduction and the word problem.
//!
//! A factor `v` of a cyclic rotation `v·t` of some `r^±` is major when
//! `2|v| > |r|`. Replacing it by `t^-1` strictly shortens the word without
//! changing the group element. A nonempty word with no major factor is
//! nontrivial in a `C'(1/6)` group; conversely every nonempty trivial word
//! contains one (Greendlinger), so the reduction ends at the empty word
//! exactly for trivial input.

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::Zero;
use serde_json::{json, Value};

use crate::budget::ExponentBudget;
use crate::error::{Error, Result};
use crate::families::{Presentation, Relator};
use crate::pieces::{search, Track};
use crate::words::{CyclicWord, Word};

pub const DEFAULT_STEP_LIMIT: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MajorOccurrence {
    pub relator_index: usize,
    /// `1` when `v·t` is a rotation of `r`, `-1` for `r^-1`.
    pub sign: i8,
    pub relator: CyclicWord,
    /// Letter offset of `v` in the input word.
    pub start: BigUint,
    pub v: Word,
    pub t: Word,
}

impl MajorOccurrence {
    pub fn v_len(&self) -> BigUint {
        self.v.length()
    }

    /// Whether `v·t` is a cyclic rotation of `r^sign` and `v` is major.
    pub fn is_valid(&self) -> bool {
        let r = if self.sign == 1 {
            self.relator.clone()
        } else {
            self.relator.inverse()
        };
        let vt = self.v.concat(&self.t);
        vt.length() == self.relator.length()
            && CyclicWord::new(&vt) == r
            && self.v.length() * 2u32 > self.relator.length()
    }
}

/// Longest factor of `u` shared with a rotation of `r^±` for any of the given
/// relators, if it is more than half of that relator.
///
/// Among major factors the largest ratio `|v|/|r|` wins, then the lower
/// relator index, then sign `+1`, then the leftmost start in `u`.
pub fn find_major_subword(u: &Word, relators: &[Relator]) -> Option<MajorOccurrence> {
    let track_u = Track::new(u.syllables(), false);
    let u_len = u.length();
    let mut best: Option<(BigRational, MajorOccurrence)> = None;
    for r in relators {
        let r_len = r.length();
        if r_len >= &u_len * 2u32 {
            continue;
        }
        let forward = r.word.word().clone();
        let backward = forward.inverse();
        for (sign, rw) in [(1i8, &forward), (-1i8, &backward)] {
            let track_r = Track::new(rw.syllables(), true);
            let Some(a) = search(&track_u, &track_r, None) else { continue };
            if &a.length * 2u32 <= r_len {
                continue;
            }
            let ratio = BigRational::new(a.length.clone().into(), r_len.clone().into());
            if best.as_ref().is_some_and(|(b, _)| &ratio <= b) {
                continue;
            }
            let rotation = rw.rotate_letters(&a.start_y);
            let v = rotation.letter_slice(&BigUint::zero(), &a.length);
            let t = rotation.letter_slice(&a.length, &(&r_len - &a.length));
            best = Some((
                ratio,
                MajorOccurrence {
                    relator_index: r.index,
                    sign,
                    relator: r.word.clone(),
                    start: a.start_x,
                    v,
                    t,
                },
            ));
        }
    }
    best.map(|(_, m)| m)
}

/// Relators that can contribute a major factor to a word of length `len`.
pub fn relevant_relators(p: &Presentation, len: &BigUint, budget: ExponentBudget) -> Result<Vec<Relator>> {
    if len.is_zero() {
        return Ok(Vec::new());
    }
    let bound = len * 2u32 - 1u32;
    p.enumerate_relators(Some(&bound), budget)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionStep {
    pub before: Word,
    pub occurrence: MajorOccurrence,
    pub after: Word,
}

impl ReductionStep {
    /// Rechecks the step from scratch: `v·t` is a relator rotation, `v` sits
    /// at the recorded place, `after` is the substitution, and it is shorter.
    pub fn is_valid(&self) -> bool {
        let occ = &self.occurrence;
        let v_len = occ.v.length();
        let end = &occ.start + &v_len;
        if !occ.is_valid() || end > self.before.length() {
            return false;
        }
        if self.before.letter_slice(&occ.start, &v_len) != occ.v {
            return false;
        }
        let expected = substitute(&self.before, &occ.start, &v_len, &occ.t.inverse());
        expected == self.after && self.after.length() < self.before.length()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "before": self.before.to_string(),
            "relator_index": self.occurrence.relator_index,
            "sign": self.occurrence.sign,
            "v_len": self.occurrence.v_len().to_string(),
            "after": self.after.to_string(),
        })
    }
}

fn substitute(u: &Word, start: &BigUint, len: &BigUint, replacement: &Word) -> Word {
    let head = u.letter_slice(&BigUint::zero(), start);
    let tail_start = start + len;
    let tail = u.letter_slice(&tail_start, &(u.length() - &tail_start));
    head.concat(replacement).concat(&tail)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionTrace {
    pub input: Word,
    pub steps: Vec<ReductionStep>,
    /// The majority-reduced end result.
    pub result: Word,
}

impl ReductionTrace {
    pub fn is_valid(&self) -> bool {
        let mut current = &self.input;
        for step in &self.steps {
            if &step.before != current || !step.is_valid() {
                return false;
            }
            current = &step.after;
        }
        current == &self.result
    }

    pub fn to_json(&self) -> Value {
        let verdict = if self.result.is_empty() { "trivial" } else { "nontrivial" };
        json!({
            "input": self.input.to_string(),
            "steps": self.steps.iter().map(ReductionStep::to_json).collect::<Vec<_>>(),
            "result": verdict,
            "witness": self.result.to_string(),
        })
    }
}

/// Reduces `u` against an explicit relator list until no major factor is left.
pub fn dehn_reduce_with(u: &Word, relators: &[Relator], step_limit: usize) -> Result<ReductionTrace> {
    let mut current = u.clone();
    let mut steps = Vec::new();
    while let Some(occ) = find_major_subword(&current, relators) {
        if steps.len() >= step_limit {
            return Err(Error::StepLimit(step_limit));
        }
        let after = substitute(&current, &occ.start, &occ.v_len(), &occ.t.inverse());
        debug_assert!(after.length() < current.length());
        steps.push(ReductionStep {
            before: std::mem::replace(&mut current, after.clone()),
            occurrence: occ,
            after,
        });
    }
    Ok(ReductionTrace {
        input: u.clone(),
        steps,
        result: current,
    })
}

/// Majority-reduces `u` in the group presented by `p`.
///
/// Only relators shorter than `2|u|` can ever supply a major factor, and
/// lengths only decrease, so those are enumerated once up front.
pub fn dehn_reduce(u: &Word, p: &Presentation, budget: ExponentBudget, step_limit: usize) -> Result<ReductionTrace> {
    let relators = relevant_relators(p, &u.length(), budget)?;
    dehn_reduce_with(u, &relators, step_limit)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decision {
    pub trivial: bool,
    /// For a trivial word the trace is the certificate; otherwise its result
    /// is a nonempty majority-reduced word representing the same element.
    pub trace: ReductionTrace,
}

impl Decision {
    pub fn witness(&self) -> &Word {
        &self.trace.result
    }

    pub fn to_json(&self) -> Value {
        self.trace.to_json()
    }
}

/// Word problem for a `C'(1/6)` presentation.
pub fn is_trivial(u: &Word, p: &Presentation, budget: ExponentBudget, step_limit: usize) -> Result<Decision> {
    let trace = dehn_reduce(u, p, budget, step_limit)?;
    Ok(Decision {
        trivial: trace.result.is_empty(),
        trace,
    })
}

/// Whether `u` contains no major factor of any relator of `p`.
pub fn is_majority_reduced(u: &Word, p: &Presentation, budget: ExponentBudget) -> Result<bool> {
    let relators = relevant_relators(p, &u.length(), budget)?;
    Ok(find_major_subword(u, &relators).is_none())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{build_wise_chong, SetSpec};
    use crate::words::{parse_word, Alphabet};

    fn budget() -> ExponentBudget {
        ExponentBudget::default()
    }

    fn w(text: &str) -> Word {
        parse_word(text, &Alphabet::ab()).unwrap()
    }

    fn g1() -> Presentation {
        Presentation::g_of_s(SetSpec::list([1]), 100)
    }

    #[test]
    fn relator_is_its_own_major_subword() {
        let w1 = build_wise_chong(1, 100, budget()).unwrap();
        let rels = relevant_relators(&g1(), &w1.length(), budget()).unwrap();
        let occ = find_major_subword(w1.word(), &rels).unwrap();
        assert_eq!(occ.v_len(), w1.length());
        assert!(occ.t.is_empty());
        assert!(occ.is_valid());
    }

    #[test]
    fn single_letter_is_majority_reduced() {
        assert!(is_majority_reduced(&w("a"), &g1(), budget()).unwrap());
    }

    #[test]
    fn long_prefix_is_major() {
        let w1 = build_wise_chong(1, 100, budget()).unwrap();
        let prefix = w1.word().letter_slice(&BigUint::zero(), &BigUint::from(5500u32));
        let rels = relevant_relators(&g1(), &prefix.length(), budget()).unwrap();
        let occ = find_major_subword(&prefix, &rels).unwrap();
        assert_eq!(occ.v_len(), BigUint::from(5500u32));
        assert!(occ.is_valid());
        let half = w1.word().letter_slice(&BigUint::zero(), &BigUint::from(5450u32));
        let rels = relevant_relators(&g1(), &half.length(), budget()).unwrap();
        assert!(find_major_subword(&half, &rels).is_none());
    }

    #[test]
    fn relator_reduces_to_empty() {
        let w1 = build_wise_chong(1, 100, budget()).unwrap();
        let d = is_trivial(w1.word(), &g1(), budget(), DEFAULT_STEP_LIMIT).unwrap();
        assert!(d.trivial);
        assert!(!d.trace.steps.is_empty());
        assert!(d.trace.is_valid());
    }

    #[test]
    fn conjugate_of_relator_reduces_to_empty() {
        let w1 = build_wise_chong(1, 100, budget()).unwrap();
        let g = w("a^3 b^2");
        let u = g.concat(w1.word()).concat(&g.inverse());
        let d = is_trivial(&u, &g1(), budget(), DEFAULT_STEP_LIMIT).unwrap();
        assert!(d.trivial);
        assert!(d.trace.is_valid());
    }

    #[test]
    fn short_word_untouched() {
        let u = w("a b^17 a^-1");
        let t = dehn_reduce(&u, &g1(), budget(), DEFAULT_STEP_LIMIT).unwrap();
        assert!(t.steps.is_empty());
        assert_eq!(t.result, u);
    }

    #[test]
    fn empty_and_letter() {
        let d = is_trivial(&Word::identity(), &g1(), budget(), DEFAULT_STEP_LIMIT).unwrap();
        assert!(d.trivial);
        let d = is_trivial(&w("a"), &g1(), budget(), DEFAULT_STEP_LIMIT).unwrap();
        assert!(!d.trivial);
        assert_eq!(d.witness(), &w("a"));
    }

    #[test]
    fn step_limit_is_reported() {
        let w1 = build_wise_chong(1, 100, budget()).unwrap();
        let u = w1.word().concat(&w("a")).concat(w1.word());
        assert!(matches!(dehn_reduce(&u, &g1(), budget(), 1), Err(Error::StepLimit(1))));
    }

    #[test]
    fn torus_relator_substitution() {
        // in <a, b | [a, b]>, a b a^-1 contains 3 letters of a b a^-1 b^-1
        let p = Presentation::from_words([w("a b a^-1 b^-1")]);
        let d = is_trivial(&w("a b a^-1"), &p, budget(), DEFAULT_STEP_LIMIT).unwrap();
        assert_eq!(d.witness(), &w("b"));
        assert!(d.trace.is_valid());
    }
}
