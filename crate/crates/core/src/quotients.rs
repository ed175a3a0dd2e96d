//! The quotients `G_k = G / <<b^(E_k)>>` with `E_k = 2^(2^k)`.
//!
//! Since `E_k` divides `E_m` for `m >= k`, every `w_m` with `m >= k` dies in
//! `G_k`, which leaves the finite presentation
//! `<a, b | b^(E_k), w_n : n in S, n < k>`.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::Zero;
use serde_json::{json, Value};

use crate::budget::ExponentBudget;
use crate::dehn::{find_major_subword, is_trivial, relevant_relators, Decision};
use crate::error::{Error, Result};
use crate::families::{
    format_rational, gen_a, gen_b, FamilyKind, FamilySpec, Presentation, Relator, RelatorSpec,
    SetSpec,
};
use crate::pieces::{verify_c_prime, VerificationReport};
use crate::words::{Alphabet, Generator, Word};

/// The representative of `e` modulo `m` in `(-m/2, m/2]`.
pub fn balanced_residue(e: &BigInt, m: &BigUint) -> BigInt {
    let m = BigInt::from(m.clone());
    let r = e.mod_floor(&m);
    if &r * 2 > m {
        r - m
    } else {
        r
    }
}

/// Reduces the exponents of `gens` modulo `modulus` and freely reduces, until
/// neither applies any more.
///
/// Syllables go through a stack; whenever two of the same generator merge the
/// sum is reduced again, so the output has all reduced exponents balanced and
/// no two adjacent syllables on the same generator.
pub fn project_mod(u: &Word, gens: &[Generator], modulus: &BigUint) -> Word {
    let reduce = |g: Generator, e: BigInt| {
        if gens.contains(&g) {
            balanced_residue(&e, modulus)
        } else {
            e
        }
    };
    let mut stack: Vec<(Generator, BigInt)> = Vec::with_capacity(u.num_syllables());
    for s in u.syllables() {
        match stack.last_mut() {
            Some((g, e)) if *g == s.gen => {
                let merged = reduce(s.gen, &*e + &s.exp);
                if merged.is_zero() {
                    stack.pop();
                } else {
                    *e = merged;
                }
            }
            _ => {
                let e = reduce(s.gen, s.exp.clone());
                if !e.is_zero() {
                    stack.push((s.gen, e));
                }
            }
        }
    }
    Word::from_powers(stack)
}

/// Image of `u` in `G_k`: b-exponents reduced modulo `E_k`.
pub fn project(u: &Word, k: u64, budget: ExponentBudget) -> Result<Word> {
    let e = budget.double_exp(k)?;
    Ok(project_mod(u, &[gen_b()], &e))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuotientSpec {
    pub k: u64,
    pub base: SetSpec,
    pub top: u64,
}

impl QuotientSpec {
    pub fn new(k: u64, base: SetSpec, top: u64) -> Self {
        Self { k, base, top }
    }

    /// The members of `S` that survive as relators of `G_k`.
    pub fn surviving(&self) -> Vec<u64> {
        self.base.members_below(self.k)
    }

    pub fn presentation(&self) -> Presentation {
        let mut relators = vec![RelatorSpec::Single(FamilySpec::b_power(self.k))];
        let members = self.surviving();
        if !members.is_empty() {
            relators.push(RelatorSpec::Family {
                kind: FamilyKind::WiseChong,
                set: SetSpec::list(members),
                top: self.top,
            });
        }
        Presentation::new(Alphabet::ab(), relators)
    }

    pub fn relators(&self, budget: ExponentBudget) -> Result<Vec<Relator>> {
        self.presentation().enumerate_relators(None, budget)
    }
}

#[derive(Debug, Clone)]
pub struct GkDecision {
    pub k: u64,
    pub projected: Word,
    pub verification: VerificationReport,
    pub decision: Decision,
}

impl GkDecision {
    pub fn trivial(&self) -> bool {
        self.decision.trivial
    }

    pub fn to_json(&self) -> Value {
        json!({
            "k": self.k,
            "projected": self.projected.to_string(),
            "c_prime": self.verification.c_prime,
            "max_ratio": format_rational(&self.verification.max_ratio),
            "solve": self.decision.to_json(),
        })
    }
}

/// Word problem in `G_k`: project, then majority-reduce.
///
/// A reduction to the empty word is a proof of triviality in any
/// presentation. A nonempty reduced word only proves nontriviality when the
/// quotient presentation is `C'(1/6)`, which fails for small `k` with
/// `k - 1` in `S`; that case is an error rather than a verdict.
pub fn is_trivial_in_gk(
    u: &Word,
    spec: &QuotientSpec,
    budget: ExponentBudget,
    step_limit: usize,
) -> Result<GkDecision> {
    let projected = project(u, spec.k, budget)?;
    let p = spec.presentation();
    let verification = verify_c_prime(&p, None, budget)?;
    let decision = is_trivial(&projected, &p, budget, step_limit)?;
    if !decision.trivial && !verification.c_prime {
        return Err(Error::NotSmallCancellation {
            max_ratio: format_rational(&verification.max_ratio),
            lambda: format_rational(&verification.lambda),
        });
    }
    Ok(GkDecision {
        k: spec.k,
        projected,
        verification,
        decision,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RfWitness {
    pub word: Word,
    pub k: u64,
    pub e_k: BigUint,
    /// The `G_k` relators `v` was checked against.
    pub checked_relators: Vec<Relator>,
    /// Whether `G_k` is `C'(1/6)`, which is what makes `v` nontrivial there.
    pub quotient_c_prime: bool,
}

impl RfWitness {
    pub fn to_json(&self) -> Value {
        json!({
            "word": self.word.to_string(),
            "k": self.k,
            "E_k": self.e_k.to_string(),
            "checked_relators": self
                .checked_relators
                .iter()
                .map(|r| json!({
                    "index": r.index,
                    "origin": r.origin,
                    "length": r.length().to_string(),
                }))
                .collect::<Vec<_>>(),
            "quotient_c_prime": self.quotient_c_prime,
            "verdict": if self.quotient_c_prime { "nontrivial_in_Gk" } else { "unverified" },
        })
    }
}

/// Largest absolute b-exponent in `v`.
fn max_b_run(v: &Word) -> BigUint {
    v.syllables()
        .iter()
        .filter(|s| s.gen == gen_b())
        .map(|s| s.exp.magnitude().clone())
        .max()
        .unwrap_or_default()
}

/// Whether `v` is majority-reduced for `G_k`, returning the relators checked.
///
/// The b-run bound `2|e| <= E_k` is the same as having no major factor of
/// `b^(E_k)`, tested up front because it is a single comparison.
pub fn rf_condition(v: &Word, spec: &QuotientSpec, budget: ExponentBudget) -> Result<Option<Vec<Relator>>> {
    let e = budget.double_exp(spec.k)?;
    if max_b_run(v) * 2u32 > e {
        return Ok(None);
    }
    let relators = spec.relators(budget)?;
    Ok(find_major_subword(v, &relators).is_none().then_some(relators))
}

/// Least `k` such that the majority-reduced word `v` stays majority-reduced in
/// `G_k`, so it survives there.
pub fn rf_witness(v: &Word, base: &SetSpec, top: u64, budget: ExponentBudget) -> Result<RfWitness> {
    if v.is_empty() {
        return Err(Error::EmptyWord);
    }
    let g = Presentation::g_of_s(base.clone(), top);
    let relators = relevant_relators(&g, &v.length(), budget)?;
    if let Some(occ) = find_major_subword(v, &relators) {
        let relator_len = relators
            .iter()
            .find(|r| r.index == occ.relator_index)
            .map(Relator::length)
            .unwrap_or_default();
        return Err(Error::NotMajorityReduced {
            relator_index: occ.relator_index,
            v_len: occ.v_len().to_string(),
            relator_len: relator_len.to_string(),
        });
    }
    // Members of S never contribute here, since v is already reduced against
    // all of them, so the condition is monotone in k and ends once
    // E_k > 2|v|.
    let mut k = 0;
    loop {
        let spec = QuotientSpec::new(k, base.clone(), top);
        if let Some(checked) = rf_condition(v, &spec, budget)? {
            let quotient_c_prime = verify_c_prime(&spec.presentation(), None, budget)?.c_prime;
            return Ok(RfWitness {
                word: v.clone(),
                k,
                e_k: budget.double_exp(k)?,
                checked_relators: checked,
                quotient_c_prime,
            });
        }
        k += 1;
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelatorImage {
    pub m: u64,
    pub image: Word,
}

#[derive(Debug, Clone)]
pub struct BowditchQuotientRow {
    pub n: u64,
    pub e_n: BigUint,
    /// Images of `(a^(E_m) b^(E_m))^7` for `m` in `S`, `n <= m <= m_max`.
    pub images: Vec<RelatorImage>,
    /// Images of `a (a^(E_m) b^(E_m))^12` for the same `m`.
    pub tf_images: Vec<RelatorImage>,
    /// `<a, b | a^(E_n), b^(E_n), (a^(E_m) b^(E_m))^7 : m in S, m < n>`.
    pub quotient: VerificationReport,
}

impl BowditchQuotientRow {
    pub fn all_killed(&self) -> bool {
        self.images.iter().all(|i| i.image.is_empty())
    }

    pub fn holds(&self) -> bool {
        self.all_killed() && self.quotient.c_prime
    }

    pub fn to_json(&self) -> Value {
        let images = |v: &[RelatorImage]| {
            v.iter()
                .map(|i| json!({"m": i.m, "image": i.image.to_string()}))
                .collect::<Vec<_>>()
        };
        json!({
            "n": self.n,
            "E_n": self.e_n.to_string(),
            "images": images(&self.images),
            "all_killed": self.all_killed(),
            "tf_images": images(&self.tf_images),
            "quotient": self.quotient.to_json(),
        })
    }
}

/// Projects `B(S)` and `B'(S)` relators to `<a, b | a^(E_n), b^(E_n)>` for
/// each `n`, and checks the finite quotient presentation.
///
/// Torsion-free images are reported as computed.
pub fn bowditch_quotient_check(
    ns: &[u64],
    set: &SetSpec,
    m_max: u64,
    budget: ExponentBudget,
) -> Result<Vec<BowditchQuotientRow>> {
    let gens = [gen_a(), gen_b()];
    let mut rows = Vec::with_capacity(ns.len());
    for &n in ns {
        let e_n = budget.double_exp(n)?;
        let mut images = Vec::new();
        let mut tf_images = Vec::new();
        for m in set.members_below(m_max.saturating_add(1)) {
            if m < n {
                continue;
            }
            for (tf, out) in [(false, &mut images), (true, &mut tf_images)] {
                let r = FamilySpec::bowditch(m, tf).build(budget)?;
                out.push(RelatorImage {
                    m,
                    image: project_mod(r.word(), &gens, &e_n),
                });
            }
        }
        let mut relators = vec![
            RelatorSpec::Single(FamilySpec::Explicit(Word::power(gen_a(), BigInt::from(e_n.clone())))),
            RelatorSpec::Single(FamilySpec::b_power(n)),
        ];
        let below = set.members_below(n);
        if !below.is_empty() {
            relators.push(RelatorSpec::Family {
                kind: FamilyKind::Bowditch,
                set: SetSpec::list(below),
                top: crate::families::DEFAULT_TOP,
            });
        }
        let p = Presentation::new(Alphabet::ab(), relators);
        let quotient = verify_c_prime(&p, None, budget)?;
        rows.push(BowditchQuotientRow {
            n,
            e_n,
            images,
            tf_images,
            quotient,
        });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::build_wise_chong;
    use crate::words::parse_word;

    fn budget() -> ExponentBudget {
        ExponentBudget::default()
    }

    fn w(text: &str) -> Word {
        parse_word(text, &Alphabet::ab()).unwrap()
    }

    #[test]
    fn residues() {
        let m = BigUint::from(16u32);
        assert_eq!(balanced_residue(&18.into(), &m), 2.into());
        assert_eq!(balanced_residue(&8.into(), &m), 8.into());
        assert_eq!(balanced_residue(&(-8).into(), &m), 8.into());
        assert_eq!(balanced_residue(&9.into(), &m), (-7).into());
        assert_eq!(balanced_residue(&(-16).into(), &m), 0.into());
    }

    #[test]
    fn project_examples() {
        assert!(project(&w("b^16"), 2, budget()).unwrap().is_empty());
        assert!(project(&w("b^65536"), 4, budget()).unwrap().is_empty());
        assert_eq!(project(&w("a^3 b^18"), 2, budget()).unwrap(), w("a^3 b^2"));
        let w3 = build_wise_chong(3, 100, budget()).unwrap();
        assert!(project(w3.word(), 2, budget()).unwrap().is_empty());
        // merging after cancellation is reduced again
        assert_eq!(project(&w("b^5 a a^-1 b^5"), 2, budget()).unwrap(), w("b^-6"));
    }

    #[test]
    fn gk_presentation() {
        let spec = QuotientSpec::new(3, SetSpec::list([0, 2, 5]), 100);
        let origins: Vec<String> = spec.relators(budget()).unwrap().into_iter().map(|r| r.origin).collect();
        assert_eq!(origins, ["b-power k=3", "wise-chong n=0 top=100", "wise-chong n=2 top=100"]);
    }

    #[test]
    fn trivial_in_gk_examples() {
        for k in [2, 4] {
            let spec = QuotientSpec::new(k, SetSpec::list([1, 2, 3]), 100);
            for m in [1, 2, 3] {
                let wm = build_wise_chong(m, 100, budget()).unwrap();
                assert!(is_trivial_in_gk(wm.word(), &spec, budget(), 1000).unwrap().trivial(), "w_{m}");
            }
        }
        // b^4 is a piece of w_1 and b^16
        let g2 = QuotientSpec::new(2, SetSpec::list([1, 2, 3]), 100);
        assert!(matches!(
            is_trivial_in_gk(&w("a"), &g2, budget(), 1000),
            Err(Error::NotSmallCancellation { .. })
        ));
        let g4 = QuotientSpec::new(4, SetSpec::list([2, 3]), 100);
        assert!(!is_trivial_in_gk(&w("a"), &g4, budget(), 1000).unwrap().trivial());
        let empty = QuotientSpec::new(2, SetSpec::list([5]), 100);
        let half = is_trivial_in_gk(&w("b^8"), &empty, budget(), 1000).unwrap();
        assert!(!half.trivial());
        assert_eq!(half.projected, w("b^8"));
    }

    #[test]
    fn rf_witness_examples() {
        let s = SetSpec::list([1, 2, 3]);
        let a = rf_witness(&w("a"), &s, 100, budget()).unwrap();
        assert_eq!(a.k, 0);
        assert!(a.quotient_c_prime);
        assert_eq!(rf_witness(&w("b^3"), &s, 100, budget()).unwrap().k, 2);
        assert_eq!(rf_witness(&w("b^2 a b^-2"), &s, 100, budget()).unwrap().k, 1);
        assert!(matches!(rf_witness(&Word::identity(), &s, 100, budget()), Err(Error::EmptyWord)));
        let w1 = build_wise_chong(1, 100, budget()).unwrap();
        assert!(matches!(
            rf_witness(w1.word(), &s, 100, budget()),
            Err(Error::NotMajorityReduced { .. })
        ));
    }

    #[test]
    fn bowditch_projection() {
        let rows = bowditch_quotient_check(&[3], &SetSpec::list([1, 3, 4]), 4, budget()).unwrap();
        let row = &rows[0];
        assert_eq!(row.images.iter().map(|i| i.m).collect::<Vec<_>>(), [3, 4]);
        assert!(row.all_killed());
        assert!(row.tf_images.iter().all(|i| i.image == w("a")));
        assert!(row.quotient.c_prime);
        assert_eq!(row.quotient.relator_count, 3);
    }
}
