//! Relator families, index sets and presentations.
//!
//! The main family is the product of commutators
//! `w_n = [a, b^E][a^2, b^E] ... [a^top, b^E]` with `E = 2^(2^n)` and
//! `[x, y] = x^-1 y^-1 x y`. Alongside it live the pure powers `b^E` used by
//! the quotients `G_k`, and the two Bowditch families `(a^E b^E)^7` and
//! `a (a^E b^E)^12`.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde_json::{json, Map, Value};

use crate::budget::{double_exp_bits, ExponentBudget};
use crate::error::{Error, Result};
use crate::words::{parse_word_with_budget, Alphabet, CyclicWord, Generator, Word};

pub const DEFAULT_TOP: u64 = 100;

pub fn gen_a() -> Generator {
    Generator::new('a').unwrap()
}

pub fn gen_b() -> Generator {
    Generator::new('b').unwrap()
}

/// `w_n` with commutator bases `1..=top`.
pub fn build_wise_chong(n: u64, top: u64, budget: ExponentBudget) -> Result<CyclicWord> {
    let e = BigInt::from(budget.double_exp(n)?);
    let (a, b) = (gen_a(), gen_b());
    let mut w = Word::identity();
    for i in 1..=top {
        let i = BigInt::from(i);
        w.push(a, -&i);
        w.push(b, -&e);
        w.push(a, i);
        w.push(b, e.clone());
    }
    Ok(CyclicWord::new(&w))
}

/// `b^(2^(2^k))`.
pub fn build_b_power(k: u64, budget: ExponentBudget) -> Result<CyclicWord> {
    let e = budget.double_exp(k)?;
    Ok(CyclicWord::new(&Word::power(gen_b(), BigInt::from(e))))
}

/// `(a^E b^E)^7`, or `a (a^E b^E)^12` when `torsion_free`.
pub fn build_bowditch(n: u64, torsion_free: bool, budget: ExponentBudget) -> Result<CyclicWord> {
    let e = BigInt::from(budget.double_exp(n)?);
    let block = Word::from_powers([(gen_a(), e.clone()), (gen_b(), e)]);
    let w = if torsion_free {
        Word::generator(gen_a()).concat(&block.pow(12))
    } else {
        block.pow(7)
    };
    Ok(CyclicWord::new(&w))
}

/// `top·(top+1) + 2·top·E`.
pub fn wise_chong_length(top: u64, e: &BigUint) -> BigUint {
    let top = BigUint::from(top);
    &top * (&top + 1u32) + BigUint::from(2u32) * top * e
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FamilyKind {
    WiseChong,
    BPower,
    Bowditch,
    BowditchTf,
}

impl FamilyKind {
    pub fn name(self) -> &'static str {
        match self {
            FamilyKind::WiseChong => "wise-chong",
            FamilyKind::BPower => "b-power",
            FamilyKind::Bowditch => "bowditch",
            FamilyKind::BowditchTf => "bowditch-tf",
        }
    }

    /// Letter length of the member with exponent `e`.
    pub fn length_for(self, top: u64, e: &BigUint) -> BigUint {
        match self {
            FamilyKind::WiseChong => wise_chong_length(top, e),
            FamilyKind::BPower => e.clone(),
            FamilyKind::Bowditch => e * 14u32,
            FamilyKind::BowditchTf => e * 24u32 + 1u32,
        }
    }
}

impl FromStr for FamilyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "wise-chong" => FamilyKind::WiseChong,
            "b-power" => FamilyKind::BPower,
            "bowditch" => FamilyKind::Bowditch,
            "bowditch-tf" => FamilyKind::BowditchTf,
            other => return Err(Error::UnknownFamily(other.to_string())),
        })
    }
}

/// One relator: an explicit word or a single family member.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FamilySpec {
    Explicit(Word),
    Member { kind: FamilyKind, index: u64, top: u64 },
}

impl FamilySpec {
    pub fn wise_chong(n: u64, top: u64) -> Self {
        FamilySpec::Member {
            kind: FamilyKind::WiseChong,
            index: n,
            top,
        }
    }

    pub fn b_power(k: u64) -> Self {
        FamilySpec::Member {
            kind: FamilyKind::BPower,
            index: k,
            top: DEFAULT_TOP,
        }
    }

    pub fn bowditch(n: u64, torsion_free: bool) -> Self {
        FamilySpec::Member {
            kind: if torsion_free {
                FamilyKind::BowditchTf
            } else {
                FamilyKind::Bowditch
            },
            index: n,
            top: DEFAULT_TOP,
        }
    }

    pub fn build(&self, budget: ExponentBudget) -> Result<CyclicWord> {
        match self {
            FamilySpec::Explicit(w) => Ok(CyclicWord::new(w)),
            FamilySpec::Member { kind, index, top } => build_member(*kind, *index, *top, budget),
        }
    }

    pub fn describe(&self) -> String {
        match self {
            FamilySpec::Explicit(w) => format!("explicit `{w}`"),
            FamilySpec::Member { kind, index, top } => describe_member(*kind, *index, *top),
        }
    }
}

fn describe_member(kind: FamilyKind, index: u64, top: u64) -> String {
    match kind {
        FamilyKind::WiseChong => format!("wise-chong n={index} top={top}"),
        FamilyKind::BPower => format!("b-power k={index}"),
        _ => format!("{} n={index}", kind.name()),
    }
}

pub fn build_member(kind: FamilyKind, index: u64, top: u64, budget: ExponentBudget) -> Result<CyclicWord> {
    match kind {
        FamilyKind::WiseChong => build_wise_chong(index, top, budget),
        FamilyKind::BPower => build_b_power(index, budget),
        FamilyKind::Bowditch => build_bowditch(index, false, budget),
        FamilyKind::BowditchTf => build_bowditch(index, true, budget),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SetPattern {
    List(Vec<u64>),
    Evens,
    Odds,
    All,
    Progression { start: u64, step: u64 },
}

/// A subset of the naturals: an explicit list or a pattern, optionally cut at
/// `depth` (members `n <= depth`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetSpec {
    pub pattern: SetPattern,
    pub depth: Option<u64>,
}

impl SetSpec {
    pub fn list(members: impl IntoIterator<Item = u64>) -> Self {
        let mut v: Vec<u64> = members.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        Self {
            pattern: SetPattern::List(v),
            depth: None,
        }
    }

    pub fn pattern(pattern: SetPattern) -> Self {
        Self {
            pattern,
            depth: None,
        }
    }

    pub fn with_depth(mut self, depth: u64) -> Self {
        self.depth = Some(depth);
        self
    }

    pub fn contains(&self, n: u64) -> bool {
        if self.depth.is_some_and(|d| n > d) {
            return false;
        }
        match &self.pattern {
            SetPattern::List(v) => v.binary_search(&n).is_ok(),
            SetPattern::Evens => n.is_multiple_of(2),
            SetPattern::Odds => n % 2 == 1,
            SetPattern::All => true,
            SetPattern::Progression { start, step } => n >= *start && (n - start).is_multiple_of(*step),
        }
    }

    pub fn is_finite(&self) -> bool {
        self.depth.is_some() || matches!(self.pattern, SetPattern::List(_))
    }

    /// Members in increasing order, lazily. Infinite when unbounded.
    pub fn iter(&self) -> Box<dyn Iterator<Item = u64> + '_> {
        let depth = self.depth.unwrap_or(u64::MAX);
        match &self.pattern {
            SetPattern::List(v) => Box::new(v.iter().copied().take_while(move |&n| n <= depth)),
            SetPattern::Evens => Box::new((0..=depth).step_by(2)),
            SetPattern::Odds => Box::new((1..=depth).step_by(2)),
            SetPattern::All => Box::new(0..=depth),
            SetPattern::Progression { start, step } => {
                Box::new((*start..=depth).step_by(*step as usize))
            }
        }
    }

    /// All members; fails for an unbounded infinite set.
    pub fn members(&self) -> Result<Vec<u64>> {
        if !self.is_finite() {
            return Err(Error::Unbounded);
        }
        Ok(self.iter().collect())
    }

    /// Members strictly below `k`.
    pub fn members_below(&self, k: u64) -> Vec<u64> {
        self.iter().take_while(|&n| n < k).collect()
    }
}

impl fmt::Display for SetSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.pattern {
            SetPattern::List(v) => {
                let items: Vec<String> = v.iter().map(u64::to_string).collect();
                write!(f, "list:{}", items.join(","))?;
            }
            SetPattern::Evens => write!(f, "evens")?,
            SetPattern::Odds => write!(f, "odds")?,
            SetPattern::All => write!(f, "all")?,
            SetPattern::Progression { start, step } => write!(f, "ap:{start},{step}")?,
        }
        if let Some(d) = self.depth {
            write!(f, ";depth:{d}")?;
        }
        Ok(())
    }
}

impl FromStr for SetSpec {
    type Err = Error;

    /// `list:0,2,5 | evens | odds | all | ap:a,d`, optionally followed by
    /// `;depth:N`.
    fn from_str(text: &str) -> Result<Self> {
        let bad = |reason: &str| Error::SetSpec {
            spec: text.to_string(),
            reason: reason.to_string(),
        };
        let num = |s: &str| -> Result<u64> {
            s.trim()
                .parse::<u64>()
                .map_err(|_| bad(&format!("`{}` is not a nonnegative integer", s.trim())))
        };
        let mut parts = text.split(';');
        let head = parts.next().unwrap_or("").trim();
        let mut depth = None;
        for part in parts {
            match part.trim().strip_prefix("depth:") {
                Some(d) if depth.is_none() => depth = Some(num(d)?),
                Some(_) => return Err(bad("depth given twice")),
                None => return Err(bad(&format!("unknown modifier `{}`", part.trim()))),
            }
        }
        let pattern = if let Some(rest) = head.strip_prefix("list:") {
            let items = rest
                .split(',')
                .filter(|s| !s.trim().is_empty())
                .map(num)
                .collect::<Result<Vec<u64>>>()?;
            if items.windows(2).any(|w| w[0] >= w[1]) {
                return Err(bad("list must be strictly increasing"));
            }
            SetPattern::List(items)
        } else if let Some(rest) = head.strip_prefix("ap:") {
            let nums = rest.split(',').map(num).collect::<Result<Vec<u64>>>()?;
            match nums[..] {
                [start, step] if step >= 1 => SetPattern::Progression { start, step },
                [_, _] => return Err(bad("progression step must be positive")),
                _ => return Err(bad("expected `ap:start,step`")),
            }
        } else {
            match head {
                "evens" => SetPattern::Evens,
                "odds" => SetPattern::Odds,
                "all" => SetPattern::All,
                _ => return Err(bad("expected list:, evens, odds, all or ap:")),
            }
        };
        Ok(SetSpec { pattern, depth })
    }
}

/// A relator entry of a presentation: one relator, or a whole family indexed
/// by a set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RelatorSpec {
    Single(FamilySpec),
    Family { kind: FamilyKind, set: SetSpec, top: u64 },
}

/// A built relator. `index` is its position in the length-sorted enumeration,
/// which does not depend on the length bound.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Relator {
    pub index: usize,
    pub origin: String,
    pub word: CyclicWord,
}

impl Relator {
    pub fn length(&self) -> BigUint {
        self.word.length()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Presentation {
    pub generators: Alphabet,
    pub relators: Vec<RelatorSpec>,
    pub lambda: BigRational,
}

pub fn default_lambda() -> BigRational {
    BigRational::new(BigInt::one(), BigInt::from(6))
}

pub fn parse_rational(text: &str) -> Result<BigRational> {
    let bad = || Error::Schema(format!("`{text}` is not a rational p/q"));
    let (p, q) = match text.split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (text.trim(), "1"),
    };
    let p: BigInt = p.parse().map_err(|_| bad())?;
    let q: BigInt = q.parse().map_err(|_| bad())?;
    if q.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(p, q))
}

pub fn format_rational(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

struct Candidate {
    length: BigUint,
    order: usize,
    index: u64,
    spec: FamilySpec,
}

impl Presentation {
    pub fn new(generators: Alphabet, relators: Vec<RelatorSpec>) -> Self {
        Self {
            generators,
            relators,
            lambda: default_lambda(),
        }
    }

    pub fn from_words(words: impl IntoIterator<Item = Word>) -> Self {
        let relators: Vec<RelatorSpec> = words
            .into_iter()
            .map(|w| RelatorSpec::Single(FamilySpec::Explicit(w)))
            .collect();
        let mut gens = Vec::new();
        for r in &relators {
            if let RelatorSpec::Single(FamilySpec::Explicit(w)) = r {
                gens.extend(w.generators());
            }
        }
        gens.sort();
        let mut alphabet = Alphabet::new(gens);
        if alphabet.generators().is_empty() {
            alphabet = Alphabet::ab();
        }
        Self::new(alphabet, relators)
    }

    /// `G(S) = <a, b | w_n : n in S>`.
    pub fn g_of_s(set: SetSpec, top: u64) -> Self {
        Self::new(
            Alphabet::ab(),
            vec![RelatorSpec::Family {
                kind: FamilyKind::WiseChong,
                set,
                top,
            }],
        )
    }

    /// `B(S)`, or `B'(S)` when `torsion_free`.
    pub fn bowditch_family(set: SetSpec, torsion_free: bool) -> Self {
        let kind = if torsion_free {
            FamilyKind::BowditchTf
        } else {
            FamilyKind::Bowditch
        };
        Self::new(
            Alphabet::ab(),
            vec![RelatorSpec::Family {
                kind,
                set,
                top: DEFAULT_TOP,
            }],
        )
    }

    pub fn with_lambda(mut self, lambda: BigRational) -> Self {
        self.lambda = lambda;
        self
    }

    fn candidates(&self, max_length: Option<&BigUint>, budget: ExponentBudget) -> Result<Vec<Candidate>> {
        let mut out = Vec::new();
        let within = |len: &BigUint| max_length.is_none_or(|m| len <= m);
        for (order, spec) in self.relators.iter().enumerate() {
            match spec {
                RelatorSpec::Single(FamilySpec::Explicit(w)) => {
                    let length = CyclicWord::new(w).length();
                    if within(&length) {
                        out.push(Candidate {
                            length,
                            order,
                            index: 0,
                            spec: FamilySpec::Explicit(w.clone()),
                        });
                    }
                }
                RelatorSpec::Single(FamilySpec::Member { kind, index, top }) => {
                    if let Some(length) = member_length(*kind, *index, *top, max_length, budget)? {
                        out.push(Candidate {
                            length,
                            order,
                            index: *index,
                            spec: FamilySpec::Member {
                                kind: *kind,
                                index: *index,
                                top: *top,
                            },
                        });
                    }
                }
                RelatorSpec::Family { kind, set, top } => {
                    if !set.is_finite() && max_length.is_none() {
                        return Err(Error::Unbounded);
                    }
                    // Member lengths increase with the index, so the first
                    // member past the bound ends the scan.
                    for n in set.iter() {
                        match member_length(*kind, n, *top, max_length, budget)? {
                            Some(length) => out.push(Candidate {
                                length,
                                order,
                                index: n,
                                spec: FamilySpec::Member {
                                    kind: *kind,
                                    index: n,
                                    top: *top,
                                },
                            }),
                            None => break,
                        }
                    }
                }
            }
        }
        out.sort_by(|x, y| {
            (&x.length, x.order, x.index).cmp(&(&y.length, y.order, y.index))
        });
        Ok(out)
    }

    /// All relators of length at most `max_length` (all of them when `None`),
    /// sorted by length.
    pub fn enumerate_relators(&self, max_length: Option<&BigUint>, budget: ExponentBudget) -> Result<Vec<Relator>> {
        self.candidates(max_length, budget)?
            .into_iter()
            .enumerate()
            .map(|(index, c)| {
                Ok(Relator {
                    index,
                    origin: c.spec.describe(),
                    word: c.spec.build(budget)?,
                })
            })
            .collect()
    }

    /// Structural checks: nonempty cyclically reduced relators over the
    /// declared alphabet, no duplicates up to rotation and inversion.
    ///
    /// Unbounded families are only compared against members no longer than
    /// the longest finite relator; two members of one family never coincide.
    pub fn validate(&self, budget: ExponentBudget) -> Result<()> {
        if self.lambda <= BigRational::zero() {
            return Err(Error::Schema("lambda must be positive".into()));
        }
        let mut bound = BigUint::zero();
        for spec in &self.relators {
            let (kind, top, last) = match spec {
                RelatorSpec::Single(FamilySpec::Explicit(w)) => {
                    if let Some(g) = w.generators().find(|g| !self.generators.contains(*g)) {
                        return Err(Error::Schema(format!("generator `{g}` is not declared")));
                    }
                    let len = CyclicWord::new(w).length();
                    if len.is_zero() {
                        return Err(Error::Schema(format!("relator `{w}` is trivial")));
                    }
                    bound = bound.max(len);
                    continue;
                }
                RelatorSpec::Single(FamilySpec::Member { kind, index, top }) => (*kind, *top, Some(*index)),
                RelatorSpec::Family { kind, set, top } => {
                    let last = if set.is_finite() { set.iter().last() } else { None };
                    (*kind, *top, last)
                }
            };
            if !(self.generators.contains(gen_a()) && self.generators.contains(gen_b())) {
                return Err(Error::Schema("family relators need generators a and b".into()));
            }
            if kind == FamilyKind::WiseChong && top == 0 {
                return Err(Error::Schema("`top` must be at least 1".into()));
            }
            if let Some(n) = last {
                let e = budget.double_exp(n)?;
                bound = bound.max(kind.length_for(top, &e));
            }
        }
        let relators = self.enumerate_relators(Some(&bound), budget)?;
        let mut seen: std::collections::HashMap<CyclicWord, &Relator> = Default::default();
        for r in &relators {
            if let Some(prev) = seen.insert(r.word.symmetric_key(), r) {
                return Err(Error::DuplicateRelator {
                    first: prev.origin.clone(),
                    second: r.origin.clone(),
                });
            }
        }
        Ok(())
    }

    /// Whether some relator is longer than `bound`, decided from the length
    /// formulas without building any word.
    pub fn has_relators_beyond(&self, bound: &BigUint) -> bool {
        let beyond = |kind: FamilyKind, index: u64, top: u64| match double_exp_bits(index) {
            Some(bits) if bits <= bound.bits() => {
                let e = BigUint::one() << (1u64 << index);
                &kind.length_for(top, &e) > bound
            }
            _ => true,
        };
        self.relators.iter().any(|spec| match spec {
            RelatorSpec::Single(FamilySpec::Explicit(w)) => &CyclicWord::new(w).length() > bound,
            RelatorSpec::Single(FamilySpec::Member { kind, index, top }) => beyond(*kind, *index, *top),
            RelatorSpec::Family { kind, set, top } => {
                !set.is_finite() || set.iter().last().is_some_and(|n| beyond(*kind, n, *top))
            }
        })
    }

    pub fn from_json(value: &Value, budget: ExponentBudget) -> Result<Self> {
        let obj = value
            .as_object()
            .ok_or_else(|| Error::Schema("top level must be an object".into()))?;
        for key in obj.keys() {
            if !matches!(key.as_str(), "generators" | "relators" | "lambda") {
                return Err(Error::Schema(format!("unknown field `{key}`")));
            }
        }
        let gens = obj
            .get("generators")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Schema("`generators` must be an array".into()))?;
        let mut alphabet = Vec::new();
        for g in gens {
            let s = g.as_str().unwrap_or("");
            let mut chars = s.chars();
            match (chars.next().and_then(Generator::new), chars.next()) {
                (Some(gen), None) => alphabet.push(gen),
                _ => return Err(Error::Schema(format!("bad generator {g}"))),
            }
        }
        let generators = Alphabet::new(alphabet);
        let entries = obj
            .get("relators")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Schema("`relators` must be an array".into()))?;
        let relators = entries
            .iter()
            .map(|e| relator_from_json(e, &generators, budget))
            .collect::<Result<Vec<_>>>()?;
        let lambda = match obj.get("lambda") {
            None => default_lambda(),
            Some(Value::String(s)) => parse_rational(s)?,
            Some(other) => return Err(Error::Schema(format!("`lambda` must be a string, got {other}"))),
        };
        let p = Presentation {
            generators,
            relators,
            lambda,
        };
        p.validate(budget)?;
        Ok(p)
    }

    pub fn to_json(&self) -> Value {
        let gens: Vec<Value> = self
            .generators
            .generators()
            .iter()
            .map(|g| Value::String(g.to_string()))
            .collect();
        let relators: Vec<Value> = self.relators.iter().map(relator_to_json).collect();
        json!({
            "generators": gens,
            "relators": relators,
            "lambda": format_rational(&self.lambda),
        })
    }

    pub fn load(path: &Path, budget: ExponentBudget) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let value: Value = serde_json::from_str(&text)?;
        Self::from_json(&value, budget)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let mut text = serde_json::to_string_pretty(&self.to_json())?;
        text.push('\n');
        std::fs::write(path, text)?;
        Ok(())
    }
}

/// Length of a family member, or `None` when it exceeds `max_length`. The
/// exponent is only materialized when its bit length cannot already decide
/// the comparison.
fn member_length(
    kind: FamilyKind,
    index: u64,
    top: u64,
    max_length: Option<&BigUint>,
    budget: ExponentBudget,
) -> Result<Option<BigUint>> {
    if let Some(max) = max_length {
        // Every member is at least E long.
        match double_exp_bits(index) {
            Some(bits) if bits <= max.bits() => {}
            _ => return Ok(None),
        }
    }
    let e = budget.double_exp(index)?;
    let len = kind.length_for(top, &e);
    Ok(match max_length {
        Some(max) if &len > max => None,
        _ => Some(len),
    })
}

fn field_u64(obj: &Map<String, Value>, key: &str) -> Result<u64> {
    obj.get(key)
        .and_then(Value::as_u64)
        .ok_or_else(|| Error::Schema(format!("`{key}` must be a nonnegative integer")))
}

fn optional_top(obj: &Map<String, Value>) -> Result<u64> {
    match obj.get("top") {
        None => Ok(DEFAULT_TOP),
        Some(_) => field_u64(obj, "top"),
    }
}

fn relator_from_json(value: &Value, alphabet: &Alphabet, budget: ExponentBudget) -> Result<RelatorSpec> {
    let obj = value
        .as_object()
        .ok_or_else(|| Error::Schema("relator entries must be objects".into()))?;
    let kind = obj
        .get("kind")
        .and_then(Value::as_str)
        .ok_or_else(|| Error::Schema("relator entry needs a string `kind`".into()))?;
    let allowed: &[&str] = match kind {
        "explicit" => &["kind", "word"],
        "wise-chong" => &["kind", "n", "top"],
        "b-power" => &["kind", "k"],
        "bowditch" | "bowditch-tf" => &["kind", "n"],
        "family" => &["kind", "family", "set", "top"],
        other => return Err(Error::UnknownFamily(other.to_string())),
    };
    if let Some(extra) = obj.keys().find(|k| !allowed.contains(&k.as_str())) {
        return Err(Error::Schema(format!("unexpected field `{extra}` for kind `{kind}`")));
    }
    Ok(match kind {
        "explicit" => {
            let text = obj
                .get("word")
                .and_then(Value::as_str)
                .ok_or_else(|| Error::Schema("explicit relator needs a string `word`".into()))?;
            RelatorSpec::Single(FamilySpec::Explicit(parse_word_with_budget(text, alphabet, budget)?))
        }
        "wise-chong" => RelatorSpec::Single(FamilySpec::wise_chong(field_u64(obj, "n")?, optional_top(obj)?)),
        "b-power" => RelatorSpec::Single(FamilySpec::b_power(field_u64(obj, "k")?)),
        "bowditch" => RelatorSpec::Single(FamilySpec::bowditch(field_u64(obj, "n")?, false)),
        "bowditch-tf" => RelatorSpec::Single(FamilySpec::bowditch(field_u64(obj, "n")?, true)),
        _ => {
            let family: FamilyKind = obj
                .get("family")
                .and_then(Value::as_str)
                .ok_or_else(|| Error::Schema("family entry needs a string `family`".into()))?
                .parse()?;
            let set: SetSpec = obj
                .get("set")
                .and_then(Value::as_str)
                .ok_or_else(|| Error::Schema("family entry needs a string `set`".into()))?
                .parse()?;
            RelatorSpec::Family {
                kind: family,
                set,
                top: optional_top(obj)?,
            }
        }
    })
}

fn relator_to_json(spec: &RelatorSpec) -> Value {
    match spec {
        RelatorSpec::Single(FamilySpec::Explicit(w)) => json!({"kind": "explicit", "word": w.to_string()}),
        RelatorSpec::Single(FamilySpec::Member { kind, index, top }) => match kind {
            FamilyKind::WiseChong => json!({"kind": "wise-chong", "n": index, "top": top}),
            FamilyKind::BPower => json!({"kind": "b-power", "k": index}),
            _ => json!({"kind": kind.name(), "n": index}),
        },
        RelatorSpec::Family { kind, set, top } => {
            let mut v = json!({"kind": "family", "family": kind.name(), "set": set.to_string()});
            if *kind == FamilyKind::WiseChong {
                v["top"] = json!(top);
            }
            v
        }
    }
}
