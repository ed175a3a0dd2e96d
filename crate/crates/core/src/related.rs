//! The relation `L ~ L'` on finite sets of positive integers.
//!
//! `L ~ L'` via `k` when every `m` in `L` with `m > (k+1)^2` has a partner
//! `m'` in `L'` with `m/k <= m' <= km`, and the same from `L'` to `L`. Interval
//! membership is tested as `m <= k*m'` and `m' <= k*m`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::One;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::budget::ExponentBudget;
use crate::error::{Error, Result};
use crate::families::{wise_chong_length, SetSpec};

/// Strictly increasing positive integers.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct NatSet(Vec<BigUint>);

impl NatSet {
    /// Sorts and deduplicates; zero is rejected.
    pub fn new(elements: impl IntoIterator<Item = BigUint>) -> Result<Self> {
        let mut v: Vec<BigUint> = elements.into_iter().collect();
        if v.iter().any(|m| m == &BigUint::default()) {
            return Err(Error::NatSet("0 is not a positive integer".into()));
        }
        v.sort();
        v.dedup();
        Ok(Self(v))
    }

    pub fn empty() -> Self {
        Self(Vec::new())
    }

    pub fn elements(&self) -> &[BigUint] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, m: &BigUint) -> bool {
        self.0.binary_search(m).is_ok()
    }

    pub fn max(&self) -> Option<&BigUint> {
        self.0.last()
    }

    /// `{n*m : m in self}`.
    pub fn scale(&self, n: &BigUint) -> NatSet {
        NatSet(self.0.iter().map(|m| m * n).collect())
    }

    /// `{m + n : m in self}`.
    pub fn shift(&self, n: &BigUint) -> NatSet {
        NatSet(self.0.iter().map(|m| m + n).collect())
    }

    /// Least `m'` with `k*m' >= m` and `m' <= k*m`, if any.
    fn partner(&self, m: &BigUint, k: &BigUint) -> Option<&BigUint> {
        let i = self.0.partition_point(|mp| k * mp < *m);
        self.0.get(i).filter(|mp| **mp <= k * m)
    }

    pub fn to_json(&self) -> Value {
        Value::Array(self.0.iter().map(|m| Value::String(m.to_string())).collect())
    }
}

impl fmt::Display for NatSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, m) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{m}")?;
        }
        f.write_str("}")
    }
}

/// Comma-separated decimals, e.g. `2,16`; the empty string is the empty set.
impl FromStr for NatSet {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().trim_start_matches('{').trim_end_matches('}');
        if s.trim().is_empty() {
            return Ok(Self::empty());
        }
        let elements = s
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<BigUint>()
                    .map_err(|_| Error::NatSet(format!("`{}` is not a nonnegative integer", t.trim())))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(elements)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Direction {
    /// Elements of `L` looking for partners in `L'`.
    LeftToRight,
    RightToLeft,
}

impl Direction {
    pub fn name(self) -> &'static str {
        match self {
            Direction::LeftToRight => "left_to_right",
            Direction::RightToLeft => "right_to_left",
        }
    }
}

/// One element and its partner; `None` when `m <= (k+1)^2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partner {
    pub m: BigUint,
    pub partner: Option<BigUint>,
}

impl Partner {
    fn to_json(&self) -> Value {
        match &self.partner {
            Some(p) => json!({"m": self.m.to_string(), "partner": p.to_string()}),
            None => json!({"m": self.m.to_string(), "partner": "vacuous"}),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelatednessWitness {
    pub left: NatSet,
    pub right: NatSet,
    pub k: BigUint,
    pub forward: Vec<Partner>,
    pub backward: Vec<Partner>,
}

impl RelatednessWitness {
    /// `(k+1)^2`.
    pub fn threshold(&self) -> BigUint {
        threshold(&self.k)
    }

    /// Rechecks every entry against both sets and the definition.
    pub fn is_valid(&self) -> bool {
        if self.k < BigUint::one() {
            return false;
        }
        let t = self.threshold();
        let side = |from: &NatSet, to: &NatSet, entries: &[Partner]| {
            entries.len() == from.len()
                && entries.iter().zip(from.elements()).all(|(e, m)| {
                    &e.m == m
                        && match &e.partner {
                            None => *m <= t,
                            Some(p) => to.contains(p) && *m <= &self.k * p && *p <= &self.k * m,
                        }
                })
        };
        side(&self.left, &self.right, &self.forward) && side(&self.right, &self.left, &self.backward)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "related": true,
            "k": self.k.to_string(),
            "threshold": self.threshold().to_string(),
            "left_to_right": self.forward.iter().map(Partner::to_json).collect::<Vec<_>>(),
            "right_to_left": self.backward.iter().map(Partner::to_json).collect::<Vec<_>>(),
        })
    }
}

/// An element above the threshold with no partner.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelatednessFailure {
    pub k: BigUint,
    pub direction: Direction,
    pub element: BigUint,
}

impl RelatednessFailure {
    pub fn to_json(&self) -> Value {
        json!({
            "related": false,
            "k": self.k.to_string(),
            "direction": self.direction.name(),
            "element": self.element.to_string(),
        })
    }
}

impl fmt::Display for RelatednessFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (from, to) = match self.direction {
            Direction::LeftToRight => ("left", "right"),
            Direction::RightToLeft => ("right", "left"),
        };
        write!(
            f,
            "{} in the {from} set exceeds ({}+1)^2 and the {to} set has nothing in [{}/{}, {}*{}]",
            self.element, self.k, self.element, self.k, self.k, self.element
        )
    }
}

fn threshold(k: &BigUint) -> BigUint {
    let k1 = k + 1u32;
    &k1 * &k1
}

fn partners(from: &NatSet, to: &NatSet, k: &BigUint, dir: Direction) -> Result<Vec<Partner>, RelatednessFailure> {
    let t = threshold(k);
    from.elements()
        .iter()
        .map(|m| {
            if *m <= t {
                return Ok(Partner {
                    m: m.clone(),
                    partner: None,
                });
            }
            match to.partner(m, k) {
                Some(p) => Ok(Partner {
                    m: m.clone(),
                    partner: Some(p.clone()),
                }),
                None => Err(RelatednessFailure {
                    k: k.clone(),
                    direction: dir,
                    element: m.clone(),
                }),
            }
        })
        .collect()
}

/// Checks `L ~ L'` via `k` (`k >= 1`), choosing the least partner each time.
pub fn related_via_k(
    left: &NatSet,
    right: &NatSet,
    k: &BigUint,
) -> std::result::Result<RelatednessWitness, RelatednessFailure> {
    assert!(*k >= BigUint::one(), "k must be positive");
    let forward = partners(left, right, k, Direction::LeftToRight)?;
    let backward = partners(right, left, k, Direction::RightToLeft)?;
    Ok(RelatednessWitness {
        left: left.clone(),
        right: right.clone(),
        k: k.clone(),
        forward,
        backward,
    })
}

/// Least `k` with `(k+1)^2 >= max(L u L')`, at which both clauses are vacuous.
pub fn vacuity_bound(left: &NatSet, right: &NatSet) -> BigUint {
    let max = match (left.max(), right.max()) {
        (Some(a), Some(b)) => a.max(b).clone(),
        (Some(a), None) | (None, Some(a)) => a.clone(),
        (None, None) => return BigUint::one(),
    };
    let mut root = max.sqrt();
    if &root * &root < max {
        root += 1u32;
    }
    if root > BigUint::one() {
        root - 1u32
    } else {
        BigUint::one()
    }
}

/// Least `k` relating `L` and `L'`.
///
/// Success at `k` implies success at `k+1` (the threshold rises and the
/// intervals widen), so this is a binary search on `[1, vacuity_bound]`.
pub fn min_witness_k(left: &NatSet, right: &NatSet) -> BigUint {
    let mut lo = BigUint::one();
    let mut hi = vacuity_bound(left, right);
    while lo < hi {
        let mid = (&lo + &hi) >> 1;
        if related_via_k(left, right, &mid).is_ok() {
            hi = mid;
        } else {
            lo = mid + 1u32;
        }
    }
    lo
}

/// How each element of a composed witness got its partner.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CompositionPath {
    /// Below `(kk'+1)^2`.
    Vacuous,
    /// Partner of the partner, as in the transitivity argument.
    Chained,
    /// The intermediate element was vacuous in one of the inputs; a partner
    /// was searched for directly.
    Fallback,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComposedWitness {
    pub witness: RelatednessWitness,
    pub forward_paths: Vec<CompositionPath>,
    pub backward_paths: Vec<CompositionPath>,
}

impl ComposedWitness {
    pub fn fallbacks(&self) -> usize {
        self.forward_paths
            .iter()
            .chain(&self.backward_paths)
            .filter(|p| **p == CompositionPath::Fallback)
            .count()
    }
}

fn lookup<'a>(entries: &'a [Partner], m: &BigUint) -> Option<&'a BigUint> {
    entries
        .binary_search_by(|e| e.m.cmp(m))
        .ok()
        .and_then(|i| entries[i].partner.as_ref())
}

fn compose_side(
    from: &NatSet,
    to: &NatSet,
    first: &[Partner],
    second: &[Partner],
    k: &BigUint,
    dir: Direction,
) -> Result<(Vec<Partner>, Vec<CompositionPath>)> {
    let t = threshold(k);
    let mut entries = Vec::with_capacity(from.len());
    let mut paths = Vec::with_capacity(from.len());
    for m in from.elements() {
        let (partner, path) = if *m <= t {
            (None, CompositionPath::Vacuous)
        } else if let Some(p) = lookup(first, m).and_then(|mid| lookup(second, mid)) {
            (Some(p.clone()), CompositionPath::Chained)
        } else {
            let p = to.partner(m, k).ok_or_else(|| {
                Error::Composition(format!("{} ({}) has no partner via {k}", m, dir.name()))
            })?;
            (Some(p.clone()), CompositionPath::Fallback)
        };
        entries.push(Partner { m: m.clone(), partner });
        paths.push(path);
    }
    Ok((entries, paths))
}

/// Composes `A ~ B` via `k` and `B ~ C` via `k'` into `A ~ C` via `kk'`.
pub fn compose_witness(w1: &RelatednessWitness, w2: &RelatednessWitness) -> Result<ComposedWitness> {
    if w1.right != w2.left {
        return Err(Error::Composition("the middle sets differ".into()));
    }
    let k = &w1.k * &w2.k;
    let (forward, forward_paths) = compose_side(
        &w1.left,
        &w2.right,
        &w1.forward,
        &w2.forward,
        &k,
        Direction::LeftToRight,
    )?;
    let (backward, backward_paths) = compose_side(
        &w2.right,
        &w1.left,
        &w2.backward,
        &w1.backward,
        &k,
        Direction::RightToLeft,
    )?;
    let witness = RelatednessWitness {
        left: w1.left.clone(),
        right: w2.right.clone(),
        k,
        forward,
        backward,
    };
    if !witness.is_valid() {
        return Err(Error::Composition("composed witness does not validate".into()));
    }
    Ok(ComposedWitness {
        witness,
        forward_paths,
        backward_paths,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineReport {
    pub n: BigUint,
    /// `S ~ nS` via `n`.
    pub scaled: std::result::Result<RelatednessWitness, RelatednessFailure>,
    /// `S ~ S+n` via `n+1`.
    pub shifted: std::result::Result<RelatednessWitness, RelatednessFailure>,
}

impl AffineReport {
    pub fn holds(&self) -> bool {
        self.scaled.is_ok() && self.shifted.is_ok()
    }

    pub fn to_json(&self) -> Value {
        let side = |r: &std::result::Result<RelatednessWitness, RelatednessFailure>| match r {
            Ok(w) => w.to_json(),
            Err(f) => f.to_json(),
        };
        json!({
            "n": self.n.to_string(),
            "scaled": side(&self.scaled),
            "shifted": side(&self.shifted),
            "holds": self.holds(),
        })
    }
}

pub fn affine_transform_check(s: &NatSet, n: &BigUint) -> AffineReport {
    AffineReport {
        n: n.clone(),
        scaled: related_via_k(s, &s.scale(n), n),
        shifted: related_via_k(s, &s.shift(n), &(n + 1u32)),
    }
}

/// `{E_n : n in S}` with `E_n = 2^(2^n)`.
pub fn raw_spectrum(set: &SetSpec, budget: ExponentBudget) -> Result<NatSet> {
    let values = set
        .members()?
        .into_iter()
        .map(|n| budget.double_exp(n))
        .collect::<Result<Vec<_>>>()?;
    NatSet::new(values)
}

/// `{|w_n| : n in S}`.
pub fn length_spectrum(set: &SetSpec, top: u64, budget: ExponentBudget) -> Result<NatSet> {
    let values = set
        .members()?
        .into_iter()
        .map(|n| Ok(wise_chong_length(top, &budget.double_exp(n)?)))
        .collect::<Result<Vec<_>>>()?;
    NatSet::new(values)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProfileMode {
    Raw,
    Spectrum { top: u64 },
}

impl ProfileMode {
    pub fn spectrum(&self, set: &SetSpec, budget: ExponentBudget) -> Result<NatSet> {
        match self {
            ProfileMode::Raw => raw_spectrum(set, budget),
            ProfileMode::Spectrum { top } => length_spectrum(set, *top, budget),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProfileRow {
    pub depth: u64,
    pub min_k: BigUint,
    pub left_size: usize,
    pub right_size: usize,
}

impl ProfileRow {
    pub fn to_json(&self) -> Value {
        json!({
            "depth": self.depth,
            "min_k": self.min_k.to_string(),
            "left_size": self.left_size,
            "right_size": self.right_size,
        })
    }
}

/// `min_witness_k` of the truncations to indices `<= d`, for `d = 0..=depth`.
pub fn divergence_profile(
    left: &SetSpec,
    right: &SetSpec,
    depth: u64,
    mode: ProfileMode,
    budget: ExponentBudget,
) -> Result<Vec<ProfileRow>> {
    budget.double_exp(depth)?;
    (0..=depth)
        .into_par_iter()
        .map(|d| {
            let l = mode.spectrum(&left.clone().with_depth(d), budget)?;
            let r = mode.spectrum(&right.clone().with_depth(d), budget)?;
            Ok(ProfileRow {
                depth: d,
                min_k: min_witness_k(&l, &r),
                left_size: l.len(),
                right_size: r.len(),
            })
        })
        .collect()
}

pub fn profile_json(rows: &[ProfileRow]) -> Value {
    Value::Array(rows.iter().map(ProfileRow::to_json).collect())
}

/// Right-aligned text table of a profile.
pub fn profile_table(rows: &[ProfileRow]) -> String {
    let header = ["depth", "min_k", "left_size", "right_size"];
    let cells: Vec<[String; 4]> = rows
        .iter()
        .map(|r| {
            [
                r.depth.to_string(),
                r.min_k.to_string(),
                r.left_size.to_string(),
                r.right_size.to_string(),
            ]
        })
        .collect();
    let mut widths = header.map(str::len);
    for row in &cells {
        for (w, c) in widths.iter_mut().zip(row) {
            *w = (*w).max(c.len());
        }
    }
    let mut out = String::new();
    let line = |out: &mut String, row: &[&str]| {
        let parts: Vec<String> = row.iter().zip(widths).map(|(c, w)| format!("{c:>w$}")).collect();
        out.push_str(&parts.join("  "));
        out.push('\n');
    };
    line(&mut out, &header);
    for row in &cells {
        line(&mut out, &row.each_ref().map(String::as_str));
    }
    out
}

/// `(S - S') u (S' - S)` on index sets.
pub fn sym_diff(left: &SetSpec, right: &SetSpec) -> Result<Vec<u64>> {
    let l = left.members()?;
    let r = right.members()?;
    let mut out: Vec<u64> = l
        .iter()
        .filter(|n| r.binary_search(n).is_err())
        .chain(r.iter().filter(|n| l.binary_search(n).is_err()))
        .copied()
        .collect();
    out.sort_unstable();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::SetPattern;

    fn set(v: &[u64]) -> NatSet {
        NatSet::new(v.iter().map(|&m| BigUint::from(m))).unwrap()
    }

    fn k(v: u64) -> BigUint {
        BigUint::from(v)
    }

    #[test]
    fn related_examples() {
        let l = set(&[2, 16]);
        let r = set(&[4]);
        let w = related_via_k(&l, &r, &k(3)).unwrap();
        assert!(w.forward.iter().all(|p| p.partner.is_none()));
        assert!(w.is_valid());
        let f = related_via_k(&l, &r, &k(2)).unwrap_err();
        assert_eq!(f.direction, Direction::LeftToRight);
        assert_eq!(f.element, k(16));
        let s = set(&[3, 50, 1000]);
        assert!(related_via_k(&s, &s, &k(1)).unwrap().is_valid());
    }

    #[test]
    fn endpoints_are_included() {
        // 100 > 9 and 50 = 100/2
        assert!(related_via_k(&set(&[100]), &set(&[50]), &k(2)).is_ok());
        assert!(related_via_k(&set(&[100]), &set(&[49]), &k(2)).is_err());
    }

    #[test]
    fn min_k_examples() {
        assert_eq!(min_witness_k(&set(&[2, 16]), &set(&[4])), k(3));
        assert_eq!(min_witness_k(&set(&[2, 16]), &set(&[4, 256])), k(15));
        assert_eq!(min_witness_k(&set(&[7, 99]), &set(&[7, 99])), k(1));
        assert_eq!(min_witness_k(&NatSet::empty(), &NatSet::empty()), k(1));
        assert_eq!(vacuity_bound(&set(&[16]), &NatSet::empty()), k(3));
        assert_eq!(vacuity_bound(&set(&[17]), &NatSet::empty()), k(4));
    }

    #[test]
    fn compose_examples() {
        let a = set(&[10]);
        let b = set(&[20]);
        let c = set(&[40]);
        let w1 = related_via_k(&a, &b, &k(2)).unwrap();
        let w2 = related_via_k(&b, &c, &k(2)).unwrap();
        let w = compose_witness(&w1, &w2).unwrap();
        assert_eq!(w.witness.k, k(4));
        assert!(related_via_k(&a, &c, &k(4)).is_ok());
        let s = set(&[5, 500]);
        let id = related_via_k(&s, &s, &k(1)).unwrap();
        assert_eq!(compose_witness(&id, &id).unwrap().witness.k, k(1));
        assert!(compose_witness(&w1, &w1).is_err());
    }

    #[test]
    fn affine_examples() {
        assert!(affine_transform_check(&set(&[5, 10]), &k(3)).holds());
        assert!(affine_transform_check(&set(&[1]), &k(1)).holds());
    }

    #[test]
    fn spectra() {
        let b = ExponentBudget::default();
        assert_eq!(length_spectrum(&SetSpec::list([1]), 100, b).unwrap(), set(&[10900]));
        assert_eq!(length_spectrum(&SetSpec::list([0, 1]), 1, b).unwrap(), set(&[6, 10]));
        assert!(length_spectrum(&SetSpec::list([]), 100, b).unwrap().is_empty());
        assert!(length_spectrum(&SetSpec::pattern(SetPattern::Evens), 100, b).is_err());
    }

    #[test]
    fn evens_odds_profile() {
        let evens = SetSpec::pattern(SetPattern::Evens);
        let odds = SetSpec::pattern(SetPattern::Odds);
        let rows = divergence_profile(&evens, &odds, 4, ProfileMode::Raw, ExponentBudget::default()).unwrap();
        let ks: Vec<BigUint> = rows.iter().map(|r| r.min_k.clone()).collect();
        assert_eq!(ks[2..], [k(3), k(15), k(255)]);
        let same = divergence_profile(&evens, &evens, 4, ProfileMode::Spectrum { top: 100 }, ExponentBudget::default())
            .unwrap();
        assert!(same.iter().all(|r| r.min_k == k(1)));
        let table = profile_table(&rows);
        assert!(table.lines().next().unwrap().contains("min_k"));
        assert_eq!(table.lines().count(), 6);
    }

    #[test]
    fn sym_diff_examples() {
        assert_eq!(sym_diff(&SetSpec::list([1, 2]), &SetSpec::list([2, 3])).unwrap(), [1, 3]);
        assert!(sym_diff(&SetSpec::list([4]), &SetSpec::list([4])).unwrap().is_empty());
        let evens = SetSpec::pattern(SetPattern::Evens).with_depth(5);
        let odds = SetSpec::pattern(SetPattern::Odds).with_depth(5);
        assert_eq!(sym_diff(&evens, &odds).unwrap(), [0, 1, 2, 3, 4, 5]);
    }

    #[test]
    fn parse_natset() {
        assert_eq!("2,16".parse::<NatSet>().unwrap(), set(&[2, 16]));
        assert_eq!("{16, 2, 2}".parse::<NatSet>().unwrap(), set(&[2, 16]));
        assert!("".parse::<NatSet>().unwrap().is_empty());
        assert!("0,1".parse::<NatSet>().is_err());
        assert!("x".parse::<NatSet>().is_err());
    }
}
