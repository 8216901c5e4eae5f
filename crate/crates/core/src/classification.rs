//! Zero-sum sequences of length `(2+s)N - 1` without a zero-sum of length
//! at most `N - 1`, and the exceptional family among them.
//!
//! Every such sequence admits a basis `(e1, e2)` with either
//!
//! 1. `supp(S) ⊆ {e1} ∪ (⟨e1⟩ + e2)` and `v_{e1}(S) ≡ -1 mod N`, or
//! 2. `S = e1^[aN]·e2^[bN-1]·(x e1 + e2)^[cN-1]·(x e1 + 2 e2)` with
//!    `x ∈ [2, N-2]`, `gcd(x, N) = 1` and `a + b + c = 2 + s`.
//!
//! The second shape has no Property A witness.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::enumeration::{enumerate, EnumSpec, Predicate, SearchOptions};
use crate::error::{Error, Result};
use crate::group::{gcd, GroupElement, GroupSpec};
use crate::properties::{property_a_witnesses, PropertyAWitness};
use crate::report::Report;
use crate::sequence::Sequence;
use crate::subsums::short_sums;

/// Default exhaustive bound for [`verify_casen`] with `s = 1`.
pub const CASEN_S1_MAX_MODULUS: u32 = 5;
/// Default exhaustive bound for [`verify_casen`] with `s = 2`.
pub const CASEN_S2_MAX_MODULUS: u32 = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Item2Witness {
    pub e1: GroupElement,
    pub e2: GroupElement,
    pub x: u32,
    pub a: u32,
    pub b: u32,
    pub c: u32,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationOutcome {
    pub item1: Vec<PropertyAWitness>,
    pub item2: Vec<Item2Witness>,
}

impl ClassificationOutcome {
    pub fn is_classified(&self) -> bool {
        !self.item1.is_empty() || !self.item2.is_empty()
    }
}

fn check_x(n: u32, x: u32) -> Result<()> {
    if x < 2 || x + 2 > n {
        return Err(Error::InvalidX(format!("x={x} is outside [2, {}]", n as i64 - 2)));
    }
    if gcd(x as u64, n as u64) != 1 {
        return Err(Error::InvalidX(format!("gcd(x={x}, N={n}) is not 1")));
    }
    Ok(())
}

/// `e1^[aN]·e2^[bN-1]·(x e1 + e2)^[cN-1]·(x e1 + 2 e2)`.
///
/// # Panics
///
/// If the result fails to be a zero-sum of length `(a+b+c)N - 1` with no
/// zero-sum of length at most `N - 1` and no Property A witness.
pub fn construct_exceptional(
    group: GroupSpec,
    x: u32,
    a: u32,
    b: u32,
    c: u32,
    basis: (GroupElement, GroupElement),
) -> Result<Sequence> {
    let n = group.modulus();
    check_x(n, x)?;
    if a == 0 || b == 0 || c == 0 {
        return Err(Error::InvalidCounts { a, b, c });
    }
    let (e1, e2) = basis;
    if !group.is_basis(e1, e2) {
        return Err(Error::NotABasis(e1, e2));
    }
    let xi = x as i64;
    let s = Sequence::from_counts(
        group,
        [(e1, a * n), (e2, b * n - 1), (group.combine(xi, e1, 1, e2), c * n - 1), (group.combine(xi, e1, 2, e2), 1)],
    )?;
    assert!(s.sigma().is_zero(), "exceptional sequence is not zero-sum: {s}");
    assert_eq!(s.len(), ((a + b + c) * n - 1) as usize);
    assert!(!short_sums(&s, n as usize - 1).contains(group.zero()), "exceptional sequence has a short zero-sum: {s}");
    assert!(property_a_witnesses(&s)?.is_empty(), "exceptional sequence has Property A: {s}");
    Ok(s)
}

/// `s` with `|S| = (2+s)n - 1`, if any.
fn block_count(len: usize, n: u32) -> Option<u32> {
    let n = n as usize;
    ((len + 1).is_multiple_of(n) && (len + 1) / n >= 3).then(|| ((len + 1) / n - 2) as u32)
}

/// All Item 1 and Item 2 witnesses of `S`.
pub fn classify_long_zero_sum(s: &Sequence, n: u32) -> Result<ClassificationOutcome> {
    let group = s.group();
    if n != group.modulus() {
        return Err(Error::PreconditionViolated(format!("n={n} differs from the group modulus {}", group.modulus())));
    }
    if block_count(s.len(), n).is_none() {
        return Err(Error::PreconditionViolated(format!("|S|={} is not of the form (2+s)n-1 with s>=1", s.len())));
    }
    if !s.sigma().is_zero() {
        return Err(Error::PreconditionViolated(format!("sigma(S)={} is not zero", s.sigma())));
    }
    if short_sums(s, n as usize - 1).contains(group.zero()) {
        return Err(Error::PreconditionViolated(format!("S has a zero-sum of length at most {}", n - 1)));
    }
    let item1 = property_a_witnesses(s)?.into_iter().filter(|w| (s.multiplicity(w.e1) + 1).is_multiple_of(n)).collect();
    Ok(ClassificationOutcome { item1, item2: item2_witnesses(s) })
}

/// Every assignment of the four support elements to the exceptional shape.
fn item2_witnesses(s: &Sequence) -> Vec<Item2Witness> {
    let group = s.group();
    let n = group.modulus();
    if s.distinct() != 4 {
        return Vec::new();
    }
    let terms: Vec<(GroupElement, u32)> = s.iter().collect();
    let mut out = Vec::new();
    for i1 in 0..4 {
        for i2 in 0..4 {
            for i3 in 0..4 {
                if i1 == i2 || i1 == i3 || i2 == i3 {
                    continue;
                }
                let i4 = 6 - i1 - i2 - i3;
                let ((e1, v1), (e2, v2), (e3, v3), (e4, v4)) = (terms[i1], terms[i2], terms[i3], terms[i4]);
                if v1 % n != 0 || (v2 + 1) % n != 0 || (v3 + 1) % n != 0 || v4 != 1 || !group.is_basis(e1, e2) {
                    continue;
                }
                let Some(x) = group.cyclic_log(group.sub(e3, e2), e1) else { continue };
                if check_x(n, x).is_err() || group.combine(x as i64, e1, 2, e2) != e4 {
                    continue;
                }
                out.push(Item2Witness { e1, e2, x, a: v1 / n, b: (v2 + 1) / n, c: (v3 + 1) / n });
            }
        }
    }
    out.sort();
    out
}

/// Classifies every qualifying sequence of length `(2+s)N - 1`, one per
/// orbit. Orbits are counted as item 1 only, item 2 only, both, or
/// unclassified; unclassified orbits are counterexamples.
pub fn verify_casen(group: GroupSpec, s: u32, opts: &SearchOptions) -> Result<Report> {
    let start = Instant::now();
    if s == 0 {
        return Err(Error::InvalidArgument("s must be at least 1".into()));
    }
    let n = group.modulus();
    let len = ((2 + s) * n - 1) as usize;
    let what = format!("case verification with s={s}");
    opts.budget.check_modulus(group, casen_max_modulus(s), &what)?;
    let orbits = enumerate(&EnumSpec::new(group, len, Predicate::ZeroSumNoShortZeroSum(n - 1), true), opts)?;
    let mut report = Report::new("casen").param("n", n).param("s", s).param("length", len as u64);
    report.orbits_scanned = orbits.len() as u64;
    for key in ["item1_only", "item2_only", "both", "unclassified"] {
        report.bump(key, 0);
    }
    let mut item2_examples = Vec::new();
    for seq in orbits {
        let outcome = classify_long_zero_sum(&seq, n)?;
        match (outcome.item1.is_empty(), outcome.item2.is_empty()) {
            (false, true) => report.bump("item1_only", 1),
            (true, false) => {
                report.bump("item2_only", 1);
                item2_examples.push(serde_json::json!({ "sequence": seq, "witnesses": outcome.item2 }));
            }
            (false, false) => report.bump("both", 1),
            (true, true) => {
                report.bump("unclassified", 1);
                report.counterexample(seq);
            }
        }
    }
    report.detail("item2_only_orbits", item2_examples);
    Ok(report.finish(start))
}

/// Default exhaustive bound for `verify_casen` at a given `s`.
pub fn casen_max_modulus(s: u32) -> u32 {
    match s {
        0 | 1 => CASEN_S1_MAX_MODULUS,
        2 => CASEN_S2_MAX_MODULUS,
        _ => 2,
    }
}
