//! The classes `Υ = Υ_u ∪ Υ_nu` of extremal minimal zero-sums over
//! `(Z/mZ)^2` and exhaustive checks of the three perturbation lemmas.
//!
//! `Υ` holds the sequences `e1^[m-1]·∏_{i=1}^{m}(x_i e1 + e2)` with
//! `Σ x_i ≡ 1 mod m`; `Υ_nu` those of the form `e1^[m-1]·e2^[m-1]·(e1+e2)`,
//! and `Υ_u` those with a unique term of multiplicity `m - 1`.
//!
//! Each lemma item perturbs a fixed `S` by swapping two terms for two others
//! with the same sum, parametrized by `g ∈ G`, and bounds the `g` for which
//! the result stays in the target class. The suites run over the basis
//! `(f1, f2)` supplied by the caller; automorphisms carry every instance to
//! the standard basis, so checking that basis covers all of them.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::error::{Error, Result};
use crate::group::{GroupElement, GroupSpec};
use crate::properties::{matches_eq1, Eq1Witness};
use crate::report::Report;
use crate::sequence::Sequence;

/// Default exhaustive bound on `m` for [`verify_perturbation`].
pub const PERTURBATION_MAX_M: u32 = 6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum UpsilonTag {
    NotInUpsilon,
    Unique,
    NonUnique,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UpsilonClass {
    pub tag: UpsilonTag,
    pub witness: Option<Eq1Witness>,
}

/// Whether `S = e1^[m-1]·e2^[m-1]·(e1+e2)` for some basis `(e1, e2)`.
fn is_non_unique_form(s: &Sequence) -> bool {
    let group = s.group();
    let m = group.modulus();
    if s.distinct() != 3 || s.len() != 2 * m as usize - 1 {
        return false;
    }
    let terms: Vec<(GroupElement, u32)> = s.iter().collect();
    (0..3).any(|k| {
        let (third, mk) = terms[k];
        let others: Vec<_> = terms.iter().enumerate().filter(|&(i, _)| i != k).map(|(_, t)| *t).collect();
        let ((e1, m1), (e2, m2)) = (others[0], others[1]);
        mk == 1 && m1 == m - 1 && m2 == m - 1 && group.is_basis(e1, e2) && group.add(e1, e2) == third
    })
}

pub fn upsilon_class(s: &Sequence) -> UpsilonClass {
    let Some(w) = matches_eq1(s) else {
        return UpsilonClass { tag: UpsilonTag::NotInUpsilon, witness: None };
    };
    let m = s.group().modulus();
    let tag = if is_non_unique_form(s) {
        UpsilonTag::NonUnique
    } else {
        // Two terms of multiplicity m - 1 in the normal form force the
        // non-unique shape, so what remains has exactly one.
        debug_assert_eq!(s.iter().filter(|&(_, k)| k == m - 1).count(), 1, "{s}");
        UpsilonTag::Unique
    };
    UpsilonClass { tag, witness: Some(w) }
}

/// `S·removed^[-1]·added`.
pub fn perturb(s: &Sequence, removed: &Sequence, added: &Sequence) -> Result<Sequence> {
    let rest = s.remove(removed)?;
    let (r, a) = (removed.sigma(), added.sigma());
    if r != a {
        return Err(Error::SumMismatch { removed: r, added: a });
    }
    rest.concat(added)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Lemma {
    I,
    II,
    III,
}

impl fmt::Display for Lemma {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Lemma::I => "I",
            Lemma::II => "II",
            Lemma::III => "III",
        })
    }
}

impl FromStr for Lemma {
    type Err = Error;
    fn from_str(s: &str) -> Result<Lemma> {
        match s {
            "I" | "1" => Ok(Lemma::I),
            "II" | "2" => Ok(Lemma::II),
            "III" | "3" => Ok(Lemma::III),
            _ => Err(Error::InvalidArgument(format!("unknown lemma {s:?} (expected I, II or III)"))),
        }
    }
}

/// Admissible values of `g` for one item.
#[derive(Clone, Copy, Debug)]
enum Conclusion {
    /// Listed elements; the item also claims `S' = S`.
    Finite([Option<GroupElement>; 2]),
    /// The cyclic subgroup generated by the element.
    Cyclic(GroupElement),
}

impl Conclusion {
    fn allows(&self, group: GroupSpec, g: GroupElement) -> bool {
        match *self {
            Conclusion::Finite(list) => list.contains(&Some(g)),
            Conclusion::Cyclic(h) => group.in_cyclic(g, h),
        }
    }

    fn claims_equal(&self) -> bool {
        matches!(self, Conclusion::Finite(_))
    }

    fn describe(&self) -> String {
        match self {
            Conclusion::Finite(list) => {
                let items: Vec<String> = list.iter().flatten().map(|g| g.to_string()).collect();
                format!("{{{}}}", items.join(", "))
            }
            Conclusion::Cyclic(h) => format!("<{h}>"),
        }
    }
}

/// One instance of an item: what is removed, what is added as a function of
/// `g`, and the stated conclusion.
struct Case {
    removed: [GroupElement; 2],
    /// The added pair is `(u + g, v - g)`.
    added_base: [GroupElement; 2],
    conclusion: Conclusion,
}

#[derive(Default)]
struct ItemTally {
    cases: u64,
    members: u64,
    achieved: BTreeSet<GroupElement>,
}

fn check_case(
    s: &Sequence,
    case: &Case,
    target: UpsilonTag,
    tally: &mut ItemTally,
    report: &mut Report,
    label: &str,
) -> Result<()> {
    let group = s.group();
    let removed = Sequence::from_terms(group, case.removed)?;
    let [u, v] = case.added_base;
    for g in group.elements() {
        let added = Sequence::from_terms(group, [group.add(u, g), group.sub(v, g)])?;
        let s2 = perturb(s, &removed, &added)?;
        tally.cases += 1;
        let tag = upsilon_class(&s2).tag;
        let member = match target {
            UpsilonTag::NonUnique => tag == UpsilonTag::NonUnique,
            _ => tag != UpsilonTag::NotInUpsilon,
        };
        if !member {
            continue;
        }
        tally.members += 1;
        tally.achieved.insert(g);
        let ok = case.conclusion.allows(group, g) && (!case.conclusion.claims_equal() || &s2 == s);
        if !ok {
            report.bump(&format!("{label}.violations"), 1);
            report.counterexample(s2);
        }
    }
    Ok(())
}

/// Coordinates of `g` in the basis, as `[y, z]` with `g = y f1 + z f2`.
fn coords(group: GroupSpec, g: GroupElement, basis: (GroupElement, GroupElement)) -> [u32; 2] {
    let (y, z) = group.coordinates(g, basis.0, basis.1).expect("basis spans G");
    [y, z]
}

/// Runs every item of one lemma over `(Z/mZ)^2` with the given basis.
pub fn verify_perturbation_with_basis(m: u32, lemma: Lemma, basis: (GroupElement, GroupElement)) -> Result<Report> {
    let start = Instant::now();
    if m < 4 {
        return Err(Error::InvalidArgument(format!("the perturbation lemmas need m >= 4, got {m}")));
    }
    let group = GroupSpec::new(m)?;
    let (f1, f2) = basis;
    if !group.is_basis(f1, f2) {
        return Err(Error::NotABasis(f1, f2));
    }
    let mut report = Report::new("perturbation")
        .param("m", m)
        .param("lemma", lemma.to_string())
        .param("basis", json!([[f1.a, f1.b], [f2.a, f2.b]]));
    let item_count = if lemma == Lemma::I { 3 } else { 5 };
    let mut tallies: Vec<ItemTally> = (0..item_count).map(|_| ItemTally::default()).collect();
    let mut described: Vec<BTreeSet<String>> = vec![BTreeSet::new(); item_count];
    let bases = match lemma {
        Lemma::I => lemma_i_bases(group, f1, f2)?,
        Lemma::II | Lemma::III => {
            vec![Sequence::from_counts(group, [(f1, m - 1), (f2, m - 1), (group.add(f1, f2), 1)])?]
        }
    };
    report.orbits_scanned = bases.len() as u64;
    let target = if lemma == Lemma::III { UpsilonTag::NonUnique } else { UpsilonTag::Unique };
    for s in &bases {
        for (item, case) in cases_for(lemma, group, s, f1, f2) {
            let label = format!("{lemma}.{}", item + 1);
            described[item].insert(case.conclusion.describe());
            check_case(s, &case, target, &mut tallies[item], &mut report, &label)?;
        }
    }
    let mut items = serde_json::Map::new();
    for (i, t) in tallies.iter().enumerate() {
        let label = format!("{lemma}.{}", i + 1);
        report.bump(&format!("{label}.cases"), t.cases);
        report.bump(&format!("{label}.members"), t.members);
        report.bump(&format!("{label}.violations"), 0);
        let achieved: Vec<[u32; 2]> = t.achieved.iter().map(|g| [g.a, g.b]).collect();
        let mut in_basis: Vec<[u32; 2]> = t.achieved.iter().map(|&g| coords(group, g, basis)).collect();
        in_basis.sort();
        items.insert(
            label,
            json!({
                "achieved": achieved,
                "achieved_in_basis": in_basis,
                "conclusions": described[i],
            }),
        );
    }
    report.detail("items", serde_json::Value::Object(items));
    Ok(report.finish(start))
}

/// Runs one lemma over the standard basis, subject to the exhaustive bound.
pub fn verify_perturbation(m: u32, lemma: Lemma, budget: &crate::enumeration::SearchBudget) -> Result<Report> {
    let group = GroupSpec::new(m)?;
    budget.check_modulus(group, PERTURBATION_MAX_M, "perturbation suite")?;
    verify_perturbation_with_basis(m, lemma, (group.e1(), group.e2()))
}

/// `f1^[m-1]·∏(x_i f1 + f2)` for every multiset of `x_i ∈ [0, m-1]` with
/// `Σ x_i ≡ 1` whose sequence lies in `Υ_u`.
fn lemma_i_bases(group: GroupSpec, f1: GroupElement, f2: GroupElement) -> Result<Vec<Sequence>> {
    let m = group.modulus();
    let mut out = Vec::new();
    let mut xs = vec![0u32; m as usize];
    loop {
        if xs.iter().sum::<u32>() % m == 1 {
            let terms = xs.iter().map(|&x| group.combine(x as i64, f1, 1, f2));
            let s = Sequence::power(group, f1, m - 1).concat(&Sequence::from_terms(group, terms)?)?;
            if upsilon_class(&s).tag == UpsilonTag::Unique {
                out.push(s);
            }
        }
        // next nondecreasing vector
        let Some(i) = xs.iter().rposition(|&x| x < m - 1) else { break };
        let v = xs[i] + 1;
        for x in &mut xs[i..] {
            *x = v;
        }
    }
    Ok(out)
}

fn cases_for(lemma: Lemma, group: GroupSpec, s: &Sequence, f1: GroupElement, f2: GroupElement) -> Vec<(usize, Case)> {
    let zero = group.zero();
    let f12 = group.add(f1, f2);
    let fin = |a: GroupElement, b: Option<GroupElement>| Conclusion::Finite([Some(a), b]);
    let case = |removed: [GroupElement; 2], added_base: [GroupElement; 2], conclusion| Case {
        removed,
        added_base,
        conclusion,
    };
    match lemma {
        Lemma::I => {
            let mut out = vec![(0, case([f1, f1], [f1, f1], fin(zero, None)))];
            let coset: Vec<(GroupElement, u32)> = s.iter().filter(|&(g, _)| g != f1).collect();
            for &(t, _) in &coset {
                let (xj, _) = group.coordinates(t, f1, f2).expect("basis");
                let special = group.combine(xj as i64 - 1, f1, 1, f2);
                out.push((1, case([f1, t], [f1, t], fin(zero, Some(special)))));
            }
            for &(tj, mj) in &coset {
                for &(tk, _) in &coset {
                    if tj == tk && mj < 2 {
                        continue;
                    }
                    out.push((2, case([tj, tk], [tj, tk], Conclusion::Cyclic(f1))));
                }
            }
            out
        }
        Lemma::II => vec![
            (0, case([f1, f1], [f1, f1], Conclusion::Cyclic(f2))),
            (1, case([f2, f2], [f2, f2], Conclusion::Cyclic(f1))),
            (2, case([f1, f2], [f1, f2], fin(zero, Some(group.sub(f2, f1))))),
            (3, case([f1, f12], [f1, f12], Conclusion::Cyclic(f2))),
            (4, case([f2, f12], [f2, f12], Conclusion::Cyclic(f1))),
        ],
        Lemma::III => vec![
            (0, case([f1, f1], [f1, f1], fin(zero, None))),
            (1, case([f2, f2], [f2, f2], fin(zero, None))),
            (2, case([f1, f2], [f1, f2], fin(zero, Some(group.sub(f2, f1))))),
            (3, case([f1, f12], [f1, f12], fin(zero, Some(f2)))),
            (4, case([f2, f12], [f2, f12], fin(zero, Some(f1)))),
        ],
    }
}
