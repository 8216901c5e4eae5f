//! Sequences: finite unordered multisets of group elements.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{cmp_sorted_terms, Automorphism, GroupElement, GroupSpec};

/// A group homomorphism between groups of the form `(Z/NZ)^2`.
pub trait GroupHom {
    fn source(&self) -> GroupSpec;
    fn target(&self) -> GroupSpec;
    fn apply(&self, g: GroupElement) -> GroupElement;
}

impl GroupHom for Automorphism {
    fn source(&self) -> GroupSpec {
        self.group()
    }

    fn target(&self) -> GroupSpec {
        self.group()
    }

    fn apply(&self, g: GroupElement) -> GroupElement {
        Automorphism::apply(self, g)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct IdentityHom(pub GroupSpec);

impl GroupHom for IdentityHom {
    fn source(&self) -> GroupSpec {
        self.0
    }

    fn target(&self) -> GroupSpec {
        self.0
    }

    fn apply(&self, g: GroupElement) -> GroupElement {
        g
    }
}

/// A sequence over `(Z/NZ)^2`, stored as its multiplicity map.
///
/// Entries are kept sorted by element with no zero multiplicities, so equal
/// multisets have equal representations. The `Ord` impl compares the
/// expanded, sorted term lists lexicographically; this is the order used
/// for canonical forms.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Sequence {
    group: GroupSpec,
    terms: Vec<(GroupElement, u32)>,
}

impl Sequence {
    pub fn empty(group: GroupSpec) -> Self {
        Sequence { group, terms: Vec::new() }
    }

    /// Builds a sequence from `(element, multiplicity)` pairs. Repeated
    /// elements are merged and zero multiplicities dropped.
    pub fn from_counts(group: GroupSpec, counts: impl IntoIterator<Item = (GroupElement, u32)>) -> Result<Self> {
        let mut terms: Vec<(GroupElement, u32)> = Vec::new();
        for (g, m) in counts {
            if !group.contains(g) {
                return Err(Error::InvalidArgument(format!("{g} is not reduced mod {}", group.modulus())));
            }
            if m > 0 {
                terms.push((g, m));
            }
        }
        terms.sort_unstable_by_key(|t| t.0);
        terms.dedup_by(|next, kept| {
            if next.0 == kept.0 {
                kept.1 += next.1;
                true
            } else {
                false
            }
        });
        Ok(Sequence { group, terms })
    }

    pub fn from_terms(group: GroupSpec, terms: impl IntoIterator<Item = GroupElement>) -> Result<Self> {
        Self::from_counts(group, terms.into_iter().map(|g| (g, 1)))
    }

    /// `g^[k]`.
    pub fn power(group: GroupSpec, g: GroupElement, k: u32) -> Self {
        Self::from_counts(group, [(g, k)]).expect("element must be reduced")
    }

    pub fn group(&self) -> GroupSpec {
        self.group
    }

    pub fn len(&self) -> usize {
        self.terms.iter().map(|t| t.1 as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Number of distinct elements, `|supp(S)|`.
    pub fn distinct(&self) -> usize {
        self.terms.len()
    }

    pub fn multiplicity(&self, g: GroupElement) -> u32 {
        self.terms.binary_search_by_key(&g, |t| t.0).map_or(0, |i| self.terms[i].1)
    }

    /// `supp(S)` in increasing order.
    pub fn support(&self) -> Vec<GroupElement> {
        self.terms.iter().map(|t| t.0).collect()
    }

    /// Maximal multiplicity; 0 for the empty sequence.
    pub fn height(&self) -> u32 {
        self.terms.iter().map(|t| t.1).max().unwrap_or(0)
    }

    /// `(element, multiplicity)` pairs in increasing element order.
    pub fn iter(&self) -> impl Iterator<Item = (GroupElement, u32)> + '_ {
        self.terms.iter().copied()
    }

    /// All terms with repetition, in increasing order.
    pub fn expanded(&self) -> impl Iterator<Item = GroupElement> + '_ {
        self.terms.iter().flat_map(|&(g, m)| std::iter::repeat_n(g, m as usize))
    }

    /// Largest term, if any.
    pub fn last(&self) -> Option<GroupElement> {
        self.terms.last().map(|t| t.0)
    }

    fn check_group(&self, other: &Sequence) -> Result<()> {
        if self.group != other.group {
            return Err(Error::GroupMismatch(self.group.modulus(), other.group.modulus()));
        }
        Ok(())
    }

    /// `S · T`.
    pub fn concat(&self, other: &Sequence) -> Result<Sequence> {
        self.check_group(other)?;
        Sequence::from_counts(self.group, self.iter().chain(other.iter()))
    }

    /// `S · g`.
    pub fn with(&self, g: GroupElement) -> Sequence {
        Sequence::from_counts(self.group, self.iter().chain([(g, 1)])).expect("element must be reduced")
    }

    /// Whether `self | other`.
    pub fn divides(&self, other: &Sequence) -> bool {
        self.group == other.group && self.iter().all(|(g, m)| other.multiplicity(g) >= m)
    }

    /// `S · T^[-1]`; fails unless `T | S`.
    pub fn remove(&self, other: &Sequence) -> Result<Sequence> {
        self.check_group(other)?;
        for (g, m) in other.iter() {
            let have = self.multiplicity(g);
            if have < m {
                return Err(Error::NotASubsequence(format!("{g} occurs {m} times but only {have} available")));
            }
        }
        let terms = self.iter().map(|(g, m)| (g, m - other.multiplicity(g))).filter(|t| t.1 > 0).collect();
        Ok(Sequence { group: self.group, terms })
    }

    /// `S · g^[-k]`.
    pub fn remove_term(&self, g: GroupElement, k: u32) -> Result<Sequence> {
        self.remove(&Sequence::power(self.group, g, k))
    }

    /// Sum of all terms.
    pub fn sigma(&self) -> GroupElement {
        let grp = self.group;
        self.iter().fold(grp.zero(), |acc, (g, m)| grp.add(acc, grp.scale(m as i64, g)))
    }

    /// Termwise image under a homomorphism.
    pub fn apply_hom<H: GroupHom + ?Sized>(&self, h: &H) -> Sequence {
        debug_assert_eq!(h.source(), self.group);
        Sequence::from_counts(h.target(), self.iter().map(|(g, m)| (h.apply(g), m)))
            .expect("homomorphism images are reduced")
    }

    /// Termwise image under an arbitrary map into the same group.
    pub fn map(&self, f: impl Fn(GroupElement) -> GroupElement) -> Sequence {
        Sequence::from_counts(self.group, self.iter().map(|(g, m)| (f(g), m))).expect("mapped elements must be reduced")
    }

    /// Subsequence of the terms satisfying `keep`.
    pub fn filter(&self, keep: impl Fn(GroupElement) -> bool) -> Sequence {
        Sequence { group: self.group, terms: self.terms.iter().copied().filter(|t| keep(t.0)).collect() }
    }
}

impl PartialOrd for Sequence {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Sequence {
    fn cmp(&self, other: &Self) -> Ordering {
        self.group.cmp(&other.group).then_with(|| cmp_sorted_terms(&self.terms, &other.terms))
    }
}

impl fmt::Display for Sequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "[]");
        }
        for (i, (g, m)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, "·")?;
            }
            if *m == 1 {
                write!(f, "{g}")?;
            } else {
                write!(f, "{g}^[{m}]")?;
            }
        }
        Ok(())
    }
}

/// Wire form: `{"n": N, "terms": [[a, b, multiplicity], ...]}` with entries
/// sorted by element.
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SequenceJson {
    n: u32,
    terms: Vec<[u32; 3]>,
}

impl Serialize for Sequence {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        SequenceJson { n: self.group.modulus(), terms: self.terms.iter().map(|(g, m)| [g.a, g.b, *m]).collect() }
            .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Sequence {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let raw = SequenceJson::deserialize(deserializer)?;
        Sequence::from_wire(raw.n, &raw.terms).map_err(serde::de::Error::custom)
    }
}

impl Sequence {
    /// Validates wire-form data: modulus in range, residues reduced,
    /// multiplicities positive, no element listed twice.
    pub(crate) fn from_wire(n: u32, terms: &[[u32; 3]]) -> Result<Sequence> {
        let group = GroupSpec::new(n).map_err(|e| Error::Schema { field: "n".into(), message: e.to_string() })?;
        let mut seen = std::collections::BTreeSet::new();
        let mut counts = Vec::with_capacity(terms.len());
        for (i, &[a, b, m]) in terms.iter().enumerate() {
            for (j, v) in [a, b].into_iter().enumerate() {
                if v >= n {
                    return Err(Error::Schema {
                        field: format!("terms[{i}][{j}]"),
                        message: format!("residue {v} is not in [0, {}]", n - 1),
                    });
                }
            }
            if m == 0 {
                return Err(Error::Schema {
                    field: format!("terms[{i}][2]"),
                    message: "multiplicity must be at least 1".into(),
                });
            }
            let g = GroupElement::new(a, b);
            if !seen.insert(g) {
                return Err(Error::Schema {
                    field: format!("terms[{i}]"),
                    message: format!("duplicate entry for element {g}"),
                });
            }
            counts.push((g, m));
        }
        Sequence::from_counts(group, counts)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn grp(n: u32) -> GroupSpec {
        GroupSpec::new(n).unwrap()
    }

    #[test]
    fn accessors() {
        let g = grp(5);
        let s = Sequence::from_counts(g, [(g.e1(), 3), (g.e2(), 1)]).unwrap();
        assert_eq!(s.height(), 3);
        assert_eq!(s.len(), 4);
        assert_eq!(s.support(), vec![g.e2(), g.e1()]);
        let e = Sequence::empty(g);
        assert_eq!(e.height(), 0);
        assert!(e.support().is_empty());
    }

    #[test]
    fn concat_and_remove() {
        let g = grp(5);
        let e1 = g.e1();
        assert_eq!(Sequence::power(g, e1, 2).concat(&Sequence::power(g, e1, 1)).unwrap(), Sequence::power(g, e1, 3));
        let s = Sequence::from_counts(g, [(e1, 3), (g.e2(), 1)]).unwrap();
        assert_eq!(s.remove(&Sequence::power(g, e1, 3)).unwrap(), Sequence::power(g, g.e2(), 1));
        assert!(matches!(
            Sequence::power(g, e1, 1).remove(&Sequence::power(g, g.e2(), 1)),
            Err(Error::NotASubsequence(_))
        ));
    }

    #[test]
    fn sigma_examples() {
        let g = grp(3);
        let s = Sequence::from_counts(g, [(g.e1(), 2), (g.e2(), 2), (g.elem(1, 1), 1)]).unwrap();
        assert_eq!(s.sigma(), g.zero());
        let g4 = grp(4);
        assert_eq!(Sequence::power(g4, g4.elem(1, 2), 1).sigma(), g4.elem(1, 2));
        let g5 = grp(5);
        assert_eq!(Sequence::power(g5, g5.e1(), 5).sigma(), g5.zero());
        assert_eq!(Sequence::empty(g5).sigma(), g5.zero());
    }

    struct MulBy(GroupSpec, i64);
    impl GroupHom for MulBy {
        fn source(&self) -> GroupSpec {
            self.0
        }
        fn target(&self) -> GroupSpec {
            self.0
        }
        fn apply(&self, g: GroupElement) -> GroupElement {
            self.0.scale(self.1, g)
        }
    }

    #[test]
    fn apply_hom_examples() {
        let g = grp(4);
        let s = Sequence::from_terms(g, [g.elem(1, 0), g.elem(1, 1)]).unwrap();
        assert_eq!(s.apply_hom(&IdentityHom(g)), s);
        assert_eq!(s.apply_hom(&MulBy(g, 2)), Sequence::from_terms(g, [g.elem(2, 0), g.elem(2, 2)]).unwrap());
        let g8 = grp(8);
        let s = Sequence::power(g8, g8.elem(1, 3), 2);
        assert_eq!(s.apply_hom(&MulBy(g8, 4)), Sequence::power(g8, g8.elem(4, 4), 2));
    }

    #[test]
    fn order_is_sorted_list_lex() {
        let g = grp(3);
        let a = Sequence::from_counts(g, [(g.elem(0, 1), 2)]).unwrap();
        let b = Sequence::from_counts(g, [(g.elem(0, 1), 1), (g.elem(0, 2), 1)]).unwrap();
        // [01, 01] < [01, 02]
        assert!(a < b);
        let c = Sequence::power(g, g.elem(0, 1), 1);
        assert!(c < a);
        assert!(Sequence::empty(g) < c);
    }

    #[test]
    fn wire_roundtrip() {
        let g = grp(3);
        let s = Sequence::from_counts(g, [(g.e1(), 2), (g.e2(), 2), (g.elem(1, 1), 1)]).unwrap();
        let text = serde_json::to_string(&s).unwrap();
        assert_eq!(text, r#"{"n":3,"terms":[[0,1,2],[1,0,2],[1,1,1]]}"#);
        let back: Sequence = serde_json::from_str(&text).unwrap();
        assert_eq!(back, s);
    }

    fn arb_seq(n: u32, max_len: usize) -> impl Strategy<Value = Sequence> {
        proptest::collection::vec((0..n, 0..n), 0..=max_len).prop_map(move |v| {
            Sequence::from_terms(grp(n), v.into_iter().map(|(a, b)| GroupElement::new(a, b))).unwrap()
        })
    }

    proptest! {
        #[test]
        fn monoid_laws(s in arb_seq(4, 8), t in arb_seq(4, 8), u in arb_seq(4, 8)) {
            let g = s.group();
            prop_assert_eq!(s.concat(&t).unwrap(), t.concat(&s).unwrap());
            prop_assert_eq!(s.concat(&t).unwrap().concat(&u).unwrap(), s.concat(&t.concat(&u).unwrap()).unwrap());
            prop_assert_eq!(s.concat(&Sequence::empty(g)).unwrap(), s.clone());
            prop_assert_eq!(s.concat(&t).unwrap().len(), s.len() + t.len());
        }

        #[test]
        fn remove_undoes_concat(s in arb_seq(5, 8), t in arb_seq(5, 8)) {
            prop_assert_eq!(s.concat(&t).unwrap().remove(&t).unwrap(), s);
        }

        #[test]
        fn sigma_is_a_monoid_hom(s in arb_seq(6, 10), t in arb_seq(6, 10)) {
            let g = s.group();
            prop_assert_eq!(s.concat(&t).unwrap().sigma(), g.add(s.sigma(), t.sigma()));
        }

        #[test]
        fn sigma_commutes_with_homs(s in arb_seq(6, 10), k in 0i64..6) {
            let g = s.group();
            let h = MulBy(g, k);
            prop_assert_eq!(s.apply_hom(&h).sigma(), h.apply(s.sigma()));
            prop_assert_eq!(s.apply_hom(&h).len(), s.len());
        }
    }
}
