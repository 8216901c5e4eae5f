//! Restricted subsequence sums `Σ_{[lmin, lmax]}(S)` and the zero-sum
//! predicates built on them.
//!
//! The oracle is a length-tracking dynamic program: layer `ℓ` of a
//! [`SumTable`] is the set of sums of subsequences of length exactly `ℓ`.
//! Terms are folded in one at a time, so a term of multiplicity `k` is
//! processed `k` times.

use std::collections::BTreeSet;

use crate::elemset::ElementSet;
use crate::error::{Error, Result};
use crate::group::{GroupElement, GroupSpec};
use crate::sequence::Sequence;

#[derive(Clone, Debug)]
pub struct SumTable {
    group: GroupSpec,
    layers: Vec<ElementSet>,
}

impl SumTable {
    /// Table for lengths `0..=max_len` (clamped to `|S|`).
    pub fn build(s: &Sequence, max_len: usize) -> SumTable {
        let mut t = SumTable::empty(s.group(), max_len.min(s.len()));
        for g in s.expanded() {
            t.push(g);
        }
        t
    }

    fn empty(group: GroupSpec, max_len: usize) -> SumTable {
        let mut layers = vec![ElementSet::new(group); max_len + 1];
        layers[0].insert(group.zero());
        SumTable { group, layers }
    }

    /// Folds one more term into the table.
    pub fn push(&mut self, g: GroupElement) {
        for l in (1..self.layers.len()).rev() {
            let (lo, hi) = self.layers.split_at_mut(l);
            lo[l - 1].translate_into(g, &mut hi[0]);
        }
    }

    pub fn group(&self) -> GroupSpec {
        self.group
    }

    pub fn max_len(&self) -> usize {
        self.layers.len() - 1
    }

    /// Whether some subsequence of length exactly `len` sums to `g`.
    pub fn reach(&self, g: GroupElement, len: usize) -> bool {
        self.layers.get(len).is_some_and(|l| l.contains(g))
    }

    pub fn layer(&self, len: usize) -> &ElementSet {
        &self.layers[len]
    }

    /// Union of layers `lmin..=lmax`.
    pub fn sums_between(&self, lmin: usize, lmax: usize) -> ElementSet {
        let mut out = ElementSet::new(self.group);
        for l in lmin..=lmax.min(self.max_len()) {
            out.union_with(&self.layers[l]);
        }
        out
    }
}

fn check_range(s: &Sequence, lmin: usize, lmax: usize) -> Result<()> {
    if lmin > lmax || lmax > s.len() {
        return Err(Error::InvalidRange { lmin, lmax, len: s.len() });
    }
    Ok(())
}

/// `{ σ(T) : T | S, lmin <= |T| <= lmax }`.
pub fn restricted_sums(s: &Sequence, lmin: usize, lmax: usize) -> Result<BTreeSet<GroupElement>> {
    check_range(s, lmin, lmax)?;
    Ok(SumTable::build(s, lmax).sums_between(lmin, lmax).iter().collect())
}

/// `Σ(S)`: sums of all nonempty subsequences, ignoring length. Cheaper than a
/// full [`SumTable`] when lengths are irrelevant.
pub fn subsum_set(s: &Sequence) -> ElementSet {
    let mut acc = ElementSet::new(s.group());
    for g in s.expanded() {
        let mut next = acc;
        acc.translate_into(g, &mut next);
        next.insert(g);
        acc = next;
    }
    acc
}

/// `Σ_{<=k}(S)`.
pub fn short_sums(s: &Sequence, k: usize) -> ElementSet {
    SumTable::build(s, k).sums_between(1, k)
}

/// True iff no nonempty subsequence sums to zero. The empty sequence is
/// zero-sum free.
pub fn is_zero_sum_free(s: &Sequence) -> bool {
    !subsum_set(s).contains(s.group().zero())
}

/// True iff `S` is nonempty, zero-sum, and has no proper nontrivial
/// zero-sum subsequence.
///
/// For a nonempty zero-sum `S` this is equivalent to `S · g^[-1]` being
/// zero-sum free for every `g ∈ supp(S)`, and in fact for any single `g`: if
/// `S = T · T'` with both parts nonempty zero-sums, the removed copy of `g`
/// lies in one part and the other part survives in `S · g^[-1]`. Only one
/// removal is therefore checked.
pub fn is_minimal_zero_sum(s: &Sequence) -> bool {
    let Some(g) = s.last() else { return false };
    s.sigma().is_zero() && is_zero_sum_free(&s.remove_term(g, 1).expect("g is a term"))
}

/// A subsequence `T | S` with `|T| = len` and `σ(T) = target`, if any.
pub fn find_subsequence_with_sum(s: &Sequence, len: usize, target: GroupElement) -> Result<Option<Sequence>> {
    if len > s.len() {
        return Err(Error::InvalidRange { lmin: len, lmax: len, len: s.len() });
    }
    let group = s.group();
    let distinct: Vec<(GroupElement, u32)> = s.iter().collect();
    // Table over the first `j` distinct elements (all their copies).
    let prefix_table = |j: usize| {
        let mut t = SumTable::empty(group, len);
        for &(g, m) in &distinct[..j] {
            for _ in 0..m {
                t.push(g);
            }
        }
        t
    };
    if !prefix_table(distinct.len()).reach(target, len) {
        return Ok(None);
    }
    // Walk backwards, recomputing the smaller prefix table at each step.
    let (mut want, mut left) = (target, len);
    let mut chosen = Vec::new();
    for j in (0..distinct.len()).rev() {
        let (g, m) = distinct[j];
        let before = prefix_table(j);
        let mut residual = want;
        let used = (0..=m.min(left as u32)).find(|&c| {
            let ok = before.reach(residual, left - c as usize);
            residual = group.sub(residual, g);
            ok
        });
        let c = used.expect("reachability is witnessed by some count of the current element");
        if c > 0 {
            chosen.push((g, c));
            want = group.sub(want, group.scale(c as i64, g));
            left -= c as usize;
        }
    }
    debug_assert!(want.is_zero() && left == 0);
    let t = Sequence::from_counts(group, chosen)?;
    assert!(
        t.divides(s) && t.len() == len && t.sigma() == target,
        "witness extraction produced an invalid subsequence"
    );
    Ok(Some(t))
}

/// A zero-sum subsequence of `S` with exactly `exact_length` terms, if any.
pub fn find_zero_sum_subsequence(s: &Sequence, exact_length: usize) -> Result<Option<Sequence>> {
    if exact_length == 0 || exact_length > s.len() {
        return Err(Error::InvalidRange { lmin: exact_length, lmax: exact_length, len: s.len() });
    }
    find_subsequence_with_sum(s, exact_length, s.group().zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classification::construct_exceptional;
    use proptest::prelude::*;

    fn grp(n: u32) -> GroupSpec {
        GroupSpec::new(n).unwrap()
    }

    /// Enumerates all sub-multisets of `s` as (length, sum) pairs.
    fn brute_sums(s: &Sequence) -> Vec<(usize, GroupElement)> {
        let g = s.group();
        let mut acc = vec![(0usize, g.zero())];
        for (x, m) in s.iter() {
            let mut next = Vec::new();
            for &(l, sum) in &acc {
                for c in 0..=m {
                    next.push((l + c as usize, g.add(sum, g.scale(c as i64, x))));
                }
            }
            acc = next;
        }
        acc
    }

    #[test]
    fn small_examples() {
        let g = grp(5);
        let s = Sequence::power(g, g.elem(1, 2), 1);
        assert_eq!(restricted_sums(&s, 1, 1).unwrap(), BTreeSet::from([g.elem(1, 2)]));
        let g3 = grp(3);
        let s = Sequence::power(g3, g3.e1(), 2);
        assert_eq!(restricted_sums(&s, 1, 2).unwrap(), BTreeSet::from([g3.e1(), g3.elem(2, 0)]));
        assert!(matches!(restricted_sums(&s, 2, 1), Err(Error::InvalidRange { .. })));
        assert!(matches!(restricted_sums(&s, 0, 3), Err(Error::InvalidRange { .. })));
    }

    #[test]
    fn zero_sum_free_examples() {
        let g = grp(4);
        assert!(is_zero_sum_free(&Sequence::power(g, g.e1(), 3)));
        assert!(!is_zero_sum_free(&Sequence::power(g, g.e1(), 4)));
        assert!(is_zero_sum_free(&Sequence::empty(g)));
    }

    #[test]
    fn minimal_zero_sum_examples() {
        let g = grp(4);
        let s = Sequence::from_counts(g, [(g.e1(), 3), (g.e2(), 3), (g.elem(1, 1), 1)]).unwrap();
        assert!(is_minimal_zero_sum(&s));
        let g3 = grp(3);
        assert!(is_minimal_zero_sum(&Sequence::power(g3, g3.e1(), 3)));
        assert!(!is_minimal_zero_sum(&Sequence::empty(g3)));
        assert!(!is_minimal_zero_sum(&Sequence::power(g3, g3.e1(), 6)));
        assert!(is_minimal_zero_sum(&Sequence::power(g3, g3.zero(), 1)));
    }

    #[test]
    fn eq1_minus_a_term_is_zero_sum_free() {
        let g = grp(5);
        // e1^[4] · ∏ (x_i e1 + e2) with xs = (0, 0, 1, 2, 3): sum 6 ≡ 1
        let xs = [0, 0, 1, 2, 3];
        let s = Sequence::from_counts(g, std::iter::once((g.e1(), 4)).chain(xs.iter().map(|&x| (g.elem(x, 1), 1))))
            .unwrap();
        assert!(s.sigma().is_zero());
        for t in s.support() {
            assert!(is_zero_sum_free(&s.remove_term(t, 1).unwrap()));
        }
    }

    #[test]
    fn find_examples() {
        let g = grp(3);
        let s = Sequence::power(g, g.e1(), 4);
        assert_eq!(find_zero_sum_subsequence(&s, 3).unwrap(), Some(Sequence::power(g, g.e1(), 3)));
        let s = Sequence::from_counts(g, [(g.e1(), 2), (g.e2(), 1)]).unwrap();
        assert_eq!(find_zero_sum_subsequence(&s, 3).unwrap(), None);
        assert!(find_zero_sum_subsequence(&s, 4).is_err());
        assert!(find_zero_sum_subsequence(&s, 0).is_err());

        let g5 = grp(5);
        let ex = construct_exceptional(g5, 2, 1, 1, 1, (g5.e1(), g5.e2())).unwrap();
        assert_eq!(find_zero_sum_subsequence(&ex, 4).unwrap(), None);
        assert!(!short_sums(&ex, 4).contains(g5.zero()));
    }

    fn arb_seq(n: u32, max_len: usize) -> impl Strategy<Value = Sequence> {
        proptest::collection::vec((0..n, 0..n), 0..=max_len).prop_map(move |v| {
            Sequence::from_terms(grp(n), v.into_iter().map(|(a, b)| GroupElement::new(a, b))).unwrap()
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn dp_matches_brute_force(n in 2u32..=5, seed in proptest::collection::vec((0u32..5, 0u32..5), 0..=12)) {
            let g = grp(n);
            let s = Sequence::from_terms(g, seed.into_iter().map(|(a, b)| g.elem(a as i64, b as i64))).unwrap();
            let all = brute_sums(&s);
            for lmin in 0..=s.len() {
                for lmax in lmin..=s.len() {
                    let want: BTreeSet<_> = all.iter().filter(|(l, _)| (lmin..=lmax).contains(l)).map(|p| p.1).collect();
                    prop_assert_eq!(restricted_sums(&s, lmin, lmax).unwrap(), want);
                }
            }
        }

        #[test]
        fn nested_sum_sets(s in arb_seq(4, 10), k in 1usize..6) {
            let k = k.min(s.len());
            prop_assume!(k >= 1);
            let exact = restricted_sums(&s, k, k).unwrap();
            let upto = restricted_sums(&s, 1, k).unwrap();
            let all = restricted_sums(&s, 1, s.len()).unwrap();
            prop_assert!(exact.is_subset(&upto));
            prop_assert!(upto.is_subset(&all));
            prop_assert_eq!(all, subsum_set(&s).iter().collect::<BTreeSet<_>>());
        }

        #[test]
        fn minimality_characterizations_agree(s in arb_seq(3, 7)) {
            let by_every_removal = !s.is_empty()
                && s.sigma().is_zero()
                && s.support().into_iter().all(|g| is_zero_sum_free(&s.remove_term(g, 1).unwrap()));
            // definition: the only zero-sum subsequences are [] and S
            let zero_sum_lengths: Vec<usize> = brute_sums(&s).into_iter().filter(|p| p.1.is_zero()).map(|p| p.0).collect();
            let by_definition = !s.is_empty() && s.sigma().is_zero() && zero_sum_lengths.len() == 2;
            prop_assert_eq!(is_minimal_zero_sum(&s), by_every_removal);
            prop_assert_eq!(is_minimal_zero_sum(&s), by_definition);
        }

        #[test]
        fn witnesses_are_valid(s in arb_seq(4, 12), len in 1usize..8) {
            prop_assume!(len <= s.len());
            let exists = SumTable::build(&s, len).reach(s.group().zero(), len);
            let found = find_zero_sum_subsequence(&s, len).unwrap();
            prop_assert_eq!(exists, found.is_some());
            if let Some(t) = found {
                prop_assert!(t.divides(&s));
                prop_assert_eq!(t.len(), len);
                prop_assert!(t.sigma().is_zero());
            }
        }
    }
}
