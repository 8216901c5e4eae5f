mod common;

use common::*;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use zerosum::decomposition::{apply_swap, block_decompositions, BlockDecomposition, DecompositionOptions};
use zerosum::enumeration::{enumerate, EnumSpec, Predicate, SearchOptions};
use zerosum::lifting::{mul_hom, sample_eq1};
use zerosum::subsums::{is_minimal_zero_sum, short_sums};
use zerosum::Sequence;

fn all() -> DecompositionOptions {
    DecompositionOptions { all: true, cap: 100_000 }
}

fn check_conservation(d: &BlockDecomposition, s: &Sequence) {
    d.validate().unwrap();
    assert_eq!(&d.sequence(), s);
    let g = s.group();
    let total = d.parts().fold(g.zero(), |acc, p| g.add(acc, p.sigma()));
    assert_eq!(total, s.sigma());
    assert!(total.is_zero());
}

#[test]
fn plain_decompositions_of_qualifying_sequences() {
    for (n, s) in [(2u32, 1u32), (3, 1), (4, 1), (2, 2), (3, 2)] {
        let len = ((2 + s) * n - 1) as usize;
        let qualifying = enumerate(
            &EnumSpec::new(grp(n), len, Predicate::ZeroSumNoShortZeroSum(n - 1), true),
            &SearchOptions::default(),
        )
        .unwrap();
        assert!(!qualifying.is_empty());
        for seq in qualifying {
            let ds = block_decompositions(&seq, n, s, None, &all()).unwrap();
            assert!(!ds.is_empty(), "{seq}");
            for d in &ds {
                check_conservation(d, &seq);
                assert!(is_minimal_zero_sum(&d.w0), "{seq}: W0 = {}", d.w0);
            }
            let first = block_decompositions(&seq, n, s, None, &DecompositionOptions::default()).unwrap();
            assert_eq!(first.len(), 1);
            let mut found = first[0].clone();
            found.blocks.sort();
            assert!(ds.contains(&found), "{seq}");
        }
    }
}

#[test]
fn weak_decompositions_of_minimal_zero_sums() {
    // (m, n): φ is multiplication by m on (Z/mnZ)^2
    for (m, n) in [(4u32, 2u32), (2, 4), (2, 3), (3, 2)] {
        let hom = mul_hom(m * n, m).unwrap();
        let g = hom.group();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let seq = sample_eq1(g, &mut rng);
            assert!(is_minimal_zero_sum(&seq));
            let ds = block_decompositions(&seq, n, 2 * m - 2, Some(&hom), &DecompositionOptions::default()).unwrap();
            assert_eq!(ds.len(), 1, "{seq}");
            let d = &ds[0];
            check_conservation(d, &seq);
            let assoc = d.associated_sequence();
            assert_eq!(assoc.sums.len(), 2 * m as usize - 1);
            let kernel = hom.kernel();
            assert!(assoc.per_block.iter().all(|k| kernel.contains(k)));
            assert!(is_minimal_zero_sum(&assoc.sums), "{}", assoc.sums);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn swapping_back_restores(pick in any::<prop::sample::Index>(), t_pick in any::<prop::sample::Index>(), r_pick in any::<prop::sample::Index>()) {
        let n = 3;
        let seqs = enumerate(&EnumSpec::new(grp(n), 8, Predicate::ZeroSumNoShortZeroSum(n - 1), false), &SearchOptions::default()).unwrap();
        let seq = pick.get(&seqs);
        let ds = block_decompositions(seq, n, 1, None, &all()).unwrap();
        let d = &ds[0];
        let g = seq.group();
        // single terms with equal sums, so the swap is always admissible
        let t_term = *t_pick.get(&d.w0.support());
        let r_terms: Vec<_> = d.blocks[0].support();
        let r_term = *r_pick.get(&r_terms);
        let t = Sequence::power(g, t_term, 1);
        let r = Sequence::power(g, r_term, 1);
        match apply_swap(d, 0, 1, &t, &r) {
            Ok(swapped) => {
                prop_assert_eq!(t_term, r_term);
                prop_assert_eq!(apply_swap(&swapped, 1, 0, &t, &r).unwrap(), d.clone());
            }
            Err(zerosum::Error::HomSumMismatch) => prop_assert_ne!(t_term, r_term),
            Err(e) => return Err(TestCaseError::fail(e.to_string())),
        }
        // a two-term exchange with matching sums
        if d.w0.len() >= 2 {
            let t2 = Sequence::from_terms(g, d.w0.expanded().take(2)).unwrap();
            if let Some(r2) = zerosum::subsums::find_subsequence_with_sum(&d.blocks[0], 2, t2.sigma()).unwrap() {
                let swapped = apply_swap(d, 0, 1, &t2, &r2).unwrap();
                prop_assert_eq!(swapped.sequence(), seq.clone());
                prop_assert_eq!(apply_swap(&swapped, 1, 0, &t2, &r2).unwrap(), d.clone());
            }
        }
        prop_assert!(!short_sums(seq, 2).contains(g.zero()));
    }
}
