#![allow(dead_code)]

use proptest::prelude::*;
use zerosum::{Automorphism, GroupElement, GroupSpec, Sequence};

pub fn grp(n: u32) -> GroupSpec {
    GroupSpec::new(n).unwrap()
}

pub fn element(n: u32) -> impl Strategy<Value = GroupElement> {
    (0..n, 0..n).prop_map(move |(a, b)| grp(n).elem(a as i64, b as i64))
}

pub fn sequence(n: u32, max_len: usize) -> impl Strategy<Value = Sequence> {
    prop::collection::vec(element(n), 0..=max_len).prop_map(move |ts| Sequence::from_terms(grp(n), ts).unwrap())
}

pub fn automorphism(n: u32) -> impl Strategy<Value = Automorphism> {
    prop::array::uniform4(0..n)
        .prop_filter_map("singular", move |[a, b, c, d]| Automorphism::new(grp(n), [[a, b], [c, d]]).ok())
}

/// `e1^[N-1]·∏(x_i e1 + e2)` over the standard basis.
pub fn eq1(n: u32, xs: &[u32]) -> Sequence {
    let g = grp(n);
    let terms = xs.iter().map(|&x| g.combine(x as i64, g.e1(), 1, g.e2()));
    Sequence::power(g, g.e1(), n - 1).concat(&Sequence::from_terms(g, terms).unwrap()).unwrap()
}

/// `N` residues summing to 1 mod `N`.
pub fn eq1_xs(n: u32) -> impl Strategy<Value = Vec<u32>> {
    prop::collection::vec(0..n, (n - 1) as usize).prop_map(move |mut xs| {
        let partial: u32 = xs.iter().sum();
        xs.push((1 + n * n - partial % n) % n);
        xs
    })
}
