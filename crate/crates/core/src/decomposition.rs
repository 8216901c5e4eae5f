//! Block decompositions `S = W0·W1·…·Ws` and the swaps between blocks.
//!
//! A plain decomposition has `|W0| = 2n - 1`, `|Wi| = n` and every part
//! zero-sum. A weak decomposition is taken relative to a multiplication map
//! `φ`: every `φ(Wi)` must be a nontrivial zero-sum, with no constraint on
//! lengths, and the block sums `σ(Wi)` form the associated sequence, which
//! lives in `ker φ`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{GroupElement, GroupSpec};
use crate::lifting::MulHom;
use crate::sequence::{GroupHom, Sequence};
use crate::subsums::find_zero_sum_subsequence;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockDecomposition {
    pub n: u32,
    pub w0: Sequence,
    pub blocks: Vec<Sequence>,
    /// `None` is the identity.
    pub hom: Option<MulHom>,
}

/// The sum of each part, in block order (`W0` first).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AssociatedSequence {
    pub sums: Sequence,
    pub per_block: Vec<GroupElement>,
}

/// Type of a block sum against a kernel basis `(f1, f2)`: `f1` is type I,
/// `y f1 + f2` is type II.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum BlockType {
    I,
    II { y: u32 },
    Other,
}

impl AssociatedSequence {
    pub fn block_types(&self, basis: (GroupElement, GroupElement)) -> Vec<BlockType> {
        let group = self.sums.group();
        let (f1, f2) = basis;
        self.per_block
            .iter()
            .map(|&s| {
                if s == f1 {
                    return BlockType::I;
                }
                let shifted = group.sub(s, f2);
                match group.cyclic_log(shifted, f1) {
                    Some(y) => BlockType::II { y },
                    None => BlockType::Other,
                }
            })
            .collect()
    }
}

impl BlockDecomposition {
    pub fn group(&self) -> GroupSpec {
        self.w0.group()
    }

    fn image(&self, g: GroupElement) -> GroupElement {
        self.hom.as_ref().map_or(g, |h| h.apply(g))
    }

    fn image_of(&self, s: &Sequence) -> Sequence {
        s.map(|g| self.image(g))
    }

    /// `W0, W1, …, Ws`.
    pub fn parts(&self) -> impl Iterator<Item = &Sequence> {
        std::iter::once(&self.w0).chain(self.blocks.iter())
    }

    pub fn part(&self, i: usize) -> Option<&Sequence> {
        if i == 0 {
            Some(&self.w0)
        } else {
            self.blocks.get(i - 1)
        }
    }

    fn part_mut(&mut self, i: usize) -> &mut Sequence {
        if i == 0 {
            &mut self.w0
        } else {
            &mut self.blocks[i - 1]
        }
    }

    /// The product of all parts.
    pub fn sequence(&self) -> Sequence {
        self.parts().fold(Sequence::empty(self.group()), |acc, p| acc.concat(p).expect("same group"))
    }

    pub fn associated_sequence(&self) -> AssociatedSequence {
        let per_block: Vec<GroupElement> = self.parts().map(|p| p.sigma()).collect();
        let sums = Sequence::from_terms(self.group(), per_block.iter().copied()).expect("same group");
        AssociatedSequence { sums, per_block }
    }

    /// Checks the defining conditions: every part maps to a nontrivial
    /// zero-sum, and for plain decompositions the lengths are `2n - 1`
    /// and `n`.
    pub fn validate(&self) -> Result<()> {
        for (i, p) in self.parts().enumerate() {
            if p.is_empty() || !self.image_of(p).sigma().is_zero() {
                return Err(Error::PreconditionViolated(format!("part {i} does not map to a nontrivial zero-sum")));
            }
        }
        if self.hom.is_none() {
            let n = self.n as usize;
            if self.w0.len() != 2 * n - 1 {
                return Err(Error::LengthMismatch { expected: 2 * n - 1, actual: self.w0.len() });
            }
            if let Some(b) = self.blocks.iter().find(|b| b.len() != n) {
                return Err(Error::LengthMismatch { expected: n, actual: b.len() });
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct DecompositionOptions {
    /// Enumerate every decomposition (up to block order) instead of
    /// returning the first one.
    pub all: bool,
    /// Hard cap on the number of decompositions in `all` mode.
    pub cap: usize,
}

impl Default for DecompositionOptions {
    fn default() -> Self {
        DecompositionOptions { all: false, cap: 10_000 }
    }
}

/// Takes terms of `from` mapping onto `image`, in element order.
fn lift(image: &Sequence, from: &Sequence, phi: impl Fn(GroupElement) -> GroupElement) -> Option<Sequence> {
    let mut need: Vec<(GroupElement, u32)> = image.iter().collect();
    let mut picked = Vec::new();
    for (g, avail) in from.iter() {
        let target = phi(g);
        if let Some(slot) = need.iter_mut().find(|(t, k)| *t == target && *k > 0) {
            let take = avail.min(slot.1);
            slot.1 -= take;
            picked.push((g, take));
        }
    }
    if need.iter().any(|&(_, k)| k > 0) {
        return None;
    }
    Sequence::from_counts(from.group(), picked).ok()
}

/// Block decompositions of `S` with `s` blocks of length `n`.
///
/// By default one decomposition is returned: blocks are extracted one at a
/// time as `n`-term zero-sums of the image, lifted back to `S` in element
/// order, falling back to a full search if that greedy chain gets stuck.
/// With `opts.all`, every decomposition is listed once up to the order of
/// `W1, …, Ws`.
pub fn block_decompositions(
    seq: &Sequence,
    n: u32,
    s: u32,
    hom: Option<&MulHom>,
    opts: &DecompositionOptions,
) -> Result<Vec<BlockDecomposition>> {
    let expected = ((2 + s) * n - 1) as usize;
    if seq.len() != expected {
        return Err(Error::LengthMismatch { expected, actual: seq.len() });
    }
    let phi = |g: GroupElement| hom.map_or(g, |h| h.apply(g));
    let make = |w0: Sequence, blocks: Vec<Sequence>| BlockDecomposition { n, w0, blocks, hom: hom.copied() };
    if !opts.all {
        if let Some(d) = greedy(seq, n, s, &phi)? {
            return Ok(vec![make(d.0, d.1)]);
        }
    }
    let cap = if opts.all { opts.cap } else { 1 };
    let mut out = Vec::new();
    let mut blocks = Vec::new();
    search(seq, n as usize, s as usize, &phi, &mut blocks, &mut out, cap, opts.all)?;
    Ok(out.into_iter().map(|(w0, b)| make(w0, b)).collect())
}

type Found = (Sequence, Vec<Sequence>);

fn greedy(seq: &Sequence, n: u32, s: u32, phi: &impl Fn(GroupElement) -> GroupElement) -> Result<Option<Found>> {
    let mut rest = seq.clone();
    let mut blocks = Vec::new();
    for _ in 0..s {
        let image = rest.map(phi);
        let Some(t) = find_zero_sum_subsequence(&image, n as usize)? else { return Ok(None) };
        let block = lift(&t, &rest, phi).expect("image witnesses lift");
        rest = rest.remove(&block)?;
        blocks.push(block);
    }
    if rest.is_empty() || !rest.map(phi).sigma().is_zero() {
        return Ok(None);
    }
    Ok(Some((rest, blocks)))
}

/// Sub-multisets of `from` of size `k` with zero image sum, at least `min`
/// in sequence order.
fn zero_blocks(
    from: &Sequence,
    k: usize,
    phi: &impl Fn(GroupElement) -> GroupElement,
    min: Option<&Sequence>,
) -> Vec<Sequence> {
    fn rec(
        terms: &[(GroupElement, u32)],
        i: usize,
        left: usize,
        acc: &mut Vec<(GroupElement, u32)>,
        out: &mut Vec<Vec<(GroupElement, u32)>>,
    ) {
        if left == 0 {
            out.push(acc.clone());
            return;
        }
        if i == terms.len() {
            return;
        }
        let (g, m) = terms[i];
        for take in (0..=m.min(left as u32)).rev() {
            if take > 0 {
                acc.push((g, take));
            }
            rec(terms, i + 1, left - take as usize, acc, out);
            if take > 0 {
                acc.pop();
            }
        }
    }
    let terms: Vec<(GroupElement, u32)> = from.iter().collect();
    let mut raw = Vec::new();
    rec(&terms, 0, k, &mut Vec::new(), &mut raw);
    let group = from.group();
    let mut out: Vec<Sequence> = raw
        .into_iter()
        .map(|c| Sequence::from_counts(group, c).expect("valid"))
        .filter(|t| t.map(phi).sigma().is_zero())
        .filter(|t| min.is_none_or(|m| t >= m))
        .collect();
    out.sort();
    out
}

#[allow(clippy::too_many_arguments)]
fn search(
    rest: &Sequence,
    n: usize,
    left: usize,
    phi: &impl Fn(GroupElement) -> GroupElement,
    blocks: &mut Vec<Sequence>,
    out: &mut Vec<Found>,
    cap: usize,
    strict_cap: bool,
) -> Result<bool> {
    if left == 0 {
        if rest.is_empty() || !rest.map(phi).sigma().is_zero() {
            return Ok(false);
        }
        if out.len() == cap {
            if strict_cap {
                return Err(Error::BudgetExceeded(format!("more than {cap} block decompositions")));
            }
            return Ok(true);
        }
        out.push((rest.clone(), blocks.clone()));
        return Ok(!strict_cap && out.len() == cap);
    }
    for t in zero_blocks(rest, n, phi, blocks.last()) {
        let next = rest.remove(&t)?;
        blocks.push(t);
        let stop = search(&next, n, left - 1, phi, blocks, out, cap, strict_cap)?;
        blocks.pop();
        if stop {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Exchanges `T | Wj` with `R | Wk`. The images of `T` and `R` must have
/// equal sums. Index 0 is `W0`.
pub fn apply_swap(
    d: &BlockDecomposition,
    j: usize,
    k: usize,
    t: &Sequence,
    r: &Sequence,
) -> Result<BlockDecomposition> {
    let parts = d.blocks.len() + 1;
    if j == k || j >= parts || k >= parts {
        return Err(Error::InvalidArgument(format!(
            "swap needs two distinct parts in [0, {}], got {j} and {k}",
            parts - 1
        )));
    }
    let wj = d.part(j).expect("checked");
    let wk = d.part(k).expect("checked");
    if !t.divides(wj) {
        return Err(Error::NotASubsequence(format!("{t} is not a subsequence of W{j}")));
    }
    if !r.divides(wk) {
        return Err(Error::NotASubsequence(format!("{r} is not a subsequence of W{k}")));
    }
    if d.image_of(t).sigma() != d.image_of(r).sigma() {
        return Err(Error::HomSumMismatch);
    }
    let new_j = wj.remove(t)?.concat(r)?;
    let new_k = wk.remove(r)?.concat(t)?;
    let mut out = d.clone();
    *out.part_mut(j) = new_j;
    *out.part_mut(k) = new_k;
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SwapKind {
    /// `φ(T) = ē1^[x]·ē2` from `W0` against `φ(R) = ē3`.
    E2PlusE3,
    /// `φ(T) = ē1^[n-x]·ē3` from `W0` against `φ(R) = ē2`.
    E3PlusE2,
}

/// The designated image elements: `ē3 = x ē1 + ē2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SwapContext {
    pub e1: GroupElement,
    pub e2: GroupElement,
    pub x: u32,
}

impl SwapContext {
    pub fn e3(&self, group: GroupSpec) -> GroupElement {
        group.combine(self.x as i64, self.e1, 1, self.e2)
    }
}

/// The swap between `W0` and `W_target` selected by `kind`; preimages are
/// chosen in element order.
pub fn named_swap(
    d: &BlockDecomposition,
    kind: SwapKind,
    target: usize,
    ctx: &SwapContext,
) -> Result<BlockDecomposition> {
    let group = d.group();
    if target == 0 || target > d.blocks.len() {
        return Err(Error::InvalidArgument(format!("target block must be in [1, {}], got {target}", d.blocks.len())));
    }
    let e3 = ctx.e3(group);
    let (t_image, r_image) = match kind {
        SwapKind::E2PlusE3 => (Sequence::from_counts(group, [(ctx.e1, ctx.x), (ctx.e2, 1)])?, e3),
        SwapKind::E3PlusE2 => (Sequence::from_counts(group, [(ctx.e1, d.n - ctx.x), (e3, 1)])?, ctx.e2),
    };
    let phi = |g| d.image(g);
    let t = lift(&t_image, &d.w0, phi)
        .ok_or_else(|| Error::PatternUnavailable(format!("W0 has no preimage of {t_image}")))?;
    let r = lift(&Sequence::power(group, r_image, 1), &d.blocks[target - 1], phi)
        .ok_or_else(|| Error::PatternUnavailable(format!("W{target} has no preimage of {r_image}")))?;
    apply_swap(d, 0, target, &t, &r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lifting::mul_hom;

    fn grp(n: u32) -> GroupSpec {
        GroupSpec::new(n).unwrap()
    }

    #[test]
    fn n3_example() {
        let g = grp(3);
        let (e1, e2) = (g.e1(), g.e2());
        let s = Sequence::from_counts(g, [(e1, 2), (e2, 5), (g.add(e1, e2), 1)]).unwrap();
        let all = block_decompositions(&s, 3, 1, None, &DecompositionOptions { all: true, cap: 100 }).unwrap();
        assert!(all.iter().any(|d| d.blocks[0] == Sequence::power(g, e2, 3)));
        for d in &all {
            d.validate().unwrap();
            assert_eq!(d.sequence(), s);
            assert!(crate::subsums::is_minimal_zero_sum(&d.w0));
        }
        let first = block_decompositions(&s, 3, 1, None, &DecompositionOptions::default()).unwrap();
        assert_eq!(first.len(), 1);
        first[0].validate().unwrap();
        assert!(matches!(
            block_decompositions(&Sequence::power(g, e1, 3), 3, 1, None, &Default::default()),
            Err(Error::LengthMismatch { .. })
        ));
    }

    #[test]
    fn cap_overflow_is_an_error() {
        let g = grp(3);
        let (e1, e2) = (g.e1(), g.e2());
        let s = Sequence::from_counts(g, [(e1, 2), (e2, 5), (g.add(e1, e2), 1)]).unwrap();
        let r = block_decompositions(&s, 3, 1, None, &DecompositionOptions { all: true, cap: 0 });
        assert!(matches!(r, Err(Error::BudgetExceeded(_))));
    }

    /// `S` over `(Z/20)^2` whose image under multiplication by 4 is
    /// exceptional, with a weak decomposition shaped after that image.
    fn m4_n5_instance() -> (BlockDecomposition, SwapContext) {
        let h = mul_hom(20, 4).unwrap();
        let g = h.group();
        let (e1, e2) = (g.e1(), g.e2());
        let x = 2u32;
        let e3 = g.combine(x as i64, e1, 1, e2);
        let e23 = g.add(e2, e3);
        // x* with x x* = -1 mod 5
        let xs = 2u32;
        let w0 = Sequence::from_counts(g, [(e1, 4), (e2, xs), (e3, 5 - xs)]).unwrap();
        let w1 = Sequence::from_counts(g, [(e3, xs - 1), (e2, 5 - xs - 1), (e1, 1), (e23, 1)]).unwrap();
        let mut blocks = vec![w1];
        blocks.extend([e1, e2, e3, e2, e3].iter().map(|&t| Sequence::power(g, t, 5)));
        let d = BlockDecomposition { n: 5, w0, blocks, hom: Some(h) };
        d.validate().unwrap();
        (d, SwapContext { e1: h.apply(e1), e2: h.apply(e2), x })
    }

    #[test]
    fn swaps_preserve_weak_decompositions() {
        let (d, ctx) = m4_n5_instance();
        let before = d.associated_sequence();
        let target = 4; // a block of e3 terms
        let swapped = named_swap(&d, SwapKind::E2PlusE3, target, &ctx).unwrap();
        swapped.validate().unwrap();
        assert_eq!(swapped.sequence(), d.sequence());
        let after = swapped.associated_sequence();
        for i in 0..before.per_block.len() {
            if i != 0 && i != target {
                assert_eq!(before.per_block[i], after.per_block[i]);
            }
        }
        // swapping the exchanged terms back restores the original
        let g = d.group();
        let t = Sequence::from_counts(g, [(g.e1(), ctx.x), (g.e2(), 1)]).unwrap();
        let r = Sequence::power(g, g.combine(ctx.x as i64, g.e1(), 1, g.e2()), 1);
        assert_eq!(swapped.w0, d.w0.remove(&t).unwrap().concat(&r).unwrap());
        assert_eq!(apply_swap(&swapped, 0, target, &r, &t).unwrap(), d);
    }

    #[test]
    fn swap_errors() {
        let (d, ctx) = m4_n5_instance();
        let g = d.group();
        let one = Sequence::power(g, g.e1(), 1);
        assert!(matches!(apply_swap(&d, 1, 1, &one, &one), Err(Error::InvalidArgument(_))));
        assert!(apply_swap(&d, 0, 2, &one, &one).is_ok());
        let e2 = Sequence::power(g, g.e2(), 1);
        assert!(matches!(apply_swap(&d, 0, 3, &one, &e2), Err(Error::HomSumMismatch)));
        assert!(matches!(apply_swap(&d, 0, 3, &Sequence::power(g, g.e1(), 9), &e2), Err(Error::NotASubsequence(_))));
        // a W0 without e2-image terms cannot start an e2plus_e3 swap
        let mut bare = d.clone();
        bare.w0 = Sequence::from_counts(g, [(g.e1(), 4), (g.combine(2, g.e1(), 1, g.e2()), 5)]).unwrap();
        assert!(matches!(named_swap(&bare, SwapKind::E2PlusE3, 4, &ctx), Err(Error::PatternUnavailable(_))));
    }
}
