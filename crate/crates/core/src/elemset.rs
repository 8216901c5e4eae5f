//! Dense subsets of `(Z/NZ)^2` as bit matrices: row `a` holds the elements
//! `(a, *)`, bit `b` of the row is element `(a, b)`. Translating a set by
//! `(a, b)` is a row rotation by `a` plus a bit rotation by `b` in every row.

use crate::group::{GroupElement, GroupSpec, MAX_MODULUS};

#[derive(Clone, Copy)]
pub struct ElementSet {
    n: u32,
    rows: [u64; MAX_MODULUS as usize],
}

impl ElementSet {
    pub fn new(group: GroupSpec) -> Self {
        ElementSet { n: group.modulus(), rows: [0; MAX_MODULUS as usize] }
    }

    pub fn singleton(group: GroupSpec, g: GroupElement) -> Self {
        let mut s = Self::new(group);
        s.insert(g);
        s
    }

    fn mask(&self) -> u64 {
        if self.n == 64 {
            u64::MAX
        } else {
            (1u64 << self.n) - 1
        }
    }

    #[inline]
    pub fn insert(&mut self, g: GroupElement) {
        self.rows[g.a as usize] |= 1u64 << g.b;
    }

    #[inline]
    pub fn contains(&self, g: GroupElement) -> bool {
        self.rows[g.a as usize] >> g.b & 1 == 1
    }

    pub fn is_empty(&self) -> bool {
        self.rows[..self.n as usize].iter().all(|&r| r == 0)
    }

    pub fn len(&self) -> usize {
        self.rows[..self.n as usize].iter().map(|r| r.count_ones() as usize).sum()
    }

    #[inline]
    pub fn union_with(&mut self, other: &ElementSet) {
        for (x, y) in self.rows[..self.n as usize].iter_mut().zip(&other.rows) {
            *x |= y;
        }
    }

    /// `self + g`.
    #[inline]
    pub fn translate(&self, g: GroupElement) -> ElementSet {
        let mut out = ElementSet { n: self.n, rows: [0; MAX_MODULUS as usize] };
        self.translate_into(g, &mut out);
        out
    }

    /// `out |= self + g`.
    #[inline]
    pub fn translate_into(&self, g: GroupElement, out: &mut ElementSet) {
        let n = self.n as usize;
        let (da, db) = (g.a as usize, g.b);
        let mask = self.mask();
        for r in 0..n {
            let x = self.rows[r];
            if x == 0 {
                continue;
            }
            let rotated = if db == 0 { x } else { ((x << db) | (x >> (self.n - db))) & mask };
            let t = if r + da >= n { r + da - n } else { r + da };
            out.rows[t] |= rotated;
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = GroupElement> + '_ {
        (0..self.n).flat_map(move |a| {
            let row = self.rows[a as usize];
            (0..self.n).filter(move |b| row >> b & 1 == 1).map(move |b| GroupElement::new(a, b))
        })
    }
}

impl PartialEq for ElementSet {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.rows[..self.n as usize] == other.rows[..other.n as usize]
    }
}

impl Eq for ElementSet {}

impl std::fmt::Debug for ElementSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}
