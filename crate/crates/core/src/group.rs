//! Arithmetic in `G = (Z/NZ)^2`, bases, the automorphism group `GL(2, Z/NZ)`
//! and orbit representatives of sequences under it.
//!
//! Elements are residue pairs `(a, b)`; they are ordered lexicographically,
//! which coincides with the order of their dense index `a * N + b`.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sequence::Sequence;

/// Largest supported modulus. Subsum tables keep one 64-bit row per residue
/// of the first coordinate.
pub const MAX_MODULUS: u32 = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct GroupSpec {
    n: u32,
}

impl TryFrom<u32> for GroupSpec {
    type Error = Error;

    fn try_from(n: u32) -> Result<Self> {
        GroupSpec::new(n)
    }
}

impl From<GroupSpec> for u32 {
    fn from(g: GroupSpec) -> u32 {
        g.n
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GroupElement {
    pub a: u32,
    pub b: u32,
}

impl GroupElement {
    /// Builds an element from already reduced coordinates.
    pub const fn new(a: u32, b: u32) -> Self {
        GroupElement { a, b }
    }

    pub fn is_zero(self) -> bool {
        self.a == 0 && self.b == 0
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.a, self.b)
    }
}

pub(crate) fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Inverse of `x` modulo `n`, if it exists.
pub(crate) fn inverse_mod(x: u32, n: u32) -> Option<u32> {
    let (mut r0, mut r1) = (n as i64, (x % n) as i64);
    let (mut t0, mut t1) = (0i64, 1i64);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    (r0 == 1).then(|| t0.rem_euclid(n as i64) as u32)
}

impl GroupSpec {
    pub fn new(n: u32) -> Result<Self> {
        if !(2..=MAX_MODULUS).contains(&n) {
            return Err(Error::InvalidModulus(n));
        }
        Ok(GroupSpec { n })
    }

    pub fn modulus(self) -> u32 {
        self.n
    }

    /// Number of elements, `N^2`.
    pub fn size(self) -> usize {
        (self.n * self.n) as usize
    }

    pub fn zero(self) -> GroupElement {
        GroupElement::new(0, 0)
    }

    /// First standard basis vector `(1, 0)`.
    pub fn e1(self) -> GroupElement {
        GroupElement::new(1, 0)
    }

    /// Second standard basis vector `(0, 1)`.
    pub fn e2(self) -> GroupElement {
        GroupElement::new(0, 1)
    }

    pub fn reduce(self, x: i64) -> u32 {
        x.rem_euclid(self.n as i64) as u32
    }

    /// Element with arbitrary integer coordinates, reduced mod N.
    pub fn elem(self, a: i64, b: i64) -> GroupElement {
        GroupElement::new(self.reduce(a), self.reduce(b))
    }

    pub fn contains(self, g: GroupElement) -> bool {
        g.a < self.n && g.b < self.n
    }

    pub fn add(self, x: GroupElement, y: GroupElement) -> GroupElement {
        GroupElement::new((x.a + y.a) % self.n, (x.b + y.b) % self.n)
    }

    pub fn neg(self, x: GroupElement) -> GroupElement {
        GroupElement::new((self.n - x.a) % self.n, (self.n - x.b) % self.n)
    }

    pub fn sub(self, x: GroupElement, y: GroupElement) -> GroupElement {
        self.add(x, self.neg(y))
    }

    pub fn scale(self, k: i64, x: GroupElement) -> GroupElement {
        let k = self.reduce(k) as u64;
        let n = self.n as u64;
        GroupElement::new((k * x.a as u64 % n) as u32, (k * x.b as u64 % n) as u32)
    }

    /// Linear combination `s*x + t*y`.
    pub fn combine(self, s: i64, x: GroupElement, t: i64, y: GroupElement) -> GroupElement {
        self.add(self.scale(s, x), self.scale(t, y))
    }

    pub fn index(self, g: GroupElement) -> usize {
        (g.a * self.n + g.b) as usize
    }

    pub fn from_index(self, i: usize) -> GroupElement {
        let i = i as u32;
        GroupElement::new(i / self.n, i % self.n)
    }

    /// All elements in lexicographic order.
    pub fn elements(self) -> impl Iterator<Item = GroupElement> {
        let n = self.n;
        (0..n).flat_map(move |a| (0..n).map(move |b| GroupElement::new(a, b)))
    }

    /// Smallest `t >= 1` with `t*g = 0`.
    pub fn element_order(self, g: GroupElement) -> u32 {
        let n = self.n as u64;
        let ord = |x: u32| (n / gcd(x as u64, n)) as u32;
        let (oa, ob) = (ord(g.a), ord(g.b));
        (oa as u64 * ob as u64 / gcd(oa as u64, ob as u64)) as u32
    }

    /// `det [x y]` (coordinates as columns) reduced mod N.
    pub fn det(self, x: GroupElement, y: GroupElement) -> u32 {
        self.reduce(x.a as i64 * y.b as i64 - y.a as i64 * x.b as i64)
    }

    /// Whether `(e1, e2)` is a basis, i.e. `<e1, e2> = <e1> (+) <e2> = G`.
    ///
    /// The pair is a basis exactly when the matrix with columns `e1, e2` is
    /// invertible over `Z/NZ`, i.e. its determinant is a unit: invertibility
    /// makes `(s, t) -> s*e1 + t*e2` a bijection `(Z/NZ)^2 -> G`, which is
    /// the direct-sum condition with both summands of order N, and
    /// conversely a bijection of this form has an inverse matrix.
    pub fn is_basis(self, e1: GroupElement, e2: GroupElement) -> bool {
        gcd(self.det(e1, e2) as u64, self.n as u64) == 1
    }

    /// Coordinates `(s, t)` of `g` in the basis `(e1, e2)`, so
    /// `g = s*e1 + t*e2`. Returns `None` if the pair is not a basis.
    pub fn coordinates(self, g: GroupElement, e1: GroupElement, e2: GroupElement) -> Option<(u32, u32)> {
        let inv = inverse_mod(self.det(e1, e2), self.n)? as i64;
        // inverse of [[e1.a, e2.a], [e1.b, e2.b]] is inv * [[e2.b, -e2.a], [-e1.b, e1.a]]
        let s = inv * (e2.b as i64 * g.a as i64 - e2.a as i64 * g.b as i64);
        let t = inv * (-(e1.b as i64) * g.a as i64 + e1.a as i64 * g.b as i64);
        Some((self.reduce(s), self.reduce(t)))
    }

    /// Whether `h` lies in the cyclic subgroup generated by `g`.
    pub fn in_cyclic(self, h: GroupElement, g: GroupElement) -> bool {
        self.cyclic_log(h, g).is_some()
    }

    /// Smallest `k >= 0` with `k*g = h`.
    pub fn cyclic_log(self, h: GroupElement, g: GroupElement) -> Option<u32> {
        let mut acc = self.zero();
        for k in 0..self.element_order(g) {
            if acc == h {
                return Some(k);
            }
            acc = self.add(acc, g);
        }
        None
    }
}

/// An automorphism of `G`, stored as the integer matrix acting on column
/// vectors: `(a, b) -> (m00*a + m01*b, m10*a + m11*b)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Automorphism {
    group: GroupSpec,
    m: [[u32; 2]; 2],
}

impl Automorphism {
    pub fn new(group: GroupSpec, m: [[u32; 2]; 2]) -> Result<Self> {
        let n = group.modulus();
        let m = [[m[0][0] % n, m[0][1] % n], [m[1][0] % n, m[1][1] % n]];
        let c1 = GroupElement::new(m[0][0], m[1][0]);
        let c2 = GroupElement::new(m[0][1], m[1][1]);
        if !group.is_basis(c1, c2) {
            return Err(Error::NotABasis(c1, c2));
        }
        Ok(Automorphism { group, m })
    }

    /// The automorphism sending the standard basis to `(img1, img2)`.
    pub fn from_images(group: GroupSpec, img1: GroupElement, img2: GroupElement) -> Result<Self> {
        Self::new(group, [[img1.a, img2.a], [img1.b, img2.b]])
    }

    pub fn identity(group: GroupSpec) -> Self {
        Automorphism { group, m: [[1, 0], [0, 1]] }
    }

    pub fn group(&self) -> GroupSpec {
        self.group
    }

    pub fn matrix(&self) -> [[u32; 2]; 2] {
        self.m
    }

    pub fn det(&self) -> u32 {
        self.group.reduce(self.m[0][0] as i64 * self.m[1][1] as i64 - self.m[0][1] as i64 * self.m[1][0] as i64)
    }

    pub fn apply(&self, g: GroupElement) -> GroupElement {
        let [[p, q], [r, s]] = self.m;
        let n = self.group.modulus() as u64;
        let (a, b) = (g.a as u64, g.b as u64);
        GroupElement::new(((p as u64 * a + q as u64 * b) % n) as u32, ((r as u64 * a + s as u64 * b) % n) as u32)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Automorphism) -> Automorphism {
        let n = self.group.modulus() as u64;
        let (x, y) = (self.m, other.m);
        let mut m = [[0u32; 2]; 2];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = ((x[i][0] as u64 * y[0][j] as u64 + x[i][1] as u64 * y[1][j] as u64) % n) as u32;
            }
        }
        Automorphism { group: self.group, m }
    }

    pub fn inverse(&self) -> Automorphism {
        let g = self.group;
        let inv = inverse_mod(self.det(), g.modulus()).expect("automorphism determinant is a unit") as i64;
        let [[p, q], [r, s]] = self.m;
        let f = |x: i64| g.reduce(inv * x);
        Automorphism { group: g, m: [[f(s as i64), f(-(q as i64))], [f(-(r as i64)), f(p as i64)]] }
    }
}

/// `GL(2, Z/NZ)` as a list of automorphisms, with lazily built permutation
/// tables over element indices.
#[derive(Debug)]
pub struct AutGroup {
    group: GroupSpec,
    maps: Vec<Automorphism>,
    perms: OnceLock<Vec<u16>>,
}

impl AutGroup {
    fn build(group: GroupSpec) -> Self {
        let n = group.modulus();
        let mut maps = Vec::new();
        for p in 0..n {
            for q in 0..n {
                for r in 0..n {
                    for s in 0..n {
                        if let Ok(a) = Automorphism::new(group, [[p, q], [r, s]]) {
                            maps.push(a);
                        }
                    }
                }
            }
        }
        // The scan starts at the zero matrix, so the identity is not first;
        // move it to the front so callers can rely on `maps[0]` being trivial.
        let id = maps.iter().position(|a| *a == Automorphism::identity(group)).expect("identity is invertible");
        maps[..=id].rotate_right(1);
        AutGroup { group, maps, perms: OnceLock::new() }
    }

    pub fn group(&self) -> GroupSpec {
        self.group
    }

    pub fn len(&self) -> usize {
        self.maps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.maps.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Automorphism> {
        self.maps.iter()
    }

    pub fn get(&self, i: usize) -> &Automorphism {
        &self.maps[i]
    }

    /// Flattened table: `perm_table()[k * N^2 + i]` is the index of the image
    /// of element `i` under the `k`-th automorphism.
    pub fn perm_table(&self) -> &[u16] {
        self.perms.get_or_init(|| {
            let size = self.group.size();
            let mut t = Vec::with_capacity(self.maps.len() * size);
            for a in &self.maps {
                t.extend(self.group.elements().map(|g| self.group.index(a.apply(g)) as u16));
            }
            t
        })
    }
}

impl<'a> IntoIterator for &'a AutGroup {
    type Item = &'a Automorphism;
    type IntoIter = std::slice::Iter<'a, Automorphism>;

    fn into_iter(self) -> Self::IntoIter {
        self.iter()
    }
}

/// All automorphisms of `G`, i.e. the invertible 2x2 matrices mod N. Built
/// once per modulus and shared.
pub fn automorphisms(group: GroupSpec) -> Arc<AutGroup> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Arc<AutGroup>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(a) = cache.lock().unwrap().get(&group.modulus()) {
        return Arc::clone(a);
    }
    // Built outside the lock: large moduli take a moment.
    let built = Arc::new(AutGroup::build(group));
    Arc::clone(cache.lock().unwrap().entry(group.modulus()).or_insert(built))
}

/// Orbit representative of `s` under `Aut(G)`: the minimum of all images in
/// sorted-list lexicographic order (see [`Sequence`]'s `Ord`).
pub fn canonicalize(s: &Sequence) -> Sequence {
    let group = s.group();
    let auts = automorphisms(group);
    let size = group.size();
    let table = auts.perm_table();
    let mut best: Option<Vec<(u16, u32)>> = None;
    let mut image: Vec<(u16, u32)> = Vec::with_capacity(s.distinct());
    for k in 0..auts.len() {
        let perm = &table[k * size..(k + 1) * size];
        image.clear();
        image.extend(s.iter().map(|(g, m)| (perm[group.index(g)], m)));
        image.sort_unstable();
        let better = match &best {
            None => true,
            Some(b) => cmp_sorted_terms(&image, b).is_lt(),
        };
        if better {
            best = Some(image.clone());
        }
    }
    let best = best.unwrap_or_default();
    Sequence::from_counts(group, best.into_iter().map(|(i, m)| (group.from_index(i as usize), m)))
        .expect("images of a valid sequence are valid")
}

/// Compares two sequences given as sorted `(element, multiplicity)` lists in
/// the order of their expanded sorted term lists.
pub(crate) fn cmp_sorted_terms<T: Ord + Copy>(x: &[(T, u32)], y: &[(T, u32)]) -> std::cmp::Ordering {
    use std::cmp::Ordering::*;
    let (mut i, mut j) = (0, 0);
    let (mut rx, mut ry) = (x.first().map_or(0, |t| t.1), y.first().map_or(0, |t| t.1));
    loop {
        match (i < x.len(), j < y.len()) {
            (false, false) => return Equal,
            (false, true) => return Less,
            (true, false) => return Greater,
            (true, true) => {}
        }
        match x[i].0.cmp(&y[j].0) {
            Less => return Less,
            Greater => return Greater,
            Equal => {}
        }
        let step = rx.min(ry);
        rx -= step;
        ry -= step;
        if rx == 0 {
            i += 1;
            rx = x.get(i).map_or(0, |t| t.1);
        }
        if ry == 0 {
            j += 1;
            ry = y.get(j).map_or(0, |t| t.1);
        }
    }
}
