//! The multiplication-by-`m` map `φ: G → G` on `G = (Z/mnZ)^2`, its kernel
//! `nG ≅ (Z/mZ)^2` and image `mG ≅ (Z/nZ)^2`, and statement-level checks of
//! how long minimal zero-sums over `G` project under it:
//!
//! 1. for a minimal zero-sum `S` of length `2mn - 1`, `φ(S)` is a zero-sum
//!    with no zero-sum of length at most `n - 1`;
//! 2. if moreover `φ(S)` has the exceptional shape, `S` has Property A.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::classification::construct_exceptional;
use crate::enumeration::{enumerate, EnumSpec, Predicate, SearchBudget, SearchOptions};
use crate::error::{Error, Result};
use crate::group::{gcd, Automorphism, GroupElement, GroupSpec};
use crate::properties::has_property_a;
use crate::report::{Report, STATUS_NO_HITS};
use crate::sequence::{GroupHom, Sequence};
use crate::subsums::{is_minimal_zero_sum, short_sums};

/// Default exhaustive bound on `N = mn` for the item 1 population.
pub const PROPBFIX_EXHAUSTIVE_MAX_MODULUS: u32 = 8;

/// `g ↦ m·g` on `(Z/NZ)^2` with `m | N`, together with a basis of its
/// kernel `nG`, `n = N/m`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MulHom {
    group: GroupSpec,
    m: u32,
    kernel_basis: (GroupElement, GroupElement),
}

/// `g ↦ m·g` on `(Z/NZ)^2` with the kernel basis `(n·(1,0), n·(0,1))`.
pub fn mul_hom(modulus: u32, m: u32) -> Result<MulHom> {
    let group = GroupSpec::new(modulus)?;
    if m < 2 || !modulus.is_multiple_of(m) {
        return Err(Error::NotADivisor { m, n: modulus });
    }
    let n = (modulus / m) as i64;
    Ok(MulHom { group, m, kernel_basis: (group.elem(n, 0), group.elem(0, n)) })
}

impl MulHom {
    pub fn group(&self) -> GroupSpec {
        self.group
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    /// `N / m`.
    pub fn n(&self) -> u32 {
        self.group.modulus() / self.m
    }

    pub fn kernel_basis(&self) -> (GroupElement, GroupElement) {
        self.kernel_basis
    }

    /// Replaces the kernel basis. Both elements must lie in `nG` and
    /// together generate it.
    pub fn with_kernel_basis(self, f1: GroupElement, f2: GroupElement) -> Result<MulHom> {
        let g = self.group;
        for f in [f1, f2] {
            if !g.scale(self.m as i64, f).is_zero() {
                return Err(Error::InvalidKernelBasis(format!("{f} is not in the kernel")));
            }
        }
        let m = self.m as i64;
        let mut spanned: Vec<GroupElement> =
            (0..m).flat_map(|y| (0..m).map(move |z| (y, z))).map(|(y, z)| g.combine(y, f1, z, f2)).collect();
        spanned.sort();
        spanned.dedup();
        if spanned.len() != (self.m * self.m) as usize {
            return Err(Error::InvalidKernelBasis(format!("({f1}, {f2}) does not generate the kernel")));
        }
        Ok(MulHom { kernel_basis: (f1, f2), ..self })
    }

    /// `ker φ = nG`.
    pub fn kernel(&self) -> Vec<GroupElement> {
        let n = self.n() as i64;
        let g = self.group;
        let mut out: Vec<_> = g.elements().map(|x| g.scale(n, x)).collect();
        out.sort();
        out.dedup();
        out
    }

    /// `im φ = mG`.
    pub fn image(&self) -> Vec<GroupElement> {
        let g = self.group;
        let mut out: Vec<_> = g.elements().map(|x| self.apply(x)).collect();
        out.sort();
        out.dedup();
        out
    }

    /// `(y, z)` with `k = y f1 + z f2`, for `k` in the kernel.
    pub fn kernel_coordinates(&self, k: GroupElement) -> Option<(u32, u32)> {
        let (f1, f2) = self.kernel_basis;
        let m = self.m;
        (0..m)
            .flat_map(|y| (0..m).map(move |z| (y, z)))
            .find(|&(y, z)| self.group.combine(y as i64, f1, z as i64, f2) == k)
    }
}

impl GroupHom for MulHom {
    fn source(&self) -> GroupSpec {
        self.group
    }

    fn target(&self) -> GroupSpec {
        self.group
    }

    fn apply(&self, g: GroupElement) -> GroupElement {
        self.group.scale(self.m as i64, g)
    }
}

/// `ψ = g - rep ∈ ker φ`, split as `ψ = ψ1 + ψ2` with `ψ1 ∈ ⟨f1⟩` and
/// `ψ2 ∈ ⟨f2⟩`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PsiSplit {
    pub psi: GroupElement,
    pub psi1: GroupElement,
    pub psi2: GroupElement,
}

pub fn psi_split(
    g: GroupElement,
    rep: GroupElement,
    hom: &MulHom,
    kernel_basis: (GroupElement, GroupElement),
) -> Result<PsiSplit> {
    if hom.apply(g) != hom.apply(rep) {
        return Err(Error::FiberMismatch { g, rep });
    }
    let hom = hom.with_kernel_basis(kernel_basis.0, kernel_basis.1)?;
    let group = hom.group();
    let psi = group.sub(g, rep);
    let (y, z) = hom.kernel_coordinates(psi).expect("the kernel basis generates the kernel");
    Ok(PsiSplit { psi, psi1: group.scale(y as i64, kernel_basis.0), psi2: group.scale(z as i64, kernel_basis.1) })
}

/// Settings shared by both statement checks.
#[derive(Clone, Debug)]
pub struct PropbfixConfig {
    pub samples: usize,
    pub seed: u64,
    /// Item 1: enumerate every minimal zero-sum instead of sampling.
    pub exhaustive: bool,
    pub budget: SearchBudget,
}

impl Default for PropbfixConfig {
    fn default() -> Self {
        PropbfixConfig { samples: 10_000, seed: 0x5eed_0001, exhaustive: false, budget: SearchBudget::default() }
    }
}

/// Outcome of checking item 1 on one sequence.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Item1Outcome {
    /// `S` is not a minimal zero-sum of length `2mn - 1`.
    PreconditionFailed,
    Pass,
    Violation,
}

pub fn check_item1(s: &Sequence, hom: &MulHom) -> Item1Outcome {
    let group = hom.group();
    if s.group() != group || s.len() != 2 * group.modulus() as usize - 1 || !is_minimal_zero_sum(s) {
        return Item1Outcome::PreconditionFailed;
    }
    let image = s.apply_hom(hom);
    let n = hom.n() as usize;
    let short = n > 1 && short_sums(&image, n - 1).contains(group.zero());
    if image.sigma().is_zero() && !short {
        Item1Outcome::Pass
    } else {
        Item1Outcome::Violation
    }
}

fn random_automorphism(group: GroupSpec, rng: &mut ChaCha8Rng) -> Automorphism {
    let n = group.modulus();
    loop {
        let m = [[rng.gen_range(0..n), rng.gen_range(0..n)], [rng.gen_range(0..n), rng.gen_range(0..n)]];
        if let Ok(a) = Automorphism::new(group, m) {
            return a;
        }
    }
}

/// A random member of the family `e1^[N-1]·∏(x_i e1 + e2)`, `Σ x_i ≡ 1`,
/// transported by a random automorphism.
pub fn sample_eq1(group: GroupSpec, rng: &mut ChaCha8Rng) -> Sequence {
    let n = group.modulus();
    let mut xs: Vec<u32> = (0..n - 1).map(|_| rng.gen_range(0..n)).collect();
    let partial: u64 = xs.iter().map(|&x| x as u64).sum();
    xs.push(((1 + n as u64 * n as u64 - partial % n as u64) % n as u64) as u32);
    let (e1, e2) = (group.e1(), group.e2());
    let terms = xs.iter().map(|&x| group.combine(x as i64, e1, 1, e2));
    let s = Sequence::power(group, e1, n - 1)
        .concat(&Sequence::from_terms(group, terms).expect("valid"))
        .expect("same group");
    s.apply_hom(&random_automorphism(group, rng))
}

fn check_mn(m: u32, n: u32, min_n: u32) -> Result<MulHom> {
    if m < 4 || n < min_n {
        return Err(Error::InvalidArgument(format!("need m >= 4 and n >= {min_n}, got m={m}, n={n}")));
    }
    mul_hom(m * n, m)
}

/// Checks item 1 on a population of minimal zero-sums of length `2mn - 1`:
/// by default seeded samples from the normal-form family (complete given
/// Property B), or every orbit when `exhaustive` is set.
pub fn verify_propbfix_item1(m: u32, n: u32, config: &PropbfixConfig) -> Result<Report> {
    let start = Instant::now();
    let hom = check_mn(m, n, 2)?;
    let group = hom.group();
    let mut report = Report::new("propbfix-item1").param("m", m).param("n", n).param("seed", config.seed);
    let population: Vec<Sequence> = if config.exhaustive {
        config.budget.check_modulus(group, PROPBFIX_EXHAUSTIVE_MAX_MODULUS, "exhaustive item 1 population")?;
        // φ commutes with automorphisms, so one representative per orbit
        // decides the whole orbit.
        report.detail("population", "all minimal zero-sums of length 2mn-1, one per automorphism orbit");
        let opts = SearchOptions::with_budget(config.budget.clone());
        enumerate(&EnumSpec::new(group, 2 * group.modulus() as usize - 1, Predicate::MinimalZeroSum, true), &opts)?
    } else {
        report.detail(
            "population",
            "seeded samples of e1^[N-1]*prod(x_i e1 + e2) with sum x_i = 1 mod N, transported by random automorphisms",
        );
        report.params.insert("samples".into(), (config.samples as u64).into());
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        (0..config.samples).map(|_| sample_eq1(group, &mut rng)).collect()
    };
    report.orbits_scanned = population.len() as u64;
    let outcomes: Vec<Item1Outcome> = population.par_iter().map(|s| check_item1(s, &hom)).collect();
    for key in ["pass", "violation", "precondition_failed"] {
        report.bump(key, 0);
    }
    for (s, o) in population.into_iter().zip(outcomes) {
        match o {
            Item1Outcome::Pass => report.bump("pass", 1),
            Item1Outcome::PreconditionFailed => report.bump("precondition_failed", 1),
            Item1Outcome::Violation => {
                report.bump("violation", 1);
                report.counterexample(s);
            }
        }
    }
    Ok(report.finish(start))
}

/// A random lift of an exceptional sequence over `mG`: each image term gets
/// a preimage shifted by a random kernel element, and one term is adjusted
/// so that the lift is a zero-sum.
fn random_exceptional_lift(hom: &MulHom, rng: &mut ChaCha8Rng) -> Sequence {
    let group = hom.group();
    let (m, n) = (hom.m(), hom.n());
    let xs: Vec<u32> = (2..=n - 2).filter(|&x| gcd(x as u64, n as u64) == 1).collect();
    let x = xs[rng.gen_range(0..xs.len())];
    // a + b + c = 2m with a, b, c >= 1
    let a = rng.gen_range(1..=2 * m - 2);
    let b = rng.gen_range(1..=2 * m - 1 - a);
    let c = 2 * m - a - b;
    // a basis of (Z/nZ)^2, realized on preimages in G
    let small = GroupSpec::new(n).expect("n >= 5");
    let alpha = random_automorphism(small, rng);
    let pattern = construct_exceptional(small, x, a, b, c, (alpha.apply(small.e1()), alpha.apply(small.e2())))
        .expect("valid parameters");
    let kernel = hom.kernel();
    let mut terms: Vec<GroupElement> = pattern
        .expanded()
        .map(|t| {
            // t = (u, v) mod n lifts to (u, v) mod N, whose image is m·(u, v)
            let base = group.elem(t.a as i64, t.b as i64);
            group.add(base, kernel[rng.gen_range(0..kernel.len())])
        })
        .collect();
    let sigma = terms.iter().fold(group.zero(), |acc, &t| group.add(acc, t));
    let last = terms.len() - 1;
    terms[last] = group.sub(terms[last], sigma);
    Sequence::from_terms(group, terms).expect("valid")
}

/// Searches for minimal zero-sums of length `2mn - 1` whose image under
/// multiplication by `m` has the exceptional shape, by random fiberwise
/// lifts of exceptional sequences over `mG`, and checks Property A on
/// every hit. The search is bounded by `config.samples` lifts.
pub fn verify_propbfix_item2(m: u32, n: u32, config: &PropbfixConfig) -> Result<Report> {
    let start = Instant::now();
    let hom = check_mn(m, n, 5)?;
    let mut report = Report::new("propbfix-item2").param("m", m).param("n", n).param("seed", config.seed);
    report.params.insert("lifts".into(), (config.samples as u64).into());
    report.detail("population", "random fiberwise lifts of exceptional sequences over mG, adjusted to be zero-sum");
    report.detail("search", "truncated at the lift budget");
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let lifts: Vec<Sequence> = (0..config.samples).map(|_| random_exceptional_lift(&hom, &mut rng)).collect();
    report.orbits_scanned = lifts.len() as u64;
    let hits: Vec<(Sequence, bool)> = lifts
        .into_par_iter()
        .filter(is_minimal_zero_sum)
        .map(|s| {
            let ok = has_property_a(&s);
            (s, ok)
        })
        .collect();
    report.bump("hits", hits.len() as u64);
    report.bump("property_a", hits.iter().filter(|h| h.1).count() as u64);
    for (s, ok) in hits.iter().cloned() {
        if !ok {
            report.counterexample(s);
        }
    }
    let mut report = report.finish(start);
    if hits.is_empty() {
        report.status = STATUS_NO_HITS.to_string();
    }
    Ok(report)
}
