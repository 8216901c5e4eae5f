//! Exhaustive generation of sequences satisfying a predicate, optionally one
//! representative per `Aut(G)`-orbit, and the extremal invariants `D(G)`
//! and `s_{<=k}(G)` computed from it.
//!
//! Generation is an orderly depth-first search: terms are appended in
//! nondecreasing element order and a node is kept only if it is the
//! canonical (orbit-minimal) form of its own orbit. Removing the largest
//! term of a canonical sequence leaves a canonical sequence, so every
//! canonical sequence is reached through canonical ancestors and the check
//! can be applied at every depth. Prefix-closed predicates (zero-sum free,
//! no short zero-sum) are maintained incrementally from the parent's sum
//! sets and cut the tree as soon as they fail.
//!
//! The tree is split at a fixed depth into independent work units that run
//! on the current rayon pool; their outputs are concatenated in prefix
//! order, so results do not depend on the number of workers.

mod cache;

use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use rayon::prelude::*;

pub use cache::{Cache, CACHE_ENV, CODE_VERSION};

use crate::elemset::ElementSet;
use crate::error::{Error, Result};
use crate::group::{automorphisms, GroupElement, GroupSpec};
use crate::sequence::Sequence;

/// Leaf filter without pruning, for ad-hoc searches.
#[derive(Clone)]
pub struct CustomFilter {
    pub name: String,
    pub accept: Arc<dyn Fn(&Sequence) -> bool + Send + Sync>,
}

impl fmt::Debug for CustomFilter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CustomFilter({})", self.name)
    }
}

#[derive(Clone, Debug)]
pub enum Predicate {
    ZeroSumFree,
    MinimalZeroSum,
    /// `0 ∉ Σ_{<=k}(S)`.
    NoShortZeroSum(u32),
    /// `σ(S) = 0` and `0 ∉ Σ_{<=k}(S)`.
    ZeroSumNoShortZeroSum(u32),
    Custom(CustomFilter),
}

impl Predicate {
    /// Stable identifier, used in cache keys and reports.
    pub fn name(&self) -> String {
        match self {
            Predicate::ZeroSumFree => "zero-sum-free".into(),
            Predicate::MinimalZeroSum => "minimal-zero-sum".into(),
            Predicate::NoShortZeroSum(k) => format!("no-short-zero-sum-{k}"),
            Predicate::ZeroSumNoShortZeroSum(k) => format!("zero-sum-no-short-zero-sum-{k}"),
            Predicate::Custom(c) => format!("custom-{}", c.name),
        }
    }

    /// Evaluates the predicate directly on a complete sequence.
    pub fn accepts(&self, s: &Sequence) -> bool {
        use crate::subsums::{is_minimal_zero_sum, is_zero_sum_free, short_sums};
        let zero = s.group().zero();
        match self {
            Predicate::ZeroSumFree => is_zero_sum_free(s),
            Predicate::MinimalZeroSum => is_minimal_zero_sum(s),
            Predicate::NoShortZeroSum(k) => !short_sums(s, *k as usize).contains(zero),
            Predicate::ZeroSumNoShortZeroSum(k) => s.sigma().is_zero() && !short_sums(s, *k as usize).contains(zero),
            Predicate::Custom(c) => (c.accept)(s),
        }
    }
}

#[derive(Clone, Debug)]
pub struct EnumSpec {
    pub group: GroupSpec,
    pub length: usize,
    pub predicate: Predicate,
    pub up_to_symmetry: bool,
}

impl EnumSpec {
    pub fn new(group: GroupSpec, length: usize, predicate: Predicate, up_to_symmetry: bool) -> Self {
        EnumSpec { group, length, predicate, up_to_symmetry }
    }

    pub(crate) fn cache_key(&self) -> Option<String> {
        if matches!(self.predicate, Predicate::Custom(_)) {
            return None;
        }
        Some(format!(
            "n{}-len{}-{}-{}-{}",
            self.group.modulus(),
            self.length,
            self.predicate.name(),
            if self.up_to_symmetry { "orbits" } else { "all" },
            CODE_VERSION
        ))
    }
}

/// Default exhaustive bound for plain [`enumerate`] calls.
pub const ENUMERATE_MAX_MODULUS: u32 = 8;

/// Limits on exhaustive searches. Each operation has its own default bound
/// on `N`; `max_modulus` replaces it, and `allow_large` lifts it. Any search
/// visiting more than `max_nodes` tree nodes fails with
/// [`Error::BudgetExceeded`] instead of returning a partial answer.
#[derive(Clone, Debug)]
pub struct SearchBudget {
    pub max_modulus: Option<u32>,
    pub max_nodes: u64,
    pub allow_large: bool,
}

impl SearchBudget {
    pub fn with_max_modulus(max_modulus: u32) -> Self {
        SearchBudget { max_modulus: Some(max_modulus), ..Default::default() }
    }

    pub fn unbounded() -> Self {
        SearchBudget { allow_large: true, ..Default::default() }
    }

    pub fn check_modulus(&self, group: GroupSpec, default_bound: u32, what: &str) -> Result<()> {
        let bound = self.max_modulus.unwrap_or(default_bound);
        if group.modulus() > bound && !self.allow_large {
            return Err(Error::BudgetExceeded(format!(
                "{what} for N={} is above the exhaustive bound N<={bound} (pass the override to run anyway)",
                group.modulus()
            )));
        }
        Ok(())
    }
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget { max_modulus: None, max_nodes: 20_000_000_000, allow_large: false }
    }
}

/// Options shared by all enumeration entry points.
#[derive(Clone, Debug)]
pub struct SearchOptions {
    pub budget: SearchBudget,
    pub cache: Option<Cache>,
    /// Depth at which the search tree is cut into parallel work units.
    pub split_depth: usize,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions { budget: SearchBudget::default(), cache: None, split_depth: 3 }
    }
}

impl SearchOptions {
    pub fn with_budget(budget: SearchBudget) -> Self {
        SearchOptions { budget, ..Default::default() }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Prune {
    None,
    ZeroSumFree,
    NoShort(usize),
}

/// Immutable search description shared by all work units.
struct Engine<'a> {
    group: GroupSpec,
    size: usize,
    length: Option<usize>,
    prune: Prune,
    forced_zero_sum: bool,
    custom: Option<&'a CustomFilter>,
    perms: Option<&'a [u16]>,
    n_auts: usize,
    elems: Vec<GroupElement>,
    neg: Vec<u16>,
    nodes: AtomicU64,
    max_nodes: u64,
}

/// Mutable DFS state: the chosen term indices and per-depth predicate state.
struct Cursor {
    chosen: Vec<u16>,
    counts: Vec<u8>,
    sums: Vec<u16>,
    sets: Vec<ElementSet>,
    layers: usize,
}

trait Sink {
    fn node(&mut self, depth: usize);
    fn leaf(&mut self, chosen: &[u16]);
}

struct Collect(Vec<Vec<u16>>);

impl Sink for Collect {
    fn node(&mut self, _: usize) {}
    fn leaf(&mut self, chosen: &[u16]) {
        self.0.push(chosen.to_vec());
    }
}

struct Profile(Vec<u64>);

impl Sink for Profile {
    fn node(&mut self, depth: usize) {
        if self.0.len() <= depth {
            self.0.resize(depth + 1, 0);
        }
        self.0[depth] += 1;
    }
    fn leaf(&mut self, _: &[u16]) {}
}

impl<'a> Engine<'a> {
    fn new(
        group: GroupSpec,
        length: Option<usize>,
        predicate: &'a Predicate,
        up_to_symmetry: bool,
        perms_owner: Option<&'a crate::group::AutGroup>,
        max_nodes: u64,
    ) -> Self {
        let (prune, forced_zero_sum, custom) = match predicate {
            Predicate::ZeroSumFree => (Prune::ZeroSumFree, false, None),
            Predicate::MinimalZeroSum => (Prune::ZeroSumFree, true, None),
            Predicate::NoShortZeroSum(k) => (Prune::NoShort(*k as usize), false, None),
            Predicate::ZeroSumNoShortZeroSum(k) => (Prune::NoShort(*k as usize), true, None),
            Predicate::Custom(c) => (Prune::None, false, Some(c)),
        };
        let elems: Vec<GroupElement> = group.elements().collect();
        let neg = elems.iter().map(|&g| group.index(group.neg(g)) as u16).collect();
        let (perms, n_auts) = match (up_to_symmetry, perms_owner) {
            (true, Some(a)) => (Some(a.perm_table()), a.len()),
            _ => (None, 0),
        };
        Engine {
            group,
            size: group.size(),
            length,
            prune,
            forced_zero_sum,
            custom,
            perms,
            n_auts,
            elems,
            neg,
            nodes: AtomicU64::new(0),
            max_nodes,
        }
    }

    fn layers(&self) -> usize {
        match self.prune {
            Prune::None => 0,
            Prune::ZeroSumFree => 1,
            Prune::NoShort(k) => k + 1,
        }
    }

    fn cursor(&self) -> Cursor {
        let layers = self.layers();
        let mut sets = vec![ElementSet::new(self.group); layers];
        if let Prune::NoShort(_) = self.prune {
            sets[0].insert(self.group.zero());
        }
        Cursor { chosen: Vec::new(), counts: vec![0; self.size], sums: vec![0], sets, layers }
    }

    /// Whether the predicate state allows appending `g` at the current depth.
    fn admissible(&self, cur: &Cursor, g: usize) -> bool {
        let depth = cur.chosen.len();
        let neg = self.elems[self.neg[g] as usize];
        match self.prune {
            Prune::None => true,
            Prune::ZeroSumFree => g != 0 && !cur.sets[depth].contains(neg),
            Prune::NoShort(k) => {
                let base = depth * cur.layers;
                (0..k).all(|l| !cur.sets[base + l].contains(neg))
            }
        }
    }

    /// Appends `g`; the caller has checked admissibility.
    fn push(&self, cur: &mut Cursor, g: usize) {
        let depth = cur.chosen.len();
        let x = self.elems[g];
        let layers = cur.layers;
        if cur.sets.len() < (depth + 2) * layers {
            cur.sets.resize((depth + 2) * layers, ElementSet::new(self.group));
        }
        match self.prune {
            Prune::None => {}
            Prune::ZeroSumFree => {
                let mut next = cur.sets[depth];
                cur.sets[depth].translate_into(x, &mut next);
                next.insert(x);
                cur.sets[depth + 1] = next;
            }
            Prune::NoShort(k) => {
                let (lo, hi) = cur.sets.split_at_mut((depth + 1) * layers);
                let prev = &lo[depth * layers..];
                hi[..layers].copy_from_slice(prev);
                for l in 1..=k {
                    prev[l - 1].translate_into(x, &mut hi[l]);
                }
            }
        }
        let sum = self.group.add(self.elems[cur.sums[depth] as usize], x);
        cur.sums.truncate(depth + 1);
        cur.sums.push(self.group.index(sum) as u16);
        cur.chosen.push(g as u16);
        cur.counts[g] += 1;
    }

    fn pop(&self, cur: &mut Cursor) {
        let g = cur.chosen.pop().expect("pop on empty cursor");
        cur.counts[g as usize] -= 1;
        cur.sums.pop();
    }

    /// Whether the multiset in `counts` is the minimum of its orbit.
    fn is_canonical(&self, counts: &[u8]) -> bool {
        let Some(perms) = self.perms else { return true };
        let size = self.size;
        // Index 0 is the identity.
        for k in 1..self.n_auts {
            let p = &perms[k * size..(k + 1) * size];
            for e in 0..size {
                // multiplicity of e in the image of S under the inverse map
                let (img, own) = (counts[p[e] as usize], counts[e]);
                if img != own {
                    if img > own {
                        return false;
                    }
                    break;
                }
            }
        }
        true
    }

    fn count_node(&self) -> Result<()> {
        let v = self.nodes.fetch_add(1, Ordering::Relaxed);
        if v >= self.max_nodes {
            return Err(Error::BudgetExceeded(format!("search visited more than {} nodes", self.max_nodes)));
        }
        Ok(())
    }

    fn emit_if_leaf<S: Sink>(&self, cur: &Cursor, sink: &mut S) -> bool {
        if self.length != Some(cur.chosen.len()) {
            return false;
        }
        if let Some(c) = self.custom {
            if !(c.accept)(&self.to_sequence(&cur.chosen)) {
                return true;
            }
        }
        sink.leaf(&cur.chosen);
        true
    }

    /// Explores all admissible extensions of the current node.
    fn dfs<S: Sink>(&self, cur: &mut Cursor, sink: &mut S, stop_depth: Option<usize>) -> Result<()> {
        self.count_node()?;
        let depth = cur.chosen.len();
        sink.node(depth);
        if self.emit_if_leaf(cur, sink) {
            return Ok(());
        }
        if stop_depth == Some(depth) {
            sink.leaf(&cur.chosen);
            return Ok(());
        }
        let start = cur.chosen.last().map_or(0, |&g| g as usize);
        if self.forced_zero_sum && self.length == Some(depth + 1) {
            let g = self.neg[cur.sums[depth] as usize] as usize;
            if g >= start && self.admissible_final(cur, g) {
                self.push(cur, g);
                if self.is_canonical(&cur.counts) {
                    self.dfs(cur, sink, stop_depth)?;
                }
                self.pop(cur);
            }
            return Ok(());
        }
        for g in start..self.size {
            if !self.admissible(cur, g) {
                continue;
            }
            self.push(cur, g);
            if self.is_canonical(&cur.counts) {
                self.dfs(cur, sink, stop_depth)?;
            }
            self.pop(cur);
        }
        Ok(())
    }

    /// The forced last term of a zero-sum search. For minimal zero-sums the
    /// prefix is zero-sum free, which already makes the completion minimal.
    fn admissible_final(&self, cur: &Cursor, g: usize) -> bool {
        match self.prune {
            Prune::ZeroSumFree => true,
            _ => self.admissible(cur, g),
        }
    }

    fn to_sequence(&self, chosen: &[u16]) -> Sequence {
        Sequence::from_terms(self.group, chosen.iter().map(|&i| self.elems[i as usize])).expect("indices are valid")
    }

    fn replay(&self, prefix: &[u16]) -> Cursor {
        let mut cur = self.cursor();
        for &g in prefix {
            self.push(&mut cur, g as usize);
        }
        cur
    }

    /// Runs the search, fanning out below `split` over the rayon pool.
    fn run<S, F>(&self, split: usize, make_sink: F) -> Result<Vec<S>>
    where
        S: Sink + Send,
        F: Fn() -> S + Sync,
    {
        let split = match self.length {
            Some(len) if len <= split => None,
            _ => Some(split),
        };
        let Some(split) = split else {
            let mut sink = make_sink();
            self.dfs(&mut self.cursor(), &mut sink, None)?;
            return Ok(vec![sink]);
        };
        // Frontier: canonical admissible prefixes of length `split`, with
        // the shallower levels recorded in a profile sink of their own.
        struct Frontier<S> {
            prefixes: Vec<Vec<u16>>,
            shallow: S,
            split: usize,
        }
        impl<S: Sink> Sink for Frontier<S> {
            fn node(&mut self, depth: usize) {
                if depth < self.split {
                    self.shallow.node(depth);
                }
            }
            fn leaf(&mut self, chosen: &[u16]) {
                if chosen.len() == self.split {
                    self.prefixes.push(chosen.to_vec());
                } else {
                    self.shallow.leaf(chosen);
                }
            }
        }
        let mut frontier = Frontier { prefixes: Vec::new(), shallow: make_sink(), split };
        self.dfs(&mut self.cursor(), &mut frontier, Some(split))?;
        let mut out = vec![frontier.shallow];
        let units: Result<Vec<S>> = frontier
            .prefixes
            .par_iter()
            .map(|prefix| {
                let mut cur = self.replay(prefix);
                let mut sink = make_sink();
                // the frontier pass already counted this node
                self.nodes.fetch_sub(1, Ordering::Relaxed);
                self.dfs(&mut cur, &mut sink, None)?;
                Ok(sink)
            })
            .collect();
        out.extend(units?);
        Ok(out)
    }
}

/// All sequences of `spec.length` terms satisfying the predicate (one per
/// `Aut(G)`-orbit when `up_to_symmetry`), in increasing order.
pub fn enumerate(spec: &EnumSpec, opts: &SearchOptions) -> Result<Vec<Sequence>> {
    opts.budget.check_modulus(spec.group, ENUMERATE_MAX_MODULUS, "enumeration")?;
    if spec.length == 0 {
        let empty = Sequence::empty(spec.group);
        return Ok(if spec.predicate.accepts(&empty) { vec![empty] } else { Vec::new() });
    }
    if let (Some(cache), Some(key)) = (&opts.cache, spec.cache_key()) {
        if let Some(hit) = cache.load_sequences(&key)? {
            return Ok(hit);
        }
    }
    let auts = spec.up_to_symmetry.then(|| automorphisms(spec.group));
    let engine = Engine::new(
        spec.group,
        Some(spec.length),
        &spec.predicate,
        spec.up_to_symmetry,
        auts.as_deref(),
        opts.budget.max_nodes,
    );
    let sinks = engine.run(opts.split_depth, || Collect(Vec::new()))?;
    let out: Vec<Sequence> = sinks.into_iter().flat_map(|s| s.0).map(|c| engine.to_sequence(&c)).collect();
    if let (Some(cache), Some(key)) = (&opts.cache, spec.cache_key()) {
        cache.store_sequences(&key, &out)?;
    }
    Ok(out)
}

/// Number of admissible (canonical, when `up_to_symmetry`) nodes at each
/// depth of the search tree of a prefix-closed predicate. The tree is
/// explored until it dies out; `max_depth` bounds it.
pub fn level_profile(
    group: GroupSpec,
    predicate: &Predicate,
    up_to_symmetry: bool,
    max_depth: usize,
    opts: &SearchOptions,
) -> Result<Vec<u64>> {
    if !matches!(predicate, Predicate::ZeroSumFree | Predicate::NoShortZeroSum(_)) {
        return Err(Error::InvalidArgument(format!(
            "level profiles need a prefix-closed predicate, got {}",
            predicate.name()
        )));
    }
    let key = format!(
        "profile-n{}-{}-{}-max{}-{}",
        group.modulus(),
        predicate.name(),
        if up_to_symmetry { "orbits" } else { "all" },
        max_depth,
        CODE_VERSION
    );
    if let Some(cache) = &opts.cache {
        if let Some(hit) = cache.load_profile(&key)? {
            return Ok(hit);
        }
    }
    let auts = up_to_symmetry.then(|| automorphisms(group));
    let engine =
        Engine::new(group, Some(max_depth + 1), predicate, up_to_symmetry, auts.as_deref(), opts.budget.max_nodes);
    let sinks = engine.run(opts.split_depth, || Profile(Vec::new()))?;
    let mut profile: Vec<u64> = Vec::new();
    for s in sinks {
        if profile.len() < s.0.len() {
            profile.resize(s.0.len(), 0);
        }
        for (d, c) in s.0.into_iter().enumerate() {
            profile[d] += c;
        }
    }
    if profile.len() > max_depth + 1 {
        return Err(Error::BudgetExceeded(format!("search tree is deeper than {max_depth}")));
    }
    if let Some(cache) = &opts.cache {
        cache.store_profile(&key, &profile)?;
    }
    Ok(profile)
}

/// Default exhaustive bound for [`davenport`].
pub const DAVENPORT_MAX_MODULUS: u32 = 7;
/// Default exhaustive bound for [`s_leq`].
pub const SLEQ_MAX_MODULUS: u32 = 5;

/// `D(G)`: one more than the longest zero-sum free sequence.
pub fn davenport(group: GroupSpec, opts: &SearchOptions) -> Result<usize> {
    opts.budget.check_modulus(group, DAVENPORT_MAX_MODULUS, "davenport")?;
    // |S| <= |G| - 1 for zero-sum free S (the partial sums of any ordering
    // are distinct and nonzero), which bounds the depth.
    let profile = level_profile(group, &Predicate::ZeroSumFree, true, group.size(), opts)?;
    Ok(profile.len())
}

/// `s_{<=k}(G)`: one more than the longest sequence with `0 ∉ Σ_{<=k}(S)`.
pub fn s_leq(group: GroupSpec, k: u32, opts: &SearchOptions) -> Result<usize> {
    opts.budget.check_modulus(group, SLEQ_MAX_MODULUS, "s_leq")?;
    if k < group.modulus() {
        return Err(Error::InvalidArgument(format!(
            "s_<=k is infinite for k={k} < N={}: e1^[l] has no zero-sum of length <= k for every l",
            group.modulus()
        )));
    }
    // Every sequence of length |G| * k has a term of multiplicity >= k... of
    // order dividing N <= k, hence a short zero-sum; this bounds the depth.
    let max_depth = group.size() * k as usize;
    let profile = level_profile(group, &Predicate::NoShortZeroSum(k), true, max_depth, opts)?;
    Ok(profile.len())
}

/// All images of the given sequences under `Aut(G)`.
pub fn expand_orbits(seqs: &[Sequence]) -> std::collections::BTreeSet<Sequence> {
    let mut out = std::collections::BTreeSet::new();
    for s in seqs {
        for a in automorphisms(s.group()).iter() {
            out.insert(s.apply_hom(a));
        }
    }
    out
}
