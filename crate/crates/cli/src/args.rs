use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use zerosum::perturbation::Lemma;

/// Exhaustive zero-sum checks over (Z/NZ)^2.
///
/// Results are printed as JSON on stdout. Exit status: 0 all checks
/// passed, 1 counterexample found, 2 usage or input error, 3 search budget
/// exceeded.
#[derive(Parser, Debug)]
#[command(name = "zerosum", version)]
pub struct Cli {
    /// Worker threads (default: all cores). Output does not depend on it.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,

    /// Human-readable output instead of JSON.
    #[arg(long, global = true)]
    pub pretty: bool,

    /// Write output to this file instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,

    /// Enumeration cache directory (default: $ZS_CACHE, else ./.zs-cache).
    #[arg(long, global = true)]
    pub cache_dir: Option<PathBuf>,

    /// Do not read or write the enumeration cache.
    #[arg(long, global = true)]
    pub no_cache: bool,

    #[command(flatten)]
    pub budget: BudgetArgs,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BudgetArgs {
    /// Replace the per-command bound on N for exhaustive searches.
    #[arg(long, global = true)]
    pub max_modulus: Option<u32>,

    /// Lift the per-command bound on N altogether.
    #[arg(long, global = true)]
    pub allow_large: bool,

    /// Abort any search that visits more tree nodes than this.
    #[arg(long, global = true)]
    pub max_nodes: Option<u64>,
}

#[derive(Subcommand, Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Davenport constant D((Z/NZ)^2).
    Davenport {
        #[arg(long)]
        n: u32,
    },
    /// s_<=k((Z/NZ)^2): least length forcing a zero-sum of length at most k.
    Sleq {
        #[arg(long)]
        n: u32,
        /// Defaults to N.
        #[arg(long)]
        k: Option<u32>,
    },
    /// List sequences of a given length satisfying a predicate.
    Enumerate {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        length: usize,
        #[arg(long, value_enum, default_value_t = PredicateArg::MinimalZeroSum)]
        predicate: PredicateArg,
        /// Length bound for the short-zero-sum predicates (default N-1).
        #[arg(long)]
        k: Option<u32>,
        /// List every sequence, not one per automorphism orbit.
        #[arg(long)]
        all: bool,
    },
    /// Item 1 / Item 2 witnesses of a zero-sum of length (2+s)N-1.
    Classify {
        #[arg(long)]
        n: u32,
        /// Sequence JSON file.
        #[arg(long)]
        file: PathBuf,
    },
    /// Build a sequence from a named family.
    #[command(subcommand)]
    Construct(Construct),
    /// Run a verification suite and emit a report.
    #[command(subcommand)]
    Verify(Verify),
    /// Rerun the suite recorded in a report and compare the results.
    Replay {
        /// Report JSON file.
        #[arg(long)]
        file: PathBuf,
    },
    #[command(subcommand)]
    Cache(CacheAction),
}

#[derive(Subcommand, Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Construct {
    /// e1^[aN]·e2^[bN-1]·(x e1 + e2)^[cN-1]·(x e1 + 2 e2).
    Exceptional {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        x: u32,
        #[arg(long, default_value_t = 1)]
        a: u32,
        #[arg(long, default_value_t = 1)]
        b: u32,
        #[arg(long, default_value_t = 1)]
        c: u32,
        /// Basis as `a1,b1,a2,b2` (default: the standard basis).
        #[arg(long, value_delimiter = ',', num_args = 4)]
        basis: Option<Vec<u32>>,
    },
}

#[derive(Subcommand, Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verify {
    /// Every minimal zero-sum of length 2N-1 has Property A.
    PropertyB {
        #[arg(long)]
        n: u32,
    },
    /// Every sequence of length 3N-3 without zero-sums of length <= N is
    /// three elements each repeated N-1 times.
    PropertyC {
        #[arg(long)]
        n: u32,
    },
    /// Classify every qualifying zero-sum of length (2+s)N-1.
    Casen {
        #[arg(long)]
        n: u32,
        #[arg(long, default_value_t = 1)]
        s: u32,
    },
    /// Exhaustive check of one perturbation lemma over (Z/mZ)^2.
    Perturbation {
        #[arg(long)]
        m: u32,
        #[arg(long)]
        lemma: Lemma,
    },
    /// Projections of long minimal zero-sums under multiplication by m on
    /// (Z/mnZ)^2.
    Propbfix {
        #[arg(long)]
        m: u32,
        #[arg(long)]
        n: u32,
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u8).range(1..=2))]
        item: u8,
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        #[arg(long, default_value_t = 0x5eed_0001)]
        seed: u64,
        /// Item 1: enumerate every orbit instead of sampling.
        #[arg(long)]
        exhaustive: bool,
    },
}

#[derive(Subcommand, Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CacheAction {
    /// Delete the cache directory.
    Purge,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PredicateArg {
    ZeroSumFree,
    MinimalZeroSum,
    NoShortZeroSum,
    ZeroSumNoShortZeroSum,
}

/// What a report records about its own invocation; enough to rerun it.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub command: Verify,
    pub budget: BudgetArgs,
}
