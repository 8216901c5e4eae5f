mod args;
mod render;

use std::path::Path;
use std::process::ExitCode;

use clap::Parser;
use serde_json::{json, Value};
use zerosum::classification::{classify_long_zero_sum, construct_exceptional, verify_casen};
use zerosum::enumeration::{davenport, enumerate, s_leq, Cache, EnumSpec, Predicate, SearchBudget, SearchOptions};
use zerosum::io::{parse_report_str, parse_sequence_file};
use zerosum::lifting::{verify_propbfix_item1, verify_propbfix_item2, PropbfixConfig};
use zerosum::perturbation::verify_perturbation;
use zerosum::properties::{verify_property_b, verify_property_c};
use zerosum::{Error, GroupSpec, Report, Result};

use args::{BudgetArgs, CacheAction, Cli, Command, Construct, PredicateArg, RunConfig, Verify};

const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_BUDGET: u8 = 3;

/// What a command prints, and whether it found a counterexample.
struct Emit {
    json: Value,
    text: String,
    failed: bool,
}

impl Emit {
    fn ok(json: Value, text: String) -> Self {
        Emit { json, text, failed: false }
    }

    fn report(r: &Report) -> Self {
        Emit { json: serde_json::to_value(r).expect("reports serialize"), text: render::report(r), failed: !r.passed() }
    }
}

fn budget(b: &BudgetArgs) -> SearchBudget {
    let mut out = SearchBudget { max_modulus: b.max_modulus, allow_large: b.allow_large, ..Default::default() };
    if let Some(nodes) = b.max_nodes {
        out.max_nodes = nodes;
    }
    out
}

fn options(cli: &Cli, b: &BudgetArgs) -> SearchOptions {
    let cache = (!cli.no_cache).then(|| cli.cache_dir.clone().map_or_else(Cache::from_env, Cache::new));
    SearchOptions { budget: budget(b), cache, ..Default::default() }
}

fn group(n: u32) -> Result<GroupSpec> {
    GroupSpec::new(n)
}

fn verify(check: &Verify, b: &BudgetArgs, opts: &SearchOptions) -> Result<Report> {
    let mut report = match *check {
        Verify::PropertyB { n } => verify_property_b(group(n)?, opts)?,
        Verify::PropertyC { n } => verify_property_c(group(n)?, opts)?,
        Verify::Casen { n, s } => verify_casen(group(n)?, s, opts)?,
        Verify::Perturbation { m, lemma } => verify_perturbation(m, lemma, &opts.budget)?,
        Verify::Propbfix { m, n, item, samples, seed, exhaustive } => {
            let cfg = PropbfixConfig { samples, seed, exhaustive, budget: opts.budget.clone() };
            if item == 1 {
                verify_propbfix_item1(m, n, &cfg)?
            } else {
                verify_propbfix_item2(m, n, &cfg)?
            }
        }
    };
    let config = RunConfig { command: check.clone(), budget: b.clone() };
    report.config = Some(serde_json::to_value(config).expect("config serializes"));
    Ok(report)
}

fn predicate(p: PredicateArg, k: u32) -> Predicate {
    match p {
        PredicateArg::ZeroSumFree => Predicate::ZeroSumFree,
        PredicateArg::MinimalZeroSum => Predicate::MinimalZeroSum,
        PredicateArg::NoShortZeroSum => Predicate::NoShortZeroSum(k),
        PredicateArg::ZeroSumNoShortZeroSum => Predicate::ZeroSumNoShortZeroSum(k),
    }
}

fn replay(path: &Path, cli: &Cli) -> Result<Emit> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    let old = parse_report_str(&text)?;
    let config = old.config.clone().ok_or_else(|| Error::InvalidArgument("report has no embedded config".into()))?;
    let config: RunConfig =
        serde_json::from_value(config).map_err(|e| Error::Schema { field: "config".into(), message: e.to_string() })?;
    let new = verify(&config.command, &config.budget, &options(cli, &config.budget))?;
    let identical = new.to_canonical_json() == old.to_canonical_json();
    let mut differing: Vec<&str> = Vec::new();
    let (a, b) = (serde_json::to_value(&old).expect("serializes"), serde_json::to_value(&new).expect("serializes"));
    for key in ["params", "orbits_scanned", "counterexamples", "status", "counts", "details"] {
        if a[key] != b[key] {
            differing.push(key);
        }
    }
    let text = if identical {
        format!("{}: identical\n", old.check)
    } else {
        format!("{}: differs in {}\n", old.check, differing.join(", "))
    };
    Ok(Emit {
        json: json!({ "check": old.check, "identical": identical, "differing": differing }),
        text,
        failed: !identical,
    })
}

fn run(cli: &Cli) -> Result<Emit> {
    let opts = options(cli, &cli.budget);
    Ok(match &cli.command {
        Command::Davenport { n } => {
            let d = davenport(group(*n)?, &opts)?;
            Emit::ok(json!(d), format!("D((Z/{n}Z)^2) = {d}\n"))
        }
        Command::Sleq { n, k } => {
            let k = k.unwrap_or(*n);
            let v = s_leq(group(*n)?, k, &opts)?;
            Emit::ok(json!(v), format!("s_<={k}((Z/{n}Z)^2) = {v}\n"))
        }
        Command::Enumerate { n, length, predicate: p, k, all } => {
            let g = group(*n)?;
            let pred = predicate(*p, k.unwrap_or(n - 1));
            opts.budget.check_modulus(g, zerosum::enumeration::ENUMERATE_MAX_MODULUS, "enumeration")?;
            let seqs = enumerate(&EnumSpec::new(g, *length, pred.clone(), !all), &opts)?;
            let text: String = seqs.iter().map(|s| format!("{s}\n")).collect();
            let json = json!({
                "n": n,
                "length": length,
                "predicate": pred.name(),
                "up_to_symmetry": !all,
                "count": seqs.len(),
                "sequences": seqs,
            });
            Emit::ok(json, format!("{text}{} sequences\n", seqs.len()))
        }
        Command::Classify { n, file } => {
            let s = parse_sequence_file(file)?;
            let outcome = classify_long_zero_sum(&s, *n)?;
            let text = format!(
                "{s}\nitem 1: {} witnesses\nitem 2: {} witnesses\n{}\n",
                outcome.item1.len(),
                outcome.item2.len(),
                serde_json::to_string_pretty(&outcome).expect("serializes")
            );
            let failed = !outcome.is_classified();
            Emit { json: serde_json::to_value(&outcome).expect("serializes"), text, failed }
        }
        Command::Construct(Construct::Exceptional { n, x, a, b, c, basis }) => {
            let g = group(*n)?;
            let basis = match basis.as_deref() {
                None => (g.e1(), g.e2()),
                Some(&[a1, b1, a2, b2]) => (g.elem(a1 as i64, b1 as i64), g.elem(a2 as i64, b2 as i64)),
                Some(_) => return Err(Error::InvalidArgument("--basis takes four integers".into())),
            };
            let s = construct_exceptional(g, *x, *a, *b, *c, basis)?;
            Emit::ok(serde_json::to_value(&s).expect("serializes"), format!("{s}\n"))
        }
        Command::Verify(check) => Emit::report(&verify(check, &cli.budget, &opts)?),
        Command::Replay { file } => replay(file, cli)?,
        Command::Cache(CacheAction::Purge) => {
            let cache = cli.cache_dir.clone().map_or_else(Cache::from_env, Cache::new);
            let purged = cache.purge()?;
            let dir = cache.dir().display().to_string();
            Emit::ok(
                json!({ "cache_dir": dir, "purged": purged }),
                format!("{} {dir}\n", if purged { "removed" } else { "no cache at" }),
            )
        }
    })
}

fn write(cli: &Cli, emit: &Emit) -> Result<()> {
    let body = if cli.pretty { emit.text.clone() } else { format!("{}\n", emit.json) };
    match &cli.output {
        Some(path) => std::fs::write(path, body).map_err(|e| Error::Io(format!("{}: {e}", path.display()))),
        None => {
            print!("{body}");
            Ok(())
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::BudgetExceeded(_) => EXIT_BUDGET,
        _ => EXIT_USAGE,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(cli.jobs.unwrap_or(0)).build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("zerosum: {e}");
            return ExitCode::from(EXIT_USAGE);
        }
    };
    let result = pool.install(|| run(&cli)).and_then(|emit| write(&cli, &emit).map(|()| emit.failed));
    match result {
        Ok(false) => ExitCode::SUCCESS,
        Ok(true) => ExitCode::from(EXIT_FAIL),
        Err(e) => {
            eprintln!("zerosum: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
