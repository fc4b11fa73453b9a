//! `slidewin`: classify regular languages by sliding-window space, run the
//! window algorithms under Monte Carlo, and measure their space.
//!
//! Exit codes: 0 when every requested check passes, 1 when a check fails,
//! 2 for usage errors and unreadable inputs.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use slidewin::acceptance::{run_criterion, CRITERIA};
use slidewin::automata::{build_dfa, Alphabet, Dfa};
use slidewin::classify::{classify, extract_witness, ClassId};
use slidewin::harness::{
    estimate_errors, measure_space_growth, verify_bounds, Bound, BoundCheck, Execution, ProbeSet, StreamSpec,
    TrialConfig,
};
use slidewin::swa::{compile, LanguageSpec, Setting};

#[derive(Parser)]
#[command(
    name = "slidewin",
    version,
    about = "Sliding-window membership for regular languages"
)]
struct Cli {
    /// Worker threads for Monte Carlo trials (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide the five space classes and print the per-setting space table.
    Classify {
        #[command(flatten)]
        lang: LangArgs,
        /// Write the verdict (classes, settings, witnesses) as JSON.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compile a language spec, simulate it on a stream and check its bounds.
    Run {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long)]
        n: usize,
        /// `uniform:LEN[:SEED]`, `literal:WORD`, `repeat:BLOCK:COUNT`, joined
        /// with `+`, or `@file.json`.
        #[arg(long)]
        stream: String,
        #[arg(long, default_value_t = 1000)]
        trials: u64,
        /// Error threshold; defaults to the compiled algorithm's guarantee.
        #[arg(long)]
        eps: Option<f64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Write the trial report as JSON.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Write per-instant errors as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Measure observed maximum space over a range of window sizes.
    BenchSpace {
        #[command(flatten)]
        spec: SpecArgs,
        /// Powers of two, e.g. `2^4..2^20` or `16..1024`.
        #[arg(long, default_value = "2^4..2^16")]
        n_range: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Probe stream length as a multiple of n.
        #[arg(long, default_value_t = 8)]
        length_factor: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print and validate the witness for a class the language is not in.
    Witness {
        #[command(flatten)]
        lang: LangArgs,
        /// ST-Len, ST-SF-Len, LI-Len, LB-PF-SF-Len or LI-PF-Len.
        #[arg(long)]
        class: String,
        /// Largest exponent used in validation.
        #[arg(long, default_value_t = 5)]
        max_exp: usize,
    },
    /// Run the built-in acceptance suite.
    Verify {
        /// Run only these criteria (1-11).
        #[arg(long = "criterion")]
        criteria: Vec<u8>,
    },
}

#[derive(Args)]
struct LangArgs {
    /// DFA JSON file.
    #[arg(long, conflicts_with = "regex", required_unless_present = "regex")]
    lang: Option<PathBuf>,
    /// Regular expression (`|`, `*`, `+`, `?`, parentheses).
    #[arg(long)]
    regex: Option<String>,
    /// Alphabet for --regex, e.g. `abc`; inferred from the pattern if absent.
    #[arg(long, requires = "regex")]
    alphabet: Option<String>,
}

#[derive(Args)]
struct SpecArgs {
    /// Language spec JSON.
    #[arg(long)]
    spec: PathBuf,
    /// det-zero, rand-zero, det-failure=PHI or rand-failure=PHI: deterministic
    /// or randomized, with failure ratio zero or at most PHI.
    #[arg(long)]
    setting: String,
}

/// A failed check, as opposed to a usage error.
struct CheckFailed;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let execution = match cli.jobs {
        Some(j) => Execution::ParallelJobs(j.max(1)),
        None => Execution::Parallel,
    };
    match dispatch(cli.command, execution) {
        Ok(Ok(())) => ExitCode::SUCCESS,
        Ok(Err(CheckFailed)) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn dispatch(command: Command, execution: Execution) -> Result<Result<(), CheckFailed>> {
    match command {
        Command::Classify { lang, out } => classify_cmd(&lang, out.as_deref()),
        Command::Run {
            spec,
            n,
            stream,
            trials,
            eps,
            seed,
            out,
            csv,
        } => {
            let run = RunArgs {
                n,
                stream,
                trials,
                eps,
                seed,
                out,
                csv,
            };
            run_cmd(&spec, &run, execution)
        }
        Command::BenchSpace {
            spec,
            n_range,
            seed,
            length_factor,
            out,
        } => bench_space_cmd(&spec, &n_range, seed, length_factor, out.as_deref()),
        Command::Witness { lang, class, max_exp } => witness_cmd(&lang, &class, max_exp),
        Command::Verify { criteria } => verify_cmd(&criteria, execution),
    }
}

fn load_lang(args: &LangArgs) -> Result<Dfa> {
    match (&args.lang, &args.regex) {
        (Some(path), _) => Dfa::load(path).with_context(|| format!("loading {}", path.display())),
        (None, Some(r)) => {
            let alphabet = args.alphabet.as_deref().map(Alphabet::from_chars).transpose()?;
            build_dfa(r, alphabet.as_ref()).with_context(|| format!("parsing regex {r:?}"))
        }
        (None, None) => bail!("one of --lang or --regex is required"),
    }
}

fn write_out(path: Option<&Path>, text: &str) -> Result<()> {
    if let Some(p) = path {
        fs::write(p, text).with_context(|| format!("writing {}", p.display()))?;
    }
    Ok(())
}

fn classify_cmd(lang: &LangArgs, out: Option<&Path>) -> Result<Result<(), CheckFailed>> {
    let dfa = load_lang(lang)?;
    let verdict = classify(&dfa);
    print!("{}", verdict.table());
    for (class, w) in &verdict.witnesses {
        let parts: Vec<String> = w.components().iter().map(|(k, v)| format!("{k}={}", show(v))).collect();
        println!("witness {class}: {} {}", w.variant_name(), parts.join(" "));
    }
    write_out(out, &verdict.to_json())?;
    Ok(Ok(()))
}

fn show(word: &str) -> &str {
    if word.is_empty() {
        "ε"
    } else {
        word
    }
}

struct RunArgs {
    n: usize,
    stream: String,
    trials: u64,
    eps: Option<f64>,
    seed: u64,
    out: Option<PathBuf>,
    csv: Option<PathBuf>,
}

fn compile_spec(args: &SpecArgs) -> Result<slidewin::swa::Compiled> {
    let spec = LanguageSpec::load(&args.spec).with_context(|| format!("loading {}", args.spec.display()))?;
    let setting: Setting = args.setting.parse()?;
    Ok(compile(&spec, setting)?)
}

fn run_cmd(spec: &SpecArgs, args: &RunArgs, execution: Execution) -> Result<Result<(), CheckFailed>> {
    let compiled = compile_spec(spec)?;
    let truth = compiled.truth_dfa();
    let factory = compiled.factory(args.n)?;
    let stream = StreamSpec::from_arg(&args.stream)?.generate(truth.alphabet())?;
    let eps = args.eps.unwrap_or_else(|| compiled.error_threshold());
    let cfg = TrialConfig::new(args.trials, eps, args.seed).execution(execution);
    let report = estimate_errors(&factory, &truth, &stream, &cfg)?;

    let mut bounds = vec![Bound::Space(factory.info().space_bits_max)];
    bounds.push(match compiled.setting().phi() {
        Some(phi) => Bound::FailureRatio(phi),
        None => Bound::InstantError(eps),
    });
    let checks: Vec<BoundCheck> = bounds.into_iter().map(|b| verify_bounds(&report, b)).collect();

    println!("algorithm      {}", factory.info().algorithm);
    println!("n, m, trials   {}, {}, {}", report.n, report.m, report.trials);
    println!("max error      {:.4}", report.max_error());
    println!(
        "failure ratio  {:.4} at threshold {:.4}",
        report.failure_ratio, report.threshold
    );
    println!("strict error   {:.4}", report.strict_error);
    println!(
        "space (bits)   observed max {}, mean {:.1}",
        report.space_max, report.space_mean
    );
    for c in &checks {
        println!(
            "check {:<14} {} observed {:.4}, bound {:.4}, margin {:.4}",
            c.bound_kind,
            if c.pass { "PASS" } else { "FAIL" },
            c.observed,
            c.bound,
            c.margin
        );
    }
    if let Some(path) = &args.out {
        let doc = serde_json::json!({ "report": report, "checks": checks });
        write_out(Some(path), &serde_json::to_string_pretty(&doc)?)?;
    }
    if let Some(path) = &args.csv {
        let file = fs::File::create(path).with_context(|| format!("writing {}", path.display()))?;
        report.write_csv(file)?;
    }
    Ok(if checks.iter().all(|c| c.pass) {
        Ok(())
    } else {
        Err(CheckFailed)
    })
}

/// Parses `2^a..2^b` or `lo..hi` into the powers of two in between.
fn parse_range(s: &str) -> Result<Vec<usize>> {
    let (lo, hi) = s
        .split_once("..")
        .ok_or_else(|| anyhow!("range must look like 2^4..2^20, got {s:?}"))?;
    let bound = |t: &str| -> Result<usize> {
        let v = match t.trim().strip_prefix("2^") {
            Some(e) => 1usize
                .checked_shl(e.parse()?)
                .ok_or_else(|| anyhow!("exponent too large: {e}"))?,
            None => t.trim().parse()?,
        };
        if !v.is_power_of_two() {
            bail!("window sizes must be powers of two, got {v}");
        }
        Ok(v)
    };
    let (lo, hi) = (bound(lo)?, bound(hi)?);
    if lo > hi {
        bail!("empty range {s:?}");
    }
    Ok((lo.trailing_zeros()..=hi.trailing_zeros())
        .map(|e| 1usize << e)
        .collect())
}

fn bench_space_cmd(
    spec: &SpecArgs,
    range: &str,
    seed: u64,
    length_factor: usize,
    out: Option<&Path>,
) -> Result<Result<(), CheckFailed>> {
    let ns = parse_range(range)?;
    let compiled = compile_spec(spec)?;
    let truth = compiled.truth_dfa();
    let families = classify(&truth).witnesses.into_values().collect();
    let probes = ProbeSet::uniform(length_factor, 4, seed).with_families(families);
    let report = measure_space_growth(|n| compiled.factory(n), truth.alphabet(), &ns, &probes)?;
    println!("algorithm {}", report.algorithm);
    println!("{:>10} {:>14}", "n", "observed max");
    for (n, bits) in report.ns.iter().zip(&report.observed_max) {
        println!("{n:>10} {bits:>14}");
    }
    for f in &report.fits {
        println!(
            "fit {:<10} slope {:>10.4} intercept {:>10.4} sse {:>12.4} max residual {:.4}",
            f.shape.to_string(),
            f.slope,
            f.intercept,
            f.sse,
            f.max_residual
        );
    }
    println!("best fit {}", report.best);
    write_out(out, &report.to_json())?;
    Ok(Ok(()))
}

fn witness_cmd(lang: &LangArgs, class: &str, max_exp: usize) -> Result<Result<(), CheckFailed>> {
    let dfa = load_lang(lang)?;
    let id = ClassId::parse(class).ok_or_else(|| {
        let names: Vec<&str> = ClassId::ALL.iter().map(|c| c.name()).collect();
        anyhow!("unknown class {class:?}; expected one of {}", names.join(", "))
    })?;
    let w = match extract_witness(&dfa, id) {
        Ok(w) => w,
        Err(e) => {
            println!("{e}");
            return Ok(Err(CheckFailed));
        }
    };
    println!("{} for {id}", w.variant_name());
    for (name, word) in w.components() {
        println!("  {name:<3} = {}", show(word));
    }
    let report = w.validate(&dfa, max_exp);
    if let Some(e) = &report.shape_error {
        println!("shape constraint violated: {e}");
    }
    let failed: std::collections::BTreeSet<(String, bool)> =
        report.violations.iter().map(|o| (o.word.clone(), o.member)).collect();
    for o in w.obligations(max_exp) {
        let ok = !failed.contains(&(o.word.clone(), o.member));
        println!(
            "  {:<4} {} {}",
            if ok { "ok" } else { "FAIL" },
            if o.member { "in L    " } else { "not in L" },
            show(&o.word)
        );
    }
    println!("{} obligations, {} violated", report.checked, report.violations.len());
    Ok(if report.is_valid() { Ok(()) } else { Err(CheckFailed) })
}

fn verify_cmd(criteria: &[u8], execution: Execution) -> Result<Result<(), CheckFailed>> {
    let ids: Vec<u8> = if criteria.is_empty() {
        CRITERIA.iter().map(|c| c.0).collect()
    } else {
        criteria.to_vec()
    };
    let mut all = true;
    for id in ids {
        let r = run_criterion(id, execution).ok_or_else(|| anyhow!("no criterion {id}; valid ids are 1-11"))?;
        println!("{}", r.line());
        all &= r.pass;
    }
    Ok(if all { Ok(()) } else { Err(CheckFailed) })
}
