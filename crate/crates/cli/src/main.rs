use std::path::Path;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Result};
use clap::Parser;

use modspace_cli::commands::Session;
use modspace_cli::suites::{canonical_suite_name, run_suite, SUITE_NAMES};
use modspace_cli::workspace::Workspace;

/// Inspect finite-dimensional algebras and their module categories: simple
/// modules, two-sided ideals, closed and open subspace lattices, torsion
/// and localization, and graded constructions.
///
/// Commands are given as trailing words, several in one invocation when
/// separated by a lone `;` token, for example:
///
///     modspace describe KK
///     modspace localize complement q --algebra T2 ";" localize extend-restrict O_p
///
/// Named suites replay worked examples and seeded random properties:
///
///     modspace --suite gabriel-asymmetry --seed 7
#[derive(Parser)]
#[command(name = "modspace", version, verbatim_doc_comment)]
struct Cli {
    /// Emit machine-readable JSON records instead of human tables.
    #[arg(long)]
    json: bool,

    /// Seed for randomized suite instances.
    #[arg(long)]
    seed: Option<u64>,

    /// Algebra to load before running commands: a built-in name or a path
    /// to a definition file.  The last one becomes the session default.
    #[arg(long)]
    algebra: Vec<String>,

    /// Module file to load before running commands.
    #[arg(long)]
    module: Vec<String>,

    /// Degree bound for graded commands that accept one.
    #[arg(long)]
    bound: Option<usize>,

    /// Run a named verification suite; `list` enumerates them, `all` runs
    /// every suite in order.
    #[arg(long)]
    suite: Option<String>,

    /// Command words; separate multiple commands with a lone `;`.
    #[arg(trailing_var_arg = true, allow_hyphen_values = true)]
    rest: Vec<String>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(all_pass) => {
            if all_pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

/// Returns whether every assertion passed (always true in command mode,
/// where failures surface as errors instead).
fn dispatch(cli: Cli) -> Result<bool> {
    // Global flags may also trail the command words; lift them out before
    // the per-command parser sees them.
    let mut json = cli.json;
    let mut seed = cli.seed;
    let mut suite = cli.suite;
    let mut bound = cli.bound;
    let mut tokens: Vec<String> = Vec::new();
    let mut it = cli.rest.into_iter();
    while let Some(t) = it.next() {
        match t.as_str() {
            "--json" => json = true,
            "--seed" => {
                let v = it.next().ok_or_else(|| anyhow!("--seed needs a value"))?;
                seed = Some(v.parse().map_err(|_| anyhow!("--seed needs an integer, got {v:?}"))?);
            }
            "--suite" => {
                suite = Some(it.next().ok_or_else(|| anyhow!("--suite needs a name"))?);
            }
            "--bound" if suite.is_some() => {
                let v = it.next().ok_or_else(|| anyhow!("--bound needs a value"))?;
                bound = Some(v.parse().map_err(|_| anyhow!("--bound needs an integer, got {v:?}"))?);
            }
            _ => tokens.push(t),
        }
    }
    let _ = bound; // graded commands read their bound inline; suites fix their own

    if let Some(name) = suite {
        return run_suites(&name, seed.unwrap_or(0), json);
    }

    if tokens.is_empty() {
        bail!("no command given; try `modspace describe KK` or `modspace --suite list`");
    }

    let mut session = Session::new(Workspace::built_in());
    for spec in &cli.algebra {
        let name = load_named(&mut session, spec)?;
        session.default_algebra = Some(name);
    }
    for spec in &cli.module {
        load_named(&mut session, spec)?;
    }

    for group in tokens.split(|t| t == ";") {
        if group.is_empty() {
            continue;
        }
        let out = session.run(group)?;
        if json {
            println!("{}", serde_json::to_string(&out.json)?);
        } else {
            println!("{}", out.human);
        }
    }
    Ok(true)
}

/// Load an `--algebra`/`--module` argument: built-in names resolve to the
/// preloaded object, anything else is read as a file path.
fn load_named(session: &mut Session, spec: &str) -> Result<String> {
    if session.ws.has(spec) {
        return Ok(spec.to_string());
    }
    let (name, _) = session.ws.load_file(Path::new(spec), None)?;
    Ok(name)
}

fn run_suites(name: &str, seed: u64, json: bool) -> Result<bool> {
    if name == "list" {
        for s in SUITE_NAMES {
            println!("{s}");
        }
        return Ok(true);
    }
    let names: Vec<&str> = if name == "all" {
        SUITE_NAMES.to_vec()
    } else {
        vec![canonical_suite_name(name).ok_or_else(|| {
            anyhow!("unknown suite {name:?}; known: {}", SUITE_NAMES.join(", "))
        })?]
    };
    let mut all = true;
    for n in names {
        let report = run_suite(n, seed)?;
        if json {
            println!("{}", serde_json::to_string(&report.to_json())?);
        } else {
            println!("{}", report.human());
        }
        all &= report.all_pass();
    }
    Ok(all)
}
