use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use hecke_core::kl::KlEngine;
use hecke_core::multiplicity::{Multiplicities, MultiplicityTable};
use hecke_core::params::{enumerate_enhanced, enumerate_multisegments, fixed_lambdas, is_gamma_fixed_lambda};
use hecke_core::verify::{criterion_with, Suite};
use hecke_core::whittaker::{compare_normalizations, verify_transformation_laws, Verdict};
use hecke_core::{Error, Point, Rational, Rho, WorkbenchConfig};

#[derive(Parser)]
#[command(name = "hecke", version, about = "Exact computations in twisted affine Hecke algebras of type A")]
struct Cli {
    /// Rank; checked against the length of `--lambda` when both are given.
    #[arg(long, global = true)]
    n: Option<usize>,
    /// Specialization of the Hecke parameter, a rational number greater than 1.
    #[arg(long, global = true, default_value = "3")]
    q: String,
    /// Modulus of the unit lines.
    #[arg(long = "modulus", global = true, default_value_t = 2)]
    modulus: u32,
    /// Largest standard-module dimension handed to the oracle.
    #[arg(long, global = true, default_value_t = 240)]
    oracle_threshold: usize,
    /// JSON list of `{"unit": k, "exp_x2": e}`, inline or as a file path.
    #[arg(long, global = true)]
    lambda: Option<String>,
    /// KL cache file.
    #[arg(long, global = true, env = "WORKBENCH_CACHE")]
    cache: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// List the parameters over `--lambda` in closure order, open orbit first.
    Enumerate {
        /// List enhanced parameters of the twisted algebra.
        #[arg(long)]
        twisted: bool,
    },
    /// Decomposition matrix of standard modules over `--lambda`.
    Table {
        #[arg(long)]
        twisted: bool,
    },
    /// Decomposition matrix for the twisted algebra.
    TwistedTable,
    /// Run the self-check suites.
    Verify {
        #[arg(value_enum, default_value_t = Scope::All)]
        scope: Scope,
    },
    /// Whittaker transformation laws and the comparison of the two γ-normalizations.
    WhittakerCheck,
}

#[derive(Clone, Copy, ValueEnum)]
enum Scope {
    Algebra,
    Whittaker,
    Multiplicity,
    All,
}

impl From<Scope> for Suite {
    fn from(s: Scope) -> Suite {
        match s {
            Scope::Algebra => Suite::Algebra,
            Scope::Whittaker => Suite::Whittaker,
            Scope::Multiplicity => Suite::Multiplicity,
            Scope::All => Suite::All,
        }
    }
}

enum Failure {
    Verification,
    Input(String),
    Range(String),
    Internal(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::OracleRequired { .. } | Error::RecipeUnvalidated(_) => Failure::Range(e.to_string()),
            Error::BadInput(_)
            | Error::BadSpecialization(_)
            | Error::DifferentInfinitesimal
            | Error::NotGammaFixed
            | Error::UnorderedSegments(_)
            | Error::RankMismatch(..) => Failure::Input(e.to_string()),
            _ => Failure::Internal(e.to_string()),
        }
    }
}

fn parse_q(s: &str) -> Result<Rational, Failure> {
    s.parse::<Rational>().map_err(|_| Failure::Input(format!("cannot parse q = {s}")))
}

fn parse_lambda(arg: &str) -> Result<Vec<Point>, Failure> {
    let text = if arg.trim_start().starts_with('[') {
        arg.to_string()
    } else {
        std::fs::read_to_string(arg).map_err(|e| Failure::Input(format!("{arg}: {e}")))?
    };
    let mut pts: Vec<Point> = serde_json::from_str(&text).map_err(|e| Failure::Input(format!("malformed lambda: {e}")))?;
    if pts.is_empty() {
        return Err(Failure::Input("lambda is empty".into()));
    }
    pts.sort();
    Ok(pts)
}

struct Context {
    config: WorkbenchConfig,
    lambda: Option<Vec<Point>>,
    format: Format,
}

impl Context {
    fn from_cli(cli: &Cli) -> Result<Self, Failure> {
        let lambda = cli.lambda.as_deref().map(parse_lambda).transpose()?;
        let n = match (cli.n, &lambda) {
            (Some(n), Some(l)) if n != l.len() => {
                return Err(Failure::Input(format!("--n {n} but lambda has {} points", l.len())));
            }
            (Some(n), _) => n,
            (None, Some(l)) => l.len(),
            (None, None) => WorkbenchConfig::default().n,
        };
        let config = WorkbenchConfig {
            n,
            q: parse_q(&cli.q)?,
            modulus: cli.modulus,
            oracle_threshold: cli.oracle_threshold,
            cache_path: cli.cache.clone(),
        };
        config.validate()?;
        if let Some(l) = &lambda {
            if let Some(p) = l.iter().find(|p| p.unit >= config.modulus) {
                return Err(Failure::Input(format!("unit {} is not below the modulus {}", p.unit, config.modulus)));
            }
        }
        Ok(Context { config, lambda, format: cli.format })
    }

    fn lambda(&self) -> Result<&[Point], Failure> {
        self.lambda.as_deref().ok_or_else(|| Failure::Input("--lambda is required".into()))
    }

    fn kl(&self) -> Result<Arc<KlEngine>, Failure> {
        let engine = match &self.config.cache_path {
            Some(p) => KlEngine::open(p).map_err(|e| Failure::Input(e.to_string()))?,
            None => KlEngine::in_memory(),
        };
        if engine.discarded_corrupt_cache() {
            eprintln!("warning: KL cache failed its checksum and was discarded");
        }
        Ok(Arc::new(engine))
    }

    fn save(&self, kl: &KlEngine) -> Result<(), Failure> {
        kl.save().map_err(|e| Failure::Internal(format!("saving the KL cache: {e}")))
    }
}

fn print_json(v: &impl serde::Serialize) {
    println!("{}", serde_json::to_string_pretty(v).expect("serializable output"));
}

fn emit_table(t: &MultiplicityTable, format: Format) {
    match format {
        Format::Json => print_json(t),
        Format::Csv => print!("{}", t.to_csv()),
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    let ctx = Context::from_cli(&cli)?;
    let cfg = &ctx.config;
    match cli.command {
        Command::Enumerate { twisted } => {
            let lambda = ctx.lambda()?;
            if twisted {
                let ps = enumerate_enhanced(lambda, cfg.modulus);
                match ctx.format {
                    Format::Json => print_json(&ps),
                    Format::Csv => ps.iter().for_each(|p| println!("{p}")),
                }
            } else {
                let ms = enumerate_multisegments(lambda);
                match ctx.format {
                    Format::Json => print_json(&ms),
                    Format::Csv => ms.iter().for_each(|m| println!("{m}")),
                }
            }
        }
        Command::Table { twisted } => table(&ctx, twisted)?,
        Command::TwistedTable => table(&ctx, true)?,
        Command::Verify { scope } => {
            let kl = ctx.kl()?;
            let checks: Vec<_> = Suite::from(scope).criteria().into_iter().map(|k| criterion_with(k, cfg, kl.clone())).collect();
            ctx.save(&kl)?;
            match ctx.format {
                Format::Json => print_json(&json!({ "passed": checks.iter().all(|c| c.passed), "checks": checks })),
                Format::Csv => {
                    println!("criterion,name,passed,checks,failures");
                    for c in &checks {
                        println!("{},{},{},{},{}", c.criterion, c.name, c.passed, c.checks, c.failures.len());
                    }
                }
            }
            if checks.iter().any(|c| !c.passed) {
                return Err(Failure::Verification);
            }
        }
        Command::WhittakerCheck => {
            let laws = verify_transformation_laws(cfg.n)?;
            let lambdas = match &ctx.lambda {
                Some(l) => vec![l.clone()],
                None => fixed_lambdas(cfg.n, cfg.modulus),
            };
            let mut comparisons = Vec::new();
            for l in lambdas.iter().filter(|l| is_gamma_fixed_lambda(l, cfg.modulus)) {
                for p in enumerate_enhanced(l, cfg.modulus).into_iter().filter(|p| p.rho == Rho::Trivial) {
                    comparisons.push(compare_normalizations(&p.m, &cfg.q, cfg.modulus)?);
                }
            }
            let ok = laws.passed() && comparisons.iter().all(|c| c.verdict == Verdict::Equal);
            match ctx.format {
                Format::Json => print_json(&json!({ "n": cfg.n, "laws": laws, "comparisons": comparisons })),
                Format::Csv => {
                    println!("parameter,verdict");
                    for c in &comparisons {
                        println!("\"{}\",{}", c.param, if c.verdict == Verdict::Equal { "EQUAL" } else { "DIFFER" });
                    }
                }
            }
            if !ok {
                return Err(Failure::Verification);
            }
        }
    }
    Ok(())
}

fn table(ctx: &Context, twisted: bool) -> Result<(), Failure> {
    let cfg = &ctx.config;
    let lambda = ctx.lambda()?;
    let kl = ctx.kl()?;
    let engine = Multiplicities::new(cfg.q.clone(), cfg.modulus, cfg.oracle_threshold, kl.clone());
    let result = engine.decomposition_matrix(lambda, twisted);
    ctx.save(&kl)?;
    emit_table(&result?, ctx.format);
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification) => ExitCode::from(1),
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Range(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
        Err(Failure::Internal(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
