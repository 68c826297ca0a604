//! Command-line front end: model files, subcommands and report output.

mod model_file;

use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use kbgeo_core::algebra::{Model, VarSet};
use kbgeo_core::category::{check_duality, verify_cl_functoriality};
use kbgeo_core::equivalence::{
    check_automorphic_equivalence, check_informational_equivalence, check_isomorphic, EquivReport, PhiAutomorphism,
    Verdict,
};
use kbgeo_core::formula::{parse_formula, FormulaContext};
use kbgeo_core::lattice::generate_definable_algebra;
use kbgeo_core::report::{write_report, CheckReport, Format};
use kbgeo_core::semantics::{enumerate_points, val};
use kbgeo_core::Bounds;

pub use model_file::{load_model, parse_model, print_model, ModelFileError};

/// Environment variable overriding the point-space bound.
pub const MAX_POINTS_ENV: &str = "KBGEO_MAX_POINTS";

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_UNKNOWN: i32 = 2;
pub const EXIT_USAGE: i32 = 3;
pub const EXIT_INPUT: i32 = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum OutputFormat {
    #[default]
    Text,
    Machine,
}

impl From<OutputFormat> for Format {
    fn from(f: OutputFormat) -> Format {
        match f {
            OutputFormat::Text => Format::Text,
            OutputFormat::Machine => Format::Machine,
        }
    }
}

/// Defaults shared by every subcommand; flags override them per run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunConfig {
    pub n_max: usize,
    pub depth: usize,
    pub max_points: usize,
    pub with_equality: bool,
    pub format: OutputFormat,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            n_max: 2,
            depth: 2,
            max_points: 1_000_000,
            with_equality: true,
            format: OutputFormat::Text,
        }
    }
}

impl RunConfig {
    /// Defaults with `KBGEO_MAX_POINTS` applied when set.
    pub fn from_env() -> Result<Self, String> {
        let mut c = RunConfig::default();
        if let Ok(v) = std::env::var(MAX_POINTS_ENV) {
            c.max_points = v
                .parse()
                .ok()
                .filter(|&n: &usize| n > 0)
                .ok_or_else(|| format!("{MAX_POINTS_ENV} must be a positive integer, got `{v}`"))?;
        }
        Ok(c)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Iso,
    Lae,
    Info,
}

#[derive(Debug, Parser)]
#[command(
    name = "kbgeo",
    about = "Definable sets, closed filters and knowledge-base equivalence over finite models"
)]
struct Cli {
    /// Report format.
    #[arg(long, value_enum, global = true)]
    format: Option<OutputFormat>,
    /// Largest admissible affine space |H|^|X|.
    #[arg(long, global = true)]
    max_points: Option<usize>,
    /// Treat every model as having no equality predicate.
    #[arg(long, global = true)]
    no_equality: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the points satisfying a formula.
    Eval {
        model: String,
        #[arg(long)]
        vars: String,
        #[arg(long)]
        formula: String,
    },
    /// Print the closure of a point set and a formula defining it.
    Closure {
        model: String,
        #[arg(long)]
        vars: String,
        #[arg(long)]
        points: String,
    },
    /// Dump the definable algebra over a variable set.
    Lattice {
        model: String,
        #[arg(long)]
        vars: String,
    },
    /// Check the duality between description and content.
    Duality {
        model: String,
        #[arg(long)]
        max_vars: Option<usize>,
    },
    /// Check functoriality of Cl on depth-bounded substitutions.
    Functor {
        model: String,
        #[arg(long)]
        max_vars: Option<usize>,
        #[arg(long)]
        depth: Option<usize>,
    },
    /// Decide an equivalence between two models.
    Equiv {
        left: String,
        right: String,
        #[arg(long, value_enum, default_value = "info")]
        mode: Mode,
        /// `identity`, `swaprel P Q [R S ...]` or `renamevars x:y,...` (lae mode).
        #[arg(long)]
        phi: Option<String>,
        #[arg(long)]
        max_vars: Option<usize>,
        #[arg(long)]
        depth: Option<usize>,
    },
}

/// Exit code and output of one command.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn out(code: i32, stdout: String) -> Self {
        Outcome {
            code,
            stdout,
            stderr: String::new(),
        }
    }

    fn err(code: i32, stderr: String) -> Self {
        Outcome {
            code,
            stdout: String::new(),
            stderr,
        }
    }
}

struct Failure(i32, String);

impl From<ModelFileError> for Failure {
    fn from(e: ModelFileError) -> Self {
        Failure(EXIT_INPUT, e.to_string())
    }
}

impl From<kbgeo_core::Error> for Failure {
    fn from(e: kbgeo_core::Error) -> Self {
        Failure(EXIT_INPUT, e.to_string())
    }
}

fn positive(name: &str, v: usize) -> Result<usize, Failure> {
    if v == 0 {
        Err(Failure(EXIT_USAGE, format!("{name} must be positive")))
    } else {
        Ok(v)
    }
}

/// Runs one command line (`argv[0]` is the program name).
pub fn run_command(argv: &[String], config: &RunConfig) -> Outcome {
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
            let text = e.render().to_string();
            return if code == EXIT_PASS {
                Outcome::out(code, text)
            } else {
                Outcome::err(code, text)
            };
        }
    };
    let mut config = config.clone();
    if let Some(f) = cli.format {
        config.format = f;
    }
    if let Some(p) = cli.max_points {
        config.max_points = p;
    }
    if cli.no_equality {
        config.with_equality = false;
    }
    match run(cli.command, &config) {
        Ok(o) => o,
        Err(Failure(code, msg)) => Outcome::err(code, format!("error: {msg}\n")),
    }
}

fn bounds(config: &RunConfig) -> Result<Bounds, Failure> {
    Ok(Bounds {
        max_points: positive("max points", config.max_points)?,
        ..Bounds::default()
    })
}

fn model(path: &str, config: &RunConfig) -> Result<Arc<Model>, Failure> {
    let m = load_model(path)?;
    Ok(Arc::new(if config.with_equality {
        m
    } else {
        m.with_equality(false)
    }))
}

fn check_outcome(r: &CheckReport, config: &RunConfig) -> Outcome {
    let code = if r.passed() { EXIT_PASS } else { EXIT_FAIL };
    Outcome::out(
        code,
        String::from_utf8(write_report(r, config.format.into())).expect("utf-8 report"),
    )
}

fn equiv_outcome(r: &EquivReport, config: &RunConfig) -> Outcome {
    let code = match r.verdict {
        Verdict::EquivalentWitnessed => EXIT_PASS,
        Verdict::Inequivalent => EXIT_FAIL,
        Verdict::Unknown => EXIT_UNKNOWN,
    };
    Outcome::out(
        code,
        String::from_utf8(write_report(r, config.format.into())).expect("utf-8 report"),
    )
}

fn run(command: Command, config: &RunConfig) -> Result<Outcome, Failure> {
    let b = bounds(config)?;
    match command {
        Command::Eval {
            model: path,
            vars,
            formula,
        } => {
            let m = model(&path, config)?;
            let vars = VarSet::parse_list(&vars)?;
            let space = enumerate_points(&m, &vars, &b)?;
            let f = parse_formula(&formula, &FormulaContext::new(m.signature().clone(), vars))?;
            Ok(Outcome::out(
                EXIT_PASS,
                format!("{}\n", space.format_set(&val(&f, &space)?)),
            ))
        }
        Command::Closure {
            model: path,
            vars,
            points,
        } => {
            let m = model(&path, config)?;
            let alg = generate_definable_algebra(&m, &VarSet::parse_list(&vars)?, &b)?;
            let a = alg.space().parse_set(&points)?;
            let c = alg.closure(&a);
            let mut out = format!(
                "closure: {}\nwitness: {}\n",
                alg.space().format_set(c.points()),
                c.witness()
            );
            if !alg.saturated() {
                out += "note: clone capped; the closure is taken in a partial algebra\n";
            }
            Ok(Outcome::out(EXIT_PASS, out))
        }
        Command::Lattice { model: path, vars } => {
            let m = model(&path, config)?;
            let alg = generate_definable_algebra(&m, &VarSet::parse_list(&vars)?, &b)?;
            let space = alg.space();
            let mut out = format!(
                "vars: {}\npoints: {}\natoms: {}\nmembers: {}\nexact: {}\n",
                alg.vars(),
                space.len(),
                alg.atoms().len(),
                alg.size_text(),
                alg.saturated()
            );
            for (i, atom) in alg.atoms().iter().enumerate() {
                out += &format!(
                    "atom {i}: {} {} {} : {}\n",
                    atom.points().to_hex(),
                    atom.points().count(),
                    space.format_set(atom.points()),
                    atom.witness()
                );
            }
            match alg.members() {
                Ok(members) => {
                    for (i, mem) in members.iter().enumerate() {
                        let d = alg.definable(mem)?;
                        out += &format!(
                            "member {i}: {} {} {} : {}\n",
                            mem.to_hex(),
                            mem.count(),
                            space.format_set(mem),
                            d.witness()
                        );
                    }
                }
                Err(e) => out += &format!("note: members not listed: {e}\n"),
            }
            Ok(Outcome::out(EXIT_PASS, out))
        }
        Command::Duality { model: path, max_vars } => {
            let m = model(&path, config)?;
            let n = positive("--max-vars", max_vars.unwrap_or(config.n_max))?;
            Ok(check_outcome(&check_duality(&m, n, &b)?, config))
        }
        Command::Functor {
            model: path,
            max_vars,
            depth,
        } => {
            let m = model(&path, config)?;
            let n = positive("--max-vars", max_vars.unwrap_or(config.n_max))?;
            let d = depth.unwrap_or(config.depth);
            Ok(check_outcome(&verify_cl_functoriality(&m, d, n, &b)?, config))
        }
        Command::Equiv {
            left,
            right,
            mode,
            phi,
            max_vars,
            depth,
        } => {
            let (m1, m2) = (model(&left, config)?, model(&right, config)?);
            let n = positive("--max-vars", max_vars.unwrap_or(config.n_max))?;
            let d = depth.unwrap_or(config.depth);
            if phi.is_some() && mode != Mode::Lae {
                return Err(Failure(EXIT_USAGE, "--phi applies to --mode lae only".into()));
            }
            let report = match mode {
                Mode::Iso => check_isomorphic(&m1, &m2)?,
                Mode::Lae => {
                    let phi = match phi {
                        Some(spec) => PhiAutomorphism::parse(&spec).map_err(|e| Failure(EXIT_USAGE, e.to_string()))?,
                        None => PhiAutomorphism::identity(),
                    };
                    check_automorphic_equivalence(&m1, &m2, &phi, n, d, &b)?
                }
                Mode::Info => check_informational_equivalence(&m1, &m2, n, d, &b)?,
            };
            Ok(equiv_outcome(&report, config))
        }
    }
}
