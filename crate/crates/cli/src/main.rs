//! `blockalg`: batch front end over the library.
//!
//! Exit codes: 0 success, 1 negative decision or suite failure, 2 usage,
//! parse or specification error.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Deserialize;

use blockalg::derivations::Undefined;
use blockalg::harness::{self, Ctx, Fault, SuiteParams, SuiteReport};
use blockalg::isomorphism::{decide_iso, moduli_key, psi_apply};
use blockalg::syntax::{parse_derivation, parse_element};
use blockalg::{AlgebraSpec, GroupTag, IsoParams, JKind, JSpec, Lattice, Rat, Vec2};

#[derive(Parser, Debug)]
#[command(name = "blockalg", version, about = "Exact arithmetic in the algebras B(Γ, J)")]
struct Cli {
    /// Algebra specification file (JSON).
    #[arg(long, global = true)]
    spec: Option<PathBuf>,
    /// RNG seed; required by randomized commands.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true)]
    trials: Option<usize>,
    /// Lattice-coefficient box of the window.
    #[arg(long = "K", global = true, default_value_t = 2)]
    k: u32,
    /// Level cap of the window.
    #[arg(long = "L", global = true, default_value_t = 3)]
    l: u32,
    #[arg(long, global = true, default_value_t = 6)]
    depth: u32,
    /// Treat derivations undefined in this algebra as zero.
    #[arg(long, global = true)]
    permissive_zero: bool,
    /// Also write the result to this file (JSON for reports).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, hide = true)]
    inject_fault: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Bracket of two elements.
    Bracket {
        #[arg(allow_hyphen_values = true)]
        a: String,
        #[arg(allow_hyphen_values = true)]
        b: String,
    },
    /// Apply a derivation literal to an element.
    ApplyDer {
        #[arg(long, allow_hyphen_values = true)]
        der: String,
        #[arg(allow_hyphen_values = true)]
        elem: String,
    },
    /// Reduce raw terms of the associative algebra to the Lie algebra.
    Reduce {
        #[arg(allow_hyphen_values = true)]
        elem: String,
    },
    #[command(subcommand)]
    Iso(IsoCommand),
    /// Run a verification suite.
    Check { suite: String },
    /// Canonical descriptor of Γ under a shear-scale group.
    Canon {
        #[arg(long, value_enum, default_value = "g1")]
        group: Group,
    },
    /// List the basis symbols of the window.
    Enumerate,
}

#[derive(Subcommand, Debug)]
enum IsoCommand {
    /// Decide whether --spec and --target are isomorphic.
    Decide {
        #[arg(long)]
        target: PathBuf,
    },
    /// Apply the explicit isomorphism with parameters (a, b).
    Apply {
        #[arg(long)]
        target: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        #[arg(long, allow_hyphen_values = true, default_value = "0")]
        b: String,
        #[arg(allow_hyphen_values = true)]
        elem: String,
    },
    /// Point of the structure space.
    Key,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Group {
    #[value(name = "G1", alias = "g1")]
    G1,
    #[value(name = "G2", alias = "g2")]
    G2,
}

#[derive(Deserialize)]
struct GammaFile {
    generators: Vec<Vec2>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SpecFile {
    gamma: GammaFile,
    #[serde(rename = "J")]
    j: [JKind; 2],
    #[serde(default = "auto")]
    mode: String,
}

fn auto() -> String {
    "auto".to_string()
}

/// An error carrying its exit code.
struct Fail(u8, String);

impl From<blockalg::Error> for Fail {
    fn from(e: blockalg::Error) -> Fail {
        Fail(2, e.to_string())
    }
}

fn load_spec(path: &Path) -> Result<AlgebraSpec, Fail> {
    let text = fs::read_to_string(path).map_err(|e| Fail(2, format!("{}: {e}", path.display())))?;
    let file: SpecFile =
        serde_json::from_str(&text).map_err(|e| Fail(2, format!("{}: {e}", path.display())))?;
    if file.mode != "auto" {
        return Err(Fail(2, format!("{}: unsupported mode {:?}", path.display(), file.mode)));
    }
    let spec = AlgebraSpec::new(Lattice::new(file.gamma.generators), JSpec::new(file.j[0], file.j[1]))?;
    if spec.witt_degenerate() {
        eprintln!("warning: π₂(Γ) = J₂ = {{0}}; this is a generalized Witt algebra outside the classification");
    }
    Ok(spec)
}

fn parse_rat(s: &str) -> Result<Rat, Fail> {
    s.parse::<Rat>().map_err(|e| Fail(2, format!("bad rational {s:?}: {e}")))
}

struct Output {
    text: String,
    file: Option<String>,
    code: u8,
}

impl Output {
    fn ok(text: String) -> Output {
        Output { file: None, text, code: 0 }
    }
}

fn report_output(report: SuiteReport) -> Output {
    let code = if report.passed() { 0 } else { 1 };
    Output { text: report.to_string(), file: Some(report.to_json()), code }
}

fn run(cli: &Cli) -> Result<Output, Fail> {
    let spec = || -> Result<AlgebraSpec, Fail> {
        let path = cli.spec.as_deref().ok_or_else(|| Fail(2, "--spec is required".into()))?;
        load_spec(path)
    };
    let mode = if cli.permissive_zero { Undefined::Zero } else { Undefined::Reject };
    match &cli.command {
        Command::Bracket { a, b } => {
            let spec = spec()?;
            let (u, v) = (parse_element(a)?, parse_element(b)?);
            Ok(Output::ok(spec.checked_bracket(&u, &v)?.to_string()))
        }
        Command::ApplyDer { der, elem } => {
            let spec = spec()?;
            let d = parse_derivation(der)?.build(&spec, mode)?;
            Ok(Output::ok(d.apply(&spec, &parse_element(elem)?)?.to_string()))
        }
        Command::Reduce { elem } => {
            let spec = spec()?;
            Ok(Output::ok(spec.reduce(&parse_element(elem)?)?.to_string()))
        }
        Command::Iso(IsoCommand::Decide { target }) => {
            let (a, b) = (spec()?, load_spec(target)?);
            let verdict = decide_iso(&a, &b)?;
            let code = u8::from(!verdict.is_found());
            let json = serde_json::to_string_pretty(&verdict).expect("verdict serializes");
            Ok(Output { text: verdict.to_string(), file: Some(json), code })
        }
        Command::Iso(IsoCommand::Apply { target, a, b, elem }) => {
            let (sa, sb) = (spec()?, load_spec(target)?);
            let params = IsoParams::new(parse_rat(a)?, parse_rat(b)?)?;
            let u = parse_element(elem)?;
            sa.check_element(&u)?;
            Ok(Output::ok(psi_apply(&params, &sa, &sb, &u)?.to_string()))
        }
        Command::Iso(IsoCommand::Key) => Ok(Output::ok(moduli_key(&spec()?)?.to_string())),
        Command::Canon { group } => {
            let tag = match group {
                Group::G1 => GroupTag::G1,
                Group::G2 => GroupTag::G2,
            };
            Ok(Output::ok(spec()?.gamma().canonical_form(tag).to_string()))
        }
        Command::Enumerate => {
            let lines: Vec<String> =
                spec()?.enumerate_window(cli.k, cli.l).iter().map(ToString::to_string).collect();
            Ok(Output::ok(lines.join("\n")))
        }
        Command::Check { suite } => {
            const SUITES: [&str; 6] = ["jacobi", "bracket", "derivations", "iso", "simplicity", "locality"];
            if !SUITES.contains(&suite.as_str()) {
                return Err(Fail(2, format!("unknown suite {suite:?}; expected one of {}", SUITES.join(", "))));
            }
            let spec = spec()?;
            let seed = cli.seed.ok_or_else(|| Fail(2, "check requires an explicit --seed".into()))?;
            let default_trials = match suite.as_str() {
                "iso" => 20,
                "simplicity" => 10,
                "derivations" => 500,
                _ => 1000,
            };
            let p = SuiteParams {
                k: cli.k,
                l: cli.l,
                trials: cli.trials.unwrap_or(default_trials),
                seed,
                ..SuiteParams::default()
            };
            let fault = if cli.inject_fault { Fault::Corrupt } else { Fault::None };
            let ctx = Ctx::with_fault(&spec, fault);
            let report = match suite.as_str() {
                "jacobi" => harness::suite_jacobi(&ctx, &p),
                "bracket" => harness::suite_bracket_consistency(&ctx, &p),
                "derivations" => harness::suite_derivations(&ctx, &p),
                "iso" => harness::suite_iso(&ctx, &p),
                "simplicity" => harness::suite_simplicity(&ctx, &p, cli.depth),
                _ => harness::suite_locality(&ctx, &p),
            };
            Ok(report_output(report))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            println!("{}", out.text);
            if let Some(path) = &cli.out {
                let body = out.file.unwrap_or_else(|| out.text.clone());
                if let Err(e) = fs::write(path, body + "\n") {
                    eprintln!("error: {}: {e}", path.display());
                    return ExitCode::from(2);
                }
            }
            ExitCode::from(out.code)
        }
        Err(Fail(code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}
