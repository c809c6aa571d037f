//! `staralg`: load algebras and groups from JSON, run the analyses and print
//! reports.
//!
//! Exit codes: 0 success, 1 unreadable or unparsable input or bad arguments,
//! 2 input rejected by a validation or a failed check, 3 internal inconsistency.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;
use staralg::commutative::{export_finite, FiniteSets};
use staralg::group::{certify_group_theorem, FiniteGroup};
use staralg::report::coeff_pairs;
use staralg::rickart::{check_baer, check_weakly_rickart};
use staralg::spectral::{check_regular, check_sqrt, spectral_decompose};
use staralg::structure::{analyze, StructureReport};
use staralg::{CVector, CheckReport, Element, Error, StarAlgebra, C64};

#[derive(Parser, Debug)]
#[command(name = "staralg", version, about = "Analyse finite-dimensional *-algebras")]
struct Cli {
    /// Relative tolerance for rank decisions and certification.
    #[arg(long, global = true, default_value_t = 1e-9, value_parser = positive_tol)]
    tol: f64,
    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Output::Json)]
    output: Output,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Output {
    Json,
    Text,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Property {
    Rp,
    Baer,
    Regular,
    Sqrt,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Structure report of an algebra file.
    Analyze { file: PathBuf },
    /// Structure report of the group algebra of a group file.
    Group { file: PathBuf },
    /// Spectral decomposition of a normal element.
    Spectral {
        file: PathBuf,
        /// Coefficients as space-separated `re,im` pairs.
        #[arg(long, allow_hyphen_values = true)]
        element: String,
    },
    /// Sampled property check.
    Check {
        file: PathBuf,
        #[arg(long, value_enum)]
        property: Property,
        #[arg(long, default_value_t = 50)]
        samples: usize,
    },
    /// Associativity, involution and unit defects of an algebra file.
    Validate { file: PathBuf },
    /// Structure constants of the step-function algebra over `{0, …, n−1}`.
    ExportCommutative {
        #[arg(long)]
        points: usize,
    },
}

fn positive_tol(s: &str) -> Result<f64, String> {
    let t: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if t > 0.0 && t.is_finite() {
        Ok(t)
    } else {
        Err("tolerance must be a positive number".into())
    }
}

/// A failed command with its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Failure { code: 1, message: message.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Json(_) => 1,
            Error::InternalInconsistency(_) => 3,
            _ => 2,
        };
        Failure { code, message: e.to_string() }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn load_algebra(path: &Path) -> Result<Arc<StarAlgebra>, Failure> {
    let text = read(path)?;
    StarAlgebra::from_json(&text)
        .map(Arc::new)
        .map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn parse_element(alg: &Arc<StarAlgebra>, text: &str) -> Result<Element, Failure> {
    let mut coeffs = Vec::new();
    for pair in text.split_whitespace() {
        let (re, im) = pair.split_once(',').unwrap_or((pair, "0"));
        let re: f64 = re.trim().parse().map_err(|_| Failure::input(format!("bad coefficient {pair:?}")))?;
        let im: f64 = im.trim().parse().map_err(|_| Failure::input(format!("bad coefficient {pair:?}")))?;
        coeffs.push(C64::new(re, im));
    }
    Element::new(alg, CVector::from_vec(coeffs)).map_err(|e| Failure::input(e.to_string()))
}

fn emit<T: Serialize>(output: Output, value: &T, text: impl FnOnce() -> String) {
    match output {
        Output::Json => println!("{}", serde_json::to_string_pretty(value).expect("reports serialise")),
        Output::Text => print!("{}", text()),
    }
}

fn structure_text(r: &StructureReport) -> String {
    let mut s = format!(
        "dim {}\nunital {}\nproper {}\nhermitian {}\nsemisimple {} (radical dim {})\nweakly_rickart {}\nbaer {}\n",
        r.dim, r.unital, r.proper, r.hermitian, r.semisimple, r.radical_dim, r.weakly_rickart, r.baer
    );
    if r.baer {
        s += &format!("blocks {:?}\nabelian_dim {}\n", r.blocks, r.abelian_dim);
    }
    for (k, v) in &r.residuals {
        s += &format!("residual {k} {v:.3e}\n");
    }
    if let Some(w) = &r.proper_witness {
        s += &format!("witness {w}\n");
    }
    s
}

fn check_text(r: &CheckReport) -> String {
    format!(
        "{} {} (worst residual {:.3e}, seed {})\n",
        r.property,
        if r.pass { "pass" } else { "FAIL" },
        r.worst_residual,
        r.seed
    )
}

fn run(cli: &Cli) -> Result<(), Failure> {
    let (tol, seed, out) = (cli.tol, cli.seed, cli.output);
    match &cli.command {
        Command::Analyze { file } => {
            let alg = load_algebra(file)?;
            let r = analyze(&alg, tol, seed)?;
            emit(out, &r, || structure_text(&r));
        }
        Command::Group { file } => {
            let text = read(file)?;
            let g = FiniteGroup::from_json(&text).map_err(|e| match e {
                Error::Json(_) => Failure::input(format!("{}: {e}", file.display())),
                e => Failure::from(e),
            })?;
            let r = certify_group_theorem(&g, tol, seed)?;
            emit(out, &r, || format!("order {}\nclasses {}\n{}", g.order(), g.class_count(), structure_text(&r)));
        }
        Command::Spectral { file, element } => {
            let alg = load_algebra(file)?;
            let a = parse_element(&alg, element)?;
            let d = spectral_decompose(&a, tol)?;
            let residual = d.residual();
            let terms: Vec<_> = d
                .terms
                .iter()
                .map(|(l, p)| json!({"eigenvalue": [l.re, l.im], "projection": coeff_pairs(p.coeffs())}))
                .collect();
            let value = json!({"terms": terms, "residual": residual, "tol": tol});
            emit(out, &value, || {
                let mut s = String::new();
                for (l, _) in &d.terms {
                    s += &format!("eigenvalue {:.6} {:+.6}i\n", l.re, l.im);
                }
                s + &format!("residual {residual:.3e}\n")
            });
        }
        Command::Check { file, property, samples } => {
            let alg = load_algebra(file)?;
            let r = match property {
                Property::Rp => check_weakly_rickart(&alg, *samples, tol, seed),
                Property::Baer => check_baer(&alg, tol, seed),
                Property::Regular => check_regular(&alg, *samples, tol, seed),
                Property::Sqrt => check_sqrt(&alg, *samples, tol, seed),
            };
            emit(out, &r, || check_text(&r));
            if !r.pass {
                return Err(Failure { code: 2, message: format!("{} check failed", r.property) });
            }
        }
        Command::Validate { file } => {
            let alg = load_algebra(file)?;
            let r = alg.validate(tol);
            emit(out, &r, || {
                format!(
                    "dim {}\nassociativity {:.3e}\ninvolution {:.3e}\nunit {:.3e} (unital {})\n{}\n",
                    r.dim,
                    r.associativity_defect,
                    r.involution_defect,
                    r.unit_defect,
                    r.unital,
                    if r.passed { "valid" } else { "INVALID" }
                )
            });
            if !r.passed {
                return Err(Failure { code: 2, message: "validation failed".into() });
            }
        }
        Command::ExportCommutative { points } => {
            let backend = FiniteSets::new(*points)?;
            println!("{}", export_finite(&backend).to_json());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            // usage errors are input errors here; exit 2 is reserved for validation
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("staralg: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
