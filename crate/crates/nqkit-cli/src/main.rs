use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use nqkit_cli::{run_text, Options};
use serde_json::json;

/// Verify homological vector fields and the geometric data around them.
///
/// Every command reads one JSON document (`"format": 1`). Exit status is
/// 0 when every check passes, 1 when a check fails and 2 on input errors.
#[derive(Parser)]
#[command(name = "nqkit", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// Input document.
    input: PathBuf,
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Maximal polynomial degree in base variables for primitive searches.
    #[arg(long, default_value_t = 2)]
    poly_cap: usize,
    /// Highest power for curvature traces.
    #[arg(long, default_value_t = 2)]
    kmax: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Identity checks.
    #[command(subcommand)]
    Check(CheckCmd),
    /// Constructions.
    #[command(subcommand)]
    Build(BuildCmd),
    /// Structure read off from Q.
    #[command(subcommand)]
    Extract(ExtractCmd),
    /// Classification of Maurer-Cartan elements.
    #[command(subcommand)]
    Classify(ClassifyCmd),
    /// Hamiltonian realizations.
    #[command(subcommand)]
    Realize(RealizeCmd),
    /// Check suites over several inputs at once.
    #[command(subcommand)]
    Suite(SuiteCmd),
    /// Tangent prolongation of a split Lie 2-algebroid.
    TangentProlong(Common),
    /// Search for a primitive of a Q-closed function.
    IsExact(Common),
}

#[derive(Subcommand)]
enum CheckCmd {
    /// Q^2 = 0.
    Q2(Common),
    /// Homotopy Jacobi identities of multibrackets.
    Linfty(Common),
    /// Split Lie 2-algebroid axioms.
    Lie2(Common),
    /// 3-term representation up to homotopy.
    Rep3(Common),
    /// Morphism of 3-term representations.
    Morphism(Common),
    /// [pi, pi] = 0.
    Poisson(Common),
    /// Compatibility [Q, pi] = 0.
    Pq(Common),
    /// Poisson-Weil compatibility.
    PoissonWeil(Common),
    /// Deformation of a PQ pair.
    Deformation(Common),
    /// Courant algebroid axioms.
    Courant(Common),
}

#[derive(Subcommand)]
enum BuildCmd {
    /// Q from multibrackets or split Lie 2-algebroid data.
    Q(Common),
    /// Adjoint representation up to homotopy.
    Adjoint(Common),
    /// Split symplectic Lie 2-algebroid of a Courant algebroid.
    SplitSymplectic(Common),
}

#[derive(Subcommand)]
enum ExtractCmd {
    /// Multibrackets from Q.
    Brackets(Common),
}

#[derive(Subcommand)]
enum ClassifyCmd {
    /// Homotopy type of a Maurer-Cartan element.
    Homotopy(Common),
}

#[derive(Subcommand)]
enum RealizeCmd {
    /// Cubic Hamiltonian of a quadratic Lie algebra.
    CourantPoint(Common),
}

#[derive(Subcommand)]
enum SuiteCmd {
    /// Cartan calculus on the Weil algebra.
    Cartan(Common),
    /// Weil bicomplex.
    Bicomplex(Common),
}

fn resolve(c: Command) -> (&'static str, Common) {
    use BuildCmd as B;
    use CheckCmd as C;
    match c {
        Command::Check(C::Q2(a)) => ("check q2", a),
        Command::Check(C::Linfty(a)) => ("check linfty", a),
        Command::Check(C::Lie2(a)) => ("check lie2", a),
        Command::Check(C::Rep3(a)) => ("check rep3", a),
        Command::Check(C::Morphism(a)) => ("check morphism", a),
        Command::Check(C::Poisson(a)) => ("check poisson", a),
        Command::Check(C::Pq(a)) => ("check pq", a),
        Command::Check(C::PoissonWeil(a)) => ("check poisson-weil", a),
        Command::Check(C::Deformation(a)) => ("check deformation", a),
        Command::Check(C::Courant(a)) => ("check courant", a),
        Command::Build(B::Q(a)) => ("build q", a),
        Command::Build(B::Adjoint(a)) => ("build adjoint", a),
        Command::Build(B::SplitSymplectic(a)) => ("build split-symplectic", a),
        Command::Extract(ExtractCmd::Brackets(a)) => ("extract brackets", a),
        Command::Classify(ClassifyCmd::Homotopy(a)) => ("classify homotopy", a),
        Command::Realize(RealizeCmd::CourantPoint(a)) => ("realize courant-point", a),
        Command::Suite(SuiteCmd::Cartan(a)) => ("suite cartan", a),
        Command::Suite(SuiteCmd::Bicomplex(a)) => ("suite bicomplex", a),
        Command::TangentProlong(a) => ("tangent-prolong", a),
        Command::IsExact(a) => ("is-exact", a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (name, common) = resolve(cli.command);
    let opts = Options { poly_cap: common.poly_cap, kmax: common.kmax };
    let result = std::fs::read_to_string(&common.input)
        .map_err(|e| nqkit_cli::DocError { path: common.input.display().to_string(), message: e.to_string() })
        .and_then(|text| run_text(name, &text, &opts));
    match result {
        Ok(out) => {
            let text = if common.json { format!("{:#}\n", out.to_json(name)) } else { out.to_text(name) };
            // a closed pipe is not an error worth reporting
            let _ = std::io::stdout().write_all(text.as_bytes());
            if out.passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            if common.json {
                let v = json!({"format": 1, "command": name, "status": "error", "error": {"path": e.path, "message": e.message}});
                let _ = writeln!(std::io::stdout(), "{v:#}");
            }
            eprintln!("error at {e}");
            ExitCode::from(2)
        }
    }
}
