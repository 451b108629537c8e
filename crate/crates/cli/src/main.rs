mod report;
mod run;
mod setlit;

use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "preimage", version, about = "Polynomials sharing preimages of compact sets")]
#[command(after_help = "Sets: points:re,im;re,im;…  circle:cx,cy,r[,r2,…]  segment:x1,y1,x2,y2  julia:<poly>\n\
Exit codes: 0 success, 1 validation failure, 2 usage error, 3 numerical non-convergence")]
pub struct Cli {
    #[command(subcommand)]
    pub cmd: Cmd,
    #[command(flatten)]
    pub opts: Opts,
}

#[derive(Args, Debug, Clone)]
pub struct Opts {
    /// Hausdorff tolerance for set identities.
    #[arg(long, global = true, default_value_t = 1e-8)]
    pub tol: f64,
    /// Seed for Julia-set sampling.
    #[arg(long, global = true, default_value_t = 7)]
    pub seed: u64,
    /// Julia sample count, or points per continuum for minimax and verify.
    #[arg(long, global = true)]
    pub samples: Option<usize>,
    /// Levels built by `chain`.
    #[arg(long, global = true, default_value_t = 3)]
    pub depth: usize,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Report `timing` as null so output is byte-reproducible.
    #[arg(long, global = true)]
    pub no_timing: bool,
    /// Work in floating point from the start instead of over Q(i).
    #[arg(long, global = true)]
    pub approx: bool,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    /// Point clouds as `cloud,re,im` rows (julia-compare, symmetry).
    Csv,
}

#[derive(Subcommand, Debug)]
pub enum Cmd {
    /// Maximal decomposition into indecomposable factors.
    Decompose {
        #[arg(allow_hyphen_values = true)]
        poly: String,
    },
    /// Greatest common right component.
    Gcrc {
        #[arg(allow_hyphen_values = true)]
        f1: String,
        #[arg(allow_hyphen_values = true)]
        f2: String,
    },
    /// Shared-preimage witness g1∘f1 = g2∘f2, and K3 when K1 and K2 are given.
    Classify {
        #[arg(allow_hyphen_values = true)]
        f1: String,
        #[arg(allow_hyphen_values = true)]
        f2: String,
        #[arg(long, requires = "k2")]
        k1: Option<String>,
        #[arg(long, requires = "k1")]
        k2: Option<String>,
    },
    /// Classify f1, f2 with f1⁻¹(T) = f2⁻¹(T).
    ClassifyTarget {
        #[arg(allow_hyphen_values = true)]
        f1: String,
        #[arg(allow_hyphen_values = true)]
        f2: String,
        #[arg(long)]
        set: String,
    },
    /// Classify f1, f2 with f1⁻¹(T) = f2⁻¹(T) = T.
    ClassifyInvariant {
        #[arg(allow_hyphen_values = true)]
        f1: String,
        #[arg(allow_hyphen_values = true)]
        f2: String,
        #[arg(long)]
        set: String,
    },
    /// μ with f1∘f2 = μ∘f2∘f1; with --t1/--t2 also the full Julia-set comparison.
    FindMu {
        #[arg(allow_hyphen_values = true)]
        f1: String,
        #[arg(allow_hyphen_values = true)]
        f2: String,
        #[arg(long, requires = "t2")]
        t1: Option<String>,
        #[arg(long, requires = "t1")]
        t2: Option<String>,
        #[arg(long, default_value_t = 0.05)]
        threshold: f64,
    },
    /// Hausdorff distance between sampled Julia sets.
    JuliaCompare {
        #[arg(allow_hyphen_values = true)]
        f1: String,
        #[arg(allow_hyphen_values = true)]
        f2: String,
        #[arg(long, default_value_t = 0.05)]
        threshold: f64,
    },
    /// Rotational symmetry group of a set.
    Symmetry { set: String },
    /// Best uniform approximation on a sampled set: monic of degree --degree,
    /// or of degree --m to the polynomial --phi.
    Minimax {
        #[arg(long)]
        set: String,
        #[arg(long, conflicts_with = "phi", required_unless_present = "phi")]
        degree: Option<usize>,
        #[arg(long, requires = "m", allow_hyphen_values = true)]
        phi: Option<String>,
        #[arg(long = "m")]
        m: Option<usize>,
    },
    /// Least-deviation composition laws.
    Verify {
        #[command(subcommand)]
        which: Verify,
    },
    /// Build the preimage chain from a pair and K1, K2.
    Chain {
        #[arg(allow_hyphen_values = true)]
        f1: String,
        #[arg(allow_hyphen_values = true)]
        f2: String,
        #[arg(long)]
        k1: String,
        #[arg(long)]
        k2: String,
    },
}

#[derive(Subcommand, Debug)]
pub enum Verify {
    /// The monic optimum of degree deg P on P⁻¹(R) is P.
    Thm21 {
        #[arg(long = "P", allow_hyphen_values = true)]
        p: String,
        #[arg(long)]
        set: String,
    },
    /// The monic optimum of degree m·deg P on P⁻¹(R) is the degree-m optimum on R composed with P.
    Thm22 {
        #[arg(long = "P", allow_hyphen_values = true)]
        p: String,
        #[arg(long)]
        set: String,
        #[arg(long = "m")]
        m: usize,
    },
    /// The best approximation to φ∘P on P⁻¹(R) is the one to φ on R composed with P.
    Thm23 {
        #[arg(long = "P", allow_hyphen_values = true)]
        p: String,
        #[arg(long)]
        set: String,
        #[arg(long, allow_hyphen_values = true)]
        phi: String,
        #[arg(long = "m")]
        m: usize,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (text, code) = run::dispatch(&cli);
    let mut out = std::io::stdout().lock();
    if out.write_all(text.as_bytes()).and_then(|_| out.flush()).is_err() {
        return ExitCode::from(1);
    }
    ExitCode::from(code)
}
