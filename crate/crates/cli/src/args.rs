use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

#[derive(Parser, Debug)]
#[command(
    name = "gaussent",
    version,
    about = "Gaussian entropy vectors, information inequalities, principal minor assignment and the three-variable Gaussian region"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// g-vector (1/T)·ln det of every principal block of a covariance
    Entropy(EntropyArgs),
    /// Basic (Shannon-type) inequalities on an entropy vector
    CheckShannon(ShannonArgs),
    /// Ingleton expression on a covariance, a g-vector or an ε/a family point
    CheckIngleton(IngletonArgs),
    /// Rasterized Ingleton-violation region of the ε/a family
    IngletonSweep(SweepArgs),
    /// Cayley hyperdeterminant of a 2×2×2 tensor or of a minor tensor
    Hyperdet(HyperdetArgs),
    /// Minimal conditions for a vector to be the principal minors of a symmetric matrix
    PmCheck(PmArgs),
    /// Symmetric matrix (first row positive) with the given principal minors
    PmReconstruct(PmArgs),
    /// Whether a g-vector is the entropy vector of scalar jointly Gaussian variables
    GaussEntropic(PmArgs),
    /// Three-variable Gaussian region tools
    #[command(subcommand)]
    Region3(Region3Command),
    /// Numerical maximizer of Σγ_s log det R_[s] with its structure diagnostics
    BoundaryOpt(BoundaryOptArgs),
}

#[derive(Subcommand, Debug)]
pub enum Region3Command {
    /// f(δ) profile: case, δ₀ and sup f, plus the (δ, f, y) grid
    Fprofile(FprofileArgs),
    /// Conjectured three-variable region verdict for a g-vector (CONJECTURAL)
    Classify(VectorArg),
    /// Cone scaling θ′ and boundary construction achieving p = e^g
    Achieve(AchieveArgs),
}

#[derive(Args, Debug)]
pub struct EntropyArgs {
    #[arg(long, value_name = "PATH")]
    pub matrix: PathBuf,
    /// Block size; overrides the file header
    #[arg(long = "T", value_name = "INT")]
    pub t: Option<usize>,
    /// Emit `subset,g` rows instead of JSON
    #[arg(long)]
    pub csv: bool,
}

#[derive(Args, Debug)]
pub struct ShannonArgs {
    /// Entropy vector (SubsetVector JSON)
    #[arg(long, value_name = "PATH", required_unless_present = "matrix", conflicts_with = "matrix")]
    pub vector: Option<PathBuf>,
    /// Covariance; its g-vector is checked
    #[arg(long, value_name = "PATH")]
    pub matrix: Option<PathBuf>,
    #[arg(long = "T", value_name = "INT")]
    pub t: Option<usize>,
    /// Submodularity only (the family valid for differential entropies)
    #[arg(long)]
    pub continuous: bool,
    #[arg(long, value_name = "FLOAT", default_value_t = 1e-10)]
    pub tol: f64,
}

#[derive(Args, Debug)]
pub struct IngletonArgs {
    #[arg(long, value_name = "PATH", group = "source")]
    pub matrix: Option<PathBuf>,
    /// g-vector (SubsetVector JSON)
    #[arg(long, value_name = "PATH", group = "source")]
    pub vector: Option<PathBuf>,
    /// ε of the family point (with --a)
    #[arg(long, value_name = "FLOAT", requires = "a", group = "source", allow_hyphen_values = true)]
    pub epsilon: Option<f64>,
    #[arg(long, value_name = "FLOAT", allow_hyphen_values = true)]
    pub a: Option<f64>,
    #[arg(long = "T", value_name = "INT")]
    pub t: Option<usize>,
    /// Four subsets s1;s2;s3;s4 such as "1;2;3;4" or "[1];[2];[3,5];[4]"
    #[arg(long, value_name = "SETS", default_value = "1;2;3;4")]
    pub sets: String,
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    /// Cells per axis
    #[arg(long, value_name = "INT", default_value_t = 200)]
    pub res: usize,
    /// PSD tolerance for the feasible/boundary/infeasible labels
    #[arg(long, value_name = "FLOAT", default_value_t = 1e-10)]
    pub tol: f64,
    /// Write the CSV here and print a JSON summary on stdout
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct HyperdetArgs {
    /// 2×2×2 tensor JSON
    #[arg(long, value_name = "PATH", group = "source")]
    pub tensor: Option<PathBuf>,
    /// 3×3 symmetric matrix; its minor tensor is used
    #[arg(long, value_name = "PATH", group = "source")]
    pub matrix: Option<PathBuf>,
    /// Principal-minor vector with n = 3
    #[arg(long, value_name = "PATH", group = "source")]
    pub vector: Option<PathBuf>,
    #[arg(long, value_name = "FLOAT", default_value_t = 1e-9)]
    pub tol: f64,
}

#[derive(Args, Debug)]
pub struct PmArgs {
    #[arg(long, value_name = "PATH")]
    pub vector: PathBuf,
    /// Relative residual tolerance (default 1e-9 for n ≤ 4, 1e-8 above)
    #[arg(long, value_name = "FLOAT")]
    pub tol: Option<f64>,
    /// Write the primary output (CSV for pm-reconstruct) here as well
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct FprofileArgs {
    /// x-triple "x1,x2,x3" in (0, 1]
    #[arg(long, value_name = "X", group = "source")]
    pub x: Option<String>,
    /// g-vector with n = 3; x_k = exp(g_ij − g_i − g_j)
    #[arg(long, value_name = "PATH", group = "source")]
    pub vector: Option<PathBuf>,
    /// Emit the `delta,f,y` grid as CSV on stdout
    #[arg(long)]
    pub csv: bool,
    /// Write the grid CSV here
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct VectorArg {
    #[arg(long, value_name = "PATH")]
    pub vector: PathBuf,
}

#[derive(Args, Debug)]
pub struct AchieveArgs {
    /// Exponentiated entropies p = e^g (SubsetVector JSON, n = 3)
    #[arg(long, value_name = "PATH")]
    pub vector: PathBuf,
    /// The file holds g; p = e^g is formed before solving
    #[arg(long)]
    pub from_g: bool,
}

#[derive(Args, Debug)]
pub struct BoundaryOptArgs {
    /// Balanced functional γ (SubsetVector JSON, n = 3)
    #[arg(long, value_name = "PATH")]
    pub vector: PathBuf,
    #[arg(long = "T", value_name = "INT", default_value_t = 3)]
    pub t: usize,
    #[arg(long, value_name = "INT", default_value_t = 0)]
    pub seed: u64,
    /// KKT residual at which an ascent stops
    #[arg(long, value_name = "FLOAT", default_value_t = 1e-9)]
    pub tol: f64,
    #[arg(long, value_name = "INT", default_value_t = 8)]
    pub restarts: usize,
    #[arg(long, value_name = "INT", default_value_t = 20000)]
    pub max_iter: usize,
}
