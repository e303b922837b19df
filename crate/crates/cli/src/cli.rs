//! Argument definitions and dispatch.

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::accept::{self, Suite};
use crate::commands::cox::{TargetArg, WeightSource};
use crate::commands::{cox, fan, forms, moment};
use crate::report::Report;
use crate::{CliError, Ctx, DEFAULT_SEED};

#[derive(Debug, Parser)]
#[command(
    name = "momentforge",
    version,
    about = "Exact toric/GIT checks and numerical momentum-map tools"
)]
pub struct Cli {
    /// Print the JSON report instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Seed for every randomized step (default 42).
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Comma-separated verdict words that must appear in the report.
    #[arg(long, global = true, value_delimiter = ',')]
    pub expect: Vec<String>,
    /// Run the independent second criterion where there is one.
    #[arg(long, global = true)]
    pub cross_check: bool,
    /// Skip the face-to-face check when parsing fans.
    #[arg(long, global = true)]
    pub trust_fan: bool,
    /// Include wall-clock timings in the report.
    #[arg(long, global = true)]
    pub timings: bool,
    #[command(subcommand)]
    pub cmd: Cmd,
}

#[derive(Debug, Subcommand)]
pub enum Cmd {
    /// Fan verdicts.
    #[command(subcommand)]
    Fan(FanCmd),
    /// Cox construction and torus GIT.
    #[command(subcommand)]
    Cox(CoxCmd),
    /// Momentum maps.
    #[command(subcommand)]
    Moment(MomentCmd),
    /// Complex Hessians, positivity scans and the Hamiltonian check.
    #[command(subcommand)]
    Forms(FormsCmd),
    /// Run the acceptance suite.
    Accept {
        #[arg(value_enum, default_value = "all")]
        suite: SuiteArg,
    },
}

#[derive(Debug, Subcommand)]
pub enum FanCmd {
    /// Simplicial, smooth, complete, projective and class group.
    Check { path: String },
}

#[derive(Debug, Args)]
pub struct TargetOpts {
    /// Scaled target b as a JSON list (integers or "p/q" strings).
    #[arg(long, allow_hyphen_values = true)]
    pub target: Option<String>,
    /// Analytic momentum level; converted to b = -level/2.
    #[arg(long, allow_hyphen_values = true)]
    pub level: Option<String>,
}

impl From<&TargetOpts> for TargetArg {
    fn from(t: &TargetOpts) -> Self {
        TargetArg {
            target: t.target.clone(),
            level: t.level.clone(),
        }
    }
}

#[derive(Debug, Args)]
pub struct WeightOpts {
    /// Fan file whose Gale dual supplies the weights.
    #[arg(long)]
    pub fan: Option<String>,
    /// Weight matrix as JSON, e.g. [[1,1,1]].
    #[arg(long, allow_hyphen_values = true)]
    pub weights: Option<String>,
}

impl From<&WeightOpts> for WeightSource {
    fn from(w: &WeightOpts) -> Self {
        WeightSource {
            fan: w.fan.clone(),
            weights: w.weights.clone(),
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum CoxCmd {
    /// Gale-dual weight matrix A with A·R = 0.
    Weights { path: String },
    /// Whether the torus acts freely off the irrelevant locus.
    Free { path: String },
    /// The fan's GIT chamber, or whether a given target lies in it.
    Chamber {
        path: String,
        #[command(flatten)]
        target: TargetOpts,
    },
    /// Whether a support set avoids the irrelevant locus.
    Relevant {
        path: String,
        #[arg(long)]
        support: String,
    },
    /// Semistability of a support at a target.
    Semistable {
        #[command(flatten)]
        weights: WeightOpts,
        #[command(flatten)]
        target: TargetOpts,
        #[arg(long)]
        support: String,
        /// Test stability (relative interior, full span) instead.
        #[arg(long)]
        stable: bool,
    },
    /// Shape of the fibre {s ≥ 0 : A s = b}.
    Fiber {
        #[command(flatten)]
        weights: WeightOpts,
        #[command(flatten)]
        target: TargetOpts,
    },
}

#[derive(Debug, Subcommand)]
pub enum MomentCmd {
    /// Momentum map of a torus action at a point.
    Eval {
        #[arg(long, allow_hyphen_values = true)]
        weights: String,
        /// Comma-separated complex coordinates, e.g. 1,0.5-2i.
        #[arg(long, allow_hyphen_values = true)]
        at: String,
        /// Treat the point as homogeneous coordinates.
        #[arg(long)]
        projective: bool,
        #[arg(long, allow_hyphen_values = true)]
        shift: Option<String>,
        /// Also evaluate d^c rho(xi) for a built-in potential.
        #[arg(long)]
        potential: Option<String>,
        #[arg(long, default_value_t = 1.0)]
        c: f64,
    },
    /// Descent over the real torus orbit towards a momentum fibre.
    OrbitMin {
        #[arg(long, allow_hyphen_values = true)]
        weights: String,
        #[arg(long, allow_hyphen_values = true)]
        at: String,
        #[command(flatten)]
        target: TargetOpts,
        #[arg(long, default_value_t = 4000)]
        iters: usize,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
    },
}

#[derive(Debug, Subcommand)]
pub enum FormsCmd {
    /// Finite-difference complex Hessian of a built-in potential.
    Hessian {
        #[arg(long)]
        potential: String,
        #[arg(long, allow_hyphen_values = true)]
        at: String,
        #[arg(long, default_value_t = 1.0)]
        c: f64,
        #[arg(long)]
        step: Option<f64>,
        #[arg(long)]
        no_richardson: bool,
    },
    /// The closed-form matrix on the O(1) chart.
    WrongMatrix {
        #[arg(long, allow_hyphen_values = true)]
        at: String,
        #[arg(long)]
        c: f64,
    },
    /// Smallest Hessian eigenvalue over sampled points.
    Scan {
        #[arg(long)]
        potential: String,
        #[arg(long, default_value_t = 1.0)]
        c: f64,
        /// Chart dimension for the C^n potentials.
        #[arg(long, default_value_t = 2)]
        dim: usize,
        /// Scan the closed-form matrix (wrong-o1 only).
        #[arg(long)]
        closed_form: bool,
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        #[arg(long, default_value_t = 1e-3)]
        r_min: f64,
        #[arg(long, default_value_t = 10.0)]
        r_max: f64,
        /// Use a radii,angles grid instead of log-radial sampling.
        #[arg(long)]
        grid: Option<String>,
    },
    /// Empirical threshold in c for fixed-o1.
    MinC {
        #[arg(long, default_value = "0.25,0.5,1,2,4,8")]
        grid: String,
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
    },
    /// Residual of dmu = iota_xi omega over sampled points and directions.
    Hamiltonian {
        #[arg(long)]
        potential: String,
        #[arg(long, allow_hyphen_values = true)]
        weights: String,
        #[arg(long, default_value_t = 1.0)]
        c: f64,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        /// affine | projective-chart | from-potential | auto
        #[arg(long)]
        source: Option<String>,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum SuiteArg {
    All,
    Fans,
    Forms,
    Git,
}

impl From<SuiteArg> for Suite {
    fn from(s: SuiteArg) -> Self {
        match s {
            SuiteArg::All => Suite::All,
            SuiteArg::Fans => Suite::Fans,
            SuiteArg::Forms => Suite::Forms,
            SuiteArg::Git => Suite::Git,
        }
    }
}

/// Runs a parsed command. `echo` is the command line as given, recorded in
/// the report.
pub fn run(cli: &Cli, echo: String) -> Result<Report, CliError> {
    let ctx = Ctx {
        command: echo,
        seed: cli.seed.unwrap_or(DEFAULT_SEED),
        expect: cli.expect.clone(),
        cross_check: cli.cross_check,
        trust_fan: cli.trust_fan,
    };
    match &cli.cmd {
        Cmd::Fan(FanCmd::Check { path }) => fan::check(&ctx, path),
        Cmd::Cox(c) => match c {
            CoxCmd::Weights { path } => cox::weights(&ctx, path),
            CoxCmd::Free { path } => cox::free(&ctx, path),
            CoxCmd::Chamber { path, target } => cox::chamber(&ctx, path, &target.into()),
            CoxCmd::Relevant { path, support } => cox::relevant(&ctx, path, support),
            CoxCmd::Semistable {
                weights,
                target,
                support,
                stable,
            } => cox::semistable(&ctx, &weights.into(), &target.into(), support, *stable),
            CoxCmd::Fiber { weights, target } => cox::fiber(&ctx, &weights.into(), &target.into()),
        },
        Cmd::Moment(m) => match m {
            MomentCmd::Eval {
                weights,
                at,
                projective,
                shift,
                potential,
                c,
            } => moment::eval(
                &ctx,
                &moment::EvalArgs {
                    weights,
                    at,
                    projective: *projective,
                    shift: shift.as_deref(),
                    potential: potential.as_deref(),
                    c: *c,
                },
            ),
            MomentCmd::OrbitMin {
                weights,
                at,
                target,
                iters,
                tol,
            } => moment::orbit_min(&ctx, weights, at, &target.into(), *iters, *tol),
        },
        Cmd::Forms(f) => match f {
            FormsCmd::Hessian {
                potential,
                at,
                c,
                step,
                no_richardson,
            } => forms::hessian(&ctx, potential, at, *c, *step, !no_richardson),
            FormsCmd::WrongMatrix { at, c } => forms::wrong_matrix(&ctx, at, *c),
            FormsCmd::Scan {
                potential,
                c,
                dim,
                closed_form,
                samples,
                r_min,
                r_max,
                grid,
            } => forms::scan(
                &ctx,
                &forms::ScanArgs {
                    potential,
                    c: *c,
                    dim: *dim,
                    closed_form: *closed_form,
                    samples: *samples,
                    r_min: *r_min,
                    r_max: *r_max,
                    grid: grid.as_deref(),
                },
            ),
            FormsCmd::MinC { grid, samples } => forms::min_c(&ctx, grid, *samples),
            FormsCmd::Hamiltonian {
                potential,
                weights,
                c,
                samples,
                source,
                tol,
            } => forms::hamiltonian(
                &ctx,
                &forms::HamiltonianArgs {
                    potential,
                    weights,
                    c: *c,
                    samples: *samples,
                    source: source.as_deref(),
                    tol: *tol,
                },
            ),
        },
        Cmd::Accept { suite } => accept::command(&ctx, (*suite).into()),
    }
}

/// Process exit code for a finished command.
pub fn exit_code(outcome: &Result<Report, CliError>) -> i32 {
    match outcome {
        Ok(r) if r.ok() => 0,
        Ok(_) => 1,
        Err(e) => e.exit_code(),
    }
}
