use momentforge_core::forms::{
    complex_hessian_fd, hamiltonian_residual, min_c_search, norm_sq, positivity_scan, wrong_metric_matrix, FdOptions,
    FormsError, HermitianSample, MomentumSource, PotentialChart, Sampler, ScanReport, ScanTarget, C64,
};
use momentforge_core::moment::LieAlgebraAction;
use nalgebra::DMatrix;
use serde_json::{json, Value};

use crate::parse;
use crate::report::{complex, complex_vec, float, floats, Report};
use crate::{CliError, Ctx};

fn input(e: FormsError) -> CliError {
    CliError::Input(e.to_string())
}

fn matrix(h: &DMatrix<C64>) -> Value {
    Value::Array(
        (0..h.nrows())
            .map(|i| Value::Array((0..h.ncols()).map(|j| complex(h[(i, j)])).collect()))
            .collect(),
    )
}

fn sample_verdicts(r: &mut Report, s: &HermitianSample) {
    let eig = s.eigenvalues();
    let pd = eig.iter().all(|&e| e > 0.0);
    r.verdict("eigenvalues", floats(&eig))
        .verdict("min_eigenvalue", float(s.min_eigenvalue()))
        .verdict("positive_definite", pd)
        .verdict("hermitian", s.is_hermitian(1e-8));
    r.token(if pd { "pd" } else { "not-pd" });
}

pub fn hessian(
    ctx: &Ctx,
    potential: &str,
    at: &str,
    c: f64,
    step: Option<f64>,
    richardson: bool,
) -> Result<Report, CliError> {
    let v = parse::point(at)?;
    let pot = PotentialChart::builtin(potential, v.len(), c).map_err(input)?;
    let mut r = Report::new(&ctx.command, &[]);
    let s = complex_hessian_fd(&pot, &v, FdOptions { step, richardson }).map_err(input)?;
    r.verdict("potential", pot.id()).verdict("chart", pot.description());
    r.certificate("H", matrix(&s.h));
    r.note("H_jk = d^2 rho / dz_j dzbar_k by central differences in real coordinates, Hermitian-symmetrized");
    sample_verdicts(&mut r, &s);
    r.check_expect(&ctx.expect);
    Ok(r)
}

pub fn wrong_matrix(ctx: &Ctx, at: &str, c: f64) -> Result<Report, CliError> {
    let v = parse::point(at)?;
    if v.len() != 2 {
        return Err(CliError::Input("--at takes two coordinates z,w".into()));
    }
    let mut r = Report::new(&ctx.command, &[]);
    let s = wrong_metric_matrix(v[0], v[1], c).map_err(input)?;
    let d = norm_sq(&v).powi(3);
    let numerator = &s.h * C64::new(d, 0.0);
    r.certificate("numerator", matrix(&numerator));
    r.certificate("matrix", matrix(&s.h));
    r.verdict("denominator", float(d));
    r.verdict("numerator_determinant", float(numerator.determinant().re));
    sample_verdicts(&mut r, &s);
    if ctx.cross_check {
        let fd = complex_hessian_fd(&PotentialChart::wrong_o1(c), &v, FdOptions::default()).map_err(input)?;
        let dev = (&s.h - fd.h.transpose()).iter().map(|x| x.norm()).fold(0.0, f64::max);
        r.verdict("fd_transpose_deviation", float(dev));
        r.note("the displayed matrix is compared with the transpose of the FD Hessian of 1/s + c log s");
        if dev >= 1e-6 {
            r.fail(format!("closed form and FD Hessian differ by {dev:e}"));
        }
    }
    r.check_expect(&ctx.expect);
    Ok(r)
}

fn scan_json(s: &ScanReport) -> Value {
    json!({
        "target": s.target,
        "sampler": s.sampler,
        "samples": s.samples,
        "seed": s.seed,
        "min_eigenvalue": float(s.min_eigenvalue),
        "witness": complex_vec(&s.witness),
        "verdict": s.verdict.label(),
    })
}

pub struct ScanArgs<'a> {
    pub potential: &'a str,
    pub c: f64,
    pub dim: usize,
    pub closed_form: bool,
    pub samples: usize,
    pub r_min: f64,
    pub r_max: f64,
    pub grid: Option<&'a str>,
}

fn sampler(a: &ScanArgs) -> Result<Sampler, CliError> {
    if !(a.r_min > 0.0 && a.r_max > a.r_min) {
        return Err(CliError::Input("need 0 < r-min < r-max".into()));
    }
    Ok(match a.grid {
        Some(g) => {
            let g = parse::floats(g)?;
            let [radii, angles] = g[..] else {
                return Err(CliError::Input("--grid takes radii,angles".into()));
            };
            Sampler::Grid {
                radii: radii as usize,
                angles: angles as usize,
                r_min: a.r_min,
                r_max: a.r_max,
            }
        }
        None => Sampler::LogRadial {
            samples: a.samples,
            r_min: a.r_min,
            r_max: a.r_max,
        },
    })
}

pub fn scan(ctx: &Ctx, a: &ScanArgs) -> Result<Report, CliError> {
    let target = if a.closed_form {
        if a.potential != "wrong-o1" {
            return Err(CliError::Input("--closed-form is available for wrong-o1 only".into()));
        }
        ScanTarget::WrongMetric { c: a.c }
    } else {
        ScanTarget::Potential(PotentialChart::builtin(a.potential, a.dim, a.c).map_err(input)?)
    };
    let sampler = sampler(a)?;
    let mut r = Report::new(&ctx.command, &[]);
    r.seed = Some(ctx.seed);
    let rep = r.timed("scan", || positivity_scan(&target, &sampler, ctx.seed));
    r.verdict("verdict", rep.verdict.label());
    r.verdict("min_eigenvalue", float(rep.min_eigenvalue));
    r.certificate("scan", scan_json(&rep));
    r.token(rep.verdict.label());
    r.note("pd-on-samples only certifies the sampled points, never that the form is Kahler");
    r.check_expect(&ctx.expect);
    Ok(r)
}

pub fn min_c(ctx: &Ctx, grid: &str, samples: usize) -> Result<Report, CliError> {
    let grid = parse::floats(grid)?;
    let sampler = Sampler::LogRadial {
        samples,
        r_min: 1e-3,
        r_max: 10.0,
    };
    let mut r = Report::new(&ctx.command, &[]);
    r.seed = Some(ctx.seed);
    match r.timed("min_c", || min_c_search(&sampler, ctx.seed, &grid)) {
        Ok(rep) => {
            r.verdict("threshold", float(rep.threshold))
                .verdict("monotone", rep.monotone);
            r.token(format!("threshold={}", rep.threshold));
            r.token(if rep.monotone { "monotone" } else { "not-monotone" });
            r.certificate(
                "scans",
                Value::Array(
                    rep.scans
                        .iter()
                        .map(|(c, s)| json!({ "c": c, "verdict": s.verdict.label(), "min_eigenvalue": float(s.min_eigenvalue) }))
                        .collect(),
                ),
            );
            if let Some(below) = &rep.failing_below {
                r.certificate("failing_below", scan_json(below));
            }
            r.note("empirical, sampler-relative threshold for fixed-o1");
        }
        Err(FormsError::NoCOnGrid) => {
            r.verdict("threshold", Value::Null);
            r.token("no-c-on-grid");
            r.fail("no-c-on-grid: every grid value has a counterexample");
        }
        Err(e) => return Err(input(e)),
    }
    r.check_expect(&ctx.expect);
    Ok(r)
}

pub struct HamiltonianArgs<'a> {
    pub potential: &'a str,
    pub weights: &'a str,
    pub c: f64,
    pub samples: usize,
    pub source: Option<&'a str>,
    pub tol: f64,
}

pub fn hamiltonian(ctx: &Ctx, a: &HamiltonianArgs) -> Result<Report, CliError> {
    let rows = parse::int_rows(a.weights)?;
    let act = LieAlgebraAction::torus(&rows);
    let pot = PotentialChart::builtin(a.potential, act.dim(), a.c).map_err(input)?;
    let source = match a.source {
        None | Some("auto") => MomentumSource::for_potential(&pot),
        Some("affine") => MomentumSource::Affine,
        Some("projective-chart") => MomentumSource::ProjectiveChart,
        Some("from-potential") => MomentumSource::FromPotential,
        Some(other) => return Err(CliError::Input(format!("unknown momentum source {other:?}"))),
    };
    let mut r = Report::new(&ctx.command, &[]);
    r.seed = Some(ctx.seed);
    let rep = r
        .timed("hamiltonian", || {
            hamiltonian_residual(&pot, &act, source, a.samples, ctx.seed)
        })
        .map_err(input)?;
    let pass = rep.max_residual < a.tol;
    r.verdict("potential", pot.id())
        .verdict("momentum", format!("{source:?}"))
        .verdict("samples", rep.samples)
        .verdict("max_residual", float(rep.max_residual))
        .verdict("tolerance", float(a.tol))
        .verdict("within_tolerance", pass);
    if let Some((p, x)) = &rep.worst {
        r.certificate("worst", json!({ "point": complex_vec(p), "direction": complex_vec(x) }));
    }
    r.token(if pass { "hamiltonian" } else { "not-hamiltonian" });
    if !pass {
        r.fail(format!("residual {:e} exceeds {:e}", rep.max_residual, a.tol));
    }
    r.check_expect(&ctx.expect);
    Ok(r)
}
