//! Kähler potentials on coordinate charts: finite-difference complex
//! Hessians, sampled positivity scans and the Hamiltonian-equation residual.
//!
//! Hessian convention: `H_jk = ∂²ρ/∂z_j∂z̄_k`. The Kähler form is
//! `ω = −dd^cρ = 2i∂∂̄ρ`, which evaluates as `ω(U, W) = −4·Im(W* M U)` with
//! `M = H̄ = Hᵀ`.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use thiserror::Error;

use crate::moment::{momentum_affine, momentum_from_potential, momentum_projective, LieAlgebraAction, MomentError};

pub type C64 = Complex64;

#[derive(Clone, Debug, PartialEq, Error)]
pub enum FormsError {
    #[error("finite-difference stencil leaves the chart at {point:?}")]
    ChartBoundary { point: Vec<C64> },
    #[error("the origin is excluded from the chart")]
    OriginExcluded,
    #[error("no grid value of c gives a positive definite scan")]
    NoCOnGrid,
    #[error("c-grid must be nonempty and strictly increasing")]
    GridNotIncreasing,
    #[error("unknown potential id {0:?}")]
    UnknownPotential(String),
    #[error("point has dimension {found}, chart has dimension {expected}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error(transparent)]
    Moment(#[from] MomentError),
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum PotentialKind {
    /// `|v|²` on ℂⁿ
    NormSq,
    /// `log(1 + |v|²)` on ℂⁿ
    FsAffine,
    /// `1/s + c·log s`, `s = |z|² + |w|²`, on ℂ² ∖ {0}
    WrongO1,
    /// `log(1/s + 1) + c·log s` on ℂ² ∖ {0}
    FixedO1,
    /// base Fubini–Study potential pulled back to the O(1) chart:
    /// `log(1 + |w|²/|z|²)` on `z ≠ 0` (k = 0), `log(1 + |z|²/|w|²)` on `w ≠ 0` (k = 1)
    BaseO1 { k: usize },
    /// `log(1/s + 1) + c·BaseO1{k}`
    GluedO1 { k: usize },
}

/// A real potential on an open chart of ℂⁿ.
#[derive(Clone, Debug, PartialEq)]
pub struct PotentialChart {
    pub kind: PotentialKind,
    pub dim: usize,
    pub c: f64,
}

pub const BUILTIN_POTENTIALS: [&str; 4] = ["norm-sq", "fs-affine", "wrong-o1", "fixed-o1"];

impl PotentialChart {
    pub fn norm_sq(dim: usize) -> Self {
        Self {
            kind: PotentialKind::NormSq,
            dim,
            c: 0.0,
        }
    }

    pub fn fs_affine(dim: usize) -> Self {
        Self {
            kind: PotentialKind::FsAffine,
            dim,
            c: 0.0,
        }
    }

    pub fn wrong_o1(c: f64) -> Self {
        Self {
            kind: PotentialKind::WrongO1,
            dim: 2,
            c,
        }
    }

    pub fn fixed_o1(c: f64) -> Self {
        Self {
            kind: PotentialKind::FixedO1,
            dim: 2,
            c,
        }
    }

    pub fn base_o1(k: usize) -> Self {
        assert!(k < 2);
        Self {
            kind: PotentialKind::BaseO1 { k },
            dim: 2,
            c: 0.0,
        }
    }

    pub fn glued_o1(c: f64, k: usize) -> Self {
        assert!(k < 2);
        Self {
            kind: PotentialKind::GluedO1 { k },
            dim: 2,
            c,
        }
    }

    /// Built-in potential by id; `dim` is used by the ℂⁿ potentials only.
    pub fn builtin(id: &str, dim: usize, c: f64) -> Result<Self, FormsError> {
        Ok(match id {
            "norm-sq" => Self::norm_sq(dim),
            "fs-affine" => Self::fs_affine(dim),
            "wrong-o1" => Self::wrong_o1(c),
            "fixed-o1" => Self::fixed_o1(c),
            other => return Err(FormsError::UnknownPotential(other.to_string())),
        })
    }

    pub fn id(&self) -> String {
        match self.kind {
            PotentialKind::NormSq => "norm-sq".into(),
            PotentialKind::FsAffine => "fs-affine".into(),
            PotentialKind::WrongO1 => "wrong-o1".into(),
            PotentialKind::FixedO1 => "fixed-o1".into(),
            PotentialKind::BaseO1 { k } => format!("base-o1-{k}"),
            PotentialKind::GluedO1 { k } => format!("glued-o1-{k}"),
        }
    }

    /// Human description of the chart and the symmetry the potential has.
    pub fn description(&self) -> &'static str {
        match self.kind {
            PotentialKind::NormSq => "C^n, invariant under U(n)",
            PotentialKind::FsAffine => "C^n, invariant under U(n)",
            PotentialKind::WrongO1 | PotentialKind::FixedO1 => {
                "O(1) over P1, chart (z0/z2, z1/z2) minus origin, invariant under U(2)"
            }
            PotentialKind::BaseO1 { .. } | PotentialKind::GluedO1 { .. } => {
                "O(1) over P1, chart (z0/z2, z1/z2) minus a coordinate axis, invariant under the diagonal torus"
            }
        }
    }

    pub fn in_domain(&self, v: &[C64]) -> bool {
        if v.len() != self.dim || v.iter().any(|x| !x.re.is_finite() || !x.im.is_finite()) {
            return false;
        }
        match self.kind {
            PotentialKind::NormSq | PotentialKind::FsAffine => true,
            PotentialKind::WrongO1 | PotentialKind::FixedO1 => norm_sq(v) > 0.0,
            PotentialKind::BaseO1 { k } | PotentialKind::GluedO1 { k } => v[k].norm_sqr() > 0.0,
        }
    }

    /// Value at `v`; callers check [`Self::in_domain`] first.
    pub fn eval(&self, v: &[C64]) -> f64 {
        let s = norm_sq(v);
        match self.kind {
            PotentialKind::NormSq => s,
            PotentialKind::FsAffine => s.ln_1p(),
            PotentialKind::WrongO1 => 1.0 / s + self.c * s.ln(),
            PotentialKind::FixedO1 => (1.0 / s).ln_1p() + self.c * s.ln(),
            PotentialKind::BaseO1 { k } => base(v, k),
            PotentialKind::GluedO1 { k } => (1.0 / s).ln_1p() + self.c * base(v, k),
        }
    }
}

fn base(v: &[C64], k: usize) -> f64 {
    (v[1 - k].norm_sqr() / v[k].norm_sqr()).ln_1p()
}

pub fn norm_sq(v: &[C64]) -> f64 {
    v.iter().map(|x| x.norm_sqr()).sum()
}

fn to_real(v: &[C64]) -> Vec<f64> {
    v.iter().flat_map(|x| [x.re, x.im]).collect()
}

fn to_complex(x: &[f64]) -> Vec<C64> {
    x.chunks(2).map(|p| C64::new(p[0], p[1])).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SampleSource {
    ClosedForm,
    FiniteDifference,
}

/// Hermitian matrix at a chart point.
#[derive(Clone, Debug, PartialEq)]
pub struct HermitianSample {
    pub point: Vec<C64>,
    pub h: DMatrix<C64>,
    pub source: SampleSource,
}

impl HermitianSample {
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut ev: Vec<f64> = self.h.clone().symmetric_eigenvalues().iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        ev
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues()[0]
    }

    /// `‖H − H*‖ ≤ tol·(1 + ‖H‖)` in the Frobenius norm.
    pub fn is_hermitian(&self, tol: f64) -> bool {
        let d = (&self.h - self.h.adjoint()).norm();
        d <= tol * (1.0 + self.h.norm())
    }

    pub fn determinant(&self) -> f64 {
        self.h.determinant().re
    }
}

/// Finite-difference step policy for Hessians.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FdOptions {
    /// Fixed real-coordinate step; `None` picks `10⁻³·min(1, |v|)`
    /// (or `10⁻³` at the origin).
    pub step: Option<f64>,
    /// Combine steps `h` and `h/2` to cancel the `h²` error term.
    pub richardson: bool,
}

impl Default for FdOptions {
    fn default() -> Self {
        Self {
            step: None,
            richardson: true,
        }
    }
}

impl FdOptions {
    pub fn plain(step: f64) -> Self {
        Self {
            step: Some(step),
            richardson: false,
        }
    }

    fn step_at(&self, v: &[C64]) -> f64 {
        self.step.unwrap_or_else(|| {
            let r = norm_sq(v).sqrt();
            if r > 0.0 {
                1e-3 * r.min(1.0)
            } else {
                1e-3
            }
        })
    }
}

fn real_hessian(pot: &PotentialChart, x: &[f64], h: f64) -> Result<Vec<Vec<f64>>, FormsError> {
    let m = x.len();
    let f = |dx: &[(usize, f64)]| -> Result<f64, FormsError> {
        let mut y = x.to_vec();
        for &(i, d) in dx {
            y[i] += d;
        }
        let v = to_complex(&y);
        if !pot.in_domain(&v) {
            return Err(FormsError::ChartBoundary { point: v });
        }
        Ok(pot.eval(&v))
    };
    let f0 = f(&[])?;
    let mut out = vec![vec![0.0; m]; m];
    for i in 0..m {
        out[i][i] = (f(&[(i, h)])? - 2.0 * f0 + f(&[(i, -h)])?) / (h * h);
        for j in 0..i {
            let v = (f(&[(i, h), (j, h)])? - f(&[(i, h), (j, -h)])? - f(&[(i, -h), (j, h)])? + f(&[(i, -h), (j, -h)])?)
                / (4.0 * h * h);
            out[i][j] = v;
            out[j][i] = v;
        }
    }
    Ok(out)
}

/// `H_jk = ∂²ρ/∂z_j∂z̄_k` from central differences in real coordinates,
/// symmetrized to be exactly Hermitian.
pub fn complex_hessian_fd(pot: &PotentialChart, v: &[C64], opts: FdOptions) -> Result<HermitianSample, FormsError> {
    if v.len() != pot.dim {
        return Err(FormsError::DimensionMismatch {
            expected: pot.dim,
            found: v.len(),
        });
    }
    if !pot.in_domain(v) {
        return Err(FormsError::ChartBoundary { point: v.to_vec() });
    }
    let x = to_real(v);
    let h = opts.step_at(v);
    let mut r = real_hessian(pot, &x, h)?;
    if opts.richardson {
        let r2 = real_hessian(pot, &x, h / 2.0)?;
        for (row, row2) in r.iter_mut().zip(&r2) {
            for (a, b) in row.iter_mut().zip(row2) {
                *a = (4.0 * b - *a) / 3.0;
            }
        }
    }
    let n = pot.dim;
    let hm = DMatrix::from_fn(n, n, |j, k| {
        let (xj, yj, xk, yk) = (2 * j, 2 * j + 1, 2 * k, 2 * k + 1);
        C64::new(0.25 * (r[xj][xk] + r[yj][yk]), 0.25 * (r[xj][yk] - r[yj][xk]))
    });
    let hm = (&hm + hm.adjoint()) * C64::new(0.5, 0.0);
    Ok(HermitianSample {
        point: v.to_vec(),
        h: hm,
        source: SampleSource::FiniteDifference,
    })
}

/// The displayed 2×2 matrix for `i∂∂̄χ_h + c·π*ω_FS` on the O(1) chart,
/// divided by `(|z|² + |w|²)³`. It equals `∂²ψ_c/∂z̄_j∂z_k` for
/// `ψ_c = 1/s + c·log s`, i.e. the transpose of [`complex_hessian_fd`].
pub fn wrong_metric_matrix(z: C64, w: C64, c: f64) -> Result<HermitianSample, FormsError> {
    let (a, b) = (z.norm_sqr(), w.norm_sqr());
    let s = a + b;
    if s == 0.0 {
        return Err(FormsError::OriginExcluded);
    }
    let d = s * s * s;
    let off = (2.0 - c * s) * z * w.conj();
    let h = DMatrix::from_row_slice(
        2,
        2,
        &[
            C64::new(a * (1.0 + c * b) - b + c * b * b, 0.0),
            off,
            off.conj(),
            C64::new((1.0 + c * a) * b - a + c * a * a, 0.0),
        ],
    ) / C64::new(d, 0.0);
    Ok(HermitianSample {
        point: vec![z, w],
        h,
        source: SampleSource::ClosedForm,
    })
}

/// How scan points are drawn.
#[derive(Clone, Debug, PartialEq)]
pub enum Sampler {
    /// Radius log-uniform in `[r_min, r_max]`, direction uniform on the sphere.
    LogRadial { samples: usize, r_min: f64, r_max: f64 },
    /// `radii` log-spaced radii times `angles` real directions
    /// `(cos θ, sin θ, 0, …)` with θ in `(0, π/2]`.
    Grid {
        radii: usize,
        angles: usize,
        r_min: f64,
        r_max: f64,
    },
}

impl Default for Sampler {
    fn default() -> Self {
        Sampler::LogRadial {
            samples: 10_000,
            r_min: 1e-3,
            r_max: 10.0,
        }
    }
}

impl Sampler {
    pub fn len(&self) -> usize {
        match *self {
            Sampler::LogRadial { samples, .. } => samples,
            Sampler::Grid { radii, angles, .. } => radii * angles,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn describe(&self) -> String {
        match *self {
            Sampler::LogRadial { samples, r_min, r_max } => {
                format!("log-radial samples={samples} r=[{r_min:e}, {r_max:e}]")
            }
            Sampler::Grid {
                radii,
                angles,
                r_min,
                r_max,
            } => {
                format!("grid radii={radii} angles={angles} r=[{r_min:e}, {r_max:e}]")
            }
        }
    }

    /// Point number `i`; drawn from its own RNG stream so that parallel and
    /// serial scans agree.
    pub fn point(&self, dim: usize, seed: u64, i: usize) -> Vec<C64> {
        match *self {
            Sampler::LogRadial { r_min, r_max, .. } => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(i as u64);
                let (lo, hi) = (r_min.ln(), r_max.ln());
                let r = (lo + (hi - lo) * rng.random::<f64>()).exp();
                let g: Vec<f64> = (0..2 * dim).map(|_| rng.sample(StandardNormal)).collect();
                let norm = g.iter().map(|x| x * x).sum::<f64>().sqrt();
                to_complex(&g.iter().map(|x| r * x / norm).collect::<Vec<_>>())
            }
            Sampler::Grid {
                radii,
                angles,
                r_min,
                r_max,
            } => {
                let (ri, ai) = (i / angles, i % angles);
                let t = if radii > 1 { ri as f64 / (radii - 1) as f64 } else { 0.0 };
                let r = (r_min.ln() + t * (r_max.ln() - r_min.ln())).exp();
                let theta = std::f64::consts::FRAC_PI_2 * (ai + 1) as f64 / angles as f64;
                let mut v = vec![C64::new(0.0, 0.0); dim];
                v[0] = C64::new(r * theta.cos(), 0.0);
                if dim > 1 {
                    v[1] = C64::new(r * theta.sin(), 0.0);
                }
                v
            }
        }
    }
}

/// What a positivity scan evaluates.
#[derive(Clone, Debug, PartialEq)]
pub enum ScanTarget {
    /// FD Hessian (Richardson) of a potential.
    Potential(PotentialChart),
    /// The closed-form matrix of [`wrong_metric_matrix`].
    WrongMetric { c: f64 },
}

impl ScanTarget {
    pub fn dim(&self) -> usize {
        match self {
            ScanTarget::Potential(p) => p.dim,
            ScanTarget::WrongMetric { .. } => 2,
        }
    }

    pub fn sample(&self, v: &[C64]) -> Result<HermitianSample, FormsError> {
        match self {
            ScanTarget::Potential(p) => complex_hessian_fd(p, v, FdOptions::default()),
            ScanTarget::WrongMetric { c } => wrong_metric_matrix(v[0], v[1], *c),
        }
    }

    pub fn describe(&self) -> String {
        match self {
            ScanTarget::Potential(p) => format!("{} (finite differences), c={}", p.id(), p.c),
            ScanTarget::WrongMetric { c } => format!("wrong-o1 (closed form), c={c}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScanVerdict {
    /// Every sampled Hessian was positive definite. Sampling never proves
    /// the form Kähler.
    PdOnSamples,
    Counterexample,
}

impl ScanVerdict {
    pub fn label(self) -> &'static str {
        match self {
            ScanVerdict::PdOnSamples => "pd-on-samples",
            ScanVerdict::Counterexample => "counterexample",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScanReport {
    pub target: String,
    pub sampler: String,
    pub samples: usize,
    pub seed: u64,
    pub min_eigenvalue: f64,
    pub witness: Vec<C64>,
    pub verdict: ScanVerdict,
}

/// Smallest Hessian eigenvalue over the sampler's points. Points where the
/// stencil would leave the chart are skipped.
pub fn positivity_scan(target: &ScanTarget, sampler: &Sampler, seed: u64) -> ScanReport {
    let dim = target.dim();
    let best = (0..sampler.len())
        .into_par_iter()
        .filter_map(|i| {
            let v = sampler.point(dim, seed, i);
            target.sample(&v).ok().map(|s| (s.min_eigenvalue(), i, v))
        })
        .min_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    let (min_eigenvalue, witness) = match best {
        Some((e, _, v)) => (e, v),
        None => (f64::INFINITY, Vec::new()),
    };
    ScanReport {
        target: target.describe(),
        sampler: sampler.describe(),
        samples: sampler.len(),
        seed,
        min_eigenvalue,
        witness,
        verdict: if min_eigenvalue > 0.0 {
            ScanVerdict::PdOnSamples
        } else {
            ScanVerdict::Counterexample
        },
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MinCReport {
    /// Smallest grid value whose scan is positive definite on samples.
    pub threshold: f64,
    /// `(c, report)` for every grid value, in grid order.
    pub scans: Vec<(f64, ScanReport)>,
    /// Verdicts switch from counterexample to pd-on-samples at most once.
    pub monotone: bool,
    /// Scan at the grid value just below the threshold, if any.
    pub failing_below: Option<ScanReport>,
}

/// Empirical threshold for `fixed-o1` over an increasing grid of `c`.
pub fn min_c_search(sampler: &Sampler, seed: u64, grid: &[f64]) -> Result<MinCReport, FormsError> {
    if grid.is_empty() || grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(FormsError::GridNotIncreasing);
    }
    let scans: Vec<(f64, ScanReport)> = grid
        .iter()
        .map(|&c| {
            (
                c,
                positivity_scan(&ScanTarget::Potential(PotentialChart::fixed_o1(c)), sampler, seed),
            )
        })
        .collect();
    let pd: Vec<bool> = scans
        .iter()
        .map(|(_, r)| r.verdict == ScanVerdict::PdOnSamples)
        .collect();
    let first = pd.iter().position(|&p| p).ok_or(FormsError::NoCOnGrid)?;
    let monotone = pd[first..].iter().all(|&p| p);
    Ok(MinCReport {
        threshold: grid[first],
        failing_below: first.checked_sub(1).map(|i| scans[i].1.clone()),
        scans,
        monotone,
    })
}

/// `ω(U, W)` for `ω = −dd^cρ`, given `H = ∂²ρ/∂z_j∂z̄_k`.
pub fn kahler_form(h: &DMatrix<C64>, u: &[C64], w: &[C64]) -> f64 {
    let n = u.len();
    let mut s = C64::new(0.0, 0.0);
    for j in 0..n {
        for k in 0..n {
            // W* M U with M = Hᵀ
            s += w[j].conj() * h[(k, j)] * u[k];
        }
    }
    -4.0 * s.im
}

/// Which momentum map the Hamiltonian check differentiates.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MomentumSource {
    /// `v ↦ 2⟨iξv, v⟩`
    Affine,
    /// `v ↦ μ([v : 1])` for the action extended by a trivial factor
    ProjectiveChart,
    /// `ι_ξ d^cρ` evaluated by finite differences
    FromPotential,
}

impl MomentumSource {
    /// The closed form matching a built-in potential, when there is one.
    pub fn for_potential(p: &PotentialChart) -> Self {
        match p.kind {
            PotentialKind::NormSq => MomentumSource::Affine,
            PotentialKind::FsAffine => MomentumSource::ProjectiveChart,
            _ => MomentumSource::FromPotential,
        }
    }

    pub fn eval(self, pot: &PotentialChart, act: &LieAlgebraAction, v: &[C64]) -> Result<Vec<f64>, FormsError> {
        Ok(match self {
            MomentumSource::Affine => momentum_affine(act, v, None)?,
            MomentumSource::ProjectiveChart => {
                let mut w = v.to_vec();
                w.push(C64::new(1.0, 0.0));
                momentum_projective(&act.extended_trivially(), &w, None)?
            }
            MomentumSource::FromPotential => momentum_from_potential(pot, act, v)?,
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct HamiltonianReport {
    pub samples: usize,
    pub seed: u64,
    pub max_residual: f64,
    /// point and direction attaining the maximum
    pub worst: Option<(Vec<C64>, Vec<C64>)>,
}

/// Max over seeded samples of `|dμ^ξ(X) − ω(ξ_X, X)|`, with the derivative
/// of `μ^ξ` by Richardson-extrapolated central differences and `ω` from
/// the FD Hessian.
pub fn hamiltonian_residual(
    pot: &PotentialChart,
    act: &LieAlgebraAction,
    source: MomentumSource,
    samples: usize,
    seed: u64,
) -> Result<HamiltonianReport, FormsError> {
    if act.dim() != pot.dim {
        return Err(FormsError::DimensionMismatch {
            expected: pot.dim,
            found: act.dim(),
        });
    }
    let n = pot.dim;
    let results: Vec<Result<(f64, Vec<C64>, Vec<C64>), FormsError>> = (0..samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i as u64);
            let p: Vec<C64> = loop {
                let p: Vec<C64> = (0..n)
                    .map(|_| C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
                    .collect();
                if pot.in_domain(&p) {
                    break p;
                }
            };
            let x: Vec<C64> = (0..n)
                .map(|_| C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
                .collect();
            let xn = norm_sq(&x).sqrt();
            let x: Vec<C64> = x.iter().map(|c| c / xn).collect();
            let hess = complex_hessian_fd(pot, &p, FdOptions::default())?;
            // a wide step with Richardson: `FromPotential` is itself a
            // difference quotient, so a narrow outer step amplifies its noise
            let h = 1e-3 * (1.0 + norm_sq(&p).sqrt());
            let shifted = |t: f64| -> Vec<C64> { p.iter().zip(&x).map(|(a, b)| a + b * t).collect() };
            let central = |h: f64| -> Result<Vec<f64>, FormsError> {
                let (pp, pm) = (shifted(h), shifted(-h));
                if !pot.in_domain(&pp) || !pot.in_domain(&pm) {
                    return Err(FormsError::ChartBoundary { point: p.clone() });
                }
                let (mp, mm) = (source.eval(pot, act, &pp)?, source.eval(pot, act, &pm)?);
                Ok(mp.iter().zip(&mm).map(|(a, b)| (a - b) / (2.0 * h)).collect())
            };
            let (d1, d2) = (central(h)?, central(h / 2.0)?);
            let mut worst: f64 = 0.0;
            for j in 0..act.basis_len() {
                let dmu = (4.0 * d2[j] - d1[j]) / 3.0;
                let xi = act.apply(j, &p);
                let om = kahler_form(&hess.h, &xi, &x);
                worst = worst.max((dmu - om).abs());
            }
            Ok((worst, p, x))
        })
        .collect();
    let mut best: Option<(f64, Vec<C64>, Vec<C64>)> = None;
    for r in results {
        let r = r?;
        if best.as_ref().is_none_or(|b| r.0 > b.0) {
            best = Some(r);
        }
    }
    Ok(HamiltonianReport {
        samples,
        seed,
        max_residual: best.as_ref().map_or(0.0, |b| b.0),
        worst: best.map(|(_, p, x)| (p, x)),
    })
}
