//! Momentum maps of unitary torus and matrix actions on ℂᴺ: the affine and
//! projective closed forms, `ι_ξ d^cρ` from a potential, and a numerical
//! orbit search for a momentum level.
//!
//! Hermitian product `⟨a, b⟩ = Σ a_i b̄_i`. A torus with integer weights
//! `A` acts by `ξ_j = i·diag(A_j)`, so `μ_j(z) = −2·Σ_ρ A_jρ |z_ρ|²`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::cox::WeightMatrix;
use crate::forms::{norm_sq, PotentialChart};
use num_traits::ToPrimitive;

type C64 = Complex64;

#[derive(Clone, Debug, PartialEq, Error)]
pub enum MomentError {
    #[error("finite-difference stencil leaves the chart at {point:?}")]
    ChartBoundary { point: Vec<C64> },
    #[error("orbit iterate exceeded magnitude 1e12")]
    Diverged,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("basis matrix {index} is not anti-Hermitian")]
    NotAntiHermitian { index: usize },
    #[error("basis matrices {first} and {second} do not commute")]
    NotCommuting { first: usize, second: usize },
    #[error("the zero vector has no projective class")]
    ZeroPoint,
}

/// A basis of a compact Lie algebra acting on ℂᴺ.
#[derive(Clone, Debug, PartialEq)]
pub enum LieAlgebraAction {
    /// `ξ_j = i·diag(weights[j])`
    Torus { weights: Vec<Vec<f64>> },
    /// general anti-Hermitian matrices
    Matrices { basis: Vec<DMatrix<C64>> },
}

impl LieAlgebraAction {
    pub fn torus(weights: &[Vec<i64>]) -> Self {
        LieAlgebraAction::Torus {
            weights: weights.iter().map(|r| r.iter().map(|&x| x as f64).collect()).collect(),
        }
    }

    pub fn from_weight_matrix(w: &WeightMatrix) -> Self {
        LieAlgebraAction::Torus {
            weights: (0..w.k())
                .map(|j| w.a.row(j).iter().map(|x| x.to_f64().expect("finite weight")).collect())
                .collect(),
        }
    }

    /// Checks anti-Hermitian to `1e-12`; a commuting basis is required only
    /// when `require_commuting` is set.
    pub fn matrices(basis: Vec<DMatrix<C64>>, require_commuting: bool) -> Result<Self, MomentError> {
        let n = basis.first().map_or(0, |m| m.nrows());
        for (index, m) in basis.iter().enumerate() {
            if m.nrows() != n || m.ncols() != n {
                return Err(MomentError::DimensionMismatch {
                    expected: n,
                    found: m.nrows(),
                });
            }
            if (m + m.adjoint()).norm() > 1e-12 {
                return Err(MomentError::NotAntiHermitian { index });
            }
        }
        if require_commuting {
            for i in 0..basis.len() {
                for j in i + 1..basis.len() {
                    let c = &basis[i] * &basis[j] - &basis[j] * &basis[i];
                    if c.norm() > 1e-12 {
                        return Err(MomentError::NotCommuting { first: i, second: j });
                    }
                }
            }
        }
        Ok(LieAlgebraAction::Matrices { basis })
    }

    pub fn dim(&self) -> usize {
        match self {
            LieAlgebraAction::Torus { weights } => weights.first().map_or(0, Vec::len),
            LieAlgebraAction::Matrices { basis } => basis.first().map_or(0, |m| m.nrows()),
        }
    }

    pub fn basis_len(&self) -> usize {
        match self {
            LieAlgebraAction::Torus { weights } => weights.len(),
            LieAlgebraAction::Matrices { basis } => basis.len(),
        }
    }

    /// Fundamental vector field `ξ_j·v`.
    pub fn apply(&self, j: usize, v: &[C64]) -> Vec<C64> {
        match self {
            LieAlgebraAction::Torus { weights } => {
                weights[j].iter().zip(v).map(|(&a, z)| C64::new(0.0, a) * z).collect()
            }
            LieAlgebraAction::Matrices { basis } => {
                let out = &basis[j] * DVector::from_column_slice(v);
                out.iter().copied().collect()
            }
        }
    }

    /// The same action on ℂᴺ ⊕ ℂ, trivial on the new coordinate.
    pub fn extended_trivially(&self) -> Self {
        match self {
            LieAlgebraAction::Torus { weights } => LieAlgebraAction::Torus {
                weights: weights
                    .iter()
                    .map(|r| {
                        let mut r = r.clone();
                        r.push(0.0);
                        r
                    })
                    .collect(),
            },
            LieAlgebraAction::Matrices { basis } => LieAlgebraAction::Matrices {
                basis: basis
                    .iter()
                    .map(|m| {
                        let n = m.nrows();
                        DMatrix::from_fn(n + 1, n + 1, |r, c| {
                            if r < n && c < n {
                                m[(r, c)]
                            } else {
                                C64::new(0.0, 0.0)
                            }
                        })
                    })
                    .collect(),
            },
        }
    }

    /// Acts by the group element `exp(Σ θ_j ξ_j)` (torus only).
    pub fn torus_element(&self, theta: &[f64], v: &[C64]) -> Vec<C64> {
        match self {
            LieAlgebraAction::Torus { weights } => v
                .iter()
                .enumerate()
                .map(|(r, z)| {
                    let phase: f64 = weights.iter().zip(theta).map(|(w, t)| w[r] * t).sum();
                    z * C64::from_polar(1.0, phase)
                })
                .collect(),
            LieAlgebraAction::Matrices { .. } => panic!("torus_element needs a torus action"),
        }
    }

    fn check(&self, v: &[C64]) -> Result<(), MomentError> {
        if v.len() != self.dim() {
            return Err(MomentError::DimensionMismatch {
                expected: self.dim(),
                found: v.len(),
            });
        }
        Ok(())
    }
}

fn hermitian(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x * y.conj()).sum()
}

fn subtract_shift(mut mu: Vec<f64>, shift: Option<&[f64]>) -> Vec<f64> {
    if let Some(s) = shift {
        for (m, s) in mu.iter_mut().zip(s) {
            *m -= s;
        }
    }
    mu
}

/// `μ^{ξ_j}(v) = 2·Re⟨iξ_j v, v⟩ − shift_j`.
pub fn momentum_affine(act: &LieAlgebraAction, v: &[C64], shift: Option<&[f64]>) -> Result<Vec<f64>, MomentError> {
    act.check(v)?;
    let i = C64::new(0.0, 1.0);
    let mu = (0..act.basis_len())
        .map(|j| {
            let iv: Vec<C64> = act.apply(j, v).iter().map(|x| i * x).collect();
            2.0 * hermitian(&iv, v).re
        })
        .collect();
    Ok(subtract_shift(mu, shift))
}

/// `μ^ξ([w]) = 2⟨iξw, w⟩ / ⟨w, w⟩ − shift`.
pub fn momentum_projective(act: &LieAlgebraAction, w: &[C64], shift: Option<&[f64]>) -> Result<Vec<f64>, MomentError> {
    act.check(w)?;
    let nn = norm_sq(w);
    if nn == 0.0 {
        return Err(MomentError::ZeroPoint);
    }
    let mu = momentum_affine(act, w, None)?.into_iter().map(|m| m / nn).collect();
    Ok(subtract_shift(mu, shift))
}

/// `μ^{ξ_j}(v) = dρ(J·ξ_j v)` by central differences with step
/// `10⁻⁵·max(1, |v|)` along the unit direction.
pub fn momentum_from_potential(
    pot: &PotentialChart,
    act: &LieAlgebraAction,
    v: &[C64],
) -> Result<Vec<f64>, MomentError> {
    act.check(v)?;
    if v.len() != pot.dim {
        return Err(MomentError::DimensionMismatch {
            expected: pot.dim,
            found: v.len(),
        });
    }
    let h = 1e-5 * norm_sq(v).sqrt().max(1.0);
    let i = C64::new(0.0, 1.0);
    (0..act.basis_len())
        .map(|j| {
            let d: Vec<C64> = act.apply(j, v).iter().map(|x| i * x).collect();
            let len = norm_sq(&d).sqrt();
            if len == 0.0 {
                return Ok(0.0);
            }
            let at = |t: f64| -> Result<f64, MomentError> {
                let p: Vec<C64> = v.iter().zip(&d).map(|(a, b)| a + b * (t / len)).collect();
                if !pot.in_domain(&p) {
                    return Err(MomentError::ChartBoundary { point: p });
                }
                Ok(pot.eval(&p))
            };
            Ok(len * (at(h)? - at(-h)?) / (2.0 * h))
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct OrbitResult {
    /// `‖A s − b‖` at the final iterate, `s_ρ = |(t·z)_ρ|²`
    pub residual: f64,
    pub theta: Vec<f64>,
    pub iterations: usize,
}

/// Searches the real torus orbit `{exp(θ)·z}` for a point with
/// `Σ_ρ A_ρ |z_ρ|² = b`.
///
/// Minimizes `F(θ) = ½‖A s(θ) − b‖²`, `s_ρ = |z_ρ|²·exp(2(Aᵀθ)_ρ)`, by
/// descent steps with Armijo backtracking. Steps follow the gradient
/// preconditioned by the damped Gauss–Newton metric `JᵀJ + λI`.
pub fn orbit_distance_minimize(
    w: &WeightMatrix,
    z: &[C64],
    target: &[f64],
    seed: u64,
    iters: usize,
) -> Result<OrbitResult, MomentError> {
    let (k, n) = (w.k(), w.n());
    if z.len() != n {
        return Err(MomentError::DimensionMismatch {
            expected: n,
            found: z.len(),
        });
    }
    if target.len() != k {
        return Err(MomentError::DimensionMismatch {
            expected: k,
            found: target.len(),
        });
    }
    let a = DMatrix::from_fn(k, n, |j, r| w.a.get(j, r).to_f64().expect("finite weight"));
    let abs2: Vec<f64> = z.iter().map(|x| x.norm_sqr()).collect();
    let b = DVector::from_column_slice(target);
    let eval = |theta: &DVector<f64>| -> (DVector<f64>, DVector<f64>) {
        let e = a.transpose() * theta;
        let s = DVector::from_fn(n, |r, _| abs2[r] * (2.0 * e[r]).exp());
        let res = &a * &s - &b;
        (s, res)
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut theta = DVector::from_fn(k, |_, _| rng.random_range(-0.1..0.1));
    let (mut s, mut r) = eval(&theta);
    let mut f = 0.5 * r.norm_squared();
    let mut lambda = 1e-3;
    let mut it = 0;
    while it < iters && r.norm() > 1e-13 {
        it += 1;
        // J = ∂(A s)/∂θ = 2 A diag(s) Aᵀ
        let jac = (&a * DMatrix::from_diagonal(&s) * a.transpose()) * 2.0;
        let grad = jac.transpose() * &r;
        if grad.norm() == 0.0 {
            break;
        }
        let metric = jac.transpose() * &jac + DMatrix::identity(k, k) * (lambda * (1.0 + grad.norm()));
        let dir = match metric.clone().cholesky() {
            Some(ch) => -ch.solve(&grad),
            None => -grad.clone(),
        };
        let slope = grad.dot(&dir);
        let mut step = 1.0;
        let mut accepted = false;
        for _ in 0..60 {
            let cand = &theta + &dir * step;
            let (s2, r2) = eval(&cand);
            let f2 = 0.5 * r2.norm_squared();
            if f2.is_finite() && f2 <= f + 1e-4 * step * slope {
                theta = cand;
                s = s2;
                r = r2;
                f = f2;
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if theta.amax() > 1e12 {
            return Err(MomentError::Diverged);
        }
        if accepted {
            lambda = (lambda * 0.3).max(1e-12);
        } else {
            lambda *= 10.0;
            if lambda > 1e12 {
                break;
            }
        }
    }
    Ok(OrbitResult {
        residual: r.norm(),
        theta: theta.iter().copied().collect(),
        iterations: it,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn affine_examples() {
        let act = LieAlgebraAction::torus(&[vec![1]]);
        assert_eq!(momentum_affine(&act, &[c(0.0, 0.0)], None).unwrap(), vec![0.0]);
        assert_eq!(momentum_affine(&act, &[c(1.0, 0.0)], None).unwrap(), vec![-2.0]);
        let act = LieAlgebraAction::torus(&[vec![1, -1]]);
        assert_eq!(
            momentum_affine(&act, &[c(1.0, 0.0), c(1.0, 0.0)], None).unwrap(),
            vec![0.0]
        );
        let shifted = momentum_affine(&LieAlgebraAction::torus(&[vec![1]]), &[c(1.0, 0.0)], Some(&[1.0])).unwrap();
        assert_eq!(shifted, vec![-3.0]);
    }

    #[test]
    fn projective_examples() {
        let act = LieAlgebraAction::torus(&[vec![1, 0]]);
        let mu = |w: [C64; 2]| momentum_projective(&act, &w, None).unwrap()[0];
        assert_eq!(mu([c(1.0, 0.0), c(0.0, 0.0)]), -2.0);
        assert_eq!(mu([c(0.0, 0.0), c(1.0, 0.0)]), 0.0);
        assert_eq!(mu([c(1.0, 0.0), c(1.0, 0.0)]), -1.0);
        assert_eq!(
            momentum_projective(&act, &[c(0.0, 0.0), c(0.0, 0.0)], None),
            Err(MomentError::ZeroPoint)
        );
    }

    #[test]
    fn matrix_basis_matches_torus_shortcut() {
        let m = DMatrix::from_diagonal(&DVector::from_vec(vec![c(0.0, 2.0), c(0.0, -1.0)]));
        let mat = LieAlgebraAction::matrices(vec![m], true).unwrap();
        let tor = LieAlgebraAction::torus(&[vec![2, -1]]);
        let v = [c(0.3, 0.4), c(-1.0, 0.5)];
        let a = momentum_affine(&mat, &v, None).unwrap();
        let b = momentum_affine(&tor, &v, None).unwrap();
        assert!((a[0] - b[0]).abs() < 1e-14);
        let not_anti = DMatrix::from_element(1, 1, c(1.0, 0.0));
        assert_eq!(
            LieAlgebraAction::matrices(vec![not_anti], false),
            Err(MomentError::NotAntiHermitian { index: 0 })
        );
    }

    #[test]
    fn from_potential_examples() {
        let act = LieAlgebraAction::torus(&[vec![1]]);
        let fs = PotentialChart::fs_affine(1);
        let m = momentum_from_potential(&fs, &act, &[c(1.0, 0.0)]).unwrap()[0];
        assert!((m + 1.0).abs() < 1e-9);
        assert_eq!(momentum_from_potential(&fs, &act, &[c(0.0, 0.0)]).unwrap(), vec![0.0]);
        let flat = PotentialChart::norm_sq(1);
        let m = momentum_from_potential(&flat, &act, &[c(1.0, 0.0)]).unwrap()[0];
        assert!((m + 2.0).abs() < 1e-9);
    }

    #[test]
    fn orbit_examples() {
        let w = WeightMatrix::from_rows(&[vec![1, 1]]);
        let r = orbit_distance_minimize(&w, &[c(1.0, 0.0), c(1.0, 0.0)], &[2.0], 1, 200).unwrap();
        assert!(r.residual < 1e-6);
        let r = orbit_distance_minimize(&w, &[c(1.0, 0.0), c(0.0, 0.0)], &[2.0], 1, 200).unwrap();
        assert!(r.residual < 1e-6);
        let w = WeightMatrix::from_rows(&[vec![1]]);
        let r = orbit_distance_minimize(&w, &[c(1.0, 0.0)], &[-1.0], 1, 200).unwrap();
        assert!(r.residual >= 1.0);
    }
}
