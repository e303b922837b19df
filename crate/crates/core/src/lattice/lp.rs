use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use super::matrix::RatVector;
use super::simplex::{maximize, LpStatus};

/// One linear constraint `⟨coeffs, x⟩ (=|≥|>) rhs`.
#[derive(Clone, Debug, PartialEq)]
pub struct Constraint {
    pub coeffs: RatVector,
    pub rhs: BigRational,
}

impl Constraint {
    pub fn new(coeffs: RatVector, rhs: BigRational) -> Self {
        Self { coeffs, rhs }
    }

    pub fn homogeneous(coeffs: RatVector) -> Self {
        Self {
            coeffs,
            rhs: BigRational::zero(),
        }
    }
}

/// A system of equalities, weak inequalities and strict inequalities over
/// free rational variables.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct LinearSystem {
    pub dim: usize,
    pub equalities: Vec<Constraint>,
    pub weak: Vec<Constraint>,
    pub strict: Vec<Constraint>,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum LpError {
    #[error("constraint {index} has length {found}, expected {expected}")]
    DimensionMismatch {
        index: usize,
        expected: usize,
        found: usize,
    },
    #[error("system is not homogeneous (constraint with nonzero right-hand side)")]
    NotHomogeneous,
    #[error("margin is unbounded")]
    UnboundedMargin,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Feasibility {
    Feasible(RatVector),
    Infeasible,
}

impl Feasibility {
    pub fn is_feasible(&self) -> bool {
        matches!(self, Feasibility::Feasible(_))
    }

    pub fn witness(&self) -> Option<&RatVector> {
        match self {
            Feasibility::Feasible(w) => Some(w),
            Feasibility::Infeasible => None,
        }
    }
}

/// How strict inequalities are turned into something the simplex accepts.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StrictMode {
    /// `⟨a,x⟩ > 0` becomes `⟨a,x⟩ ≥ 1`; lossless when every constraint is
    /// homogeneous.
    Homogeneous,
    /// An auxiliary margin `t ∈ [0, 1]` is maximized and must be positive.
    Margin,
}

/// Result of maximizing the common margin of the strict constraints.
#[derive(Clone, Debug, PartialEq)]
pub enum MarginOutcome {
    Infeasible,
    Optimal { margin: BigRational, witness: RatVector },
}

impl LinearSystem {
    pub fn new(dim: usize) -> Self {
        Self {
            dim,
            ..Default::default()
        }
    }

    pub fn add_eq(&mut self, coeffs: RatVector, rhs: BigRational) -> &mut Self {
        self.equalities.push(Constraint::new(coeffs, rhs));
        self
    }

    pub fn add_ge(&mut self, coeffs: RatVector, rhs: BigRational) -> &mut Self {
        self.weak.push(Constraint::new(coeffs, rhs));
        self
    }

    pub fn add_gt(&mut self, coeffs: RatVector, rhs: BigRational) -> &mut Self {
        self.strict.push(Constraint::new(coeffs, rhs));
        self
    }

    fn all(&self) -> impl Iterator<Item = &Constraint> {
        self.equalities.iter().chain(&self.weak).chain(&self.strict)
    }

    fn check_dims(&self) -> Result<(), LpError> {
        for (index, c) in self.all().enumerate() {
            if c.coeffs.len() != self.dim {
                return Err(LpError::DimensionMismatch {
                    index,
                    expected: self.dim,
                    found: c.coeffs.len(),
                });
            }
        }
        Ok(())
    }

    pub fn is_homogeneous(&self) -> bool {
        self.all().all(|c| c.rhs.is_zero())
    }

    /// Exact check of every constraint at `x`.
    pub fn satisfied_by(&self, x: &RatVector) -> bool {
        x.len() == self.dim
            && self.equalities.iter().all(|c| c.coeffs.dot(&x.0) == c.rhs)
            && self.weak.iter().all(|c| c.coeffs.dot(&x.0) >= c.rhs)
            && self.strict.iter().all(|c| c.coeffs.dot(&x.0) > c.rhs)
    }

    /// Standard form over `x = x⁺ − x⁻`, one slack per inequality and an
    /// optional margin column (plus its upper-bound slack) at the end.
    fn standard_form(
        &self,
        strict_rhs: Option<&BigRational>,
        margin: bool,
        margin_cap: bool,
    ) -> (Vec<Vec<BigRational>>, Vec<BigRational>, usize) {
        let n = self.dim;
        let n_ineq = self.weak.len() + self.strict.len();
        let margin_cols = usize::from(margin) + usize::from(margin && margin_cap);
        let width = 2 * n + n_ineq + margin_cols;
        let t_col = 2 * n + n_ineq;
        let mut a = Vec::new();
        let mut b = Vec::new();
        let base = |c: &Constraint| {
            let mut row = vec![BigRational::zero(); width];
            for (j, q) in c.coeffs.0.iter().enumerate() {
                row[j] = q.clone();
                row[n + j] = -q;
            }
            row
        };
        for c in &self.equalities {
            a.push(base(c));
            b.push(c.rhs.clone());
        }
        for (k, c) in self.weak.iter().enumerate() {
            let mut row = base(c);
            row[2 * n + k] = -BigRational::one();
            a.push(row);
            b.push(c.rhs.clone());
        }
        for (k, c) in self.strict.iter().enumerate() {
            let mut row = base(c);
            row[2 * n + self.weak.len() + k] = -BigRational::one();
            if margin {
                row[t_col] = -BigRational::one();
            }
            a.push(row);
            b.push(match strict_rhs {
                Some(r) => &c.rhs + r,
                None => c.rhs.clone(),
            });
        }
        if margin && margin_cap {
            let mut row = vec![BigRational::zero(); width];
            row[t_col] = BigRational::one();
            row[t_col + 1] = BigRational::one();
            a.push(row);
            b.push(BigRational::one());
        }
        (a, b, width)
    }

    fn recover(&self, x: &[BigRational]) -> RatVector {
        let n = self.dim;
        RatVector((0..n).map(|j| &x[j] - &x[n + j]).collect())
    }

    /// Largest common margin `t` with `⟨a,x⟩ ≥ rhs + t` on every strict
    /// constraint, subject to all other constraints. Fails with
    /// `UnboundedMargin` when `t` can be made arbitrarily large.
    pub fn max_margin(&self) -> Result<MarginOutcome, LpError> {
        self.check_dims()?;
        let (a, b, width) = self.standard_form(None, true, false);
        let mut c = vec![BigRational::zero(); width];
        c[width - 1] = BigRational::one();
        match maximize(&a, &b, &c) {
            LpStatus::Infeasible => Ok(MarginOutcome::Infeasible),
            LpStatus::Unbounded => Err(LpError::UnboundedMargin),
            LpStatus::Optimal { x, value } => Ok(MarginOutcome::Optimal {
                margin: value,
                witness: self.recover(&x),
            }),
        }
    }
}

/// Decides feasibility exactly; any returned witness has been re-substituted
/// into every constraint.
pub fn lp_feasible(sys: &LinearSystem, mode: StrictMode) -> Result<Feasibility, LpError> {
    sys.check_dims()?;
    let outcome = if sys.strict.is_empty() {
        let (a, b, width) = sys.standard_form(None, false, false);
        match maximize(&a, &b, &vec![BigRational::zero(); width]) {
            LpStatus::Optimal { x, .. } => Feasibility::Feasible(sys.recover(&x)),
            _ => Feasibility::Infeasible,
        }
    } else {
        match mode {
            StrictMode::Homogeneous => {
                if !sys.is_homogeneous() {
                    return Err(LpError::NotHomogeneous);
                }
                let one = BigRational::one();
                let (a, b, width) = sys.standard_form(Some(&one), false, false);
                match maximize(&a, &b, &vec![BigRational::zero(); width]) {
                    LpStatus::Optimal { x, .. } => Feasibility::Feasible(sys.recover(&x)),
                    _ => Feasibility::Infeasible,
                }
            }
            StrictMode::Margin => {
                let (a, b, width) = sys.standard_form(None, true, true);
                let mut c = vec![BigRational::zero(); width];
                c[width - 2] = BigRational::one();
                match maximize(&a, &b, &c) {
                    LpStatus::Optimal { x, value } if value.is_positive() => Feasibility::Feasible(sys.recover(&x)),
                    _ => Feasibility::Infeasible,
                }
            }
        }
    };
    if let Feasibility::Feasible(w) = &outcome {
        assert!(sys.satisfied_by(w), "LP witness failed re-substitution");
    }
    Ok(outcome)
}

/// Certificate returned by [`cone_member`]: coefficients `λ` with
/// `Σ λᵢ gᵢ = point`.
#[derive(Clone, Debug, PartialEq)]
pub struct ConeCertificate {
    pub lambda: RatVector,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConeMode {
    Closed,
    RelativeInterior,
}

/// Membership of `point` in `cone(generators)`.
///
/// In relative-interior mode the certificate has every `λᵢ > 0`, which
/// characterizes the relative interior of a finitely generated cone.
pub fn cone_member(generators: &[RatVector], point: &RatVector, mode: ConeMode) -> Option<ConeCertificate> {
    let dim = point.len();
    assert!(
        generators.iter().all(|g| g.len() == dim),
        "generator dimension mismatch"
    );
    let m = generators.len();
    let cert = match mode {
        ConeMode::Closed => {
            let mut sys = LinearSystem::new(m);
            for r in 0..dim {
                let row = RatVector(generators.iter().map(|g| g[r].clone()).collect());
                sys.add_eq(row, point[r].clone());
            }
            for i in 0..m {
                sys.add_ge(unit(m, i), BigRational::zero());
            }
            lp_feasible(&sys, StrictMode::Homogeneous)
                .expect("well-formed cone system")
                .witness()
                .cloned()?
        }
        ConeMode::RelativeInterior => {
            // variables (λ, s): Σ λᵢ gᵢ − s·point = 0, λ > 0, s > 0
            let mut sys = LinearSystem::new(m + 1);
            for r in 0..dim {
                let mut row: Vec<BigRational> = generators.iter().map(|g| g[r].clone()).collect();
                row.push(-&point[r]);
                sys.add_eq(RatVector(row), BigRational::zero());
            }
            for i in 0..=m {
                sys.add_gt(unit(m + 1, i), BigRational::zero());
            }
            let w = lp_feasible(&sys, StrictMode::Homogeneous)
                .expect("homogeneous cone system")
                .witness()
                .cloned()?;
            let s = w[m].clone();
            RatVector(w.0[..m].iter().map(|l| l / &s).collect())
        }
    };
    verify_cone_certificate(generators, point, &cert, mode)
        .then_some(ConeCertificate { lambda: cert })
        .or_else(|| panic!("cone certificate failed re-verification"))
}

/// Exact re-substitution of a cone certificate.
pub fn verify_cone_certificate(
    generators: &[RatVector],
    point: &RatVector,
    lambda: &RatVector,
    mode: ConeMode,
) -> bool {
    if lambda.len() != generators.len() {
        return false;
    }
    let sign_ok = match mode {
        ConeMode::Closed => lambda.0.iter().all(|l| !l.is_negative()),
        ConeMode::RelativeInterior => lambda.0.iter().all(Signed::is_positive),
    };
    sign_ok
        && (0..point.len()).all(|r| {
            let s: BigRational = generators.iter().zip(&lambda.0).map(|(g, l)| &g[r] * l).sum();
            s == point[r]
        })
}

fn unit(n: usize, i: usize) -> RatVector {
    let mut v = RatVector::zeros(n);
    v.0[i] = BigRational::one();
    v
}

/// Nonzero `s ≥ 0` with `A s = 0`, if one exists. `None` means the
/// recession cone `{s ≥ 0 : A s = 0}` is trivial.
pub fn recession_direction(a: &super::IntMatrix) -> Option<RatVector> {
    let cols = a.cols();
    // maximize Σ s subject to A s = 0, Σ s + slack = 1, s ≥ 0
    let mut rows: Vec<Vec<BigRational>> = a
        .to_rational_rows()
        .into_iter()
        .map(|mut r| {
            r.push(BigRational::zero());
            r
        })
        .collect();
    let mut cap = vec![BigRational::one(); cols];
    cap.push(BigRational::one());
    rows.push(cap);
    let mut b = vec![BigRational::zero(); a.rows()];
    b.push(BigRational::one());
    let mut c = vec![BigRational::one(); cols];
    c.push(BigRational::zero());
    match maximize(&rows, &b, &c) {
        LpStatus::Optimal { x, value } if value.is_positive() => {
            let dir = RatVector(x[..cols].to_vec());
            let image = a.mul_rat(&dir);
            assert!(image.iter().all(Zero::is_zero), "recession certificate");
            Some(dir)
        }
        LpStatus::Optimal { .. } => None,
        other => unreachable!("bounded feasible LP returned {other:?}"),
    }
}

/// True iff `ker(A) ∩ ℝ₊^cols = {0}`.
pub fn recession_trivial(a: &super::IntMatrix) -> bool {
    recession_direction(a).is_none()
}

impl super::IntMatrix {
    pub fn mul_rat(&self, v: &RatVector) -> Vec<BigRational> {
        assert_eq!(self.cols(), v.len());
        (0..self.rows()).map(|r| v.dot_int(self.row(r))).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::super::IntMatrix;
    use super::*;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    fn rv(v: &[i64]) -> RatVector {
        RatVector::from_ints(v)
    }

    #[test]
    fn contradictory_strict_pair_is_infeasible() {
        let mut sys = LinearSystem::new(1);
        sys.add_gt(rv(&[1]), q(0)).add_gt(rv(&[-1]), q(0));
        assert_eq!(
            lp_feasible(&sys, StrictMode::Homogeneous).unwrap(),
            Feasibility::Infeasible
        );
        assert_eq!(lp_feasible(&sys, StrictMode::Margin).unwrap(), Feasibility::Infeasible);
    }

    #[test]
    fn weak_bound_has_witness_one() {
        let mut sys = LinearSystem::new(1);
        sys.add_ge(rv(&[1]), q(1));
        let f = lp_feasible(&sys, StrictMode::Margin).unwrap();
        assert_eq!(f.witness().unwrap(), &rv(&[1]));
    }

    #[test]
    fn homogeneous_mode_rejects_affine_systems() {
        let mut sys = LinearSystem::new(1);
        sys.add_gt(rv(&[1]), q(3));
        assert_eq!(lp_feasible(&sys, StrictMode::Homogeneous), Err(LpError::NotHomogeneous));
        let f = lp_feasible(&sys, StrictMode::Margin).unwrap();
        assert!(f.witness().unwrap()[0] > q(3));
    }

    #[test]
    fn margin_reports_unbounded_separately() {
        let mut sys = LinearSystem::new(1);
        sys.add_gt(rv(&[1]), q(0));
        assert_eq!(sys.max_margin(), Err(LpError::UnboundedMargin));
        let mut bounded = LinearSystem::new(1);
        bounded.add_gt(rv(&[1]), q(0)).add_ge(rv(&[-1]), q(-2));
        match bounded.max_margin().unwrap() {
            MarginOutcome::Optimal { margin, .. } => assert_eq!(margin, q(2)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let mut sys = LinearSystem::new(2);
        sys.add_ge(rv(&[1]), q(0));
        assert!(matches!(
            lp_feasible(&sys, StrictMode::Margin),
            Err(LpError::DimensionMismatch { index: 0, .. })
        ));
    }

    #[test]
    fn cone_membership_examples() {
        let gens = [rv(&[1, 0]), rv(&[0, 1])];
        let c = cone_member(&gens, &rv(&[1, 1]), ConeMode::Closed).unwrap();
        assert_eq!(c.lambda, rv(&[1, 1]));
        assert!(cone_member(&gens, &rv(&[1, 0]), ConeMode::RelativeInterior).is_none());
        assert!(cone_member(&gens, &rv(&[1, 0]), ConeMode::Closed).is_some());
        assert!(cone_member(&gens, &rv(&[-1, 0]), ConeMode::Closed).is_none());
        assert!(cone_member(&[], &rv(&[0, 0]), ConeMode::Closed).is_some());
        assert!(cone_member(&[], &rv(&[0, 0]), ConeMode::RelativeInterior).is_some());
        assert!(cone_member(&[], &rv(&[1, 0]), ConeMode::Closed).is_none());
    }

    #[test]
    fn relative_interior_of_lower_dimensional_cone() {
        // a ray in the plane: relint is the open ray
        let gens = [rv(&[1, 1])];
        assert!(cone_member(&gens, &rv(&[2, 2]), ConeMode::RelativeInterior).is_some());
        assert!(cone_member(&gens, &rv(&[0, 0]), ConeMode::RelativeInterior).is_none());
        // a line (two opposite rays): relint contains the origin
        let line = [rv(&[1, 0]), rv(&[-1, 0])];
        assert!(cone_member(&line, &rv(&[0, 0]), ConeMode::RelativeInterior).is_some());
    }

    #[test]
    fn recession_examples() {
        assert!(recession_trivial(&IntMatrix::from_rows(&[[1, 1]])));
        let d = recession_direction(&IntMatrix::from_rows(&[[1, -1]])).unwrap();
        assert_eq!(d[0], d[1]);
        assert!(recession_trivial(&IntMatrix::from_rows(&[[1, 1, 1]])));
    }
}
