//! Cox construction and torus GIT for linear actions: Gale-dual weights,
//! the irrelevant locus, freeness, semistability at a level, momentum-fibre
//! compactness and the fan's own GIT chamber.
//!
//! Everything here uses the scaled target `b`; the analytic momentum level
//! is `−2b` (see [`level_to_target`]).

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::fan::{Fan, FanError};
use crate::lattice::{
    cone_member, kernel_basis, lp_feasible, recession_direction, row_hermite, smith_normal_form, ConeMode, IntMatrix,
    LinearSystem, RatVector, StrictMode,
};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum CoxError {
    #[error("class group has torsion {0:?}")]
    TorsionClassGroup(Vec<BigInt>),
    #[error(transparent)]
    Fan(#[from] FanError),
    #[error("target has length {found}, expected {expected}")]
    TargetDimension { expected: usize, found: usize },
    #[error("support index {index} out of range for {n} coordinates")]
    SupportIndex { index: usize, n: usize },
}

/// `k × N` integer weight matrix; column `ρ` is the weight of `z_ρ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightMatrix {
    pub a: IntMatrix,
}

impl WeightMatrix {
    pub fn new(a: IntMatrix) -> Self {
        Self { a }
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        Self {
            a: IntMatrix::from_rows(rows),
        }
    }

    /// Torus rank.
    pub fn k(&self) -> usize {
        self.a.rows()
    }

    /// Number of coordinates.
    pub fn n(&self) -> usize {
        self.a.cols()
    }

    pub fn weight(&self, rho: usize) -> RatVector {
        RatVector::from_ints(&self.a.column(rho))
    }

    pub fn weights(&self, support: &SupportSet) -> Vec<RatVector> {
        support.iter().map(|r| self.weight(r)).collect()
    }

    fn check_target(&self, t: &RatVector) -> Result<(), CoxError> {
        if t.len() != self.k() {
            return Err(CoxError::TargetDimension {
                expected: self.k(),
                found: t.len(),
            });
        }
        Ok(())
    }

    fn check_support(&self, s: &SupportSet) -> Result<(), CoxError> {
        match s.iter().find(|&i| i >= self.n()) {
            Some(index) => Err(CoxError::SupportIndex { index, n: self.n() }),
            None => Ok(()),
        }
    }
}

/// Coordinates `ρ` with `z_ρ ≠ 0`.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SupportSet(pub BTreeSet<usize>);

impl SupportSet {
    pub fn new(it: impl IntoIterator<Item = usize>) -> Self {
        Self(it.into_iter().collect())
    }

    pub fn full(n: usize) -> Self {
        Self((0..n).collect())
    }

    pub fn from_mask(mask: u64, n: usize) -> Self {
        Self((0..n).filter(|i| mask >> i & 1 == 1).collect())
    }

    pub fn contains(&self, i: usize) -> bool {
        self.0.contains(&i)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Gale dual of the ray matrix: rows span `{x : xᵀR = 0}` and the matrix is
/// in row Hermite form, so the result is canonical.
pub fn cox_weights(fan: &Fan) -> Result<WeightMatrix, CoxError> {
    let cg = fan.class_group()?;
    if !cg.torsion.is_empty() {
        return Err(CoxError::TorsionClassGroup(cg.torsion));
    }
    let r = fan.ray_matrix();
    let ker = kernel_basis(&r.transpose());
    debug_assert_eq!(ker.len(), cg.free_rank);
    if ker.is_empty() {
        // rays form a basis: trivial torus
        return Ok(WeightMatrix {
            a: IntMatrix::zeros(0, r.rows()),
        });
    }
    let a = row_hermite(&IntMatrix::from_rows(&ker));
    let w = WeightMatrix { a };
    assert!(w.a.mul(&r).is_zero(), "Gale duality A·R = 0");
    assert!(smith_normal_form(&w.a).all_units(), "weights surject onto Z^k");
    Ok(w)
}

/// `z ∉ Z(Σ)`: some maximal cone has all complementary coordinates nonzero.
pub fn point_relevant(fan: &Fan, support: &SupportSet) -> bool {
    (0..fan.max_cones().len()).any(|ci| fan.complement(ci).iter().all(|&r| support.contains(r)))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreeVerdict {
    pub free: bool,
    /// cone index and invariant factors of its complementary weights
    pub offending: Option<(usize, Vec<BigInt>)>,
}

/// The torus acts freely off `Z(Σ)` iff on every chart the complementary
/// weights generate `ℤᵏ`.
pub fn action_free(fan: &Fan, w: &WeightMatrix) -> FreeVerdict {
    for ci in (0..fan.max_cones().len()).filter(|_| w.k() > 0) {
        let sub = w.a.select_columns(&fan.complement(ci));
        let snf = smith_normal_form(&sub);
        let factors = snf.invariant_factors();
        if factors.len() < w.k() || !snf.all_units() {
            return FreeVerdict {
                free: false,
                offending: Some((ci, factors)),
            };
        }
    }
    FreeVerdict {
        free: true,
        offending: None,
    }
}

/// Semistability verdict with its certificate: `target = Σ λ_ρ a_ρ` over
/// the support.
#[derive(Clone, Debug, PartialEq)]
pub struct Semistability {
    pub semistable: bool,
    pub lambda: Option<RatVector>,
}

/// Torus Kempf–Ness: `z` with the given support is semistable at target `b`
/// iff `b ∈ cone{a_ρ : ρ ∈ support}`.
pub fn semistable_support(
    w: &WeightMatrix,
    target: &RatVector,
    support: &SupportSet,
) -> Result<Semistability, CoxError> {
    w.check_target(target)?;
    w.check_support(support)?;
    let cert = cone_member(&w.weights(support), target, ConeMode::Closed);
    Ok(Semistability {
        semistable: cert.is_some(),
        lambda: cert.map(|c| c.lambda),
    })
}

/// Stable variant: `b` in the relative interior of the support cone and the
/// support weights span `ℚᵏ`.
pub fn stable_support(w: &WeightMatrix, target: &RatVector, support: &SupportSet) -> Result<Semistability, CoxError> {
    w.check_target(target)?;
    w.check_support(support)?;
    let cols: Vec<usize> = support.iter().collect();
    if w.a.select_columns(&cols).rank() < w.k() {
        return Ok(Semistability {
            semistable: false,
            lambda: None,
        });
    }
    let cert = cone_member(&w.weights(support), target, ConeMode::RelativeInterior);
    Ok(Semistability {
        semistable: cert.is_some(),
        lambda: cert.map(|c| c.lambda),
    })
}

/// Shape of `{s ≥ 0 : A s = b}`, the image of the momentum fibre under
/// `z ↦ (|z_ρ|²)`.
#[derive(Clone, Debug, PartialEq)]
pub enum FiberVerdict {
    Empty,
    /// `point` lies in the fibre and the recession cone is trivial.
    Compact {
        point: RatVector,
    },
    /// `point` lies in the fibre; `direction ≥ 0`, nonzero, with `A·direction = 0`.
    Noncompact {
        point: RatVector,
        direction: RatVector,
    },
}

impl FiberVerdict {
    pub fn label(&self) -> &'static str {
        match self {
            FiberVerdict::Empty => "empty",
            FiberVerdict::Compact { .. } => "compact",
            FiberVerdict::Noncompact { .. } => "noncompact",
        }
    }
}

pub fn fiber_classify(w: &WeightMatrix, target: &RatVector) -> Result<FiberVerdict, CoxError> {
    w.check_target(target)?;
    let n = w.n();
    let mut sys = LinearSystem::new(n);
    for (j, row) in w.a.to_rational_rows().into_iter().enumerate() {
        sys.add_eq(RatVector(row), target[j].clone());
    }
    for i in 0..n {
        let mut e = RatVector::zeros(n);
        e.0[i] = BigRational::one();
        sys.add_ge(e, BigRational::zero());
    }
    let Some(point) = lp_feasible(&sys, StrictMode::Margin)
        .expect("well-formed fibre system")
        .witness()
        .cloned()
    else {
        return Ok(FiberVerdict::Empty);
    };
    Ok(match recession_direction(&w.a) {
        None => FiberVerdict::Compact { point },
        Some(direction) => FiberVerdict::Noncompact { point, direction },
    })
}

#[derive(Clone, Debug, PartialEq)]
pub enum Chamber {
    /// `target` lies in the relative interior of every complementary cone;
    /// `lambdas[σ]` is the certificate for cone `σ`.
    Witness {
        target: RatVector,
        lambdas: Vec<RatVector>,
    },
    Empty,
}

impl Chamber {
    pub fn is_empty(&self) -> bool {
        matches!(self, Chamber::Empty)
    }
}

/// Searches the intersection of `relint cone{a_ρ : ρ ∉ σ}` over all maximal
/// cones σ.
///
/// For a complete simplicial fan the complementary weights of each cone are
/// a basis of `ℚᵏ`, so membership in the open cone is `(A_σᶜ⁻¹ b)_i > 0`.
/// Those conditions are homogeneous and are solved as `≥ 1`.
pub fn fan_chamber(fan: &Fan, w: &WeightMatrix) -> Result<Chamber, CoxError> {
    if !fan.is_complete() {
        return Err(FanError::NotComplete.into());
    }
    let k = w.k();
    let mut sys = LinearSystem::new(k);
    for ci in 0..fan.max_cones().len() {
        let sub = w.a.select_columns(&fan.complement(ci));
        let inv = sub
            .rational_inverse()
            .expect("complementary weights of a full-dimensional simplicial cone form a basis");
        for row in inv {
            sys.add_ge(RatVector(row), BigRational::one());
        }
    }
    let Some(target) = lp_feasible(&sys, StrictMode::Homogeneous)
        .expect("well-formed chamber system")
        .witness()
        .cloned()
    else {
        return Ok(Chamber::Empty);
    };
    let target = primitive_direction(&target);
    let lambdas = (0..fan.max_cones().len())
        .map(|ci| {
            let gens = w.weights(&SupportSet::new(fan.complement(ci)));
            cone_member(&gens, &target, ConeMode::RelativeInterior)
                .expect("chamber witness re-verifies in every relative interior")
                .lambda
        })
        .collect();
    Ok(Chamber::Witness { target, lambdas })
}

/// Whether `target` lies in the fan's chamber; on failure returns the first
/// cone whose relative interior misses it and whether it still lies in the
/// closed cone (a wall of the chamber).
pub fn chamber_contains(
    fan: &Fan,
    w: &WeightMatrix,
    target: &RatVector,
) -> Result<Result<(), (usize, bool)>, CoxError> {
    w.check_target(target)?;
    for ci in 0..fan.max_cones().len() {
        let gens = w.weights(&SupportSet::new(fan.complement(ci)));
        if cone_member(&gens, target, ConeMode::RelativeInterior).is_none() {
            let on_wall = cone_member(&gens, target, ConeMode::Closed).is_some();
            return Ok(Err((ci, on_wall)));
        }
    }
    Ok(Ok(()))
}

/// Scales a rational direction to the primitive integer vector on its ray.
fn primitive_direction(v: &RatVector) -> RatVector {
    use num_integer::Integer;
    let l = v.0.iter().fold(BigInt::one(), |l, q| l.lcm(q.denom()));
    let ints: Vec<BigInt> =
        v.0.iter()
            .map(|q| (q * BigRational::from_integer(l.clone())).to_integer())
            .collect();
    let g = crate::lattice::gcd_all(&ints);
    if g.is_zero() {
        return v.clone();
    }
    RatVector(ints.iter().map(|x| BigRational::new(x.clone(), g.abs())).collect())
}

/// Analytic level `μ = −2·Σ A|z|²` to scaled target `b = −level/2`.
pub fn level_to_target(level: &RatVector) -> RatVector {
    let half = BigRational::new((-1).into(), 2.into());
    RatVector(level.0.iter().map(|x| x * &half).collect())
}

pub fn target_to_level(target: &RatVector) -> RatVector {
    let m2 = BigRational::from_integer((-2).into());
    RatVector(target.0.iter().map(|x| x * &m2).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fan(rays: &[&[i64]], cones: &[&[usize]]) -> Fan {
        Fan::from_parts(
            "t",
            rays[0].len(),
            rays.iter().map(|r| r.to_vec()).collect(),
            cones.iter().map(|c| c.to_vec()).collect(),
        )
        .unwrap()
    }

    fn p2() -> Fan {
        fan(&[&[1, 0], &[0, 1], &[-1, -1]], &[&[0, 1], &[1, 2], &[2, 0]])
    }

    fn p1p1() -> Fan {
        fan(
            &[&[1, 0], &[-1, 0], &[0, 1], &[0, -1]],
            &[&[0, 2], &[0, 3], &[1, 2], &[1, 3]],
        )
    }

    fn rv(v: &[i64]) -> RatVector {
        RatVector::from_ints(v)
    }

    #[test]
    fn weights_of_small_fans() {
        assert_eq!(cox_weights(&p2()).unwrap(), WeightMatrix::from_rows(&[vec![1, 1, 1]]));
        assert_eq!(
            cox_weights(&p1p1()).unwrap(),
            WeightMatrix::from_rows(&[vec![1, 1, 0, 0], vec![0, 0, 1, 1]])
        );
        let tors = fan(&[&[1, 0], &[-1, 2], &[-1, -2]], &[&[0, 1], &[1, 2], &[2, 0]]);
        assert!(matches!(cox_weights(&tors), Err(CoxError::TorsionClassGroup(_))));
    }

    #[test]
    fn relevance_on_p2() {
        let f = p2();
        assert!(point_relevant(&f, &SupportSet::full(3)));
        assert!(!point_relevant(&f, &SupportSet::default()));
        assert!(point_relevant(&f, &SupportSet::new([0, 1])));
        assert!(point_relevant(&f, &SupportSet::new([2])));
    }

    #[test]
    fn freeness() {
        let f = p2();
        assert!(action_free(&f, &cox_weights(&f).unwrap()).free);
        let weighted = fan(&[&[1, 0], &[0, 1], &[-1, -2]], &[&[0, 1], &[1, 2], &[2, 0]]);
        let w = cox_weights(&weighted).unwrap();
        assert_eq!(w, WeightMatrix::from_rows(&[vec![1, 2, 1]]));
        let v = action_free(&weighted, &w);
        assert!(!v.free);
        let (ci, factors) = v.offending.unwrap();
        assert_eq!(weighted.complement(ci), vec![1]);
        assert_eq!(factors, vec![BigInt::from(2)]);
    }

    #[test]
    fn semistability_examples() {
        let w = WeightMatrix::from_rows(&[vec![1, 1, 1]]);
        let s = semistable_support(&w, &rv(&[1]), &SupportSet::new([0])).unwrap();
        assert!(s.semistable);
        assert_eq!(s.lambda.unwrap(), rv(&[1]));
        assert!(
            !semistable_support(&w, &rv(&[1]), &SupportSet::default())
                .unwrap()
                .semistable
        );
        let w = WeightMatrix::from_rows(&[vec![1, -1]]);
        assert!(
            semistable_support(&w, &rv(&[0]), &SupportSet::new([0, 1]))
                .unwrap()
                .semistable
        );
        assert!(
            stable_support(&w, &rv(&[0]), &SupportSet::new([0, 1]))
                .unwrap()
                .semistable
        );
        assert!(!stable_support(&w, &rv(&[0]), &SupportSet::new([0])).unwrap().semistable);
        assert!(semistable_support(&w, &rv(&[0, 1]), &SupportSet::new([0])).is_err());
        assert!(semistable_support(&w, &rv(&[0]), &SupportSet::new([5])).is_err());
    }

    #[test]
    fn fibre_examples() {
        let w = WeightMatrix::from_rows(&[vec![1, 1]]);
        assert_eq!(fiber_classify(&w, &rv(&[2])).unwrap().label(), "compact");
        assert_eq!(fiber_classify(&w, &rv(&[-1])).unwrap(), FiberVerdict::Empty);
        let w = WeightMatrix::from_rows(&[vec![1, -1]]);
        match fiber_classify(&w, &rv(&[0])).unwrap() {
            FiberVerdict::Noncompact { direction, .. } => assert_eq!(direction[0], direction[1]),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn chambers() {
        let f = p2();
        match fan_chamber(&f, &cox_weights(&f).unwrap()).unwrap() {
            Chamber::Witness { target, .. } => assert_eq!(target, rv(&[1])),
            Chamber::Empty => panic!("P2 chamber is nonempty"),
        }
        let f = p1p1();
        match fan_chamber(&f, &cox_weights(&f).unwrap()).unwrap() {
            Chamber::Witness { target, .. } => assert_eq!(target, rv(&[1, 1])),
            Chamber::Empty => panic!("P1xP1 chamber is nonempty"),
        }
        let w = cox_weights(&f).unwrap();
        assert_eq!(chamber_contains(&f, &w, &rv(&[2, 3])).unwrap(), Ok(()));
        // on a wall: inside the closed cone of some chart only
        assert!(matches!(
            chamber_contains(&f, &w, &rv(&[1, 0])).unwrap(),
            Err((_, true))
        ));
        assert!(matches!(
            chamber_contains(&f, &w, &rv(&[-1, 1])).unwrap(),
            Err((_, false))
        ));
    }

    #[test]
    fn level_target_bridge() {
        let level = rv(&[-4, 2]);
        let b = level_to_target(&level);
        assert_eq!(b, rv(&[2, -1]));
        assert_eq!(target_to_level(&b), level);
    }
}
