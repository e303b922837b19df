use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Fan, FanError};
use crate::lattice::{cone_member, lp_feasible, smith_normal_form, ConeMode, LinearSystem, RatVector, StrictMode};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmoothVerdict {
    pub smooth: bool,
    /// First maximal cone whose rays are not part of a lattice basis,
    /// with its invariant factors.
    pub offending: Option<(usize, Vec<BigInt>)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassGroupReport {
    pub free_rank: usize,
    pub torsion: Vec<BigInt>,
}

/// Linear functionals `m_σ`, one per maximal cone, describing a strictly
/// convex piecewise-linear function `φ(u) = ⟨m_σ, u⟩` on `σ`.
#[derive(Clone, Debug, PartialEq)]
pub struct SupportFunctionWitness {
    pub m: Vec<RatVector>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Projectivity {
    Projective(SupportFunctionWitness),
    NonProjective,
}

impl Projectivity {
    pub fn is_projective(&self) -> bool {
        matches!(self, Projectivity::Projective(_))
    }
}

/// Which exact LP decides projectivity.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ProjectivityLp {
    /// Unknowns are the values `h_ρ = φ(u_ρ)`; wall agreement holds by
    /// construction and each wall contributes two inequalities.
    #[default]
    RayValues,
    /// Unknowns are the functionals `m_σ` themselves, with explicit
    /// wall-agreement equalities.
    ConeFunctionals,
}

/// One wall between two full-dimensional maximal cones.
struct Wall {
    rays: Vec<usize>,
    cones: [usize; 2],
    /// ray of `cones[k]` not on the wall
    opposite: [usize; 2],
}

impl Fan {
    pub fn is_smooth(&self) -> SmoothVerdict {
        for ci in 0..self.cones.len() {
            let snf = smith_normal_form(&self.cone_matrix(ci));
            if !snf.all_units() {
                return SmoothVerdict {
                    smooth: false,
                    offending: Some((ci, snf.invariant_factors())),
                };
            }
        }
        SmoothVerdict {
            smooth: true,
            offending: None,
        }
    }

    /// Every maximal cone is full-dimensional and every wall is shared by
    /// exactly two maximal cones.
    pub fn is_complete(&self) -> bool {
        self.cones.iter().all(|c| c.len() == self.dim) && self.walls().values().all(|owners| owners.len() == 2)
    }

    /// Randomized completeness oracle: `samples` seeded integer directions
    /// must each lie in some maximal cone (membership decided exactly).
    /// Returns the first uncovered direction, if any.
    pub fn uncovered_direction(&self, samples: usize, seed: u64) -> Option<Vec<i64>> {
        let inverses: Vec<Option<Vec<Vec<BigRational>>>> = (0..self.cones.len())
            .map(|ci| self.cone_matrix(ci).transpose().rational_inverse())
            .collect();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..samples {
            let p: Vec<i64> = loop {
                let p: Vec<i64> = (0..self.dim).map(|_| rng.random_range(-1000..=1000)).collect();
                if p.iter().any(|&x| x != 0) {
                    break p;
                }
            };
            let pr = RatVector::from_ints(&p);
            let covered = inverses.iter().enumerate().any(|(ci, inv)| match inv {
                Some(inv) => inv.iter().all(|row| !pr.dot(row).is_negative()),
                None => {
                    let gens: Vec<RatVector> = self.cones[ci].iter().map(|&r| self.ray_rat(r)).collect();
                    cone_member(&gens, &pr, ConeMode::Closed).is_some()
                }
            });
            if !covered {
                return Some(p);
            }
        }
        None
    }

    fn interior_walls(&self) -> Vec<Wall> {
        self.walls()
            .into_iter()
            .filter(|(_, owners)| owners.len() == 2)
            .map(|(rays, owners)| {
                let opp = |c: usize| {
                    *self.cones[c]
                        .iter()
                        .find(|r| !rays.contains(r))
                        .expect("wall is a proper face")
                };
                Wall {
                    opposite: [opp(owners[0]), opp(owners[1])],
                    cones: [owners[0], owners[1]],
                    rays,
                }
            })
            .collect()
    }

    /// Decides whether the fan carries a strictly convex support function.
    pub fn is_projective(&self) -> Result<Projectivity, FanError> {
        self.is_projective_with(ProjectivityLp::default())
    }

    pub fn is_projective_with(&self, lp: ProjectivityLp) -> Result<Projectivity, FanError> {
        if !self.is_complete() {
            return Err(FanError::NotComplete);
        }
        let witness = match lp {
            ProjectivityLp::RayValues => self.projectivity_by_ray_values(),
            ProjectivityLp::ConeFunctionals => self.projectivity_by_functionals(),
        };
        Ok(match witness {
            Some(w) => {
                assert!(
                    self.verify_support_function(&w),
                    "support function failed re-verification"
                );
                Projectivity::Projective(w)
            }
            None => Projectivity::NonProjective,
        })
    }

    fn projectivity_by_ray_values(&self) -> Option<SupportFunctionWitness> {
        let n_rays = self.rays.len();
        // coordinates of every ray in the basis of every cone: u = Σ c_ρ u_ρ
        let inverses: Vec<Vec<Vec<BigRational>>> = (0..self.cones.len())
            .map(|ci| {
                self.cone_matrix(ci)
                    .transpose()
                    .rational_inverse()
                    .expect("complete simplicial fan has full-dimensional cones")
            })
            .collect();
        let coords = |ci: usize, ray: usize| -> Vec<BigRational> {
            let u = self.ray_rat(ray);
            inverses[ci].iter().map(|row| u.dot(row)).collect()
        };
        let mut sys = LinearSystem::new(n_rays);
        for wall in self.interior_walls() {
            for k in 0..2 {
                // φ is convex: on the far side's ray, the near cone's
                // functional falls short by at least one
                let (near, far_ray) = (wall.cones[k], wall.opposite[1 - k]);
                let c = coords(near, far_ray);
                let mut row = RatVector::zeros(n_rays);
                row.0[far_ray] += BigRational::one();
                for (ci, &r) in c.iter().zip(&self.cones[near]) {
                    row.0[r] -= ci;
                }
                sys.add_ge(row, BigRational::one());
            }
        }
        let h = lp_feasible(&sys, StrictMode::Homogeneous)
            .expect("well-formed support system")
            .witness()
            .cloned()?;
        let m = inverses
            .iter()
            .enumerate()
            .map(|(ci, inv)| {
                // R_σ m = h_σ, and inv = (R_σᵀ)⁻¹, so m = invᵀ h_σ
                let hs: Vec<&BigRational> = self.cones[ci].iter().map(|&r| &h[r]).collect();
                RatVector(
                    (0..self.dim)
                        .map(|j| inv.iter().zip(&hs).map(|(row, &hr)| &row[j] * hr).sum())
                        .collect(),
                )
            })
            .collect();
        Some(SupportFunctionWitness { m })
    }

    fn projectivity_by_functionals(&self) -> Option<SupportFunctionWitness> {
        let n = self.dim;
        let width = n * self.cones.len();
        let mut sys = LinearSystem::new(width);
        let place = |row: &mut RatVector, ci: usize, u: &[BigInt], sign: i64| {
            for (j, x) in u.iter().enumerate() {
                row.0[ci * n + j] += BigRational::from_integer(x * sign);
            }
        };
        for wall in self.interior_walls() {
            let [a, b] = wall.cones;
            for &r in &wall.rays {
                let mut row = RatVector::zeros(width);
                place(&mut row, a, &self.rays[r], 1);
                place(&mut row, b, &self.rays[r], -1);
                sys.add_eq(row, BigRational::zero());
            }
            for k in 0..2 {
                let (own, other) = (wall.cones[k], wall.cones[1 - k]);
                let u = &self.rays[wall.opposite[k]];
                let mut row = RatVector::zeros(width);
                place(&mut row, own, u, 1);
                place(&mut row, other, u, -1);
                sys.add_ge(row, BigRational::one());
            }
        }
        let x = lp_feasible(&sys, StrictMode::Homogeneous)
            .expect("well-formed support system")
            .witness()
            .cloned()?;
        Some(SupportFunctionWitness {
            m: x.0.chunks(n).map(|c| RatVector(c.to_vec())).collect(),
        })
    }

    /// Exact check of wall agreement and strict crossing on every wall.
    pub fn verify_support_function(&self, w: &SupportFunctionWitness) -> bool {
        if w.m.len() != self.cones.len() || w.m.iter().any(|m| m.len() != self.dim) {
            return false;
        }
        let eval = |ci: usize, r: usize| w.m[ci].dot_int(&self.rays[r]);
        self.interior_walls().iter().all(|wall| {
            let [a, b] = wall.cones;
            wall.rays.iter().all(|&r| eval(a, r) == eval(b, r))
                && (0..2).all(|k| {
                    let (own, other) = (wall.cones[k], wall.cones[1 - k]);
                    let u = wall.opposite[k];
                    eval(own, u) - eval(other, u) >= BigRational::one()
                })
        })
    }

    /// Cokernel of `m ↦ (⟨m, u_ρ⟩)_ρ`.
    pub fn class_group(&self) -> Result<ClassGroupReport, FanError> {
        let snf = smith_normal_form(&self.ray_matrix());
        let factors = snf.invariant_factors();
        if factors.len() < self.dim {
            return Err(FanError::RaysDoNotSpan);
        }
        Ok(ClassGroupReport {
            free_rank: self.rays.len() - factors.len(),
            torsion: factors.into_iter().filter(|d| !d.is_one() && !d.is_zero()).collect(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::super::{parse_fan, ParseOptions};
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

    fn weighted() -> Fan {
        fan(&[&[1, 0], &[0, 1], &[-1, -2]], &[&[0, 1], &[1, 2], &[2, 0]])
    }

    #[test]
    fn smoothness() {
        assert!(p2().is_smooth().smooth);
        let v = weighted().is_smooth();
        assert!(!v.smooth);
        let (ci, factors) = v.offending.unwrap();
        assert_eq!(weighted().max_cones()[ci], vec![0, 2]);
        assert_eq!(factors, vec![BigInt::from(1), BigInt::from(2)]);
    }

    #[test]
    fn completeness() {
        assert!(p2().is_complete());
        assert!(p2().uncovered_direction(200, 1).is_none());
        let c2 = fan(&[&[1, 0], &[0, 1]], &[&[0, 1]]);
        assert!(!c2.is_complete());
        assert!(c2.uncovered_direction(200, 1).is_some());
        assert_eq!(c2.is_projective(), Err(FanError::NotComplete));
    }

    #[test]
    fn projective_plane_has_support_function() {
        for lp in [ProjectivityLp::RayValues, ProjectivityLp::ConeFunctionals] {
            match p2().is_projective_with(lp).unwrap() {
                Projectivity::Projective(w) => assert!(p2().verify_support_function(&w)),
                Projectivity::NonProjective => panic!("P2 is projective"),
            }
        }
    }

    #[test]
    fn hand_built_support_function_for_p2() {
        // φ = max(0, −x, −y)
        let w = SupportFunctionWitness {
            m: vec![
                RatVector::from_ints(&[0, 0]),
                RatVector::from_ints(&[-1, 0]),
                RatVector::from_ints(&[0, -1]),
            ],
        };
        assert!(p2().verify_support_function(&w));
        let flat = SupportFunctionWitness {
            m: vec![RatVector::from_ints(&[0, 0]); 3],
        };
        assert!(!p2().verify_support_function(&flat));
    }

    #[test]
    fn class_groups() {
        let cg = p2().class_group().unwrap();
        assert_eq!((cg.free_rank, cg.torsion.len()), (1, 0));
        let cg = weighted().class_group().unwrap();
        assert_eq!(cg.free_rank, 1);
        assert!(cg.torsion.is_empty());
        let line = fan(&[&[1, 0]], &[&[0]]);
        assert_eq!(line.class_group(), Err(FanError::RaysDoNotSpan));
        // rays generating an index-2 sublattice
        let tors = fan(&[&[1, 0], &[-1, 2], &[-1, -2]], &[&[0, 1], &[1, 2], &[2, 0]]);
        let cg = tors.class_group().unwrap();
        assert_eq!(cg.torsion, vec![BigInt::from(2)]);
    }

    #[test]
    fn bundled_fans() {
        let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/../../data/");
        let load = |f: &str| {
            parse_fan(
                &std::fs::read_to_string(format!("{dir}{f}")).unwrap(),
                ParseOptions::default(),
            )
            .unwrap()
        };
        let cube = load("p1p1p1.fan.json");
        assert!(cube.is_smooth().smooth && cube.is_complete());
        assert!(cube.is_projective().unwrap().is_projective());
        assert_eq!(cube.class_group().unwrap().free_rank, 3);
        let fp = load("fp_ex2.fan.json");
        assert!(fp.is_smooth().smooth);
        assert!(fp.is_complete());
        assert!(fp.uncovered_direction(1000, 3).is_none());
        assert_eq!(fp.is_projective().unwrap(), Projectivity::NonProjective);
        assert_eq!(
            fp.is_projective_with(ProjectivityLp::ConeFunctionals).unwrap(),
            Projectivity::NonProjective
        );
        let cg = fp.class_group().unwrap();
        assert_eq!((cg.free_rank, cg.torsion.len()), (5, 0));
    }
}
