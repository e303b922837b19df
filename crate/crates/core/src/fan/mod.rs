//! Simplicial fans and the verdicts a toric variety's combinatorics decides:
//! smoothness, completeness, projectivity and the divisor class group.

mod corpus;
mod verdicts;

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lattice::{lp_feasible, IntMatrix, LinearSystem, RatVector, StrictMode};

pub use corpus::{builtin_seeds, random_corpus, CorpusFan, CorpusSpec};
pub use verdicts::{ClassGroupReport, Projectivity, ProjectivityLp, SmoothVerdict, SupportFunctionWitness};

/// Largest number of maximal cones for which face-to-face intersection is
/// validated at parse time.
pub const FACE_CHECK_LIMIT: usize = 64;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum FanError {
    #[error("schema: {0}")]
    Schema(String),
    #[error("ray {index} is not primitive")]
    NonPrimitiveRay { index: usize },
    #[error("rays {first} and {second} coincide")]
    DuplicateRay { first: usize, second: usize },
    #[error("maximal cone {cone} has linearly dependent rays")]
    DependentConeRays { cone: usize },
    #[error("maximal cones {first} and {second} do not meet in a common face")]
    NotFaceToFace { first: usize, second: usize },
    #[error("ray {index} lies in no maximal cone")]
    UnusedRay { index: usize },
    #[error("fan is not complete")]
    NotComplete,
    #[error("rays do not span the ambient space")]
    RaysDoNotSpan,
}

/// On-disk fan description. Indices are 0-based.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FanDocument {
    pub name: String,
    pub dim: usize,
    pub rays: Vec<Vec<i64>>,
    pub max_cones: Vec<Vec<usize>>,
    #[serde(default)]
    pub normalize_rays: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<String>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ParseOptions {
    /// Skip the face-to-face validation (used for generated corpora whose
    /// construction guarantees it).
    pub trust_fan: bool,
}

/// A simplicial fan: primitive rays plus maximal cones given by ray indices
/// (each sorted ascending).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fan {
    name: String,
    dim: usize,
    rays: Vec<Vec<BigInt>>,
    cones: Vec<Vec<usize>>,
    face_checked: bool,
}

/// Parses and validates a fan JSON document.
pub fn parse_fan(text: &str, opts: ParseOptions) -> Result<Fan, FanError> {
    let doc: FanDocument = serde_json::from_str(text).map_err(|e| FanError::Schema(e.to_string()))?;
    Fan::from_document(&doc, opts)
}

impl Fan {
    pub fn from_document(doc: &FanDocument, opts: ParseOptions) -> Result<Self, FanError> {
        let n = doc.dim;
        if n == 0 {
            return Err(FanError::Schema("dim must be positive".into()));
        }
        if doc.rays.is_empty() {
            return Err(FanError::Schema("no rays".into()));
        }
        let mut rays = Vec::with_capacity(doc.rays.len());
        for (index, r) in doc.rays.iter().enumerate() {
            if r.len() != n {
                return Err(FanError::Schema(format!(
                    "ray {index} has {} coordinates, expected {n}",
                    r.len()
                )));
            }
            let v: Vec<BigInt> = r.iter().map(|&x| BigInt::from(x)).collect();
            let g = crate::lattice::gcd_all(&v);
            if g.is_zero() {
                return Err(FanError::NonPrimitiveRay { index });
            }
            if g.is_one() {
                rays.push(v);
            } else if doc.normalize_rays {
                rays.push(v.iter().map(|x| x.div_floor(&g)).collect());
            } else {
                return Err(FanError::NonPrimitiveRay { index });
            }
        }
        for i in 0..rays.len() {
            for j in i + 1..rays.len() {
                if rays[i] == rays[j] {
                    return Err(FanError::DuplicateRay { first: i, second: j });
                }
            }
        }
        let mut cones = Vec::with_capacity(doc.max_cones.len());
        let mut seen = BTreeSet::new();
        for (ci, c) in doc.max_cones.iter().enumerate() {
            let mut c = c.clone();
            c.sort_unstable();
            if c.is_empty() {
                return Err(FanError::Schema(format!("maximal cone {ci} is empty")));
            }
            if c.windows(2).any(|w| w[0] == w[1]) {
                return Err(FanError::Schema(format!("maximal cone {ci} repeats a ray index")));
            }
            if let Some(&bad) = c.iter().find(|&&i| i >= rays.len()) {
                return Err(FanError::Schema(format!(
                    "maximal cone {ci} references ray {bad}, but there are {} rays",
                    rays.len()
                )));
            }
            if !seen.insert(c.clone()) {
                return Err(FanError::Schema(format!("maximal cone {ci} is listed twice")));
            }
            let sub = IntMatrix::from_rows(&c.iter().map(|&i| rays[i].clone()).collect::<Vec<_>>());
            if c.len() > n || sub.rank() != c.len() {
                return Err(FanError::DependentConeRays { cone: ci });
            }
            cones.push(c);
        }
        if cones.is_empty() {
            return Err(FanError::Schema("no maximal cones".into()));
        }
        let used: BTreeSet<usize> = cones.iter().flatten().copied().collect();
        if let Some(index) = (0..rays.len()).find(|i| !used.contains(i)) {
            return Err(FanError::UnusedRay { index });
        }
        for (i, a) in cones.iter().enumerate() {
            for (j, b) in cones.iter().enumerate().skip(i + 1) {
                if a.iter().all(|x| b.contains(x)) || b.iter().all(|x| a.contains(x)) {
                    return Err(FanError::Schema(format!(
                        "maximal cone {} is a face of maximal cone {}",
                        if a.len() < b.len() { i } else { j },
                        if a.len() < b.len() { j } else { i }
                    )));
                }
            }
        }
        let mut fan = Fan {
            name: doc.name.clone(),
            dim: n,
            rays,
            cones,
            face_checked: false,
        };
        if !opts.trust_fan && fan.cones.len() <= FACE_CHECK_LIMIT {
            fan.check_face_to_face()?;
            fan.face_checked = true;
        }
        Ok(fan)
    }

    /// Builds a fan from trusted data (rays primitive and distinct, cones
    /// simplicial and face-to-face). Used by generators; still checks the
    /// cheap invariants in debug builds.
    pub fn from_parts(
        name: impl Into<String>,
        dim: usize,
        rays: Vec<Vec<i64>>,
        cones: Vec<Vec<usize>>,
    ) -> Result<Self, FanError> {
        let doc = FanDocument {
            name: name.into(),
            dim,
            rays,
            max_cones: cones,
            normalize_rays: false,
            provenance: None,
        };
        Self::from_document(&doc, ParseOptions { trust_fan: true })
    }

    pub fn to_document(&self) -> FanDocument {
        use num_traits::ToPrimitive;
        FanDocument {
            name: self.name.clone(),
            dim: self.dim,
            rays: self
                .rays
                .iter()
                .map(|r| r.iter().map(|x| x.to_i64().expect("ray fits in i64")).collect())
                .collect(),
            max_cones: self.cones.clone(),
            normalize_rays: false,
            provenance: None,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rays(&self) -> &[Vec<BigInt>] {
        &self.rays
    }

    pub fn ray_count(&self) -> usize {
        self.rays.len()
    }

    pub fn max_cones(&self) -> &[Vec<usize>] {
        &self.cones
    }

    /// Whether face-to-face intersection was validated at construction.
    pub fn face_checked(&self) -> bool {
        self.face_checked
    }

    /// `|Σ(1)| × n` matrix whose rows are the ray generators.
    pub fn ray_matrix(&self) -> IntMatrix {
        IntMatrix::from_rows(&self.rays)
    }

    /// Matrix whose rows are the rays of maximal cone `cone`.
    pub fn cone_matrix(&self, cone: usize) -> IntMatrix {
        IntMatrix::from_rows(
            &self.cones[cone]
                .iter()
                .map(|&i| self.rays[i].clone())
                .collect::<Vec<_>>(),
        )
    }

    pub fn ray_rat(&self, i: usize) -> RatVector {
        RatVector::from_ints(&self.rays[i])
    }

    /// Ray indices not in maximal cone `cone`, ascending.
    pub fn complement(&self, cone: usize) -> Vec<usize> {
        (0..self.rays.len()).filter(|i| !self.cones[cone].contains(i)).collect()
    }

    /// Codimension-one faces of full-dimensional maximal cones, keyed by
    /// their sorted ray indices, with the maximal cones containing each.
    pub fn walls(&self) -> BTreeMap<Vec<usize>, Vec<usize>> {
        let mut walls: BTreeMap<Vec<usize>, Vec<usize>> = BTreeMap::new();
        for (ci, c) in self.cones.iter().enumerate() {
            if c.len() != self.dim {
                continue;
            }
            for skip in 0..c.len() {
                let wall: Vec<usize> = c
                    .iter()
                    .enumerate()
                    .filter(|&(k, _)| k != skip)
                    .map(|(_, &r)| r)
                    .collect();
                walls.entry(wall).or_default().push(ci);
            }
        }
        walls
    }

    /// Same fan with rays renumbered by `ray_perm` (old index → new index)
    /// and maximal cones reordered by `cone_order` (new position → old index).
    pub fn relabeled(&self, ray_perm: &[usize], cone_order: &[usize]) -> Fan {
        assert_eq!(ray_perm.len(), self.rays.len());
        assert_eq!(cone_order.len(), self.cones.len());
        let mut rays = vec![Vec::new(); self.rays.len()];
        for (old, &new) in ray_perm.iter().enumerate() {
            rays[new] = self.rays[old].clone();
        }
        let cones = cone_order
            .iter()
            .map(|&old| {
                let mut c: Vec<usize> = self.cones[old].iter().map(|&r| ray_perm[r]).collect();
                c.sort_unstable();
                c
            })
            .collect();
        Fan {
            name: self.name.clone(),
            dim: self.dim,
            rays,
            cones,
            face_checked: self.face_checked,
        }
    }

    /// Every pair of maximal cones must intersect in the cone spanned by
    /// their common rays. For simplicial cones that holds iff no point of
    /// the intersection has a positive coefficient on a non-shared ray.
    fn check_face_to_face(&self) -> Result<(), FanError> {
        for i in 0..self.cones.len() {
            for j in i + 1..self.cones.len() {
                if !self.meet_properly(i, j) {
                    return Err(FanError::NotFaceToFace { first: i, second: j });
                }
            }
        }
        Ok(())
    }

    fn meet_properly(&self, i: usize, j: usize) -> bool {
        let (a, b) = (&self.cones[i], &self.cones[j]);
        let vars: Vec<(usize, bool, i64)> = a
            .iter()
            .map(|&r| (r, b.contains(&r), 1))
            .chain(b.iter().map(|&r| (r, a.contains(&r), -1)))
            .collect();
        let m = vars.len();
        let mut sys = LinearSystem::new(m);
        for k in 0..self.dim {
            let row = vars
                .iter()
                .map(|&(r, _, s)| BigRational::from_integer(&self.rays[r][k] * s))
                .collect();
            sys.add_eq(RatVector(row), BigRational::zero());
        }
        let outside: Vec<BigRational> = vars
            .iter()
            .map(|&(_, shared, _)| {
                if shared {
                    BigRational::zero()
                } else {
                    BigRational::one()
                }
            })
            .collect();
        sys.add_eq(RatVector(outside), BigRational::one());
        for v in 0..m {
            let mut e = RatVector::zeros(m);
            e.0[v] = BigRational::one();
            sys.add_ge(e, BigRational::zero());
        }
        !lp_feasible(&sys, StrictMode::Margin)
            .expect("well-formed face system")
            .is_feasible()
    }
}
