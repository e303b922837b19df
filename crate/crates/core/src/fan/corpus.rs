//! Seeded generator of complete simplicial fans for cross-oracle sweeps.
//!
//! Each fan starts from a seed fan and receives a few random moves:
//! stellar subdivision of a cone (new ray the sum of the cone's rays),
//! weighted stellar subdivision (positive integer weights, usually giving
//! singular cones) and, in dimension 3, bistellar flips across a wall.
//! All moves preserve completeness and face-to-face intersection.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::Fan;
use crate::lattice::{gcd_all, kernel_basis, IntMatrix};

#[derive(Clone, Debug)]
pub struct CorpusSpec {
    pub count: usize,
    pub seed: u64,
    pub max_rays: usize,
    pub max_moves: usize,
    /// Extra starting fans besides the built-in P², P¹×P¹, (P¹)³ and P³.
    pub extra_seeds: Vec<Fan>,
}

impl Default for CorpusSpec {
    fn default() -> Self {
        Self {
            count: 24,
            seed: 0,
            max_rays: 12,
            max_moves: 4,
            extra_seeds: Vec::new(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct CorpusFan {
    pub fan: Fan,
    /// Human-readable move log, e.g. `"star [0, 2]"`.
    pub history: Vec<String>,
}

pub fn builtin_seeds() -> Vec<Fan> {
    let mk = |name: &str, dim, rays: Vec<Vec<i64>>, cones: Vec<Vec<usize>>| {
        Fan::from_parts(name, dim, rays, cones).expect("built-in seed fan")
    };
    let octants = (0..8usize)
        .map(|m| (0..3).map(|i| 2 * i + ((m >> i) & 1)).collect())
        .collect();
    vec![
        mk(
            "P2",
            2,
            vec![vec![1, 0], vec![0, 1], vec![-1, -1]],
            vec![vec![0, 1], vec![1, 2], vec![0, 2]],
        ),
        mk(
            "P1xP1",
            2,
            vec![vec![1, 0], vec![-1, 0], vec![0, 1], vec![0, -1]],
            vec![vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3]],
        ),
        mk(
            "P1xP1xP1",
            3,
            vec![
                vec![1, 0, 0],
                vec![-1, 0, 0],
                vec![0, 1, 0],
                vec![0, -1, 0],
                vec![0, 0, 1],
                vec![0, 0, -1],
            ],
            octants,
        ),
        mk(
            "P3",
            3,
            vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1], vec![-1, -1, -1]],
            vec![vec![0, 1, 2], vec![0, 1, 3], vec![0, 2, 3], vec![1, 2, 3]],
        ),
    ]
}

struct Work {
    dim: usize,
    rays: Vec<Vec<BigInt>>,
    cones: Vec<Vec<usize>>,
}

impl Work {
    fn from_fan(f: &Fan) -> Self {
        Self {
            dim: f.dim(),
            rays: f.rays().to_vec(),
            cones: f.max_cones().to_vec(),
        }
    }

    /// Stellar subdivision of the face `tau` with a new ray in its relative
    /// interior.
    fn star(&mut self, tau: &[usize], weights: &[i64]) -> bool {
        let mut v = vec![BigInt::zero(); self.dim];
        for (&r, &w) in tau.iter().zip(weights) {
            for (x, y) in v.iter_mut().zip(&self.rays[r]) {
                *x += y * w;
            }
        }
        let g = gcd_all(&v);
        if g.is_zero() {
            return false;
        }
        let v: Vec<BigInt> = v.iter().map(|x| x.div_floor(&g)).collect();
        if self.rays.contains(&v) || v.iter().any(|x| x.abs() > BigInt::from(1_000_000)) {
            return false;
        }
        let new = self.rays.len();
        self.rays.push(v);
        let mut cones = Vec::with_capacity(self.cones.len() + tau.len());
        for c in self.cones.drain(..) {
            if tau.iter().all(|r| c.contains(r)) {
                for &drop in tau {
                    let mut nc: Vec<usize> = c.iter().copied().filter(|&r| r != drop).collect();
                    nc.push(new);
                    nc.sort_unstable();
                    cones.push(nc);
                }
            } else {
                cones.push(c);
            }
        }
        self.cones = cones;
        true
    }

    /// Bistellar flip in dimension 3 across the wall `{a, b}` separating
    /// `{a, b, c}` from `{a, b, d}`: valid when the unique linear relation
    /// among the four rays has `a, b` on one side and `c, d` on the other.
    fn flip(&mut self, i: usize, j: usize) -> bool {
        let (ci, cj) = (&self.cones[i], &self.cones[j]);
        let wall: Vec<usize> = ci.iter().copied().filter(|r| cj.contains(r)).collect();
        if self.dim != 3 || wall.len() != 2 {
            return false;
        }
        let c = *ci.iter().find(|r| !wall.contains(r)).unwrap();
        let d = *cj.iter().find(|r| !wall.contains(r)).unwrap();
        let (a, b) = (wall[0], wall[1]);
        let m = IntMatrix::from_rows(&[
            self.rays[a].clone(),
            self.rays[b].clone(),
            self.rays[c].clone(),
            self.rays[d].clone(),
        ])
        .transpose();
        let ker = kernel_basis(&m);
        if ker.len() != 1 {
            return false;
        }
        let k = &ker[0];
        let s: Vec<i32> = k
            .iter()
            .map(|x| {
                if x.is_positive() {
                    1
                } else if x.is_negative() {
                    -1
                } else {
                    0
                }
            })
            .collect();
        if s.contains(&0) || s[0] != s[1] || s[2] != s[3] || s[0] == s[2] {
            return false;
        }
        let edge = {
            let mut e = vec![c, d];
            e.sort_unstable();
            e
        };
        if self.cones.iter().any(|cone| edge.iter().all(|r| cone.contains(r))) {
            return false;
        }
        let mut n1 = vec![a, c, d];
        let mut n2 = vec![b, c, d];
        n1.sort_unstable();
        n2.sort_unstable();
        let (hi, lo) = (i.max(j), i.min(j));
        self.cones.remove(hi);
        self.cones.remove(lo);
        self.cones.push(n1);
        self.cones.push(n2);
        true
    }

    fn finish(self, name: String) -> Fan {
        let rays = self
            .rays
            .iter()
            .map(|r| r.iter().map(|x| x.to_i64().expect("small ray")).collect())
            .collect();
        Fan::from_parts(name, self.dim, rays, self.cones).expect("moves preserve fan structure")
    }
}

fn random_move(w: &mut Work, rng: &mut ChaCha8Rng, log: &mut Vec<String>) {
    for _ in 0..32 {
        let roll = rng.random_range(0..10);
        if roll < 5 || (roll < 8 && w.dim == 2) {
            let cone = w.cones.choose(rng).unwrap().clone();
            let size = rng.random_range(2..=cone.len());
            let tau: Vec<usize> = cone.choose_multiple(rng, size).copied().collect();
            let mut tau = tau;
            tau.sort_unstable();
            if w.star(&tau, &vec![1; tau.len()]) {
                log.push(format!("star {tau:?}"));
                return;
            }
        } else if roll < 8 {
            let i = rng.random_range(0..w.cones.len());
            let neighbours: Vec<usize> = (0..w.cones.len())
                .filter(|&j| j != i && w.cones[i].iter().filter(|r| w.cones[j].contains(r)).count() == 2)
                .collect();
            if let Some(&j) = neighbours.choose(rng) {
                if w.flip(i, j) {
                    log.push("flip".to_string());
                    return;
                }
            }
        } else {
            let cone = w.cones.choose(rng).unwrap().clone();
            let size = rng.random_range(2..=cone.len());
            let mut tau: Vec<usize> = cone.choose_multiple(rng, size).copied().collect();
            tau.sort_unstable();
            let weights: Vec<i64> = tau.iter().map(|_| rng.random_range(1..=3)).collect();
            if w.star(&tau, &weights) {
                log.push(format!("weighted star {tau:?} {weights:?}"));
                return;
            }
        }
    }
}

/// Deterministic corpus of complete simplicial fans (dim ≤ 3).
pub fn random_corpus(spec: &CorpusSpec) -> Vec<CorpusFan> {
    let mut seeds = builtin_seeds();
    seeds.extend(spec.extra_seeds.iter().cloned());
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    (0..spec.count)
        .map(|idx| {
            let start = &seeds[idx % seeds.len()];
            let mut w = Work::from_fan(start);
            let mut history = vec![format!("seed {}", start.name())];
            let moves = rng.random_range(0..=spec.max_moves);
            for _ in 0..moves {
                if w.rays.len() >= spec.max_rays {
                    break;
                }
                random_move(&mut w, &mut rng, &mut history);
            }
            CorpusFan {
                fan: w.finish(format!("corpus-{idx}")),
                history,
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fan::{FanDocument, ParseOptions};

    #[test]
    fn corpus_fans_are_valid_and_complete() {
        let corpus = random_corpus(&CorpusSpec {
            count: 30,
            seed: 11,
            ..Default::default()
        });
        assert_eq!(corpus.len(), 30);
        for cf in &corpus {
            let f = &cf.fan;
            assert!(f.dim() <= 3 && f.ray_count() <= 12, "{:?}", cf.history);
            assert!(f.is_complete(), "{:?}", cf.history);
            assert!(f.uncovered_direction(100, 5).is_none(), "{:?}", cf.history);
            // full validation including face-to-face
            let doc: FanDocument = f.to_document();
            Fan::from_document(&doc, ParseOptions::default()).unwrap();
        }
    }

    #[test]
    fn corpus_is_deterministic() {
        let a = random_corpus(&CorpusSpec::default());
        let b = random_corpus(&CorpusSpec::default());
        assert!(a.iter().zip(&b).all(|(x, y)| x.fan == y.fan));
    }
}
