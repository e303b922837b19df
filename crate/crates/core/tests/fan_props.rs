use momentforge_core::cox::{action_free, cox_weights, fan_chamber};
use momentforge_core::fan::{parse_fan, random_corpus, CorpusSpec, Fan, ParseOptions, ProjectivityLp};
use num_traits::ToPrimitive;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn bundled(name: &str) -> Fan {
    let path = format!("{}/../../data/{name}", env!("CARGO_MANIFEST_DIR"));
    let text = std::fs::read_to_string(&path).unwrap();
    parse_fan(&text, ParseOptions::default()).unwrap()
}

fn bundled_fans() -> Vec<Fan> {
    ["p2.fan.json", "p1p1p1.fan.json", "fp_ex2.fan.json"]
        .iter()
        .map(|n| bundled(n))
        .collect()
}

#[derive(Debug, PartialEq)]
struct Verdicts {
    smooth: bool,
    complete: bool,
    projective_rays: bool,
    projective_cones: bool,
    free_rank: usize,
    torsion: Vec<String>,
    free: bool,
    chamber_empty: bool,
}

fn verdicts(f: &Fan) -> Verdicts {
    let cg = f.class_group().unwrap();
    let w = cox_weights(f).unwrap();
    Verdicts {
        smooth: f.is_smooth().smooth,
        complete: f.is_complete(),
        projective_rays: f.is_projective_with(ProjectivityLp::RayValues).unwrap().is_projective(),
        projective_cones: f
            .is_projective_with(ProjectivityLp::ConeFunctionals)
            .unwrap()
            .is_projective(),
        free_rank: cg.free_rank,
        torsion: cg.torsion.iter().map(|t| t.to_string()).collect(),
        free: action_free(f, &w).free,
        chamber_empty: fan_chamber(f, &w).unwrap().is_empty(),
    }
}

#[test]
fn verdicts_survive_relabeling() {
    for fan in bundled_fans() {
        let base = verdicts(&fan);
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        for _ in 0..10 {
            let mut ray_perm: Vec<usize> = (0..fan.ray_count()).collect();
            ray_perm.shuffle(&mut rng);
            let mut cone_order: Vec<usize> = (0..fan.max_cones().len()).collect();
            cone_order.shuffle(&mut rng);
            let g = fan.relabeled(&ray_perm, &cone_order);
            // re-validate from scratch rather than trusting the relabeling
            let g = Fan::from_document(&g.to_document(), ParseOptions::default()).unwrap();
            assert_eq!(verdicts(&g), base, "{} under {ray_perm:?} {cone_order:?}", fan.name());
        }
    }
}

// ---------- completeness oracle: direct coverage of sampled directions ----------

fn det3(m: &[[i128; 3]; 3]) -> i128 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

/// Cramer's rule: is `d` a nonnegative combination of the cone's rays?
fn covers(f: &Fan, cone: &[usize], d: &[i128]) -> bool {
    let n = f.dim();
    if cone.len() != n {
        return false;
    }
    let ray = |i: usize, r: usize| f.rays()[cone[i]][r].to_i128().unwrap();
    let mut m = [[0i128; 3]; 3];
    for (i, row) in m.iter_mut().enumerate() {
        for (r, x) in row.iter_mut().enumerate() {
            // pad lower dimensions with an identity block
            *x = if i < n && r < n { ray(i, r) } else { i128::from(i == r) };
        }
    }
    // columns of m^T are the rays; solve m^T λ = d
    let mt = |m: &[[i128; 3]; 3]| {
        let mut t = [[0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                t[i][j] = m[j][i];
            }
        }
        t
    };
    let base = mt(&m);
    let det = det3(&base);
    assert_ne!(det, 0);
    (0..n).all(|i| {
        let mut b = base;
        for r in 0..3 {
            b[r][i] = if r < n { d[r] } else { 0 };
        }
        let num = det3(&b);
        num == 0 || (num > 0) == (det > 0)
    })
}

fn sampled_complete(f: &Fan, samples: usize, seed: u64) -> bool {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..samples).all(|_| {
        let d: Vec<i128> = (0..f.dim()).map(|_| rng.random_range(-1000..=1000)).collect();
        f.max_cones().iter().any(|c| covers(f, c, &d))
    })
}

#[test]
fn completeness_agrees_with_direction_sampling() {
    for fan in bundled_fans() {
        assert!(fan.is_complete());
        assert!(sampled_complete(&fan, 1000, 1), "{}", fan.name());
        assert!(fan.uncovered_direction(1000, 1).is_none());
        // dropping any maximal cone leaves a hole both criteria see
        for drop in 0..fan.max_cones().len() {
            let cones: Vec<Vec<usize>> = fan
                .max_cones()
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != drop)
                .map(|(_, c)| c.clone())
                .collect();
            let rays = fan
                .rays()
                .iter()
                .map(|r| r.iter().map(|x| x.to_i64().unwrap()).collect())
                .collect();
            let Ok(g) = Fan::from_parts("holed", fan.dim(), rays, cones) else {
                continue; // a ray only used by the dropped cone
            };
            assert!(!g.is_complete());
            assert!(!sampled_complete(&g, 1000, 1), "{} minus cone {drop}", fan.name());
        }
    }
}

#[test]
fn corpus_completeness_and_rank() {
    let corpus = random_corpus(&CorpusSpec {
        count: 30,
        seed: 5,
        ..Default::default()
    });
    for cf in &corpus {
        let f = &cf.fan;
        assert!(f.is_complete() && sampled_complete(f, 300, 2), "{:?}", cf.history);
        let cg = f.class_group().unwrap();
        assert_eq!(cg.free_rank, f.ray_count() - f.dim(), "{:?}", cf.history);
    }
}

#[test]
fn support_function_witnesses_reverify() {
    let corpus = random_corpus(&CorpusSpec {
        count: 24,
        seed: 9,
        ..Default::default()
    });
    for cf in &corpus {
        for lp in [ProjectivityLp::RayValues, ProjectivityLp::ConeFunctionals] {
            if let momentforge_core::fan::Projectivity::Projective(w) = cf.fan.is_projective_with(lp).unwrap() {
                assert!(cf.fan.verify_support_function(&w), "{:?}", cf.history);
            }
        }
    }
}
