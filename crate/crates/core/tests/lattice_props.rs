use momentforge_core::lattice::{
    cone_member, kernel_basis, lp_feasible, recession_direction, recession_trivial, row_hermite, smith_normal_form,
    ConeMode, Feasibility, IntMatrix, LinearSystem, RatVector, StrictMode,
};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use proptest::prelude::*;

// ---------- Smith normal form oracles ----------

fn det_i128(m: &[Vec<i128>]) -> i128 {
    let n = m.len();
    if n == 1 {
        return m[0][0];
    }
    (0..n)
        .map(|c| {
            let minor: Vec<Vec<i128>> = m[1..]
                .iter()
                .map(|r| r.iter().enumerate().filter(|&(j, _)| j != c).map(|(_, &x)| x).collect())
                .collect();
            let sign = if c % 2 == 0 { 1 } else { -1 };
            sign * m[0][c] * det_i128(&minor)
        })
        .sum()
}

fn gcd(a: i128, b: i128) -> i128 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    (0u32..1 << n)
        .filter(|m| m.count_ones() as usize == k)
        .map(|m| (0..n).filter(|i| m >> i & 1 == 1).collect())
        .collect()
}

/// d_1⋯d_k equals the gcd of all k×k minors.
fn determinantal_divisors(m: &[Vec<i128>]) -> Vec<i128> {
    let (r, c) = (m.len(), m[0].len());
    (1..=r.min(c))
        .map(|k| {
            let mut g = 0;
            for rows in subsets(r, k) {
                for cols in subsets(c, k) {
                    let sub: Vec<Vec<i128>> = rows.iter().map(|&i| cols.iter().map(|&j| m[i][j]).collect()).collect();
                    g = gcd(g, det_i128(&sub));
                }
            }
            g
        })
        .collect()
}

/// Textbook diagonalization by elementary row and column operations
/// (extended-gcd pivoting on the first row and column).
fn naive_snf(mut m: Vec<Vec<i128>>) -> Vec<i128> {
    let (rows, cols) = (m.len(), m[0].len());
    let mut diag = Vec::new();
    for t in 0..rows.min(cols) {
        let Some((pr, pc)) = (t..rows)
            .flat_map(|r| (t..cols).map(move |c| (r, c)))
            .find(|&(r, c)| m[r][c] != 0)
        else {
            break;
        };
        m.swap(t, pr);
        for row in m.iter_mut() {
            row.swap(t, pc);
        }
        loop {
            let mut changed = false;
            for r in t + 1..rows {
                while m[r][t] != 0 {
                    changed = true;
                    if m[r][t] % m[t][t] == 0 {
                        let q = m[r][t] / m[t][t];
                        for c in 0..cols {
                            m[r][c] -= q * m[t][c];
                        }
                    } else {
                        // remainder step: the pivot strictly shrinks
                        let q = m[t][t] / m[r][t];
                        for c in 0..cols {
                            m[t][c] -= q * m[r][c];
                        }
                        m.swap(t, r);
                    }
                }
            }
            for c in t + 1..cols {
                while m[t][c] != 0 {
                    changed = true;
                    if m[t][c] % m[t][t] == 0 {
                        let q = m[t][c] / m[t][t];
                        for row in m.iter_mut() {
                            row[c] -= q * row[t];
                        }
                    } else {
                        let q = m[t][t] / m[t][c];
                        for row in m.iter_mut() {
                            row[t] -= q * row[c];
                            row.swap(t, c);
                        }
                    }
                }
            }
            if !changed {
                // enforce divisibility into the trailing block
                let bad = (t + 1..rows).find(|&r| (t + 1..cols).any(|c| m[r][c] % m[t][t] != 0));
                match bad {
                    Some(r) => {
                        for c in 0..cols {
                            m[t][c] += m[r][c];
                        }
                    }
                    None => break,
                }
            }
        }
        diag.push(m[t][t].abs());
    }
    diag.retain(|&d| d != 0);
    diag
}

fn small_matrix() -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1usize..=4, 1usize..=4).prop_flat_map(|(r, c)| prop::collection::vec(prop::collection::vec(-9i64..=9, c), r))
}

fn to_i128(m: &[Vec<i64>]) -> Vec<Vec<i128>> {
    m.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn snf_agrees_with_elementary_oracle(m in small_matrix()) {
        let im = IntMatrix::from_rows(&m);
        let snf = smith_normal_form(&im);
        prop_assert!(snf.verify(&im).is_ok());
        let ours: Vec<i128> = snf.invariant_factors().iter().map(|d| d.to_i128().unwrap()).collect();
        prop_assert_eq!(&ours, &naive_snf(to_i128(&m)));
        let dd = determinantal_divisors(&to_i128(&m));
        let mut prod = 1i128;
        for (k, d) in ours.iter().enumerate() {
            prod *= d;
            prop_assert_eq!(prod, dd[k]);
        }
        prop_assert!(dd[ours.len()..].iter().all(|&x| x == 0));
    }

    #[test]
    fn kernel_basis_is_saturated(m in small_matrix()) {
        let im = IntMatrix::from_rows(&m);
        let ker = kernel_basis(&im);
        prop_assert_eq!(ker.len(), im.cols() - im.rank());
        for v in &ker {
            prop_assert!(im.mul_vec(v).iter().all(Zero::is_zero));
        }
        if !ker.is_empty() {
            let k = IntMatrix::from_rows(&ker);
            prop_assert!(smith_normal_form(&k).all_units());
        }
    }

    #[test]
    fn hermite_form_is_invariant_under_unimodular_rows(m in small_matrix(), seed in 0u64..1000) {
        let im = IntMatrix::from_rows(&m);
        let u = random_unimodular(im.rows(), seed);
        let h1 = row_hermite(&im);
        let h2 = row_hermite(&u.mul(&im));
        prop_assert_eq!(h1, h2);
    }
}

fn random_unimodular(n: usize, seed: u64) -> IntMatrix {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut u = IntMatrix::identity(n);
    for _ in 0..6 {
        if n < 2 {
            break;
        }
        let i = rng.random_range(0..n);
        let j = (i + rng.random_range(1..n)) % n;
        let q: i64 = rng.random_range(-2..=2);
        for c in 0..n {
            let v = u.get(i, c) + BigInt::from(q) * u.get(j, c);
            u.set(i, c, v);
        }
    }
    if n > 0 && rng.random_bool(0.5) {
        for c in 0..n {
            let v = -u.get(0, c);
            u.set(0, c, v);
        }
    }
    u
}

// ---------- LP oracle: Fourier–Motzkin elimination ----------

#[derive(Clone, Debug)]
struct Ineq {
    a: Vec<BigRational>,
    b: BigRational,
    strict: bool,
}

/// Decides feasibility of `a·x = b`, `a·x ≥ b` and `a·x > b` rows: equalities
/// are substituted away, then the remaining variables are eliminated.
fn fm_feasible(eqs: Vec<Ineq>, mut rows: Vec<Ineq>, n: usize) -> bool {
    let mut eqs = eqs;
    let mut live: Vec<bool> = vec![true; n];
    while let Some(e) = eqs.pop() {
        let Some(var) = (0..n).find(|&v| !e.a[v].is_zero()) else {
            if !e.b.is_zero() {
                return false;
            }
            continue;
        };
        live[var] = false;
        let piv = e.a[var].clone();
        let subst = |r: &mut Ineq| {
            let f = &r.a[var] / &piv;
            if f.is_zero() {
                return;
            }
            for (x, y) in r.a.iter_mut().zip(&e.a) {
                *x -= &f * y;
            }
            r.b -= &f * &e.b;
        };
        eqs.iter_mut().for_each(subst);
        rows.iter_mut().for_each(subst);
    }
    rows = normalize(rows);
    loop {
        let counts = |v: usize| {
            let p = rows.iter().filter(|r| r.a[v].is_positive()).count();
            let m = rows.iter().filter(|r| r.a[v].is_negative()).count();
            p * m + p + m
        };
        let Some(var) = (0..n).filter(|&v| live[v]).min_by_key(|&v| counts(v)) else {
            break;
        };
        live[var] = false;
        let (mut pos, mut neg, mut rest) = (Vec::new(), Vec::new(), Vec::new());
        for r in rows {
            if r.a[var].is_positive() {
                pos.push(r);
            } else if r.a[var].is_negative() {
                neg.push(r);
            } else {
                rest.push(r);
            }
        }
        for p in &pos {
            for q in &neg {
                let (cp, cq) = (p.a[var].clone(), -q.a[var].clone());
                let a = p.a.iter().zip(&q.a).map(|(x, y)| x * &cq + y * &cp).collect();
                let b = &p.b * &cq + &q.b * &cp;
                rest.push(Ineq {
                    a,
                    b,
                    strict: p.strict || q.strict,
                });
            }
        }
        rows = normalize(rest);
    }
    rows.iter().all(|r| {
        let z = BigRational::zero();
        if r.strict {
            z > r.b
        } else {
            z >= r.b
        }
    })
}

/// Scales each row to a canonical multiple and drops duplicates, keeping the
/// elimination from blowing up.
fn normalize(rows: Vec<Ineq>) -> Vec<Ineq> {
    let mut seen = std::collections::BTreeSet::new();
    let mut out = Vec::new();
    for r in rows {
        let scale =
            r.a.iter()
                .chain(std::iter::once(&r.b))
                .find(|x| !x.is_zero())
                .map(|x| x.abs());
        let r = match scale {
            Some(s) => Ineq {
                a: r.a.iter().map(|x| x / &s).collect(),
                b: &r.b / &s,
                strict: r.strict,
            },
            None => r,
        };
        if seen.insert((r.a.clone(), r.b.clone(), r.strict)) {
            out.push(r);
        }
    }
    out
}

fn q(x: i64) -> BigRational {
    BigRational::from_integer(x.into())
}

#[derive(Clone, Debug)]
struct RawSystem {
    n: usize,
    rows: Vec<(Vec<i64>, i64, u8)>, // kind: 0 eq, 1 ge, 2 gt
}

fn raw_system() -> impl Strategy<Value = RawSystem> {
    (1usize..=4).prop_flat_map(|n| {
        prop::collection::vec((prop::collection::vec(-3i64..=3, n), -3i64..=3, 0u8..3), 1..=8)
            .prop_map(move |rows| RawSystem { n, rows })
    })
}

fn build(raw: &RawSystem, homogeneous: bool) -> (LinearSystem, Vec<Ineq>, Vec<Ineq>) {
    let mut sys = LinearSystem::new(raw.n);
    let (mut eqs, mut fm) = (Vec::new(), Vec::new());
    for (a, b, kind) in &raw.rows {
        let b = if homogeneous { 0 } else { *b };
        let av = RatVector::from_ints(a);
        match kind {
            0 => {
                sys.add_eq(av.clone(), q(b));
                eqs.push(Ineq {
                    a: av.0.clone(),
                    b: q(b),
                    strict: false,
                });
            }
            1 => {
                sys.add_ge(av.clone(), q(b));
                fm.push(Ineq {
                    a: av.0.clone(),
                    b: q(b),
                    strict: false,
                });
            }
            _ => {
                sys.add_gt(av.clone(), q(b));
                fm.push(Ineq {
                    a: av.0.clone(),
                    b: q(b),
                    strict: true,
                });
            }
        }
    }
    (sys, eqs, fm)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn margin_lp_agrees_with_fourier_motzkin(raw in raw_system()) {
        let (sys, eqs, fm) = build(&raw, false);
        let ours = lp_feasible(&sys, StrictMode::Margin).unwrap();
        prop_assert_eq!(ours.is_feasible(), fm_feasible(eqs, fm, raw.n));
        if let Feasibility::Feasible(w) = ours {
            prop_assert!(sys.satisfied_by(&w));
        }
    }

    #[test]
    fn homogeneous_lp_agrees_with_fourier_motzkin(raw in raw_system()) {
        let (sys, eqs, fm) = build(&raw, true);
        let ours = lp_feasible(&sys, StrictMode::Homogeneous).unwrap();
        prop_assert_eq!(ours.is_feasible(), fm_feasible(eqs, fm, raw.n));
        // both strict-inequality encodings agree on homogeneous systems
        prop_assert_eq!(ours.is_feasible(), lp_feasible(&sys, StrictMode::Margin).unwrap().is_feasible());
    }

    #[test]
    fn closed_membership_is_monotone(
        gens in prop::collection::vec(prop::collection::vec(-3i64..=3, 3), 0..5),
        extra in prop::collection::vec(-3i64..=3, 3),
        point in prop::collection::vec(-3i64..=3, 3),
    ) {
        let g: Vec<RatVector> = gens.iter().map(|v| RatVector::from_ints(v)).collect();
        let p = RatVector::from_ints(&point);
        if cone_member(&g, &p, ConeMode::Closed).is_some() {
            let mut more = g.clone();
            more.push(RatVector::from_ints(&extra));
            prop_assert!(cone_member(&more, &p, ConeMode::Closed).is_some());
        }
        if let Some(c) = cone_member(&g, &p, ConeMode::RelativeInterior) {
            prop_assert!(c.lambda.0.iter().all(Signed::is_positive));
            prop_assert!(cone_member(&g, &p, ConeMode::Closed).is_some());
        }
    }

    #[test]
    fn recession_agrees_with_circuit_search(m in (1usize..=3, 1usize..=5).prop_flat_map(|(r, c)| {
        prop::collection::vec(prop::collection::vec(-3i64..=3, c), r)
    })) {
        let a = IntMatrix::from_rows(&m);
        let ours = recession_trivial(&a);
        prop_assert_eq!(ours, !has_nonnegative_kernel_vector(&a));
        if let Some(d) = recession_direction(&a) {
            prop_assert!(d.0.iter().all(|x| !x.is_negative()) && !d.is_zero());
            prop_assert!(a.mul_rat(&d).iter().all(Zero::is_zero));
        }
    }
}

/// Extreme rays of `{s ≥ 0 : As = 0}` are supported on circuits, so it is
/// enough to look for a column subset whose kernel is a single line with a
/// generator of constant sign.
fn has_nonnegative_kernel_vector(a: &IntMatrix) -> bool {
    let n = a.cols();
    (1u32..1 << n).any(|mask| {
        let cols: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
        let ker = kernel_basis(&a.select_columns(&cols));
        ker.len() == 1 && {
            let v = &ker[0];
            v.iter().all(|x| x.is_positive()) || v.iter().all(|x| x.is_negative())
        }
    })
}
