//! Exact two-phase simplex over the rationals.
//!
//! The tableau is kept fraction-free: every stored entry is an integer and
//! the true tableau is `T / det`, where `det > 0` is the determinant of the
//! current basis (Edmonds' integer-preserving pivot). Entering and leaving
//! variables follow Bland's rule, so the method terminates.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Outcome of `maximize c·x subject to A x = b, x ≥ 0`.
#[derive(Clone, Debug, PartialEq)]
pub enum LpStatus {
    Optimal { x: Vec<BigRational>, value: BigRational },
    Infeasible,
    Unbounded,
}

struct Tableau {
    /// constraint rows; last column is the right-hand side
    rows: Vec<Vec<BigInt>>,
    /// reduced-cost row, same layout as a constraint row
    obj: Vec<BigInt>,
    basis: Vec<usize>,
    det: BigInt,
}

impl Tableau {
    fn width(&self) -> usize {
        self.obj.len()
    }

    fn rhs(&self) -> usize {
        self.width() - 1
    }

    fn pivot(&mut self, r: usize, s: usize) {
        let p = self.rows[r][s].clone();
        let det = self.det.clone();
        let pivot_row = self.rows[r].clone();
        let update = |row: &mut Vec<BigInt>| {
            let f = row[s].clone();
            if f.is_zero() {
                // (p·x − 0)/det
                for x in row.iter_mut() {
                    *x = (&p * &*x).div_floor(&det);
                }
                return;
            }
            for (x, pr) in row.iter_mut().zip(&pivot_row) {
                let num = &p * &*x - &f * pr;
                debug_assert!(num.is_multiple_of(&det));
                *x = num / &det;
            }
        };
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i != r {
                update(row);
            }
        }
        update(&mut self.obj);
        self.det = p;
        self.basis[r] = s;
        if self.det.is_negative() {
            for row in self.rows.iter_mut().chain(std::iter::once(&mut self.obj)) {
                for x in row.iter_mut() {
                    *x = -&*x;
                }
            }
            self.det = -&self.det;
        }
    }

    /// Runs Bland-rule simplex iterations on columns `< limit`.
    /// Returns false if the objective is unbounded.
    fn run(&mut self, limit: usize) -> bool {
        let rhs = self.rhs();
        loop {
            let Some(s) = (0..limit).find(|&j| self.obj[j].is_negative()) else {
                return true;
            };
            let mut leave: Option<usize> = None;
            for i in 0..self.rows.len() {
                let a = &self.rows[i][s];
                if !a.is_positive() {
                    continue;
                }
                leave = match leave {
                    None => Some(i),
                    Some(l) => {
                        // compare rhs_i / a_i with rhs_l / a_l
                        let lhs = &self.rows[i][rhs] * &self.rows[l][s];
                        let rhs_v = &self.rows[l][rhs] * a;
                        match lhs.cmp(&rhs_v) {
                            Ordering::Less => Some(i),
                            Ordering::Equal if self.basis[i] < self.basis[l] => Some(i),
                            _ => Some(l),
                        }
                    }
                };
            }
            match leave {
                Some(r) => self.pivot(r, s),
                None => return false,
            }
        }
    }
}

fn lcm_of_denoms<'a>(it: impl IntoIterator<Item = &'a BigRational>) -> BigInt {
    it.into_iter().fold(BigInt::one(), |l, q| l.lcm(q.denom()))
}

fn scale_to_ints(row: &[BigRational], rhs: &BigRational) -> (Vec<BigInt>, BigInt) {
    let l = lcm_of_denoms(row.iter().chain(std::iter::once(rhs)));
    let conv = |q: &BigRational| (q * BigRational::from_integer(l.clone())).to_integer();
    (row.iter().map(conv).collect(), conv(rhs))
}

/// Maximizes `c·x` subject to `A x = b`, `x ≥ 0`, exactly.
pub fn maximize(a: &[Vec<BigRational>], b: &[BigRational], c: &[BigRational]) -> LpStatus {
    let m = a.len();
    let n = c.len();
    assert_eq!(b.len(), m, "rhs length");
    assert!(a.iter().all(|r| r.len() == n), "constraint width");

    // phase I: columns [x (n) | artificials (m) | rhs]
    let width = n + m + 1;
    let mut rows = Vec::with_capacity(m);
    for (i, (ar, bi)) in a.iter().zip(b).enumerate() {
        let (mut coeffs, mut rhs) = scale_to_ints(ar, bi);
        if rhs.is_negative() {
            coeffs.iter_mut().for_each(|x| *x = -&*x);
            rhs = -rhs;
        }
        let mut row = vec![BigInt::zero(); width];
        row[..n].clone_from_slice(&coeffs);
        row[n + i] = BigInt::one();
        row[width - 1] = rhs;
        rows.push(row);
    }
    let mut obj = vec![BigInt::zero(); width];
    for row in &rows {
        for j in 0..n {
            obj[j] -= &row[j];
        }
        obj[width - 1] -= &row[width - 1];
    }
    let mut t = Tableau {
        rows,
        obj,
        basis: (n..n + m).collect(),
        det: BigInt::one(),
    };
    let bounded = t.run(n + m);
    debug_assert!(bounded, "phase I is bounded");
    if !t.obj[t.rhs()].is_zero() {
        return LpStatus::Infeasible;
    }

    // drive artificial variables out of the basis; drop redundant rows
    let mut i = 0;
    while i < t.rows.len() {
        if t.basis[i] >= n {
            match (0..n).find(|&j| !t.rows[i][j].is_zero()) {
                Some(j) => t.pivot(i, j),
                None => {
                    t.rows.remove(i);
                    t.basis.remove(i);
                    continue;
                }
            }
        }
        i += 1;
    }
    for row in t.rows.iter_mut() {
        let rhs = row.pop().expect("rhs");
        row.truncate(n);
        row.push(rhs);
    }

    // phase II objective, scaled to integers
    let cl = lcm_of_denoms(c);
    let ci: Vec<BigInt> = c
        .iter()
        .map(|q| (q * BigRational::from_integer(cl.clone())).to_integer())
        .collect();
    let mut obj = vec![BigInt::zero(); n + 1];
    for j in 0..=n {
        let mut z = BigInt::zero();
        for (row, &bv) in t.rows.iter().zip(&t.basis) {
            if !ci[bv].is_zero() {
                z += &ci[bv] * &row[j];
            }
        }
        if j < n {
            z -= &ci[j] * &t.det;
        }
        obj[j] = z;
    }
    t.obj = obj;
    if !t.run(n) {
        return LpStatus::Unbounded;
    }
    let det = BigRational::from_integer(t.det.clone());
    let mut x = vec![BigRational::zero(); n];
    for (row, &bv) in t.rows.iter().zip(&t.basis) {
        x[bv] = BigRational::from_integer(row[n].clone()) / &det;
    }
    let value = x.iter().zip(c).map(|(xi, ci)| xi * ci).sum();
    LpStatus::Optimal { x, value }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    fn qs(v: &[i64]) -> Vec<BigRational> {
        v.iter().map(|&x| q(x)).collect()
    }

    #[test]
    fn small_optimum() {
        // max x + y  s.t. x + 2y + s1 = 4, 3x + y + s2 = 6
        let a = vec![qs(&[1, 2, 1, 0]), qs(&[3, 1, 0, 1])];
        let b = qs(&[4, 6]);
        let c = qs(&[1, 1, 0, 0]);
        match maximize(&a, &b, &c) {
            LpStatus::Optimal { value, x } => {
                assert_eq!(value, BigRational::new(14.into(), 5.into()));
                assert_eq!(x[0], BigRational::new(8.into(), 5.into()));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn infeasible_and_unbounded() {
        // x + y = -1 with x, y ≥ 0
        assert_eq!(maximize(&[qs(&[1, 1])], &qs(&[-1]), &qs(&[0, 0])), LpStatus::Infeasible);
        // max x s.t. x - y = 0
        assert_eq!(maximize(&[qs(&[1, -1])], &qs(&[0]), &qs(&[1, 0])), LpStatus::Unbounded);
    }

    #[test]
    fn redundant_rows_are_dropped() {
        let a = vec![qs(&[1, 1]), qs(&[2, 2])];
        match maximize(&a, &qs(&[1, 2]), &qs(&[1, 0])) {
            LpStatus::Optimal { value, .. } => assert_eq!(value, q(1)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn degenerate_cycling_example_terminates() {
        // Beale's example, which cycles under the largest-coefficient rule.
        let f = |n: i64, d: i64| BigRational::new(n.into(), d.into());
        let a = vec![
            vec![f(1, 4), q(-8), q(-1), q(9), q(1), q(0), q(0)],
            vec![f(1, 2), q(-12), f(-1, 2), q(3), q(0), q(1), q(0)],
            vec![q(0), q(0), q(1), q(0), q(0), q(0), q(1)],
        ];
        let b = qs(&[0, 0, 1]);
        let c = vec![f(3, 4), q(-20), f(1, 2), q(-6), q(0), q(0), q(0)];
        match maximize(&a, &b, &c) {
            LpStatus::Optimal { value, .. } => assert_eq!(value, f(5, 4)),
            other => panic!("{other:?}"),
        }
    }
}
