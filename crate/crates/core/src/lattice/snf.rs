use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::matrix::IntMatrix;

/// Smith normal form `U·M·V = D` with unimodular `U`, `V`.
#[derive(Clone, Debug)]
pub struct Snf {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
}

impl Snf {
    /// Nonzero diagonal entries of `D`, in order.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        (0..self.d.rows().min(self.d.cols()))
            .map(|i| self.d.get(i, i).clone())
            .take_while(|x| !x.is_zero())
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.invariant_factors().len()
    }

    /// True when every invariant factor equals one.
    pub fn all_units(&self) -> bool {
        self.invariant_factors().iter().all(One::is_one)
    }

    /// Checks `U·M·V = D`, the shape of `D`, the divisibility chain and
    /// unimodularity of both transforms.
    pub fn verify(&self, m: &IntMatrix) -> Result<(), String> {
        if self.u.mul(m).mul(&self.v) != self.d {
            return Err("U·M·V != D".into());
        }
        if !self.d.is_diagonal() {
            return Err("D is not diagonal".into());
        }
        let n = self.d.rows().min(self.d.cols());
        let diag: Vec<&BigInt> = (0..n).map(|i| self.d.get(i, i)).collect();
        if diag.iter().any(|x| x.is_negative()) {
            return Err("negative invariant factor".into());
        }
        for w in diag.windows(2) {
            let (a, b) = (w[0], w[1]);
            let divides = if a.is_zero() { b.is_zero() } else { b.is_multiple_of(a) };
            if !divides {
                return Err(format!("divisibility chain broken: {a} does not divide {b}"));
            }
        }
        if !self.u.determinant().abs().is_one() || !self.v.determinant().abs().is_one() {
            return Err("transform is not unimodular".into());
        }
        Ok(())
    }
}

struct Work {
    d: IntMatrix,
    u: IntMatrix,
    v: IntMatrix,
}

impl Work {
    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for m in [&mut self.d, &mut self.u] {
            for c in 0..m.cols() {
                let x = m.get(a, c).clone();
                let y = m.get(b, c).clone();
                m.set(a, c, y);
                m.set(b, c, x);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for m in [&mut self.d, &mut self.v] {
            for r in 0..m.rows() {
                let x = m.get(r, a).clone();
                let y = m.get(r, b).clone();
                m.set(r, a, y);
                m.set(r, b, x);
            }
        }
    }

    /// row[dst] += q * row[src]
    fn add_row(&mut self, dst: usize, src: usize, q: &BigInt) {
        for m in [&mut self.d, &mut self.u] {
            for c in 0..m.cols() {
                let x = m.get(dst, c) + q * m.get(src, c);
                m.set(dst, c, x);
            }
        }
    }

    /// col[dst] += q * col[src]
    fn add_col(&mut self, dst: usize, src: usize, q: &BigInt) {
        for m in [&mut self.d, &mut self.v] {
            for r in 0..m.rows() {
                let x = m.get(r, dst) + q * m.get(r, src);
                m.set(r, dst, x);
            }
        }
    }

    fn negate_row(&mut self, r: usize) {
        for m in [&mut self.d, &mut self.u] {
            for c in 0..m.cols() {
                let x = -m.get(r, c);
                m.set(r, c, x);
            }
        }
    }

    fn smallest_nonzero(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        for r in t..self.d.rows() {
            for c in t..self.d.cols() {
                let x = self.d.get(r, c);
                if x.is_zero() {
                    continue;
                }
                match best {
                    Some((br, bc)) if self.d.get(br, bc).abs() <= x.abs() => {}
                    _ => best = Some((r, c)),
                }
            }
        }
        best
    }
}

/// Smith normal form by repeated smallest-pivot elimination.
///
/// The result is re-verified before returning; a failure there is a bug and
/// panics.
pub fn smith_normal_form(m: &IntMatrix) -> Snf {
    let (rows, cols) = (m.rows(), m.cols());
    let mut w = Work {
        d: m.clone(),
        u: IntMatrix::identity(rows),
        v: IntMatrix::identity(cols),
    };
    let mut t = 0;
    while t < rows.min(cols) {
        let Some((pr, pc)) = w.smallest_nonzero(t) else {
            break;
        };
        w.swap_rows(t, pr);
        w.swap_cols(t, pc);
        loop {
            let mut dirty = false;
            for r in t + 1..rows {
                if w.d.get(r, t).is_zero() {
                    continue;
                }
                let q = w.d.get(r, t).div_floor(w.d.get(t, t));
                w.add_row(r, t, &-q);
                if !w.d.get(r, t).is_zero() {
                    dirty = true;
                }
            }
            for c in t + 1..cols {
                if w.d.get(t, c).is_zero() {
                    continue;
                }
                let q = w.d.get(t, c).div_floor(w.d.get(t, t));
                w.add_col(c, t, &-q);
                if !w.d.get(t, c).is_zero() {
                    dirty = true;
                }
            }
            if dirty {
                // a remainder is now smaller than the pivot; move it in
                let (pr, pc) = w.smallest_nonzero(t).expect("nonzero remainder");
                w.swap_rows(t, pr);
                w.swap_cols(t, pc);
                continue;
            }
            let pivot = w.d.get(t, t).clone();
            let offender = (t + 1..rows).find(|&r| (t + 1..cols).any(|c| !w.d.get(r, c).is_multiple_of(&pivot)));
            match offender {
                Some(r) => w.add_row(t, r, &BigInt::one()),
                None => break,
            }
        }
        if w.d.get(t, t).is_negative() {
            w.negate_row(t);
        }
        t += 1;
    }
    let snf = Snf { u: w.u, d: w.d, v: w.v };
    if let Err(e) = snf.verify(m) {
        panic!("Smith normal form postcondition failed: {e}");
    }
    snf
}

/// Lattice basis of `{x ∈ ℤ^cols : M x = 0}`, read off the last columns of `V`.
pub fn kernel_basis(m: &IntMatrix) -> Vec<Vec<BigInt>> {
    let snf = smith_normal_form(m);
    let r = snf.rank();
    (r..m.cols()).map(|c| snf.v.column(c)).collect()
}

/// Row-style Hermite normal form: unimodular row operations bring `M` to
/// echelon form with positive pivots and entries above each pivot reduced
/// into `[0, pivot)`. Zero rows are dropped, so for a full-row-rank input the
/// result spans the same row lattice.
pub fn row_hermite(m: &IntMatrix) -> IntMatrix {
    let mut rows = m.row_vecs();
    let cols = m.cols();
    let mut r = 0;
    for c in 0..cols {
        if r == rows.len() {
            break;
        }
        while let Some(p) = (r..rows.len())
            .filter(|&i| !rows[i][c].is_zero())
            .min_by_key(|&i| rows[i][c].abs())
        {
            rows.swap(r, p);
            let mut clean = true;
            for i in r + 1..rows.len() {
                if rows[i][c].is_zero() {
                    continue;
                }
                let q = rows[i][c].div_floor(&rows[r][c]);
                let pivot_row = rows[r].clone();
                for (x, y) in rows[i].iter_mut().zip(&pivot_row) {
                    *x -= &q * y;
                }
                if !rows[i][c].is_zero() {
                    clean = false;
                }
            }
            if clean {
                break;
            }
        }
        if rows[r][c].is_zero() {
            continue;
        }
        if rows[r][c].is_negative() {
            rows[r].iter_mut().for_each(|x| *x = -&*x);
        }
        for i in 0..r {
            let q = rows[i][c].div_floor(&rows[r][c]);
            if q.is_zero() {
                continue;
            }
            let pivot_row = rows[r].clone();
            for (x, y) in rows[i].iter_mut().zip(&pivot_row) {
                *x -= &q * y;
            }
        }
        r += 1;
    }
    rows.truncate(r);
    IntMatrix::from_rows(&rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diag(snf: &Snf) -> Vec<i64> {
        use num_traits::ToPrimitive;
        (0..snf.d.rows().min(snf.d.cols()))
            .map(|i| snf.d.get(i, i).to_i64().unwrap())
            .collect()
    }

    #[test]
    fn identity_is_its_own_normal_form() {
        let snf = smith_normal_form(&IntMatrix::from_rows(&[[1, 0], [0, 1]]));
        assert_eq!(diag(&snf), vec![1, 1]);
    }

    #[test]
    fn two_by_two_examples() {
        assert_eq!(
            diag(&smith_normal_form(&IntMatrix::from_rows(&[[2, 4], [6, 8]]))),
            vec![2, 4]
        );
        assert_eq!(
            diag(&smith_normal_form(&IntMatrix::from_rows(&[[2, 0], [0, 3]]))),
            vec![1, 6]
        );
    }

    #[test]
    fn rectangular_and_zero_matrices() {
        let snf = smith_normal_form(&IntMatrix::from_rows(&[[1, 0], [0, 1], [-1, -2]]));
        assert_eq!(diag(&snf), vec![1, 1]);
        let z = smith_normal_form(&IntMatrix::zeros(2, 3));
        assert_eq!(snf.rank(), 2);
        assert_eq!(z.rank(), 0);
    }

    #[test]
    fn hermite_form_is_canonical_for_the_row_lattice() {
        let a = IntMatrix::from_rows(&[[0, 0, 1, 1], [1, 1, 0, 0]]);
        let b = IntMatrix::from_rows(&[[1, 1, 1, 1], [-1, -1, 0, 0]]);
        let ha = row_hermite(&a);
        assert_eq!(ha, IntMatrix::from_rows(&[[1, 1, 0, 0], [0, 0, 1, 1]]));
        assert_eq!(row_hermite(&b), ha);
        assert_eq!(
            row_hermite(&IntMatrix::from_rows(&[[-1, -1, -1]])),
            IntMatrix::from_rows(&[[1, 1, 1]])
        );
    }

    #[test]
    fn kernel_examples() {
        let k = kernel_basis(&IntMatrix::from_rows(&[[1, -1]]));
        assert_eq!(k.len(), 1);
        assert!(k[0] == vec![BigInt::from(1), BigInt::from(1)] || k[0] == vec![BigInt::from(-1), BigInt::from(-1)]);
        assert!(kernel_basis(&IntMatrix::identity(2)).is_empty());
        let m = IntMatrix::from_rows(&[[1, 1, 1]]);
        let k = kernel_basis(&m);
        assert_eq!(k.len(), 2);
        for v in &k {
            assert!(m.mul_vec(v).iter().all(Zero::is_zero));
        }
        // saturated: the basis extends to a unimodular matrix, so its SNF is all ones
        let kb = IntMatrix::from_rows(&k);
        assert!(smith_normal_form(&kb).all_units());
    }
}
