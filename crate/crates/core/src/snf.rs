//! Dense integer matrices and Smith normal form.
//!
//! Coefficients are `BigInt` so the reduction never overflows. The normal
//! form routine returns the two unimodular transforms, which the module
//! invariant code needs to transport group actions into normal-form
//! coordinates and to solve linear systems over Z.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::fmt;

/// Dense matrix over Z.
#[derive(Clone, PartialEq, Eq)]
pub struct IntMat {
    pub rows: usize,
    pub cols: usize,
    data: Vec<BigInt>,
}

impl fmt::Debug for IntMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IntMat {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self[(i, j)].to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl std::ops::Index<(usize, usize)> for IntMat {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }
}

impl IntMat {
    pub fn zero(rows: usize, cols: usize) -> Self {
        IntMat { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMat::zero(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut m = IntMat::zero(r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged rows");
            for (j, v) in row.iter().enumerate() {
                m[(i, j)] = BigInt::from(*v);
            }
        }
        m
    }

    pub fn transpose(&self) -> IntMat {
        let mut t = IntMat::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMat) -> IntMat {
        assert_eq!(self.cols, other.rows, "shape mismatch");
        let mut out = IntMat::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                if self[(i, k)].is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let add = &self[(i, k)] * &other[(k, j)];
                    out[(i, j)] += add;
                }
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|v| v.is_zero())
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            let c = self.cols;
            self.data.swap(a * c + j, b * c + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            let c = self.cols;
            self.data.swap(i * c + a, i * c + b);
        }
    }

    // row[a] += q * row[b]
    fn add_row(&mut self, a: usize, b: usize, q: &BigInt) {
        for j in 0..self.cols {
            let add = q * &self[(b, j)];
            self[(a, j)] += add;
        }
    }

    // col[a] += q * col[b]
    fn add_col(&mut self, a: usize, b: usize, q: &BigInt) {
        for i in 0..self.rows {
            let add = q * &self[(i, b)];
            self[(i, a)] += add;
        }
    }

    fn negate_row(&mut self, a: usize) {
        for j in 0..self.cols {
            let v = -self[(a, j)].clone();
            self[(a, j)] = v;
        }
    }

    fn negate_col(&mut self, a: usize) {
        for i in 0..self.rows {
            let v = -self[(i, a)].clone();
            self[(i, a)] = v;
        }
    }
}

/// Result of `smith_normal_form`: `u * a * v = d` with `u`, `v` unimodular
/// and `d` diagonal, each diagonal entry dividing the next. `u_inv` is
/// maintained alongside so callers can transport data into the
/// normal-form coordinates without a separate inversion.
pub struct Snf {
    pub d: IntMat,
    pub u: IntMat,
    pub v: IntMat,
    pub u_inv: IntMat,
}

impl Snf {
    /// Diagonal entries (including zeros), in divisibility order.
    pub fn diagonal(&self) -> Vec<BigInt> {
        let n = self.d.rows.min(self.d.cols);
        (0..n).map(|i| self.d[(i, i)].clone()).collect()
    }

    pub fn rank(&self) -> usize {
        self.diagonal().iter().filter(|v| !v.is_zero()).count()
    }
}

pub fn smith_normal_form(a: &IntMat) -> Snf {
    let mut d = a.clone();
    let mut u = IntMat::identity(a.rows);
    let mut u_inv = IntMat::identity(a.rows);
    let mut v = IntMat::identity(a.cols);
    let n = d.rows.min(d.cols);

    for k in 0..n {
        loop {
            // pick pivot: nonzero entry of least absolute value in the
            // remaining block
            let mut pivot: Option<(usize, usize)> = None;
            for i in k..d.rows {
                for j in k..d.cols {
                    if d[(i, j)].is_zero() {
                        continue;
                    }
                    match pivot {
                        None => pivot = Some((i, j)),
                        Some(p) => {
                            if d[(i, j)].abs() < d[p].abs() {
                                pivot = Some((i, j));
                            }
                        }
                    }
                }
            }
            let Some((pi, pj)) = pivot else {
                return Snf { d, u, v, u_inv };
            };
            d.swap_rows(k, pi);
            u.swap_rows(k, pi);
            u_inv.swap_cols(k, pi);
            d.swap_cols(k, pj);
            v.swap_cols(k, pj);

            // clear column k below the pivot, then row k right of it
            let mut dirty = false;
            for i in k + 1..d.rows {
                if d[(i, k)].is_zero() {
                    continue;
                }
                let q = -(&d[(i, k)] / &d[(k, k)]);
                d.add_row(i, k, &q);
                u.add_row(i, k, &q);
                u_inv.add_col(k, i, &(-&q));
                if !d[(i, k)].is_zero() {
                    dirty = true;
                }
            }
            for j in k + 1..d.cols {
                if d[(k, j)].is_zero() {
                    continue;
                }
                let q = -(&d[(k, j)] / &d[(k, k)]);
                d.add_col(j, k, &q);
                v.add_col(j, k, &q);
                if !d[(k, j)].is_zero() {
                    dirty = true;
                }
            }
            if dirty {
                continue;
            }

            // pivot divides everything in its row/column; enforce
            // divisibility against the rest of the block
            let mut fixed = true;
            'scan: for i in k + 1..d.rows {
                for j in k + 1..d.cols {
                    if (&d[(i, j)] % &d[(k, k)]).is_zero() {
                        continue;
                    }
                    // fold row i into row k and retry
                    let one = BigInt::one();
                    d.add_row(k, i, &one);
                    u.add_row(k, i, &one);
                    u_inv.add_col(i, k, &BigInt::from(-1));
                    fixed = false;
                    break 'scan;
                }
            }
            if fixed {
                break;
            }
        }
        if d[(k, k)].is_negative() {
            d.negate_row(k);
            u.negate_row(k);
            u_inv.negate_col(k);
        }
    }
    Snf { d, u, v, u_inv }
}

/// Absolute value of the determinant of a unimodular-candidate square
/// matrix; used in tests to confirm `u` and `v` are unimodular.
pub fn det_abs(m: &IntMat) -> BigInt {
    assert_eq!(m.rows, m.cols);
    let snf = smith_normal_form(m);
    let mut det = BigInt::one();
    for x in snf.diagonal() {
        det *= x;
    }
    det.abs()
}

/// Basis of the integer kernel `{ x : a * x = 0 }`, returned as columns.
pub fn kernel_basis(a: &IntMat) -> Vec<Vec<BigInt>> {
    let snf = smith_normal_form(a);
    let r = snf.rank();
    // a = u^-1 d v^-1, so a x = 0 iff d (v^-1 x) = 0 iff v^-1 x supported on
    // the zero columns of d; kernel basis = columns of v past the rank.
    let mut out = Vec::new();
    for j in r..a.cols {
        let col: Vec<BigInt> = (0..a.cols).map(|i| snf.v[(i, j)].clone()).collect();
        out.push(col);
    }
    out
}

/// One solution of `a * x = b` over Z, if any.
pub fn solve(a: &IntMat, b: &[BigInt]) -> Option<Vec<BigInt>> {
    assert_eq!(b.len(), a.rows);
    let snf = smith_normal_form(a);
    // a x = b  <=>  d (v^-1 x) = u b ; solve for y = v^-1 x then x = v y.
    let mut ub = vec![BigInt::zero(); a.rows];
    for i in 0..a.rows {
        for j in 0..a.rows {
            let add = &snf.u[(i, j)] * &b[j];
            ub[i] += add;
        }
    }
    let n = a.rows.min(a.cols);
    let mut y = vec![BigInt::zero(); a.cols];
    for i in 0..a.rows {
        let di = if i < n { snf.d[(i, i)].clone() } else { BigInt::zero() };
        if di.is_zero() {
            if !ub[i].is_zero() {
                return None;
            }
        } else {
            if !(&ub[i] % &di).is_zero() {
                return None;
            }
            y[i] = &ub[i] / &di;
        }
    }
    let mut x = vec![BigInt::zero(); a.cols];
    for i in 0..a.cols {
        for j in 0..a.cols {
            let add = &snf.v[(i, j)] * &y[j];
            x[i] += add;
        }
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check(a: &IntMat) {
        let snf = smith_normal_form(a);
        assert_eq!(snf.u.mul(a).mul(&snf.v), snf.d, "u a v != d");
        assert_eq!(snf.u.mul(&snf.u_inv), IntMat::identity(a.rows), "u_inv is wrong");
        assert_eq!(det_abs(&snf.u), BigInt::one());
        assert_eq!(det_abs(&snf.v), BigInt::one());
        let diag = snf.diagonal();
        for w in diag.windows(2) {
            if !w[1].is_zero() {
                assert!(!w[0].is_zero(), "zero before nonzero in diagonal");
            }
            if !w[0].is_zero() && !w[1].is_zero() {
                assert!((&w[1] % &w[0]).is_zero(), "divisibility chain broken");
            }
        }
        for (i, x) in diag.iter().enumerate() {
            assert!(!x.is_negative(), "negative diagonal at {i}");
        }
    }

    #[test]
    fn snf_2x2_example() {
        let a = IntMat::from_rows(&[vec![2, 4], vec![6, 8]]);
        let snf = smith_normal_form(&a);
        check(&a);
        let diag: Vec<i64> = snf.diagonal().iter().map(|x| x.try_into().unwrap()).collect();
        assert_eq!(diag, vec![2, 4]);
    }

    #[test]
    fn snf_identity_and_zero() {
        check(&IntMat::identity(3));
        let z = IntMat::from_rows(&[vec![0]]);
        let snf = smith_normal_form(&z);
        assert!(snf.d.is_zero());
        check(&z);
    }

    #[test]
    fn snf_rectangular() {
        let a = IntMat::from_rows(&[vec![1, 2, 3], vec![4, 5, 6]]);
        check(&a);
        let a = IntMat::from_rows(&[vec![-6, 111], vec![5, -672], vec![0, -255]]);
        check(&a);
    }

    #[test]
    fn solve_and_kernel() {
        let a = IntMat::from_rows(&[vec![2, 0, 4], vec![0, 3, 6]]);
        let b = vec![BigInt::from(6), BigInt::from(9)];
        let x = solve(&a, &b).expect("solvable");
        for i in 0..2 {
            let mut acc = BigInt::zero();
            for j in 0..3 {
                acc += &a[(i, j)] * &x[j];
            }
            assert_eq!(acc, b[i]);
        }
        let ker = kernel_basis(&a);
        assert_eq!(ker.len(), 1);
        for v in &ker {
            for i in 0..2 {
                let mut acc = BigInt::zero();
                for j in 0..3 {
                    acc += &a[(i, j)] * &v[j];
                }
                assert!(acc.is_zero());
            }
        }
        let bad = vec![BigInt::from(1), BigInt::zero()];
        assert!(solve(&a, &bad).is_none());
    }
}
