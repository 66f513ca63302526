//! Integer matrices, Smith normal form and Hermite canonicalization, all
//! in arbitrary precision.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// A dense rows × cols matrix over the integers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    pub fn from_rows(rows: &[&[i64]]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        let data = rows
            .iter()
            .flat_map(|row| row.iter().map(|&x| BigInt::from(x)))
            .collect();
        IntMatrix {
            rows: r,
            cols: c,
            data,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: BigInt) {
        self.data[i * self.cols + j] = value;
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn submatrix_cols(&self, cols: usize) -> IntMatrix {
        assert!(cols <= self.cols);
        let mut m = IntMatrix::zeros(self.rows, cols);
        for i in 0..self.rows {
            for j in 0..cols {
                m.set(i, j, self.get(i, j).clone());
            }
        }
        m
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows);
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let add = a * other.get(k, j);
                    let cur = out.get(i, j) + add;
                    out.set(i, j, cur);
                }
            }
        }
        out
    }

    pub fn apply(&self, x: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.cols, x.len());
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j) * &x[j]).sum())
            .collect()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row a += q * row b
    fn row_axpy(&mut self, a: usize, b: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let add = q * self.get(b, j);
            let cur = self.get(a, j) + add;
            self.set(a, j, cur);
        }
    }

    /// col a += q * col b
    fn col_axpy(&mut self, a: usize, b: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let add = q * self.get(i, b);
            let cur = self.get(i, a) + add;
            self.set(i, a, cur);
        }
    }

    fn negate_row(&mut self, a: usize) {
        for j in 0..self.cols {
            let v = -self.get(a, j).clone();
            self.set(a, j, v);
        }
    }
}

/// `u * m * v = d` with `d` diagonal, nonnegative, and each diagonal entry
/// dividing the next; `u` and `v` are unimodular.
#[derive(Debug, Clone)]
pub struct SmithForm {
    pub d: IntMatrix,
    pub u: IntMatrix,
    pub v: IntMatrix,
}

impl SmithForm {
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.d.rows.min(self.d.cols))
            .map(|i| self.d.get(i, i).clone())
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.diagonal().iter().filter(|x| !x.is_zero()).count()
    }

    /// A basis of the integer kernel of the original matrix: the columns
    /// of `v` matched with zero diagonal entries.
    pub fn kernel_basis(&self) -> Vec<Vec<BigInt>> {
        let diag = self.diagonal();
        let mut basis = Vec::new();
        for j in 0..self.v.cols() {
            let zero_diag = j >= diag.len() || diag[j].is_zero();
            if zero_diag {
                basis.push(self.v.column(j));
            }
        }
        basis
    }
}

fn min_abs_nonzero(d: &IntMatrix, from: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in from..d.rows() {
        for j in from..d.cols() {
            let x = d.get(i, j);
            if x.is_zero() {
                continue;
            }
            match best {
                None => best = Some((i, j)),
                Some((bi, bj)) if x.abs() < d.get(bi, bj).abs() => best = Some((i, j)),
                _ => {}
            }
        }
    }
    best
}

/// Smith normal form with the smallest-pivot rule (ties: lowest row, then
/// column).  The factorization is re-verified by multiplication before it
/// is returned.
pub fn smith_normal_form(m: &IntMatrix) -> SmithForm {
    let mut d = m.clone();
    let mut u = IntMatrix::identity(m.rows());
    let mut v = IntMatrix::identity(m.cols());
    let steps = m.rows().min(m.cols());
    for t in 0..steps {
        'pivot: loop {
            let Some((pi, pj)) = min_abs_nonzero(&d, t) else {
                break 'pivot;
            };
            d.swap_rows(t, pi);
            u.swap_rows(t, pi);
            d.swap_cols(t, pj);
            v.swap_cols(t, pj);

            let mut dirty = false;
            for i in t + 1..d.rows() {
                if !d.get(i, t).is_zero() {
                    let q = -(d.get(i, t) / d.get(t, t));
                    d.row_axpy(i, t, &q);
                    u.row_axpy(i, t, &q);
                    if !d.get(i, t).is_zero() {
                        dirty = true;
                    }
                }
            }
            for j in t + 1..d.cols() {
                if !d.get(t, j).is_zero() {
                    let q = -(d.get(t, j) / d.get(t, t));
                    d.col_axpy(j, t, &q);
                    v.col_axpy(j, t, &q);
                    if !d.get(t, j).is_zero() {
                        dirty = true;
                    }
                }
            }
            if dirty {
                continue 'pivot;
            }
            // enforce the divisibility chain: fold a non-divisible entry
            // into the pivot row and keep reducing
            let pivot = d.get(t, t).clone();
            let offender = (t + 1..d.rows())
                .flat_map(|i| (t + 1..d.cols()).map(move |j| (i, j)))
                .find(|&(i, j)| !(d.get(i, j) % &pivot).is_zero());
            match offender {
                Some((i, _)) => {
                    let one = BigInt::one();
                    d.row_axpy(t, i, &one);
                    u.row_axpy(t, i, &one);
                }
                None => break 'pivot,
            }
        }
        if d.get(t, t).is_negative() {
            d.negate_row(t);
            u.negate_row(t);
        }
    }
    let form = SmithForm { d, u, v };
    debug_assert!(verify(m, &form), "smith factorization failed to verify");
    assert!(verify(m, &form));
    form
}

fn verify(m: &IntMatrix, form: &SmithForm) -> bool {
    if form.u.mul(m).mul(&form.v) != form.d {
        return false;
    }
    // diagonal, nonnegative, divisibility chain
    for i in 0..form.d.rows() {
        for j in 0..form.d.cols() {
            if i != j && !form.d.get(i, j).is_zero() {
                return false;
            }
        }
    }
    let diag = form.diagonal();
    for w in diag.windows(2) {
        if w[0].is_negative() || (!w[0].is_zero() && !(&w[1] % &w[0]).is_zero()) {
            return false;
        }
        if w[0].is_zero() && !w[1].is_zero() {
            return false;
        }
    }
    true
}

/// Canonical form of a kernel basis: the Hermite normal form computed
/// from the bottom coordinate up, which keeps pivots at the *last*
/// nonzero coordinate of each vector.  Finitely supported kernel vectors
/// of nested truncations then canonicalize identically, so bases can be
/// compared across sizes after trailing zeros are trimmed.
pub fn canonical_kernel_basis(mut vectors: Vec<Vec<BigInt>>) -> Vec<Vec<BigInt>> {
    if vectors.is_empty() {
        return vectors;
    }
    let n = vectors[0].len();
    for v in &mut vectors {
        v.reverse();
    }
    // vectors[dst] -= q * vectors[src]
    fn row_submul(vectors: &mut [Vec<BigInt>], dst: usize, src: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        let src_row = vectors[src].clone();
        for (d, s) in vectors[dst].iter_mut().zip(&src_row) {
            *d -= q * s;
        }
    }
    // row-style Hermite normal form on the reversed coordinates
    let mut r = 0;
    for col in 0..n {
        if r >= vectors.len() {
            break;
        }
        // reduce until a single nonzero survives in this column at r..
        loop {
            let nonzero: Vec<usize> = (r..vectors.len())
                .filter(|&i| !vectors[i][col].is_zero())
                .collect();
            match nonzero.len() {
                0 => break,
                1 => {
                    vectors.swap(r, nonzero[0]);
                    break;
                }
                _ => {
                    let &pivot = nonzero
                        .iter()
                        .min_by_key(|&&i| vectors[i][col].abs())
                        .expect("nonzero is nonempty");
                    for &i in &nonzero {
                        if i != pivot {
                            let q = vectors[i][col].clone() / vectors[pivot][col].clone();
                            row_submul(&mut vectors, i, pivot, &q);
                        }
                    }
                }
            }
        }
        if vectors[r][col].is_zero() {
            continue;
        }
        if vectors[r][col].is_negative() {
            for x in vectors[r].iter_mut() {
                *x = -x.clone();
            }
        }
        for i in 0..r {
            let q = vectors[i][col].div_floor(&vectors[r][col]);
            row_submul(&mut vectors, i, r, &q);
        }
        r += 1;
    }
    vectors.truncate(r);
    for v in &mut vectors {
        v.reverse();
    }
    vectors.reverse();
    vectors
}

/// Drops trailing zeros so vectors of different truncation sizes compare.
pub fn trim_trailing_zeros(mut v: Vec<BigInt>) -> Vec<BigInt> {
    while v.last().is_some_and(|x| x.is_zero()) {
        v.pop();
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(rows: &[&[i64]]) -> IntMatrix {
        IntMatrix::from_rows(rows)
    }

    #[test]
    fn zero_matrix() {
        let f = smith_normal_form(&big(&[&[0]]));
        assert_eq!(f.diagonal(), vec![BigInt::zero()]);
    }

    #[test]
    fn swap_matrix() {
        let f = smith_normal_form(&big(&[&[0, 1], &[1, 0]]));
        assert_eq!(f.diagonal(), vec![BigInt::one(), BigInt::one()]);
    }

    #[test]
    fn already_diagonal() {
        let f = smith_normal_form(&big(&[&[2, 0], &[0, 4]]));
        assert_eq!(f.diagonal(), vec![BigInt::from(2), BigInt::from(4)]);
    }

    #[test]
    fn divisibility_chain_is_enforced() {
        let f = smith_normal_form(&big(&[&[2, 0], &[0, 3]]));
        assert_eq!(f.diagonal(), vec![BigInt::from(1), BigInt::from(6)]);
    }

    #[test]
    fn kernel_vectors_annihilate() {
        let m = big(&[&[-1, 1], &[1, -1]]);
        let f = smith_normal_form(&m);
        let kernel = f.kernel_basis();
        assert_eq!(kernel.len(), 1);
        for x in &kernel {
            assert!(m.apply(x).iter().all(|y| y.is_zero()));
        }
    }

    #[test]
    fn canonical_basis_of_the_sum_lattice() {
        // x0 + x1 + x2 = 0, everything else zero
        let vectors = vec![
            vec![
                BigInt::from(1),
                BigInt::from(-1),
                BigInt::from(0),
                BigInt::from(0),
            ],
            vec![
                BigInt::from(2),
                BigInt::from(-1),
                BigInt::from(-1),
                BigInt::from(0),
            ],
        ];
        let basis = canonical_kernel_basis(vectors);
        let expect = vec![
            vec![
                BigInt::from(-1),
                BigInt::from(1),
                BigInt::from(0),
                BigInt::from(0),
            ],
            vec![
                BigInt::from(-1),
                BigInt::from(0),
                BigInt::from(1),
                BigInt::from(0),
            ],
        ];
        assert_eq!(basis, expect);
    }

    #[test]
    fn random_factorizations_verify() {
        let mut rng = crate::corpus::Rng64::new(0x5e1f);
        for _ in 0..60 {
            let r = 1 + rng.below(5) as usize;
            let c = 1 + rng.below(5) as usize;
            let mut m = IntMatrix::zeros(r, c);
            for i in 0..r {
                for j in 0..c {
                    m.set(i, j, BigInt::from(rng.below(11) as i64 - 5));
                }
            }
            let f = smith_normal_form(&m);
            // rank-nullity over the integers
            assert_eq!(f.kernel_basis().len(), c - f.rank());
            for x in f.kernel_basis() {
                assert!(m.apply(&x).iter().all(|y| y.is_zero()));
            }
        }
    }
}
