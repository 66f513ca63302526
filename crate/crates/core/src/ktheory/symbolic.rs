//! Symbolic integer matrices with eventually-affine rows, vectors with
//! eventually constant entries, and the truncation machinery for kernels
//! of infinite matrices.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::snf::{canonical_kernel_basis, smith_normal_form, trim_trailing_zeros, IntMatrix};
use super::KTheoryError;
use crate::model::{DenseZeroOne, SymbolicZeroOne};
use crate::setalg::Polarity;

/// An integer vector indexed by positions `0, 1, 2, …` whose entries are
/// constant from some point on.  Normalized so that equality is equality
/// of functions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EventuallyConstantVector {
    prefix: Vec<BigInt>,
    tail: BigInt,
}

impl EventuallyConstantVector {
    pub fn new(mut prefix: Vec<BigInt>, tail: BigInt) -> Self {
        while prefix.last() == Some(&tail) {
            prefix.pop();
        }
        EventuallyConstantVector { prefix, tail }
    }

    pub fn zero() -> Self {
        Self::new(Vec::new(), BigInt::zero())
    }

    /// The point mass at position `i`.
    pub fn delta(i: usize) -> Self {
        let mut prefix = vec![BigInt::zero(); i + 1];
        prefix[i] = BigInt::one();
        Self::new(prefix, BigInt::zero())
    }

    /// A finitely supported vector.
    pub fn from_finite(entries: &[i64]) -> Self {
        Self::new(
            entries.iter().map(|&x| BigInt::from(x)).collect(),
            BigInt::zero(),
        )
    }

    pub fn at(&self, i: usize) -> BigInt {
        self.prefix
            .get(i)
            .cloned()
            .unwrap_or_else(|| self.tail.clone())
    }

    pub fn prefix(&self) -> &[BigInt] {
        &self.prefix
    }

    pub fn tail_value(&self) -> &BigInt {
        &self.tail
    }

    pub fn is_zero(&self) -> bool {
        self.prefix.iter().all(Zero::is_zero) && self.tail.is_zero()
    }

    /// Index from which the entries are all equal to the tail value.
    pub fn settled_at(&self) -> usize {
        self.prefix.len()
    }
}

/// An integer matrix on positions `0, 1, 2, …` with finitely many nonzero
/// entries per row: explicit rows below `tail_start`, and every row
/// `p ≥ tail_start` carrying entries at `p + d` for the offset list plus
/// fixed columns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymbolicIntMatrix {
    prefix_rows: Vec<Vec<(usize, BigInt)>>,
    tail_offsets: Vec<(i64, BigInt)>,
    tail_fixed: Vec<(usize, BigInt)>,
}

impl SymbolicIntMatrix {
    pub fn new(
        prefix_rows: Vec<Vec<(usize, BigInt)>>,
        tail_offsets: Vec<(i64, BigInt)>,
        tail_fixed: Vec<(usize, BigInt)>,
    ) -> Result<Self, KTheoryError> {
        let t = prefix_rows.len() as i64;
        if tail_offsets.iter().any(|&(d, _)| t + d < 0) {
            return Err(KTheoryError::NotRepresentable(
                "a tail offset reaches before position zero".into(),
            ));
        }
        Ok(SymbolicIntMatrix {
            prefix_rows,
            tail_offsets,
            tail_fixed,
        })
    }

    pub fn tail_start(&self) -> usize {
        self.prefix_rows.len()
    }

    /// Entry at `(row, col)`.
    pub fn entry(&self, row: usize, col: usize) -> BigInt {
        if row < self.prefix_rows.len() {
            return self.prefix_rows[row]
                .iter()
                .filter(|&&(c, _)| c == col)
                .map(|(_, v)| v.clone())
                .sum();
        }
        let mut acc = BigInt::zero();
        for (d, v) in &self.tail_offsets {
            if row as i64 + d == col as i64 {
                acc += v;
            }
        }
        for (c, v) in &self.tail_fixed {
            if *c == col {
                acc += v;
            }
        }
        acc
    }

    /// Exact product with an eventually constant vector.  The result is
    /// again eventually constant: rows are eventually translates of one
    /// pattern, and far enough out every offset lands in the constant
    /// tail of the argument.
    pub fn apply(&self, x: &EventuallyConstantVector) -> EventuallyConstantVector {
        let t = self.tail_start();
        let min_d = self.tail_offsets.iter().map(|&(d, _)| d).min().unwrap_or(0);
        let settled = (x.settled_at() as i64 - min_d).max(t as i64) as usize;
        let mut prefix = Vec::with_capacity(settled + 1);
        for p in 0..=settled {
            let row_entries: Vec<(usize, BigInt)> = if p < t {
                self.prefix_rows[p].clone()
            } else {
                self.tail_offsets
                    .iter()
                    .map(|(d, v)| ((p as i64 + d) as usize, v.clone()))
                    .chain(self.tail_fixed.iter().cloned())
                    .collect()
            };
            let mut acc = BigInt::zero();
            for (c, v) in row_entries {
                acc += v * x.at(c);
            }
            prefix.push(acc);
        }
        let tail = prefix.last().cloned().unwrap_or_else(BigInt::zero);
        EventuallyConstantVector::new(prefix, tail)
    }
}

/// Builds `Aᵗ − I` symbolically from a symbolic {0,1} matrix (positions
/// are matrix indices shifted to start at zero).  Representable exactly
/// when the tail rows of `A` carry no fixed columns — a fixed column
/// would put infinitely many ones into one row of the transpose.
pub fn transpose_minus_identity(a: &SymbolicZeroOne) -> Result<SymbolicIntMatrix, KTheoryError> {
    if !a.tail_fixed.is_empty() {
        return Err(KTheoryError::NotRepresentable(
            "tail rows with fixed columns transpose to rows with infinitely many entries".into(),
        ));
    }
    let prefix_len = (a.tail_start - a.first_index) as usize;
    let reach = a.max_offset_reach();
    let max_support_pos = a
        .prefix
        .iter()
        .flat_map(|s| s.support().iter())
        .map(|&c| (c - a.first_index) as usize + 1)
        .max()
        .unwrap_or(0);
    let t = prefix_len.max(max_support_pos) + reach + 1;

    // rows below t entry-by-entry: column `i` of A is finite because only
    // prefix rows and the offset translates can hit it
    let mut prefix_rows = Vec::with_capacity(t);
    for i in 0..t {
        let col = a.first_index + i as i64;
        let mut entries: Vec<(usize, BigInt)> = Vec::new();
        for (p, set) in a.prefix.iter().enumerate() {
            if set.contains(&col) {
                entries.push((p, BigInt::one()));
            }
        }
        for &d in &a.tail_offsets {
            let row = col - d;
            if row >= a.tail_start {
                entries.push(((row - a.first_index) as usize, BigInt::one()));
            }
        }
        // subtract the identity
        entries.push((i, -BigInt::one()));
        entries.sort_by_key(|&(c, _)| c);
        let mut merged: Vec<(usize, BigInt)> = Vec::new();
        for (c, v) in entries {
            match merged.last_mut() {
                Some((mc, mv)) if *mc == c => *mv += v,
                _ => merged.push((c, v)),
            }
        }
        merged.retain(|(_, v)| !v.is_zero());
        prefix_rows.push(merged);
    }

    // rows ≥ t follow one affine pattern: ones from each cofinite prefix
    // row, ones at i − d per offset, minus the diagonal
    let mut tail_fixed: Vec<(usize, BigInt)> = a
        .prefix
        .iter()
        .enumerate()
        .filter(|(_, set)| set.polarity() == Polarity::Cofinite)
        .map(|(p, _)| (p, BigInt::one()))
        .collect();
    tail_fixed.sort_by_key(|&(c, _)| c);
    let mut tail_offsets: Vec<(i64, BigInt)> = Vec::new();
    let mut diagonal = -BigInt::one();
    for &d in &a.tail_offsets {
        if d == 0 {
            diagonal += BigInt::one();
        } else {
            tail_offsets.push((-d, BigInt::one()));
        }
    }
    if !diagonal.is_zero() {
        tail_offsets.push((0, diagonal));
    }
    tail_offsets.sort_by_key(|&(d, _)| d);

    let m = SymbolicIntMatrix {
        prefix_rows,
        tail_offsets,
        tail_fixed,
    };
    debug_assert!({
        // the explicit region must join the pattern seamlessly
        let dense = a.truncate((t + reach + 2).max(a.min_truncation()))?;
        (0..t + 1).all(|i| {
            (0..t + 1).all(|j| {
                let expect = BigInt::from(dense.get(j, i) as i64) - BigInt::from((i == j) as i64);
                m.entry(i, j) == expect
            })
        })
    });
    Ok(m)
}

/// The interior kernel rank and canonical basis of the truncations
/// `(Aᵗ − I)` at the requested sizes, with coordinates restricted away
/// from the truncation boundary so cut rows cannot fabricate solutions.
#[derive(Debug, Clone)]
pub struct KernelStabilization {
    /// `(size, interior kernel rank)` per requested size.
    pub per_size: Vec<(usize, usize)>,
    /// Whether rank and canonical basis agreed across all sizes.
    pub stabilized: bool,
    pub rank: Option<usize>,
    /// Canonical basis vectors, trailing zeros trimmed, from the largest
    /// truncation.
    pub basis: Vec<Vec<BigInt>>,
    /// Number of boundary coordinates excluded (the offset reach).
    pub guard: usize,
}

pub fn truncated_kernel_stabilization(
    a: &SymbolicZeroOne,
    sizes: &[usize],
) -> Result<KernelStabilization, KTheoryError> {
    let guard = a.max_offset_reach();
    let mut per_size = Vec::new();
    let mut bases: Vec<Vec<Vec<BigInt>>> = Vec::new();
    for &n in sizes {
        if n <= guard {
            return Err(KTheoryError::NotRepresentable(format!(
                "truncation size {n} does not clear the offset reach {guard}"
            )));
        }
        let dense = a.truncate(n)?;
        let m = a_transpose_minus_identity_dense(&dense);
        let interior = m.submatrix_cols(n - guard);
        let snf = smith_normal_form(&interior);
        let raw = snf.kernel_basis();
        let basis: Vec<Vec<BigInt>> = canonical_kernel_basis(raw)
            .into_iter()
            .map(trim_trailing_zeros)
            .collect();
        per_size.push((n, basis.len()));
        bases.push(basis);
    }
    let stabilized =
        per_size.windows(2).all(|w| w[0].1 == w[1].1) && bases.windows(2).all(|w| w[0] == w[1]);
    let rank = stabilized.then(|| per_size.last().map(|&(_, r)| r).unwrap_or(0));
    let basis = bases.pop().unwrap_or_default();
    Ok(KernelStabilization {
        per_size,
        stabilized,
        rank,
        basis,
        guard,
    })
}

pub(crate) fn a_transpose_minus_identity_dense(a: &DenseZeroOne) -> IntMatrix {
    let n = a.size();
    let mut m = IntMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let mut x = BigInt::from(a.get(j, i) as i64);
            if i == j {
                x -= BigInt::one();
            }
            m.set(i, j, x);
        }
    }
    m
}
