//! Dense nonnegative matrices and their Perron root.

use std::fmt;

use petgraph::algo::tarjan_scc;
use petgraph::graph::{DiGraph, NodeIndex};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Largest matrix dimension accepted by [`spectral_radius`].
pub const MAX_DIMENSION: usize = 256;

const MAX_ITERATIONS: usize = 200_000;

/// Square matrix, row-major.
#[derive(Clone, PartialEq)]
pub struct Matrix<T> {
    dim: usize,
    data: Vec<T>,
}

impl<T: Scalar> Matrix<T> {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![T::zero(); dim * dim],
        }
    }

    pub fn from_rows(rows: &[Vec<T>]) -> Result<Self> {
        let dim = rows.len();
        if rows.iter().any(|r| r.len() != dim) {
            return Err(Error::invalid("matrix must be square"));
        }
        Ok(Self {
            dim,
            data: rows.iter().flatten().copied().collect(),
        })
    }

    pub fn from_integer_rows(rows: &[Vec<u64>]) -> Result<Self> {
        let rows: Vec<Vec<T>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| T::of_u64(x)).collect())
            .collect();
        Self::from_rows(&rows)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> T {
        self.data[row * self.dim + col]
    }

    pub fn set(&mut self, row: usize, col: usize, value: T) {
        self.data[row * self.dim + col] = value;
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros(self.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                out.set(j, i, self.get(i, j));
            }
        }
        out
    }

    fn mul_vec(&self, x: &[T], out: &mut [T]) {
        for (i, slot) in out.iter_mut().enumerate() {
            let row = &self.data[i * self.dim..(i + 1) * self.dim];
            *slot = row.iter().zip(x).fold(T::zero(), |acc, (&a, &b)| acc + a * b);
        }
    }

    fn max_row_sum(&self) -> T {
        (0..self.dim)
            .map(|i| {
                self.data[i * self.dim..(i + 1) * self.dim]
                    .iter()
                    .fold(T::zero(), |acc, &x| acc + x)
            })
            .fold(T::zero(), T::max)
    }
}

impl<T: Scalar> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<Vec<T>> = (0..self.dim)
            .map(|i| (0..self.dim).map(|j| self.get(i, j)).collect())
            .collect();
        f.debug_struct("Matrix").field("rows", &rows).finish()
    }
}

/// Perron root of a nonnegative square matrix.
///
/// The root is the largest over the irreducible diagonal blocks (strongly
/// connected components of the support). A singleton block contributes its
/// diagonal entry; larger blocks go to [`irreducible_root`].
pub fn spectral_radius<T: Scalar>(x: &Matrix<T>) -> Result<T> {
    let dim = x.dim();
    if dim > MAX_DIMENSION {
        return Err(Error::Unsupported(format!(
            "matrix dimension {dim} exceeds {MAX_DIMENSION}"
        )));
    }
    if x.data.iter().any(|&v| !v.is_finite() || v < T::zero()) {
        return Err(Error::invalid("matrix entries must be finite and nonnegative"));
    }
    let mut support = DiGraph::<(), ()>::with_capacity(dim, 0);
    (0..dim).for_each(|_| {
        support.add_node(());
    });
    for i in 0..dim {
        for j in 0..dim {
            if x.get(i, j) > T::zero() {
                support.add_edge(NodeIndex::new(i), NodeIndex::new(j), ());
            }
        }
    }
    let mut root = T::zero();
    for block in tarjan_scc(&support) {
        let mut block: Vec<usize> = block.into_iter().map(NodeIndex::index).collect();
        let value = if block.len() == 1 {
            x.get(block[0], block[0])
        } else {
            block.sort_unstable();
            let rows: Vec<Vec<T>> = block
                .iter()
                .map(|&i| block.iter().map(|&j| x.get(i, j)).collect())
                .collect();
            irreducible_root(&Matrix::from_rows(&rows)?)
        };
        root = root.max(value);
    }
    Ok(root)
}

/// Power iteration on `X + cI`, `c` half the largest row sum, from the
/// all-ones vector. For irreducible `X` the shifted matrix is primitive, so
/// the Collatz-Wielandt bounds close geometrically on the root.
fn irreducible_root<T: Scalar>(x: &Matrix<T>) -> T {
    let dim = x.dim();
    let shift = x.max_row_sum() / T::of(2.0);
    let tol = T::solver_tolerance().max(T::epsilon() * T::of(64.0));
    let mut v = vec![T::one(); dim];
    let mut w = vec![T::zero(); dim];
    let (mut lower, mut upper) = (T::zero(), T::zero());
    for _ in 0..MAX_ITERATIONS {
        x.mul_vec(&v, &mut w);
        (lower, upper) = (T::infinity(), T::zero());
        for (wi, &vi) in w.iter_mut().zip(&v) {
            *wi = *wi + shift * vi;
            let ratio = *wi / vi;
            lower = lower.min(ratio);
            upper = upper.max(ratio);
        }
        if upper - lower <= tol * upper {
            break;
        }
        let norm = w.iter().fold(T::zero(), |acc, &a| acc.max(a));
        for (vi, &wi) in v.iter_mut().zip(&w) {
            *vi = wi / norm;
        }
    }
    if upper - lower > tol * upper {
        log::warn!("spectral radius: power iteration did not converge");
    }
    (lower + upper) / T::of(2.0) - shift
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[f64]]) -> Matrix<f64> {
        Matrix::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn scalar_and_zero() {
        assert_eq!(spectral_radius(&m(&[&[7.5]])).unwrap(), 7.5);
        assert_eq!(spectral_radius(&Matrix::<f64>::zeros(3)).unwrap(), 0.0);
        assert_eq!(spectral_radius(&Matrix::<f64>::zeros(0)).unwrap(), 0.0);
    }

    #[test]
    fn periodic_matrix() {
        let r = spectral_radius(&m(&[&[0.0, 2.0], &[2.0, 0.0]])).unwrap();
        assert!((r - 2.0).abs() < 1e-12);
        let cyc = m(&[&[0.0, 1.0, 0.0], &[0.0, 0.0, 1.0], &[1.0, 0.0, 0.0]]);
        assert!((spectral_radius(&cyc).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn reducible_matrix() {
        let r = spectral_radius(&m(&[&[1.0, 0.0], &[0.0, 3.0]])).unwrap();
        assert!((r - 3.0).abs() < 1e-9);
        let tri = m(&[&[2.0, 5.0], &[0.0, 1.0]]);
        assert!((spectral_radius(&tri).unwrap() - 2.0).abs() < 1e-9);
        let nilpotent = m(&[&[0.0, 0.0], &[0.5, 0.0]]);
        assert_eq!(spectral_radius(&nilpotent).unwrap(), 0.0);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(spectral_radius(&m(&[&[1.0, -1.0], &[0.0, 1.0]])).is_err());
        assert!(Matrix::<f64>::from_rows(&[vec![1.0, 2.0]]).is_err());
        assert!(matches!(
            spectral_radius(&Matrix::<f64>::zeros(257)),
            Err(Error::Unsupported(_))
        ));
    }
}
