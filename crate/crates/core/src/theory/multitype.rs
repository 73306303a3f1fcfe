//! Type matrices for percolation of oriented cliques.

use std::collections::HashMap;

use itertools::Itertools;

use crate::cliques::OrientationSpec;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

use super::combinatorics::{binomial_exact, ln_binomial, pairs, PowerLaw};
use super::spectral::{spectral_radius, Matrix, MAX_DIMENSION};
use super::survival::survival_multitype;

/// Multi-type branching bookkeeping for an orientation `H` of `K_k` and an
/// overlap size `ell`.
///
/// Types are the `ell`-subsets of the roles `0..k`, indexed in lexicographic
/// order of their complements; for `ell = k - 1` type `i` is the subset
/// missing role `i`.
#[derive(Debug, Clone)]
pub struct MultiTypeModel<T> {
    pub k: usize,
    pub ell: usize,
    pub types: Vec<Vec<usize>>,
    /// `m_matrix[b][a]`: orientations of the new edges that extend a copy of
    /// `H[a]` to a copy of `H` whose new vertices play the roles outside `b`.
    pub m_matrix: Vec<Vec<u64>>,
    /// `(J - I) m_matrix`.
    pub x_matrix: Vec<Vec<u64>>,
    /// `C(n, k - ell) p^(C(k,2) - C(ell,2))`, once instantiated.
    pub poisson_scale: Option<T>,
}

impl<T: Scalar> MultiTypeModel<T> {
    pub fn dimension(&self) -> usize {
        self.types.len()
    }

    /// Exponent of `p` in the Poisson scale.
    pub fn scale_exponent(&self) -> u64 {
        pairs(self.k as u64) - pairs(self.ell as u64)
    }

    /// Poisson scale as a function of `p` for host size `n`.
    pub fn scale_law(&self, n: u64) -> PowerLaw<T> {
        PowerLaw::new(
            ln_binomial(n, (self.k - self.ell) as u64),
            self.scale_exponent(),
        )
    }

    /// Sets the Poisson scale for `G(n, p)`.
    pub fn instantiate(mut self, n: u64, p: T) -> Self {
        self.poisson_scale = Some(self.scale_law(n).eval(p));
        self
    }

    pub fn x_as_matrix(&self) -> Matrix<T> {
        Matrix::from_integer_rows(&self.x_matrix).expect("square by construction")
    }

    /// Perron root of the X matrix.
    pub fn perron_root(&self) -> Result<T> {
        spectral_radius(&self.x_as_matrix())
    }

    /// Mean-offspring analogue: Perron root times the Poisson scale.
    pub fn growth_rate(&self) -> Result<T> {
        let scale = self.require_scale()?;
        Ok(self.perron_root()? * scale)
    }

    /// Survival probability of the multi-type process at the instantiated scale.
    pub fn survival(&self) -> Result<T> {
        survival_multitype(&self.m_matrix, self.require_scale()?)
    }

    fn require_scale(&self) -> Result<T> {
        self.poisson_scale
            .ok_or_else(|| Error::invalid("model has no Poisson scale; call instantiate"))
    }
}

/// `ell`-subsets of `0..k` ordered by the lexicographic order of their
/// complements.
pub fn type_order(k: usize, ell: usize) -> Vec<Vec<usize>> {
    (0..k)
        .combinations(k - ell)
        .map(|comp| (0..k).filter(|i| !comp.contains(i)).collect())
        .collect()
}

/// Builds the type matrix of `h` by brute force over role assignments.
///
/// For a start type `A`, its roles are fixed host vertices and `k - ell` new
/// vertices are added. Every isomorphism from `H[B]` onto `H[A]`, combined
/// with every assignment of the remaining roles to the new vertices, yields an
/// orientation of the new edges; distinct orientations are counted. An
/// orientation compatible with several `B` is credited to the smallest type
/// index.
pub fn orientation_type_matrix<T: Scalar>(h: &OrientationSpec, ell: usize) -> Result<MultiTypeModel<T>> {
    let k = h.k();
    if ell < 1 || ell >= k {
        return Err(Error::invalid(format!("ell={ell} outside [1, k-1] for k={k}")));
    }
    let size = binomial_exact(k as u64, ell as u64).unwrap_or(u128::MAX);
    if size > MAX_DIMENSION as u128 {
        return Err(Error::Unsupported(format!("C({k},{ell}) types exceed {MAX_DIMENSION}")));
    }
    let types = type_order(k, ell);
    let t = types.len();
    let new_vertices: Vec<usize> = (k..2 * k - ell).collect();
    let mut m_matrix = vec![vec![0u64; t]; t];
    for (a_idx, a) in types.iter().enumerate() {
        let mut owner: HashMap<Vec<(usize, usize)>, usize> = HashMap::new();
        for (b_idx, b) in types.iter().enumerate() {
            let rest: Vec<usize> = (0..k).filter(|i| !b.contains(i)).collect();
            for image in a.iter().copied().permutations(ell) {
                // image[i] hosts role b[i]
                let preserves = (0..ell)
                    .tuple_combinations()
                    .all(|(i, j)| h.beats(b[i], b[j]) == h.beats(image[i], image[j]));
                if !preserves {
                    continue;
                }
                let mut host = vec![usize::MAX; k];
                for (i, &role) in b.iter().enumerate() {
                    host[role] = image[i];
                }
                for assignment in new_vertices.iter().copied().permutations(k - ell) {
                    for (i, &role) in rest.iter().enumerate() {
                        host[role] = assignment[i];
                    }
                    let mut orientation: Vec<(usize, usize)> = h
                        .arcs()
                        .into_iter()
                        .filter(|(i, j)| rest.contains(i) || rest.contains(j))
                        .map(|(i, j)| (host[i], host[j]))
                        .collect();
                    orientation.sort_unstable();
                    owner
                        .entry(orientation)
                        .and_modify(|o| *o = (*o).min(b_idx))
                        .or_insert(b_idx);
                }
            }
        }
        for b_idx in owner.into_values() {
            m_matrix[b_idx][a_idx] += 1;
        }
    }
    let x_matrix = (0..t)
        .map(|b| {
            (0..t)
                .map(|a| (0..t).filter(|&c| c != b).map(|c| m_matrix[c][a]).sum())
                .collect()
        })
        .collect();
    Ok(MultiTypeModel {
        k,
        ell,
        types,
        m_matrix,
        x_matrix,
        poisson_scale: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn type_order_for_triples() {
        assert_eq!(
            type_order(4, 3),
            vec![vec![1, 2, 3], vec![0, 2, 3], vec![0, 1, 3], vec![0, 1, 2]]
        );
        assert_eq!(type_order(4, 2).len(), 6);
    }

    #[test]
    fn two_cyclic_matrices() {
        let model = orientation_type_matrix::<f64>(&OrientationSpec::k4_two_cyclic(), 3).unwrap();
        assert_eq!(
            model.m_matrix,
            vec![vec![3, 3, 0, 0], vec![3, 3, 0, 0], vec![0, 0, 1, 1], vec![0, 0, 1, 1]]
        );
        assert_eq!(
            model.x_matrix,
            vec![vec![3, 3, 2, 2], vec![3, 3, 2, 2], vec![6, 6, 1, 1], vec![6, 6, 1, 1]]
        );
    }

    #[test]
    fn transitive_entries_are_factorials() {
        for k in 2..=5usize {
            let h = OrientationSpec::transitive(k).unwrap();
            for ell in 1..k {
                let model = orientation_type_matrix::<f64>(&h, ell).unwrap();
                let expected: u64 = (1..=(k - ell) as u64).product();
                assert!(
                    model.m_matrix.iter().flatten().all(|&e| e == expected),
                    "k={k} ell={ell}"
                );
            }
        }
    }

    #[test]
    fn transitive_insertion_columns() {
        for k in 2..=6usize {
            let h = OrientationSpec::transitive(k).unwrap();
            let model = orientation_type_matrix::<f64>(&h, k - 1).unwrap();
            for a in 0..k {
                let col: u64 = (0..k).map(|b| model.m_matrix[b][a]).sum();
                assert_eq!(col, k as u64);
            }
        }
    }

    #[test]
    fn deterministic_attribution() {
        let h = OrientationSpec::parse_arcs("0>1,1>2,2>0,0>3,1>3,2>3").unwrap();
        let a = orientation_type_matrix::<f64>(&h, 2).unwrap();
        let b = orientation_type_matrix::<f64>(&h, 2).unwrap();
        assert_eq!(a.m_matrix, b.m_matrix);
    }

    #[test]
    fn uninstantiated_model_has_no_rate() {
        let model = orientation_type_matrix::<f64>(&OrientationSpec::k4_two_cyclic(), 3).unwrap();
        assert!(model.growth_rate().is_err());
        let model = model.instantiate(1000, 0.01);
        let scale = 1000.0 * 0.01f64.powi(3);
        assert!((model.poisson_scale.unwrap() - scale).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_ell() {
        let h = OrientationSpec::k4_two_cyclic();
        assert!(orientation_type_matrix::<f64>(&h, 0).is_err());
        assert!(orientation_type_matrix::<f64>(&h, 4).is_err());
    }
}
