//! Generators and relations for `S`.
//!
//! Generators are labelled by the pairs `D = {(i,j) : i<j, {i,j} ∩ M ≠ ∅}`
//! and mapped to `v(i,j)`. Each triple `(i,j,k) ∈ E` (`i<j<k`, at least two
//! of them in `M`) gives the relation
//!
//! ```text
//! a_k·x(i,j) − a_j·x(i,k) + a_i·x(j,k) = 0
//! ```
//!
//! Over ℤ these relations are defining. The check used here: the relation
//! matrix has Smith form `diag(1,…,1,0,…,0)` of rank `d − (n−1)`, so the
//! presented module is free of rank `n−1` and maps onto `S`, which is free of
//! the same rank.

use itertools::Itertools;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::matrix::{det_exact, snf, IntMatrix};
use crate::ring::Int;
use crate::solution::{spanning_pairs, v_vector, Coefficients, IndexSet};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Presentation {
    pub n: usize,
    pub m: IndexSet,
    pub d_pairs: Vec<(usize, usize)>,
    pub e_triples: Vec<(usize, usize, usize)>,
    /// `d × e`; column `(i,j,k)` holds `a_k, −a_j, a_i` in rows `(i,j), (i,k), (j,k)`.
    pub rel: IntMatrix,
}

fn binom(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, t| acc * (n - t) / (t + 1))
}

/// `(d, e) = (m(n−m) + C(m,2), C(m,2)(n−m) + C(m,3))`.
pub fn expected_sizes(n: usize, m: usize) -> (usize, usize) {
    (
        m * (n - m) + binom(m, 2),
        binom(m, 2) * (n - m) + binom(m, 3),
    )
}

impl Presentation {
    pub fn d(&self) -> usize {
        self.d_pairs.len()
    }

    pub fn e(&self) -> usize {
        self.e_triples.len()
    }

    /// Rank the relation matrix must have: `d − (n−1)`.
    pub fn expected_rank(&self) -> usize {
        self.d() - (self.n - 1)
    }

    fn row_of(&self, pair: (usize, usize)) -> usize {
        self.d_pairs
            .binary_search(&pair)
            .expect("pair belongs to D")
    }

    /// Determinant of the square submatrix with columns `{i,j,k}` and rows
    /// `{j,k}` over all pairs `{j,k}` in `D` avoiding `i`. For `i ∈ M` each
    /// such column meets those rows only in `±a_i`, so the result is
    /// `±a_i^z` with `z = d − (n−1)`.
    pub fn diagonal_minor(&self, i: usize) -> Option<Int> {
        if !self.m.contains(i) {
            return None;
        }
        let rows: Vec<(usize, usize)> = self
            .d_pairs
            .iter()
            .copied()
            .filter(|&(p, q)| p != i && q != i)
            .collect();
        let cols: Vec<usize> = rows
            .iter()
            .map(|&(j, k)| {
                let mut t = [i, j, k];
                t.sort_unstable();
                self.e_triples
                    .binary_search(&(t[0], t[1], t[2]))
                    .expect("triple belongs to E")
            })
            .collect();
        let rows: Vec<usize> = rows.into_iter().map(|p| self.row_of(p)).collect();
        Some(det_exact(&self.rel.submatrix(&rows, &cols)).expect("square"))
    }
}

pub fn build_presentation(c: &Coefficients, m: &IndexSet) -> Presentation {
    let n = c.n();
    let d_pairs = spanning_pairs(n, m);
    let e_triples: Vec<(usize, usize, usize)> = (1..=n)
        .tuple_combinations()
        .filter(|&(i, j, k)| [i, j, k].iter().filter(|&&t| m.contains(t)).count() >= 2)
        .collect();
    let mut p = Presentation {
        n,
        m: m.clone(),
        rel: IntMatrix::zeros(d_pairs.len(), e_triples.len()),
        d_pairs,
        e_triples,
    };
    for (col, &(i, j, k)) in p.e_triples.clone().iter().enumerate() {
        let rij = p.row_of((i, j));
        let rik = p.row_of((i, k));
        let rjk = p.row_of((j, k));
        p.rel[(rij, col)] = c.get(k).clone();
        p.rel[(rik, col)] = -c.get(j);
        p.rel[(rjk, col)] = c.get(i).clone();
    }
    p
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerificationReport {
    pub d: usize,
    pub e: usize,
    pub rank: usize,
    /// Nonzero Smith diagonal of the relation matrix.
    pub snf_diagonal: Vec<Int>,
    /// Rank of the free module `X/Y` presented by the relations.
    pub presented_free_rank: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PresentationFailure {
    #[error("relation column {column} {triple:?} does not annihilate the generators")]
    RelationFails {
        column: usize,
        triple: (usize, usize, usize),
    },
    #[error("relation matrix has rank {rank} and Smith diagonal {diagonal:?}; expected rank {expected_rank} with all ones")]
    SmithForm {
        rank: usize,
        expected_rank: usize,
        diagonal: Vec<Int>,
    },
}

/// Checks that every relation holds on the `v(i,j)` and that the relation
/// matrix has Smith form `diag(1,…,1,0,…,0)` of rank `d − (n−1)`.
pub fn verify_presentation(
    c: &Coefficients,
    p: &Presentation,
) -> Result<VerificationReport, PresentationFailure> {
    let gens: Vec<Vec<Int>> = p
        .d_pairs
        .iter()
        .map(|&(i, j)| v_vector(c, i, j).expect("valid pair").into_vec())
        .collect();
    for (column, &triple) in p.e_triples.iter().enumerate() {
        let mut sum = vec![Int::zero(); c.n()];
        for (row, g) in gens.iter().enumerate() {
            let k = &p.rel[(row, column)];
            if k.is_zero() {
                continue;
            }
            for (s, x) in sum.iter_mut().zip(g) {
                *s += k * x;
            }
        }
        if sum.iter().any(|x| !x.is_zero()) {
            return Err(PresentationFailure::RelationFails { column, triple });
        }
    }
    let s = snf(&p.rel);
    let expected_rank = p.expected_rank();
    if s.rank != expected_rank || !s.invariant_factors.iter().all(One::is_one) {
        return Err(PresentationFailure::SmithForm {
            rank: s.rank,
            expected_rank,
            diagonal: s.invariant_factors,
        });
    }
    Ok(VerificationReport {
        d: p.d(),
        e: p.e(),
        rank: s.rank,
        snf_diagonal: s.invariant_factors,
        presented_free_rank: p.d() - s.rank,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{int, ints};
    use num_traits::Signed;

    fn worked() -> Coefficients {
        Coefficients::from_i64(&[12, 4, 2, 3]).unwrap()
    }

    #[test]
    fn worked_presentation() {
        let c = worked();
        let m = IndexSet::new(&c, vec![3, 4]).unwrap();
        let p = build_presentation(&c, &m);
        assert_eq!((p.d(), p.e()), (5, 2));
        assert_eq!(expected_sizes(4, 2), (5, 2));
        assert_eq!(p.e_triples, vec![(1, 3, 4), (2, 3, 4)]);
        assert_eq!(
            p.rel,
            IntMatrix::from_i64(&[&[3, 0], &[-2, 0], &[0, 3], &[0, -2], &[12, 4]])
        );
        let r = verify_presentation(&c, &p).unwrap();
        assert_eq!(r.rank, 2);
        assert_eq!(r.snf_diagonal, ints(&[1, 1]));
        assert_eq!(r.presented_free_rank, 3);
    }

    #[test]
    fn full_m_shape() {
        let c = Coefficients::from_i64(&[2, 3, 5, 7]).unwrap();
        let p = build_presentation(&c, &IndexSet::all(&c));
        let (a1, a2, a3, a4) = (2, 3, 5, 7);
        let expected = IntMatrix::from_i64(&[
            &[a3, a4, 0, 0],
            &[-a2, 0, a4, 0],
            &[0, -a2, -a3, 0],
            &[a1, 0, 0, a4],
            &[0, a1, 0, -a3],
            &[0, 0, a1, a2],
        ]);
        assert_eq!(p.rel, expected);
        assert_eq!((p.d(), p.e()), (6, 4));
        verify_presentation(&c, &p).unwrap();
    }

    #[test]
    fn single_relation_for_three_unknowns() {
        let c = Coefficients::from_i64(&[6, 10, 15]).unwrap();
        let m = IndexSet::new(&c, vec![1, 2, 3]).unwrap();
        let p = build_presentation(&c, &m);
        assert_eq!(p.rel, IntMatrix::from_i64(&[&[15], &[-10], &[6]]));
        verify_presentation(&c, &p).unwrap();
        let c = Coefficients::from_i64(&[3, 5, 7]).unwrap();
        let p = build_presentation(&c, &IndexSet::new(&c, vec![1, 2]).unwrap());
        assert_eq!((p.d(), p.e()), (3, 1));
        assert_eq!(p.rel, IntMatrix::from_i64(&[&[7], &[-5], &[3]]));
    }

    #[test]
    fn no_relations_when_m_is_a_singleton() {
        let c = Coefficients::from_i64(&[1, 4, 6]).unwrap();
        let p = build_presentation(&c, &IndexSet::new(&c, vec![1]).unwrap());
        assert_eq!((p.d(), p.e()), (2, 0));
        let r = verify_presentation(&c, &p).unwrap();
        assert_eq!(r.rank, 0);
    }

    #[test]
    fn perturbed_relation_is_caught() {
        let c = worked();
        let mut p = build_presentation(&c, &IndexSet::new(&c, vec![3, 4]).unwrap());
        p.rel[(4, 0)] = int(11);
        assert_eq!(
            verify_presentation(&c, &p),
            Err(PresentationFailure::RelationFails {
                column: 0,
                triple: (1, 3, 4)
            })
        );
    }

    #[test]
    fn diagonal_minors() {
        let c = worked();
        let p = build_presentation(&c, &IndexSet::all(&c));
        let z = p.expected_rank() as u32;
        for i in 1..=4 {
            let det = p.diagonal_minor(i).unwrap();
            assert_eq!(det.abs(), num_traits::pow(c.get(i).abs(), z as usize));
        }
        let p = build_presentation(&c, &IndexSet::new(&c, vec![3, 4]).unwrap());
        assert_eq!(p.diagonal_minor(1), None);
        assert_eq!(p.diagonal_minor(3).unwrap().abs(), int(4));
    }
}
