//! Direct construction of a ℤ-basis of the solution module `S`.
//!
//! After moving the members of `M` to the front (pivot first), a basis
//! `z_2,…,z_n` is described by its coordinates relative to the rational
//! vectors `w(1,j)`. The coordinate matrix has the block shape
//!
//! ```text
//!     A = [ X  Y ]      X: (m-1)×(m-1) upper triangular
//!         [ 0  I ]      Y: (m-1)×(n-m)
//! ```
//!
//! where the diagonal of `X` telescopes the prefix gcds of `a_1,…,a_m`, so
//! `det A = |a_1|`. Every column only has to satisfy
//! `Σ_{i≥2} a_i·α_i ≡ 0 (mod a_1)`; a set of `n-1` members of `S` whose
//! coordinate determinant is `±a_1` is a basis (see [`verify_basis`]).

use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::matrix::{det_exact, IntMatrix};
use crate::ring::{gcd_prefixes, solve_linear_congruence, Int};
use crate::solution::{from_w_coords, w_coords, Coefficients, IndexSet, SolutionVector};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasisMatrix {
    /// Coordinate matrix in permuted order; column `k` belongs to `basis[k]`.
    pub a: IntMatrix,
    pub x: IntMatrix,
    pub y: IntMatrix,
    /// The basis vectors `z_2,…,z_n` in original coordinates.
    pub basis: Vec<SolutionVector>,
    /// Original index of the pivot coefficient.
    pub pivot: usize,
    /// `permutation[k]` is the original index placed at position `k+1`.
    pub permutation: Vec<usize>,
}

impl BasisMatrix {
    pub fn m(&self) -> usize {
        self.x.rows() + 1
    }

    /// Coordinates of the basis relative to `w(pivot, j)`, `j ≠ pivot`, in
    /// original index order. Equal to `a` up to a permutation of rows.
    pub fn w_matrix(&self, c: &Coefficients) -> IntMatrix {
        w_coordinate_matrix(c, &self.basis, self.pivot).expect("pivot is nonzero")
    }
}

/// Columns are the w-coordinates of `vectors` at `pivot`.
pub fn w_coordinate_matrix<V: AsRef<[Int]>>(
    c: &Coefficients,
    vectors: &[V],
    pivot: usize,
) -> Result<IntMatrix> {
    let cols = vectors
        .iter()
        .map(|v| w_coords(c, v.as_ref(), pivot))
        .collect::<Result<Vec<_>>>()?;
    IntMatrix::from_columns(c.n() - 1, &cols)
}

/// Order used internally: pivot, remaining members of `M`, then the rest.
fn pivot_order(c: &Coefficients, m: &IndexSet) -> Vec<usize> {
    let pivot = m.pivot(c);
    let mut order = vec![pivot];
    order.extend(m.as_slice().iter().copied().filter(|&i| i != pivot));
    order.extend((1..=c.n()).filter(|&i| !m.contains(i)));
    order
}

/// Fills one free slot `slots` of a column so that
/// `Σ coeffs·slots ≡ −rest (mod a_1)`. Tries the last slot alone first.
fn complete_column(coeffs: &[Int], rest: &Int, a1: &Int) -> Result<Vec<Int>> {
    let target = -rest;
    let mut out = vec![Int::zero(); coeffs.len()];
    let Some(last) = coeffs.last() else {
        // no free slots: a_1 is a unit here, or the column already works
        return if (rest % a1).is_zero() {
            Ok(out)
        } else {
            Err(Error::Internal("column congruence has no free slot".into()))
        };
    };
    match solve_linear_congruence(std::slice::from_ref(last), &target, a1) {
        Ok(t) => {
            *out.last_mut().unwrap() = t.into_iter().next().unwrap();
            Ok(out)
        }
        Err(Error::Unsolvable) => solve_linear_congruence(coeffs, &target, a1)
            .map_err(|e| Error::Internal(format!("basis column congruence: {e}"))),
        Err(e) => Err(e),
    }
}

/// Builds the basis described in the module docs for the index set `m`.
pub fn build_basis(c: &Coefficients, m: &IndexSet) -> Result<BasisMatrix> {
    let n = c.n();
    let order = pivot_order(c, m);
    let pc = c.permuted(&order)?;
    let b = pc.as_slice();
    let a1 = &b[0];
    let msize = m.len();
    let chain = gcd_prefixes(&b[..msize]);

    let mut a = IntMatrix::zeros(n - 1, n - 1);
    // X: column i-1 belongs to z_{i+1}, i = 1..m-1
    for i in 1..msize {
        let diag = chain.prefix(i) / chain.prefix(i + 1);
        // Σ_{k=2..i} b_k·α_k + b_{i+1}·diag ≡ 0 (mod a_1)
        let rest = &b[i] * &diag;
        let slots = complete_column(&b[1..i], &rest, a1)?;
        for (r, t) in slots.into_iter().enumerate() {
            a[(r, i - 1)] = t;
        }
        a[(i - 1, i - 1)] = diag;
    }
    // Y and the identity block
    for j in 1..=n - msize {
        let col = msize - 1 + (j - 1);
        let rest = b[msize - 1 + j].clone();
        let slots = complete_column(&b[1..msize], &rest, a1)?;
        for (r, t) in slots.into_iter().enumerate() {
            a[(r, col)] = t;
        }
        a[(col, col)] = Int::from(1);
    }

    let basis = a
        .columns()
        .iter()
        .map(|alpha| {
            let z = from_w_coords(&pc, alpha, 1)
                .map_err(|_| Error::Internal("column violates the congruence".into()))?;
            let mut x = vec![Int::zero(); n];
            for (k, v) in z.into_vec().into_iter().enumerate() {
                x[order[k] - 1] = v;
            }
            Ok(SolutionVector::new_unchecked(x))
        })
        .collect::<Result<Vec<_>>>()?;

    let k = msize - 1;
    let x = a.submatrix(&(0..k).collect::<Vec<_>>(), &(0..k).collect::<Vec<_>>());
    let y = a.submatrix(&(0..k).collect::<Vec<_>>(), &(k..n - 1).collect::<Vec<_>>());
    Ok(BasisMatrix {
        a,
        x,
        y,
        basis,
        pivot: order[0],
        permutation: order,
    })
}

/// The closed form for a two-element `M = {p, q}` (pivot `p`): with
/// `a_q·t ≡ 1 (mod a_p)`, `z_q = |a_p|·w(p,q)` and `z_j = −a_j·t·w(p,q) + w(p,j)`
/// with the `w(p,q)` coefficient reduced mod `a_p`.
/// Returned in original coordinates, ordered as `q` followed by the other
/// indices ascending.
pub fn two_index_basis(c: &Coefficients, p: usize, q: usize) -> Result<Vec<SolutionVector>> {
    c.check_index(p)?;
    c.check_index(q)?;
    let ap = c.get(p);
    if ap.is_zero() {
        return Err(Error::ZeroPivot(p));
    }
    let t = solve_linear_congruence(std::slice::from_ref(c.get(q)), &Int::from(1), ap)
        .map_err(|_| Error::NotCoprimeSubset(vec![p, q]))?
        .remove(0);
    let n = c.n();
    let slot = |j: usize| if j < p { j - 1 } else { j - 2 };
    let mut out = Vec::with_capacity(n - 1);
    let mut alpha = vec![Int::zero(); n - 1];
    alpha[slot(q)] = ap.abs();
    out.push(from_w_coords(c, &alpha, p)?);
    for j in (1..=n).filter(|&j| j != p && j != q) {
        let mut alpha = vec![Int::zero(); n - 1];
        alpha[slot(q)] = (-(c.get(j) * &t)).mod_floor(&ap.abs());
        alpha[slot(j)] = Int::from(1);
        out.push(from_w_coords(c, &alpha, p)?);
    }
    Ok(out)
}

/// Why a candidate basis was rejected.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Rejection {
    ZeroPivot(usize),
    WrongCount { expected: usize, found: usize },
    NotASolution { index: usize },
    WrongDeterminant { det: Int, expected: Int },
}

impl std::fmt::Display for Rejection {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Rejection::ZeroPivot(p) => write!(f, "coefficient at pivot {p} is zero"),
            Rejection::WrongCount { expected, found } => {
                write!(f, "expected {expected} vectors, found {found}")
            }
            Rejection::NotASolution { index } => write!(f, "vector {index} is not a solution"),
            Rejection::WrongDeterminant { det, expected } => {
                write!(f, "coordinate determinant {det}, expected ±{expected}")
            }
        }
    }
}

/// A basis of `S` that passed [`verify_basis`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CertifiedBasis {
    pub vectors: Vec<SolutionVector>,
    pub pivot: usize,
    /// Determinant of the w-coordinate matrix; `|det| = |a_pivot|`.
    pub det: Int,
    pub w_matrix: IntMatrix,
}

/// Accepts `n-1` members of `S` whose w-coordinate matrix at `pivot` has
/// determinant `±a_pivot`. Since `W/S` is cyclic of order `|a_pivot|`, such a
/// family spans all of `S`.
pub fn verify_basis<V: AsRef<[Int]>>(
    c: &Coefficients,
    candidate: &[V],
    pivot: usize,
) -> std::result::Result<CertifiedBasis, Rejection> {
    if pivot == 0 || pivot > c.n() || c.get(pivot).is_zero() {
        return Err(Rejection::ZeroPivot(pivot));
    }
    if candidate.len() != c.n() - 1 {
        return Err(Rejection::WrongCount {
            expected: c.n() - 1,
            found: candidate.len(),
        });
    }
    let mut vectors = Vec::with_capacity(candidate.len());
    for (index, v) in candidate.iter().enumerate() {
        let v = SolutionVector::new(c, v.as_ref().to_vec())
            .map_err(|_| Rejection::NotASolution { index })?;
        vectors.push(v);
    }
    let w_matrix = w_coordinate_matrix(c, &vectors, pivot).expect("checked pivot");
    let det = det_exact(&w_matrix).expect("square");
    let expected = c.get(pivot).abs();
    if det.abs() != expected {
        return Err(Rejection::WrongDeterminant { det, expected });
    }
    Ok(CertifiedBasis {
        vectors,
        pivot,
        det,
        w_matrix,
    })
}

/// Builds with `m` and certifies the result.
pub fn certified_basis(c: &Coefficients, m: &IndexSet) -> Result<CertifiedBasis> {
    let b = build_basis(c, m)?;
    verify_basis(c, &b.basis, b.pivot)
        .map_err(|r| Error::Internal(format!("constructed basis rejected: {r}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{int, ints};
    use crate::solution::{choose_m, v_vector, MStrategy};

    #[test]
    fn worked_example_full_m() {
        let c = Coefficients::from_i64(&[12, 4, 2, 3]).unwrap();
        let b = build_basis(&c, &IndexSet::all(&c)).unwrap();
        assert_eq!(b.x.diagonal_entries(), ints(&[3, 2, 2]));
        assert!(b.x.is_upper_triangular());
        assert_eq!(det_exact(&b.a).unwrap(), int(12));
        // canonical residues: 4a ≡ -4 gives a = 2, 2c ≡ -6 gives c = 3
        assert_eq!(
            b.a,
            IntMatrix::from_i64(&[&[3, 2, 0], &[0, 2, 3], &[0, 0, 2]])
        );
        let cert = verify_basis(&c, &b.basis, b.pivot).unwrap();
        assert_eq!(cert.det, int(12));
    }

    #[test]
    fn alternate_choice_is_accepted() {
        let c = Coefficients::from_i64(&[12, 4, 2, 3]).unwrap();
        let z = [
            ints(&[-1, 3, 0, 0]),
            ints(&[0, -1, 2, 0]),
            ints(&[-1, 1, 1, 2]),
        ];
        let cert = verify_basis(&c, &z, 1).unwrap();
        assert_eq!(cert.det, int(12));
    }

    #[test]
    fn unit_pivot() {
        let c = Coefficients::from_i64(&[1, 5, 7]).unwrap();
        let m = IndexSet::new(&c, vec![1]).unwrap();
        let b = build_basis(&c, &m).unwrap();
        assert_eq!(b.a, IntMatrix::identity(2));
        let got: Vec<Vec<Int>> = b.basis.iter().map(|v| v.as_slice().to_vec()).collect();
        assert_eq!(got, vec![ints(&[-5, 1, 0]), ints(&[-7, 0, 1])]);
    }

    #[test]
    fn two_member_m() {
        let c = Coefficients::from_i64(&[4, 7, 6]).unwrap();
        let m = IndexSet::new(&c, vec![1, 2]).unwrap();
        let b = build_basis(&c, &m).unwrap();
        let got: Vec<Vec<Int>> = b.basis.iter().map(|v| v.as_slice().to_vec()).collect();
        assert_eq!(got, vec![ints(&[-7, 4, 0]), ints(&[-5, 2, 1])]);
        assert_eq!(verify_basis(&c, &b.basis, 1).unwrap().det, int(4));
        let closed = two_index_basis(&c, 1, 2).unwrap();
        assert_eq!(closed, b.basis);
    }

    #[test]
    fn permuted_m() {
        let c = Coefficients::from_i64(&[12, 4, 2, 3]).unwrap();
        let m = choose_m(&c, MStrategy::GreedyMinimal);
        let b = build_basis(&c, &m).unwrap();
        assert_eq!(b.pivot, 3);
        assert_eq!(b.permutation, vec![3, 4, 1, 2]);
        let cert = verify_basis(&c, &b.basis, 3).unwrap();
        assert_eq!(cert.det.abs(), int(2));
    }

    #[test]
    fn rejections() {
        let c = Coefficients::from_i64(&[12, 4, 2, 3]).unwrap();
        let v: Vec<SolutionVector> = (2..=4).map(|j| v_vector(&c, 1, j).unwrap()).collect();
        assert_eq!(
            verify_basis(&c, &v, 1),
            Err(Rejection::WrongDeterminant {
                det: int(1728),
                expected: int(12)
            })
        );
        assert_eq!(
            verify_basis(&c, &v[..2], 1),
            Err(Rejection::WrongCount {
                expected: 3,
                found: 2
            })
        );
        let bad = [
            ints(&[1, 0, 0, 0]),
            ints(&[0, -1, 2, 0]),
            ints(&[-1, 1, 1, 2]),
        ];
        assert_eq!(
            verify_basis(&c, &bad, 1),
            Err(Rejection::NotASolution { index: 0 })
        );
        let c0 = Coefficients::from_i64(&[0, 1, 1]).unwrap();
        assert_eq!(
            verify_basis(&c0, &[ints(&[1, 0, 0]), ints(&[0, 1, -1])], 1),
            Err(Rejection::ZeroPivot(1))
        );
    }
}
