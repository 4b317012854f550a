//! Structure of the quotients `W/S`, `S/S_i` and `S/U_i`.
//!
//! Each quotient is computed by a closed form in the coefficients and,
//! independently, from the Smith form of generator coordinates relative to a
//! certified basis of `S`. The public `quotient_*` functions run both and
//! refuse to answer if they disagree.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::basis::{build_basis, certified_basis, w_coordinate_matrix, CertifiedBasis};
use crate::error::{Error, Result};
use crate::matrix::{snf, solve_integral, solve_upper_triangular, IntMatrix};
use crate::ring::{divides, factorize, gcd, gcd_prefixes, p_part, valuation, Int};
use crate::solution::{choose_m, u_vector, v_vector, Coefficients, IndexSet, MStrategy};

/// A finitely generated abelian group `ℤ^r ⊕ ℤ/f_1 ⊕ … ⊕ ℤ/f_k`, stored in
/// both invariant-factor form (`1 < f_1 | f_2 | …`) and elementary-divisor
/// form (prime → ascending prime powers).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct QuotientStructure {
    pub free_rank: usize,
    pub invariant_factors: Vec<Int>,
    pub elementary_divisors: BTreeMap<Int, Vec<Int>>,
}

impl QuotientStructure {
    pub fn trivial() -> Self {
        Self::default()
    }

    pub fn free(rank: usize) -> Self {
        QuotientStructure {
            free_rank: rank,
            ..Self::default()
        }
    }

    /// Normal form of `ℤ^r ⊕ ℤ/o_1 ⊕ ℤ/o_2 ⊕ …` for arbitrary orders `o_i`
    /// (no divisibility assumed). An order of 0 adds a free summand, ±1 is
    /// dropped.
    pub fn from_cyclic_orders(free_rank: usize, orders: &[Int]) -> Result<Self> {
        let mut free_rank = free_rank;
        let mut eds: BTreeMap<Int, Vec<Int>> = BTreeMap::new();
        for o in orders {
            if o.is_zero() {
                free_rank += 1;
                continue;
            }
            for (p, e) in factorize(o)? {
                let q = num_traits::pow(p.clone(), e as usize);
                eds.entry(p).or_default().push(q);
            }
        }
        Ok(Self::from_elementary_divisors(free_rank, eds))
    }

    pub fn from_elementary_divisors(free_rank: usize, mut eds: BTreeMap<Int, Vec<Int>>) -> Self {
        eds.retain(|_, v| {
            v.retain(|q| !q.is_one());
            !v.is_empty()
        });
        for v in eds.values_mut() {
            v.sort();
        }
        let len = eds.values().map(Vec::len).max().unwrap_or(0);
        // the largest invariant factor takes the largest power of each prime
        let mut invariant_factors: Vec<Int> = (0..len)
            .map(|t| {
                eds.values()
                    .filter_map(|v| v.len().checked_sub(1 + t).map(|k| v[k].clone()))
                    .product()
            })
            .collect();
        invariant_factors.reverse();
        QuotientStructure {
            free_rank,
            invariant_factors,
            elementary_divisors: eds,
        }
    }

    /// Structure of `ℤ^rows / (column span of k)`.
    pub fn from_relation_matrix(k: &IntMatrix) -> Result<Self> {
        let s = snf(k);
        Self::from_cyclic_orders(k.rows() - s.rank, &s.invariant_factors)
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.invariant_factors.is_empty()
    }

    /// Like `Display` but with the torsion written as prime powers, e.g.
    /// `Z/2 + Z/3` rather than `Z/6`.
    pub fn elementary_form(&self) -> String {
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(
            self.elementary_divisors
                .values()
                .flatten()
                .map(|q| format!("Z/{q}")),
        );
        if parts.is_empty() {
            "0".to_string()
        } else {
            parts.join(" + ")
        }
    }

    /// Order of the torsion part.
    pub fn torsion_order(&self) -> Int {
        self.invariant_factors.iter().product()
    }
}

impl fmt::Display for QuotientStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.invariant_factors.iter().map(|q| format!("Z/{q}")));
        write!(f, "{}", parts.join(" + "))
    }
}

/// The basis every SNF-side computation is measured against.
pub fn reference_basis(c: &Coefficients) -> Result<CertifiedBasis> {
    certified_basis(c, &choose_m(c, MStrategy::GreedyMinimal))
}

/// Coordinates (as columns) of `gens` relative to a basis of `S`.
pub fn coordinates_in_basis<V: AsRef<[Int]>>(
    basis: &CertifiedBasis,
    gens: &[V],
) -> Result<IntMatrix> {
    let n = basis.vectors.len() + 1;
    let b = IntMatrix::from_columns(
        n,
        &basis
            .vectors
            .iter()
            .map(|v| v.as_slice().to_vec())
            .collect::<Vec<_>>(),
    )?;
    let g = IntMatrix::from_columns(
        n,
        &gens.iter().map(|v| v.as_ref().to_vec()).collect::<Vec<_>>(),
    )?;
    solve_integral(&b, &g).map_err(|e| match e {
        Error::NonIntegral => Error::ContainmentViolation,
        e => e,
    })
}

fn agree(
    what: &str,
    closed: QuotientStructure,
    by_snf: QuotientStructure,
) -> Result<QuotientStructure> {
    if closed == by_snf {
        Ok(closed)
    } else {
        Err(Error::VerificationFailed(format!(
            "{what}: closed form {closed} but Smith form gives {by_snf}"
        )))
    }
}

/// `S/S_i ≅ (ℤ/a_i)^{n−2}`; free of rank `n−2` when `a_i = 0`.
pub fn s_mod_si_closed(c: &Coefficients, i: usize) -> Result<QuotientStructure> {
    c.check_index(i)?;
    let k = c.n() - 2;
    if c.get(i).is_zero() {
        return Ok(QuotientStructure::free(k));
    }
    QuotientStructure::from_cyclic_orders(0, &vec![c.get(i).abs(); k])
}

pub fn s_mod_si_by_snf(
    c: &Coefficients,
    i: usize,
    basis: &CertifiedBasis,
) -> Result<QuotientStructure> {
    c.check_index(i)?;
    let gens = (1..=c.n())
        .filter(|&j| j != i)
        .map(|j| v_vector(c, i, j))
        .collect::<Result<Vec<_>>>()?;
    QuotientStructure::from_relation_matrix(&coordinates_in_basis(basis, &gens)?)
}

pub fn quotient_s_mod_si(c: &Coefficients, i: usize) -> Result<QuotientStructure> {
    let basis = reference_basis(c)?;
    agree(
        "S/S_i",
        s_mod_si_closed(c, i)?,
        s_mod_si_by_snf(c, i, &basis)?,
    )
}

/// `W/S ≅ ℤ/a_pivot`, checked against the Smith form of the w-coordinates
/// of a basis of `S`, which must be `diag(1,…,1,|a_pivot|)`.
pub fn quotient_w_mod_s(c: &Coefficients, pivot: usize) -> Result<QuotientStructure> {
    c.check_index(pivot)?;
    let ap = c.get(pivot);
    if ap.is_zero() {
        return Err(Error::ZeroPivot(pivot));
    }
    let closed = QuotientStructure::from_cyclic_orders(0, &[ap.abs()])?;
    let basis = reference_basis(c)?;
    let w = w_coordinate_matrix(c, &basis.vectors, pivot)?;
    let s = snf(&w);
    let mut expected = vec![Int::one(); c.n() - 2];
    expected.push(ap.abs());
    if s.invariant_factors != expected {
        return Err(Error::VerificationFailed(format!(
            "W/S: Smith form of w-coordinates is {:?}, expected {:?}",
            s.invariant_factors, expected
        )));
    }
    agree("W/S", closed, QuotientStructure::from_relation_matrix(&w)?)
}

/// The list `d_2,…,d_{n−1}` with
/// `d_i = a_1·g_{i+1} / ((a_1,a_{i+1})·g_i)`, `g_i = gcd(a_1,…,a_i)`.
/// Equivalently `d_i = |a_1| / lcm((a_1,a_{i+1}), g_i)`. Depends on the order
/// of `a_2,…,a_n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DChain(Vec<Int>);

impl DChain {
    pub fn values(&self) -> &[Int] {
        &self.0
    }

    /// `p`-parts of the entries, sorted.
    pub fn p_parts(&self, p: &Int) -> Result<Vec<Int>> {
        let mut v = self
            .0
            .iter()
            .map(|d| p_part(d, p))
            .collect::<Result<Vec<_>>>()?;
        v.sort();
        Ok(v)
    }
}

fn check_chain_input(c: &Coefficients) -> Result<()> {
    if c.get(1).is_zero() {
        return Err(Error::ZeroPivot(1));
    }
    if c.n() <= 2 {
        return Err(Error::InvalidArgument("needs n > 2".into()));
    }
    Ok(())
}

pub fn d_chain(c: &Coefficients) -> Result<DChain> {
    check_chain_input(c)?;
    let a = c.as_slice();
    let a1 = a[0].abs();
    let g = gcd_prefixes(a);
    Ok(DChain(
        (2..c.n())
            .map(|i| &a1 * g.prefix(i + 1) / (gcd(&a1, &a[i]) * g.prefix(i)))
            .collect(),
    ))
}

/// `(a_i, a_1, …, a_{i−1}, a_{i+1}, …, a_n)`.
fn rotate_to_front(c: &Coefficients, i: usize) -> Result<Coefficients> {
    let mut order = vec![i];
    order.extend((1..=c.n()).filter(|&j| j != i));
    c.permuted(&order)
}

/// `S/U_i` from the coefficients alone. For each prime `p | a_i` the others
/// are put in order of increasing `p`-adic valuation (zeros last) and the
/// `p`-parts of the resulting `d`-chain are taken as the `p`-elementary
/// divisors.
pub fn s_mod_ui_closed(c: &Coefficients, i: usize) -> Result<QuotientStructure> {
    c.check_index(i)?;
    let n = c.n();
    if c.get(i).is_zero() {
        return Ok(QuotientStructure::free(n - 2));
    }
    if n == 2 {
        return Ok(QuotientStructure::trivial());
    }
    let rc = rotate_to_front(c, i)?;
    let mut eds = BTreeMap::new();
    for p in factorize(rc.get(1))?.into_keys() {
        let mut rest: Vec<usize> = (2..=n).collect();
        rest.sort_by_key(|&j| {
            let a = rc.get(j);
            if a.is_zero() {
                u32::MAX
            } else {
                valuation(a, &p)
            }
        });
        let mut order = vec![1];
        order.extend(rest);
        let parts = d_chain(&rc.permuted(&order)?)?.p_parts(&p)?;
        eds.insert(p, parts);
    }
    Ok(QuotientStructure::from_elementary_divisors(0, eds))
}

/// `S/U_i ≅ ⊕ ℤ/d_j` read directly off the `d`-chain of the rotated vector,
/// without reordering.
pub fn s_mod_ui_from_d_chain(c: &Coefficients, i: usize) -> Result<QuotientStructure> {
    c.check_index(i)?;
    if c.get(i).is_zero() {
        return Ok(QuotientStructure::free(c.n() - 2));
    }
    if c.n() == 2 {
        return Ok(QuotientStructure::trivial());
    }
    QuotientStructure::from_cyclic_orders(0, d_chain(&rotate_to_front(c, i)?)?.values())
}

pub fn s_mod_ui_by_snf(
    c: &Coefficients,
    i: usize,
    basis: &CertifiedBasis,
) -> Result<QuotientStructure> {
    c.check_index(i)?;
    let gens = (1..=c.n())
        .filter(|&j| j != i)
        .map(|j| u_vector(c, i, j))
        .collect::<Result<Vec<_>>>()?;
    QuotientStructure::from_relation_matrix(&coordinates_in_basis(basis, &gens)?)
}

pub fn quotient_s_mod_ui(c: &Coefficients, i: usize) -> Result<QuotientStructure> {
    let basis = reference_basis(c)?;
    let closed = s_mod_ui_closed(c, i)?;
    let chain = s_mod_ui_from_d_chain(c, i)?;
    if closed != chain {
        return Err(Error::VerificationFailed(format!(
            "S/U_i: p-adic ordering gives {closed}, d-chain gives {chain}"
        )));
    }
    agree("S/U_i", closed, s_mod_ui_by_snf(c, i, &basis)?)
}

/// `|a_1|^{n−2} / ∏_{j≥2} (a_1,a_j)`: the order of `S/U_1`.
pub fn s_mod_u1_order(c: &Coefficients) -> Result<Int> {
    if c.get(1).is_zero() {
        return Err(Error::ZeroPivot(1));
    }
    let a1 = c.get(1).abs();
    let num = num_traits::pow(a1.clone(), c.n() - 2);
    let den: Int = (2..=c.n()).map(|j| gcd(&a1, c.get(j))).product();
    if !divides(&den, &num) {
        return Err(Error::Internal(
            "product of gcds does not divide a_1^(n-2)".into(),
        ));
    }
    Ok(num / den)
}

/// `S = U_1` exactly when `|a_1|^{n−2} = ∏_{j≥2} (a_1,a_j)`.
pub fn u1_equals_s_criterion(c: &Coefficients) -> Result<bool> {
    Ok(s_mod_u1_order(c)?.is_one())
}

/// `C = A⁻¹·D`: coordinates of the `u(1,j)` relative to the basis built with
/// `M = {1,…,n}`. `D = diag(|a_1|/(a_1,a_j))`; for negative `a_1` this uses
/// `−u(1,j)`, which spans the same `U_1` and keeps the diagonal positive.
pub fn compute_c(c: &Coefficients) -> Result<IntMatrix> {
    check_chain_input(c)?;
    let b = build_basis(c, &IndexSet::all(c))?;
    c_matrix_for(c, &b.a)
}

/// `C = A⁻¹·D` for a caller-supplied upper triangular coordinate matrix `A`.
pub fn c_matrix_for(c: &Coefficients, a: &IntMatrix) -> Result<IntMatrix> {
    check_chain_input(c)?;
    let a1 = c.get(1).abs();
    let d: Vec<Int> = (2..=c.n()).map(|j| &a1 / gcd(&a1, c.get(j))).collect();
    solve_upper_triangular(a, &IntMatrix::diagonal(&d)).map_err(|e| match e {
        Error::NonIntegral => Error::Internal("A⁻¹D is not integral".into()),
        e => e,
    })
}

/// `gcd(C_ii, C_jj) | C_ij` for all `i < j`.
pub fn check_c_divisibility(c: &IntMatrix) -> bool {
    let n = c.rows().min(c.cols());
    (0..n).all(|i| (i + 1..n).all(|j| divides(&gcd(&c[(i, i)], &c[(j, j)]), &c[(i, j)])))
}

/// Compares the `p`-parts of the `d`-chains of `c` and of
/// `(a_1, a_{perm[0]}, …, a_{perm[n−2]})` as multisets. `perm` must list
/// `2..=n` in some order.
pub fn p_part_permutation_check(c: &Coefficients, perm: &[usize], p: &Int) -> Result<bool> {
    check_chain_input(c)?;
    if perm.contains(&1) {
        return Err(Error::InvalidArgument(
            "permutation must fix index 1".into(),
        ));
    }
    let mut order = vec![1];
    order.extend_from_slice(perm);
    let other = c.permuted(&order)?;
    Ok(d_chain(c)?.p_parts(p)? == d_chain(&other)?.p_parts(p)?)
}
