//! Independent checks: a basis from an extended-gcd sweep, module equality
//! through Hermite forms, quotients of raw generator sets, and brute-force
//! enumeration of small solutions.

use std::sync::OnceLock;

use num_traits::{Signed, ToPrimitive, Zero};

use crate::basis::CertifiedBasis;
use crate::error::{Error, Result};
use crate::matrix::{adjugate, hnf, solve_integral, HnfResult, IntMatrix};
use crate::quotients::QuotientStructure;
use crate::ring::{xgcd, Int};
use crate::solution::{Coefficients, SolutionVector};

/// Default cap on the number of candidate points a box scan may visit.
pub const DEFAULT_BUDGET: u128 = 1_000_000;

/// Unimodular `E` with `E·a = e_1`, built by sweeping pairwise extended gcds
/// from the bottom of the column up.
pub fn gcd_transform(c: &Coefficients) -> IntMatrix {
    let n = c.n();
    let mut e = IntMatrix::identity(n);
    let mut b = c.as_slice().to_vec();
    for i in (1..n).rev() {
        if b[i].is_zero() {
            continue;
        }
        let (g, s, t) = xgcd(&b[i - 1], &b[i]);
        let (p, q) = (&b[i - 1] / &g, &b[i] / &g);
        let (top, bottom) = (e.row(i - 1).to_vec(), e.row(i).to_vec());
        for k in 0..n {
            e[(i - 1, k)] = &s * &top[k] + &t * &bottom[k];
            e[(i, k)] = &p * &bottom[k] - &q * &top[k];
        }
        b[i - 1] = g;
        b[i] = Int::zero();
    }
    if b[0].is_negative() {
        e.negate_row(0);
    }
    e
}

/// Rows `2,…,n` of [`gcd_transform`]: a basis of `S`.
pub fn oracle_basis(c: &Coefficients) -> Vec<SolutionVector> {
    let e = gcd_transform(c);
    (1..c.n())
        .map(|i| SolutionVector::new_unchecked(e.row(i).to_vec()))
        .collect()
}

/// The ℤ-span of some vectors in `ℤ^ambient_dim`.
#[derive(Debug, Clone)]
pub struct ModuleSpan {
    ambient_dim: usize,
    generators: Vec<Vec<Int>>,
    canonical: OnceLock<HnfResult>,
}

impl ModuleSpan {
    pub fn new<V: AsRef<[Int]>>(ambient_dim: usize, generators: &[V]) -> Result<Self> {
        let generators: Vec<Vec<Int>> = generators.iter().map(|g| g.as_ref().to_vec()).collect();
        if let Some(g) = generators.iter().find(|g| g.len() != ambient_dim) {
            return Err(Error::DimensionMismatch(format!(
                "generator of length {} in dimension {ambient_dim}",
                g.len()
            )));
        }
        Ok(ModuleSpan {
            ambient_dim,
            generators,
            canonical: OnceLock::new(),
        })
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn generators(&self) -> &[Vec<Int>] {
        &self.generators
    }

    pub fn canonical_form(&self) -> &HnfResult {
        self.canonical.get_or_init(|| {
            hnf(&IntMatrix::from_columns(self.ambient_dim, &self.generators)
                .expect("checked lengths"))
        })
    }

    /// The canonical basis (nonzero Hermite columns).
    pub fn basis(&self) -> Vec<Vec<Int>> {
        self.canonical_form().basis()
    }

    pub fn rank(&self) -> usize {
        self.canonical_form().rank()
    }

    pub fn contains(&self, x: &[Int]) -> bool {
        x.len() == self.ambient_dim
            && solve_integral(
                &IntMatrix::from_columns(self.ambient_dim, &self.basis()).expect("checked lengths"),
                &IntMatrix::from_columns(self.ambient_dim, &[x.to_vec()]).expect("checked length"),
            )
            .is_ok()
    }
}

pub fn modules_equal(x: &ModuleSpan, y: &ModuleSpan) -> Result<bool> {
    if x.ambient_dim != y.ambient_dim {
        return Err(Error::DimensionMismatch(format!(
            "ambient dimensions {} and {}",
            x.ambient_dim, y.ambient_dim
        )));
    }
    Ok(x.basis() == y.basis())
}

/// Structure of `big/small`. Either argument may be any generating set; the
/// big module is first replaced by its Hermite basis.
pub fn quotient_from_generators<V: AsRef<[Int]>, W: AsRef<[Int]>>(
    ambient_dim: usize,
    big: &[V],
    small: &[W],
) -> Result<QuotientStructure> {
    let big = ModuleSpan::new(ambient_dim, big)?;
    let small = ModuleSpan::new(ambient_dim, small)?;
    let b = IntMatrix::from_columns(ambient_dim, &big.basis())?;
    let s = IntMatrix::from_columns(ambient_dim, small.generators())?;
    let coords = solve_integral(&b, &s).map_err(|e| match e {
        Error::NonIntegral => Error::ContainmentViolation,
        e => e,
    })?;
    QuotientStructure::from_relation_matrix(&coords)
}

/// Number of points `enumerate_box` visits: `n·(2·bound+1)^(n−1)`.
pub fn box_cost(n: usize, bound: u64) -> Option<u128> {
    let side = 2 * u128::from(bound) + 1;
    side.checked_pow(u32::try_from(n - 1).ok()?)?
        .checked_mul(n as u128)
}

fn odometer(ranges: &[i64], mut visit: impl FnMut(&[i64])) {
    let mut cur: Vec<i64> = ranges.iter().map(|r| -r).collect();
    loop {
        visit(&cur);
        let mut k = 0;
        loop {
            if k == cur.len() {
                return;
            }
            if cur[k] < ranges[k] {
                cur[k] += 1;
                break;
            }
            cur[k] = -ranges[k];
            k += 1;
        }
    }
}

/// All `x ∈ S` with `max |x_i| ≤ bound`, sorted. Scans every choice of the
/// entries off one nonzero coefficient and solves for the remaining entry.
pub fn enumerate_box(c: &Coefficients, bound: u64, budget: u128) -> Result<Vec<SolutionVector>> {
    let n = c.n();
    let needed = box_cost(n, bound).unwrap_or(u128::MAX);
    if needed > budget {
        return Err(Error::BudgetExceeded { needed, budget });
    }
    let b = i64::try_from(bound).map_err(|_| Error::InvalidArgument("bound too large".into()))?;
    let a = c.as_slice();
    let p = (0..n)
        .filter(|&i| !a[i].is_zero())
        .max_by_key(|&i| a[i].abs())
        .expect("unimodular vector has a nonzero entry");
    let free: Vec<usize> = (0..n).filter(|&i| i != p).collect();
    let big_b = Int::from(b);
    let mut out = Vec::new();
    odometer(&vec![b; n - 1], |xs| {
        let rest: Int = free.iter().zip(xs).map(|(&i, &x)| &a[i] * x).sum();
        if (&rest % &a[p]).is_zero() {
            let xp = -(rest / &a[p]);
            if xp.abs() <= big_b {
                let mut v = vec![Int::zero(); n];
                for (&i, &x) in free.iter().zip(xs) {
                    v[i] = Int::from(x);
                }
                v[p] = xp;
                out.push(SolutionVector::new_unchecked(v));
            }
        }
    });
    out.sort();
    Ok(out)
}

/// All integer combinations of a certified basis that land in the box,
/// sorted. Coefficient ranges come from the adjugate of the w-matrix.
pub fn span_in_box(
    basis: &CertifiedBasis,
    bound: u64,
    budget: u128,
) -> Result<Vec<SolutionVector>> {
    let k = basis.vectors.len();
    let n = k + 1;
    let adj = adjugate(&basis.w_matrix)?;
    let det = basis.det.abs();
    let big_b = Int::from(bound);
    // y = W⁻¹·w(x) and every w-coordinate of x is at most `bound` in size
    let ranges: Vec<i64> = (0..k)
        .map(|r| {
            let s: Int = adj.row(r).iter().map(|x| x.abs()).sum::<Int>() * &big_b / &det;
            s.to_i64().ok_or(Error::BudgetExceeded {
                needed: u128::MAX,
                budget,
            })
        })
        .collect::<Result<_>>()?;
    let needed = ranges
        .iter()
        .try_fold(1u128, |acc, &r| acc.checked_mul(2 * r as u128 + 1))
        .unwrap_or(u128::MAX);
    if needed > budget {
        return Err(Error::BudgetExceeded { needed, budget });
    }
    let mut out = Vec::new();
    odometer(&ranges, |ys| {
        let mut v = vec![Int::zero(); n];
        for (y, z) in ys.iter().zip(&basis.vectors) {
            if *y != 0 {
                for (vi, zi) in v.iter_mut().zip(z.as_slice()) {
                    *vi += zi * *y;
                }
            }
        }
        if v.iter().all(|x| x.abs() <= big_b) {
            out.push(SolutionVector::new_unchecked(v));
        }
    });
    out.sort();
    Ok(out)
}
