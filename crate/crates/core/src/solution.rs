//! The equation `a_1·X_1 + … + a_n·X_n = 0` and its elementary solutions.
//!
//! Indices in this module, and everywhere in the public API, are 1-based so
//! that pair and triple labels read the same as the usual mathematical
//! notation: `v_vector(c, 1, 3)` is `v(1,3)`.

use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::ring::{gcd, gcd_all, Int};

/// A validated unimodular coefficient vector, `n ≥ 2`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Coefficients {
    a: Vec<Int>,
}

impl Coefficients {
    pub fn new(a: Vec<Int>) -> Result<Self> {
        if a.len() < 2 {
            return Err(Error::TooShort(a.len()));
        }
        let g = gcd_all(&a);
        if !g.is_one() {
            return Err(Error::NotUnimodular { gcd: g });
        }
        Ok(Coefficients { a })
    }

    pub fn from_i64(a: &[i64]) -> Result<Self> {
        Self::new(a.iter().map(|&x| Int::from(x)).collect())
    }

    pub fn n(&self) -> usize {
        self.a.len()
    }

    pub fn as_slice(&self) -> &[Int] {
        &self.a
    }

    /// `a_i`, 1-based. Panics when out of range; see [`Self::check_index`].
    pub fn get(&self, i: usize) -> &Int {
        &self.a[i - 1]
    }

    pub fn check_index(&self, i: usize) -> Result<()> {
        if i == 0 || i > self.n() {
            Err(Error::IndexOutOfRange {
                index: i,
                n: self.n(),
            })
        } else {
            Ok(())
        }
    }

    pub fn evaluate(&self, x: &[Int]) -> Int {
        self.a.iter().zip(x).map(|(a, x)| a * x).sum()
    }

    pub fn is_solution(&self, x: &[Int]) -> bool {
        x.len() == self.n() && self.evaluate(x).is_zero()
    }

    /// The coefficient vector `(a_{order[0]}, a_{order[1]}, …)`. `order` must
    /// be a permutation of `1..=n`.
    pub fn permuted(&self, order: &[usize]) -> Result<Coefficients> {
        let mut seen = vec![false; self.n()];
        if order.len() != self.n() {
            return Err(Error::InvalidArgument(
                "permutation has wrong length".into(),
            ));
        }
        for &i in order {
            self.check_index(i)?;
            if std::mem::replace(&mut seen[i - 1], true) {
                return Err(Error::InvalidArgument(format!("index {i} repeated")));
            }
        }
        Ok(Coefficients {
            a: order.iter().map(|&i| self.a[i - 1].clone()).collect(),
        })
    }
}

impl fmt::Display for Coefficients {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.a.iter().map(ToString::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// An integer vector `x` with `Σ a_i·x_i = 0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SolutionVector(Vec<Int>);

impl SolutionVector {
    pub fn new(c: &Coefficients, x: Vec<Int>) -> Result<Self> {
        if x.len() != c.n() {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} for {} unknowns",
                x.len(),
                c.n()
            )));
        }
        if !c.is_solution(&x) {
            return Err(Error::NotASolution);
        }
        Ok(SolutionVector(x))
    }

    pub(crate) fn new_unchecked(x: Vec<Int>) -> Self {
        SolutionVector(x)
    }

    pub fn as_slice(&self) -> &[Int] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<Int> {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }
}

impl AsRef<[Int]> for SolutionVector {
    fn as_ref(&self) -> &[Int] {
        &self.0
    }
}

impl fmt::Display for SolutionVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(ToString::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

fn check_pair(c: &Coefficients, i: usize, j: usize) -> Result<()> {
    c.check_index(i)?;
    c.check_index(j)?;
    if i == j {
        return Err(Error::EqualIndices(i));
    }
    Ok(())
}

/// `v(i,j)`: `−a_j` in slot `i`, `a_i` in slot `j`, zero elsewhere.
pub fn v_vector(c: &Coefficients, i: usize, j: usize) -> Result<SolutionVector> {
    check_pair(c, i, j)?;
    let mut x = vec![Int::zero(); c.n()];
    x[i - 1] = -c.get(j);
    x[j - 1] = c.get(i).clone();
    Ok(SolutionVector(x))
}

/// `u(i,j) = v(i,j)/gcd(a_i,a_j)`, or `v(i,j)` (the zero vector) when both
/// coefficients vanish.
pub fn u_vector(c: &Coefficients, i: usize, j: usize) -> Result<SolutionVector> {
    let v = v_vector(c, i, j)?;
    let g = gcd(c.get(i), c.get(j));
    if g.is_zero() {
        return Ok(v);
    }
    Ok(SolutionVector(v.0.into_iter().map(|x| x / &g).collect()))
}

fn check_pivot(c: &Coefficients, pivot: usize) -> Result<()> {
    c.check_index(pivot)?;
    if c.get(pivot).is_zero() {
        return Err(Error::ZeroPivot(pivot));
    }
    Ok(())
}

/// Coordinates of `s` relative to the rational basis `w(p,j) = e_j − (a_j/a_p)·e_p`,
/// `j ≠ p`: these are just the entries of `s` with slot `p` removed.
pub fn w_coords(c: &Coefficients, s: &[Int], pivot: usize) -> Result<Vec<Int>> {
    check_pivot(c, pivot)?;
    if s.len() != c.n() {
        return Err(Error::DimensionMismatch("vector length".into()));
    }
    Ok(s.iter()
        .enumerate()
        .filter(|&(k, _)| k + 1 != pivot)
        .map(|(_, x)| x.clone())
        .collect())
}

/// Rebuilds the vector with the given w-coordinates. Fails with
/// `NotASolution` when `Σ_{j≠p} a_j·α_j` is not divisible by `a_p`, i.e. the
/// combination lies in the rational span but not in ℤⁿ.
pub fn from_w_coords(c: &Coefficients, alphas: &[Int], pivot: usize) -> Result<SolutionVector> {
    check_pivot(c, pivot)?;
    if alphas.len() + 1 != c.n() {
        return Err(Error::DimensionMismatch("need n-1 coordinates".into()));
    }
    let others = (1..=c.n()).filter(|&k| k != pivot);
    let sum: Int = others.clone().zip(alphas).map(|(k, x)| c.get(k) * x).sum();
    let ap = c.get(pivot);
    if !(&sum % ap).is_zero() {
        return Err(Error::NotASolution);
    }
    let mut x = vec![Int::zero(); c.n()];
    x[pivot - 1] = -(sum / ap);
    for (k, alpha) in others.zip(alphas) {
        x[k - 1] = alpha.clone();
    }
    Ok(SolutionVector(x))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MStrategy {
    All,
    GreedyMinimal,
}

/// A set of indices `M` whose coefficients have gcd 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IndexSet(Vec<usize>);

impl IndexSet {
    pub fn new(c: &Coefficients, mut indices: Vec<usize>) -> Result<Self> {
        for &i in &indices {
            c.check_index(i)?;
        }
        indices.sort_unstable();
        indices.dedup();
        if !gcd_all(indices.iter().map(|&i| c.get(i))).is_one() {
            return Err(Error::NotCoprimeSubset(indices));
        }
        Ok(IndexSet(indices))
    }

    pub fn all(c: &Coefficients) -> Self {
        IndexSet((1..=c.n()).collect())
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.0.binary_search(&i).is_ok()
    }

    /// Smallest member with a nonzero coefficient. Always exists since the
    /// members' coefficients have gcd 1.
    pub fn pivot(&self, c: &Coefficients) -> usize {
        *self
            .0
            .iter()
            .find(|&&i| !c.get(i).is_zero())
            .expect("coprime index set has a nonzero coefficient")
    }
}

/// `All` gives `{1,…,n}`. `GreedyMinimal` scans left to right keeping each
/// index that lowers the running gcd until it reaches 1, then drops, in
/// index order, every member whose removal keeps the gcd at 1.
pub fn choose_m(c: &Coefficients, strategy: MStrategy) -> IndexSet {
    match strategy {
        MStrategy::All => IndexSet::all(c),
        MStrategy::GreedyMinimal => {
            let mut picked = Vec::new();
            let mut g = Int::zero();
            for i in 1..=c.n() {
                let h = gcd(&g, c.get(i));
                if h != g {
                    picked.push(i);
                    g = h;
                }
                if g.is_one() {
                    break;
                }
            }
            let mut k = 0;
            while k < picked.len() {
                let rest = picked
                    .iter()
                    .enumerate()
                    .filter(|&(t, _)| t != k)
                    .map(|(_, &i)| c.get(i));
                if gcd_all(rest).is_one() {
                    picked.remove(k);
                } else {
                    k += 1;
                }
            }
            IndexSet(picked)
        }
    }
}

/// Pairs `(i,j)`, `i < j`, meeting `M`, in lexicographic order.
pub fn spanning_pairs(n: usize, m: &IndexSet) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for i in 1..=n {
        for j in i + 1..=n {
            if m.contains(i) || m.contains(j) {
                out.push((i, j));
            }
        }
    }
    out
}

/// `B_M = { v(i,j) : i < j, {i,j} ∩ M ≠ ∅ }`, lexicographically ordered.
pub fn spanning_set(c: &Coefficients, m: &IndexSet) -> Vec<SolutionVector> {
    spanning_pairs(c.n(), m)
        .into_iter()
        .map(|(i, j)| v_vector(c, i, j).expect("valid pair"))
        .collect()
}

/// `true` when the two nonzero entries of a `u`-vector are coprime, or the
/// vector is zero.
pub fn u_entries_coprime(u: &SolutionVector) -> bool {
    let nz: Vec<&Int> = u.0.iter().filter(|x| !x.is_zero()).collect();
    match nz.as_slice() {
        [] => true,
        [x] => x.abs().is_one(),
        [x, y] => gcd(x, y).is_one(),
        _ => false,
    }
}
