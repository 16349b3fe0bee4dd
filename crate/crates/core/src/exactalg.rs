//! Exact integer and rational linear algebra.
//!
//! Everything here works over arbitrary precision integers. A lattice in
//! `Q^n` is stored as an integer lattice together with a common denominator,
//! and the integer part is kept in row Hermite normal form so that two
//! lattices are equal exactly when their stored data is equal.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn int(n: i64) -> BigInt {
    BigInt::from(n)
}

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn rat_int(n: impl Into<BigInt>) -> Rational {
    Rational::from_integer(n.into())
}

/// Least common multiple of the denominators of `values` (1 for an empty input).
pub fn common_denominator<'a>(values: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    values
        .into_iter()
        .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()))
}

/// `n!` as a big integer.
pub fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

/// Binomial coefficient `C(n, k)` for a possibly negative upper argument.
pub fn binomial(n: &BigInt, k: u32) -> BigInt {
    let mut num = BigInt::one();
    for i in 0..k {
        num *= n - BigInt::from(i);
    }
    num / factorial(k)
}

/// Inverse of a square rational matrix by Gauss-Jordan elimination, or `None`
/// when the matrix is singular.
pub fn rational_inverse(matrix: &[Vec<Rational>]) -> Option<Vec<Vec<Rational>>> {
    let n = matrix.len();
    let mut a: Vec<Vec<Rational>> = matrix.to_vec();
    let mut inv: Vec<Vec<Rational>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { Rational::one() } else { Rational::zero() })
                .collect()
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        inv.swap(col, pivot);
        let p = a[col][col].clone();
        for j in 0..n {
            a[col][j] = &a[col][j] / &p;
            inv[col][j] = &inv[col][j] / &p;
        }
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let factor = a[r][col].clone();
            for j in 0..n {
                let da = &factor * &a[col][j];
                a[r][j] -= da;
                let di = &factor * &inv[col][j];
                inv[r][j] -= di;
            }
        }
    }
    Some(inv)
}

/// Determinant of a square rational matrix.
pub fn rational_determinant(matrix: &[Vec<Rational>]) -> Rational {
    let n = matrix.len();
    let mut a = matrix.to_vec();
    let mut det = Rational::one();
    for col in 0..n {
        let Some(pivot) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return Rational::zero();
        };
        if pivot != col {
            a.swap(col, pivot);
            det = -det;
        }
        let p = a[col][col].clone();
        det *= &p;
        for r in col + 1..n {
            if a[r][col].is_zero() {
                continue;
            }
            let factor = &a[r][col] / &p;
            let (top, bottom) = a.split_at_mut(r);
            for (x, y) in bottom[0][col..n].iter_mut().zip(&top[col][col..n]) {
                *x -= &factor * y;
            }
        }
    }
    det
}

fn is_zero_row(row: &[BigInt]) -> bool {
    row.iter().all(Zero::is_zero)
}

fn sub_multiple(target: &mut [BigInt], source: &[BigInt], q: &BigInt) {
    if q.is_zero() {
        return;
    }
    for (t, s) in target.iter_mut().zip(source) {
        *t -= q * s;
    }
}

/// Row-style Hermite normal form. Returns the nonzero HNF rows and, when
/// `transform` is given, updates it so that `hnf = transform * input`
/// (the caller seeds it with the identity).
fn hnf_in_place(
    mut rows: Vec<Vec<BigInt>>,
    ncols: usize,
    mut transform: Option<&mut Vec<Vec<BigInt>>>,
) -> Vec<Vec<BigInt>> {
    let mut pivot_row = 0;
    for col in 0..ncols {
        if pivot_row == rows.len() {
            break;
        }
        // Euclid on the column entries of the remaining rows.
        loop {
            let best = (pivot_row..rows.len())
                .filter(|&r| !rows[r][col].is_zero())
                .min_by(|&a, &b| rows[a][col].abs().cmp(&rows[b][col].abs()));
            let Some(best) = best else { break };
            rows.swap(pivot_row, best);
            if let Some(t) = transform.as_deref_mut() {
                t.swap(pivot_row, best);
            }
            let mut done = true;
            for r in pivot_row + 1..rows.len() {
                if rows[r][col].is_zero() {
                    continue;
                }
                let q = rows[r][col].div_floor(&rows[pivot_row][col]);
                let (head, tail) = rows.split_at_mut(r);
                sub_multiple(&mut tail[0], &head[pivot_row], &q);
                if let Some(t) = transform.as_deref_mut() {
                    let (th, tt) = t.split_at_mut(r);
                    sub_multiple(&mut tt[0], &th[pivot_row], &q);
                }
                if !rows[r][col].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if rows[pivot_row][col].is_zero() {
            continue;
        }
        if rows[pivot_row][col].is_negative() {
            for x in rows[pivot_row].iter_mut() {
                *x = -&*x;
            }
            if let Some(t) = transform.as_deref_mut() {
                for x in t[pivot_row].iter_mut() {
                    *x = -&*x;
                }
            }
        }
        for r in 0..pivot_row {
            let q = rows[r][col].div_floor(&rows[pivot_row][col]);
            let (head, tail) = rows.split_at_mut(pivot_row);
            sub_multiple(&mut head[r], &tail[0], &q);
            if let Some(t) = transform.as_deref_mut() {
                let (th, tt) = t.split_at_mut(pivot_row);
                sub_multiple(&mut th[r], &tt[0], &q);
            }
        }
        pivot_row += 1;
    }
    rows.truncate(pivot_row);
    if let Some(t) = transform {
        t.truncate(pivot_row);
    }
    debug_assert!(rows.iter().all(|r| !is_zero_row(r)));
    rows
}

/// Hermite normal form together with the transform expressing each HNF row
/// as an integer combination of the input rows.
pub fn hnf_with_transform(rows: &[Vec<BigInt>], ncols: usize) -> (Vec<Vec<BigInt>>, Vec<Vec<BigInt>>) {
    let k = rows.len();
    let mut transform: Vec<Vec<BigInt>> = (0..k)
        .map(|i| {
            (0..k)
                .map(|j| if i == j { BigInt::one() } else { BigInt::zero() })
                .collect()
        })
        .collect();
    let hnf = hnf_in_place(rows.to_vec(), ncols, Some(&mut transform));
    (hnf, transform)
}

/// A subgroup of `Q^n`: the integer row lattice spanned by `basis`, divided
/// by `denominator`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntegerLattice {
    ambient_rank: usize,
    basis: Vec<Vec<BigInt>>,
    denominator: BigInt,
}

/// Lattice spanned by integer rows, in canonical Hermite normal form.
///
/// Fails with a usage error when `rows` is empty, since the ambient rank is
/// then unknown; use [`IntegerLattice::from_integer_rows`] in that case.
pub fn hermite_normal_form(rows: &[Vec<BigInt>]) -> Result<IntegerLattice> {
    let Some(first) = rows.first() else {
        return Err(Error::Usage(
            "hermite_normal_form needs at least one row to know the ambient rank".into(),
        ));
    };
    IntegerLattice::from_integer_rows(first.len(), rows)
}

pub fn lattice_membership(lattice: &IntegerLattice, v: &[Rational]) -> Result<Option<Vec<BigInt>>> {
    lattice.coordinates(v)
}

pub fn dual_lattice(lattice: &IntegerLattice) -> Result<IntegerLattice> {
    lattice.dual()
}

pub fn divisibility_factor(lattice: &IntegerLattice, v: &[BigInt]) -> Result<BigInt> {
    lattice.divisibility_factor(v)
}

impl IntegerLattice {
    pub fn from_integer_rows(ambient_rank: usize, rows: &[Vec<BigInt>]) -> Result<Self> {
        Self::assemble(ambient_rank, rows.to_vec(), BigInt::one())
    }

    pub fn from_rational_rows(ambient_rank: usize, rows: &[Vec<Rational>]) -> Result<Self> {
        for row in rows {
            if row.len() != ambient_rank {
                return Err(Error::DimensionMismatch { expected: ambient_rank, found: row.len() });
            }
        }
        let den = common_denominator(rows.iter().flatten());
        let scaled = rows
            .iter()
            .map(|row| {
                row.iter()
                    .map(|x| (x * Rational::from_integer(den.clone())).to_integer())
                    .collect()
            })
            .collect();
        Self::assemble(ambient_rank, scaled, den)
    }

    /// The zero lattice in `Q^n`.
    pub fn zero(ambient_rank: usize) -> Self {
        IntegerLattice { ambient_rank, basis: Vec::new(), denominator: BigInt::one() }
    }

    /// The standard lattice `Z^n`.
    pub fn standard(ambient_rank: usize) -> Self {
        let rows: Vec<Vec<BigInt>> = (0..ambient_rank)
            .map(|i| {
                (0..ambient_rank)
                    .map(|j| if i == j { BigInt::one() } else { BigInt::zero() })
                    .collect()
            })
            .collect();
        IntegerLattice { ambient_rank, basis: rows, denominator: BigInt::one() }
    }

    fn assemble(ambient_rank: usize, rows: Vec<Vec<BigInt>>, denominator: BigInt) -> Result<Self> {
        if ambient_rank == 0 {
            return Err(Error::Usage("lattice ambient rank must be at least 1".into()));
        }
        for row in &rows {
            if row.len() != ambient_rank {
                return Err(Error::DimensionMismatch { expected: ambient_rank, found: row.len() });
            }
        }
        let basis = hnf_in_place(rows, ambient_rank, None);
        let mut lattice = IntegerLattice { ambient_rank, basis, denominator };
        lattice.clear_common_factor();
        Ok(lattice)
    }

    fn clear_common_factor(&mut self) {
        if self.basis.is_empty() {
            self.denominator = BigInt::one();
            return;
        }
        let g = self
            .basis
            .iter()
            .flatten()
            .fold(self.denominator.clone(), |acc, x| acc.gcd(x));
        if !g.is_one() {
            for x in self.basis.iter_mut().flatten() {
                *x = &*x / &g;
            }
            self.denominator = &self.denominator / &g;
        }
    }

    pub fn ambient_rank(&self) -> usize {
        self.ambient_rank
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn is_full_rank(&self) -> bool {
        self.rank() == self.ambient_rank
    }

    /// Integer HNF rows; the lattice is these rows divided by [`Self::denominator`].
    pub fn basis(&self) -> &[Vec<BigInt>] {
        &self.basis
    }

    pub fn denominator(&self) -> &BigInt {
        &self.denominator
    }

    pub fn rational_basis(&self) -> Vec<Vec<Rational>> {
        self.basis
            .iter()
            .map(|row| {
                row.iter()
                    .map(|x| Rational::new(x.clone(), self.denominator.clone()))
                    .collect()
            })
            .collect()
    }

    /// Lattice spanned by `self` and the extra rational rows.
    pub fn extend(&self, rows: &[Vec<Rational>]) -> Result<Self> {
        let mut all = self.rational_basis();
        all.extend_from_slice(rows);
        Self::from_rational_rows(self.ambient_rank, &all)
    }

    /// Integer coordinates of `v` in the HNF basis, or `None` if `v` is not
    /// in the lattice.
    pub fn coordinates(&self, v: &[Rational]) -> Result<Option<Vec<BigInt>>> {
        if v.len() != self.ambient_rank {
            return Err(Error::DimensionMismatch { expected: self.ambient_rank, found: v.len() });
        }
        let den = Rational::from_integer(self.denominator.clone());
        let mut w = Vec::with_capacity(v.len());
        for x in v {
            let scaled = x * &den;
            if !scaled.is_integer() {
                return Ok(None);
            }
            w.push(scaled.to_integer());
        }
        let mut coords = Vec::with_capacity(self.basis.len());
        for row in &self.basis {
            let pivot = row.iter().position(|x| !x.is_zero()).expect("HNF rows are nonzero");
            let (q, r) = w[pivot].div_rem(&row[pivot]);
            if !r.is_zero() {
                return Ok(None);
            }
            sub_multiple(&mut w, row, &q);
            coords.push(q);
        }
        Ok(if is_zero_row(&w) { Some(coords) } else { None })
    }

    pub fn contains(&self, v: &[Rational]) -> Result<bool> {
        Ok(self.coordinates(v)?.is_some())
    }

    pub fn is_sublattice_of(&self, other: &IntegerLattice) -> Result<bool> {
        for row in self.rational_basis() {
            if !other.contains(&row)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Covolume of a full-rank lattice: `|det(basis)| / denominator^n`.
    pub fn covolume(&self) -> Result<Rational> {
        if !self.is_full_rank() {
            return Err(Error::NotFullRank { rank: self.rank(), ambient: self.ambient_rank });
        }
        // HNF of a full-rank lattice is upper triangular.
        let det: BigInt = (0..self.ambient_rank).map(|i| self.basis[i][i].clone()).product();
        let den = num_traits::pow(self.denominator.clone(), self.ambient_rank);
        Ok(Rational::new(det, den))
    }

    /// `{c : <c, v> in Z for all v in self}` under the standard pairing.
    pub fn dual(&self) -> Result<Self> {
        if !self.is_full_rank() {
            return Err(Error::NotFullRank { rank: self.rank(), ambient: self.ambient_rank });
        }
        let b = self.rational_basis();
        let inv = rational_inverse(&b)
            .ok_or_else(|| Error::Internal("full-rank HNF basis is singular".into()))?;
        let n = self.ambient_rank;
        let rows: Vec<Vec<Rational>> = (0..n)
            .map(|i| (0..n).map(|j| inv[j][i].clone()).collect())
            .collect();
        Self::from_rational_rows(n, &rows)
    }

    /// Largest `n >= 1` such that `v / n` still lies in the lattice.
    pub fn divisibility_factor(&self, v: &[BigInt]) -> Result<BigInt> {
        if is_zero_row(v) {
            return Err(Error::ZeroVector);
        }
        let rv: Vec<Rational> = v.iter().map(|x| Rational::from_integer(x.clone())).collect();
        let coords = self.coordinates(&rv)?.ok_or(Error::NotMember)?;
        Ok(coords.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x)))
    }
}
