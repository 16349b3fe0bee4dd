//! Partitions and symmetric functions.
//!
//! A [`MultiIndex`] `I = (α_j)` is stored as the partition having `α_j`
//! parts equal to `j`. The same type indexes three things: the polynomials
//! `c_I`, the monomials `b^I`, and the monomials `c_1^{α_1} c_2^{α_2} ...` of
//! a [`ChernPolynomial`].
//!
//! The polynomial `c_I` expresses the monomial symmetric function `m_I` in
//! the elementary symmetric functions. It is obtained by inverting the
//! integer matrix whose `(μ, λ)` entry is the coefficient of `m_λ` in
//! `e_μ`, that is the number of 0-1 matrices with row sums `μ` and column
//! sums `λ`.

use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exactalg::{binomial, rational_inverse, Rational};

/// A finitely supported sequence `(α_j)_{j>=1}`, kept as a partition with
/// non-increasing positive parts.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct MultiIndex {
    parts: Vec<u32>,
}

impl MultiIndex {
    pub fn empty() -> Self {
        MultiIndex { parts: Vec::new() }
    }

    /// Builds the index from its parts in any order; zero parts are dropped.
    pub fn from_parts(parts: impl IntoIterator<Item = u32>) -> Self {
        let mut parts: Vec<u32> = parts.into_iter().filter(|&p| p > 0).collect();
        parts.sort_unstable_by(|a, b| b.cmp(a));
        MultiIndex { parts }
    }

    /// Builds the index from `(j, α_j)` pairs.
    pub fn from_multiplicities(mults: &[(u32, u32)]) -> Self {
        Self::from_parts(
            mults
                .iter()
                .flat_map(|&(j, a)| std::iter::repeat_n(j, a as usize)),
        )
    }

    /// The index with a single part `j` (so `α_j = 1`).
    pub fn single(j: u32) -> Self {
        Self::from_parts([j])
    }

    /// Parts in non-increasing order.
    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    pub fn weight(&self) -> u32 {
        self.parts.iter().sum()
    }

    /// Number of parts, `Σ α_j`.
    pub fn length(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn multiplicity(&self, j: u32) -> u32 {
        self.parts.iter().filter(|&&p| p == j).count() as u32
    }

    /// `(j, α_j)` for every `j` with `α_j > 0`, increasing in `j`.
    pub fn multiplicities(&self) -> Vec<(u32, u32)> {
        let mut out: Vec<(u32, u32)> = Vec::new();
        for &p in self.parts.iter().rev() {
            match out.last_mut() {
                Some((j, a)) if *j == p => *a += 1,
                _ => out.push((p, 1)),
            }
        }
        out
    }

    /// Union of parts, i.e. the index of the product of monomials.
    pub fn merge(&self, other: &MultiIndex) -> MultiIndex {
        Self::from_parts(self.parts.iter().chain(&other.parts).copied())
    }

    /// Canonical key: parts in increasing order joined by `+`, `"0"` for
    /// the empty index.
    pub fn key(&self) -> String {
        if self.parts.is_empty() {
            return "0".to_string();
        }
        self.parts
            .iter()
            .rev()
            .map(u32::to_string)
            .collect::<Vec<_>>()
            .join("+")
    }
}

impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.weight()
            .cmp(&other.weight())
            .then_with(|| self.parts.cmp(&other.parts))
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.key())
    }
}

impl fmt::Debug for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.key())
    }
}

impl FromStr for MultiIndex {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "0" || s.is_empty() {
            return Ok(MultiIndex::empty());
        }
        let parts = s
            .split('+')
            .map(|p| {
                p.trim()
                    .parse::<u32>()
                    .ok()
                    .filter(|&x| x > 0)
                    .ok_or_else(|| Error::Usage(format!("bad partition key {s:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(MultiIndex::from_parts(parts))
    }
}

/// All indices of weight `d`, in increasing [`MultiIndex`] order: for equal
/// weight, partitions compare lexicographically on their non-increasing
/// parts, so `1+1+1+1` comes first and `d` last.
pub fn partitions_of(d: u32) -> Vec<MultiIndex> {
    fn rec(remaining: u32, max_part: u32, current: &mut Vec<u32>, out: &mut Vec<MultiIndex>) {
        if remaining == 0 {
            out.push(MultiIndex { parts: current.clone() });
            return;
        }
        for p in (1..=max_part.min(remaining)).rev() {
            current.push(p);
            rec(remaining - p, p, current, out);
            current.pop();
        }
    }
    let mut out = Vec::new();
    rec(d, d, &mut Vec::new(), &mut out);
    out.sort();
    out
}

/// Minimal ring interface used to evaluate polynomials in the `c_i` inside
/// other graded rings.
pub trait Algebra: Clone {
    fn one_like(&self) -> Self;
    fn zero_like(&self) -> Self;
    fn add(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn scale(&self, r: &Rational) -> Self;
}

/// A polynomial in `c_1, c_2, ...` with rational coefficients, graded by
/// `deg(c_i) = i`.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct ChernPolynomial {
    terms: BTreeMap<MultiIndex, Rational>,
}

impl ChernPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(r: Rational) -> Self {
        Self::monomial(MultiIndex::empty(), r)
    }

    /// The variable `c_i`.
    pub fn var(i: u32) -> Self {
        Self::monomial(MultiIndex::single(i), Rational::one())
    }

    pub fn monomial(m: MultiIndex, coeff: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(m, coeff);
        }
        ChernPolynomial { terms }
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (MultiIndex, Rational)>) -> Self {
        let mut p = Self::zero();
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn add_term(&mut self, m: MultiIndex, coeff: Rational) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(coeff);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += coeff;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &MultiIndex) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn max_degree(&self) -> Option<u32> {
        self.terms.keys().map(MultiIndex::weight).max()
    }

    pub fn constant_term(&self) -> Rational {
        self.coefficient(&MultiIndex::empty())
    }

    pub fn homogeneous(&self, k: u32) -> Self {
        ChernPolynomial {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.weight() == k)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn is_homogeneous(&self, k: u32) -> bool {
        self.terms.keys().all(|m| m.weight() == k)
    }

    pub fn truncate(&self, max_degree: u32) -> Self {
        ChernPolynomial {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.weight() <= max_degree)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn plus(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn minus(&self, other: &Self) -> Self {
        self.plus(&other.scaled(&-Rational::one()))
    }

    pub fn scaled(&self, r: &Rational) -> Self {
        if r.is_zero() {
            return Self::zero();
        }
        ChernPolynomial {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * r)).collect(),
        }
    }

    pub fn times(&self, other: &Self) -> Self {
        self.times_truncated(other, u32::MAX)
    }

    /// Product with every term of degree above `max_degree` dropped.
    pub fn times_truncated(&self, other: &Self, max_degree: u32) -> Self {
        let mut out = Self::zero();
        for (ma, ca) in &self.terms {
            let wa = ma.weight();
            for (mb, cb) in &other.terms {
                if wa + mb.weight() > max_degree {
                    continue;
                }
                out.add_term(ma.merge(mb), ca * cb);
            }
        }
        out
    }

    /// Multiplies each homogeneous component of degree `k` by `(-1)^k`.
    pub fn sign_twisted(&self) -> Self {
        ChernPolynomial {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| {
                    let c = if m.weight() % 2 == 1 { -c } else { c.clone() };
                    (m.clone(), c)
                })
                .collect(),
        }
    }

    /// Evaluates at `c_i = images[i - 1]` (missing images are zero).
    pub fn evaluate<A: Algebra>(&self, unit: &A, images: &[A]) -> A {
        let mut powers: HashMap<(u32, u32), A> = HashMap::new();
        let mut acc = unit.zero_like();
        for (m, c) in &self.terms {
            let mut term = unit.one_like();
            let mut vanished = false;
            for (j, a) in m.multiplicities() {
                let Some(base) = images.get(j as usize - 1) else {
                    vanished = true;
                    break;
                };
                let pow = powers
                    .entry((j, a))
                    .or_insert_with(|| {
                        let mut p = unit.one_like();
                        for _ in 0..a {
                            p = p.mul(base);
                        }
                        p
                    })
                    .clone();
                term = term.mul(&pow);
            }
            if !vanished {
                acc = acc.add(&term.scale(c));
            }
        }
        acc
    }

    /// Substitutes `c_i -> images[i - 1]` and keeps degrees `<= max_degree`.
    pub fn substitute(&self, images: &[ChernPolynomial], max_degree: u32) -> Self {
        let unit = TruncatedChern { poly: ChernPolynomial::one(), max_degree };
        let imgs: Vec<TruncatedChern> = images
            .iter()
            .map(|p| TruncatedChern { poly: p.truncate(max_degree), max_degree })
            .collect();
        self.evaluate(&unit, &imgs).poly
    }
}

#[derive(Clone)]
struct TruncatedChern {
    poly: ChernPolynomial,
    max_degree: u32,
}

impl Algebra for TruncatedChern {
    fn one_like(&self) -> Self {
        TruncatedChern { poly: ChernPolynomial::one(), max_degree: self.max_degree }
    }
    fn zero_like(&self) -> Self {
        TruncatedChern { poly: ChernPolynomial::zero(), max_degree: self.max_degree }
    }
    fn add(&self, other: &Self) -> Self {
        TruncatedChern { poly: self.poly.plus(&other.poly), max_degree: self.max_degree }
    }
    fn mul(&self, other: &Self) -> Self {
        TruncatedChern {
            poly: self.poly.times_truncated(&other.poly, self.max_degree),
            max_degree: self.max_degree,
        }
    }
    fn scale(&self, r: &Rational) -> Self {
        TruncatedChern { poly: self.poly.scaled(r), max_degree: self.max_degree }
    }
}

impl Algebra for ChernPolynomial {
    fn one_like(&self) -> Self {
        ChernPolynomial::one()
    }
    fn zero_like(&self) -> Self {
        ChernPolynomial::zero()
    }
    fn add(&self, other: &Self) -> Self {
        self.plus(other)
    }
    fn mul(&self, other: &Self) -> Self {
        self.times(other)
    }
    fn scale(&self, r: &Rational) -> Self {
        self.scaled(r)
    }
}

impl fmt::Display for ChernPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for (m, c) in &self.terms {
            let (sign, abs) = if c.is_negative() { ("-", -c) } else { ("+", c.clone()) };
            if first {
                if sign == "-" {
                    f.write_str("-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let mono: Vec<String> = m
                .multiplicities()
                .into_iter()
                .map(|(j, a)| if a == 1 { format!("c{j}") } else { format!("c{j}^{a}") })
                .collect();
            if mono.is_empty() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{}", mono.join("*"))?;
            } else {
                write!(f, "{abs}*{}", mono.join("*"))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for ChernPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Change of basis between `{c_I}` and the monomials of `Z[c]_d`.
#[derive(Debug)]
pub struct Transition {
    degree: u32,
    partitions: Vec<MultiIndex>,
    index: HashMap<MultiIndex, usize>,
    /// Row `μ`: coefficients of the monomial `c^μ` in the basis `c_λ`
    /// (equivalently `e_μ = Σ_λ M[μ][λ] m_λ`).
    monomial_to_ci: Vec<Vec<BigInt>>,
    /// Row `λ`: coefficients of `c_λ` on the monomials `c^μ`.
    ci_to_monomial: Vec<Vec<BigInt>>,
}

impl Transition {
    fn build(degree: u32, nvars: usize) -> Self {
        let partitions: Vec<MultiIndex> = partitions_of(degree)
            .into_iter()
            .filter(|p| p.length() <= nvars)
            .collect();
        let index: HashMap<MultiIndex, usize> =
            partitions.iter().enumerate().map(|(i, p)| (p.clone(), i)).collect();
        let monomial_to_ci: Vec<Vec<BigInt>> = partitions
            .iter()
            .map(|mu| {
                partitions
                    .iter()
                    .map(|lambda| count_01_matrices(mu.parts(), lambda.parts(), nvars))
                    .collect()
            })
            .collect();
        let as_rational: Vec<Vec<Rational>> = monomial_to_ci
            .iter()
            .map(|r| r.iter().map(|x| Rational::from_integer(x.clone())).collect())
            .collect();
        let inverse = rational_inverse(&as_rational)
            .expect("elementary-to-monomial transition matrix is invertible");
        // The transition is unimodular, so the inverse is integral.
        let n = partitions.len();
        let ci_to_monomial: Vec<Vec<BigInt>> = (0..n)
            .map(|lambda| {
                (0..n)
                    .map(|mu| {
                        let x = &inverse[mu][lambda];
                        assert!(x.is_integer(), "transition inverse must be integral");
                        x.to_integer()
                    })
                    .collect()
            })
            .collect();
        Transition { degree, partitions, index, monomial_to_ci, ci_to_monomial }
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn partitions(&self) -> &[MultiIndex] {
        &self.partitions
    }

    pub fn position(&self, m: &MultiIndex) -> Option<usize> {
        self.index.get(m).copied()
    }

    /// Integer matrix taking `c_I` coordinates to monomial coordinates.
    pub fn ci_to_monomial_matrix(&self) -> &[Vec<BigInt>] {
        &self.ci_to_monomial
    }

    /// Integer matrix taking monomial coordinates to `c_I` coordinates.
    pub fn monomial_to_ci_matrix(&self) -> &[Vec<BigInt>] {
        &self.monomial_to_ci
    }

    /// `c_I` as a polynomial in the `c_i`.
    pub fn c_poly(&self, i: &MultiIndex) -> ChernPolynomial {
        let row = &self.ci_to_monomial[self.index[i]];
        ChernPolynomial::from_terms(
            self.partitions
                .iter()
                .zip(row)
                .map(|(mu, x)| (mu.clone(), Rational::from_integer(x.clone()))),
        )
    }

    /// Coordinates in the `c_I` basis of a polynomial homogeneous of this degree.
    pub fn to_ci_coordinates(&self, p: &ChernPolynomial) -> Result<Vec<Rational>> {
        let mut out = vec![Rational::zero(); self.partitions.len()];
        for (mu, coeff) in p.terms() {
            let Some(&row) = self.index.get(mu) else {
                return Err(Error::Precondition(format!(
                    "monomial {mu} is not of degree {}",
                    self.degree
                )));
            };
            for (o, x) in out.iter_mut().zip(&self.monomial_to_ci[row]) {
                if !x.is_zero() {
                    *o += coeff * Rational::from_integer(x.clone());
                }
            }
        }
        Ok(out)
    }

    /// Polynomial with the given `c_I` coordinates.
    pub fn from_ci_coordinates(&self, coords: &[Rational]) -> ChernPolynomial {
        let mut out = ChernPolynomial::zero();
        for (lambda, c) in coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (mu, x) in self.partitions.iter().zip(&self.ci_to_monomial[lambda]) {
                if !x.is_zero() {
                    out.add_term(mu.clone(), c * Rational::from_integer(x.clone()));
                }
            }
        }
        out
    }
}

/// Number of 0-1 matrices with row sums `rows` and column sums `cols`
/// (padded with zeros to `ncols` columns).
fn count_01_matrices(rows: &[u32], cols: &[u32], ncols: usize) -> BigInt {
    fn rec(rows: &[u32], state: Vec<u32>, memo: &mut HashMap<(usize, Vec<u32>), BigInt>) -> BigInt {
        let Some((&r, rest)) = rows.split_first() else {
            return if state.iter().all(|&s| s == 0) { BigInt::one() } else { BigInt::zero() };
        };
        let key = (rows.len(), state.clone());
        if let Some(v) = memo.get(&key) {
            return v.clone();
        }
        // Columns with equal remaining sums are interchangeable.
        let mut groups: Vec<(u32, u32)> = Vec::new();
        for &s in &state {
            if s == 0 {
                continue;
            }
            match groups.last_mut() {
                Some((v, g)) if *v == s => *g += 1,
                _ => groups.push((s, 1)),
            }
        }
        let mut total = BigInt::zero();
        let mut picks = vec![0u32; groups.len()];
        fn choose(
            gi: usize,
            left: u32,
            groups: &[(u32, u32)],
            picks: &mut Vec<u32>,
            rest: &[u32],
            memo: &mut HashMap<(usize, Vec<u32>), BigInt>,
            total: &mut BigInt,
        ) {
            if gi == groups.len() {
                if left != 0 {
                    return;
                }
                let mut ways = BigInt::one();
                let mut next = Vec::new();
                for (&(v, g), &t) in groups.iter().zip(picks.iter()) {
                    ways *= binomial(&BigInt::from(g), t);
                    next.extend(std::iter::repeat_n(v - 1, t as usize));
                    next.extend(std::iter::repeat_n(v, (g - t) as usize));
                }
                next.sort_unstable_by(|a, b| b.cmp(a));
                *total += ways * rec(rest, next, memo);
                return;
            }
            let (_, g) = groups[gi];
            for t in 0..=g.min(left) {
                picks[gi] = t;
                choose(gi + 1, left - t, groups, picks, rest, memo, total);
            }
            picks[gi] = 0;
        }
        choose(0, r, &groups, &mut picks, rest, memo, &mut total);
        memo.insert(key, total.clone());
        total
    }
    if cols.len() > ncols {
        return BigInt::zero();
    }
    let mut state: Vec<u32> = cols.to_vec();
    state.resize(ncols, 0);
    state.sort_unstable_by(|a, b| b.cmp(a));
    rec(rows, state, &mut HashMap::new())
}

/// Shared, lazily built transition table for degree `d`.
pub fn transition(d: u32) -> Arc<Transition> {
    static TABLES: OnceLock<Mutex<HashMap<u32, Arc<Transition>>>> = OnceLock::new();
    let tables = TABLES.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(t) = tables.lock().expect("transition cache poisoned").get(&d) {
        return Arc::clone(t);
    }
    // Built outside the lock; a concurrent duplicate build yields an equal table.
    let built = Arc::new(Transition::build(d, d as usize));
    let mut guard = tables.lock().expect("transition cache poisoned");
    Arc::clone(guard.entry(d).or_insert(built))
}

/// Transition table computed with `nvars` indeterminates (test hook for the
/// independence of `c_I` from the number of variables).
pub fn transition_with_vars(d: u32, nvars: usize) -> Transition {
    Transition::build(d, nvars)
}

/// The polynomial `c_I` with `m_I = c_I(e_1, ..., e_n)`.
pub fn c_i(i: &MultiIndex) -> ChernPolynomial {
    transition(i.weight()).c_poly(i)
}

/// The `d`th Newton polynomial: power sum `p_d` in the elementary basis.
pub fn newton_polynomial(d: u32) -> Result<ChernPolynomial> {
    if d == 0 {
        return Err(Error::Precondition("Newton polynomial needs d >= 1".into()));
    }
    Ok(newton_polynomials(d).pop().expect("nonempty"))
}

/// `[Q_1, ..., Q_d]` via `p_k = Σ_{i<k} (-1)^{i-1} c_i p_{k-i} + (-1)^{k-1} k c_k`.
pub fn newton_polynomials(d: u32) -> Vec<ChernPolynomial> {
    let mut out: Vec<ChernPolynomial> = Vec::with_capacity(d as usize);
    for k in 1..=d {
        let sign = |i: u32| if i % 2 == 1 { Rational::one() } else { -Rational::one() };
        let mut p = ChernPolynomial::var(k).scaled(&(sign(k) * Rational::from_integer(k.into())));
        for i in 1..k {
            let term = ChernPolynomial::var(i).times(&out[(k - i - 1) as usize]);
            p = p.plus(&term.scaled(&sign(i)));
        }
        out.push(p);
    }
    out
}

/// Total Chern class of the dual of a rank-`r` bundle: `c_i -> (-1)^i c_i`.
pub fn dual_chern(total: &ChernPolynomial, rank: u32) -> Result<ChernPolynomial> {
    if !total.constant_term().is_one() {
        return Err(Error::Precondition("total Chern class must have constant term 1".into()));
    }
    if total.max_degree().unwrap_or(0) > rank {
        return Err(Error::Precondition(format!(
            "total Chern class has components above the rank {rank}"
        )));
    }
    Ok(total.sign_twisted())
}

/// A polynomial in Chern roots `ξ_1..ξ_n`, truncated above a total degree.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RootPolynomial {
    nvars: usize,
    max_degree: u32,
    terms: BTreeMap<Vec<u32>, Rational>,
}

impl RootPolynomial {
    pub fn zero(nvars: usize, max_degree: u32) -> Self {
        RootPolynomial { nvars, max_degree, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, max_degree: u32, c: Rational) -> Self {
        let mut p = Self::zero(nvars, max_degree);
        p.add_term(vec![0; nvars], c);
        p
    }

    pub fn one(nvars: usize, max_degree: u32) -> Self {
        Self::constant(nvars, max_degree, Rational::one())
    }

    /// Linear form `Σ coeffs[j] ξ_j`.
    pub fn linear(nvars: usize, max_degree: u32, coeffs: &[Rational]) -> Self {
        let mut p = Self::zero(nvars, max_degree);
        if max_degree == 0 {
            return p;
        }
        for (j, c) in coeffs.iter().enumerate() {
            let mut e = vec![0; nvars];
            e[j] = 1;
            p.add_term(e, c.clone());
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn max_degree(&self) -> u32 {
        self.max_degree
    }

    pub fn add_term(&mut self, exps: Vec<u32>, c: Rational) {
        if c.is_zero() || exps.iter().sum::<u32>() > self.max_degree {
            return;
        }
        match self.terms.entry(exps) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn coefficient(&self, exps: &[u32]) -> Rational {
        self.terms.get(exps).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Rational)> {
        self.terms.iter()
    }

    pub fn plus(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn scaled(&self, r: &Rational) -> Self {
        let mut out = Self::zero(self.nvars, self.max_degree);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), c * r);
        }
        out
    }

    pub fn times(&self, other: &Self) -> Self {
        let mut acc: HashMap<Vec<u32>, Rational> = HashMap::new();
        for (ea, ca) in &self.terms {
            let da: u32 = ea.iter().sum();
            for (eb, cb) in &other.terms {
                let db: u32 = eb.iter().sum();
                if da + db > self.max_degree {
                    continue;
                }
                let e: Vec<u32> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                *acc.entry(e).or_insert_with(Rational::zero) += ca * cb;
            }
        }
        RootPolynomial {
            nvars: self.nvars,
            max_degree: self.max_degree,
            terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::one(self.nvars, self.max_degree);
        for _ in 0..k {
            out = out.times(self);
        }
        out
    }

    /// Truncated `exp` of a series without constant term.
    pub fn exp(&self) -> Self {
        let mut out = Self::one(self.nvars, self.max_degree);
        let mut power = Self::one(self.nvars, self.max_degree);
        for k in 1..=self.max_degree {
            power = power.times(self).scaled(&Rational::new(BigInt::one(), BigInt::from(k)));
            out = out.plus(&power);
        }
        out
    }

    /// Univariate power series `Σ coeffs[k] ξ_j^k` in one root.
    pub fn series_in(nvars: usize, max_degree: u32, j: usize, coeffs: &[Rational]) -> Self {
        let mut p = Self::zero(nvars, max_degree);
        for (k, c) in coeffs.iter().enumerate().take(max_degree as usize + 1) {
            let mut e = vec![0; nvars];
            e[j] = k as u32;
            p.add_term(e, c.clone());
        }
        p
    }

    /// Elementary symmetric polynomial `e_i(ξ)`.
    pub fn elementary(nvars: usize, max_degree: u32, i: usize) -> Self {
        let mut p = Self::zero(nvars, max_degree);
        for subset in subsets(nvars, i) {
            let mut e = vec![0; nvars];
            for j in subset {
                e[j] = 1;
            }
            p.add_term(e, Rational::one());
        }
        p
    }

    /// `true` when the coefficients are invariant under permuting the roots.
    pub fn is_symmetric(&self) -> bool {
        self.terms.iter().all(|(e, c)| {
            let mut sorted = e.clone();
            sorted.sort_unstable_by(|a, b| b.cmp(a));
            &self.coefficient(&sorted) == c
        })
    }

    /// Homogeneous component of degree `k` of a symmetric series, in the
    /// `c_I` basis: the coefficient of `c_λ` is the coefficient of `ξ^λ`.
    pub fn symmetric_ci_coordinates(&self, k: u32) -> Vec<(MultiIndex, Rational)> {
        partitions_of(k)
            .into_iter()
            .filter(|lambda| lambda.length() <= self.nvars)
            .map(|lambda| {
                let mut e = lambda.parts().to_vec();
                e.resize(self.nvars, 0);
                let c = self.coefficient(&e);
                (lambda, c)
            })
            .collect()
    }

    /// The symmetric series as a polynomial in `c_1..c_n` (variables beyond
    /// `n` vanish).
    pub fn to_chern_polynomial(&self) -> ChernPolynomial {
        let mut out = ChernPolynomial::zero();
        for k in 0..=self.max_degree {
            for (lambda, c) in self.symmetric_ci_coordinates(k) {
                if c.is_zero() {
                    continue;
                }
                for (mu, x) in c_i(&lambda).terms() {
                    if mu.parts().first().is_some_and(|&p| p as usize > self.nvars) {
                        continue;
                    }
                    out.add_term(mu.clone(), &c * x);
                }
            }
        }
        out
    }
}

impl Algebra for RootPolynomial {
    fn one_like(&self) -> Self {
        RootPolynomial::one(self.nvars, self.max_degree)
    }
    fn zero_like(&self) -> Self {
        RootPolynomial::zero(self.nvars, self.max_degree)
    }
    fn add(&self, other: &Self) -> Self {
        self.plus(other)
    }
    fn mul(&self, other: &Self) -> Self {
        self.times(other)
    }
    fn scale(&self, r: &Rational) -> Self {
        self.scaled(r)
    }
}

/// All `k`-element subsets of `0..n`, in lexicographic order.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for j in start..n {
            if n - j < k - cur.len() {
                break;
            }
            cur.push(j);
            rec(j + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k <= n {
        rec(0, n, k, &mut Vec::new(), &mut out);
    }
    out
}

/// Chern classes `c_1..c_d` of `Λ^i E` for a rank-`r` bundle `E`, as
/// polynomials in the Chern classes of `E`, by the splitting principle.
pub fn exterior_power_chern(r: u32, i: u32, d: u32) -> Result<Vec<ChernPolynomial>> {
    if i > r {
        return Err(Error::Precondition(format!("exterior power {i} exceeds rank {r}")));
    }
    if d == 0 {
        return Err(Error::Precondition("truncation degree must be >= 1".into()));
    }
    let n = r as usize;
    let mut total = RootPolynomial::one(n, d);
    if i > 0 {
        for subset in subsets(n, i as usize) {
            let mut coeffs = vec![Rational::zero(); n];
            for j in subset {
                coeffs[j] = Rational::one();
            }
            let factor = RootPolynomial::one(n, d).plus(&RootPolynomial::linear(n, d, &coeffs));
            total = total.times(&factor);
        }
    }
    let poly = total.to_chern_polynomial();
    Ok((1..=d).map(|k| poly.homogeneous(k)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::{rat, rat_int};

    fn cpoly(terms: &[(&[u32], i64)]) -> ChernPolynomial {
        ChernPolynomial::from_terms(
            terms
                .iter()
                .map(|(parts, c)| (MultiIndex::from_parts(parts.iter().copied()), rat_int(*c))),
        )
    }

    /// Brute-force count of partitions as multisets of parts.
    fn partition_count_oracle(d: u32) -> usize {
        fn rec(d: u32, max: u32) -> usize {
            if d == 0 {
                return 1;
            }
            (1..=max.min(d)).map(|p| rec(d - p, p)).sum()
        }
        rec(d, d)
    }

    #[test]
    fn partition_counts() {
        assert_eq!(partitions_of(0), vec![MultiIndex::empty()]);
        assert_eq!(partitions_of(4).len(), partition_count_oracle(4));
        assert_eq!(partitions_of(4).len(), 5);
        assert_eq!(partitions_of(10).len(), partition_count_oracle(10));
        assert_eq!(partitions_of(10).len(), 42);
    }

    #[test]
    fn partition_order_and_keys() {
        let keys: Vec<String> = partitions_of(4).iter().map(MultiIndex::key).collect();
        assert_eq!(keys, ["1+1+1+1", "1+1+2", "2+2", "1+3", "4"]);
        let k = MultiIndex::from_multiplicities(&[(1, 1), (2, 1)]);
        assert_eq!(k.key(), "1+2");
        assert_eq!("2+1".parse::<MultiIndex>().unwrap(), k);
        assert_eq!("0".parse::<MultiIndex>().unwrap(), MultiIndex::empty());
        assert!("1+x".parse::<MultiIndex>().is_err());
    }

    #[test]
    fn c_i_examples() {
        // α_1 = d gives c_d.
        for d in 1..=5 {
            assert_eq!(c_i(&MultiIndex::from_multiplicities(&[(1, d)])), ChernPolynomial::var(d));
        }
        assert_eq!(c_i(&MultiIndex::single(2)), cpoly(&[(&[1, 1], 1), (&[2], -2)]));
        assert_eq!(
            c_i(&MultiIndex::from_multiplicities(&[(1, 1), (2, 1)])),
            cpoly(&[(&[2, 1], 1), (&[3], -3)])
        );
    }

    /// Oracle: expand `c_I(e_1..e_n)` as a polynomial in `n` roots and compare
    /// with the monomial symmetric polynomial.
    fn monomial_symmetric(lambda: &MultiIndex, n: usize) -> RootPolynomial {
        let d = lambda.weight();
        let mut p = RootPolynomial::zero(n, d);
        let mut exps = lambda.parts().to_vec();
        exps.resize(n, 0);
        // Distinct permutations of the exponent vector.
        let mut perms = std::collections::BTreeSet::new();
        fn permute(v: &mut Vec<u32>, k: usize, out: &mut std::collections::BTreeSet<Vec<u32>>) {
            if k == v.len() {
                out.insert(v.clone());
                return;
            }
            for i in k..v.len() {
                v.swap(k, i);
                permute(v, k + 1, out);
                v.swap(k, i);
            }
        }
        permute(&mut exps, 0, &mut perms);
        for e in perms {
            p.add_term(e, Rational::one());
        }
        p
    }

    #[test]
    fn c_i_matches_root_expansion_with_n_and_n_plus_one_roots() {
        for d in 1..=5u32 {
            for lambda in partitions_of(d) {
                let poly = c_i(&lambda);
                for n in [d as usize, d as usize + 1] {
                    let unit = RootPolynomial::one(n, d);
                    let images: Vec<RootPolynomial> =
                        (1..=d as usize).map(|i| RootPolynomial::elementary(n, d, i)).collect();
                    let lhs = poly.evaluate(&unit, &images);
                    assert_eq!(lhs, monomial_symmetric(&lambda, n), "c_I for {lambda} with {n} roots");
                }
            }
        }
    }

    #[test]
    fn transition_is_stable_in_number_of_variables() {
        for d in 1..=8u32 {
            let a = transition_with_vars(d, d as usize);
            let b = transition_with_vars(d, d as usize + 1);
            assert_eq!(a.ci_to_monomial_matrix(), b.ci_to_monomial_matrix(), "degree {d}");
        }
    }

    #[test]
    fn transition_is_unimodular() {
        use crate::exactalg::rational_determinant;
        for d in 1..=8u32 {
            let t = transition(d);
            let m: Vec<Vec<Rational>> = t
                .ci_to_monomial_matrix()
                .iter()
                .map(|r| r.iter().map(|x| Rational::from_integer(x.clone())).collect())
                .collect();
            let det = rational_determinant(&m);
            assert!(det == rat_int(1) || det == rat_int(-1), "degree {d}: det {det}");
        }
    }

    #[test]
    fn newton_examples() {
        assert_eq!(newton_polynomial(1).unwrap(), ChernPolynomial::var(1));
        assert_eq!(newton_polynomial(2).unwrap(), cpoly(&[(&[1, 1], 1), (&[2], -2)]));
        assert_eq!(
            newton_polynomial(3).unwrap(),
            cpoly(&[(&[1, 1, 1], 1), (&[2, 1], -3), (&[3], 3)])
        );
        assert!(newton_polynomial(0).is_err());
    }

    #[test]
    fn newton_equals_single_part_c_i() {
        for d in 1..=8 {
            assert_eq!(newton_polynomial(d).unwrap(), c_i(&MultiIndex::single(d)));
        }
    }

    #[test]
    fn dual_chern_examples() {
        let one = ChernPolynomial::one();
        let t1 = one.plus(&ChernPolynomial::var(1));
        assert_eq!(dual_chern(&t1, 1).unwrap(), one.minus(&ChernPolynomial::var(1)));
        let t2 = t1.plus(&ChernPolynomial::var(2));
        let expect = one.minus(&ChernPolynomial::var(1)).plus(&ChernPolynomial::var(2));
        assert_eq!(dual_chern(&t2, 2).unwrap(), expect);
        assert_eq!(dual_chern(&dual_chern(&t2, 2).unwrap(), 2).unwrap(), t2);
        assert!(dual_chern(&ChernPolynomial::var(1), 1).is_err());
        assert!(dual_chern(&t2, 1).is_err());
    }

    #[test]
    fn exterior_power_examples() {
        let id = exterior_power_chern(3, 1, 3).unwrap();
        for (k, c) in id.iter().enumerate() {
            assert_eq!(c, &ChernPolynomial::var(k as u32 + 1));
        }
        let det = exterior_power_chern(3, 3, 3).unwrap();
        assert_eq!(det[0], ChernPolynomial::var(1));
        assert!(det[1].is_zero() && det[2].is_zero());
        let wedge2 = exterior_power_chern(3, 2, 2).unwrap();
        assert_eq!(wedge2[0], ChernPolynomial::var(1).scaled(&rat(2, 1)));
        // c_2(Λ^2 E) for rank 3: c_1^2 + c_2.
        assert_eq!(wedge2[1], cpoly(&[(&[1, 1], 1), (&[2], 1)]));
        let trivial = exterior_power_chern(3, 0, 2).unwrap();
        assert!(trivial.iter().all(ChernPolynomial::is_zero));
        assert!(exterior_power_chern(2, 3, 2).is_err());
    }

    #[test]
    fn exterior_power_rank_vanishing() {
        // Λ^i of a rank-r symbol has rank C(r, i); classes above it vanish.
        for r in 1..=4u32 {
            for i in 0..=r {
                let rank = binomial(&BigInt::from(r), i);
                let classes = exterior_power_chern(r, i, 6).unwrap();
                for (k, c) in classes.iter().enumerate() {
                    if BigInt::from(k as u32 + 1) > rank {
                        assert!(c.is_zero(), "r={r} i={i} c_{}", k + 1);
                    }
                }
            }
        }
    }
}
