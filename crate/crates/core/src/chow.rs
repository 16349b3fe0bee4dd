//! Chow rings of products of generator varieties, with rational coefficients.
//!
//! A projective space `P^n` contributes one generator `h` with
//! `h^{n+1} = 0`. A Milnor hypersurface `H_{m,n} ⊂ P^m × P^n` contributes the
//! restrictions `x, y` of the two hyperplane classes. `H` is a
//! `P^{n-1}`-bundle over `P^m`, so `x^{m+1} = 0` and
//! `y^n = x y^{n-1} - x^2 y^{n-2} + ... ± x^n`; classes are kept reduced to
//! the basis `x^a y^b` with `a <= m`, `b < n`, and `deg x^m y^{n-1} = 1`.
//!
//! Monomials are exponent vectors over all generators, factor-major, so every
//! class has a unique representation.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exactalg::{factorial, Rational};
use crate::symfun::{c_i, newton_polynomials, partitions_of, Algebra, ChernPolynomial, MultiIndex};

/// A generator variety.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Atom {
    /// Projective space `P^n`, `n >= 1`.
    Proj(u32),
    /// Milnor hypersurface `H_{m,n}` of bidegree (1,1) in `P^m × P^n`, `2 <= m <= n`.
    Milnor(u32, u32),
}

impl Atom {
    pub fn validate(&self) -> Result<()> {
        match *self {
            Atom::Proj(n) if n >= 1 => Ok(()),
            Atom::Milnor(m, n) if 2 <= m && m <= n => Ok(()),
            Atom::Proj(n) => Err(Error::InvalidAtom(format!("P{n} needs n >= 1"))),
            Atom::Milnor(m, n) => Err(Error::InvalidAtom(format!("H{m},{n} needs 2 <= m <= n"))),
        }
    }

    pub fn dimension(&self) -> u32 {
        match *self {
            Atom::Proj(n) => n,
            Atom::Milnor(m, n) => m + n - 1,
        }
    }

    fn nvars(&self) -> usize {
        match self {
            Atom::Proj(_) => 1,
            Atom::Milnor(..) => 2,
        }
    }

    fn exponent_bounds(&self) -> Vec<u32> {
        match *self {
            Atom::Proj(n) => vec![n],
            Atom::Milnor(m, n) => vec![m, n],
        }
    }

    /// Degree contribution of a factor monomial of top degree.
    fn top_degree(&self, exps: &[u32]) -> bool {
        match *self {
            Atom::Proj(n) => exps[0] == n,
            Atom::Milnor(m, n) => (exps[0] == m - 1 && exps[1] == n) || (exps[0] == m && exps[1] == n - 1),
        }
    }

    /// Every generator atom of dimension exactly `d`, projective space first.
    pub fn all_of_dimension(d: u32) -> Vec<Atom> {
        let mut out = Vec::new();
        if d >= 1 {
            out.push(Atom::Proj(d));
        }
        for m in 2..=d {
            let n = d + 1 - m;
            if m <= n {
                out.push(Atom::Milnor(m, n));
            }
        }
        out
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::Proj(n) => write!(f, "P{n}"),
            Atom::Milnor(m, n) => write!(f, "H{m},{n}"),
        }
    }
}

/// Layout of the generators of a product ring.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RingShape {
    factors: Vec<Atom>,
    offsets: Vec<usize>,
    bounds: Vec<u32>,
    dimension: u32,
}

impl RingShape {
    fn new(factors: &[Atom]) -> Self {
        let mut offsets = Vec::with_capacity(factors.len());
        let mut bounds = Vec::new();
        for a in factors {
            offsets.push(bounds.len());
            bounds.extend(a.exponent_bounds());
        }
        RingShape {
            factors: factors.to_vec(),
            offsets,
            bounds,
            dimension: factors.iter().map(Atom::dimension).sum(),
        }
    }

    pub fn nvars(&self) -> usize {
        self.bounds.len()
    }

    fn admissible(&self, exps: &[u32]) -> bool {
        self.factors.iter().zip(&self.offsets).all(|(a, &o)| {
            let part = &exps[o..o + a.nvars()];
            part.iter().zip(a.exponent_bounds()).all(|(e, b)| *e <= b)
                && part.iter().sum::<u32>() <= a.dimension()
        })
    }
}

/// An element of the truncated Chow ring (with rational coefficients) of a
/// [`VarietyModel`].
#[derive(Clone, PartialEq, Eq)]
pub struct GradedClass {
    shape: Arc<RingShape>,
    terms: BTreeMap<Vec<u32>, Rational>,
}

impl GradedClass {
    fn zero_in(shape: &Arc<RingShape>) -> Self {
        GradedClass { shape: Arc::clone(shape), terms: BTreeMap::new() }
    }

    fn constant_in(shape: &Arc<RingShape>, c: Rational) -> Self {
        let mut out = Self::zero_in(shape);
        out.add_term(vec![0; shape.nvars()], c);
        out
    }

    fn generator_in(shape: &Arc<RingShape>, var: usize) -> Self {
        let mut e = vec![0; shape.nvars()];
        e[var] = 1;
        let mut out = Self::zero_in(shape);
        out.add_term(e, Rational::one());
        out
    }

    fn add_term(&mut self, mut exps: Vec<u32>, c: Rational) {
        if c.is_zero() || !self.shape.admissible(&exps) {
            return;
        }
        // Milnor factors: reduce to the basis x^a y^b, b < n, using
        // y^n = x y^{n-1} - x^2 y^{n-2} + ... (H is a P^{n-1}-bundle over P^m).
        for (a, &o) in self.shape.factors.iter().zip(&self.shape.offsets) {
            if let Atom::Milnor(_, n) = *a {
                if exps[o + 1] >= n {
                    for i in 1..=n {
                        exps[o] += 1;
                        exps[o + 1] -= 1;
                        let term = if i % 2 == 1 { c.clone() } else { -c.clone() };
                        self.add_term(exps.clone(), term);
                    }
                    return;
                }
            }
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

    pub fn zero(&self) -> Self {
        Self::zero_in(&self.shape)
    }

    pub fn one(&self) -> Self {
        Self::constant_in(&self.shape, Rational::one())
    }

    pub fn constant(&self, c: Rational) -> Self {
        Self::constant_in(&self.shape, c)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, exps: &[u32]) -> Rational {
        self.terms.get(exps).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn constant_term(&self) -> Rational {
        self.coefficient(&vec![0; self.shape.nvars()])
    }

    pub fn same_ring(&self, other: &GradedClass) -> bool {
        Arc::ptr_eq(&self.shape, &other.shape) || self.shape == other.shape
    }

    pub fn plus(&self, other: &GradedClass) -> GradedClass {
        debug_assert!(self.same_ring(other));
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn minus(&self, other: &GradedClass) -> GradedClass {
        self.plus(&other.scaled(&-Rational::one()))
    }

    pub fn scaled(&self, r: &Rational) -> GradedClass {
        let mut out = self.zero();
        if r.is_zero() {
            return out;
        }
        out.terms = self.terms.iter().map(|(e, c)| (e.clone(), c * r)).collect();
        out
    }

    pub fn times(&self, other: &GradedClass) -> GradedClass {
        debug_assert!(self.same_ring(other));
        let mut out = self.zero();
        let dim = self.shape.dimension;
        for (ea, ca) in &self.terms {
            let da: u32 = ea.iter().sum();
            for (eb, cb) in &other.terms {
                if da + eb.iter().sum::<u32>() > dim {
                    continue;
                }
                let e: Vec<u32> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, ca * cb);
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> GradedClass {
        let mut out = self.one();
        for _ in 0..k {
            out = out.times(self);
        }
        out
    }

    /// Homogeneous component of codimension `k`.
    pub fn homogeneous(&self, k: u32) -> GradedClass {
        let mut out = self.zero();
        out.terms = self
            .terms
            .iter()
            .filter(|(e, _)| e.iter().sum::<u32>() == k)
            .map(|(e, c)| (e.clone(), c.clone()))
            .collect();
        out
    }

    /// Components `[α_1, ..., α_dim]` of positive codimension.
    pub fn components(&self) -> Vec<GradedClass> {
        (1..=self.shape.dimension).map(|k| self.homogeneous(k)).collect()
    }

    /// Multiplies the codimension-`k` part by `(-1)^k` (Chern character of a dual).
    pub fn sign_twisted(&self) -> GradedClass {
        self.graded_scaled(|k| if k % 2 == 1 { -Rational::one() } else { Rational::one() })
    }

    /// Multiplies the codimension-`k` part by `factor(k)`.
    pub fn graded_scaled(&self, factor: impl Fn(u32) -> Rational) -> GradedClass {
        let mut out = self.zero();
        for (e, c) in &self.terms {
            out.add_term(e.clone(), c * factor(e.iter().sum()));
        }
        out
    }

    /// Multiplicative inverse of a class with constant term 1.
    pub fn inverse_unipotent(&self) -> Result<GradedClass> {
        if !self.constant_term().is_one() {
            return Err(Error::Precondition("class must have constant term 1".into()));
        }
        // 1/(1+u) = Σ (-u)^k with u nilpotent.
        let u = self.minus(&self.one());
        let neg_u = u.scaled(&-Rational::one());
        let mut out = self.one();
        let mut power = self.one();
        for _ in 0..self.shape.dimension {
            power = power.times(&neg_u);
            if power.is_zero() {
                break;
            }
            out = out.plus(&power);
        }
        Ok(out)
    }

    /// Truncated exponential of a class with no constant term.
    pub fn exp(&self) -> GradedClass {
        let mut out = self.one();
        let mut power = self.one();
        for k in 1..=self.shape.dimension {
            power = power.times(self).scaled(&Rational::new(BigInt::one(), BigInt::from(k)));
            if power.is_zero() {
                break;
            }
            out = out.plus(&power);
        }
        out
    }

    /// Least common multiple of the coefficient denominators.
    pub fn denominator_lcm(&self) -> BigInt {
        crate::exactalg::common_denominator(self.terms.values())
    }
}

impl Algebra for GradedClass {
    fn one_like(&self) -> Self {
        self.one()
    }
    fn zero_like(&self) -> Self {
        self.zero()
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

impl fmt::Debug for GradedClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let names = variable_names(&self.shape);
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(e, c)| {
                let mono: Vec<String> = e
                    .iter()
                    .zip(&names)
                    .filter(|(x, _)| **x > 0)
                    .map(|(x, n)| if *x == 1 { n.clone() } else { format!("{n}^{x}") })
                    .collect();
                if mono.is_empty() {
                    format!("{c}")
                } else {
                    format!("{c}*{}", mono.join("*"))
                }
            })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

fn variable_names(shape: &RingShape) -> Vec<String> {
    let mut names = Vec::new();
    for (i, a) in shape.factors.iter().enumerate() {
        match a {
            Atom::Proj(_) => names.push(format!("h{i}")),
            Atom::Milnor(..) => {
                names.push(format!("x{i}"));
                names.push(format!("y{i}"));
            }
        }
    }
    names
}

/// A product of generator varieties with its Chow ring and tangent class.
#[derive(Clone, PartialEq, Eq)]
pub struct VarietyModel {
    shape: Arc<RingShape>,
    tangent_total: GradedClass,
}

pub fn build_variety(atoms: &[Atom]) -> Result<VarietyModel> {
    VarietyModel::new(atoms)
}

impl VarietyModel {
    pub fn new(atoms: &[Atom]) -> Result<Self> {
        for a in atoms {
            a.validate()?;
        }
        let shape = Arc::new(RingShape::new(atoms));
        let one = GradedClass::constant_in(&shape, Rational::one());
        let mut tangent = one.clone();
        for (a, &o) in atoms.iter().zip(&shape.offsets) {
            let factor = match *a {
                // Euler sequence.
                Atom::Proj(n) => one.plus(&GradedClass::generator_in(&shape, o)).pow(n + 1),
                // Adjunction: T_H = T_{P^m × P^n}|_H - O(1,1)|_H.
                Atom::Milnor(m, n) => {
                    let x = GradedClass::generator_in(&shape, o);
                    let y = GradedClass::generator_in(&shape, o + 1);
                    let normal = one.plus(&x).plus(&y);
                    one.plus(&x)
                        .pow(m + 1)
                        .times(&one.plus(&y).pow(n + 1))
                        .times(&normal.inverse_unipotent()?)
                }
            };
            tangent = tangent.times(&factor);
        }
        Ok(VarietyModel { shape, tangent_total: tangent })
    }

    pub fn point() -> Self {
        Self::new(&[]).expect("empty product is valid")
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.shape.factors
    }

    pub fn dimension(&self) -> u32 {
        self.shape.dimension
    }

    pub fn tangent_total(&self) -> &GradedClass {
        &self.tangent_total
    }

    pub fn one(&self) -> GradedClass {
        GradedClass::constant_in(&self.shape, Rational::one())
    }

    pub fn constant(&self, c: Rational) -> GradedClass {
        GradedClass::constant_in(&self.shape, c)
    }

    /// Hyperplane class of a projective-space factor.
    pub fn hyperplane(&self, factor: usize) -> Result<GradedClass> {
        match self.shape.factors.get(factor) {
            Some(Atom::Proj(_)) => Ok(GradedClass::generator_in(&self.shape, self.shape.offsets[factor])),
            Some(a) => Err(Error::Precondition(format!(
                "line twists apply to projective factors only; factor {factor} is {a}"
            ))),
            None => Err(Error::Precondition(format!(
                "factor index {factor} out of range for {} factors",
                self.shape.factors.len()
            ))),
        }
    }

    /// Generators of a factor's ring (`[h]` or `[x, y]`).
    pub fn factor_generators(&self, factor: usize) -> Vec<GradedClass> {
        let o = self.shape.offsets[factor];
        (0..self.shape.factors[factor].nvars())
            .map(|j| GradedClass::generator_in(&self.shape, o + j))
            .collect()
    }

    /// Degree of the dimension-zero component of `alpha`.
    pub fn degree(&self, alpha: &GradedClass) -> Rational {
        let mut total = Rational::zero();
        for (e, c) in alpha.terms() {
            if e.iter().sum::<u32>() != self.shape.dimension {
                continue;
            }
            let hit = self
                .shape
                .factors
                .iter()
                .zip(&self.shape.offsets)
                .all(|(a, &o)| a.top_degree(&e[o..o + a.nvars()]));
            if hit {
                total += c;
            }
        }
        total
    }

    /// Chern classes `[c_1, ..., c_dim]` of the tangent bundle.
    pub fn tangent_chern_classes(&self) -> Vec<GradedClass> {
        self.tangent_total.components()
    }

    /// Evaluates a polynomial in `c_1, c_2, ...` on the components of `total`.
    pub fn evaluate(&self, p: &ChernPolynomial, total: &GradedClass) -> GradedClass {
        p.evaluate(&self.one(), &total.components())
    }
}

impl fmt::Debug for VarietyModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = self.shape.factors.iter().map(Atom::to_string).collect();
        if names.is_empty() {
            f.write_str("pt")
        } else {
            f.write_str(&names.join("x"))
        }
    }
}

/// Total Chern class of `-E` from that of `E`.
pub fn virtual_negative(total: &GradedClass) -> Result<GradedClass> {
    total.inverse_unipotent()
}

/// Conner-Floyd class `c_I(E)` from the total Chern class of `E`.
pub fn conner_floyd_class(i: &MultiIndex, total: &GradedClass) -> Result<GradedClass> {
    if i.weight() > total.shape.dimension {
        return Err(Error::Precondition(format!(
            "|I| = {} exceeds the dimension {}",
            i.weight(),
            total.shape.dimension
        )));
    }
    Ok(c_i(i).evaluate(&total.one(), &total.components()))
}

/// Universal Chern character up to degree `d`: `[ch_1, ..., ch_d]` with
/// `ch_k = Q_k / k!`.
pub fn chern_character_polynomials(d: u32) -> Vec<ChernPolynomial> {
    newton_polynomials(d)
        .into_iter()
        .enumerate()
        .map(|(k, q)| q.scaled(&Rational::new(BigInt::one(), factorial(k as u32 + 1))))
        .collect()
}

/// Coefficients of the power series `x / (1 - e^{-x})` up to `x^n`.
pub fn todd_series(n: u32) -> Vec<Rational> {
    // (1 - e^{-x}) / x = Σ (-1)^k x^k / (k+1)!
    let denom: Vec<Rational> = (0..=n)
        .map(|k| {
            let sign = if k % 2 == 0 { BigInt::one() } else { -BigInt::one() };
            Rational::new(sign, factorial(k + 1))
        })
        .collect();
    series_reciprocal(&denom)
}

/// Reciprocal of a power series with constant term 1, to the same length.
pub fn series_reciprocal(a: &[Rational]) -> Vec<Rational> {
    let mut out: Vec<Rational> = Vec::with_capacity(a.len());
    for k in 0..a.len() {
        if k == 0 {
            out.push(Rational::one() / &a[0]);
            continue;
        }
        let mut s = Rational::zero();
        for j in 1..=k {
            s += &a[j] * &out[k - j];
        }
        out.push(-s / &a[0]);
    }
    out
}

/// Degree-`k` part of the multiplicative sequence with characteristic power
/// series `Σ q_j z^j` (`q_0 = 1`): `Σ_{|λ|=k} q_λ c_λ`.
pub fn multiplicative_sequence(series: &[Rational], k: u32) -> ChernPolynomial {
    let mut out = ChernPolynomial::zero();
    for lambda in partitions_of(k) {
        let coeff: Rational = lambda
            .parts()
            .iter()
            .map(|&p| series.get(p as usize).cloned().unwrap_or_else(Rational::zero))
            .product();
        if !coeff.is_zero() {
            out = out.plus(&c_i(&lambda).scaled(&coeff));
        }
    }
    out
}

/// Universal Todd polynomials `[td_1, ..., td_d]`.
pub fn todd_polynomials(d: u32) -> Vec<ChernPolynomial> {
    let series = todd_series(d);
    (1..=d).map(|k| multiplicative_sequence(&series, k)).collect()
}

fn check_denominators(class: &GradedClass, bound: &BigInt, what: &str) -> Result<()> {
    let den = class.denominator_lcm();
    if (bound % &den).is_zero() {
        Ok(())
    } else {
        Err(Error::Internal(format!("{what}: denominator {den} does not divide {bound}")))
    }
}

/// Chern character of a rank-`r` bundle from its total Chern class, through
/// degree `d`. Coefficient denominators divide `d!`.
pub fn chern_character(total: &GradedClass, rank: u32, d: u32) -> Result<GradedClass> {
    let images = total.components();
    let mut ch = total.constant(Rational::from_integer(rank.into()));
    for poly in chern_character_polynomials(d) {
        ch = ch.plus(&poly.evaluate(&total.one(), &images));
    }
    check_denominators(&ch, &factorial(d), "chern character")?;
    Ok(ch)
}

/// Todd class from a total Chern class, through degree `d`. Coefficient
/// denominators divide `(d+1)!`.
pub fn todd_class(total: &GradedClass, _rank: u32, d: u32) -> Result<GradedClass> {
    let images = total.components();
    let mut td = total.one();
    for poly in todd_polynomials(d) {
        td = td.plus(&poly.evaluate(&total.one(), &images));
    }
    check_denominators(&td, &factorial(d + 1), "todd class")?;
    Ok(td)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::{rat, rat_int};

    fn model(atoms: &[Atom]) -> VarietyModel {
        build_variety(atoms).unwrap()
    }

    /// Class from `(exponents, coefficient)` pairs.
    fn class(x: &VarietyModel, terms: &[(&[u32], i64)]) -> GradedClass {
        let mut out = x.one().zero();
        for (e, c) in terms {
            out.add_term(e.to_vec(), rat_int(*c));
        }
        out
    }

    #[test]
    fn tangent_of_projective_plane() {
        let p2 = model(&[Atom::Proj(2)]);
        assert_eq!(p2.tangent_total(), &class(&p2, &[(&[0], 1), (&[1], 3), (&[2], 3)]));
    }

    #[test]
    fn tangent_of_product_is_whitney() {
        let x = model(&[Atom::Proj(1), Atom::Proj(1)]);
        let expect = class(&x, &[(&[0, 0], 1), (&[1, 0], 2), (&[0, 1], 2), (&[1, 1], 4)]);
        assert_eq!(x.tangent_total(), &expect);
    }

    #[test]
    fn tangent_of_milnor_2_2() {
        let h = model(&[Atom::Milnor(2, 2)]);
        // Oracle: expand (1+x)^3 (1+y)^3 (1 - s + s^2 - s^3), s = x + y, by hand
        // in Z[x,y]/(x^3, y^3) truncated at degree 3.
        let x = &h.factor_generators(0)[0];
        let y = &h.factor_generators(0)[1];
        let one = h.one();
        let s = x.plus(y);
        let inv = one.minus(&s).plus(&s.pow(2)).minus(&s.pow(3));
        let expect = one.plus(x).pow(3).times(&one.plus(y).pow(3)).times(&inv);
        assert_eq!(h.tangent_total(), &expect);
        // c_1 = 2x + 2y.
        assert_eq!(h.tangent_total().homogeneous(1), x.plus(y).scaled(&rat_int(2)));
    }

    #[test]
    fn milnor_relation_is_reduced() {
        // On H_{2,3}: y^3 = x y^2 - x^2 y, and x^2 y^2 is the point class.
        let h = model(&[Atom::Milnor(2, 3)]);
        let x = &h.factor_generators(0)[0];
        let y = &h.factor_generators(0)[1];
        let expect = x.times(&y.pow(2)).minus(&x.pow(2).times(y));
        assert_eq!(y.pow(3), expect);
        assert_eq!(h.degree(&x.times(&y.pow(3))), rat_int(1));
        assert_eq!(h.degree(&x.pow(2).times(&y.pow(2))), rat_int(1));
        assert!(y.pow(4).times(x).is_zero());
    }

    #[test]
    fn degree_examples() {
        for n in 1..=5 {
            let p = model(&[Atom::Proj(n)]);
            let h = p.hyperplane(0).unwrap();
            assert_eq!(p.degree(&h.pow(n)), rat_int(1));
        }
        let h = model(&[Atom::Milnor(2, 2)]);
        let alpha = class(&h, &[(&[2, 1], 1)]);
        assert_eq!(h.degree(&alpha), rat_int(1));
        let c1 = h.tangent_total().homogeneous(1);
        assert_eq!(h.degree(&c1.pow(3)), rat_int(48));
    }

    #[test]
    fn c1_power_on_milnor_hypersurfaces_matches_closed_form() {
        // deg c_1(T)^d = -2 (-1)^d C(d-1, m-1) m^{m-1} n^{n-1} d with d = m+n-1.
        for (m, n) in [(2, 2), (2, 3), (3, 3), (2, 4), (3, 4)] {
            let h = model(&[Atom::Milnor(m, n)]);
            let d = m + n - 1;
            let c1 = h.tangent_total().homogeneous(1);
            let lhs = h.degree(&c1.pow(d));
            let binom = crate::exactalg::binomial(&BigInt::from(d - 1), m - 1);
            let sign: i64 = if d % 2 == 0 { 1 } else { -1 };
            let half_canonical = BigInt::from(sign)
                * binom
                * BigInt::from(m).pow(m - 1)
                * BigInt::from(n).pow(n - 1)
                * BigInt::from(d);
            // K = -c_1, so deg c_1^d = (-1)^d deg K^d = (-1)^d 2 (half value).
            let expect = BigInt::from(sign) * BigInt::from(2) * half_canonical;
            assert_eq!(lhs, Rational::from_integer(expect), "H{m},{n}");
        }
    }

    #[test]
    fn virtual_negative_examples() {
        let p1 = model(&[Atom::Proj(1)]);
        let neg = virtual_negative(p1.tangent_total()).unwrap();
        assert_eq!(neg, class(&p1, &[(&[0], 1), (&[1], -2)]));
        assert_eq!(virtual_negative(&p1.one()).unwrap(), p1.one());
        let p2 = model(&[Atom::Proj(2)]);
        let neg = virtual_negative(p2.tangent_total()).unwrap();
        assert_eq!(neg, class(&p2, &[(&[0], 1), (&[1], -3), (&[2], 6)]));
        assert_eq!(virtual_negative(&neg).unwrap(), *p2.tangent_total());
        assert_eq!(neg.times(p2.tangent_total()), p2.one());
        assert!(virtual_negative(&p2.constant(rat_int(2))).is_err());
    }

    #[test]
    fn conner_floyd_examples() {
        let p2 = model(&[Atom::Proj(2)]);
        let t = p2.tangent_total();
        let c1 = conner_floyd_class(&MultiIndex::single(1), t).unwrap();
        assert_eq!(c1, t.homogeneous(1));
        let a2 = conner_floyd_class(&MultiIndex::single(2), t).unwrap();
        assert_eq!(a2, class(&p2, &[(&[2], 3)]));
        let c2 = conner_floyd_class(&MultiIndex::from_multiplicities(&[(1, 2)]), t).unwrap();
        assert_eq!(c2, class(&p2, &[(&[2], 3)]));
        assert!(conner_floyd_class(&MultiIndex::single(3), t).is_err());
    }

    #[test]
    fn chern_character_examples() {
        let p1 = model(&[Atom::Proj(1)]);
        let h = p1.hyperplane(0).unwrap();
        for k in -3i64..=3 {
            let line = p1.one().plus(&h.scaled(&rat_int(k)));
            let ch = chern_character(&line, 1, 1).unwrap();
            assert_eq!(ch, line);
            let td = todd_class(p1.tangent_total(), 1, 1).unwrap();
            assert_eq!(p1.degree(&ch.times(&td)), rat_int(k + 1));
        }
        let p3 = model(&[Atom::Proj(3)]);
        assert_eq!(chern_character(&p3.one(), 4, 3).unwrap(), p3.constant(rat_int(4)));
        // Rank one: ch = exp(c_1).
        let h = p3.hyperplane(0).unwrap().scaled(&rat_int(5));
        let ch = chern_character(&p3.one().plus(&h), 1, 3).unwrap();
        assert_eq!(ch, h.exp());
    }

    #[test]
    fn todd_polynomial_low_degrees() {
        let td = todd_polynomials(2);
        assert_eq!(td[0], ChernPolynomial::var(1).scaled(&rat(1, 2)));
        let expect = ChernPolynomial::var(1)
            .times(&ChernPolynomial::var(1))
            .plus(&ChernPolynomial::var(2))
            .scaled(&rat(1, 12));
        assert_eq!(td[1], expect);
    }

    #[test]
    fn todd_of_projective_space_has_degree_one() {
        for n in 1..=6 {
            let p = model(&[Atom::Proj(n)]);
            let td = todd_class(p.tangent_total(), n, n).unwrap();
            assert_eq!(p.degree(&td), rat_int(1), "P{n}");
        }
    }

    #[test]
    fn whitney_and_multiplicative_degree() {
        let a = model(&[Atom::Proj(2)]);
        let b = model(&[Atom::Milnor(2, 2)]);
        let ab = model(&[Atom::Proj(2), Atom::Milnor(2, 2)]);
        // deg c_5(T) on the product equals the product of Euler numbers.
        let e = |x: &VarietyModel| x.degree(&x.tangent_total().homogeneous(x.dimension()));
        assert_eq!(e(&ab), e(&a) * e(&b));
        // The product tangent class restricted to one factor's generators is that factor's.
        let p1p1 = model(&[Atom::Proj(1), Atom::Proj(1)]);
        let t = p1p1.tangent_total();
        assert_eq!(p1p1.degree(&t.homogeneous(2)), rat_int(4));
    }

    #[test]
    fn ch_is_additive_and_multiplicative_on_line_classes() {
        let x = model(&[Atom::Proj(2), Atom::Proj(1)]);
        let h0 = x.hyperplane(0).unwrap();
        let h1 = x.hyperplane(1).unwrap();
        let l1 = x.one().plus(&h0.scaled(&rat_int(2)));
        let l2 = x.one().plus(&h0.scaled(&rat_int(-1))).plus(&h1);
        let ch1 = chern_character(&l1, 1, 3).unwrap();
        let ch2 = chern_character(&l2, 1, 3).unwrap();
        // E ⊕ F has total class c(E)c(F), rank 2.
        let sum = chern_character(&l1.times(&l2), 2, 3).unwrap();
        assert_eq!(sum, ch1.plus(&ch2));
        // E ⊗ F for line bundles: c_1 adds.
        let tensor_total = x.one().plus(&l1.homogeneous(1)).plus(&l2.homogeneous(1));
        assert_eq!(chern_character(&tensor_total, 1, 3).unwrap(), ch1.times(&ch2));
        let td_sum = todd_class(&l1.times(&l2), 2, 3).unwrap();
        assert_eq!(td_sum, todd_class(&l1, 1, 3).unwrap().times(&todd_class(&l2, 1, 3).unwrap()));
    }

    #[test]
    fn atom_validation() {
        assert!(build_variety(&[Atom::Proj(0)]).is_err());
        assert!(build_variety(&[Atom::Milnor(1, 3)]).is_err());
        assert!(build_variety(&[Atom::Milnor(3, 2)]).is_err());
        assert_eq!(Atom::all_of_dimension(4), vec![Atom::Proj(4), Atom::Milnor(2, 3)]);
        assert_eq!(Atom::all_of_dimension(5), vec![Atom::Proj(5), Atom::Milnor(2, 4), Atom::Milnor(3, 3)]);
    }

    #[test]
    fn hyperplane_rejects_milnor_factor() {
        let x = model(&[Atom::Milnor(2, 2), Atom::Proj(1)]);
        assert!(x.hyperplane(0).is_err());
        assert!(x.hyperplane(1).is_ok());
        assert!(x.hyperplane(2).is_err());
    }
}
