//! Rational characteristic classes of degree `d`, written in the basis
//! `{c_I : |I| = d}`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::chow::{multiplicative_sequence, series_reciprocal, todd_series, GradedClass, VarietyModel};
use crate::error::{Error, Result};
use crate::exactalg::{factorial, Rational};
use crate::index::is_prime;
use crate::symfun::{c_i, partitions_of, transition, ChernPolynomial, MultiIndex, RootPolynomial};

/// An element of `Q[c]_d` in the `c_I` basis.
#[derive(Clone, PartialEq, Eq)]
pub struct CharClassPoly {
    degree: u32,
    coords: BTreeMap<MultiIndex, Rational>,
}

impl CharClassPoly {
    pub fn zero(degree: u32) -> Self {
        CharClassPoly { degree, coords: BTreeMap::new() }
    }

    /// The basis element `c_I`.
    pub fn basis(i: &MultiIndex) -> Self {
        let mut out = Self::zero(i.weight());
        out.coords.insert(i.clone(), Rational::one());
        out
    }

    pub fn from_coordinates(
        degree: u32,
        coords: impl IntoIterator<Item = (MultiIndex, Rational)>,
    ) -> Result<Self> {
        let mut out = Self::zero(degree);
        for (i, c) in coords {
            if i.weight() != degree {
                return Err(Error::DegreeMismatch { left: degree, right: i.weight() });
            }
            out.add(i, c);
        }
        Ok(out)
    }

    /// Coordinates listed in [`partitions_of`] order.
    pub fn from_vector(degree: u32, v: &[Rational]) -> Result<Self> {
        let parts = partitions_of(degree);
        if parts.len() != v.len() {
            return Err(Error::DimensionMismatch { expected: parts.len(), found: v.len() });
        }
        Self::from_coordinates(degree, parts.into_iter().zip(v.iter().cloned()))
    }

    /// Expresses a polynomial homogeneous of degree `d` in the `c_I` basis.
    pub fn from_chern_polynomial(degree: u32, p: &ChernPolynomial) -> Result<Self> {
        if !p.is_homogeneous(degree) {
            return Err(Error::Precondition(format!("polynomial {p} is not homogeneous of degree {degree}")));
        }
        let v = transition(degree).to_ci_coordinates(p)?;
        Self::from_vector(degree, &v)
    }

    fn add(&mut self, i: MultiIndex, c: Rational) {
        if c.is_zero() {
            return;
        }
        let e = self.coords.entry(i.clone()).or_insert_with(Rational::zero);
        *e += c;
        if e.is_zero() {
            self.coords.remove(&i);
        }
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn coordinate(&self, i: &MultiIndex) -> Rational {
        self.coords.get(i).cloned().unwrap_or_else(Rational::zero)
    }

    /// Nonzero coordinates in increasing partition order.
    pub fn coordinates(&self) -> impl Iterator<Item = (&MultiIndex, &Rational)> {
        self.coords.iter()
    }

    /// Dense coordinate vector in [`partitions_of`] order.
    pub fn to_vector(&self) -> Vec<Rational> {
        partitions_of(self.degree).iter().map(|i| self.coordinate(i)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn to_chern_polynomial(&self) -> ChernPolynomial {
        transition(self.degree).from_ci_coordinates(&self.to_vector())
    }

    pub fn plus(&self, other: &Self) -> Result<Self> {
        if self.degree != other.degree {
            return Err(Error::DegreeMismatch { left: self.degree, right: other.degree });
        }
        let mut out = self.clone();
        for (i, c) in &other.coords {
            out.add(i.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn scaled(&self, r: &Rational) -> Self {
        let mut out = Self::zero(self.degree);
        for (i, c) in &self.coords {
            out.add(i.clone(), c * r);
        }
        out
    }

    /// The class evaluated on the bundle with total Chern class `total`.
    pub fn evaluate(&self, x: &VarietyModel, total: &GradedClass) -> GradedClass {
        x.evaluate(&self.to_chern_polynomial(), total)
    }

    /// `deg P(T_X)`.
    pub fn tangent_degree(&self, x: &VarietyModel) -> Rational {
        x.degree(&self.evaluate(x, x.tangent_total()))
    }
}

impl fmt::Display for CharClassPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coords.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self.coords.iter().map(|(i, c)| format!("{c}*c[{i}]")).collect();
        f.write_str(&parts.join(" + "))
    }
}

impl fmt::Debug for CharClassPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CharClassPoly(d={}; {})", self.degree, self)
    }
}

/// Segre polynomials `[s_1, ..., s_d]`: `1 + Σ s_i t^i = (1 + Σ c_i t^i)^{-1}`.
pub fn segre_polynomials(d: u32) -> Vec<ChernPolynomial> {
    let mut s: Vec<ChernPolynomial> = vec![ChernPolynomial::one()];
    for k in 1..=d {
        let mut acc = ChernPolynomial::zero();
        for i in 1..=k {
            acc = acc.plus(&ChernPolynomial::var(i).times(&s[(k - i) as usize]));
        }
        s.push(acc.scaled(&-Rational::one()));
    }
    s.remove(0);
    s
}

/// `P(s_1, ..., s_d)` re-expressed in the `c_I` basis. This is an involution.
pub fn segre_substitute(p: &CharClassPoly) -> CharClassPoly {
    let d = p.degree();
    let images = segre_polynomials(d);
    let substituted = p.to_chern_polynomial().substitute(&images, d).homogeneous(d);
    CharClassPoly::from_chern_polynomial(d, &substituted).expect("Segre substitution preserves degree")
}

/// Dense matrix of the Segre substitution on `c_I` coordinates: row `I` holds
/// the coordinates of `segre_substitute(c_I)`.
pub fn segre_matrix(d: u32) -> Vec<Vec<Rational>> {
    partitions_of(d)
        .iter()
        .map(|i| segre_substitute(&CharClassPoly::basis(i)).to_vector())
        .collect()
}

fn check_exponents(m: &[u32], d: u32) -> Result<()> {
    if m.len() != d as usize {
        return Err(Error::DimensionMismatch { expected: d as usize, found: m.len() });
    }
    Ok(())
}

/// `R_f` for `f = Π τ_i^{m_i}`, computed directly in `d` Chern roots: the
/// degree-`d` part of `f(e^{ξ_1}, ..., e^{ξ_d}) Π ξ_j / (1 - e^{-ξ_j})`.
pub fn build_rf(m: &[u32], d: u32) -> Result<CharClassPoly> {
    check_exponents(m, d)?;
    let n = d as usize;
    let todd = todd_series(d);
    let mut product = RootPolynomial::one(n, d);
    for j in 0..n {
        product = product.times(&RootPolynomial::series_in(n, d, j, &todd));
    }
    for (i, &mi) in m.iter().enumerate() {
        if mi == 0 {
            continue;
        }
        let tau = exp_elementary(n, d, i + 1);
        product = product.times(&tau.pow(mi));
    }
    if !product.is_symmetric() {
        return Err(Error::Internal("R_f series is not symmetric".into()));
    }
    CharClassPoly::from_coordinates(d, product.symmetric_ci_coordinates(d))
}

/// `τ_i(e^{ξ_1}, ..., e^{ξ_n})` truncated at degree `d`.
pub fn exp_elementary(n: usize, d: u32, i: usize) -> RootPolynomial {
    let mut out = RootPolynomial::zero(n, d);
    for subset in crate::symfun::subsets(n, i) {
        let mut coeffs = vec![Rational::zero(); n];
        for j in subset {
            coeffs[j] = Rational::one();
        }
        out = out.plus(&RootPolynomial::linear(n, d, &coeffs).exp());
    }
    out
}

/// `S_f = R_f(s_1, ..., s_d)` for `f = Π τ_i^{m_i}`.
pub fn build_sf(m: &[u32], d: u32) -> Result<CharClassPoly> {
    Ok(segre_substitute(&build_rf(m, d)?))
}

/// `S_f` for a formal integer combination of monomials `Π τ_i^{m_i}`.
pub fn build_sf_combination(terms: &[(i64, Vec<u32>)], d: u32) -> Result<CharClassPoly> {
    let mut out = CharClassPoly::zero(d);
    for (coeff, m) in terms {
        out = out.plus(&build_sf(m, d)?.scaled(&Rational::from_integer((*coeff).into())))?;
    }
    Ok(out)
}

/// Fast generator of the classes `S_f` for one degree `d`.
///
/// The series `τ_i(e^ξ)` and the Todd series are converted once into
/// truncated polynomials in `c_1..c_d`; each `S_f` is then a product in that
/// small ring followed by a fixed linear map.
pub struct SfGenerator {
    degree: u32,
    taus: Vec<ChernPolynomial>,
    todd: ChernPolynomial,
    /// Row `μ`: `S_f` coordinates contributed by the monomial `c^μ` of `R_f`.
    output_map: Vec<Vec<Rational>>,
    monomial_index: BTreeMap<MultiIndex, usize>,
}

impl SfGenerator {
    pub fn new(d: u32) -> Self {
        let n = d as usize;
        let taus = (1..=n).map(|i| exp_elementary(n, d, i).to_chern_polynomial()).collect();
        let todd_series = todd_series(d);
        let mut todd = ChernPolynomial::one();
        for k in 1..=d {
            todd = todd.plus(&multiplicative_sequence(&todd_series, k));
        }
        let t = transition(d);
        let segre = segre_matrix(d);
        let np = t.partitions().len();
        let output_map = (0..np)
            .map(|mu| {
                let ci_row = &t.monomial_to_ci_matrix()[mu];
                (0..np)
                    .map(|out| {
                        let mut acc = Rational::zero();
                        for (lambda, x) in ci_row.iter().enumerate() {
                            if !x.is_zero() {
                                acc += Rational::from_integer(x.clone()) * &segre[lambda][out];
                            }
                        }
                        acc
                    })
                    .collect()
            })
            .collect();
        let monomial_index = t.partitions().iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
        SfGenerator { degree: d, taus, todd, output_map, monomial_index }
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    fn finish(&self, product: &ChernPolynomial) -> Vec<Rational> {
        let np = self.output_map.len();
        let mut out = vec![Rational::zero(); np];
        for (mu, c) in product.homogeneous(self.degree).terms() {
            let row = &self.output_map[self.monomial_index[mu]];
            for (o, x) in out.iter_mut().zip(row) {
                if !x.is_zero() {
                    *o += c * x;
                }
            }
        }
        out
    }

    /// Coordinates of `S_f` in [`partitions_of`] order.
    pub fn sf_vector(&self, m: &[u32]) -> Result<Vec<Rational>> {
        check_exponents(m, self.degree)?;
        let mut product = self.todd.clone();
        for (tau, &mi) in self.taus.iter().zip(m) {
            for _ in 0..mi {
                product = product.times_truncated(tau, self.degree);
            }
        }
        Ok(self.finish(&product))
    }

    /// Every `(m, S_f)` with `0 <= m_i <= bound` and `max m_i >= min_max`.
    pub fn enumerate(&self, bound: u32, min_max: u32) -> Vec<(Vec<u32>, Vec<Rational>)> {
        let mut out = Vec::new();
        let mut m = vec![0u32; self.degree as usize];
        self.walk(0, &self.todd, bound, min_max, &mut m, &mut out);
        out
    }

    fn walk(
        &self,
        i: usize,
        product: &ChernPolynomial,
        bound: u32,
        min_max: u32,
        m: &mut Vec<u32>,
        out: &mut Vec<(Vec<u32>, Vec<Rational>)>,
    ) {
        if i == m.len() {
            if m.iter().copied().max().unwrap_or(0) >= min_max {
                out.push((m.clone(), self.finish(product)));
            }
            return;
        }
        let mut p = product.clone();
        for e in 0..=bound {
            if e > 0 {
                p = p.times_truncated(&self.taus[i], self.degree);
            }
            m[i] = e;
            self.walk(i + 1, &p, bound, min_max, m, out);
        }
        m[i] = 0;
    }
}

/// Coefficients of `√z / tanh √z = Σ 2^{2k} B_{2k} z^k / (2k)!` up to `z^n`.
pub fn l_genus_series(n: u32) -> Vec<Rational> {
    // x / tanh x = cosh x / (sinh x / x), both even in x.
    let cosh: Vec<Rational> = (0..=n).map(|k| Rational::new(BigInt::one(), factorial(2 * k))).collect();
    let sinhc: Vec<Rational> = (0..=n).map(|k| Rational::new(BigInt::one(), factorial(2 * k + 1))).collect();
    let inv = series_reciprocal(&sinhc);
    (0..=n as usize)
        .map(|k| (0..=k).map(|j| &cosh[j] * &inv[k - j]).sum())
        .collect()
}

/// Hirzebruch L-polynomial `L_k` in the Pontryagin classes, returned as a
/// polynomial whose variable `c_i` stands for `p_i`.
pub fn l_polynomial(k: u32) -> ChernPolynomial {
    multiplicative_sequence(&l_genus_series(k), k)
}

/// `p_i = Σ_{j=0}^{2i} (-1)^{i+j} c_j c_{2i-j}` with `c_0 = 1`.
pub fn pontryagin_in_chern(i: u32) -> ChernPolynomial {
    let c = |j: u32| if j == 0 { ChernPolynomial::one() } else { ChernPolynomial::var(j) };
    let mut out = ChernPolynomial::zero();
    for j in 0..=2 * i {
        let sign = if (i + j).is_multiple_of(2) { Rational::one() } else { -Rational::one() };
        out = out.plus(&c(j).times(&c(2 * i - j)).scaled(&sign));
    }
    out
}

/// Signature polynomial `P_d = L_{d/2}(p_i(c))` for even `d`.
pub fn hirzebruch_signature_polynomial(d: u32) -> Result<CharClassPoly> {
    if d % 2 == 1 || d == 0 {
        return Err(Error::Precondition(format!("signature polynomial needs a positive even degree, got {d}")));
    }
    let k = d / 2;
    let pontryagin: Vec<ChernPolynomial> = (1..=k).map(pontryagin_in_chern).collect();
    let p = l_polynomial(k).substitute(&pontryagin, d).homogeneous(d);
    CharClassPoly::from_chern_polynomial(d, &p)
}

/// Named integral characteristic classes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CatalogueClass {
    /// `½ c_d`, `d` odd.
    HalfEuler { d: u32 },
    /// `½ c_1^d`, `d` odd.
    HalfC1Power { d: u32 },
    /// `½ s_d`.
    HalfSegre { d: u32 },
    /// `(1/q) c_I(s_1, ..., s_d)`, every part of `I` of the form `q^n - 1`.
    Steenrod { q: u32, index: MultiIndex },
    /// `(1/q) Q_d(s_1, ..., s_d)` with `d = q^n - 1`.
    NewtonOverQ { q: u32, d: u32 },
    /// Hirzebruch signature polynomial, `d` even.
    Signature { d: u32 },
}

fn is_q_power_minus_one(q: u32, j: u32) -> bool {
    let mut p = q as u64;
    while p - 1 < j as u64 {
        p *= q as u64;
    }
    p - 1 == j as u64
}

impl CatalogueClass {
    pub fn name(&self) -> &'static str {
        match self {
            CatalogueClass::HalfEuler { .. } => "half_euler",
            CatalogueClass::HalfC1Power { .. } => "half_c1_power",
            CatalogueClass::HalfSegre { .. } => "half_segre",
            CatalogueClass::Steenrod { .. } => "steenrod",
            CatalogueClass::NewtonOverQ { .. } => "newton_over_q",
            CatalogueClass::Signature { .. } => "signature",
        }
    }

    pub fn degree(&self) -> u32 {
        match self {
            CatalogueClass::HalfEuler { d }
            | CatalogueClass::HalfC1Power { d }
            | CatalogueClass::HalfSegre { d }
            | CatalogueClass::NewtonOverQ { d, .. }
            | CatalogueClass::Signature { d } => *d,
            CatalogueClass::Steenrod { index, .. } => index.weight(),
        }
    }

    pub fn build(&self) -> Result<CharClassPoly> {
        catalogue_class(self)
    }
}

/// The polynomial of a catalogue entry, after checking its parameter constraints.
pub fn catalogue_class(class: &CatalogueClass) -> Result<CharClassPoly> {
    let half = Rational::new(BigInt::one(), BigInt::from(2));
    let need_odd = |d: u32| {
        if d % 2 == 1 {
            Ok(())
        } else {
            Err(Error::Precondition(format!("{} requires odd d, got {d}", class.name())))
        }
    };
    let need_prime = |q: u32| {
        if is_prime(q as u64) {
            Ok(())
        } else {
            Err(Error::Precondition(format!("{} requires a prime q, got {q}", class.name())))
        }
    };
    match class {
        CatalogueClass::HalfEuler { d } => {
            need_odd(*d)?;
            CharClassPoly::from_chern_polynomial(*d, &ChernPolynomial::var(*d).scaled(&half))
        }
        CatalogueClass::HalfC1Power { d } => {
            need_odd(*d)?;
            let m = MultiIndex::from_multiplicities(&[(1, *d)]);
            CharClassPoly::from_chern_polynomial(*d, &ChernPolynomial::monomial(m, half))
        }
        CatalogueClass::HalfSegre { d } => {
            if *d == 0 {
                return Err(Error::Precondition("half_segre requires d >= 1".into()));
            }
            let s = segre_polynomials(*d).pop().expect("d >= 1");
            CharClassPoly::from_chern_polynomial(*d, &s.scaled(&half))
        }
        CatalogueClass::Steenrod { q, index } => {
            need_prime(*q)?;
            if index.is_empty() {
                return Err(Error::Precondition("steenrod requires a nonempty index".into()));
            }
            if let Some(&j) = index.parts().iter().find(|&&j| !is_q_power_minus_one(*q, j)) {
                return Err(Error::Precondition(format!(
                    "steenrod with q = {q}: part {j} is not of the form q^n - 1"
                )));
            }
            let inv_q = Rational::new(BigInt::one(), BigInt::from(*q));
            Ok(segre_substitute(&CharClassPoly::basis(index)).scaled(&inv_q))
        }
        CatalogueClass::NewtonOverQ { q, d } => {
            need_prime(*q)?;
            if *d == 0 || !is_q_power_minus_one(*q, *d) {
                return Err(Error::Precondition(format!(
                    "newton_over_q requires d = q^n - 1 with n >= 1, got q = {q}, d = {d}"
                )));
            }
            catalogue_class(&CatalogueClass::Steenrod { q: *q, index: MultiIndex::single(*d) })
        }
        CatalogueClass::Signature { d } => hirzebruch_signature_polynomial(*d),
    }
}

/// `c_I` as a [`CharClassPoly`] expressed through its polynomial (used in tests
/// as the monomial-route counterpart of [`CharClassPoly::basis`]).
pub fn c_i_class(i: &MultiIndex) -> CharClassPoly {
    CharClassPoly::from_chern_polynomial(i.weight(), &c_i(i)).expect("c_I is homogeneous")
}
