//! Euler characteristics of bundles built from the tangent bundle, by
//! Hirzebruch-Riemann-Roch, and the identities that rest on them.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::charclass::{build_sf, hirzebruch_signature_polynomial};
use crate::chow::{chern_character, todd_class, GradedClass, VarietyModel};
use crate::cobordism::{fundamental_polynomial, pairing};
use crate::error::{Error, Result};
use crate::exactalg::{binomial, Rational};

/// A virtual bundle on a product of generator atoms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BundleExpr {
    Tangent,
    /// The trivial bundle of rank `r`.
    Trivial(u32),
    /// `O(twist)` pulled back from projective factor `factor`.
    Line { factor: usize, twist: i64 },
    Dual(Box<BundleExpr>),
    ExteriorPower(u32, Box<BundleExpr>),
    Tensor(Box<BundleExpr>, Box<BundleExpr>),
    Sum(Box<BundleExpr>, Box<BundleExpr>),
    Negate(Box<BundleExpr>),
}

impl BundleExpr {
    pub fn dual(self) -> Self {
        BundleExpr::Dual(Box::new(self))
    }

    pub fn exterior_power(self, i: u32) -> Self {
        BundleExpr::ExteriorPower(i, Box::new(self))
    }

    pub fn tensor(self, other: Self) -> Self {
        BundleExpr::Tensor(Box::new(self), Box::new(other))
    }

    pub fn sum(self, other: Self) -> Self {
        BundleExpr::Sum(Box::new(self), Box::new(other))
    }

    pub fn negate(self) -> Self {
        BundleExpr::Negate(Box::new(self))
    }

    /// `Ω^i = Λ^i T^∨`.
    pub fn omega(i: u32) -> Self {
        BundleExpr::Tangent.dual().exterior_power(i)
    }

    /// `⊗_i (Λ^i T)^{⊗ m_i}`.
    pub fn tensor_of_exterior_powers(m: &[u32]) -> Self {
        let mut out = BundleExpr::Trivial(1);
        for (i, &mi) in m.iter().enumerate() {
            for _ in 0..mi {
                out = out.tensor(BundleExpr::Tangent.exterior_power(i as u32 + 1));
            }
        }
        out
    }

    /// Virtual rank on a variety of dimension `dim`.
    pub fn rank(&self, dim: u32) -> BigInt {
        match self {
            BundleExpr::Tangent => dim.into(),
            BundleExpr::Trivial(r) => (*r).into(),
            BundleExpr::Line { .. } => BigInt::one(),
            BundleExpr::Dual(e) => e.rank(dim),
            BundleExpr::ExteriorPower(i, e) => binomial(&e.rank(dim), *i),
            BundleExpr::Tensor(a, b) => a.rank(dim) * b.rank(dim),
            BundleExpr::Sum(a, b) => a.rank(dim) + b.rank(dim),
            BundleExpr::Negate(e) => -e.rank(dim),
        }
    }

    /// Chern character on `x`.
    pub fn chern_character(&self, x: &VarietyModel) -> Result<GradedClass> {
        let d = x.dimension();
        Ok(match self {
            BundleExpr::Tangent => chern_character(x.tangent_total(), d, d)?,
            BundleExpr::Trivial(r) => x.constant(Rational::from_integer((*r).into())),
            BundleExpr::Line { factor, twist } => {
                x.hyperplane(*factor)?.scaled(&Rational::from_integer((*twist).into())).exp()
            }
            BundleExpr::Dual(e) => e.chern_character(x)?.sign_twisted(),
            BundleExpr::ExteriorPower(i, e) => exterior_power_ch(&e.chern_character(x)?, *i),
            BundleExpr::Tensor(a, b) => a.chern_character(x)?.times(&b.chern_character(x)?),
            BundleExpr::Sum(a, b) => a.chern_character(x)?.plus(&b.chern_character(x)?),
            BundleExpr::Negate(e) => e.chern_character(x)?.scaled(&-Rational::one()),
        })
    }
}

/// Adams operation `ψ^k` on a Chern character: degree `j` scales by `k^j`.
pub fn adams(ch: &GradedClass, k: u32) -> GradedClass {
    ch.graded_scaled(|j| Rational::from_integer(BigInt::from(k).pow(j)))
}

/// `ch(Λ^i E)` from `ch(E)` via `i λ^i = Σ_{k=1}^i (-1)^{k-1} ψ^k λ^{i-k}`.
/// Valid for virtual bundles as well.
pub fn exterior_power_ch(ch: &GradedClass, i: u32) -> GradedClass {
    let mut lambdas = vec![ch.one()];
    for n in 1..=i {
        let mut acc = ch.zero();
        for k in 1..=n {
            let term = adams(ch, k).times(&lambdas[(n - k) as usize]);
            acc = if k % 2 == 1 { acc.plus(&term) } else { acc.minus(&term) };
        }
        lambdas.push(acc.scaled(&Rational::new(BigInt::one(), BigInt::from(n))));
    }
    lambdas.pop().expect("nonempty")
}

impl fmt::Display for BundleExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BundleExpr::Tangent => f.write_str("T"),
            BundleExpr::Trivial(1) => f.write_str("O"),
            BundleExpr::Trivial(r) => write!(f, "{r}"),
            BundleExpr::Line { factor, twist } => write!(f, "O({twist})@{factor}"),
            BundleExpr::Dual(e) => write!(f, "~{}", Atomic(e)),
            BundleExpr::ExteriorPower(i, e) => write!(f, "{}^{i}", Atomic(e)),
            BundleExpr::Tensor(a, b) => write!(f, "({a} * {b})"),
            BundleExpr::Sum(a, b) => write!(f, "({a} + {b})"),
            BundleExpr::Negate(e) => write!(f, "-{}", Atomic(e)),
        }
    }
}

/// Prints an operand of a prefix or postfix operator, parenthesized unless atomic.
struct Atomic<'a>(&'a BundleExpr);

impl fmt::Display for Atomic<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            BundleExpr::Tangent | BundleExpr::Trivial(_) | BundleExpr::Line { .. } => write!(f, "{}", self.0),
            BundleExpr::Tensor(..) | BundleExpr::Sum(..) => write!(f, "{}", self.0),
            e => write!(f, "({e})"),
        }
    }
}

fn integral(value: Rational, what: &str) -> Result<BigInt> {
    if value.is_integer() {
        Ok(value.to_integer())
    } else {
        Err(Error::Internal(format!("{what} = {value} is not an integer")))
    }
}

/// `χ(X, E) = deg(ch(E) td(T_X))`.
pub fn euler_characteristic(x: &VarietyModel, e: &BundleExpr) -> Result<BigInt> {
    let d = x.dimension();
    let td = todd_class(x.tangent_total(), d, d)?;
    integral(x.degree(&e.chern_character(x)?.times(&td)), &format!("chi({x:?}, {e})"))
}

/// `χ(X, Ω^i)`.
pub fn hodge_chi(x: &VarietyModel, i: u32) -> Result<BigInt> {
    euler_characteristic(x, &BundleExpr::omega(i))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CobordSfCheck {
    /// `<S_f, b(X)>`.
    pub lhs: Rational,
    /// `χ(X, ⊗ (Λ^i T_X)^{⊗ m_i})`.
    pub rhs: BigInt,
    pub equal: bool,
}

/// Compares `<S_f, b(X)>` with `χ(X, ⊗ (Λ^i T_X)^{⊗ m_i})` for `f = Π τ_i^{m_i}`.
pub fn verify_cobord_sf(x: &VarietyModel, m: &[u32]) -> Result<CobordSfCheck> {
    let d = x.dimension();
    if m.len() != d as usize {
        return Err(Error::DimensionMismatch { expected: d as usize, found: m.len() });
    }
    let lhs = pairing(&build_sf(m, d)?, &fundamental_polynomial(x)?)?;
    let rhs = euler_characteristic(x, &BundleExpr::tensor_of_exterior_powers(m))?;
    let equal = lhs == Rational::from_integer(rhs.clone());
    Ok(CobordSfCheck { lhs, rhs, equal })
}

/// Signature of an even-dimensional `X`, computed as `deg P_d(T_X)` and as
/// `Σ_i χ(X, Ω^i)`; the two must agree.
pub fn signature(x: &VarietyModel) -> Result<BigInt> {
    let d = x.dimension();
    if d % 2 == 1 {
        return Err(Error::Precondition(format!("signature needs even dimension, got {d}")));
    }
    let mut hodge = BigInt::zero();
    for i in 0..=d {
        hodge += hodge_chi(x, i)?;
    }
    let l_value = if d == 0 {
        Rational::one()
    } else {
        hirzebruch_signature_polynomial(d)?.tangent_degree(x)
    };
    if l_value != Rational::from_integer(hodge.clone()) {
        return Err(Error::Internal(format!(
            "signature of {x:?}: L-genus gives {l_value}, Hodge sum gives {hodge}"
        )));
    }
    Ok(hodge)
}

/// Topological Euler characteristic `deg c_d(T_X)`, cross-checked against
/// `Σ_i (-1)^i χ(X, Ω^i)`.
pub fn euler_number(x: &VarietyModel) -> Result<BigInt> {
    let d = x.dimension();
    let top = if d == 0 { x.one() } else { x.tangent_total().homogeneous(d) };
    let chern = integral(x.degree(&top), "deg c_d(T)")?;
    let mut hodge = BigInt::zero();
    for i in 0..=d {
        let chi = hodge_chi(x, i)?;
        if i % 2 == 0 {
            hodge += chi;
        } else {
            hodge -= chi;
        }
    }
    if chern != hodge {
        return Err(Error::Internal(format!(
            "Euler number of {x:?}: Chern number {chern}, Hodge sum {hodge}"
        )));
    }
    Ok(chern)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HalfEulerCheck {
    pub e: BigInt,
    pub half: BigInt,
    /// `Σ_{i=0}^{(d-1)/2} (-1)^i χ(X, Λ^i T_X^∨)`.
    pub rho_value: BigInt,
    pub equal: bool,
}

/// For odd-dimensional `X`, compares `e(X)/2` with `χ(X, ρ(T_X))`.
pub fn half_euler_check(x: &VarietyModel) -> Result<HalfEulerCheck> {
    let d = x.dimension();
    if d.is_multiple_of(2) {
        return Err(Error::Precondition(format!("half-Euler check needs odd dimension, got {d}")));
    }
    let e = euler_number(x)?;
    if (&e % 2u32) != BigInt::zero() {
        return Err(Error::Internal(format!("Euler number {e} of odd-dimensional {x:?} is odd")));
    }
    let half = &e / 2u32;
    let mut rho_value = BigInt::zero();
    for i in 0..=(d - 1) / 2 {
        let chi = hodge_chi(x, i)?;
        if i % 2 == 0 {
            rho_value += chi;
        } else {
            rho_value -= chi;
        }
    }
    let equal = half == rho_value;
    Ok(HalfEulerCheck { e, half, rho_value, equal })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chow::Atom;
    use crate::exactalg::int;
    use crate::symfun::exterior_power_chern;

    fn model(atoms: &[Atom]) -> VarietyModel {
        VarietyModel::new(atoms).unwrap()
    }

    #[test]
    fn euler_characteristic_examples() {
        for n in 1..=6 {
            assert_eq!(euler_characteristic(&model(&[Atom::Proj(n)]), &BundleExpr::Trivial(1)).unwrap(), int(1));
        }
        let p1 = model(&[Atom::Proj(1)]);
        assert_eq!(euler_characteristic(&p1, &BundleExpr::Line { factor: 0, twist: 2 }).unwrap(), int(3));
        assert_eq!(euler_characteristic(&p1, &BundleExpr::Tangent).unwrap(), int(3));
        let p3 = model(&[Atom::Proj(3)]);
        assert_eq!(hodge_chi(&p3, 1).unwrap(), int(-1));
    }

    #[test]
    fn line_bundles_on_projective_space() {
        // χ(P^n, O(k)) = C(n+k, n).
        for n in 1..=4u32 {
            let x = model(&[Atom::Proj(n)]);
            for k in -6i64..=6 {
                let chi = euler_characteristic(&x, &BundleExpr::Line { factor: 0, twist: k }).unwrap();
                assert_eq!(chi, binomial(&BigInt::from(k + n as i64), n), "n={n} k={k}");
            }
        }
    }

    #[test]
    fn omega_on_projective_space() {
        for n in 1..=5u32 {
            let x = model(&[Atom::Proj(n)]);
            for p in 0..=n {
                let expect = if p % 2 == 0 { int(1) } else { int(-1) };
                assert_eq!(hodge_chi(&x, p).unwrap(), expect);
            }
        }
    }

    #[test]
    fn exterior_power_matches_splitting_principle() {
        for atoms in [vec![Atom::Proj(3)], vec![Atom::Milnor(2, 2)], vec![Atom::Proj(1), Atom::Proj(2)]] {
            let x = model(&atoms);
            let d = x.dimension();
            for i in 0..=d {
                let lambda = BundleExpr::Tangent.exterior_power(i).chern_character(&x).unwrap();
                let rank = binomial(&BigInt::from(d), i);
                let rank = u32::try_from(rank).unwrap();
                let expect = if i == 0 {
                    x.one()
                } else {
                    let classes = exterior_power_chern(d, i, d).unwrap();
                    let images = x.tangent_chern_classes();
                    let mut total = x.one();
                    for c in &classes {
                        total = total.plus(&c.evaluate(&x.one(), &images));
                    }
                    chern_character(&total, rank, d).unwrap()
                };
                assert_eq!(lambda, expect, "{atoms:?} i={i}");
            }
        }
    }

    #[test]
    fn cobord_sf_examples() {
        let r = verify_cobord_sf(&model(&[Atom::Proj(2)]), &[0, 0]).unwrap();
        assert!(r.equal && r.rhs == int(1));
        let r = verify_cobord_sf(&model(&[Atom::Proj(1)]), &[1]).unwrap();
        assert!(r.equal && r.rhs == int(3));
        let h = model(&[Atom::Milnor(2, 2)]);
        let r = verify_cobord_sf(&h, &[0, 0, 1]).unwrap();
        assert!(r.equal);
        // Λ^3 T_H = -K_H.
        assert_eq!(r.rhs, euler_characteristic(&h, &BundleExpr::Tangent.exterior_power(3)).unwrap());
    }

    #[test]
    fn signature_examples() {
        assert_eq!(signature(&model(&[Atom::Proj(2)])).unwrap(), int(1));
        assert_eq!(signature(&model(&[Atom::Proj(1), Atom::Proj(1)])).unwrap(), int(0));
        assert_eq!(signature(&model(&[Atom::Proj(4)])).unwrap(), int(1));
        assert_eq!(signature(&model(&[Atom::Proj(2), Atom::Proj(2)])).unwrap(), int(1));
        assert!(signature(&model(&[Atom::Proj(3)])).is_err());
    }

    #[test]
    fn half_euler_examples() {
        let r = half_euler_check(&model(&[Atom::Proj(3)])).unwrap();
        assert_eq!((r.e.clone(), r.half.clone(), r.rho_value.clone()), (int(4), int(2), int(2)));
        assert!(r.equal);
        let r = half_euler_check(&model(&[Atom::Proj(1)])).unwrap();
        assert_eq!((r.e.clone(), r.half.clone(), r.rho_value.clone()), (int(2), int(1), int(1)));
        assert!(half_euler_check(&model(&[Atom::Milnor(2, 2)])).unwrap().equal);
        assert!(half_euler_check(&model(&[Atom::Proj(2)])).is_err());
    }

    #[test]
    fn twist_on_milnor_factor_is_rejected() {
        let h = model(&[Atom::Milnor(2, 2)]);
        assert!(euler_characteristic(&h, &BundleExpr::Line { factor: 0, twist: 1 }).is_err());
    }

    #[test]
    fn rank_examples() {
        let e = BundleExpr::Tangent.exterior_power(2).sum(BundleExpr::Trivial(3).negate());
        assert_eq!(e.rank(4), int(3));
        assert_eq!(BundleExpr::Tangent.negate().exterior_power(2).rank(2), int(3));
    }
}
