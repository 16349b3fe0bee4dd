//! Fundamental polynomials, the degree-`d` cobordism lattice `L_d`, its dual
//! `I_d`, the Hattori-Stong lattice `I'_d`, and integrality verdicts for
//! characteristic classes.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::charclass::{segre_substitute, CharClassPoly, SfGenerator};
use crate::chow::{conner_floyd_class, virtual_negative, Atom, VarietyModel};
use crate::error::{Error, Result};
use crate::exactalg::{common_denominator, hnf_with_transform, IntegerLattice, Rational};
use crate::symfun::{partitions_of, MultiIndex};

/// Environment variable overriding the exponent ceiling of
/// [`hattori_stong_verify`].
pub const MAX_B_ENV: &str = "ZEROCYCLE_MAX_B";
pub const DEFAULT_MAX_B: u32 = 8;

/// `Σ_I v_I b^I` with integer coefficients, `|I| = d`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FundamentalVector {
    degree: u32,
    coords: BTreeMap<MultiIndex, BigInt>,
}

impl FundamentalVector {
    /// The class of a point.
    pub fn one() -> Self {
        let mut coords = BTreeMap::new();
        coords.insert(MultiIndex::empty(), BigInt::one());
        FundamentalVector { degree: 0, coords }
    }

    pub fn zero(degree: u32) -> Self {
        FundamentalVector { degree, coords: BTreeMap::new() }
    }

    pub fn from_coordinates(degree: u32, coords: impl IntoIterator<Item = (MultiIndex, BigInt)>) -> Result<Self> {
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
    pub fn from_vector(degree: u32, v: &[BigInt]) -> Result<Self> {
        let parts = partitions_of(degree);
        if parts.len() != v.len() {
            return Err(Error::DimensionMismatch { expected: parts.len(), found: v.len() });
        }
        Self::from_coordinates(degree, parts.into_iter().zip(v.iter().cloned()))
    }

    fn add(&mut self, i: MultiIndex, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let e = self.coords.entry(i.clone()).or_insert_with(BigInt::zero);
        *e += c;
        if e.is_zero() {
            self.coords.remove(&i);
        }
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn coordinate(&self, i: &MultiIndex) -> BigInt {
        self.coords.get(i).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn coordinates(&self) -> impl Iterator<Item = (&MultiIndex, &BigInt)> {
        self.coords.iter()
    }

    pub fn to_vector(&self) -> Vec<BigInt> {
        partitions_of(self.degree).iter().map(|i| self.coordinate(i)).collect()
    }

    pub fn to_rational_vector(&self) -> Vec<Rational> {
        self.to_vector().into_iter().map(Rational::from_integer).collect()
    }

    pub fn scaled(&self, k: &BigInt) -> Self {
        let mut out = Self::zero(self.degree);
        for (i, c) in &self.coords {
            out.add(i.clone(), c * k);
        }
        out
    }

    /// Product in `Z[b_1, b_2, ...]`, where `b^I b^J = b^{I ∪ J}`.
    pub fn times(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.degree + other.degree);
        for (i, a) in &self.coords {
            for (j, b) in &other.coords {
                out.add(i.merge(j), a * b);
            }
        }
        out
    }
}

impl fmt::Display for FundamentalVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coords.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self.coords.iter().map(|(i, c)| format!("{c}*b[{i}]")).collect();
        f.write_str(&parts.join(" + "))
    }
}

impl fmt::Debug for FundamentalVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FundamentalVector(d={}; {})", self.degree, self)
    }
}

/// `b(X) = Σ_{|I| = dim X} deg(c_I(-T_X)) b^I`, computed in the Chow ring of `X`.
pub fn fundamental_polynomial(x: &VarietyModel) -> Result<FundamentalVector> {
    let d = x.dimension();
    let negative = virtual_negative(x.tangent_total())?;
    let mut out = FundamentalVector::zero(d);
    for i in partitions_of(d) {
        let deg = x.degree(&conner_floyd_class(&i, &negative)?);
        if !deg.is_integer() {
            return Err(Error::Internal(format!("deg c_{i}(-T) = {deg} is not an integer")));
        }
        out.add(i, deg.to_integer());
    }
    Ok(out)
}

/// Fundamental vector of a single atom, cached.
pub fn atom_vector(atom: Atom) -> Result<FundamentalVector> {
    static CACHE: OnceLock<Mutex<HashMap<Atom, FundamentalVector>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(v) = cache.lock().expect("atom cache poisoned").get(&atom) {
        return Ok(v.clone());
    }
    let v = fundamental_polynomial(&VarietyModel::new(&[atom])?)?;
    cache.lock().expect("atom cache poisoned").insert(atom, v.clone());
    Ok(v)
}

/// Fundamental vector of a product of atoms, by multiplying atom vectors.
pub fn product_vector(atoms: &[Atom]) -> Result<FundamentalVector> {
    let mut v = FundamentalVector::one();
    for &a in atoms {
        v = v.times(&atom_vector(a)?);
    }
    Ok(v)
}

/// `Σ_I P_I v_I`; the bases `c_I` and `b^I` are dual.
pub fn pairing(p: &CharClassPoly, v: &FundamentalVector) -> Result<Rational> {
    if p.degree() != v.degree() {
        return Err(Error::DegreeMismatch { left: p.degree(), right: v.degree() });
    }
    Ok(v.coordinates()
        .map(|(i, c)| p.coordinate(i) * Rational::from_integer(c.clone()))
        .sum())
}

/// Every multiset of generator atoms whose dimensions add up to `d`, each
/// listed in the order of increasing dimension. `d = 0` gives the empty product.
pub fn generator_products(d: u32) -> Vec<Vec<Atom>> {
    let atoms: Vec<Atom> = (1..=d).flat_map(Atom::all_of_dimension).collect();
    let mut out = Vec::new();
    fn rec(atoms: &[Atom], start: usize, remaining: u32, current: &mut Vec<Atom>, out: &mut Vec<Vec<Atom>>) {
        if remaining == 0 {
            out.push(current.clone());
            return;
        }
        for k in start..atoms.len() {
            let dim = atoms[k].dimension();
            if dim > remaining {
                break;
            }
            current.push(atoms[k]);
            rec(atoms, k, remaining - dim, current, out);
            current.pop();
        }
    }
    rec(&atoms, 0, d, &mut Vec::new(), &mut out);
    out
}

/// Generator products of dimension `d` with their fundamental vectors.
pub fn generator_vectors(d: u32) -> Result<Vec<(Vec<Atom>, FundamentalVector)>> {
    generator_products(d)
        .into_par_iter()
        .map(|atoms| {
            let v = product_vector(&atoms)?;
            Ok((atoms, v))
        })
        .collect()
}

/// `L_d`, spanned by the fundamental vectors of all generator products of
/// dimension `d`; checked to have full rank `p(d)`.
pub fn lattice_l(d: u32) -> Result<Arc<IntegerLattice>> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Arc<IntegerLattice>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(l) = cache.lock().expect("lattice cache poisoned").get(&d) {
        return Ok(l.clone());
    }
    let rows: Vec<Vec<BigInt>> = generator_vectors(d)?.into_iter().map(|(_, v)| v.to_vector()).collect();
    let np = partitions_of(d).len();
    let lattice = IntegerLattice::from_integer_rows(np, &rows)?;
    if !lattice.is_full_rank() {
        return Err(Error::Internal(format!(
            "generator products span rank {} in degree {d}, expected {np}",
            lattice.rank()
        )));
    }
    let lattice = Arc::new(lattice);
    cache.lock().expect("lattice cache poisoned").insert(d, lattice.clone());
    Ok(lattice)
}

/// `I_d = dual(L_d)`: the integral characteristic classes of degree `d` in `c_I` coordinates.
pub fn lattice_i(d: u32) -> Result<IntegerLattice> {
    lattice_l(d)?.dual()
}

/// `I'_d(B)`, spanned by the `S_f` with `f = Π τ_i^{m_i}`, `0 <= m_i <= B`.
pub fn lattice_iprime(d: u32, bound: u32) -> Result<IntegerLattice> {
    let g = SfGenerator::new(d);
    let rows: Vec<Vec<Rational>> = g.enumerate(bound, 0).into_iter().map(|(_, v)| v).collect();
    IntegerLattice::from_rational_rows(partitions_of(d).len(), &rows)
}

/// Reads the exponent ceiling from [`MAX_B_ENV`], falling back to [`DEFAULT_MAX_B`].
pub fn max_b_from_env() -> Result<u32> {
    match std::env::var(MAX_B_ENV) {
        Ok(s) => s
            .trim()
            .parse()
            .map_err(|_| Error::Usage(format!("{MAX_B_ENV} must be a nonnegative integer, got {s:?}"))),
        Err(_) => Ok(DEFAULT_MAX_B),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HattoriStongStatus {
    /// `I'_d` stabilized and equals `I_d`.
    Holds,
    /// `I'_d` stabilized to a lattice different from `I_d`.
    Fails,
    /// No stabilization up to the ceiling.
    Inconclusive,
}

#[derive(Debug, Clone)]
pub struct HattoriStongReport {
    pub degree: u32,
    pub status: HattoriStongStatus,
    /// Smallest `B` with `I'_d(B) = I'_d(B+1)` (and full rank), if reached.
    pub b_stable: Option<u32>,
    pub max_b: u32,
    /// `I'_d(B) ⊆ I_d` held at every `B` examined.
    pub inclusion_at_every_step: bool,
    pub l: IntegerLattice,
    pub i: IntegerLattice,
    pub iprime: IntegerLattice,
}

impl HattoriStongReport {
    pub fn holds(&self) -> bool {
        self.status == HattoriStongStatus::Holds
    }
}

/// Grows `B` from 0 until `I'_d(B) = I'_d(B+1)` with full rank, checking
/// `I'_d(B) ⊆ I_d` along the way, then compares the stable lattice with `I_d`.
pub fn hattori_stong_verify(d: u32, max_b: u32) -> Result<HattoriStongReport> {
    let l = (*lattice_l(d)?).clone();
    let i = l.dual()?;
    let np = partitions_of(d).len();
    let g = SfGenerator::new(d);
    let mut inclusion = true;
    let mut current = IntegerLattice::zero(np);
    let mut b_stable = None;
    for b in 0..=max_b {
        let new_rows: Vec<Vec<Rational>> = g.enumerate(b, b).into_iter().map(|(_, v)| v).collect();
        let next = current.extend(&new_rows)?;
        inclusion &= next.is_sublattice_of(&i)?;
        if b > 0 && next == current && current.is_full_rank() {
            b_stable = Some(b - 1);
            break;
        }
        current = next;
    }
    let status = match b_stable {
        None => HattoriStongStatus::Inconclusive,
        Some(_) if current == i => HattoriStongStatus::Holds,
        Some(_) => HattoriStongStatus::Fails,
    };
    Ok(HattoriStongReport { degree: d, status, b_stable, max_b, inclusion_at_every_step: inclusion, l, i, iprime: current })
}

/// A generator product on which a class takes a non-integral value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub atoms: Vec<Atom>,
    /// `deg P(T_X)`.
    pub value: Rational,
}

#[derive(Debug, Clone)]
pub struct IntegralityVerdict {
    pub integral: bool,
    /// `P(s_1, ..., s_d)`, the class paired against fundamental vectors.
    pub q: CharClassPoly,
    pub witness: Option<Witness>,
}

/// Decides whether `deg P(T_X)` is an integer for every `d`-dimensional
/// variety, by testing `Q = P(s) ∈ I_d`.
pub fn check_integral_class(p: &CharClassPoly) -> Result<IntegralityVerdict> {
    let d = p.degree();
    let q = segre_substitute(p);
    let mut witness = None;
    for (atoms, v) in generator_vectors(d)? {
        let value = pairing(&q, &v)?;
        if !value.is_integer() {
            witness = Some(Witness { atoms, value });
            break;
        }
    }
    let in_dual = lattice_i(d)?.contains(&q.to_vector())?;
    if in_dual != witness.is_none() {
        return Err(Error::Internal("generator test and dual-lattice membership disagree".into()));
    }
    Ok(IntegralityVerdict { integral: in_dual, q, witness })
}

/// Largest `n` with `v / n ∈ L_d`.
pub fn divisibility_bound(v: &FundamentalVector) -> Result<BigInt> {
    lattice_l(v.degree())?.divisibility_factor(&v.to_vector())
}

/// Integer combination `Σ n_f S_f`, each `f` given by its exponents.
pub type SfCombination = Vec<(BigInt, Vec<u32>)>;

/// An integer combination `Σ n_f S_f` equal to `q`, using exponents up to
/// `bound`; `None` when `q ∉ I'_d(B)`. The combination is one valid choice,
/// not a canonical one.
pub fn sf_expression(q: &CharClassPoly, bound: u32) -> Result<Option<SfCombination>> {
    let d = q.degree();
    let np = partitions_of(d).len();
    let g = SfGenerator::new(d);
    // Keep only generators that enlarge the span; there are few of them.
    let mut chosen: Vec<(Vec<u32>, Vec<Rational>)> = Vec::new();
    let mut span = IntegerLattice::zero(np);
    for (m, v) in g.enumerate(bound, 0) {
        if span.contains(&v)? {
            continue;
        }
        span = span.extend(std::slice::from_ref(&v))?;
        chosen.push((m, v));
    }
    let target = q.to_vector();
    if !span.contains(&target)? {
        return Ok(None);
    }
    let den = common_denominator(chosen.iter().flat_map(|(_, v)| v.iter()).chain(target.iter()));
    let scale = Rational::from_integer(den);
    let to_int = |v: &[Rational]| -> Vec<BigInt> { v.iter().map(|x| (x * &scale).to_integer()).collect() };
    let rows: Vec<Vec<BigInt>> = chosen.iter().map(|(_, v)| to_int(v)).collect();
    let (hnf, transform) = hnf_with_transform(&rows, np);
    let coords = solve_in_hnf(&hnf, &to_int(&target)).ok_or_else(|| {
        Error::Internal("target lies in the span but not in its HNF basis".into())
    })?;
    let mut combo = vec![BigInt::zero(); chosen.len()];
    for (c, trow) in coords.iter().zip(&transform) {
        for (acc, t) in combo.iter_mut().zip(trow) {
            *acc += c * t;
        }
    }
    Ok(Some(
        combo
            .into_iter()
            .zip(chosen)
            .filter(|(n, _)| !n.is_zero())
            .map(|(n, (m, _))| (n, m))
            .collect(),
    ))
}

/// Integer coordinates of `w` in the rows of an HNF (no normalization).
fn solve_in_hnf(hnf: &[Vec<BigInt>], w: &[BigInt]) -> Option<Vec<BigInt>> {
    use num_integer::Integer;
    let mut w = w.to_vec();
    let mut coords = Vec::with_capacity(hnf.len());
    for row in hnf {
        let pivot = row.iter().position(|x| !x.is_zero())?;
        let (q, r) = w[pivot].div_rem(&row[pivot]);
        if !r.is_zero() {
            return None;
        }
        for (x, y) in w.iter_mut().zip(row) {
            *x -= &q * y;
        }
        coords.push(q);
    }
    w.iter().all(Zero::is_zero).then_some(coords)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::charclass::{build_sf, CatalogueClass};
    use crate::exactalg::{int, rat, rat_int};

    fn mi(parts: &[u32]) -> MultiIndex {
        MultiIndex::from_parts(parts.iter().copied())
    }

    fn fv(d: u32, terms: &[(&[u32], i64)]) -> FundamentalVector {
        FundamentalVector::from_coordinates(d, terms.iter().map(|(p, c)| (mi(p), int(*c)))).unwrap()
    }

    #[test]
    fn fundamental_polynomial_examples() {
        assert_eq!(fundamental_polynomial(&VarietyModel::point()).unwrap(), FundamentalVector::one());
        assert_eq!(atom_vector(Atom::Proj(1)).unwrap(), fv(1, &[(&[1], -2)]));
        assert_eq!(atom_vector(Atom::Proj(2)).unwrap(), fv(2, &[(&[1, 1], 6), (&[2], -3)]));
    }

    #[test]
    fn products_match_chow_route() {
        for d in 1..=5 {
            for atoms in generator_products(d) {
                let direct = fundamental_polynomial(&VarietyModel::new(&atoms).unwrap()).unwrap();
                assert_eq!(product_vector(&atoms).unwrap(), direct, "{atoms:?}");
            }
        }
    }

    #[test]
    fn pairing_examples() {
        let i0 = mi(&[2, 1]);
        let v = FundamentalVector::from_coordinates(3, [(i0.clone(), int(1))]).unwrap();
        assert_eq!(pairing(&CharClassPoly::basis(&i0), &v).unwrap(), rat_int(1));
        let s1 = build_sf(&[0, 0], 2).unwrap();
        assert_eq!(pairing(&s1, &atom_vector(Atom::Proj(2)).unwrap()).unwrap(), rat_int(1));
        let p = CharClassPoly::from_coordinates(1, [(mi(&[1]), rat(-3, 2))]).unwrap();
        assert_eq!(pairing(&p, &atom_vector(Atom::Proj(1)).unwrap()).unwrap(), rat_int(3));
        assert!(pairing(&s1, &atom_vector(Atom::Proj(1)).unwrap()).is_err());
    }

    #[test]
    fn lattice_examples() {
        assert_eq!(*lattice_l(0).unwrap(), IntegerLattice::standard(1));
        assert_eq!(*lattice_l(1).unwrap(), IntegerLattice::from_integer_rows(1, &[vec![int(2)]]).unwrap());
        let l2 = lattice_l(2).unwrap();
        let expect = IntegerLattice::from_integer_rows(2, &[vec![int(6), int(-3)], vec![int(4), int(0)]]).unwrap();
        assert_eq!(*l2, expect);
        assert_eq!(l2.covolume().unwrap(), rat_int(12));
        for d in 0..=6 {
            assert_eq!(lattice_l(d).unwrap().rank(), partitions_of(d).len());
        }
    }

    #[test]
    fn iprime_examples() {
        assert_eq!(lattice_iprime(0, 0).unwrap(), IntegerLattice::standard(1));
        let half = IntegerLattice::from_rational_rows(1, &[vec![rat(1, 2)]]).unwrap();
        assert_eq!(lattice_iprime(1, 1).unwrap(), half);
        assert_eq!(lattice_i(1).unwrap(), half);
    }

    #[test]
    fn hattori_stong_low_degrees() {
        for d in 0..=3 {
            let r = hattori_stong_verify(d, DEFAULT_MAX_B).unwrap();
            assert!(r.holds(), "d={d}: {r:?}");
            assert!(r.inclusion_at_every_step);
        }
    }

    #[test]
    fn integrality_examples() {
        let v = check_integral_class(&CatalogueClass::HalfEuler { d: 3 }.build().unwrap()).unwrap();
        assert!(v.integral);
        let v = check_integral_class(&CatalogueClass::HalfC1Power { d: 3 }.build().unwrap()).unwrap();
        assert!(v.integral);
        let half_c2 = CharClassPoly::from_coordinates(2, [(mi(&[1, 1]), rat(1, 2))]).unwrap();
        let v = check_integral_class(&half_c2).unwrap();
        assert!(!v.integral);
        let w = v.witness.unwrap();
        assert_eq!(w.atoms, vec![Atom::Proj(2)]);
        assert_eq!(w.value, rat(3, 2));
        // The witness value is deg P(T_X) computed in the Chow ring.
        let x = VarietyModel::new(&w.atoms).unwrap();
        assert_eq!(half_c2.tangent_degree(&x), w.value);
    }

    #[test]
    fn divisibility_examples() {
        assert_eq!(divisibility_bound(&atom_vector(Atom::Proj(1)).unwrap()).unwrap(), int(1));
        let p2 = atom_vector(Atom::Proj(2)).unwrap();
        assert_eq!(divisibility_bound(&p2.scaled(&int(2))).unwrap(), int(2));
        let p1p1 = product_vector(&[Atom::Proj(1), Atom::Proj(1)]).unwrap();
        assert_eq!(p1p1, fv(2, &[(&[1, 1], 4)]));
        // Trial division: the largest n with v/n in L_2.
        let l2 = lattice_l(2).unwrap();
        let trial = (1..=4i64)
            .filter(|n| l2.contains(&p1p1.to_rational_vector().iter().map(|x| x / rat_int(*n)).collect::<Vec<_>>()).unwrap())
            .max()
            .unwrap();
        assert_eq!(divisibility_bound(&p1p1).unwrap(), int(trial));
        let not_member = fv(1, &[(&[1], 1)]);
        assert_eq!(divisibility_bound(&not_member), Err(Error::NotMember));
    }

    #[test]
    fn sf_expression_recombines() {
        for class in [CatalogueClass::HalfEuler { d: 3 }, CatalogueClass::HalfC1Power { d: 3 }, CatalogueClass::Signature { d: 2 }] {
            let p = class.build().unwrap();
            let q = segre_substitute(&p);
            let combo = sf_expression(&q, 3).unwrap().expect("integral class lies in I'");
            let mut sum = CharClassPoly::zero(q.degree());
            for (n, m) in &combo {
                sum = sum.plus(&build_sf(m, q.degree()).unwrap().scaled(&Rational::from_integer(n.clone()))).unwrap();
            }
            assert_eq!(sum, q, "{class:?}");
        }
        let half_c2 = CharClassPoly::from_coordinates(2, [(mi(&[2]), rat(1, 2))]).unwrap();
        assert_eq!(sf_expression(&segre_substitute(&half_c2), 3).unwrap(), None);
    }

    #[test]
    fn segre_pairing_is_tangent_evaluation() {
        for d in 1..=4 {
            for (atoms, v) in generator_vectors(d).unwrap() {
                let x = VarietyModel::new(&atoms).unwrap();
                for i in partitions_of(d) {
                    let p = crate::charclass::c_i_class(&i);
                    assert_eq!(pairing(&segre_substitute(&p), &v).unwrap(), p.tangent_degree(&x));
                }
            }
        }
    }
}
