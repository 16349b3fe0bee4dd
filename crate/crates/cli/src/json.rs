//! JSON shapes of command outputs. Every type deserializes back from what it
//! serializes.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::str::FromStr;

use num_bigint::BigInt;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use zerocycle::charclass::CharClassPoly;
use zerocycle::cobordism::FundamentalVector;
use zerocycle::exactalg::{IntegerLattice, Rational};
use zerocycle::symfun::{partitions_of, MultiIndex};

/// An arbitrary-size integer written as a bare JSON number.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Int(pub BigInt);

impl Serialize for Int {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let n = serde_json::Number::from_str(&self.0.to_string()).map_err(serde::ser::Error::custom)?;
        n.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Int {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let n = serde_json::Number::deserialize(d)?;
        BigInt::from_str(&n.to_string()).map(Int).map_err(serde::de::Error::custom)
    }
}

impl From<BigInt> for Int {
    fn from(n: BigInt) -> Self {
        Int(n)
    }
}

impl std::fmt::Display for Int {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.0.fmt(f)
    }
}

/// A rational number with `den > 0`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rat {
    pub num: Int,
    pub den: Int,
}

impl From<&Rational> for Rat {
    fn from(r: &Rational) -> Self {
        Rat { num: Int(r.numer().clone()), den: Int(r.denom().clone()) }
    }
}

impl Rat {
    pub fn to_rational(&self) -> Result<Rational, String> {
        if self.den.0 == BigInt::from(0) {
            return Err("rational with zero denominator".into());
        }
        Ok(Rational::new(self.num.0.clone(), self.den.0.clone()))
    }
}

impl std::fmt::Display for Rat {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.den.0 == BigInt::from(1) {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Lattice {
    pub denominator: Int,
    pub basis: Vec<Vec<Int>>,
}

impl From<&IntegerLattice> for Lattice {
    fn from(l: &IntegerLattice) -> Self {
        Lattice {
            denominator: Int(l.denominator().clone()),
            basis: l.basis().iter().map(|r| r.iter().cloned().map(Int).collect()).collect(),
        }
    }
}

/// Partitions of `d` as ascending part lists, in coordinate order.
pub fn partition_lists(d: u32) -> Vec<Vec<u32>> {
    partitions_of(d)
        .into_iter()
        .map(|i| {
            let mut p = i.parts().to_vec();
            p.sort_unstable();
            p
        })
        .collect()
}

/// A characteristic class: coefficients of `c_I`, keyed like `"1+1"`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Class {
    pub degree: u32,
    pub coords: BTreeMap<String, Rat>,
}

impl From<&CharClassPoly> for Class {
    fn from(p: &CharClassPoly) -> Self {
        Class {
            degree: p.degree(),
            coords: p.coordinates().map(|(i, c)| (i.key(), Rat::from(c))).collect(),
        }
    }
}

impl Class {
    pub fn to_poly(&self) -> Result<CharClassPoly, String> {
        let mut coords = Vec::new();
        for (k, v) in &self.coords {
            let i = MultiIndex::from_str(k).map_err(|e| format!("bad partition key {k:?}: {e}"))?;
            coords.push((i, v.to_rational()?));
        }
        CharClassPoly::from_coordinates(self.degree, coords).map_err(|e| e.to_string())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FundPoly {
    pub degree: u32,
    pub coords: BTreeMap<String, Int>,
}

impl From<&FundamentalVector> for FundPoly {
    fn from(v: &FundamentalVector) -> Self {
        FundPoly {
            degree: v.degree(),
            coords: v.coordinates().map(|(i, c)| (i.key(), Int(c.clone()))).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Value<T> {
    pub value: T,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GcdLemma {
    pub value: bool,
    pub bound: u64,
    pub chis: Vec<Int>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fermat {
    pub d: u64,
    #[serde(rename = "N")]
    pub n: u64,
    pub e: u64,
    pub trace: Vec<Vec<u64>>,
    pub final_m: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeReport {
    pub degree: u32,
    pub partitions: Vec<Vec<u32>>,
    pub lattice: Lattice,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HattoriStong {
    pub degree: u32,
    pub status: String,
    pub holds: bool,
    pub b_stable: Option<u32>,
    pub max_b: u32,
    pub inclusion_at_every_step: bool,
    pub partitions: Vec<Vec<u32>>,
    pub l: Lattice,
    pub i: Lattice,
    pub iprime: Lattice,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessOut {
    pub variety: String,
    pub value: Rat,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SfTerm {
    pub coefficient: Int,
    pub exponents: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckClass {
    pub class: Class,
    pub integral: bool,
    /// The class after substituting Segre classes, paired with fundamental vectors.
    pub q: Class,
    pub witness: Option<WitnessOut>,
    /// `q` as an integer combination of the classes `S_f`, when integral.
    pub sf_expression: Option<Vec<SfTerm>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChiBundle {
    pub variety: String,
    pub bundle: String,
    pub rank: Int,
    pub value: Int,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HalfEuler {
    pub e: Int,
    pub half: Int,
    pub rho_value: Int,
    pub equal: bool,
}

/// Plain-text rendering for `--format table`.
pub trait Table {
    fn table(&self) -> String;
}

fn lattice_lines(out: &mut String, name: &str, l: &Lattice) {
    let _ = writeln!(out, "{name}: (1/{}) *", l.denominator);
    for row in &l.basis {
        let cells: Vec<String> = row.iter().map(|x| format!("{x:>6}")).collect();
        let _ = writeln!(out, "  [{}]", cells.join(" "));
    }
}

fn partitions_line(p: &[Vec<u32>]) -> String {
    let keys: Vec<String> = p
        .iter()
        .map(|parts| {
            if parts.is_empty() {
                "0".to_string()
            } else {
                parts.iter().map(u32::to_string).collect::<Vec<_>>().join("+")
            }
        })
        .collect();
    format!("columns: {}\n", keys.join(", "))
}

impl<T: std::fmt::Display> Table for Value<T> {
    fn table(&self) -> String {
        format!("{}\n", self.value)
    }
}

impl Table for GcdLemma {
    fn table(&self) -> String {
        let chis: Vec<String> = self.chis.iter().map(Int::to_string).collect();
        format!("holds: {}\nbound: {}\nchi: {}\n", self.value, self.bound, chis.join(", "))
    }
}

impl Table for Fermat {
    fn table(&self) -> String {
        let mut out = format!("d = {}, N = {}, e = {}\n", self.d, self.n, self.e);
        for (k, a) in self.trace.iter().enumerate() {
            let _ = writeln!(out, "{k:>4}: {a:?}");
        }
        let _ = writeln!(out, "final m = {}", self.final_m);
        out
    }
}

impl Table for FundPoly {
    fn table(&self) -> String {
        let mut out = format!("degree {}\n", self.degree);
        for (k, v) in &self.coords {
            let _ = writeln!(out, "  b[{k}]: {v}");
        }
        out
    }
}

impl Table for Class {
    fn table(&self) -> String {
        let mut out = format!("degree {}\n", self.degree);
        for (k, v) in &self.coords {
            let _ = writeln!(out, "  c[{k}]: {v}");
        }
        out
    }
}

impl Table for LatticeReport {
    fn table(&self) -> String {
        let mut out = format!("degree {}\n", self.degree);
        out.push_str(&partitions_line(&self.partitions));
        lattice_lines(&mut out, "lattice", &self.lattice);
        out
    }
}

impl Table for HattoriStong {
    fn table(&self) -> String {
        let mut out = format!(
            "degree {}: {} (holds: {}, stable at B = {}, ceiling {}, inclusion at every B: {})\n",
            self.degree,
            self.status,
            self.holds,
            self.b_stable.map_or("-".to_string(), |b| b.to_string()),
            self.max_b,
            self.inclusion_at_every_step
        );
        out.push_str(&partitions_line(&self.partitions));
        lattice_lines(&mut out, "L", &self.l);
        lattice_lines(&mut out, "I", &self.i);
        lattice_lines(&mut out, "I'", &self.iprime);
        out
    }
}

impl Table for CheckClass {
    fn table(&self) -> String {
        let mut out = format!("integral: {}\n", self.integral);
        if let Some(w) = &self.witness {
            let _ = writeln!(out, "witness: {} with value {}", w.variety, w.value);
        }
        out.push_str("class:\n");
        out.push_str(&self.class.table());
        if let Some(terms) = &self.sf_expression {
            out.push_str("as a combination of S_f:\n");
            for t in terms {
                let _ = writeln!(out, "  {} * S{:?}", t.coefficient, t.exponents);
            }
        }
        out
    }
}

impl Table for ChiBundle {
    fn table(&self) -> String {
        format!("chi({}, {}) = {} (rank {})\n", self.variety, self.bundle, self.value, self.rank)
    }
}

impl Table for HalfEuler {
    fn table(&self) -> String {
        format!(
            "e = {}, e/2 = {}, chi(rho(T)) = {}, equal: {}\n",
            self.e, self.half, self.rho_value, self.equal
        )
    }
}
