//! Command-line front end: argument parsing, dispatch to the library, and
//! JSON or table output.
//!
//! Exit status is 0 on success, 1 when a computation rejects its input or
//! fails, and 2 on malformed invocations (unknown flags, unparsable variety or
//! bundle specs).

pub mod json;

use std::path::PathBuf;
use std::str::FromStr;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde::Serialize;

use zerocycle::charclass::{build_sf, catalogue_class, CatalogueClass, CharClassPoly};
use zerocycle::chow::VarietyModel;
use zerocycle::cobordism::{
    check_integral_class, fundamental_polynomial, hattori_stong_verify, lattice_i, lattice_l, max_b_from_env,
    pairing, sf_expression, HattoriStongStatus,
};
use zerocycle::hrr::{euler_characteristic, half_euler_check, signature};
use zerocycle::index::{
    chi_hypersurface, fermat_certificate, index_bound, unit_index_threshold, verify_gcd_lemma,
};
use zerocycle::parse::{format_variety, parse_bundle, parse_variety};
use zerocycle::symfun::MultiIndex;
use zerocycle::Error;

use json::{Int, Table};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Table,
}

#[derive(Debug, Parser)]
#[command(name = "zerocycle", version, about = "Index bounds, characteristic classes and cobordism lattices")]
pub struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value = "json")]
    pub format: Format,

    /// Write the output to this file instead of standard output.
    #[arg(long, global = true, value_name = "FILE")]
    pub out: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Index bound I_{d,N} for a degree-d hypersurface in P^N.
    IndexBound {
        d: u64,
        #[arg(value_name = "N")]
        n: u64,
    },
    /// Euler characteristic chi_{d,n} = 1 - (-1)^n C(d-1, n).
    Chi { d: u64, n: u64 },
    /// Check I_{d,N} = gcd(chi_{d,1}, ..., chi_{d,N}).
    GcdLemma {
        d: u64,
        #[arg(value_name = "N")]
        n: u64,
    },
    /// Smallest N with I_{d,N} = 1.
    Threshold { d: u64 },
    /// Valuation certificate for the twisted Fermat hypersurface.
    Fermat {
        d: u64,
        #[arg(value_name = "N")]
        n: u64,
        e: u64,
    },
    /// Fundamental polynomial of a variety such as `P2xH2,3`.
    FundPoly { variety: String },
    /// Cobordism lattice L_d in the b^I basis.
    Lattice { d: u32 },
    /// Integral characteristic classes I_d = dual(L_d) in the c_I basis.
    DualLattice { d: u32 },
    /// Compare the S_f lattice I'_d with I_d.
    HattoriStong {
        d: u32,
        /// Largest exponent tried (default: $ZEROCYCLE_MAX_B or 8).
        #[arg(long = "max-b", value_name = "B")]
        max_b: Option<u32>,
    },
    /// Decide whether a class has integral degree on every variety.
    ///
    /// Classes: half_euler d, half_c1_power d, half_segre d, steenrod q I,
    /// newton_over_q q d, signature d, sf m_1 ... m_d, c I, or a JSON file
    /// of the form {"degree": d, "coords": {"1+1": {"num": 1, "den": 2}}}.
    CheckClass {
        class: String,
        #[arg(allow_hyphen_values = true)]
        params: Vec<String>,
    },
    /// Pair a class (written `name:p1:p2...` or a JSON file) with b(X).
    Pair { class: String, variety: String },
    /// Euler characteristic of a bundle expression such as `~T^2 + O(1)@0`.
    ChiBundle {
        variety: String,
        #[arg(allow_hyphen_values = true)]
        bundle: String,
    },
    /// Signature of an even-dimensional variety.
    Signature { variety: String },
    /// Compare e(X)/2 with chi(X, rho(T_X)) for odd-dimensional X.
    HalfEuler { variety: String },
}

/// Result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

enum Failure {
    Usage(String),
    Domain(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Usage(_) | Error::Parse { .. } => Failure::Usage(e.to_string()),
            _ => Failure::Domain(e.to_string()),
        }
    }
}

type Res<T> = std::result::Result<T, Failure>;

fn usage<T>(msg: impl Into<String>) -> Res<T> {
    Err(Failure::Usage(msg.into()))
}

fn render<T: Serialize + Table>(value: &T, format: Format) -> Res<String> {
    match format {
        Format::Json => serde_json::to_string(value)
            .map(|s| s + "\n")
            .map_err(|e| Failure::Domain(format!("serialization failed: {e}"))),
        Format::Table => Ok(value.table()),
    }
}

fn variety(spec: &str) -> Res<VarietyModel> {
    Ok(VarietyModel::new(&parse_variety(spec)?)?)
}

fn parse_num<T: FromStr>(what: &str, s: &str) -> Res<T> {
    s.trim().parse().or_else(|_| usage(format!("{what}: expected a nonnegative integer, got {s:?}")))
}

fn parse_index(s: &str) -> Res<MultiIndex> {
    MultiIndex::from_str(s.trim()).or_else(|e| usage(format!("bad partition {s:?}: {e}")))
}

/// Builds a class from a name and its parameters, or reads a JSON file.
fn class_from(name: &str, params: &[String]) -> Res<CharClassPoly> {
    let arity = |n: usize| -> Res<()> {
        if params.len() == n {
            Ok(())
        } else {
            usage(format!("class {name} takes {n} parameter(s), got {}", params.len()))
        }
    };
    let catalogue = match name {
        "half_euler" | "half_c1_power" | "half_segre" | "signature" => {
            arity(1)?;
            let d = parse_num("d", &params[0])?;
            match name {
                "half_euler" => CatalogueClass::HalfEuler { d },
                "half_c1_power" => CatalogueClass::HalfC1Power { d },
                "half_segre" => CatalogueClass::HalfSegre { d },
                _ => CatalogueClass::Signature { d },
            }
        }
        "steenrod" => {
            arity(2)?;
            CatalogueClass::Steenrod { q: parse_num("q", &params[0])?, index: parse_index(&params[1])? }
        }
        "newton_over_q" => {
            arity(2)?;
            CatalogueClass::NewtonOverQ { q: parse_num("q", &params[0])?, d: parse_num("d", &params[1])? }
        }
        "sf" => {
            let m = params.iter().map(|p| parse_num("exponent", p)).collect::<Res<Vec<u32>>>()?;
            return Ok(build_sf(&m, m.len() as u32)?);
        }
        "c" => {
            arity(1)?;
            return Ok(CharClassPoly::basis(&parse_index(&params[0])?));
        }
        _ => {
            if !params.is_empty() {
                return usage(format!("unknown class {name:?}"));
            }
            return class_from_file(name);
        }
    };
    Ok(catalogue_class(&catalogue)?)
}

fn class_from_file(path: &str) -> Res<CharClassPoly> {
    let text = std::fs::read_to_string(path)
        .or_else(|e| usage(format!("{path:?} is neither a class name nor a readable file: {e}")))?;
    let class: json::Class =
        serde_json::from_str(&text).or_else(|e| usage(format!("{path}: not a class file: {e}")))?;
    class.to_poly().map_err(Failure::Usage)
}

/// `name:p1:p2` or a file path.
fn compact_class(spec: &str) -> Res<CharClassPoly> {
    let mut parts = spec.split(':');
    let name = parts.next().unwrap_or_default();
    let params: Vec<String> = parts.map(str::to_string).collect();
    if params.is_empty() && std::path::Path::new(spec).exists() {
        return class_from_file(spec);
    }
    class_from(name, &params)
}

fn lattice_report(d: u32, l: &zerocycle::exactalg::IntegerLattice) -> json::LatticeReport {
    json::LatticeReport { degree: d, partitions: json::partition_lists(d), lattice: l.into() }
}

fn execute(cli: &Cli) -> Res<String> {
    let f = cli.format;
    match &cli.command {
        Command::IndexBound { d, n } => render(&json::Value { value: index_bound(*d, *n)? }, f),
        Command::Chi { d, n } => render(&json::Value { value: Int(chi_hypersurface(*d, *n)?) }, f),
        Command::GcdLemma { d, n } => {
            let value = verify_gcd_lemma(*d, *n)?;
            let chis = (1..=*n).map(|k| chi_hypersurface(*d, k).map(Int)).collect::<Result<_, _>>()?;
            render(&json::GcdLemma { value, bound: index_bound(*d, *n)?, chis }, f)
        }
        Command::Threshold { d } => render(&json::Value { value: unit_index_threshold(*d)? }, f),
        Command::Fermat { d, n, e } => {
            let c = fermat_certificate(*d, *n, *e)?;
            render(&json::Fermat { d: c.d, n: c.n, e: c.e, trace: c.trace, final_m: c.final_m }, f)
        }
        Command::FundPoly { variety: spec } => {
            render(&json::FundPoly::from(&fundamental_polynomial(&variety(spec)?)?), f)
        }
        Command::Lattice { d } => render(&lattice_report(*d, &*lattice_l(*d)?), f),
        Command::DualLattice { d } => render(&lattice_report(*d, &lattice_i(*d)?), f),
        Command::HattoriStong { d, max_b } => {
            let max_b = match max_b {
                Some(b) => *b,
                None => max_b_from_env()?,
            };
            let r = hattori_stong_verify(*d, max_b)?;
            let status = match r.status {
                HattoriStongStatus::Holds => "holds",
                HattoriStongStatus::Fails => "fails",
                HattoriStongStatus::Inconclusive => "inconclusive",
            };
            render(
                &json::HattoriStong {
                    degree: r.degree,
                    status: status.into(),
                    holds: r.holds(),
                    b_stable: r.b_stable,
                    max_b: r.max_b,
                    inclusion_at_every_step: r.inclusion_at_every_step,
                    partitions: json::partition_lists(r.degree),
                    l: (&r.l).into(),
                    i: (&r.i).into(),
                    iprime: (&r.iprime).into(),
                },
                f,
            )
        }
        Command::CheckClass { class, params } => {
            let p = class_from(class, params)?;
            let v = check_integral_class(&p)?;
            let sf = if v.integral { express(&v.q)? } else { None };
            render(
                &json::CheckClass {
                    class: (&p).into(),
                    integral: v.integral,
                    q: (&v.q).into(),
                    witness: v.witness.map(|w| json::WitnessOut {
                        variety: format_variety(&w.atoms),
                        value: (&w.value).into(),
                    }),
                    sf_expression: sf,
                },
                f,
            )
        }
        Command::Pair { class, variety: spec } => {
            let p = compact_class(class)?;
            let b = fundamental_polynomial(&variety(spec)?)?;
            render(&json::Value { value: json::Rat::from(&pairing(&p, &b)?) }, f)
        }
        Command::ChiBundle { variety: spec, bundle } => {
            let x = variety(spec)?;
            let e = parse_bundle(bundle)?;
            let value = euler_characteristic(&x, &e)?;
            render(
                &json::ChiBundle {
                    variety: format_variety(x.atoms()),
                    bundle: e.to_string(),
                    rank: Int(e.rank(x.dimension())),
                    value: Int(value),
                },
                f,
            )
        }
        Command::Signature { variety: spec } => render(&json::Value { value: Int(signature(&variety(spec)?)?) }, f),
        Command::HalfEuler { variety: spec } => {
            let r = half_euler_check(&variety(spec)?)?;
            render(
                &json::HalfEuler { e: Int(r.e), half: Int(r.half), rho_value: Int(r.rho_value), equal: r.equal },
                f,
            )
        }
    }
}

/// Writes `q` as a combination of `S_f`, trying growing exponent bounds.
fn express(q: &CharClassPoly) -> Res<Option<Vec<json::SfTerm>>> {
    let ceiling = max_b_from_env()?;
    for bound in 0..=ceiling {
        if let Some(terms) = sf_expression(q, bound)? {
            return Ok(Some(
                terms
                    .into_iter()
                    .map(|(n, m): (BigInt, Vec<u32>)| json::SfTerm { coefficient: Int(n), exponents: m })
                    .collect(),
            ));
        }
    }
    Ok(None)
}

/// Runs one invocation; `argv[0]` is the program name.
pub fn run<I, S>(argv: I) -> Outcome
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome { code: 2, stdout: String::new(), stderr: text }
            } else {
                Outcome { code: 0, stdout: text, stderr: String::new() }
            };
        }
    };
    match execute(&cli) {
        Ok(text) => match &cli.out {
            Some(path) => match std::fs::write(path, &text) {
                Ok(()) => Outcome { code: 0, stdout: String::new(), stderr: String::new() },
                Err(e) => Outcome { code: 1, stdout: String::new(), stderr: format!("error: {}: {e}\n", path.display()) },
            },
            None => Outcome { code: 0, stdout: text, stderr: String::new() },
        },
        Err(Failure::Usage(msg)) => Outcome { code: 2, stdout: String::new(), stderr: format!("error: {msg}\n") },
        Err(Failure::Domain(msg)) => Outcome { code: 1, stdout: String::new(), stderr: format!("error: {msg}\n") },
    }
}
