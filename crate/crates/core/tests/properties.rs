use num_bigint::BigInt;
use num_traits::Zero;
use proptest::prelude::*;

use zerocycle::charclass::{segre_substitute, CharClassPoly};
use zerocycle::chow::{Atom, VarietyModel};
use zerocycle::cobordism::{generator_products, generator_vectors, lattice_i, lattice_iprime, pairing};
use zerocycle::exactalg::{IntegerLattice, Rational};
use zerocycle::hrr::{euler_characteristic, euler_number, hodge_chi, BundleExpr};
use zerocycle::symfun::{partitions_of, ChernPolynomial, MultiIndex};

fn rational(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

fn models(max_dim: u32) -> Vec<VarietyModel> {
    (1..=max_dim)
        .flat_map(generator_products)
        .map(|atoms| VarietyModel::new(&atoms).unwrap())
        .collect()
}

/// Random bundles on `x`; twists land on projective factors only.
fn bundle(x: &VarietyModel) -> impl Strategy<Value = BundleExpr> {
    let proj: Vec<usize> = x
        .atoms()
        .iter()
        .enumerate()
        .filter(|(_, a)| matches!(a, Atom::Proj(_)))
        .map(|(i, _)| i)
        .collect();
    let line = if proj.is_empty() {
        Just(BundleExpr::Tangent).boxed()
    } else {
        (proptest::sample::select(proj), -3i64..=3)
            .prop_map(|(factor, twist)| BundleExpr::Line { factor, twist })
            .boxed()
    };
    let leaf = prop_oneof![Just(BundleExpr::Tangent), (0u32..=3).prop_map(BundleExpr::Trivial), line];
    leaf.prop_recursive(3, 12, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(BundleExpr::dual),
            (inner.clone(), 0u32..=3).prop_map(|(e, i)| e.exterior_power(i)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a.tensor(b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a.sum(b)),
            inner.prop_map(BundleExpr::negate),
        ]
    })
}

#[test]
fn euler_characteristics_are_integral() {
    // `euler_characteristic` fails on a non-integral value; 1000 bundles per variety.
    for x in models(3) {
        let mut runner = proptest::test_runner::TestRunner::new(ProptestConfig {
            cases: 1000,
            failure_persistence: None,
            ..ProptestConfig::default()
        });
        runner
            .run(&bundle(&x), |e| {
                prop_assert!(euler_characteristic(&x, &e).is_ok(), "{:?}: {}", x, e);
                Ok(())
            })
            .unwrap();
    }
}

#[test]
fn chi_is_additive_and_unital() {
    for x in models(3) {
        let mut runner = proptest::test_runner::TestRunner::default();
        runner
            .run(&(bundle(&x), bundle(&x)), |(a, b)| {
                let chi = |e: &BundleExpr| euler_characteristic(&x, e).unwrap();
                prop_assert_eq!(chi(&a.clone().sum(b.clone())), chi(&a) + chi(&b));
                prop_assert_eq!(chi(&a.clone().tensor(BundleExpr::Trivial(1))), chi(&a));
                prop_assert_eq!(chi(&a.clone().negate()), -chi(&a));
                Ok(())
            })
            .unwrap();
    }
}

#[test]
fn serre_duality_symmetry() {
    for x in models(5) {
        let d = x.dimension();
        for i in 0..=d {
            let sign = |k: u32| if k.is_multiple_of(2) { BigInt::from(1) } else { BigInt::from(-1) };
            let left = sign(i) * hodge_chi(&x, i).unwrap();
            let right = sign(d - i) * hodge_chi(&x, d - i).unwrap();
            assert_eq!(left, right, "{x:?} i={i}");
        }
    }
}

#[test]
fn euler_number_two_ways() {
    // `euler_number` cross-asserts the Chern number against the Hodge sum.
    for x in models(5) {
        euler_number(&x).unwrap();
    }
}

#[test]
fn hattori_stong_inclusion_in_degree_six() {
    let i6 = lattice_i(6).unwrap();
    for b in 0..=2 {
        assert!(lattice_iprime(6, b).unwrap().is_sublattice_of(&i6).unwrap(), "B={b}");
    }
}

#[test]
fn segre_pairing_is_tangent_evaluation_on_monomials() {
    for d in 1..=5 {
        let products = generator_vectors(d).unwrap();
        for mono in partitions_of(d) {
            let p = CharClassPoly::from_chern_polynomial(d, &ChernPolynomial::monomial(mono.clone(), rational(1, 1)))
                .unwrap();
            let q = segre_substitute(&p);
            for (atoms, v) in &products {
                let x = VarietyModel::new(atoms).unwrap();
                assert_eq!(pairing(&q, v).unwrap(), p.tangent_degree(&x), "c^{mono} on {atoms:?}");
            }
        }
    }
}

fn char_class(d: u32) -> impl Strategy<Value = CharClassPoly> {
    let n = partitions_of(d).len();
    proptest::collection::vec((-9i64..=9, 1i64..=6), n)
        .prop_map(move |v| CharClassPoly::from_vector(d, &v.iter().map(|&(a, b)| rational(a, b)).collect::<Vec<_>>()).unwrap())
}

proptest! {
    #[test]
    fn segre_substitution_is_an_involution(p in (1u32..=6).prop_flat_map(char_class)) {
        prop_assert_eq!(segre_substitute(&segre_substitute(&p)), p);
    }

    #[test]
    fn lattice_from_permuted_rows_is_identical(
        rows in proptest::collection::vec(proptest::collection::vec(-15i64..=15, 4), 1..=6),
        seed in any::<u64>(),
    ) {
        let big: Vec<Vec<BigInt>> = rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
        let mut shuffled = big.clone();
        let k = shuffled.len();
        shuffled.rotate_left((seed as usize) % k);
        if k > 1 {
            let (a, b) = ((seed as usize / 7) % k, (seed as usize / 11) % k);
            if a != b {
                let src = shuffled[b].clone();
                for (x, y) in shuffled[a].iter_mut().zip(src) {
                    *x += y * BigInt::from(3);
                }
            }
        }
        let l1 = IntegerLattice::from_integer_rows(4, &big).unwrap();
        let l2 = IntegerLattice::from_integer_rows(4, &shuffled).unwrap();
        prop_assert_eq!(&l1, &l2);
        for r in &big {
            let v: Vec<Rational> = r.iter().map(|x| Rational::from_integer(x.clone())).collect();
            prop_assert!(l1.contains(&v).unwrap());
        }
    }

    #[test]
    fn multi_index_key_round_trips(parts in proptest::collection::vec(1u32..=7, 0..6)) {
        let i = MultiIndex::from_parts(parts);
        prop_assert_eq!(i.key().parse::<MultiIndex>().unwrap(), i);
    }

    #[test]
    fn dual_pairing_is_integral(rows in proptest::collection::vec(proptest::collection::vec(-9i64..=9, 3), 3..=5)) {
        let big: Vec<Vec<BigInt>> = rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
        let l = IntegerLattice::from_integer_rows(3, &big).unwrap();
        prop_assume!(l.is_full_rank());
        let dual = l.dual().unwrap();
        for a in dual.rational_basis() {
            for b in l.rational_basis() {
                let dot: Rational = a.iter().zip(&b).map(|(x, y)| x * y).sum();
                prop_assert!(dot.is_integer());
            }
        }
        prop_assert!((dual.covolume().unwrap() * l.covolume().unwrap() - Rational::from_integer(1.into())).is_zero());
    }
}
