use std::sync::OnceLock;

use proptest::prelude::*;

use leonard::duality::bases::verify_scale_robustness;
use leonard::duality::{build_t_self_dual, is_self_dual, verify_duality_suite};
use leonard::field::canonicalize;
use leonard::leonard::{certify, d4_apply, D4Gen};
use leonard::linalg::DenseMatrix;
use leonard::search::{enumerate_prime_field, random_rational, SearchConfig};
use leonard::{D4Word, FieldScalar, FieldSpec, LeonardSystem, ParameterArray};

fn field() -> impl Strategy<Value = FieldSpec> {
    prop_oneof![
        Just(FieldSpec::Rational),
        Just(FieldSpec::prime(7).unwrap()),
        Just(FieldSpec::prime(13).unwrap()),
    ]
}

fn scalar(f: FieldSpec) -> impl Strategy<Value = FieldScalar> {
    (-30i64..=30, 1i64..=12).prop_map(move |(n, d)| match f {
        FieldSpec::Rational => f.from_ratio(n, d).unwrap(),
        FieldSpec::Prime(_) => f.from_int(n),
    })
}

fn triple() -> impl Strategy<Value = (FieldScalar, FieldScalar, FieldScalar)> {
    field().prop_flat_map(|f| (scalar(f), scalar(f), scalar(f)))
}

fn word() -> impl Strategy<Value = D4Word> {
    prop::collection::vec(prop_oneof![Just(D4Gen::Star), Just(D4Gen::Down), Just(D4Gen::DoubleDown)], 0..10)
        .prop_map(D4Word::new)
}

fn gf7_arrays(d: usize, self_dual_only: bool) -> &'static [ParameterArray] {
    static CACHE: OnceLock<Vec<Vec<ParameterArray>>> = OnceLock::new();
    let all = CACHE.get_or_init(|| {
        let gf7 = FieldSpec::prime(7).unwrap();
        [(1, false), (2, false), (1, true), (2, true)]
            .into_iter()
            .map(|(d, self_dual_only)| {
                let cfg = SearchConfig { self_dual_only, limit: 2000, ..SearchConfig::new(gf7, d) };
                enumerate_prime_field(&cfg).unwrap()
            })
            .collect()
    });
    &all[(d - 1) + 2 * usize::from(self_dual_only)]
}

/// A certified array: a seeded rational draw with `d ≤ 3`, or an entry of
/// the GF(7) enumeration with `d ≤ 2`.
fn certified_array(self_dual_only: bool) -> impl Strategy<Value = ParameterArray> {
    prop_oneof![
        (1usize..=3, any::<u64>()).prop_map(move |(d, seed)| {
            let cfg = SearchConfig { self_dual_only, limit: 1, seed, ..SearchConfig::new(FieldSpec::Rational, d) };
            random_rational(&cfg).unwrap().remove(0)
        }),
        (1usize..=2, any::<prop::sample::Index>()).prop_map(move |(d, i)| {
            let found = gf7_arrays(d, self_dual_only);
            found[i.index(found.len())].clone()
        }),
    ]
}

fn matrix(f: FieldSpec, rows: usize, cols: usize) -> impl Strategy<Value = DenseMatrix> {
    prop::collection::vec(-3i64..=3, rows * cols)
        .prop_map(move |xs| DenseMatrix::from_fn(f, rows, cols, |i, j| f.from_int(xs[i * cols + j])))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_axioms((a, b, c) in triple()) {
        let f = a.field();
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&a - &a, f.zero());
        prop_assert_eq!(&a + &(-&a), f.zero());
        if !a.is_zero() {
            prop_assert_eq!(&a * &a.inv().unwrap(), f.one());
            prop_assert_eq!(b.checked_div(&a).unwrap(), &b * &a.inv().unwrap());
        } else {
            prop_assert!(a.inv().is_err());
        }
    }

    #[test]
    fn scalars_round_trip_through_json((a, _, _) in triple()) {
        prop_assert_eq!(a.field().parse_scalar(&a.to_json()).unwrap(), a);
    }

    #[test]
    fn canonical_form_is_unique(n in -1000i64..=1000, d in 1i64..=1000, k in -20i64..=20) {
        prop_assume!(k != 0);
        let q = canonicalize(n.into(), d.into()).unwrap();
        prop_assert_eq!(canonicalize((n * k).into(), (d * k).into()).unwrap(), q.clone());
        let FieldScalar::Rational(r) = &q else { unreachable!() };
        prop_assert!(*r.denom() > 0.into());
        let text = q.to_json();
        prop_assert_eq!(FieldSpec::Rational.parse_scalar(&text).unwrap(), q);
    }

    #[test]
    fn rref_facts(m in (field(), 1usize..5, 1usize..5).prop_flat_map(|(f, r, c)| matrix(f, r, c))) {
        let cols = m.cols();
        let (reduced, pivots) = m.rref();
        prop_assert_eq!(reduced.rref().0, reduced.clone());
        prop_assert_eq!(m.rank(), m.transpose().rank());
        prop_assert_eq!(pivots.len() + m.null_space().len(), cols);
        for v in m.null_space() {
            prop_assert!(m.mul_vec(&v).is_zero());
        }
    }

    #[test]
    fn words_act_through_the_group(pa in certified_array(false), w1 in word(), w2 in word()) {
        prop_assert_eq!(d4_apply(&pa, &w1), d4_apply(&pa, &w1.reduced()));
        prop_assert_eq!(d4_apply(&d4_apply(&pa, &w1), &w2), d4_apply(&pa, &w1.then(&w2)));
        let parsed: D4Word = w1.to_string().parse().unwrap();
        prop_assert_eq!(parsed, w1.clone());
        prop_assert!(certify(&d4_apply(&pa, &w1)).is_ok());
    }

    #[test]
    fn generator_relations(pa in certified_array(false)) {
        for rel in ["**", "dd", "DD", "*d*D", "D*d*", "dDdD"] {
            let w: D4Word = rel.parse().unwrap();
            prop_assert_eq!(d4_apply(&pa, &w), pa.clone(), "{}", rel);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn anchor_rescaling_changes_nothing(pa in certified_array(true), ks in prop::collection::vec(1i64..=6, 4)) {
        let f = pa.field;
        let sys = certify(&pa).unwrap();
        prop_assert!(is_self_dual(&pa).unwrap());
        let bundle = build_t_self_dual(&sys).unwrap();
        prop_assert!(verify_duality_suite(&sys, &bundle).all_pass());
        let factors = [std::array::from_fn(|i| f.from_int(ks[i]))];
        let report = verify_scale_robustness(&sys, Some(&bundle), &factors);
        prop_assert!(report.all_pass(), "{:?}", report.failures().collect::<Vec<_>>());
    }

    #[test]
    fn conjugation_preserves_the_array(pa in certified_array(false), entries in prop::collection::vec(-2i64..=2, 16)) {
        let f = pa.field;
        let sys = certify(&pa).unwrap();
        let n = sys.dim();
        let lower = DenseMatrix::from_fn(f, n, n, |i, j| match i.cmp(&j) {
            std::cmp::Ordering::Equal => f.one(),
            std::cmp::Ordering::Greater => f.from_int(entries[i * 4 + j]),
            std::cmp::Ordering::Less => f.zero(),
        });
        let k = &lower * &lower.transpose();
        prop_assume!(k.inverse().is_ok());
        let copy: LeonardSystem = sys.conjugate(&k).unwrap();
        prop_assert!(copy.verify_axioms().all_pass());
        prop_assert_eq!(copy.extract_parameter_array().unwrap(), pa);
    }
}
