//! The identity suite run on a Leonard system after its axioms.

use serde_json::json;

use crate::field::FieldScalar;
use crate::leonard::d4::{reduced_words, D4Element, D4Word};
use crate::leonard::params::{d4_apply, ParameterArray, SplitPoly};
use crate::leonard::scalars::{
    nu_from_traces, nu_scalars, split_decomposition, split_projectors,
    split_projectors_by_intersection, trace_closed_forms, trace_products,
};
use crate::leonard::system::LeonardSystem;
use crate::linalg::{sum_matrices, DenseMatrix, DenseVector};
use crate::report::VerificationReport;
use crate::subspace::Subspace;

/// Axioms followed by the identity suite.
pub fn verify_system(sys: &LeonardSystem) -> VerificationReport {
    let mut r = sys.verify_axioms();
    r.absorb("", verify_leonard_suite(sys));
    r
}

pub fn verify_leonard_suite(sys: &LeonardSystem) -> VerificationReport {
    let mut r = VerificationReport::new();
    let pa = sys.parameter_array();
    let field = sys.field();
    let d = sys.d();
    let n = sys.dim();

    r.check("parameter_array_round_trip", |p| {
        p.eq_result(json!(null), sys.extract_parameter_array(), Ok(pa.clone()));
    });

    r.check("end_idempotents_as_polynomials", |p| {
        let forms = [
            ("E_0", sys.e(0), SplitPoly::Eta, sys.a(), &pa.theta[0]),
            ("E_d", sys.e(d), SplitPoly::Tau, sys.a(), &pa.theta[d]),
            ("E*_0", sys.e_star(0), SplitPoly::EtaStar, sys.a_star(), &pa.theta_star[0]),
            ("E*_d", sys.e_star(d), SplitPoly::TauStar, sys.a_star(), &pa.theta_star[d]),
        ];
        for (at, e, poly, m, x) in forms {
            let value = pa.eval_at(poly, d, x);
            if let Some(inv) = p.require(json!(at), value.inv()) {
                p.eq(json!(at), e, &pa.eval_matrix(poly, d, m).scale(&inv));
            }
        }
    });

    r.check("polynomial_bases_of_generated_algebras", |p| {
        let span = |ms: &[DenseMatrix]| {
            let vs: Vec<DenseVector> = ms.iter().map(DenseMatrix::vectorize).collect();
            Subspace::span(field, n * n, &vs)
        };
        let polys = |poly: SplitPoly, m: &DenseMatrix| -> Vec<DenseMatrix> {
            (0..=d).map(|i| pa.eval_matrix(poly, i, m)).collect()
        };
        let families = [
            ("A", sys.idempotents().to_vec(), polys(SplitPoly::Tau, sys.a()), polys(SplitPoly::Eta, sys.a())),
            (
                "A*",
                sys.dual_idempotents().to_vec(),
                polys(SplitPoly::TauStar, sys.a_star()),
                polys(SplitPoly::EtaStar, sys.a_star()),
            ),
        ];
        for (at, idem, tau, eta) in families {
            let base = span(&idem);
            p.eq(json!([at, "idempotents"]), &base.dim(), &n);
            for (name, fam) in [("tau", tau), ("eta", eta)] {
                let s = span(&fam);
                p.eq(json!([at, name]), &s.dim(), &n);
                p.holds(json!([at, name, "same_span"]), s.same_as(&base), || json!(null));
            }
        }
    });

    let nu = nu_scalars(pa);
    r.check("nu_sandwich_identities", |p| {
        let Some(nu) = p.require(json!("nu"), nu.clone()) else { return };
        let (e0, es0) = (sys.e(0), sys.e_star(0));
        p.eq(json!("E_0"), &(&(e0 * es0) * e0).scale(&nu.nu), e0);
        p.eq(json!("E*_0"), &(&(es0 * e0) * es0).scale(&nu.nu), es0);
    });

    r.check("split_polynomial_orthogonality", |p| {
        let core = sys.e_star(0) * sys.e(0);
        for i in 0..=d {
            let left = sys.e_star(0) * &pa.eval_matrix(SplitPoly::Tau, i, sys.a());
            for j in 0..=d {
                let right = &pa.eval_matrix(SplitPoly::TauStar, j, sys.a_star()) * sys.e(0);
                let expect = if i == j {
                    core.scale(&pa.varphi_prod(1, i))
                } else {
                    DenseMatrix::zeros(field, n, n)
                };
                p.eq(json!([i, j]), &(&left * &right), &expect);
            }
        }
    });

    r.check("trace_products_closed_forms", |p| {
        for k in 0..=d {
            p.eq_result(json!(k), trace_products(sys, k), trace_closed_forms(pa, k));
        }
    });

    r.check("trace_products_nonzero", |p| {
        for k in 0..=d {
            if let Some(ts) = p.require(json!(k), trace_products(sys, k)) {
                p.holds(json!(k), ts.iter().all(|t| !t.is_zero()), || json!(ts));
            }
        }
    });

    r.check("trace_products_sum_to_one", |p| {
        let traces: Vec<[FieldScalar; 4]> = (0..=d).filter_map(|k| trace_products(sys, k).ok()).collect();
        for slot in 0..4 {
            let total = traces.iter().fold(field.zero(), |acc, t| &acc + &t[slot]);
            p.eq(json!(slot), &total, &field.one());
        }
    });

    r.check("nu_closed_forms_match_traces", |p| {
        p.eq_result(json!(null), nu.clone(), nu_from_traces(sys));
    });

    r.check("nu_of_relatives", |p| {
        let Some(base) = p.require(json!("nu"), nu.clone()) else { return };
        let relatives = [
            ("↓", &base.nu_down),
            ("⇓", &base.nu_double_down),
            ("↓⇓", &base.nu_down_double_down),
        ];
        for (word, expect) in relatives {
            let g: D4Word = word.parse().expect("valid word");
            let rel = sys.relative(g.element());
            let direct = nu_scalars(rel.parameter_array()).map(|s| s.nu);
            p.eq_result(json!([word, "closed_form"]), direct, Ok(expect.clone()));
            p.eq_result(json!([word, "trace"]), nu_from_traces(&rel).map(|s| s.nu), Ok(expect.clone()));
        }
        for g in D4Element::all() {
            let rel = sys.relative(g);
            p.eq_result(
                json!(g.word().label()),
                nu_scalars(rel.parameter_array()),
                nu_from_traces(&rel),
            );
        }
    });

    let projectors = split_projectors(sys);
    r.check("split_projectors_match_intersections", |p| {
        let Some(fs) = p.require(json!("formula"), projectors.clone()) else { return };
        match split_projectors_by_intersection(sys) {
            Some(oracle) => {
                for (i, (f, g)) in fs.iter().zip(&oracle).enumerate() {
                    p.eq(json!(i), f, g);
                }
            }
            None => p.fail(json!({ "at": "intersection", "detail": "not a direct sum" })),
        }
    });

    r.check("split_projectors_orthogonal", |p| {
        let Some(fs) = p.require(json!("formula"), projectors.clone()) else { return };
        for (i, fi) in fs.iter().enumerate() {
            for (j, fj) in fs.iter().enumerate() {
                let expect = if i == j { fi.clone() } else { DenseMatrix::zeros(field, n, n) };
                p.eq(json!([i, j]), &(fi * fj), &expect);
            }
        }
    });

    r.check("split_projectors_sum_to_identity", |p| {
        let Some(fs) = p.require(json!("formula"), projectors.clone()) else { return };
        p.eq(json!(null), &sum_matrices(field, n, &fs), &sys.identity());
    });

    r.check("split_decomposition_is_coordinate", |p| {
        for (i, u) in split_decomposition(sys).iter().enumerate() {
            let expect = Subspace::span(field, n, &[DenseVector::unit(field, n, i)]);
            p.holds(json!(i), u.same_as(&expect), || json!(u.basis()));
        }
    });

    bilinear_form_checks(&mut r, sys);

    r.check("relatives_parameter_arrays", |p| {
        for w in reduced_words() {
            let rel = sys.relative(w.element());
            p.eq_result(json!(w.label()), rel.extract_parameter_array(), Ok(d4_apply(pa, &w)));
        }
    });

    r.check("relatives_pass_axioms", |p| {
        for w in reduced_words() {
            let rep = sys.relative(w.element()).verify_axioms();
            let failed: Vec<&str> = rep.failures().map(|c| c.name.as_str()).collect();
            p.holds(json!(w.label()), failed.is_empty(), || json!(failed));
        }
    });

    let (relations, orbit) = d4_checks(pa);
    r.absorb("", relations);
    r.absorb("", orbit);

    r.check("conjugation_invariance", |p| {
        // K = reversal times the all-ones upper triangle: invertible, with no
        // special relation to the split basis.
        let k = DenseMatrix::from_fn(field, n, n, |i, j| {
            if n - 1 - i <= j {
                field.from_int((i + j + 1) as i64)
            } else {
                field.zero()
            }
        });
        let Some(copy) = p.require(json!("conjugate"), sys.conjugate(&k)) else { return };
        p.eq_result(json!("extract"), copy.extract_parameter_array(), Ok(pa.clone()));
    });

    r
}

fn bilinear_form_checks(r: &mut VerificationReport, sys: &LeonardSystem) {
    let form = sys.form();
    let gens = [("A", sys.a()), ("A*", sys.a_star())];
    r.check("bilinear_form_symmetric", |p| {
        if let Some(f) = p.require(json!("form"), form.clone()) {
            p.holds(json!(null), f.gram.is_symmetric(), || json!(f.gram));
        }
    });
    r.check("bilinear_form_intertwines", |p| {
        if let Some(f) = p.require(json!("form"), form.clone()) {
            for (at, m) in gens {
                p.eq(json!(at), &(&m.transpose() * &f.gram), &(&f.gram * m));
            }
        }
    });
    r.check("bilinear_form_normalized", |p| {
        if let Some(f) = p.require(json!("form"), form.clone()) {
            let row = f.gram.row(0);
            let lead = row.first_nonzero().map(|k| row[k].clone());
            p.eq(json!(null), &lead, &Some(sys.field().one()));
        }
    });
    r.check("dagger_fixes_generators", |p| {
        if let Some(f) = p.require(json!("form"), form.clone()) {
            p.eq(json!("I"), &f.dagger(&sys.identity()), &sys.identity());
            for (at, m) in gens {
                p.eq(json!(at), &f.dagger(m), m);
            }
        }
    });
    r.check("dagger_fixes_idempotents", |p| {
        if let Some(f) = p.require(json!("form"), form.clone()) {
            for i in 0..=sys.d() {
                p.eq(json!(["E", i]), &f.dagger(sys.e(i)), sys.e(i));
                p.eq(json!(["E*", i]), &f.dagger(sys.e_star(i)), sys.e_star(i));
            }
        }
    });
    r.check("dagger_antiautomorphism", |p| {
        if let Some(f) = p.require(json!("form"), form.clone()) {
            let x = sys.a() * sys.a_star();
            let y = &(sys.e_star(0) * sys.a()) + sys.e(sys.d());
            p.eq(json!("involution"), &f.dagger(&f.dagger(&x)), &x);
            p.eq(json!("reverses"), &f.dagger(&(&x * &y)), &(&f.dagger(&y) * &f.dagger(&x)));
            p.eq(json!("A A*"), &f.dagger(&x), &(sys.a_star() * sys.a()));
        }
    });
}

/// Group relations as identities on parameter arrays, and the orbit size.
pub fn d4_checks(pa: &ParameterArray) -> (VerificationReport, VerificationReport) {
    let mut relations = VerificationReport::new();
    let apply = |w: &str| d4_apply(pa, &w.parse().expect("valid word"));
    relations.check("d4_relations", |p| {
        for w in ["**", "↓↓", "⇓⇓"] {
            p.eq(json!(w), &apply(w), pa);
        }
        for (lhs, rhs) in [("⇓*", "*↓"), ("↓*", "*⇓"), ("↓⇓", "⇓↓")] {
            p.eq(json!([lhs, rhs]), &apply(lhs), &apply(rhs));
        }
    });
    let mut orbit = VerificationReport::new();
    orbit.check("d4_orbit_size_divides_eight", |p| {
        let mut images: Vec<String> = reduced_words().iter().map(|w| apply(&w.to_string()).to_json_line()).collect();
        images.sort();
        images.dedup();
        p.holds(json!(images.len()), 8 % images.len() == 0, || json!(images.len()));
    });
    (relations, orbit)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldSpec;
    use crate::leonard::system::{certify, complete_parameter_array};

    const Q: FieldSpec = FieldSpec::Rational;

    fn ints(xs: &[i64]) -> Vec<FieldScalar> {
        xs.iter().map(|&x| Q.from_int(x)).collect()
    }

    #[test]
    fn suite_passes_on_small_systems() {
        let arrays = [
            ParameterArray::from_ints(Q, &[4], &[-2], &[], &[]).unwrap(),
            ParameterArray::from_ints(Q, &[1, -1], &[1, -1], &[2], &[6]).unwrap(),
            complete_parameter_array(Q, ints(&[0, 1, 3]), ints(&[2, -1, 5]), ints(&[3, -12])).unwrap(),
        ];
        for pa in arrays {
            let sys = certify(&pa).unwrap();
            let report = verify_system(&sys);
            let failed: Vec<_> = report.failures().collect();
            assert!(failed.is_empty(), "{}: {failed:?}", pa.to_json_line());
        }
    }

    #[test]
    fn suite_flags_uncertified_claims() {
        let wrong = ParameterArray::from_ints(Q, &[1, -1], &[1, -1], &[2], &[-2]).unwrap();
        let sys = LeonardSystem::build_from_parameter_array(&wrong).unwrap();
        let report = verify_system(&sys);
        assert_eq!(report.passed("parameter_array_round_trip"), Some(false));
        assert_eq!(report.passed("nu_closed_forms_match_traces"), Some(false));
        assert_eq!(report.passed("idempotents_orthogonal"), Some(true));
    }
}
