use serde::Serialize;
use serde_json::json;

use crate::duality::bases::AnchorVectors;
use crate::error::{Error, Result};
use crate::field::FieldScalar;
use crate::leonard::{nu_scalars, D4Element, LeonardSystem, ParameterArray, SplitPoly};
use crate::linalg::{sum_matrices, DenseMatrix};
use crate::report::VerificationReport;

/// Self-dual iff the eigenvalues and dual eigenvalues agree in order. A
/// self-dual array must also have a palindromic second split sequence;
/// violating that is reported as an inconsistency.
pub fn is_self_dual(pa: &ParameterArray) -> Result<bool> {
    if pa.theta != pa.theta_star {
        return Ok(false);
    }
    let d = pa.d;
    if (1..=d).any(|i| pa.phi(i) != pa.phi(d - i + 1)) {
        return Err(Error::InconsistentArray);
    }
    Ok(true)
}

/// The duality operator with its scalars.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DualityBundle {
    #[serde(rename = "T")]
    pub t: DenseMatrix,
    pub lambda: FieldScalar,
    pub alpha: FieldScalar,
    pub beta: FieldScalar,
    pub alpha_star: FieldScalar,
    pub beta_star: FieldScalar,
}

fn poly(sys: &LeonardSystem, p: SplitPoly, i: usize) -> DenseMatrix {
    let m = if p.is_star() { sys.a_star() } else { sys.a() };
    sys.parameter_array().eval_matrix(p, i, m)
}

/// `T_i = η_{d-i}(A) E*_0 E_d τ*_i(A*)`, the summands of `T`.
pub fn t_summands(sys: &LeonardSystem) -> Vec<DenseMatrix> {
    let d = sys.d();
    let core = sys.e_star(0) * sys.e(d);
    (0..=d)
        .map(|i| &(&poly(sys, SplitPoly::Eta, d - i) * &core) * &poly(sys, SplitPoly::TauStar, i))
        .collect()
}

/// `T = Σ_i η_{d-i}(A) E*_0 E_d τ*_i(A*)`, defined for every Leonard system.
pub fn build_t_matrix(sys: &LeonardSystem) -> DenseMatrix {
    sum_matrices(sys.field(), sys.dim(), &t_summands(sys))
}

/// `T` written without idempotents:
/// `Σ_i η_{d-i}(A) η*_d(A*) τ_d(A) τ*_i(A*) / (τ_d(θ_d) η*_d(θ*_0))`.
pub fn t_polynomial_form(sys: &LeonardSystem) -> Result<DenseMatrix> {
    let pa = sys.parameter_array();
    let d = pa.d;
    let denom = &pa.tau_d_at_theta_d() * &pa.eta_star_d_at_theta_star_0();
    let scale = denom.inv()?;
    let middle = &poly(sys, SplitPoly::EtaStar, d) * &poly(sys, SplitPoly::Tau, d);
    let terms: Vec<DenseMatrix> = (0..=d)
        .map(|i| {
            (&(&poly(sys, SplitPoly::Eta, d - i) * &middle) * &poly(sys, SplitPoly::TauStar, i)).scale(&scale)
        })
        .collect();
    Ok(sum_matrices(sys.field(), sys.dim(), &terms))
}

/// `T* = Σ_i η*_{d-i}(A*) E_0 E*_d τ_i(A)`.
pub fn t_star_matrix(sys: &LeonardSystem) -> DenseMatrix {
    let d = sys.d();
    let core = sys.e(0) * sys.e_star(d);
    let terms: Vec<DenseMatrix> = (0..=d)
        .map(|i| &(&poly(sys, SplitPoly::EtaStar, d - i) * &core) * &poly(sys, SplitPoly::Tau, i))
        .collect();
    sum_matrices(sys.field(), sys.dim(), &terms)
}

/// `T† = Σ_i τ*_i(A*) E_d E*_0 η_{d-i}(A)`.
pub fn t_dagger_sum(sys: &LeonardSystem) -> DenseMatrix {
    let d = sys.d();
    let core = sys.e(d) * sys.e_star(0);
    let terms: Vec<DenseMatrix> = (0..=d)
        .map(|i| &(&poly(sys, SplitPoly::TauStar, i) * &core) * &poly(sys, SplitPoly::Eta, d - i))
        .collect();
    sum_matrices(sys.field(), sys.dim(), &terms)
}

/// `(T*)† = Σ_i τ_i(A) E*_d E_0 η*_{d-i}(A*)`.
pub fn t_star_dagger_sum(sys: &LeonardSystem) -> DenseMatrix {
    let d = sys.d();
    let core = sys.e_star(d) * sys.e(0);
    let terms: Vec<DenseMatrix> = (0..=d)
        .map(|i| &(&poly(sys, SplitPoly::Tau, i) * &core) * &poly(sys, SplitPoly::EtaStar, d - i))
        .collect();
    sum_matrices(sys.field(), sys.dim(), &terms)
}

/// `λ = (ν⇓)^{-2} ϕ_1⋯ϕ_d`.
pub fn lambda(pa: &ParameterArray) -> Result<FieldScalar> {
    let nu = nu_scalars(pa)?.nu_double_down;
    pa.phi_prod(1, pa.d).checked_div(&nu.square())
}

/// The scalars by which `T` carries each anchor vector to its dual partner:
/// `(α, β, α*, β*)`.
pub fn anchor_scalars(pa: &ParameterArray, anchors: &AnchorVectors) -> Result<[FieldScalar; 4]> {
    let s = &anchors.scalars;
    let varphi = pa.varphi_prod(1, pa.d);
    let over_tau = varphi.checked_div(&pa.tau_d_at_theta_d())?;
    let over_eta = varphi.checked_div(&pa.eta_d_at_theta_0())?;
    Ok([
        &over_tau * &s.v0_vs0.checked_div(&s.vs0_vs0)?,
        &over_eta * &s.vd_vsd.checked_div(&s.vsd_vsd)?,
        &over_tau * &s.v0_vs0.checked_div(&s.v0_v0)?,
        &over_eta * &s.vd_vsd.checked_div(&s.vd_vd)?,
    ])
}

/// Builds `T`, `λ` and `α, β, α*, β*` from the canonical anchor vectors.
/// Works for any certified system; the invariants only hold when it is
/// self-dual.
pub fn build_t(sys: &LeonardSystem) -> Result<DualityBundle> {
    let pa = sys.parameter_array();
    let anchors = AnchorVectors::choose(sys)?;
    let [alpha, beta, alpha_star, beta_star] = anchor_scalars(pa, &anchors)?;
    Ok(DualityBundle {
        t: build_t_matrix(sys),
        lambda: lambda(pa)?,
        alpha,
        beta,
        alpha_star,
        beta_star,
    })
}

/// Like [`build_t`], but refuses systems that are not self-dual.
pub fn build_t_self_dual(sys: &LeonardSystem) -> Result<DualityBundle> {
    if !is_self_dual(sys.parameter_array())? {
        return Err(Error::NotSelfDual);
    }
    build_t(sys)
}

/// Identities involving `T` that hold for every Leonard system.
pub fn verify_t_general(sys: &LeonardSystem, t: &DenseMatrix) -> VerificationReport {
    let mut r = VerificationReport::new();
    let pa = sys.parameter_array();
    let field = sys.field();
    let d = pa.d;
    let summands = t_summands(sys);
    let t_star = t_star_matrix(sys);

    r.check("t_polynomial_form", |p| {
        p.eq_result(json!(null), t_polynomial_form(sys), Ok(t.clone()));
    });
    r.check("t_star_is_t_of_dual", |p| {
        let dual = sys.relative(D4Element { star: true, rev_e: false, rev_e_star: false });
        p.eq(json!(null), &build_t_matrix(&dual), &t_star);
    });
    r.check("t_dagger_sums", |p| {
        let Some(form) = p.require(json!("form"), sys.form()) else { return };
        p.eq(json!("T"), &form.dagger(t), &t_dagger_sum(sys));
        p.eq(json!("T*"), &form.dagger(&t_star), &t_star_dagger_sum(sys));
    });
    r.check("t_summand_recurrence", |p| {
        let (a, a_star) = (sys.a(), sys.a_star());
        let zero = DenseMatrix::zeros(field, d + 1, d + 1);
        p.eq(json!("first"), &(&(a * &summands[0]) - &summands[0].scale(&pa.theta[0])), &zero);
        for i in 1..=d {
            let lhs = &(a * &summands[i]) - &summands[i].scale(&pa.theta[i]);
            let rhs = &(&summands[i - 1] * a_star) - &summands[i - 1].scale(&pa.theta_star[i - 1]);
            p.eq(json!(i), &lhs, &rhs);
        }
        p.eq(json!("last"), &(&(&summands[d] * a_star) - &summands[d].scale(&pa.theta_star[d])), &zero);
    });
    r.check("t_commutator_expansion", |p| {
        let lhs = &(sys.a() * t) - &(t * sys.a_star());
        let terms: Vec<DenseMatrix> = summands
            .iter()
            .enumerate()
            .map(|(i, ti)| ti.scale(&(&pa.theta[i] - &pa.theta_star[i])))
            .collect();
        p.eq(json!(null), &lhs, &sum_matrices(field, d + 1, &terms));
    });
    r.check("t_square_expansion", |p| {
        let Some(nu) = p.require(json!("nu"), nu_scalars(pa)) else { return };
        let core = sys.e_star(0) * sys.e(d);
        let mut terms = Vec::new();
        for j in 0..=d {
            let Some(c) = p.require(json!(j), pa.phi_prod(1, d).checked_div(&(&nu.nu_double_down * &pa.phi_prod(d - j + 1, d))))
            else {
                return;
            };
            terms.push((&(&poly(sys, SplitPoly::Eta, j) * &core) * &poly(sys, SplitPoly::TauStar, j)).scale(&c));
        }
        p.eq(json!(null), &(t * t), &sum_matrices(field, d + 1, &terms));
    });

    product_formulas(&mut r, sys, t, &t_star);
    r
}

fn product_formulas(r: &mut VerificationReport, sys: &LeonardSystem, t: &DenseMatrix, t_star: &DenseMatrix) {
    let pa = sys.parameter_array();
    let d = pa.d;
    let varphi = pa.varphi_prod(1, d);
    let (e0, es0) = (sys.e(0), sys.e_star(0));
    let e0_es0 = e0 * es0;
    let es0_e0 = es0 * e0;
    let ratio = |num: FieldScalar, den: FieldScalar| num.checked_div(&den);
    let c_t_es0 = ratio(
        &pa.eta_d_at_theta_0() * &varphi,
        &pa.tau_d_at_theta_d() * &pa.eta_star_d_at_theta_star_0(),
    );
    let c_ts_e0 = ratio(
        &pa.eta_star_d_at_theta_star_0() * &varphi,
        &pa.tau_star_d_at_theta_star_d() * &pa.eta_d_at_theta_0(),
    );
    let c_t_e0 = ratio(varphi.clone(), pa.tau_d_at_theta_d());
    let c_ts_es0 = ratio(varphi.clone(), pa.tau_star_d_at_theta_star_d());

    let form = sys.form();
    let t_dagger = form.clone().map(|f| f.dagger(t));
    let t_star_dagger = form.map(|f| f.dagger(t_star));
    let rows: [(&str, Result<DenseMatrix>, &Result<FieldScalar>, &DenseMatrix); 8] = [
        ("t_times_e_star_0", Ok(t * es0), &c_t_es0, &e0_es0),
        ("t_star_times_e_0", Ok(t_star * e0), &c_ts_e0, &es0_e0),
        ("e_star_0_times_t_dagger", t_dagger.clone().map(|x| es0 * &x), &c_t_es0, &es0_e0),
        ("e_0_times_t_star_dagger", t_star_dagger.clone().map(|x| e0 * &x), &c_ts_e0, &e0_es0),
        ("t_times_e_0", Ok(t * e0), &c_t_e0, &es0_e0),
        ("t_star_times_e_star_0", Ok(t_star * es0), &c_ts_es0, &e0_es0),
        ("e_0_times_t_dagger", t_dagger.map(|x| e0 * &x), &c_t_e0, &e0_es0),
        ("e_star_0_times_t_star_dagger", t_star_dagger.map(|x| es0 * &x), &c_ts_es0, &es0_e0),
    ];
    for (name, lhs, coeff, base) in rows {
        r.check(name, |p| {
            let rhs = coeff.clone().map(|c| base.scale(&c));
            p.eq_result(json!(null), lhs, rhs);
        });
    }
}

/// Identities that characterize `T` as the duality of a self-dual system.
pub fn verify_t_self_dual(sys: &LeonardSystem, bundle: &DualityBundle) -> VerificationReport {
    let mut r = VerificationReport::new();
    let pa = sys.parameter_array();
    let field = sys.field();
    let n = sys.dim();
    let t = &bundle.t;

    r.check("parameter_array_self_dual", |p| {
        p.eq(json!("theta"), &pa.theta, &pa.theta_star);
        let d = pa.d;
        for i in 1..=d {
            p.eq(json!(["phi", i]), pa.phi(i), pa.phi(d - i + 1));
        }
    });
    r.check("lambda_closed_form", |p| {
        p.eq_result(json!(null), lambda(pa), Ok(bundle.lambda.clone()));
        p.holds(json!("nonzero"), !bundle.lambda.is_zero(), || json!(bundle.lambda));
    });
    r.check("t_squared_is_lambda", |p| {
        p.eq(json!(null), &(t * t), &sys.identity().scale(&bundle.lambda));
    });
    r.check("t_invertible", |p| {
        p.holds(json!(null), t.is_invertible(), || json!(t));
    });
    r.check("a_t_equals_t_a_star", |p| {
        p.eq(json!(null), &(sys.a() * t), &(t * sys.a_star()));
    });
    r.check("a_star_t_equals_t_a", |p| {
        p.eq(json!(null), &(sys.a_star() * t), &(t * sys.a()));
    });
    r.check("idempotents_intertwined", |p| {
        for i in 0..n {
            p.eq(json!(["E", i]), &(sys.e(i) * t), &(t * sys.e_star(i)));
            p.eq(json!(["E*", i]), &(sys.e_star(i) * t), &(t * sys.e(i)));
        }
    });
    r.check("t_equals_t_star", |p| {
        p.eq(json!(null), t, &t_star_matrix(sys));
    });
    r.check("t_equals_t_dagger", |p| {
        p.eq_result(json!(null), sys.dagger(t), Ok(t.clone()));
    });
    r.check("t_equals_t_star_dagger", |p| {
        p.eq_result(json!(null), sys.dagger(&t_star_matrix(sys)), Ok(t.clone()));
    });
    r.check("conjugation_by_t_is_involutive_duality", |p| {
        let Some(t_inv) = p.require(json!("inverse"), t.inverse()) else { return };
        let conj = |x: &DenseMatrix| &(t * x) * &t_inv;
        p.eq(json!("A"), &conj(sys.a()), sys.a_star());
        p.eq(json!("A*"), &conj(sys.a_star()), sys.a());
        for i in 0..n {
            p.eq(json!(["E", i]), &conj(sys.e(i)), sys.e_star(i));
        }
        let probe = DenseMatrix::from_fn(field, n, n, |i, j| field.from_int((3 * i + j * j + 1) as i64));
        p.eq(json!("twice"), &conj(&conj(&probe)), &probe);
    });
    r
}

/// The general `T` identities followed by the self-dual ones.
pub fn verify_duality_suite(sys: &LeonardSystem, bundle: &DualityBundle) -> VerificationReport {
    let mut r = verify_t_general(sys, &bundle.t);
    r.absorb("", verify_t_self_dual(sys, bundle));
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldSpec;
    use crate::leonard::{certify, complete_parameter_array};
    use crate::search::complete_from_first;

    const Q: FieldSpec = FieldSpec::Rational;

    fn ints(xs: &[i64]) -> Vec<FieldScalar> {
        xs.iter().map(|&x| Q.from_int(x)).collect()
    }

    fn self_dual_d1() -> LeonardSystem {
        certify(&ParameterArray::from_ints(Q, &[1, -1], &[1, -1], &[2], &[6]).unwrap()).unwrap()
    }

    #[test]
    fn self_dual_criterion() {
        let pa = ParameterArray::from_ints(Q, &[1], &[1], &[], &[]).unwrap();
        assert!(is_self_dual(&pa).unwrap());
        assert!(is_self_dual(self_dual_d1().parameter_array()).unwrap());
        let other = ParameterArray::from_ints(Q, &[1, -1], &[2, -1], &[2], &[6]).unwrap();
        assert!(!is_self_dual(&other).unwrap());
        let bad = ParameterArray::from_ints(Q, &[1, 2, 3], &[1, 2, 3], &[1, 1], &[1, 2]).unwrap();
        assert_eq!(is_self_dual(&bad), Err(Error::InconsistentArray));
    }

    #[test]
    fn trivial_t() {
        let sys = certify(&ParameterArray::from_ints(Q, &[5], &[5], &[], &[]).unwrap()).unwrap();
        let b = build_t(&sys).unwrap();
        assert_eq!(b.t, sys.identity());
        assert_eq!(b.lambda, Q.one());
        assert!(verify_duality_suite(&sys, &b).all_pass());
    }

    #[test]
    fn d1_duality() {
        let sys = self_dual_d1();
        let b = build_t_self_dual(&sys).unwrap();
        assert_eq!(t_polynomial_form(&sys).unwrap(), b.t);
        let report = verify_duality_suite(&sys, &b);
        let failed: Vec<_> = report.failures().collect();
        assert!(failed.is_empty(), "{failed:?}");
    }

    #[test]
    fn d2_self_dual_duality() {
        let pa = complete_from_first(Q, ints(&[0, 1, 3]), ints(&[0, 1, 3]), Q.one()).unwrap();
        let sys = certify(&pa).unwrap();
        let b = build_t_self_dual(&sys).unwrap();
        // coefficient of E_0E*_0 in TE*_0
        let coeff = (&pa.eta_d_at_theta_0() * &pa.varphi_prod(1, 2))
            / (&pa.tau_d_at_theta_d() * &pa.eta_star_d_at_theta_star_0());
        assert_eq!(&b.t * sys.e_star(0), (sys.e(0) * sys.e_star(0)).scale(&coeff));
        let report = verify_duality_suite(&sys, &b);
        let failed: Vec<_> = report.failures().collect();
        assert!(failed.is_empty(), "{failed:?}");
    }

    #[test]
    fn non_self_dual_control() {
        let pa = complete_parameter_array(Q, ints(&[0, 1, 3]), ints(&[2, -1, 5]), ints(&[3, -12])).unwrap();
        let sys = certify(&pa).unwrap();
        assert_eq!(build_t_self_dual(&sys), Err(Error::NotSelfDual));
        let b = build_t(&sys).unwrap();
        let report = verify_duality_suite(&sys, &b);
        assert_eq!(report.passed("a_t_equals_t_a_star"), Some(false));
        let general = verify_t_general(&sys, &b.t);
        let failed: Vec<_> = general.failures().collect();
        assert!(failed.is_empty(), "{failed:?}");
    }
}
