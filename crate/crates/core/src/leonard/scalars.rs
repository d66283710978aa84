use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::FieldScalar;
use crate::leonard::params::{ParameterArray, SplitPoly};
use crate::leonard::system::LeonardSystem;
use crate::linalg::{sum_matrices, DenseMatrix};
use crate::subspace::{decomposition_projectors, Subspace};

/// `ν` and its values on the relatives `Φ↓`, `Φ⇓`, `Φ↓⇓`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NuScalars {
    pub nu: FieldScalar,
    pub nu_down: FieldScalar,
    pub nu_double_down: FieldScalar,
    pub nu_down_double_down: FieldScalar,
}

/// The four `ν` scalars from their closed forms in the parameter array.
pub fn nu_scalars(pa: &ParameterArray) -> Result<NuScalars> {
    let d = pa.d;
    let varphi = pa.varphi_prod(1, d);
    let phi = pa.phi_prod(1, d);
    let eta = pa.eta_d_at_theta_0();
    let tau = pa.tau_d_at_theta_d();
    let eta_s = pa.eta_star_d_at_theta_star_0();
    let tau_s = pa.tau_star_d_at_theta_star_d();
    Ok(NuScalars {
        nu: (&eta * &eta_s).checked_div(&phi)?,
        nu_down: (&eta * &tau_s).checked_div(&varphi)?,
        nu_double_down: (&tau * &eta_s).checked_div(&varphi)?,
        nu_down_double_down: (&tau * &tau_s).checked_div(&phi)?,
    })
}

/// The four `ν` scalars as inverse traces `tr(E_a E*_b)⁻¹`.
pub fn nu_from_traces(sys: &LeonardSystem) -> Result<NuScalars> {
    let d = sys.d();
    let inv_tr = |i: usize, j: usize| (sys.e(i) * sys.e_star(j)).trace().inv();
    Ok(NuScalars {
        nu: inv_tr(0, 0)?,
        nu_down: inv_tr(0, d)?,
        nu_double_down: inv_tr(d, 0)?,
        nu_down_double_down: inv_tr(d, d)?,
    })
}

/// `(tr(E_rE*_0), tr(E_rE*_d), tr(E*_rE_0), tr(E*_rE_d))` computed directly.
pub fn trace_products(sys: &LeonardSystem, r: usize) -> Result<[FieldScalar; 4]> {
    let d = sys.d();
    if r > d {
        return Err(Error::IndexOutOfRange { index: r, max: d });
    }
    let tr = |x: &DenseMatrix, y: &DenseMatrix| (x * y).trace();
    Ok([
        tr(sys.e(r), sys.e_star(0)),
        tr(sys.e(r), sys.e_star(d)),
        tr(sys.e_star(r), sys.e(0)),
        tr(sys.e_star(r), sys.e(d)),
    ])
}

/// The same four traces from their closed forms.
pub fn trace_closed_forms(pa: &ParameterArray, r: usize) -> Result<[FieldScalar; 4]> {
    let d = pa.d;
    if r > d {
        return Err(Error::IndexOutOfRange { index: r, max: d });
    }
    let th = &pa.theta[r];
    let ths = &pa.theta_star[r];
    // τ_r(θ_r)η_{d-r}(θ_r) and the starred analogue
    let gap = &pa.eval_at(SplitPoly::Tau, r, th) * &pa.eval_at(SplitPoly::Eta, d - r, th);
    let gap_s = &pa.eval_at(SplitPoly::TauStar, r, ths) * &pa.eval_at(SplitPoly::EtaStar, d - r, ths);
    let ratio = |num: FieldScalar, den: FieldScalar| num.checked_div(&den);
    Ok([
        ratio(
            &pa.varphi_prod(1, r) * &pa.phi_prod(1, d - r),
            &pa.eta_star_d_at_theta_star_0() * &gap,
        )?,
        ratio(
            &pa.phi_prod(d - r + 1, d) * &pa.varphi_prod(r + 1, d),
            &pa.tau_star_d_at_theta_star_d() * &gap,
        )?,
        ratio(
            &pa.varphi_prod(1, r) * &pa.phi_prod(r + 1, d),
            &pa.eta_d_at_theta_0() * &gap_s,
        )?,
        ratio(
            &pa.phi_prod(1, r) * &pa.varphi_prod(r + 1, d),
            &pa.tau_d_at_theta_d() * &gap_s,
        )?,
    ])
}

/// `F_i = ν τ_i(A) E*_0 E_0 τ*_i(A*) / (φ_1⋯φ_i)`.
pub fn split_projectors(sys: &LeonardSystem) -> Result<Vec<DenseMatrix>> {
    let pa = sys.parameter_array();
    let nu = nu_scalars(pa)?.nu;
    let core = sys.e_star(0) * sys.e(0);
    (0..=pa.d)
        .map(|i| {
            let left = pa.eval_matrix(SplitPoly::Tau, i, sys.a());
            let right = pa.eval_matrix(SplitPoly::TauStar, i, sys.a_star());
            let coeff = nu.checked_div(&pa.varphi_prod(1, i))?;
            Ok((&(&left * &core) * &right).scale(&coeff))
        })
        .collect()
}

/// Image of the sum of the given idempotents, i.e. the sum of their images.
pub fn idempotent_span(sys: &LeonardSystem, dual: bool, range: impl IntoIterator<Item = usize>) -> Subspace {
    let family = if dual { sys.dual_idempotents() } else { sys.idempotents() };
    let picked: Vec<DenseMatrix> = range.into_iter().map(|i| family[i].clone()).collect();
    Subspace::column_space(&sum_matrices(sys.field(), sys.dim(), &picked))
}

/// `U_i = (E*_0V + ⋯ + E*_iV) ∩ (E_iV + ⋯ + E_dV)`.
pub fn split_decomposition(sys: &LeonardSystem) -> Vec<Subspace> {
    let d = sys.d();
    (0..=d)
        .map(|i| idempotent_span(sys, true, 0..=i).intersect(&idempotent_span(sys, false, i..=d)))
        .collect()
}

/// Projections onto the split decomposition, computed from the subspaces
/// themselves; `None` if they do not form a direct sum.
pub fn split_projectors_by_intersection(sys: &LeonardSystem) -> Option<Vec<DenseMatrix>> {
    decomposition_projectors(&split_decomposition(sys))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldSpec;
    use crate::leonard::system::certify;
    use crate::linalg::DenseVector;

    const Q: FieldSpec = FieldSpec::Rational;

    fn d1() -> LeonardSystem {
        certify(&ParameterArray::from_ints(Q, &[1, -1], &[1, -1], &[2], &[6]).unwrap()).unwrap()
    }

    #[test]
    fn trivial_case() {
        let pa = ParameterArray::from_ints(Q, &[3], &[5], &[], &[]).unwrap();
        let sys = certify(&pa).unwrap();
        let one = Q.one();
        let nu = nu_scalars(&pa).unwrap();
        assert_eq!(nu.nu, one);
        assert_eq!(nu.nu_down_double_down, one);
        let ones = [one.clone(), one.clone(), one.clone(), one.clone()];
        assert_eq!(trace_products(&sys, 0).unwrap(), ones);
        assert_eq!(trace_closed_forms(&pa, 0).unwrap(), ones);
        assert_eq!(split_projectors(&sys).unwrap(), vec![sys.identity()]);
    }

    #[test]
    fn d1_nu_and_traces() {
        let sys = d1();
        let pa = sys.parameter_array();
        // η_1(θ_0) = 2, η*_1(θ*_0) = 2, ϕ_1 = 6
        assert_eq!(nu_scalars(pa).unwrap().nu, Q.from_ratio(2, 3).unwrap());
        assert_eq!(nu_scalars(pa).unwrap(), nu_from_traces(&sys).unwrap());
        for r in 0..=1 {
            assert_eq!(trace_products(&sys, r).unwrap(), trace_closed_forms(pa, r).unwrap());
        }
        assert!(matches!(trace_products(&sys, 2), Err(Error::IndexOutOfRange { .. })));
    }

    #[test]
    fn d1_projectors() {
        let sys = d1();
        let f = split_projectors(&sys).unwrap();
        assert_eq!(Some(f.clone()), split_projectors_by_intersection(&sys));
        // the ambient basis is a split basis, so F_1 picks out the last coordinate
        let e1 = DenseVector::unit(Q, 2, 1);
        assert_eq!(f[1].mul_vec(&e1), e1);
        assert!(f[1].mul_vec(&DenseVector::unit(Q, 2, 0)).is_zero());
    }
}
