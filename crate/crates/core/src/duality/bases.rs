//! The anchor vectors `v_0, v_d, v*_0, v*_d`, the 24 bases built from them,
//! the transition relations between those bases, and the action of `T`.

use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};
use serde_json::json;

use crate::duality::geometry::{build_decomposition, Omega};
use crate::duality::operator::{anchor_scalars, DualityBundle};
use crate::error::{Error, Result};
use crate::field::FieldScalar;
use crate::leonard::{LeonardSystem, ParameterArray, SplitPoly};
use crate::linalg::{DenseMatrix, DenseVector};
use crate::report::{Probe, VerificationReport};

/// The eight inner products among the anchors.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AnchorScalars {
    pub v0_v0: FieldScalar,
    pub vd_vd: FieldScalar,
    pub vs0_vs0: FieldScalar,
    pub vsd_vsd: FieldScalar,
    pub v0_vs0: FieldScalar,
    pub v0_vsd: FieldScalar,
    pub vd_vs0: FieldScalar,
    pub vd_vsd: FieldScalar,
}

impl AnchorScalars {
    fn named(&self) -> [(&'static str, &FieldScalar); 8] {
        [
            ("<v0,v0>", &self.v0_v0),
            ("<vd,vd>", &self.vd_vd),
            ("<v*0,v*0>", &self.vs0_vs0),
            ("<v*d,v*d>", &self.vsd_vsd),
            ("<v0,v*0>", &self.v0_vs0),
            ("<v0,v*d>", &self.v0_vsd),
            ("<vd,v*0>", &self.vd_vs0),
            ("<vd,v*d>", &self.vd_vsd),
        ]
    }
}

/// `v_0 ∈ E_0V`, `v_d ∈ E_dV`, `v*_0 ∈ E*_0V`, `v*_d ∈ E*_dV`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AnchorVectors {
    pub v0: DenseVector,
    pub vd: DenseVector,
    pub vs0: DenseVector,
    pub vsd: DenseVector,
    pub scalars: AnchorScalars,
}

fn first_column(m: &DenseMatrix) -> DenseVector {
    m.columns()
        .into_iter()
        .find_map(|c| c.normalized())
        .expect("primitive idempotents are nonzero")
}

impl AnchorVectors {
    /// The first nonzero column of each end idempotent, scaled so its first
    /// nonzero coordinate is 1.
    pub fn choose(sys: &LeonardSystem) -> Result<AnchorVectors> {
        let d = sys.d();
        AnchorVectors::from_vectors(
            sys,
            first_column(sys.e(0)),
            first_column(sys.e(d)),
            first_column(sys.e_star(0)),
            first_column(sys.e_star(d)),
        )
    }

    pub fn from_vectors(
        sys: &LeonardSystem,
        v0: DenseVector,
        vd: DenseVector,
        vs0: DenseVector,
        vsd: DenseVector,
    ) -> Result<AnchorVectors> {
        let form = sys.form()?;
        let ip = |u: &DenseVector, v: &DenseVector| form.inner(u, v);
        let scalars = AnchorScalars {
            v0_v0: ip(&v0, &v0),
            vd_vd: ip(&vd, &vd),
            vs0_vs0: ip(&vs0, &vs0),
            vsd_vsd: ip(&vsd, &vsd),
            v0_vs0: ip(&v0, &vs0),
            v0_vsd: ip(&v0, &vsd),
            vd_vs0: ip(&vd, &vs0),
            vd_vsd: ip(&vd, &vsd),
        };
        if let Some((name, _)) = scalars.named().into_iter().find(|(_, x)| x.is_zero()) {
            return Err(Error::ZeroInnerProduct(name));
        }
        Ok(AnchorVectors { v0, vd, vs0, vsd, scalars })
    }

    /// The same anchors scaled by `(c_0, c_d, c*_0, c*_d)`.
    pub fn rescaled(&self, sys: &LeonardSystem, factors: &[FieldScalar; 4]) -> Result<AnchorVectors> {
        if factors.iter().any(FieldScalar::is_zero) {
            return Err(Error::DivisionByZero);
        }
        AnchorVectors::from_vectors(
            sys,
            self.v0.scale(&factors[0]),
            self.vd.scale(&factors[1]),
            self.vs0.scale(&factors[2]),
            self.vsd.scale(&factors[3]),
        )
    }

    /// The vector `anchor(starred, end)`: `v*_0` for `(true, Zero)` and so on.
    pub fn get(&self, end: AnchorEnd, starred: bool) -> &DenseVector {
        match (starred, end) {
            (false, AnchorEnd::Zero) => &self.v0,
            (false, AnchorEnd::D) => &self.vd,
            (true, AnchorEnd::Zero) => &self.vs0,
            (true, AnchorEnd::D) => &self.vsd,
        }
    }
}

/// Projections of each anchor onto the opposite end eigenspaces, and the
/// two families of ratio identities among the eight scalars.
pub fn verify_anchor_relations(sys: &LeonardSystem, anchors: &AnchorVectors) -> VerificationReport {
    let mut r = VerificationReport::new();
    let pa = sys.parameter_array();
    let d = pa.d;
    let s = &anchors.scalars;
    let (v0, vd, vs0, vsd) = (&anchors.v0, &anchors.vd, &anchors.vs0, &anchors.vsd);

    r.check("anchor_scalars_nonzero", |p| {
        for (name, x) in s.named() {
            p.holds(json!(name), !x.is_zero(), || json!(x));
        }
    });
    r.check("anchors_in_end_eigenspaces", |p| {
        p.eq(json!("v0"), &sys.e(0).mul_vec(v0), v0);
        p.eq(json!("vd"), &sys.e(d).mul_vec(vd), vd);
        p.eq(json!("v*0"), &sys.e_star(0).mul_vec(vs0), vs0);
        p.eq(json!("v*d"), &sys.e_star(d).mul_vec(vsd), vsd);
    });
    r.check("anchor_projections", |p| {
        let rows: [(&str, &DenseMatrix, &DenseVector, &FieldScalar, &FieldScalar, &DenseVector); 8] = [
            ("E0 v*0", sys.e(0), vs0, &s.v0_vs0, &s.v0_v0, v0),
            ("Ed v*0", sys.e(d), vs0, &s.vd_vs0, &s.vd_vd, vd),
            ("E0 v*d", sys.e(0), vsd, &s.v0_vsd, &s.v0_v0, v0),
            ("Ed v*d", sys.e(d), vsd, &s.vd_vsd, &s.vd_vd, vd),
            ("E*0 v0", sys.e_star(0), v0, &s.v0_vs0, &s.vs0_vs0, vs0),
            ("E*d v0", sys.e_star(d), v0, &s.v0_vsd, &s.vsd_vsd, vsd),
            ("E*0 vd", sys.e_star(0), vd, &s.vd_vs0, &s.vs0_vs0, vs0),
            ("E*d vd", sys.e_star(d), vd, &s.vd_vsd, &s.vsd_vsd, vsd),
        ];
        for (name, e, x, num, den, target) in rows {
            let Some(c) = p.require(json!(name), num.checked_div(den)) else { return };
            p.eq(json!(name), &e.mul_vec(x), &target.scale(&c));
        }
    });
    r.check("anchor_cross_ratio", |p| {
        let lhs = (&s.v0_vsd * &s.vd_vs0).checked_div(&(&s.v0_vs0 * &s.vd_vsd));
        let rhs = pa.varphi_prod(1, d).checked_div(&pa.phi_prod(1, d));
        p.eq_result(json!(null), lhs, rhs);
    });
    r.check("anchor_norm_ratios", |p| {
        let (eta, tau) = (pa.eta_d_at_theta_0(), pa.tau_d_at_theta_d());
        let (eta_s, tau_s) = (pa.eta_star_d_at_theta_star_0(), pa.tau_star_d_at_theta_star_d());
        let (varphi, phi) = (pa.varphi_prod(1, d), pa.phi_prod(1, d));
        let rows = [
            ("00*", &s.v0_v0, &s.vs0_vs0, &s.v0_vs0, &eta * &eta_s, &phi),
            ("0d*", &s.v0_v0, &s.vsd_vsd, &s.v0_vsd, &eta * &tau_s, &varphi),
            ("d0*", &s.vd_vd, &s.vs0_vs0, &s.vd_vs0, &tau * &eta_s, &varphi),
            ("dd*", &s.vd_vd, &s.vsd_vsd, &s.vd_vsd, &tau * &tau_s, &phi),
        ];
        for (name, g, h, m, num, den) in rows {
            p.eq_result(json!(name), (g * h).checked_div(&m.square()), num.checked_div(den));
        }
    });
    r
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AnchorEnd {
    Zero,
    D,
}

/// How the `i`-th vector of a basis is produced from its anchor.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BasisKind {
    Tau,
    Eta,
    TauStar,
    EtaStar,
    E,
    EStar,
}

impl BasisKind {
    pub const ALL: [BasisKind; 6] = [
        BasisKind::Tau,
        BasisKind::Eta,
        BasisKind::TauStar,
        BasisKind::EtaStar,
        BasisKind::E,
        BasisKind::EStar,
    ];

    fn label(self) -> &'static str {
        match self {
            BasisKind::Tau => "tau",
            BasisKind::Eta => "eta",
            BasisKind::TauStar => "taustar",
            BasisKind::EtaStar => "etastar",
            BasisKind::E => "e",
            BasisKind::EStar => "estar",
        }
    }

    /// Starred kinds act on the unstarred anchors and vice versa.
    pub fn is_star(self) -> bool {
        matches!(self, BasisKind::TauStar | BasisKind::EtaStar | BasisKind::EStar)
    }

    /// The kind with stars toggled.
    pub fn dual(self) -> BasisKind {
        match self {
            BasisKind::Tau => BasisKind::TauStar,
            BasisKind::Eta => BasisKind::EtaStar,
            BasisKind::TauStar => BasisKind::Tau,
            BasisKind::EtaStar => BasisKind::Eta,
            BasisKind::E => BasisKind::EStar,
            BasisKind::EStar => BasisKind::E,
        }
    }

    fn poly(self) -> Option<SplitPoly> {
        match self {
            BasisKind::Tau => Some(SplitPoly::Tau),
            BasisKind::Eta => Some(SplitPoly::Eta),
            BasisKind::TauStar => Some(SplitPoly::TauStar),
            BasisKind::EtaStar => Some(SplitPoly::EtaStar),
            BasisKind::E | BasisKind::EStar => None,
        }
    }
}

/// One of the 24 bases, named like `tau-vstar0`, `etastar-vd-inv`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BasisId {
    pub kind: BasisKind,
    pub end: AnchorEnd,
    /// Index runs `d, d-1, …, 0` instead of `0, …, d`.
    pub inverted: bool,
}

impl BasisId {
    pub fn new(kind: BasisKind, end: AnchorEnd, inverted: bool) -> Self {
        BasisId { kind, end, inverted }
    }

    pub fn all() -> Vec<BasisId> {
        let mut out = Vec::with_capacity(24);
        for inverted in [false, true] {
            for kind in BasisKind::ALL {
                for end in [AnchorEnd::Zero, AnchorEnd::D] {
                    out.push(BasisId { kind, end, inverted });
                }
            }
        }
        out
    }

    pub fn inversion(self) -> BasisId {
        BasisId { inverted: !self.inverted, ..self }
    }

    /// Whether the anchor is one of `v*_0, v*_d`.
    pub fn anchor_is_star(self) -> bool {
        !self.kind.is_star()
    }

    fn anchor_label(self) -> &'static str {
        match (self.anchor_is_star(), self.end) {
            (true, AnchorEnd::Zero) => "vstar0",
            (true, AnchorEnd::D) => "vstard",
            (false, AnchorEnd::Zero) => "v0",
            (false, AnchorEnd::D) => "vd",
        }
    }

    /// The four bases in which `T` is antidiagonal.
    pub fn antidiagonal_bases() -> [BasisId; 4] {
        [
            BasisId::new(BasisKind::EtaStar, AnchorEnd::Zero, false),
            BasisId::new(BasisKind::Eta, AnchorEnd::Zero, false),
            BasisId::new(BasisKind::TauStar, AnchorEnd::D, false),
            BasisId::new(BasisKind::Tau, AnchorEnd::D, false),
        ]
    }

    /// The decomposition whose `i`-th component contains vector `i`.
    pub fn decomposition(self) -> (Omega, Omega) {
        use AnchorEnd::{Zero as A0, D as AD};
        use BasisKind::*;
        use Omega::{DStar as DS, ZeroStar as ZS, D as OD, Zero as Z};
        let label = match (self.kind, self.end) {
            (Tau, A0) => (ZS, OD),
            (Tau, AD) => (DS, OD),
            (Eta, A0) => (ZS, Z),
            (Eta, AD) => (DS, Z),
            (EtaStar, AD) => (OD, ZS),
            (TauStar, AD) => (OD, DS),
            (EtaStar, A0) => (Z, ZS),
            (TauStar, A0) => (Z, DS),
            (E, _) => (Z, OD),
            (EStar, _) => (ZS, DS),
        };
        if self.inverted {
            (label.1, label.0)
        } else {
            label
        }
    }
}

impl fmt::Display for BasisId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.kind.label(), self.anchor_label())?;
        if self.inverted {
            f.write_str("-inv")?;
        }
        Ok(())
    }
}

impl FromStr for BasisId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        BasisId::all()
            .into_iter()
            .find(|id| id.to_string() == s)
            .ok_or_else(|| Error::UnknownBasis(s.to_string()))
    }
}

impl Serialize for BasisId {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Basis {
    pub id: BasisId,
    pub vectors: Vec<DenseVector>,
}

impl Basis {
    pub fn matrix(&self) -> DenseMatrix {
        let field = self.vectors[0].field();
        DenseMatrix::from_columns(field, &self.vectors).expect("vectors of equal length")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BasisFamily {
    pub bases: Vec<Basis>,
}

impl BasisFamily {
    pub fn get(&self, id: BasisId) -> &Basis {
        self.bases.iter().find(|b| b.id == id).expect("family holds all 24 bases")
    }
}

/// Vector `i` of the non-inverted sequence `kind`, applied to `anchor`.
fn sequence_vector(sys: &LeonardSystem, kind: BasisKind, i: usize, anchor: &DenseVector) -> DenseVector {
    let pa = sys.parameter_array();
    match kind.poly() {
        Some(poly) => {
            let m = if poly.is_star() { sys.a_star() } else { sys.a() };
            pa.eval_matrix(poly, i, m).mul_vec(anchor)
        }
        None if kind == BasisKind::E => sys.e(i).mul_vec(anchor),
        None => sys.e_star(i).mul_vec(anchor),
    }
}

pub fn build_basis(sys: &LeonardSystem, anchors: &AnchorVectors, id: BasisId) -> Result<Basis> {
    let d = sys.d();
    let anchor = anchors.get(id.end, id.anchor_is_star());
    let vectors: Vec<DenseVector> = (0..=d)
        .map(|i| sequence_vector(sys, id.kind, if id.inverted { d - i } else { i }, anchor))
        .collect();
    let basis = Basis { id, vectors };
    if !basis.matrix().is_invertible() {
        return Err(Error::SingularBasis(id.to_string()));
    }
    Ok(basis)
}

pub fn build_24_bases(sys: &LeonardSystem, anchors: &AnchorVectors) -> Result<BasisFamily> {
    let bases = BasisId::all()
        .into_iter()
        .map(|id| build_basis(sys, anchors, id))
        .collect::<Result<Vec<_>>>()?;
    Ok(BasisFamily { bases })
}

pub fn verify_bases(sys: &LeonardSystem, family: &BasisFamily) -> VerificationReport {
    let mut r = VerificationReport::new();
    r.check("bases_invertible", |p| {
        for b in &family.bases {
            p.holds(json!(b.id), b.matrix().is_invertible(), || json!(b.vectors));
        }
    });
    r.check("bases_inversion_pairing", |p| {
        for b in &family.bases {
            let other = family.get(b.id.inversion());
            let reversed: Vec<DenseVector> = other.vectors.iter().rev().cloned().collect();
            p.eq(json!(b.id), &b.vectors, &reversed);
        }
    });
    r.check("bases_lie_in_decompositions", |p| {
        for b in &family.bases {
            let (z, w) = b.id.decomposition();
            let dec = build_decomposition(sys, z, w);
            for (i, v) in b.vectors.iter().enumerate() {
                p.holds(json!([b.id, dec.name(), i]), dec.components[i].contains(v), || json!(v));
            }
        }
    });
    r
}

/// One transition relation `lhs_i = coeff_i · rhs_i`.
fn transition(
    p: &mut Probe,
    name: &str,
    d: usize,
    lhs: impl Fn(usize) -> DenseVector,
    coeff: impl Fn(usize) -> Result<FieldScalar>,
    rhs: impl Fn(usize) -> DenseVector,
) {
    for i in 0..=d {
        let Some(c) = p.require(json!([name, i]), coeff(i)) else { return };
        p.eq(json!([name, i]), &lhs(i), &rhs(i).scale(&c));
    }
}

/// The twelve relations expressing one basis in terms of another; they hold
/// for every Leonard system.
pub fn verify_transition_relations(sys: &LeonardSystem, anchors: &AnchorVectors) -> VerificationReport {
    use BasisKind::*;
    let mut r = VerificationReport::new();
    let pa = sys.parameter_array();
    let d = pa.d;
    let s = &anchors.scalars;
    let (v0, vd, vs0, vsd) = (&anchors.v0, &anchors.vd, &anchors.vs0, &anchors.vsd);
    let seq = |k: BasisKind, i: usize, a: &DenseVector| sequence_vector(sys, k, i, a);
    let varphi_head = |i: usize| pa.varphi_prod(1, i);
    let phi_head = |i: usize| pa.phi_prod(1, i);
    let varphi_tail = |i: usize| pa.varphi_prod(d - i + 1, d);
    let phi_tail = |i: usize| pa.phi_prod(d - i + 1, d);
    let ratio = |a: &FieldScalar, b: FieldScalar, m: &FieldScalar, g: &FieldScalar| -> Result<FieldScalar> {
        Ok(&a.checked_div(&b)? * &m.checked_div(g)?)
    };
    let (tau_d, eta_d) = (pa.tau_d_at_theta_d(), pa.eta_d_at_theta_0());
    let (tau_sd, eta_sd) = (pa.tau_star_d_at_theta_star_d(), pa.eta_star_d_at_theta_star_0());

    r.check("transitions_from_v0_vd", |p| {
        transition(p, "taustar v0", d, |i| seq(TauStar, d - i, v0), |i| ratio(&tau_sd, varphi_tail(i), &s.v0_vsd, &s.vsd_vsd), |i| seq(Eta, i, vsd));
        transition(p, "etastar v0", d, |i| seq(EtaStar, d - i, v0), |i| ratio(&eta_sd, phi_head(i), &s.v0_vs0, &s.vs0_vs0), |i| seq(Eta, i, vs0));
        transition(p, "taustar vd", d, |i| seq(TauStar, d - i, vd), |i| ratio(&tau_sd, phi_tail(i), &s.vd_vsd, &s.vsd_vsd), |i| seq(Tau, i, vsd));
        transition(p, "etastar vd", d, |i| seq(EtaStar, d - i, vd), |i| ratio(&eta_sd, varphi_head(i), &s.vd_vs0, &s.vs0_vs0), |i| seq(Tau, i, vs0));
    });
    r.check("transitions_from_vstar0_vstard", |p| {
        transition(p, "tau v*0", d, |i| seq(Tau, d - i, vs0), |i| ratio(&tau_d, varphi_tail(i), &s.vd_vs0, &s.vd_vd), |i| seq(EtaStar, i, vd));
        transition(p, "eta v*0", d, |i| seq(Eta, d - i, vs0), |i| ratio(&eta_d, phi_tail(i), &s.v0_vs0, &s.v0_v0), |i| seq(EtaStar, i, v0));
        transition(p, "tau v*d", d, |i| seq(Tau, d - i, vsd), |i| ratio(&tau_d, phi_head(i), &s.vd_vsd, &s.vd_vd), |i| seq(TauStar, i, vd));
        transition(p, "eta v*d", d, |i| seq(Eta, d - i, vsd), |i| ratio(&eta_d, varphi_head(i), &s.v0_vsd, &s.v0_v0), |i| seq(TauStar, i, v0));
    });
    r.check("transitions_between_idempotent_bases", |p| {
        transition(p, "E*_i vd", d, |i| seq(EStar, i, vd), |i| ratio(&phi_head(i), varphi_head(i), &s.vd_vs0, &s.v0_vs0), |i| seq(EStar, i, v0));
        transition(p, "E*_{d-i} vd", d, |i| seq(EStar, d - i, vd), |i| ratio(&varphi_tail(i), phi_tail(i), &s.vd_vsd, &s.v0_vsd), |i| seq(EStar, d - i, v0));
        transition(p, "E_i v*d", d, |i| seq(E, i, vsd), |i| ratio(&phi_tail(i), varphi_head(i), &s.v0_vsd, &s.v0_vs0), |i| seq(E, i, vs0));
        transition(p, "E_{d-i} v*d", d, |i| seq(E, d - i, vsd), |i| ratio(&varphi_tail(i), phi_head(i), &s.vd_vsd, &s.vd_vs0), |i| seq(E, d - i, vs0));
    });
    r
}

/// `T` applied to the anchors and to the twelve non-inverted bases: each
/// basis goes to a multiple of its dual partner.
pub fn verify_t_on_bases(
    sys: &LeonardSystem,
    t: &DenseMatrix,
    lambda: &FieldScalar,
    anchors: &AnchorVectors,
    family: &BasisFamily,
) -> VerificationReport {
    let mut r = VerificationReport::new();
    let pa = sys.parameter_array();
    let scalars = anchor_scalars(pa, anchors);
    r.check("t_on_anchors", |p| {
        let Some([alpha, beta, alpha_s, beta_s]) = p.require(json!("scalars"), scalars.clone()) else { return };
        p.eq(json!("v0"), &t.mul_vec(&anchors.v0), &anchors.vs0.scale(&alpha));
        p.eq(json!("vd"), &t.mul_vec(&anchors.vd), &anchors.vsd.scale(&beta));
        p.eq(json!("v*0"), &t.mul_vec(&anchors.vs0), &anchors.v0.scale(&alpha_s));
        p.eq(json!("v*d"), &t.mul_vec(&anchors.vsd), &anchors.vd.scale(&beta_s));
    });
    r.check("anchor_scalar_products_are_lambda", |p| {
        let Some([alpha, beta, alpha_s, beta_s]) = p.require(json!("scalars"), scalars.clone()) else { return };
        p.eq(json!("alpha"), &(&alpha * &alpha_s), lambda);
        p.eq(json!("beta"), &(&beta * &beta_s), lambda);
        p.eq(json!("t_twice_v0"), &t.mul_vec(&t.mul_vec(&anchors.v0)), &anchors.v0.scale(lambda));
    });
    r.check("t_on_bases", |p| {
        let Some([alpha, beta, alpha_s, beta_s]) = p.require(json!("scalars"), scalars) else { return };
        for b in family.bases.iter().filter(|b| !b.id.inverted) {
            let partner = family.get(BasisId::new(b.id.kind.dual(), b.id.end, false));
            let c = match (b.id.anchor_is_star(), b.id.end) {
                (false, AnchorEnd::Zero) => &alpha,
                (false, AnchorEnd::D) => &beta,
                (true, AnchorEnd::Zero) => &alpha_s,
                (true, AnchorEnd::D) => &beta_s,
            };
            for (i, (u, w)) in b.vectors.iter().zip(&partner.vectors).enumerate() {
                p.eq(json!([b.id, i]), &t.mul_vec(u), &w.scale(c));
            }
        }
    });
    r
}

/// The matrix representing `t` with respect to one of the four antidiagonal
/// bases.
pub fn matrix_of_t(sys: &LeonardSystem, t: &DenseMatrix, anchors: &AnchorVectors, id: BasisId) -> Result<DenseMatrix> {
    if !BasisId::antidiagonal_bases().contains(&id) {
        return Err(Error::UnknownBasis(id.to_string()));
    }
    represent(t, &build_basis(sys, anchors, id)?)
}

fn represent(x: &DenseMatrix, basis: &Basis) -> Result<DenseMatrix> {
    let b = basis.matrix();
    Ok(&(&b.inverse()? * x) * &b)
}

/// `φ_1⋯φ_d / (τ_d(θ_d) η_d(θ_0))` times the antidiagonal matrix with
/// entries `1, ϕ_1, ϕ_1ϕ_2, …` read upward from the bottom-left corner.
pub fn expected_matrix_of_t(pa: &ParameterArray) -> Result<DenseMatrix> {
    let d = pa.d;
    let c = pa
        .varphi_prod(1, d)
        .checked_div(&(&pa.tau_d_at_theta_d() * &pa.eta_d_at_theta_0()))?;
    let field = pa.field;
    Ok(DenseMatrix::from_fn(field, d + 1, d + 1, |row, col| {
        if row + col == d {
            &c * &pa.phi_prod(1, col)
        } else {
            field.zero()
        }
    }))
}

/// Representing matrices of `A` and `A*` in the four antidiagonal bases.
pub fn expected_a_matrices(pa: &ParameterArray, id: BasisId) -> Result<(DenseMatrix, DenseMatrix)> {
    use BasisKind::*;
    let d = pa.d;
    let field = pa.field;
    let upper = |diag: &dyn Fn(usize) -> FieldScalar, sup: &dyn Fn(usize) -> FieldScalar| {
        DenseMatrix::from_fn(field, d + 1, d + 1, |r, c| {
            if r == c {
                diag(r)
            } else if r + 1 == c {
                sup(c)
            } else {
                field.zero()
            }
        })
    };
    let lower = |diag: &dyn Fn(usize) -> FieldScalar| {
        DenseMatrix::from_fn(field, d + 1, d + 1, |r, c| {
            if r == c {
                diag(r)
            } else if r == c + 1 {
                field.one()
            } else {
                field.zero()
            }
        })
    };
    let th = |i: usize| pa.theta[i].clone();
    let th_rev = |i: usize| pa.theta[d - i].clone();
    let ths = |i: usize| pa.theta_star[i].clone();
    let ths_rev = |i: usize| pa.theta_star[d - i].clone();
    let phi = |i: usize| pa.phi(i).clone();
    let phi_rev = |i: usize| pa.phi(d - i + 1).clone();
    match (id.kind, id.end, id.inverted) {
        (EtaStar, AnchorEnd::Zero, false) => Ok((upper(&th, &phi_rev), lower(&ths_rev))),
        (Eta, AnchorEnd::Zero, false) => Ok((lower(&th_rev), upper(&ths, &phi))),
        (TauStar, AnchorEnd::D, false) => Ok((upper(&th_rev, &phi), lower(&ths))),
        (Tau, AnchorEnd::D, false) => Ok((lower(&th), upper(&ths_rev, &phi_rev))),
        _ => Err(Error::UnknownBasis(id.to_string())),
    }
}

pub fn verify_matrix_of_t(sys: &LeonardSystem, t: &DenseMatrix, family: &BasisFamily) -> VerificationReport {
    let mut r = VerificationReport::new();
    let pa = sys.parameter_array();
    r.check("matrix_of_t_antidiagonal", |p| {
        let expected = expected_matrix_of_t(pa);
        for id in BasisId::antidiagonal_bases() {
            p.eq_result(json!(id), represent(t, family.get(id)), expected.clone());
        }
    });
    r.check("a_matrices_in_antidiagonal_bases", |p| {
        for id in BasisId::antidiagonal_bases() {
            let Some((a, a_star)) = p.require(json!(id), expected_a_matrices(pa, id)) else { return };
            p.eq_result(json!([id, "A"]), represent(sys.a(), family.get(id)), Ok(a));
            p.eq_result(json!([id, "A*"]), represent(sys.a_star(), family.get(id)), Ok(a_star));
        }
    });
    r
}

/// Anchor identities, basis memberships and transition relations; these do
/// not need self-duality.
pub fn verify_anchor_suite(sys: &LeonardSystem, anchors: &AnchorVectors) -> VerificationReport {
    let mut r = verify_anchor_relations(sys, anchors);
    match build_24_bases(sys, anchors) {
        Ok(family) => r.absorb("", verify_bases(sys, &family)),
        Err(e) => r.check("bases_invertible", |p| p.fail(json!(e.to_string()))),
    }
    r.absorb("", verify_transition_relations(sys, anchors));
    r
}

/// The identities for `T` acting on anchors and bases, plus the agreement of
/// the bundle's scalars with the canonical anchors.
pub fn verify_t_bases_suite(sys: &LeonardSystem, bundle: &DualityBundle, anchors: &AnchorVectors) -> VerificationReport {
    let mut r = VerificationReport::new();
    let family = match build_24_bases(sys, anchors) {
        Ok(f) => f,
        Err(e) => {
            r.check("bases_invertible", |p| p.fail(json!(e.to_string())));
            return r;
        }
    };
    r.check("bundle_scalars_match_anchors", |p| {
        let own = [&bundle.alpha, &bundle.beta, &bundle.alpha_star, &bundle.beta_star].map(Clone::clone);
        let canonical = AnchorVectors::choose(sys).and_then(|a| anchor_scalars(sys.parameter_array(), &a));
        p.eq_result(json!(null), canonical, Ok(own));
    });
    r.absorb("", verify_t_on_bases(sys, &bundle.t, &bundle.lambda, anchors, &family));
    r.absorb("", verify_matrix_of_t(sys, &bundle.t, &family));
    r
}

/// Reruns the anchor and basis identities with rescaled anchors and reports
/// whether every pass/fail status is unchanged.
pub fn verify_scale_robustness(
    sys: &LeonardSystem,
    bundle: Option<&DualityBundle>,
    factors: &[[FieldScalar; 4]],
) -> VerificationReport {
    let mut r = VerificationReport::new();
    let run = |anchors: &AnchorVectors| {
        let mut rep = verify_anchor_suite(sys, anchors);
        if let Some(b) = bundle {
            let family = build_24_bases(sys, anchors);
            if let Ok(family) = family {
                rep.absorb("", verify_t_on_bases(sys, &b.t, &b.lambda, anchors, &family));
                rep.absorb("", verify_matrix_of_t(sys, &b.t, &family));
            }
        }
        rep.outcome()
    };
    r.check("anchor_scale_robustness", |p| {
        let Some(base) = p.require(json!("choose"), AnchorVectors::choose(sys)) else { return };
        let reference = run(&base);
        for (k, f) in factors.iter().enumerate() {
            let Some(scaled) = p.require(json!(k), base.rescaled(sys, f)) else { return };
            p.eq(json!(k), &run(&scaled), &reference);
        }
    });
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::duality::operator::build_t;
    use crate::field::FieldSpec;
    use crate::leonard::{certify, complete_parameter_array};

    const Q: FieldSpec = FieldSpec::Rational;

    fn ints(xs: &[i64]) -> Vec<FieldScalar> {
        xs.iter().map(|&x| Q.from_int(x)).collect()
    }

    fn self_dual_d1() -> LeonardSystem {
        certify(&ParameterArray::from_ints(Q, &[1, -1], &[1, -1], &[2], &[6]).unwrap()).unwrap()
    }

    fn general_d2() -> LeonardSystem {
        let pa = complete_parameter_array(Q, ints(&[0, 1, 3]), ints(&[2, -1, 5]), ints(&[3, -12])).unwrap();
        certify(&pa).unwrap()
    }

    fn assert_pass(r: &VerificationReport) {
        let failed: Vec<_> = r.failures().collect();
        assert!(failed.is_empty(), "{failed:#?}");
    }

    #[test]
    fn basis_ids_round_trip() {
        let all = BasisId::all();
        assert_eq!(all.len(), 24);
        for id in &all {
            assert_eq!(id.to_string().parse::<BasisId>().unwrap(), *id);
        }
        assert_eq!(
            "etastar-vd-inv".parse::<BasisId>().unwrap(),
            BasisId::new(BasisKind::EtaStar, AnchorEnd::D, true)
        );
        assert!(matches!("tau-v0".parse::<BasisId>(), Err(Error::UnknownBasis(_))));
    }

    #[test]
    fn trivial_anchors() {
        let sys = certify(&ParameterArray::from_ints(Q, &[4], &[7], &[], &[]).unwrap()).unwrap();
        let anchors = AnchorVectors::choose(&sys).unwrap();
        let one = DenseVector::new(Q, vec![Q.one()]);
        assert_eq!(anchors.v0, one);
        assert_eq!(anchors.vsd, one);
        let g = sys.gram().unwrap().get(0, 0).clone();
        assert!(anchors.scalars.named().iter().all(|(_, x)| **x == g));
        assert_pass(&verify_anchor_suite(&sys, &anchors));
    }

    #[test]
    fn d1_scalars_by_gram() {
        let sys = self_dual_d1();
        let anchors = AnchorVectors::choose(&sys).unwrap();
        let g = sys.gram().unwrap();
        assert_eq!(anchors.scalars.v0_vsd, g.bilinear(&anchors.v0, &anchors.vsd));
        assert_pass(&verify_anchor_suite(&sys, &anchors));
    }

    #[test]
    fn relations_hold_without_self_duality() {
        let sys = general_d2();
        let anchors = AnchorVectors::choose(&sys).unwrap();
        assert_pass(&verify_anchor_suite(&sys, &anchors));
    }

    #[test]
    fn t_on_bases_self_dual() {
        let sys = self_dual_d1();
        let bundle = build_t(&sys).unwrap();
        let anchors = AnchorVectors::choose(&sys).unwrap();
        assert_pass(&verify_t_bases_suite(&sys, &bundle, &anchors));
        for id in BasisId::antidiagonal_bases() {
            assert_eq!(
                matrix_of_t(&sys, &bundle.t, &anchors, id).unwrap(),
                expected_matrix_of_t(sys.parameter_array()).unwrap()
            );
        }
        let other = BasisId::new(BasisKind::E, AnchorEnd::Zero, false);
        assert!(matches!(matrix_of_t(&sys, &bundle.t, &anchors, other), Err(Error::UnknownBasis(_))));
    }

    #[test]
    fn rescaling_keeps_outcomes() {
        let sys = self_dual_d1();
        let bundle = build_t(&sys).unwrap();
        let f = [Q.from_int(2), Q.from_int(-3), Q.from_ratio(1, 5).unwrap(), Q.from_int(7)];
        assert_pass(&verify_scale_robustness(&sys, Some(&bundle), &[f]));
        let sys = general_d2();
        let f = [Q.from_int(-1), Q.from_int(4), Q.from_int(9), Q.from_ratio(2, 3).unwrap()];
        assert_pass(&verify_scale_robustness(&sys, None, &[f]));
    }
}
