use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::field::{product, FieldScalar, FieldSpec};
use crate::leonard::d4::{D4Gen, D4Word};
use crate::linalg::{check_distinct, eval_root_product, root_product_at, DenseMatrix};

/// Eigenvalues, dual eigenvalues, and the two split sequences of a Leonard
/// system. `varphi[k - 1]` holds φ_k and `phi[k - 1]` holds ϕ_k.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "RawParameterArray")]
pub struct ParameterArray {
    pub field: FieldSpec,
    pub d: usize,
    pub theta: Vec<FieldScalar>,
    pub theta_star: Vec<FieldScalar>,
    pub varphi: Vec<FieldScalar>,
    pub phi: Vec<FieldScalar>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawParameterArray {
    field: FieldSpec,
    d: usize,
    theta: Vec<Value>,
    theta_star: Vec<Value>,
    varphi: Vec<Value>,
    phi: Vec<Value>,
}

impl TryFrom<RawParameterArray> for ParameterArray {
    type Error = Error;

    fn try_from(raw: RawParameterArray) -> Result<Self> {
        let f = raw.field;
        let parse = |xs: &[Value]| -> Result<Vec<FieldScalar>> {
            xs.iter().map(|x| f.parse_scalar(x)).collect()
        };
        ParameterArray::new(
            f,
            raw.d,
            parse(&raw.theta)?,
            parse(&raw.theta_star)?,
            parse(&raw.varphi)?,
            parse(&raw.phi)?,
        )
    }
}

/// The four families of polynomials built from the (dual) eigenvalues:
/// `τ_i = ∏_{h<i}(x-θ_h)`, `η_i = ∏_{h<i}(x-θ_{d-h})` and the starred forms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SplitPoly {
    Tau,
    Eta,
    TauStar,
    EtaStar,
}

impl SplitPoly {
    pub fn is_star(self) -> bool {
        matches!(self, SplitPoly::TauStar | SplitPoly::EtaStar)
    }
}

impl ParameterArray {
    pub fn new(
        field: FieldSpec,
        d: usize,
        theta: Vec<FieldScalar>,
        theta_star: Vec<FieldScalar>,
        varphi: Vec<FieldScalar>,
        phi: Vec<FieldScalar>,
    ) -> Result<Self> {
        let pa = ParameterArray {
            field,
            d,
            theta,
            theta_star,
            varphi,
            phi,
        };
        pa.validate()?;
        Ok(pa)
    }

    /// Convenience constructor from integer entries.
    pub fn from_ints(
        field: FieldSpec,
        theta: &[i64],
        theta_star: &[i64],
        varphi: &[i64],
        phi: &[i64],
    ) -> Result<Self> {
        let conv = |xs: &[i64]| xs.iter().map(|&x| field.from_int(x)).collect();
        ParameterArray::new(
            field,
            theta.len().saturating_sub(1),
            conv(theta),
            conv(theta_star),
            conv(varphi),
            conv(phi),
        )
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParameterArray(msg));
        let d = self.d;
        if self.theta.len() != d + 1 || self.theta_star.len() != d + 1 {
            return bad(format!("expected {} eigenvalues and dual eigenvalues", d + 1));
        }
        if self.varphi.len() != d || self.phi.len() != d {
            return bad(format!("expected {d} entries in each split sequence"));
        }
        let all = self
            .theta
            .iter()
            .chain(&self.theta_star)
            .chain(&self.varphi)
            .chain(&self.phi);
        if let Some(x) = all.clone().find(|x| x.field() != self.field) {
            return Err(Error::FieldMismatch(format!(
                "{} entry in a {} parameter array",
                x.field(),
                self.field
            )));
        }
        if let Err(Error::DuplicateEigenvalue(i, j)) = check_distinct(&self.theta) {
            return bad(format!("theta_{i} = theta_{j}"));
        }
        if let Err(Error::DuplicateEigenvalue(i, j)) = check_distinct(&self.theta_star) {
            return bad(format!("theta*_{i} = theta*_{j}"));
        }
        if let Some(k) = self.varphi.iter().position(FieldScalar::is_zero) {
            return bad(format!("varphi_{} is zero", k + 1));
        }
        if let Some(k) = self.phi.iter().position(FieldScalar::is_zero) {
            return bad(format!("phi_{} is zero", k + 1));
        }
        Ok(())
    }

    pub fn one(&self) -> FieldScalar {
        self.field.one()
    }

    pub fn varphi(&self, k: usize) -> &FieldScalar {
        &self.varphi[k - 1]
    }

    pub fn phi(&self, k: usize) -> &FieldScalar {
        &self.phi[k - 1]
    }

    /// `φ_lo ⋯ φ_hi` (1-based, inclusive); empty when `lo > hi`.
    pub fn varphi_prod(&self, lo: usize, hi: usize) -> FieldScalar {
        if lo > hi {
            return self.one();
        }
        product(&self.one(), &self.varphi[lo - 1..hi])
    }

    /// `ϕ_lo ⋯ ϕ_hi` (1-based, inclusive); empty when `lo > hi`.
    pub fn phi_prod(&self, lo: usize, hi: usize) -> FieldScalar {
        if lo > hi {
            return self.one();
        }
        product(&self.one(), &self.phi[lo - 1..hi])
    }

    /// The roots of the `i`-th polynomial of the given family, in factor order.
    pub fn roots(&self, poly: SplitPoly, i: usize) -> Vec<FieldScalar> {
        let d = self.d;
        match poly {
            SplitPoly::Tau => self.theta[..i].to_vec(),
            SplitPoly::Eta => (0..i).map(|h| self.theta[d - h].clone()).collect(),
            SplitPoly::TauStar => self.theta_star[..i].to_vec(),
            SplitPoly::EtaStar => (0..i).map(|h| self.theta_star[d - h].clone()).collect(),
        }
    }

    pub fn eval_at(&self, poly: SplitPoly, i: usize, x: &FieldScalar) -> FieldScalar {
        root_product_at(&self.roots(poly, i), x)
    }

    pub fn eval_matrix(&self, poly: SplitPoly, i: usize, m: &DenseMatrix) -> DenseMatrix {
        eval_root_product(&self.roots(poly, i), m)
    }

    /// `τ_d(θ_d)`
    pub fn tau_d_at_theta_d(&self) -> FieldScalar {
        self.eval_at(SplitPoly::Tau, self.d, &self.theta[self.d])
    }

    /// `η_d(θ_0)`
    pub fn eta_d_at_theta_0(&self) -> FieldScalar {
        self.eval_at(SplitPoly::Eta, self.d, &self.theta[0])
    }

    /// `τ*_d(θ*_d)`
    pub fn tau_star_d_at_theta_star_d(&self) -> FieldScalar {
        self.eval_at(SplitPoly::TauStar, self.d, &self.theta_star[self.d])
    }

    /// `η*_d(θ*_0)`
    pub fn eta_star_d_at_theta_star_0(&self) -> FieldScalar {
        self.eval_at(SplitPoly::EtaStar, self.d, &self.theta_star[0])
    }

    fn reversed(xs: &[FieldScalar]) -> Vec<FieldScalar> {
        xs.iter().rev().cloned().collect()
    }

    /// The parameter array of the relative obtained by one generator.
    pub fn apply_gen(&self, g: D4Gen) -> ParameterArray {
        let rev = Self::reversed;
        let (theta, theta_star, varphi, phi) = match g {
            D4Gen::Star => (
                self.theta_star.clone(),
                self.theta.clone(),
                self.varphi.clone(),
                rev(&self.phi),
            ),
            D4Gen::Down => (
                self.theta.clone(),
                rev(&self.theta_star),
                rev(&self.phi),
                rev(&self.varphi),
            ),
            D4Gen::DoubleDown => (
                rev(&self.theta),
                self.theta_star.clone(),
                self.phi.clone(),
                self.varphi.clone(),
            ),
        };
        ParameterArray {
            field: self.field,
            d: self.d,
            theta,
            theta_star,
            varphi,
            phi,
        }
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("parameter arrays serialize")
    }
}

/// Applies the generators of `word` left to right.
pub fn d4_apply(pa: &ParameterArray, word: &D4Word) -> ParameterArray {
    word.gens().iter().fold(pa.clone(), |acc, &g| acc.apply_gen(g))
}
