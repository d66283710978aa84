//! Corpora of certified parameter arrays: exhaustive over small prime
//! fields, seeded-random over the rationals.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::field::{FieldScalar, FieldSpec};
use crate::leonard::system::split_matrix_a;
use crate::leonard::{complete_parameter_array, ParameterArray};
use crate::linalg::{check_distinct, lagrange_idempotent, DenseMatrix, DenseVector};

pub const DEFAULT_BUDGET: u128 = 100_000_000;
pub const MAX_DRAWS: u64 = 1_000_000;
const BOX: i64 = 9;
const MAX_DENOM: i64 = 4;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchConfig {
    pub field: FieldSpec,
    pub d: usize,
    pub self_dual_only: bool,
    pub limit: usize,
    pub seed: u64,
}

impl SearchConfig {
    pub fn new(field: FieldSpec, d: usize) -> Self {
        SearchConfig { field, d, self_dual_only: false, limit: 10, seed: 0 }
    }

    fn validate(&self) -> Result<()> {
        if self.limit == 0 {
            return Err(Error::InvalidConfig("limit must be at least 1".into()));
        }
        Ok(())
    }
}

/// `LEONARD_BUDGET` if set, else [`DEFAULT_BUDGET`].
pub fn budget_from_env() -> Result<u128> {
    match std::env::var("LEONARD_BUDGET") {
        Ok(s) => s
            .trim()
            .parse()
            .map_err(|_| Error::InvalidConfig(format!("LEONARD_BUDGET={s:?} is not a nonnegative integer"))),
        Err(_) => Ok(DEFAULT_BUDGET),
    }
}

/// Size of the space of tuples `(θ, θ*, φ, ϕ)` with distinct eigenvalues and
/// nonzero split sequences; with `self_dual`, `θ* = θ` and `ϕ` palindromic.
pub fn candidate_count(p: u64, d: usize, self_dual: bool) -> u128 {
    let p = p as u128;
    let arrangements: u128 = (0..=d as u128).map(|k| p.saturating_sub(k)).product();
    let nonzero = |k: usize| (p - 1).saturating_pow(k as u32);
    if self_dual {
        arrangements.saturating_mul(nonzero(d + d.div_ceil(2)))
    } else {
        arrangements.saturating_mul(arrangements).saturating_mul(nonzero(2 * d))
    }
}

/// Linear conditions on `φ_1, …, φ_d` forced by the eigenvalue sequences:
/// with `A` lower bidiagonal and `A*` upper bidiagonal, `E_i A* E_j = 0` for
/// `|i - j| > 1`. Each row is `(c_1, …, c_d; c_0)` meaning `Σ c_k φ_k + c_0 = 0`.
struct SplitConstraints {
    rows: Vec<(Vec<FieldScalar>, FieldScalar)>,
}

impl SplitConstraints {
    fn new(field: FieldSpec, theta: &[FieldScalar], theta_star: &[FieldScalar]) -> Result<Self> {
        let d = theta.len() - 1;
        let a = split_matrix_a(field, theta);
        let mut right: Vec<DenseVector> = Vec::with_capacity(d + 1);
        let mut left: Vec<DenseVector> = Vec::with_capacity(d + 1);
        for i in 0..=d {
            let e = lagrange_idempotent(&a, theta, i)?;
            let nonzero = |vs: Vec<DenseVector>| vs.into_iter().find(|v| !v.is_zero()).ok_or(Error::SingularMatrix);
            right.push(nonzero(e.columns())?);
            left.push(nonzero((0..=d).map(|r| e.row(r)).collect())?);
        }
        let mut rows = Vec::new();
        for i in 0..=d {
            for j in 0..=d {
                if i.abs_diff(j) < 2 {
                    continue;
                }
                let (w, u) = (left[i].entries(), right[j].entries());
                let coeffs = (1..=d).map(|k| &w[k - 1] * &u[k]).collect();
                let constant = (0..=d).fold(field.zero(), |acc, k| &acc + &(&(&w[k] * &theta_star[k]) * &u[k]));
                rows.push((coeffs, constant));
            }
        }
        Ok(SplitConstraints { rows })
    }

    fn satisfied_by(&self, varphi: &[FieldScalar]) -> bool {
        self.rows.iter().all(|(coeffs, c0)| {
            coeffs.iter().zip(varphi).fold(c0.clone(), |acc, (c, x)| &acc + &(c * x)).is_zero()
        })
    }

    /// The unique `φ_2, …, φ_d` completing `φ_1`, if there is exactly one.
    fn solve_given_first(&self, field: FieldSpec, varphi1: &FieldScalar) -> Option<Vec<FieldScalar>> {
        let d = self.rows.first().map_or(1, |(c, _)| c.len());
        let unknowns = d - 1;
        if unknowns == 0 {
            return Some(vec![varphi1.clone()]);
        }
        let aug = DenseMatrix::from_fn(field, self.rows.len(), unknowns + 1, |r, c| {
            let (coeffs, c0) = &self.rows[r];
            if c < unknowns {
                coeffs[c + 1].clone()
            } else {
                -&(c0 + &(&coeffs[0] * varphi1))
            }
        });
        let (reduced, pivots) = aug.rref();
        if pivots.len() != unknowns || pivots.contains(&unknowns) {
            return None;
        }
        let mut out = vec![varphi1.clone()];
        out.extend((0..unknowns).map(|r| reduced.get(r, unknowns).clone()));
        Some(out)
    }
}

/// Certified parameter array with the given eigenvalue sequences and first
/// split entry, the remaining `φ_i` being solved for.
pub fn complete_from_first(
    field: FieldSpec,
    theta: Vec<FieldScalar>,
    theta_star: Vec<FieldScalar>,
    varphi1: FieldScalar,
) -> Result<ParameterArray> {
    if theta.len() < 2 || theta.len() != theta_star.len() {
        return Err(Error::InvalidParameterArray("need two eigenvalue sequences of equal length at least 2".into()));
    }
    let constraints = SplitConstraints::new(field, &theta, &theta_star)?;
    let varphi = constraints
        .solve_given_first(field, &varphi1)
        .ok_or_else(|| Error::NotALeonardPair("no unique split sequence with this first entry".into()))?;
    complete_parameter_array(field, theta, theta_star, varphi)
}

/// Every tuple of `k` distinct residues mod `p`, lexicographically.
fn arrangements(p: u64, k: usize) -> Vec<Vec<u64>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn go(p: u64, k: usize, cur: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for x in 0..p {
            if !cur.contains(&x) {
                cur.push(x);
                go(p, k, cur, out);
                cur.pop();
            }
        }
    }
    go(p, k, &mut cur, &mut out);
    out
}

/// Every tuple of `k` nonzero residues mod `p`, lexicographically.
fn nonzero_tuples(p: u64, k: usize) -> Vec<Vec<u64>> {
    (0..k).fold(vec![Vec::new()], |acc, _| {
        acc.into_iter()
            .flat_map(|t| {
                (1..p).map(move |x| {
                    let mut t = t.clone();
                    t.push(x);
                    t
                })
            })
            .collect()
    })
}

/// Enumerates `(θ, θ*, φ)` lexicographically, certifies each candidate and
/// reads `ϕ` back from the matrices. Stops after `limit` arrays.
pub fn enumerate_prime_field(cfg: &SearchConfig) -> Result<Vec<ParameterArray>> {
    enumerate_prime_field_with_budget(cfg, budget_from_env()?)
}

pub fn enumerate_prime_field_with_budget(cfg: &SearchConfig, budget: u128) -> Result<Vec<ParameterArray>> {
    cfg.validate()?;
    let FieldSpec::Prime(p) = cfg.field else {
        return Err(Error::InvalidConfig("exhaustive enumeration needs a prime field".into()));
    };
    if p == 2 {
        return Err(Error::InvalidConfig("characteristic 2 is excluded from the corpus".into()));
    }
    let candidates = candidate_count(p, cfg.d, cfg.self_dual_only);
    if candidates > budget {
        return Err(Error::BudgetExceeded { candidates, budget });
    }
    let field = cfg.field;
    let lift = |xs: &[u64]| -> Vec<FieldScalar> { xs.iter().map(|&x| field.from_int(x as i64)).collect() };
    let thetas = arrangements(p, cfg.d + 1);
    let varphis = nonzero_tuples(p, cfg.d);
    let mut out = Vec::new();
    for theta in &thetas {
        let theta = lift(theta);
        let duals: Vec<Vec<FieldScalar>> = if cfg.self_dual_only {
            vec![theta.clone()]
        } else {
            thetas.iter().map(|t| lift(t)).collect()
        };
        for theta_star in duals {
            let constraints = SplitConstraints::new(field, &theta, &theta_star)?;
            for varphi in &varphis {
                let varphi = lift(varphi);
                if !constraints.satisfied_by(&varphi) {
                    continue;
                }
                if let Ok(pa) = complete_parameter_array(field, theta.clone(), theta_star.clone(), varphi) {
                    out.push(pa);
                    if out.len() == cfg.limit {
                        return Ok(out);
                    }
                }
            }
        }
    }
    Ok(out)
}

fn draw_scalar(rng: &mut ChaCha8Rng) -> FieldScalar {
    let n = rng.gen_range(-BOX..=BOX);
    let q = rng.gen_range(1..=MAX_DENOM);
    FieldSpec::Rational.from_ratio(n, q).expect("denominator is positive")
}

fn draw_nonzero(rng: &mut ChaCha8Rng) -> FieldScalar {
    loop {
        let x = draw_scalar(rng);
        if !x.is_zero() {
            return x;
        }
    }
}

/// `θ_0, θ_1, θ_2` drawn from the box; later terms follow
/// `θ_{i+1} = θ_{i-2} - (β+1)(θ_{i-1} - θ_i)`.
fn draw_sequence(rng: &mut ChaCha8Rng, d: usize, beta_plus_one: &FieldScalar) -> Vec<FieldScalar> {
    let mut seq: Vec<FieldScalar> = (0..=d.min(2)).map(|_| draw_scalar(rng)).collect();
    for i in 2..d {
        let next = &seq[i - 2] - &(beta_plus_one * &(&seq[i - 1] - &seq[i]));
        seq.push(next);
    }
    seq
}

/// Seeded random search over ℚ. Eigenvalue sequences beyond three terms are
/// extended by a common three-term recurrence, `φ_1` is drawn and the rest
/// of `φ` is solved for; every output is certified.
pub fn random_rational(cfg: &SearchConfig) -> Result<Vec<ParameterArray>> {
    cfg.validate()?;
    if cfg.field != FieldSpec::Rational {
        return Err(Error::InvalidConfig("random search runs over the rationals".into()));
    }
    let field = FieldSpec::Rational;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut out: Vec<ParameterArray> = Vec::new();
    let mut draws = 0;
    while out.len() < cfg.limit {
        if draws == MAX_DRAWS {
            return Err(Error::ExhaustedTrials { found: out.len(), limit: cfg.limit, draws });
        }
        draws += 1;
        let beta_plus_one = draw_scalar(&mut rng);
        let theta = draw_sequence(&mut rng, cfg.d, &beta_plus_one);
        let theta_star = if cfg.self_dual_only {
            theta.clone()
        } else {
            draw_sequence(&mut rng, cfg.d, &beta_plus_one)
        };
        let varphi1 = draw_nonzero(&mut rng);
        if check_distinct(&theta).is_err() || check_distinct(&theta_star).is_err() {
            continue;
        }
        let varphi = if cfg.d == 0 {
            Vec::new()
        } else {
            let constraints = SplitConstraints::new(field, &theta, &theta_star)?;
            match constraints.solve_given_first(field, &varphi1) {
                Some(v) => v,
                None => continue,
            }
        };
        if varphi.iter().any(FieldScalar::is_zero) {
            continue;
        }
        if let Ok(pa) = complete_parameter_array(field, theta, theta_star, varphi) {
            if !out.contains(&pa) {
                out.push(pa);
            }
        }
    }
    out.sort();
    Ok(out)
}

/// Dispatches on the field.
pub fn search(cfg: &SearchConfig) -> Result<Vec<ParameterArray>> {
    match cfg.field {
        FieldSpec::Rational => random_rational(cfg),
        FieldSpec::Prime(_) => enumerate_prime_field(cfg),
    }
}

/// One JSON object per line.
pub fn to_json_lines(arrays: &[ParameterArray]) -> String {
    arrays.iter().map(|pa| pa.to_json_line() + "\n").collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::duality::is_self_dual;
    use crate::leonard::certify;

    fn gf(p: u64) -> FieldSpec {
        FieldSpec::prime(p).unwrap()
    }

    #[test]
    fn counts() {
        assert_eq!(candidate_count(7, 0, false), 49);
        assert_eq!(candidate_count(7, 0, true), 7);
        assert_eq!(candidate_count(7, 2, false), 210 * 210 * 1296);
        assert_eq!(candidate_count(7, 2, true), 210 * 216);
        assert_eq!(arrangements(4, 2).len(), 12);
        assert_eq!(nonzero_tuples(5, 3).len(), 64);
    }

    #[test]
    fn trivial_systems() {
        let cfg = SearchConfig { self_dual_only: true, limit: 100, ..SearchConfig::new(gf(7), 0) };
        assert_eq!(enumerate_prime_field(&cfg).unwrap().len(), 7);
        let cfg = SearchConfig { limit: 100, ..SearchConfig::new(gf(7), 0) };
        assert_eq!(enumerate_prime_field(&cfg).unwrap().len(), 49);
    }

    #[test]
    fn budget_and_config_errors() {
        let cfg = SearchConfig::new(gf(7), 3);
        assert!(matches!(
            enumerate_prime_field_with_budget(&cfg, DEFAULT_BUDGET),
            Err(Error::BudgetExceeded { .. })
        ));
        let cfg = SearchConfig::new(gf(2), 1);
        assert!(matches!(enumerate_prime_field(&cfg), Err(Error::InvalidConfig(_))));
        let cfg = SearchConfig { limit: 0, ..SearchConfig::new(gf(7), 1) };
        assert!(matches!(enumerate_prime_field(&cfg), Err(Error::InvalidConfig(_))));
        assert!(matches!(random_rational(&SearchConfig::new(gf(7), 1)), Err(Error::InvalidConfig(_))));
    }

    #[test]
    fn prime_self_dual_d1() {
        let cfg = SearchConfig { self_dual_only: true, limit: 5, ..SearchConfig::new(gf(7), 1) };
        let found = enumerate_prime_field(&cfg).unwrap();
        assert_eq!(found.len(), 5);
        for pa in &found {
            assert!(is_self_dual(pa).unwrap());
            certify(pa).unwrap();
        }
    }

    #[test]
    fn rational_completion() {
        let q = FieldSpec::Rational;
        let ints = |xs: &[i64]| xs.iter().map(|&x| q.from_int(x)).collect::<Vec<_>>();
        let c = SplitConstraints::new(q, &ints(&[0, 1, 3]), &ints(&[2, -1, 5])).unwrap();
        assert_eq!(c.solve_given_first(q, &q.from_int(3)), Some(ints(&[3, -12])));
        assert!(c.satisfied_by(&ints(&[3, -12])));
        assert!(!c.satisfied_by(&ints(&[3, 1])));
    }

    #[test]
    fn rational_search_deterministic() {
        let cfg = SearchConfig { self_dual_only: true, limit: 2, seed: 11, ..SearchConfig::new(FieldSpec::Rational, 3) };
        let a = random_rational(&cfg).unwrap();
        assert_eq!(a, random_rational(&cfg).unwrap());
        assert_eq!(a.len(), 2);
        for pa in &a {
            assert!(is_self_dual(pa).unwrap());
        }
    }
}
