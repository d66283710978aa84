//! The four flags induced by the eigenspaces of `A` and `A*` and the twelve
//! decompositions they induce pairwise.

use std::fmt;

use serde::{Serialize, Serializer};
use serde_json::json;

use crate::leonard::scalars::idempotent_span;
use crate::leonard::LeonardSystem;
use crate::linalg::DenseMatrix;
use crate::report::{Probe, VerificationReport};
use crate::subspace::{is_direct_sum_of_whole, Subspace};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Omega {
    Zero,
    D,
    ZeroStar,
    DStar,
}

impl Omega {
    pub const ALL: [Omega; 4] = [Omega::Zero, Omega::D, Omega::ZeroStar, Omega::DStar];

    pub fn label(self) -> &'static str {
        match self {
            Omega::Zero => "0",
            Omega::D => "D",
            Omega::ZeroStar => "0*",
            Omega::DStar => "D*",
        }
    }

    /// The symbol `T` carries this flag to: `0 ↔ 0*`, `D ↔ D*`.
    pub fn dual(self) -> Omega {
        match self {
            Omega::Zero => Omega::ZeroStar,
            Omega::D => Omega::DStar,
            Omega::ZeroStar => Omega::Zero,
            Omega::DStar => Omega::D,
        }
    }

    fn is_star(self) -> bool {
        matches!(self, Omega::ZeroStar | Omega::DStar)
    }

    fn from_top(self) -> bool {
        matches!(self, Omega::D | Omega::DStar)
    }
}

impl fmt::Display for Omega {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl Serialize for Omega {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.label())
    }
}

fn serialize_components<S: Serializer>(cs: &[Subspace], s: S) -> std::result::Result<S::Ok, S::Error> {
    let mats: Vec<DenseMatrix> = cs.iter().map(Subspace::generator_matrix).collect();
    mats.serialize(s)
}

#[derive(Clone, Debug, Serialize)]
pub struct Flag {
    pub label: Omega,
    #[serde(serialize_with = "serialize_components")]
    pub components: Vec<Subspace>,
}

impl Flag {
    /// Component `i` has dimension `i + 1` and contains component `i - 1`.
    pub fn is_valid(&self) -> bool {
        self.components.iter().enumerate().all(|(i, c)| {
            c.dim() == i + 1 && (i == 0 || c.contains_subspace(&self.components[i - 1]))
        })
    }

    pub fn same_as(&self, other: &Flag) -> bool {
        self.components.len() == other.components.len()
            && self.components.iter().zip(&other.components).all(|(a, b)| a.same_as(b))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Decomposition {
    pub label: (Omega, Omega),
    #[serde(serialize_with = "serialize_components")]
    pub components: Vec<Subspace>,
}

impl Decomposition {
    pub fn name(&self) -> String {
        format!("[{}{}]", self.label.0, self.label.1)
    }

    pub fn is_direct_sum(&self) -> bool {
        let n = self.components.len();
        self.components.iter().all(|c| c.dim() == 1) && is_direct_sum_of_whole(&self.components, n)
    }

    pub fn same_as(&self, other: &Decomposition) -> bool {
        self.components.len() == other.components.len()
            && self.components.iter().zip(&other.components).all(|(a, b)| a.same_as(b))
    }

    /// Components in reverse order.
    pub fn inversion(&self) -> Decomposition {
        Decomposition {
            label: (self.label.1, self.label.0),
            components: self.components.iter().rev().cloned().collect(),
        }
    }

    /// The flag of partial sums `V_0 + ⋯ + V_i`.
    pub fn induced_flag(&self) -> Vec<Subspace> {
        let mut out: Vec<Subspace> = Vec::with_capacity(self.components.len());
        for c in &self.components {
            let next = match out.last() {
                Some(prev) => prev.sum(c),
                None => c.clone(),
            };
            out.push(next);
        }
        out
    }
}

/// Component `i` of `[0]` is `E_0V + ⋯ + E_iV`, of `[D]` is
/// `E_dV + ⋯ + E_{d-i}V`, and similarly for the starred symbols.
pub fn build_flag(sys: &LeonardSystem, z: Omega) -> Flag {
    let d = sys.d();
    let components = (0..=d)
        .map(|i| {
            if z.from_top() {
                idempotent_span(sys, z.is_star(), d - i..=d)
            } else {
                idempotent_span(sys, z.is_star(), 0..=i)
            }
        })
        .collect();
    Flag { label: z, components }
}

pub fn build_flags(sys: &LeonardSystem) -> Vec<Flag> {
    Omega::ALL.iter().map(|&z| build_flag(sys, z)).collect()
}

/// `H_i ∩ H'_{d-i}` for each `i`.
pub fn induced_decomposition(h: &Flag, h_prime: &Flag) -> Decomposition {
    let d = h.components.len() - 1;
    Decomposition {
        label: (h.label, h_prime.label),
        components: (0..=d)
            .map(|i| h.components[i].intersect(&h_prime.components[d - i]))
            .collect(),
    }
}

/// Whether the pair is opposite: the intersections `H_i ∩ H'_{d-i}` are
/// lines forming a direct sum whose partial sums recover `H` and whose
/// reversed partial sums recover `H'`.
pub fn is_opposite_pair(h: &Flag, h_prime: &Flag) -> bool {
    let dec = induced_decomposition(h, h_prime);
    if !dec.is_direct_sum() {
        return false;
    }
    let forward = dec.induced_flag();
    let backward = dec.inversion().induced_flag();
    forward.iter().zip(&h.components).all(|(a, b)| a.same_as(b))
        && backward.iter().zip(&h_prime.components).all(|(a, b)| a.same_as(b))
}

/// Every ordered pair of distinct flags is opposite.
pub fn check_mutually_opposite(flags: &[Flag]) -> bool {
    flags.iter().enumerate().all(|(i, f)| {
        flags
            .iter()
            .enumerate()
            .all(|(j, g)| i == j || is_opposite_pair(f, g))
    })
}

pub fn build_decomposition(sys: &LeonardSystem, z: Omega, w: Omega) -> Decomposition {
    induced_decomposition(&build_flag(sys, z), &build_flag(sys, w))
}

/// The twelve ordered pairs of distinct symbols.
pub fn decomposition_labels() -> Vec<(Omega, Omega)> {
    let mut out = Vec::with_capacity(12);
    for z in Omega::ALL {
        for w in Omega::ALL {
            if z != w {
                out.push((z, w));
            }
        }
    }
    out
}

pub fn build_decompositions(sys: &LeonardSystem) -> Vec<Decomposition> {
    let flags = build_flags(sys);
    let flag = |z: Omega| &flags[Omega::ALL.iter().position(|&x| x == z).expect("all symbols")];
    decomposition_labels()
        .into_iter()
        .map(|(z, w)| induced_decomposition(flag(z), flag(w)))
        .collect()
}

/// Components written out directly in terms of idempotents, for the six
/// decompositions with a closed description.
pub fn tabulated_decomposition(sys: &LeonardSystem, label: (Omega, Omega)) -> Option<Decomposition> {
    use Omega::*;
    let d = sys.d();
    let e = |lo: usize, hi: usize| idempotent_span(sys, false, lo..=hi);
    let es = |lo: usize, hi: usize| idempotent_span(sys, true, lo..=hi);
    let component = |i: usize| -> Option<Subspace> {
        Some(match label {
            (ZeroStar, D) => es(0, i).intersect(&e(i, d)),
            (DStar, D) => es(d - i, d).intersect(&e(i, d)),
            (ZeroStar, Zero) => es(0, i).intersect(&e(0, d - i)),
            (DStar, Zero) => es(d - i, d).intersect(&e(0, d - i)),
            (Zero, D) => e(i, i),
            (ZeroStar, DStar) => es(i, i),
            _ => return None,
        })
    };
    let components = (0..=d).map(component).collect::<Option<Vec<_>>>()?;
    Some(Decomposition { label, components })
}

fn find<'a>(decs: &'a [Decomposition], label: (Omega, Omega)) -> &'a Decomposition {
    decs.iter().find(|x| x.label == label).expect("all twelve decompositions")
}

pub fn verify_geometry(sys: &LeonardSystem) -> VerificationReport {
    let mut r = VerificationReport::new();
    let flags = build_flags(sys);
    let decs = build_decompositions(sys);
    let d = sys.d();

    r.check("flags_nested", |p| {
        for f in &flags {
            p.holds(json!(f.label), f.is_valid(), || json!(f.components.iter().map(Subspace::dim).collect::<Vec<_>>()));
        }
    });
    r.check("flags_mutually_opposite", |p| {
        for f in &flags {
            for g in &flags {
                if f.label != g.label {
                    p.holds(json!([f.label, g.label]), is_opposite_pair(f, g), || json!(null));
                }
            }
        }
    });
    r.check("decompositions_direct", |p| {
        for dec in &decs {
            p.holds(json!(dec.name()), dec.is_direct_sum(), || json!(dec));
        }
    });
    r.check("decomposition_inversion_pairs", |p| {
        for dec in &decs {
            let swapped = find(&decs, (dec.label.1, dec.label.0));
            p.holds(json!(dec.name()), dec.same_as(&swapped.inversion()), || json!(null));
        }
    });
    r.check("decomposition_components_are_intersections", |p| {
        for dec in &decs {
            let (z, w) = dec.label;
            let (fz, fw) = (build_flag(sys, z), build_flag(sys, w));
            for i in 0..=d {
                let meet = fz.components[i].intersect(&fw.components[d - i]);
                p.holds(json!([dec.name(), i]), dec.components[i].same_as(&meet), || json!(null));
            }
        }
    });
    r.check("decompositions_induce_their_flags", |p| {
        for dec in &decs {
            let (fz, fw) = (build_flag(sys, dec.label.0), build_flag(sys, dec.label.1));
            let forward = dec.induced_flag();
            let backward = dec.inversion().induced_flag();
            for i in 0..=d {
                p.holds(json!([dec.name(), "first", i]), forward[i].same_as(&fz.components[i]), || json!(null));
                p.holds(json!([dec.name(), "second", i]), backward[i].same_as(&fw.components[i]), || json!(null));
            }
        }
    });
    r.check("decompositions_match_table", |p| {
        for dec in &decs {
            if let Some(tab) = tabulated_decomposition(sys, dec.label) {
                p.holds(json!(dec.name()), dec.same_as(&tab), || json!(null));
            }
        }
    });
    r
}

fn image_matches(p: &mut Probe, at: serde_json::Value, t: &DenseMatrix, from: &[Subspace], to: &[Subspace]) {
    for (i, (u, v)) in from.iter().zip(to).enumerate() {
        p.holds(json!([at, i]), u.image(t).same_as(v), || json!(null));
    }
}

/// `T E_iV = E*_iV`, `T[z] = [z']` and `T[zw] = [z'w']` where `'` swaps
/// starred and unstarred symbols.
pub fn t_action_on_structures(sys: &LeonardSystem, t: &DenseMatrix) -> VerificationReport {
    let mut r = VerificationReport::new();
    let d = sys.d();
    let flags = build_flags(sys);
    let decs = build_decompositions(sys);
    r.check("t_swaps_eigenspaces", |p| {
        let eig: Vec<Subspace> = (0..=d).map(|i| idempotent_span(sys, false, i..=i)).collect();
        let dual: Vec<Subspace> = (0..=d).map(|i| idempotent_span(sys, true, i..=i)).collect();
        image_matches(p, json!("E"), t, &eig, &dual);
        image_matches(p, json!("E*"), t, &dual, &eig);
    });
    r.check("t_action_on_flags", |p| {
        for f in &flags {
            let target = flags.iter().find(|g| g.label == f.label.dual()).expect("four flags");
            image_matches(p, json!(f.label), t, &f.components, &target.components);
        }
    });
    r.check("t_action_on_decompositions", |p| {
        for dec in &decs {
            let target = find(&decs, (dec.label.0.dual(), dec.label.1.dual()));
            image_matches(p, json!(dec.name()), t, &dec.components, &target.components);
        }
    });
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{FieldScalar, FieldSpec};
    use crate::leonard::{certify, complete_parameter_array, ParameterArray};

    const Q: FieldSpec = FieldSpec::Rational;

    fn ints(xs: &[i64]) -> Vec<FieldScalar> {
        xs.iter().map(|&x| Q.from_int(x)).collect()
    }

    fn d2() -> LeonardSystem {
        let pa = complete_parameter_array(Q, ints(&[0, 1, 3]), ints(&[2, -1, 5]), ints(&[3, -12])).unwrap();
        certify(&pa).unwrap()
    }

    #[test]
    fn flag_shapes() {
        let sys = d2();
        let f0 = build_flag(&sys, Omega::Zero);
        assert_eq!(f0.components[2].dim(), 3);
        let fs = build_flag(&sys, Omega::ZeroStar);
        assert!(fs.components[0].same_as(&Subspace::column_space(sys.e_star(0))));
        for f in build_flags(&sys) {
            assert!(f.is_valid());
            assert_eq!(f.components.iter().map(Subspace::dim).collect::<Vec<_>>(), [1, 2, 3]);
        }
    }

    #[test]
    fn opposite_flags() {
        let sys = d2();
        let flags = build_flags(&sys);
        assert!(check_mutually_opposite(&flags));
        assert!(!is_opposite_pair(&flags[0], &flags[0]));
        let trivial = certify(&ParameterArray::from_ints(Q, &[0], &[0], &[], &[]).unwrap()).unwrap();
        assert!(check_mutually_opposite(&build_flags(&trivial)));
    }

    #[test]
    fn decompositions() {
        let sys = d2();
        let dec = build_decomposition(&sys, Omega::Zero, Omega::D);
        for i in 0..=2 {
            assert!(dec.components[i].same_as(&Subspace::column_space(sys.e(i))));
        }
        let report = verify_geometry(&sys);
        let failed: Vec<_> = report.failures().collect();
        assert!(failed.is_empty(), "{failed:?}");
    }
}
