//! Local terms at odd tamely ramified primes whose decomposition group is
//! all of V4.
//!
//! The local fundamental class is modelled by the free complex
//!
//! ```text
//! Z[G] w --lambda--> Z[G] z1 + Z[G] z2 --(-phi)--> Z[G] t
//! ```
//!
//! in degrees -2, -1, 0, with
//! `lambda(w) = (b x - 1) z1 - (a - 1) z2`, `x = (p+1)/2 + ((p-1)/2) a`,
//! `phi(z1) = (a - 1) t` and `phi(z2) = (b - 1) t`. Its class is computed
//! both by the generic determinant routine and by a closed formula.

use serde::{Deserialize, Serialize};

use crate::biquadratic::{euler_factor, frob_det_quotient, PrimeLocalData};
use crate::error::{Error, Result};
use crate::grouprings::{
    apply_char, CharLabel, FiniteGroupId, GaloisChar, GroupElement, GroupRingElem, GroupRingMatrix,
    Subgroup,
};
use crate::linalg::RatMatrix;
use crate::perfectcomplex::{
    char_specialize, class_representative, cohomology_basis, CharIso, CohomologyIso, IsoDirection,
    PerfectComplex,
};
use crate::rational::{int, powi, rat, Rational};
use crate::relk0::HomRep;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct TameComplexSpec {
    p: u64,
    a: GroupElement,
    b: GroupElement,
}

impl TameComplexSpec {
    pub fn new(p: u64, a: GroupElement, b: GroupElement) -> Result<Self> {
        if p.is_multiple_of(2) || !crate::biquadratic::is_prime(p) {
            return Err(Error::InvalidInput(format!("{p} is not an odd prime")));
        }
        if a.group() != FiniteGroupId::V4 || b.group() != FiniteGroupId::V4 {
            return Err(Error::InvalidInput("a and b must lie in V4".into()));
        }
        if a.is_identity() || b.is_identity() || a == b {
            return Err(Error::InvalidInput(format!(
                "{} and {} do not generate V4",
                a.name(),
                b.name()
            )));
        }
        Ok(Self { p, a, b })
    }

    pub fn from_local(local: &PrimeLocalData) -> Result<Self> {
        match (local.a_p, local.b_p) {
            (Some(a), Some(b)) if local.is_full() => Self::new(local.p, a, b),
            _ => Err(Error::NotFullDecomposition { p: local.p }),
        }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn a(&self) -> GroupElement {
        self.a
    }

    pub fn b(&self) -> GroupElement {
        self.b
    }

    pub fn inertia(&self) -> Subgroup {
        Subgroup::generated_by(&[self.a]).expect("V4 element")
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    #[default]
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn flipped(self) -> Self {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

/// Lattice exponent `m >= 1` with the sign of the residue correction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct LatticeExponent {
    m: u32,
    sign: Sign,
}

impl LatticeExponent {
    pub fn new(m: u32, sign: Sign) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidInput(
                "lattice exponent m must be at least 1".into(),
            ));
        }
        Ok(Self { m, sign })
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn sign(&self) -> Sign {
        self.sign
    }
}

impl Default for LatticeExponent {
    fn default() -> Self {
        Self {
            m: 1,
            sign: Sign::Plus,
        }
    }
}

fn elem(g: GroupElement) -> GroupRingElem {
    GroupRingElem::element(g)
}

fn scalar(q: Rational) -> GroupRingElem {
    GroupRingElem::scalar(FiniteGroupId::V4, q)
}

/// `(p+1)/2 + ((p-1)/2) a`, the generator of the residue-field resolution.
pub fn residue_element(p: u64, a: GroupElement) -> GroupRingElem {
    let p = p as i64;
    &scalar(int((p + 1) / 2)) + &elem(a).scale(&int((p - 1) / 2))
}

pub fn build_tame_complex(spec: &TameComplexSpec) -> Result<PerfectComplex> {
    let g = FiniteGroupId::V4;
    let one = GroupRingElem::one(g);
    let (a, b) = (elem(spec.a), elem(spec.b));
    let x = residue_element(spec.p, spec.a);
    let lambda = GroupRingMatrix::from_rows(g, vec![vec![&(&b * &x) - &one], vec![-&(&a - &one)]])?;
    let minus_phi = GroupRingMatrix::from_rows(g, vec![vec![-&(&a - &one), -&(&b - &one)]])?;
    PerfectComplex::new(g, -2, vec![1, 2, 1], vec![lambda, minus_phi])
}

/// `T = (1 + b) z2 - (1 + a) z1` specialised at `chi`.
fn t_class(spec: &TameComplexSpec, chi: &GaloisChar) -> Result<Vec<Rational>> {
    let one = GroupRingElem::one(FiniteGroupId::V4);
    Ok(vec![
        -apply_char(chi, &(&one + &elem(spec.a)))?,
        apply_char(chi, &(&one + &elem(spec.b)))?,
    ])
}

/// The valuation isomorphism `H^{-1} -> H^0`, normalised so that the class
/// of `T` goes to the class of `t`.
pub fn valuation_iso(spec: &TameComplexSpec) -> Result<CohomologyIso> {
    valuation_iso_directed(spec, IsoDirection::OddToEven)
}

pub fn valuation_iso_directed(
    spec: &TameComplexSpec,
    direction: IsoDirection,
) -> Result<CohomologyIso> {
    let complex = build_tame_complex(spec)?;
    let comps = CharLabel::ALL
        .iter()
        .map(|&l| {
            let chi = GaloisChar::v4(l);
            let c = char_specialize(&complex, &chi)?;
            let dims: Vec<usize> = cohomology_basis(&c)
                .iter()
                .map(|h| h.cohomology.len())
                .collect();
            if chi.is_trivial() {
                if dims != [0, 1, 1] {
                    return Err(Error::InvalidIso(format!(
                        "trivial component has cohomology dimensions {dims:?}"
                    )));
                }
                Ok(CharIso {
                    odd_reps: vec![(-1, t_class(spec, &chi)?)],
                    even_reps: vec![(0, vec![int(1)])],
                    matrix: RatMatrix::identity(1),
                    direction,
                })
            } else {
                if dims.iter().any(|&d| d != 0) {
                    return Err(Error::InvalidIso(format!(
                        "{} component has cohomology dimensions {dims:?}",
                        l.key()
                    )));
                }
                Ok(CharIso::empty())
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CohomologyIso {
        components: comps.try_into().expect("four characters"),
    })
}

/// Class of the residue field `F_{p^2}`: `p` where `chi(a) = 1`, else `1`.
pub fn residue_class(p: u64, a: GroupElement) -> HomRep {
    residue_class_graded(p, a, false)
}

/// Residue class with the resolution placed in odd degree when `odd` is
/// set, which inverts every value.
pub fn residue_class_graded(p: u64, a: GroupElement, odd: bool) -> HomRep {
    let h = HomRep::from_fn(|l| {
        let chi = GaloisChar::v4(l);
        Ok(if chi.value(&a)? == 1 {
            int(p as i64)
        } else {
            int(1)
        })
    })
    .expect("nonzero values");
    if odd {
        h.inverse()
    } else {
        h
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ResidueCheck {
    pub p: u64,
    /// `x - p = ((p-1)/2)(a - 1)`, so `x` acts as `p` on the quotient by `(a - 1)`.
    pub reduces_to_p: bool,
    /// `x - a x = 1 - a`.
    pub difference_identity: bool,
    /// `chi(x)` is `p` when `chi(a) = 1` and `1` otherwise.
    pub character_values: bool,
    /// `x y = p` with `y = (p+1)/2 + ((1-p)/2) a`, so `x` is injective rationally.
    pub injective: bool,
}

impl ResidueCheck {
    pub fn passed(&self) -> bool {
        self.reduces_to_p && self.difference_identity && self.character_values && self.injective
    }
}

pub fn verify_residue_resolution(p: u64, a: GroupElement) -> ResidueCheck {
    let g = FiniteGroupId::V4;
    let one = GroupRingElem::one(g);
    let pi = p as i64;
    let x = residue_element(p, a);
    let ea = elem(a);
    let reduces_to_p = &x - &scalar(int(pi)) == (&ea - &one).scale(&int((pi - 1) / 2));
    let difference_identity = &x - &(&ea * &x) == &one - &ea;
    let character_values = CharLabel::ALL.iter().all(|&l| {
        let chi = GaloisChar::v4(l);
        let expected = if chi.value(&a) == Ok(1) {
            int(pi)
        } else {
            int(1)
        };
        apply_char(&chi, &x) == Ok(expected)
    });
    let y = &scalar(int((pi + 1) / 2)) + &ea.scale(&int((1 - pi) / 2));
    let injective = &x * &y == scalar(int(pi));
    ResidueCheck {
        p,
        reduces_to_p,
        difference_identity,
        character_values,
        injective,
    }
}

/// `(-1)^{dim chi^I - dim chi^G} 2^{-dim chi^G} det(1 - Frob^{-1} | chi^I/chi^G)
///  / (p^{1 + s m dim chi^I} det(1 - p^{-1} Frob^{-1} | chi^I))`.
pub fn local_term_closed_form(local: &PrimeLocalData, lat: LatticeExponent) -> Result<HomRep> {
    let spec = TameComplexSpec::from_local(local)?;
    let p = int(spec.p as i64);
    HomRep::from_fn(|l| {
        let chi = GaloisChar::v4(l);
        let dim_i = i64::from(chi.is_trivial_on(&local.inertia)?);
        let dim_g = i64::from(chi.is_trivial_on(&local.decomposition)?);
        let eps = if (dim_i - dim_g) % 2 == 0 {
            int(1)
        } else {
            int(-1)
        };
        let exponent = 1 + lat.sign.value() * i64::from(lat.m) * dim_i;
        Ok(eps * powi(&int(2), -dim_g) * frob_det_quotient(&chi, local)
            / (powi(&p, exponent) * euler_factor(&chi, local)))
    })
}

/// Generic determinant of the tame complex times `chi -> p^{m dim chi^I + s}`.
pub fn local_term_via_complex(local: &PrimeLocalData, lat: LatticeExponent) -> Result<HomRep> {
    let spec = TameComplexSpec::from_local(local)?;
    let base = tame_class(&spec)?;
    let p = int(spec.p as i64);
    let correction = HomRep::from_fn(|l| {
        let dim_i = i64::from(GaloisChar::v4(l).is_trivial_on(&local.inertia)?);
        Ok(powi(&p, i64::from(lat.m) * dim_i + lat.sign.value()))
    })?;
    Ok(&base * &correction)
}

/// The class of the tame complex with the valuation isomorphism.
pub fn tame_class(spec: &TameComplexSpec) -> Result<HomRep> {
    class_representative(&build_tame_complex(spec)?, &valuation_iso(spec)?)
}

/// The four determinants expected from the tame complex, by character case:
/// `1/(2p-2)` for the trivial character, `-2/(p+1)` when `chi(a) = 1` only,
/// and `-1` when `chi(a) = -1`.
pub fn expected_tame_determinant(p: u64, chi_a: i8, chi_b: i8) -> Rational {
    let p = p as i64;
    match (chi_a, chi_b) {
        (1, 1) => rat(1, 2 * p - 2),
        (1, _) => rat(-2, p + 1),
        _ => int(-1),
    }
}
