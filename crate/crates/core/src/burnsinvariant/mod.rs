//! Assembly of the local invariant for `E = Q(sqrt d1, sqrt d2)` and its
//! torsion class in `(Z/4)*`.
//!
//! The representative is
//!
//! ```text
//! h = T_S * prod_{p full} (local term at p)^{-1} * prod_{p in S} delta_p
//! ```
//!
//! where `T_S(chi) = prod_{p in S} det(1 - p^{-1} Frob^{-1} | chi^I)^{-1}`.

mod lfunction;
mod selftest;
mod sweep;

use std::collections::BTreeMap;

use num_integer::Roots;
use serde::Serialize;

pub use lfunction::{
    fundamental_discriminants, l_one_closed_form, l_one_direct_series, l_prime_zero_closed_form,
    l_ratio_check_discriminant, l_ratio_numeric_check, l_ratio_squared_exact, ln_gamma_series,
    AnalyticCheck,
};
pub use selftest::{selftest, SelftestCase};
pub use sweep::{squarefree_pairs, sweep, sweep_reports, Execution, SweepSummary};

use crate::biquadratic::{
    artin_conductor, euler_factor, field_data, frob_det_quotient, is_prime, local_galois,
    ramified_set, FieldData, PrimeLocalData,
};
use crate::error::{Error, Result};
use crate::grouprings::{CharLabel, FiniteGroupId, GaloisChar};
use crate::localterms::{local_term_closed_form, local_term_via_complex, LatticeExponent};
use crate::rational::{int, is_signed_power_of_two, powi, Rational};
use crate::relk0::{odd_part_mod4, torsion_class, HomRep, TorsionClass};

/// `chi -> (|G_w|/|I_w|)^{-dim chi^G} det(1 - Frob^{-1} | chi^I / chi^G)`.
pub fn delta1_term(local: &PrimeLocalData) -> HomRep {
    let index = (local.decomposition.order() / local.inertia.order()) as i64;
    HomRep::from_fn(|l| {
        let chi = GaloisChar::v4(l);
        let dim_g = i64::from(chi.is_trivial_on(&local.decomposition)?);
        Ok(powi(&int(index), -dim_g) * frob_det_quotient(&chi, local))
    })
    .expect("nonzero values")
}

pub fn euler_factors(local: &PrimeLocalData) -> HomRep {
    HomRep::from_fn(|l| Ok(euler_factor(&GaloisChar::v4(l), local))).expect("nonzero values")
}

/// `chi -> prod_{p in S} det(1 - p^{-1} Frob^{-1} | chi^I)^{-1}`.
pub fn ts_representative(locals: &[PrimeLocalData]) -> HomRep {
    locals
        .iter()
        .fold(HomRep::identity(), |acc, l| &acc * &euler_factors(l))
        .inverse()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ResolventStatus {
    Pass,
    Fail,
    Unsupported,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ResolventCheck {
    pub status: ResolventStatus,
    /// `pi^2` for `E_w = Q_2(pi)`, when supported.
    pub pi_squared: Option<u64>,
    #[serde(serialize_with = "serialize_opt_rational")]
    pub r: Option<Rational>,
    pub odd_part: Option<TorsionClass>,
    pub reason: Option<String>,
}

fn serialize_opt_rational<S: serde::Serializer>(
    q: &Option<Rational>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    match q {
        Some(q) => s.serialize_str(&crate::rational::format_rational(q)),
        None => s.serialize_none(),
    }
}

impl ResolventCheck {
    fn unsupported(reason: String) -> Self {
        Self {
            status: ResolventStatus::Unsupported,
            pi_squared: None,
            r: None,
            odd_part: None,
            reason: Some(reason),
        }
    }
}

/// Square of a uniformiser generating `Q_2(sqrt d)` when that field is
/// `Q_2(sqrt 2)` or `Q_2(sqrt 10)`.
fn two_adic_uniformiser_square(d: i64) -> Option<u64> {
    if d.rem_euclid(2) != 0 {
        return None;
    }
    let u = d / 2;
    if u % 2 == 0 {
        return None;
    }
    match u.rem_euclid(8) {
        1 => Some(2),
        5 => Some(10),
        _ => None,
    }
}

/// `r = (prod_chi f(chi))^{1/2} / (8^4 pi^k)`, `k` the number of characters
/// ramified at 2, with the check that the odd part of `r` is 1 mod 4.
///
/// `None` when 2 is unramified in `E`.
pub fn resolvent_factor_check(f: &FieldData) -> Result<Option<ResolventCheck>> {
    let local = local_galois(f, 2)?;
    if !local.is_ramified() {
        return Ok(None);
    }
    if local.is_full() {
        return Ok(Some(ResolventCheck::unsupported(
            "decomposition group at 2 is all of Gal(E/Q)".into(),
        )));
    }
    let ramified: Vec<(CharLabel, i64)> = f
        .char_to_subfield()
        .into_iter()
        .filter(|&(l, _)| {
            !GaloisChar::v4(l)
                .is_trivial_on(&local.inertia)
                .unwrap_or(true)
        })
        .collect();
    let Some(&(_, d)) = ramified.first() else {
        return Err(Error::Internal("2 is ramified but no character is".into()));
    };
    let Some(pi_sq) = two_adic_uniformiser_square(d) else {
        return Ok(Some(ResolventCheck::unsupported(format!(
            "completion at 2 is Q_2(sqrt {d}), not Q_2(sqrt 2) or Q_2(sqrt 10)"
        ))));
    };
    let conductor_product: u64 = GaloisChar::all(FiniteGroupId::V4)
        .iter()
        .map(|c| artin_conductor(c, f))
        .product();
    let root = conductor_product.sqrt();
    if root * root != conductor_product {
        return Err(Error::Internal(format!(
            "conductor product {conductor_product} is not a perfect square"
        )));
    }
    let k = ramified.len() as i64;
    if k % 2 == 1 {
        return Err(Error::Internal(
            "odd number of characters ramified at 2".into(),
        ));
    }
    let r = int(root as i64) / (powi(&int(8), 4) * powi(&int(pi_sq as i64), k / 2));
    let odd = odd_part_mod4(&r)?;
    Ok(Some(ResolventCheck {
        status: if odd.is_trivial() {
            ResolventStatus::Pass
        } else {
            ResolventStatus::Fail
        },
        pi_squared: Some(pi_sq),
        r: Some(r),
        odd_part: Some(odd),
        reason: None,
    }))
}

/// Which formula supplies the local terms.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum LocalRoute {
    #[default]
    ClosedForm,
    Complex,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ComputeOptions {
    /// Extra primes added to `S`.
    pub extra_s: Vec<u64>,
    pub lattice: LatticeExponent,
    pub allow_imaginary: bool,
    pub route: LocalRoute,
    /// Replace `b_p` by `b_p a_p` at every full-decomposition prime.
    pub relabel_frobenius: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Vanishes,
    Nonzero,
    Inadmissible,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PrimeReport {
    pub local: PrimeLocalData,
    pub delta1: HomRep,
    pub euler_factors: HomRep,
    pub local_term: Option<HomRep>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InvariantReport {
    pub field: FieldData,
    pub s_f: Vec<u64>,
    pub per_prime: BTreeMap<u64, PrimeReport>,
    pub ts_rep: HomRep,
    /// Product of the delta terms over `S`.
    pub delta1: HomRep,
    pub local_terms: BTreeMap<u64, HomRep>,
    pub resolvent_check: Option<ResolventCheck>,
    pub torsion: Option<TorsionClass>,
    pub verdict: Verdict,
}

impl InvariantReport {
    pub fn delta1_torsion(&self) -> TorsionClass {
        torsion_class(&self.delta1)
    }
}

/// True when the decomposition group at 2 is a proper subgroup of V4.
pub fn is_admissible(f: &FieldData) -> Result<bool> {
    Ok(!local_galois(f, 2)?.is_full())
}

pub fn omega_loc_torsion(d1: i64, d2: i64, opts: &ComputeOptions) -> Result<InvariantReport> {
    let field = field_data(d1, d2, opts.allow_imaginary)?;
    let mut s_f = ramified_set(&field);
    for &p in &opts.extra_s {
        if p == 2 || !is_prime(p) {
            return Err(Error::InvalidInput(format!(
                "extra prime {p} is not an odd prime"
            )));
        }
        s_f.push(p);
    }
    s_f.sort_unstable();
    s_f.dedup();

    let admissible = is_admissible(&field)?;
    let mut locals = Vec::with_capacity(s_f.len());
    for &p in &s_f {
        let mut l = local_galois(&field, p)?;
        l.in_s = true;
        if opts.relabel_frobenius && l.is_full() {
            l = l.relabeled();
        }
        locals.push(l);
    }

    let ts_rep = ts_representative(&locals);
    let mut delta1 = HomRep::identity();
    let mut local_terms = BTreeMap::new();
    let mut per_prime = BTreeMap::new();
    for l in &locals {
        let d = delta1_term(l);
        if !d.values().iter().all(is_signed_power_of_two) {
            return Err(Error::Internal(format!(
                "delta term at {} is not a power of two",
                l.p
            )));
        }
        delta1 = &delta1 * &d;
        let term = if admissible && l.is_full() {
            let t = match opts.route {
                LocalRoute::ClosedForm => local_term_closed_form(l, opts.lattice)?,
                LocalRoute::Complex => local_term_via_complex(l, opts.lattice)?,
            };
            local_terms.insert(l.p, t.clone());
            Some(t)
        } else {
            None
        };
        per_prime.insert(
            l.p,
            PrimeReport {
                local: l.clone(),
                delta1: d,
                euler_factors: euler_factors(l),
                local_term: term,
            },
        );
    }
    if !torsion_class(&delta1).is_trivial() {
        return Err(Error::Internal(format!(
            "delta product has nontrivial torsion for ({d1}, {d2})"
        )));
    }

    let resolvent_check = resolvent_factor_check(&field)?;
    let (torsion, verdict) = if admissible {
        let locals_product = local_terms
            .values()
            .fold(HomRep::identity(), |acc, t| &acc * t);
        let local_torsion = torsion_class(&locals_product);
        // subtraction of the local terms: inverses agree with the classes mod 4
        if local_torsion * local_torsion != TorsionClass::ONE
            || local_torsion.inverse() != local_torsion
        {
            return Err(Error::Internal(
                "(Z/4)* element is not an involution".into(),
            ));
        }
        let h = &(&ts_rep * &locals_product.inverse()) * &delta1;
        let t = torsion_class(&h);
        (
            Some(t),
            if t.is_trivial() {
                Verdict::Vanishes
            } else {
                Verdict::Nonzero
            },
        )
    } else {
        (None, Verdict::Inadmissible)
    };

    Ok(InvariantReport {
        field,
        s_f,
        per_prime,
        ts_rep,
        delta1,
        local_terms,
        resolvent_check,
        torsion,
        verdict,
    })
}
