//! Arithmetic of `E = Q(sqrt d1, sqrt d2)`: subfields, conductors and the
//! local Galois data at each rational prime, read off from Kronecker symbols.
//!
//! `Gal(E/Q)` is identified with V4 so that `a` moves `sqrt d1` and fixes
//! `sqrt d2`, and `b` does the opposite. Then `chi1` belongs to `d1`, `chi2`
//! to `d2` and `chi1chi2` to `d3`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::grouprings::{CharLabel, GaloisChar, GroupElement, Subgroup};
use crate::rational::{int, rat, Rational};

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut k = 2;
    while k * k <= n {
        if n.is_multiple_of(k) {
            return false;
        }
        k += 1;
    }
    true
}

/// Prime factorisation of `|n|` as `(p, e)` pairs in increasing order.
pub fn factor(n: i64) -> Vec<(u64, u32)> {
    let mut n = n.unsigned_abs();
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        let mut e = 0;
        while n.is_multiple_of(p) {
            n /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn is_squarefree(n: i64) -> bool {
    n != 0 && factor(n).iter().all(|&(_, e)| e == 1)
}

/// Squarefree kernel, keeping the sign.
pub fn squarefree_part(n: i64) -> i64 {
    let core: i64 = factor(n)
        .iter()
        .filter(|&&(_, e)| e % 2 == 1)
        .map(|&(p, _)| p as i64)
        .product();
    core * n.signum()
}

/// Kronecker symbol `(a/n)` for `n >= 1`.
pub fn kronecker(a: i64, n: u64) -> i8 {
    assert!(n >= 1, "kronecker symbol needs n >= 1");
    let mut result = 1i8;
    let mut n = n;
    while n.is_multiple_of(2) {
        n /= 2;
        match a.rem_euclid(8) {
            1 | 7 => {}
            3 | 5 => result = -result,
            _ => return 0,
        }
    }
    // Jacobi symbol (a/n) for odd n
    let mut a = a.rem_euclid(n as i64) as u64;
    while a != 0 {
        while a.is_multiple_of(2) {
            a /= 2;
            if matches!(n % 8, 3 | 5) {
                result = -result;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            result = -result;
        }
        a %= n;
    }
    if n == 1 {
        result
    } else {
        0
    }
}

/// Discriminant of `Q(sqrt d)` for squarefree `d != 1`.
pub fn quadratic_discriminant(d: i64) -> i64 {
    if d.rem_euclid(4) == 1 {
        d
    } else {
        4 * d
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FieldData {
    pub d1: i64,
    pub d2: i64,
    pub d3: i64,
    /// Discriminants of `Q(sqrt d1)`, `Q(sqrt d2)`, `Q(sqrt d3)`.
    pub subfield_discs: [i64; 3],
    pub totally_real: bool,
}

impl FieldData {
    /// The `d` whose quadratic character is `label`; `None` for the trivial one.
    pub fn subfield_of(&self, label: CharLabel) -> Option<i64> {
        self.slot(label).map(|k| [self.d1, self.d2, self.d3][k])
    }

    pub fn disc_of(&self, label: CharLabel) -> Option<i64> {
        self.slot(label).map(|k| self.subfield_discs[k])
    }

    fn slot(&self, label: CharLabel) -> Option<usize> {
        match label {
            CharLabel::Trivial => None,
            CharLabel::Chi1 => Some(0),
            CharLabel::Chi2 => Some(1),
            CharLabel::Chi1Chi2 => Some(2),
        }
    }

    /// `[(chi1, d1), (chi2, d2), (chi1chi2, d3)]`.
    pub fn char_to_subfield(&self) -> [(CharLabel, i64); 3] {
        [
            (CharLabel::Chi1, self.d1),
            (CharLabel::Chi2, self.d2),
            (CharLabel::Chi1Chi2, self.d3),
        ]
    }
}

pub fn field_data(d1: i64, d2: i64, allow_imaginary: bool) -> Result<FieldData> {
    for d in [d1, d2] {
        if d == 1 || !is_squarefree(d) {
            return Err(Error::InvalidInput(format!(
                "{d} is not a squarefree integer other than 1"
            )));
        }
    }
    if d1 == d2 {
        return Err(Error::InvalidInput("d1 and d2 coincide".into()));
    }
    let totally_real = d1 > 0 && d2 > 0;
    if !totally_real && !allow_imaginary {
        return Err(Error::NotTotallyReal { d1, d2 });
    }
    let d3 = squarefree_part(d1 * d2);
    Ok(FieldData {
        d1,
        d2,
        d3,
        subfield_discs: [d1, d2, d3].map(quadratic_discriminant),
        totally_real,
    })
}

/// Inertia, decomposition group and Frobenius at one rational prime.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PrimeLocalData {
    pub p: u64,
    pub in_s: bool,
    pub inertia: Subgroup,
    pub decomposition: Subgroup,
    /// Coset representative of Frobenius modulo inertia.
    pub frob: GroupElement,
    /// Inertia generator, when the decomposition group is all of V4.
    pub a_p: Option<GroupElement>,
    /// Frobenius lift, when the decomposition group is all of V4.
    pub b_p: Option<GroupElement>,
}

impl PrimeLocalData {
    pub fn is_ramified(&self) -> bool {
        self.inertia.order() > 1
    }

    pub fn is_full(&self) -> bool {
        self.decomposition.order() == 4
    }

    /// The same data with the Frobenius lift `b_p` replaced by `b_p a_p`.
    pub fn relabeled(&self) -> Self {
        let mut out = self.clone();
        if let (Some(a), Some(b)) = (self.a_p, self.b_p) {
            let ba = b.mul(&a).expect("both in V4");
            out.b_p = Some(ba);
            out.frob = ba;
        }
        out
    }

    /// `chi(Frob)`, well defined when `chi` is trivial on inertia.
    pub fn frob_value(&self, chi: &GaloisChar) -> i8 {
        chi.value(&self.frob).expect("V4 character on a V4 element")
    }

    pub fn dim_invariants(&self, chi: &GaloisChar, h: &Subgroup) -> bool {
        chi.is_trivial_on(h).expect("V4 character")
    }
}

pub fn local_galois(f: &FieldData, p: u64) -> Result<PrimeLocalData> {
    if !is_prime(p) {
        return Err(Error::InvalidInput(format!("{p} is not prime")));
    }
    let mut unramified = Vec::new();
    for (label, disc) in [CharLabel::Chi1, CharLabel::Chi2, CharLabel::Chi1Chi2]
        .into_iter()
        .zip(f.subfield_discs)
    {
        if disc.unsigned_abs() % p != 0 {
            unramified.push((GaloisChar::v4(label), kronecker(disc, p)));
        }
    }
    let v4 = Subgroup::whole().elements();
    let satisfies = |g: &GroupElement| {
        unramified
            .iter()
            .all(|(chi, s)| chi.value(g).expect("V4") == *s)
    };
    let inertia = Subgroup::generated_by(
        &v4.iter()
            .copied()
            .filter(|g| {
                unramified
                    .iter()
                    .all(|(chi, _)| chi.value(g).expect("V4") == 1)
            })
            .collect::<Vec<_>>(),
    )?;
    let frob = *v4
        .iter()
        .find(|g| satisfies(g))
        .ok_or_else(|| Error::Internal(format!("inconsistent splitting data at {p}")))?;
    let mut gens = inertia.elements();
    gens.push(frob);
    let decomposition = Subgroup::generated_by(&gens)?;
    let (a_p, b_p) = if decomposition.order() == 4 && inertia.order() == 2 {
        (inertia.generator(), Some(frob))
    } else {
        (None, None)
    };
    let in_s = f.subfield_discs.iter().any(|d| d.unsigned_abs() % p == 0);
    Ok(PrimeLocalData {
        p,
        in_s,
        inertia,
        decomposition,
        frob,
        a_p,
        b_p,
    })
}

/// Primes dividing the discriminant of `E`.
pub fn ramified_set(f: &FieldData) -> Vec<u64> {
    let mut primes: Vec<u64> = f
        .subfield_discs
        .iter()
        .flat_map(|&d| factor(d).into_iter().map(|(p, _)| p))
        .collect();
    primes.sort_unstable();
    primes.dedup();
    primes
}

/// `det(1 - p^{-1} Frob^{-1} | chi^I)`.
pub fn euler_factor(chi: &GaloisChar, local: &PrimeLocalData) -> Rational {
    if !local.dim_invariants(chi, &local.inertia) {
        return int(1);
    }
    int(1) - rat(local.frob_value(chi) as i64, local.p as i64)
}

/// `det(1 - Frob^{-1} | chi^I / chi^G)`.
pub fn frob_det_quotient(chi: &GaloisChar, local: &PrimeLocalData) -> Rational {
    let on_inertia = local.dim_invariants(chi, &local.inertia);
    let on_decomposition = local.dim_invariants(chi, &local.decomposition);
    if on_inertia && !on_decomposition {
        int(1) - int(local.frob_value(chi) as i64)
    } else {
        int(1)
    }
}

pub fn artin_conductor(chi: &GaloisChar, f: &FieldData) -> u64 {
    f.disc_of(chi.label()).map_or(1, i64::unsigned_abs)
}
