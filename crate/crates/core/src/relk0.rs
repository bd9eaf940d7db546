//! Relative K_0 classes of `Z_2[V4]` in Hom-description form.
//!
//! A class is represented by a function from the four one-dimensional
//! characters to nonzero rationals. Two classes are compared through the
//! complete invariant pair (2-adic rank vector, torsion class in `(Z/4)*`)
//! rather than modulo determinantal functions of units.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::Mul;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grouprings::{CharLabel, GaloisChar, Subgroup};
use crate::rational::{format_rational, parse_rational, powi, v2, Rational};

/// Hom-description representative: `chi -> nonzero rational`, indexed by
/// `CharLabel`.
#[derive(Clone, PartialEq, Eq)]
pub struct HomRep {
    values: [Rational; 4],
}

impl HomRep {
    pub fn new(values: [Rational; 4]) -> Result<Self> {
        if let Some(l) = CharLabel::ALL.iter().find(|l| values[l.index()].is_zero()) {
            return Err(Error::Domain(format!(
                "Hom-description value at {} is zero",
                l.key()
            )));
        }
        Ok(Self { values })
    }

    pub fn from_fn(mut f: impl FnMut(CharLabel) -> Result<Rational>) -> Result<Self> {
        let values = [
            f(CharLabel::Trivial)?,
            f(CharLabel::Chi1)?,
            f(CharLabel::Chi2)?,
            f(CharLabel::Chi1Chi2)?,
        ];
        Self::new(values)
    }

    pub fn identity() -> Self {
        Self {
            values: std::array::from_fn(|_| Rational::one()),
        }
    }

    pub fn get(&self, label: CharLabel) -> &Rational {
        &self.values[label.index()]
    }

    pub fn at(&self, chi: &GaloisChar) -> &Rational {
        self.get(chi.label())
    }

    pub fn values(&self) -> &[Rational; 4] {
        &self.values
    }

    pub fn inverse(&self) -> Self {
        Self {
            values: std::array::from_fn(|k| self.values[k].recip()),
        }
    }

    pub fn pow(&self, e: i64) -> Self {
        Self {
            values: std::array::from_fn(|k| powi(&self.values[k], e)),
        }
    }

    /// `f(1 + chi1 + chi2 + chi1chi2)`, the value on the regular character.
    pub fn regular_value(&self) -> Rational {
        self.values.iter().product()
    }
}

impl Mul for &HomRep {
    type Output = HomRep;

    fn mul(self, rhs: &HomRep) -> HomRep {
        HomRep {
            values: std::array::from_fn(|k| &self.values[k] * &rhs.values[k]),
        }
    }
}

impl fmt::Debug for HomRep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.values.iter().map(format_rational).collect();
        write!(f, "({})", parts.join(", "))
    }
}

impl Serialize for HomRep {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut map = s.serialize_map(Some(4))?;
        for l in CharLabel::ALL {
            map.serialize_entry(l.key(), &format_rational(self.get(l)))?;
        }
        map.end()
    }
}

impl<'de> Deserialize<'de> for HomRep {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = BTreeMap::<String, String>::deserialize(d)?;
        if raw.len() != 4 {
            return Err(D::Error::custom(
                "HomRep needs exactly the keys 1, chi1, chi2, chi1chi2",
            ));
        }
        let mut values: [Option<Rational>; 4] = Default::default();
        for (k, v) in raw {
            let l = CharLabel::from_key(&k)
                .ok_or_else(|| D::Error::custom(format!("unknown character key {k:?}")))?;
            values[l.index()] = Some(parse_rational(&v).map_err(D::Error::custom)?);
        }
        let values = values.map(|v| v.expect("all four keys present"));
        HomRep::new(values).map_err(D::Error::custom)
    }
}

/// An element of `(Z/4)* = {1, 3}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub struct TorsionClass(u8);

impl TorsionClass {
    pub const ONE: Self = Self(1);
    pub const THREE: Self = Self(3);

    pub fn new(unit: u8) -> Result<Self> {
        match unit {
            1 | 3 => Ok(Self(unit)),
            _ => Err(Error::Domain(format!("{unit} is not a unit mod 4"))),
        }
    }

    pub fn unit(self) -> u8 {
        self.0
    }

    pub fn is_trivial(self) -> bool {
        self.0 == 1
    }

    /// Every element of `(Z/4)*` is its own inverse.
    pub fn inverse(self) -> Self {
        self
    }
}

impl Mul for TorsionClass {
    type Output = Self;

    fn mul(self, rhs: Self) -> Self {
        Self((self.0 * rhs.0) % 4)
    }
}

impl TryFrom<u8> for TorsionClass {
    type Error = Error;

    fn try_from(u: u8) -> Result<Self> {
        Self::new(u)
    }
}

impl From<TorsionClass> for u8 {
    fn from(t: TorsionClass) -> u8 {
        t.0
    }
}

/// Per-character 2-adic valuations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct RankVector {
    pub exps: [i64; 4],
}

impl RankVector {
    pub fn get(&self, label: CharLabel) -> i64 {
        self.exps[label.index()]
    }
}

fn odd_residue_mod4(n: &BigInt) -> u8 {
    let tz = n.trailing_zeros().unwrap_or(0);
    let odd = n >> tz;
    odd.mod_floor(&BigInt::from(4))
        .try_into()
        .expect("residue mod 4 fits in u8")
}

/// `q * 2^{-v2(q)}` read in `(Z/4)*`.
pub fn odd_part_mod4(q: &Rational) -> Result<TorsionClass> {
    if q.is_zero() {
        return Err(Error::Domain("odd part of zero".into()));
    }
    let n = odd_residue_mod4(q.numer());
    let d = odd_residue_mod4(q.denom());
    // odd residues are self-inverse mod 4
    TorsionClass::new(n).and_then(|n| Ok(n * TorsionClass::new(d)?.inverse()))
}

pub fn torsion_class(h: &HomRep) -> TorsionClass {
    odd_part_mod4(&h.regular_value()).expect("HomRep values are nonzero")
}

pub fn rank_vector(h: &HomRep) -> RankVector {
    RankVector {
        exps: std::array::from_fn(|k| v2(&h.values[k]).expect("HomRep values are nonzero")),
    }
}

/// Induction from a subgroup `H` of order 1 or 2 of V4.
///
/// `f_values[0]` is the value on the trivial character of `H`; for `|H| = 2`,
/// `f_values[1]` is the value on its sign character. Each V4 character is
/// restricted to `H` and the valuation of the corresponding value recorded;
/// the torsion component of an induced class is always trivial.
pub fn induce_from_subgroup(
    h: &Subgroup,
    f_values: &[Rational],
) -> Result<(RankVector, TorsionClass)> {
    let n = h.order();
    if n == 4 {
        return Err(Error::NotProperSubgroup(n));
    }
    if f_values.len() != n {
        return Err(Error::ShapeMismatch(format!(
            "subgroup of order {n} has {n} characters, got {} values",
            f_values.len()
        )));
    }
    if f_values.iter().any(Zero::is_zero) {
        return Err(Error::Domain(
            "induced function takes the value zero".into(),
        ));
    }
    let induced = HomRep::from_fn(|l| {
        let restricted_trivial = GaloisChar::v4(l).is_trivial_on(h)?;
        Ok(if restricted_trivial {
            f_values[0].clone()
        } else {
            f_values[1].clone()
        })
    })?;
    Ok((rank_vector(&induced), torsion_class(&induced)))
}

/// Sign of a rational as a torsion class: negative values contribute 3.
pub fn sign_class(q: &Rational) -> TorsionClass {
    if q.is_negative() {
        TorsionClass::THREE
    } else {
        TorsionClass::ONE
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grouprings::GroupElement;
    use crate::rational::{int, rat};
    use proptest::prelude::*;

    fn hom(v: [(i64, i64); 4]) -> HomRep {
        HomRep::new(v.map(|(n, d)| rat(n, d))).unwrap()
    }

    #[test]
    fn odd_part_examples() {
        assert_eq!(odd_part_mod4(&int(16)).unwrap(), TorsionClass::ONE);
        assert_eq!(odd_part_mod4(&int(-1)).unwrap(), TorsionClass::THREE);
        assert_eq!(odd_part_mod4(&rat(6, 5)).unwrap(), TorsionClass::THREE);
        assert_eq!(odd_part_mod4(&rat(1, 3)).unwrap(), TorsionClass::THREE);
        assert!(odd_part_mod4(&int(0)).is_err());
    }

    #[test]
    fn torsion_class_examples() {
        assert_eq!(torsion_class(&HomRep::identity()), TorsionClass::ONE);
        assert_eq!(
            torsion_class(&hom([(3, 1), (1, 1), (1, 1), (1, 1)])),
            TorsionClass::THREE
        );
        assert_eq!(
            torsion_class(&hom([(1, 8), (-1, 1), (-1, 3), (-1, 1)])),
            TorsionClass::ONE
        );
    }

    #[test]
    fn rank_vector_examples() {
        assert_eq!(rank_vector(&HomRep::identity()).exps, [0; 4]);
        assert_eq!(
            rank_vector(&hom([(1, 8), (-1, 1), (-1, 3), (-1, 1)])).exps,
            [-3, 0, 0, 0]
        );
        assert_eq!(
            rank_vector(&hom([(4, 5), (6, 5), (1, 1), (1, 1)])).exps,
            [2, 1, 0, 0]
        );
    }

    #[test]
    fn induction_examples() {
        let triv = Subgroup::trivial();
        assert_eq!(
            induce_from_subgroup(&triv, &[int(3)]).unwrap(),
            (RankVector { exps: [0; 4] }, TorsionClass::ONE)
        );
        assert_eq!(
            induce_from_subgroup(&triv, &[int(2)]).unwrap(),
            (RankVector { exps: [1; 4] }, TorsionClass::ONE)
        );
        // characters trivial on <a>: 1 and chi2
        let h = Subgroup::generated_by(&[GroupElement::A]).unwrap();
        let (rank, t) = induce_from_subgroup(&h, &[int(2), int(1)]).unwrap();
        assert_eq!(rank.exps, [1, 0, 1, 0]);
        assert_eq!(t, TorsionClass::ONE);
        assert_eq!(
            induce_from_subgroup(&Subgroup::whole(), &vec![int(1); 4]),
            Err(Error::NotProperSubgroup(4))
        );
        assert!(induce_from_subgroup(&h, &[int(1)]).is_err());
    }

    #[test]
    fn torsion_group_law() {
        let three = TorsionClass::THREE;
        assert_eq!(three * three, TorsionClass::ONE);
        assert_eq!(three * TorsionClass::ONE, three);
        assert!(TorsionClass::new(2).is_err());
    }

    #[test]
    fn json_shape() {
        let h = hom([(1, 8), (-1, 1), (-1, 3), (-1, 1)]);
        let s = serde_json::to_string(&h).unwrap();
        assert_eq!(
            s,
            r#"{"1":"1/8","chi1":"-1/1","chi2":"-1/3","chi1chi2":"-1/1"}"#
        );
        let back: HomRep = serde_json::from_str(&s).unwrap();
        assert_eq!(back, h);
        assert!(serde_json::from_str::<HomRep>(
            r#"{"1":"0","chi1":"1","chi2":"1","chi1chi2":"1"}"#
        )
        .is_err());
        assert!(serde_json::from_str::<HomRep>(r#"{"1":"1","chi1":"1","chi2":"1"}"#).is_err());
        assert_eq!(serde_json::to_string(&TorsionClass::THREE).unwrap(), "3");
    }

    fn nonzero() -> impl Strategy<Value = Rational> {
        (prop_oneof![-200i64..=-1, 1i64..=200], 1i64..200).prop_map(|(n, d)| rat(n, d))
    }

    fn arb_hom() -> impl Strategy<Value = HomRep> {
        prop::array::uniform4(nonzero()).prop_map(|v| HomRep::new(v).unwrap())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn torsion_class_is_homomorphism(g in arb_hom(), h in arb_hom()) {
            prop_assert_eq!(torsion_class(&(&g * &h)), torsion_class(&g) * torsion_class(&h));
            prop_assert_eq!(torsion_class(&(&g * &g)), TorsionClass::ONE);
            prop_assert_eq!(torsion_class(&g.inverse()), torsion_class(&g));
        }

        #[test]
        fn rank_vector_is_additive(g in arb_hom(), h in arb_hom()) {
            let (rg, rh, rgh) = (rank_vector(&g), rank_vector(&h), rank_vector(&(&g * &h)));
            for k in 0..4 {
                prop_assert_eq!(rgh.exps[k], rg.exps[k] + rh.exps[k]);
            }
        }

        #[test]
        fn odd_part_is_multiplicative(q in nonzero(), r in nonzero()) {
            prop_assert_eq!(odd_part_mod4(&(&q * &r)).unwrap(), odd_part_mod4(&q).unwrap() * odd_part_mod4(&r).unwrap());
        }

        // values that are powers of two times rationals with odd parts = 1 mod 4
        #[test]
        fn trivial_by_construction(e in prop::array::uniform4(-8i64..8), k in prop::array::uniform4((0i64..30, 0i64..30))) {
            let values: [Rational; 4] = std::array::from_fn(|i| {
                powi(&int(2), e[i]) * rat(4 * k[i].0 + 1, 4 * k[i].1 + 1)
            });
            prop_assert_eq!(torsion_class(&HomRep::new(values).unwrap()), TorsionClass::ONE);
        }

        #[test]
        fn induced_torsion_is_always_trivial(a in nonzero(), b in nonzero(), g in 1usize..4) {
            let h = Subgroup::generated_by(&[crate::grouprings::FiniteGroupId::V4.elements()[g]]).unwrap();
            prop_assert_eq!(induce_from_subgroup(&h, &[a.clone(), b]).unwrap().1, TorsionClass::ONE);
            prop_assert_eq!(induce_from_subgroup(&Subgroup::trivial(), &[a]).unwrap().1, TorsionClass::ONE);
        }
    }
}
