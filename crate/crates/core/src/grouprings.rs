//! Exact arithmetic in the rational group rings of the Klein four-group and
//! (at the level of labels and one-dimensional characters) the quaternion
//! group of order eight.
//!
//! Normal forms: a `V4` element is `a^i b^j` with `i, j` in `{0, 1}`; a `Q8`
//! element is `x^i y^j` with `i` in `{0, 1}`, `j` in `{0..3}`, subject to
//! `x^2 = y^2`, `y^4 = 1`, `xyx = y`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::RatMatrix;
use crate::rational::{format_rational, parse_rational, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum FiniteGroupId {
    V4,
    Q8,
    C2,
    Trivial,
}

impl FiniteGroupId {
    pub fn order(self) -> usize {
        match self {
            Self::V4 => 4,
            Self::Q8 => 8,
            Self::C2 => 2,
            Self::Trivial => 1,
        }
    }

    /// All elements in normal-form order.
    pub fn elements(self) -> Vec<GroupElement> {
        match self {
            Self::V4 => (0..4).map(|k| GroupElement::v4(k & 1, k >> 1)).collect(),
            Self::Q8 => (0..8).map(|k| GroupElement::q8(k >> 2, k & 3)).collect(),
            Self::C2 => vec![GroupElement::c2(0), GroupElement::c2(1)],
            Self::Trivial => vec![GroupElement::identity(self)],
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElement {
    group: FiniteGroupId,
    i: u8,
    j: u8,
}

impl GroupElement {
    pub const E: Self = Self::v4(0, 0);
    pub const A: Self = Self::v4(1, 0);
    pub const B: Self = Self::v4(0, 1);
    pub const AB: Self = Self::v4(1, 1);

    /// `a^i b^j` in V4; exponents are reduced mod 2.
    pub const fn v4(i: u8, j: u8) -> Self {
        Self {
            group: FiniteGroupId::V4,
            i: i & 1,
            j: j & 1,
        }
    }

    /// `x^i y^j` in Q8, normalised so that `i` is in `{0, 1}`.
    pub const fn q8(i: u8, j: u8) -> Self {
        // x^2 = y^2
        let extra = (i >> 1) * 2;
        Self {
            group: FiniteGroupId::Q8,
            i: i & 1,
            j: (j + extra) & 3,
        }
    }

    pub const fn c2(i: u8) -> Self {
        Self {
            group: FiniteGroupId::C2,
            i: i & 1,
            j: 0,
        }
    }

    pub const fn identity(group: FiniteGroupId) -> Self {
        Self { group, i: 0, j: 0 }
    }

    pub fn group(&self) -> FiniteGroupId {
        self.group
    }

    pub fn exponents(&self) -> (u8, u8) {
        (self.i, self.j)
    }

    pub fn is_identity(&self) -> bool {
        self.i == 0 && self.j == 0
    }

    /// Position in `FiniteGroupId::elements()`.
    pub fn index(&self) -> usize {
        match self.group {
            FiniteGroupId::V4 => (self.i + 2 * self.j) as usize,
            FiniteGroupId::Q8 => (4 * self.i + self.j) as usize,
            FiniteGroupId::C2 => self.i as usize,
            FiniteGroupId::Trivial => 0,
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.group != other.group {
            return Err(Error::GroupMismatch {
                expected: self.group,
                found: other.group,
            });
        }
        Ok(match self.group {
            FiniteGroupId::V4 => Self::v4(self.i ^ other.i, self.j ^ other.j),
            FiniteGroupId::C2 => Self::c2(self.i ^ other.i),
            FiniteGroupId::Trivial => *self,
            FiniteGroupId::Q8 => {
                // y^j x = x y^{-j}
                if other.i == 0 {
                    Self::q8(self.i, self.j + other.j)
                } else {
                    Self::q8(self.i + 1, (other.j + 4 - self.j) & 3)
                }
            }
        })
    }

    pub fn inverse(&self) -> Self {
        let g = *self;
        self.group
            .elements()
            .into_iter()
            .find(|h| g.mul(h).map(|p| p.is_identity()).unwrap_or(false))
            .expect("finite group element has an inverse")
    }

    pub fn name(&self) -> String {
        match self.group {
            FiniteGroupId::V4 => ["e", "a", "b", "ab"][self.index()].to_string(),
            FiniteGroupId::C2 => ["e", "c"][self.index()].to_string(),
            FiniteGroupId::Trivial => "e".to_string(),
            FiniteGroupId::Q8 => {
                let mut s = String::new();
                if self.i == 1 {
                    s.push('x');
                }
                match self.j {
                    0 => {}
                    1 => s.push('y'),
                    j => s.push_str(&format!("y{j}")),
                }
                if s.is_empty() {
                    s.push('e');
                }
                s
            }
        }
    }

    pub fn parse(group: FiniteGroupId, name: &str) -> Result<Self> {
        group
            .elements()
            .into_iter()
            .find(|g| g.name() == name)
            .ok_or_else(|| Error::InvalidInput(format!("no element {name:?} in {group:?}")))
    }
}

impl fmt::Debug for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())
    }
}

impl Serialize for GroupElement {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.name())
    }
}

/// Labels of the four one-dimensional characters of V4 (equivalently of
/// Q8 through its abelianisation).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CharLabel {
    #[serde(rename = "1")]
    Trivial,
    #[serde(rename = "chi1")]
    Chi1,
    #[serde(rename = "chi2")]
    Chi2,
    #[serde(rename = "chi1chi2")]
    Chi1Chi2,
}

impl CharLabel {
    pub const ALL: [CharLabel; 4] = [Self::Trivial, Self::Chi1, Self::Chi2, Self::Chi1Chi2];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn key(self) -> &'static str {
        match self {
            Self::Trivial => "1",
            Self::Chi1 => "chi1",
            Self::Chi2 => "chi2",
            Self::Chi1Chi2 => "chi1chi2",
        }
    }

    pub fn from_key(key: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|l| l.key() == key)
    }
}

/// A one-dimensional (hence `±1`-valued) character.
///
/// On V4, `chi1(a) = -1, chi1(b) = 1` and `chi2(a) = 1, chi2(b) = -1`; on Q8,
/// `chi1(x) = -1 = chi2(y)` and `chi1(y) = 1 = chi2(x)`. C2 carries the
/// labels `Trivial` and `Chi1` (the sign character).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GaloisChar {
    group: FiniteGroupId,
    label: CharLabel,
}

impl GaloisChar {
    pub fn new(group: FiniteGroupId, label: CharLabel) -> Result<Self> {
        let ok = match group {
            FiniteGroupId::V4 | FiniteGroupId::Q8 => true,
            FiniteGroupId::C2 => matches!(label, CharLabel::Trivial | CharLabel::Chi1),
            FiniteGroupId::Trivial => label == CharLabel::Trivial,
        };
        if ok {
            Ok(Self { group, label })
        } else {
            Err(Error::InvalidInput(format!(
                "{group:?} has no character {}",
                label.key()
            )))
        }
    }

    pub fn v4(label: CharLabel) -> Self {
        Self {
            group: FiniteGroupId::V4,
            label,
        }
    }

    /// The V4 character with `chi(a) = sign_a`, `chi(b) = sign_b`.
    pub fn v4_from_signs(sign_a: i8, sign_b: i8) -> Self {
        let label = match (sign_a < 0, sign_b < 0) {
            (false, false) => CharLabel::Trivial,
            (true, false) => CharLabel::Chi1,
            (false, true) => CharLabel::Chi2,
            (true, true) => CharLabel::Chi1Chi2,
        };
        Self::v4(label)
    }

    pub fn all(group: FiniteGroupId) -> Vec<Self> {
        CharLabel::ALL
            .into_iter()
            .filter_map(|l| Self::new(group, l).ok())
            .collect()
    }

    pub fn group(&self) -> FiniteGroupId {
        self.group
    }

    pub fn label(&self) -> CharLabel {
        self.label
    }

    pub fn is_trivial(&self) -> bool {
        self.label == CharLabel::Trivial
    }

    /// `chi(g)`; the element must belong to the character's group.
    pub fn value(&self, g: &GroupElement) -> Result<i8> {
        if g.group != self.group {
            return Err(Error::GroupMismatch {
                expected: self.group,
                found: g.group,
            });
        }
        let sign = |e: u8| if e & 1 == 1 { -1 } else { 1 };
        let (s1, s2) = (sign(g.i), sign(g.j));
        Ok(match self.label {
            CharLabel::Trivial => 1,
            CharLabel::Chi1 => s1,
            CharLabel::Chi2 => s2,
            CharLabel::Chi1Chi2 => s1 * s2,
        })
    }

    pub fn is_trivial_on(&self, h: &Subgroup) -> Result<bool> {
        for g in h.elements() {
            if self.value(&g)? != 1 {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// A subgroup of V4, stored as a membership mask over the four elements.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Subgroup {
    mask: u8,
}

impl Subgroup {
    pub fn trivial() -> Self {
        Self { mask: 1 }
    }

    pub fn whole() -> Self {
        Self { mask: 0b1111 }
    }

    pub fn generated_by(gens: &[GroupElement]) -> Result<Self> {
        let mut mask = 1u8;
        for g in gens {
            if g.group != FiniteGroupId::V4 {
                return Err(Error::UnsupportedGroup(g.group));
            }
            let current: Vec<GroupElement> = Self { mask }.elements();
            for h in current {
                mask |= 1 << g.mul(&h)?.index();
            }
        }
        Ok(Self { mask })
    }

    pub fn order(&self) -> usize {
        self.mask.count_ones() as usize
    }

    pub fn contains(&self, g: &GroupElement) -> bool {
        g.group == FiniteGroupId::V4 && self.mask & (1 << g.index()) != 0
    }

    pub fn elements(&self) -> Vec<GroupElement> {
        FiniteGroupId::V4
            .elements()
            .into_iter()
            .filter(|g| self.contains(g))
            .collect()
    }

    /// The non-identity element of an order-2 subgroup.
    pub fn generator(&self) -> Option<GroupElement> {
        (self.order() == 2).then(|| self.elements()[1])
    }

    pub fn is_subgroup_of(&self, other: &Self) -> bool {
        self.mask & !other.mask == 0
    }

    pub fn names(&self) -> Vec<String> {
        self.elements().iter().map(GroupElement::name).collect()
    }
}

impl fmt::Debug for Subgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.names().join(", "))
    }
}

impl Serialize for Subgroup {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.names().serialize(s)
    }
}

/// A finitely supported rational combination of group elements. Zero
/// coefficients are never stored.
#[derive(Clone, PartialEq, Eq)]
pub struct GroupRingElem {
    group: FiniteGroupId,
    coeffs: BTreeMap<GroupElement, Rational>,
}

impl GroupRingElem {
    pub fn zero(group: FiniteGroupId) -> Self {
        Self {
            group,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn one(group: FiniteGroupId) -> Self {
        Self::element(GroupElement::identity(group))
    }

    pub fn element(g: GroupElement) -> Self {
        Self::from_terms(g.group, [(g, Rational::one())]).expect("same group")
    }

    pub fn scalar(group: FiniteGroupId, q: Rational) -> Self {
        Self::from_terms(group, [(GroupElement::identity(group), q)]).expect("same group")
    }

    pub fn from_terms(
        group: FiniteGroupId,
        terms: impl IntoIterator<Item = (GroupElement, Rational)>,
    ) -> Result<Self> {
        let mut out = Self::zero(group);
        for (g, q) in terms {
            if g.group != group {
                return Err(Error::GroupMismatch {
                    expected: group,
                    found: g.group,
                });
            }
            out.add_term(g, q);
        }
        Ok(out)
    }

    fn add_term(&mut self, g: GroupElement, q: Rational) {
        let entry = self.coeffs.entry(g).or_insert_with(Rational::zero);
        *entry += q;
        if entry.is_zero() {
            self.coeffs.remove(&g);
        }
    }

    pub fn group(&self) -> FiniteGroupId {
        self.group
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, g: &GroupElement) -> Rational {
        self.coeffs.get(g).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn support(&self) -> impl Iterator<Item = (&GroupElement, &Rational)> {
        self.coeffs.iter()
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(self.group);
        }
        Self {
            group: self.group,
            coeffs: self.coeffs.iter().map(|(g, q)| (*g, q * c)).collect(),
        }
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.group == other.group {
            Ok(())
        } else {
            Err(Error::GroupMismatch {
                expected: self.group,
                found: other.group,
            })
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = self.clone();
        for (g, q) in &other.coeffs {
            out.add_term(*g, q.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&-other)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = Self::zero(self.group);
        for (g, p) in &self.coeffs {
            for (h, q) in &other.coeffs {
                out.add_term(g.mul(h)?, p * q);
            }
        }
        Ok(out)
    }
}

impl Add for &GroupRingElem {
    type Output = GroupRingElem;

    /// Panics on group mismatch; use `try_add` to handle it.
    fn add(self, rhs: Self) -> GroupRingElem {
        self.try_add(rhs)
            .expect("group ring elements from different groups")
    }
}

impl Sub for &GroupRingElem {
    type Output = GroupRingElem;

    fn sub(self, rhs: Self) -> GroupRingElem {
        self.try_sub(rhs)
            .expect("group ring elements from different groups")
    }
}

impl Mul for &GroupRingElem {
    type Output = GroupRingElem;

    fn mul(self, rhs: Self) -> GroupRingElem {
        self.try_mul(rhs)
            .expect("group ring elements from different groups")
    }
}

impl Neg for &GroupRingElem {
    type Output = GroupRingElem;

    fn neg(self) -> GroupRingElem {
        GroupRingElem {
            group: self.group,
            coeffs: self.coeffs.iter().map(|(g, q)| (*g, -q.clone())).collect(),
        }
    }
}

impl fmt::Debug for GroupRingElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .map(|(g, q)| format!("({})*{}", format_rational(q), g.name()))
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

impl Serialize for GroupRingElem {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let map: BTreeMap<String, String> = self
            .coeffs
            .iter()
            .map(|(g, q)| (g.name(), format_rational(q)))
            .collect();
        map.serialize(s)
    }
}

impl GroupRingElem {
    /// Inverse of the sparse `{element: "num/den"}` encoding.
    pub fn from_sparse(group: FiniteGroupId, map: &BTreeMap<String, String>) -> Result<Self> {
        let terms = map
            .iter()
            .map(|(k, v)| Ok((GroupElement::parse(group, k)?, parse_rational(v)?)))
            .collect::<Result<Vec<_>>>()?;
        Self::from_terms(group, terms)
    }
}

/// Matrix over a group ring; columns index the source basis, rows the target.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GroupRingMatrix {
    group: FiniteGroupId,
    rows: usize,
    cols: usize,
    entries: Vec<GroupRingElem>,
}

impl GroupRingMatrix {
    pub fn zeros(group: FiniteGroupId, rows: usize, cols: usize) -> Self {
        Self {
            group,
            rows,
            cols,
            entries: vec![GroupRingElem::zero(group); rows * cols],
        }
    }

    pub fn identity(group: FiniteGroupId, n: usize) -> Self {
        let mut m = Self::zeros(group, n, n);
        for i in 0..n {
            m.entries[i * n + i] = GroupRingElem::one(group);
        }
        m
    }

    pub fn from_rows(group: FiniteGroupId, rows: Vec<Vec<GroupRingElem>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::ShapeMismatch("ragged group ring matrix".into()));
        }
        let entries: Vec<GroupRingElem> = rows.into_iter().flatten().collect();
        if let Some(bad) = entries.iter().find(|e| e.group != group) {
            return Err(Error::GroupMismatch {
                expected: group,
                found: bad.group,
            });
        }
        Ok(Self {
            group,
            rows: r,
            cols: c,
            entries,
        })
    }

    pub fn group(&self) -> FiniteGroupId {
        self.group
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &GroupRingElem {
        &self.entries[i * self.cols + j]
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(GroupRingElem::is_zero)
    }

    /// `self * other`, i.e. apply `other` first.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.group != other.group {
            return Err(Error::GroupMismatch {
                expected: self.group,
                found: other.group,
            });
        }
        if self.cols != other.rows {
            return Err(Error::ShapeMismatch(format!(
                "cannot compose {}x{} with {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.group, self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = GroupRingElem::zero(self.group);
                for k in 0..self.cols {
                    acc = acc.try_add(&self.get(i, k).try_mul(other.get(k, j))?)?;
                }
                out.entries[i * other.cols + j] = acc;
            }
        }
        Ok(out)
    }

    pub fn rows_iter(&self) -> impl Iterator<Item = &[GroupRingElem]> {
        self.entries.chunks(self.cols.max(1)).take(self.rows)
    }
}

/// `(1/|G|) sum_g chi(g) g`, the idempotent cutting out the `chi`-isotypic
/// component of `Q[V4]`.
pub fn idempotent(chi: &GaloisChar) -> Result<GroupRingElem> {
    if chi.group != FiniteGroupId::V4 {
        return Err(Error::UnsupportedGroup(chi.group));
    }
    let quarter = Rational::new(1.into(), 4.into());
    let terms = FiniteGroupId::V4
        .elements()
        .into_iter()
        .map(|g| {
            let s = chi.value(&g).expect("V4 element");
            (g, &quarter * Rational::from_integer(s.into()))
        })
        .collect::<Vec<_>>();
    GroupRingElem::from_terms(FiniteGroupId::V4, terms)
}

/// Linear extension of `chi` to the group ring.
pub fn apply_char(chi: &GaloisChar, x: &GroupRingElem) -> Result<Rational> {
    if chi.group != x.group {
        return Err(Error::GroupMismatch {
            expected: chi.group,
            found: x.group,
        });
    }
    let mut acc = Rational::zero();
    for (g, q) in &x.coeffs {
        if chi.value(g)? == 1 {
            acc += q;
        } else {
            acc -= q;
        }
    }
    Ok(acc)
}

pub fn apply_char_matrix(chi: &GaloisChar, m: &GroupRingMatrix) -> Result<RatMatrix> {
    let mut out = RatMatrix::zeros(m.rows, m.cols);
    for i in 0..m.rows {
        for j in 0..m.cols {
            out[(i, j)] = apply_char(chi, m.get(i, j))?;
        }
    }
    Ok(out)
}
