//! Classes `[P^od, phi, P^ev]` of bounded complexes of free `Z[V4]`-modules
//! equipped with a rational isomorphism from odd to even cohomology.
//!
//! `Q[V4]` splits as four copies of `Q` via the character idempotents, so
//! every computation is done one character at a time on the specialised
//! rational complex. For each character the isomorphism `phi` is assembled
//! from splittings of
//!
//! ```text
//! 0 -> Z^j -> C^j -> B^{j+1} -> 0        (Z = kernel, B = image)
//! 0 -> B^j -> Z^j -> H^j     -> 0
//! ```
//!
//! and its determinant with respect to the standard bases of `P^od` and
//! `P^ev` (ascending degree, then index) is the Hom-description value.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grouprings::{
    apply_char_matrix, CharLabel, FiniteGroupId, GaloisChar, GroupRingElem, GroupRingMatrix,
};
use crate::linalg::{RatMatrix, RatVector};
use crate::rational::{int, Rational};
use crate::relk0::HomRep;

fn is_odd(degree: i32) -> bool {
    degree.rem_euclid(2) == 1
}

/// `0 -> P^n -> ... -> P^m -> 0` with free modules of the given ranks.
/// `differentials[k]` maps degree `start_degree + k` to the next one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PerfectComplex {
    group: FiniteGroupId,
    start_degree: i32,
    ranks: Vec<usize>,
    differentials: Vec<GroupRingMatrix>,
}

impl PerfectComplex {
    /// Validates shapes and `d_{j+1} d_j = 0`.
    pub fn new(
        group: FiniteGroupId,
        start_degree: i32,
        ranks: Vec<usize>,
        differentials: Vec<GroupRingMatrix>,
    ) -> Result<Self> {
        if differentials.len() + 1 != ranks.len().max(1) {
            return Err(Error::ShapeMismatch(format!(
                "{} modules need {} differentials, got {}",
                ranks.len(),
                ranks.len().saturating_sub(1),
                differentials.len()
            )));
        }
        for (k, d) in differentials.iter().enumerate() {
            if d.group() != group {
                return Err(Error::GroupMismatch {
                    expected: group,
                    found: d.group(),
                });
            }
            if d.cols() != ranks[k] || d.rows() != ranks[k + 1] {
                return Err(Error::ShapeMismatch(format!(
                    "differential from degree {} is {}x{}, expected {}x{}",
                    start_degree + k as i32,
                    d.rows(),
                    d.cols(),
                    ranks[k + 1],
                    ranks[k]
                )));
            }
        }
        for (k, pair) in differentials.windows(2).enumerate() {
            if !pair[1].mul(&pair[0])?.is_zero() {
                return Err(Error::NotAComplex {
                    degree: start_degree + k as i32,
                });
            }
        }
        Ok(Self {
            group,
            start_degree,
            ranks,
            differentials,
        })
    }

    pub fn empty(group: FiniteGroupId) -> Self {
        Self {
            group,
            start_degree: 0,
            ranks: Vec::new(),
            differentials: Vec::new(),
        }
    }

    pub fn group(&self) -> FiniteGroupId {
        self.group
    }

    pub fn start_degree(&self) -> i32 {
        self.start_degree
    }

    pub fn degrees(&self) -> impl Iterator<Item = i32> + '_ {
        (0..self.ranks.len() as i32).map(move |k| self.start_degree + k)
    }

    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    pub fn rank_at(&self, degree: i32) -> usize {
        usize::try_from(degree - self.start_degree)
            .ok()
            .and_then(|k| self.ranks.get(k).copied())
            .unwrap_or(0)
    }

    pub fn differentials(&self) -> &[GroupRingMatrix] {
        &self.differentials
    }
}

/// `sum_j (-1)^{j+1} rank P^j`.
pub fn euler_characteristic(p: &PerfectComplex) -> i64 {
    p.degrees()
        .map(|j| {
            let r = p.rank_at(j) as i64;
            if is_odd(j) {
                r
            } else {
                -r
            }
        })
        .sum()
}

/// A bounded complex of finite-dimensional rational vector spaces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalComplex {
    start_degree: i32,
    dims: Vec<usize>,
    maps: Vec<RatMatrix>,
}

impl RationalComplex {
    pub fn new(start_degree: i32, dims: Vec<usize>, maps: Vec<RatMatrix>) -> Result<Self> {
        if maps.len() + 1 != dims.len().max(1) {
            return Err(Error::ShapeMismatch("wrong number of maps".into()));
        }
        for (k, m) in maps.iter().enumerate() {
            if m.cols() != dims[k] || m.rows() != dims[k + 1] {
                return Err(Error::ShapeMismatch(format!(
                    "map from degree {} has shape {}x{}",
                    start_degree + k as i32,
                    m.rows(),
                    m.cols()
                )));
            }
        }
        for (k, pair) in maps.windows(2).enumerate() {
            if !pair[1].mul(&pair[0])?.is_zero() {
                return Err(Error::NotAComplex {
                    degree: start_degree + k as i32,
                });
            }
        }
        Ok(Self {
            start_degree,
            dims,
            maps,
        })
    }

    pub fn start_degree(&self) -> i32 {
        self.start_degree
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn maps(&self) -> &[RatMatrix] {
        &self.maps
    }

    pub fn degrees(&self) -> impl Iterator<Item = i32> + '_ {
        (0..self.dims.len() as i32).map(move |k| self.start_degree + k)
    }

    fn slot(&self, degree: i32) -> Option<usize> {
        usize::try_from(degree - self.start_degree)
            .ok()
            .filter(|&k| k < self.dims.len())
    }

    pub fn dim_at(&self, degree: i32) -> usize {
        self.slot(degree).map_or(0, |k| self.dims[k])
    }

    /// The differential leaving `degree`, if there is one.
    pub fn map_from(&self, degree: i32) -> Option<&RatMatrix> {
        self.slot(degree).and_then(|k| self.maps.get(k))
    }
}

pub fn char_specialize(p: &PerfectComplex, chi: &GaloisChar) -> Result<RationalComplex> {
    if chi.group() != p.group {
        return Err(Error::GroupMismatch {
            expected: p.group,
            found: chi.group(),
        });
    }
    let maps = p
        .differentials
        .iter()
        .map(|d| apply_char_matrix(chi, d))
        .collect::<Result<Vec<_>>>()?;
    RationalComplex::new(p.start_degree, p.ranks.clone(), maps)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeCohomology {
    pub degree: i32,
    pub kernel: Vec<RatVector>,
    pub image: Vec<RatVector>,
    /// Cocycles completing `image` to a basis of `kernel`.
    pub cohomology: Vec<RatVector>,
}

/// Deterministic kernel, image and cohomology bases in every degree.
///
/// Kernels come from the RREF null space; images are the pivot columns of
/// the incoming map; cohomology representatives are the kernel vectors that
/// become pivots after the image basis.
pub fn cohomology_basis(c: &RationalComplex) -> Vec<DegreeCohomology> {
    c.degrees()
        .map(|j| {
            let dim = c.dim_at(j);
            let kernel = match c.map_from(j) {
                Some(d) => d.kernel(),
                None => standard_basis(dim),
            };
            let image = match c.map_from(j - 1) {
                Some(d) => {
                    let (_, pivots) = d.rref();
                    pivots.iter().map(|&p| d.column(p)).collect()
                }
                None => Vec::new(),
            };
            let mut cols = image.clone();
            cols.extend(kernel.iter().cloned());
            let (_, pivots) = RatMatrix::from_columns(dim, &cols)
                .expect("vectors of the ambient dimension")
                .rref();
            let cohomology = pivots
                .into_iter()
                .filter(|&p| p >= image.len())
                .map(|p| cols[p].clone())
                .collect();
            DegreeCohomology {
                degree: j,
                kernel,
                image,
                cohomology,
            }
        })
        .collect()
}

fn standard_basis(dim: usize) -> Vec<RatVector> {
    (0..dim)
        .map(|k| {
            let mut e = vec![Rational::zero(); dim];
            e[k] = Rational::one();
            e
        })
        .collect()
}

/// Which way the supplied matrix points between cohomology groups.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum IsoDirection {
    /// Columns are images of odd representatives in even ones.
    #[default]
    OddToEven,
    /// Columns are images of even representatives in odd ones; the inverse
    /// is used.
    EvenToOdd,
}

/// One character component of the cohomology isomorphism, together with the
/// cocycle representatives it is written in. Representatives are listed in
/// ascending degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharIso {
    pub odd_reps: Vec<(i32, RatVector)>,
    pub even_reps: Vec<(i32, RatVector)>,
    pub matrix: RatMatrix,
    pub direction: IsoDirection,
}

impl CharIso {
    pub fn empty() -> Self {
        Self {
            odd_reps: Vec::new(),
            even_reps: Vec::new(),
            matrix: RatMatrix::zeros(0, 0),
            direction: IsoDirection::OddToEven,
        }
    }

    /// Uses the canonical representatives of `cohomology_basis`.
    pub fn canonical(c: &RationalComplex, matrix: RatMatrix) -> Self {
        let mut odd_reps = Vec::new();
        let mut even_reps = Vec::new();
        for h in cohomology_basis(c) {
            let target = if is_odd(h.degree) {
                &mut odd_reps
            } else {
                &mut even_reps
            };
            target.extend(h.cohomology.into_iter().map(|v| (h.degree, v)));
        }
        Self {
            odd_reps,
            even_reps,
            matrix,
            direction: IsoDirection::OddToEven,
        }
    }

    /// The odd-to-even matrix, inverting if necessary.
    pub fn odd_to_even(&self) -> Result<RatMatrix> {
        let (rows, cols) = (self.even_reps.len(), self.odd_reps.len());
        let m = match self.direction {
            IsoDirection::OddToEven => self.matrix.clone(),
            IsoDirection::EvenToOdd => {
                if self.matrix.rows() != cols || self.matrix.cols() != rows {
                    return Err(Error::InvalidIso(
                        "matrix shape does not match representatives".into(),
                    ));
                }
                if rows != cols {
                    return Err(Error::InvalidIso("cohomology dimensions differ".into()));
                }
                self.matrix
                    .inverse()
                    .map_err(|_| Error::InvalidIso("matrix is not invertible".into()))?
            }
        };
        if m.rows() != rows || m.cols() != cols {
            return Err(Error::InvalidIso(format!(
                "matrix is {}x{} but there are {cols} odd and {rows} even representatives",
                m.rows(),
                m.cols()
            )));
        }
        if rows != cols || m.determinant()?.is_zero() {
            return Err(Error::InvalidIso("matrix is not invertible".into()));
        }
        Ok(m)
    }

    /// Multiplies the representatives of `degree` by `c`, keeping the matrix.
    pub fn rescale_reps(&self, degree: i32, c: &Rational) -> Self {
        let scale = |reps: &[(i32, RatVector)]| {
            reps.iter()
                .map(|(d, v)| {
                    let v = if *d == degree {
                        v.iter().map(|x| x * c).collect()
                    } else {
                        v.clone()
                    };
                    (*d, v)
                })
                .collect()
        };
        Self {
            odd_reps: scale(&self.odd_reps),
            even_reps: scale(&self.even_reps),
            matrix: self.matrix.clone(),
            direction: self.direction,
        }
    }
}

/// Cohomology isomorphism for all four characters of V4.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CohomologyIso {
    pub components: [CharIso; 4],
}

impl CohomologyIso {
    pub fn component(&self, label: CharLabel) -> &CharIso {
        &self.components[label.index()]
    }
}

/// How the splittings are chosen.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Splitting {
    /// Pivot-column image bases with standard-basis preimages, and the
    /// representatives exactly as supplied.
    #[default]
    Canonical,
    /// Random change of image basis, random kernel translate of every
    /// preimage, and a random coboundary added to every representative.
    Seeded(u64),
}

struct Adapted {
    /// Basis of `B^j` and their chosen preimages in `C^{j-1}`.
    image: Vec<RatVector>,
    preimage: Vec<RatVector>,
}

fn small_random(rng: &mut ChaCha8Rng) -> Rational {
    int(rng.gen_range(-4..=4))
}

fn adapted_image(
    c: &RationalComplex,
    degree: i32,
    rng: Option<&mut ChaCha8Rng>,
) -> Result<Adapted> {
    let Some(d) = c.map_from(degree - 1) else {
        return Ok(Adapted {
            image: Vec::new(),
            preimage: Vec::new(),
        });
    };
    let src_dim = d.cols();
    let (_, pivots) = d.rref();
    let basis = standard_basis(src_dim);
    let mut preimage: Vec<RatVector> = pivots.iter().map(|&p| basis[p].clone()).collect();
    if let Some(rng) = rng {
        let r = preimage.len();
        let change = loop {
            let rows = (0..r)
                .map(|_| (0..r).map(|_| small_random(rng)).collect())
                .collect();
            let m = RatMatrix::from_rows(rows)?;
            if r == 0 || !m.determinant()?.is_zero() {
                break m;
            }
        };
        let kernel = d.kernel();
        preimage = (0..r)
            .map(|k| {
                let mut v = vec![Rational::zero(); src_dim];
                for (i, u) in preimage.iter().enumerate() {
                    let f = &change[(i, k)];
                    for (x, y) in v.iter_mut().zip(u) {
                        *x += f * y;
                    }
                }
                for z in &kernel {
                    let f = small_random(rng);
                    for (x, y) in v.iter_mut().zip(z) {
                        *x += &f * y;
                    }
                }
                v
            })
            .collect();
    }
    let image = preimage
        .iter()
        .map(|v| d.mul_vec(v))
        .collect::<Result<Vec<_>>>()?;
    Ok(Adapted { image, preimage })
}

fn perturb_reps(
    reps: &[(i32, RatVector)],
    images: &BTreeMap<i32, Adapted>,
    rng: &mut ChaCha8Rng,
) -> Vec<(i32, RatVector)> {
    reps.iter()
        .map(|(deg, v)| {
            let mut v = v.clone();
            if let Some(a) = images.get(deg) {
                for b in &a.image {
                    let f = small_random(rng);
                    for (x, y) in v.iter_mut().zip(b) {
                        *x += &f * y;
                    }
                }
            }
            (*deg, v)
        })
        .collect()
}

/// Determinant of `phi : C^od -> C^ev` built from the given splittings.
///
/// The result does not depend on the splittings; `Splitting::Seeded` exists
/// to test exactly that.
pub fn torsion_determinant_with(
    c: &RationalComplex,
    iso: &CharIso,
    splitting: Splitting,
) -> Result<Rational> {
    let psi = iso.odd_to_even()?;
    for (odd, reps) in [(true, &iso.odd_reps), (false, &iso.even_reps)] {
        if reps.windows(2).any(|w| w[0].0 > w[1].0) {
            return Err(Error::InvalidIso(
                "representatives must be listed in ascending degree".into(),
            ));
        }
        for (deg, v) in reps.iter() {
            if odd != is_odd(*deg) {
                return Err(Error::InvalidIso(format!(
                    "representative in degree {deg} has the wrong parity"
                )));
            }
            if v.len() != c.dim_at(*deg) || c.dim_at(*deg) == 0 {
                return Err(Error::InvalidIso(format!(
                    "representative in degree {deg} has the wrong length"
                )));
            }
            if let Some(d) = c.map_from(*deg) {
                if !d.mul_vec(v)?.iter().all(Zero::is_zero) {
                    return Err(Error::InvalidIso(format!(
                        "representative in degree {deg} is not a cocycle"
                    )));
                }
            }
        }
    }

    let mut rng = match splitting {
        Splitting::Canonical => None,
        Splitting::Seeded(seed) => Some(ChaCha8Rng::seed_from_u64(seed)),
    };
    let mut images = BTreeMap::new();
    for j in c.degrees() {
        images.insert(j, adapted_image(c, j, rng.as_mut())?);
    }
    let (odd_reps, even_reps) = match rng.as_mut() {
        Some(rng) => (
            perturb_reps(&iso.odd_reps, &images, rng),
            perturb_reps(&iso.even_reps, &images, rng),
        ),
        None => (iso.odd_reps.clone(), iso.even_reps.clone()),
    };

    // offsets of each degree inside the odd / even totals
    let mut offset = BTreeMap::new();
    let (mut odd_total, mut even_total) = (0usize, 0usize);
    for j in c.degrees() {
        let total = if is_odd(j) {
            &mut odd_total
        } else {
            &mut even_total
        };
        offset.insert(j, *total);
        *total += c.dim_at(j);
    }
    if odd_total != even_total {
        return Err(Error::InvalidIso(format!(
            "odd part has dimension {odd_total} but even part {even_total}"
        )));
    }
    let n = odd_total;
    let embed = |deg: i32, v: &RatVector| -> RatVector {
        let mut out = vec![Rational::zero(); n];
        let o = offset[&deg];
        for (k, x) in v.iter().enumerate() {
            out[o + k] = x.clone();
        }
        out
    };

    // M_od: adapted basis of C^od; N: phi applied to it.
    let mut adapted_cols = Vec::with_capacity(n);
    let mut image_cols = Vec::with_capacity(n);
    let mut odd_rep_index = 0usize;
    for j in c.degrees().filter(|&j| is_odd(j)) {
        let here = &images[&j];
        let next = images.get(&(j + 1));
        let reps_here: Vec<(usize, &RatVector)> = odd_reps
            .iter()
            .enumerate()
            .filter(|(_, (d, _))| *d == j)
            .map(|(k, (_, v))| (k, v))
            .collect();
        let expected = c.dim_at(j);
        let got = here.image.len() + reps_here.len() + next.map_or(0, |a| a.preimage.len());
        if got != expected {
            return Err(Error::InvalidIso(format!(
                "degree {j}: {} representatives given but cohomology has dimension {}",
                reps_here.len(),
                expected as i64
                    - here.image.len() as i64
                    - next.map_or(0, |a| a.preimage.len()) as i64
            )));
        }
        for (b, s) in here.image.iter().zip(&here.preimage) {
            adapted_cols.push(embed(j, b));
            image_cols.push(embed(j - 1, s));
        }
        for (k, h) in reps_here {
            adapted_cols.push(embed(j, h));
            let mut target = vec![Rational::zero(); n];
            for (l, (deg, e)) in even_reps.iter().enumerate() {
                let f = &psi[(l, k)];
                if f.is_zero() {
                    continue;
                }
                for (x, y) in target.iter_mut().zip(embed(*deg, e)) {
                    *x += f * y;
                }
            }
            image_cols.push(target);
            odd_rep_index += 1;
        }
        if let Some(next) = next {
            for (b, s) in next.image.iter().zip(&next.preimage) {
                adapted_cols.push(embed(j, s));
                image_cols.push(embed(j + 1, b));
            }
        }
    }
    debug_assert_eq!(odd_rep_index, odd_reps.len());
    for j in c.degrees().filter(|&j| !is_odd(j)) {
        let here = images[&j].image.len();
        let next = images.get(&(j + 1)).map_or(0, |a| a.preimage.len());
        let reps = even_reps.iter().filter(|(d, _)| *d == j).count();
        if here + reps + next != c.dim_at(j) {
            return Err(Error::InvalidIso(format!(
                "degree {j}: {reps} representatives given but cohomology has dimension {}",
                c.dim_at(j) as i64 - here as i64 - next as i64
            )));
        }
    }

    let m_od = RatMatrix::from_columns(n, &adapted_cols)?;
    let det_od = m_od.determinant()?;
    if det_od.is_zero() {
        return Err(Error::InvalidIso(
            "odd representatives are not independent modulo coboundaries".into(),
        ));
    }
    let det_n = RatMatrix::from_columns(n, &image_cols)?.determinant()?;
    if det_n.is_zero() {
        return Err(Error::InvalidIso(
            "even representatives are not independent modulo coboundaries".into(),
        ));
    }
    Ok(det_n / det_od)
}

pub fn torsion_determinant(c: &RationalComplex, iso: &CharIso) -> Result<Rational> {
    torsion_determinant_with(c, iso, Splitting::Canonical)
}

pub fn class_representative_with(
    p: &PerfectComplex,
    iso: &CohomologyIso,
    splitting: Splitting,
) -> Result<HomRep> {
    if p.group != FiniteGroupId::V4 {
        return Err(Error::UnsupportedGroup(p.group));
    }
    HomRep::from_fn(|label| {
        let c = char_specialize(p, &GaloisChar::v4(label))?;
        torsion_determinant_with(&c, iso.component(label), splitting)
    })
}

pub fn class_representative(p: &PerfectComplex, iso: &CohomologyIso) -> Result<HomRep> {
    class_representative_with(p, iso, Splitting::Canonical)
}

// JSON fixture format.

#[derive(Serialize, Deserialize)]
struct MatrixJson {
    rows: usize,
    cols: usize,
    /// Row-major sparse `{element: "num/den"}` maps.
    entries: Vec<Vec<BTreeMap<String, String>>>,
}

#[derive(Serialize, Deserialize)]
struct ComplexJson {
    group: FiniteGroupId,
    degrees: [i32; 2],
    ranks: Vec<usize>,
    differentials: Vec<MatrixJson>,
}

impl Serialize for PerfectComplex {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let sparse = |e: &GroupRingElem| {
            e.support()
                .map(|(g, q)| (g.name(), crate::rational::format_rational(q)))
                .collect::<BTreeMap<_, _>>()
        };
        let json = ComplexJson {
            group: self.group,
            degrees: [
                self.start_degree,
                self.start_degree + self.ranks.len() as i32 - 1,
            ],
            ranks: self.ranks.clone(),
            differentials: self
                .differentials
                .iter()
                .map(|d| MatrixJson {
                    rows: d.rows(),
                    cols: d.cols(),
                    entries: d
                        .rows_iter()
                        .map(|r| r.iter().map(sparse).collect())
                        .collect(),
                })
                .collect(),
        };
        json.serialize(s)
    }
}

impl<'de> Deserialize<'de> for PerfectComplex {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let json = ComplexJson::deserialize(d)?;
        if json.degrees[1] - json.degrees[0] + 1 != json.ranks.len() as i32 {
            return Err(D::Error::custom(
                "degree range does not match the number of ranks",
            ));
        }
        let diffs = json
            .differentials
            .iter()
            .map(|m| {
                let rows = m
                    .entries
                    .iter()
                    .map(|r| {
                        r.iter()
                            .map(|e| GroupRingElem::from_sparse(json.group, e))
                            .collect::<Result<Vec<_>>>()
                    })
                    .collect::<Result<Vec<_>>>()?;
                if m.cols == 0 || m.rows == 0 {
                    return Ok(GroupRingMatrix::zeros(json.group, m.rows, m.cols));
                }
                let out = GroupRingMatrix::from_rows(json.group, rows)?;
                if out.rows() != m.rows || out.cols() != m.cols {
                    return Err(Error::ShapeMismatch(
                        "declared shape differs from entries".into(),
                    ));
                }
                Ok(out)
            })
            .collect::<Result<Vec<_>>>()
            .map_err(D::Error::custom)?;
        PerfectComplex::new(json.group, json.degrees[0], json.ranks, diffs)
            .map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grouprings::GroupElement;
    use crate::rational::rat;
    use proptest::prelude::*;

    fn qm(rows: &[&[i64]]) -> RatMatrix {
        RatMatrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| int(x)).collect())
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn euler_characteristic_sign_convention() {
        let g = FiniteGroupId::V4;
        assert_eq!(euler_characteristic(&PerfectComplex::empty(g)), 0);
        let single = PerfectComplex::new(g, 0, vec![3], vec![]).unwrap();
        assert_eq!(euler_characteristic(&single), -3);
        let three = PerfectComplex::new(
            g,
            -2,
            vec![1, 2, 1],
            vec![
                GroupRingMatrix::zeros(g, 2, 1),
                GroupRingMatrix::zeros(g, 1, 2),
            ],
        )
        .unwrap();
        assert_eq!(euler_characteristic(&three), 0);
    }

    #[test]
    fn rejects_non_complexes() {
        let g = FiniteGroupId::V4;
        let one = GroupRingElem::one(g);
        let d = GroupRingMatrix::from_rows(g, vec![vec![one.clone()]]).unwrap();
        let err = PerfectComplex::new(g, 0, vec![1, 1, 1], vec![d.clone(), d]).unwrap_err();
        assert_eq!(err, Error::NotAComplex { degree: 0 });
        assert!(matches!(
            PerfectComplex::new(g, 0, vec![1, 2], vec![GroupRingMatrix::zeros(g, 1, 1)]),
            Err(Error::ShapeMismatch(_))
        ));
    }

    #[test]
    fn cohomology_of_multiplication_by_two() {
        let c = RationalComplex::new(0, vec![1, 1], vec![qm(&[&[2]])]).unwrap();
        let h = cohomology_basis(&c);
        assert!(h[0].kernel.is_empty() && h[0].cohomology.is_empty());
        assert_eq!(h[1].image.len(), 1);
        assert!(h[1].cohomology.is_empty());
        let det = torsion_determinant(&c, &CharIso::empty()).unwrap();
        // phi: C^1 -> C^0 inverts multiplication by 2
        assert_eq!(det, rat(1, 2));
    }

    #[test]
    fn zero_complex() {
        let c = RationalComplex::new(0, vec![0, 0], vec![RatMatrix::zeros(0, 0)]).unwrap();
        assert!(cohomology_basis(&c).iter().all(|h| h.kernel.is_empty()));
        assert_eq!(torsion_determinant(&c, &CharIso::empty()).unwrap(), int(1));
    }

    #[test]
    fn zero_differentials_identity_iso() {
        let g = FiniteGroupId::V4;
        let p =
            PerfectComplex::new(g, -1, vec![2, 2], vec![GroupRingMatrix::zeros(g, 2, 2)]).unwrap();
        let comps = std::array::from_fn(|k| {
            let c = char_specialize(&p, &GaloisChar::v4(CharLabel::ALL[k])).unwrap();
            CharIso::canonical(&c, RatMatrix::identity(2))
        });
        let h = class_representative(&p, &CohomologyIso { components: comps }).unwrap();
        assert_eq!(h, HomRep::identity());
    }

    #[test]
    fn iso_contract_violations() {
        let c = RationalComplex::new(-1, vec![1, 1], vec![RatMatrix::zeros(1, 1)]).unwrap();
        let singular = CharIso::canonical(&c, qm(&[&[0]]));
        assert!(matches!(
            torsion_determinant(&c, &singular),
            Err(Error::InvalidIso(_))
        ));
        let wrong_shape = CharIso::canonical(&c, RatMatrix::identity(2));
        assert!(matches!(
            torsion_determinant(&c, &wrong_shape),
            Err(Error::InvalidIso(_))
        ));
        assert!(matches!(
            torsion_determinant(&c, &CharIso::empty()),
            Err(Error::InvalidIso(_))
        ));
        let c2 = RationalComplex::new(-1, vec![1, 1], vec![qm(&[&[3]])]).unwrap();
        let not_cocycle = CharIso {
            odd_reps: vec![(-1, vec![int(1)])],
            even_reps: vec![(0, vec![int(1)])],
            matrix: RatMatrix::identity(1),
            direction: IsoDirection::OddToEven,
        };
        assert!(matches!(
            torsion_determinant(&c2, &not_cocycle),
            Err(Error::InvalidIso(_))
        ));
    }

    #[test]
    fn even_to_odd_direction_is_inverted() {
        let c = RationalComplex::new(-1, vec![2, 2], vec![RatMatrix::zeros(2, 2)]).unwrap();
        let psi = qm(&[&[2, 1], &[1, 1]]);
        let forward = CharIso::canonical(&c, psi.clone());
        let mut backward = CharIso::canonical(&c, psi.inverse().unwrap());
        backward.direction = IsoDirection::EvenToOdd;
        assert_eq!(
            torsion_determinant(&c, &forward).unwrap(),
            torsion_determinant(&c, &backward).unwrap()
        );
    }

    #[test]
    fn json_round_trip() {
        let g = FiniteGroupId::V4;
        let a = GroupRingElem::element(GroupElement::A);
        let one = GroupRingElem::one(g);
        let d = GroupRingMatrix::from_rows(g, vec![vec![&a - &one], vec![&a + &one]]).unwrap();
        let p = PerfectComplex::new(g, 3, vec![1, 2], vec![d]).unwrap();
        let s = serde_json::to_string(&p).unwrap();
        assert!(s.contains(r#""degrees":[3,4]"#), "{s}");
        let back: PerfectComplex = serde_json::from_str(&s).unwrap();
        assert_eq!(back, p);
    }

    proptest! {
        #[test]
        fn splitting_independence_balanced(seed in 0u64..10_000, s1 in any::<u64>(), s2 in any::<u64>(), a in 1i64..5, b in -3i64..4) {
            // degrees 0..2 dims 2, 3, 1; d0 rank 1, d1 rank 1 -> H^0 1, H^1 1, H^2 0
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut rand_inv = |n: usize| loop {
                let m = RatMatrix::from_rows(
                    (0..n).map(|_| (0..n).map(|_| small_random(&mut rng)).collect()).collect(),
                ).unwrap();
                if !m.determinant().unwrap().is_zero() { break m; }
            };
            let (u, v) = (rand_inv(2), rand_inv(3));
            let d0 = v.mul(&qm(&[&[1, 0], &[0, 0], &[0, 0]])).unwrap().mul(&u).unwrap();
            let d1 = qm(&[&[0, 1, 0]]).mul(&v.inverse().unwrap()).unwrap();
            let c = RationalComplex::new(0, vec![2, 3, 1], vec![d0, d1]).unwrap();
            let iso = CharIso::canonical(&c, qm(&[&[a]]));
            let canonical = torsion_determinant(&c, &iso).unwrap();
            prop_assert_eq!(torsion_determinant_with(&c, &iso, Splitting::Seeded(s1)).unwrap(), canonical.clone());
            prop_assert_eq!(torsion_determinant_with(&c, &iso, Splitting::Seeded(s2)).unwrap(), canonical.clone());

            // rescaling psi by c on a 1-dim block multiplies the result by c
            if b != 0 {
                let cb = int(b);
                let scaled = CharIso { matrix: iso.matrix.scaled(&cb), ..iso.clone() };
                prop_assert_eq!(torsion_determinant(&c, &scaled).unwrap(), &canonical * &cb);
                // rescaling odd representatives divides, even multiplies
                prop_assert_eq!(torsion_determinant(&c, &iso.rescale_reps(1, &cb)).unwrap(), &canonical / &cb);
                prop_assert_eq!(torsion_determinant(&c, &iso.rescale_reps(0, &cb)).unwrap(), &canonical * &cb);
            }
        }
    }
}
