//! Coordinates on the matroid Schubert variety `Y ⊆ (P^1)^n` of an
//! essential arrangement: the closure of `V` under `v ↦ (ℓ_1(v), …, ℓ_n(v))`.
//!
//! A point of `P^1` is either a finite rational `z` (standing for `[z:1]`)
//! or infinity (`[1:0]`). A point of `(P^1)^n` lies on `Y` exactly when its
//! finite coordinates form a flat `F` and the values on `F` are the
//! restriction of some `ℓ(v)`. The group `V` acts by translation with
//! infinity absorbing, so orbits, stabilizers, neighborhoods and slices all
//! reduce to bookkeeping on `F` plus one linear solve.

use std::fmt;

use num_traits::Zero;

use crate::arrangement::{Arrangement, FlatLattice, MatroidFlat, Restriction};
use crate::error::{Error, Result};
use crate::linalg::{dot, rref_with_pivots, LinearMap, Matrix, Rational, Subspace};
use crate::pha::{check_arrangement_morphism, ArrangementMorphismCheck, Pullback};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ExtendedScalar {
    Finite(Rational),
    Infinity,
}

impl ExtendedScalar {
    pub fn zero() -> Self {
        ExtendedScalar::Finite(Rational::zero())
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, ExtendedScalar::Finite(_))
    }

    pub fn finite(&self) -> Option<&Rational> {
        match self {
            ExtendedScalar::Finite(q) => Some(q),
            ExtendedScalar::Infinity => None,
        }
    }

    /// `z + c`, with `∞ + c = ∞`.
    pub fn translate(&self, c: &Rational) -> Self {
        match self {
            ExtendedScalar::Finite(q) => ExtendedScalar::Finite(q + c),
            ExtendedScalar::Infinity => ExtendedScalar::Infinity,
        }
    }

    /// `c · z`, with `c · ∞ = ∞`.
    pub fn scale(&self, c: &Rational) -> Self {
        match self {
            ExtendedScalar::Finite(q) => ExtendedScalar::Finite(q * c),
            ExtendedScalar::Infinity => ExtendedScalar::Infinity,
        }
    }
}

impl fmt::Display for ExtendedScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtendedScalar::Finite(q) => write!(f, "{q}"),
            ExtendedScalar::Infinity => write!(f, "inf"),
        }
    }
}

impl From<Rational> for ExtendedScalar {
    fn from(q: Rational) -> Self {
        ExtendedScalar::Finite(q)
    }
}

/// A point of `(P^1)^n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExtendedPoint {
    coords: Vec<ExtendedScalar>,
}

impl ExtendedPoint {
    pub fn new(coords: Vec<ExtendedScalar>) -> Self {
        ExtendedPoint { coords }
    }

    pub fn finite(values: Vec<Rational>) -> Self {
        ExtendedPoint {
            coords: values.into_iter().map(ExtendedScalar::Finite).collect(),
        }
    }

    /// Builds a point from integers, `None` meaning infinity.
    pub fn from_i64(values: &[Option<i64>]) -> Self {
        ExtendedPoint {
            coords: values
                .iter()
                .map(|v| match v {
                    Some(x) => ExtendedScalar::Finite(crate::linalg::int(*x)),
                    None => ExtendedScalar::Infinity,
                })
                .collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn coords(&self) -> &[ExtendedScalar] {
        &self.coords
    }

    pub fn coord(&self, i: usize) -> &ExtendedScalar {
        &self.coords[i]
    }

    /// Indices of the finite coordinates.
    pub fn finite_support(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&i| self.coords[i].is_finite())
            .collect()
    }

    /// Coordinate projection onto `indices`.
    pub fn project(&self, indices: &[usize]) -> Vec<ExtendedScalar> {
        indices.iter().map(|&i| self.coords[i].clone()).collect()
    }
}

impl fmt::Display for ExtendedPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// Verdict of [`SchubertVariety::classify`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Membership {
    Member,
    /// The finite coordinates do not form a flat.
    SupportNotAFlat,
    /// The finite values are not `ℓ_F(v)` for any `v`.
    InconsistentValues,
}

impl Membership {
    pub fn is_member(self) -> bool {
        self == Membership::Member
    }

    pub fn code(self) -> &'static str {
        match self {
            Membership::Member => "member",
            Membership::SupportNotAFlat => "support-not-a-flat",
            Membership::InconsistentValues => "inconsistent-values",
        }
    }
}

/// The `V`-orbit of a point: its support flat and `π_F(V) ⊆ Q^F`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct OrbitDescriptor {
    pub flat: Vec<usize>,
    pub image: Subspace,
}

/// Solves `ℓ_i(v) = rhs_i` for the given rows; returns one solution.
pub(crate) fn solve(d: usize, rows: &[&[Rational]], rhs: &[Rational]) -> Option<Vec<Rational>> {
    let augmented: Vec<Vec<Rational>> = rows
        .iter()
        .zip(rhs)
        .map(|(row, b)| {
            let mut r = row.to_vec();
            r.push(b.clone());
            r
        })
        .collect();
    let m = Matrix::from_rows(d + 1, augmented).expect("rows have length d");
    let (r, pivots) = rref_with_pivots(&m);
    if pivots.last() == Some(&d) {
        return None;
    }
    let mut v = vec![Rational::zero(); d];
    for (i, &p) in pivots.iter().enumerate() {
        v[p] = r.get(i, d).clone();
    }
    Some(v)
}

/// Matroid Schubert variety of an essential arrangement.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SchubertVariety {
    arrangement: Arrangement,
    lattice: FlatLattice,
}

impl SchubertVariety {
    pub fn new(arrangement: Arrangement) -> Result<Self> {
        if !arrangement.is_essential() {
            return Err(Error::NotEssential);
        }
        let lattice = arrangement.flats();
        Ok(SchubertVariety {
            arrangement,
            lattice,
        })
    }

    pub fn arrangement(&self) -> &Arrangement {
        &self.arrangement
    }

    pub fn lattice(&self) -> &FlatLattice {
        &self.lattice
    }

    /// Number of coordinates `n`.
    pub fn len(&self) -> usize {
        self.arrangement.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arrangement.is_empty()
    }

    pub fn ambient_dim(&self) -> usize {
        self.arrangement.ambient_dim()
    }

    fn check_point(&self, x: &ExtendedPoint) -> Result<()> {
        if x.len() != self.len() {
            return Err(Error::DimensionMismatch {
                expected: self.len(),
                found: x.len(),
            });
        }
        Ok(())
    }

    fn require_member(&self, x: &ExtendedPoint) -> Result<()> {
        if self.classify(x)?.is_member() {
            Ok(())
        } else {
            Err(Error::NotAMember)
        }
    }

    fn lattice_flat(&self, f: &MatroidFlat) -> Result<&MatroidFlat> {
        self.lattice
            .position_of_indices(&f.indices)
            .map(|i| self.lattice.get(i))
            .filter(|g| g.subspace == f.subspace)
            .ok_or_else(|| Error::NotAFlat {
                indices: f.indices.clone(),
            })
    }

    pub fn embed(&self, v: &[Rational]) -> Result<ExtendedPoint> {
        Ok(ExtendedPoint::finite(self.arrangement.evaluate(v)?))
    }

    /// A vector `v` with `ℓ_i(v) = x_i` on the finite coordinates, if any.
    pub fn lift(&self, x: &ExtendedPoint) -> Result<Option<Vec<Rational>>> {
        self.check_point(x)?;
        let support = x.finite_support();
        let rows: Vec<&[Rational]> = support
            .iter()
            .map(|&i| self.arrangement.normal(i))
            .collect();
        let rhs: Vec<Rational> = support
            .iter()
            .map(|&i| x.coord(i).finite().expect("support").clone())
            .collect();
        Ok(solve(self.ambient_dim(), &rows, &rhs))
    }

    pub fn classify(&self, x: &ExtendedPoint) -> Result<Membership> {
        self.check_point(x)?;
        if !self.lattice.contains_indices(&x.finite_support()) {
            return Ok(Membership::SupportNotAFlat);
        }
        Ok(match self.lift(x)? {
            Some(_) => Membership::Member,
            None => Membership::InconsistentValues,
        })
    }

    pub fn membership(&self, x: &ExtendedPoint) -> Result<bool> {
        Ok(self.classify(x)?.is_member())
    }

    /// Translation by `v`; infinity absorbs.
    pub fn act(&self, v: &[Rational], x: &ExtendedPoint) -> Result<ExtendedPoint> {
        self.require_member(x)?;
        self.translate(v, x)
    }

    /// Coordinatewise `x_i + ℓ_i(v)` on all of `(P^1)^n`, members or not.
    pub fn translate(&self, v: &[Rational], x: &ExtendedPoint) -> Result<ExtendedPoint> {
        if x.len() != self.arrangement.len() {
            return Err(Error::DimensionMismatch {
                expected: self.arrangement.len(),
                found: x.len(),
            });
        }
        let shift = self.arrangement.evaluate(v)?;
        Ok(ExtendedPoint::new(
            x.coords
                .iter()
                .zip(&shift)
                .map(|(c, s)| c.translate(s))
                .collect(),
        ))
    }

    pub fn orbit_descriptor(&self, x: &ExtendedPoint) -> Result<OrbitDescriptor> {
        self.require_member(x)?;
        let flat = x.finite_support();
        let rows: Vec<Vec<Rational>> = flat
            .iter()
            .map(|&i| self.arrangement.normal(i).to_vec())
            .collect();
        let restricted = Matrix::from_rows(self.ambient_dim(), rows)?;
        let image = Subspace::row_space(&restricted.transpose());
        Ok(OrbitDescriptor { flat, image })
    }

    /// `0` on the flat, infinity elsewhere.
    pub fn distinguished_point(&self, f: &MatroidFlat) -> Result<ExtendedPoint> {
        let f = self.lattice_flat(f)?;
        Ok(self.point_at(&f.indices))
    }

    pub(crate) fn point_at(&self, indices: &[usize]) -> ExtendedPoint {
        let mut coords = vec![ExtendedScalar::Infinity; self.len()];
        for &i in indices {
            coords[i] = ExtendedScalar::zero();
        }
        ExtendedPoint::new(coords)
    }

    /// `V_x = ∩_{i ∈ F} H_i` for the support `F` of `x`.
    pub fn stabilizer(&self, x: &ExtendedPoint) -> Result<Subspace> {
        self.require_member(x)?;
        self.arrangement.intersection(&x.finite_support())
    }

    /// Whether `q` lies in the smallest invariant open neighborhood of `x`.
    pub fn in_minimal_neighborhood(&self, x: &ExtendedPoint, q: &ExtendedPoint) -> Result<bool> {
        self.require_member(x)?;
        self.require_member(q)?;
        Ok(x.finite_support().iter().all(|&i| q.coord(i).is_finite()))
    }

    /// Whether `q` lies in the minimal slice through `x`.
    pub fn in_minimal_slice(&self, x: &ExtendedPoint, q: &ExtendedPoint) -> Result<bool> {
        self.require_member(x)?;
        self.require_member(q)?;
        Ok(x.finite_support().iter().all(|&i| x.coord(i) == q.coord(i)))
    }

    /// The slice through the distinguished point of `f`, i.e. the variety of
    /// the restriction to `f` embedded with zeros on `f`.
    pub fn slice_at(&self, f: &MatroidFlat) -> Result<Slice> {
        let f = self.lattice_flat(f)?;
        let restriction = self.arrangement.restriction(f)?;
        let variety = SchubertVariety::new(restriction.arrangement().clone())?;
        let embedding = SliceEmbedding {
            restricted_len: variety.len(),
            assignment: restriction.assignment().to_vec(),
        };
        Ok(Slice {
            variety,
            restriction,
            embedding,
        })
    }

    /// Support flat of `lim_{t→∞} t·v`: the hyperplanes containing `v`.
    pub fn limit_indices(&self, v: &[Rational]) -> Result<Vec<usize>> {
        let values = self.arrangement.evaluate(v)?;
        Ok((0..values.len()).filter(|&i| values[i].is_zero()).collect())
    }

    /// `lim_{t→∞} t·v`, always a distinguished point.
    pub fn limit(&self, v: &[Rational]) -> Result<ExtendedPoint> {
        Ok(self.point_at(&self.limit_indices(v)?))
    }
}

/// A slice through a distinguished point together with its coordinate
/// injection into the ambient variety.
#[derive(Clone, Debug)]
pub struct Slice {
    pub variety: SchubertVariety,
    pub restriction: Restriction,
    pub embedding: SliceEmbedding,
}

/// Coordinate injection `(P^1)^{n'} → (P^1)^n` of a slice: coordinates on
/// the flat are pinned to 0, every other coordinate `i` copies restricted
/// coordinate `k(i)` scaled by `c_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SliceEmbedding {
    restricted_len: usize,
    assignment: Vec<Option<(usize, Rational)>>,
}

impl SliceEmbedding {
    pub fn assignment(&self) -> &[Option<(usize, Rational)>] {
        &self.assignment
    }

    pub fn inject(&self, q: &ExtendedPoint) -> Result<ExtendedPoint> {
        if q.len() != self.restricted_len {
            return Err(Error::DimensionMismatch {
                expected: self.restricted_len,
                found: q.len(),
            });
        }
        Ok(ExtendedPoint::new(
            self.assignment
                .iter()
                .map(|a| match a {
                    None => ExtendedScalar::zero(),
                    Some((k, c)) => q.coord(*k).scale(c),
                })
                .collect(),
        ))
    }

    /// The unique restricted point injecting onto `q`, if there is one.
    pub fn pullback(&self, q: &ExtendedPoint) -> Result<Option<ExtendedPoint>> {
        if q.len() != self.assignment.len() {
            return Err(Error::DimensionMismatch {
                expected: self.assignment.len(),
                found: q.len(),
            });
        }
        let mut coords: Vec<Option<ExtendedScalar>> = vec![None; self.restricted_len];
        for (i, a) in self.assignment.iter().enumerate() {
            if let Some((k, c)) = a {
                if coords[*k].is_none() {
                    coords[*k] = Some(q.coord(i).scale(&c.recip()));
                }
            }
        }
        let candidate = ExtendedPoint::new(
            coords
                .into_iter()
                .map(|c| c.expect("every restricted hyperplane has a source"))
                .collect(),
        );
        Ok((self.inject(&candidate)? == *q).then_some(candidate))
    }
}

/// One coordinate of an extended morphism.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MorphismComponent {
    /// The target hyperplane pulls back to everything: constant 0.
    Constant,
    /// `c · x_j` for source coordinate `j`.
    Scaled { source: usize, scale: Rational },
}

/// Extension of a linear map to the Schubert varieties of two arrangements.
#[derive(Clone, Debug)]
pub struct SchubertMorphism {
    map: LinearMap,
    source_len: usize,
    components: Vec<MorphismComponent>,
}

impl SchubertMorphism {
    pub fn new(t: &LinearMap, y1: &SchubertVariety, y2: &SchubertVariety) -> Result<Self> {
        let pullbacks = match check_arrangement_morphism(t, &y1.arrangement, &y2.arrangement)? {
            ArrangementMorphismCheck::Valid(p) => p,
            ArrangementMorphismCheck::PreimageNotHyperplane { target, preimage } => {
                return Err(Error::InvalidMorphism { target, preimage })
            }
        };
        let d1 = y1.ambient_dim();
        let components = pullbacks
            .into_iter()
            .enumerate()
            .map(|(target, p)| match p {
                Pullback::Everything => Ok(MorphismComponent::Constant),
                Pullback::Hyperplane(j) => {
                    let normal = y1.arrangement.normal(j);
                    let k = normal
                        .iter()
                        .position(|x| !x.is_zero())
                        .expect("normals are nonzero");
                    let mut witness = vec![Rational::zero(); d1];
                    witness[k] = Rational::from_integer(1.into());
                    let image = t.apply(&witness)?;
                    let scale = dot(y2.arrangement.normal(target), &image) / &normal[k];
                    Ok(MorphismComponent::Scaled { source: j, scale })
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(SchubertMorphism {
            map: t.clone(),
            source_len: y1.len(),
            components,
        })
    }

    pub fn map(&self) -> &LinearMap {
        &self.map
    }

    pub fn components(&self) -> &[MorphismComponent] {
        &self.components
    }

    /// Applies the coordinate formula. The caller is responsible for `x`
    /// being a source member; see [`extend_morphism`] for the checked path.
    pub fn apply(&self, x: &ExtendedPoint) -> Result<ExtendedPoint> {
        if x.len() != self.source_len {
            return Err(Error::DimensionMismatch {
                expected: self.source_len,
                found: x.len(),
            });
        }
        Ok(ExtendedPoint::new(
            self.components
                .iter()
                .map(|c| match c {
                    MorphismComponent::Constant => ExtendedScalar::zero(),
                    MorphismComponent::Scaled { source, scale } => x.coord(*source).scale(scale),
                })
                .collect(),
        ))
    }
}

pub fn extend_morphism(
    t: &LinearMap,
    y1: &SchubertVariety,
    y2: &SchubertVariety,
    x: &ExtendedPoint,
) -> Result<ExtendedPoint> {
    let morphism = SchubertMorphism::new(t, y1, y2)?;
    y1.require_member(x)?;
    morphism.apply(x)
}
