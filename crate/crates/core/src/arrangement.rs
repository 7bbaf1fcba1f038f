//! Central hyperplane arrangements and their lattices of flats.
//!
//! Hyperplanes are indexed `0..n` in the order their normals were given.
//! Index sets are kept as sorted `Vec<usize>`.

use std::collections::BTreeSet;

use num_traits::Zero;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::{dot, normalize_leading, Matrix, Rational, Subspace};

/// Arrangement of linear hyperplanes `H_i = ker ℓ_i` in `Q^d`.
///
/// Normals are stored scaled so their first nonzero entry is 1; no two
/// normals are proportional.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Arrangement {
    ambient_dim: usize,
    normals: Vec<Vec<Rational>>,
    hyperplanes: Vec<Subspace>,
}

impl Arrangement {
    pub fn new(ambient_dim: usize, normals: Vec<Vec<Rational>>) -> Result<Self> {
        let mut stored: Vec<Vec<Rational>> = Vec::with_capacity(normals.len());
        for (index, mut normal) in normals.into_iter().enumerate() {
            if normal.len() != ambient_dim {
                return Err(Error::DimensionMismatch {
                    expected: ambient_dim,
                    found: normal.len(),
                });
            }
            if normalize_leading(&mut normal).is_none() {
                return Err(Error::ZeroNormal { index });
            }
            if let Some(first) = stored.iter().position(|n| *n == normal) {
                return Err(Error::DuplicateHyperplane {
                    first,
                    second: index,
                });
            }
            stored.push(normal);
        }
        let hyperplanes = stored
            .iter()
            .map(|n| {
                let row = Matrix::from_rows(ambient_dim, vec![n.clone()]).expect("length checked");
                crate::linalg::kernel(&row)
            })
            .collect();
        Ok(Arrangement {
            ambient_dim,
            normals: stored,
            hyperplanes,
        })
    }

    pub fn from_i64(ambient_dim: usize, normals: &[&[i64]]) -> Result<Self> {
        Arrangement::new(
            ambient_dim,
            normals.iter().map(|n| crate::linalg::vector(n)).collect(),
        )
    }

    /// The arrangement with no hyperplanes in `Q^d`.
    pub fn empty(ambient_dim: usize) -> Self {
        Arrangement {
            ambient_dim,
            normals: Vec::new(),
            hyperplanes: Vec::new(),
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    /// Number of hyperplanes.
    pub fn len(&self) -> usize {
        self.normals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.normals.is_empty()
    }

    pub fn normals(&self) -> &[Vec<Rational>] {
        &self.normals
    }

    pub fn normal(&self, i: usize) -> &[Rational] {
        &self.normals[i]
    }

    pub fn hyperplane(&self, i: usize) -> &Subspace {
        &self.hyperplanes[i]
    }

    pub fn hyperplanes(&self) -> &[Subspace] {
        &self.hyperplanes
    }

    pub fn normal_matrix(&self) -> Matrix {
        Matrix::from_rows(self.ambient_dim, self.normals.clone()).expect("normals have length d")
    }

    /// Evaluates every covector on `v`: the embedding `v ↦ (ℓ_1(v), …, ℓ_n(v))`.
    pub fn evaluate(&self, v: &[Rational]) -> Result<Vec<Rational>> {
        self.check_vector(v)?;
        Ok(self.normals.iter().map(|n| dot(n, v)).collect())
    }

    pub(crate) fn check_vector(&self, v: &[Rational]) -> Result<()> {
        if v.len() != self.ambient_dim {
            return Err(Error::DimensionMismatch {
                expected: self.ambient_dim,
                found: v.len(),
            });
        }
        Ok(())
    }

    pub(crate) fn check_indices(&self, indices: &[usize]) -> Result<()> {
        match indices.iter().find(|&&i| i >= self.len()) {
            Some(&index) => Err(Error::IndexOutOfRange {
                index,
                size: self.len(),
            }),
            None => Ok(()),
        }
    }

    /// `∩_{i ∈ indices} H_i`; the whole space for an empty index set.
    pub fn intersection(&self, indices: &[usize]) -> Result<Subspace> {
        self.check_indices(indices)?;
        let rows = indices.iter().map(|&i| self.normals[i].clone()).collect();
        let m = Matrix::from_rows(self.ambient_dim, rows)?;
        Ok(crate::linalg::kernel(&m))
    }

    /// Indices of the hyperplanes containing `s`.
    pub fn hyperplanes_containing(&self, s: &Subspace) -> Result<Vec<usize>> {
        if s.ambient_dim() != self.ambient_dim {
            return Err(Error::DimensionMismatch {
                expected: self.ambient_dim,
                found: s.ambient_dim(),
            });
        }
        Ok((0..self.len())
            .filter(|&i| {
                s.basis()
                    .row_iter()
                    .all(|b| dot(&self.normals[i], b).is_zero())
            })
            .collect())
    }

    pub fn is_essential(&self) -> bool {
        self.normal_matrix().rank() == self.ambient_dim
    }

    /// Smallest flat containing `s`: `{i : H_i ⊇ ∩_{j∈s} H_j}`.
    pub fn closure(&self, s: &[usize]) -> Result<Vec<usize>> {
        let meet = self.intersection(s)?;
        self.hyperplanes_containing(&meet)
    }

    pub fn is_flat(&self, s: &[usize]) -> Result<bool> {
        let sorted = sorted_set(s);
        Ok(self.closure(&sorted)? == sorted)
    }

    /// Every flat, in (cardinality, lexicographic) order.
    pub fn flats(&self) -> FlatLattice {
        let bottom = self.closure(&[]).expect("empty set is in range");
        let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
        seen.insert(bottom.clone());
        let mut frontier = vec![bottom];
        while !frontier.is_empty() {
            // Covers of each frontier flat are independent closure computations.
            let next: Vec<Vec<usize>> = frontier
                .par_iter()
                .flat_map_iter(|flat| {
                    (0..self.len())
                        .filter(|i| flat.binary_search(i).is_err())
                        .map(|i| {
                            let mut s = flat.clone();
                            s.push(i);
                            s.sort_unstable();
                            self.closure(&s).expect("indices in range")
                        })
                        .collect::<Vec<_>>()
                })
                .collect();
            frontier = next
                .into_iter()
                .filter(|f| seen.insert(f.clone()))
                .collect();
        }
        let mut indices: Vec<Vec<usize>> = seen.into_iter().collect();
        indices.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        let flats = indices
            .into_par_iter()
            .map(|indices| {
                let subspace = self.intersection(&indices).expect("indices in range");
                MatroidFlat { indices, subspace }
            })
            .collect();
        FlatLattice { flats }
    }

    /// The flat with the given index set, or `NotAFlat`.
    pub fn flat(&self, indices: &[usize]) -> Result<MatroidFlat> {
        let sorted = sorted_set(indices);
        if !self.is_flat(&sorted)? {
            return Err(Error::NotAFlat { indices: sorted });
        }
        let subspace = self.intersection(&sorted)?;
        Ok(MatroidFlat {
            indices: sorted,
            subspace,
        })
    }

    /// Restriction of the arrangement to the flat `f`.
    pub fn restriction(&self, f: &MatroidFlat) -> Result<Restriction> {
        let expected = self.flat(&f.indices)?;
        if expected.subspace != f.subspace {
            return Err(Error::NotAFlat {
                indices: f.indices.clone(),
            });
        }
        let frame = f.subspace.clone();
        let mut normals: Vec<Vec<Rational>> = Vec::new();
        let mut sources: Vec<Vec<usize>> = Vec::new();
        let mut assignment = Vec::with_capacity(self.len());
        for i in 0..self.len() {
            if f.indices.binary_search(&i).is_ok() {
                assignment.push(None);
                continue;
            }
            // ℓ_i restricted to the frame: s ↦ ℓ_i(Σ s_j b_j).
            let mut local: Vec<Rational> = frame
                .basis()
                .row_iter()
                .map(|b| dot(&self.normals[i], b))
                .collect();
            let scale = normalize_leading(&mut local).expect("i outside the flat");
            let k = match normals.iter().position(|n| *n == local) {
                Some(k) => k,
                None => {
                    normals.push(local);
                    sources.push(Vec::new());
                    normals.len() - 1
                }
            };
            sources[k].push(i);
            assignment.push(Some((k, scale)));
        }
        let arrangement = Arrangement::new(frame.rank(), normals)?;
        Ok(Restriction {
            flat: f.indices.clone(),
            frame,
            arrangement,
            sources,
            assignment,
        })
    }
}

pub(crate) fn sorted_set(s: &[usize]) -> Vec<usize> {
    let mut v = s.to_vec();
    v.sort_unstable();
    v.dedup();
    v
}

/// A flat given both by its index set and its subspace.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MatroidFlat {
    pub indices: Vec<usize>,
    pub subspace: Subspace,
}

impl MatroidFlat {
    pub fn rank(&self) -> usize {
        self.subspace.rank()
    }
}

/// All flats of an arrangement in (cardinality, lexicographic) order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlatLattice {
    flats: Vec<MatroidFlat>,
}

impl FlatLattice {
    pub fn len(&self) -> usize {
        self.flats.len()
    }

    pub fn is_empty(&self) -> bool {
        self.flats.is_empty()
    }

    pub fn flats(&self) -> &[MatroidFlat] {
        &self.flats
    }

    pub fn iter(&self) -> std::slice::Iter<'_, MatroidFlat> {
        self.flats.iter()
    }

    pub fn get(&self, i: usize) -> &MatroidFlat {
        &self.flats[i]
    }

    pub fn position_of_indices(&self, indices: &[usize]) -> Option<usize> {
        self.flats.iter().position(|f| f.indices == indices)
    }

    pub fn position_of_subspace(&self, s: &Subspace) -> Option<usize> {
        self.flats.iter().position(|f| f.subspace == *s)
    }

    pub fn contains_indices(&self, indices: &[usize]) -> bool {
        self.position_of_indices(indices).is_some()
    }

    pub fn subspaces(&self) -> Vec<Subspace> {
        self.flats.iter().map(|f| f.subspace.clone()).collect()
    }
}

impl<'a> IntoIterator for &'a FlatLattice {
    type Item = &'a MatroidFlat;
    type IntoIter = std::slice::Iter<'a, MatroidFlat>;

    fn into_iter(self) -> Self::IntoIter {
        self.flats.iter()
    }
}

/// Restriction of an arrangement to one of its flats, re-coordinatized by
/// the flat's RREF basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Restriction {
    flat: Vec<usize>,
    frame: Subspace,
    arrangement: Arrangement,
    sources: Vec<Vec<usize>>,
    assignment: Vec<Option<(usize, Rational)>>,
}

impl Restriction {
    /// Index set of the flat restricted to.
    pub fn flat(&self) -> &[usize] {
        &self.flat
    }

    /// The flat's subspace; its RREF basis is the coordinate frame.
    pub fn frame(&self) -> &Subspace {
        &self.frame
    }

    pub fn arrangement(&self) -> &Arrangement {
        &self.arrangement
    }

    pub fn into_arrangement(self) -> Arrangement {
        self.arrangement
    }

    /// Original hyperplane indices mapped onto restricted hyperplane `k`.
    pub fn sources(&self, k: usize) -> &[usize] {
        &self.sources[k]
    }

    /// For each original index: `None` inside the flat, otherwise the
    /// restricted hyperplane `k` and scale `c` with `ℓ_i|_F = c · ℓ'_k`.
    pub fn assignment(&self) -> &[Option<(usize, Rational)>] {
        &self.assignment
    }

    /// Original index set of the flat corresponding to a restricted flat.
    pub fn lift_indices(&self, restricted: &[usize]) -> Vec<usize> {
        let mut out = self.flat.clone();
        for &k in restricted {
            out.extend_from_slice(&self.sources[k]);
        }
        out.sort_unstable();
        out
    }

    /// Maps a subspace in frame coordinates back into the original space.
    pub fn lift_subspace(&self, s: &Subspace) -> Result<Subspace> {
        self.frame.from_frame(s)
    }
}

pub fn is_essential(a: &Arrangement) -> bool {
    a.is_essential()
}

pub fn closure(a: &Arrangement, s: &[usize]) -> Result<Vec<usize>> {
    a.closure(&sorted_set(s))
}

pub fn flats(a: &Arrangement) -> FlatLattice {
    a.flats()
}

pub fn restriction(a: &Arrangement, f: &MatroidFlat) -> Result<Restriction> {
    a.restriction(f)
}
