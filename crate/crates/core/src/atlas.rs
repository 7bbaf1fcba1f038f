//! Chart data for the variety glued from a partial hyperplane arrangement.
//!
//! Each member `F` contributes the chart `V ×_F Y(A_F)`, which for a vector
//! group splits as `V/F × Y(A_F)`; it is recorded here by its base dimension
//! and the Schubert variety of the arrangement `A_F` cut out in `F` by the
//! codimension-one members below it. Two charts overlap along the chart of
//! the intersection of their members.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use rand::Rng;
use rayon::prelude::*;

use crate::arrangement::Arrangement;
use crate::error::{Error, Result};
use crate::linalg::{int, Rational, Subspace};
use crate::pha::PartialHyperplaneArrangement;
use crate::sampling::random_orbit_point;
use crate::schubert::{ExtendedPoint, SchubertVariety};

#[derive(Clone, Debug)]
pub struct Chart {
    /// Position of the member in the arrangement.
    pub member: usize,
    pub flat: Subspace,
    /// Positions of the codimension-one members below `flat`, in order;
    /// restricted hyperplane `k` is member `hyperplanes[k]`.
    pub hyperplanes: Vec<usize>,
    /// `A_F` in the coordinates of the RREF basis of `flat`.
    pub restriction: Arrangement,
    pub variety: SchubertVariety,
    /// Dimension of the base `V/F`.
    pub fiber_dim: usize,
}

impl Chart {
    /// Maps a subspace in chart coordinates back to `Q^d`.
    pub fn lift(&self, s: &Subspace) -> Subspace {
        self.flat.from_frame(s).expect("chart coordinates")
    }

    /// Chart index set of a member `g ⊆ F`: the chart hyperplanes containing it.
    pub fn flat_indices(&self, pha: &PartialHyperplaneArrangement, g: usize) -> Vec<usize> {
        let sub = &pha.members()[g];
        self.hyperplanes
            .iter()
            .enumerate()
            .filter(|(_, &h)| sub.is_subspace_of(&pha.members()[h]).expect("same ambient"))
            .map(|(k, _)| k)
            .collect()
    }

    /// Distinguished point of member `g ⊆ F` inside this chart.
    pub fn distinguished_point(
        &self,
        pha: &PartialHyperplaneArrangement,
        g: usize,
    ) -> ExtendedPoint {
        self.variety.point_at(&self.flat_indices(pha, g))
    }
}

#[derive(Clone, Debug)]
pub struct Atlas {
    pha: PartialHyperplaneArrangement,
    charts: Vec<Chart>,
    overlaps: Vec<Vec<usize>>,
}

fn build_chart(pha: &PartialHyperplaneArrangement, member: usize) -> Result<Chart> {
    let flat = pha.members()[member].clone();
    let hyperplanes = pha.hyperplanes_below(member);
    let normals = hyperplanes
        .iter()
        .map(|&h| {
            let local = flat.to_frame(&pha.members()[h])?;
            Ok(local.annihilator().row(0).to_vec())
        })
        .collect::<Result<Vec<Vec<Rational>>>>()?;
    let restriction = Arrangement::new(flat.rank(), normals)?;
    let variety = SchubertVariety::new(restriction.clone()).map_err(|_| Error::InvalidPha)?;
    let chart = Chart {
        member,
        fiber_dim: pha.ambient_dim() - flat.rank(),
        flat,
        hyperplanes,
        restriction,
        variety,
    };
    let lifted: BTreeSet<Subspace> = chart
        .variety
        .lattice()
        .iter()
        .map(|f| chart.lift(&f.subspace))
        .collect();
    let down: BTreeSet<Subspace> = pha
        .down_set(member)
        .into_iter()
        .map(|g| pha.members()[g].clone())
        .collect();
    if lifted != down {
        return Err(Error::InvalidPha);
    }
    Ok(chart)
}

pub fn build_atlas(pha: &PartialHyperplaneArrangement) -> Result<Atlas> {
    let charts = (0..pha.len())
        .into_par_iter()
        .map(|i| build_chart(pha, i))
        .collect::<Result<Vec<_>>>()?;
    let overlaps = (0..pha.len())
        .map(|i| (0..pha.len()).map(|j| pha.meet(i, j)).collect())
        .collect();
    Ok(Atlas {
        pha: pha.clone(),
        charts,
        overlaps,
    })
}

impl Atlas {
    pub fn pha(&self) -> &PartialHyperplaneArrangement {
        &self.pha
    }

    pub fn charts(&self) -> &[Chart] {
        &self.charts
    }

    pub fn chart(&self, i: usize) -> &Chart {
        &self.charts[i]
    }

    /// Chart along which charts `i` and `j` overlap.
    pub fn overlap(&self, i: usize, j: usize) -> usize {
        self.overlaps[i][j]
    }

    pub fn overlaps(&self) -> &[Vec<usize>] {
        &self.overlaps
    }

    pub fn chart_of(&self, s: &Subspace) -> Option<&Chart> {
        self.pha.position(s).map(|i| &self.charts[i])
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CocycleCheck {
    Valid,
    /// Down-sets of `first` and `second` inside chart `ambient` do not meet
    /// in the down-set of their intersection.
    FlatSetMismatch {
        ambient: usize,
        first: usize,
        second: usize,
    },
    /// A sampled point of chart `chart` disagrees about membership in the
    /// open sub-chart of member `sub`.
    SampleMismatch {
        chart: usize,
        sub: usize,
        point: ExtendedPoint,
    },
}

impl CocycleCheck {
    pub fn is_valid(&self) -> bool {
        matches!(self, CocycleCheck::Valid)
    }
}

fn down_sets(pha: &PartialHyperplaneArrangement) -> Vec<BTreeSet<usize>> {
    (0..pha.len())
        .map(|i| pha.down_set(i).into_iter().collect())
        .collect()
}

/// Verifies the overlap identities of the atlas, plus a sampled check on
/// points of each chart using `random_per_chart` random orbit points.
pub fn check_cocycle<R: Rng + ?Sized>(
    atlas: &Atlas,
    random_per_chart: usize,
    rng: &mut R,
) -> CocycleCheck {
    let pha = &atlas.pha;
    let members = pha.members();
    let downs = down_sets(pha);
    for (ambient, down) in downs.iter().enumerate() {
        for &first in down {
            for &second in down.range(first..) {
                let meet = members[first]
                    .intersect(&members[second])
                    .expect("same ambient");
                let ok = pha.position(&meet).is_some_and(|m| {
                    downs[first]
                        .intersection(&downs[second])
                        .copied()
                        .collect::<BTreeSet<_>>()
                        == downs[m]
                });
                if !ok {
                    return CocycleCheck::FlatSetMismatch {
                        ambient,
                        first,
                        second,
                    };
                }
            }
        }
    }

    for (a, chart) in atlas.charts.iter().enumerate() {
        let lattice = chart.variety.lattice();
        let mut points: Vec<ExtendedPoint> = lattice
            .iter()
            .map(|f| chart.variety.point_at(&f.indices))
            .collect();
        for _ in 0..random_per_chart {
            let f = lattice.get(rng.gen_range(0..lattice.len()));
            points.push(random_orbit_point(rng, &chart.variety, &f.indices));
        }
        for z in points {
            let stab = chart.lift(&chart.variety.stabilizer(&z).expect("member"));
            let support = pha.position(&stab);
            for &sub in &downs[a] {
                let x = chart.distinguished_point(pha, sub);
                let in_open = chart
                    .variety
                    .in_minimal_neighborhood(&x, &z)
                    .expect("members");
                let below = support.is_some_and(|g| downs[sub].contains(&g));
                if in_open != below {
                    return CocycleCheck::SampleMismatch {
                        chart: a,
                        sub,
                        point: z,
                    };
                }
            }
        }
    }
    CocycleCheck::Valid
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SeparationCheck {
    Valid,
    MissingIntersection {
        first: usize,
        second: usize,
    },
    /// `witness` lies below both members and strictly contains their meet.
    LargerCommonLower {
        first: usize,
        second: usize,
        witness: usize,
    },
}

impl SeparationCheck {
    pub fn is_valid(&self) -> bool {
        matches!(self, SeparationCheck::Valid)
    }
}

/// For every pair of members, their intersection is a member and is the
/// largest member below both.
pub fn separation_check(atlas: &Atlas) -> SeparationCheck {
    let pha = &atlas.pha;
    let members = pha.members();
    let downs = down_sets(pha);
    for first in 0..members.len() {
        for second in first..members.len() {
            let meet = members[first]
                .intersect(&members[second])
                .expect("same ambient");
            let Some(m) = pha.position(&meet) else {
                return SeparationCheck::MissingIntersection { first, second };
            };
            if let Some(&witness) = downs[first]
                .intersection(&downs[second])
                .find(|&&g| g != m && !downs[m].contains(&g))
            {
                return SeparationCheck::LargerCommonLower {
                    first,
                    second,
                    witness,
                };
            }
        }
    }
    SeparationCheck::Valid
}

/// One row of the orbit/flat correspondence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitRow {
    pub member: usize,
    pub rank: usize,
    pub orbit_dim: usize,
    pub stabilizer: Subspace,
    pub chart: usize,
    /// Fixed point of the chart's Schubert variety.
    pub distinguished_point: ExtendedPoint,
    /// A vector of `F` lying in no smaller member.
    pub interior_sample: Vec<Rational>,
}

/// First point `(1, t, t², …)` in the RREF frame of `flat`, `t = 1, 2, …`,
/// avoiding every proper sub-member. A nonzero polynomial of degree below
/// `rank` vanishes at finitely many `t`, so the search terminates.
fn interior_sample(flat: &Subspace, proper: &[&Subspace]) -> Vec<Rational> {
    if flat.is_zero() {
        return vec![Rational::from_integer(0.into()); flat.ambient_dim()];
    }
    let mut t = 1i64;
    loop {
        let mut coeffs = Vec::with_capacity(flat.rank());
        let mut power = int(1);
        for _ in 0..flat.rank() {
            coeffs.push(power.clone());
            power *= int(t);
        }
        let v = flat.combine(&coeffs);
        if proper
            .iter()
            .all(|g| !g.contains(&v).expect("same ambient"))
        {
            return v;
        }
        t += 1;
    }
}

pub fn orbit_flat_table(atlas: &Atlas) -> Vec<OrbitRow> {
    let pha = &atlas.pha;
    let members = pha.members();
    atlas
        .charts
        .par_iter()
        .map(|chart| {
            let i = chart.member;
            let flat = &members[i];
            let proper: Vec<&Subspace> = pha
                .down_set(i)
                .into_iter()
                .filter(|&g| g != i)
                .map(|g| &members[g])
                .collect();
            OrbitRow {
                member: i,
                rank: flat.rank(),
                orbit_dim: pha.ambient_dim() - flat.rank(),
                stabilizer: flat.clone(),
                chart: i,
                distinguished_point: chart
                    .variety
                    .point_at(&(0..chart.variety.len()).collect::<Vec<_>>()),
                interior_sample: interior_sample(flat, &proper),
            }
        })
        .collect()
}

/// Members `g ⊂ f` with nothing in between, as (lower, upper) pairs.
pub fn covering_pairs(pha: &PartialHyperplaneArrangement) -> Vec<(usize, usize)> {
    let downs = down_sets(pha);
    let mut out = Vec::new();
    for (upper, down) in downs.iter().enumerate() {
        for &lower in down {
            if lower == upper {
                continue;
            }
            let between = down
                .iter()
                .any(|&m| m != lower && m != upper && downs[m].contains(&lower));
            if !between {
                out.push((lower, upper));
            }
        }
    }
    out.sort_unstable();
    out
}

/// Hasse diagram of member containment in DOT. Nodes are labelled
/// `F{rank}:{orbit_dim}`; edges run from each member to its covers.
pub fn hasse_dot(pha: &PartialHyperplaneArrangement) -> String {
    let mut out = String::from("digraph hasse {\n");
    for (i, m) in pha.members().iter().enumerate() {
        let _ = writeln!(
            out,
            "  m{i} [label=\"F{}:{}\"];",
            m.rank(),
            pha.ambient_dim() - m.rank()
        );
    }
    for (lower, upper) in covering_pairs(pha) {
        let _ = writeln!(out, "  m{lower} -> m{upper};");
    }
    out.push_str("}\n");
    out
}
