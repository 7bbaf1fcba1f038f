//! Partial hyperplane arrangements: finite families of subspaces containing
//! `{0}`, closed under intersection, whose every down-set is the lattice of
//! flats of an essential arrangement in that member.

use std::collections::BTreeSet;

use rayon::prelude::*;

use crate::arrangement::Arrangement;
use crate::error::{Error, Result};
use crate::linalg::{LinearMap, Rational, Subspace};

/// A validated partial hyperplane arrangement.
///
/// Members are deduplicated and sorted by rank, then lexicographically on
/// their RREF bases, so `members()[0]` is always the zero subspace. Only
/// [`validate`] and [`from_order_filter`] construct values of this type.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PartialHyperplaneArrangement {
    ambient_dim: usize,
    members: Vec<Subspace>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Axiom3Reason {
    /// The codimension-one members below `F` do not meet in `{0}`.
    NotEssentialInMember,
    /// Intersections of the codimension-one members below `F` differ from
    /// the members contained in `F`.
    GeneratedFlatsMismatch,
}

impl Axiom3Reason {
    pub fn code(self) -> &'static str {
        match self {
            Axiom3Reason::NotEssentialInMember => "not-essential-in-F",
            Axiom3Reason::GeneratedFlatsMismatch => "generated-flats-mismatch",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Axiom3Failure {
    pub member: Subspace,
    pub reason: Axiom3Reason,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidationReport {
    pub axiom1_ok: bool,
    pub axiom2_ok: bool,
    pub axiom2_witness: Option<(Subspace, Subspace)>,
    pub axiom3_failures: Vec<Axiom3Failure>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.axiom1_ok && self.axiom2_ok && self.axiom3_failures.is_empty()
    }
}

/// Outcome of [`validate`]: the report, plus the arrangement when valid.
#[derive(Clone, Debug)]
pub struct Validation {
    pub report: ValidationReport,
    pub pha: Option<PartialHyperplaneArrangement>,
}

fn canonical_members(d: usize, subspaces: Vec<Subspace>) -> Result<Vec<Subspace>> {
    if let Some(bad) = subspaces.iter().find(|s| s.ambient_dim() != d) {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: bad.ambient_dim(),
        });
    }
    Ok(subspaces
        .into_iter()
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect())
}

/// Members of `members` strictly inside `f` with rank one less.
fn hyperplanes_below<'a>(members: &'a [Subspace], f: &Subspace) -> Vec<&'a Subspace> {
    members
        .iter()
        .filter(|g| g.rank() + 1 == f.rank() && g.is_subspace_of(f).expect("same ambient"))
        .collect()
}

/// All intersections of subsets of `hyps`, the empty intersection being `top`.
fn generated_meets(top: &Subspace, hyps: &[&Subspace]) -> BTreeSet<Subspace> {
    let mut out = BTreeSet::new();
    out.insert(top.clone());
    for h in hyps {
        let new: Vec<Subspace> = out
            .iter()
            .map(|s| s.intersect(h).expect("same ambient"))
            .collect();
        out.extend(new);
    }
    out
}

fn axiom3_check(members: &[Subspace], f: &Subspace) -> Option<Axiom3Reason> {
    let hyps = hyperplanes_below(members, f);
    let meet = hyps
        .iter()
        .try_fold(f.clone(), |acc, h| acc.intersect(h))
        .expect("same ambient");
    if !meet.is_zero() {
        return Some(Axiom3Reason::NotEssentialInMember);
    }
    let generated = generated_meets(f, &hyps);
    let down: BTreeSet<Subspace> = members
        .iter()
        .filter(|g| g.is_subspace_of(f).expect("same ambient"))
        .cloned()
        .collect();
    (generated != down).then_some(Axiom3Reason::GeneratedFlatsMismatch)
}

/// Checks the three axioms on a list of subspaces of `Q^d`.
pub fn validate(d: usize, subspaces: Vec<Subspace>) -> Result<Validation> {
    let members = canonical_members(d, subspaces)?;
    let axiom1_ok = members.first().is_some_and(Subspace::is_zero);

    let mut axiom2_witness = None;
    'outer: for (i, a) in members.iter().enumerate() {
        for b in &members[i + 1..] {
            let meet = a.intersect(b)?;
            if members.binary_search(&meet).is_err() {
                axiom2_witness = Some((a.clone(), b.clone()));
                break 'outer;
            }
        }
    }

    let axiom3_failures: Vec<Axiom3Failure> = members
        .par_iter()
        .filter_map(|f| {
            axiom3_check(&members, f).map(|reason| Axiom3Failure {
                member: f.clone(),
                reason,
            })
        })
        .collect();

    let report = ValidationReport {
        axiom1_ok,
        axiom2_ok: axiom2_witness.is_none(),
        axiom2_witness,
        axiom3_failures,
    };
    let pha = report.is_valid().then_some(PartialHyperplaneArrangement {
        ambient_dim: d,
        members,
    });
    Ok(Validation { report, pha })
}

/// Builds the arrangement spanned by an order filter of the flat lattice
/// of `a` (a down-closed family of flat subspaces under inclusion).
pub fn from_order_filter(
    a: &Arrangement,
    selected: Vec<Subspace>,
) -> Result<PartialHyperplaneArrangement> {
    if !a.is_essential() {
        return Err(Error::NotEssential);
    }
    let d = a.ambient_dim();
    let flats = a.flats().subspaces();
    let mut chosen = canonical_members(d, selected)?;
    for s in &chosen {
        if !flats.contains(s) {
            return Err(Error::NotAFlatSubspace {
                subspace: s.clone(),
            });
        }
    }
    if let Err(pos) = chosen.binary_search(&Subspace::zero(d)) {
        chosen.insert(pos, Subspace::zero(d));
    }
    let mut ordered_flats = flats;
    ordered_flats.sort();
    for upper in &chosen {
        for lower in &ordered_flats {
            if lower.is_subspace_of(upper)? && chosen.binary_search(lower).is_err() {
                return Err(Error::NotAnOrderFilter {
                    upper: upper.clone(),
                    lower: lower.clone(),
                });
            }
        }
    }
    validate(d, chosen)?.pha.ok_or(Error::InvalidPha)
}

/// The whole lattice of flats of `a` as a partial arrangement.
pub fn full_lattice(a: &Arrangement) -> Result<PartialHyperplaneArrangement> {
    from_order_filter(a, a.flats().subspaces())
}

impl PartialHyperplaneArrangement {
    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn members(&self) -> &[Subspace] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn position(&self, s: &Subspace) -> Option<usize> {
        self.members.binary_search(s).ok()
    }

    pub fn contains(&self, s: &Subspace) -> bool {
        self.position(s).is_some()
    }

    /// Positions of the members contained in member `i`, including `i`.
    pub fn down_set(&self, i: usize) -> Vec<usize> {
        let f = &self.members[i];
        (0..self.len())
            .filter(|&j| self.members[j].is_subspace_of(f).expect("same ambient"))
            .collect()
    }

    /// Positions of the codimension-one members inside member `i`.
    pub fn hyperplanes_below(&self, i: usize) -> Vec<usize> {
        let f = &self.members[i];
        (0..self.len())
            .filter(|&j| {
                let g = &self.members[j];
                g.rank() + 1 == f.rank() && g.is_subspace_of(f).expect("same ambient")
            })
            .collect()
    }

    /// Position of `members[i] ∩ members[j]`.
    pub fn meet(&self, i: usize, j: usize) -> usize {
        let meet = self.members[i]
            .intersect(&self.members[j])
            .expect("same ambient");
        self.position(&meet)
            .expect("validated arrangements are closed under intersection")
    }

    /// Smallest member containing `v`, or `None` if no member does.
    pub fn limit_flat(&self, v: &[Rational]) -> Result<Option<&Subspace>> {
        if v.len() != self.ambient_dim {
            return Err(Error::DimensionMismatch {
                expected: self.ambient_dim,
                found: v.len(),
            });
        }
        for m in &self.members {
            if m.contains(v)? {
                return Ok(Some(m));
            }
        }
        Ok(None)
    }
}

pub fn limit_flat(pha: &PartialHyperplaneArrangement, v: &[Rational]) -> Result<Option<Subspace>> {
    Ok(pha.limit_flat(v)?.cloned())
}

/// Result of [`check_morphism`]; the first violation in canonical order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MorphismCheck {
    Valid,
    /// Condition 1: the image of `source` lies in no target member.
    ImageNotInMember {
        source: Subspace,
        image: Subspace,
    },
    /// Condition 2: `T⁻¹(target) ∩ source` is not a source member.
    PreimageNotMember {
        source: Subspace,
        target: Subspace,
        preimage: Subspace,
    },
}

impl MorphismCheck {
    pub fn is_valid(&self) -> bool {
        matches!(self, MorphismCheck::Valid)
    }
}

fn check_map_dims(t: &LinearMap, source: usize, target: usize) -> Result<()> {
    if t.source_dim() != source {
        return Err(Error::DimensionMismatch {
            expected: t.source_dim(),
            found: source,
        });
    }
    if t.target_dim() != target {
        return Err(Error::DimensionMismatch {
            expected: t.target_dim(),
            found: target,
        });
    }
    Ok(())
}

pub fn check_morphism(
    t: &LinearMap,
    src: &PartialHyperplaneArrangement,
    dst: &PartialHyperplaneArrangement,
) -> Result<MorphismCheck> {
    check_map_dims(t, src.ambient_dim, dst.ambient_dim)?;
    for f1 in &src.members {
        let image = t.image(f1)?;
        let mut found = false;
        for f2 in &dst.members {
            if image.is_subspace_of(f2)? {
                found = true;
                break;
            }
        }
        if !found {
            return Ok(MorphismCheck::ImageNotInMember {
                source: f1.clone(),
                image,
            });
        }
    }
    let pulled: Vec<Subspace> = dst
        .members
        .iter()
        .map(|f2| t.preimage(f2))
        .collect::<Result<_>>()?;
    for f1 in &src.members {
        for (f2, pre) in dst.members.iter().zip(&pulled) {
            let meet = pre.intersect(f1)?;
            if !src.contains(&meet) {
                return Ok(MorphismCheck::PreimageNotMember {
                    source: f1.clone(),
                    target: f2.clone(),
                    preimage: meet,
                });
            }
        }
    }
    Ok(MorphismCheck::Valid)
}

/// How one target hyperplane pulls back along a linear map.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Pullback {
    /// The preimage is the whole source space.
    Everything,
    /// The preimage is source hyperplane `index`.
    Hyperplane(usize),
}

/// Result of [`check_arrangement_morphism`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ArrangementMorphismCheck {
    /// One pullback per target hyperplane.
    Valid(Vec<Pullback>),
    PreimageNotHyperplane {
        target: usize,
        preimage: Subspace,
    },
}

impl ArrangementMorphismCheck {
    pub fn is_valid(&self) -> bool {
        matches!(self, ArrangementMorphismCheck::Valid(_))
    }
}

/// Hyperplane-level morphism test: every target hyperplane must pull back
/// to a source hyperplane or to the whole source space.
pub fn check_arrangement_morphism(
    t: &LinearMap,
    a1: &Arrangement,
    a2: &Arrangement,
) -> Result<ArrangementMorphismCheck> {
    check_map_dims(t, a1.ambient_dim(), a2.ambient_dim())?;
    if !a1.is_essential() || !a2.is_essential() {
        return Err(Error::NotEssential);
    }
    let mut pullbacks = Vec::with_capacity(a2.len());
    for (target, h) in a2.hyperplanes().iter().enumerate() {
        let pre = t.preimage(h)?;
        if pre.is_full() {
            pullbacks.push(Pullback::Everything);
        } else if let Some(j) = a1.hyperplanes().iter().position(|h1| *h1 == pre) {
            pullbacks.push(Pullback::Hyperplane(j));
        } else {
            return Ok(ArrangementMorphismCheck::PreimageNotHyperplane {
                target,
                preimage: pre,
            });
        }
    }
    Ok(ArrangementMorphismCheck::Valid(pullbacks))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::vector;

    fn span(d: usize, vs: &[&[i64]]) -> Subspace {
        Subspace::span(d, vs.iter().map(|v| vector(v)).collect()).unwrap()
    }

    fn x3() -> Arrangement {
        Arrangement::from_i64(2, &[&[1, 0], &[0, 1], &[1, -1]]).unwrap()
    }

    fn p1() -> Arrangement {
        Arrangement::from_i64(1, &[&[1]]).unwrap()
    }

    fn c3_members() -> Vec<Subspace> {
        vec![
            Subspace::zero(3),
            span(3, &[&[1, 0, 0]]),
            span(3, &[&[0, 1, 0]]),
            span(3, &[&[0, 0, 1]]),
            span(3, &[&[1, 0, 0], &[0, 1, 0]]),
            span(3, &[&[1, 0, 0], &[0, 0, 1]]),
            span(3, &[&[0, 1, 0], &[0, 0, 1]]),
            span(3, &[&[1, 1, 1]]),
        ]
    }

    #[test]
    fn lone_plane_fails_axiom3() {
        let plane = span(3, &[&[1, 0, 0], &[0, 1, 0]]);
        let v = validate(3, vec![Subspace::zero(3), plane.clone()]).unwrap();
        assert!(v.report.axiom1_ok);
        assert!(v.report.axiom2_ok);
        assert_eq!(
            v.report.axiom3_failures,
            vec![Axiom3Failure {
                member: plane,
                reason: Axiom3Reason::NotEssentialInMember
            }]
        );
        assert!(v.pha.is_none());
    }

    #[test]
    fn coordinate_subspaces_plus_line() {
        let v = validate(3, c3_members()).unwrap();
        assert!(v.report.is_valid(), "{:?}", v.report);
        assert_eq!(v.pha.unwrap().len(), 8);
    }

    #[test]
    fn missing_zero_and_meet() {
        let a = span(2, &[&[1, 0]]);
        let b = span(2, &[&[0, 1]]);
        let v = validate(2, vec![a.clone(), b.clone()]).unwrap();
        assert!(!v.report.axiom1_ok);
        assert!(!v.report.axiom2_ok);
        // canonical order puts span{(0,1)} first.
        assert_eq!(v.report.axiom2_witness, Some((b, a)));
    }

    #[test]
    fn generated_mismatch_detected() {
        // Adding Q^3 on top of the coordinate-plus-line family: the three
        // coordinate planes generate only the axes, not the stray line.
        let mut members = c3_members();
        members.push(Subspace::full(3));
        let v = validate(3, members).unwrap();
        assert!(v.report.axiom1_ok && v.report.axiom2_ok);
        assert_eq!(
            v.report.axiom3_failures,
            vec![Axiom3Failure {
                member: Subspace::full(3),
                reason: Axiom3Reason::GeneratedFlatsMismatch
            }]
        );
    }

    #[test]
    fn order_filter_examples() {
        let b2 = Arrangement::from_i64(2, &[&[1, 0], &[0, 1]]).unwrap();
        let pha = from_order_filter(&b2, b2.flats().subspaces()).unwrap();
        assert_eq!(pha.len(), 4);

        let a = x3();
        let mut sel = a.flats().subspaces();
        sel.retain(|s| !s.is_full());
        assert_eq!(from_order_filter(&a, sel).unwrap().len(), 4);

        let err = from_order_filter(&a, vec![Subspace::zero(2), Subspace::full(2)]).unwrap_err();
        assert_eq!(
            err,
            Error::NotAnOrderFilter {
                upper: Subspace::full(2),
                lower: span(2, &[&[0, 1]])
            }
        );

        let err = from_order_filter(&a, vec![span(2, &[&[1, 2]])]).unwrap_err();
        assert_eq!(err.reason(), "not-a-flat");
    }

    #[test]
    fn morphism_examples() {
        let src = full_lattice(&x3()).unwrap();
        let dst = full_lattice(&p1()).unwrap();
        let zero = LinearMap::zero(2, 1);
        assert!(check_morphism(&zero, &src, &dst).unwrap().is_valid());
        let proj = LinearMap::from_i64(2, &[&[1, 0]]).unwrap();
        assert!(check_morphism(&proj, &src, &dst).unwrap().is_valid());
        let sum = LinearMap::from_i64(2, &[&[1, 1]]).unwrap();
        match check_morphism(&sum, &src, &dst).unwrap() {
            MorphismCheck::PreimageNotMember { preimage, .. } => {
                assert_eq!(preimage, span(2, &[&[1, -1]]));
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(check_morphism(&sum, &dst, &src).is_err());
    }

    #[test]
    fn arrangement_morphism_examples() {
        let zero = LinearMap::zero(2, 1);
        assert_eq!(
            check_arrangement_morphism(&zero, &x3(), &p1()).unwrap(),
            ArrangementMorphismCheck::Valid(vec![Pullback::Everything])
        );
        let proj = LinearMap::from_i64(2, &[&[1, 0]]).unwrap();
        assert_eq!(
            check_arrangement_morphism(&proj, &x3(), &p1()).unwrap(),
            ArrangementMorphismCheck::Valid(vec![Pullback::Hyperplane(0)])
        );
        let sum = LinearMap::from_i64(2, &[&[1, 1]]).unwrap();
        assert_eq!(
            check_arrangement_morphism(&sum, &x3(), &p1()).unwrap(),
            ArrangementMorphismCheck::PreimageNotHyperplane {
                target: 0,
                preimage: span(2, &[&[1, -1]])
            }
        );
    }

    #[test]
    fn limit_flat_examples() {
        let pha = validate(3, c3_members()).unwrap().pha.unwrap();
        assert_eq!(
            pha.limit_flat(&vector(&[0, 0, 0])).unwrap(),
            Some(&Subspace::zero(3))
        );
        assert_eq!(pha.limit_flat(&vector(&[1, 2, 3])).unwrap(), None);
        assert_eq!(
            pha.limit_flat(&vector(&[2, 2, 2])).unwrap(),
            Some(&span(3, &[&[1, 1, 1]]))
        );
        assert_eq!(
            pha.limit_flat(&vector(&[0, 5, 1])).unwrap(),
            Some(&span(3, &[&[0, 1, 0], &[0, 0, 1]]))
        );
    }
}
