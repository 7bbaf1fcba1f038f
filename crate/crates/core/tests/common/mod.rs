//! Brute-force oracles and fixtures shared by the integration tests.
//!
//! The oracles use their own elimination routine and never call into the
//! library's RREF, kernel or closure code.

#![allow(dead_code)]

use std::path::PathBuf;

use arrangeatlas::linalg::{int, Rational};
use arrangeatlas::{Arrangement, ExtendedPoint, ExtendedScalar};
use num_traits::Zero;
use rand::Rng;

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
}

pub fn fixture_str(name: &str) -> String {
    fixture(name).to_string_lossy().into_owned()
}

pub fn ints(v: &[i64]) -> Vec<Rational> {
    v.iter().map(|&x| int(x)).collect()
}

pub fn b2_normals() -> Vec<Vec<Rational>> {
    vec![ints(&[1, 0]), ints(&[0, 1])]
}

pub fn x3_normals() -> Vec<Vec<Rational>> {
    vec![ints(&[1, 0]), ints(&[0, 1]), ints(&[1, -1])]
}

pub fn p1_normals() -> Vec<Vec<Rational>> {
    vec![ints(&[1])]
}

pub fn b2() -> Arrangement {
    Arrangement::new(2, b2_normals()).unwrap()
}

pub fn x3() -> Arrangement {
    Arrangement::new(2, x3_normals()).unwrap()
}

pub fn p1() -> Arrangement {
    Arrangement::new(1, p1_normals()).unwrap()
}

/// Points of the projective table, as vectors of `Q^4`.
pub fn fig1_points() -> Vec<(char, Vec<Rational>)> {
    vec![
        ('A', ints(&[0, 0, 1, 1])),
        ('B', ints(&[0, 1, 0, 1])),
        ('C', ints(&[0, 0, 0, 1])),
        ('D', ints(&[0, -1, 0, 1])),
        ('E', ints(&[1, 0, 0, 1])),
    ]
}

/// Members of the five-point collection, labelled by the points they span.
pub fn fig1_labelled() -> Vec<(String, Vec<Vec<Rational>>)> {
    let pts = fig1_points();
    let get = |c: char| pts.iter().find(|(l, _)| *l == c).unwrap().1.clone();
    let mut out = vec![("0".to_string(), Vec::new())];
    for label in [
        "A", "B", "C", "D", "E", "AB", "AC", "AD", "BE", "CE", "DE", "AE", "BCD", "ABCD", "BCDE",
    ] {
        out.push((label.to_string(), label.chars().map(get).collect()));
    }
    out
}

/// Rank by fraction Gaussian elimination.
pub fn rank(rows: &[Vec<Rational>]) -> usize {
    let mut a: Vec<Vec<Rational>> = rows.to_vec();
    let cols = a.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..a.len()).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        for i in r + 1..a.len() {
            if a[i][c].is_zero() {
                continue;
            }
            let f = &a[i][c] / &a[r][c];
            let pivot = a[r].clone();
            for (x, p) in a[i].iter_mut().zip(&pivot).skip(c) {
                *x -= &f * p;
            }
        }
        r += 1;
    }
    r
}

/// Vectors `w` with `row · w = 0` for every row, by back substitution.
pub fn null_space(rows: &[Vec<Rational>], d: usize) -> Vec<Vec<Rational>> {
    let mut a: Vec<Vec<Rational>> = rows.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..d {
        let Some(p) = (r..a.len()).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let lead = a[r][c].clone();
        for x in a[r].iter_mut() {
            *x /= &lead;
        }
        for i in 0..a.len() {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                let pivot = a[r].clone();
                for (x, p) in a[i].iter_mut().zip(&pivot) {
                    *x -= &f * p;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    (0..d)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut w = vec![Rational::zero(); d];
            w[free] = int(1);
            for (i, &p) in pivots.iter().enumerate() {
                w[p] = -a[i][free].clone();
            }
            w
        })
        .collect()
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn span_contains(basis: &[Vec<Rational>], v: &[Rational]) -> bool {
    let mut with = basis.to_vec();
    with.push(v.to_vec());
    rank(&with) == rank(basis)
}

pub fn same_span(a: &[Vec<Rational>], b: &[Vec<Rational>]) -> bool {
    let mut both = a.to_vec();
    both.extend_from_slice(b);
    let r = rank(&both);
    r == rank(a) && r == rank(b)
}

pub fn contained(a: &[Vec<Rational>], b: &[Vec<Rational>]) -> bool {
    a.iter().all(|v| span_contains(b, v))
}

/// `span(a) ∩ span(b)` via annihilators.
pub fn intersect_spans(a: &[Vec<Rational>], b: &[Vec<Rational>], d: usize) -> Vec<Vec<Rational>> {
    let mut ann = null_space(a, d);
    ann.extend(null_space(b, d));
    null_space(&ann, d)
}

/// Closure by rank: `i ∈ cl(S)` iff adding `ℓ_i` keeps the rank of `S`.
pub fn closure_oracle(normals: &[Vec<Rational>], s: &[usize]) -> Vec<usize> {
    let base: Vec<Vec<Rational>> = s.iter().map(|&i| normals[i].clone()).collect();
    let r = rank(&base);
    (0..normals.len())
        .filter(|&i| {
            let mut with = base.clone();
            with.push(normals[i].clone());
            rank(&with) == r
        })
        .collect()
}

/// All flats by enumerating the 2^n subsets.
pub fn flats_oracle(normals: &[Vec<Rational>]) -> Vec<Vec<usize>> {
    let n = normals.len();
    let mut out: Vec<Vec<usize>> = (0u32..1 << n)
        .map(|mask| {
            let s: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
            closure_oracle(normals, &s)
        })
        .collect();
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    out.dedup();
    out
}

/// Direct membership: finite support is a flat and the values solve the
/// linear system (Rouché–Capelli).
pub fn membership_oracle(normals: &[Vec<Rational>], x: &ExtendedPoint) -> bool {
    let support: Vec<usize> = (0..x.len()).filter(|&i| x.coord(i).is_finite()).collect();
    if closure_oracle(normals, &support) != support {
        return false;
    }
    let plain: Vec<Vec<Rational>> = support.iter().map(|&i| normals[i].clone()).collect();
    let augmented: Vec<Vec<Rational>> = support
        .iter()
        .map(|&i| {
            let mut r = normals[i].clone();
            r.push(x.coord(i).finite().unwrap().clone());
            r
        })
        .collect();
    rank(&plain) == rank(&augmented)
}

pub fn random_small<R: Rng>(rng: &mut R) -> Rational {
    Rational::new(
        rng.gen_range(-6i64..=6).into(),
        rng.gen_range(1i64..=3).into(),
    )
}

/// Random essential simple arrangement with `n ≤ 6`, `d ≤ 4`.
pub fn random_essential<R: Rng>(rng: &mut R) -> (usize, Vec<Vec<Rational>>) {
    loop {
        let d = rng.gen_range(1..=4);
        let n = rng.gen_range(d..=6);
        let normals: Vec<Vec<Rational>> = (0..n)
            .map(|_| (0..d).map(|_| int(rng.gen_range(-2i64..=2))).collect())
            .collect();
        if normals.iter().any(|v| v.iter().all(Zero::is_zero)) {
            continue;
        }
        let proportional =
            (0..n).any(|i| (i + 1..n).any(|j| rank(&[normals[i].clone(), normals[j].clone()]) < 2));
        if proportional || rank(&normals) != d {
            continue;
        }
        return (d, normals);
    }
}

/// A random point of `(P^1)^n` built to exercise membership: embeds, orbit
/// points, and corrupted variants of either.
pub fn random_extended_point<R: Rng>(
    rng: &mut R,
    normals: &[Vec<Rational>],
    d: usize,
    flats: &[Vec<usize>],
) -> (ExtendedPoint, bool) {
    let v: Vec<Rational> = (0..d).map(|_| random_small(rng)).collect();
    let values: Vec<Rational> = normals.iter().map(|l| dot(l, &v)).collect();
    let flat = &flats[rng.gen_range(0..flats.len())];
    let orbit: Vec<ExtendedScalar> = (0..normals.len())
        .map(|i| {
            if flat.contains(&i) {
                ExtendedScalar::Finite(values[i].clone())
            } else {
                ExtendedScalar::Infinity
            }
        })
        .collect();
    match rng.gen_range(0..4) {
        0 => (ExtendedPoint::finite(values), true),
        1 => (ExtendedPoint::new(orbit), true),
        2 => {
            // Flip one coordinate between finite and infinite.
            let mut c = orbit;
            let i = rng.gen_range(0..c.len());
            c[i] = match &c[i] {
                ExtendedScalar::Infinity => ExtendedScalar::Finite(random_small(rng)),
                ExtendedScalar::Finite(_) => ExtendedScalar::Infinity,
            };
            (ExtendedPoint::new(c), false)
        }
        _ => {
            let mut c = orbit;
            if let Some(i) = (0..c.len()).find(|&i| c[i].is_finite()) {
                c[i] = c[i].translate(&int(rng.gen_range(1..=3)));
            }
            (ExtendedPoint::new(c), false)
        }
    }
}
