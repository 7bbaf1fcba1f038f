//! Seeded random sampling of vectors and points.

use num_bigint::BigInt;
use rand::Rng;

use crate::linalg::Rational;
use crate::schubert::{ExtendedPoint, SchubertVariety};

/// A rational with numerator in `[-bound, bound]` and denominator in `1..=3`.
pub fn random_rational<R: Rng + ?Sized>(rng: &mut R, bound: i64) -> Rational {
    let numer = rng.gen_range(-bound..=bound);
    let denom = rng.gen_range(1..=3);
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn random_vector<R: Rng + ?Sized>(rng: &mut R, dim: usize, bound: i64) -> Vec<Rational> {
    (0..dim).map(|_| random_rational(rng, bound)).collect()
}

/// A random point in the orbit of the distinguished point of `flat`.
pub fn random_orbit_point<R: Rng + ?Sized>(
    rng: &mut R,
    y: &SchubertVariety,
    flat: &[usize],
) -> ExtendedPoint {
    let v = random_vector(rng, y.ambient_dim(), 5);
    y.act(&v, &y.point_at(flat))
        .expect("distinguished points are members")
}
