//! Seeded random neighborhood systems for batch verification.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::dist::ExtDist;
use crate::epmetric::EpMetric;
use crate::error::Result;
use crate::neighborhood::{NeighborhoodSystem, WeightScheme};
use crate::scalar::Scalar;

/// How a generated system got its weights.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WeightSource {
    Scheme(WeightScheme),
    /// Independent random fractions `p / q` with `1 <= p <= 20`, `1 <= q <= 4`.
    Random,
}

impl WeightSource {
    pub const ALL: [WeightSource; 4] = [
        WeightSource::Scheme(WeightScheme::Ambient),
        WeightSource::Scheme(WeightScheme::Scaled),
        WeightSource::Scheme(WeightScheme::Shifted),
        WeightSource::Random,
    ];

    pub fn name(self) -> &'static str {
        match self {
            WeightSource::Scheme(s) => s.name(),
            WeightSource::Random => "random",
        }
    }
}

/// Distinct points on an 8x8 integer grid under the manhattan distance.
pub fn grid_metric<S: Scalar, R: Rng>(rng: &mut R, n: usize) -> EpMetric<S> {
    assert!(n <= 64);
    let mut cells: Vec<(u64, u64)> = (0..8).flat_map(|a| (0..8).map(move |b| (a, b))).collect();
    cells.shuffle(rng);
    cells.truncate(n);
    let ids = (0..n).map(|i| format!("p{i}")).collect();
    EpMetric::from_fn(ids, |i, j| {
        let (a, b) = (cells[i], cells[j]);
        ExtDist::Finite(S::from_u64(a.0.abs_diff(b.0) + a.1.abs_diff(b.1)))
    })
    .expect("grid metric is valid")
}

pub fn random_fraction<S: Scalar, R: Rng>(rng: &mut R) -> S {
    S::from_u64(rng.gen_range(1..=20)).div(&S::from_u64(rng.gen_range(1..=4)))
}

/// A k-NN system on `2..=max_points` grid points with `k <= max_k`.
pub fn random_system<S: Scalar, R: Rng>(
    rng: &mut R,
    max_points: usize,
    max_k: usize,
    source: WeightSource,
) -> Result<NeighborhoodSystem<S>> {
    let n = rng.gen_range(2..=max_points.max(2));
    let k = rng.gen_range(1..=max_k.clamp(1, n - 1));
    let ambient = grid_metric::<S, R>(rng, n);
    let ns = NeighborhoodSystem::knn(&ambient, k)?;
    match source {
        WeightSource::Scheme(scheme) => ns.weighted(&ambient, scheme, &S::parse(crate::neighborhood::DEFAULT_FLOOR)?),
        WeightSource::Random => {
            let weights = (0..n)
                .map(|x| ns.neighbors(x).iter().map(|_| random_fraction(rng)).collect())
                .collect();
            ns.with_weights(weights)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn systems_are_weighted_and_seeded() {
        for source in WeightSource::ALL {
            let a: NeighborhoodSystem<Rational> =
                random_system(&mut ChaCha8Rng::seed_from_u64(7), 12, 4, source).unwrap();
            let b: NeighborhoodSystem<Rational> =
                random_system(&mut ChaCha8Rng::seed_from_u64(7), 12, 4, source).unwrap();
            assert!(a.is_weighted());
            assert_eq!(a, b);
        }
    }
}
