//! Seeded random (space, map) instances for property checks.
//!
//! Instance `i` of a corpus depends only on `(seed, i)`, so corpora can be
//! generated in parallel and any single instance can be regenerated.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::metric::{self, gen_euclidean, gen_lattice_cloud, metric_repair, FiniteMetricSpace, Norm};
use crate::selfmap::SelfMap;

pub const MIN_POINTS: usize = 3;
pub const MAX_POINTS: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Family {
    /// Shortest-path closure of a random symmetric matrix, random map.
    RepairedRandom,
    /// Random point cloud, random map.
    EuclideanRandom,
    /// Random point cloud, map into one or two targets.
    EuclideanCollapsing,
    /// Geometric chain `r^i` with angular jitter, shifted one step toward
    /// the origin; long orbits that often satisfy the theorem's hypotheses.
    ContractingChain,
    /// Repaired random metric, map into at most three targets.
    RepairedSmallImage,
    /// Identity or constant map on a point cloud.
    Anchor,
}

impl Family {
    pub const ALL: [Family; 6] = [
        Family::RepairedRandom,
        Family::EuclideanRandom,
        Family::EuclideanCollapsing,
        Family::ContractingChain,
        Family::RepairedSmallImage,
        Family::Anchor,
    ];
}

/// Families of the exact-arithmetic corpus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum ExactFamily {
    /// Lattice points under L1 or L-infinity, random map.
    LatticeRandom,
    /// Lattice points, map into one or two targets.
    LatticeCollapsing,
    /// Shortest-path closure of a random integer matrix, random map.
    RepairedInteger,
    /// Rational geometric chain under L1, shifted toward the origin.
    RationalChain,
}

impl ExactFamily {
    pub const ALL: [ExactFamily; 4] = [
        ExactFamily::LatticeRandom,
        ExactFamily::LatticeCollapsing,
        ExactFamily::RepairedInteger,
        ExactFamily::RationalChain,
    ];
}

#[derive(Debug, Clone)]
pub struct Instance<S = f64, F = Family> {
    pub index: u64,
    pub family: F,
    pub space: FiniteMetricSpace<S>,
    pub map: SelfMap,
}

pub type ExactInstance = Instance<BigRational, ExactFamily>;

fn random_map(rng: &mut ChaCha8Rng, n: usize) -> SelfMap {
    SelfMap::new((0..n).map(|_| rng.gen_range(0..n)).collect()).expect("in range")
}

fn map_into(rng: &mut ChaCha8Rng, n: usize, targets: usize) -> SelfMap {
    let mut pool: Vec<usize> = (0..n).collect();
    pool.shuffle(rng);
    pool.truncate(targets.clamp(1, n));
    SelfMap::new((0..n).map(|_| *pool.choose(rng).expect("non-empty")).collect()).expect("in range")
}

fn cloud(rng: &mut ChaCha8Rng, n: usize) -> FiniteMetricSpace<f64> {
    let k = rng.gen_range(1..=3);
    let norm = [Norm::L1, Norm::L2, Norm::LInf][rng.gen_range(0..3)];
    gen_euclidean(k, n, rng.gen(), norm)
}

fn repaired(rng: &mut ChaCha8Rng, n: usize) -> FiniteMetricSpace<f64> {
    let raw = metric::random_raw_matrix(n, 0.05, 1.0, rng.gen());
    metric_repair(raw).expect("positive symmetric input")
}

/// Points `r^i (cos t_i, sin t_i)` for `i < n - 1` plus the origin, with
/// `T` moving each chain point one step inward and fixing the origin.
fn chain(rng: &mut ChaCha8Rng, n: usize) -> (FiniteMetricSpace<f64>, SelfMap) {
    let r: f64 = rng.gen_range(0.03..0.3);
    let spread: f64 = rng.gen_range(0.0..1.5);
    let mut pts: Vec<[f64; 2]> = (0..n - 1)
        .map(|i| {
            let t = rng.gen_range(0.0..=spread);
            let len = r.powi(i as i32);
            [len * t.cos(), len * t.sin()]
        })
        .collect();
    pts.push([0.0, 0.0]);
    let rows = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| ((pts[i][0] - pts[j][0]).powi(2) + (pts[i][1] - pts[j][1]).powi(2)).sqrt())
                .collect()
        })
        .collect();
    let raw = metric::RawDistanceMatrix::from_rows(rows).expect("square");
    // Repair absorbs rounding so the space is metric to the last bit.
    let space = metric_repair(raw).expect("distinct points");
    let map = SelfMap::new((0..n).map(|i| (i + 1).min(n - 1)).collect()).expect("in range");
    (space, map)
}

/// Instance `index` of the corpus with the given seed.
pub fn instance(seed: u64, index: u64) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    let family = Family::ALL[(index % Family::ALL.len() as u64) as usize];
    let n = rng.gen_range(MIN_POINTS..=MAX_POINTS);
    let (space, map) = match family {
        Family::RepairedRandom => {
            let s = repaired(&mut rng, n);
            (s, random_map(&mut rng, n))
        }
        Family::EuclideanRandom => {
            let s = cloud(&mut rng, n);
            (s, random_map(&mut rng, n))
        }
        Family::EuclideanCollapsing => {
            let s = cloud(&mut rng, n);
            let targets = rng.gen_range(1..=2);
            (s, map_into(&mut rng, n, targets))
        }
        Family::ContractingChain => chain(&mut rng, n),
        Family::RepairedSmallImage => {
            let s = repaired(&mut rng, n);
            let targets = rng.gen_range(1..=3);
            (s, map_into(&mut rng, n, targets))
        }
        Family::Anchor => {
            let s = cloud(&mut rng, n);
            let f = if rng.gen_bool(0.5) {
                SelfMap::identity(n)
            } else {
                SelfMap::constant(n, rng.gen_range(0..n))
            };
            (s, f)
        }
    };
    Instance { index, family, space, map }
}

/// The first `count` instances of the corpus.
pub fn corpus(seed: u64, count: u64) -> impl Iterator<Item = Instance> {
    (0..count).map(move |i| instance(seed, i))
}

/// Points `r^i (1, s_i)` for `i < n - 1` plus the origin under L1, with
/// rational `r` and `s_i`, so every distance is exact.
fn rational_chain(rng: &mut ChaCha8Rng, n: usize) -> (FiniteMetricSpace<BigRational>, SelfMap) {
    let q = |num: i64, den: i64| BigRational::new(BigInt::from(num), BigInt::from(den));
    let r = q(1, rng.gen_range(4..=20));
    let mut pts: Vec<[BigRational; 2]> = Vec::with_capacity(n);
    let mut len = q(1, 1);
    for _ in 0..n - 1 {
        let s = q(rng.gen_range(0..=4), 4);
        pts.push([len.clone(), &len * s]);
        len = &len * &r;
    }
    pts.push([q(0, 1), q(0, 1)]);
    let rows = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| (&pts[i][0] - &pts[j][0]).abs() + (&pts[i][1] - &pts[j][1]).abs())
                .collect()
        })
        .collect();
    let space = FiniteMetricSpace::from_rows(rows, 0.0).expect("L1 distances are a metric");
    let map = SelfMap::new((0..n).map(|i| (i + 1).min(n - 1)).collect()).expect("in range");
    (space, map)
}

/// Instance `index` of the exact corpus with the given seed.
pub fn exact_instance(seed: u64, index: u64) -> ExactInstance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed_e8ac);
    rng.set_stream(index);
    let family = ExactFamily::ALL[(index % ExactFamily::ALL.len() as u64) as usize];
    let n = rng.gen_range(MIN_POINTS..=MAX_POINTS);
    let lattice = |rng: &mut ChaCha8Rng| {
        let k = rng.gen_range(1..=3);
        let resolution = if k == 1 { 16 } else { 6 };
        gen_lattice_cloud(k, n, resolution, rng.gen_bool(0.5), rng.gen())
    };
    let (space, map) = match family {
        ExactFamily::LatticeRandom => {
            let s = lattice(&mut rng);
            (s, random_map(&mut rng, n))
        }
        ExactFamily::LatticeCollapsing => {
            let s = lattice(&mut rng);
            let targets = rng.gen_range(1..=2);
            (s, map_into(&mut rng, n, targets))
        }
        ExactFamily::RepairedInteger => {
            let raw = metric::random_integer_matrix(n, 9, rng.gen());
            let s = metric_repair(raw).expect("positive symmetric input");
            (s, random_map(&mut rng, n))
        }
        ExactFamily::RationalChain => rational_chain(&mut rng, n),
    };
    Instance { index, family, space, map }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::validate;

    #[test]
    fn instances_are_deterministic_and_valid() {
        for i in 0..60 {
            let a = instance(42, i);
            let b = instance(42, i);
            assert_eq!(a.space, b.space);
            assert_eq!(a.map, b.map);
            assert!((MIN_POINTS..=MAX_POINTS).contains(&a.space.len()));
            assert_eq!(a.map.len(), a.space.len());
            assert!(validate(a.space.to_raw(), metric::DEFAULT_TRIANGLE_TOL).is_ok());
        }
    }

    #[test]
    fn exact_instances_are_valid() {
        for i in 0..40 {
            let a = exact_instance(3, i);
            assert_eq!(a.space, exact_instance(3, i).space);
            assert!(validate(a.space.to_raw(), 0.0).is_ok());
            assert_eq!(a.map.len(), a.space.len());
        }
    }

    #[test]
    fn chain_family_is_exactly_metric() {
        for i in (3..600).step_by(6) {
            let inst = instance(7, i);
            assert_eq!(inst.family, Family::ContractingChain);
            assert!(validate(inst.space.to_raw(), 0.0).is_ok());
        }
    }
}
