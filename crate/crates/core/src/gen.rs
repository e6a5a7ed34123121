//! Instance generators: uniform random points for benchmarks and the
//! fixed two-cluster instance that exhibits the big-M warm-start
//! pathology.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::instance::{EuclideanInstance, Point};

pub const DEFAULT_BOX: u32 = 1_000_000;

/// n points i.i.d. uniform on the integer grid [0, box_side)^2,
/// deterministic per seed. Duplicate points are permitted; distance-0
/// edges are handled downstream.
pub fn gen_uniform_instance(n: usize, seed: u64, box_side: u32) -> Result<EuclideanInstance> {
    if n < 3 {
        return Err(Error::TooFewCities(n));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let coords: Vec<Point> = (0..n)
        .map(|_| {
            (
                rng.random_range(0..box_side) as f64,
                rng.random_range(0..box_side) as f64,
            )
        })
        .collect();
    EuclideanInstance::new(format!("u{n}s{seed}"), coords)
}

/// Two tight 6-point clusters separated by a wide gap. At k = 5 the
/// candidate graph is two cliques plus the single repair bridge, so a
/// nearest-neighbor tour over the penalty completion must take at least
/// one penalty edge, while the hybrid pipeline escalates k until the
/// graph is Hamiltonian.
pub fn gen_two_cluster_instance() -> EuclideanInstance {
    let offsets = [
        (0.0, 0.0),
        (120.0, 40.0),
        (60.0, 160.0),
        (180.0, 100.0),
        (40.0, 220.0),
        (200.0, 200.0),
    ];
    let mut coords: Vec<Point> = Vec::with_capacity(12);
    coords.extend(offsets.iter().copied());
    coords.extend(offsets.iter().map(|&(x, y)| (x + 100_000.0, y)));
    EuclideanInstance::new("twocluster12", coords).expect("fixed instance is valid")
}

/// The config value at which [`gen_two_cluster_instance`] shows the
/// pathology: every point's 5 nearest neighbors stay inside its cluster.
pub const TWO_CLUSTER_PATHOLOGY_K: usize = 5;
