use std::f64::consts::PI;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::norm::{Exponent, Norm, NormSpec, Vector};

const DIMENSIONS: [usize; 3] = [2, 3, 5];
const WEIGHTS: [f64; 5] = [1.0, 2.0, 0.5, 3.0, 1.5];

/// One randomly drawn property-test case.
#[derive(Debug, Clone, PartialEq)]
pub struct RandomCase {
    pub x: Vector,
    pub y: Vector,
    /// Nonzero scale factors, magnitudes log-uniform in `[0.1, 10]`.
    pub a: f64,
    pub b: f64,
    /// Window size as a fraction of the bracket half-width, in `(0, 1)`.
    pub window: f64,
}

impl RandomCase {
    pub fn dim(&self) -> usize {
        self.x.dim()
    }
}

fn random_vector(rng: &mut ChaCha8Rng, dim: usize) -> Vector {
    loop {
        let coords: Vec<f64> = (0..dim).map(|_| rng.random_range(-2.0..=2.0)).collect();
        if coords.iter().map(|c| c.abs()).fold(0.0, f64::max) >= 1e-6 {
            return Vector::new(coords).expect("finite coordinates");
        }
    }
}

fn random_scale(rng: &mut ChaCha8Rng) -> f64 {
    let magnitude = 10f64.powf(rng.random_range(-1.0..=1.0));
    if rng.random_bool(0.5) {
        magnitude
    } else {
        -magnitude
    }
}

/// Case `index` of the stream selected by `seed`. Each case has its own
/// ChaCha stream, so cases can be drawn in any order or in parallel.
pub fn random_case(seed: u64, index: u64) -> RandomCase {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    let dim = DIMENSIONS[rng.random_range(0..DIMENSIONS.len())];
    let x = random_vector(&mut rng, dim);
    let y = random_vector(&mut rng, dim);
    let a = random_scale(&mut rng);
    let b = random_scale(&mut rng);
    let window = rng.random_range(0.001..0.999);
    RandomCase { x, y, a, b, window }
}

/// The labelled norms every property is checked against in dimension `dim`:
/// ℓ¹, ℓ², ℓ³, ℓ∞, a weighted ℓ², and a non-diagonal Gram norm.
pub fn builtin_norms(dim: usize) -> Vec<(&'static str, NormSpec)> {
    let weights: Vec<f64> = WEIGHTS.iter().cycle().take(dim).copied().collect();
    let gram: Vec<Vec<f64>> = (0..dim)
        .map(|i| {
            (0..dim)
                .map(|j| match i.abs_diff(j) {
                    0 => 2.0,
                    1 => -0.7,
                    _ => 0.0,
                })
                .collect()
        })
        .collect();
    vec![
        ("l1", NormSpec::l1()),
        ("l2", NormSpec::l2()),
        ("l3", NormSpec::lp(3.0).expect("valid exponent")),
        ("linf", NormSpec::linf()),
        ("wl2", NormSpec::weighted_lp(Exponent::Finite(2.0), weights).expect("positive weights")),
        ("ip", NormSpec::inner_product(gram).expect("diagonally dominant Gram matrix")),
    ]
}

/// A planar gauge that is deliberately not convex: the Euclidean length times
/// a direction-dependent factor with narrow dips. Used as a negative control
/// for the oracle checks.
#[derive(Debug, Clone, PartialEq)]
pub struct BumpyGauge {
    /// Directions (radians) where the gauge dips.
    pub dips: Vec<f64>,
    pub depth: f64,
    pub width: f64,
}

impl Default for BumpyGauge {
    fn default() -> Self {
        BumpyGauge { dips: vec![-PI / 6.0, PI / 6.0, PI / 3.0], depth: 0.6, width: 0.1 }
    }
}

impl Norm for BumpyGauge {
    fn dim(&self) -> Option<usize> {
        Some(2)
    }

    fn eval(&self, v: &[f64]) -> f64 {
        let length = v[0].hypot(v[1]);
        if length == 0.0 {
            return 0.0;
        }
        let phi = v[1].atan2(v[0]);
        let factor: f64 = self
            .dips
            .iter()
            .map(|d| self.depth * (-((phi - d) / self.width).powi(2)).exp())
            .sum();
        length * (1.0 - factor)
    }
}
