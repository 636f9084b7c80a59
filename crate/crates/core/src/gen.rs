//! Seeded random instance generators.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::model::{DemandPoint, HalfPlane, ProblemInstance};

/// Named instance distributions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Distribution {
    /// Sorted uniform positions in `[0, n)`, weights uniform in `[0.5, 2]`.
    Uniform,
    /// Uniform points packed into about `√n` narrow clusters.
    Clustered,
    /// Unit weights, integer gaps of at least 2 and one planted gap of 1.
    AdversarialMinGap,
}

impl Distribution {
    pub const NAMES: [&'static str; 3] = ["uniform", "clustered", "adversarial-min-gap"];

    pub fn name(self) -> &'static str {
        match self {
            Distribution::Uniform => "uniform",
            Distribution::Clustered => "clustered",
            Distribution::AdversarialMinGap => "adversarial-min-gap",
        }
    }

    pub fn generate(self, n: usize, seed: u64) -> ProblemInstance {
        match self {
            Distribution::Uniform => uniform(n, seed),
            Distribution::Clustered => clustered(n, seed),
            Distribution::AdversarialMinGap => adversarial_min_gap(n, seed).instance,
        }
    }
}

impl fmt::Display for Distribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnknownDistribution(pub String);

impl fmt::Display for UnknownDistribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "unknown distribution '{}' (expected one of: {})",
            self.0,
            Distribution::NAMES.join(", ")
        )
    }
}

impl std::error::Error for UnknownDistribution {}

impl FromStr for Distribution {
    type Err = UnknownDistribution;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "uniform" => Ok(Distribution::Uniform),
            "clustered" => Ok(Distribution::Clustered),
            "adversarial-min-gap" => Ok(Distribution::AdversarialMinGap),
            other => Err(UnknownDistribution(other.to_string())),
        }
    }
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Draws sorted distinct positions until exactly `n` remain.
fn distinct_positions<F>(n: usize, rng: &mut ChaCha8Rng, mut draw: F) -> Vec<f64>
where
    F: FnMut(&mut ChaCha8Rng) -> f64,
{
    let mut pos: Vec<f64> = (0..n).map(|_| draw(rng)).collect();
    loop {
        pos.sort_by(f64::total_cmp);
        pos.dedup();
        if pos.len() == n {
            return pos;
        }
        while pos.len() < n {
            pos.push(draw(rng));
        }
    }
}

fn assemble(positions: Vec<f64>, weights: impl Iterator<Item = f64>) -> ProblemInstance {
    let points = positions
        .into_iter()
        .zip(weights)
        .map(|(p, w)| DemandPoint::new(p, w))
        .collect();
    ProblemInstance::from_sorted(points).expect("generated positions are sorted and distinct")
}

pub fn uniform(n: usize, seed: u64) -> ProblemInstance {
    assert!(n > 0);
    let mut rng = rng(seed);
    let span = n as f64;
    let pos = distinct_positions(n, &mut rng, |r| r.gen_range(0.0..span));
    let weights: Vec<f64> = (0..n).map(|_| rng.gen_range(0.5..=2.0)).collect();
    assemble(pos, weights.into_iter())
}

pub fn clustered(n: usize, seed: u64) -> ProblemInstance {
    assert!(n > 0);
    let mut rng = rng(seed);
    let clusters = ((n as f64).sqrt().ceil() as usize).max(1);
    let span = n as f64;
    let centers: Vec<f64> = (0..clusters).map(|_| rng.gen_range(0.0..span)).collect();
    let pos = distinct_positions(n, &mut rng, |r| {
        let c = centers[r.gen_range(0..clusters)];
        c + r.gen_range(-0.5..0.5)
    });
    let weights: Vec<f64> = (0..n).map(|_| rng.gen_range(0.5..=2.0)).collect();
    assemble(pos, weights.into_iter())
}

/// Uniform positions with weights log-uniform over `[1e-2, 1e2]`.
pub fn mixed_scale(n: usize, seed: u64) -> ProblemInstance {
    assert!(n > 0);
    let mut rng = rng(seed);
    let span = n as f64;
    let pos = distinct_positions(n, &mut rng, |r| r.gen_range(0.0..span));
    let weights: Vec<f64> = (0..n)
        .map(|_| 10f64.powf(rng.gen_range(-2.0..=2.0)))
        .collect();
    assemble(pos, weights.into_iter())
}

/// An instance with a single closest pair.
#[derive(Debug, Clone)]
pub struct PlantedGap {
    pub instance: ProblemInstance,
    /// The closest pair is points `pair` and `pair + 1`.
    pub pair: usize,
    pub gap: f64,
}

pub fn adversarial_min_gap(n: usize, seed: u64) -> PlantedGap {
    assert!(n >= 2);
    let mut rng = rng(seed);
    let pair = rng.gen_range(0..n - 1);
    let mut pos = Vec::with_capacity(n);
    let mut x = 0.0f64;
    pos.push(x);
    for t in 0..n - 1 {
        x += if t == pair {
            1.0
        } else {
            rng.gen_range(2..=1000) as f64
        };
        pos.push(x);
    }
    PlantedGap {
        instance: assemble(pos, std::iter::repeat(1.0)),
        pair,
        gap: 1.0,
    }
}

/// A random family of `n` half-planes sharing one slope sign, with strictly
/// increasing x-intercepts and slopes spanning four orders of magnitude.
pub fn halfplane_family(n: usize, negative: bool, rng: &mut ChaCha8Rng) -> Vec<HalfPlane> {
    let intercepts = distinct_positions(n, rng, |r| {
        if r.gen_bool(0.1) {
            r.gen_range(0..8) as f64
        } else {
            r.gen_range(-100.0..100.0)
        }
    });
    intercepts
        .into_iter()
        .map(|r| {
            let w = 10f64.powf(rng.gen_range(-2.0..=2.0));
            HalfPlane::through(if negative { -w } else { w }, r)
        })
        .collect()
}
