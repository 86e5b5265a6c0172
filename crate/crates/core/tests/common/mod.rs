#![allow(dead_code)]

use ch2noid::stability::{MixedDegreeData, PunctureWeights, SurfaceData, WeightTriple};
use num_bigint::BigInt;
use num_rational::BigRational;
use rand::seq::SliceRandom;
use rand::Rng;

pub fn frac(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// A sorted triple in [0, 1) with denominators up to 12, and β, γ drawn from it.
pub fn random_puncture_weights<R: Rng>(rng: &mut R) -> PunctureWeights {
    let den = rng.gen_range(1..=12);
    let mut nums: [i64; 3] = std::array::from_fn(|_| rng.gen_range(0..den));
    nums.sort_unstable();
    let alphas = nums.map(|k| frac(k, den));
    let beta = alphas.choose(rng).unwrap().clone();
    let gamma = alphas.choose(rng).unwrap().clone();
    PunctureWeights::new(WeightTriple::new(alphas).unwrap(), beta, gamma).unwrap()
}

pub fn random_mixed_instance<R: Rng>(rng: &mut R) -> (SurfaceData, MixedDegreeData) {
    let genus = rng.gen_range(0..=3);
    let n = rng.gen_range(if genus == 0 { 3 } else { 1 }..=10);
    let surface = SurfaceData::new(genus, n).unwrap();
    let weights = (0..n).map(|_| random_puncture_weights(rng)).collect();
    let data = MixedDegreeData {
        d1: rng.gen_range(0..=30),
        d2: rng.gen_range(0..=30),
        weights,
    };
    (surface, data)
}
