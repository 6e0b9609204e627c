//! Fixed instances shared by the benchmarks.

use margulis_core::schottky::SchottkyData;
use margulis_core::{Cocycle, LinearIso, MinkVec};

/// A symmetric Schottky pair with translation lengths `l` and perpendicular
/// axes.
pub fn schottky_pair(l: f64) -> SchottkyData {
    SchottkyData::standard(&[l, l], &[0.0, std::f64::consts::FRAC_PI_2])
        .expect("standard pair is valid")
}

/// A generic cocycle for the pair.
pub fn sample_cocycle() -> Cocycle {
    Cocycle::new(vec![MinkVec::new(0.3, 0.9, -0.2), MinkVec::new(-0.5, 0.4, 0.1)])
}

pub fn gens(data: &SchottkyData) -> Vec<LinearIso> {
    data.gens.clone()
}
