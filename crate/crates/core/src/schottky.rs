//! Linear Schottky data, Drumm's construction of crooked fundamental domains
//! and the crooked ping-pong certificate.
//!
//! Sides are always listed in the order `[-1, +1, -2, +2, ...]`: position
//! `2i` belongs to the inverse of generator `i + 1` and `2i + 1` to the
//! generator itself.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::crooked::{
    crooked_disjoint, halfplanes_disjoint, map_halfspace, stem_quadrant, CrookedHalfspace,
    OrientedGeodesic,
};
use crate::error::{Error, Result};
use crate::isometry::{hyperbolic_data, AffineIso, LinearIso};
use crate::lorentz::MinkVec;

/// Default upper bound of the scale search in [`drumm_construct`].
pub const DRUMM_T_MAX: f64 = (1u64 << 20) as f64;

/// Relative tolerance for the pairing condition.
pub const PAIRING_TOL: f64 = 1e-9;

/// Signed side label (`-i` or `+i`) for a position in the side list.
pub fn side_label(pos: usize) -> i32 {
    let i = (pos / 2) as i32 + 1;
    if pos % 2 == 0 {
        -i
    } else {
        i
    }
}

/// Hyperbolic generators `A_i` with slab normals `w_i`; generator `i` maps the
/// closure of `{v . w_i > 0}` onto the closure of `{v . A_i w_i > 0}`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SchottkyData {
    pub gens: Vec<LinearIso>,
    pub w: Vec<OrientedGeodesic>,
}

impl SchottkyData {
    pub fn new(gens: Vec<LinearIso>, w: Vec<MinkVec>) -> Result<Self> {
        if gens.len() != w.len() || gens.is_empty() {
            return Err(Error::Dimension(format!(
                "{} generators but {} slab normals",
                gens.len(),
                w.len()
            )));
        }
        let w = w
            .into_iter()
            .map(OrientedGeodesic::new)
            .collect::<Result<Vec<_>>>()?;
        for (i, (a, wi)) in gens.iter().zip(&w).enumerate() {
            let h = hyperbolic_data(a)?;
            // the slab boundary must cross the axis, separating w+ from w-
            if !(h.w_plus.dot(wi.normal()) > 0.0 && h.w_minus.dot(wi.normal()) < 0.0) {
                return Err(Error::Domain(format!(
                    "slab normal of generator {} does not separate its fixed points",
                    i + 1
                )));
            }
        }
        Ok(SchottkyData { gens, w })
    }

    pub fn rank(&self) -> usize {
        self.gens.len()
    }

    /// `m_{-i} = l_{-w_i}`.
    pub fn m_minus(&self, i: usize) -> OrientedGeodesic {
        self.w[i].reversed()
    }

    /// `m_{+i} = l_{A_i w_i}`.
    pub fn m_plus(&self, i: usize) -> OrientedGeodesic {
        self.w[i].transform(&self.gens[i])
    }

    /// The `2n` side geodesics in the order `[-1, +1, -2, +2, ...]`.
    pub fn sides(&self) -> Vec<OrientedGeodesic> {
        (0..self.rank())
            .flat_map(|i| [self.m_minus(i), self.m_plus(i)])
            .collect()
    }

    /// The symmetric slab for `A = exp(l K(x2))` conjugated by the rotation
    /// by `theta` about the center of the disk.
    pub fn standard(lengths: &[f64], angles: &[f64]) -> Result<Self> {
        if lengths.len() != angles.len() {
            return Err(Error::Dimension("one angle per length".into()));
        }
        let mut gens = Vec::new();
        let mut ws = Vec::new();
        for (&l, &theta) in lengths.iter().zip(angles) {
            if !(l > 0.0) {
                return Err(Error::Domain(format!("translation length must be positive, got {l}")));
            }
            let r = LinearIso::killing_flow(MinkVec::X3, theta);
            let a = LinearIso::killing_flow(MinkVec::X2, l);
            let w = LinearIso::killing_flow(MinkVec::X2, -0.5 * l).apply(-MinkVec::X1);
            gens.push(r.compose(&a).compose(&r.inverse()));
            ws.push(r.apply(w));
        }
        SchottkyData::new(gens, ws)
    }

    /// Conjugates all the data by a linear isometry.
    pub fn conjugate(&self, eta: &LinearIso) -> Result<Self> {
        let inv = eta.inverse();
        SchottkyData::new(
            self.gens.iter().map(|a| eta.compose(a).compose(&inv)).collect(),
            self.w.iter().map(|w| eta.apply(w.normal())).collect(),
        )
    }
}

/// Whether the `2n` slab halfplanes are pairwise disjoint.
pub fn schottky_check(data: &SchottkyData) -> bool {
    let sides = data.sides();
    (0..sides.len()).all(|i| (i + 1..sides.len()).all(|j| halfplanes_disjoint(&sides[i], &sides[j])))
}

/// A verified crooked ping-pong configuration.
///
/// Its meaning: the generators pair the listed crooked halfspaces, which are
/// pairwise disjoint, so the group they generate is free of rank `n` and acts
/// properly on Minkowski space with the complement of the halfspaces as a
/// fundamental domain. The quotient is an open solid handlebody.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub generators: Vec<AffineIso>,
    /// Halfspaces in the order `[-1, +1, -2, +2, ...]`.
    pub halfspaces: Vec<CrookedHalfspace>,
    /// Largest pairing discrepancy per generator, relative to the scale.
    pub pairing_residuals: Vec<f64>,
    pub pairs_checked: usize,
    pub pairing_ok: bool,
    pub disjoint_ok: bool,
}

/// Why a ping-pong configuration was rejected.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "failure")]
pub enum PingPongFailure {
    /// Generator `generator` does not map `CH_{-i}` onto the complement of
    /// `CH_{+i}`.
    PairingBroken { generator: i32, residual: f64 },
    /// Halfspaces `first` and `second` intersect.
    Overlap { first: i32, second: i32 },
    /// The disjointness criterion does not apply to this pair.
    PreconditionUnsupported { first: i32, second: i32, reason: String },
    Dimension { reason: String },
}

impl std::fmt::Display for PingPongFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            PingPongFailure::PairingBroken { generator, residual } => {
                write!(f, "pairing broken for generator {generator} (residual {residual:.3e})")
            }
            PingPongFailure::Overlap { first, second } => {
                write!(f, "crooked halfspaces {first} and {second} overlap")
            }
            PingPongFailure::PreconditionUnsupported { first, second, reason } => {
                write!(f, "cannot decide halfspaces {first} and {second}: {reason}")
            }
            PingPongFailure::Dimension { reason } => write!(f, "{reason}"),
        }
    }
}

impl std::error::Error for PingPongFailure {}

fn pairing_residual(g: &AffineIso, minus: &CrookedHalfspace, plus: &CrookedHalfspace) -> f64 {
    let image = map_halfspace(g, minus);
    let scale = plus.vertex.euclid_norm().max(1.0);
    let dv = image.vertex.max_abs_diff(plus.vertex) / scale;
    let dg = image.geod.normal().max_abs_diff(-plus.geod.normal());
    dv.max(dg)
}

/// Checks the pairing and pairwise disjointness of `2n` crooked halfspaces.
pub fn pingpong_certify(
    gens: &[AffineIso],
    halfspaces: &[CrookedHalfspace],
) -> std::result::Result<Certificate, PingPongFailure> {
    if halfspaces.len() != 2 * gens.len() {
        return Err(PingPongFailure::Dimension {
            reason: format!(
                "{} generators need {} halfspaces, got {}",
                gens.len(),
                2 * gens.len(),
                halfspaces.len()
            ),
        });
    }
    let mut residuals = Vec::with_capacity(gens.len());
    for (i, g) in gens.iter().enumerate() {
        let r = pairing_residual(g, &halfspaces[2 * i], &halfspaces[2 * i + 1]);
        if !(r <= PAIRING_TOL) {
            return Err(PingPongFailure::PairingBroken {
                generator: i as i32 + 1,
                residual: r,
            });
        }
        residuals.push(r);
    }
    let pairs: Vec<(usize, usize)> = (0..halfspaces.len())
        .flat_map(|i| (i + 1..halfspaces.len()).map(move |j| (i, j)))
        .collect();
    let verdicts: Vec<Result<bool>> = pairs
        .par_iter()
        .map(|&(i, j)| crooked_disjoint(&halfspaces[i], &halfspaces[j]))
        .collect();
    for (&(i, j), v) in pairs.iter().zip(verdicts) {
        let (first, second) = (side_label(i), side_label(j));
        match v {
            Ok(true) => {}
            Ok(false) => return Err(PingPongFailure::Overlap { first, second }),
            Err(e) => {
                return Err(PingPongFailure::PreconditionUnsupported {
                    first,
                    second,
                    reason: e.to_string(),
                })
            }
        }
    }
    Ok(Certificate {
        generators: gens.to_vec(),
        halfspaces: halfspaces.to_vec(),
        pairing_residuals: residuals,
        pairs_checked: pairs.len(),
        pairing_ok: true,
        disjoint_ok: true,
    })
}

/// Output of [`drumm_construct`]: the certificate and the scale that
/// produced it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DrummResult {
    pub certificate: Certificate,
    pub t: f64,
    pub translations: Vec<MinkVec>,
}

fn drumm_halfspaces(
    data: &SchottkyData,
    dirs: &[MinkVec],
    t: f64,
) -> (Vec<AffineIso>, Vec<CrookedHalfspace>) {
    let sides = data.sides();
    let halfspaces: Vec<CrookedHalfspace> = sides
        .iter()
        .zip(dirs)
        .map(|(s, d)| CrookedHalfspace::new(d.scale(t), *s))
        .collect();
    let gens = (0..data.rank())
        .map(|i| {
            let a = data.gens[i];
            let u = halfspaces[2 * i + 1].vertex - a.apply(halfspaces[2 * i].vertex);
            AffineIso::new(a, u)
        })
        .collect();
    (gens, halfspaces)
}

/// First overlapping pair of halfspaces, if any.
fn first_violation(halfspaces: &[CrookedHalfspace]) -> Option<(usize, usize)> {
    let pairs: Vec<(usize, usize)> = (0..halfspaces.len())
        .flat_map(|i| (i + 1..halfspaces.len()).map(move |j| (i, j)))
        .collect();
    pairs
        .par_iter()
        .find_first(|&&(i, j)| !matches!(crooked_disjoint(&halfspaces[i], &halfspaces[j]), Ok(true)))
        .copied()
}

/// Drumm's construction: translate each slab's crooked halfspace into its
/// stem quadrant, choose translational parts that make the pairing exact, and
/// certify the result.
///
/// `widths` holds one positive scale per side, in side order.
pub fn drumm_construct(data: &SchottkyData, widths: &[f64], t_max: f64) -> Result<DrummResult> {
    if widths.len() != 2 * data.rank() {
        return Err(Error::Dimension(format!(
            "{} sides but {} widths",
            2 * data.rank(),
            widths.len()
        )));
    }
    if let Some(w) = widths.iter().find(|w| !(**w > 0.0)) {
        return Err(Error::Domain(format!("widths must be positive, got {w}")));
    }
    if !schottky_check(data) {
        return Err(Error::ConfigurationUnsupported(
            "slab halfplanes are not pairwise disjoint".into(),
        ));
    }
    let dirs: Vec<MinkVec> = data
        .sides()
        .iter()
        .zip(widths)
        .map(|(s, &w)| stem_quadrant(s).central_direction().scale(w))
        .collect();

    let mut t = 1.0;
    let mut last_bad = (0, 1);
    let mut found = None;
    while t <= t_max {
        match first_violation(&drumm_halfspaces(data, &dirs, t).1) {
            None => {
                found = Some(t);
                break;
            }
            Some(p) => last_bad = p,
        }
        t *= 2.0;
    }
    let Some(mut t_hi) = found else {
        return Err(Error::ConstructionFailed {
            t_max,
            first: side_label(last_bad.0),
            second: side_label(last_bad.1),
        });
    };
    if t_hi > 1.0 {
        let mut t_lo = t_hi / 2.0;
        while t_hi - t_lo > 1e-3 * t_hi {
            let mid = 0.5 * (t_lo + t_hi);
            if first_violation(&drumm_halfspaces(data, &dirs, mid).1).is_none() {
                t_hi = mid;
            } else {
                t_lo = mid;
            }
        }
    }
    let (gens, halfspaces) = drumm_halfspaces(data, &dirs, t_hi);
    let translations = gens.iter().map(|g| g.trans).collect();
    let certificate = pingpong_certify(&gens, &halfspaces).map_err(|f| Error::ConstructionFailed {
        t_max,
        first: match &f {
            PingPongFailure::Overlap { first, .. } => *first,
            _ => 0,
        },
        second: match &f {
            PingPongFailure::Overlap { second, .. } => *second,
            _ => 0,
        },
    })?;
    Ok(DrummResult {
        certificate,
        t: t_hi,
        translations,
    })
}
