//! Crooked planes and crooked halfspaces.
//!
//! A crooked halfspace `CH(x, l)` is the set of points `x + X` such that the
//! Killing field `X` has a non-attracting fixed point in the closed halfplane
//! bounded by the oriented geodesic `l`. Its boundary is the crooked plane
//! `CP(x, l)`: a stem (timelike and null fields fixing a point of `l`) and two
//! wings (fields repelling from an endpoint of `l`).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::isometry::{AffineIso, LinearIso};
use crate::lorentz::{
    bracket_cross, causal_classify, det, hyperboloid_point, null_eigenvectors, CausalClass,
    MinkVec, CAUSAL_TOL,
};

/// Relative band around a crooked plane in which [`ch_contains`] answers
/// `Boundary`.
pub const CONTAINS_TOL: f64 = 1e-10;

/// Strictness margin for cone membership in [`crooked_disjoint`].
pub const CONE_MARGIN: f64 = 1e-12;

/// An oriented geodesic of H^2, stored as the unit spacelike normal `w` of its
/// plane. The positive halfplane is `{v : v . w > 0}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MinkVec", into = "MinkVec")]
pub struct OrientedGeodesic {
    w: MinkVec,
}

impl OrientedGeodesic {
    /// Normalizes a spacelike vector to unit length.
    pub fn new(w: MinkVec) -> Result<Self> {
        match causal_classify(w, CAUSAL_TOL) {
            Ok(CausalClass::Spacelike) => Ok(OrientedGeodesic { w: w.unit()? }),
            Ok(c) => Err(Error::Domain(format!(
                "geodesic normal must be spacelike, {w} is {c:?}"
            ))),
            Err(e) => Err(e),
        }
    }

    pub fn normal(&self) -> MinkVec {
        self.w
    }

    pub fn reversed(&self) -> OrientedGeodesic {
        OrientedGeodesic { w: -self.w }
    }

    /// Attracting ideal endpoint of the flow of `w`, with `c3 = 1`.
    pub fn n_plus(&self) -> MinkVec {
        self.endpoints().0
    }

    /// Repelling ideal endpoint of the flow of `w`, with `c3 = 1`.
    pub fn n_minus(&self) -> MinkVec {
        self.endpoints().1
    }

    pub fn endpoints(&self) -> (MinkVec, MinkVec) {
        null_eigenvectors(self.w).expect("unit spacelike normal has null eigenvectors")
    }

    pub fn transform(&self, a: &LinearIso) -> OrientedGeodesic {
        // renormalize to absorb rounding from large matrices
        let w = a.apply(self.w);
        OrientedGeodesic {
            w: w.unit().unwrap_or(w),
        }
    }

    /// Open halfplane membership for a point of H^2 (or any vector).
    pub fn in_halfplane(&self, v: MinkVec) -> bool {
        v.dot(self.w) > 0.0
    }
}

impl TryFrom<MinkVec> for OrientedGeodesic {
    type Error = Error;
    fn try_from(w: MinkVec) -> Result<Self> {
        OrientedGeodesic::new(w)
    }
}

impl From<OrientedGeodesic> for MinkVec {
    fn from(g: OrientedGeodesic) -> MinkVec {
        g.w
    }
}

/// The closed crooked halfspace `CH(vertex, geod)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CrookedHalfspace {
    pub vertex: MinkVec,
    pub geod: OrientedGeodesic,
}

impl CrookedHalfspace {
    pub fn new(vertex: MinkVec, geod: OrientedGeodesic) -> Self {
        CrookedHalfspace { vertex, geod }
    }

    /// `CH(vertex, -geod)`, the closure of the complement.
    pub fn complement(&self) -> CrookedHalfspace {
        CrookedHalfspace::new(self.vertex, self.geod.reversed())
    }
}

/// Position of a point relative to a crooked halfspace.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Membership {
    Interior,
    Boundary,
    Outside,
}

/// Locates `v` relative to `h`.
pub fn ch_contains(h: &CrookedHalfspace, v: MinkVec) -> Membership {
    let x = v - h.vertex;
    if x.is_zero() {
        return Membership::Boundary;
    }
    let w = h.geod.normal();
    let witness = match causal_classify(x, CAUSAL_TOL) {
        Ok(CausalClass::Zero) => return Membership::Boundary,
        Ok(c) if c.is_timelike() => hyperboloid_point(x).ok(),
        Ok(CausalClass::Spacelike) => null_eigenvectors(x).ok().map(|(_, repel)| repel),
        Ok(c) if c.is_null() => Some(if x.c3 < 0.0 { -x } else { x }),
        _ => None,
    };
    let Some(p) = witness else {
        return Membership::Boundary;
    };
    let s = p.dot(w);
    let band = CONTAINS_TOL * p.euclid_norm() * w.euclid_norm();
    if s > band {
        Membership::Interior
    } else if s < -band {
        Membership::Outside
    } else {
        Membership::Boundary
    }
}

/// The open cone `{s g1 + t g2 : s, t > 0}` of translations pushing a crooked
/// halfspace into itself.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct StemQuadrantCone {
    pub g1: MinkVec,
    pub g2: MinkVec,
}

impl StemQuadrantCone {
    /// `g1 + g2`, normalized to unit length.
    pub fn central_direction(&self) -> MinkVec {
        let s = self.g1 + self.g2;
        s.unit().unwrap_or(s)
    }

    /// Open-cone membership with relative tolerance `tol` on the
    /// out-of-plane component and on the coefficients.
    pub fn contains(&self, u: MinkVec, tol: f64) -> bool {
        let n = bracket_cross(self.g1, self.g2);
        let scale = u.euclid_norm().max(1e-300);
        if n.dot(u).abs() > tol * n.euclid_norm() * scale * 4.0 {
            return false;
        }
        // coefficients via the Lorentz Gram system on the two null generators
        let g12 = self.g1.dot(self.g2);
        let s = u.dot(self.g2) / g12;
        let t = u.dot(self.g1) / g12;
        let cut = tol * scale;
        s > cut && t > cut
    }

    pub fn transform(&self, a: &LinearIso) -> StemQuadrantCone {
        StemQuadrantCone {
            g1: a.apply(self.g1),
            g2: a.apply(self.g2),
        }
    }
}

/// The spacelike quadrant of `w^perp` lying inside `CH(0, l)`.
///
/// The two candidate quadrants are `(n+, -n-)` and `(-n+, n-)`; the choice is
/// made by testing the candidate's central ray against [`ch_contains`].
pub fn stem_quadrant(l: &OrientedGeodesic) -> StemQuadrantCone {
    let (np, nm) = l.endpoints();
    let origin = CrookedHalfspace::new(MinkVec::ZERO, *l);
    let first = StemQuadrantCone { g1: np, g2: -nm };
    if ch_contains(&origin, first.g1 + first.g2) == Membership::Interior {
        first
    } else {
        let second = StemQuadrantCone { g1: -np, g2: nm };
        debug_assert_eq!(
            ch_contains(&origin, second.g1 + second.g2),
            Membership::Interior
        );
        second
    }
}

/// Disjointness of the closed halfplanes bounded by two geodesics.
pub fn halfplanes_disjoint(l1: &OrientedGeodesic, l2: &OrientedGeodesic) -> bool {
    l1.normal().dot(l2.normal()) < -1.0
}

fn opposed(l1: &OrientedGeodesic, l2: &OrientedGeodesic) -> bool {
    (l1.normal() + l2.normal()).euclid_norm() <= 1e-9 * l1.normal().euclid_norm()
}

/// Whether two crooked halfspaces have disjoint closures.
///
/// Decided by membership of `vertex1 - vertex2` in the open cone
/// `Q(l1) - Q(l2)`. Requires away-facing geodesics or an opposed pair.
pub fn crooked_disjoint(h1: &CrookedHalfspace, h2: &CrookedHalfspace) -> Result<bool> {
    let rank2 = opposed(&h1.geod, &h2.geod);
    if !rank2 && !halfplanes_disjoint(&h1.geod, &h2.geod) {
        return Err(Error::ConfigurationUnsupported(format!(
            "geodesics {} and {} neither bound disjoint halfplanes nor are opposed",
            h1.geod.normal(),
            h2.geod.normal()
        )));
    }
    let q1 = stem_quadrant(&h1.geod);
    let q2 = stem_quadrant(&h2.geod);
    let gens = [q1.g1, q1.g2, -q2.g1, -q2.g2].map(|g| g.scale(1.0 / g.euclid_norm()));
    let d = h1.vertex - h2.vertex;
    let dn = d.euclid_norm();
    if dn == 0.0 {
        return Ok(false);
    }
    let d = d.scale(1.0 / dn);
    if rank2 {
        Ok(in_planar_cone(&gens, d))
    } else {
        Ok(in_solid_cone(&gens, d))
    }
}

/// Strict membership in the open cone spanned by generators that span R^3.
fn in_solid_cone(gens: &[MinkVec], d: MinkVec) -> bool {
    let mut facets = 0;
    for i in 0..gens.len() {
        for j in i + 1..gens.len() {
            let n = bracket_cross(gens[i], gens[j]);
            let nn = n.euclid_norm();
            if nn < 1e-9 {
                continue;
            }
            let eps = CONE_MARGIN * nn;
            let sides: Vec<f64> = (0..gens.len())
                .filter(|&k| k != i && k != j)
                .map(|k| n.dot(gens[k]))
                .collect();
            let sign = if sides.iter().all(|&s| s >= -eps) {
                1.0
            } else if sides.iter().all(|&s| s <= eps) {
                -1.0
            } else {
                continue;
            };
            if sides.iter().all(|&s| s.abs() <= eps) {
                // all generators coplanar: no solid interior
                return false;
            }
            facets += 1;
            if sign * n.dot(d) <= eps {
                return false;
            }
        }
    }
    // no facet at all means the generators positively span R^3
    facets > 0 || rank3(gens)
}

fn rank3(gens: &[MinkVec]) -> bool {
    (0..gens.len()).any(|i| {
        (i + 1..gens.len()).any(|j| (j + 1..gens.len()).any(|k| det(gens[i], gens[j], gens[k]).abs() > 1e-9))
    })
}

/// Strict membership in a planar open cone: `d` must lie in the plane of the
/// generators and strictly inside the 2D cone.
fn in_planar_cone(gens: &[MinkVec], d: MinkVec) -> bool {
    let plane = gens
        .iter()
        .flat_map(|a| gens.iter().map(move |b| bracket_cross(*a, *b)))
        .max_by(|a, b| a.euclid_norm().total_cmp(&b.euclid_norm()))
        .unwrap_or(MinkVec::ZERO);
    let pn = plane.euclid_norm();
    if pn < 1e-9 || plane.dot(d).abs() > 1e-9 * pn {
        return false;
    }
    let mut facets = 0;
    for (i, g) in gens.iter().enumerate() {
        // in-plane normal to the ray g
        let m = bracket_cross(plane, *g);
        let mn = m.euclid_norm();
        if mn < 1e-12 {
            continue;
        }
        let eps = CONE_MARGIN * mn;
        let sides: Vec<f64> = gens
            .iter()
            .enumerate()
            .filter(|&(k, h)| k != i && bracket_cross(*g, *h).euclid_norm() > 1e-9)
            .map(|(_, h)| m.dot(*h))
            .collect();
        let sign = if sides.iter().all(|&s| s >= -eps) {
            1.0
        } else if sides.iter().all(|&s| s <= eps) {
            -1.0
        } else {
            continue;
        };
        facets += 1;
        if sign * m.dot(d) <= eps {
            return false;
        }
    }
    facets > 0
}

/// `g(H) = CH(g(vertex), L(g) l)`.
pub fn map_halfspace(g: &AffineIso, h: &CrookedHalfspace) -> CrookedHalfspace {
    CrookedHalfspace::new(g.apply(h.vertex), h.geod.transform(&g.linear))
}
