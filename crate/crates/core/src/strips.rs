//! Infinitesimal strip deformations of a side-paired fundamental domain.
//!
//! The base tile `D0` is bounded by `2n` geodesics listed as
//! `[s_{-1}, s_{+1}, ..., s_{-n}, s_{+n}]`, each oriented so that `D0` lies on
//! its negative side. Generator `i` maps `s_{-i}` to `s_{+i}` with `D0` going
//! to the tile across `s_{+i}`, so that `A_i s_{-i} = -s_{+i}`.
//!
//! Inserting a strip of width `w_i` along the arc through `s_{+i}` moves the
//! neighboring tile relative to `D0` by a hyperbolic Killing field. Tile
//! `gD0` moves by `u(g)`, the translational part of the resulting cocycle.

use serde::{Deserialize, Serialize};

use crate::crooked::{crooked_disjoint, CrookedHalfspace, OrientedGeodesic};
use crate::error::{Error, Result};
use crate::freegroup::{eval_affine, Cocycle, FreeWord};
use crate::isometry::{AffineIso, LinearIso};
use crate::lorentz::{bracket_cross, hyperboloid_point, lorentz_form, MinkVec};

/// Residual tolerance for the side pairing.
pub const DOMAIN_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SidePairedDomain {
    pub sides: Vec<OrientedGeodesic>,
    pub pairings: Vec<LinearIso>,
}

impl SidePairedDomain {
    pub fn new(sides: Vec<MinkVec>, pairings: Vec<LinearIso>) -> Result<Self> {
        if sides.len() != 2 * pairings.len() || pairings.is_empty() {
            return Err(Error::Dimension(format!(
                "{} pairings need {} sides, got {}",
                pairings.len(),
                2 * pairings.len(),
                sides.len()
            )));
        }
        let sides = sides
            .into_iter()
            .map(OrientedGeodesic::new)
            .collect::<Result<Vec<_>>>()?;
        for i in 0..sides.len() {
            for j in i + 1..sides.len() {
                if !(sides[i].normal().dot(sides[j].normal()) < -1.0) {
                    return Err(Error::Strip(format!(
                        "closed halfplanes of sides {i} and {j} are not disjoint"
                    )));
                }
            }
        }
        for (i, g) in pairings.iter().enumerate() {
            let image = g.apply(sides[2 * i].normal());
            let res = image.max_abs_diff(-sides[2 * i + 1].normal());
            if !(res <= DOMAIN_TOL * image.euclid_norm().max(1.0)) {
                return Err(Error::Strip(format!(
                    "generator {} does not pair its sides (residual {res:.3e})",
                    i + 1
                )));
            }
        }
        Ok(SidePairedDomain { sides, pairings })
    }

    pub fn rank(&self) -> usize {
        self.pairings.len()
    }

    pub fn side_minus(&self, i: usize) -> OrientedGeodesic {
        self.sides[2 * i]
    }

    pub fn side_plus(&self, i: usize) -> OrientedGeodesic {
        self.sides[2 * i + 1]
    }

    /// Builds a domain from `2n` disjoint arcs of the circle at infinity.
    ///
    /// Arc `k` runs counterclockwise from `arcs[k].0` to `arcs[k].1`
    /// (radians); its side geodesic joins the endpoints and faces the arc.
    /// Arcs are given in side order. Pairing `i` is the isometry taking the
    /// side frame of `s_{-i}` to that of `-s_{+i}`, followed by a translation
    /// of length `shears[i]` along `s_{+i}`.
    pub fn from_ideal_arcs(arcs: &[(f64, f64)], shears: &[f64]) -> Result<Self> {
        if arcs.len() != 2 * shears.len() {
            return Err(Error::Dimension(format!(
                "{} shears need {} arcs, got {}",
                shears.len(),
                2 * shears.len(),
                arcs.len()
            )));
        }
        let sides: Vec<MinkVec> = arcs
            .iter()
            .map(|&(a, b)| arc_side(a, b))
            .collect::<Result<_>>()?;
        let pairings = shears
            .iter()
            .enumerate()
            .map(|(i, &shear)| {
                let from = sides[2 * i].unit()?;
                let to = -sides[2 * i + 1].unit()?;
                let g0 = side_frame(to)? * lorentz_form() * side_frame(from)?.transpose() * lorentz_form();
                let g0 = LinearIso::new(g0)?;
                Ok(LinearIso::killing_flow(to, shear).compose(&g0))
            })
            .collect::<Result<Vec<_>>>()?;
        SidePairedDomain::new(sides, pairings)
    }
}

fn ideal_point(theta: f64) -> MinkVec {
    MinkVec::new(theta.cos(), theta.sin(), 1.0)
}

/// Unit normal of the geodesic joining the ends of an arc, facing the arc.
fn arc_side(a: f64, b: f64) -> Result<MinkVec> {
    let mut span = (b - a).rem_euclid(std::f64::consts::TAU);
    if span == 0.0 {
        span = std::f64::consts::TAU;
    }
    let s = bracket_cross(ideal_point(a), ideal_point(b)).unit()?;
    Ok(if s.dot(ideal_point(a + 0.5 * span)) > 0.0 { s } else { -s })
}

/// Columns `(a, e2, e3)`: a Lorentz-orthonormal, positively oriented frame
/// with `e3` future timelike in `a^perp`.
fn side_frame(a: MinkVec) -> Result<nalgebra::Matrix3<f64>> {
    let e3 = hyperboloid_point(MinkVec::X3 - a.scale(MinkVec::X3.dot(a)))?;
    let mut e2 = bracket_cross(a, e3).unit()?;
    if crate::lorentz::det(a, e2, e3) < 0.0 {
        e2 = -e2;
    }
    Ok(nalgebra::Matrix3::from_columns(&[
        a.to_vector3(),
        e2.to_vector3(),
        e3.to_vector3(),
    ]))
}

/// Waists and widths of the strips, one per generator.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StripData {
    /// A point of H^2 on `s_{+i}` where strip `i` is inserted.
    pub waists: Vec<MinkVec>,
    /// Nonnegative widths; zero gives the trivial deformation.
    pub widths: Vec<f64>,
    /// Reverses the direction of the relative motion of strip `i`.
    #[serde(default)]
    pub reversed: Vec<bool>,
}

impl StripData {
    /// Waists at the points of each `s_{+i}` closest to the center of the
    /// disk.
    pub fn centered(domain: &SidePairedDomain, widths: Vec<f64>) -> Result<Self> {
        let waists = (0..domain.rank())
            .map(|i| closest_point(&domain.side_plus(i), MinkVec::X3))
            .collect::<Result<_>>()?;
        Ok(StripData {
            waists,
            widths,
            reversed: Vec::new(),
        })
    }

    fn is_reversed(&self, i: usize) -> bool {
        self.reversed.get(i).copied().unwrap_or(false)
    }
}

/// Orthogonal projection of a point of H^2 onto a geodesic.
pub fn closest_point(side: &OrientedGeodesic, p: MinkVec) -> Result<MinkVec> {
    let s = side.normal();
    hyperboloid_point(p - s.scale(p.dot(s)))
}

/// Midpoint of the part of a geodesic inside a convex polygon, given by its
/// vertices in the Klein disk model.
pub fn segment_midpoint(side: &OrientedGeodesic, klein_polygon: &[[f64; 2]]) -> Result<MinkVec> {
    let s = side.normal();
    // the geodesic is the chord s1 x + s2 y = s3
    let f = |p: &[f64; 2]| s.c1 * p[0] + s.c2 * p[1] - s.c3;
    let mut hits = Vec::new();
    for k in 0..klein_polygon.len() {
        let (p, q) = (klein_polygon[k], klein_polygon[(k + 1) % klein_polygon.len()]);
        let (fp, fq) = (f(&p), f(&q));
        if (fp <= 0.0) != (fq <= 0.0) {
            let t = fp / (fp - fq);
            hits.push([p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])]);
        }
    }
    if hits.len() != 2 {
        return Err(Error::Strip("geodesic does not cross the polygon".into()));
    }
    let lift = |p: [f64; 2]| hyperboloid_point(MinkVec::new(p[0], p[1], 1.0));
    hyperboloid_point(lift(hits[0])? + lift(hits[1])?)
}

fn validate(domain: &SidePairedDomain, strips: &StripData) -> Result<()> {
    let n = domain.rank();
    if strips.waists.len() != n || strips.widths.len() != n {
        return Err(Error::Dimension(format!(
            "{n} strips expected, got {} waists and {} widths",
            strips.waists.len(),
            strips.widths.len()
        )));
    }
    for (i, (&q, &w)) in strips.waists.iter().zip(&strips.widths).enumerate() {
        if !(w >= 0.0) || !w.is_finite() {
            return Err(Error::Strip(format!("width of strip {} must be nonnegative, got {w}", i + 1)));
        }
        let scale = q.euclid_norm().max(1.0);
        if (q.norm_sq() + 1.0).abs() > DOMAIN_TOL * scale * scale || q.c3 <= 0.0 {
            return Err(Error::Strip(format!("waist {} is not a point of H^2", i + 1)));
        }
        if q.dot(domain.side_plus(i).normal()).abs() > DOMAIN_TOL * scale {
            return Err(Error::Strip(format!("waist {} is off its side", i + 1)));
        }
    }
    Ok(())
}

/// Relative motion of the tile across `s_{+i}`: translation of speed `w_i`
/// along the geodesic through the waist orthogonal to `s_{+i}`, toward `D0`.
pub fn strip_motion(domain: &SidePairedDomain, strips: &StripData, i: usize) -> Result<MinkVec> {
    let s = domain.side_plus(i).normal();
    let axis = OrientedGeodesic::new(bracket_cross(strips.waists[i], s))?;
    // the flow of a unit normal moves points toward its attracting end
    let toward_base = axis.n_plus().dot(s) < 0.0;
    let n = if toward_base != strips.is_reversed(i) {
        axis.normal()
    } else {
        -axis.normal()
    };
    Ok(n.scale(strips.widths[i]))
}

/// The cocycle of the strip deformation: `u(a_i)` is the motion of the tile
/// `a_i D0`.
pub fn strip_cocycle(domain: &SidePairedDomain, strips: &StripData) -> Result<Cocycle> {
    validate(domain, strips)?;
    (0..domain.rank())
        .map(|i| strip_motion(domain, strips, i))
        .collect::<Result<Vec<_>>>()
        .map(Cocycle::new)
}

/// Affine generators `(A_i, u_i)` of the strip deformation.
pub fn strip_generators(domain: &SidePairedDomain, strips: &StripData) -> Result<Vec<AffineIso>> {
    let u = strip_cocycle(domain, strips)?;
    Ok(domain
        .pairings
        .iter()
        .zip(&u.u_gen)
        .map(|(a, t)| AffineIso::new(*a, *t))
        .collect())
}

/// A side of a tile `gD0`, oriented away from the tile or toward it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArcRef {
    pub tile: FreeWord,
    /// Position in the side list of `D0`.
    pub side: usize,
    pub outward: bool,
}

impl ArcRef {
    pub fn base(side: usize, outward: bool) -> Self {
        ArcRef {
            tile: FreeWord::identity(),
            side,
            outward,
        }
    }
}

fn side_letter(pos: usize) -> i32 {
    let i = (pos / 2) as i32 + 1;
    if pos % 2 == 0 {
        -i
    } else {
        i
    }
}

/// The crooked halfspace of an arc: vertex at the average of the motions of
/// the two adjacent tiles, bounded by the arc's geodesic.
pub fn arc_halfspace(domain: &SidePairedDomain, u: &Cocycle, arc: &ArcRef) -> Result<CrookedHalfspace> {
    if arc.side >= domain.sides.len() {
        return Err(Error::Dimension(format!("no side {}", arc.side)));
    }
    let tile = eval_affine(&domain.pairings, u, &arc.tile)?;
    let across = arc.tile.concat(&FreeWord::generator(side_letter(arc.side))?);
    let neighbor = eval_affine(&domain.pairings, u, &across)?;
    let vertex = (tile.trans + neighbor.trans).scale(0.5);
    let geod = domain.sides[arc.side].transform(&tile.linear);
    Ok(CrookedHalfspace::new(
        vertex,
        if arc.outward { geod } else { geod.reversed() },
    ))
}

/// The `2n` crooked halfspaces on the far sides of the arcs through the
/// sides of `D0`, in side order.
pub fn arc_crooked_planes(domain: &SidePairedDomain, strips: &StripData) -> Result<Vec<CrookedHalfspace>> {
    let u = strip_cocycle(domain, strips)?;
    (0..domain.sides.len())
        .map(|k| arc_halfspace(domain, &u, &ArcRef::base(k, true)))
        .collect()
}

/// Whether the crooked halfspace of arc `a` lies in the interior of that of
/// arc `b`. Requires the halfplane of `a` to be nested in that of `b`.
pub fn nesting_check(domain: &SidePairedDomain, strips: &StripData, a: &ArcRef, b: &ArcRef) -> Result<bool> {
    let u = strip_cocycle(domain, strips)?;
    let ha = arc_halfspace(domain, &u, a)?;
    let hb = arc_halfspace(domain, &u, b)?;
    if !(ha.geod.normal().dot(hb.geod.normal()) > 1.0) {
        return Err(Error::Orientation(format!(
            "halfplane of arc {a:?} is not nested inside that of arc {b:?}"
        )));
    }
    crooked_disjoint(&ha, &hb.complement())
}
