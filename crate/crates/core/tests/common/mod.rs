//! Random instances and independent oracles shared by the integration tests.
#![allow(dead_code)]

use std::f64::consts::{FRAC_PI_2, TAU};

use margulis_core::schottky::SchottkyData;
use margulis_core::{
    ch_contains, AffineIso, CrookedHalfspace, LinearIso, Membership, MinkVec, SidePairedDomain,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_vec(rng: &mut impl Rng, r: f64) -> MinkVec {
    MinkVec::new(
        rng.random_range(-r..r),
        rng.random_range(-r..r),
        rng.random_range(-r..r),
    )
}

/// Rotation, boost of rapidity at most `boost`, rotation.
pub fn random_lorentz(rng: &mut impl Rng, boost: f64) -> LinearIso {
    let r1 = LinearIso::killing_flow(MinkVec::X3, rng.random_range(0.0..TAU));
    let b = LinearIso::killing_flow(MinkVec::X2, rng.random_range(-boost..boost));
    let r2 = LinearIso::killing_flow(MinkVec::X3, rng.random_range(0.0..TAU));
    r1.compose(&b).compose(&r2)
}

pub fn random_hyperbolic(rng: &mut impl Rng, lmin: f64, lmax: f64) -> LinearIso {
    let eta = random_lorentz(rng, 1.0);
    let a = LinearIso::killing_flow(MinkVec::X2, rng.random_range(lmin..lmax));
    eta.compose(&a).compose(&eta.inverse())
}

pub fn random_affine_hyperbolic(rng: &mut impl Rng) -> AffineIso {
    let a = random_hyperbolic(rng, 0.3, 3.0);
    AffineIso::new(a, random_vec(rng, 2.0))
}

/// A Schottky pair with roughly perpendicular axes, conjugated by a random
/// Lorentz transformation.
pub fn random_schottky_pair(rng: &mut impl Rng) -> SchottkyData {
    loop {
        let l = [rng.random_range(2.2..4.0), rng.random_range(2.2..4.0)];
        let t0 = rng.random_range(0.0..TAU);
        let t1 = t0 + FRAC_PI_2 + rng.random_range(-0.3..0.3);
        let d = SchottkyData::standard(&l, &[t0, t1]).expect("valid slabs");
        let d = d.conjugate(&random_lorentz(rng, 0.5)).expect("conjugate");
        if margulis_core::schottky_check(&d) {
            return d;
        }
    }
}

/// Four disjoint arcs of the circle, in circular order, as `(start, end)`.
fn random_arcs(rng: &mut impl Rng) -> [(f64, f64); 4] {
    let weights: Vec<f64> = (0..8).map(|_| rng.random_range(0.5..1.5)).collect();
    let total: f64 = weights.iter().sum();
    let start = rng.random_range(0.0..TAU);
    let mut t = start;
    let mut arcs = [(0.0, 0.0); 4];
    for k in 0..4 {
        let arc = weights[2 * k] / total * TAU;
        let gap = weights[2 * k + 1] / total * TAU;
        arcs[k] = (t, t + arc);
        t += arc + gap;
    }
    arcs
}

/// Pants: the sides `-1, +1, -2, +2` appear in this circular order.
pub fn random_pants(rng: &mut impl Rng) -> SidePairedDomain {
    let c = random_arcs(rng);
    let shears = [rng.random_range(-0.5..0.5), rng.random_range(-0.5..0.5)];
    SidePairedDomain::from_ideal_arcs(&[c[0], c[1], c[2], c[3]], &shears).expect("pants domain")
}

/// One-holed torus: circular order `-1, -2, +1, +2`.
pub fn random_torus(rng: &mut impl Rng) -> SidePairedDomain {
    let c = random_arcs(rng);
    let shears = [rng.random_range(-0.5..0.5), rng.random_range(-0.5..0.5)];
    SidePairedDomain::from_ideal_arcs(&[c[0], c[2], c[1], c[3]], &shears).expect("torus domain")
}

fn sinh_grid(n: usize, extent: f64, symmetric: bool) -> Vec<f64> {
    let s = extent.asinh();
    (0..n)
        .map(|k| {
            let f = k as f64 / (n - 1) as f64;
            if symmetric {
                (-s + 2.0 * s * f).sinh()
            } else {
                (s * f).sinh()
            }
        })
        .collect()
}

/// Points of the crooked plane bounding `h`: the stem and both wings, each
/// on an `n x n` grid with sinh spacing out to `extent`.
pub fn crooked_plane_samples(h: &CrookedHalfspace, n: usize, extent: f64) -> Vec<MinkVec> {
    let w = h.geod.normal();
    let (np, nm) = h.geod.endpoints();
    let sym = sinh_grid(n, extent, true);
    let pos = sinh_grid(n, extent, false);
    let mut pts = Vec::with_capacity(3 * n * n);
    for k in 0..n {
        let tau = k as f64 / (n - 1) as f64;
        let dir = np.scale(tau) + nm.scale(1.0 - tau);
        pts.extend(sym.iter().map(|&s| h.vertex + dir.scale(s)));
    }
    for &lam in &sym {
        for &mu in &pos {
            pts.push(h.vertex + np.scale(lam) - w.scale(mu));
            pts.push(h.vertex + nm.scale(lam) + w.scale(mu));
        }
    }
    pts
}

/// A closed planar piece of a crooked plane: `origin + s e1 + t e2` with the
/// coefficient constraint given by `kind`.
#[derive(Clone, Copy)]
struct Piece {
    origin: MinkVec,
    e1: MinkVec,
    e2: MinkVec,
    kind: PieceKind,
}

#[derive(Clone, Copy, PartialEq)]
enum PieceKind {
    /// `s t >= 0`: the stem, a pair of opposite quadrants.
    Stem,
    /// `t >= 0`: a wing.
    Wing,
}

fn pieces(h: &CrookedHalfspace) -> [Piece; 3] {
    let w = h.geod.normal();
    let (np, nm) = h.geod.endpoints();
    let v = h.vertex;
    [
        Piece { origin: v, e1: np, e2: nm, kind: PieceKind::Stem },
        Piece { origin: v, e1: np, e2: -w, kind: PieceKind::Wing },
        Piece { origin: v, e1: nm, e2: w, kind: PieceKind::Wing },
    ]
}

fn seg_dist(p: MinkVec, o: MinkVec, d: MinkVec, lo: f64, hi: f64) -> f64 {
    let x = p - o;
    let t = (x.euclid_dot(d) / d.euclid_dot(d)).clamp(lo, hi);
    (x - d.scale(t)).euclid_norm()
}

impl Piece {
    fn at(&self, s: f64, t: f64) -> MinkVec {
        self.origin + self.e1.scale(s) + self.e2.scale(t)
    }

    /// Euclidean distance from `p` to the piece.
    fn dist(&self, p: MinkVec) -> f64 {
        let x = p - self.origin;
        let (g11, g12, g22) = (
            self.e1.euclid_dot(self.e1),
            self.e1.euclid_dot(self.e2),
            self.e2.euclid_dot(self.e2),
        );
        let (b1, b2) = (x.euclid_dot(self.e1), x.euclid_dot(self.e2));
        let det = g11 * g22 - g12 * g12;
        let s = (g22 * b1 - g12 * b2) / det;
        let t = (g11 * b2 - g12 * b1) / det;
        let inside = match self.kind {
            PieceKind::Stem => s * t >= 0.0,
            PieceKind::Wing => t >= 0.0,
        };
        if inside {
            return (x - self.e1.scale(s) - self.e2.scale(t)).euclid_norm();
        }
        let inf = f64::INFINITY;
        match self.kind {
            PieceKind::Stem => [
                seg_dist(p, self.origin, self.e1, -inf, inf),
                seg_dist(p, self.origin, self.e2, -inf, inf),
            ]
            .into_iter()
            .fold(inf, f64::min),
            PieceKind::Wing => seg_dist(p, self.origin, self.e1, -inf, inf),
        }
    }
}

/// Signed distance to the crooked plane bounding `h`: negative inside `h`.
fn depth(h: &CrookedHalfspace, planes: &[Piece; 3], p: MinkVec) -> f64 {
    let d = planes.iter().map(|q| q.dist(p)).fold(f64::INFINITY, f64::min);
    match ch_contains(h, p) {
        Membership::Interior => -d,
        Membership::Boundary => 0.0,
        Membership::Outside => d,
    }
}

fn lin_grid(n: usize, lo: f64, hi: f64) -> Vec<f64> {
    (0..n).map(|k| lo + (hi - lo) * k as f64 / (n - 1) as f64).collect()
}

/// Samples `piece` on an `n x n` grid, refining around the samples closest
/// to `b`. True when some sample lies in the closed halfspace `b`.
fn piece_hits(piece: &Piece, b: &CrookedHalfspace, planes: &[Piece; 3], n: usize, extent: f64) -> bool {
    const SEEDS: usize = 4;
    const LEVELS: usize = 5;
    let first = sinh_grid(n, extent, true);
    let second = match piece.kind {
        PieceKind::Stem => first.clone(),
        PieceKind::Wing => sinh_grid(n, extent, false),
    };
    let admissible = |s: f64, t: f64| match piece.kind {
        PieceKind::Stem => s * t >= 0.0,
        PieceKind::Wing => t >= 0.0,
    };
    let mut grids = vec![(first, second)];
    for _ in 0..=LEVELS {
        let mut scored = Vec::new();
        for (gs, gt) in &grids {
            for i in 0..n {
                for j in 0..n {
                    let (s, t) = (gs[i], gt[j]);
                    if !admissible(s, t) {
                        continue;
                    }
                    let d = depth(b, planes, piece.at(s, t));
                    if d <= 0.0 {
                        return true;
                    }
                    let ds = (gs[i.saturating_sub(1)], gs[(i + 1).min(n - 1)]);
                    let dt = (gt[j.saturating_sub(1)], gt[(j + 1).min(n - 1)]);
                    scored.push((d, ds, dt));
                }
            }
        }
        scored.sort_by(|x, y| x.0.total_cmp(&y.0));
        grids = scored
            .iter()
            .take(SEEDS)
            .map(|&(_, (s0, s1), (t0, t1))| (lin_grid(n, s0, s1), lin_grid(n, t0, t1)))
            .collect();
    }
    false
}

/// Disjointness by sampling: each piece of either crooked plane is sampled on
/// an `n x n` chart grid (sinh spacing out to `extent`, then zoomed around
/// the samples nearest the other plane), and no sample may lie in the other
/// closed halfspace.
pub fn oracle_disjoint(h1: &CrookedHalfspace, h2: &CrookedHalfspace, n: usize, extent: f64) -> bool {
    let hits = |a: &CrookedHalfspace, b: &CrookedHalfspace| {
        let planes = pieces(b);
        pieces(a).iter().any(|p| piece_hits(p, b, &planes, n, extent))
    };
    !hits(h1, h2) && !hits(h2, h1)
}

/// A spacelike unit vector whose halfplane is the region facing the arc
/// from `a` to `b` (counterclockwise).
pub fn arc_normal(a: f64, b: f64) -> MinkVec {
    let p = MinkVec::new(a.cos(), a.sin(), 1.0);
    let q = MinkVec::new(b.cos(), b.sin(), 1.0);
    let s = margulis_core::bracket_cross(p, q).unit().unwrap();
    let m = 0.5 * (a + b);
    if s.dot(MinkVec::new(m.cos(), m.sin(), 1.0)) > 0.0 {
        s
    } else {
        -s
    }
}

pub fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}
