//! Randomized invariant suites, reproducible from a seed.

use std::f64::consts::{FRAC_PI_2, TAU};

use margulis_core::schottky::SchottkyData;
use margulis_core::{
    ch_contains, eval_affine, hyperbolic_data, length_derivative, map_halfspace, margulis_alpha,
    schottky_check, AffineIso, Cocycle, CrookedHalfspace, FreeWord, LinearIso, Membership,
    MinkVec, OrientedGeodesic,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

const CASES: usize = 200;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteResult {
    pub name: String,
    pub cases: usize,
    pub max_error: f64,
    pub tolerance: f64,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SelftestReport {
    pub seed: u64,
    pub suites: Vec<SuiteResult>,
    pub passed: bool,
}

fn vec3(r: &mut impl Rng, s: f64) -> MinkVec {
    MinkVec::new(r.random_range(-s..s), r.random_range(-s..s), r.random_range(-s..s))
}

fn lorentz(r: &mut impl Rng, boost: f64) -> LinearIso {
    let a = LinearIso::killing_flow(MinkVec::X3, r.random_range(0.0..TAU));
    let b = LinearIso::killing_flow(MinkVec::X2, r.random_range(-boost..boost));
    let c = LinearIso::killing_flow(MinkVec::X3, r.random_range(0.0..TAU));
    a.compose(&b).compose(&c)
}

fn hyperbolic(r: &mut impl Rng) -> LinearIso {
    let eta = lorentz(r, 1.0);
    let a = LinearIso::killing_flow(MinkVec::X2, r.random_range(0.3..3.0));
    eta.compose(&a).compose(&eta.inverse())
}

fn schottky_pair(r: &mut impl Rng) -> SchottkyData {
    loop {
        let l = [r.random_range(2.2..4.0), r.random_range(2.2..4.0)];
        let t = r.random_range(0.0..TAU);
        let d = SchottkyData::standard(&l, &[t, t + FRAC_PI_2]).and_then(|d| d.conjugate(&lorentz(r, 0.5)));
        if let Ok(d) = d {
            if schottky_check(&d) {
                return d;
            }
        }
    }
}

fn word(r: &mut impl Rng, max: usize) -> FreeWord {
    let n = r.random_range(1..=max);
    let letters: Vec<i32> = (0..n).map(|_| [1, -1, 2, -2][r.random_range(0..4)]).collect();
    FreeWord::reduce(&letters).expect("nonzero letters")
}

fn suite(name: &str, tolerance: f64, errors: impl Iterator<Item = f64>) -> SuiteResult {
    let (cases, max_error) = errors.fold((0, 0.0f64), |(n, m), e| (n + 1, m.max(e)));
    SuiteResult {
        name: name.into(),
        cases,
        max_error,
        tolerance,
        passed: max_error <= tolerance,
    }
}

fn alpha(g: &AffineIso) -> f64 {
    margulis_alpha(g).expect("hyperbolic")
}

pub fn run(seed: u64) -> SelftestReport {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    let mut suites = Vec::new();

    let isos: Vec<AffineIso> = (0..CASES).map(|_| AffineIso::new(hyperbolic(&mut r), vec3(&mut r, 2.0))).collect();
    let scale = |g: &AffineIso| g.trans.euclid_norm().max(1.0);

    suites.push(suite(
        "alpha conjugation invariance",
        1e-8,
        isos.iter()
            .map(|g| {
                let eta = AffineIso::new(lorentz(&mut r, 1.0), vec3(&mut r, 3.0));
                let h = g.conjugate_by(&eta);
                (alpha(&h) - alpha(g)).abs() / scale(g).max(scale(&h))
            })
            .collect::<Vec<_>>()
            .into_iter(),
    ));
    suites.push(suite(
        "alpha base point independence",
        1e-8,
        isos.iter()
            .map(|g| {
                let p = vec3(&mut r, 5.0);
                let w0 = hyperbolic_data(&g.linear).expect("hyperbolic").w_neutral;
                ((g.apply(p) - p).dot(w0) - alpha(g)).abs() / (scale(g) + p.euclid_norm())
            })
            .collect::<Vec<_>>()
            .into_iter(),
    ));
    suites.push(suite(
        "alpha power law",
        1e-8,
        isos.iter().flat_map(|g| {
            [-3, -2, -1, 2, 3].map(|n| {
                let gn = g.pow(n);
                (alpha(&gn) - n.unsigned_abs() as f64 * alpha(g)).abs() / scale(&gn)
            })
        }),
    ));

    let mut cocycle_errs = Vec::new();
    let mut coboundary_errs = Vec::new();
    let mut grad_errs = Vec::new();
    for _ in 0..CASES {
        let data = schottky_pair(&mut r);
        let u = Cocycle::new(vec![vec3(&mut r, 1.0), vec3(&mut r, 1.0)]);
        let (g, h) = (word(&mut r, 5), word(&mut r, 5));
        let eg = eval_affine(&data.gens, &u, &g).expect("rank 2");
        let eh = eval_affine(&data.gens, &u, &h).expect("rank 2");
        let egh = eval_affine(&data.gens, &u, &g.concat(&h)).expect("rank 2");
        let expect = eg.trans + eg.linear.apply(eh.trans);
        // rounding grows with |L(g)| |u(h)|, not with the (possibly cancelled) result
        let size = eg.trans.euclid_norm() + eg.linear.matrix().amax() * eh.trans.euclid_norm();
        cocycle_errs.push(egh.trans.max_abs_diff(expect) / size.max(1.0));

        let w = word(&mut r, 6).cyclic_reduce();
        if !w.is_empty() {
            let cob = Cocycle::coboundary(&data.gens, vec3(&mut r, 2.0));
            let e = eval_affine(&data.gens, &cob, &w).expect("rank 2");
            coboundary_errs.push(alpha(&e).abs() / scale(&e));
            if let Ok(gc) = length_derivative(&data.gens, &u, &w, 1e-5) {
                grad_errs.push(gc.rel_err);
            }
        }
    }
    suites.push(suite("cocycle identity", 1e-10, cocycle_errs.into_iter()));
    suites.push(suite("coboundaries have zero invariant", 1e-8, coboundary_errs.into_iter()));
    suites.push(suite("length derivative", 1e-5, grad_errs.into_iter()));

    let mut mismatches = Vec::new();
    for _ in 0..CASES {
        let g = AffineIso::new(lorentz(&mut r, 1.0), vec3(&mut r, 3.0));
        let w = vec3(&mut r, 1.0) + MinkVec::X1.scale(3.0);
        let Ok(geod) = OrientedGeodesic::new(w) else { continue };
        let h = CrookedHalfspace::new(vec3(&mut r, 2.0), geod);
        let p = vec3(&mut r, 5.0);
        let m = ch_contains(&h, p);
        if m != Membership::Boundary {
            mismatches.push(f64::from(u8::from(ch_contains(&map_halfspace(&g, &h), g.apply(p)) != m)));
        }
    }
    suites.push(suite("crooked membership equivariance", 0.0, mismatches.into_iter()));

    let passed = suites.iter().all(|s| s.passed);
    SelftestReport { seed, suites, passed }
}
