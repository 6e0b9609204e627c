//! Vector algebra on the Lorentzian space R^{2,1}, modeled on sl(2,R).
//!
//! A [`MinkVec`] holds coordinates in the ordered basis
//!
//! ```text
//! x1 = [[0, 1], [1, 0]],   x2 = [[1, 0], [0, -1]],   x3 = [[0, -1], [1, 0]]
//! ```
//!
//! with inner product `v . w = tr(vw) / 2`, so that `x1.x1 = x2.x2 = 1` and
//! `x3.x3 = -1`. The matrix form is only materialized by [`MinkVec::to_sl2`]
//! and [`MinkVec::from_sl2`]; everything else works on coordinates.
//!
//! Killing fields: a vector `v` acts on R^{2,1} infinitesimally by
//! `x -> [v, x] / 2`. With that normalization a unit spacelike vector
//! translates its axis at unit speed, and the one-parameter group it
//! generates is [`killing_flow`].

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use nalgebra::{Matrix2, Matrix3, Vector3};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default relative tolerance for causal classification.
pub const CAUSAL_TOL: f64 = 1e-10;

/// The Lorentz form `diag(1, 1, -1)`.
pub fn lorentz_form() -> Matrix3<f64> {
    Matrix3::from_diagonal(&Vector3::new(1.0, 1.0, -1.0))
}

/// A vector of R^{2,1} in `(x1, x2, x3)` coordinates.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(from = "[f64; 3]", into = "[f64; 3]")]
pub struct MinkVec {
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
}

impl MinkVec {
    pub const ZERO: MinkVec = MinkVec::new(0.0, 0.0, 0.0);
    pub const X1: MinkVec = MinkVec::new(1.0, 0.0, 0.0);
    pub const X2: MinkVec = MinkVec::new(0.0, 1.0, 0.0);
    pub const X3: MinkVec = MinkVec::new(0.0, 0.0, 1.0);

    pub const fn new(c1: f64, c2: f64, c3: f64) -> Self {
        MinkVec { c1, c2, c3 }
    }

    pub fn to_vector3(self) -> Vector3<f64> {
        Vector3::new(self.c1, self.c2, self.c3)
    }

    pub fn from_vector3(v: &Vector3<f64>) -> Self {
        MinkVec::new(v[0], v[1], v[2])
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.c1, self.c2, self.c3]
    }

    /// Lorentzian inner product.
    pub fn dot(self, other: MinkVec) -> f64 {
        minkowski_dot(self, other)
    }

    /// Lorentzian self-product `v . v`.
    pub fn norm_sq(self) -> f64 {
        self.dot(self)
    }

    /// Euclidean norm of the coordinate vector (auxiliary, used for scales).
    pub fn euclid_norm(self) -> f64 {
        (self.c1 * self.c1 + self.c2 * self.c2 + self.c3 * self.c3).sqrt()
    }

    pub fn euclid_dot(self, other: MinkVec) -> f64 {
        self.c1 * other.c1 + self.c2 * other.c2 + self.c3 * other.c3
    }

    pub fn is_zero(self) -> bool {
        self.c1 == 0.0 && self.c2 == 0.0 && self.c3 == 0.0
    }

    pub fn scale(self, s: f64) -> MinkVec {
        MinkVec::new(self.c1 * s, self.c2 * s, self.c3 * s)
    }

    /// Rescales a spacelike or timelike vector to `|v . v| = 1`.
    pub fn unit(self) -> Result<MinkVec> {
        let q = self.norm_sq();
        if q.abs() <= CAUSAL_TOL * self.euclid_norm().powi(2) || !q.is_finite() {
            return Err(Error::Degenerate(format!(
                "cannot normalize null or zero vector {self}"
            )));
        }
        Ok(self.scale(1.0 / q.abs().sqrt()))
    }

    /// The traceless 2x2 matrix represented by this vector.
    pub fn to_sl2(self) -> Matrix2<f64> {
        Matrix2::new(
            self.c2,
            self.c1 - self.c3,
            self.c1 + self.c3,
            -self.c2,
        )
    }

    /// Coordinates of the traceless part of a 2x2 matrix.
    pub fn from_sl2(m: &Matrix2<f64>) -> MinkVec {
        let a = 0.5 * (m[(0, 0)] - m[(1, 1)]);
        let b = m[(0, 1)];
        let c = m[(1, 0)];
        MinkVec::new(0.5 * (b + c), a, 0.5 * (c - b))
    }

    pub fn max_abs_diff(self, other: MinkVec) -> f64 {
        (self.c1 - other.c1)
            .abs()
            .max((self.c2 - other.c2).abs())
            .max((self.c3 - other.c3).abs())
    }
}

impl From<[f64; 3]> for MinkVec {
    fn from(a: [f64; 3]) -> Self {
        MinkVec::new(a[0], a[1], a[2])
    }
}

impl From<MinkVec> for [f64; 3] {
    fn from(v: MinkVec) -> Self {
        v.to_array()
    }
}

impl fmt::Display for MinkVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.c1, self.c2, self.c3)
    }
}

impl Add for MinkVec {
    type Output = MinkVec;
    fn add(self, o: MinkVec) -> MinkVec {
        MinkVec::new(self.c1 + o.c1, self.c2 + o.c2, self.c3 + o.c3)
    }
}

impl AddAssign for MinkVec {
    fn add_assign(&mut self, o: MinkVec) {
        *self = *self + o;
    }
}

impl Sub for MinkVec {
    type Output = MinkVec;
    fn sub(self, o: MinkVec) -> MinkVec {
        MinkVec::new(self.c1 - o.c1, self.c2 - o.c2, self.c3 - o.c3)
    }
}

impl SubAssign for MinkVec {
    fn sub_assign(&mut self, o: MinkVec) {
        *self = *self - o;
    }
}

impl Neg for MinkVec {
    type Output = MinkVec;
    fn neg(self) -> MinkVec {
        MinkVec::new(-self.c1, -self.c2, -self.c3)
    }
}

impl Mul<MinkVec> for f64 {
    type Output = MinkVec;
    fn mul(self, v: MinkVec) -> MinkVec {
        v.scale(self)
    }
}

impl Mul<f64> for MinkVec {
    type Output = MinkVec;
    fn mul(self, s: f64) -> MinkVec {
        self.scale(s)
    }
}

/// Causal type of a vector, time-oriented by the sign of `c3`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CausalClass {
    Zero,
    Spacelike,
    NullFuture,
    NullPast,
    TimelikeFuture,
    TimelikePast,
}

impl CausalClass {
    pub fn is_null(self) -> bool {
        matches!(self, CausalClass::NullFuture | CausalClass::NullPast)
    }

    pub fn is_timelike(self) -> bool {
        matches!(self, CausalClass::TimelikeFuture | CausalClass::TimelikePast)
    }

    /// The class of `-v` given the class of `v`.
    pub fn reversed(self) -> CausalClass {
        match self {
            CausalClass::NullFuture => CausalClass::NullPast,
            CausalClass::NullPast => CausalClass::NullFuture,
            CausalClass::TimelikeFuture => CausalClass::TimelikePast,
            CausalClass::TimelikePast => CausalClass::TimelikeFuture,
            other => other,
        }
    }
}

/// `c1 c1' + c2 c2' - c3 c3'`.
pub fn minkowski_dot(v: MinkVec, w: MinkVec) -> f64 {
    v.c1 * w.c1 + v.c2 * w.c2 - v.c3 * w.c3
}

/// The sl(2,R) bracket `[v, w]` in coordinates.
///
/// Closed form of the matrix commutator; `[x1, x2] = 2 x3`,
/// `[x2, x3] = -2 x1`, `[x3, x1] = -2 x2`.
pub fn bracket_cross(v: MinkVec, w: MinkVec) -> MinkVec {
    MinkVec::new(
        -2.0 * (v.c2 * w.c3 - v.c3 * w.c2),
        -2.0 * (v.c3 * w.c1 - v.c1 * w.c3),
        2.0 * (v.c1 * w.c2 - v.c2 * w.c1),
    )
}

/// Classifies `v` with relative tolerance `tol` on `v . v`.
///
/// Null vectors whose time component is within `tol` of zero cannot be
/// time-oriented and are reported as degenerate.
pub fn causal_classify(v: MinkVec, tol: f64) -> Result<CausalClass> {
    if v.is_zero() {
        return Ok(CausalClass::Zero);
    }
    let n2 = v.euclid_dot(v);
    let q = v.norm_sq();
    if q > tol * n2 {
        return Ok(CausalClass::Spacelike);
    }
    if q < -tol * n2 {
        return Ok(if v.c3 > 0.0 {
            CausalClass::TimelikeFuture
        } else {
            CausalClass::TimelikePast
        });
    }
    if v.c3.abs() <= tol * n2.sqrt() {
        return Err(Error::Degenerate(format!(
            "null vector {v} has no time orientation"
        )));
    }
    Ok(if v.c3 > 0.0 {
        CausalClass::NullFuture
    } else {
        CausalClass::NullPast
    })
}

/// Upper half-plane point `x + iy` on the future unit hyperboloid.
pub fn uhp_embed(x: f64, y: f64) -> Result<MinkVec> {
    if !(y > 0.0) || !x.is_finite() || !y.is_finite() {
        return Err(Error::Domain(format!(
            "upper half-plane needs y > 0, got y = {y}"
        )));
    }
    let r2 = x * x + y * y;
    Ok(MinkVec::new((1.0 - r2) / (2.0 * y), x / y, (1.0 + r2) / (2.0 * y)))
}

fn det3(a: MinkVec, b: MinkVec, c: MinkVec) -> f64 {
    a.c1 * (b.c2 * c.c3 - b.c3 * c.c2) - a.c2 * (b.c1 * c.c3 - b.c3 * c.c1)
        + a.c3 * (b.c1 * c.c2 - b.c2 * c.c1)
}

/// Determinant of the coordinate matrix with rows `a`, `b`, `c`.
pub fn det(a: MinkVec, b: MinkVec, c: MinkVec) -> f64 {
    det3(a, b, c)
}

/// Sign of `det(a, b, c)`; zero when the determinant is negligible relative
/// to the product of the Euclidean norms.
pub fn orientation_sign(a: MinkVec, b: MinkVec, c: MinkVec) -> i8 {
    let d = det3(a, b, c);
    let scale = a.euclid_norm() * b.euclid_norm() * c.euclid_norm();
    if d.abs() <= 1e-12 * scale {
        0
    } else if d > 0.0 {
        1
    } else {
        -1
    }
}

/// Matrix of the infinitesimal isometry `x -> [v, x] / 2`.
pub fn killing_generator(v: MinkVec) -> Matrix3<f64> {
    // columns are [v, x_j] / 2
    let cols = [MinkVec::X1, MinkVec::X2, MinkVec::X3].map(|e| bracket_cross(v, e).scale(0.5));
    Matrix3::from_columns(&cols.map(|c| c.to_vector3()))
}

/// Recovers `v` from a matrix of the form [`killing_generator`]`(v)`.
pub fn killing_vector(k: &Matrix3<f64>) -> MinkVec {
    // killing_generator(v) = -J [v]_x, so [v]_x = -J k
    let s = -(lorentz_form() * k);
    MinkVec::new(
        0.5 * (s[(2, 1)] - s[(1, 2)]),
        0.5 * (s[(0, 2)] - s[(2, 0)]),
        0.5 * (s[(1, 0)] - s[(0, 1)]),
    )
}

/// `exp(t K)` where `K` is the Killing generator of `v`.
///
/// Uses `K^3 = (v.v) K`, so the exponential is quadratic in `K`.
pub fn killing_flow(v: MinkVec, t: f64) -> Matrix3<f64> {
    let k = killing_generator(v);
    let k2 = k * k;
    let q = v.norm_sq();
    let (f1, f2) = if q.abs() * t * t < 1e-10 {
        let x = q * t * t;
        (t * (1.0 + x / 6.0), t * t * (0.5 + x / 24.0))
    } else if q > 0.0 {
        let s = q.sqrt();
        ((t * s).sinh() / s, ((t * s).cosh() - 1.0) / q)
    } else {
        let s = (-q).sqrt();
        ((t * s).sin() / s, (1.0 - (t * s).cos()) / (-q))
    };
    Matrix3::identity() + k * f1 + k2 * f2
}

/// Future-pointing null eigenvectors `(n+, n-)` of the Killing generator of
/// a spacelike `v`: the flow of `v` expands `n+` and contracts `n-`.
pub fn null_eigenvectors(v: MinkVec) -> Result<(MinkVec, MinkVec)> {
    let q = v.norm_sq();
    if !(q > CAUSAL_TOL * v.euclid_dot(v)) {
        return Err(Error::Degenerate(format!(
            "null eigenvectors need a spacelike vector, got {v}"
        )));
    }
    let s = q.sqrt();
    let k = killing_generator(v) * (1.0 / s);
    let k2 = k * k;
    let plus = dominant_column(&((k2 + k) * 0.5));
    let minus = dominant_column(&((k2 - k) * 0.5));
    Ok((future_normalize(plus)?, future_normalize(minus)?))
}

/// Column of largest Euclidean norm.
pub(crate) fn dominant_column(m: &Matrix3<f64>) -> MinkVec {
    let mut best = MinkVec::ZERO;
    let mut best_norm = -1.0;
    for j in 0..3 {
        let c = MinkVec::from_vector3(&m.column(j).into_owned());
        let n = c.euclid_norm();
        if n > best_norm {
            best_norm = n;
            best = c;
        }
    }
    best
}

/// Rescales a null or timelike vector so its time component is `+1`.
pub fn future_normalize(v: MinkVec) -> Result<MinkVec> {
    if v.c3.abs() <= 1e-300 || !v.c3.is_finite() {
        return Err(Error::Degenerate(format!(
            "vector {v} has no time component to normalize"
        )));
    }
    Ok(v.scale(1.0 / v.c3))
}

/// Future unit timelike representative of a timelike vector.
pub fn hyperboloid_point(v: MinkVec) -> Result<MinkVec> {
    let q = v.norm_sq();
    if !(q < -CAUSAL_TOL * v.euclid_dot(v)) {
        return Err(Error::Degenerate(format!("{v} is not timelike")));
    }
    let u = v.scale(1.0 / (-q).sqrt());
    Ok(if u.c3 < 0.0 { -u } else { u })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn commutator_oracle(v: MinkVec, w: MinkVec) -> MinkVec {
        let (a, b) = (v.to_sl2(), w.to_sl2());
        MinkVec::from_sl2(&(a * b - b * a))
    }

    #[test]
    fn basis_inner_products() {
        assert_eq!(minkowski_dot(MinkVec::X1, MinkVec::X1), 1.0);
        assert_eq!(minkowski_dot(MinkVec::X2, MinkVec::X2), 1.0);
        assert_eq!(minkowski_dot(MinkVec::X3, MinkVec::X3), -1.0);
        assert_eq!(minkowski_dot(MinkVec::X1, MinkVec::X3), 0.0);
        let v = MinkVec::new(1.0, 2.0, 2.0);
        assert_eq!(minkowski_dot(v, v), 1.0);
    }

    #[test]
    fn dot_is_half_trace() {
        let v = MinkVec::new(0.3, -1.2, 0.7);
        let w = MinkVec::new(2.0, 0.5, -1.1);
        let tr = 0.5 * (v.to_sl2() * w.to_sl2()).trace();
        assert!((tr - v.dot(w)).abs() < 1e-14);
    }

    #[test]
    fn bracket_examples() {
        assert_eq!(bracket_cross(MinkVec::X1, MinkVec::X2), MinkVec::new(0.0, 0.0, 2.0));
        assert_eq!(bracket_cross(MinkVec::X2, MinkVec::X3), MinkVec::new(-2.0, 0.0, 0.0));
        let v = MinkVec::new(0.4, -0.3, 1.9);
        assert!(bracket_cross(v, v).is_zero());
        // matrix commutator oracle on the basis
        for a in [MinkVec::X1, MinkVec::X2, MinkVec::X3] {
            for b in [MinkVec::X1, MinkVec::X2, MinkVec::X3] {
                assert_eq!(bracket_cross(a, b), commutator_oracle(a, b));
            }
        }
    }

    #[test]
    fn classify_examples() {
        assert_eq!(causal_classify(MinkVec::X1, CAUSAL_TOL).unwrap(), CausalClass::Spacelike);
        assert_eq!(
            causal_classify(MinkVec::new(1.0, 0.0, 1.0), CAUSAL_TOL).unwrap(),
            CausalClass::NullFuture
        );
        assert_eq!(causal_classify(MinkVec::X3, CAUSAL_TOL).unwrap(), CausalClass::TimelikeFuture);
        assert_eq!(causal_classify(MinkVec::ZERO, CAUSAL_TOL).unwrap(), CausalClass::Zero);
        assert_eq!(
            causal_classify(MinkVec::new(0.0, 1.0, -1.0), CAUSAL_TOL).unwrap(),
            CausalClass::NullPast
        );
    }

    #[test]
    fn near_null_is_reported_null() {
        let v = MinkVec::new(1.0, 0.0, 1.0 + 1e-13);
        assert_eq!(causal_classify(v, CAUSAL_TOL).unwrap(), CausalClass::NullFuture);
    }

    #[test]
    fn uhp_examples() {
        assert_eq!(uhp_embed(0.0, 1.0).unwrap(), MinkVec::new(0.0, 0.0, 1.0));
        assert_eq!(uhp_embed(1.0, 1.0).unwrap(), MinkVec::new(-0.5, 1.0, 1.5));
        assert_eq!(uhp_embed(0.0, 2.0).unwrap(), MinkVec::new(-0.75, 0.0, 1.25));
        assert!(matches!(uhp_embed(0.0, 0.0), Err(Error::Domain(_))));
        assert!(matches!(uhp_embed(1.0, -1.0), Err(Error::Domain(_))));
    }

    #[test]
    fn uhp_matches_matrix_form() {
        let (x, y) = (0.7, 1.9);
        let m = Matrix2::new(x, -(x * x + y * y), 1.0, -x) * (1.0 / y);
        let v = MinkVec::from_sl2(&m);
        assert!(v.max_abs_diff(uhp_embed(x, y).unwrap()) < 1e-15);
    }

    #[test]
    fn orientation_examples() {
        assert_eq!(orientation_sign(MinkVec::X1, MinkVec::X2, MinkVec::X3), 1);
        assert_eq!(orientation_sign(MinkVec::X2, MinkVec::X1, MinkVec::X3), -1);
        assert_eq!(orientation_sign(MinkVec::X1, MinkVec::X1, MinkVec::X3), 0);
    }

    #[test]
    fn killing_generator_roundtrip() {
        let v = MinkVec::new(0.3, -2.0, 0.5);
        let k = killing_generator(v);
        assert!(killing_vector(&k).max_abs_diff(v) < 1e-15);
        // K is skew with respect to the Lorentz form
        let j = lorentz_form();
        assert!((k.transpose() * j + j * k).abs().max() < 1e-15);
    }

    #[test]
    fn flow_of_x2_is_diagonal_adjoint() {
        // Ad(diag(e^{l/2}, e^{-l/2})) has eigenvalues e^{+-l} on x1 -+ x3
        let l = 1.3;
        let a = killing_flow(MinkVec::X2, l);
        let up = MinkVec::from_vector3(&(a * MinkVec::new(-1.0, 0.0, 1.0).to_vector3()));
        assert!(up.max_abs_diff(MinkVec::new(-1.0, 0.0, 1.0).scale(l.exp())) < 1e-12);
        assert!((a.determinant() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn null_eigenvectors_of_x1() {
        let (p, m) = null_eigenvectors(MinkVec::X1).unwrap();
        assert!(p.max_abs_diff(MinkVec::new(0.0, 1.0, 1.0)) < 1e-15);
        assert!(m.max_abs_diff(MinkVec::new(0.0, -1.0, 1.0)) < 1e-15);
    }
}
