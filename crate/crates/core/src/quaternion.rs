//! Quaternion arithmetic and the slice decomposition `q = α + Jβ`.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance on `|J|² - 1` accepted when building an [`ImaginaryUnit`].
pub const UNIT_TOLERANCE: f64 = 1e-12;

/// A quaternion `w + x i + y j + z k`.
///
/// Serializes as the 4-element array `[w, x, y, z]`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(from = "[f64; 4]", into = "[f64; 4]")]
pub struct Quaternion {
    pub w: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl From<[f64; 4]> for Quaternion {
    fn from(a: [f64; 4]) -> Self {
        Self::new(a[0], a[1], a[2], a[3])
    }
}

impl From<Quaternion> for [f64; 4] {
    fn from(q: Quaternion) -> Self {
        q.to_array()
    }
}

impl From<f64> for Quaternion {
    fn from(r: f64) -> Self {
        Self::real(r)
    }
}

impl Quaternion {
    pub const ZERO: Quaternion = Quaternion::new(0.0, 0.0, 0.0, 0.0);
    pub const ONE: Quaternion = Quaternion::new(1.0, 0.0, 0.0, 0.0);
    pub const I: Quaternion = Quaternion::new(0.0, 1.0, 0.0, 0.0);
    pub const J: Quaternion = Quaternion::new(0.0, 0.0, 1.0, 0.0);
    pub const K: Quaternion = Quaternion::new(0.0, 0.0, 0.0, 1.0);

    #[inline]
    pub const fn new(w: f64, x: f64, y: f64, z: f64) -> Self {
        Self { w, x, y, z }
    }

    #[inline]
    pub const fn real(r: f64) -> Self {
        Self::new(r, 0.0, 0.0, 0.0)
    }

    #[inline]
    pub fn to_array(self) -> [f64; 4] {
        [self.w, self.x, self.y, self.z]
    }

    /// Embeds the complex number `a + ib` as `a + bJ`.
    #[inline]
    pub fn from_complex(c: Complex64, unit: ImaginaryUnit) -> Self {
        Self::real(c.re) + unit.get() * c.im
    }

    #[inline]
    pub fn re(self) -> f64 {
        self.w
    }

    #[inline]
    pub fn im(self) -> Self {
        Self::new(0.0, self.x, self.y, self.z)
    }

    #[inline]
    pub fn conj(self) -> Self {
        Self::new(self.w, -self.x, -self.y, -self.z)
    }

    #[inline]
    pub fn norm_sqr(self) -> f64 {
        self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z
    }

    #[inline]
    pub fn norm(self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// Euclidean scalar product in `R^4`.
    #[inline]
    pub fn dot(self, other: Self) -> f64 {
        self.w * other.w + self.x * other.x + self.y * other.y + self.z * other.z
    }

    /// Multiplicative inverse; `None` for the zero quaternion.
    #[inline]
    pub fn inv(self) -> Option<Self> {
        let n = self.norm_sqr();
        if n == 0.0 {
            None
        } else {
            Some(self.conj() * (1.0 / n))
        }
    }

    pub fn is_finite(self) -> bool {
        self.w.is_finite() && self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    /// True when `|Im q| <= 1e-12 (1 + |q|)`.
    #[inline]
    pub fn is_real(self) -> bool {
        self.im().norm() <= real_threshold(self)
    }

    /// Slice coordinates `(α, β, J)` with `β >= 0`.
    pub fn decompose(self) -> SliceCoordinates {
        let beta = self.im().norm();
        if beta <= real_threshold(self) {
            SliceCoordinates {
                alpha: self.w,
                beta: 0.0,
                unit: ImaginaryUnit::i(),
                is_real: true,
            }
        } else {
            let u = self.im() * (1.0 / beta);
            SliceCoordinates {
                alpha: self.w,
                beta,
                unit: ImaginaryUnit(u),
                is_real: false,
            }
        }
    }

    /// `Δ_y(x) = x² − 2Re(y)x + |y|²`, which vanishes exactly on the sphere `S_y`.
    pub fn characteristic_poly_eval(y: Quaternion, x: Quaternion) -> Quaternion {
        x * x - x * (2.0 * y.re()) + Quaternion::real(y.norm_sqr())
    }

    /// Orthogonal projection onto `C_I = Span(1, I)`.
    #[inline]
    pub fn project(self, unit: ImaginaryUnit) -> Self {
        let i = unit.get();
        Self::real(self.w) + i * self.dot(i)
    }

    /// Complement `q − π_I(q)`, the projection onto `C_I^⊥`.
    #[inline]
    pub fn project_perp(self, unit: ImaginaryUnit) -> Self {
        self - self.project(unit)
    }

    pub fn max_abs_component(self) -> f64 {
        self.w.abs().max(self.x.abs()).max(self.y.abs()).max(self.z.abs())
    }
}

#[inline]
fn real_threshold(q: Quaternion) -> f64 {
    1e-12 * (1.0 + q.norm())
}

/// Hermitian product data `(⟨u,v⟩, ⟨Iu,v⟩)`.
///
/// The `C_I`-valued product `π_I(u v̄)` equals `re − I·im`.
pub fn hermitian_product(u: Quaternion, v: Quaternion, unit: ImaginaryUnit) -> (f64, f64) {
    (u.dot(v), (unit.get() * u).dot(v))
}

impl fmt::Display for Quaternion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}, {}, {}]", self.w, self.x, self.y, self.z)
    }
}

impl Add for Quaternion {
    type Output = Self;
    #[inline]
    fn add(self, o: Self) -> Self {
        Self::new(self.w + o.w, self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl AddAssign for Quaternion {
    #[inline]
    fn add_assign(&mut self, o: Self) {
        *self = *self + o;
    }
}

impl Sub for Quaternion {
    type Output = Self;
    #[inline]
    fn sub(self, o: Self) -> Self {
        Self::new(self.w - o.w, self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl SubAssign for Quaternion {
    #[inline]
    fn sub_assign(&mut self, o: Self) {
        *self = *self - o;
    }
}

impl Neg for Quaternion {
    type Output = Self;
    #[inline]
    fn neg(self) -> Self {
        Self::new(-self.w, -self.x, -self.y, -self.z)
    }
}

impl Mul for Quaternion {
    type Output = Self;
    #[inline]
    fn mul(self, o: Self) -> Self {
        Self::new(
            self.w * o.w - self.x * o.x - self.y * o.y - self.z * o.z,
            self.w * o.x + self.x * o.w + self.y * o.z - self.z * o.y,
            self.w * o.y - self.x * o.z + self.y * o.w + self.z * o.x,
            self.w * o.z + self.x * o.y - self.y * o.x + self.z * o.w,
        )
    }
}

impl Mul<f64> for Quaternion {
    type Output = Self;
    #[inline]
    fn mul(self, s: f64) -> Self {
        Self::new(self.w * s, self.x * s, self.y * s, self.z * s)
    }
}

impl Mul<Quaternion> for f64 {
    type Output = Quaternion;
    #[inline]
    fn mul(self, q: Quaternion) -> Quaternion {
        q * self
    }
}

impl Div<f64> for Quaternion {
    type Output = Self;
    #[inline]
    fn div(self, s: f64) -> Self {
        self * (1.0 / s)
    }
}

impl std::iter::Sum for Quaternion {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::ZERO, |a, b| a + b)
    }
}

/// A unit imaginary quaternion, i.e. an element of the sphere `S_H = {J : J² = −1}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(into = "[f64; 4]")]
pub struct ImaginaryUnit(Quaternion);

impl From<ImaginaryUnit> for [f64; 4] {
    fn from(u: ImaginaryUnit) -> Self {
        u.0.to_array()
    }
}

impl ImaginaryUnit {
    /// Normalizes the imaginary part of `q`.
    ///
    /// Rejects inputs whose imaginary part is (numerically) zero, and inputs with a
    /// real part that is not negligible next to the imaginary part.
    pub fn new(q: Quaternion) -> Result<Self> {
        let im = q.im();
        let n = im.norm();
        if !(n.is_finite()) || n <= 1e-9 {
            return Err(Error::InvalidUnit(q));
        }
        if q.w.abs() > 1e-9 * n.max(1.0) {
            return Err(Error::InvalidUnit(q));
        }
        Ok(Self(im * (1.0 / n)))
    }

    /// Builds a unit from an imaginary vector without normalizing, checking `J² = −1`.
    pub fn exact(q: Quaternion) -> Result<Self> {
        let sq = q * q;
        if (sq + Quaternion::ONE).norm() <= UNIT_TOLERANCE && q.w.abs() <= UNIT_TOLERANCE {
            Ok(Self(q))
        } else {
            Err(Error::InvalidUnit(q))
        }
    }

    pub fn from_vector(x: f64, y: f64, z: f64) -> Result<Self> {
        Self::new(Quaternion::new(0.0, x, y, z))
    }

    pub const fn i() -> Self {
        Self(Quaternion::I)
    }

    pub const fn j() -> Self {
        Self(Quaternion::J)
    }

    pub const fn k() -> Self {
        Self(Quaternion::K)
    }

    #[inline]
    pub fn get(self) -> Quaternion {
        self.0
    }

    /// A unit orthogonal to `self`: the member of `{i, j, k}` least aligned with
    /// `self`, Gram–Schmidt orthonormalized against it.
    pub fn orthogonal(self) -> Self {
        let u = self.0;
        let candidates = [Quaternion::I, Quaternion::J, Quaternion::K];
        let mut best = candidates[0];
        let mut best_dot = f64::INFINITY;
        for c in candidates {
            let d = c.dot(u).abs();
            if d < best_dot {
                best_dot = d;
                best = c;
            }
        }
        let v = best - u * best.dot(u);
        Self(v * (1.0 / v.norm()))
    }
}

impl Neg for ImaginaryUnit {
    type Output = ImaginaryUnit;

    fn neg(self) -> ImaginaryUnit {
        ImaginaryUnit(-self.0)
    }
}

impl fmt::Display for ImaginaryUnit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// `q = α + Jβ` with `β >= 0`; for real `q` the unit is the placeholder `i`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SliceCoordinates {
    pub alpha: f64,
    pub beta: f64,
    pub unit: ImaginaryUnit,
    pub is_real: bool,
}

impl SliceCoordinates {
    pub fn recompose(&self) -> Quaternion {
        Quaternion::real(self.alpha) + self.unit.get() * self.beta
    }

    /// The point `α + iβ` of the complex plane.
    pub fn complex(&self) -> Complex64 {
        Complex64::new(self.alpha, self.beta)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const Q: fn(f64, f64, f64, f64) -> Quaternion = Quaternion::new;

    // Independent multiplication-table oracle: basis products e_a e_b = sign * e_c.
    fn table_mul(a: Quaternion, b: Quaternion) -> Quaternion {
        const TABLE: [[(f64, usize); 4]; 4] = [
            [(1.0, 0), (1.0, 1), (1.0, 2), (1.0, 3)],
            [(1.0, 1), (-1.0, 0), (1.0, 3), (-1.0, 2)],
            [(1.0, 2), (-1.0, 3), (-1.0, 0), (1.0, 1)],
            [(1.0, 3), (1.0, 2), (-1.0, 1), (-1.0, 0)],
        ];
        let (av, bv) = (a.to_array(), b.to_array());
        let mut out = [0.0; 4];
        for (p, row) in TABLE.iter().enumerate() {
            for (q, &(s, c)) in row.iter().enumerate() {
                out[c] += s * av[p] * bv[q];
            }
        }
        out.into()
    }

    #[test]
    fn defining_relations() {
        assert_eq!(Quaternion::I * Quaternion::J, Quaternion::K);
        assert_eq!(Q(1.0, 1.0, 0.0, 0.0) * Q(1.0, -1.0, 0.0, 0.0), Quaternion::real(2.0));
        let p = Q(2.0, 0.0, 1.0, 0.0) * Quaternion::I;
        assert_eq!(p, table_mul(Q(2.0, 0.0, 1.0, 0.0), Quaternion::I));
        assert_eq!(p, Q(0.0, 2.0, 0.0, -1.0));
    }

    #[test]
    fn mul_matches_table_oracle() {
        let a = Q(0.3, -1.2, 2.5, 0.7);
        let b = Q(-1.1, 0.4, 0.9, -2.0);
        let d = a * b - table_mul(a, b);
        assert!(d.norm() < 1e-15);
    }

    #[test]
    fn decompose_examples() {
        let s = Quaternion::real(3.0).decompose();
        assert!(s.is_real);
        assert_eq!((s.alpha, s.beta), (3.0, 0.0));

        let s = Q(1.0, 0.0, 2.0, 0.0).decompose();
        assert!(!s.is_real);
        assert_eq!((s.alpha, s.beta), (1.0, 2.0));
        assert_eq!(s.unit.get(), Quaternion::J);

        let q = Q(1.0, 1.0, 1.0, 0.0);
        let s = q.decompose();
        assert!((s.beta - 2f64.sqrt()).abs() < 1e-15);
        let r = 1.0 / 2f64.sqrt();
        assert!((s.unit.get() - Q(0.0, r, r, 0.0)).norm() < 1e-15);
        assert!((s.recompose() - q).norm() < 1e-14 * (1.0 + q.norm()));
    }

    #[test]
    fn hermitian_examples() {
        assert_eq!(
            hermitian_product(Quaternion::ONE, Quaternion::ONE, ImaginaryUnit::i()),
            (1.0, 0.0)
        );
        let (re, im) = hermitian_product(Quaternion::J, Quaternion::K, ImaginaryUnit::i());
        assert_eq!((re, im), (0.0, 1.0));
    }

    #[test]
    fn hermitian_matches_projection() {
        let u = Q(0.2, -0.7, 1.3, 0.5);
        let v = Q(-1.0, 0.25, 0.5, 2.0);
        let unit = ImaginaryUnit::from_vector(0.3, -0.4, 1.2).unwrap();
        let (re, im) = hermitian_product(u, v, unit);
        let direct = (u * v.conj()).project(unit);
        let assembled = Quaternion::real(re) - unit.get() * im;
        assert!((direct - assembled).norm() < 1e-14);
    }

    #[test]
    fn projections() {
        let q = Q(1.0, 2.0, 3.0, 0.0);
        assert_eq!(q.project(ImaginaryUnit::i()), Q(1.0, 2.0, 0.0, 0.0));
        assert_eq!(q.project_perp(ImaginaryUnit::i()), Q(0.0, 0.0, 3.0, 0.0));
    }

    #[test]
    fn characteristic_poly_examples() {
        let cp = Quaternion::characteristic_poly_eval;
        assert!(cp(Quaternion::I, Quaternion::J).norm() < 1e-15);
        assert!(cp(Q(1.0, 1.0, 0.0, 0.0), Q(1.0, -1.0, 0.0, 0.0)).norm() < 1e-15);
        assert_eq!(cp(Quaternion::real(2.0), Quaternion::real(3.0)), Quaternion::ONE);
    }

    #[test]
    fn unit_construction() {
        assert!(ImaginaryUnit::new(Quaternion::real(1.0)).is_err());
        assert!(ImaginaryUnit::new(Quaternion::ZERO).is_err());
        let u = ImaginaryUnit::new(Q(0.0, 0.0, 3.0, 4.0)).unwrap();
        assert!(((u.get() * u.get()) + Quaternion::ONE).norm() < 1e-15);
        assert!(ImaginaryUnit::exact(Q(0.0, 0.0, 3.0, 4.0)).is_err());
        let o = u.orthogonal();
        assert!(o.get().dot(u.get()).abs() < 1e-15);
        assert!((o.get().norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn serde_array_form() {
        let q = Q(1.0, -2.0, 0.5, 3.0);
        let s = serde_json::to_string(&q).unwrap();
        assert_eq!(s, "[1.0,-2.0,0.5,3.0]");
        let back: Quaternion = serde_json::from_str(&s).unwrap();
        assert_eq!(back, q);
    }
}
