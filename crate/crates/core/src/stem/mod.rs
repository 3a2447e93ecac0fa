//! Stem functions `F = F₁ + ιF₂ : D → H⊗C` and their algebra.

pub mod maps;
pub mod poly;

use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::quaternion::{ImaginaryUnit, Quaternion};

pub use maps::{ComplexMap, Extension, SliceMap};

/// Below this `|N|` the reciprocal stem is undefined.
pub const RECIPROCAL_EPS: f64 = 1e-12;

/// An element `F₁ + ιF₂` of `H⊗C`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct StemValue {
    pub f1: Quaternion,
    pub f2: Quaternion,
}

impl StemValue {
    pub const ONE: StemValue = StemValue {
        f1: Quaternion::ONE,
        f2: Quaternion::ZERO,
    };

    pub fn new(f1: Quaternion, f2: Quaternion) -> Self {
        Self { f1, f2 }
    }

    pub fn conj(self) -> Self {
        Self::new(self.f1.conj(), self.f2.conj())
    }

    pub fn right_mul(self, a: Quaternion) -> Self {
        Self::new(self.f1 * a, self.f2 * a)
    }

    pub fn scale(self, s: f64) -> Self {
        Self::new(self.f1 * s, self.f2 * s)
    }

    pub fn norm(self) -> f64 {
        (self.f1.norm_sqr() + self.f2.norm_sqr()).sqrt()
    }

    /// The complex number `n₁ + i n₂` of the normal stem `F·F^c`, whose
    /// components are real: `n₁ = |F₁|² − |F₂|²`, `n₂ = 2⟨F₁, F₂⟩`.
    pub fn normal(self) -> Complex64 {
        Complex64::new(self.f1.norm_sqr() - self.f2.norm_sqr(), 2.0 * self.f1.dot(self.f2))
    }
}

impl Add for StemValue {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.f1 + o.f1, self.f2 + o.f2)
    }
}

impl Sub for StemValue {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.f1 - o.f1, self.f2 - o.f2)
    }
}

impl Neg for StemValue {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.f1, -self.f2)
    }
}

/// `(F₁, F₂)(G₁, G₂) = (F₁G₁ − F₂G₂, F₁G₂ + F₂G₁)`.
impl Mul for StemValue {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Self::new(self.f1 * o.f1 - self.f2 * o.f2, self.f1 * o.f2 + self.f2 * o.f1)
    }
}

/// `F₁`, `F₂` and `F̂₂ = F₂/β` at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StemPoint {
    pub f1: Quaternion,
    pub f2: Quaternion,
    pub f2_hat: Quaternion,
}

impl StemPoint {
    pub fn value(&self) -> StemValue {
        StemValue::new(self.f1, self.f2)
    }
}

/// A holomorphic stem function, as an expression tree.
#[derive(Debug, Clone)]
pub enum StemFunction {
    /// `Σ (α + ιβ)ⁿ aₙ`.
    Poly(Vec<Quaternion>),
    /// `(c₁, c₂)` on `D⁺`, `(c₁, −c₂)` on `D⁻`.
    SliceConstant(Quaternion, Quaternion),
    /// The stem of the slice function whose restriction to `C_J` is `map`.
    FromSlice {
        unit: ImaginaryUnit,
        map: SliceMap,
    },
    Sum(Arc<StemFunction>, Arc<StemFunction>),
    Product(Arc<StemFunction>, Arc<StemFunction>),
    RightScale(Arc<StemFunction>, Quaternion),
    Conj(Arc<StemFunction>),
    /// The stem of `f^{−•}`.
    Reciprocal(Arc<StemFunction>),
}

impl StemFunction {
    pub fn poly(coeffs: Vec<Quaternion>) -> Self {
        StemFunction::Poly(poly::trim(coeffs))
    }

    pub fn constant(c: Quaternion) -> Self {
        Self::poly(vec![c])
    }

    /// `f(x) = x`.
    pub fn identity() -> Self {
        Self::poly(vec![Quaternion::ZERO, Quaternion::ONE])
    }

    pub fn slice_constant(c1: Quaternion, c2: Quaternion) -> Self {
        StemFunction::SliceConstant(c1, c2)
    }

    /// `η(x) = ½(1 − I_x i)`, with stem `(½, −i/2)`.
    pub fn eta() -> Self {
        Self::slice_constant(Quaternion::real(0.5), Quaternion::I * -0.5)
    }

    pub fn from_slice(unit: ImaginaryUnit, map: SliceMap) -> Self {
        StemFunction::FromSlice { unit, map }
    }

    pub fn as_poly(&self) -> Option<&[Quaternion]> {
        match self {
            StemFunction::Poly(c) => Some(c),
            _ => None,
        }
    }

    pub fn is_poly(&self) -> bool {
        self.as_poly().is_some()
    }

    /// True when the tree is syntactically the zero function.
    pub fn is_structurally_zero(&self) -> bool {
        match self {
            StemFunction::Poly(c) => c.is_empty(),
            StemFunction::SliceConstant(a, b) => *a == Quaternion::ZERO && *b == Quaternion::ZERO,
            StemFunction::Sum(a, b) => a.is_structurally_zero() && b.is_structurally_zero(),
            StemFunction::Product(a, b) => a.is_structurally_zero() || b.is_structurally_zero(),
            StemFunction::RightScale(a, q) => *q == Quaternion::ZERO || a.is_structurally_zero(),
            StemFunction::Conj(a) => a.is_structurally_zero(),
            StemFunction::FromSlice { .. } | StemFunction::Reciprocal(_) => false,
        }
    }

    /// True when the tree only contains polynomials and slice constants.
    pub fn is_algebraic(&self) -> bool {
        match self {
            StemFunction::Poly(_) | StemFunction::SliceConstant(..) => true,
            StemFunction::Sum(a, b) | StemFunction::Product(a, b) => a.is_algebraic() && b.is_algebraic(),
            StemFunction::RightScale(a, _) | StemFunction::Conj(a) => a.is_algebraic(),
            StemFunction::FromSlice { .. } | StemFunction::Reciprocal(_) => false,
        }
    }

    pub fn add(&self, other: &StemFunction) -> StemFunction {
        match (self, other) {
            (StemFunction::Poly(a), StemFunction::Poly(b)) => StemFunction::Poly(poly::add(a, b)),
            (StemFunction::SliceConstant(a1, a2), StemFunction::SliceConstant(b1, b2)) => {
                StemFunction::SliceConstant(*a1 + *b1, *a2 + *b2)
            }
            _ if self.is_structurally_zero() => other.clone(),
            _ if other.is_structurally_zero() => self.clone(),
            _ => StemFunction::Sum(Arc::new(self.clone()), Arc::new(other.clone())),
        }
    }

    pub fn sub(&self, other: &StemFunction) -> StemFunction {
        self.add(&other.right_scale(Quaternion::real(-1.0)))
    }

    /// `F − c` for a constant `c`.
    pub fn sub_constant(&self, c: Quaternion) -> StemFunction {
        self.add(&StemFunction::constant(-c))
    }

    /// The complexified product `FG`.
    pub fn mul(&self, other: &StemFunction) -> StemFunction {
        match (self, other) {
            (StemFunction::Poly(a), StemFunction::Poly(b)) => StemFunction::Poly(poly::mul(a, b)),
            (StemFunction::SliceConstant(a1, a2), StemFunction::SliceConstant(b1, b2)) => {
                StemFunction::SliceConstant(*a1 * *b1 - *a2 * *b2, *a1 * *b2 + *a2 * *b1)
            }
            (StemFunction::Poly(a), _) if a.len() == 1 && a[0].is_real() => other.right_scale(a[0]),
            (_, StemFunction::Poly(b)) if b.len() == 1 => self.right_scale(b[0]),
            _ => StemFunction::Product(Arc::new(self.clone()), Arc::new(other.clone())),
        }
    }

    /// `F·a` for a quaternion constant `a`.
    pub fn right_scale(&self, a: Quaternion) -> StemFunction {
        match self {
            StemFunction::Poly(c) => StemFunction::poly(c.iter().map(|q| *q * a).collect()),
            StemFunction::SliceConstant(c1, c2) => StemFunction::SliceConstant(*c1 * a, *c2 * a),
            StemFunction::RightScale(inner, b) => StemFunction::RightScale(inner.clone(), *b * a),
            _ => StemFunction::RightScale(Arc::new(self.clone()), a),
        }
    }

    /// `F^c = conj(F₁) + ι conj(F₂)`.
    pub fn conj(&self) -> StemFunction {
        match self {
            StemFunction::Poly(c) => StemFunction::Poly(c.iter().map(|q| q.conj()).collect()),
            StemFunction::SliceConstant(c1, c2) => StemFunction::SliceConstant(c1.conj(), c2.conj()),
            StemFunction::Conj(inner) => (**inner).clone(),
            _ => StemFunction::Conj(Arc::new(self.clone())),
        }
    }

    /// `N(F) = F·F^c`.
    pub fn normal(&self) -> StemFunction {
        self.mul(&self.conj())
    }

    pub fn reciprocal(&self) -> StemFunction {
        StemFunction::Reciprocal(Arc::new(self.clone()))
    }

    /// The complex derivative `∂F/∂z = ∂F/∂α`.
    pub fn derivative(&self) -> StemFunction {
        match self {
            StemFunction::Poly(c) => StemFunction::Poly(poly::derivative(c)),
            StemFunction::SliceConstant(..) => StemFunction::Poly(Vec::new()),
            StemFunction::FromSlice { unit, map } => StemFunction::FromSlice {
                unit: *unit,
                map: map.derivative(),
            },
            StemFunction::Sum(a, b) => a.derivative().add(&b.derivative()),
            StemFunction::Product(a, b) => {
                let left = a.derivative().mul(b);
                let right = a.mul(&b.derivative());
                left.add(&right)
            }
            StemFunction::RightScale(a, q) => a.derivative().right_scale(*q),
            StemFunction::Conj(a) => a.derivative().conj(),
            StemFunction::Reciprocal(a) => {
                // (F⁻¹)' = −F⁻¹ F' F⁻¹
                let r = self.clone();
                let da = a.derivative();
                if da.is_structurally_zero() {
                    return StemFunction::Poly(Vec::new());
                }
                r.right_scale(Quaternion::real(-1.0)).mul(&da).mul(&r)
            }
        }
    }

    /// `F(z)` together with `F̂₂(z)`.
    pub fn eval_point(&self, z: Complex64) -> Result<StemPoint> {
        let beta = z.im;
        Ok(match self {
            StemFunction::Poly(c) => {
                let (f1, hat) = poly::eval_hat(c, z);
                StemPoint {
                    f1,
                    f2: hat * beta,
                    f2_hat: hat,
                }
            }
            StemFunction::SliceConstant(c1, c2) => {
                let f2 = if beta > 0.0 {
                    *c2
                } else if beta < 0.0 {
                    -*c2
                } else {
                    Quaternion::ZERO
                };
                StemPoint {
                    f1: *c1,
                    f2,
                    f2_hat: *c2 * (1.0 / beta.abs()),
                }
            }
            StemFunction::FromSlice { unit, map } => {
                let (gz, gzb) = (map.eval(z), map.eval(z.conj()));
                let j = unit.get();
                let f1 = (gz + gzb) * 0.5;
                let f2 = j * (gz - gzb) * -0.5;
                // F̂₂ is even in β; below the cutoff take the quotient at the cutoff.
                let cutoff = 1e-5 * z.re.abs().max(1.0);
                let f2_hat = if beta.abs() >= cutoff {
                    f2 * (1.0 / beta)
                } else {
                    let w = Complex64::new(z.re, cutoff);
                    j * (map.eval(w) - map.eval(w.conj())) * (-0.5 / cutoff)
                };
                StemPoint { f1, f2, f2_hat }
            }
            StemFunction::Sum(a, b) => {
                let (p, q) = (a.eval_point(z)?, b.eval_point(z)?);
                StemPoint {
                    f1: p.f1 + q.f1,
                    f2: p.f2 + q.f2,
                    f2_hat: p.f2_hat + q.f2_hat,
                }
            }
            StemFunction::Product(a, b) => {
                let (p, q) = (a.eval_point(z)?, b.eval_point(z)?);
                let v = p.value() * q.value();
                StemPoint {
                    f1: v.f1,
                    f2: v.f2,
                    f2_hat: p.f1 * q.f2_hat + p.f2_hat * q.f1,
                }
            }
            StemFunction::RightScale(a, s) => {
                let p = a.eval_point(z)?;
                StemPoint {
                    f1: p.f1 * *s,
                    f2: p.f2 * *s,
                    f2_hat: p.f2_hat * *s,
                }
            }
            StemFunction::Conj(a) => {
                let p = a.eval_point(z)?;
                StemPoint {
                    f1: p.f1.conj(),
                    f2: p.f2.conj(),
                    f2_hat: p.f2_hat.conj(),
                }
            }
            StemFunction::Reciprocal(a) => {
                let p = a.eval_point(z)?;
                let n = p.value().normal();
                let n2 = n.norm_sqr();
                if n.norm() < RECIPROCAL_EPS {
                    return Err(Error::DivisionByZero {
                        alpha: z.re,
                        beta: z.im,
                    });
                }
                let (c1, c2, ch) = (p.f1.conj(), p.f2.conj(), p.f2_hat.conj());
                let n2_hat = 2.0 * p.f1.dot(p.f2_hat);
                StemPoint {
                    f1: (c1 * n.re + c2 * n.im) * (1.0 / n2),
                    f2: (c2 * n.re - c1 * n.im) * (1.0 / n2),
                    f2_hat: (ch * n.re - c1 * n2_hat) * (1.0 / n2),
                }
            }
        })
    }

    pub fn eval(&self, z: Complex64) -> Result<StemValue> {
        self.eval_point(z).map(|p| p.value())
    }

    /// The extended `F̂₂ = F₂/β`, continued to `β = 0`.
    pub fn f2_hat(&self, z: Complex64) -> Result<Quaternion> {
        self.eval_point(z).map(|p| p.f2_hat)
    }
}

/// Helper for building stems from an imaginary unit and a complex map.
pub fn from_complex_map(unit: ImaginaryUnit, map: ComplexMap, ext: Extension) -> StemFunction {
    StemFunction::from_slice(unit, SliceMap::from_complex(unit, map, ext))
}
