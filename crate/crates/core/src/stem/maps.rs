//! Holomorphic maps on one slice, used to build stems from slice values.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::quaternion::{ImaginaryUnit, Quaternion};

type QFn = Arc<dyn Fn(Complex64) -> Quaternion + Send + Sync>;

/// A holomorphic complex function with a closed-form derivative.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ComplexMap {
    /// `Σ cₙ wⁿ`, coefficients as `[re, im]`.
    Poly { coeffs: Vec<[f64; 2]> },
    /// `exp(Σ cₙ wⁿ)`.
    ExpPoly { coeffs: Vec<[f64; 2]> },
}

impl ComplexMap {
    pub fn poly(c: &[Complex64]) -> Self {
        ComplexMap::Poly {
            coeffs: c.iter().map(|z| [z.re, z.im]).collect(),
        }
    }

    pub fn exp_poly(c: &[Complex64]) -> Self {
        ComplexMap::ExpPoly {
            coeffs: c.iter().map(|z| [z.re, z.im]).collect(),
        }
    }

    fn coeffs(&self) -> Vec<Complex64> {
        let c = match self {
            ComplexMap::Poly { coeffs } | ComplexMap::ExpPoly { coeffs } => coeffs,
        };
        c.iter().map(|a| Complex64::new(a[0], a[1])).collect()
    }

    fn horner(c: &[Complex64], w: Complex64) -> Complex64 {
        c.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, a| acc * w + a)
    }

    fn dhorner(c: &[Complex64], w: Complex64) -> Complex64 {
        c.iter()
            .enumerate()
            .skip(1)
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, (n, a)| acc * w + a * n as f64)
    }

    pub fn eval(&self, w: Complex64) -> Complex64 {
        let c = self.coeffs();
        match self {
            ComplexMap::Poly { .. } => Self::horner(&c, w),
            ComplexMap::ExpPoly { .. } => Self::horner(&c, w).exp(),
        }
    }

    pub fn derivative(&self, w: Complex64) -> Complex64 {
        let c = self.coeffs();
        match self {
            ComplexMap::Poly { .. } => Self::dhorner(&c, w),
            ComplexMap::ExpPoly { .. } => Self::dhorner(&c, w) * Self::horner(&c, w).exp(),
        }
    }
}

/// How a one-slice map is continued to the lower half plane.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Extension {
    /// `g` on the whole slice.
    Full,
    /// `g` above the real axis, `0` below: the slice function `η·g`.
    Eta,
    /// `g` above, `−1/conj(g(w̄))` below.
    Schwarz,
}

/// An `H`-valued map `w ↦ f(Re w + J Im w)` on one slice `C_J`, with an optional
/// analytic derivative. Without one, derivatives use Richardson-extrapolated
/// central differences.
#[derive(Clone)]
pub struct SliceMap {
    value: QFn,
    derivative: Option<QFn>,
    label: String,
}

impl fmt::Debug for SliceMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SliceMap").field("label", &self.label).finish()
    }
}

impl SliceMap {
    pub fn new<F>(label: impl Into<String>, value: F) -> Self
    where
        F: Fn(Complex64) -> Quaternion + Send + Sync + 'static,
    {
        Self {
            value: Arc::new(value),
            derivative: None,
            label: label.into(),
        }
    }

    pub fn with_derivative<F>(mut self, d: F) -> Self
    where
        F: Fn(Complex64) -> Quaternion + Send + Sync + 'static,
    {
        self.derivative = Some(Arc::new(d));
        self
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn has_analytic_derivative(&self) -> bool {
        self.derivative.is_some()
    }

    #[inline]
    pub fn eval(&self, w: Complex64) -> Quaternion {
        (self.value)(w)
    }

    /// `d/dw` of the map at `w`.
    pub fn eval_derivative(&self, w: Complex64) -> Quaternion {
        match &self.derivative {
            Some(d) => d(w),
            None => central_difference(&*self.value, w),
        }
    }

    /// The derivative as a map in its own right.
    pub fn derivative(&self) -> SliceMap {
        let label = format!("d({})", self.label);
        match &self.derivative {
            Some(d) => SliceMap {
                value: d.clone(),
                derivative: None,
                label,
            },
            None => {
                let v = self.value.clone();
                SliceMap::new(label, move |w| central_difference(&*v, w))
            }
        }
    }

    /// Embeds a complex map into `C_J` with the given continuation below the axis.
    pub fn from_complex(unit: ImaginaryUnit, map: ComplexMap, ext: Extension) -> Self {
        let label = format!("{ext:?}({map:?})");
        let (m, dm) = (map.clone(), map);
        let emb = move |c: Complex64| Quaternion::from_complex(c, unit);
        let zero = Complex64::new(0.0, 0.0);
        let value = move |w: Complex64| {
            emb(match ext {
                Extension::Full => m.eval(w),
                _ if w.im > 0.0 => m.eval(w),
                Extension::Eta => zero,
                Extension::Schwarz => -1.0 / m.eval(w.conj()).conj(),
            })
        };
        let deriv = move |w: Complex64| {
            emb(match ext {
                Extension::Full => dm.derivative(w),
                _ if w.im > 0.0 => dm.derivative(w),
                Extension::Eta => zero,
                Extension::Schwarz => {
                    let g = dm.eval(w.conj()).conj();
                    dm.derivative(w.conj()).conj() / (g * g)
                }
            })
        };
        SliceMap::new(label, value).with_derivative(deriv)
    }
}

/// `(4 D(h/2) − D(h)) / 3` with `D(h) = (g(w+h) − g(w−h)) / 2h`, `h = 1e−6·max(1, |w|)`.
pub fn central_difference(g: &(dyn Fn(Complex64) -> Quaternion + Send + Sync), w: Complex64) -> Quaternion {
    let h = 1e-6 * w.norm().max(1.0);
    let d = |h: f64| {
        let s = Complex64::new(h, 0.0);
        (g(w + s) - g(w - s)) * (0.5 / h)
    };
    (d(0.5 * h) * 4.0 - d(h)) * (1.0 / 3.0)
}
