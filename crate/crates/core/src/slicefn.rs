//! Slice functions `f = I(F)` on circular domains.

use std::fmt;
use std::sync::{Arc, OnceLock};

use nalgebra::{Matrix3, SymmetricEigen, Vector3};
use num_complex::Complex64;
use serde::Serialize;

use crate::domain::SymmetricDomain;
use crate::error::{Error, Result};
use crate::quaternion::{ImaginaryUnit, Quaternion};
use crate::stem::{StemFunction, StemPoint, StemValue};

/// Number of `D⁺` samples used by class detection and scale estimation.
const PROFILE_SAMPLES: usize = 64;
const PROFILE_SEED: u64 = 0x51ce;

/// Membership flags for the algebraic classes of slice functions.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FunctionClass {
    pub is_slice_constant: bool,
    pub is_slice_preserving: bool,
    /// `Some(J)` when `F₁, F₂` take values in `C_J` and `f` is not slice-preserving.
    pub preserved_slice: Option<ImaginaryUnit>,
    pub in_tilde_r: bool,
    pub in_tilde_c: bool,
    /// `(a, b)` with `f = g·a + b`, `g` slice-preserving or `C_J`-preserving.
    pub witness: Option<(Quaternion, Quaternion)>,
    /// The unit `J` of the `C_J`-preserving factor `g` in the tilde decomposition.
    pub tilde_unit: Option<ImaginaryUnit>,
    pub residuals: ClassResiduals,
}

/// Largest relative residuals seen by each test.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct ClassResiduals {
    pub slice_constant: f64,
    pub slice_preserving: f64,
    pub one_slice: f64,
    pub tilde_r: f64,
    pub tilde_c: f64,
}

struct Profile {
    samples: Vec<Complex64>,
    scale: f64,
}

/// A slice function: a stem together with its domain.
#[derive(Clone)]
pub struct SliceFunction {
    stem: Arc<StemFunction>,
    dstem: Arc<StemFunction>,
    domain: SymmetricDomain,
    profile: Arc<OnceLock<Profile>>,
    class: Arc<OnceLock<FunctionClass>>,
}

impl fmt::Debug for SliceFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SliceFunction")
            .field("stem", &self.stem)
            .field("domain", &self.domain)
            .finish()
    }
}

impl SliceFunction {
    pub fn new(stem: StemFunction, domain: SymmetricDomain) -> Self {
        let dstem = stem.derivative();
        Self {
            stem: Arc::new(stem),
            dstem: Arc::new(dstem),
            domain,
            profile: Arc::new(OnceLock::new()),
            class: Arc::new(OnceLock::new()),
        }
    }

    pub fn stem(&self) -> &StemFunction {
        &self.stem
    }

    /// Stem of `∂f/∂x`.
    pub fn derivative_stem(&self) -> &StemFunction {
        &self.dstem
    }

    pub fn domain(&self) -> &SymmetricDomain {
        &self.domain
    }

    pub fn with_domain(&self, domain: SymmetricDomain) -> Self {
        Self::new((*self.stem).clone(), domain)
    }

    fn check(&self, z: Complex64) -> Result<()> {
        if self.domain.contains_z(z) {
            Ok(())
        } else {
            Err(Error::Domain {
                alpha: z.re,
                beta: z.im,
            })
        }
    }

    /// `f(q) = F₁(z) + J F₂(z)` with `q = α + Jβ`.
    pub fn eval(&self, q: Quaternion) -> Result<Quaternion> {
        let s = q.decompose();
        let z = s.complex();
        self.check(z)?;
        let v = self.stem.eval(z)?;
        Ok(if s.is_real { v.f1 } else { v.f1 + s.unit.get() * v.f2 })
    }

    /// `F₁(z) + J F₂(z)` without a domain check; `z.im` may be negative.
    pub fn eval_on_slice(&self, z: Complex64, unit: ImaginaryUnit) -> Result<Quaternion> {
        let v = self.stem.eval(z)?;
        Ok(v.f1 + unit.get() * v.f2)
    }

    pub fn stem_value(&self, z: Complex64) -> Result<StemValue> {
        self.stem.eval(z)
    }

    pub fn stem_point(&self, z: Complex64) -> Result<StemPoint> {
        self.stem.eval_point(z)
    }

    pub fn derivative_value(&self, z: Complex64) -> Result<StemValue> {
        self.dstem.eval(z)
    }

    fn same_domain(&self, other: &SliceFunction) -> Result<()> {
        if self.domain == other.domain {
            Ok(())
        } else {
            Err(Error::DomainMismatch)
        }
    }

    /// `f·g = I(FG)`.
    pub fn slice_product(&self, other: &SliceFunction) -> Result<SliceFunction> {
        self.same_domain(other)?;
        Ok(Self::new(self.stem.mul(&other.stem), self.domain.clone()))
    }

    pub fn add(&self, other: &SliceFunction) -> Result<SliceFunction> {
        self.same_domain(other)?;
        Ok(Self::new(self.stem.add(&other.stem), self.domain.clone()))
    }

    pub fn sub(&self, other: &SliceFunction) -> Result<SliceFunction> {
        self.same_domain(other)?;
        Ok(Self::new(self.stem.sub(&other.stem), self.domain.clone()))
    }

    pub fn sub_constant(&self, c: Quaternion) -> SliceFunction {
        Self::new(self.stem.sub_constant(c), self.domain.clone())
    }

    /// `x ↦ f(x)·a`.
    pub fn right_scale(&self, a: Quaternion) -> SliceFunction {
        Self::new(self.stem.right_scale(a), self.domain.clone())
    }

    /// `f^c = I(F^c)`.
    pub fn conjugate(&self) -> SliceFunction {
        Self::new(self.stem.conj(), self.domain.clone())
    }

    /// `N(f) = f·f^c`.
    pub fn normal(&self) -> SliceFunction {
        Self::new(self.stem.normal(), self.domain.clone())
    }

    /// `∂f/∂x = I(∂F/∂z)`.
    pub fn slice_derivative(&self) -> SliceFunction {
        Self::new((*self.dstem).clone(), self.domain.clone())
    }

    /// `f'_s(q) = F̂₂(z)`; at real points of a slice domain this is `∂f/∂x`.
    pub fn spherical_derivative(&self, q: Quaternion) -> Result<Quaternion> {
        let s = q.decompose();
        if s.is_real && self.domain.is_product() {
            return Err(Error::ProductDomainRealPoint(s.alpha));
        }
        self.check(s.complex())?;
        self.stem.f2_hat(s.complex())
    }

    /// `f^{−•}`, the slice reciprocal.
    pub fn reciprocal(&self) -> Result<SliceFunction> {
        if self.normal_is_identically_zero() {
            return Err(Error::NormalIdenticallyZero);
        }
        Ok(Self::new(self.stem.reciprocal(), self.domain.clone()))
    }

    fn normal_is_identically_zero(&self) -> bool {
        let n = self.stem.normal();
        if let Some(c) = n.as_poly() {
            let s: f64 = self
                .stem
                .as_poly()
                .map_or(1.0, |p| p.iter().map(|q| q.norm_sqr()).sum::<f64>().max(1.0));
            return c.iter().all(|q| q.norm() < 1e-10 * s);
        }
        let scale = self.scale();
        self.samples().iter().all(|z| match self.stem.eval(*z) {
            Ok(v) => v.normal().norm() < 1e-10 * scale * scale,
            Err(_) => true,
        })
    }

    fn profile(&self) -> &Profile {
        self.profile.get_or_init(|| {
            let samples = self
                .domain
                .sample_d_plus(PROFILE_SAMPLES, PROFILE_SEED)
                .unwrap_or_default();
            let mut norms: Vec<f64> = samples
                .iter()
                .filter_map(|z| self.stem.eval(*z).ok())
                .map(|v| v.norm())
                .filter(|n| n.is_finite())
                .collect();
            norms.sort_by(f64::total_cmp);
            let median = norms.get(norms.len() / 2).copied().unwrap_or(1.0);
            Profile {
                samples,
                scale: median.max(1.0),
            }
        })
    }

    /// Typical magnitude of `F` over `D⁺`, at least 1.
    pub fn scale(&self) -> f64 {
        self.profile().scale
    }

    /// Fixed `D⁺` samples used for class detection.
    pub fn samples(&self) -> &[Complex64] {
        &self.profile().samples
    }

    /// Class flags; computed on first use and then cached.
    pub fn classify(&self) -> &FunctionClass {
        self.class.get_or_init(|| classify_stem(self))
    }

    pub fn is_slice_constant(&self) -> bool {
        self.classify().is_slice_constant
    }

    pub fn is_slice_preserving(&self) -> bool {
        self.classify().is_slice_preserving
    }
}

/// Unit vector spanning the imaginary parts, and the largest relative distance of
/// any of them from that line. `None` when all imaginary parts vanish.
fn fit_line(vectors: &[(Vector3<f64>, f64)]) -> Option<(Vector3<f64>, f64)> {
    let mut m = Matrix3::zeros();
    for (v, w) in vectors {
        m += (v / *w) * (v / *w).transpose();
    }
    let eig = SymmetricEigen::new(m);
    let k = eig.eigenvalues.imax();
    if eig.eigenvalues[k] <= 1e-30 {
        return None;
    }
    let mut u: Vector3<f64> = eig.eigenvectors.column(k).into();
    let big = u.iamax();
    if u[big] < 0.0 {
        u = -u;
    }
    let res = vectors
        .iter()
        .map(|(v, w)| (v - u * u.dot(v)).norm() / w)
        .fold(0.0, f64::max);
    Some((u, res))
}

fn im_vec(q: Quaternion) -> Vector3<f64> {
    Vector3::new(q.x, q.y, q.z)
}

fn unit_of(u: Vector3<f64>) -> ImaginaryUnit {
    ImaginaryUnit::from_vector(u[0], u[1], u[2]).expect("fit_line returns unit vectors")
}

const CLASS_TOL: f64 = 1e-9;

fn classify_stem(f: &SliceFunction) -> FunctionClass {
    let stem = f.stem();
    let samples = f.samples();
    let values: Vec<StemValue> = samples.iter().filter_map(|z| stem.eval(*z).ok()).collect();
    let mut res = ClassResiduals::default();

    let is_sc = if f.derivative_stem().is_structurally_zero() {
        true
    } else {
        let scale = f.scale();
        res.slice_constant = samples
            .iter()
            .filter_map(|z| f.derivative_value(*z).ok())
            .map(|d| d.norm() / scale)
            .fold(0.0, f64::max);
        !stem.is_poly() && res.slice_constant < 1e-10
    };

    res.slice_preserving = values
        .iter()
        .map(|v| (v.f1.im().norm() + v.f2.im().norm()) / (1.0 + v.norm()))
        .fold(0.0, f64::max);
    let is_sp = res.slice_preserving < CLASS_TOL;

    let mut preserved_slice = None;
    if !is_sp {
        let vecs: Vec<_> = values
            .iter()
            .flat_map(|v| {
                let w = 1.0 + v.norm();
                [(im_vec(v.f1), w), (im_vec(v.f2), w)]
            })
            .collect();
        if let Some((u, r)) = fit_line(&vecs) {
            res.one_slice = r;
            if r < CLASS_TOL {
                preserved_slice = Some(unit_of(u));
            }
        }
    }

    // f = g·a + b: with a = F₂(z₀), the quotients F₂·a⁻¹ and (F₁ − F₁(z₀))·a⁻¹ are
    // the stem values of g (up to a constant), so they must be real or lie in C_J.
    let mut in_tilde_r = is_sc || is_sp;
    let mut in_tilde_c = in_tilde_r || preserved_slice.is_some();
    let mut witness = None;
    let mut tilde_unit = preserved_slice;
    if is_sp || preserved_slice.is_some() {
        witness = Some((Quaternion::ONE, Quaternion::ZERO));
    }
    let anchor = values
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.f2.norm().total_cmp(&b.1.f2.norm()));
    if let Some((k0, v0)) = anchor.filter(|(_, v)| v.f2.norm() > 1e-12 * (1.0 + v.norm())) {
        let a = v0.f2;
        let ainv = a.inv().expect("anchor is non-zero");
        let quotients: Vec<Quaternion> = values
            .iter()
            .flat_map(|v| [v.f2 * ainv, (v.f1 - values[k0].f1) * ainv])
            .collect();
        let w = quotients.iter().map(|q| q.norm()).fold(1.0, f64::max);
        res.tilde_r = quotients.iter().map(|q| q.im().norm() / w).fold(0.0, f64::max);
        let g1 = v0.f1 * ainv;
        if res.tilde_r < CLASS_TOL {
            in_tilde_r = true;
            in_tilde_c = true;
            if !(is_sp || is_sc) {
                witness = Some((a, v0.f1 - a * g1.re()));
                tilde_unit = None;
            }
        } else {
            let vecs: Vec<_> = quotients.iter().map(|q| (im_vec(*q), w)).collect();
            if let Some((u, r)) = fit_line(&vecs) {
                res.tilde_c = r;
                if r < CLASS_TOL {
                    in_tilde_c = true;
                    let unit = unit_of(u);
                    if preserved_slice.is_none() {
                        let b = v0.f1 - g1.project(unit) * a;
                        witness = Some((a, b));
                        tilde_unit = Some(unit);
                    }
                }
            }
        }
    }
    if is_sc {
        in_tilde_r = true;
        in_tilde_c = true;
    }

    FunctionClass {
        is_slice_constant: is_sc,
        is_slice_preserving: is_sp,
        preserved_slice,
        in_tilde_r,
        in_tilde_c,
        witness,
        tilde_unit,
        residuals: res,
    }
}
