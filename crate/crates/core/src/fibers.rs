//! Fibers `f⁻¹(c)`: real, spherical and isolated zeros of `f − c`, and wings.

use nalgebra::{DMatrix, DVector, Matrix4, Vector4};
use num_complex::Complex64;
use serde::Serialize;

use crate::domain::{BoundingBox, SymmetricDomain};
use crate::error::{Error, Result};
use crate::jacobian::jacobian_matrix;
use crate::quaternion::{ImaginaryUnit, Quaternion};
use crate::roots::{self, gauss_newton, newton_complex, ScalarGrid, SearchOptions};
use crate::singular::degenerate_set;
use crate::slicefn::SliceFunction;
use crate::stem::{poly, ComplexMap, Extension, StemFunction, StemValue};

/// `τ_fiber = 1e−8·(1 + |c|)`.
pub fn fiber_tolerance(c: Quaternion) -> f64 {
    1e-8 * (1.0 + c.norm())
}

const NORMAL_SAMPLES: usize = 200;
const NORMAL_SEED: u64 = 0x0f1b;

/// The sphere `S_{α+iβ}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Sphere {
    pub alpha: f64,
    pub beta: f64,
}

impl Sphere {
    pub fn z(&self) -> Complex64 {
        Complex64::new(self.alpha, self.beta)
    }

    pub fn point(&self, unit: ImaginaryUnit) -> Quaternion {
        Quaternion::from_complex(self.z(), unit)
    }
}

/// `φ_z` at one point of `D⁺`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WingSample {
    pub alpha: f64,
    pub beta: f64,
    pub phi: ImaginaryUnit,
}

impl WingSample {
    /// The point `α + φ_z β` of the wing.
    pub fn point(&self) -> Quaternion {
        Quaternion::real(self.alpha) + self.phi.get() * self.beta
    }
}

/// The wing `W_{f,c} = {α + φ_z β : z ∈ D⁺}`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Wing {
    pub value: Quaternion,
    /// True when `φ` is constant; the wing is then the half slice `C_φ⁺`.
    pub planar: bool,
    pub unit: Option<ImaginaryUnit>,
    pub samples: Vec<WingSample>,
    /// Samples where `F₂` vanishes and `φ` is not computed.
    pub degenerate: Vec<Sphere>,
}

impl Wing {
    /// Samples `φ` on an `n × n` grid over `D⁺`.
    pub fn build(f: &SliceFunction, c: Quaternion, n: usize) -> Wing {
        let b = roots::window(f.domain(), f.domain().margin());
        let mut samples = Vec::new();
        let mut degenerate = Vec::new();
        let n = n.max(2);
        for ia in 0..n {
            for ib in 0..n {
                let alpha = b.alpha_min + (b.alpha_max - b.alpha_min) * (ia as f64 + 0.5) / n as f64;
                let beta = b.beta_min + (b.beta_max - b.beta_min) * (ib as f64 + 0.5) / n as f64;
                if !(beta > 0.0 && f.domain().is_interior_sample(alpha, beta)) {
                    continue;
                }
                match wing_phi(f, c, Complex64::new(alpha, beta)) {
                    Ok(phi) => samples.push(WingSample { alpha, beta, phi }),
                    Err(Error::DegeneratePoint { .. }) => degenerate.push(Sphere { alpha, beta }),
                    Err(_) => {}
                }
            }
        }
        let first = samples.first().map(|s| s.phi.get());
        let planar = first.is_some_and(|p| samples.iter().all(|s| (s.phi.get() - p).norm() < 1e-9));
        Wing {
            value: c,
            planar,
            unit: if planar { samples.first().map(|s| s.phi) } else { None },
            samples,
            degenerate,
        }
    }
}

/// Classified fiber of `f` over `c`, searched inside `within_box`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FiberDescription {
    pub value: Quaternion,
    pub real_zeros: Vec<f64>,
    pub spherical_zeros: Vec<Sphere>,
    pub isolated_points: Vec<Quaternion>,
    pub wing: Option<Wing>,
    pub is_constant_fiber: bool,
    pub degenerate_spheres: Vec<Sphere>,
    #[serde(serialize_with = "ser_bbox")]
    pub within_box: BoundingBox,
}

fn ser_bbox<S: serde::Serializer>(b: &BoundingBox, s: S) -> std::result::Result<S::Ok, S::Error> {
    serde::Serialize::serialize(&b.to_array(), s)
}

impl FiberDescription {
    fn empty(c: Quaternion, within_box: BoundingBox) -> Self {
        Self {
            value: c,
            real_zeros: Vec::new(),
            spherical_zeros: Vec::new(),
            isolated_points: Vec::new(),
            wing: None,
            is_constant_fiber: false,
            degenerate_spheres: Vec::new(),
            within_box,
        }
    }

    /// Number of discrete components (points and spheres).
    pub fn discrete_count(&self) -> usize {
        self.real_zeros.len() + self.spherical_zeros.len() + self.isolated_points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.discrete_count() == 0
            && self.wing.is_none()
            && !self.is_constant_fiber
            && self.degenerate_spheres.is_empty()
    }
}

/// Whether `N(f − c) ≡ 0`, i.e. `|F₁ − c| = |F₂|` and `⟨F₁ − c, F₂⟩ = 0` on `D`.
///
/// Exact coefficient test for polynomial stems, sampled otherwise.
pub fn normal_vanishes(f: &SliceFunction, c: Quaternion) -> bool {
    let g = f.stem().sub_constant(c);
    if let Some(p) = g.as_poly() {
        let scale: f64 = p.iter().map(|q| q.norm_sqr()).sum::<f64>().max(1.0);
        let n = g.normal();
        return n
            .as_poly()
            .is_some_and(|coef| coef.iter().all(|q| q.norm() < 1e-10 * scale));
    }
    let Ok(samples) = f.domain().sample_d_plus(NORMAL_SAMPLES, NORMAL_SEED) else {
        return false;
    };
    let mut seen = 0;
    for z in samples {
        let Ok(v) = g.eval(z) else { continue };
        seen += 1;
        let w = v.f1.norm_sqr() + v.f2.norm_sqr();
        if w < 1e-24 {
            continue;
        }
        let n = v.normal();
        if n.re.abs() > 1e-7 * w || n.im.abs() > 1e-7 * w {
            return false;
        }
    }
    seen > 0
}

/// `φ_z = (c − F₁(z)) F₂(z)⁻¹`.
pub fn wing_phi(f: &SliceFunction, c: Quaternion, z: Complex64) -> Result<ImaginaryUnit> {
    let v = f.stem_value(z)?;
    let scale = 1.0 + v.f1.norm() + c.norm();
    if v.f2.norm() <= 1e-12 * scale {
        return Err(Error::DegeneratePoint {
            alpha: z.re,
            beta: z.im,
        });
    }
    let phi = (c - v.f1) * v.f2.inv().expect("F2 is non-zero");
    if phi.re().abs() > 1e-6 * phi.norm() || (phi.norm() - 1.0).abs() > 1e-6 {
        return Err(Error::InvalidUnit(phi));
    }
    ImaginaryUnit::new(phi)
}

/// `n(z) = N(f − c)` as a complex number and its complex derivative.
fn normal_and_derivative(f: &SliceFunction, c: Quaternion, z: Complex64) -> Option<(Complex64, Complex64)> {
    let v = f.stem_value(z).ok()? - StemValue::new(c, Quaternion::ZERO);
    let d = f.derivative_value(z).ok()?;
    let n = v.normal();
    let dn = d * v.conj() + v * d.conj();
    Some((n, Complex64::new(dn.f1.w, dn.f2.w)))
}

/// Gauss–Newton on the stem equation `F(z) = (c, 0)`, using `∂F/∂α = F'` and
/// `∂F/∂β = ιF'`.
fn polish_stem_zero(f: &SliceFunction, c: Quaternion, z0: Complex64, on_axis: bool) -> Option<Complex64> {
    let eval = |z: Complex64| {
        let z = if on_axis { Complex64::new(z.re, 0.0) } else { z };
        let v = f.stem_value(z).ok()?;
        let d = f.derivative_value(z).ok()?;
        let r: Vec<f64> = (v.f1 - c).to_array().into_iter().chain(v.f2.to_array()).collect();
        let mut j = DMatrix::zeros(8, 2);
        for k in 0..4 {
            j[(k, 0)] = d.f1.to_array()[k];
            j[(k + 4, 0)] = d.f2.to_array()[k];
            if !on_axis {
                j[(k, 1)] = -d.f2.to_array()[k];
                j[(k + 4, 1)] = d.f1.to_array()[k];
            }
        }
        Some((DVector::from_vec(r), j))
    };
    let r = gauss_newton(z0, 50, 1e-15, eval)?;
    let z = if on_axis { Complex64::new(r.z.re, 0.0) } else { r.z };
    let v = f.stem_value(z).ok()?;
    let tol = fiber_tolerance(c);
    ((v.f1 - c).norm() < tol && v.f2.norm() < tol).then_some(z)
}

/// A few Newton steps on `f(x) = c` in `R⁴`.
fn polish_point(f: &SliceFunction, c: Quaternion, x0: Quaternion) -> Quaternion {
    let mut x = x0;
    let Ok(mut r) = f.eval(x).map(|v| v - c) else {
        return x0;
    };
    for _ in 0..8 {
        if r.norm() < 1e-15 * (1.0 + c.norm()) {
            break;
        }
        let Ok(m) = jacobian_matrix(f, x) else { break };
        let m: Matrix4<f64> = m.standard();
        let Some(inv) = m.try_inverse() else { break };
        let d = inv * Vector4::from(r.to_array());
        let nx = x - Quaternion::new(d[0], d[1], d[2], d[3]);
        match f.eval(nx).map(|v| v - c) {
            Ok(nr) if nr.norm() < r.norm() => {
                x = nx;
                r = nr;
            }
            _ => break,
        }
    }
    x
}

enum Root {
    Real(f64),
    Spherical(Sphere),
    Isolated(Quaternion),
}

fn classify_root(f: &SliceFunction, c: Quaternion, z: Complex64) -> Option<Root> {
    let z = if z.im < 0.0 { z.conj() } else { z };
    let domain = f.domain();
    let tol = fiber_tolerance(c);
    if !domain.is_product() && z.im <= 1e-6 * (1.0 + z.norm()) {
        if let Some(r) = polish_stem_zero(f, c, Complex64::new(z.re, 0.0), true) {
            if domain.in_box(Complex64::new(r.re, 0.0)) {
                return Some(Root::Real(r.re));
            }
        }
    }
    if z.im <= 0.0 || !domain.in_box(z) {
        return None;
    }
    let v = f.stem_value(z).ok()?;
    if v.f2.norm() <= 1e-4 * (1.0 + v.f1.norm()) {
        if let Some(s) = polish_stem_zero(f, c, z, false) {
            if s.im > 0.0 && domain.in_box(s) {
                return Some(Root::Spherical(Sphere {
                    alpha: s.re,
                    beta: s.im,
                }));
            }
        }
    }
    let phi = (c - v.f1) * v.f2.inv()?;
    if phi.re().abs() > 1e-3 || (phi.norm() - 1.0).abs() > 1e-3 {
        return None;
    }
    let unit = ImaginaryUnit::new(phi).ok()?;
    let x = polish_point(f, c, Quaternion::from_complex(z, unit));
    let err = (f.eval(x).ok()? - c).norm();
    (err < tol).then_some(Root::Isolated(x))
}

/// Classifies `f⁻¹(c)` within the domain's bounding box.
pub fn solve_fiber(f: &SliceFunction, c: Quaternion, opts: &SearchOptions) -> FiberDescription {
    let domain = f.domain();
    let floor = if domain.is_product() { domain.margin() } else { 0.0 };
    let window = roots::window(domain, floor);
    let mut out = FiberDescription::empty(c, window);

    if normal_vanishes(f, c) {
        let identically = f.samples().iter().all(|z| match f.stem_value(*z) {
            Ok(v) => (v.f1 - c).norm() + v.f2.norm() < fiber_tolerance(c),
            Err(_) => true,
        });
        if identically {
            out.is_constant_fiber = true;
        } else {
            out.wing = Some(Wing::build(f, c, 8));
            // f is constant on a sphere of D_f; keep those where it equals c
            out.degenerate_spheres = degenerate_set(f, opts)
                .spheres
                .into_iter()
                .filter(|s| {
                    f.stem_value(s.z())
                        .is_ok_and(|v| (v.f1 - c).norm() < fiber_tolerance(c))
                })
                .collect();
        }
        return out;
    }

    let keep = |z: Complex64| domain.contains_z(z) && domain.boundary_distance(z.re, z.im) >= domain.margin() * 0.5;
    let grid = ScalarGrid::scan(window, opts.grid, opts.exec, keep, |z| {
        normal_and_derivative(f, c, z).map_or(f64::NAN, |(n, _)| n.norm())
    });
    let seeds = grid.local_minima(256);
    let refined = opts.exec.map_slice(&seeds, |(z0, _)| {
        let r = newton_complex(*z0, 50, 1e-12, |z| normal_and_derivative(f, c, z))?;
        classify_root(f, c, r.z)
    });

    let mut real = Vec::new();
    let mut spheres = Vec::new();
    let mut points = Vec::new();
    for root in refined.into_iter().flatten() {
        match root {
            Root::Real(a) => real.push(a),
            Root::Spherical(s) => spheres.push(s),
            Root::Isolated(x) => points.push(x),
        }
    }
    let mut real = roots::dedupe(real, 1e-7, |a| Complex64::new(*a, 0.0));
    real.sort_by(f64::total_cmp);
    let mut spheres = roots::dedupe(spheres, 1e-7, |s| s.z());
    spheres.sort_by(|a, b| (a.alpha, a.beta).partial_cmp(&(b.alpha, b.beta)).unwrap());
    let mut iso: Vec<Quaternion> = Vec::new();
    for p in points {
        if !iso.iter().any(|q| (*q - p).norm() < 1e-7 * (1.0 + p.norm())) {
            iso.push(p);
        }
    }
    iso.sort_by(|a, b| a.to_array().partial_cmp(&b.to_array()).unwrap());
    out.real_zeros = real;
    out.spherical_zeros = spheres;
    out.isolated_points = iso;
    out
}

/// Kinds of wing set `W_f`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum WingSetKind {
    Empty,
    One,
    Two,
    Circle,
    WholeDomain,
}

/// Circle of wing values `{center + radius(cos t·u + sin t·v)}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WingCircle {
    pub center: Quaternion,
    pub radius: f64,
    pub basis: [Quaternion; 2],
}

impl WingCircle {
    pub fn at(&self, t: f64) -> Quaternion {
        self.center + (self.basis[0] * t.cos() + self.basis[1] * t.sin()) * self.radius
    }

    /// The point of the circle closest to `q`.
    pub fn nearest(&self, q: Quaternion) -> Quaternion {
        let d = q - self.center;
        let (a, b) = (d.dot(self.basis[0]), d.dot(self.basis[1]));
        if a == 0.0 && b == 0.0 {
            return self.at(0.0);
        }
        self.at(b.atan2(a))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WingSetReport {
    pub kind: WingSetKind,
    pub values: Vec<Quaternion>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub circle: Option<WingCircle>,
}

impl WingSetReport {
    fn of(kind: WingSetKind) -> Self {
        Self {
            kind,
            values: Vec::new(),
            circle: None,
        }
    }

    pub fn count(&self) -> usize {
        self.values.len()
    }

    /// Wing value closest to `q`, if there are any wings.
    pub fn nearest_value(&self, q: Quaternion) -> Option<Quaternion> {
        match (&self.circle, self.kind) {
            (Some(c), WingSetKind::Circle) => Some(c.nearest(q)),
            _ => self
                .values
                .iter()
                .copied()
                .min_by(|a, b| (*a - q).norm().total_cmp(&(*b - q).norm())),
        }
    }
}

/// Rounds components within `1e−10` of a multiple of `1e−9`, and clears `−0`.
pub fn snap(q: Quaternion) -> Quaternion {
    let s = |x: f64| {
        let r = (x * 1e9).round() / 1e9;
        let y = if (x - r).abs() < 1e-10 { r } else { x };
        if y == 0.0 {
            0.0
        } else {
            y
        }
    };
    Quaternion::new(s(q.w), s(q.x), s(q.y), s(q.z))
}

const WING_ROWS: usize = 48;
const WING_SEED: u64 = 0x3a6e;

/// Determines the wing set `W_f` on a product domain.
///
/// A wing value `c` satisfies, for all `z`, the linear equations
/// `⟨F₂(z), c⟩ = ⟨F₁, F₂⟩(z)` and `2⟨F₁(z) − F₁(z₀), c⟩ = d(z) − d(z₀)` with
/// `d = |F₁|² − |F₂|²`, plus the sphere `|c − F₁(z₀)| = |F₂(z₀)|`. The affine
/// solution set of the sampled rows is intersected with that sphere and each
/// candidate is confirmed with [`normal_vanishes`].
pub fn find_wings(f: &SliceFunction) -> WingSetReport {
    if !f.domain().is_product() {
        return WingSetReport::of(WingSetKind::Empty);
    }
    let class = f.classify();
    if class.is_slice_constant {
        return WingSetReport::of(WingSetKind::WholeDomain);
    }
    if class.in_tilde_r {
        return WingSetReport::of(WingSetKind::Empty);
    }
    let Ok(samples) = f.domain().sample_d_plus(4 * WING_ROWS, WING_SEED) else {
        return WingSetReport::of(WingSetKind::Empty);
    };
    let mut values: Vec<StemValue> = samples
        .iter()
        .filter_map(|z| f.stem_value(*z).ok())
        .filter(|v| v.norm().is_finite())
        .collect();
    values.sort_by(|a, b| a.norm().total_cmp(&b.norm()));
    values.truncate(WING_ROWS);
    let Some(v0) = values.first().copied() else {
        return WingSetReport::of(WingSetKind::Empty);
    };
    let d = |v: &StemValue| v.f1.norm_sqr() - v.f2.norm_sqr();
    let mut rows: Vec<([f64; 4], f64)> = Vec::new();
    for v in &values {
        rows.push((v.f2.to_array(), v.f1.dot(v.f2)));
        rows.push(((v.f1 - v0.f1).to_array().map(|x| 2.0 * x), d(v) - d(&v0)));
    }
    let rows: Vec<_> = rows
        .into_iter()
        .filter_map(|(a, b)| {
            let n = a.iter().map(|x| x * x).sum::<f64>().sqrt();
            (n > 1e-12 * (1.0 + b.abs())).then(|| (a.map(|x| x / n), b / n))
        })
        .collect();
    if rows.is_empty() {
        return WingSetReport::of(WingSetKind::Empty);
    }
    let a = DMatrix::from_fn(rows.len(), 4, |r, c| rows[r].0[c]);
    let b = DVector::from_iterator(rows.len(), rows.iter().map(|r| r.1));
    let svd = a.svd(true, true);
    let top = svd.singular_values.max();
    let cut = 1e-8 * top;
    let Ok(cp) = svd.solve(&b, cut) else {
        return WingSetReport::of(WingSetKind::Empty);
    };
    let v_t = svd.v_t.as_ref().expect("requested V^T");
    let null: Vec<Quaternion> = (0..4)
        .filter(|&k| svd.singular_values[k] <= cut)
        .map(|k| Quaternion::new(v_t[(k, 0)], v_t[(k, 1)], v_t[(k, 2)], v_t[(k, 3)]))
        .collect();
    let cp = Quaternion::new(cp[0], cp[1], cp[2], cp[3]);
    let center0 = v0.f1;
    let r2 = v0.f2.norm_sqr();
    let u = cp - center0;
    let tol = 1e-9 * (1.0 + u.norm_sqr() + r2);

    let mut candidates = Vec::new();
    let mut circle = None;
    match null.len() {
        0 => candidates.push(cp),
        1 => {
            let n = null[0];
            let un = u.dot(n);
            let disc = un * un - (u.norm_sqr() - r2);
            if disc.abs() <= tol {
                candidates.push(cp - n * un);
            } else if disc > 0.0 {
                let s = disc.sqrt();
                candidates.push(cp + n * (-un - s));
                candidates.push(cp + n * (-un + s));
            }
        }
        2 => {
            let (n1, n2) = (null[0], null[1]);
            let m = cp - n1 * u.dot(n1) - n2 * u.dot(n2);
            let rho2 = r2 - (m - center0).norm_sqr();
            if rho2.abs() <= tol {
                candidates.push(m);
            } else if rho2 > 0.0 {
                circle = Some(WingCircle {
                    center: snap(m),
                    radius: snap(Quaternion::real(rho2.sqrt())).w,
                    basis: [snap(n1), snap(n2)],
                });
            }
        }
        _ => {}
    }

    if let Some(circ) = circle {
        let reps: Vec<Quaternion> = (0..8)
            .map(|k| snap(circ.at(k as f64 * std::f64::consts::FRAC_PI_4)))
            .collect();
        if reps.iter().all(|c| normal_vanishes(f, *c)) {
            return WingSetReport {
                kind: WingSetKind::Circle,
                values: reps,
                circle: Some(circ),
            };
        }
        return WingSetReport::of(WingSetKind::Empty);
    }

    let mut confirmed: Vec<Quaternion> = Vec::new();
    for c in candidates.into_iter().map(snap) {
        if normal_vanishes(f, c) && !confirmed.iter().any(|d| (*d - c).norm() < 1e-6 * (1.0 + c.norm())) {
            confirmed.push(c);
        }
    }
    confirmed.sort_by(|a, b| a.to_array().partial_cmp(&b.to_array()).unwrap());
    let kind = match confirmed.len() {
        0 => WingSetKind::Empty,
        1 => WingSetKind::One,
        _ => WingSetKind::Two,
    };
    WingSetReport {
        kind,
        values: confirmed,
        circle: None,
    }
}

/// `g(x) = c + (x − r)(f(x) − c)`, which keeps the wing `W_{f,c}` and no other.
pub fn wing_selection(f: &SliceFunction, c: Quaternion, r: f64) -> Result<SliceFunction> {
    if !f.domain().is_product() {
        return Err(Error::NotProductDomain);
    }
    let lin = StemFunction::poly(vec![Quaternion::real(-r), Quaternion::ONE]);
    let stem = lin.mul(&f.stem().sub_constant(c)).add(&StemFunction::constant(c));
    Ok(SliceFunction::new(stem, f.domain().clone()))
}

/// Whether `|f|` stays bounded on `D⁺` near the real point `r` (sampled on shrinking
/// half circles).
pub fn is_bounded_near(f: &SliceFunction, r: f64) -> bool {
    let mut worst: f64 = 0.0;
    let mut first = None;
    for k in 1..=6 {
        let rad = 10f64.powi(-k);
        for t in 1..8 {
            let th = std::f64::consts::PI * t as f64 / 8.0;
            let z = Complex64::new(r + rad * th.cos(), rad * th.sin());
            if let Ok(v) = f.stem_value(z) {
                worst = worst.max(v.norm());
            }
        }
        if k == 1 {
            first = Some(worst);
        }
    }
    worst.is_finite() && worst <= 1e3 * first.unwrap_or(1.0).max(1.0)
}

/// The slice function equal to `g` on `C_i⁺` and `−1/conj(g(x̄))` on `C_i⁻`.
pub fn schwarz_construct(g: ComplexMap, domain: SymmetricDomain) -> Result<SliceFunction> {
    let samples = domain.sample_d_plus(256, 7)?;
    for z in samples {
        let v = g.eval(z);
        if v.norm() < 1e-12 {
            return Err(Error::ZeroOfMap(Quaternion::from_complex(z, ImaginaryUnit::i())));
        }
    }
    Ok(SliceFunction::new(
        crate::stem::from_complex_map(ImaginaryUnit::i(), g, Extension::Schwarz),
        domain,
    ))
}

/// Total multiplicity data: the count `s` and the real quotient `N(f − f(y)) / Δ_y^s`.
#[derive(Debug, Clone, PartialEq)]
pub struct Multiplicity {
    pub count: u32,
    pub quotient: poly::RealPoly,
}

/// `m_{f−f(y)}(y)`: how many times `Δ_y` divides `N(f − f(y))`.
pub fn total_multiplicity(f: &SliceFunction, y: Quaternion) -> Result<Multiplicity> {
    let coeffs = f.stem().as_poly().ok_or(Error::NonPolynomial)?;
    let fy = f.eval(y)?;
    let mut h = coeffs.to_vec();
    if h.is_empty() {
        h.push(Quaternion::ZERO);
    }
    h[0] -= fy;
    let h = poly::trim(h);
    if h.is_empty() {
        return Err(Error::NormalIdenticallyZero);
    }
    let n = poly::mul(&h, &h.iter().map(|q| q.conj()).collect::<Vec<_>>());
    let mut cur: Vec<f64> = n.iter().map(|q| q.w).collect();
    let delta = [y.norm_sqr(), -2.0 * y.re(), 1.0];
    let mut count = 0;
    loop {
        let scale = cur.iter().fold(0.0f64, |m, x| m.max(x.abs())).max(f64::MIN_POSITIVE);
        let (q, r) = poly::real_divmod_monic(&cur, &delta);
        let rnorm = r.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        if q.is_empty() || rnorm > 1e-9 * scale {
            break;
        }
        cur = q;
        count += 1;
    }
    Ok(Multiplicity { count, quotient: cur })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stem::StemFunction;

    fn q(w: f64, x: f64, y: f64, z: f64) -> Quaternion {
        Quaternion::new(w, x, y, z)
    }

    fn hr() -> SymmetricDomain {
        SymmetricDomain::complement_of_reals()
    }

    fn f2() -> SliceFunction {
        SliceFunction::new(StemFunction::identity().mul(&StemFunction::eta()), hr())
    }

    fn f3() -> SliceFunction {
        let g = ComplexMap::poly(&[Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)]);
        schwarz_construct(g, hr()).unwrap()
    }

    fn f5() -> SliceFunction {
        let p = StemFunction::poly(vec![Quaternion::ZERO, Quaternion::J, Quaternion::ONE]);
        SliceFunction::new(p.mul(&StemFunction::eta()), hr())
    }

    fn f6() -> SliceFunction {
        let p = StemFunction::poly(vec![Quaternion::J, Quaternion::ONE]);
        SliceFunction::new(p.mul(&StemFunction::eta()), hr())
    }

    fn opts() -> SearchOptions {
        SearchOptions {
            grid: 160,
            ..SearchOptions::default()
        }
    }

    #[test]
    fn normal_vanishing_examples() {
        assert!(normal_vanishes(&f2(), Quaternion::ZERO));
        assert!(!normal_vanishes(&f2(), Quaternion::ONE));
        assert!(normal_vanishes(&f3(), Quaternion::J));
        assert!(!normal_vanishes(&f3(), Quaternion::J * 2.0));
    }

    #[test]
    fn phi_examples() {
        for z in [Complex64::new(0.3, 0.7), Complex64::new(-2.0, 1.5)] {
            assert!((wing_phi(&f2(), Quaternion::ZERO, z).unwrap().get() + Quaternion::I).norm() < 1e-14);
            assert!((wing_phi(&f6(), Quaternion::J, z).unwrap().get() + Quaternion::I).norm() < 1e-14);
            let (a, b) = (z.re, z.im);
            let den = 1.0 + a * a + b * b;
            let expect = q(0.0, (1.0 - a * a - b * b) / den, -2.0 * b / den, 2.0 * a / den);
            assert!((wing_phi(&f5(), Quaternion::ZERO, z).unwrap().get() - expect).norm() < 1e-12);
        }
    }

    #[test]
    fn wings_of_examples() {
        let w = find_wings(&f6());
        assert_eq!(w.kind, WingSetKind::Two);
        assert_eq!(w.values, vec![Quaternion::ZERO, Quaternion::J]);

        let w = find_wings(&f3());
        assert_eq!(w.kind, WingSetKind::Circle);
        for c in &w.values {
            assert!((c.norm() - 1.0).abs() < 1e-9 && c.w.abs() < 1e-9 && c.x.abs() < 1e-9);
        }

        let f1 = SliceFunction::new(
            StemFunction::poly(vec![Quaternion::ZERO, Quaternion::I * -2.0, Quaternion::ONE]),
            hr(),
        );
        assert_eq!(find_wings(&f1).kind, WingSetKind::Empty);
        assert_eq!(find_wings(&f2()).kind, WingSetKind::One);
        assert_eq!(find_wings(&f5()).values, vec![Quaternion::ZERO]);
    }

    #[test]
    fn wing_selection_examples() {
        let g = wing_selection(&f6(), Quaternion::ZERO, 0.0).unwrap();
        let w = find_wings(&g);
        assert_eq!((w.kind, w.values.clone()), (WingSetKind::One, vec![Quaternion::ZERO]));
        for z in [Complex64::new(0.4, 0.3), Complex64::new(-1.0, 2.0)] {
            let a = wing_phi(&g, Quaternion::ZERO, z).unwrap().get();
            let b = wing_phi(&f5(), Quaternion::ZERO, z).unwrap().get();
            assert!((a - b).norm() < 1e-12);
        }
        assert!(is_bounded_near(&f6(), 0.0));

        let eta = SliceFunction::new(StemFunction::eta(), hr());
        let g = wing_selection(&eta, Quaternion::ZERO, 0.0).unwrap();
        let w = find_wings(&g);
        assert_eq!(w.kind, WingSetKind::One);
        let y = q(0.5, 0.3, -0.2, 0.7);
        assert!((g.eval(y).unwrap() - f2().eval(y).unwrap()).norm() < 1e-15);
    }

    #[test]
    fn schwarz_stem_identity() {
        let f = f3();
        for z in f.samples().iter().take(20) {
            let v = f.stem_value(*z).unwrap();
            assert!((v.f1.norm_sqr() - v.f2.norm_sqr() + 1.0).abs() < 1e-12);
            assert!(v.f1.dot(v.f2).abs() < 1e-12);
        }
        let zero = ComplexMap::poly(&[Complex64::new(0.0, -1.0), Complex64::new(1.0, 0.0)]);
        assert!(matches!(
            schwarz_construct(zero, SymmetricDomain::disk(0.0, 3.0).minus_reals()),
            Ok(_) | Err(Error::ZeroOfMap(_))
        ));
    }

    #[test]
    fn fiber_of_f2() {
        let d = solve_fiber(&f2(), Quaternion::ZERO, &opts());
        let w = d.wing.unwrap();
        assert!(w.planar);
        assert_eq!(w.unit.unwrap().get(), -Quaternion::I);

        let c = q(0.3, 0.8, -0.4, 0.2);
        let d = solve_fiber(&f2(), c, &opts());
        assert_eq!(d.isolated_points.len(), 1);
        assert!((f2().eval(d.isolated_points[0]).unwrap() - c).norm() < fiber_tolerance(c));

        let d = solve_fiber(&f2(), q(0.3, -0.8, -0.4, 0.2), &opts());
        assert!(d.is_empty());
    }

    #[test]
    fn spherical_fiber_of_square() {
        let f = SliceFunction::new(
            StemFunction::poly(vec![Quaternion::ZERO, Quaternion::ZERO, Quaternion::ONE]),
            SymmetricDomain::whole(),
        );
        let d = solve_fiber(&f, Quaternion::real(-1.0), &opts());
        assert_eq!(d.spherical_zeros.len(), 1);
        let s = d.spherical_zeros[0];
        assert!(s.alpha.abs() < 1e-8 && (s.beta - 1.0).abs() < 1e-8);
        assert!(d.real_zeros.is_empty() && d.isolated_points.is_empty());

        let d = solve_fiber(&f, Quaternion::real(4.0), &opts());
        assert_eq!(d.real_zeros.len(), 2);
    }

    #[test]
    fn f1_fibers_have_at_most_two_points() {
        let f1 = SliceFunction::new(
            StemFunction::poly(vec![Quaternion::ZERO, Quaternion::I * -2.0, Quaternion::ONE]),
            hr(),
        );
        for c in [Quaternion::ONE, q(0.5, -1.0, 2.0, 0.3)] {
            let d = solve_fiber(&f1, c, &opts());
            assert!(d.discrete_count() >= 1 && d.discrete_count() <= 2, "{d:?}");
            for x in &d.isolated_points {
                assert!((f1.eval(*x).unwrap() - c).norm() < fiber_tolerance(c));
            }
        }
    }

    #[test]
    fn multiplicities() {
        let sq = SliceFunction::new(
            StemFunction::poly(vec![Quaternion::ZERO, Quaternion::ZERO, Quaternion::ONE]),
            SymmetricDomain::whole(),
        );
        assert_eq!(total_multiplicity(&sq, Quaternion::ZERO).unwrap().count, 2);
        let y = q(1.0, 0.5, -2.0, 0.25);
        let lin = SliceFunction::new(StemFunction::poly(vec![-y, Quaternion::ONE]), SymmetricDomain::whole());
        assert_eq!(total_multiplicity(&lin, y).unwrap().count, 1);
        let f1 = SliceFunction::new(
            StemFunction::poly(vec![Quaternion::ZERO, Quaternion::I * -2.0, Quaternion::ONE]),
            SymmetricDomain::whole(),
        );
        assert!(total_multiplicity(&f1, Quaternion::I).unwrap().count >= 2);
        assert_eq!(
            total_multiplicity(&f2(), Quaternion::J).unwrap_err(),
            Error::NonPolynomial
        );
    }
}
