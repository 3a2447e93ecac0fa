//! The singular set `N_f`: membership, sphere sections, the degenerate set `D_f`
//! and the dimension triple `(d_f, w_f, m_f)`.

use nalgebra::{DVector, Matrix2x3, Vector2, Vector3};
use num_complex::Complex64;
use serde::Serialize;

use crate::domain::SymmetricDomain;
use crate::error::{Error, Result};
use crate::fibers::{find_wings, snap, wing_phi, Sphere, WingSetKind, WingSetReport};
use crate::jacobian::point_derivatives;
use crate::quaternion::{ImaginaryUnit, Quaternion};
use crate::roots::{self, gauss_newton_fd, ScalarGrid, SearchOptions};
use crate::slicefn::SliceFunction;

/// `f(y) ∈ N_f` by the two inner-product conditions (non-real `y`) or
/// `∂f/∂x(y) = 0` (real `y`).
pub fn in_singular_set(f: &SliceFunction, y: Quaternion, tol: f64) -> Result<bool> {
    let d = point_derivatives(f, y)?;
    let scale = f.scale();
    if d.is_real {
        return Ok(d.q.norm() < tol * scale);
    }
    let (h1, h2) = d.hermitian_pair();
    Ok(h1.abs() < tol * scale * scale && h2.abs() < tol * scale * scale)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SectionKind {
    Empty,
    Point,
    TwoPoints,
    Circle,
    WholeSphere,
}

/// `{J : c·J = h}` intersected with the unit sphere, as a circle with `center` on
/// the normal `axis`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SectionCircle {
    pub center: [f64; 3],
    pub axis: [f64; 3],
    pub radius: f64,
}

/// `N_f ∩ S_y`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SphereSection {
    pub sphere: Sphere,
    pub kind: SectionKind,
    pub points: Vec<ImaginaryUnit>,
    pub circle: Option<SectionCircle>,
    /// `f̃(α + Jβ) = p + Jq` with `f̃ = ∂f/∂x · conj(f'_s)`.
    pub p: Quaternion,
    pub q: Quaternion,
}

impl SphereSection {
    /// Whether `J` belongs to the section, up to `tol`.
    pub fn contains(&self, j: ImaginaryUnit, tol: f64) -> bool {
        let v = j.get();
        let (p, q) = (self.p, self.q);
        let s = 1.0 + p.norm() + q.norm();
        let e1 = p.w - (v.x * q.x + v.y * q.y + v.z * q.z);
        let e2 = q.w + (v.x * p.x + v.y * p.y + v.z * p.z);
        e1.abs() < tol * s && e2.abs() < tol * s
    }
}

const SECTION_TOL: f64 = 1e-9;

/// Solves `p₀ − j·q_v = 0`, `q₀ + j·p_v = 0` on the unit sphere `|j| = 1`.
pub fn sphere_section(f: &SliceFunction, y: Quaternion) -> Result<SphereSection> {
    let c = y.decompose();
    if c.is_real {
        return Err(Error::RealPoint);
    }
    let unit = c.unit;
    let plus = point_derivatives(f, y)?;
    let minus = point_derivatives(f, Quaternion::from_complex(c.complex(), -unit))?;
    let tilde = |d: &crate::jacobian::PointDerivatives| d.q * d.s.conj();
    let (a, b) = (tilde(&plus), tilde(&minus));
    let p = (a + b) * 0.5;
    let q = -(unit.get() * (a - b)) * 0.5;

    let rows = Matrix2x3::new(q.x, q.y, q.z, p.x, p.y, p.z);
    let rhs = Vector2::new(p.w, -q.w);
    let scale = p.norm().max(q.norm());
    let sphere = Sphere {
        alpha: c.alpha,
        beta: c.beta,
    };
    let mut out = SphereSection {
        sphere,
        kind: SectionKind::Empty,
        points: Vec::new(),
        circle: None,
        p,
        q,
    };
    if scale == 0.0 {
        out.kind = SectionKind::WholeSphere;
        return Ok(out);
    }
    let rows = rows / scale;
    let rhs = rhs / scale;
    let svd = rows.svd(true, true);
    let sv = svd.singular_values;
    let rank = sv.iter().filter(|s| **s > SECTION_TOL).count();
    let v_t = svd.v_t.expect("requested V^T");
    let u = svd.u.expect("requested U");
    let tol = SECTION_TOL;
    match rank {
        0 => {
            out.kind = if rhs.norm() <= tol {
                SectionKind::WholeSphere
            } else {
                SectionKind::Empty
            };
        }
        1 => {
            let n: Vector3<f64> = v_t.row(0).transpose();
            let un = u.column(0);
            // consistency of the rank-one system
            let along = un.dot(&rhs);
            if (rhs - un * along).norm() > tol {
                return Ok(out);
            }
            let h = along / sv[0];
            if h.abs() > 1.0 + tol {
                return Ok(out);
            }
            let center = n * h;
            if (h.abs() - 1.0).abs() <= tol {
                out.kind = SectionKind::Point;
                out.points.push(ImaginaryUnit::from_vector(
                    n.x * h.signum(),
                    n.y * h.signum(),
                    n.z * h.signum(),
                )?);
            } else {
                out.kind = SectionKind::Circle;
                out.circle = Some(SectionCircle {
                    center: [center.x, center.y, center.z],
                    axis: [n.x, n.y, n.z],
                    radius: (1.0 - h * h).sqrt(),
                });
            }
        }
        _ => {
            let x0 = svd.solve(&rhs, 0.0).expect("full rank");
            let x0: Vector3<f64> = x0;
            let dir = rows.row(0).transpose().cross(&rows.row(1).transpose()).normalize();
            let x0 = x0 - dir * x0.dot(&dir);
            let r2 = 1.0 - x0.norm_squared();
            if r2.abs() <= tol {
                out.kind = SectionKind::Point;
                out.points.push(ImaginaryUnit::from_vector(x0.x, x0.y, x0.z)?);
            } else if r2 > 0.0 {
                out.kind = SectionKind::TwoPoints;
                for t in [-r2.sqrt(), r2.sqrt()] {
                    let v = x0 + dir * t;
                    out.points.push(ImaginaryUnit::from_vector(v.x, v.y, v.z)?);
                }
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum DegenerateKind {
    Empty,
    Spheres,
    Curve,
}

/// `D_f`, the circularization of `V(F₂) ⊂ D⁺`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DegenerateSet {
    pub kind: DegenerateKind,
    pub spheres: Vec<Sphere>,
    /// Points of `V(F₂)` on a curve, sorted by `(α, β)`.
    pub curve: Vec<[f64; 2]>,
    pub dimension: i8,
    /// Zero-cell counts on 64, 128 and 256 grids.
    pub cell_counts: [usize; 3],
}

impl DegenerateSet {
    /// Distance from `z` to `V(F₂)`: exact for spheres, first-order for curves.
    pub fn distance(&self, f: &SliceFunction, z: Complex64) -> f64 {
        match self.kind {
            DegenerateKind::Empty => f64::INFINITY,
            DegenerateKind::Spheres => self
                .spheres
                .iter()
                .map(|s| (s.z() - z).norm())
                .fold(f64::INFINITY, f64::min),
            DegenerateKind::Curve => linearized_distance(f, z),
        }
    }
}

/// `|F₂(z)| / ‖∂(F₂)/∂(α, β)‖`.
fn linearized_distance(f: &SliceFunction, z: Complex64) -> f64 {
    let (Ok(v), Ok(d)) = (f.stem_value(z), f.derivative_value(z)) else {
        return f64::INFINITY;
    };
    let grad = (d.f1.norm_sqr() + d.f2.norm_sqr()).sqrt();
    if grad == 0.0 {
        return if v.f2.norm() == 0.0 { 0.0 } else { f64::INFINITY };
    }
    v.f2.norm() / grad
}

/// Cells whose corner values change sign in every component of `F₂` that is not
/// identically zero there.
fn zero_cells(f: &SliceFunction, n: usize, opts: &SearchOptions) -> usize {
    let domain = f.domain();
    let w = roots::window(domain, domain.margin());
    let alphas: Vec<f64> = (0..=n)
        .map(|k| w.alpha_min + (w.alpha_max - w.alpha_min) * k as f64 / n as f64)
        .collect();
    let betas: Vec<f64> = (0..=n)
        .map(|k| w.beta_min + (w.beta_max - w.beta_min) * k as f64 / n as f64)
        .collect();
    let zero = 1e-14 * f.scale();
    let vals: Vec<Option<[f64; 4]>> = opts.exec.map((n + 1) * (n + 1), |k| {
        let (a, b) = (alphas[k / (n + 1)], betas[k % (n + 1)]);
        if b <= 0.0 || !domain.contains_complex(a, b) {
            return None;
        }
        f.stem_value(Complex64::new(a, b)).ok().map(|v| v.f2.to_array())
    });
    let counts = opts.exec.map(n * n, |k| {
        let (ia, ib) = (k / n, k % n);
        let idx = |a: usize, b: usize| a * (n + 1) + b;
        let corners = [idx(ia, ib), idx(ia + 1, ib), idx(ia, ib + 1), idx(ia + 1, ib + 1)];
        let mut cv = [[0.0; 4]; 4];
        for (c, i) in corners.iter().enumerate() {
            match vals[*i] {
                Some(v) => cv[c] = v,
                None => return 0usize,
            }
        }
        let mut live = 0;
        for comp in 0..4 {
            let xs = cv.map(|v| v[comp]);
            if xs.iter().all(|x| x.abs() <= zero) {
                continue;
            }
            live += 1;
            let lo = xs.iter().cloned().fold(f64::INFINITY, f64::min);
            let hi = xs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            if lo > zero || hi < -zero {
                return 0;
            }
        }
        usize::from(live > 0)
    });
    counts.into_iter().sum()
}

/// Locates `V(F₂)` in `D⁺` by a grid scan of `|F̂₂|` and Gauss–Newton on `F₂`.
pub fn degenerate_set(f: &SliceFunction, opts: &SearchOptions) -> DegenerateSet {
    let domain = f.domain();
    let window = roots::window(domain, domain.margin());
    let scale = f.scale();
    let keep = |z: Complex64| z.im > 0.0 && domain.is_interior_sample(z.re, z.im);
    let grid = ScalarGrid::scan(window, opts.grid, opts.exec, keep, |z| {
        f.stem_point(z).map_or(f64::NAN, |p| p.f2_hat.norm())
    });
    let seeds = grid.local_minima(256);
    let found: Vec<Option<Complex64>> = opts.exec.map_slice(&seeds, |(z0, _)| {
        // F̂₂ rather than F₂, which also vanishes on the real axis
        let r = gauss_newton_fd(*z0, 60, 1e-15, |z| {
            (z.im > 0.0).then_some(())?;
            let p = f.stem_point(z).ok()?;
            Some(DVector::from_vec(p.f2_hat.to_array().to_vec()))
        })?;
        let z = r.z;
        let ok = z.im > 0.0
            && domain.in_box(z)
            && z.im >= 0.5 * domain.margin()
            && f.stem_value(z).is_ok_and(|v| v.f2.norm() < 1e-10 * scale);
        ok.then_some(z)
    });
    let zeros: Vec<Complex64> = roots::dedupe(found.into_iter().flatten().collect(), 1e-7, |z| *z);
    let cell_counts = [
        zero_cells(f, 64, opts),
        zero_cells(f, 128, opts),
        zero_cells(f, 256, opts),
    ];

    let growth = cell_counts[2] as f64 / cell_counts[1].max(1) as f64;
    let is_curve = if f.is_slice_preserving() {
        !zeros.is_empty()
    } else {
        !zeros.is_empty() && cell_counts[2] >= 16 && growth > 1.5
    };
    if zeros.is_empty() {
        return DegenerateSet {
            kind: DegenerateKind::Empty,
            spheres: Vec::new(),
            curve: Vec::new(),
            dimension: -1,
            cell_counts,
        };
    }
    if is_curve {
        let mut curve: Vec<[f64; 2]> = zeros.iter().map(|z| [z.re, z.im]).collect();
        curve.sort_by(|a, b| a.partial_cmp(b).unwrap());
        return DegenerateSet {
            kind: DegenerateKind::Curve,
            spheres: Vec::new(),
            curve,
            dimension: 3,
            cell_counts,
        };
    }
    let mut spheres: Vec<Sphere> = zeros
        .iter()
        .map(|z| {
            let s = snap(Quaternion::new(z.re, z.im, 0.0, 0.0));
            Sphere { alpha: s.w, beta: s.x }
        })
        .collect();
    spheres.sort_by(|a, b| (a.alpha, a.beta).partial_cmp(&(b.alpha, b.beta)).unwrap());
    DegenerateSet {
        kind: DegenerateKind::Spheres,
        spheres,
        curve: Vec::new(),
        dimension: 2,
        cell_counts,
    }
}

/// Which part of `N_f` a point was attributed to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SingularPart {
    #[serde(rename = "Df")]
    Degenerate,
    #[serde(rename = "Wf")]
    Wing,
    #[serde(rename = "Nf_extra")]
    Extra,
}

/// A root of the singular equations on one slice.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SliceRoot {
    pub point: Quaternion,
    pub part: SingularPart,
    pub distance_df: f64,
    pub distance_wf: f64,
}

/// Result of the slice-by-slice search for `N_f ∖ (D_f ∪ W_f)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExtraSearch {
    pub m: i8,
    /// True when `m_f = 2` follows from `d_f = 2`, `w_f = −1` rather than from a root.
    pub forced: bool,
    pub witnesses: Vec<Quaternion>,
    pub roots: Vec<SliceRoot>,
    pub slices: usize,
    pub grids: Vec<usize>,
}

/// Lower estimate of the distance from `y` to `W_f`.
pub fn wing_distance(f: &SliceFunction, wings: &WingSetReport, y: Quaternion) -> f64 {
    if matches!(wings.kind, WingSetKind::Empty | WingSetKind::WholeDomain) {
        return if wings.kind == WingSetKind::WholeDomain {
            0.0
        } else {
            f64::INFINITY
        };
    }
    let c = y.decompose();
    if c.is_real {
        return f64::INFINITY;
    }
    let Ok(fy) = f.eval(y) else {
        return f64::INFINITY;
    };
    let Some(cs) = wings.nearest_value(fy) else {
        return f64::INFINITY;
    };
    let along = match wing_phi(f, cs, c.complex()) {
        Ok(phi) => (c.unit.get() - phi.get()).norm() * c.beta,
        Err(Error::DegeneratePoint { .. }) => 0.0,
        Err(_) => return f64::INFINITY,
    };
    let lip = point_derivatives(f, y).map_or(0.0, |d| d.q.norm() + d.s.norm());
    let across = if lip > 0.0 {
        (fy - cs).norm() / lip
    } else {
        f64::INFINITY
    };
    along.max(across)
}

/// Quasi-uniform units on `S_H` (Fibonacci lattice).
pub fn sphere_units(n: usize) -> Vec<ImaginaryUnit> {
    let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
    (0..n)
        .map(|k| {
            let z = 1.0 - 2.0 * (k as f64 + 0.5) / n as f64;
            let r = (1.0 - z * z).sqrt();
            let t = golden * k as f64;
            ImaginaryUnit::from_vector(r * t.cos(), r * t.sin(), z).expect("unit length")
        })
        .collect()
}

const SLICE_UNITS: usize = 12;

/// `(⟨q, s⟩, ⟨q, J s⟩)` at `α + Jβ`, and `|q|² + |s|²`.
fn slice_equations(f: &SliceFunction, unit: ImaginaryUnit, z: Complex64) -> Option<([f64; 2], f64)> {
    let p = f.stem_point(z).ok()?;
    let d = f.derivative_value(z).ok()?;
    let q = d.f1 + unit.get() * d.f2;
    let s = p.f2_hat;
    let h = [q.dot(s), q.dot(unit.get() * s)];
    Some((h, q.norm_sqr() + s.norm_sqr()))
}

fn search_slice(f: &SliceFunction, unit: ImaginaryUnit, grid: usize, opts: &SearchOptions) -> Vec<Quaternion> {
    let domain = f.domain();
    let window = roots::window(domain, domain.margin());
    let keep = |z: Complex64| z.im > 0.0 && domain.is_interior_sample(z.re, z.im);
    let g = ScalarGrid::scan(window, grid, opts.exec, keep, |z| {
        slice_equations(f, unit, z).map_or(f64::NAN, |(h, w)| h[0].hypot(h[1]) / w.max(1e-300))
    });
    let seeds = g.local_minima(64);
    let found = opts.exec.map_slice(&seeds, |(z0, _)| {
        let w0 = slice_equations(f, unit, *z0)?.1.max(1e-300);
        let r = gauss_newton_fd(*z0, 60, 1e-14, |z| {
            let (h, _) = slice_equations(f, unit, z)?;
            Some(DVector::from_vec(vec![h[0] / w0, h[1] / w0]))
        })?;
        let z = r.z;
        if !(z.im > 0.0 && domain.in_box(z)) {
            return None;
        }
        let (h, w) = slice_equations(f, unit, z)?;
        (h[0].hypot(h[1]) <= 1e-10 * w).then(|| Quaternion::from_complex(z, unit))
    });
    let mut pts: Vec<Quaternion> = Vec::new();
    for p in found.into_iter().flatten() {
        if !pts.iter().any(|o| (*o - p).norm() < 1e-7 * (1.0 + p.norm())) {
            pts.push(p);
        }
    }
    pts
}

/// Searches each slice for solutions of the singular equations away from
/// `D_f ∪ W_f`.
pub fn extra_singular_dimension(
    f: &SliceFunction,
    dset: &DegenerateSet,
    wings: &WingSetReport,
    opts: &SearchOptions,
) -> ExtraSearch {
    let mut units = sphere_units(SLICE_UNITS);
    if let Some(u) = f.classify().preserved_slice {
        units.push(u);
        units.push(-u);
    }
    let base = (opts.grid / 3).max(48);
    // on a product domain, isolated degenerate spheres without wings force m_f = 2
    let forced_case =
        f.domain().is_product() && dset.dimension == 2 && wings.count() == 0 && wings.kind == WingSetKind::Empty;
    let mut grids = vec![base];
    let mut out = run_extra(f, dset, wings, &units, base, opts);
    if out.0.is_empty() && forced_case {
        let dense = 2 * base;
        grids.push(dense);
        let mut more = sphere_units(3 * SLICE_UNITS);
        more.extend(units.iter().copied());
        out = run_extra(f, dset, wings, &more, dense, opts);
    }
    let (witnesses, roots) = out;
    let found = !witnesses.is_empty();
    ExtraSearch {
        m: if found || forced_case { 2 } else { -1 },
        forced: !found && forced_case,
        witnesses,
        roots,
        slices: units.len(),
        grids,
    }
}

fn run_extra(
    f: &SliceFunction,
    dset: &DegenerateSet,
    wings: &WingSetReport,
    units: &[ImaginaryUnit],
    grid: usize,
    opts: &SearchOptions,
) -> (Vec<Quaternion>, Vec<SliceRoot>) {
    let mut roots = Vec::new();
    let mut witnesses = Vec::new();
    for unit in units {
        for y in search_slice(f, *unit, grid, opts) {
            let root = classify_point(f, dset, wings, y);
            if root.part == SingularPart::Extra {
                witnesses.push(y);
            }
            roots.push(root);
        }
    }
    witnesses.sort_by(|a, b| a.to_array().partial_cmp(&b.to_array()).unwrap());
    (witnesses, roots)
}

/// Attributes a point of `N_f` to `D_f`, `W_f` or the rest.
pub fn classify_point(f: &SliceFunction, dset: &DegenerateSet, wings: &WingSetReport, y: Quaternion) -> SliceRoot {
    let c = y.decompose();
    let dd = dset.distance(f, c.complex());
    let dw = wing_distance(f, wings, y);
    let thresh = 1e-5 * y.norm().max(1.0);
    let part = if dd <= thresh {
        SingularPart::Degenerate
    } else if dw <= thresh {
        SingularPart::Wing
    } else {
        SingularPart::Extra
    };
    SliceRoot {
        point: y,
        part,
        distance_df: dd,
        distance_wf: dw,
    }
}

/// `(d_f, w_f, m_f)` with `n_f = max`, plus the data behind each entry.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DimensionTriple {
    pub d: i8,
    pub w: i8,
    pub m: i8,
    pub n: i8,
    /// Slice-constant `f`: `N_f` is the whole domain and `d`, `w`, `m` are not defined.
    pub whole_domain: bool,
    pub admissible: bool,
    pub degenerate: Option<DegenerateSet>,
    pub wings: Option<WingSetReport>,
    pub extra: Option<ExtraSearch>,
}

impl DimensionTriple {
    pub fn values(&self) -> (i8, i8, i8, i8) {
        (self.d, self.w, self.m, self.n)
    }
}

/// The eleven possible triples on a product domain.
pub const PRODUCT_TRIPLES: [(i8, i8, i8); 11] = [
    (-1, -1, -1),
    (-1, -1, 2),
    (-1, 2, -1),
    (-1, 2, 2),
    (-1, 3, -1),
    (-1, 3, 2),
    (2, -1, 2),
    (2, 2, -1),
    (2, 2, 2),
    (3, -1, -1),
    (3, -1, 2),
];

/// Possible triples on a slice domain: no wings, and `N_f = Cl(D_f)` is allowed.
pub const SLICE_TRIPLES: [(i8, i8, i8); 6] = [
    (-1, -1, -1),
    (-1, -1, 2),
    (2, -1, -1),
    (2, -1, 2),
    (3, -1, -1),
    (3, -1, 2),
];

pub fn is_admissible(domain: &SymmetricDomain, t: (i8, i8, i8)) -> bool {
    if domain.is_product() {
        PRODUCT_TRIPLES.contains(&t)
    } else {
        SLICE_TRIPLES.contains(&t)
    }
}

pub fn dimension_triple(f: &SliceFunction, opts: &SearchOptions) -> DimensionTriple {
    if f.is_slice_constant() {
        return DimensionTriple {
            d: 4,
            w: 4,
            m: 4,
            n: 4,
            whole_domain: true,
            admissible: true,
            degenerate: None,
            wings: None,
            extra: None,
        };
    }
    let dset = degenerate_set(f, opts);
    let wings = find_wings(f);
    let w = match wings.kind {
        WingSetKind::Empty => -1,
        WingSetKind::One | WingSetKind::Two => 2,
        WingSetKind::Circle | WingSetKind::WholeDomain => 3,
    };
    let extra = extra_singular_dimension(f, &dset, &wings, opts);
    let (d, m) = (dset.dimension, extra.m);
    DimensionTriple {
        d,
        w,
        m,
        n: d.max(w).max(m),
        whole_domain: false,
        admissible: is_admissible(f.domain(), (d, w, m)),
        degenerate: Some(dset),
        wings: Some(wings),
        extra: Some(extra),
    }
}

/// A point of `N_f` with its determinant, for export.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SingularSample {
    pub point: Quaternion,
    pub det: f64,
    pub part: SingularPart,
}

/// Point cloud of `N_f`: sphere or curve points of `D_f` spread over several
/// units, wing samples, and the slice-search roots outside both.
pub fn sample_singular(f: &SliceFunction, opts: &SearchOptions) -> Result<Vec<SingularSample>> {
    if f.is_slice_constant() {
        return Err(Error::SliceConstant);
    }
    let t = dimension_triple(f, opts);
    let dset = t.degenerate.expect("non-constant");
    let wings = t.wings.expect("non-constant");
    let extra = t.extra.expect("non-constant");
    let units = sphere_units(24);
    let mut pts: Vec<(Quaternion, SingularPart)> = Vec::new();
    let zs: Vec<Complex64> = match dset.kind {
        DegenerateKind::Spheres => dset.spheres.iter().map(|s| s.z()).collect(),
        DegenerateKind::Curve => dset.curve.iter().map(|p| Complex64::new(p[0], p[1])).collect(),
        DegenerateKind::Empty => Vec::new(),
    };
    for z in zs {
        for u in &units {
            pts.push((Quaternion::from_complex(z, *u), SingularPart::Degenerate));
        }
    }
    match wings.kind {
        WingSetKind::Circle => {
            let c = wings.circle.expect("circle data");
            for k in 0..8 {
                let v = c.at(k as f64 * std::f64::consts::FRAC_PI_4);
                let wing = crate::fibers::Wing::build(f, v, 12);
                pts.extend(wing.samples.iter().map(|s| (s.point(), SingularPart::Wing)));
            }
        }
        WingSetKind::One | WingSetKind::Two => {
            for v in &wings.values {
                let wing = crate::fibers::Wing::build(f, *v, 16);
                pts.extend(wing.samples.iter().map(|s| (s.point(), SingularPart::Wing)));
            }
        }
        _ => {}
    }
    pts.extend(
        extra
            .roots
            .iter()
            .filter(|r| r.part == SingularPart::Extra)
            .map(|r| (r.point, SingularPart::Extra)),
    );
    Ok(pts
        .into_iter()
        .filter_map(|(p, part)| {
            let det = crate::jacobian::jacobian_det(f, p).ok()?;
            Some(SingularSample { point: p, det, part })
        })
        .collect())
}
