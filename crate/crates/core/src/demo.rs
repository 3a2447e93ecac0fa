//! Reproduction of the dimension-triple table and the boundary-univalence example
//! for `f(x) = x − x⁻¹` on `{1/3 < |y| < 4}`.

use std::time::Instant;

use serde::Serialize;

use crate::error::Result;
use crate::jacobian::jacobian_det;
use crate::quaternion::Quaternion;
use crate::registry;
use crate::roots::SearchOptions;
use crate::singular::{classify_point, dimension_triple, in_singular_set, sphere_units, DimensionTriple};
use crate::slicefn::SliceFunction;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WitnessCheck {
    pub point: Quaternion,
    pub singular: bool,
    pub distance: f64,
    pub ok: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TableRow {
    pub row: u8,
    pub name: String,
    pub expected: [i8; 4],
    pub computed: [i8; 4],
    pub forced_m: bool,
    pub witness: Option<WitnessCheck>,
    pub seconds: f64,
}

impl TableRow {
    pub fn passed(&self) -> bool {
        self.expected == self.computed && self.witness.as_ref().is_none_or(|w| w.ok)
    }
}

/// Checks that `y` is singular and more than `1e−3` away from `D_f ∪ W_f`.
pub fn check_witness(f: &SliceFunction, t: &DimensionTriple, y: Quaternion, tol: f64) -> Result<WitnessCheck> {
    let singular = in_singular_set(f, y, tol)?;
    let distance = match (&t.degenerate, &t.wings) {
        (Some(d), Some(w)) => {
            let r = classify_point(f, d, w, y);
            r.distance_df.min(r.distance_wf)
        }
        _ => 0.0,
    };
    Ok(WitnessCheck {
        point: y,
        singular,
        distance,
        ok: singular && distance > 1e-3,
    })
}

/// Computes every table row. Rows are processed one at a time; each search is
/// internally parallel.
pub fn run_table(opts: &SearchOptions) -> Result<Vec<TableRow>> {
    let mut out = Vec::new();
    for e in registry::table() {
        let start = Instant::now();
        let f = e.function()?;
        let t = dimension_triple(&f, opts);
        let witness = e.witness.map(|y| check_witness(&f, &t, y, opts.tol)).transpose()?;
        out.push(TableRow {
            row: e.row.expect("table entry"),
            name: e.name.clone(),
            expected: e.expected.expect("table entry"),
            computed: [t.d, t.w, t.m, t.n],
            forced_m: t.extra.as_ref().is_some_and(|x| x.forced),
            witness,
            seconds: start.elapsed().as_secs_f64(),
        });
    }
    Ok(out)
}

/// Outcome of each assertion of the univalence example.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UnivalenceReport {
    pub f_two: Quaternion,
    pub f_minus_half: Quaternion,
    pub values_ok: bool,
    /// Smallest distance between images of distinct sampled boundary points, per shell.
    pub min_separation: [f64; 2],
    /// Largest deviation of `f(r e^{It})` from `f_r(t)`.
    pub parametrization_error: f64,
    pub inner_max: f64,
    pub outer_min: f64,
    pub injective_ok: bool,
    pub det_at_three: f64,
    pub det_expected: f64,
    pub det_ok: bool,
    pub singular_samples: usize,
    pub singular_ok: bool,
}

impl UnivalenceReport {
    pub fn passed(&self) -> bool {
        self.values_ok && self.injective_ok && self.det_ok && self.singular_ok
    }
}

/// `f_r(t) = (r − r⁻¹) cos t + i (r + r⁻¹) sin t`.
pub fn boundary_curve(r: f64, t: f64) -> Quaternion {
    Quaternion::new((r - 1.0 / r) * t.cos(), (r + 1.0 / r) * t.sin(), 0.0, 0.0)
}

pub fn univalence_demo(samples: usize) -> Result<UnivalenceReport> {
    let f = registry::function("xminv")?;
    let f_two = f.eval(Quaternion::real(2.0))?;
    let f_minus_half = f.eval(Quaternion::real(-0.5))?;
    let values_ok = f_two == Quaternion::real(1.5) && f_minus_half == Quaternion::real(1.5);

    let n = samples.max(8);
    let ts: Vec<f64> = (0..n).map(|k| std::f64::consts::TAU * k as f64 / n as f64).collect();
    let mut min_separation = [f64::INFINITY; 2];
    let mut parametrization_error: f64 = 0.0;
    let mut inner_max: f64 = 0.0;
    let mut outer_min = f64::INFINITY;
    let units = sphere_units(16);
    for (shell, r) in [1.0 / 3.0, 4.0].into_iter().enumerate() {
        let mut pts = Vec::with_capacity(n);
        for t in &ts {
            let x = Quaternion::new(r * t.cos(), r * t.sin(), 0.0, 0.0);
            let v = f.eval(x)?;
            parametrization_error = parametrization_error.max((v - boundary_curve(r, *t)).norm());
            pts.push(v);
        }
        for a in 0..n {
            for b in 0..a {
                min_separation[shell] = min_separation[shell].min((pts[a] - pts[b]).norm());
            }
        }
        // the rest of the shell: other slices
        for u in &units {
            for t in ts.iter().step_by(8) {
                let z = num_complex::Complex64::from_polar(r, *t);
                let v = f.eval(Quaternion::from_complex(z, *u))?.norm();
                if shell == 0 {
                    inner_max = inner_max.max(v);
                } else {
                    outer_min = outer_min.min(v);
                }
            }
        }
        let extremes = pts.iter().map(|p| p.norm());
        if shell == 0 {
            inner_max = extremes.fold(inner_max, f64::max);
        } else {
            outer_min = extremes.fold(outer_min, f64::min);
        }
    }
    let injective_ok = min_separation.iter().all(|d| *d > 0.0)
        && parametrization_error < 1e-12
        && inner_max <= 10.0 / 3.0 + 1e-12
        && 10.0 / 3.0 < 15.0 / 4.0
        && outer_min >= 15.0 / 4.0 - 1e-12;

    let det_at_three = jacobian_det(&f, Quaternion::real(3.0))?;
    let det_expected = (10.0f64 / 9.0).powi(4);
    let det_ok = ((det_at_three - det_expected) / det_expected).abs() < 1e-12 && det_at_three != 0.0;

    let mut singular_samples = 0;
    let mut singular_ok = true;
    for u in sphere_units(100) {
        singular_samples += 1;
        singular_ok &= in_singular_set(&f, u.get(), 1e-9)?;
    }
    Ok(UnivalenceReport {
        f_two,
        f_minus_half,
        values_ok,
        min_separation,
        parametrization_error,
        inner_max,
        outer_min,
        injective_ok,
        det_at_three,
        det_expected,
        det_ok,
        singular_samples,
        singular_ok,
    })
}
