//! Acceptance criteria, one PASS/FAIL line each. Runs without the libtest harness
//! so the report is always printed.

use std::time::Instant;

use nalgebra::Matrix4;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use slicereg::demo;
use slicereg::domain::BoundingBox;
use slicereg::fibers::{fiber_tolerance, find_wings, solve_fiber, total_multiplicity, wing_phi, WingSetKind};
use slicereg::jacobian::{finite_difference_jacobian, jacobian_det, jacobian_matrix};
use slicereg::registry;
use slicereg::roots::SearchOptions;
use slicereg::singular::{dimension_triple, in_singular_set};
use slicereg::stem::poly;
use slicereg::{ImaginaryUnit, Quaternion, SliceFunction, StemFunction, SymmetricDomain};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn rng() -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(42)
}

fn unit(rng: &mut impl Rng) -> ImaginaryUnit {
    loop {
        let v: [f64; 3] = std::array::from_fn(|_| rng.random_range(-1.0..1.0));
        let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        if n > 0.1 && n < 1.0 {
            return ImaginaryUnit::from_vector(v[0] / n, v[1] / n, v[2] / n).unwrap();
        }
    }
}

fn quat(rng: &mut impl Rng, r: f64) -> Quaternion {
    Quaternion::new(
        rng.random_range(-r..r),
        rng.random_range(-r..r),
        rng.random_range(-r..r),
        rng.random_range(-r..r),
    )
}

/// A non-real point with `|α| ≤ 2`, `0.1 ≤ β ≤ 2`.
fn point(rng: &mut impl Rng) -> Quaternion {
    let z = Complex64::new(rng.random_range(-2.0..2.0), rng.random_range(0.1..2.0));
    Quaternion::from_complex(z, unit(rng))
}

fn check(cond: bool, msg: String) -> Outcome {
    if cond {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let rows = demo::run_table(&SearchOptions::default()).map_err(|e| e.to_string())?;
    let secs = start.elapsed().as_secs_f64();
    let bad: Vec<String> = rows
        .iter()
        .filter(|r| !r.passed())
        .map(|r| {
            format!(
                "row {} {}: expected {:?} got {:?}",
                r.row, r.name, r.expected, r.computed
            )
        })
        .collect();
    let witnessed: Vec<u8> = rows
        .iter()
        .filter(|r| r.witness.as_ref().is_some_and(|w| w.ok))
        .map(|r| r.row)
        .collect();
    check(
        bad.is_empty() && rows.len() == 11 && witnessed == vec![2, 4, 6, 7, 9, 11] && secs <= 300.0,
        format!("11 rows, mismatches {bad:?}, witness p=i confirmed in rows {witnessed:?}, {secs:.1}s"),
    )
}

fn criterion_2() -> Outcome {
    let mut rng = rng();
    let mut worst_direct: f64 = 0.0;
    let mut worst_fd: f64 = 0.0;
    let mut worst_orient: f64 = 0.0;
    let mut bad_ranks = Vec::new();
    for e in registry::table() {
        let f = e.function().unwrap();
        let s4 = f.scale().powi(4);
        let mut pts: Vec<Quaternion> = (0..1000).map(|_| point(&mut rng)).collect();
        // a few points of N_f as well
        pts.push(Quaternion::new(0.3, -1.2, 0.0, 0.0));
        pts.push(Quaternion::new(0.0, 0.0, 1.0, 0.0));
        pts.push(Quaternion::new(0.0, 0.6, 0.8, 0.0));
        for y in pts {
            let m = jacobian_matrix(&f, y).unwrap();
            let det = jacobian_det(&f, y).unwrap();
            let direct = m.det_direct();
            let scale = det.abs().max(direct.abs());
            if scale > 1e-12 * s4 {
                worst_direct = worst_direct.max((det - direct).abs() / scale);
                let fd = finite_difference_jacobian(&f, y).unwrap().determinant();
                worst_fd = worst_fd.max((det - fd).abs() / scale.max(fd.abs()));
            }
            worst_orient = worst_orient.min(direct / s4);
            let r = m.rank();
            if ![0, 2, 4].contains(&r) {
                bad_ranks.push((e.name.clone(), y, r));
            }
        }
    }
    // real points on slice domains
    for name in ["x", "f1", "f7", "x2", "x3p3x"] {
        let f = registry::function(name).unwrap().with_domain(SymmetricDomain::whole());
        for _ in 0..200 {
            let y = Quaternion::real(rng.random_range(-3.0..3.0));
            let r = jacobian_matrix(&f, y).unwrap().rank();
            if ![0, 4].contains(&r) {
                bad_ranks.push((name.to_string(), y, r));
            }
        }
        let r = jacobian_matrix(
            &registry::function("x2").unwrap().with_domain(SymmetricDomain::whole()),
            Quaternion::ZERO,
        )
        .unwrap()
        .rank();
        if r != 0 {
            bad_ranks.push(("x2".into(), Quaternion::ZERO, r));
        }
    }
    check(
        worst_direct < 1e-8 && worst_fd < 1e-4 && worst_orient >= -1e-9 && bad_ranks.is_empty(),
        format!(
            "max rel err vs direct {worst_direct:.2e}, vs finite differences {worst_fd:.2e}, min det/scale^4 {worst_orient:.2e}, bad ranks {bad_ranks:?}"
        ),
    )
}

fn criterion_3() -> Outcome {
    let f = registry::function("xminv").unwrap();
    let det = jacobian_det(&f, Quaternion::real(3.0)).unwrap();
    let expected = (10.0f64 / 9.0).powi(4);
    let rel = ((det - expected) / expected).abs();
    check(
        rel < 1e-12,
        format!("det J(3) = {det:.15}, (10/9)^4 = {expected:.15}, rel err {rel:.1e}"),
    )
}

fn phi5(z: Complex64) -> Quaternion {
    let (a, b) = (z.re, z.im);
    let d = 1.0 + a * a + b * b;
    Quaternion::new(0.0, (1.0 - a * a - b * b) / d, -2.0 * b / d, 2.0 * a / d)
}

fn criterion_4() -> Outcome {
    let mut rng = rng();
    let f5 = registry::function("f5").unwrap();
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let z = Complex64::new(rng.random_range(-4.0..4.0), rng.random_range(0.01..4.0));
        let phi = wing_phi(&f5, Quaternion::ZERO, z).map_err(|e| e.to_string())?;
        worst = worst.max((phi.get() - phi5(z)).norm());
    }
    let w6 = find_wings(&registry::function("f6").unwrap());
    let six_ok = w6.kind == WingSetKind::Two && w6.values == vec![Quaternion::ZERO, Quaternion::J];
    let w3 = find_wings(&registry::function("f3").unwrap());
    let mut circle_err: f64 = 0.0;
    for c in &w3.values {
        circle_err = circle_err.max((c.norm() - 1.0).abs()).max(c.w.abs()).max(c.x.abs());
    }
    check(
        worst < 1e-9 && six_ok && w3.kind == WingSetKind::Circle && !w3.values.is_empty() && circle_err < 1e-9,
        format!(
            "f5 phi max err {worst:.1e}; f6 wings {:?} {:?}; f3 {:?} with {} values, max deviation {circle_err:.1e}",
            w6.kind,
            w6.values,
            w3.kind,
            w3.values.len()
        ),
    )
}

/// Every point the solver reports maps to `c`.
fn fiber_residual(f: &SliceFunction, d: &slicereg::fibers::FiberDescription) -> f64 {
    let c = d.value;
    let mut worst: f64 = 0.0;
    let mut at = |x: Quaternion| worst = worst.max((f.eval(x).unwrap() - c).norm() / fiber_tolerance(c) * 1e-8);
    for p in &d.isolated_points {
        at(*p);
    }
    for r in &d.real_zeros {
        at(Quaternion::real(*r));
    }
    for s in d.spherical_zeros.iter().chain(&d.degenerate_spheres) {
        for u in [
            ImaginaryUnit::i(),
            ImaginaryUnit::j(),
            ImaginaryUnit::new(Quaternion::new(0.0, 1.0, -2.0, 0.5)).unwrap(),
        ] {
            at(s.point(u));
        }
    }
    if let Some(w) = &d.wing {
        for s in &w.samples {
            at(s.point());
        }
    }
    worst
}

fn criterion_5() -> Outcome {
    let opts = SearchOptions::default();
    let f2 = registry::function("f2").unwrap();
    let mut notes = Vec::new();
    let mut ok = true;
    let mut residual: f64 = 0.0;

    let d = solve_fiber(&f2, Quaternion::ZERO, &opts);
    residual = residual.max(fiber_residual(&f2, &d));
    let wing_ok = d.discrete_count() == 0
        && d.wing
            .as_ref()
            .is_some_and(|w| w.planar && w.unit.map(|u| u.get()) == Some(-Quaternion::I));
    ok &= wing_ok;
    notes.push(format!("f2^-1(0) planar wing C_-i: {wing_ok}"));

    let mut rng = rng();
    let mut agree = 0;
    for k in 0..20 {
        let mut c = quat(&mut rng, 1.0);
        // keep the preimage inside the search window
        c.x = rng.random_range(0.1..1.0) * if k % 2 == 0 { 1.0 } else { -1.0 };
        let d = solve_fiber(&f2, c, &opts);
        residual = residual.max(fiber_residual(&f2, &d));
        let expect_single = c.x > 0.0;
        let got = (
            d.isolated_points.len(),
            d.wing.is_none() && d.spherical_zeros.is_empty() && d.real_zeros.is_empty(),
        );
        if got == (usize::from(expect_single), true) {
            agree += 1;
        }
    }
    ok &= agree == 20;
    notes.push(format!("{agree}/20 random c classified as c1 > 0 ⇔ singleton"));

    let f5s = registry::function("f5star").unwrap();
    let d = solve_fiber(&f5s, Quaternion::ZERO, &opts);
    residual = residual.max(fiber_residual(&f5s, &d));
    let sphere_ok = d.degenerate_spheres.len() == 1
        && (d.degenerate_spheres[0].alpha.abs() + (d.degenerate_spheres[0].beta - 1.0).abs()) < 1e-9;
    let wing_err = d.wing.as_ref().map_or(f64::INFINITY, |w| {
        w.samples
            .iter()
            .map(|s| (s.phi.get() - phi5(Complex64::new(s.alpha, s.beta))).norm())
            .fold(0.0, f64::max)
    });
    ok &= sphere_ok && wing_err < 1e-9;
    notes.push(format!(
        "(f5*)^-1(0): sphere S_i {sphere_ok}, wing = W_f5,0 (max phi err {wing_err:.1e})"
    ));
    ok &= residual < 1e-8;
    notes.push(format!("max fiber residual {residual:.1e}"));
    check(ok, notes.join("; "))
}

fn criterion_6() -> Outcome {
    let mut rng = rng();
    let mut exact = true;
    let mut worst: f64 = 0.0;
    let hr = SymmetricDomain::whole();
    for _ in 0..20 {
        let a: Vec<Quaternion> = (0..=rng.random_range(0..=5)).map(|_| quat(&mut rng, 2.0)).collect();
        let b: Vec<Quaternion> = (0..=rng.random_range(0..=5)).map(|_| quat(&mut rng, 2.0)).collect();
        let fa = SliceFunction::new(StemFunction::poly(a.clone()), hr.clone());
        let fb = SliceFunction::new(StemFunction::poly(b.clone()), hr.clone());
        let prod = fa.slice_product(&fb).unwrap();
        let mut conv = vec![Quaternion::ZERO; a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                conv[i + j] += *x * *y;
            }
        }
        let conv = poly::trim(conv);
        exact &= prod.stem().as_poly() == Some(&conv[..]);
        for _ in 0..10 {
            let x = quat(&mut rng, 1.5);
            let s = x.decompose();
            let (va, vb) = (fa.stem_value(s.complex()).unwrap(), fb.stem_value(s.complex()).unwrap());
            let u = s.unit.get();
            let oracle = (va.f1 * vb.f1 - va.f2 * vb.f2) + u * (va.f1 * vb.f2 + va.f2 * vb.f1);
            let got = prod.eval(x).unwrap();
            worst = worst.max((got - oracle).norm() / oracle.norm().max(1e-300));
            // f(x) g(f(x)⁻¹ x f(x)) where f(x) ≠ 0
            let fx = fa.eval(x).unwrap();
            if let Some(inv) = fx.inv() {
                let conjugated = fb.eval(inv * x * fx).unwrap();
                let other = fx * conjugated;
                worst = worst.max((got - other).norm() / other.norm().max(1e-300));
            }
        }
    }
    check(
        exact && worst < 1e-10,
        format!("coefficients exact: {exact}; max pointwise rel err {worst:.1e}"),
    )
}

/// Largest `|f|` on the sphere `|x − y| = r`: samples, then local ascent.
fn boundary_max(f: &SliceFunction, y: Quaternion, r: f64, rng: &mut impl Rng) -> f64 {
    let on = |d: Quaternion| y + d * (r / d.norm());
    let mut pts: Vec<(f64, Quaternion)> = (0..10_000)
        .map(|_| {
            let d = loop {
                let d = quat(rng, 1.0);
                if d.norm() > 1e-3 {
                    break d;
                }
            };
            (f.eval(on(d)).unwrap().norm(), d)
        })
        .collect();
    pts.sort_by(|a, b| b.0.total_cmp(&a.0));
    let mut best = pts[0].0;
    for (mut v, mut d) in pts.into_iter().take(5) {
        let mut step = 0.1;
        while step > 1e-9 {
            let mut moved = false;
            for e in [Quaternion::ONE, Quaternion::I, Quaternion::J, Quaternion::K] {
                for s in [step, -step] {
                    let nd = d + e * s;
                    let nv = f.eval(on(nd)).unwrap().norm();
                    if nv > v {
                        (v, d, moved) = (nv, nd, true);
                    }
                }
            }
            if !moved {
                step *= 0.5;
            }
        }
        best = best.max(v);
    }
    best
}

fn criterion_7() -> Outcome {
    let mut rng = rng();
    let mut worst: f64 = f64::NEG_INFINITY;
    for name in ["f2", "f3", "f5", "f6"] {
        let f = registry::function(name).unwrap();
        for _ in 0..10 {
            let y = point(&mut rng);
            let beta = y.im().norm();
            let r = beta * rng.random_range(0.2..0.9);
            let inner = (0..10_000)
                .map(|_| {
                    let d = loop {
                        let d = quat(&mut rng, 1.0);
                        if d.norm() < 1.0 {
                            break d;
                        }
                    };
                    f.eval(y + d * r).unwrap().norm()
                })
                .fold(0.0, f64::max);
            let outer = boundary_max(&f, y, r, &mut rng);
            worst = worst.max((inner - outer) / f.scale());
        }
    }
    let g = registry::function("g_recip").unwrap();
    let mut on_wing: f64 = 0.0;
    for _ in 0..100 {
        let z = Complex64::new(rng.random_range(-3.0..3.0), rng.random_range(0.05..3.0));
        let x = Quaternion::from_complex(z, -ImaginaryUnit::i());
        on_wing = on_wing.max((g.eval(x).unwrap().norm() - 1.0).abs());
    }
    let mut off_max: f64 = 0.0;
    for _ in 0..1000 {
        off_max = off_max.max(g.eval(point(&mut rng)).unwrap().norm());
    }
    check(
        worst <= 1e-6 && on_wing < 1e-8 && off_max < 1.0,
        format!(
            "max (interior − boundary)/scale {worst:.2e}; |g| − 1 on C_-i {on_wing:.1e}; max |g| elsewhere {off_max:.6}"
        ),
    )
}

fn criterion_8() -> Outcome {
    let mut rng = rng();
    let opts = SearchOptions {
        grid: 200,
        ..SearchOptions::default()
    };
    let mut notes = Vec::new();
    let mut ok = true;
    for name in ["f1", "eta_exp", "f7", "eta_q3", "x3p3x"] {
        let f = registry::function(name).unwrap();
        // regular points: bi-Lipschitz on a ball of radius 1e-2
        let mut regular = 0;
        while regular < 10 {
            let y = point(&mut rng);
            let m = jacobian_matrix(&f, y).unwrap();
            let smin = m.singular_values().iter().cloned().fold(f64::INFINITY, f64::min);
            if smin < 1e-3 * m.norm() {
                continue;
            }
            regular += 1;
            let std: Matrix4<f64> = m.standard();
            let smin = std.svd(false, false).singular_values.min();
            for _ in 0..1000 {
                let a = y + quat(&mut rng, 1e-2 / 2.0);
                let b = y + quat(&mut rng, 1e-2 / 2.0);
                let (fa, fb) = (f.eval(a).unwrap(), f.eval(b).unwrap());
                if (fa - fb).norm() < 0.1 * smin * (a - b).norm() {
                    ok = false;
                    notes.push(format!("{name}: not injective near {y}"));
                }
            }
        }
        // singular points off D_f ∪ W_f: two nearby points with one image
        let t = dimension_triple(&f, &opts);
        let witnesses = t.extra.map(|e| e.witnesses).unwrap_or_default();
        let mut shown = 0;
        let mut tried = 0;
        for y in witnesses.iter().filter(|y| y.norm() < 3.0).take(5) {
            tried += 1;
            if !in_singular_set(&f, *y, 1e-6).unwrap() {
                continue;
            }
            let s = y.decompose();
            // tight enough that the grid separates preimages on nearby spheres
            let bbox = BoundingBox::around(s.alpha, s.beta, 0.06);
            let local = f.with_domain(f.domain().clone().with_bbox(bbox));
            let y2 = *y + quat(&mut rng, 0.02);
            let c = f.eval(y2).unwrap();
            let d = solve_fiber(&local, c, &opts);
            let near: Vec<Quaternion> = d
                .isolated_points
                .iter()
                .copied()
                .filter(|p| (*p - *y).norm() < 0.2)
                .collect();
            let pair = near.iter().enumerate().any(|(i, a)| {
                near[..i].iter().any(|b| {
                    (*a - *b).norm() > 1e-6 && (local.eval(*a).unwrap() - local.eval(*b).unwrap()).norm() < 1e-6
                })
            });
            if pair {
                shown += 1;
            }
        }
        ok &= tried > 0 && shown == tried;
        notes.push(format!(
            "{name}: 10 regular balls, {shown}/{tried} singular points not locally injective"
        ));
    }
    check(ok, notes.join("; "))
}

fn criterion_9() -> Outcome {
    let r = demo::univalence_demo(1000).map_err(|e| e.to_string())?;
    check(
        r.passed(),
        format!(
            "f(2) = {}, f(-1/2) = {}, min separations {:?}, inner max {:.6} < 15/4 ≤ outer min {:.6}, det J(3) = {:.6}, {} points of S_H singular: {}",
            r.f_two, r.f_minus_half, r.min_separation, r.inner_max, r.outer_min, r.det_at_three, r.singular_samples, r.singular_ok
        ),
    )
}

fn criterion_10() -> Outcome {
    let sq = registry::function("sq_whole").unwrap();
    let m_sq = total_multiplicity(&sq, Quaternion::ZERO).map_err(|e| e.to_string())?;
    let f1 = registry::function("f1").unwrap();
    let m1 = total_multiplicity(&f1, Quaternion::I).map_err(|e| e.to_string())?;
    let mut rng = rng();
    let mut min_g = f64::INFINITY;
    for _ in 0..100 {
        let y = unit(&mut rng).get();
        min_g = min_g.min(poly::real_eval_quaternion(&m1.quotient, y).norm());
    }
    check(
        m_sq.count == 2 && m1.count >= 2 && min_g > 1e-8,
        format!(
            "m(x^2, 0) = {}; m(f1, i) = {}; min |g| on S_i {min_g:.3e}",
            m_sq.count, m1.count
        ),
    )
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("table reproduction", criterion_1),
        ("Jacobian formula consistency", criterion_2),
        ("real-point determinant", criterion_3),
        ("wing geometry", criterion_4),
        ("fiber solver", criterion_5),
        ("slice-product oracle", criterion_6),
        ("maximum modulus", criterion_7),
        ("branch set equals singular set", criterion_8),
        ("univalence demo", criterion_9),
        ("multiplicity", criterion_10),
    ];
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(msg) => println!("PASS criterion {:>2} ({name}): {msg} [{secs:.1}s]", k + 1),
            Err(msg) => {
                failed += 1;
                println!("FAIL criterion {:>2} ({name}): {msg} [{secs:.1}s]", k + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
