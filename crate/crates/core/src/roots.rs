//! Grid scans and Newton-type refinement on the `(α, β)` half plane.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::domain::{BoundingBox, SymmetricDomain};
use crate::exec::Exec;

/// Knobs shared by the grid searches.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchOptions {
    /// Grid points per axis.
    pub grid: usize,
    pub exec: Exec,
    pub seed: u64,
    /// Relative tolerance for singular-set membership.
    pub tol: f64,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self {
            grid: 400,
            exec: Exec::default(),
            seed: 42,
            tol: 1e-9,
        }
    }
}

/// Scalar samples on a rectangular grid; `NaN` marks points outside the domain.
#[derive(Debug, Clone)]
pub struct ScalarGrid {
    pub alphas: Vec<f64>,
    pub betas: Vec<f64>,
    pub values: Vec<f64>,
}

fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![0.5 * (a + b)];
    }
    (0..n).map(|k| a + (b - a) * k as f64 / (n - 1) as f64).collect()
}

/// Grid window over `D≥` inside the domain's effective box: `β` runs from
/// `max(β_min, β_floor)` up.
pub fn window(domain: &SymmetricDomain, beta_floor: f64) -> BoundingBox {
    let b = domain.effective_box();
    BoundingBox {
        beta_min: b.beta_min.max(beta_floor),
        ..b
    }
}

impl ScalarGrid {
    /// Evaluates `f` on an `n × n` grid over `bbox`, skipping points for which
    /// `keep` is false.
    pub fn scan<K, F>(bbox: BoundingBox, n: usize, exec: Exec, keep: K, f: F) -> Self
    where
        K: Fn(Complex64) -> bool + Sync + Send,
        F: Fn(Complex64) -> f64 + Sync + Send,
    {
        let alphas = linspace(bbox.alpha_min, bbox.alpha_max, n);
        let betas = linspace(bbox.beta_min, bbox.beta_max, n);
        let values = exec.map(n * n, |k| {
            let z = Complex64::new(alphas[k / n], betas[k % n]);
            if keep(z) {
                let v = f(z);
                if v.is_finite() {
                    v
                } else {
                    f64::NAN
                }
            } else {
                f64::NAN
            }
        });
        Self { alphas, betas, values }
    }

    pub fn n_alpha(&self) -> usize {
        self.alphas.len()
    }

    pub fn n_beta(&self) -> usize {
        self.betas.len()
    }

    pub fn get(&self, ia: usize, ib: usize) -> f64 {
        self.values[ia * self.n_beta() + ib]
    }

    pub fn point(&self, ia: usize, ib: usize) -> Complex64 {
        Complex64::new(self.alphas[ia], self.betas[ib])
    }

    /// Grid points no larger than any valid 8-neighbour, smallest first, at most
    /// `max` of them. Ties among plateaus keep the first point in scan order.
    pub fn local_minima(&self, max: usize) -> Vec<(Complex64, f64)> {
        let (na, nb) = (self.n_alpha() as isize, self.n_beta() as isize);
        let mut out = Vec::new();
        for ia in 0..na {
            for ib in 0..nb {
                let v = self.get(ia as usize, ib as usize);
                if v.is_nan() {
                    continue;
                }
                let mut is_min = true;
                'nb: for da in -1..=1isize {
                    for db in -1..=1isize {
                        if da == 0 && db == 0 {
                            continue;
                        }
                        let (a, b) = (ia + da, ib + db);
                        if a < 0 || b < 0 || a >= na || b >= nb {
                            continue;
                        }
                        let w = self.get(a as usize, b as usize);
                        // strict on the earlier neighbours so plateaus yield one seed
                        let earlier = (da, db) < (0, 0);
                        if w < v || (earlier && w == v) {
                            is_min = false;
                            break 'nb;
                        }
                    }
                }
                if is_min {
                    out.push((self.point(ia as usize, ib as usize), v));
                }
            }
        }
        out.sort_by(|a, b| a.1.total_cmp(&b.1));
        out.truncate(max);
        out
    }
}

/// Outcome of an iterative refinement.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Refined {
    pub z: Complex64,
    pub residual: f64,
    pub converged: bool,
    pub iterations: usize,
}

/// Complex Newton `z ← z − g(z)/g'(z)`; `eval` returns `(g, g')`.
///
/// Stops when `|Δ| < tol·(1 + |z|)`; the best iterate seen is returned.
pub fn newton_complex<F>(z0: Complex64, max_iter: usize, tol: f64, eval: F) -> Option<Refined>
where
    F: Fn(Complex64) -> Option<(Complex64, Complex64)>,
{
    let mut z = z0;
    let (mut g, mut dg) = eval(z)?;
    let mut best = Refined {
        z,
        residual: g.norm(),
        converged: false,
        iterations: 0,
    };
    for it in 1..=max_iter {
        if dg.norm() == 0.0 {
            break;
        }
        let step = g / dg;
        z -= step;
        match eval(z) {
            Some(v) => (g, dg) = v,
            None => break,
        }
        if g.norm() <= best.residual {
            best = Refined {
                z,
                residual: g.norm(),
                converged: false,
                iterations: it,
            };
        }
        if step.norm() < tol * (1.0 + z.norm()) {
            best.converged = true;
            best.iterations = it;
            if g.norm() > best.residual {
                best.z = z;
                best.residual = g.norm();
            }
            break;
        }
    }
    Some(best)
}

/// Damped Gauss–Newton for an overdetermined real system `r(x) = 0` in two
/// unknowns; `eval` returns the residual vector and its `m × 2` Jacobian.
///
/// Uses the SVD pseudo-inverse so rank-deficient Jacobians (curves of zeros) still
/// give a minimum-norm step.
pub fn gauss_newton<F>(x0: Complex64, max_iter: usize, tol: f64, eval: F) -> Option<Refined>
where
    F: Fn(Complex64) -> Option<(DVector<f64>, DMatrix<f64>)>,
{
    let mut x = x0;
    let (mut r, mut jac) = eval(x)?;
    let mut res = r.norm();
    let mut converged = false;
    let mut iters = 0;
    for it in 1..=max_iter {
        iters = it;
        let svd = jac.clone().svd(true, true);
        let top = svd.singular_values.max();
        if top == 0.0 {
            break;
        }
        let Ok(step) = svd.solve(&r, 1e-12 * top) else {
            break;
        };
        let d = Complex64::new(step[0], step[1]);
        let mut t = 1.0;
        let mut accepted = None;
        for _ in 0..12 {
            let cand = x - d * t;
            if let Some((r2, j2)) = eval(cand) {
                if r2.norm() <= res || r2.norm() < 1e-300 {
                    accepted = Some((cand, r2, j2));
                    break;
                }
            }
            t *= 0.5;
        }
        let Some((nx, nr, nj)) = accepted else {
            break;
        };
        let moved = (nx - x).norm();
        x = nx;
        r = nr;
        jac = nj;
        res = r.norm();
        if moved < tol * (1.0 + x.norm()) {
            converged = true;
            break;
        }
    }
    Some(Refined {
        z: x,
        residual: res,
        converged,
        iterations: iters,
    })
}

/// Gauss–Newton with a forward-difference Jacobian.
pub fn gauss_newton_fd<F>(x0: Complex64, max_iter: usize, tol: f64, residual: F) -> Option<Refined>
where
    F: Fn(Complex64) -> Option<DVector<f64>>,
{
    gauss_newton(x0, max_iter, tol, |x| {
        let r = residual(x)?;
        let h = 1e-7 * (1.0 + x.norm());
        let ra = residual(x + Complex64::new(h, 0.0))?;
        let rb = residual(x + Complex64::new(0.0, h))?;
        let mut j = DMatrix::zeros(r.len(), 2);
        j.set_column(0, &((ra - &r) / h));
        j.set_column(1, &((rb - &r) / h));
        Some((r, j))
    })
}

/// Keeps the first of any points closer than `radius·(1 + |z|)`.
pub fn dedupe<T, K>(items: Vec<T>, radius: f64, key: K) -> Vec<T>
where
    K: Fn(&T) -> Complex64,
{
    let mut out: Vec<T> = Vec::new();
    for it in items {
        let z = key(&it);
        if !out.iter().any(|o| (key(o) - z).norm() < radius * (1.0 + z.norm())) {
            out.push(it);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(a: f64, b: f64) -> Complex64 {
        Complex64::new(a, b)
    }

    #[test]
    fn minima_of_modulus_locate_zeros() {
        let roots = [c(0.5, 1.0), c(-1.2, 2.5)];
        let f = |z: Complex64| roots.iter().map(|r| z - r).product::<Complex64>().norm();
        let bbox = BoundingBox::new(-3.0, 3.0, 0.0, 3.0).unwrap();
        let g = ScalarGrid::scan(bbox, 121, Exec::Sequential, |_| true, f);
        let m = g.local_minima(10);
        assert_eq!(m.len(), 2);
        for r in roots {
            assert!(m.iter().any(|(z, _)| (z - r).norm() < 0.05));
        }
    }

    #[test]
    fn newton_converges_quadratically() {
        let r = newton_complex(c(1.0, 1.0), 50, 1e-14, |z| Some((z * z + 1.0, 2.0 * z))).unwrap();
        assert!(r.converged && (r.z - c(0.0, 1.0)).norm() < 1e-14);
    }

    #[test]
    fn gauss_newton_on_overdetermined_system() {
        // zero of (α − 1, β − 2, (α − 1)(β − 2))
        let r = gauss_newton_fd(c(0.0, 0.0), 50, 1e-14, |z| {
            Some(DVector::from_vec(vec![
                z.re - 1.0,
                z.im - 2.0,
                (z.re - 1.0) * (z.im - 2.0),
            ]))
        })
        .unwrap();
        assert!((r.z - c(1.0, 2.0)).norm() < 1e-10);
    }

    #[test]
    fn dedupe_merges_close_points() {
        let v = vec![c(1.0, 1.0), c(1.0 + 1e-9, 1.0), c(2.0, 0.0)];
        assert_eq!(dedupe(v, 1e-7, |z| *z).len(), 2);
    }

    #[test]
    fn parallel_scan_matches_sequential() {
        let bbox = BoundingBox::default();
        let f = |z: Complex64| (z * z - 1.0).norm();
        let a = ScalarGrid::scan(bbox, 50, Exec::Sequential, |z| z.im > 0.1, f);
        let b = ScalarGrid::scan(bbox, 50, Exec::Parallel, |z| z.im > 0.1, f);
        assert_eq!(
            a.values.iter().map(|v| v.to_bits()).collect::<Vec<_>>(),
            b.values.iter().map(|v| v.to_bits()).collect::<Vec<_>>()
        );
    }
}
