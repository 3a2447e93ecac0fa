//! Real Jacobian of a slice function in the basis `{1, I, J, IJ}`.

use nalgebra::Matrix4;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::quaternion::{ImaginaryUnit, Quaternion};
use crate::slicefn::SliceFunction;

/// Singular values below this fraction of `‖M‖` count as zero.
pub const RANK_TOL: f64 = 1e-8;

/// `∂f/∂x(y)` and `f̂'_s(y)` at a point, with its slice coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointDerivatives {
    pub y: Quaternion,
    pub z: Complex64,
    pub unit: ImaginaryUnit,
    pub is_real: bool,
    pub value: Quaternion,
    /// `∂f/∂x(y)`.
    pub q: Quaternion,
    /// `f̂'_s(y) = F̂₂(z)`.
    pub s: Quaternion,
}

impl PointDerivatives {
    /// Scalars `(⟨q, s⟩, ⟨q, I s⟩)` whose squares sum to the determinant.
    pub fn hermitian_pair(&self) -> (f64, f64) {
        (self.q.dot(self.s), self.q.dot(self.unit.get() * self.s))
    }

    pub fn det(&self) -> f64 {
        if self.is_real {
            self.q.norm_sqr().powi(2)
        } else {
            let (a, b) = self.hermitian_pair();
            a * a + b * b
        }
    }
}

pub fn point_derivatives(f: &SliceFunction, y: Quaternion) -> Result<PointDerivatives> {
    let s = y.decompose();
    let z = s.complex();
    if !f.domain().contains_z(z) {
        return Err(Error::Domain {
            alpha: z.re,
            beta: z.im,
        });
    }
    let p = f.stem_point(z)?;
    let d = f.derivative_value(z)?;
    let u = s.unit.get();
    let (value, q) = if s.is_real {
        (p.f1, d.f1)
    } else {
        (p.f1 + u * p.f2, d.f1 + u * d.f2)
    };
    Ok(PointDerivatives {
        y,
        z,
        unit: s.unit,
        is_real: s.is_real,
        value,
        q,
        s: p.f2_hat,
    })
}

/// The 4×4 matrix together with the basis it is written in.
#[derive(Debug, Clone, PartialEq)]
pub struct JacobianMatrix {
    pub matrix: Matrix4<f64>,
    pub i_unit: ImaginaryUnit,
    pub j_unit: ImaginaryUnit,
    pub q: Quaternion,
    pub p: Quaternion,
}

impl JacobianMatrix {
    pub fn basis(&self) -> [Quaternion; 4] {
        let (i, j) = (self.i_unit.get(), self.j_unit.get());
        [Quaternion::ONE, i, j, i * j]
    }

    pub fn coords(&self, v: Quaternion) -> [f64; 4] {
        self.basis().map(|e| e.dot(v))
    }

    pub fn from_coords(&self, c: [f64; 4]) -> Quaternion {
        self.basis().iter().zip(c).map(|(e, x)| *e * x).sum()
    }

    /// The same map in the standard basis `{1, i, j, k}`.
    pub fn standard(&self) -> Matrix4<f64> {
        let b = Matrix4::from_columns(&self.basis().map(|e| e.to_array().into()));
        b * self.matrix * b.transpose()
    }

    pub fn det_direct(&self) -> f64 {
        self.matrix.determinant()
    }

    pub fn norm(&self) -> f64 {
        self.matrix.norm()
    }

    pub fn singular_values(&self) -> [f64; 4] {
        let sv = self.matrix.svd(false, false).singular_values;
        [sv[0], sv[1], sv[2], sv[3]]
    }

    pub fn rank(&self) -> u8 {
        let sv = self.singular_values();
        let top = sv.iter().cloned().fold(0.0, f64::max);
        if top == 0.0 {
            return 0;
        }
        sv.iter().filter(|s| **s > RANK_TOL * top).count() as u8
    }

    pub fn rows(&self) -> [[f64; 4]; 4] {
        let m = &self.matrix;
        std::array::from_fn(|r| std::array::from_fn(|c| m[(r, c)]))
    }
}

/// Builds the matrix from `q = ∂f/∂x(y)` and `p = J f̂'_s(y)`.
fn assemble(q: Quaternion, p: Quaternion, i_unit: ImaginaryUnit, j_unit: ImaginaryUnit) -> JacobianMatrix {
    let (iu, ju) = (i_unit.get(), j_unit.get());
    let basis = [Quaternion::ONE, iu, ju, iu * ju];
    let qc = basis.map(|e| e.dot(q));
    let pc = basis.map(|e| e.dot(p));
    #[rustfmt::skip]
    let matrix = Matrix4::new(
        qc[0], -qc[1], pc[0], -pc[1],
        qc[1],  qc[0], pc[1],  pc[0],
        qc[2], -qc[3], pc[2], -pc[3],
        qc[3],  qc[2], pc[3],  pc[2],
    );
    JacobianMatrix {
        matrix,
        i_unit,
        j_unit,
        q,
        p,
    }
}

pub fn jacobian_matrix(f: &SliceFunction, y: Quaternion) -> Result<JacobianMatrix> {
    let d = point_derivatives(f, y)?;
    let j = d.unit.orthogonal();
    Ok(assemble(d.q, j.get() * d.s, d.unit, j))
}

/// As [`jacobian_matrix`] with a caller-chosen `J ⟂ I`.
pub fn jacobian_matrix_with(f: &SliceFunction, y: Quaternion, j: ImaginaryUnit) -> Result<JacobianMatrix> {
    let d = point_derivatives(f, y)?;
    if d.unit.get().dot(j.get()).abs() > 1e-12 {
        return Err(Error::InvalidUnit(j.get()));
    }
    Ok(assemble(d.q, j.get() * d.s, d.unit, j))
}

/// `⟨q, s⟩² + ⟨q, I s⟩²` off the real axis, `|q|⁴` on it.
pub fn jacobian_det(f: &SliceFunction, y: Quaternion) -> Result<f64> {
    Ok(point_derivatives(f, y)?.det())
}

/// `df_y(v) = π_I(v)·∂f/∂x(y) + π_I⊥(v)·f̂'_s(y)`.
pub fn differential_apply(f: &SliceFunction, y: Quaternion, v: Quaternion) -> Result<Quaternion> {
    let d = point_derivatives(f, y)?;
    if d.is_real {
        return Ok(v * d.q);
    }
    Ok(v.project(d.unit) * d.q + v.project_perp(d.unit) * d.s)
}

pub fn rank(f: &SliceFunction, y: Quaternion) -> Result<u8> {
    let d = point_derivatives(f, y)?;
    if d.is_real {
        // df_y is right multiplication by q
        return Ok(if d.q.norm() > 0.0 { 4 } else { 0 });
    }
    Ok(jacobian_matrix(f, y)?.rank())
}

/// Fourth-order central differences of `f` in the standard basis.
///
/// The step is `1e−3·max(1, |y|)`, shrunk so that every stencil point stays inside
/// the domain.
pub fn finite_difference_jacobian(f: &SliceFunction, y: Quaternion) -> Result<Matrix4<f64>> {
    let s = y.decompose();
    let room = f.domain().boundary_distance(s.alpha, s.beta);
    let h = (1e-3 * y.norm().max(1.0)).min(0.2 * room);
    let basis = [Quaternion::ONE, Quaternion::I, Quaternion::J, Quaternion::K];
    let mut m = Matrix4::zeros();
    for (c, e) in basis.iter().enumerate() {
        let at = |t: f64| f.eval(y + *e * t);
        let d = (at(-2.0 * h)? - at(2.0 * h)? + (at(h)? - at(-h)?) * 8.0) * (1.0 / (12.0 * h));
        for (r, x) in d.to_array().iter().enumerate() {
            m[(r, c)] = *x;
        }
    }
    Ok(m)
}
