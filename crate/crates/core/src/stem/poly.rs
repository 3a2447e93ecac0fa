//! Polynomials `Σ xⁿ aₙ` with quaternion coefficients on the right.
//!
//! The stem of such a polynomial is `Σ (α + ιβ)ⁿ aₙ`. Writing
//! `(α + ιβ)ⁿ = Pₙ(α, β²) + ιβ Qₙ(α, β²)` with real `Pₙ, Qₙ` gives
//! `F₁ = Σ Pₙ aₙ` and `F₂ = β Σ Qₙ aₙ`, so `F̂₂ = Σ Qₙ aₙ` needs no division.

use num_complex::Complex64;

use crate::quaternion::Quaternion;

/// Drops trailing zero coefficients.
pub fn trim(mut c: Vec<Quaternion>) -> Vec<Quaternion> {
    while c.last().is_some_and(|q| *q == Quaternion::ZERO) {
        c.pop();
    }
    c
}

/// Coefficients of the slice product: `cₙ = Σ_{m+l=n} a_m b_l`.
pub fn mul(a: &[Quaternion], b: &[Quaternion]) -> Vec<Quaternion> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut c = vec![Quaternion::ZERO; a.len() + b.len() - 1];
    for (m, am) in a.iter().enumerate() {
        for (l, bl) in b.iter().enumerate() {
            c[m + l] += *am * *bl;
        }
    }
    trim(c)
}

pub fn add(a: &[Quaternion], b: &[Quaternion]) -> Vec<Quaternion> {
    let n = a.len().max(b.len());
    let get = |v: &[Quaternion], k: usize| v.get(k).copied().unwrap_or(Quaternion::ZERO);
    trim((0..n).map(|k| get(a, k) + get(b, k)).collect())
}

pub fn derivative(a: &[Quaternion]) -> Vec<Quaternion> {
    trim(a.iter().enumerate().skip(1).map(|(n, q)| *q * n as f64).collect())
}

/// `(F₁, F̂₂)` at `z = α + iβ`, by Horner's scheme on the pair `(A, B) ↔ A + ιβB`.
pub fn eval_hat(a: &[Quaternion], z: Complex64) -> (Quaternion, Quaternion) {
    let (alpha, b2) = (z.re, z.im * z.im);
    let mut p = Quaternion::ZERO;
    let mut q = Quaternion::ZERO;
    for an in a.iter().rev() {
        let np = p * alpha - q * b2 + *an;
        let nq = p + q * alpha;
        p = np;
        q = nq;
    }
    (p, q)
}

/// Real polynomial in ascending powers.
pub type RealPoly = Vec<f64>;

pub fn real_mul(a: &[f64], b: &[f64]) -> RealPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut c = vec![0.0; a.len() + b.len() - 1];
    for (m, x) in a.iter().enumerate() {
        for (l, y) in b.iter().enumerate() {
            c[m + l] += x * y;
        }
    }
    c
}

/// Division with remainder by a monic divisor.
pub fn real_divmod_monic(a: &[f64], d: &[f64]) -> (RealPoly, RealPoly) {
    let dn = d.len() - 1;
    if a.len() <= dn {
        return (Vec::new(), a.to_vec());
    }
    let mut r = a.to_vec();
    let mut q = vec![0.0; a.len() - dn];
    for k in (0..q.len()).rev() {
        let c = r[k + dn];
        q[k] = c;
        for (j, dj) in d.iter().enumerate() {
            r[k + j] -= c * dj;
        }
    }
    r.truncate(dn);
    (q, r)
}

pub fn real_eval_quaternion(a: &[f64], x: Quaternion) -> Quaternion {
    a.iter()
        .rev()
        .fold(Quaternion::ZERO, |acc, c| acc * x + Quaternion::real(*c))
}
