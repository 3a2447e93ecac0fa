//! Conjugation-symmetric open sets `D ⊂ C` and their circularizations `Ω_D ⊂ H`.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quaternion::Quaternion;

/// Shape of a conjugation-symmetric domain in the `(α, β)` plane.
#[derive(Debug, Clone, PartialEq)]
pub enum Shape {
    /// The whole complex plane.
    Plane,
    /// Disk centered on the real axis.
    Disk { center: f64, radius: f64 },
    /// `r_in < |z − center| < r_out`; `r_out` may be infinite.
    Annulus { center: f64, r_in: f64, r_out: f64 },
    /// The symmetric strip `α_min < α < α_max`, `|β| < β_max`.
    Rectangle {
        alpha_min: f64,
        alpha_max: f64,
        beta_max: f64,
    },
    /// The inner shape with the real axis removed.
    MinusReals(Box<Shape>),
}

impl Shape {
    /// Signed distance to the boundary: positive inside, non-positive outside.
    pub fn boundary_distance(&self, alpha: f64, beta: f64) -> f64 {
        match self {
            Shape::Plane => f64::INFINITY,
            Shape::Disk { center, radius } => radius - (alpha - center).hypot(beta),
            Shape::Annulus { center, r_in, r_out } => {
                let r = (alpha - center).hypot(beta);
                (r - r_in).min(r_out - r)
            }
            Shape::Rectangle {
                alpha_min,
                alpha_max,
                beta_max,
            } => (alpha - alpha_min).min(alpha_max - alpha).min(beta_max - beta.abs()),
            Shape::MinusReals(inner) => inner.boundary_distance(alpha, beta).min(beta.abs()),
        }
    }

    pub fn contains(&self, alpha: f64, beta: f64) -> bool {
        match self {
            Shape::Plane => alpha.is_finite() && beta.is_finite(),
            Shape::Disk { center, radius } => (alpha - center).hypot(beta) < *radius,
            Shape::Annulus { center, r_in, r_out } => {
                let r = (alpha - center).hypot(beta);
                r > *r_in && r < *r_out
            }
            Shape::Rectangle {
                alpha_min,
                alpha_max,
                beta_max,
            } => alpha > *alpha_min && alpha < *alpha_max && beta.abs() < *beta_max,
            Shape::MinusReals(inner) => beta != 0.0 && inner.contains(alpha, beta),
        }
    }

    fn meets_reals(&self) -> bool {
        match self {
            Shape::Plane => true,
            Shape::Disk { radius, .. } => *radius > 0.0,
            Shape::Annulus { r_in, r_out, .. } => r_out > r_in,
            Shape::Rectangle {
                alpha_min,
                alpha_max,
                beta_max,
            } => alpha_max > alpha_min && *beta_max > 0.0,
            Shape::MinusReals(_) => false,
        }
    }

    /// Axis-aligned extent `(α_min, α_max, β_max)`, possibly infinite.
    fn extent(&self) -> (f64, f64, f64) {
        match self {
            Shape::Plane => (f64::NEG_INFINITY, f64::INFINITY, f64::INFINITY),
            Shape::Disk { center, radius } => (center - radius, center + radius, *radius),
            Shape::Annulus { center, r_out, .. } => (center - r_out, center + r_out, *r_out),
            Shape::Rectangle {
                alpha_min,
                alpha_max,
                beta_max,
            } => (*alpha_min, *alpha_max, *beta_max),
            Shape::MinusReals(inner) => inner.extent(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum DomainKind {
    /// `Ω_D` meets the real axis.
    SliceDomain,
    /// `Ω_D ∩ R = ∅`.
    ProductDomain,
}

/// Sampling window `[α_min, α_max] × [β_min, β_max]` in the closed upper half plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundingBox {
    pub alpha_min: f64,
    pub alpha_max: f64,
    pub beta_min: f64,
    pub beta_max: f64,
}

impl Default for BoundingBox {
    fn default() -> Self {
        Self {
            alpha_min: -5.0,
            alpha_max: 5.0,
            beta_min: 0.0,
            beta_max: 5.0,
        }
    }
}

impl BoundingBox {
    pub fn new(alpha_min: f64, alpha_max: f64, beta_min: f64, beta_max: f64) -> Result<Self> {
        if !(alpha_min < alpha_max && beta_min < beta_max && beta_max > 0.0) {
            return Err(Error::Parse(format!(
                "degenerate bounding box [{alpha_min}, {alpha_max}] x [{beta_min}, {beta_max}]"
            )));
        }
        Ok(Self {
            alpha_min,
            alpha_max,
            beta_min: beta_min.max(0.0),
            beta_max,
        })
    }

    pub fn from_slice(v: &[f64]) -> Result<Self> {
        match v {
            [a, b, c, d] => Self::new(*a, *b, *c, *d),
            _ => Err(Error::Parse("bounding box needs 4 numbers".into())),
        }
    }

    pub fn to_array(self) -> [f64; 4] {
        [self.alpha_min, self.alpha_max, self.beta_min, self.beta_max]
    }

    pub fn diameter(&self) -> f64 {
        (self.alpha_max - self.alpha_min).hypot(self.beta_max - self.beta_min)
    }

    /// A box of half-width `r` around `(α, β)`, clamped to `β >= 0`.
    pub fn around(alpha: f64, beta: f64, r: f64) -> Self {
        Self {
            alpha_min: alpha - r,
            alpha_max: alpha + r,
            beta_min: (beta - r).max(0.0),
            beta_max: beta + r,
        }
    }
}

/// Conjugation-symmetric open set `D` with its circularization `Ω_D`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricDomain {
    shape: Shape,
    kind: DomainKind,
    bbox: BoundingBox,
    margin: f64,
}

impl SymmetricDomain {
    pub fn new(shape: Shape) -> Self {
        let kind = if shape.meets_reals() {
            DomainKind::SliceDomain
        } else {
            DomainKind::ProductDomain
        };
        let mut d = Self {
            shape,
            kind,
            bbox: BoundingBox::default(),
            margin: 0.0,
        };
        d.margin = 1e-3 * d.effective_box().diameter();
        d
    }

    /// `H`, i.e. `D = C`.
    pub fn whole() -> Self {
        Self::new(Shape::Plane)
    }

    /// `H ∖ R`, i.e. `D = C ∖ R`.
    pub fn complement_of_reals() -> Self {
        Self::new(Shape::MinusReals(Box::new(Shape::Plane)))
    }

    /// `H ∖ {0}`.
    pub fn punctured() -> Self {
        Self::new(Shape::Annulus {
            center: 0.0,
            r_in: 0.0,
            r_out: f64::INFINITY,
        })
    }

    pub fn disk(center: f64, radius: f64) -> Self {
        Self::new(Shape::Disk { center, radius })
    }

    pub fn annulus(center: f64, r_in: f64, r_out: f64) -> Self {
        Self::new(Shape::Annulus { center, r_in, r_out })
    }

    pub fn rectangle(alpha_min: f64, alpha_max: f64, beta_max: f64) -> Self {
        Self::new(Shape::Rectangle {
            alpha_min,
            alpha_max,
            beta_max,
        })
    }

    /// The same shape with the real axis removed.
    pub fn minus_reals(self) -> Self {
        let bbox = self.bbox;
        match self.shape {
            Shape::MinusReals(_) => self,
            s => Self::new(Shape::MinusReals(Box::new(s))).with_bbox(bbox),
        }
    }

    pub fn with_bbox(mut self, bbox: BoundingBox) -> Self {
        self.bbox = bbox;
        self.margin = 1e-3 * self.effective_box().diameter();
        self
    }

    pub fn with_margin(mut self, margin: f64) -> Self {
        self.margin = margin;
        self
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    pub fn kind(&self) -> DomainKind {
        self.kind
    }

    pub fn is_product(&self) -> bool {
        self.kind == DomainKind::ProductDomain
    }

    pub fn bbox(&self) -> BoundingBox {
        self.bbox
    }

    pub fn margin(&self) -> f64 {
        self.margin
    }

    /// The user bounding box intersected with the extent of the shape.
    pub fn effective_box(&self) -> BoundingBox {
        let (a0, a1, b1) = self.shape.extent();
        BoundingBox {
            alpha_min: self.bbox.alpha_min.max(a0),
            alpha_max: self.bbox.alpha_max.min(a1),
            beta_min: self.bbox.beta_min,
            beta_max: self.bbox.beta_max.min(b1),
        }
    }

    pub fn contains_complex(&self, alpha: f64, beta: f64) -> bool {
        self.shape.contains(alpha, beta)
    }

    pub fn contains_z(&self, z: Complex64) -> bool {
        self.contains_complex(z.re, z.im)
    }

    /// `q ∈ Ω_D` iff `(Re q, |Im q|) ∈ D`.
    pub fn contains_quaternion(&self, q: Quaternion) -> bool {
        self.contains_complex(q.re(), q.im().norm())
    }

    pub fn boundary_distance(&self, alpha: f64, beta: f64) -> f64 {
        self.shape.boundary_distance(alpha, beta)
    }

    /// True when `z ∈ D` and `(α, |β|)` lies in the bounding box.
    pub fn in_box(&self, z: Complex64) -> bool {
        let b = self.effective_box();
        let beta = z.im.abs();
        self.contains_z(z)
            && z.re >= b.alpha_min
            && z.re <= b.alpha_max
            && beta >= b.beta_min.min(0.0)
            && beta <= b.beta_max
    }

    /// True when `(α, β)` lies in `D`, inside the bounding box, at least `margin`
    /// away from the boundary of `D`.
    pub fn is_interior_sample(&self, alpha: f64, beta: f64) -> bool {
        let b = self.effective_box();
        alpha >= b.alpha_min
            && alpha <= b.alpha_max
            && beta >= b.beta_min
            && beta <= b.beta_max
            && self.contains_complex(alpha, beta)
            && self.boundary_distance(alpha, beta) >= self.margin
    }

    /// Quasi-uniform jittered samples of `D⁺ = {α + iβ ∈ D : β > 0}` inside the
    /// bounding box, each at least `margin` from the boundary.
    pub fn sample_d_plus(&self, n: usize, seed: u64) -> Result<Vec<Complex64>> {
        let n = n.max(1);
        let b = self.effective_box();
        if !(b.alpha_max > b.alpha_min && b.beta_max > b.beta_min.max(0.0)) {
            return Err(Error::EmptyDomain);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut side = ((n as f64).sqrt().ceil() as usize).max(2);
        for _ in 0..8 {
            let mut pts = Vec::with_capacity(side * side);
            let da = (b.alpha_max - b.alpha_min) / side as f64;
            let db = (b.beta_max - b.beta_min) / side as f64;
            for ia in 0..side {
                for ib in 0..side {
                    let alpha = b.alpha_min + (ia as f64 + rng.random_range(0.05..0.95)) * da;
                    let beta = b.beta_min + (ib as f64 + rng.random_range(0.05..0.95)) * db;
                    if beta > 0.0 && self.is_interior_sample(alpha, beta) {
                        pts.push(Complex64::new(alpha, beta));
                    }
                }
            }
            if pts.len() >= n {
                let stride = pts.len() as f64 / n as f64;
                return Ok((0..n).map(|k| pts[((k as f64 + 0.5) * stride) as usize]).collect());
            }
            side *= 2;
        }
        Err(Error::EmptyDomain)
    }
}

/// JSON form of a domain: `{"shape": "...", params..., "minus_reals": bool, "bbox": [...]}`.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct DomainDescriptor {
    pub shape: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub center: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub radius: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r_in: Option<f64>,
    /// `null` or absent means infinite.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r_out: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha_min: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha_max: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta_max: Option<f64>,
    #[serde(default)]
    pub minus_reals: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bbox: Option<[f64; 4]>,
}

impl DomainDescriptor {
    pub fn to_domain(&self) -> Result<SymmetricDomain> {
        let need = |v: Option<f64>, name: &str| {
            v.ok_or_else(|| Error::Parse(format!("domain shape `{}` needs `{name}`", self.shape)))
        };
        let shape = match self.shape.as_str() {
            "plane" => Shape::Plane,
            "disk" => Shape::Disk {
                center: need(self.center, "center")?,
                radius: need(self.radius, "radius")?,
            },
            "annulus" => Shape::Annulus {
                center: self.center.unwrap_or(0.0),
                r_in: self.r_in.unwrap_or(0.0),
                r_out: self.r_out.unwrap_or(f64::INFINITY),
            },
            "rectangle" => Shape::Rectangle {
                alpha_min: need(self.alpha_min, "alpha_min")?,
                alpha_max: need(self.alpha_max, "alpha_max")?,
                beta_max: need(self.beta_max, "beta_max")?,
            },
            other => return Err(Error::Parse(format!("unknown domain shape `{other}`"))),
        };
        let mut d = SymmetricDomain::new(shape);
        if self.minus_reals {
            d = d.minus_reals();
        }
        if let Some(b) = self.bbox {
            d = d.with_bbox(BoundingBox::from_slice(&b)?);
        }
        Ok(d)
    }

    pub fn from_domain(d: &SymmetricDomain) -> Self {
        let mut out = Self {
            shape: String::new(),
            center: None,
            radius: None,
            r_in: None,
            r_out: None,
            alpha_min: None,
            alpha_max: None,
            beta_max: None,
            minus_reals: false,
            bbox: Some(d.bbox().to_array()),
        };
        let mut shape = d.shape();
        if let Shape::MinusReals(inner) = shape {
            out.minus_reals = true;
            shape = inner;
        }
        match shape {
            Shape::Plane | Shape::MinusReals(_) => out.shape = "plane".into(),
            Shape::Disk { center, radius } => {
                out.shape = "disk".into();
                out.center = Some(*center);
                out.radius = Some(*radius);
            }
            Shape::Annulus { center, r_in, r_out } => {
                out.shape = "annulus".into();
                out.center = Some(*center);
                out.r_in = Some(*r_in);
                out.r_out = r_out.is_finite().then_some(*r_out);
            }
            Shape::Rectangle {
                alpha_min,
                alpha_max,
                beta_max,
            } => {
                out.shape = "rectangle".into();
                out.alpha_min = Some(*alpha_min);
                out.alpha_max = Some(*alpha_max);
                out.beta_max = Some(*beta_max);
            }
        }
        out
    }
}
