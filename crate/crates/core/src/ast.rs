//! JSON descriptions of stem functions.
//!
//! ```json
//! {"op": "mul", "args": [{"op": "poly", "coeffs": [0, "-2i", 1]}, {"op": "eta"}]}
//! ```

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quaternion::{ImaginaryUnit, Quaternion};
use crate::stem::{from_complex_map, ComplexMap, Extension, StemFunction};

/// A quaternion written as `[w, x, y, z]`, a real number, or a string such as
/// `"1-2i+0.5k"`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Coef {
    Array([f64; 4]),
    Real(f64),
    Text(String),
}

impl Coef {
    pub fn value(&self) -> Result<Quaternion> {
        match self {
            Coef::Array(a) => Ok(Quaternion::new(a[0], a[1], a[2], a[3])),
            Coef::Real(r) => Ok(Quaternion::real(*r)),
            Coef::Text(s) => parse_quaternion(s),
        }
    }
}

impl From<Quaternion> for Coef {
    fn from(q: Quaternion) -> Self {
        Coef::Array(q.to_array())
    }
}

/// Parses sums of terms `a`, `ai`, `aj`, `ak` (the coefficient may be omitted).
pub fn parse_quaternion(s: &str) -> Result<Quaternion> {
    let text: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if text.is_empty() {
        return Err(Error::Parse("empty quaternion".into()));
    }
    let bad = || Error::Parse(format!("cannot read `{s}` as a quaternion"));
    let mut terms = Vec::new();
    let mut start = 0;
    let bytes = text.as_bytes();
    for k in 1..bytes.len() {
        let prev = bytes[k - 1].to_ascii_lowercase();
        if (bytes[k] == b'+' || bytes[k] == b'-') && prev != b'e' {
            terms.push(&text[start..k]);
            start = k;
        }
    }
    terms.push(&text[start..]);
    let mut out = [0.0; 4];
    for t in terms {
        let (body, slot) = match t.chars().last() {
            Some('i') => (&t[..t.len() - 1], 1),
            Some('j') => (&t[..t.len() - 1], 2),
            Some('k') => (&t[..t.len() - 1], 3),
            _ => (t, 0),
        };
        let v = match body {
            "" | "+" if slot > 0 => 1.0,
            "-" if slot > 0 => -1.0,
            _ => body.parse::<f64>().map_err(|_| bad())?,
        };
        out[slot] += v;
    }
    Ok(Quaternion::new(out[0], out[1], out[2], out[3]))
}

/// Parses `"w,x,y,z"`, or any form accepted by [`parse_quaternion`].
pub fn parse_point(s: &str) -> Result<Quaternion> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() == 4 {
        let v: std::result::Result<Vec<f64>, _> = parts.iter().map(|p| p.trim().parse::<f64>()).collect();
        let v = v.map_err(|_| Error::Parse(format!("cannot read `{s}` as four numbers")))?;
        return Ok(Quaternion::new(v[0], v[1], v[2], v[3]));
    }
    parse_quaternion(s)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum StemAst {
    /// The identity `x`.
    X,
    /// `x⁻¹`.
    Inv,
    Const {
        c: Coef,
    },
    /// `Σ xⁿ aₙ`, lowest degree first.
    Poly {
        coeffs: Vec<Coef>,
    },
    /// `η(x) = ½(1 − I_x i)`.
    Eta,
    SliceConstant {
        c1: Coef,
        c2: Coef,
    },
    Add {
        args: Vec<StemAst>,
    },
    Sub {
        lhs: Box<StemAst>,
        rhs: Box<StemAst>,
    },
    /// Slice product, left to right.
    Mul {
        args: Vec<StemAst>,
    },
    /// `f·a` for a quaternion `a`.
    Rscale {
        arg: Box<StemAst>,
        by: Coef,
    },
    /// Slice reciprocal `f^{−•}`.
    Recip {
        arg: Box<StemAst>,
    },
    Conj {
        arg: Box<StemAst>,
    },
    /// The slice function with values `g` on `C_J⁺`, continued by `extension`.
    FromSlice {
        map: ComplexMap,
        extension: Extension,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        unit: Option<Coef>,
    },
    /// `η(x) g(z_x) − η^c(x) / conj(g(z_x))`.
    Schwarz {
        map: ComplexMap,
    },
}

impl StemAst {
    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("AST serializes")
    }

    pub fn build(&self) -> Result<StemFunction> {
        Ok(match self {
            StemAst::X => StemFunction::identity(),
            StemAst::Inv => StemFunction::identity().reciprocal(),
            StemAst::Const { c } => StemFunction::constant(c.value()?),
            StemAst::Poly { coeffs } => StemFunction::poly(coeffs.iter().map(Coef::value).collect::<Result<Vec<_>>>()?),
            StemAst::Eta => StemFunction::eta(),
            StemAst::SliceConstant { c1, c2 } => StemFunction::slice_constant(c1.value()?, c2.value()?),
            StemAst::Add { args } => fold(args, |a, b| a.add(b))?,
            StemAst::Sub { lhs, rhs } => lhs.build()?.sub(&rhs.build()?),
            StemAst::Mul { args } => fold(args, |a, b| a.mul(b))?,
            StemAst::Rscale { arg, by } => arg.build()?.right_scale(by.value()?),
            StemAst::Recip { arg } => arg.build()?.reciprocal(),
            StemAst::Conj { arg } => arg.build()?.conj(),
            StemAst::FromSlice { map, extension, unit } => {
                let unit = match unit {
                    Some(u) => ImaginaryUnit::new(u.value()?)?,
                    None => ImaginaryUnit::i(),
                };
                from_complex_map(unit, map.clone(), *extension)
            }
            StemAst::Schwarz { map } => from_complex_map(ImaginaryUnit::i(), map.clone(), Extension::Schwarz),
        })
    }
}

fn fold(args: &[StemAst], op: impl Fn(&StemFunction, &StemFunction) -> StemFunction) -> Result<StemFunction> {
    let mut it = args.iter();
    let first = it
        .next()
        .ok_or_else(|| Error::Parse("operator needs at least one argument".into()))?
        .build()?;
    it.try_fold(first, |acc, a| Ok(op(&acc, &a.build()?)))
}
