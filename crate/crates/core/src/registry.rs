//! Named example functions, with the dimension triples they are known to have.

use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::ast::StemAst;
use crate::domain::DomainDescriptor;
use crate::error::{Error, Result};
use crate::quaternion::Quaternion;
use crate::slicefn::SliceFunction;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExpectedClass {
    SliceConstant,
    SlicePreserving,
    /// `C_J`-preserving for one `J`, not slice-preserving.
    OneSlice,
    Generic,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegistryEntry {
    pub name: String,
    pub description: String,
    /// Row of the dimension-triple table, if the function is one of them.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub row: Option<u8>,
    pub class: ExpectedClass,
    pub ast: StemAst,
    pub domain: DomainDescriptor,
    /// `(d, w, m, n)`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expected: Option<[i8; 4]>,
    /// A point of `N_f ∖ (D_f ∪ W_f)`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Quaternion>,
}

impl RegistryEntry {
    pub fn function(&self) -> Result<SliceFunction> {
        Ok(SliceFunction::new(self.ast.build()?, self.domain.to_domain()?))
    }
}

static ENTRIES: OnceLock<Vec<RegistryEntry>> = OnceLock::new();

/// All entries; the built-in table is parsed and checked on first use.
pub fn entries() -> &'static [RegistryEntry] {
    ENTRIES.get_or_init(|| {
        let list: Vec<RegistryEntry> =
            serde_json::from_str(include_str!("registry.json")).expect("built-in registry parses");
        for e in &list {
            let f = e
                .function()
                .unwrap_or_else(|err| panic!("registry entry {}: {err}", e.name));
            if let Err(msg) = check_stem(&f) {
                panic!("registry entry {}: {msg}", e.name);
            }
        }
        list
    })
}

pub fn lookup(name: &str) -> Result<&'static RegistryEntry> {
    entries()
        .iter()
        .find(|e| e.name == name)
        .ok_or_else(|| Error::UnknownFunction(name.to_string()))
}

pub fn function(name: &str) -> Result<SliceFunction> {
    lookup(name)?.function()
}

pub fn names() -> Vec<&'static str> {
    entries().iter().map(|e| e.name.as_str()).collect()
}

/// The table entries in row order.
pub fn table() -> Vec<&'static RegistryEntry> {
    let mut rows: Vec<_> = entries().iter().filter(|e| e.row.is_some()).collect();
    rows.sort_by_key(|e| e.row);
    rows
}

/// Evenness of `F₁` and oddness of `F₂` at sample points, and finiteness.
pub fn check_stem(f: &SliceFunction) -> std::result::Result<(), String> {
    for z in f.samples().iter().take(16) {
        let a = f.stem_value(*z).map_err(|e| e.to_string())?;
        let b = f.stem_value(z.conj()).map_err(|e| e.to_string())?;
        let s = 1.0 + a.norm();
        if !(a.f1.is_finite() && a.f2.is_finite()) {
            return Err(format!("non-finite stem value at {z}"));
        }
        if (a.f1 - b.f1).norm() > 1e-9 * s || (a.f2 + b.f2).norm() > 1e-9 * s {
            return Err(format!("stem is not even-odd at {z}"));
        }
    }
    Ok(())
}
