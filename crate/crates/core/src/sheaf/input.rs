//! JSON input format for custom varieties and opaque bundles.
//!
//! Top-level document:
//!
//! ```json
//! {
//!   "variety": {
//!     "name": "X", "dim": 3,
//!     "h_O": [1, 0, 0, 1],
//!     "omega": "trivial",
//!     "gorenstein": true,
//!     "ring": {
//!       "graded_ranks": [1, 1, 1],
//!       "products": [ {"a": [1, 0], "b": [1, 0], "c": ["1"]} ],
//!       "degree_map": ["1"],
//!       "tangent_chern": ["3", "3"]
//!     }
//!   },
//!   "bundles": [
//!     {
//!       "name": "F", "rank": 2,
//!       "chern": [4, 12],
//!       "h": [4, 0, 0],
//!       "h_dual": [0, null, null],
//!       "h0_dual": 0,
//!       "resolution": {"kernel": [-2, -2]},
//!       "globally_generated": true,
//!       "simple": true,
//!       "rigid": false
//!     }
//!   ]
//! }
//! ```
//!
//! `omega` is `"trivial"`, `"O(d)"`, or a plain integer degree. Table entries
//! are integers, `null` (unknown), or `{"at_least": k}`. Rationals accept
//! integers or `"p/q"` strings. Either `variety` or a catalog name must
//! provide the ambient; `bundles` may extend a catalog variety too.
//! Unknown fields are rejected.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_rational::BigRational;
use serde::Deserialize;

use crate::arith::parse_rational;
use crate::cohom::{CohomologyTable, DimEntry, Prov};
use crate::error::{Error, Result};
use crate::ring::{ChernPolynomial, CustomRing, GradedClass, RingSpec};
use crate::sheaf::resolve::{OpaqueBundle, SheafContext};
use crate::sheaf::variety::{Omega, VarietySpec};

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InputDoc {
    #[serde(default)]
    pub variety: Option<VarietyInput>,
    #[serde(default)]
    pub bundles: Vec<BundleInput>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VarietyInput {
    pub name: String,
    pub dim: usize,
    #[serde(rename = "h_O")]
    pub h_o: Vec<u64>,
    pub omega: OmegaInput,
    #[serde(default = "default_true")]
    pub gorenstein: bool,
    #[serde(default)]
    pub ring: Option<RingInput>,
}

fn default_true() -> bool {
    true
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
pub enum OmegaInput {
    Degree(i64),
    Text(String),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RingInput {
    pub graded_ranks: Vec<usize>,
    #[serde(default)]
    pub products: Vec<ProductInput>,
    pub degree_map: Vec<RationalInput>,
    #[serde(default)]
    pub tangent_chern: Option<Vec<RationalInput>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProductInput {
    pub a: (usize, usize),
    pub b: (usize, usize),
    pub c: Vec<RationalInput>,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
pub enum RationalInput {
    Int(i64),
    Text(String),
}

impl RationalInput {
    pub fn to_rational(&self) -> Result<BigRational> {
        match self {
            RationalInput::Int(v) => Ok(BigRational::from_integer((*v).into())),
            RationalInput::Text(s) => parse_rational(s),
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
pub enum EntryInput {
    Int(u64),
    AtLeast { at_least: u64 },
}

impl EntryInput {
    fn to_entry(&self) -> DimEntry {
        match self {
            EntryInput::Int(k) => DimEntry::Exact(*k),
            EntryInput::AtLeast { at_least } => DimEntry::AtLeast(*at_least).normalized(),
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BundleInput {
    pub name: String,
    pub rank: usize,
    #[serde(default)]
    pub chern: Option<Vec<RationalInput>>,
    #[serde(default)]
    pub h: Option<Vec<Option<EntryInput>>>,
    #[serde(default)]
    pub h_dual: Option<Vec<Option<EntryInput>>>,
    #[serde(default)]
    pub h0_dual: Option<u64>,
    #[serde(default)]
    pub resolution: Option<ResolutionInput>,
    #[serde(default)]
    pub globally_generated: Option<bool>,
    #[serde(default)]
    pub simple: Option<bool>,
    #[serde(default)]
    pub rigid: Option<bool>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ResolutionInput {
    pub kernel: Vec<i64>,
}

fn parse_omega(o: &OmegaInput) -> Result<Omega> {
    match o {
        OmegaInput::Degree(d) => Ok(Omega::LineDegree(*d)),
        OmegaInput::Text(s) => {
            let t = s.trim();
            if t.eq_ignore_ascii_case("trivial") || t == "O" {
                return Ok(Omega::Trivial);
            }
            if let Some(rest) = t.strip_prefix("O(").and_then(|r| r.strip_suffix(')')) {
                let d: i64 = rest
                    .trim()
                    .parse()
                    .map_err(|_| Error::Parse(format!("invalid omega degree `{rest}`")))?;
                return Ok(if d == 0 {
                    Omega::Trivial
                } else {
                    Omega::LineDegree(d)
                });
            }
            Err(Error::Parse(format!("invalid omega `{s}`")))
        }
    }
}

fn build_ring(input: &RingInput) -> Result<(Arc<RingSpec>, Option<ChernPolynomial>)> {
    let mut products = BTreeMap::new();
    for p in &input.products {
        let coords: Result<Vec<BigRational>> = p.c.iter().map(|r| r.to_rational()).collect();
        products.insert((p.a, p.b), coords?);
    }
    let degree_map: Result<Vec<BigRational>> =
        input.degree_map.iter().map(|r| r.to_rational()).collect();
    let ring = RingSpec::custom(CustomRing {
        graded_ranks: input.graded_ranks.clone(),
        products,
        degree_map: degree_map?,
    })?;
    let tangent = match &input.tangent_chern {
        Some(cs) => {
            if !matches!(ring.kind, crate::ring::RingKind::ProjectiveSpace)
                && input.graded_ranks.iter().any(|&r| r != 1)
            {
                return Err(Error::Unsupported(
                    "tangent_chern as scalars requires rank-1 graded pieces".into(),
                ));
            }
            let mut coeffs = vec![BigRational::from_integer(1.into())];
            for c in cs {
                coeffs.push(c.to_rational()?);
            }
            let total = GradedClass::from_parts(
                &ring,
                (0..=ring.dim)
                    .map(|d| {
                        vec![coeffs
                            .get(d)
                            .cloned()
                            .unwrap_or_else(|| BigRational::from_integer(0.into()))]
                    })
                    .collect(),
            )?;
            Some(ChernPolynomial::new(total, ring.dim)?)
        }
        None => None,
    };
    Ok((ring, tangent))
}

fn build_variety(input: &VarietyInput) -> Result<VarietySpec> {
    let omega = parse_omega(&input.omega)?;
    let (ring, tangent) = match &input.ring {
        Some(r) => {
            let (ring, tangent) = build_ring(r)?;
            (Some(ring), tangent)
        }
        None => (None, None),
    };
    let v = VarietySpec {
        name: input.name.clone(),
        n: input.dim,
        h_o: CohomologyTable::from_dims(&input.h_o, Prov::Asserted),
        omega,
        ring,
        tangent_chern: tangent,
        gorenstein: input.gorenstein,
    };
    v.validate()?;
    Ok(v)
}

fn build_bundle(input: &BundleInput) -> Result<OpaqueBundle> {
    let chern = match &input.chern {
        Some(cs) => Some(
            cs.iter()
                .map(|r| r.to_rational())
                .collect::<Result<Vec<_>>>()?,
        ),
        None => None,
    };
    let to_entries = |v: &Vec<Option<EntryInput>>| -> Vec<DimEntry> {
        v.iter()
            .map(|e| e.as_ref().map(|e| e.to_entry()).unwrap_or(DimEntry::Unknown))
            .collect()
    };
    Ok(OpaqueBundle {
        name: input.name.clone(),
        rank: input.rank,
        chern,
        h: input.h.as_ref().map(to_entries),
        h_dual: input.h_dual.as_ref().map(to_entries),
        h0_dual: input.h0_dual,
        resolution: input.resolution.as_ref().map(|r| r.kernel.clone()),
        globally_generated: input.globally_generated,
        simple: input.simple,
        rigid: input.rigid,
    })
}

/// Parse an input document. When `base` is given, the document may omit the
/// variety and only contribute bundles to it.
pub fn load_str(text: &str, base: Option<VarietySpec>) -> Result<SheafContext> {
    let doc: InputDoc = serde_json::from_str(text)?;
    let variety = match (&doc.variety, base) {
        (Some(v), _) => build_variety(v)?,
        (None, Some(b)) => b,
        (None, None) => {
            return Err(Error::InvalidInput(
                "input document has no variety and no catalog variety was selected".into(),
            ))
        }
    };
    let mut ctx = SheafContext::new(variety)?;
    for b in &doc.bundles {
        let bundle = build_bundle(b)?;
        ctx = ctx.with_bundle(bundle);
    }
    Ok(ctx)
}
