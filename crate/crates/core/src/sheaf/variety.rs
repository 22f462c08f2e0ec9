//! Ambient varieties: built-in catalog plus user-supplied custom data.
//!
//! Two fidelity levels: "ringed" varieties (the projective spaces) carry an
//! intersection ring and support Chern-class arithmetic and Riemann-Roch;
//! "cohomology-only" varieties (the Calabi-Yau preset, custom input) support
//! everything that needs only `h^i(O_X)`, the canonical class and user tables.

use std::sync::Arc;

use crate::cohom::{CohomologyTable, DimEntry, Prov};
use crate::error::{Error, Result};
use crate::ring::{
    euler_from_ch_td, pn_tangent_chern, todd_from_tangent, ChernPolynomial, GradedClass, RingSpec,
};

/// The canonical line bundle, as far as the calculator can use it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Omega {
    /// `O(d)` on a variety with line-bundle twists (projective space).
    LineDegree(i64),
    /// Trivial canonical class (Calabi-Yau).
    Trivial,
}

#[derive(Clone, Debug)]
pub struct VarietySpec {
    pub name: String,
    pub n: usize,
    /// Table of `h^i(O_X)`, all entries exact.
    pub h_o: CohomologyTable,
    pub omega: Omega,
    pub ring: Option<Arc<RingSpec>>,
    pub tangent_chern: Option<ChernPolynomial>,
    pub gorenstein: bool,
}

impl VarietySpec {
    pub fn projective_space(n: usize) -> Result<VarietySpec> {
        if n < 2 {
            return Err(Error::Precondition("catalog varieties need dimension >= 2".into()));
        }
        let ring = RingSpec::projective_space(n);
        let tangent = pn_tangent_chern(&ring)?;
        let mut dims = vec![0u64; n + 1];
        dims[0] = 1;
        Ok(VarietySpec {
            name: format!("P{n}"),
            n,
            h_o: CohomologyTable::from_dims(&dims, Prov::Solver),
            omega: Omega::LineDegree(-(n as i64) - 1),
            ring: Some(ring),
            tangent_chern: Some(tangent),
            gorenstein: true,
        })
    }

    /// Quintic threefold preset: `h^i(O) = (1, 0, 0, 1)`, trivial canonical
    /// class, no intersection ring (cohomology-only mode).
    pub fn cy3_quintic() -> VarietySpec {
        VarietySpec {
            name: "CY3-quintic".into(),
            n: 3,
            h_o: CohomologyTable::from_dims(&[1, 0, 0, 1], Prov::Solver),
            omega: Omega::Trivial,
            ring: None,
            tangent_chern: None,
            gorenstein: true,
        }
    }

    /// Built-in catalog: `P2`, `P3`, `P4`, `CY3-quintic`.
    pub fn catalog(name: &str) -> Result<VarietySpec> {
        match name {
            "P2" => Self::projective_space(2),
            "P3" => Self::projective_space(3),
            "P4" => Self::projective_space(4),
            "CY3-quintic" => Ok(Self::cy3_quintic()),
            other => Err(Error::UnknownVariety(other.into())),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::InvalidInput("variety dimension must be >= 2".into()));
        }
        if !self.gorenstein {
            return Err(Error::InvalidInput("variety must be Gorenstein".into()));
        }
        if self.h_o.dim() != self.n {
            return Err(Error::InvalidInput(format!(
                "h_O has {} entries, expected {}",
                self.h_o.dim() + 1,
                self.n + 1
            )));
        }
        if self.h_o.exact_value(0) != Some(1) {
            return Err(Error::InvalidInput(
                "h^0(O_X) must equal 1 (X reduced and connected)".into(),
            ));
        }
        if !self.h_o.all_exact() {
            return Err(Error::InvalidInput("h^i(O_X) must all be exact".into()));
        }
        if let Some(ring) = &self.ring {
            if ring.dim != self.n {
                return Err(Error::InvalidInput(
                    "intersection ring dimension differs from variety dimension".into(),
                ));
            }
        }
        Ok(())
    }

    /// Ringed variety with line-bundle arithmetic (`P^n`).
    pub fn is_pn(&self) -> bool {
        self.ring
            .as_ref()
            .map(|r| matches!(r.kind, crate::ring::RingKind::ProjectiveSpace))
            .unwrap_or(false)
    }

    pub fn is_ringed(&self) -> bool {
        self.ring.is_some()
    }

    pub fn h_i_o(&self, i: usize) -> DimEntry {
        self.h_o.h(i)
    }

    /// `h^1(O_X)` as an exact number (catalog tables are exact).
    pub fn irregularity(&self) -> u64 {
        self.h_o.exact_value(1).unwrap_or(0)
    }

    pub fn todd(&self) -> Result<GradedClass> {
        let tangent = self.tangent_chern.as_ref().ok_or_else(|| {
            Error::Unsupported(format!(
                "variety {} has no tangent Chern data; Riemann-Roch unavailable",
                self.name
            ))
        })?;
        todd_from_tangent(tangent)
    }

    /// Euler characteristic of a bundle via Riemann-Roch.
    pub fn euler_char_hrr(&self, chern: &ChernPolynomial) -> Result<i64> {
        let td = self.todd()?;
        euler_from_ch_td(&chern.chern_character()?, &td)
    }
}
