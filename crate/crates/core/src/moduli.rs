//! Moduli-space dimension counts: Grassmann fibers, tangent and obstruction
//! spaces, the dimension and codimension of the syzygy locus, and the
//! closed-form formulas for line bundles on irregular varieties.
//!
//! Two tangent conventions coexist for the pair space: the Grassmann-bundle
//! description `ext^1(F,F) + w(v-w)` (primary), and the quotient description
//! `h^0(S* (x) F) - dim W (x) W*`; the frame-bundle count subtracts `w^2 - 1`
//! instead of `w^2`. All three are reported; they differ by the scalar
//! automorphisms and the calculator does not adjudicate.

use serde::Serialize;

use crate::cohom::{les_solve, table_sum, CohomologyTable, DimEntry, Prov, SesProblem};
use crate::error::{Error, Result};
use crate::sheaf::{BundleFacts, Resolver, SheafContext, SheafExpr, VarietySpec};
use crate::syzygy::{
    build_syzygy_with, end_euler_char, endo_cohomology_of, Embedding, SyzygyResult, Tri,
};

pub const CONVENTION_NOTE: &str = "tangent conventions: geometric = ext^1(F,F) + w(v-w) \
    (Grassmann bundle, primary); quotient subtracts dim W(x)W* = w^2 from hom(S,F); the \
    frame-bundle count subtracts w^2 - 1. The quotient and geometric values differ by the \
    scalar automorphisms.";

/// `dim Gr(w, v) = w(v - w)`.
pub fn grassmann_dim(w: u64, v: u64) -> Result<u64> {
    if w == 0 || w > v {
        return Err(Error::Precondition(format!(
            "grassmann_dim needs 0 < w <= v, got w = {w}, v = {v}"
        )));
    }
    Ok(w * (v - w))
}

/// Tangent and obstruction dimensions of the simple-sheaf moduli at `[S]`:
/// `(h^1, h^2)` of the endomorphism table.
pub fn tangent_obstruction_spl(endo: &CohomologyTable) -> (DimEntry, DimEntry) {
    (endo.h(1), endo.h(2))
}

/// Dimension of the simple-sheaf moduli at `[S]` as `1 - chi(S (x) S*)`.
/// Requires established simplicity, vanishing obstruction space, and
/// Riemann-Roch support.
pub fn dim_spl_via_hrr(
    s: &BundleFacts,
    ext2: DimEntry,
    simple: bool,
    x: &VarietySpec,
) -> Result<u64> {
    if !simple {
        return Err(Error::UnknownBlocked(
            "dim via Riemann-Roch needs established simplicity".into(),
        ));
    }
    if ext2 != DimEntry::Exact(0) {
        return Err(Error::UnknownBlocked(format!(
            "dim via Riemann-Roch needs ext^2 = 0; it is {ext2:?}"
        )));
    }
    let chi = end_euler_char(s, x)?;
    let dim = 1 - chi;
    u64::try_from(dim).map_err(|_| {
        Error::Internal(format!(
            "1 - chi(End S) = {dim} is negative despite simplicity and ext^2 = 0"
        ))
    })
}

/// Closed-form record for line bundles with vanishing higher cohomology.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LemmaFormulas {
    pub w: u64,
    pub h0_f: u64,
    pub h1_ox: u64,
    /// `h^0(S* (x) F) = w h^0(F) + h^1(O_X) - 1`.
    pub hom_sf: u64,
    /// `w (h^0(F) - w) + h^1(O_X) - 1` (quotient by W (x) W*).
    pub quotient_dim_gl: i64,
    /// `w (h^0(F) - w) + h^1(O_X)` (quotient by the frame-bundle group).
    pub quotient_dim_pgl: u64,
    /// `h^1(S) = h^0(F) - w + w h^1(O_X)`.
    pub h1_s: u64,
    /// `w h^1(S) <= ext^1(S, S)`.
    pub ext1_lower: u64,
    /// `ext1_lower - quotient_dim_gl`; positive means the differential
    /// cannot surject.
    pub surjectivity_gap: i64,
    /// Same gap against the frame-bundle convention.
    pub surjectivity_gap_pgl: i64,
    pub convention_note: &'static str,
}

/// Instantiate the closed-form dimension formulas for a line bundle `F` with
/// `h^i(F) = 0` for `i > 0` on a variety with irregularity `h^1(O_X)`.
pub fn lemma_formulas(w: u64, h0_f: u64, h1_ox: u64) -> Result<LemmaFormulas> {
    if w == 0 || w > h0_f {
        return Err(Error::Precondition(format!(
            "need 0 < w <= h^0(F), got w = {w}, h^0(F) = {h0_f}"
        )));
    }
    let hom_sf = w * h0_f + h1_ox - 1;
    let fiber = w * (h0_f - w);
    let quotient_dim_gl = (fiber + h1_ox) as i64 - 1;
    let quotient_dim_pgl = fiber + h1_ox;
    let h1_s = h0_f - w + w * h1_ox;
    let ext1_lower = w * h1_s;
    Ok(LemmaFormulas {
        w,
        h0_f,
        h1_ox,
        hom_sf,
        quotient_dim_gl,
        quotient_dim_pgl,
        h1_s,
        ext1_lower,
        surjectivity_gap: ext1_lower as i64 - quotient_dim_gl,
        surjectivity_gap_pgl: ext1_lower as i64 - quotient_dim_pgl as i64,
        convention_note: CONVENTION_NOTE,
    })
}

fn entry_add(a: DimEntry, b: DimEntry) -> DimEntry {
    match (a.normalized(), b.normalized()) {
        (DimEntry::Exact(x), DimEntry::Exact(y)) => DimEntry::Exact(x + y),
        (x, y) => DimEntry::AtLeast(x.lower_bound() + y.lower_bound()).normalized(),
    }
}

/// `ext^1(F, F)` as far as the facts decide it: `h^1(O_X)` for rank one,
/// zero for bundles known rigid.
pub fn ext1_of_f(f: &BundleFacts, x: &VarietySpec) -> DimEntry {
    if f.rank == 1 {
        return DimEntry::Exact(x.irregularity());
    }
    if f.rigid.is_true() {
        return DimEntry::Exact(0);
    }
    DimEntry::Unknown
}

/// Strip twists and duals (which do not change the endomorphism bundle) down
/// to a syzygy of a line bundle, when the expression has that shape.
fn base_line_syzygy(e: &SheafExpr) -> Option<(i64, usize)> {
    match e.normalize() {
        SheafExpr::SyzygyOf(f, w) => match *f {
            SheafExpr::LineBundle(d) => Some((d, w)),
            _ => None,
        },
        SheafExpr::Twist(inner, _) | SheafExpr::Dual(inner) => base_line_syzygy(&inner),
        _ => None,
    }
}

/// `ext^1(F, F)` with the endomorphism chase available: twists and duals of
/// syzygy bundles of line bundles reduce to the chase on the base pair.
pub fn ext1_of_f_with(resolver: &mut Resolver, f: &BundleFacts) -> DimEntry {
    let direct = ext1_of_f(f, &resolver.ctx.variety);
    if direct != DimEntry::Unknown {
        return direct;
    }
    if let Some((d, w)) = base_line_syzygy(&f.expr) {
        let chased = build_syzygy_with(resolver, &SheafExpr::o(d), w)
            .and_then(|base| endo_cohomology_of(resolver, &base));
        if let Ok(end) = chased {
            return end.h(1);
        }
    }
    DimEntry::Unknown
}

/// Both tangent descriptions of the pair space at `(F, W)`.
#[derive(Clone, Debug, Serialize)]
pub struct TangentG0 {
    /// `ext^1(F,F) + w(v-w)`.
    pub geometric: DimEntry,
    /// `h^0(S* (x) F) - w^2`.
    pub quot_based: DimEntry,
    /// `h^0(S* (x) F) - (w^2 - 1)`.
    pub quot_pgl: DimEntry,
    pub hom_sf: DimEntry,
    pub convention_note: &'static str,
}

/// `h^0(S* (x) F)` by chasing `0 -> O_X -> F^w -> S* (x) F -> 0`
/// (the dual sequence tensored with the rank-one `F`).
pub fn hom_s_f(resolver: &mut Resolver, f: &BundleFacts, w: usize) -> Result<DimEntry> {
    if f.rank != 1 {
        return Ok(DimEntry::Unknown);
    }
    let n = resolver.ctx.variety.n;
    let a = resolver.facts(&SheafExpr::o(0))?.h;
    let b = table_sum(&[(&f.h, w as u64)])?;
    let p = SesProblem::new(a, b, CohomologyTable::unknown(n))?;
    let solved = les_solve(&p)?;
    Ok(solved.c.h(0))
}

pub fn tangent_g0(
    resolver: &mut Resolver,
    result: &SyzygyResult,
) -> Result<TangentG0> {
    let w = result.w as u64;
    let ext1f = ext1_of_f_with(resolver, &result.f);
    let fiber = match result.f.sections() {
        Some(v) => DimEntry::Exact(grassmann_dim(w, v)?),
        None => DimEntry::Unknown,
    };
    let geometric = entry_add(ext1f, fiber);
    let hom = hom_s_f(resolver, &result.f, result.w)?;
    let sub = |h: DimEntry, k: u64| -> DimEntry {
        match h {
            DimEntry::Exact(v) if v >= k => DimEntry::Exact(v - k),
            DimEntry::Exact(_) => DimEntry::Unknown,
            DimEntry::AtLeast(v) if v >= k => DimEntry::AtLeast(v - k).normalized(),
            _ => DimEntry::Unknown,
        }
    };
    Ok(TangentG0 {
        geometric,
        quot_based: sub(hom, w * w),
        quot_pgl: sub(hom, w * w - 1),
        hom_sf: hom,
        convention_note: CONVENTION_NOTE,
    })
}

/// Dimension data of the syzygy locus inside the simple-sheaf moduli.
#[derive(Clone, Debug, Serialize)]
pub struct SyzLocusDims {
    /// `ext^1(F,F) + w(v-w)`.
    pub dim_syz: DimEntry,
    pub codim: DimEntry,
    pub codim_source: Option<Prov>,
    /// `h^2(S (x) F*)` on surfaces: the conormal fiber dimension.
    pub normal_fiber_dim: Option<DimEntry>,
}

/// Dimension and codimension of the image of the syzygy construction at a
/// point with `F` of rank one and `[F]` in U.
pub fn syz_locus_dims(
    resolver: &mut Resolver,
    result: &SyzygyResult,
    dim_spl_at_s: DimEntry,
) -> Result<SyzLocusDims> {
    if result.membership.in_u != Tri::Holds {
        return Err(Error::UnknownBlocked(
            "syzygy-locus dimensions need [F] in U".into(),
        ));
    }
    let w = result.w as u64;
    let ext1f = ext1_of_f_with(resolver, &result.f);
    if ext1f == DimEntry::Unknown {
        return Err(Error::Unsupported(
            "syzygy-locus dimensions need ext^1(F,F): a line bundle, a rigid bundle, \
             or a syzygy of a line bundle"
                .into(),
        ));
    }
    let fiber = match result.f.sections() {
        Some(v) => DimEntry::Exact(grassmann_dim(w, v)?),
        None => DimEntry::Unknown,
    };
    let dim_syz = entry_add(ext1f, fiber);
    // Conormal fiber on surfaces: h^2(S (x) F*) for F = O(d).
    let x = &resolver.ctx.variety;
    let normal_fiber_dim = if x.n == 2 && x.is_pn() {
        match result.f.expr.normalize() {
            SheafExpr::LineBundle(d) => {
                let t = resolver.facts(&SheafExpr::twist(
                    SheafExpr::syz(result.f.expr.clone(), result.w),
                    -d,
                ))?;
                Some(t.h.h(2))
            }
            _ => None,
        }
    } else {
        None
    };
    let (codim, codim_source) = if result.embedding == Embedding::OpenEmbedding {
        (DimEntry::Exact(0), Some(Prov::Theorem))
    } else {
        match (dim_spl_at_s, dim_syz) {
            (DimEntry::Exact(ambient), DimEntry::Exact(locus)) => {
                if ambient < locus {
                    return Err(Error::Internal(format!(
                        "dim Spl = {ambient} smaller than the locus dimension {locus}"
                    )));
                }
                (DimEntry::Exact(ambient - locus), Some(Prov::Solver))
            }
            _ => (DimEntry::Unknown, None),
        }
    };
    // Cross-check: on surfaces the conormal fiber must agree with the
    // codimension whenever both are exact.
    if let (Some(DimEntry::Exact(nf)), DimEntry::Exact(cd)) =
        (normal_fiber_dim.as_ref().map(|e| e.normalized()), codim)
    {
        if nf != cd {
            return Err(Error::Internal(format!(
                "conormal fiber dimension {nf} disagrees with codimension {cd}"
            )));
        }
    }
    Ok(SyzLocusDims {
        dim_syz,
        codim,
        codim_source,
        normal_fiber_dim,
    })
}

/// The assembled dimension report for one `(F, w)` pair.
#[derive(Clone, Debug, Serialize)]
pub struct ModuliReport {
    pub w: u64,
    pub v: DimEntry,
    pub dim_g0_fiber: DimEntry,
    pub dim_u_tangent_at_f: DimEntry,
    pub dim_g0_tangent: DimEntry,
    pub quot_tangent_w2: DimEntry,
    pub quot_tangent_pgl: DimEntry,
    pub hom_s_f: DimEntry,
    pub tangent_spl_s: DimEntry,
    pub tangent_source: Option<Prov>,
    pub obstruction_spl_s: DimEntry,
    pub obstruction_source: Option<Prov>,
    pub dim_spl_at_s: DimEntry,
    pub dim_spl_source: Option<Prov>,
    pub dim_syz: DimEntry,
    pub codim_syz: DimEntry,
    pub codim_source: Option<Prov>,
    pub normal_fiber_dim: Option<DimEntry>,
    pub convention_note: &'static str,
}

/// Compute everything the tables support for `(F, w)`; pieces that cannot be
/// pinned come back `Unknown` rather than failing the whole report.
pub fn moduli_report(f_expr: &SheafExpr, w: usize, ctx: &SheafContext) -> Result<ModuliReport> {
    let mut resolver = Resolver::new(ctx);
    let result = build_syzygy_with(&mut resolver, f_expr, w)?;
    moduli_report_for(&mut resolver, &result)
}

/// Assemble the report for an already-built syzygy result.
pub fn moduli_report_for(
    resolver: &mut Resolver,
    result: &SyzygyResult,
) -> Result<ModuliReport> {
    let ctx = resolver.ctx;
    let w = result.w;
    let x = &ctx.variety;
    let v = result.f.sections();
    let dim_g0_fiber = match v {
        Some(v) => DimEntry::Exact(grassmann_dim(w as u64, v)?),
        None => DimEntry::Unknown,
    };
    let endo = endo_cohomology_of(resolver, result).ok();
    let (tangent, obstruction) = endo
        .as_ref()
        .map(tangent_obstruction_spl)
        .unwrap_or((DimEntry::Unknown, DimEntry::Unknown));
    let (tangent_source, obstruction_source) = endo
        .as_ref()
        .map(|e| (e.sources[1], e.sources[2]))
        .unwrap_or((None, None));
    let (mut dim_spl, mut dim_spl_source) = (DimEntry::Unknown, None);
    if obstruction == DimEntry::Exact(0) {
        if let DimEntry::Exact(t) = tangent {
            dim_spl = DimEntry::Exact(t);
            dim_spl_source = Some(Prov::Solver);
        }
        if result.s.simple.is_true() && x.is_ringed() && x.n <= 3 {
            if let Ok(d) = dim_spl_via_hrr(&result.s, obstruction, true, x) {
                match dim_spl {
                    DimEntry::Exact(t) if t != d => {
                        return Err(Error::Internal(format!(
                            "tangent pipeline gives {t} but 1 - chi gives {d}"
                        )));
                    }
                    DimEntry::Exact(_) => {}
                    _ => {
                        dim_spl = DimEntry::Exact(d);
                        dim_spl_source = Some(Prov::Hrr);
                    }
                }
            }
        }
    }
    let tg = tangent_g0(resolver, result)?;
    let (dim_syz, codim, codim_source, normal_fiber) =
        if result.membership.in_u == Tri::Holds {
            match syz_locus_dims(resolver, result, dim_spl) {
                Ok(locus) => (
                    locus.dim_syz,
                    locus.codim,
                    locus.codim_source,
                    locus.normal_fiber_dim,
                ),
                Err(Error::Unsupported(_)) => (DimEntry::Unknown, DimEntry::Unknown, None, None),
                Err(e) => return Err(e),
            }
        } else {
            (DimEntry::Unknown, DimEntry::Unknown, None, None)
        };
    Ok(ModuliReport {
        w: w as u64,
        v: v.map(DimEntry::Exact).unwrap_or(DimEntry::Unknown),
        dim_g0_fiber,
        dim_u_tangent_at_f: ext1_of_f_with(resolver, &result.f),
        dim_g0_tangent: tg.geometric,
        quot_tangent_w2: tg.quot_based,
        quot_tangent_pgl: tg.quot_pgl,
        hom_s_f: tg.hom_sf,
        tangent_spl_s: tangent,
        tangent_source,
        obstruction_spl_s: obstruction,
        obstruction_source,
        dim_spl_at_s: dim_spl,
        dim_spl_source,
        dim_syz,
        codim_syz: codim,
        codim_source,
        normal_fiber_dim: normal_fiber,
        convention_note: CONVENTION_NOTE,
    })
}
