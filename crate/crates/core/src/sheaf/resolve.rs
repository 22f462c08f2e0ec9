//! Structural resolution of sheaf expressions into bundle facts.
//!
//! Rank and Chern data go by structural recursion (Whitney products, series
//! inversion for syzygies, the twist formula). Cohomology tables come from:
//! closed forms for line bundles on `P^n`, entrywise sums for direct sums,
//! and dimension chases on the defining sequence of a syzygy bundle
//! `0 -> S -> O(k)^w -> F(k) -> 0` and its dual
//! `0 -> F*(k) -> O(k)^w -> S*(k) -> 0`. Each chase is complemented by its
//! Serre-dual chase, and remaining gaps for twisted syzygies are closed by
//! regularity propagation: once `E` is checked `m`-regular, `h^i(E(k)) = 0`
//! for `i >= 1, k >= m - i`, and `E(k)` is globally generated for `k >= m`.
//!
//! Anything the rules cannot pin stays `Unknown`; resolution never guesses.

use std::collections::{BTreeMap, HashMap, HashSet};

use num_rational::BigRational;
use serde::Serialize;

use crate::cohom::{
    les_solve, line_bundle_cohom_pn, table_sum, CohomologyTable, DimEntry, Prov, SesProblem,
};
use crate::error::{Error, Result};
use crate::ring::{ChernPolynomial, GradedClass};
use crate::sheaf::expr::SheafExpr;
use crate::sheaf::variety::{Omega, VarietySpec};

/// Tri-state fact with a record of where it came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Flag {
    pub value: Option<bool>,
    pub source: Option<Prov>,
}

impl Flag {
    pub fn unknown() -> Flag {
        Flag {
            value: None,
            source: None,
        }
    }
    pub fn yes(p: Prov) -> Flag {
        Flag {
            value: Some(true),
            source: Some(p),
        }
    }
    pub fn no(p: Prov) -> Flag {
        Flag {
            value: Some(false),
            source: Some(p),
        }
    }
    pub fn is_true(&self) -> bool {
        self.value == Some(true)
    }
    pub fn is_false(&self) -> bool {
        self.value == Some(false)
    }
}

/// Everything the calculator knows about one sheaf expression.
#[derive(Clone, Debug)]
pub struct BundleFacts {
    pub expr: SheafExpr,
    pub rank: usize,
    pub chern: Option<ChernPolynomial>,
    pub h: CohomologyTable,
    pub h_dual: CohomologyTable,
    pub globally_generated: Flag,
    pub simple: Flag,
    pub rigid: Flag,
    /// Set when the bundle is known to split as a sum of line bundles.
    pub split_line_degrees: Option<Vec<i64>>,
}

impl BundleFacts {
    /// `v = h^0`, when pinned.
    pub fn sections(&self) -> Option<u64> {
        self.h.exact_value(0)
    }

    /// Scalar Chern classes `c_1..c_n` on a `P^n` ring, when integral.
    pub fn chern_scalars(&self) -> Option<Vec<BigRational>> {
        let c = self.chern.as_ref()?;
        Some((1..=c.ring().dim).map(|i| c.c_i(i)).collect())
    }
}

/// A named bundle backed by user data instead of structure.
#[derive(Clone, Debug, Default)]
pub struct OpaqueBundle {
    pub name: String,
    pub rank: usize,
    /// `c_1..c_n` (tail zeros may be omitted); `P^n` coordinates.
    pub chern: Option<Vec<BigRational>>,
    pub h: Option<Vec<DimEntry>>,
    pub h_dual: Option<Vec<DimEntry>>,
    /// Shortcut for supplying just `h^0` of the dual (used to sharpen
    /// lower bounds into exact values).
    pub h0_dual: Option<u64>,
    /// Kernel degrees of a resolution `0 -> (+) O(d_i) -> O^m -> F -> 0`
    /// whose middle map is an evaluation of a basis of `H^0(F)`.
    pub resolution: Option<Vec<i64>>,
    pub globally_generated: Option<bool>,
    pub simple: Option<bool>,
    pub rigid: Option<bool>,
}

/// A variety together with its registry of opaque bundles.
#[derive(Clone, Debug)]
pub struct SheafContext {
    pub variety: VarietySpec,
    pub bundles: BTreeMap<String, OpaqueBundle>,
}

impl SheafContext {
    pub fn new(variety: VarietySpec) -> Result<SheafContext> {
        variety.validate()?;
        Ok(SheafContext {
            variety,
            bundles: BTreeMap::new(),
        })
    }

    pub fn with_bundle(mut self, b: OpaqueBundle) -> SheafContext {
        self.bundles.insert(b.name.clone(), b);
        self
    }
}

/// Resolve the facts for one expression. Convenience wrapper around
/// [`Resolver`] for one-shot use.
pub fn resolve_facts(e: &SheafExpr, ctx: &SheafContext) -> Result<BundleFacts> {
    Resolver::new(ctx).facts(e)
}

/// Expression resolver with per-call memoization.
pub struct Resolver<'a> {
    pub ctx: &'a SheafContext,
    memo: HashMap<SheafExpr, BundleFacts>,
    reg_memo: HashMap<SheafExpr, Option<i64>>,
    reg_stack: HashSet<SheafExpr>,
}

impl<'a> Resolver<'a> {
    pub fn new(ctx: &'a SheafContext) -> Resolver<'a> {
        Resolver {
            ctx,
            memo: HashMap::new(),
            reg_memo: HashMap::new(),
            reg_stack: HashSet::new(),
        }
    }

    fn n(&self) -> usize {
        self.ctx.variety.n
    }

    fn omega_degree(&self) -> Option<i64> {
        match self.ctx.variety.omega {
            Omega::LineDegree(d) => Some(d),
            Omega::Trivial => None,
        }
    }

    /// Facts for a (not necessarily normalized) expression.
    pub fn facts(&mut self, e: &SheafExpr) -> Result<BundleFacts> {
        let e = e.normalize();
        if let Some(f) = self.memo.get(&e) {
            return Ok(f.clone());
        }
        let mut f = self.facts_uncached(&e)?;
        // On a trivial canonical class, Serre duality pairs a table with its
        // own dual: h^i(E) = h^{n-i}(E*).
        if self.ctx.variety.omega == Omega::Trivial {
            let rev_dual = f.h_dual.reversed();
            f.h.merge(&rev_dual, Prov::Solver)?;
            let rev = f.h.reversed();
            f.h_dual.merge(&rev, Prov::Solver)?;
        }
        f.h.try_complete_euler();
        f.h_dual.try_complete_euler();
        // Memoize only outside regularity scans; scan-time facts are computed
        // with the fill for the scanned expression disabled.
        if self.reg_stack.is_empty() {
            self.memo.insert(e, f.clone());
        }
        Ok(f)
    }

    fn facts_uncached(&mut self, e: &SheafExpr) -> Result<BundleFacts> {
        let n = self.n();
        let x = &self.ctx.variety;
        match e {
            SheafExpr::LineBundle(d) => self.line_bundle_facts(*d),
            SheafExpr::DirectSum(items) => {
                let mut parts: Vec<(BundleFacts, usize)> = Vec::new();
                for (item, mult) in items {
                    parts.push((self.facts(item)?, *mult));
                }
                let rank = parts.iter().map(|(f, m)| f.rank * m).sum();
                let mut chern = x
                    .ring
                    .as_ref()
                    .map(|r| ChernPolynomial::trivial(r, 0));
                for (f, m) in &parts {
                    chern = match (chern, &f.chern) {
                        (Some(acc), Some(c)) => {
                            let mut acc = acc;
                            for _ in 0..*m {
                                acc = acc.whitney(c)?;
                            }
                            Some(acc)
                        }
                        _ => None,
                    };
                }
                let h_terms: Vec<(&CohomologyTable, u64)> =
                    parts.iter().map(|(f, m)| (&f.h, *m as u64)).collect();
                let h = table_sum(&h_terms)?;
                let dual_terms: Vec<(&CohomologyTable, u64)> =
                    parts.iter().map(|(f, m)| (&f.h_dual, *m as u64)).collect();
                let h_dual = table_sum(&dual_terms)?;
                let gg = if parts.iter().all(|(f, _)| f.globally_generated.is_true()) {
                    Flag::yes(Prov::Solver)
                } else if parts.iter().any(|(f, _)| f.globally_generated.is_false()) {
                    Flag::no(Prov::Solver)
                } else {
                    Flag::unknown()
                };
                let count: usize = parts.iter().map(|(_, m)| *m).sum();
                let simple = if count >= 2 {
                    Flag::no(Prov::Solver)
                } else {
                    parts[0].0.simple
                };
                let split = e.split_line_degrees();
                // Sums of line bundles on P^n are rigid: h^1 of every line
                // bundle vanishes for n >= 2.
                let rigid = if split.is_some() && x.is_pn() {
                    Flag::yes(Prov::Solver)
                } else {
                    Flag::unknown()
                };
                Ok(BundleFacts {
                    expr: e.clone(),
                    rank,
                    chern,
                    h,
                    h_dual,
                    globally_generated: gg,
                    simple,
                    rigid,
                    split_line_degrees: split,
                })
            }
            SheafExpr::Dual(inner) => match inner.as_ref() {
                SheafExpr::SyzygyOf(f_expr, w) => {
                    let base = self.syzygy_facts(f_expr, *w, e)?;
                    Ok(dualized(base, e))
                }
                _ => {
                    let base = self.facts(inner)?;
                    Ok(dualized(base, e))
                }
            },
            SheafExpr::SyzygyOf(f_expr, w) => self.syzygy_facts(f_expr, *w, e),
            SheafExpr::Twist(inner, k) => match inner.as_ref() {
                SheafExpr::SyzygyOf(f_expr, w) => self.twisted_syzygy_facts(f_expr, *w, *k, false, e),
                SheafExpr::Dual(inner2) => match inner2.as_ref() {
                    SheafExpr::SyzygyOf(f_expr, w) => {
                        self.twisted_syzygy_facts(f_expr, *w, *k, true, e)
                    }
                    _ => {
                        let base = self.facts(&SheafExpr::dual(inner2.as_ref().clone()))?;
                        self.opaque_twist_facts(base, *k, e)
                    }
                },
                _ => {
                    let base = self.facts(inner)?;
                    self.opaque_twist_facts(base, *k, e)
                }
            },
            SheafExpr::Tensor(_, _) => Err(Error::Unsupported(
                "tensor of two non-line-bundle expressions has no reliable table; \
                 use the endomorphism chain instead"
                    .into(),
            )),
            SheafExpr::Opaque(name) => {
                let b = self
                    .ctx
                    .bundles
                    .get(name)
                    .cloned()
                    .ok_or_else(|| Error::InvalidInput(format!("unknown opaque bundle `{name}`")))?;
                self.opaque_facts(&b, e)
            }
        }
        .map(|mut f| {
            f.h.try_complete_euler();
            f.h_dual.try_complete_euler();
            f
        })
        .and_then(|f| {
            if f.h.dim() != n || f.h_dual.dim() != n {
                return Err(Error::Internal("table dimension drift".into()));
            }
            Ok(f)
        })
    }

    fn line_bundle_facts(&mut self, d: i64) -> Result<BundleFacts> {
        let x = &self.ctx.variety;
        let n = x.n;
        let expr = SheafExpr::LineBundle(d);
        let chern = x
            .ring
            .as_ref()
            .map(|r| {
                let mut coeffs = vec![1i64, d];
                coeffs.truncate(n + 1);
                GradedClass::from_h_i64(r, &coeffs).and_then(|t| ChernPolynomial::new(t, 1))
            })
            .transpose()?;
        // Line bundles are simple on any connected X: End(L) = O_X.
        let simple = Flag::yes(Prov::Solver);
        // ext^1(L, L) = h^1(O_X).
        let rigid = if x.irregularity() == 0 {
            Flag::yes(Prov::Solver)
        } else {
            Flag::no(Prov::Solver)
        };
        if x.is_pn() {
            let h = line_bundle_cohom_pn(n, d)?;
            let h_dual = line_bundle_cohom_pn(n, -d)?;
            let gg = if d >= 0 {
                Flag::yes(Prov::Solver)
            } else {
                Flag::no(Prov::Solver)
            };
            return Ok(BundleFacts {
                expr,
                rank: 1,
                chern,
                h,
                h_dual,
                globally_generated: gg,
                simple,
                rigid,
                split_line_degrees: Some(vec![d]),
            });
        }
        if d == 0 {
            // The structure sheaf is known on every catalog variety.
            return Ok(BundleFacts {
                expr,
                rank: 1,
                chern,
                h: x.h_o.clone(),
                h_dual: x.h_o.clone(),
                globally_generated: Flag::yes(Prov::Solver),
                simple,
                rigid,
                split_line_degrees: Some(vec![0]),
            });
        }
        // No closed form away from P^n: tables stay unknown.
        Ok(BundleFacts {
            expr,
            rank: 1,
            chern,
            h: CohomologyTable::unknown(n),
            h_dual: CohomologyTable::unknown(n),
            globally_generated: Flag::unknown(),
            simple,
            rigid,
            split_line_degrees: Some(vec![d]),
        })
    }

    /// Table of `O^w` on this variety.
    pub fn middle_structure_table(&self, w: usize) -> Result<CohomologyTable> {
        self.middle_table(0, w)
    }

    /// Table of `O(k)^w` on this variety (exact on `P^n`; `O^w` elsewhere).
    fn middle_table(&self, k: i64, w: usize) -> Result<CohomologyTable> {
        let x = &self.ctx.variety;
        if x.is_pn() {
            let t = line_bundle_cohom_pn(x.n, k)?;
            table_sum(&[(&t, w as u64)])
        } else if k == 0 {
            table_sum(&[(&x.h_o, w as u64)])
        } else {
            Ok(CohomologyTable::unknown(x.n))
        }
    }

    /// Chase `0 -> S(k) -> O(k)^w -> F(k) -> 0` for the table of `S(k)`.
    /// At `k = 0` the map on sections is the inclusion of the chosen
    /// subspace, hence injective.
    fn chase_h(&mut self, f_expr: &SheafExpr, w: usize, k: i64) -> Result<CohomologyTable> {
        let b = self.middle_table(k, w)?;
        let c = self.facts(&SheafExpr::twist(f_expr.clone(), k))?.h;
        let mut p = SesProblem::new(CohomologyTable::unknown(self.n()), b, c)?;
        if k == 0 {
            p = p.with_h0_injective();
        }
        Ok(les_solve(&p)?.a)
    }

    /// Chase `0 -> F*(k) -> O(k)^w -> S*(k) -> 0` for the table of `S*(k)`.
    fn chase_h_dual(&mut self, f_expr: &SheafExpr, w: usize, k: i64) -> Result<CohomologyTable> {
        let a = self.facts(&SheafExpr::twist(f_expr.clone(), -k))?.h_dual;
        let b = self.middle_table(k, w)?;
        let p = SesProblem::new(a, b, CohomologyTable::unknown(self.n()))?;
        Ok(les_solve(&p)?.c)
    }

    fn validate_syzygy(&mut self, f_expr: &SheafExpr, w: usize) -> Result<BundleFacts> {
        if f_expr.is_structure_sheaf() {
            return Err(Error::Precondition(
                "syzygy of the structure sheaf is excluded".into(),
            ));
        }
        let f = self.facts(f_expr)?;
        let min_w = self.n() + f.rank;
        if w < min_w {
            return Err(Error::Precondition(format!(
                "w >= n + r required: w = {w} but n + r = {min_w}"
            )));
        }
        if let Some(v) = f.sections() {
            if (w as u64) > v {
                return Err(Error::Precondition(format!(
                    "w = {w} exceeds v = h^0 = {v}; no w-dimensional subspace exists"
                )));
            }
        }
        Ok(f)
    }

    /// Facts for `S = syz(F, w)` (untwisted).
    fn syzygy_facts(&mut self, f_expr: &SheafExpr, w: usize, expr: &SheafExpr) -> Result<BundleFacts> {
        let f = self.validate_syzygy(f_expr, w)?;
        let rank = w - f.rank;
        let chern = f
            .chern
            .as_ref()
            .map(|c| c.invert(rank))
            .transpose()?;
        let mut h = self.chase_h(f_expr, w, 0)?;
        let mut h_dual = self.chase_h_dual(f_expr, w, 0)?;
        if let Some(wd) = self.omega_degree() {
            // Serre duality: h^i(S) = h^{n-i}(S*(wd)), h^i(S*) = h^{n-i}(S(wd)).
            h.merge(&self.chase_h_dual(f_expr, w, wd)?.reversed(), Prov::Solver)?;
            h_dual.merge(&self.chase_h(f_expr, w, wd)?.reversed(), Prov::Solver)?;
        }
        let base = SheafExpr::SyzygyOf(Box::new(f_expr.normalize()), w);
        self.apply_regularity_fill(&mut h, &base, 0)?;
        self.apply_regularity_fill(&mut h_dual, &SheafExpr::dual(base.clone()).normalize(), 0)?;
        let split = self.resolution_split(f_expr, w, &f)?;
        let simple = match &split {
            Some(ds) if ds.len() >= 2 => Flag::no(Prov::Solver),
            _ => Flag::unknown(),
        };
        let rigid = match &split {
            Some(_) if self.ctx.variety.is_pn() => Flag::yes(Prov::Solver),
            _ => Flag::unknown(),
        };
        let gg = self.regularity_gg(&base, 0);
        Ok(BundleFacts {
            expr: expr.clone(),
            rank,
            chern,
            h,
            h_dual,
            globally_generated: gg,
            simple,
            rigid,
            split_line_degrees: split,
        })
    }

    /// Facts for `S(k)` or `S*(k)` where `S = syz(F, w)` and `k != 0`.
    fn twisted_syzygy_facts(
        &mut self,
        f_expr: &SheafExpr,
        w: usize,
        k: i64,
        dualized_first: bool,
        expr: &SheafExpr,
    ) -> Result<BundleFacts> {
        let f = self.validate_syzygy(f_expr, w)?;
        let rank = w - f.rank;
        let x = &self.ctx.variety;
        let chern = match (&f.chern, &x.ring) {
            (Some(cf), Some(ring)) => {
                let s = cf.invert(rank)?;
                let s = if dualized_first { s.dual() } else { s };
                let h1 = GradedClass::hyperplane(ring)?;
                Some(s.twist(&h1.scale_i64(k))?)
            }
            _ => None,
        };
        let (mut h, mut h_dual) = if dualized_first {
            (self.chase_h_dual(f_expr, w, k)?, self.chase_h(f_expr, w, -k)?)
        } else {
            (self.chase_h(f_expr, w, k)?, self.chase_h_dual(f_expr, w, -k)?)
        };
        if let Some(wd) = self.omega_degree() {
            if dualized_first {
                h.merge(&self.chase_h(f_expr, w, -k + wd)?.reversed(), Prov::Solver)?;
                h_dual.merge(&self.chase_h_dual(f_expr, w, k + wd)?.reversed(), Prov::Solver)?;
            } else {
                h.merge(&self.chase_h_dual(f_expr, w, -k + wd)?.reversed(), Prov::Solver)?;
                h_dual.merge(&self.chase_h(f_expr, w, k + wd)?.reversed(), Prov::Solver)?;
            }
        }
        let base = SheafExpr::SyzygyOf(Box::new(f_expr.normalize()), w);
        let dual_base = SheafExpr::dual(base.clone()).normalize();
        let (h_base, hd_base) = if dualized_first {
            (dual_base.clone(), base.clone())
        } else {
            (base.clone(), dual_base.clone())
        };
        self.apply_regularity_fill(&mut h, &h_base, k)?;
        self.apply_regularity_fill(&mut h_dual, &hd_base, -k)?;
        let gg = self.regularity_gg(&h_base, k);
        let simple = match self.resolution_split(f_expr, w, &f)? {
            Some(ds) if ds.len() >= 2 => Flag::no(Prov::Solver),
            _ => Flag::unknown(),
        };
        Ok(BundleFacts {
            expr: expr.clone(),
            rank,
            chern,
            h,
            h_dual,
            globally_generated: gg,
            simple,
            rigid: Flag::unknown(),
            split_line_degrees: None,
        })
    }

    /// When `F` is opaque with a line-bundle resolution whose middle term has
    /// rank `v = h^0(F)` and whose kernel has no sections or first cohomology,
    /// the evaluation of the full section space has the same kernel; so for
    /// `w = v` the syzygy bundle is that kernel.
    fn resolution_split(
        &mut self,
        f_expr: &SheafExpr,
        w: usize,
        f: &BundleFacts,
    ) -> Result<Option<Vec<i64>>> {
        let name = match f_expr.normalize() {
            SheafExpr::Opaque(name) => name,
            _ => return Ok(None),
        };
        let bundle = match self.ctx.bundles.get(&name) {
            Some(b) => b.clone(),
            None => return Ok(None),
        };
        let kernel = match &bundle.resolution {
            Some(ds) => ds.clone(),
            None => return Ok(None),
        };
        if !self.ctx.variety.is_pn() {
            return Ok(None);
        }
        let middle = bundle.rank + kernel.len();
        if f.sections() != Some(middle as u64) || w != middle {
            return Ok(None);
        }
        let n = self.n();
        let mut h0 = 0u64;
        let mut h1 = 0u64;
        for &d in &kernel {
            let t = line_bundle_cohom_pn(n, d)?;
            h0 += t.exact_value(0).unwrap_or(1);
            h1 += t.exact_value(1).unwrap_or(1);
        }
        if h0 == 0 && h1 == 0 {
            Ok(Some(kernel))
        } else {
            Ok(None)
        }
    }

    fn opaque_twist_facts(
        &mut self,
        base: BundleFacts,
        k: i64,
        expr: &SheafExpr,
    ) -> Result<BundleFacts> {
        let x = &self.ctx.variety;
        let chern = match (&base.chern, &x.ring) {
            (Some(c), Some(ring)) => {
                let h1 = GradedClass::hyperplane(ring)?;
                Some(c.twist(&h1.scale_i64(k))?)
            }
            _ => None,
        };
        let split = base
            .split_line_degrees
            .as_ref()
            .map(|ds| ds.iter().map(|d| d + k).collect());
        let n = self.n();
        Ok(BundleFacts {
            expr: expr.clone(),
            rank: base.rank,
            chern,
            h: CohomologyTable::unknown(n),
            h_dual: CohomologyTable::unknown(n),
            globally_generated: Flag::unknown(),
            simple: base.simple,
            rigid: base.rigid,
            split_line_degrees: split,
        })
    }

    fn opaque_facts(&mut self, b: &OpaqueBundle, expr: &SheafExpr) -> Result<BundleFacts> {
        let x = &self.ctx.variety;
        let n = x.n;
        if b.rank == 0 {
            return Err(Error::InvalidInput(format!(
                "opaque bundle `{}` must have positive rank",
                b.name
            )));
        }
        let mut h = CohomologyTable::unknown(n);
        if let Some(entries) = &b.h {
            if entries.len() != n + 1 {
                return Err(Error::InvalidInput(format!(
                    "bundle `{}`: h has {} entries, expected {}",
                    b.name,
                    entries.len(),
                    n + 1
                )));
            }
            for (i, e) in entries.iter().enumerate() {
                h.refine_entry(i, *e, Prov::Asserted)?;
            }
        }
        let mut h_dual = CohomologyTable::unknown(n);
        if let Some(entries) = &b.h_dual {
            if entries.len() != n + 1 {
                return Err(Error::InvalidInput(format!(
                    "bundle `{}`: h_dual has {} entries, expected {}",
                    b.name,
                    entries.len(),
                    n + 1
                )));
            }
            for (i, e) in entries.iter().enumerate() {
                h_dual.refine_entry(i, *e, Prov::Asserted)?;
            }
        }
        if let Some(k) = b.h0_dual {
            h_dual.refine_entry(0, DimEntry::Exact(k), Prov::Asserted)?;
        }
        let gg = match b.globally_generated {
            Some(true) => Flag::yes(Prov::Asserted),
            Some(false) => Flag::no(Prov::Asserted),
            None => Flag::unknown(),
        };
        let simple = match b.simple {
            Some(true) => Flag::yes(Prov::Asserted),
            Some(false) => Flag::no(Prov::Asserted),
            None => Flag::unknown(),
        };
        let rigid = match b.rigid {
            Some(true) => Flag::yes(Prov::Asserted),
            Some(false) => Flag::no(Prov::Asserted),
            None => Flag::unknown(),
        };
        // A simple globally generated bundle other than O_X has no
        // co-sections: h^0(F*) = 0.
        let nontrivial = b.rank >= 2
            || b
                .chern
                .as_ref()
                .map(|c| c.iter().any(|q| !num_traits::Zero::is_zero(q)))
                .unwrap_or(false);
        if simple.is_true() && gg.is_true() && nontrivial {
            h_dual.refine_entry(0, DimEntry::Exact(0), Prov::Theorem)?;
        }
        // Chern data; classes of actual bundles on P^n are integral.
        let mut chern = None;
        if let Some(ring) = &x.ring {
            if let Some(cs) = &b.chern {
                let mut coeffs = vec![BigRational::from_integer(1.into())];
                coeffs.extend(cs.iter().cloned());
                if coeffs.len() > n + 1 {
                    coeffs.truncate(n + 1);
                }
                let total = GradedClass::from_h_coeffs(ring, &coeffs)?;
                if x.is_pn() && !total.is_integral() {
                    return Err(Error::InvalidInput(format!(
                        "bundle `{}`: Chern classes on P^n must be integers",
                        b.name
                    )));
                }
                chern = Some(ChernPolynomial::new(total, b.rank)?);
            }
        }
        // Resolution-derived tables and Chern consistency.
        if let Some(kernel) = &b.resolution {
            if !x.is_pn() {
                return Err(Error::Unsupported(
                    "line-bundle resolutions are only interpreted on P^n".into(),
                ));
            }
            let kernel_expr = SheafExpr::DirectSum(
                kernel.iter().map(|&d| (SheafExpr::LineBundle(d), 1)).collect(),
            )
            .normalize();
            let kf = self.facts(&kernel_expr)?;
            let middle = b.rank + kernel.len();
            // 0 -> K -> O^m -> F -> 0 resolves h(F).
            let bt = self.middle_table(0, middle)?;
            let p = SesProblem::new(kf.h.clone(), bt.clone(), h.clone())?;
            let solved = les_solve(&p)?;
            h = solved.c;
            // 0 -> F* -> O^m -> K* -> 0 resolves h(F*).
            let p = SesProblem::new(h_dual.clone(), bt, kf.h_dual.clone())?;
            let solved = les_solve(&p)?;
            h_dual = solved.a;
            // Whitney consistency: c(K) c(F) = 1.
            if let (Some(ck), Some(cf)) = (&kf.chern, &chern) {
                let prod = ck.total().mul(cf.total())?;
                if &prod != ChernPolynomial::trivial(x.ring.as_ref().unwrap(), 0).total() {
                    return Err(Error::InvalidInput(format!(
                        "bundle `{}`: resolution kernel Chern class does not invert the given chern",
                        b.name
                    )));
                }
            } else if chern.is_none() {
                if let Some(ck) = &kf.chern {
                    chern = Some(ck.invert(b.rank)?);
                }
            }
        }
        Ok(BundleFacts {
            expr: expr.clone(),
            rank: b.rank,
            chern,
            h,
            h_dual,
            globally_generated: gg,
            simple,
            rigid,
            split_line_degrees: None,
        })
    }

    // ---- Castelnuovo-Mumford regularity ----

    /// Least `m` with `h^i(E(m-i)) = 0` for all `i >= 1`, by upward scan.
    /// Refuses when the required twisted tables are not pinned.
    pub fn regularity(&mut self, e: &SheafExpr) -> Result<i64> {
        let e = e.normalize();
        if !self.ctx.variety.is_pn() {
            return Err(Error::Unsupported(
                "regularity scan requires line-bundle cohomology (P^n)".into(),
            ));
        }
        if let Some(cached) = self.reg_memo.get(&e) {
            return cached.ok_or_else(|| {
                Error::UnknownBlocked(format!("regularity of {e} is not determined by the tables"))
            });
        }
        if self.reg_stack.contains(&e) {
            return Err(Error::UnknownBlocked(format!(
                "regularity of {e} already in progress"
            )));
        }
        self.reg_stack.insert(e.clone());
        let result = self.regularity_scan(&e);
        self.reg_stack.remove(&e);
        match &result {
            Ok(m) => {
                self.reg_memo.insert(e, Some(*m));
            }
            Err(Error::UnknownBlocked(_)) => {
                self.reg_memo.insert(e, None);
            }
            Err(_) => {}
        }
        result
    }

    fn regularity_scan(&mut self, e: &SheafExpr) -> Result<i64> {
        let n = self.n() as i64;
        let start = -e.degree_bound() - n - 1;
        let cap = start + 2 * e.degree_bound() + 2 * n + 60;
        for m in start..=cap {
            let mut all_zero = true;
            for i in 1..=n {
                let t = self.facts(&SheafExpr::twist(e.clone(), m - i))?;
                match t.h.h(i as usize) {
                    DimEntry::Exact(0) => {}
                    DimEntry::Exact(_) => {
                        all_zero = false;
                        break;
                    }
                    _ => {
                        return Err(Error::UnknownBlocked(format!(
                            "regularity of {e}: h^{i} of the twist by {} is not pinned",
                            m - i
                        )));
                    }
                }
            }
            if all_zero {
                return Ok(m);
            }
        }
        Err(Error::UnknownBlocked(format!(
            "no regularity found for {e} within the scan bound {cap}"
        )))
    }

    fn try_regularity(&mut self, e: &SheafExpr) -> Option<i64> {
        self.regularity(e).ok()
    }

    /// Once `base` is `m`-regular, `h^i(base(k)) = 0` for `i >= 1`,
    /// `k >= m - i`; close table gaps accordingly and complete `h^0` from
    /// the Euler characteristic.
    fn apply_regularity_fill(
        &mut self,
        table: &mut CohomologyTable,
        base: &SheafExpr,
        k: i64,
    ) -> Result<()> {
        let n = self.n();
        let needs_fill = (1..=n).any(|i| table.h(i).exact().is_none());
        if !needs_fill || !self.ctx.variety.is_pn() {
            table.complete_from_euler(Prov::Solver)?;
            return Ok(());
        }
        if let Some(m) = self.try_regularity(base) {
            for i in 1..=n {
                if k >= m - i as i64 {
                    table.refine_entry(i, DimEntry::Exact(0), Prov::Theorem)?;
                }
            }
        }
        table.complete_from_euler(Prov::Theorem)?;
        Ok(())
    }

    fn regularity_gg(&mut self, base: &SheafExpr, k: i64) -> Flag {
        if !self.ctx.variety.is_pn() {
            return Flag::unknown();
        }
        match self.try_regularity(base) {
            Some(m) if k >= m => Flag::yes(Prov::Theorem),
            _ => Flag::unknown(),
        }
    }
}

fn dualized(base: BundleFacts, expr: &SheafExpr) -> BundleFacts {
    BundleFacts {
        expr: expr.clone(),
        rank: base.rank,
        chern: base.chern.as_ref().map(|c| c.dual()),
        h: base.h_dual.clone(),
        h_dual: base.h.clone(),
        globally_generated: Flag::unknown(),
        simple: base.simple,
        rigid: base.rigid,
        split_line_degrees: base
            .split_line_degrees
            .as_ref()
            .map(|ds| ds.iter().map(|d| -d).collect()),
    }
}

/// Record a user assertion of global generation, with the built-in automatic
/// cases: non-negative line bundles on `P^n` are globally generated, negative
/// ones are not, and conflicting assertions are rejected.
pub fn assert_global_generation(
    facts: &mut BundleFacts,
    asserted: Option<bool>,
) -> Result<()> {
    if let Some(val) = asserted {
        match facts.globally_generated.value {
            Some(existing) if existing != val => {
                return Err(Error::Contradiction {
                    slot: "globally_generated".into(),
                    detail: format!(
                        "assertion {val} conflicts with the computed value {existing} for {}",
                        facts.expr
                    ),
                });
            }
            Some(_) => {}
            None => facts.globally_generated = Flag {
                value: Some(val),
                source: Some(Prov::Asserted),
            },
        }
    }
    Ok(())
}
