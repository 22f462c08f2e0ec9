//! Recursive tower construction: take a syzygy bundle, twist until the
//! membership conditions hold again, and repeat.
//!
//! The twist is found by a bounded upward scan `N = 0, 1, 2, ...` testing the
//! exact vanishing conditions on computed tables; global generation of the
//! twisted bundle is justified by Castelnuovo-Mumford regularity (`E(N)` is
//! globally generated once `N` reaches the regularity of `E`). Simplicity
//! and rigidity carry along the tower: both are invariant under twisting,
//! simplicity of each new syzygy bundle is a theorem conclusion inside U,
//! and with `F` rigid in V on a variety of dimension at least 3 the new
//! bundle is rigid exactly when the section space is complete.

use serde::Serialize;

use crate::cohom::{DimEntry, Prov};
use crate::error::{Error, Result};
use crate::moduli::{moduli_report_for, ModuliReport};
use crate::sheaf::{Flag, Resolver, SheafContext, SheafExpr};
use crate::syzygy::{build_syzygy_from_facts, Embedding, MembershipVerdict, Tri};

/// Castelnuovo-Mumford regularity of an expression on `P^n`: the least `m`
/// with `h^i(E(m-i)) = 0` for all `i >= 1`. An `m`-regular sheaf is globally
/// generated after twisting by `m`.
pub fn cm_regularity(e: &SheafExpr, ctx: &SheafContext) -> Result<i64> {
    Resolver::new(ctx).regularity(e)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum WChoice {
    /// The complete section space, `w = v`.
    Full,
    /// A fixed dimension.
    Fixed(usize),
    /// Maximize the Grassmann fiber `w(v-w)` within the legal range,
    /// breaking ties toward smaller `w`.
    MaxGrassmann,
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct TowerPolicy {
    pub w_choice: WChoice,
    pub steps: usize,
    pub require_v: bool,
    /// Upward twist scan bound (default 50).
    pub twist_scan_cap: i64,
}

impl TowerPolicy {
    pub fn new(w_choice: WChoice, steps: usize) -> TowerPolicy {
        TowerPolicy {
            w_choice,
            steps,
            require_v: false,
            twist_scan_cap: 50,
        }
    }

    pub fn require_v(mut self, yes: bool) -> TowerPolicy {
        self.require_v = yes;
        self
    }
}

/// One step of the tower: the chosen twist, section space, verdicts and
/// dimension report.
#[derive(Clone, Debug, Serialize)]
pub struct TowerStep {
    pub index: usize,
    pub input: String,
    pub twist_applied: i64,
    pub twisted_input: String,
    pub input_rank: usize,
    pub v: u64,
    pub chosen_w: usize,
    pub s_expr: String,
    pub s_rank: usize,
    pub s_chern: Option<String>,
    pub membership: MembershipVerdict,
    pub embedding: Embedding,
    pub simple: Flag,
    pub rigid: Flag,
    pub moduli: ModuliReport,
    pub notes: Vec<String>,
}

/// Why a run stopped before completing its steps.
#[derive(Clone, Debug, Serialize)]
pub struct TowerHalt {
    pub at_step: usize,
    pub reason: String,
    /// The stop is due to undecidable facts (as opposed to a definite
    /// failure of the conditions).
    pub blocked: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct TowerRun {
    pub steps: Vec<TowerStep>,
    pub halt: Option<TowerHalt>,
}

/// Run the recursive construction starting from `start` (a line bundle, an
/// opaque bundle with tables, or any iterated syzygy expression).
pub fn tower_run(start: &SheafExpr, policy: TowerPolicy, ctx: &SheafContext) -> Result<TowerRun> {
    let mut resolver = Resolver::new(ctx);
    let x = &ctx.variety;
    let n = x.n;
    let mut steps: Vec<TowerStep> = Vec::new();
    let mut current = start.normalize();
    let mut carried_simple = Flag::unknown();
    let mut carried_rigid = Flag::unknown();

    for index in 1..=policy.steps {
        // Twist scan: find the least N restoring membership.
        let mut accepted: Option<(i64, crate::sheaf::BundleFacts, MembershipVerdict)> = None;
        let mut last_verdict: Option<MembershipVerdict> = None;
        let scan_cap = if x.is_pn() { policy.twist_scan_cap } else { 0 };
        for twist in 0..=scan_cap {
            let candidate = SheafExpr::twist(current.clone(), twist).normalize();
            let mut facts = resolver.facts(&candidate)?;
            if facts.simple.value.is_none() && carried_simple.value.is_some() {
                facts.simple = carried_simple;
            }
            if facts.rigid.value.is_none() && carried_rigid.value.is_some() {
                facts.rigid = carried_rigid;
            }
            let verdict = crate::syzygy::check_membership(&facts, x);
            let ok = verdict.in_u == Tri::Holds
                && (!policy.require_v || verdict.in_v == Tri::Holds);
            if ok {
                accepted = Some((twist, facts, verdict));
                break;
            }
            last_verdict = Some(verdict);
        }
        let (twist, f_facts, _verdict) = match accepted {
            Some(t) => t,
            None => {
                let (reason, blocked) = halt_reason_from_scan(last_verdict, policy, x.n, scan_cap);
                return Ok(TowerRun {
                    steps,
                    halt: Some(TowerHalt {
                        at_step: index,
                        reason,
                        blocked,
                    }),
                });
            }
        };
        let twisted_expr = f_facts.expr.clone();
        // Section-space dimension must be pinned to choose w.
        let v = match f_facts.sections() {
            Some(v) => v,
            None => {
                return Ok(TowerRun {
                    steps,
                    halt: Some(TowerHalt {
                        at_step: index,
                        reason: format!(
                            "h^0 of {twisted_expr} is not pinned by the tables; cannot choose w"
                        ),
                        blocked: true,
                    }),
                });
            }
        };
        let r = f_facts.rank;
        let lo = (n + r) as u64;
        if v < lo {
            return Ok(TowerRun {
                steps,
                halt: Some(TowerHalt {
                    at_step: index,
                    reason: format!(
                        "twist insufficient: v = {v} < n + r = {lo}; increase the scan bound"
                    ),
                    blocked: false,
                }),
            });
        }
        let w = match policy.w_choice {
            WChoice::Full => v as usize,
            WChoice::Fixed(k) => {
                if (k as u64) < lo || (k as u64) > v {
                    return Ok(TowerRun {
                        steps,
                        halt: Some(TowerHalt {
                            at_step: index,
                            reason: format!(
                                "fixed w = {k} outside the legal range [{lo}, {v}]"
                            ),
                            blocked: false,
                        }),
                    });
                }
                k
            }
            WChoice::MaxGrassmann => {
                // w(v-w) peaks at v/2; clamp into [lo, v], ties toward
                // smaller w.
                let mid = v / 2;
                mid.clamp(lo, v) as usize
            }
        };

        let result = build_syzygy_from_facts(&mut resolver, f_facts.clone(), w)?;
        if result.membership.in_u != Tri::Holds {
            return Err(Error::Internal(
                "membership lost between the scan and the build".into(),
            ));
        }
        let mut moduli = moduli_report_for(&mut resolver, &result)?;
        let mut notes = result.notes.clone();
        let mut rigid_s = result.s.rigid;
        if let DimEntry::Exact(t) = moduli.tangent_spl_s {
            rigid_s = if t == 0 {
                Flag::yes(Prov::Solver)
            } else {
                Flag::no(Prov::Solver)
            };
        }
        // With F rigid in V on dim >= 3, the syzygy bundle is unobstructed
        // and rigid exactly when the section space is complete.
        if n >= 3 && result.membership.in_v == Tri::Holds && f_facts.rigid.is_true() {
            let complete = w as u64 == v;
            match rigid_s.value {
                Some(existing) if existing != complete => {
                    return Err(Error::Internal(format!(
                        "rigidity chase ({existing}) disagrees with the complete-system \
                         criterion ({complete}) at step {index}"
                    )));
                }
                _ => {}
            }
            rigid_s = if complete {
                if moduli.tangent_spl_s == DimEntry::Unknown {
                    moduli.tangent_spl_s = DimEntry::Exact(0);
                    if moduli.dim_spl_at_s == DimEntry::Unknown {
                        moduli.dim_spl_at_s = DimEntry::Exact(0);
                        moduli.dim_spl_source = Some(Prov::Theorem);
                    }
                }
                notes.push("rigid: the section space is complete (w = v)".into());
                Flag::yes(Prov::Theorem)
            } else {
                if moduli.tangent_spl_s == DimEntry::Unknown {
                    moduli.tangent_spl_s = DimEntry::AtLeast(1);
                }
                notes.push("not rigid: the section space is incomplete (w < v)".into());
                Flag::no(Prov::Theorem)
            };
        }
        // Rank bookkeeping.
        let s_rank = result.s.rank;
        if s_rank != w - r {
            return Err(Error::Internal(format!(
                "rank bookkeeping failed: {s_rank} != {w} - {r}"
            )));
        }
        if w > 2 * r {
            notes.push(format!("rank grows: {r} -> {s_rank}"));
        }
        let s_expr = SheafExpr::syz(twisted_expr.clone(), w).normalize();
        steps.push(TowerStep {
            index,
            input: current.to_string(),
            twist_applied: twist,
            twisted_input: twisted_expr.to_string(),
            input_rank: r,
            v,
            chosen_w: w,
            s_expr: s_expr.to_string(),
            s_rank,
            s_chern: result
                .s
                .chern
                .as_ref()
                .map(|c| c.total().render()),
            membership: result.membership.clone(),
            embedding: result.embedding,
            simple: result.s.simple,
            rigid: rigid_s,
            moduli,
            notes,
        });
        carried_simple = result.s.simple;
        carried_rigid = rigid_s;
        current = s_expr;
    }
    Ok(TowerRun { steps, halt: None })
}

fn halt_reason_from_scan(
    last: Option<MembershipVerdict>,
    policy: TowerPolicy,
    n: usize,
    cap: i64,
) -> (String, bool) {
    let Some(v) = last else {
        return ("twist scan produced no candidates".into(), true);
    };
    let failing: Vec<String> = v.failing().iter().map(|c| c.name.clone()).collect();
    let undetermined: Vec<String> = v.undetermined().iter().map(|c| c.name.clone()).collect();
    let mut reason = format!(
        "no twist within the scan bound {cap} restores membership; at the last twist: failing [{}], undetermined [{}]",
        failing.join(", "),
        undetermined.join(", ")
    );
    if policy.require_v && n == 2 && failing.iter().any(|f| f.contains("h^2(F*)")) {
        reason.push_str(
            "; on a surface h^2(F(N)*) grows with N, so the V conditions are out of reach",
        );
    }
    let blocked = failing.is_empty();
    (reason, blocked)
}
