//! Report structures and rendering. The JSON form is canonical: fixed field
//! order (struct order), no floats, rationals as strings, and every number
//! carries a provenance tag (`asserted | solver | theorem | hrr`).

use serde::Serialize;

use syzygy_core::cohom::{CohomologyTable, DimEntry, Prov};
use syzygy_core::moduli::ModuliReport;
use syzygy_core::sheaf::{BundleFacts, Flag};
use syzygy_core::syzygy::{Embedding, MembershipVerdict, SyzygyResult, Tri};
use syzygy_core::tower::TowerRun;

#[derive(Clone, Debug, Serialize)]
pub struct EntryOut {
    pub value: DimEntry,
    pub source: Option<Prov>,
}

#[derive(Clone, Debug, Serialize)]
pub struct TableOut {
    pub entries: Vec<EntryOut>,
    pub euler: Option<i64>,
}

impl TableOut {
    pub fn from_table(t: &CohomologyTable) -> TableOut {
        TableOut {
            entries: t
                .entries
                .iter()
                .zip(&t.sources)
                .map(|(e, s)| EntryOut {
                    value: *e,
                    source: *s,
                })
                .collect(),
            euler: t.euler,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct FlagOut {
    pub value: Option<bool>,
    pub source: Option<Prov>,
}

impl From<Flag> for FlagOut {
    fn from(f: Flag) -> FlagOut {
        FlagOut {
            value: f.value,
            source: f.source,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ChernOut {
    pub total: String,
    pub classes: Vec<String>,
    pub rank: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct BundleOut {
    pub expression: String,
    pub rank: usize,
    pub chern: Option<ChernOut>,
    pub h: TableOut,
    pub h_dual: TableOut,
    pub globally_generated: FlagOut,
    pub simple: FlagOut,
    pub rigid: FlagOut,
    pub split_line_degrees: Option<Vec<i64>>,
}

impl BundleOut {
    pub fn from_facts(f: &BundleFacts) -> BundleOut {
        let chern = f.chern.as_ref().map(|c| ChernOut {
            total: c.total().render(),
            classes: (1..=c.ring().dim)
                .map(|i| syzygy_core::arith::format_rational(&c.c_i(i)))
                .collect(),
            rank: c.rank(),
        });
        BundleOut {
            expression: f.expr.to_string(),
            rank: f.rank,
            chern,
            h: TableOut::from_table(&f.h),
            h_dual: TableOut::from_table(&f.h_dual),
            globally_generated: f.globally_generated.into(),
            simple: f.simple.into(),
            rigid: f.rigid.into(),
            split_line_degrees: f.split_line_degrees.clone(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct DescribeReport {
    pub command: &'static str,
    pub variety: String,
    pub bundle: BundleOut,
}

#[derive(Clone, Debug, Serialize)]
pub struct SyzygyReport {
    pub command: &'static str,
    pub variety: String,
    pub w: usize,
    pub f: BundleOut,
    pub s: BundleOut,
    pub membership: MembershipVerdict,
    pub embedding: Embedding,
    pub embedding_reasons: Vec<String>,
    pub h0_s: EntryOut,
    pub h0_s_dual: EntryOut,
    pub notes: Vec<String>,
}

impl SyzygyReport {
    pub fn from_result(variety: &str, r: &SyzygyResult) -> SyzygyReport {
        SyzygyReport {
            command: "syzygy",
            variety: variety.into(),
            w: r.w,
            f: BundleOut::from_facts(&r.f),
            s: BundleOut::from_facts(&r.s),
            membership: r.membership.clone(),
            embedding: r.embedding,
            embedding_reasons: r.embedding_reasons.clone(),
            h0_s: EntryOut {
                value: r.s.h.h(0),
                source: r.s.h.sources[0],
            },
            h0_s_dual: EntryOut {
                value: r.s.h_dual.h(0),
                source: r.s.h_dual.sources[0],
            },
            notes: r.notes.clone(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ModuliOut {
    pub command: &'static str,
    pub variety: String,
    pub bundle: String,
    pub report: ModuliReport,
    pub membership: MembershipVerdict,
    pub embedding: Embedding,
}

#[derive(Clone, Debug, Serialize)]
pub struct TowerOut {
    pub command: &'static str,
    pub variety: String,
    pub start: String,
    pub run: TowerRun,
}

// ---- text rendering ----

fn entry_str(e: DimEntry) -> String {
    match e {
        DimEntry::Exact(k) => k.to_string(),
        DimEntry::AtLeast(k) => format!(">={k}"),
        DimEntry::Unknown => "?".into(),
    }
}

fn source_str(s: Option<Prov>) -> &'static str {
    match s {
        Some(Prov::Asserted) => "asserted",
        Some(Prov::Solver) => "solver",
        Some(Prov::Theorem) => "theorem",
        Some(Prov::Hrr) => "hrr",
        None => "-",
    }
}

fn table_str(t: &TableOut) -> String {
    let vals: Vec<String> = t.entries.iter().map(|e| entry_str(e.value)).collect();
    let mut s = format!("({})", vals.join(", "));
    if let Some(chi) = t.euler {
        s.push_str(&format!("  chi = {chi}"));
    }
    s
}

fn flag_str(f: &FlagOut) -> String {
    match f.value {
        Some(true) => format!("yes [{}]", source_str(f.source)),
        Some(false) => format!("no [{}]", source_str(f.source)),
        None => "unknown".into(),
    }
}

pub fn render_bundle(out: &mut String, b: &BundleOut, indent: &str) {
    out.push_str(&format!("{indent}expression: {}\n", b.expression));
    out.push_str(&format!("{indent}rank: {}\n", b.rank));
    if let Some(c) = &b.chern {
        out.push_str(&format!(
            "{indent}chern: {}   (c_i) = ({})\n",
            c.total,
            c.classes.join(", ")
        ));
    }
    out.push_str(&format!("{indent}h    : {}\n", table_str(&b.h)));
    out.push_str(&format!("{indent}h*   : {}\n", table_str(&b.h_dual)));
    out.push_str(&format!(
        "{indent}globally generated: {}\n",
        flag_str(&b.globally_generated)
    ));
    out.push_str(&format!("{indent}simple: {}\n", flag_str(&b.simple)));
    out.push_str(&format!("{indent}rigid: {}\n", flag_str(&b.rigid)));
    if let Some(ds) = &b.split_line_degrees {
        let parts: Vec<String> = ds.iter().map(|d| format!("O({d})")).collect();
        out.push_str(&format!("{indent}splits as: {}\n", parts.join(" + ")));
    }
}

pub fn render_describe(r: &DescribeReport) -> String {
    let mut out = format!("bundle on {}\n", r.variety);
    render_bundle(&mut out, &r.bundle, "  ");
    out
}

fn tri_str(t: Tri) -> &'static str {
    match t {
        Tri::Holds => "holds",
        Tri::Fails => "fails",
        Tri::Unknown => "unknown",
    }
}

pub fn render_membership(out: &mut String, m: &MembershipVerdict, indent: &str) {
    out.push_str(&format!(
        "{indent}in U: {}    in V: {}\n",
        tri_str(m.in_u),
        tri_str(m.in_v)
    ));
    for c in &m.conditions {
        out.push_str(&format!(
            "{indent}  {:<22} {:<8} [{}]\n",
            c.name,
            tri_str(c.status),
            source_str(c.source)
        ));
    }
}

pub fn render_syzygy(r: &SyzygyReport) -> String {
    let mut out = format!("syzygy bundle for w = {} on {}\n", r.w, r.variety);
    out.push_str("F:\n");
    render_bundle(&mut out, &r.f, "  ");
    out.push_str("S:\n");
    render_bundle(&mut out, &r.s, "  ");
    out.push_str("membership:\n");
    render_membership(&mut out, &r.membership, "  ");
    out.push_str(&format!("embedding: {:?}\n", r.embedding));
    for reason in &r.embedding_reasons {
        out.push_str(&format!("  - {reason}\n"));
    }
    out.push_str(&format!(
        "h^0(S) = {} [{}]   h^0(S*) = {} [{}]\n",
        entry_str(r.h0_s.value),
        source_str(r.h0_s.source),
        entry_str(r.h0_s_dual.value),
        source_str(r.h0_s_dual.source)
    ));
    for note in &r.notes {
        out.push_str(&format!("note: {note}\n"));
    }
    out
}

pub fn render_moduli(r: &ModuliOut) -> String {
    let m = &r.report;
    let line = |name: &str, e: DimEntry, src: Option<Prov>| {
        format!("  {:<28} {:<8} [{}]\n", name, entry_str(e), source_str(src))
    };
    let mut out = format!("moduli dimensions for {} (w = {}) on {}\n", r.bundle, m.w, r.variety);
    out.push_str(&line("v = h^0(F)", m.v, Some(Prov::Solver)));
    out.push_str(&line("grassmann fiber w(v-w)", m.dim_g0_fiber, Some(Prov::Solver)));
    out.push_str(&line("ext^1(F,F)", m.dim_u_tangent_at_f, Some(Prov::Solver)));
    out.push_str(&line("pair-space tangent", m.dim_g0_tangent, Some(Prov::Solver)));
    out.push_str(&line("  quotient convention", m.quot_tangent_w2, Some(Prov::Solver)));
    out.push_str(&line("  frame-bundle convention", m.quot_tangent_pgl, Some(Prov::Solver)));
    out.push_str(&line("hom(S, F)", m.hom_s_f, Some(Prov::Solver)));
    out.push_str(&line("ext^1(S,S) tangent", m.tangent_spl_s, m.tangent_source));
    out.push_str(&line("ext^2(S,S) obstruction", m.obstruction_spl_s, m.obstruction_source));
    out.push_str(&line("dim Spl at [S]", m.dim_spl_at_s, m.dim_spl_source));
    out.push_str(&line("dim of the syzygy locus", m.dim_syz, Some(Prov::Solver)));
    out.push_str(&line("codimension", m.codim_syz, m.codim_source));
    if let Some(nf) = m.normal_fiber_dim {
        out.push_str(&line("conormal fiber h^2(S(-d))", nf, Some(Prov::Solver)));
    }
    out.push_str("membership:\n");
    render_membership(&mut out, &r.membership, "  ");
    out.push_str(&format!("embedding: {:?}\n", r.embedding));
    out.push_str(&format!("note: {}\n", m.convention_note));
    out
}

pub fn render_tower(r: &TowerOut) -> String {
    let mut out = format!("tower from {} on {}\n", r.start, r.variety);
    for s in &r.run.steps {
        out.push_str(&format!(
            "step {}: input {} (rank {})\n",
            s.index, s.input, s.input_rank
        ));
        out.push_str(&format!(
            "  twist by {} -> {}   v = {}   w = {}\n",
            s.twist_applied, s.twisted_input, s.v, s.chosen_w
        ));
        out.push_str(&format!(
            "  S = {} (rank {}){}\n",
            s.s_expr,
            s.s_rank,
            s.s_chern
                .as_ref()
                .map(|c| format!("   c = {c}"))
                .unwrap_or_default()
        ));
        out.push_str(&format!(
            "  embedding: {:?}   simple: {}   rigid: {}\n",
            s.embedding,
            flag_str(&s.simple.into()),
            flag_str(&s.rigid.into())
        ));
        out.push_str(&format!(
            "  dims: tangent {} obstruction {} dim_syz {} codim {}\n",
            entry_str(s.moduli.tangent_spl_s),
            entry_str(s.moduli.obstruction_spl_s),
            entry_str(s.moduli.dim_syz),
            entry_str(s.moduli.codim_syz)
        ));
        for n in &s.notes {
            out.push_str(&format!("  note: {n}\n"));
        }
    }
    match &r.run.halt {
        Some(h) => out.push_str(&format!(
            "halted at step {}: {}{}\n",
            h.at_step,
            h.reason,
            if h.blocked { " (blocked on unknowns)" } else { "" }
        )),
        None => out.push_str("completed all steps\n"),
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyRow {
    pub name: String,
    pub expected: String,
    pub computed: String,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub command: &'static str,
    pub rows: Vec<VerifyRow>,
    pub all_pass: bool,
}

pub fn render_verify(r: &VerifyReport) -> String {
    let mut out = String::new();
    let name_w = r.rows.iter().map(|row| row.name.len()).max().unwrap_or(8);
    let exp_w = r.rows.iter().map(|row| row.expected.len()).max().unwrap_or(8);
    for row in &r.rows {
        out.push_str(&format!(
            "{:<5} {:<name_w$}  expected {:<exp_w$}  computed {}\n",
            if row.pass { "PASS" } else { "FAIL" },
            row.name,
            row.expected,
            row.computed,
        ));
    }
    out.push_str(&format!(
        "{}: {} of {} checks pass\n",
        if r.all_pass { "OK" } else { "FAILED" },
        r.rows.iter().filter(|r| r.pass).count(),
        r.rows.len()
    ));
    out
}
