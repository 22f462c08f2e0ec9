//! Cohomology dimension tables and the long-exact-sequence dimension chase.
//!
//! Entries are tri-state: `Exact(k)`, `AtLeast(k)`, or `Unknown`. Every
//! inference either pins a value or improves a lower bound; upper bounds only
//! exist transiently inside the solver.
//!
//! The solver works on the long exact sequence of a short exact sequence
//! `0 -> A -> B -> C -> 0`. Writing `s_0, s_1, ...` for the dimensions
//! `h^0(A), h^0(B), h^0(C), h^1(A), ...` and `r_i` for the rank of the map
//! into slot `i`, exactness says precisely `s_i = r_i + r_{i+1}` with
//! `r_0 = r_last = 0`. The solver runs interval propagation on the `s_i` and
//! `r_i` jointly, plus Euler-characteristic constraints per table and
//! additivity across the sequence. This subsumes segment alternating sums
//! (between two zero entries) and the sub/quotient bounds, and it detects
//! contradictions as empty intervals.

use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::arith::{binomial_u64, hilbert_euler_pn};
use crate::error::{Error, Result};

/// Where a reported number came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Prov {
    Asserted,
    Solver,
    Theorem,
    Hrr,
}

/// One cohomology dimension: pinned, bounded below, or unknown.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DimEntry {
    Exact(u64),
    AtLeast(u64),
    Unknown,
}

impl DimEntry {
    /// Normalize: a vacuous lower bound is no information.
    pub fn normalized(self) -> DimEntry {
        match self {
            DimEntry::AtLeast(0) => DimEntry::Unknown,
            e => e,
        }
    }

    pub fn exact(self) -> Option<u64> {
        match self {
            DimEntry::Exact(k) => Some(k),
            _ => None,
        }
    }

    pub fn is_exact_zero(self) -> bool {
        self == DimEntry::Exact(0)
    }

    pub fn lower_bound(self) -> u64 {
        match self {
            DimEntry::Exact(k) | DimEntry::AtLeast(k) => k,
            DimEntry::Unknown => 0,
        }
    }

    /// Combine two pieces of information about the same dimension.
    /// Errors when they are incompatible.
    pub fn refine(self, new: DimEntry) -> Result<DimEntry> {
        let out = match (self.normalized(), new.normalized()) {
            (DimEntry::Unknown, e) | (e, DimEntry::Unknown) => e,
            (DimEntry::Exact(a), DimEntry::Exact(b)) => {
                if a != b {
                    return Err(Error::Contradiction {
                        slot: String::new(),
                        detail: format!("Exact({a}) vs Exact({b})"),
                    });
                }
                DimEntry::Exact(a)
            }
            (DimEntry::Exact(a), DimEntry::AtLeast(m))
            | (DimEntry::AtLeast(m), DimEntry::Exact(a)) => {
                if m > a {
                    return Err(Error::Contradiction {
                        slot: String::new(),
                        detail: format!("Exact({a}) vs AtLeast({m})"),
                    });
                }
                DimEntry::Exact(a)
            }
            (DimEntry::AtLeast(a), DimEntry::AtLeast(b)) => DimEntry::AtLeast(a.max(b)),
        };
        Ok(out.normalized())
    }

    /// `new` carries information `self` does not already have.
    pub fn is_tightened_by(self, new: DimEntry) -> bool {
        match (self.normalized(), new.normalized()) {
            (DimEntry::Exact(_), _) => false,
            (_, DimEntry::Exact(_)) => true,
            (DimEntry::AtLeast(a), DimEntry::AtLeast(b)) => b > a,
            (DimEntry::Unknown, DimEntry::AtLeast(_)) => true,
            (_, DimEntry::Unknown) => false,
        }
    }
}

impl Serialize for DimEntry {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            DimEntry::Exact(k) => {
                let mut m = s.serialize_map(Some(1))?;
                m.serialize_entry("exact", k)?;
                m.end()
            }
            DimEntry::AtLeast(k) => {
                let mut m = s.serialize_map(Some(1))?;
                m.serialize_entry("at_least", k)?;
                m.end()
            }
            DimEntry::Unknown => s.serialize_str("unknown"),
        }
    }
}

/// Vector of `h^0..h^n` dimensions with per-entry provenance and an optional
/// Euler characteristic. Entries above index `n` are structurally absent.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CohomologyTable {
    pub entries: Vec<DimEntry>,
    pub sources: Vec<Option<Prov>>,
    pub euler: Option<i64>,
}

impl CohomologyTable {
    pub fn unknown(n: usize) -> Self {
        CohomologyTable {
            entries: vec![DimEntry::Unknown; n + 1],
            sources: vec![None; n + 1],
            euler: None,
        }
    }

    pub fn from_dims(dims: &[u64], prov: Prov) -> Self {
        let entries: Vec<DimEntry> = dims.iter().map(|&k| DimEntry::Exact(k)).collect();
        let euler = alternating_sum(dims);
        CohomologyTable {
            sources: vec![Some(prov); entries.len()],
            entries,
            euler,
        }
    }

    pub fn dim(&self) -> usize {
        self.entries.len() - 1
    }

    pub fn h(&self, i: usize) -> DimEntry {
        self.entries[i]
    }

    pub fn exact_value(&self, i: usize) -> Option<u64> {
        self.entries[i].exact()
    }

    pub fn all_exact(&self) -> bool {
        self.entries.iter().all(|e| e.exact().is_some())
    }

    pub fn is_zero_table(&self) -> bool {
        self.entries.iter().all(|e| e.is_exact_zero())
    }

    /// Refine one entry; returns whether it tightened.
    pub fn refine_entry(&mut self, i: usize, new: DimEntry, prov: Prov) -> Result<bool> {
        let merged = self.entries[i].refine(new).map_err(|e| match e {
            Error::Contradiction { detail, .. } => Error::Contradiction {
                slot: format!("h^{i}"),
                detail,
            },
            other => other,
        })?;
        let tightened = self.entries[i].is_tightened_by(new);
        self.entries[i] = merged;
        if tightened {
            self.sources[i] = Some(prov);
        }
        Ok(tightened)
    }

    /// Entrywise refine with another table over the same dimension.
    pub fn merge(&mut self, other: &CohomologyTable, prov: Prov) -> Result<bool> {
        if other.dim() != self.dim() {
            return Err(Error::Precondition("merging tables of different dimension".into()));
        }
        let mut any = false;
        for i in 0..self.entries.len() {
            any |= self.refine_entry(i, other.entries[i], prov)?;
        }
        match (self.euler, other.euler) {
            (None, chi) => self.euler = chi,
            (Some(a), Some(b)) if a != b => {
                return Err(Error::Contradiction {
                    slot: "euler".into(),
                    detail: format!("chi {a} vs {b}"),
                });
            }
            _ => {}
        }
        self.try_complete_euler();
        Ok(any)
    }

    /// Alternating sum when every entry is exact.
    pub fn alternating_sum_exact(&self) -> Option<i64> {
        let mut acc: i64 = 0;
        for (i, e) in self.entries.iter().enumerate() {
            let k = e.exact()? as i64;
            acc = if i % 2 == 0 { acc + k } else { acc - k };
        }
        Some(acc)
    }

    /// Set `euler` from the entries when they are all exact.
    pub fn try_complete_euler(&mut self) {
        if self.euler.is_none() {
            self.euler = self.alternating_sum_exact();
        }
    }

    /// When the Euler characteristic is known and exactly one entry is not
    /// exact, solve the alternating sum for it.
    pub fn complete_from_euler(&mut self, prov: Prov) -> Result<bool> {
        let chi = match self.euler {
            Some(chi) => chi as i128,
            None => {
                self.try_complete_euler();
                return Ok(false);
            }
        };
        let open: Vec<usize> = (0..self.entries.len())
            .filter(|&i| self.entries[i].exact().is_none())
            .collect();
        if open.len() != 1 {
            return Ok(false);
        }
        let j = open[0];
        let mut rest: i128 = 0;
        for (i, e) in self.entries.iter().enumerate() {
            if i == j {
                continue;
            }
            let k = e.exact().unwrap() as i128;
            rest += if i % 2 == 0 { k } else { -k };
        }
        let signed = chi - rest;
        let value = if j.is_multiple_of(2) { signed } else { -signed };
        if value < 0 {
            return Err(Error::Contradiction {
                slot: format!("h^{j}"),
                detail: format!("Euler characteristic forces the negative dimension {value}"),
            });
        }
        self.refine_entry(j, DimEntry::Exact(value as u64), prov)
    }

    /// Reverse entry order: `h^i -> h^{n-i}`.
    pub fn reversed(&self) -> CohomologyTable {
        let n = self.dim();
        let mut entries = self.entries.clone();
        entries.reverse();
        let mut sources = self.sources.clone();
        sources.reverse();
        let euler = self.euler.map(|chi| if n.is_multiple_of(2) { chi } else { -chi });
        CohomologyTable {
            entries,
            sources,
            euler,
        }
    }

    pub fn render(&self) -> String {
        let body: Vec<String> = self
            .entries
            .iter()
            .map(|e| match e {
                DimEntry::Exact(k) => k.to_string(),
                DimEntry::AtLeast(k) => format!(">={k}"),
                DimEntry::Unknown => "?".into(),
            })
            .collect();
        format!("({})", body.join(", "))
    }
}

fn alternating_sum(dims: &[u64]) -> Option<i64> {
    let mut acc: i64 = 0;
    for (i, &k) in dims.iter().enumerate() {
        let k = i64::try_from(k).ok()?;
        acc = if i % 2 == 0 {
            acc.checked_add(k)?
        } else {
            acc.checked_sub(k)?
        };
    }
    Some(acc)
}

/// Closed-form line bundle cohomology on `P^n`:
/// `h^0 = C(n+d, n)` for `d >= 0`, `h^n = C(-d-1, n)` for `d <= -n-1`,
/// everything else zero.
pub fn line_bundle_cohom_pn(n: usize, d: i64) -> Result<CohomologyTable> {
    if n < 1 {
        return Err(Error::Precondition("line_bundle_cohom_pn needs n >= 1".into()));
    }
    let mut dims = vec![0u64; n + 1];
    if d >= 0 {
        dims[0] = binomial_u64(n as i64 + d, n as u32)?;
    }
    if d < -(n as i64) {
        dims[n] = binomial_u64(-d - 1, n as u32)?;
    }
    let mut t = CohomologyTable::from_dims(&dims, Prov::Solver);
    t.euler = Some(hilbert_euler_pn(n as u32, d)?);
    Ok(t)
}

/// Serre duality as a table operation: entry `i` of the output is entry
/// `n - i` of the input. The input must be the table of `E* (x) omega_X`
/// (the caller guarantees this through the expression rewrites).
pub fn serre_dual_table(t: &CohomologyTable, n: usize) -> Result<CohomologyTable> {
    if t.dim() != n {
        return Err(Error::Precondition(format!(
            "table has dimension {}, expected {n}",
            t.dim()
        )));
    }
    Ok(t.reversed())
}

/// Entrywise weighted sum of tables; `Unknown` absorbs.
pub fn table_sum(terms: &[(&CohomologyTable, u64)]) -> Result<CohomologyTable> {
    let n = terms
        .first()
        .ok_or_else(|| Error::Precondition("table_sum of no tables".into()))?
        .0
        .dim();
    if terms.iter().any(|(t, _)| t.dim() != n) {
        return Err(Error::Precondition("table_sum over unequal dimensions".into()));
    }
    let mut entries = Vec::with_capacity(n + 1);
    for i in 0..=n {
        let mut acc = DimEntry::Exact(0);
        for (t, mult) in terms {
            acc = match (acc, t.entries[i]) {
                (DimEntry::Unknown, _) | (_, DimEntry::Unknown) => DimEntry::Unknown,
                (DimEntry::Exact(a), DimEntry::Exact(b)) => DimEntry::Exact(a + b * mult),
                (DimEntry::Exact(a), DimEntry::AtLeast(b))
                | (DimEntry::AtLeast(a), DimEntry::Exact(b)) => DimEntry::AtLeast(a + b * mult),
                (DimEntry::AtLeast(a), DimEntry::AtLeast(b)) => DimEntry::AtLeast(a + b * mult),
            };
        }
        entries.push(acc.normalized());
    }
    let mut euler = Some(0i64);
    for (t, mult) in terms {
        euler = match (euler, t.euler) {
            (Some(acc), Some(chi)) => acc.checked_add(
                chi.checked_mul(*mult as i64)
                    .ok_or_else(|| Error::Internal("euler overflow in table_sum".into()))?,
            ),
            _ => None,
        };
    }
    let sources = entries
        .iter()
        .map(|e| match e {
            DimEntry::Unknown => None,
            _ => Some(Prov::Solver),
        })
        .collect();
    Ok(CohomologyTable {
        entries,
        sources,
        euler,
    })
}

/// A short exact sequence `0 -> A -> B -> C -> 0` of partially known tables.
///
/// `h0_b_to_c_injective` records that the induced map `H^0(B) -> H^0(C)` is
/// injective (hence `h^0(A) = 0`). This is structural for syzygy sequences,
/// where the map on global sections is the inclusion of the chosen subspace.
#[derive(Clone, Debug)]
pub struct SesProblem {
    pub a: CohomologyTable,
    pub b: CohomologyTable,
    pub c: CohomologyTable,
    pub h0_b_to_c_injective: bool,
}

impl SesProblem {
    pub fn new(a: CohomologyTable, b: CohomologyTable, c: CohomologyTable) -> Result<Self> {
        if a.dim() != b.dim() || b.dim() != c.dim() {
            return Err(Error::Precondition(
                "SES tables must share the same dimension".into(),
            ));
        }
        Ok(SesProblem {
            a,
            b,
            c,
            h0_b_to_c_injective: false,
        })
    }

    pub fn with_h0_injective(mut self) -> Self {
        self.h0_b_to_c_injective = true;
        self
    }
}

/// Closed interval over the naturals with an optional (infinite) upper end.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Iv {
    lo: i128,
    hi: Option<i128>,
}

impl Iv {
    fn exactly(k: i128) -> Iv {
        Iv { lo: k, hi: Some(k) }
    }
    fn at_least(k: i128) -> Iv {
        Iv { lo: k, hi: None }
    }
    fn from_entry(e: DimEntry) -> Iv {
        match e {
            DimEntry::Exact(k) => Iv::exactly(k as i128),
            DimEntry::AtLeast(k) => Iv::at_least(k as i128),
            DimEntry::Unknown => Iv::at_least(0),
        }
    }
    fn to_entry(self) -> DimEntry {
        match self.hi {
            Some(h) if h == self.lo => DimEntry::Exact(self.lo as u64),
            _ => DimEntry::AtLeast(self.lo as u64).normalized(),
        }
    }
    /// Tighten to the intersection; `Ok(true)` when something changed,
    /// `Err(())` when the interval becomes empty.
    fn tighten(&mut self, lo: Option<i128>, hi: Option<i128>) -> std::result::Result<bool, ()> {
        let mut changed = false;
        if let Some(l) = lo {
            if l > self.lo {
                self.lo = l;
                changed = true;
            }
        }
        if let Some(h) = hi {
            if self.hi.is_none_or(|cur| h < cur) {
                self.hi = Some(h);
                changed = true;
            }
        }
        if let Some(h) = self.hi {
            if self.lo > h {
                return Err(());
            }
        }
        Ok(changed)
    }
}

fn sub_hi(a: Option<i128>, b: i128) -> Option<i128> {
    a.map(|x| x - b)
}

/// Run the dimension chase to a fixpoint. Entries only tighten; the result is
/// idempotent; inconsistent inputs produce a `Contradiction` naming the slot.
#[allow(clippy::needless_range_loop)] // slots and ranks are co-indexed
pub fn les_solve(p: &SesProblem) -> Result<SesProblem> {
    let n = p.a.dim();
    let m = 3 * (n + 1); // number of slots in the long exact sequence
    let cap = m * m;

    let slot_name = |i: usize| -> String {
        let table = ["A", "B", "C"][i % 3];
        format!("{table}[{}]", i / 3)
    };

    let mut out = p.clone();
    if p.h0_b_to_c_injective {
        out.a.refine_entry(0, DimEntry::Exact(0), Prov::Solver)?;
    }

    // Slot intervals in LES order.
    let mut s: Vec<Iv> = (0..m)
        .map(|i| {
            let t = match i % 3 {
                0 => &out.a,
                1 => &out.b,
                _ => &out.c,
            };
            Iv::from_entry(t.entries[i / 3])
        })
        .collect();
    // r[i] = rank of the map into slot i; r[0] = r[m] = 0.
    let mut r: Vec<Iv> = (0..=m).map(|_| Iv::at_least(0)).collect();
    r[0] = Iv::exactly(0);
    r[m] = Iv::exactly(0);

    let contradiction = |i: usize, s: &[Iv]| Error::Contradiction {
        slot: slot_name(i),
        detail: format!(
            "interval for {} became empty (lo {}, hi {:?})",
            slot_name(i),
            s[i].lo,
            s[i].hi
        ),
    };

    let mut euler = [out.a.euler, out.b.euler, out.c.euler];

    let mut rounds = 0usize;
    loop {
        let mut changed = false;

        // Exactness: s_i = r_i + r_{i+1}.
        for i in 0..m {
            let (rl, rr) = (r[i], r[i + 1]);
            // Bound ranks by the slot.
            let new_hi_l = sub_hi(s[i].hi, rr.lo);
            let new_hi_r = sub_hi(s[i].hi, rl.lo);
            let new_lo_l = rr.hi.map(|h| s[i].lo - h);
            let new_lo_r = rl.hi.map(|h| s[i].lo - h);
            changed |= r[i]
                .tighten(new_lo_l, new_hi_l)
                .map_err(|_| contradiction(i, &s))?;
            changed |= r[i + 1]
                .tighten(new_lo_r, new_hi_r)
                .map_err(|_| contradiction(i, &s))?;
            // Bound the slot by the ranks.
            let lo = Some(r[i].lo + r[i + 1].lo);
            let hi = match (r[i].hi, r[i + 1].hi) {
                (Some(a), Some(b)) => Some(a + b),
                _ => None,
            };
            changed |= s[i].tighten(lo, hi).map_err(|_| contradiction(i, &s))?;
        }

        // Euler characteristic of each table as an alternating-sum constraint.
        for t in 0..3 {
            let idx: Vec<usize> = (0..=n).map(|i| 3 * i + t).collect();
            if let Some(chi) = euler[t] {
                let chi = chi as i128;
                for (deg, &j) in idx.iter().enumerate() {
                    // sign_j * s_j = chi - sum_{k != j} sign_k * s_k
                    let mut rest_lo: Option<i128> = Some(0);
                    let mut rest_hi: Option<i128> = Some(0);
                    for (deg2, &k) in idx.iter().enumerate() {
                        if k == j {
                            continue;
                        }
                        let pos = deg2 % 2 == 0;
                        let (term_lo, term_hi) = if pos {
                            (Some(s[k].lo), s[k].hi)
                        } else {
                            (s[k].hi.map(|h| -h), Some(-s[k].lo))
                        };
                        rest_lo = match (rest_lo, term_lo) {
                            (Some(a), Some(b)) => Some(a + b),
                            _ => None,
                        };
                        rest_hi = match (rest_hi, term_hi) {
                            (Some(a), Some(b)) => Some(a + b),
                            _ => None,
                        };
                    }
                    // value = chi - rest, so value in [chi - rest_hi, chi - rest_lo]
                    let v_lo = rest_hi.map(|h| chi - h);
                    let v_hi = rest_lo.map(|l| chi - l);
                    let (lo, hi) = if deg % 2 == 0 {
                        (v_lo, v_hi)
                    } else {
                        (v_hi.map(|x| -x), v_lo.map(|x| -x))
                    };
                    changed |= s[j].tighten(lo, hi).map_err(|_| contradiction(j, &s))?;
                }
            } else {
                // All slots exact: record chi.
                if idx.iter().all(|&j| s[j].hi == Some(s[j].lo)) {
                    let mut acc: i128 = 0;
                    for (deg, &j) in idx.iter().enumerate() {
                        acc += if deg % 2 == 0 { s[j].lo } else { -s[j].lo };
                    }
                    euler[t] = Some(acc as i64);
                    changed = true;
                }
            }
        }

        // chi(B) = chi(A) + chi(C).
        match (euler[0], euler[1], euler[2]) {
            (Some(a), Some(b), Some(c)) => {
                if b != a + c {
                    return Err(Error::Contradiction {
                        slot: "euler".into(),
                        detail: format!("chi(B)={b} but chi(A)+chi(C)={}", a + c),
                    });
                }
            }
            (Some(a), None, Some(c)) => {
                euler[1] = Some(a + c);
                changed = true;
            }
            (None, Some(b), Some(c)) => {
                euler[0] = Some(b - c);
                changed = true;
            }
            (Some(a), Some(b), None) => {
                euler[2] = Some(b - a);
                changed = true;
            }
            _ => {}
        }

        if !changed {
            break;
        }
        rounds += 1;
        if rounds > cap {
            return Err(Error::FixpointCap(cap));
        }
    }

    // Write back.
    for i in 0..m {
        let entry = s[i].to_entry();
        let t = match i % 3 {
            0 => &mut out.a,
            1 => &mut out.b,
            _ => &mut out.c,
        };
        t.refine_entry(i / 3, entry, Prov::Solver).map_err(|_| Error::Contradiction {
            slot: slot_name(i),
            detail: "solver result conflicts with input entry".into(),
        })?;
    }
    out.a.euler = euler[0];
    out.b.euler = euler[1];
    out.c.euler = euler[2];
    out.a.try_complete_euler();
    out.b.try_complete_euler();
    out.c.try_complete_euler();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn exact(dims: &[u64]) -> CohomologyTable {
        CohomologyTable::from_dims(dims, Prov::Solver)
    }

    #[test]
    fn line_bundle_tables_on_p2() {
        let t = line_bundle_cohom_pn(2, 3).unwrap();
        assert_eq!(t.entries, vec![DimEntry::Exact(10), DimEntry::Exact(0), DimEntry::Exact(0)]);
        assert_eq!(t.euler, Some(10));
        let t = line_bundle_cohom_pn(2, -3).unwrap();
        assert_eq!(t.entries, vec![DimEntry::Exact(0), DimEntry::Exact(0), DimEntry::Exact(1)]);
        let t = line_bundle_cohom_pn(2, -1).unwrap();
        assert!(t.is_zero_table());
        assert_eq!(t.euler, Some(0));
    }

    #[test]
    fn hilbert_polynomial_identity() {
        // Alternating sum equals C(n+d, n) extended polynomially.
        for n in 1..=4usize {
            for d in -10..=10i64 {
                let t = line_bundle_cohom_pn(n, d).unwrap();
                assert_eq!(
                    t.alternating_sum_exact().unwrap(),
                    hilbert_euler_pn(n as u32, d).unwrap(),
                    "n={n} d={d}"
                );
            }
        }
    }

    #[test]
    fn serre_dual_reverses() {
        let t = exact(&[0, 0, 1]);
        let d = serre_dual_table(&t, 2).unwrap();
        assert_eq!(d.entries, exact(&[1, 0, 0]).entries);
        // Involution.
        assert_eq!(serre_dual_table(&d, 2).unwrap().entries, t.entries);
        // Middle entries (and partial information) carry through.
        let mut t = CohomologyTable::unknown(2);
        t.refine_entry(1, DimEntry::Exact(5), Prov::Solver).unwrap();
        let d = serre_dual_table(&t, 2).unwrap();
        assert_eq!(d.entries[1], DimEntry::Exact(5));
        assert_eq!(d.entries[0], DimEntry::Unknown);
    }

    #[test]
    fn table_sums() {
        let o = exact(&[1, 0, 0]);
        let s = table_sum(&[(&o, 3)]).unwrap();
        assert_eq!(s.entries, exact(&[3, 0, 0]).entries);
        let om3 = exact(&[0, 0, 1]);
        let s = table_sum(&[(&om3, 2)]).unwrap();
        assert_eq!(s.entries, exact(&[0, 0, 2]).entries);
        let mut u = CohomologyTable::unknown(2);
        u.refine_entry(1, DimEntry::Exact(0), Prov::Solver).unwrap();
        u.refine_entry(2, DimEntry::Exact(0), Prov::Solver).unwrap();
        let s = table_sum(&[(&o, 1), (&u, 1)]).unwrap();
        assert_eq!(s.entries[0], DimEntry::Unknown);
        assert_eq!(s.entries[1], DimEntry::Exact(0));
    }

    #[test]
    fn solve_syzygy_sequence_on_p2() {
        // 0 -> S -> O^3 -> O(3) -> 0 with the injectivity flag pins S = (0, 7, 0).
        let p = SesProblem::new(
            CohomologyTable::unknown(2),
            exact(&[3, 0, 0]),
            exact(&[10, 0, 0]),
        )
        .unwrap()
        .with_h0_injective();
        let out = les_solve(&p).unwrap();
        assert_eq!(out.a.entries, exact(&[0, 7, 0]).entries);
        assert_eq!(out.a.euler, Some(-7));
    }

    #[test]
    fn solve_dual_resolution_with_and_without_seed() {
        // 0 -> F* -> O^4 -> O(2)^2 -> 0 on P^2.
        let b = exact(&[4, 0, 0]);
        let c = exact(&[12, 0, 0]);
        // Without h^0(F*) the chase only bounds h^1 below.
        let p = SesProblem::new(CohomologyTable::unknown(2), b.clone(), c.clone()).unwrap();
        let out = les_solve(&p).unwrap();
        assert_eq!(out.a.entries[1], DimEntry::AtLeast(8));
        assert_eq!(out.a.entries[2], DimEntry::Exact(0));
        // With h^0(F*) = 0 supplied the value is pinned to 8.
        let mut a = CohomologyTable::unknown(2);
        a.refine_entry(0, DimEntry::Exact(0), Prov::Asserted).unwrap();
        let p = SesProblem::new(a, b, c).unwrap();
        let out = les_solve(&p).unwrap();
        assert_eq!(out.a.entries, exact(&[0, 8, 0]).entries);
    }

    #[test]
    fn solve_isomorphism_case() {
        // A = 0 forces B = C.
        let p = SesProblem::new(
            exact(&[0, 0, 0]),
            CohomologyTable::unknown(2),
            exact(&[1, 0, 0]),
        )
        .unwrap();
        let out = les_solve(&p).unwrap();
        assert_eq!(out.b.entries, exact(&[1, 0, 0]).entries);
    }

    #[test]
    fn solver_is_idempotent() {
        let p = SesProblem::new(
            CohomologyTable::unknown(2),
            exact(&[3, 0, 0]),
            exact(&[10, 0, 0]),
        )
        .unwrap()
        .with_h0_injective();
        let once = les_solve(&p).unwrap();
        let twice = les_solve(&once).unwrap();
        assert_eq!(once.a.entries, twice.a.entries);
        assert_eq!(once.b.entries, twice.b.entries);
        assert_eq!(once.c.entries, twice.c.entries);
    }

    #[test]
    fn contradictions_name_the_slot() {
        // chi(B) != chi(A) + chi(C).
        let p = SesProblem::new(exact(&[0, 0, 0]), exact(&[2, 0, 0]), exact(&[1, 0, 0])).unwrap();
        let err = les_solve(&p).unwrap_err();
        match err {
            Error::Contradiction { slot, .. } => assert!(!slot.is_empty()),
            other => panic!("expected contradiction, got {other:?}"),
        }
        // Exact vs AtLeast mismatch inside one slot.
        let e = DimEntry::Exact(2).refine(DimEntry::AtLeast(5));
        assert!(e.is_err());
    }

    #[test]
    fn chi_completion_fills_single_gap() {
        // Exactness alone cannot pin B[1] when A and C are fully unknown,
        // but the alternating-sum constraint with chi(B) can.
        let mut b = CohomologyTable::unknown(2);
        b.refine_entry(0, DimEntry::Exact(4), Prov::Solver).unwrap();
        b.refine_entry(2, DimEntry::Exact(0), Prov::Solver).unwrap();
        b.euler = Some(1);
        let p = SesProblem::new(
            CohomologyTable::unknown(2),
            b,
            CohomologyTable::unknown(2),
        )
        .unwrap();
        let out = les_solve(&p).unwrap();
        assert_eq!(out.b.entries[1], DimEntry::Exact(3));
    }
}
