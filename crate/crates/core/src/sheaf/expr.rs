//! Sheaf expression trees and their canonical form.
//!
//! Normalization pushes duals through sums and twists, collapses double
//! duals, distributes twists over sums, folds twists of line bundles, and
//! turns line-bundle tensors into twists. After normalization, `Dual` and
//! `Twist` only wrap syzygy or opaque nodes, which is what the resolver
//! matches on.

use std::fmt;

/// Expression describing a sheaf over a fixed variety.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SheafExpr {
    /// `O(d)` (only meaningful on a variety with line-bundle twists; `O` for
    /// `d = 0` everywhere).
    LineBundle(i64),
    /// Direct sum with multiplicities.
    DirectSum(Vec<(SheafExpr, usize)>),
    Dual(Box<SheafExpr>),
    /// Tensor by `O(k)`.
    Twist(Box<SheafExpr>, i64),
    /// Kernel of the evaluation of a generic `w`-dimensional subspace of
    /// sections.
    SyzygyOf(Box<SheafExpr>, usize),
    Tensor(Box<SheafExpr>, Box<SheafExpr>),
    /// Named bundle described by user-supplied data.
    Opaque(String),
}

impl SheafExpr {
    pub fn o(d: i64) -> SheafExpr {
        SheafExpr::LineBundle(d)
    }

    pub fn sum(e: SheafExpr, k: usize) -> SheafExpr {
        SheafExpr::DirectSum(vec![(e, k)])
    }

    pub fn dual(e: SheafExpr) -> SheafExpr {
        SheafExpr::Dual(Box::new(e))
    }

    pub fn twist(e: SheafExpr, k: i64) -> SheafExpr {
        SheafExpr::Twist(Box::new(e), k)
    }

    pub fn syz(e: SheafExpr, w: usize) -> SheafExpr {
        SheafExpr::SyzygyOf(Box::new(e), w)
    }

    pub fn opaque(name: &str) -> SheafExpr {
        SheafExpr::Opaque(name.into())
    }

    /// Canonical form. Idempotent.
    pub fn normalize(&self) -> SheafExpr {
        match self {
            SheafExpr::LineBundle(d) => SheafExpr::LineBundle(*d),
            SheafExpr::Opaque(n) => SheafExpr::Opaque(n.clone()),
            SheafExpr::SyzygyOf(f, w) => SheafExpr::SyzygyOf(Box::new(f.normalize()), *w),
            SheafExpr::DirectSum(items) => {
                let mut flat: Vec<(SheafExpr, usize)> = Vec::new();
                for (e, mult) in items {
                    if *mult == 0 {
                        continue;
                    }
                    match e.normalize() {
                        SheafExpr::DirectSum(inner) => {
                            for (ie, imult) in inner {
                                flat.push((ie, imult * mult));
                            }
                        }
                        other => flat.push((other, *mult)),
                    }
                }
                flat.sort();
                // Merge equal summands.
                let mut merged: Vec<(SheafExpr, usize)> = Vec::new();
                for (e, mult) in flat {
                    match merged.last_mut() {
                        Some((prev, pm)) if *prev == e => *pm += mult,
                        _ => merged.push((e, mult)),
                    }
                }
                if merged.len() == 1 && merged[0].1 == 1 {
                    return merged.into_iter().next().unwrap().0;
                }
                SheafExpr::DirectSum(merged)
            }
            SheafExpr::Dual(e) => match e.normalize() {
                SheafExpr::LineBundle(d) => SheafExpr::LineBundle(-d),
                SheafExpr::Dual(inner) => *inner,
                SheafExpr::DirectSum(items) => SheafExpr::DirectSum(
                    items
                        .into_iter()
                        .map(|(e, m)| (SheafExpr::dual(e).normalize(), m))
                        .collect::<Vec<_>>(),
                )
                .normalize(),
                SheafExpr::Twist(inner, k) => {
                    SheafExpr::twist(SheafExpr::dual(*inner).normalize(), -k).normalize()
                }
                other => SheafExpr::Dual(Box::new(other)),
            },
            SheafExpr::Twist(e, k) => match e.normalize() {
                inner if *k == 0 => inner,
                SheafExpr::LineBundle(d) => SheafExpr::LineBundle(d + k),
                SheafExpr::Twist(inner, k2) => SheafExpr::twist(*inner, k + k2).normalize(),
                SheafExpr::DirectSum(items) => SheafExpr::DirectSum(
                    items
                        .into_iter()
                        .map(|(e, m)| (SheafExpr::twist(e, *k).normalize(), m))
                        .collect::<Vec<_>>(),
                )
                .normalize(),
                other => SheafExpr::Twist(Box::new(other), *k),
            },
            SheafExpr::Tensor(a, b) => {
                let a = a.normalize();
                let b = b.normalize();
                match (a, b) {
                    (SheafExpr::LineBundle(k), other) | (other, SheafExpr::LineBundle(k)) => {
                        SheafExpr::twist(other, k).normalize()
                    }
                    (a, b) => SheafExpr::Tensor(Box::new(a), Box::new(b)),
                }
            }
        }
    }

    /// True when the normalized expression is the structure sheaf.
    pub fn is_structure_sheaf(&self) -> bool {
        matches!(self.normalize(), SheafExpr::LineBundle(0))
    }

    /// Degrees of the line-bundle summands, when the expression is a direct
    /// sum of line bundles (a single line bundle counts).
    pub fn split_line_degrees(&self) -> Option<Vec<i64>> {
        match self.normalize() {
            SheafExpr::LineBundle(d) => Some(vec![d]),
            SheafExpr::DirectSum(items) => {
                let mut out = Vec::new();
                for (e, m) in items {
                    match e {
                        SheafExpr::LineBundle(d) => {
                            out.extend(std::iter::repeat_n(d, m));
                        }
                        _ => return None,
                    }
                }
                Some(out)
            }
            _ => None,
        }
    }

    /// Crude size bound used to pick the start of regularity scans.
    pub fn degree_bound(&self) -> i64 {
        match self {
            SheafExpr::LineBundle(d) => d.abs(),
            SheafExpr::Opaque(_) => 0,
            SheafExpr::DirectSum(items) => items
                .iter()
                .map(|(e, _)| e.degree_bound())
                .max()
                .unwrap_or(0),
            SheafExpr::Dual(e) => e.degree_bound(),
            SheafExpr::Twist(e, k) => e.degree_bound() + k.abs(),
            SheafExpr::SyzygyOf(f, _) => f.degree_bound() + 1,
            SheafExpr::Tensor(a, b) => a.degree_bound() + b.degree_bound(),
        }
    }
}

impl fmt::Display for SheafExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SheafExpr::LineBundle(d) => write!(f, "O({d})"),
            SheafExpr::DirectSum(items) => {
                let parts: Vec<String> = items
                    .iter()
                    .map(|(e, m)| format!("sum({e},{m})"))
                    .collect();
                write!(f, "{}", parts.join("+"))
            }
            SheafExpr::Dual(e) => write!(f, "dual({e})"),
            SheafExpr::Twist(e, k) => write!(f, "twist({e},{k})"),
            SheafExpr::SyzygyOf(e, w) => write!(f, "syz({e},{w})"),
            SheafExpr::Tensor(a, b) => write!(f, "tensor({a},{b})"),
            SheafExpr::Opaque(n) => write!(f, "opaque({n})"),
        }
    }
}
