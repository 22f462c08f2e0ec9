//! Truncated graded intersection-ring arithmetic.
//!
//! A ring here is graded in degrees `0..=n` with everything above degree `n`
//! structurally absent (`n` = dimension of the ambient variety). `P^n` gets
//! the rank-1-per-degree ring generated by the hyperplane class `h`; other
//! varieties can supply basis ranks, structure constants and a degree map.
//!
//! On top of the ring sit Chern polynomials (total Chern classes with a rank),
//! their multiplicative inverses, twisting by a degree-1 class, the Chern
//! character and Todd class through degree 3, and the Euler characteristic
//! `chi(E) = deg(ch(E) . td(X))`. All coefficients are exact big rationals.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::arith::{binomial, format_rational, rational_to_i64};
use crate::error::{Error, Result};

/// Basis index within one graded piece: `(degree, index)`.
type Basis = (usize, usize);

/// Structure constants for a custom graded ring. Missing products are zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CustomRing {
    /// Rank of each graded piece, degrees `0..=n`. `graded_ranks[0]` must be 1.
    pub graded_ranks: Vec<usize>,
    /// `(a, b) -> coordinates of a.b` in the basis of degree `deg a + deg b`.
    pub products: BTreeMap<(Basis, Basis), Vec<BigRational>>,
    /// Linear functional on the top graded piece.
    pub degree_map: Vec<BigRational>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RingKind {
    /// Rank 1 per degree, generator `h`, `h^k . h^m = h^{k+m}` truncated,
    /// `deg(h^n) = 1`.
    ProjectiveSpace,
    Custom(CustomRing),
}

/// A truncated graded ring in degrees `0..=dim`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RingSpec {
    pub dim: usize,
    pub kind: RingKind,
}

impl RingSpec {
    pub fn projective_space(n: usize) -> Arc<RingSpec> {
        Arc::new(RingSpec {
            dim: n,
            kind: RingKind::ProjectiveSpace,
        })
    }

    pub fn custom(ring: CustomRing) -> Result<Arc<RingSpec>> {
        if ring.graded_ranks.is_empty() {
            return Err(Error::InvalidInput("custom ring has no graded pieces".into()));
        }
        if ring.graded_ranks[0] != 1 {
            return Err(Error::InvalidInput(
                "custom ring must have rank 1 in degree 0".into(),
            ));
        }
        let dim = ring.graded_ranks.len() - 1;
        if ring.degree_map.len() != ring.graded_ranks[dim] {
            return Err(Error::InvalidInput(format!(
                "degree map has {} entries but the top graded piece has rank {}",
                ring.degree_map.len(),
                ring.graded_ranks[dim]
            )));
        }
        let spec = Arc::new(RingSpec {
            dim,
            kind: RingKind::Custom(ring),
        });
        spec.verify_axioms()?;
        Ok(spec)
    }

    pub fn rank_in_degree(&self, d: usize) -> usize {
        if d > self.dim {
            return 0;
        }
        match &self.kind {
            RingKind::ProjectiveSpace => 1,
            RingKind::Custom(c) => c.graded_ranks[d],
        }
    }

    /// Product of basis elements, truncated. Zero vector when out of range.
    fn basis_product(&self, a: Basis, b: Basis) -> Vec<BigRational> {
        let deg = a.0 + b.0;
        if deg > self.dim {
            return Vec::new();
        }
        let out_rank = self.rank_in_degree(deg);
        match &self.kind {
            RingKind::ProjectiveSpace => vec![BigRational::one()],
            RingKind::Custom(c) => c
                .products
                .get(&(a, b))
                .or_else(|| c.products.get(&(b, a)))
                .cloned()
                .unwrap_or_else(|| vec![BigRational::zero(); out_rank]),
        }
    }

    /// Exhaustive basis check of commutativity and associativity up to the
    /// truncation degree. `P^n` is correct by construction.
    pub fn verify_axioms(&self) -> Result<()> {
        if matches!(self.kind, RingKind::ProjectiveSpace) {
            return Ok(());
        }
        let all_basis: Vec<Basis> = (0..=self.dim)
            .flat_map(|d| (0..self.rank_in_degree(d)).map(move |i| (d, i)))
            .collect();
        for &a in &all_basis {
            for &b in &all_basis {
                if a.0 + b.0 > self.dim {
                    continue;
                }
                let ab = self.basis_product(a, b);
                let ba = self.basis_product(b, a);
                if ab != ba {
                    return Err(Error::InvalidInput(format!(
                        "custom ring is not commutative on basis elements {a:?}, {b:?}"
                    )));
                }
                for &c in &all_basis {
                    if a.0 + b.0 + c.0 > self.dim {
                        continue;
                    }
                    let left = self.mul_vec_basis(a.0 + b.0, &ab, c);
                    let bc = self.basis_product(b, c);
                    let right = self.mul_vec_basis(b.0 + c.0, &bc, a);
                    if left != right {
                        return Err(Error::InvalidInput(format!(
                            "custom ring is not associative on basis triple {a:?}, {b:?}, {c:?}"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Multiply an element of pure degree `deg` (given by coordinates) by a
    /// basis element.
    fn mul_vec_basis(&self, deg: usize, coords: &[BigRational], b: Basis) -> Vec<BigRational> {
        let out_deg = deg + b.0;
        if out_deg > self.dim {
            return Vec::new();
        }
        let mut out = vec![BigRational::zero(); self.rank_in_degree(out_deg)];
        for (i, coef) in coords.iter().enumerate() {
            if coef.is_zero() {
                continue;
            }
            let prod = self.basis_product((deg, i), b);
            for (j, p) in prod.iter().enumerate() {
                out[j] += coef * p;
            }
        }
        out
    }
}

/// Element of a truncated graded ring: exact rational coordinates per degree.
#[derive(Clone, PartialEq, Eq)]
pub struct GradedClass {
    ring: Arc<RingSpec>,
    /// `parts[d]` has length `ring.rank_in_degree(d)`.
    parts: Vec<Vec<BigRational>>,
}

impl fmt::Debug for GradedClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GradedClass[{}]", self.render())
    }
}

impl GradedClass {
    pub fn zero(ring: &Arc<RingSpec>) -> Self {
        let parts = (0..=ring.dim)
            .map(|d| vec![BigRational::zero(); ring.rank_in_degree(d)])
            .collect();
        GradedClass {
            ring: ring.clone(),
            parts,
        }
    }

    pub fn one(ring: &Arc<RingSpec>) -> Self {
        let mut c = Self::zero(ring);
        c.parts[0][0] = BigRational::one();
        c
    }

    /// `P^n` class from scalar coefficients of `1, h, h^2, ...` (shorter input
    /// is zero-padded).
    pub fn from_h_coeffs(ring: &Arc<RingSpec>, coeffs: &[BigRational]) -> Result<Self> {
        if !matches!(ring.kind, RingKind::ProjectiveSpace) {
            return Err(Error::RingMismatch(
                "from_h_coeffs requires a projective-space ring".into(),
            ));
        }
        if coeffs.len() > ring.dim + 1 {
            return Err(Error::InvalidInput(format!(
                "{} coefficients exceed truncation degree {}",
                coeffs.len(),
                ring.dim
            )));
        }
        let mut c = Self::zero(ring);
        for (d, v) in coeffs.iter().enumerate() {
            c.parts[d][0] = v.clone();
        }
        Ok(c)
    }

    pub fn from_h_i64(ring: &Arc<RingSpec>, coeffs: &[i64]) -> Result<Self> {
        let rationals: Vec<BigRational> = coeffs
            .iter()
            .map(|&v| BigRational::from_integer(BigInt::from(v)))
            .collect();
        Self::from_h_coeffs(ring, &rationals)
    }

    /// The hyperplane class `h` on a `P^n` ring.
    pub fn hyperplane(ring: &Arc<RingSpec>) -> Result<Self> {
        Self::from_h_i64(ring, &[0, 1])
    }

    /// General constructor from per-degree coordinate vectors.
    pub fn from_parts(ring: &Arc<RingSpec>, parts: Vec<Vec<BigRational>>) -> Result<Self> {
        if parts.len() != ring.dim + 1 {
            return Err(Error::InvalidInput(format!(
                "expected {} graded pieces, got {}",
                ring.dim + 1,
                parts.len()
            )));
        }
        for (d, p) in parts.iter().enumerate() {
            if p.len() != ring.rank_in_degree(d) {
                return Err(Error::InvalidInput(format!(
                    "degree-{d} piece has {} coordinates, expected {}",
                    p.len(),
                    ring.rank_in_degree(d)
                )));
            }
        }
        Ok(GradedClass {
            ring: ring.clone(),
            parts,
        })
    }

    pub fn ring(&self) -> &Arc<RingSpec> {
        &self.ring
    }

    pub fn part(&self, d: usize) -> &[BigRational] {
        &self.parts[d]
    }

    /// Scalar coefficient of `h^d` on a `P^n` ring.
    pub fn h_coeff(&self, d: usize) -> &BigRational {
        &self.parts[d][0]
    }

    pub fn is_zero(&self) -> bool {
        self.parts.iter().all(|p| p.iter().all(|c| c.is_zero()))
    }

    /// The class has a single nonzero piece in degree 1 (or is zero).
    pub fn is_pure_degree_one(&self) -> bool {
        self.parts
            .iter()
            .enumerate()
            .all(|(d, p)| d == 1 || p.iter().all(|c| c.is_zero()))
    }

    /// All coordinates are integers.
    pub fn is_integral(&self) -> bool {
        self.parts.iter().flatten().all(|c| c.is_integer())
    }

    fn check_same_ring(&self, other: &GradedClass) -> Result<()> {
        if self.ring != other.ring {
            return Err(Error::RingMismatch(
                "operands live in different rings".into(),
            ));
        }
        Ok(())
    }

    pub fn add(&self, other: &GradedClass) -> Result<GradedClass> {
        self.check_same_ring(other)?;
        let parts = self
            .parts
            .iter()
            .zip(&other.parts)
            .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x + y).collect())
            .collect();
        Ok(GradedClass {
            ring: self.ring.clone(),
            parts,
        })
    }

    pub fn sub(&self, other: &GradedClass) -> Result<GradedClass> {
        self.check_same_ring(other)?;
        let parts = self
            .parts
            .iter()
            .zip(&other.parts)
            .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x - y).collect())
            .collect();
        Ok(GradedClass {
            ring: self.ring.clone(),
            parts,
        })
    }

    pub fn neg(&self) -> GradedClass {
        let parts = self
            .parts
            .iter()
            .map(|p| p.iter().map(|c| -c.clone()).collect())
            .collect();
        GradedClass {
            ring: self.ring.clone(),
            parts,
        }
    }

    pub fn scale(&self, s: &BigRational) -> GradedClass {
        let parts = self
            .parts
            .iter()
            .map(|p| p.iter().map(|c| c * s).collect())
            .collect();
        GradedClass {
            ring: self.ring.clone(),
            parts,
        }
    }

    pub fn scale_i64(&self, s: i64) -> GradedClass {
        self.scale(&BigRational::from_integer(BigInt::from(s)))
    }

    /// Graded product truncated at the ring dimension.
    pub fn mul(&self, other: &GradedClass) -> Result<GradedClass> {
        self.check_same_ring(other)?;
        let n = self.ring.dim;
        let mut out = GradedClass::zero(&self.ring);
        for da in 0..=n {
            for db in 0..=(n - da) {
                for (ia, ca) in self.parts[da].iter().enumerate() {
                    if ca.is_zero() {
                        continue;
                    }
                    for (ib, cb) in other.parts[db].iter().enumerate() {
                        if cb.is_zero() {
                            continue;
                        }
                        let prod = self.ring.basis_product((da, ia), (db, ib));
                        let scalar = ca * cb;
                        for (j, p) in prod.iter().enumerate() {
                            if !p.is_zero() {
                                out.parts[da + db][j] += &scalar * p;
                            }
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn pow(&self, k: usize) -> Result<GradedClass> {
        let mut acc = GradedClass::one(&self.ring);
        for _ in 0..k {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// Dual-class sign flip: degree-`i` part times `(-1)^i`.
    pub fn dual_signs(&self) -> GradedClass {
        let parts = self
            .parts
            .iter()
            .enumerate()
            .map(|(d, p)| {
                if d % 2 == 0 {
                    p.clone()
                } else {
                    p.iter().map(|c| -c.clone()).collect()
                }
            })
            .collect();
        GradedClass {
            ring: self.ring.clone(),
            parts,
        }
    }

    /// Evaluate the degree map on the top graded piece.
    pub fn degree(&self) -> BigRational {
        let n = self.ring.dim;
        match &self.ring.kind {
            RingKind::ProjectiveSpace => self.parts[n][0].clone(),
            RingKind::Custom(c) => self.parts[n]
                .iter()
                .zip(&c.degree_map)
                .map(|(a, b)| a * b)
                .sum(),
        }
    }

    /// Human-readable rendering, e.g. `1 - 3h + 9h^2`.
    pub fn render(&self) -> String {
        let mut terms: Vec<String> = Vec::new();
        for (d, p) in self.parts.iter().enumerate() {
            for (i, c) in p.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let var = match (&self.ring.kind, d) {
                    (_, 0) => String::new(),
                    (RingKind::ProjectiveSpace, 1) => "h".into(),
                    (RingKind::ProjectiveSpace, _) => format!("h^{d}"),
                    (RingKind::Custom(_), _) => format!("e({d},{i})"),
                };
                let coef = format_rational(c);
                let term = if var.is_empty() {
                    coef
                } else if coef == "1" {
                    var
                } else if coef == "-1" {
                    format!("-{var}")
                } else {
                    format!("{coef}{var}")
                };
                terms.push(term);
            }
        }
        if terms.is_empty() {
            return "0".into();
        }
        let mut out = terms[0].clone();
        for t in &terms[1..] {
            if let Some(stripped) = t.strip_prefix('-') {
                out.push_str(" - ");
                out.push_str(stripped);
            } else {
                out.push_str(" + ");
                out.push_str(t);
            }
        }
        out
    }
}

/// Total Chern class (degree-0 part 1) together with the bundle rank.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChernPolynomial {
    total: GradedClass,
    rank: usize,
}

impl ChernPolynomial {
    pub fn new(total: GradedClass, rank: usize) -> Result<Self> {
        if total.parts[0].len() != 1 || !total.parts[0][0].is_one() {
            return Err(Error::InvalidChernPolynomial(
                "degree-0 component must be exactly 1".into(),
            ));
        }
        Ok(ChernPolynomial { total, rank })
    }

    /// Trivial bundle of the given rank.
    pub fn trivial(ring: &Arc<RingSpec>, rank: usize) -> Self {
        ChernPolynomial {
            total: GradedClass::one(ring),
            rank,
        }
    }

    /// Chern polynomial `1 + c_1 h + c_2 h^2 + ...` on `P^n` from integer
    /// Chern classes; asserts integrality by construction.
    pub fn on_pn(ring: &Arc<RingSpec>, rank: usize, chern: &[i64]) -> Result<Self> {
        let mut coeffs = vec![1i64];
        coeffs.extend_from_slice(chern);
        let total = GradedClass::from_h_i64(ring, &coeffs)?;
        ChernPolynomial::new(total, rank)
    }

    pub fn total(&self) -> &GradedClass {
        &self.total
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn ring(&self) -> &Arc<RingSpec> {
        self.total.ring()
    }

    /// `c_i` as the degree-`i` graded piece.
    pub fn class_part(&self, i: usize) -> GradedClass {
        let mut c = GradedClass::zero(self.total.ring());
        c.parts[i] = self.total.parts[i].clone();
        c
    }

    /// Scalar `c_i` on a `P^n` ring.
    pub fn c_i(&self, i: usize) -> BigRational {
        self.total.parts[i][0].clone()
    }

    /// Chern polynomial of the dual bundle: `c_i -> (-1)^i c_i`.
    pub fn dual(&self) -> ChernPolynomial {
        ChernPolynomial {
            total: self.total.dual_signs(),
            rank: self.rank,
        }
    }

    /// Whitney product: total classes multiply, ranks add.
    pub fn whitney(&self, other: &ChernPolynomial) -> Result<ChernPolynomial> {
        Ok(ChernPolynomial {
            total: self.total.mul(&other.total)?,
            rank: self.rank + other.rank,
        })
    }

    /// Multiplicative inverse of the total class in the truncated ring; the
    /// rank of the result is supplied by the caller.
    pub fn invert(&self, result_rank: usize) -> Result<ChernPolynomial> {
        let ring = self.total.ring().clone();
        let n = ring.dim;
        let mut inv = GradedClass::one(&ring);
        // d_k = -sum_{j=1..k} c_j d_{k-j}, degree by degree.
        for k in 1..=n {
            let mut acc = vec![BigRational::zero(); ring.rank_in_degree(k)];
            for j in 1..=k {
                // c_j (degree j) times d_{k-j} (degree k-j).
                for (ia, ca) in self.total.parts[j].iter().enumerate() {
                    if ca.is_zero() {
                        continue;
                    }
                    for (ib, cb) in inv.parts[k - j].iter().enumerate() {
                        if cb.is_zero() {
                            continue;
                        }
                        let prod = ring.basis_product((j, ia), (k - j, ib));
                        let scalar = ca * cb;
                        for (t, p) in prod.iter().enumerate() {
                            if !p.is_zero() {
                                acc[t] += &scalar * p;
                            }
                        }
                    }
                }
            }
            inv.parts[k] = acc.iter().map(|c| -c.clone()).collect();
        }
        Ok(ChernPolynomial {
            total: inv,
            rank: result_rank,
        })
    }

    /// Total Chern class of `E (x) L` for a degree-1 class `l`:
    /// `c_i(E(L)) = sum_{j<=i} C(r-j, i-j) l^{i-j} c_j(E)`.
    pub fn twist(&self, l: &GradedClass) -> Result<ChernPolynomial> {
        self.total.check_same_ring(l)?;
        if !l.is_pure_degree_one() {
            return Err(Error::Precondition(
                "twisting class must be pure degree 1".into(),
            ));
        }
        let ring = self.total.ring().clone();
        let n = ring.dim;
        let r = self.rank as i64;
        let mut out = GradedClass::one(&ring);
        // Precompute powers of l.
        let mut l_pows: Vec<GradedClass> = vec![GradedClass::one(&ring)];
        for k in 1..=n {
            l_pows.push(l_pows[k - 1].mul(l)?);
        }
        for i in 1..=n {
            let mut acc = GradedClass::zero(&ring);
            for j in 0..=i {
                let b = binomial(r - j as i64, (i - j) as u32);
                if b.is_zero() {
                    continue;
                }
                let term = self
                    .class_part(j)
                    .mul(&l_pows[i - j])?
                    .scale(&BigRational::from_integer(b));
                acc = acc.add(&term)?;
            }
            out.parts[i] = acc.parts[i].clone();
        }
        Ok(ChernPolynomial {
            total: out,
            rank: self.rank,
        })
    }

    /// Chern character `r + c_1 + (c_1^2 - 2c_2)/2 + (c_1^3 - 3c_1 c_2 + 3c_3)/6`,
    /// truncated at the ring dimension. Implemented through degree 3.
    pub fn chern_character(&self) -> Result<GradedClass> {
        let ring = self.total.ring().clone();
        let n = ring.dim;
        if n > 3 {
            return Err(Error::UnsupportedDegree(format!(
                "Chern character is implemented through degree 3; ring has dimension {n}"
            )));
        }
        let mut ch = GradedClass::zero(&ring);
        ch.parts[0][0] = BigRational::from_integer(BigInt::from(self.rank as i64));
        if n >= 1 {
            let c1 = self.class_part(1);
            ch = ch.add(&c1)?;
            if n >= 2 {
                let c2 = self.class_part(2);
                let deg2 = c1
                    .mul(&c1)?
                    .sub(&c2.scale_i64(2))?
                    .scale(&BigRational::new(BigInt::one(), BigInt::from(2)));
                ch = ch.add(&deg2)?;
                if n >= 3 {
                    let c3 = self.class_part(3);
                    let c1c2 = c1.mul(&c2)?;
                    let deg3 = c1
                        .pow(3)?
                        .sub(&c1c2.scale_i64(3))?
                        .add(&c3.scale_i64(3))?
                        .scale(&BigRational::new(BigInt::one(), BigInt::from(6)));
                    ch = ch.add(&deg3)?;
                }
            }
        }
        Ok(ch)
    }
}

/// Todd class `1 + c_1/2 + (c_1^2 + c_2)/12 + c_1 c_2/24` of a variety with
/// the given tangent Chern polynomial, truncated at the ring dimension.
/// Implemented through degree 3.
pub fn todd_from_tangent(tangent: &ChernPolynomial) -> Result<GradedClass> {
    let ring = tangent.ring().clone();
    let n = ring.dim;
    if n > 3 {
        return Err(Error::UnsupportedDegree(format!(
            "Todd class is implemented through degree 3; ring has dimension {n}"
        )));
    }
    let mut td = GradedClass::one(&ring);
    if n >= 1 {
        let c1 = tangent.class_part(1);
        td = td.add(&c1.scale(&BigRational::new(BigInt::one(), BigInt::from(2))))?;
        if n >= 2 {
            let c2 = tangent.class_part(2);
            let deg2 = c1
                .mul(&c1)?
                .add(&c2)?
                .scale(&BigRational::new(BigInt::one(), BigInt::from(12)));
            td = td.add(&deg2)?;
            if n >= 3 {
                let deg3 = c1
                    .mul(&c2)?
                    .scale(&BigRational::new(BigInt::one(), BigInt::from(24)));
                td = td.add(&deg3)?;
            }
        }
    }
    Ok(td)
}

/// Euler characteristic via Hirzebruch-Riemann-Roch: the degree map applied
/// to the top part of `ch . td`. Errors when the result is not an integer.
pub fn euler_from_ch_td(ch: &GradedClass, td: &GradedClass) -> Result<i64> {
    let top = ch.mul(td)?.degree();
    rational_to_i64(&top).map_err(|_| {
        Error::NonIntegerValue(format!(
            "HRR produced non-integer Euler characteristic {}",
            format_rational(&top)
        ))
    })
}

/// Tangent Chern polynomial `(1+h)^{n+1}` of `P^n`, truncated.
pub fn pn_tangent_chern(ring: &Arc<RingSpec>) -> Result<ChernPolynomial> {
    let n = ring.dim;
    let coeffs: Vec<i64> = (0..=n)
        .map(|k| {
            let b = binomial(n as i64 + 1, k as u32);
            i64::try_from(&b).expect("binomial fits i64")
        })
        .collect();
    let total = GradedClass::from_h_i64(ring, &coeffs)?;
    ChernPolynomial::new(total, n)
}
