//! The Carlitz construction and the Carlitz module over A = F_q[theta].
//!
//! From a sequence E of F_q-linear polynomials, entry i of the constructed
//! sequence is the digit product prod_t e_t(x)^{i_t} over the base-q digits
//! of i. Lucas' congruence makes every such sequence binomial-type, the map
//! E -> f_{P_E} turns entrywise sums into products, and membership in the
//! image is decidable window-by-window from the D_{q^t} coefficients.
//!
//! Over A itself the construction applied to e_t/D_t yields the Carlitz
//! polynomial basis G_i, Dirac elements delta_alpha = sum G_i(alpha) D_i,
//! and their factorization into single-digit factors. The twisted
//! polynomial ring A[tau] houses the Carlitz module action, and the
//! A-linear map tau^j -> b_j(t) recovers plain polynomials in t from it.

use crate::digits::digits;
use crate::divided::{Divided, DividedRing};
use crate::field::{Fq, FqElem};
use crate::frac::Frac;
use crate::par;
use crate::poly::{is_q_linear, Poly, PolyRing, Var};
use crate::ring::Ring;
use crate::textio::{
    a_ring, ax_ring, frac_a_ring, frac_ax_ring, ARing, AXRing, FracARing, FracAXRing,
};
use crate::{Error, Result};

// ---------------------------------------------------------------------------
// Linear sequences and the construction over a general F_q
// ---------------------------------------------------------------------------

/// A finitely supported sequence of F_q-linear polynomials in x.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearSeq {
    ring: PolyRing<Fq>,
    entries: Vec<Poly<FqElem>>,
}

impl LinearSeq {
    /// Validates that every entry only involves exponents q^n.
    pub fn new(ring: PolyRing<Fq>, entries: Vec<Poly<FqElem>>) -> Result<LinearSeq> {
        let q = ring.base().q();
        for (t, e) in entries.iter().enumerate() {
            if !is_q_linear(&ring, e, q) {
                return Err(Error::Invalid(format!("entry {t} is not {q}-linear")));
            }
        }
        Ok(LinearSeq { ring, entries })
    }

    pub fn ring(&self) -> &PolyRing<Fq> {
        &self.ring
    }

    pub fn q(&self) -> u64 {
        self.ring.base().q()
    }

    pub fn entries(&self) -> &[Poly<FqElem>] {
        &self.entries
    }

    /// Entry t, zero beyond the stored support.
    pub fn entry(&self, t: usize) -> Poly<FqElem> {
        self.entries
            .get(t)
            .cloned()
            .unwrap_or_else(|| self.ring.zero())
    }

    pub fn neg(&self) -> LinearSeq {
        LinearSeq {
            ring: self.ring.clone(),
            entries: self.entries.iter().map(|e| self.ring.neg(e)).collect(),
        }
    }

    /// Entrywise sum; the result is again q-linear.
    pub fn add(&self, other: &LinearSeq) -> LinearSeq {
        assert_eq!(self.ring, other.ring, "mixed rings in LinearSeq::add");
        let n = self.entries.len().max(other.entries.len());
        LinearSeq {
            ring: self.ring.clone(),
            entries: (0..n)
                .map(|t| self.ring.add(&self.entry(t), &other.entry(t)))
                .collect(),
        }
    }
}

/// The digit-product sequence of E, to truncation `n`.
pub fn carlitz_sequence(e: &LinearSeq, n: usize) -> crate::binomial::PolySeq<Fq> {
    assert!(n >= 1);
    let ring = e.ring().clone();
    let q = e.q();
    let entries = par::map_range(n, |i| {
        let mut acc = ring.one();
        for (t, d) in digits(i as u64, q).into_iter().enumerate() {
            if d == 0 {
                continue;
            }
            let factor = ring.pow(&e.entry(t), d);
            acc = ring.mul(&acc, &factor);
            if ring.is_zero(&acc) {
                break;
            }
        }
        acc
    });
    crate::binomial::PolySeq::new(ring, entries)
}

/// Generating function of the Carlitz sequence of E at truncation `n`.
pub fn carlitz_gen(e: &LinearSeq, n: usize) -> Divided<Poly<FqElem>> {
    crate::binomial::gen_function(&carlitz_sequence(e, n))
}

/// Verification report for f_{P_W} * f_{P_V} = f_{P_{W+V}}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SumLawReport {
    pub equal: bool,
    pub window: usize,
    pub first_difference: Option<u64>,
}

pub fn carlitz_sum_law(w: &LinearSeq, v: &LinearSeq, n: usize) -> SumLawReport {
    assert_eq!(w.ring(), v.ring(), "mixed rings in carlitz_sum_law");
    let dp = DividedRing::new(w.ring().clone());
    let product = dp.mul(&carlitz_gen(w, n), &carlitz_gen(v, n));
    let combined = carlitz_gen(&w.add(v), n);
    let (equal, window) = dp.eq_truncated(&product, &combined);
    SumLawReport {
        equal,
        window,
        first_difference: dp.first_difference(&product, &combined),
    }
}

/// Outcome of the image-membership decision, relative to the element's
/// truncation window: agreement beyond the window is not claimed.
#[derive(Clone, Debug, PartialEq)]
pub enum ImageVerdict<T> {
    Yes {
        /// e_t recovered from the D_{q^t} coefficients, t ascending.
        recovered: Vec<Poly<T>>,
        window: usize,
    },
    No {
        witness: u64,
    },
}

impl<T> ImageVerdict<T> {
    pub fn is_yes(&self) -> bool {
        matches!(self, ImageVerdict::Yes { .. })
    }
}

/// Decide membership in the image of the construction for the given q:
/// the candidate e_t are read off the D_{q^t} coefficients, each must be
/// q-linear, and every other coefficient must equal its digit product.
/// Sound and complete on the truncation window.
pub fn is_in_carlitz_image<R: Ring>(
    ring: &PolyRing<R>,
    f: &Divided<Poly<R::Elem>>,
    q: u64,
) -> Result<ImageVerdict<R::Elem>> {
    let dp = DividedRing::new(ring.clone());
    if !ring.is_one(&dp.coeff(f, 0)) {
        return Err(Error::ConstantTermNotOne);
    }
    let trunc = f.trunc();
    let mut candidates = Vec::new();
    let mut qt = 1u64;
    while qt < trunc as u64 {
        candidates.push(dp.coeff(f, qt));
        match qt.checked_mul(q) {
            Some(next) => qt = next,
            None => break,
        }
    }

    let witness = par::first_hit(trunc, |i| {
        let i = i as u64;
        let ds = digits(i, q);
        if ds.iter().sum::<u64>() == 1 {
            // Pure power q^t: the coefficient defines e_t, which must be
            // q-linear.
            let t = ds.len() - 1;
            return (!is_q_linear(ring, &candidates[t], q)).then_some(i);
        }
        let mut predicted = ring.one();
        for (t, d) in ds.into_iter().enumerate() {
            if d == 0 {
                continue;
            }
            predicted = ring.mul(&predicted, &ring.pow(&candidates[t], d));
        }
        (dp.coeff(f, i) != predicted).then_some(i)
    });

    Ok(match witness {
        Some(witness) => ImageVerdict::No { witness },
        None => ImageVerdict::Yes {
            recovered: candidates,
            window: trunc,
        },
    })
}

// ---------------------------------------------------------------------------
// The concrete construction over A = F_q[theta]
// ---------------------------------------------------------------------------

/// Cached data for the Carlitz basis over A: the products D_t of all monic
/// degree-t elements and e_t(x) = prod over A(t) of (x - a). Built eagerly
/// up to `t_max` and immutable afterwards.
#[derive(Clone, Debug)]
pub struct CarlitzCtx {
    aring: ARing,
    axring: AXRing,
    frac: FracARing,
    fracx: FracAXRing,
    d: Vec<Poly<FqElem>>,
    e: Vec<Poly<Poly<FqElem>>>,
}

/// Enumeration guard: building e_t and D_t walks q^t polynomials.
const MAX_ENUMERATION: u64 = 16_384;

impl CarlitzCtx {
    pub fn new(fq: Fq, t_max: usize) -> Result<CarlitzCtx> {
        let q = fq.q();
        if q.checked_pow(t_max as u32)
            .is_none_or(|n| n > MAX_ENUMERATION)
        {
            return Err(Error::Invalid(format!(
                "q^t_max = {q}^{t_max} exceeds the enumeration bound {MAX_ENUMERATION}"
            )));
        }
        let aring = a_ring(fq.clone());
        let axring = ax_ring(fq.clone());
        let frac = frac_a_ring(fq.clone());
        let fracx = frac_ax_ring(fq);

        let mut d = Vec::with_capacity(t_max + 1);
        let mut e = Vec::with_capacity(t_max + 1);
        for t in 0..=t_max {
            d.push(product_of_monic(&aring, t));
            e.push(vanishing_poly(&aring, &axring, t));
        }
        Ok(CarlitzCtx {
            aring,
            axring,
            frac,
            fracx,
            d,
            e,
        })
    }

    pub fn q(&self) -> u64 {
        self.aring.base().q()
    }

    pub fn aring(&self) -> &ARing {
        &self.aring
    }

    pub fn axring(&self) -> &AXRing {
        &self.axring
    }

    pub fn frac(&self) -> &FracARing {
        &self.frac
    }

    pub fn fracx(&self) -> &FracAXRing {
        &self.fracx
    }

    pub fn t_max(&self) -> usize {
        self.d.len() - 1
    }

    /// Product of all monic elements of degree t; D_0 = 1.
    pub fn d_t(&self, t: usize) -> &Poly<FqElem> {
        &self.d[t]
    }

    /// e_t(x) = prod over all a of degree < t of (x - a); e_0 = x.
    pub fn e_t(&self, t: usize) -> &Poly<Poly<FqElem>> {
        &self.e[t]
    }

    fn require_t(&self, t: usize) -> Result<()> {
        if t > self.t_max() {
            return Err(Error::Invalid(format!(
                "context caches up to t = {}, need t = {t}",
                self.t_max()
            )));
        }
        Ok(())
    }
}

/// All elements of A with degree < t (q^t of them, the zero element
/// included), in a fixed enumeration order.
fn elements_below_degree(aring: &ARing, t: usize) -> Vec<Poly<FqElem>> {
    let scalars = aring.base().all_elements();
    let mut out: Vec<Vec<FqElem>> = vec![vec![]];
    for _ in 0..t {
        let mut next = Vec::with_capacity(out.len() * scalars.len());
        for prefix in &out {
            for s in &scalars {
                let mut v = prefix.clone();
                v.push(s.clone());
                next.push(v);
            }
        }
        out = next;
    }
    out.into_iter().map(|v| aring.from_coeffs(v)).collect()
}

fn product_of_monic(aring: &ARing, t: usize) -> Poly<FqElem> {
    let mut acc = aring.one();
    for lower in elements_below_degree(aring, t) {
        let monic = aring.add(&lower, &aring.monomial(aring.base().one(), t));
        acc = aring.mul(&acc, &monic);
    }
    acc
}

fn vanishing_poly(aring: &ARing, axring: &AXRing, t: usize) -> Poly<Poly<FqElem>> {
    let mut acc = axring.one();
    for a in elements_below_degree(aring, t) {
        let factor = axring.add(&axring.gen(), &axring.constant(aring.neg(&a)));
        acc = axring.mul(&acc, &factor);
    }
    acc
}

/// The Carlitz polynomial G_i = prod_t (e_t/D_t)^{i_t}, coefficients in
/// Frac(A); G_0 = 1 and G_1 = x.
pub fn carlitz_basis(ctx: &CarlitzCtx, i: u64) -> Result<Poly<Frac<FqElem>>> {
    let ds = digits(i, ctx.q());
    if !ds.is_empty() {
        ctx.require_t(ds.len() - 1)?;
    }
    let fracx = ctx.fracx();
    let mut acc = fracx.one();
    for (t, d) in ds.into_iter().enumerate() {
        if d == 0 {
            continue;
        }
        let base = basis_factor(ctx, t);
        acc = fracx.mul(&acc, &fracx.pow(&base, d));
    }
    Ok(acc)
}

/// e_t(x)/D_t as a polynomial with Frac(A) coefficients.
fn basis_factor(ctx: &CarlitzCtx, t: usize) -> Poly<Frac<FqElem>> {
    let frac = ctx.frac();
    let dt = ctx.d_t(t).clone();
    ctx.axring().map_into(ctx.e_t(t), ctx.fracx(), |c| {
        frac.from_ratio(c.clone(), dt.clone()).unwrap()
    })
}

/// Report of evaluating G_i(a) over a grid and checking the value lands in
/// A (denominator 1 after reduction).
#[derive(Clone, Debug, PartialEq)]
pub struct IntegralityReport {
    pub checked: usize,
    /// (i, a) pairs whose value failed to be integral.
    pub violations: Vec<(u64, Poly<FqElem>)>,
}

impl IntegralityReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

pub fn integrality_check(
    ctx: &CarlitzCtx,
    i_max: u64,
    a_list: &[Poly<FqElem>],
) -> Result<IntegralityReport> {
    let frac = ctx.frac();
    let fracx = ctx.fracx();
    let mut checked = 0;
    let mut violations = Vec::new();
    for i in 0..=i_max {
        let g = carlitz_basis(ctx, i)?;
        for a in a_list {
            checked += 1;
            let value = fracx.eval(&g, &frac.from_poly(a.clone()));
            if !frac.is_integral(&value) {
                violations.push((i, a.clone()));
            }
        }
    }
    Ok(IntegralityReport {
        checked,
        violations,
    })
}

/// G_i(alpha) for alpha in A, computed from the cached e_t(alpha)/D_t
/// values; integrality is an invariant here, not an assumption.
fn basis_value_at(ctx: &CarlitzCtx, point_values: &[Frac<FqElem>], i: u64) -> Result<Poly<FqElem>> {
    let frac = ctx.frac();
    let ds = digits(i, ctx.q());
    if !ds.is_empty() {
        ctx.require_t(ds.len() - 1)?;
    }
    let mut acc = frac.one();
    for (t, d) in ds.into_iter().enumerate() {
        if d == 0 {
            continue;
        }
        acc = frac.mul(&acc, &frac.pow(&point_values[t], d));
    }
    if !frac.is_integral(&acc) {
        return Err(Error::Invalid(format!("G_{i} value not integral")));
    }
    Ok(acc.num)
}

fn point_values(ctx: &CarlitzCtx, alpha: &Poly<FqElem>, n: usize) -> Result<Vec<Frac<FqElem>>> {
    let frac = ctx.frac();
    let q = ctx.q();
    let mut out = Vec::new();
    let mut qt = 1u64;
    let mut t = 0usize;
    while qt < n as u64 {
        ctx.require_t(t)?;
        let e_at = ctx.axring().eval(ctx.e_t(t), alpha);
        out.push(
            frac.from_ratio(e_at, ctx.d_t(t).clone())
                .expect("D_t is nonzero"),
        );
        t += 1;
        qt = match qt.checked_mul(q) {
            Some(v) => v,
            None => break,
        };
    }
    Ok(out)
}

/// The Dirac element at alpha: coefficient of D_i is G_i(alpha), an element
/// of A by Carlitz integrality.
pub fn dirac(ctx: &CarlitzCtx, alpha: &Poly<FqElem>, n: usize) -> Result<Divided<Poly<FqElem>>> {
    let values = point_values(ctx, alpha, n)?;
    let dp = DividedRing::new(ctx.aring().clone());
    let mut entries = Vec::with_capacity(n);
    for i in 0..n as u64 {
        entries.push((i, basis_value_at(ctx, &values, i)?));
    }
    dp.from_entries(n, entries)
}

/// Factor delta_alpha into the elements built from a single additive
/// function each: factor t is 1 + sum_j G_{q^t}(alpha)^j D_{j q^t} over the
/// digits j < q with j*q^t inside the window. Their product is the Dirac
/// element, exactly, up to truncation.
pub fn dirac_factorization(
    ctx: &CarlitzCtx,
    alpha: &Poly<FqElem>,
    n: usize,
) -> Result<Vec<Divided<Poly<FqElem>>>> {
    let values = point_values(ctx, alpha, n)?;
    let dp = DividedRing::new(ctx.aring().clone());
    let frac = ctx.frac();
    let q = ctx.q();
    let mut factors = Vec::new();
    for (t, u) in values.iter().enumerate() {
        let mut entries = vec![(0u64, ctx.aring().one())];
        let qt = q.pow(t as u32);
        for j in 1..q {
            let idx = j * qt;
            if idx >= n as u64 {
                break;
            }
            let value = frac.pow(u, j);
            if !frac.is_integral(&value) {
                return Err(Error::Invalid(format!(
                    "factor value at t={t} not integral"
                )));
            }
            entries.push((idx, value.num));
        }
        factors.push(dp.from_entries(n, entries)?);
    }
    Ok(factors)
}

// ---------------------------------------------------------------------------
// The Carlitz module in A[tau] and its image in A[t]
// ---------------------------------------------------------------------------

/// Twisted polynomial in tau over A, with tau * a = a^q * tau.
#[derive(Clone, Debug, PartialEq)]
pub struct SkewPoly {
    coeffs: Vec<Poly<FqElem>>,
}

impl SkewPoly {
    pub fn coeffs(&self) -> &[Poly<FqElem>] {
        &self.coeffs
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }
}

/// Descriptor for A[tau].
#[derive(Clone, Debug, PartialEq)]
pub struct SkewRing {
    aring: ARing,
}

impl SkewRing {
    pub fn new(aring: ARing) -> SkewRing {
        debug_assert_eq!(aring.var(), Var::Theta);
        SkewRing { aring }
    }

    pub fn aring(&self) -> &ARing {
        &self.aring
    }

    pub fn q(&self) -> u64 {
        self.aring.base().q()
    }

    pub fn from_coeffs(&self, coeffs: Vec<Poly<FqElem>>) -> SkewPoly {
        let mut coeffs = coeffs;
        while coeffs.last().is_some_and(|c| self.aring.is_zero(c)) {
            coeffs.pop();
        }
        SkewPoly { coeffs }
    }

    pub fn zero(&self) -> SkewPoly {
        SkewPoly { coeffs: vec![] }
    }

    pub fn one(&self) -> SkewPoly {
        SkewPoly {
            coeffs: vec![self.aring.one()],
        }
    }

    /// tau itself.
    pub fn tau(&self) -> SkewPoly {
        SkewPoly {
            coeffs: vec![self.aring.zero(), self.aring.one()],
        }
    }

    pub fn add(&self, a: &SkewPoly, b: &SkewPoly) -> SkewPoly {
        let n = a.coeffs.len().max(b.coeffs.len());
        self.from_coeffs(
            (0..n)
                .map(|i| {
                    let x = a
                        .coeffs
                        .get(i)
                        .cloned()
                        .unwrap_or_else(|| self.aring.zero());
                    let y = b
                        .coeffs
                        .get(i)
                        .cloned()
                        .unwrap_or_else(|| self.aring.zero());
                    self.aring.add(&x, &y)
                })
                .collect(),
        )
    }

    /// q^i-power Frobenius twist on A. Coefficients live in F_q, so raising
    /// f(theta) to the q^i just dilates the exponents of theta.
    fn twist(&self, b: &Poly<FqElem>, i: usize) -> Poly<FqElem> {
        if i == 0 {
            return b.clone();
        }
        let stretch = self
            .q()
            .checked_pow(i as u32)
            .and_then(|s| usize::try_from(s).ok())
            .filter(|s| *s <= 1 << 32)
            .expect("tau degree too large for the Frobenius twist");
        let mut coeffs = Vec::new();
        for (k, c) in b.coeffs().iter().enumerate() {
            let idx = k * stretch;
            if coeffs.len() <= idx {
                coeffs.resize(idx + 1, self.aring.base().zero());
            }
            coeffs[idx] = c.clone();
        }
        self.aring.from_coeffs(coeffs)
    }

    /// Twisted product: (a tau^i)(b tau^j) = a b^{q^i} tau^{i+j}.
    pub fn mul(&self, a: &SkewPoly, b: &SkewPoly) -> SkewPoly {
        if a.coeffs.is_empty() || b.coeffs.is_empty() {
            return self.zero();
        }
        let mut out = vec![self.aring.zero(); a.coeffs.len() + b.coeffs.len() - 1];
        for (i, ac) in a.coeffs.iter().enumerate() {
            if self.aring.is_zero(ac) {
                continue;
            }
            for (j, bc) in b.coeffs.iter().enumerate() {
                let term = self.aring.mul(ac, &self.twist(bc, i));
                out[i + j] = self.aring.add(&out[i + j], &term);
            }
        }
        self.from_coeffs(out)
    }

    pub fn pow(&self, a: &SkewPoly, e: u64) -> SkewPoly {
        let mut acc = self.one();
        for _ in 0..e {
            acc = self.mul(&acc, a);
        }
        acc
    }

    /// Scale by an F_q constant.
    fn scale(&self, c: &FqElem, a: &SkewPoly) -> SkewPoly {
        let cc = self.aring.constant(c.clone());
        self.from_coeffs(a.coeffs.iter().map(|x| self.aring.mul(&cc, x)).collect())
    }

    /// The Carlitz module action C_a: C_theta = theta + tau, extended
    /// additively and multiplicatively from A, with F_q acting as scalars.
    pub fn carlitz_action(&self, a: &Poly<FqElem>) -> SkewPoly {
        let c_theta = self.from_coeffs(vec![self.aring.gen(), self.aring.one()]);
        let mut acc = self.zero();
        let mut power = self.one();
        for c in a.coeffs() {
            if !self.aring.base().is_zero(c) {
                acc = self.add(&acc, &self.scale(c, &power));
            }
            power = self.mul(&power, &c_theta);
        }
        acc
    }

    /// Canonical text: `a0 + a1*tau + a2*tau^2`, ascending powers.
    pub fn format(&self, a: &SkewPoly) -> String {
        let mut terms = Vec::new();
        for (j, c) in a.coeffs.iter().enumerate() {
            if self.aring.is_zero(c) {
                continue;
            }
            let cs = self.aring.format_elem(c, true);
            let var = match j {
                0 => None,
                1 => Some("tau".to_string()),
                _ => Some(format!("tau^{j}")),
            };
            terms.push(match var {
                None => cs,
                Some(v) if self.aring.is_one(c) => v,
                Some(v) => {
                    if cs.contains('+') {
                        format!("({cs})*{v}")
                    } else {
                        format!("{cs}*{v}")
                    }
                }
            });
        }
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join(" + ")
        }
    }
}

/// The ring A[t].
pub fn t_ring(fq: Fq) -> PolyRing<ARing> {
    PolyRing::new(a_ring(fq), Var::T)
}

/// b_j(t) = prod over e < j of (t - theta^{q^e}); b_0 = 1.
pub fn pellarin_b(tring: &PolyRing<ARing>, q: u64, j: usize) -> Poly<Poly<FqElem>> {
    let aring = tring.base();
    let mut acc = tring.one();
    for e in 0..j {
        let exp = q
            .checked_pow(e as u32)
            .and_then(|s| usize::try_from(s).ok())
            .filter(|s| *s <= 1 << 32)
            .expect("b_j exponent too large");
        let theta_pow = aring.monomial(aring.base().one(), exp);
        let factor = tring.add(&tring.gen(), &tring.constant(aring.neg(&theta_pow)));
        acc = tring.mul(&acc, &factor);
    }
    acc
}

/// A-linear extension of tau^j -> b_j(t).
pub fn pellarin_map(sk: &SkewRing, s: &SkewPoly, tring: &PolyRing<ARing>) -> Poly<Poly<FqElem>> {
    let q = sk.q();
    let mut acc = tring.zero();
    for (j, c) in s.coeffs().iter().enumerate() {
        if sk.aring().is_zero(c) {
            continue;
        }
        let term = tring.mul(&tring.constant(c.clone()), &pellarin_b(tring, q, j));
        acc = tring.add(&acc, &term);
    }
    acc
}

/// a with theta renamed to t, as an element of A[t] with scalar
/// coefficients.
pub fn theta_to_t(aring: &ARing, tring: &PolyRing<ARing>, a: &Poly<FqElem>) -> Poly<Poly<FqElem>> {
    tring.from_coeffs(
        a.coeffs()
            .iter()
            .map(|c| aring.constant(c.clone()))
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::binomial::{check_binomial, check_multiplicative, BinomialVerdict};
    use crate::textio::{parse_theta_poly, parse_x_poly};
    use rand::{Rng, SeedableRng};

    fn xring(q: u64) -> PolyRing<Fq> {
        PolyRing::new(Fq::from_order(q).unwrap(), Var::X)
    }

    #[test]
    fn digit_sum_sequence_is_the_all_x_construction() {
        let r = xring(2);
        let e = LinearSeq::new(r.clone(), vec![r.gen(), r.gen(), r.gen()]).unwrap();
        let seq = carlitz_sequence(&e, 4);
        let want: Vec<_> = ["1", "x", "x", "x^2"]
            .iter()
            .map(|s| parse_x_poly(&r, s).unwrap())
            .collect();
        assert_eq!(seq.entries(), &want[..]);
    }

    #[test]
    fn digit_products_pick_the_right_factors() {
        let r = xring(2);
        let x2 = r.monomial(r.base().one(), 2);
        let e = LinearSeq::new(r.clone(), vec![r.gen(), x2]).unwrap();
        let seq = carlitz_sequence(&e, 4);
        // 3 = 11 base 2: entry 3 = x * x^2 = x^3.
        assert_eq!(seq.entries()[3], parse_x_poly(&r, "x^3").unwrap());
    }

    #[test]
    fn zero_first_entry_zeros_odd_indices() {
        let r = xring(2);
        let x2 = r.monomial(r.base().one(), 2);
        let e = LinearSeq::new(r.clone(), vec![r.zero(), x2.clone()]).unwrap();
        let seq = carlitz_sequence(&e, 4);
        assert!(r.is_zero(&seq.entries()[1]));
        assert_eq!(seq.entries()[2], x2);
        assert!(r.is_zero(&seq.entries()[3]));
    }

    #[test]
    fn rejects_non_linear_entries() {
        let r = xring(2);
        let x3 = r.monomial(r.base().one(), 3);
        assert!(LinearSeq::new(r.clone(), vec![x3]).is_err());
    }

    #[test]
    fn construction_is_binomial_type() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(42);
        for q in [2u64, 3] {
            let r = xring(q);
            for _ in 0..5 {
                let entries: Vec<_> = (0..3)
                    .map(|_| {
                        let mut f = r.zero();
                        for n in 0..3u32 {
                            let c = r.base().from_u64(rng.gen_range(0..q));
                            f = r.add(&f, &r.monomial(c, q.pow(n) as usize));
                        }
                        f
                    })
                    .collect();
                let e = LinearSeq::new(r.clone(), entries).unwrap();
                let seq = carlitz_sequence(&e, 16);
                assert!(matches!(check_binomial(&seq), BinomialVerdict::Pass { .. }));
                assert!(check_multiplicative(&r, &carlitz_gen(&e, 16)).passed());
            }
        }
    }

    #[test]
    fn sum_law_and_inverse_law() {
        let r = xring(2);
        let x2 = r.monomial(r.base().one(), 2);
        let w = LinearSeq::new(r.clone(), vec![r.gen(), x2]).unwrap();
        let v = LinearSeq::new(r.clone(), vec![r.gen()]).unwrap();
        assert!(carlitz_sum_law(&w, &v, 8).equal);

        // V = -W collapses the product to 1.
        let dp = DividedRing::new(r.clone());
        let product = dp.mul(&carlitz_gen(&w, 8), &carlitz_gen(&w.neg(), 8));
        assert_eq!(product, dp.one(8));

        // V = 0 leaves the generating function unchanged.
        let zero = LinearSeq::new(r.clone(), vec![]).unwrap();
        let product = dp.mul(&carlitz_gen(&w, 8), &carlitz_gen(&zero, 8));
        assert_eq!(product, carlitz_gen(&w, 8));

        // W = V = (x) over F_2: the D_1 coefficient of both sides is 2x = 0.
        let wv = LinearSeq::new(r.clone(), vec![r.gen()]).unwrap();
        let report = carlitz_sum_law(&wv, &wv, 4);
        assert!(report.equal);
        let both = wv.add(&wv);
        assert!(r.is_zero(&both.entry(0)));
    }

    #[test]
    fn image_membership_round_trips() {
        let r = xring(2);
        let x2 = r.monomial(r.base().one(), 2);
        let e = LinearSeq::new(r.clone(), vec![r.gen(), x2]).unwrap();
        let f = carlitz_gen(&e, 8);
        match is_in_carlitz_image(&r, &f, 2).unwrap() {
            ImageVerdict::Yes { recovered, window } => {
                assert_eq!(window, 8);
                assert_eq!(recovered[0], e.entry(0));
                assert_eq!(recovered[1], e.entry(1));
                assert!(r.is_zero(&recovered[2]));
            }
            ImageVerdict::No { witness } => panic!("unexpected rejection at {witness}"),
        }
        // The unit is the image of the zero sequence.
        let dp = DividedRing::new(r.clone());
        let unit = dp.one(8);
        assert!(is_in_carlitz_image(&r, &unit, 2).unwrap().is_yes());
        // Constant term != 1 is a contract error.
        let bad = dp.zero(4);
        assert!(is_in_carlitz_image(&r, &bad, 2).is_err());
    }

    #[test]
    fn ctx_small_values() {
        let ctx = CarlitzCtx::new(Fq::prime(2).unwrap(), 3).unwrap();
        let ax = ctx.axring();
        // e_0 = x, D_0 = 1.
        assert_eq!(ctx.e_t(0), &ax.gen());
        assert!(ctx.aring().is_one(ctx.d_t(0)));
        // e_1 = x^2 + x over q = 2, D_1 = theta^2 + theta.
        let e1 = ax.add(&ax.monomial(ax.base().one(), 2), &ax.gen());
        assert_eq!(ctx.e_t(1), &e1);
        assert_eq!(
            ctx.d_t(1),
            &parse_theta_poly(ctx.aring(), "th^2 + th").unwrap()
        );
    }

    #[test]
    fn e1_is_xq_minus_x() {
        for q in [2u64, 3, 4] {
            let ctx = CarlitzCtx::new(Fq::from_order(q).unwrap(), 1).unwrap();
            let ax = ctx.axring();
            let want = ax.sub(&ax.monomial(ax.base().one(), q as usize), &ax.gen());
            assert_eq!(ctx.e_t(1), &want);
        }
    }

    #[test]
    fn e_t_is_q_linear_of_degree_qt() {
        for q in [2u64, 3] {
            let ctx = CarlitzCtx::new(Fq::from_order(q).unwrap(), 3).unwrap();
            for t in 0..=3usize {
                let e = ctx.e_t(t);
                assert_eq!(e.degree(), Some(q.pow(t as u32) as usize));
                assert!(is_q_linear(ctx.axring(), e, q));
            }
        }
    }

    #[test]
    fn basis_small_cases() {
        let ctx = CarlitzCtx::new(Fq::prime(2).unwrap(), 3).unwrap();
        let fracx = ctx.fracx();
        assert!(fracx.is_one(&carlitz_basis(&ctx, 0).unwrap()));
        assert_eq!(carlitz_basis(&ctx, 1).unwrap(), fracx.gen());
        // G_2 = (x^2 + x)/(th^2 + th).
        let g2 = carlitz_basis(&ctx, 2).unwrap();
        let den = parse_theta_poly(ctx.aring(), "th^2 + th").unwrap();
        for (k, c) in g2.coeffs().iter().enumerate() {
            if k == 1 || k == 2 {
                assert_eq!(c.den, den);
                assert!(ctx.aring().is_one(&c.num));
            } else {
                assert!(ctx.frac().is_zero(c));
            }
        }
        // G_3 = G_1 * G_2.
        let g3 = carlitz_basis(&ctx, 3).unwrap();
        assert_eq!(g3, fracx.mul(&carlitz_basis(&ctx, 1).unwrap(), &g2));
    }

    #[test]
    fn integrality_examples() {
        let ctx = CarlitzCtx::new(Fq::prime(2).unwrap(), 3).unwrap();
        let a = ctx.aring();
        let th = a.gen();
        // G_2(theta) = 1.
        let g2 = carlitz_basis(&ctx, 2).unwrap();
        let v = ctx.fracx().eval(&g2, &ctx.frac().from_poly(th.clone()));
        assert_eq!(v, ctx.frac().one());
        // Grid check including theta^2 + theta + 1.
        let pts = vec![
            a.zero(),
            a.one(),
            th.clone(),
            parse_theta_poly(a, "th^2 + th + 1").unwrap(),
        ];
        let report = integrality_check(&ctx, 7, &pts).unwrap();
        assert!(report.passed());
        assert_eq!(report.checked, 32);
    }

    #[test]
    fn dirac_values_and_homomorphism() {
        let ctx = CarlitzCtx::new(Fq::prime(2).unwrap(), 3).unwrap();
        let a = ctx.aring();
        let dp = DividedRing::new(a.clone());
        let th = a.gen();

        // dirac(0) = 1.
        assert_eq!(dirac(&ctx, &a.zero(), 4).unwrap(), dp.one(4));

        // dirac(theta, 4) = 1 + th D_1 + D_2 + th D_3.
        let d = dirac(&ctx, &th, 4).unwrap();
        assert_eq!(dp.coeff(&d, 0), a.one());
        assert_eq!(dp.coeff(&d, 1), th);
        assert_eq!(dp.coeff(&d, 2), a.one());
        assert_eq!(dp.coeff(&d, 3), th);

        // Convolution adds the points; opposite points cancel.
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..10 {
            let alpha = a.from_coeffs(
                (0..3)
                    .map(|_| a.base().from_u64(rng.gen_range(0..2)))
                    .collect(),
            );
            let beta = a.from_coeffs(
                (0..3)
                    .map(|_| a.base().from_u64(rng.gen_range(0..2)))
                    .collect(),
            );
            let lhs = dp.mul(
                &dirac(&ctx, &alpha, 8).unwrap(),
                &dirac(&ctx, &beta, 8).unwrap(),
            );
            let rhs = dirac(&ctx, &a.add(&alpha, &beta), 8).unwrap();
            assert_eq!(lhs, rhs);
            let cancel = dp.mul(
                &dirac(&ctx, &alpha, 8).unwrap(),
                &dirac(&ctx, &a.neg(&alpha), 8).unwrap(),
            );
            assert_eq!(cancel, dp.one(8));
        }
    }

    #[test]
    fn dirac_factorization_matches() {
        let ctx = CarlitzCtx::new(Fq::prime(2).unwrap(), 4).unwrap();
        let a = ctx.aring();
        let dp = DividedRing::new(a.clone());
        let th = a.gen();

        // alpha = 0: every factor is the unit.
        for f in dirac_factorization(&ctx, &a.zero(), 4).unwrap() {
            assert_eq!(f, dp.one(4));
        }

        // alpha = theta, N = 4: (1 + th D_1) and (1 + D_2).
        let factors = dirac_factorization(&ctx, &th, 4).unwrap();
        assert_eq!(factors.len(), 2);
        assert_eq!(
            factors[0],
            dp.from_entries(4, [(0, a.one()), (1, th.clone())]).unwrap()
        );
        assert_eq!(
            factors[1],
            dp.from_entries(4, [(0, a.one()), (2, a.one())]).unwrap()
        );
        let product = factors.iter().fold(dp.one(4), |acc, f| dp.mul(&acc, f));
        assert_eq!(product, dirac(&ctx, &th, 4).unwrap());

        // Random alphas of degree <= 3, window 16.
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let alpha = a.from_coeffs(
                (0..4)
                    .map(|_| a.base().from_u64(rng.gen_range(0..2)))
                    .collect(),
            );
            let factors = dirac_factorization(&ctx, &alpha, 16).unwrap();
            let product = factors.iter().fold(dp.one(16), |acc, f| dp.mul(&acc, f));
            assert_eq!(product, dirac(&ctx, &alpha, 16).unwrap());
        }
    }

    #[test]
    fn carlitz_module_small_cases() {
        let sk = SkewRing::new(a_ring(Fq::prime(2).unwrap()));
        let a = sk.aring().clone();
        let th = a.gen();

        // C_theta = theta + tau.
        let c_th = sk.carlitz_action(&th);
        assert_eq!(c_th.coeffs(), &[th.clone(), a.one()]);
        assert_eq!(sk.format(&c_th), "th + tau");

        // C_{theta^2} = theta^2 + (theta + theta^q) tau + tau^2.
        let c_th2 = sk.carlitz_action(&a.mul(&th, &th));
        let mid = a.add(&th, &a.pow(&th, 2));
        assert_eq!(c_th2.coeffs(), &[a.mul(&th, &th), mid, a.one()]);

        // Constants act as scalars.
        let c1 = sk.carlitz_action(&a.one());
        assert_eq!(c1, sk.one());

        // C is a ring homomorphism: C_{a b} = C_a C_b for random a, b.
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
        for _ in 0..10 {
            let f = a.from_coeffs(
                (0..3)
                    .map(|_| a.base().from_u64(rng.gen_range(0..2)))
                    .collect(),
            );
            let g = a.from_coeffs(
                (0..3)
                    .map(|_| a.base().from_u64(rng.gen_range(0..2)))
                    .collect(),
            );
            assert_eq!(
                sk.carlitz_action(&a.mul(&f, &g)),
                sk.mul(&sk.carlitz_action(&f), &sk.carlitz_action(&g))
            );
            assert_eq!(
                sk.carlitz_action(&a.add(&f, &g)),
                sk.add(&sk.carlitz_action(&f), &sk.carlitz_action(&g))
            );
        }
    }

    #[test]
    fn pellarin_map_examples() {
        let fq = Fq::prime(2).unwrap();
        let sk = SkewRing::new(a_ring(fq.clone()));
        let tring = t_ring(fq);
        let a = sk.aring().clone();

        // tau^0 -> 1.
        assert!(tring.is_one(&pellarin_map(&sk, &sk.one(), &tring)));
        // b recursion start: b_1 = t - theta.
        let b1 = pellarin_b(&tring, 2, 1);
        let want = tring.add(&tring.gen(), &tring.constant(a.neg(&a.gen())));
        assert_eq!(b1, want);

        // The Carlitz action of theta maps to t, of theta^2 to t^2.
        let th = a.gen();
        let image = pellarin_map(&sk, &sk.carlitz_action(&th), &tring);
        assert_eq!(image, tring.gen());
        let image2 = pellarin_map(&sk, &sk.carlitz_action(&a.mul(&th, &th)), &tring);
        assert_eq!(image2, tring.pow(&tring.gen(), 2));
    }

    #[test]
    fn pellarin_b_recursion() {
        for q in [2u64, 3] {
            let fq = Fq::from_order(q).unwrap();
            let tring = t_ring(fq);
            let a = tring.base().clone();
            for j in 0..6usize {
                let b = pellarin_b(&tring, q, j);
                let theta_pow = a.monomial(a.base().one(), q.pow(j as u32) as usize);
                let factor = tring.add(&tring.gen(), &tring.constant(a.neg(&theta_pow)));
                assert_eq!(pellarin_b(&tring, q, j + 1), tring.mul(&factor, &b));
            }
        }
    }

    #[test]
    fn pellarin_inverts_carlitz_on_a() {
        for q in [2u64, 3] {
            let fq = Fq::from_order(q).unwrap();
            let sk = SkewRing::new(a_ring(fq.clone()));
            let tring = t_ring(fq);
            let a = sk.aring().clone();
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(q);
            for k in 0..=4usize {
                let mono = a.monomial(a.base().one(), k);
                assert_eq!(
                    pellarin_map(&sk, &sk.carlitz_action(&mono), &tring),
                    theta_to_t(&a, &tring, &mono)
                );
            }
            for _ in 0..20 {
                let f = a.from_coeffs(
                    (0..5)
                        .map(|_| a.base().from_u64(rng.gen_range(0..q)))
                        .collect(),
                );
                assert_eq!(
                    pellarin_map(&sk, &sk.carlitz_action(&f), &tring),
                    theta_to_t(&a, &tring, &f)
                );
            }
        }
    }

    #[test]
    fn ctx_guards_enumeration_size() {
        assert!(CarlitzCtx::new(Fq::prime(3).unwrap(), 40).is_err());
    }
}
