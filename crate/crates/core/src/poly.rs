//! Dense univariate polynomials over an arbitrary coefficient ring.
//!
//! A polynomial is stored low-to-high with no trailing zeros, so the zero
//! polynomial is the empty vector and equality is structural. The degree of
//! zero is reported as `None` rather than a numeric sentinel.

use crate::ring::{Field, Ring};

/// Variable tag. Binary operations require both operands to share it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Var {
    X,
    Y,
    U,
    Theta,
    T,
}

impl Var {
    pub fn symbol(self) -> &'static str {
        match self {
            Var::X => "x",
            Var::Y => "y",
            Var::U => "u",
            Var::Theta => "th",
            Var::T => "t",
        }
    }

    pub fn from_symbol(s: &str) -> Option<Var> {
        Some(match s {
            "x" => Var::X,
            "y" => Var::Y,
            "u" => Var::U,
            "th" => Var::Theta,
            "t" => Var::T,
            _ => return None,
        })
    }
}

/// Polynomial in one variable; coefficients low-to-high, trailing zeros
/// trimmed by every constructor and operation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly<T> {
    coeffs: Vec<T>,
}

impl<T> Poly<T> {
    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero_poly(&self) -> bool {
        self.coeffs.is_empty()
    }
}

/// The ring R[var].
#[derive(Clone, Debug, PartialEq)]
pub struct PolyRing<R: Ring> {
    base: R,
    var: Var,
}

impl<R: Ring> PolyRing<R> {
    pub fn new(base: R, var: Var) -> Self {
        PolyRing { base, var }
    }

    pub fn base(&self) -> &R {
        &self.base
    }

    pub fn var(&self) -> Var {
        self.var
    }

    pub fn from_coeffs(&self, coeffs: Vec<R::Elem>) -> Poly<R::Elem> {
        let mut coeffs = coeffs;
        while coeffs.last().is_some_and(|c| self.base.is_zero(c)) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn constant(&self, c: R::Elem) -> Poly<R::Elem> {
        self.from_coeffs(vec![c])
    }

    /// c * var^e.
    pub fn monomial(&self, c: R::Elem, e: usize) -> Poly<R::Elem> {
        if self.base.is_zero(&c) {
            return self.zero();
        }
        let mut coeffs = Vec::with_capacity(e + 1);
        for _ in 0..e {
            coeffs.push(self.base.zero());
        }
        coeffs.push(c);
        Poly { coeffs }
    }

    /// The variable itself.
    pub fn gen(&self) -> Poly<R::Elem> {
        self.monomial(self.base.one(), 1)
    }

    pub fn coeff(&self, f: &Poly<R::Elem>, i: usize) -> R::Elem {
        f.coeffs.get(i).cloned().unwrap_or_else(|| self.base.zero())
    }

    pub fn leading_coeff(&self, f: &Poly<R::Elem>) -> Option<R::Elem> {
        f.coeffs.last().cloned()
    }

    pub fn scale(&self, c: &R::Elem, f: &Poly<R::Elem>) -> Poly<R::Elem> {
        self.from_coeffs(f.coeffs.iter().map(|x| self.base.mul(c, x)).collect())
    }

    /// Horner evaluation at a point of the coefficient ring.
    pub fn eval(&self, f: &Poly<R::Elem>, point: &R::Elem) -> R::Elem {
        let mut acc = self.base.zero();
        for c in f.coeffs.iter().rev() {
            acc = self.base.add(&self.base.mul(&acc, point), c);
        }
        acc
    }

    /// Rebuild the polynomial in another ring, mapping each coefficient.
    pub fn map_into<S: Ring>(
        &self,
        f: &Poly<R::Elem>,
        target: &PolyRing<S>,
        map: impl Fn(&R::Elem) -> S::Elem,
    ) -> Poly<S::Elem> {
        target.from_coeffs(f.coeffs.iter().map(map).collect())
    }
}

impl<R: Ring> Ring for PolyRing<R> {
    type Elem = Poly<R::Elem>;

    fn characteristic(&self) -> u64 {
        self.base.characteristic()
    }

    fn zero(&self) -> Self::Elem {
        Poly { coeffs: vec![] }
    }

    fn one(&self) -> Self::Elem {
        Poly {
            coeffs: vec![self.base.one()],
        }
    }

    fn is_zero(&self, a: &Self::Elem) -> bool {
        a.coeffs.is_empty()
    }

    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        let n = a.coeffs.len().max(b.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            let x = a.coeffs.get(i);
            let y = b.coeffs.get(i);
            out.push(match (x, y) {
                (Some(x), Some(y)) => self.base.add(x, y),
                (Some(x), None) => x.clone(),
                (None, Some(y)) => y.clone(),
                (None, None) => unreachable!(),
            });
        }
        self.from_coeffs(out)
    }

    fn neg(&self, a: &Self::Elem) -> Self::Elem {
        Poly {
            coeffs: a.coeffs.iter().map(|c| self.base.neg(c)).collect(),
        }
    }

    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        if a.coeffs.is_empty() || b.coeffs.is_empty() {
            return self.zero();
        }
        let mut out = vec![self.base.zero(); a.coeffs.len() + b.coeffs.len() - 1];
        for (i, x) in a.coeffs.iter().enumerate() {
            if self.base.is_zero(x) {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                out[i + j] = self.base.add(&out[i + j], &self.base.mul(x, y));
            }
        }
        self.from_coeffs(out)
    }

    fn from_u64(&self, n: u64) -> Self::Elem {
        self.constant(self.base.from_u64(n))
    }

    fn format_elem(&self, a: &Self::Elem, nested: bool) -> String {
        crate::textio::format_poly(self, a, nested)
    }
}

impl<F: Field> PolyRing<F> {
    /// Quotient and remainder; requires a nonzero divisor.
    pub fn divmod(
        &self,
        num: &Poly<F::Elem>,
        den: &Poly<F::Elem>,
    ) -> (Poly<F::Elem>, Poly<F::Elem>) {
        assert!(!den.coeffs.is_empty(), "division by zero polynomial");
        let dd = den.coeffs.len() - 1;
        let lead_inv = self.base.inv(den.coeffs.last().unwrap()).unwrap();
        let mut rem = num.coeffs.clone();
        let mut quot = vec![self.base.zero(); rem.len().saturating_sub(dd)];
        while rem.len() > dd {
            let lead = self.base.mul(rem.last().unwrap(), &lead_inv);
            let shift = rem.len() - 1 - dd;
            rem.pop();
            if !self.base.is_zero(&lead) {
                quot[shift] = lead.clone();
                for (k, dc) in den.coeffs[..dd].iter().enumerate() {
                    let sub = self.base.mul(&lead, dc);
                    rem[shift + k] = self.base.sub(&rem[shift + k], &sub);
                }
            }
            while rem.last().is_some_and(|c| self.base.is_zero(c)) {
                rem.pop();
            }
        }
        (self.from_coeffs(quot), self.from_coeffs(rem))
    }

    /// Monic-normalized gcd; gcd(0, 0) = 0.
    pub fn gcd(&self, a: &Poly<F::Elem>, b: &Poly<F::Elem>) -> Poly<F::Elem> {
        let mut r0 = a.clone();
        let mut r1 = b.clone();
        while !r1.coeffs.is_empty() {
            let (_, r) = self.divmod(&r0, &r1);
            r0 = r1;
            r1 = r;
        }
        self.monic(&r0)
    }

    /// Scale so the leading coefficient is 1; zero stays zero.
    pub fn monic(&self, f: &Poly<F::Elem>) -> Poly<F::Elem> {
        match f.coeffs.last() {
            None => self.zero(),
            Some(lc) => {
                let inv = self.base.inv(lc).unwrap();
                self.scale(&inv, f)
            }
        }
    }
}

fn is_power_of(mut e: u64, q: u64) -> bool {
    if e == 0 {
        return false;
    }
    while e.is_multiple_of(q) {
        e /= q;
    }
    e == 1
}

/// Whether every nonzero monomial of `f` has exponent a power of q
/// (q^0 = 1 included). The zero polynomial counts as q-linear.
pub fn is_q_linear<R: Ring>(ring: &PolyRing<R>, f: &Poly<R::Elem>, q: u64) -> bool {
    assert!(q >= 2);
    f.coeffs()
        .iter()
        .enumerate()
        .all(|(e, c)| ring.base().is_zero(c) || is_power_of(e as u64, q))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Fq;

    fn fx(p: u64) -> PolyRing<Fq> {
        PolyRing::new(Fq::prime(p).unwrap(), Var::X)
    }

    #[test]
    fn degree_of_zero_is_none() {
        let r = fx(3);
        assert_eq!(r.zero().degree(), None);
        assert_eq!(r.from_coeffs(vec![r.base().zero(); 4]).degree(), None);
        assert_eq!(r.gen().degree(), Some(1));
    }

    #[test]
    fn mul_reduces_mod_p() {
        let r = fx(2);
        let xp1 = r.add(&r.gen(), &r.one());
        // (x + 1)^2 = x^2 + 1 over F_2.
        let sq = r.mul(&xp1, &xp1);
        assert_eq!(sq, r.add(&r.monomial(r.base().one(), 2), &r.one()));
    }

    #[test]
    fn divmod_and_gcd() {
        let r = fx(5);
        let f = r.mul(&r.gen(), &r.add(&r.gen(), &r.one())); // x(x+1)
        let g = r.gen();
        let (q, rem) = r.divmod(&f, &g);
        assert!(r.is_zero(&rem));
        assert_eq!(q, r.add(&r.gen(), &r.one()));
        assert_eq!(r.gcd(&f, &g), g);
        // gcd is monic even when inputs are scaled.
        let f2 = r.scale(&r.base().from_u64(3), &f);
        assert_eq!(r.gcd(&f2, &r.scale(&r.base().from_u64(2), &g)), g);
    }

    #[test]
    fn eval_horner() {
        let r = fx(7);
        // x^2 + 3x + 1 at x = 2 -> 4 + 6 + 1 = 11 = 4.
        let f = r.from_coeffs(vec![
            r.base().from_u64(1),
            r.base().from_u64(3),
            r.base().from_u64(1),
        ]);
        assert_eq!(r.eval(&f, &r.base().from_u64(2)), r.base().from_u64(4));
    }

    #[test]
    fn q_linear_detection() {
        let r = fx(2);
        let f = r.add(&r.monomial(r.base().one(), 2), &r.gen()); // x^2 + x
        assert!(is_q_linear(&r, &f, 2));
        let g = r.monomial(r.base().one(), 3); // x^3
        assert!(!is_q_linear(&r, &g, 2));
        assert!(is_q_linear(&r, &r.zero(), 2));

        let r3 = fx(3);
        // x^9 + 2x^3 over F_3.
        let h = r3.add(
            &r3.monomial(r3.base().one(), 9),
            &r3.monomial(r3.base().from_u64(2), 3),
        );
        assert!(is_q_linear(&r3, &h, 3));
    }
}
