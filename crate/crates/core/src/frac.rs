//! Rational functions over a polynomial ring with field coefficients,
//! kept in reduced form with a monic denominator so equality is structural.

use crate::poly::{Poly, PolyRing};
use crate::ring::{Field, Ring};

/// Reduced fraction num/den with den monic and gcd(num, den) = 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Frac<T> {
    pub num: Poly<T>,
    pub den: Poly<T>,
}

/// The fraction field of F[var] for a coefficient field F.
#[derive(Clone, Debug, PartialEq)]
pub struct FracField<F: Field> {
    poly: PolyRing<F>,
}

impl<F: Field> FracField<F> {
    pub fn new(poly: PolyRing<F>) -> Self {
        FracField { poly }
    }

    pub fn poly_ring(&self) -> &PolyRing<F> {
        &self.poly
    }

    /// Embed a polynomial as a fraction with denominator 1.
    pub fn from_poly(&self, f: Poly<F::Elem>) -> Frac<F::Elem> {
        Frac {
            num: f,
            den: self.poly.one(),
        }
    }

    pub fn from_ratio(&self, num: Poly<F::Elem>, den: Poly<F::Elem>) -> Option<Frac<F::Elem>> {
        if self.poly.is_zero(&den) {
            return None;
        }
        Some(self.reduce(num, den))
    }

    /// Whether the fraction is a polynomial (denominator 1 after reduction).
    pub fn is_integral(&self, a: &Frac<F::Elem>) -> bool {
        self.poly.is_one(&a.den)
    }

    fn reduce(&self, num: Poly<F::Elem>, den: Poly<F::Elem>) -> Frac<F::Elem> {
        if self.poly.is_zero(&num) {
            return self.zero();
        }
        let g = self.poly.gcd(&num, &den);
        let (mut num, _) = self.poly.divmod(&num, &g);
        let (mut den, _) = self.poly.divmod(&den, &g);
        // Normalize the denominator to monic, folding the unit into num.
        let lc = self.poly.leading_coeff(&den).unwrap();
        if !self.poly.base().is_one(&lc) {
            let inv = self.poly.base().inv(&lc).unwrap();
            num = self.poly.scale(&inv, &num);
            den = self.poly.scale(&inv, &den);
        }
        Frac { num, den }
    }
}

impl<F: Field> Ring for FracField<F> {
    type Elem = Frac<F::Elem>;

    fn characteristic(&self) -> u64 {
        self.poly.characteristic()
    }

    fn zero(&self) -> Self::Elem {
        Frac {
            num: self.poly.zero(),
            den: self.poly.one(),
        }
    }

    fn one(&self) -> Self::Elem {
        Frac {
            num: self.poly.one(),
            den: self.poly.one(),
        }
    }

    fn is_zero(&self, a: &Self::Elem) -> bool {
        self.poly.is_zero(&a.num)
    }

    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        let num = self.poly.add(
            &self.poly.mul(&a.num, &b.den),
            &self.poly.mul(&b.num, &a.den),
        );
        let den = self.poly.mul(&a.den, &b.den);
        self.reduce(num, den)
    }

    fn neg(&self, a: &Self::Elem) -> Self::Elem {
        Frac {
            num: self.poly.neg(&a.num),
            den: a.den.clone(),
        }
    }

    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.reduce(self.poly.mul(&a.num, &b.num), self.poly.mul(&a.den, &b.den))
    }

    fn from_u64(&self, n: u64) -> Self::Elem {
        self.from_poly(self.poly.from_u64(n))
    }

    fn format_elem(&self, a: &Self::Elem, nested: bool) -> String {
        crate::textio::format_frac(self, a, nested)
    }
}

impl<F: Field> Field for FracField<F> {
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem> {
        if self.is_zero(a) {
            return None;
        }
        Some(self.reduce(a.den.clone(), a.num.clone()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Fq;
    use crate::poly::Var;

    fn frac_a() -> FracField<Fq> {
        FracField::new(PolyRing::new(Fq::prime(2).unwrap(), Var::Theta))
    }

    #[test]
    fn reduction_is_canonical() {
        let k = frac_a();
        let a = k.poly_ring();
        let th = a.gen();
        let th1 = a.add(&th, &a.one());
        // (th^2 + th) / (th + 1) reduces to th.
        let f = k.from_ratio(a.mul(&th, &th1), th1.clone()).unwrap();
        assert_eq!(f, k.from_poly(th.clone()));
        assert!(k.is_integral(&f));
    }

    #[test]
    fn field_axioms_spot_check() {
        let k = frac_a();
        let a = k.poly_ring();
        let th = k.from_poly(a.gen());
        let x = k.from_ratio(a.one(), a.add(&a.gen(), &a.one())).unwrap();
        let inv = k.inv(&x).unwrap();
        assert_eq!(k.mul(&x, &inv), k.one());
        let s = k.add(&th, &x);
        assert_eq!(k.sub(&s, &x), th);
        assert!(!k.is_integral(&x));
    }
}
