//! Sparse bivariate polynomials in x and y, used to expand and compare the
//! two sides of binomial-type identities exactly.

use std::collections::BTreeMap;

use crate::lucas::LucasTable;
use crate::poly::{Poly, PolyRing, Var};
use crate::ring::Ring;

/// Bivariate polynomial, monomials keyed by (deg_x, deg_y); only nonzero
/// coefficients stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BiPoly<T> {
    terms: BTreeMap<(u32, u32), T>,
}

impl<T> BiPoly<T> {
    pub fn terms(&self) -> &BTreeMap<(u32, u32), T> {
        &self.terms
    }
}

/// The ring R[x, y].
#[derive(Clone, Debug, PartialEq)]
pub struct BiPolyRing<R: Ring> {
    base: R,
}

impl<R: Ring> BiPolyRing<R> {
    pub fn new(base: R) -> Self {
        BiPolyRing { base }
    }

    pub fn base(&self) -> &R {
        &self.base
    }

    pub fn from_terms(
        &self,
        terms: impl IntoIterator<Item = ((u32, u32), R::Elem)>,
    ) -> BiPoly<R::Elem> {
        let mut map = BTreeMap::new();
        for (k, v) in terms {
            if !self.base.is_zero(&v) {
                let entry = map.entry(k).or_insert_with(|| self.base.zero());
                *entry = self.base.add(entry, &v);
            }
        }
        map.retain(|_, v| !self.base.is_zero(v));
        BiPoly { terms: map }
    }

    pub fn coeff(&self, f: &BiPoly<R::Elem>, key: (u32, u32)) -> R::Elem {
        f.terms
            .get(&key)
            .cloned()
            .unwrap_or_else(|| self.base.zero())
    }

    /// Lift a univariate polynomial to the x-axis.
    pub fn from_x_poly(&self, f: &Poly<R::Elem>) -> BiPoly<R::Elem> {
        self.lift_axis(f, true)
    }

    /// Lift a univariate polynomial to the y-axis.
    pub fn from_y_poly(&self, f: &Poly<R::Elem>) -> BiPoly<R::Elem> {
        self.lift_axis(f, false)
    }

    fn lift_axis(&self, f: &Poly<R::Elem>, x_axis: bool) -> BiPoly<R::Elem> {
        self.from_terms(f.coeffs().iter().enumerate().map(|(e, c)| {
            let key = if x_axis { (e as u32, 0) } else { (0, e as u32) };
            (key, c.clone())
        }))
    }

    /// Substitute y = 0, returning the x-part as a univariate polynomial.
    pub fn eval_y_zero(&self, f: &BiPoly<R::Elem>, target: &PolyRing<R>) -> Poly<R::Elem> {
        debug_assert_eq!(target.var(), Var::X);
        let deg = f
            .terms
            .keys()
            .filter(|(_, j)| *j == 0)
            .map(|(i, _)| *i)
            .max()
            .unwrap_or(0);
        let mut coeffs = vec![self.base.zero(); deg as usize + 1];
        for ((i, j), c) in &f.terms {
            if *j == 0 {
                coeffs[*i as usize] = c.clone();
            }
        }
        target.from_coeffs(coeffs)
    }

    /// Whether coefficient(i, j) = coefficient(j, i) for all monomials.
    pub fn is_symmetric(&self, f: &BiPoly<R::Elem>) -> bool {
        f.terms
            .iter()
            .all(|((i, j), c)| self.coeff(f, (*j, *i)) == *c)
    }

    /// Outer product f(x) * g(y) of two univariate polynomials.
    pub fn cross(&self, fx: &Poly<R::Elem>, gy: &Poly<R::Elem>) -> BiPoly<R::Elem> {
        let mut terms = Vec::new();
        for (i, a) in fx.coeffs().iter().enumerate() {
            if self.base.is_zero(a) {
                continue;
            }
            for (j, b) in gy.coeffs().iter().enumerate() {
                terms.push(((i as u32, j as u32), self.base.mul(a, b)));
            }
        }
        self.from_terms(terms)
    }
}

impl<R: Ring> Ring for BiPolyRing<R> {
    type Elem = BiPoly<R::Elem>;

    fn characteristic(&self) -> u64 {
        self.base.characteristic()
    }

    fn zero(&self) -> Self::Elem {
        BiPoly {
            terms: BTreeMap::new(),
        }
    }

    fn one(&self) -> Self::Elem {
        let mut terms = BTreeMap::new();
        terms.insert((0, 0), self.base.one());
        BiPoly { terms }
    }

    fn is_zero(&self, a: &Self::Elem) -> bool {
        a.terms.is_empty()
    }

    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        let mut terms = a.terms.clone();
        for (k, v) in &b.terms {
            let entry = terms.entry(*k).or_insert_with(|| self.base.zero());
            *entry = self.base.add(entry, v);
        }
        terms.retain(|_, v| !self.base.is_zero(v));
        BiPoly { terms }
    }

    fn neg(&self, a: &Self::Elem) -> Self::Elem {
        BiPoly {
            terms: a
                .terms
                .iter()
                .map(|(k, v)| (*k, self.base.neg(v)))
                .collect(),
        }
    }

    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        let mut terms: BTreeMap<(u32, u32), R::Elem> = BTreeMap::new();
        for ((i1, j1), c1) in &a.terms {
            for ((i2, j2), c2) in &b.terms {
                let key = (i1 + i2, j1 + j2);
                let prod = self.base.mul(c1, c2);
                let entry = terms.entry(key).or_insert_with(|| self.base.zero());
                *entry = self.base.add(entry, &prod);
            }
        }
        terms.retain(|_, v| !self.base.is_zero(v));
        BiPoly { terms }
    }

    fn from_u64(&self, n: u64) -> Self::Elem {
        let c = self.base.from_u64(n);
        if self.base.is_zero(&c) {
            self.zero()
        } else {
            let mut terms = BTreeMap::new();
            terms.insert((0, 0), c);
            BiPoly { terms }
        }
    }

    fn format_elem(&self, a: &Self::Elem, _nested: bool) -> String {
        // Diagnostic form only; bivariate values never hit the file formats.
        if a.terms.is_empty() {
            return "0".into();
        }
        a.terms
            .iter()
            .rev()
            .map(|((i, j), c)| format!("[{i},{j}]:{}", self.base.format_elem(c, true)))
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

/// Expand f(x + y) for a univariate f, with the expansion binomials taken
/// digitwise mod p.
pub fn substitute_sum<R: Ring>(
    poly_ring: &PolyRing<R>,
    f: &Poly<R::Elem>,
    target: &BiPolyRing<R>,
) -> BiPoly<R::Elem> {
    let table = LucasTable::new(poly_ring.characteristic());
    let base = poly_ring.base();
    let mut terms = Vec::new();
    for (n, c) in f.coeffs().iter().enumerate() {
        if base.is_zero(c) {
            continue;
        }
        for i in 0..=n {
            let b = table.binom(n as u64, i as u64);
            if b == 0 {
                continue;
            }
            let coeff = base.mul(c, &base.from_u64(b));
            terms.push(((i as u32, (n - i) as u32), coeff));
        }
    }
    target.from_terms(terms)
}
