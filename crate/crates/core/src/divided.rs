//! The truncated ring R{{D}} of divided power series.
//!
//! The symbols D_i multiply by D_i * D_j = C(i+j, j) D_{i+j} with the
//! binomial reduced mod p, which makes the ring very far from a power
//! series ring in small characteristic: most products of symbols vanish.
//!
//! Every element carries its own truncation order N and is known exactly on
//! indices 0..N. Binary operations truncate to the smaller window. Plain
//! `==` is structural (same window, same coefficients); the mathematically
//! meaningful comparison is [`DividedRing::eq_truncated`], which compares
//! two elements on the largest window where both are known and reports that
//! window. Agreement there says nothing about higher indices.

use std::collections::BTreeMap;

use crate::lucas::LucasTable;
use crate::par;
use crate::poly::{Poly, PolyRing};
use crate::ring::Ring;
use crate::{Error, Result};

/// Truncated divided power series: finitely many stored coefficients, all
/// at indices below `trunc`, all nonzero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Divided<T> {
    trunc: usize,
    coeffs: BTreeMap<u64, T>,
}

impl<T> Divided<T> {
    pub fn trunc(&self) -> usize {
        self.trunc
    }

    pub fn coeffs(&self) -> &BTreeMap<u64, T> {
        &self.coeffs
    }

    /// Indices of the nonzero coefficients, ascending.
    pub fn support(&self) -> Vec<u64> {
        self.coeffs.keys().copied().collect()
    }

    /// Smallest index with a nonzero coefficient, if any.
    pub fn lowest_index(&self) -> Option<u64> {
        self.coeffs.keys().next().copied()
    }
}

/// The ring R{{D}} over a coefficient ring R, truncation managed per value.
#[derive(Clone, Debug, PartialEq)]
pub struct DividedRing<R: Ring> {
    base: R,
}

impl<R: Ring> DividedRing<R> {
    pub fn new(base: R) -> Self {
        DividedRing { base }
    }

    pub fn base(&self) -> &R {
        &self.base
    }

    pub fn zero(&self, trunc: usize) -> Divided<R::Elem> {
        assert!(trunc >= 1, "truncation order must be positive");
        Divided {
            trunc,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn one(&self, trunc: usize) -> Divided<R::Elem> {
        let mut f = self.zero(trunc);
        f.coeffs.insert(0, self.base.one());
        f
    }

    /// Build from (index, coefficient) pairs; zero coefficients are dropped
    /// and indices at or above `trunc` are rejected.
    pub fn from_entries(
        &self,
        trunc: usize,
        entries: impl IntoIterator<Item = (u64, R::Elem)>,
    ) -> Result<Divided<R::Elem>> {
        let mut f = self.zero(trunc);
        for (i, c) in entries {
            if i >= trunc as u64 {
                return Err(Error::IndexOutOfWindow { index: i, trunc });
            }
            if !self.base.is_zero(&c) && f.coeffs.insert(i, c).is_some() {
                return Err(Error::Invalid(format!("duplicate index {i}")));
            }
        }
        Ok(f)
    }

    pub fn coeff(&self, f: &Divided<R::Elem>, i: u64) -> R::Elem {
        f.coeffs
            .get(&i)
            .cloned()
            .unwrap_or_else(|| self.base.zero())
    }

    pub fn set_coeff(&self, f: &mut Divided<R::Elem>, i: u64, c: R::Elem) {
        assert!(i < f.trunc as u64, "index {} outside window {}", i, f.trunc);
        if self.base.is_zero(&c) {
            f.coeffs.remove(&i);
        } else {
            f.coeffs.insert(i, c);
        }
    }

    /// Reinterpret on a smaller window, discarding higher coefficients.
    pub fn truncate_to(&self, f: &Divided<R::Elem>, trunc: usize) -> Divided<R::Elem> {
        assert!(trunc >= 1);
        Divided {
            trunc,
            coeffs: f
                .coeffs
                .iter()
                .filter(|(i, _)| **i < trunc as u64)
                .map(|(i, c)| (*i, c.clone()))
                .collect(),
        }
    }

    /// Rebuild over another coefficient ring.
    pub fn map_into<S: Ring>(
        &self,
        f: &Divided<R::Elem>,
        target: &DividedRing<S>,
        map: impl Fn(&R::Elem) -> S::Elem,
    ) -> Divided<S::Elem> {
        let mut out = target.zero(f.trunc);
        for (i, c) in &f.coeffs {
            target.set_coeff(&mut out, *i, map(c));
        }
        out
    }

    pub fn add(&self, f: &Divided<R::Elem>, g: &Divided<R::Elem>) -> Divided<R::Elem> {
        let trunc = f.trunc.min(g.trunc);
        let mut out = self.truncate_to(f, trunc);
        for (i, c) in &g.coeffs {
            if *i < trunc as u64 {
                let sum = self.base.add(&self.coeff(&out, *i), c);
                self.set_coeff(&mut out, *i, sum);
            }
        }
        out
    }

    pub fn neg(&self, f: &Divided<R::Elem>) -> Divided<R::Elem> {
        Divided {
            trunc: f.trunc,
            coeffs: f
                .coeffs
                .iter()
                .map(|(i, c)| (*i, self.base.neg(c)))
                .collect(),
        }
    }

    pub fn sub(&self, f: &Divided<R::Elem>, g: &Divided<R::Elem>) -> Divided<R::Elem> {
        self.add(f, &self.neg(g))
    }

    /// Product with D_i * D_j = C(i+j, j) D_{i+j}; output truncation is the
    /// smaller input window. Each output index is independent, so this is
    /// one of the crate's data-parallel loops.
    pub fn mul(&self, f: &Divided<R::Elem>, g: &Divided<R::Elem>) -> Divided<R::Elem> {
        let trunc = f.trunc.min(g.trunc);
        let table = LucasTable::new(self.base.characteristic());
        let fe: Vec<(u64, &R::Elem)> = f
            .coeffs
            .iter()
            .filter(|(i, _)| **i < trunc as u64)
            .map(|(i, c)| (*i, c))
            .collect();

        let cols = par::map_range(trunc, |k| {
            let k = k as u64;
            let mut acc = self.base.zero();
            for (i, a) in &fe {
                if *i > k {
                    break;
                }
                let j = k - i;
                let Some(b) = g.coeffs.get(&j) else { continue };
                if j >= trunc as u64 {
                    continue;
                }
                let binom = table.binom(k, j);
                if binom == 0 {
                    continue;
                }
                let term = self.base.mul(a, b);
                let term = self.base.mul(&term, &self.base.from_u64(binom));
                acc = self.base.add(&acc, &term);
            }
            acc
        });

        let mut out = self.zero(trunc);
        for (k, c) in cols.into_iter().enumerate() {
            if !self.base.is_zero(&c) {
                out.coeffs.insert(k as u64, c);
            }
        }
        out
    }

    pub fn pow(&self, f: &Divided<R::Elem>, mut e: u64) -> Divided<R::Elem> {
        let mut base = f.clone();
        let mut acc = self.one(f.trunc);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    /// Inverse of an element with constant coefficient 1, by the geometric
    /// series in fhat = f - 1. Since fhat has lowest index >= 1, powers of
    /// fhat climb the filtration and the series terminates inside the
    /// window.
    pub fn inverse(&self, f: &Divided<R::Elem>) -> Result<Divided<R::Elem>> {
        if !self.base.is_one(&self.coeff(f, 0)) {
            return Err(Error::ConstantTermNotOne);
        }
        let mut fhat = f.clone();
        fhat.coeffs.remove(&0);
        let minus_fhat = self.neg(&fhat);
        let mut acc = self.one(f.trunc);
        let mut term = self.one(f.trunc);
        for _ in 1..f.trunc {
            term = self.mul(&term, &minus_fhat);
            if term.coeffs.is_empty() {
                break;
            }
            acc = self.add(&acc, &term);
        }
        Ok(acc)
    }

    /// Compare on the common window [0, min trunc); returns the verdict and
    /// the window actually compared.
    pub fn eq_truncated(&self, f: &Divided<R::Elem>, g: &Divided<R::Elem>) -> (bool, usize) {
        let window = f.trunc.min(g.trunc);
        let w = window as u64;
        let fi = f.coeffs.range(..w);
        let gi = g.coeffs.range(..w);
        (fi.eq(gi), window)
    }

    /// First index in the common window where the two elements differ.
    pub fn first_difference(&self, f: &Divided<R::Elem>, g: &Divided<R::Elem>) -> Option<u64> {
        let window = (f.trunc.min(g.trunc)) as u64;
        let mut keys: Vec<u64> = f
            .coeffs
            .range(..window)
            .chain(g.coeffs.range(..window))
            .map(|(i, _)| *i)
            .collect();
        keys.sort_unstable();
        keys.dedup();
        keys.into_iter()
            .find(|i| self.coeff(f, *i) != self.coeff(g, *i))
    }
}

/// The divided differential operator: D_i x^n = C(n, i) x^{n-i}, extended
/// linearly.
pub fn dp_apply<R: Ring>(ring: &PolyRing<R>, i: u64, f: &Poly<R::Elem>) -> Poly<R::Elem> {
    let table = LucasTable::new(ring.characteristic());
    let base = ring.base();
    let mut out = ring.zero();
    for (n, c) in f.coeffs().iter().enumerate() {
        let n = n as u64;
        if base.is_zero(c) || n < i {
            continue;
        }
        let b = table.binom(n, i);
        if b == 0 {
            continue;
        }
        let coeff = base.mul(c, &base.from_u64(b));
        out = ring.add(&out, &ring.monomial(coeff, (n - i) as usize));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Fq;
    use crate::lucas::binom_mod_p_u64;
    use crate::poly::Var;
    use rand::{Rng, SeedableRng};

    type PR = PolyRing<Fq>;

    fn setup(p: u64) -> (PR, DividedRing<PR>) {
        let ring = PolyRing::new(Fq::prime(p).unwrap(), Var::X);
        (ring.clone(), DividedRing::new(ring))
    }

    fn symbol(dp: &DividedRing<PR>, i: u64, trunc: usize) -> Divided<Poly<Vec<u64>>> {
        dp.from_entries(trunc, [(i, dp.base().one())]).unwrap()
    }

    #[test]
    fn symbol_products_follow_lucas() {
        // D_1 * D_1 = C(2,1) D_2 = 0 over F_2.
        let (_, dp) = setup(2);
        let d1 = symbol(&dp, 1, 8);
        assert!(dp.mul(&d1, &d1).coeffs().is_empty());

        // D_2 * D_3 = C(5,3) D_5 = 0 over F_5.
        let (_, dp5) = setup(5);
        let prod = dp5.mul(&symbol(&dp5, 2, 8), &symbol(&dp5, 3, 8));
        assert!(prod.coeffs().is_empty());

        // D_1 * D_2 = C(3,2) D_3 = 3 D_3 over F_5.
        let prod = dp5.mul(&symbol(&dp5, 1, 8), &symbol(&dp5, 2, 8));
        assert_eq!(dp5.coeff(&prod, 3), dp5.base().from_u64(3));
    }

    #[test]
    fn unit_is_d0() {
        let (ring, dp) = setup(3);
        let f = dp
            .from_entries(6, [(0, ring.one()), (2, ring.gen()), (5, ring.from_u64(2))])
            .unwrap();
        assert_eq!(dp.mul(&dp.one(6), &f), f);
        assert_eq!(dp.mul(&f, &dp.one(6)), f);
    }

    #[test]
    fn inverse_of_unit_is_unit() {
        let (_, dp) = setup(2);
        assert_eq!(dp.inverse(&dp.one(5)).unwrap(), dp.one(5));
    }

    #[test]
    fn inverse_by_geometric_series() {
        // f = 1 + x D_1 over F_2 at trunc 4. fhat^2 already vanishes since
        // C(2,1) = 0 mod 2, so the series stops at 1 + x D_1 and f is its
        // own inverse; cross-check against f^(p-1).
        let (ring, dp) = setup(2);
        let f = dp
            .from_entries(4, [(0, ring.one()), (1, ring.gen())])
            .unwrap();
        let inv = dp.inverse(&f).unwrap();
        assert_eq!(inv, f);
        assert_eq!(dp.mul(&f, &inv), dp.one(4));
        assert_eq!(inv, dp.pow(&f, 1)); // p - 1 = 1
    }

    #[test]
    fn inverse_requires_unit_constant_term() {
        let (ring, dp) = setup(3);
        let f = dp
            .from_entries(4, [(0, ring.from_u64(2)), (1, ring.gen())])
            .unwrap();
        assert!(matches!(dp.inverse(&f), Err(Error::ConstantTermNotOne)));
    }

    #[test]
    fn binary_ops_truncate_to_the_smaller_window() {
        let (ring, dp) = setup(2);
        let narrow = dp
            .from_entries(4, [(0, ring.one()), (3, ring.gen())])
            .unwrap();
        let wide = dp
            .from_entries(9, [(0, ring.one()), (6, ring.one())])
            .unwrap();
        assert_eq!(dp.add(&narrow, &wide).trunc(), 4);
        let prod = dp.mul(&narrow, &wide);
        assert_eq!(prod.trunc(), 4);
        // Wide-only data above the common window is dropped.
        assert!(prod.support().iter().all(|&i| i < 4));
    }

    #[test]
    fn entries_outside_the_window_are_rejected() {
        let (ring, dp) = setup(2);
        assert!(matches!(
            dp.from_entries(4, [(4, ring.one())]),
            Err(Error::IndexOutOfWindow { index: 4, trunc: 4 })
        ));
        assert!(dp.from_entries(4, [(3, ring.one())]).is_ok());
    }

    #[test]
    fn pth_power_of_unit_plus_higher_is_one() {
        let (ring, dp) = setup(3);
        // (1 + x D_1)^3 = 1 at trunc 9.
        let f = dp
            .from_entries(9, [(0, ring.one()), (1, ring.gen())])
            .unwrap();
        let direct = dp.mul(&dp.mul(&f, &f), &f);
        assert_eq!(direct, dp.one(9));
        assert_eq!(dp.pow(&f, 3), dp.one(9));
        assert_eq!(dp.pow(&f, 1), f);
    }

    #[test]
    fn filtration_respected_by_mul() {
        let (ring, dp) = setup(2);
        let f = dp
            .from_entries(32, [(3, ring.one()), (9, ring.gen())])
            .unwrap();
        let g = dp
            .from_entries(32, [(4, ring.one()), (11, ring.one())])
            .unwrap();
        if let Some(low) = dp.mul(&f, &g).lowest_index() {
            assert!(low >= 7);
        }
        // Random sparse pairs over F_2 and F_3.
        for &p in &[2u64, 3] {
            let (ring, dp) = setup(p);
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(41 * p);
            for _ in 0..50 {
                let make = |low: u64, rng: &mut rand_chacha::ChaCha8Rng| {
                    let mut f = dp.zero(48);
                    for _ in 0..4 {
                        let i = rng.gen_range(low..48u64);
                        dp.set_coeff(&mut f, i, ring.monomial(ring.base().one(), 1));
                    }
                    f
                };
                let (a, b) = (rng.gen_range(0..12u64), rng.gen_range(0..12u64));
                let f = make(a, &mut rng);
                let g = make(b, &mut rng);
                let fl = f.lowest_index();
                let gl = g.lowest_index();
                if let (Some(fl), Some(gl), Some(low)) = (fl, gl, dp.mul(&f, &g).lowest_index()) {
                    assert!(low >= fl + gl);
                }
            }
        }
    }

    #[test]
    fn mixed_truncation_equality_reports_window() {
        let (ring, dp) = setup(2);
        let a = dp
            .from_entries(2, [(0, ring.one()), (1, ring.gen())])
            .unwrap();
        let b = dp
            .from_entries(5, [(0, ring.one()), (1, ring.gen()), (3, ring.one())])
            .unwrap();
        let (eq, window) = dp.eq_truncated(&a, &b);
        assert!(eq);
        assert_eq!(window, 2);
        assert_ne!(a, b); // structural equality sees the windows differ
        assert_eq!(dp.first_difference(&a, &b), None);
    }

    #[test]
    fn ring_axioms_on_random_triples() {
        for &p in &[2u64, 3] {
            let (ring, dp) = setup(p);
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(p);
            let sample = |rng: &mut rand_chacha::ChaCha8Rng| {
                let mut f = dp.zero(32);
                for _ in 0..rng.gen_range(0..8) {
                    let i = rng.gen_range(0..32u64);
                    let deg = rng.gen_range(0..4usize);
                    let c = ring.monomial(ring.base().from_u64(rng.gen_range(0..p)), deg);
                    let cur = dp.coeff(&f, i);
                    dp.set_coeff(&mut f, i, ring.add(&cur, &c));
                }
                f
            };
            for _ in 0..100 {
                let (f, g, h) = (sample(&mut rng), sample(&mut rng), sample(&mut rng));
                assert_eq!(dp.mul(&f, &g), dp.mul(&g, &f));
                assert_eq!(dp.mul(&dp.mul(&f, &g), &h), dp.mul(&f, &dp.mul(&g, &h)));
                assert_eq!(
                    dp.mul(&dp.add(&f, &g), &h),
                    dp.add(&dp.mul(&f, &h), &dp.mul(&g, &h))
                );
                assert_eq!(dp.mul(&dp.one(32), &f), f);
            }
        }
    }

    #[test]
    fn inverse_equals_p_minus_one_power() {
        for &p in &[2u64, 3, 5] {
            let (ring, dp) = setup(p);
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(17 * p);
            for _ in 0..20 {
                let mut f = dp.one(64);
                for _ in 0..6 {
                    let i = rng.gen_range(1..64u64);
                    let deg = rng.gen_range(0..3usize);
                    let c = ring.monomial(ring.base().from_u64(rng.gen_range(0..p)), deg);
                    let cur = dp.coeff(&f, i);
                    dp.set_coeff(&mut f, i, ring.add(&cur, &c));
                }
                let inv = dp.inverse(&f).unwrap();
                assert_eq!(dp.mul(&f, &inv), dp.one(64));
                assert_eq!(inv, dp.pow(&f, p - 1));
                assert_eq!(dp.pow(&f, p), dp.one(64));
            }
        }
    }

    #[test]
    fn apply_operator_examples() {
        let f3 = PolyRing::new(Fq::prime(3).unwrap(), Var::X);
        // D_1 x^2 = 2x over F_3.
        let x2 = f3.monomial(f3.base().one(), 2);
        assert_eq!(dp_apply(&f3, 1, &x2), f3.monomial(f3.base().from_u64(2), 1));
        // D_0 is the identity.
        let f = f3.add(&x2, &f3.gen());
        assert_eq!(dp_apply(&f3, 0, &f), f);
        // D_2 x^5 = C(5,2) x^3 = 0 over F_2.
        let f2 = PolyRing::new(Fq::prime(2).unwrap(), Var::X);
        let x5 = f2.monomial(f2.base().one(), 5);
        assert!(f2.is_zero(&dp_apply(&f2, 2, &x5)));
    }

    #[test]
    fn apply_operator_is_linear() {
        let ring = PolyRing::new(Fq::prime(5).unwrap(), Var::X);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(13);
        for _ in 0..30 {
            let f = ring.from_coeffs(
                (0..8)
                    .map(|_| ring.base().from_u64(rng.gen_range(0..5)))
                    .collect(),
            );
            let g = ring.from_coeffs(
                (0..8)
                    .map(|_| ring.base().from_u64(rng.gen_range(0..5)))
                    .collect(),
            );
            for i in 0..5u64 {
                assert_eq!(
                    dp_apply(&ring, i, &ring.add(&f, &g)),
                    ring.add(&dp_apply(&ring, i, &f), &dp_apply(&ring, i, &g))
                );
            }
        }
    }

    #[test]
    fn apply_operator_composition_law() {
        let ring = PolyRing::new(Fq::prime(3).unwrap(), Var::X);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..40 {
            let f = ring.from_coeffs(
                (0..10)
                    .map(|_| ring.base().from_u64(rng.gen_range(0..3)))
                    .collect(),
            );
            for i in 0..4u64 {
                for j in 0..4u64 {
                    let lhs = dp_apply(&ring, i, &dp_apply(&ring, j, &f));
                    let c = binom_mod_p_u64(i + j, i, 3);
                    let rhs = ring.scale(&ring.base().from_u64(c), &dp_apply(&ring, i + j, &f));
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }
}
