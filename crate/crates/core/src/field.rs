//! Prime and extension fields F_q, q = p^lambda.
//!
//! An extension field is F_p[u]/(m(u)) for a stored monic irreducible m of
//! degree lambda; the prime field is the degenerate case lambda = 1 with the
//! identity modulus u. Elements are coefficient vectors of fixed length
//! lambda, always reduced, so equality is plain coefficientwise comparison.

use crate::ring::{Field, Ring};
use crate::{Error, Result};

/// Field descriptor for F_q = F_p[u]/(m(u)).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fq {
    p: u64,
    lambda: usize,
    /// Monic modulus, dense low-to-high, length lambda + 1.
    modulus: Vec<u64>,
}

/// Element of F_q: coefficients of 1, u, ..., u^(lambda-1), each in [0, p).
pub type FqElem = Vec<u64>;

/// Largest supported field order. Table-based digit binomials allocate
/// O(p) and extension arithmetic enumerates up to q elements.
const MAX_ORDER: u64 = 1 << 20;

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Default irreducible moduli for the small prime powers the CLI accepts
/// without an explicit override, low-to-high coefficients.
fn default_modulus(p: u64, lambda: usize) -> Option<Vec<u64>> {
    match (p, lambda) {
        (2, 2) => Some(vec![1, 1, 1]),       // u^2 + u + 1
        (2, 3) => Some(vec![1, 1, 0, 1]),    // u^3 + u + 1
        (2, 4) => Some(vec![1, 1, 0, 0, 1]), // u^4 + u + 1
        (3, 2) => Some(vec![2, 2, 1]),       // u^2 + 2u + 2
        (3, 3) => Some(vec![1, 2, 0, 1]),    // u^3 + 2u + 1
        (5, 2) => Some(vec![2, 4, 1]),       // u^2 + 4u + 2
        _ => None,
    }
}

impl Fq {
    /// Prime field F_p.
    pub fn prime(p: u64) -> Result<Fq> {
        if !is_prime(p) {
            return Err(Error::InvalidField(format!("{p} is not prime")));
        }
        if p > MAX_ORDER {
            return Err(Error::InvalidField(format!(
                "field order {p} exceeds the supported bound {MAX_ORDER}"
            )));
        }
        Ok(Fq {
            p,
            lambda: 1,
            modulus: vec![0, 1],
        })
    }

    /// F_{p^lambda} with the built-in modulus table.
    pub fn extension(p: u64, lambda: usize) -> Result<Fq> {
        if lambda == 1 {
            return Fq::prime(p);
        }
        let modulus = default_modulus(p, lambda).ok_or_else(|| {
            Error::InvalidField(format!(
                "no default modulus for q = {p}^{lambda}; supply one explicitly"
            ))
        })?;
        Fq::with_modulus(p, modulus)
    }

    /// Build F_q for a prime power q, using the default modulus table.
    pub fn from_order(q: u64) -> Result<Fq> {
        let (p, lambda) = factor_prime_power(q)
            .ok_or_else(|| Error::InvalidField(format!("{q} is not a prime power")))?;
        Fq::extension(p, lambda)
    }

    /// F_p[u]/(m(u)) for an explicit monic modulus, validated for
    /// irreducibility by trial division against every monic polynomial of
    /// degree at most lambda/2.
    pub fn with_modulus(p: u64, modulus: Vec<u64>) -> Result<Fq> {
        if !is_prime(p) {
            return Err(Error::InvalidField(format!("{p} is not prime")));
        }
        let mut modulus = modulus;
        while modulus.last() == Some(&0) {
            modulus.pop();
        }
        if modulus.len() < 2 {
            return Err(Error::InvalidField("modulus must have degree >= 1".into()));
        }
        let lambda = modulus.len() - 1;
        if p.checked_pow(lambda as u32).is_none_or(|q| q > MAX_ORDER) {
            return Err(Error::InvalidField(format!(
                "field order {p}^{lambda} exceeds the supported bound {MAX_ORDER}"
            )));
        }
        if modulus[lambda] != 1 {
            return Err(Error::InvalidField("modulus must be monic".into()));
        }
        if modulus.iter().any(|&c| c >= p) {
            return Err(Error::InvalidField(
                "modulus coefficients must be reduced mod p".into(),
            ));
        }
        if !irreducible_by_trial_division(p, &modulus) {
            return Err(Error::InvalidField(format!(
                "modulus is not irreducible over F_{p}"
            )));
        }
        Ok(Fq { p, lambda, modulus })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn lambda(&self) -> usize {
        self.lambda
    }

    pub fn q(&self) -> u64 {
        self.p.pow(self.lambda as u32)
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    /// The generator u of the extension (zero in the prime field, where the
    /// modulus is u itself).
    pub fn gen_u(&self) -> FqElem {
        let mut rep = vec![0; self.lambda];
        if self.lambda > 1 {
            rep[1] = 1;
        }
        self.reduce_vec(rep)
    }

    /// Element from explicit u-coefficients (low-to-high, any length).
    pub fn elem_from_coeffs(&self, coeffs: &[u64]) -> FqElem {
        let mut rep: Vec<u64> = coeffs.iter().map(|c| c % self.p).collect();
        rep.resize(rep.len().max(self.lambda), 0);
        self.reduce_vec(rep)
    }

    /// All q elements, in lexicographic coefficient order.
    pub fn all_elements(&self) -> Vec<FqElem> {
        let mut out = vec![vec![0; self.lambda]];
        for i in 0..self.lambda {
            let mut next = Vec::with_capacity(out.len() * self.p as usize);
            for e in &out {
                for c in 0..self.p {
                    let mut e2 = e.clone();
                    e2[i] = c;
                    next.push(e2);
                }
            }
            out = next;
        }
        out
    }

    fn reduce_vec(&self, mut rep: Vec<u64>) -> FqElem {
        // Polynomial reduction mod modulus, top down.
        while rep.len() > self.lambda {
            let d = rep.len() - 1;
            let lead = rep[d] % self.p;
            rep.pop();
            if lead != 0 {
                let shift = d - self.lambda;
                for (k, &mc) in self.modulus[..self.lambda].iter().enumerate() {
                    let idx = shift + k;
                    let sub = (lead * mc) % self.p;
                    rep[idx] = (rep[idx] + self.p - sub) % self.p;
                }
            }
        }
        rep.resize(self.lambda, 0);
        for c in rep.iter_mut() {
            *c %= self.p;
        }
        rep
    }

    /// Frobenius x -> x^p.
    pub fn frobenius(&self, a: &FqElem) -> FqElem {
        self.pow(a, self.p)
    }
}

fn factor_prime_power(q: u64) -> Option<(u64, usize)> {
    if q < 2 {
        return None;
    }
    let mut p = 2;
    while p * p <= q {
        if q.is_multiple_of(p) {
            let mut n = q;
            let mut lambda = 0;
            while n.is_multiple_of(p) {
                n /= p;
                lambda += 1;
            }
            return (n == 1).then_some((p, lambda));
        }
        p += 1;
    }
    Some((q, 1))
}

/// Check irreducibility of a monic polynomial over F_p by dividing by every
/// monic polynomial of degree 1 ..= deg/2.
fn irreducible_by_trial_division(p: u64, modulus: &[u64]) -> bool {
    let deg = modulus.len() - 1;
    for d in 1..=deg / 2 {
        // Enumerate the p^d monic divisor candidates of degree d.
        let count = p.pow(d as u32);
        for idx in 0..count {
            let mut divisor = Vec::with_capacity(d + 1);
            let mut n = idx;
            for _ in 0..d {
                divisor.push(n % p);
                n /= p;
            }
            divisor.push(1);
            if poly_rem_is_zero(p, modulus, &divisor) {
                return false;
            }
        }
    }
    true
}

fn poly_rem_is_zero(p: u64, num: &[u64], den: &[u64]) -> bool {
    let mut rem: Vec<u64> = num.to_vec();
    let dd = den.len() - 1;
    while rem.len() > dd {
        let lead = *rem.last().unwrap() % p;
        let shift = rem.len() - 1 - dd;
        rem.pop();
        if lead != 0 {
            for (k, &dc) in den[..dd].iter().enumerate() {
                let sub = (lead * dc) % p;
                rem[shift + k] = (rem[shift + k] + p - sub) % p;
            }
        }
    }
    rem.iter().all(|&c| c % p == 0)
}

impl Ring for Fq {
    type Elem = FqElem;

    fn characteristic(&self) -> u64 {
        self.p
    }

    fn zero(&self) -> FqElem {
        vec![0; self.lambda]
    }

    fn one(&self) -> FqElem {
        let mut e = vec![0; self.lambda];
        e[0] = 1;
        e
    }

    fn is_zero(&self, a: &FqElem) -> bool {
        a.iter().all(|&c| c == 0)
    }

    fn add(&self, a: &FqElem, b: &FqElem) -> FqElem {
        a.iter()
            .zip(b.iter())
            .map(|(&x, &y)| (x + y) % self.p)
            .collect()
    }

    fn neg(&self, a: &FqElem) -> FqElem {
        a.iter().map(|&x| (self.p - x) % self.p).collect()
    }

    fn mul(&self, a: &FqElem, b: &FqElem) -> FqElem {
        if self.lambda == 1 {
            return vec![(a[0] * b[0]) % self.p];
        }
        let mut prod = vec![0u64; 2 * self.lambda - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % self.p;
            }
        }
        self.reduce_vec(prod)
    }

    fn from_u64(&self, n: u64) -> FqElem {
        let mut e = vec![0; self.lambda];
        e[0] = n % self.p;
        e
    }

    fn format_elem(&self, a: &FqElem, nested: bool) -> String {
        if self.lambda == 1 {
            return a[0].to_string();
        }
        crate::textio::format_u_poly(a, nested)
    }
}

impl Field for Fq {
    fn inv(&self, a: &FqElem) -> Option<FqElem> {
        if self.is_zero(a) {
            return None;
        }
        if self.lambda == 1 {
            return Some(vec![scalar_inv(self.p, a[0])]);
        }
        // Extended Euclid on (a, modulus) over F_p[u].
        let mut r0: Vec<u64> = self.modulus.clone();
        let mut r1: Vec<u64> = a.clone();
        trim(&mut r1);
        let mut s0: Vec<u64> = vec![];
        let mut s1: Vec<u64> = vec![1];
        while !r1.is_empty() {
            let (q, r) = poly_divmod_fp(self.p, &r0, &r1);
            let s = poly_sub_fp(self.p, &s0, &poly_mul_fp(self.p, &q, &s1));
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s;
        }
        // r0 is the gcd, a nonzero constant since the modulus is irreducible.
        debug_assert_eq!(r0.len(), 1);
        let c = scalar_inv(self.p, r0[0]);
        let mut out: Vec<u64> = s0.iter().map(|&x| (x * c) % self.p).collect();
        out.resize(self.lambda, 0);
        Some(self.reduce_vec(out))
    }
}

fn scalar_inv(p: u64, a: u64) -> u64 {
    // Fermat: a^(p-2) mod p.
    let mut acc = 1u64;
    let mut base = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    acc
}

fn trim(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

fn poly_mul_fp(p: u64, a: &[u64], b: &[u64]) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    trim(&mut out);
    out
}

fn poly_sub_fp(p: u64, a: &[u64], b: &[u64]) -> Vec<u64> {
    let mut out = vec![0u64; a.len().max(b.len())];
    for (i, o) in out.iter_mut().enumerate() {
        let x = a.get(i).copied().unwrap_or(0);
        let y = b.get(i).copied().unwrap_or(0);
        *o = (x + p - y) % p;
    }
    trim(&mut out);
    out
}

fn poly_divmod_fp(p: u64, num: &[u64], den: &[u64]) -> (Vec<u64>, Vec<u64>) {
    let mut rem = num.to_vec();
    trim(&mut rem);
    let dd = den.len() - 1;
    let lead_inv = scalar_inv(p, den[dd]);
    let mut quot = vec![0u64; rem.len().saturating_sub(dd)];
    while rem.len() > dd {
        let lead = (*rem.last().unwrap() * lead_inv) % p;
        let shift = rem.len() - 1 - dd;
        quot[shift] = lead;
        rem.pop();
        if lead != 0 {
            for (k, &dc) in den[..dd].iter().enumerate() {
                let sub = (lead * dc) % p;
                rem[shift + k] = (rem[shift + k] + p - sub) % p;
            }
        }
        trim(&mut rem);
    }
    trim(&mut quot);
    (quot, rem)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_arithmetic() {
        let f3 = Fq::prime(3).unwrap();
        let two = f3.from_u64(2);
        assert_eq!(f3.mul(&two, &two), f3.one());
        assert_eq!(f3.add(&two, &f3.one()), f3.zero());
        assert_eq!(f3.inv(&two).unwrap(), two);
        assert_eq!(f3.from_i64(-1), two);
    }

    #[test]
    fn rejects_composite_characteristic() {
        assert!(Fq::prime(6).is_err());
        assert!(Fq::from_order(12).is_err());
    }

    #[test]
    fn f4_table_modulus_is_valid() {
        let f4 = Fq::from_order(4).unwrap();
        assert_eq!(f4.q(), 4);
        let u = f4.gen_u();
        // u^2 = u + 1 under u^2 + u + 1.
        assert_eq!(f4.mul(&u, &u), f4.add(&u, &f4.one()));
        // Every nonzero element satisfies x^3 = 1.
        for e in f4.all_elements() {
            if !f4.is_zero(&e) {
                assert_eq!(f4.pow(&e, 3), f4.one());
                assert_eq!(f4.mul(&e, &f4.inv(&e).unwrap()), f4.one());
            }
        }
    }

    #[test]
    fn all_default_moduli_are_irreducible() {
        for q in [4u64, 8, 9, 16, 25, 27] {
            let f = Fq::from_order(q).unwrap();
            assert_eq!(f.q(), q);
            assert_eq!(f.all_elements().len() as u64, q);
        }
    }

    #[test]
    fn rejects_reducible_modulus() {
        // u^2 + 1 = (u + 1)^2 over F_2.
        assert!(Fq::with_modulus(2, vec![1, 0, 1]).is_err());
        // u^2 - 1 over F_3.
        assert!(Fq::with_modulus(3, vec![2, 0, 1]).is_err());
    }

    #[test]
    fn accepts_modulus_override() {
        // u^2 + u + 2 is irreducible over F_3 (no roots).
        let f9 = Fq::with_modulus(3, vec![2, 1, 1]).unwrap();
        assert_eq!(f9.q(), 9);
        let u = f9.gen_u();
        assert_eq!(f9.pow(&u, 8), f9.one());
    }

    #[test]
    fn extension_inverse_round_trips() {
        let f27 = Fq::from_order(27).unwrap();
        for e in f27.all_elements() {
            if !f27.is_zero(&e) {
                let inv = f27.inv(&e).unwrap();
                assert_eq!(f27.mul(&e, &inv), f27.one());
            }
        }
    }

    #[test]
    fn frobenius_fixes_prime_subfield_and_permutes() {
        let f9 = Fq::from_order(9).unwrap();
        for c in 0..3 {
            let e = f9.from_u64(c);
            assert_eq!(f9.frobenius(&e), e);
        }
        let u = f9.gen_u();
        // Frobenius has order lambda.
        assert_ne!(f9.frobenius(&u), u);
        assert_eq!(f9.frobenius(&f9.frobenius(&u)), u);
    }
}
