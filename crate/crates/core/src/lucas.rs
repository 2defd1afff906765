//! Binomial coefficients mod p via the base-p digit product.
//!
//! All binomials in this crate go through here: the digitwise product keeps
//! every intermediate value below p^2, so nothing ever touches big integers.

use crate::digits::digits;
use crate::field::{Fq, FqElem};
use crate::ring::Ring;

/// Per-prime factorial tables for the digit binomials C(a, b) with a, b < p.
#[derive(Clone, Debug)]
pub struct LucasTable {
    p: u64,
    fac: Vec<u64>,
    inv_fac: Vec<u64>,
}

impl LucasTable {
    pub fn new(p: u64) -> LucasTable {
        let n = p as usize;
        let mut fac = vec![1u64; n];
        for i in 1..n {
            fac[i] = fac[i - 1] * i as u64 % p;
        }
        let mut inv_fac = vec![1u64; n];
        if n > 1 {
            inv_fac[n - 1] = pow_mod(fac[n - 1], p - 2, p);
            for i in (1..n).rev() {
                inv_fac[i - 1] = inv_fac[i] * i as u64 % p;
            }
        }
        LucasTable { p, fac, inv_fac }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    /// C(m, n) mod p, digitwise in base p. Zero when n > m or any digit of
    /// n exceeds the matching digit of m.
    pub fn binom(&self, mut m: u64, mut n: u64) -> u64 {
        let mut acc = 1u64;
        while n > 0 || m > 0 {
            let (a, b) = (m % self.p, n % self.p);
            if b > a {
                return 0;
            }
            acc = acc * self.fac[a as usize] % self.p * self.inv_fac[b as usize] % self.p
                * self.inv_fac[(a - b) as usize]
                % self.p;
            m /= self.p;
            n /= self.p;
        }
        acc
    }
}

fn pow_mod(mut base: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    base %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    acc
}

/// C(m, n) mod p as a bare residue.
pub fn binom_mod_p_u64(m: u64, n: u64, p: u64) -> u64 {
    LucasTable::new(p).binom(m, n)
}

/// C(m, n) mod p as an element of the prime subfield of `ctx`.
pub fn binom_mod_p(m: u64, n: u64, ctx: &Fq) -> FqElem {
    ctx.from_u64(binom_mod_p_u64(m, n, ctx.p()))
}

/// C(m, n)·1 in an arbitrary ring of characteristic p.
pub fn binom_in<R: Ring>(ring: &R, m: u64, n: u64) -> R::Elem {
    ring.from_u64(binom_mod_p_u64(m, n, ring.characteristic()))
}

/// The base-q digit product form: C(m, n) mod p computed from base-q digits
/// with q = p^lambda, each digit binomial again reduced digitwise. Agrees
/// with the base-p form; kept callable for cross-checking.
pub fn binom_mod_p_base_q(m: u64, n: u64, q: u64, p: u64) -> u64 {
    let table = LucasTable::new(p);
    let md = digits(m, q);
    let nd = digits(n, q);
    let mut acc = 1u64;
    for i in 0..md.len().max(nd.len()) {
        let a = md.get(i).copied().unwrap_or(0);
        let b = nd.get(i).copied().unwrap_or(0);
        acc = acc * table.binom(a, b) % p;
    }
    acc
}
