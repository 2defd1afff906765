//! Ring and field abstractions.
//!
//! Rings are descriptor objects: an element by itself does not know which
//! ring it belongs to, so all arithmetic goes through the descriptor. This
//! keeps elements small and lets the same generic code run over F_q,
//! polynomial rings, and rational function fields.

use std::fmt::Debug;

/// A commutative ring of prime characteristic.
///
/// Descriptors are cheap to clone and compare; two descriptors that compare
/// equal present the same ring, and elements may be moved between them.
pub trait Ring: Clone + PartialEq + Debug + Send + Sync {
    type Elem: Clone + PartialEq + Debug + Send + Sync;

    /// The characteristic prime p of the ring.
    fn characteristic(&self) -> u64;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }

    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;

    /// `n * 1` in this ring (reduces mod p).
    #[allow(clippy::wrong_self_convention)]
    fn from_u64(&self, n: u64) -> Self::Elem;

    /// Image of a signed integer, so `-1` maps to `p - 1` and so on.
    #[allow(clippy::wrong_self_convention)]
    fn from_i64(&self, n: i64) -> Self::Elem {
        let p = self.characteristic() as i64;
        self.from_u64(n.rem_euclid(p) as u64)
    }

    fn pow(&self, a: &Self::Elem, mut e: u64) -> Self::Elem {
        let mut base = a.clone();
        let mut acc = self.one();
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

    fn sum<'a>(&self, items: impl IntoIterator<Item = &'a Self::Elem>) -> Self::Elem
    where
        Self::Elem: 'a,
    {
        items
            .into_iter()
            .fold(self.zero(), |acc, x| self.add(&acc, x))
    }

    fn product<'a>(&self, items: impl IntoIterator<Item = &'a Self::Elem>) -> Self::Elem
    where
        Self::Elem: 'a,
    {
        items
            .into_iter()
            .fold(self.one(), |acc, x| self.mul(&acc, x))
    }

    /// Canonical text form of an element. `nested` selects the compact
    /// spelling used inside parentheses (no spaces around `+`).
    fn format_elem(&self, a: &Self::Elem, nested: bool) -> String;
}

/// A ring in which every nonzero element is invertible.
pub trait Field: Ring {
    /// Multiplicative inverse; `None` for zero.
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Self::Elem> {
        self.inv(b).map(|bi| self.mul(a, &bi))
    }
}
