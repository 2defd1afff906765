//! Actions on the divided power ring: the digit-permutation automorphism
//! and the coefficient-Frobenius, index-dilation, and evaluation
//! endomorphisms.
//!
//! A digit permutation acts on all of {0, 1, ...} in principle; computation
//! pins a window {0, .., K-1} of digit positions, and q^K is the unique
//! truncation the induced index map preserves, so window-stable elements
//! are required.

use crate::digits::{digits, from_digits};
use crate::divided::{Divided, DividedRing};
use crate::nullseq::NullSeq;
use crate::poly::{Poly, PolyRing};
use crate::ring::Ring;
use crate::{Error, Result};

/// A permutation of the digit positions {0, .., K-1} in base q.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DigitPerm {
    q: u64,
    perm: Vec<usize>,
}

impl DigitPerm {
    /// `perm[i]` is where digit position i goes; must be a bijection. The
    /// window is capped so q^K stays addressable.
    pub fn new(q: u64, perm: Vec<usize>) -> Result<DigitPerm> {
        if q < 2 {
            return Err(Error::Invalid("digit base must be at least 2".into()));
        }
        if q.checked_pow(perm.len() as u32).is_none_or(|n| n > 1 << 32) {
            return Err(Error::Invalid(format!(
                "window of {} digit positions in base {q} is too large",
                perm.len()
            )));
        }
        let k = perm.len();
        let mut seen = vec![false; k];
        for &image in &perm {
            if image >= k || seen[image] {
                return Err(Error::Invalid("not a permutation of the window".into()));
            }
            seen[image] = true;
        }
        Ok(DigitPerm { q, perm })
    }

    pub fn identity(q: u64, window: usize) -> DigitPerm {
        DigitPerm {
            q,
            perm: (0..window).collect(),
        }
    }

    /// Transposition of two digit positions inside the window.
    pub fn swap(q: u64, window: usize, a: usize, b: usize) -> Result<DigitPerm> {
        let mut perm: Vec<usize> = (0..window).collect();
        if a >= window || b >= window {
            return Err(Error::Invalid("swap positions outside window".into()));
        }
        perm.swap(a, b);
        DigitPerm::new(q, perm)
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn window(&self) -> usize {
        self.perm.len()
    }

    /// The truncation this permutation preserves: q^K.
    pub fn stable_trunc(&self) -> usize {
        self.q.pow(self.window() as u32) as usize
    }

    pub fn inverse(&self) -> DigitPerm {
        let mut inv = vec![0; self.perm.len()];
        for (i, &image) in self.perm.iter().enumerate() {
            inv[image] = i;
        }
        DigitPerm {
            q: self.q,
            perm: inv,
        }
    }

    /// Composition acting as (self . other)(i) = self(other(i)).
    pub fn compose(&self, other: &DigitPerm) -> Result<DigitPerm> {
        if self.q != other.q || self.window() != other.window() {
            return Err(Error::Invalid("mismatched permutation windows".into()));
        }
        DigitPerm::new(self.q, other.perm.iter().map(|&i| self.perm[i]).collect())
    }

    /// Transport the base-q digits of n to their new positions.
    pub fn apply_index(&self, n: u64) -> Result<u64> {
        let ds = digits(n, self.q);
        if ds.len() > self.window() {
            return Err(Error::IndexOutOfWindow {
                index: n,
                trunc: self.stable_trunc(),
            });
        }
        let mut out = vec![0u64; self.window()];
        for (i, d) in ds.into_iter().enumerate() {
            out[self.perm[i]] = d;
        }
        Ok(from_digits(&out, self.q))
    }
}

/// Permute the symbol indices of a window-stable element. Requires the
/// element's truncation to be exactly q^K.
pub fn sigma_star_elem<R: Ring>(
    dp: &DividedRing<R>,
    sigma: &DigitPerm,
    f: &Divided<R::Elem>,
) -> Result<Divided<R::Elem>> {
    if f.trunc() != sigma.stable_trunc() {
        return Err(Error::WindowMismatch {
            trunc: f.trunc(),
            window: sigma.window(),
        });
    }
    let mut out = dp.zero(f.trunc());
    for (i, c) in f.coeffs() {
        dp.set_coeff(&mut out, sigma.apply_index(*i)?, c.clone());
    }
    Ok(out)
}

/// The pointwise endomorphisms of R{{D}}.
#[derive(Clone, Debug, PartialEq)]
pub enum DividedAction<E> {
    /// Index permutation by digit transport.
    Sigma(DigitPerm),
    /// Coefficient Frobenius a_i -> a_i^p.
    Pi1,
    /// Index dilation D_i -> D_{p i}.
    Pi2,
    /// Evaluation a_i -> a_i * r^i.
    Pi3(E),
}

/// Coefficientwise p-th power; truncation unchanged.
pub fn pi1<R: Ring>(dp: &DividedRing<R>, f: &Divided<R::Elem>) -> Divided<R::Elem> {
    let p = dp.base().characteristic();
    let mut out = dp.zero(f.trunc());
    for (i, c) in f.coeffs() {
        dp.set_coeff(&mut out, *i, dp.base().pow(c, p));
    }
    out
}

/// Index dilation i -> p*i. The output window grows to p*(N-1)+1 and every
/// new intermediate coefficient is exactly zero, so nothing is forgotten.
pub fn pi2<R: Ring>(dp: &DividedRing<R>, f: &Divided<R::Elem>) -> Divided<R::Elem> {
    let p = dp.base().characteristic();
    let trunc = (f.trunc() - 1) * p as usize + 1;
    let mut out = dp.zero(trunc);
    for (i, c) in f.coeffs() {
        dp.set_coeff(&mut out, i * p, c.clone());
    }
    out
}

/// Evaluation twist a_i -> a_i * r^i; truncation unchanged.
pub fn pi3<R: Ring>(dp: &DividedRing<R>, f: &Divided<R::Elem>, r: &R::Elem) -> Divided<R::Elem> {
    let mut out = dp.zero(f.trunc());
    let mut power = dp.base().one();
    let mut at = 0u64;
    for (i, c) in f.coeffs() {
        while at < *i {
            power = dp.base().mul(&power, r);
            at += 1;
        }
        dp.set_coeff(&mut out, *i, dp.base().mul(c, &power));
    }
    out
}

pub fn apply_action<R: Ring>(
    dp: &DividedRing<R>,
    action: &DividedAction<R::Elem>,
    f: &Divided<R::Elem>,
) -> Result<Divided<R::Elem>> {
    Ok(match action {
        DividedAction::Sigma(sigma) => sigma_star_elem(dp, sigma, f)?,
        DividedAction::Pi1 => pi1(dp, f),
        DividedAction::Pi2 => pi2(dp, f),
        DividedAction::Pi3(r) => pi3(dp, f, r),
    })
}

/// Transport a null sequence and its additive entries along sigma: indices
/// are mapped and re-sorted, entries follow their indices.
pub fn transport_null_inputs<R: Ring>(
    sigma: &DigitPerm,
    x: &NullSeq,
    e: &[Poly<R::Elem>],
) -> Result<(NullSeq, Vec<Poly<R::Elem>>)> {
    let mut paired: Vec<(u64, Poly<R::Elem>)> = x
        .indices()
        .iter()
        .zip(e.iter().cloned())
        .map(|(&i, f)| Ok((sigma.apply_index(i)?, f)))
        .collect::<Result<_>>()?;
    paired.sort_by_key(|(i, _)| *i);
    let (indices, entries): (Vec<u64>, Vec<_>) = paired.into_iter().unzip();
    Ok((NullSeq::new(x.p(), indices)?, entries))
}

/// Stability verdicts for an action applied to a generating function:
/// multiplicativity before/after, and Carlitz-image membership before/after
/// when a q is supplied.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StabilityReport {
    pub multiplicative_before: bool,
    pub multiplicative_after: bool,
    pub in_image_before: Option<bool>,
    pub in_image_after: Option<bool>,
}

impl StabilityReport {
    /// The action preserved whatever held before.
    pub fn stable(&self) -> bool {
        (!self.multiplicative_before || self.multiplicative_after)
            && match (self.in_image_before, self.in_image_after) {
                (Some(before), Some(after)) => before == after,
                _ => true,
            }
    }
}

pub fn stability_report<R: Ring>(
    ring: &PolyRing<R>,
    action: &DividedAction<Poly<R::Elem>>,
    f: &Divided<Poly<R::Elem>>,
    image_q: Option<u64>,
) -> Result<StabilityReport> {
    use crate::binomial::check_multiplicative;
    use crate::carlitz::is_in_carlitz_image;

    let dp = DividedRing::new(ring.clone());
    let g = apply_action(&dp, action, f)?;
    let membership = |h: &Divided<Poly<R::Elem>>| -> Result<Option<bool>> {
        match image_q {
            None => Ok(None),
            Some(q) => Ok(Some(is_in_carlitz_image(ring, h, q)?.is_yes())),
        }
    };
    Ok(StabilityReport {
        multiplicative_before: check_multiplicative(ring, f).passed(),
        multiplicative_after: check_multiplicative(ring, &g).passed(),
        in_image_before: membership(f)?,
        in_image_after: membership(&g)?,
    })
}
