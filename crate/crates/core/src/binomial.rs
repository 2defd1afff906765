//! Binomial-type sequence checking and generating functions.
//!
//! A sequence {p_n} is of binomial type when p_n(x+y) expands through the
//! convolution of the p_i with mod-p binomial weights. The direct check
//! compares both sides as bivariate polynomials; the generating-function
//! check compares f(x+y) with f(x)f(y) in the divided power ring over
//! R[x, y]. The two agree index by index.

use crate::bipoly::{substitute_sum, BiPoly, BiPolyRing};
use crate::digits::digit_sum;
use crate::divided::{Divided, DividedRing};
use crate::field::Fq;
use crate::lucas::LucasTable;
use crate::par;
use crate::poly::{is_q_linear, Poly, PolyRing};
use crate::ring::Ring;
use crate::{Error, Result};

/// A finite prefix p_0 .. p_{N-1} of a candidate binomial-type sequence.
#[derive(Clone, Debug, PartialEq)]
pub struct PolySeq<R: Ring> {
    ring: PolyRing<R>,
    entries: Vec<Poly<R::Elem>>,
}

impl<R: Ring> PolySeq<R> {
    pub fn new(ring: PolyRing<R>, entries: Vec<Poly<R::Elem>>) -> Self {
        PolySeq { ring, entries }
    }

    pub fn ring(&self) -> &PolyRing<R> {
        &self.ring
    }

    pub fn entries(&self) -> &[Poly<R::Elem>] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn is_trivial(&self) -> bool {
        self.entries.iter().all(|e| self.ring.is_zero(e))
    }
}

/// Verdict of the direct binomial check. A sequence passes only relative to
/// its truncation N; the all-zero sequence is reported separately since it
/// satisfies the identity but is excluded from the nontrivial set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BinomialVerdict {
    Pass { trunc: usize },
    TrivialAllZero,
    Fail { n: usize, monomial: (u32, u32) },
}

impl BinomialVerdict {
    pub fn passed(&self) -> bool {
        matches!(self, BinomialVerdict::Pass { .. })
    }
}

/// Check p_n(x+y) = sum C(n,i) p_i(x) p_{n-i}(y) for every n below the
/// truncation, reporting the first discrepancy by lowest n, then lowest
/// monomial. Per-n checks are independent and run in parallel.
pub fn check_binomial<R: Ring>(seq: &PolySeq<R>) -> BinomialVerdict {
    if seq.is_trivial() {
        return BinomialVerdict::TrivialAllZero;
    }
    let ring = seq.ring();
    let bi = BiPolyRing::new(ring.base().clone());
    let table = LucasTable::new(ring.characteristic());

    let failure = par::first_hit(seq.len(), |n| {
        let lhs = substitute_sum(ring, &seq.entries()[n], &bi);
        let rhs = binomial_rhs(&bi, seq.entries(), n, &table);
        let diff = bi.sub(&lhs, &rhs);
        diff.terms()
            .keys()
            .next()
            .map(|&monomial| BinomialVerdict::Fail { n, monomial })
    });
    failure.unwrap_or(BinomialVerdict::Pass { trunc: seq.len() })
}

fn binomial_rhs<R: Ring>(
    bi: &BiPolyRing<R>,
    entries: &[Poly<R::Elem>],
    n: usize,
    table: &LucasTable,
) -> BiPoly<R::Elem> {
    let mut rhs = bi.zero();
    for i in 0..=n {
        let c = table.binom(n as u64, i as u64);
        if c == 0 {
            continue;
        }
        let mut cross = bi.cross(&entries[i], &entries[n - i]);
        if c != 1 {
            let scalar = bi.from_u64(c);
            cross = bi.mul(&scalar, &cross);
        }
        rhs = bi.add(&rhs, &cross);
    }
    rhs
}

/// Generating function of a sequence: coefficient of D_i is p_i, truncated
/// at the sequence length.
pub fn gen_function<R: Ring>(seq: &PolySeq<R>) -> Divided<Poly<R::Elem>> {
    let dp = DividedRing::new(seq.ring().clone());
    dp.from_entries(
        seq.len(),
        seq.entries()
            .iter()
            .enumerate()
            .map(|(i, p)| (i as u64, p.clone())),
    )
    .expect("indices bounded by construction")
}

/// Sequence read back off a generating function.
pub fn seq_from_gen<R: Ring>(ring: &PolyRing<R>, f: &Divided<Poly<R::Elem>>) -> PolySeq<R> {
    let dp = DividedRing::new(ring.clone());
    let entries = (0..f.trunc() as u64).map(|i| dp.coeff(f, i)).collect();
    PolySeq::new(ring.clone(), entries)
}

/// Verdict of the multiplicativity check on a generating function.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MultVerdict {
    Pass { trunc: usize },
    Fail { index: u64 },
}

impl MultVerdict {
    pub fn passed(&self) -> bool {
        matches!(self, MultVerdict::Pass { .. })
    }
}

/// Compare f(x+y) against f(x)f(y) in the divided power ring over R[x, y],
/// exactly, up to the element's truncation.
pub fn check_multiplicative<R: Ring>(
    ring: &PolyRing<R>,
    f: &Divided<Poly<R::Elem>>,
) -> MultVerdict {
    let bi = BiPolyRing::new(ring.base().clone());
    let dpbi = DividedRing::new(bi.clone());
    let trunc = f.trunc();

    let mut sum_side = dpbi.zero(trunc);
    let mut x_side = dpbi.zero(trunc);
    let mut y_side = dpbi.zero(trunc);
    for (i, c) in f.coeffs() {
        dpbi.set_coeff(&mut sum_side, *i, substitute_sum(ring, c, &bi));
        dpbi.set_coeff(&mut x_side, *i, bi.from_x_poly(c));
        dpbi.set_coeff(&mut y_side, *i, bi.from_y_poly(c));
    }
    let product = dpbi.mul(&x_side, &y_side);
    match dpbi.first_difference(&sum_side, &product) {
        None => MultVerdict::Pass { trunc },
        Some(index) => MultVerdict::Fail { index },
    }
}

/// Built-in sequences.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BuiltinSeq {
    /// {x^i}.
    Monomials,
    /// Pochhammer (x)_i = x(x-1)...(x-i+1).
    Pochhammer,
    /// {x^(digit sum of i in base q)}.
    DigitSum { q: u64 },
    /// p_0 = 1, every later entry 0.
    TrivialUnit,
}

impl BuiltinSeq {
    pub fn parse(name: &str, q: Option<u64>) -> Result<BuiltinSeq> {
        Ok(match name {
            "monomials" => BuiltinSeq::Monomials,
            "pochhammer" => BuiltinSeq::Pochhammer,
            "digitsum" | "digit_sum_q" => BuiltinSeq::DigitSum {
                q: q.ok_or_else(|| Error::Invalid("digitsum needs a digit base q".into()))?,
            },
            "trivial-unit" | "trivial_unit" => BuiltinSeq::TrivialUnit,
            other => {
                return Err(Error::Invalid(format!(
                    "unknown builtin sequence '{other}'"
                )))
            }
        })
    }
}

pub fn builtin(ring: &PolyRing<Fq>, which: BuiltinSeq, n: usize) -> PolySeq<Fq> {
    let entries: Vec<_> = (0..n)
        .map(|i| match which {
            BuiltinSeq::Monomials => ring.monomial(ring.base().one(), i),
            BuiltinSeq::Pochhammer => {
                let mut acc = ring.one();
                for k in 0..i {
                    let shift = ring.constant(ring.base().from_i64(-(k as i64)));
                    acc = ring.mul(&acc, &ring.add(&ring.gen(), &shift));
                }
                acc
            }
            BuiltinSeq::DigitSum { q } => {
                ring.monomial(ring.base().one(), digit_sum(i as u64, q) as usize)
            }
            BuiltinSeq::TrivialUnit => {
                if i == 0 {
                    ring.one()
                } else {
                    ring.zero()
                }
            }
        })
        .collect();
    PolySeq::new(ring.clone(), entries)
}

/// Structural facts forced on every passing sequence: entries at p-power
/// indices are additive, and the generating function has multiplicative
/// order dividing p.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructuralReport {
    /// (index p^j, entry is additive) for each p^j below the truncation.
    pub additive_at_p_powers: Vec<(u64, bool)>,
    pub pth_power_is_one: bool,
}

impl StructuralReport {
    pub fn passed(&self) -> bool {
        self.pth_power_is_one && self.additive_at_p_powers.iter().all(|(_, ok)| *ok)
    }
}

pub fn structural_checks<R: Ring>(seq: &PolySeq<R>) -> StructuralReport {
    let ring = seq.ring();
    let p = ring.characteristic();
    let mut additive = Vec::new();
    let mut idx = 1u64;
    while idx < seq.len() as u64 {
        additive.push((idx, is_q_linear(ring, &seq.entries()[idx as usize], p)));
        idx *= p;
    }
    let dp = DividedRing::new(ring.clone());
    let f = gen_function(seq);
    let pth = dp.pow(&f, p);
    StructuralReport {
        additive_at_p_powers: additive,
        pth_power_is_one: pth == dp.one(f.trunc()),
    }
}
