//! The null-sequence construction: elements 1 + sum e_j(x) D_{i_j} whose
//! symbol indices pairwise (and self-) annihilate, so additivity of the e_j
//! alone makes them multiplicative. For index families avoiding all powers
//! q^t these land outside the Carlitz image.

use crate::divided::{Divided, DividedRing};
use crate::lucas::LucasTable;
use crate::poly::{is_q_linear, Poly, PolyRing};
use crate::ring::Ring;
use crate::{Error, Result};

/// Strictly increasing symbol indices whose pairwise index sums kill the
/// binomial: C(i_j + i_t, i_t) = 0 mod p for all j, t, including j = t.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NullSeq {
    p: u64,
    indices: Vec<u64>,
}

/// Verdict of the null-sequence test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NullVerdict {
    Yes,
    No { pair: (u64, u64) },
}

/// Check the Lucas vanishing for every ordered pair with j <= t. Input must
/// be strictly increasing with all indices >= 1.
pub fn is_null_sequence(indices: &[u64], p: u64) -> Result<NullVerdict> {
    if indices.first().is_some_and(|&i| i == 0) {
        return Err(Error::Invalid("null sequence indices must be >= 1".into()));
    }
    if indices.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Invalid(
            "null sequence indices must be strictly increasing".into(),
        ));
    }
    let table = LucasTable::new(p);
    for (j, &ij) in indices.iter().enumerate() {
        for &it in &indices[j..] {
            if table.binom(ij + it, it) != 0 {
                return Ok(NullVerdict::No { pair: (ij, it) });
            }
        }
    }
    Ok(NullVerdict::Yes)
}

impl NullSeq {
    pub fn new(p: u64, indices: Vec<u64>) -> Result<NullSeq> {
        match is_null_sequence(&indices, p)? {
            NullVerdict::Yes => Ok(NullSeq { p, indices }),
            NullVerdict::No { pair } => Err(Error::Invalid(format!(
                "not a null sequence: C({}+{}, {}) is nonzero mod {p}",
                pair.0, pair.1, pair.1
            ))),
        }
    }

    /// The family {p^i - 1 : 1 <= i <= count}.
    pub fn p_power_family(p: u64, count: u32) -> NullSeq {
        let indices = (1..=count).map(|i| p.pow(i) - 1).collect();
        NullSeq::new(p, indices).expect("the p^i - 1 family is null")
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn indices(&self) -> &[u64] {
        &self.indices
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    /// Smallest window that contains every index.
    pub fn min_trunc(&self) -> usize {
        self.indices.last().map_or(1, |&i| i as usize + 1)
    }
}

fn validate_inputs<R: Ring>(ring: &PolyRing<R>, x: &NullSeq, e: &[Poly<R::Elem>]) -> Result<()> {
    let p = ring.characteristic();
    if x.p() != p {
        return Err(Error::Invalid(format!(
            "null sequence is for p = {}, ring has characteristic {p}",
            x.p()
        )));
    }
    if e.len() != x.len() {
        return Err(Error::Invalid(format!(
            "{} additive entries for {} indices",
            e.len(),
            x.len()
        )));
    }
    for (j, f) in e.iter().enumerate() {
        if !is_q_linear(ring, f, p) {
            return Err(Error::Invalid(format!("entry {j} is not additive")));
        }
    }
    Ok(())
}

/// The element 1 + sum_j e_j(x) D_{i_j} at the smallest containing window.
pub fn build_second<R: Ring>(
    ring: &PolyRing<R>,
    x: &NullSeq,
    e: &[Poly<R::Elem>],
) -> Result<Divided<Poly<R::Elem>>> {
    build_second_with_trunc(ring, x, e, x.min_trunc())
}

/// Same element at an explicit window (at least the smallest containing
/// one), for use under window-pinned actions.
pub fn build_second_with_trunc<R: Ring>(
    ring: &PolyRing<R>,
    x: &NullSeq,
    e: &[Poly<R::Elem>],
    trunc: usize,
) -> Result<Divided<Poly<R::Elem>>> {
    validate_inputs(ring, x, e)?;
    if trunc < x.min_trunc() {
        return Err(Error::IndexOutOfWindow {
            index: *x.indices().last().unwrap(),
            trunc,
        });
    }
    let dp = DividedRing::new(ring.clone());
    let mut entries = vec![(0u64, ring.one())];
    for (&i, f) in x.indices().iter().zip(e) {
        entries.push((i, f.clone()));
    }
    dp.from_entries(trunc, entries)
}

/// The product form prod_j (1 + e_j(x) D_{i_j}); equal to the sum form
/// exactly, since all cross symbols vanish.
pub fn product_form<R: Ring>(
    ring: &PolyRing<R>,
    x: &NullSeq,
    e: &[Poly<R::Elem>],
    trunc: usize,
) -> Result<Divided<Poly<R::Elem>>> {
    validate_inputs(ring, x, e)?;
    if trunc < x.min_trunc() {
        return Err(Error::IndexOutOfWindow {
            index: *x.indices().last().unwrap(),
            trunc,
        });
    }
    let dp = DividedRing::new(ring.clone());
    let mut acc = dp.one(trunc);
    for (&i, f) in x.indices().iter().zip(e) {
        let factor = dp.from_entries(trunc, [(0, ring.one()), (i, f.clone())])?;
        acc = dp.mul(&acc, &factor);
    }
    Ok(acc)
}

/// Enumerate maximal null sequences with all indices below `bound`, by
/// depth-first greedy extension (smallest candidate first) with
/// backtracking. A set is emitted when no index below the bound can join
/// it. Returns the sequences and whether the budget cut enumeration short.
pub fn enumerate_null_sequences(p: u64, bound: u64, budget: usize) -> (Vec<Vec<u64>>, bool) {
    let table = LucasTable::new(p);
    let self_ok: Vec<bool> = (0..bound)
        .map(|i| i >= 1 && table.binom(2 * i, i) == 0)
        .collect();
    let compatible = |current: &[u64], cand: u64| -> bool {
        self_ok[cand as usize] && current.iter().all(|&i| table.binom(i + cand, cand) == 0)
    };

    let mut out = Vec::new();
    let mut exhausted = false;
    let mut stack: Vec<u64> = Vec::new();

    fn dfs(
        current: &mut Vec<u64>,
        bound: u64,
        compatible: &dyn Fn(&[u64], u64) -> bool,
        out: &mut Vec<Vec<u64>>,
        budget: usize,
        exhausted: &mut bool,
    ) {
        if *exhausted {
            return;
        }
        let start = current.last().map_or(1, |&l| l + 1);
        let mut extendable = false;
        for cand in start..bound {
            if compatible(current, cand) {
                extendable = true;
                current.push(cand);
                dfs(current, bound, compatible, out, budget, exhausted);
                current.pop();
                if *exhausted {
                    return;
                }
            }
        }
        if !extendable {
            // No larger candidate fits; maximality still requires that no
            // smaller unused index fits either.
            let maximal = (1..bound)
                .filter(|c| !current.contains(c))
                .all(|c| !compatible(current, c));
            if maximal && !current.is_empty() {
                if out.len() >= budget {
                    *exhausted = true;
                    return;
                }
                out.push(current.clone());
            }
        }
    }

    dfs(
        &mut stack,
        bound,
        &compatible,
        &mut out,
        budget,
        &mut exhausted,
    );
    (out, exhausted)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::binomial::check_multiplicative;
    use crate::carlitz::is_in_carlitz_image;
    use crate::field::Fq;
    use crate::poly::Var;
    use crate::textio::parse_x_poly;

    fn ring(p: u64) -> PolyRing<Fq> {
        PolyRing::new(Fq::prime(p).unwrap(), Var::X)
    }

    #[test]
    fn null_sequence_examples() {
        assert_eq!(is_null_sequence(&[1, 3, 7], 2).unwrap(), NullVerdict::Yes);
        // {p^i - 1} family for p = 3.
        let fam = NullSeq::p_power_family(3, 4);
        assert_eq!(fam.indices(), &[2, 8, 26, 80]);
        // C(1+2, 2) = 3 = 1 mod 2, so {1, 2} fails at the pair (1, 2).
        assert_eq!(
            is_null_sequence(&[1, 2], 2).unwrap(),
            NullVerdict::No { pair: (1, 2) }
        );
    }

    #[test]
    fn rejects_malformed_index_lists() {
        assert!(is_null_sequence(&[3, 1], 2).is_err());
        assert!(is_null_sequence(&[1, 1], 2).is_err());
        assert!(is_null_sequence(&[0, 1], 2).is_err());
        assert!(NullSeq::new(2, vec![1, 2]).is_err());
    }

    #[test]
    fn sum_form_examples() {
        let r = ring(2);
        let x = NullSeq::new(2, vec![1, 3]).unwrap();

        // All-zero entries give the unit.
        let f = build_second(&r, &x, &[r.zero(), r.zero()]).unwrap();
        let dp = DividedRing::new(r.clone());
        assert_eq!(f, dp.one(4));

        // E = (x, x^2): 1 + x D_1 + x^2 D_3, multiplicative.
        let e = vec![r.gen(), parse_x_poly(&r, "x^2").unwrap()];
        let f = build_second(&r, &x, &e).unwrap();
        assert_eq!(dp.coeff(&f, 1), r.gen());
        assert_eq!(dp.coeff(&f, 3), parse_x_poly(&r, "x^2").unwrap());
        assert!(check_multiplicative(&r, &f).passed());
    }

    #[test]
    fn sum_form_equals_product_form() {
        let r = ring(3);
        let x = NullSeq::p_power_family(3, 3);
        let e = vec![
            r.gen(),
            parse_x_poly(&r, "x^3 + 2*x").unwrap(),
            parse_x_poly(&r, "2*x^9").unwrap(),
        ];
        let trunc = x.min_trunc();
        assert_eq!(
            build_second(&r, &x, &e).unwrap(),
            product_form(&r, &x, &e, trunc).unwrap()
        );
    }

    #[test]
    fn input_contract_violations() {
        let r = ring(2);
        let x = NullSeq::new(2, vec![1, 3]).unwrap();
        // Length mismatch.
        assert!(build_second(&r, &x, &[r.gen()]).is_err());
        // Non-additive entry.
        let x3 = parse_x_poly(&r, "x^3").unwrap();
        assert!(build_second(&r, &x, &[r.gen(), x3]).is_err());
        // Window too small for the largest index.
        assert!(build_second_with_trunc(&r, &x, &[r.gen(), r.gen()], 3).is_err());
    }

    #[test]
    fn escapes_the_carlitz_image() {
        let r = ring(2);
        let x = NullSeq::p_power_family(2, 4); // {1, 3, 7, 15}
        let e: Vec<_> = (0..4).map(|k| r.monomial(r.base().one(), 1 << k)).collect();
        let f = build_second(&r, &x, &e).unwrap();
        assert!(check_multiplicative(&r, &f).passed());
        for q in [2u64, 4] {
            assert!(!is_in_carlitz_image(&r, &f, q).unwrap().is_yes());
        }
    }

    #[test]
    fn additive_in_e_for_fixed_x() {
        let r = ring(2);
        let x = NullSeq::new(2, vec![1, 3, 7]).unwrap();
        let e1 = vec![r.gen(), parse_x_poly(&r, "x^2").unwrap(), r.gen()];
        let e2 = vec![parse_x_poly(&r, "x^4").unwrap(), r.gen(), r.gen()];
        let sum: Vec<_> = e1.iter().zip(&e2).map(|(a, b)| r.add(a, b)).collect();
        let dp = DividedRing::new(r.clone());
        let lhs = dp.mul(
            &build_second(&r, &x, &e1).unwrap(),
            &build_second(&r, &x, &e2).unwrap(),
        );
        assert_eq!(lhs, build_second(&r, &x, &sum).unwrap());
    }

    #[test]
    fn injective_in_e() {
        let r = ring(2);
        let x = NullSeq::new(2, vec![1, 3]).unwrap();
        let mut seen = Vec::new();
        for a in 0..2u64 {
            for b in 0..2u64 {
                let e = vec![
                    r.monomial(r.base().from_u64(a), 1),
                    r.monomial(r.base().from_u64(b), 2),
                ];
                let f = build_second(&r, &x, &e).unwrap();
                assert!(!seen.contains(&f), "collision at ({a}, {b})");
                seen.push(f);
            }
        }
    }

    #[test]
    fn random_null_inputs_are_multiplicative() {
        use rand::{Rng, SeedableRng};
        // 25 random (X, E) per prime, X drawn from verified maximal null
        // sequences, E random additive.
        for p in [2u64, 3] {
            let r = ring(p);
            let (pool, _) = enumerate_null_sequences(p, 28, 10_000);
            assert!(!pool.is_empty());
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(90 + p);
            for _ in 0..25 {
                let pick = &pool[rng.gen_range(0..pool.len())];
                // A random subset of a null sequence is still null.
                let indices: Vec<u64> =
                    pick.iter().copied().filter(|_| rng.gen_bool(0.7)).collect();
                if indices.is_empty() {
                    continue;
                }
                let x = NullSeq::new(p, indices).unwrap();
                let e: Vec<_> = (0..x.len())
                    .map(|_| {
                        let mut f = r.zero();
                        for n in 0..3u32 {
                            let c = r.base().from_u64(rng.gen_range(0..p));
                            f = r.add(&f, &r.monomial(c, p.pow(n) as usize));
                        }
                        f
                    })
                    .collect();
                let f = build_second(&r, &x, &e).unwrap();
                assert!(check_multiplicative(&r, &f).passed());
                assert_eq!(f, product_form(&r, &x, &e, x.min_trunc()).unwrap());
            }
        }
    }

    #[test]
    fn maximal_enumeration_is_sound() {
        let (seqs, exhausted) = enumerate_null_sequences(2, 16, 10_000);
        assert!(!exhausted);
        assert!(seqs
            .iter()
            .all(|s| { matches!(is_null_sequence(s, 2), Ok(NullVerdict::Yes)) }));
        // {1, 3, 7, 15} is null but not maximal below 16 (index 11 is
        // compatible with all of it); some maximal sequence extends it.
        let family = [1u64, 3, 7, 15];
        assert!(!seqs.contains(&family.to_vec()));
        assert!(seqs.iter().any(|s| family.iter().all(|i| s.contains(i))));
        // Maximality: nothing below the bound can join an emitted set.
        let table = crate::lucas::LucasTable::new(2);
        for s in &seqs {
            for c in 1..16u64 {
                if s.contains(&c) {
                    continue;
                }
                let joins =
                    table.binom(2 * c, c) == 0 && s.iter().all(|&i| table.binom(i + c, c) == 0);
                assert!(!joins, "{c} extends {s:?}");
            }
        }
        // Budget cap reports exhaustion.
        let (_, exhausted) = enumerate_null_sequences(2, 16, 1);
        assert!(exhausted);
    }
}
