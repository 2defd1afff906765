//! Incremental enumeration of truncated binomial-type sequences over a
//! prime field, and classification against the two constructions.
//!
//! Extending a validated prefix p_0 .. p_{n-1} by one entry is an affine
//! linear problem: matching every bivariate monomial in
//! p_n(x+y) - p_n(x) p_0(y) - p_0(x) p_n(y) = sum_{0<i<n} C(n,i) p_i(x) p_{n-i}(y)
//! gives a system in the unknown coefficients of p_n. The solution set is a
//! particular solution plus the kernel, which always contains the additive
//! polynomials. Enumeration walks the solution tree depth first; the
//! classifier sorts a multiplicative element into the Carlitz image, the
//! null-sequence shape, a heuristic quotient of the two, or an honest
//! "unresolved".

use std::sync::atomic::{AtomicUsize, Ordering};

use rand::Rng;

use crate::binomial::{check_binomial, gen_function, PolySeq};
use crate::bipoly::{substitute_sum, BiPoly, BiPolyRing};
use crate::carlitz::{carlitz_gen, is_in_carlitz_image, ImageVerdict, LinearSeq};
use crate::divided::{Divided, DividedRing};
use crate::field::{Fq, FqElem};
use crate::linalg::{solve_affine_system, SolveOutcome};
use crate::lucas::LucasTable;
use crate::nullseq::{is_null_sequence, NullVerdict};
use crate::par;
use crate::poly::{is_q_linear, Poly, PolyRing};
use crate::ring::Ring;
use crate::{Error, Result};

/// A validated prefix of a candidate sequence over a prime field, with the
/// degree bound used for extensions.
#[derive(Clone, Debug)]
pub struct PrefixState {
    ring: PolyRing<Fq>,
    degree_bound: usize,
    prefix: Vec<Poly<FqElem>>,
}

impl PrefixState {
    /// Requires a nonempty prefix over a prime field that passes the
    /// binomial check at its own length (the all-zero prefix counts).
    pub fn new(
        ring: PolyRing<Fq>,
        degree_bound: usize,
        prefix: Vec<Poly<FqElem>>,
    ) -> Result<PrefixState> {
        if ring.base().lambda() != 1 {
            return Err(Error::Invalid(
                "enumeration runs over prime fields only".into(),
            ));
        }
        if degree_bound == 0 {
            return Err(Error::Invalid("degree bound must be at least 1".into()));
        }
        if prefix.is_empty() {
            return Err(Error::Invalid("prefix must contain p_0".into()));
        }
        let seq = PolySeq::new(ring.clone(), prefix.clone());
        if matches!(
            check_binomial(&seq),
            crate::binomial::BinomialVerdict::Fail { .. }
        ) {
            return Err(Error::Invalid("prefix is not binomial-type".into()));
        }
        Ok(PrefixState {
            ring,
            degree_bound,
            prefix,
        })
    }

    /// The standard starting point p_0 = 1.
    pub fn root(ring: PolyRing<Fq>, degree_bound: usize) -> Result<PrefixState> {
        let one = ring.one();
        PrefixState::new(ring, degree_bound, vec![one])
    }

    pub fn ring(&self) -> &PolyRing<Fq> {
        &self.ring
    }

    pub fn prefix(&self) -> &[Poly<FqElem>] {
        &self.prefix
    }

    pub fn degree_bound(&self) -> usize {
        self.degree_bound
    }
}

/// Solution set for the next entry.
#[derive(Clone, Debug, PartialEq)]
pub enum ExtendOutcome {
    Extensions {
        particular: Poly<FqElem>,
        /// Kernel of the extension map; always contains the additive
        /// polynomials of degree within the bound.
        kernel: Vec<Poly<FqElem>>,
    },
    Inconsistent,
}

/// The linear operator column for x^k: x^k expanded at x+y minus its two
/// boundary products with p_0.
fn op_column(
    ring: &PolyRing<Fq>,
    bi: &BiPolyRing<Fq>,
    p0: &Poly<FqElem>,
    k: usize,
) -> BiPoly<FqElem> {
    let xk = ring.monomial(ring.base().one(), k);
    let expanded = substitute_sum(ring, &xk, bi);
    let x_part = bi.cross(&xk, p0);
    let y_part = bi.cross(p0, &xk);
    bi.sub(&bi.sub(&expanded, &x_part), &y_part)
}

fn inner_rhs(
    ring: &PolyRing<Fq>,
    bi: &BiPolyRing<Fq>,
    prefix: &[Poly<FqElem>],
    n: usize,
) -> BiPoly<FqElem> {
    let table = LucasTable::new(ring.characteristic());
    let mut rhs = bi.zero();
    for i in 1..n {
        let c = table.binom(n as u64, i as u64);
        if c == 0 {
            continue;
        }
        let mut term = bi.cross(&prefix[i], &prefix[n - i]);
        if c != 1 {
            term = bi.mul(&bi.from_u64(c), &term);
        }
        rhs = bi.add(&rhs, &term);
    }
    rhs
}

/// Build and solve the affine system for the next entry of the prefix.
pub fn extend_step(state: &PrefixState) -> ExtendOutcome {
    let ring = &state.ring;
    let field = ring.base().clone();
    let bi = BiPolyRing::new(field.clone());
    let d = state.degree_bound;
    let n = state.prefix.len();
    let p0 = &state.prefix[0];

    let columns: Vec<BiPoly<FqElem>> = (0..=d).map(|k| op_column(ring, &bi, p0, k)).collect();
    let rhs = inner_rhs(ring, &bi, &state.prefix, n);

    // Every monomial seen anywhere becomes one equation row.
    let mut monomials: Vec<(u32, u32)> = columns
        .iter()
        .flat_map(|c| c.terms().keys().copied())
        .chain(rhs.terms().keys().copied())
        .collect();
    monomials.sort_unstable();
    monomials.dedup();

    let rows: Vec<Vec<FqElem>> = monomials
        .iter()
        .map(|&m| columns.iter().map(|c| bi.coeff(c, m)).collect())
        .collect();
    let rhs_vec: Vec<FqElem> = monomials.iter().map(|&m| bi.coeff(&rhs, m)).collect();

    match solve_affine_system(&field, &rows, &rhs_vec).expect("well-shaped system") {
        SolveOutcome::Inconsistent => ExtendOutcome::Inconsistent,
        SolveOutcome::Solution { particular, kernel } => ExtendOutcome::Extensions {
            particular: ring.from_coeffs(particular),
            kernel: kernel.into_iter().map(|v| ring.from_coeffs(v)).collect(),
        },
    }
}

/// One emitted sequence with the kernel dimension met at each extension
/// step (steps n = 1 .. N-1).
#[derive(Clone, Debug, PartialEq)]
pub struct EnumeratedSeq {
    pub seq: PolySeq<Fq>,
    pub kernel_dims: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct EnumerateConfig {
    pub p: u64,
    /// Truncation of the emitted sequences.
    pub n: usize,
    pub degree_bound: usize,
    /// Cap on the number of emitted sequences.
    pub budget: usize,
    /// Allow the search tree to fan out across threads. The emitted set is
    /// deterministic whenever the budget does not bind; under a binding
    /// budget only the single-threaded walk guarantees which sequences are
    /// kept.
    pub parallel: bool,
}

#[derive(Clone, Debug)]
pub struct EnumerateOutcome {
    pub sequences: Vec<EnumeratedSeq>,
    pub budget_exhausted: bool,
}

/// Depth-first enumeration of every nontrivial binomial-type sequence of
/// length N with entries of degree <= d. At each step the particular
/// solution is combined with each kernel combination, in lexicographic
/// coefficient order.
pub fn enumerate(cfg: &EnumerateConfig) -> Result<EnumerateOutcome> {
    let ring = PolyRing::new(Fq::prime(cfg.p)?, crate::poly::Var::X);
    let root = PrefixState::root(ring, cfg.degree_bound)?;
    if cfg.n < 1 {
        return Err(Error::Invalid("truncation must be at least 1".into()));
    }
    let emitted = AtomicUsize::new(0);
    let sequences = walk(&root, cfg, &emitted);
    Ok(EnumerateOutcome {
        budget_exhausted: emitted.load(Ordering::Relaxed) >= cfg.budget,
        sequences,
    })
}

fn kernel_combination(
    ring: &PolyRing<Fq>,
    particular: &Poly<FqElem>,
    kernel: &[Poly<FqElem>],
    mut code: u64,
) -> Poly<FqElem> {
    let p = ring.characteristic();
    let mut out = particular.clone();
    for basis in kernel {
        let c = code % p;
        code /= p;
        if c != 0 {
            out = ring.add(&out, &ring.scale(&ring.base().from_u64(c), basis));
        }
    }
    out
}

fn walk(state: &PrefixState, cfg: &EnumerateConfig, emitted: &AtomicUsize) -> Vec<EnumeratedSeq> {
    if state.prefix.len() == cfg.n {
        if emitted.fetch_add(1, Ordering::Relaxed) >= cfg.budget {
            return vec![];
        }
        let seq = PolySeq::new(state.ring.clone(), state.prefix.clone());
        debug_assert!(check_binomial(&seq).passed());
        return vec![EnumeratedSeq {
            seq,
            kernel_dims: vec![],
        }];
    }
    if emitted.load(Ordering::Relaxed) >= cfg.budget {
        return vec![];
    }
    let (particular, kernel) = match extend_step(state) {
        ExtendOutcome::Inconsistent => return vec![],
        ExtendOutcome::Extensions { particular, kernel } => (particular, kernel),
    };
    let dim = kernel.len();
    let combos = cfg.p.pow(dim as u32);
    let children: Vec<PrefixState> = (0..combos)
        .map(|code| {
            let next = kernel_combination(&state.ring, &particular, &kernel, code);
            let mut prefix = state.prefix.clone();
            prefix.push(next);
            PrefixState {
                ring: state.ring.clone(),
                degree_bound: state.degree_bound,
                prefix,
            }
        })
        .collect();

    let results = if cfg.parallel {
        par::flat_branches(children, |child| walk(&child, cfg, emitted))
    } else {
        children
            .into_iter()
            .flat_map(|child| walk(&child, cfg, emitted))
            .collect()
    };
    results
        .into_iter()
        .map(|mut item| {
            item.kernel_dims.insert(0, dim);
            item
        })
        .collect()
}

/// Build one random passing sequence by a randomized depth-first walk of
/// the solution tree: kernel combinations are tried in shuffled order with
/// backtracking. Each walk gets a modest node budget and the whole search
/// restarts with a fresh shuffle on exhaustion, which escapes large
/// consistent subtrees whose completions all dead-end late.
pub fn random_passing_seq(
    ring: &PolyRing<Fq>,
    n: usize,
    degree_bound: usize,
    rng: &mut impl Rng,
) -> Option<PolySeq<Fq>> {
    for _ in 0..40 {
        let mut nodes_left = 4_000usize;
        if let Some(prefix) = random_walk(
            ring,
            degree_bound,
            vec![ring.one()],
            n,
            rng,
            &mut nodes_left,
        ) {
            return Some(PolySeq::new(ring.clone(), prefix));
        }
    }
    None
}

fn random_walk(
    ring: &PolyRing<Fq>,
    degree_bound: usize,
    prefix: Vec<Poly<FqElem>>,
    n: usize,
    rng: &mut impl Rng,
    nodes_left: &mut usize,
) -> Option<Vec<Poly<FqElem>>> {
    if prefix.len() == n {
        return Some(prefix);
    }
    if *nodes_left == 0 {
        return None;
    }
    *nodes_left -= 1;
    let state = PrefixState {
        ring: ring.clone(),
        degree_bound,
        prefix,
    };
    let (particular, kernel) = match extend_step(&state) {
        ExtendOutcome::Inconsistent => return None,
        ExtendOutcome::Extensions { particular, kernel } => (particular, kernel),
    };
    let p = ring.characteristic();
    let mut codes: Vec<u64> = (0..p.pow(kernel.len() as u32)).collect();
    for i in (1..codes.len()).rev() {
        codes.swap(i, rng.gen_range(0..=i));
    }
    for code in codes {
        let next = kernel_combination(ring, &particular, &kernel, code);
        let mut child = state.prefix.clone();
        child.push(next);
        if let Some(done) = random_walk(ring, degree_bound, child, n, rng, nodes_left) {
            return Some(done);
        }
    }
    None
}

/// Outcome of sorting a multiplicative element against the constructions.
/// `Unresolved` is an honest answer: the window offered no match.
#[derive(Clone, Debug, PartialEq)]
pub enum Classification {
    CarlitzImage,
    SecondForm,
    /// Dividing out the Carlitz element reconstructed from the D_{q^t}
    /// coefficients left a null-sequence-shaped quotient. Heuristic: group
    /// membership for the generated subgroup is not decided here.
    CarlitzQuotientHeuristic,
    Unresolved {
        residual: Divided<Poly<FqElem>>,
    },
}

fn second_form_shape(ring: &PolyRing<Fq>, f: &Divided<Poly<FqElem>>) -> bool {
    let dp = DividedRing::new(ring.clone());
    if !ring.is_one(&dp.coeff(f, 0)) {
        return false;
    }
    let p = ring.characteristic();
    let indices: Vec<u64> = f.support().into_iter().filter(|&i| i > 0).collect();
    if indices.is_empty() {
        return true;
    }
    match is_null_sequence(&indices, p) {
        Ok(NullVerdict::Yes) => indices
            .iter()
            .all(|&i| is_q_linear(ring, &dp.coeff(f, i), p)),
        _ => false,
    }
}

/// Classify a multiplicative generating function against the two
/// constructions for the given q.
pub fn classify(ring: &PolyRing<Fq>, f: &Divided<Poly<FqElem>>, q: u64) -> Result<Classification> {
    use crate::binomial::check_multiplicative;
    if !check_multiplicative(ring, f).passed() {
        return Err(Error::Invalid(
            "classify expects a multiplicative element".into(),
        ));
    }
    if is_in_carlitz_image(ring, f, q)?.is_yes() {
        return Ok(Classification::CarlitzImage);
    }
    if second_form_shape(ring, f) {
        return Ok(Classification::SecondForm);
    }
    // Divide out the Carlitz element suggested by the D_{q^t} coefficients.
    let dp = DividedRing::new(ring.clone());
    let mut candidates = Vec::new();
    let mut qt = 1u64;
    while qt < f.trunc() as u64 {
        candidates.push(dp.coeff(f, qt));
        qt = match qt.checked_mul(q) {
            Some(v) => v,
            None => break,
        };
    }
    let Ok(linear) = LinearSeq::new(ring.clone(), candidates) else {
        return Ok(Classification::Unresolved {
            residual: f.clone(),
        });
    };
    let carlitz_part = carlitz_gen(&linear, f.trunc());
    let residual = dp.mul(f, &dp.inverse(&carlitz_part)?);
    if second_form_shape(ring, &residual) {
        Ok(Classification::CarlitzQuotientHeuristic)
    } else {
        Ok(Classification::Unresolved { residual })
    }
}

/// Name used in the explorer's CSV summary.
pub fn classification_label(c: &Classification) -> &'static str {
    match c {
        Classification::CarlitzImage => "carlitz_image",
        Classification::SecondForm => "second_form",
        Classification::CarlitzQuotientHeuristic => "carlitz_quotient_heuristic",
        Classification::Unresolved { .. } => "unresolved",
    }
}

/// Classify an enumerated sequence, reading q = p.
pub fn classify_sequence(item: &EnumeratedSeq) -> Result<Classification> {
    let ring = item.seq.ring().clone();
    let q = ring.base().q();
    let f = gen_function(&item.seq);
    classify(&ring, &f, q)
}

/// Recover membership data alongside classification for reporting.
pub fn image_verdict_of(item: &EnumeratedSeq) -> Result<ImageVerdict<FqElem>> {
    let ring = item.seq.ring().clone();
    let q = ring.base().q();
    is_in_carlitz_image(&ring, &gen_function(&item.seq), q)
}
