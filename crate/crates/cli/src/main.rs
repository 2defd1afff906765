//! Command-line front end: sequence generation and checking, divided
//! element arithmetic, ring actions, Dirac elements, the Carlitz module's
//! umbral image, and the explorer.
//!
//! Exit codes: 0 — everything requested passed; 1 — a property check
//! failed (the report names the witness); 2 — usage or parse errors.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use rand::SeedableRng;

use carlitz_core::actions::DigitPerm;
use carlitz_core::binomial::{
    builtin, check_binomial, check_multiplicative, gen_function, structural_checks,
    BinomialVerdict, BuiltinSeq, MultVerdict, PolySeq,
};
use carlitz_core::carlitz::{
    dirac, dirac_factorization, pellarin_map, t_ring, theta_to_t, CarlitzCtx, LinearSeq, SkewRing,
};
use carlitz_core::digits::digits;
use carlitz_core::divided::DividedRing;
use carlitz_core::explorer::{
    classification_label, classify_sequence, enumerate, random_passing_seq, EnumerateConfig,
};
use carlitz_core::field::Fq;
use carlitz_core::poly::{PolyRing, Var};
use carlitz_core::ring::Ring;
use carlitz_core::textio::{
    a_ring, parse_modulus, parse_theta_poly, parse_x_poly, read_dp, read_seq, write_dp, write_seq,
    DpAction, DpValue,
};

#[derive(Parser)]
#[command(
    name = "carlitz",
    version,
    about = "Exact arithmetic for binomial-type polynomial sequences in characteristic p"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a sequence file for the binomial identity.
    Check {
        /// Sequence file to check.
        #[arg(long = "in", value_name = "FILE")]
        input: PathBuf,
        /// Also run the generating-function multiplicativity check.
        #[arg(long)]
        multiplicative: bool,
        /// Also check additivity at p-power indices and f^p = 1.
        #[arg(long)]
        structural: bool,
    },
    /// Generate a sequence file: monomials | pochhammer | digitsum |
    /// trivial-unit | carlitz | random.
    Gen {
        name: String,
        /// Field order q = p^lambda (uses the built-in modulus table).
        #[arg(long)]
        q: Option<u64>,
        /// Field characteristic (with --lambda/--modulus as needed).
        #[arg(long)]
        p: Option<u64>,
        #[arg(long)]
        lambda: Option<usize>,
        /// Modulus override, a monic u-polynomial such as "u^2+u+1".
        #[arg(long)]
        modulus: Option<String>,
        /// Truncation order.
        #[arg(long = "N")]
        n: usize,
        /// Semicolon-separated q-linear entries for `carlitz`, e.g. "x;x^2".
        #[arg(long)]
        entries: Option<String>,
        /// Degree bound for `random`.
        #[arg(long)]
        d: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
    /// Multiply two divided element files.
    Mul {
        a: PathBuf,
        b: PathBuf,
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
    /// Invert a divided element file (constant coefficient must be 1).
    Inv {
        a: PathBuf,
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
    /// Apply an action (sigma | pi1 | pi2 | pi3) to a divided element file.
    Act {
        kind: String,
        #[arg(long = "in", value_name = "FILE")]
        input: PathBuf,
        /// Digit permutation as "0>1,1>0" (positions not named are fixed).
        #[arg(long)]
        perm: Option<String>,
        /// Digit window size; the element's truncation must be q^K.
        #[arg(long = "K")]
        window: Option<usize>,
        /// Scalar for pi3, in the element's coefficient ring.
        #[arg(long)]
        r: Option<String>,
        /// Re-run the multiplicativity (and image, with --image-q) checks
        /// before and after.
        #[arg(long)]
        report: bool,
        #[arg(long = "image-q")]
        image_q: Option<u64>,
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
    /// Emit the Dirac element at alpha as a divided element over A.
    Dirac {
        #[arg(long)]
        q: u64,
        /// Point alpha in A = F_q[th], e.g. "th^2+th".
        #[arg(long)]
        alpha: String,
        #[arg(long = "N")]
        n: usize,
        /// Also emit the single-digit factors and verify their product.
        #[arg(long)]
        factor: bool,
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
    /// Print the Carlitz action C_a in A[tau] and its image in A[t].
    Pellarin {
        #[arg(long)]
        q: u64,
        /// Element a of A = F_q[th].
        #[arg(long)]
        a: String,
    },
    /// Enumerate truncated binomial-type sequences over F_p and classify
    /// them against the constructions.
    Explore {
        #[arg(long)]
        p: u64,
        #[arg(long = "N")]
        n: usize,
        /// Degree bound for every entry.
        #[arg(long)]
        d: usize,
        #[arg(long, default_value_t = 10_000)]
        budget: usize,
        /// Directory to write sequence files and the summary into.
        #[arg(long, value_name = "DIR")]
        emit: Option<PathBuf>,
        /// Summary format: text | csv.
        #[arg(long, default_value = "text")]
        format: String,
        /// Worker threads; emission order is guaranteed only with 1.
        #[arg(long, default_value_t = 1)]
        workers: usize,
    },
}

fn main() -> ExitCode {
    // Die quietly when a downstream pipe closes instead of panicking in
    // println.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(2);
        }
    };
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command) -> Result<u8, Box<dyn std::error::Error>> {
    match command {
        Command::Check {
            input,
            multiplicative,
            structural,
        } => cmd_check(&input, multiplicative, structural),
        Command::Gen {
            name,
            q,
            p,
            lambda,
            modulus,
            n,
            entries,
            d,
            seed,
            out,
        } => cmd_gen(&name, q, p, lambda, modulus, n, entries, d, seed, out),
        Command::Mul { a, b, out } => {
            let fa = read_dp(&fs::read_to_string(a)?)?;
            let fb = read_dp(&fs::read_to_string(b)?)?;
            emit(out.as_deref(), &write_dp(&fa.mul(&fb)?))?;
            Ok(0)
        }
        Command::Inv { a, out } => {
            let fa = read_dp(&fs::read_to_string(a)?)?;
            emit(out.as_deref(), &write_dp(&fa.inverse()?))?;
            Ok(0)
        }
        Command::Act {
            kind,
            input,
            perm,
            window,
            r,
            report,
            image_q,
            out,
        } => cmd_act(&kind, &input, perm, window, r, report, image_q, out),
        Command::Dirac {
            q,
            alpha,
            n,
            factor,
            out,
        } => cmd_dirac(q, &alpha, n, factor, out),
        Command::Pellarin { q, a } => cmd_pellarin(q, &a),
        Command::Explore {
            p,
            n,
            d,
            budget,
            emit,
            format,
            workers,
        } => cmd_explore(p, n, d, budget, emit, &format, workers),
    }
}

fn emit(out: Option<&Path>, text: &str) -> std::io::Result<()> {
    match out {
        Some(path) => fs::write(path, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn field_from_flags(
    q: Option<u64>,
    p: Option<u64>,
    lambda: Option<usize>,
    modulus: Option<String>,
) -> Result<Fq, Box<dyn std::error::Error>> {
    match (q, p) {
        (Some(q), None) => {
            if modulus.is_some() || lambda.is_some() {
                return Err(
                    "--q already fixes p^lambda and the default modulus; use --p for overrides"
                        .into(),
                );
            }
            Ok(Fq::from_order(q)?)
        }
        (None, Some(p)) => match (&modulus, lambda) {
            (Some(m), _) => Ok(Fq::with_modulus(p, parse_modulus(p, m)?)?),
            (None, Some(l)) => Ok(Fq::extension(p, l)?),
            (None, None) => Ok(Fq::prime(p)?),
        },
        _ => Err("specify exactly one of --q or --p".into()),
    }
}

fn cmd_check(
    input: &Path,
    multiplicative: bool,
    structural: bool,
) -> Result<u8, Box<dyn std::error::Error>> {
    let (ring, entries) = read_seq(&fs::read_to_string(input)?)?;
    let seq = PolySeq::new(ring.clone(), entries);
    let mut failed = false;

    match check_binomial(&seq) {
        BinomialVerdict::Pass { trunc } => println!("binomial: pass (N={trunc})"),
        BinomialVerdict::TrivialAllZero => {
            println!("binomial: trivial (all-zero sequence)");
            return Ok(0);
        }
        BinomialVerdict::Fail { n, monomial } => {
            println!(
                "binomial: FAIL at n={n}, witness monomial x^{} y^{}",
                monomial.0, monomial.1
            );
            failed = true;
        }
    }

    if multiplicative {
        match check_multiplicative(&ring, &gen_function(&seq)) {
            MultVerdict::Pass { trunc } => println!("multiplicative: pass (window {trunc})"),
            MultVerdict::Fail { index } => {
                println!("multiplicative: FAIL at index {index}");
                failed = true;
            }
        }
    }

    if structural && !failed {
        let report = structural_checks(&seq);
        for (idx, ok) in &report.additive_at_p_powers {
            println!("additive p_{idx}: {}", if *ok { "pass" } else { "FAIL" });
        }
        println!(
            "p-th power of generating function is 1: {}",
            if report.pth_power_is_one {
                "pass"
            } else {
                "FAIL"
            }
        );
        failed = failed || !report.passed();
    }

    Ok(if failed { 1 } else { 0 })
}

#[allow(clippy::too_many_arguments)]
fn cmd_gen(
    name: &str,
    q: Option<u64>,
    p: Option<u64>,
    lambda: Option<usize>,
    modulus: Option<String>,
    n: usize,
    entries: Option<String>,
    d: Option<usize>,
    seed: u64,
    out: Option<PathBuf>,
) -> Result<u8, Box<dyn std::error::Error>> {
    let fq = field_from_flags(q, p, lambda, modulus)?;
    let ring = PolyRing::new(fq.clone(), Var::X);
    let seq = match name {
        "carlitz" => {
            let src = entries.ok_or("carlitz needs --entries \"e0;e1;...\"")?;
            let polys = src
                .split(';')
                .map(|s| parse_x_poly(&ring, s))
                .collect::<Result<Vec<_>, _>>()?;
            let e = LinearSeq::new(ring.clone(), polys)?;
            carlitz_core::carlitz::carlitz_sequence(&e, n)
        }
        "random" => {
            let d = d.ok_or("random needs a degree bound --d")?;
            if fq.lambda() != 1 {
                return Err("random generation runs over prime fields".into());
            }
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            random_passing_seq(&ring, n, d, &mut rng)
                .ok_or("no passing sequence found within the search budget")?
        }
        other => {
            let which = BuiltinSeq::parse(other, Some(fq.q()))?;
            builtin(&ring, which, n)
        }
    };
    emit(out.as_deref(), &write_seq(&ring, seq.entries()))?;
    Ok(0)
}

fn parse_perm(
    q: u64,
    spec: &str,
    window: Option<usize>,
) -> Result<DigitPerm, Box<dyn std::error::Error>> {
    let mut pairs = Vec::new();
    let mut max_pos = 0usize;
    for part in spec.split(',') {
        let (from, to) = part
            .trim()
            .split_once('>')
            .ok_or_else(|| format!("bad permutation entry '{part}', expected i>j"))?;
        let from: usize = from.trim().parse()?;
        let to: usize = to.trim().parse()?;
        max_pos = max_pos.max(from).max(to);
        pairs.push((from, to));
    }
    let k = window.unwrap_or(max_pos + 1);
    let mut perm: Vec<usize> = (0..k).collect();
    for (from, to) in pairs {
        if from >= k || to >= k {
            return Err(format!("permutation entry outside window K={k}").into());
        }
        perm[from] = to;
    }
    Ok(DigitPerm::new(q, perm)?)
}

#[allow(clippy::too_many_arguments)]
fn cmd_act(
    kind: &str,
    input: &Path,
    perm: Option<String>,
    window: Option<usize>,
    r: Option<String>,
    report: bool,
    image_q: Option<u64>,
    out: Option<PathBuf>,
) -> Result<u8, Box<dyn std::error::Error>> {
    let value = read_dp(&fs::read_to_string(input)?)?;
    let action = match kind {
        "sigma" => {
            let spec = perm.ok_or("sigma needs --perm \"i>j,...\"")?;
            DpAction::Sigma(parse_perm(value.field().q(), &spec, window)?)
        }
        "pi1" => DpAction::Pi1,
        "pi2" => DpAction::Pi2,
        "pi3" => DpAction::Pi3(r.ok_or("pi3 needs --r <element>")?),
        other => return Err(format!("unknown action '{other}'").into()),
    };
    let image = value.apply(&action)?;
    let mut failed = false;
    if report {
        let before = value.check_multiplicative()?;
        let after = image.check_multiplicative()?;
        println!(
            "multiplicative before: {}",
            if before.passed() { "pass" } else { "FAIL" }
        );
        println!(
            "multiplicative after: {}",
            if after.passed() { "pass" } else { "FAIL" }
        );
        if before.passed() && !after.passed() {
            failed = true;
        }
        if let Some(q) = image_q {
            let in_before = value.in_carlitz_image(q)?;
            let in_after = image.in_carlitz_image(q)?;
            println!("in Carlitz image (q={q}) before: {in_before}");
            println!("in Carlitz image (q={q}) after: {in_after}");
            if in_before != in_after {
                failed = true;
            }
        }
    }
    emit(out.as_deref(), &write_dp(&image))?;
    Ok(if failed { 1 } else { 0 })
}

fn cmd_dirac(
    q: u64,
    alpha: &str,
    n: usize,
    factor: bool,
    out: Option<PathBuf>,
) -> Result<u8, Box<dyn std::error::Error>> {
    let fq = Fq::from_order(q)?;
    let aring = a_ring(fq.clone());
    let point = parse_theta_poly(&aring, alpha)?;
    let t_max = if n > 1 {
        digits(n as u64 - 1, q).len() - 1
    } else {
        0
    };
    let ctx = CarlitzCtx::new(fq, t_max)?;
    let element = dirac(&ctx, &point, n)?;
    emit(
        out.as_deref(),
        &write_dp(&DpValue::A(aring.clone(), element.clone())),
    )?;
    if factor {
        let factors = dirac_factorization(&ctx, &point, n)?;
        let dp = DividedRing::new(aring.clone());
        let mut product = dp.one(n);
        for (t, f) in factors.iter().enumerate() {
            println!("factor t={t}:");
            print!("{}", write_dp(&DpValue::A(aring.clone(), f.clone())));
            product = dp.mul(&product, f);
        }
        if product == element {
            println!("product of factors = dirac(alpha): pass");
        } else {
            println!("product of factors = dirac(alpha): FAIL");
            return Ok(1);
        }
    }
    Ok(0)
}

fn cmd_pellarin(q: u64, a: &str) -> Result<u8, Box<dyn std::error::Error>> {
    let fq = Fq::from_order(q)?;
    let aring = a_ring(fq.clone());
    let point = parse_theta_poly(&aring, a)?;
    // The twist exponents grow as q^deg; keep the computation desk-scale.
    let deg = point.degree().unwrap_or(0);
    if q.checked_pow(deg as u32).is_none_or(|n| n > 1 << 24) {
        return Err(format!("degree {deg} too large for q = {q}").into());
    }
    let sk = SkewRing::new(aring.clone());
    let action = sk.carlitz_action(&point);
    println!("C_a = {}", sk.format(&action));
    let tring = t_ring(fq);
    let image = pellarin_map(&sk, &action, &tring);
    println!("image in A[t]: {}", tring.format_elem(&image, false));
    if image == theta_to_t(&aring, &tring, &point) {
        println!("image equals a(th -> t): pass");
        Ok(0)
    } else {
        println!("image equals a(th -> t): FAIL");
        Ok(1)
    }
}

fn cmd_explore(
    p: u64,
    n: usize,
    d: usize,
    budget: usize,
    emit_dir: Option<PathBuf>,
    format: &str,
    workers: usize,
) -> Result<u8, Box<dyn std::error::Error>> {
    let cfg = EnumerateConfig {
        p,
        n,
        degree_bound: d,
        budget,
        parallel: workers > 1 && cfg!(feature = "parallel"),
    };
    if workers > 1 && !cfg!(feature = "parallel") {
        eprintln!("note: built without the parallel feature; running single-threaded");
    }
    let outcome = run_enumerate(&cfg, workers)?;

    let mut summary = String::new();
    let mut counts: Vec<(&'static str, usize)> = Vec::new();
    if format == "csv" {
        summary.push_str("id,classification,kernel_dims\n");
    }
    for (id, item) in outcome.sequences.iter().enumerate() {
        let label = classification_label(&classify_sequence(item)?);
        if let Some(slot) = counts.iter_mut().find(|(l, _)| *l == label) {
            slot.1 += 1;
        } else {
            counts.push((label, 1));
        }
        let dims = item
            .kernel_dims
            .iter()
            .map(usize::to_string)
            .collect::<Vec<_>>()
            .join("|");
        match format {
            "csv" => summary.push_str(&format!("{id},{label},{dims}\n")),
            _ => summary.push_str(&format!("seq {id}: {label} kernel_dims={dims}\n")),
        }
        if let Some(dir) = &emit_dir {
            fs::create_dir_all(dir)?;
            let path = dir.join(format!("seq_{id:04}.txt"));
            fs::write(path, write_seq(item.seq.ring(), item.seq.entries()))?;
        }
    }

    match &emit_dir {
        Some(dir) => {
            fs::create_dir_all(dir)?;
            let name = if format == "csv" {
                "summary.csv"
            } else {
                "summary.txt"
            };
            fs::write(dir.join(name), &summary)?;
        }
        None => print!("{summary}"),
    }

    println!(
        "enumerated {} sequence(s) at p={p} N={n} d={d}{}",
        outcome.sequences.len(),
        if outcome.budget_exhausted {
            " (budget exhausted)"
        } else {
            ""
        }
    );
    for (label, count) in counts {
        println!("  {label}: {count}");
    }
    Ok(0)
}

#[cfg(feature = "parallel")]
fn run_enumerate(
    cfg: &EnumerateConfig,
    workers: usize,
) -> Result<carlitz_core::explorer::EnumerateOutcome, Box<dyn std::error::Error>> {
    if cfg.parallel {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build()?;
        Ok(pool.install(|| enumerate(cfg))?)
    } else {
        Ok(enumerate(cfg)?)
    }
}

#[cfg(not(feature = "parallel"))]
fn run_enumerate(
    cfg: &EnumerateConfig,
    _workers: usize,
) -> Result<carlitz_core::explorer::EnumerateOutcome, Box<dyn std::error::Error>> {
    Ok(enumerate(cfg)?)
}
