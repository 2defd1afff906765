//! Canonical polynomial text and the flat file formats.
//!
//! Grammar: terms `c*x^e` joined by `+`, coefficients written as integers
//! mod p, as parenthesized u-polynomials for extension fields, or as
//! th-polynomials (possibly fractions) for A-coefficients. Canonical output
//! orders terms by decreasing exponent, e.g. `x^3 + (th^2+th)*x`. Top-level
//! joins use ` + `; nested (parenthesized) polynomials join with a bare `+`.
//! Parsing additionally accepts `-` and arbitrary whitespace; printing never
//! emits either, so print-parse-print is bit-stable.

use std::collections::BTreeMap;

use crate::divided::{Divided, DividedRing};
use crate::field::{Fq, FqElem};
use crate::frac::{Frac, FracField};
use crate::poly::{Poly, PolyRing, Var};
use crate::ring::{Field, Ring};
use crate::{Error, Result};

// ---------------------------------------------------------------------------
// Canonical printers
// ---------------------------------------------------------------------------

fn join_terms(terms: Vec<String>, nested: bool) -> String {
    if terms.is_empty() {
        return "0".into();
    }
    terms.join(if nested { "+" } else { " + " })
}

/// Whether a coefficient string needs parentheses when a `*x^e` follows.
fn needs_parens(s: &str) -> bool {
    let mut depth = 0usize;
    for ch in s.chars() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            '+' | '/' if depth == 0 => return true,
            _ => {}
        }
    }
    false
}

fn wrap(s: String) -> String {
    if needs_parens(&s) {
        format!("({s})")
    } else {
        s
    }
}

/// F_q element as a u-polynomial over F_p (a bare residue when lambda = 1).
pub fn format_u_poly(rep: &[u64], nested: bool) -> String {
    if rep.len() == 1 {
        return rep[0].to_string();
    }
    let mut terms = Vec::new();
    for (e, &c) in rep.iter().enumerate().rev() {
        if c == 0 {
            continue;
        }
        let var = match e {
            0 => None,
            1 => Some("u".to_string()),
            _ => Some(format!("u^{e}")),
        };
        terms.push(match (c, var) {
            (c, None) => c.to_string(),
            (1, Some(v)) => v,
            (c, Some(v)) => format!("{c}*{v}"),
        });
    }
    join_terms(terms, nested)
}

/// Canonical polynomial text, decreasing exponents.
pub fn format_poly<R: Ring>(ring: &PolyRing<R>, f: &Poly<R::Elem>, nested: bool) -> String {
    let base = ring.base();
    let sym = ring.var().symbol();
    let mut terms = Vec::new();
    for (e, c) in f.coeffs().iter().enumerate().rev() {
        if base.is_zero(c) {
            continue;
        }
        let var = match e {
            0 => None,
            1 => Some(sym.to_string()),
            _ => Some(format!("{sym}^{e}")),
        };
        let cs = base.format_elem(c, true);
        terms.push(match var {
            None => cs,
            Some(v) if base.is_one(c) => v,
            Some(v) => format!("{}*{v}", wrap(cs)),
        });
    }
    join_terms(terms, nested)
}

/// Reduced fraction text: `num`, or `num/den` with compound sides wrapped.
pub fn format_frac<F: Field>(field: &FracField<F>, a: &Frac<F::Elem>, nested: bool) -> String {
    let pr = field.poly_ring();
    if pr.is_one(&a.den) {
        return format_poly(pr, &a.num, nested);
    }
    let num = wrap(format_poly(pr, &a.num, true));
    let den = wrap(format_poly(pr, &a.den, true));
    format!("{num}/{den}")
}

// ---------------------------------------------------------------------------
// Expression parsing
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(u64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn lex(src: &str) -> Result<Vec<Tok>> {
    let mut toks = Vec::new();
    let mut chars = src.chars().peekable();
    while let Some(&ch) = chars.peek() {
        match ch {
            c if c.is_whitespace() => {
                chars.next();
            }
            '0'..='9' => {
                let mut n: u64 = 0;
                while let Some(&d) = chars.peek() {
                    if let Some(v) = d.to_digit(10) {
                        n = n
                            .checked_mul(10)
                            .and_then(|n| n.checked_add(v as u64))
                            .ok_or_else(|| Error::Parse("integer literal overflow".into()))?;
                        chars.next();
                    } else {
                        break;
                    }
                }
                toks.push(Tok::Int(n));
            }
            'a'..='z' => {
                let mut s = String::new();
                while let Some(&c) = chars.peek() {
                    if c.is_ascii_lowercase() {
                        s.push(c);
                        chars.next();
                    } else {
                        break;
                    }
                }
                toks.push(Tok::Ident(s));
            }
            '+' => {
                chars.next();
                toks.push(Tok::Plus);
            }
            '-' => {
                chars.next();
                toks.push(Tok::Minus);
            }
            '*' => {
                chars.next();
                toks.push(Tok::Star);
            }
            '/' => {
                chars.next();
                toks.push(Tok::Slash);
            }
            '^' => {
                chars.next();
                toks.push(Tok::Caret);
            }
            '(' => {
                chars.next();
                toks.push(Tok::LParen);
            }
            ')' => {
                chars.next();
                toks.push(Tok::RParen);
            }
            other => return Err(Error::Parse(format!("unexpected character '{other}'"))),
        }
    }
    Ok(toks)
}

/// Division hook: `None` makes `/` a parse error in that ring.
pub type DivHook<'a, E> = Option<&'a dyn Fn(&E, &E) -> Option<E>>;

struct ExprParser<'a, R: Ring> {
    ring: &'a R,
    toks: Vec<Tok>,
    pos: usize,
    depth: usize,
    syms: &'a [(&'a str, R::Elem)],
    div: DivHook<'a, R::Elem>,
}

impl<'a, R: Ring> ExprParser<'a, R> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expr(&mut self) -> Result<R::Elem> {
        let mut acc = if self.peek() == Some(&Tok::Minus) {
            self.bump();
            self.ring.neg(&self.term()?)
        } else {
            self.term()?
        };
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    let t = self.term()?;
                    acc = self.ring.add(&acc, &t);
                }
                Some(Tok::Minus) => {
                    self.bump();
                    let t = self.term()?;
                    acc = self.ring.sub(&acc, &t);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<R::Elem> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.bump();
                    let f = self.factor()?;
                    acc = self.ring.mul(&acc, &f);
                }
                Some(Tok::Slash) => {
                    self.bump();
                    let f = self.factor()?;
                    let div = self.div.ok_or_else(|| {
                        Error::Parse("division not supported in this ring".into())
                    })?;
                    acc = div(&acc, &f).ok_or_else(|| {
                        Error::Parse("division failed (divisor not invertible)".into())
                    })?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<R::Elem> {
        let base = self.atom()?;
        if self.peek() == Some(&Tok::Caret) {
            self.bump();
            match self.bump() {
                Some(Tok::Int(e)) => Ok(self.ring.pow(&base, e)),
                _ => Err(Error::Parse("expected integer exponent after '^'".into())),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<R::Elem> {
        match self.bump() {
            Some(Tok::Int(n)) => Ok(self.ring.from_u64(n)),
            Some(Tok::Ident(name)) => self
                .syms
                .iter()
                .find(|(s, _)| *s == name)
                .map(|(_, e)| e.clone())
                .ok_or_else(|| Error::Parse(format!("unknown symbol '{name}'"))),
            Some(Tok::LParen) => {
                self.depth += 1;
                if self.depth > 128 {
                    return Err(Error::Parse("expression nests too deeply".into()));
                }
                let e = self.expr()?;
                self.depth -= 1;
                if self.bump() != Some(Tok::RParen) {
                    return Err(Error::Parse("expected ')'".into()));
                }
                Ok(e)
            }
            other => Err(Error::Parse(format!("unexpected token {other:?}"))),
        }
    }
}

/// Parse an expression in an arbitrary ring, with the given symbol bindings.
pub fn parse_in<R: Ring>(
    ring: &R,
    src: &str,
    syms: &[(&str, R::Elem)],
    div: DivHook<'_, R::Elem>,
) -> Result<R::Elem> {
    let toks = lex(src)?;
    if toks.is_empty() {
        return Err(Error::Parse("empty expression".into()));
    }
    let mut p = ExprParser {
        ring,
        toks,
        pos: 0,
        depth: 0,
        syms,
        div,
    };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(Error::Parse(format!(
            "trailing input after position {}",
            p.pos
        )));
    }
    Ok(e)
}

/// Polynomial in `x` over F_q; `u` is available in extension fields.
pub fn parse_x_poly(ring: &PolyRing<Fq>, src: &str) -> Result<Poly<FqElem>> {
    let mut syms = vec![(ring.var().symbol(), ring.gen())];
    if ring.base().lambda() > 1 {
        syms.push(("u", ring.constant(ring.base().gen_u())));
    }
    parse_in(ring, src, &syms, None)
}

/// Scalar F_q element (an integer mod p, or a u-polynomial).
pub fn parse_fq_elem(fq: &Fq, src: &str) -> Result<FqElem> {
    let mut syms = vec![];
    if fq.lambda() > 1 {
        syms.push(("u", fq.gen_u()));
    }
    parse_in(fq, src, &syms, None)
}

/// Polynomial in `x` with A = F_q[th] coefficients.
pub fn parse_ax_poly(ring: &AXRing, src: &str) -> Result<Poly<Poly<FqElem>>> {
    let th = ring.constant(ring.base().gen());
    let mut syms = vec![("x", ring.gen()), ("th", th)];
    if ring.base().base().lambda() > 1 {
        syms.push((
            "u",
            ring.constant(ring.base().constant(ring.base().base().gen_u())),
        ));
    }
    parse_in(ring, src, &syms, None)
}

/// Element of Frac(A).
pub fn parse_frac_a_elem(ring: &FracARing, src: &str) -> Result<Frac<FqElem>> {
    let th = ring.from_poly(ring.poly_ring().gen());
    let mut syms = vec![("th", th)];
    if ring.poly_ring().base().lambda() > 1 {
        syms.push((
            "u",
            ring.from_poly(ring.poly_ring().constant(ring.poly_ring().base().gen_u())),
        ));
    }
    let div = |a: &Frac<FqElem>, b: &Frac<FqElem>| ring.div(a, b);
    parse_in(ring, src, &syms, Some(&div))
}

/// Polynomial in `x` with Frac(A) coefficients; `/` divides by x-constant
/// fractions only.
pub fn parse_frac_ax_poly(ring: &FracAXRing, src: &str) -> Result<Poly<Frac<FqElem>>> {
    let frac = ring.base().clone();
    let th = ring.constant(frac.from_poly(frac.poly_ring().gen()));
    let mut syms = vec![("x", ring.gen()), ("th", th)];
    if frac.poly_ring().base().lambda() > 1 {
        syms.push((
            "u",
            ring.constant(
                frac.from_poly(frac.poly_ring().constant(frac.poly_ring().base().gen_u())),
            ),
        ));
    }
    let div = |a: &Poly<Frac<FqElem>>, b: &Poly<Frac<FqElem>>| {
        if b.degree() == Some(0) {
            let inv = frac.inv(&b.coeffs()[0])?;
            Some(ring.scale(&inv, a))
        } else {
            None
        }
    };
    parse_in(ring, src, &syms, Some(&div))
}

/// Element of A = F_q[th].
pub fn parse_theta_poly(aring: &PolyRing<Fq>, src: &str) -> Result<Poly<FqElem>> {
    debug_assert_eq!(aring.var(), Var::Theta);
    let mut syms = vec![("th", aring.gen())];
    if aring.base().lambda() > 1 {
        syms.push(("u", aring.constant(aring.base().gen_u())));
    }
    parse_in(aring, src, &syms, None)
}

/// Monic modulus polynomial in `u` over F_p, returned low-to-high.
pub fn parse_modulus(p: u64, src: &str) -> Result<Vec<u64>> {
    let fp = Fq::prime(p)?;
    let ring = PolyRing::new(fp, Var::U);
    let f = parse_in(&ring, src, &[("u", ring.gen())], None)?;
    Ok(f.coeffs().iter().map(|c| c[0]).collect())
}

// ---------------------------------------------------------------------------
// Header plumbing shared by the file formats
// ---------------------------------------------------------------------------

fn parse_kv_header(line: &str) -> Result<BTreeMap<String, String>> {
    let mut map = BTreeMap::new();
    for part in line.split_whitespace() {
        let (k, v) = part
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("bad header field '{part}'")))?;
        map.insert(k.to_string(), v.to_string());
    }
    Ok(map)
}

fn header_u64(map: &BTreeMap<String, String>, key: &str) -> Result<u64> {
    map.get(key)
        .ok_or_else(|| Error::Parse(format!("missing header field '{key}'")))?
        .parse()
        .map_err(|_| Error::Parse(format!("bad integer in header field '{key}'")))
}

fn field_from_header(map: &BTreeMap<String, String>) -> Result<Fq> {
    let q = header_u64(map, "q")?;
    match map.get("modulus") {
        None => Fq::from_order(q),
        Some(m) => {
            let (p, _) = factor_q(q)?;
            Fq::with_modulus(p, parse_modulus(p, m)?)
        }
    }
}

fn factor_q(q: u64) -> Result<(u64, usize)> {
    let mut p = 2;
    while p * p <= q {
        if q.is_multiple_of(p) {
            let mut n = q;
            let mut l = 0;
            while n.is_multiple_of(p) {
                n /= p;
                l += 1;
            }
            if n != 1 {
                return Err(Error::Parse(format!("{q} is not a prime power")));
            }
            return Ok((p, l));
        }
        p += 1;
    }
    Ok((q, 1))
}

fn field_header_suffix(fq: &Fq) -> String {
    if fq.lambda() > 1 {
        format!(" q={} modulus={}", fq.q(), format_u_poly_raw(fq.modulus()))
    } else {
        format!(" q={}", fq.q())
    }
}

/// u-polynomial text for a raw coefficient vector (used for moduli, which
/// live outside any field element).
fn format_u_poly_raw(coeffs: &[u64]) -> String {
    let mut terms = Vec::new();
    for (e, &c) in coeffs.iter().enumerate().rev() {
        if c == 0 {
            continue;
        }
        let var = match e {
            0 => None,
            1 => Some("u".to_string()),
            _ => Some(format!("u^{e}")),
        };
        terms.push(match (c, var) {
            (c, None) => c.to_string(),
            (1, Some(v)) => v,
            (c, Some(v)) => format!("{c}*{v}"),
        });
    }
    join_terms(terms, true)
}

// ---------------------------------------------------------------------------
// Sequence files
// ---------------------------------------------------------------------------

/// Write a polynomial sequence over F_q: header `N=<n> ring=Fq q=<q>`, then
/// one x-polynomial per line.
pub fn write_seq(ring: &PolyRing<Fq>, entries: &[Poly<FqElem>]) -> String {
    let mut out = format!(
        "N={} ring=Fq{}\n",
        entries.len(),
        field_header_suffix(ring.base())
    );
    for e in entries {
        out.push_str(&format_poly(ring, e, false));
        out.push('\n');
    }
    out
}

/// Read a sequence file back; returns the ring it was written over.
pub fn read_seq(src: &str) -> Result<(PolyRing<Fq>, Vec<Poly<FqElem>>)> {
    let mut lines = src.lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::Parse("empty sequence file".into()))?;
    let map = parse_kv_header(header)?;
    if map.get("ring").map(String::as_str) != Some("Fq") {
        return Err(Error::Parse("sequence files carry ring=Fq".into()));
    }
    let n = header_u64(&map, "N")? as usize;
    let fq = field_from_header(&map)?;
    let ring = PolyRing::new(fq, Var::X);
    let mut entries = Vec::with_capacity(n);
    for line in lines {
        if line.trim().is_empty() {
            continue;
        }
        entries.push(parse_x_poly(&ring, line)?);
    }
    if entries.len() != n {
        return Err(Error::Parse(format!(
            "expected {n} entries, found {}",
            entries.len()
        )));
    }
    Ok((ring, entries))
}

// ---------------------------------------------------------------------------
// Null sequence files
// ---------------------------------------------------------------------------

pub fn write_null_seq(p: u64, indices: &[u64]) -> String {
    let list = indices
        .iter()
        .map(u64::to_string)
        .collect::<Vec<_>>()
        .join(",");
    format!("p={p}\n{list}\n")
}

pub fn read_null_seq(src: &str) -> Result<(u64, Vec<u64>)> {
    let mut lines = src.lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::Parse("empty null sequence file".into()))?;
    let map = parse_kv_header(header)?;
    let p = header_u64(&map, "p")?;
    let list = lines.next().unwrap_or("").trim();
    let indices = if list.is_empty() {
        vec![]
    } else {
        list.split(',')
            .map(|s| {
                s.trim()
                    .parse::<u64>()
                    .map_err(|_| Error::Parse(format!("bad index '{s}'")))
            })
            .collect::<Result<Vec<_>>>()?
    };
    Ok((p, indices))
}

// ---------------------------------------------------------------------------
// Divided element files
// ---------------------------------------------------------------------------

/// Coefficient ring of a divided element file.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RingTag {
    Fq,
    FqX,
    A,
    AX,
    FracA,
    FracAX,
}

impl RingTag {
    pub fn as_str(self) -> &'static str {
        match self {
            RingTag::Fq => "Fq",
            RingTag::FqX => "Fq[x]",
            RingTag::A => "A",
            RingTag::AX => "A[x]",
            RingTag::FracA => "Frac(A)",
            RingTag::FracAX => "Frac(A)[x]",
        }
    }

    pub fn from_str_tag(s: &str) -> Option<RingTag> {
        Some(match s {
            "Fq" => RingTag::Fq,
            "Fq[x]" => RingTag::FqX,
            "A" => RingTag::A,
            "A[x]" => RingTag::AX,
            "Frac(A)" => RingTag::FracA,
            "Frac(A)[x]" => RingTag::FracAX,
            _ => return None,
        })
    }
}

pub type ARing = PolyRing<Fq>;
pub type AXRing = PolyRing<PolyRing<Fq>>;
pub type FracARing = FracField<Fq>;
pub type FracAXRing = PolyRing<FracField<Fq>>;

/// A divided element together with its runtime-tagged coefficient ring, the
/// unit of the CLI's `mul`/`inv`/`act` pipeline.
#[derive(Clone, Debug, PartialEq)]
pub enum DpValue {
    Fq(Fq, Divided<FqElem>),
    FqX(PolyRing<Fq>, Divided<Poly<FqElem>>),
    A(ARing, Divided<Poly<FqElem>>),
    AX(AXRing, Divided<Poly<Poly<FqElem>>>),
    FracA(FracARing, Divided<Frac<FqElem>>),
    FracAX(FracAXRing, Divided<Poly<Frac<FqElem>>>),
}

pub fn a_ring(fq: Fq) -> ARing {
    PolyRing::new(fq, Var::Theta)
}

pub fn ax_ring(fq: Fq) -> AXRing {
    PolyRing::new(a_ring(fq), Var::X)
}

pub fn frac_a_ring(fq: Fq) -> FracARing {
    FracField::new(a_ring(fq))
}

pub fn frac_ax_ring(fq: Fq) -> FracAXRing {
    PolyRing::new(frac_a_ring(fq), Var::X)
}

impl DpValue {
    pub fn tag(&self) -> RingTag {
        match self {
            DpValue::Fq(..) => RingTag::Fq,
            DpValue::FqX(..) => RingTag::FqX,
            DpValue::A(..) => RingTag::A,
            DpValue::AX(..) => RingTag::AX,
            DpValue::FracA(..) => RingTag::FracA,
            DpValue::FracAX(..) => RingTag::FracAX,
        }
    }

    pub fn field(&self) -> &Fq {
        match self {
            DpValue::Fq(f, _) => f,
            DpValue::FqX(r, _) => r.base(),
            DpValue::A(r, _) => r.base(),
            DpValue::AX(r, _) => r.base().base(),
            DpValue::FracA(r, _) => r.poly_ring().base(),
            DpValue::FracAX(r, _) => r.base().poly_ring().base(),
        }
    }

    pub fn trunc(&self) -> usize {
        match self {
            DpValue::Fq(_, v) => v.trunc(),
            DpValue::FqX(_, v) => v.trunc(),
            DpValue::A(_, v) => v.trunc(),
            DpValue::AX(_, v) => v.trunc(),
            DpValue::FracA(_, v) => v.trunc(),
            DpValue::FracAX(_, v) => v.trunc(),
        }
    }
}

/// Run generic code against the ring and element of a [`DpValue`].
#[macro_export]
macro_rules! with_dp_value {
    ($value:expr, |$ring:ident, $elem:ident| $body:expr) => {
        match $value {
            $crate::textio::DpValue::Fq($ring, $elem) => $body,
            $crate::textio::DpValue::FqX($ring, $elem) => $body,
            $crate::textio::DpValue::A($ring, $elem) => $body,
            $crate::textio::DpValue::AX($ring, $elem) => $body,
            $crate::textio::DpValue::FracA($ring, $elem) => $body,
            $crate::textio::DpValue::FracAX($ring, $elem) => $body,
        }
    };
}

/// Write a divided element: `trunc=<N> ring=<tag> q=<q>` then one
/// `<index>: <polynomial>` line per nonzero coefficient, ascending.
pub fn write_dp(value: &DpValue) -> String {
    let mut out = format!(
        "trunc={} ring={}{}\n",
        value.trunc(),
        value.tag().as_str(),
        field_header_suffix(value.field())
    );
    with_dp_value!(value, |ring, elem| {
        for (i, c) in elem.coeffs() {
            out.push_str(&format!("{i}: {}\n", ring.format_elem(c, false)));
        }
    });
    out
}

pub fn read_dp(src: &str) -> Result<DpValue> {
    let mut lines = src.lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::Parse("empty divided element file".into()))?;
    let map = parse_kv_header(header)?;
    let trunc = header_u64(&map, "trunc")? as usize;
    if trunc == 0 {
        return Err(Error::Parse("trunc must be positive".into()));
    }
    let tag = map
        .get("ring")
        .and_then(|s| RingTag::from_str_tag(s))
        .ok_or_else(|| Error::Parse("missing or unknown ring tag".into()))?;
    let fq = field_from_header(&map)?;

    let mut entries: Vec<(u64, String)> = Vec::new();
    for line in lines {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let (idx, poly) = line
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("bad coefficient line '{line}'")))?;
        let idx = idx
            .trim()
            .parse::<u64>()
            .map_err(|_| Error::Parse(format!("bad index '{idx}'")))?;
        entries.push((idx, poly.trim().to_string()));
    }

    fn build<R: Ring>(
        ring: &R,
        trunc: usize,
        entries: &[(u64, String)],
        parse: impl Fn(&R, &str) -> Result<R::Elem>,
    ) -> Result<Divided<R::Elem>> {
        let dp = DividedRing::new(ring.clone());
        let mut parsed = Vec::with_capacity(entries.len());
        for (i, src) in entries {
            parsed.push((*i, parse(ring, src)?));
        }
        dp.from_entries(trunc, parsed)
    }

    Ok(match tag {
        RingTag::Fq => {
            let ring = fq;
            let v = build(&ring, trunc, &entries, parse_fq_elem)?;
            DpValue::Fq(ring, v)
        }
        RingTag::FqX => {
            let ring = PolyRing::new(fq, Var::X);
            let v = build(&ring, trunc, &entries, parse_x_poly)?;
            DpValue::FqX(ring, v)
        }
        RingTag::A => {
            let ring = a_ring(fq);
            let v = build(&ring, trunc, &entries, parse_theta_poly)?;
            DpValue::A(ring, v)
        }
        RingTag::AX => {
            let ring = ax_ring(fq);
            let v = build(&ring, trunc, &entries, parse_ax_poly)?;
            DpValue::AX(ring, v)
        }
        RingTag::FracA => {
            let ring = frac_a_ring(fq);
            let v = build(&ring, trunc, &entries, parse_frac_a_elem)?;
            DpValue::FracA(ring, v)
        }
        RingTag::FracAX => {
            let ring = frac_ax_ring(fq);
            let v = build(&ring, trunc, &entries, parse_frac_ax_poly)?;
            DpValue::FracAX(ring, v)
        }
    })
}

// ---------------------------------------------------------------------------
// Operations on runtime-tagged divided elements
// ---------------------------------------------------------------------------

/// Action request on a [`DpValue`]; the pi3 scalar arrives as text and is
/// parsed in whichever coefficient ring the value carries.
#[derive(Clone, Debug)]
pub enum DpAction {
    Sigma(crate::actions::DigitPerm),
    Pi1,
    Pi2,
    Pi3(String),
}

impl DpValue {
    fn require_same_ring(&self, other: &DpValue) -> Result<()> {
        if self.tag() != other.tag() || self.field() != other.field() {
            return Err(Error::Invalid(format!(
                "ring mismatch: {} over q={} vs {} over q={}",
                self.tag().as_str(),
                self.field().q(),
                other.tag().as_str(),
                other.field().q()
            )));
        }
        Ok(())
    }

    pub fn mul(&self, other: &DpValue) -> Result<DpValue> {
        self.require_same_ring(other)?;
        macro_rules! arm {
            ($variant:ident, $r:expr, $f:expr, $g:expr) => {
                DpValue::$variant($r.clone(), DividedRing::new($r.clone()).mul($f, $g))
            };
        }
        Ok(match (self, other) {
            (DpValue::Fq(r, f), DpValue::Fq(_, g)) => arm!(Fq, r, f, g),
            (DpValue::FqX(r, f), DpValue::FqX(_, g)) => arm!(FqX, r, f, g),
            (DpValue::A(r, f), DpValue::A(_, g)) => arm!(A, r, f, g),
            (DpValue::AX(r, f), DpValue::AX(_, g)) => arm!(AX, r, f, g),
            (DpValue::FracA(r, f), DpValue::FracA(_, g)) => arm!(FracA, r, f, g),
            (DpValue::FracAX(r, f), DpValue::FracAX(_, g)) => arm!(FracAX, r, f, g),
            _ => unreachable!("ring equality checked above"),
        })
    }

    pub fn inverse(&self) -> Result<DpValue> {
        macro_rules! arm {
            ($variant:ident, $r:expr, $f:expr) => {
                DpValue::$variant($r.clone(), DividedRing::new($r.clone()).inverse($f)?)
            };
        }
        Ok(match self {
            DpValue::Fq(r, f) => arm!(Fq, r, f),
            DpValue::FqX(r, f) => arm!(FqX, r, f),
            DpValue::A(r, f) => arm!(A, r, f),
            DpValue::AX(r, f) => arm!(AX, r, f),
            DpValue::FracA(r, f) => arm!(FracA, r, f),
            DpValue::FracAX(r, f) => arm!(FracAX, r, f),
        })
    }

    pub fn apply(&self, action: &DpAction) -> Result<DpValue> {
        use crate::actions::{apply_action, DividedAction};
        macro_rules! arm {
            ($variant:ident, $r:expr, $f:expr, $parse:expr) => {{
                let act = match action {
                    DpAction::Sigma(s) => DividedAction::Sigma(s.clone()),
                    DpAction::Pi1 => DividedAction::Pi1,
                    DpAction::Pi2 => DividedAction::Pi2,
                    DpAction::Pi3(src) => DividedAction::Pi3($parse($r, src.as_str())?),
                };
                DpValue::$variant(
                    $r.clone(),
                    apply_action(&DividedRing::new($r.clone()), &act, $f)?,
                )
            }};
        }
        Ok(match self {
            DpValue::Fq(r, f) => arm!(Fq, r, f, parse_fq_elem),
            DpValue::FqX(r, f) => arm!(FqX, r, f, parse_x_poly),
            DpValue::A(r, f) => arm!(A, r, f, parse_theta_poly),
            DpValue::AX(r, f) => arm!(AX, r, f, parse_ax_poly),
            DpValue::FracA(r, f) => arm!(FracA, r, f, parse_frac_a_elem),
            DpValue::FracAX(r, f) => arm!(FracAX, r, f, parse_frac_ax_poly),
        })
    }

    /// Multiplicativity check; only rings with an x to substitute qualify.
    pub fn check_multiplicative(&self) -> Result<crate::binomial::MultVerdict> {
        use crate::binomial::check_multiplicative;
        match self {
            DpValue::FqX(r, f) => Ok(check_multiplicative(r, f)),
            DpValue::AX(r, f) => Ok(check_multiplicative(r, f)),
            DpValue::FracAX(r, f) => Ok(check_multiplicative(r, f)),
            other => Err(Error::Invalid(format!(
                "ring {} has no x to substitute; multiplicativity undefined",
                other.tag().as_str()
            ))),
        }
    }

    /// Carlitz-image membership for a given q; x-coefficient rings only.
    pub fn in_carlitz_image(&self, q: u64) -> Result<bool> {
        use crate::carlitz::is_in_carlitz_image;
        match self {
            DpValue::FqX(r, f) => Ok(is_in_carlitz_image(r, f, q)?.is_yes()),
            DpValue::AX(r, f) => Ok(is_in_carlitz_image(r, f, q)?.is_yes()),
            DpValue::FracAX(r, f) => Ok(is_in_carlitz_image(r, f, q)?.is_yes()),
            other => Err(Error::Invalid(format!(
                "ring {} has no x; image membership undefined",
                other.tag().as_str()
            ))),
        }
    }
}
