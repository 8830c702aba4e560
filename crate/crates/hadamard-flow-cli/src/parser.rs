//! Operator expression grammar: `euler:`, `hardy:`, and `seq:` terms.
//!
//! ```text
//! expr    := term { "+" term }                     same-variant terms merge
//! term    := "euler:" [ "P(theta)=" ] poly
//!          | "hardy:" hpoly
//!          | "seq:" "[" entry { "," entry } "]"
//! poly    := [sign] monomial { sign monomial }
//! monomial:= coef [ "*" "theta" [ "^" int ] ] | "theta" [ "^" int ]
//! hterm   := coef [ "/(n+1)" [ "^" int ] ]
//! coef    := atom { "*" atom }
//! atom    := int [ "/" int ] | "i" | "sqrt(" int ")" | "(" signed sum ")"
//! ```
//!
//! Every euler/hardy literal becomes an [`ExactScalar`]; decimal literals are
//! allowed only inside `seq:` lists, where entries are evaluated as `f64`
//! complex numbers. A parse yields one [`MultiplierSymbol`]: monomials with
//! equal powers accumulate exactly, and `+`-joined terms of the same variant
//! merge coefficientwise. [`pretty_print`] is the inverse normal form: its
//! output reparses to the same symbol and printing is idempotent.

use std::fmt;

use hadamard_flow::symbols::{symbol_add, SymbolError};
use hadamard_flow::{ExactScalar, MultiplierSymbol};
use num_complex::Complex64;

const MAX_THETA_EXPONENT: u64 = 64;
const MAX_BASIS_EXPONENT: u64 = 32;
const MAX_SQRT_ARGUMENT: u64 = 1_000_000;

/// Byte position plus message; [`ParseError::render`] adds a caret line.
#[derive(Debug, Clone, PartialEq)]
pub struct ParseError {
    pub pos: usize,
    pub message: String,
}

impl ParseError {
    pub fn render(&self, src: &str) -> String {
        let clean: String = src
            .chars()
            .map(|c| if c == '\n' || c == '\t' { ' ' } else { c })
            .collect();
        let col = src[..self.pos.min(src.len())].chars().count();
        format!(
            "parse error: {}\n  {}\n  {}^",
            self.message,
            clean,
            " ".repeat(col)
        )
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "parse error at byte {}: {}", self.pos, self.message)
    }
}

impl std::error::Error for ParseError {}

fn err_at(pos: usize, message: impl Into<String>) -> ParseError {
    ParseError {
        pos,
        message: message.into(),
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Int(u64),
    /// Decimal literal, or an integer run too large for `u64`.
    Dec(f64),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    Colon,
    Eq,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
}

struct Spanned {
    tok: Tok,
    pos: usize,
}

fn lex(src: &str) -> Result<Vec<Spanned>, ParseError> {
    let bytes = src.as_bytes();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let start = i;
        let b = bytes[i];
        let tok = match b {
            b' ' | b'\t' | b'\r' | b'\n' => {
                i += 1;
                continue;
            }
            b'0'..=b'9' => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let mut is_dec = false;
                if i + 1 < bytes.len() && bytes[i] == b'.' && bytes[i + 1].is_ascii_digit() {
                    is_dec = true;
                    i += 1;
                    while i < bytes.len() && bytes[i].is_ascii_digit() {
                        i += 1;
                    }
                }
                let text = &src[start..i];
                if is_dec {
                    Tok::Dec(
                        text.parse()
                            .map_err(|_| err_at(start, "malformed number"))?,
                    )
                } else {
                    match text.parse::<u64>() {
                        Ok(n) => Tok::Int(n),
                        // integer run past u64: keep the value, lose exactness
                        Err(_) => Tok::Dec(
                            text.parse()
                                .map_err(|_| err_at(start, "malformed number"))?,
                        ),
                    }
                }
            }
            b'a'..=b'z' | b'A'..=b'Z' | b'_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                Tok::Ident(src[start..i].to_string())
            }
            _ => {
                i += 1;
                match b {
                    b'+' => Tok::Plus,
                    b'-' => Tok::Minus,
                    b'*' => Tok::Star,
                    b'/' => Tok::Slash,
                    b'^' => Tok::Caret,
                    b':' => Tok::Colon,
                    b'=' => Tok::Eq,
                    b'(' => Tok::LParen,
                    b')' => Tok::RParen,
                    b'[' => Tok::LBracket,
                    b']' => Tok::RBracket,
                    b',' => Tok::Comma,
                    _ => {
                        let c = src[start..].chars().next().unwrap_or('?');
                        return Err(err_at(start, format!("unexpected character '{c}'")));
                    }
                }
            }
        };
        toks.push(Spanned { tok, pos: start });
    }
    Ok(toks)
}

struct Cursor<'a> {
    toks: &'a [Spanned],
    at: usize,
    end_pos: usize,
}

impl<'a> Cursor<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|s| &s.tok)
    }

    fn peek_at(&self, k: usize) -> Option<&Tok> {
        self.toks.get(self.at + k).map(|s| &s.tok)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map_or(self.end_pos, |s| s.pos)
    }

    fn advance(&mut self) {
        self.at += 1;
    }

    fn at_end(&self) -> bool {
        self.at >= self.toks.len()
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == Some(t) {
            self.advance();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, t: &Tok, what: &str) -> Result<(), ParseError> {
        if self.eat(t) {
            Ok(())
        } else {
            Err(self.error_here(format!("expected {what}")))
        }
    }

    fn peek_ident(&self, name: &str) -> bool {
        matches!(self.peek(), Some(Tok::Ident(id)) if id == name)
    }

    fn error_here(&self, message: impl Into<String>) -> ParseError {
        err_at(self.pos(), message)
    }

    fn integer(&mut self, what: &str) -> Result<u64, ParseError> {
        match self.peek() {
            Some(Tok::Int(n)) => {
                let n = *n;
                self.advance();
                Ok(n)
            }
            _ => Err(self.error_here(format!("expected {what}"))),
        }
    }

    /// True when the upcoming `+` separates two top-level terms.
    fn plus_starts_new_term(&self) -> bool {
        matches!(self.peek_at(1), Some(Tok::Ident(id)) if id == "euler" || id == "hardy" || id == "seq")
            && matches!(self.peek_at(2), Some(Tok::Colon))
    }

    fn term(&mut self) -> Result<MultiplierSymbol, ParseError> {
        let pos = self.pos();
        let variant = match self.peek() {
            Some(Tok::Ident(id)) => id.clone(),
            _ => return Err(err_at(pos, "expected a term: euler:, hardy:, or seq:")),
        };
        self.advance();
        self.expect(&Tok::Colon, "':' after the variant keyword")?;
        match variant.as_str() {
            "euler" => self.euler_payload(pos),
            "hardy" => self.hardy_payload(pos),
            "seq" => self.seq_payload(),
            other => Err(err_at(
                pos,
                format!("unknown variant '{other}', expected euler, hardy, or seq"),
            )),
        }
    }

    // ---- exact scalar grammar (euler and hardy coefficients) ----

    fn scalar_atom(&mut self) -> Result<ExactScalar, ParseError> {
        match self.peek() {
            Some(Tok::Int(_)) => self.rational(),
            Some(Tok::Ident(id)) if id == "i" => {
                self.advance();
                Ok(ExactScalar::i())
            }
            Some(Tok::Ident(id)) if id == "sqrt" => {
                self.advance();
                self.expect(&Tok::LParen, "'(' after sqrt")?;
                let pos = self.pos();
                let d = self.integer("a square root argument")?;
                if d > MAX_SQRT_ARGUMENT {
                    return Err(err_at(
                        pos,
                        format!("square root argument exceeds {MAX_SQRT_ARGUMENT}"),
                    ));
                }
                self.expect(&Tok::RParen, "')' after the square root argument")?;
                ExactScalar::sqrt(d).map_err(|e| err_at(pos, e.to_string()))
            }
            Some(Tok::LParen) => {
                self.advance();
                let v = self.scalar_sum()?;
                self.expect(&Tok::RParen, "')' closing the coefficient")?;
                Ok(v)
            }
            Some(Tok::Dec(_)) => Err(self.error_here(
                "decimal literals are only allowed in seq: lists; write an exact rational like 1/2",
            )),
            _ => Err(self.error_here(
                "expected a coefficient: a rational, i, sqrt(d), or a parenthesized sum",
            )),
        }
    }

    fn rational(&mut self) -> Result<ExactScalar, ParseError> {
        let pos = self.pos();
        let numer = self.integer("an integer")?;
        if numer > i64::MAX as u64 {
            return Err(err_at(pos, "integer literal too large for an exact scalar"));
        }
        // a slash only continues the rational when digits follow; `/(n+1)`
        // stays for the hardy basis marker
        let mut denom = 1u64;
        if matches!(self.peek(), Some(Tok::Slash)) && matches!(self.peek_at(1), Some(Tok::Int(_))) {
            self.advance();
            let dpos = self.pos();
            denom = self.integer("a denominator")?;
            if denom == 0 {
                return Err(err_at(dpos, "zero denominator"));
            }
            if denom > i64::MAX as u64 {
                return Err(err_at(dpos, "denominator too large for an exact scalar"));
            }
        }
        ExactScalar::from_ratio(numer as i64, denom as i64).map_err(|e| err_at(pos, e.to_string()))
    }

    fn scalar_product(&mut self, stop_before_theta: bool) -> Result<ExactScalar, ParseError> {
        let mut value = self.scalar_atom()?;
        while matches!(self.peek(), Some(Tok::Star)) {
            if stop_before_theta && matches!(self.peek_at(1), Some(Tok::Ident(id)) if id == "theta")
            {
                break;
            }
            let pos = self.pos();
            self.advance();
            let rhs = self.scalar_atom()?;
            value = value.mul(&rhs).map_err(|e| err_at(pos, e.to_string()))?;
        }
        Ok(value)
    }

    fn scalar_sum(&mut self) -> Result<ExactScalar, ParseError> {
        let mut total = ExactScalar::zero();
        let mut negate = self.eat(&Tok::Minus);
        if !negate {
            self.eat(&Tok::Plus);
        }
        loop {
            let pos = self.pos();
            let v = self.scalar_product(false)?;
            let v = if negate { v.neg() } else { v };
            total = total.add(&v).map_err(|e| err_at(pos, e.to_string()))?;
            if self.eat(&Tok::Plus) {
                negate = false;
            } else if self.eat(&Tok::Minus) {
                negate = true;
            } else {
                break;
            }
        }
        Ok(total)
    }

    // ---- euler terms ----

    fn theta_power(&mut self) -> Result<usize, ParseError> {
        let pos = self.pos();
        if !self.peek_ident("theta") {
            return Err(err_at(pos, "expected theta"));
        }
        self.advance();
        if self.eat(&Tok::Caret) {
            let kpos = self.pos();
            let k = self.integer("a nonnegative integer exponent")?;
            if k > MAX_THETA_EXPONENT {
                return Err(err_at(
                    kpos,
                    format!("theta exponent exceeds {MAX_THETA_EXPONENT}"),
                ));
            }
            Ok(k as usize)
        } else {
            Ok(1)
        }
    }

    fn euler_monomial(&mut self) -> Result<(ExactScalar, usize), ParseError> {
        if self.peek_ident("theta") {
            return Ok((ExactScalar::one(), self.theta_power()?));
        }
        let coeff = self.scalar_product(true)?;
        if self.eat(&Tok::Star) {
            Ok((coeff, self.theta_power()?))
        } else {
            Ok((coeff, 0))
        }
    }

    fn euler_payload(&mut self, term_pos: usize) -> Result<MultiplierSymbol, ParseError> {
        // optional `P(theta) =` header
        if self.peek_ident("P")
            && matches!(self.peek_at(1), Some(Tok::LParen))
            && matches!(self.peek_at(2), Some(Tok::Ident(id)) if id == "theta")
            && matches!(self.peek_at(3), Some(Tok::RParen))
            && matches!(self.peek_at(4), Some(Tok::Eq))
        {
            for _ in 0..5 {
                self.advance();
            }
        }
        let coeffs = self.signed_monomials(Self::euler_monomial)?;
        MultiplierSymbol::euler(coeffs).map_err(|e| err_at(term_pos, e.to_string()))
    }

    // ---- hardy terms ----

    fn hardy_monomial(&mut self) -> Result<(ExactScalar, usize), ParseError> {
        let coeff = self.scalar_product(false)?;
        if !(matches!(self.peek(), Some(Tok::Slash))
            && matches!(self.peek_at(1), Some(Tok::LParen)))
        {
            return Ok((coeff, 0));
        }
        self.advance(); // slash
        self.advance(); // lparen
        let pos = self.pos();
        if !self.peek_ident("n") {
            return Err(err_at(pos, "the hardy basis is 1/(n+1)^k: expected n"));
        }
        self.advance();
        self.expect(&Tok::Plus, "'+' in the (n+1) basis")?;
        let opos = self.pos();
        if self.integer("1 in the (n+1) basis")? != 1 {
            return Err(err_at(opos, "the hardy basis is 1/(n+1)^k"));
        }
        self.expect(&Tok::RParen, "')' closing (n+1)")?;
        if self.eat(&Tok::Caret) {
            let kpos = self.pos();
            let k = self.integer("a nonnegative integer exponent")?;
            if k > MAX_BASIS_EXPONENT {
                return Err(err_at(
                    kpos,
                    format!("basis exponent exceeds {MAX_BASIS_EXPONENT}"),
                ));
            }
            Ok((coeff, k as usize))
        } else {
            Ok((coeff, 1))
        }
    }

    fn hardy_payload(&mut self, term_pos: usize) -> Result<MultiplierSymbol, ParseError> {
        let coeffs = self.signed_monomials(Self::hardy_monomial)?;
        MultiplierSymbol::hardy(coeffs).map_err(|e| err_at(term_pos, e.to_string()))
    }

    /// Shared `+`/`-` monomial loop; equal powers accumulate exactly.
    fn signed_monomials(
        &mut self,
        monomial: fn(&mut Self) -> Result<(ExactScalar, usize), ParseError>,
    ) -> Result<Vec<ExactScalar>, ParseError> {
        let mut coeffs: Vec<ExactScalar> = Vec::new();
        let mut negate = self.eat(&Tok::Minus);
        if !negate {
            self.eat(&Tok::Plus);
        }
        loop {
            let pos = self.pos();
            let (c, p) = monomial(self)?;
            let c = if negate { c.neg() } else { c };
            if coeffs.len() <= p {
                coeffs.resize_with(p + 1, ExactScalar::zero);
            }
            coeffs[p] = coeffs[p].add(&c).map_err(|e| err_at(pos, e.to_string()))?;
            if matches!(self.peek(), Some(Tok::Plus)) {
                if self.plus_starts_new_term() {
                    break;
                }
                self.advance();
                negate = false;
            } else if self.eat(&Tok::Minus) {
                negate = true;
            } else {
                break;
            }
        }
        Ok(coeffs)
    }

    // ---- explicit sequences (f64 domain) ----

    fn complex_atom(&mut self) -> Result<Complex64, ParseError> {
        let value = match self.peek() {
            Some(Tok::Int(n)) => {
                let v = *n as f64;
                self.advance();
                Complex64::new(v, 0.0)
            }
            Some(Tok::Dec(x)) => {
                let v = *x;
                self.advance();
                Complex64::new(v, 0.0)
            }
            Some(Tok::Ident(id)) if id == "i" => {
                self.advance();
                return Ok(Complex64::new(0.0, 1.0));
            }
            Some(Tok::Ident(id)) if id == "sqrt" => {
                self.advance();
                self.expect(&Tok::LParen, "'(' after sqrt")?;
                let d = match self.peek() {
                    Some(Tok::Int(n)) => {
                        let v = *n as f64;
                        self.advance();
                        v
                    }
                    Some(Tok::Dec(x)) => {
                        let v = *x;
                        self.advance();
                        v
                    }
                    _ => return Err(self.error_here("expected a square root argument")),
                };
                self.expect(&Tok::RParen, "')' after the square root argument")?;
                return Ok(Complex64::new(d.sqrt(), 0.0));
            }
            Some(Tok::LParen) => {
                self.advance();
                let v = self.complex_entry()?;
                self.expect(&Tok::RParen, "')' closing the entry")?;
                return Ok(v);
            }
            _ => return Err(self.error_here("expected a number")),
        };
        // numeric literal may continue as a fraction
        if matches!(self.peek(), Some(Tok::Slash))
            && matches!(self.peek_at(1), Some(Tok::Int(_) | Tok::Dec(_)))
        {
            self.advance();
            let dpos = self.pos();
            let denom = match self.peek() {
                Some(Tok::Int(n)) => *n as f64,
                Some(Tok::Dec(x)) => *x,
                _ => unreachable!("guarded by the lookahead"),
            };
            self.advance();
            if denom == 0.0 {
                return Err(err_at(dpos, "division by zero"));
            }
            return Ok(value / denom);
        }
        Ok(value)
    }

    fn complex_product(&mut self) -> Result<Complex64, ParseError> {
        let mut value = self.complex_atom()?;
        while self.eat(&Tok::Star) {
            value *= self.complex_atom()?;
        }
        Ok(value)
    }

    fn complex_entry(&mut self) -> Result<Complex64, ParseError> {
        let mut total = Complex64::new(0.0, 0.0);
        let mut negate = self.eat(&Tok::Minus);
        if !negate {
            self.eat(&Tok::Plus);
        }
        loop {
            let v = self.complex_product()?;
            total += if negate { -v } else { v };
            if self.eat(&Tok::Plus) {
                negate = false;
            } else if self.eat(&Tok::Minus) {
                negate = true;
            } else {
                break;
            }
        }
        Ok(total)
    }

    fn seq_payload(&mut self) -> Result<MultiplierSymbol, ParseError> {
        let open = self.pos();
        self.expect(&Tok::LBracket, "'[' opening the sequence")?;
        if matches!(self.peek(), Some(Tok::RBracket)) {
            return Err(self.error_here("empty sequence"));
        }
        let mut values = Vec::new();
        let mut positions = Vec::new();
        loop {
            positions.push(self.pos());
            values.push(self.complex_entry()?);
            if self.eat(&Tok::Comma) {
                continue;
            }
            self.expect(&Tok::RBracket, "',' or ']' in the sequence")?;
            break;
        }
        MultiplierSymbol::explicit(values).map_err(|e| match e {
            SymbolError::NonFiniteEntry { index } => {
                err_at(positions[index], "sequence entry is not a finite number")
            }
            other => err_at(open, other.to_string()),
        })
    }
}

/// Parses an operator expression into one merged symbol.
pub fn parse_operator(src: &str) -> Result<MultiplierSymbol, ParseError> {
    let toks = lex(src)?;
    let mut cur = Cursor {
        toks: &toks,
        at: 0,
        end_pos: src.len(),
    };
    let mut symbol = cur.term()?;
    while cur.eat(&Tok::Plus) {
        let pos = cur.pos();
        let rhs = cur.term()?;
        symbol = symbol_add(&symbol, &rhs).map_err(|e| err_at(pos, e.to_string()))?;
    }
    if !cur.at_end() {
        return Err(cur.error_here("unexpected trailing input"));
    }
    Ok(symbol)
}

enum Basis {
    Theta,
    InverseShift,
}

fn monomial_piece(c: &ExactScalar, k: usize, basis: &Basis) -> (bool, String) {
    let s = c.to_string();
    let multi = s.contains(" + ") || s.contains(" - ");
    if k == 0 {
        return match s.strip_prefix('-') {
            Some(rest) => (true, rest.to_string()),
            None => (false, s),
        };
    }
    let basis_str = match (basis, k) {
        (Basis::Theta, 1) => "theta".to_string(),
        (Basis::Theta, _) => format!("theta^{k}"),
        (Basis::InverseShift, 1) => "/(n+1)".to_string(),
        (Basis::InverseShift, _) => format!("/(n+1)^{k}"),
    };
    if multi {
        let sep = if matches!(basis, Basis::Theta) {
            "*"
        } else {
            ""
        };
        return (false, format!("({s}){sep}{basis_str}"));
    }
    match basis {
        Basis::Theta => {
            if s == "1" {
                (false, basis_str)
            } else if s == "-1" {
                (true, basis_str)
            } else {
                match s.strip_prefix('-') {
                    Some(rest) => (true, format!("{rest}*{basis_str}")),
                    None => (false, format!("{s}*{basis_str}")),
                }
            }
        }
        Basis::InverseShift => match s.strip_prefix('-') {
            Some(rest) => (true, format!("{rest}{basis_str}")),
            None => (false, format!("{s}{basis_str}")),
        },
    }
}

fn poly_string(coeffs: &[ExactScalar], basis: Basis) -> String {
    let mut pieces = Vec::new();
    for k in (0..coeffs.len()).rev() {
        if coeffs[k].is_zero() {
            continue;
        }
        pieces.push(monomial_piece(&coeffs[k], k, &basis));
    }
    if pieces.is_empty() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (idx, (neg, body)) in pieces.iter().enumerate() {
        if idx == 0 {
            if *neg {
                out.push('-');
            }
        } else {
            out.push_str(if *neg { " - " } else { " + " });
        }
        out.push_str(body);
    }
    out
}

fn entry_string(z: Complex64) -> String {
    // fold -0.0 so printing is a function of the value
    let re = z.re + 0.0;
    let im = z.im + 0.0;
    let imag = |y: f64| {
        if y == 1.0 {
            "i".to_string()
        } else {
            format!("{y}*i")
        }
    };
    if im == 0.0 {
        format!("{re}")
    } else if re == 0.0 {
        if im == -1.0 {
            "-i".to_string()
        } else if im < 0.0 {
            format!("-{}", imag(-im))
        } else {
            imag(im)
        }
    } else if im < 0.0 {
        format!("{re} - {}", imag(-im))
    } else {
        format!("{re} + {}", imag(im))
    }
}

/// Canonical form: descending powers, exact coefficients printed by their
/// scalar normal form, sequences entrywise. Reparsing returns the same
/// symbol and reprinting returns the same string.
pub fn pretty_print(symbol: &MultiplierSymbol) -> String {
    match symbol {
        MultiplierSymbol::EulerPoly(p) => {
            format!("euler: {}", poly_string(p.coeffs(), Basis::Theta))
        }
        MultiplierSymbol::HardyRational(h) => {
            format!("hardy: {}", poly_string(h.coeffs(), Basis::InverseShift))
        }
        MultiplierSymbol::Explicit(seq) => {
            let entries: Vec<String> = seq.values().iter().map(|&z| entry_string(z)).collect();
            format!("seq: [{}]", entries.join(", "))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> ExactScalar {
        ExactScalar::from_ratio(n, d).unwrap()
    }

    fn parsed(src: &str) -> MultiplierSymbol {
        parse_operator(src).unwrap_or_else(|e| panic!("{}", e.render(src)))
    }

    #[test]
    fn parses_the_three_surfaces() {
        let euler = parsed("euler: P(theta) = i*theta^2 + (3/2)*theta");
        match &euler {
            MultiplierSymbol::EulerPoly(p) => {
                assert_eq!(p.coeff(2), ExactScalar::i());
                assert_eq!(p.coeff(1), rat(3, 2));
                assert!(p.coeff(0).is_zero());
            }
            other => panic!("wrong variant: {other:?}"),
        }

        let hardy = parsed("hardy: 1 + 2/(n+1)^2");
        match &hardy {
            MultiplierSymbol::HardyRational(h) => {
                assert_eq!(h.coeff(0), ExactScalar::one());
                assert!(h.coeff(1).is_zero());
                assert_eq!(h.coeff(2), ExactScalar::from_integer(2));
            }
            other => panic!("wrong variant: {other:?}"),
        }

        let seq = parsed("seq: [1, 0.5, 0.25]");
        match &seq {
            MultiplierSymbol::Explicit(s) => {
                assert_eq!(
                    s.values(),
                    &[
                        Complex64::new(1.0, 0.0),
                        Complex64::new(0.5, 0.0),
                        Complex64::new(0.25, 0.0),
                    ]
                );
            }
            other => panic!("wrong variant: {other:?}"),
        }
    }

    #[test]
    fn canonical_print_is_idempotent() {
        let inputs = [
            "euler: P(theta) = i*theta^2 + (3/2)*theta",
            "euler: theta",
            "euler: -theta^2 + 1/2",
            "euler: 0",
            "euler: (1/2 - 1/3*sqrt(2)*i)*theta^3 - theta + 7",
            "euler: sqrt(8)*theta - i",
            "hardy: 1 + 2/(n+1)^2",
            "hardy: -1/2/(n+1) + sqrt(3)*i/(n+1)^2",
            "hardy: 0",
            "seq: [1, 0.5, 0.25]",
            "seq: [-1.5, 1 - 2*i, sqrt(2)*i, 2/3]",
            "euler: theta + euler: 2*theta - 1",
        ];
        for src in inputs {
            let sym = parsed(src);
            let once = pretty_print(&sym);
            let reparsed = parse_operator(&once).unwrap_or_else(|e| panic!("{}", e.render(&once)));
            assert_eq!(reparsed, sym, "round trip changed the symbol for {src:?}");
            assert_eq!(
                pretty_print(&reparsed),
                once,
                "printing is not idempotent for {src:?}"
            );
        }
    }

    #[test]
    fn exact_scalar_display_reparses_as_a_coefficient() {
        let c = rat(1, 2)
            .add(&ExactScalar::sqrt(2).unwrap().mul(&rat(-1, 3)).unwrap())
            .unwrap()
            .add(&ExactScalar::i().mul(&rat(5, 7)).unwrap())
            .unwrap();
        let sym = MultiplierSymbol::euler(vec![ExactScalar::zero(), c.clone()]).unwrap();
        let printed = pretty_print(&sym);
        assert_eq!(parsed(&printed), sym, "printed form {printed:?}");
    }

    #[test]
    fn equal_powers_accumulate_exactly() {
        assert_eq!(parsed("euler: theta + theta"), parsed("euler: 2*theta"));
        assert_eq!(
            parsed("euler: theta^2 - theta^2"),
            parsed("euler: 0*theta^2")
        );
        assert_eq!(
            parsed("hardy: 1/(n+1) + 1/2/(n+1)"),
            parsed("hardy: 3/2/(n+1)")
        );
    }

    #[test]
    fn sqrt_literals_normalize_their_square_part() {
        assert_eq!(
            pretty_print(&parsed("euler: sqrt(8)*theta")),
            "euler: 2*sqrt(2)*theta"
        );
        assert_eq!(parsed("euler: sqrt(4)*theta"), parsed("euler: 2*theta"));
    }

    #[test]
    fn top_level_sums_merge_same_variant_terms() {
        assert_eq!(
            parsed("euler: theta + euler: 2*theta"),
            parsed("euler: 3*theta")
        );
        assert_eq!(
            parsed("hardy: 1 + hardy: 1/(n+1)"),
            parsed("hardy: 1 + 1/(n+1)")
        );
    }

    #[test]
    fn mixed_variant_sums_are_rejected() {
        let src = "euler: theta + hardy: 1";
        let err = parse_operator(src).unwrap_err();
        assert_eq!(err.pos, 15, "position should point at the hardy term");
        assert!(err.message.contains("euler"), "message: {}", err.message);
    }

    #[test]
    fn decimals_are_rejected_outside_seq() {
        let err = parse_operator("euler: 0.5*theta").unwrap_err();
        assert!(err.message.contains("seq"), "message: {}", err.message);
        let err = parse_operator("hardy: 1.5").unwrap_err();
        assert!(err.message.contains("seq"), "message: {}", err.message);
    }

    #[test]
    fn seq_entries_evaluate_complex_arithmetic() {
        let sym = parsed("seq: [1 - 2*i, 3*i*i, (1 + i)*(1 - i)]");
        match sym {
            MultiplierSymbol::Explicit(s) => {
                assert_eq!(s.values()[0], Complex64::new(1.0, -2.0));
                assert_eq!(s.values()[1], Complex64::new(-3.0, 0.0));
                assert_eq!(s.values()[2], Complex64::new(2.0, 0.0));
            }
            other => panic!("wrong variant: {other:?}"),
        }
    }

    #[test]
    fn hardy_fraction_coefficients_keep_the_basis_marker() {
        let sym = parsed("hardy: 3/4/(n+1)^2 + 1");
        match sym {
            MultiplierSymbol::HardyRational(h) => {
                assert_eq!(h.coeff(2), rat(3, 4));
                assert_eq!(h.coeff(0), ExactScalar::one());
            }
            other => panic!("wrong variant: {other:?}"),
        }
    }

    #[test]
    fn error_positions_point_at_the_offence() {
        let cases: [(&str, &str); 7] = [
            ("euler: theta^", "exponent"),
            ("euler:", "coefficient"),
            ("seq: []", "empty sequence"),
            ("seq: [1/0]", "division by zero"),
            ("bogus: 1", "unknown variant"),
            ("euler: theta theta", "trailing input"),
            ("euler: theta @", "unexpected character"),
        ];
        for (src, needle) in cases {
            let err = parse_operator(src).unwrap_err();
            assert!(
                err.message.contains(needle),
                "expected {needle:?} in error for {src:?}, got: {}",
                err.message
            );
            assert!(err.pos <= src.len());
        }
    }

    #[test]
    fn negative_exponents_are_rejected() {
        assert!(parse_operator("euler: theta^-1").is_err());
        assert!(parse_operator("hardy: 1/(n+1)^-2").is_err());
    }

    #[test]
    fn oversized_literals_are_rejected() {
        assert!(parse_operator("euler: 99999999999999999999999999*theta").is_err());
        assert!(parse_operator("euler: theta^65").is_err());
        assert!(parse_operator("euler: sqrt(1000001)").is_err());
    }

    #[test]
    fn zero_polynomials_print_as_zero() {
        assert_eq!(pretty_print(&parsed("euler: 0 + 0*theta")), "euler: 0");
        assert_eq!(pretty_print(&parsed("hardy: 0/(n+1)")), "hardy: 0");
    }

    #[test]
    fn parenthesized_sums_round_trip() {
        let sym = parsed("euler: (1 + 2*i)*theta^2 - (1/2)*theta");
        match &sym {
            MultiplierSymbol::EulerPoly(p) => {
                assert_eq!(
                    p.coeff(2),
                    ExactScalar::from_integer(1)
                        .add(&ExactScalar::i().mul(&rat(2, 1)).unwrap())
                        .unwrap()
                );
                assert_eq!(p.coeff(1), rat(-1, 2));
            }
            other => panic!("wrong variant: {other:?}"),
        }
        let printed = pretty_print(&sym);
        assert_eq!(parsed(&printed), sym);
    }

    #[test]
    fn incompatible_surds_are_a_parse_error() {
        let err = parse_operator("euler: sqrt(2)*theta + sqrt(3)*theta").unwrap_err();
        assert!(
            err.message.contains("surd") || err.message.contains("sqrt"),
            "{}",
            err.message
        );
    }
}
