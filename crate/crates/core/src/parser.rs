//! Recursive-descent parser for series expressions over z-variables or
//! e-variables (s-aliases accepted), with exact rational literals.
//!
//! Grammar:
//!   expr   := term (('+'|'-') term)*
//!   term   := factor ('*' factor)*
//!   factor := '-' factor | atom ('^' uint)?
//!   atom   := rational | 'i' | variable | '(' expr ')'
//! Rational literals are integers, a/b quotients, or exact decimals.
//! Implicit multiplication by juxtaposition is deliberately not allowed.

use num::traits::Zero;

use crate::elementary::ElementarySeries;
use crate::error::{Error, Result};
use crate::scalar::{CRat, Rat};
use crate::series::{parse_rat, TruncatedSeries};

#[derive(Clone, Debug, PartialEq)]
pub enum ExprAst {
    Number(Rat),
    ImaginaryUnit,
    /// 0-based z-variable index
    VarZ(usize),
    /// 0-based e-variable index
    VarE(usize),
    Add(Box<ExprAst>, Box<ExprAst>),
    Sub(Box<ExprAst>, Box<ExprAst>),
    Mul(Box<ExprAst>, Box<ExprAst>),
    Pow(Box<ExprAst>, u32),
    Neg(Box<ExprAst>),
}

/// A parsed expression lands in exactly one basis.
#[derive(Clone, Debug)]
pub enum ParsedSeries {
    Z(TruncatedSeries),
    E(ElementarySeries),
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(Rat),
    Imag,
    VarZ(usize),
    VarE(usize),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
}

struct Lexer<'a> {
    chars: Vec<char>,
    pos: usize,
    dim: usize,
    src: &'a str,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str, dim: usize) -> Self {
        Lexer { chars: src.chars().collect(), pos: 0, dim, src }
    }

    fn err(&self, pos: usize, msg: impl Into<String>) -> Error {
        let _ = self.src;
        Error::Parse { pos: pos + 1, msg: msg.into() }
    }

    fn tokenize(&mut self) -> Result<Vec<(Tok, usize)>> {
        let mut out = Vec::new();
        while self.pos < self.chars.len() {
            let start = self.pos;
            let c = self.chars[self.pos];
            match c {
                ' ' | '\t' | '\n' | '\r' => {
                    self.pos += 1;
                }
                '+' => {
                    out.push((Tok::Plus, start));
                    self.pos += 1;
                }
                '-' => {
                    out.push((Tok::Minus, start));
                    self.pos += 1;
                }
                '*' => {
                    out.push((Tok::Star, start));
                    self.pos += 1;
                }
                '^' => {
                    out.push((Tok::Caret, start));
                    self.pos += 1;
                }
                '(' => {
                    out.push((Tok::LParen, start));
                    self.pos += 1;
                }
                ')' => {
                    out.push((Tok::RParen, start));
                    self.pos += 1;
                }
                '0'..='9' | '.' => {
                    out.push((self.lex_number()?, start));
                }
                'i' => {
                    self.pos += 1;
                    out.push((Tok::Imag, start));
                }
                'z' | 'w' | 'e' | 's' => {
                    out.push((self.lex_variable()?, start));
                }
                _ => return Err(self.err(start, format!("unexpected character {:?}", c))),
            }
        }
        Ok(out)
    }

    fn lex_number(&mut self) -> Result<Tok> {
        let start = self.pos;
        while self.pos < self.chars.len()
            && (self.chars[self.pos].is_ascii_digit() || self.chars[self.pos] == '.')
        {
            self.pos += 1;
        }
        // a/b rational literal: consume the slash and the denominator digits
        if self.pos < self.chars.len() && self.chars[self.pos] == '/' {
            let slash = self.pos;
            self.pos += 1;
            let den_start = self.pos;
            while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            if self.pos == den_start {
                return Err(self.err(slash, "expected digits after '/'"));
            }
        }
        let text: String = self.chars[start..self.pos].iter().collect();
        let r = parse_rat(&text, start + 1)?;
        Ok(Tok::Num(r))
    }

    fn lex_variable(&mut self) -> Result<Tok> {
        let start = self.pos;
        let letter = self.chars[self.pos];
        self.pos += 1;
        let digit_start = self.pos;
        while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        let digits: String = self.chars[digit_start..self.pos].iter().collect();
        let index = if digits.is_empty() {
            None
        } else {
            Some(digits.parse::<usize>().map_err(|_| self.err(start, "bad variable index"))?)
        };
        match (letter, index) {
            ('z', Some(k)) => self.check_index(start, k).map(Tok::VarZ),
            ('e', Some(k)) | ('s', Some(k)) => self.check_index(start, k).map(Tok::VarE),
            ('z', None) => {
                if self.dim <= 2 {
                    Ok(Tok::VarZ(0))
                } else {
                    Err(self.err(start, "bare 'z' needs dim <= 2; use z1..zd"))
                }
            }
            ('w', None) => {
                if self.dim == 2 {
                    Ok(Tok::VarZ(1))
                } else {
                    Err(self.err(start, "alias 'w' is only available when dim = 2"))
                }
            }
            _ => Err(self.err(start, format!("variable {:?} needs an index", letter))),
        }
    }

    fn check_index(&self, start: usize, k: usize) -> Result<usize> {
        if k >= 1 && k <= self.dim {
            Ok(k - 1)
        } else {
            Err(self.err(start, format!("variable index {} outside 1..{}", k, self.dim)))
        }
    }
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    at: usize,
    end_pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(t, _)| t)
    }

    fn pos(&self) -> usize {
        self.toks
            .get(self.at)
            .map(|&(_, p)| p + 1)
            .unwrap_or(self.end_pos + 1)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.at).map(|(t, _)| t.clone());
        self.at += 1;
        t
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<()> {
        let pos = self.pos();
        match self.bump() {
            Some(t) if t == want => Ok(()),
            _ => Err(Error::Parse { pos, msg: format!("expected {}", what) }),
        }
    }

    fn expr(&mut self) -> Result<ExprAst> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    let rhs = self.term()?;
                    lhs = ExprAst::Add(Box::new(lhs), Box::new(rhs));
                }
                Some(Tok::Minus) => {
                    self.bump();
                    let rhs = self.term()?;
                    lhs = ExprAst::Sub(Box::new(lhs), Box::new(rhs));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<ExprAst> {
        let mut lhs = self.factor()?;
        while matches!(self.peek(), Some(Tok::Star)) {
            self.bump();
            let rhs = self.factor()?;
            lhs = ExprAst::Mul(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn factor(&mut self) -> Result<ExprAst> {
        if matches!(self.peek(), Some(Tok::Minus)) {
            self.bump();
            let inner = self.factor()?;
            return Ok(ExprAst::Neg(Box::new(inner)));
        }
        let base = self.atom()?;
        if matches!(self.peek(), Some(Tok::Caret)) {
            self.bump();
            let pos = self.pos();
            match self.bump() {
                Some(Tok::Num(r)) if r.is_integer() && !r.numer().sign().eq(&num::bigint::Sign::Minus) => {
                    let e: u32 = r.numer().try_into().map_err(|_| Error::Parse {
                        pos,
                        msg: "exponent too large".into(),
                    })?;
                    Ok(ExprAst::Pow(Box::new(base), e))
                }
                _ => Err(Error::Parse { pos, msg: "expected a non-negative integer exponent".into() }),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<ExprAst> {
        let pos = self.pos();
        match self.bump() {
            Some(Tok::Num(r)) => Ok(ExprAst::Number(r)),
            Some(Tok::Imag) => Ok(ExprAst::ImaginaryUnit),
            Some(Tok::VarZ(k)) => Ok(ExprAst::VarZ(k)),
            Some(Tok::VarE(k)) => Ok(ExprAst::VarE(k)),
            Some(Tok::LParen) => {
                let inner = self.expr()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(inner)
            }
            Some(t) => Err(Error::Parse { pos, msg: format!("unexpected token {:?}", t) }),
            None => Err(Error::Parse { pos, msg: "unexpected end of input".into() }),
        }
    }
}

pub fn parse_ast(text: &str, dim: usize) -> Result<ExprAst> {
    let toks = Lexer::new(text, dim).tokenize()?;
    let end_pos = text.chars().count();
    let mut p = Parser { toks, at: 0, end_pos };
    let ast = p.expr()?;
    if p.at < p.toks.len() {
        return Err(Error::Parse { pos: p.pos(), msg: "trailing input after expression".into() });
    }
    Ok(ast)
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Basis {
    Unknown,
    Z,
    E,
}

fn scan_basis(ast: &ExprAst, found: &mut Basis) -> Result<()> {
    match ast {
        ExprAst::VarZ(_) => match *found {
            Basis::E => Err(Error::Parse {
                pos: 1,
                msg: "z-variables and e-variables cannot be mixed in one expression".into(),
            }),
            _ => {
                *found = Basis::Z;
                Ok(())
            }
        },
        ExprAst::VarE(_) => match *found {
            Basis::Z => Err(Error::Parse {
                pos: 1,
                msg: "z-variables and e-variables cannot be mixed in one expression".into(),
            }),
            _ => {
                *found = Basis::E;
                Ok(())
            }
        },
        ExprAst::Add(a, b) | ExprAst::Sub(a, b) | ExprAst::Mul(a, b) => {
            scan_basis(a, found)?;
            scan_basis(b, found)
        }
        ExprAst::Pow(a, _) | ExprAst::Neg(a) => scan_basis(a, found),
        _ => Ok(()),
    }
}

fn expand_z(ast: &ExprAst, dim: usize, cap: u32, allow_truncation: bool) -> Result<TruncatedSeries> {
    match ast {
        ExprAst::Number(r) => Ok(TruncatedSeries::constant(dim, cap, CRat::from_rat(r.clone()))),
        ExprAst::ImaginaryUnit => Ok(TruncatedSeries::constant(dim, cap, CRat::i())),
        ExprAst::VarZ(k) => Ok(TruncatedSeries::variable(dim, cap, *k)),
        ExprAst::VarE(_) => unreachable!("basis scan rejects e-vars here"),
        ExprAst::Add(a, b) => expand_z(a, dim, cap, allow_truncation)?
            .add(&expand_z(b, dim, cap, allow_truncation)?),
        ExprAst::Sub(a, b) => expand_z(a, dim, cap, allow_truncation)?
            .sub(&expand_z(b, dim, cap, allow_truncation)?),
        ExprAst::Mul(a, b) => expand_z(a, dim, cap, allow_truncation)?
            .mul(&expand_z(b, dim, cap, allow_truncation)?),
        ExprAst::Pow(a, e) => {
            let base = expand_z(a, dim, cap, allow_truncation)?;
            if !allow_truncation {
                if let Some(deg) = base.degree() {
                    if deg > 0 && deg.saturating_mul(*e) > cap {
                        return Err(Error::precondition(format!(
                            "exponent {} overflows cap {} (base degree {}); rerun with truncation allowed",
                            e, cap, deg
                        )));
                    }
                }
            }
            base.pow(*e)
        }
        ExprAst::Neg(a) => Ok(expand_z(a, dim, cap, allow_truncation)?.neg()),
    }
}

fn expand_e(ast: &ExprAst, dim: usize, cap_w: u32) -> Result<ElementarySeries> {
    match ast {
        ExprAst::Number(r) => Ok(ElementarySeries::constant(dim, cap_w, CRat::from_rat(r.clone()))),
        ExprAst::ImaginaryUnit => Ok(ElementarySeries::constant(dim, cap_w, CRat::i())),
        ExprAst::VarE(k) => Ok(ElementarySeries::variable(dim, cap_w, *k)),
        ExprAst::VarZ(_) => unreachable!("basis scan rejects z-vars here"),
        ExprAst::Add(a, b) => expand_e(a, dim, cap_w)?.add(&expand_e(b, dim, cap_w)?),
        ExprAst::Sub(a, b) => expand_e(a, dim, cap_w)?.sub(&expand_e(b, dim, cap_w)?),
        ExprAst::Mul(a, b) => expand_e(a, dim, cap_w)?.mul(&expand_e(b, dim, cap_w)?),
        ExprAst::Pow(a, e) => expand_e(a, dim, cap_w)?.pow(*e),
        ExprAst::Neg(a) => Ok(expand_e(a, dim, cap_w)?.neg()),
    }
}

/// Parse an expression and expand it exactly into either basis.
pub fn parse(text: &str, dim: usize, cap: u32, allow_truncation: bool) -> Result<ParsedSeries> {
    let ast = parse_ast(text, dim)?;
    let mut basis = Basis::Unknown;
    scan_basis(&ast, &mut basis)?;
    match basis {
        Basis::E => Ok(ParsedSeries::E(expand_e(&ast, dim, cap)?)),
        _ => Ok(ParsedSeries::Z(expand_z(&ast, dim, cap, allow_truncation)?)),
    }
}

fn render_coeff(c: &CRat) -> String {
    if c.im.is_zero() {
        format!("{}", c.re)
    } else if c.re.is_zero() {
        format!("{}*i", c.im)
    } else {
        format!("({}+{}*i)", c.re, c.im)
    }
}

fn render_monomial(vars: &str, m: &crate::series::Monomial) -> String {
    let mut parts = Vec::new();
    for (k, &e) in m.0.iter().enumerate() {
        match e {
            0 => {}
            1 => parts.push(format!("{}{}", vars, k + 1)),
            _ => parts.push(format!("{}{}^{}", vars, k + 1, e)),
        }
    }
    parts.join("*")
}

/// Expression text that reparses to the same series.
pub fn render_expr(f: &TruncatedSeries) -> String {
    render_terms("z", f.terms())
}

pub fn render_expr_elementary(q: &ElementarySeries) -> String {
    render_terms("e", q.terms())
}

fn render_terms(
    vars: &str,
    terms: &std::collections::BTreeMap<crate::series::Monomial, CRat>,
) -> String {
    if terms.is_empty() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (i, (m, c)) in terms.iter().enumerate() {
        let mono = render_monomial(vars, m);
        let coeff = render_coeff(c);
        let piece = if mono.is_empty() {
            coeff
        } else if *c == CRat::one() {
            mono
        } else {
            format!("{}*{}", coeff, mono)
        };
        if i == 0 {
            out.push_str(&piece);
        } else if piece.starts_with('-') {
            out.push_str(&format!("+({})", piece));
        } else {
            out.push('+');
            out.push_str(&piece);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;
    use crate::series::Monomial;

    fn mono(e: &[u32]) -> Monomial {
        Monomial(e.to_vec())
    }

    fn parse_z(text: &str, dim: usize, cap: u32) -> TruncatedSeries {
        match parse(text, dim, cap, false).unwrap() {
            ParsedSeries::Z(s) => s,
            ParsedSeries::E(_) => panic!("expected z-basis"),
        }
    }

    fn parse_e(text: &str, dim: usize, cap: u32) -> ElementarySeries {
        match parse(text, dim, cap, false).unwrap() {
            ParsedSeries::E(s) => s,
            ParsedSeries::Z(_) => panic!("expected e-basis"),
        }
    }

    #[test]
    fn parse_two_square_terms() {
        let f = parse_z("z^2+w^2", 2, 4);
        assert_eq!(f.terms().len(), 2);
        assert_eq!(f.coeff(&mono(&[2, 0])), CRat::from_int(1));
    }

    #[test]
    fn parse_golden_identity() {
        let lhs = parse_z("(z+w)^2-2*z*w", 2, 4);
        let rhs = parse_z("z^2+w^2", 2, 4);
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn parse_elementary_expression() {
        let q = parse_e("s1^2-2*s2", 2, 4);
        assert_eq!(q.coeff(&mono(&[2, 0])), CRat::from_int(1));
        assert_eq!(q.coeff(&mono(&[0, 1])), CRat::from_int(-2));
    }

    #[test]
    fn parse_rational_and_decimal_literals() {
        let f = parse_z("1/2*z+0.25*w", 2, 2);
        assert_eq!(f.coeff(&mono(&[1, 0])), CRat::from_rat(rat(1, 2)));
        assert_eq!(f.coeff(&mono(&[0, 1])), CRat::from_rat(rat(1, 4)));
    }

    #[test]
    fn parse_imaginary_unit() {
        let f = parse_z("i*z", 1, 1);
        assert_eq!(f.coeff(&mono(&[1])), CRat::i());
    }

    #[test]
    fn mixed_basis_rejected() {
        assert!(parse("z1+e1", 2, 2, false).is_err());
    }

    #[test]
    fn juxtaposition_rejected() {
        assert!(parse("2z", 2, 2, false).is_err());
        // "zw" lexes as variable z followed by w with no operator
        assert!(parse("z w", 2, 2, false).is_err());
    }

    #[test]
    fn error_positions_are_one_based() {
        match parse("z+?", 2, 2, false) {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 3),
            other => panic!("expected parse error, got {:?}", other),
        }
    }

    #[test]
    fn overflowing_power_needs_flag() {
        assert!(parse("z^5", 1, 3, false).is_err());
        assert!(parse("z^5", 1, 3, true).is_ok());
    }

    #[test]
    fn render_round_trip() {
        let f = parse_z("(z+w)^3-1/3*z*w+i*w^2", 2, 4);
        let text = render_expr(&f);
        let back = parse_z(&text, 2, 4);
        assert_eq!(back, f);
    }

    #[test]
    fn render_zero() {
        assert_eq!(render_expr(&TruncatedSeries::zero(2, 2)), "0");
    }
}
