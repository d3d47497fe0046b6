use std::collections::BTreeMap;

use num_rational::Ratio;

use super::ast::{BinOp, Expr, Func};
use super::lexer::{tokenize, Tok, Token};
use crate::error::ParseError;

/// A chart written in the expression language, before scalar specialization.
#[derive(Clone, Debug, PartialEq)]
pub struct DslSource {
    pub dim: usize,
    /// Ambient coordinates `x1..x{dim+1}` in order.
    pub components: Vec<Expr>,
    pub params: BTreeMap<String, f64>,
}

impl DslSource {
    /// Canonical text; reparsing it yields an equal source.
    pub fn to_text(&self) -> String {
        let mut s = format!("dim {};\n", self.dim);
        for (k, v) in &self.params {
            s.push_str(&format!("param {k} = {v:?};\n"));
        }
        for (i, e) in self.components.iter().enumerate() {
            s.push_str(&format!("x{} = {e};\n", i + 1));
        }
        s
    }
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
    var_uses: Vec<(usize, usize, usize)>,
    param_uses: Vec<(String, usize, usize)>,
}

fn err(t: &Token, msg: impl Into<String>) -> ParseError {
    ParseError::new(t.line, t.col, msg)
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Num(s) => format!("number {s}"),
        Tok::Ident(s) => format!("identifier '{s}'"),
        Tok::Eof => "end of input".into(),
        other => format!("'{}'", match other {
            Tok::Plus => "+",
            Tok::Minus => "-",
            Tok::Star => "*",
            Tok::Slash => "/",
            Tok::Caret => "^",
            Tok::LParen => "(",
            Tok::RParen => ")",
            Tok::Semi => ";",
            _ => "=",
        }),
    }
}

fn indexed(name: &str, prefix: char) -> Option<usize> {
    let rest = name.strip_prefix(prefix)?;
    if rest.is_empty() || !rest.chars().all(|c| c.is_ascii_digit()) || rest.starts_with('0') {
        return None;
    }
    rest.parse().ok()
}

/// Exact rational value of a decimal literal such as `2.5` or `1e-2`.
fn decimal_ratio(text: &str) -> Option<Ratio<i64>> {
    let (mant, exp) = match text.find(['e', 'E']) {
        Some(k) => (&text[..k], text[k + 1..].parse::<i32>().ok()?),
        None => (text, 0),
    };
    let (int, frac) = mant.split_once('.').unwrap_or((mant, ""));
    let digits: i64 = format!("{int}{frac}").trim_start_matches('0').parse().or_else(|e: std::num::ParseIntError| {
        if format!("{int}{frac}").chars().all(|c| c == '0') { Ok(0) } else { Err(e) }
    }).ok()?;
    let scale = exp - frac.len() as i32;
    let pow = 10i64.checked_pow(scale.unsigned_abs())?;
    Some(if scale >= 0 { Ratio::from_integer(digits.checked_mul(pow)?) } else { Ratio::new(digits, pow) })
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.toks[self.pos]
    }

    fn next(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if &self.peek().tok == tok {
            self.next();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: Tok) -> Result<Token, ParseError> {
        let t = self.next();
        if t.tok == tok {
            Ok(t)
        } else {
            Err(err(&t, format!("expected {}, found {}", describe(&tok), describe(&t.tok))))
        }
    }

    fn number(&mut self) -> Result<(f64, Token), ParseError> {
        let t = self.next();
        match &t.tok {
            Tok::Num(s) => match s.parse::<f64>() {
                Ok(v) if v.is_finite() => Ok((v, t)),
                _ => Err(err(&t, format!("number {s} out of range"))),
            },
            other => Err(err(&t, format!("expected number, found {}", describe(other)))),
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek().tok {
                Tok::Plus => BinOp::Add,
                Tok::Minus => BinOp::Sub,
                _ => return Ok(lhs),
            };
            self.next();
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(self.term()?));
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.factor()?;
        loop {
            let op = match self.peek().tok {
                Tok::Star => BinOp::Mul,
                Tok::Slash => BinOp::Div,
                _ => return Ok(lhs),
            };
            self.next();
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(self.factor()?));
        }
    }

    fn factor(&mut self) -> Result<Expr, ParseError> {
        if self.eat(&Tok::Minus) {
            return Ok(Expr::Neg(Box::new(self.factor()?)));
        }
        let base = self.base()?;
        if self.eat(&Tok::Caret) {
            let r = self.signed_rational()?;
            return Ok(Expr::Pow(Box::new(base), r));
        }
        Ok(base)
    }

    fn signed_rational(&mut self) -> Result<Ratio<i64>, ParseError> {
        let paren = self.eat(&Tok::LParen);
        let neg = self.eat(&Tok::Minus);
        let (_, t) = self.number()?;
        let Tok::Num(text) = &t.tok else { unreachable!() };
        let mut r = decimal_ratio(text).ok_or_else(|| err(&t, "exponent is not a representable rational"))?;
        let denominator_follows = matches!(self.toks.get(self.pos + 1).map(|t| &t.tok), Some(Tok::Num(_)));
        if self.peek().tok == Tok::Slash && denominator_follows {
            self.next();
            let (_, d) = self.number()?;
            let Tok::Num(dt) = &d.tok else { unreachable!() };
            let den = decimal_ratio(dt)
                .filter(|q| q.is_integer() && *q.numer() > 0)
                .ok_or_else(|| err(&d, "exponent denominator must be a positive integer"))?;
            r /= den;
        }
        if paren {
            self.expect(Tok::RParen)?;
        }
        Ok(if neg { -r } else { r })
    }

    /// Body of a parenthesized group whose `(` was just consumed.
    fn group(&mut self, open: &Token) -> Result<Expr, ParseError> {
        let unclosed = |p: &Self, e: ParseError| {
            if p.peek().tok == Tok::Eof {
                err(open, "unclosed '('")
            } else {
                e
            }
        };
        let e = self.expr().map_err(|e| unclosed(self, e))?;
        if self.peek().tok == Tok::Eof {
            return Err(err(open, "unclosed '('"));
        }
        self.expect(Tok::RParen)?;
        Ok(e)
    }

    fn base(&mut self) -> Result<Expr, ParseError> {
        let t = self.next();
        match &t.tok {
            Tok::Num(s) => match s.parse::<f64>() {
                Ok(v) if v.is_finite() => Ok(Expr::Num(v)),
                _ => Err(err(&t, format!("number {s} out of range"))),
            },
            Tok::LParen => self.group(&t),
            Tok::Ident(name) => {
                if let Some(f) = Func::from_name(name) {
                    let open = self.expect(Tok::LParen)?;
                    return Ok(Expr::Func(f, Box::new(self.group(&open)?)));
                }
                if let Some(k) = indexed(name, 'u') {
                    self.var_uses.push((k, t.line, t.col));
                    return Ok(Expr::Var(k - 1));
                }
                self.param_uses.push((name.clone(), t.line, t.col));
                Ok(Expr::Param(name.clone()))
            }
            other => Err(err(&t, format!("expected expression, found {}", describe(other)))),
        }
    }
}

/// Parses chart text into its declared dimension, parameters and components.
pub fn parse_source(src: &str) -> Result<DslSource, ParseError> {
    let mut p = Parser { toks: tokenize(src)?, pos: 0, var_uses: Vec::new(), param_uses: Vec::new() };
    let mut dim: Option<usize> = None;
    let mut params = BTreeMap::new();
    let mut comps: BTreeMap<usize, Expr> = BTreeMap::new();
    loop {
        let t = p.next();
        let name = match &t.tok {
            Tok::Eof => break,
            Tok::Ident(n) => n.clone(),
            other => return Err(err(&t, format!("expected declaration, found {}", describe(other)))),
        };
        match name.as_str() {
            "dim" => {
                let (v, nt) = p.number()?;
                if v.fract() != 0.0 || v < 1.0 || v > 32.0 {
                    return Err(err(&nt, "dimension must be an integer in 1..=32"));
                }
                if dim.is_some() {
                    return Err(err(&t, "duplicate dim declaration"));
                }
                dim = Some(v as usize);
            }
            "param" => {
                let id = p.next();
                let Tok::Ident(pname) = &id.tok else {
                    return Err(err(&id, format!("expected parameter name, found {}", describe(&id.tok))));
                };
                if Func::from_name(pname).is_some() || indexed(pname, 'u').is_some() || indexed(pname, 'x').is_some()
                    || pname == "dim" || pname == "param"
                {
                    return Err(err(&id, format!("'{pname}' is reserved")));
                }
                p.expect(Tok::Eq)?;
                let neg = p.eat(&Tok::Minus);
                let (v, _) = p.number()?;
                if params.insert(pname.clone(), if neg { -v } else { v }).is_some() {
                    return Err(err(&id, format!("duplicate parameter '{pname}'")));
                }
            }
            _ => {
                let Some(k) = indexed(&name, 'x') else {
                    return Err(err(&t, format!("unknown identifier '{name}' (expected dim, param or x<k>)")));
                };
                p.expect(Tok::Eq)?;
                let e = p.expr()?;
                if comps.insert(k, e).is_some() {
                    return Err(err(&t, format!("duplicate component x{k}")));
                }
            }
        }
        p.expect(Tok::Semi)?;
    }
    let eof = p.peek().clone();
    let dim = dim.ok_or_else(|| err(&eof, "missing dim declaration"))?;
    if let Some(&(k, line, col)) = p.var_uses.iter().find(|u| u.0 > dim) {
        return Err(ParseError::new(line, col, format!("unknown identifier 'u{k}' (dim is {dim})")));
    }
    if let Some((name, line, col)) = p.param_uses.iter().find(|u| !params.contains_key(&u.0)) {
        return Err(ParseError::new(*line, *col, format!("unknown identifier '{name}'")));
    }
    let expected: Vec<usize> = (1..=dim + 1).collect();
    if comps.keys().copied().collect::<Vec<_>>() != expected {
        return Err(err(
            &eof,
            format!("component mismatch: dim {dim} needs x1..x{}, found {} component(s)", dim + 1, comps.len()),
        ));
    }
    Ok(DslSource { dim, components: comps.into_values().collect(), params })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn precedence_and_associativity() {
        let s = parse_source("dim 1; x1 = 1 - u1 - 2*u1/3; x2 = -u1^2;").unwrap();
        assert_eq!(s.components[0].to_string(), "1 - u1 - 2 * u1 / 3");
        match &s.components[1] {
            Expr::Neg(inner) => assert!(matches!(**inner, Expr::Pow(..))),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn rational_exponents() {
        let s = parse_source("dim 1; x1 = u1^2/3; x2 = u1^(-1/2) + u1^-2 + u1^0.5;").unwrap();
        assert_eq!(s.components[0], Expr::Pow(Box::new(Expr::Var(0)), Ratio::new(2, 3)));
        assert_eq!(s.components[1].to_string(), "u1^(-1/2) + u1^(-2) + u1^(1/2)");
        let q = parse_source("dim 1; x1 = u1^2/c; x2 = (u1^2) / 3; param c = 2;").unwrap();
        let u1_sq = Expr::Pow(Box::new(Expr::Var(0)), Ratio::from_integer(2));
        assert_eq!(q.components[0], Expr::Bin(BinOp::Div, Box::new(u1_sq.clone()), Box::new(Expr::Param("c".into()))));
        assert_eq!(q.components[1].to_string(), "(u1^2) / 3");
    }

    #[test]
    fn unclosed_parenthesis_reports_position() {
        let e = parse_source("dim 2; x1 = exp(").unwrap_err();
        assert_eq!((e.line, e.col), (1, 16));
        assert!(e.message.contains("unclosed"));
    }

    #[test]
    fn semantic_errors() {
        assert!(parse_source("dim 1; x1 = u2; x2 = 1;").unwrap_err().message.contains("u2"));
        assert!(parse_source("dim 1; x1 = a; x2 = 1;").unwrap_err().message.contains("'a'"));
        assert!(parse_source("dim 2; x1 = u1; x2 = u2;").unwrap_err().message.contains("mismatch"));
        assert!(parse_source("x1 = 1;").unwrap_err().message.contains("dim"));
        assert!(parse_source("dim 1; x1 = 1; x1 = 2; x2 = 0;").is_err());
    }

    #[test]
    fn params_and_comments() {
        let s = parse_source("# flat\ndim 2;\nparam C0 = 1;\nx1 = exp(u1);\nx2 = exp(u2);\nx3 = C0*exp(-u1-u2);\n").unwrap();
        assert_eq!(s.params["C0"], 1.0);
        assert_eq!(parse_source(&s.to_text()).unwrap(), s);
    }

    #[test]
    fn decimal_ratios_are_exact() {
        assert_eq!(decimal_ratio("2.5"), Some(Ratio::new(5, 2)));
        assert_eq!(decimal_ratio("1e-2"), Some(Ratio::new(1, 100)));
        assert_eq!(decimal_ratio("0.0"), Some(Ratio::from_integer(0)));
        assert_eq!(decimal_ratio("3E1"), Some(Ratio::from_integer(30)));
    }
}
