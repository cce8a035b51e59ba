//! Expression parser.
//!
//! Grammar: identifiers `[A-Za-z][A-Za-z0-9]*`; integers (rationals arrive
//! as quotients); `+ - * / ^` with standard precedence, `^` right
//! associative; application `Name[...]` or `Name(...)`; `I` for the
//! imaginary unit; opaque partials `f^(2,0,1)[r,u,v]`; `Dt[x]` differential
//! tokens (an opaque application, used by line-element input).
//!
//! `parse` returns the cheap canonical form, so `1/2` folds to a rational
//! constant but `Sin[x]^2 + Cos[x]^2` stays a two-term sum.

use super::{Expr, FnKind, OpaqueFn, Symbol};
use num_bigint::BigInt;
use std::fmt;
use std::ops::Neg;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub pos: usize,
    pub msg: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "parse error at byte {}: {}", self.pos, self.msg)
    }
}

impl std::error::Error for ParseError {}

pub fn parse(text: &str) -> Result<Expr, ParseError> {
    let toks = lex(text)?;
    let mut p = Parser { toks, i: 0 };
    let e = p.expr()?;
    match p.peek() {
        Tok::End => Ok(e),
        _ => Err(p.err("unexpected trailing input")),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(BigInt),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    LBrack,
    RBrack,
    Comma,
    End,
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        let start = i;
        match c {
            ' ' | '\t' | '\n' | '\r' => {
                i += 1;
                continue;
            }
            '+' => out.push((start, Tok::Plus)),
            '-' => out.push((start, Tok::Minus)),
            '*' => out.push((start, Tok::Star)),
            '/' => out.push((start, Tok::Slash)),
            '^' => out.push((start, Tok::Caret)),
            '(' => out.push((start, Tok::LParen)),
            ')' => out.push((start, Tok::RParen)),
            '[' => out.push((start, Tok::LBrack)),
            ']' => out.push((start, Tok::RBrack)),
            ',' => out.push((start, Tok::Comma)),
            '0'..='9' => {
                let mut j = i;
                while j < bytes.len() && bytes[j].is_ascii_digit() {
                    j += 1;
                }
                if j < bytes.len() && bytes[j] == b'.' {
                    return Err(ParseError {
                        pos: j,
                        msg: "floating-point literals are not part of the grammar".into(),
                    });
                }
                let n = BigInt::parse_bytes(&bytes[i..j], 10).unwrap();
                out.push((start, Tok::Int(n)));
                i = j;
                continue;
            }
            'A'..='Z' | 'a'..='z' => {
                let mut j = i;
                while j < bytes.len() && bytes[j].is_ascii_alphanumeric() {
                    j += 1;
                }
                out.push((start, Tok::Ident(text[i..j].to_string())));
                i = j;
                continue;
            }
            _ => {
                return Err(ParseError {
                    pos: i,
                    msg: format!("unexpected character `{c}`"),
                })
            }
        }
        i += 1;
    }
    out.push((bytes.len(), Tok::End));
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    i: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.i].1
    }

    fn pos(&self) -> usize {
        self.toks[self.i].0
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.i].1.clone();
        if self.i + 1 < self.toks.len() {
            self.i += 1;
        }
        t
    }

    fn err(&self, msg: &str) -> ParseError {
        ParseError {
            pos: self.pos(),
            msg: msg.to_string(),
        }
    }

    fn expect(&mut self, t: Tok, what: &str) -> Result<(), ParseError> {
        if *self.peek() == t {
            self.bump();
            Ok(())
        } else {
            Err(self.err(&format!("expected {what}")))
        }
    }

    /// sum := term (('+'|'-') term)*
    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut terms = vec![self.term()?];
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    terms.push(self.term()?);
                }
                Tok::Minus => {
                    self.bump();
                    terms.push(self.term()?.neg());
                }
                _ => break,
            }
        }
        Ok(Expr::sum(terms))
    }

    /// term := factor (('*'|'/') factor)*
    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut factors = vec![self.factor()?];
        loop {
            match self.peek() {
                Tok::Star => {
                    self.bump();
                    factors.push(self.factor()?);
                }
                Tok::Slash => {
                    self.bump();
                    factors.push(self.factor()?.recip());
                }
                _ => break,
            }
        }
        Ok(Expr::product(factors))
    }

    /// factor := ('+'|'-')* power
    fn factor(&mut self) -> Result<Expr, ParseError> {
        match self.peek() {
            Tok::Minus => {
                self.bump();
                Ok(self.factor()?.neg())
            }
            Tok::Plus => {
                self.bump();
                self.factor()
            }
            _ => self.power(),
        }
    }

    /// power := applied ('^' factor)?   (right associative via factor)
    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.applied()?;
        if *self.peek() != Tok::Caret {
            return Ok(base);
        }
        // `f^(2,0,1)[x,y,z]` — a partial-order postfix, only on a bare
        // identifier and only when the parenthesized integers are followed
        // by an argument list. Otherwise `^` is ordinary exponentiation.
        if let Expr::Symbol(name) = &base {
            let save = self.i;
            if let Some(e) = self.try_partial_postfix(name.clone())? {
                return Ok(e);
            }
            self.i = save;
        }
        self.bump(); // ^
        let exp = self.factor()?;
        Ok(Expr::power(base, exp))
    }

    /// Attempts `^ ( n, n, ... ) [ args ]`; returns Ok(None) to backtrack.
    fn try_partial_postfix(&mut self, name: Symbol) -> Result<Option<Expr>, ParseError> {
        debug_assert_eq!(*self.peek(), Tok::Caret);
        self.bump();
        if *self.peek() != Tok::LParen {
            return Ok(None);
        }
        self.bump();
        let mut orders: Vec<u32> = Vec::new();
        loop {
            match self.bump() {
                Tok::Int(n) => {
                    let Ok(o) = u32::try_from(n.clone()) else {
                        return Ok(None);
                    };
                    orders.push(o);
                }
                _ => return Ok(None),
            }
            match self.bump() {
                Tok::Comma => continue,
                Tok::RParen => break,
                _ => return Ok(None),
            }
        }
        let open = match self.peek() {
            Tok::LBrack => Tok::RBrack,
            Tok::LParen => Tok::RParen,
            _ => return Ok(None),
        };
        self.bump();
        let args = self.symbol_args(&open)?;
        if args.len() != orders.len() {
            return Err(self.err(&format!(
                "partial orders ({}) and arguments ({}) disagree in length",
                orders.len(),
                args.len()
            )));
        }
        if FnKind::from_name(name.name()).is_some() {
            return Err(self.err("partial orders apply to opaque functions only"));
        }
        Ok(Some(Expr::Opaque(OpaqueFn {
            name,
            args,
            orders,
        })))
    }

    fn symbol_args(&mut self, close: &Tok) -> Result<Vec<Symbol>, ParseError> {
        let mut args = Vec::new();
        loop {
            match self.bump() {
                Tok::Ident(n) => args.push(Symbol::new(&n)),
                _ => return Err(self.err("opaque-function arguments must be symbols")),
            }
            let t = self.bump();
            if t == *close {
                return Ok(args);
            }
            if t != Tok::Comma {
                return Err(self.err("opaque-function arguments must be bare symbols separated by `,`"));
            }
        }
    }

    /// applied := primary | Ident '[' args ']' | Ident '(' args ')'
    fn applied(&mut self) -> Result<Expr, ParseError> {
        let name = match self.peek() {
            Tok::Ident(n) => n.clone(),
            _ => return self.primary(),
        };
        // Application only when the identifier is immediately followed by a
        // bracket; a lone identifier falls through to `primary`.
        let next = &self.toks[self.i + 1].1;
        let close = match next {
            Tok::LBrack => Tok::RBrack,
            Tok::LParen => Tok::RParen,
            _ => return self.primary(),
        };
        // `(x+y)*z` style grouping is NOT application; but `Ident(...)` is,
        // per the input grammar. Distinguish known functions and opaque use.
        let at = self.pos();
        self.bump(); // ident
        self.bump(); // open bracket
        if let Some(kind) = FnKind::from_name(&name) {
            let arg = self.expr()?;
            self.expect(close, "closing bracket after function argument")?;
            return Ok(Expr::fun(kind, arg));
        }
        if name == "I" {
            return Err(ParseError {
                pos: at,
                msg: "`I` is the imaginary unit, not a function".into(),
            });
        }
        let args = self.symbol_args(&close)?;
        let orders = vec![0; args.len()];
        Ok(Expr::Opaque(OpaqueFn {
            name: Symbol::new(&name),
            args,
            orders,
        }))
    }

    fn primary(&mut self) -> Result<Expr, ParseError> {
        let pos = self.pos();
        match self.bump() {
            Tok::Int(n) => Ok(Expr::Rational(num_rational::BigRational::from_integer(n))),
            Tok::Ident(n) => {
                if n == "I" {
                    Ok(Expr::I)
                } else {
                    Ok(Expr::Symbol(Symbol::new(&n)))
                }
            }
            Tok::LParen => {
                let e = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(e)
            }
            _ => Err(ParseError {
                pos,
                msg: "expected a number, symbol, function, or `(`".into(),
            }),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_with_inverse_power() {
        let e = parse("2*M/r^3").unwrap();
        let want = Expr::int(2) * Expr::sym("M") / Expr::power(Expr::sym("r"), Expr::int(3));
        assert_eq!(e, want);
    }

    #[test]
    fn trig_sum_stays_two_terms() {
        let e = parse("Sin[x]^2 + Cos[x]^2").unwrap();
        match &e {
            Expr::Sum(ts) => assert_eq!(ts.len(), 2),
            other => panic!("expected two-term sum, got {other:?}"),
        }
    }

    #[test]
    fn imaginary_unit_squares_away() {
        assert_eq!(parse("I^2").unwrap(), Expr::int(-1));
        assert_eq!(parse("I*I").unwrap(), Expr::int(-1));
    }

    #[test]
    fn rational_literals_fold() {
        assert_eq!(parse("1/2").unwrap(), Expr::rational(1, 2));
        assert_eq!(parse("-3/6").unwrap(), Expr::rational(-1, 2));
    }

    #[test]
    fn paren_application_matches_bracket() {
        assert_eq!(parse("Sin(x)").unwrap(), parse("Sin[x]").unwrap());
        assert_eq!(parse("cosh[y]").unwrap(), parse("Cosh[y]").unwrap());
    }

    #[test]
    fn opaque_partials_round_shape() {
        let e = parse("f^(2,0,1)[r,u,v]").unwrap();
        match &e {
            Expr::Opaque(o) => {
                assert_eq!(o.orders, vec![2, 0, 1]);
                assert_eq!(o.args.len(), 3);
            }
            other => panic!("expected opaque, got {other:?}"),
        }
        // Plain opaque application.
        let f = parse("f[x,y]").unwrap();
        match &f {
            Expr::Opaque(o) => assert_eq!(o.orders, vec![0, 0]),
            other => panic!("expected opaque, got {other:?}"),
        }
    }

    #[test]
    fn caret_paren_backtracks_to_exponent() {
        let e = parse("r^(1/2)").unwrap();
        assert_eq!(e, Expr::power(Expr::sym("r"), Expr::rational(1, 2)));
        let e2 = parse("f^(2)").unwrap();
        assert_eq!(e2, Expr::power(Expr::sym("f"), Expr::int(2)));
    }

    #[test]
    fn precedence_and_associativity() {
        assert_eq!(
            parse("2 + 3*x").unwrap(),
            Expr::int(2) + Expr::int(3) * Expr::sym("x")
        );
        // Right-associative power: 2^3^2 = 2^9.
        assert_eq!(parse("2^3^2").unwrap(), Expr::int(512));
        // Unary minus binds looser than power.
        assert_eq!(
            parse("-x^2").unwrap(),
            Expr::power(Expr::sym("x"), Expr::int(2)).neg()
        );
        // Exponent may carry a sign.
        assert_eq!(
            parse("r^-2").unwrap(),
            Expr::power(Expr::sym("r"), Expr::int(-2))
        );
    }

    #[test]
    fn dt_tokens_are_opaque_markers() {
        let e = parse("Dt[r]^2 + r^2*Dt[phi]^2").unwrap();
        match &e {
            Expr::Sum(ts) => assert_eq!(ts.len(), 2),
            other => panic!("expected sum, got {other:?}"),
        }
    }

    #[test]
    fn errors_carry_positions() {
        let err = parse("2*+ *x").unwrap_err();
        assert!(err.pos > 0);
        let err2 = parse("Sin[x").unwrap_err();
        assert!(err2.msg.contains("closing"));
        let err3 = parse("2.5*x").unwrap_err();
        assert!(err3.msg.contains("floating"));
        let err4 = parse("Foo[x+y]").unwrap_err();
        assert!(err4.msg.contains("symbols"));
    }

    #[test]
    fn whitespace_is_insignificant() {
        assert_eq!(parse(" 2 * M / r ^ 3 ").unwrap(), parse("2*M/r^3").unwrap());
    }
}
