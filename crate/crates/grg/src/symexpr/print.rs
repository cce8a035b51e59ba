//! Expression printing.
//!
//! Output follows the same grammar the parser reads: `Name[arg]`
//! applications, `^` powers, explicit `*`, quotients gathered into a single
//! `/`, half-integer powers shown through `Sqrt[...]`, opaque partials as
//! `f^(2,0,1)[r,u,v]`. Printing a canonical expression and parsing it back
//! is a fixed point.

use super::{Expr, OpaqueFn};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};
use std::fmt;

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", print_expr(self))
    }
}

pub(crate) fn print_expr(e: &Expr) -> String {
    match e {
        Expr::Sum(ts) => {
            let mut out = String::new();
            for (i, t) in ts.iter().enumerate() {
                let (neg, body) = signed_term(t);
                if i == 0 {
                    if neg {
                        out.push('-');
                    }
                } else if neg {
                    out.push_str(" - ");
                } else {
                    out.push_str(" + ");
                }
                out.push_str(&body);
            }
            out
        }
        other => {
            let (neg, body) = signed_term(other);
            if neg {
                format!("-{body}")
            } else {
                body
            }
        }
    }
}

/// Splits a term's leading rational sign from its printed magnitude.
fn signed_term(e: &Expr) -> (bool, String) {
    match e {
        Expr::Rational(r) if r.is_negative() => (true, print_term(&Expr::Rational(-r.clone()))),
        Expr::Product(fs) => {
            if let Some(Expr::Rational(r)) = fs.first() {
                if r.is_negative() {
                    let mut rest: Vec<Expr> = fs.clone();
                    rest[0] = Expr::Rational(-r.clone());
                    // Rebuild without the constructor: the sign flip cannot
                    // change canonical structure beyond possibly a unit
                    // coefficient.
                    let body = if rest[0].is_one() && rest.len() > 1 {
                        let tail = rest.split_off(1);
                        if tail.len() == 1 {
                            print_term(&tail[0])
                        } else {
                            print_term(&Expr::Product(tail))
                        }
                    } else {
                        print_term(&Expr::Product(rest))
                    };
                    return (true, body);
                }
            }
            (false, print_term(e))
        }
        _ => (false, print_term(e)),
    }
}

/// Prints a non-sum term as `num/den`, gathering negative powers under the
/// slash.
fn print_term(e: &Expr) -> String {
    let mut factors: Vec<&Expr> = match e {
        Expr::Product(fs) => fs.iter().collect(),
        other => vec![other],
    };
    // Order by base so `r^2*Sin[theta]` beats `Sin[theta]*r^2`; the parser
    // restores the canonical internal order on round trip.
    fn base_of(e: &Expr) -> &Expr {
        match e {
            Expr::Power(b, _) => b,
            other => other,
        }
    }
    factors.sort_by(|x, y| base_of(x).cmp(base_of(y)));
    let mut num: Vec<String> = Vec::new();
    let mut den: Vec<String> = Vec::new();
    for f in factors {
        match f {
            Expr::Rational(r) if !r.is_integer() => {
                let n = r.numer();
                if !n.is_one() {
                    num.push(n.to_string());
                }
                den.push(r.denom().to_string());
            }
            Expr::Power(b, x) => match power_side(b, x) {
                PowerSide::Num(s) => num.push(s),
                PowerSide::Den(s) => den.push(s),
            },
            other => num.push(print_factor(other)),
        }
    }
    let num_s = if num.is_empty() {
        "1".to_string()
    } else {
        num.join("*")
    };
    if den.is_empty() {
        return num_s;
    }
    let den_s = if den.len() == 1 {
        den[0].clone()
    } else {
        format!("({})", den.join("*"))
    };
    format!("{num_s}/{den_s}")
}

enum PowerSide {
    Num(String),
    Den(String),
}

/// Decides which side of the slash a power belongs on and renders it.
fn power_side(base: &Expr, exp: &Expr) -> PowerSide {
    if let Some(q) = exp.as_rational() {
        if q.is_negative() {
            let pos = -q.clone();
            let flipped = if pos.is_one() {
                base.clone()
            } else {
                Expr::Power(Box::new(base.clone()), Box::new(Expr::Rational(pos)))
            };
            return PowerSide::Den(print_factor(&flipped));
        }
    }
    PowerSide::Num(print_factor(&Expr::Power(
        Box::new(base.clone()),
        Box::new(exp.clone()),
    )))
}

/// Prints one multiplicand with the parentheses it needs in that position.
fn print_factor(e: &Expr) -> String {
    match e {
        Expr::Rational(r) => {
            if r.is_negative() || !r.is_integer() {
                format!("({})", print_rational(r))
            } else {
                r.numer().to_string()
            }
        }
        Expr::I => "I".to_string(),
        Expr::Symbol(s) => s.name().to_string(),
        Expr::Fn(kind, a) => format!("{}[{}]", kind.name(), print_expr(a)),
        Expr::Opaque(o) => print_opaque(o),
        Expr::Sum(_) => format!("({})", print_expr(e)),
        Expr::Product(_) => format!("({})", print_expr(e)),
        Expr::Power(b, x) => {
            if let Some(q) = x.as_rational() {
                let half = BigRational::new(BigInt::from(1), BigInt::from(2));
                if *q == half {
                    return format!("Sqrt[{}]", print_expr(b));
                }
            }
            format!("{}^{}", print_base(b), print_exponent(x))
        }
    }
}

fn print_base(b: &Expr) -> String {
    match b {
        Expr::Rational(r) if !r.is_negative() && r.is_integer() => r.numer().to_string(),
        Expr::Symbol(_) | Expr::I | Expr::Fn(_, _) | Expr::Opaque(_) => print_factor(b),
        _ => format!("({})", print_expr(b)),
    }
}

fn print_exponent(x: &Expr) -> String {
    match x {
        Expr::Rational(r) if r.is_integer() && !r.is_negative() => r.numer().to_string(),
        Expr::Symbol(s) => s.name().to_string(),
        _ => format!("({})", print_expr(x)),
    }
}

fn print_rational(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn print_opaque(o: &OpaqueFn) -> String {
    let args: Vec<&str> = o.args.iter().map(|a| a.name()).collect();
    if o.orders.iter().all(|&k| k == 0) {
        format!("{}[{}]", o.name.name(), args.join(","))
    } else {
        let orders: Vec<String> = o.orders.iter().map(u32::to_string).collect();
        format!(
            "{}^({})[{}]",
            o.name.name(),
            orders.join(","),
            args.join(",")
        )
    }
}
