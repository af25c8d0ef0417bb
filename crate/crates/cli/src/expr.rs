//! Rational-function expressions over F_p(t).
//!
//! The grammar is ordinary calculator syntax with the single indeterminate
//! `t`:
//!
//! ```text
//! expr     := term (('+' | '-') term)*
//! term     := unary (('*' | '/') unary)*
//! unary    := '-' unary | power
//! power    := atom ('^' exponent)?
//! exponent := '-'? integer ('^' exponent)?
//! atom     := integer | 't' | '(' expr ')'
//! ```
//!
//! `^` binds tightest and is right-associative, exponents are integer
//! literals (negative allowed), and `*` `/` `+` `-` associate to the left.
//! Evaluation is exact: the tree is folded into a numerator/denominator
//! pair of polynomials and normalized into factored form in one final
//! step, so nothing is ever factored twice.

use weilrec::ff::PrimeField;
use weilrec::poly::{self, Polynomial};
use weilrec::ratfun::RationalFunction;
use weilrec::{Error, Result};

/// Exponent magnitudes above this are rejected at parse time; they would
/// only produce polynomials too large to print anyway.
const MAX_EXPONENT: i64 = 4096;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Token {
    Number(u64),
    Var,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    Open,
    Close,
}

fn tokenize(src: &str) -> Result<Vec<(usize, Token)>> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        match bytes[i] {
            b' ' | b'\t' | b'\r' | b'\n' => i += 1,
            b'0'..=b'9' => {
                let start = i;
                let mut value: u64 = 0;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    value = value
                        .checked_mul(10)
                        .and_then(|v| v.checked_add(u64::from(bytes[i] - b'0')))
                        .ok_or_else(|| Error::Parse {
                            pos: start,
                            msg: "integer literal is too large".into(),
                        })?;
                    i += 1;
                }
                out.push((start, Token::Number(value)));
            }
            b't' => {
                out.push((i, Token::Var));
                i += 1;
            }
            b'+' => {
                out.push((i, Token::Plus));
                i += 1;
            }
            b'-' => {
                out.push((i, Token::Minus));
                i += 1;
            }
            b'*' => {
                out.push((i, Token::Star));
                i += 1;
            }
            b'/' => {
                out.push((i, Token::Slash));
                i += 1;
            }
            b'^' => {
                out.push((i, Token::Caret));
                i += 1;
            }
            b'(' => {
                out.push((i, Token::Open));
                i += 1;
            }
            b')' => {
                out.push((i, Token::Close));
                i += 1;
            }
            _ => {
                let c = src[i..].chars().next().unwrap();
                return Err(Error::Parse {
                    pos: i,
                    msg: format!("unexpected character {c:?}"),
                });
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Debug)]
enum Expr {
    Number(u64),
    Var,
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i64),
}

struct Parser<'a> {
    tokens: &'a [(usize, Token)],
    end: usize,
    at: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<Token> {
        self.tokens.get(self.at).map(|&(_, t)| t)
    }

    /// Byte position of the current token, or one past the source on EOF.
    fn pos(&self) -> usize {
        self.tokens.get(self.at).map_or(self.end, |&(p, _)| p)
    }

    fn eat(&mut self, t: Token) -> bool {
        if self.peek() == Some(t) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn fail<T>(&self, msg: &str) -> Result<T> {
        Err(Error::Parse {
            pos: self.pos(),
            msg: msg.into(),
        })
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            if self.eat(Token::Plus) {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat(Token::Minus) {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat(Token::Star) {
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
            } else if self.eat(Token::Slash) {
                lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.eat(Token::Minus) {
            Ok(Expr::Neg(Box::new(self.unary()?)))
        } else {
            self.power()
        }
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if self.eat(Token::Caret) {
            let e = self.exponent()?;
            Ok(Expr::Pow(Box::new(base), e))
        } else {
            Ok(base)
        }
    }

    /// An integer exponent; towers like `2^3` stay on the integer level and
    /// associate to the right, a leading `-` applies to the whole tower.
    fn exponent(&mut self) -> Result<i64> {
        let negate = self.eat(Token::Minus);
        let pos = self.pos();
        let n = match self.peek() {
            Some(Token::Number(n)) => {
                self.at += 1;
                n
            }
            _ => return self.fail("expected an integer exponent"),
        };
        let mut value = i64::try_from(n).map_err(|_| Error::Parse {
            pos,
            msg: "exponent is too large".into(),
        })?;
        if self.eat(Token::Caret) {
            let rhs = self.exponent()?;
            let power = u32::try_from(rhs).map_err(|_| Error::Parse {
                pos,
                msg: "exponent towers must use nonnegative exponents".into(),
            })?;
            value = value.checked_pow(power).ok_or_else(|| Error::Parse {
                pos,
                msg: "exponent is too large".into(),
            })?;
        }
        if value.abs() > MAX_EXPONENT {
            return Err(Error::Parse {
                pos,
                msg: format!("exponent magnitude exceeds {MAX_EXPONENT}"),
            });
        }
        Ok(if negate { -value } else { value })
    }

    fn atom(&mut self) -> Result<Expr> {
        match self.peek() {
            Some(Token::Number(n)) => {
                self.at += 1;
                Ok(Expr::Number(n))
            }
            Some(Token::Var) => {
                self.at += 1;
                Ok(Expr::Var)
            }
            Some(Token::Open) => {
                self.at += 1;
                let inner = self.expr()?;
                if self.eat(Token::Close) {
                    Ok(inner)
                } else {
                    self.fail("expected ')'")
                }
            }
            _ => self.fail("expected a number, 't', or '('"),
        }
    }
}

fn poly_pow(p: &Polynomial, e: u64) -> Polynomial {
    let mut acc = Polynomial::one(p.field());
    let mut square = p.clone();
    let mut e = e;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc.mul(&square);
        }
        square = square.mul(&square);
        e >>= 1;
    }
    acc
}

/// Folds the tree into an exact numerator/denominator pair; nothing is
/// reduced or factored yet.
fn eval(expr: &Expr, field: PrimeField) -> Result<(Polynomial, Polynomial)> {
    let one = Polynomial::one(field);
    match expr {
        Expr::Number(n) => {
            let c = n % field.order();
            Ok((Polynomial::constant(field, c as i64), one))
        }
        Expr::Var => Ok((Polynomial::var(field), one)),
        Expr::Neg(inner) => {
            let (num, den) = eval(inner, field)?;
            Ok((num.neg(), den))
        }
        Expr::Add(lhs, rhs) => {
            let (n1, d1) = eval(lhs, field)?;
            let (n2, d2) = eval(rhs, field)?;
            Ok((n1.mul(&d2).add(&n2.mul(&d1)), d1.mul(&d2)))
        }
        Expr::Sub(lhs, rhs) => {
            let (n1, d1) = eval(lhs, field)?;
            let (n2, d2) = eval(rhs, field)?;
            Ok((n1.mul(&d2).sub(&n2.mul(&d1)), d1.mul(&d2)))
        }
        Expr::Mul(lhs, rhs) => {
            let (n1, d1) = eval(lhs, field)?;
            let (n2, d2) = eval(rhs, field)?;
            Ok((n1.mul(&n2), d1.mul(&d2)))
        }
        Expr::Div(lhs, rhs) => {
            let (n1, d1) = eval(lhs, field)?;
            let (n2, d2) = eval(rhs, field)?;
            if n2.is_zero() {
                return Err(Error::DivisionByZero);
            }
            Ok((n1.mul(&d2), d1.mul(&n2)))
        }
        Expr::Pow(base, e) => {
            let (num, den) = eval(base, field)?;
            if *e >= 0 {
                Ok((poly_pow(&num, *e as u64), poly_pow(&den, *e as u64)))
            } else {
                if num.is_zero() {
                    return Err(Error::DivisionByZero);
                }
                Ok((poly_pow(&den, e.unsigned_abs()), poly_pow(&num, e.unsigned_abs())))
            }
        }
    }
}

fn parse_tree(src: &str) -> Result<Expr> {
    let tokens = tokenize(src)?;
    let mut parser = Parser {
        tokens: &tokens,
        end: src.len(),
        at: 0,
    };
    let tree = parser.expr()?;
    if parser.at < tokens.len() {
        return parser.fail("unexpected trailing input");
    }
    Ok(tree)
}

/// Parses an expression and normalizes it into factored form over F_p(t).
#[allow(dead_code)] // the driver always threads --seed through parse_seeded
pub fn parse(src: &str, p: u64) -> Result<RationalFunction> {
    parse_seeded(src, p, poly::DEFAULT_FACTOR_SEED)
}

/// [`parse`] with an explicit seed for the factorization step.
pub fn parse_seeded(src: &str, p: u64, seed: u64) -> Result<RationalFunction> {
    let field = PrimeField::new(p)?;
    let (num, den) = eval(&parse_tree(src)?, field)?;
    RationalFunction::normalize_seeded(&num, &den, seed)
}

/// Parses an expression that must evaluate to a polynomial (the
/// denominator reduces to a constant).  Used for closed-point generators,
/// where no factorization is wanted.
pub fn parse_polynomial(src: &str, p: u64) -> Result<Polynomial> {
    let field = PrimeField::new(p)?;
    let (num, den) = eval(&parse_tree(src)?, field)?;
    if den.degree() > 0 {
        let (quot, rem) = num.divrem(&den)?;
        if !rem.is_zero() {
            return Err(Error::BadInput(
                "expression is not a polynomial".into(),
            ));
        }
        return Ok(quot);
    }
    let c = den.coeff(0);
    let inv = field.inv(c)?;
    Ok(num.scale(inv))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn f(p: u64, src: &str) -> RationalFunction {
        parse(src, p).unwrap()
    }

    #[test]
    fn cancellation_example() {
        // (t^2+1) = (t+2)(t+3) over F_5 and (t-2) = (t+3), so the quotient
        // collapses to the single factor t+2.
        let g = f(5, "(t^2+1)/(t-2)");
        assert_eq!(g.constant(), 1);
        let factors: Vec<(String, i64)> = g
            .factors()
            .iter()
            .map(|(p, &e)| (p.to_string(), e))
            .collect();
        assert_eq!(factors, vec![("t+2".to_string(), 1)]);
    }

    #[test]
    fn plain_variable() {
        assert_eq!(f(7, "t"), RationalFunction::var(PrimeField::new(7).unwrap()));
    }

    #[test]
    fn syntax_error_positions() {
        match parse("t/", 5) {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 2),
            other => panic!("expected a syntax error, got {other:?}"),
        }
        match parse("", 5) {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 0),
            other => panic!("expected a syntax error, got {other:?}"),
        }
        match parse("t$1", 5) {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 1),
            other => panic!("expected a syntax error, got {other:?}"),
        }
        match parse("2t", 5) {
            Err(Error::Parse { pos, msg }) => {
                assert_eq!(pos, 1);
                assert!(msg.contains("trailing"));
            }
            other => panic!("expected a syntax error, got {other:?}"),
        }
        match parse("(t", 5) {
            Err(Error::Parse { pos, msg }) => {
                assert_eq!(pos, 2);
                assert!(msg.contains(")"));
            }
            other => panic!("expected a syntax error, got {other:?}"),
        }
        match parse("t^t", 5) {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 2),
            other => panic!("expected a syntax error, got {other:?}"),
        }
    }

    #[test]
    fn precedence_and_associativity() {
        // ^ before unary minus: -t^2 is -(t^2).
        assert_eq!(f(7, "-t^2"), f(7, "6*t^2"));
        // left-assoc chains: 2-3-4 = -5 = 2, 12/3/2 = 2.
        assert_eq!(f(7, "2-3-4").constant(), 2);
        assert_eq!(f(7, "12/3/2").constant(), 2);
        // right-assoc exponent tower: t^2^3 = t^8.
        assert_eq!(f(7, "t^2^3"), f(7, "t^8"));
        // ^ before *: t^2*3 is 3t^2, not t^6.
        assert_eq!(f(7, "t^2*3"), f(7, "3*t^2"));
        // negative exponents.
        assert_eq!(f(7, "t^-2"), f(7, "1/t^2"));
        // integer tower value: 2^3^2 = 2^9 = 512 = 6 mod 11.
        assert_eq!(f(11, "2^3^2").constant(), 6);
    }

    #[test]
    fn whitespace_is_ignored() {
        assert_eq!(f(5, " ( t + 1 ) ^ 2 "), f(5, "(t+1)^2"));
    }

    #[test]
    fn zero_expressions_are_rejected() {
        assert_eq!(parse("1/(t-t)", 5), Err(Error::DivisionByZero));
        assert_eq!(parse("(t-t)^-1", 5), Err(Error::DivisionByZero));
        assert_eq!(parse("t-t", 5), Err(Error::ZeroFunction));
        assert_eq!(parse("0", 5), Err(Error::ZeroFunction));
    }

    #[test]
    fn polynomial_mode() {
        let q = parse_polynomial("(t^2+1)/2", 5).unwrap();
        assert_eq!(q.to_string(), "3*t^2+3");
        assert!(parse_polynomial("1/t", 5).is_err());
        // A quotient that happens to be exact is accepted.
        let q = parse_polynomial("(t^2-1)/(t-1)", 5).unwrap();
        assert_eq!(q.to_string(), "t+1");
    }

    #[test]
    fn display_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(2026);
        for p in [2u64, 3, 5, 13] {
            let field = PrimeField::new(p).unwrap();
            for _ in 0..25 {
                let deg_n = rng.gen_range(0..5usize);
                let deg_d = rng.gen_range(0..4usize);
                let coeffs = |rng: &mut ChaCha8Rng, deg: usize| -> Vec<i64> {
                    let mut c: Vec<i64> =
                        (0..=deg).map(|_| rng.gen_range(0..p) as i64).collect();
                    if c[deg] % p as i64 == 0 {
                        c[deg] = 1;
                    }
                    c
                };
                let num = Polynomial::new(field, &coeffs(&mut rng, deg_n));
                let den = Polynomial::new(field, &coeffs(&mut rng, deg_d));
                let g = match RationalFunction::normalize(&num, &den) {
                    Ok(g) => g,
                    Err(_) => continue,
                };
                let reparsed = parse(&g.to_string(), p).unwrap();
                assert_eq!(reparsed, g, "round trip through {}", g);
            }
        }
    }
}
