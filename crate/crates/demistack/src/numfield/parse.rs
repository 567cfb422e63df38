//! Text grammar for polynomials: integer coefficients, one variable letter
//! (`x` for field polynomials, `t` for elements), operators `+ - * ^`,
//! whitespace insensitive. Example inputs: `x^2+1`, `4+t`, `-1`, `2*t^3-t`.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::NumFieldError;

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Int(BigInt),
    Var,
    Plus,
    Minus,
    Star,
    Caret,
}

fn tokenize(input: &str, var: char) -> Result<Vec<Token>, NumFieldError> {
    let mut out = Vec::new();
    let mut chars = input.chars().peekable();
    while let Some(&c) = chars.peek() {
        match c {
            ' ' | '\t' | '\n' | '\r' => {
                chars.next();
            }
            '+' => {
                chars.next();
                out.push(Token::Plus);
            }
            '-' => {
                chars.next();
                out.push(Token::Minus);
            }
            '*' => {
                chars.next();
                out.push(Token::Star);
            }
            '^' => {
                chars.next();
                out.push(Token::Caret);
            }
            '0'..='9' => {
                let mut digits = String::new();
                while let Some(&d) = chars.peek() {
                    if d.is_ascii_digit() {
                        digits.push(d);
                        chars.next();
                    } else {
                        break;
                    }
                }
                let n: BigInt = digits
                    .parse()
                    .map_err(|_| NumFieldError::Parse(format!("bad integer `{digits}`")))?;
                out.push(Token::Int(n));
            }
            c if c == var => {
                chars.next();
                out.push(Token::Var);
            }
            other => {
                return Err(NumFieldError::Parse(format!(
                    "unexpected character `{other}` (variable letter is `{var}`)"
                )));
            }
        }
    }
    Ok(out)
}

/// Parses a polynomial in the given variable letter into dense ascending
/// coefficients (no trailing zeros; the zero polynomial is empty).
pub fn parse_poly(input: &str, var: char) -> Result<Vec<BigInt>, NumFieldError> {
    let tokens = tokenize(input, var)?;
    if tokens.is_empty() {
        return Err(NumFieldError::Parse("empty input".into()));
    }
    let mut poly: Vec<BigInt> = Vec::new();
    let mut pos = 0usize;

    while pos < tokens.len() {
        // sign prefix
        let mut negative = false;
        loop {
            match tokens.get(pos) {
                Some(Token::Plus) => pos += 1,
                Some(Token::Minus) => {
                    negative = !negative;
                    pos += 1;
                }
                _ => break,
            }
        }
        // term: product of factors
        let mut coeff = BigInt::one();
        let mut degree = 0usize;
        let mut saw_factor = false;
        loop {
            match tokens.get(pos) {
                Some(Token::Int(n)) => {
                    coeff *= n;
                    pos += 1;
                    saw_factor = true;
                }
                Some(Token::Var) => {
                    pos += 1;
                    let mut exp = 1usize;
                    if tokens.get(pos) == Some(&Token::Caret) {
                        pos += 1;
                        match tokens.get(pos) {
                            Some(Token::Int(n)) => {
                                exp = usize::try_from(n.clone())
                                    .ok()
                                    .filter(|&e| e <= 64)
                                    .ok_or_else(|| {
                                        NumFieldError::Parse(format!("exponent out of range `{n}`"))
                                    })?;
                                pos += 1;
                            }
                            _ => {
                                return Err(NumFieldError::Parse(
                                    "expected integer exponent after `^`".into(),
                                ))
                            }
                        }
                    }
                    degree += exp;
                    saw_factor = true;
                }
                Some(Token::Star) => {
                    pos += 1;
                    if !matches!(tokens.get(pos), Some(Token::Int(_)) | Some(Token::Var)) {
                        return Err(NumFieldError::Parse("dangling `*`".into()));
                    }
                }
                _ => break,
            }
        }
        if !saw_factor {
            return Err(NumFieldError::Parse("empty term".into()));
        }
        if negative {
            coeff = -coeff;
        }
        if poly.len() < degree + 1 {
            poly.resize(degree + 1, BigInt::zero());
        }
        poly[degree] += coeff;
        // next token must be + or - (handled at loop top) or end
        match tokens.get(pos) {
            None | Some(Token::Plus) | Some(Token::Minus) => {}
            Some(t) => {
                return Err(NumFieldError::Parse(format!(
                    "unexpected token {t:?} after term"
                )))
            }
        }
    }
    while poly.last().is_some_and(|c| c.is_zero()) {
        poly.pop();
    }
    Ok(poly)
}

/// Renders coefficients back to canonical text (used in diagnostics).
pub fn poly_to_string(coeffs: &[BigInt], var: char) -> String {
    if coeffs.iter().all(|c| c.is_zero()) {
        return "0".to_string();
    }
    let mut parts = Vec::new();
    for (i, c) in coeffs.iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let mag = c.magnitude().to_string();
        let body = match i {
            0 => mag,
            1 if mag == "1" => format!("{var}"),
            1 => format!("{mag}*{var}"),
            _ if mag == "1" => format!("{var}^{i}"),
            _ => format!("{mag}*{var}^{i}"),
        };
        let sign = if c.sign() == num_bigint::Sign::Minus {
            "-"
        } else if parts.is_empty() {
            ""
        } else {
            "+"
        };
        parts.push(format!("{sign}{body}"));
    }
    parts.join("")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(n: i64) -> BigInt {
        BigInt::from(n)
    }

    #[test]
    fn parses_basic_polynomials() {
        assert_eq!(parse_poly("x^2+1", 'x').unwrap(), vec![z(1), z(0), z(1)]);
        assert_eq!(parse_poly("x", 'x').unwrap(), vec![z(0), z(1)]);
        assert_eq!(parse_poly("x^2-x-1", 'x').unwrap(), vec![z(-1), z(-1), z(1)]);
        assert_eq!(parse_poly("4+t", 't').unwrap(), vec![z(4), z(1)]);
        assert_eq!(parse_poly("-1", 't').unwrap(), vec![z(-1)]);
        assert_eq!(parse_poly(" 2*t^3 - t ", 't').unwrap(), vec![z(0), z(-1), z(0), z(2)]);
        assert_eq!(parse_poly("t*t", 't').unwrap(), vec![z(0), z(0), z(1)]);
        assert_eq!(parse_poly("3*4", 't').unwrap(), vec![z(12)]);
        assert_eq!(parse_poly("--1", 't').unwrap(), vec![z(1)]);
    }

    #[test]
    fn rejects_malformed_input() {
        assert!(parse_poly("", 'x').is_err());
        assert!(parse_poly("y^2", 'x').is_err());
        assert!(parse_poly("x^", 'x').is_err());
        assert!(parse_poly("x^x", 'x').is_err());
        assert!(parse_poly("3*", 'x').is_err());
        assert!(parse_poly("+", 'x').is_err());
        assert!(parse_poly("x^999999999999999999", 'x').is_err());
    }

    #[test]
    fn roundtrips_canonical_text() {
        for s in ["x^2+1", "x^2-x-1", "x", "17", "-x^3+2*x-5"] {
            let p = parse_poly(s, 'x').unwrap();
            let rendered = poly_to_string(&p, 'x');
            assert_eq!(parse_poly(&rendered, 'x').unwrap(), p);
        }
    }
}
