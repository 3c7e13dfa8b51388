//! Text input parsing: the polynomial grammar and small CSV vectors.
//!
//! Grammar accepted by [`parse_polynomial`]:
//!
//! ```text
//! expr   := [sign] term { sign term }
//! term   := number [ '*' factor { '*' factor } ]
//!         | factor { '*' factor }
//! factor := 'x' INDEX [ '^' EXPONENT ]
//! number := DIGITS [ '/' DIGITS ]
//! ```
//!
//! `INDEX` and `EXPONENT` are positive decimal integers; whitespace is
//! ignored everywhere. Errors report the byte offset of the offending
//! token.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::poly::Polynomial;

struct Scanner<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Scanner<'a> {
    fn new(text: &'a str) -> Self {
        Scanner {
            bytes: text.as_bytes(),
            pos: 0,
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<u8> {
        let b = self.peek()?;
        self.pos += 1;
        Some(b)
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            position: self.pos,
            message: message.into(),
        })
    }

    fn digits(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == start {
            return self.err("expected a decimal integer");
        }
        let s = std::str::from_utf8(&self.bytes[start..self.pos]).expect("ascii digits");
        Ok(s.parse::<BigInt>().expect("digits parse as BigInt"))
    }

    fn number(&mut self) -> Result<BigRational> {
        let numer = self.digits()?;
        if self.peek() == Some(b'/') {
            self.bump();
            let denom_pos = self.pos;
            let denom = self.digits()?;
            if denom.is_zero() {
                return Err(Error::Parse {
                    position: denom_pos,
                    message: "zero denominator".into(),
                });
            }
            Ok(BigRational::new(numer, denom))
        } else {
            Ok(BigRational::from_integer(numer))
        }
    }

    /// One `xK[^E]` factor; returns (0-based variable index, exponent).
    fn factor(&mut self, dim: usize) -> Result<(usize, u32)> {
        let var_pos = self.pos;
        match self.bump() {
            Some(b'x') => {}
            _ => {
                return Err(Error::Parse {
                    position: var_pos,
                    message: "expected a variable factor 'xK'".into(),
                })
            }
        }
        let idx_pos = self.pos;
        let idx = self.digits()?;
        let idx = match idx.try_into() {
            Ok(k) => k,
            Err(_) => usize::MAX,
        };
        if idx == 0 {
            return Err(Error::Parse {
                position: idx_pos,
                message: "variable index must be a positive integer".into(),
            });
        }
        if idx > dim {
            return Err(Error::Parse {
                position: idx_pos,
                message: format!("variable index {idx} exceeds dimension {dim}"),
            });
        }
        let mut exp = 1u32;
        if self.peek() == Some(b'^') {
            self.bump();
            if self.peek() == Some(b'-') {
                return self.err("negative exponent");
            }
            let exp_pos = self.pos;
            let e = self.digits()?;
            let e: u32 = match e.try_into() {
                Ok(k) => k,
                Err(_) => {
                    return Err(Error::Parse {
                        position: exp_pos,
                        message: "exponent too large".into(),
                    })
                }
            };
            if e == 0 {
                return Err(Error::Parse {
                    position: exp_pos,
                    message: "exponent must be a positive integer".into(),
                });
            }
            exp = e;
        }
        Ok((idx - 1, exp))
    }
}

/// Parse `text` as a polynomial in variables `x1..x<dimension>`.
///
/// The result is in canonical form: like terms combined, zero terms
/// dropped.
pub fn parse_polynomial(text: &str, dimension: usize) -> Result<Polynomial> {
    if dimension == 0 {
        return Err(Error::InvalidInput("dimension must be at least 1".into()));
    }
    let mut sc = Scanner::new(text);
    let mut poly = Polynomial::zero(dimension);

    let mut sign = BigRational::one();
    match sc.peek() {
        Some(b'+') => {
            sc.bump();
        }
        Some(b'-') => {
            sc.bump();
            sign = -sign;
        }
        Some(_) => {}
        None => return sc.err("empty input"),
    }

    loop {
        // One term: optional coefficient, then '*'-joined factors.
        let mut coeff = sign.clone();
        let mut exps = vec![0u32; dimension];
        let mut saw_number = false;
        match sc.peek() {
            Some(c) if c.is_ascii_digit() => {
                coeff *= sc.number()?;
                saw_number = true;
            }
            Some(b'x') => {}
            _ => return sc.err("expected a term"),
        }
        if saw_number {
            while sc.peek() == Some(b'*') {
                sc.bump();
                let (var, e) = sc.factor(dimension)?;
                exps[var] += e;
            }
        } else {
            let (var, e) = sc.factor(dimension)?;
            exps[var] += e;
            while sc.peek() == Some(b'*') {
                sc.bump();
                let (var, e) = sc.factor(dimension)?;
                exps[var] += e;
            }
        }
        poly.add_term(exps, coeff);

        match sc.peek() {
            None => break,
            Some(b'+') => {
                sc.bump();
                sign = BigRational::one();
            }
            Some(b'-') => {
                sc.bump();
                sign = -BigRational::one();
            }
            Some(_) => return sc.err("expected '+', '-', or end of input"),
        }
    }
    Ok(poly)
}

/// Parse a comma-separated list of nonnegative integers, e.g. `"0,2,1"`.
pub fn parse_uint_csv(text: &str) -> Result<Vec<u32>> {
    if text.trim().is_empty() {
        return Err(Error::InvalidInput("empty integer list".into()));
    }
    text.split(',')
        .map(|part| {
            part.trim()
                .parse::<u32>()
                .map_err(|_| Error::InvalidInput(format!("invalid integer entry '{}'", part.trim())))
        })
        .collect()
}

/// Parse a comma-separated list of positive reals, e.g. `"0.5,0.5"`.
pub fn parse_positive_f64_csv(text: &str) -> Result<Vec<f64>> {
    if text.trim().is_empty() {
        return Err(Error::InvalidInput("empty number list".into()));
    }
    text.split(',')
        .map(|part| {
            let v: f64 = part
                .trim()
                .parse()
                .map_err(|_| Error::InvalidInput(format!("invalid number entry '{}'", part.trim())))?;
            if !v.is_finite() || v <= 0.0 {
                return Err(Error::InvalidInput(format!(
                    "entry '{}' must be a positive finite number",
                    part.trim()
                )));
            }
            Ok(v)
        })
        .collect()
}
