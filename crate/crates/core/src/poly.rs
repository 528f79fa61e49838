//! Bivariate polynomials with exact rational coefficients.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

pub type Rational = BigRational;

/// Exact conversion of a finite double to a rational.
pub fn rational_from_f64(v: f64) -> Option<Rational> {
    BigRational::from_float(v)
}

pub fn rational_from_int(v: i64) -> Rational {
    BigRational::from_integer(BigInt::from(v))
}

/// `sum c_ij x^i y^j`, keyed by exponent pair.
#[derive(Clone)]
pub struct ImplicitPolynomial {
    terms: BTreeMap<(u32, u32), Rational>,
    float_terms: Vec<(u32, u32, f64)>,
    degree: u32,
}

impl PartialEq for ImplicitPolynomial {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms
    }
}

impl Eq for ImplicitPolynomial {}

impl fmt::Debug for ImplicitPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ImplicitPolynomial({self})")
    }
}

impl ImplicitPolynomial {
    /// Build from `(i, j, c)` triples. Repeated exponent pairs are summed and zero terms dropped.
    pub fn from_terms<I>(terms: I) -> Self
    where
        I: IntoIterator<Item = (u32, u32, Rational)>,
    {
        let mut map: BTreeMap<(u32, u32), Rational> = BTreeMap::new();
        for (i, j, c) in terms {
            *map.entry((i, j)).or_insert_with(Rational::zero) += c;
        }
        map.retain(|_, c| !c.is_zero());
        Self::from_map(map)
    }

    fn from_map(terms: BTreeMap<(u32, u32), Rational>) -> Self {
        let float_terms = terms.iter().map(|(&(i, j), c)| (i, j, c.to_f64().unwrap_or(f64::NAN))).collect();
        let degree = terms.keys().map(|(i, j)| i + j).max().unwrap_or(0);
        ImplicitPolynomial { terms, float_terms, degree }
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    /// Terms in ascending `(i, j)` order.
    pub fn terms(&self) -> impl Iterator<Item = (u32, u32, &Rational)> {
        self.terms.iter().map(|(&(i, j), c)| (i, j, c))
    }

    pub fn coefficient(&self, i: u32, j: u32) -> Rational {
        self.terms.get(&(i, j)).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn constant_term(&self) -> Rational {
        self.coefficient(0, 0)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Largest coefficient magnitude, as a double.
    pub fn max_abs_coefficient(&self) -> f64 {
        self.float_terms.iter().map(|t| t.2.abs()).fold(0.0, f64::max)
    }

    /// Multiply every coefficient by `factor`.
    pub fn scaled(&self, factor: &Rational) -> Self {
        Self::from_terms(self.terms.iter().map(|(&(i, j), c)| (i, j, c * factor)))
    }

    /// Evaluate in double precision.
    pub fn eval(&self, x: f64, y: f64) -> f64 {
        let n = self.degree as usize + 1;
        let mut xp = vec![1.0; n];
        let mut yp = vec![1.0; n];
        for k in 1..n {
            xp[k] = xp[k - 1] * x;
            yp[k] = yp[k - 1] * y;
        }
        self.float_terms.iter().map(|&(i, j, c)| c * xp[i as usize] * yp[j as usize]).sum()
    }

    /// Evaluate exactly.
    pub fn eval_exact(&self, x: &Rational, y: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for (&(i, j), c) in &self.terms {
            acc += c * pow(x, i) * pow(y, j);
        }
        acc
    }

    /// `|p(x, y)| / (max|c| * max(1, |x|, |y|)^deg)`: a scale-free size of the residual.
    pub fn relative_residual(&self, x: f64, y: f64) -> f64 {
        let scale = self.max_abs_coefficient() * 1f64.max(x.abs()).max(y.abs()).powi(self.degree as i32);
        self.eval(x, y).abs() / scale
    }

    /// Only even powers of x appear, so `p(-x, y) = p(x, y)`.
    pub fn is_even_in_x(&self) -> bool {
        self.terms.keys().all(|(i, _)| i % 2 == 0)
    }

    pub fn is_even_in_y(&self) -> bool {
        self.terms.keys().all(|(_, j)| j % 2 == 0)
    }

    /// Gradient in double precision.
    pub fn gradient(&self, x: f64, y: f64) -> (f64, f64) {
        let mut gx = 0.0;
        let mut gy = 0.0;
        for &(i, j, c) in &self.float_terms {
            if i > 0 {
                gx += c * i as f64 * x.powi(i as i32 - 1) * y.powi(j as i32);
            }
            if j > 0 {
                gy += c * j as f64 * x.powi(i as i32) * y.powi(j as i32 - 1);
            }
        }
        (gx, gy)
    }
}

fn pow(base: &Rational, exp: u32) -> Rational {
    let mut r = Rational::one();
    for _ in 0..exp {
        r *= base;
    }
    r
}

impl fmt::Display for ImplicitPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        // Descending total degree, then descending power of x.
        let mut keys: Vec<_> = self.terms.keys().copied().collect();
        keys.sort_by_key(|k| std::cmp::Reverse((k.0 + k.1, k.0)));
        for (n, (i, j)) in keys.into_iter().enumerate() {
            let c = &self.terms[&(i, j)];
            let neg = c.is_negative();
            let mag = c.abs();
            match (n, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let monomial = i > 0 || j > 0;
            if !mag.is_one() || !monomial {
                write!(f, "{mag}")?;
            }
            for (var, e) in [('x', i), ('y', j)] {
                match e {
                    0 => {}
                    1 => write!(f, "{var}")?,
                    _ => write!(f, "{var}^{e}")?,
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
#[error("cannot parse polynomial at byte {pos}: {msg}")]
pub struct ParsePolyError {
    pub pos: usize,
    pub msg: String,
}

/// Accepts sums of monomials such as `81x^8 + 612x^6 y^2 - 3/4 y + 2.5 = 0`.
///
/// Juxtaposition and `*` both multiply; a trailing `= 0` is ignored.
impl FromStr for ImplicitPolynomial {
    type Err = ParsePolyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Parser { src: s.as_bytes(), pos: 0 }.polynomial()
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn err<T>(&self, msg: &str) -> Result<T, ParsePolyError> {
        Err(ParsePolyError { pos: self.pos, msg: msg.to_string() })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && (self.src[self.pos] as char).is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn polynomial(mut self) -> Result<ImplicitPolynomial, ParsePolyError> {
        let mut terms = Vec::new();
        let mut first = true;
        loop {
            let sign = match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    1
                }
                Some(b'-') => {
                    self.pos += 1;
                    -1
                }
                Some(b'=') | None if !first => break,
                None => return self.err("empty polynomial"),
                _ if first => 1,
                _ => return self.err("expected '+' or '-'"),
            };
            first = false;
            let (i, j, mut c) = self.term()?;
            if sign < 0 {
                c = -c;
            }
            terms.push((i, j, c));
        }
        if self.peek() == Some(b'=') {
            self.pos += 1;
            let (i, j, c) = self.term()?;
            if !(i == 0 && j == 0 && c.is_zero()) {
                return self.err("only '= 0' is supported on the right-hand side");
            }
        }
        if self.peek().is_some() {
            return self.err("trailing input");
        }
        Ok(ImplicitPolynomial::from_terms(terms))
    }

    fn term(&mut self) -> Result<(u32, u32, Rational), ParsePolyError> {
        let mut coeff = Rational::one();
        let (mut i, mut j) = (0u32, 0u32);
        let mut any = false;
        loop {
            match self.peek() {
                Some(b'*') if any => {
                    self.pos += 1;
                }
                Some(c) if c.is_ascii_digit() || c == b'.' => {
                    coeff *= self.number()?;
                    any = true;
                }
                Some(c @ (b'x' | b'y')) => {
                    self.pos += 1;
                    let e = if self.peek() == Some(b'^') {
                        self.pos += 1;
                        self.exponent()?
                    } else {
                        1
                    };
                    if c == b'x' {
                        i += e;
                    } else {
                        j += e;
                    }
                    any = true;
                }
                _ => break,
            }
        }
        if !any {
            return self.err("expected a term");
        }
        Ok((i, j, coeff))
    }

    fn digits(&mut self) -> &str {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        std::str::from_utf8(&self.src[start..self.pos]).unwrap_or("")
    }

    fn exponent(&mut self) -> Result<u32, ParsePolyError> {
        self.skip_ws();
        let d = self.digits().to_string();
        d.parse().or_else(|_| self.err("bad exponent"))
    }

    fn number(&mut self) -> Result<Rational, ParsePolyError> {
        self.skip_ws();
        let int_part = self.digits().to_string();
        let mut num: BigInt = if int_part.is_empty() { BigInt::zero() } else { int_part.parse().unwrap() };
        let mut den = BigInt::one();
        if self.src.get(self.pos) == Some(&b'.') {
            self.pos += 1;
            let frac = self.digits().to_string();
            for ch in frac.chars() {
                num = num * 10 + (ch as u8 - b'0') as i32;
                den *= 10;
            }
            if int_part.is_empty() && frac.is_empty() {
                return self.err("bad number");
            }
        }
        let mut value = Rational::new(num, den);
        if self.src.get(self.pos) == Some(&b'/') {
            self.pos += 1;
            let d = self.digits().to_string();
            let d: BigInt = d.parse().or_else(|_| self.err("bad denominator"))?;
            if d.is_zero() {
                return self.err("zero denominator");
            }
            value /= Rational::from_integer(d);
        }
        Ok(value)
    }
}
