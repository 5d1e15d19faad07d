//! Univariate polynomials with exact coefficients and Sturm root counting.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use crate::linalg::Rational;

/// Polynomial with integer coefficients, stored in ascending degree.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
}

/// Polynomial with rational coefficients, stored in ascending degree.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Polynomial {
    coeffs: Vec<Rational>,
}

/// End of an interval on the real line.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Endpoint {
    NegInfinity,
    At(Rational),
    PosInfinity,
}

impl IntPolynomial {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with the zero polynomial reported as `None`.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coeffs
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    pub fn to_rational(&self) -> Polynomial {
        Polynomial::new(
            self.coeffs
                .iter()
                .map(|c| BigRational::from_integer(c.clone()))
                .collect(),
        )
    }

    /// Divides out every factor `(x - root)` and returns the quotient with
    /// the multiplicity removed.
    pub fn strip_root(&self, root: i64) -> (IntPolynomial, usize) {
        let (reduced, mult) = self.to_rational().strip_root(&Rational::from_integer(root.into()));
        let coeffs = reduced
            .coeffs
            .into_iter()
            .map(|c| {
                debug_assert!(c.is_integer());
                c.to_integer()
            })
            .collect();
        (IntPolynomial::new(coeffs), mult)
    }
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.coeffs
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * x + c)
    }

    pub fn derivative(&self) -> Polynomial {
        Polynomial::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * Rational::from_integer(BigInt::from(i)))
                .collect(),
        )
    }

    /// Scales so that the leading coefficient is one.
    pub fn monic(&self) -> Polynomial {
        match self.leading() {
            None => Polynomial::zero(),
            Some(lead) => {
                let lead = lead.clone();
                Polynomial::new(self.coeffs.iter().map(|c| c / &lead).collect())
            }
        }
    }

    /// Euclidean division. Panics on a zero divisor.
    pub fn div_rem(&self, divisor: &Polynomial) -> (Polynomial, Polynomial) {
        let dd = divisor.degree().expect("division by the zero polynomial");
        let lead = divisor.leading().unwrap().clone();
        let mut rem = self.coeffs.clone();
        let Some(nd) = self.degree() else {
            return (Polynomial::zero(), Polynomial::zero());
        };
        if nd < dd {
            return (Polynomial::zero(), self.clone());
        }
        let mut quot = vec![Rational::zero(); nd - dd + 1];
        for k in (0..=nd - dd).rev() {
            let q = &rem[k + dd] / &lead;
            if !q.is_zero() {
                for (j, d) in divisor.coeffs.iter().enumerate() {
                    rem[k + j] -= &q * d;
                }
            }
            quot[k] = q;
        }
        rem.truncate(dd);
        (Polynomial::new(quot), Polynomial::new(rem))
    }

    /// Removes every factor `(x - root)`; returns the quotient and the
    /// multiplicity of `root`.
    pub fn strip_root(&self, root: &Rational) -> (Polynomial, usize) {
        let mut p = self.clone();
        let mut mult = 0;
        if p.is_zero() {
            return (p, 0);
        }
        let linear = Polynomial::new(vec![-root.clone(), Rational::one()]);
        while p.eval(root).is_zero() {
            let (q, r) = p.div_rem(&linear);
            debug_assert!(r.is_zero());
            p = q;
            mult += 1;
        }
        (p, mult)
    }

    /// Sturm chain `p, p', -rem(p, p'), ...`, each member rescaled by a
    /// positive constant.
    pub fn sturm_sequence(&self) -> Vec<Polynomial> {
        let mut seq = Vec::new();
        if self.is_zero() {
            return seq;
        }
        seq.push(positive_normalize(self));
        let d = self.derivative();
        if d.is_zero() {
            return seq;
        }
        seq.push(positive_normalize(&d));
        loop {
            let n = seq.len();
            let (_, r) = seq[n - 2].div_rem(&seq[n - 1]);
            if r.is_zero() {
                break;
            }
            let neg = Polynomial::new(r.coeffs.into_iter().map(|c| -c).collect());
            seq.push(positive_normalize(&neg));
        }
        seq
    }

    /// Number of distinct real roots strictly inside `(lo, hi)`.
    pub fn count_roots_open(&self, lo: &Endpoint, hi: &Endpoint) -> usize {
        if self.degree().unwrap_or(0) == 0 {
            return 0;
        }
        // Roots sitting on a finite endpoint are divided out first so the
        // chain is evaluated at non-roots only.
        let mut p = self.clone();
        for end in [lo, hi] {
            if let Endpoint::At(x) = end {
                p = p.strip_root(x).0;
            }
        }
        if p.degree().unwrap_or(0) == 0 {
            return 0;
        }
        let seq = p.sturm_sequence();
        let vlo = sign_changes(&seq, lo);
        let vhi = sign_changes(&seq, hi);
        vlo.saturating_sub(vhi)
    }
}

fn positive_normalize(p: &Polynomial) -> Polynomial {
    match p.leading() {
        None => Polynomial::zero(),
        Some(lead) => {
            let scale = lead.abs();
            Polynomial::new(p.coeffs.iter().map(|c| c / &scale).collect())
        }
    }
}

fn sign_at(p: &Polynomial, at: &Endpoint) -> i32 {
    let lead_sign = |p: &Polynomial| match p.leading() {
        Some(l) if l.is_positive() => 1,
        Some(_) => -1,
        None => 0,
    };
    match at {
        Endpoint::PosInfinity => lead_sign(p),
        Endpoint::NegInfinity => {
            let s = lead_sign(p);
            if p.degree().unwrap_or(0) % 2 == 1 {
                -s
            } else {
                s
            }
        }
        Endpoint::At(x) => {
            let v = p.eval(x);
            if v.is_zero() {
                0
            } else if v.is_positive() {
                1
            } else {
                -1
            }
        }
    }
}

fn sign_changes(seq: &[Polynomial], at: &Endpoint) -> usize {
    let signs: Vec<i32> = seq
        .iter()
        .map(|p| sign_at(p, at))
        .filter(|&s| s != 0)
        .collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

fn write_poly<T: fmt::Display + Signed + Zero + One + PartialEq>(
    f: &mut fmt::Formatter<'_>,
    coeffs: &[T],
) -> fmt::Result {
    if coeffs.is_empty() {
        return write!(f, "0");
    }
    let mut first = true;
    for (deg, c) in coeffs.iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let negative = c.is_negative();
        let mag = c.abs();
        if first {
            if negative {
                write!(f, "-")?;
            }
        } else if negative {
            write!(f, " - ")?;
        } else {
            write!(f, " + ")?;
        }
        first = false;
        let unit = mag.is_one();
        // a fraction in front of x would read as a/(bx)
        let mut text = mag.to_string();
        if deg > 0 && text.contains('/') {
            text = format!("({text})");
        }
        match deg {
            0 => write!(f, "{text}")?,
            1 if unit => write!(f, "x")?,
            1 => write!(f, "{text}x")?,
            _ if unit => write!(f, "x^{deg}")?,
            _ => write!(f, "{text}x^{deg}")?,
        }
    }
    Ok(())
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_poly(f, &self.coeffs)
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_poly(f, &self.coeffs)
    }
}

impl Serialize for IntPolynomial {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}
