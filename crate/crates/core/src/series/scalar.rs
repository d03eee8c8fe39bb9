use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Absolute threshold below which a numeric coefficient is treated as zero.
pub const NUMERIC_ZERO: f64 = 1e-14;

/// A coefficient: either exact `a + b·√2` with rational `a`, `b`, or an `f64`.
///
/// Arithmetic between an exact and a numeric scalar yields a numeric scalar.
#[derive(Clone, Debug, PartialEq)]
pub enum Scalar {
    Exact { a: BigRational, b: BigRational },
    Numeric(f64),
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn rat_to_f64(r: &BigRational) -> f64 {
    match (r.numer().to_f64(), r.denom().to_f64()) {
        (Some(n), Some(d)) if n.is_finite() && d.is_finite() => n / d,
        _ => {
            // Very large numerators/denominators: rescale before dividing.
            let shift = r.numer().bits().max(r.denom().bits()).saturating_sub(1000);
            let n = (r.numer() >> shift).to_f64().unwrap_or(f64::NAN);
            let d = (r.denom() >> shift).to_f64().unwrap_or(f64::NAN);
            n / d
        }
    }
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar::Exact { a: BigRational::zero(), b: BigRational::zero() }
    }

    pub fn one() -> Self {
        Scalar::from_int(1)
    }

    pub fn from_int(n: i64) -> Self {
        Scalar::Exact { a: rat(n, 1), b: BigRational::zero() }
    }

    /// `n/d`. Panics if `d == 0`.
    pub fn rational(n: i64, d: i64) -> Self {
        Scalar::Exact { a: rat(n, d), b: BigRational::zero() }
    }

    /// `(an/ad) + (bn/bd)·√2`.
    pub fn qsqrt2(an: i64, ad: i64, bn: i64, bd: i64) -> Self {
        Scalar::Exact { a: rat(an, ad), b: rat(bn, bd) }
    }

    pub fn sqrt2() -> Self {
        Scalar::qsqrt2(0, 1, 1, 1)
    }

    pub fn from_parts(a: BigRational, b: BigRational) -> Self {
        Scalar::Exact { a, b }
    }

    pub fn numeric(v: f64) -> Self {
        Scalar::Numeric(v)
    }

    pub fn from_big_rational(r: BigRational) -> Self {
        Scalar::Exact { a: r, b: BigRational::zero() }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Scalar::Exact { .. })
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Exact { a, b } => a.is_zero() && b.is_zero(),
            Scalar::Numeric(v) => v.abs() < NUMERIC_ZERO,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Exact { a, b } => a.is_one() && b.is_zero(),
            Scalar::Numeric(v) => *v == 1.0,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Scalar::Exact { a, b } => rat_to_f64(a) + rat_to_f64(b) * std::f64::consts::SQRT_2,
            Scalar::Numeric(v) => *v,
        }
    }

    /// Converts to numeric representation.
    pub fn to_numeric(&self) -> Self {
        Scalar::Numeric(self.to_f64())
    }

    /// Rational and √2 parts, if exact.
    pub fn parts(&self) -> Option<(&BigRational, &BigRational)> {
        match self {
            Scalar::Exact { a, b } => Some((a, b)),
            Scalar::Numeric(_) => None,
        }
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inverse(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        match self {
            Scalar::Exact { a, b } => {
                let norm = a * a - rat(2, 1) * b * b;
                Some(Scalar::Exact { a: a / &norm, b: -(b / &norm) })
            }
            Scalar::Numeric(v) => Some(Scalar::Numeric(1.0 / v)),
        }
    }

    pub fn abs_f64(&self) -> f64 {
        self.to_f64().abs()
    }

    /// Multiplies by an integer.
    pub fn scale_int(&self, n: i64) -> Self {
        match self {
            Scalar::Exact { a, b } => {
                let n = rat(n, 1);
                Scalar::Exact { a: a * &n, b: b * &n }
            }
            Scalar::Numeric(v) => Scalar::Numeric(v * n as f64),
        }
    }

    /// Multiplies by a rational `n/d`.
    pub fn scale_ratio(&self, n: i64, d: i64) -> Self {
        match self {
            Scalar::Exact { a, b } => {
                let r = rat(n, d);
                Scalar::Exact { a: a * &r, b: b * &r }
            }
            Scalar::Numeric(v) => Scalar::Numeric(v * n as f64 / d as f64),
        }
    }

    pub fn scale_big(&self, r: &BigRational) -> Self {
        match self {
            Scalar::Exact { a, b } => Scalar::Exact { a: a * r, b: b * r },
            Scalar::Numeric(v) => Scalar::Numeric(v * rat_to_f64(r)),
        }
    }

    /// Three-way sign of the value (numerically for mixed surds).
    pub fn signum(&self) -> i32 {
        if self.is_zero() {
            return 0;
        }
        match self {
            Scalar::Exact { a, b } if b.is_zero() => {
                if a.is_positive() {
                    1
                } else {
                    -1
                }
            }
            Scalar::Exact { a, b } if a.is_zero() => {
                if b.is_positive() {
                    1
                } else {
                    -1
                }
            }
            _ => {
                if self.to_f64() > 0.0 {
                    1
                } else {
                    -1
                }
            }
        }
    }

    /// Equality up to a relative tolerance (exact scalars compare exactly).
    pub fn approx_eq(&self, other: &Scalar, rel: f64) -> bool {
        match (self, other) {
            (Scalar::Exact { .. }, Scalar::Exact { .. }) => self == other,
            _ => {
                let (x, y) = (self.to_f64(), other.to_f64());
                (x - y).abs() <= rel * x.abs().max(y.abs()).max(1e-300) || (x - y).abs() < NUMERIC_ZERO
            }
        }
    }
}

impl Default for Scalar {
    fn default() -> Self {
        Scalar::zero()
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::from_int(n)
    }
}

impl From<f64> for Scalar {
    fn from(v: f64) -> Self {
        Scalar::Numeric(v)
    }
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Exact { a, b }, Scalar::Exact { a: c, b: d }) => Scalar::Exact { a: a + c, b: b + d },
            _ => Scalar::Numeric(self.to_f64() + rhs.to_f64()),
        }
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Exact { a, b }, Scalar::Exact { a: c, b: d }) => Scalar::Exact { a: a - c, b: b - d },
            _ => Scalar::Numeric(self.to_f64() - rhs.to_f64()),
        }
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Exact { a, b }, Scalar::Exact { a: c, b: d }) => {
                // (a + b√2)(c + d√2) = (ac + 2bd) + (ad + bc)√2
                let two = rat(2, 1);
                let ra = if b.is_zero() || d.is_zero() { a * c } else { a * c + two * b * d };
                let rb = match (b.is_zero(), d.is_zero()) {
                    (true, true) => BigRational::zero(),
                    (true, false) => a * d,
                    (false, true) => b * c,
                    (false, false) => a * d + b * c,
                };
                Scalar::Exact { a: ra, b: rb }
            }
            _ => Scalar::Numeric(self.to_f64() * rhs.to_f64()),
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Exact { a, b } => Scalar::Exact { a: -a, b: -b },
            Scalar::Numeric(v) => Scalar::Numeric(-v),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl PartialOrd for Scalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.to_f64().partial_cmp(&other.to_f64())
    }
}

fn fmt_rat(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Numeric(v) => write!(f, "{v:e}"),
            Scalar::Exact { a, b } => {
                if b.is_zero() {
                    write!(f, "{}", fmt_rat(a))
                } else if a.is_zero() {
                    if b.is_one() {
                        write!(f, "sqrt2")
                    } else if b == &-BigRational::one() {
                        write!(f, "-sqrt2")
                    } else {
                        write!(f, "{}*sqrt2", fmt_rat(b))
                    }
                } else {
                    write!(f, "({} + {}*sqrt2)", fmt_rat(a), fmt_rat(b))
                }
            }
        }
    }
}
