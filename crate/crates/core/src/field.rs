//! Exact scalars over the three coefficient domains used by the solver:
//! the rationals, real quadratic fields `Q(sqrt d)` and large prime fields.
//!
//! Every value is kept in canonical form, so structural equality is field
//! equality. Rationals embed into a quadratic field on demand; mixing a prime
//! residue with a characteristic-0 value is a programming error and panics.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::{json, Value};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("division by zero")]
    DivisionByZero,
    #[error("quadratic field parameter {0} must be squarefree and greater than 1")]
    InvalidQuadratic(u64),
    #[error("prime field modulus {0} must be a prime above 2^31")]
    InvalidPrime(u64),
    #[error("cannot parse scalar from {0}")]
    Parse(String),
    #[error("value {value} does not belong to {field}")]
    FieldMismatch { value: String, field: String },
    #[error("{value} has no image in {field}")]
    BadReduction { value: String, field: String },
}

/// Which coefficient domain an arrangement lives over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FieldSpec {
    Rational,
    /// `Q(sqrt d)` for a squarefree `d > 1`.
    Quadratic { d: u64 },
    /// `F_p` for a prime `p > 2^31`.
    Prime { p: u64 },
}

/// An element `a + b*sqrt(d)` of a real quadratic field.
#[derive(Clone, Debug)]
pub struct QuadraticNumber {
    pub a: BigRational,
    pub b: BigRational,
    pub d: u64,
}

/// A residue in `[0, modulus)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Residue {
    pub value: u64,
    pub modulus: u64,
}

#[derive(Clone, Debug)]
pub enum Scalar {
    Rational(BigRational),
    Quadratic(QuadraticNumber),
    Prime(Residue),
}

const PRIME_FLOOR: u64 = 1 << 31;

impl FieldSpec {
    pub fn quadratic(d: u64) -> Result<Self, FieldError> {
        if d > 1 && is_squarefree(d) {
            Ok(FieldSpec::Quadratic { d })
        } else {
            Err(FieldError::InvalidQuadratic(d))
        }
    }

    pub fn prime(p: u64) -> Result<Self, FieldError> {
        if p > PRIME_FLOOR && is_prime(p) {
            Ok(FieldSpec::Prime { p })
        } else {
            Err(FieldError::InvalidPrime(p))
        }
    }

    pub fn is_char_zero(&self) -> bool {
        !matches!(self, FieldSpec::Prime { .. })
    }

    pub fn zero(&self) -> Scalar {
        self.from_i64(0)
    }

    pub fn one(&self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, n: i64) -> Scalar {
        self.from_rational(&BigRational::from_integer(BigInt::from(n)))
            .expect("integers embed into every supported field")
    }

    /// Embeds a rational number. Fails in a prime field when the denominator
    /// vanishes modulo `p`.
    pub fn from_rational(&self, q: &BigRational) -> Result<Scalar, FieldError> {
        match *self {
            FieldSpec::Rational => Ok(Scalar::Rational(q.clone())),
            FieldSpec::Quadratic { d } => Ok(Scalar::Quadratic(QuadraticNumber {
                a: q.clone(),
                b: BigRational::zero(),
                d,
            })),
            FieldSpec::Prime { p } => rational_mod(q, p)
                .map(|value| Scalar::Prime(Residue { value, modulus: p }))
                .ok_or_else(|| FieldError::BadReduction {
                    value: q.to_string(),
                    field: self.to_string(),
                }),
        }
    }

    /// `a + b*sqrt(d)`; only valid in a quadratic field.
    pub fn quadratic_value(&self, a: BigRational, b: BigRational) -> Result<Scalar, FieldError> {
        match *self {
            FieldSpec::Quadratic { d } => Ok(Scalar::Quadratic(QuadraticNumber { a, b, d })),
            _ => Err(FieldError::FieldMismatch {
                value: format!("{a} + {b}*sqrt(d)"),
                field: self.to_string(),
            }),
        }
    }

    /// The generator `sqrt(d)` of a quadratic field.
    pub fn sqrt_d(&self) -> Option<Scalar> {
        match *self {
            FieldSpec::Quadratic { d } => Some(Scalar::Quadratic(QuadraticNumber {
                a: BigRational::zero(),
                b: BigRational::one(),
                d,
            })),
            _ => None,
        }
    }

    /// Checks that `s` is an element of this field, promoting rationals into a
    /// quadratic field.
    pub fn coerce(&self, s: &Scalar) -> Result<Scalar, FieldError> {
        match (self, s) {
            (FieldSpec::Rational, Scalar::Rational(_)) => Ok(s.clone()),
            (FieldSpec::Quadratic { .. }, Scalar::Rational(q)) => self.from_rational(q),
            (FieldSpec::Quadratic { d }, Scalar::Quadratic(x)) if x.d == *d => Ok(s.clone()),
            (FieldSpec::Prime { p }, Scalar::Prime(r)) if r.modulus == *p => Ok(s.clone()),
            (FieldSpec::Prime { .. }, Scalar::Rational(q)) => self.from_rational(q),
            _ => Err(FieldError::FieldMismatch {
                value: s.to_string(),
                field: self.to_string(),
            }),
        }
    }

    /// Image of a characteristic-0 scalar of `self` in `F_p`.
    ///
    /// For `Q(sqrt d)`, `sqrt d` maps to the smaller square root of `d` modulo
    /// `p`; `d` must be a quadratic residue.
    pub fn reduce_mod(&self, s: &Scalar, p: u64) -> Result<Scalar, FieldError> {
        let target = FieldSpec::Prime { p };
        let bad = || FieldError::BadReduction {
            value: s.to_string(),
            field: target.to_string(),
        };
        let value = match (self, s) {
            (_, Scalar::Rational(q)) => rational_mod(q, p).ok_or_else(bad)?,
            (FieldSpec::Quadratic { d }, Scalar::Quadratic(x)) if x.d == *d => {
                let root = sqrt_mod(*d % p, p).ok_or_else(bad)?;
                let a = rational_mod(&x.a, p).ok_or_else(bad)?;
                let b = rational_mod(&x.b, p).ok_or_else(bad)?;
                (a + mul_mod(b, root, p)) % p
            }
            _ => {
                return Err(FieldError::FieldMismatch {
                    value: s.to_string(),
                    field: self.to_string(),
                })
            }
        };
        Ok(Scalar::Prime(Residue { value, modulus: p }))
    }

    /// Reads the textual scalar form: `"p/q"`, `"p"`, a JSON integer, or
    /// `{"a": "p/q", "b": "p/q"}` for `a + b*sqrt(d)`.
    pub fn parse_scalar(&self, v: &Value) -> Result<Scalar, FieldError> {
        match v {
            Value::String(s) => self.from_rational(&parse_rational(s)?),
            Value::Number(n) => {
                let n = n.as_i64().ok_or_else(|| FieldError::Parse(v.to_string()))?;
                Ok(self.from_i64(n))
            }
            Value::Object(map) => {
                let part = |key: &str| -> Result<BigRational, FieldError> {
                    match map.get(key) {
                        None => Ok(BigRational::zero()),
                        Some(Value::String(s)) => parse_rational(s),
                        Some(Value::Number(n)) => n
                            .as_i64()
                            .map(|n| BigRational::from_integer(n.into()))
                            .ok_or_else(|| FieldError::Parse(v.to_string())),
                        Some(other) => Err(FieldError::Parse(other.to_string())),
                    }
                };
                if map.keys().any(|k| k != "a" && k != "b") {
                    return Err(FieldError::Parse(v.to_string()));
                }
                self.quadratic_value(part("a")?, part("b")?)
            }
            _ => Err(FieldError::Parse(v.to_string())),
        }
    }

    /// JSON header form, e.g. `{"type":"quadratic","d":3}`.
    pub fn to_json(&self) -> Value {
        match *self {
            FieldSpec::Rational => json!({"type": "rational"}),
            FieldSpec::Quadratic { d } => json!({"type": "quadratic", "d": d}),
            FieldSpec::Prime { p } => json!({"type": "prime", "p": p}),
        }
    }

    pub fn from_json(v: &Value) -> Result<Self, FieldError> {
        let bad = || FieldError::Parse(v.to_string());
        let kind = v.get("type").and_then(Value::as_str).ok_or_else(bad)?;
        match kind {
            "rational" => Ok(FieldSpec::Rational),
            "quadratic" => FieldSpec::quadratic(v.get("d").and_then(Value::as_u64).ok_or_else(bad)?),
            "prime" => FieldSpec::prime(v.get("p").and_then(Value::as_u64).ok_or_else(bad)?),
            _ => Err(bad()),
        }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rational => write!(f, "Q"),
            FieldSpec::Quadratic { d } => write!(f, "Q(sqrt({d}))"),
            FieldSpec::Prime { p } => write!(f, "F_{p}"),
        }
    }
}

/// Parses `"p/q"` or `"p"` into a reduced rational.
pub fn parse_rational(s: &str) -> Result<BigRational, FieldError> {
    let s = s.trim();
    let parse_int = |t: &str| t.trim().parse::<BigInt>().map_err(|_| FieldError::Parse(s.to_string()));
    match s.split_once('/') {
        Some((n, d)) => {
            let n = parse_int(n)?;
            let d = parse_int(d)?;
            if d.is_zero() {
                return Err(FieldError::ZeroDenominator);
            }
            Ok(BigRational::new(n, d))
        }
        None => Ok(BigRational::from_integer(parse_int(s)?)),
    }
}

/// Textual form of a rational: `"p/q"`, or `"p"` for integers.
pub fn rational_text(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

impl Scalar {
    /// Builds `num/den` in canonical form.
    pub fn ratio(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Result<Self, FieldError> {
        let den = den.into();
        if den.is_zero() {
            return Err(FieldError::ZeroDenominator);
        }
        Ok(Scalar::Rational(BigRational::new(num.into(), den)))
    }

    pub fn int(n: i64) -> Self {
        Scalar::Rational(BigRational::from_integer(n.into()))
    }

    /// A residue modulo an arbitrary modulus. No primality check; meant for
    /// small hand-written cases.
    pub fn residue(value: i64, modulus: u64) -> Self {
        let m = modulus as i128;
        let v = ((value as i128 % m) + m) % m;
        Scalar::Prime(Residue {
            value: v as u64,
            modulus,
        })
    }

    /// Canonical form. All constructors already produce canonical values, so
    /// this is the identity on well-formed inputs and is idempotent.
    pub fn reduce(&self) -> Scalar {
        match self {
            Scalar::Rational(q) => Scalar::Rational(BigRational::new(q.numer().clone(), q.denom().clone())),
            Scalar::Quadratic(x) => Scalar::Quadratic(QuadraticNumber {
                a: BigRational::new(x.a.numer().clone(), x.a.denom().clone()),
                b: BigRational::new(x.b.numer().clone(), x.b.denom().clone()),
                d: x.d,
            }),
            Scalar::Prime(r) => Scalar::Prime(Residue {
                value: r.value % r.modulus,
                modulus: r.modulus,
            }),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(q) => q.is_zero(),
            Scalar::Quadratic(x) => x.a.is_zero() && x.b.is_zero(),
            Scalar::Prime(r) => r.value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rational(q) => q.is_one(),
            Scalar::Quadratic(x) => x.a.is_one() && x.b.is_zero(),
            Scalar::Prime(r) => r.value == 1,
        }
    }

    /// The zero of the field this scalar lives in.
    pub fn zero_like(&self) -> Scalar {
        match self {
            Scalar::Rational(_) => Scalar::Rational(BigRational::zero()),
            Scalar::Quadratic(x) => Scalar::Quadratic(QuadraticNumber {
                a: BigRational::zero(),
                b: BigRational::zero(),
                d: x.d,
            }),
            Scalar::Prime(r) => Scalar::Prime(Residue {
                value: 0,
                modulus: r.modulus,
            }),
        }
    }

    pub fn one_like(&self) -> Scalar {
        match self {
            Scalar::Rational(_) => Scalar::Rational(BigRational::one()),
            Scalar::Quadratic(x) => Scalar::Quadratic(QuadraticNumber {
                a: BigRational::one(),
                b: BigRational::zero(),
                d: x.d,
            }),
            Scalar::Prime(r) => Scalar::Prime(Residue {
                value: 1 % r.modulus,
                modulus: r.modulus,
            }),
        }
    }

    pub fn field(&self) -> FieldSpec {
        match self {
            Scalar::Rational(_) => FieldSpec::Rational,
            Scalar::Quadratic(x) => FieldSpec::Quadratic { d: x.d },
            Scalar::Prime(r) => FieldSpec::Prime { p: r.modulus },
        }
    }

    pub fn invert(&self) -> Result<Scalar, FieldError> {
        if self.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        Ok(match self {
            Scalar::Rational(q) => Scalar::Rational(q.recip()),
            Scalar::Quadratic(x) => {
                // (a - b sqrt d) / (a^2 - d b^2); the norm is nonzero since d is not a square.
                let d = BigRational::from_integer(x.d.into());
                let norm = &x.a * &x.a - d * &x.b * &x.b;
                Scalar::Quadratic(QuadraticNumber {
                    a: &x.a / &norm,
                    b: -(&x.b / &norm),
                    d: x.d,
                })
            }
            Scalar::Prime(r) => Scalar::Prime(Residue {
                value: pow_mod(r.value, r.modulus - 2, r.modulus),
                modulus: r.modulus,
            }),
        })
    }

    pub fn checked_div(&self, rhs: &Scalar) -> Result<Scalar, FieldError> {
        Ok(self * &rhs.invert()?)
    }

    /// Multiplies by an integer without constructing a scalar for it.
    pub fn mul_int(&self, n: i64) -> Scalar {
        match self {
            Scalar::Rational(q) => Scalar::Rational(q * BigRational::from_integer(n.into())),
            Scalar::Quadratic(x) => {
                let n = BigRational::from_integer(n.into());
                Scalar::Quadratic(QuadraticNumber {
                    a: &x.a * &n,
                    b: &x.b * &n,
                    d: x.d,
                })
            }
            Scalar::Prime(_) => self * &Scalar::residue(n, self.modulus()),
        }
    }

    fn modulus(&self) -> u64 {
        match self {
            Scalar::Prime(r) => r.modulus,
            _ => 0,
        }
    }

    /// Least common multiple of the denominators of the rational parts; 1 in
    /// a prime field.
    pub fn denominator_lcm(&self) -> BigInt {
        match self {
            Scalar::Rational(q) => q.denom().clone(),
            Scalar::Quadratic(x) => x.a.denom().lcm(x.b.denom()),
            Scalar::Prime(_) => BigInt::one(),
        }
    }

    /// Floating approximation; diagnostics only.
    pub fn to_f64(&self) -> f64 {
        let q = |r: &BigRational| r.to_f64().unwrap_or(f64::NAN);
        match self {
            Scalar::Rational(r) => q(r),
            Scalar::Quadratic(x) => q(&x.a) + q(&x.b) * (x.d as f64).sqrt(),
            Scalar::Prime(r) => r.value as f64,
        }
    }

    /// JSON textual form, the inverse of [`FieldSpec::parse_scalar`].
    pub fn to_json(&self) -> Value {
        match self {
            Scalar::Rational(q) => Value::String(rational_text(q)),
            Scalar::Quadratic(x) => json!({"a": rational_text(&x.a), "b": rational_text(&x.b)}),
            Scalar::Prime(r) => Value::String(r.value.to_string()),
        }
    }

    /// Sign of a characteristic-0 value; `None` in a prime field.
    pub fn signum(&self) -> Option<Ordering> {
        match self {
            Scalar::Rational(q) => Some(q.cmp(&BigRational::zero())),
            Scalar::Quadratic(x) => {
                // sign of a + b sqrt d without floating point
                let sa = x.a.signum();
                let sb = x.b.signum();
                let zero = BigRational::zero();
                if sb.is_zero() {
                    return Some(x.a.cmp(&zero));
                }
                if sa.is_zero() || sa == sb {
                    return Some(if sb.is_positive() { Ordering::Greater } else { Ordering::Less });
                }
                let d = BigRational::from_integer(x.d.into());
                let lhs = &x.a * &x.a;
                let rhs = &x.b * &x.b * d;
                Some(match lhs.cmp(&rhs) {
                    Ordering::Greater => x.a.cmp(&zero),
                    Ordering::Less => x.b.cmp(&zero),
                    Ordering::Equal => Ordering::Equal,
                })
            }
            Scalar::Prime(_) => None,
        }
    }
}

fn as_quadratic(x: &Scalar, d: u64) -> (BigRational, BigRational) {
    match x {
        Scalar::Rational(q) => (q.clone(), BigRational::zero()),
        Scalar::Quadratic(q) => {
            assert_eq!(q.d, d, "mixed quadratic fields");
            (q.a.clone(), q.b.clone())
        }
        Scalar::Prime(_) => panic!("mixed characteristic in scalar arithmetic"),
    }
}

fn binary(
    lhs: &Scalar,
    rhs: &Scalar,
    rat: impl Fn(&BigRational, &BigRational) -> BigRational,
    quad: impl Fn(&QuadraticNumber, &QuadraticNumber) -> QuadraticNumber,
    modp: impl Fn(u64, u64, u64) -> u64,
) -> Scalar {
    match (lhs, rhs) {
        (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(rat(a, b)),
        (Scalar::Prime(a), Scalar::Prime(b)) => {
            assert_eq!(a.modulus, b.modulus, "mixed prime fields");
            Scalar::Prime(Residue {
                value: modp(a.value, b.value, a.modulus),
                modulus: a.modulus,
            })
        }
        (Scalar::Quadratic(a), Scalar::Quadratic(b)) => {
            assert_eq!(a.d, b.d, "mixed quadratic fields");
            Scalar::Quadratic(quad(a, b))
        }
        (Scalar::Quadratic(q), other) | (other, Scalar::Quadratic(q)) => {
            let (a, b) = as_quadratic(other, q.d);
            let promoted = QuadraticNumber { a, b, d: q.d };
            if matches!(lhs, Scalar::Quadratic(_)) {
                Scalar::Quadratic(quad(q, &promoted))
            } else {
                Scalar::Quadratic(quad(&promoted, q))
            }
        }
        _ => panic!("mixed characteristic in scalar arithmetic"),
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, rhs: &'a Scalar) -> Scalar {
        binary(
            self,
            rhs,
            |a, b| a + b,
            |x, y| QuadraticNumber {
                a: &x.a + &y.a,
                b: &x.b + &y.b,
                d: x.d,
            },
            |a, b, p| ((a as u128 + b as u128) % p as u128) as u64,
        )
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &'a Scalar) -> Scalar {
        binary(
            self,
            rhs,
            |a, b| a - b,
            |x, y| QuadraticNumber {
                a: &x.a - &y.a,
                b: &x.b - &y.b,
                d: x.d,
            },
            |a, b, p| ((a as u128 + p as u128 - b as u128) % p as u128) as u64,
        )
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &'a Scalar) -> Scalar {
        binary(
            self,
            rhs,
            |a, b| a * b,
            |x, y| {
                let d = BigRational::from_integer(x.d.into());
                QuadraticNumber {
                    a: &x.a * &y.a + d * &x.b * &y.b,
                    b: &x.a * &y.b + &x.b * &y.a,
                    d: x.d,
                }
            },
            mul_mod,
        )
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Rational(q) => Scalar::Rational(-q),
            Scalar::Quadratic(x) => Scalar::Quadratic(QuadraticNumber {
                a: -&x.a,
                b: -&x.b,
                d: x.d,
            }),
            Scalar::Prime(r) => Scalar::Prime(Residue {
                value: (r.modulus - r.value) % r.modulus,
                modulus: r.modulus,
            }),
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

macro_rules! owned_binop {
    ($trait:ident, $method:ident) => {
        impl $trait<Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                (&self).$method(&rhs)
            }
        }
        impl<'a> $trait<&'a Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &'a Scalar) -> Scalar {
                (&self).$method(rhs)
            }
        }
    };
}

owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);

impl PartialEq for Scalar {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => a == b,
            (Scalar::Prime(a), Scalar::Prime(b)) => a == b,
            (Scalar::Quadratic(x), Scalar::Quadratic(y)) => x.d == y.d && x.a == y.a && x.b == y.b,
            (Scalar::Quadratic(x), Scalar::Rational(q)) | (Scalar::Rational(q), Scalar::Quadratic(x)) => {
                x.b.is_zero() && &x.a == q
            }
            _ => false,
        }
    }
}

impl Eq for Scalar {}

impl Hash for Scalar {
    fn hash<H: Hasher>(&self, state: &mut H) {
        // rationals and quadratic numbers with b = 0 hash alike, matching Eq
        match self {
            Scalar::Rational(q) => {
                0u8.hash(state);
                q.hash(state);
            }
            Scalar::Quadratic(x) => {
                0u8.hash(state);
                x.a.hash(state);
                if !x.b.is_zero() {
                    x.b.hash(state);
                }
            }
            Scalar::Prime(r) => {
                1u8.hash(state);
                r.hash(state);
            }
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(q) => write!(f, "{}", rational_text(q)),
            Scalar::Quadratic(x) => {
                if x.b.is_zero() {
                    write!(f, "{}", rational_text(&x.a))
                } else if x.a.is_zero() {
                    write!(f, "{}*sqrt({})", rational_text(&x.b), x.d)
                } else if x.b.is_negative() {
                    write!(f, "{}-{}*sqrt({})", rational_text(&x.a), rational_text(&-&x.b), x.d)
                } else {
                    write!(f, "{}+{}*sqrt({})", rational_text(&x.a), rational_text(&x.b), x.d)
                }
            }
            Scalar::Prime(r) => write!(f, "{}", r.value),
        }
    }
}

pub fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    acc
}

fn bigint_mod(n: &BigInt, p: u64) -> u64 {
    let r = n.mod_floor(&BigInt::from(p));
    r.to_u64().expect("residue fits in u64")
}

fn rational_mod(q: &BigRational, p: u64) -> Option<u64> {
    let den = bigint_mod(q.denom(), p);
    if den == 0 {
        return None;
    }
    let num = bigint_mod(q.numer(), p);
    Some(mul_mod(num, pow_mod(den, p - 2, p), p))
}

/// Deterministic Miller-Rabin for 64-bit inputs.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &b in &BASES {
        if n.is_multiple_of(b) {
            return n == b;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

pub fn is_squarefree(n: u64) -> bool {
    if n == 0 {
        return false;
    }
    let mut m = n;
    let mut f = 2u64;
    while f * f <= m {
        if m.is_multiple_of(f) {
            m /= f;
            if m.is_multiple_of(f) {
                return false;
            }
        }
        f += 1;
    }
    true
}

/// The smaller square root of `a` modulo an odd prime `p` (Tonelli-Shanks).
pub fn sqrt_mod(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if a == 0 {
        return Some(0);
    }
    if pow_mod(a, (p - 1) / 2, p) != 1 {
        return None;
    }
    let mut q = p - 1;
    let mut s = 0;
    while q.is_multiple_of(2) {
        q /= 2;
        s += 1;
    }
    let mut z = 2;
    while pow_mod(z, (p - 1) / 2, p) != p - 1 {
        z += 1;
    }
    let mut m = s;
    let mut c = pow_mod(z, q, p);
    let mut t = pow_mod(a, q, p);
    let mut r = pow_mod(a, q.div_ceil(2), p);
    while t != 1 {
        let mut i = 0;
        let mut t2 = t;
        while t2 != 1 {
            t2 = mul_mod(t2, t2, p);
            i += 1;
        }
        let b = pow_mod(c, 1 << (m - i - 1), p);
        m = i;
        c = mul_mod(b, b, p);
        t = mul_mod(t, c, p);
        r = mul_mod(r, b, p);
    }
    Some(r.min(p - r))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Scalar {
        Scalar::ratio(n, d).unwrap()
    }

    #[test]
    fn reduce_examples() {
        assert_eq!(q(6, 4), q(3, 2));
        assert_eq!(q(-1, -3), q(1, 3));
        assert_eq!(Scalar::ratio(1, 0), Err(FieldError::ZeroDenominator));
        let k = FieldSpec::quadratic(3).unwrap();
        let x = k.quadratic_value(BigRational::new(2.into(), 2.into()), BigRational::zero()).unwrap();
        assert!(x.reduce().is_one());
        assert_eq!(x.reduce(), x.reduce().reduce());
    }

    #[test]
    fn invert_examples() {
        assert_eq!(q(3, 2).invert().unwrap(), q(2, 3));
        let k = FieldSpec::quadratic(3).unwrap();
        let one = BigRational::one();
        let half = BigRational::new(1.into(), 2.into());
        let x = k.quadratic_value(one.clone(), one).unwrap();
        let expected = k.quadratic_value(-half.clone(), half).unwrap();
        assert_eq!(x.invert().unwrap(), expected);
        assert!((&x * &expected).is_one());
        assert_eq!(Scalar::residue(2, 7).invert().unwrap(), Scalar::residue(4, 7));
        assert_eq!(q(0, 5).invert(), Err(FieldError::DivisionByZero));
    }

    #[test]
    fn field_spec_validation() {
        assert!(FieldSpec::quadratic(3).is_ok());
        assert!(FieldSpec::quadratic(4).is_err());
        assert!(FieldSpec::quadratic(1).is_err());
        assert!(FieldSpec::prime(7).is_err());
        assert!(FieldSpec::prime(2_147_483_659).is_ok());
        assert!(FieldSpec::prime(2_147_483_661).is_err());
    }

    #[test]
    fn quadratic_reduction_uses_smaller_root() {
        let p = 2_147_483_713u64; // 3 is a residue mod p
        let k = FieldSpec::quadratic(3).unwrap();
        assert!(is_prime(p));
        let r = sqrt_mod(3, p).unwrap();
        assert_eq!(mul_mod(r, r, p), 3);
        assert!(r <= p - r);
        let img = k.reduce_mod(&k.sqrt_d().unwrap(), p).unwrap();
        assert_eq!(img, Scalar::Prime(Residue { value: r, modulus: p }));
    }

    #[test]
    fn textual_forms_round_trip() {
        let k = FieldSpec::quadratic(3).unwrap();
        let v = json!({"a": "-1/2", "b": "3"});
        let s = k.parse_scalar(&v).unwrap();
        assert_eq!(s.to_json(), v);
        assert_eq!(FieldSpec::Rational.parse_scalar(&json!("6/4")).unwrap(), q(3, 2));
        assert_eq!(FieldSpec::Rational.parse_scalar(&json!(-2)).unwrap(), q(-2, 1));
        assert!(FieldSpec::Rational.parse_scalar(&json!("1/0")).is_err());
        assert_eq!(FieldSpec::from_json(&k.to_json()).unwrap(), k);
    }

    #[test]
    fn quadratic_sign() {
        let k = FieldSpec::quadratic(3).unwrap();
        let s = |a: i64, b: i64| k.quadratic_value(BigRational::from_integer(a.into()), BigRational::from_integer(b.into())).unwrap();
        assert_eq!(s(2, -1).signum(), Some(Ordering::Greater)); // 2 - 1.73
        assert_eq!(s(1, -1).signum(), Some(Ordering::Less));
        assert_eq!(s(-2, 1).signum(), Some(Ordering::Less));
    }
}
