//! Exact arithmetic over the supported base fields: the rationals, real or
//! imaginary quadratic extensions of the rationals, and prime fields of odd
//! characteristic. Square-class tests, Hilbert symbols and norm equations
//! live in the submodules.

mod factor;
mod hilbert;
mod normeq;

pub use factor::{factor, is_prime_u128};
pub use hilbert::{hilbert_symbol, quaternion_is_split, relevant_places, Place};
pub use normeq::{norm_equation, NormEquationResult, DEFAULT_SEARCH_BOUND};

use std::sync::atomic::{AtomicU64, Ordering};

static SEARCH_BOUND: AtomicU64 = AtomicU64::new(DEFAULT_SEARCH_BOUND);

/// Sets the process-wide effort cap for norm-equation witness searches.
pub fn set_search_bound(bound: u64) {
    SEARCH_BOUND.store(bound, Ordering::Relaxed);
}

/// The currently configured effort cap for norm-equation witness searches.
pub fn search_bound() -> u64 {
    SEARCH_BOUND.load(Ordering::Relaxed)
}

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;

use crate::error::{Error, Result};

/// One of the three supported base fields.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FieldDescriptor {
    Rationals,
    /// The field Q(sqrt(d)) for a squarefree integer d, d != 0, 1.
    QuadraticRational(i64),
    /// The prime field GF(p) for an odd prime p.
    PrimeField(u64),
}

impl FieldDescriptor {
    /// Checks the descriptor invariants: d squarefree and not 0 or 1,
    /// p an odd prime.
    pub fn validate(&self) -> Result<()> {
        match *self {
            FieldDescriptor::Rationals => Ok(()),
            FieldDescriptor::QuadraticRational(d) => {
                if d == 0 || d == 1 {
                    return Err(Error::InvalidFieldDescriptor(format!(
                        "d = {} does not give a quadratic extension",
                        d
                    )));
                }
                let f = factor::factor(&BigInt::from(d))?;
                if f.values().any(|&e| e >= 2) {
                    return Err(Error::InvalidFieldDescriptor(format!("d = {} is not squarefree", d)));
                }
                Ok(())
            }
            FieldDescriptor::PrimeField(p) => {
                if p < 3 || p % 2 == 0 || !factor::is_prime_u128(p as u128) {
                    return Err(Error::InvalidFieldDescriptor(format!("p = {} is not an odd prime", p)));
                }
                Ok(())
            }
        }
    }

    pub fn zero(&self) -> Scalar {
        self.from_int(0)
    }

    pub fn one(&self) -> Scalar {
        self.from_int(1)
    }

    pub fn from_int(&self, n: i64) -> Scalar {
        match *self {
            FieldDescriptor::Rationals => Scalar::Rat(BigRational::from(BigInt::from(n))),
            FieldDescriptor::QuadraticRational(d) => Scalar::Quad {
                x: BigRational::from(BigInt::from(n)),
                y: BigRational::zero(),
                d,
            },
            FieldDescriptor::PrimeField(p) => Scalar::Fp {
                r: n.rem_euclid(p as i64) as u64,
                p,
            },
        }
    }

    pub fn from_rational(&self, q: BigRational) -> Result<Scalar> {
        match *self {
            FieldDescriptor::Rationals => Ok(Scalar::Rat(q)),
            FieldDescriptor::QuadraticRational(d) => Ok(Scalar::Quad {
                x: q,
                y: BigRational::zero(),
                d,
            }),
            FieldDescriptor::PrimeField(p) => {
                let pb = BigInt::from(p);
                let num = q.numer().mod_floor(&pb);
                let den = q.denom().mod_floor(&pb);
                let den_u = den
                    .try_into()
                    .map_err(|_| Error::Internal("mod_floor out of range".into()))?;
                let inv = fp_inv(den_u, p)?;
                let num_u: u64 = num.try_into().map_err(|_| Error::Internal("mod_floor out of range".into()))?;
                Ok(Scalar::Fp {
                    r: mul_fp(num_u, inv, p),
                    p,
                })
            }
        }
    }

    /// The element sqrt(d), defined only over a quadratic extension.
    pub fn sqrt_d(&self) -> Result<Scalar> {
        match *self {
            FieldDescriptor::QuadraticRational(d) => Ok(Scalar::Quad {
                x: BigRational::zero(),
                y: BigRational::one(),
                d,
            }),
            _ => Err(Error::NotAQuadraticExtension),
        }
    }
}

impl fmt::Display for FieldDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            FieldDescriptor::Rationals => write!(f, "Q"),
            FieldDescriptor::QuadraticRational(d) => write!(f, "Q(sqrt({}))", d),
            FieldDescriptor::PrimeField(p) => write!(f, "GF({})", p),
        }
    }
}

/// An exact element of one of the supported fields, kept in canonical form:
/// rationals fully reduced with positive denominator (num-rational maintains
/// this), prime-field residues in [0, p).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rat(BigRational),
    Quad { x: BigRational, y: BigRational, d: i64 },
    Fp { r: u64, p: u64 },
}

/// Outcome of an exact square test, with a square-root witness when true.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SquareClassResult {
    pub is_square: bool,
    pub witness: Option<Scalar>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

fn mul_fp(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn pow_fp(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_fp(acc, base, p);
        }
        base = mul_fp(base, base, p);
        exp >>= 1;
    }
    acc
}

fn fp_inv(a: u64, p: u64) -> Result<u64> {
    if a % p == 0 {
        return Err(Error::DivisionByZero);
    }
    Ok(pow_fp(a, p - 2, p))
}

/// Exact square root of a nonnegative rational, if it exists.
pub fn rational_sqrt(q: &BigRational) -> Option<BigRational> {
    if q.is_negative() {
        return None;
    }
    let ns = q.numer().sqrt();
    let ds = q.denom().sqrt();
    if &(&ns * &ns) == q.numer() && &(&ds * &ds) == q.denom() {
        Some(BigRational::new(ns, ds))
    } else {
        None
    }
}

/// Square root in GF(p) by Tonelli-Shanks. `a` must be a quadratic residue.
fn fp_sqrt(a: u64, p: u64) -> u64 {
    let a = a % p;
    if a == 0 {
        return 0;
    }
    if p % 4 == 3 {
        return pow_fp(a, (p + 1) / 4, p);
    }
    // Write p - 1 = q * 2^s with q odd.
    let mut q = p - 1;
    let mut s = 0u32;
    while q % 2 == 0 {
        q /= 2;
        s += 1;
    }
    // Find a non-residue z.
    let mut z = 2;
    while pow_fp(z, (p - 1) / 2, p) != p - 1 {
        z += 1;
    }
    let mut m = s;
    let mut c = pow_fp(z, q, p);
    let mut t = pow_fp(a, q, p);
    let mut r = pow_fp(a, (q + 1) / 2, p);
    while t != 1 {
        let mut i = 0u32;
        let mut tt = t;
        while tt != 1 {
            tt = mul_fp(tt, tt, p);
            i += 1;
        }
        let b = pow_fp(c, 1 << (m - i - 1), p);
        m = i;
        c = mul_fp(b, b, p);
        t = mul_fp(t, c, p);
        r = mul_fp(r, b, p);
    }
    r
}

impl Scalar {
    pub fn field(&self) -> FieldDescriptor {
        match self {
            Scalar::Rat(_) => FieldDescriptor::Rationals,
            Scalar::Quad { d, .. } => FieldDescriptor::QuadraticRational(*d),
            Scalar::Fp { p, .. } => FieldDescriptor::PrimeField(*p),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rat(q) => q.is_zero(),
            Scalar::Quad { x, y, .. } => x.is_zero() && y.is_zero(),
            Scalar::Fp { r, .. } => *r == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rat(q) => q.is_one(),
            Scalar::Quad { x, y, .. } => x.is_one() && y.is_zero(),
            Scalar::Fp { r, .. } => *r == 1,
        }
    }

    pub fn neg(&self) -> Scalar {
        match self {
            Scalar::Rat(q) => Scalar::Rat(-q),
            Scalar::Quad { x, y, d } => Scalar::Quad { x: -x, y: -y, d: *d },
            Scalar::Fp { r, p } => Scalar::Fp { r: (p - r) % p, p: *p },
        }
    }

    fn check_same_field(&self, other: &Scalar) -> Result<()> {
        if self.field() == other.field() {
            Ok(())
        } else {
            Err(Error::FieldMismatch)
        }
    }

    pub fn add(&self, other: &Scalar) -> Result<Scalar> {
        self.check_same_field(other)?;
        Ok(match (self, other) {
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a + b),
            (Scalar::Quad { x, y, d }, Scalar::Quad { x: x2, y: y2, .. }) => Scalar::Quad {
                x: x + x2,
                y: y + y2,
                d: *d,
            },
            (Scalar::Fp { r, p }, Scalar::Fp { r: r2, .. }) => Scalar::Fp { r: (r + r2) % p, p: *p },
            _ => unreachable!(),
        })
    }

    pub fn sub(&self, other: &Scalar) -> Result<Scalar> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Scalar) -> Result<Scalar> {
        self.check_same_field(other)?;
        Ok(match (self, other) {
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a * b),
            (Scalar::Quad { x, y, d }, Scalar::Quad { x: x2, y: y2, .. }) => {
                let db = BigRational::from(BigInt::from(*d));
                Scalar::Quad {
                    x: x * x2 + &db * (y * y2),
                    y: x * y2 + y * x2,
                    d: *d,
                }
            }
            (Scalar::Fp { r, p }, Scalar::Fp { r: r2, .. }) => Scalar::Fp {
                r: mul_fp(*r, *r2, *p),
                p: *p,
            },
            _ => unreachable!(),
        })
    }

    pub fn inv(&self) -> Result<Scalar> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(match self {
            Scalar::Rat(q) => Scalar::Rat(q.recip()),
            Scalar::Quad { x, y, d } => {
                // 1/(x + y sqrt d) = (x - y sqrt d) / (x^2 - d y^2)
                let db = BigRational::from(BigInt::from(*d));
                let n = x * x - &db * (y * y);
                if n.is_zero() {
                    // Impossible for squarefree d != 1: sqrt(d) is irrational.
                    return Err(Error::Internal("norm zero for nonzero quadratic element".into()));
                }
                Scalar::Quad {
                    x: x / &n,
                    y: -(y / &n),
                    d: *d,
                }
            }
            Scalar::Fp { r, p } => Scalar::Fp { r: fp_inv(*r, *p)?, p: *p },
        })
    }

    pub fn div(&self, other: &Scalar) -> Result<Scalar> {
        self.mul(&other.inv()?)
    }

    /// The four basic operations behind one entry point.
    pub fn arith(&self, other: &Scalar, op: ArithOp) -> Result<Scalar> {
        match op {
            ArithOp::Add => self.add(other),
            ArithOp::Sub => self.sub(other),
            ArithOp::Mul => self.mul(other),
            ArithOp::Div => self.div(other),
        }
    }

    /// Galois conjugate x + y sqrt(d) -> x - y sqrt(d).
    pub fn conj(&self) -> Result<Scalar> {
        match self {
            Scalar::Quad { x, y, d } => Ok(Scalar::Quad {
                x: x.clone(),
                y: -y,
                d: *d,
            }),
            _ => Err(Error::NotAQuadraticExtension),
        }
    }

    /// Field norm x^2 - d y^2, landing in the rational subfield.
    pub fn norm(&self) -> Result<Scalar> {
        match self {
            Scalar::Quad { x, y, d } => {
                let db = BigRational::from(BigInt::from(*d));
                Ok(Scalar::Quad {
                    x: x * x - &db * (y * y),
                    y: BigRational::zero(),
                    d: *d,
                })
            }
            _ => Err(Error::NotAQuadraticExtension),
        }
    }

    /// Field trace 2x.
    pub fn trace(&self) -> Result<Scalar> {
        match self {
            Scalar::Quad { x, d, .. } => Ok(Scalar::Quad {
                x: x + x,
                y: BigRational::zero(),
                d: *d,
            }),
            _ => Err(Error::NotAQuadraticExtension),
        }
    }

    /// The underlying rational when the element lies in the rational subfield.
    pub fn as_rational(&self) -> Option<BigRational> {
        match self {
            Scalar::Rat(q) => Some(q.clone()),
            Scalar::Quad { x, y, .. } if y.is_zero() => Some(x.clone()),
            _ => None,
        }
    }

    /// Exact square test with a witness.
    pub fn is_square(&self) -> Result<SquareClassResult> {
        if self.is_zero() {
            return Err(Error::ZeroInput);
        }
        match self {
            Scalar::Rat(q) => Ok(match rational_sqrt(q) {
                Some(s) => SquareClassResult {
                    is_square: true,
                    witness: Some(Scalar::Rat(s)),
                },
                None => SquareClassResult {
                    is_square: false,
                    witness: None,
                },
            }),
            Scalar::Quad { x, y, d } => {
                let db = BigRational::from(BigInt::from(*d));
                let mk = |u: BigRational, v: BigRational| Scalar::Quad { x: u, y: v, d: *d };
                if y.is_zero() {
                    if let Some(s) = rational_sqrt(x) {
                        return Ok(SquareClassResult {
                            is_square: true,
                            witness: Some(mk(s, BigRational::zero())),
                        });
                    }
                    if let Some(v) = rational_sqrt(&(x / &db)) {
                        // (v sqrt d)^2 = v^2 d = x
                        return Ok(SquareClassResult {
                            is_square: true,
                            witness: Some(mk(BigRational::zero(), v)),
                        });
                    }
                    return Ok(SquareClassResult {
                        is_square: false,
                        witness: None,
                    });
                }
                // (u + v sqrt d)^2 = x + y sqrt d needs u^2 = (x ± s)/2 with
                // s^2 = x^2 - d y^2 and v = y / (2u).
                let n = x * x - &db * (y * y);
                if let Some(s) = rational_sqrt(&n) {
                    for sgn in [s.clone(), -s] {
                        let t = (x + &sgn) / BigRational::from(BigInt::from(2));
                        if t.is_zero() {
                            continue;
                        }
                        if let Some(u) = rational_sqrt(&t) {
                            let v = y / (BigRational::from(BigInt::from(2)) * &u);
                            let w = mk(u, v);
                            let sq = w.mul(&w)?;
                            if &sq == self {
                                return Ok(SquareClassResult {
                                    is_square: true,
                                    witness: Some(w),
                                });
                            }
                        }
                    }
                }
                Ok(SquareClassResult {
                    is_square: false,
                    witness: None,
                })
            }
            Scalar::Fp { r, p } => {
                let euler = pow_fp(*r, (p - 1) / 2, *p);
                if euler == 1 {
                    let w = fp_sqrt(*r, *p);
                    debug_assert_eq!(mul_fp(w, w, *p), *r);
                    Ok(SquareClassResult {
                        is_square: true,
                        witness: Some(Scalar::Fp { r: w, p: *p }),
                    })
                } else {
                    Ok(SquareClassResult {
                        is_square: false,
                        witness: None,
                    })
                }
            }
        }
    }

    /// True iff a and b lie in the same square class (a/b is a square).
    pub fn square_class_equal(&self, other: &Scalar) -> Result<bool> {
        if self.is_zero() || other.is_zero() {
            return Err(Error::ZeroInput);
        }
        // a/b and a*b differ by b^2.
        Ok(self.mul(other)?.is_square()?.is_square)
    }

    /// Parses the canonical string encodings: "n/d", "x+y*sqrt(d)", "gf(p):r".
    pub fn parse(s: &str, field: &FieldDescriptor) -> Result<Scalar> {
        let s = s.trim();
        let bad = |msg: &str| Error::InvalidAlgebra(format!("cannot parse scalar {:?}: {}", s, msg));
        match field {
            FieldDescriptor::Rationals => parse_rational(s)
                .map(Scalar::Rat)
                .ok_or_else(|| bad("expected n or n/d")),
            FieldDescriptor::QuadraticRational(d) => {
                if let Some(idx) = s.find("sqrt(") {
                    let close = s[idx..].find(')').ok_or_else(|| bad("missing )"))? + idx;
                    let dpart: i64 = s[idx + 5..close]
                        .trim()
                        .parse()
                        .map_err(|_| bad("bad radicand"))?;
                    if dpart != *d {
                        return Err(bad("radicand does not match the field"));
                    }
                    // Split "x+y*" / "x-y*" / "y*" before sqrt.
                    let head = &s[..idx];
                    let head = head.strip_suffix('*').unwrap_or(head);
                    let (xs, ys) = split_linear(head).ok_or_else(|| bad("bad x+y*sqrt(d) shape"))?;
                    let x = if xs.is_empty() {
                        BigRational::zero()
                    } else {
                        parse_rational(&xs).ok_or_else(|| bad("bad rational part"))?
                    };
                    let y = match ys.as_str() {
                        "" | "+" => BigRational::one(),
                        "-" => -BigRational::one(),
                        other => parse_rational(other).ok_or_else(|| bad("bad sqrt coefficient"))?,
                    };
                    Ok(Scalar::Quad { x, y, d: *d })
                } else {
                    let x = parse_rational(s).ok_or_else(|| bad("expected rational"))?;
                    Ok(Scalar::Quad {
                        x,
                        y: BigRational::zero(),
                        d: *d,
                    })
                }
            }
            FieldDescriptor::PrimeField(p) => {
                let body = if let Some(rest) = s.strip_prefix("gf(") {
                    let close = rest.find(')').ok_or_else(|| bad("missing )"))?;
                    let pp: u64 = rest[..close].trim().parse().map_err(|_| bad("bad modulus"))?;
                    if pp != *p {
                        return Err(bad("modulus does not match the field"));
                    }
                    rest[close + 1..]
                        .strip_prefix(':')
                        .ok_or_else(|| bad("expected gf(p):r"))?
                } else {
                    s
                };
                let n: i64 = body.trim().parse().map_err(|_| bad("bad residue"))?;
                Ok(Scalar::Fp {
                    r: n.rem_euclid(*p as i64) as u64,
                    p: *p,
                })
            }
        }
    }
}

fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let num: BigInt = n.trim().parse().ok()?;
        let den: BigInt = d.trim().parse().ok()?;
        if den.is_zero() {
            return None;
        }
        Some(BigRational::new(num, den))
    } else {
        let num: BigInt = s.parse().ok()?;
        Some(BigRational::from(num))
    }
}

/// Splits "x+y" or "x-y" (the sign belongs to y) at the last top-level +/-;
/// returns (x, y-with-sign). A leading sign belongs to x.
fn split_linear(s: &str) -> Option<(String, String)> {
    let bytes = s.as_bytes();
    for i in (1..bytes.len()).rev() {
        let c = bytes[i] as char;
        if (c == '+' || c == '-') && !matches!(bytes[i - 1] as char, '+' | '-' | '/' | '*') {
            return Some((s[..i].to_string(), s[i..].to_string()));
        }
    }
    Some((String::new(), s.to_string()))
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rat(q) => {
                if q.denom().is_one() {
                    write!(f, "{}", q.numer())
                } else {
                    write!(f, "{}/{}", q.numer(), q.denom())
                }
            }
            Scalar::Quad { x, y, d } => {
                let rat = |q: &BigRational| {
                    if q.denom().is_one() {
                        format!("{}", q.numer())
                    } else {
                        format!("{}/{}", q.numer(), q.denom())
                    }
                };
                if y.is_zero() {
                    write!(f, "{}", rat(x))
                } else if y.is_negative() {
                    write!(f, "{}-{}*sqrt({})", rat(x), rat(&-y), d)
                } else {
                    write!(f, "{}+{}*sqrt({})", rat(x), rat(y), d)
                }
            }
            Scalar::Fp { r, p } => write!(f, "gf({}):{}", p, r),
        }
    }
}

impl Serialize for Scalar {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        // Self-describing strings; force the sqrt term so the field is
        // recoverable even when the irrational part vanishes.
        let s = match self {
            Scalar::Quad { x, y, d } if y.is_zero() => {
                let xr = Scalar::Rat(x.clone());
                format!("{}+0*sqrt({})", xr, d)
            }
            other => other.to_string(),
        };
        ser.serialize_str(&s)
    }
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Scalar, D::Error> {
        let s = String::deserialize(de)?;
        let field = FieldDescriptor::infer_from_scalar_str(&s)
            .map_err(|e| serde::de::Error::custom(e.to_string()))?;
        Scalar::parse(&s, &field).map_err(|e| serde::de::Error::custom(e.to_string()))
    }
}

impl FieldDescriptor {
    /// Recovers the field from a canonical scalar encoding.
    pub fn infer_from_scalar_str(s: &str) -> Result<FieldDescriptor> {
        let s = s.trim();
        let bad =
            |msg: &str| Error::InvalidFieldDescriptor(format!("scalar {:?}: {}", s, msg));
        if let Some(rest) = s.strip_prefix("gf(") {
            let close = rest.find(')').ok_or_else(|| bad("missing )"))?;
            let p: u64 = rest[..close]
                .trim()
                .parse()
                .map_err(|_| bad("bad modulus"))?;
            Ok(FieldDescriptor::PrimeField(p))
        } else if let Some(idx) = s.find("sqrt(") {
            let close = s[idx..].find(')').ok_or_else(|| bad("missing )"))? + idx;
            let d: i64 = s[idx + 5..close]
                .trim()
                .parse()
                .map_err(|_| bad("bad radicand"))?;
            Ok(FieldDescriptor::QuadraticRational(d))
        } else {
            Ok(FieldDescriptor::Rationals)
        }
    }
}

mod tests_support {
    use super::*;

    /// Convenience rational constructor used across the crate's tests.
    pub fn q(n: i64, d: i64) -> Scalar {
        Scalar::Rat(BigRational::new(BigInt::from(n), BigInt::from(d)))
    }
}
pub use tests_support::q;
