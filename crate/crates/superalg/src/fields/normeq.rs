//! Solvability and witnesses for the norm equation of a quadratic extension:
//! find lambda in Q(sqrt d) with lambda * conj(lambda) = c.
//!
//! Solvability is always exact (quaternion splitting by Hilbert symbols).
//! Witness production is exact for d = -1 (Gaussian integer factorization)
//! and best-effort bounded search otherwise.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::factor::factor;
use super::hilbert::quaternion_is_split;
use super::{rational_sqrt, FieldDescriptor, Scalar};
use crate::error::{Error, Result};

pub const DEFAULT_SEARCH_BOUND: u64 = 10_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormEquationResult {
    pub solvable: bool,
    /// A witness with witness * conj(witness) = c; may be absent even when
    /// solvable (reported upstream as WitnessSearchExhausted).
    pub witness: Option<Scalar>,
}

/// Decides whether c is a norm from Q(sqrt d) and tries to produce a witness.
pub fn norm_equation(d: i64, c: &BigRational, search_bound: u64) -> Result<NormEquationResult> {
    if c.is_zero() {
        return Err(Error::ZeroInput);
    }
    FieldDescriptor::QuadraticRational(d).validate()?;
    // c is a norm from Q(sqrt d) iff the quaternion algebra (d, c) splits.
    let d_rat = BigRational::from(BigInt::from(d));
    let solvable = quaternion_is_split(&d_rat, c)?;
    if !solvable {
        return Ok(NormEquationResult {
            solvable: false,
            witness: None,
        });
    }
    let witness = if d == -1 {
        gaussian_witness(c).ok()
    } else {
        search_witness(d, c, search_bound)
    };
    if let Some(w) = &witness {
        let n = w.mul(&w.conj()?)?;
        let expected = FieldDescriptor::QuadraticRational(d).from_rational(c.clone())?;
        if n != expected {
            return Err(Error::Internal("norm witness failed verification".into()));
        }
    }
    Ok(NormEquationResult { solvable, witness })
}

/// Exact witness for d = -1 via sums of two squares: factor the integer
/// representative and build a Gaussian integer of the right norm.
fn gaussian_witness(c: &BigRational) -> Result<Scalar> {
    if c.is_negative() {
        return Err(Error::Internal("negative rational is never a sum of two squares".into()));
    }
    let f = FieldDescriptor::QuadraticRational(-1);
    // c = n/m with N(lambda) = c iff N(m * lambda) = n * m.
    let n = c.numer() * c.denom();
    let m = c.denom().clone();
    let mut acc = f.one();
    for (&p, &e) in factor(&n)?.iter() {
        if p == 2 {
            // N(1 + i) = 2
            let pi = Scalar::Quad {
                x: BigRational::one(),
                y: BigRational::one(),
                d: -1,
            };
            for _ in 0..e {
                acc = acc.mul(&pi)?;
            }
        } else if p % 4 == 1 {
            let (x, y) = two_squares(p)?;
            let pi = Scalar::Quad {
                x: BigRational::from(BigInt::from(x)),
                y: BigRational::from(BigInt::from(y)),
                d: -1,
            };
            for _ in 0..e {
                acc = acc.mul(&pi)?;
            }
        } else {
            if e % 2 != 0 {
                return Err(Error::Internal(format!(
                    "prime {} = 3 mod 4 with odd exponent in a solvable norm equation",
                    p
                )));
            }
            let half = f.from_rational(BigRational::from(BigInt::from(p).pow(e / 2)))?;
            acc = acc.mul(&half)?;
        }
    }
    let scale = f.from_rational(BigRational::new(BigInt::one(), m))?;
    acc.mul(&scale)
}

/// p = x^2 + y^2 for a prime p = 1 mod 4 (or p = 2), by direct search.
fn two_squares(p: u64) -> Result<(u64, u64)> {
    let mut x = 1u64;
    while x * x <= p {
        let rest = p - x * x;
        let y = (rest as f64).sqrt() as u64;
        for cand in y.saturating_sub(1)..=y + 1 {
            if cand * cand == rest {
                return Ok((x, cand));
            }
        }
        x += 1;
    }
    Err(Error::Internal(format!("no two-square decomposition found for {}", p)))
}

/// Bounded search for lambda = (x + y sqrt d)/q with x^2 - d y^2 = c q^2.
fn search_witness(d: i64, c: &BigRational, bound: u64) -> Option<Scalar> {
    let d_rat = BigRational::from(BigInt::from(d));
    let y_max = bound.min(400);
    for q in 1u64..=24 {
        let q_rat = BigRational::from(BigInt::from(q));
        let cq2 = c * &q_rat * &q_rat;
        for y in 0..=y_max {
            let y_rat = BigRational::from(BigInt::from(y));
            let x2 = &cq2 + &d_rat * &y_rat * &y_rat;
            if x2.is_negative() {
                continue;
            }
            if let Some(x) = rational_sqrt(&x2) {
                return Some(Scalar::Quad {
                    x: x / &q_rat,
                    y: y_rat / &q_rat,
                    d,
                });
            }
        }
    }
    None
}
