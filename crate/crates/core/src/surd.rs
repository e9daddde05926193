//! Exact quadratic surds `a + b*sqrt(n)` with `a, b` rational and `n` a
//! square-free non-negative integer.
//!
//! These show up at exactly two places: the maximal-Seshadri cap
//! `sqrt(D^2 / beta)` (and its reciprocal-scale companion `sqrt(D^2 * beta)`)
//! and the endpoint of a chamber walk, which is a root of a rational
//! quadratic. Ring arithmetic is only defined inside a single real quadratic
//! field Q(sqrt(n)); combining two distinct radicals is rejected. Order
//! comparisons are exact for arbitrary pairs via sign analysis and squaring.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::CoreError;
use crate::rat::Rat;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Surd {
    a: Rat,
    b: Rat,
    /// Square-free radicand, `0` when the value is rational (then `b = 0`).
    n: u64,
}

/// Largest radicand accepted before square-free extraction. Far beyond any
/// value the intersection numbers of these surfaces produce.
const MAX_RADICAND: u128 = u64::MAX as u128;

/// Strips the largest square divisor: returns `(s, f)` with `v = s^2 * f`
/// and `f` square-free.
fn squarefree_part(mut v: u128) -> (u128, u128) {
    let mut square_root = 1u128;
    let mut d = 2u128;
    while d * d <= v {
        while v % (d * d) == 0 {
            v /= d * d;
            square_root *= d;
        }
        d += 1;
    }
    (square_root, v)
}

impl Surd {
    /// Canonicalizing constructor: folds perfect-square content of `n` into
    /// `b` and collapses rational values onto `(a, 0, 0)`.
    pub fn new(a: Rat, b: Rat, n: u64) -> Self {
        if b.is_zero() || n == 0 {
            return Surd { a, b: Rat::zero(), n: 0 };
        }
        let (root, free) = squarefree_part(n as u128);
        let root = Rat::from_integer(BigInt::from(root));
        if free == 1 {
            return Surd { a: a + b * root, b: Rat::zero(), n: 0 };
        }
        Surd { a, b: b * root, n: free as u64 }
    }

    pub fn from_rat(a: Rat) -> Self {
        Surd { a, b: Rat::zero(), n: 0 }
    }

    pub fn from_int(v: i64) -> Self {
        Self::from_rat(crate::rat::rat(v))
    }

    /// Exact square root of a non-negative rational: `sqrt(p/q) = sqrt(pq)/q`.
    pub fn sqrt_rat(v: &Rat) -> Result<Self, CoreError> {
        if v.is_negative() {
            return Err(CoreError::invalid("square root of a negative rational"));
        }
        if v.is_zero() {
            return Ok(Self::from_rat(Rat::zero()));
        }
        let radicand = v.numer() * v.denom();
        let radicand: u128 = radicand
            .to_u128()
            .filter(|&r| r <= MAX_RADICAND)
            .ok_or_else(|| CoreError::invalid("radicand exceeds the supported range"))?;
        let (root, free) = squarefree_part(radicand);
        let b = Rat::new(BigInt::from(root), v.denom().clone());
        Ok(Surd::new(Rat::zero(), b, free as u64))
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn as_rat(&self) -> Option<&Rat> {
        if self.is_rational() {
            Some(&self.a)
        } else {
            None
        }
    }

    pub fn rational_part(&self) -> &Rat {
        &self.a
    }

    pub fn radical_coeff(&self) -> &Rat {
        &self.b
    }

    pub fn radicand(&self) -> u64 {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    fn field_of(x: &Surd, y: &Surd) -> Result<u64, CoreError> {
        match (x.n, y.n) {
            (0, m) => Ok(m),
            (n, 0) => Ok(n),
            (n, m) if n == m => Ok(n),
            (n, m) => Err(CoreError::MixedRadicals(n, m)),
        }
    }

    pub fn checked_add(&self, other: &Surd) -> Result<Surd, CoreError> {
        let n = Self::field_of(self, other)?;
        Ok(Surd::new(&self.a + &other.a, &self.b + &other.b, n))
    }

    pub fn checked_sub(&self, other: &Surd) -> Result<Surd, CoreError> {
        let n = Self::field_of(self, other)?;
        Ok(Surd::new(&self.a - &other.a, &self.b - &other.b, n))
    }

    pub fn checked_mul(&self, other: &Surd) -> Result<Surd, CoreError> {
        let n = Self::field_of(self, other)?;
        let radicand = Rat::from_integer(BigInt::from(n));
        let a = &self.a * &other.a + &self.b * &other.b * radicand;
        let b = &self.a * &other.b + &self.b * &other.a;
        Ok(Surd::new(a, b, n))
    }

    pub fn neg(&self) -> Surd {
        Surd { a: -self.a.clone(), b: -self.b.clone(), n: self.n }
    }

    pub fn scale(&self, k: &Rat) -> Surd {
        Surd::new(&self.a * k, &self.b * k, self.n)
    }

    pub fn div_rat(&self, k: &Rat) -> Result<Surd, CoreError> {
        if k.is_zero() {
            return Err(CoreError::invalid("division by zero"));
        }
        Ok(Surd::new(&self.a / k, &self.b / k, self.n))
    }

    pub fn square(&self) -> Surd {
        self.checked_mul(self).expect("same field")
    }

    /// Exact reciprocal: `1/(a + b sqrt(n)) = (a - b sqrt(n))/(a^2 - b^2 n)`.
    pub fn recip(&self) -> Result<Surd, CoreError> {
        if self.is_zero() {
            return Err(CoreError::invalid("division by zero"));
        }
        let norm = &self.a * &self.a
            - &self.b * &self.b * Rat::from_integer(BigInt::from(self.n));
        Ok(Surd::new(&self.a / &norm, -&self.b / &norm, self.n))
    }

    /// Exact sign, by squaring when `a` and `b*sqrt(n)` disagree in sign.
    pub fn sign(&self) -> Ordering {
        if self.b.is_zero() {
            return self.a.cmp(&Rat::zero());
        }
        let sa = self.a.cmp(&Rat::zero());
        let sb = self.b.cmp(&Rat::zero());
        if sa == sb || sa == Ordering::Equal {
            return sb;
        }
        if sb == Ordering::Equal {
            return sa;
        }
        // a and b*sqrt(n) have strictly opposite signs; compare a^2 vs b^2*n.
        // Equality would force n to be a perfect square, excluded by
        // canonicalization.
        let lhs = &self.a * &self.a;
        let rhs = &self.b * &self.b * Rat::from_integer(BigInt::from(self.n));
        match lhs.cmp(&rhs) {
            Ordering::Greater => sa,
            Ordering::Less => sb,
            Ordering::Equal => unreachable!("square-free radicand cannot square to a rational"),
        }
    }

    /// Exact order comparison; valid for arbitrary radicand pairs.
    pub fn cmp_exact(&self, other: &Surd) -> Ordering {
        if self.n == other.n || self.is_rational() || other.is_rational() {
            let n = self.n.max(other.n);
            let diff = Surd::new(&self.a - &other.a, &self.b - &other.b, n);
            return diff.sign();
        }
        // Distinct radicals: decide sign of (a - c) + b*sqrt(n) - d*sqrt(m).
        // Compare u = (a - c) + b*sqrt(n) against v = d*sqrt(m); when their
        // signs agree, squaring both sides reduces to a single radical.
        let u = Surd::new(&self.a - &other.a, self.b.clone(), self.n);
        let su = u.sign();
        let sv = other.b.cmp(&Rat::zero());
        match (su, sv) {
            (Ordering::Equal, s) => s.reverse(),
            (s, Ordering::Equal) => s,
            (Ordering::Greater, Ordering::Less) => Ordering::Greater,
            (Ordering::Less, Ordering::Greater) => Ordering::Less,
            (s, _) => {
                let u2 = u.square();
                let v2 = Rat::from_integer(BigInt::from(other.n)) * &other.b * &other.b;
                let diff = u2.checked_sub(&Surd::from_rat(v2)).expect("single radical");
                let cmp_sq = diff.sign();
                if s == Ordering::Greater {
                    cmp_sq
                } else {
                    cmp_sq.reverse()
                }
            }
        }
    }

    pub fn min_exact(a: Surd, b: Surd) -> Surd {
        if a.cmp_exact(&b) == Ordering::Greater {
            b
        } else {
            a
        }
    }

    pub fn max_exact(a: Surd, b: Surd) -> Surd {
        if a.cmp_exact(&b) == Ordering::Less {
            b
        } else {
            a
        }
    }

    /// Draw-time conversion for SVG output. Never used in a decision.
    pub fn approx_f64(&self) -> f64 {
        let to_f = |r: &Rat| r.numer().to_f64().unwrap_or(f64::NAN) / r.denom().to_f64().unwrap_or(f64::NAN);
        to_f(&self.a) + to_f(&self.b) * (self.n as f64).sqrt()
    }
}

impl PartialOrd for Surd {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp_exact(other))
    }
}

impl std::fmt::Display for Surd {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_rational() {
            return write!(f, "{}", self.a);
        }
        if self.a.is_zero() {
            return write!(f, "{}*sqrt({})", self.b, self.n);
        }
        write!(f, "{} + {}*sqrt({})", self.a, self.b, self.n)
    }
}
