//! Intersection theory on the blown-up surface: numerical classes in the
//! basis `{D*, E_1*, .., E_r*}`, the proximity change of basis, strict
//! transforms and positivity tests.
//!
//! The pairing is diagonal in this basis: `D* . D* = D^2`, `D* . E_i* = 0`
//! and `E_i* . E_j* = -delta_ij`. A class carries an abstract `D*`
//! coefficient only; curve classes on surfaces with Picard number above one
//! are therefore paired through their curve records, never through this
//! representation (see `scene::CurveRecord`).

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::CoreError;
use crate::proximity::ProximityStructure;
use crate::rat::{big_to_rat, Rat};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SurfaceKind {
    P2,
    Custom,
}

/// Minimal Gram data of the base surface: `D^2` and the Picard number.
#[derive(Clone, Debug, PartialEq)]
pub struct SurfaceModel {
    pub kind: SurfaceKind,
    pub d2: Rat,
    pub rho: u32,
}

impl SurfaceModel {
    pub fn p2() -> Self {
        SurfaceModel { kind: SurfaceKind::P2, d2: Rat::one(), rho: 1 }
    }

    pub fn custom(d2: Rat, rho: u32) -> Result<Self, CoreError> {
        if !d2.is_positive() {
            return Err(CoreError::invalid("D^2 must be positive (D is ample)"));
        }
        if rho == 0 {
            return Err(CoreError::invalid("Picard number must be at least 1"));
        }
        Ok(SurfaceModel { kind: SurfaceKind::Custom, d2, rho })
    }
}

/// `d * D* + sum_i e_i * E_i*` with rational coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct NumericalClass {
    pub d: Rat,
    pub e: Vec<Rat>,
}

impl NumericalClass {
    pub fn zero(r: usize) -> Self {
        NumericalClass { d: Rat::zero(), e: vec![Rat::zero(); r] }
    }

    pub fn pullback(r: usize) -> Self {
        NumericalClass { d: Rat::one(), e: vec![Rat::zero(); r] }
    }

    /// The single total transform `E_i*` (1-based).
    pub fn exceptional(r: usize, i: usize) -> Self {
        let mut c = Self::zero(r);
        c.e[i - 1] = Rat::one();
        c
    }

    /// `sum_i v_i * E_i*` for an integer vector (germ or multiplicities).
    pub fn exceptional_combination(v: &[BigInt]) -> Self {
        NumericalClass { d: Rat::zero(), e: v.iter().map(big_to_rat).collect() }
    }

    pub fn r(&self) -> usize {
        self.e.len()
    }

    pub fn add(&self, other: &NumericalClass) -> NumericalClass {
        NumericalClass {
            d: &self.d + &other.d,
            e: self.e.iter().zip(&other.e).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &NumericalClass) -> NumericalClass {
        NumericalClass {
            d: &self.d - &other.d,
            e: self.e.iter().zip(&other.e).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn scale(&self, k: &Rat) -> NumericalClass {
        NumericalClass { d: &self.d * k, e: self.e.iter().map(|c| c * k).collect() }
    }
}

/// A curve on the base surface together with the germ data of its strict
/// transform. `pairwise` holds `C . C'` on `S` keyed by the other curve's
/// name; on the projective plane it is filled in from the degrees.
#[derive(Clone, Debug, PartialEq)]
pub struct CurveRecord {
    pub name: String,
    /// `D . C` on `S`.
    pub d_c: Rat,
    /// `C^2` on `S`.
    pub self_int: Rat,
    /// Declared `m` with `C` a member of `|mD|`, when known.
    pub system_m: Option<BigInt>,
    /// Multiplicities of the germ and its strict transforms at the centers.
    pub germ: Vec<BigInt>,
    /// `C . C'` on `S` with the other catalog curves.
    pub pairwise: std::collections::BTreeMap<String, Rat>,
    /// Local intersection multiplicity with `E_r` at the flag center.
    pub flag_meet: BigInt,
}

impl CurveRecord {
    /// Class of the strict transform, `(dC/D^2) D* - sum mult_i E_i*`.
    /// Pairings of this representation against pure classes are exact; use
    /// the record-level pairings for curve-curve products on surfaces with
    /// Picard number above one.
    pub fn strict_transform(&self, surface: &SurfaceModel) -> NumericalClass {
        NumericalClass {
            d: &self.d_c / &surface.d2,
            e: self.germ.iter().map(|m| -big_to_rat(m)).collect(),
        }
    }

    /// `C tilde . C' tilde = C . C' - sum_i m_i m'_i`.
    pub fn strict_pair_with_curve(&self, other: &CurveRecord, product_on_s: &Rat) -> Rat {
        let mut acc = product_on_s.clone();
        for (a, b) in self.germ.iter().zip(&other.germ) {
            acc -= big_to_rat(&(a * b));
        }
        acc
    }

    /// `(C tilde)^2 = C^2 - sum_i m_i^2`.
    pub fn strict_self_intersection(&self) -> Rat {
        let mut acc = self.self_int.clone();
        for m in &self.germ {
            acc -= big_to_rat(&(m * m));
        }
        acc
    }
}

/// Intersection product `D^2 x_d y_d - sum_i x_i y_i`.
pub fn intersect(surface: &SurfaceModel, x: &NumericalClass, y: &NumericalClass) -> Result<Rat, CoreError> {
    if x.r() != y.r() {
        return Err(CoreError::invalid(format!(
            "dimension mismatch: classes over {} and {} exceptional divisors",
            x.r(),
            y.r()
        )));
    }
    let mut acc = &surface.d2 * &x.d * &y.d;
    for (a, b) in x.e.iter().zip(&y.e) {
        acc -= a * b;
    }
    Ok(acc)
}

pub fn self_intersection(surface: &SurfaceModel, x: &NumericalClass) -> Rat {
    intersect(surface, x, x).expect("same class")
}

/// Strict transforms of the exceptional divisors:
/// `E_i tilde = E_i* - sum_{p_j -> p_i} E_j*`. The coefficient matrix is the
/// unit lower-triangular proximity matrix.
pub fn exceptional_strict_transforms(ps: &ProximityStructure) -> Vec<NumericalClass> {
    let r = ps.len();
    (1..=r)
        .map(|i| {
            let mut class = NumericalClass::exceptional(r, i);
            for j in i + 1..=r {
                if ps.is_proximate(j, i) {
                    class.e[j - 1] = -Rat::one();
                }
            }
            class
        })
        .collect()
}

/// Writes a class with no `D*` part in the strict basis: coefficients `c`
/// with `sum_i e_i E_i* = sum_i c_i E_i tilde`, solved from the triangular
/// proximity relations.
pub fn to_strict_basis(ps: &ProximityStructure, e: &[Rat]) -> Vec<Rat> {
    // E_i* = E_i tilde + sum_{p_j -> p_i} E_j*, so c_i = e_i + sum over the
    // points p_i is proximate to of their accumulated coefficients.
    let r = ps.len();
    let mut c = vec![Rat::zero(); r];
    for i in 1..=r {
        let mut acc = e[i - 1].clone();
        for j in ps.prox(i) {
            acc += &c[j - 1];
        }
        c[i - 1] = acc;
    }
    c
}

/// Inverse of `to_strict_basis`.
pub fn from_strict_basis(ps: &ProximityStructure, c: &[Rat]) -> Vec<Rat> {
    let r = ps.len();
    let stricts = exceptional_strict_transforms(ps);
    let mut e = vec![Rat::zero(); r];
    for (coeff, strict) in c.iter().zip(&stricts) {
        for (slot, part) in e.iter_mut().zip(&strict.e) {
            *slot += coeff * part;
        }
    }
    e
}

/// Membership in the interior of the positive cone `Q`: `x^2 > 0` together
/// with `x . D* > 0`, as an exact squared comparison. Such classes pair
/// strictly positively against every nonzero element of `Q`.
pub fn q_cone_positive(surface: &SurfaceModel, x: &NumericalClass) -> bool {
    if !x.d.is_positive() {
        return false;
    }
    let lhs = &x.d * &x.d * &surface.d2;
    let rhs: Rat = x.e.iter().map(|c| c * c).sum();
    lhs > rhs
}

/// Exact negative-definiteness by the alternating sign of the leading
/// principal minors: `(-1)^k det_k > 0` for every k.
pub fn negative_definite(gram: &[Vec<Rat>]) -> Result<bool, CoreError> {
    let n = gram.len();
    for row in gram {
        if row.len() != n {
            return Err(CoreError::invalid("Gram matrix is not square"));
        }
    }
    for i in 0..n {
        for j in 0..i {
            if gram[i][j] != gram[j][i] {
                return Err(CoreError::invalid("Gram matrix is not symmetric"));
            }
        }
    }
    for k in 1..=n {
        let det = determinant(gram, k);
        let ok = if k % 2 == 1 { det.is_negative() } else { det.is_positive() };
        if !ok {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Determinant of the leading `k x k` block by rational Gaussian elimination.
fn determinant(gram: &[Vec<Rat>], k: usize) -> Rat {
    let mut m: Vec<Vec<Rat>> = gram[..k].iter().map(|row| row[..k].to_vec()).collect();
    let mut det = Rat::one();
    for col in 0..k {
        let pivot_row = match (col..k).find(|&row| !m[row][col].is_zero()) {
            Some(p) => p,
            None => return Rat::zero(),
        };
        if pivot_row != col {
            m.swap(pivot_row, col);
            det = -det;
        }
        let pivot = m[col][col].clone();
        det *= &pivot;
        for row in col + 1..k {
            if m[row][col].is_zero() {
                continue;
            }
            let factor = &m[row][col] / &pivot;
            for c in col..k {
                let delta = &factor * &m[col][c];
                m[row][c] -= delta;
            }
        }
    }
    det
}

/// Solves `A x = b` exactly; `None` when `A` is singular.
pub fn solve_linear(a: &[Vec<Rat>], b: &[Rat]) -> Option<Vec<Rat>> {
    let n = a.len();
    let mut m: Vec<Vec<Rat>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    for col in 0..n {
        let pivot_row = (col..n).find(|&row| !m[row][col].is_zero())?;
        m.swap(pivot_row, col);
        let pivot = m[col][col].clone();
        for c in col..=n {
            m[col][c] = &m[col][c] / &pivot;
        }
        for row in 0..n {
            if row == col || m[row][col].is_zero() {
                continue;
            }
            let factor = m[row][col].clone();
            for c in col..=n {
                let delta = &factor * &m[col][c];
                m[row][c] -= delta;
            }
        }
    }
    Some(m.into_iter().map(|row| row[n].clone()).collect())
}
