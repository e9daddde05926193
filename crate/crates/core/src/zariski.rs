//! Zariski decompositions over a declared curve catalog and the chamber walk
//! along the segment `D* - t E_r`.
//!
//! The decomposition grows the negative support iteratively: solve
//! `(x - N) . C = 0` on the current support, then adjoin every catalog
//! component the remainder meets negatively, until stable. Along the segment
//! the coefficients are affine in `t` inside a chamber, so the walk solves
//! each interval symbolically and jumps to the next event: a component
//! entering (or, anomalously, leaving) the negative part, the vanishing of
//! `P_t^2`, or a user bound.
//!
//! Every result is conditional on the completeness of the declared catalog;
//! global nefness is not decidable from finite data.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::CoreError;
use crate::lattice::{
    exceptional_strict_transforms, intersect, negative_definite, solve_linear, CurveRecord,
    NumericalClass, SurfaceModel,
};
use crate::proximity::{noether_value, ProximityStructure, ValuationInvariants};
use crate::rat::{big_to_rat, Rat};
use crate::surd::Surd;

/// A component eligible for the negative part: the strict transform of an
/// exceptional divisor (1-based index) or of a catalog curve (catalog index).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum ComponentId {
    Exc(usize),
    Curve(usize),
}

/// An affine function `c0 + c1 t` of the walk parameter.
#[derive(Clone, Debug, PartialEq)]
pub struct Affine {
    pub c0: Rat,
    pub c1: Rat,
}

impl Affine {
    pub fn constant(c0: Rat) -> Self {
        Affine { c0, c1: Rat::zero() }
    }

    pub fn eval(&self, t: &Rat) -> Rat {
        &self.c0 + &self.c1 * t
    }

    pub fn eval_surd(&self, t: &Surd) -> Surd {
        t.scale(&self.c1)
            .checked_add(&Surd::from_rat(self.c0.clone()))
            .expect("rational shift stays in the field")
    }

    pub fn root(&self) -> Option<Rat> {
        if self.c1.is_zero() {
            None
        } else {
            Some(-&self.c0 / &self.c1)
        }
    }
}

/// A quadratic `c0 + c1 t + c2 t^2`.
#[derive(Clone, Debug, PartialEq)]
pub struct Quadratic {
    pub c0: Rat,
    pub c1: Rat,
    pub c2: Rat,
}

impl Quadratic {
    pub fn eval(&self, t: &Rat) -> Rat {
        &self.c0 + &self.c1 * t + &self.c2 * t * t
    }

    /// Smallest real root `>= lo`, exactly, possibly irrational.
    pub fn smallest_root_at_least(&self, lo: &Rat) -> Result<Option<Surd>, CoreError> {
        if self.c2.is_zero() {
            let affine = Affine { c0: self.c0.clone(), c1: self.c1.clone() };
            return Ok(affine.root().filter(|r| r >= lo).map(Surd::from_rat));
        }
        let disc = &self.c1 * &self.c1 - Rat::from_integer(BigInt::from(4)) * &self.c2 * &self.c0;
        if disc.is_negative() {
            return Ok(None);
        }
        let sqrt_disc = Surd::sqrt_rat(&disc)?;
        let two_a = Rat::from_integer(BigInt::from(2)) * &self.c2;
        let minus_b = Surd::from_rat(-self.c1.clone());
        let r1 = minus_b.checked_sub(&sqrt_disc)?.div_rat(&two_a)?;
        let r2 = minus_b.checked_add(&sqrt_disc)?.div_rat(&two_a)?;
        let (small, large) = match r1.cmp_exact(&r2) {
            Ordering::Greater => (r2, r1),
            _ => (r1, r2),
        };
        let lo_s = Surd::from_rat(lo.clone());
        if small.cmp_exact(&lo_s) != Ordering::Less {
            Ok(Some(small))
        } else if large.cmp_exact(&lo_s) != Ordering::Less {
            Ok(Some(large))
        } else {
            Ok(None)
        }
    }

    /// True when the discriminant vanishes (a double root).
    pub fn has_double_root(&self) -> bool {
        if self.c2.is_zero() {
            return false;
        }
        let disc = &self.c1 * &self.c1 - Rat::from_integer(BigInt::from(4)) * &self.c2 * &self.c0;
        disc.is_zero()
    }
}

/// Precomputed pairing data for the blown-up surface, the exceptional strict
/// transforms and the catalog curves.
pub struct SegmentArena {
    pub surface: SurfaceModel,
    pub ps: ProximityStructure,
    pub inv: ValuationInvariants,
    pub components: Vec<ComponentId>,
    pub names: Vec<String>,
    pub curves: Vec<CurveRecord>,
    classes: Vec<NumericalClass>,
    gram: Vec<Vec<Rat>>,
    /// Curvette values `nu_r(phi_i)`, the strict-basis coefficients of
    /// `sum nu(m_i) E_i*`.
    pub curvette_values: Vec<BigInt>,
    /// `nu_r(phi_C)` for each catalog curve.
    pub curve_values: Vec<BigInt>,
}

impl SegmentArena {
    pub fn new(
        surface: SurfaceModel,
        ps: ProximityStructure,
        curves: Vec<CurveRecord>,
    ) -> Result<Self, CoreError> {
        let r = ps.len();
        let inv = ValuationInvariants::compute(&ps);
        let stricts = exceptional_strict_transforms(&ps);
        let mut components = Vec::new();
        let mut names = Vec::new();
        let mut classes = Vec::new();
        for (i, class) in stricts.into_iter().enumerate() {
            components.push(ComponentId::Exc(i + 1));
            names.push(format!("E{}", i + 1));
            classes.push(class);
        }
        for (c, curve) in curves.iter().enumerate() {
            if curve.germ.len() != r {
                return Err(CoreError::invalid(format!(
                    "curve {} has {} germ entries for {} centers",
                    curve.name,
                    curve.germ.len(),
                    r
                )));
            }
            components.push(ComponentId::Curve(c));
            names.push(curve.name.clone());
            classes.push(curve.strict_transform(&surface));
        }
        let k = components.len();
        let mut gram = vec![vec![Rat::zero(); k]; k];
        for a in 0..k {
            for b in a..k {
                let value = match (components[a], components[b]) {
                    (ComponentId::Curve(i), ComponentId::Curve(j)) if i != j => {
                        let product = curves[i].pairwise.get(&curves[j].name).cloned().ok_or_else(
                            || {
                                CoreError::invalid(format!(
                                    "missing pairwise intersection {} . {}",
                                    curves[i].name, curves[j].name
                                ))
                            },
                        )?;
                        curves[i].strict_pair_with_curve(&curves[j], &product)
                    }
                    (ComponentId::Curve(i), ComponentId::Curve(_)) => {
                        curves[i].strict_self_intersection()
                    }
                    _ => intersect(&surface, &classes[a], &classes[b])?,
                };
                gram[a][b] = value.clone();
                gram[b][a] = value;
            }
        }
        let mults = inv.mults.clone();
        let curvette_values = (1..=r)
            .map(|i| {
                let germ = ps.curvette_multiplicities(i).expect("in range");
                noether_value(&mults, &germ).expect("lengths agree")
            })
            .collect();
        let curve_values = curves
            .iter()
            .map(|c| noether_value(&mults, &c.germ).expect("lengths checked"))
            .collect();
        Ok(SegmentArena {
            surface,
            ps,
            inv,
            components,
            names,
            curves,
            classes,
            gram,
            curvette_values,
            curve_values,
        })
    }

    pub fn r(&self) -> usize {
        self.ps.len()
    }

    pub fn component_count(&self) -> usize {
        self.components.len()
    }

    pub fn gram(&self, a: usize, b: usize) -> &Rat {
        &self.gram[a][b]
    }

    pub fn class_of(&self, idx: usize) -> &NumericalClass {
        &self.classes[idx]
    }

    pub fn index_of(&self, id: ComponentId) -> usize {
        match id {
            ComponentId::Exc(i) => i - 1,
            ComponentId::Curve(c) => self.r() + c,
        }
    }

    /// Pairing of a component with a pure class; exact for every component.
    pub fn pair_with_class(&self, idx: usize, x: &NumericalClass) -> Rat {
        intersect(&self.surface, &self.classes[idx], x).expect("same r")
    }

    /// The segment class `D* - t E_r*` as a pair of pure classes
    /// (constant part, slope part).
    pub fn segment_class(&self) -> (NumericalClass, NumericalClass) {
        let r = self.r();
        let constant = NumericalClass::pullback(r);
        let slope = NumericalClass::exceptional(r, r).scale(&-Rat::one());
        (constant, slope)
    }

    pub fn class_at(&self, t: &Rat) -> NumericalClass {
        let (c, s) = self.segment_class();
        c.add(&s.scale(t))
    }
}

/// A Zariski decomposition `x = P + N`, with `N` supported on `neg`.
#[derive(Clone, Debug, PartialEq)]
pub struct ZariskiDecomposition {
    pub input: NumericalClass,
    /// `(component index, coefficient)`, ascending by component index.
    pub neg: Vec<(usize, Rat)>,
    /// Class representation of `P` (exact on the projective plane).
    pub p: NumericalClass,
    pub p_squared: Rat,
    /// Always true: validity is relative to the declared catalog.
    pub conditional: bool,
}

impl ZariskiDecomposition {
    pub fn neg_names(&self, arena: &SegmentArena) -> Vec<String> {
        self.neg.iter().map(|(idx, _)| arena.names[*idx].clone()).collect()
    }

    pub fn coefficient_of(&self, idx: usize) -> Option<&Rat> {
        self.neg.iter().find(|(i, _)| *i == idx).map(|(_, c)| c)
    }
}

fn solve_on_support(
    arena: &SegmentArena,
    support: &[usize],
    rhs: &[Rat],
) -> Result<Vec<Rat>, CoreError> {
    if support.is_empty() {
        return Ok(Vec::new());
    }
    let gram: Vec<Vec<Rat>> = support
        .iter()
        .map(|&a| support.iter().map(|&b| arena.gram[a][b].clone()).collect())
        .collect();
    if !negative_definite(&gram)? {
        return Err(CoreError::invalid(format!(
            "catalog inconsistent: Gram matrix of {{{}}} is not negative definite",
            support.iter().map(|&i| arena.names[i].as_str()).collect::<Vec<_>>().join(", ")
        )));
    }
    solve_linear(&gram, rhs)
        .ok_or_else(|| CoreError::internal("negative definite Gram matrix must be invertible"))
}

/// Zariski decomposition of an arbitrary pure class over the catalog.
pub fn zariski_decompose(
    arena: &SegmentArena,
    x: &NumericalClass,
) -> Result<ZariskiDecomposition, CoreError> {
    let k = arena.component_count();
    let pair_x: Vec<Rat> = (0..k).map(|c| arena.pair_with_class(c, x)).collect();
    let mut in_neg = vec![false; k];
    let coeffs = loop {
        let support: Vec<usize> = (0..k).filter(|&c| in_neg[c]).collect();
        let rhs: Vec<Rat> = support.iter().map(|&c| pair_x[c].clone()).collect();
        let coeffs = solve_on_support(arena, &support, &rhs)?;
        for (pos, &c) in support.iter().enumerate() {
            if coeffs[pos].is_negative() {
                return Err(CoreError::invalid(format!(
                    "class is not pseudoeffective over the declared catalog \
                     (component {} received a negative coefficient)",
                    arena.names[c]
                )));
            }
        }
        let mut grew = false;
        for c in 0..k {
            if in_neg[c] {
                continue;
            }
            let mut residual = pair_x[c].clone();
            for (pos, &j) in support.iter().enumerate() {
                residual -= &coeffs[pos] * &arena.gram[c][j];
            }
            if residual.is_negative() {
                in_neg[c] = true;
                grew = true;
            }
        }
        if !grew {
            break coeffs;
        }
    };
    let support: Vec<usize> = (0..k).filter(|&c| in_neg[c]).collect();
    finish_decomposition(arena, x, &pair_x, &support, coeffs)
}

fn finish_decomposition(
    arena: &SegmentArena,
    x: &NumericalClass,
    pair_x: &[Rat],
    support: &[usize],
    coeffs: Vec<Rat>,
) -> Result<ZariskiDecomposition, CoreError> {
    let mut p = x.clone();
    let mut p_squared = intersect(&arena.surface, x, x)?;
    for (pos, &c) in support.iter().enumerate() {
        p = p.sub(&arena.class_of(c).scale(&coeffs[pos]));
        p_squared -= &coeffs[pos] * &pair_x[c];
    }
    if p_squared.is_negative() {
        return Err(CoreError::invalid(
            "class is not pseudoeffective over the declared catalog (P^2 < 0)",
        ));
    }
    let neg = support.iter().cloned().zip(coeffs).collect();
    Ok(ZariskiDecomposition { input: x.clone(), neg, p, p_squared, conditional: true })
}

/// Decomposition of the segment class `D* - t E_r` at a fixed `t >= 0`.
pub fn decompose_segment_at(arena: &SegmentArena, t: &Rat) -> Result<ZariskiDecomposition, CoreError> {
    if t.is_negative() {
        return Err(CoreError::invalid("segment parameter t must be non-negative"));
    }
    zariski_decompose(arena, &arena.class_at(t))
}

/// The closed-form decomposition of the segment class:
/// `P_t = D* - (t/beta) sum nu(m_i) E_i*`,
/// `N_t = (t/beta) sum_{i<r} nu_r(phi_i) E_i tilde`.
/// The returned flag records whether `P_t` still meets every catalog curve
/// non-negatively, i.e. whether `t` is within the proposition's range.
pub fn segment_closed_form(
    arena: &SegmentArena,
    t: &Rat,
) -> Result<(ZariskiDecomposition, bool), CoreError> {
    if t.is_negative() {
        return Err(CoreError::invalid("segment parameter t must be non-negative"));
    }
    let r = arena.r();
    let beta = big_to_rat(arena.inv.beta_last());
    let scale = t / &beta;
    let x = arena.class_at(t);
    let mut p = NumericalClass::pullback(r);
    for i in 0..r {
        p.e[i] = -&scale * big_to_rat(&arena.inv.mults[i]);
    }
    let mut neg = Vec::new();
    if !t.is_zero() {
        for i in 1..r {
            neg.push((i - 1, &scale * big_to_rat(&arena.curvette_values[i - 1])));
        }
    }
    let p_squared = &arena.surface.d2 - t * t / &beta;
    let mut valid = !p_squared.is_negative();
    for c in 0..arena.curves.len() {
        let idx = r + c;
        if arena.pair_with_class(idx, &p).is_negative() {
            valid = false;
        }
    }
    Ok((ZariskiDecomposition { input: x, neg, p, p_squared, conditional: true }, valid))
}

/// Why a chamber walk stopped.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EndReason {
    /// `P_t^2 = 0`: the end of the big segment, a candidate for the
    /// Seshadri-type constant.
    SquareZero,
    /// The user-supplied bound was reached first.
    UserBound,
    /// The internal safety cap was reached; the catalog is incomplete
    /// beyond this parameter.
    SafetyCap,
}

impl std::fmt::Display for EndReason {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            EndReason::SquareZero => write!(f, "square-zero"),
            EndReason::UserBound => write!(f, "user-bound"),
            EndReason::SafetyCap => write!(f, "safety-cap"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum TMax {
    Auto,
    Value(Rat),
}

/// One chamber of the walk: the negative support is constant on
/// `(lo, hi)` and each coefficient is affine in `t`.
#[derive(Clone, Debug)]
pub struct WalkInterval {
    pub lo: Rat,
    pub hi: Surd,
    /// Arena component indices in the negative part, ascending.
    pub neg: Vec<usize>,
    pub coeffs: Vec<Affine>,
    pub p_squared: Quadratic,
    /// `P_t . E_r tilde`, the fibre width `beta(t) - alpha(t)`.
    pub p_dot_er: Affine,
}

#[derive(Clone, Debug)]
pub struct ChamberWalk {
    pub breakpoints: Vec<Rat>,
    pub intervals: Vec<WalkInterval>,
    pub t_end: Surd,
    pub reason: EndReason,
    pub warnings: Vec<String>,
}

impl ChamberWalk {
    pub fn chamber_count(&self) -> usize {
        self.intervals.len()
    }
}

struct IntervalSolution {
    support: Vec<usize>,
    coeffs: Vec<Affine>,
    residuals: Vec<Option<Affine>>,
}

/// Solves the decomposition symbolically on the chamber just above `t_lo`,
/// growing (and, anomalously, shrinking) the support until stable.
fn solve_interval(
    arena: &SegmentArena,
    t_lo: &Rat,
    in_neg: &mut [bool],
    warnings: &mut Vec<String>,
) -> Result<IntervalSolution, CoreError> {
    let k = arena.component_count();
    let (class_c, class_s) = arena.segment_class();
    let pair: Vec<Affine> = (0..k)
        .map(|c| Affine {
            c0: arena.pair_with_class(c, &class_c),
            c1: arena.pair_with_class(c, &class_s),
        })
        .collect();
    loop {
        let support: Vec<usize> = (0..k).filter(|&c| in_neg[c]).collect();
        let rhs0: Vec<Rat> = support.iter().map(|&c| pair[c].c0.clone()).collect();
        let rhs1: Vec<Rat> = support.iter().map(|&c| pair[c].c1.clone()).collect();
        let sol0 = solve_on_support(arena, &support, &rhs0)?;
        let sol1 = solve_on_support(arena, &support, &rhs1)?;
        let coeffs: Vec<Affine> =
            sol0.into_iter().zip(sol1).map(|(c0, c1)| Affine { c0, c1 }).collect();
        // Coefficients must be non-negative just above t_lo.
        let mut changed = false;
        for (pos, &c) in support.iter().enumerate() {
            let value = coeffs[pos].eval(t_lo);
            match value.cmp(&Rat::zero()) {
                Ordering::Less => {
                    return Err(CoreError::invalid(format!(
                        "catalog inconsistent: component {} received a negative coefficient at t = {}",
                        arena.names[c], t_lo
                    )));
                }
                Ordering::Equal if coeffs[pos].c1.is_negative() => {
                    warnings.push(format!(
                        "component {} left the negative part at t = {} (anomaly)",
                        arena.names[c], t_lo
                    ));
                    in_neg[c] = false;
                    changed = true;
                }
                _ => {}
            }
        }
        if changed {
            continue;
        }
        // Residual pairings of the remaining components; adjoin every
        // component that is (or immediately becomes) negative.
        let mut residuals: Vec<Option<Affine>> = vec![None; k];
        for c in 0..k {
            if in_neg[c] {
                continue;
            }
            let mut res = pair[c].clone();
            for (pos, &j) in support.iter().enumerate() {
                res.c0 -= &coeffs[pos].c0 * &arena.gram[c][j];
                res.c1 -= &coeffs[pos].c1 * &arena.gram[c][j];
            }
            let value = res.eval(t_lo);
            let enters = match value.cmp(&Rat::zero()) {
                Ordering::Less => true,
                Ordering::Equal => res.c1.is_negative(),
                Ordering::Greater => false,
            };
            if enters {
                in_neg[c] = true;
                changed = true;
            } else {
                residuals[c] = Some(res);
            }
        }
        if !changed {
            return Ok(IntervalSolution { support, coeffs, residuals });
        }
    }
}

/// Safety cap: a rational upper bound slightly above `10 sqrt(D^2 beta)`.
fn safety_cap(arena: &SegmentArena) -> Rat {
    let bound = Rat::from_integer(BigInt::from(100)) * &arena.surface.d2
        * big_to_rat(arena.inv.beta_last());
    let ceil = bound.ceil().to_integer();
    big_to_rat(&(ceil.sqrt() + BigInt::one()))
}

/// Walks the Zariski chambers met by `D* - t E_r` for `t >= 0`.
pub fn chamber_walk(arena: &SegmentArena, t_max: &TMax) -> Result<ChamberWalk, CoreError> {
    let k = arena.component_count();
    let er_index = arena.index_of(ComponentId::Exc(arena.r()));
    let (class_c, class_s) = arena.segment_class();
    let pair: Vec<Affine> = (0..k)
        .map(|c| Affine {
            c0: arena.pair_with_class(c, &class_c),
            c1: arena.pair_with_class(c, &class_s),
        })
        .collect();
    let d2 = arena.surface.d2.clone();
    let cap = safety_cap(arena);
    let bound = match t_max {
        TMax::Auto => cap.clone(),
        TMax::Value(v) => v.clone(),
    };
    let bound_reason =
        if matches!(t_max, TMax::Auto) { EndReason::SafetyCap } else { EndReason::UserBound };

    let mut warnings = Vec::new();
    let mut in_neg = vec![false; k];
    let mut t_lo = Rat::zero();
    let mut breakpoints = vec![Rat::zero()];
    let mut intervals: Vec<WalkInterval> = Vec::new();

    loop {
        let sol = solve_interval(arena, &t_lo, &mut in_neg, &mut warnings)?;
        // P_t^2 = x(t)^2 - sum a_j(t) (x(t) . C_j), a rational quadratic.
        let mut p_sq = Quadratic { c0: d2.clone(), c1: Rat::zero(), c2: -Rat::one() };
        for (pos, &j) in sol.support.iter().enumerate() {
            let a = &sol.coeffs[pos];
            let b = &pair[j];
            p_sq.c0 -= &a.c0 * &b.c0;
            p_sq.c1 -= &a.c0 * &b.c1 + &a.c1 * &b.c0;
            p_sq.c2 -= &a.c1 * &b.c1;
        }
        let p_dot_er = match &sol.residuals[er_index] {
            Some(res) => res.clone(),
            None => {
                // E_r tilde is in the negative part: beyond the big segment.
                warnings.push(format!(
                    "strict transform of E{} entered the negative part (anomaly)",
                    arena.r()
                ));
                Affine::constant(Rat::zero())
            }
        };

        // Candidate events strictly above t_lo.
        let mut next_bp: Option<Rat> = None;
        let mut consider = |root: Option<Rat>| {
            if let Some(root) = root {
                if root > t_lo && next_bp.as_ref().map_or(true, |b| &root < b) {
                    next_bp = Some(root);
                }
            }
        };
        for c in 0..k {
            if let Some(res) = &sol.residuals[c] {
                if res.c1.is_negative() {
                    consider(res.root());
                }
            }
        }
        for coeff in &sol.coeffs {
            if coeff.c1.is_negative() {
                consider(coeff.root());
            }
        }
        let p_root = p_sq.smallest_root_at_least(&t_lo)?;

        // Pick the earliest event: the square-zero root ends the walk, a
        // breakpoint opens the next chamber, and the bound truncates.
        let (limit, limit_is_bound) = match &next_bp {
            Some(bp) if bp <= &bound => (bp.clone(), false),
            _ => (bound.clone(), true),
        };
        let end_here = match &p_root {
            Some(root) => root.cmp_exact(&Surd::from_rat(limit.clone())) != Ordering::Greater,
            None => false,
        };
        if end_here {
            let t_end = p_root.expect("checked above");
            intervals.push(WalkInterval {
                lo: t_lo.clone(),
                hi: t_end.clone(),
                neg: sol.support.clone(),
                coeffs: sol.coeffs.clone(),
                p_squared: p_sq,
                p_dot_er,
            });
            return Ok(ChamberWalk {
                breakpoints,
                intervals,
                t_end,
                reason: EndReason::SquareZero,
                warnings,
            });
        }
        intervals.push(WalkInterval {
            lo: t_lo.clone(),
            hi: Surd::from_rat(limit.clone()),
            neg: sol.support.clone(),
            coeffs: sol.coeffs.clone(),
            p_squared: p_sq,
            p_dot_er,
        });
        if limit_is_bound {
            warnings.push(format!(
                "walk truncated at t = {} without reaching P_t^2 = 0; the catalog is \
                 incomplete beyond this parameter",
                limit
            ));
            return Ok(ChamberWalk {
                breakpoints,
                intervals,
                t_end: Surd::from_rat(limit),
                reason: bound_reason,
                warnings,
            });
        }
        breakpoints.push(limit.clone());
        t_lo = limit;
    }
}

/// Report for the chamber-count bound `2 + rho - n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChamberCountReport {
    pub chambers: usize,
    pub computing_curves: usize,
    pub bound: i64,
    pub within_bound: bool,
    pub at_least_two: bool,
}

/// Checks the chamber count of a non-minimal walk against `2 + rho - n`.
pub fn chamber_count_check(
    walk: &ChamberWalk,
    n_computing_curves: usize,
    rho: u32,
) -> ChamberCountReport {
    let chambers = walk.chamber_count();
    let bound = 2 + rho as i64 - n_computing_curves as i64;
    ChamberCountReport {
        chambers,
        computing_curves: n_computing_curves,
        bound,
        within_bound: (chambers as i64) <= bound,
        at_least_two: chambers >= 2,
    }
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;
    use crate::rat::{int, rat};

    /// A degree-one curve through the first `points` centers.
    pub(crate) fn line_through(r: usize, points: usize) -> CurveRecord {
        CurveRecord {
            name: "H".into(),
            d_c: rat(1),
            self_int: rat(1),
            system_m: Some(int(1)),
            germ: (0..r).map(|i| if i < points { int(1) } else { int(0) }).collect(),
            pairwise: Default::default(),
            flag_meet: int(0),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::fixtures::line_through;
    use super::*;
    use crate::proximity::fixtures::{v1, v2, v3};
    use crate::rat::{rat, ratio};
    use proptest::prelude::*;

    fn v2_arena() -> SegmentArena {
        SegmentArena::new(SurfaceModel::p2(), v2(), vec![line_through(3, 2)]).unwrap()
    }

    fn v32_arena() -> SegmentArena {
        SegmentArena::new(SurfaceModel::p2(), v3(2), vec![line_through(2, 2)]).unwrap()
    }

    #[test]
    fn ample_class_decomposes_trivially() {
        let arena = v2_arena();
        let d = NumericalClass::pullback(3);
        let z = zariski_decompose(&arena, &d).unwrap();
        assert!(z.neg.is_empty());
        assert_eq!(z.p, d);
        assert_eq!(z.p_squared, rat(1));
    }

    #[test]
    fn v32_decomposition_past_the_breakpoint() {
        let arena = v32_arena();
        let z = decompose_segment_at(&arena, &ratio(3, 2)).unwrap();
        let names = z.neg_names(&arena);
        assert_eq!(names, vec!["E1".to_string(), "H".to_string()]);
        // a = 3/4 on E1 tilde, b = 1/2 on H tilde
        assert_eq!(z.coefficient_of(0).unwrap(), &ratio(3, 4));
        assert_eq!(z.coefficient_of(2).unwrap(), &ratio(1, 2));
        // P . E2 tilde > 0
        let e2 = arena.index_of(ComponentId::Exc(2));
        assert!(arena.pair_with_class(e2, &z.p).is_positive());
    }

    #[test]
    fn v2_boundary_decomposition_at_two() {
        let arena = v2_arena();
        let z = decompose_segment_at(&arena, &rat(2)).unwrap();
        assert_eq!(z.neg_names(&arena), vec!["E1".to_string(), "E2".to_string()]);
        // N = (1/3)(2 E1 + 3 E2) tilde
        assert_eq!(z.coefficient_of(0).unwrap(), &ratio(2, 3));
        assert_eq!(z.coefficient_of(1).unwrap(), &rat(1));
        // P . H tilde = 0 at the boundary
        let h = arena.index_of(ComponentId::Curve(0));
        assert_eq!(arena.pair_with_class(h, &z.p), rat(0));
        assert_eq!(z.p_squared, ratio(1, 3));
    }

    #[test]
    fn closed_form_examples() {
        let arena = v32_arena();
        let (z, valid) = segment_closed_form(&arena, &rat(1)).unwrap();
        assert!(valid);
        assert_eq!(z.neg, vec![(0, ratio(1, 2))]);
        let h = arena.index_of(ComponentId::Curve(0));
        assert_eq!(arena.pair_with_class(h, &z.p), rat(0));

        let arena = v2_arena();
        let (z, valid) = segment_closed_form(&arena, &rat(1)).unwrap();
        assert!(valid);
        assert_eq!(z.neg, vec![(0, ratio(1, 3)), (1, ratio(1, 2))]);
        let h = arena.index_of(ComponentId::Curve(0));
        assert_eq!(arena.pair_with_class(h, &z.p), ratio(1, 2));
        let (_, valid) = segment_closed_form(&arena, &ratio(5, 2)).unwrap();
        assert!(!valid, "t = 5/2 is past the valid range for V2");

        let (z, _) = segment_closed_form(&arena, &rat(0)).unwrap();
        assert!(z.neg.is_empty());
        assert_eq!(z.p, NumericalClass::pullback(3));
    }

    #[test]
    fn v32_walk_matches_hand_solution() {
        let arena = v32_arena();
        let walk = chamber_walk(&arena, &TMax::Auto).unwrap();
        assert_eq!(walk.breakpoints, vec![rat(0), rat(1)]);
        assert_eq!(walk.t_end.as_rat().unwrap(), &rat(2));
        assert_eq!(walk.reason, EndReason::SquareZero);
        assert_eq!(walk.intervals.len(), 2);
        let first = &walk.intervals[0];
        assert_eq!(first.neg, vec![0]);
        assert_eq!(first.coeffs[0], Affine { c0: rat(0), c1: ratio(1, 2) });
        let second = &walk.intervals[1];
        assert_eq!(second.neg, vec![0, 2]);
        // a = t/2 on E1, b = t - 1 on H
        assert_eq!(second.coeffs[0], Affine { c0: rat(0), c1: ratio(1, 2) });
        assert_eq!(second.coeffs[1], Affine { c0: rat(-1), c1: rat(1) });
        assert!(walk.warnings.is_empty());
    }

    #[test]
    fn v2_walk_matches_hand_solution() {
        let arena = v2_arena();
        let walk = chamber_walk(&arena, &TMax::Auto).unwrap();
        assert_eq!(walk.breakpoints, vec![rat(0), rat(2)]);
        assert_eq!(walk.t_end.as_rat().unwrap(), &rat(3));
        assert_eq!(walk.intervals.len(), 2);
        let second = &walk.intervals[1];
        // P_t^2 = 3 - 2t + t^2/3 with a double root at t = 3
        assert_eq!(second.p_squared, Quadratic { c0: rat(3), c1: rat(-2), c2: ratio(1, 3) });
        assert!(second.p_squared.has_double_root());
        assert_eq!(second.neg.len(), 3);
    }

    #[test]
    fn v1_walk_is_one_chamber() {
        let arena = SegmentArena::new(SurfaceModel::p2(), v1(), vec![]).unwrap();
        let walk = chamber_walk(&arena, &TMax::Auto).unwrap();
        assert_eq!(walk.breakpoints, vec![rat(0)]);
        assert_eq!(walk.intervals.len(), 1);
        assert!(walk.intervals[0].neg.is_empty());
        assert_eq!(walk.t_end.as_rat().unwrap(), &rat(1));
    }

    #[test]
    fn user_bound_truncates() {
        let arena = v2_arena();
        let walk = chamber_walk(&arena, &TMax::Value(ratio(5, 2))).unwrap();
        assert_eq!(walk.reason, EndReason::UserBound);
        assert_eq!(walk.t_end.as_rat().unwrap(), &ratio(5, 2));
        assert_eq!(walk.intervals.len(), 2);
        assert_eq!(walk.warnings.len(), 1);
    }

    #[test]
    fn surd_endpoint_without_catalog() {
        // two free points, no curves: the segment ends at sqrt(2)
        let arena = SegmentArena::new(SurfaceModel::p2(), v3(2), vec![]).unwrap();
        let walk = chamber_walk(&arena, &TMax::Auto).unwrap();
        assert_eq!(walk.intervals.len(), 1);
        let expected = Surd::sqrt_rat(&rat(2)).unwrap();
        assert_eq!(walk.t_end, expected);
    }

    #[test]
    fn decompose_rejects_non_pseudoeffective() {
        let arena = v32_arena();
        // D* - 2 E_1* has negative square and meets H tilde negatively;
        // no effective decomposition exists over the catalog.
        let x = NumericalClass { d: rat(1), e: vec![rat(-2), rat(0)] };
        assert!(zariski_decompose(&arena, &x).is_err());
        // sums of D* and effective exceptional classes stay pseudoeffective
        let y = NumericalClass { d: rat(1), e: vec![rat(2), rat(2)] };
        let z = zariski_decompose(&arena, &y).unwrap();
        assert_eq!(z.p, NumericalClass::pullback(2));
    }

    #[test]
    fn chamber_count_reports() {
        let arena = v32_arena();
        let walk = chamber_walk(&arena, &TMax::Auto).unwrap();
        let report = chamber_count_check(&walk, 1, 1);
        assert!(report.within_bound);
        assert!(report.at_least_two);
        assert_eq!(report.bound, 2);
    }

    proptest! {
        #![proptest_config(proptest::test_runner::Config::with_cases(64))]

        #[test]
        fn walk_midpoints_match_pointwise_decomposition(
            ps in crate::proximity::strategies::arb_structure(7)
        ) {
            let r = ps.len();
            let curves = if r >= 2 { vec![line_through(r, 2)] } else { vec![] };
            let arena = SegmentArena::new(SurfaceModel::p2(), ps, curves).unwrap();
            let walk = chamber_walk(&arena, &TMax::Auto).unwrap();
            for iv in &walk.intervals {
                // a rational point strictly inside the interval
                let mut mid = None;
                let mut step = ratio(1, 2);
                for _ in 0..64 {
                    let cand = &iv.lo + &step;
                    if Surd::from_rat(cand.clone()).cmp_exact(&iv.hi) == Ordering::Less {
                        mid = Some(cand);
                        break;
                    }
                    step = &step / &rat(2);
                }
                let mid = mid.expect("interval has rational interior points");
                let z = decompose_segment_at(&arena, &mid).unwrap();
                let support: Vec<usize> = z.neg.iter().map(|(i, _)| *i).collect();
                prop_assert_eq!(&support, &iv.neg);
                for ((idx, coeff), affine) in z.neg.iter().zip(&iv.coeffs) {
                    prop_assert_eq!(coeff, &affine.eval(&mid), "component {}", arena.names[*idx]);
                    prop_assert!(!coeff.is_negative());
                }
                prop_assert_eq!(z.p_squared, iv.p_squared.eval(&mid));
                // P_t . E_i tilde = 0 on the negative support, >= 0 off it
                for i in 1..r {
                    let e = arena.index_of(ComponentId::Exc(i));
                    let pairing = arena.pair_with_class(e, &z.p);
                    if iv.neg.contains(&e) {
                        prop_assert_eq!(pairing, rat(0));
                    } else {
                        prop_assert!(!pairing.is_negative());
                    }
                }
                let er = arena.index_of(ComponentId::Exc(r));
                prop_assert!(arena.pair_with_class(er, &z.p).is_positive());
            }
        }

        #[test]
        fn decomposition_is_order_independent(
            ps in crate::proximity::strategies::arb_structure(6),
            seed in 0u64..1000
        ) {
            let r = ps.len();
            if r < 2 {
                return Ok(());
            }
            let mut curves = vec![line_through(r, 2), {
                let mut c = line_through(r, 1);
                c.name = "M".into();
                c
            }];
            curves[0].pairwise.insert("M".into(), rat(1));
            curves[1].pairwise.insert("H".into(), rat(1));
            let arena = SegmentArena::new(SurfaceModel::p2(), ps.clone(), curves.clone()).unwrap();
            curves.swap(0, 1);
            let arena_swapped = SegmentArena::new(SurfaceModel::p2(), ps, curves).unwrap();
            let t = ratio(1 + (seed % 7) as i64, 4);
            let a = decompose_segment_at(&arena, &t);
            let b = decompose_segment_at(&arena_swapped, &t);
            match (a, b) {
                (Ok(a), Ok(b)) => {
                    prop_assert_eq!(&a.p, &b.p);
                    let by_name = |arena: &SegmentArena, z: &ZariskiDecomposition| {
                        let mut v: Vec<(String, Rat)> = z
                            .neg
                            .iter()
                            .map(|(i, c)| (arena.names[*i].clone(), c.clone()))
                            .collect();
                        v.sort();
                        v
                    };
                    prop_assert_eq!(by_name(&arena, &a), by_name(&arena_swapped, &b));
                }
                (Err(_), Err(_)) => {}
                (a, b) => prop_assert!(false, "asymmetric outcome: {:?} vs {:?}", a.is_ok(), b.is_ok()),
            }
        }
    }
}
