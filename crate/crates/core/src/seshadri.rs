//! Bound intervals for the valuative Seshadri constant and the Seshadri-type
//! constant, submaximality tests, the pinning rule on the projective plane,
//! minimality verdicts and the six-way equivalence suite.
//!
//! Every square-root comparison is performed by squaring non-negative sides;
//! no floating point participates in any decision. "Minimal" by interval
//! collapse requires exact equality of a bound against the cap, never
//! approximate closeness.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::CoreError;
use crate::nok::{polygon_equal, triangle_bound, FlagData, NokPolygon};
use crate::proximity::tangent_line_value;
use crate::rat::{big_to_rat, ceil_plus, Rat};
use crate::surd::Surd;
use crate::zariski::{ChamberWalk, SegmentArena};

/// Where a bound comes from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    Formula(String),
    Curve(String),
    Assertion(String),
}

impl Witness {
    pub fn label(&self) -> String {
        match self {
            Witness::Formula(s) => format!("formula: {s}"),
            Witness::Curve(s) => format!("curve: {s}"),
            Witness::Assertion(s) => format!("assertion: {s}"),
        }
    }
}

/// An exact interval with provenance. `hi = None` marks an unbounded upper
/// end (it occurs only for the Seshadri-type constant when no positive
/// lower bound on the Seshadri constant is available).
#[derive(Clone, Debug)]
pub struct BoundInterval {
    pub lo: Surd,
    pub hi: Option<Surd>,
    pub lo_witness: Witness,
    pub hi_witness: Witness,
}

impl BoundInterval {
    pub fn is_consistent(&self) -> bool {
        match &self.hi {
            Some(hi) => self.lo.cmp_exact(hi) != Ordering::Greater,
            None => true,
        }
    }
}

/// Resolution of the tangent-line value on the projective plane.
#[derive(Clone, Debug)]
pub struct TangentInfo {
    /// `t(nu_r)`.
    pub t: BigInt,
    /// `delta_0`: minus one in the single-blowup convention, otherwise the
    /// clamped ceiling.
    pub delta0: BigInt,
    pub warnings: Vec<String>,
}

/// Picks the tangent incidence: an explicit override wins; otherwise a
/// declared degree-one catalog curve through the first two centers supplies
/// the value; otherwise the very-general default through p1 and p2.
pub fn resolve_tangent(
    arena: &SegmentArena,
    explicit: Option<&[usize]>,
    allow_satellite: bool,
) -> Result<(BigInt, Vec<String>), CoreError> {
    let ps = &arena.ps;
    if explicit.is_some() || ps.len() == 1 {
        return tangent_line_value(ps, explicit, allow_satellite);
    }
    let mut warnings = Vec::new();
    let mut best: Option<BigInt> = None;
    for (c, curve) in arena.curves.iter().enumerate() {
        if curve.d_c != Rat::one() {
            continue;
        }
        let chain_prefix = curve
            .germ
            .iter()
            .enumerate()
            .all(|(i, m)| m.is_zero() || (m.is_one() && curve.germ[..i].iter().all(|p| p.is_one())));
        let through_first_two = curve.germ.len() >= 2
            && curve.germ[0].is_one()
            && curve.germ[1].is_one();
        if !(chain_prefix && through_first_two) {
            continue;
        }
        let value = arena.curve_values[c].clone();
        match &best {
            Some(b) if *b == value => {}
            Some(b) => {
                warnings.push(format!(
                    "several declared lines give distinct tangent values ({b} and {value}); \
                     taking the largest"
                ));
                if value > *b {
                    best = Some(value);
                }
            }
            None => best = Some(value),
        }
    }
    match best {
        Some(t) => Ok((t, warnings)),
        None => tangent_line_value(ps, None, allow_satellite),
    }
}

fn tangent_info(
    arena: &SegmentArena,
    explicit: Option<&[usize]>,
    allow_satellite: bool,
) -> Result<TangentInfo, CoreError> {
    let inv = &arena.inv;
    if arena.r() == 1 {
        return Ok(TangentInfo { t: BigInt::one(), delta0: -BigInt::one(), warnings: Vec::new() });
    }
    let (t, warnings) = resolve_tangent(arena, explicit, allow_satellite)?;
    let t_rat = big_to_rat(&t);
    let numerator = big_to_rat(inv.beta_last())
        - Rat::from_integer(BigInt::from(2)) * big_to_rat(inv.beta0()) * &t_rat;
    let delta0 = ceil_plus(&(numerator / (&t_rat * &t_rat)));
    Ok(TangentInfo { t, delta0, warnings })
}

/// The maximal-Seshadri cap `sqrt(D^2 / beta_{g+1})`.
pub fn seshadri_cap(arena: &SegmentArena) -> Result<Surd, CoreError> {
    Surd::sqrt_rat(&(&arena.surface.d2 / big_to_rat(arena.inv.beta_last())))
}

/// Exact bounds for the valuative Seshadri constant.
pub fn epsilon_bounds(
    arena: &SegmentArena,
    explicit_tangent: Option<&[usize]>,
    allow_satellite: bool,
) -> Result<(BoundInterval, TangentInfo), CoreError> {
    let cap = seshadri_cap(arena)?;
    let mut hi = cap.clone();
    let mut hi_witness = Witness::Formula("sqrt(D^2/beta_last)".into());
    for (c, curve) in arena.curves.iter().enumerate() {
        let value = &arena.curve_values[c];
        if !value.is_positive() {
            continue;
        }
        let ratio = Surd::from_rat(&curve.d_c / big_to_rat(value));
        if ratio.cmp_exact(&hi) == Ordering::Less {
            hi = ratio;
            hi_witness = Witness::Curve(curve.name.clone());
        }
    }
    let info = tangent_info(arena, explicit_tangent, allow_satellite)?;
    let (lo, lo_witness) = match arena.surface.kind {
        crate::lattice::SurfaceKind::P2 => {
            let denom = big_to_rat(arena.inv.beta0())
                + big_to_rat(&info.t) * (Rat::one() + big_to_rat(&info.delta0));
            (
                Surd::from_rat(Rat::one() / denom),
                Witness::Formula("1/(beta_0 + t(1 + delta_0))".into()),
            )
        }
        crate::lattice::SurfaceKind::Custom => (
            Surd::from_rat(Rat::zero()),
            Witness::Assertion("no general lower bound off the plane".into()),
        ),
    };
    let interval = BoundInterval { lo, hi: Some(hi), lo_witness, hi_witness };
    if !interval.is_consistent() {
        return Err(CoreError::internal(
            "Seshadri lower bound exceeded the upper bound; the scene data is contradictory",
        ));
    }
    Ok((interval, info))
}

/// Exact bounds for the Seshadri-type constant, given a lower bound for the
/// Seshadri constant.
pub fn mu_hat_bounds(arena: &SegmentArena, eps_lo: &Surd) -> Result<BoundInterval, CoreError> {
    let mut lo = Surd::sqrt_rat(&(&arena.surface.d2 * big_to_rat(arena.inv.beta_last())))?;
    let mut lo_witness = Witness::Formula("sqrt(D^2 beta_last)".into());
    for (c, curve) in arena.curves.iter().enumerate() {
        if let Some(m) = &curve.system_m {
            if !m.is_positive() {
                continue;
            }
            let ratio = Surd::from_rat(big_to_rat(&arena.curve_values[c]) / big_to_rat(m));
            if ratio.cmp_exact(&lo) == Ordering::Greater {
                lo = ratio;
                lo_witness = Witness::Curve(curve.name.clone());
            }
        }
    }
    let (hi, hi_witness) = if eps_lo.sign() == Ordering::Greater {
        let hi = Surd::from_rat(arena.surface.d2.clone())
            .checked_mul(&eps_lo.recip()?)?;
        (Some(hi), Witness::Formula("D^2 / eps_lo".into()))
    } else {
        (None, Witness::Assertion("no positive Seshadri lower bound".into()))
    };
    let interval = BoundInterval { lo, hi, lo_witness, hi_witness };
    if !interval.is_consistent() {
        return Err(CoreError::internal(
            "Seshadri-type lower bound exceeded the upper bound; the scene data is contradictory",
        ));
    }
    Ok(interval)
}

/// Exact submaximality: `(D.C)^2 beta_last < D^2 nu_r(phi_C)^2`.
pub fn submaximal_test(arena: &SegmentArena, curve_idx: usize) -> Result<bool, CoreError> {
    let curve = &arena.curves[curve_idx];
    let value = &arena.curve_values[curve_idx];
    if !value.is_positive() {
        return Err(CoreError::invalid(format!(
            "curve {} does not pass through the first center; its valuation vanishes",
            curve.name
        )));
    }
    let lhs = &curve.d_c * &curve.d_c * big_to_rat(arena.inv.beta_last());
    let rhs = &arena.surface.d2 * big_to_rat(value) * big_to_rat(value);
    Ok(lhs < rhs)
}

/// On the plane a submaximal curve is the unique one and computes both
/// constants: `eps = deg/nu_r(phi_C)` and `mu = nu_r(phi_C)/deg`.
pub fn p2_pin(arena: &SegmentArena, curve_idx: usize) -> Result<(Rat, Rat), CoreError> {
    if arena.surface.kind != crate::lattice::SurfaceKind::P2 {
        return Err(CoreError::invalid("the pinch rule applies on the projective plane only"));
    }
    if !submaximal_test(arena, curve_idx)? {
        return Err(CoreError::invalid(format!(
            "curve {} is not submaximal; it pins nothing",
            arena.curves[curve_idx].name
        )));
    }
    let curve = &arena.curves[curve_idx];
    let value = big_to_rat(&arena.curve_values[curve_idx]);
    Ok((&curve.d_c / &value, value / &curve.d_c))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VerdictStatus {
    Minimal,
    NonMinimal,
    Undetermined,
}

impl std::fmt::Display for VerdictStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            VerdictStatus::Minimal => write!(f, "Minimal"),
            VerdictStatus::NonMinimal => write!(f, "NonMinimal"),
            VerdictStatus::Undetermined => write!(f, "Undetermined"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Verdict {
    pub status: VerdictStatus,
    pub witness: Option<String>,
    /// True when the verdict rests on catalog completeness.
    pub conditional: bool,
    /// `beta_last >= 9 beta_0^2`, the exact threshold of the conjecture.
    pub conjecture_applicable: bool,
    pub eps: BoundInterval,
    pub mu: BoundInterval,
    pub eps_exact: Option<Surd>,
    pub mu_exact: Option<Surd>,
    pub tangent: TangentInfo,
    pub warnings: Vec<String>,
}

/// Decides minimality over the declared catalog.
pub fn minimality_verdict(
    arena: &SegmentArena,
    explicit_tangent: Option<&[usize]>,
    allow_satellite: bool,
) -> Result<Verdict, CoreError> {
    let (eps, tangent) = epsilon_bounds(arena, explicit_tangent, allow_satellite)?;
    let mu = mu_hat_bounds(arena, &eps.lo)?;
    let mut warnings = tangent.warnings.clone();
    let cap = seshadri_cap(arena)?;
    let mu_floor = Surd::sqrt_rat(&(&arena.surface.d2 * big_to_rat(arena.inv.beta_last())))?;
    let nine = BigInt::from(9);
    let conjecture_applicable =
        *arena.inv.beta_last() >= nine * arena.inv.beta0() * arena.inv.beta0();

    // Submaximal witnesses give an unconditional verdict.
    let mut submaximal: Vec<usize> = Vec::new();
    for c in 0..arena.curves.len() {
        if arena.curve_values[c].is_positive() && submaximal_test(arena, c)? {
            submaximal.push(c);
        }
    }
    if !submaximal.is_empty() {
        let best = submaximal
            .iter()
            .copied()
            .min_by(|&a, &b| {
                let ra = &arena.curves[a].d_c / big_to_rat(&arena.curve_values[a]);
                let rb = &arena.curves[b].d_c / big_to_rat(&arena.curve_values[b]);
                ra.cmp(&rb)
            })
            .expect("nonempty");
        if submaximal.len() > 1 && arena.surface.kind == crate::lattice::SurfaceKind::P2 {
            warnings.push(
                "several submaximal curves are declared; on the plane the submaximal curve \
                 is unique, so the catalog is inconsistent"
                    .into(),
            );
        }
        let (eps_exact, mu_exact) = match arena.surface.kind {
            crate::lattice::SurfaceKind::P2 => {
                let (e, m) = p2_pin(arena, best)?;
                (Some(Surd::from_rat(e)), Some(Surd::from_rat(m)))
            }
            crate::lattice::SurfaceKind::Custom => (None, None),
        };
        return Ok(Verdict {
            status: VerdictStatus::NonMinimal,
            witness: Some(arena.curves[best].name.clone()),
            conditional: false,
            conjecture_applicable,
            eps,
            mu,
            eps_exact,
            mu_exact,
            tangent,
            warnings,
        });
    }

    // Minimality by exact interval collapse.
    let eps_collapsed = eps.lo.cmp_exact(&cap) == Ordering::Equal;
    let mu_collapsed =
        mu.hi.as_ref().map_or(false, |hi| hi.cmp_exact(&mu_floor) == Ordering::Equal);
    if eps_collapsed || mu_collapsed {
        return Ok(Verdict {
            status: VerdictStatus::Minimal,
            witness: None,
            conditional: false,
            conjecture_applicable,
            eps,
            mu,
            eps_exact: Some(cap),
            mu_exact: Some(mu_floor),
            tangent,
            warnings,
        });
    }

    Ok(Verdict {
        status: VerdictStatus::Undetermined,
        witness: None,
        conditional: true,
        conjecture_applicable,
        eps,
        mu,
        eps_exact: None,
        mu_exact: None,
        tangent,
        warnings,
    })
}

/// The six equivalent statements, evaluated exactly on pinned constants.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteReport {
    /// `mu^2 = D^2 beta_last`
    pub a_mu_squared: bool,
    /// the polygon equals the bounding triangle
    pub b_polygon_is_triangle: bool,
    /// `P_mu` is nef over the catalog with `P_mu^2 = 0`
    pub c_p_mu_nef_square_zero: bool,
    /// `mu = eps * beta_last`
    pub d_mu_eq_eps_beta: bool,
    /// the segment crosses one chamber
    pub e_single_chamber: bool,
    /// `eps^2 beta_last = D^2`
    pub f_eps_maximal: bool,
    pub consistent: bool,
    /// item (c)'s nef half is certified against the catalog only
    pub conditional: bool,
}

impl SuiteReport {
    pub fn items(&self) -> [bool; 6] {
        [
            self.a_mu_squared,
            self.b_polygon_is_triangle,
            self.c_p_mu_nef_square_zero,
            self.d_mu_eq_eps_beta,
            self.e_single_chamber,
            self.f_eps_maximal,
        ]
    }
}

/// Evaluates the six statements for pinned `eps` and `mu`.
pub fn theorem_suite(
    arena: &SegmentArena,
    flag_data: &FlagData,
    eps: &Surd,
    mu: &Surd,
    walk: &ChamberWalk,
    polygon: &NokPolygon,
) -> Result<SuiteReport, CoreError> {
    let d2 = Surd::from_rat(arena.surface.d2.clone());
    let beta = big_to_rat(arena.inv.beta_last());
    let beta_s = Surd::from_rat(beta.clone());

    let a = mu.square().cmp_exact(&d2.checked_mul(&beta_s)?) == Ordering::Equal;

    let triangle = triangle_bound(flag_data, mu)?;
    let b = polygon_equal(&polygon.vertices, &triangle);

    // P_mu = D* - (mu/beta) sum nu(m_i) E_i*
    let scale = mu.div_rat(&beta)?;
    let mults_class = crate::lattice::NumericalClass::exceptional_combination(&arena.inv.mults);
    let pullback = crate::lattice::NumericalClass::pullback(arena.r());
    let mut nef = true;
    for idx in 0..arena.component_count() {
        let base = arena.pair_with_class(idx, &pullback);
        let drop = arena.pair_with_class(idx, &mults_class);
        let pairing = Surd::from_rat(base).checked_sub(&scale.checked_mul(&Surd::from_rat(drop))?)?;
        if pairing.sign() == Ordering::Less {
            nef = false;
            break;
        }
    }
    let p_mu_squared = d2.checked_sub(&mu.square().div_rat(&beta)?)?;
    let c = nef && p_mu_squared.is_zero();

    let d = mu.cmp_exact(&eps.scale(&beta)) == Ordering::Equal;
    let e = walk.chamber_count() == 1;
    let f = eps.square().scale(&beta).cmp_exact(&d2) == Ordering::Equal;

    let items = [a, b, c, d, e, f];
    let consistent = items.iter().all(|&v| v) || items.iter().all(|&v| !v);
    Ok(SuiteReport {
        a_mu_squared: a,
        b_polygon_is_triangle: b,
        c_p_mu_nef_square_zero: c,
        d_mu_eq_eps_beta: d,
        e_single_chamber: e,
        f_eps_maximal: f,
        consistent,
        conditional: true,
    })
}

/// Least positive integer `m` with `m D* - sum nu(m_i) E_i*` nef against the
/// catalog and the exceptional stricts; yields the conditional bound
/// `eps >= 1/m`.
pub fn nef_threshold(arena: &SegmentArena) -> Result<BigInt, CoreError> {
    let mut m = BigInt::one();
    for (c, curve) in arena.curves.iter().enumerate() {
        if !curve.d_c.is_positive() {
            return Err(CoreError::invalid(format!(
                "curve {} has non-positive degree against the ample divisor",
                curve.name
            )));
        }
        let needed = big_to_rat(&arena.curve_values[c]) / &curve.d_c;
        let ceil = crate::rat::ceil_at_least(&needed, 1);
        if ceil > m {
            m = ceil;
        }
    }
    // The exceptional stricts are nef-compatible by the proximity
    // equalities; verified here as an internal check.
    let mults_class = crate::lattice::NumericalClass::exceptional_combination(&arena.inv.mults);
    let pullback = crate::lattice::NumericalClass::pullback(arena.r());
    let f = pullback.scale(&big_to_rat(&m)).sub(&mults_class);
    for i in 0..arena.r() {
        if arena.pair_with_class(i, &f).is_negative() {
            return Err(CoreError::internal(
                "proximity equalities failed to keep the threshold divisor nef",
            ));
        }
    }
    Ok(m)
}

/// Inputs for the chamber-count report: the number of declared curves that
/// compute a pinned Seshadri constant, and whether that count exceeds the
/// Picard number. Zero when nothing is pinned.
pub fn chamber_report_inputs(arena: &SegmentArena, verdict: &Verdict) -> (usize, bool) {
    match &verdict.eps_exact {
        Some(eps) => computing_curve_count(arena, eps),
        None => (0, false),
    }
}

/// How many catalog curves compute a pinned Seshadri constant, checked
/// against the Picard number.
pub fn computing_curve_count(arena: &SegmentArena, eps: &Surd) -> (usize, bool) {
    let mut n = 0;
    for (c, curve) in arena.curves.iter().enumerate() {
        if !arena.curve_values[c].is_positive() {
            continue;
        }
        let ratio = Surd::from_rat(&curve.d_c / big_to_rat(&arena.curve_values[c]));
        if ratio.cmp_exact(eps) == Ordering::Equal {
            n += 1;
        }
    }
    (n, n > arena.surface.rho as usize)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::SurfaceModel;
    use crate::nok::{build_flag_data, nok_polygon, Flag};
    use crate::proximity::fixtures::{v1, v2, v3};
    use crate::rat::{int, rat, ratio};
    use crate::zariski::fixtures::line_through;
    use crate::zariski::{chamber_walk, TMax};

    fn arena_v2() -> SegmentArena {
        SegmentArena::new(SurfaceModel::p2(), v2(), vec![line_through(3, 2)]).unwrap()
    }

    fn arena_v3(r: usize) -> SegmentArena {
        SegmentArena::new(SurfaceModel::p2(), v3(r), vec![line_through(r, r)]).unwrap()
    }

    #[test]
    fn epsilon_bounds_fixtures() {
        let (eps, info) = epsilon_bounds(&arena_v2(), None, false).unwrap();
        assert_eq!(info.t, int(3));
        assert_eq!(info.delta0, int(0));
        assert_eq!(eps.lo.as_rat().unwrap(), &ratio(1, 5));
        assert_eq!(eps.hi.as_ref().unwrap().as_rat().unwrap(), &ratio(1, 3));
        assert_eq!(eps.hi_witness, Witness::Curve("H".into()));

        let (eps, info) = epsilon_bounds(&arena_v3(3), None, false).unwrap();
        // the declared collinear line raises t to 3
        assert_eq!(info.t, int(3));
        assert_eq!(info.delta0, int(0));
        assert_eq!(eps.lo.as_rat().unwrap(), &ratio(1, 4));
        assert_eq!(eps.hi.as_ref().unwrap().as_rat().unwrap(), &ratio(1, 3));

        let arena = SegmentArena::new(SurfaceModel::p2(), v1(), vec![]).unwrap();
        let (eps, info) = epsilon_bounds(&arena, None, false).unwrap();
        assert_eq!(info.delta0, int(-1));
        assert_eq!(eps.lo.as_rat().unwrap(), &rat(1));
        assert_eq!(eps.hi.as_ref().unwrap().as_rat().unwrap(), &rat(1));
    }

    #[test]
    fn mu_bounds_fixtures() {
        let arena = arena_v2();
        let (eps, _) = epsilon_bounds(&arena, None, false).unwrap();
        let mu = mu_hat_bounds(&arena, &eps.lo).unwrap();
        assert_eq!(mu.lo.as_rat().unwrap(), &rat(3));
        assert_eq!(mu.lo_witness, Witness::Curve("H".into()));
        assert_eq!(mu.hi.as_ref().unwrap().as_rat().unwrap(), &rat(5));

        let arena = arena_v3(2);
        let (eps, _) = epsilon_bounds(&arena, None, false).unwrap();
        assert_eq!(eps.lo.as_rat().unwrap(), &ratio(1, 3));
        let mu = mu_hat_bounds(&arena, &eps.lo).unwrap();
        assert_eq!(mu.lo.as_rat().unwrap(), &rat(2));
        assert_eq!(mu.hi.as_ref().unwrap().as_rat().unwrap(), &rat(3));

        // without a catalog the floor is the radical
        let bare = SegmentArena::new(SurfaceModel::p2(), v2(), vec![]).unwrap();
        let (eps, _) = epsilon_bounds(&bare, None, false).unwrap();
        let mu = mu_hat_bounds(&bare, &eps.lo).unwrap();
        assert_eq!(mu.lo, Surd::sqrt_rat(&rat(6)).unwrap());
        assert_eq!(mu.hi.as_ref().unwrap().as_rat().unwrap(), &rat(5));
    }

    #[test]
    fn submaximality() {
        let arena = arena_v2();
        assert!(submaximal_test(&arena, 0).unwrap());
        let arena = arena_v3(2);
        assert!(submaximal_test(&arena, 0).unwrap());
        // a line through one point of a single blowup sits exactly on the
        // boundary: not submaximal
        let arena =
            SegmentArena::new(SurfaceModel::p2(), v1(), vec![line_through(1, 1)]).unwrap();
        assert!(!submaximal_test(&arena, 0).unwrap());
        assert!(p2_pin(&arena, 0).is_err());
        // vanishing valuation is an error
        let arena =
            SegmentArena::new(SurfaceModel::p2(), v1(), vec![line_through(1, 0)]).unwrap();
        assert!(submaximal_test(&arena, 0).is_err());
    }

    #[test]
    fn pinning() {
        let (e, m) = p2_pin(&arena_v2(), 0).unwrap();
        assert_eq!(e, ratio(1, 3));
        assert_eq!(m, rat(3));
        for r in 2..=6 {
            let (e, m) = p2_pin(&arena_v3(r), 0).unwrap();
            assert_eq!(e, ratio(1, r as i64));
            assert_eq!(m, rat(r as i64));
        }
    }

    #[test]
    fn verdicts() {
        let v = minimality_verdict(&arena_v2(), None, false).unwrap();
        assert_eq!(v.status, VerdictStatus::NonMinimal);
        assert_eq!(v.witness.as_deref(), Some("H"));
        assert!(!v.conditional);
        assert!(!v.conjecture_applicable);
        assert_eq!(v.eps_exact.unwrap().as_rat().unwrap(), &ratio(1, 3));
        assert_eq!(v.mu_exact.unwrap().as_rat().unwrap(), &rat(3));

        let arena = SegmentArena::new(SurfaceModel::p2(), v1(), vec![]).unwrap();
        let v = minimality_verdict(&arena, None, false).unwrap();
        assert_eq!(v.status, VerdictStatus::Minimal);
        assert_eq!(v.eps_exact.unwrap().as_rat().unwrap(), &rat(1));
        assert!(!v.conditional);

        let bare = SegmentArena::new(SurfaceModel::p2(), v2(), vec![]).unwrap();
        let v = minimality_verdict(&bare, None, false).unwrap();
        assert_eq!(v.status, VerdictStatus::Undetermined);
        assert!(v.conditional);
        assert_eq!(v.mu.lo, Surd::sqrt_rat(&rat(6)).unwrap());
        assert_eq!(v.mu.hi.unwrap().as_rat().unwrap(), &rat(5));
    }

    #[test]
    fn suite_on_fixtures() {
        // V1: all six statements hold
        let arena = SegmentArena::new(SurfaceModel::p2(), v1(), vec![]).unwrap();
        let walk = chamber_walk(&arena, &TMax::Auto).unwrap();
        let data = build_flag_data(&arena.ps, &arena.inv, Flag::Free).unwrap();
        let poly = nok_polygon(&arena, &walk, Flag::Free).unwrap();
        let one = Surd::from_int(1);
        let report = theorem_suite(&arena, &data, &one, &one, &walk, &poly).unwrap();
        assert!(report.items().iter().all(|&v| v));
        assert!(report.consistent);

        // V2: all six fail, consistently
        let arena = arena_v2();
        let walk = chamber_walk(&arena, &TMax::Auto).unwrap();
        let data = build_flag_data(&arena.ps, &arena.inv, Flag::Free).unwrap();
        let poly = nok_polygon(&arena, &walk, Flag::Free).unwrap();
        let eps = Surd::from_rat(ratio(1, 3));
        let mu = Surd::from_int(3);
        let report = theorem_suite(&arena, &data, &eps, &mu, &walk, &poly).unwrap();
        assert!(report.items().iter().all(|&v| !v), "{report:?}");
        assert!(report.consistent);

        // V3(2) likewise
        let arena = arena_v3(2);
        let walk = chamber_walk(&arena, &TMax::Auto).unwrap();
        let data = build_flag_data(&arena.ps, &arena.inv, Flag::Free).unwrap();
        let poly = nok_polygon(&arena, &walk, Flag::Free).unwrap();
        let eps = Surd::from_rat(ratio(1, 2));
        let mu = Surd::from_int(2);
        let report = theorem_suite(&arena, &data, &eps, &mu, &walk, &poly).unwrap();
        assert!(report.items().iter().all(|&v| !v), "{report:?}");
        assert!(report.consistent);
    }

    #[test]
    fn thresholds_and_counts() {
        assert_eq!(nef_threshold(&arena_v2()).unwrap(), int(3));
        let arena = SegmentArena::new(SurfaceModel::p2(), v1(), vec![]).unwrap();
        assert_eq!(nef_threshold(&arena).unwrap(), int(1));
        assert_eq!(nef_threshold(&arena_v3(4)).unwrap(), int(4));

        let (n, flagged) = computing_curve_count(&arena_v2(), &Surd::from_rat(ratio(1, 3)));
        assert_eq!(n, 1);
        assert!(!flagged);
        let (n, _) = computing_curve_count(&arena_v3(2), &Surd::from_rat(ratio(1, 2)));
        assert_eq!(n, 1);
        let arena = SegmentArena::new(SurfaceModel::p2(), v1(), vec![]).unwrap();
        let (n, _) = computing_curve_count(&arena, &Surd::from_int(1));
        assert_eq!(n, 0);
    }

    #[test]
    fn prop_inequalities_on_pinned_fixtures() {
        // eps * beta <= mu with strictness exactly in the non-minimal case,
        // and eps * mu = D^2 on the plane
        for r in 2..=6usize {
            let arena = arena_v3(r);
            let v = minimality_verdict(&arena, None, false).unwrap();
            let eps = v.eps_exact.unwrap();
            let mu = v.mu_exact.unwrap();
            let beta = big_to_rat(arena.inv.beta_last());
            let lhs = eps.scale(&beta);
            assert_eq!(lhs.cmp_exact(&mu), Ordering::Less);
            let product = eps.checked_mul(&mu).unwrap();
            assert_eq!(product.as_rat().unwrap(), &rat(1));
        }
    }
}
