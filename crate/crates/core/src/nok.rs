//! Flags on the last exceptional divisor, the rank-two valuations they
//! define, and Newton-Okounkov polygons assembled from a chamber walk.
//!
//! The polygon of a big and nef divisor with respect to such a flag is
//! `{(t, y) : 0 <= t <= t_end, alpha(t) <= y <= beta(t)}` where `alpha`
//! collects the negative-part coefficients of the components through the
//! flag center and `beta = alpha + P_t . E_r`. Both maps are piecewise
//! affine with kinks exactly at the chamber breakpoints, so the polygon is
//! assembled from the walk's interval data with no further computation.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::CoreError;
use crate::proximity::{noether_value, ProximityStructure, ValuationInvariants};
use crate::rat::{big_to_rat, Rat};
use crate::surd::Surd;
use crate::zariski::{Affine, ChamberWalk, ComponentId, SegmentArena};

/// A flag `S_r > E_r > {center}`. The center is either a general point of
/// `E_r` or the intersection point `E_eta ∩ E_r`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Flag {
    Free,
    Satellite(usize),
}

/// Data of the exceptional curve valuation defined by a flag: the value of
/// the curvette through `E_eta`, the generator count marker `g*`, and the
/// two boundary slopes shared by the bounding and inscribed triangles.
#[derive(Clone, Debug, PartialEq)]
pub struct FlagData {
    pub flag: Flag,
    /// `nu_r(phi_eta)` for a satellite flag.
    pub phi_eta: Option<BigInt>,
    pub gstar: usize,
    pub slope_low: Rat,
    pub slope_high: Rat,
    /// Cross-check findings; non-empty only when the semigroup identities
    /// could not be verified for an exotic configuration.
    pub diagnostics: Vec<String>,
}

/// Is there a path from vertex 1 to `to` through `via` in the dual graph?
fn on_path_from_root(ps: &ProximityStructure, via: usize, to: usize) -> bool {
    let r = ps.len();
    let mut adj = vec![Vec::new(); r + 1];
    for (a, b) in ps.dual_graph_edges() {
        adj[a].push(b);
        adj[b].push(a);
    }
    // unique tree path from 1 to `to` by parent tracing
    let mut parent = vec![0usize; r + 1];
    let mut seen = vec![false; r + 1];
    let mut queue = std::collections::VecDeque::from([1usize]);
    seen[1] = true;
    while let Some(v) = queue.pop_front() {
        for &w in &adj[v] {
            if !seen[w] {
                seen[w] = true;
                parent[w] = v;
                queue.push_back(w);
            }
        }
    }
    let mut v = to;
    loop {
        if v == via {
            return true;
        }
        if v == 1 {
            return false;
        }
        v = parent[v];
    }
}

/// Builds the flag data, computing `nu_r(phi_eta)` directly by the Noether
/// formula and verifying the semigroup identities of the satellite case as
/// cross-checks.
pub fn build_flag_data(
    ps: &ProximityStructure,
    inv: &ValuationInvariants,
    flag: Flag,
) -> Result<FlagData, CoreError> {
    let r = ps.len();
    let beta_last = big_to_rat(inv.beta_last());
    match flag {
        Flag::Free => Ok(FlagData {
            flag,
            phi_eta: None,
            gstar: inv.g() + 1,
            slope_low: Rat::zero(),
            slope_high: Rat::one() / &beta_last,
            diagnostics: Vec::new(),
        }),
        Flag::Satellite(eta) => {
            if r < 2 || eta < 1 || eta >= r {
                return Err(CoreError::invalid(format!(
                    "satellite flag target {eta} is out of range for {r} centers"
                )));
            }
            if ps.last_proximate(eta) != Some(r) {
                return Err(CoreError::invalid(format!(
                    "E{eta} does not meet E{r}: the flag center E{eta} ∩ E{r} does not exist"
                )));
            }
            let germ = ps.curvette_multiplicities(eta)?;
            let phi_eta = noether_value(&inv.mults, &germ)?;
            // p_{r+1} = E_eta ∩ E_r is a satellite point; g* = g exactly
            // when p_r is one as well.
            let gstar = if ps.is_satellite(r) { inv.g() } else { inv.g() + 1 };
            let mut diagnostics = Vec::new();
            let eta_inv = ValuationInvariants::compute(&ps.truncate(eta));
            if gstar >= eta_inv.betas.len() || gstar >= inv.betas.len() {
                diagnostics.push(format!(
                    "g* = {gstar} exceeds a maximal-contact sequence (lengths {} and {}); \
                     the semigroup identities were not checked",
                    eta_inv.betas.len(),
                    inv.betas.len()
                ));
            } else {
                let ratio_gstar =
                    big_to_rat(&eta_inv.betas[gstar]) / big_to_rat(&inv.betas[gstar]);
                let ratio_zero = big_to_rat(eta_inv.beta0()) / big_to_rat(inv.beta0());
                // |beta_{g*}(eta)/beta_{g*}(r) - beta_0(eta)/beta_0(r)| = 1/beta_{g+1}
                let gap = (&ratio_gstar - &ratio_zero).abs();
                if gap * &beta_last != Rat::one() {
                    diagnostics.push(format!(
                        "maximal-contact identity failed for eta = {eta}; values are taken \
                         from the direct Noether evaluation"
                    ));
                } else {
                    // the two slope values must be phi and phi + 1 over beta,
                    // matched to the dual-graph order of eta against r
                    let phi = big_to_rat(&phi_eta);
                    let phi1 = &phi + Rat::one();
                    let (expect_lo, expect_hi) = if on_path_from_root(ps, eta, r) {
                        (&beta_last * &ratio_gstar, &beta_last * &ratio_zero)
                    } else {
                        (&beta_last * &ratio_zero, &beta_last * &ratio_gstar)
                    };
                    if expect_lo != phi || expect_hi != phi1 {
                        diagnostics.push(format!(
                            "slope dichotomy mismatch for eta = {eta}: expected ({}, {}), \
                             Noether gives ({}, {})",
                            expect_lo, expect_hi, phi, phi1
                        ));
                    }
                }
            }
            let slope_low = big_to_rat(&phi_eta) / &beta_last;
            let slope_high = &slope_low + Rat::one() / &beta_last;
            Ok(FlagData {
                flag,
                phi_eta: Some(phi_eta),
                gstar,
                slope_low,
                slope_high,
                diagnostics,
            })
        }
    }
}

/// An exact point of the value plane.
#[derive(Clone, Debug, PartialEq)]
pub struct ExactPoint {
    pub x: Surd,
    pub y: Surd,
}

impl ExactPoint {
    pub fn rational(x: Rat, y: Rat) -> Self {
        ExactPoint { x: Surd::from_rat(x), y: Surd::from_rat(y) }
    }

    pub fn from_ints(x: i64, y: i64) -> Self {
        Self::rational(crate::rat::rat(x), crate::rat::rat(y))
    }
}

/// Twice the signed area of the corner `o -> a -> b`.
pub fn cross(o: &ExactPoint, a: &ExactPoint, b: &ExactPoint) -> Result<Surd, CoreError> {
    let ax = a.x.checked_sub(&o.x)?;
    let ay = a.y.checked_sub(&o.y)?;
    let bx = b.x.checked_sub(&o.x)?;
    let by = b.y.checked_sub(&o.y)?;
    ax.checked_mul(&by)?.checked_sub(&ay.checked_mul(&bx)?)
}

/// Exact area of a simple polygon (shoelace).
pub fn polygon_area(vertices: &[ExactPoint]) -> Result<Surd, CoreError> {
    let n = vertices.len();
    let mut twice = Surd::from_rat(Rat::zero());
    for i in 0..n {
        let a = &vertices[i];
        let b = &vertices[(i + 1) % n];
        let term = a.x.checked_mul(&b.y)?.checked_sub(&b.x.checked_mul(&a.y)?)?;
        twice = twice.checked_add(&term)?;
    }
    if twice.sign() == Ordering::Less {
        twice = twice.neg();
    }
    twice.div_rat(&crate::rat::rat(2))
}

/// Is the polygon convex? Collinear corners are tolerated.
pub fn is_convex(vertices: &[ExactPoint]) -> Result<bool, CoreError> {
    let n = vertices.len();
    if n < 3 {
        return Ok(false);
    }
    let mut orientation = Ordering::Equal;
    for i in 0..n {
        let c = cross(&vertices[i], &vertices[(i + 1) % n], &vertices[(i + 2) % n])?;
        let s = c.sign();
        if s == Ordering::Equal {
            continue;
        }
        if orientation == Ordering::Equal {
            orientation = s;
        } else if s != orientation {
            return Ok(false);
        }
    }
    Ok(orientation != Ordering::Equal)
}

/// Point membership in a convex polygon, boundary included.
pub fn convex_contains(vertices: &[ExactPoint], point: &ExactPoint) -> Result<bool, CoreError> {
    let n = vertices.len();
    let mut orientation = Ordering::Equal;
    for i in 0..n {
        let c = cross(&vertices[i], &vertices[(i + 1) % n], &vertices[(i + 2) % n])?;
        if c.sign() != Ordering::Equal {
            orientation = c.sign();
            break;
        }
    }
    if orientation == Ordering::Equal {
        return Err(CoreError::invalid("degenerate polygon"));
    }
    for i in 0..n {
        let c = cross(&vertices[i], &vertices[(i + 1) % n], point)?;
        let s = c.sign();
        if s != Ordering::Equal && s != orientation {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Containment of one convex polygon in another.
pub fn convex_subset(inner: &[ExactPoint], outer: &[ExactPoint]) -> Result<bool, CoreError> {
    for v in inner {
        if !convex_contains(outer, v)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Equality of polygons as vertex sets (convex polygons with minimal vertex
/// lists coincide exactly when their vertex sets do).
pub fn polygon_equal(a: &[ExactPoint], b: &[ExactPoint]) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let mut sa: Vec<ExactPoint> = a.to_vec();
    let mut sb: Vec<ExactPoint> = b.to_vec();
    let cmp = |p: &ExactPoint, q: &ExactPoint| match p.x.cmp_exact(&q.x) {
        Ordering::Equal => p.y.cmp_exact(&q.y),
        o => o,
    };
    sa.sort_by(cmp);
    sb.sort_by(cmp);
    sa == sb
}

/// One affine piece of the boundary maps.
#[derive(Clone, Debug)]
pub struct BoundaryPiece {
    pub lo: Rat,
    pub hi: Surd,
    pub alpha: Affine,
    pub beta: Affine,
}

/// The Newton-Okounkov polygon with its boundary data.
#[derive(Clone, Debug)]
pub struct NokPolygon {
    /// Canonical order: origin, then the upper boundary `beta` left to
    /// right, then the lower boundary `alpha` right to left.
    pub vertices: Vec<ExactPoint>,
    pub pieces: Vec<BoundaryPiece>,
    pub t_end: Surd,
    pub area: Surd,
    /// Exact area identity `2 area = D^2`; false when the walk was
    /// truncated before `P_t^2 = 0`.
    pub complete: bool,
    pub warnings: Vec<String>,
}

/// Local meeting number of a negative-part component at the flag center.
fn flag_meet(arena: &SegmentArena, flag: Flag, component: usize) -> Rat {
    match (arena.components[component], flag) {
        (ComponentId::Exc(i), Flag::Satellite(eta)) if i == eta => Rat::one(),
        (ComponentId::Exc(_), _) => Rat::zero(),
        (ComponentId::Curve(c), _) => big_to_rat(&arena.curves[c].flag_meet),
    }
}

/// Assembles the polygon from a chamber walk.
pub fn nok_polygon(
    arena: &SegmentArena,
    walk: &ChamberWalk,
    flag: Flag,
) -> Result<NokPolygon, CoreError> {
    let mut pieces = Vec::with_capacity(walk.intervals.len());
    for iv in &walk.intervals {
        let mut alpha = Affine { c0: Rat::zero(), c1: Rat::zero() };
        for (pos, &c) in iv.neg.iter().enumerate() {
            let meet = flag_meet(arena, flag, c);
            if !meet.is_zero() {
                alpha.c0 += &iv.coeffs[pos].c0 * &meet;
                alpha.c1 += &iv.coeffs[pos].c1 * &meet;
            }
        }
        let beta = Affine { c0: &alpha.c0 + &iv.p_dot_er.c0, c1: &alpha.c1 + &iv.p_dot_er.c1 };
        pieces.push(BoundaryPiece { lo: iv.lo.clone(), hi: iv.hi.clone(), alpha, beta });
    }

    // Chains of boundary points at the breakpoints and the endpoint.
    let mut upper: Vec<ExactPoint> = Vec::new();
    let mut lower: Vec<ExactPoint> = Vec::new();
    for (i, piece) in pieces.iter().enumerate() {
        let lo = Surd::from_rat(piece.lo.clone());
        if i == 0 {
            upper.push(ExactPoint { x: lo.clone(), y: piece.beta.eval_surd(&lo) });
            lower.push(ExactPoint { x: lo.clone(), y: piece.alpha.eval_surd(&lo) });
        }
        let hi = piece.hi.clone();
        upper.push(ExactPoint { x: hi.clone(), y: piece.beta.eval_surd(&hi) });
        lower.push(ExactPoint { x: hi.clone(), y: piece.alpha.eval_surd(&hi) });
    }
    // Canonical circuit: upper chain, right edge, reversed lower chain.
    let mut circuit = upper;
    let mut lower_rev: Vec<ExactPoint> = lower.into_iter().rev().collect();
    circuit.append(&mut lower_rev);
    // Drop consecutive duplicates and collinear middles.
    let mut vertices: Vec<ExactPoint> = Vec::new();
    for p in circuit {
        if vertices.last() == Some(&p) {
            continue;
        }
        vertices.push(p);
    }
    while vertices.len() > 1 && vertices.last() == vertices.first() {
        vertices.pop();
    }
    let mut changed = true;
    while changed && vertices.len() > 3 {
        changed = false;
        let n = vertices.len();
        for i in 0..n {
            let o = vertices[(i + n - 1) % n].clone();
            let a = vertices[i].clone();
            let b = vertices[(i + 1) % n].clone();
            if cross(&o, &a, &b)?.sign() == Ordering::Equal {
                vertices.remove(i);
                changed = true;
                break;
            }
        }
    }
    if vertices.len() < 3 {
        return Err(CoreError::internal("Newton-Okounkov polygon degenerated"));
    }
    if !is_convex(&vertices)? {
        return Err(CoreError::internal("Newton-Okounkov polygon is not convex"));
    }
    let area = polygon_area(&vertices)?;
    let twice = area.scale(&crate::rat::rat(2));
    let complete = twice.cmp_exact(&Surd::from_rat(arena.surface.d2.clone())) == Ordering::Equal;
    Ok(NokPolygon {
        vertices,
        pieces,
        t_end: walk.t_end.clone(),
        area,
        complete,
        warnings: walk.warnings.clone(),
    })
}

/// The bounding triangle: `(0,0)`, `(mu, mu s_high)`, `(mu, mu s_low)` in
/// the canonical circuit order.
pub fn triangle_bound(data: &FlagData, mu_hat: &Surd) -> Result<Vec<ExactPoint>, CoreError> {
    if mu_hat.sign() != Ordering::Greater {
        return Err(CoreError::invalid("the triangle needs a positive Seshadri-type value"));
    }
    let origin = ExactPoint::rational(Rat::zero(), Rat::zero());
    let top = ExactPoint { x: mu_hat.clone(), y: mu_hat.scale(&data.slope_high) };
    let bottom = ExactPoint { x: mu_hat.clone(), y: mu_hat.scale(&data.slope_low) };
    Ok(vec![origin, top, bottom])
}

/// The inscribed triangle: `(0,0)` and `eps * (beta, beta s_high)`,
/// `eps * (beta, beta s_low)`, in canonical circuit order.
pub fn triangle_inscribed(
    data: &FlagData,
    inv: &ValuationInvariants,
    eps: &Surd,
) -> Result<Vec<ExactPoint>, CoreError> {
    if eps.sign() != Ordering::Greater {
        return Err(CoreError::invalid("the inscribed triangle needs a positive Seshadri value"));
    }
    let beta = big_to_rat(inv.beta_last());
    let x = eps.scale(&beta);
    let origin = ExactPoint::rational(Rat::zero(), Rat::zero());
    let top = ExactPoint { x: x.clone(), y: eps.scale(&(&beta * &data.slope_high)) };
    let bottom = ExactPoint { x, y: eps.scale(&(&beta * &data.slope_low)) };
    Ok(vec![origin, top, bottom])
}
