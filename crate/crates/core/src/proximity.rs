//! Proximity structures of simple blowup sequences and the invariants they
//! determine: multiplicity sequences, dual graphs, maximal contact values,
//! volumes, semigroup membership and tangent-line values.
//!
//! A divisorial valuation is stored purely combinatorially: for each center
//! `p_i`, `i >= 2`, the set of earlier centers it is proximate to. That set
//! always contains `i - 1` and at most one further index; a point carrying
//! the extra index is a satellite, the others are free.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::CoreError;
use crate::rat::Rat;

/// Raw per-point declaration, as it appears in scene text.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PointDecl {
    Free,
    /// Satellite proximate to `p_target` in addition to its predecessor.
    Sat { target: usize },
}

/// Validated configuration of infinitely near centers `p_1 .. p_r`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProximityStructure {
    r: usize,
    /// `sat[i - 1]` is the extra proximity target of `p_i`, if any.
    sat: Vec<Option<usize>>,
}

impl ProximityStructure {
    /// Checks the simple-sequence constraints and builds the structure.
    pub fn validate(decls: &[PointDecl]) -> Result<Self, CoreError> {
        if decls.is_empty() {
            return Err(CoreError::invalid("a valuation needs at least one center"));
        }
        if decls[0] != PointDecl::Free {
            return Err(CoreError::invalid("p1 must be free"));
        }
        let r = decls.len();
        let mut sat = vec![None; r];
        for (idx, decl) in decls.iter().enumerate() {
            let i = idx + 1;
            if let PointDecl::Sat { target } = *decl {
                if target < 1 || target >= i - 1 {
                    if i == 2 {
                        return Err(CoreError::invalid(
                            "satellite target out of range: p2 is always free",
                        ));
                    }
                    return Err(CoreError::invalid(format!(
                        "satellite target {target} out of range for p{i} (must be in 1..={})",
                        i - 2
                    )));
                }
                sat[idx] = Some(target);
            }
        }
        let ps = ProximityStructure { r, sat };
        // Points proximate to p_j must form a consecutive block starting at
        // j + 1.
        for j in 1..=r {
            let block: Vec<usize> = (1..=r).filter(|&i| ps.is_proximate(i, j)).collect();
            if block.is_empty() {
                continue;
            }
            let first = block[0];
            let last = block[block.len() - 1];
            if first != j + 1 || block.len() != last - first + 1 {
                return Err(CoreError::invalid(format!(
                    "points proximate to p{j} are not a consecutive block starting at p{}",
                    j + 1
                )));
            }
        }
        Ok(ps)
    }

    pub fn free_points(r: usize) -> Self {
        ProximityStructure { r, sat: vec![None; r] }
    }

    pub fn len(&self) -> usize {
        self.r
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Is `p_i` proximate to `p_j`?
    pub fn is_proximate(&self, i: usize, j: usize) -> bool {
        i >= 2 && i <= self.r && (j == i - 1 || self.sat[i - 1] == Some(j))
    }

    /// Proximity targets of `p_i`, ascending.
    pub fn prox(&self, i: usize) -> Vec<usize> {
        let mut out = Vec::with_capacity(2);
        if i >= 2 {
            if let Some(t) = self.sat[i - 1] {
                out.push(t);
            }
            out.push(i - 1);
            out.sort_unstable();
        }
        out
    }

    pub fn is_satellite(&self, i: usize) -> bool {
        self.sat[i - 1].is_some()
    }

    pub fn declarations(&self) -> Vec<PointDecl> {
        self.sat
            .iter()
            .map(|s| match s {
                None => PointDecl::Free,
                Some(t) => PointDecl::Sat { target: *t },
            })
            .collect()
    }

    /// Largest `k` with `p_k` proximate to `p_j`, when it exists.
    pub fn last_proximate(&self, j: usize) -> Option<usize> {
        (2..=self.r).rev().find(|&k| self.is_proximate(k, j))
    }

    /// Restriction to the first `i` centers (the truncated valuation).
    pub fn truncate(&self, i: usize) -> ProximityStructure {
        ProximityStructure { r: i, sat: self.sat[..i].to_vec() }
    }

    /// The sequence of values `nu(m_1) .. nu(m_r)` under the normalization
    /// `nu(m_r) = 1`, from the proximity equalities solved backwards.
    pub fn multiplicity_sequence(&self) -> Vec<BigInt> {
        let r = self.r;
        let mut mults = vec![BigInt::zero(); r];
        mults[r - 1] = BigInt::one();
        for i in (1..r).rev() {
            let mut sum = BigInt::zero();
            for j in i + 1..=r {
                if self.is_proximate(j, i) {
                    sum += &mults[j - 1];
                }
            }
            mults[i - 1] = sum;
        }
        mults
    }

    /// Dual graph edges: `E_j` meets `E_{last(j)}`.
    pub fn dual_graph_edges(&self) -> Vec<(usize, usize)> {
        (1..self.r)
            .map(|j| (j, self.last_proximate(j).expect("every non-final vertex has a successor")))
            .collect()
    }

    /// Degree-one vertices of the dual graph excluding `r`, ascending.
    /// By convention a single blowup has `stars = [1]`.
    pub fn star_vertices(&self) -> Vec<usize> {
        if self.r == 1 {
            return vec![1];
        }
        let mut degree = vec![0usize; self.r + 1];
        for (a, b) in self.dual_graph_edges() {
            degree[a] += 1;
            degree[b] += 1;
        }
        (1..self.r).filter(|&v| degree[v] == 1).collect()
    }

    /// Germ multiplicities of the curvette through `E_i`: the multiplicity
    /// sequence of the truncated valuation, padded with zeros.
    pub fn curvette_multiplicities(&self, i: usize) -> Result<Vec<BigInt>, CoreError> {
        if i < 1 || i > self.r {
            return Err(CoreError::invalid(format!("curvette index {i} out of range 1..={}", self.r)));
        }
        let mut out = self.truncate(i).multiplicity_sequence();
        out.resize(self.r, BigInt::zero());
        Ok(out)
    }
}

/// Everything the proximity structure determines about the valuation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValuationInvariants {
    pub mults: Vec<BigInt>,
    pub dual_edges: Vec<(usize, usize)>,
    /// Star indices `l_0 < .. < l_g`.
    pub stars: Vec<usize>,
    /// Maximal contact values `beta_0 .. beta_{g+1}`.
    pub betas: Vec<BigInt>,
    pub vol: Rat,
    pub vol_n: Rat,
    pub vol_n_inv: Rat,
}

impl ValuationInvariants {
    pub fn compute(ps: &ProximityStructure) -> Self {
        let mults = ps.multiplicity_sequence();
        let dual_edges = ps.dual_graph_edges();
        let stars = ps.star_vertices();
        let mut betas: Vec<BigInt> = stars
            .iter()
            .map(|&l| {
                let germ = ps.curvette_multiplicities(l).expect("star index in range");
                noether_value(&mults, &germ).expect("equal lengths")
            })
            .collect();
        let beta_last: BigInt = mults.iter().map(|m| m * m).sum();
        betas.push(beta_last.clone());
        let beta0 = betas[0].clone();
        let vol = Rat::new(BigInt::one(), beta_last.clone());
        let vol_n = Rat::new(&beta0 * &beta0, beta_last.clone());
        let vol_n_inv = Rat::new(beta_last, &beta0 * &beta0);
        ValuationInvariants { mults, dual_edges, stars, betas, vol, vol_n, vol_n_inv }
    }

    pub fn g(&self) -> usize {
        self.stars.len() - 1
    }

    pub fn beta0(&self) -> &BigInt {
        &self.betas[0]
    }

    /// `beta_{g+1} = sum of squared multiplicities = 1/vol`.
    pub fn beta_last(&self) -> &BigInt {
        &self.betas[self.betas.len() - 1]
    }

    /// Values of the normalized valuation: each beta divided by `beta_0`.
    pub fn normalized_betas(&self) -> Vec<Rat> {
        self.betas.iter().map(|b| Rat::new(b.clone(), self.beta0().clone())).collect()
    }
}

/// Noether formula: `nu(f) = sum_i nu(m_i) * mult_{p_i}(f)`.
pub fn noether_value(mults: &[BigInt], germ: &[BigInt]) -> Result<BigInt, CoreError> {
    if mults.len() != germ.len() {
        return Err(CoreError::invalid(format!(
            "length mismatch: {} multiplicities vs {} germ entries",
            mults.len(),
            germ.len()
        )));
    }
    Ok(mults.iter().zip(germ).map(|(m, g)| m * g).sum())
}

/// Membership of `v` in the numerical semigroup generated by `gens`,
/// by bounded dynamic programming over `0..=v`.
pub fn semigroup_contains(gens: &[BigInt], v: &BigInt) -> Result<bool, CoreError> {
    if gens.is_empty() || gens.iter().any(|g| !g.is_positive()) {
        return Err(CoreError::invalid("semigroup generators must be positive"));
    }
    if v.is_negative() {
        return Ok(false);
    }
    if v.is_zero() {
        return Ok(true);
    }
    let bound = v
        .to_usize()
        .filter(|&b| b <= 50_000_000)
        .ok_or_else(|| CoreError::invalid("semigroup membership target exceeds the search bound"))?;
    let gens: Vec<usize> = gens.iter().filter_map(|g| g.to_usize()).filter(|&g| g <= bound).collect();
    let mut reachable = vec![false; bound + 1];
    reachable[0] = true;
    for &g in &gens {
        for s in g..=bound {
            if reachable[s - g] {
                reachable[s] = true;
            }
        }
    }
    Ok(reachable[bound])
}

/// The tangent-line value `t(nu_r)`: one for a single blowup, otherwise the
/// sum of multiplicities over the centers the tangent line passes through.
/// The very-general default is `{1, 2}`; an explicit incidence set may
/// override it. Smooth germs through satellite points are rejected unless
/// `allow_satellite` is set, in which case a warning is returned.
pub fn tangent_line_value(
    ps: &ProximityStructure,
    override_points: Option<&[usize]>,
    allow_satellite: bool,
) -> Result<(BigInt, Vec<String>), CoreError> {
    let mults = ps.multiplicity_sequence();
    if ps.len() == 1 {
        return Ok((BigInt::one(), Vec::new()));
    }
    let points: Vec<usize> = match override_points {
        Some(p) => p.to_vec(),
        None => vec![1, 2],
    };
    let mut warnings = Vec::new();
    for (pos, &p) in points.iter().enumerate() {
        if p != pos + 1 {
            return Err(CoreError::invalid(
                "tangent incidence must be a consecutive prefix 1..k of the centers",
            ));
        }
    }
    if points.len() < 2 {
        return Err(CoreError::invalid("a tangent line passes through p1 and p2 at least"));
    }
    if points.len() > ps.len() {
        return Err(CoreError::invalid("tangent incidence mentions more centers than exist"));
    }
    for &p in &points {
        if p >= 3 && ps.is_satellite(p) {
            if !allow_satellite {
                return Err(CoreError::invalid(format!(
                    "tangent incidence includes satellite p{p}; a smooth germ cannot pass through \
                     a satellite point in general position (set allow_satellite to override)"
                )));
            }
            warnings.push(format!(
                "tangent incidence includes satellite p{p}; values are taken as declared"
            ));
        }
    }
    let t = points.iter().map(|&p| mults[p - 1].clone()).sum();
    Ok((t, warnings))
}

#[cfg(test)]
pub(crate) mod strategies {
    use super::*;
    use proptest::prelude::*;

    /// Random valid structures: each point is free or a satellite with one
    /// of the currently legal targets (those `j` with `last(j) == i - 1`).
    pub(crate) fn arb_structure(max_r: usize) -> impl Strategy<Value = ProximityStructure> {
        (1..=max_r, proptest::collection::vec(any::<(bool, u64)>(), max_r)).prop_map(
            move |(r, seeds)| {
                let mut decls = vec![PointDecl::Free];
                for i in 2..=r {
                    let (make_sat, pick) = seeds[i - 1];
                    if i >= 3 && make_sat {
                        let ps = ProximityStructure::validate(&decls).expect("prefix valid");
                        let candidates: Vec<usize> = (1..=i - 2)
                            .filter(|&j| ps.last_proximate(j) == Some(i - 1))
                            .collect();
                        if candidates.is_empty() {
                            decls.push(PointDecl::Free);
                        } else {
                            let target = candidates[(pick as usize) % candidates.len()];
                            decls.push(PointDecl::Sat { target });
                        }
                    } else {
                        decls.push(PointDecl::Free);
                    }
                }
                ProximityStructure::validate(&decls).expect("generator produces valid structures")
            },
        )
    }
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;

    /// One free point.
    pub fn v1() -> ProximityStructure {
        ProximityStructure::validate(&[PointDecl::Free]).unwrap()
    }

    /// Two free points, then a satellite proximate to both p2 and p1.
    pub fn v2() -> ProximityStructure {
        ProximityStructure::validate(&[
            PointDecl::Free,
            PointDecl::Free,
            PointDecl::Sat { target: 1 },
        ])
        .unwrap()
    }

    /// `r` free points (all lying on one line in the collinear scenes).
    pub fn v3(r: usize) -> ProximityStructure {
        ProximityStructure::free_points(r)
    }
}
