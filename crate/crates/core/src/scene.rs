//! The scene model: a surface, a valuation, an optional flag, overrides and
//! a curve catalog, with the validation and canonicalization rules shared by
//! the parser and the serializer.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use std::collections::BTreeMap;

use crate::error::{Diagnostic, Severity};
use crate::lattice::{CurveRecord, SurfaceKind, SurfaceModel};
use crate::nok::{build_flag_data, Flag};
use crate::proximity::{PointDecl, ProximityStructure, ValuationInvariants};
use crate::rat::{big_to_rat, format_rat, Rat};
use crate::zariski::{SegmentArena, TMax};

/// Raw curve fields as declared in scene text, before resolution.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct CurveDecl {
    pub name: String,
    pub deg: Option<BigInt>,
    pub d_c: Option<Rat>,
    pub self_int: Option<Rat>,
    pub system_m: Option<BigInt>,
    /// `(center index, multiplicity)` pairs.
    pub mults: Vec<(usize, BigInt)>,
    pub meets_flag: Option<BigInt>,
    pub pairs: Vec<(String, Rat)>,
    pub line: usize,
    pub col: usize,
}

/// A parsed scene. Curve records are fully resolved: on the plane the
/// degree data is expanded, elsewhere every declared field is kept as is.
#[derive(Clone, Debug, PartialEq)]
pub struct Scene {
    pub surface: SurfaceModel,
    pub decls: Vec<PointDecl>,
    pub flag: Option<Flag>,
    pub tangent_points: Option<Vec<usize>>,
    pub allow_satellite_tangent: bool,
    pub t_max: TMax,
    pub curves: Vec<CurveRecord>,
}

/// A validated scene with its precomputed pairing arena.
pub struct Model {
    pub scene: Scene,
    pub arena: SegmentArena,
    /// The flag used by polygon operations; a free flag when none is
    /// declared.
    pub flag: Flag,
}

impl Model {
    pub fn ps(&self) -> &ProximityStructure {
        &self.arena.ps
    }

    pub fn inv(&self) -> &ValuationInvariants {
        &self.arena.inv
    }
}

fn err(diags: &mut Vec<Diagnostic>, line: usize, col: usize, message: String) {
    diags.push(Diagnostic { severity: Severity::Error, message, line, col });
}

/// Resolves raw curve declarations against the surface, applying the plane
/// autofill rules and checking custom-surface completeness.
pub fn resolve_curves(
    surface: &SurfaceModel,
    r: usize,
    decls: &[CurveDecl],
) -> Result<Vec<CurveRecord>, Vec<Diagnostic>> {
    let mut diags = Vec::new();
    let mut names = std::collections::BTreeSet::new();
    for d in decls {
        if !names.insert(d.name.clone()) {
            err(&mut diags, d.line, d.col, format!("duplicate curve name {}", d.name));
        }
    }
    let mut records = Vec::with_capacity(decls.len());
    for d in decls {
        let mut germ = vec![BigInt::zero(); r];
        let mut seen = std::collections::BTreeSet::new();
        for (idx, m) in &d.mults {
            if *idx < 1 || *idx > r {
                err(
                    &mut diags,
                    d.line,
                    d.col,
                    format!("curve {}: multiplicity at undeclared point p{idx}", d.name),
                );
                continue;
            }
            if !seen.insert(*idx) {
                err(&mut diags, d.line, d.col, format!("curve {}: repeated center p{idx}", d.name));
                continue;
            }
            if m.is_negative() {
                err(&mut diags, d.line, d.col, format!("curve {}: negative multiplicity", d.name));
                continue;
            }
            germ[idx - 1] = m.clone();
        }
        let meets_flag = d.meets_flag.clone().unwrap_or_else(BigInt::zero);
        if meets_flag.is_negative() {
            err(&mut diags, d.line, d.col, format!("curve {}: negative meets_flag", d.name));
        }
        match surface.kind {
            SurfaceKind::P2 => {
                // the degree determines every intersection number
                let deg = match (&d.deg, &d.d_c) {
                    (Some(deg), _) => Some(deg.clone()),
                    (None, Some(dc)) if dc.is_integer() => Some(dc.to_integer()),
                    (None, Some(_)) => {
                        err(
                            &mut diags,
                            d.line,
                            d.col,
                            format!("curve {}: a plane curve has integer degree", d.name),
                        );
                        None
                    }
                    (None, None) => {
                        err(
                            &mut diags,
                            d.line,
                            d.col,
                            format!("curve {}: missing deg", d.name),
                        );
                        None
                    }
                };
                let Some(deg) = deg else { continue };
                if !deg.is_positive() {
                    err(&mut diags, d.line, d.col, format!("curve {}: deg must be positive", d.name));
                    continue;
                }
                let deg_rat = big_to_rat(&deg);
                let sq = &deg_rat * &deg_rat;
                if let Some(dc) = &d.d_c {
                    if dc != &deg_rat {
                        err(
                            &mut diags,
                            d.line,
                            d.col,
                            format!("curve {}: on the plane dC equals deg", d.name),
                        );
                    }
                }
                if let Some(si) = &d.self_int {
                    if si != &sq {
                        err(
                            &mut diags,
                            d.line,
                            d.col,
                            format!("curve {}: on the plane selfint equals deg^2", d.name),
                        );
                    }
                }
                if let Some(m) = &d.system_m {
                    if m != &deg {
                        err(
                            &mut diags,
                            d.line,
                            d.col,
                            format!("curve {}: on the plane system equals deg", d.name),
                        );
                    }
                }
                records.push(CurveRecord {
                    name: d.name.clone(),
                    d_c: deg_rat,
                    self_int: sq,
                    system_m: Some(deg),
                    germ,
                    pairwise: BTreeMap::new(),
                    flag_meet: meets_flag,
                });
            }
            SurfaceKind::Custom => {
                if d.deg.is_some() {
                    err(
                        &mut diags,
                        d.line,
                        d.col,
                        format!("curve {}: deg is a plane shorthand; declare dC", d.name),
                    );
                }
                let Some(d_c) = d.d_c.clone() else {
                    err(&mut diags, d.line, d.col, format!("curve {}: missing dC", d.name));
                    continue;
                };
                if !d_c.is_positive() {
                    err(
                        &mut diags,
                        d.line,
                        d.col,
                        format!("curve {}: dC must be positive (D is ample)", d.name),
                    );
                }
                let Some(self_int) = d.self_int.clone() else {
                    err(&mut diags, d.line, d.col, format!("curve {}: missing selfint", d.name));
                    continue;
                };
                if let Some(m) = &d.system_m {
                    if !m.is_positive() {
                        err(
                            &mut diags,
                            d.line,
                            d.col,
                            format!("curve {}: system must be positive", d.name),
                        );
                    }
                }
                records.push(CurveRecord {
                    name: d.name.clone(),
                    d_c,
                    self_int,
                    system_m: d.system_m.clone(),
                    germ,
                    pairwise: BTreeMap::new(),
                    flag_meet: meets_flag,
                });
            }
        }
    }
    // pairwise products: derived on the plane, declared elsewhere
    match surface.kind {
        SurfaceKind::P2 => {
            for d in decls {
                if !d.pairs.is_empty() {
                    // tolerated when consistent with the degrees
                    for (other, value) in &d.pairs {
                        let (Some(a), Some(b)) = (
                            records.iter().find(|c| c.name == d.name),
                            records.iter().find(|c| &c.name == other),
                        ) else {
                            err(
                                &mut diags,
                                d.line,
                                d.col,
                                format!("curve {}: pair with unknown curve {other}", d.name),
                            );
                            continue;
                        };
                        if value != &(&a.d_c * &b.d_c) {
                            err(
                                &mut diags,
                                d.line,
                                d.col,
                                format!(
                                    "curve {}: on the plane {} . {} equals the degree product",
                                    d.name, d.name, other
                                ),
                            );
                        }
                    }
                }
            }
            let snapshot: Vec<(String, Rat)> =
                records.iter().map(|c| (c.name.clone(), c.d_c.clone())).collect();
            for c in records.iter_mut() {
                for (name, dc) in &snapshot {
                    if name != &c.name {
                        c.pairwise.insert(name.clone(), &c.d_c * dc);
                    }
                }
            }
        }
        SurfaceKind::Custom => {
            let mut declared: BTreeMap<(String, String), Rat> = BTreeMap::new();
            for d in decls {
                for (other, value) in &d.pairs {
                    let key = if d.name <= *other {
                        (d.name.clone(), other.clone())
                    } else {
                        (other.clone(), d.name.clone())
                    };
                    if let Some(prev) = declared.get(&key) {
                        if prev != value {
                            err(
                                &mut diags,
                                d.line,
                                d.col,
                                format!(
                                    "conflicting pairwise intersections for {} . {}",
                                    key.0, key.1
                                ),
                            );
                        }
                    } else {
                        declared.insert(key, value.clone());
                    }
                }
            }
            let names: Vec<String> = records.iter().map(|c| c.name.clone()).collect();
            for i in 0..names.len() {
                for j in i + 1..names.len() {
                    let key = if names[i] <= names[j] {
                        (names[i].clone(), names[j].clone())
                    } else {
                        (names[j].clone(), names[i].clone())
                    };
                    match declared.get(&key) {
                        Some(value) => {
                            records[i].pairwise.insert(names[j].clone(), value.clone());
                            records[j].pairwise.insert(names[i].clone(), value.clone());
                        }
                        None => err(
                            &mut diags,
                            0,
                            0,
                            format!(
                                "custom surface: missing pairwise intersection {} . {}",
                                key.0, key.1
                            ),
                        ),
                    }
                }
            }
            for (name_a, name_b) in declared.keys() {
                for n in [name_a, name_b] {
                    if !names.contains(n) {
                        err(&mut diags, 0, 0, format!("pair mentions unknown curve {n}"));
                    }
                }
            }
        }
    }
    if diags.is_empty() {
        Ok(records)
    } else {
        Err(diags)
    }
}

impl Scene {
    /// Validates the scene and builds the pairing arena.
    pub fn analyze(&self) -> Result<Model, Vec<Diagnostic>> {
        let ps = ProximityStructure::validate(&self.decls)
            .map_err(|e| vec![Diagnostic::error(e.to_string())])?;
        let arena = SegmentArena::new(self.surface.clone(), ps, self.curves.clone())
            .map_err(|e| vec![Diagnostic::error(e.to_string())])?;
        let flag = self.flag.unwrap_or(Flag::Free);
        build_flag_data(&arena.ps, &arena.inv, flag)
            .map_err(|e| vec![Diagnostic::error(e.to_string())])?;
        if let Some(points) = &self.tangent_points {
            crate::proximity::tangent_line_value(
                &arena.ps,
                Some(points),
                self.allow_satellite_tangent,
            )
            .map_err(|e| vec![Diagnostic::error(e.to_string())])?;
        }
        Ok(Model { scene: self.clone(), arena, flag })
    }
}

/// Canonical scene text: statements in a fixed order, every derived plane
/// field collapsed back onto `deg`, multiplicities sorted and zero entries
/// omitted, pairwise products emitted once on the later curve.
pub fn serialize_scene(scene: &Scene) -> String {
    let mut out = String::new();
    match scene.surface.kind {
        SurfaceKind::P2 => out.push_str("surface p2;\n"),
        SurfaceKind::Custom => {
            out.push_str(&format!(
                "surface custom {{ rho {}; d2 {}; }};\n",
                scene.surface.rho,
                format_rat(&scene.surface.d2)
            ));
        }
    }
    out.push_str("valuation {\n");
    for decl in &scene.decls {
        match decl {
            PointDecl::Free => out.push_str("  free;\n"),
            PointDecl::Sat { target } => out.push_str(&format!("  sat({target});\n")),
        }
    }
    out.push_str("}\n");
    if let Some(flag) = &scene.flag {
        match flag {
            Flag::Free => out.push_str("flag {\n  free;\n}\n"),
            Flag::Satellite(eta) => out.push_str(&format!("flag {{\n  sat({eta});\n}}\n")),
        }
    }
    if let Some(points) = &scene.tangent_points {
        let list: Vec<String> = points.iter().map(|p| p.to_string()).collect();
        out.push_str("tangent {\n");
        out.push_str(&format!("  points {};\n", list.join(", ")));
        if scene.allow_satellite_tangent {
            out.push_str("  allow_satellite;\n");
        }
        out.push_str("}\n");
    }
    if let TMax::Value(v) = &scene.t_max {
        out.push_str(&format!("tmax {};\n", format_rat(v)));
    }
    for (idx, curve) in scene.curves.iter().enumerate() {
        out.push_str(&format!("curve {} {{\n", curve.name));
        match scene.surface.kind {
            SurfaceKind::P2 => {
                out.push_str(&format!("  deg {};\n", curve.d_c.to_integer()));
            }
            SurfaceKind::Custom => {
                out.push_str(&format!("  dC {};\n", format_rat(&curve.d_c)));
                out.push_str(&format!("  selfint {};\n", format_rat(&curve.self_int)));
                if let Some(m) = &curve.system_m {
                    out.push_str(&format!("  system {m};\n"));
                }
            }
        }
        let mults: Vec<String> = curve
            .germ
            .iter()
            .enumerate()
            .filter(|(_, m)| !m.is_zero())
            .map(|(i, m)| format!("{}:{}", i + 1, m))
            .collect();
        if !mults.is_empty() {
            out.push_str(&format!("  mult {};\n", mults.join(", ")));
        }
        if !curve.flag_meet.is_zero() {
            out.push_str(&format!("  meets_flag {};\n", curve.flag_meet));
        }
        if scene.surface.kind == SurfaceKind::Custom {
            for earlier in &scene.curves[..idx] {
                if let Some(value) = curve.pairwise.get(&earlier.name) {
                    out.push_str(&format!("  pair {} {};\n", earlier.name, format_rat(value)));
                }
            }
        }
        out.push_str("}\n");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{int, rat, ratio};

    fn p2_line_decl(name: &str, mults: Vec<(usize, i64)>) -> CurveDecl {
        CurveDecl {
            name: name.into(),
            deg: Some(int(1)),
            mults: mults.into_iter().map(|(i, m)| (i, int(m))).collect(),
            ..Default::default()
        }
    }

    #[test]
    fn plane_autofill() {
        let surface = SurfaceModel::p2();
        let records =
            resolve_curves(&surface, 3, &[p2_line_decl("H", vec![(1, 1), (2, 1)])]).unwrap();
        assert_eq!(records[0].d_c, rat(1));
        assert_eq!(records[0].self_int, rat(1));
        assert_eq!(records[0].system_m, Some(int(1)));
        assert_eq!(records[0].germ, vec![int(1), int(1), int(0)]);
    }

    #[test]
    fn plane_rejects_inconsistent_fields() {
        let surface = SurfaceModel::p2();
        let mut d = p2_line_decl("H", vec![(1, 1)]);
        d.self_int = Some(rat(2));
        assert!(resolve_curves(&surface, 2, &[d]).is_err());
        let mut d = p2_line_decl("H", vec![(1, 1)]);
        d.system_m = Some(int(2));
        assert!(resolve_curves(&surface, 2, &[d]).is_err());
        let d = p2_line_decl("H", vec![(5, 1)]);
        assert!(resolve_curves(&surface, 2, &[d]).is_err());
    }

    #[test]
    fn custom_needs_everything() {
        let surface = SurfaceModel::custom(rat(2), 3).unwrap();
        let mut a = CurveDecl {
            name: "A".into(),
            d_c: Some(rat(1)),
            self_int: Some(rat(-2)),
            ..Default::default()
        };
        let mut b = CurveDecl {
            name: "B".into(),
            d_c: Some(ratio(3, 2)),
            self_int: Some(rat(0)),
            ..Default::default()
        };
        // missing pairwise
        assert!(resolve_curves(&surface, 2, &[a.clone(), b.clone()]).is_err());
        b.pairs.push(("A".into(), rat(2)));
        let records = resolve_curves(&surface, 2, &[a.clone(), b.clone()]).unwrap();
        assert_eq!(records[0].pairwise.get("B"), Some(&rat(2)));
        assert_eq!(records[1].pairwise.get("A"), Some(&rat(2)));
        // conflicting declarations
        a.pairs.push(("B".into(), rat(3)));
        assert!(resolve_curves(&surface, 2, &[a, b]).is_err());
    }

    #[test]
    fn serializer_is_canonical() {
        let surface = SurfaceModel::p2();
        let curves =
            resolve_curves(&surface, 3, &[p2_line_decl("H", vec![(2, 1), (1, 1)])]).unwrap();
        let scene = Scene {
            surface,
            decls: vec![PointDecl::Free, PointDecl::Free, PointDecl::Sat { target: 1 }],
            flag: Some(Flag::Satellite(1)),
            tangent_points: None,
            allow_satellite_tangent: false,
            t_max: TMax::Auto,
            curves,
        };
        let text = serialize_scene(&scene);
        assert!(text.contains("surface p2;"));
        assert!(text.contains("sat(1);"));
        assert!(text.contains("mult 1:1, 2:1;"));
        assert!(!text.contains("tmax"));
    }

    #[test]
    fn analyze_catches_bad_flags() {
        let scene = Scene {
            surface: SurfaceModel::p2(),
            decls: vec![PointDecl::Free, PointDecl::Free, PointDecl::Free],
            flag: Some(Flag::Satellite(1)),
            tangent_points: None,
            allow_satellite_tangent: false,
            t_max: TMax::Auto,
            curves: vec![],
        };
        assert!(scene.analyze().is_err());
        let scene = Scene { flag: Some(Flag::Satellite(2)), ..scene };
        assert!(scene.analyze().is_ok());
    }
}
