//! JSON reports for every subcommand, with a stable schema: identical input
//! produces byte-identical output. Rationals are canonical `p/q` strings,
//! surds are `{a, b, n}` records, and plain counts are JSON integers.

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde_json::{json, Value};

use crate::error::{CoreError, Diagnostic};
use crate::nok::{
    build_flag_data, nok_polygon, triangle_bound, triangle_inscribed, ExactPoint, Flag, NokPolygon,
};
use crate::rat::{format_rat, Rat};
use crate::scene::{Model, Scene};
use crate::seshadri::{
    chamber_report_inputs, epsilon_bounds, minimality_verdict, mu_hat_bounds, nef_threshold,
    seshadri_cap, theorem_suite, BoundInterval, Verdict,
};
use crate::surd::Surd;
use crate::zariski::{
    chamber_count_check, chamber_walk, decompose_segment_at, segment_closed_form, Affine,
    ChamberWalk, TMax, ZariskiDecomposition,
};

pub const SCHEMA: &str = "valnag/1";

/// How a run can fail: user-level diagnostics (exit code 1) or an internal
/// invariant violation (exit code 2, a bug).
#[derive(Debug)]
pub enum RunFailure {
    Diagnostics(Vec<Diagnostic>),
    Internal(String),
}

impl RunFailure {
    fn from_core(e: CoreError) -> Self {
        match e {
            CoreError::Internal(msg) => RunFailure::Internal(msg),
            other => RunFailure::Diagnostics(vec![Diagnostic::error(other.to_string())]),
        }
    }
}

pub struct RunOptions {
    pub t: Option<Rat>,
    pub t_max: Option<TMax>,
    pub want_svg: bool,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions { t: None, t_max: None, want_svg: false }
    }
}

pub struct RunOutput {
    pub json: Value,
    pub svg: Option<String>,
}

pub fn rat_value(v: &Rat) -> Value {
    Value::String(format_rat(v))
}

pub fn surd_value(s: &Surd) -> Value {
    match s.as_rat() {
        Some(r) => rat_value(r),
        None => json!({
            "a": format_rat(s.rational_part()),
            "b": format_rat(s.radical_coeff()),
            "n": s.radicand(),
        }),
    }
}

pub fn int_value(v: &BigInt) -> Value {
    match v.to_i64() {
        Some(i) => Value::from(i),
        None => Value::String(v.to_string()),
    }
}

fn point_value(p: &ExactPoint) -> Value {
    Value::Array(vec![surd_value(&p.x), surd_value(&p.y)])
}

fn affine_value(a: &Affine) -> Value {
    json!({ "c0": rat_value(&a.c0), "c1": rat_value(&a.c1) })
}

fn interval_bound_value(b: &BoundInterval) -> Value {
    json!({
        "lo": surd_value(&b.lo),
        "hi": match &b.hi { Some(hi) => surd_value(hi), None => Value::String("inf".into()) },
        "loWitness": b.lo_witness.label(),
        "hiWitness": b.hi_witness.label(),
    })
}

fn flag_label(flag: Flag) -> String {
    match flag {
        Flag::Free => "free".into(),
        Flag::Satellite(eta) => format!("sat({eta})"),
    }
}

fn decomposition_value(model: &Model, z: &ZariskiDecomposition) -> Value {
    let names = z.neg_names(&model.arena);
    let mut coefficients = serde_json::Map::new();
    for ((_, coeff), name) in z.neg.iter().zip(&names) {
        coefficients.insert(name.clone(), rat_value(coeff));
    }
    json!({
        "negSet": names,
        "coefficients": Value::Object(coefficients),
        "P": {
            "d": rat_value(&z.p.d),
            "e": z.p.e.iter().map(rat_value).collect::<Vec<_>>(),
        },
        "pSquared": rat_value(&z.p_squared),
        "conditional": z.conditional,
    })
}

fn walk_value(model: &Model, walk: &ChamberWalk) -> Value {
    let intervals: Vec<Value> = walk
        .intervals
        .iter()
        .map(|iv| {
            let mut coefficients = serde_json::Map::new();
            for (&c, affine) in iv.neg.iter().zip(&iv.coeffs) {
                coefficients.insert(model.arena.names[c].clone(), affine_value(affine));
            }
            json!({
                "lo": rat_value(&iv.lo),
                "hi": surd_value(&iv.hi),
                "negSet": iv.neg.iter().map(|&c| model.arena.names[c].clone()).collect::<Vec<_>>(),
                "coefficients": Value::Object(coefficients),
                "pSquared": {
                    "c0": rat_value(&iv.p_squared.c0),
                    "c1": rat_value(&iv.p_squared.c1),
                    "c2": rat_value(&iv.p_squared.c2),
                },
            })
        })
        .collect();
    json!({
        "breakpoints": walk.breakpoints.iter().map(rat_value).collect::<Vec<_>>(),
        "intervals": intervals,
        "chamberCount": walk.chamber_count(),
        "tEnd": surd_value(&walk.t_end),
        "endReason": walk.reason.to_string(),
        "warnings": walk.warnings,
    })
}

fn verdict_value(v: &Verdict) -> Value {
    json!({
        "status": v.status.to_string(),
        "witness": v.witness.clone().map(Value::String).unwrap_or(Value::Null),
        "eps": v.eps_exact.as_ref().map(surd_value).unwrap_or(Value::Null),
        "muHat": v.mu_exact.as_ref().map(surd_value).unwrap_or(Value::Null),
        "epsInterval": interval_bound_value(&v.eps),
        "muInterval": interval_bound_value(&v.mu),
        "conditional": v.conditional,
        "conjectureApplicable": v.conjecture_applicable,
        "warnings": v.warnings,
    })
}

fn polygon_value(poly: &NokPolygon, flag: Flag) -> Value {
    let pieces = |take_alpha: bool| -> Vec<Value> {
        poly.pieces
            .iter()
            .map(|p| {
                let f = if take_alpha { &p.alpha } else { &p.beta };
                json!({
                    "lo": rat_value(&p.lo),
                    "hi": surd_value(&p.hi),
                    "c0": rat_value(&f.c0),
                    "c1": rat_value(&f.c1),
                })
            })
            .collect()
    };
    json!({
        "flag": flag_label(flag),
        "vertices": poly.vertices.iter().map(point_value).collect::<Vec<_>>(),
        "alphaPieces": pieces(true),
        "betaPieces": pieces(false),
        "area": surd_value(&poly.area),
        "complete": poly.complete,
        "tEnd": surd_value(&poly.t_end),
        "warnings": poly.warnings,
    })
}

fn effective_t_max(scene: &Scene, opts: &RunOptions) -> TMax {
    opts.t_max.clone().unwrap_or_else(|| scene.t_max.clone())
}

fn tangent_args(scene: &Scene) -> (Option<Vec<usize>>, bool) {
    (scene.tangent_points.clone(), scene.allow_satellite_tangent)
}

/// Runs a subcommand against a parsed scene and returns its JSON (plus SVG
/// for the polygon subcommand when requested).
pub fn run_subcommand(
    name: &str,
    scene: &Scene,
    opts: &RunOptions,
) -> Result<RunOutput, RunFailure> {
    let model = scene.analyze().map_err(RunFailure::Diagnostics)?;
    let arena = &model.arena;
    let inv = &arena.inv;
    let (tangent_points, allow_sat) = tangent_args(scene);
    let tangent_ref = tangent_points.as_deref();
    let core = |e: CoreError| RunFailure::from_core(e);

    let json = match name {
        "invariants" => {
            json!({
                "schema": SCHEMA,
                "subcommand": "invariants",
                "r": arena.r(),
                "mults": inv.mults.iter().map(int_value).collect::<Vec<_>>(),
                "dualGraphEdges": inv.dual_edges.iter().map(|(a, b)| json!([a, b])).collect::<Vec<_>>(),
                "stars": inv.stars.clone(),
                "g": inv.g(),
                "betas": inv.betas.iter().map(int_value).collect::<Vec<_>>(),
                "vol": rat_value(&inv.vol),
                "volN": rat_value(&inv.vol_n),
                "volNInv": rat_value(&inv.vol_n_inv),
            })
        }
        "zariski" => {
            let t = opts.t.clone().ok_or_else(|| {
                RunFailure::Diagnostics(vec![Diagnostic::error(
                    "the zariski subcommand needs --t <rational>",
                )])
            })?;
            let z = decompose_segment_at(arena, &t).map_err(core)?;
            let (closed, closed_valid) = segment_closed_form(arena, &t).map_err(core)?;
            let matches = closed_valid && closed.neg == z.neg && closed.p == z.p;
            let mut v = decomposition_value(&model, &z);
            let obj = v.as_object_mut().expect("object");
            obj.insert("schema".into(), Value::String(SCHEMA.into()));
            obj.insert("subcommand".into(), Value::String("zariski".into()));
            obj.insert("t".into(), rat_value(&t));
            obj.insert("closedFormValid".into(), Value::Bool(closed_valid));
            obj.insert("matchesClosedForm".into(), Value::Bool(matches));
            v
        }
        "walk" => {
            let walk = chamber_walk(arena, &effective_t_max(scene, opts)).map_err(core)?;
            let mut v = walk_value(&model, &walk);
            let obj = v.as_object_mut().expect("object");
            obj.insert("schema".into(), Value::String(SCHEMA.into()));
            obj.insert("subcommand".into(), Value::String("walk".into()));
            v
        }
        "nok" => {
            let walk = chamber_walk(arena, &effective_t_max(scene, opts)).map_err(core)?;
            let data = build_flag_data(&arena.ps, inv, model.flag).map_err(core)?;
            let poly = nok_polygon(arena, &walk, model.flag).map_err(core)?;
            let verdict =
                minimality_verdict(arena, tangent_ref, allow_sat).map_err(core)?;
            let triangle = match &verdict.mu_exact {
                Some(mu) => Some(triangle_bound(&data, mu).map_err(core)?),
                None => None,
            };
            let inner = match &verdict.eps_exact {
                Some(eps) => Some(triangle_inscribed(&data, inv, eps).map_err(core)?),
                None => None,
            };
            let mut v = polygon_value(&poly, model.flag);
            let obj = v.as_object_mut().expect("object");
            obj.insert("schema".into(), Value::String(SCHEMA.into()));
            obj.insert("subcommand".into(), Value::String("nok".into()));
            obj.insert(
                "triangleBound".into(),
                triangle
                    .as_ref()
                    .map(|t| Value::Array(t.iter().map(point_value).collect()))
                    .unwrap_or(Value::Null),
            );
            obj.insert(
                "triangleInscribed".into(),
                inner
                    .as_ref()
                    .map(|t| Value::Array(t.iter().map(point_value).collect()))
                    .unwrap_or(Value::Null),
            );
            obj.insert(
                "flagDiagnostics".into(),
                Value::Array(data.diagnostics.iter().map(|d| Value::String(d.clone())).collect()),
            );
            let svg = if opts.want_svg {
                Some(crate::svg::render(&poly, triangle.as_deref(), inner.as_deref()))
            } else {
                None
            };
            return Ok(RunOutput { json: v, svg });
        }
        "bounds" => {
            let (eps, info) =
                epsilon_bounds(arena, tangent_ref, allow_sat).map_err(core)?;
            let mu = mu_hat_bounds(arena, &eps.lo).map_err(core)?;
            let cap = seshadri_cap(arena).map_err(core)?;
            json!({
                "schema": SCHEMA,
                "subcommand": "bounds",
                "eps": interval_bound_value(&eps),
                "muHat": interval_bound_value(&mu),
                "cap": surd_value(&cap),
                "tangentValue": int_value(&info.t),
                "delta0": int_value(&info.delta0),
                "warnings": info.warnings,
            })
        }
        "verdict" => {
            let verdict =
                minimality_verdict(arena, tangent_ref, allow_sat).map_err(core)?;
            let mut v = verdict_value(&verdict);
            let obj = v.as_object_mut().expect("object");
            obj.insert("schema".into(), Value::String(SCHEMA.into()));
            obj.insert("subcommand".into(), Value::String("verdict".into()));
            v
        }
        "suite" => {
            let verdict =
                minimality_verdict(arena, tangent_ref, allow_sat).map_err(core)?;
            let (Some(eps), Some(mu)) = (&verdict.eps_exact, &verdict.mu_exact) else {
                return Err(RunFailure::Diagnostics(vec![Diagnostic::error(
                    "the suite needs pinned constants; the verdict is Undetermined",
                )]));
            };
            let walk = chamber_walk(arena, &effective_t_max(scene, opts)).map_err(core)?;
            let data = build_flag_data(&arena.ps, inv, model.flag).map_err(core)?;
            let poly = nok_polygon(arena, &walk, model.flag).map_err(core)?;
            let report = theorem_suite(arena, &data, eps, mu, &walk, &poly).map_err(core)?;
            let (n, flagged) = chamber_report_inputs(arena, &verdict);
            let chambers = chamber_count_check(&walk, n, arena.surface.rho);
            json!({
                "schema": SCHEMA,
                "subcommand": "suite",
                "aMuSquared": report.a_mu_squared,
                "bPolygonIsTriangle": report.b_polygon_is_triangle,
                "cPMuNefSquareZero": report.c_p_mu_nef_square_zero,
                "dMuEqEpsBeta": report.d_mu_eq_eps_beta,
                "eSingleChamber": report.e_single_chamber,
                "fEpsMaximal": report.f_eps_maximal,
                "consistent": report.consistent,
                "conditional": report.conditional,
                "computingCurves": n,
                "computingCurvesExceedRho": flagged,
                "chamberCount": chambers.chambers,
                "chamberBound": chambers.bound,
                "chamberWithinBound": chambers.within_bound,
                "status": verdict.status.to_string(),
            })
        }
        "threshold" => {
            let m = nef_threshold(arena).map_err(core)?;
            let eps_lower = Rat::new(num_bigint::BigInt::from(1), m.clone());
            json!({
                "schema": SCHEMA,
                "subcommand": "threshold",
                "m": int_value(&m),
                "epsLowerBound": rat_value(&eps_lower),
                "conditional": true,
            })
        }
        other => {
            return Err(RunFailure::Diagnostics(vec![Diagnostic::error(format!(
                "unknown subcommand `{other}` (expected invariants, zariski, walk, nok, \
                 bounds, verdict, suite or threshold)"
            ))]))
        }
    };
    Ok(RunOutput { json, svg: None })
}

/// Canonical serialization: sorted keys (the default map is ordered) and a
/// trailing newline.
pub fn to_json_string(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse_scene;

    const V2_SCENE: &str =
        "surface p2; valuation { free; free; sat(1); } curve H { deg 1; mult 1:1, 2:1; }";
    const V32_SCENE: &str =
        "surface p2; valuation { free; free; } curve H { deg 1; mult 1:1, 2:1; }";

    fn run(name: &str, scene_text: &str) -> Value {
        let scene = parse_scene(scene_text).unwrap();
        run_subcommand(name, &scene, &RunOptions::default()).unwrap().json
    }

    #[test]
    fn invariants_json_matches_fixture() {
        let v = run("invariants", V2_SCENE);
        assert_eq!(v["mults"], json!([2, 1, 1]));
        assert_eq!(v["betas"], json!([2, 3, 6]));
        assert_eq!(v["volN"], json!("2/3"));
        assert_eq!(v["vol"], json!("1/6"));
    }

    #[test]
    fn verdict_json_matches_fixture() {
        let v = run("verdict", V2_SCENE);
        assert_eq!(v["status"], json!("NonMinimal"));
        assert_eq!(v["witness"], json!("H"));
        assert_eq!(v["eps"], json!("1/3"));
        assert_eq!(v["muHat"], json!("3"));
        assert_eq!(v["conditional"], json!(false));
        assert_eq!(v["conjectureApplicable"], json!(false));
    }

    #[test]
    fn nok_json_lists_vertices_in_canonical_order() {
        let v = run("nok", V32_SCENE);
        assert_eq!(v["vertices"], json!([["0", "0"], ["1", "1/2"], ["2", "0"]]));
        assert_eq!(v["area"], json!("1/2"));
        assert_eq!(v["complete"], json!(true));
    }

    #[test]
    fn json_is_byte_stable() {
        for sub in ["invariants", "walk", "nok", "bounds", "verdict", "suite", "threshold"] {
            let a = to_json_string(&run(sub, V2_SCENE));
            let b = to_json_string(&run(sub, V2_SCENE));
            assert_eq!(a, b, "{sub}");
        }
    }

    #[test]
    fn zariski_requires_t() {
        let scene = parse_scene(V2_SCENE).unwrap();
        assert!(matches!(
            run_subcommand("zariski", &scene, &RunOptions::default()),
            Err(RunFailure::Diagnostics(_))
        ));
        let opts = RunOptions { t: Some(crate::rat::rat(2)), ..Default::default() };
        let v = run_subcommand("zariski", &scene, &opts).unwrap().json;
        assert_eq!(v["negSet"], json!(["E1", "E2"]));
        assert_eq!(v["pSquared"], json!("1/3"));
        assert_eq!(v["matchesClosedForm"], json!(true));
    }

    #[test]
    fn surd_values_serialize_as_records() {
        // V2 without a catalog: mu lower bound is sqrt(6)
        let scene = parse_scene("valuation { free; free; sat(1); }").unwrap();
        let v = run_subcommand("bounds", &scene, &RunOptions::default()).unwrap().json;
        assert_eq!(v["muHat"]["lo"], json!({"a": "0", "b": "1", "n": 6}));
    }
}
