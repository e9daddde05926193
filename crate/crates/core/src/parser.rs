//! Lexer and recursive-descent parser for scene text.
//!
//! The language is whitespace-insensitive, `#` starts a line comment, and
//! every diagnostic carries a 1-based line and column. Defaults applied
//! here: a missing surface statement means the projective plane, unlisted
//! multiplicities are zero, and the walk bound is automatic.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::error::{Diagnostic, Severity};
use crate::lattice::SurfaceModel;
use crate::nok::Flag;
use crate::proximity::PointDecl;
use crate::rat::Rat;
use crate::scene::{resolve_curves, CurveDecl, Scene};
use crate::zariski::TMax;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Int(BigInt),
    Punct(char),
    Eof,
}

#[derive(Clone, Debug)]
struct Spanned {
    tok: Tok,
    line: usize,
    col: usize,
}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
    line: usize,
    col: usize,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Lexer { src: src.as_bytes(), pos: 0, line: 1, col: 1 }
    }

    fn bump(&mut self) -> Option<u8> {
        let b = self.src.get(self.pos).copied()?;
        self.pos += 1;
        if b == b'\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(b)
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn tokens(mut self) -> Result<Vec<Spanned>, Diagnostic> {
        let mut out = Vec::new();
        loop {
            while let Some(b) = self.peek() {
                if b.is_ascii_whitespace() {
                    self.bump();
                } else if b == b'#' {
                    while let Some(b) = self.peek() {
                        if b == b'\n' {
                            break;
                        }
                        self.bump();
                    }
                } else {
                    break;
                }
            }
            let (line, col) = (self.line, self.col);
            let Some(b) = self.peek() else {
                out.push(Spanned { tok: Tok::Eof, line, col });
                return Ok(out);
            };
            if b.is_ascii_alphabetic() || b == b'_' {
                let mut ident = String::new();
                while let Some(b) = self.peek() {
                    if b.is_ascii_alphanumeric() || b == b'_' {
                        ident.push(b as char);
                        self.bump();
                    } else {
                        break;
                    }
                }
                out.push(Spanned { tok: Tok::Ident(ident), line, col });
            } else if b.is_ascii_digit() {
                let mut digits = String::new();
                while let Some(b) = self.peek() {
                    if b.is_ascii_digit() {
                        digits.push(b as char);
                        self.bump();
                    } else {
                        break;
                    }
                }
                let value: BigInt = digits.parse().expect("digits");
                out.push(Spanned { tok: Tok::Int(value), line, col });
            } else if matches!(b, b'{' | b'}' | b'(' | b')' | b';' | b':' | b',' | b'/' | b'-') {
                self.bump();
                out.push(Spanned { tok: Tok::Punct(b as char), line, col });
            } else {
                return Err(Diagnostic {
                    severity: Severity::Error,
                    message: format!("unexpected character `{}`", b as char),
                    line,
                    col,
                });
            }
        }
    }
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
}

type PResult<T> = Result<T, Diagnostic>;

impl Parser {
    fn peek(&self) -> &Spanned {
        &self.toks[self.pos.min(self.toks.len() - 1)]
    }

    fn bump(&mut self) -> Spanned {
        let s = self.toks[self.pos.min(self.toks.len() - 1)].clone();
        if self.pos < self.toks.len() - 1 {
            self.pos += 1;
        }
        s
    }

    fn error_at(s: &Spanned, message: impl Into<String>) -> Diagnostic {
        Diagnostic { severity: Severity::Error, message: message.into(), line: s.line, col: s.col }
    }

    fn expect_punct(&mut self, c: char) -> PResult<Spanned> {
        let s = self.bump();
        if s.tok == Tok::Punct(c) {
            Ok(s)
        } else {
            Err(Self::error_at(&s, format!("expected `{c}`")))
        }
    }

    fn expect_ident(&mut self) -> PResult<(String, Spanned)> {
        let s = self.bump();
        match &s.tok {
            Tok::Ident(name) => Ok((name.clone(), s.clone())),
            _ => Err(Self::error_at(&s, "expected an identifier")),
        }
    }

    fn expect_keyword(&mut self, kw: &str) -> PResult<Spanned> {
        let s = self.bump();
        match &s.tok {
            Tok::Ident(name) if name == kw => Ok(s.clone()),
            _ => Err(Self::error_at(&s, format!("expected `{kw}`"))),
        }
    }

    fn expect_uint(&mut self) -> PResult<(BigInt, Spanned)> {
        let s = self.bump();
        match &s.tok {
            Tok::Int(v) => Ok((v.clone(), s.clone())),
            _ => Err(Self::error_at(&s, "expected an integer")),
        }
    }

    fn expect_usize(&mut self) -> PResult<(usize, Spanned)> {
        let (v, s) = self.expect_uint()?;
        match num_traits::ToPrimitive::to_usize(&v) {
            Some(u) => Ok((u, s)),
            None => Err(Self::error_at(&s, "index out of range")),
        }
    }

    /// `INT | - INT | INT / INT | - INT / INT`
    fn expect_rat(&mut self) -> PResult<(Rat, Spanned)> {
        let start = self.peek().clone();
        let negative = if self.peek().tok == Tok::Punct('-') {
            self.bump();
            true
        } else {
            false
        };
        let (numer, _) = self.expect_uint()?;
        let numer = if negative { -numer } else { numer };
        if self.peek().tok == Tok::Punct('/') {
            self.bump();
            let (denom, s) = self.expect_uint()?;
            if denom.is_zero() {
                return Err(Self::error_at(&s, "zero denominator"));
            }
            Ok((Rat::new(numer, denom), start))
        } else {
            Ok((Rat::from_integer(numer), start))
        }
    }
}


/// Parses scene text into a resolved `Scene`. Errors abort with positioned
/// diagnostics; warnings (none today at parse level) never alter results.
pub fn parse_scene(text: &str) -> Result<Scene, Vec<Diagnostic>> {
    let toks = Lexer::new(text).tokens().map_err(|d| vec![d])?;
    let mut p = Parser { toks, pos: 0 };
    let mut surface: Option<(SurfaceModel, Spanned)> = None;
    let mut decls: Option<(Vec<PointDecl>, Spanned)> = None;
    let mut flag: Option<(Flag, Spanned)> = None;
    let mut tangent: Option<(Vec<usize>, bool, Spanned)> = None;
    let mut t_max: Option<(TMax, Spanned)> = None;
    let mut curve_decls: Vec<CurveDecl> = Vec::new();
    let mut errors: Vec<Diagnostic> = Vec::new();

    macro_rules! once {
        ($slot:expr, $value:expr, $span:expr, $what:literal) => {
            if $slot.is_some() {
                errors.push(Parser::error_at(&$span, concat!("duplicate ", $what, " statement")));
            } else {
                $slot = Some($value);
            }
        };
    }

    loop {
        let s = p.peek().clone();
        match &s.tok {
            Tok::Eof => break,
            Tok::Ident(kw) => match kw.as_str() {
                "surface" => {
                    p.bump();
                    let result = (|| -> PResult<SurfaceModel> {
                        let (kind, ks) = p.expect_ident()?;
                        let model = match kind.as_str() {
                            "p2" => SurfaceModel::p2(),
                            "custom" => {
                                p.expect_punct('{')?;
                                p.expect_keyword("rho")?;
                                let (rho, rs) = p.expect_uint()?;
                                p.expect_punct(';')?;
                                p.expect_keyword("d2")?;
                                let (d2, ds) = p.expect_rat()?;
                                p.expect_punct(';')?;
                                p.expect_punct('}')?;
                                let rho = num_traits::ToPrimitive::to_u32(&rho)
                                    .ok_or_else(|| Parser::error_at(&rs, "rho out of range"))?;
                                SurfaceModel::custom(d2, rho)
                                    .map_err(|e| Parser::error_at(&ds, e.to_string()))?
                            }
                            _ => return Err(Parser::error_at(&ks, "expected `p2` or `custom`")),
                        };
                        p.expect_punct(';')?;
                        Ok(model)
                    })();
                    match result {
                        Ok(model) => once!(surface, (model, s.clone()), s, "surface"),
                        Err(d) => return Err(vec![d]),
                    }
                }
                "valuation" => {
                    p.bump();
                    let result = (|| -> PResult<Vec<(PointDecl, Spanned)>> {
                        p.expect_punct('{')?;
                        let mut points = Vec::new();
                        loop {
                            let next = p.peek().clone();
                            match &next.tok {
                                Tok::Punct('}') => {
                                    p.bump();
                                    break;
                                }
                                Tok::Ident(w) if w == "free" => {
                                    p.bump();
                                    p.expect_punct(';')?;
                                    points.push((PointDecl::Free, next));
                                }
                                Tok::Ident(w) if w == "sat" => {
                                    p.bump();
                                    p.expect_punct('(')?;
                                    let (target, _) = p.expect_usize()?;
                                    p.expect_punct(')')?;
                                    p.expect_punct(';')?;
                                    points.push((PointDecl::Sat { target }, next));
                                }
                                _ => {
                                    return Err(Parser::error_at(
                                        &next,
                                        "expected `free;`, `sat(k);` or `}`",
                                    ))
                                }
                            }
                        }
                        if points.is_empty() {
                            return Err(Parser::error_at(&s, "a valuation needs at least one center"));
                        }
                        Ok(points)
                    })();
                    match result {
                        Ok(points) => {
                            // per-point range checks with positions
                            for (idx, (decl, span)) in points.iter().enumerate() {
                                let i = idx + 1;
                                if let PointDecl::Sat { target } = decl {
                                    if i == 2 {
                                        errors.push(Parser::error_at(
                                            span,
                                            "satellite target out of range: p2 is always free",
                                        ));
                                    } else if *target < 1 || *target >= i.saturating_sub(1) {
                                        errors.push(Parser::error_at(
                                            span,
                                            format!("satellite target out of range for p{i}"),
                                        ));
                                    }
                                }
                            }
                            let list: Vec<PointDecl> =
                                points.iter().map(|(d, _)| *d).collect();
                            if let Some((PointDecl::Sat { .. }, span)) = points.first() {
                                errors.push(Parser::error_at(span, "p1 must be free"));
                            }
                            once!(decls, (list, s.clone()), s, "valuation");
                        }
                        Err(d) => return Err(vec![d]),
                    }
                }
                "flag" => {
                    p.bump();
                    let result = (|| -> PResult<Flag> {
                        p.expect_punct('{')?;
                        let next = p.bump();
                        let f = match &next.tok {
                            Tok::Ident(w) if w == "free" => Flag::Free,
                            Tok::Ident(w) if w == "sat" => {
                                p.expect_punct('(')?;
                                let (eta, _) = p.expect_usize()?;
                                p.expect_punct(')')?;
                                Flag::Satellite(eta)
                            }
                            _ => return Err(Parser::error_at(&next, "expected `free` or `sat(k)`")),
                        };
                        p.expect_punct(';')?;
                        p.expect_punct('}')?;
                        Ok(f)
                    })();
                    match result {
                        Ok(f) => once!(flag, (f, s.clone()), s, "flag"),
                        Err(d) => return Err(vec![d]),
                    }
                }
                "tangent" => {
                    p.bump();
                    let result = (|| -> PResult<(Vec<usize>, bool)> {
                        p.expect_punct('{')?;
                        p.expect_keyword("points")?;
                        let mut points = Vec::new();
                        loop {
                            let (v, _) = p.expect_usize()?;
                            points.push(v);
                            if p.peek().tok == Tok::Punct(',') {
                                p.bump();
                            } else {
                                break;
                            }
                        }
                        p.expect_punct(';')?;
                        let mut allow = false;
                        if matches!(&p.peek().tok, Tok::Ident(w) if w == "allow_satellite") {
                            p.bump();
                            p.expect_punct(';')?;
                            allow = true;
                        }
                        p.expect_punct('}')?;
                        Ok((points, allow))
                    })();
                    match result {
                        Ok((points, allow)) => {
                            once!(tangent, (points, allow, s.clone()), s, "tangent")
                        }
                        Err(d) => return Err(vec![d]),
                    }
                }
                "tmax" => {
                    p.bump();
                    let result = (|| -> PResult<TMax> {
                        let value = if matches!(&p.peek().tok, Tok::Ident(w) if w == "auto") {
                            p.bump();
                            TMax::Auto
                        } else {
                            let (v, vs) = p.expect_rat()?;
                            if v.is_negative() {
                                return Err(Parser::error_at(&vs, "tmax must be non-negative"));
                            }
                            TMax::Value(v)
                        };
                        p.expect_punct(';')?;
                        Ok(value)
                    })();
                    match result {
                        Ok(value) => once!(t_max, (value, s.clone()), s, "tmax"),
                        Err(d) => return Err(vec![d]),
                    }
                }
                "curve" => {
                    p.bump();
                    let result = (|| -> PResult<CurveDecl> {
                        let (name, ns) = p.expect_ident()?;
                        let mut decl = CurveDecl {
                            name,
                            line: ns.line,
                            col: ns.col,
                            ..Default::default()
                        };
                        p.expect_punct('{')?;
                        loop {
                            let field = p.bump();
                            match &field.tok {
                                Tok::Punct('}') => break,
                                Tok::Ident(f) => match f.as_str() {
                                    "deg" => {
                                        let (v, _) = p.expect_uint()?;
                                        p.expect_punct(';')?;
                                        decl.deg = Some(v);
                                    }
                                    "dC" => {
                                        let (v, _) = p.expect_rat()?;
                                        p.expect_punct(';')?;
                                        decl.d_c = Some(v);
                                    }
                                    "selfint" => {
                                        let (v, _) = p.expect_rat()?;
                                        p.expect_punct(';')?;
                                        decl.self_int = Some(v);
                                    }
                                    "system" => {
                                        let (v, _) = p.expect_uint()?;
                                        p.expect_punct(';')?;
                                        decl.system_m = Some(v);
                                    }
                                    "meets_flag" => {
                                        let (v, _) = p.expect_uint()?;
                                        p.expect_punct(';')?;
                                        decl.meets_flag = Some(v);
                                    }
                                    "mult" => {
                                        loop {
                                            let (idx, _) = p.expect_usize()?;
                                            p.expect_punct(':')?;
                                            let (m, _) = p.expect_uint()?;
                                            decl.mults.push((idx, m));
                                            if p.peek().tok == Tok::Punct(',') {
                                                p.bump();
                                            } else {
                                                break;
                                            }
                                        }
                                        p.expect_punct(';')?;
                                    }
                                    "pair" => {
                                        let (other, _) = p.expect_ident()?;
                                        let (v, _) = p.expect_rat()?;
                                        p.expect_punct(';')?;
                                        decl.pairs.push((other, v));
                                    }
                                    _ => {
                                        return Err(Parser::error_at(
                                            &field,
                                            format!("unknown curve field `{f}`"),
                                        ))
                                    }
                                },
                                _ => {
                                    return Err(Parser::error_at(
                                        &field,
                                        "expected a curve field or `}`",
                                    ))
                                }
                            }
                        }
                        Ok(decl)
                    })();
                    match result {
                        Ok(decl) => curve_decls.push(decl),
                        Err(d) => return Err(vec![d]),
                    }
                }
                _ => {
                    return Err(vec![Parser::error_at(
                        &s,
                        format!("unknown statement `{kw}`"),
                    )])
                }
            },
            _ => return Err(vec![Parser::error_at(&s, "expected a statement")]),
        }
    }

    let Some((decls, _)) = decls else {
        errors.push(Diagnostic::error("a scene needs a valuation block"));
        return Err(errors);
    };
    if !errors.is_empty() {
        return Err(errors);
    }
    let surface = surface.map(|(m, _)| m).unwrap_or_else(SurfaceModel::p2);
    let curves = match resolve_curves(&surface, decls.len(), &curve_decls) {
        Ok(c) => c,
        Err(mut ds) => {
            errors.append(&mut ds);
            return Err(errors);
        }
    };
    let scene = Scene {
        surface,
        decls,
        flag: flag.map(|(f, _)| f),
        tangent_points: tangent.as_ref().map(|(pts, _, _)| pts.clone()),
        allow_satellite_tangent: tangent.as_ref().map(|(_, a, _)| *a).unwrap_or(false),
        t_max: t_max.map(|(t, _)| t).unwrap_or(TMax::Auto),
        curves,
    };
    // full structural validation (block consecutiveness) with a stable position
    if let Err(e) = crate::proximity::ProximityStructure::validate(&scene.decls) {
        return Err(vec![Diagnostic::error(e.to_string())]);
    }
    Ok(scene)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::SurfaceKind;
    use crate::rat::{int, rat, ratio};
    use crate::scene::serialize_scene;

    #[test]
    fn parses_the_v2_scene() {
        let text = "surface p2; valuation { free; free; sat(1); } curve H { deg 1; mult 1:1, 2:1; }";
        let scene = parse_scene(text).unwrap();
        assert_eq!(scene.decls.len(), 3);
        assert_eq!(scene.curves.len(), 1);
        assert_eq!(scene.curves[0].germ, vec![int(1), int(1), int(0)]);
        assert_eq!(scene.surface.d2, rat(1));
    }

    #[test]
    fn parses_the_v1_scene_with_default_surface() {
        let scene = parse_scene("valuation { free; }").unwrap();
        assert_eq!(scene.decls, vec![crate::proximity::PointDecl::Free]);
        assert_eq!(scene.surface.kind, SurfaceKind::P2);
    }

    #[test]
    fn positions_satellite_range_errors() {
        let errs = parse_scene("valuation { free; sat(5); }").unwrap_err();
        assert_eq!(errs.len(), 1);
        assert!(errs[0].message.contains("satellite target out of range"));
        assert_eq!(errs[0].line, 1);
        assert_eq!(errs[0].col, 19);
    }

    #[test]
    fn reports_syntax_errors_with_position() {
        let errs = parse_scene("valuation { free free; }").unwrap_err();
        assert_eq!(errs[0].line, 1);
        assert!(errs[0].col > 1);
        let errs = parse_scene("curve { deg 1; }").unwrap_err();
        assert!(errs[0].message.contains("identifier"));
    }

    #[test]
    fn parses_custom_surfaces_and_overrides() {
        let text = "surface custom { rho 2; d2 4/3; };\n\
                    valuation { free; free; }\n\
                    flag { free; }\n\
                    tangent { points 1, 2; allow_satellite; }\n\
                    tmax 7/2;\n\
                    curve A { dC 1; selfint -2; mult 1:1; }\n\
                    curve B { dC 3/2; selfint 0; system 2; pair A 2; }";
        let scene = parse_scene(text).unwrap();
        assert_eq!(scene.surface.d2, ratio(4, 3));
        assert_eq!(scene.surface.rho, 2);
        assert_eq!(scene.t_max, TMax::Value(ratio(7, 2)));
        assert!(scene.allow_satellite_tangent);
        assert_eq!(scene.curves[0].pairwise.get("B"), Some(&rat(2)));
        assert_eq!(scene.curves[1].self_int, rat(0));
    }

    #[test]
    fn comments_and_whitespace_are_ignored() {
        let text = "# a scene\nsurface p2;   # trailing\nvaluation {\n  free; # p1\n}\n";
        assert!(parse_scene(text).is_ok());
    }

    #[test]
    fn round_trips_fixture_scenes() {
        for text in [
            "surface p2; valuation { free; free; sat(1); } curve H { deg 1; mult 1:1, 2:1; }",
            "valuation { free; }",
            "surface custom { rho 2; d2 4/3; }; valuation { free; free; } \
             curve A { dC 1; selfint -2; mult 1:1; } \
             curve B { dC 3/2; selfint 0; pair A 2; }",
        ] {
            let scene = parse_scene(text).unwrap();
            let canonical = serialize_scene(&scene);
            let reparsed = parse_scene(&canonical).unwrap();
            assert_eq!(scene, reparsed, "canonical text:\n{canonical}");
            // canonical form is a fixed point
            assert_eq!(serialize_scene(&reparsed), canonical);
        }
    }

    #[test]
    fn rejects_duplicate_statements() {
        let errs = parse_scene("surface p2; surface p2; valuation { free; }").unwrap_err();
        assert!(errs[0].message.contains("duplicate"));
        let errs =
            parse_scene("valuation { free; } curve H { deg 1; } curve H { deg 2; }").unwrap_err();
        assert!(errs[0].message.contains("duplicate curve name"));
    }
}
