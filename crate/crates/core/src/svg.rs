//! SVG rendering of a Newton-Okounkov polygon with its bounding and
//! inscribed triangles. The single place where exact coordinates pass
//! through a floating conversion, at draw time only.

use crate::nok::{ExactPoint, NokPolygon};

const WIDTH: f64 = 600.0;
const HEIGHT: f64 = 400.0;
const MARGIN: f64 = 52.0;

struct Mapper {
    sx: f64,
    sy: f64,
    max_y_px: f64,
    min_x: f64,
    min_y: f64,
}

impl Mapper {
    fn map(&self, p: &ExactPoint) -> (f64, f64) {
        let x = MARGIN + (p.x.approx_f64() - self.min_x) * self.sx;
        let y = self.max_y_px - (p.y.approx_f64() - self.min_y) * self.sy;
        (x, y)
    }
}

fn path_for(points: &[ExactPoint], mapper: &Mapper) -> String {
    let coords: Vec<String> = points
        .iter()
        .map(|p| {
            let (x, y) = mapper.map(p);
            format!("{x:.2},{y:.2}")
        })
        .collect();
    coords.join(" ")
}

pub fn render(
    polygon: &NokPolygon,
    triangle_bound: Option<&[ExactPoint]>,
    triangle_inscribed: Option<&[ExactPoint]>,
) -> String {
    let mut all: Vec<&ExactPoint> = polygon.vertices.iter().collect();
    if let Some(t) = triangle_bound {
        all.extend(t.iter());
    }
    if let Some(t) = triangle_inscribed {
        all.extend(t.iter());
    }
    let xs: Vec<f64> = all.iter().map(|p| p.x.approx_f64()).collect();
    let ys: Vec<f64> = all.iter().map(|p| p.y.approx_f64()).collect();
    let min_x = xs.iter().cloned().fold(0.0, f64::min);
    let max_x = xs.iter().cloned().fold(1.0, f64::max);
    let min_y = ys.iter().cloned().fold(0.0, f64::min);
    let max_y = ys.iter().cloned().fold(1.0, f64::max);
    let span_x = (max_x - min_x).max(1e-9);
    let span_y = (max_y - min_y).max(1e-9);
    let mapper = Mapper {
        sx: (WIDTH - 2.0 * MARGIN) / span_x,
        sy: (HEIGHT - 2.0 * MARGIN) / span_y,
        max_y_px: HEIGHT - MARGIN,
        min_x,
        min_y,
    };

    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" \
         viewBox=\"0 0 {WIDTH} {HEIGHT}\">\n"
    ));
    svg.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
    // axes through the origin
    let origin = mapper.map(&ExactPoint::from_ints(0, 0));
    svg.push_str(&format!(
        "<line x1=\"{:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" stroke=\"#999\" stroke-width=\"1\"/>\n",
        MARGIN - 12.0,
        origin.1,
        WIDTH - MARGIN + 12.0,
        origin.1
    ));
    svg.push_str(&format!(
        "<line x1=\"{:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" stroke=\"#999\" stroke-width=\"1\"/>\n",
        origin.0,
        HEIGHT - MARGIN + 12.0,
        origin.0,
        MARGIN - 12.0
    ));
    if let Some(t) = triangle_bound {
        svg.push_str(&format!(
            "<polygon points=\"{}\" fill=\"none\" stroke=\"#555\" stroke-width=\"1.5\" \
             stroke-dasharray=\"7,4\"/>\n",
            path_for(t, &mapper)
        ));
    }
    svg.push_str(&format!(
        "<polygon points=\"{}\" fill=\"#9db8df\" fill-opacity=\"0.65\" stroke=\"#27415f\" \
         stroke-width=\"1.5\"/>\n",
        path_for(&polygon.vertices, &mapper)
    ));
    if let Some(t) = triangle_inscribed {
        svg.push_str(&format!(
            "<polygon points=\"{}\" fill=\"none\" stroke=\"#8a4d2f\" stroke-width=\"1.5\" \
             stroke-dasharray=\"3,3\"/>\n",
            path_for(t, &mapper)
        ));
    }
    // vertex labels carry the exact values
    for p in &polygon.vertices {
        let (x, y) = mapper.map(p);
        svg.push_str(&format!(
            "<circle cx=\"{x:.2}\" cy=\"{y:.2}\" r=\"3\" fill=\"#27415f\"/>\n"
        ));
        svg.push_str(&format!(
            "<text x=\"{:.2}\" y=\"{:.2}\" font-size=\"11\" font-family=\"monospace\">({}, {})</text>\n",
            x + 6.0,
            y - 5.0,
            p.x,
            p.y
        ));
    }
    svg.push_str(&format!(
        "<text x=\"{:.2}\" y=\"{:.2}\" font-size=\"11\" font-family=\"monospace\">area = {}</text>\n",
        MARGIN,
        MARGIN - 24.0,
        polygon.area
    ));
    svg.push_str("</svg>\n");
    svg
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::SurfaceModel;
    use crate::nok::{nok_polygon, Flag};
    use crate::proximity::fixtures::v2;
    use crate::zariski::{chamber_walk, fixtures::line_through, SegmentArena, TMax};

    #[test]
    fn renders_deterministic_svg() {
        let arena = SegmentArena::new(SurfaceModel::p2(), v2(), vec![line_through(3, 2)]).unwrap();
        let walk = chamber_walk(&arena, &TMax::Auto).unwrap();
        let poly = nok_polygon(&arena, &walk, Flag::Free).unwrap();
        let a = render(&poly, None, None);
        let b = render(&poly, None, None);
        assert_eq!(a, b);
        assert!(a.starts_with("<svg"));
        assert!(a.contains("polygon"));
        assert!(a.contains("1/3"));
    }
}
