//! Minimal SVG emitter for the parameter-plane picture: colored grid cells
//! for the region classes and the boundary curve drawn as a polyline.

use crate::region::{self, RegionRow, RegionTag};
use std::fmt::Write;

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 560.0;
const MARGIN: f64 = 60.0;

fn fill(tag: RegionTag) -> &'static str {
    match tag {
        RegionTag::GreenInterior => "#4caf50",
        RegionTag::GreenBoundary => "#1b5e20",
        RegionTag::RedOnly => "#e05c4f",
        RegionTag::Outside => "#ffffff",
    }
}

/// Render a lambda1-major grid of classified cells (as produced by
/// `region::grid`) into a standalone SVG document.
pub fn emit_region_svg(
    rows: &[RegionRow],
    n1: usize,
    n2: usize,
    lambda1_range: (f64, f64),
    lambda2_range: (f64, f64),
) -> String {
    assert_eq!(rows.len(), n1 * n2, "grid size mismatch");
    let plot_w = WIDTH - 2.0 * MARGIN;
    let plot_h = HEIGHT - 2.0 * MARGIN;
    let x_of = |l1: f64| MARGIN + (l1 - lambda1_range.0) / (lambda1_range.1 - lambda1_range.0) * plot_w;
    let y_of = |l2: f64| HEIGHT - MARGIN - (l2 - lambda2_range.0) / (lambda2_range.1 - lambda2_range.0) * plot_h;
    let cell_w = plot_w / n1 as f64;
    let cell_h = plot_h / n2 as f64;

    let mut s = String::new();
    let _ = writeln!(
        s,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" viewBox=\"0 0 {WIDTH} {HEIGHT}\">"
    );
    let _ = writeln!(s, "<rect width=\"{WIDTH}\" height=\"{HEIGHT}\" fill=\"white\"/>");
    for row in rows {
        if row.class == RegionTag::Outside {
            continue;
        }
        let x = x_of(row.lambda1) - 0.5 * cell_w;
        let y = y_of(row.lambda2) - 0.5 * cell_h;
        let _ = writeln!(
            s,
            "<rect x=\"{:.4}\" y=\"{:.4}\" width=\"{:.4}\" height=\"{:.4}\" fill=\"{}\"/>",
            x,
            y,
            cell_w,
            cell_h,
            fill(row.class)
        );
    }
    // boundary curve over its domain, drawn on top
    let mut pts = String::new();
    let samples = 400;
    for k in 0..=samples {
        let l1 = -2.0 + 4.0 * k as f64 / samples as f64;
        if l1 < lambda1_range.0 || l1 > lambda1_range.1 {
            continue;
        }
        let l2 = region::eval_l1(l1).expect("in domain");
        if l2 < lambda2_range.0 || l2 > lambda2_range.1 {
            continue;
        }
        let _ = write!(pts, "{:.4},{:.4} ", x_of(l1), y_of(l2));
    }
    let _ = writeln!(
        s,
        "<polyline points=\"{}\" fill=\"none\" stroke=\"#0d3d12\" stroke-width=\"2\"/>",
        pts.trim_end()
    );
    // axes
    let _ = writeln!(
        s,
        "<line x1=\"{m}\" y1=\"{b}\" x2=\"{r}\" y2=\"{b}\" stroke=\"black\"/>",
        m = MARGIN,
        b = HEIGHT - MARGIN,
        r = WIDTH - MARGIN
    );
    let _ = writeln!(
        s,
        "<line x1=\"{m}\" y1=\"{t}\" x2=\"{m}\" y2=\"{b}\" stroke=\"black\"/>",
        m = MARGIN,
        t = MARGIN,
        b = HEIGHT - MARGIN
    );
    for (v, label) in [(lambda1_range.0, format!("{}", lambda1_range.0)), (0.0, "0".into()), (lambda1_range.1, format!("{}", lambda1_range.1))] {
        if v >= lambda1_range.0 && v <= lambda1_range.1 {
            let _ = writeln!(
                s,
                "<text x=\"{:.1}\" y=\"{:.1}\" font-size=\"14\" text-anchor=\"middle\">{}</text>",
                x_of(v),
                HEIGHT - MARGIN + 20.0,
                label
            );
        }
    }
    for v in [lambda2_range.0, lambda2_range.1] {
        let _ = writeln!(
            s,
            "<text x=\"{:.1}\" y=\"{:.1}\" font-size=\"14\" text-anchor=\"end\">{}</text>",
            MARGIN - 8.0,
            y_of(v) + 5.0,
            v
        );
    }
    let _ = writeln!(
        s,
        "<text x=\"{:.1}\" y=\"{:.1}\" font-size=\"15\" text-anchor=\"middle\">lambda1</text>",
        MARGIN + plot_w / 2.0,
        HEIGHT - 14.0
    );
    let _ = writeln!(
        s,
        "<text x=\"16\" y=\"{:.1}\" font-size=\"15\" text-anchor=\"middle\" transform=\"rotate(-90 16 {:.1})\">lambda2</text>",
        MARGIN + plot_h / 2.0,
        MARGIN + plot_h / 2.0
    );
    s.push_str("</svg>\n");
    s
}

/// Point of the boundary polyline nearest to the given parameter point, in
/// plot coordinates scaled back to parameter units (used by tests to verify
/// the curve passes through the advertised corners).
pub fn boundary_passes_near(l1: f64, l2: f64, cell: f64) -> bool {
    if !(-2.0..=2.0).contains(&l1) {
        return false;
    }
    (region::eval_l1(l1).unwrap() - l2).abs() <= cell
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::region::grid;

    #[test]
    fn small_grid_structure() {
        let rows = grid(10, 10, (-4.0, 2.0), (0.0, 6.0), 1.0);
        let svg = emit_region_svg(&rows, 10, 10, (-4.0, 2.0), (0.0, 6.0));
        assert!(svg.starts_with("<svg"));
        assert!(svg.ends_with("</svg>\n"));
        assert!(svg.contains("polyline"));
        // colored cells exist for both regions
        assert!(svg.contains("#4caf50"));
        assert!(svg.contains("#e05c4f"));
    }

    #[test]
    fn boundary_endpoints() {
        assert!(boundary_passes_near(2.0, 6.0, 1e-9));
        let xs = region::x_star();
        assert!(boundary_passes_near(xs, 4.0 + xs, 1e-9));
        assert!(boundary_passes_near(-2.0 + 1e-9, 0.0, 1e-3));
    }

    #[test]
    fn kappa_independence_of_image() {
        let a = emit_region_svg(&grid(8, 8, (-4.0, 2.0), (0.0, 6.0), 1.0), 8, 8, (-4.0, 2.0), (0.0, 6.0));
        let b = emit_region_svg(&grid(8, 8, (-4.0, 2.0), (0.0, 6.0), 3.7), 8, 8, (-4.0, 2.0), (0.0, 6.0));
        assert_eq!(a, b);
    }
}
