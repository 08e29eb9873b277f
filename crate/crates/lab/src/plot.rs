//! Static SVG line plots of sweep curves, written without any plotting
//! dependency so the output is byte-deterministic.

use std::fmt::Write as _;
use std::path::Path;

use mirror_core::bounds::SweepCurve;
use mirror_core::error::{Error, Result};

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 480.0;
const MARGIN_L: f64 = 72.0;
const MARGIN_R: f64 = 24.0;
const MARGIN_T: f64 = 28.0;
const MARGIN_B: f64 = 56.0;
const PALETTE: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];

/// Render curves (one series per bond dimension) with error bars and an
/// optional vertical marker at a reference critical point.
pub fn render_curves(
    curves: &[SweepCurve],
    title: &str,
    y_label: &str,
    pc_marker: Option<f64>,
) -> Result<String> {
    if curves.is_empty() || curves.iter().all(|c| c.p_grid.is_empty()) {
        return Err(Error::Invalid("refusing to plot an empty series".into()));
    }
    let x_min = curves.iter().flat_map(|c| c.p_grid.iter()).copied().fold(f64::INFINITY, f64::min);
    let x_max =
        curves.iter().flat_map(|c| c.p_grid.iter()).copied().fold(f64::NEG_INFINITY, f64::max);
    let mut y_min = f64::INFINITY;
    let mut y_max = f64::NEG_INFINITY;
    for c in curves {
        for (m, e) in c.mean.iter().zip(c.stderr.iter()) {
            y_min = y_min.min(m - e);
            y_max = y_max.max(m + e);
        }
    }
    if !(y_min.is_finite() && y_max.is_finite()) {
        return Err(Error::Invalid("series contains non-finite values".into()));
    }
    let pad = ((y_max - y_min) * 0.06).max(1e-9);
    let (y_lo, y_hi) = (y_min - pad, y_max + pad);
    let x_span = (x_max - x_min).max(1e-12);
    let px = |x: f64| MARGIN_L + (x - x_min) / x_span * (WIDTH - MARGIN_L - MARGIN_R);
    let py = |y: f64| HEIGHT - MARGIN_B - (y - y_lo) / (y_hi - y_lo) * (HEIGHT - MARGIN_T - MARGIN_B);

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" viewBox=\"0 0 {WIDTH} {HEIGHT}\">"
    );
    let _ = writeln!(svg, "<rect width=\"{WIDTH}\" height=\"{HEIGHT}\" fill=\"white\"/>");
    // axes
    let _ = writeln!(
        svg,
        "<line x1=\"{:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" stroke=\"black\"/>",
        MARGIN_L,
        HEIGHT - MARGIN_B,
        WIDTH - MARGIN_R,
        HEIGHT - MARGIN_B
    );
    let _ = writeln!(
        svg,
        "<line x1=\"{:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" stroke=\"black\"/>",
        MARGIN_L, MARGIN_T, MARGIN_L,
        HEIGHT - MARGIN_B
    );
    // ticks
    for k in 0..=5 {
        let x = x_min + x_span * k as f64 / 5.0;
        let xp = px(x);
        let _ = writeln!(
            svg,
            "<line x1=\"{xp:.2}\" y1=\"{:.2}\" x2=\"{xp:.2}\" y2=\"{:.2}\" stroke=\"black\"/>",
            HEIGHT - MARGIN_B,
            HEIGHT - MARGIN_B + 5.0
        );
        let _ = writeln!(
            svg,
            "<text x=\"{xp:.2}\" y=\"{:.2}\" font-family=\"monospace\" font-size=\"12\" text-anchor=\"middle\">{x:.3}</text>",
            HEIGHT - MARGIN_B + 20.0
        );
        let y = y_lo + (y_hi - y_lo) * k as f64 / 5.0;
        let yp = py(y);
        let _ = writeln!(
            svg,
            "<line x1=\"{:.2}\" y1=\"{yp:.2}\" x2=\"{:.2}\" y2=\"{yp:.2}\" stroke=\"black\"/>",
            MARGIN_L - 5.0,
            MARGIN_L
        );
        let _ = writeln!(
            svg,
            "<text x=\"{:.2}\" y=\"{:.2}\" font-family=\"monospace\" font-size=\"12\" text-anchor=\"end\">{y:.3}</text>",
            MARGIN_L - 8.0,
            yp + 4.0
        );
    }
    // labels
    let _ = writeln!(
        svg,
        "<text x=\"{:.2}\" y=\"{:.2}\" font-family=\"monospace\" font-size=\"13\" text-anchor=\"middle\">measurement rate p</text>",
        (MARGIN_L + WIDTH - MARGIN_R) / 2.0,
        HEIGHT - 12.0
    );
    let _ = writeln!(
        svg,
        "<text x=\"16\" y=\"{:.2}\" font-family=\"monospace\" font-size=\"13\" transform=\"rotate(-90 16 {:.2})\" text-anchor=\"middle\">{y_label}</text>",
        (MARGIN_T + HEIGHT - MARGIN_B) / 2.0,
        (MARGIN_T + HEIGHT - MARGIN_B) / 2.0
    );
    let _ = writeln!(
        svg,
        "<text x=\"{:.2}\" y=\"18\" font-family=\"monospace\" font-size=\"14\" text-anchor=\"middle\">{title}</text>",
        (MARGIN_L + WIDTH - MARGIN_R) / 2.0
    );
    // reference critical point
    if let Some(pc) = pc_marker {
        if pc >= x_min && pc <= x_max {
            let xp = px(pc);
            let _ = writeln!(
                svg,
                "<line x1=\"{xp:.2}\" y1=\"{:.2}\" x2=\"{xp:.2}\" y2=\"{:.2}\" stroke=\"gray\" stroke-dasharray=\"6,4\"/>",
                MARGIN_T,
                HEIGHT - MARGIN_B
            );
        }
    }
    // series
    for (k, curve) in curves.iter().enumerate() {
        let color = PALETTE[k % PALETTE.len()];
        let mut points = String::new();
        for (x, y) in curve.p_grid.iter().zip(curve.mean.iter()) {
            let _ = write!(points, "{:.2},{:.2} ", px(*x), py(*y));
        }
        let _ = writeln!(
            svg,
            "<polyline points=\"{}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\"/>",
            points.trim_end()
        );
        for ((x, y), e) in curve.p_grid.iter().zip(curve.mean.iter()).zip(curve.stderr.iter()) {
            let xp = px(*x);
            let _ = writeln!(
                svg,
                "<circle cx=\"{xp:.2}\" cy=\"{:.2}\" r=\"2.5\" fill=\"{color}\"/>",
                py(*y)
            );
            if *e > 0.0 {
                let (ylo, yhi) = (py(y - e), py(y + e));
                let _ = writeln!(
                    svg,
                    "<line x1=\"{xp:.2}\" y1=\"{ylo:.2}\" x2=\"{xp:.2}\" y2=\"{yhi:.2}\" stroke=\"{color}\"/>"
                );
                for yy in [ylo, yhi] {
                    let _ = writeln!(
                        svg,
                        "<line x1=\"{:.2}\" y1=\"{yy:.2}\" x2=\"{:.2}\" y2=\"{yy:.2}\" stroke=\"{color}\"/>",
                        xp - 3.0,
                        xp + 3.0
                    );
                }
            }
        }
        // legend entry
        let ly = MARGIN_T + 16.0 * k as f64 + 8.0;
        let _ = writeln!(
            svg,
            "<line x1=\"{:.2}\" y1=\"{ly:.2}\" x2=\"{:.2}\" y2=\"{ly:.2}\" stroke=\"{color}\" stroke-width=\"2\"/>",
            WIDTH - MARGIN_R - 110.0,
            WIDTH - MARGIN_R - 86.0
        );
        let _ = writeln!(
            svg,
            "<text x=\"{:.2}\" y=\"{:.2}\" font-family=\"monospace\" font-size=\"12\">N={} D={}</text>",
            WIDTH - MARGIN_R - 80.0,
            ly + 4.0,
            curve.n,
            curve.d
        );
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}

/// Write the two standard sweep plots (mean F vs p; entropy bound vs p).
pub fn write_plots(
    fidelity: &[SweepCurve],
    bounds: &[SweepCurve],
    dir: &Path,
    pc_marker: Option<f64>,
) -> Result<(std::path::PathBuf, std::path::PathBuf)> {
    let f_svg = render_curves(fidelity, "mean mirror fidelity", "F", pc_marker)?;
    let b_svg = render_curves(
        bounds,
        "fidelity-derived entropy bound",
        "S upper bound [nats]",
        pc_marker,
    )?;
    std::fs::create_dir_all(dir)?;
    let f_path = dir.join("fidelity.svg");
    let b_path = dir.join("entropy_bound.svg");
    std::fs::write(&f_path, f_svg)?;
    std::fs::write(&b_path, b_svg)?;
    Ok((f_path, b_path))
}

#[cfg(test)]
mod tests {
    use super::*;
    use mirror_core::circuit::GateSet;

    fn demo_curve() -> SweepCurve {
        SweepCurve::new(
            GateSet::Clifford,
            8,
            4,
            vec![0.1, 0.2, 0.3],
            vec![0.4, 0.6, 0.8],
            vec![0.02, 0.01, 0.02],
            10,
        )
        .unwrap()
    }

    #[test]
    fn renders_deterministic_svg() {
        let curves = vec![demo_curve()];
        let a = render_curves(&curves, "t", "y", Some(0.16)).unwrap();
        let b = render_curves(&curves, "t", "y", Some(0.16)).unwrap();
        assert_eq!(a, b);
        assert!(a.starts_with("<svg"));
        assert!(a.contains("polyline"));
        assert!(a.contains("stroke-dasharray"));
    }

    #[test]
    fn empty_series_is_an_error() {
        assert!(render_curves(&[], "t", "y", None).is_err());
    }
}
