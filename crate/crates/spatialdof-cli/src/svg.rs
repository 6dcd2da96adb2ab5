//! Region plots. Polygons are emitted vertex for vertex from the region
//! description (no resampling), so two plots of the same region are
//! byte-identical and meaningful to diff.

use std::fmt::Write as _;

use spatialdof::regions::DofRegion;

const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f",
];

pub fn color(index: usize) -> &'static str {
    PALETTE[index % PALETTE.len()]
}

pub struct Curve {
    pub label: Option<String>,
    pub color: &'static str,
    pub region: DofRegion,
    /// Endpoints of the half-duplex time-sharing line, drawn dashed.
    pub hd_line: ((f64, f64), (f64, f64)),
}

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 560.0;
const MARGIN_LEFT: f64 = 78.0;
const MARGIN_RIGHT: f64 = 36.0;
const MARGIN_TOP: f64 = 36.0;
const MARGIN_BOTTOM: f64 = 66.0;

fn fmt(v: f64) -> String {
    // Two decimals are enough for pixel coordinates and keep output stable.
    format!("{v:.2}")
}

/// Human form of a tick value measured in units of L/2: "L/2", "L",
/// "3L/2", "2L", ...
fn half_length_label(halves: usize) -> String {
    if halves % 2 == 0 {
        let whole = halves / 2;
        if whole == 1 {
            "L".to_string()
        } else {
            format!("{whole}L")
        }
    } else if halves == 1 {
        "L/2".to_string()
    } else {
        format!("{halves}L/2")
    }
}

fn numeric_label(value: f64) -> String {
    if (value - value.round()).abs() < 1e-9 {
        format!("{}", value.round() as i64)
    } else {
        format!("{value}")
    }
}

/// Renders one or more regions into a standalone SVG. `l_reference`
/// switches the axes to ticks at multiples of L/2 with symbolic labels;
/// without it ticks sit at multiples of 1/2 with numeric labels.
pub fn render(curves: &[Curve], l_reference: Option<f64>) -> String {
    let data_max = |pick: fn(&DofRegion) -> f64| -> f64 {
        curves.iter().map(|c| pick(&c.region)).fold(0.0f64, f64::max)
    };
    let x_data = data_max(|r| r.d1_max.min(r.d_sum_max)).max(1e-9);
    let y_data = data_max(|r| r.d2_max.min(r.d_sum_max)).max(1e-9);

    let mut unit = l_reference.map(|l| l / 2.0).unwrap_or(0.5);
    let mut halves_per_tick = 1usize;
    while x_data.max(y_data) / unit > 12.0 {
        unit *= 2.0;
        halves_per_tick *= 2;
    }
    let ticks_up_to = |limit: f64| -> usize {
        let n = (limit / unit - 1e-9).ceil() as usize;
        n.max(1)
    };
    let x_ticks = ticks_up_to(x_data);
    let y_ticks = ticks_up_to(y_data);
    let x_max = x_ticks as f64 * unit;
    let y_max = y_ticks as f64 * unit;

    let plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
    let plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
    let px = |x: f64| MARGIN_LEFT + x / x_max * plot_w;
    let py = |y: f64| HEIGHT - MARGIN_BOTTOM - y / y_max * plot_h;

    let mut out = String::new();
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" \
         viewBox=\"0 0 {WIDTH} {HEIGHT}\">"
    );
    let _ = writeln!(
        out,
        "  <rect x=\"0\" y=\"0\" width=\"{WIDTH}\" height=\"{HEIGHT}\" fill=\"white\"/>"
    );

    // Axes.
    let x0 = px(0.0);
    let y0 = py(0.0);
    let _ = writeln!(
        out,
        "  <line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"black\" stroke-width=\"1\"/>",
        fmt(x0),
        fmt(y0),
        fmt(px(x_max)),
        fmt(y0)
    );
    let _ = writeln!(
        out,
        "  <line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"black\" stroke-width=\"1\"/>",
        fmt(x0),
        fmt(y0),
        fmt(x0),
        fmt(py(y_max))
    );

    let tick_label = |k: usize| -> String {
        if l_reference.is_some() {
            half_length_label(k * halves_per_tick)
        } else {
            numeric_label(k as f64 * unit)
        }
    };
    for k in 1..=x_ticks {
        let x = px(k as f64 * unit);
        let _ = writeln!(
            out,
            "  <line x1=\"{0}\" y1=\"{1}\" x2=\"{0}\" y2=\"{2}\" stroke=\"black\" \
             stroke-width=\"1\"/>",
            fmt(x),
            fmt(y0),
            fmt(y0 + 6.0)
        );
        let _ = writeln!(
            out,
            "  <text x=\"{}\" y=\"{}\" font-size=\"14\" text-anchor=\"middle\">{}</text>",
            fmt(x),
            fmt(y0 + 24.0),
            tick_label(k)
        );
    }
    for k in 1..=y_ticks {
        let y = py(k as f64 * unit);
        let _ = writeln!(
            out,
            "  <line x1=\"{1}\" y1=\"{0}\" x2=\"{2}\" y2=\"{0}\" stroke=\"black\" \
             stroke-width=\"1\"/>",
            fmt(y),
            fmt(x0),
            fmt(x0 - 6.0)
        );
        let _ = writeln!(
            out,
            "  <text x=\"{}\" y=\"{}\" font-size=\"14\" text-anchor=\"end\">{}</text>",
            fmt(x0 - 10.0),
            fmt(y + 5.0),
            tick_label(k)
        );
    }

    // Axis titles.
    let _ = writeln!(
        out,
        "  <text x=\"{}\" y=\"{}\" font-size=\"18\" text-anchor=\"middle\" \
         font-style=\"italic\">d\u{2081}</text>",
        fmt(MARGIN_LEFT + plot_w / 2.0),
        fmt(HEIGHT - 14.0)
    );
    let _ = writeln!(
        out,
        "  <text x=\"{}\" y=\"{}\" font-size=\"18\" text-anchor=\"middle\" \
         font-style=\"italic\" transform=\"rotate(-90 {} {})\">d\u{2082}</text>",
        fmt(22.0),
        fmt(MARGIN_TOP + plot_h / 2.0),
        fmt(22.0),
        fmt(MARGIN_TOP + plot_h / 2.0)
    );

    let fill_regions = curves.len() == 1;
    for curve in curves {
        let mut path = format!("M {} {}", fmt(px(0.0)), fmt(py(0.0)));
        for &(vx, vy) in &curve.region.vertices {
            let _ = write!(path, " L {} {}", fmt(px(vx)), fmt(py(vy)));
        }
        path.push_str(" Z");
        let fill = if fill_regions { curve.color } else { "none" };
        let fill_opacity = if fill_regions { " fill-opacity=\"0.15\"" } else { "" };
        let _ = writeln!(
            out,
            "  <path d=\"{path}\" fill=\"{fill}\"{fill_opacity} stroke=\"{}\" \
             stroke-width=\"2\"/>",
            curve.color
        );
        let ((hx1, hy1), (hx2, hy2)) = curve.hd_line;
        let _ = writeln!(
            out,
            "  <line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"{}\" \
             stroke-width=\"1.5\" stroke-dasharray=\"7 5\"/>",
            fmt(px(hx1)),
            fmt(py(hy1)),
            fmt(px(hx2)),
            fmt(py(hy2)),
            curve.color
        );
    }

    // Legend for overlays.
    let labelled: Vec<&Curve> = curves.iter().filter(|c| c.label.is_some()).collect();
    if !labelled.is_empty() {
        let lx = WIDTH - MARGIN_RIGHT - 190.0;
        let mut ly = MARGIN_TOP + 10.0;
        for curve in labelled {
            let _ = writeln!(
                out,
                "  <line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"{}\" \
                 stroke-width=\"2\"/>",
                fmt(lx),
                fmt(ly),
                fmt(lx + 28.0),
                fmt(ly),
                curve.color
            );
            let _ = writeln!(
                out,
                "  <text x=\"{}\" y=\"{}\" font-size=\"14\">{}</text>",
                fmt(lx + 36.0),
                fmt(ly + 5.0),
                curve.label.as_deref().unwrap_or("")
            );
            ly += 22.0;
        }
    }

    out.push_str("</svg>\n");
    out
}
