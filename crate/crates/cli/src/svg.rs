//! Hand-rolled SVG line charts. Self-contained output: inline attributes
//! only, generic font families, fixed two-decimal coordinates — so the same
//! data always produces the same bytes.

pub struct CurveSeries {
    pub label: String,
    pub color: &'static str,
    /// (n, expected gain) pairs in sweep order.
    pub points: Vec<(f64, f64)>,
    /// Break-even strategy size to annotate, when one exists in range.
    pub crossing: Option<u64>,
}

const WIDTH: f64 = 880.0;
const HEIGHT: f64 = 560.0;
const LEFT: f64 = 78.0;
const RIGHT: f64 = 30.0;
const TOP: f64 = 44.0;
const BOTTOM: f64 = 58.0;

fn fmt2(v: f64) -> String {
    format!("{v:.2}")
}

struct Axes {
    x_min: f64,
    x_max: f64,
    y_min: f64,
    y_max: f64,
}

impl Axes {
    fn from_series(series: &[CurveSeries]) -> Axes {
        let mut x_min = f64::INFINITY;
        let mut x_max = f64::NEG_INFINITY;
        // Keep the zero-gain line inside the frame whatever the data.
        let mut y_min = 0.0f64;
        let mut y_max = 0.0f64;
        for curve in series {
            for &(x, y) in &curve.points {
                x_min = x_min.min(x);
                x_max = x_max.max(x);
                y_min = y_min.min(y);
                y_max = y_max.max(y);
            }
        }
        if !x_min.is_finite() {
            x_min = 0.0;
            x_max = 1.0;
        }
        if x_min == x_max {
            x_max = x_min + 1.0;
        }
        let pad = ((y_max - y_min) * 0.05).max(1.0);
        Axes {
            x_min,
            x_max,
            y_min: y_min - pad,
            y_max: y_max + pad,
        }
    }

    fn x_px(&self, x: f64) -> f64 {
        LEFT + (x - self.x_min) / (self.x_max - self.x_min) * (WIDTH - LEFT - RIGHT)
    }

    fn y_px(&self, y: f64) -> f64 {
        HEIGHT - BOTTOM - (y - self.y_min) / (self.y_max - self.y_min) * (HEIGHT - TOP - BOTTOM)
    }
}

/// Render a gain chart: one polyline per series, the zero-gain axis, tick
/// labels, break-even markers, and a legend.
pub fn gain_chart(title: &str, x_label: &str, y_label: &str, series: &[CurveSeries]) -> String {
    let axes = Axes::from_series(series);
    let mut svg = String::with_capacity(16 * 1024);
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" \
         viewBox=\"0 0 {WIDTH} {HEIGHT}\">\n"
    ));
    svg.push_str(&format!(
        "<rect x=\"0\" y=\"0\" width=\"{WIDTH}\" height=\"{HEIGHT}\" fill=\"white\"/>\n"
    ));
    svg.push_str(&format!(
        "<text x=\"{}\" y=\"26\" text-anchor=\"middle\" font-family=\"sans-serif\" \
         font-size=\"17\">{title}</text>\n",
        fmt2(WIDTH / 2.0)
    ));

    // Plot frame.
    svg.push_str(&format!(
        "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"black\" \
         stroke-width=\"1\"/>\n",
        fmt2(LEFT),
        fmt2(TOP),
        fmt2(WIDTH - LEFT - RIGHT),
        fmt2(HEIGHT - TOP - BOTTOM)
    ));

    // Ticks and labels on both axes.
    for i in 0..=4 {
        let frac = i as f64 / 4.0;
        let x_val = axes.x_min + frac * (axes.x_max - axes.x_min);
        let x = axes.x_px(x_val);
        svg.push_str(&format!(
            "<line x1=\"{x}\" y1=\"{y0}\" x2=\"{x}\" y2=\"{y1}\" stroke=\"black\" stroke-width=\"1\"/>\n",
            x = fmt2(x),
            y0 = fmt2(HEIGHT - BOTTOM),
            y1 = fmt2(HEIGHT - BOTTOM + 5.0)
        ));
        svg.push_str(&format!(
            "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\" font-family=\"monospace\" \
             font-size=\"12\">{}</text>\n",
            fmt2(x),
            fmt2(HEIGHT - BOTTOM + 20.0),
            format_args!("{x_val:.0}")
        ));

        let y_val = axes.y_min + frac * (axes.y_max - axes.y_min);
        let y = axes.y_px(y_val);
        svg.push_str(&format!(
            "<line x1=\"{x0}\" y1=\"{y}\" x2=\"{x1}\" y2=\"{y}\" stroke=\"black\" stroke-width=\"1\"/>\n",
            x0 = fmt2(LEFT - 5.0),
            x1 = fmt2(LEFT),
            y = fmt2(y)
        ));
        svg.push_str(&format!(
            "<text x=\"{}\" y=\"{}\" text-anchor=\"end\" font-family=\"monospace\" \
             font-size=\"12\">{}</text>\n",
            fmt2(LEFT - 9.0),
            fmt2(y + 4.0),
            format_args!("{y_val:.1}")
        ));
    }

    // Zero-gain axis.
    let zero_y = axes.y_px(0.0);
    svg.push_str(&format!(
        "<line x1=\"{}\" y1=\"{zy}\" x2=\"{}\" y2=\"{zy}\" stroke=\"gray\" stroke-width=\"1\" \
         stroke-dasharray=\"6,4\"/>\n",
        fmt2(LEFT),
        fmt2(WIDTH - RIGHT),
        zy = fmt2(zero_y)
    ));

    for curve in series {
        let coords: Vec<String> = curve
            .points
            .iter()
            .map(|&(x, y)| format!("{},{}", fmt2(axes.x_px(x)), fmt2(axes.y_px(y))))
            .collect();
        svg.push_str(&format!(
            "<polyline fill=\"none\" stroke=\"{}\" stroke-width=\"2\" points=\"{}\"/>\n",
            curve.color,
            coords.join(" ")
        ));
    }

    // Break-even annotations after the curves so they stay visible.
    for (index, curve) in series.iter().enumerate() {
        let Some(crossing) = curve.crossing else {
            continue;
        };
        let cx = crossing as f64;
        if cx < axes.x_min || cx > axes.x_max {
            continue;
        }
        let x = axes.x_px(cx);
        svg.push_str(&format!(
            "<line x1=\"{x}\" y1=\"{}\" x2=\"{x}\" y2=\"{}\" stroke=\"{}\" stroke-width=\"1\" \
             stroke-dasharray=\"3,3\"/>\n",
            fmt2(TOP),
            fmt2(HEIGHT - BOTTOM),
            curve.color,
            x = fmt2(x)
        ));
        svg.push_str(&format!(
            "<text x=\"{}\" y=\"{}\" text-anchor=\"start\" font-family=\"monospace\" \
             font-size=\"12\" fill=\"{}\">break-even n = {crossing}</text>\n",
            fmt2(x + 6.0),
            fmt2(TOP + 16.0 + 16.0 * index as f64),
            curve.color
        ));
    }

    // Legend, top-left corner of the plot area.
    for (index, curve) in series.iter().enumerate() {
        let y = TOP + 18.0 + 18.0 * index as f64;
        svg.push_str(&format!(
            "<line x1=\"{}\" y1=\"{y}\" x2=\"{}\" y2=\"{y}\" stroke=\"{}\" stroke-width=\"2\"/>\n",
            fmt2(LEFT + 12.0),
            fmt2(LEFT + 40.0),
            curve.color,
            y = fmt2(y)
        ));
        svg.push_str(&format!(
            "<text x=\"{}\" y=\"{}\" text-anchor=\"start\" font-family=\"sans-serif\" \
             font-size=\"13\">{}</text>\n",
            fmt2(LEFT + 46.0),
            fmt2(y + 4.0),
            curve.label
        ));
    }

    // Axis labels.
    svg.push_str(&format!(
        "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\" font-family=\"sans-serif\" \
         font-size=\"14\">{x_label}</text>\n",
        fmt2(LEFT + (WIDTH - LEFT - RIGHT) / 2.0),
        fmt2(HEIGHT - 14.0)
    ));
    svg.push_str(&format!(
        "<text x=\"20\" y=\"{}\" text-anchor=\"middle\" font-family=\"sans-serif\" \
         font-size=\"14\" transform=\"rotate(-90 20 {mid})\">{y_label}</text>\n",
        fmt2(TOP + (HEIGHT - TOP - BOTTOM) / 2.0),
        mid = fmt2(TOP + (HEIGHT - TOP - BOTTOM) / 2.0)
    ));

    svg.push_str("</svg>\n");
    svg
}
