//! Minimal hand-rolled SVG writer: polylines, dashed guide lines, axes with
//! tick labels. No external assets.

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 560.0;
const MARGIN: f64 = 60.0;
const PALETTE: [&str; 6] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf",
];

#[derive(Clone, Debug)]
pub struct Polyline {
    pub points: Vec<(f64, f64)>,
    pub color_index: usize,
    pub dashed: bool,
}

#[derive(Clone, Debug, Default)]
pub struct Plot {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub polylines: Vec<Polyline>,
    /// Dashed vertical guides (e.g. pole locations on a λ axis).
    pub vertical_guides: Vec<f64>,
    /// Dashed horizontal guides (e.g. pole locations on a λ(a) plot).
    pub horizontal_guides: Vec<f64>,
}

impl Plot {
    pub fn render(&self) -> String {
        let (mut x_min, mut x_max) = (f64::INFINITY, f64::NEG_INFINITY);
        let (mut y_min, mut y_max) = (f64::INFINITY, f64::NEG_INFINITY);
        for pl in &self.polylines {
            for &(x, y) in &pl.points {
                if x.is_finite() && y.is_finite() {
                    x_min = x_min.min(x);
                    x_max = x_max.max(x);
                    y_min = y_min.min(y);
                    y_max = y_max.max(y);
                }
            }
        }
        for &y in &self.horizontal_guides {
            y_min = y_min.min(y);
            y_max = y_max.max(y);
        }
        for &x in &self.vertical_guides {
            x_min = x_min.min(x);
            x_max = x_max.max(x);
        }
        if !x_min.is_finite() {
            x_min = 0.0;
            x_max = 1.0;
        }
        if !y_min.is_finite() {
            y_min = 0.0;
            y_max = 1.0;
        }
        if x_max - x_min < 1e-300 {
            x_max = x_min + 1.0;
        }
        if y_max - y_min < 1e-300 {
            y_max = y_min + 1.0;
        }
        let pad_x = 0.04 * (x_max - x_min);
        let pad_y = 0.06 * (y_max - y_min);
        x_min -= pad_x;
        x_max += pad_x;
        y_min -= pad_y;
        y_max += pad_y;

        let to_px = |x: f64, y: f64| -> (f64, f64) {
            let px = MARGIN + (x - x_min) / (x_max - x_min) * (WIDTH - 2.0 * MARGIN);
            let py = HEIGHT - MARGIN - (y - y_min) / (y_max - y_min) * (HEIGHT - 2.0 * MARGIN);
            (px, py)
        };

        let mut svg = String::new();
        svg.push_str(&format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" \
             viewBox=\"0 0 {WIDTH} {HEIGHT}\">\n"
        ));
        svg.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
        svg.push_str(&format!(
            "<text x=\"{:.1}\" y=\"24\" text-anchor=\"middle\" font-size=\"16\" \
             font-family=\"sans-serif\">{}</text>\n",
            WIDTH / 2.0,
            xml_escape(&self.title)
        ));

        // axes box
        svg.push_str(&format!(
            "<rect x=\"{MARGIN}\" y=\"{MARGIN}\" width=\"{:.1}\" height=\"{:.1}\" fill=\"none\" \
             stroke=\"black\" stroke-width=\"1\"/>\n",
            WIDTH - 2.0 * MARGIN,
            HEIGHT - 2.0 * MARGIN
        ));
        // ticks
        for k in 0..=4 {
            let fx = x_min + (x_max - x_min) * k as f64 / 4.0;
            let (px, _) = to_px(fx, y_min);
            svg.push_str(&format!(
                "<line x1=\"{px:.1}\" y1=\"{:.1}\" x2=\"{px:.1}\" y2=\"{:.1}\" stroke=\"black\"/>\n",
                HEIGHT - MARGIN,
                HEIGHT - MARGIN + 5.0
            ));
            svg.push_str(&format!(
                "<text x=\"{px:.1}\" y=\"{:.1}\" text-anchor=\"middle\" font-size=\"11\" \
                 font-family=\"sans-serif\">{fx:.4}</text>\n",
                HEIGHT - MARGIN + 18.0
            ));
            let fy = y_min + (y_max - y_min) * k as f64 / 4.0;
            let (_, py) = to_px(x_min, fy);
            svg.push_str(&format!(
                "<line x1=\"{:.1}\" y1=\"{py:.1}\" x2=\"{MARGIN}\" y2=\"{py:.1}\" stroke=\"black\"/>\n",
                MARGIN - 5.0
            ));
            svg.push_str(&format!(
                "<text x=\"{:.1}\" y=\"{py:.1}\" text-anchor=\"end\" font-size=\"11\" \
                 font-family=\"sans-serif\">{fy:.4}</text>\n",
                MARGIN - 8.0
            ));
        }
        svg.push_str(&format!(
            "<text x=\"{:.1}\" y=\"{:.1}\" text-anchor=\"middle\" font-size=\"13\" \
             font-family=\"sans-serif\">{}</text>\n",
            WIDTH / 2.0,
            HEIGHT - 14.0,
            xml_escape(&self.x_label)
        ));
        svg.push_str(&format!(
            "<text x=\"16\" y=\"{:.1}\" text-anchor=\"middle\" font-size=\"13\" \
             font-family=\"sans-serif\" transform=\"rotate(-90 16 {:.1})\">{}</text>\n",
            HEIGHT / 2.0,
            HEIGHT / 2.0,
            xml_escape(&self.y_label)
        ));

        for &x in &self.vertical_guides {
            let (px, _) = to_px(x, y_min);
            svg.push_str(&format!(
                "<line x1=\"{px:.1}\" y1=\"{MARGIN}\" x2=\"{px:.1}\" y2=\"{:.1}\" \
                 stroke=\"gray\" stroke-width=\"1\" stroke-dasharray=\"6 4\"/>\n",
                HEIGHT - MARGIN
            ));
        }
        for &y in &self.horizontal_guides {
            let (_, py) = to_px(x_min, y);
            svg.push_str(&format!(
                "<line x1=\"{MARGIN}\" y1=\"{py:.1}\" x2=\"{:.1}\" y2=\"{py:.1}\" \
                 stroke=\"gray\" stroke-width=\"1\" stroke-dasharray=\"6 4\"/>\n",
                WIDTH - MARGIN
            ));
        }

        for pl in &self.polylines {
            // split at non-finite points
            let mut segment: Vec<(f64, f64)> = Vec::new();
            let mut segments: Vec<Vec<(f64, f64)>> = Vec::new();
            for &(x, y) in &pl.points {
                if x.is_finite() && y.is_finite() {
                    segment.push(to_px(x, y));
                } else if !segment.is_empty() {
                    segments.push(std::mem::take(&mut segment));
                }
            }
            if !segment.is_empty() {
                segments.push(segment);
            }
            let color = PALETTE[pl.color_index % PALETTE.len()];
            let dash = if pl.dashed {
                " stroke-dasharray=\"3 3\""
            } else {
                ""
            };
            for seg in segments {
                if seg.len() == 1 {
                    svg.push_str(&format!(
                        "<circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"1.5\" fill=\"{color}\"/>\n",
                        seg[0].0, seg[0].1
                    ));
                    continue;
                }
                let path: Vec<String> = seg.iter().map(|(x, y)| format!("{x:.2},{y:.2}")).collect();
                svg.push_str(&format!(
                    "<polyline points=\"{}\" fill=\"none\" stroke=\"{color}\" \
                     stroke-width=\"1.5\"{dash}/>\n",
                    path.join(" ")
                ));
            }
        }
        svg.push_str("</svg>\n");
        svg
    }
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

/// Figure-style sweep plot: one polyline per branch of Re λ over a, the
/// complex window drawn as dashed Re ± Im envelopes, poles as dashed
/// horizontal guides.
pub fn sweep_plot(points: &[minkspec_core::TrajectoryPoint], poles: &[f64]) -> Plot {
    let branches = points.first().map_or(0, |p| p.eigenvalues.len());
    let mut plot = Plot {
        title: "eigenvalues of A over the border scalar a".into(),
        x_label: "a".into(),
        y_label: "Re λ (dashed: Re λ ± |Im λ|)".into(),
        horizontal_guides: poles.to_vec(),
        ..Plot::default()
    };
    for b in 0..branches {
        let re: Vec<(f64, f64)> = points.iter().map(|p| (p.a, p.eigenvalues[b].re)).collect();
        plot.polylines.push(Polyline {
            points: re,
            color_index: b,
            dashed: false,
        });
        let has_complex = points.iter().any(|p| p.eigenvalues[b].im != 0.0);
        if has_complex {
            for sign in [1.0, -1.0] {
                let envelope: Vec<(f64, f64)> = points
                    .iter()
                    .map(|p| {
                        let z = p.eigenvalues[b];
                        if z.im != 0.0 {
                            (p.a, z.re + sign * z.im.abs())
                        } else {
                            (p.a, f64::NAN)
                        }
                    })
                    .collect();
                plot.polylines.push(Polyline {
                    points: envelope,
                    color_index: b,
                    dashed: true,
                });
            }
        }
    }
    plot
}
