//! Minimal static SVG line charts (fixed 800×600 viewBox, no external
//! renderer): one panel per call, two series per grid line (uncorrected
//! solid, corrected dashed).

use std::fmt::Write as _;

use crate::report::{param_symbol, McCsvRow};

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 600.0;
const MARGIN_LEFT: f64 = 80.0;
const MARGIN_RIGHT: f64 = 180.0;
const MARGIN_TOP: f64 = 50.0;
const MARGIN_BOTTOM: f64 = 60.0;

/// 12 distinguishable stroke colors; corrected series reuse the color of
/// their uncorrected partner with a dash pattern.
const PALETTE: [&str; 12] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
    "#bcbd22", "#17becf", "#aec7e8", "#ffbb78",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Panel {
    RelbiasN,
    RmseN,
    RelbiasParam,
    RmseParam,
}

impl Panel {
    pub fn name(self) -> &'static str {
        match self {
            Panel::RelbiasN => "relbias_n",
            Panel::RmseN => "rmse_n",
            Panel::RelbiasParam => "relbias_param",
            Panel::RmseParam => "rmse_param",
        }
    }

    fn metric_label(self) -> &'static str {
        match self {
            Panel::RelbiasN | Panel::RelbiasParam => "relative bias",
            Panel::RmseN | Panel::RmseParam => "RMSE",
        }
    }

    fn x_is_n(self) -> bool {
        matches!(self, Panel::RelbiasN | Panel::RmseN)
    }
}

#[derive(Debug, Clone)]
pub struct Series {
    pub label: String,
    pub color: &'static str,
    pub dashed: bool,
    pub points: Vec<(f64, f64)>,
}

/// Groups CSV rows into plot series for the requested panel: one
/// (solid, dashed) pair per grid value on the non-axis dimension.
pub fn panel_series(rows: &[McCsvRow], panel: Panel) -> Vec<Series> {
    let family = rows.first().map(|r| r.family.as_str()).unwrap_or("");
    let symbol = param_symbol(family);
    let mut keys: Vec<f64> = rows
        .iter()
        .map(|r| if panel.x_is_n() { r.param } else { r.n as f64 })
        .collect();
    keys.sort_by(f64::total_cmp);
    keys.dedup();

    let metric = |r: &McCsvRow| match panel {
        Panel::RelbiasN | Panel::RelbiasParam => r.relbias,
        Panel::RmseN | Panel::RmseParam => r.rmse,
    };

    let mut series = Vec::new();
    for (i, &key) in keys.iter().enumerate() {
        for corrected in [false, true] {
            let mut points: Vec<(f64, f64)> = rows
                .iter()
                .filter(|r| {
                    r.corrected == corrected
                        && if panel.x_is_n() {
                            r.param == key
                        } else {
                            r.n as f64 == key
                        }
                })
                .map(|r| {
                    let x = if panel.x_is_n() { r.n as f64 } else { r.param };
                    (x, metric(r))
                })
                .collect();
            if points.is_empty() {
                continue;
            }
            points.sort_by(|a, b| a.0.total_cmp(&b.0));
            let key_name = if panel.x_is_n() {
                format!("{symbol}={}", short(key))
            } else {
                format!("n={}", short(key))
            };
            series.push(Series {
                label: format!("{key_name} ({})", if corrected { "corr" } else { "unc" }),
                color: PALETTE[i % PALETTE.len()],
                dashed: corrected,
                points,
            });
        }
    }
    series
}

/// Renders one panel to SVG text.
pub fn line_chart(title: &str, panel: Panel, rows: &[McCsvRow]) -> String {
    let series = panel_series(rows, panel);
    let x_label = if panel.x_is_n() {
        "n"
    } else {
        param_symbol(rows.first().map(|r| r.family.as_str()).unwrap_or(""))
    };
    render(title, x_label, panel.metric_label(), &series)
}

fn short(v: f64) -> String {
    if v == v.trunc() && v.abs() < 1e9 {
        return format!("{}", v as i64);
    }
    let s = format!("{v:.6}");
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}

fn tick_label(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    if v.abs() >= 1e-3 && v.abs() < 1e6 {
        let s = format!("{v:.4}");
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        format!("{v:.2e}")
    }
}

fn render(title: &str, x_label: &str, y_label: &str, series: &[Series]) -> String {
    let plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
    let plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;

    let xs: Vec<f64> = series
        .iter()
        .flat_map(|s| s.points.iter().map(|p| p.0))
        .collect();
    let ys: Vec<f64> = series
        .iter()
        .flat_map(|s| s.points.iter().map(|p| p.1))
        .collect();
    let (x_min, x_max) = padded_range(&xs, false);
    let (y_min, y_max) = padded_range(&ys, true);

    let sx = move |x: f64| MARGIN_LEFT + (x - x_min) / (x_max - x_min) * plot_w;
    let sy = move |y: f64| MARGIN_TOP + plot_h - (y - y_min) / (y_max - y_min) * plot_h;

    let mut svg = String::new();
    writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif">"#
    )
    .unwrap();
    writeln!(
        svg,
        r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#
    )
    .unwrap();
    writeln!(
        svg,
        r#"<text x="{}" y="28" text-anchor="middle" font-size="16">{title}</text>"#,
        MARGIN_LEFT + plot_w / 2.0
    )
    .unwrap();

    // Frame.
    writeln!(
        svg,
        r##"<rect x="{MARGIN_LEFT}" y="{MARGIN_TOP}" width="{plot_w}" height="{plot_h}" fill="none" stroke="#333" stroke-width="1"/>"##
    )
    .unwrap();

    // Y ticks and gridlines.
    for i in 0..=5 {
        let y = y_min + (y_max - y_min) * f64::from(i) / 5.0;
        let py = sy(y);
        writeln!(
            svg,
            r##"<line x1="{MARGIN_LEFT}" y1="{py:.2}" x2="{:.2}" y2="{py:.2}" stroke="#ddd" stroke-width="0.5"/>"##,
            MARGIN_LEFT + plot_w
        )
        .unwrap();
        writeln!(
            svg,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="end" font-size="11">{}</text>"#,
            MARGIN_LEFT - 6.0,
            py + 4.0,
            tick_label(y)
        )
        .unwrap();
    }
    // Zero reference when the range crosses it.
    if y_min < 0.0 && y_max > 0.0 {
        let py = sy(0.0);
        writeln!(
            svg,
            r##"<line x1="{MARGIN_LEFT}" y1="{py:.2}" x2="{:.2}" y2="{py:.2}" stroke="#999" stroke-width="1" stroke-dasharray="2 2"/>"##,
            MARGIN_LEFT + plot_w
        )
        .unwrap();
    }

    // X ticks at the observed grid values (fall back to 6 even ticks).
    let mut x_ticks: Vec<f64> = xs.clone();
    x_ticks.sort_by(f64::total_cmp);
    x_ticks.dedup();
    if x_ticks.len() > 10 {
        x_ticks = (0..=5)
            .map(|i| x_min + (x_max - x_min) * f64::from(i) / 5.0)
            .collect();
    }
    for &x in &x_ticks {
        let px = sx(x);
        writeln!(
            svg,
            r##"<line x1="{px:.2}" y1="{:.2}" x2="{px:.2}" y2="{:.2}" stroke="#333" stroke-width="1"/>"##,
            MARGIN_TOP + plot_h,
            MARGIN_TOP + plot_h + 5.0
        )
        .unwrap();
        writeln!(
            svg,
            r#"<text x="{px:.2}" y="{:.2}" text-anchor="middle" font-size="11">{}</text>"#,
            MARGIN_TOP + plot_h + 18.0,
            tick_label(x)
        )
        .unwrap();
    }

    // Axis labels.
    writeln!(
        svg,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle" font-size="13">{x_label}</text>"#,
        MARGIN_LEFT + plot_w / 2.0,
        HEIGHT - 16.0
    )
    .unwrap();
    writeln!(
        svg,
        r#"<text x="20" y="{:.2}" text-anchor="middle" font-size="13" transform="rotate(-90 20 {:.2})">{y_label}</text>"#,
        MARGIN_TOP + plot_h / 2.0,
        MARGIN_TOP + plot_h / 2.0
    )
    .unwrap();

    // Series.
    for s in series {
        let dash = if s.dashed {
            r#" stroke-dasharray="6 3""#
        } else {
            ""
        };
        let pts: Vec<String> = s
            .points
            .iter()
            .map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y)))
            .collect();
        writeln!(
            svg,
            r#"<polyline points="{}" fill="none" stroke="{}" stroke-width="1.8"{dash}/>"#,
            pts.join(" "),
            s.color
        )
        .unwrap();
        for &(x, y) in &s.points {
            writeln!(
                svg,
                r#"<circle cx="{:.2}" cy="{:.2}" r="3" fill="{}"/>"#,
                sx(x),
                sy(y),
                s.color
            )
            .unwrap();
        }
    }

    // Legend.
    let legend_x = MARGIN_LEFT + plot_w + 12.0;
    for (i, s) in series.iter().enumerate() {
        let y = MARGIN_TOP + 14.0 + i as f64 * 18.0;
        let dash = if s.dashed {
            r#" stroke-dasharray="6 3""#
        } else {
            ""
        };
        writeln!(
            svg,
            r#"<line x1="{legend_x:.2}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="{}" stroke-width="1.8"{dash}/>"#,
            legend_x + 24.0,
            s.color
        )
        .unwrap();
        writeln!(
            svg,
            r#"<text x="{:.2}" y="{:.2}" font-size="11">{}</text>"#,
            legend_x + 30.0,
            y + 4.0,
            s.label
        )
        .unwrap();
    }

    svg.push_str("</svg>\n");
    svg
}

fn padded_range(values: &[f64], include_zero: bool) -> (f64, f64) {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for &v in values {
        lo = lo.min(v);
        hi = hi.max(v);
    }
    if include_zero {
        lo = lo.min(0.0);
        hi = hi.max(0.0);
    }
    if !lo.is_finite() || !hi.is_finite() {
        return (0.0, 1.0);
    }
    if lo == hi {
        return (lo - 1.0, hi + 1.0);
    }
    let pad = 0.05 * (hi - lo);
    (lo - pad, hi + pad)
}
