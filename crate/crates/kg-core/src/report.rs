//! CSV and SVG writers for the result schemas.
//!
//! Floats are written with the shortest round-trip representation, so a
//! fixed computation produces byte-identical files.

use nalgebra::Complex;

use crate::flow::FlowReport;
use crate::models::{BoundTableRow, OscillatorLevel, PenaltyPoint};
use crate::pencil::PhaseSpaceSpectrum;
use crate::radial::OscillatorCheckRow;

/// `value,signature,residual` per eigenvalue, ascending.
pub fn spectrum_csv(spec: &PhaseSpaceSpectrum) -> String {
    let mut out = String::from("value,signature,residual\n");
    for p in &spec.points {
        out.push_str(&format!("{},{},{}\n", p.value, p.signature, p.residual));
    }
    out
}

/// `re,im` per eigenvalue of the general (fallback) spectrum.
pub fn spectrum_general_csv(values: &[Complex<f64>]) -> String {
    let mut out = String::from("re,im\n");
    for z in values {
        out.push_str(&format!("{},{}\n", z.re, z.im));
    }
    out
}

/// `t,curve_id,value,signature,matched` rows, grouped by curve.
pub fn flow_csv(report: &FlowReport) -> String {
    let mut out = String::from("t,curve_id,value,signature,matched\n");
    for c in &report.curves {
        for (step, &t) in report.t_grid.iter().enumerate() {
            let sig = match c.signatures[step] {
                Some(s) => s.to_string(),
                None => "undefined".to_string(),
            };
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                t, c.id, c.values[step], sig, c.matched[step]
            ));
        }
    }
    out
}

/// `t,kind,detail` rows.
pub fn events_csv(report: &FlowReport) -> String {
    let mut out = String::from("t,kind,detail\n");
    for e in &report.events {
        let detail = e.detail.replace(',', ";");
        out.push_str(&format!("{},{},{}\n", e.t, e.kind, detail));
    }
    out
}

/// `z,zeta` rows; out-of-validity points are skipped.
pub fn penalty_csv(points: &[PenaltyPoint]) -> String {
    let mut out = String::from("z,zeta\n");
    for p in points {
        if let Some(zeta) = p.zeta {
            out.push_str(&format!("{},{}\n", p.z, zeta));
        }
    }
    out
}

/// `l,refined_lower,refined_upper,relative_lower,relative_upper` rows.
pub fn bound_table_csv(rows: &[BoundTableRow]) -> String {
    let mut out = String::from("l,refined_lower,refined_upper,relative_lower,relative_upper\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            r.l, r.refined_lower, r.refined_upper, r.relative_lower, r.relative_upper
        ));
    }
    out
}

/// `k,lambda_plus,lambda_minus` rows; the multi-index is dash-joined.
pub fn oscillator_csv(levels: &[OscillatorLevel]) -> String {
    let mut out = String::from("k,lambda_plus,lambda_minus\n");
    for l in levels {
        let k = l
            .k
            .iter()
            .map(|x| x.to_string())
            .collect::<Vec<_>>()
            .join("-");
        out.push_str(&format!("{},{},{}\n", k, l.lambda_plus, l.lambda_minus));
    }
    out
}

/// `k,discrete,formula,rel_error` rows of the oscillator cross-check.
pub fn oscillator_check_csv(rows: &[OscillatorCheckRow]) -> String {
    let mut out = String::from("k,discrete,formula,rel_error\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{}\n",
            r.k, r.discrete, r.formula, r.rel_error
        ));
    }
    out
}

/// One polyline of an SVG chart.
pub struct Series {
    pub name: String,
    pub points: Vec<(f64, f64)>,
}

const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f",
];

/// Minimal static line chart: axes, tick labels at the extremes, one
/// polyline per series and a legend.
pub fn line_chart(title: &str, x_label: &str, y_label: &str, series: &[Series]) -> String {
    let (w, h) = (720.0, 480.0);
    let (ml, mr, mt, mb) = (70.0, 20.0, 40.0, 50.0);
    let (pw, ph) = (w - ml - mr, h - mt - mb);

    let mut x_min = f64::INFINITY;
    let mut x_max = f64::NEG_INFINITY;
    let mut y_min = f64::INFINITY;
    let mut y_max = f64::NEG_INFINITY;
    for s in series {
        for &(x, y) in &s.points {
            if x.is_finite() && y.is_finite() {
                x_min = x_min.min(x);
                x_max = x_max.max(x);
                y_min = y_min.min(y);
                y_max = y_max.max(y);
            }
        }
    }
    if !x_min.is_finite() {
        x_min = 0.0;
        x_max = 1.0;
        y_min = 0.0;
        y_max = 1.0;
    }
    if x_max - x_min < 1e-300 {
        x_max = x_min + 1.0;
    }
    if y_max - y_min < 1e-300 {
        y_max = y_min + 1.0;
    }
    let fx = |x: f64| ml + (x - x_min) / (x_max - x_min) * pw;
    let fy = |y: f64| mt + ph - (y - y_min) / (y_max - y_min) * ph;

    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\">\n"
    ));
    svg.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
    svg.push_str(&format!(
        "<text x=\"{}\" y=\"24\" font-family=\"sans-serif\" font-size=\"16\" text-anchor=\"middle\">{}</text>\n",
        w / 2.0,
        xml_escape(title)
    ));
    // Axes.
    svg.push_str(&format!(
        "<line x1=\"{ml}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"black\"/>\n",
        mt + ph,
        ml + pw,
        mt + ph
    ));
    svg.push_str(&format!(
        "<line x1=\"{ml}\" y1=\"{mt}\" x2=\"{ml}\" y2=\"{}\" stroke=\"black\"/>\n",
        mt + ph
    ));
    // Extreme tick labels.
    svg.push_str(&format!(
        "<text x=\"{ml}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"middle\">{x_min:.4}</text>\n",
        mt + ph + 18.0
    ));
    svg.push_str(&format!(
        "<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"middle\">{x_max:.4}</text>\n",
        ml + pw,
        mt + ph + 18.0
    ));
    svg.push_str(&format!(
        "<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\">{y_min:.4}</text>\n",
        ml - 6.0,
        mt + ph
    ));
    svg.push_str(&format!(
        "<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\">{y_max:.4}</text>\n",
        ml - 6.0,
        mt + 10.0
    ));
    svg.push_str(&format!(
        "<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"13\" text-anchor=\"middle\">{}</text>\n",
        ml + pw / 2.0,
        h - 12.0,
        xml_escape(x_label)
    ));
    svg.push_str(&format!(
        "<text x=\"16\" y=\"{}\" font-family=\"sans-serif\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 16 {})\">{}</text>\n",
        mt + ph / 2.0,
        mt + ph / 2.0,
        xml_escape(y_label)
    ));

    for (i, s) in series.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let pts: Vec<String> = s
            .points
            .iter()
            .filter(|(x, y)| x.is_finite() && y.is_finite())
            .map(|&(x, y)| format!("{:.3},{:.3}", fx(x), fy(y)))
            .collect();
        if pts.len() >= 2 {
            svg.push_str(&format!(
                "<polyline fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\" points=\"{}\"/>\n",
                pts.join(" ")
            ));
        } else if pts.len() == 1 {
            let xy: Vec<&str> = pts[0].split(',').collect();
            svg.push_str(&format!(
                "<circle cx=\"{}\" cy=\"{}\" r=\"2.5\" fill=\"{color}\"/>\n",
                xy[0], xy[1]
            ));
        }
        // Legend entry.
        let ly = mt + 14.0 * i as f64;
        svg.push_str(&format!(
            "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"{color}\" stroke-width=\"2\"/>\n",
            ml + pw - 110.0,
            ly,
            ml + pw - 90.0,
            ly
        ));
        svg.push_str(&format!(
            "<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"11\">{}</text>\n",
            ml + pw - 84.0,
            ly + 4.0,
            xml_escape(&s.name)
        ));
    }
    svg.push_str("</svg>\n");
    svg
}

/// Flow chart: one polyline per curve over `t`.
pub fn flow_svg(report: &FlowReport) -> String {
    let series: Vec<Series> = report
        .curves
        .iter()
        .map(|c| Series {
            name: format!("curve {}", c.id),
            points: report
                .t_grid
                .iter()
                .zip(c.values.iter())
                .map(|(&t, &v)| (t, v))
                .collect(),
        })
        .collect();
    line_chart("eigenvalue flow", "t", "eigenvalue", &series)
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
