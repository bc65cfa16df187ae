//! Minimal SVG 1.1 plots: line plots of summary CSVs and histograms of
//! binned ratio CSVs.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use entspec_core::stats::ReferenceDistribution;

use crate::error::{HarnessError, Result};
use crate::records::{read_summary_csv, SummaryRow};

const W: f64 = 640.0;
const H: f64 = 420.0;
const MARGIN: (f64, f64, f64, f64) = (60.0, 20.0, 30.0, 50.0); // left, right, top, bottom
const COLORS: [&str; 8] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf"];

struct Frame {
    x: (f64, f64),
    y: (f64, f64),
    svg: String,
}

impl Frame {
    fn new(x: (f64, f64), y: (f64, f64), xlabel: &str, ylabel: &str) -> Self {
        let mut svg = String::new();
        writeln!(svg, r#"<?xml version="1.0" encoding="UTF-8"?>"#).unwrap();
        writeln!(
            svg,
            r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{W}" height="{H}" viewBox="0 0 {W} {H}" font-family="sans-serif" font-size="12">"#
        )
        .unwrap();
        writeln!(svg, r#"<rect width="{W}" height="{H}" fill="white"/>"#).unwrap();
        let mut f = Self { x, y, svg };
        f.axes(xlabel, ylabel);
        f
    }

    fn px(&self, x: f64) -> f64 {
        let (l, r, _, _) = MARGIN;
        l + (x - self.x.0) / (self.x.1 - self.x.0) * (W - l - r)
    }

    fn py(&self, y: f64) -> f64 {
        let (_, _, t, b) = MARGIN;
        H - b - (y - self.y.0) / (self.y.1 - self.y.0) * (H - t - b)
    }

    fn axes(&mut self, xlabel: &str, ylabel: &str) {
        let (x0, x1, y0, y1) = (self.px(self.x.0), self.px(self.x.1), self.py(self.y.0), self.py(self.y.1));
        writeln!(self.svg, r#"<path d="M{x0:.1},{y1:.1} V{y0:.1} H{x1:.1}" stroke="black" fill="none"/>"#).unwrap();
        for i in 0..=5 {
            let fx = self.x.0 + (self.x.1 - self.x.0) * i as f64 / 5.0;
            let fy = self.y.0 + (self.y.1 - self.y.0) * i as f64 / 5.0;
            let (px, py) = (self.px(fx), self.py(fy));
            writeln!(self.svg, r#"<line x1="{px:.1}" y1="{y0:.1}" x2="{px:.1}" y2="{:.1}" stroke="black"/>"#, y0 + 4.0).unwrap();
            writeln!(self.svg, r#"<text x="{px:.1}" y="{:.1}" text-anchor="middle">{}</text>"#, y0 + 18.0, tick(fx)).unwrap();
            writeln!(self.svg, r#"<line x1="{:.1}" y1="{py:.1}" x2="{x0:.1}" y2="{py:.1}" stroke="black"/>"#, x0 - 4.0).unwrap();
            writeln!(self.svg, r#"<text x="{:.1}" y="{:.1}" text-anchor="end">{}</text>"#, x0 - 7.0, py + 4.0, tick(fy)).unwrap();
        }
        writeln!(self.svg, r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">{}</text>"#, (x0 + x1) / 2.0, H - 12.0, escape(xlabel))
            .unwrap();
        writeln!(
            self.svg,
            r#"<text x="16" y="{:.1}" text-anchor="middle" transform="rotate(-90 16 {:.1})">{}</text>"#,
            (y0 + y1) / 2.0,
            (y0 + y1) / 2.0,
            escape(ylabel)
        )
        .unwrap();
    }

    fn polyline(&mut self, pts: &[(f64, f64)], color: &str, dashed: bool) {
        let d: Vec<String> = pts.iter().map(|&(x, y)| format!("{:.1},{:.1}", self.px(x), self.py(y))).collect();
        let dash = if dashed { r#" stroke-dasharray="5,4""# } else { "" };
        writeln!(self.svg, r#"<polyline points="{}" stroke="{color}" fill="none" stroke-width="1.5"{dash}/>"#, d.join(" "))
            .unwrap();
    }

    fn legend(&mut self, entries: &[(String, &str)]) {
        let x = self.px(self.x.1) - 200.0;
        for (i, (label, color)) in entries.iter().enumerate() {
            let y = MARGIN.2 + 14.0 + 16.0 * i as f64;
            writeln!(self.svg, r#"<line x1="{x:.1}" y1="{:.1}" x2="{:.1}" y2="{:.1}" stroke="{color}" stroke-width="2"/>"#, y - 4.0, x + 18.0, y - 4.0)
                .unwrap();
            writeln!(self.svg, r#"<text x="{:.1}" y="{y:.1}">{}</text>"#, x + 24.0, escape(label)).unwrap();
        }
    }

    fn finish(mut self) -> String {
        self.svg.push_str("</svg>\n");
        self.svg
    }
}

fn tick(v: f64) -> String {
    let s = format!("{v:.3}");
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn padded(lo: f64, hi: f64) -> (f64, f64) {
    let pad = if hi > lo { 0.05 * (hi - lo) } else { 0.5 };
    (lo - pad, hi + pad)
}

/// ⟨r̃⟩_∞ against `N`, one series per group with ±σ error bars, plus the
/// Poisson and Wigner-Dyson reference levels.
pub fn summary_svg(rows: &[SummaryRow]) -> Result<String> {
    let mut series: BTreeMap<String, Vec<&SummaryRow>> = BTreeMap::new();
    for r in rows.iter().filter(|r| r.mean_r_tilde_inf.is_finite()) {
        let label = format!("{} s={} {} {}", r.family, r.num_swaps, r.input, r.conjugation);
        series.entry(label).or_default().push(r);
    }
    if series.is_empty() {
        return Err(HarnessError::Config("summary has no finite rows to plot".into()));
    }
    let ns = rows.iter().map(|r| r.n as f64);
    let (nmin, nmax) = ns.clone().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), n| (a.min(n), b.max(n)));
    let mut f = Frame::new(padded(nmin, nmax), (0.3, 0.7), "N", "mean r-tilde (tail)");
    let refs = [ReferenceDistribution::Poisson, ReferenceDistribution::WignerDysonGue];
    for (d, color) in refs.iter().zip(["#777777", "#000000"]) {
        let v = d.expected_r_tilde();
        f.polyline(&[(f.x.0, v), (f.x.1, v)], color, true);
    }
    let mut legend = Vec::new();
    for (i, (label, mut pts)) in series.into_iter().enumerate() {
        let color = COLORS[i % COLORS.len()];
        pts.sort_by_key(|r| r.n);
        f.polyline(&pts.iter().map(|r| (r.n as f64, r.mean_r_tilde_inf)).collect::<Vec<_>>(), color, false);
        for r in &pts {
            let (x, m, s) = (f.px(r.n as f64), r.mean_r_tilde_inf, r.std_r_tilde_inf.max(0.0));
            let (lo, hi) = (f.py(m - s), f.py(m + s));
            writeln!(f.svg, r#"<line x1="{x:.1}" y1="{lo:.1}" x2="{x:.1}" y2="{hi:.1}" stroke="{color}"/>"#).unwrap();
            writeln!(f.svg, r#"<circle cx="{x:.1}" cy="{:.1}" r="3" fill="{color}"/>"#, f.py(m)).unwrap();
        }
        legend.push((label, color));
    }
    f.legend(&legend);
    Ok(f.finish())
}

/// Bars of a `bin_left,bin_right,density` CSV over the analytic reference
/// densities. The overflow row is skipped.
pub fn histogram_svg(csv_text: &str) -> Result<String> {
    let mut bins = Vec::new();
    let mut reader = csv::Reader::from_reader(csv_text.as_bytes());
    for row in reader.records() {
        let row = row?;
        let parse = |i: usize| row.get(i).and_then(|s| s.parse::<f64>().ok());
        match (parse(0), parse(1), parse(2)) {
            (Some(l), Some(r), Some(d)) if r.is_finite() => bins.push((l, r, d)),
            (Some(_), Some(_), Some(_)) => {}
            _ => return Err(HarnessError::Config(format!("malformed histogram row {:?}", row))),
        }
    }
    if bins.is_empty() {
        return Err(HarnessError::Config("histogram has no finite bins".into()));
    }
    let lo = bins[0].0;
    let hi = bins[bins.len() - 1].1;
    let ymax = bins.iter().map(|b| b.2).fold(1.0f64, f64::max) * 1.1;
    let mut f = Frame::new((lo, hi), (0.0, ymax), "r", "P(r)");
    for &(l, r, d) in &bins {
        let (x, y0, y1) = (f.px(l), f.py(0.0), f.py(d));
        writeln!(
            f.svg,
            r##"<rect x="{x:.1}" y="{y1:.1}" width="{:.1}" height="{:.1}" fill="#9ecae1" stroke="#3182bd"/>"##,
            f.px(r) - x,
            y0 - y1
        )
        .unwrap();
    }
    let mut legend = vec![("empirical".to_string(), "#3182bd")];
    for (d, color, name) in [
        (ReferenceDistribution::Poisson, "#777777", "Poisson"),
        (ReferenceDistribution::WignerDysonGue, "#d62728", "Wigner-Dyson (GUE)"),
    ] {
        let pts: Vec<(f64, f64)> =
            (0..=200).map(|i| lo + (hi - lo) * i as f64 / 200.0).map(|r| (r, d.pdf(r).unwrap_or(0.0).min(ymax))).collect();
        f.polyline(&pts, color, false);
        legend.push((name.to_string(), color));
    }
    f.legend(&legend);
    Ok(f.finish())
}

/// Picks the plot kind from the CSV header.
pub fn plot_csv(csv_text: &str) -> Result<String> {
    let header = csv_text.lines().next().unwrap_or("");
    if header.starts_with("bin_left") {
        histogram_svg(csv_text)
    } else if header.contains("mean_r_tilde_inf") {
        summary_svg(&read_summary_csv(csv_text.as_bytes())?)
    } else {
        Err(HarnessError::Config(format!("unrecognized CSV header: {header}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use entspec_core::stats::{BinnedDistribution, Binning};

    #[test]
    fn histogram_plot_is_well_formed() {
        let h = BinnedDistribution::from_samples(&[0.1, 0.5, 0.5, 1.2, 4.0], Binning::default()).unwrap();
        let svg = plot_csv(&h.to_csv()).unwrap();
        assert!(svg.starts_with("<?xml"));
        assert!(svg.trim_end().ends_with("</svg>"));
        assert_eq!(svg.matches("<rect").count(), 1 + 50);
    }

    #[test]
    fn summary_plot_has_one_series_per_group() {
        let csv = "n,family,num_swaps,input,conjugation,mean_r_tilde_inf,std_r_tilde_inf,mean_entropy,page_deviation,n_samples\n\
                   10,matchgate,0,product,None,0.44,0.02,3.0,0.4,20\n\
                   12,matchgate,0,product,None,0.42,0.02,3.5,0.6,20\n\
                   10,matchgate,1,product,None,0.55,0.02,3.2,0.2,20\n";
        let svg = plot_csv(csv).unwrap();
        assert_eq!(svg.matches("<circle").count(), 3);
        assert!(svg.contains("s=1"));
    }

    #[test]
    fn unknown_csv_is_rejected() {
        assert!(plot_csv("a,b\n1,2\n").is_err());
    }
}
