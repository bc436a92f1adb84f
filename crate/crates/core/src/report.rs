//! CSV tables, SVG line charts and a markdown summary for analysis results.
//!
//! Output is a pure function of the input: numbers are printed with six
//! significant digits and every chart carries the name of the table holding
//! its plotted values, plus the values themselves in `data-values`.

use std::fmt::Write as _;
use std::io;
use std::path::Path;

use crate::analysis::{symmetry_index, BackgroundScore, DegradationCurve};
use crate::dataset::Camera;
use crate::exposure::ExposureLabel;

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ReportBundle {
    pub tables: Vec<(String, String)>,
    pub charts: Vec<(String, String)>,
    pub summary: String,
}

impl ReportBundle {
    /// Writes every table, chart and `summary.md` into `dir`.
    pub fn write_to(&self, dir: &Path) -> io::Result<()> {
        std::fs::create_dir_all(dir)?;
        for (name, body) in self.tables.iter().chain(&self.charts) {
            std::fs::write(dir.join(name), body)?;
        }
        std::fs::write(dir.join("summary.md"), &self.summary)
    }

    pub fn table(&self, name: &str) -> Option<&str> {
        self.tables.iter().find(|(n, _)| n == name).map(|(_, t)| t.as_str())
    }

    pub fn chart(&self, name: &str) -> Option<&str> {
        self.charts.iter().find(|(n, _)| n == name).map(|(_, c)| c.as_str())
    }
}

/// Six significant digits, `%g` style: fixed notation for moderate
/// magnitudes, exponent notation otherwise, trailing zeros trimmed.
pub fn fmt_num(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    if !v.is_finite() {
        return v.to_string();
    }
    let sci = format!("{v:.5e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent notation");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..6).contains(&exp) {
        let decimals = (5 - exp).max(0) as usize;
        trim_zeros(format!("{v:.decimals$}"))
    } else {
        format!("{}e{exp}", trim_zeros(mantissa.to_string()))
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

fn csv_text(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for r in rows {
        w.write_record(r).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8")
}

fn xml_escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            c => out.push(c),
        }
    }
    out
}

const PALETTE: [&str; 9] =
    ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf", "#7f7f7f"];

struct Series {
    name: String,
    /// (x index, y) pairs; gaps allowed.
    values: Vec<(usize, f64)>,
}

struct Chart<'a> {
    title: &'a str,
    table: &'a str,
    x_label: &'a str,
    y_label: &'a str,
    categories: Vec<String>,
    y_range: (f64, f64),
    series: Vec<Series>,
}

const W: f64 = 720.0;
const H: f64 = 420.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 170.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 70.0;

fn coord(v: f64) -> String {
    format!("{v:.2}")
}

impl Chart<'_> {
    fn render(&self) -> String {
        let plot_w = W - LEFT - RIGHT;
        let plot_h = H - TOP - BOTTOM;
        let n = self.categories.len().max(1);
        let x_at = |i: usize| {
            if n == 1 {
                LEFT + plot_w / 2.0
            } else {
                LEFT + plot_w * i as f64 / (n - 1) as f64
            }
        };
        let (y0, y1) = self.y_range;
        let y_at = |v: f64| TOP + plot_h * (1.0 - (v - y0) / (y1 - y0));

        let mut s = String::new();
        writeln!(
            s,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}" data-table="{}">"#,
            xml_escape(self.table)
        )
        .unwrap();
        writeln!(s, r#"<title>{}</title>"#, xml_escape(self.title)).unwrap();
        writeln!(s, r#"<rect x="0" y="0" width="{W}" height="{H}" fill="white"/>"#).unwrap();
        writeln!(
            s,
            r#"<text x="{}" y="24" font-family="sans-serif" font-size="15" text-anchor="middle">{}</text>"#,
            coord(LEFT + plot_w / 2.0),
            xml_escape(self.title)
        )
        .unwrap();

        s.push_str("<g class=\"axes\" stroke=\"black\" stroke-width=\"1\">\n");
        writeln!(
            s,
            r#"<line x1="{l}" y1="{b}" x2="{r}" y2="{b}"/>"#,
            l = coord(LEFT),
            r = coord(LEFT + plot_w),
            b = coord(TOP + plot_h)
        )
        .unwrap();
        writeln!(
            s,
            r#"<line x1="{l}" y1="{t}" x2="{l}" y2="{b}"/>"#,
            l = coord(LEFT),
            t = coord(TOP),
            b = coord(TOP + plot_h)
        )
        .unwrap();
        s.push_str("</g>\n");

        s.push_str("<g class=\"ticks\" font-family=\"sans-serif\" font-size=\"11\">\n");
        for k in 0..=5 {
            let v = y0 + (y1 - y0) * k as f64 / 5.0;
            let y = coord(y_at(v));
            writeln!(
                s,
                r##"<line x1="{}" y1="{y}" x2="{}" y2="{y}" stroke="#dddddd"/>"##,
                coord(LEFT),
                coord(LEFT + plot_w)
            )
            .unwrap();
            writeln!(s, r#"<text x="{}" y="{y}" text-anchor="end" dy="4">{}</text>"#, coord(LEFT - 6.0), fmt_num(v))
                .unwrap();
        }
        for (i, c) in self.categories.iter().enumerate() {
            writeln!(
                s,
                r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#,
                coord(x_at(i)),
                coord(TOP + plot_h + 18.0),
                xml_escape(c)
            )
            .unwrap();
        }
        s.push_str("</g>\n");
        writeln!(
            s,
            r#"<text x="{}" y="{}" font-family="sans-serif" font-size="12" text-anchor="middle">{}</text>"#,
            coord(LEFT + plot_w / 2.0),
            coord(H - 20.0),
            xml_escape(self.x_label)
        )
        .unwrap();
        writeln!(
            s,
            r#"<text x="18" y="{y}" font-family="sans-serif" font-size="12" text-anchor="middle" transform="rotate(-90 18 {y})">{}</text>"#,
            xml_escape(self.y_label),
            y = coord(TOP + plot_h / 2.0)
        )
        .unwrap();

        for (k, series) in self.series.iter().enumerate() {
            let color = PALETTE[k % PALETTE.len()];
            let points: Vec<String> =
                series.values.iter().map(|&(i, v)| format!("{},{}", coord(x_at(i)), coord(y_at(v)))).collect();
            let values: Vec<String> =
                series.values.iter().map(|&(i, v)| format!("{}={}", self.categories[i], fmt_num(v))).collect();
            writeln!(
                s,
                r#"<polyline data-series="{}" data-values="{}" points="{}" fill="none" stroke="{color}" stroke-width="2"/>"#,
                xml_escape(&series.name),
                xml_escape(&values.join(" ")),
                points.join(" ")
            )
            .unwrap();
            for p in &points {
                let (x, y) = p.split_once(',').unwrap();
                writeln!(s, r#"<circle cx="{x}" cy="{y}" r="3" fill="{color}"/>"#).unwrap();
            }
            let ly = TOP + 16.0 * k as f64 + 6.0;
            let lx = LEFT + plot_w + 16.0;
            writeln!(
                s,
                r#"<line x1="{}" y1="{y}" x2="{}" y2="{y}" stroke="{color}" stroke-width="2"/>"#,
                coord(lx),
                coord(lx + 18.0),
                y = coord(ly)
            )
            .unwrap();
            writeln!(
                s,
                r#"<text x="{}" y="{}" font-family="sans-serif" font-size="11">{}</text>"#,
                coord(lx + 24.0),
                coord(ly + 4.0),
                xml_escape(&series.name)
            )
            .unwrap();
        }
        s.push_str("</svg>\n");
        s
    }
}

/// Range covering `values`, padded and snapped outward to 0.05 steps.
fn auto_range(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for v in values {
        lo = lo.min(v);
        hi = hi.max(v);
    }
    if !lo.is_finite() {
        return (0.0, 1.0);
    }
    let lo = (lo * 20.0).floor() / 20.0;
    let mut hi = (hi * 20.0).ceil() / 20.0;
    if hi <= lo {
        hi = lo + 0.05;
    }
    (lo, hi)
}

pub const BACKGROUND_TABLE: &str = "background_scores.csv";
pub const EXPOSURE_TABLE: &str = "exposure_curves.csv";
pub const EXPOSURE_CHART: &str = "exposure_curves.svg";

pub fn background_chart_name(camera: Camera) -> String {
    format!("background_{camera}.svg")
}

/// Per-condition rows followed by one aggregate row for every background,
/// in rank order; one chart per camera with a series per background.
pub fn emit_background_report(scores: &[BackgroundScore]) -> ReportBundle {
    let header = [
        "row_type",
        "background",
        "camera",
        "lamp",
        "intensity",
        "light_angle",
        "light_position",
        "exposure",
        "capture_id",
        "uqi",
        "mean_uqi",
        "std_uqi",
        "rank",
        "n_conditions",
    ];
    let opt = |o: Option<String>| o.unwrap_or_default();
    let mut rows = Vec::new();
    for s in scores {
        for c in &s.per_condition {
            let cfg = &c.config;
            rows.push(vec![
                "detail".into(),
                s.background.to_string(),
                cfg.camera.to_string(),
                cfg.lamp.to_string(),
                cfg.intensity.to_string(),
                opt(cfg.light_angle.map(|a| a.to_string())),
                opt(cfg.light_position.map(|p| p.to_string())),
                cfg.exposure.to_string(),
                cfg.id.clone(),
                fmt_num(c.uqi),
                String::new(),
                String::new(),
                s.rank.to_string(),
                String::new(),
            ]);
        }
        let mut agg = vec![String::new(); header.len()];
        agg[0] = "aggregate".into();
        agg[1] = s.background.to_string();
        agg[10] = fmt_num(s.mean_uqi);
        agg[11] = fmt_num(s.std_uqi);
        agg[12] = s.rank.to_string();
        agg[13] = s.per_condition.len().to_string();
        rows.push(agg);
    }
    let table = csv_text(&header, &rows);

    let mut cameras: Vec<Camera> =
        scores.iter().flat_map(|s| s.per_condition.iter().map(|c| c.config.camera)).collect();
    cameras.sort();
    cameras.dedup();
    let mut charts = Vec::new();
    for camera in cameras {
        let mut categories: Vec<String> = scores
            .iter()
            .flat_map(|s| s.per_condition.iter())
            .filter(|c| c.config.camera == camera)
            .map(|c| c.config.condition_label())
            .collect();
        categories.sort();
        categories.dedup();
        let mut ordered = scores.iter().collect::<Vec<_>>();
        ordered.sort_by_key(|s| s.background);
        let series: Vec<Series> = ordered
            .iter()
            .filter_map(|s| {
                let values: Vec<(usize, f64)> = s
                    .per_condition
                    .iter()
                    .filter(|c| c.config.camera == camera)
                    .map(|c| {
                        let label = c.config.condition_label();
                        (categories.binary_search(&label).expect("category present"), c.uqi)
                    })
                    .collect();
                (!values.is_empty()).then(|| Series { name: s.background.to_string(), values })
            })
            .collect();
        let title = format!("Background analysis, {camera} camera");
        let chart = Chart {
            title: &title,
            table: BACKGROUND_TABLE,
            x_label: "condition (lamp/intensity/angle)",
            y_label: "stabilized UQI vs black",
            y_range: auto_range(series.iter().flat_map(|s| s.values.iter().map(|v| v.1))),
            categories,
            series,
        };
        charts.push((background_chart_name(camera), chart.render()));
    }

    let mut summary = String::from("# Background ranking\n\n");
    summary.push_str("Stabilized UQI against a black reference; higher means closer to featureless black.\n\n");
    summary.push_str("| rank | background | description | mean UQI | std UQI | conditions |\n");
    summary.push_str("|---:|---|---|---:|---:|---:|\n");
    for s in scores {
        writeln!(
            summary,
            "| {} | {} | {} | {} | {} | {} |",
            s.rank,
            s.background,
            s.background.description(),
            fmt_num(s.mean_uqi),
            fmt_num(s.std_uqi),
            s.per_condition.len()
        )
        .unwrap();
    }
    ReportBundle { tables: vec![(BACKGROUND_TABLE.into(), table)], charts, summary }
}

/// One table and one chart with a series per (camera, lamp) over the nine
/// exposure labels. The y axis is fixed to [0, 1].
pub fn emit_exposure_report(curves: &[DegradationCurve]) -> ReportBundle {
    let header = ["camera", "lamp", "label", "ev", "ms_ssim"];
    let mut rows = Vec::new();
    for c in curves {
        for p in &c.points {
            rows.push(vec![
                c.camera.to_string(),
                c.lamp.to_string(),
                p.label.to_string(),
                fmt_num(p.ev),
                fmt_num(p.ms_ssim),
            ]);
        }
    }
    let table = csv_text(&header, &rows);

    let categories: Vec<String> = ExposureLabel::ALL.iter().map(|l| l.to_string()).collect();
    let series = curves
        .iter()
        .map(|c| Series {
            name: c.series_name(),
            values: c
                .points
                .iter()
                .map(|p| (ExposureLabel::ALL.iter().position(|l| *l == p.label).unwrap(), p.ms_ssim))
                .collect(),
        })
        .collect();
    let chart = Chart {
        title: "Image degradation over the exposure sweep",
        table: EXPOSURE_TABLE,
        x_label: "exposure setting (EV decreasing)",
        y_label: "MS-SSIM vs EX0",
        categories,
        y_range: (0.0, 1.0),
        series,
    };

    let mut summary = String::from("# Exposure degradation\n\n");
    summary.push_str("MS-SSIM of each exposure against the EX0 capture of the same camera and lamp.\n\n");
    summary.push_str("| series | min MS-SSIM | at | symmetry index |\n|---|---:|---|---:|\n");
    for c in curves {
        let worst = c.points.iter().min_by(|a, b| a.ms_ssim.total_cmp(&b.ms_ssim));
        let sym = symmetry_index(c).map(fmt_num).unwrap_or_else(|_| "n/a".into());
        let (min, at) = worst.map(|p| (fmt_num(p.ms_ssim), p.label.to_string())).unwrap_or_default();
        writeln!(summary, "| {} | {} | {} | {} |", c.series_name(), min, at, sym).unwrap();
    }
    summary.push_str("\nThe symmetry index is the mean |s(EU_k) - s(EO_k)| over k = 1..4; 0 is perfectly symmetric.\n");

    ReportBundle {
        tables: vec![(EXPOSURE_TABLE.into(), table)],
        charts: vec![(EXPOSURE_CHART.into(), chart.render())],
        summary,
    }
}
