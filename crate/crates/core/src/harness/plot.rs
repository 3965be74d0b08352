use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use log::warn;

use super::records::BenchmarkRecord;
use super::run::{kappa_tag, trace_file_name};
use crate::linsup::{fmt_f64, read_trace_csv};
use crate::Result;

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 440.0;
const LEFT: f64 = 90.0;
const RIGHT: f64 = 170.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 60.0;
/// Trace series are thinned to at most this many points before drawing.
pub const MAX_SERIES_POINTS: usize = 2000;
const PALETTE: [&str; 8] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf", "#8c564b", "#e377c2"];

#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub label: String,
    pub points: Vec<(f64, f64)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Panel {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    /// Base-10 logarithmic x axis with ticks at integer powers.
    pub log_x: bool,
    pub series: Vec<Series>,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct PlotReport {
    /// Every file written, SVG and data alike.
    pub files: Vec<PathBuf>,
    pub warnings: Vec<String>,
}

impl PlotReport {
    fn warn(&mut self, msg: String) {
        warn!("{msg}");
        self.warnings.push(msg);
    }
}

struct Axis {
    lo: f64,
    hi: f64,
    /// (position in axis units, label markup, data attribute)
    ticks: Vec<(f64, String, String)>,
}

fn nice_step(span: f64) -> f64 {
    let raw = span / 5.0;
    let mag = 10f64.powf(raw.log10().floor());
    let f = raw / mag;
    let nice = if f <= 1.0 {
        1.0
    } else if f <= 2.0 {
        2.0
    } else if f <= 5.0 {
        5.0
    } else {
        10.0
    };
    nice * mag
}

fn format_tick(v: f64, step: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    let a = v.abs();
    if !(1e-3..1e5).contains(&a) {
        format!("{v:.2e}")
    } else {
        let decimals = (-step.log10().floor()).max(0.0) as usize;
        format!("{v:.decimals$}")
    }
}

fn linear_axis(min: f64, max: f64) -> Axis {
    let (mut lo, mut hi) = (min, max);
    if hi - lo <= f64::EPSILON * lo.abs().max(hi.abs()).max(1.0) {
        let pad = if lo == 0.0 { 1.0 } else { 0.5 * lo.abs() };
        lo -= pad;
        hi += pad;
    }
    let step = nice_step(hi - lo);
    lo = (lo / step).floor() * step;
    hi = (hi / step).ceil() * step;
    let count = ((hi - lo) / step).round() as i64;
    let ticks = (0..=count)
        .map(|i| {
            let v = lo + i as f64 * step;
            let v = if v.abs() < step * 1e-9 { 0.0 } else { v };
            (v, format_tick(v, step), format!("data-value=\"{}\"", fmt_f64(v)))
        })
        .collect();
    Axis { lo, hi, ticks }
}

/// Axis in log10 units; ticks sit on every integer exponent in range.
fn log_axis(min_exp: f64, max_exp: f64) -> Axis {
    let mut lo = min_exp.floor();
    let mut hi = max_exp.ceil();
    let ticks = (lo as i64..=hi as i64)
        .map(|k| {
            (
                k as f64,
                format!("10<tspan dy=\"-7\" font-size=\"10\">{k}</tspan>"),
                format!("data-exponent=\"{k}\" data-value=\"{}\"", fmt_f64(10f64.powi(k as i32))),
            )
        })
        .collect();
    if hi == lo {
        lo -= 0.5;
        hi += 0.5;
    }
    Axis { lo, hi, ticks }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

fn finite_points(panel: &Panel, s: &Series) -> Vec<(f64, f64)> {
    s.points
        .iter()
        .filter(|(x, y)| x.is_finite() && y.is_finite() && (!panel.log_x || *x > 0.0))
        .map(|&(x, y)| (if panel.log_x { x.log10() } else { x }, y))
        .collect()
}

/// Self-contained SVG document for one panel.
pub fn render_svg(panel: &Panel) -> String {
    let series: Vec<(&Series, Vec<(f64, f64)>)> =
        panel.series.iter().map(|s| (s, finite_points(panel, s))).filter(|(_, p)| !p.is_empty()).collect();
    let all = series.iter().flat_map(|(_, p)| p.iter().copied());
    let (mut xmin, mut xmax, mut ymin, mut ymax) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for (x, y) in all {
        xmin = xmin.min(x);
        xmax = xmax.max(x);
        ymin = ymin.min(y);
        ymax = ymax.max(y);
    }
    if !xmin.is_finite() {
        (xmin, xmax, ymin, ymax) = (0.0, 1.0, 0.0, 1.0);
    }
    let xa = if panel.log_x { log_axis(xmin, xmax) } else { linear_axis(xmin, xmax) };
    let ya = linear_axis(ymin, ymax);
    let pw = WIDTH - LEFT - RIGHT;
    let ph = HEIGHT - TOP - BOTTOM;
    let sx = |x: f64| LEFT + (x - xa.lo) / (xa.hi - xa.lo) * pw;
    let sy = |y: f64| TOP + ph - (y - ya.lo) / (ya.hi - ya.lo) * ph;

    let mut s = String::new();
    let _ = writeln!(
        s,
        "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" viewBox=\"0 0 {WIDTH} {HEIGHT}\" font-family=\"sans-serif\" font-size=\"12\">"
    );
    let _ = writeln!(s, "<title>{}</title>", escape(&panel.title));
    let _ = writeln!(s, "<rect width=\"{WIDTH}\" height=\"{HEIGHT}\" fill=\"white\"/>");
    let _ = writeln!(
        s,
        "<text x=\"{:.1}\" y=\"24\" text-anchor=\"middle\" font-size=\"14\">{}</text>",
        LEFT + pw / 2.0,
        escape(&panel.title)
    );
    let _ = writeln!(
        s,
        "<rect x=\"{LEFT}\" y=\"{TOP}\" width=\"{pw}\" height=\"{ph}\" fill=\"none\" stroke=\"black\"/>"
    );
    for (v, label, attr) in &xa.ticks {
        let x = sx(*v);
        let _ = writeln!(
            s,
            "<g class=\"xtick\" {attr}><line x1=\"{x:.2}\" y1=\"{:.2}\" x2=\"{x:.2}\" y2=\"{:.2}\" stroke=\"black\"/><text x=\"{x:.2}\" y=\"{:.2}\" text-anchor=\"middle\">{label}</text></g>",
            TOP + ph,
            TOP + ph + 5.0,
            TOP + ph + 20.0
        );
    }
    for (v, label, attr) in &ya.ticks {
        let y = sy(*v);
        let _ = writeln!(
            s,
            "<g class=\"ytick\" {attr}><line x1=\"{:.2}\" y1=\"{y:.2}\" x2=\"{LEFT}\" y2=\"{y:.2}\" stroke=\"black\"/><line x1=\"{LEFT}\" y1=\"{y:.2}\" x2=\"{:.2}\" y2=\"{y:.2}\" stroke=\"#dddddd\"/><text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"end\">{label}</text></g>",
            LEFT - 5.0,
            LEFT + pw,
            LEFT - 8.0,
            y + 4.0
        );
    }
    let _ = writeln!(
        s,
        "<text x=\"{:.1}\" y=\"{:.1}\" text-anchor=\"middle\">{}</text>",
        LEFT + pw / 2.0,
        HEIGHT - 15.0,
        escape(&panel.x_label)
    );
    let _ = writeln!(
        s,
        "<text transform=\"translate(20 {:.1}) rotate(-90)\" text-anchor=\"middle\">{}</text>",
        TOP + ph / 2.0,
        escape(&panel.y_label)
    );
    for (i, (ser, pts)) in series.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let coords: Vec<String> = pts.iter().map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y))).collect();
        let _ = writeln!(
            s,
            "<polyline class=\"series\" data-label=\"{}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\" points=\"{}\"/>",
            escape(&ser.label),
            coords.join(" ")
        );
        if pts.len() <= 50 {
            for &(x, y) in pts {
                let _ = writeln!(s, "<circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"2.5\" fill=\"{color}\"/>", sx(x), sy(y));
            }
        }
        let ly = TOP + 10.0 + 18.0 * i as f64;
        let lx = LEFT + pw + 12.0;
        let _ = writeln!(
            s,
            "<line x1=\"{lx:.1}\" y1=\"{ly:.1}\" x2=\"{:.1}\" y2=\"{ly:.1}\" stroke=\"{color}\" stroke-width=\"2\"/><text x=\"{:.1}\" y=\"{:.1}\">{}</text>",
            lx + 20.0,
            lx + 26.0,
            ly + 4.0,
            escape(&ser.label)
        );
    }
    s.push_str("</svg>\n");
    s
}

/// Whitespace-separated columns, one block per series.
pub fn render_data(panel: &Panel) -> String {
    let mut s = format!("# {}\n# {}\t{}\n", panel.title, panel.x_label, panel.y_label);
    for ser in &panel.series {
        let _ = writeln!(s, "\n# series {}", ser.label);
        for &(x, y) in &ser.points {
            let _ = writeln!(s, "{}\t{}", fmt_f64(x), fmt_f64(y));
        }
    }
    s
}

fn write_panel(panel: &Panel, out_dir: &Path, stem: &str, report: &mut PlotReport) -> Result<()> {
    if panel.series.iter().all(|s| finite_points(panel, s).is_empty()) {
        report.warn(format!("{stem}: no data, plot skipped"));
        return Ok(());
    }
    let svg = out_dir.join(format!("{stem}.svg"));
    let dat = out_dir.join(format!("{stem}.dat"));
    fs::write(&svg, render_svg(panel))?;
    fs::write(&dat, render_data(panel))?;
    report.files.push(svg);
    report.files.push(dat);
    Ok(())
}

fn thin<S: Clone>(v: Vec<S>) -> Vec<S> {
    if v.len() <= MAX_SERIES_POINTS {
        return v;
    }
    let stride = v.len().div_ceil(MAX_SERIES_POINTS - 1);
    let mut out: Vec<S> = v.iter().step_by(stride).cloned().collect();
    if !(v.len() - 1).is_multiple_of(stride) {
        out.push(v[v.len() - 1].clone());
    }
    out
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let k = v.len();
    if k % 2 == 1 {
        v[k / 2]
    } else {
        0.5 * (v[k / 2 - 1] + v[k / 2])
    }
}

/// Writes, for every dimension pair, violation-vs-time and objective-vs-time
/// panels per condition number and runtime-vs-kappa and objective-vs-kappa
/// panels over all condition numbers. Missing or empty traces are reported
/// as warnings and leave the affected panel out.
pub fn emit_plots(
    records: &[BenchmarkRecord],
    traces_dir: impl AsRef<Path>,
    out_dir: impl AsRef<Path>,
) -> Result<PlotReport> {
    let traces_dir = traces_dir.as_ref();
    let out_dir = out_dir.as_ref();
    let mut report = PlotReport::default();
    if records.is_empty() {
        report.warn("no benchmark records, nothing to plot".into());
        return Ok(report);
    }
    fs::create_dir_all(out_dir)?;

    let mut by_dim: BTreeMap<(usize, usize), Vec<&BenchmarkRecord>> = BTreeMap::new();
    for r in records {
        by_dim.entry((r.m, r.n)).or_default().push(r);
    }
    for ((m, n), recs) in by_dim {
        let multi_seed = recs.iter().any(|r| r.seed != recs[0].seed);
        let mut kappas: Vec<f64> = recs.iter().map(|r| r.kappa).collect();
        kappas.sort_by(f64::total_cmp);
        kappas.dedup();

        for &kappa in &kappas {
            let mut violation = Vec::new();
            let mut objective = Vec::new();
            for r in recs.iter().filter(|r| r.kappa == kappa) {
                let path = traces_dir.join(trace_file_name(m, n, kappa, r.seed, &r.algorithm));
                let samples = match read_trace_csv(&path) {
                    Ok(s) if !s.is_empty() => s,
                    Ok(_) => {
                        report.warn(format!("{}: empty trace", path.display()));
                        continue;
                    }
                    Err(e) => {
                        report.warn(format!("{}: {e}", path.display()));
                        continue;
                    }
                };
                let samples = thin(samples);
                let label =
                    if multi_seed { format!("{} seed {}", r.algorithm, r.seed) } else { r.algorithm.clone() };
                violation.push(Series {
                    label: label.clone(),
                    points: samples.iter().map(|s| (s.elapsed, s.max_violation)).collect(),
                });
                objective.push(Series { label, points: samples.iter().map(|s| (s.elapsed, s.objective)).collect() });
            }
            let stem = format!("{m}x{n}_kappa{}", kappa_tag(kappa));
            let title = format!("{m}x{n}, kappa = {kappa:e}");
            write_panel(
                &Panel {
                    title: title.clone(),
                    x_label: "time [s]".into(),
                    y_label: "maximum violation".into(),
                    log_x: false,
                    series: violation,
                },
                out_dir,
                &format!("{stem}_violation_vs_time"),
                &mut report,
            )?;
            write_panel(
                &Panel {
                    title,
                    x_label: "time [s]".into(),
                    y_label: "objective".into(),
                    log_x: false,
                    series: objective,
                },
                out_dir,
                &format!("{stem}_objective_vs_time"),
                &mut report,
            )?;
        }

        let mut algorithms: Vec<&str> = recs.iter().map(|r| r.algorithm.as_str()).collect();
        algorithms.sort();
        algorithms.dedup();
        let summary = |metric: fn(&BenchmarkRecord) -> f64| -> Vec<Series> {
            algorithms
                .iter()
                .map(|&alg| Series {
                    label: alg.to_string(),
                    points: kappas
                        .iter()
                        .filter_map(|&k| {
                            let vals: Vec<f64> = recs
                                .iter()
                                .filter(|r| r.algorithm == alg && r.kappa == k && r.objective_final.is_finite())
                                .map(|r| metric(r))
                                .collect();
                            (!vals.is_empty()).then(|| (k, median(vals)))
                        })
                        .collect(),
                })
                .collect()
        };
        let suffix = if multi_seed { " (median over seeds)" } else { "" };
        write_panel(
            &Panel {
                title: format!("{m}x{n}: runtime{suffix}"),
                x_label: "condition number".into(),
                y_label: "runtime [s]".into(),
                log_x: true,
                series: summary(|r| r.runtime_seconds),
            },
            out_dir,
            &format!("{m}x{n}_runtime_vs_kappa"),
            &mut report,
        )?;
        write_panel(
            &Panel {
                title: format!("{m}x{n}: final objective{suffix}"),
                x_label: "condition number".into(),
                y_label: "objective at termination".into(),
                log_x: true,
                series: summary(|r| r.objective_final),
            },
            out_dir,
            &format!("{m}x{n}_objective_vs_kappa"),
            &mut report,
        )?;
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn panel(log_x: bool, pts: Vec<(f64, f64)>) -> Panel {
        Panel {
            title: "t <&>".into(),
            x_label: "x".into(),
            y_label: "y".into(),
            log_x,
            series: vec![Series { label: "linsup".into(), points: pts }],
        }
    }

    #[test]
    fn log_ticks_on_decades() {
        let svg = render_svg(&panel(true, vec![(1.0, 3.0), (10.0, 2.0), (100.0, 1.0)]));
        let exps: Vec<&str> = svg
            .match_indices("data-exponent=\"")
            .map(|(i, _)| {
                let rest = &svg[i + 15..];
                &rest[..rest.find('"').unwrap()]
            })
            .collect();
        assert_eq!(exps, ["0", "1", "2"]);
        assert_eq!(svg.matches("<polyline").count(), 1);
    }

    #[test]
    fn escapes_and_closes() {
        let svg = render_svg(&panel(false, vec![(0.0, 1.0), (1.0, 0.5)]));
        assert!(svg.contains("t &lt;&amp;&gt;"));
        assert!(svg.trim_end().ends_with("</svg>"));
    }

    #[test]
    fn degenerate_ranges() {
        let svg = render_svg(&panel(false, vec![(2.0, 5.0)]));
        assert!(!svg.contains("NaN") && !svg.contains("inf"));
        let svg = render_svg(&panel(true, vec![(1e3, 0.0)]));
        assert!(svg.contains("data-exponent=\"3\""));
    }

    #[test]
    fn linear_ticks_cover_range() {
        let a = linear_axis(-0.3, 7.2);
        assert!(a.lo <= -0.3 && a.hi >= 7.2);
        assert!(a.ticks.len() >= 3 && a.ticks.len() <= 12);
    }

    #[test]
    fn thinning_keeps_endpoints() {
        let v: Vec<usize> = (0..10_001).collect();
        let t = thin(v);
        assert!(t.len() <= MAX_SERIES_POINTS);
        assert_eq!((t[0], *t.last().unwrap()), (0, 10_000));
        let short: Vec<usize> = (0..5).collect();
        assert_eq!(thin(short.clone()), short);
    }

    #[test]
    fn empty_records_write_nothing() {
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().join("plots");
        let rep = emit_plots(&[], dir.path(), &out).unwrap();
        assert!(rep.files.is_empty() && !rep.warnings.is_empty());
        assert!(!out.exists());
    }
}
