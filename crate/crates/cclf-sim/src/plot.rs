//! SVG plot emission: agent trajectories with goal stars, and the phi2
//! time series with the weighted sum.

use std::fs;
use std::path::Path;

use cclf_core::sim::TrajectoryLog;

use crate::CliError;

/// Matplotlib tab10, the usual multi-agent palette (agent 0 blue,
/// agent 1 orange, ...).
pub const PALETTE: [&str; 10] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
    "#bcbd22", "#17becf",
];

pub fn color(i: usize) -> &'static str {
    PALETTE[i % PALETTE.len()]
}

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 640.0;
const MARGIN: f64 = 48.0;

struct Frame {
    min_x: f64,
    max_x: f64,
    min_y: f64,
    max_y: f64,
    width: f64,
    height: f64,
}

impl Frame {
    fn new(min_x: f64, max_x: f64, min_y: f64, max_y: f64, width: f64, height: f64) -> Self {
        // Avoid a degenerate scale for constant data.
        let pad = |lo: f64, hi: f64| {
            let span = (hi - lo).abs();
            if span < 1e-9 {
                (lo - 1.0, hi + 1.0)
            } else {
                (lo - 0.05 * span, hi + 0.05 * span)
            }
        };
        let (min_x, max_x) = pad(min_x, max_x);
        let (min_y, max_y) = pad(min_y, max_y);
        Frame { min_x, max_x, min_y, max_y, width, height }
    }

    fn x(&self, v: f64) -> f64 {
        MARGIN + (v - self.min_x) / (self.max_x - self.min_x) * (self.width - 2.0 * MARGIN)
    }

    /// SVG y grows downward.
    fn y(&self, v: f64, y_off: f64) -> f64 {
        y_off + self.height - MARGIN
            - (v - self.min_y) / (self.max_y - self.min_y) * (self.height - 2.0 * MARGIN)
    }
}

fn polyline(points: &[(f64, f64)], stroke: &str, width: f64) -> String {
    let mut d = String::from("M");
    for (i, (x, y)) in points.iter().enumerate() {
        if i > 0 {
            d.push('L');
        }
        d.push_str(&format!("{x:.2} {y:.2}"));
    }
    format!("<path d=\"{d}\" fill=\"none\" stroke=\"{stroke}\" stroke-width=\"{width}\"/>\n")
}

fn star(cx: f64, cy: f64, r: f64, fill: &str) -> String {
    let mut points = String::new();
    for k in 0..10 {
        let radius = if k % 2 == 0 { r } else { 0.42 * r };
        let angle = core::f64::consts::PI * (k as f64 / 5.0) - core::f64::consts::FRAC_PI_2;
        points.push_str(&format!("{:.2},{:.2} ", cx + radius * angle.cos(), cy + radius * angle.sin()));
    }
    format!(
        "<polygon points=\"{}\" fill=\"{fill}\" stroke=\"#333\" stroke-width=\"0.7\"/>\n",
        points.trim_end()
    )
}

/// Writes `trajectory.svg` and `phi2.svg` into `out_dir`.
pub fn render_plots(log: &TrajectoryLog, out_dir: &Path) -> Result<(), CliError> {
    if log.records.is_empty() {
        return Err(CliError::Runtime("cannot plot an empty log".to_string()));
    }
    fs::create_dir_all(out_dir)
        .map_err(|e| CliError::Runtime(format!("cannot create {}: {e}", out_dir.display())))?;
    let traj = trajectory_svg(log);
    fs::write(out_dir.join("trajectory.svg"), traj)
        .map_err(|e| CliError::Runtime(format!("trajectory.svg: {e}")))?;
    let phi = phi2_svg(log);
    fs::write(out_dir.join("phi2.svg"), phi)
        .map_err(|e| CliError::Runtime(format!("phi2.svg: {e}")))?;
    Ok(())
}

/// Per-agent paths with a dot at the start and a star at the goal.
pub fn trajectory_svg(log: &TrajectoryLog) -> String {
    let n = log.config.agents.len();
    let mut min_x = f64::INFINITY;
    let mut max_x = f64::NEG_INFINITY;
    let mut min_y = f64::INFINITY;
    let mut max_y = f64::NEG_INFINITY;
    for record in &log.records {
        for p in &record.positions {
            min_x = min_x.min(p.x);
            max_x = max_x.max(p.x);
            min_y = min_y.min(p.y);
            max_y = max_y.max(p.y);
        }
    }
    for a in &log.config.agents {
        min_x = min_x.min(a.goal.x);
        max_x = max_x.max(a.goal.x);
        min_y = min_y.min(a.goal.y);
        max_y = max_y.max(a.goal.y);
    }
    let frame = Frame::new(min_x, max_x, min_y, max_y, WIDTH, HEIGHT);

    let mut svg = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" viewBox=\"0 0 {WIDTH} {HEIGHT}\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
    );
    svg.push_str(&format!(
        "<rect x=\"{MARGIN}\" y=\"{MARGIN}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"#ccc\"/>\n",
        WIDTH - 2.0 * MARGIN,
        HEIGHT - 2.0 * MARGIN
    ));

    for i in 0..n {
        let pts: Vec<(f64, f64)> = log
            .records
            .iter()
            .map(|r| (frame.x(r.positions[i].x), frame.y(r.positions[i].y, 0.0)))
            .collect();
        svg.push_str(&polyline(&pts, color(i), 1.6));
        let (sx, sy) = pts[0];
        svg.push_str(&format!(
            "<circle cx=\"{sx:.2}\" cy=\"{sy:.2}\" r=\"4\" fill=\"{}\" stroke=\"#333\" stroke-width=\"0.7\"/>\n",
            color(i)
        ));
        let goal = log.config.agents[i].goal;
        svg.push_str(&star(frame.x(goal.x), frame.y(goal.y, 0.0), 9.0, color(i)));
        svg.push_str(&format!(
            "<text x=\"{:.2}\" y=\"{:.2}\" font-size=\"11\" fill=\"{}\">{}</text>\n",
            sx + 6.0,
            sy - 6.0,
            color(i),
            i
        ));
    }
    svg.push_str("</svg>\n");
    svg
}

/// Two stacked panels: per-agent phi2 on top, the weighted sum below.
pub fn phi2_svg(log: &TrajectoryLog) -> String {
    let n = log.config.agents.len();
    let panel_h = 320.0;
    let t_max = log.records.last().map(|r| r.time).unwrap_or(1.0);

    let mut svg = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{}\" viewBox=\"0 0 {WIDTH} {}\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n",
        2.0 * panel_h,
        2.0 * panel_h
    );

    // Top: per-agent phi2.
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for record in &log.records {
        for phi in &record.phi {
            lo = lo.min(phi.phi2);
            hi = hi.max(phi.phi2);
        }
    }
    let top = Frame::new(0.0, t_max, lo, hi, WIDTH, panel_h);
    for i in 0..n {
        let pts: Vec<(f64, f64)> = log
            .records
            .iter()
            .map(|r| (top.x(r.time), top.y(r.phi[i].phi2, 0.0)))
            .collect();
        svg.push_str(&polyline(&pts, color(i), 1.2));
    }
    // Zero line.
    svg.push_str(&format!(
        "<line x1=\"{MARGIN}\" x2=\"{}\" y1=\"{:.2}\" y2=\"{:.2}\" stroke=\"#999\" stroke-dasharray=\"4 3\"/>\n",
        WIDTH - MARGIN,
        top.y(0.0, 0.0),
        top.y(0.0, 0.0)
    ));
    svg.push_str(&format!(
        "<text x=\"{MARGIN}\" y=\"18\" font-size=\"12\" fill=\"#333\">per-agent phi2</text>\n"
    ));

    // Bottom: weighted sum.
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for record in &log.records {
        lo = lo.min(record.weighted_phi2_sum);
        hi = hi.max(record.weighted_phi2_sum);
    }
    let bottom = Frame::new(0.0, t_max, lo, hi, WIDTH, panel_h);
    let pts: Vec<(f64, f64)> = log
        .records
        .iter()
        .map(|r| (bottom.x(r.time), bottom.y(r.weighted_phi2_sum, panel_h)))
        .collect();
    svg.push_str(&polyline(&pts, "#111", 1.4));
    svg.push_str(&format!(
        "<line x1=\"{MARGIN}\" x2=\"{}\" y1=\"{:.2}\" y2=\"{:.2}\" stroke=\"#999\" stroke-dasharray=\"4 3\"/>\n",
        WIDTH - MARGIN,
        bottom.y(0.0, panel_h),
        bottom.y(0.0, panel_h)
    ));
    svg.push_str(&format!(
        "<text x=\"{MARGIN}\" y=\"{:.2}\" font-size=\"12\" fill=\"#333\">weighted phi2 sum</text>\n",
        panel_h + 18.0
    ));
    svg.push_str("</svg>\n");
    svg
}
