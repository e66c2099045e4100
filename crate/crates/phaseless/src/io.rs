//! CSV serialization of sample sets.
//!
//! Layout: `#`-prefixed metadata lines (the window family, the window radius,
//! optional warnings), a header row `x,omega,m_0..m_{k-1}`, then one row per
//! sample point. Numbers are written with 17 significant digits, `.` decimal,
//! no locale, so identical inputs produce byte-identical files.

use crate::hermite::WindowSpec;
use crate::lattice::PointSet;
use crate::reconstruct::SampleSet;
use num_complex::Complex64;
use std::fmt;
use std::fmt::Write as _;

#[derive(Debug, Clone, PartialEq)]
pub struct FormatError(pub String);

impl fmt::Display for FormatError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "sample CSV format error: {}", self.0)
    }
}

impl std::error::Error for FormatError {}

fn fmt_num(x: f64) -> String {
    format!("{x:.16e}")
}

fn fmt_complex(c: Complex64) -> String {
    format!("({},{})", c.re, c.im)
}

fn parse_pair(s: &str) -> Result<Complex64, FormatError> {
    let inner = s
        .trim()
        .strip_prefix('(')
        .and_then(|t| t.strip_suffix(')'))
        .ok_or_else(|| FormatError(format!("expected (re,im), got {s:?}")))?;
    let (re, im) = inner
        .split_once(',')
        .ok_or_else(|| FormatError(format!("expected (re,im), got {s:?}")))?;
    let parse = |t: &str| {
        t.trim()
            .parse::<f64>()
            .map_err(|e| FormatError(format!("bad number {t:?}: {e}")))
    };
    Ok(Complex64::new(parse(re)?, parse(im)?))
}

/// Writes a sample set as CSV; `warnings` become additional metadata lines.
pub fn write_sample_set(set: &SampleSet, warnings: &[String]) -> String {
    let mut out = String::new();
    let frame_str = set
        .frame
        .iter()
        .map(|w| format!("{} {}", fmt_complex(w.lambda), fmt_complex(w.mu)))
        .collect::<Vec<_>>()
        .join("; ");
    let _ = writeln!(out, "# frame: {frame_str}");
    let _ = writeln!(out, "# radius: {}", set.points.region_radius);
    for w in warnings {
        let _ = writeln!(out, "# warning: {w}");
    }
    let header: Vec<String> = ["x".to_string(), "omega".to_string()]
        .into_iter()
        .chain((0..set.frame.len()).map(|k| format!("m_{k}")))
        .collect();
    let _ = writeln!(out, "{}", header.join(","));
    for (point, mags) in set.points.points.iter().zip(&set.magnitudes) {
        let row: Vec<String> = [fmt_num(point[0]), fmt_num(point[1])]
            .into_iter()
            .chain(mags.iter().map(|&m| fmt_num(m)))
            .collect();
        let _ = writeln!(out, "{}", row.join(","));
    }
    out
}

/// Parses CSV produced by [`write_sample_set`].
pub fn parse_sample_set(text: &str) -> Result<SampleSet, FormatError> {
    let mut frame: Option<Vec<WindowSpec>> = None;
    let mut radius: Option<f64> = None;
    let mut header_seen = false;
    let mut points = Vec::new();
    let mut magnitudes = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(meta) = line.strip_prefix('#') {
            let meta = meta.trim();
            if let Some(spec) = meta.strip_prefix("frame:") {
                let mut windows = Vec::new();
                for entry in spec.split(';') {
                    let parts: Vec<&str> = entry.split_whitespace().collect();
                    if parts.len() != 2 {
                        return Err(FormatError(format!(
                            "frame entry {entry:?} is not a (λ) (μ) pair"
                        )));
                    }
                    windows.push(WindowSpec::new(parse_pair(parts[0])?, parse_pair(parts[1])?));
                }
                frame = Some(windows);
            } else if let Some(r) = meta.strip_prefix("radius:") {
                radius = Some(
                    r.trim()
                        .parse()
                        .map_err(|e| FormatError(format!("bad radius: {e}")))?,
                );
            }
            continue;
        }
        if !header_seen {
            if !line.starts_with("x,omega") {
                return Err(FormatError(format!(
                    "line {}: expected header starting with x,omega",
                    lineno + 1
                )));
            }
            header_seen = true;
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        let ncols = frame.as_ref().map(|f| f.len() + 2);
        if Some(fields.len()) != ncols {
            return Err(FormatError(format!(
                "line {}: expected {:?} columns, got {}",
                lineno + 1,
                ncols,
                fields.len()
            )));
        }
        let mut nums = Vec::with_capacity(fields.len());
        for f in &fields {
            nums.push(
                f.trim()
                    .parse::<f64>()
                    .map_err(|e| FormatError(format!("line {}: {e}", lineno + 1)))?,
            );
        }
        if nums[2..].iter().any(|&m| m < 0.0) {
            return Err(FormatError(format!(
                "line {}: negative magnitude",
                lineno + 1
            )));
        }
        points.push([nums[0], nums[1]]);
        magnitudes.push(nums[2..].to_vec());
    }
    let frame = frame.ok_or_else(|| FormatError("missing '# frame:' metadata".into()))?;
    if !header_seen {
        return Err(FormatError("missing header row".into()));
    }
    let radius = radius.unwrap_or_else(|| {
        points
            .iter()
            .map(|p| (p[0] * p[0] + p[1] * p[1]).sqrt())
            .fold(0.0, f64::max)
            .max(1.0)
    });
    Ok(SampleSet {
        frame,
        points: PointSet::new(points, radius),
        magnitudes,
    })
}
