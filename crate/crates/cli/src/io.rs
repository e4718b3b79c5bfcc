//! File formats: point patterns, curves, envelopes.
//!
//! Pattern CSV starts with `# window xmin xmax ymin ymax`, then a header
//! `x,y` and one point per line. Curve CSV has an optional `# stat K` line,
//! then `r,value,defined`; undefined values are left empty.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use serde::{Deserialize, Serialize};
use spatcond::envelopes::Envelope;
use spatcond::summaries::{Curve, SummaryKind};
use spatcond::{Point, PointPattern, RGrid, Window};

/// Splits `# key v1 v2 ...` off the front of `text`, skipping blank lines.
fn header_line<'a>(text: &'a str, key: &str) -> (Option<Vec<&'a str>>, &'a str) {
    let trimmed = text.trim_start_matches(['\n', '\r', ' ', '\t']);
    let (line, rest) = trimmed.split_once('\n').unwrap_or((trimmed, ""));
    let mut words = line.trim().trim_start_matches('#').split_whitespace();
    if line.trim_start().starts_with('#') && words.next() == Some(key) {
        (Some(words.collect()), rest)
    } else {
        (None, trimmed)
    }
}

fn parse_window(words: &[&str]) -> Result<Window> {
    if words.len() != 4 {
        bail!("window line needs four numbers: xmin xmax ymin ymax");
    }
    let v: Vec<f64> = words.iter().map(|w| w.parse::<f64>()).collect::<Result<_, _>>()?;
    Ok(Window::new(v[0], v[1], v[2], v[3])?)
}

pub fn parse_pattern(text: &str) -> Result<PointPattern> {
    let (words, body) = header_line(text, "window");
    let window = parse_window(&words.ok_or_else(|| anyhow!("missing '# window xmin xmax ymin ymax' line"))?)?;
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(body.as_bytes());
    if rdr.headers()?.iter().collect::<Vec<_>>() != ["x", "y"] {
        bail!("pattern header must be 'x,y'");
    }
    let pts = rdr
        .deserialize::<(f64, f64)>()
        .map(|r| r.map(|(x, y)| Point::new(x, y)))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(PointPattern::new(pts, window)?)
}

pub fn format_pattern(x: &PointPattern) -> Result<String> {
    let w = x.window();
    let mut out = format!("# window {} {} {} {}\n", w.xmin(), w.xmax(), w.ymin(), w.ymax());
    let mut wtr = csv::Writer::from_writer(Vec::new());
    wtr.write_record(["x", "y"])?;
    for p in x.points() {
        wtr.serialize((p.x, p.y))?;
    }
    out.push_str(std::str::from_utf8(&wtr.into_inner()?)?);
    Ok(out)
}

pub fn read_pattern(path: &Path) -> Result<PointPattern> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_pattern(&text).with_context(|| format!("parsing {}", path.display()))
}

pub fn write_pattern(path: &Path, x: &PointPattern) -> Result<()> {
    fs::write(path, format_pattern(x)?).with_context(|| format!("writing {}", path.display()))
}

#[derive(Serialize, Deserialize)]
struct CurveRow {
    r: f64,
    value: Option<f64>,
    defined: bool,
}

pub fn format_curve(c: &Curve) -> Result<String> {
    let mut out = format!("# stat {}\n", c.kind().name());
    let mut wtr = csv::Writer::from_writer(Vec::new());
    for (i, &r) in c.rgrid().values().iter().enumerate() {
        wtr.serialize(CurveRow { r, value: c.get(i), defined: c.defined()[i] })?;
    }
    out.push_str(std::str::from_utf8(&wtr.into_inner()?)?);
    Ok(out)
}

/// Reads a curve; `kind` is required when the file has no `# stat` line.
pub fn parse_curve(text: &str, kind: Option<SummaryKind>) -> Result<Curve> {
    let (words, body) = header_line(text, "stat");
    let kind = match words.as_deref() {
        Some([name]) => SummaryKind::parse(name).ok_or_else(|| anyhow!("unknown statistic '{name}'"))?,
        Some(_) => bail!("stat line needs one of K, F, G, J"),
        None => kind.ok_or_else(|| anyhow!("curve has no '# stat' line"))?,
    };
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(body.as_bytes());
    let rows = rdr.deserialize::<CurveRow>().collect::<Result<Vec<_>, _>>()?;
    let rgrid = RGrid::new(rows.iter().map(|r| r.r).collect())?;
    let mut values = Vec::with_capacity(rows.len());
    let mut defined = Vec::with_capacity(rows.len());
    for row in &rows {
        match (row.defined, row.value) {
            (true, Some(v)) => values.push(v),
            (true, None) => bail!("defined value missing at r = {}", row.r),
            (false, _) => values.push(f64::NAN),
        }
        defined.push(row.defined);
    }
    Ok(Curve::new(rgrid, values, kind, defined)?)
}

pub fn read_curve(path: &Path, kind: Option<SummaryKind>) -> Result<Curve> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_curve(&text, kind).with_context(|| format!("parsing {}", path.display()))
}

pub fn write_curve(path: &Path, c: &Curve) -> Result<()> {
    fs::write(path, format_curve(c)?).with_context(|| format!("writing {}", path.display()))
}

/// `*.csv` files in `dir`, sorted by name.
pub fn csv_files(dir: &Path) -> Result<Vec<PathBuf>> {
    let mut files: Vec<PathBuf> = fs::read_dir(dir)
        .with_context(|| format!("listing {}", dir.display()))?
        .map(|e| e.map(|e| e.path()))
        .collect::<Result<_, _>>()?;
    files.retain(|p| p.is_file() && p.extension().is_some_and(|e| e == "csv"));
    files.sort();
    Ok(files)
}

#[derive(Serialize)]
struct EnvelopeRow {
    r: f64,
    lo: Option<f64>,
    hi: Option<f64>,
    obs: Option<f64>,
}

pub fn format_envelope(e: &Envelope) -> Result<String> {
    let mut wtr = csv::Writer::from_writer(Vec::new());
    for (i, &r) in e.lower.rgrid().values().iter().enumerate() {
        wtr.serialize(EnvelopeRow { r, lo: e.lower.get(i), hi: e.upper.get(i), obs: e.observed.get(i) })?;
    }
    Ok(String::from_utf8(wtr.into_inner()?)?)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnvelopeSummary {
    pub statistic: String,
    pub alpha: f64,
    pub p_value: f64,
    pub rejected: bool,
    pub area: f64,
    pub sims: usize,
    pub rank_count: usize,
    pub retained: usize,
}

impl EnvelopeSummary {
    pub fn new(e: &Envelope, sims: usize) -> Self {
        EnvelopeSummary {
            statistic: e.observed.kind().name().to_string(),
            alpha: e.alpha,
            p_value: e.p_value,
            rejected: e.rejected,
            area: e.area(),
            sims,
            rank_count: e.rank_count,
            retained: e.retained,
        }
    }
}

/// Writes `path` (CSV) and the JSON summary next to it.
pub fn write_envelope(path: &Path, e: &Envelope, sims: usize) -> Result<PathBuf> {
    fs::write(path, format_envelope(e)?).with_context(|| format!("writing {}", path.display()))?;
    let json = path.with_extension("json");
    write_json(&json, &EnvelopeSummary::new(e, sims))?;
    Ok(json)
}

pub fn write_json<T: Serialize>(path: &Path, v: &T) -> Result<()> {
    let mut f = fs::File::create(path).with_context(|| format!("writing {}", path.display()))?;
    serde_json::to_writer_pretty(&mut f, v)?;
    f.write_all(b"\n")?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pattern_round_trip_is_exact() {
        let w = Window::new(-1.0, 2.5, 0.0, 1.0).unwrap();
        let pts = vec![Point::new(0.1, 0.2), Point::new(-1.0, 1.0), Point::new(2.5, 1.0 / 3.0)];
        let x = PointPattern::new(pts, w).unwrap();
        let text = format_pattern(&x).unwrap();
        assert!(text.starts_with("# window -1 2.5 0 1\nx,y\n"));
        assert_eq!(parse_pattern(&text).unwrap(), x);
        let empty = PointPattern::empty(Window::unit());
        assert_eq!(parse_pattern(&format_pattern(&empty).unwrap()).unwrap(), empty);
    }

    #[test]
    fn pattern_errors() {
        assert!(parse_pattern("x,y\n0.5,0.5\n").is_err());
        assert!(parse_pattern("# window 0 1 0\nx,y\n").is_err());
        assert!(parse_pattern("# window 0 1 0 1\nx,y\n1.5,0.5\n").is_err());
        assert!(parse_pattern("# window 0 1 0 1\na,b\n0.5,0.5\n").is_err());
        assert!(parse_pattern("\n# window 0 1 0 1\n x , y \n 0.5 , 0.25 \n").is_ok());
    }

    #[test]
    fn curve_round_trip_keeps_undefined_points() {
        let rg = RGrid::new(vec![0.0, 0.1, 0.2]).unwrap();
        let c = Curve::new(rg, vec![1.0, f64::NAN, 0.3], SummaryKind::J, vec![true, false, true]).unwrap();
        let text = format_curve(&c).unwrap();
        assert_eq!(text, "# stat J\nr,value,defined\n0.0,1.0,true\n0.1,,false\n0.2,0.3,true\n");
        let back = parse_curve(&text, None).unwrap();
        assert_eq!(back.kind(), SummaryKind::J);
        assert_eq!(back.defined(), c.defined());
        assert_eq!(back.get(2), Some(0.3));
        let bare = "r,value,defined\n0,1,true\n";
        assert!(parse_curve(bare, None).is_err());
        assert_eq!(parse_curve(bare, Some(SummaryKind::K)).unwrap().kind(), SummaryKind::K);
    }
}
