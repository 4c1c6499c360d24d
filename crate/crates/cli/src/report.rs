//! Per-frame rows, CSV emission and the run summary.

use std::fmt;

use clap::ValueEnum;
use dsnn::lptc::Direction;
use dsnn::NetworkOutput;

/// Which detector(s) a run drives.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Model {
    #[default]
    Dsnn,
    Emd,
    Both,
}

impl Model {
    pub fn dsnn(self) -> bool {
        matches!(self, Model::Dsnn | Model::Both)
    }

    pub fn emd(self) -> bool {
        matches!(self, Model::Emd | Model::Both)
    }
}

pub const DSNN_COLUMNS: [&str; 10] = [
    "hs_smp",
    "vs_smp",
    "lp_on_hs",
    "lp_off_hs",
    "lp_on_vs",
    "lp_off_vs",
    "hs_spikes",
    "hs_dir",
    "vs_spikes",
    "vs_dir",
];

pub const EMD_COLUMNS: [&str; 2] = ["emd_hs", "emd_vs"];

/// `printf("%g")`-style rendering with six significant digits.
pub fn format_g(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return if x.is_nan() {
            "nan".into()
        } else if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    let sci = format!("{x:.5e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..6).contains(&exp) {
        let m = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{m}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (5 - exp) as usize;
        trim_zeros(&format!("{x:.decimals$}")).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// The value a reader recovers from the CSV.
pub fn round6(x: f64) -> f64 {
    format_g(x).parse().unwrap_or(x)
}

pub fn parse_direction(s: &str) -> Option<Direction> {
    match s {
        "preferred" => Some(Direction::Preferred),
        "null" => Some(Direction::Null),
        "none" => Some(Direction::Quiet),
        _ => None,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DsnnRow {
    pub hs_smp: f64,
    pub vs_smp: f64,
    pub lp_on_hs: f64,
    pub lp_off_hs: f64,
    pub lp_on_vs: f64,
    pub lp_off_vs: f64,
    pub hs_spikes: u32,
    pub hs_dir: Direction,
    pub vs_spikes: u32,
    pub vs_dir: Direction,
}

impl From<&NetworkOutput> for DsnnRow {
    fn from(o: &NetworkOutput) -> Self {
        Self {
            hs_smp: o.hs_smp,
            vs_smp: o.vs_smp,
            lp_on_hs: o.lp.on_hs,
            lp_off_hs: o.lp.off_hs,
            lp_on_vs: o.lp.on_vs,
            lp_off_vs: o.lp.off_vs,
            hs_spikes: o.hs_spikes,
            hs_dir: o.hs_dir,
            vs_spikes: o.vs_spikes,
            vs_dir: o.vs_dir,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EmdRow {
    pub hs: f64,
    pub vs: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Row {
    pub frame: u64,
    pub dsnn: Option<DsnnRow>,
    pub emd: Option<EmdRow>,
}

/// Output of one run: a row per processed frame.
#[derive(Debug, Clone, PartialEq)]
pub struct RunReport {
    pub model: Model,
    pub rows: Vec<Row>,
}

impl RunReport {
    pub fn header(model: Model) -> String {
        let mut cols = vec!["frame"];
        if model.dsnn() {
            cols.extend(DSNN_COLUMNS);
        }
        if model.emd() {
            cols.extend(EMD_COLUMNS);
        }
        cols.join(",")
    }

    pub fn to_csv(&self) -> String {
        let mut out = Self::header(self.model);
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.frame.to_string());
            if let Some(d) = &row.dsnn {
                for v in [
                    d.hs_smp,
                    d.vs_smp,
                    d.lp_on_hs,
                    d.lp_off_hs,
                    d.lp_on_vs,
                    d.lp_off_vs,
                ] {
                    out.push(',');
                    out.push_str(&format_g(v));
                }
                out.push_str(&format!(
                    ",{},{},{},{}",
                    d.hs_spikes,
                    d.hs_dir.as_str(),
                    d.vs_spikes,
                    d.vs_dir.as_str()
                ));
            }
            if let Some(e) = &row.emd {
                out.push_str(&format!(",{},{}", format_g(e.hs), format_g(e.vs)));
            }
            out.push('\n');
        }
        out
    }

    /// Reads back a CSV written by [`RunReport::to_csv`].
    pub fn from_csv(text: &str) -> Result<Self, String> {
        let mut lines = text.lines();
        let header = lines.next().ok_or("missing header")?;
        let model = [Model::Dsnn, Model::Emd, Model::Both]
            .into_iter()
            .find(|&m| Self::header(m) == header)
            .ok_or_else(|| format!("unrecognized header '{header}'"))?;
        let mut rows = Vec::new();
        for (i, line) in lines.enumerate() {
            let bad = |what: &str| format!("row {}: bad {what}", i + 1);
            let f: Vec<&str> = line.split(',').collect();
            let num = |j: usize| -> Result<f64, String> {
                f.get(j)
                    .and_then(|s| s.parse().ok())
                    .ok_or_else(|| bad("number"))
            };
            let int = |j: usize| -> Result<u32, String> {
                f.get(j)
                    .and_then(|s| s.parse().ok())
                    .ok_or_else(|| bad("count"))
            };
            let dir = |j: usize| -> Result<Direction, String> {
                f.get(j)
                    .and_then(|s| parse_direction(s))
                    .ok_or_else(|| bad("direction"))
            };
            let frame = f[0].parse().map_err(|_| bad("frame"))?;
            let mut at = 1;
            let dsnn = if model.dsnn() {
                at += DSNN_COLUMNS.len();
                Some(DsnnRow {
                    hs_smp: num(1)?,
                    vs_smp: num(2)?,
                    lp_on_hs: num(3)?,
                    lp_off_hs: num(4)?,
                    lp_on_vs: num(5)?,
                    lp_off_vs: num(6)?,
                    hs_spikes: int(7)?,
                    hs_dir: dir(8)?,
                    vs_spikes: int(9)?,
                    vs_dir: dir(10)?,
                })
            } else {
                None
            };
            let emd = if model.emd() {
                Some(EmdRow {
                    hs: num(at)?,
                    vs: num(at + 1)?,
                })
            } else {
                None
            };
            rows.push(Row { frame, dsnn, emd });
        }
        Ok(Self { model, rows })
    }

    /// Statistics over the rows as they appear in the CSV.
    pub fn summary(&self) -> Summary {
        Summary::from_rows(&self.rows)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct DsnnSummary {
    pub max_hs_smp: f64,
    pub min_hs_smp: f64,
    pub peak_abs_hs_smp: f64,
    pub max_vs_smp: f64,
    pub min_vs_smp: f64,
    pub peak_abs_vs_smp: f64,
    pub hs_preferred_spikes: u64,
    pub hs_null_spikes: u64,
    pub vs_preferred_spikes: u64,
    pub vs_null_spikes: u64,
    pub hs_frames_above: usize,
    pub vs_frames_above: usize,
}

impl DsnnSummary {
    pub fn total_spikes(&self) -> u64 {
        self.hs_preferred_spikes
            + self.hs_null_spikes
            + self.vs_preferred_spikes
            + self.vs_null_spikes
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct EmdSummary {
    pub max_hs: f64,
    pub min_hs: f64,
    pub max_vs: f64,
    pub min_vs: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Summary {
    pub frames: usize,
    pub dsnn: Option<DsnnSummary>,
    pub emd: Option<EmdSummary>,
}

fn extremes(values: impl Iterator<Item = f64>) -> (f64, f64) {
    values
        .map(round6)
        .fold((f64::NEG_INFINITY, f64::INFINITY), |(hi, lo), v| {
            (hi.max(v), lo.min(v))
        })
}

impl Summary {
    pub fn from_rows(rows: &[Row]) -> Self {
        let dsnn: Vec<&DsnnRow> = rows.iter().filter_map(|r| r.dsnn.as_ref()).collect();
        let emd: Vec<&EmdRow> = rows.iter().filter_map(|r| r.emd.as_ref()).collect();

        let dsnn = (!dsnn.is_empty()).then(|| {
            let (max_hs, min_hs) = extremes(dsnn.iter().map(|d| d.hs_smp));
            let (max_vs, min_vs) = extremes(dsnn.iter().map(|d| d.vs_smp));
            let spikes = |dir: fn(&DsnnRow) -> (Direction, u32), want: Direction| -> u64 {
                dsnn.iter()
                    .map(|d| dir(d))
                    .filter(|(got, _)| *got == want)
                    .map(|(_, n)| n as u64)
                    .sum()
            };
            let hs = |d: &DsnnRow| (d.hs_dir, d.hs_spikes);
            let vs = |d: &DsnnRow| (d.vs_dir, d.vs_spikes);
            DsnnSummary {
                max_hs_smp: max_hs,
                min_hs_smp: min_hs,
                peak_abs_hs_smp: max_hs.abs().max(min_hs.abs()),
                max_vs_smp: max_vs,
                min_vs_smp: min_vs,
                peak_abs_vs_smp: max_vs.abs().max(min_vs.abs()),
                hs_preferred_spikes: spikes(hs, Direction::Preferred),
                hs_null_spikes: spikes(hs, Direction::Null),
                vs_preferred_spikes: spikes(vs, Direction::Preferred),
                vs_null_spikes: spikes(vs, Direction::Null),
                hs_frames_above: dsnn.iter().filter(|d| d.hs_dir != Direction::Quiet).count(),
                vs_frames_above: dsnn.iter().filter(|d| d.vs_dir != Direction::Quiet).count(),
            }
        });
        let emd = (!emd.is_empty()).then(|| {
            let (max_hs, min_hs) = extremes(emd.iter().map(|e| e.hs));
            let (max_vs, min_vs) = extremes(emd.iter().map(|e| e.vs));
            EmdSummary {
                max_hs,
                min_hs,
                max_vs,
                min_vs,
            }
        });
        Self {
            frames: rows.len(),
            dsnn,
            emd,
        }
    }
}

impl fmt::Display for Summary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "frames: {}", self.frames)?;
        if let Some(d) = &self.dsnn {
            writeln!(
                f,
                "hs_smp max/min: {} / {}",
                format_g(d.max_hs_smp),
                format_g(d.min_hs_smp)
            )?;
            writeln!(
                f,
                "vs_smp max/min: {} / {}",
                format_g(d.max_vs_smp),
                format_g(d.min_vs_smp)
            )?;
            writeln!(f, "peak |hs_smp|: {}", format_g(d.peak_abs_hs_smp))?;
            writeln!(f, "peak |vs_smp|: {}", format_g(d.peak_abs_vs_smp))?;
            writeln!(
                f,
                "hs spikes preferred/null: {} / {}",
                d.hs_preferred_spikes, d.hs_null_spikes
            )?;
            writeln!(
                f,
                "vs spikes preferred/null: {} / {}",
                d.vs_preferred_spikes, d.vs_null_spikes
            )?;
            writeln!(
                f,
                "frames above threshold hs/vs: {} / {}",
                d.hs_frames_above, d.vs_frames_above
            )?;
        }
        if let Some(e) = &self.emd {
            writeln!(
                f,
                "emd_hs max/min: {} / {}",
                format_g(e.max_hs),
                format_g(e.min_hs)
            )?;
            writeln!(
                f,
                "emd_vs max/min: {} / {}",
                format_g(e.max_vs),
                format_g(e.min_vs)
            )?;
        }
        Ok(())
    }
}
