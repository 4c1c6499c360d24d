//! Experiment drivers shared by the subcommands.

use std::fs;
use std::path::{Path, PathBuf};

use dsnn::emd::{EmdParams, EmdState};
use dsnn::lptc::Direction;
use dsnn::stimuli::{scene_by_name, scene_library, sweep_suite, Scene, SWEEP_NAMES};
use dsnn::{Ablation, LuminanceFrame, Params, Pipeline};
use rayon::prelude::*;

use crate::error::{io_err, CliError, Result};
use crate::pgm::{self, PgmSequence};
use crate::report::{format_g, DsnnRow, EmdRow, Model, Row, RunReport};

/// Where frames come from.
#[derive(Debug, Clone, PartialEq)]
pub enum Source {
    Scene(String),
    Frames(PathBuf),
}

pub fn open_scene(name: &str) -> Result<Scene> {
    let spec = scene_by_name(name).ok_or_else(|| CliError::UnknownScene {
        name: name.to_string(),
        valid: scene_library()
            .iter()
            .map(|s| s.name.as_str())
            .collect::<Vec<_>>()
            .join(", "),
    })?;
    Ok(Scene::new(spec)?)
}

/// Parameter overrides layered over the defaults for a field size.
#[derive(Debug, Clone, Default)]
pub struct ParamSource {
    pub config: Option<String>,
    pub overrides: Vec<String>,
    pub ablation: Option<Ablation>,
}

impl ParamSource {
    pub fn with_config_file(mut self, path: Option<&Path>) -> Result<Self> {
        if let Some(path) = path {
            self.config = Some(fs::read_to_string(path).map_err(io_err(path))?);
        }
        Ok(self)
    }

    /// Defaults for `rows × cols`, then the config text, then `key=value`
    /// overrides, then the ablation flag. Validated.
    pub fn build(&self, rows: usize, cols: usize) -> Result<Params> {
        let mut p = Params::unchecked_defaults(rows, cols);
        if let Some(text) = &self.config {
            p.apply_config_str(text)?;
        }
        let mut pairs = Vec::with_capacity(self.overrides.len());
        for raw in &self.overrides {
            let (k, v) = raw
                .split_once('=')
                .filter(|(k, v)| !k.trim().is_empty() && !v.trim().is_empty())
                .ok_or_else(|| CliError::BadOverride(raw.clone()))?;
            pairs.push((0, k, v));
        }
        p.apply_overrides(pairs)?;
        if let Some(a) = self.ablation {
            p.ablation = a;
        }
        Ok(p.validate()?)
    }
}

/// Drives the selected model(s) over a frame stream.
pub fn run_frames<I>(frames: I, params: &Params, model: Model) -> Result<RunReport>
where
    I: IntoIterator<Item = Result<LuminanceFrame>>,
{
    let mut pipe = model
        .dsnn()
        .then(|| Pipeline::new(params.clone()))
        .transpose()?;
    let mut emd = model
        .emd()
        .then(|| EmdState::new(EmdParams::new(params.rows, params.cols, params.d)));
    let mut rows = Vec::new();
    for frame in frames {
        let frame = frame?;
        let dsnn = match pipe.as_mut() {
            Some(p) => Some(DsnnRow::from(&p.step(&frame)?)),
            None => None,
        };
        let emd = match emd.as_mut() {
            Some(e) => {
                let (hs, vs) = e.step(&frame)?;
                Some(EmdRow { hs, vs })
            }
            None => None,
        };
        rows.push(Row {
            frame: frame.index,
            dsnn,
            emd,
        });
    }
    if rows.is_empty() {
        return Err(CliError::EmptySequence);
    }
    Ok(RunReport { model, rows })
}

pub fn run_source(source: &Source, params: &ParamSource, model: Model) -> Result<RunReport> {
    match source {
        Source::Scene(name) => {
            let scene = open_scene(name)?;
            let spec = scene.spec();
            let p = params.build(spec.rows, spec.cols)?;
            run_frames(scene.frames().map(Ok), &p, model)
        }
        Source::Frames(dir) => {
            let seq = PgmSequence::open(dir)?;
            let (rows, cols) = seq.dims()?;
            let p = params.build(rows, cols)?;
            run_frames(seq.frames(), &p, model)
        }
    }
}

/// Runs the intact network and both blocked variants on the same source.
pub fn run_ablations(
    source: &Source,
    params: &ParamSource,
    model: Model,
) -> Result<Vec<(Ablation, RunReport)>> {
    Ablation::ALL
        .into_iter()
        .map(|a| {
            let ps = ParamSource {
                ablation: Some(a),
                ..params.clone()
            };
            run_source(source, &ps, model).map(|r| (a, r))
        })
        .collect()
}

/// `out.csv` → `out_<mode>.csv` next to it.
pub fn ablation_path(out: &Path, mode: Ablation) -> PathBuf {
    let stem = out.file_stem().and_then(|s| s.to_str()).unwrap_or("ablate");
    out.with_file_name(format!("{stem}_{}.csv", mode.as_str()))
}

/// Peak responses of one sweep cell.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub scene: String,
    pub vt: f64,
    pub vb: f64,
    pub gray: u8,
    pub dsnn: Option<SweepPeaks>,
    pub emd: Option<(f64, f64)>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepPeaks {
    pub max_hs_smp: f64,
    pub max_vs_smp: f64,
    pub peak_abs_hs_smp: f64,
    pub peak_abs_vs_smp: f64,
    pub hs_preferred_spikes: u64,
}

pub fn suite_names() -> String {
    SWEEP_NAMES.join(", ")
}

/// Runs every cell of a named suite; cells run in parallel, rows keep
/// suite order.
pub fn run_sweep(suite: &str, params: &ParamSource, model: Model) -> Result<Vec<SweepRow>> {
    let cells = sweep_suite(suite).ok_or_else(|| CliError::UnknownSuite {
        name: suite.to_string(),
        valid: suite_names(),
    })?;
    cells
        .par_iter()
        .map(|cell| {
            let scene = Scene::new(cell.scene.clone())?;
            let p = params.build(cell.scene.rows, cell.scene.cols)?;
            let report = run_frames(scene.frames().map(Ok), &p, model)?;
            let summary = report.summary();
            let dsnn = summary.dsnn.map(|d| SweepPeaks {
                max_hs_smp: d.max_hs_smp,
                max_vs_smp: d.max_vs_smp,
                peak_abs_hs_smp: d.peak_abs_hs_smp,
                peak_abs_vs_smp: d.peak_abs_vs_smp,
                hs_preferred_spikes: report
                    .rows
                    .iter()
                    .filter_map(|r| r.dsnn)
                    .filter(|d| d.hs_dir == Direction::Preferred)
                    .map(|d| d.hs_spikes as u64)
                    .sum(),
            });
            let emd = summary.emd.map(|e| (e.max_hs, e.max_vs));
            Ok(SweepRow {
                scene: cell.scene.name.clone(),
                vt: cell.vt,
                vb: cell.vb,
                gray: cell.gray,
                dsnn,
                emd,
            })
        })
        .collect()
}

pub fn sweep_csv(rows: &[SweepRow], model: Model) -> String {
    let mut header = vec!["scene", "vt", "vb", "gray"];
    if model.dsnn() {
        header.extend([
            "peak_hs_smp",
            "peak_vs_smp",
            "peak_abs_hs_smp",
            "peak_abs_vs_smp",
            "hs_preferred_spikes",
        ]);
    }
    if model.emd() {
        header.extend(["emd_peak_hs", "emd_peak_vs"]);
    }
    let mut out = header.join(",");
    out.push('\n');
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{}",
            r.scene,
            format_g(r.vt),
            format_g(r.vb),
            r.gray
        ));
        if let Some(d) = &r.dsnn {
            out.push_str(&format!(
                ",{},{},{},{},{}",
                format_g(d.max_hs_smp),
                format_g(d.max_vs_smp),
                format_g(d.peak_abs_hs_smp),
                format_g(d.peak_abs_vs_smp),
                d.hs_preferred_spikes
            ));
        }
        if let Some((hs, vs)) = r.emd {
            out.push_str(&format!(",{},{}", format_g(hs), format_g(vs)));
        }
        out.push('\n');
    }
    out
}

/// Writes a library scene as `frame_NNNN.pgm` files; returns the count.
pub fn generate(scene_name: &str, dir: &Path) -> Result<usize> {
    let scene = open_scene(scene_name)?;
    fs::create_dir_all(dir).map_err(io_err(dir))?;
    let width = scene.len().saturating_sub(1).to_string().len().max(4);
    let mut n = 0;
    for frame in scene.frames() {
        let path = dir.join(format!("frame_{:0width$}.pgm", frame.index));
        pgm::write_frame(&path, &frame)?;
        n += 1;
    }
    Ok(n)
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(io_err(path))
}
