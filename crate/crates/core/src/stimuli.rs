//! Deterministic synthetic stimuli: bars and squares translating, looming
//! or receding over uniform or horizontally shifting textured backgrounds.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::retina::LuminanceFrame;

/// Clean scenes.
pub const CLEAN_ROWS: usize = 180;
pub const CLEAN_COLS: usize = 320;
/// Cluttered scenes.
pub const CLUTTER_ROWS: usize = 180;
pub const CLUTTER_COLS: usize = 540;

/// Long side of the translating bar.
pub const BAR_LENGTH: usize = 120;
/// Short side of the translating bar.
pub const BAR_THICKNESS: usize = 30;
/// Speed of translations on clean backgrounds, px/frame.
pub const CLEAN_SPEED: f64 = 4.0;
/// Growth of the looming square's half-width, px/frame.
pub const LOOM_RATE: f64 = 2.0;
pub const LOOM_MIN_HALF: f64 = 4.0;
pub const LOOM_MAX_HALF: f64 = 80.0;
/// Background-only frames before a cluttered translation enters the field.
pub const CLUTTER_LEAD_FRAMES: usize = 8;

pub const SPEED_SWEEP_VT: [f64; 3] = [40.0, 80.0, 120.0];
pub const SPEED_SWEEP_VB: [f64; 5] = [-2.0, -4.0, -6.0, -8.0, -10.0];
pub const GRAY_SWEEP_LEVELS: [u8; 5] = [0, 64, 128, 192, 255];
pub const GRAY_SWEEP_VT: [f64; 5] = [40.0, 60.0, 80.0, 100.0, 120.0];
pub const GRAY_SWEEP_VB: f64 = -8.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ObjectShape {
    /// Axis-aligned rectangle, `width` along x.
    Bar { width: usize, height: usize },
    /// Square whose half-width is set by the motion.
    Square,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Background {
    Uniform(u8),
    /// Seeded multi-octave value noise, periodic along x.
    Textured {
        seed: u64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Motion {
    /// Top-left corner at `(x0 + vx·t, y0 + vy·t)`.
    Translate { x0: f64, y0: f64, vx: f64, vy: f64 },
    /// Square centered at `(cx, cy)` with half-width `half0 + rate·t`.
    Loom {
        cx: f64,
        cy: f64,
        half0: f64,
        rate: f64,
    },
    /// Square centered at `(cx, cy)` with half-width `half0 − rate·t`.
    Recede {
        cx: f64,
        cy: f64,
        half0: f64,
        rate: f64,
    },
}

/// Full description of a synthetic scene.
#[derive(Debug, Clone, PartialEq)]
pub struct SceneSpec {
    pub name: String,
    pub rows: usize,
    pub cols: usize,
    pub shape: ObjectShape,
    pub object_gray: u8,
    pub background: Background,
    pub motion: Motion,
    /// Background shift, px/frame; positive is rightward.
    pub bg_shift: f64,
    pub duration: usize,
}

impl SceneSpec {
    pub fn validate(&self) -> Result<()> {
        if self.rows == 0 || self.cols == 0 {
            return Err(Error::InvalidScene(format!("{}: empty field", self.name)));
        }
        if self.bg_shift.is_nan() || self.bg_shift.abs() >= self.cols as f64 {
            return Err(Error::InvalidScene(format!(
                "{}: background shift {} not below field width {}",
                self.name, self.bg_shift, self.cols
            )));
        }
        Ok(())
    }

    /// Left-right mirror of the scene: geometry and velocities reflected.
    /// Only uniform backgrounds mirror exactly.
    pub fn mirrored(&self) -> SceneSpec {
        let c = self.cols as f64;
        let motion = match (self.motion, self.shape) {
            (Motion::Translate { x0, y0, vx, vy }, ObjectShape::Bar { width, .. }) => {
                Motion::Translate {
                    x0: c - width as f64 - x0,
                    y0,
                    vx: -vx,
                    vy,
                }
            }
            (
                Motion::Loom {
                    cx,
                    cy,
                    half0,
                    rate,
                },
                _,
            ) => Motion::Loom {
                cx: c - cx,
                cy,
                half0,
                rate,
            },
            (
                Motion::Recede {
                    cx,
                    cy,
                    half0,
                    rate,
                },
                _,
            ) => Motion::Recede {
                cx: c - cx,
                cy,
                half0,
                rate,
            },
            (m, _) => m,
        };
        SceneSpec {
            name: format!("{}-mirrored", self.name),
            motion,
            bg_shift: -self.bg_shift,
            ..self.clone()
        }
    }
}

/// A scene with its background texture prepared once.
#[derive(Debug, Clone)]
pub struct Scene {
    spec: SceneSpec,
    texture: Option<Field>,
}

impl Scene {
    pub fn new(spec: SceneSpec) -> Result<Self> {
        spec.validate()?;
        let texture = match spec.background {
            Background::Textured { seed } => Some(value_noise(spec.rows, spec.cols, seed)),
            Background::Uniform(_) => None,
        };
        Ok(Self { spec, texture })
    }

    pub fn spec(&self) -> &SceneSpec {
        &self.spec
    }

    pub fn len(&self) -> usize {
        self.spec.duration
    }

    pub fn is_empty(&self) -> bool {
        self.spec.duration == 0
    }

    pub fn frame(&self, t: usize) -> Result<LuminanceFrame> {
        let s = &self.spec;
        if t >= s.duration {
            return Err(Error::FrameOutOfRange {
                t,
                duration: s.duration,
            });
        }
        let mut img = match (&self.texture, s.background) {
            (Some(tex), _) => {
                let shift = (s.bg_shift * t as f64).round() as i64;
                let cols = s.cols as i64;
                Field::from_fn(s.rows, s.cols, |x, y| {
                    tex.get((x as i64 - shift).rem_euclid(cols) as usize, y)
                })
            }
            (None, Background::Uniform(g)) => Field::filled(s.rows, s.cols, g as f64),
            (None, Background::Textured { .. }) => unreachable!("texture prepared in new"),
        };
        if let Some((x0, x1, y0, y1)) = self.object_rect(t) {
            let g = s.object_gray as f64;
            for y in y0..y1 {
                for x in x0..x1 {
                    img.set(x, y, g);
                }
            }
        }
        LuminanceFrame::new(t as u64, img)
    }

    /// Clipped pixel rectangle `[x0, x1) × [y0, y1)` covered at frame `t`.
    pub fn object_rect(&self, t: usize) -> Option<(usize, usize, usize, usize)> {
        let s = &self.spec;
        let t = t as f64;
        let (left, right, top, bottom) = match (s.motion, s.shape) {
            (Motion::Translate { x0, y0, vx, vy }, ObjectShape::Bar { width, height }) => {
                let l = (x0 + vx * t).round();
                let tp = (y0 + vy * t).round();
                (l, l + width as f64, tp, tp + height as f64)
            }
            (Motion::Translate { .. }, ObjectShape::Square) => return None,
            (
                Motion::Loom {
                    cx,
                    cy,
                    half0,
                    rate,
                },
                _,
            ) => square(cx, cy, half0 + rate * t),
            (
                Motion::Recede {
                    cx,
                    cy,
                    half0,
                    rate,
                },
                _,
            ) => square(cx, cy, half0 - rate * t),
        };
        let clip = |v: f64, hi: usize| v.clamp(0.0, hi as f64) as usize;
        let (x0, x1) = (clip(left, s.cols), clip(right, s.cols));
        let (y0, y1) = (clip(top, s.rows), clip(bottom, s.rows));
        (x0 < x1 && y0 < y1).then_some((x0, x1, y0, y1))
    }

    pub fn frames(&self) -> impl Iterator<Item = LuminanceFrame> + '_ {
        (0..self.spec.duration).map(|t| self.frame(t).expect("t within duration"))
    }
}

fn square(cx: f64, cy: f64, half: f64) -> (f64, f64, f64, f64) {
    let h = half.max(0.0).round();
    let (cx, cy) = (cx.round(), cy.round());
    (cx - h, cx + h, cy - h, cy + h)
}

/// Renders frame `t` of `spec`.
pub fn render(spec: &SceneSpec, t: usize) -> Result<LuminanceFrame> {
    Scene::new(spec.clone())?.frame(t)
}

/// Multi-octave value noise in `[TEXTURE_LOW, TEXTURE_HIGH]`, periodic in x.
pub fn value_noise(rows: usize, cols: usize, seed: u64) -> Field {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut acc = Field::zeros(rows, cols);
    let mut amplitude = 1.0;
    for cell in TEXTURE_CELLS {
        let nx = ((cols as f64 / cell).round() as usize).max(1);
        let spacing = cols as f64 / nx as f64;
        let ny = (rows as f64 / spacing).ceil() as usize + 2;
        let lattice: Vec<f64> = (0..nx * ny).map(|_| rng.gen::<f64>()).collect();
        let at = |ix: usize, iy: usize| lattice[iy.min(ny - 1) * nx + ix % nx];
        for y in 0..rows {
            let fy = y as f64 / spacing;
            let iy = fy.floor() as usize;
            let ty = smooth(fy - iy as f64);
            for x in 0..cols {
                let fx = x as f64 / spacing;
                let ix = fx.floor() as usize;
                let tx = smooth(fx - ix as f64);
                let top = lerp(at(ix, iy), at(ix + 1, iy), tx);
                let bottom = lerp(at(ix, iy + 1), at(ix + 1, iy + 1), tx);
                acc[(x, y)] += amplitude * lerp(top, bottom, ty);
            }
        }
        amplitude *= TEXTURE_PERSISTENCE;
    }
    let (lo, hi) = acc
        .as_slice()
        .iter()
        .fold((f64::MAX, f64::MIN), |(a, b), &v| (a.min(v), b.max(v)));
    let span = (hi - lo).max(f64::MIN_POSITIVE);
    acc.map(|v| (TEXTURE_LOW + (v - lo) / span * (TEXTURE_HIGH - TEXTURE_LOW)).round())
}

/// Lattice spacings of the noise octaves, pixels.
const TEXTURE_CELLS: [f64; 4] = [64.0, 32.0, 16.0, 8.0];
const TEXTURE_PERSISTENCE: f64 = 0.5;
pub const TEXTURE_LOW: f64 = 48.0;
pub const TEXTURE_HIGH: f64 = 208.0;
pub const TEXTURE_SEED: u64 = 0x005e_edd5;

fn smooth(t: f64) -> f64 {
    t * t * (3.0 - 2.0 * t)
}

fn lerp(a: f64, b: f64, t: f64) -> f64 {
    a + (b - a) * t
}

/// Direction of a clean translation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Heading {
    Right,
    Left,
    Up,
    Down,
}

impl Heading {
    pub const ALL: [Heading; 4] = [Heading::Right, Heading::Left, Heading::Up, Heading::Down];

    pub fn tag(self) -> &'static str {
        match self {
            Heading::Right => "R",
            Heading::Left => "L",
            Heading::Up => "U",
            Heading::Down => "D",
        }
    }

    pub fn is_horizontal(self) -> bool {
        matches!(self, Heading::Right | Heading::Left)
    }

    /// Whether this is the preferred direction of the matching system.
    pub fn is_preferred(self) -> bool {
        matches!(self, Heading::Right | Heading::Down)
    }
}

/// Dark object on white, or light object on black.
pub fn polarity_grays(dark: bool) -> (u8, u8) {
    if dark {
        (0, 255)
    } else {
        (255, 0)
    }
}

/// A bar crossing the clean 320×180 field.
pub fn clean_translation(dark: bool, heading: Heading) -> SceneSpec {
    let (obj, bg) = polarity_grays(dark);
    let (rows, cols) = (CLEAN_ROWS, CLEAN_COLS);
    let margin = 20.0;
    let v = CLEAN_SPEED;
    let (shape, motion, travel) = if heading.is_horizontal() {
        let (w, h) = (BAR_THICKNESS, BAR_LENGTH);
        let y0 = ((rows - h) / 2) as f64;
        let travel = cols as f64 - w as f64 - 2.0 * margin;
        let (x0, vx) = match heading {
            Heading::Right => (margin, v),
            _ => (cols as f64 - w as f64 - margin, -v),
        };
        (
            ObjectShape::Bar {
                width: w,
                height: h,
            },
            Motion::Translate {
                x0,
                y0,
                vx,
                vy: 0.0,
            },
            travel,
        )
    } else {
        let (w, h) = (BAR_LENGTH, BAR_THICKNESS);
        let x0 = ((cols - w) / 2) as f64;
        let travel = rows as f64 - h as f64 - 2.0 * margin;
        let (y0, vy) = match heading {
            Heading::Down => (margin, v),
            _ => (rows as f64 - h as f64 - margin, -v),
        };
        (
            ObjectShape::Bar {
                width: w,
                height: h,
            },
            Motion::Translate {
                x0,
                y0,
                vx: 0.0,
                vy,
            },
            travel,
        )
    };
    SceneSpec {
        name: format!(
            "clean-translate-{}-{}",
            if dark { "dark" } else { "light" },
            heading.tag()
        ),
        rows,
        cols,
        shape,
        object_gray: obj,
        background: Background::Uniform(bg),
        motion,
        bg_shift: 0.0,
        duration: (travel / v).floor() as usize + 1,
    }
}

/// A centered square expanding (`looming`) or contracting on a clean field.
pub fn clean_depth(dark: bool, looming: bool) -> SceneSpec {
    let (obj, bg) = polarity_grays(dark);
    depth_scene(
        format!(
            "clean-{}-{}",
            if looming { "loom" } else { "recede" },
            if dark { "dark" } else { "light" }
        ),
        CLEAN_ROWS,
        CLEAN_COLS,
        obj,
        Background::Uniform(bg),
        looming,
        0.0,
    )
}

fn depth_scene(
    name: String,
    rows: usize,
    cols: usize,
    obj: u8,
    background: Background,
    looming: bool,
    bg_shift: f64,
) -> SceneSpec {
    let (cx, cy) = (cols as f64 / 2.0, rows as f64 / 2.0);
    let steps = ((LOOM_MAX_HALF - LOOM_MIN_HALF) / LOOM_RATE).floor() as usize;
    let motion = if looming {
        Motion::Loom {
            cx,
            cy,
            half0: LOOM_MIN_HALF,
            rate: LOOM_RATE,
        }
    } else {
        Motion::Recede {
            cx,
            cy,
            half0: LOOM_MAX_HALF,
            rate: LOOM_RATE,
        }
    };
    SceneSpec {
        name,
        rows,
        cols,
        shape: ObjectShape::Square,
        object_gray: obj,
        background,
        motion,
        bg_shift,
        duration: steps + 1,
    }
}

/// A vertical bar crossing the cluttered 540×180 field at `vt` px/frame while
/// the background shifts at `vb`. The bar starts outside the field so the
/// network first sees the background alone.
pub fn clutter_translation(name: String, gray: u8, vt: f64, vb: f64) -> SceneSpec {
    let (rows, cols) = (CLUTTER_ROWS, CLUTTER_COLS);
    let (w, h) = (BAR_THICKNESS, BAR_LENGTH);
    let x0 = -(w as f64) - vt * CLUTTER_LEAD_FRAMES as f64;
    let travel = cols as f64 + w as f64 - x0;
    SceneSpec {
        name,
        rows,
        cols,
        shape: ObjectShape::Bar {
            width: w,
            height: h,
        },
        object_gray: gray,
        background: Background::Textured { seed: TEXTURE_SEED },
        motion: Motion::Translate {
            x0,
            y0: ((rows - h) / 2) as f64,
            vx: vt,
            vy: 0.0,
        },
        bg_shift: vb,
        duration: (travel / vt).ceil() as usize + 1,
    }
}

/// One cell of a parameter sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepCell {
    pub vt: f64,
    pub vb: f64,
    pub gray: u8,
    pub scene: SceneSpec,
}

pub const SWEEP_NAMES: [&str; 2] = ["speed-sweep", "gray-sweep"];

/// Object speed × background speed, dark object.
pub fn speed_sweep() -> Vec<SweepCell> {
    let mut cells = Vec::new();
    for vt in SPEED_SWEEP_VT {
        for vb in SPEED_SWEEP_VB {
            cells.push(SweepCell {
                vt,
                vb,
                gray: 0,
                scene: clutter_translation(format!("speed-sweep-vt{vt}-vb{vb}"), 0, vt, vb),
            });
        }
    }
    cells
}

/// Object gray level × object speed, background at `GRAY_SWEEP_VB`.
pub fn gray_sweep() -> Vec<SweepCell> {
    let mut cells = Vec::new();
    for gray in GRAY_SWEEP_LEVELS {
        for vt in GRAY_SWEEP_VT {
            let vb = GRAY_SWEEP_VB;
            cells.push(SweepCell {
                vt,
                vb,
                gray,
                scene: clutter_translation(format!("gray-sweep-g{gray}-vt{vt}"), gray, vt, vb),
            });
        }
    }
    cells
}

pub fn sweep_suite(name: &str) -> Option<Vec<SweepCell>> {
    match name {
        "speed-sweep" => Some(speed_sweep()),
        "gray-sweep" => Some(gray_sweep()),
        _ => None,
    }
}

/// Every named single scene.
pub fn scene_library() -> Vec<SceneSpec> {
    let mut out = Vec::new();
    for dark in [true, false] {
        for heading in Heading::ALL {
            out.push(clean_translation(dark, heading));
        }
    }
    for looming in [true, false] {
        for dark in [true, false] {
            out.push(clean_depth(dark, looming));
        }
    }
    for (kind, looming) in [("loom", true), ("recede", false)] {
        out.push(depth_scene(
            format!("clutter-shift-{kind}"),
            CLUTTER_ROWS,
            CLUTTER_COLS,
            0,
            Background::Textured { seed: TEXTURE_SEED },
            looming,
            8.0,
        ));
    }
    out.push(clutter_translation(
        "clutter-shift-translate".into(),
        0,
        80.0,
        -8.0,
    ));
    out
}

pub fn scene_by_name(name: &str) -> Option<SceneSpec> {
    scene_library().into_iter().find(|s| s.name == name)
}
