//! Medulla (ON) and lobula (OFF) correlator ensembles.
//!
//! Each local cell is paired with `n_con` same-polarity neighbours at
//! spacings `d, 2d, ..., n_con*d` to its right (HS) and below it (VS).
//! Connection `k` reads its own delayed plane, low-passed with `τ(k)`,
//! so farther pairs see shorter delays. Pairs reaching outside the
//! field contribute nothing.

use crate::config::Params;
use crate::field::Field;

/// Linearly decaying delay constants, `τ_max` for the nearest pair down to
/// `τ_min` for the farthest.
pub fn tau_schedule(p: &Params) -> Vec<f64> {
    let n = p.n_con;
    if n <= 1 {
        return vec![p.tau_s_max; n];
    }
    let span = p.tau_s_max - p.tau_s_min;
    (0..n)
        .map(|k| p.tau_s_max - span * k as f64 / (n - 1) as f64)
        .collect()
}

/// Low-passed copies of one pathway's adapted signal, one per connection.
#[derive(Debug, Clone, PartialEq)]
pub struct DelayBank {
    planes: Vec<Field>,
    gains: Vec<f64>,
}

impl DelayBank {
    pub fn new(p: &Params) -> Self {
        Self {
            planes: vec![Field::zeros(p.rows, p.cols); p.n_con],
            gains: tau_schedule(p)
                .into_iter()
                .map(|t| p.lowpass_gain(t))
                .collect(),
        }
    }

    /// Builds a bank around explicit planes, with gains from `p`.
    pub fn from_planes(planes: Vec<Field>, p: &Params) -> Self {
        assert_eq!(planes.len(), p.n_con, "one plane per connection");
        Self {
            planes,
            gains: tau_schedule(p)
                .into_iter()
                .map(|t| p.lowpass_gain(t))
                .collect(),
        }
    }

    pub fn planes(&self) -> &[Field] {
        &self.planes
    }

    /// Plane of connection `k`, zero-based.
    pub fn plane(&self, k: usize) -> &Field {
        &self.planes[k]
    }

    /// `plane[k] += α(τ(k)) · (f − plane[k])` for every connection.
    pub fn update(&mut self, f: &Field) {
        for (plane, &g) in self.planes.iter_mut().zip(&self.gains) {
            debug_assert!(plane.same_dims(f));
            for (d, &x) in plane.as_mut_slice().iter_mut().zip(f.as_slice()) {
                *d += g * (x - *d);
            }
        }
    }

    pub fn reset(&mut self) {
        self.planes.iter_mut().for_each(|p| p.fill(0.0));
    }

    /// Mirror image of every plane, for symmetry checks.
    pub fn mirrored_horizontally(&self) -> Self {
        Self {
            planes: self
                .planes
                .iter()
                .map(Field::mirrored_horizontally)
                .collect(),
            gains: self.gains.clone(),
        }
    }

    pub fn transposed(&self) -> Self {
        Self {
            planes: self.planes.iter().map(Field::transposed).collect(),
            gains: self.gains.clone(),
        }
    }
}

/// Free-function form of [`DelayBank::update`].
pub fn update_delay_bank(f: &Field, bank_prev: &DelayBank) -> DelayBank {
    let mut bank = bank_prev.clone();
    bank.update(f);
    bank
}

/// Rightward-preferring correlation: `E − w_i·I` with
/// `E = Σ_k D_k(x,y)·F(x+kd,y)` and `I = Σ_k D_k(x+kd,y)·F(x,y)`.
pub fn correlate_horizontal(f: &Field, bank: &DelayBank, p: &Params) -> Field {
    let (rows, cols) = f.dims();
    let mut out = Field::zeros(rows, cols);
    for (k, plane) in bank.planes.iter().enumerate() {
        let s = (k + 1) * p.d;
        if s >= cols {
            break;
        }
        for y in 0..rows {
            let fr = f.row(y);
            let dr = plane.row(y);
            let o = &mut out.as_mut_slice()[y * cols..(y + 1) * cols];
            for x in 0..cols - s {
                o[x] += dr[x] * fr[x + s] - p.w_i * (dr[x + s] * fr[x]);
            }
        }
    }
    out
}

/// Downward-preferring correlation, the vertical analogue of
/// [`correlate_horizontal`].
pub fn correlate_vertical(f: &Field, bank: &DelayBank, p: &Params) -> Field {
    let (rows, cols) = f.dims();
    let mut out = Field::zeros(rows, cols);
    for (k, plane) in bank.planes.iter().enumerate() {
        let s = (k + 1) * p.d;
        if s >= rows {
            break;
        }
        for y in 0..rows - s {
            let (f0, f1) = (f.row(y), f.row(y + s));
            let (d0, d1) = (plane.row(y), plane.row(y + s));
            let o = &mut out.as_mut_slice()[y * cols..(y + 1) * cols];
            for x in 0..cols {
                o[x] += d0[x] * f1[x] - p.w_i * (d1[x] * f0[x]);
            }
        }
    }
    out
}

/// Per-pixel outputs of the four directional ensembles.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelatorOutput {
    pub me_hs: Field,
    pub me_vs: Field,
    pub lo_hs: Field,
    pub lo_vs: Field,
}

/// Delay banks of both pathways.
#[derive(Debug, Clone)]
pub struct DirectionalLayer {
    on: DelayBank,
    off: DelayBank,
}

impl DirectionalLayer {
    pub fn new(p: &Params) -> Self {
        Self {
            on: DelayBank::new(p),
            off: DelayBank::new(p),
        }
    }

    /// Correlates the current adapted signals against the delay banks as
    /// they stood after the previous frame, then advances the banks.
    pub fn step(&mut self, f_on: &Field, f_off: &Field, p: &Params) -> CorrelatorOutput {
        let out = CorrelatorOutput {
            me_hs: correlate_horizontal(f_on, &self.on, p),
            me_vs: correlate_vertical(f_on, &self.on, p),
            lo_hs: correlate_horizontal(f_off, &self.off, p),
            lo_vs: correlate_vertical(f_off, &self.off, p),
        };
        self.on.update(f_on);
        self.off.update(f_off);
        out
    }

    pub fn reset(&mut self) {
        self.on.reset();
        self.off.reset();
    }
}
