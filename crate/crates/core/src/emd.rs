//! Fully balanced two-tap Reichardt detector with a logarithmic readout,
//! used as a comparison model.

use crate::error::{check_dims, Result};
use crate::field::Field;
use crate::retina::LuminanceFrame;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EmdParams {
    pub rows: usize,
    pub cols: usize,
    pub frame_rate: f64,
    /// Sampling base, pixels.
    pub d: usize,
    /// Delay low-pass time constant, ms.
    pub tau_lp: f64,
}

impl EmdParams {
    pub fn new(rows: usize, cols: usize, d: usize) -> Self {
        Self {
            rows,
            cols,
            frame_rate: 30.0,
            d,
            tau_lp: 40.0,
        }
    }

    fn gain(&self) -> f64 {
        let dt = 1000.0 / self.frame_rate;
        dt / (self.tau_lp + dt)
    }
}

/// `sgn(r)·ln(1 + |r|)`.
pub fn log_readout(r: f64) -> f64 {
    r.signum() * r.abs().ln_1p()
}

/// Raw opponent sums `(r_hs, r_vs)` of a delayed and an undelayed plane.
pub fn opponent_sums(delayed: &Field, current: &Field, d: usize) -> (f64, f64) {
    let (rows, cols) = current.dims();
    let mut hs = 0.0;
    let mut vs = 0.0;
    for y in 0..rows {
        let (lp, l) = (delayed.row(y), current.row(y));
        if d < cols {
            for x in 0..cols - d {
                hs += lp[x] * l[x + d] - lp[x + d] * l[x];
            }
        }
        if y + d < rows {
            let (lp1, l1) = (delayed.row(y + d), current.row(y + d));
            for x in 0..cols {
                vs += lp[x] * l1[x] - lp1[x] * l[x];
            }
        }
    }
    (hs, vs)
}

/// Detector state: previous frame and the low-passed temporal change.
#[derive(Debug, Clone)]
pub struct EmdState {
    params: EmdParams,
    prev: Option<Field>,
    lowpass: Field,
}

impl EmdState {
    pub fn new(params: EmdParams) -> Self {
        Self {
            params,
            prev: None,
            lowpass: Field::zeros(params.rows, params.cols),
        }
    }

    pub fn params(&self) -> &EmdParams {
        &self.params
    }

    /// Returns the log-compressed `(hs, vs)` responses for this frame.
    ///
    /// Photoreceptor input is the frame-to-frame luminance change, zero on
    /// the first frame.
    pub fn step(&mut self, frame: &LuminanceFrame) -> Result<(f64, f64)> {
        check_dims((self.params.rows, self.params.cols), frame.dims())?;
        let curr = frame.data();
        let change = match &self.prev {
            Some(prev) => curr.zip_map(prev, |a, b| a - b),
            None => Field::zeros(self.params.rows, self.params.cols),
        };
        let g = self.params.gain();
        for (d, &x) in self
            .lowpass
            .as_mut_slice()
            .iter_mut()
            .zip(change.as_slice())
        {
            *d += g * (x - *d);
        }
        self.prev = Some(curr.clone());
        let (hs, vs) = opponent_sums(&self.lowpass, &change, self.params.d);
        Ok((log_readout(hs), log_readout(vs)))
    }

    pub fn reset(&mut self) {
        self.prev = None;
        self.lowpass.fill(0.0);
    }
}
