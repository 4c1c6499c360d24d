//! Lamina layer: center-surround band-pass with polarity selectivity,
//! ON/OFF rectification and the fast-depolarizing slow-repolarizing
//! (FDSR) adaptation.

use std::f64::consts::PI;

use crate::config::Params;
use crate::error::{check_dims, Result};
use crate::field::Field;

/// Isotropic 2D Gaussian density.
pub fn gaussian_density(x: f64, y: f64, sigma: f64) -> f64 {
    let s2 = sigma * sigma;
    (-(x * x + y * y) / (2.0 * s2)).exp() / (2.0 * PI * s2)
}

/// Truncated, renormalized Gaussian kernel of radius `ceil(3σ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Kernel {
    sigma: f64,
    radius: usize,
    /// `(2r+1)²` taps, row-major.
    taps: Vec<f64>,
    /// Normalized 1D profile; `taps` is its outer product with itself.
    profile: Vec<f64>,
}

impl Kernel {
    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn width(&self) -> usize {
        2 * self.radius + 1
    }

    /// Tap at offset `(dx, dy)` from the center; zero outside the support.
    pub fn tap(&self, dx: isize, dy: isize) -> f64 {
        let r = self.radius as isize;
        if dx.abs() > r || dy.abs() > r {
            return 0.0;
        }
        self.taps[((dy + r) * (2 * r + 1) + dx + r) as usize]
    }

    pub fn taps(&self) -> &[f64] {
        &self.taps
    }

    pub fn profile(&self) -> &[f64] {
        &self.profile
    }
}

/// Builds the kernel from the 2D density, then renormalizes to unit sum.
pub fn gaussian_kernel(sigma: f64) -> Kernel {
    assert!(sigma.is_finite() && sigma > 0.0, "sigma must be positive");
    let radius = ((3.0 * sigma).ceil() as usize).max(1);
    let r = radius as isize;
    let w = 2 * radius + 1;

    let mut taps = Vec::with_capacity(w * w);
    for dy in -r..=r {
        for dx in -r..=r {
            taps.push(gaussian_density(dx as f64, dy as f64, sigma));
        }
    }
    let total: f64 = taps.iter().sum();
    taps.iter_mut().for_each(|t| *t /= total);

    let mut profile: Vec<f64> = (-r..=r)
        .map(|x| (-(x * x) as f64 / (2.0 * sigma * sigma)).exp())
        .collect();
    let total: f64 = profile.iter().sum();
    profile.iter_mut().for_each(|t| *t /= total);

    Kernel {
        sigma,
        radius,
        taps,
        profile,
    }
}

/// Zero-padded separable convolution with `k`.
pub fn convolve(src: &Field, k: &Kernel) -> Field {
    let (rows, cols) = src.dims();
    let r = k.radius as isize;
    let prof = &k.profile;

    let mut tmp = Field::zeros(rows, cols);
    for y in 0..rows {
        let row = src.row(y);
        let out = &mut tmp.as_mut_slice()[y * cols..(y + 1) * cols];
        for (x, o) in out.iter_mut().enumerate() {
            let lo = (x as isize - r).max(0) as usize;
            let hi = (x as isize + r).min(cols as isize - 1) as usize;
            let mut acc = 0.0;
            for (xi, &v) in row.iter().enumerate().take(hi + 1).skip(lo) {
                acc += prof[(xi as isize - x as isize + r) as usize] * v;
            }
            *o = acc;
        }
    }

    let mut out = Field::zeros(rows, cols);
    let t = tmp.as_slice();
    let o = out.as_mut_slice();
    for y in 0..rows {
        let lo = (y as isize - r).max(0) as usize;
        let hi = (y as isize + r).min(rows as isize - 1) as usize;
        let dst = &mut o[y * cols..(y + 1) * cols];
        for yi in lo..=hi {
            let w = prof[(yi as isize - y as isize + r) as usize];
            let src_row = &t[yi * cols..(yi + 1) * cols];
            for (d, &s) in dst.iter_mut().zip(src_row) {
                *d += w * s;
            }
        }
    }
    out
}

/// Polarity-selective difference of the two blurred values at one pixel.
///
/// Mixed-sign pixels carry no defined polarity and yield 0.
pub fn dog_polarity(pe: f64, pi: f64) -> f64 {
    if pe >= 0.0 && pi >= 0.0 {
        (pe - pi).abs()
    } else if pe < 0.0 && pi < 0.0 {
        -(pe - pi).abs()
    } else {
        0.0
    }
}

/// Center-surround band-pass of the high-pass field.
pub fn dog_filter(p_field: &Field, k_e: &Kernel, k_i: &Kernel) -> Field {
    debug_assert!(k_i.sigma > k_e.sigma);
    let pe = convolve(p_field, k_e);
    let pi = convolve(p_field, k_i);
    pe.zip_map(&pi, dog_polarity)
}

/// ON and OFF rectifier outputs of the lamina cells.
#[derive(Debug, Clone, PartialEq)]
pub struct PolarityPair {
    pub on: Field,
    pub off: Field,
}

impl PolarityPair {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            on: Field::zeros(rows, cols),
            off: Field::zeros(rows, cols),
        }
    }
}

/// Half-wave rectification with a `sigma_l` fraction of the previous
/// rectifier outputs passed through.
pub fn half_wave_split(la: &Field, prev: &PolarityPair, sigma_l: f64) -> Result<PolarityPair> {
    check_dims(la.dims(), prev.on.dims())?;
    check_dims(la.dims(), prev.off.dims())?;
    let on = la.zip_map(&prev.on, |v, p| (v + v.abs()) / 2.0 + sigma_l * p);
    let off = la.zip_map(&prev.off, |v, p| (v - v.abs()).abs() / 2.0 + sigma_l * p);
    Ok(PolarityPair { on, off })
}

/// One FDSR low-pass update of the delayed plane.
///
/// Per pixel the fast constant is used where the input did not fall since
/// the previous frame, the slow one where it fell.
pub fn fdsr_step(la_prime: &Field, state_prev: &Field, d_prev: &Field, p: &Params) -> Field {
    debug_assert!(la_prime.same_dims(state_prev) && la_prime.same_dims(d_prev));
    let fast = p.lowpass_gain(p.tau_fast);
    let slow = p.lowpass_gain(p.tau_slow);
    let mut out = d_prev.clone();
    for ((d, &x), &prev) in out
        .as_mut_slice()
        .iter_mut()
        .zip(la_prime.as_slice())
        .zip(state_prev.as_slice())
    {
        let gain = if x >= prev { fast } else { slow };
        *d += gain * (x - *d);
    }
    out
}

/// `F = LA' - D`.
pub fn fdsr_subtract(la_prime: &Field, d: &Field) -> Field {
    la_prime.zip_map(d, |a, b| a - b)
}

/// Output transmitted by a polarity cell: the adapted signal with the
/// post-offset undershoot cut at zero.
pub fn transient_output(f: &Field) -> Field {
    f.map(|v| v.max(0.0))
}

/// Persistent FDSR planes for both polarities.
#[derive(Debug, Clone, PartialEq)]
pub struct FdsrState {
    pub d_on: Field,
    pub d_off: Field,
    pub prev_on: Field,
    pub prev_off: Field,
}

impl FdsrState {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            d_on: Field::zeros(rows, cols),
            d_off: Field::zeros(rows, cols),
            prev_on: Field::zeros(rows, cols),
            prev_off: Field::zeros(rows, cols),
        }
    }

    /// Advances both channels one frame and returns the adapted `(F_on, F_off)`.
    pub fn step(&mut self, la: &PolarityPair, p: &Params) -> (Field, Field) {
        self.d_on = fdsr_step(&la.on, &self.prev_on, &self.d_on, p);
        self.d_off = fdsr_step(&la.off, &self.prev_off, &self.d_off, p);
        self.prev_on.clone_from(&la.on);
        self.prev_off.clone_from(&la.off);
        (
            fdsr_subtract(&la.on, &self.d_on),
            fdsr_subtract(&la.off, &self.d_off),
        )
    }
}

/// Stateful lamina layer.
#[derive(Debug, Clone)]
pub struct Lamina {
    k_e: Kernel,
    k_i: Kernel,
    rectified: PolarityPair,
    fdsr: FdsrState,
}

impl Lamina {
    pub fn new(p: &Params) -> Self {
        Self {
            k_e: gaussian_kernel(p.sigma_e),
            k_i: gaussian_kernel(p.sigma_i),
            rectified: PolarityPair::zeros(p.rows, p.cols),
            fdsr: FdsrState::zeros(p.rows, p.cols),
        }
    }

    /// Band-pass, rectification, ablation masking, then FDSR.
    /// Returns the transmitted `(F_on, F_off)` planes, never negative.
    pub fn step(&mut self, p_field: &Field, p: &Params) -> Result<(Field, Field)> {
        check_dims(p.dims(), p_field.dims())?;
        let la = dog_filter(p_field, &self.k_e, &self.k_i);
        let mut pair = half_wave_split(&la, &self.rectified, p.sigma_l)?;
        if !p.ablation.on_active() {
            pair.on.fill(0.0);
        }
        if !p.ablation.off_active() {
            pair.off.fill(0.0);
        }
        let (f_on, f_off) = self.fdsr.step(&pair, p);
        self.rectified = pair;
        Ok((transient_output(&f_on), transient_output(&f_off)))
    }

    pub fn reset(&mut self) {
        let (rows, cols) = self.rectified.on.dims();
        self.rectified = PolarityPair::zeros(rows, cols);
        self.fdsr = FdsrState::zeros(rows, cols);
    }
}
