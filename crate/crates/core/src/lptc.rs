//! Lobula plate tangential cells: wide-field integration, membrane
//! smoothing, sigmoid activation, HS/VS fusion and spiking.

use std::fmt;

use crate::config::Params;
use crate::directional::CorrelatorOutput;
use crate::field::Field;

/// Sum over every cell of the field.
pub fn integrate(field: &Field) -> f64 {
    field.as_slice().iter().sum()
}

pub fn membrane_low_pass(lp: f64, prev: f64, p: &Params) -> f64 {
    prev + p.lowpass_gain(p.tau_mp) * (lp - prev)
}

/// Odd sigmoid scaled by the field area, range `(-0.5, 0.5)` with the
/// default `delta_c`.
pub fn sigmoid_activation(x: f64, p: &Params) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    let scale = p.cols as f64 * p.rows as f64 * p.k_sig;
    // Largest double below 1 keeps the open bound under saturation.
    let logistic = (1.0 / (1.0 + (-x.abs() / scale).exp())).min(1.0 - f64::EPSILON / 2.0);
    x.signum() * (logistic - p.delta_c)
}

pub fn fuse(on_hat: f64, off_hat: f64) -> f64 {
    on_hat + off_hat
}

/// Direction tag attached to a spike train.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    Preferred,
    Null,
    /// Below threshold in either direction.
    Quiet,
}

impl Direction {
    pub fn as_str(self) -> &'static str {
        match self {
            Direction::Preferred => "preferred",
            Direction::Null => "null",
            Direction::Quiet => "none",
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// `floor(exp(K_sp·(|smp| − |T_sp|)))` spikes, tagged with the direction
/// given by the sign of `smp`. Sub-threshold inputs give no spikes.
pub fn spike_count(smp: f64, p: &Params) -> (u32, Direction) {
    let threshold = p.t_sp.abs();
    let dir = if smp >= threshold {
        Direction::Preferred
    } else if smp <= -threshold {
        Direction::Null
    } else {
        return (0, Direction::Quiet);
    };
    let count = (p.k_sp * (smp.abs() - threshold)).exp().floor();
    (count.max(0.0) as u32, dir)
}

/// Membrane potentials of the four LPTC groups.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct LptcPotentials {
    pub on_hs: f64,
    pub on_vs: f64,
    pub off_hs: f64,
    pub off_vs: f64,
}

impl LptcPotentials {
    pub fn integrate(c: &CorrelatorOutput) -> Self {
        Self {
            on_hs: integrate(&c.me_hs),
            on_vs: integrate(&c.me_vs),
            off_hs: integrate(&c.lo_hs),
            off_vs: integrate(&c.lo_vs),
        }
    }

    fn map2(self, other: Self, f: impl Fn(f64, f64) -> f64) -> Self {
        Self {
            on_hs: f(self.on_hs, other.on_hs),
            on_vs: f(self.on_vs, other.on_vs),
            off_hs: f(self.off_hs, other.off_hs),
            off_vs: f(self.off_vs, other.off_vs),
        }
    }

    pub fn smoothed(self, prev: Self, p: &Params) -> Self {
        self.map2(prev, |lp, pr| membrane_low_pass(lp, pr, p))
    }

    pub fn activated(self, p: &Params) -> Self {
        self.map2(self, |x, _| sigmoid_activation(x, p))
    }
}

/// Per-frame readout of the network.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NetworkOutput {
    pub frame: u64,
    pub hs_smp: f64,
    pub vs_smp: f64,
    /// Smoothed, pre-sigmoid potentials.
    pub lp: LptcPotentials,
    /// Per-pathway sigmoid terms.
    pub activation: LptcPotentials,
    pub hs_spikes: u32,
    pub hs_dir: Direction,
    pub vs_spikes: u32,
    pub vs_dir: Direction,
}

/// Stateful readout holding the smoothed potentials.
#[derive(Debug, Clone, Default)]
pub struct Lptc {
    smoothed: LptcPotentials,
}

impl Lptc {
    pub fn step(&mut self, frame: u64, c: &CorrelatorOutput, p: &Params) -> NetworkOutput {
        let raw = LptcPotentials::integrate(c);
        self.smoothed = raw.smoothed(self.smoothed, p);
        let act = self.smoothed.activated(p);
        let hs_smp = fuse(act.on_hs, act.off_hs);
        let vs_smp = fuse(act.on_vs, act.off_vs);
        let (hs_spikes, hs_dir) = spike_count(hs_smp, p);
        let (vs_spikes, vs_dir) = spike_count(vs_smp, p);
        NetworkOutput {
            frame,
            hs_smp,
            vs_smp,
            lp: self.smoothed,
            activation: act,
            hs_spikes,
            hs_dir,
            vs_spikes,
            vs_dir,
        }
    }

    pub fn reset(&mut self) {
        self.smoothed = LptcPotentials::default();
    }
}
