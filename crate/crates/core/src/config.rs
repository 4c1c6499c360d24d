//! Model parameters, defaults and the `key = value` configuration format.
//!
//! All time constants are in milliseconds; the frame interval is derived
//! from `frame_rate` rather than stored.

use std::fmt;
use std::str::FromStr;

use crate::error::ParamError;

/// Which polarity pathway, if any, is silenced after rectification.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Hash)]
pub enum Ablation {
    #[default]
    Intact,
    OnBlocked,
    OffBlocked,
}

impl Ablation {
    pub const ALL: [Ablation; 3] = [Ablation::Intact, Ablation::OnBlocked, Ablation::OffBlocked];

    pub fn as_str(self) -> &'static str {
        match self {
            Ablation::Intact => "intact",
            Ablation::OnBlocked => "on_blocked",
            Ablation::OffBlocked => "off_blocked",
        }
    }

    pub fn on_active(self) -> bool {
        self != Ablation::OnBlocked
    }

    pub fn off_active(self) -> bool {
        self != Ablation::OffBlocked
    }
}

impl fmt::Display for Ablation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Ablation {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().replace('-', "_").as_str() {
            "intact" => Ok(Ablation::Intact),
            "on_blocked" => Ok(Ablation::OnBlocked),
            "off_blocked" => Ok(Ablation::OffBlocked),
            other => Err(format!(
                "unknown ablation '{other}' (expected intact, on_blocked or off_blocked)"
            )),
        }
    }
}

/// Full parameter record of the network.
#[derive(Debug, Clone, PartialEq)]
pub struct Params {
    pub rows: usize,
    pub cols: usize,
    /// Hz.
    pub frame_rate: f64,
    /// Steepness of the residual decay `a_i = 1 / (1 + exp(u*i))`.
    pub u: f64,
    /// Number of past high-pass outputs kept as residual.
    pub n_p: usize,
    pub sigma_e: f64,
    pub sigma_i: f64,
    /// Fraction of the previous rectifier output passed through.
    pub sigma_l: f64,
    pub tau_fast: f64,
    pub tau_slow: f64,
    /// Connected cells per local unit in each direction.
    pub n_con: usize,
    /// Spacing increment between connected cells, pixels.
    pub d: usize,
    /// Inhibition bias of the correlators.
    pub w_i: f64,
    pub tau_s_min: f64,
    pub tau_s_max: f64,
    pub tau_mp: f64,
    pub k_sig: f64,
    pub delta_c: f64,
    pub k_sp: f64,
    pub t_sp: f64,
    pub ablation: Ablation,
}

impl Params {
    /// Pinned defaults for a `rows × cols` field, validated.
    pub fn default_for(rows: usize, cols: usize) -> Result<Self, ParamError> {
        Self::unchecked_defaults(rows, cols).validate()
    }

    /// Defaults without validation; useful as a base for overrides.
    pub fn unchecked_defaults(rows: usize, cols: usize) -> Self {
        let d = 2;
        Self {
            rows,
            cols,
            frame_rate: 30.0,
            u: 1.0,
            n_p: 2,
            sigma_e: d as f64,
            sigma_i: 2.0 * d as f64,
            sigma_l: 0.1,
            tau_fast: 1.0,
            tau_slow: 100.0,
            n_con: 4,
            d,
            w_i: 0.9,
            tau_s_min: 10.0,
            tau_s_max: 200.0,
            tau_mp: 10.0,
            k_sig: 0.01,
            delta_c: 0.5,
            k_sp: 2.0,
            t_sp: 0.16,
            ablation: Ablation::Intact,
        }
    }

    /// Frame interval in milliseconds.
    pub fn dt(&self) -> f64 {
        1000.0 / self.frame_rate
    }

    /// Gain of the discretized first-order low-pass with time constant `tau` (ms).
    pub fn lowpass_gain(&self, tau: f64) -> f64 {
        let dt = self.dt();
        dt / (tau + dt)
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    /// Checks every invariant, returning the record unchanged on success.
    pub fn validate(self) -> Result<Self, ParamError> {
        if self.rows == 0 || self.cols == 0 {
            return Err(ParamError::EmptyField {
                rows: self.rows,
                cols: self.cols,
            });
        }
        for (name, value) in [
            ("frame_rate", self.frame_rate),
            ("u", self.u),
            ("sigma_e", self.sigma_e),
            ("sigma_i", self.sigma_i),
            ("tau_fast", self.tau_fast),
            ("tau_slow", self.tau_slow),
            ("tau_s_min", self.tau_s_min),
            ("tau_s_max", self.tau_s_max),
            ("tau_mp", self.tau_mp),
            ("k_sig", self.k_sig),
            ("k_sp", self.k_sp),
        ] {
            if !(value.is_finite() && value > 0.0) {
                return Err(ParamError::NotPositive { name, value });
            }
        }
        if self.n_con == 0 {
            return Err(ParamError::NotPositive {
                name: "n_con",
                value: 0.0,
            });
        }
        if self.d == 0 {
            return Err(ParamError::NotPositive {
                name: "d",
                value: 0.0,
            });
        }
        if !(0.0..1.0).contains(&self.sigma_l) {
            return Err(ParamError::OutOfRange {
                name: "sigma_l",
                value: self.sigma_l,
                range: "[0, 1)",
            });
        }
        if !(0.0..=1.0).contains(&self.w_i) {
            return Err(ParamError::OutOfRange {
                name: "w_i",
                value: self.w_i,
                range: "[0, 1]",
            });
        }
        if !self.delta_c.is_finite() {
            return Err(ParamError::OutOfRange {
                name: "delta_c",
                value: self.delta_c,
                range: "finite reals",
            });
        }
        if self.sigma_i <= self.sigma_e {
            return Err(ParamError::SurroundNotBroader {
                sigma_e: self.sigma_e,
                sigma_i: self.sigma_i,
            });
        }
        if self.tau_slow <= self.tau_fast {
            return Err(ParamError::FdsrTausInverted {
                tau_fast: self.tau_fast,
                tau_slow: self.tau_slow,
            });
        }
        if self.tau_s_max < self.tau_s_min {
            return Err(ParamError::TauScheduleInverted {
                min: self.tau_s_min,
                max: self.tau_s_max,
            });
        }
        let reach = self.n_con * self.d;
        let limit = self.rows.min(self.cols);
        if reach >= limit {
            return Err(ParamError::ConnectionsExceedField { reach, limit });
        }
        if !(self.t_sp > 0.0 && self.t_sp < 0.5) {
            return Err(ParamError::ThresholdUnreachable(self.t_sp));
        }
        Ok(self)
    }

    /// Sets one parameter from its textual name and value.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), String> {
        fn num<T: FromStr>(key: &str, v: &str) -> Result<T, String> {
            v.parse()
                .map_err(|_| format!("invalid value '{v}' for '{key}'"))
        }
        let v = value.trim();
        match key.trim() {
            "rows" => self.rows = num(key, v)?,
            "cols" => self.cols = num(key, v)?,
            "frame_rate" => self.frame_rate = num(key, v)?,
            "u" => self.u = num(key, v)?,
            "n_p" => self.n_p = num(key, v)?,
            "sigma_e" => self.sigma_e = num(key, v)?,
            "sigma_i" => self.sigma_i = num(key, v)?,
            "sigma_l" => self.sigma_l = num(key, v)?,
            "tau_fast" => self.tau_fast = num(key, v)?,
            "tau_slow" => self.tau_slow = num(key, v)?,
            "n_con" => self.n_con = num(key, v)?,
            "d" => self.d = num(key, v)?,
            "w_i" => self.w_i = num(key, v)?,
            "tau_s_min" => self.tau_s_min = num(key, v)?,
            "tau_s_max" => self.tau_s_max = num(key, v)?,
            "tau_mp" => self.tau_mp = num(key, v)?,
            "k_sig" => self.k_sig = num(key, v)?,
            "delta_c" => self.delta_c = num(key, v)?,
            "k_sp" => self.k_sp = num(key, v)?,
            "t_sp" => self.t_sp = num(key, v)?,
            "ablation" => self.ablation = v.parse()?,
            other => return Err(format!("unknown key '{other}'")),
        }
        Ok(())
    }

    /// Applies a list of overrides. When `d` changes and neither Gaussian
    /// width is given explicitly, the widths follow it as `d` and `2d`.
    pub fn apply_overrides<'a>(
        &mut self,
        overrides: impl IntoIterator<Item = (usize, &'a str, &'a str)>,
    ) -> Result<(), ParamError> {
        let mut saw_d = false;
        let mut saw_sigma = false;
        for (line, key, value) in overrides {
            self.set(key, value)
                .map_err(|message| ParamError::Config { line, message })?;
            match key.trim() {
                "d" => saw_d = true,
                "sigma_e" | "sigma_i" => saw_sigma = true,
                _ => {}
            }
        }
        if saw_d && !saw_sigma {
            self.sigma_e = self.d as f64;
            self.sigma_i = 2.0 * self.d as f64;
        }
        Ok(())
    }

    /// Applies a configuration text on top of `self`. Does not validate.
    pub fn apply_config_str(&mut self, text: &str) -> Result<(), ParamError> {
        let entries = parse_config(text)?;
        self.apply_overrides(entries.iter().map(|(l, k, v)| (*l, k.as_str(), v.as_str())))
    }
}

/// Splits `key = value` lines; `#` starts a comment. Returns `(line, key, value)`.
pub fn parse_config(text: &str) -> Result<Vec<(usize, String, String)>, ParamError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| ParamError::Config {
            line: line_no,
            message: format!("expected 'key = value', got '{line}'"),
        })?;
        let (key, value) = (key.trim(), value.trim());
        if key.is_empty() || value.is_empty() {
            return Err(ParamError::Config {
                line: line_no,
                message: format!("expected 'key = value', got '{line}'"),
            });
        }
        out.push((line_no, key.to_string(), value.to_string()));
    }
    Ok(out)
}

/// Renders a record in the configuration format accepted by [`parse_config`].
pub fn to_config_string(p: &Params) -> String {
    format!(
        "rows = {}\ncols = {}\nframe_rate = {}\nu = {}\nn_p = {}\nsigma_e = {}\nsigma_i = {}\n\
         sigma_l = {}\ntau_fast = {}\ntau_slow = {}\nn_con = {}\nd = {}\nw_i = {}\n\
         tau_s_min = {}\ntau_s_max = {}\ntau_mp = {}\nk_sig = {}\ndelta_c = {}\nk_sp = {}\n\
         t_sp = {}\nablation = {}\n",
        p.rows,
        p.cols,
        p.frame_rate,
        p.u,
        p.n_p,
        p.sigma_e,
        p.sigma_i,
        p.sigma_l,
        p.tau_fast,
        p.tau_slow,
        p.n_con,
        p.d,
        p.w_i,
        p.tau_s_min,
        p.tau_s_max,
        p.tau_mp,
        p.k_sig,
        p.delta_c,
        p.k_sp,
        p.t_sp,
        p.ablation
    )
}
