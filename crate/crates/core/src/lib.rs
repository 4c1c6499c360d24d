//! Directionally selective neural network for wide-field translational
//! motion perception.
//!
//! Luminance frames pass through five stages:
//!
//! - [`retina`]: temporal high-pass with a decaying residual;
//! - [`lamina`]: center-surround band-pass, ON/OFF rectification and
//!   fast-depolarizing slow-repolarizing adaptation;
//! - [`directional`]: same-polarity correlator ensembles with a spacing
//!   dependent delay bank, horizontally (HS) and vertically (VS);
//! - [`lptc`]: wide-field integration, sigmoid membrane potential and
//!   spiking output.
//!
//! [`Pipeline`] chains them; [`stimuli`] renders the synthetic test scenes
//! and [`emd`] provides a classic Reichardt detector for comparison.

pub mod config;
pub mod directional;
pub mod emd;
pub mod error;
pub mod field;
pub mod lamina;
pub mod lptc;
pub mod pipeline;
pub mod retina;
pub mod stimuli;

pub use config::{Ablation, Params};
pub use error::{Error, ParamError, Result};
pub use field::Field;
pub use lptc::{Direction, LptcPotentials, NetworkOutput};
pub use pipeline::Pipeline;
pub use retina::LuminanceFrame;
