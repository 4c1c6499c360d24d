//! Frame-by-frame stepper chaining retina, lamina, directional layers and
//! the LPTC readout.

use crate::config::{Ablation, Params};
use crate::directional::DirectionalLayer;
use crate::error::{check_dims, Error, Result};
use crate::lamina::Lamina;
use crate::lptc::{Lptc, NetworkOutput};
use crate::retina::{LuminanceFrame, Retina};

/// One network instance. `step` must be called in frame order.
#[derive(Debug, Clone)]
pub struct Pipeline {
    params: Params,
    retina: Retina,
    lamina: Lamina,
    directional: DirectionalLayer,
    lptc: Lptc,
    frames: u64,
    last_index: Option<u64>,
}

impl Pipeline {
    /// Validates `params` and builds a zeroed network.
    pub fn new(params: Params) -> Result<Self> {
        let params = params.validate()?;
        Ok(Self {
            retina: Retina::new(&params),
            lamina: Lamina::new(&params),
            directional: DirectionalLayer::new(&params),
            lptc: Lptc::default(),
            frames: 0,
            last_index: None,
            params,
        })
    }

    pub fn params(&self) -> &Params {
        &self.params
    }

    /// Number of frames processed since construction or the last reset.
    pub fn frames_processed(&self) -> u64 {
        self.frames
    }

    pub fn step(&mut self, frame: &LuminanceFrame) -> Result<NetworkOutput> {
        check_dims(self.params.dims(), frame.dims())?;
        if let Some(last) = self.last_index {
            if frame.index <= last {
                return Err(Error::FrameRegression {
                    last,
                    got: frame.index,
                });
            }
        }
        let p = &self.params;
        let photo = self.retina.step(frame, p)?;
        let (f_on, f_off) = self.lamina.step(&photo, p)?;
        let corr = self.directional.step(&f_on, &f_off, p);
        let out = self.lptc.step(frame.index, &corr, p);
        self.frames += 1;
        self.last_index = Some(frame.index);
        Ok(out)
    }

    /// Runs a whole sequence, stopping at the first error.
    pub fn run<'a>(
        &mut self,
        frames: impl IntoIterator<Item = &'a LuminanceFrame>,
    ) -> Result<Vec<NetworkOutput>> {
        frames.into_iter().map(|f| self.step(f)).collect()
    }

    pub fn reset(&mut self) {
        self.retina.reset();
        self.lamina.reset();
        self.directional.reset();
        self.lptc.reset();
        self.frames = 0;
        self.last_index = None;
    }

    pub fn set_ablation(&mut self, mode: Ablation) {
        self.params.ablation = mode;
    }

    pub fn ablation(&self) -> Ablation {
        self.params.ablation
    }
}
