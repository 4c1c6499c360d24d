//! Photoreceptor layer: temporal high-pass of luminance with a decaying
//! residual of past outputs.

use std::collections::VecDeque;

use crate::config::Params;
use crate::error::{check_dims, Error, Result};
use crate::field::Field;

/// One grayscale frame with values in `[0, 255]`.
#[derive(Debug, Clone, PartialEq)]
pub struct LuminanceFrame {
    pub index: u64,
    data: Field,
}

impl LuminanceFrame {
    pub fn new(index: u64, data: Field) -> Result<Self> {
        for y in 0..data.rows() {
            for (x, &v) in data.row(y).iter().enumerate() {
                if !(0.0..=255.0).contains(&v) {
                    return Err(Error::LuminanceOutOfRange { x, y, value: v });
                }
            }
        }
        Ok(Self { index, data })
    }

    pub fn from_u8(index: u64, rows: usize, cols: usize, pixels: &[u8]) -> Self {
        assert_eq!(pixels.len(), rows * cols);
        Self {
            index,
            data: Field::from_vec(rows, cols, pixels.iter().map(|&p| p as f64).collect()),
        }
    }

    pub fn data(&self) -> &Field {
        &self.data
    }

    pub fn dims(&self) -> (usize, usize) {
        self.data.dims()
    }

    /// Gray levels quantized to bytes (values are already in range).
    pub fn to_u8(&self) -> Vec<u8> {
        self.data
            .as_slice()
            .iter()
            .map(|&v| v.round().clamp(0.0, 255.0) as u8)
            .collect()
    }
}

/// `a_i = 1 / (1 + exp(u*i))`.
pub fn decay_coefficient(i: usize, u: f64) -> f64 {
    1.0 / (1.0 + (u * i as f64).exp())
}

/// Past high-pass outputs, most recent first, capped at `n_p`.
#[derive(Debug, Clone, PartialEq)]
pub struct ResidualBuffer {
    capacity: usize,
    history: VecDeque<Field>,
}

impl ResidualBuffer {
    pub fn new(capacity: usize) -> Self {
        Self {
            capacity,
            history: VecDeque::with_capacity(capacity),
        }
    }

    pub fn len(&self) -> usize {
        self.history.len()
    }

    pub fn is_empty(&self) -> bool {
        self.history.is_empty()
    }

    /// `i`-th most recent output, `i = 1` being the previous frame.
    pub fn lag(&self, i: usize) -> Option<&Field> {
        i.checked_sub(1).and_then(|k| self.history.get(k))
    }

    pub fn push(&mut self, p: Field) {
        if self.capacity == 0 {
            return;
        }
        if self.history.len() == self.capacity {
            self.history.pop_back();
        }
        self.history.push_front(p);
    }

    pub fn clear(&mut self) {
        self.history.clear();
    }
}

/// `P(t) = L(t) - L(t-1) + Σ_{i=1..n_p} a_i P(t-i)`.
///
/// The caller pushes the result into `buf` afterwards.
pub fn high_pass(
    curr: &LuminanceFrame,
    prev: &LuminanceFrame,
    buf: &ResidualBuffer,
    p: &Params,
) -> Result<Field> {
    check_dims(p.dims(), curr.dims())?;
    check_dims(p.dims(), prev.dims())?;
    let mut out = curr.data.zip_map(&prev.data, |a, b| a - b);
    for i in 1..=p.n_p {
        let Some(past) = buf.lag(i) else { break };
        check_dims(p.dims(), past.dims())?;
        let a = decay_coefficient(i, p.u);
        for (o, &v) in out.as_mut_slice().iter_mut().zip(past.as_slice()) {
            *o += a * v;
        }
    }
    Ok(out)
}

/// Stateful retina: remembers the previous frame and the residual history.
#[derive(Debug, Clone)]
pub struct Retina {
    prev: Option<LuminanceFrame>,
    buffer: ResidualBuffer,
}

impl Retina {
    pub fn new(p: &Params) -> Self {
        Self {
            prev: None,
            buffer: ResidualBuffer::new(p.n_p),
        }
    }

    /// The first frame is differenced against itself, giving `P ≡ 0`.
    pub fn step(&mut self, frame: &LuminanceFrame, p: &Params) -> Result<Field> {
        let prev = self.prev.as_ref().unwrap_or(frame);
        let out = high_pass(frame, prev, &self.buffer, p)?;
        self.buffer.push(out.clone());
        self.prev = Some(frame.clone());
        Ok(out)
    }

    pub fn reset(&mut self) {
        self.prev = None;
        self.buffer.clear();
    }
}
