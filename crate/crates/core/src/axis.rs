use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Uniform lattice `start + k·step`, `k < len`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Axis {
    pub start: f64,
    pub step: f64,
    pub len: usize,
}

impl Axis {
    pub fn new(start: f64, step: f64, len: usize) -> Result<Self> {
        if len == 0 {
            return Err(Error::EmptyGrid);
        }
        if !start.is_finite() || !(step > 0.0) || !step.is_finite() {
            return Err(Error::InvalidAxis(format!("start={start}, step={step}")));
        }
        Ok(Axis { start, step, len })
    }

    /// `len` points from `lo` to `hi` inclusive.
    pub fn linspace(lo: f64, hi: f64, len: usize) -> Result<Self> {
        match len {
            0 => Err(Error::EmptyGrid),
            1 => Axis::new(lo, 1.0, 1),
            _ if !(hi > lo) => Err(Error::InvalidAxis(format!("need lo < hi, got [{lo}, {hi}]"))),
            _ => Axis::new(lo, (hi - lo) / (len - 1) as f64, len),
        }
    }

    pub fn value(&self, k: usize) -> f64 {
        self.start + k as f64 * self.step
    }

    pub fn end(&self) -> f64 {
        self.value(self.len - 1)
    }

    pub fn values(&self) -> Vec<f64> {
        (0..self.len).map(|k| self.value(k)).collect()
    }

    /// Same lattice up to a relative tolerance on start and step.
    pub fn matches(&self, other: &Axis) -> bool {
        let tol = 1e-12 * (self.step.abs() + self.start.abs()).max(1.0);
        self.len == other.len
            && (self.start - other.start).abs() <= tol
            && (self.step - other.step).abs() <= tol
    }

    /// Fractional index of `x`.
    pub fn position(&self, x: f64) -> f64 {
        (x - self.start) / self.step
    }

    /// Index of the lattice point closest to `x`, clamped to the axis.
    pub fn nearest(&self, x: f64) -> usize {
        let p = self.position(x).round();
        if p <= 0.0 {
            0
        } else {
            (p as usize).min(self.len - 1)
        }
    }
}
