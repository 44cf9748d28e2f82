use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GridScale {
    Log,
    Linear,
}

/// A sampling grid description: `count` points from `min` to `max`
/// inclusive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub min: f64,
    pub max: f64,
    pub count: usize,
    pub scale: GridScale,
}

impl GridSpec {
    pub fn log(min: f64, max: f64, count: usize) -> Self {
        GridSpec {
            min,
            max,
            count,
            scale: GridScale::Log,
        }
    }

    /// 200 log-spaced points in `[0.01, 100]`.
    pub fn standard() -> Self {
        GridSpec::log(0.01, 100.0, 200)
    }

    pub fn points(&self) -> Result<Vec<f64>> {
        if !(self.min > 0.0 && self.max.is_finite()) {
            return Err(Error::Domain(format!(
                "grid minimum must be positive, got {}",
                self.min
            )));
        }
        match self.count {
            0 => return Ok(Vec::new()),
            1 => return Ok(vec![self.min]),
            _ => {}
        }
        if !(self.max > self.min) {
            return Err(Error::Domain(format!(
                "grid maximum {} must exceed minimum {}",
                self.max, self.min
            )));
        }
        let last = (self.count - 1) as f64;
        let mut pts: Vec<f64> = (0..self.count)
            .map(|i| {
                let f = i as f64 / last;
                match self.scale {
                    GridScale::Log => self.min * (self.max / self.min).powf(f),
                    GridScale::Linear => self.min + (self.max - self.min) * f,
                }
            })
            .collect();
        pts[self.count - 1] = self.max;
        Ok(pts)
    }
}

/// `count` log-spaced points in `[min, max]`.
pub fn log_grid(min: f64, max: f64, count: usize) -> Result<Vec<f64>> {
    GridSpec::log(min, max, count).points()
}
