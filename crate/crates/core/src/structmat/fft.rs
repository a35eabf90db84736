use std::sync::Arc;

use rustfft::{Fft, FftPlanner};

use super::dense::Scalar;
use super::toeplitz::ToeplitzSpec;
use crate::error::{Error, Result};

/// A Toeplitz matrix embedded in a circulant of power-of-two length, with the
/// circulant's spectrum cached so it can be applied to many vectors.
pub(crate) struct CirculantEmbedding {
    n: usize,
    spectrum: Vec<Scalar>,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl CirculantEmbedding {
    pub(crate) fn new(t: &ToeplitzSpec) -> Self {
        let n = t.n();
        let len = (2 * n - 1).next_power_of_two();
        let mut planner = FftPlanner::new();
        let forward = planner.plan_fft_forward(len);
        let inverse = planner.plan_fft_inverse(len);
        // First column of the circulant: the Toeplitz first column followed by
        // the first row in reverse, with zero padding in between.
        let mut spectrum = vec![Scalar::new(0.0, 0.0); len];
        for i in 0..n {
            spectrum[i] = t.get(-(i as isize));
        }
        for k in 1..n {
            spectrum[len - k] = t.get(k as isize);
        }
        forward.process(&mut spectrum);
        Self {
            n,
            spectrum,
            forward,
            inverse,
        }
    }

    pub(crate) fn apply(&self, x: &[Scalar]) -> Vec<Scalar> {
        let len = self.spectrum.len();
        let mut buf = vec![Scalar::new(0.0, 0.0); len];
        buf[..self.n].copy_from_slice(x);
        self.forward.process(&mut buf);
        for (b, s) in buf.iter_mut().zip(&self.spectrum) {
            *b *= s;
        }
        self.inverse.process(&mut buf);
        let scale = 1.0 / len as f64;
        buf.truncate(self.n);
        buf.iter_mut().for_each(|b| *b *= scale);
        buf
    }
}

/// `T·x` in O(n log n) through circulant embedding.
pub fn toeplitz_matvec(t: &ToeplitzSpec, x: &[Scalar]) -> Result<Vec<Scalar>> {
    if x.len() != t.n() {
        return Err(Error::DimensionMismatch {
            expected: t.n(),
            got: x.len(),
        });
    }
    Ok(CirculantEmbedding::new(t).apply(x))
}
