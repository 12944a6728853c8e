//! Uniform spectral grids in one and two frequency dimensions.
//!
//! Grids store complex amplitude samples on inclusive, evenly spaced axes in
//! rad/s. Interpolation is linear (bilinear in 2-D) and zero outside
//! coverage; norms use the trapezoid rule under the đω = dω/2π measure via
//! [`super::dbar_weight`].

use ndarray::Array2;
use num_complex::Complex64;

use super::dbar_weight;
use crate::error::{Error, Result};

/// Complex samples on a uniform 1-D frequency axis.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralGrid1D {
    start: f64,
    step: f64,
    values: Vec<Complex64>,
}

impl SpectralGrid1D {
    /// Wraps existing samples. The axis is `start + i·step`, `step > 0`,
    /// at least two points, all samples finite.
    pub fn new(start: f64, step: f64, values: Vec<Complex64>) -> Result<Self> {
        if !start.is_finite() || !step.is_finite() || step <= 0.0 {
            return Err(Error::Construction(format!(
                "1-D grid axis must have finite start and positive step (start {start}, step {step})"
            )));
        }
        if values.len() < 2 {
            return Err(Error::Construction(format!(
                "1-D grid needs at least two samples, got {}",
                values.len()
            )));
        }
        if let Some(bad) = values.iter().find(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(Error::Construction(format!(
                "1-D grid contains a non-finite sample {bad}"
            )));
        }
        Ok(SpectralGrid1D {
            start,
            step,
            values,
        })
    }

    /// Samples `f` on `n` points spanning `center ± half_width` inclusive.
    pub fn sampled(
        center: f64,
        half_width: f64,
        n: usize,
        f: impl Fn(f64) -> Complex64,
    ) -> Result<Self> {
        if n < 2 {
            return Err(Error::Construction(format!(
                "1-D grid needs at least two samples, got {n}"
            )));
        }
        if !(half_width > 0.0) || !half_width.is_finite() || !center.is_finite() {
            return Err(Error::Construction(format!(
                "1-D grid window must be finite with positive half-width \
                 (center {center}, half-width {half_width})"
            )));
        }
        let start = center - half_width;
        let step = 2.0 * half_width / (n - 1) as f64;
        let values = (0..n).map(|i| f(start + i as f64 * step)).collect();
        Self::new(start, step, values)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        false // construction guarantees ≥ 2 samples
    }

    pub fn start(&self) -> f64 {
        self.start
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn end(&self) -> f64 {
        self.omega(self.values.len() - 1)
    }

    /// Axis value of sample `i`.
    pub fn omega(&self, i: usize) -> f64 {
        self.start + i as f64 * self.step
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [Complex64] {
        &mut self.values
    }

    /// Linear interpolation; zero outside coverage.
    pub fn sample(&self, omega: f64) -> Complex64 {
        let u = (omega - self.start) / self.step;
        let last = (self.values.len() - 1) as f64;
        if !(0.0..=last).contains(&u) {
            return Complex64::ZERO;
        }
        let i = (u.floor() as usize).min(self.values.len() - 2);
        let frac = u - i as f64;
        self.values[i] * (1.0 - frac) + self.values[i + 1] * frac
    }

    /// ∫|φ|² đω by the trapezoid rule.
    pub fn norm_sq(&self) -> f64 {
        let mut acc = 0.5 * (self.values[0].norm_sqr() + self.values[self.values.len() - 1].norm_sqr());
        for v in &self.values[1..self.values.len() - 1] {
            acc += v.norm_sqr();
        }
        acc * dbar_weight(self.step)
    }

    /// Rescales so that ∫|φ|² đω = 1.
    pub fn normalized(mut self) -> Result<Self> {
        let n = self.norm_sq();
        if !(n > 1e-300) || !n.is_finite() {
            return Err(Error::Construction(format!(
                "cannot normalize a grid with squared norm {n}"
            )));
        }
        let inv = 1.0 / n.sqrt();
        for v in &mut self.values {
            *v *= inv;
        }
        Ok(self)
    }
}

/// Complex samples on a uniform 2-D frequency lattice.
///
/// Axis 0 (rows) is ω, axis 1 (columns) is ω̃; `values[[i, j]]`
/// is the amplitude at `(omega(i), omega_tilde(j))`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralGrid2D {
    start: [f64; 2],
    step: [f64; 2],
    values: Array2<Complex64>,
}

impl SpectralGrid2D {
    pub fn new(start: [f64; 2], step: [f64; 2], values: Array2<Complex64>) -> Result<Self> {
        for axis in 0..2 {
            if !start[axis].is_finite() || !step[axis].is_finite() || step[axis] <= 0.0 {
                return Err(Error::Construction(format!(
                    "2-D grid axis {axis} must have finite start and positive step \
                     (start {}, step {})",
                    start[axis], step[axis]
                )));
            }
            if values.shape()[axis] < 2 {
                return Err(Error::Construction(format!(
                    "2-D grid needs at least two samples per axis, axis {axis} has {}",
                    values.shape()[axis]
                )));
            }
        }
        if values.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(Error::Construction(
                "2-D grid contains a non-finite sample".into(),
            ));
        }
        Ok(SpectralGrid2D {
            start,
            step,
            values,
        })
    }

    /// Samples `f(ω, ω̃)` on an `n × n` lattice spanning `center ± half_width`
    /// on both axes.
    pub fn sampled_square(
        center: f64,
        half_width: f64,
        n: usize,
        f: impl Fn(f64, f64) -> Complex64,
    ) -> Result<Self> {
        Self::sampled([center, center], [half_width, half_width], [n, n], f)
    }

    pub fn sampled(
        center: [f64; 2],
        half_width: [f64; 2],
        n: [usize; 2],
        f: impl Fn(f64, f64) -> Complex64,
    ) -> Result<Self> {
        for axis in 0..2 {
            if n[axis] < 2 {
                return Err(Error::Construction(format!(
                    "2-D grid needs at least two samples per axis, axis {axis} has {}",
                    n[axis]
                )));
            }
            if !(half_width[axis] > 0.0) || !half_width[axis].is_finite() {
                return Err(Error::Construction(format!(
                    "2-D grid half-width on axis {axis} must be positive and finite, got {}",
                    half_width[axis]
                )));
            }
        }
        let start = [center[0] - half_width[0], center[1] - half_width[1]];
        let step = [
            2.0 * half_width[0] / (n[0] - 1) as f64,
            2.0 * half_width[1] / (n[1] - 1) as f64,
        ];
        let values = Array2::from_shape_fn((n[0], n[1]), |(i, j)| {
            f(start[0] + i as f64 * step[0], start[1] + j as f64 * step[1])
        });
        Self::new(start, step, values)
    }

    pub fn shape(&self) -> (usize, usize) {
        let s = self.values.shape();
        (s[0], s[1])
    }

    pub fn start(&self) -> [f64; 2] {
        self.start
    }

    pub fn step(&self) -> [f64; 2] {
        self.step
    }

    pub fn end(&self) -> [f64; 2] {
        let (n0, n1) = self.shape();
        [self.omega(n0 - 1), self.omega_tilde(n1 - 1)]
    }

    pub fn omega(&self, i: usize) -> f64 {
        self.start[0] + i as f64 * self.step[0]
    }

    pub fn omega_tilde(&self, j: usize) -> f64 {
        self.start[1] + j as f64 * self.step[1]
    }

    pub fn values(&self) -> &Array2<Complex64> {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut Array2<Complex64> {
        &mut self.values
    }

    /// Applies `v ← f(ω, ω̃, v)` to every sample.
    pub fn map_in_place(&mut self, f: impl Fn(f64, f64, Complex64) -> Complex64) {
        let start = self.start;
        let step = self.step;
        for ((i, j), v) in self.values.indexed_iter_mut() {
            let w = start[0] + i as f64 * step[0];
            let wt = start[1] + j as f64 * step[1];
            *v = f(w, wt, *v);
        }
    }

    /// Bilinear interpolation; zero outside coverage.
    pub fn sample_bilinear(&self, omega: f64, omega_tilde: f64) -> Complex64 {
        let (n0, n1) = self.shape();
        let u = (omega - self.start[0]) / self.step[0];
        let v = (omega_tilde - self.start[1]) / self.step[1];
        if !(0.0..=(n0 - 1) as f64).contains(&u) || !(0.0..=(n1 - 1) as f64).contains(&v) {
            return Complex64::ZERO;
        }
        let i = (u.floor() as usize).min(n0 - 2);
        let j = (v.floor() as usize).min(n1 - 2);
        let fu = u - i as f64;
        let fv = v - j as f64;
        let w = &self.values;
        w[[i, j]] * ((1.0 - fu) * (1.0 - fv))
            + w[[i + 1, j]] * (fu * (1.0 - fv))
            + w[[i, j + 1]] * ((1.0 - fu) * fv)
            + w[[i + 1, j + 1]] * (fu * fv)
    }

    /// ∫∫|ψ|² đω đω̃ by the 2-D trapezoid rule.
    pub fn norm_sq(&self) -> f64 {
        let (n0, n1) = self.shape();
        let mut acc = 0.0;
        for ((i, j), v) in self.values.indexed_iter() {
            let wi = if i == 0 || i == n0 - 1 { 0.5 } else { 1.0 };
            let wj = if j == 0 || j == n1 - 1 { 0.5 } else { 1.0 };
            acc += wi * wj * v.norm_sqr();
        }
        acc * dbar_weight(self.step[0]) * dbar_weight(self.step[1])
    }

    /// Rescales so that ∫∫|ψ|² đω đω̃ = 1.
    pub fn normalized(mut self) -> Result<Self> {
        let n = self.norm_sq();
        if !(n > 1e-300) || !n.is_finite() {
            return Err(Error::Construction(format!(
                "cannot normalize a grid with squared norm {n}"
            )));
        }
        let inv = 1.0 / n.sqrt();
        self.values.mapv_inplace(|v| v * inv);
        Ok(self)
    }

    /// Exchange of the two frequency arguments: ψᵀ(ω, ω̃) = ψ(ω̃, ω).
    /// The axes swap along with the data.
    pub fn transposed(&self) -> Self {
        SpectralGrid2D {
            start: [self.start[1], self.start[0]],
            step: [self.step[1], self.step[0]],
            values: self.values.t().to_owned(),
        }
    }

    /// True when both axes are the same lattice (needed before comparing a
    /// grid with its transpose sample-by-sample).
    pub fn axes_match(&self) -> bool {
        let (n0, n1) = self.shape();
        n0 == n1
            && (self.start[0] - self.start[1]).abs() <= 1e-9 * self.step[0]
            && (self.step[0] - self.step[1]).abs() <= 1e-12 * self.step[0]
    }

    /// Largest exchange asymmetry |ψ − ψᵀ| relative to the largest sample
    /// magnitude. `None` when the axes do not form a common lattice.
    pub fn symmetry_defect(&self) -> Option<f64> {
        if !self.axes_match() {
            return None;
        }
        let mut peak = 0.0_f64;
        let mut defect = 0.0_f64;
        let n = self.shape().0;
        for i in 0..n {
            for j in i..n {
                let a = self.values[[i, j]];
                let b = self.values[[j, i]];
                peak = peak.max(a.norm()).max(b.norm());
                defect = defect.max((a - b).norm());
            }
        }
        if peak == 0.0 {
            Some(0.0)
        } else {
            Some(defect / peak)
        }
    }
}

/// Result of projecting a 2-D amplitude onto a sum-frequency line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiagonalProjection {
    /// (1/2π)·∫ dω ψ(ω, s − ω).
    pub value: Complex64,
    /// False when the line ω + ω̃ = s misses grid coverage entirely (the
    /// value is then exactly zero).
    pub covered: bool,
}

impl SpectralGrid2D {
    /// Integrates the amplitude along the anti-diagonal ω + ω̃ = `sum`,
    /// under the đω measure: K(s) = ∫ đω ψ(ω, s − ω).
    ///
    /// Sampling walks the grid lines of the finer axis (so one interpolation
    /// direction is exact at interior nodes) and applies the trapezoid rule
    /// on the resulting non-uniform partition, clipped to coverage.
    pub fn diagonal_project(&self, sum: f64) -> DiagonalProjection {
        let end = self.end();
        // ω must lie in the grid's own axis and place ω̃ = s − ω in range.
        let lo = self.start[0].max(sum - end[1]);
        let hi = end[0].min(sum - self.start[1]);
        if !(lo < hi) {
            return DiagonalProjection {
                value: Complex64::ZERO,
                covered: false,
            };
        }

        // Walk whichever axis is finer; along axis 1 substitute ω = s − ω̃
        // (the Jacobian is 1 either way).
        let walk_axis_0 = self.step[0] <= self.step[1];
        let (w_lo, w_hi, step, axis_start) = if walk_axis_0 {
            (lo, hi, self.step[0], self.start[0])
        } else {
            (sum - hi, sum - lo, self.step[1], self.start[1])
        };

        let first_node = ((w_lo - axis_start) / step).ceil() as i64;
        let last_node = ((w_hi - axis_start) / step).floor() as i64;

        let mut points = Vec::with_capacity((last_node - first_node + 3).max(2) as usize);
        points.push(w_lo);
        for k in first_node..=last_node {
            let w = axis_start + k as f64 * step;
            if w > w_lo && w < w_hi {
                points.push(w);
            }
        }
        points.push(w_hi);

        let mut acc = Complex64::ZERO;
        let mut prev_w = points[0];
        let mut prev_v = self.line_sample(walk_axis_0, sum, prev_w);
        for &w in &points[1..] {
            let v = self.line_sample(walk_axis_0, sum, w);
            acc += (prev_v + v) * (0.5 * (w - prev_w));
            prev_w = w;
            prev_v = v;
        }

        DiagonalProjection {
            value: acc * super::INV_TWO_PI,
            covered: true,
        }
    }

    fn line_sample(&self, walk_axis_0: bool, sum: f64, w: f64) -> Complex64 {
        if walk_axis_0 {
            self.sample_bilinear(w, sum - w)
        } else {
            self.sample_bilinear(sum - w, w)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::TAU;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn construction_rejects_bad_axes() {
        assert!(SpectralGrid1D::new(0.0, 0.0, vec![c(1.0); 4]).is_err());
        assert!(SpectralGrid1D::new(0.0, -1.0, vec![c(1.0); 4]).is_err());
        assert!(SpectralGrid1D::new(f64::NAN, 1.0, vec![c(1.0); 4]).is_err());
        assert!(SpectralGrid1D::new(0.0, 1.0, vec![c(1.0)]).is_err());
        assert!(SpectralGrid1D::new(0.0, 1.0, vec![c(1.0), c(f64::NAN)]).is_err());
        assert!(SpectralGrid2D::sampled_square(0.0, 1.0, 1, |_, _| c(1.0)).is_err());
    }

    #[test]
    fn linear_interpolation_on_and_between_nodes() {
        let g = SpectralGrid1D::new(10.0, 2.0, vec![c(1.0), c(3.0), c(7.0)]).unwrap();
        assert_eq!(g.sample(10.0), c(1.0));
        assert_eq!(g.sample(12.0), c(3.0));
        assert_eq!(g.sample(14.0), c(7.0));
        assert_eq!(g.sample(11.0), c(2.0));
        assert_eq!(g.sample(13.0), c(5.0));
        assert_eq!(g.sample(9.999), Complex64::ZERO);
        assert_eq!(g.sample(14.001), Complex64::ZERO);
    }

    #[test]
    fn gaussian_norm_matches_closed_form() {
        // φ(ω) = (σ²/2π)^{−1/4} e^{−(ω−ω₀)²/(4σ²)} has ∫|φ|² đω = 1.
        let sigma = 3.0e13;
        let center = 1.8e15;
        let amp = (sigma * sigma / TAU).powf(-0.25);
        let g = SpectralGrid1D::sampled(center, 8.0 * sigma, 4097, |w| {
            c(amp * (-(w - center).powi(2) / (4.0 * sigma * sigma)).exp())
        })
        .unwrap();
        assert!((g.norm_sq() - 1.0).abs() < 1e-6);
    }

    #[test]
    fn normalization_rescales_to_unit_norm() {
        let g = SpectralGrid1D::sampled(0.0, 4.0, 513, |w| c((-w * w).exp()))
            .unwrap()
            .normalized()
            .unwrap();
        assert!((g.norm_sq() - 1.0).abs() < 1e-12);
        let zero = SpectralGrid1D::new(0.0, 1.0, vec![Complex64::ZERO; 8]).unwrap();
        assert!(zero.normalized().is_err());
    }

    #[test]
    fn bilinear_reproduces_bilinear_functions_exactly() {
        let f = |w: f64, wt: f64| c(2.0 + 3.0 * w - 1.5 * wt + 0.25 * w * wt);
        let g = SpectralGrid2D::sampled([1.0, -2.0], [4.0, 3.0], [9, 7], f).unwrap();
        for &(w, wt) in &[(0.3, -1.1), (-2.9, 0.99), (4.99, -4.99), (1.0, -2.0)] {
            let got = g.sample_bilinear(w, wt);
            assert!((got - f(w, wt)).norm() < 1e-12, "at ({w}, {wt})");
        }
        assert_eq!(g.sample_bilinear(5.01, 0.0), Complex64::ZERO);
        assert_eq!(g.sample_bilinear(0.0, 1.01), Complex64::ZERO);
    }

    #[test]
    fn two_d_norm_matches_separable_product() {
        let sigma = 2.0;
        let amp = (sigma * sigma / TAU).powf(-0.25);
        let phi = move |w: f64| amp * (-w * w / (4.0 * sigma * sigma)).exp();
        let g = SpectralGrid2D::sampled_square(0.0, 8.0 * sigma, 513, |w, wt| {
            c(phi(w) * phi(wt))
        })
        .unwrap();
        assert!((g.norm_sq() - 1.0).abs() < 1e-6);
    }

    #[test]
    fn transpose_swaps_arguments_and_axes() {
        let g = SpectralGrid2D::sampled([0.0, 10.0], [2.0, 3.0], [5, 9], |w, wt| {
            Complex64::new(w, wt)
        })
        .unwrap();
        let t = g.transposed();
        assert_eq!(t.shape(), (9, 5));
        assert_eq!(t.start(), [7.0, -2.0]);
        let (w, wt) = (1.3, 9.2);
        assert!((t.sample_bilinear(wt, w) - g.sample_bilinear(w, wt)).norm() < 1e-12);
    }

    #[test]
    fn symmetry_defect_detects_exchange_asymmetry() {
        let sym = SpectralGrid2D::sampled_square(0.0, 1.0, 33, |w, wt| c(w * wt)).unwrap();
        assert!(sym.symmetry_defect().unwrap() < 1e-15);
        let asym = SpectralGrid2D::sampled_square(0.0, 1.0, 33, |w, wt| c(w - wt + 1.0)).unwrap();
        assert!(asym.symmetry_defect().unwrap() > 0.1);
        let rect = SpectralGrid2D::sampled([0.0, 5.0], [1.0, 1.0], [33, 33], |w, wt| c(w + wt))
            .unwrap();
        assert!(rect.symmetry_defect().is_none());
    }

    /// Reference: for a separable Gaussian ψ = φ(ω)φ(ω̃) centred at ω₀,
    /// K(s) = ∫đω ψ(ω, s−ω) = exp(−(s−2ω₀)²/(8σ²)) by the Gaussian
    /// self-convolution identity, so K(2ω₀) = 1.
    #[test]
    fn diagonal_projection_of_separable_gaussian() {
        let sigma = 1.7e13;
        let w0 = 1.0e15;
        let amp = (sigma * sigma / TAU).powf(-0.25);
        let phi = move |w: f64| amp * (-(w - w0).powi(2) / (4.0 * sigma * sigma)).exp();
        let g = SpectralGrid2D::sampled_square(w0, 6.0 * sigma, 513, |w, wt| c(phi(w) * phi(wt)))
            .unwrap();

        let on_peak = g.diagonal_project(2.0 * w0);
        assert!(on_peak.covered);
        assert!((on_peak.value.re - 1.0).abs() < 5e-5, "{}", on_peak.value);
        assert!(on_peak.value.im.abs() < 1e-12);

        let x = 2.0 * sigma;
        let off = g.diagonal_project(2.0 * w0 + x);
        let want = (-(x * x) / (8.0 * sigma * sigma)).exp();
        assert!((off.value.re - want).abs() < 5e-5);
    }

    #[test]
    fn diagonal_projection_converges_at_second_order() {
        let sigma = 1.0;
        let amp = (sigma * sigma / TAU).powf(-0.25);
        let phi = move |w: f64| amp * (-w * w / (4.0 * sigma * sigma)).exp();
        let err_at = |n: usize| {
            let g = SpectralGrid2D::sampled_square(0.0, 6.0 * sigma, n, |w, wt| {
                c(phi(w) * phi(wt))
            })
            .unwrap();
            (g.diagonal_project(0.7 * sigma).value.re
                - (-(0.7f64 * sigma).powi(2) / (8.0 * sigma * sigma)).exp())
            .abs()
        };
        let (e64, e256) = (err_at(65), err_at(257));
        // Quadrupling resolution should cut the error by ~16; allow slack.
        assert!(e64 / e256 > 8.0, "e64 = {e64:.3e}, e256 = {e256:.3e}");
    }

    #[test]
    fn diagonal_projection_outside_coverage_is_flagged() {
        let g = SpectralGrid2D::sampled_square(100.0, 5.0, 17, |_, _| c(1.0)).unwrap();
        let miss = g.diagonal_project(100.0);
        assert!(!miss.covered);
        assert_eq!(miss.value, Complex64::ZERO);
        let hit = g.diagonal_project(200.0);
        assert!(hit.covered);
    }

    #[test]
    fn diagonal_projection_handles_rectangular_grids() {
        // Constant amplitude: K(s) is 1/2π times the chord length of the
        // line ω + ω̃ = s through the rectangle [0,4] × [0,2].
        let g = SpectralGrid2D::sampled([2.0, 1.0], [2.0, 1.0], [33, 17], |_, _| c(1.0)).unwrap();
        let p = g.diagonal_project(2.0); // chord from (0,2) to (2,0): Δω = 2
        assert!(p.covered);
        assert!((p.value.re - 2.0 / TAU).abs() < 1e-12);
        let q = g.diagonal_project(5.0); // chord from (3,2) to (4,1): Δω = 1
        assert!((q.value.re - 1.0 / TAU).abs() < 1e-12);
    }
}
