//! Reference GN-model integral, used to validate the closed form.
//!
//! With `u = f₁ - f`, `v = f₂ - f` the per-span link function depends on the
//! product `x = 4π²|β₂|·u·v` only:
//!
//! ```text
//! h(x) = |1 - a·e^{jxL}|² / (α² + x²) = (1 + a² - 2a·cos(xL)) / (α² + x²),   a = e^{-αL}
//! ```
//!
//! so for fixed `u` the inner integral over `v` is `(F(c·u·v₁) - F(c·u·v₀)) / (c·u)`
//! with `F` the antiderivative of `h`. `F` is exact apart from the cosine
//! term, which is tabulated once. The outer integral over `u` uses
//! Gauss–Legendre panels split at every kink of the spectral support and
//! graded geometrically towards `u = 0`, where the integrand grows as `1/|u|`.

use std::f64::consts::PI;

use super::{beta2, ChannelGrid, FiberParams, LinkLoad};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NumericOptions {
    /// Gauss–Legendre nodes per panel. The error estimate compares against a
    /// run with twice as many.
    pub gauss_points: usize,
    /// Geometric panel levels towards `u = 0`.
    pub geometric_levels: usize,
    /// Table points per cosine period in the tabulated antiderivative.
    pub table_points_per_period: usize,
    /// Largest accepted relative difference between the two resolutions.
    pub tolerance: f64,
}

impl Default for NumericOptions {
    fn default() -> Self {
        NumericOptions {
            gauss_points: 12,
            geometric_levels: 48,
            table_points_per_period: 128,
            tolerance: 1e-4,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NumericEta {
    /// η in 1/W² per span.
    pub eta: f64,
    /// Relative difference between the base and refined quadratures.
    pub rel_error: f64,
}

/// Numerically integrated per-span η for `channel` under `load`.
pub fn nli_eta_numeric(
    params: &FiberParams,
    grid: &ChannelGrid,
    load: &LinkLoad,
    channel: usize,
    opts: &NumericOptions,
) -> Result<NumericEta> {
    if !load.contains(channel) {
        return Err(Error::ChannelNotLoaded(channel));
    }
    let gamma = params.gamma_per_w_m();
    if gamma == 0.0 {
        return Ok(NumericEta {
            eta: 0.0,
            rel_error: 0.0,
        });
    }
    let link = LinkFunction::new(params, opts.table_points_per_period);
    let spectrum = Spectrum::new(grid, load, channel);
    let coarse = integrate(&link, &spectrum, opts.gauss_points, opts.geometric_levels);
    let fine = integrate(&link, &spectrum, 2 * opts.gauss_points, opts.geometric_levels + 8);
    let rel_error = ((fine - coarse) / fine).abs();
    if !(rel_error <= opts.tolerance) {
        return Err(Error::NonConvergence {
            estimate: rel_error,
        });
    }
    let bw = grid.symbol_rate_hz();
    Ok(NumericEta {
        eta: 16.0 / 27.0 * gamma * gamma * fine / (bw * bw),
        rel_error,
    })
}

/// Antiderivative of the per-span link function.
struct LinkFunction {
    alpha: f64,
    a: f64,
    span: f64,
    /// 4π²|β₂| in s²/m.
    c: f64,
    step: f64,
    x_max: f64,
    /// Cumulative `∫₀ˣ cos(Lt)/(α²+t²) dt` on a uniform grid.
    cos_table: Vec<f64>,
    cos_inf: f64,
}

impl LinkFunction {
    fn new(params: &FiberParams, per_period: usize) -> Self {
        let alpha = params.alpha_per_m();
        let span = params.span_m();
        let a = (-alpha * span).exp();
        let period = 2.0 * PI / span;
        let step = period / per_period as f64;
        let x_max = 2000.0 * alpha;
        let n = (x_max / step).ceil() as usize + 1;
        let g = |t: f64| (span * t).cos() / (alpha * alpha + t * t);
        let mut cos_table = Vec::with_capacity(n);
        cos_table.push(0.0);
        let mut acc = 0.0;
        // Composite Simpson per table cell.
        for k in 1..n {
            let t0 = (k - 1) as f64 * step;
            let t1 = k as f64 * step;
            acc += step / 6.0 * (g(t0) + 4.0 * g(0.5 * (t0 + t1)) + g(t1));
            cos_table.push(acc);
        }
        LinkFunction {
            alpha,
            a,
            span,
            c: 4.0 * PI * PI * beta2(params).abs(),
            step,
            x_max: (n - 1) as f64 * step,
            cos_table,
            cos_inf: PI * a / (2.0 * alpha),
        }
    }

    fn h0(&self) -> f64 {
        (1.0 - self.a).powi(2) / (self.alpha * self.alpha)
    }

    fn cos_integral(&self, x: f64) -> f64 {
        if x >= self.x_max {
            // Leading term of the tail after integration by parts.
            let al2 = self.alpha * self.alpha;
            return self.cos_inf + (self.span * x).sin() / (self.span * (al2 + x * x));
        }
        let pos = x / self.step;
        let k = pos.floor() as usize;
        let frac = pos - k as f64;
        self.cos_table[k] + frac * (self.cos_table[k + 1] - self.cos_table[k])
    }

    /// `F(x) = ∫₀ˣ h`, odd in `x`.
    fn antiderivative(&self, x: f64) -> f64 {
        let s = x.signum();
        let x = x.abs();
        let al = self.alpha;
        s * ((1.0 + self.a * self.a) / al * (x / al).atan() - 2.0 * self.a * self.cos_integral(x))
    }

    /// `∫_{v0}^{v1} h(c·u·v) dv`.
    fn inner(&self, u: f64, v0: f64, v1: f64) -> f64 {
        let cu = self.c * u;
        if cu.abs() * v0.abs().max(v1.abs()) < 1e-12 * self.alpha {
            return self.h0() * (v1 - v0);
        }
        (self.antiderivative(cu * v1) - self.antiderivative(cu * v0)) / cu
    }
}

/// Occupied rectangular spectra as offsets (in channel steps) from the
/// channel under test.
struct Spectrum {
    offsets: Vec<i64>,
    occupied: Vec<bool>,
    /// Index of offset 0 within `occupied`.
    origin: i64,
    spacing: f64,
    half_width: f64,
}

impl Spectrum {
    fn new(grid: &ChannelGrid, load: &LinkLoad, channel: usize) -> Self {
        let n = grid.channel_count() as i64;
        let ch = channel as i64;
        let offsets: Vec<i64> = load.iter().map(|k| k as i64 - ch).collect();
        let mut occupied = vec![false; (2 * n + 1) as usize];
        for &o in &offsets {
            occupied[(o + n) as usize] = true;
        }
        Spectrum {
            offsets,
            occupied,
            origin: n,
            spacing: grid.spacing_hz(),
            half_width: grid.symbol_rate_hz() / 2.0,
        }
    }

    fn is_occupied(&self, offset: i64) -> bool {
        let idx = offset + self.origin;
        idx >= 0 && (idx as usize) < self.occupied.len() && self.occupied[idx as usize]
    }

    /// `∫ G(f+v)·G(f+u+v)·h dv` over all occupied support, normalised PSD.
    fn inner(&self, link: &LinkFunction, u: f64) -> f64 {
        let mut total = 0.0;
        for &n in &self.offsets {
            let lo = n as f64 * self.spacing - self.half_width;
            let hi = n as f64 * self.spacing + self.half_width;
            // Channels overlapping f+u+v ∈ [u+lo, u+hi].
            let m_lo = ((u + lo - self.half_width) / self.spacing).ceil() as i64;
            let m_hi = ((u + hi + self.half_width) / self.spacing).floor() as i64;
            for m3 in m_lo..=m_hi {
                if !self.is_occupied(m3) {
                    continue;
                }
                let a0 = lo.max(m3 as f64 * self.spacing - self.half_width - u);
                let a1 = hi.min(m3 as f64 * self.spacing + self.half_width - u);
                if a1 > a0 {
                    total += link.inner(u, a0, a1);
                }
            }
        }
        total
    }
}

fn integrate(link: &LinkFunction, spectrum: &Spectrum, points: usize, levels: usize) -> f64 {
    let (nodes, weights) = gauss_legendre(points);
    let s = spectrum.spacing;
    let hw = spectrum.half_width;
    let bw = 2.0 * hw;
    let mut total = 0.0;
    for &m in &spectrum.offsets {
        let lo = m as f64 * s - hw;
        let hi = m as f64 * s + hw;
        let mut cuts = vec![lo, hi];
        for j in m - 2..=m + 2 {
            for p in [j as f64 * s, j as f64 * s - bw, j as f64 * s + bw] {
                if p > lo && p < hi {
                    cuts.push(p);
                }
            }
        }
        if m == 0 {
            for l in 0..levels {
                let p = hw * 0.5f64.powi(l as i32 + 1);
                cuts.push(p);
                cuts.push(-p);
            }
        }
        cuts.sort_by(f64::total_cmp);
        cuts.dedup();
        for w in cuts.windows(2) {
            let (p, q) = (w[0], w[1]);
            let half = 0.5 * (q - p);
            let mid = 0.5 * (p + q);
            for (x, wt) in nodes.iter().zip(&weights) {
                total += wt * half * spectrum.inner(link, mid + half * x);
            }
        }
    }
    total
}

/// Gauss–Legendre nodes and weights on [-1, 1].
pub(crate) fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_legendre_integrates_polynomials() {
        let (x, w) = gauss_legendre(7);
        let s: f64 = w.iter().sum();
        assert!((s - 2.0).abs() < 1e-13);
        let i6: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(6)).sum();
        assert!((i6 - 2.0 / 7.0).abs() < 1e-13);
    }

    #[test]
    fn antiderivative_limit() {
        let p = FiberParams::default();
        let link = LinkFunction::new(&p, 128);
        // F(∞) - F(-∞) = π(1 - a²)/α
        let total = 2.0 * link.antiderivative(1e3);
        let exact = PI * (1.0 - link.a * link.a) / link.alpha;
        assert!((total / exact - 1.0).abs() < 1e-6);
        // Table end matches the closed-form limit.
        assert!((link.cos_integral(link.x_max * 0.999_999) / link.cos_inf - 1.0).abs() < 1e-4);
    }

    #[test]
    fn zero_gamma_gives_zero() {
        let p = FiberParams {
            gamma_per_w_km: 0.0,
            ..Default::default()
        };
        let g = ChannelGrid::with_channels(5);
        let r = nli_eta_numeric(&p, &g, &LinkLoad::full(5), 2, &NumericOptions::default()).unwrap();
        assert_eq!(r.eta, 0.0);
    }

    #[test]
    fn unloaded_channel_is_an_error() {
        let g = ChannelGrid::with_channels(5);
        let r = nli_eta_numeric(
            &FiberParams::default(),
            &g,
            &LinkLoad::from_indices([0]),
            1,
            &NumericOptions::default(),
        );
        assert!(matches!(r, Err(Error::ChannelNotLoaded(1))));
    }
}
