//! Lorentzian reservoir: density of states, Fermi factors, power spectra,
//! correlation functions, the bath timescale, the principal-value transform
//! eta, and PSD matrix square roots.
//!
//! Each reservoir couples to one chain site through two channels,
//! channel 1 = a_j and channel 2 = a_j^dag. The power spectra are
//! gamma_11(w) = J_int^2 (1 - f_beta(w)) D(w) and
//! gamma_22(w) = J_int^2 f_beta(-w) D(-w) with D the Lorentzian density
//! of states of width 1/tau_b centered at omega_peak; the cross spectra
//! vanish. Frequency integrals run over the window
//! [peak - 40/tau_b - 20/beta_eff, peak + 40/tau_b + 20/beta_eff] with
//! beta_eff = max(beta, tau_b/10), wide enough that the omega^-2 tails
//! are negligible for every quantity consumed downstream.

use nalgebra::Matrix2;

use crate::{C64, CMatrix, Error, Result};

/// One reservoir attached to one chain site.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BathSpec {
    pub tau_b: f64,
    pub beta: f64,
    pub j_int: f64,
    pub omega_peak: f64,
}

impl BathSpec {
    pub fn new(tau_b: f64, beta: f64, j_int: f64, omega_peak: f64) -> Result<Self> {
        if !(tau_b > 0.0) {
            return Err(Error::InvalidChain(format!("tau_b must be positive, got {tau_b}")));
        }
        if beta < 0.0 {
            return Err(Error::InvalidChain(format!("beta must be nonnegative, got {beta}")));
        }
        if j_int < 0.0 {
            return Err(Error::InvalidChain(format!("j_int must be nonnegative, got {j_int}")));
        }
        Ok(BathSpec { tau_b, beta, j_int, omega_peak })
    }

    /// Frequency window over which all bath integrals are evaluated.
    pub fn frequency_window(&self) -> (f64, f64) {
        let beta_eff = self.beta.max(self.tau_b / 10.0);
        let half = 40.0 / self.tau_b + 20.0 / beta_eff;
        (self.omega_peak - half, self.omega_peak + half)
    }
}

/// Coupling channel of a reservoir site.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Channel {
    /// Channel 1, couples through a_j.
    Annihilation,
    /// Channel 2, couples through a_j^dag.
    Creation,
}

impl Channel {
    pub const BOTH: [Channel; 2] = [Channel::Annihilation, Channel::Creation];
}

/// Lorentzian density of states D(w) = 2/tau_b / (1/tau_b^2 + (w - peak)^2).
pub fn lorentzian_dos(bath: &BathSpec, omega: f64) -> f64 {
    let inv = 1.0 / bath.tau_b;
    2.0 * inv / (inv * inv + (omega - bath.omega_peak).powi(2))
}

/// Fermi-Dirac occupation 1 / (1 + e^{beta w}), chemical potential zero.
pub fn fermi_dirac(beta: f64, omega: f64) -> f64 {
    let x = beta * omega;
    if x > 0.0 {
        let e = (-x).exp();
        e / (1.0 + e)
    } else {
        1.0 / (1.0 + x.exp())
    }
}

/// 2x2 power-spectrum matrix at frequency w; diagonal for this model.
pub fn power_spectrum(bath: &BathSpec, omega: f64) -> Matrix2<f64> {
    Matrix2::new(
        channel_weight(bath, Channel::Annihilation, omega),
        0.0,
        0.0,
        channel_weight(bath, Channel::Creation, omega),
    )
}

/// Scalar spectral weight gamma_{mu mu}(w) of one channel.
pub fn channel_weight(bath: &BathSpec, channel: Channel, omega: f64) -> f64 {
    let j2 = bath.j_int * bath.j_int;
    match channel {
        Channel::Annihilation => {
            j2 * (1.0 - fermi_dirac(bath.beta, omega)) * lorentzian_dos(bath, omega)
        }
        Channel::Creation => j2 * fermi_dirac(bath.beta, -omega) * lorentzian_dos(bath, -omega),
    }
}

/// Reservoir correlation function C_{mu nu}(t) as the inverse Fourier
/// transform of the power spectrum; zero for mu != nu.
pub fn correlation_function(bath: &BathSpec, mu: Channel, nu: Channel, t: f64) -> Result<C64> {
    if mu != nu {
        return Ok(C64::new(0.0, 0.0));
    }
    let (a, b) = bath.frequency_window();
    let tol = 1e-10 * bath.j_int.powi(2).max(1e-30);
    let f = |w: f64| C64::new(0.0, -w * t).exp() * channel_weight(bath, mu, w);
    let (value, estimate) = integrate_complex(&f, a, b, tol);
    if estimate > tol {
        return Err(Error::QuadratureError { estimate, tolerance: tol });
    }
    Ok(value / (2.0 * std::f64::consts::PI))
}

/// First-moment timescale of a sampled nonnegative kernel,
/// int t |C| dt / int |C| dt on the sample grid.
pub fn bath_relaxation_time(times: &[f64], kernel: &[f64]) -> Result<f64> {
    if times.len() != kernel.len() || times.len() < 3 {
        return Err(Error::DimensionMismatch { expected: times.len(), got: kernel.len() });
    }
    let peak = kernel.iter().cloned().fold(0.0_f64, f64::max);
    let tail = *kernel.last().unwrap();
    if !(peak > 0.0) || tail > 1e-3 * peak {
        return Err(Error::NonDecayingKernel { tail, peak });
    }
    let mut num = 0.0;
    let mut den = 0.0;
    for k in 1..times.len() {
        let dt = times[k] - times[k - 1];
        num += 0.5 * dt * (times[k] * kernel[k] + times[k - 1] * kernel[k - 1]);
        den += 0.5 * dt * (kernel[k] + kernel[k - 1]);
    }
    Ok(num / den)
}

/// Bath timescale of a reservoir: the larger of the two per-channel
/// first-moment times of |C_{mu mu}|.
pub fn bath_relaxation_time_for(bath: &BathSpec) -> Result<f64> {
    let decay = bath.tau_b.max(bath.beta / std::f64::consts::PI);
    let t_max = 30.0 * decay;
    let steps = 1000;
    let times: Vec<f64> = (0..=steps).map(|k| t_max * k as f64 / steps as f64).collect();
    let mut worst: f64 = 0.0;
    for ch in Channel::BOTH {
        let kernel: Vec<f64> = times
            .iter()
            .map(|&t| correlation_function(bath, ch, ch, t).map(|c| c.norm()))
            .collect::<Result<_>>()?;
        worst = worst.max(bath_relaxation_time(&times, &kernel)?);
    }
    Ok(worst)
}

/// Principal-value transform eta(w) = (1/2pi) PV int gamma(w') / (w - w') dw'
/// over [a, b], via symmetric excision around the pole.
pub fn eta_principal_value(gamma: &dyn Fn(f64) -> f64, omega: f64, a: f64, b: f64) -> Result<f64> {
    assert!(a < b, "empty integration range");
    let two_pi = 2.0 * std::f64::consts::PI;
    // substitute u = w' - w: the integral becomes -PV int gamma(w + u) / u du
    // over [a - w, b - w]
    let lo = a - omega;
    let hi = b - omega;

    let (raw, estimate) = if lo >= 0.0 || hi <= 0.0 {
        // pole outside the range
        integrate_real(&|u| gamma(omega + u) / u, lo, hi, 0.0)
    } else {
        let s = (-lo).min(hi);
        // pairing +-u makes the pole removable
        let sym = |u: f64| (gamma(omega + u) - gamma(omega - u)) / u;
        let (v1, e1) = integrate_real(&sym, 0.0, s, 0.0);
        let (v2, e2) = if hi > s {
            integrate_real(&|u| gamma(omega + u) / u, s, hi, 0.0)
        } else if -lo > s {
            integrate_real(&|u| gamma(omega + u) / u, lo, -s, 0.0)
        } else {
            (0.0, 0.0)
        };
        (v1 + v2, e1 + e2)
    };

    let eta = -raw / two_pi;
    let rel = (estimate / two_pi) / eta.abs().max(1e-12);
    if rel > 1e-6 {
        return Err(Error::QuadratureError { estimate: rel, tolerance: 1e-6 });
    }
    Ok(eta)
}

/// eta for one reservoir channel at frequency w, over the bath window
/// (mirrored for the creation channel, whose spectrum peaks at -peak).
pub fn eta_for_bath(bath: &BathSpec, channel: Channel, omega: f64) -> Result<f64> {
    let (wa, wb) = bath.frequency_window();
    let (mut a, mut b) = match channel {
        Channel::Annihilation => (wa, wb),
        Channel::Creation => (-wb, -wa),
    };
    // keep the pole strictly interior
    a = a.min(omega - 1.0);
    b = b.max(omega + 1.0);
    let gamma = move |w: f64| channel_weight(bath, channel, w);
    eta_principal_value(&gamma, omega, a, b)
}

/// Principal square root of a Hermitian PSD matrix. Small negative
/// eigenvalues are clamped to zero; genuinely negative ones are rejected.
pub fn psd_sqrt(m: &CMatrix) -> Result<CMatrix> {
    let n = m.nrows();
    if n != m.ncols() {
        return Err(Error::DimensionMismatch { expected: n, got: m.ncols() });
    }
    let scale = m.camax().max(1.0);
    let asym = (m - m.adjoint()).camax();
    if asym > 1e-10 * scale {
        return Err(Error::NotHermitian { asymmetry: asym / scale });
    }
    let herm = (m + m.adjoint()) * C64::new(0.5, 0.0);
    let eig = herm.symmetric_eigen();
    let mut vals = eig.eigenvalues.clone();
    for v in vals.iter_mut() {
        if *v < -1e-8 * scale {
            return Err(Error::NotPositiveSemidefinite { eigenvalue: *v });
        }
        *v = v.max(0.0).sqrt();
    }
    let d = CMatrix::from_fn(n, n, |i, k| {
        if i == k {
            C64::new(vals[i], 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    });
    Ok(&eig.eigenvectors * d * eig.eigenvectors.adjoint())
}

// 16-point Gauss-Legendre rule: positive abscissae and weights.
const GL_X: [f64; 8] = [
    0.0950125098376374,
    0.2816035507792589,
    0.4580167776572274,
    0.6178762444026438,
    0.7554044083550030,
    0.8656312023878318,
    0.9445750230732326,
    0.9894009349916499,
];
const GL_W: [f64; 8] = [
    0.1894506104550685,
    0.1826034150449236,
    0.1691565193950025,
    0.1495959888165767,
    0.1246289712555339,
    0.0951585116824928,
    0.0622535239386479,
    0.0271524594117541,
];

fn gl16(f: &dyn Fn(f64) -> C64, a: f64, b: f64) -> C64 {
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut acc = C64::new(0.0, 0.0);
    for k in 0..8 {
        acc += (f(mid + half * GL_X[k]) + f(mid - half * GL_X[k])) * GL_W[k];
    }
    acc * half
}

fn refine(f: &dyn Fn(f64) -> C64, a: f64, b: f64, whole: C64, tol: f64, depth: u32) -> (C64, f64) {
    let mid = 0.5 * (a + b);
    let left = gl16(f, a, mid);
    let right = gl16(f, mid, b);
    let err = (left + right - whole).norm();
    if err <= tol || depth >= 24 {
        return (left + right, err);
    }
    let (lv, le) = refine(f, a, mid, left, 0.5 * tol, depth + 1);
    let (rv, re) = refine(f, mid, b, right, 0.5 * tol, depth + 1);
    (lv + rv, le + re)
}

/// Adaptive bisection quadrature over [a, b]. Returns the integral and an
/// error estimate. `tol` is an absolute target; if zero, a relative target
/// of 1e-10 of a first-pass magnitude is used.
fn integrate_complex(f: &dyn Fn(f64) -> C64, a: f64, b: f64, tol: f64) -> (C64, f64) {
    const BASE: usize = 16;
    let dw = (b - a) / BASE as f64;
    let coarse: Vec<C64> =
        (0..BASE).map(|p| gl16(f, a + p as f64 * dw, a + (p + 1) as f64 * dw)).collect();
    let tol = if tol > 0.0 {
        tol
    } else {
        let rough: f64 = coarse.iter().map(|v| v.norm()).sum();
        1e-10 * rough.max(1e-12)
    };
    let mut value = C64::new(0.0, 0.0);
    let mut estimate = 0.0;
    for (p, &w) in coarse.iter().enumerate() {
        let (v, e) =
            refine(f, a + p as f64 * dw, a + (p + 1) as f64 * dw, w, tol / BASE as f64, 0);
        value += v;
        estimate += e;
    }
    (value, estimate)
}

fn integrate_real(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> (f64, f64) {
    let g = |x: f64| C64::new(f(x), 0.0);
    let (v, e) = integrate_complex(&g, a, b, tol);
    (v.re, e)
}

/// Integrates a real function over [a, b] adaptively; exposed for
/// cross-checks in tests and the validation suite.
pub fn integrate(f: &dyn Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    integrate_real(f, a, b, 0.0).0
}
