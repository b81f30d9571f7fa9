//! Bosonic dephasing bath: spectral density and thermal occupation.
//!
//! Natural units are used throughout (`hbar = k_B = 1`), so the temperature
//! `theta` is expressed as a frequency. This module accepts raw values; the
//! higher layers choose to measure frequencies in units of the cutoff.

use crate::error::{domain, invalid, Result};

/// Shape of the bath spectral density.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Spectrum {
    /// `J(w) = 2 alpha w` below a hard cutoff `omega_d`, zero above.
    #[default]
    Ohmic,
}

/// Spectral model of the bath coupled to a single qubit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BathSpec {
    alpha: f64,
    omega_d: f64,
    theta: f64,
    spectrum: Spectrum,
}

impl BathSpec {
    /// Ohmic bath with coupling `alpha`, cutoff `omega_d` and temperature
    /// `theta` (`k_B T / hbar`; zero means the vacuum).
    pub fn ohmic(alpha: f64, omega_d: f64, theta: f64) -> Result<Self> {
        if !(alpha >= 0.0 && alpha.is_finite()) {
            return Err(invalid("bath", format!("alpha must be >= 0, got {alpha}")));
        }
        if !(omega_d > 0.0 && omega_d.is_finite()) {
            return Err(invalid("bath", format!("omega_d must be > 0, got {omega_d}")));
        }
        if !(theta >= 0.0 && theta.is_finite()) {
            return Err(invalid("bath", format!("theta must be >= 0, got {theta}")));
        }
        Ok(Self {
            alpha,
            omega_d,
            theta,
            spectrum: Spectrum::Ohmic,
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn omega_d(&self) -> f64 {
        self.omega_d
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn spectrum(&self) -> Spectrum {
        self.spectrum
    }

    /// Same bath with a different coupling strength.
    pub fn with_alpha(&self, alpha: f64) -> Result<Self> {
        Self::ohmic(alpha, self.omega_d, self.theta)
    }

    /// `J(w)`. The cutoff edge `w = omega_d` itself maps to zero.
    pub fn spectral_density(&self, omega: f64) -> Result<f64> {
        if !(omega >= 0.0) {
            return Err(domain(format!("spectral density needs omega >= 0, got {omega}")));
        }
        Ok(self.density_unchecked(omega))
    }

    /// Bose occupation `1 / (exp(w / theta) - 1)`, zero at `theta = 0`.
    pub fn thermal_occupation(&self, omega: f64) -> Result<f64> {
        if !(omega > 0.0) {
            return Err(domain(format!("thermal occupation needs omega > 0, got {omega}")));
        }
        if self.theta == 0.0 {
            return Ok(0.0);
        }
        Ok(1.0 / (omega / self.theta).exp_m1())
    }

    /// `J(w) (n(w) + 1/2)`, the weight multiplying `|f(w)|^2` in the
    /// decoherence exponent. Finite at `w = 0`, where it takes the limit
    /// `2 alpha theta`.
    pub fn dephasing_weight(&self, omega: f64) -> f64 {
        if omega >= self.omega_d {
            return 0.0;
        }
        match self.spectrum {
            Spectrum::Ohmic => {
                if self.theta == 0.0 {
                    self.alpha * omega
                } else if omega == 0.0 {
                    self.low_frequency_limit()
                } else {
                    // 2 a w (n + 1/2) = a w coth(w / 2 theta)
                    let x = omega / self.theta;
                    2.0 * self.alpha * (omega / x.exp_m1() + 0.5 * omega)
                }
            }
        }
    }

    /// `lim_{w -> 0+} J(w) (n(w) + 1/2)`.
    pub fn low_frequency_limit(&self) -> f64 {
        match self.spectrum {
            Spectrum::Ohmic => 2.0 * self.alpha * self.theta,
        }
    }

    fn density_unchecked(&self, omega: f64) -> f64 {
        match self.spectrum {
            Spectrum::Ohmic if omega < self.omega_d => 2.0 * self.alpha * omega,
            Spectrum::Ohmic => 0.0,
        }
    }
}
