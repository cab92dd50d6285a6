//! Single-photon reflection from an NV center in a single-sided microcavity.
//!
//! All rates and frequencies are angular frequencies in one common unit. The
//! presets use 2π·GHz, i.e. a value of `0.30 * TAU` means g/2π = 0.30 GHz.

use std::f64::consts::TAU;
use std::fmt;

use num_complex::Complex64;

use crate::error::{argument, domain, Result};

/// Physical parameters of one NV-cavity unit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CavityParams {
    /// NV-cavity coupling strength.
    pub g: f64,
    /// Cavity damping rate.
    pub kappa: f64,
    /// NV decay rate.
    pub gamma: f64,
    /// Cavity mode frequency.
    pub omega_c: f64,
    /// NV transition frequency.
    pub omega_0: f64,
    /// Photon frequency.
    pub omega_p: f64,
}

impl CavityParams {
    pub fn new(
        g: f64,
        kappa: f64,
        gamma: f64,
        omega_c: f64,
        omega_0: f64,
        omega_p: f64,
    ) -> Result<Self> {
        let params = Self {
            g,
            kappa,
            gamma,
            omega_c,
            omega_0,
            omega_p,
        };
        params.validate()?;
        Ok(params)
    }

    /// Parameters with ω₀ = ω_c = ω_p (all frequencies set to zero, only the
    /// differences enter the reflection coefficients).
    pub fn resonant(g: f64, kappa: f64, gamma: f64) -> Result<Self> {
        Self::new(g, kappa, gamma, 0.0, 0.0, 0.0)
    }

    /// Builds parameters from values quoted as X/2π (e.g. in GHz).
    pub fn from_per_two_pi(
        g: f64,
        kappa: f64,
        gamma: f64,
        cavity_detuning: f64,
        nv_detuning: f64,
    ) -> Result<Self> {
        // Detunings are ω_c − ω_p and ω₀ − ω_p; the photon sits at zero.
        Self::new(
            g * TAU,
            kappa * TAU,
            gamma * TAU,
            cavity_detuning * TAU,
            nv_detuning * TAU,
            0.0,
        )
    }

    /// Chip-based microcavity parameters with the zero-phonon-line decay rate:
    /// [g, κ, γ]/2π = [0.30, 26, 0.0004] GHz, resonant.
    pub fn barclay() -> Self {
        Self {
            g: 0.30 * TAU,
            kappa: 26.0 * TAU,
            gamma: 0.0004 * TAU,
            omega_c: 0.0,
            omega_0: 0.0,
            omega_p: 0.0,
        }
    }

    /// Resonant parameters with κ = γ = 1 and the given g/√(κγ).
    pub fn from_cooperativity(ratio: f64) -> Result<Self> {
        Self::resonant(ratio, 1.0, 1.0)
    }

    pub fn validate(&self) -> Result<()> {
        let all = [
            self.g,
            self.kappa,
            self.gamma,
            self.omega_c,
            self.omega_0,
            self.omega_p,
        ];
        if all.iter().any(|v| !v.is_finite()) {
            return Err(argument("cavity parameters must be finite"));
        }
        if self.g < 0.0 {
            return Err(argument(format!(
                "coupling g must be non-negative, got {}",
                self.g
            )));
        }
        if self.kappa <= 0.0 {
            return Err(argument(format!(
                "cavity damping kappa must be positive, got {}",
                self.kappa
            )));
        }
        if self.gamma <= 0.0 {
            return Err(argument(format!(
                "NV decay gamma must be positive, got {}",
                self.gamma
            )));
        }
        Ok(())
    }

    /// g/√(κγ).
    pub fn cooperativity(&self) -> f64 {
        self.g / (self.kappa * self.gamma).sqrt()
    }

    pub fn is_resonant(&self) -> bool {
        self.omega_c == self.omega_p && self.omega_0 == self.omega_p
    }
}

/// Reflection coefficient of the coupled NV-cavity unit at the photon frequency.
pub fn reflection_coupled(params: &CavityParams) -> Result<Complex64> {
    let i = Complex64::i();
    let cav = i * (params.omega_c - params.omega_p);
    let nv = i * (params.omega_0 - params.omega_p) + params.gamma / 2.0;
    let g2 = params.g * params.g;
    let num = (cav - params.kappa / 2.0) * nv + g2;
    let den = (cav + params.kappa / 2.0) * nv + g2;
    finite_ratio(num, den, "coupled reflection")
}

/// Reflection coefficient of the empty (uncoupled) cavity.
pub fn reflection_empty(params: &CavityParams) -> Result<Complex64> {
    let cav = Complex64::i() * (params.omega_c - params.omega_p);
    finite_ratio(
        cav - params.kappa / 2.0,
        cav + params.kappa / 2.0,
        "empty-cavity reflection",
    )
}

fn finite_ratio(num: Complex64, den: Complex64, what: &str) -> Result<Complex64> {
    if den.norm_sqr() == 0.0 {
        return Err(domain(format!("{what}: vanishing denominator")));
    }
    let value = num / den;
    if !(value.re.is_finite() && value.im.is_finite()) {
        return Err(domain(format!("{what}: non-finite result")));
    }
    Ok(value)
}

/// Resonant coupled reflection as a function of g/√(κγ) alone:
/// r = (4c² − 1)/(4c² + 1).
pub fn resonant_reflection(cooperativity: f64) -> f64 {
    let c2 = 4.0 * cooperativity * cooperativity;
    (c2 - 1.0) / (c2 + 1.0)
}

/// The pair of reflection amplitudes (coupled `r`, empty `r0`) used by the
/// realistic scattering rule.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReflectionPair {
    pub r: Complex64,
    pub r0: Complex64,
}

impl ReflectionPair {
    pub fn new(r: Complex64, r0: Complex64) -> Self {
        Self { r, r0 }
    }

    /// Evaluates both coefficients for the given unit. Resonant parameters
    /// pin `r0` to exactly −1.
    pub fn from_params(params: &CavityParams) -> Result<Self> {
        params.validate()?;
        let r = reflection_coupled(params)?;
        let r0 = if params.is_resonant() {
            Complex64::new(-1.0, 0.0)
        } else {
            reflection_empty(params)?
        };
        Ok(Self { r, r0 })
    }

    /// Real `r` with `r0 = −1`.
    pub fn resonant(r: f64) -> Self {
        Self {
            r: Complex64::new(r, 0.0),
            r0: Complex64::new(-1.0, 0.0),
        }
    }

    pub fn from_cooperativity(ratio: f64) -> Self {
        Self::resonant(resonant_reflection(ratio))
    }

    /// The strong-coupling limit r = 1, r0 = −1.
    pub fn ideal() -> Self {
        Self::resonant(1.0)
    }
}

impl fmt::Display for ReflectionPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "r = {:.6}{:+.6}i, r0 = {:.6}{:+.6}i",
            self.r.re, self.r.im, self.r0.re, self.r0.im
        )
    }
}

/// Which scattering rule a cavity interaction follows.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum InteractionMode {
    /// Strong-coupling limit: every reflection contributes a phase ±1.
    Ideal,
    /// Finite coupling: reflections contribute `r` or `r0`.
    Realistic,
}

impl InteractionMode {
    pub fn name(self) -> &'static str {
        match self {
            InteractionMode::Ideal => "ideal",
            InteractionMode::Realistic => "realistic",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Polarization {
    R,
    L,
}

impl Polarization {
    pub fn from_bit(bit: u8) -> Self {
        if bit == 0 {
            Polarization::R
        } else {
            Polarization::L
        }
    }

    pub fn bit(self) -> u8 {
        match self {
            Polarization::R => 0,
            Polarization::L => 1,
        }
    }
}

/// NV ground-state spin, |+1⟩ or |−1⟩.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Spin {
    Plus,
    Minus,
}

impl Spin {
    pub fn from_bit(bit: u8) -> Self {
        if bit == 0 {
            Spin::Plus
        } else {
            Spin::Minus
        }
    }

    pub fn bit(self) -> u8 {
        match self {
            Spin::Plus => 0,
            Spin::Minus => 1,
        }
    }
}

impl fmt::Display for Spin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Spin::Plus => "+1",
            Spin::Minus => "-1",
        })
    }
}

/// Amplitude factor picked up by a photon of the given polarization reflected
/// from a unit whose NV spin is `spin`.
///
/// R couples to |+1⟩ and L couples to |−1⟩: a coupled pair reflects with `r`
/// (ideal +1), an uncoupled pair with `r0` (ideal −1).
pub fn scatter(
    pol: Polarization,
    spin: Spin,
    mode: InteractionMode,
    refl: &ReflectionPair,
) -> Complex64 {
    let coupled = pol.bit() == spin.bit();
    match (mode, coupled) {
        (InteractionMode::Ideal, true) => Complex64::new(1.0, 0.0),
        (InteractionMode::Ideal, false) => Complex64::new(-1.0, 0.0),
        (InteractionMode::Realistic, true) => refl.r,
        (InteractionMode::Realistic, false) => refl.r0,
    }
}
