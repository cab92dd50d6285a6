//! Closed-form fidelities and efficiencies of the QNDs and the polarization
//! SWAP, and the tables behind the performance figures.
//!
//! All expressions are evaluated in complex arithmetic, so off-resonant
//! reflection pairs can be explored with the same code.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::cavity::{resonant_reflection, ReflectionPair};
use crate::error::{argument, domain, Result};
use crate::protocol::{efficiency_y1, efficiency_y2, iterate_fidelity};

fn sq(x: Complex64) -> f64 {
    x.norm_sqr()
}

fn ratio(num: f64, den: f64, what: &str) -> Result<f64> {
    if den <= 0.0 || !den.is_finite() {
        return Err(domain(format!("{what}: vanishing normalization")));
    }
    Ok(num / den)
}

/// Fidelities and efficiencies of both parity checks.
///
/// `f_s[i]` / `eta_s[i]` belong to input class `i + 1`, where the classes
/// run over (P, F, S) parities as φφφ, ψφφ, φφψ, ψφψ, φψφ, ψψφ, φψψ, ψψψ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QndPerformance {
    /// Even (φ) and odd (ψ) polarization inputs.
    pub f_p: [f64; 2],
    pub eta_p: [f64; 2],
    pub f_s: [f64; 8],
    pub eta_s: [f64; 8],
}

impl QndPerformance {
    pub fn evaluate(refl: &ReflectionPair) -> Result<Self> {
        let (r, r0) = (refl.r, refl.r0);
        let one = Complex64::new(1.0, 0.0);
        let r2 = r * r;
        let q2 = r0 * r0;

        let eta_p1 = (2.0 + sq(r2) + sq(q2)) / 4.0;
        let eta_p2 = (sq(r0) + sq(r)) / 2.0;
        let f_p1 = ratio(
            sq(2.0 * one + r2 + q2),
            4.0 * (2.0 + sq(r2) + sq(q2)),
            "F_P1",
        )?;
        let f_p2 = ratio(sq(r - r0), 2.0 * (sq(r) + sq(r0)), "F_P2")?;

        // bracketed normalizations, shared by F and η
        let d1 = 4.0 * (sq(r2) + sq(q2)) + (sq(r2 * r2) + 2.0 * sq(r2 * q2) + sq(q2 * q2)) + 4.0;
        let d2 = sq(r2 * q2) + 2.0 * sq(r * r0) + 1.0;
        let d3 = (sq(r2 * r) + sq(q2 * r0) + sq(r0 * r2) + sq(q2 * r)) + 2.0 * (sq(r) + sq(r0));
        let d4 = sq(r * q2) + sq(r0 * r2) + sq(r) + sq(r0);
        let d7 = sq(r2) + 2.0 * sq(r * r0) + sq(q2);

        let n1 = sq((r2 + q2) * (r2 + q2) + 4.0 * (r2 + q2) + 4.0);
        let n2 = sq(r2 * q2 - 2.0 * r * r0 + 1.0);
        let n3 = sq((r2 + q2) * (r - r0) + 2.0 * (r - r0));
        let n4 = sq((r - r0) * (one - r * r0));
        let n7 = sq(r2 + q2 - 2.0 * r * r0);

        let f_s = [
            ratio(n1, 16.0 * d1, "F_S1")?,
            ratio(n2, 4.0 * d2, "F_S2")?,
            ratio(n3, 8.0 * d3, "F_S3")?,
            ratio(n4, 4.0 * d4, "F_S4")?,
            ratio(n3, 8.0 * d3, "F_S5")?,
            ratio(n4, 4.0 * d4, "F_S6")?,
            ratio(n7, 4.0 * d7, "F_S7")?,
            ratio(n7, 4.0 * d7, "F_S8")?,
        ];
        let eta_s = [
            d1 / 16.0,
            d2 / 4.0,
            d3 / 8.0,
            d4 / 4.0,
            d3 / 8.0,
            d4 / 4.0,
            d7 / 4.0,
            d7 / 4.0,
        ];
        Ok(Self {
            f_p: [f_p1, f_p2],
            eta_p: [eta_p1, eta_p2],
            f_s,
            eta_s,
        })
    }

    /// Index into `f_s` for a (P, F, S) odd-parity pattern.
    pub fn s_class(p_odd: bool, f_odd: bool, s_odd: bool) -> usize {
        p_odd as usize + 2 * s_odd as usize + 4 * f_odd as usize
    }
}

/// Polarization amplitudes α|R⟩ + β|L⟩ of the two photons entering the SWAP.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SwapAmplitudes {
    pub alpha1: Complex64,
    pub beta1: Complex64,
    pub alpha2: Complex64,
    pub beta2: Complex64,
}

impl SwapAmplitudes {
    pub fn new(
        alpha1: Complex64,
        beta1: Complex64,
        alpha2: Complex64,
        beta2: Complex64,
    ) -> Result<Self> {
        let n1 = alpha1.norm_sqr() + beta1.norm_sqr();
        let n2 = alpha2.norm_sqr() + beta2.norm_sqr();
        if (n1 - 1.0).abs() > 1e-9 || (n2 - 1.0).abs() > 1e-9 {
            return Err(argument(
                "SWAP input amplitudes must be normalized per photon",
            ));
        }
        Ok(Self {
            alpha1,
            beta1,
            alpha2,
            beta2,
        })
    }

    /// α = β = 1/√2 on both photons.
    pub fn balanced() -> Self {
        let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        Self {
            alpha1: h,
            beta1: h,
            alpha2: h,
            beta2: h,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SwapPerformance {
    pub f_swap: f64,
    pub eta_swap: f64,
}

/// General-amplitude SWAP fidelity and efficiency.
///
/// Each branch amplitude is weighted by the ideal output amplitude in the
/// rotated basis, (α₁ ± β₁)(α₂ ± β₂). The weights enter the overlap
/// conjugated; for real amplitudes this is the literal expression.
pub fn swap_performance(refl: &ReflectionPair, amps: &SwapAmplitudes) -> Result<SwapPerformance> {
    let (r, r0) = (refl.r, refl.r0);
    let SwapAmplitudes {
        alpha1: a1,
        beta1: b1,
        alpha2: a2,
        beta2: b2,
    } = *amps;
    let (r2, r3, r4) = (r * r, r * r * r, r * r * r * r);
    let (q2, q3, q4) = (r0 * r0, r0 * r0 * r0, r0 * r0 * r0 * r0);
    let sym = a1 * b2 + b1 * a2;
    let asym = a1 * b2 - b1 * a2;
    let bb = b1 * b2;
    let aa = a1 * a2;
    let e = [
        2.0 * aa * r2 + sym * (r2 * r0 + r3 + q3 - q2 * r) + bb * (r4 + q4),
        2.0 * aa * r2 + sym * (r2 * r0 + r3 - q3 + q2 * r) + bb * (r4 - q4 + 2.0 * r2 * q2),
        2.0 * aa * r - asym * (r2 + q2) - bb * (r * q2 + r3 + q3 - r0 * r2),
        2.0 * aa * r - asym * (2.0 * r * r0 + r2 - q2) - bb * (r * q2 + r3 - q3 + r0 * r2),
        2.0 * aa * r + asym * (r2 + q2) - bb * (r * q2 + r3 + q3 - r0 * r2),
        2.0 * aa * r + asym * (2.0 * r * r0 + r2 - q2) - bb * (r * q2 + r3 - q3 + r0 * r2),
        2.0 * aa - 2.0 * sym * r0 + 2.0 * bb * q2,
        2.0 * aa - 2.0 * sym * r + 2.0 * bb * r2,
    ];
    let (pm1, mm1) = (a1 + b1, a1 - b1);
    let (pm2, mm2) = (a2 + b2, a2 - b2);
    let w = [
        mm1 * mm2,
        pm1 * pm2,
        pm1 * mm2,
        mm1 * pm2,
        mm1 * pm2,
        pm1 * mm2,
        pm1 * pm2,
        mm1 * mm2,
    ];
    let eta: f64 = e.iter().map(|x| x.norm_sqr()).sum::<f64>() / 32.0;
    let f: Complex64 = e
        .iter()
        .zip(&w)
        .map(|(x, y)| x * y.conj())
        .sum::<Complex64>()
        / 16.0;
    Ok(SwapPerformance {
        f_swap: ratio(f.norm_sqr(), eta, "F_SWAP")?,
        eta_swap: eta,
    })
}

/// SWAP fidelity and efficiency for the balanced inputs used by the
/// purification protocol.
pub fn swap_performance_balanced(refl: &ReflectionPair) -> Result<SwapPerformance> {
    let (r, r0) = (refl.r, refl.r0);
    let one = Complex64::new(1.0, 0.0);
    let (r2, r3, r4) = (r * r, r * r * r, r * r * r * r);
    let (q2, q3, q4) = (r0 * r0, r0 * r0 * r0, r0 * r0 * r0 * r0);
    let f1 = (2.0 * r2 + 2.0 * (r2 * r0 + r3 - q3 + q2 * r) + r4 - q4 + 2.0 * r2 * q2) / 16.0;
    let f2 = (r0 - one) * (r0 - one) / 8.0;
    let eta = (sq(r2 + r2 * r0 + r3 + q3 - q2 * r + 0.5 * (r4 + q4))
        + sq(r2 + r2 * r0 + r3 - q3 + q2 * r + 0.5 * (r4 - q4 + 2.0 * r2 * q2))
        + 2.0 * sq(r - 0.5 * (r * q2 + r3 + q3 - r0 * r2))
        + 2.0 * sq(r - 0.5 * (r * q2 + r3 - q3 + r0 * r2))
        + sq(one - 2.0 * r0 + q2)
        + sq(one - 2.0 * r + r2))
        / 32.0;
    Ok(SwapPerformance {
        f_swap: ratio(sq(f1 + f2), eta, "F_SWAP")?,
        eta_swap: eta,
    })
}

/// Figures whose data can be regenerated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Figure {
    /// Purified fidelity after 1, 2, 3 rounds against the initial F.
    Fig8a,
    /// Yields after the first step and after the full round.
    Fig8b,
    /// Polarization check fidelities against g/√(κγ).
    Fig10,
    Fig10Eta,
    /// Spatial check fidelities against g/√(κγ).
    Fig11,
    Fig11Eta,
    /// SWAP fidelity against g/√(κγ).
    Fig12,
    Fig12Eta,
}

impl Figure {
    pub const ALL: [Figure; 8] = [
        Figure::Fig8a,
        Figure::Fig8b,
        Figure::Fig10,
        Figure::Fig10Eta,
        Figure::Fig11,
        Figure::Fig11Eta,
        Figure::Fig12,
        Figure::Fig12Eta,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Figure::Fig8a => "fig8a",
            Figure::Fig8b => "fig8b",
            Figure::Fig10 => "fig10",
            Figure::Fig10Eta => "fig10-eta",
            Figure::Fig11 => "fig11",
            Figure::Fig11Eta => "fig11-eta",
            Figure::Fig12 => "fig12",
            Figure::Fig12Eta => "fig12-eta",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL
            .into_iter()
            .find(|f| f.name().eq_ignore_ascii_case(s))
    }

    pub fn columns(self) -> Vec<&'static str> {
        const G: &str = "g_over_sqrt_kappa_gamma";
        match self {
            Figure::Fig8a => vec!["F", "F_n1", "F_n2", "F_n3"],
            Figure::Fig8b => vec!["F", "Y1", "Y2"],
            Figure::Fig10 => vec![G, "F_P1", "F_P2"],
            Figure::Fig10Eta => vec![G, "eta_P1", "eta_P2"],
            Figure::Fig11 => vec![G, "F_S1", "F_S2", "F_S3"],
            Figure::Fig11Eta => vec![G, "eta_S1", "eta_S2", "eta_S3"],
            Figure::Fig12 => vec![G, "F_SWAP"],
            Figure::Fig12Eta => vec![G, "eta_SWAP"],
        }
    }

    /// Default abscissa range.
    pub fn default_grid(self) -> Grid {
        match self {
            Figure::Fig8a | Figure::Fig8b => Grid {
                start: 0.5,
                stop: 1.0,
                points: 51,
            },
            _ => Grid {
                start: 0.05,
                stop: 5.0,
                points: 100,
            },
        }
    }

    fn over_fidelity(self) -> bool {
        matches!(self, Figure::Fig8a | Figure::Fig8b)
    }
}

/// Evenly spaced abscissae, endpoints included.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub start: f64,
    pub stop: f64,
    pub points: usize,
}

impl Grid {
    pub fn new(start: f64, stop: f64, points: usize) -> Result<Self> {
        let g = Self {
            start,
            stop,
            points,
        };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        if self.points < 2 {
            return Err(argument(format!(
                "a grid needs at least 2 points, got {}",
                self.points
            )));
        }
        if !(self.start.is_finite() && self.stop.is_finite()) || self.start > self.stop {
            return Err(argument(format!(
                "invalid grid range [{}, {}]",
                self.start, self.stop
            )));
        }
        Ok(())
    }

    pub fn values(&self) -> Vec<f64> {
        let step = (self.stop - self.start) / (self.points - 1) as f64;
        (0..self.points)
            .map(|i| {
                if i + 1 == self.points {
                    self.stop
                } else {
                    self.start + step * i as f64
                }
            })
            .collect()
    }
}

/// Column-oriented numeric table.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn new(columns: Vec<String>) -> Self {
        Self {
            columns,
            rows: Vec::new(),
        }
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let k = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[k]).collect())
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }
}

fn figure_row(figure: Figure, x: f64) -> Result<Vec<f64>> {
    if figure.over_fidelity() {
        return Ok(match figure {
            Figure::Fig8a => {
                let mut row = vec![x];
                row.extend(
                    (1..=3)
                        .map(|n| iterate_fidelity(x, x, x, n).map(|it| it.total))
                        .collect::<Result<Vec<_>>>()?,
                );
                row
            }
            _ => vec![x, efficiency_y1(x, x, x)?, efficiency_y2(x, x, x)?],
        });
    }
    let refl = ReflectionPair::resonant(resonant_reflection(x));
    Ok(match figure {
        Figure::Fig10 | Figure::Fig10Eta | Figure::Fig11 | Figure::Fig11Eta => {
            let q = QndPerformance::evaluate(&refl)?;
            match figure {
                Figure::Fig10 => vec![x, q.f_p[0], q.f_p[1]],
                Figure::Fig10Eta => vec![x, q.eta_p[0], q.eta_p[1]],
                Figure::Fig11 => vec![x, q.f_s[0], q.f_s[1], q.f_s[2]],
                _ => vec![x, q.eta_s[0], q.eta_s[1], q.eta_s[2]],
            }
        }
        Figure::Fig12 => vec![x, swap_performance_balanced(&refl)?.f_swap],
        _ => vec![x, swap_performance_balanced(&refl)?.eta_swap],
    })
}

/// Regenerates the data series of a figure on `grid`. Fidelity grids must
/// lie in [0, 1], coupling grids in [0, ∞).
pub fn figure_data(figure: Figure, grid: &Grid) -> Result<Table> {
    grid.validate()?;
    if figure.over_fidelity() && (grid.start < 0.0 || grid.stop > 1.0) {
        return Err(argument("fidelity grids must lie within [0, 1]"));
    }
    if !figure.over_fidelity() && grid.start < 0.0 {
        return Err(argument("coupling grids must be non-negative"));
    }
    let rows = grid
        .values()
        .par_iter()
        .map(|x| figure_row(figure, *x))
        .collect::<Result<Vec<_>>>()?;
    Ok(Table {
        columns: figure.columns().into_iter().map(String::from).collect(),
        rows,
    })
}
