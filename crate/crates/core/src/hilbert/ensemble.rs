use std::collections::BTreeMap;

use super::bell::{BellLabel, HyperBellSpec};
use super::label::Dof;
use crate::error::{argument, Result};

const WEIGHT_TOLERANCE: f64 = 1e-12;

/// A mixed two-photon state as an exact weighted list of hyperentangled Bell
/// states.
#[derive(Debug, Clone, PartialEq)]
pub struct MixedEnsemble {
    terms: Vec<(f64, HyperBellSpec)>,
    params: Option<[f64; 3]>,
}

impl MixedEnsemble {
    /// Weights must be non-negative and sum to one.
    pub fn new(terms: Vec<(f64, HyperBellSpec)>) -> Result<Self> {
        if terms.is_empty() {
            return Err(argument("an ensemble needs at least one term"));
        }
        if terms.iter().any(|(w, _)| !(w.is_finite() && *w >= 0.0)) {
            return Err(argument("ensemble weights must be finite and non-negative"));
        }
        let total: f64 = terms.iter().map(|(w, _)| w).sum();
        if (total - 1.0).abs() > WEIGHT_TOLERANCE {
            return Err(argument(format!("ensemble weights sum to {total}, not 1")));
        }
        Ok(Self {
            terms,
            params: None,
        })
    }

    /// Normalizes arbitrary non-negative masses, merging repeated specs and
    /// dropping zero weights. Terms come out in spec order.
    pub fn from_masses<I>(masses: I) -> Result<Self>
    where
        I: IntoIterator<Item = (f64, HyperBellSpec)>,
    {
        let mut merged: BTreeMap<HyperBellSpec, f64> = BTreeMap::new();
        for (w, spec) in masses {
            if !(w.is_finite() && w >= 0.0) {
                return Err(argument("ensemble masses must be finite and non-negative"));
            }
            *merged.entry(spec).or_default() += w;
        }
        let total: f64 = merged.values().sum();
        if total <= 0.0 {
            return Err(argument("ensemble has zero total mass"));
        }
        let terms = merged
            .into_iter()
            .filter(|(_, w)| *w > 0.0)
            .map(|(s, w)| (w / total, s))
            .collect();
        Self::new(terms)
    }

    /// The bit-flip product ensemble: in each DOF φ⁺ with probability Fᵢ and
    /// ψ⁺ otherwise. Zero-weight terms are omitted.
    pub fn canonical(f1: f64, f2: f64, f3: f64) -> Result<Self> {
        let fs = [f1, f2, f3];
        if fs.iter().any(|f| !(0.0..=1.0).contains(f)) {
            return Err(argument(format!(
                "fidelities must lie in [0, 1], got {fs:?}"
            )));
        }
        let choices = |f: f64| [(f, BellLabel::PHI_PLUS), (1.0 - f, BellLabel::PSI_PLUS)];
        let mut terms = Vec::with_capacity(8);
        for (wp, p) in choices(f1) {
            for (wf, f) in choices(f2) {
                for (ws, s) in choices(f3) {
                    let w = wp * wf * ws;
                    if w > 0.0 {
                        terms.push((w, HyperBellSpec::new(p, f, s)));
                    }
                }
            }
        }
        let mut out = Self::new(terms)?;
        out.params = Some(fs);
        Ok(out)
    }

    pub fn terms(&self) -> &[(f64, HyperBellSpec)] {
        &self.terms
    }

    /// The (F1, F2, F3) this ensemble was built from, if canonical.
    pub fn canonical_fidelities(&self) -> Option<[f64; 3]> {
        self.params
    }

    /// Probability of φ⁺ in one DOF.
    pub fn dof_fidelity(&self, dof: Dof) -> f64 {
        self.terms
            .iter()
            .filter(|(_, s)| s.get(dof) == Some(BellLabel::PHI_PLUS))
            .map(|(w, _)| w)
            .sum()
    }

    pub fn dof_fidelities(&self) -> [f64; 3] {
        Dof::PFS.map(|d| self.dof_fidelity(d))
    }

    /// Weight of φ⁺φ⁺φ⁺.
    pub fn fidelity(&self) -> f64 {
        let target = HyperBellSpec::uniform(BellLabel::PHI_PLUS);
        self.terms
            .iter()
            .filter(|(_, s)| *s == target)
            .map(|(w, _)| w)
            .sum()
    }

    /// Weight of a given spec.
    pub fn weight(&self, spec: &HyperBellSpec) -> f64 {
        self.terms
            .iter()
            .filter(|(_, s)| s == spec)
            .map(|(w, _)| w)
            .sum()
    }

    /// True when every term is φ⁺/ψ⁺ in each DOF and the weights factor
    /// into per-DOF marginals.
    pub fn is_product_bit_flip(&self) -> bool {
        let allowed = |l: BellLabel| l == BellLabel::PHI_PLUS || l == BellLabel::PSI_PLUS;
        if self
            .terms
            .iter()
            .any(|(_, s)| s.t.is_some() || !(allowed(s.p) && allowed(s.f) && allowed(s.s)))
        {
            return false;
        }
        let [f1, f2, f3] = self.dof_fidelities();
        match Self::canonical(f1.clamp(0.0, 1.0), f2.clamp(0.0, 1.0), f3.clamp(0.0, 1.0)) {
            Ok(reference) => HyperBellSpec::all()
                .iter()
                .all(|s| (self.weight(s) - reference.weight(s)).abs() <= 1e-10),
            Err(_) => false,
        }
    }
}
