use std::fmt::Write as _;

use num_complex::Complex64;

use super::label::QubitLabel;
use crate::error::{argument, domain, Result};

pub type Matrix2 = [[Complex64; 2]; 2];
pub type Matrix4 = [[Complex64; 4]; 4];

/// Registers larger than this are refused rather than silently allocating
/// gigabytes.
pub const MAX_QUBITS: usize = 24;

const SNAPSHOT_CUTOFF: f64 = 1e-15;

pub(crate) fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// Dense amplitude vector over a labeled register.
///
/// Labels are always kept in canonical order and the basis index is
/// little-endian over that order: bit `k` of an index is the value of
/// `labels()[k]`. The vector may be unnormalized; its squared norm is then the
/// survival probability of the history that produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    labels: Vec<QubitLabel>,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// Builds a state from labels in any order. Amplitudes are indexed
    /// little-endian over the labels *as given* and are permuted into the
    /// canonical order.
    pub fn from_amplitudes(labels: Vec<QubitLabel>, amps: Vec<Complex64>) -> Result<Self> {
        let n = labels.len();
        if n > MAX_QUBITS {
            return Err(argument(format!(
                "register of {n} qubits exceeds the limit of {MAX_QUBITS}"
            )));
        }
        if amps.len() != 1usize << n {
            return Err(argument(format!(
                "{} amplitudes supplied for a register of {n} qubits",
                amps.len()
            )));
        }
        let mut sorted = labels.clone();
        sorted.sort();
        if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
            return Err(argument(format!("duplicate qubit label {}", w[0])));
        }
        if sorted == labels {
            return Ok(Self { labels, amps });
        }
        let target: Vec<usize> = labels
            .iter()
            .map(|l| sorted.binary_search(l).expect("label present"))
            .collect();
        let mut out = vec![Complex64::default(); amps.len()];
        for (i, a) in amps.into_iter().enumerate() {
            out[scatter_bits(i, &target)] = a;
        }
        Ok(Self {
            labels: sorted,
            amps: out,
        })
    }

    /// The empty register with amplitude 1.
    pub fn unit() -> Self {
        Self {
            labels: Vec::new(),
            amps: vec![c(1.0)],
        }
    }

    /// A single qubit `a0|0⟩ + a1|1⟩`.
    pub fn qubit(label: QubitLabel, a0: Complex64, a1: Complex64) -> Self {
        Self {
            labels: vec![label],
            amps: vec![a0, a1],
        }
    }

    /// A computational basis state.
    pub fn basis_state(bits: &[(QubitLabel, u8)]) -> Result<Self> {
        let labels: Vec<QubitLabel> = bits.iter().map(|(l, _)| *l).collect();
        let index = bits
            .iter()
            .enumerate()
            .fold(0usize, |acc, (k, (_, b))| acc | (((*b & 1) as usize) << k));
        let mut amps = vec![Complex64::default(); 1usize << labels.len()];
        amps[index] = c(1.0);
        Self::from_amplitudes(labels, amps)
    }

    pub fn labels(&self) -> &[QubitLabel] {
        &self.labels
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn num_qubits(&self) -> usize {
        self.labels.len()
    }

    pub fn contains(&self, label: QubitLabel) -> bool {
        self.labels.binary_search(&label).is_ok()
    }

    /// Bit position of `label` in the basis index.
    pub fn position(&self, label: QubitLabel) -> Result<usize> {
        self.labels
            .binary_search(&label)
            .map_err(|_| argument(format!("qubit {label} is not in the register")))
    }

    /// Amplitude of one basis state; every register qubit must be assigned.
    pub fn amplitude(&self, bits: &[(QubitLabel, u8)]) -> Result<Complex64> {
        if bits.len() != self.labels.len() {
            return Err(argument("amplitude lookup must assign every qubit"));
        }
        let mut index = 0usize;
        for (label, bit) in bits {
            index |= ((*bit & 1) as usize) << self.position(*label)?;
        }
        Ok(self.amps[index])
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm_sqr();
        if n <= 0.0 || !n.is_finite() {
            return Err(domain("cannot normalize a zero-norm state"));
        }
        Ok(self.scaled(c(1.0 / n.sqrt())))
    }

    pub fn scaled(&self, factor: Complex64) -> Self {
        Self {
            labels: self.labels.clone(),
            amps: self.amps.iter().map(|a| a * factor).collect(),
        }
    }

    /// ⟨self|other⟩.
    pub fn inner(&self, other: &StateVector) -> Result<Complex64> {
        self.same_register(other)?;
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// Largest componentwise amplitude difference.
    pub fn max_abs_diff(&self, other: &StateVector) -> Result<f64> {
        self.same_register(other)?;
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    fn same_register(&self, other: &StateVector) -> Result<()> {
        if self.labels != other.labels {
            return Err(argument("states live on different registers"));
        }
        Ok(())
    }

    /// Tensor product over disjoint registers.
    pub fn tensor(&self, other: &StateVector) -> Result<Self> {
        let mut labels = self.labels.clone();
        labels.extend_from_slice(&other.labels);
        labels.sort();
        if let Some(w) = labels.windows(2).find(|w| w[0] == w[1]) {
            return Err(argument(format!("qubit {} appears in both factors", w[0])));
        }
        if labels.len() > MAX_QUBITS {
            return Err(argument(format!(
                "register of {} qubits exceeds the limit",
                labels.len()
            )));
        }
        let pos = |ls: &[QubitLabel]| -> Vec<usize> {
            ls.iter()
                .map(|l| labels.binary_search(l).expect("merged"))
                .collect()
        };
        let (pa, pb) = (pos(&self.labels), pos(&other.labels));
        let sb: Vec<usize> = (0..other.amps.len())
            .map(|i| scatter_bits(i, &pb))
            .collect();
        let mut amps = vec![Complex64::default(); 1usize << labels.len()];
        for (ia, a) in self.amps.iter().enumerate() {
            if *a == Complex64::default() {
                continue;
            }
            let base = scatter_bits(ia, &pa);
            for (ib, b) in other.amps.iter().enumerate() {
                amps[base | sb[ib]] = a * b;
            }
        }
        Ok(Self { labels, amps })
    }

    /// Applies `m` (indexed `m[row][col]`) to one qubit.
    pub fn apply_single(&self, label: QubitLabel, m: &Matrix2) -> Result<Self> {
        let stride = 1usize << self.position(label)?;
        let mut amps = self.amps.clone();
        for i in 0..amps.len() {
            if i & stride != 0 {
                continue;
            }
            let (a0, a1) = (self.amps[i], self.amps[i | stride]);
            amps[i] = m[0][0] * a0 + m[0][1] * a1;
            amps[i | stride] = m[1][0] * a0 + m[1][1] * a1;
        }
        Ok(Self {
            labels: self.labels.clone(),
            amps,
        })
    }

    /// Applies a 4×4 operator to two qubits. The local index is
    /// `bit(l1) + 2·bit(l2)`.
    pub fn apply_pair(&self, l1: QubitLabel, l2: QubitLabel, m: &Matrix4) -> Result<Self> {
        let (p1, p2) = (self.position(l1)?, self.position(l2)?);
        if p1 == p2 {
            return Err(argument(format!(
                "two-qubit operator applied twice to {l1}"
            )));
        }
        let (s1, s2) = (1usize << p1, 1usize << p2);
        let mut amps = self.amps.clone();
        for base in 0..amps.len() {
            if base & (s1 | s2) != 0 {
                continue;
            }
            let idx = [base, base | s1, base | s2, base | s1 | s2];
            let local = idx.map(|i| self.amps[i]);
            for (row, &i) in idx.iter().enumerate() {
                amps[i] = (0..4).map(|col| m[row][col] * local[col]).sum();
            }
        }
        Ok(Self {
            labels: self.labels.clone(),
            amps,
        })
    }

    /// Multiplies every basis amplitude by `f(bits)`, where `bits[k]` is the
    /// value of `labels[k]` in that basis state. `f` is tabulated once over
    /// the `2^labels.len()` bit patterns.
    pub fn apply_diagonal<F>(&self, labels: &[QubitLabel], f: F) -> Result<Self>
    where
        F: Fn(&[u8]) -> Complex64,
    {
        let pos = labels
            .iter()
            .map(|l| self.position(*l))
            .collect::<Result<Vec<_>>>()?;
        let mut bits = vec![0u8; pos.len()];
        let table: Vec<Complex64> = (0..1usize << pos.len())
            .map(|k| {
                for (j, b) in bits.iter_mut().enumerate() {
                    *b = ((k >> j) & 1) as u8;
                }
                f(&bits)
            })
            .collect();
        // Gather the selected bits with two lookups: one on the low byte of
        // the index, one on the rest.
        let gather = |i: usize| {
            pos.iter()
                .enumerate()
                .fold(0usize, |acc, (j, p)| acc | (((i >> p) & 1) << j))
        };
        let low_bits = self.labels.len().min(8);
        let low: Vec<usize> = (0..1usize << low_bits).map(gather).collect();
        let high: Vec<usize> = (0..self.amps.len() >> low_bits)
            .map(|h| gather(h << low_bits))
            .collect();
        let mask = (1usize << low_bits) - 1;
        let one = c(1.0);
        let mut amps = self.amps.clone();
        for (i, a) in amps.iter_mut().enumerate() {
            let factor = table[low[i & mask] | high[i >> low_bits]];
            if factor != one {
                *a *= factor;
            }
        }
        Ok(Self {
            labels: self.labels.clone(),
            amps,
        })
    }

    /// Exchanges the values of two qubits.
    pub fn swap_qubits(&self, l1: QubitLabel, l2: QubitLabel) -> Result<Self> {
        let (p1, p2) = (self.position(l1)?, self.position(l2)?);
        let amps = (0..self.amps.len())
            .map(|i| {
                let (b1, b2) = ((i >> p1) & 1, (i >> p2) & 1);
                let j = (i & !(1 << p1) & !(1 << p2)) | (b2 << p1) | (b1 << p2);
                self.amps[j]
            })
            .collect();
        Ok(Self {
            labels: self.labels.clone(),
            amps,
        })
    }

    /// Contracts one qubit with ⟨v| and removes it from the register. The
    /// result is not renormalized.
    pub fn project(&self, label: QubitLabel, v: &[Complex64; 2]) -> Result<Self> {
        let p = self.position(label)?;
        let low = (1usize << p) - 1;
        let (v0, v1) = (v[0].conj(), v[1].conj());
        let amps = (0..self.amps.len() / 2)
            .map(|j| {
                let i0 = (j & low) | ((j & !low) << 1);
                v0 * self.amps[i0] + v1 * self.amps[i0 | (1 << p)]
            })
            .collect();
        let mut labels = self.labels.clone();
        labels.remove(p);
        Ok(Self { labels, amps })
    }

    /// Projects several qubits onto computational values and removes them.
    pub fn project_bits(&self, bits: &[(QubitLabel, u8)]) -> Result<Self> {
        let mut out = self.clone();
        for (label, bit) in bits {
            let v = if *bit == 0 {
                [c(1.0), c(0.0)]
            } else {
                [c(0.0), c(1.0)]
            };
            out = out.project(*label, &v)?;
        }
        Ok(out)
    }

    /// Projective measurement of one qubit. The measured qubit is removed from
    /// each branch state.
    pub fn measure(&self, label: QubitLabel, basis: &Basis) -> Result<Measurement> {
        let survival = self.norm_sqr();
        if survival <= 0.0 || !survival.is_finite() {
            return Err(domain("cannot measure a zero-norm state"));
        }
        let branches = basis
            .vectors
            .iter()
            .enumerate()
            .map(|(outcome, v)| {
                let raw = self.project(label, v)?;
                let probability = raw.norm_sqr() / survival;
                let state = if probability > 0.0 {
                    raw.normalized()?
                } else {
                    raw
                };
                Ok(MeasurementBranch {
                    outcome,
                    probability,
                    state,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Measurement { survival, branches })
    }

    /// Basis bitstring of an index, register order, '0'/'1'.
    pub fn bitstring(&self, index: usize) -> String {
        (0..self.labels.len())
            .map(|k| if (index >> k) & 1 == 1 { '1' } else { '0' })
            .collect()
    }

    /// Human-readable ket of one index, e.g. `RrE,LlI`.
    pub fn ket(&self, index: usize) -> String {
        let mut out = String::new();
        let mut last_photon = None;
        for (k, label) in self.labels.iter().enumerate() {
            let group = match label {
                QubitLabel::Photon(id, _) => Some(*id),
                QubitLabel::Nv(_) => None,
            };
            if k > 0 && group != last_photon {
                out.push(',');
            }
            last_photon = group;
            out.push(label.symbol(((index >> k) & 1) as u8));
        }
        out
    }

    /// Text snapshot: one line per amplitude above 1e-15 in magnitude,
    /// `bitstring<TAB>re<TAB>im`.
    pub fn to_snapshot(&self) -> String {
        let mut out = String::new();
        for (i, a) in self.amps.iter().enumerate() {
            if a.norm() < SNAPSHOT_CUTOFF {
                continue;
            }
            let _ = writeln!(out, "{}\t{:e}\t{:e}", self.bitstring(i), a.re, a.im);
        }
        out
    }

    /// Parses a snapshot written by [`StateVector::to_snapshot`] over the
    /// given canonical register. Blank lines and `#` comments are skipped.
    pub fn from_snapshot(labels: Vec<QubitLabel>, text: &str) -> Result<Self> {
        let n = labels.len();
        let mut sorted = labels.clone();
        sorted.sort();
        if sorted != labels {
            return Err(argument(
                "snapshot registers must be given in canonical order",
            ));
        }
        let mut amps = vec![Complex64::default(); 1usize << n];
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split('\t').collect();
            let bad = || argument(format!("malformed snapshot line {}", lineno + 1));
            if fields.len() != 3 || fields[0].len() != n {
                return Err(bad());
            }
            let mut index = 0usize;
            for (k, ch) in fields[0].chars().enumerate() {
                match ch {
                    '0' => {}
                    '1' => index |= 1 << k,
                    _ => return Err(bad()),
                }
            }
            let re: f64 = fields[1].parse().map_err(|_| bad())?;
            let im: f64 = fields[2].parse().map_err(|_| bad())?;
            amps[index] = Complex64::new(re, im);
        }
        Self::from_amplitudes(labels, amps)
    }
}

/// Moves bit `k` of `i` to position `target[k]`.
fn scatter_bits(i: usize, target: &[usize]) -> usize {
    target
        .iter()
        .enumerate()
        .fold(0, |acc, (k, t)| acc | (((i >> k) & 1) << t))
}

/// |⟨real|ideal⟩|² with both states normalized internally.
pub fn fidelity(real: &StateVector, ideal: &StateVector) -> Result<f64> {
    let (nr, ni) = (real.norm_sqr(), ideal.norm_sqr());
    if nr <= 0.0 || ni <= 0.0 {
        return Err(domain("fidelity of a zero-norm state is undefined"));
    }
    let overlap = real.inner(ideal)?.norm_sqr() / (nr * ni);
    Ok(overlap.clamp(0.0, 1.0))
}

/// An orthonormal single-qubit basis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Basis {
    pub vectors: [[Complex64; 2]; 2],
}

impl Basis {
    pub fn new(v0: [Complex64; 2], v1: [Complex64; 2]) -> Result<Self> {
        let dot = |a: &[Complex64; 2], b: &[Complex64; 2]| a[0].conj() * b[0] + a[1].conj() * b[1];
        let ok = (dot(&v0, &v0).re - 1.0).abs() < 1e-12
            && (dot(&v1, &v1).re - 1.0).abs() < 1e-12
            && dot(&v0, &v1).norm() < 1e-12;
        if !ok {
            return Err(argument("measurement basis is not orthonormal"));
        }
        Ok(Self { vectors: [v0, v1] })
    }

    /// {|0⟩, |1⟩}; for an NV spin this is {|+1⟩, |−1⟩}.
    pub fn computational() -> Self {
        Self {
            vectors: [[c(1.0), c(0.0)], [c(0.0), c(1.0)]],
        }
    }

    /// {φ⁺, φ⁻} = {(|+1⟩ ± |−1⟩)/√2}.
    pub fn nv_phi() -> Self {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        Self {
            vectors: [[c(h), c(h)], [c(h), c(-h)]],
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementBranch {
    /// Index of the basis vector.
    pub outcome: usize,
    /// Conditional probability given survival.
    pub probability: f64,
    /// Normalized post-measurement state without the measured qubit; the
    /// zero vector for an impossible outcome.
    pub state: StateVector,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Measurement {
    /// Squared norm of the state before measurement.
    pub survival: f64,
    pub branches: Vec<MeasurementBranch>,
}
