use crate::error::{argument, Result};

use super::case::DofPattern;

fn check(fs: &[f64]) -> Result<()> {
    if fs.iter().any(|f| !(0.0..=1.0).contains(f)) {
        return Err(argument(format!(
            "fidelities must lie in [0, 1], got {fs:?}"
        )));
    }
    Ok(())
}

/// One application of the purification map F → F²/(F² + (1−F)²).
pub fn purify_once(f: f64) -> f64 {
    f * f / (f * f + (1.0 - f) * (1.0 - f))
}

/// Fidelities after `n` rounds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Iterated {
    pub per_dof: [f64; 3],
    /// Product of the three.
    pub total: f64,
}

pub fn iterate_fidelity(f1: f64, f2: f64, f3: f64, rounds: usize) -> Result<Iterated> {
    check(&[f1, f2, f3])?;
    let mut per_dof = [f1, f2, f3];
    for _ in 0..rounds {
        per_dof = per_dof.map(purify_once);
    }
    Ok(Iterated {
        per_dof,
        total: per_dof.iter().product(),
    })
}

/// Yield of the first step alone: the probability of case 1.
pub fn efficiency_y1(f1: f64, f2: f64, f3: f64) -> Result<f64> {
    check(&[f1, f2, f3])?;
    Ok([f1, f2, f3]
        .iter()
        .map(|f| DofPattern::Same.probability(*f))
        .product())
}

/// Yield of a full round: case 1 plus one output per matched pair of
/// complementary cases.
pub fn efficiency_y2(f1: f64, f2: f64, f3: f64) -> Result<f64> {
    let y1 = efficiency_y1(f1, f2, f3)?;
    let s = [f1, f2, f3].map(|f| f * f + (1.0 - f) * (1.0 - f));
    let d = [f1, f2, f3].map(|f| 2.0 * f * (1.0 - f));
    Ok(y1
        + (d[0] * s[1] * s[2]).min(s[0] * d[1] * d[2])
        + (s[0] * d[1] * s[2]).min(d[0] * s[1] * d[2])
        + (s[0] * s[1] * d[2]).min(d[0] * d[1] * s[2]))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixed_points() {
        for f in [0.5, 1.0, 0.0] {
            let it = iterate_fidelity(f, f, f, 5).unwrap();
            assert_eq!(it.per_dof, [f; 3]);
        }
    }

    #[test]
    fn rounds_from_point_eight() {
        let one = iterate_fidelity(0.8, 0.8, 0.8, 1).unwrap();
        assert!((one.per_dof[0] - 0.64 / 0.68).abs() < 1e-15);
        assert!((one.total - 0.8336).abs() < 1e-3);
        assert!((iterate_fidelity(0.8, 0.8, 0.8, 2).unwrap().total - 0.9884).abs() < 1e-3);
        assert!((iterate_fidelity(0.8, 0.8, 0.8, 3).unwrap().total - 0.99995).abs() < 1e-4);
    }

    #[test]
    fn yields_at_point_eight() {
        assert!((efficiency_y1(0.8, 0.8, 0.8).unwrap() - 0.68f64.powi(3)).abs() < 1e-15);
        let m = 0.68 * 0.32 * 0.32;
        assert!(
            (efficiency_y2(0.8, 0.8, 0.8).unwrap() - (0.68f64.powi(3) + 3.0 * m)).abs() < 1e-15
        );
        assert_eq!(efficiency_y2(1.0, 1.0, 1.0).unwrap(), 1.0);
        assert!(efficiency_y1(1.2, 0.5, 0.5).is_err());
    }

    #[test]
    fn purification_expands_above_half() {
        for i in 1..100 {
            let f = 0.5 + i as f64 / 200.0;
            assert!(purify_once(f) > f);
            assert!(efficiency_y2(f, f, f).unwrap() >= efficiency_y1(f, f, f).unwrap());
        }
    }
}
