use crate::trs::enumerate::rc_samples;
use crate::trs::{Overflow, RcError, SampleConfig, Trs};

pub const DEFAULT_EXPONENT_THRESHOLD: f64 = 4.0;
pub const DOUBLING_RATIO: f64 = 1.5;

#[derive(Clone, Debug)]
pub struct EmpiricalConfig {
    pub max_size: usize,
    pub fuel: u64,
    pub cap_per_size: usize,
    pub seed: u64,
    pub exponent_threshold: f64,
}

impl Default for EmpiricalConfig {
    fn default() -> Self {
        EmpiricalConfig {
            max_size: 20,
            fuel: crate::trs::DEFAULT_FUEL,
            cap_per_size: 2_000,
            seed: 0x5eed,
            exponent_threshold: DEFAULT_EXPONENT_THRESHOLD,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct EmpiricalReport {
    /// `(n, rc(n))` with `rc` monotone in `n`.
    pub samples: Vec<(usize, u64)>,
    /// Start terms whose evaluation ran out of fuel.
    pub exhausted: usize,
    pub exponent: f64,
    pub super_polynomial: bool,
    pub flagged: bool,
}

/// Least-squares slope of `ln dl` against `ln n` over the points with
/// `n >= 2` and `dl >= 1`; 0 with fewer than two such points.
pub fn fit_exponent(samples: &[(usize, u64)]) -> f64 {
    let pts: Vec<(f64, f64)> = samples
        .iter()
        .filter(|&&(n, d)| n >= 2 && d >= 1)
        .map(|&(n, d)| ((n as f64).ln(), (d as f64).ln()))
        .collect();
    if pts.len() < 2 {
        return 0.0;
    }
    let k = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx == 0.0 {
        0.0
    } else {
        sxy / sxx
    }
}

/// Super-polynomial when the last `window` consecutive ratios
/// `dl(n+1) / dl(n)` (over nonzero values) are all at least `ratio`.
pub fn doubling_ratio_test(values: &[u64], window: usize, ratio: f64) -> bool {
    let tail: Vec<u64> = values.iter().copied().skip_while(|&d| d == 0).collect();
    if window == 0 || tail.len() < window + 1 {
        return false;
    }
    tail.windows(2)
        .rev()
        .take(window)
        .all(|w| w[1] as f64 >= ratio * w[0] as f64)
}

pub fn empirical_validate(
    trs: &Trs,
    max_size: usize,
    fuel: u64,
) -> Result<EmpiricalReport, RcError> {
    empirical_validate_with(
        trs,
        &EmpiricalConfig {
            max_size,
            fuel,
            ..EmpiricalConfig::default()
        },
    )
}

pub fn empirical_validate_with(
    trs: &Trs,
    config: &EmpiricalConfig,
) -> Result<EmpiricalReport, RcError> {
    let sample_config = SampleConfig {
        cap_per_size: config.cap_per_size,
        overflow: Overflow::Sample { seed: config.seed },
    };
    let rc = rc_samples(trs, config.max_size, config.fuel, &sample_config)?;
    let samples: Vec<(usize, u64)> = rc.iter().map(|s| (s.size, s.max_dl)).collect();
    let exhausted = rc.iter().map(|s| s.exhausted).sum();
    let exponent = fit_exponent(&samples);
    let dls: Vec<u64> = samples.iter().map(|s| s.1).collect();
    let super_polynomial = doubling_ratio_test(&dls, 3, DOUBLING_RATIO);
    Ok(EmpiricalReport {
        samples,
        exhausted,
        exponent,
        super_polynomial,
        flagged: super_polynomial || exponent > config.exponent_threshold || exhausted > 0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trs::parse_trs;

    #[test]
    fn fitting() {
        let cubic: Vec<(usize, u64)> = (1..=12).map(|n| (n, (n * n * n) as u64)).collect();
        assert!((fit_exponent(&cubic) - 3.0).abs() < 1e-9);
        assert_eq!(fit_exponent(&[(1, 5), (2, 0)]), 0.0);
        assert!(doubling_ratio_test(&[0, 1, 2, 4, 8, 16], 3, 1.5));
        assert!(!doubling_ratio_test(
            &[100, 121, 144, 169, 196, 225],
            3,
            1.5
        ));
        assert!(!doubling_ratio_test(&[0, 0, 1], 3, 1.5));
    }

    #[test]
    fn constructor_only_system() {
        let trs = parse_trs("(VAR x)(RULES)").unwrap();
        let r = empirical_validate(&trs, 6, 1000).unwrap();
        assert!(r.samples.iter().all(|s| s.1 == 0));
        assert_eq!(r.exponent, 0.0);
        assert!(!r.flagged);
    }
}
