//! Trial-factor sweeps, factorisation, ghost-factor scans and continuous-`f`
//! scans.
//!
//! Verdicts here always come from the exact remainder `N mod l`. The sum's
//! magnitude is reported next to it, and a magnitude verdict that disagrees
//! with the remainder is logged as a bad-threshold diagnostic.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::exponential_sums::{
    classify, continuous_sum, gauss_sum, truncation_bound, SumSpec, Verdict, DEFAULT_THRESHOLD,
};
use crate::primes::{prime_pi, primes_up_to};

/// Magnitude a continuous-`f` grid point needs to count as a peak.
pub const PEAK_FLOOR: f64 = 1.0 - 1e-6;

/// How close `N/f` must be to an integer to be reported as one.
pub const INTEGER_TRIAL_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TrialPolicy {
    AllIntegers,
    PrimesOnly,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MPolicy {
    Fixed(u64),
    FourthRootCeiling,
}

impl MPolicy {
    pub fn resolve(self, n: u64) -> u64 {
        match self {
            MPolicy::Fixed(m) => m,
            MPolicy::FourthRootCeiling => truncation_bound(n),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub n: u64,
    pub l_min: u64,
    pub l_max: u64,
    pub trial_policy: TrialPolicy,
    pub m_policy: MPolicy,
    pub threshold: f64,
}

impl SweepConfig {
    pub fn new(n: u64, l_min: u64, l_max: u64) -> Result<Self> {
        let config = SweepConfig {
            n,
            l_min,
            l_max,
            trial_policy: TrialPolicy::AllIntegers,
            m_policy: MPolicy::FourthRootCeiling,
            threshold: DEFAULT_THRESHOLD,
        };
        config.validate()?;
        Ok(config)
    }

    pub fn with_trial_policy(mut self, policy: TrialPolicy) -> Self {
        self.trial_policy = policy;
        self
    }

    pub fn with_m_policy(mut self, policy: MPolicy) -> Self {
        self.m_policy = policy;
        self
    }

    pub fn with_threshold(mut self, threshold: f64) -> Result<Self> {
        self.threshold = threshold;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::NumberTooSmall(self.n));
        }
        if self.l_min < 2 || self.l_min > self.l_max || self.l_max > self.n {
            return Err(Error::InvalidTrialRange {
                n: self.n,
                l_min: self.l_min,
                l_max: self.l_max,
            });
        }
        check_threshold(self.threshold)
    }

    fn trials(&self) -> Vec<u64> {
        match self.trial_policy {
            TrialPolicy::AllIntegers => (self.l_min..=self.l_max).collect(),
            TrialPolicy::PrimesOnly => primes_up_to(self.l_max)
                .into_iter()
                .filter(|&p| p >= self.l_min)
                .collect(),
        }
    }
}

fn check_threshold(t: f64) -> Result<()> {
    if t > 0.0 && t < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidThreshold(t))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub l: u64,
    pub magnitude: f64,
    pub phase: f64,
    /// `N mod l`.
    pub remainder_witness: u64,
    /// Exact verdict, from the remainder.
    pub verdict: Verdict,
    /// What the magnitude threshold alone would have said.
    pub magnitude_verdict: Verdict,
}

impl SweepRow {
    pub fn disagrees(&self) -> bool {
        self.verdict != self.magnitude_verdict
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PrimeCount {
    pub exact: u64,
    /// `x / ln x`.
    pub estimate: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GhostReport {
    pub n: u64,
    pub ghost_threshold: f64,
    /// Non-factors whose magnitude at `m_small` reaches the ghost threshold.
    pub ghosts: Vec<(u64, f64)>,
    pub m_small: u64,
    pub m_suppressed: u64,
    /// `None` when every trial up to `sqrt N` divides `N`.
    pub max_nonfactor_magnitude_at_small: Option<f64>,
    pub max_nonfactor_magnitude_at_suppressed: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FScanConfig {
    pub f_min: f64,
    pub f_max: f64,
    pub step: f64,
    pub m: u64,
    pub n: u64,
}

impl FScanConfig {
    /// A one-point grid (`f_min == f_max`) is accepted.
    pub fn new(n: u64, f_min: f64, f_max: f64, step: f64, m: u64) -> Result<Self> {
        let config = FScanConfig {
            f_min,
            f_max,
            step,
            m,
            n,
        };
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        let finite = self.f_min.is_finite() && self.f_max.is_finite() && self.step.is_finite();
        if !finite || self.f_min > self.f_max || self.step <= 0.0 {
            return Err(Error::InvalidGrid {
                f_min: self.f_min,
                f_max: self.f_max,
                step: self.step,
            });
        }
        if self.n < 2 {
            return Err(Error::NumberTooSmall(self.n));
        }
        Ok(())
    }

    /// Grid points `f_min + k * step` up to `f_max`.
    pub fn grid(&self) -> Vec<f64> {
        let steps = ((self.f_max - self.f_min) / self.step + 1e-9).floor() as u64;
        (0..=steps)
            .map(|k| self.f_min + k as f64 * self.step)
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FScanPeak {
    pub f: f64,
    pub magnitude: f64,
    /// `N / f`, the trial factor this peak would correspond to.
    pub trial: f64,
    pub integer_trial: bool,
    /// `integer_trial` and the rounded trial divides `N`.
    pub divides: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FScan {
    pub points: Vec<(f64, f64)>,
    pub peaks: Vec<FScanPeak>,
}

/// Trial divisors `2..=floor(sqrt N)`, or the primes among them.
pub fn enumerate_trials(n: u64, policy: TrialPolicy) -> Result<Vec<u64>> {
    if n < 2 {
        return Err(Error::NumberTooSmall(n));
    }
    let top = n.isqrt();
    Ok(match policy {
        TrialPolicy::AllIntegers => (2..=top).collect(),
        TrialPolicy::PrimesOnly => primes_up_to(top),
    })
}

pub fn count_primes(x: u64) -> Result<PrimeCount> {
    count_primes_with(x, Execution::default())
}

pub fn count_primes_with(x: u64, exec: Execution) -> Result<PrimeCount> {
    if x < 2 {
        return Err(Error::NumberTooSmall(x));
    }
    Ok(PrimeCount {
        exact: prime_pi(x, exec),
        estimate: x as f64 / (x as f64).ln(),
    })
}

pub fn sweep(config: &SweepConfig) -> Result<Vec<SweepRow>> {
    sweep_with(config, Execution::default())
}

/// One row per trial, ascending in `l`, identical for either execution.
pub fn sweep_with(config: &SweepConfig, exec: Execution) -> Result<Vec<SweepRow>> {
    config.validate()?;
    let m = config.m_policy.resolve(config.n);
    let n = config.n;
    let threshold = config.threshold;
    let rows = exec.map_vec(config.trials(), |l| {
        let amplitude = gauss_sum(&spec_unchecked(n, l, m));
        let remainder_witness = n % l;
        let verdict = if remainder_witness == 0 {
            Verdict::Factor
        } else {
            Verdict::NonFactor
        };
        SweepRow {
            l,
            magnitude: amplitude.magnitude(),
            phase: amplitude.phase(),
            remainder_witness,
            verdict,
            magnitude_verdict: classify(&amplitude, threshold),
        }
    });
    for row in rows.iter().filter(|r| r.disagrees()) {
        log::warn!(
            "threshold {threshold} misclassifies l = {} (|A| = {}, N mod l = {})",
            row.l,
            row.magnitude,
            row.remainder_witness
        );
    }
    Ok(rows)
}

fn spec_unchecked(n: u64, l: u64, m: u64) -> SumSpec {
    SumSpec::quadratic(n, l, m).expect("validated by caller")
}

/// Prime factors of `n` in ascending order, with multiplicity.
///
/// The smallest divisor is found from the remainder, and each extracted
/// factor is also checked to give an exact unit Gauss sum.
pub fn factorize(n: u64) -> Result<Vec<u64>> {
    if n < 2 {
        return Err(Error::NumberTooSmall(n));
    }
    let mut factors = Vec::new();
    let mut rest = n;
    let mut l = 2u64;
    while l <= rest / l {
        if rest.is_multiple_of(l) {
            let check = gauss_sum(&SumSpec::suppressed(rest, l)?);
            assert!(check.is_exact_one(), "divisor {l} of {rest} gave {check:?}");
            factors.push(l);
            rest /= l;
        } else {
            l += if l == 2 { 1 } else { 2 };
        }
    }
    if rest > 1 {
        factors.push(rest);
    }
    Ok(factors)
}

pub fn find_ghosts(n: u64, m_small: u64, ghost_threshold: f64) -> Result<GhostReport> {
    find_ghosts_with(n, m_small, ghost_threshold, Execution::default())
}

/// Scans the non-factors in `2..=floor(sqrt N)` at `m_small` and at
/// [`truncation_bound`]`(N)`.
pub fn find_ghosts_with(
    n: u64,
    m_small: u64,
    ghost_threshold: f64,
    exec: Execution,
) -> Result<GhostReport> {
    if n < 2 {
        return Err(Error::NumberTooSmall(n));
    }
    let m_suppressed = truncation_bound(n);
    let top = n.isqrt();
    let scanned = exec.map_range(2..=top, |l| {
        if n.is_multiple_of(l) {
            return None;
        }
        let small = gauss_sum(&spec_unchecked(n, l, m_small)).magnitude();
        let suppressed = gauss_sum(&spec_unchecked(n, l, m_suppressed)).magnitude();
        Some((l, small, suppressed))
    });
    let nonfactors: Vec<_> = scanned.into_iter().flatten().collect();
    let max_of = |pick: fn(&(u64, f64, f64)) -> f64| {
        nonfactors
            .iter()
            .map(pick)
            .fold(None, |acc: Option<f64>, x| {
                Some(acc.map_or(x, |a| a.max(x)))
            })
    };
    Ok(GhostReport {
        n,
        ghost_threshold,
        ghosts: nonfactors
            .iter()
            .filter(|(_, small, _)| *small >= ghost_threshold)
            .map(|&(l, small, _)| (l, small))
            .collect(),
        m_small,
        m_suppressed,
        max_nonfactor_magnitude_at_small: max_of(|r| r.1),
        max_nonfactor_magnitude_at_suppressed: max_of(|r| r.2),
    })
}

/// `(M, |A(N, l, M)|)` for `M = 0..=m_max`.
pub fn suppression_curve(n: u64, l: u64, m_max: u64) -> Result<Vec<(u64, f64)>> {
    let base = SumSpec::quadratic(n, l, 0)?;
    Ok((0..=m_max)
        .map(|m| (m, gauss_sum(&base.with_m(m)).magnitude()))
        .collect())
}

pub fn f_scan(config: &FScanConfig) -> Result<FScan> {
    f_scan_with(config, Execution::default())
}

/// Samples [`continuous_sum`] on the grid and reports grid-local maxima at
/// or above [`PEAK_FLOOR`], each mapped back to the trial `N / f`.
pub fn f_scan_with(config: &FScanConfig, exec: Execution) -> Result<FScan> {
    config.validate()?;
    let m = config.m;
    let points: Vec<(f64, f64)> =
        exec.map_vec(config.grid(), |f| (f, continuous_sum(f, m).magnitude()));
    let mut peaks = Vec::new();
    for (k, &(f, magnitude)) in points.iter().enumerate() {
        let left = k.checked_sub(1).map_or(f64::NEG_INFINITY, |i| points[i].1);
        let right = points.get(k + 1).map_or(f64::NEG_INFINITY, |p| p.1);
        if magnitude >= PEAK_FLOOR && magnitude >= left && magnitude >= right {
            peaks.push(map_peak(config.n, f, magnitude));
        }
    }
    Ok(FScan { points, peaks })
}

fn map_peak(n: u64, f: f64, magnitude: f64) -> FScanPeak {
    let trial = n as f64 / f;
    let nearest = trial.round();
    let integer_trial = trial.is_finite() && (trial - nearest).abs() <= INTEGER_TRIAL_TOLERANCE;
    let divides = integer_trial && nearest >= 1.0 && n.is_multiple_of(nearest as u64);
    FScanPeak {
        f,
        magnitude,
        trial,
        integer_trial,
        divides,
    }
}
