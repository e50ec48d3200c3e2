//! Two-level (spin-1/2) simulation of the differential-excitation experiment.
//!
//! Each pulse is a rotation by the flip angle `theta` about a transverse axis
//! at phase `phi_m`:
//!
//! ```text
//! U_m = exp(-i theta (I_x cos phi_m + I_y sin phi_m))
//! ```
//!
//! The train is the time-ordered product `U_M ... U_1 U_0`. For small `theta`
//! the pulses nearly commute and the train is close to one rotation whose
//! axis and angle come from the phasor sum `sum_m exp(i phi_m)`. The detected
//! signal then carries the complex conjugate of the Gauss sum, up to a scale
//! removed by dividing by an all-zero-phase reference train.

use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exponential_sums::{phase_residues, Amplitude, SumSpec};

/// Frobenius tolerance for accepting a matrix as unitary.
pub const UNITARY_TOLERANCE: f64 = 1e-12;

/// Default flip angle per pulse, in radians.
pub const DEFAULT_THETA: f64 = 1e-3;

/// Largest truncation the default flip angle is meant for.
pub const SMALL_ANGLE_MAX_M: u64 = 100;

/// Reference signals smaller than this are treated as vanishing.
const REFERENCE_FLOOR: f64 = 1e-12;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const HALF: Complex64 = Complex64::new(0.5, 0.0);
const HALF_I: Complex64 = Complex64::new(0.0, 0.5);

/// General 2x2 complex matrix, row-major.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat2(pub [[Complex64; 2]; 2]);

impl Mat2 {
    pub const IDENTITY: Mat2 = Mat2([[ONE, ZERO], [ZERO, ONE]]);
    pub const ZERO: Mat2 = Mat2([[ZERO, ZERO], [ZERO, ZERO]]);

    pub fn scale(&self, k: Complex64) -> Mat2 {
        let a = &self.0;
        Mat2([[a[0][0] * k, a[0][1] * k], [a[1][0] * k, a[1][1] * k]])
    }

    pub fn adjoint(&self) -> Mat2 {
        let a = &self.0;
        Mat2([
            [a[0][0].conj(), a[1][0].conj()],
            [a[0][1].conj(), a[1][1].conj()],
        ])
    }

    pub fn trace(&self) -> Complex64 {
        self.0[0][0] + self.0[1][1]
    }

    pub fn det(&self) -> Complex64 {
        self.0[0][0] * self.0[1][1] - self.0[0][1] * self.0[1][0]
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.0
            .iter()
            .flatten()
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// `A B - B A`.
    pub fn commutator(&self, other: &Mat2) -> Mat2 {
        *self * *other - *other * *self
    }
}

impl Mul for Mat2 {
    type Output = Mat2;

    fn mul(self, rhs: Mat2) -> Mat2 {
        let (a, b) = (&self.0, &rhs.0);
        Mat2([
            [
                a[0][0] * b[0][0] + a[0][1] * b[1][0],
                a[0][0] * b[0][1] + a[0][1] * b[1][1],
            ],
            [
                a[1][0] * b[0][0] + a[1][1] * b[1][0],
                a[1][0] * b[0][1] + a[1][1] * b[1][1],
            ],
        ])
    }
}

impl Add for Mat2 {
    type Output = Mat2;

    fn add(self, rhs: Mat2) -> Mat2 {
        let (a, b) = (&self.0, &rhs.0);
        Mat2([
            [a[0][0] + b[0][0], a[0][1] + b[0][1]],
            [a[1][0] + b[1][0], a[1][1] + b[1][1]],
        ])
    }
}

impl Sub for Mat2 {
    type Output = Mat2;

    fn sub(self, rhs: Mat2) -> Mat2 {
        self + rhs.scale(Complex64::new(-1.0, 0.0))
    }
}

/// Spin-1/2 product operators, `I_k = sigma_k / 2`.
pub struct SpinOperatorBasis;

impl SpinOperatorBasis {
    pub const IX: Mat2 = Mat2([[ZERO, HALF], [HALF, ZERO]]);
    pub const IY: Mat2 = Mat2([[ZERO, Complex64::new(0.0, -0.5)], [HALF_I, ZERO]]);
    pub const IZ: Mat2 = Mat2([[HALF, ZERO], [ZERO, Complex64::new(-0.5, 0.0)]]);

    /// Transverse operator at phase `phi`: `I_x cos phi + I_y sin phi`.
    pub fn transverse(phi: f64) -> Mat2 {
        let (s, c) = phi.sin_cos();
        Self::IX.scale(Complex64::new(c, 0.0)) + Self::IY.scale(Complex64::new(s, 0.0))
    }
}

/// A 2x2 unitary.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Unitary2(Mat2);

impl Unitary2 {
    pub const IDENTITY: Unitary2 = Unitary2(Mat2::IDENTITY);

    /// Accepts `m` if `|m m^dagger - 1|_F` and `||det m| - 1|` are both within
    /// [`UNITARY_TOLERANCE`].
    pub fn new(m: Mat2) -> Result<Self> {
        let u = Unitary2(m);
        let dev = u.unitarity_deviation();
        if dev > UNITARY_TOLERANCE {
            return Err(Error::NonUnitary(dev));
        }
        Ok(u)
    }

    /// Wraps `m` without checking. [`simulate_signal`] still rejects it if it
    /// is not unitary.
    pub fn new_unchecked(m: Mat2) -> Self {
        Unitary2(m)
    }

    pub fn matrix(&self) -> &Mat2 {
        &self.0
    }

    pub fn adjoint(&self) -> Unitary2 {
        Unitary2(self.0.adjoint())
    }

    /// Larger of the two unitarity defects.
    pub fn unitarity_deviation(&self) -> f64 {
        let gram = (self.0 * self.0.adjoint() - Mat2::IDENTITY).frobenius_norm();
        let det = (self.0.det().norm() - 1.0).abs();
        if gram.is_nan() || det.is_nan() {
            return f64::INFINITY;
        }
        gram.max(det)
    }
}

impl Mul for Unitary2 {
    type Output = Unitary2;

    fn mul(self, rhs: Unitary2) -> Unitary2 {
        Unitary2(self.0 * rhs.0)
    }
}

/// Flip angle and the ordered pulse phases.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PulseSequence {
    theta: f64,
    phases: Vec<f64>,
}

impl PulseSequence {
    /// Phases are reduced into `[0, 2 pi)`. A total rotation of `pi` or more
    /// leaves the small-angle regime and is logged, not rejected.
    pub fn new(theta: f64, phases: Vec<f64>) -> Result<Self> {
        if !theta.is_finite() || theta <= 0.0 {
            return Err(Error::InvalidFlipAngle(theta));
        }
        if let Some(&bad) = phases.iter().find(|p| !p.is_finite()) {
            return Err(Error::NonFinitePhase(bad));
        }
        let phases = phases.into_iter().map(canonical_phase).collect::<Vec<_>>();
        let total = theta * phases.len() as f64;
        if total >= std::f64::consts::PI {
            log::warn!(
                "total flip angle {total:.6} rad is outside the small-angle regime; \
                 the single-rotation approximation will be poor"
            );
        }
        Ok(PulseSequence { theta, phases })
    }

    /// Sequence for the quadratic sum of `(n, l, m)`.
    pub fn for_trial(theta: f64, n: u64, l: u64, m: u64) -> Result<Self> {
        if m > SMALL_ANGLE_MAX_M && theta >= DEFAULT_THETA {
            log::warn!("M = {m} exceeds {SMALL_ANGLE_MAX_M}; consider a smaller flip angle");
        }
        Self::new(theta, phases_for(n, l, m)?)
    }

    /// Sequence of `len` pulses, all at phase zero.
    pub fn reference(theta: f64, len: usize) -> Result<Self> {
        Self::new(theta, vec![0.0; len])
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn phases(&self) -> &[f64] {
        &self.phases
    }

    pub fn len(&self) -> usize {
        self.phases.len()
    }

    pub fn is_empty(&self) -> bool {
        self.phases.is_empty()
    }
}

fn canonical_phase(phi: f64) -> f64 {
    let tau = std::f64::consts::TAU;
    let p = phi.rem_euclid(tau);
    if p >= tau {
        0.0
    } else {
        p
    }
}

/// Complex transverse magnetisation, scaled so a 90 degree pulse on the
/// equilibrium state has magnitude 1.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Signal {
    pub re: f64,
    pub im: f64,
}

impl Signal {
    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }

    pub fn magnitude(&self) -> f64 {
        self.re.hypot(self.im)
    }
}

/// Pulse phases `phi_m = 2 pi (m^2 N mod l) / l`.
pub fn phases_for(n: u64, l: u64, m: u64) -> Result<Vec<f64>> {
    Ok(phase_residues(&SumSpec::quadratic(n, l, m)?).phases())
}

/// Rotation by `angle` about the transverse axis whose direction is the unit
/// phasor `axis = exp(i phi)`.
fn rotation(angle: f64, axis: Complex64) -> Unitary2 {
    let (s, c) = (0.5 * angle).sin_cos();
    let minus_i_s = Complex64::new(0.0, -s);
    Unitary2(Mat2([
        [Complex64::new(c, 0.0), minus_i_s * axis.conj()],
        [minus_i_s * axis, Complex64::new(c, 0.0)],
    ]))
}

/// `exp(-i theta (I_x cos phi + I_y sin phi))` in closed form.
pub fn pulse_propagator(theta: f64, phi: f64) -> Unitary2 {
    rotation(theta, Complex64::from_polar(1.0, phi))
}

/// Time-ordered product `U_M ... U_1 U_0`; the first phase acts first.
pub fn sequence_propagator(seq: &PulseSequence) -> Unitary2 {
    seq.phases.iter().fold(Unitary2::IDENTITY, |acc, &phi| {
        pulse_propagator(seq.theta, phi) * acc
    })
}

/// The combined-pulse approximation: one rotation by `theta |S|` about the
/// axis `arg S`, with `S = sum_m exp(i phi_m)`. A vanishing phasor sum gives
/// the identity.
pub fn first_order_propagator(seq: &PulseSequence) -> Unitary2 {
    let phasor: Complex64 = seq
        .phases
        .iter()
        .map(|&p| Complex64::from_polar(1.0, p))
        .sum();
    let length = phasor.norm();
    if length == 0.0 {
        return Unitary2::IDENTITY;
    }
    rotation(seq.theta * length, phasor / length)
}

/// Evolves the deviation state `I_z` under `u` and reads out
/// `2 (<I_x> + i <I_y>)`.
pub fn simulate_signal(u: &Unitary2) -> Result<Signal> {
    let dev = u.unitarity_deviation();
    if dev > UNITARY_TOLERANCE {
        return Err(Error::NonUnitary(dev));
    }
    let rho = u.0 * SpinOperatorBasis::IZ * u.0.adjoint();
    let raising = SpinOperatorBasis::IX + SpinOperatorBasis::IY.scale(Complex64::i());
    let value = (rho * raising).trace() * 2.0;
    Ok(Signal {
        re: value.re,
        im: value.im,
    })
}

/// Which propagator drives a simulated train.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub enum Propagation {
    /// Time-ordered product of the individual pulses.
    #[default]
    Exact,
    /// Single combined rotation.
    FirstOrder,
}

impl Propagation {
    pub fn propagator(self, seq: &PulseSequence) -> Unitary2 {
        match self {
            Propagation::Exact => sequence_propagator(seq),
            Propagation::FirstOrder => first_order_propagator(seq),
        }
    }
}

/// Recovers the Gauss sum from the simulated signal of `seq`, normalised by
/// the same train with every phase set to zero.
///
/// To first order the signal is proportional to `sum_m exp(+i phi_m)`, the
/// conjugate of the sum, hence the final conjugation. The error is
/// `O(theta^2)`.
pub fn estimate_gauss(seq: &PulseSequence) -> Result<Amplitude> {
    estimate_gauss_with(seq, Propagation::Exact)
}

pub fn estimate_gauss_with(seq: &PulseSequence, propagation: Propagation) -> Result<Amplitude> {
    let total_angle = seq.theta * seq.len() as f64;
    let s = simulate_signal(&propagation.propagator(seq))?;
    let reference = PulseSequence {
        theta: seq.theta,
        phases: vec![0.0; seq.len()],
    };
    let s_ref = simulate_signal(&propagation.propagator(&reference))?;
    if s_ref.magnitude() < REFERENCE_FLOOR {
        return Err(Error::VanishingReference { total_angle });
    }
    if s == s_ref {
        return Ok(Amplitude::ONE);
    }
    Ok(Amplitude::from((s.value() / s_ref.value()).conj()))
}

/// `min_alpha |a - exp(i alpha) b|_F`.
pub fn propagator_distance(a: &Unitary2, b: &Unitary2) -> f64 {
    let overlap = (b.0.adjoint() * a.0).trace();
    let phase = if overlap.norm() == 0.0 {
        ONE
    } else {
        overlap / overlap.norm()
    };
    (a.0 - b.0.scale(phase)).frobenius_norm()
}
