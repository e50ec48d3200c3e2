//! Factor checking with truncated quadratic Gauss sums, and an exact
//! two-level simulation of the differential-excitation NMR experiment that
//! evaluates them.
//!
//! The crate is organised bottom-up:
//!
//! * [`exponential_sums`] evaluates the sums themselves. Phases are carried as
//!   exact integer residues `m^j * N mod l`, so a trial factor yields exactly
//!   `1 + 0i` and anything else yields a magnitude below one.
//! * [`nmr`] builds the pulse propagators, composes them in time order, forms
//!   the single-rotation approximation, and recovers the sum from a simulated
//!   signal.
//! * [`sweep`] runs trial-factor sweeps, ghost-factor scans, continuous-`f`
//!   scans and full factorisations on top of the two above.
//! * [`primes`] holds the sieve used for trial enumeration and prime counting.
//!
//! Every batch operation takes an [`Execution`] so the same work can be run
//! on the rayon pool or on the calling thread. With the `parallel` feature
//! disabled the parallel variant silently runs serially.

pub mod error;
pub mod exec;
pub mod exponential_sums;
pub mod nmr;
pub mod primes;
pub mod sweep;

pub use error::{Error, Result};
pub use exec::Execution;
pub use exponential_sums::{
    classify, continuous_sum, divisibility_witness, gauss_sum, gauss_sum_sampled, phase_residues,
    truncation_bound, Amplitude, PhaseResidues, SumSpec, Verdict, DEFAULT_THRESHOLD,
};
pub use nmr::{
    estimate_gauss, estimate_gauss_with, first_order_propagator, phases_for, propagator_distance,
    pulse_propagator, sequence_propagator, simulate_signal, Mat2, Propagation, PulseSequence,
    Signal, SpinOperatorBasis, Unitary2, DEFAULT_THETA,
};
pub use sweep::{
    count_primes, count_primes_with, enumerate_trials, f_scan, f_scan_with, factorize, find_ghosts,
    find_ghosts_with, suppression_curve, sweep, sweep_with, FScan, FScanConfig, FScanPeak,
    GhostReport, MPolicy, PrimeCount, SweepConfig, SweepRow, TrialPolicy,
};
