//! Independent reference implementations shared by the integration tests.
//! Nothing here calls into the crate's evaluation paths.

#![allow(dead_code)]

use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Direct summation with floating phases `N m^2 / l`, reduced to `[0, 1)` in
/// floating point before taking the exponential.
pub fn naive_gauss(n: u64, l: u64, m_max: u64) -> Complex64 {
    let total: Complex64 = (0..=m_max).map(|m| naive_term(n, l, m)).sum();
    total / (m_max + 1) as f64
}

pub fn naive_term(n: u64, l: u64, m: u64) -> Complex64 {
    let x = (n as f64) * (m * m) as f64 / l as f64;
    let frac = x - x.floor();
    Complex64::from_polar(1.0, -TAU * frac)
}

/// Direct summation with the residue taken from the full product
/// `m^2 * N` in 128-bit integers.
pub fn brute_gauss(n: u64, l: u64, m_max: u64) -> Complex64 {
    let mut total = Complex64::new(0.0, 0.0);
    for m in 0..=m_max {
        let r = ((m as u128 * m as u128) * n as u128) % l as u128;
        total += Complex64::from_polar(1.0, -TAU * (r as f64) / (l as f64));
    }
    total / (m_max + 1) as f64
}

pub fn fourth_root_ceiling(n: u64) -> u64 {
    (0u64..).find(|m| (*m as u128).pow(4) >= n as u128).unwrap()
}

/// Plain Eratosthenes, returning a primality table for `0..=limit`.
pub fn prime_table(limit: usize) -> Vec<bool> {
    let mut is_prime = vec![true; limit + 1];
    is_prime[0] = false;
    if limit >= 1 {
        is_prime[1] = false;
    }
    let mut p = 2;
    while p * p <= limit {
        if is_prime[p] {
            let mut k = p * p;
            while k <= limit {
                is_prime[k] = false;
                k += p;
            }
        }
        p += 1;
    }
    is_prime
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &p in &WITNESSES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'outer: for &a in &WITNESSES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

/// Number of prime factors with multiplicity, by trial division.
pub fn big_omega(mut n: u64) -> u32 {
    let mut count = 0;
    let mut d = 2;
    while d * d <= n {
        while n.is_multiple_of(d) {
            n /= d;
            count += 1;
        }
        d += 1;
    }
    if n > 1 {
        count += 1;
    }
    count
}

/// The threshold calibration set: `10^4 ..= 10^4 + 100`, `157573`, and 100
/// semiprimes drawn uniformly from `[2, 10^8]` with a fixed seed.
pub fn calibration_set() -> Vec<u64> {
    let mut set: Vec<u64> = (10_000..=10_100).collect();
    set.push(157_573);
    let mut rng = ChaCha8Rng::seed_from_u64(0x67_6175_7373);
    let mut semiprimes = Vec::new();
    while semiprimes.len() < 100 {
        let n = rng.gen_range(2..=100_000_000u64);
        if big_omega(n) == 2 && !semiprimes.contains(&n) {
            semiprimes.push(n);
        }
    }
    set.extend(semiprimes);
    set
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CalibrationRow {
    pub n: u64,
    pub m_suppressed: u64,
    pub max_at_m1: f64,
    pub max_at_suppressed: f64,
    pub ghosts_at_m1: usize,
}

/// Brute-force ghost scan of one `N` over non-factors `2..=floor(sqrt N)`.
pub fn calibrate(n: u64, ghost_threshold: f64) -> CalibrationRow {
    let m_suppressed = fourth_root_ceiling(n);
    let top = (n as f64).sqrt() as u64;
    let top = (top.saturating_sub(2)..=top + 2)
        .filter(|t| t * t <= n)
        .max()
        .unwrap();
    let mut row = CalibrationRow {
        n,
        m_suppressed,
        max_at_m1: 0.0,
        max_at_suppressed: 0.0,
        ghosts_at_m1: 0,
    };
    for l in (2..=top).filter(|l| !n.is_multiple_of(*l)) {
        let small = brute_gauss(n, l, 1).norm();
        let suppressed = brute_gauss(n, l, m_suppressed).norm();
        row.max_at_m1 = row.max_at_m1.max(small);
        row.max_at_suppressed = row.max_at_suppressed.max(suppressed);
        if small >= ghost_threshold {
            row.ghosts_at_m1 += 1;
        }
    }
    row
}

/// Threshold rule: midpoint between the worst suppressed non-factor and 1,
/// rounded down to two decimals.
pub fn calibrated_threshold(worst_suppressed: f64) -> f64 {
    ((1.0 + worst_suppressed) / 2.0 * 100.0).floor() / 100.0
}

pub const CALIBRATION_FIXTURE: &str = include_str!("../fixtures/calibration.csv");

pub struct CalibrationFixture {
    pub threshold: f64,
    pub rows: Vec<CalibrationRow>,
}

pub fn load_calibration() -> CalibrationFixture {
    let mut threshold = None;
    let mut rows = Vec::new();
    for line in CALIBRATION_FIXTURE.lines() {
        if let Some(rest) = line.strip_prefix("# calibrated_threshold=") {
            threshold = Some(rest.trim().parse().unwrap());
            continue;
        }
        if line.starts_with('#') || line.starts_with("n,") || line.is_empty() {
            continue;
        }
        let f: Vec<&str> = line.split(',').collect();
        rows.push(CalibrationRow {
            n: f[0].parse().unwrap(),
            m_suppressed: f[1].parse().unwrap(),
            max_at_m1: f[2].parse().unwrap(),
            max_at_suppressed: f[3].parse().unwrap(),
            ghosts_at_m1: f[4].parse().unwrap(),
        });
    }
    CalibrationFixture {
        threshold: threshold.expect("threshold line"),
        rows,
    }
}

pub type M2 = [[Complex64; 2]; 2];

pub fn m2_mul(a: &M2, b: &M2) -> M2 {
    let mut out = [[Complex64::new(0.0, 0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                out[i][j] += a[i][k] * b[k][j];
            }
        }
    }
    out
}

/// `exp(a)` by Taylor series on `a / 2^s`, then `s` squarings.
pub fn m2_expm(a: &M2) -> M2 {
    let norm: f64 = a.iter().flatten().map(|z| z.norm()).sum();
    let s = if norm > 0.5 {
        (norm / 0.5).log2().ceil() as i32
    } else {
        0
    };
    let scale = 0.5f64.powi(s);
    let scaled = a.map(|row| row.map(|z| z * scale));
    let mut term = [
        [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)],
        [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)],
    ];
    let mut sum = term;
    for k in 1..30 {
        term = m2_mul(&term, &scaled).map(|row| row.map(|z| z / k as f64));
        for i in 0..2 {
            for j in 0..2 {
                sum[i][j] += term[i][j];
            }
        }
    }
    for _ in 0..s {
        sum = m2_mul(&sum, &sum);
    }
    sum
}

/// `-i theta (I_x cos phi + I_y sin phi)` written out from the Pauli matrices.
pub fn pulse_generator(theta: f64, phi: f64) -> M2 {
    let half = 0.5 * theta;
    let off_upper = Complex64::new(phi.cos(), -phi.sin()) * half;
    let off_lower = Complex64::new(phi.cos(), phi.sin()) * half;
    let minus_i = Complex64::new(0.0, -1.0);
    [
        [Complex64::new(0.0, 0.0), minus_i * off_upper],
        [minus_i * off_lower, Complex64::new(0.0, 0.0)],
    ]
}

pub fn m2_distance(a: &M2, b: &M2) -> f64 {
    let mut acc = 0.0;
    for i in 0..2 {
        for j in 0..2 {
            acc += (a[i][j] - b[i][j]).norm_sqr();
        }
    }
    acc.sqrt()
}
