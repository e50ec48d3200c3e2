//! Sieve of Eratosthenes and a segmented prime counter.

use crate::exec::Execution;

const SEGMENT: u64 = 1 << 16;

/// All primes `<= limit`, ascending.
pub fn primes_up_to(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let limit = usize::try_from(limit).expect("sieve limit exceeds address space");
    let mut composite = vec![false; limit + 1];
    let mut p = 2;
    while p * p <= limit {
        if !composite[p] {
            for multiple in (p * p..=limit).step_by(p) {
                composite[multiple] = true;
            }
        }
        p += 1;
    }
    (2..=limit)
        .filter(|&k| !composite[k])
        .map(|k| k as u64)
        .collect()
}

/// `pi(x)`, the number of primes `<= x`.
///
/// Memory is `O(sqrt x)`: only the base primes and one segment per worker
/// are held at a time.
pub fn prime_pi(x: u64, exec: Execution) -> u64 {
    if x < 2 {
        return 0;
    }
    let base = primes_up_to(x.isqrt());
    let segments = x / SEGMENT;
    exec.map_range(0..=segments, |k| {
        let lo = k * SEGMENT;
        let hi = (lo + SEGMENT - 1).min(x);
        count_segment(lo, hi, &base)
    })
    .into_iter()
    .sum()
}

fn count_segment(lo: u64, hi: u64, base: &[u64]) -> u64 {
    let len = (hi - lo + 1) as usize;
    let mut composite = vec![false; len];
    for &p in base {
        if p * p > hi {
            break;
        }
        let first = (p * p).max(lo.div_ceil(p) * p);
        let mut k = first;
        while k <= hi {
            composite[(k - lo) as usize] = true;
            k += p;
        }
    }
    let skip = 2u64.saturating_sub(lo).min(len as u64) as usize;
    composite[skip..].iter().filter(|c| !**c).count() as u64
}
