//! Counting connected surfaces uF + vG on each line u + v = n, next to
//! Euler's totient.

use serde::Serialize;
use thiserror::Error;

use crate::reduction::{components_via_reduction, ReductionError};
use crate::surface::{coordinates, glue_components, SurfaceCoefficients, SurfaceError};
use crate::triangulation::Triangulation;

/// Largest `max_n` accepted by [`CensusMethod::Oracle`].
pub const ORACLE_CAP: u64 = 64;

#[derive(Debug, Error)]
pub enum CensusError {
    #[error("totient is undefined at 0")]
    Zero,
    #[error("census needs max_n >= 1")]
    EmptyCensus,
    #[error("the gluing oracle is limited to max_n <= {ORACLE_CAP}, got {0}")]
    OracleCap(u64),
    #[error("census of {0} rows is too large to hold in memory")]
    TooLarge(u64),
    #[error(transparent)]
    Surface(#[from] SurfaceError),
    #[error(transparent)]
    Reduction(#[from] ReductionError),
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Euler's totient by trial division.
pub fn totient(n: u64) -> Result<u64, CensusError> {
    if n == 0 {
        return Err(CensusError::Zero);
    }
    let (mut m, mut phi) = (n, n);
    let mut p = 2u64;
    while p.saturating_mul(p) <= m {
        if m % p == 0 {
            while m % p == 0 {
                m /= p;
            }
            phi -= phi / p;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if m > 1 {
        phi -= phi / m;
    }
    Ok(phi)
}

/// `phi[n]` for `0 <= n <= max` (with `phi[0] = 0`), by a prime sieve.
pub fn totients_up_to(max: usize) -> Vec<u64> {
    let mut phi: Vec<u64> = (0..=max as u64).collect();
    for p in 2..=max {
        if phi[p] == p as u64 {
            for k in (p..=max).step_by(p) {
                phi[k] -= phi[k] / p as u64;
            }
        }
    }
    phi
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CensusMethod {
    /// Pairs with gcd(u, v) = 1, counted through the divisor lattice.
    Gcd,
    /// Euclid-style reduction of the normal form for every pair.
    Reduction,
    /// Disk-gluing component count for every pair.
    Oracle,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CensusRow {
    pub n: u64,
    pub count: u64,
    pub phi: u64,
    /// `None` for `n = 1`, where the totient identity is not claimed.
    pub agree: Option<bool>,
}

impl CensusRow {
    fn new(n: u64, count: u64, phi: u64) -> Self {
        CensusRow { n, count, phi, agree: (n > 1).then_some(count == phi) }
    }
}

/// Number of `(u, v)` with `u + v = n`, `u, v >= 0`, `gcd(u, v) = 1`, for each `n` in `0..=max`.
///
/// Every pair on the line `u + v = m` is `d` times a primitive pair on the
/// line `u + v = m / d`, with `d = gcd(u, v)` dividing `m`, so summing the
/// primitive counts over the divisors of `m` gives `m + 1`. Peeling off
/// proper divisors in increasing order recovers each count.
pub fn primitive_counts(max: usize) -> Vec<u64> {
    let mut count: Vec<i64> = (0..=max as i64).map(|m| m + 1).collect();
    count[0] = 0;
    for e in 1..=max {
        let c = count[e];
        for m in (2 * e..=max).step_by(e) {
            count[m] -= c;
        }
    }
    count.into_iter().map(|c| c as u64).collect()
}

/// Primitive pairs on the line `u + v = n`, one gcd per pair.
pub fn primitive_count_direct(n: u64) -> u64 {
    (0..=n).filter(|&u| gcd(u, n - u) == 1).count() as u64
}

fn connected_on_line(
    n: u64,
    mut components: impl FnMut(SurfaceCoefficients) -> Result<u64, CensusError>,
) -> Result<u64, CensusError> {
    let mut count = 0;
    for u in 0..=n {
        if components(SurfaceCoefficients::new(u, n - u)?)? == 1 {
            count += 1;
        }
    }
    Ok(count)
}

/// Rows `1..=max_n`.
pub fn census(max_n: u64, method: CensusMethod) -> Result<Vec<CensusRow>, CensusError> {
    if max_n == 0 {
        return Err(CensusError::EmptyCensus);
    }
    if method == CensusMethod::Oracle && max_n > ORACLE_CAP {
        return Err(CensusError::OracleCap(max_n));
    }
    let max = usize::try_from(max_n).ok().filter(|&m| m < usize::MAX / 16).ok_or(CensusError::TooLarge(max_n))?;
    let phi = totients_up_to(max);
    let counts: Vec<u64> = match method {
        CensusMethod::Gcd => primitive_counts(max),
        CensusMethod::Reduction => std::iter::once(Ok(0))
            .chain((1..=max_n).map(|n| connected_on_line(n, |c| Ok(components_via_reduction(c)?))))
            .collect::<Result<_, _>>()?,
        CensusMethod::Oracle => {
            let tri = Triangulation::k13n586();
            std::iter::once(Ok(0))
                .chain((1..=max_n).map(|n| {
                    connected_on_line(n, |c| Ok(glue_components(&coordinates(c), &tri)?.count() as u64))
                }))
                .collect::<Result<_, _>>()?
        }
    };
    Ok((1..=max).map(|n| CensusRow::new(n as u64, counts[n], phi[n])).collect())
}
