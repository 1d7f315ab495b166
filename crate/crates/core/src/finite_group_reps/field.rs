//! Prime fields `F_l` that split every character of `GL_2(F_p)`.

use serde::Serialize;

use crate::arith::{is_prime, pow_mod, prime_factors};
use crate::{BmtError, Result};

/// Environment variable replacing the primary modulus (testing only).
pub const MODULUS_OVERRIDE_ENV: &str = "BMT_MODULUS_OVERRIDE";

const MAX_MODULUS: u64 = 1 << 31;

#[inline]
pub fn add(a: u64, b: u64, m: u64) -> u64 {
    let s = a + b;
    if s >= m {
        s - m
    } else {
        s
    }
}

#[inline]
pub fn sub(a: u64, b: u64, m: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + m - b
    }
}

#[inline]
pub fn mul(a: u64, b: u64, m: u64) -> u64 {
    a * b % m
}

pub fn inv(a: u64, m: u64) -> Option<u64> {
    (a % m != 0).then(|| pow_mod(a, m - 2, m))
}

/// Residue of a signed integer.
pub fn from_i64(a: i64, m: u64) -> u64 {
    a.rem_euclid(m as i64) as u64
}

/// Symmetric lift into `(-m/2, m/2]`.
pub fn lift(a: u64, m: u64) -> i64 {
    if a > m / 2 {
        a as i64 - m as i64
    } else {
        a as i64
    }
}

/// One splitting modulus together with the fixed roots of unity.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Modulus {
    pub ell: u64,
    /// Primitive `(p^2 - 1)`-th root of unity: the lift of the chosen
    /// generator of `F_{p^2}^x`.
    pub omega: u64,
    /// Primitive `p`-th root of unity used for Gauss sums.
    pub zeta_p: u64,
    #[serde(skip)]
    omega_powers: Vec<u64>,
}

impl Modulus {
    fn new(p: u64, ell: u64) -> Self {
        let h = primitive_root(ell);
        let order = p * p - 1;
        let omega = pow_mod(h, (ell - 1) / order, ell);
        let zeta_p = pow_mod(h, (ell - 1) / p, ell);
        let mut omega_powers = Vec::with_capacity(order as usize);
        let mut x = 1;
        for _ in 0..order {
            omega_powers.push(x);
            x = mul(x, omega, ell);
        }
        Self { ell, omega, zeta_p, omega_powers }
    }

    /// `omega^k` for any integer exponent.
    #[inline]
    pub fn omega_pow(&self, k: i64) -> u64 {
        let n = self.omega_powers.len() as i64;
        self.omega_powers[k.rem_euclid(n) as usize]
    }
}

fn primitive_root(ell: u64) -> u64 {
    let factors = prime_factors(ell - 1);
    (2..ell)
        .find(|&g| factors.iter().all(|&q| pow_mod(g, (ell - 1) / q, ell) != 1))
        .expect("every prime has a primitive root")
}

/// Lower bound for admissible moduli: `4 (p + 1) D`.
pub fn modulus_bound(p: u64, capacity: u64) -> u64 {
    4 * (p + 1) * capacity
}

fn admissible(p: u64, capacity: u64, ell: u64) -> Result<()> {
    let step = p * (p * p - 1);
    if !is_prime(ell) {
        return Err(BmtError::InvalidArgument(format!("modulus {ell} is not prime")));
    }
    if ell % step != 1 {
        return Err(BmtError::InvalidArgument(format!(
            "modulus {ell} is not 1 mod {step}"
        )));
    }
    if ell <= modulus_bound(p, capacity) || ell >= MAX_MODULUS {
        return Err(BmtError::InvalidArgument(format!(
            "modulus {ell} outside ({}, 2^31)",
            modulus_bound(p, capacity)
        )));
    }
    Ok(())
}

fn next_admissible(p: u64, capacity: u64, after: u64) -> Result<u64> {
    let step = p * (p * p - 1);
    let mut ell = (after.max(modulus_bound(p, capacity)) / step + 1) * step + 1;
    while ell < MAX_MODULUS {
        if is_prime(ell) {
            return Ok(ell);
        }
        ell += step;
    }
    Err(BmtError::InvalidArgument(format!(
        "no modulus below 2^31 for p = {p} and dimension capacity {capacity}"
    )))
}

/// The two independent moduli for `p`. The primary one can be replaced
/// through [`MODULUS_OVERRIDE_ENV`].
pub fn choose_moduli(p: u64, capacity: u64) -> Result<[Modulus; 2]> {
    let primary_default = next_admissible(p, capacity, 0)?;
    let secondary_default = next_admissible(p, capacity, primary_default)?;
    let primary = match std::env::var(MODULUS_OVERRIDE_ENV) {
        Ok(raw) => {
            let ell: u64 = raw.trim().parse().map_err(|_| BmtError::Parse {
                what: "modulus override",
                detail: raw.clone(),
            })?;
            admissible(p, capacity, ell)?;
            ell
        }
        Err(_) => primary_default,
    };
    let secondary = if primary == secondary_default {
        next_admissible(p, capacity, secondary_default)?
    } else if primary == primary_default {
        secondary_default
    } else {
        primary_default
    };
    Ok([Modulus::new(p, primary), Modulus::new(p, secondary)])
}

/// Inverse of a square matrix over `F_m` by Gauss-Jordan elimination.
pub fn invert(matrix: &[Vec<u64>], m: u64) -> Option<Vec<Vec<u64>>> {
    let n = matrix.len();
    let mut a: Vec<Vec<u64>> = matrix
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| u64::from(i == j)));
            r
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| a[r][col] != 0)?;
        a.swap(col, pivot);
        let scale = inv(a[col][col], m)?;
        for x in a[col].iter_mut() {
            *x = mul(*x, scale, m);
        }
        let pivot_row = a[col].clone();
        for (r, row) in a.iter_mut().enumerate() {
            if r == col || row[col] == 0 {
                continue;
            }
            let f = row[col];
            for (x, &y) in row.iter_mut().zip(&pivot_row) {
                *x = sub(*x, mul(f, y, m), m);
            }
        }
    }
    Some(a.into_iter().map(|row| row[n..].to_vec()).collect())
}

/// `sum a_i b_i mod m` with a single reduction.
#[inline]
pub fn dot(a: &[u64], b: &[u64], m: u64) -> u64 {
    let s: u128 = a.iter().zip(b).map(|(&x, &y)| (x * y) as u128).sum();
    (s % m as u128) as u64
}
