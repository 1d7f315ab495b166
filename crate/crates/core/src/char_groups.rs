//! Tame characters of order dividing `n`, on inertia and on the Galois group.
//!
//! Inertial characters are modelled through the tame quotient `F_q^x`: the
//! character `x -> x^e` has exponent `e` in `Z/(q-1)`. A character of the
//! Galois group of order dividing `n` is its inertial restriction together
//! with the value on a fixed Frobenius, an `n`-th root of unity recorded as a
//! residue mod `n`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::arith::{gcd, prime_power, rem};
use crate::weight_lattice::{HodgeTypeGL, HodgeTypePGL};
use crate::{BmtError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TameChar {
    pub q: u64,
    #[serde(rename = "e")]
    pub exponent: u64,
}

impl TameChar {
    pub fn new(q: u64, exponent: i64) -> Self {
        Self { q, exponent: rem(exponent, q - 1) }
    }

    pub fn identity(q: u64) -> Self {
        Self { q, exponent: 0 }
    }

    pub fn mul(self, other: TameChar) -> TameChar {
        debug_assert_eq!(self.q, other.q);
        TameChar::new(self.q, (self.exponent + other.exponent) as i64)
    }

    pub fn inverse(self) -> TameChar {
        TameChar::new(self.q, -(self.exponent as i64))
    }

    /// Multiplicative order in the character group of `F_q^x`.
    pub fn order(self) -> u64 {
        (self.q - 1) / gcd(self.exponent, self.q - 1)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GammaChar {
    pub n: u64,
    pub unramified_part: u64,
    pub tame_part: TameChar,
}

impl GammaChar {
    pub fn restrict_to_inertia(self) -> TameChar {
        self.tame_part
    }
}

fn check_rank(n: u64, q: u64) -> Result<u64> {
    if n == 0 {
        return Err(BmtError::InvalidArgument("n must be positive".into()));
    }
    let (p, _) = prime_power(q).ok_or(BmtError::NotPrimePower(q))?;
    Ok(p)
}

/// `#G_I = gcd(n, q - 1)`, counting tame characters; `p | n` is allowed.
pub fn order_gi(n: u64, q: u64) -> Result<u64> {
    check_rank(n, q)?;
    Ok(gcd(n, q - 1))
}

pub fn enumerate_gi(n: u64, q: u64) -> Result<Vec<TameChar>> {
    let g = order_gi(n, q)?;
    let step = (q - 1) / g;
    Ok((0..g).map(|i| TameChar { q, exponent: i * step }).collect())
}

pub fn enumerate_ggamma(n: u64, q: u64) -> Result<Vec<GammaChar>> {
    let inertial = enumerate_gi(n, q)?;
    Ok(inertial
        .iter()
        .flat_map(|&tame_part| {
            (0..n).map(move |u| GammaChar { n, unramified_part: u, tame_part })
        })
        .collect())
}

/// A subgroup of `G_I`, stored as its sorted exponent list.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CharSubgroup {
    pub n: u64,
    pub q: u64,
    pub exponents: Vec<u64>,
}

impl CharSubgroup {
    pub fn new(n: u64, q: u64, exponents: impl IntoIterator<Item = u64>) -> Result<Self> {
        let ambient: Vec<u64> = enumerate_gi(n, q)?.iter().map(|c| c.exponent).collect();
        let mut exponents: Vec<u64> = exponents.into_iter().map(|e| e % (q - 1)).collect();
        exponents.sort_unstable();
        exponents.dedup();
        if !exponents.contains(&0) {
            return Err(BmtError::InvalidArgument("subgroup must contain the identity".into()));
        }
        for &a in &exponents {
            if !ambient.contains(&a) {
                return Err(BmtError::InvalidArgument(format!(
                    "exponent {a} is not a character of order dividing {n}"
                )));
            }
            for &b in &exponents {
                if exponents.binary_search(&((a + b) % (q - 1))).is_err() {
                    return Err(BmtError::InvalidArgument(format!(
                        "{exponents:?} is not closed under multiplication"
                    )));
                }
            }
        }
        Ok(Self { n, q, exponents })
    }

    pub fn trivial(n: u64, q: u64) -> Result<Self> {
        Self::new(n, q, [0])
    }

    pub fn whole(n: u64, q: u64) -> Result<Self> {
        Self::new(n, q, enumerate_gi(n, q)?.into_iter().map(|c| c.exponent))
    }

    pub fn order(&self) -> usize {
        self.exponents.len()
    }

    pub fn contains(&self, c: TameChar) -> bool {
        c.q == self.q && self.exponents.binary_search(&c.exponent).is_ok()
    }

    pub fn elements(&self) -> Vec<TameChar> {
        self.exponents.iter().map(|&e| TameChar { q: self.q, exponent: e }).collect()
    }

    /// The inverse image in `G_Gamma` under restriction to inertia.
    pub fn preimage_in_gamma(&self) -> Result<Vec<GammaChar>> {
        Ok(enumerate_ggamma(self.n, self.q)?
            .into_iter()
            .filter(|c| self.contains(c.tame_part))
            .collect())
    }
}

/// One representative per coset of `sub` in `G_I`: the smallest exponent.
pub fn quotient_reps(sub: &CharSubgroup) -> Result<Vec<TameChar>> {
    let mut reps: Vec<TameChar> = Vec::new();
    for c in enumerate_gi(sub.n, sub.q)? {
        let covered = reps.iter().any(|r| sub.contains(c.mul(r.inverse())));
        if !covered {
            reps.push(c);
        }
    }
    Ok(reps)
}

/// Inertial data of a determinant character `psi` in the `K = Q_p` model.
///
/// `tame_exponent` is the exponent of the reduction of `psi|_I` as a power of
/// the fundamental tame character; `hodge_shift` is the Hodge-Tate weight of
/// `psi` at each embedding.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PsiData {
    pub q: u64,
    pub tame_exponent: u64,
    pub hodge_shift: BTreeMap<String, i64>,
}

impl PsiData {
    /// The canonical compatible character for `(ell, det t)`.
    pub fn compatible_with(q: u64, ell: &HodgeTypeGL, t_det_exponent: u64) -> Self {
        let hodge_shift: BTreeMap<String, i64> = ell
            .per_embedding()
            .iter()
            .map(|(k, w)| (k.clone(), w.sigma_iota()))
            .collect();
        let total: i64 = hodge_shift.values().sum();
        Self { q, tame_exponent: rem(t_det_exponent as i64 + total, q - 1), hodge_shift }
    }
}

pub fn compatible_gl(psi: &PsiData, ell: &HodgeTypeGL, t_det_exponent: u64) -> bool {
    let q = psi.q;
    let mut total = 0i64;
    for (label, w) in ell.per_embedding() {
        let s = w.sigma_iota();
        if psi.hodge_shift.get(label) != Some(&s) {
            return false;
        }
        total += s;
    }
    psi.hodge_shift.len() == ell.per_embedding().len()
        && psi.tame_exponent % (q - 1) == rem(t_det_exponent as i64 + total, q - 1)
}

/// Compatibility in `C' = C / C^n`. The tame part is compared modulo the
/// `n`-th powers, i.e. modulo `gcd(n, q - 1)`; Hodge-Tate weights modulo `n`.
pub fn compatible_pgl(psi: &PsiData, lambda: &HodgeTypePGL, tau_det_class: u64) -> bool {
    let n = lambda.n() as u64;
    let g = gcd(n, psi.q - 1);
    let mut total = 0i64;
    for (label, w) in lambda.per_embedding() {
        let s = w.sigma_iota();
        match psi.hodge_shift.get(label) {
            Some(&h) if rem(h, n) == s => {}
            _ => return false,
        }
        total += s as i64;
    }
    psi.hodge_shift.len() == lambda.per_embedding().len()
        && psi.tame_exponent % g == rem(tau_det_class as i64 + total, g)
}
