//! Irreducible ordinary characters of `GL_2(F_p)`.
//!
//! With `chi_e(g^i) = w^(e i)` on `F_p^x` and `eta_f(zeta^k) = omega^(f k)` on
//! `F_{p^2}^x`, the irreducibles are `chi_e o det`, `St (x) chi_e o det`, the
//! principal series `Ind(chi_e1 (x) chi_e2)` for `e1 != e2` and the cuspidal
//! representations attached to regular `eta_f`, i.e. `(p + 1)` not dividing `f`.

use serde::{Deserialize, Serialize};

use super::classes::{ClassRep, ConjClassTable, Group};
use super::field::{add, from_i64, mul, sub, Modulus};
use crate::{BmtError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Gl2Irrep {
    OneDim { e: u64 },
    Steinberg { e: u64 },
    PrincipalSeries { e1: u64, e2: u64 },
    Cuspidal { f: u64 },
}

impl Gl2Irrep {
    /// Reduces exponents and picks the canonical parameters; rejects
    /// parameters that do not give an irreducible.
    pub fn normalize(self, p: u64) -> Result<Self> {
        let q1 = p - 1;
        let m = p * p - 1;
        Ok(match self {
            Gl2Irrep::OneDim { e } => Gl2Irrep::OneDim { e: e % q1 },
            Gl2Irrep::Steinberg { e } => Gl2Irrep::Steinberg { e: e % q1 },
            Gl2Irrep::PrincipalSeries { e1, e2 } => {
                let (e1, e2) = (e1 % q1, e2 % q1);
                if e1 == e2 {
                    return Err(BmtError::InvalidArgument(format!(
                        "principal series with equal exponents {e1}"
                    )));
                }
                Gl2Irrep::PrincipalSeries { e1: e1.min(e2), e2: e1.max(e2) }
            }
            Gl2Irrep::Cuspidal { f } => {
                let f = f % m;
                if f % (p + 1) == 0 {
                    return Err(BmtError::InvalidArgument(format!(
                        "cuspidal parameter {f} is divisible by {}",
                        p + 1
                    )));
                }
                Gl2Irrep::Cuspidal { f: f.min(p * f % m) }
            }
        })
    }

    pub fn degree(&self, p: u64) -> u64 {
        match self {
            Gl2Irrep::OneDim { .. } => 1,
            Gl2Irrep::Steinberg { .. } => p,
            Gl2Irrep::PrincipalSeries { .. } => p + 1,
            Gl2Irrep::Cuspidal { .. } => p - 1,
        }
    }

    /// `self (x) chi_a o det`.
    pub fn twist(&self, p: u64, a: i64) -> Self {
        let q1 = p - 1;
        let sh = |e: u64| from_i64(e as i64 + a, q1);
        let irrep = match *self {
            Gl2Irrep::OneDim { e } => Gl2Irrep::OneDim { e: sh(e) },
            Gl2Irrep::Steinberg { e } => Gl2Irrep::Steinberg { e: sh(e) },
            Gl2Irrep::PrincipalSeries { e1, e2 } => Gl2Irrep::PrincipalSeries { e1: sh(e1), e2: sh(e2) },
            Gl2Irrep::Cuspidal { f } => Gl2Irrep::Cuspidal { f: from_i64(f as i64 + a * (p as i64 + 1), p * p - 1) },
        };
        irrep.normalize(p).expect("twisting preserves irreducibility")
    }

    /// Exponent of the central character: `z` acts by `chi_c(z)`.
    pub fn central_exponent(&self, p: u64) -> u64 {
        let q1 = p - 1;
        match *self {
            Gl2Irrep::OneDim { e } | Gl2Irrep::Steinberg { e } => 2 * e % q1,
            Gl2Irrep::PrincipalSeries { e1, e2 } => (e1 + e2) % q1,
            Gl2Irrep::Cuspidal { f } => f % q1,
        }
    }

    /// All irreducibles, one per isomorphism class.
    pub fn all(p: u64) -> Vec<Self> {
        let q1 = p - 1;
        let m = p * p - 1;
        let mut out: Vec<Self> = Vec::new();
        out.extend((0..q1).map(|e| Gl2Irrep::OneDim { e }));
        out.extend((0..q1).map(|e| Gl2Irrep::Steinberg { e }));
        for e1 in 0..q1 {
            out.extend((e1 + 1..q1).map(|e2| Gl2Irrep::PrincipalSeries { e1, e2 }));
        }
        out.extend(
            (0..m)
                .filter(|&f| f % (p + 1) != 0 && f <= p * f % m)
                .map(|f| Gl2Irrep::Cuspidal { f }),
        );
        out
    }

    /// Character values on the classes of `GL_2(F_p)`, modulo `md.ell`.
    pub(crate) fn values(&self, md: &Modulus, table: &ConjClassTable) -> Vec<u64> {
        debug_assert_eq!(table.group, Group::GL2);
        let p = table.p;
        let ell = md.ell;
        let pp = (p + 1) as i64;
        // chi_e(g^i) = omega^((p+1) e i)
        let chi = |e: u64, i: u64| md.omega_pow(pp * (e * i) as i64);
        let int = |x: u64| x % ell;
        table
            .classes
            .iter()
            .map(|c| match (*self, c.rep) {
                (Gl2Irrep::OneDim { e }, ClassRep::Central { i } | ClassRep::Unipotent { i }) => chi(e, 2 * i),
                (Gl2Irrep::OneDim { e }, ClassRep::Split { i, j }) => chi(e, i + j),
                (Gl2Irrep::OneDim { e }, ClassRep::Elliptic { k }) => chi(e, k),
                (Gl2Irrep::Steinberg { e }, ClassRep::Central { i }) => mul(int(p), chi(e, 2 * i), ell),
                (Gl2Irrep::Steinberg { .. }, ClassRep::Unipotent { .. }) => 0,
                (Gl2Irrep::Steinberg { e }, ClassRep::Split { i, j }) => chi(e, i + j),
                (Gl2Irrep::Steinberg { e }, ClassRep::Elliptic { k }) => sub(0, chi(e, k), ell),
                (Gl2Irrep::PrincipalSeries { e1, e2 }, ClassRep::Central { i }) => {
                    mul(int(p + 1), mul(chi(e1, i), chi(e2, i), ell), ell)
                }
                (Gl2Irrep::PrincipalSeries { e1, e2 }, ClassRep::Unipotent { i }) => mul(chi(e1, i), chi(e2, i), ell),
                (Gl2Irrep::PrincipalSeries { e1, e2 }, ClassRep::Split { i, j }) => add(
                    mul(chi(e1, i), chi(e2, j), ell),
                    mul(chi(e1, j), chi(e2, i), ell),
                    ell,
                ),
                (Gl2Irrep::PrincipalSeries { .. }, ClassRep::Elliptic { .. }) => 0,
                (Gl2Irrep::Cuspidal { f }, ClassRep::Central { i }) => {
                    mul(int(p - 1), md.omega_pow(pp * (f * i) as i64), ell)
                }
                (Gl2Irrep::Cuspidal { f }, ClassRep::Unipotent { i }) => sub(0, md.omega_pow(pp * (f * i) as i64), ell),
                (Gl2Irrep::Cuspidal { .. }, ClassRep::Split { .. }) => 0,
                (Gl2Irrep::Cuspidal { f }, ClassRep::Elliptic { k }) => sub(
                    0,
                    add(md.omega_pow((f * k) as i64), md.omega_pow((f * k * p) as i64), ell),
                    ell,
                ),
                (_, ClassRep::SlUnipotent { .. }) => unreachable!("GL_2 table has no SL_2 classes"),
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn count_and_degrees() {
        for p in [3u64, 5, 7, 11, 13] {
            let all = Gl2Irrep::all(p);
            assert_eq!(all.len() as u64, p * p - 1);
            let sum_sq: u64 = all.iter().map(|r| r.degree(p).pow(2)).sum();
            assert_eq!(sum_sq, (p * p - 1) * (p * p - p));
            for r in &all {
                assert_eq!(r.normalize(p).unwrap(), *r);
                for a in 0..p as i64 - 1 {
                    let t = r.twist(p, a);
                    assert_eq!(t.twist(p, -a), *r);
                    assert_eq!(t.central_exponent(p), (r.central_exponent(p) + 2 * a as u64) % (p - 1));
                }
            }
        }
    }

    #[test]
    fn normalization() {
        assert!(Gl2Irrep::Cuspidal { f: 6 }.normalize(5).is_err());
        assert_eq!(Gl2Irrep::Cuspidal { f: 5 }.normalize(5).unwrap(), Gl2Irrep::Cuspidal { f: 1 });
        assert!(Gl2Irrep::PrincipalSeries { e1: 1, e2: 5 }.normalize(5).is_err());
        assert_eq!(
            Gl2Irrep::PrincipalSeries { e1: 3, e2: 1 }.normalize(5).unwrap(),
            Gl2Irrep::PrincipalSeries { e1: 1, e2: 3 }
        );
    }
}
