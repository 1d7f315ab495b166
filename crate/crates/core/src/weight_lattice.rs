//! Characters and cocharacters of the diagonal torus of `GL_n` and `SL_n`.
//!
//! A `GL_n` weight is an integer vector. An `SL_n` weight is a class in
//! `Z^n / Z(1,...,1)`, stored through the representative whose last entry
//! is zero.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::{BmtError, Result};

/// Label of the single embedding used when the base field is `Q_p`.
pub const IOTA0: &str = "iota0";

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct GLWeight {
    entries: Vec<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<i64>", into = "Vec<i64>")]
pub struct SLWeight {
    entries: Vec<i64>,
}

impl GLWeight {
    pub fn new(entries: Vec<i64>) -> Result<Self> {
        if entries.is_empty() {
            return Err(BmtError::InvalidArgument("weight of rank 0".into()));
        }
        Ok(Self { entries })
    }

    pub fn pair(first: i64, second: i64) -> Self {
        Self { entries: vec![first, second] }
    }

    pub fn entries(&self) -> &[i64] {
        &self.entries
    }

    pub fn n(&self) -> usize {
        self.entries.len()
    }

    pub fn is_dominant(&self) -> bool {
        is_weakly_decreasing(&self.entries)
    }

    pub fn is_regular(&self) -> bool {
        self.entries.windows(2).all(|w| w[0] > w[1])
    }

    pub fn is_p_restricted(&self, p: u64, s: u32) -> Result<bool> {
        p_restricted(&self.entries, p, s)
    }

    pub fn project_to_sl(&self) -> SLWeight {
        let last = *self.entries.last().expect("non-empty by construction");
        SLWeight { entries: self.entries.iter().map(|e| e - last).collect() }
    }

    /// Determinant exponent: the sum of the entries.
    pub fn sigma_iota(&self) -> i64 {
        self.entries.iter().sum()
    }

    /// Entrywise difference `self - other`.
    pub fn minus(&self, other: &GLWeight) -> Result<GLWeight> {
        if self.n() != other.n() {
            return Err(BmtError::InvalidArgument(format!(
                "rank mismatch: {} vs {}",
                self.n(),
                other.n()
            )));
        }
        Ok(GLWeight {
            entries: self.entries.iter().zip(&other.entries).map(|(a, b)| a - b).collect(),
        })
    }
}

impl SLWeight {
    /// Canonical representative of the class of `entries` modulo the diagonal.
    pub fn from_any(entries: &[i64]) -> Result<Self> {
        Ok(GLWeight::new(entries.to_vec())?.project_to_sl())
    }

    pub fn entries(&self) -> &[i64] {
        &self.entries
    }

    pub fn n(&self) -> usize {
        self.entries.len()
    }

    pub fn is_dominant(&self) -> bool {
        is_weakly_decreasing(&self.entries)
    }

    pub fn is_regular(&self) -> bool {
        self.entries.windows(2).all(|w| w[0] > w[1])
    }

    pub fn is_p_restricted(&self, p: u64, s: u32) -> Result<bool> {
        p_restricted(&self.entries, p, s)
    }

    /// `self + shift * (1, ..., 1)` as a `GL_n` weight.
    pub fn lift(&self, shift: i64) -> GLWeight {
        GLWeight { entries: self.entries.iter().map(|e| e + shift).collect() }
    }

    /// Determinant exponent of any lift, reduced modulo `n`.
    pub fn sigma_iota(&self) -> u64 {
        crate::arith::rem(self.lift(0).sigma_iota(), self.n() as u64)
    }
}

impl TryFrom<Vec<i64>> for SLWeight {
    type Error = BmtError;

    fn try_from(entries: Vec<i64>) -> Result<Self> {
        match entries.last() {
            Some(0) => Ok(Self { entries }),
            Some(_) => Err(BmtError::InvalidArgument(format!(
                "SL weight {entries:?} is not in canonical form (last entry must be 0)"
            ))),
            None => Err(BmtError::InvalidArgument("weight of rank 0".into())),
        }
    }
}

impl From<SLWeight> for Vec<i64> {
    fn from(w: SLWeight) -> Self {
        w.entries
    }
}

/// `(n-1, n-2, ..., 0)`.
pub fn delta_weight(n: usize) -> GLWeight {
    GLWeight { entries: (0..n as i64).rev().collect() }
}

fn is_weakly_decreasing(entries: &[i64]) -> bool {
    entries.windows(2).all(|w| w[0] >= w[1])
}

fn p_restricted(entries: &[i64], p: u64, s: u32) -> Result<bool> {
    if !is_weakly_decreasing(entries) {
        return Err(BmtError::NotDominant(entries.to_vec()));
    }
    let bound = p
        .checked_pow(s)
        .ok_or_else(|| BmtError::InvalidArgument(format!("{p}^{s} overflows")))?;
    Ok(entries.windows(2).all(|w| ((w[0] - w[1]) as u64) < bound))
}

/// Hodge type for `GL_n`: one weight per embedding label.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "BTreeMap<String, GLWeight>", into = "BTreeMap<String, GLWeight>")]
pub struct HodgeTypeGL {
    per_embedding: BTreeMap<String, GLWeight>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "BTreeMap<String, SLWeight>", into = "BTreeMap<String, SLWeight>")]
pub struct HodgeTypePGL {
    per_embedding: BTreeMap<String, SLWeight>,
}

fn common_rank(mut ranks: impl Iterator<Item = usize>) -> Result<usize> {
    let first = ranks
        .next()
        .ok_or_else(|| BmtError::InvalidArgument("Hodge type without embeddings".into()))?;
    if ranks.all(|n| n == first) {
        Ok(first)
    } else {
        Err(BmtError::InvalidArgument("Hodge type weights have different ranks".into()))
    }
}

impl HodgeTypeGL {
    pub fn new(per_embedding: BTreeMap<String, GLWeight>) -> Result<Self> {
        common_rank(per_embedding.values().map(GLWeight::n))?;
        Ok(Self { per_embedding })
    }

    /// The `K = Q_p` case: a single embedding.
    pub fn single(weight: GLWeight) -> Self {
        Self { per_embedding: BTreeMap::from([(IOTA0.to_string(), weight)]) }
    }

    pub fn per_embedding(&self) -> &BTreeMap<String, GLWeight> {
        &self.per_embedding
    }

    pub fn n(&self) -> usize {
        self.per_embedding.values().next().map_or(0, GLWeight::n)
    }

    pub fn project(&self) -> HodgeTypePGL {
        HodgeTypePGL {
            per_embedding: self
                .per_embedding
                .iter()
                .map(|(k, w)| (k.clone(), w.project_to_sl()))
                .collect(),
        }
    }
}

impl HodgeTypePGL {
    pub fn new(per_embedding: BTreeMap<String, SLWeight>) -> Result<Self> {
        common_rank(per_embedding.values().map(SLWeight::n))?;
        Ok(Self { per_embedding })
    }

    pub fn single(weight: SLWeight) -> Self {
        Self { per_embedding: BTreeMap::from([(IOTA0.to_string(), weight)]) }
    }

    pub fn per_embedding(&self) -> &BTreeMap<String, SLWeight> {
        &self.per_embedding
    }

    pub fn n(&self) -> usize {
        self.per_embedding.values().next().map_or(0, SLWeight::n)
    }
}

impl TryFrom<BTreeMap<String, GLWeight>> for HodgeTypeGL {
    type Error = BmtError;
    fn try_from(m: BTreeMap<String, GLWeight>) -> Result<Self> {
        Self::new(m)
    }
}

impl From<HodgeTypeGL> for BTreeMap<String, GLWeight> {
    fn from(h: HodgeTypeGL) -> Self {
        h.per_embedding
    }
}

impl TryFrom<BTreeMap<String, SLWeight>> for HodgeTypePGL {
    type Error = BmtError;
    fn try_from(m: BTreeMap<String, SLWeight>) -> Result<Self> {
        Self::new(m)
    }
}

impl From<HodgeTypePGL> for BTreeMap<String, SLWeight> {
    fn from(h: HodgeTypePGL) -> Self {
        h.per_embedding
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn w(v: &[i64]) -> GLWeight {
        GLWeight::new(v.to_vec()).unwrap()
    }

    #[test]
    fn dominance_and_regularity() {
        assert!(w(&[3, 1, 0]).is_dominant());
        assert!(w(&[0, 0]).is_dominant());
        assert!(!w(&[1, 2]).is_dominant());
        assert!(w(&[2, 1, 0]).is_regular());
        assert!(!w(&[1, 1]).is_regular());
        for a in 0..6 {
            for b in -3..4 {
                assert!(w(&[a + b + 1, b]).is_regular());
            }
        }
    }

    #[test]
    fn restricted_weights() {
        for p in [3u64, 5, 7] {
            assert!(w(&[p as i64 - 1, 0]).is_p_restricted(p, 1).unwrap());
            assert!(!w(&[p as i64, 0]).is_p_restricted(p, 1).unwrap());
            assert!(w(&[p as i64, 0]).is_p_restricted(p, 2).unwrap());
            assert!(w(&[0, 0, 0]).is_p_restricted(p, 3).unwrap());
        }
        assert!(matches!(w(&[0, 1]).is_p_restricted(3, 1), Err(BmtError::NotDominant(_))));
    }

    #[test]
    fn projection_and_lift() {
        assert_eq!(w(&[5, 3, 3]).project_to_sl().entries(), &[2, 0, 0]);
        assert_eq!(w(&[4, 4]).project_to_sl().entries(), &[0, 0]);
        let lam = SLWeight::try_from(vec![2, 0]).unwrap();
        assert_eq!(lam.lift(0), w(&[2, 0]));
        assert_eq!(lam.lift(3), w(&[5, 3]));
        for a in 0..5 {
            for b in 0..5 {
                let ell = w(&[a + b + 1, b]);
                assert_eq!(ell.project_to_sl().entries(), &[a + 1, 0]);
                assert_eq!(SLWeight::try_from(vec![a + 1, 0]).unwrap().lift(b), ell);
                assert_eq!(ell.sigma_iota(), a + 2 * b + 1);
                assert_eq!(ell.project_to_sl().sigma_iota(), ((a + 1) % 2) as u64);
            }
        }
        assert!(SLWeight::try_from(vec![2, 1]).is_err());
    }

    #[test]
    fn sigma_and_delta() {
        assert_eq!(w(&[3, 1, 0]).sigma_iota(), 4);
        assert_eq!(w(&[0, 0, 0, 0]).sigma_iota(), 0);
        assert_eq!(SLWeight::try_from(vec![2, 0]).unwrap().sigma_iota(), 0);
        assert_eq!(SLWeight::try_from(vec![0, 0, 0]).unwrap().sigma_iota(), 0);
        assert_eq!(delta_weight(2), w(&[1, 0]));
        assert_eq!(delta_weight(3), w(&[2, 1, 0]));
        assert_eq!(delta_weight(1), w(&[0]));
    }

    #[test]
    fn regular_minus_delta_is_dominant_exhaustive() {
        fn rec(n: usize, prefix: &mut Vec<i64>) {
            if prefix.len() == n {
                let wt = w(prefix);
                if wt.is_regular() {
                    assert!(wt.is_dominant());
                    assert!(wt.minus(&delta_weight(n)).unwrap().is_dominant(), "{prefix:?}");
                }
                return;
            }
            for e in -10..=10 {
                // only decreasing tuples can be regular; prune the rest
                if prefix.last().is_some_and(|&l| e >= l) {
                    continue;
                }
                prefix.push(e);
                rec(n, prefix);
                prefix.pop();
            }
        }
        for n in 1..=4 {
            rec(n, &mut Vec::new());
        }
    }

    #[test]
    fn hodge_type_json() {
        let h = HodgeTypeGL::single(w(&[3, 0]));
        let s = serde_json::to_string(&h).unwrap();
        assert_eq!(s, r#"{"iota0":[3,0]}"#);
        let back: HodgeTypeGL = serde_json::from_str(&s).unwrap();
        assert_eq!(back, h);
        assert_eq!(h.project().per_embedding()[IOTA0].entries(), &[3, 0]);
        let bad: std::result::Result<HodgeTypeGL, _> =
            serde_json::from_str(r#"{"a":[1,0],"b":[1,0,0]}"#);
        assert!(bad.is_err());
        let bad_sl: std::result::Result<SLWeight, _> = serde_json::from_str("[2,1]");
        assert!(bad_sl.is_err());
    }

    proptest! {
        #[test]
        fn lift_then_project_is_identity(v in prop::collection::vec(-50i64..50, 1..6), shift in -100i64..100) {
            let lam = SLWeight::from_any(&v).unwrap();
            prop_assert_eq!(lam.lift(shift).project_to_sl(), lam.clone());
            let n = v.len() as i64;
            prop_assert_eq!(lam.lift(shift).sigma_iota(), lam.lift(0).sigma_iota() + n * shift);
        }

        #[test]
        fn regular_implies_dominant(v in prop::collection::vec(-20i64..20, 1..6)) {
            let wt = GLWeight::new(v).unwrap();
            prop_assert!(!wt.is_regular() || wt.is_dominant());
        }
    }
}
