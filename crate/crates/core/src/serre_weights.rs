//! Serre weights of `GL_n(F_q)` and `SL_n(F_q)`.
//!
//! A `GL_n` weight is stored as a restricted dominant weight `w` with last
//! entry `0` together with a determinant exponent in `[0, q - 2]`; it stands
//! for `F(w) (x) det^det`. For `n = 2` this is `Symm^a (x) det^b` with
//! `w = (a, 0)`.

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::arith::{prime_power, rem};
use crate::gl2_types::TameInertialTypeGL2;
use crate::transfer::Engine;
use crate::weight_lattice::GLWeight;
use crate::{BmtError, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SerreWeightGL {
    w: Vec<u64>,
    det: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SerreWeightSL {
    w: Vec<u64>,
}

fn check_normal_form(w: &[u64]) -> Result<()> {
    if w.len() < 2 || *w.last().unwrap() != 0 || w.windows(2).any(|x| x[0] < x[1]) {
        return Err(BmtError::InvalidArgument(format!(
            "{w:?} is not a dominant weight with last entry 0"
        )));
    }
    Ok(())
}

impl SerreWeightGL {
    /// `Symm^a (x) det^b`.
    pub fn pair(a: u64, b: u64) -> Self {
        Self { w: vec![a, 0], det: b }
    }

    /// Unchecked apart from the shape of `w`; use [`SerreWeightGL::new`] to
    /// also check the ranges for a given `q`.
    pub fn from_parts(w: Vec<u64>, det: u64) -> Result<Self> {
        check_normal_form(&w)?;
        Ok(Self { w, det })
    }

    pub fn new(w: Vec<u64>, det: u64, q: u64) -> Result<Self> {
        let s = Self::from_parts(w, det)?;
        if !s.in_range(q) {
            return Err(BmtError::InvalidArgument(format!(
                "{s:?} is not a restricted normal form for q = {q}"
            )));
        }
        Ok(s)
    }

    pub fn in_range(&self, q: u64) -> bool {
        self.det < q - 1 && self.w.windows(2).all(|x| x[0] - x[1] < q)
    }

    pub fn n(&self) -> usize {
        self.w.len()
    }

    pub fn w(&self) -> &[u64] {
        &self.w
    }

    pub fn det(&self) -> u64 {
        self.det
    }

    pub fn a(&self) -> u64 {
        self.w[0]
    }

    pub fn b(&self) -> u64 {
        self.det
    }

    /// Highest weight `w + det * (1, ..., 1)`.
    pub fn highest_weight(&self) -> GLWeight {
        GLWeight::new(self.w.iter().map(|&x| (x + self.det) as i64).collect())
            .expect("rank at least 2")
    }

    pub fn restrict(&self) -> SerreWeightSL {
        SerreWeightSL { w: self.w.clone() }
    }

    /// `self (x) det^m`, renormalized.
    pub fn twist_det(&self, m: i64, q: u64) -> Self {
        Self { w: self.w.clone(), det: rem(self.det as i64 + m, q - 1) }
    }
}

impl SerreWeightSL {
    /// `Symm^a`.
    pub fn single(a: u64) -> Self {
        Self { w: vec![a, 0] }
    }

    pub fn from_parts(w: Vec<u64>) -> Result<Self> {
        check_normal_form(&w)?;
        Ok(Self { w })
    }

    pub fn new(w: Vec<u64>, q: u64) -> Result<Self> {
        let s = Self::from_parts(w)?;
        if !s.in_range(q) {
            return Err(BmtError::InvalidArgument(format!(
                "{s:?} is not restricted for q = {q}"
            )));
        }
        Ok(s)
    }

    pub fn in_range(&self, q: u64) -> bool {
        self.w.windows(2).all(|x| x[0] - x[1] < q)
    }

    pub fn n(&self) -> usize {
        self.w.len()
    }

    pub fn w(&self) -> &[u64] {
        &self.w
    }

    pub fn a(&self) -> u64 {
        self.w[0]
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum GLRepr {
    Pair { a: u64, b: u64 },
    General { w: Vec<u64>, det: u64 },
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum SLRepr {
    Single { a: u64 },
    General { w: Vec<u64> },
}

impl Serialize for SerreWeightGL {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        if self.n() == 2 {
            GLRepr::Pair { a: self.a(), b: self.det }.serialize(s)
        } else {
            GLRepr::General { w: self.w.clone(), det: self.det }.serialize(s)
        }
    }
}

impl<'de> Deserialize<'de> for SerreWeightGL {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        match GLRepr::deserialize(d)? {
            GLRepr::Pair { a, b } => Ok(Self::pair(a, b)),
            GLRepr::General { w, det } => Self::from_parts(w, det).map_err(D::Error::custom),
        }
    }
}

impl Serialize for SerreWeightSL {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        if self.n() == 2 {
            SLRepr::Single { a: self.a() }.serialize(s)
        } else {
            SLRepr::General { w: self.w.clone() }.serialize(s)
        }
    }
}

impl<'de> Deserialize<'de> for SerreWeightSL {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        match SLRepr::deserialize(d)? {
            SLRepr::Single { a } => Ok(Self::single(a)),
            SLRepr::General { w } => Self::from_parts(w).map_err(D::Error::custom),
        }
    }
}

fn check_nq(n: usize, q: u64) -> Result<()> {
    if n < 2 {
        return Err(BmtError::InvalidArgument(format!("rank {n} < 2")));
    }
    prime_power(q).ok_or(BmtError::NotPrimePower(q))?;
    Ok(())
}

/// All dominant `w` of length `n`, last entry 0, consecutive gaps in `[0, q-1]`.
fn restricted_weights(n: usize, q: u64) -> Vec<Vec<u64>> {
    let mut out = vec![vec![0u64]];
    for _ in 1..n {
        out = out
            .into_iter()
            .flat_map(|tail| {
                (0..q).map(move |gap| {
                    let mut w = vec![tail[0] + gap];
                    w.extend_from_slice(&tail);
                    w
                })
            })
            .collect();
    }
    out.sort();
    out
}

pub fn enumerate_s(n: usize, q: u64) -> Result<Vec<SerreWeightGL>> {
    check_nq(n, q)?;
    let mut out: Vec<SerreWeightGL> = restricted_weights(n, q)
        .into_iter()
        .flat_map(|w| (0..q - 1).map(move |det| SerreWeightGL { w: w.clone(), det }))
        .collect();
    out.sort();
    Ok(out)
}

pub fn enumerate_sigma(n: usize, q: u64) -> Result<Vec<SerreWeightSL>> {
    check_nq(n, q)?;
    Ok(restricted_weights(n, q).into_iter().map(|w| SerreWeightSL { w }).collect())
}

pub fn restrict_weight(s: &SerreWeightGL) -> SerreWeightSL {
    s.restrict()
}

/// `r^{-1}(sigma) = { s (x) det^m : 0 <= m < q - 1 }`.
pub fn fiber(sigma: &SerreWeightSL, q: u64) -> Vec<SerreWeightGL> {
    (0..q - 1).map(|det| SerreWeightGL { w: sigma.w.clone(), det }).collect()
}

/// Exponent by which scalars act on `Symm^a (x) det^b`: `a + 2b mod (p - 1)`.
pub fn central_character(s: &SerreWeightGL, p: u64) -> u64 {
    (s.a() + 2 * s.b()) % (p - 1)
}

pub fn weights_with_central_character(p: u64, exponent: u64) -> Vec<SerreWeightGL> {
    enumerate_s(2, p)
        .expect("p is prime")
        .into_iter()
        .filter(|s| central_character(s, p) == exponent % (p - 1))
        .collect()
}

/// The set `S(lambda, tau)`: weights whose central character is that of
/// `sigma(t) (x) sigma(ell)`, read off from character values on scalars.
pub fn weights_for_type(
    engine: &Engine,
    ell: &GLWeight,
    t: &TameInertialTypeGL2,
) -> Result<Vec<SerreWeightGL>> {
    let exponent = engine.central_character_of(ell, t)?;
    Ok(weights_with_central_character(engine.p(), exponent))
}
