//! Conjugacy classes of `GL_2(F_p)` and `SL_2(F_p)`.
//!
//! Fix a generator `zeta` of `F_{p^2}^x` and put `g = zeta^(p+1)`, a generator
//! of `F_p^x`. Every class is described through exponents of `zeta`.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Group {
    GL2,
    SL2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum ClassRep {
    /// `g^i * I`.
    Central { i: u64 },
    /// `g^i * [[1, 1], [0, 1]]`.
    Unipotent { i: u64 },
    /// `+-[[1, x], [0, 1]]` in `SL_2`, with `x` a square or a non-square.
    SlUnipotent { negative: bool, nonsquare: bool },
    /// `diag(g^i, g^j)`, `i < j`.
    Split { i: u64, j: u64 },
    /// Eigenvalues `zeta^k, zeta^(pk)`, `k` the smaller of the two exponents.
    Elliptic { k: u64 },
}

impl fmt::Display for ClassRep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            ClassRep::Central { i } => write!(f, "a(g^{i})"),
            ClassRep::Unipotent { i } => write!(f, "b(g^{i})"),
            ClassRep::SlUnipotent { negative, nonsquare } => {
                write!(f, "{}u_{}", if negative { "-" } else { "" }, if nonsquare { "eps" } else { "1" })
            }
            ClassRep::Split { i, j } => write!(f, "c(g^{i},g^{j})"),
            ClassRep::Elliptic { k } => write!(f, "d(z^{k})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConjClass {
    pub rep: ClassRep,
    pub size: u64,
    pub p_regular: bool,
    /// Eigenvalues as exponents of `zeta`, modulo `p^2 - 1`.
    pub eigen: [u64; 2],
    /// Index of the class of inverses.
    pub inverse: usize,
    /// For `SL_2`, the index of the containing `GL_2` class.
    pub parent: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConjClassTable {
    pub group: Group,
    pub p: u64,
    pub classes: Vec<ConjClass>,
}

fn canonical_elliptic(p: u64, k: u64) -> u64 {
    let m = p * p - 1;
    let k = k % m;
    k.min(p * k % m)
}

fn canonical_split(p: u64, i: u64, j: u64) -> ClassRep {
    let (i, j) = (i % (p - 1), j % (p - 1));
    ClassRep::Split { i: i.min(j), j: i.max(j) }
}

impl ConjClassTable {
    pub fn new(group: Group, p: u64) -> Self {
        match group {
            Group::GL2 => Self::gl2(p),
            Group::SL2 => Self::sl2(p),
        }
    }

    fn gl2(p: u64) -> Self {
        let m = p * p - 1;
        let q1 = p - 1;
        let mut reps: Vec<(ClassRep, u64, [u64; 2])> = Vec::new();
        for i in 0..q1 {
            reps.push((ClassRep::Central { i }, 1, [i * (p + 1); 2]));
        }
        for i in 0..q1 {
            reps.push((ClassRep::Unipotent { i }, p * p - 1, [i * (p + 1); 2]));
        }
        for i in 0..q1 {
            for j in i + 1..q1 {
                reps.push((ClassRep::Split { i, j }, p * (p + 1), [i * (p + 1), j * (p + 1)]));
            }
        }
        for k in 0..m {
            if k % (p + 1) != 0 && canonical_elliptic(p, k) == k {
                reps.push((ClassRep::Elliptic { k }, p * (p - 1), [k, p * k % m]));
            }
        }
        let index: HashMap<ClassRep, usize> =
            reps.iter().enumerate().map(|(n, r)| (r.0, n)).collect();
        let neg = |i: u64| (q1 - i % q1) % q1;
        let classes = reps
            .iter()
            .map(|&(rep, size, eigen)| {
                let inv_rep = match rep {
                    ClassRep::Central { i } => ClassRep::Central { i: neg(i) },
                    ClassRep::Unipotent { i } => ClassRep::Unipotent { i: neg(i) },
                    ClassRep::Split { i, j } => canonical_split(p, neg(i), neg(j)),
                    ClassRep::Elliptic { k } => ClassRep::Elliptic { k: canonical_elliptic(p, m - k) },
                    ClassRep::SlUnipotent { .. } => unreachable!(),
                };
                ConjClass {
                    rep,
                    size,
                    p_regular: !matches!(rep, ClassRep::Unipotent { .. }),
                    eigen,
                    inverse: index[&inv_rep],
                    parent: None,
                }
            })
            .collect();
        Self { group: Group::GL2, p, classes }
    }

    fn sl2(p: u64) -> Self {
        let gl = Self::gl2(p);
        let m = p * p - 1;
        let half = (p - 1) / 2;
        let gl_index: HashMap<ClassRep, usize> =
            gl.classes.iter().enumerate().map(|(n, c)| (c.rep, n)).collect();
        let minus_one_square = p % 4 == 1;
        let mut reps: Vec<(ClassRep, u64, ClassRep)> = Vec::new();
        for i in [0, half] {
            reps.push((ClassRep::Central { i }, 1, ClassRep::Central { i }));
        }
        for negative in [false, true] {
            let i = if negative { half } else { 0 };
            for nonsquare in [false, true] {
                reps.push((
                    ClassRep::SlUnipotent { negative, nonsquare },
                    (p * p - 1) / 2,
                    ClassRep::Unipotent { i },
                ));
            }
        }
        for i in 1..half {
            let rep = canonical_split(p, i, p - 1 - i);
            reps.push((rep, p * (p + 1), rep));
        }
        for k in 1..=half {
            let rep = ClassRep::Elliptic { k: canonical_elliptic(p, k * (p - 1)) };
            reps.push((rep, p * (p - 1), rep));
        }
        let index: HashMap<ClassRep, usize> =
            reps.iter().enumerate().map(|(n, r)| (r.0, n)).collect();
        let classes = reps
            .iter()
            .map(|&(rep, size, parent_rep)| {
                let parent = gl_index[&parent_rep];
                let inv_rep = match rep {
                    ClassRep::SlUnipotent { negative, nonsquare } => ClassRep::SlUnipotent {
                        negative,
                        nonsquare: nonsquare ^ !minus_one_square,
                    },
                    other => other,
                };
                let eigen = gl.classes[parent].eigen;
                debug_assert!(eigen.iter().all(|&e| e < m));
                ConjClass {
                    rep,
                    size,
                    p_regular: !matches!(rep, ClassRep::SlUnipotent { .. }),
                    eigen,
                    inverse: index[&inv_rep],
                    parent: Some(parent),
                }
            })
            .collect();
        Self { group: Group::SL2, p, classes }
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn order(&self) -> u64 {
        let p = self.p;
        match self.group {
            Group::GL2 => (p * p - 1) * (p * p - p),
            Group::SL2 => p * (p * p - 1),
        }
    }

    /// Index of the identity class.
    pub fn identity(&self) -> usize {
        0
    }

    pub fn index_of(&self, rep: ClassRep) -> Option<usize> {
        self.classes.iter().position(|c| c.rep == rep)
    }

    pub fn regular_indices(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.classes[i].p_regular).collect()
    }
}
