//! Character theory of `GL_2(F_p)` and `SL_2(F_p)` over two splitting prime
//! fields, and Jordan-Holder multiplicities of mod `p` reductions.
//!
//! Every class function is carried in both moduli at once. Multiplicities are
//! read off as small integers only when the two fields agree.

pub mod characters;
pub mod classes;
pub mod field;
pub mod grothendieck;

use serde::Serialize;

use crate::arith::pow_mod;
use crate::serre_weights::{enumerate_s, enumerate_sigma, SerreWeightGL, SerreWeightSL};
use crate::weight_lattice::GLWeight;
use crate::{BmtError, Result};

pub use characters::Gl2Irrep;
pub use classes::{ClassRep, ConjClass, ConjClassTable, Group};
pub use field::Modulus;
pub use grothendieck::{GrothendieckElt, GrothendieckGL, GrothendieckSL, WeightKey};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CharKind {
    /// Defined on every class.
    Ordinary,
    /// Defined on `p`-regular classes only; other entries are zero.
    Brauer,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ClassFunction {
    pub group: Group,
    pub kind: CharKind,
    moduli: [u64; 2],
    values: [Vec<u64>; 2],
}

impl ClassFunction {
    pub fn values(&self, modulus: usize) -> &[u64] {
        &self.values[modulus]
    }

    pub fn moduli(&self) -> [u64; 2] {
        self.moduli
    }

    fn zip(&self, other: &Self, f: impl Fn(u64, u64, u64) -> u64) -> Result<Self> {
        if self.group != other.group || self.moduli != other.moduli {
            return Err(BmtError::InvalidArgument(
                "class functions live on different groups or fields".into(),
            ));
        }
        let kind = if self.kind == CharKind::Brauer || other.kind == CharKind::Brauer {
            CharKind::Brauer
        } else {
            CharKind::Ordinary
        };
        let values = [0, 1].map(|i| {
            let m = self.moduli[i];
            self.values[i].iter().zip(&other.values[i]).map(|(&a, &b)| f(a, b, m)).collect()
        });
        Ok(Self { group: self.group, kind, moduli: self.moduli, values })
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.zip(other, field::mul)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip(other, field::add)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip(other, field::sub)
    }

    pub fn scale(&self, factor: i64) -> Self {
        let values = [0, 1].map(|i| {
            let m = self.moduli[i];
            let f = field::from_i64(factor, m);
            self.values[i].iter().map(|&a| field::mul(a, f, m)).collect()
        });
        Self { values, ..self.clone() }
    }

    /// Integer value at class `idx`, if both fields give the same small integer.
    pub fn integer_value(&self, idx: usize) -> Result<i64> {
        let v = [0, 1].map(|i| field::lift(self.values[i][idx], self.moduli[i]));
        if v[0] != v[1] {
            return Err(BmtError::ArithmeticFault {
                moduli: self.moduli,
                detail: format!("value at class {idx} is not a common integer: {v:?}"),
            });
        }
        Ok(v[0])
    }

    /// Value at the identity.
    pub fn degree(&self) -> Result<i64> {
        self.integer_value(0)
    }
}

/// Metadata that pins down the arithmetic domain of a computation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Provenance {
    pub p: u64,
    pub moduli: [u64; 2],
    /// The fixed lift of the generator of `F_{p^2}^x` in each field.
    pub omega: [u64; 2],
}

/// `M` distinct `SL_2` constituents, each with multiplicity `m`.
#[derive(Debug, Clone)]
pub struct SlConstituents {
    pub big_m: u64,
    pub m: u64,
    pub pieces: Vec<ClassFunction>,
}

struct BrauerBasis {
    /// Column `s` of the inverse Brauer matrix, per modulus, over `p`-regular classes.
    inverse_columns: [Vec<Vec<u64>>; 2],
    regular: Vec<usize>,
}

/// Class tables, characters and decomposition data for one prime `p`.
pub struct RepContext {
    p: u64,
    capacity: u64,
    moduli: [Modulus; 2],
    gl: ConjClassTable,
    sl: ConjClassTable,
    gl_weights: Vec<SerreWeightGL>,
    sl_weights: Vec<SerreWeightSL>,
    gl_basis: BrauerBasis,
    sl_basis: BrauerBasis,
    gauss: [u64; 2],
    sl_irreps: Vec<ClassFunction>,
}

impl std::fmt::Debug for RepContext {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("RepContext").field("p", &self.p).field("moduli", &self.moduli_values()).finish()
    }
}

/// Default dimension capacity: enough for `sigma(t) (x) Symm^k` with `k < 4p`.
pub fn default_capacity(p: u64) -> u64 {
    4 * p * (p + 1)
}

impl RepContext {
    pub fn new(p: u64) -> Result<Self> {
        Self::with_capacity(p, default_capacity(p))
    }

    /// `capacity` bounds the degree of any character handed to the decomposer.
    pub fn with_capacity(p: u64, capacity: u64) -> Result<Self> {
        crate::arith::require_odd_prime(p)?;
        let capacity = capacity.max(p + 1);
        let moduli = field::choose_moduli(p, capacity)?;
        let gl = ConjClassTable::new(Group::GL2, p);
        let sl = ConjClassTable::new(Group::SL2, p);
        let gl_weights = enumerate_s(2, p)?;
        let sl_weights = enumerate_sigma(2, p)?;
        let gauss = [0, 1].map(|i| {
            let md = &moduli[i];
            (1..p).fold(0, |acc, x| {
                let z = pow_mod(md.zeta_p, x, md.ell);
                if pow_mod(x, (p - 1) / 2, p) == 1 {
                    field::add(acc, z, md.ell)
                } else {
                    field::sub(acc, z, md.ell)
                }
            })
        });
        let mut ctx = Self {
            p,
            capacity,
            moduli,
            gl,
            sl,
            gl_weights,
            sl_weights,
            gl_basis: BrauerBasis { inverse_columns: [vec![], vec![]], regular: vec![] },
            sl_basis: BrauerBasis { inverse_columns: [vec![], vec![]], regular: vec![] },
            gauss,
            sl_irreps: Vec::new(),
        };
        ctx.gl_basis = ctx.brauer_basis(Group::GL2)?;
        ctx.sl_basis = ctx.brauer_basis(Group::SL2)?;
        ctx.sl_irreps = ctx.build_sl_irreps()?;
        Ok(ctx)
    }

    fn brauer_basis(&self, group: Group) -> Result<BrauerBasis> {
        let table = self.table(group);
        let regular = table.regular_indices();
        let rows: Vec<ClassFunction> = match group {
            Group::GL2 => self.gl_weights.iter().map(|s| self.symm_brauer(group, s.a(), s.b())).collect(),
            Group::SL2 => self.sl_weights.iter().map(|s| self.symm_brauer(group, s.a(), 0)).collect(),
        };
        if rows.len() != regular.len() {
            return Err(BmtError::ArithmeticFault {
                moduli: self.moduli_values(),
                detail: format!("{} simples but {} p-regular classes", rows.len(), regular.len()),
            });
        }
        let mut inverse_columns = [vec![], vec![]];
        for i in 0..2 {
            let m = self.moduli[i].ell;
            let matrix: Vec<Vec<u64>> =
                rows.iter().map(|r| regular.iter().map(|&c| r.values[i][c]).collect()).collect();
            let inv = field::invert(&matrix, m).ok_or_else(|| BmtError::ArithmeticFault {
                moduli: self.moduli_values(),
                detail: format!("Brauer table of {group:?} is singular mod {m}"),
            })?;
            // c = v B^{-1}: c_s is v dotted with column s of the inverse.
            inverse_columns[i] =
                (0..rows.len()).map(|s| inv.iter().map(|row| row[s]).collect()).collect();
        }
        Ok(BrauerBasis { inverse_columns, regular })
    }

    fn build_sl_irreps(&self) -> Result<Vec<ClassFunction>> {
        let mut out: Vec<ClassFunction> = Vec::new();
        for r in Gl2Irrep::all(self.p) {
            let chi = self.irrep_character(&r)?;
            for piece in self.constituents_over_sl2(&chi)?.pieces {
                if !out.contains(&piece) {
                    out.push(piece);
                }
            }
        }
        Ok(out)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn capacity(&self) -> u64 {
        self.capacity
    }

    pub fn moduli_values(&self) -> [u64; 2] {
        [self.moduli[0].ell, self.moduli[1].ell]
    }

    pub fn modulus(&self, i: usize) -> &Modulus {
        &self.moduli[i]
    }

    pub fn provenance(&self) -> Provenance {
        Provenance {
            p: self.p,
            moduli: self.moduli_values(),
            omega: [self.moduli[0].omega, self.moduli[1].omega],
        }
    }

    pub fn table(&self, group: Group) -> &ConjClassTable {
        match group {
            Group::GL2 => &self.gl,
            Group::SL2 => &self.sl,
        }
    }

    pub fn class_table(&self, group: Group) -> ConjClassTable {
        self.table(group).clone()
    }

    pub fn gl_weights(&self) -> &[SerreWeightGL] {
        &self.gl_weights
    }

    pub fn sl_weights(&self) -> &[SerreWeightSL] {
        &self.sl_weights
    }

    /// A Gauss sum `G` with `G^2 = (-1/p) p`, in each field.
    pub fn gauss_sum(&self) -> [u64; 2] {
        self.gauss
    }

    fn from_values(&self, group: Group, kind: CharKind, values: [Vec<u64>; 2]) -> ClassFunction {
        ClassFunction { group, kind, moduli: self.moduli_values(), values }
    }

    pub fn constant(&self, group: Group, c: i64) -> ClassFunction {
        let n = self.table(group).len();
        let values = [0, 1].map(|i| vec![field::from_i64(c, self.moduli[i].ell); n]);
        self.from_values(group, CharKind::Ordinary, values)
    }

    pub fn irrep_character(&self, irrep: &Gl2Irrep) -> Result<ClassFunction> {
        let irrep = irrep.normalize(self.p)?;
        let values = [0, 1].map(|i| irrep.values(&self.moduli[i], &self.gl));
        Ok(self.from_values(Group::GL2, CharKind::Ordinary, values))
    }

    pub fn gl_irreps(&self) -> Vec<Gl2Irrep> {
        Gl2Irrep::all(self.p)
    }

    pub fn sl_irreps(&self) -> &[ClassFunction] {
        &self.sl_irreps
    }

    /// Brauer character of `Symm^k (x) det^b` for any `k >= 0`, through the
    /// fixed lift of eigenvalues.
    pub fn symm_brauer(&self, group: Group, k: u64, b: u64) -> ClassFunction {
        let table = self.table(group);
        let values = [0, 1].map(|i| {
            let md = &self.moduli[i];
            let ell = md.ell;
            table
                .classes
                .iter()
                .map(|c| {
                    if !c.p_regular {
                        return 0;
                    }
                    let [e1, e2] = c.eigen.map(|e| e as i64);
                    let x = md.omega_pow(e1);
                    // sum_{i=0}^{k} x^i y^(k-i)
                    let mut sum = 0;
                    let mut xi = 1;
                    let mut yk = md.omega_pow(e2 * k as i64);
                    let y_inv = md.omega_pow(-e2);
                    for _ in 0..=k {
                        sum = field::add(sum, field::mul(xi, yk, ell), ell);
                        xi = field::mul(xi, x, ell);
                        yk = field::mul(yk, y_inv, ell);
                    }
                    field::mul(sum, md.omega_pow((e1 + e2) * b as i64), ell)
                })
                .collect()
        });
        self.from_values(group, CharKind::Brauer, values)
    }

    /// Brauer character of the simple module `Symm^a (x) det^b` (`b` ignored on `SL_2`).
    pub fn brauer_char_simple(&self, a: u64, b: u64, group: Group) -> Result<ClassFunction> {
        let p = self.p;
        if a >= p || (group == Group::GL2 && b >= p - 1) {
            return Err(BmtError::InvalidArgument(format!(
                "(a, b) = ({a}, {b}) outside 0 <= a <= {}, 0 <= b <= {}",
                p - 1,
                p - 2
            )));
        }
        let b = if group == Group::GL2 { b } else { 0 };
        Ok(self.symm_brauer(group, a, b))
    }

    /// Reduction of `W(ell - delta) = Symm^(l1 - l2 - 1) (x) det^l2` to `GL_2(F_p)`.
    pub fn sigma_gl_of_hodge(&self, ell: &GLWeight) -> Result<ClassFunction> {
        if ell.n() != 2 {
            return Err(BmtError::InvalidArgument(format!("rank {} is not 2", ell.n())));
        }
        if !ell.is_regular() {
            return Err(BmtError::NotRegular(ell.entries().to_vec()));
        }
        let [l1, l2] = [ell.entries()[0], ell.entries()[1]];
        let b = crate::arith::rem(l2, self.p - 1);
        Ok(self.symm_brauer(Group::GL2, (l1 - l2 - 1) as u64, b))
    }

    pub fn restrict_to_sl2(&self, chi: &ClassFunction) -> Result<ClassFunction> {
        if chi.group != Group::GL2 {
            return Err(BmtError::InvalidArgument("restriction needs a GL_2 class function".into()));
        }
        let values = [0, 1].map(|i| {
            self.sl.classes.iter().map(|c| chi.values[i][c.parent.expect("SL_2 class")]).collect()
        });
        Ok(self.from_values(Group::SL2, chi.kind, values))
    }

    /// `<a, b> = |G|^{-1} sum_g a(g) b(g^{-1})` as an integer.
    pub fn inner_product(&self, a: &ClassFunction, b: &ClassFunction) -> Result<i64> {
        if a.kind != CharKind::Ordinary || b.kind != CharKind::Ordinary || a.group != b.group {
            return Err(BmtError::InvalidArgument(
                "inner products need ordinary characters of one group".into(),
            ));
        }
        let table = self.table(a.group);
        let v = [0, 1].map(|i| {
            let m = self.moduli[i].ell;
            let sum = table.classes.iter().enumerate().fold(0, |acc, (n, c)| {
                let term = field::mul(a.values[i][n], b.values[i][c.inverse], m);
                field::add(acc, field::mul(term, c.size % m, m), m)
            });
            let order_inv = field::inv(table.order() % m, m).expect("group order is a unit");
            field::lift(field::mul(sum, order_inv, m), m)
        });
        if v[0] != v[1] {
            return Err(BmtError::ArithmeticFault {
                moduli: self.moduli_values(),
                detail: format!("inner product is not a common integer: {v:?}"),
            });
        }
        Ok(v[0])
    }

    fn solve(&self, chi: &ClassFunction, basis: &BrauerBasis, dims: &[u64]) -> Result<Vec<i64>> {
        let degree = chi.degree()?;
        if degree < 0 || degree as u64 > self.capacity {
            return Err(BmtError::InvalidArgument(format!(
                "degree {degree} outside the capacity {} of this context",
                self.capacity
            )));
        }
        let fault = |detail: String| BmtError::ArithmeticFault { moduli: self.moduli_values(), detail };
        let mut solutions = [vec![], vec![]];
        for i in 0..2 {
            let m = self.moduli[i].ell;
            let v: Vec<u64> = basis.regular.iter().map(|&c| chi.values[i][c]).collect();
            solutions[i] = basis.inverse_columns[i]
                .iter()
                .map(|col| field::lift(field::dot(&v, col, m), m))
                .collect::<Vec<i64>>();
        }
        if solutions[0] != solutions[1] {
            return Err(fault(format!(
                "the two fields disagree: {:?} vs {:?}",
                solutions[0], solutions[1]
            )));
        }
        let c = std::mem::take(&mut solutions[0]);
        if let Some(bad) = c.iter().find(|&&x| x < 0 || x > degree) {
            return Err(fault(format!("multiplicity {bad} is not in [0, {degree}]")));
        }
        let total: i64 = c.iter().zip(dims).map(|(&x, &d)| x * d as i64).sum();
        if total != degree {
            return Err(fault(format!("dimension {total} of the reduction differs from degree {degree}")));
        }
        Ok(c)
    }

    /// Jordan-Holder constituents of the reduction of a `GL_2` character.
    pub fn decompose_gl(&self, chi: &ClassFunction) -> Result<GrothendieckGL> {
        if chi.group != Group::GL2 {
            return Err(BmtError::InvalidArgument("expected a GL_2 class function".into()));
        }
        let dims: Vec<u64> = self.gl_weights.iter().map(|s| s.a() + 1).collect();
        let c = self.solve(chi, &self.gl_basis, &dims)?;
        Ok(GrothendieckElt::from_terms(self.gl_weights.iter().cloned().zip(c)))
    }

    pub fn decompose_sl(&self, chi: &ClassFunction) -> Result<GrothendieckSL> {
        if chi.group != Group::SL2 {
            return Err(BmtError::InvalidArgument("expected an SL_2 class function".into()));
        }
        let dims: Vec<u64> = self.sl_weights.iter().map(|s| s.a() + 1).collect();
        let c = self.solve(chi, &self.sl_basis, &dims)?;
        Ok(GrothendieckElt::from_terms(self.sl_weights.iter().cloned().zip(c)))
    }

    pub fn brauer_of_gl(&self, x: &GrothendieckGL) -> ClassFunction {
        x.terms().iter().fold(self.constant(Group::GL2, 0), |acc, (s, &c)| {
            acc.add(&self.symm_brauer(Group::GL2, s.a(), s.b()).scale(c)).expect("same group")
        })
    }

    pub fn brauer_of_sl(&self, x: &GrothendieckSL) -> ClassFunction {
        x.terms().iter().fold(self.constant(Group::SL2, 0), |acc, (s, &c)| {
            acc.add(&self.symm_brauer(Group::SL2, s.a(), 0).scale(c)).expect("same group")
        })
    }

    pub fn tensor_ss_gl(&self, x: &GrothendieckGL, y: &GrothendieckGL) -> Result<GrothendieckGL> {
        self.decompose_gl(&self.brauer_of_gl(x).mul(&self.brauer_of_gl(y))?)
    }

    pub fn tensor_ss_sl(&self, x: &GrothendieckSL, y: &GrothendieckSL) -> Result<GrothendieckSL> {
        self.decompose_sl(&self.brauer_of_sl(x).mul(&self.brauer_of_sl(y))?)
    }

    /// Splits the restriction of an irreducible `GL_2` character to `SL_2`.
    ///
    /// When the restriction has two constituents they agree off the unipotent
    /// classes, where they differ by a Gauss sum.
    pub fn constituents_over_sl2(&self, chi: &ClassFunction) -> Result<SlConstituents> {
        let fault = |detail: String| BmtError::ArithmeticFault { moduli: self.moduli_values(), detail };
        if self.inner_product(chi, chi)? != 1 {
            return Err(BmtError::InvalidArgument("character is not irreducible".into()));
        }
        let res = self.restrict_to_sl2(chi)?;
        let big_m = self.inner_product(&res, &res)?;
        let pieces = match big_m {
            1 => vec![res],
            2 => {
                let minus_i = self.sl.index_of(ClassRep::Central { i: (self.p - 1) / 2 }).expect("-I");
                let values = [0, 1].map(|i| {
                    let m = self.moduli[i].ell;
                    let half = field::inv(2, m).expect("odd modulus");
                    let sign = field::mul(res.values[i][minus_i], field::inv(res.values[i][0], m).expect("degree"), m);
                    self.sl
                        .classes
                        .iter()
                        .enumerate()
                        .map(|(n, c)| match c.rep {
                            ClassRep::SlUnipotent { negative, nonsquare } => {
                                let u = self.sl.index_of(ClassRep::SlUnipotent { negative: false, nonsquare }).expect("u");
                                let g = if nonsquare { field::sub(0, self.gauss[i], m) } else { self.gauss[i] };
                                let base = field::mul(field::add(res.values[i][u], g, m), half, m);
                                if negative {
                                    field::mul(base, sign, m)
                                } else {
                                    base
                                }
                            }
                            _ => field::mul(res.values[i][n], half, m),
                        })
                        .collect()
                });
                let pi = self.from_values(Group::SL2, CharKind::Ordinary, values);
                let other = res.sub(&pi)?;
                vec![pi, other]
            }
            other => return Err(fault(format!("<Res chi, Res chi> = {other}, expected 1 or 2"))),
        };
        for a in &pieces {
            for b in &pieces {
                let expected = i64::from(a == b);
                if self.inner_product(a, b)? != expected {
                    return Err(fault("SL_2 constituents are not orthonormal".into()));
                }
            }
        }
        // n = 2: restrictions are multiplicity free.
        Ok(SlConstituents { big_m: big_m as u64, m: 1, pieces })
    }

    /// `c` such that the scalar `g` acts by `chi_c(g)`, read from the value at `g I`.
    pub fn central_exponent(&self, chi: &ClassFunction) -> Result<u64> {
        if chi.group != Group::GL2 {
            return Err(BmtError::InvalidArgument("central characters are taken on GL_2".into()));
        }
        let g = self.gl.index_of(ClassRep::Central { i: 1 % (self.p - 1) }).expect("central class");
        let p = self.p;
        (0..p - 1)
            .find(|&c| {
                (0..2).all(|i| {
                    let md = &self.moduli[i];
                    let w = md.omega_pow(((p + 1) * c) as i64);
                    field::mul(chi.values[i][0], w, md.ell) == chi.values[i][g]
                })
            })
            .filter(|_| chi.values.iter().all(|v| v[0] != 0))
            .ok_or_else(|| BmtError::ArithmeticFault {
                moduli: self.moduli_values(),
                detail: "scalars do not act through a character".into(),
            })
    }
}

#[cfg(test)]
mod tests;
