//! Tame inertial types for `GL_2(Q_p)` and `PGL_2(Q_p)` and their K-types.
//!
//! A tame type is a sum of two characters of tame inertia. Through the
//! fundamental characters these are exponents: `chi_e` of level one
//! (`e mod p - 1`) and `eta_f` of level two (`f mod p^2 - 1`). A cuspidal
//! type `eta_f + eta_f^p` needs `eta_f != eta_f^p`, i.e. `(p + 1)` not dividing `f`.
//!
//! Only the inertial data matters for multiplicities, so the unitary
//! normalization twist of the local Langlands correspondence is not modelled.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::arith::{rem, require_odd_prime};
use crate::char_groups::{enumerate_gi, CharSubgroup, TameChar};
use crate::finite_group_reps::{ClassFunction, Gl2Irrep, RepContext};
use crate::{BmtError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SemistableFlavor {
    /// Scalar types get the one-dimensional K-type `chi o det`.
    Crystalline,
    /// Scalar types get `St (x) chi o det`.
    Semistable,
}

impl SemistableFlavor {
    pub const ALL: [SemistableFlavor; 2] = [SemistableFlavor::Crystalline, SemistableFlavor::Semistable];

    pub fn short(&self) -> &'static str {
        match self {
            SemistableFlavor::Crystalline => "cr",
            SemistableFlavor::Semistable => "st",
        }
    }
}

impl FromStr for SemistableFlavor {
    type Err = BmtError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "cr" | "crystalline" => Ok(SemistableFlavor::Crystalline),
            "st" | "semistable" => Ok(SemistableFlavor::Semistable),
            _ => Err(BmtError::Parse { what: "flavor", detail: s.into() }),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TypeVariant {
    /// Stored with `e1 < e2`.
    PrincipalSeries { e1: u64, e2: u64 },
    Cuspidal { f: u64 },
    Scalar { e: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "TypeRepr", into = "TypeRepr")]
pub struct TameInertialTypeGL2 {
    p: u64,
    variant: TypeVariant,
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
enum TypeRepr {
    Ps { e: [u64; 2], p: u64 },
    Cusp { f: u64, p: u64 },
    Scalar { e: u64, p: u64 },
}

impl TryFrom<TypeRepr> for TameInertialTypeGL2 {
    type Error = BmtError;

    fn try_from(r: TypeRepr) -> Result<Self> {
        match r {
            TypeRepr::Ps { e, p } => Self::principal_series(p, e[0] as i64, e[1] as i64),
            TypeRepr::Cusp { f, p } => Self::cuspidal(p, f as i64),
            TypeRepr::Scalar { e, p } => Self::scalar(p, e as i64),
        }
    }
}

impl From<TameInertialTypeGL2> for TypeRepr {
    fn from(t: TameInertialTypeGL2) -> Self {
        let p = t.p;
        match t.variant {
            TypeVariant::PrincipalSeries { e1, e2 } => TypeRepr::Ps { e: [e1, e2], p },
            TypeVariant::Cuspidal { f } => TypeRepr::Cusp { f, p },
            TypeVariant::Scalar { e } => TypeRepr::Scalar { e, p },
        }
    }
}

impl fmt::Display for TameInertialTypeGL2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.variant {
            TypeVariant::PrincipalSeries { e1, e2 } => write!(f, "ps:{e1},{e2}"),
            TypeVariant::Cuspidal { f: x } => write!(f, "cusp:{x}"),
            TypeVariant::Scalar { e } => write!(f, "scalar:{e}"),
        }
    }
}

impl TameInertialTypeGL2 {
    pub fn scalar(p: u64, e: i64) -> Result<Self> {
        require_odd_prime(p)?;
        Ok(Self { p, variant: TypeVariant::Scalar { e: rem(e, p - 1) } })
    }

    pub fn principal_series(p: u64, e1: i64, e2: i64) -> Result<Self> {
        require_odd_prime(p)?;
        let (e1, e2) = (rem(e1, p - 1), rem(e2, p - 1));
        if e1 == e2 {
            return Err(BmtError::InvalidArgument(format!(
                "principal series with equal exponents {e1}; use a scalar type"
            )));
        }
        Ok(Self { p, variant: TypeVariant::PrincipalSeries { e1: e1.min(e2), e2: e1.max(e2) } })
    }

    pub fn cuspidal(p: u64, f: i64) -> Result<Self> {
        require_odd_prime(p)?;
        let f = rem(f, p * p - 1);
        if f % (p + 1) == 0 {
            return Err(BmtError::InvalidArgument(format!(
                "cuspidal exponent {f} is divisible by p + 1 = {}",
                p + 1
            )));
        }
        Ok(Self { p, variant: TypeVariant::Cuspidal { f } })
    }

    /// Parses `scalar:e`, `ps:e1,e2`, `cusp:f` or the JSON form.
    pub fn parse(s: &str, p: u64) -> Result<Self> {
        let s = s.trim();
        if s.starts_with('{') {
            let t: Self = serde_json::from_str(s)
                .map_err(|e| BmtError::Parse { what: "inertial type", detail: e.to_string() })?;
            if t.p != p {
                return Err(BmtError::PrimeMismatch { type_p: t.p as u32, engine_p: p as u32 });
            }
            return Ok(t);
        }
        let bad = || BmtError::Parse { what: "inertial type", detail: s.to_string() };
        let (kind, args) = s.split_once(':').ok_or_else(bad)?;
        let nums: Vec<i64> = args
            .split(',')
            .map(|x| x.trim().parse::<i64>().map_err(|_| bad()))
            .collect::<Result<_>>()?;
        match (kind, nums.as_slice()) {
            ("scalar", &[e]) => Self::scalar(p, e),
            ("ps", &[e1, e2]) => Self::principal_series(p, e1, e2),
            ("cusp", &[f]) => Self::cuspidal(p, f),
            _ => Err(bad()),
        }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn variant(&self) -> TypeVariant {
        self.variant
    }

    /// `t (x) chi_a`.
    pub fn twist_by(&self, a: i64) -> Self {
        let p = self.p;
        let variant = match self.variant {
            TypeVariant::PrincipalSeries { e1, e2 } => {
                let (x, y) = (rem(e1 as i64 + a, p - 1), rem(e2 as i64 + a, p - 1));
                TypeVariant::PrincipalSeries { e1: x.min(y), e2: x.max(y) }
            }
            TypeVariant::Scalar { e } => TypeVariant::Scalar { e: rem(e as i64 + a, p - 1) },
            TypeVariant::Cuspidal { f } => {
                TypeVariant::Cuspidal { f: rem(f as i64 + a * (p as i64 + 1), p * p - 1) }
            }
        };
        Self { p, variant }
    }

    /// Exponent of `det t` as a power of `chi_1`.
    pub fn det_exponent(&self) -> u64 {
        let q1 = self.p - 1;
        match self.variant {
            TypeVariant::PrincipalSeries { e1, e2 } => (e1 + e2) % q1,
            TypeVariant::Scalar { e } => 2 * e % q1,
            TypeVariant::Cuspidal { f } => f % q1,
        }
    }

    /// Sort key used to pick orbit representatives: variant rank, then the
    /// exponent data with the Frobenius ambiguity of cuspidal types removed.
    fn sort_key(&self) -> (u8, [u64; 2]) {
        let p = self.p;
        match self.variant {
            TypeVariant::Scalar { e } => (0, [e, 0]),
            TypeVariant::PrincipalSeries { e1, e2 } => (1, [e1, e2]),
            TypeVariant::Cuspidal { f } => (2, [f.min(p * f % (p * p - 1)), 0]),
        }
    }

    /// One representative of each isomorphism class of tame types.
    pub fn all(p: u64) -> Result<Vec<Self>> {
        require_odd_prime(p)?;
        let m = p * p - 1;
        let mut out = Vec::new();
        for e in 0..p - 1 {
            out.push(Self { p, variant: TypeVariant::Scalar { e } });
        }
        for e1 in 0..p - 1 {
            for e2 in e1 + 1..p - 1 {
                out.push(Self { p, variant: TypeVariant::PrincipalSeries { e1, e2 } });
            }
        }
        for f in 0..m {
            if f % (p + 1) != 0 && f <= p * f % m {
                out.push(Self { p, variant: TypeVariant::Cuspidal { f } });
            }
        }
        Ok(out)
    }
}

pub fn twist(t: &TameInertialTypeGL2, alpha: &TameChar) -> Result<TameInertialTypeGL2> {
    if alpha.q != t.p {
        return Err(BmtError::PrimeMismatch { type_p: t.p as u32, engine_p: alpha.q as u32 });
    }
    Ok(t.twist_by(alpha.exponent as i64))
}

pub fn is_isomorphic(t: &TameInertialTypeGL2, u: &TameInertialTypeGL2) -> bool {
    if t.p != u.p {
        return false;
    }
    let p = t.p;
    match (t.variant, u.variant) {
        (TypeVariant::Cuspidal { f }, TypeVariant::Cuspidal { f: g }) => g == f || g == p * f % (p * p - 1),
        (a, b) => a == b,
    }
}

/// `{alpha in G_I : t (x) alpha = t}` for `n = 2`.
pub fn stabilizer_gi(t: &TameInertialTypeGL2) -> CharSubgroup {
    let exps = enumerate_gi(2, t.p)
        .expect("p is odd")
        .into_iter()
        .filter(|a| is_isomorphic(t, &t.twist_by(a.exponent as i64)))
        .map(|a| a.exponent);
    CharSubgroup::new(2, t.p, exps).expect("stabilizers are subgroups")
}

/// A tame type for `PGL_2`: the twist orbit of a `GL_2` type, stored through
/// its least element.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TameInertialTypePGL2 {
    orbit: TameInertialTypeGL2,
}

impl fmt::Display for TameInertialTypePGL2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.orbit)
    }
}

impl TameInertialTypePGL2 {
    pub fn from_gl(t: &TameInertialTypeGL2) -> Self {
        let p = t.p;
        let best = (0..p as i64 - 1)
            .map(|a| t.twist_by(a))
            .min_by_key(|u| u.sort_key())
            .expect("p > 2");
        let orbit = match best.variant {
            TypeVariant::Cuspidal { .. } => {
                let [f, _] = best.sort_key().1;
                TameInertialTypeGL2 { p, variant: TypeVariant::Cuspidal { f } }
            }
            _ => best,
        };
        Self { orbit }
    }

    pub fn representative(&self) -> &TameInertialTypeGL2 {
        &self.orbit
    }

    pub fn p(&self) -> u64 {
        self.orbit.p
    }

    pub fn all(p: u64) -> Result<Vec<Self>> {
        let mut out: Vec<Self> = TameInertialTypeGL2::all(p)?.iter().map(Self::from_gl).collect();
        out.sort();
        out.dedup();
        Ok(out)
    }
}

/// One lift per coset of the stabilizer: `t (x) mu` for `mu` in `G_I / G_I(tau)`.
pub fn lifts_of_pgl_type(tau: &TameInertialTypePGL2) -> Vec<TameInertialTypeGL2> {
    let t = tau.orbit;
    crate::char_groups::quotient_reps(&stabilizer_gi(&t))
        .expect("valid subgroup")
        .iter()
        .map(|mu| t.twist_by(mu.exponent as i64))
        .collect()
}

/// Assignment of an irreducible representation of `GL_2(F_p)` to each type.
pub trait KTypeRecipe: Send + Sync + fmt::Debug {
    fn irrep(&self, t: &TameInertialTypeGL2, flavor: SemistableFlavor) -> Result<Gl2Irrep>;
}

/// Principal series for `chi_e1 + chi_e2`, cuspidal `Theta(eta_f)` for
/// `eta_f + eta_f^p`, and `chi_e o det` (crystalline) or `St (x) chi_e o det`
/// (semistable) for `chi_e + chi_e`.
#[derive(Debug, Clone, Copy, Default)]
pub struct StandardRecipe;

impl KTypeRecipe for StandardRecipe {
    fn irrep(&self, t: &TameInertialTypeGL2, flavor: SemistableFlavor) -> Result<Gl2Irrep> {
        Ok(match (t.variant, flavor) {
            (TypeVariant::PrincipalSeries { e1, e2 }, _) => Gl2Irrep::PrincipalSeries { e1, e2 },
            (TypeVariant::Cuspidal { f }, _) => Gl2Irrep::Cuspidal { f },
            (TypeVariant::Scalar { e }, SemistableFlavor::Crystalline) => Gl2Irrep::OneDim { e },
            (TypeVariant::Scalar { e }, SemistableFlavor::Semistable) => Gl2Irrep::Steinberg { e },
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecipeEntry {
    #[serde(rename = "type")]
    pub t: TameInertialTypeGL2,
    /// Applies to both flavors when absent.
    #[serde(default)]
    pub flavor: Option<SemistableFlavor>,
    pub irrep: Gl2Irrep,
}

/// Explicit assignments read from a data file, falling back to [`StandardRecipe`].
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct TableRecipe {
    pub entries: Vec<RecipeEntry>,
}

impl TableRecipe {
    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| BmtError::Parse { what: "K-type table", detail: e.to_string() })
    }
}

impl KTypeRecipe for TableRecipe {
    fn irrep(&self, t: &TameInertialTypeGL2, flavor: SemistableFlavor) -> Result<Gl2Irrep> {
        let hit = self
            .entries
            .iter()
            .find(|e| is_isomorphic(&e.t, t) && e.flavor.is_none_or(|f| f == flavor));
        match hit {
            Some(e) => e.irrep.normalize(t.p),
            None => StandardRecipe.irrep(t, flavor),
        }
    }
}

/// Character of the K-type `sigma(t)` under the standard recipe.
pub fn k_type(ctx: &RepContext, t: &TameInertialTypeGL2, flavor: SemistableFlavor) -> Result<ClassFunction> {
    k_type_with(ctx, &StandardRecipe, t, flavor)
}

pub fn k_type_with(
    ctx: &RepContext,
    recipe: &dyn KTypeRecipe,
    t: &TameInertialTypeGL2,
    flavor: SemistableFlavor,
) -> Result<ClassFunction> {
    if t.p != ctx.p() {
        return Err(BmtError::PrimeMismatch { type_p: t.p as u32, engine_p: ctx.p() as u32 });
    }
    ctx.irrep_character(&recipe.irrep(t, flavor)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    const PRIMES: [u64; 5] = [3, 5, 7, 11, 13];

    #[test]
    fn twist_examples() {
        let t = TameInertialTypeGL2::cuspidal(5, 1).unwrap();
        assert_eq!(t.twist_by(1), TameInertialTypeGL2::cuspidal(5, 7).unwrap());
        let s = TameInertialTypeGL2::scalar(5, 0).unwrap();
        assert_eq!(s.twist_by(3), TameInertialTypeGL2::scalar(5, 3).unwrap());
        assert_eq!(twist(&s, &TameChar::identity(5)).unwrap(), s);
        assert!(twist(&s, &TameChar::identity(7)).is_err());
    }

    #[test]
    fn isomorphism() {
        let p = 5;
        for f in [1i64, 2, 3, 7] {
            let t = TameInertialTypeGL2::cuspidal(p, f).unwrap();
            let u = TameInertialTypeGL2::cuspidal(p, f * p as i64).unwrap();
            assert!(is_isomorphic(&t, &u));
        }
        let a = TameInertialTypeGL2::principal_series(5, 0, 1).unwrap();
        let b = TameInertialTypeGL2::principal_series(5, 0, 2).unwrap();
        assert!(!is_isomorphic(&a, &b));
        assert_eq!(a, TameInertialTypeGL2::principal_series(5, 1, 0).unwrap());
        assert!(TameInertialTypeGL2::principal_series(5, 1, 5).is_err());
        assert!(TameInertialTypeGL2::cuspidal(5, 12).is_err());
    }

    /// Tame inertia acts through `F_{p^2}^x`; a type is determined by the
    /// multiset of its two characters, compared by their exponents mod p^2 - 1.
    fn inertial_multiset(t: &TameInertialTypeGL2) -> [u64; 2] {
        let p = t.p;
        let m = p * p - 1;
        let mut v = match t.variant {
            TypeVariant::Scalar { e } => [e * (p + 1) % m; 2],
            TypeVariant::PrincipalSeries { e1, e2 } => [e1 * (p + 1) % m, e2 * (p + 1) % m],
            TypeVariant::Cuspidal { f } => [f, p * f % m],
        };
        v.sort();
        v
    }

    #[test]
    fn isomorphism_matches_inertial_characters() {
        for p in [3u64, 5, 7] {
            let all = TameInertialTypeGL2::all(p).unwrap();
            let m = (p * p - 1) as i64;
            let mut every: Vec<TameInertialTypeGL2> = all.clone();
            every.extend((0..m).filter_map(|f| TameInertialTypeGL2::cuspidal(p, f).ok()));
            for t in &every {
                for u in &every {
                    assert_eq!(is_isomorphic(t, u), inertial_multiset(t) == inertial_multiset(u));
                }
            }
            // `all` is irredundant and complete
            let mut keys: Vec<[u64; 2]> = all.iter().map(inertial_multiset).collect();
            keys.sort();
            keys.dedup();
            assert_eq!(keys.len(), all.len());
            let q1 = p - 1;
            assert_eq!(all.len() as u64, q1 + q1 * (q1 - 1) / 2 + (p * p - 1 - q1) / 2);
        }
    }

    #[test]
    fn twisting_is_an_action() {
        for p in PRIMES {
            for t in TameInertialTypeGL2::all(p).unwrap() {
                assert_eq!(t.twist_by(0), t);
                for a in 0..p as i64 - 1 {
                    for b in 0..p as i64 - 1 {
                        assert_eq!(t.twist_by(a).twist_by(b), t.twist_by(a + b));
                    }
                }
            }
        }
    }

    #[test]
    fn stabilizers() {
        let s = TameInertialTypeGL2::scalar(5, 0).unwrap();
        assert_eq!(stabilizer_gi(&s).order(), 1);
        let ps = TameInertialTypeGL2::principal_series(5, 0, 2).unwrap();
        assert_eq!(stabilizer_gi(&ps).order(), 2);
        for p in PRIMES {
            let h = (p - 1) / 2;
            for t in TameInertialTypeGL2::all(p).unwrap() {
                let brute = (0..p - 1)
                    .filter(|a| (2 * a) % (p - 1) == 0)
                    .filter(|&a| inertial_multiset(&t.twist_by(a as i64)) == inertial_multiset(&t))
                    .count();
                let st = stabilizer_gi(&t);
                assert_eq!(st.order(), brute);
                let expected = match t.variant {
                    TypeVariant::Scalar { .. } => 1,
                    TypeVariant::PrincipalSeries { e1, e2 } => 1 + usize::from(e2 - e1 == h),
                    TypeVariant::Cuspidal { f } => 1 + usize::from(f % (p + 1) == (p + 1) / 2),
                };
                assert_eq!(st.order(), expected, "{t}");
                for a in 0..p as i64 - 1 {
                    assert_eq!(stabilizer_gi(&t.twist_by(a)), st);
                }
            }
        }
    }

    #[test]
    fn pgl_orbits_and_lifts() {
        let tau = TameInertialTypePGL2::from_gl(&TameInertialTypeGL2::scalar(5, 3).unwrap());
        let lifts = lifts_of_pgl_type(&tau);
        assert_eq!(
            lifts,
            vec![TameInertialTypeGL2::scalar(5, 0).unwrap(), TameInertialTypeGL2::scalar(5, 2).unwrap()]
        );
        let tau3 = TameInertialTypePGL2::from_gl(&TameInertialTypeGL2::scalar(3, 1).unwrap());
        assert_eq!(lifts_of_pgl_type(&tau3).len(), 2);
        for p in PRIMES {
            for t in TameInertialTypeGL2::all(p).unwrap() {
                let tau = TameInertialTypePGL2::from_gl(&t);
                for a in 0..p as i64 - 1 {
                    assert_eq!(TameInertialTypePGL2::from_gl(&t.twist_by(a)), tau);
                }
                let lifts = lifts_of_pgl_type(&tau);
                assert_eq!(lifts.len() * stabilizer_gi(&t).order(), 2);
                for (i, x) in lifts.iter().enumerate() {
                    assert_eq!(TameInertialTypePGL2::from_gl(x), tau);
                    for y in &lifts[i + 1..] {
                        assert!(!is_isomorphic(x, y));
                    }
                }
            }
        }
    }

    #[test]
    fn json_and_parse() {
        let t = TameInertialTypeGL2::principal_series(7, 3, 1).unwrap();
        let j = serde_json::to_string(&t).unwrap();
        assert_eq!(j, r#"{"kind":"ps","e":[1,3],"p":7}"#);
        assert_eq!(serde_json::from_str::<TameInertialTypeGL2>(&j).unwrap(), t);
        assert_eq!(TameInertialTypeGL2::parse("ps:3,1", 7).unwrap(), t);
        assert_eq!(TameInertialTypeGL2::parse(&j, 7).unwrap(), t);
        assert!(matches!(TameInertialTypeGL2::parse(&j, 5), Err(BmtError::PrimeMismatch { .. })));
        assert!(TameInertialTypeGL2::parse("cusp:8", 7).is_err());
        assert!(TameInertialTypeGL2::parse("foo:1", 7).is_err());
        assert!(serde_json::from_str::<TameInertialTypeGL2>(r#"{"kind":"cusp","f":6,"p":5}"#).is_err());
        assert_eq!(
            serde_json::to_string(&TameInertialTypeGL2::scalar(5, 2).unwrap()).unwrap(),
            r#"{"kind":"scalar","e":2,"p":5}"#
        );
    }

    #[test]
    fn table_recipe_overrides() {
        let json = r#"{"entries":[{"type":{"kind":"scalar","e":1,"p":5},"flavor":"crystalline",
            "irrep":{"kind":"steinberg","e":1}}]}"#;
        let r = TableRecipe::from_json(json).unwrap();
        let t = TameInertialTypeGL2::scalar(5, 1).unwrap();
        assert_eq!(r.irrep(&t, SemistableFlavor::Crystalline).unwrap(), Gl2Irrep::Steinberg { e: 1 });
        let u = TameInertialTypeGL2::scalar(5, 2).unwrap();
        assert_eq!(r.irrep(&u, SemistableFlavor::Crystalline).unwrap(), Gl2Irrep::OneDim { e: 2 });
        assert!(TableRecipe::from_json("{").is_err());
    }
}
