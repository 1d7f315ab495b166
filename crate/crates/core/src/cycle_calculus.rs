//! Formal cycles over opaque point labels and the `GL_2 -> PGL_2` identity
//! between Breuil-Mezard cycles.

use std::collections::{BTreeMap, BTreeSet};

use rand::{Rng, RngExt};
use serde::{Deserialize, Serialize};

use crate::finite_group_reps::{GrothendieckGL, GrothendieckSL, WeightKey};
use crate::gl2_types::{lifts_of_pgl_type, SemistableFlavor, TameInertialTypePGL2};
use crate::serre_weights::{central_character, enumerate_s, enumerate_sigma, fiber, SerreWeightGL, SerreWeightSL};
use crate::transfer::{CheckOutcome, Engine, MultiplicityTableGL, MultiplicityTablePGL};
use crate::weight_lattice::{GLWeight, SLWeight};
use crate::{BmtError, Result};

/// An element of the free abelian group on point labels.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Cycle {
    terms: BTreeMap<String, i64>,
}

impl Cycle {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn point(label: &str) -> Self {
        Self::from_terms([(label.to_string(), 1)])
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (String, i64)>) -> Self {
        let mut out = Self::zero();
        for (k, c) in terms {
            out.add_term(&k, c);
        }
        out
    }

    fn add_term(&mut self, label: &str, c: i64) {
        if c == 0 {
            return;
        }
        let e = self.terms.entry(label.to_string()).or_insert(0);
        *e += c;
        if *e == 0 {
            self.terms.remove(label);
        }
    }

    pub fn terms(&self) -> &BTreeMap<String, i64> {
        &self.terms
    }

    pub fn coeff(&self, label: &str) -> i64 {
        self.terms.get(label).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn support(&self) -> BTreeSet<&str> {
        self.terms.keys().map(String::as_str).collect()
    }

    pub fn add(&self, other: &Cycle) -> Cycle {
        let mut out = self.clone();
        for (k, &c) in &other.terms {
            out.add_term(k, c);
        }
        out
    }

    pub fn scale(&self, factor: i64) -> Cycle {
        Cycle::from_terms(self.terms.iter().map(|(k, &c)| (k.clone(), c * factor)))
    }

    pub fn sub(&self, other: &Cycle) -> Cycle {
        self.add(&other.scale(-1))
    }
}

pub fn cycle_add(a: &Cycle, b: &Cycle) -> Cycle {
    a.add(b)
}

pub fn cycle_scale(a: &Cycle, factor: i64) -> Cycle {
    a.scale(factor)
}

pub fn support(a: &Cycle) -> BTreeSet<&str> {
    a.support()
}

pub fn supports_disjoint(a: &Cycle, b: &Cycle) -> bool {
    a.terms.keys().all(|k| !b.terms.contains_key(k))
}

/// `sum_alpha Z(t (x) alpha)`. With `disjoint_required` set the inputs are the
/// characteristic zero cycles, whose supports must be pairwise disjoint.
pub fn z_pgl_from_gl(gl_cycles: &BTreeMap<String, Cycle>, disjoint_required: bool) -> Result<Cycle> {
    if disjoint_required {
        let items: Vec<(&String, &Cycle)> = gl_cycles.iter().collect();
        for (i, (ka, a)) in items.iter().enumerate() {
            for (kb, b) in &items[i + 1..] {
                if let Some(label) = a.terms.keys().find(|k| b.terms.contains_key(*k)) {
                    return Err(BmtError::OverlappingSupports {
                        first: (*ka).clone(),
                        second: (*kb).clone(),
                        label: label.clone(),
                    });
                }
            }
        }
    }
    Ok(gl_cycles.values().fold(Cycle::zero(), |acc, c| acc.add(c)))
}

/// Sums one characteristic zero component per lift of `tau` through
/// [`z_pgl_from_gl`] with disjointness enforced. With `shared_component` set
/// every lift is given the same component, which must be rejected as soon as
/// there are two lifts.
pub fn check_generic_cycles(tau: &TameInertialTypePGL2, shared_component: bool) -> CheckOutcome {
    let lifts = lifts_of_pgl_type(tau);
    let cycles: BTreeMap<String, Cycle> = lifts
        .iter()
        .map(|u| {
            let label = if shared_component { format!("Z[{tau}]") } else { format!("Z[{u}]") };
            (u.to_string(), Cycle::point(&label))
        })
        .collect();
    match z_pgl_from_gl(&cycles, true) {
        Ok(sum) => CheckOutcome::new("generic_fiber_disjoint", sum.support().len() == lifts.len(), || {
            format!("{} lifts but {} components", lifts.len(), sum.support().len())
        }),
        Err(e) => CheckOutcome::fail("generic_fiber_disjoint", e.to_string()),
    }
}

/// The cycles `C_s(rbar)` and `C_sigma(rhobar)`.
///
/// Every `C_s` with `s` of central character different from `kappa` vanishes,
/// where `kappa` is fixed by the determinant of `rbar`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CycleBasis {
    pub p: u64,
    pub central_exponent: u64,
    #[serde(serialize_with = "keyed")]
    gl: BTreeMap<SerreWeightGL, Cycle>,
    #[serde(serialize_with = "keyed")]
    sl: BTreeMap<SerreWeightSL, Cycle>,
}

fn keyed<K: WeightKey, S: serde::Serializer>(m: &BTreeMap<K, Cycle>, s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeMap;
    let mut out = s.serialize_map(Some(m.len()))?;
    for (k, v) in m {
        out.serialize_entry(&k.key(), v)?;
    }
    out.end()
}

impl CycleBasis {
    /// `C_sigma` is derived as the sum of `C_s` over the fiber of `sigma`.
    pub fn from_gl(p: u64, central_exponent: u64, gl: BTreeMap<SerreWeightGL, Cycle>) -> Result<Self> {
        crate::arith::require_odd_prime(p)?;
        let mut gl = gl;
        for s in enumerate_s(2, p)? {
            gl.entry(s).or_default();
        }
        let sl = enumerate_sigma(2, p)?
            .into_iter()
            .map(|sigma| {
                let c = fiber(&sigma, p).iter().fold(Cycle::zero(), |acc, s| acc.add(&gl[s]));
                (sigma, c)
            })
            .collect();
        Ok(Self { p, central_exponent: central_exponent % (p - 1), gl, sl })
    }

    /// Random cycles over the labels `x0, ..., x{labels-1}` with coefficients in `[0, 3]`.
    pub fn random<R: Rng + ?Sized>(p: u64, labels: usize, rng: &mut R) -> Result<Self> {
        let kappa = rng.random_range(0..p - 1);
        let mut gl = BTreeMap::new();
        for s in enumerate_s(2, p)? {
            let c = if central_character(&s, p) == kappa {
                Cycle::from_terms((0..labels).map(|i| (format!("x{i}"), rng.random_range(0..=3))))
            } else {
                Cycle::zero()
            };
            gl.insert(s, c);
        }
        Self::from_gl(p, kappa, gl)
    }

    pub fn gl(&self, s: &SerreWeightGL) -> Option<&Cycle> {
        self.gl.get(s)
    }

    pub fn sl(&self, sigma: &SerreWeightSL) -> Option<&Cycle> {
        self.sl.get(sigma)
    }

    /// Replaces `C_sigma`, possibly breaking the fiber-sum invariant.
    pub fn set_sl(&mut self, sigma: SerreWeightSL, cycle: Cycle) {
        self.sl.insert(sigma, cycle);
    }

    pub fn set_gl(&mut self, s: SerreWeightGL, cycle: Cycle) {
        self.gl.insert(s, cycle);
    }

    /// Checks `C_sigma = sum_{s -> sigma} C_s` and the central-character support condition.
    pub fn check_invariant(&self) -> std::result::Result<(), String> {
        let p = self.p;
        for (sigma, c) in &self.sl {
            let sum = fiber(sigma, p)
                .iter()
                .fold(Cycle::zero(), |acc, s| acc.add(self.gl.get(s).unwrap_or(&Cycle::zero())));
            if sum != *c {
                return Err(format!("C_sigma for sigma = {} is not the sum over its fiber", sigma.a()));
            }
        }
        for (s, c) in &self.gl {
            if !c.is_zero() && central_character(s, p) != self.central_exponent {
                return Err(format!(
                    "C_s for s = ({},{}) is nonzero but its central character differs from {}",
                    s.a(),
                    s.b(),
                    self.central_exponent
                ));
            }
        }
        Ok(())
    }
}

fn combine<'a, K: WeightKey + 'a>(
    terms: impl Iterator<Item = (&'a K, &'a i64)>,
    lookup: impl Fn(&K) -> Option<&'a Cycle>,
) -> Result<Cycle> {
    let mut out = Cycle::zero();
    for (k, &n) in terms {
        let c = lookup(k).ok_or_else(|| BmtError::MissingBasisEntry(k.key()))?;
        out = out.add(&c.scale(n));
    }
    Ok(out)
}

/// `sum_s a(s) C_s`.
pub fn bm_rhs_gl(entries: &GrothendieckGL, basis: &CycleBasis) -> Result<Cycle> {
    combine(entries.terms().iter(), |s| basis.gl.get(s))
}

/// `sum_sigma alpha(sigma) C_sigma`.
pub fn bm_rhs_pgl(entries: &GrothendieckSL, basis: &CycleBasis) -> Result<Cycle> {
    combine(entries.terms().iter(), |s| basis.sl.get(s))
}

pub fn bm_rhs_table_gl(table: &MultiplicityTableGL, basis: &CycleBasis) -> Result<Cycle> {
    check_p(table.p, basis)?;
    bm_rhs_gl(&table.entries, basis)
}

pub fn bm_rhs_table_pgl(table: &MultiplicityTablePGL, basis: &CycleBasis) -> Result<Cycle> {
    check_p(table.p, basis)?;
    bm_rhs_pgl(&table.entries, basis)
}

fn check_p(p: u64, basis: &CycleBasis) -> Result<()> {
    if p != basis.p {
        return Err(BmtError::PrimeMismatch { type_p: p as u32, engine_p: basis.p as u32 });
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TransferReport {
    pub p: u64,
    pub lambda: SLWeight,
    pub tau: TameInertialTypePGL2,
    pub flavor: SemistableFlavor,
    /// The `GL_2` Hodge type used on the left-hand side.
    pub ell: GLWeight,
    pub lhs: Cycle,
    pub rhs: Cycle,
    pub checks: Vec<CheckOutcome>,
    pub passed: bool,
}

/// Compares `sum_mu sum_s a_{l, t (x) mu}(s) C_s` with `sum_sigma alpha(sigma) C_sigma`.
///
/// The lift `l = (c + b, b)` is chosen so that the central character of
/// `sigma(t) (x) sigma(l)` is the one carried by the basis, when the parity
/// of `c` allows it.
pub fn verify_transfer(
    engine: &Engine,
    lambda: &SLWeight,
    tau: &TameInertialTypePGL2,
    flavor: SemistableFlavor,
    basis: &CycleBasis,
) -> TransferReport {
    let p = engine.p();
    let c = lambda.entries()[0];
    let mut report = TransferReport {
        p,
        lambda: lambda.clone(),
        tau: *tau,
        flavor,
        ell: lambda.lift(0),
        lhs: Cycle::zero(),
        rhs: Cycle::zero(),
        checks: Vec::new(),
        passed: false,
    };
    let run = |report: &mut TransferReport| -> Result<()> {
        let inv = basis.check_invariant();
        report.checks.push(CheckOutcome::new("basis_invariant", inv.is_ok(), || inv.clone().unwrap_err()));
        check_p(p, basis)?;
        let t = tau.representative();
        let base = (engine.type_central_character(t)? + rem_i(c - 1, p - 1)) % (p - 1);
        let b = (0..p - 1).find(|b| (base + 2 * b) % (p - 1) == basis.central_exponent).unwrap_or(0);
        let ell = GLWeight::pair(c + b as i64, b as i64);
        report.ell = ell.clone();

        let tables: Vec<GrothendieckGL> = lifts_of_pgl_type(tau)
            .iter()
            .map(|u| engine.a_table(&ell, u, flavor).map(|a| a.entries))
            .collect::<Result<_>>()?;
        let alpha = engine.alpha_table_direct(lambda, tau, flavor)?.entries;
        report.lhs = tables.iter().try_fold(Cycle::zero(), |acc, a| Ok::<_, BmtError>(acc.add(&bm_rhs_gl(a, basis)?)))?;
        report.rhs = bm_rhs_pgl(&alpha, basis)?;
        let equal = report.lhs == report.rhs;
        report.checks.push(CheckOutcome::new("cycle_equality", equal, || {
            format!("lhs {:?} != rhs {:?}", report.lhs.terms(), report.rhs.terms())
        }));

        let support = engine.weights_for_type(&ell, t)?;
        let mut mismatches = Vec::new();
        for s in engine.reps().gl_weights() {
            let lhs: i64 = tables.iter().map(|a| a.coeff(s)).sum();
            let rhs = if support.contains(s) { alpha.coeff(&s.restrict()) } else { 0 };
            if lhs != rhs {
                mismatches.push(format!("({},{}): {lhs} vs {rhs}", s.a(), s.b()));
            }
        }
        report.checks.push(CheckOutcome::new("coefficientwise", mismatches.is_empty(), || mismatches.join("; ")));
        Ok(())
    };
    if let Err(e) = run(&mut report) {
        report.checks.push(CheckOutcome::fail("computation", e.to_string()));
    }
    report.passed = report.checks.iter().all(|c| c.passed) && !report.checks.is_empty();
    report
}

fn rem_i(a: i64, m: u64) -> u64 {
    crate::arith::rem(a, m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn cycle_strategy() -> impl Strategy<Value = Cycle> {
        prop::collection::btree_map("[a-d]", -5i64..=5, 0..4)
            .prop_map(|m| Cycle::from_terms(m.into_iter()))
    }

    proptest! {
        #[test]
        fn free_abelian_group(a in cycle_strategy(), b in cycle_strategy(), c in cycle_strategy()) {
            prop_assert_eq!(a.add(&b), b.add(&a));
            prop_assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
            prop_assert_eq!(a.add(&Cycle::zero()), a.clone());
            prop_assert!(a.sub(&a).is_zero());
            prop_assert!(a.terms().values().all(|&x| x != 0));
            prop_assert_eq!(a.scale(2), a.add(&a));
        }
    }

    #[test]
    fn basics() {
        let x = Cycle::point("x");
        let y = Cycle::point("y");
        let c = x.scale(2).sub(&y);
        assert_eq!(support(&c), ["x", "y"].into_iter().collect());
        assert!(supports_disjoint(&x, &y));
        assert!(!supports_disjoint(&c, &y));
        assert_eq!(serde_json::to_string(&c).unwrap(), r#"{"x":2,"y":-1}"#);
        assert_eq!(cycle_add(&c, &Cycle::zero()), c);
        assert_eq!(cycle_scale(&c, 0), Cycle::zero());
    }

    #[test]
    fn pgl_sum() {
        let single: BTreeMap<String, Cycle> = [("0".to_string(), Cycle::point("x"))].into();
        assert_eq!(z_pgl_from_gl(&single, true).unwrap(), Cycle::point("x"));
        let two: BTreeMap<String, Cycle> =
            [("0".to_string(), Cycle::point("x")), ("2".to_string(), Cycle::point("y"))].into();
        assert_eq!(z_pgl_from_gl(&two, true).unwrap(), Cycle::point("x").add(&Cycle::point("y")));
        let overlap: BTreeMap<String, Cycle> =
            [("0".to_string(), Cycle::point("x")), ("2".to_string(), Cycle::point("x").scale(3))].into();
        assert!(matches!(z_pgl_from_gl(&overlap, true), Err(BmtError::OverlappingSupports { .. })));
        assert_eq!(z_pgl_from_gl(&overlap, false).unwrap(), Cycle::point("x").scale(4));
    }

    #[test]
    fn single_term_transfer() {
        let engine = Engine::new(5).unwrap();
        let trivial = TameInertialTypePGL2::from_gl(&crate::gl2_types::TameInertialTypeGL2::scalar(5, 0).unwrap());
        let lambda = SLWeight::from_any(&[1, 0]).unwrap();
        let gl: BTreeMap<SerreWeightGL, Cycle> = [
            (SerreWeightGL::pair(0, 0), Cycle::point("x")),
            (SerreWeightGL::pair(0, 2), Cycle::point("y")),
            (SerreWeightGL::pair(2, 1), Cycle::point("z")),
        ]
        .into();
        let basis = CycleBasis::from_gl(5, 0, gl).unwrap();
        let r = verify_transfer(&engine, &lambda, &trivial, SemistableFlavor::Crystalline, &basis);
        assert!(r.passed, "{:?}", r.checks);
        let c0 = basis.sl(&SerreWeightSL::single(0)).unwrap();
        assert_eq!(*c0, Cycle::point("x").add(&Cycle::point("y")));
        assert_eq!(r.rhs, *c0);
        assert_eq!(r.lhs, *c0);
    }

    #[test]
    fn random_bases_transfer() {
        let engine = Engine::new(5).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for tau in TameInertialTypePGL2::all(5).unwrap() {
            for c in 1..=6 {
                let lambda = SLWeight::from_any(&[c, 0]).unwrap();
                for flavor in SemistableFlavor::ALL {
                    let basis = CycleBasis::random(5, 4, &mut rng).unwrap();
                    let r = verify_transfer(&engine, &lambda, &tau, flavor, &basis);
                    assert!(r.passed, "{tau} {c} {:?}", r.checks);
                }
            }
        }
        let broken = {
            let mut b = CycleBasis::random(5, 2, &mut rng).unwrap();
            b.set_sl(SerreWeightSL::single(3), Cycle::point("w"));
            b
        };
        let tau = TameInertialTypePGL2::all(5).unwrap()[0];
        let r = verify_transfer(&engine, &SLWeight::from_any(&[1, 0]).unwrap(), &tau, SemistableFlavor::Crystalline, &broken);
        assert!(!r.passed);
    }

    #[test]
    fn generic_cycles() {
        for tau in TameInertialTypePGL2::all(7).unwrap() {
            assert!(check_generic_cycles(&tau, false).passed);
            let lifts = lifts_of_pgl_type(&tau).len();
            assert_eq!(check_generic_cycles(&tau, true).passed, lifts == 1);
        }
    }

    #[test]
    fn bm_rhs_linear() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let basis = CycleBasis::random(5, 4, &mut rng).unwrap();
        assert!(basis.check_invariant().is_ok());
        assert!(bm_rhs_gl(&GrothendieckGL::zero(), &basis).unwrap().is_zero());
        let s = SerreWeightGL::pair(1, 2);
        let one = GrothendieckGL::basis(s.clone());
        assert_eq!(bm_rhs_gl(&one, &basis).unwrap(), *basis.gl(&s).unwrap());
        let two = one.add(&GrothendieckGL::basis(SerreWeightGL::pair(0, 0)));
        let lhs = bm_rhs_gl(&two.scale(3), &basis).unwrap();
        assert_eq!(lhs, bm_rhs_gl(&two, &basis).unwrap().scale(3));
        let missing = GrothendieckGL::basis(SerreWeightGL::pair(7, 0));
        assert!(matches!(bm_rhs_gl(&missing, &basis), Err(BmtError::MissingBasisEntry(_))));
        let mut broken = basis.clone();
        broken.set_sl(SerreWeightSL::single(0), Cycle::point("zz"));
        assert!(broken.check_invariant().is_err());
    }
}
