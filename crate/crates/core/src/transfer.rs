//! Multiplicities `a_{l,t}(s)` and `alpha_{lambda,tau}(sigma)`, the mod `p`
//! SL-type, and the comparison between the `GL_2` and `PGL_2` sides.

use std::collections::HashMap;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, RwLock};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::char_groups::quotient_reps;
use crate::finite_group_reps::{
    default_capacity, ClassFunction, GrothendieckGL, GrothendieckSL, Gl2Irrep, Group, Provenance,
    RepContext,
};
use crate::gl2_types::{
    stabilizer_gi, KTypeRecipe, SemistableFlavor, StandardRecipe, TameInertialTypeGL2,
    TameInertialTypePGL2,
};
use crate::serre_weights::{central_character, fiber, weights_with_central_character, SerreWeightGL};
use crate::weight_lattice::{GLWeight, SLWeight};
use crate::{BmtError, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MultiplicityTableGL {
    pub p: u64,
    pub ell: GLWeight,
    #[serde(rename = "type")]
    pub t: TameInertialTypeGL2,
    pub flavor: SemistableFlavor,
    pub entries: GrothendieckGL,
    pub provenance: Provenance,
}

/// The lift `(l, t)` a table was computed through, if any.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LiftChoice {
    pub ell: GLWeight,
    #[serde(rename = "type")]
    pub t: TameInertialTypeGL2,
    pub cosets: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MultiplicityTablePGL {
    pub p: u64,
    pub lambda: SLWeight,
    #[serde(rename = "type")]
    pub tau: TameInertialTypePGL2,
    pub flavor: SemistableFlavor,
    pub entries: GrothendieckSL,
    pub provenance: Provenance,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lift: Option<LiftChoice>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SLTypeModP {
    pub p: u64,
    #[serde(rename = "type")]
    pub tau: TameInertialTypePGL2,
    pub flavor: SemistableFlavor,
    pub element: GrothendieckSL,
    /// Number of distinct `SL_2` constituents of the restricted K-type.
    pub constituents: u64,
}

/// Deliberate corruption used to check that verification can fail.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Fault {
    /// Add one to an entry of the `GL_2` table on the support.
    CorruptATable,
    /// Give one `SL_2` weight a cycle different from the sum over its fiber.
    BreakCycleBasis,
    /// Feed overlapping characteristic zero cycles to the `PGL_2` sum.
    OverlappingCycles,
}

impl std::str::FromStr for Fault {
    type Err = BmtError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "corrupt-a-table" => Ok(Fault::CorruptATable),
            "break-cycle-basis" => Ok(Fault::BreakCycleBasis),
            "overlapping-cycles" => Ok(Fault::OverlappingCycles),
            _ => Err(BmtError::Parse { what: "fault", detail: s.into() }),
        }
    }
}

type Cache<K, V> = RwLock<HashMap<K, Arc<V>>>;

fn cached<K, V>(cache: &Cache<K, V>, key: K, make: impl FnOnce() -> Result<V>) -> Result<Arc<V>>
where
    K: std::hash::Hash + Eq,
{
    if let Some(v) = cache.read().expect("cache lock").get(&key) {
        return Ok(v.clone());
    }
    let v = Arc::new(make()?);
    cache.write().expect("cache lock").entry(key).or_insert_with(|| v.clone());
    Ok(v)
}

/// Multiplicity computations for one prime `p`, with memoized intermediate
/// characters and tables.
pub struct Engine {
    reps: RepContext,
    recipe: Arc<dyn KTypeRecipe>,
    k_types: Cache<Gl2Irrep, ClassFunction>,
    hodge: Cache<(u64, u64), ClassFunction>,
    a_tables: Cache<(Gl2Irrep, u64, u64), GrothendieckGL>,
    sl_types: Cache<(TameInertialTypePGL2, SemistableFlavor), SLTypeModP>,
    alphas: Cache<(u64, TameInertialTypePGL2, SemistableFlavor), GrothendieckSL>,
    decompositions: AtomicU64,
}

impl std::fmt::Debug for Engine {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Engine").field("reps", &self.reps).field("recipe", &self.recipe).finish()
    }
}

impl Engine {
    pub fn new(p: u64) -> Result<Self> {
        Self::with_capacity(p, default_capacity(p))
    }

    pub fn with_capacity(p: u64, capacity: u64) -> Result<Self> {
        Ok(Self::from_context(RepContext::with_capacity(p, capacity)?))
    }

    /// An engine able to handle `l1 - l2` up to `bound`.
    pub fn for_bound(p: u64, bound: u64) -> Result<Self> {
        Self::with_capacity(p, default_capacity(p).max((p + 1) * bound))
    }

    pub fn from_context(reps: RepContext) -> Self {
        Self {
            reps,
            recipe: Arc::new(StandardRecipe),
            k_types: Default::default(),
            hodge: Default::default(),
            a_tables: Default::default(),
            sl_types: Default::default(),
            alphas: Default::default(),
            decompositions: AtomicU64::new(0),
        }
    }

    pub fn with_recipe(mut self, recipe: Arc<dyn KTypeRecipe>) -> Self {
        self.recipe = recipe;
        self
    }

    pub fn p(&self) -> u64 {
        self.reps.p()
    }

    pub fn reps(&self) -> &RepContext {
        &self.reps
    }

    pub fn provenance(&self) -> Provenance {
        self.reps.provenance()
    }

    /// Number of mod `p` decompositions performed so far; each one checked
    /// that the dimension of the reduction equals the degree.
    pub fn decompositions(&self) -> u64 {
        self.decompositions.load(Ordering::Relaxed)
    }

    fn decompose_gl(&self, chi: &ClassFunction) -> Result<GrothendieckGL> {
        self.decompositions.fetch_add(1, Ordering::Relaxed);
        self.reps.decompose_gl(chi)
    }

    fn decompose_sl(&self, chi: &ClassFunction) -> Result<GrothendieckSL> {
        self.decompositions.fetch_add(1, Ordering::Relaxed);
        self.reps.decompose_sl(chi)
    }

    fn check_type(&self, t: &TameInertialTypeGL2) -> Result<()> {
        if t.p() != self.p() {
            return Err(BmtError::PrimeMismatch { type_p: t.p() as u32, engine_p: self.p() as u32 });
        }
        Ok(())
    }

    fn check_ell(&self, ell: &GLWeight) -> Result<(u64, u64)> {
        if ell.n() != 2 {
            return Err(BmtError::InvalidArgument(format!("rank {} is not 2", ell.n())));
        }
        if !ell.is_regular() {
            return Err(BmtError::NotRegular(ell.entries().to_vec()));
        }
        let [l1, l2] = [ell.entries()[0], ell.entries()[1]];
        Ok(((l1 - l2) as u64, crate::arith::rem(l2, self.p() - 1)))
    }

    fn check_lambda(&self, lambda: &SLWeight) -> Result<u64> {
        if lambda.n() != 2 {
            return Err(BmtError::InvalidArgument(format!("rank {} is not 2", lambda.n())));
        }
        if !lambda.is_regular() {
            return Err(BmtError::NotRegular(lambda.entries().to_vec()));
        }
        Ok(lambda.entries()[0] as u64)
    }

    pub fn k_type_irrep(&self, t: &TameInertialTypeGL2, flavor: SemistableFlavor) -> Result<Gl2Irrep> {
        self.check_type(t)?;
        self.recipe.irrep(t, flavor)?.normalize(self.p())
    }

    pub fn k_type(&self, t: &TameInertialTypeGL2, flavor: SemistableFlavor) -> Result<Arc<ClassFunction>> {
        let irrep = self.k_type_irrep(t, flavor)?;
        cached(&self.k_types, irrep, || self.reps.irrep_character(&irrep))
    }

    pub fn sigma_gl_of_hodge(&self, ell: &GLWeight) -> Result<Arc<ClassFunction>> {
        let key = self.check_ell(ell)?;
        cached(&self.hodge, key, || self.reps.sigma_gl_of_hodge(ell))
    }

    /// Central character of `sigma(t) (x) sigma(l)`, from values on scalars.
    pub fn central_character_of(&self, ell: &GLWeight, t: &TameInertialTypeGL2) -> Result<u64> {
        let k = self.reps.central_exponent(&*self.k_type(t, SemistableFlavor::Crystalline)?)?;
        let h = self.reps.central_exponent(&*self.sigma_gl_of_hodge(ell)?)?;
        Ok((k + h) % (self.p() - 1))
    }

    pub fn weights_for_type(&self, ell: &GLWeight, t: &TameInertialTypeGL2) -> Result<Vec<SerreWeightGL>> {
        Ok(weights_with_central_character(self.p(), self.central_character_of(ell, t)?))
    }

    fn a_entries(&self, ell: &GLWeight, t: &TameInertialTypeGL2, flavor: SemistableFlavor) -> Result<Arc<GrothendieckGL>> {
        let (c, b) = self.check_ell(ell)?;
        let irrep = self.k_type_irrep(t, flavor)?;
        cached(&self.a_tables, (irrep, c, b), || {
            let chi = self.k_type(t, flavor)?.mul(&*self.sigma_gl_of_hodge(ell)?)?;
            self.decompose_gl(&chi)
        })
    }

    /// `sigma(t) (x) sigma(l)` reduced mod `p`, over `S`.
    pub fn a_table(&self, ell: &GLWeight, t: &TameInertialTypeGL2, flavor: SemistableFlavor) -> Result<MultiplicityTableGL> {
        Ok(MultiplicityTableGL {
            p: self.p(),
            ell: ell.clone(),
            t: *t,
            flavor,
            entries: (*self.a_entries(ell, t, flavor)?).clone(),
            provenance: self.provenance(),
        })
    }

    /// `pi` reduced mod `p`, for an `SL_2` constituent `pi` of the restricted K-type
    /// of the canonical lift; every constituent is reduced and they must agree.
    pub fn sl_type_mod_p(&self, tau: &TameInertialTypePGL2, flavor: SemistableFlavor) -> Result<Arc<SLTypeModP>> {
        self.check_type(tau.representative())?;
        cached(&self.sl_types, (*tau, flavor), || {
            let chi = self.k_type(tau.representative(), flavor)?;
            let parts = self.reps.constituents_over_sl2(&chi)?;
            let mut reductions = Vec::new();
            for piece in &parts.pieces {
                reductions.push(self.decompose_sl(piece)?);
            }
            if reductions.windows(2).any(|w| w[0] != w[1]) {
                return Err(BmtError::ArithmeticFault {
                    moduli: self.reps.moduli_values(),
                    detail: format!("SL_2 constituents of {tau} reduce differently: {reductions:?}"),
                });
            }
            Ok(SLTypeModP {
                p: self.p(),
                tau: *tau,
                flavor,
                element: reductions.swap_remove(0),
                constituents: parts.big_m,
            })
        })
    }

    fn alpha_direct_entries(&self, lambda: &SLWeight, tau: &TameInertialTypePGL2, flavor: SemistableFlavor) -> Result<Arc<GrothendieckSL>> {
        let c = self.check_lambda(lambda)?;
        cached(&self.alphas, (c, *tau, flavor), || {
            let sl = self.sl_type_mod_p(tau, flavor)?;
            let chi = self
                .reps
                .brauer_of_sl(&sl.element)
                .mul(&self.reps.symm_brauer(Group::SL2, c - 1, 0))?;
            self.decompose_sl(&chi)
        })
    }

    /// `sigma_SL(tau) (x) Symm^(c-1)` reduced mod `p`, for `lambda = (c, 0)`.
    pub fn alpha_table_direct(&self, lambda: &SLWeight, tau: &TameInertialTypePGL2, flavor: SemistableFlavor) -> Result<MultiplicityTablePGL> {
        Ok(MultiplicityTablePGL {
            p: self.p(),
            lambda: lambda.clone(),
            tau: *tau,
            flavor,
            entries: (*self.alpha_direct_entries(lambda, tau, flavor)?).clone(),
            provenance: self.provenance(),
            lift: None,
        })
    }

    /// Twist-coset representatives `mu` and the tables `a_{l, t (x) mu}`.
    pub fn coset_tables(&self, ell: &GLWeight, t: &TameInertialTypeGL2, flavor: SemistableFlavor) -> Result<Vec<(u64, GrothendieckGL)>> {
        self.check_type(t)?;
        quotient_reps(&stabilizer_gi(t))?
            .iter()
            .map(|mu| Ok((mu.exponent, (*self.a_entries(ell, &t.twist_by(mu.exponent as i64), flavor)?).clone())))
            .collect()
    }

    /// `alpha(sigma) = sum_mu a_{l, t (x) mu}(s)` for `s` in `S(lambda, tau)` over
    /// `sigma`; every admissible `s` must give the same value. When no `s`
    /// lies over `sigma` the value is 0.
    pub fn alpha_from_tables(&self, support: &[SerreWeightGL], tables: &[GrothendieckGL]) -> Result<GrothendieckSL> {
        let p = self.p();
        let mut out = GrothendieckSL::zero();
        for sigma in self.reps.sl_weights() {
            let mut values: Vec<i64> = fiber(sigma, p)
                .iter()
                .filter(|s| support.contains(s))
                .map(|s| tables.iter().map(|a| a.coeff(s)).sum())
                .collect();
            values.dedup();
            match values.as_slice() {
                [] => {}
                [v] => out.add_term(sigma.clone(), *v),
                _ => return Err(BmtError::ChoiceDisagreement { sigma: sigma.a() as u32, values }),
            }
        }
        Ok(out)
    }

    /// The `PGL_2` table computed from the `GL_2` tables of a given lift.
    pub fn alpha_table_via_lift(&self, ell: &GLWeight, t: &TameInertialTypeGL2, flavor: SemistableFlavor) -> Result<MultiplicityTablePGL> {
        let cosets = self.coset_tables(ell, t, flavor)?;
        let support = self.weights_for_type(ell, t)?;
        let tables: Vec<GrothendieckGL> = cosets.iter().map(|(_, a)| a.clone()).collect();
        Ok(MultiplicityTablePGL {
            p: self.p(),
            lambda: ell.project_to_sl(),
            tau: TameInertialTypePGL2::from_gl(t),
            flavor,
            entries: self.alpha_from_tables(&support, &tables)?,
            provenance: self.provenance(),
            lift: Some(LiftChoice { ell: ell.clone(), t: *t, cosets: cosets.iter().map(|c| c.0).collect() }),
        })
    }

    /// Via the canonical lift: `l = lambda` and the orbit representative of `tau`.
    pub fn alpha_table_via_gl(&self, lambda: &SLWeight, tau: &TameInertialTypePGL2, flavor: SemistableFlavor) -> Result<MultiplicityTablePGL> {
        self.check_lambda(lambda)?;
        self.alpha_table_via_lift(&lambda.lift(0), tau.representative(), flavor)
    }

    pub fn verify_integred(&self, ell: &GLWeight, t: &TameInertialTypeGL2, flavor: SemistableFlavor) -> IntegredReport {
        self.verify_integred_with(ell, t, flavor, None)
    }

    pub fn verify_integred_with(
        &self,
        ell: &GLWeight,
        t: &TameInertialTypeGL2,
        flavor: SemistableFlavor,
        fault: Option<Fault>,
    ) -> IntegredReport {
        let mut report = IntegredReport {
            p: self.p(),
            ell: ell.clone(),
            t: *t,
            tau: TameInertialTypePGL2::from_gl(t),
            flavor,
            checks: Vec::new(),
            passed: false,
        };
        if let Err(e) = self.run_integred_checks(ell, t, flavor, fault, &mut report.checks) {
            report.checks.push(CheckOutcome::fail("computation", e.to_string()));
        }
        report.passed = !report.checks.is_empty() && report.checks.iter().all(|c| c.passed);
        report
    }

    fn run_integred_checks(
        &self,
        ell: &GLWeight,
        t: &TameInertialTypeGL2,
        flavor: SemistableFlavor,
        fault: Option<Fault>,
        checks: &mut Vec<CheckOutcome>,
    ) -> Result<()> {
        let p = self.p();
        let (c, _) = self.check_ell(ell)?;
        let lambda = ell.project_to_sl();
        let tau = TameInertialTypePGL2::from_gl(t);
        let support = self.weights_for_type(ell, t)?;
        let mut cosets = self.coset_tables(ell, t, flavor)?;
        if fault == Some(Fault::CorruptATable) {
            if let Some(s) = support.first() {
                cosets[0].1.add_term(s.clone(), 1);
            }
        }
        let tables: Vec<GrothendieckGL> = cosets.iter().map(|(_, a)| a.clone()).collect();

        // (1) support
        let outside: Vec<String> = tables
            .iter()
            .flat_map(|a| a.support())
            .filter(|s| !support.contains(s))
            .map(|s| format!("({},{})", s.a(), s.b()))
            .collect();
        checks.push(CheckOutcome::new("support", outside.is_empty(), || {
            format!("weights outside S(lambda, tau): {}", outside.join(" "))
        }));

        // (2) twist sums are constant on each fiber
        let mut bad_fibers = Vec::new();
        for sigma in self.reps.sl_weights() {
            let mut sums: Vec<i64> = fiber(sigma, p)
                .iter()
                .filter(|s| support.contains(s))
                .map(|s| tables.iter().map(|a| a.coeff(s)).sum())
                .collect();
            sums.dedup();
            if sums.len() > 1 {
                bad_fibers.push(format!("{}: {:?}", sigma.a(), sums));
            }
        }
        checks.push(CheckOutcome::new("fiber_constancy", bad_fibers.is_empty(), || bad_fibers.join("; ")));

        // (3) the two alpha tables
        let direct = self.alpha_direct_entries(&lambda, &tau, flavor)?;
        match self.alpha_from_tables(&support, &tables) {
            Ok(via) => checks.push(CheckOutcome::new("alpha_agreement", via == *direct, || {
                format!(
                    "direct {} vs via GL {}",
                    serde_json::to_string(&*direct).unwrap_or_default(),
                    serde_json::to_string(&via).unwrap_or_default()
                )
            })),
            Err(e) => checks.push(CheckOutcome::fail("alpha_agreement", e.to_string())),
        }

        // (6) integrality of the SL-type
        let sl = self.sl_type_mod_p(&tau, flavor)?;
        checks.push(CheckOutcome::new("sl_type_integrality", sl.element.is_effective() && !sl.element.is_zero(), || {
            format!("sl type {:?}", sl.element)
        }));

        let expected_m = stabilizer_gi(t).order();
        checks.push(CheckOutcome::new("clifford", sl.constituents as usize == expected_m, || {
            format!("M = {} but #G_I(tau) = {expected_m}", sl.constituents)
        }));

        let k_dim = self.k_type(t, flavor)?.degree()?;
        let dims_ok = tables.iter().all(|a| a.dimension() == k_dim * c as i64)
            && direct.dimension() == sl.element.dimension() * c as i64
            && sl.element.dimension() * sl.constituents as i64 == k_dim
            && direct.is_effective();
        checks.push(CheckOutcome::new("dimension", dims_ok, || {
            format!(
                "dim sigma(t) = {k_dim}, c = {c}, table dims {:?}, alpha dim {}",
                tables.iter().map(|a| a.dimension()).collect::<Vec<_>>(),
                direct.dimension()
            )
        }));
        Ok(())
    }

    /// All tame types, `1 <= l1 - l2 <= bound`, `l2` in `[0, p - 2]`, the given flavors.
    pub fn sweep_integred(&self, bound: u64, flavors: &[SemistableFlavor], fault: Option<Fault>) -> Result<Vec<IntegredReport>> {
        let p = self.p();
        let mut items = Vec::new();
        for t in TameInertialTypeGL2::all(p)? {
            for c in 1..=bound as i64 {
                for l2 in 0..p as i64 - 1 {
                    for &flavor in flavors {
                        items.push((t, GLWeight::pair(c + l2, l2), flavor));
                    }
                }
            }
        }
        Ok(items
            .par_iter()
            .map(|(t, ell, flavor)| self.verify_integred_with(ell, t, *flavor, fault))
            .collect())
    }

    /// Central character `c(t)` of `sigma(t)`.
    pub fn type_central_character(&self, t: &TameInertialTypeGL2) -> Result<u64> {
        self.reps.central_exponent(&*self.k_type(t, SemistableFlavor::Crystalline)?)
    }

    pub fn central_character_of_weight(&self, s: &SerreWeightGL) -> u64 {
        central_character(s, self.p())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckOutcome {
    pub name: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "String::is_empty")]
    pub detail: String,
}

impl CheckOutcome {
    pub fn new(name: &str, passed: bool, detail: impl FnOnce() -> String) -> Self {
        Self { name: name.into(), passed, detail: if passed { String::new() } else { detail() } }
    }

    pub fn fail(name: &str, detail: String) -> Self {
        Self { name: name.into(), passed: false, detail }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IntegredReport {
    pub p: u64,
    pub ell: GLWeight,
    #[serde(rename = "type")]
    pub t: TameInertialTypeGL2,
    pub tau: TameInertialTypePGL2,
    pub flavor: SemistableFlavor,
    pub checks: Vec<CheckOutcome>,
    pub passed: bool,
}
