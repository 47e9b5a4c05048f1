//! Named verification suites over the built-in characters, with one report per check.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::characters::{builtin_character, graded_dimension_where, Builtin, CharacterError, ChargeConfig};
use crate::lattice::{GramLattice, RationalVector};
use crate::modular::{
    first_nonzero, kz_residual, mde_residual, phases_equal, rr_decompose, s_check_numeric, t_phase,
    MdeSpec, ModularError, TransformMatrices,
};
use crate::oracle::{oracle_graded_dimension, OracleError};
use crate::qseries::{dedekind_eta, QSeriesError, TruncatedQSeries};
use crate::rational::{format_rational, int, rat, Rational};

/// Order cap for the lattice-type characters in the S check; at `q = e^{-pi}` their tails
/// are already far below any sensible tolerance there.
pub const LATTICE_S_ORDER: usize = 24;

/// Order caps for the monomial-count comparison, by configuration.
pub const ORACLE_CAPS: [(&str, usize); 4] = [("A1", 12), ("A2", 8), ("E7", 6), ("E8", 4)];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Identities,
    Mde,
    Kz,
    Modular,
    Oracle,
    All,
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "identities" => Suite::Identities,
            "mde" => Suite::Mde,
            "kz" => Suite::Kz,
            "modular" => Suite::Modular,
            "oracle" => Suite::Oracle,
            "all" => Suite::All,
            _ => return Err(format!("unknown suite {s:?}; valid: identities, mde, kz, modular, oracle, all")),
        })
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum VerifyError {
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Character(#[from] CharacterError),
    #[error(transparent)]
    Modular(#[from] ModularError),
    #[error(transparent)]
    Series(#[from] QSeriesError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Failure {
    pub exponent: String,
    pub value: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub check: String,
    pub status: Status,
    pub first_failure: Option<Failure>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl CheckReport {
    fn pass(check: &str) -> Self {
        Self { check: check.to_string(), status: Status::Pass, first_failure: None, detail: None }
    }

    fn fail(check: &str, failure: Option<Failure>, detail: Option<String>) -> Self {
        Self { check: check.to_string(), status: Status::Fail, first_failure: failure, detail }
    }

    fn with_detail(mut self, detail: String) -> Self {
        self.detail = Some(detail);
        self
    }

    /// Passes iff `residual` has no nonzero coefficient.
    fn from_residual(check: &str, residual: &TruncatedQSeries) -> Self {
        match first_nonzero(residual) {
            None => Self::pass(check),
            Some((e, v)) => Self::fail(check, Some(failure(&e, &v)), None),
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("plain data")
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.passed() { "PASS" } else { "FAIL" };
        write!(f, "{tag} {}", self.check)?;
        if let Some(x) = &self.first_failure {
            write!(f, ": coefficient {} at q^({})", x.value, x.exponent)?;
        }
        if let Some(d) = &self.detail {
            write!(f, " [{d}]")?;
        }
        Ok(())
    }
}

fn failure(e: &Rational, v: &Rational) -> Failure {
    Failure { exponent: format_rational(e), value: format_rational(v) }
}

/// Knobs shared by the suites.
#[derive(Clone, Copy, Debug)]
pub struct VerifyOptions {
    pub budget: u64,
    pub tol: f64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self { budget: crate::oracle::DEFAULT_BUDGET, tol: 1e-6 }
    }
}

/// Built-in characters computed once at the largest order requested so far.
#[derive(Default)]
pub struct CharacterCache {
    store: HashMap<Builtin, TruncatedQSeries>,
}

impl CharacterCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&mut self, b: Builtin, n: usize) -> Result<TruncatedQSeries, CharacterError> {
        if let Some(s) = self.store.get(&b) {
            if s.order() >= n {
                return Ok(s.truncate(n));
            }
        }
        let s = builtin_character(b, n)?;
        self.store.insert(b, s.clone());
        Ok(s)
    }
}

/// `a - b` restricted to exponents up to `lo + n`, `lo` the lower leading exponent.
fn difference_report(check: &str, a: &TruncatedQSeries, b: &TruncatedQSeries, n: usize) -> Result<CheckReport, VerifyError> {
    let diff = a.checked_sub(b)?;
    let lo = std::cmp::min(a.offset(), b.offset()).clone();
    let through = lo + int(n as i64);
    if std::cmp::min(a.valid_through(), b.valid_through()) < through {
        return Err(QSeriesError::TruncationExceeded { requested: n, available: a.order().min(b.order()) }.into());
    }
    Ok(match first_nonzero(&diff) {
        Some((e, v)) if e <= through => CheckReport::fail(check, Some(failure(&e, &v)), None),
        _ => CheckReport::pass(check),
    })
}

/// Runs one suite at order `n`.
pub fn run_suite(suite: Suite, n: usize, opts: VerifyOptions, cache: &mut CharacterCache) -> Result<Vec<CheckReport>, VerifyError> {
    Ok(match suite {
        Suite::Identities => identities(n, cache)?,
        Suite::Mde => mde(n, cache)?,
        Suite::Kz => kz(n, cache)?,
        Suite::Modular => modular(n, opts.tol, cache)?,
        Suite::Oracle => oracle(n, opts.budget)?,
        Suite::All => {
            let mut out = Vec::new();
            for s in [Suite::Identities, Suite::Mde, Suite::Kz, Suite::Modular, Suite::Oracle] {
                out.extend(run_suite(s, n, opts, cache)?);
            }
            out
        }
    })
}

/// Sum over charges whose `alpha_1` coefficient (shift included) has the given parity,
/// normalized like the full character.
pub fn e7half_parity_part(module: bool, odd: bool, n: usize) -> Result<TruncatedQSeries, VerifyError> {
    let b = if module { Builtin::VE712A1 } else { Builtin::VE712 };
    let cfg = b.config().expect("lattice-type entry");
    let l1: i64 = if module { 1 } else { 0 };
    let part = graded_dimension_where(&cfg, n, |k| (k[0] + l1).rem_euclid(2) == odd as i64)?;
    let tag = b.tag();
    let half_norm = cfg.lattice().qform(cfg.shift()).map_err(CharacterError::from)? / int(2);
    Ok(part.shift(&(&tag.h - &tag.c / int(24) - half_norm)))
}

/// `prod_{k >= 0} 1/((1 - q^{5k+a})(1 - q^{5k+5-a}))` expanded through `q^n`, times `q^{offset}`.
fn rr_product(a: usize, offset: Rational, n: usize) -> TruncatedQSeries {
    let mut coeffs = vec![0i64; n + 1];
    coeffs[0] = 1;
    for part in (1..=n).filter(|p| p % 5 == a || p % 5 == 5 - a) {
        for j in part..=n {
            coeffs[j] += coeffs[j - part];
        }
    }
    TruncatedQSeries::from_integers(offset, &coeffs)
}

fn identities(n: usize, cache: &mut CharacterCache) -> Result<Vec<CheckReport>, VerifyError> {
    let mut out = Vec::new();

    let rr_vac = cache.get(Builtin::RrVac, n)?;
    let rr_mod = cache.get(Builtin::RrMod, n)?;
    out.push(difference_report("rogers-ramanujan-vacuum-product", &rr_vac, &rr_product(1, rat(-1, 60), n), n)?);
    out.push(difference_report("rogers-ramanujan-module-product", &rr_mod, &rr_product(2, rat(11, 60), n), n)?);

    let z = cache.get(Builtin::VE712, n)?;
    let za = cache.get(Builtin::VE712A1, n)?;
    let e7 = cache.get(Builtin::VE7, n)?;
    let e7w = cache.get(Builtin::VE7W2, n)?;
    let v0 = cache.get(Builtin::VirM35H0, n)?;
    let v34 = cache.get(Builtin::VirM35H34, n)?;
    let v15 = cache.get(Builtin::VirM35H15, n)?;
    let vm = cache.get(Builtin::VirM35Hm120, n)?;

    let vac_even = e7.mul(&vm);
    let vac_odd = e7w.mul(&v15);
    let mod_even = e7.mul(&v34);
    let mod_odd = e7w.mul(&v0);
    out.push(difference_report("e7half-vacuum-branching", &z, &vac_even.checked_add(&vac_odd)?, n)?);
    out.push(difference_report("e7half-module-branching", &za, &mod_even.checked_add(&mod_odd)?, n)?);

    for (module, name, even, odd) in [
        (false, "e7half-vacuum", &vac_even, &vac_odd),
        (true, "e7half-module", &mod_even, &mod_odd),
    ] {
        let pe = e7half_parity_part(module, false, n)?;
        let po = e7half_parity_part(module, true, n)?;
        // the branching products start where the full character starts, so compare on its window
        let lead = if module { za.offset() } else { z.offset() };
        out.push(window_report(&format!("{name}-even-charges"), &pe, even, lead, n)?);
        out.push(window_report(&format!("{name}-odd-charges"), &po, odd, lead, n)?);
    }

    out.push(decomposition_report("e7half-vacuum-rr-polynomial", &z, &[(19, 1), (14, 171), (9, 247), (4, -57)])?);
    out.push(decomposition_report("e7half-module-rr-polynomial", &za, &[(15, 57), (10, 247), (5, -171), (0, 1)])?);
    Ok(out)
}

/// Compares `a` and `b` at exponents `lead ..= lead + n`.
fn window_report(check: &str, a: &TruncatedQSeries, b: &TruncatedQSeries, lead: &Rational, n: usize) -> Result<CheckReport, VerifyError> {
    let through = lead + int(n as i64);
    if a.valid_through() < through || b.valid_through() < through {
        return Err(QSeriesError::TruncationExceeded { requested: n, available: a.order().min(b.order()) }.into());
    }
    let mut e = lead.clone();
    while e <= through {
        let x = a.coeff_at(&e).unwrap_or_default();
        let y = b.coeff_at(&e).unwrap_or_default();
        if x != y {
            return Ok(CheckReport::fail(check, Some(failure(&e, &(x - y))), None));
        }
        e += int(1);
    }
    Ok(CheckReport::pass(check))
}

fn decomposition_report(check: &str, f: &TruncatedQSeries, want: &[(usize, i64)]) -> Result<CheckReport, VerifyError> {
    let degree = 19;
    let got = match rr_decompose(f, degree) {
        Ok(g) => g,
        Err(ModularError::InconsistentSystem { exponent, value }) => {
            return Ok(CheckReport::fail(check, Some(Failure { exponent, value }), None));
        }
        Err(e) => return Ok(CheckReport::fail(check, None, Some(e.to_string()))),
    };
    let want: Vec<(usize, Rational)> = want.iter().map(|&(i, c)| (i, int(c))).collect();
    let shown = got
        .iter()
        .map(|(i, c)| format!("{}*p1^{i}p2^{}", format_rational(c), degree - i))
        .collect::<Vec<_>>()
        .join(" + ");
    let report = if got == want { CheckReport::pass(check) } else { CheckReport::fail(check, None, None) };
    Ok(report.with_detail(shown))
}

fn mde(n: usize, cache: &mut CharacterCache) -> Result<Vec<CheckReport>, VerifyError> {
    let rr = MdeSpec::rogers_ramanujan();
    let e7h = MdeSpec::e7_half();
    let mut out = Vec::new();
    for (name, b, spec) in [
        ("mde-rr-vacuum", Builtin::RrVac, &rr),
        ("mde-rr-module", Builtin::RrMod, &rr),
        ("mde-e7half-vacuum", Builtin::VE712, &e7h),
        ("mde-e7half-module", Builtin::VE712A1, &e7h),
    ] {
        let f = cache.get(b, n)?;
        out.push(CheckReport::from_residual(name, &mde_residual(&f, spec, n)));
    }
    Ok(out)
}

fn kz(n: usize, cache: &mut CharacterCache) -> Result<Vec<CheckReport>, VerifyError> {
    let eta = dedekind_eta(n);
    let mut out = Vec::new();
    for (name, b, k) in [
        ("kz-rr-vacuum", Builtin::RrVac, rat(1, 5)),
        ("kz-rr-module", Builtin::RrMod, rat(1, 5)),
        ("kz-e7half-vacuum", Builtin::VE712, rat(19, 5)),
        ("kz-e7half-module", Builtin::VE712A1, rat(19, 5)),
    ] {
        let g = eta.pow_rational(&(&k * int(2)))?.mul(&cache.get(b, n)?);
        out.push(CheckReport::from_residual(name, &kz_residual(&g, &k, n)));
    }
    Ok(out)
}

/// The three character families with their transformation data.
pub fn families() -> Vec<(&'static str, Vec<Builtin>, TransformMatrices)> {
    vec![
        ("e7-lattice", vec![Builtin::VE7, Builtin::VE7W2], TransformMatrices::e7_lattice()),
        (
            "virasoro-m35",
            vec![Builtin::VirM35H0, Builtin::VirM35H34, Builtin::VirM35H15, Builtin::VirM35Hm120],
            TransformMatrices::virasoro_m35(),
        ),
        ("e7half", vec![Builtin::VE712, Builtin::VE712A1], TransformMatrices::e7_half()),
    ]
}

/// Expansion order used for `b` in an S check requested at order `n`.
pub fn s_check_order(b: Builtin, n: usize) -> usize {
    if b.config().is_some() {
        n.min(LATTICE_S_ORDER)
    } else {
        n
    }
}

fn modular(n: usize, tol: f64, cache: &mut CharacterCache) -> Result<Vec<CheckReport>, VerifyError> {
    let mut out = Vec::new();
    for (name, members, tm) in families() {
        let series = members
            .iter()
            .map(|&b| cache.get(b, s_check_order(b, n)))
            .collect::<Result<Vec<_>, _>>()?;

        let check = format!("t-phases-{name}");
        let mut bad = None;
        for (f, want) in series.iter().zip(&tm.t_phases) {
            let got = t_phase(f)?;
            if got != *want || !phases_equal(&got, want) {
                bad = Some(format!("expected {}, got {}", format_rational(want), format_rational(&got)));
                break;
            }
        }
        out.push(match bad {
            None => CheckReport::pass(&check),
            Some(d) => CheckReport::fail(&check, None, Some(d)),
        });

        let s = tm.s_matrix_f64();
        for t in [1.0, 2.0] {
            let check = format!("s-matrix-{name}-t{t}");
            out.push(match s_check_numeric(&series, &s, t, n, tol) {
                Ok(rep) => {
                    let d = format!("max deviation {:.3e}, tail {:.3e}", rep.max_deviation, rep.max_tail);
                    if rep.passed {
                        CheckReport::pass(&check).with_detail(d)
                    } else {
                        CheckReport::fail(&check, None, Some(d))
                    }
                }
                Err(e @ ModularError::InsufficientPrecision { .. }) => CheckReport::fail(&check, None, Some(e.to_string())),
                Err(e) => return Err(e.into()),
            });
        }
    }
    Ok(out)
}

/// The configurations compared monomial by monomial, with their order caps.
pub fn oracle_configs() -> Vec<(String, ChargeConfig, usize)> {
    let lat = |s: &str| GramLattice::builtin(s).expect("built-in lattice");
    let cap = |s: &str| ORACLE_CAPS.iter().find(|(l, _)| *l == s).expect("listed").1;
    let mut out = Vec::new();
    for (label, shift) in [("0", int(0)), ("omega", rat(1, 2))] {
        let cfg = ChargeConfig::new(lat("A1"), 1, 0, RationalVector(vec![shift])).expect("valid");
        out.push((format!("oracle-A1-lambda-{label}"), cfg, cap("A1")));
    }
    out.push(("oracle-A2-r2".into(), ChargeConfig::unshifted(lat("A2"), 2, 0).expect("valid"), cap("A2")));
    out.push(("oracle-E7-s7".into(), ChargeConfig::unshifted(lat("E7"), 0, 7).expect("valid"), cap("E7")));
    for (label, b) in [("0", Builtin::VE712), ("alpha1", Builtin::VE712A1)] {
        out.push((format!("oracle-E8-r1-s7-lambda-{label}"), b.config().expect("lattice-type"), cap("E8")));
    }
    out
}

fn oracle(n: usize, budget: u64) -> Result<Vec<CheckReport>, VerifyError> {
    let mut out = Vec::new();
    for (name, cfg, cap) in oracle_configs() {
        let order = n.min(cap);
        let counted = oracle_graded_dimension(&cfg, order, budget)?;
        let formula = crate::characters::graded_dimension(&cfg, order)?;
        out.push(difference_report(&name, &counted, &formula, order)?.with_detail(format!("order {order}")));
    }
    Ok(out)
}
