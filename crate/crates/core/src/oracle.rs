//! Direct enumeration of the monomial basis of `W(R, S; lambda)`.
//!
//! A basis monomial for charge `k` is a choice of one mode sequence per root in `R`,
//! applied in order to `e^{lambda + delta}` (with `delta` the `S` part of `k`), together
//! with one partition per Heisenberg color in `S`. The weight of `(e^beta)_m v` is
//! `wt(v) + <beta, beta>/2 - m - 1` and a Heisenberg mode `(h)_{-i}` adds `i`. Weights
//! are tracked in doubled units so every contribution is an integer.

use serde::Serialize;
use thiserror::Error;

use crate::characters::{graded_dimension, CharacterError, ChargeConfig};
use crate::lattice::{LatticeError, RationalVector, ShortVectors};
use crate::qseries::{equal_to_order, TruncatedQSeries};
use crate::rational::{format_rational, int, to_i64, Rational};

pub const DEFAULT_BUDGET: u64 = 10_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error(transparent)]
    Character(#[from] CharacterError),
    #[error("enumeration budget of {0} monomials exhausted")]
    ScaleExceeded(u64),
    #[error("pairing of root {root} with the ground charge is {value}, not an integer")]
    NonIntegralPairing { root: usize, value: String },
}

impl From<LatticeError> for OracleError {
    fn from(e: LatticeError) -> Self {
        Self::Character(e.into())
    }
}

/// Modes of one root, stored as `(m_k, ..., m_1)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ModeSequence {
    pub root_index: usize,
    pub modes: Vec<i64>,
}

impl ModeSequence {
    /// `sum_j (<rho, rho>/2 - m_j - 1)` for a root of norm `norm`.
    pub fn weight(&self, norm: i64) -> Rational {
        int(doubled_weight(norm, &self.modes)) / int(2)
    }
}

/// One element of the basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisMonomial {
    pub charge: Vec<i64>,
    pub sequences: Vec<ModeSequence>,
    /// One weakly increasing partition per Heisenberg color.
    pub heisenberg: Vec<Vec<u64>>,
    pub weight: Rational,
}

#[derive(Serialize)]
struct MonomialJson<'a> {
    charge: &'a [i64],
    modes: Vec<&'a [i64]>,
    partitions: &'a [Vec<u64>],
    weight: String,
}

impl BasisMonomial {
    /// `{"charge": [...], "modes": [[...]], "partitions": [[...]], "weight": "p/q"}`.
    pub fn to_json_line(&self) -> String {
        let j = MonomialJson {
            charge: &self.charge,
            modes: self.sequences.iter().map(|s| s.modes.as_slice()).collect(),
            partitions: &self.heisenberg,
            weight: format_rational(&self.weight),
        };
        serde_json::to_string(&j).expect("plain data")
    }
}

fn doubled_weight(norm: i64, modes: &[i64]) -> i64 {
    modes.iter().map(|&m| norm - 2 * m - 2).sum()
}

struct Budget {
    limit: u64,
    used: u64,
}

impl Budget {
    fn new(limit: u64) -> Self {
        Self { limit, used: 0 }
    }

    fn spend(&mut self) -> Result<(), OracleError> {
        self.used += 1;
        if self.used > self.limit {
            Err(OracleError::ScaleExceeded(self.limit))
        } else {
            Ok(())
        }
    }
}

/// Upper bound for `m_1` of root `i`: `-1 - sum_{l<i} k_l <rho_i, rho_l> - <rho_i, lambda + delta>`.
fn first_mode_bound(cfg: &ChargeConfig, k: &[i64], i: usize) -> Result<i64, OracleError> {
    let gram = cfg.lattice().gram();
    let ground = ground_vector(cfg, k);
    let pairing = cfg.lattice().pairings(&ground)?.0[i].clone();
    let p = to_i64(&pairing).ok_or_else(|| OracleError::NonIntegralPairing {
        root: i,
        value: format_rational(&pairing),
    })?;
    let earlier: i64 = (0..i).map(|l| k[l] * gram[i][l]).sum();
    Ok(-1 - earlier - p)
}

/// `lambda + delta` in basis coordinates.
fn ground_vector(cfg: &ChargeConfig, k: &[i64]) -> RationalVector {
    let mut delta = k.to_vec();
    for d in delta.iter_mut().take(cfg.r()) {
        *d = 0;
    }
    cfg.shift().offset_by(&delta)
}

/// Smallest doubled weight of a length-`len` sequence: modes `b, b - a, b - 2a, ...`.
fn min_doubled(norm: i64, first: i64, len: usize) -> i64 {
    (0..len as i64).map(|j| norm - 2 * (first - j * norm) - 2).sum()
}

/// Depth-first walk over sequences `m_1 <= first`, `m_{j+1} <= m_j - norm` of length
/// `len` with doubled weight at most `cap`; `visit` receives `(m_1, ..., m_len)`.
fn walk_sequences<F>(norm: i64, first: i64, len: usize, cap: i64, budget: &mut Budget, visit: &mut F) -> Result<(), OracleError>
where
    F: FnMut(&[i64], i64) -> Result<(), OracleError>,
{
    #[allow(clippy::too_many_arguments)]
    fn rec<F>(
        norm: i64,
        upper: i64,
        left: usize,
        acc: i64,
        cap: i64,
        buf: &mut Vec<i64>,
        budget: &mut Budget,
        visit: &mut F,
    ) -> Result<(), OracleError>
    where
        F: FnMut(&[i64], i64) -> Result<(), OracleError>,
    {
        if left == 0 {
            budget.spend()?;
            return visit(buf, acc);
        }
        let mut m = upper;
        loop {
            let w = norm - 2 * m - 2;
            if acc + w + min_doubled(norm, m - norm, left - 1) > cap {
                break;
            }
            buf.push(m);
            rec(norm, m - norm, left - 1, acc + w, cap, buf, budget, visit)?;
            buf.pop();
            m -= 1;
        }
        Ok(())
    }
    let mut buf = Vec::with_capacity(len);
    rec(norm, first, len, 0, cap, &mut buf, budget, visit)
}

fn to_mode_sequence(i: usize, ascending_index: &[i64]) -> ModeSequence {
    let mut modes = ascending_index.to_vec();
    modes.reverse();
    ModeSequence { root_index: i, modes }
}

/// Sequences in `M_i(R; lambda; k)` of weight contribution at most `weight_bound`.
pub fn enumerate_mi(
    cfg: &ChargeConfig,
    k: &[i64],
    i: usize,
    weight_bound: &Rational,
) -> Result<Vec<ModeSequence>, OracleError> {
    cfg.check_charge(k)?;
    if i >= cfg.r() {
        return Err(LatticeError::IndexOutOfRange { index: i, rank: cfg.r() }.into());
    }
    let norm = cfg.lattice().gram()[i][i];
    let first = first_mode_bound(cfg, k, i)?;
    let cap = (weight_bound * int(2)).floor().to_integer();
    let cap: i64 = cap.try_into().unwrap_or(i64::MAX / 4);
    let mut out = Vec::new();
    let mut budget = Budget::new(u64::MAX);
    walk_sequences(norm, first, k[i] as usize, cap, &mut budget, &mut |m, _| {
        out.push(to_mode_sequence(i, m));
        Ok(())
    })?;
    out.sort();
    Ok(out)
}

/// Every partition of each size `0..=n`, parts weakly increasing, grouped by size.
fn partitions_up_to(n: usize, budget: &mut Budget) -> Result<Vec<Vec<Vec<u64>>>, OracleError> {
    fn rec(
        smallest: u64,
        left: u64,
        buf: &mut Vec<u64>,
        size: u64,
        out: &mut Vec<Vec<Vec<u64>>>,
        budget: &mut Budget,
    ) -> Result<(), OracleError> {
        budget.spend()?;
        out[size as usize].push(buf.clone());
        for part in smallest..=left {
            buf.push(part);
            rec(part, left - part, buf, size + part, out, budget)?;
            buf.pop();
        }
        Ok(())
    }
    let mut out = vec![Vec::new(); n + 1];
    rec(1, n as u64, &mut Vec::new(), 0, &mut out, budget)?;
    Ok(out)
}

fn convolve(a: &[u64], b: &[u64], len: usize) -> Vec<u64> {
    let mut out = vec![0u64; len];
    for (i, &x) in a.iter().enumerate().filter(|(_, x)| **x != 0) {
        for (j, &y) in b.iter().enumerate().take(len.saturating_sub(i)) {
            out[i + j] += x * y;
        }
    }
    out
}

/// Everything needed to walk the monomials of one charge.
struct ChargePlan {
    /// `2 (wt(e^{lambda+delta}) - base)`, with `base` the weight the caller counts from.
    ground2: i64,
    firsts: Vec<i64>,
    mins: Vec<i64>,
}

fn plan(cfg: &ChargeConfig, k: &[i64], base: &Rational) -> Result<ChargePlan, OracleError> {
    let ground = cfg.lattice().qform(&ground_vector(cfg, k))? / int(2);
    let ground2 = to_i64(&((ground - base) * int(2))).ok_or(CharacterError::NonIntegralGrading)?;
    let gram = cfg.lattice().gram();
    let mut firsts = Vec::with_capacity(cfg.r());
    let mut mins = Vec::with_capacity(cfg.r());
    for i in 0..cfg.r() {
        let f = first_mode_bound(cfg, k, i)?;
        mins.push(min_doubled(gram[i][i], f, k[i] as usize));
        firsts.push(f);
    }
    Ok(ChargePlan { ground2, firsts, mins })
}

/// Counts of the monomials of charge `k` by doubled weight above `base`, for doubled
/// weights in `0..=cap2`.
fn charge_counts(
    cfg: &ChargeConfig,
    k: &[i64],
    base: &Rational,
    cap2: i64,
    heis: &[u64],
    budget: &mut Budget,
) -> Result<Vec<u64>, OracleError> {
    let len = (cap2 + 1) as usize;
    let p = plan(cfg, k, base)?;
    let mut acc = vec![0u64; len];
    let floor: i64 = p.ground2 + p.mins.iter().sum::<i64>();
    if floor > cap2 {
        return Ok(acc);
    }
    if floor < 0 {
        // a monomial below the weight counted from
        return Err(CharacterError::NonIntegralGrading.into());
    }
    acc[floor as usize] = 1;
    let gram = cfg.lattice().gram();
    for i in 0..cfg.r() {
        let cap = cap2 - floor + p.mins[i];
        let mut row = vec![0u64; len];
        walk_sequences(gram[i][i], p.firsts[i], k[i] as usize, cap, budget, &mut |_, w| {
            row[(w - p.mins[i]) as usize] += 1;
            Ok(())
        })?;
        acc = convolve(&acc, &row, len);
    }
    Ok(convolve(&acc, heis, len))
}

/// Doubled-weight counts of `s`-colored partitions through doubled size `len - 1`.
fn heisenberg_counts(s: usize, n: usize, budget: &mut Budget) -> Result<Vec<u64>, OracleError> {
    let len = 2 * n + 1;
    let mut out = vec![0u64; len];
    out[0] = 1;
    if s == 0 {
        return Ok(out);
    }
    let single = partitions_up_to(n, budget)?;
    let mut one = vec![0u64; len];
    for (size, parts) in single.iter().enumerate() {
        one[2 * size] = parts.len() as u64;
    }
    for _ in 0..s {
        out = convolve(&out, &one, len);
    }
    Ok(out)
}

/// Graded dimension through relative order `n`, obtained by counting basis monomials.
///
/// The charges visited are those with `qform(k + l)/2 <= m_min + n`; every monomial of
/// charge `k` has weight at least `qform(k + l)/2`, which the counting itself confirms
/// through the per-charge floor.
pub fn oracle_graded_dimension(cfg: &ChargeConfig, n: usize, budget: u64) -> Result<TruncatedQSeries, OracleError> {
    let mut budget = Budget::new(budget);
    let m_min = cfg.minimal_weight()?;
    let bound = &m_min * int(2) + int(2 * n as i64);
    let sv = ShortVectors::new(cfg.lattice(), cfg.shift(), &cfg.domains())?;
    let mut charges = Vec::new();
    let mut over = false;
    sv.for_each(&bound, |k, _| {
        if budget.spend().is_err() {
            over = true;
        } else {
            charges.push(k.to_vec());
        }
    })?;
    if over {
        return Err(OracleError::ScaleExceeded(budget.limit));
    }
    let heis = heisenberg_counts(cfg.s(), n, &mut budget)?;
    let cap2 = 2 * n as i64;
    let mut total = vec![0u64; (cap2 + 1) as usize];
    for k in &charges {
        let row = charge_counts(cfg, k, &m_min, cap2, &heis, &mut budget)?;
        for (t, c) in total.iter_mut().zip(row) {
            *t += c;
        }
    }
    let mut coeffs = Vec::with_capacity(n + 1);
    for (d, c) in total.iter().enumerate() {
        if d % 2 == 1 {
            if *c != 0 {
                return Err(CharacterError::NonIntegralGrading.into());
            }
        } else {
            coeffs.push(int(*c as i64));
        }
    }
    Ok(TruncatedQSeries::new(m_min, coeffs))
}

/// Monomials of the single charge `k` with weight at most `qform(k + l)/2 + n`.
pub fn enumerate_charge_monomials(
    cfg: &ChargeConfig,
    k: &[i64],
    n: usize,
    budget: u64,
) -> Result<Vec<BasisMonomial>, OracleError> {
    cfg.check_charge(k)?;
    let mut budget = Budget::new(budget);
    let base = cfg.ground_weight(k)?;
    let p = plan(cfg, k, &base)?;
    let cap2 = 2 * n as i64;
    let gram = cfg.lattice().gram();

    // per-root sequence lists with their doubled weights
    let mut per_root: Vec<Vec<(ModeSequence, i64)>> = Vec::with_capacity(cfg.r());
    for i in 0..cfg.r() {
        let others: i64 = p.mins.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, m)| m).sum();
        let cap = cap2 - p.ground2 - others;
        let mut list = Vec::new();
        walk_sequences(gram[i][i], p.firsts[i], k[i] as usize, cap, &mut budget, &mut |m, w| {
            list.push((to_mode_sequence(i, m), w));
            Ok(())
        })?;
        per_root.push(list);
    }
    let single = if cfg.s() > 0 { partitions_up_to(n, &mut budget)? } else { vec![vec![Vec::new()]] };
    let flat: Vec<(Vec<u64>, i64)> = single
        .iter()
        .enumerate()
        .flat_map(|(size, ps)| ps.iter().map(move |p| (p.clone(), 2 * size as i64)))
        .collect();

    let mut out = Vec::new();
    let mut seqs = Vec::with_capacity(cfg.r());
    let mut parts = Vec::with_capacity(cfg.s());
    let ctx = Emit { k, base: &base, cap2, s: cfg.s(), per_root: &per_root, flat: &flat };
    ctx.roots(0, p.ground2, &mut seqs, &mut parts, &mut out, &mut budget)?;
    Ok(out)
}

struct Emit<'a> {
    k: &'a [i64],
    base: &'a Rational,
    cap2: i64,
    s: usize,
    per_root: &'a [Vec<(ModeSequence, i64)>],
    flat: &'a [(Vec<u64>, i64)],
}

impl Emit<'_> {
    fn roots(
        &self,
        i: usize,
        acc: i64,
        seqs: &mut Vec<ModeSequence>,
        parts: &mut Vec<Vec<u64>>,
        out: &mut Vec<BasisMonomial>,
        budget: &mut Budget,
    ) -> Result<(), OracleError> {
        if i == self.per_root.len() {
            return self.colors(0, acc, seqs, parts, out, budget);
        }
        for (seq, w) in &self.per_root[i] {
            if acc + w > self.cap2 {
                continue;
            }
            seqs.push(seq.clone());
            self.roots(i + 1, acc + w, seqs, parts, out, budget)?;
            seqs.pop();
        }
        Ok(())
    }

    fn colors(
        &self,
        c: usize,
        acc: i64,
        seqs: &mut Vec<ModeSequence>,
        parts: &mut Vec<Vec<u64>>,
        out: &mut Vec<BasisMonomial>,
        budget: &mut Budget,
    ) -> Result<(), OracleError> {
        if c == self.s {
            budget.spend()?;
            out.push(BasisMonomial {
                charge: self.k.to_vec(),
                sequences: seqs.clone(),
                heisenberg: parts.clone(),
                weight: self.base + int(acc) / int(2),
            });
            return Ok(());
        }
        for (p, w) in self.flat {
            if acc + w > self.cap2 {
                continue;
            }
            parts.push(p.clone());
            self.colors(c + 1, acc + w, seqs, parts, out, budget)?;
            parts.pop();
        }
        Ok(())
    }
}

/// Whether the monomial count and the closed-form sum agree exactly through order `n`.
pub fn oracle_matches_formula(cfg: &ChargeConfig, n: usize, budget: u64) -> Result<bool, OracleError> {
    let oracle = oracle_graded_dimension(cfg, n, budget)?;
    let formula = graded_dimension(cfg, n)?;
    if oracle.is_zero() || formula.is_zero() {
        return Ok(oracle.is_zero() && formula.is_zero());
    }
    Ok(equal_to_order(&oracle, &formula, n).map_err(CharacterError::from)?)
}

/// Number of monomials of charge `k` at each weight `qform(k + l)/2 + j`, `j = 0..=n`.
pub fn charge_monomial_counts(cfg: &ChargeConfig, k: &[i64], n: usize, budget: u64) -> Result<Vec<u64>, OracleError> {
    cfg.check_charge(k)?;
    let mut budget = Budget::new(budget);
    let base = cfg.ground_weight(k)?;
    let heis = heisenberg_counts(cfg.s(), n, &mut budget)?;
    let row = charge_counts(cfg, k, &base, 2 * n as i64, &heis, &mut budget)?;
    let mut out = Vec::with_capacity(n + 1);
    for (d, c) in row.into_iter().enumerate() {
        if d % 2 == 0 {
            out.push(c);
        } else if c != 0 {
            return Err(CharacterError::NonIntegralGrading.into());
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::characters::charge_component;
    use crate::lattice::GramLattice;
    use crate::rational::rat;

    fn a1(shift: Rational) -> ChargeConfig {
        ChargeConfig::new(GramLattice::builtin("A1").unwrap(), 1, 0, RationalVector(vec![shift])).unwrap()
    }

    #[test]
    fn a1_single_mode() {
        let seqs = enumerate_mi(&a1(int(0)), &[1], 0, &int(3)).unwrap();
        let modes: Vec<_> = seqs.iter().map(|s| s.modes.clone()).collect();
        assert_eq!(modes, vec![vec![-3], vec![-2], vec![-1]]);
        assert_eq!(seqs[2].weight(2), int(1));
    }

    #[test]
    fn a1_two_modes_minimal() {
        let seqs = enumerate_mi(&a1(int(0)), &[2], 0, &int(4)).unwrap();
        assert_eq!(seqs.len(), 1);
        assert_eq!(seqs[0].modes, vec![-3, -1]);
        assert_eq!(seqs[0].weight(2), int(4));
    }

    #[test]
    fn a1_shifted_bound() {
        let seqs = enumerate_mi(&a1(rat(1, 2)), &[1], 0, &int(2)).unwrap();
        assert_eq!(seqs.len(), 1);
        assert_eq!(seqs[0].modes, vec![-2]);
        assert_eq!(seqs[0].weight(2), int(2));
    }

    #[test]
    fn a1_matches_formula() {
        for shift in [int(0), rat(1, 2)] {
            assert!(oracle_matches_formula(&a1(shift), 12, DEFAULT_BUDGET).unwrap());
        }
    }

    #[test]
    fn a2_matches_formula() {
        let cfg = ChargeConfig::unshifted(GramLattice::builtin("A2").unwrap(), 2, 0).unwrap();
        assert!(oracle_matches_formula(&cfg, 8, DEFAULT_BUDGET).unwrap());
    }

    #[test]
    fn empty_config_is_one() {
        let cfg = ChargeConfig::unshifted(GramLattice::builtin("E8").unwrap(), 0, 0).unwrap();
        let g = oracle_graded_dimension(&cfg, 5, DEFAULT_BUDGET).unwrap();
        assert_eq!(g, TruncatedQSeries::one(5));
    }

    #[test]
    fn per_charge_counts_match_component() {
        let cfg = ChargeConfig::unshifted(GramLattice::builtin("A2").unwrap(), 1, 1).unwrap();
        for k in [[0, 0], [1, 0], [2, -1], [3, 2], [0, -2]] {
            let counts = charge_monomial_counts(&cfg, &k, 6, DEFAULT_BUDGET).unwrap();
            let comp = charge_component(&cfg, &k, 6).unwrap();
            let want: Vec<u64> = comp.coeffs().iter().map(|c| to_i64(c).unwrap() as u64).collect();
            assert_eq!(counts, want, "{k:?}");
        }
    }

    #[test]
    fn explicit_monomials_agree_with_counts() {
        let cfg = ChargeConfig::unshifted(GramLattice::builtin("A2").unwrap(), 1, 1).unwrap();
        let k = [2, -1];
        let mons = enumerate_charge_monomials(&cfg, &k, 4, DEFAULT_BUDGET).unwrap();
        let base = cfg.ground_weight(&k).unwrap();
        let mut by_weight = vec![0u64; 5];
        for m in &mons {
            let j = to_i64(&(&m.weight - &base)).unwrap() as usize;
            by_weight[j] += 1;
        }
        assert_eq!(by_weight, charge_monomial_counts(&cfg, &k, 4, DEFAULT_BUDGET).unwrap());
        let line = mons[0].to_json_line();
        assert!(line.starts_with("{\"charge\":[2,-1],\"modes\":[["), "{line}");
    }

    #[test]
    fn budget_is_enforced() {
        let cfg = ChargeConfig::unshifted(GramLattice::builtin("E8").unwrap(), 1, 7).unwrap();
        assert_eq!(oracle_graded_dimension(&cfg, 4, 100), Err(OracleError::ScaleExceeded(100)));
    }
}
