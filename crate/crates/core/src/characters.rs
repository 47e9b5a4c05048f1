//! Graded dimensions of intermediate vertex subalgebras `W(R, S; lambda)` and the
//! catalogue of named characters built from them.
//!
//! With the basis ordered as `R = (b_1..b_r)`, `S = (b_{r+1}..b_{r+s})` and the
//! remaining coordinates pinned to zero, the `x = 1` graded dimension is
//!
//! ```text
//! sum_{k_1..k_r >= 0, k_{r+1}..k_{r+s} in Z}  q^{(k+l).A.(k+l)/2} / ((q)_{k_1} ... (q)_{k_r} (q)_inf^s)
//! ```
//!
//! where `l` holds the coordinates of `lambda`. Denominators only raise exponents,
//! so the charges needed for an order-`N` expansion are exactly those with
//! `(k+l).A.(k+l) <= 2 (m + N)`, `m` being the minimal exponent.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::lattice::{Domain, GramLattice, LatticeError, RationalVector, ShortVectors};
use crate::qseries::{
    equal_to_order, euler_inv_pow_ints, pochhammer_inv_ints, QSeriesError, TruncatedQSeries,
};
use crate::rational::{int, rat, Rational};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CharacterError {
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Series(#[from] QSeriesError),
    #[error("invalid charge configuration: {0}")]
    InvalidConfig(String),
    #[error("charge coordinate {index} = {value} lies outside its domain")]
    DomainViolation { index: usize, value: i64 },
    #[error("weights do not lie on a single integer-step grid (odd lattice or shift outside the dual lattice)")]
    NonIntegralGrading,
    #[error("unknown character {0:?}; valid names: {1}")]
    UnknownTag(String, String),
}

/// Split of the basis into `R` (first `r`), `S` (next `s`) and pinned coordinates,
/// together with the shift `l` giving `lambda = sum l_i b_i`.
#[derive(Clone, Debug)]
pub struct ChargeConfig {
    lattice: GramLattice,
    r: usize,
    s: usize,
    shift: RationalVector,
}

impl ChargeConfig {
    pub fn new(lattice: GramLattice, r: usize, s: usize, shift: RationalVector) -> Result<Self, CharacterError> {
        let n = lattice.rank();
        if r + s > n {
            return Err(CharacterError::InvalidConfig(format!("r + s = {} exceeds rank {n}", r + s)));
        }
        if shift.len() != n {
            return Err(LatticeError::DimensionMismatch { expected: n, found: shift.len() }.into());
        }
        Ok(Self { lattice, r, s, shift })
    }

    /// Configuration with `lambda = 0`.
    pub fn unshifted(lattice: GramLattice, r: usize, s: usize) -> Result<Self, CharacterError> {
        let n = lattice.rank();
        Self::new(lattice, r, s, RationalVector::zero(n))
    }

    pub fn lattice(&self) -> &GramLattice {
        &self.lattice
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn s(&self) -> usize {
        self.s
    }

    pub fn shift(&self) -> &RationalVector {
        &self.shift
    }

    pub fn with_shift(&self, shift: RationalVector) -> Result<Self, CharacterError> {
        Self::new(self.lattice.clone(), self.r, self.s, shift)
    }

    pub fn domains(&self) -> Vec<Domain> {
        (0..self.lattice.rank())
            .map(|i| {
                if i < self.r {
                    Domain::NonNegative
                } else if i < self.r + self.s {
                    Domain::Any
                } else {
                    Domain::Fixed(0)
                }
            })
            .collect()
    }

    pub fn check_charge(&self, k: &[i64]) -> Result<(), CharacterError> {
        let n = self.lattice.rank();
        if k.len() != n {
            return Err(LatticeError::DimensionMismatch { expected: n, found: k.len() }.into());
        }
        for (index, (&value, dom)) in k.iter().zip(self.domains()).enumerate() {
            let ok = match dom {
                Domain::Any => true,
                Domain::NonNegative => value >= 0,
                Domain::Fixed(v) => value == v,
            };
            if !ok {
                return Err(CharacterError::DomainViolation { index, value });
            }
        }
        Ok(())
    }

    /// `qform(k + l) / 2`, the weight of `e^{tau + lambda}`.
    pub fn ground_weight(&self, k: &[i64]) -> Result<Rational, CharacterError> {
        Ok(self.lattice.qform(&self.shift.offset_by(k))? / int(2))
    }

    /// Smallest exponent `qform(k + l)/2` over the charge set. `k = 0` is always admissible,
    /// so the search radius `qform(l)` suffices.
    pub fn minimal_weight(&self) -> Result<Rational, CharacterError> {
        let sv = ShortVectors::new(&self.lattice, &self.shift, &self.domains())?;
        let bound = self.lattice.qform(&self.shift)?;
        let mut best: Option<i128> = None;
        sv.for_each(&bound, |_, e| best = Some(best.map_or(e, |b| b.min(e))))?;
        let e = best.expect("k = 0 is always within the bound");
        Ok(sv.unscale(e) / int(2))
    }
}

/// Graded dimension at `x = 1`, valid through relative order `n` above its minimal exponent.
pub fn graded_dimension(cfg: &ChargeConfig, n: usize) -> Result<TruncatedQSeries, CharacterError> {
    graded_dimension_where(cfg, n, |_| true)
}

/// Graded dimension restricted to charges `k` accepted by `keep`. The result is valid
/// through the same absolute exponent as the unrestricted sum.
pub fn graded_dimension_where<P>(cfg: &ChargeConfig, n: usize, keep: P) -> Result<TruncatedQSeries, CharacterError>
where
    P: Fn(&[i64]) -> bool,
{
    let m_min = cfg.minimal_weight()?;
    let sv = ShortVectors::new(&cfg.lattice, &cfg.shift, &cfg.domains())?;
    let scale: i128 = sv.scale().try_into().map_err(|_| LatticeError::Overflow)?;
    let e_min: i128 = (&m_min * int(2) * Rational::from_integer(sv.scale().clone()))
        .to_integer()
        .try_into()
        .map_err(|_| LatticeError::Overflow)?;
    let bound = &m_min * int(2) + int(2 * n as i64);

    let r = cfg.r;
    let mut counts: HashMap<Vec<i64>, Vec<u64>> = HashMap::new();
    let mut off_grid = false;
    sv.for_each(&bound, |k, e| {
        if !keep(k) {
            return;
        }
        let diff = e - e_min;
        if diff % (2 * scale) != 0 {
            off_grid = true;
            return;
        }
        let idx = (diff / (2 * scale)) as usize;
        let key = &k[..r];
        match counts.get_mut(key) {
            Some(row) => row[idx] += 1,
            None => {
                let mut row = vec![0u64; n + 1];
                row[idx] = 1;
                counts.insert(key.to_vec(), row);
            }
        }
    })?;
    if off_grid {
        return Err(CharacterError::NonIntegralGrading);
    }

    let mut poch_cache: HashMap<usize, Vec<BigInt>> = HashMap::new();
    let mut total = vec![BigInt::zero(); n + 1];
    for (key, row) in &counts {
        let mut poly: Vec<BigInt> = row.iter().map(|&c| BigInt::from(c)).collect();
        for &ki in key {
            let ki = ki as usize;
            let p = poch_cache.entry(ki).or_insert_with(|| pochhammer_inv_ints(ki, n));
            poly = mul_trunc(&poly, p);
        }
        for (t, c) in total.iter_mut().zip(poly) {
            *t += c;
        }
    }
    if cfg.s > 0 {
        total = mul_trunc(&total, &euler_inv_pow_ints(cfg.s, n));
    }
    Ok(TruncatedQSeries::from_big_integers(m_min, total))
}

/// The single summand for charge `k`: `q^{qform(k+l)/2} prod 1/(q)_{k_i} / (q)_inf^s`.
pub fn charge_component(cfg: &ChargeConfig, k: &[i64], n: usize) -> Result<TruncatedQSeries, CharacterError> {
    cfg.check_charge(k)?;
    let mut poly = vec![BigInt::zero(); n + 1];
    poly[0] = BigInt::one();
    for &ki in &k[..cfg.r] {
        poly = mul_trunc(&poly, &pochhammer_inv_ints(ki as usize, n));
    }
    if cfg.s > 0 {
        poly = mul_trunc(&poly, &euler_inv_pow_ints(cfg.s, n));
    }
    Ok(TruncatedQSeries::from_big_integers(cfg.ground_weight(k)?, poly))
}

/// `q^{-qform(l)/2}` times the graded dimension.
pub fn chi_prime(cfg: &ChargeConfig, n: usize) -> Result<TruncatedQSeries, CharacterError> {
    let g = graded_dimension(cfg, n)?;
    let half_norm = cfg.lattice.qform(&cfg.shift)? / int(2);
    Ok(g.shift(&-half_norm))
}

/// `q^{h - c/24}` times a normalized graded dimension.
pub fn assemble_character(chi_prime_series: &TruncatedQSeries, c: &Rational, h: &Rational) -> TruncatedQSeries {
    chi_prime_series.shift(&(h - c / int(24)))
}

/// True iff `lhs = sum a_i * b_i` through relative order `n`.
pub fn verify_product_identity(
    lhs: &TruncatedQSeries,
    terms: &[(TruncatedQSeries, TruncatedQSeries)],
    n: usize,
) -> Result<bool, CharacterError> {
    let mut rhs: Option<TruncatedQSeries> = None;
    for (a, b) in terms {
        let p = a.mul(b);
        rhs = Some(match rhs {
            None => p,
            Some(acc) => acc.checked_add(&p)?,
        });
    }
    let rhs = rhs.unwrap_or_else(|| TruncatedQSeries::zero(lhs.order()));
    Ok(equal_to_order(lhs, &rhs, n)?)
}

/// Named characters.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Builtin {
    /// `q^{-1/60} sum q^{k^2}/(q)_k`
    RrVac,
    /// `q^{11/60} sum q^{k^2+k}/(q)_k`
    RrMod,
    /// `L(-3/5, 0)`
    VirM35H0,
    /// `L(-3/5, 3/4)`
    VirM35H34,
    /// `L(-3/5, 1/5)`
    VirM35H15,
    /// `L(-3/5, -1/20)`
    VirM35Hm120,
    VE7,
    /// `V_{E7 + w2}`, the non-identity `V_{E7}` module
    VE7W2,
    VE8,
    /// `V_{E7 1/2} = W({a1}, {a2..a8})` in `V_{E8}`
    VE712,
    /// `W({a1}, {a2..a8}; a1)`
    VE712A1,
}

/// A catalogue entry: name, central charge, conformal weight and recipe.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharacterTag {
    pub name: &'static str,
    pub c: Rational,
    pub h: Rational,
    pub recipe: Builtin,
}

impl Builtin {
    pub const ALL: [Builtin; 11] = [
        Builtin::RrVac,
        Builtin::RrMod,
        Builtin::VirM35H0,
        Builtin::VirM35H34,
        Builtin::VirM35H15,
        Builtin::VirM35Hm120,
        Builtin::VE7,
        Builtin::VE7W2,
        Builtin::VE8,
        Builtin::VE712,
        Builtin::VE712A1,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Builtin::RrVac => "rr-vac",
            Builtin::RrMod => "rr-mod",
            Builtin::VirM35H0 => "vir-m35-0",
            Builtin::VirM35H34 => "vir-m35-34",
            Builtin::VirM35H15 => "vir-m35-15",
            Builtin::VirM35Hm120 => "vir-m35-m120",
            Builtin::VE7 => "v-e7",
            Builtin::VE7W2 => "v-e7-w2",
            Builtin::VE8 => "v-e8",
            Builtin::VE712 => "v-e712",
            Builtin::VE712A1 => "v-e712-a1",
        }
    }

    pub fn from_name(name: &str) -> Result<Self, CharacterError> {
        Self::ALL
            .into_iter()
            .find(|b| b.name() == name)
            .ok_or_else(|| CharacterError::UnknownTag(name.to_string(), Self::valid_names()))
    }

    pub fn valid_names() -> String {
        Self::ALL.map(Builtin::name).join(", ")
    }

    pub fn tag(self) -> CharacterTag {
        let (c, h) = match self {
            Builtin::RrVac => (rat(2, 5), int(0)),
            Builtin::RrMod => (rat(2, 5), rat(1, 5)),
            Builtin::VirM35H0 => (rat(-3, 5), int(0)),
            Builtin::VirM35H34 => (rat(-3, 5), rat(3, 4)),
            Builtin::VirM35H15 => (rat(-3, 5), rat(1, 5)),
            Builtin::VirM35Hm120 => (rat(-3, 5), rat(-1, 20)),
            Builtin::VE7 => (int(7), int(0)),
            Builtin::VE7W2 => (int(7), rat(3, 4)),
            Builtin::VE8 => (int(8), int(0)),
            Builtin::VE712 => (rat(38, 5), int(0)),
            Builtin::VE712A1 => (rat(38, 5), rat(4, 5)),
        };
        CharacterTag { name: self.name(), c, h, recipe: self }
    }

    /// The charge configuration behind a lattice-type entry.
    pub fn config(self) -> Option<ChargeConfig> {
        let lat = |name: &str| GramLattice::builtin(name).expect("built-in lattice");
        let cfg = match self {
            Builtin::RrVac => ChargeConfig::unshifted(lat("A1"), 1, 0),
            Builtin::RrMod => ChargeConfig::new(lat("A1"), 1, 0, RationalVector(vec![rat(1, 2)])),
            Builtin::VE7 => ChargeConfig::unshifted(lat("E7"), 0, 7),
            Builtin::VE7W2 => {
                let e7 = lat("E7");
                let w2 = e7.dual_weight(0).expect("rank 7");
                ChargeConfig::new(e7, 0, 7, w2.neg())
            }
            Builtin::VE8 => ChargeConfig::unshifted(lat("E8"), 0, 8),
            Builtin::VE712 => ChargeConfig::unshifted(lat("E8"), 1, 7),
            Builtin::VE712A1 => {
                let mut a1 = vec![0; 8];
                a1[0] = 1;
                ChargeConfig::new(lat("E8"), 1, 7, RationalVector::from_integers(&a1))
            }
            _ => return None,
        };
        Some(cfg.expect("valid built-in configuration"))
    }
}

/// Expansion of a named character through relative order `n` above its leading exponent.
pub fn builtin_character(tag: Builtin, n: usize) -> Result<TruncatedQSeries, CharacterError> {
    let t = tag.tag();
    let normalized = match tag {
        // sum_{k>=0} q^{k^2}/(q)_{2k}
        Builtin::VirM35Hm120 => fermionic_sum(n, 0, |k| k * k, |k| 2 * k),
        // sum_{k>=0} q^{k^2+k}/(q)_{2k+1}
        Builtin::VirM35H15 => fermionic_sum(n, 0, |k| k * k + k, |k| 2 * k + 1),
        // q^{-1} sum_{k>=1} q^{k^2}/(q)_{2k-1}, so that the h - c/24 prefactor lands on 31/40
        Builtin::VirM35H34 => fermionic_sum(n, 1, |k| k * k, |k| 2 * k - 1).shift(&int(-1)),
        // sum_{k>=0} q^{k^2+k}/(q)_{2k}
        Builtin::VirM35H0 => fermionic_sum(n, 0, |k| k * k + k, |k| 2 * k),
        _ => chi_prime(&tag.config().expect("lattice-type entry"), n)?,
    };
    Ok(assemble_character(&normalized, &t.c, &t.h))
}

/// `sum_{k >= k0} q^{e(k)} / (q)_{p(k)}` with `e` increasing, valid through `q^{e(k0) + n}`.
fn fermionic_sum(n: usize, k0: i64, exponent: impl Fn(i64) -> i64, poch: impl Fn(i64) -> i64) -> TruncatedQSeries {
    let e0 = exponent(k0);
    let mut total = vec![BigInt::zero(); n + 1];
    let mut k = k0;
    loop {
        let rel = (exponent(k) - e0) as usize;
        if rel > n {
            break;
        }
        let p = pochhammer_inv_ints(poch(k) as usize, n - rel);
        for (j, c) in p.into_iter().enumerate() {
            total[rel + j] += c;
        }
        k += 1;
    }
    TruncatedQSeries::from_big_integers(int(e0), total)
}

fn mul_trunc(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let n = a.len().min(b.len());
    let mut out = vec![BigInt::zero(); n];
    for (i, x) in a.iter().take(n).enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().take(n - i).enumerate() {
            if !y.is_zero() {
                out[i + j] += x * y;
            }
        }
    }
    out
}
