//! Truncated q-expansions with a rational leading exponent.
//!
//! A [`TruncatedQSeries`] stores `q^a * (c_0 + c_1 q + ... + c_N q^N)` with exact
//! rational `a` and `c_k`, and is known to be correct through `q^(a+N)`.
//! Every series in this crate lives on such a grid `a + Z`; adding two series whose
//! grids differ is reported as [`QSeriesError::OffsetMismatch`] rather than silently
//! interleaved.
//!
//! Canonical form: either `c_0 != 0`, or the series is zero with offset `0`. A zero
//! series keeps its relative order, i.e. the number of coefficients known to vanish.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rational::{format_rational, int, is_integer, parse_rational, to_f64, Rational};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QSeriesError {
    #[error("offsets {left} and {right} do not differ by an integer")]
    OffsetMismatch { left: String, right: String },
    #[error("series has leading coefficient {0}, expected 1")]
    NonUnitLeadingCoefficient(String),
    #[error("operation undefined on the zero series")]
    ZeroSeries,
    #[error("Eisenstein series of weight {0} is not supported (use 2 or 4)")]
    UnsupportedWeight(u32),
    #[error("comparison through relative order {requested} exceeds the valid order {available}")]
    TruncationExceeded { requested: usize, available: usize },
    #[error("malformed series: {0}")]
    Malformed(String),
}

/// Exact truncated series `q^offset * sum_k coeffs[k] q^k`, valid through `q^(offset + order)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "SeriesJson", into = "SeriesJson")]
pub struct TruncatedQSeries {
    offset: Rational,
    coeffs: Vec<Rational>,
}

impl TruncatedQSeries {
    /// Builds and canonicalizes a series. `coeffs` must be non-empty.
    pub fn new(offset: Rational, coeffs: Vec<Rational>) -> Self {
        assert!(!coeffs.is_empty(), "a truncated series needs at least one coefficient");
        let mut s = Self { offset, coeffs };
        s.canonicalize();
        s
    }

    pub fn from_integers(offset: Rational, coeffs: &[i64]) -> Self {
        Self::new(offset, coeffs.iter().map(|&c| int(c)).collect())
    }

    pub(crate) fn from_big_integers(offset: Rational, coeffs: Vec<BigInt>) -> Self {
        Self::new(offset, coeffs.into_iter().map(Rational::from_integer).collect())
    }

    pub fn zero(order: usize) -> Self {
        Self { offset: Rational::zero(), coeffs: vec![Rational::zero(); order + 1] }
    }

    pub fn one(order: usize) -> Self {
        Self::monomial(Rational::zero(), order)
    }

    /// `q^exponent`, valid through `q^(exponent + order)`.
    pub fn monomial(exponent: Rational, order: usize) -> Self {
        let mut coeffs = vec![Rational::zero(); order + 1];
        coeffs[0] = Rational::one();
        Self { offset: exponent, coeffs }
    }

    pub fn offset(&self) -> &Rational {
        &self.offset
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// Coefficient of `q^(offset + k)`; `None` beyond the valid order.
    pub fn coeff(&self, k: usize) -> Option<&Rational> {
        self.coeffs.get(k)
    }

    /// Coefficient of `q^exponent`: zero below the offset or off the grid,
    /// `None` beyond the valid order.
    pub fn coeff_at(&self, exponent: &Rational) -> Option<Rational> {
        if exponent > &self.valid_through() {
            return None;
        }
        let rel = exponent - &self.offset;
        if rel.is_negative() || !is_integer(&rel) {
            return Some(Rational::zero());
        }
        let k: usize = rel.to_integer().try_into().ok()?;
        self.coeffs.get(k).cloned()
    }

    /// Largest exponent through which the expansion is exact.
    pub fn valid_through(&self) -> Rational {
        &self.offset + int(self.order() as i64)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    fn canonicalize(&mut self) {
        match self.coeffs.iter().position(|c| !c.is_zero()) {
            None => self.offset = Rational::zero(),
            Some(0) => {}
            Some(j) => {
                self.offset += int(j as i64);
                self.coeffs.drain(..j);
            }
        }
    }

    /// Keeps only the first `order + 1` coefficients.
    pub fn truncate(&self, order: usize) -> Self {
        let keep = order.min(self.order()) + 1;
        Self { offset: self.offset.clone(), coeffs: self.coeffs[..keep].to_vec() }
    }

    /// Multiplies by `q^exponent`.
    pub fn shift(&self, exponent: &Rational) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        Self { offset: &self.offset + exponent, coeffs: self.coeffs.clone() }
    }

    pub fn scale(&self, factor: &Rational) -> Self {
        Self::new(self.offset.clone(), self.coeffs.iter().map(|c| c * factor).collect())
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Rational::one())
    }

    /// Sum, valid through the smaller of the two valid exponents.
    pub fn checked_add(&self, other: &Self) -> Result<Self, QSeriesError> {
        if self.is_zero() {
            return Ok(other.truncate(self.order()));
        }
        if other.is_zero() {
            return Ok(self.truncate(other.order()));
        }
        let delta = &other.offset - &self.offset;
        if !is_integer(&delta) {
            return Err(QSeriesError::OffsetMismatch {
                left: format_rational(&self.offset),
                right: format_rational(&other.offset),
            });
        }
        let lo = if delta.is_negative() { other.offset.clone() } else { self.offset.clone() };
        let valid = std::cmp::min(self.valid_through(), other.valid_through());
        let order = index_of(&(valid - &lo));
        let mut coeffs = vec![Rational::zero(); order + 1];
        for s in [self, other] {
            let start = index_of(&(&s.offset - &lo));
            for (k, c) in s.coeffs.iter().enumerate() {
                match coeffs.get_mut(start + k) {
                    Some(slot) => *slot += c,
                    None => break,
                }
            }
        }
        Ok(Self::new(lo, coeffs))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, QSeriesError> {
        self.checked_add(&other.neg())
    }

    /// Cauchy product; offsets add and the relative order is the smaller one.
    pub fn mul(&self, other: &Self) -> Self {
        let order = self.order().min(other.order());
        if self.is_zero() || other.is_zero() {
            return Self::zero(order);
        }
        let mut coeffs = vec![Rational::zero(); order + 1];
        for (i, a) in self.coeffs.iter().take(order + 1).enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().take(order + 1 - i).enumerate() {
                if !b.is_zero() {
                    coeffs[i + j] += a * b;
                }
            }
        }
        Self::new(&self.offset + &other.offset, coeffs)
    }

    /// `f^alpha` for `f = q^v * u` with `u(0) = 1`, giving `q^(alpha v) * u^alpha`.
    ///
    /// Uses the power recurrence `n g_n = sum_{j=1..n} ((alpha+1) j - n) u_j g_{n-j}`,
    /// which is the coefficient form of `u g' = alpha u' g`.
    pub fn pow_rational(&self, alpha: &Rational) -> Result<Self, QSeriesError> {
        if self.is_zero() {
            return Err(QSeriesError::ZeroSeries);
        }
        if !self.coeffs[0].is_one() {
            return Err(QSeriesError::NonUnitLeadingCoefficient(format_rational(&self.coeffs[0])));
        }
        let n_max = self.order();
        let u = &self.coeffs;
        let alpha1 = alpha + Rational::one();
        let mut g = Vec::with_capacity(n_max + 1);
        g.push(Rational::one());
        for n in 1..=n_max {
            let nr = int(n as i64);
            let mut acc = Rational::zero();
            for j in 1..=n {
                if u[j].is_zero() {
                    continue;
                }
                let w = &alpha1 * int(j as i64) - &nr;
                acc += w * &u[j] * &g[n - j];
            }
            g.push(acc / nr);
        }
        Ok(Self::new(alpha * &self.offset, g))
    }

    /// `theta = q d/dq`, acting term-wise as `c q^e -> e c q^e`.
    pub fn theta(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| c * (&self.offset + int(k as i64)))
            .collect();
        Self::new(self.offset.clone(), coeffs)
    }

    /// Floating-point evaluation at real `0 < q0 < 1`.
    pub fn eval_numeric(&self, q0: f64) -> NumericValue {
        if self.is_zero() {
            return NumericValue { value: 0.0, tail_bound: 0.0 };
        }
        let a = to_f64(&self.offset);
        let base = q0.powf(a);
        let mut value = 0.0;
        let mut qk = base;
        for c in &self.coeffs {
            value += to_f64(c) * qk;
            qk *= q0;
        }
        // qk now holds q0^(a + N + 1)
        let last = to_f64(self.coeffs.last().expect("non-empty")).abs();
        NumericValue { value, tail_bound: last * qk / (1.0 - q0) }
    }

    /// `"q^(p/q)*(c0 + c1q + ...)"`; the prefix is dropped when the offset is zero.
    pub fn render_text(&self) -> String {
        let mut body = String::new();
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let term_coeff = c.abs();
            let sign_neg = c.is_negative();
            if body.is_empty() {
                if sign_neg {
                    body.push('-');
                }
            } else {
                body.push_str(if sign_neg { " - " } else { " + " });
            }
            let q_part = match k {
                0 => String::new(),
                1 => "q".to_string(),
                _ => format!("q^{k}"),
            };
            if k == 0 {
                body.push_str(&format_rational(&term_coeff));
            } else if term_coeff.is_one() {
                body.push_str(&q_part);
            } else if is_integer(&term_coeff) {
                body.push_str(&format!("{}{}", format_rational(&term_coeff), q_part));
            } else {
                body.push_str(&format!("({}){}", format_rational(&term_coeff), q_part));
            }
        }
        if body.is_empty() {
            return "0".to_string();
        }
        if self.offset.is_zero() {
            body
        } else {
            format!("q^({})*({})", format_rational(&self.offset), body)
        }
    }
}

impl fmt::Display for TruncatedQSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render_text())
    }
}

fn index_of(r: &Rational) -> usize {
    debug_assert!(is_integer(r) && !r.is_negative());
    r.to_integer().try_into().expect("series index fits in usize")
}

/// Value of a series at a real point together with the crude tail estimate
/// `|c_N| q0^(a+N+1) / (1 - q0)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NumericValue {
    pub value: f64,
    pub tail_bound: f64,
}

/// True iff `a - b` vanishes through relative order `n`, counted from the lower of
/// the two offsets. Series on incompatible grids are unequal unless one is zero.
pub fn equal_to_order(a: &TruncatedQSeries, b: &TruncatedQSeries, n: usize) -> Result<bool, QSeriesError> {
    let available = a.order().min(b.order());
    if n > available {
        return Err(QSeriesError::TruncationExceeded { requested: n, available });
    }
    let diff = match a.checked_sub(b) {
        Ok(d) => d,
        Err(QSeriesError::OffsetMismatch { .. }) => return Ok(false),
        Err(e) => return Err(e),
    };
    if diff.is_zero() {
        return Ok(true);
    }
    let lo = if a.is_zero() {
        b.offset.clone()
    } else if b.is_zero() {
        a.offset.clone()
    } else {
        std::cmp::min(a.offset.clone(), b.offset.clone())
    };
    // first nonzero exponent of the difference must lie beyond lo + n
    Ok(diff.offset > lo + int(n as i64))
}

/// `1/(q)_k = 1/((1-q)...(1-q^k))` through `q^n`: partitions into parts `<= k`.
pub fn pochhammer_inv(k: usize, n: usize) -> TruncatedQSeries {
    TruncatedQSeries::from_big_integers(Rational::zero(), pochhammer_inv_ints(k, n))
}

pub(crate) fn pochhammer_inv_ints(k: usize, n: usize) -> Vec<BigInt> {
    let mut c = vec![BigInt::zero(); n + 1];
    c[0] = BigInt::one();
    for part in 1..=k.min(n) {
        for m in part..=n {
            let prev = c[m - part].clone();
            c[m] += prev;
        }
    }
    c
}

/// `1/(q)_inf^s` through `q^n`; for `s = 1` the partition numbers `p(k)`.
pub fn euler_inv_pow(s: usize, n: usize) -> TruncatedQSeries {
    TruncatedQSeries::from_big_integers(Rational::zero(), euler_inv_pow_ints(s, n))
}

pub(crate) fn euler_inv_pow_ints(s: usize, n: usize) -> Vec<BigInt> {
    let mut c = vec![BigInt::zero(); n + 1];
    c[0] = BigInt::one();
    for _ in 0..s {
        for part in 1..=n {
            for m in part..=n {
                let prev = c[m - part].clone();
                c[m] += prev;
            }
        }
    }
    c
}

/// Eisenstein series normalized as `E_k = -B_k/k! + 2/(k-1)! sum n^(k-1) q^n/(1-q^n)`.
pub fn eisenstein(k: u32, n: usize) -> Result<TruncatedQSeries, QSeriesError> {
    let (constant, scale) = match k {
        2 => (Rational::new((-1).into(), 12.into()), int(2)),
        4 => (Rational::new(1.into(), 720.into()), Rational::new(1.into(), 3.into())),
        _ => return Err(QSeriesError::UnsupportedWeight(k)),
    };
    let mut coeffs = Vec::with_capacity(n + 1);
    coeffs.push(constant);
    for m in 1..=n {
        coeffs.push(&scale * Rational::from_integer(divisor_power_sum(m, k - 1)));
    }
    Ok(TruncatedQSeries::new(Rational::zero(), coeffs))
}

fn divisor_power_sum(m: usize, power: u32) -> BigInt {
    (1..=m)
        .filter(|d| m.is_multiple_of(*d))
        .map(|d| BigInt::from(d).pow(power))
        .sum()
}

/// `eta = q^(1/24) prod_{n>=1} (1 - q^n)` through relative order `n`.
pub fn dedekind_eta(n: usize) -> TruncatedQSeries {
    let mut c = vec![BigInt::zero(); n + 1];
    c[0] = BigInt::one();
    for part in 1..=n {
        for m in (part..=n).rev() {
            let prev = c[m - part].clone();
            c[m] -= prev;
        }
    }
    TruncatedQSeries::from_big_integers(Rational::new(1.into(), 24.into()), c)
}

#[derive(Serialize, Deserialize, Clone)]
struct SeriesJson {
    offset: String,
    order: usize,
    coeffs: Vec<String>,
}

impl From<TruncatedQSeries> for SeriesJson {
    fn from(s: TruncatedQSeries) -> Self {
        SeriesJson {
            offset: format_rational(&s.offset),
            order: s.order(),
            coeffs: s.coeffs.iter().map(format_rational).collect(),
        }
    }
}

impl TryFrom<SeriesJson> for TruncatedQSeries {
    type Error = QSeriesError;

    fn try_from(j: SeriesJson) -> Result<Self, Self::Error> {
        if j.coeffs.len() != j.order + 1 {
            return Err(QSeriesError::Malformed(format!(
                "order {} needs {} coefficients, found {}",
                j.order,
                j.order + 1,
                j.coeffs.len()
            )));
        }
        let bad = |s: &str| QSeriesError::Malformed(format!("not a rational: {s:?}"));
        let offset = parse_rational(&j.offset).ok_or_else(|| bad(&j.offset))?;
        let coeffs = j
            .coeffs
            .iter()
            .map(|c| parse_rational(c).ok_or_else(|| bad(c)))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(TruncatedQSeries::new(offset, coeffs))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn ints(s: &TruncatedQSeries) -> Vec<i64> {
        s.coeffs().iter().map(|c| crate::rational::to_i64(c).unwrap()).collect()
    }

    #[test]
    fn add_cancels_to_constant() {
        let a = TruncatedQSeries::from_integers(int(0), &[1, 1, 0]);
        let b = TruncatedQSeries::from_integers(int(0), &[1, -1, 0]);
        let s = a.checked_add(&b).unwrap();
        assert_eq!(ints(&s), vec![2, 0, 0]);
    }

    #[test]
    fn add_rejects_incompatible_grids() {
        let a = TruncatedQSeries::monomial(rat(-1, 60), 3);
        let b = TruncatedQSeries::monomial(rat(11, 60), 3);
        assert!(matches!(a.checked_add(&b), Err(QSeriesError::OffsetMismatch { .. })));
    }

    #[test]
    fn add_keeps_tightest_validity() {
        // q^0 valid to q^5, q^2 valid to q^3 -> sum valid to q^3
        let a = TruncatedQSeries::monomial(int(0), 5);
        let b = TruncatedQSeries::monomial(int(2), 1);
        let s = a.checked_add(&b).unwrap();
        assert_eq!(s.valid_through(), int(3));
        assert_eq!(ints(&s), vec![1, 0, 1, 0]);
    }

    #[test]
    fn zero_is_canonical() {
        let z = TruncatedQSeries::new(rat(5, 7), vec![int(0), int(0)]);
        assert!(z.is_zero());
        assert_eq!(z.offset(), &int(0));
        assert_eq!(z.order(), 1);
        let shifted = TruncatedQSeries::from_integers(rat(1, 3), &[0, 0, 4, 1]);
        assert_eq!(shifted.offset(), &rat(7, 3));
        assert_eq!(ints(&shifted), vec![4, 1]);
    }

    #[test]
    fn product_of_binomials() {
        let a = TruncatedQSeries::from_integers(int(0), &[1, 1, 0, 0]);
        let b = TruncatedQSeries::from_integers(int(0), &[1, -1, 0, 0]);
        assert_eq!(ints(&a.mul(&b)), vec![1, 0, -1, 0]);
    }

    #[test]
    fn product_offsets_add() {
        let a = TruncatedQSeries::monomial(rat(-7, 24), 4);
        let b = TruncatedQSeries::monomial(rat(-1, 40), 4);
        assert_eq!(a.mul(&b).offset(), &rat(-19, 60));
        let p1 = TruncatedQSeries::monomial(rat(-1, 60), 4);
        let p2 = TruncatedQSeries::monomial(rat(11, 60), 4);
        assert_eq!(p1.mul(&p2).offset(), &rat(1, 6));
    }

    #[test]
    fn pow_identity_and_binomial() {
        let one = TruncatedQSeries::one(6);
        assert_eq!(one.pow_rational(&rat(7, 3)).unwrap(), one);
        let f = TruncatedQSeries::from_integers(int(0), &[1, -1, 0, 0, 0]);
        let h = f.pow_rational(&rat(1, 2)).unwrap();
        assert_eq!(
            h.coeffs(),
            &[int(1), rat(-1, 2), rat(-1, 8), rat(-1, 16), rat(-5, 128)]
        );
    }

    #[test]
    fn pow_errors() {
        assert_eq!(TruncatedQSeries::zero(3).pow_rational(&rat(1, 2)), Err(QSeriesError::ZeroSeries));
        let f = TruncatedQSeries::from_integers(int(0), &[2, 1]);
        assert!(matches!(f.pow_rational(&rat(1, 2)), Err(QSeriesError::NonUnitLeadingCoefficient(_))));
    }

    #[test]
    fn eta_fractional_power_offset() {
        let e = dedekind_eta(10).pow_rational(&rat(38, 5)).unwrap();
        assert_eq!(e.offset(), &rat(19, 60));
    }

    #[test]
    fn theta_on_monomials() {
        assert!(TruncatedQSeries::one(4).theta().is_zero());
        let m = TruncatedQSeries::monomial(rat(-1, 60), 0);
        assert_eq!(m.theta().coeffs(), &[rat(-1, 60)]);
        let f = TruncatedQSeries::from_integers(rat(-1, 60), &[1, 1]);
        assert_eq!(f.theta().coeffs(), &[rat(-1, 60), rat(59, 60)]);
    }

    #[test]
    fn pochhammer_small_cases() {
        assert_eq!(ints(&pochhammer_inv(0, 5)), vec![1, 0, 0, 0, 0, 0]);
        assert_eq!(ints(&pochhammer_inv(1, 5)), vec![1; 6]);
        assert_eq!(ints(&pochhammer_inv(2, 5)), vec![1, 1, 2, 2, 3, 3]);
    }

    #[test]
    fn euler_small_cases() {
        assert_eq!(ints(&euler_inv_pow(0, 4)), vec![1, 0, 0, 0, 0]);
        assert_eq!(ints(&euler_inv_pow(1, 5)), vec![1, 1, 2, 3, 5, 7]);
        assert_eq!(euler_inv_pow(7, 3).coeff(1), Some(&int(7)));
    }

    #[test]
    fn eisenstein_expansions() {
        let e2 = eisenstein(2, 4).unwrap();
        assert_eq!(e2.coeffs(), &[rat(-1, 12), int(2), int(6), int(8), int(14)]);
        let e4 = eisenstein(4, 3).unwrap();
        assert_eq!(e4.coeffs(), &[rat(1, 720), rat(1, 3), int(3), rat(28, 3)]);
        assert_eq!(e4.offset(), &int(0));
        assert_eq!(eisenstein(6, 3), Err(QSeriesError::UnsupportedWeight(6)));
    }

    #[test]
    fn eta_expansion() {
        let eta = dedekind_eta(12);
        assert_eq!(eta.offset(), &rat(1, 24));
        assert_eq!(ints(&eta), vec![1, -1, -1, 0, 0, 1, 0, 1, 0, 0, 0, 0, -1]);
        let eta24 = eta.pow_rational(&int(24)).unwrap();
        assert_eq!(eta24.offset(), &int(1));
        assert_eq!(eta24.coeff(1), Some(&int(-24)));
    }

    #[test]
    fn numeric_evaluation() {
        let geo = TruncatedQSeries::from_integers(int(0), &[1; 61]);
        assert!((geo.eval_numeric(0.5).value - 2.0).abs() < 1e-12);
        let eta = dedekind_eta(60);
        let v = eta.eval_numeric((-2.0 * std::f64::consts::PI).exp());
        assert!((v.value - 0.768225).abs() < 1e-6, "{}", v.value);
        assert_eq!(TruncatedQSeries::zero(3).eval_numeric(0.3).value, 0.0);
    }

    #[test]
    fn equality_to_order() {
        let f = TruncatedQSeries::from_integers(int(0), &[1, 1, 0, 0]);
        assert!(equal_to_order(&f, &f, 3).unwrap());
        let g = TruncatedQSeries::from_integers(int(0), &[1, 1, 0, 0, 1]);
        assert!(equal_to_order(&f, &g, 3).unwrap());
        assert!(matches!(
            equal_to_order(&f, &g, 4),
            Err(QSeriesError::TruncationExceeded { .. })
        ));
        let h = TruncatedQSeries::from_integers(int(0), &[1, 2, 0, 0]);
        assert!(!equal_to_order(&f, &h, 3).unwrap());
        let off = TruncatedQSeries::monomial(rat(1, 2), 3);
        assert!(!equal_to_order(&f, &off, 3).unwrap());
    }

    #[test]
    fn text_rendering() {
        let f = TruncatedQSeries::from_integers(rat(-19, 60), &[1, 190, 2831, 22306]);
        assert_eq!(f.render_text(), "q^(-19/60)*(1 + 190q + 2831q^2 + 22306q^3)");
        let g = TruncatedQSeries::from_integers(int(0), &[1, 0, 1, -1]);
        assert_eq!(g.render_text(), "1 + q^2 - q^3");
        let e4 = eisenstein(4, 2).unwrap();
        assert_eq!(e4.render_text(), "1/720 + (1/3)q + 3q^2");
        assert_eq!(TruncatedQSeries::zero(2).render_text(), "0");
    }

    #[test]
    fn json_shape() {
        let f = TruncatedQSeries::from_integers(rat(-1, 60), &[1, 1, 1]);
        let j = serde_json::to_string(&f).unwrap();
        assert_eq!(j, r#"{"offset":"-1/60","order":2,"coeffs":["1","1","1"]}"#);
        let back: TruncatedQSeries = serde_json::from_str(&j).unwrap();
        assert_eq!(back, f);
        let bad = r#"{"offset":"0","order":3,"coeffs":["1"]}"#;
        assert!(serde_json::from_str::<TruncatedQSeries>(bad).is_err());
    }
}
