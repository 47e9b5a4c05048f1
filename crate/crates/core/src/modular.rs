//! Modular checks on exact characters: differential-equation residuals, T phases,
//! numeric S-matrix checks, decomposition into Rogers–Ramanujan monomials, and the
//! exceptional-series dimension formulas.

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::characters::{builtin_character, Builtin, CharacterError};
use crate::qseries::{eisenstein, QSeriesError, TruncatedQSeries};
use crate::rational::{format_rational, int, is_integer, rat, rational_sqrt, Rational};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModularError {
    #[error(transparent)]
    Series(#[from] QSeriesError),
    #[error(transparent)]
    Character(#[from] CharacterError),
    #[error("operation undefined on the zero series")]
    ZeroSeries,
    #[error("no monomial p1^i p2^(d-i) lies on the grid of offset {0}")]
    NoAdmissibleMonomials(String),
    #[error("admissible monomials are not independent through the available order")]
    RankDeficient,
    #[error("series is not in the span: residual {value} at q^({exponent})")]
    InconsistentSystem { exponent: String, value: String },
    #[error("tail bound {tail:e} is not below tolerance {tol:e}")]
    InsufficientPrecision { tail: f64, tol: f64 },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("pole at h = {0}")]
    PoleAtInput(String),
    #[error("1 + 36 mu = {0} is not the square of a rational")]
    NonSquareDiscriminant(String),
}

/// `theta^2 f + 2 E2 theta f + gamma E4 f = 0` with `E2 = -1/12 + 2 sum sigma_1(n) q^n`
/// and `E4 = 1/720 + (1/3) sum sigma_3(n) q^n`.
///
/// `mu` is bookkeeping only; the sign relating `gamma` to `mu` is left to the caller.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MdeSpec {
    pub e4_coefficient: Rational,
    pub mu: Rational,
}

impl MdeSpec {
    pub fn new(e4_coefficient: Rational, mu: Rational) -> Self {
        Self { e4_coefficient, mu }
    }

    /// `mu = 11/900`, `gamma = -11/5`.
    pub fn rogers_ramanujan() -> Self {
        Self::new(rat(-11, 5), rat(11, 900))
    }

    /// `mu = 551/900`, `gamma = -551/5`.
    pub fn e7_half() -> Self {
        Self::new(rat(-551, 5), rat(551, 900))
    }
}

/// Residual of the MDE through relative order `min(n, f.order())`; the zero series
/// means `f` solves it to that order.
pub fn mde_residual(f: &TruncatedQSeries, spec: &MdeSpec, n: usize) -> TruncatedQSeries {
    let n = n.min(f.order());
    let f = f.truncate(n);
    let e2 = eisenstein(2, n).expect("weight 2");
    let e4 = eisenstein(4, n).expect("weight 4");
    let tf = f.theta();
    let t2f = tf.theta();
    let mid = e2.mul(&tf).scale(&int(2));
    let last = e4.mul(&f).scale(&spec.e4_coefficient);
    t2f.checked_add(&mid)
        .and_then(|s| s.checked_add(&last))
        .expect("all terms share the grid of f")
}

/// Residual of `g'' - (k+1)/6 E2 g' + k(k+1)/12 E2' g` with `' = q d/dq`.
///
/// Here `E2 = 1 - 24 sum sigma_1(n) q^n`, i.e. `-12` times the series used by
/// [`mde_residual`]; with that normalization `eta^{2k} f` solves this
/// equation exactly when `f` solves the MDE with `gamma/720 = -k(k+2)/144`.
pub fn kz_residual(g: &TruncatedQSeries, k: &Rational, n: usize) -> TruncatedQSeries {
    let n = n.min(g.order());
    let g = g.truncate(n);
    let e2 = eisenstein(2, n).expect("weight 2").scale(&int(-12));
    let de2 = e2.theta();
    let tg = g.theta();
    let t2g = tg.theta();
    let a = -(k + Rational::one()) / int(6);
    let b = k * (k + Rational::one()) / int(12);
    let mid = e2.mul(&tg).scale(&a);
    let last = de2.mul(&g).scale(&b);
    t2g.checked_add(&mid)
        .and_then(|s| s.checked_add(&last))
        .expect("all terms share the grid of g")
}

/// First nonzero coefficient of a residual as `(exponent, value)`.
pub fn first_nonzero(s: &TruncatedQSeries) -> Option<(Rational, Rational)> {
    s.coeffs()
        .iter()
        .enumerate()
        .find(|(_, c)| !c.is_zero())
        .map(|(k, c)| (s.offset() + int(k as i64), c.clone()))
}

/// Exponent `a` with `f(tau + 1) = e^{2 pi i a} f(tau)`, taken as the leading
/// exponent reduced toward zero into `(-1, 1)`.
pub fn t_phase(f: &TruncatedQSeries) -> Result<Rational, ModularError> {
    if f.is_zero() {
        return Err(ModularError::ZeroSeries);
    }
    let a = f.offset();
    Ok(a - a.trunc())
}

/// Whether two T exponents define the same phase, i.e. differ by an integer.
pub fn phases_equal(a: &Rational, b: &Rational) -> bool {
    is_integer(&(a - b))
}

const INV_SQRT2: &str = "0.7071067811865475244008443621048490392848";
// sqrt(2/5) sin(2 pi/5), sqrt(2/5) sin(pi/5)
const VIR_A: &str = "0.6015009550075456736559975588448076497285";
const VIR_B: &str = "0.3717480344601844901320601894633449310125";
// (2/sqrt 5) sin(2 pi/5), (2/sqrt 5) sin(pi/5)
const E712_A: &str = "0.8506508083520399321815404970630110722404";
const E712_B: &str = "0.5257311121191336060256690848478766072855";

/// S matrix (as signed decimal strings) and T exponents of a character family.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransformMatrices {
    pub s_matrix: Vec<Vec<String>>,
    pub t_phases: Vec<Rational>,
}

fn signed(entries: &[&[(i8, &str)]]) -> Vec<Vec<String>> {
    entries
        .iter()
        .map(|row| {
            row.iter()
                .map(|&(sign, v)| if sign < 0 { format!("-{v}") } else { v.to_string() })
                .collect()
        })
        .collect()
}

impl TransformMatrices {
    /// Family `(V_E7, V_E7+w2)`.
    pub fn e7_lattice() -> Self {
        Self {
            s_matrix: signed(&[&[(1, INV_SQRT2), (1, INV_SQRT2)], &[(1, INV_SQRT2), (-1, INV_SQRT2)]]),
            t_phases: vec![rat(-7, 24), rat(11, 24)],
        }
    }

    /// Family `L(-3/5, h)` for `h = 0, 3/4, 1/5, -1/20`, in that order.
    pub fn virasoro_m35() -> Self {
        Self {
            s_matrix: signed(&[
                &[(1, VIR_A), (-1, VIR_A), (-1, VIR_B), (1, VIR_B)],
                &[(-1, VIR_A), (-1, VIR_A), (1, VIR_B), (1, VIR_B)],
                &[(-1, VIR_B), (1, VIR_B), (-1, VIR_A), (1, VIR_A)],
                &[(1, VIR_B), (1, VIR_B), (1, VIR_A), (1, VIR_A)],
            ]),
            t_phases: vec![rat(1, 40), rat(31, 40), rat(9, 40), rat(-1, 40)],
        }
    }

    /// Family `(V_E7 1/2, V_E7 1/2 + a1)`.
    pub fn e7_half() -> Self {
        Self {
            s_matrix: signed(&[&[(1, E712_A), (1, E712_B)], &[(1, E712_B), (-1, E712_A)]]),
            t_phases: vec![rat(-19, 60), rat(29, 60)],
        }
    }

    pub fn s_matrix_f64(&self) -> Vec<Vec<f64>> {
        self.s_matrix
            .iter()
            .map(|row| row.iter().map(|v| v.parse().expect("decimal constant")).collect())
            .collect()
    }
}

/// Outcome of a numeric S check.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SCheckReport {
    pub max_deviation: f64,
    pub max_tail: f64,
    pub passed: bool,
}

/// Compares `Z(-1/tau0)` with `S Z(tau0)` at `tau0 = i t`, using at most `n` terms of
/// each series (fewer if a series is truncated earlier).
pub fn s_check_numeric(
    family: &[TruncatedQSeries],
    s_matrix: &[Vec<f64>],
    t: f64,
    n: usize,
    tol: f64,
) -> Result<SCheckReport, ModularError> {
    let m = family.len();
    if s_matrix.len() != m || s_matrix.iter().any(|row| row.len() != m) {
        return Err(ModularError::DimensionMismatch(format!(
            "family of {m} characters needs a {m}x{m} S matrix"
        )));
    }
    let two_pi = 2.0 * std::f64::consts::PI;
    let q = (-two_pi * t).exp();
    let q_hat = (-two_pi / t).exp();
    let mut at_tau = Vec::with_capacity(m);
    let mut at_inv = Vec::with_capacity(m);
    let mut max_tail = 0.0f64;
    for z in family {
        let z = z.truncate(n);
        let a = z.eval_numeric(q);
        let b = z.eval_numeric(q_hat);
        max_tail = max_tail.max(a.tail_bound).max(b.tail_bound);
        at_tau.push(a.value);
        at_inv.push(b.value);
    }
    if max_tail >= tol {
        return Err(ModularError::InsufficientPrecision { tail: max_tail, tol });
    }
    let max_deviation = (0..m)
        .map(|i| {
            let image: f64 = (0..m).map(|j| s_matrix[i][j] * at_tau[j]).sum();
            (at_inv[i] - image).abs()
        })
        .fold(0.0, f64::max);
    Ok(SCheckReport { max_deviation, max_tail, passed: max_deviation < tol })
}

/// `p1^i p2^j` with `p1`, `p2` the Rogers–Ramanujan characters, through relative order `n`.
pub fn rr_monomial(i: usize, j: usize, n: usize) -> Result<TruncatedQSeries, ModularError> {
    let p1 = builtin_character(Builtin::RrVac, n)?;
    let p2 = builtin_character(Builtin::RrMod, n)?;
    rr_monomial_from(&p1, &p2, i, j)
}

fn rr_monomial_from(
    p1: &TruncatedQSeries,
    p2: &TruncatedQSeries,
    i: usize,
    j: usize,
) -> Result<TruncatedQSeries, ModularError> {
    // p1 = q^{-1/60}(1 + ...), p2 = q^{11/60}(1 + ...): both have unit leading coefficient
    Ok(p1.pow_rational(&int(i as i64))?.mul(&p2.pow_rational(&int(j as i64))?))
}

/// Writes `f` as `sum_i c_i p1^i p2^(degree - i)` over the monomials on `f`'s grid,
/// solving the exact linear system given by `f`'s known coefficients. Returns
/// `(i, c_i)` with `i` descending; the reconstruction is verified through `f`'s order.
pub fn rr_decompose(f: &TruncatedQSeries, degree: usize) -> Result<Vec<(usize, Rational)>, ModularError> {
    if f.is_zero() {
        return Err(ModularError::ZeroSeries);
    }
    let d = degree as i64;
    let mono_offset = |i: usize| rat(11 * d - 12 * i as i64, 60);
    let admissible: Vec<usize> = (0..=degree)
        .rev()
        .filter(|&i| is_integer(&(mono_offset(i) - f.offset())))
        .collect();
    if admissible.is_empty() {
        return Err(ModularError::NoAdmissibleMonomials(format_rational(f.offset())));
    }
    let valid = f.valid_through();
    let mut depth = 0usize;
    for &i in &admissible {
        let rel = &valid - mono_offset(i);
        if rel.is_negative() {
            return Err(ModularError::RankDeficient);
        }
        depth = depth.max(rel.to_integer().try_into().expect("small order"));
    }
    let p1 = builtin_character(Builtin::RrVac, depth)?;
    let p2 = builtin_character(Builtin::RrMod, depth)?;
    let monos = admissible
        .iter()
        .map(|&i| rr_monomial_from(&p1, &p2, i, degree - i))
        .collect::<Result<Vec<_>, _>>()?;

    let lo = admissible
        .iter()
        .map(|&i| mono_offset(i))
        .chain(std::iter::once(f.offset().clone()))
        .min()
        .expect("non-empty");
    let rows: usize = (&valid - &lo).to_integer().try_into().expect("small order");
    let m = monos.len();
    let mut matrix: Vec<Vec<Rational>> = (0..=rows)
        .map(|r| {
            let e = &lo + int(r as i64);
            let mut row: Vec<Rational> =
                monos.iter().map(|p| p.coeff_at(&e).expect("within valid order")).collect();
            row.push(f.coeff_at(&e).expect("within valid order"));
            row
        })
        .collect();

    let coeffs = solve_full_rank(&mut matrix, m).ok_or(ModularError::RankDeficient)?;

    let mut recon: Option<TruncatedQSeries> = None;
    for (c, p) in coeffs.iter().zip(&monos) {
        let term = p.scale(c);
        recon = Some(match recon {
            None => term,
            Some(acc) => acc.checked_add(&term)?,
        });
    }
    let residual = recon.expect("non-empty").checked_sub(f)?;
    if let Some((e, v)) = first_nonzero(&residual) {
        if e <= valid {
            return Err(ModularError::InconsistentSystem {
                exponent: format_rational(&e),
                value: format_rational(&v),
            });
        }
    }
    Ok(admissible.into_iter().zip(coeffs).collect())
}

/// Gauss–Jordan on an augmented `rows x (m + 1)` matrix; `None` unless the
/// coefficient part has full column rank. Consistency is checked by the caller.
fn solve_full_rank(a: &mut [Vec<Rational>], m: usize) -> Option<Vec<Rational>> {
    let mut pivot_row = 0;
    for col in 0..m {
        let p = (pivot_row..a.len()).find(|&r| !a[r][col].is_zero())?;
        a.swap(pivot_row, p);
        let inv = Rational::one() / &a[pivot_row][col];
        for v in a[pivot_row].iter_mut() {
            *v *= &inv;
        }
        let pivot = a[pivot_row].clone();
        for (r, row) in a.iter_mut().enumerate() {
            if r == pivot_row || row[col].is_zero() {
                continue;
            }
            let factor = row[col].clone();
            for (x, y) in row.iter_mut().zip(&pivot) {
                *x -= &factor * y;
            }
        }
        pivot_row += 1;
    }
    Some((0..m).map(|c| a[c][m].clone()).collect())
}

/// `dim g = 2 (5h - 6)(h + 1) / (h + 6)`.
pub fn deligne_dim(hv: &Rational) -> Result<Rational, ModularError> {
    let den = hv + int(6);
    if den.is_zero() {
        return Err(ModularError::PoleAtInput(format_rational(hv)));
    }
    Ok(int(2) * (int(5) * hv - int(6)) * (hv + int(1)) / den)
}

/// `dim g^(2) = 5 h^2 (2h + 3)(5h - 6) / ((h + 6)(h + 12))`.
pub fn deligne_dim2(hv: &Rational) -> Result<Rational, ModularError> {
    let den = (hv + int(6)) * (hv + int(12));
    if den.is_zero() {
        return Err(ModularError::PoleAtInput(format_rational(hv)));
    }
    Ok(int(5) * hv * hv * (int(2) * hv + int(3)) * (int(5) * hv - int(6)) / den)
}

/// Central charge from `x = sqrt(1 + 36 mu) = 1 + c/2`.
pub fn mu_to_c(mu: &Rational) -> Result<Rational, ModularError> {
    let disc = int(1) + int(36) * mu;
    let x = rational_sqrt(&disc).ok_or_else(|| ModularError::NonSquareDiscriminant(format_rational(&disc)))?;
    Ok(int(2) * (x - int(1)))
}

/// One row of the two-character classification table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwoCharacterRow {
    pub mu: Rational,
    pub dim_v1: u32,
    pub c: Rational,
    pub h: Rational,
    pub identification: &'static str,
}

/// The ten rows `(mu, dim V_1, c, h, identification)`.
pub fn two_character_table() -> Vec<TwoCharacterRow> {
    let row = |mu: Rational, dim_v1, c: Rational, h: Rational, identification| TwoCharacterRow {
        mu,
        dim_v1,
        c,
        h,
        identification,
    };
    vec![
        row(rat(11, 900), 1, rat(2, 5), rat(1, 5), ""),
        row(rat(5, 144), 3, int(1), rat(1, 4), "L_{1,0}(A1)"),
        row(rat(1, 12), 8, int(2), rat(1, 3), "L_{1,0}(A2)"),
        row(rat(119, 900), 14, rat(14, 5), rat(2, 5), "L_{1,0}(G2)"),
        row(rat(2, 9), 28, int(4), rat(1, 2), "L_{1,0}(D4)"),
        row(rat(299, 900), 52, rat(26, 5), rat(3, 5), "L_{1,0}(F4)"),
        row(rat(5, 12), 78, int(6), rat(2, 3), "L_{1,0}(E6)"),
        row(rat(77, 144), 133, int(7), rat(3, 4), "L_{1,0}(E7)"),
        row(rat(551, 900), 190, rat(38, 5), rat(4, 5), ""),
        row(rat(2, 3), 248, int(8), rat(5, 6), "L_{1,0}(E8)"),
    ]
}
