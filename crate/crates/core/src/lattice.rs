//! Positive-definite integral lattices given by Gram matrices.
//!
//! Short-vector enumeration runs a Fincke–Pohst descent over the `U^T D U`
//! factorization of the Gram matrix. The factorization is computed in exact
//! rationals once; the descent then works on integers obtained by clearing
//! every denominator, so interval endpoints are exact integer square roots and
//! no vector is ever lost to rounding.

use num_bigint::BigInt;
use num_integer::Roots;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Deserialize;
use thiserror::Error;

use crate::rational::{denominator_lcm, int, Rational};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LatticeError {
    #[error("unknown lattice {0:?} (built-ins: A1, A2, E7, E8)")]
    UnknownLattice(String),
    #[error("Gram matrix must be square and non-empty")]
    NotSquare,
    #[error("Gram matrix is not symmetric at ({0}, {1})")]
    NotSymmetric(usize, usize),
    #[error("Gram matrix is not positive definite (leading minor {0} is not positive)")]
    NotPositiveDefinite(usize),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("index {index} out of range for rank {rank}")]
    IndexOutOfRange { index: usize, rank: usize },
    #[error("enumeration exceeds 128-bit integer range")]
    Overflow,
    #[error("invalid lattice description: {0}")]
    Invalid(String),
}

/// Vector of exact rational coordinates in the lattice basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalVector(pub Vec<Rational>);

impl RationalVector {
    pub fn zero(n: usize) -> Self {
        Self(vec![Rational::zero(); n])
    }

    pub fn from_integers(v: &[i64]) -> Self {
        Self(v.iter().map(|&x| int(x)).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn coords(&self) -> &[Rational] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    /// `self + k` for an integer vector `k`.
    pub fn offset_by(&self, k: &[i64]) -> Self {
        Self(self.0.iter().zip(k).map(|(a, &b)| a + int(b)).collect())
    }

    pub fn neg(&self) -> Self {
        Self(self.0.iter().map(|a| -a).collect())
    }
}

/// Per-coordinate domain for enumeration.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Domain {
    Any,
    NonNegative,
    Fixed(i64),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GramLattice {
    gram: Vec<Vec<i64>>,
    labels: Vec<String>,
    /// diagonal of `D` in `A = U^T D U`
    diag: Vec<Rational>,
    /// strictly upper part of the unit upper-triangular `U`
    upper: Vec<Vec<Rational>>,
}

#[derive(Deserialize)]
struct LatticeJson {
    rank: usize,
    gram: Vec<Vec<i64>>,
    #[serde(default)]
    labels: Vec<String>,
}

impl GramLattice {
    /// Validates symmetry and positive definiteness (all leading principal minors > 0).
    pub fn new(gram: Vec<Vec<i64>>, labels: Vec<String>) -> Result<Self, LatticeError> {
        let n = gram.len();
        if n == 0 || gram.iter().any(|row| row.len() != n) {
            return Err(LatticeError::NotSquare);
        }
        for i in 0..n {
            for j in 0..i {
                if gram[i][j] != gram[j][i] {
                    return Err(LatticeError::NotSymmetric(i, j));
                }
            }
        }
        let labels = if labels.is_empty() {
            (1..=n).map(|i| format!("b{i}")).collect()
        } else if labels.len() != n {
            return Err(LatticeError::DimensionMismatch { expected: n, found: labels.len() });
        } else {
            labels
        };
        for (k, minor) in leading_minors(&gram).into_iter().enumerate() {
            if !minor.is_positive() {
                return Err(LatticeError::NotPositiveDefinite(k + 1));
            }
        }
        let (diag, upper) = udu_factor(&gram);
        Ok(Self { gram, labels, diag, upper })
    }

    /// Built-in Cartan matrices. E8 uses the chain `a1 - a2 - ... - a7` with `a8`
    /// attached to `a5`; E7 is the sublattice spanned by `a2..a8`.
    pub fn builtin(name: &str) -> Result<Self, LatticeError> {
        match name.to_ascii_uppercase().as_str() {
            "A1" => Self::new(vec![vec![2]], vec!["alpha".into()]),
            "A2" => Self::new(vec![vec![2, -1], vec![-1, 2]], vec!["alpha1".into(), "alpha2".into()]),
            "E8" => {
                let labels = (1..=8).map(|i| format!("alpha{i}")).collect();
                Self::new(e8_cartan(), labels)
            }
            "E7" => {
                let e8 = e8_cartan();
                let gram = e8[1..].iter().map(|row| row[1..].to_vec()).collect();
                let labels = (2..=8).map(|i| format!("alpha{i}")).collect();
                Self::new(gram, labels)
            }
            _ => Err(LatticeError::UnknownLattice(name.to_string())),
        }
    }

    /// Parses `{"rank": n, "gram": [[...]], "labels": [...]}`.
    pub fn from_json(text: &str) -> Result<Self, LatticeError> {
        let j: LatticeJson =
            serde_json::from_str(text).map_err(|e| LatticeError::Invalid(e.to_string()))?;
        if j.gram.len() != j.rank {
            return Err(LatticeError::DimensionMismatch { expected: j.rank, found: j.gram.len() });
        }
        Self::new(j.gram, j.labels)
    }

    pub fn rank(&self) -> usize {
        self.gram.len()
    }

    pub fn gram(&self) -> &[Vec<i64>] {
        &self.gram
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn determinant(&self) -> BigInt {
        leading_minors(&self.gram).pop().expect("rank >= 1")
    }

    fn check_dim(&self, v: &RationalVector) -> Result<(), LatticeError> {
        if v.len() != self.rank() {
            return Err(LatticeError::DimensionMismatch { expected: self.rank(), found: v.len() });
        }
        Ok(())
    }

    /// `<u, v> = u^T A v`.
    pub fn inner(&self, u: &RationalVector, v: &RationalVector) -> Result<Rational, LatticeError> {
        self.check_dim(u)?;
        self.check_dim(v)?;
        let mut acc = Rational::zero();
        for (i, ui) in u.0.iter().enumerate() {
            if ui.is_zero() {
                continue;
            }
            for (j, vj) in v.0.iter().enumerate() {
                if self.gram[i][j] != 0 && !vj.is_zero() {
                    acc += ui * vj * int(self.gram[i][j]);
                }
            }
        }
        Ok(acc)
    }

    /// The norm `v^T A v` (not halved).
    pub fn qform(&self, v: &RationalVector) -> Result<Rational, LatticeError> {
        self.inner(v, v)
    }

    /// `A v` as a rational vector: the pairings `<beta_i, v>`.
    pub fn pairings(&self, v: &RationalVector) -> Result<RationalVector, LatticeError> {
        self.check_dim(v)?;
        Ok(RationalVector(
            self.gram
                .iter()
                .map(|row| row.iter().zip(&v.0).map(|(&a, x)| x * int(a)).sum())
                .collect(),
        ))
    }

    /// Dual basis vector `w_i` with `<w_i, beta_j> = delta_ij` (0-based `i`),
    /// i.e. the `i`-th column of `A^{-1}`.
    pub fn dual_weight(&self, i: usize) -> Result<RationalVector, LatticeError> {
        let n = self.rank();
        if i >= n {
            return Err(LatticeError::IndexOutOfRange { index: i, rank: n });
        }
        let mut rhs = vec![Rational::zero(); n];
        rhs[i] = Rational::one();
        Ok(RationalVector(self.solve(rhs)))
    }

    /// Solves `A x = b` via the stored factorization: `U^T y = b`, `D z = y`, `U x = z`.
    fn solve(&self, b: Vec<Rational>) -> Vec<Rational> {
        let n = self.rank();
        let mut y = b;
        for i in 0..n {
            for j in 0..i {
                let t = &self.upper[j][i] * &y[j];
                y[i] -= t;
            }
        }
        for (yi, d) in y.iter_mut().zip(&self.diag) {
            *yi /= d;
        }
        for i in (0..n).rev() {
            for j in i + 1..n {
                let t = &self.upper[i][j] * &y[j];
                y[i] -= t;
            }
        }
        y
    }

    /// All integer `k` satisfying `domains` with `qform(k + center) <= bound`,
    /// sorted lexicographically.
    pub fn enumerate_below(
        &self,
        center: &RationalVector,
        bound: &Rational,
        domains: &[Domain],
    ) -> Result<Vec<Vec<i64>>, LatticeError> {
        let mut out = Vec::new();
        ShortVectors::new(self, center, domains)?.for_each(bound, |k, _| out.push(k.to_vec()))?;
        out.sort();
        Ok(out)
    }
}

/// Reusable enumerator for a fixed lattice, center and coordinate domains.
///
/// Visited vectors come with their norm scaled by [`ShortVectors::scale`]:
/// `scaled = scale * qform(k + center)`, an exact integer.
pub struct ShortVectors<'a> {
    lattice: &'a GramLattice,
    domains: Vec<Domain>,
    scaled_diag: Vec<i128>,
    scaled_upper: Vec<Vec<i128>>,
    /// `center_den * center`
    center_num: Vec<i128>,
    center_den: i128,
    upper_den: i128,
    /// `upper_den * center_den`
    coord_den: i128,
    scale: BigInt,
}

const LIMIT_BITS: u64 = 100;

fn to_i128(x: &BigInt) -> Result<i128, LatticeError> {
    if x.bits() > LIMIT_BITS {
        return Err(LatticeError::Overflow);
    }
    x.to_i128().ok_or(LatticeError::Overflow)
}

impl<'a> ShortVectors<'a> {
    pub fn new(
        lattice: &'a GramLattice,
        center: &RationalVector,
        domains: &[Domain],
    ) -> Result<Self, LatticeError> {
        let n = lattice.rank();
        lattice.check_dim(center)?;
        if domains.len() != n {
            return Err(LatticeError::DimensionMismatch { expected: n, found: domains.len() });
        }
        let center_den = denominator_lcm(&center.0);
        let upper_den = denominator_lcm(lattice.upper.iter().flatten());
        let diag_den = denominator_lcm(&lattice.diag);
        let coord_den = &upper_den * &center_den;
        let scale = &diag_den * &coord_den * &coord_den;

        let scaled_diag = lattice
            .diag
            .iter()
            .map(|d| to_i128(&(d * Rational::from_integer(diag_den.clone())).to_integer()))
            .collect::<Result<_, _>>()?;
        let scaled_upper = lattice
            .upper
            .iter()
            .map(|row| {
                row.iter()
                    .map(|m| to_i128(&(m * Rational::from_integer(upper_den.clone())).to_integer()))
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<_, _>>()?;
        let center_num = center
            .0
            .iter()
            .map(|c| to_i128(&(c * Rational::from_integer(center_den.clone())).to_integer()))
            .collect::<Result<_, _>>()?;
        Ok(Self {
            lattice,
            domains: domains.to_vec(),
            scaled_diag,
            scaled_upper,
            center_num,
            center_den: to_i128(&center_den)?,
            upper_den: to_i128(&upper_den)?,
            coord_den: to_i128(&coord_den)?,
            scale,
        })
    }

    pub fn scale(&self) -> &BigInt {
        &self.scale
    }

    /// Converts a scaled norm back to `qform(k + center)`.
    pub fn unscale(&self, scaled: i128) -> Rational {
        Rational::new(BigInt::from(scaled), self.scale.clone())
    }

    /// Calls `visit(k, scaled_norm)` for every admissible `k` with
    /// `qform(k + center) <= bound`, in depth-first order (last coordinate outermost).
    pub fn for_each<F>(&self, bound: &Rational, mut visit: F) -> Result<(), LatticeError>
    where
        F: FnMut(&[i64], i128),
    {
        if bound.is_negative() {
            return Ok(());
        }
        let limit = to_i128(&(bound * Rational::from_integer(self.scale.clone())).floor().to_integer())?;
        let n = self.lattice.rank();
        let mut k = vec![0i64; n];
        self.descend(n - 1, 0, limit, &mut k, &mut visit);
        Ok(())
    }

    fn descend<F>(&self, level: usize, energy: i128, limit: i128, k: &mut [i64], visit: &mut F)
    where
        F: FnMut(&[i64], i128),
    {
        // coord_den * (x_level + sum_{j>level} u_{level j} x_j), minus the k_level part
        let mut shift = self.upper_den * self.center_num[level];
        for j in level + 1..k.len() {
            let xj = self.center_den * k[j] as i128 + self.center_num[j];
            shift += self.scaled_upper[level][j] * xj;
        }
        let m = self.coord_den;
        let d = self.scaled_diag[level];
        let rem = limit - energy;
        if rem < 0 {
            return;
        }
        let s = (rem / d).sqrt();
        // |m k + shift| <= s
        let mut lo = ceil_div(-s - shift, m);
        let mut hi = floor_div(s - shift, m);
        match self.domains[level] {
            Domain::Any => {}
            Domain::NonNegative => lo = lo.max(0),
            Domain::Fixed(v) => {
                let v = v as i128;
                if v < lo || v > hi {
                    return;
                }
                lo = v;
                hi = v;
            }
        }
        let mut kv = lo;
        while kv <= hi {
            let t = m * kv + shift;
            let e = energy + d * t * t;
            k[level] = kv as i64;
            if level == 0 {
                visit(k, e);
            } else {
                self.descend(level - 1, e, limit, k, visit);
            }
            kv += 1;
        }
        k[level] = 0;
    }
}

fn floor_div(a: i128, b: i128) -> i128 {
    a.div_euclid(b)
}

fn ceil_div(a: i128, b: i128) -> i128 {
    -((-a).div_euclid(b))
}

/// Leading principal minors via fraction-free (Bareiss) elimination.
fn leading_minors(gram: &[Vec<i64>]) -> Vec<BigInt> {
    let n = gram.len();
    let mut m: Vec<Vec<BigInt>> =
        gram.iter().map(|row| row.iter().map(|&x| BigInt::from(x)).collect()).collect();
    let mut minors = Vec::with_capacity(n);
    let mut prev = BigInt::one();
    for k in 0..n {
        let pivot = m[k][k].clone();
        minors.push(pivot.clone());
        if pivot.is_zero() {
            // later minors are unreliable; caller rejects on the first non-positive one
            minors.extend(std::iter::repeat_n(BigInt::zero(), n - k - 1));
            break;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&m[i][j] * &pivot - &m[i][k] * &m[k][j]) / &prev;
                m[i][j] = v;
            }
        }
        prev = pivot;
    }
    minors
}

/// `A = U^T D U` with `U` unit upper triangular. Requires all leading minors nonzero.
fn udu_factor(gram: &[Vec<i64>]) -> (Vec<Rational>, Vec<Vec<Rational>>) {
    let n = gram.len();
    let mut diag = vec![Rational::zero(); n];
    let mut upper = vec![vec![Rational::zero(); n]; n];
    for i in 0..n {
        let mut d = int(gram[i][i]);
        for k in 0..i {
            d -= &diag[k] * &upper[k][i] * &upper[k][i];
        }
        for j in i + 1..n {
            let mut a = int(gram[i][j]);
            for k in 0..i {
                a -= &diag[k] * &upper[k][i] * &upper[k][j];
            }
            upper[i][j] = a / &d;
        }
        diag[i] = d;
    }
    (diag, upper)
}

fn e8_cartan() -> Vec<Vec<i64>> {
    let mut a = vec![vec![0i64; 8]; 8];
    for (i, row) in a.iter_mut().enumerate() {
        row[i] = 2;
    }
    // chain a1..a7 (indices 0..6) and a8 (index 7) on a5 (index 4)
    let edges = [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (4, 7)];
    for (i, j) in edges {
        a[i][j] = -1;
        a[j][i] = -1;
    }
    a
}
