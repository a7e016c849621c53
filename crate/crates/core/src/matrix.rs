//! Matrices over the truncated series algebra: determinants, the operator
//! norm bound, the entrywise dilation homotopy, and the factorization of a
//! constant SL_n matrix into transvections.

use std::fmt;

use itertools::Itertools;
use num::complex::Complex64;
use num::traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::{rat_to_f64, Rat};
use crate::series::TruncatedSeries;

const MAX_DET_DIM: usize = 6;

/// Square matrix of truncated series sharing one ambient (dim, cap).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SeriesMatrix {
    n: usize,
    entries: Vec<TruncatedSeries>,
}

impl SeriesMatrix {
    pub fn new(n: usize, entries: Vec<TruncatedSeries>) -> Result<Self> {
        if entries.len() != n * n {
            return Err(Error::LengthMismatch(entries.len(), n * n));
        }
        let dim = entries[0].dim();
        let cap = entries[0].cap();
        for e in &entries {
            if e.dim() != dim {
                return Err(Error::DimensionMismatch(e.dim(), dim));
            }
            if e.cap() != cap {
                return Err(Error::precondition("entries must share one cap"));
            }
        }
        Ok(SeriesMatrix { n, entries })
    }

    pub fn identity(n: usize, dim: usize, cap: u32) -> Self {
        let entries = (0..n * n)
            .map(|k| {
                if k / n == k % n {
                    TruncatedSeries::one(dim, cap)
                } else {
                    TruncatedSeries::zero(dim, cap)
                }
            })
            .collect();
        SeriesMatrix { n, entries }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn series_dim(&self) -> usize {
        self.entries[0].dim()
    }

    pub fn cap(&self) -> u32 {
        self.entries[0].cap()
    }

    pub fn entry(&self, i: usize, j: usize) -> &TruncatedSeries {
        &self.entries[i * self.n + j]
    }

    pub fn entries(&self) -> &[TruncatedSeries] {
        &self.entries
    }

    /// Exact determinant by signed Leibniz expansion; n is capped to keep
    /// the permutation sum small.
    pub fn det(&self) -> Result<TruncatedSeries> {
        if self.n > MAX_DET_DIM {
            return Err(Error::precondition(format!(
                "determinant limited to n <= {}, got {}",
                MAX_DET_DIM, self.n
            )));
        }
        let dim = self.series_dim();
        let cap = self.cap();
        let mut acc = TruncatedSeries::zero(dim, cap);
        for perm in (0..self.n).permutations(self.n) {
            let mut prod = TruncatedSeries::one(dim, cap);
            for (i, &j) in perm.iter().enumerate() {
                prod = prod.mul(self.entry(i, j))?;
            }
            if permutation_sign(&perm) < 0 {
                prod = prod.neg();
            }
            acc = acc.add(&prod)?;
        }
        Ok(acc)
    }

    /// True when det equals the constant-1 series exactly (stored terms, no tail).
    pub fn is_special(&self) -> Result<bool> {
        let d = self.det()?;
        Ok(d.is_polynomial() && d == TruncatedSeries::one(self.series_dim(), self.cap()))
    }

    /// sqrt(sum of squared Wiener-norm uppers): an upper bound for the induced
    /// operator norm, by Cauchy-Schwarz across rows.
    pub fn op_norm_bound(&self) -> f64 {
        let total: f64 = self
            .entries
            .iter()
            .map(|e| {
                let u = rat_to_f64(&e.wiener_norm().upper);
                u * u
            })
            .sum();
        total.sqrt()
    }

    /// M_t: every entry dilated by 1-t. Determinants are preserved because
    /// dilation is an algebra homomorphism (substitution z -> (1-t)z).
    pub fn dilation_path(&self, t: &Rat) -> Result<SeriesMatrix> {
        if t < &Rat::zero() || t > &Rat::one() {
            return Err(Error::precondition(format!("path parameter {} outside [0,1]", t)));
        }
        if !self.is_special()? {
            return Err(Error::precondition("matrix determinant is not exactly 1"));
        }
        let r = Rat::one() - t;
        let entries = self
            .entries
            .iter()
            .map(|e| e.dilate(&r))
            .collect::<Result<Vec<_>>>()?;
        Ok(SeriesMatrix { n: self.n, entries })
    }

    /// Constant endpoint of the dilation path: the matrix of values at 0.
    pub fn constant_term(&self) -> Vec<Vec<Complex64>> {
        (0..self.n)
            .map(|i| {
                (0..self.n)
                    .map(|j| {
                        self.entry(i, j)
                            .coeff(&crate::series::Monomial::zero(self.series_dim()))
                            .to_c64()
                    })
                    .collect()
            })
            .collect()
    }
}

fn permutation_sign(perm: &[usize]) -> i32 {
    let mut sign = 1;
    for i in 0..perm.len() {
        for j in i + 1..perm.len() {
            if perm[i] > perm[j] {
                sign = -sign;
            }
        }
    }
    sign
}

/// Elementary matrix E_ij(alpha) = I + alpha e_ij; rows/cols 0-based, i != j.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Transvection {
    pub row: usize,
    pub col: usize,
    pub alpha: Complex64,
}

impl Transvection {
    pub fn new(row: usize, col: usize, alpha: Complex64) -> Self {
        assert_ne!(row, col);
        Transvection { row, col, alpha }
    }

    pub fn inverse(&self) -> Transvection {
        Transvection { row: self.row, col: self.col, alpha: -self.alpha }
    }

    /// Apply as a left multiplication: add alpha * (row col) to (row row).
    fn apply_left(&self, m: &mut [Vec<Complex64>]) {
        let n = m.len();
        for k in 0..n {
            let add = self.alpha * m[self.col][k];
            m[self.row][k] += add;
        }
    }
}

impl fmt::Display for Transvection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "E[{},{}]({}{}{}i)",
            self.row + 1,
            self.col + 1,
            self.alpha.re,
            if self.alpha.im < 0.0 { "" } else { "+" },
            self.alpha.im
        )
    }
}

/// Left-to-right product of transvections as a dense matrix.
pub fn transvection_product(n: usize, factors: &[Transvection]) -> Vec<Vec<Complex64>> {
    // product T1 * T2 * ... * Tm = T1 applied last when building from I on the right
    let mut m: Vec<Vec<Complex64>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| Complex64::new(if i == j { 1.0 } else { 0.0 }, 0.0))
                .collect()
        })
        .collect();
    for t in factors.iter().rev() {
        t.apply_left(&mut m);
    }
    m
}

fn det_dense(c: &[Vec<Complex64>]) -> Complex64 {
    let n = c.len();
    let mut m: Vec<Vec<Complex64>> = c.to_vec();
    let mut det = Complex64::new(1.0, 0.0);
    for k in 0..n {
        // partial pivot with row swap tracking
        let mut pivot = k;
        for i in k + 1..n {
            if m[i][k].norm() > m[pivot][k].norm() {
                pivot = i;
            }
        }
        if m[pivot][k].norm() == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        if pivot != k {
            m.swap(pivot, k);
            det = -det;
        }
        det *= m[k][k];
        for i in k + 1..n {
            let factor = m[i][k] / m[k][k];
            for j in k..n {
                let sub = factor * m[k][j];
                m[i][j] -= sub;
            }
        }
    }
    det
}

/// Factor a constant matrix with determinant 1 into transvections whose
/// left-to-right product reconstructs it.
///
/// Gaussian elimination restricted to "add alpha * row j to row i" moves:
/// each column pivot is first made 1 (borrowing another row when needed),
/// then the column is cleared; the final diagonal entry is forced to 1 by
/// the determinant. Inverting the recorded operations yields the factors.
pub fn factor_constant_sl(c: &[Vec<Complex64>], tol: f64) -> Result<Vec<Transvection>> {
    let n = c.len();
    for row in c {
        if row.len() != n {
            return Err(Error::LengthMismatch(row.len(), n));
        }
    }
    let det = det_dense(c);
    if (det - Complex64::new(1.0, 0.0)).norm() >= tol {
        return Err(Error::precondition(format!(
            "determinant {} is not 1 within tolerance {}",
            det, tol
        )));
    }
    let mut m: Vec<Vec<Complex64>> = c.to_vec();
    let mut ops: Vec<Transvection> = Vec::new();
    let eps = 1e-300;
    let apply = |m: &mut Vec<Vec<Complex64>>, ops: &mut Vec<Transvection>, t: Transvection| {
        t.apply_left(m);
        ops.push(t);
    };
    for k in 0..n - 1 {
        // set the pivot to exactly 1, borrowing a helper row when needed
        if (m[k][k] - Complex64::new(1.0, 0.0)).norm() > 0.0 {
            let helper = match (k + 1..n).find(|&i| m[i][k].norm() > eps) {
                Some(i) => i,
                None => {
                    if m[k][k].norm() <= eps {
                        return Err(Error::NumericalBreakdown(format!(
                            "column {} has no usable pivot (all entries ~0)",
                            k + 1
                        )));
                    }
                    // copy the pivot row down so a helper row exists
                    apply(&mut m, &mut ops, Transvection::new(k + 1, k, Complex64::new(1.0, 0.0)));
                    k + 1
                }
            };
            let pivot = m[k][k];
            let alpha = (Complex64::new(1.0, 0.0) - pivot) / m[helper][k];
            if !alpha.is_finite() {
                return Err(Error::NumericalBreakdown(format!(
                    "pivot fix in column {} produced a non-finite multiplier (pivot {})",
                    k + 1,
                    pivot
                )));
            }
            apply(&mut m, &mut ops, Transvection::new(k, helper, alpha));
        }
        // clear the column below and above the pivot
        for i in 0..n {
            if i != k && m[i][k].norm() > 0.0 {
                let alpha = -m[i][k];
                apply(&mut m, &mut ops, Transvection::new(i, k, alpha));
            }
        }
    }
    // the bottom-right entry is now det-forced to 1; clear the last column
    let last = n - 1;
    for i in 0..last {
        if m[i][last].norm() > 0.0 {
            let alpha = -m[i][last] / m[last][last];
            apply(&mut m, &mut ops, Transvection::new(i, last, alpha));
        }
    }
    // ops reduce C to ~I, so C = inv(op1) inv(op2) ... in the same order
    Ok(ops.iter().map(Transvection::inverse).collect())
}

/// Samples of the concatenated null-homotopy: the dilation path for the first
/// half, then the constant endpoint carried to the identity by linearly
/// scaling its transvection parameters to zero.
pub fn full_homotopy_sample(m: &SeriesMatrix, num_steps: usize) -> Result<Vec<SeriesMatrix>> {
    if num_steps < 2 {
        return Err(Error::precondition("need at least 2 samples"));
    }
    if !m.is_special()? {
        return Err(Error::precondition("matrix determinant is not exactly 1"));
    }
    let dim = m.series_dim();
    let cap = m.cap();
    let endpoint = m.dilation_path(&Rat::one())?.constant_term();
    let factors = factor_constant_sl(&endpoint, 1e-9)?;
    let mut samples = Vec::with_capacity(num_steps);
    for step in 0..num_steps {
        let t = Rat::new((step as i64).into(), ((num_steps - 1) as i64).into());
        let two_t = &t + &t;
        if two_t <= Rat::one() {
            samples.push(m.dilation_path(&two_t)?);
        } else {
            let s = rat_to_f64(&(two_t - Rat::one()));
            let scaled: Vec<Transvection> = factors
                .iter()
                .map(|f| Transvection::new(f.row, f.col, f.alpha * (1.0 - s)))
                .collect();
            let constant = transvection_product(m.n(), &scaled);
            samples.push(constant_matrix(&constant, dim, cap)?);
        }
    }
    Ok(samples)
}

/// Embed a dense complex matrix as a matrix of constant series.
pub fn constant_matrix(c: &[Vec<Complex64>], dim: usize, cap: u32) -> Result<SeriesMatrix> {
    let n = c.len();
    let mut entries = Vec::with_capacity(n * n);
    for row in c {
        if row.len() != n {
            return Err(Error::LengthMismatch(row.len(), n));
        }
        for &v in row {
            entries.push(TruncatedSeries::constant(
                dim,
                cap,
                crate::scalar::CRat::new(f64_to_rat(v.re), f64_to_rat(v.im)),
            ));
        }
    }
    SeriesMatrix::new(n, entries)
}

/// Exact rational value of a float (every finite f64 is rational).
pub fn f64_to_rat(v: f64) -> Rat {
    Rat::from_float(v).unwrap_or_else(Rat::zero)
}

/// Max entry-wise distance between a dense matrix and a target.
pub fn max_entry_distance(a: &[Vec<Complex64>], b: &[Vec<Complex64>]) -> f64 {
    a.iter()
        .zip(b)
        .flat_map(|(ra, rb)| ra.iter().zip(rb).map(|(x, y)| (x - y).norm()))
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, CRat};
    use crate::series::Monomial;

    fn mono(e: &[u32]) -> Monomial {
        Monomial(e.to_vec())
    }

    fn c(n: i64) -> CRat {
        CRat::from_int(n)
    }

    fn cx(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn det_identity() {
        let m = SeriesMatrix::identity(3, 2, 2);
        assert_eq!(m.det().unwrap(), TruncatedSeries::one(2, 2));
    }

    #[test]
    fn det_triangular() {
        let f = TruncatedSeries::new(2, 3, vec![(mono(&[1, 1]), c(5))]).unwrap();
        let m = SeriesMatrix::new(
            2,
            vec![
                TruncatedSeries::one(2, 3),
                f,
                TruncatedSeries::zero(2, 3),
                TruncatedSeries::one(2, 3),
            ],
        )
        .unwrap();
        assert!(m.is_special().unwrap());
    }

    #[test]
    fn det_unimodular_example() {
        // [[1+zw, z],[w, 1]] has determinant 1
        let a = TruncatedSeries::new(2, 3, vec![(mono(&[0, 0]), c(1)), (mono(&[1, 1]), c(1))])
            .unwrap();
        let m = SeriesMatrix::new(
            2,
            vec![
                a,
                TruncatedSeries::variable(2, 3, 0),
                TruncatedSeries::variable(2, 3, 1),
                TruncatedSeries::one(2, 3),
            ],
        )
        .unwrap();
        assert!(m.is_special().unwrap());
    }

    #[test]
    fn det_rejects_large_n() {
        let m = SeriesMatrix::identity(7, 1, 1);
        assert!(m.det().is_err());
    }

    #[test]
    fn op_norm_bound_examples() {
        let m = SeriesMatrix::identity(2, 2, 1);
        assert!((m.op_norm_bound() - 2.0f64.sqrt()).abs() < 1e-12);

        let zpw =
            TruncatedSeries::new(2, 1, vec![(mono(&[1, 0]), c(1)), (mono(&[0, 1]), c(1))]).unwrap();
        let m = SeriesMatrix::new(
            2,
            vec![
                zpw,
                TruncatedSeries::zero(2, 1),
                TruncatedSeries::zero(2, 1),
                TruncatedSeries::zero(2, 1),
            ],
        )
        .unwrap();
        assert!((m.op_norm_bound() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn dilation_path_endpoints() {
        let a = TruncatedSeries::new(2, 3, vec![(mono(&[0, 0]), c(1)), (mono(&[1, 1]), c(1))])
            .unwrap();
        let m = SeriesMatrix::new(
            2,
            vec![
                a,
                TruncatedSeries::variable(2, 3, 0),
                TruncatedSeries::variable(2, 3, 1),
                TruncatedSeries::one(2, 3),
            ],
        )
        .unwrap();
        assert_eq!(m.dilation_path(&Rat::zero()).unwrap(), m);
        let end = m.dilation_path(&Rat::one()).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                assert!(end.entry(i, j).degree().unwrap_or(0) == 0);
            }
        }
        // det preserved along the way
        for t in [rat(1, 4), rat(1, 2), rat(3, 4)] {
            assert!(m.dilation_path(&t).unwrap().is_special().unwrap());
        }
    }

    #[test]
    fn factor_identity_is_empty() {
        let i2 = vec![vec![cx(1.0, 0.0), cx(0.0, 0.0)], vec![cx(0.0, 0.0), cx(1.0, 0.0)]];
        assert!(factor_constant_sl(&i2, 1e-10).unwrap().is_empty());
    }

    #[test]
    fn factor_single_transvection() {
        let e12 = vec![vec![cx(1.0, 0.0), cx(3.0, 0.0)], vec![cx(0.0, 0.0), cx(1.0, 0.0)]];
        let f = factor_constant_sl(&e12, 1e-10).unwrap();
        assert_eq!(f.len(), 1);
        assert_eq!(f[0].row, 0);
        assert_eq!(f[0].col, 1);
        assert!((f[0].alpha - cx(3.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn factor_diagonal_whitehead() {
        let d = vec![vec![cx(2.0, 0.0), cx(0.0, 0.0)], vec![cx(0.0, 0.0), cx(0.5, 0.0)]];
        let f = factor_constant_sl(&d, 1e-10).unwrap();
        assert_eq!(f.len(), 4);
        let prod = transvection_product(2, &f);
        assert!(max_entry_distance(&prod, &d) < 1e-12);
    }

    #[test]
    fn factor_rejects_non_unimodular() {
        let bad = vec![vec![cx(2.0, 0.0), cx(0.0, 0.0)], vec![cx(0.0, 0.0), cx(1.0, 0.0)]];
        assert!(factor_constant_sl(&bad, 1e-10).is_err());
    }

    #[test]
    fn full_homotopy_identity_matrix() {
        let m = SeriesMatrix::identity(2, 2, 2);
        let samples = full_homotopy_sample(&m, 5).unwrap();
        for s in samples {
            assert_eq!(s, SeriesMatrix::identity(2, 2, 2));
        }
    }

    #[test]
    fn full_homotopy_shear() {
        // M = [[1, z+w],[0,1]]
        let zpw =
            TruncatedSeries::new(2, 2, vec![(mono(&[1, 0]), c(1)), (mono(&[0, 1]), c(1))]).unwrap();
        let m = SeriesMatrix::new(
            2,
            vec![
                TruncatedSeries::one(2, 2),
                zpw,
                TruncatedSeries::zero(2, 2),
                TruncatedSeries::one(2, 2),
            ],
        )
        .unwrap();
        let samples = full_homotopy_sample(&m, 16).unwrap();
        assert_eq!(samples[0], m);
        // endpoint is the identity
        let last = samples.last().unwrap();
        let dist = max_entry_distance(
            &last.constant_term(),
            &SeriesMatrix::identity(2, 2, 2).constant_term(),
        );
        assert!(dist < 1e-10);
        // dets stay 1 along the path
        for s in &samples {
            let d = s.det().unwrap();
            let (v, _) = d.evaluate(&[cx(0.3, 0.1), cx(-0.2, 0.4)]).unwrap();
            assert!((v - cx(1.0, 0.0)).norm() < 1e-10);
        }
        // at t just past 1/2 the off-diagonal degree-1 terms are gone
        let mid = &samples[8];
        assert!(mid.entry(0, 1).degree().unwrap_or(0) == 0);
    }
}
