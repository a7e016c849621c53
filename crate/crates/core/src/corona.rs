//! Corona-condition estimation and Bezout-identity verification.
//!
//! No corona solver lives here: solutions are supplied, then verified,
//! symmetrized, and turned into a lower-bound constant delta.

use num::complex::Complex64;
use num::rational::BigRational;
use num::traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::Rat;
use crate::series::{NormEnclosure, TruncatedSeries};
use crate::symmetry::{is_symmetric, symmetrize};

/// Corona data f_1..f_n with an optional candidate solution g_1..g_n.
#[derive(Clone, Debug)]
pub struct CoronaData {
    pub fs: Vec<TruncatedSeries>,
    pub gs: Option<Vec<TruncatedSeries>>,
}

impl CoronaData {
    pub fn new(fs: Vec<TruncatedSeries>, gs: Option<Vec<TruncatedSeries>>) -> Result<Self> {
        if fs.is_empty() {
            return Err(Error::precondition("corona data must be nonempty"));
        }
        let dim = fs[0].dim();
        for f in &fs {
            if f.dim() != dim {
                return Err(Error::DimensionMismatch(f.dim(), dim));
            }
        }
        if let Some(gs) = &gs {
            if gs.len() != fs.len() {
                return Err(Error::LengthMismatch(gs.len(), fs.len()));
            }
            for g in gs {
                if g.dim() != dim {
                    return Err(Error::DimensionMismatch(g.dim(), dim));
                }
            }
        }
        Ok(CoronaData { fs, gs })
    }
}

/// Minimum of sum |f_i(z)| over scaled torus grids r T^d, r in {1/L,...,1}.
///
/// Grid sampling estimates the infimum from above; this is an upper bound for
/// the best corona constant, not a certified lower bound.
pub fn corona_delta(fs: &[TruncatedSeries], resolution: usize, radial_layers: usize) -> f64 {
    assert!(resolution >= 1 && radial_layers >= 1);
    let dim = fs[0].dim();
    let mut best = f64::INFINITY;
    for layer in 1..=radial_layers {
        let r = layer as f64 / radial_layers as f64;
        let mut idx = vec![0usize; dim];
        loop {
            let z: Vec<Complex64> = idx
                .iter()
                .map(|&k| {
                    Complex64::from_polar(
                        r,
                        2.0 * std::f64::consts::PI * k as f64 / resolution as f64,
                    )
                })
                .collect();
            let total: f64 = fs
                .iter()
                .map(|f| f.evaluate(&z).map(|(v, _)| v.norm()).unwrap_or(f64::INFINITY))
                .sum();
            best = best.min(total);
            let mut carry = true;
            for slot in idx.iter_mut() {
                *slot += 1;
                if *slot < resolution {
                    carry = false;
                    break;
                }
                *slot = 0;
            }
            if carry {
                break;
            }
        }
    }
    best
}

/// Wiener-norm enclosure of the residual sum f_i g_i - 1. Exactly zero iff
/// the Bezout identity holds at the stored-term level.
pub fn verify_bezout(fs: &[TruncatedSeries], gs: &[TruncatedSeries]) -> Result<NormEnclosure> {
    if fs.len() != gs.len() {
        return Err(Error::LengthMismatch(fs.len(), gs.len()));
    }
    if fs.is_empty() {
        return Err(Error::precondition("empty corona data"));
    }
    let dim = fs[0].dim();
    let cap = fs
        .iter()
        .chain(gs.iter())
        .map(|s| s.cap())
        .min()
        .unwrap();
    let mut acc = TruncatedSeries::zero(dim, cap);
    for (f, g) in fs.iter().zip(gs) {
        acc = acc.add(&f.mul(g)?)?;
    }
    let residual = acc.sub(&TruncatedSeries::one(dim, cap))?;
    Ok(residual.wiener_norm())
}

/// Replace each g_i by its symmetrization. For symmetric f_i this preserves
/// an exact Bezout identity, since sum f_i (Sym g_i) = Sym(sum f_i g_i) = 1.
pub fn symmetrize_solution(
    fs: &[TruncatedSeries],
    gs: &[TruncatedSeries],
) -> Result<Vec<TruncatedSeries>> {
    for f in fs {
        if !is_symmetric(f) {
            return Err(Error::precondition("corona data is not symmetric"));
        }
    }
    let residual = verify_bezout(fs, gs)?;
    if !residual.is_exactly_zero() {
        return Err(Error::precondition(format!(
            "input solution has nonzero Bezout residual {}",
            residual
        )));
    }
    Ok(gs.iter().map(symmetrize).collect())
}

/// delta := (max_i upper ||g_i||_1)^{-1}. The reference constant uses the sup
/// norm; the l1 norm dominates it, so this delta is conservative but valid.
pub fn delta_from_solution(gs: &[TruncatedSeries]) -> Result<Rat> {
    let mut max_upper = Rat::zero();
    for g in gs {
        let n = g.wiener_norm();
        if n.upper > max_upper {
            max_upper = n.upper;
        }
    }
    if max_upper.is_zero() {
        return Err(Error::precondition("all-zero solution"));
    }
    Ok(BigRational::one() / max_upper)
}
