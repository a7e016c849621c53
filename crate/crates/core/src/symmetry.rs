//! The S_d action on points and series, the symmetrization projector, and
//! the geometry of the orbit space of the closed polydisc.

use std::collections::BTreeMap;

use itertools::Itertools;
use num::bigint::BigInt;
use num::complex::Complex64;
use num::rational::BigRational;
use num::traits::One;

use crate::error::{Error, Result};
use crate::scalar::CRat;
use crate::series::{Monomial, TruncatedSeries};

/// A permutation of {1,...,d}, stored 0-based.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    /// Build from 1-based images, validating bijectivity.
    pub fn from_one_based(images: &[usize]) -> Result<Self> {
        let d = images.len();
        let mut seen = vec![false; d];
        for &v in images {
            if v < 1 || v > d || seen[v - 1] {
                return Err(Error::precondition(format!(
                    "image list {:?} is not a bijection of 1..{}",
                    images, d
                )));
            }
            seen[v - 1] = true;
        }
        Ok(Permutation { images: images.iter().map(|&v| v - 1).collect() })
    }

    pub fn from_zero_based(images: Vec<usize>) -> Result<Self> {
        let shifted: Vec<usize> = images.iter().map(|&v| v + 1).collect();
        Self::from_one_based(&shifted)
    }

    pub fn identity(d: usize) -> Self {
        Permutation { images: (0..d).collect() }
    }

    /// The adjacent transposition swapping positions k and k+1 (0-based k).
    pub fn adjacent_transposition(d: usize, k: usize) -> Self {
        let mut images: Vec<usize> = (0..d).collect();
        images.swap(k, k + 1);
        Permutation { images }
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn image(&self, k: usize) -> usize {
        self.images[k]
    }

    /// Every element of S_d in a deterministic order.
    pub fn all(d: usize) -> Vec<Permutation> {
        (0..d)
            .permutations(d)
            .map(|images| Permutation { images })
            .collect()
    }

    /// Component k of the result is z_{sigma(k)}.
    pub fn apply_point(&self, z: &[Complex64]) -> Result<Vec<Complex64>> {
        if z.len() != self.images.len() {
            return Err(Error::LengthMismatch(z.len(), self.images.len()));
        }
        Ok(self.images.iter().map(|&j| z[j]).collect())
    }

    /// Re-index monomials so that (sigma f)(z) = f(sigma z) identically.
    pub fn apply_series(&self, f: &TruncatedSeries) -> Result<TruncatedSeries> {
        if f.dim() != self.images.len() {
            return Err(Error::DimensionMismatch(f.dim(), self.images.len()));
        }
        let mut terms: BTreeMap<Monomial, CRat> = BTreeMap::new();
        for (m, c) in f.terms() {
            let mut expo = vec![0u32; f.dim()];
            for (k, &e) in m.0.iter().enumerate() {
                expo[self.images[k]] = e;
            }
            terms.insert(Monomial(expo), c.clone());
        }
        let raw: Vec<_> = terms.into_iter().collect();
        let mut out = TruncatedSeries::new(f.dim(), f.cap(), raw)?;
        if let Some(t) = f.tail_bound() {
            out.add_tail(t.clone());
        }
        Ok(out)
    }
}

/// The averaging projector (1/d!) sum over S_d of sigma f.
pub fn symmetrize(f: &TruncatedSeries) -> TruncatedSeries {
    let d = f.dim();
    let mut acc = TruncatedSeries::zero(d, f.cap());
    for sigma in Permutation::all(d) {
        acc = acc.add(&sigma.apply_series(f).unwrap()).unwrap();
    }
    let dfact: BigInt = (1..=d as u64).product::<u64>().into();
    acc.scale(&CRat::from_rat(BigRational::new(BigInt::one(), dfact)))
}

/// Invariance under the d-1 adjacent transpositions, which generate S_d.
pub fn is_symmetric(f: &TruncatedSeries) -> bool {
    let d = f.dim();
    (0..d.saturating_sub(1)).all(|k| {
        let sigma = Permutation::adjacent_transposition(d, k);
        sigma.apply_series(f).unwrap() == *f
    })
}

/// A point of the closed polydisc together with its canonical orbit
/// representative: coordinates sorted by (Re, Im).
#[derive(Clone, Debug)]
pub struct OrbitPoint {
    pub rep: Vec<Complex64>,
    pub canonical: Vec<Complex64>,
}

impl OrbitPoint {
    pub fn new(rep: Vec<Complex64>) -> Self {
        let canonical = canonical_rep(&rep);
        OrbitPoint { rep, canonical }
    }
}

/// Sort coordinates by (Re, Im); the computable section of the quotient map.
pub fn canonical_rep(z: &[Complex64]) -> Vec<Complex64> {
    let mut sorted = z.to_vec();
    sorted.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    sorted
}

/// The orbit S_d z with exact duplicates removed.
pub fn orbit(z: &[Complex64]) -> Vec<Vec<Complex64>> {
    let mut seen: Vec<Vec<Complex64>> = Vec::new();
    for sigma in Permutation::all(z.len()) {
        let p = sigma.apply_point(z).unwrap();
        let dup = seen.iter().any(|q| {
            q.iter()
                .zip(&p)
                .all(|(a, b)| a.re.to_bits() == b.re.to_bits() && a.im.to_bits() == b.im.to_bits())
        });
        if !dup {
            seen.push(p);
        }
    }
    seen
}

/// min over sigma of the sup-distance between sigma z and w.
pub fn quotient_dist(z: &[Complex64], w: &[Complex64]) -> Result<f64> {
    if z.len() != w.len() {
        return Err(Error::LengthMismatch(z.len(), w.len()));
    }
    let mut best = f64::INFINITY;
    for sigma in Permutation::all(z.len()) {
        let p = sigma.apply_point(z).unwrap();
        let d = p
            .iter()
            .zip(w)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0f64, f64::max);
        best = best.min(d);
    }
    Ok(if best.is_finite() { best } else { 0.0 })
}

/// Values of the elementary symmetric polynomials e_1..e_d at a point,
/// read off the expansion of prod (1 + z_j t).
pub fn elementary_values(z: &[Complex64]) -> Vec<Complex64> {
    let d = z.len();
    let mut coeffs = vec![Complex64::new(0.0, 0.0); d + 1];
    coeffs[0] = Complex64::new(1.0, 0.0);
    for (j, &zj) in z.iter().enumerate() {
        for k in (1..=j + 1).rev() {
            let lower = coeffs[k - 1];
            coeffs[k] += zj * lower;
        }
    }
    coeffs[1..].to_vec()
}

/// Smallest k with |e_k(z) - e_k(w)| > tol; None when all agree within tol.
/// Since the e_k determine the multiset of zeros of a monic polynomial,
/// None certifies (numerically) that the orbits coincide.
pub fn separating_elementary(z: &[Complex64], w: &[Complex64], tol: f64) -> Result<Option<usize>> {
    if z.len() != w.len() {
        return Err(Error::LengthMismatch(z.len(), w.len()));
    }
    let ez = elementary_values(z);
    let ew = elementary_values(w);
    for (k, (a, b)) in ez.iter().zip(&ew).enumerate() {
        if (a - b).norm() > tol {
            return Ok(Some(k + 1));
        }
    }
    Ok(None)
}

/// H(t,[z]) = [(1-t)z], the contraction of the orbit space to the origin.
pub fn contraction_homotopy(t: f64, z: &[Complex64]) -> Result<OrbitPoint> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::precondition(format!("homotopy parameter {} outside [0,1]", t)));
    }
    let scaled: Vec<Complex64> = z.iter().map(|&c| c * (1.0 - t)).collect();
    Ok(OrbitPoint::new(scaled))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    fn mono(e: &[u32]) -> Monomial {
        Monomial(e.to_vec())
    }

    fn c(n: i64) -> CRat {
        CRat::from_int(n)
    }

    fn pt(coords: &[(f64, f64)]) -> Vec<Complex64> {
        coords.iter().map(|&(r, i)| Complex64::new(r, i)).collect()
    }

    #[test]
    fn apply_point_swap() {
        let sigma = Permutation::from_one_based(&[2, 1]).unwrap();
        let z = pt(&[(1.0, 0.0), (2.0, 0.0)]);
        let out = sigma.apply_point(&z).unwrap();
        assert_eq!(out[0].re, 2.0);
        assert_eq!(out[1].re, 1.0);
    }

    #[test]
    fn apply_point_identity_and_cycle() {
        let id = Permutation::identity(3);
        let z = pt(&[(1.0, 0.0), (2.0, 0.0), (3.0, 0.0)]);
        assert_eq!(id.apply_point(&z).unwrap(), z);
        let cyc = Permutation::from_one_based(&[2, 3, 1]).unwrap();
        let out = cyc.apply_point(&z).unwrap();
        assert_eq!(out.iter().map(|c| c.re).collect::<Vec<_>>(), vec![2.0, 3.0, 1.0]);
    }

    #[test]
    fn bad_permutation_rejected() {
        assert!(Permutation::from_one_based(&[1, 1]).is_err());
        assert!(Permutation::from_one_based(&[0, 2]).is_err());
    }

    #[test]
    fn apply_series_swap() {
        // sigma = (2,1) sends z^2 w to z w^2
        let f = TruncatedSeries::new(2, 3, vec![(mono(&[2, 1]), c(1))]).unwrap();
        let sigma = Permutation::from_one_based(&[2, 1]).unwrap();
        let g = sigma.apply_series(&f).unwrap();
        assert_eq!(g.coeff(&mono(&[1, 2])), c(1));
    }

    #[test]
    fn apply_series_action_identity_by_evaluation() {
        // (sigma f)(z) = f(sigma z) pointwise
        let f = TruncatedSeries::new(
            3,
            3,
            vec![(mono(&[1, 0, 0]), c(1)), (mono(&[0, 2, 1]), c(3))],
        )
        .unwrap();
        let sigma = Permutation::from_one_based(&[2, 3, 1]).unwrap();
        let sf = sigma.apply_series(&f).unwrap();
        let z = pt(&[(0.3, 0.1), (-0.2, 0.4), (0.5, -0.3)]);
        let (lhs, _) = sf.evaluate(&z).unwrap();
        let (rhs, _) = f.evaluate(&sigma.apply_point(&z).unwrap()).unwrap();
        assert!((lhs - rhs).norm() < 1e-12);
    }

    #[test]
    fn symmetrize_examples() {
        let z = TruncatedSeries::variable(2, 2, 0);
        let s = symmetrize(&z);
        assert_eq!(s.coeff(&mono(&[1, 0])), CRat::from_rat(rat(1, 2)));
        assert_eq!(s.coeff(&mono(&[0, 1])), CRat::from_rat(rat(1, 2)));

        let f = TruncatedSeries::new(2, 3, vec![(mono(&[2, 1]), c(1))]).unwrap();
        let s = symmetrize(&f);
        assert_eq!(s.coeff(&mono(&[2, 1])), CRat::from_rat(rat(1, 2)));
        assert_eq!(s.coeff(&mono(&[1, 2])), CRat::from_rat(rat(1, 2)));
    }

    #[test]
    fn symmetrize_fixes_symmetric() {
        let f = TruncatedSeries::new(2, 2, vec![(mono(&[1, 0]), c(1)), (mono(&[0, 1]), c(1))])
            .unwrap();
        assert_eq!(symmetrize(&f), f);
        assert!(is_symmetric(&f));
    }

    #[test]
    fn is_symmetric_examples() {
        let zmw = TruncatedSeries::new(2, 2, vec![(mono(&[1, 0]), c(1)), (mono(&[0, 1]), c(-1))])
            .unwrap();
        assert!(!is_symmetric(&zmw));
        // zw(z+w)
        let f = TruncatedSeries::new(2, 3, vec![(mono(&[2, 1]), c(1)), (mono(&[1, 2]), c(1))])
            .unwrap();
        assert!(is_symmetric(&f));
    }

    #[test]
    fn orbit_sizes() {
        assert_eq!(orbit(&pt(&[(1.0, 0.0), (1.0, 0.0)])).len(), 1);
        assert_eq!(orbit(&pt(&[(1.0, 0.0), (2.0, 0.0)])).len(), 2);
        assert_eq!(orbit(&pt(&[(1.0, 0.0), (2.0, 0.0), (2.0, 0.0)])).len(), 3);
    }

    #[test]
    fn quotient_dist_examples() {
        let z = pt(&[(0.5, 0.0), (0.0, 0.0)]);
        let w = pt(&[(0.0, 0.0), (0.5, 0.0)]);
        assert!(quotient_dist(&z, &w).unwrap() < 1e-15);
        assert!(quotient_dist(&z, &z).unwrap() < 1e-15);
        let o = pt(&[(0.0, 0.0), (0.0, 0.0)]);
        assert!((quotient_dist(&z, &o).unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn separating_elementary_examples() {
        let z = pt(&[(0.5, 0.0), (0.5, 0.0)]);
        let w = pt(&[(0.25, 0.0), (0.75, 0.0)]);
        // e1 agree (both 1), e2 differ: 0.25 vs 0.1875
        assert_eq!(separating_elementary(&z, &w, 1e-9).unwrap(), Some(2));

        let a = pt(&[(0.3, 0.1), (-0.2, 0.4)]);
        let b = pt(&[(-0.2, 0.4), (0.3, 0.1)]);
        assert_eq!(separating_elementary(&a, &b, 1e-9).unwrap(), None);

        let z = pt(&[(0.5, 0.0), (0.0, 0.0)]);
        let w = pt(&[(0.6, 0.0), (0.0, 0.0)]);
        assert_eq!(separating_elementary(&z, &w, 1e-9).unwrap(), Some(1));
    }

    #[test]
    fn canonical_is_orbit_invariant() {
        let z = pt(&[(0.5, -0.2), (-0.1, 0.3), (0.5, 0.1)]);
        let base = canonical_rep(&z);
        for sigma in Permutation::all(3) {
            let p = sigma.apply_point(&z).unwrap();
            assert_eq!(canonical_rep(&p), base);
        }
    }

    #[test]
    fn homotopy_endpoints() {
        let z = pt(&[(0.8, 0.0), (-0.4, 0.0)]);
        let h0 = contraction_homotopy(0.0, &z).unwrap();
        assert_eq!(h0.canonical, canonical_rep(&z));
        let h1 = contraction_homotopy(1.0, &z).unwrap();
        assert!(h1.canonical.iter().all(|c| c.norm() == 0.0));
        let hh = contraction_homotopy(0.5, &z).unwrap();
        assert_eq!(hh.canonical, canonical_rep(&pt(&[(0.4, 0.0), (-0.2, 0.0)])));
        assert!(contraction_homotopy(1.5, &z).is_err());
    }
}
