//! Concrete numerical witnesses: the Blaschke-product ideal chain on the
//! polydisc and the worked elementary-basis expansion example.

use std::fmt;

use num::complex::Complex64;
use num::rational::BigRational;
use num::traits::Zero;

use crate::elementary::{series_to_elementary, ElementarySeries};
use crate::error::{Error, Result};
use crate::scalar::{rat, CRat, Rat};
use crate::series::{Monomial, TruncatedSeries};

/// Which alpha the k-th Blaschke factor uses. The source formula writes
/// alpha_n inside a product over k, which reads like a typo for alpha_k;
/// both interpretations are available and the varying one is the default.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AlphaRule {
    /// every factor of B_n uses alpha_n = 1 - 1/n^2 (the literal reading)
    FixedAlphaN,
    /// factor k uses alpha_k = 1 - 1/k^2 (the conventional reading)
    VaryingAlphaK,
}

#[derive(Clone, Copy, Debug)]
pub struct BlaschkeSpec {
    pub n: usize,
    pub alpha_rule: AlphaRule,
}

impl BlaschkeSpec {
    pub fn new(n: usize, alpha_rule: AlphaRule) -> Result<Self> {
        if n < 1 {
            return Err(Error::precondition("Blaschke index must be >= 1"));
        }
        Ok(BlaschkeSpec { n, alpha_rule })
    }
}

pub fn alpha(k: usize) -> f64 {
    1.0 - 1.0 / ((k * k) as f64)
}

/// B_n(z): product of n Blaschke factors with real parameters in [0,1).
pub fn blaschke_eval(spec: &BlaschkeSpec, z: Complex64) -> Result<Complex64> {
    if z.norm() > 1.0 + 1e-12 {
        return Err(Error::precondition(format!(
            "|z| = {} exceeds the closed unit disc",
            z.norm()
        )));
    }
    let mut prod = Complex64::new(1.0, 0.0);
    for k in 1..=spec.n {
        let a = match spec.alpha_rule {
            AlphaRule::FixedAlphaN => alpha(spec.n),
            AlphaRule::VaryingAlphaK => alpha(k),
        };
        prod *= (a - z) / (Complex64::new(1.0, 0.0) - a * z);
    }
    Ok(prod)
}

/// Evidence report for one link of the ideal chain: F_n = B_n(z_1)...B_n(z_d).
#[derive(Clone, Debug)]
pub struct BlaschkeChainReport {
    pub n: usize,
    pub d: usize,
    pub alpha_rule: AlphaRule,
    /// max |F_n| over the torus grid; must not exceed 1 by more than rounding
    pub max_modulus: f64,
    /// |F_n| at its own designated zero tuple
    pub value_at_own_zero: f64,
    /// |F_{n+1}| at its extra zero tuple (should vanish)
    pub next_at_new_zero: f64,
    /// |F_n| at that same tuple (should NOT vanish: strict inclusion evidence)
    pub this_at_new_zero: f64,
}

impl BlaschkeChainReport {
    pub fn modulus_ok(&self) -> bool {
        self.max_modulus <= 1.0 + 1e-9
    }

    pub fn strictness_ok(&self) -> bool {
        self.next_at_new_zero < 1e-9 && self.this_at_new_zero > 1e-9
    }
}

impl fmt::Display for BlaschkeChainReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Blaschke chain witness: n = {}, d = {}, rule = {:?}", self.n, self.d, self.alpha_rule)?;
        writeln!(f, "  (the source's product formula indexes alpha by n; the varying-k reading is assumed unless requested otherwise)")?;
        writeln!(f, "  max |F_n| on torus grid   = {:.12e} (<= 1 expected)", self.max_modulus)?;
        writeln!(f, "  |F_n| at own zero tuple   = {:.3e}", self.value_at_own_zero)?;
        writeln!(f, "  |F_{}| at its new zero   = {:.3e} (vanishes)", self.n + 1, self.next_at_new_zero)?;
        writeln!(f, "  |F_{}| at that tuple      = {:.3e} (nonzero: strict inclusion evidence)", self.n, self.this_at_new_zero)
    }
}

fn product_over_coords(spec: &BlaschkeSpec, z: &[Complex64]) -> Result<Complex64> {
    let mut prod = Complex64::new(1.0, 0.0);
    for &zk in z {
        prod *= blaschke_eval(spec, zk)?;
    }
    Ok(prod)
}

/// Grid scan plus zero-set strictness probes for the chain link n -> n+1.
pub fn blaschke_chain_witness(
    n: usize,
    d: usize,
    resolution: usize,
    alpha_rule: AlphaRule,
) -> Result<BlaschkeChainReport> {
    let spec = BlaschkeSpec::new(n, alpha_rule)?;
    let next = BlaschkeSpec::new(n + 1, alpha_rule)?;
    let mut max_modulus = 0.0f64;
    let mut idx = vec![0usize; d];
    loop {
        let z: Vec<Complex64> = idx
            .iter()
            .map(|&k| {
                Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * k as f64 / resolution as f64)
            })
            .collect();
        max_modulus = max_modulus.max(product_over_coords(&spec, &z)?.norm());
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
    // zero of B_n itself: alpha_n under either rule (for the varying rule it
    // is the last factor's parameter)
    let own_zero = Complex64::new(alpha(n), 0.0);
    let own_tuple = vec![own_zero; d];
    let value_at_own_zero = product_over_coords(&spec, &own_tuple)?.norm();
    // the factor B_{n+1} gains: its zero at alpha_{n+1}
    let new_zero = Complex64::new(alpha(n + 1), 0.0);
    let new_tuple = vec![new_zero; d];
    let next_at_new_zero = product_over_coords(&next, &new_tuple)?.norm();
    let this_at_new_zero = product_over_coords(&spec, &new_tuple)?.norm();
    Ok(BlaschkeChainReport {
        n,
        d,
        alpha_rule,
        max_modulus,
        value_at_own_zero,
        next_at_new_zero,
        this_at_new_zero,
    })
}

/// The partial sums f_N of the series sum_n (z^2+w^2)^n / (n^2 2^n).
pub fn worked_example_series(big_n: usize, cap: u32) -> Result<TruncatedSeries> {
    if cap < 2 * big_n as u32 {
        return Err(Error::precondition(format!(
            "cap {} too small; need at least {}",
            cap,
            2 * big_n
        )));
    }
    let base = TruncatedSeries::new(
        2,
        cap,
        vec![
            (Monomial(vec![2, 0]), CRat::one()),
            (Monomial(vec![0, 2]), CRat::one()),
        ],
    )?;
    let mut acc = TruncatedSeries::zero(2, cap);
    for n in 1..=big_n {
        let coeff = rat(1, (n * n) as i64 * (1i64 << n));
        let term = base.pow(n as u32)?.scale(&CRat::from_rat(coeff));
        acc = acc.add(&term)?;
    }
    Ok(acc)
}

/// sum_{n=1}^{N} 1/n^2, the exact Wiener norm of f_N.
pub fn basel_partial_sum(big_n: usize) -> Rat {
    (1..=big_n)
        .map(|n| rat(1, (n * n) as i64))
        .fold(BigRational::zero(), |a, b| a + b)
}

#[derive(Clone, Debug)]
pub struct WorkedExampleReport {
    pub big_n: usize,
    pub cap: u32,
    pub norm: Rat,
    pub norm_matches_closed_form: bool,
    pub elementary: ElementarySeries,
    pub composition_deviation: f64,
}

impl fmt::Display for WorkedExampleReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "partial sum N = {}, cap = {}", self.big_n, self.cap)?;
        writeln!(
            f,
            "  ||f_N||_1 = {} ({} sum_{{n<=N}} 1/n^2)",
            self.norm,
            if self.norm_matches_closed_form { "=" } else { "!=" }
        )?;
        writeln!(f, "  elementary-basis form:")?;
        for (m, c) in self.elementary.terms() {
            writeln!(f, "    e-exponents {} -> {}", m, c)?;
        }
        writeln!(
            f,
            "  max composition deviation on sampled interior points = {:.3e}",
            self.composition_deviation
        )
    }
}

/// Build f_N, check its exact norm, rewrite it in the elementary basis, and
/// probe the composition identity numerically on the given points.
pub fn worked_example(
    big_n: usize,
    cap: u32,
    probe_points: &[Vec<Complex64>],
) -> Result<WorkedExampleReport> {
    let f = worked_example_series(big_n, cap)?;
    let norm = f.wiener_norm();
    let expected = basel_partial_sum(big_n);
    let norm_matches = norm.exact && norm.lower == expected;
    let elementary = series_to_elementary(&f, cap)?;
    let composition_deviation =
        crate::elementary::compare_composition(&f, &elementary, probe_points)?;
    Ok(WorkedExampleReport {
        big_n,
        cap,
        norm: norm.lower,
        norm_matches_closed_form: norm_matches,
        elementary,
        composition_deviation,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    fn cx(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn blaschke_first_factor_is_minus_z() {
        // alpha_1 = 0 under both rules
        for rule in [AlphaRule::FixedAlphaN, AlphaRule::VaryingAlphaK] {
            let spec = BlaschkeSpec::new(1, rule).unwrap();
            let v = blaschke_eval(&spec, cx(0.5, 0.0)).unwrap();
            assert!((v - cx(-0.5, 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn blaschke_vanishes_at_alpha_n_fixed_rule() {
        let spec = BlaschkeSpec::new(3, AlphaRule::FixedAlphaN).unwrap();
        let v = blaschke_eval(&spec, cx(alpha(3), 0.0)).unwrap();
        assert!(v.norm() < 1e-14);
    }

    #[test]
    fn blaschke_varying_rule_at_origin() {
        // product of factor values at 0 is alpha_1 * alpha_2 = 0 since alpha_1 = 0
        let spec = BlaschkeSpec::new(2, AlphaRule::VaryingAlphaK).unwrap();
        let v = blaschke_eval(&spec, cx(0.0, 0.0)).unwrap();
        assert!(v.norm() < 1e-15);
    }

    #[test]
    fn blaschke_rejects_outside_disc() {
        let spec = BlaschkeSpec::new(1, AlphaRule::VaryingAlphaK).unwrap();
        assert!(blaschke_eval(&spec, cx(1.5, 0.0)).is_err());
    }

    #[test]
    fn blaschke_modulus_bounded_on_disc() {
        let spec = BlaschkeSpec::new(4, AlphaRule::VaryingAlphaK).unwrap();
        for k in 0..50 {
            let theta = 2.0 * std::f64::consts::PI * k as f64 / 50.0;
            let z = Complex64::from_polar(0.98, theta);
            assert!(blaschke_eval(&spec, z).unwrap().norm() <= 1.0 + 1e-12);
        }
    }

    #[test]
    fn chain_witness_reports_strictness() {
        for rule in [AlphaRule::FixedAlphaN, AlphaRule::VaryingAlphaK] {
            let r = blaschke_chain_witness(2, 2, 16, rule).unwrap();
            assert!(r.modulus_ok(), "max modulus {}", r.max_modulus);
            assert!(r.value_at_own_zero < 1e-12);
            assert!(r.strictness_ok(), "{:?}", r);
        }
    }

    #[test]
    fn worked_example_norms() {
        // N=1: ||f_1||_1 = 1; N=3: 1 + 1/4 + 1/9 = 49/36
        let r1 = worked_example(1, 2, &[]).unwrap();
        assert!(r1.norm_matches_closed_form);
        assert_eq!(r1.norm, rat(1, 1));
        let r3 = worked_example(3, 6, &[]).unwrap();
        assert!(r3.norm_matches_closed_form);
        assert_eq!(r3.norm, rat(49, 36));
    }

    #[test]
    fn worked_example_elementary_n1() {
        // f_1 = (z^2+w^2)/2 -> e1^2/2 - e2
        let r = worked_example(1, 2, &[]).unwrap();
        assert_eq!(r.elementary.coeff(&Monomial(vec![2, 0])), CRat::from_rat(rat(1, 2)));
        assert_eq!(r.elementary.coeff(&Monomial(vec![0, 1])), CRat::from_int(-1));
    }

    #[test]
    fn worked_example_rejects_small_cap() {
        assert!(worked_example(3, 5, &[]).is_err());
    }
}
