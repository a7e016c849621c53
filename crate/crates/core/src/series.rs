//! Truncated multivariate power series with exact complex-rational coefficients.
//!
//! A series is a sparse map from exponent vectors to coefficients, cut off at a
//! total-degree cap. Mass discarded by truncation is tracked as a certified l1
//! tail bound so that Wiener-norm enclosures stay valid under arithmetic.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::Neg;

use num::bigint::BigInt;
use num::complex::Complex64;
use num::traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::scalar::{rat_to_f64, CRat, Rat};

/// Exponent vector of a monomial z1^{n1}...zd^{nd}.
///
/// Ordered graded-lexicographically: first by total degree, then lex on the
/// exponents. This is the canonical output order everywhere.
#[derive(Clone, PartialEq, Eq, Debug, Hash)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn zero(dim: usize) -> Self {
        Monomial(vec![0; dim])
    }

    /// The exponent vector of the single variable z_{k} (0-based k).
    pub fn var(dim: usize, k: usize) -> Self {
        let mut e = vec![0; dim];
        e[k] = 1;
        Monomial(e)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|e| e.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

/// Certified enclosure of a norm value.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct NormEnclosure {
    pub lower: Rat,
    pub upper: Rat,
    pub exact: bool,
}

impl NormEnclosure {
    pub fn exact_value(v: Rat) -> Self {
        NormEnclosure { lower: v.clone(), upper: v, exact: true }
    }

    pub fn is_exactly_zero(&self) -> bool {
        self.exact && self.upper.is_zero()
    }
}

impl fmt::Display for NormEnclosure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exact {
            write!(f, "{} (exact)", self.lower)
        } else {
            write!(f, "[{}, {}]", self.lower, self.upper)
        }
    }
}

/// Sparse truncated power series over the polydisc.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TruncatedSeries {
    dim: usize,
    cap: u32,
    terms: BTreeMap<Monomial, CRat>,
    tail: Option<Rat>,
}

impl TruncatedSeries {
    /// Build a series from raw terms. Duplicate monomials are summed, exact
    /// zeros dropped, and terms above the cap moved into the tail bound.
    pub fn new(
        dim: usize,
        cap: u32,
        raw: impl IntoIterator<Item = (Monomial, CRat)>,
    ) -> Result<Self> {
        let mut terms: BTreeMap<Monomial, CRat> = BTreeMap::new();
        let mut tail = Rat::zero();
        for (m, c) in raw {
            if m.len() != dim {
                return Err(Error::DimensionMismatch(m.len(), dim));
            }
            if m.degree() > cap {
                tail += c.abs_upper();
                continue;
            }
            let entry = terms.entry(m).or_insert_with(CRat::zero);
            *entry = &*entry + &c;
        }
        terms.retain(|_, c| !c.is_zero());
        let tail = if tail.is_zero() { None } else { Some(tail) };
        Ok(TruncatedSeries { dim, cap, terms, tail })
    }

    pub fn zero(dim: usize, cap: u32) -> Self {
        TruncatedSeries { dim, cap, terms: BTreeMap::new(), tail: None }
    }

    pub fn constant(dim: usize, cap: u32, c: CRat) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial::zero(dim), c);
        }
        TruncatedSeries { dim, cap, terms, tail: None }
    }

    pub fn one(dim: usize, cap: u32) -> Self {
        Self::constant(dim, cap, CRat::one())
    }

    /// The single variable z_{k} (0-based).
    pub fn variable(dim: usize, cap: u32, k: usize) -> Self {
        let mut terms = BTreeMap::new();
        if cap >= 1 {
            terms.insert(Monomial::var(dim, k), CRat::one());
        }
        TruncatedSeries { dim, cap, terms, tail: if cap >= 1 { None } else { Some(Rat::one()) } }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn cap(&self) -> u32 {
        self.cap
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, CRat> {
        &self.terms
    }

    pub fn tail_bound(&self) -> Option<&Rat> {
        self.tail.as_ref()
    }

    pub(crate) fn add_tail(&mut self, extra: Rat) {
        if extra.is_zero() {
            return;
        }
        let total = self.tail.take().unwrap_or_else(Rat::zero) + extra;
        self.tail = Some(total);
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty() && self.tail.is_none()
    }

    /// True when the series represents a polynomial exactly (no discarded mass).
    pub fn is_polynomial(&self) -> bool {
        match &self.tail {
            None => true,
            Some(t) => t.is_zero(),
        }
    }

    pub fn coeff(&self, m: &Monomial) -> CRat {
        self.terms.get(m).cloned().unwrap_or_else(CRat::zero)
    }

    /// Total degree of the stored part; None for the zero series.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.degree()).max()
    }

    /// Change the truncation cap. Lowering it pushes excess mass into the tail.
    pub fn with_cap(&self, cap: u32) -> Self {
        let mut terms = BTreeMap::new();
        let mut extra = Rat::zero();
        for (m, c) in &self.terms {
            if m.degree() > cap {
                extra += c.abs_upper();
            } else {
                terms.insert(m.clone(), c.clone());
            }
        }
        let mut tail = self.tail.clone().unwrap_or_else(Rat::zero);
        tail += extra;
        let tail = if tail.is_zero() { None } else { Some(tail) };
        TruncatedSeries { dim: self.dim, cap, terms, tail }
    }

    fn merge_tail(a: Option<&Rat>, b: Option<&Rat>, extra: Rat) -> Option<Rat> {
        let mut t = extra;
        if let Some(x) = a {
            t += x;
        }
        if let Some(x) = b {
            t += x;
        }
        if t.is_zero() {
            None
        } else {
            Some(t)
        }
    }

    pub fn add(&self, other: &TruncatedSeries) -> Result<TruncatedSeries> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch(self.dim, other.dim));
        }
        let cap = self.cap.min(other.cap);
        let mut terms = self.terms.clone();
        for (m, c) in &other.terms {
            let entry = terms.entry(m.clone()).or_insert_with(CRat::zero);
            *entry = &*entry + c;
        }
        // terms above the joint cap spill into the tail
        let mut spill = Rat::zero();
        terms.retain(|m, c| {
            if c.is_zero() {
                false
            } else if m.degree() > cap {
                spill += c.abs_upper();
                false
            } else {
                true
            }
        });
        let tail = Self::merge_tail(self.tail.as_ref(), other.tail.as_ref(), spill);
        Ok(TruncatedSeries { dim: self.dim, cap, terms, tail })
    }

    pub fn sub(&self, other: &TruncatedSeries) -> Result<TruncatedSeries> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> TruncatedSeries {
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| (m.clone(), c.clone().neg()))
            .collect();
        TruncatedSeries { dim: self.dim, cap: self.cap, terms, tail: self.tail.clone() }
    }

    pub fn scale(&self, s: &CRat) -> TruncatedSeries {
        if s.is_zero() {
            return TruncatedSeries::zero(self.dim, self.cap);
        }
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| (m.clone(), c * s))
            .collect();
        let tail = self.tail.as_ref().map(|t| t * s.abs_upper());
        TruncatedSeries { dim: self.dim, cap: self.cap, terms, tail }
    }

    /// Convolution product. Cross terms above the joint cap accrue to the tail
    /// through the rectangular majorant; tails propagate submultiplicatively.
    pub fn mul(&self, other: &TruncatedSeries) -> Result<TruncatedSeries> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch(self.dim, other.dim));
        }
        let cap = self.cap.min(other.cap);
        let mut terms: BTreeMap<Monomial, CRat> = BTreeMap::new();
        let mut spill = Rat::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let m = ma.mul(mb);
                let c = ca * cb;
                if m.degree() > cap {
                    spill += c.abs_upper();
                } else {
                    let entry = terms.entry(m).or_insert_with(CRat::zero);
                    *entry = &*entry + &c;
                }
            }
        }
        terms.retain(|_, c| !c.is_zero());
        let mut tail = spill;
        if self.tail.is_some() || other.tail.is_some() {
            let tf = self.tail.clone().unwrap_or_else(Rat::zero);
            let tg = other.tail.clone().unwrap_or_else(Rat::zero);
            let nf = self.stored_norm_upper();
            let ng = other.stored_norm_upper();
            tail += &tf * ng + &tg * nf + tf * tg;
        }
        let tail = if tail.is_zero() { None } else { Some(tail) };
        Ok(TruncatedSeries { dim: self.dim, cap, terms, tail })
    }

    pub fn pow(&self, e: u32) -> Result<TruncatedSeries> {
        let mut acc = TruncatedSeries::one(self.dim, self.cap);
        for _ in 0..e {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// l1 mass of the stored terms, by the rectangular upper bound per coefficient.
    fn stored_norm_upper(&self) -> Rat {
        self.terms.values().map(|c| c.abs_upper()).sum()
    }

    /// Certified enclosure of the Wiener l1 norm. Exact on real-coefficient
    /// polynomials; complex coefficients get the rectangular bracket
    /// max(|a|,|b|) <= |a+bi| <= |a|+|b|.
    pub fn wiener_norm(&self) -> NormEnclosure {
        let mut lower = Rat::zero();
        let mut upper = Rat::zero();
        let mut all_real = true;
        for c in self.terms.values() {
            if c.is_real() {
                let a = c.re.abs();
                lower += &a;
                upper += a;
            } else {
                all_real = false;
                lower += c.abs_lower();
                upper += c.abs_upper();
            }
        }
        let tail_zero = self.is_polynomial();
        if let Some(t) = &self.tail {
            upper += t;
        }
        NormEnclosure { lower, upper, exact: all_real && tail_zero }
    }

    /// Evaluate at a point in double precision. The returned bound covers the
    /// truncation tail (valid on the closed polydisc) plus float rounding.
    pub fn evaluate(&self, z: &[Complex64]) -> Result<(Complex64, f64)> {
        if z.len() != self.dim {
            return Err(Error::LengthMismatch(z.len(), self.dim));
        }
        let mut acc = Complex64::new(0.0, 0.0);
        for (m, c) in &self.terms {
            let mut term = c.to_c64();
            for (k, &e) in m.0.iter().enumerate() {
                term *= z[k].powu(e);
            }
            acc += term;
        }
        let tail = self.tail.as_ref().map(rat_to_f64).unwrap_or(0.0);
        let rounding = 4.0
            * (self.terms.len().max(1) as f64)
            * (self.cap.max(1) as f64)
            * f64::EPSILON
            * rat_to_f64(&self.stored_norm_upper()).max(1.0);
        Ok((acc, tail + rounding))
    }

    /// Max modulus over the resolution^d grid on the distinguished torus.
    /// A certified lower bound for the sup norm on the closed polydisc.
    pub fn sup_norm_lower(&self, resolution: usize) -> f64 {
        assert!(resolution >= 1);
        let mut best = 0.0f64;
        let mut idx = vec![0usize; self.dim];
        let roots: Vec<Complex64> = (0..resolution)
            .map(|k| {
                Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * k as f64 / resolution as f64)
            })
            .collect();
        loop {
            let z: Vec<Complex64> = idx.iter().map(|&k| roots[k]).collect();
            if let Ok((v, _)) = self.evaluate(&z) {
                best = best.max(v.norm());
            }
            // odometer over the grid
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
        best
    }

    /// Scale the argument: coefficient of degree-k terms picks up r^k.
    /// For r in [0,1] the tail bound stays valid unchanged.
    pub fn dilate(&self, r: &Rat) -> Result<TruncatedSeries> {
        if r.is_negative() || r > &Rat::one() {
            return Err(Error::precondition(format!("dilation factor {} outside [0,1]", r)));
        }
        let mut terms = BTreeMap::new();
        let mut rpow = Rat::one();
        let mut pows: Vec<Rat> = vec![Rat::one()];
        for _ in 0..self.cap {
            rpow *= r;
            pows.push(rpow.clone());
        }
        for (m, c) in &self.terms {
            let scaled = c.scale(&pows[m.degree() as usize]);
            if !scaled.is_zero() {
                terms.insert(m.clone(), scaled);
            }
        }
        Ok(TruncatedSeries { dim: self.dim, cap: self.cap, terms, tail: self.tail.clone() })
    }

    /// The diagonal-restriction homomorphism: (Df)(z) = f(z,...,z).
    pub fn diagonal_d(&self) -> TruncatedSeries {
        let mut terms: BTreeMap<Monomial, CRat> = BTreeMap::new();
        for (m, c) in &self.terms {
            let key = Monomial(vec![m.degree()]);
            let entry = terms.entry(key).or_insert_with(CRat::zero);
            *entry = &*entry + c;
        }
        terms.retain(|_, c| !c.is_zero());
        TruncatedSeries { dim: 1, cap: self.cap, terms, tail: self.tail.clone() }
    }

    /// The averaging lift: substitute (z1+...+zd)/d for the variable of a
    /// univariate series, expanded multinomially with exact coefficients.
    /// Norm-non-increasing, so the tail bound carries over unchanged.
    pub fn lift_u(&self, d: usize) -> Result<TruncatedSeries> {
        if self.dim != 1 {
            return Err(Error::DimensionMismatch(self.dim, 1));
        }
        let mut out: BTreeMap<Monomial, CRat> = BTreeMap::new();
        for (m, c) in &self.terms {
            let k = m.0[0];
            let dk = Rat::new(BigInt::one(), BigInt::from(d).pow(k));
            for (expo, multi) in multinomial_expansion(k, d) {
                let coeff = c.scale(&(Rat::from_integer(multi) * &dk));
                let entry = out.entry(Monomial(expo)).or_insert_with(CRat::zero);
                *entry = &*entry + &coeff;
            }
        }
        out.retain(|_, c| !c.is_zero());
        Ok(TruncatedSeries { dim: d, cap: self.cap, terms: out, tail: self.tail.clone() })
    }

    /// Canonical text form: one term per line "n1,...,nd<TAB>re<TAB>im" in
    /// graded-lex order, then an optional "tail<TAB>bound" line.
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        for (m, c) in &self.terms {
            out.push_str(&format!("{}\t{}\t{}\n", m, c.re, c.im));
        }
        if let Some(t) = &self.tail {
            if !t.is_zero() {
                out.push_str(&format!("tail\t{}\n", t));
            }
        }
        out
    }

    pub fn parse_text(text: &str, dim: usize, cap: u32) -> Result<TruncatedSeries> {
        let mut raw = Vec::new();
        let mut tail = Rat::zero();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split('\t').collect();
            if fields[0] == "tail" {
                if fields.len() != 2 {
                    return Err(Error::Parse {
                        pos: lineno + 1,
                        msg: "tail line needs exactly one bound field".into(),
                    });
                }
                tail += parse_rat(fields[1], lineno + 1)?;
                continue;
            }
            if fields.len() != 3 {
                return Err(Error::Parse {
                    pos: lineno + 1,
                    msg: format!("expected 3 tab-separated fields, got {}", fields.len()),
                });
            }
            let expo: Vec<u32> = fields[0]
                .split(',')
                .map(|s| {
                    s.trim().parse::<u32>().map_err(|_| Error::Parse {
                        pos: lineno + 1,
                        msg: format!("bad exponent {:?}", s),
                    })
                })
                .collect::<Result<_>>()?;
            if expo.len() != dim {
                return Err(Error::DimensionMismatch(expo.len(), dim));
            }
            let re = parse_rat(fields[1], lineno + 1)?;
            let im = parse_rat(fields[2], lineno + 1)?;
            raw.push((Monomial(expo), CRat::new(re, im)));
        }
        let mut s = TruncatedSeries::new(dim, cap, raw)?;
        if !tail.is_zero() {
            let total = s.tail.take().unwrap_or_else(Rat::zero) + tail;
            s.tail = Some(total);
        }
        Ok(s)
    }
}

pub fn parse_rat(s: &str, pos: usize) -> Result<Rat> {
    let s = s.trim();
    let err = |msg: String| Error::Parse { pos, msg };
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| err(format!("bad numerator {:?}", n)))?;
        let d: BigInt = d.trim().parse().map_err(|_| err(format!("bad denominator {:?}", d)))?;
        if d.is_zero() {
            return Err(err("zero denominator".into()));
        }
        Ok(Rat::new(n, d))
    } else if let Some((int, frac)) = s.split_once('.') {
        // exact decimal: a.b -> (a*10^k + b) / 10^k
        let neg = int.starts_with('-');
        let int_digits = int.trim_start_matches(['-', '+']);
        if !int_digits.chars().all(|c| c.is_ascii_digit())
            || !frac.chars().all(|c| c.is_ascii_digit())
            || frac.is_empty()
        {
            return Err(err(format!("bad decimal literal {:?}", s)));
        }
        let scale = BigInt::from(10u32).pow(frac.len() as u32);
        let int_part: BigInt = if int_digits.is_empty() {
            BigInt::zero()
        } else {
            int_digits.parse().map_err(|_| err(format!("bad decimal {:?}", s)))?
        };
        let frac_part: BigInt = frac.parse().map_err(|_| err(format!("bad decimal {:?}", s)))?;
        let num = int_part * &scale + frac_part;
        let num = if neg { -num } else { num };
        Ok(Rat::new(num, scale))
    } else {
        let n: BigInt = s.parse().map_err(|_| err(format!("bad rational {:?}", s)))?;
        Ok(Rat::from_integer(n))
    }
}

/// All weak compositions of k into d parts, with their multinomial coefficients.
fn multinomial_expansion(k: u32, d: usize) -> Vec<(Vec<u32>, BigInt)> {
    let mut out = Vec::new();
    let mut parts = vec![0u32; d];
    fn rec(k: u32, pos: usize, parts: &mut Vec<u32>, out: &mut Vec<(Vec<u32>, BigInt)>) {
        if pos == parts.len() - 1 {
            parts[pos] = k;
            out.push((parts.clone(), multinomial(parts)));
            return;
        }
        for v in 0..=k {
            parts[pos] = v;
            rec(k - v, pos + 1, parts, out);
        }
    }
    rec(k, 0, &mut parts, &mut out);
    out
}

fn multinomial(parts: &[u32]) -> BigInt {
    let total: u32 = parts.iter().sum();
    let mut result = factorial(total);
    for &p in parts {
        result /= factorial(p);
    }
    result
}

fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, rat_int};

    fn mono(e: &[u32]) -> Monomial {
        Monomial(e.to_vec())
    }

    fn c(n: i64) -> CRat {
        CRat::from_int(n)
    }

    #[test]
    fn make_series_basic() {
        let s = TruncatedSeries::new(2, 3, vec![(mono(&[1, 1]), c(1))]).unwrap();
        assert_eq!(s.terms().len(), 1);
        assert!(s.tail_bound().is_none());
    }

    #[test]
    fn make_series_truncates_to_tail() {
        let s = TruncatedSeries::new(2, 1, vec![(mono(&[2, 0]), c(1))]).unwrap();
        assert!(s.terms().is_empty());
        assert_eq!(s.tail_bound(), Some(&rat_int(1)));
    }

    #[test]
    fn make_series_merges_duplicates() {
        let s =
            TruncatedSeries::new(2, 2, vec![(mono(&[1, 1]), c(1)), (mono(&[1, 1]), c(2))]).unwrap();
        assert_eq!(s.coeff(&mono(&[1, 1])), c(3));
        assert_eq!(s.terms().len(), 1);
    }

    #[test]
    fn make_series_rejects_dim_mismatch() {
        assert!(TruncatedSeries::new(2, 3, vec![(mono(&[1]), c(1))]).is_err());
    }

    #[test]
    fn add_cancels() {
        let zpw = TruncatedSeries::new(2, 2, vec![(mono(&[1, 0]), c(1)), (mono(&[0, 1]), c(1))])
            .unwrap();
        let zmw = TruncatedSeries::new(2, 2, vec![(mono(&[1, 0]), c(1)), (mono(&[0, 1]), c(-1))])
            .unwrap();
        let sum = zpw.add(&zmw).unwrap();
        assert_eq!(sum.terms().len(), 1);
        assert_eq!(sum.coeff(&mono(&[1, 0])), c(2));
    }

    #[test]
    fn add_zero_is_identity() {
        let f = TruncatedSeries::new(2, 3, vec![(mono(&[1, 2]), c(5))]).unwrap();
        assert_eq!(f.add(&TruncatedSeries::zero(2, 3)).unwrap(), f);
    }

    #[test]
    fn add_takes_min_cap() {
        let a = TruncatedSeries::zero(2, 2);
        let b = TruncatedSeries::zero(2, 3);
        assert_eq!(a.add(&b).unwrap().cap(), 2);
    }

    #[test]
    fn mul_binomial() {
        let zpw = TruncatedSeries::new(2, 4, vec![(mono(&[1, 0]), c(1)), (mono(&[0, 1]), c(1))])
            .unwrap();
        let sq = zpw.mul(&zpw).unwrap();
        assert_eq!(sq.coeff(&mono(&[2, 0])), c(1));
        assert_eq!(sq.coeff(&mono(&[1, 1])), c(2));
        assert_eq!(sq.coeff(&mono(&[0, 2])), c(1));
        assert_eq!(sq.terms().len(), 3);
    }

    #[test]
    fn mul_one_is_identity() {
        let f = TruncatedSeries::new(2, 3, vec![(mono(&[1, 2]), c(7))]).unwrap();
        assert_eq!(f.mul(&TruncatedSeries::one(2, 3)).unwrap(), f);
    }

    #[test]
    fn wiener_norm_power_is_exact() {
        // ||(z^2+w^2)^n||_1 = 2^n
        let base = TruncatedSeries::new(2, 20, vec![(mono(&[2, 0]), c(1)), (mono(&[0, 2]), c(1))])
            .unwrap();
        for n in 1..=5u32 {
            let p = base.pow(n).unwrap();
            let norm = p.wiener_norm();
            assert!(norm.exact);
            assert_eq!(norm.lower, rat_int(1 << n));
        }
    }

    #[test]
    fn wiener_norm_zero() {
        let n = TruncatedSeries::zero(3, 2).wiener_norm();
        assert!(n.exact);
        assert!(n.lower.is_zero());
    }

    #[test]
    fn wiener_norm_complex_coefficient_brackets() {
        let s =
            TruncatedSeries::new(1, 2, vec![(mono(&[1]), CRat::new(rat_int(1), rat_int(1)))])
                .unwrap();
        let n = s.wiener_norm();
        assert!(!n.exact);
        assert_eq!(n.lower, rat_int(1));
        assert_eq!(n.upper, rat_int(2));
    }

    #[test]
    fn evaluate_simple() {
        let zw = TruncatedSeries::new(2, 2, vec![(mono(&[1, 1]), c(1))]).unwrap();
        let (v, _) = zw
            .evaluate(&[Complex64::new(0.5, 0.0), Complex64::new(0.5, 0.0)])
            .unwrap();
        assert!((v.re - 0.25).abs() < 1e-14 && v.im.abs() < 1e-14);

        let zpw = TruncatedSeries::new(2, 2, vec![(mono(&[1, 0]), c(1)), (mono(&[0, 1]), c(1))])
            .unwrap();
        let (v, _) = zpw
            .evaluate(&[Complex64::new(0.5, 0.0), Complex64::new(-0.5, 0.0)])
            .unwrap();
        assert!(v.norm() < 1e-14);
    }

    #[test]
    fn evaluate_length_mismatch() {
        let f = TruncatedSeries::one(2, 1);
        assert!(f.evaluate(&[Complex64::new(0.0, 0.0)]).is_err());
    }

    #[test]
    fn sup_norm_lower_single_variable() {
        let z = TruncatedSeries::variable(1, 1, 0);
        assert!((z.sup_norm_lower(7) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn sup_norm_lower_zero() {
        assert_eq!(TruncatedSeries::zero(2, 1).sup_norm_lower(4), 0.0);
    }

    #[test]
    fn sup_norm_lower_sum_attained_at_one() {
        let zpw = TruncatedSeries::new(2, 1, vec![(mono(&[1, 0]), c(1)), (mono(&[0, 1]), c(1))])
            .unwrap();
        assert!((zpw.sup_norm_lower(8) - 2.0).abs() < 1e-9);
    }

    #[test]
    fn dilate_examples() {
        let f = TruncatedSeries::new(2, 3, vec![(mono(&[2, 0]), c(1)), (mono(&[0, 2]), c(1))])
            .unwrap();
        let half = f.dilate(&rat(1, 2)).unwrap();
        assert_eq!(half.coeff(&mono(&[2, 0])), CRat::from_rat(rat(1, 4)));
        assert_eq!(f.dilate(&rat_int(1)).unwrap(), f);
        let at_zero = f.dilate(&rat_int(0)).unwrap();
        assert!(at_zero.terms().is_empty());
        assert!(f.dilate(&rat(3, 2)).is_err());
    }

    #[test]
    fn diagonal_examples() {
        let zpw = TruncatedSeries::new(2, 2, vec![(mono(&[1, 0]), c(1)), (mono(&[0, 1]), c(1))])
            .unwrap();
        let d = zpw.diagonal_d();
        assert_eq!(d.dim(), 1);
        assert_eq!(d.coeff(&mono(&[1])), c(2));

        let zw = TruncatedSeries::new(2, 2, vec![(mono(&[1, 1]), c(1))]).unwrap();
        assert_eq!(zw.diagonal_d().coeff(&mono(&[2])), c(1));
    }

    #[test]
    fn lift_examples() {
        let z = TruncatedSeries::variable(1, 2, 0);
        let u = z.lift_u(2).unwrap();
        assert_eq!(u.coeff(&mono(&[1, 0])), CRat::from_rat(rat(1, 2)));
        assert_eq!(u.coeff(&mono(&[0, 1])), CRat::from_rat(rat(1, 2)));

        let z2 = TruncatedSeries::new(1, 2, vec![(mono(&[2]), c(1))]).unwrap();
        let u2 = z2.lift_u(2).unwrap();
        assert_eq!(u2.coeff(&mono(&[1, 1])), CRat::from_rat(rat(1, 2)));
        assert_eq!(u2.coeff(&mono(&[2, 0])), CRat::from_rat(rat(1, 4)));
    }

    #[test]
    fn du_identity_worked_example() {
        // g = 1 + 3z + z^5 at cap 5
        let g = TruncatedSeries::new(
            1,
            5,
            vec![(mono(&[0]), c(1)), (mono(&[1]), c(3)), (mono(&[5]), c(1))],
        )
        .unwrap();
        for d in 2..=4 {
            assert_eq!(g.lift_u(d).unwrap().diagonal_d(), g);
        }
    }

    #[test]
    fn text_round_trip() {
        let f = TruncatedSeries::new(
            2,
            3,
            vec![
                (mono(&[1, 0]), CRat::new(rat(1, 2), rat(-1, 3))),
                (mono(&[0, 2]), c(4)),
            ],
        )
        .unwrap();
        let text = f.render_text();
        let back = TruncatedSeries::parse_text(&text, 2, 3).unwrap();
        assert_eq!(back, f);
    }

    #[test]
    fn parse_decimal_is_exact() {
        assert_eq!(parse_rat("0.25", 1).unwrap(), rat(1, 4));
        assert_eq!(parse_rat("-1.5", 1).unwrap(), rat(-3, 2));
        assert_eq!(parse_rat("3/4", 1).unwrap(), rat(3, 4));
    }
}
