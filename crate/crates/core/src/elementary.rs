//! Elementary symmetric polynomials and the two-way rewrite between the
//! monomial basis and the elementary-symmetric basis.
//!
//! The forward rewrite is the classical leading-term subtraction underlying
//! the fundamental theorem of symmetric polynomials: the graded-lex leading
//! monomial of a symmetric polynomial has non-increasing exponents, so it is
//! the leading monomial of a unique product of elementary symmetric
//! polynomials, which is subtracted off and the process repeated.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::Neg;

use itertools::Itertools;
use num::complex::Complex64;

use crate::error::{Error, Result};
use crate::scalar::CRat;
use crate::series::{Monomial, TruncatedSeries};
use crate::symmetry::{elementary_values, is_symmetric};

/// Polynomial (or truncated series) in the elementary symmetric polynomials
/// e_1..e_d, with a weighted-degree cap: the weight of e_j is j, so the
/// weighted degree of an exponent vector m is sum j*m_j. This makes the
/// rewrite of a total-degree-capped series lossless through the same degree.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ElementarySeries {
    dim: usize,
    cap_w: u32,
    terms: BTreeMap<Monomial, CRat>,
}

pub fn weighted_degree(m: &Monomial) -> u32 {
    m.0.iter()
        .enumerate()
        .map(|(j, &e)| (j as u32 + 1) * e)
        .sum()
}

impl ElementarySeries {
    pub fn new(
        dim: usize,
        cap_w: u32,
        raw: impl IntoIterator<Item = (Monomial, CRat)>,
    ) -> Result<Self> {
        let mut terms: BTreeMap<Monomial, CRat> = BTreeMap::new();
        for (m, c) in raw {
            if m.len() != dim {
                return Err(Error::DimensionMismatch(m.len(), dim));
            }
            if weighted_degree(&m) > cap_w {
                continue;
            }
            let entry = terms.entry(m).or_insert_with(CRat::zero);
            *entry = &*entry + &c;
        }
        terms.retain(|_, c| !c.is_zero());
        Ok(ElementarySeries { dim, cap_w, terms })
    }

    pub fn zero(dim: usize, cap_w: u32) -> Self {
        ElementarySeries { dim, cap_w, terms: BTreeMap::new() }
    }

    pub fn constant(dim: usize, cap_w: u32, c: CRat) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial::zero(dim), c);
        }
        ElementarySeries { dim, cap_w, terms }
    }

    /// The single generator e_{k} (0-based index k).
    pub fn variable(dim: usize, cap_w: u32, k: usize) -> Self {
        let mut terms = BTreeMap::new();
        if (k as u32 + 1) <= cap_w {
            terms.insert(Monomial::var(dim, k), CRat::one());
        }
        ElementarySeries { dim, cap_w, terms }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn cap_w(&self) -> u32 {
        self.cap_w
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, CRat> {
        &self.terms
    }

    pub fn coeff(&self, m: &Monomial) -> CRat {
        self.terms.get(m).cloned().unwrap_or_else(CRat::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &ElementarySeries) -> Result<ElementarySeries> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch(self.dim, other.dim));
        }
        let cap_w = self.cap_w.min(other.cap_w);
        let raw = self
            .terms
            .iter()
            .chain(other.terms.iter())
            .map(|(m, c)| (m.clone(), c.clone()));
        ElementarySeries::new(self.dim, cap_w, raw)
    }

    pub fn sub(&self, other: &ElementarySeries) -> Result<ElementarySeries> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> ElementarySeries {
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| (m.clone(), c.clone().neg()))
            .collect();
        ElementarySeries { dim: self.dim, cap_w: self.cap_w, terms }
    }

    pub fn scale(&self, s: &CRat) -> ElementarySeries {
        if s.is_zero() {
            return ElementarySeries::zero(self.dim, self.cap_w);
        }
        let terms = self.terms.iter().map(|(m, c)| (m.clone(), c * s)).collect();
        ElementarySeries { dim: self.dim, cap_w: self.cap_w, terms }
    }

    pub fn mul(&self, other: &ElementarySeries) -> Result<ElementarySeries> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch(self.dim, other.dim));
        }
        let cap_w = self.cap_w.min(other.cap_w);
        let mut raw = Vec::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                raw.push((ma.mul(mb), ca * cb));
            }
        }
        ElementarySeries::new(self.dim, cap_w, raw)
    }

    pub fn pow(&self, e: u32) -> Result<ElementarySeries> {
        let mut acc = ElementarySeries::constant(self.dim, self.cap_w, CRat::one());
        for _ in 0..e {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// Evaluate at given values of (e_1,...,e_d).
    pub fn evaluate(&self, e_vals: &[Complex64]) -> Result<Complex64> {
        if e_vals.len() != self.dim {
            return Err(Error::LengthMismatch(e_vals.len(), self.dim));
        }
        let mut acc = Complex64::new(0.0, 0.0);
        for (m, c) in &self.terms {
            let mut term = c.to_c64();
            for (k, &e) in m.0.iter().enumerate() {
                term *= e_vals[k].powu(e);
            }
            acc += term;
        }
        Ok(acc)
    }

    /// Text form mirroring the series format, preceded by the header line "e".
    pub fn render_text(&self) -> String {
        let mut out = String::from("e\n");
        for (m, c) in &self.terms {
            out.push_str(&format!("{}\t{}\t{}\n", m, c.re, c.im));
        }
        out
    }

    pub fn parse_text(text: &str, dim: usize, cap_w: u32) -> Result<ElementarySeries> {
        let body = match text.lines().next() {
            Some(first) if first.trim() == "e" => {
                text.splitn(2, '\n').nth(1).unwrap_or("")
            }
            _ => text,
        };
        let s = TruncatedSeries::parse_text(body, dim, u32::MAX)?;
        let raw = s.terms().iter().map(|(m, c)| (m.clone(), c.clone()));
        ElementarySeries::new(dim, cap_w, raw)
    }
}

impl fmt::Display for ElementarySeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render_text())
    }
}

/// The elementary symmetric polynomial e_k in d variables: the sum of all
/// products of k distinct variables.
pub fn elementary_poly(k: usize, d: usize) -> Result<TruncatedSeries> {
    elementary_poly_capped(k, d, d as u32)
}

pub fn elementary_poly_capped(k: usize, d: usize, cap: u32) -> Result<TruncatedSeries> {
    if k < 1 || k > d {
        return Err(Error::precondition(format!("k = {} outside 1..{}", k, d)));
    }
    let raw = (0..d).combinations(k).map(|subset| {
        let mut e = vec![0u32; d];
        for j in subset {
            e[j] = 1;
        }
        (Monomial(e), CRat::one())
    });
    TruncatedSeries::new(d, cap, raw)
}

/// Split into homogeneous parts p_0,...,p_cap with p_k the degree-k piece.
/// Their sum reconstructs the stored part of f exactly.
pub fn homogeneous_parts(f: &TruncatedSeries) -> Vec<TruncatedSeries> {
    let mut parts: Vec<Vec<(Monomial, CRat)>> = vec![Vec::new(); f.cap() as usize + 1];
    for (m, c) in f.terms() {
        parts[m.degree() as usize].push((m.clone(), c.clone()));
    }
    parts
        .into_iter()
        .map(|raw| TruncatedSeries::new(f.dim(), f.cap(), raw).unwrap())
        .collect()
}

/// Expand a polynomial in e_1..e_d back into the z-variables, truncating at cap.
pub fn from_elementary(q: &ElementarySeries, cap: u32) -> Result<TruncatedSeries> {
    let d = q.dim();
    let mut acc = TruncatedSeries::zero(d, cap);
    for (m, c) in q.terms() {
        let mut term = TruncatedSeries::constant(d, cap, c.clone());
        for (j, &e) in m.0.iter().enumerate() {
            if e > 0 {
                let ej = elementary_poly_capped(j + 1, d, cap)?;
                term = term.mul(&ej.pow(e)?)?;
            }
        }
        acc = acc.add(&term)?;
    }
    Ok(acc)
}

/// Rewrite a symmetric polynomial as a polynomial in e_1..e_d by leading-term
/// subtraction. The result is the unique such representation.
///
/// With `require_exact` set, a nonzero tail bound on the input is an error;
/// otherwise the tail is ignored and only the stored terms are rewritten.
pub fn to_elementary(p: &TruncatedSeries, require_exact: bool) -> Result<ElementarySeries> {
    if require_exact && !p.is_polynomial() {
        return Err(Error::precondition(
            "input carries a nonzero tail bound; not an exact polynomial",
        ));
    }
    if !is_symmetric(p) {
        return Err(Error::precondition("input is not symmetric"));
    }
    let d = p.dim();
    let cap = p.cap();
    let mut rest = p.clone();
    let mut out: Vec<(Monomial, CRat)> = Vec::new();
    let mut prev_leading: Option<Monomial> = None;
    while let Some((lead, coeff)) = rest.terms().iter().next_back().map(|(m, c)| (m.clone(), c.clone())) {
        // termination invariant: the leading monomial strictly decreases
        if let Some(prev) = &prev_leading {
            assert!(lead < *prev, "leading monomial failed to decrease");
        }
        // by symmetry the graded-lex leading exponents are non-increasing
        debug_assert!(lead.0.windows(2).all(|w| w[0] >= w[1]));
        let mut expo = vec![0u32; d];
        for j in 0..d {
            let next = if j + 1 < d { lead.0[j + 1] } else { 0 };
            expo[j] = lead.0[j] - next;
        }
        let e_mono = Monomial(expo);
        let single = ElementarySeries::new(d, weighted_degree(&e_mono), vec![(e_mono.clone(), coeff.clone())])?;
        let expansion = from_elementary(&single, cap)?;
        rest = rest.sub(&expansion)?;
        out.push((e_mono, coeff));
        prev_leading = Some(lead);
    }
    ElementarySeries::new(d, cap, out)
}

/// Degree-by-degree rewrite of a symmetric truncated series: each homogeneous
/// part is an exact symmetric polynomial and is converted independently.
pub fn series_to_elementary(f: &TruncatedSeries, cap: u32) -> Result<ElementarySeries> {
    if !is_symmetric(f) {
        return Err(Error::precondition("input is not symmetric"));
    }
    let mut acc = ElementarySeries::zero(f.dim(), cap);
    for part in homogeneous_parts(f) {
        if part.is_zero() {
            continue;
        }
        let q = to_elementary(&part.with_cap(part.degree().unwrap_or(0)), false)?;
        let widened = ElementarySeries::new(
            f.dim(),
            cap,
            q.terms().iter().map(|(m, c)| (m.clone(), c.clone())),
        )?;
        acc = acc.add(&widened)?;
    }
    Ok(acc)
}

/// Max deviation |f(z) - g(e_1(z),...,e_d(z))| over the given points.
/// A numerical probe only; says nothing about convergence in general.
pub fn compare_composition(
    f: &TruncatedSeries,
    g: &ElementarySeries,
    points: &[Vec<Complex64>],
) -> Result<f64> {
    let mut worst = 0.0f64;
    for z in points {
        let (fv, _) = f.evaluate(z)?;
        let gv = g.evaluate(&elementary_values(z))?;
        worst = worst.max((fv - gv).norm());
    }
    Ok(worst)
}
