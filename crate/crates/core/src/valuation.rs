//! Extended reals and truncated Novikov series.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Result, SyzError};

/// Default truncation cutoff for Novikov series.
pub const DEFAULT_CUTOFF: f64 = 50.0;
/// Coefficients below this (relative to the contributing magnitudes) cancel.
pub const COEFF_ZERO_TOL: f64 = 1e-12;
/// Exponents closer than this are treated as equal when merging.
pub const EXP_MERGE_TOL: f64 = 1e-9;

const MAX_INVERSE_TERMS: usize = 100_000;

/// A real number extended by `+inf` and `-inf`.
#[derive(Debug, Clone, Copy)]
pub enum ExtReal {
    NegInf,
    Finite(f64),
    PosInf,
}

impl ExtReal {
    pub fn from_f64(x: f64) -> Self {
        if x == f64::INFINITY {
            ExtReal::PosInf
        } else if x == f64::NEG_INFINITY {
            ExtReal::NegInf
        } else {
            assert!(!x.is_nan(), "NaN is not an extended real");
            ExtReal::Finite(x)
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, ExtReal::Finite(_))
    }

    pub fn finite(self) -> Option<f64> {
        match self {
            ExtReal::Finite(x) => Some(x),
            _ => None,
        }
    }

    pub fn to_f64(self) -> f64 {
        match self {
            ExtReal::NegInf => f64::NEG_INFINITY,
            ExtReal::Finite(x) => x,
            ExtReal::PosInf => f64::INFINITY,
        }
    }

    /// Sum of two extended reals; `None` for `+inf + -inf`.
    pub fn checked_add(self, other: ExtReal) -> Option<ExtReal> {
        use ExtReal::*;
        match (self, other) {
            (PosInf, NegInf) | (NegInf, PosInf) => None,
            (PosInf, _) | (_, PosInf) => Some(PosInf),
            (NegInf, _) | (_, NegInf) => Some(NegInf),
            (Finite(a), Finite(b)) => Some(Finite(a + b)),
        }
    }

    /// Integer multiple with the convention `0 * inf = 0`.
    pub fn scale(self, m: i64) -> ExtReal {
        match self {
            ExtReal::Finite(x) => ExtReal::Finite(m as f64 * x),
            _ if m == 0 => ExtReal::Finite(0.0),
            ExtReal::PosInf if m > 0 => ExtReal::PosInf,
            ExtReal::PosInf => ExtReal::NegInf,
            ExtReal::NegInf if m > 0 => ExtReal::NegInf,
            ExtReal::NegInf => ExtReal::PosInf,
        }
    }

    pub fn min(self, other: ExtReal) -> ExtReal {
        if self <= other {
            self
        } else {
            other
        }
    }

    pub fn max(self, other: ExtReal) -> ExtReal {
        if self >= other {
            self
        } else {
            other
        }
    }

    fn rank(self) -> u8 {
        match self {
            ExtReal::NegInf => 0,
            ExtReal::Finite(_) => 1,
            ExtReal::PosInf => 2,
        }
    }
}

impl Add<f64> for ExtReal {
    type Output = ExtReal;
    fn add(self, x: f64) -> ExtReal {
        match self {
            ExtReal::Finite(a) => ExtReal::Finite(a + x),
            other => other,
        }
    }
}

impl Neg for ExtReal {
    type Output = ExtReal;
    fn neg(self) -> ExtReal {
        match self {
            ExtReal::NegInf => ExtReal::PosInf,
            ExtReal::Finite(x) => ExtReal::Finite(-x),
            ExtReal::PosInf => ExtReal::NegInf,
        }
    }
}

impl From<f64> for ExtReal {
    fn from(x: f64) -> Self {
        ExtReal::from_f64(x)
    }
}

impl PartialEq for ExtReal {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for ExtReal {}

impl PartialOrd for ExtReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExtReal {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (ExtReal::Finite(a), ExtReal::Finite(b)) => {
                // -0.0 and 0.0 compare equal
                if a == b {
                    Ordering::Equal
                } else {
                    a.total_cmp(b)
                }
            }
            _ => self.rank().cmp(&other.rank()),
        }
    }
}

impl fmt::Display for ExtReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtReal::NegInf => write!(f, "-inf"),
            ExtReal::Finite(x) => write!(f, "{x}"),
            ExtReal::PosInf => write!(f, "inf"),
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum ExtRealRepr {
    Num(f64),
    Tag(String),
}

impl Serialize for ExtReal {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            ExtReal::Finite(x) => ExtRealRepr::Num(*x),
            ExtReal::PosInf => ExtRealRepr::Tag("inf".into()),
            ExtReal::NegInf => ExtRealRepr::Tag("-inf".into()),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for ExtReal {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        match ExtRealRepr::deserialize(deserializer)? {
            ExtRealRepr::Num(x) => Ok(ExtReal::Finite(x)),
            ExtRealRepr::Tag(t) if t == "inf" => Ok(ExtReal::PosInf),
            ExtRealRepr::Tag(t) if t == "-inf" => Ok(ExtReal::NegInf),
            ExtRealRepr::Tag(t) => Err(serde::de::Error::custom(format!("bad extended real {t:?}"))),
        }
    }
}

/// The `(k+1)`-th smallest entry of `sample`.
pub fn order_stat(sample: &[ExtReal], k: usize) -> Result<ExtReal> {
    if k >= sample.len() {
        return Err(SyzError::IndexOutOfRange {
            index: k,
            limit: sample.len(),
        });
    }
    let mut sorted = sample.to_vec();
    sorted.sort();
    Ok(sorted[k])
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Term {
    pub exp: f64,
    pub coeff: Complex64,
    /// Bound on the accumulated floating-point error of `coeff`.
    pub err: f64,
}

/// Relative rounding charged per arithmetic step.
const ROUND: f64 = 2.0 * f64::EPSILON;

/// Raw contribution: exponent, coefficient, magnitude for the cancellation
/// test, and rounding bound.
type Raw = (f64, Complex64, f64, f64);

/// Truncated formal sum `sum a_i T^{e_i}` with strictly increasing exponents.
///
/// All terms with exponent below `cutoff` are known; anything at or above it
/// is unknown. An exact zero has no terms and an infinite cutoff.
#[derive(Debug, Clone, PartialEq)]
pub struct NovikovNum {
    terms: Vec<Term>,
    cutoff: f64,
}

impl NovikovNum {
    pub fn zero() -> Self {
        NovikovNum {
            terms: Vec::new(),
            cutoff: f64::INFINITY,
        }
    }

    pub fn constant(c: Complex64, cutoff: f64) -> Self {
        Self::monomial(c, 0.0, cutoff)
    }

    pub fn one(cutoff: f64) -> Self {
        Self::constant(Complex64::new(1.0, 0.0), cutoff)
    }

    /// `c T^e`, known up to `cutoff`.
    pub fn monomial(c: Complex64, e: f64, cutoff: f64) -> Self {
        Self::from_terms(vec![(e, c)], cutoff)
    }

    /// `T^e` known to `precision` orders past its leading term.
    pub fn t_pow(e: f64, precision: f64) -> Self {
        Self::monomial(Complex64::new(1.0, 0.0), e, e + precision)
    }

    pub fn from_terms(terms: Vec<(f64, Complex64)>, cutoff: f64) -> Self {
        let terms = terms
            .into_iter()
            .map(|(exp, coeff)| (exp, coeff, coeff.norm(), 0.0))
            .collect();
        NovikovNum {
            terms: normalize(terms, cutoff),
            cutoff,
        }
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn cutoff(&self) -> f64 {
        self.cutoff
    }

    pub fn is_exact_zero(&self) -> bool {
        self.terms.is_empty() && self.cutoff == f64::INFINITY
    }

    /// True for an empty sum that is only zero up to the truncation.
    pub fn is_below_precision(&self) -> bool {
        self.terms.is_empty() && self.cutoff < f64::INFINITY
    }

    pub fn leading(&self) -> Option<Term> {
        self.terms.first().copied()
    }

    /// Valuation: the smallest exponent, `+inf` for an empty sum.
    pub fn val(&self) -> ExtReal {
        match self.terms.first() {
            Some(t) => ExtReal::Finite(t.exp),
            None => ExtReal::PosInf,
        }
    }

    fn order(&self) -> f64 {
        self.terms.first().map_or(self.cutoff, |t| t.exp)
    }

    /// Forget everything at or above `cutoff`.
    pub fn truncate(&self, cutoff: f64) -> Self {
        let cutoff = cutoff.min(self.cutoff);
        NovikovNum {
            terms: self.terms.iter().copied().filter(|t| t.exp < cutoff).collect(),
            cutoff,
        }
    }

    /// Truncate an exact series to `precision` orders past its leading term;
    /// finite-precision series are returned unchanged.
    pub fn with_default_precision(&self, precision: f64) -> Self {
        if self.cutoff.is_finite() {
            self.clone()
        } else {
            self.truncate(self.order() + precision)
        }
    }

    pub fn neg(&self) -> Self {
        self.scale(Complex64::new(-1.0, 0.0))
    }

    pub fn scale(&self, c: Complex64) -> Self {
        if c == Complex64::new(0.0, 0.0) {
            return Self::zero();
        }
        NovikovNum {
            terms: self
                .terms
                .iter()
                .map(|t| Term {
                    exp: t.exp,
                    coeff: t.coeff * c,
                    err: t.err * c.norm() + ROUND * (t.coeff * c).norm(),
                })
                .collect(),
            cutoff: self.cutoff,
        }
    }

    /// Multiplication by `T^e`.
    pub fn shift(&self, e: f64) -> Self {
        NovikovNum {
            terms: self
                .terms
                .iter()
                .map(|t| Term {
                    exp: t.exp + e,
                    ..*t
                })
                .collect(),
            cutoff: self.cutoff + e,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let cutoff = self.cutoff.min(other.cutoff);
        let merged = self
            .terms
            .iter()
            .chain(other.terms.iter())
            .map(|t| (t.exp, t.coeff, t.coeff.norm(), t.err))
            .collect();
        NovikovNum {
            terms: normalize(merged, cutoff),
            cutoff,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_exact_zero() || other.is_exact_zero() {
            return Self::zero();
        }
        let cutoff = (self.cutoff + other.order()).min(other.cutoff + self.order());
        let mut products = Vec::with_capacity(self.terms.len() * other.terms.len());
        for a in &self.terms {
            for b in &other.terms {
                let exp = a.exp + b.exp;
                if exp < cutoff {
                    let coeff = a.coeff * b.coeff;
                    let (ma, mb) = (a.coeff.norm(), b.coeff.norm());
                    let err = ma * b.err + mb * a.err + a.err * b.err + ROUND * ma * mb;
                    products.push((exp, coeff, coeff.norm(), err));
                }
            }
        }
        NovikovNum {
            terms: normalize(products, cutoff),
            cutoff,
        }
    }

    /// Inverse by expanding `(a0 T^v (1 + w))^{-1}` as a geometric series in `w`.
    pub fn inv(&self) -> Result<Self> {
        let lead = self.leading().ok_or(SyzError::NonUnit)?;
        let precision = self.cutoff - lead.exp;
        let ml = lead.coeff.norm();
        let w = NovikovNum {
            terms: normalize(
                self.terms[1..]
                    .iter()
                    .map(|t| {
                        let q = t.coeff / lead.coeff;
                        let err = (t.err + q.norm() * lead.err) / ml + ROUND * q.norm();
                        (t.exp - lead.exp, q, q.norm(), err)
                    })
                    .collect(),
                precision,
            ),
            cutoff: precision,
        };
        let minus_w = w.neg();
        let mut acc = NovikovNum::one(precision);
        let mut power = NovikovNum::one(precision);
        loop {
            power = power.mul(&minus_w);
            if power.order() >= precision {
                break;
            }
            acc = acc.add(&power);
            if acc.terms.len() > MAX_INVERSE_TERMS {
                return Err(SyzError::Precondition(
                    "inverse series exceeds the term budget".into(),
                ));
            }
        }
        let mut out = acc.scale(lead.coeff.inv()).shift(-lead.exp);
        let rel = lead.err / ml;
        for t in out.terms.iter_mut() {
            t.err += t.coeff.norm() * rel;
        }
        Ok(out)
    }

    pub fn pow_int(&self, m: i64) -> Result<Self> {
        if m < 0 {
            return self.inv()?.pow_int(-m);
        }
        if m == 0 {
            let precision = if self.terms.is_empty() {
                DEFAULT_CUTOFF
            } else {
                self.cutoff - self.order()
            };
            return Ok(NovikovNum::one(precision));
        }
        let mut base = self.clone();
        let mut acc: Option<NovikovNum> = None;
        let mut e = m as u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = Some(match acc {
                    Some(a) => a.mul(&base),
                    None => base.clone(),
                });
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        Ok(acc.expect("m > 0"))
    }

    /// Sum of coefficient magnitudes; bounds every coefficient of a product.
    pub fn l1_norm(&self) -> f64 {
        self.terms.iter().map(|t| t.coeff.norm()).sum()
    }

    /// Equality of all terms known to both sides: coefficients agree within
    /// `coeff_tol` times their size (at least 1) plus their rounding bounds.
    /// A term present on one side only is compared with zero.
    pub fn approx_eq(&self, other: &Self, coeff_tol: f64) -> bool {
        self.compare_terms(other, |a, b| {
            let scale = 1.0_f64.max(a.coeff.norm()).max(b.coeff.norm());
            (a.coeff - b.coeff).norm() <= coeff_tol * scale + a.err + b.err
        })
    }

    /// As [`approx_eq`](Self::approx_eq) with an absolute coefficient tolerance.
    pub fn approx_eq_scaled(&self, other: &Self, abs_tol: f64) -> bool {
        self.compare_terms(other, |a, b| (a.coeff - b.coeff).norm() <= abs_tol + a.err + b.err)
    }

    fn compare_terms<F: FnMut(Term, Term) -> bool>(&self, other: &Self, mut close: F) -> bool {
        let cut = self.cutoff.min(other.cutoff) - EXP_MERGE_TOL;
        let lhs: Vec<&Term> = self.terms.iter().filter(|t| t.exp < cut).collect();
        let rhs: Vec<&Term> = other.terms.iter().filter(|t| t.exp < cut).collect();
        let zero = |exp| Term {
            exp,
            coeff: Complex64::new(0.0, 0.0),
            err: 0.0,
        };
        let (mut i, mut j) = (0, 0);
        while i < lhs.len() || j < rhs.len() {
            let (a, b) = match (lhs.get(i), rhs.get(j)) {
                (Some(a), Some(b)) if (a.exp - b.exp).abs() <= EXP_MERGE_TOL => {
                    i += 1;
                    j += 1;
                    (**a, **b)
                }
                (Some(a), Some(b)) if a.exp < b.exp => {
                    i += 1;
                    (**a, zero(a.exp))
                }
                (Some(a), None) => {
                    i += 1;
                    (**a, zero(a.exp))
                }
                (_, Some(b)) => {
                    j += 1;
                    (zero(b.exp), **b)
                }
                (None, None) => unreachable!(),
            };
            if !close(a, b) {
                return false;
            }
        }
        true
    }
}

fn normalize(mut raw: Vec<Raw>, cutoff: f64) -> Vec<Term> {
    raw.retain(|r| r.0 < cutoff);
    raw.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut out: Vec<Term> = Vec::with_capacity(raw.len());
    let mut i = 0;
    while i < raw.len() {
        let exp = raw[i].0;
        let mut sum = Complex64::new(0.0, 0.0);
        let mut scale: f64 = 1.0;
        let (mut mags, mut err, mut count) = (0.0, 0.0, 0.0);
        while i < raw.len() && raw[i].0 - exp <= EXP_MERGE_TOL {
            sum += raw[i].1;
            scale = scale.max(raw[i].2);
            mags += raw[i].2;
            err += raw[i].3;
            count += 1.0;
            i += 1;
        }
        if sum.norm() > COEFF_ZERO_TOL * scale {
            let err = if count > 1.0 { err + ROUND * count * mags } else { err };
            out.push(Term { exp, coeff: sum, err });
        }
    }
    out
}

impl Add for &NovikovNum {
    type Output = NovikovNum;
    fn add(self, rhs: &NovikovNum) -> NovikovNum {
        NovikovNum::add(self, rhs)
    }
}

impl Sub for &NovikovNum {
    type Output = NovikovNum;
    fn sub(self, rhs: &NovikovNum) -> NovikovNum {
        NovikovNum::sub(self, rhs)
    }
}

impl Mul for &NovikovNum {
    type Output = NovikovNum;
    fn mul(self, rhs: &NovikovNum) -> NovikovNum {
        NovikovNum::mul(self, rhs)
    }
}

impl Neg for &NovikovNum {
    type Output = NovikovNum;
    fn neg(self) -> NovikovNum {
        NovikovNum::neg(self)
    }
}

#[derive(Serialize, Deserialize)]
struct TermRepr {
    exp: f64,
    re: f64,
    im: f64,
}

#[derive(Serialize, Deserialize)]
struct NovikovRepr {
    terms: Vec<TermRepr>,
    cutoff: ExtReal,
}

impl Serialize for NovikovNum {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        NovikovRepr {
            terms: self
                .terms
                .iter()
                .map(|t| TermRepr {
                    exp: t.exp,
                    re: t.coeff.re,
                    im: t.coeff.im,
                })
                .collect(),
            cutoff: ExtReal::from_f64(self.cutoff),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for NovikovNum {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = NovikovRepr::deserialize(deserializer)?;
        Ok(NovikovNum::from_terms(
            repr.terms
                .into_iter()
                .map(|t| (t.exp, Complex64::new(t.re, t.im)))
                .collect(),
            repr.cutoff.to_f64(),
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn val_examples() {
        let x = NovikovNum::from_terms(vec![(1.5, c(3.0)), (2.0, c(2.0))], DEFAULT_CUTOFF);
        assert_eq!(x.val(), ExtReal::Finite(1.5));
        assert_eq!(NovikovNum::one(DEFAULT_CUTOFF).val(), ExtReal::Finite(0.0));
        let empty = NovikovNum::from_terms(vec![], DEFAULT_CUTOFF);
        assert_eq!(empty.val(), ExtReal::PosInf);
        assert!(empty.is_below_precision());
        assert!(!empty.is_exact_zero());
        assert!(NovikovNum::zero().is_exact_zero());
    }

    #[test]
    fn cancellation() {
        let x = NovikovNum::monomial(c(1.0), 1.0, DEFAULT_CUTOFF);
        let y = NovikovNum::from_terms(vec![(1.0, c(-1.0)), (2.0, c(1.0))], DEFAULT_CUTOFF);
        let s = x.add(&y);
        assert_eq!(s.terms().len(), 1);
        assert_eq!(s.val(), ExtReal::Finite(2.0));
    }

    #[test]
    fn inverse_of_one_plus_t() {
        let x = NovikovNum::from_terms(vec![(0.0, c(1.0)), (1.0, c(1.0))], DEFAULT_CUTOFF);
        let xi = x.inv().unwrap();
        // alternating series up to the cutoff
        assert_eq!(xi.terms().len(), 50);
        for (m, t) in xi.terms().iter().enumerate() {
            assert_eq!(t.exp, m as f64);
            assert_eq!(t.coeff, c(if m % 2 == 0 { 1.0 } else { -1.0 }));
        }
        let prod = x.mul(&xi);
        assert!(prod.approx_eq(&NovikovNum::one(DEFAULT_CUTOFF), 1e-12));
    }

    #[test]
    fn inverse_of_shifted_series_tracks_precision() {
        let x = NovikovNum::from_terms(vec![(-3.0, c(2.0)), (-2.5, c(1.0))], 10.0);
        let xi = x.inv().unwrap();
        assert_eq!(xi.val(), ExtReal::Finite(3.0));
        assert_eq!(xi.cutoff(), 16.0);
        let prod = x.mul(&xi);
        assert_eq!(prod.cutoff(), 13.0);
        assert!(prod.approx_eq(&NovikovNum::one(13.0), 1e-12));
    }

    #[test]
    fn inverse_of_empty_is_non_unit() {
        assert_eq!(NovikovNum::zero().inv(), Err(SyzError::NonUnit));
        assert_eq!(
            NovikovNum::from_terms(vec![], 5.0).inv(),
            Err(SyzError::NonUnit)
        );
    }

    #[test]
    fn pow_int_binomial() {
        let x = NovikovNum::from_terms(vec![(0.0, c(1.0)), (1.0, c(1.0))], DEFAULT_CUTOFF);
        let cube = x.pow_int(3).unwrap();
        let coeffs: Vec<f64> = cube.terms().iter().map(|t| t.coeff.re).collect();
        assert_eq!(coeffs, vec![1.0, 3.0, 3.0, 1.0]);
        let back = cube.mul(&x.pow_int(-3).unwrap());
        assert!(back.approx_eq(&NovikovNum::one(DEFAULT_CUTOFF), 1e-10));
    }

    #[test]
    fn order_stat_examples() {
        let s: Vec<ExtReal> = [5.0, 1.0, 2.0, 4.0].iter().map(|&x| x.into()).collect();
        assert_eq!(order_stat(&s, 1).unwrap(), ExtReal::Finite(2.0));
        assert_eq!(order_stat(&s, 0).unwrap(), ExtReal::Finite(1.0));
        assert_eq!(order_stat(&s, 3).unwrap(), ExtReal::Finite(5.0));
        assert!(order_stat(&s, 4).is_err());
    }

    #[test]
    fn ext_real_scale_convention() {
        assert_eq!(ExtReal::PosInf.scale(0), ExtReal::Finite(0.0));
        assert_eq!(ExtReal::PosInf.scale(-2), ExtReal::NegInf);
        assert_eq!(ExtReal::NegInf.scale(3), ExtReal::NegInf);
        assert_eq!(ExtReal::PosInf.checked_add(ExtReal::NegInf), None);
    }

    #[test]
    fn json_round_trip() {
        let x = NovikovNum::from_terms(
            vec![(0.5, Complex64::new(1.0, -2.0)), (1.25, c(3.0))],
            DEFAULT_CUTOFF,
        );
        let s = serde_json::to_string(&x).unwrap();
        let back: NovikovNum = serde_json::from_str(&s).unwrap();
        assert_eq!(back, x);
        let z = serde_json::to_string(&NovikovNum::zero()).unwrap();
        assert!(z.contains("\"inf\""));
        let zb: NovikovNum = serde_json::from_str(&z).unwrap();
        assert!(zb.is_exact_zero());
    }
}
