//! Sparse multivariate polynomials over an exact field, with graded
//! lexicographic term order and the line-oriented text format used by the
//! CLI and the golden files.

use crate::error::{Error, Result};
use crate::field::{Field, Fp, Rationals};
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt::Write as _;

/// Exponent vector with cached total degree.
#[derive(Clone, PartialEq, Eq, Debug, Hash)]
pub struct Monomial {
    exps: Vec<u16>,
    deg: u32,
}

impl Monomial {
    pub fn new(exps: Vec<u16>) -> Self {
        let deg = exps.iter().map(|&e| e as u32).sum();
        Monomial { exps, deg }
    }

    pub fn one(nvars: usize) -> Self {
        Monomial {
            exps: vec![0; nvars],
            deg: 0,
        }
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut exps = vec![0; nvars];
        exps[i] = 1;
        Monomial { exps, deg: 1 }
    }

    #[inline]
    pub fn deg(&self) -> u32 {
        self.deg
    }

    #[inline]
    pub fn exps(&self) -> &[u16] {
        &self.exps
    }

    pub fn nvars(&self) -> usize {
        self.exps.len()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.exps.len(), other.exps.len());
        Monomial {
            exps: self
                .exps
                .iter()
                .zip(&other.exps)
                .map(|(a, b)| a + b)
                .collect(),
            deg: self.deg + other.deg,
        }
    }

    pub fn try_div(&self, other: &Monomial) -> Option<Monomial> {
        if self
            .exps
            .iter()
            .zip(&other.exps)
            .any(|(a, b)| a < b)
        {
            return None;
        }
        Some(Monomial {
            exps: self
                .exps
                .iter()
                .zip(&other.exps)
                .map(|(a, b)| a - b)
                .collect(),
            deg: self.deg - other.deg,
        })
    }
}

/// Graded lexicographic: total degree first, then lex on exponents.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.deg
            .cmp(&other.deg)
            .then_with(|| self.exps.cmp(&other.exps))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse multivariate polynomial. Zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq)]
pub struct MultiPoly<K: Field> {
    pub field: K,
    pub nvars: usize,
    pub terms: BTreeMap<Monomial, K::Elem>,
}

impl<K: Field> MultiPoly<K> {
    pub fn zero(field: K, nvars: usize) -> Self {
        MultiPoly {
            field,
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(field: K, nvars: usize, c: K::Elem) -> Self {
        let mut p = Self::zero(field, nvars);
        p.add_term(Monomial::one(nvars), c);
        p
    }

    pub fn var(field: K, nvars: usize, i: usize) -> Self {
        let one = field.one();
        let mut p = Self::zero(field, nvars);
        p.add_term(Monomial::var(nvars, i), one);
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, m: Monomial, c: K::Elem) {
        debug_assert_eq!(m.nvars(), self.nvars);
        if self.field.is_zero(&c) {
            return;
        }
        let f = self.field.clone();
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = f.add(e.get(), &c);
                if f.is_zero(&s) {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        debug_assert_eq!(self.nvars, other.nvars);
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        let f = self.field.clone();
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = f.neg(c);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, s: &K::Elem) -> Self {
        let f = self.field.clone();
        if f.is_zero(s) {
            return Self::zero(f, self.nvars);
        }
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = f.mul(c, s);
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        debug_assert_eq!(self.nvars, other.nvars);
        let mut out = Self::zero(self.field.clone(), self.nvars);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), self.field.mul(c1, c2));
            }
        }
        out
    }

    pub fn mul_monomial(&self, m: &Monomial, c: &K::Elem) -> Self {
        let f = self.field.clone();
        let mut out = Self::zero(f.clone(), self.nvars);
        for (m1, c1) in &self.terms {
            out.add_term(m1.mul(m), f.mul(c1, c));
        }
        out
    }

    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().next_back().map(|m| m.deg())
    }

    /// Total degree of every term, if the polynomial is homogeneous.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut it = self.terms.keys();
        let d = it.next()?.deg();
        if it.all(|m| m.deg() == d) {
            Some(d)
        } else {
            None
        }
    }

    pub fn derivative(&self, var: usize) -> Self {
        let f = self.field.clone();
        let mut out = Self::zero(f.clone(), self.nvars);
        for (m, c) in &self.terms {
            let e = m.exps()[var];
            if e == 0 {
                continue;
            }
            let mut exps = m.exps().to_vec();
            exps[var] -= 1;
            out.add_term(Monomial::new(exps), f.mul(c, &f.from_i64(e as i64)));
        }
        out
    }

    pub fn eval(&self, point: &[K::Elem]) -> K::Elem {
        assert_eq!(point.len(), self.nvars);
        let f = &self.field;
        // power tables up to the max exponent per variable
        let mut maxes = vec![0u16; self.nvars];
        for m in self.terms.keys() {
            for (i, &e) in m.exps().iter().enumerate() {
                maxes[i] = maxes[i].max(e);
            }
        }
        let pows: Vec<Vec<K::Elem>> = (0..self.nvars)
            .map(|i| {
                let mut v = Vec::with_capacity(maxes[i] as usize + 1);
                v.push(f.one());
                for e in 1..=maxes[i] as usize {
                    let prev = v[e - 1].clone();
                    v.push(f.mul(&prev, &point[i]));
                }
                v
            })
            .collect();
        let mut acc = f.zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.exps().iter().enumerate() {
                if e > 0 {
                    t = f.mul(&t, &pows[i][e as usize]);
                }
            }
            acc = f.add(&acc, &t);
        }
        acc
    }

    /// Exact polynomial division; errors if the quotient does not exist.
    pub fn exact_div(&self, divisor: &Self) -> Result<Self> {
        if divisor.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let f = self.field.clone();
        let (dm, dc) = divisor.terms.iter().next_back().unwrap();
        let dm = dm.clone();
        let dc = dc.clone();
        let mut rem = self.clone();
        let mut quot = Self::zero(f.clone(), self.nvars);
        while let Some((rm, rc)) = rem.terms.iter().next_back().map(|(m, c)| (m.clone(), c.clone())) {
            let Some(q) = rm.try_div(&dm) else {
                return Err(Error::InexactDivision);
            };
            let qc = f.div(&rc, &dc)?;
            quot.add_term(q.clone(), qc.clone());
            rem = rem.sub(&divisor.mul_monomial(&q, &qc));
        }
        Ok(quot)
    }

    /// Substitute variable `var` = 1 and drop it (it must be the last one).
    pub fn dehomogenize_last(&self) -> Self {
        let f = self.field.clone();
        let n = self.nvars - 1;
        let mut out = Self::zero(f, n);
        for (m, c) in &self.terms {
            let exps = m.exps()[..n].to_vec();
            out.add_term(Monomial::new(exps), c.clone());
        }
        out
    }

    /// Inverse of `dehomogenize_last` at homogeneous degree `d`.
    pub fn homogenize_last(&self, d: u32) -> Result<Self> {
        let f = self.field.clone();
        let mut out = Self::zero(f, self.nvars + 1);
        for (m, c) in &self.terms {
            if m.deg() > d {
                return Err(Error::DegreeMismatch(format!(
                    "term of degree {} cannot homogenize to degree {d}",
                    m.deg()
                )));
            }
            let mut exps = m.exps().to_vec();
            exps.push((d - m.deg()) as u16);
            out.add_term(Monomial::new(exps), c.clone());
        }
        Ok(out)
    }

    /// Substitute each variable by a linear form in a new ring.
    pub fn substitute_linear(&self, images: &[Self]) -> Self {
        assert_eq!(images.len(), self.nvars);
        let f = self.field.clone();
        let target_nvars = images.first().map_or(0, |p| p.nvars);
        let mut out = Self::zero(f.clone(), target_nvars);
        for (m, c) in &self.terms {
            let mut t = Self::constant(f.clone(), target_nvars, c.clone());
            for (i, &e) in m.exps().iter().enumerate() {
                for _ in 0..e {
                    t = t.mul(&images[i]);
                }
            }
            out = out.add(&t);
        }
        out
    }

}

impl MultiPoly<Rationals> {
    /// Reduce a rational polynomial mod p.
    pub fn reduce_mod(&self, fp: Fp) -> Result<MultiPoly<Fp>> {
        let mut out = MultiPoly::zero(fp, self.nvars);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), fp.from_rat(c)?);
        }
        Ok(out)
    }
}

/// Field tag parsed from a file header.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FieldSpec {
    Rational,
    Prime(u64),
}

impl FieldSpec {
    pub fn parse(s: &str) -> Result<FieldSpec> {
        let s = s.trim();
        if s == "Q" {
            return Ok(FieldSpec::Rational);
        }
        if let Some(p) = s.strip_prefix("Fp:") {
            let p: u64 = p
                .parse()
                .map_err(|_| Error::Parse(format!("bad field spec '{s}'")))?;
            return Ok(FieldSpec::Prime(p));
        }
        Err(Error::Parse(format!("unknown field '{s}'")))
    }
}

/// Serialize in the canonical text format:
/// a `vars` line, a `field` line, then one term per line
/// `coefficient ; e_0 e_1 ... e_m` in descending graded-lex order.
pub fn write_poly<K: Field>(poly: &MultiPoly<K>, names: &[String]) -> String {
    assert_eq!(names.len(), poly.nvars);
    let mut out = String::new();
    writeln!(out, "vars {}", names.join(" ")).unwrap();
    writeln!(out, "field {}", poly.field.header_name()).unwrap();
    for (m, c) in poly.terms.iter().rev() {
        let exps: Vec<String> = m.exps().iter().map(|e| e.to_string()).collect();
        writeln!(out, "{} ; {}", poly.field.fmt_elem(c), exps.join(" ")).unwrap();
    }
    out
}

/// Parse the header of a polynomial file: variable names and field tag.
pub fn parse_header(s: &str) -> Result<(Vec<String>, FieldSpec)> {
    let mut names = None;
    let mut field = None;
    for line in s.lines() {
        let line = line.trim();
        if let Some(v) = line.strip_prefix("vars ") {
            names = Some(v.split_whitespace().map(|t| t.to_string()).collect());
        } else if let Some(fs) = line.strip_prefix("field ") {
            field = Some(FieldSpec::parse(fs)?);
        }
    }
    match (names, field) {
        (Some(n), Some(f)) => Ok((n, f)),
        _ => Err(Error::Parse("missing vars or field header".into())),
    }
}

/// Parse the term lines of a polynomial file over a known field.
pub fn parse_poly<K: Field>(s: &str, field: K) -> Result<(MultiPoly<K>, Vec<String>)> {
    let (names, spec) = parse_header(s)?;
    let expected = field.header_name();
    let got = match spec {
        FieldSpec::Rational => "Q".to_string(),
        FieldSpec::Prime(p) => format!("Fp:{p}"),
    };
    if expected != got {
        return Err(Error::Parse(format!(
            "file is over {got}, expected {expected}"
        )));
    }
    let nvars = names.len();
    let mut poly = MultiPoly::zero(field.clone(), nvars);
    for line in s.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with("vars ") || line.starts_with("field ") || line.starts_with('#') {
            continue;
        }
        let (coeff, exps) = line
            .split_once(';')
            .ok_or_else(|| Error::Parse(format!("bad term line '{line}'")))?;
        let c = field.parse_elem(coeff)?;
        let exps: Vec<u16> = exps
            .split_whitespace()
            .map(|t| {
                t.parse::<u16>()
                    .map_err(|_| Error::Parse(format!("bad exponent '{t}'")))
            })
            .collect::<Result<_>>()?;
        if exps.len() != nvars {
            return Err(Error::Parse(format!(
                "term has {} exponents, ring has {nvars} variables",
                exps.len()
            )));
        }
        poly.add_term(Monomial::new(exps), c);
    }
    Ok((poly, names))
}
