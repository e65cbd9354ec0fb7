//! Sparse multivariate polynomials in x_1..x_n over Q(q,t).
//!
//! Terms are kept in a BTreeMap under graded lexicographic order, so
//! iteration order, serialization, and Display are deterministic. The
//! divided difference (f - s_i f)/(x_i - x_{i+1}) is computed termwise by
//! geometric sums, never by long division: it is total on all polynomials,
//! which is what makes the Demazure-Lusztig action exact.

use crate::qtfield::QtRational;
use crate::Error;
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

/// Exponent vector of fixed length n, ordered by (total degree, lex).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial(pub Vec<u16>);

impl Monomial {
    pub fn constant(n: usize) -> Self {
        Monomial(vec![0; n])
    }

    pub fn var(n: usize, i: usize) -> Self {
        assert!(1 <= i && i <= n, "variable index {} out of 1..={}", i, n);
        let mut e = vec![0; n];
        e[i - 1] = 1;
        Monomial(e)
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    pub fn mul(&self, other: &Self) -> Self {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparsePolynomial {
    n: usize,
    terms: BTreeMap<Monomial, QtRational>,
}

impl SparsePolynomial {
    pub fn zero(n: usize) -> Self {
        SparsePolynomial { n, terms: BTreeMap::new() }
    }

    pub fn one(n: usize) -> Self {
        Self::constant(n, QtRational::one())
    }

    pub fn constant(n: usize, c: QtRational) -> Self {
        let mut p = Self::zero(n);
        p.add_term(Monomial::constant(n), c);
        p
    }

    /// The variable x_i (1-based).
    pub fn var(n: usize, i: usize) -> Self {
        let mut p = Self::zero(n);
        p.add_term(Monomial::var(n, i), QtRational::one());
        p
    }

    pub fn from_terms(n: usize, terms: impl IntoIterator<Item = (Monomial, QtRational)>) -> Self {
        let mut p = Self::zero(n);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &QtRational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> QtRational {
        self.terms.get(m).cloned().unwrap_or_else(QtRational::zero)
    }

    pub fn add_term(&mut self, m: Monomial, c: QtRational) {
        assert_eq!(m.0.len(), self.n, "monomial arity mismatch");
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = e.get().add(&c);
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    fn check_arity(&self, other: &Self) -> Result<(), Error> {
        if self.n != other.n {
            return Err(Error::Input(format!(
                "polynomial arity mismatch: {} vs {}",
                self.n, other.n
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check_arity(other).expect("arity");
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.check_arity(other).expect("arity");
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.neg());
        }
        out
    }

    pub fn neg(&self) -> Self {
        SparsePolynomial {
            n: self.n,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c.neg())).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check_arity(other).expect("arity");
        let mut out = Self::zero(self.n);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), c1.mul(c2));
            }
        }
        out
    }

    pub fn scalar_mul(&self, c: &QtRational) -> Self {
        if c.is_zero() {
            return Self::zero(self.n);
        }
        SparsePolynomial {
            n: self.n,
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v.mul(c))).collect(),
        }
    }

    /// Multiply by the variable x_i (1-based).
    pub fn mul_var(&self, i: usize) -> Self {
        let mut out = Self::zero(self.n);
        for (m, c) in &self.terms {
            let mut e = m.0.clone();
            e[i - 1] += 1;
            out.add_term(Monomial(e), c.clone());
        }
        out
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut out = Self::one(self.n);
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }

    /// Swap the variables x_i and x_{i+1} (1 <= i < n).
    pub fn swap_vars(&self, i: usize) -> Self {
        assert!(1 <= i && i < self.n, "swap index {} out of range for n={}", i, self.n);
        let mut out = Self::zero(self.n);
        for (m, c) in &self.terms {
            let mut e = m.0.clone();
            e.swap(i - 1, i);
            out.add_term(Monomial(e), c.clone());
        }
        out
    }

    /// Substitute x_i -> x_{perm[i]} on 0-based indices: the monomial
    /// exponent at slot i moves to slot perm[i].
    pub fn apply_var_map(&self, perm: &[usize]) -> Self {
        assert_eq!(perm.len(), self.n);
        let mut out = Self::zero(self.n);
        for (m, c) in &self.terms {
            let mut e = vec![0u16; self.n];
            for (i, &exp) in m.0.iter().enumerate() {
                e[perm[i]] += exp;
            }
            out.add_term(Monomial(e), c.clone());
        }
        out
    }

    /// Substitute x_i -> x_{n+1-i}.
    pub fn reverse_vars(&self) -> Self {
        let perm: Vec<usize> = (0..self.n).rev().collect();
        self.apply_var_map(&perm)
    }

    pub fn map_coeffs(&self, f: impl Fn(&QtRational) -> QtRational) -> Self {
        let mut out = Self::zero(self.n);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), f(c));
        }
        out
    }

    pub fn evaluate(&self, point: &[QtRational]) -> Result<QtRational, Error> {
        if point.len() != self.n {
            return Err(Error::Input(format!(
                "evaluation point has {} entries, expected {}",
                point.len(),
                self.n
            )));
        }
        let mut acc = QtRational::zero();
        for (m, c) in &self.terms {
            let mut term = c.clone();
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    term = term.mul(&point[i].pow(e as i64)?);
                }
            }
            acc = acc.add(&term);
        }
        Ok(acc)
    }

    /// x_1 -> 0 with the remaining indices shifted down by one.
    pub fn project_pi1(&self) -> Self {
        assert!(self.n >= 1);
        let mut out = Self::zero(self.n - 1);
        for (m, c) in &self.terms {
            if m.0[0] == 0 {
                out.add_term(Monomial(m.0[1..].to_vec()), c.clone());
            }
        }
        out
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.total_degree()).max()
    }

    pub fn homogeneous_component(&self, d: u32) -> Self {
        let mut out = Self::zero(self.n);
        for (m, c) in &self.terms {
            if m.total_degree() == d {
                out.add_term(m.clone(), c.clone());
            }
        }
        out
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(|m| m.total_degree());
        match degs.next() {
            None => true,
            Some(d) => degs.all(|e| e == d),
        }
    }

    pub fn top_homogeneous(&self) -> Result<Self, Error> {
        match self.total_degree() {
            None => Err(Error::Input("top component of the zero polynomial".into())),
            Some(d) => Ok(self.homogeneous_component(d)),
        }
    }

    /// Largest monomial in graded-lex order.
    pub fn leading_monomial(&self) -> Option<&Monomial> {
        self.terms.keys().next_back()
    }

    /// (f - s_i f) / (x_i - x_{i+1}), expanded termwise:
    ///   (x^a y^b - x^b y^a)/(x - y) = sum of monomials, exact for any a, b.
    pub fn divided_difference(&self, i: usize) -> Self {
        assert!(1 <= i && i < self.n);
        let (lo, hi) = (i - 1, i);
        let mut out = Self::zero(self.n);
        for (m, c) in &self.terms {
            let a = m.0[lo];
            let b = m.0[hi];
            if a == b {
                continue;
            }
            // (x^a y^b - x^b y^a)/(x-y) with a>b is x^b y^b * sum_{j} x^(a-b-1-j) y^j;
            // for a<b the same with a sign flip.
            let (low, diff, sign) = if a > b { (b, a - b, false) } else { (a, b - a, true) };
            let coeff = if sign { c.neg() } else { c.clone() };
            for j in 0..diff {
                let mut e = m.0.clone();
                e[lo] = low + (diff - 1 - j);
                e[hi] = low + j;
                out.add_term(Monomial(e), coeff.clone());
            }
        }
        out
    }

    /// Exact division by the variable x_i; `None` if some term lacks x_i.
    pub fn div_var(&self, i: usize) -> Option<Self> {
        let mut out = Self::zero(self.n);
        for (m, c) in &self.terms {
            if m.0[i - 1] == 0 {
                return None;
            }
            let mut e = m.0.clone();
            e[i - 1] -= 1;
            out.add_term(Monomial(e), c.clone());
        }
        Some(out)
    }
}

impl fmt::Display for SparsePolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let coeff = c.to_string();
            let needs_parens = coeff.contains('+') || (coeff.contains('-') && !coeff.starts_with('-'));
            let vars: Vec<String> = m
                .0
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| {
                    if e == 1 {
                        format!("x{}", i + 1)
                    } else {
                        format!("x{}^{}", i + 1, e)
                    }
                })
                .collect();
            if vars.is_empty() {
                write!(f, "{}", coeff)?;
            } else if c.is_one() {
                write!(f, "{}", vars.join("*"))?;
            } else if needs_parens {
                write!(f, "({})*{}", coeff, vars.join("*"))?;
            } else {
                write!(f, "{}*{}", coeff, vars.join("*"))?;
            }
        }
        Ok(())
    }
}

/// JSON record for one term: exponents plus numerator/denominator strings in
/// the canonical q,t syntax.
#[derive(Serialize, Deserialize)]
pub struct TermRecord {
    pub exponents: Vec<u16>,
    pub numerator: String,
    pub denominator: String,
}

impl SparsePolynomial {
    pub fn to_records(&self) -> Vec<TermRecord> {
        self.terms
            .iter()
            .map(|(m, c)| TermRecord {
                exponents: m.0.clone(),
                numerator: c.numerator().to_string(),
                denominator: c.denominator().to_string(),
            })
            .collect()
    }

    pub fn from_records(n: usize, records: &[TermRecord]) -> Result<Self, Error> {
        let mut p = Self::zero(n);
        for r in records {
            if r.exponents.len() != n {
                return Err(Error::Input("exponent vector arity mismatch".into()));
            }
            let num: QtRational = r.numerator.parse().map_err(Error::Field)?;
            let den: QtRational = r.denominator.parse().map_err(Error::Field)?;
            p.add_term(Monomial(r.exponents.clone()), num.div(&den)?);
        }
        Ok(p)
    }
}
