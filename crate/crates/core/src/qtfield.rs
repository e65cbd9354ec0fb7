//! Exact arithmetic in Z[q,t] and its fraction field Q(q,t).
//!
//! Every coefficient in this crate is a [`QtRational`]: a fully reduced
//! fraction of integer polynomials in the two parameters q and t. Fractions
//! are kept canonical at all times, so structural equality is mathematical
//! equality and serialized forms are reproducible.
//!
//! Negative powers of q and t (the eigenvalue vectors are full of t^{-l'})
//! are represented as fractions with monomial denominators, never as Laurent
//! exponents.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use std::collections::BTreeMap;
use std::fmt;

/// Errors surfaced by field arithmetic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FieldError {
    DivisionByZero,
    Parse(String),
}

impl fmt::Display for FieldError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldError::DivisionByZero => write!(f, "division by zero in Q(q,t)"),
            FieldError::Parse(msg) => write!(f, "parse error: {}", msg),
        }
    }
}

impl std::error::Error for FieldError {}

/// An element of Z[q,t]: map from exponent pair (deg_q, deg_t) to integer
/// coefficient. Zero coefficients are never stored, so the map is a canonical
/// form and derived Eq/Ord are semantic.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct BivariatePoly {
    terms: BTreeMap<(u32, u32), BigInt>,
}

impl BivariatePoly {
    pub fn zero() -> Self {
        BivariatePoly { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigInt::one())
    }

    pub fn constant(c: BigInt) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert((0, 0), c);
        }
        BivariatePoly { terms }
    }

    pub fn monomial(dq: u32, dt: u32, c: BigInt) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert((dq, dt), c);
        }
        BivariatePoly { terms }
    }

    pub fn var_q() -> Self {
        Self::monomial(1, 0, BigInt::one())
    }

    pub fn var_t() -> Self {
        Self::monomial(0, 1, BigInt::one())
    }

    /// 1 - q^a t^b, the ubiquitous box factor.
    pub fn one_minus_q_t(a: u32, b: u32) -> Self {
        let mut p = Self::one();
        p.add_term(a, b, -BigInt::one());
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&(0, 0)).map(|c| c.is_one()).unwrap_or(false)
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms.contains_key(&(0, 0)))
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &BigInt)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn add_term(&mut self, dq: u32, dt: u32, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry((dq, dt)).or_insert_with(BigInt::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&(dq, dt));
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (&(a, b), c) in &other.terms {
            out.add_term(a, b, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (&(a, b), c) in &other.terms {
            out.add_term(a, b, -c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        let terms = self.terms.iter().map(|(&k, c)| (k, -c.clone())).collect();
        BivariatePoly { terms }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = BivariatePoly::zero();
        for (&(a1, b1), c1) in &self.terms {
            for (&(a2, b2), c2) in &other.terms {
                out.add_term(a1 + a2, b1 + b2, c1 * c2);
            }
        }
        out
    }

    pub fn mul_scalar(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        let terms = self.terms.iter().map(|(&k, v)| (k, v * c)).collect();
        BivariatePoly { terms }
    }

    pub fn mul_monomial(&self, dq: u32, dt: u32) -> Self {
        let terms = self.terms.iter().map(|(&(a, b), v)| ((a + dq, b + dt), v.clone())).collect();
        BivariatePoly { terms }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut out = Self::one();
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }

    pub fn degree_q(&self) -> u32 {
        self.terms.keys().map(|&(a, _)| a).max().unwrap_or(0)
    }

    pub fn degree_t(&self) -> u32 {
        self.terms.keys().map(|&(_, b)| b).max().unwrap_or(0)
    }

    /// Leading term in the canonical lexicographic order on (deg_q, deg_t).
    pub fn leading(&self) -> Option<(&(u32, u32), &BigInt)> {
        self.terms.iter().next_back()
    }

    /// Substitute integer values is not needed; what we do need is the
    /// reversal q^A t^B * p(1/q, 1/t) used by the convention dictionary.
    pub fn reverse_degrees(&self, cap_q: u32, cap_t: u32) -> Self {
        let mut out = BivariatePoly::zero();
        for (&(a, b), c) in &self.terms {
            out.add_term(cap_q - a, cap_t - b, c.clone());
        }
        out
    }

    /// Integer content (gcd of all coefficients), always nonnegative.
    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in self.terms.values() {
            g = gcd_int(&g, c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    /// Exact division; `None` when `d` does not divide `self` in Z[q,t].
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        if d.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Self::zero());
        }
        if d.is_one() {
            return Some(self.clone());
        }
        let (&(dq, dt), dc) = d.leading().unwrap();
        let mut rem = self.clone();
        let mut quot = BivariatePoly::zero();
        while !rem.is_zero() {
            let (&(rq, rt), rc) = rem.leading().unwrap();
            if rq < dq || rt < dt {
                return None;
            }
            let (q, r) = num_integer::Integer::div_rem(rc, dc);
            if !r.is_zero() {
                return None;
            }
            let mq = rq - dq;
            let mt = rt - dt;
            quot.add_term(mq, mt, q.clone());
            let sub = d.mul(&BivariatePoly::monomial(mq, mt, q));
            rem = rem.sub(&sub);
        }
        Some(quot)
    }

    /// Collect coefficients as univariate polynomials in t, indexed by the
    /// power of q. Used by the gcd routine.
    fn q_coefficients(&self) -> Vec<UPoly> {
        let dq = self.degree_q() as usize;
        let mut out = vec![UPoly::zero(); dq + 1];
        for (&(a, b), c) in &self.terms {
            out[a as usize].set(b as usize, c.clone());
        }
        out
    }

    fn from_q_coefficients(coeffs: &[UPoly]) -> Self {
        let mut out = BivariatePoly::zero();
        for (a, p) in coeffs.iter().enumerate() {
            for (b, c) in p.coeffs.iter().enumerate() {
                if !c.is_zero() {
                    out.add_term(a as u32, b as u32, c.clone());
                }
            }
        }
        out
    }

    /// Greatest common divisor in Z[q,t], normalized so the leading
    /// coefficient (lex order on (deg_q, deg_t)) is positive.
    ///
    /// Computed by a primitive PRS on Z[t][q]: split off the content (a gcd
    /// in Z[t]) and run pseudo-remainders on the primitive parts. The sizes
    /// in this crate are small, so no modular method is needed; correctness
    /// is what matters and is pinned by the reduce-idempotence property test.
    pub fn gcd(a: &Self, b: &Self) -> Self {
        let g = Self::gcd_unnormalized(a, b);
        g.normalize_sign()
    }

    fn normalize_sign(&self) -> Self {
        match self.leading() {
            Some((_, c)) if c.is_negative() => self.neg(),
            _ => self.clone(),
        }
    }

    fn gcd_unnormalized(a: &Self, b: &Self) -> Self {
        if a.is_zero() {
            return b.clone();
        }
        if b.is_zero() {
            return a.clone();
        }
        if a.is_constant() && b.is_constant() {
            let g = gcd_int(&a.terms[&(0, 0)], &b.terms[&(0, 0)]);
            return Self::constant(g);
        }
        // Monomial fast path: gcds against q^a t^b are exponent minima.
        if a.terms.len() == 1 || b.terms.len() == 1 {
            let (mono, other) = if a.terms.len() == 1 { (a, b) } else { (b, a) };
            let (&(mq, mt), mc) = mono.leading().unwrap();
            let gq = other.terms.keys().map(|&(x, _)| x).min().unwrap().min(mq);
            let gt = other.terms.keys().map(|&(_, y)| y).min().unwrap().min(mt);
            let gc = gcd_int(mc, &other.content());
            return Self::monomial(gq, gt, gc);
        }
        let ap = a.q_coefficients();
        let bp = b.q_coefficients();
        let a_cont = upoly_vec_content(&ap);
        let b_cont = upoly_vec_content(&bp);
        let cont_gcd = UPoly::gcd(&a_cont, &b_cont);
        let ap: Vec<UPoly> = ap.iter().map(|p| p.div_exact(&a_cont).expect("content divides")).collect();
        let bp: Vec<UPoly> = bp.iter().map(|p| p.div_exact(&b_cont).expect("content divides")).collect();
        let prim = qpoly_gcd_primitive(ap, bp);
        let g: Vec<UPoly> = prim.iter().map(|p| p.mul(&cont_gcd)).collect();
        Self::from_q_coefficients(&g)
    }
}

/// Univariate polynomial over BigInt (dense; degrees stay small here).
#[derive(Debug, Clone, PartialEq, Eq)]
struct UPoly {
    coeffs: Vec<BigInt>,
}

impl UPoly {
    fn zero() -> Self {
        UPoly { coeffs: Vec::new() }
    }

    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn set(&mut self, deg: usize, c: BigInt) {
        if deg >= self.coeffs.len() {
            if c.is_zero() {
                return;
            }
            self.coeffs.resize(deg + 1, BigInt::zero());
        }
        self.coeffs[deg] = c;
        self.trim();
    }

    fn trim(&mut self) {
        while self.coeffs.last().map(|c| c.is_zero()).unwrap_or(false) {
            self.coeffs.pop();
        }
    }

    fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    fn leading(&self) -> &BigInt {
        self.coeffs.last().expect("leading of zero polynomial")
    }

    fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        let mut p = UPoly { coeffs };
        p.trim();
        p
    }

    fn mul_scalar(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        UPoly { coeffs: self.coeffs.iter().map(|a| a * c).collect() }
    }

    fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut coeffs = vec![BigInt::zero(); n];
        for (i, a) in self.coeffs.iter().enumerate() {
            coeffs[i] += a;
        }
        for (i, b) in other.coeffs.iter().enumerate() {
            coeffs[i] -= b;
        }
        let mut p = UPoly { coeffs };
        p.trim();
        p
    }

    fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![BigInt::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        UPoly { coeffs }
    }

    fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in &self.coeffs {
            g = gcd_int(&g, c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    fn primitive(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let c = self.content();
        self.div_scalar_exact(&c)
    }

    fn div_scalar_exact(&self, c: &BigInt) -> Self {
        UPoly { coeffs: self.coeffs.iter().map(|a| a / c).collect() }
    }

    fn div_exact(&self, d: &Self) -> Option<Self> {
        if self.is_zero() {
            return Some(Self::zero());
        }
        if d.is_zero() || self.degree() < d.degree() {
            return None;
        }
        let mut rem = self.clone();
        let mut quot = vec![BigInt::zero(); self.degree() - d.degree() + 1];
        while !rem.is_zero() && rem.degree() >= d.degree() {
            let (q, r) = num_integer::Integer::div_rem(rem.leading(), d.leading());
            if r.is_zero() {
                let k = rem.degree() - d.degree();
                quot[k] = q.clone();
                rem = rem.sub(&d.mul_scalar(&q).shift(k));
            } else {
                return None;
            }
        }
        if rem.is_zero() {
            let mut p = UPoly { coeffs: quot };
            p.trim();
            Some(p)
        } else {
            None
        }
    }

    /// Primitive PRS gcd over Z.
    fn gcd(a: &Self, b: &Self) -> Self {
        if a.is_zero() {
            return b.positive_leading();
        }
        if b.is_zero() {
            return a.positive_leading();
        }
        let cont = gcd_int(&a.content(), &b.content());
        let mut f = a.primitive();
        let mut g = b.primitive();
        if f.degree() < g.degree() {
            std::mem::swap(&mut f, &mut g);
        }
        while !g.is_zero() {
            let r = f.pseudo_rem(&g).primitive();
            f = g;
            g = r;
        }
        f.mul_scalar(&cont).positive_leading()
    }

    fn positive_leading(&self) -> Self {
        if self.is_zero() || !self.leading().is_negative() {
            self.clone()
        } else {
            UPoly { coeffs: self.coeffs.iter().map(|c| -c).collect() }
        }
    }

    fn pseudo_rem(&self, d: &Self) -> Self {
        let mut rem = self.clone();
        if rem.is_zero() || rem.degree() < d.degree() {
            return rem;
        }
        let lead = d.leading().clone();
        let steps = rem.degree() - d.degree() + 1;
        for _ in 0..steps {
            if rem.is_zero() || rem.degree() < d.degree() {
                break;
            }
            let k = rem.degree() - d.degree();
            let c = rem.leading().clone();
            rem = rem.mul_scalar(&lead).sub(&d.mul_scalar(&c).shift(k));
        }
        rem
    }
}

fn upoly_vec_content(v: &[UPoly]) -> UPoly {
    let mut g = UPoly::zero();
    for p in v {
        g = UPoly::gcd(&g, p);
        if g.coeffs.len() == 1 && g.coeffs[0].is_one() {
            break;
        }
    }
    g
}

/// Primitive PRS in Z[t][q] on vectors of t-polynomials (primitive in the
/// content sense on entry).
fn qpoly_gcd_primitive(a: Vec<UPoly>, b: Vec<UPoly>) -> Vec<UPoly> {
    fn deg(v: &[UPoly]) -> Option<usize> {
        v.iter().rposition(|p| !p.is_zero())
    }
    fn primitive_part(v: Vec<UPoly>) -> Vec<UPoly> {
        let c = upoly_vec_content(&v);
        if c.is_zero() {
            return v;
        }
        v.iter().map(|p| p.div_exact(&c).expect("content divides")).collect()
    }
    fn pseudo_rem_q(a: &[UPoly], b: &[UPoly]) -> Vec<UPoly> {
        let db = deg(b).expect("nonzero divisor");
        let lead_b = b[db].clone();
        let mut rem: Vec<UPoly> = a.to_vec();
        loop {
            let da = match deg(&rem) {
                Some(d) if d >= db => d,
                _ => return rem,
            };
            let c = rem[da].clone();
            // rem = lead_b * rem - c * q^(da-db) * b
            let mut next = vec![UPoly::zero(); da + 1];
            for (i, p) in rem.iter().take(da + 1).enumerate() {
                next[i] = p.mul(&lead_b);
            }
            for (j, p) in b.iter().take(db + 1).enumerate() {
                let idx = j + da - db;
                next[idx] = next[idx].sub(&p.mul(&c));
            }
            // the top entry cancels by construction
            next.pop();
            rem = next;
        }
    }

    let mut f = a;
    let mut g = b;
    if deg(&f) < deg(&g) {
        std::mem::swap(&mut f, &mut g);
    }
    while deg(&g).is_some() {
        let r = primitive_part(pseudo_rem_q(&f, &g));
        f = g;
        g = r;
    }
    primitive_part(f)
}

fn gcd_int(a: &BigInt, b: &BigInt) -> BigInt {
    num_integer::Integer::gcd(a, b)
}

/// An element of Q(q,t): numerator over denominator, fully reduced, with
/// the denominator's leading (lex) coefficient positive.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct QtRational {
    num: BivariatePoly,
    den: BivariatePoly,
}

impl QtRational {
    pub fn new(num: BivariatePoly, den: BivariatePoly) -> Result<Self, FieldError> {
        if den.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        Ok(Self::reduced(num, den))
    }

    fn reduced(num: BivariatePoly, den: BivariatePoly) -> Self {
        debug_assert!(!den.is_zero());
        if num.is_zero() {
            return QtRational { num, den: BivariatePoly::one() };
        }
        if den.is_one() {
            return QtRational { num, den };
        }
        let g = BivariatePoly::gcd(&num, &den);
        let mut num = num.div_exact(&g).expect("gcd divides numerator");
        let mut den = den.div_exact(&g).expect("gcd divides denominator");
        if den.leading().map(|(_, c)| c.is_negative()).unwrap_or(false) {
            num = num.neg();
            den = den.neg();
        }
        QtRational { num, den }
    }

    pub fn from_poly(p: BivariatePoly) -> Self {
        QtRational { num: p, den: BivariatePoly::one() }
    }

    pub fn from_int(c: i64) -> Self {
        Self::from_poly(BivariatePoly::constant(BigInt::from(c)))
    }

    pub fn zero() -> Self {
        Self::from_int(0)
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn q() -> Self {
        Self::from_poly(BivariatePoly::var_q())
    }

    pub fn t() -> Self {
        Self::from_poly(BivariatePoly::var_t())
    }

    /// q^a t^b with integer (possibly negative) exponents.
    pub fn monomial_pow(a: i64, b: i64) -> Self {
        let num = BivariatePoly::monomial(a.max(0) as u32, b.max(0) as u32, BigInt::one());
        let den = BivariatePoly::monomial((-a).max(0) as u32, (-b).max(0) as u32, BigInt::one());
        QtRational { num, den }
    }

    /// 1 - q^a t^b as a field element.
    pub fn one_minus_q_t(a: u32, b: u32) -> Self {
        Self::from_poly(BivariatePoly::one_minus_q_t(a, b))
    }

    pub fn numerator(&self) -> &BivariatePoly {
        &self.num
    }

    pub fn denominator(&self) -> &BivariatePoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    /// True when the reduced form lies in Z[q,t].
    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn add(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        if self.den == other.den {
            return Self::reduced(self.num.add(&other.num), self.den.clone());
        }
        let num = self.num.mul(&other.den).add(&other.num.mul(&self.den));
        let den = self.den.mul(&other.den);
        Self::reduced(num, den)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        QtRational { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        // Cross-reduce before multiplying to keep intermediates small.
        let g1 = BivariatePoly::gcd(&self.num, &other.den);
        let g2 = BivariatePoly::gcd(&other.num, &self.den);
        let n1 = self.num.div_exact(&g1).unwrap();
        let d2 = other.den.div_exact(&g1).unwrap();
        let n2 = other.num.div_exact(&g2).unwrap();
        let d1 = self.den.div_exact(&g2).unwrap();
        Self::reduced(n1.mul(&n2), d1.mul(&d2))
    }

    pub fn div(&self, other: &Self) -> Result<Self, FieldError> {
        Ok(self.mul(&other.inverse()?))
    }

    pub fn inverse(&self) -> Result<Self, FieldError> {
        if self.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        Ok(Self::reduced(self.den.clone(), self.num.clone()))
    }

    pub fn pow(&self, e: i64) -> Result<Self, FieldError> {
        let base = if e < 0 { self.inverse()? } else { self.clone() };
        let mut out = Self::one();
        for _ in 0..e.unsigned_abs() {
            out = out.mul(&base);
        }
        Ok(out)
    }

    /// Substitute q -> 1/q, t -> 1/t (a field automorphism).
    pub fn invert_parameters(&self) -> Self {
        let aq = self.num.degree_q().max(self.den.degree_q());
        let at = self.num.degree_t().max(self.den.degree_t());
        let num = self.num.reverse_degrees(aq, at);
        let den = self.den.reverse_degrees(aq, at);
        Self::reduced(num, den)
    }
}

// ---------------------------------------------------------------------------
// Canonical text form and parser
// ---------------------------------------------------------------------------

impl fmt::Display for BivariatePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", poly_to_string(self))
    }
}

impl fmt::Display for QtRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", poly_to_string(&self.num))
        } else {
            write!(f, "({})/({})", poly_to_string(&self.num), poly_to_string(&self.den))
        }
    }
}

fn poly_to_string(p: &BivariatePoly) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (i, (&(a, b), c)) in p.terms().enumerate() {
        let neg = c.is_negative();
        let abs = c.abs();
        if i == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let mut factors: Vec<String> = Vec::new();
        if !abs.is_one() || (a == 0 && b == 0) {
            factors.push(abs.to_string());
        }
        if a == 1 {
            factors.push("q".to_string());
        } else if a > 1 {
            factors.push(format!("q^{}", a));
        }
        if b == 1 {
            factors.push("t".to_string());
        } else if b > 1 {
            factors.push(format!("t^{}", b));
        }
        out.push_str(&factors.join("*"));
    }
    out
}

impl std::str::FromStr for QtRational {
    type Err = FieldError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Parser::new(s).parse()
    }
}

struct Parser<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
}

impl<'a> Parser<'a> {
    fn new(s: &'a str) -> Self {
        Parser { chars: s.chars().peekable() }
    }

    fn parse(mut self) -> Result<QtRational, FieldError> {
        let v = self.expr()?;
        self.skip_ws();
        if self.chars.peek().is_some() {
            return Err(FieldError::Parse("trailing input".into()));
        }
        Ok(v)
    }

    fn skip_ws(&mut self) {
        while matches!(self.chars.peek(), Some(c) if c.is_whitespace()) {
            self.chars.next();
        }
    }

    fn expr(&mut self) -> Result<QtRational, FieldError> {
        self.skip_ws();
        let mut neg = false;
        if matches!(self.chars.peek(), Some('-')) {
            self.chars.next();
            neg = true;
        } else if matches!(self.chars.peek(), Some('+')) {
            self.chars.next();
        }
        let mut acc = self.term()?;
        if neg {
            acc = acc.neg();
        }
        loop {
            self.skip_ws();
            match self.chars.peek() {
                Some('+') => {
                    self.chars.next();
                    let t = self.term()?;
                    acc = acc.add(&t);
                }
                Some('-') => {
                    self.chars.next();
                    let t = self.term()?;
                    acc = acc.sub(&t);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<QtRational, FieldError> {
        let mut acc = self.factor()?;
        loop {
            self.skip_ws();
            match self.chars.peek() {
                Some('*') => {
                    self.chars.next();
                    let f = self.factor()?;
                    acc = acc.mul(&f);
                }
                Some('/') => {
                    self.chars.next();
                    let f = self.factor()?;
                    acc = acc.div(&f)?;
                }
                // juxtaposition like "2q" or "q t" is not part of the grammar
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<QtRational, FieldError> {
        self.skip_ws();
        let base = match self.chars.peek() {
            Some('(') => {
                self.chars.next();
                let inner = self.expr()?;
                self.skip_ws();
                if self.chars.next() != Some(')') {
                    return Err(FieldError::Parse("expected ')'".into()));
                }
                inner
            }
            Some('q') => {
                self.chars.next();
                QtRational::q()
            }
            Some('t') => {
                self.chars.next();
                QtRational::t()
            }
            Some('-') => {
                self.chars.next();
                return Ok(self.factor()?.neg());
            }
            Some(c) if c.is_ascii_digit() => {
                let mut digits = String::new();
                while matches!(self.chars.peek(), Some(c) if c.is_ascii_digit()) {
                    digits.push(self.chars.next().unwrap());
                }
                let n: BigInt = digits.parse().map_err(|_| FieldError::Parse("bad integer".into()))?;
                QtRational::from_poly(BivariatePoly::constant(n))
            }
            other => {
                return Err(FieldError::Parse(format!("unexpected character {:?}", other)));
            }
        };
        self.skip_ws();
        if matches!(self.chars.peek(), Some('^')) {
            self.chars.next();
            self.skip_ws();
            let mut neg = false;
            if matches!(self.chars.peek(), Some('-')) {
                self.chars.next();
                neg = true;
            }
            let mut digits = String::new();
            while matches!(self.chars.peek(), Some(c) if c.is_ascii_digit()) {
                digits.push(self.chars.next().unwrap());
            }
            let e: i64 = digits.parse().map_err(|_| FieldError::Parse("bad exponent".into()))?;
            let e = if neg { -e } else { e };
            return base.pow(e);
        }
        Ok(base)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(s: &str) -> QtRational {
        s.parse().unwrap()
    }

    #[test]
    fn inverse_pair_cancels() {
        let a = r("(1 - q*t)/(1 - t)");
        let b = r("(1 - t)/(1 - q*t)");
        assert!(a.mul(&b).is_one());
    }

    #[test]
    fn reduction_examples() {
        // oracle: bivariate gcd + long division
        assert_eq!(r("(1 - q^2*t^2)/(1 - q*t)"), r("1 + q*t"));
        assert_eq!(
            QtRational::new(
                BivariatePoly::one_minus_q_t(2, 4),
                BivariatePoly::one_minus_q_t(1, 2)
            )
            .unwrap(),
            r("1 + q*t^2")
        );
        // content extraction: (q - q^2 t)/q = 1 - q t
        let num = r("q - q^2*t");
        let got = num.div(&r("q")).unwrap();
        assert_eq!(got, r("1 - q*t"));
    }

    #[test]
    fn fraction_arithmetic_example() {
        // t - (t-1)/(1-q) = (1 - q*t)/(1 - q)
        let got = r("t").sub(&r("(t - 1)/(1 - q)"));
        assert_eq!(got, r("(1 - q*t)/(1 - q)"));
    }

    #[test]
    fn reduce_invariant_under_common_factor() {
        let n = BivariatePoly::one_minus_q_t(1, 1);
        let d = BivariatePoly::one_minus_q_t(0, 1);
        let c = BivariatePoly::one_minus_q_t(3, 2).mul_scalar(&BigInt::from(6));
        let plain = QtRational::new(n.clone(), d.clone()).unwrap();
        let scaled = QtRational::new(n.mul(&c), d.mul(&c)).unwrap();
        assert_eq!(plain, scaled);
    }

    #[test]
    fn zero_numerator_canonical() {
        let z = QtRational::new(BivariatePoly::zero(), BivariatePoly::one_minus_q_t(1, 0)).unwrap();
        assert_eq!(z, QtRational::zero());
        assert!(QtRational::new(BivariatePoly::one(), BivariatePoly::zero()).is_err());
    }

    #[test]
    fn display_round_trip() {
        for s in [
            "0",
            "1",
            "-1",
            "1 + q*t",
            "(1 - q*t^2)/(1 - t)",
            "(2*q^2 - 3*t)/(1 - q*t^3)",
            "q^2*t",
        ] {
            let v = r(s);
            let shown = v.to_string();
            assert_eq!(r(&shown), v, "round trip through {:?}", shown);
        }
    }

    #[test]
    fn parameter_inversion_is_involutive() {
        let v = r("(1 - q^2*t)/(2 - t^3)");
        assert_eq!(v.invert_parameters().invert_parameters(), v);
        // q -> 1/q on the monomial q gives 1/q
        assert_eq!(QtRational::q().invert_parameters(), QtRational::monomial_pow(-1, 0));
    }

    #[test]
    fn field_axioms_on_samples() {
        let samples: Vec<QtRational> = [
            "1 - q*t",
            "(1 - t)/(1 - q*t)",
            "q^3",
            "(t - 1)/(1 - q)",
            "2 + q + t",
            "(1 - q*t^4)/(1 - q*t^3)",
        ]
        .iter()
        .map(|s| r(s))
        .collect();
        for a in &samples {
            for b in &samples {
                for c in &samples {
                    let left = a.mul(&b.add(c));
                    let right = a.mul(b).add(&a.mul(c));
                    assert_eq!(left, right);
                    assert_eq!(a.mul(b).mul(c), a.mul(&b.mul(c)));
                }
                assert_eq!(a.add(b), b.add(a));
            }
            if !a.is_zero() {
                assert!(a.mul(&a.inverse().unwrap()).is_one());
            }
            assert_eq!(a.add(&QtRational::zero()), *a);
            assert_eq!(a.mul(&QtRational::one()), *a);
        }
    }

    #[test]
    fn monomial_pow_negative() {
        let v = QtRational::monomial_pow(-2, 3);
        assert_eq!(v, r("t^3/q^2"));
        assert_eq!(v.to_string(), "(t^3)/(q^2)");
    }
}
