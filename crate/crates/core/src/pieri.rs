//! Pieri rules: the expansion of e_1[x_1..x_{n-k}] P_(lambda|gamma) and of
//! x_j P_(lambda|gamma) (j in the nonsymmetric block) in the P basis.
//!
//! Each support element (mu|eta) carries a unique certificate: the
//! distinguished entry v removed from lambda, the index set I_1 in the
//! nonsymmetric block along which column heights cycle, the raised height
//! H = mu~_h, and the special arrangements lambda~ and mu~ used at the
//! evaluation point. Concretely (symmetric block written first):
//!
//!   eta_i = gamma_i off I_1;  eta_{t_1} = v;  eta_{t_u} = gamma_{t_{u-1}};
//!   H = gamma_{t_r} + 1 (or v + 1 when I_1 is empty);
//!   mu~ = (non-H entries weakly increasing, then all H columns);
//!   lambda~ = (mu~_1 .. mu~_{n-k-1}, v);
//!
//! maximality = no skipped equal column height along any hop. Coefficients
//! come out of three closed routes (raw, integral-form, cancelled) and are
//! checked against two oracles: a literal branch-by-branch evaluation of
//! the interpolation operator expansion, and an exact linear solve in the
//! P basis.

use crate::interpolation::{compositions_of, estar, estar_principal_row, spectral_row, spectral_z};
use crate::linalg::expand_in_family;
use crate::multipoly::SparsePolynomial;
use crate::partial::{f_closed, j_box_product, j_poly, p_poly};
use crate::qtfield::QtRational;
use crate::shapes::{arm, arm_tilde, leg, orbit_and_order, Composition, SplitComposition};
use crate::{Ctx, Error};
use serde::Serialize;
use std::collections::BTreeMap;

/// One support element of a Pieri expansion with its certificate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PieriTerm {
    pub source: SplitComposition,
    pub target: SplitComposition,
    /// Positions in [1,k] along which the nonsymmetric columns cycle.
    pub i1: Vec<usize>,
    pub lambda_tilde: Composition,
    pub mu_tilde: Composition,
    /// Number of extra columns sharing the raised height.
    pub m: usize,
    /// First position of the raised height inside mu_tilde.
    pub h: usize,
    /// The distinguished entry removed from lambda.
    pub removed: u32,
    /// The raised column height.
    pub raised: u32,
}

impl PieriTerm {
    pub fn n(&self) -> usize {
        self.source.n()
    }

    pub fn k(&self) -> usize {
        self.source.k()
    }

    fn eta(&self) -> &Composition {
        &self.target.gamma
    }

    /// Spectral vector of (lambda~|gamma).
    fn lt_bar(&self) -> Vec<QtRational> {
        spectral_row(&self.lambda_tilde.concat(&self.source.gamma))
    }

    /// Spectral vector of (mu~|eta).
    fn mt_bar(&self) -> Vec<QtRational> {
        spectral_row(&self.mu_tilde.concat(self.eta()))
    }
}

fn a_factor(x: &QtRational, y: &QtRational) -> QtRational {
    // (t-1) x / (x - y)
    let num = QtRational::t().sub(&QtRational::one()).mul(x);
    num.div(&x.sub(y)).expect("distinct spectral values")
}

fn b_factor(x: &QtRational, y: &QtRational) -> QtRational {
    // (x - t y)/(x - y)
    let num = x.sub(&QtRational::t().mul(y));
    num.div(&x.sub(y)).expect("distinct spectral values")
}

fn b_factor_flipped(x: &QtRational, y: &QtRational) -> QtRational {
    // (t x - y)/(x - y)
    let num = QtRational::t().mul(x).sub(y);
    num.div(&x.sub(y)).expect("distinct spectral values")
}

/// Geometric sum 1 + t + ... + t^m.
fn t_geometric(m: usize) -> QtRational {
    let mut acc = QtRational::zero();
    for i in 0..=m {
        acc = acc.add(&QtRational::monomial_pow(0, i as i64));
    }
    acc
}

// ---------------------------------------------------------------------------
// Support enumeration for e_1
// ---------------------------------------------------------------------------

fn subsets_of(k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::with_capacity(1 << k);
    for mask in 0u32..(1 << k) {
        let mut s = Vec::new();
        for i in 1..=k {
            if mask & (1 << (i - 1)) != 0 {
                s.push(i);
            }
        }
        out.push(s);
    }
    out
}

fn build_mu_tilde(mu_multiset: &[u32], raised: u32) -> (Composition, usize, usize) {
    let mut rest: Vec<u32> = mu_multiset.iter().cloned().filter(|&x| x != raised).collect();
    rest.sort_unstable();
    let count = mu_multiset.len() - rest.len();
    assert!(count >= 1, "raised height missing from target");
    let h = rest.len() + 1;
    let m = count - 1;
    rest.extend(std::iter::repeat(raised).take(count));
    (Composition::new(rest), m, h)
}

/// All elements of the Pieri support for e_1[x_1..x_{n-k}] P_(lambda|gamma),
/// each with its unique certificate, sorted by target.
pub fn support_set(split: &SplitComposition) -> Result<Vec<PieriTerm>, Error> {
    let n = split.n();
    let k = split.k();
    if k == 0 || k >= n {
        return Err(Error::Input(format!(
            "Pieri expansion needs 0 < k < n; got n={}, k={}",
            n, k
        )));
    }
    if !split.lambda.is_weakly_decreasing() {
        return Err(Error::Input(format!(
            "symmetric part {} must be weakly decreasing",
            split.lambda
        )));
    }
    let gamma = &split.gamma.0;
    let mut values: Vec<u32> = split.lambda.0.clone();
    values.sort_unstable();
    values.dedup();

    let mut out: Vec<PieriTerm> = Vec::new();
    for &v in &values {
        'i1: for i1 in subsets_of(k) {
            // maximality: no skipped equal column along any hop
            if i1.is_empty() {
                if gamma.iter().any(|&g| g == v) {
                    continue;
                }
            } else {
                let t1 = i1[0];
                let tr = *i1.last().unwrap();
                for j in 1..t1 {
                    if gamma[j - 1] == v {
                        continue 'i1;
                    }
                }
                for w in i1.windows(2) {
                    let (lo, hi) = (w[0], w[1]);
                    for j in (lo + 1)..hi {
                        if gamma[j - 1] == gamma[lo - 1] {
                            continue 'i1;
                        }
                    }
                }
                for j in (tr + 1)..=k {
                    if gamma[j - 1] == gamma[tr - 1] {
                        continue 'i1;
                    }
                }
            }

            // eta: values hop rightward along I_1, v enters at t_1
            let mut eta = gamma.clone();
            for (idx, &t) in i1.iter().enumerate() {
                eta[t - 1] = if idx == 0 { v } else { gamma[i1[idx - 1] - 1] };
            }
            let raised = if i1.is_empty() { v + 1 } else { gamma[*i1.last().unwrap() - 1] + 1 };

            // mu: lambda with one copy of v traded for the raised height
            let mut mu: Vec<u32> = split.lambda.0.clone();
            let pos = mu.iter().position(|&x| x == v).expect("v is an entry of lambda");
            mu.remove(pos);
            mu.push(raised);
            let (mu_tilde, m, h) = build_mu_tilde(&mu, raised);
            mu.sort_unstable_by(|a, b| b.cmp(a));

            let mut lt = mu_tilde.0[..(n - k - 1)].to_vec();
            lt.push(v);
            let lambda_tilde = Composition::new(lt);
            debug_assert_eq!(
                lambda_tilde.sorted_increasing(),
                split.lambda.sorted_increasing()
            );

            out.push(PieriTerm {
                source: split.clone(),
                target: SplitComposition::new(Composition::new(mu), Composition::new(eta)),
                i1,
                lambda_tilde,
                mu_tilde,
                m,
                h,
                removed: v,
                raised,
            });
        }
    }
    out.sort_by(|a, b| a.target.cmp(&b.target).then_with(|| a.i1.cmp(&b.i1)));
    for w in out.windows(2) {
        if w[0].target == w[1].target {
            return Err(Error::TheoryViolation(format!(
                "two certificates for the Pieri target {}",
                w[0].target
            )));
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Coefficient factors
// ---------------------------------------------------------------------------

/// p_{I_1}: the rational factor collected along the nonsymmetric hops.
pub fn p_i1(term: &PieriTerm) -> QtRational {
    let k = term.k();
    let n = term.n();
    let mt = term.mt_bar();
    let eta_bar = |j: usize| mt[n - k + j - 1].clone();
    let q_inv_mu = mt[term.h - 1].mul(&QtRational::monomial_pow(-1, 0));

    let mut acc = QtRational::one();
    if term.i1.is_empty() {
        for j in 1..=k {
            acc = acc.mul(&b_factor(&q_inv_mu, &eta_bar(j)));
        }
        return acc;
    }
    let tr = *term.i1.last().unwrap();
    acc = acc.mul(&a_factor(&q_inv_mu, &eta_bar(tr)));
    for w in term.i1.windows(2) {
        acc = acc.mul(&a_factor(&eta_bar(w[1]), &eta_bar(w[0])));
    }
    for j in (tr + 1)..=k {
        acc = acc.mul(&b_factor(&q_inv_mu, &eta_bar(j)));
    }
    let mut prev = 0usize;
    for &t in &term.i1 {
        for j in (prev + 1)..t {
            acc = acc.mul(&b_factor(&eta_bar(t), &eta_bar(j)));
        }
        prev = t;
    }
    acc
}

/// The cancelled variant p'_{I_1}: every b factor flips t onto the other leg.
pub fn p_prime_i1(term: &PieriTerm) -> QtRational {
    let k = term.k();
    let n = term.n();
    let mt = term.mt_bar();
    let eta_bar = |j: usize| mt[n - k + j - 1].clone();
    let q_inv_mu = mt[term.h - 1].mul(&QtRational::monomial_pow(-1, 0));

    let mut acc = QtRational::one();
    if term.i1.is_empty() {
        for j in 1..=k {
            acc = acc.mul(&b_factor_flipped(&q_inv_mu, &eta_bar(j)));
        }
        return acc;
    }
    let tr = *term.i1.last().unwrap();
    acc = acc.mul(&a_factor(&q_inv_mu, &eta_bar(tr)));
    for w in term.i1.windows(2) {
        acc = acc.mul(&a_factor(&eta_bar(w[1]), &eta_bar(w[0])));
    }
    for j in (tr + 1)..=k {
        acc = acc.mul(&b_factor_flipped(&q_inv_mu, &eta_bar(j)));
    }
    let mut prev = 0usize;
    for &t_pos in &term.i1 {
        for j in (prev + 1)..t_pos {
            acc = acc.mul(&b_factor_flipped(&eta_bar(t_pos), &eta_bar(j)));
        }
        prev = t_pos;
    }
    acc
}

/// p_2: geometric factor, boundary eigenvalue, and the symmetric-block tail.
pub fn p_2(term: &PieriTerm) -> QtRational {
    let n = term.n();
    let mt = term.mt_bar();
    let mu_h = mt[term.h - 1].clone();
    let mut acc = t_geometric(term.m);
    acc = acc.mul(&mu_h.sub(&QtRational::monomial_pow(0, -((n as i64) - 1))));
    for j in 1..term.h {
        let num = mu_h.sub(&QtRational::t().mul(&mt[j - 1]));
        let den = mu_h.sub(&mt[j - 1]);
        acc = acc.mul(&num.div(&den).expect("distinct spectral values"));
    }
    acc
}

/// The coefficient ratio f_{lambda~}/f_{mu~} by the closed formula.
pub fn f_ratio(term: &PieriTerm) -> Result<QtRational, Error> {
    let num = f_closed(&term.lambda_tilde, &term.source)?;
    let den = f_closed(&term.mu_tilde, &term.target)?;
    num.div(&den).map_err(Error::Field)
}

/// The internally cancelled form of the same ratio: one row of boxes on
/// each side.
pub fn f_ratio_cancelled(term: &PieriTerm) -> QtRational {
    let lam_min = term.source.lambda.sorted_increasing();
    let lam_min_split = lam_min.concat(&term.source.gamma);
    let v = term.removed;
    let t = QtRational::t();
    let mut acc = QtRational::one();
    // row v+1 of the symmetric part, statistics in (lambda^-|gamma)
    for (i, &ht) in lam_min.0.iter().enumerate() {
        if ht >= v + 1 {
            let l = leg(&lam_min_split, i + 1, v + 1);
            let a = arm(&lam_min_split, i + 1, v + 1);
            let num = t.sub(&QtRational::monomial_pow(l as i64 + 1, a as i64 + 1));
            let den = QtRational::one_minus_q_t(l + 1, a + 1);
            acc = acc.mul(&num.div(&den).expect("box factor nonzero"));
        }
    }
    // divided by row H+1 of mu~, statistics in (mu~|eta), bare arm exponent
    let mu_split = term.mu_tilde.concat(term.eta());
    let top = term.raised;
    for (i, &ht) in term.mu_tilde.0.iter().enumerate() {
        if ht >= top + 1 {
            let l = leg(&mu_split, i + 1, top + 1);
            let a = arm(&mu_split, i + 1, top + 1);
            let num = t.sub(&QtRational::monomial_pow(l as i64 + 1, a as i64));
            let den = QtRational::one_minus_q_t(l + 1, a);
            acc = acc.mul(&den.div(&num).expect("box factor nonzero"));
        }
    }
    acc
}

/// Ratio of principal interpolation values for the tilde arrangements.
pub fn estar_ratio(term: &PieriTerm) -> Result<QtRational, Error> {
    let num = estar_principal_row(&term.lambda_tilde.concat(&term.source.gamma));
    let den = estar_principal_row(&term.mu_tilde.concat(term.eta()));
    num.div(&den).map_err(Error::Field)
}

/// The raw Pieri coefficient C in the P basis.
pub fn coeff_c(term: &PieriTerm) -> Result<QtRational, Error> {
    let nk = term.n() - term.k();
    let boundary = term.lt_bar()[nk - 1].clone();
    Ok(f_ratio(term)?
        .mul(&boundary)
        .mul(&p_i1(term))
        .mul(&p_2(term))
        .mul(&estar_ratio(term)?))
}

/// The integral-form coefficient: C rescaled by j_source/j_target.
pub fn coeff_j(term: &PieriTerm) -> Result<QtRational, Error> {
    let jr = j_box_product(&term.source)
        .div(&j_box_product(&term.target))
        .map_err(Error::Field)?;
    Ok(coeff_c(term)?.mul(&jr))
}

/// j_2: the moved column of the removed entry, on a single diagram.
pub fn j_2(term: &PieriTerm) -> QtRational {
    let lam_min = term.source.lambda.sorted_increasing();
    let diag = lam_min.concat(&term.source.gamma);
    let v = term.removed;
    let col = (1..=lam_min.len())
        .rev()
        .find(|&i| lam_min.0[i - 1] == v)
        .expect("removed entry present");
    let mut acc = QtRational::one();
    for row in 1..=v {
        let l = leg(&diag, col, row);
        let a = arm_tilde(&diag, col, row);
        let mult = term.eta().multiplicity(row - 1) as u32;
        let num = QtRational::one_minus_q_t(l, a + 1);
        let den = QtRational::one_minus_q_t(l + 1, a + 1 + mult);
        acc = acc.mul(&num.div(&den).expect("box factor nonzero"));
    }
    acc
}

/// The fully cancelled integral-form coefficient.
pub fn coeff_a(term: &PieriTerm) -> Result<QtRational, Error> {
    let nk = term.n() - term.k();
    let lam_min = term.source.lambda.sorted_increasing();
    let lam_min_split = lam_min.concat(&term.source.gamma);
    let v = term.removed;
    let t = QtRational::t();
    let mut acc = QtRational::one();
    for (i, &ht) in lam_min.0.iter().enumerate() {
        if ht >= v + 1 {
            let l = leg(&lam_min_split, i + 1, v + 1);
            let a = arm(&lam_min_split, i + 1, v + 1);
            let num = t.sub(&QtRational::monomial_pow(l as i64 + 1, a as i64 + 1));
            let den = QtRational::one_minus_q_t(l + 1, a + 1);
            acc = acc.mul(&num.div(&den).expect("box factor nonzero"));
        }
    }
    acc = acc.mul(&j_2(term));
    acc = acc.mul(&p_prime_i1(term));
    acc = acc.div(&QtRational::one().sub(&t)).map_err(Error::Field)?;
    acc = acc.mul(&QtRational::monomial_pow(1 - term.raised as i64, 0));
    acc = acc.mul(&term.lt_bar()[nk - 1]);
    Ok(acc)
}

// ---------------------------------------------------------------------------
// Cancellation group factors
// ---------------------------------------------------------------------------

/// The box-group contributions to j_source/j_target and to the principal
/// value ratio; the two product identities reassemble both ratios exactly.
#[derive(Debug, Clone)]
pub struct GroupFactors {
    pub j1: QtRational,
    pub j2: QtRational,
    pub j3: QtRational,
    pub j4: QtRational,
    pub j5: QtRational,
    pub e1: QtRational,
    pub e3: QtRational,
    pub e4: QtRational,
    pub e5: QtRational,
}

/// Adjacent-pass events along the cycling: (moving value, gap position,
/// origin gamma position or None for the removed symmetric column,
/// destination gamma position).
fn pass_events(term: &PieriTerm) -> Vec<(u32, usize, Option<usize>, usize)> {
    let gamma = &term.source.gamma.0;
    let mut events = Vec::new();
    if term.i1.is_empty() {
        return events;
    }
    let t1 = term.i1[0];
    for p in 1..t1 {
        events.push((term.removed, p, None, t1));
    }
    for w in term.i1.windows(2) {
        let (from, to) = (w[0], w[1]);
        for p in (from + 1)..to {
            events.push((gamma[from - 1], p, Some(from), to));
        }
    }
    events
}

/// 1 - q^{-(leg+1)} t^{-arm}: the reciprocal-power box factor of the
/// principal value formula.
fn inv_box(diag: &Composition, col: usize, row: u32) -> QtRational {
    let l = leg(diag, col, row) as i64;
    let a = arm(diag, col, row) as i64;
    QtRational::one().sub(&QtRational::monomial_pow(-(l + 1), -a))
}

pub fn group_factors(term: &PieriTerm) -> Result<GroupFactors, Error> {
    let k = term.k();
    let nk = term.n() - k;
    let gamma = &term.source.gamma.0;
    let eta = &term.eta().0;
    let h = term.h;
    let top = term.raised;

    let lam_min = term.source.lambda.sorted_increasing();
    let mu_min = term.target.lambda.sorted_increasing();
    let lam_min_split = lam_min.concat(&term.source.gamma);
    let mu_min_split = mu_min.concat(term.eta());
    let lam_til_split = term.lambda_tilde.concat(&term.source.gamma);
    let mu_til_split = term.mu_tilde.concat(term.eta());

    // group 1: row-H boxes of the symmetric part of (mu^-|eta), skipping
    // the leftmost column of height exactly H (the newly grown one).
    let mut j1 = QtRational::one();
    {
        let new_col = (1..=nk)
            .find(|&i| mu_min.0[i - 1] == top)
            .expect("raised height present");
        for i in 1..=nk {
            if mu_min.0[i - 1] >= top && i != new_col {
                let l = leg(&mu_min_split, i, top);
                let a = arm_tilde(&mu_min_split, i, top);
                let num = QtRational::one_minus_q_t(l, a);
                let den = QtRational::one_minus_q_t(l, a + 1);
                j1 = j1.mul(&num.div(&den).map_err(Error::Field)?);
            }
        }
    }

    let j2 = j_2(term);

    // group 3: pass events away from the raised column; minus diagrams for
    // the j side, tilde diagrams for the principal-value side.
    let mut j3 = QtRational::one();
    let mut e3 = QtRational::one();
    {
        let iv_min = (1..=nk)
            .rev()
            .find(|&i| lam_min.0[i - 1] == term.removed)
            .expect("removed entry present");
        for (value, p, origin, dest) in pass_events(term) {
            let blocker = gamma[p - 1];
            if value > blocker {
                // the changed box rides in the moving column
                let row = blocker + 1;
                let (jn_col, en_col) = match origin {
                    None => (iv_min, nk),
                    Some(from) => (nk + from, nk + from),
                };
                let jd_col = nk + dest;
                let num = QtRational::one_minus_q_t(
                    leg(&lam_min_split, jn_col, row) + 1,
                    arm(&lam_min_split, jn_col, row) + 1,
                );
                let den = QtRational::one_minus_q_t(
                    leg(&mu_min_split, jd_col, row) + 1,
                    arm(&mu_min_split, jd_col, row) + 1,
                );
                j3 = j3.mul(&num.div(&den).map_err(Error::Field)?);
                let num = inv_box(&lam_til_split, en_col, row);
                let den = inv_box(&mu_til_split, jd_col, row);
                e3 = e3.mul(&num.div(&den).map_err(Error::Field)?);
            } else {
                // the changed box sits in the passed column
                let row = value + 1;
                let col = nk + p;
                let num = QtRational::one_minus_q_t(
                    leg(&lam_min_split, col, row) + 1,
                    arm(&lam_min_split, col, row) + 1,
                );
                let den = QtRational::one_minus_q_t(
                    leg(&mu_min_split, col, row) + 1,
                    arm(&mu_min_split, col, row) + 1,
                );
                j3 = j3.mul(&num.div(&den).map_err(Error::Field)?);
                let num = inv_box(&lam_til_split, col, row);
                let den = inv_box(&mu_til_split, col, row);
                e3 = e3.mul(&num.div(&den).map_err(Error::Field)?);
            }
        }
    }

    // group 4: row-H boxes of nonsymmetric columns right of t_r.
    let mut j4 = QtRational::one();
    let mut e4 = QtRational::one();
    {
        let tr = term.i1.last().cloned().unwrap_or(0);
        for p in (tr + 1)..=k {
            if eta[p - 1] >= top {
                let col = nk + p;
                let l = leg(&mu_til_split, col, top);
                let a = arm(&mu_til_split, col, top);
                let num = QtRational::one_minus_q_t(l + 1, a);
                let den = QtRational::one_minus_q_t(l + 1, a + 1);
                j4 = j4.mul(&num.div(&den).map_err(Error::Field)?);
                let num = QtRational::one()
                    .sub(&QtRational::monomial_pow(-(l as i64 + 1), -(a as i64 - 1)));
                let den = QtRational::one()
                    .sub(&QtRational::monomial_pow(-(l as i64 + 1), -(a as i64)));
                e4 = e4.mul(&num.div(&den).map_err(Error::Field)?);
            }
        }
    }

    // group 5: the raised column itself, with multiplicity shifts from
    // equal-height eta columns right of t_r.
    let mut j5 = QtRational::one()
        .div(&QtRational::one().sub(&QtRational::t()))
        .map_err(Error::Field)?;
    let a_top = arm(&mu_til_split, h, top);
    let mut e5 = QtRational::one()
        .div(&QtRational::one().sub(&QtRational::monomial_pow(-1, -(a_top as i64))))
        .map_err(Error::Field)?;
    {
        let tr = term.i1.last().cloned().unwrap_or(0);
        let g = |level: u32| -> u32 {
            ((tr + 1)..=k).filter(|&p| eta[p - 1] == level).count() as u32
        };
        for row in 1..top {
            let l = leg(&mu_til_split, h, row);
            let at = arm_tilde(&mu_til_split, h, row);
            let a = arm(&mu_til_split, h, row);
            let gv = g(row - 1);
            let num = QtRational::one_minus_q_t(l, at + 1 + gv);
            let den = QtRational::one_minus_q_t(l, at + 1);
            j5 = j5.mul(&num.div(&den).map_err(Error::Field)?);
            let num = QtRational::one()
                .sub(&QtRational::monomial_pow(-(l as i64), -((at + gv) as i64)));
            let den = QtRational::one()
                .sub(&QtRational::monomial_pow(-(l as i64 + 1), -(a as i64)));
            e5 = e5.mul(&num.div(&den).map_err(Error::Field)?);
        }
    }

    // group 1 on the principal-value side: row H+1 of mu~.
    let mut e1 = QtRational::one();
    for (i, &ht) in term.mu_tilde.0.iter().enumerate() {
        if ht >= top + 1 {
            let l = leg(&mu_til_split, i + 1, top + 1);
            let a = arm(&mu_til_split, i + 1, top + 1);
            let num = QtRational::t().sub(&QtRational::monomial_pow(l as i64 + 1, a as i64));
            let den = QtRational::one_minus_q_t(l + 1, a);
            e1 = e1.mul(&num.div(&den).map_err(Error::Field)?);
        }
    }

    Ok(GroupFactors { j1, j2, j3, j4, j5, e1, e3, e4, e5 })
}

// ---------------------------------------------------------------------------
// The reversed-variable route for C, exercising the conventions dictionary.
// ---------------------------------------------------------------------------

pub fn coeff_c_reversed(term: &PieriTerm) -> Result<QtRational, Error> {
    let n = term.n();
    let k = term.k();
    let m = term.m;
    let lt_z = term.source.gamma.reversed().concat(&term.lambda_tilde.reversed());
    let mt_z = term.eta().reversed().concat(&term.mu_tilde.reversed());

    let f_num = f_closed(&term.lambda_tilde, &term.source)?;
    let f_den = f_closed(&term.mu_tilde, &term.target)?;

    let lt_bar = spectral_z(&lt_z);
    let mt_bar = spectral_z(&mt_z);
    let eta_bar = |j: usize| mt_bar[j - 1].clone();
    let mu_bar = |i: usize| mt_bar[k + i - 1].clone();

    let i1_z: Vec<usize> = {
        let mut v: Vec<usize> = term.i1.iter().map(|&t| k + 1 - t).collect();
        v.sort_unstable();
        v
    };
    let r = i1_z.len();
    let q_inv_mu = mu_bar(m + 1).mul(&QtRational::monomial_pow(-1, 0));

    let mut p1 = QtRational::one();
    if r == 0 {
        for j in 1..=k {
            p1 = p1.mul(&b_factor(&q_inv_mu, &eta_bar(j)));
        }
    } else {
        let t1 = i1_z[0];
        p1 = p1.mul(&a_factor(&q_inv_mu, &eta_bar(t1)));
        for w in i1_z.windows(2) {
            p1 = p1.mul(&a_factor(&eta_bar(w[0]), &eta_bar(w[1])));
        }
        for j in 1..t1 {
            p1 = p1.mul(&b_factor(&q_inv_mu, &eta_bar(j)));
        }
        for (idx, &t) in i1_z.iter().enumerate() {
            let hi = if idx + 1 < r { i1_z[idx + 1] } else { k + 1 };
            for j in (t + 1)..hi {
                p1 = p1.mul(&b_factor(&eta_bar(t), &eta_bar(j)));
            }
        }
    }

    let mut p2 = t_geometric(m);
    p2 = p2.mul(&mu_bar(m + 1).sub(&QtRational::monomial_pow(0, -((n as i64) - 1))));
    for j in (m + 2)..=(n - k) {
        let num = mu_bar(m + 1).sub(&QtRational::t().mul(&mu_bar(j)));
        let den = mu_bar(m + 1).sub(&mu_bar(j));
        p2 = p2.mul(&num.div(&den).map_err(Error::Field)?);
    }

    let boundary = lt_bar[k].clone();
    let estar_num = estar_principal_row(&lt_z.reversed());
    let estar_den = estar_principal_row(&mt_z.reversed());

    Ok(f_num
        .div(&f_den)
        .map_err(Error::Field)?
        .mul(&boundary)
        .mul(&p1)
        .mul(&p2)
        .mul(&estar_num.div(&estar_den).map_err(Error::Field)?))
}

// ---------------------------------------------------------------------------
// The z-convention index actions (the displayed forms), used to validate
// certificates against the spectral vectors.
// ---------------------------------------------------------------------------

/// d_I on a (gamma | nu) composition in reversed convention: the I_1
/// positions cycle leftward, the symmetric block shuffles along I_2, and
/// exactly one column height grows by one.
pub fn d_i_apply(
    nu_z: &Composition,
    k: usize,
    i1: &[usize],
    i2: &[usize],
    j: usize,
) -> Result<Composition, Error> {
    let n = nu_z.len();
    if j < k + 1
        || j > n
        || i1.iter().any(|&t| t < 1 || t > k)
        || i2.iter().any(|&v| v < j || v > n - 1)
    {
        return Err(Error::Input("malformed index data for the cycling action".into()));
    }
    let at = |m: usize| nu_z.0[m - 1];
    let r = i1.len();
    let s = i2.len();
    let mut out = vec![0u32; n];
    for m in 1..=k {
        out[m - 1] = if let Some(pos) = i1.iter().position(|&t| t == m) {
            if pos == r - 1 {
                at(k + 1)
            } else {
                at(i1[pos + 1])
            }
        } else {
            at(m)
        };
    }
    for m in (k + 1)..=n {
        let raise_here = (s == 0 && m == j) || (s > 0 && m == i2[s - 1] + 1);
        out[m - 1] = if raise_here {
            if r == 0 {
                at(k + 1) + 1
            } else {
                at(i1[0]) + 1
            }
        } else if m < j {
            at(m + 1)
        } else if m == j {
            // here s > 0, else the raise branch caught m == j
            at(i2[0] + 1)
        } else if let Some(pos) = i2.iter().position(|&v| v + 1 == m) {
            at(i2[pos + 1] + 1)
        } else {
            at(m)
        };
    }
    Ok(Composition::new(out))
}

/// The variable-side action of I_1 on a spectral vector.
pub fn i1_action(z: &[QtRational], k: usize, i1: &[usize]) -> Vec<QtRational> {
    let n = z.len();
    let r = i1.len();
    let mut out = Vec::with_capacity(n);
    for m in 1..=n {
        let v = if m <= k {
            if let Some(pos) = i1.iter().position(|&t| t == m) {
                if pos == 0 {
                    z[n - 1].mul(&QtRational::monomial_pow(-1, 0))
                } else {
                    z[i1[pos - 1] - 1].clone()
                }
            } else {
                z[m - 1].clone()
            }
        } else if m == k + 1 {
            if r == 0 {
                z[n - 1].mul(&QtRational::monomial_pow(-1, 0))
            } else {
                z[i1[r - 1] - 1].clone()
            }
        } else {
            z[m - 2].clone()
        };
        out.push(v);
    }
    out
}

/// The variable-side action of I_2 on a spectral vector.
pub fn i2_action(z: &[QtRational], k: usize, i2: &[usize], j: usize) -> Vec<QtRational> {
    let n = z.len();
    let s = i2.len();
    let mut out = Vec::with_capacity(n);
    for m in 1..=n {
        let v = if m <= k {
            z[m - 1].clone()
        } else if m == n {
            let src = if s == 0 { j } else { i2[s - 1] + 1 };
            z[src - 1].clone()
        } else if let Some(pos) = i2.iter().position(|&vv| vv + 1 == m) {
            if pos == 0 {
                z[j - 1].clone()
            } else {
                z[i2[pos - 1]].clone()
            }
        } else {
            z[m].clone()
        };
        out.push(v);
    }
    out
}

// ---------------------------------------------------------------------------
// Products and the linear-solve oracle
// ---------------------------------------------------------------------------

/// e_1[x_1..x_{n-k}] * P_(lambda|gamma).
pub fn e1_product(ctx: &Ctx, split: &SplitComposition) -> Result<SparsePolynomial, Error> {
    let p = p_poly(ctx, split)?;
    let mut acc = SparsePolynomial::zero(split.n());
    for i in 1..=(split.n() - split.k()) {
        acc = acc.add(&p.mul_var(i));
    }
    Ok(acc)
}

/// x_j * P_(lambda|gamma) for j in the nonsymmetric block.
pub fn xj_product(ctx: &Ctx, split: &SplitComposition, j: usize) -> Result<SparsePolynomial, Error> {
    if j <= split.n() - split.k() || j > split.n() {
        return Err(Error::Input(format!(
            "x_{} is not in the nonsymmetric block of (n,k)=({},{})",
            j,
            split.n(),
            split.k()
        )));
    }
    Ok(p_poly(ctx, split)?.mul_var(j))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PieriBasis {
    P,
    J,
}

/// All basis labels (mu|eta) at a fixed total degree.
pub fn basis_labels(n: usize, k: usize, d: u32) -> Vec<SplitComposition> {
    let mut out = Vec::new();
    for dl in 0..=d {
        for mu in compositions_of(n - k, dl) {
            if !mu.is_weakly_decreasing() {
                continue;
            }
            for eta in compositions_of(k, d - dl) {
                out.push(SplitComposition::new(mu.clone(), eta));
            }
        }
    }
    out.sort();
    out
}

/// Brute-force expansion of a block-symmetric homogeneous polynomial in the
/// P (or J) basis of its degree: the adjudicating oracle.
pub fn oracle_expand(
    ctx: &Ctx,
    f: &SparsePolynomial,
    n: usize,
    k: usize,
    basis: PieriBasis,
) -> Result<BTreeMap<SplitComposition, QtRational>, Error> {
    if !f.is_homogeneous() {
        return Err(Error::Input("oracle expansion wants a homogeneous input".into()));
    }
    let d = f.total_degree().unwrap_or(0);
    let labels = basis_labels(n, k, d);
    let family: Vec<SparsePolynomial> = labels
        .iter()
        .map(|s| match basis {
            PieriBasis::P => p_poly(ctx, s),
            PieriBasis::J => j_poly(ctx, s),
        })
        .collect::<Result<_, _>>()?;
    let coeffs = expand_in_family(f, &family)?;
    Ok(labels
        .into_iter()
        .zip(coeffs)
        .filter(|(_, c)| !c.is_zero())
        .collect())
}

// ---------------------------------------------------------------------------
// The operator-trace oracle: literal evaluation of the master expansion.
// ---------------------------------------------------------------------------

#[derive(Clone, Copy)]
enum TraceOp {
    Hecke(usize),
    BoundaryFactor,
    Rotate,
}

/// Evaluate one branch assignment of the operator chain at `point`: each
/// Hecke slot contributes its diagonal factor a or its swap factor b (the
/// latter swapping the running argument), the raising step multiplies by
/// (z_n - t^{1-n}) and rotates with a q-twist.
fn trace_branch(
    ops: &[TraceOp],
    take_diagonal: &dyn Fn(usize) -> bool,
    point: &[QtRational],
) -> Result<(QtRational, Vec<QtRational>), Error> {
    let n = point.len();
    let mut arg: Vec<QtRational> = point.to_vec();
    let mut acc = QtRational::one();
    let mut slot = 0usize;
    for op in ops {
        match *op {
            TraceOp::Hecke(i) => {
                let x = arg[i - 1].clone();
                let y = arg[i].clone();
                if x == y {
                    return Err(Error::TheoryViolation(
                        "coincident spectral values in branchwise evaluation".into(),
                    ));
                }
                if take_diagonal(slot) {
                    acc = acc.mul(&a_factor(&x, &y));
                } else {
                    acc = acc.mul(&b_factor(&x, &y));
                    arg.swap(i - 1, i);
                }
                slot += 1;
            }
            TraceOp::BoundaryFactor => {
                let shift = QtRational::monomial_pow(0, -((n as i64) - 1));
                acc = acc.mul(&arg[n - 1].sub(&shift));
            }
            TraceOp::Rotate => {
                let mut g = Vec::with_capacity(n);
                g.push(arg[n - 1].mul(&QtRational::monomial_pow(-1, 0)));
                g.extend_from_slice(&arg[..n - 1]);
                arg = g;
            }
        }
    }
    Ok((acc, arg))
}

/// Reconstruct the tilde arrangement of a target from source and target:
/// the raised height is the entry gained by the symmetric multiset, or read
/// off the gamma mismatch when the multisets agree.
pub fn tilde_of_target(
    source: &SplitComposition,
    target: &SplitComposition,
) -> Result<Composition, Error> {
    let mut src: Vec<u32> = source.lambda.0.clone();
    let mut raised = None;
    for &x in &target.lambda.0 {
        if let Some(pos) = src.iter().position(|&y| y == x) {
            src.remove(pos);
        } else if raised.is_none() {
            raised = Some(x);
        } else {
            return Err(Error::Input("target is not one raise away from source".into()));
        }
    }
    let raised = match raised {
        Some(r) => r,
        None => {
            let k = source.k();
            let pos = (1..=k)
                .rev()
                .find(|&i| source.gamma.0[i - 1] != target.gamma.0[i - 1])
                .ok_or_else(|| Error::Input("target equals source".into()))?;
            source.gamma.0[pos - 1] + 1
        }
    };
    let (mu_tilde, _, _) = build_mu_tilde(&target.lambda.0, raised);
    Ok(mu_tilde)
}

/// Literal evaluation of the whole operator expansion at the spectral point
/// of `target`, normalized by the surviving left-hand term: an oracle for
/// the e_1 Pieri coefficient that bypasses all support combinatorics. Every
/// branch whose final argument is not the source spectral vector gets its
/// interpolation polynomial evaluated literally, so no vanishing claim is
/// assumed.
pub fn trace_coeff_e1(
    ctx: &Ctx,
    source: &SplitComposition,
    target: &SplitComposition,
) -> Result<QtRational, Error> {
    let n = source.n();
    let k = source.k();
    let mu_tilde = tilde_of_target(source, target)?;
    let point_z = target.gamma.reversed().concat(&mu_tilde.reversed());
    let point = spectral_z(&point_z);

    let mut total = QtRational::zero();
    for entry in orbit_and_order(&source.lambda) {
        let nu = entry.comp.clone();
        let f_nu = f_closed(&nu, source)?;
        let src_z = source.gamma.reversed().concat(&nu.reversed());
        let src_bar = spectral_z(&src_z);
        let src_principal = estar_principal_row(&src_z.reversed());
        let prefactor = f_nu.mul(&src_bar[k].clone());
        for j in (k + 1)..=n {
            let mut ops: Vec<TraceOp> = Vec::new();
            let mut nslots = 0usize;
            for i in j..n {
                ops.push(TraceOp::Hecke(i));
                nslots += 1;
            }
            ops.push(TraceOp::BoundaryFactor);
            ops.push(TraceOp::Rotate);
            for i in 1..=k {
                ops.push(TraceOp::Hecke(i));
                nslots += 1;
            }
            for mask in 0u32..(1u32 << nslots) {
                let (factor, final_arg) =
                    trace_branch(&ops, &|slot| mask & (1 << slot) != 0, &point)?;
                if final_arg == src_bar {
                    total = total.add(&prefactor.mul(&factor).mul(&src_principal));
                } else {
                    let es = estar(ctx, &src_z)?;
                    let val = es.evaluate(&final_arg)?;
                    if !val.is_zero() {
                        total = total.add(&prefactor.mul(&factor).mul(&val));
                    }
                }
            }
        }
    }
    let f_mu = f_closed(&mu_tilde, target)?;
    let target_principal = estar_principal_row(&point_z.reversed());
    total.div(&f_mu.mul(&target_principal)).map_err(Error::Field)
}

// ---------------------------------------------------------------------------
// JSON view of a computed term
// ---------------------------------------------------------------------------

#[derive(Serialize)]
pub struct PieriTermRecord {
    pub target: TargetRecord,
    #[serde(rename = "I1")]
    pub i1: Vec<usize>,
    pub lambda_tilde: Vec<u32>,
    pub mu_tilde: Vec<u32>,
    pub m: usize,
    pub h: usize,
    #[serde(rename = "C")]
    pub c: String,
    #[serde(rename = "Jcoeff")]
    pub jcoeff: String,
    #[serde(rename = "A")]
    pub a: String,
}

#[derive(Serialize)]
pub struct TargetRecord {
    pub mu: Vec<u32>,
    pub eta: Vec<u32>,
}

pub fn term_record(term: &PieriTerm) -> Result<PieriTermRecord, Error> {
    Ok(PieriTermRecord {
        target: TargetRecord {
            mu: term.target.lambda.0.clone(),
            eta: term.target.gamma.0.clone(),
        },
        i1: term.i1.clone(),
        lambda_tilde: term.lambda_tilde.0.clone(),
        mu_tilde: term.mu_tilde.0.clone(),
        m: term.m,
        h: term.h,
        c: coeff_c(term)?.to_string(),
        jcoeff: coeff_j(term)?.to_string(),
        a: coeff_a(term)?.to_string(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(v: &[u32]) -> Composition {
        Composition::new(v.to_vec())
    }

    fn sc(l: &[u32], g: &[u32]) -> SplitComposition {
        SplitComposition::new(c(l), c(g))
    }

    fn qt(s: &str) -> QtRational {
        s.parse().unwrap()
    }

    #[test]
    fn support_small_example() {
        let terms = support_set(&sc(&[1], &[0])).unwrap();
        let targets: Vec<SplitComposition> = terms.iter().map(|t| t.target.clone()).collect();
        assert_eq!(targets, vec![sc(&[1], &[1]), sc(&[2], &[0])]);
        let t11 = &terms[0];
        assert_eq!(t11.i1, vec![1]);
        assert_eq!(t11.removed, 1);
        assert_eq!(t11.raised, 1);
        let t20 = &terms[1];
        assert!(t20.i1.is_empty());
        assert_eq!(t20.raised, 2);
    }

    #[test]
    fn support_rejects_bad_blocks() {
        assert!(support_set(&sc(&[1, 0], &[])).is_err());
        assert!(support_set(&sc(&[], &[1])).is_err());
    }

    #[test]
    fn golden_certificate() {
        let split = sc(&[3, 1, 1], &[1, 0, 1]);
        let terms = support_set(&split).unwrap();
        let term = terms
            .iter()
            .find(|t| t.target == sc(&[3, 2, 1], &[1, 0, 1]))
            .expect("golden target in support");
        assert_eq!(term.i1, vec![1, 3]);
        assert_eq!(term.lambda_tilde, c(&[1, 3, 1]));
        assert_eq!(term.mu_tilde, c(&[1, 3, 2]));
        assert_eq!(term.m, 0);
        assert_eq!(term.h, 3);
        assert_eq!(term.removed, 1);
        assert_eq!(term.raised, 2);
    }

    #[test]
    fn golden_factor_values() {
        let split = sc(&[3, 1, 1], &[1, 0, 1]);
        let terms = support_set(&split).unwrap();
        let term = terms
            .iter()
            .find(|t| t.target == sc(&[3, 2, 1], &[1, 0, 1]))
            .unwrap();
        assert_eq!(p_i1(term), qt("t^3*(1 - q*t^2)/(1 - q*t^3)"));
        assert_eq!(p_prime_i1(term), qt("t^2*(1 - q*t^4)/(1 - q*t^3)"));
        assert_eq!(j_2(term), qt("(1 - t^2)/(1 - q*t^3)"));
        assert_eq!(
            f_ratio(term).unwrap(),
            qt("((1 - q^2*t^2)*(1 - q*t))/((1 - q^2*t^3)*(1 - q))")
        );
        assert_eq!(f_ratio_cancelled(term), f_ratio(term).unwrap());
        let jr = j_box_product(&split)
            .div(&j_box_product(&term.target))
            .unwrap();
        assert_eq!(
            jr,
            qt("((1 - q*t)*(1 - t^2)*(1 - q*t^4))/((1 - t)*(1 - q*t^2)*(1 - q*t^3)^2)")
        );
        let a_expect =
            qt("((1 - q^2*t^2)*(1 - t^2)*(1 - q*t^4))/((1 - q^2*t^3)*(1 - t)*(1 - q*t^3)^2)");
        assert_eq!(coeff_j(term).unwrap(), a_expect);
        assert_eq!(coeff_a(term).unwrap(), a_expect);
    }

    #[test]
    fn unit_coefficient_for_trivial_raise() {
        let terms = support_set(&sc(&[0], &[0])).unwrap();
        assert_eq!(terms.len(), 1);
        assert_eq!(terms[0].target, sc(&[1], &[0]));
        assert!(coeff_c(&terms[0]).unwrap().is_one());
    }

    #[test]
    fn oracle_agreement_tiny() {
        let ctx = Ctx::new();
        let split = sc(&[1], &[0]);
        let product = e1_product(&ctx, &split).unwrap();
        let oracle = oracle_expand(&ctx, &product, 2, 1, PieriBasis::P).unwrap();
        let terms = support_set(&split).unwrap();
        assert_eq!(oracle.len(), terms.len());
        for term in &terms {
            assert_eq!(
                oracle[&term.target],
                coeff_c(term).unwrap(),
                "coefficient mismatch at {}",
                term.target
            );
        }
    }

    #[test]
    fn reversed_route_matches() {
        for split in [sc(&[1], &[0]), sc(&[1, 0], &[2]), sc(&[2, 1], &[1, 0])] {
            for term in support_set(&split).unwrap() {
                assert_eq!(
                    coeff_c(&term).unwrap(),
                    coeff_c_reversed(&term).unwrap(),
                    "convention dictionary fails at {} -> {}",
                    split,
                    term.target
                );
            }
        }
    }

    #[test]
    fn index_actions_are_spectrally_consistent() {
        for split in [sc(&[1], &[0]), sc(&[1, 0], &[2]), sc(&[2, 1], &[1, 0])] {
            let k = split.k();
            for term in support_set(&split).unwrap() {
                let i1_z: Vec<usize> = {
                    let mut v: Vec<usize> = term.i1.iter().map(|&t| k + 1 - t).collect();
                    v.sort_unstable();
                    v
                };
                let lt_z = split.gamma.reversed().concat(&term.lambda_tilde.reversed());
                let mt_z = term.eta().reversed().concat(&term.mu_tilde.reversed());
                for j in (k + 1)..=(k + term.m + 1) {
                    let i2: Vec<usize> = (j..=(k + term.m)).collect();
                    let image = d_i_apply(&lt_z, k, &i1_z, &i2, j).unwrap();
                    assert_eq!(image, mt_z, "cycling image mismatch for {}", term.target);
                    assert_eq!(
                        image.size(),
                        lt_z.size() + 1,
                        "cycling must add one box at {}",
                        term.target
                    );
                    let back = i2_action(&i1_action(&spectral_z(&mt_z), k, &i1_z), k, &i2, j);
                    assert_eq!(
                        back,
                        spectral_z(&lt_z),
                        "index action mismatch for {} (j={})",
                        term.target,
                        j
                    );
                }
            }
        }
    }

    #[test]
    fn trace_oracle_agrees_tiny() {
        let ctx = Ctx::new();
        let split = sc(&[1], &[0]);
        for term in support_set(&split).unwrap() {
            let traced = trace_coeff_e1(&ctx, &split, &term.target).unwrap();
            assert_eq!(
                traced,
                coeff_c(&term).unwrap(),
                "trace oracle at {}",
                term.target
            );
        }
    }
}
