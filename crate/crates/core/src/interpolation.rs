//! Interpolation nonsymmetric Macdonald polynomials and their operator
//! calculus, in the reversed-variable (z) convention.
//!
//! The spectral vector of a composition nu is nubar_i = q^{nu_i} t^{-l'(i)}.
//! In the z convention the exponent l' is the `Mirror` variant, fixed by the
//! operators themselves: Xi_i acts on constants with eigenvalue 1 at i=1 and
//! t at i=n, pinning l'((0,..,0)) = (0,1,..,n-1). For compositions written
//! symmetric-block-first (the x convention of everything downstream) the
//! `Row` variant applies; the two are exchanged by reversal.
//!
//! E*_nu is the unique polynomial of degree |nu| that vanishes at mubar for
//! every mu != nu with |mu| <= |nu| and has top homogeneous component
//! E-dagger_nu. It is produced by an exact linear solve on the vanishing
//! conditions; nothing numerical, nothing truncated.

use crate::hecke::{apply_word, Convention};
use crate::linalg::solve_square;
use crate::multipoly::{Monomial, SparsePolynomial};
use crate::nonsym::e_dagger;
use crate::qtfield::QtRational;
use crate::shapes::{arm, leg, lprime, Composition, LprimeVariant};
use crate::{Ctx, Error};
use std::collections::BTreeMap;

/// All compositions of `d` into `n` parts, in a fixed deterministic order.
pub fn compositions_of(n: usize, d: u32) -> Vec<Composition> {
    fn rec(n: usize, d: u32, prefix: &mut Vec<u32>, out: &mut Vec<Composition>) {
        if n == 1 {
            prefix.push(d);
            out.push(Composition::new(prefix.clone()));
            prefix.pop();
            return;
        }
        for first in 0..=d {
            prefix.push(first);
            rec(n - 1, d - first, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if n == 0 {
        if d == 0 {
            out.push(Composition::new(vec![]));
        }
        return out;
    }
    rec(n, d, &mut Vec::new(), &mut out);
    out
}

pub fn compositions_up_to(n: usize, max: u32) -> Vec<Composition> {
    (0..=max).flat_map(|d| compositions_of(n, d)).collect()
}

/// The spectral (eigenvalue) vector of nu.
pub fn spectral_vector(nu: &Composition, variant: LprimeVariant) -> Vec<QtRational> {
    (1..=nu.len())
        .map(|i| QtRational::monomial_pow(nu.0[i - 1] as i64, -(lprime(nu, i, variant) as i64)))
        .collect()
}

/// x-convention spectral vector (symmetric block written first).
pub fn spectral_row(nu: &Composition) -> Vec<QtRational> {
    spectral_vector(nu, LprimeVariant::Row)
}

/// z-convention spectral vector, the one the interpolation operators see.
pub fn spectral_z(nu: &Composition) -> Vec<QtRational> {
    spectral_vector(nu, LprimeVariant::Mirror)
}

/// Principal value formula in the x convention:
///   (prod_i nubar_i^{nu_i}) * prod_boxes (1 - q^{-(leg+1)} t^{-arm}).
pub fn estar_principal_row(nu: &Composition) -> QtRational {
    let bar = spectral_row(nu);
    let mut v = QtRational::one();
    for (i, b) in bar.iter().enumerate() {
        v = v.mul(&b.pow(nu.0[i] as i64).expect("positive power"));
    }
    for (col, row) in nu.boxes() {
        let l = leg(nu, col, row) as i64;
        let a = arm(nu, col, row) as i64;
        let factor = QtRational::one().sub(&QtRational::monomial_pow(-(l + 1), -a));
        v = v.mul(&factor);
    }
    v
}

/// Principal value E*_nu(nubar) in the z convention: the same formula with
/// mirrored statistics, i.e. the x formula of the reversed composition.
pub fn estar_principal_z(nu: &Composition) -> QtRational {
    estar_principal_row(&nu.reversed())
}

fn eval_monomial(m: &Monomial, point: &[QtRational]) -> QtRational {
    let mut v = QtRational::one();
    for (i, &e) in m.0.iter().enumerate() {
        if e > 0 {
            v = v.mul(&point[i].pow(e as i64).expect("monomial power"));
        }
    }
    v
}

fn check_estar_contract(nu: &Composition, estar: &SparsePolynomial) -> Result<(), Error> {
    let d = nu.size();
    for mu in compositions_of(nu.len(), d) {
        let val = estar.evaluate(&spectral_z(&mu))?;
        if mu == *nu {
            if val != estar_principal_z(nu) {
                return Err(Error::TheoryViolation(format!(
                    "principal value of E*_{} disagrees with the box formula",
                    nu
                )));
            }
        } else if !val.is_zero() {
            return Err(Error::TheoryViolation(format!(
                "E*_{} fails to vanish at the top-degree point {}",
                nu, mu
            )));
        }
    }
    Ok(())
}

/// E*_nu with the top homogeneous component pinned to E-dagger_nu and the
/// lower coefficients solved from the vanishing conditions at all points of
/// strictly smaller degree. The leftover top-degree vanishings and the
/// principal-value formula are then asserted.
pub fn estar(ctx: &Ctx, nu: &Composition) -> Result<SparsePolynomial, Error> {
    if let Some(p) = ctx.estar_cache.lock().unwrap().get(&nu.0) {
        return Ok(p.clone());
    }
    let n = nu.len();
    let d = nu.size();
    let top = e_dagger(ctx, nu);
    let result = if d == 0 {
        top
    } else {
        let unknowns: Vec<Monomial> = compositions_up_to(n, d - 1)
            .iter()
            .map(|c| Monomial(c.0.iter().map(|&x| x as u16).collect()))
            .collect();
        let points: Vec<Vec<QtRational>> =
            compositions_up_to(n, d - 1).iter().map(spectral_z).collect();
        let mut a = Vec::with_capacity(points.len());
        let mut b = Vec::with_capacity(points.len());
        for p in &points {
            a.push(unknowns.iter().map(|m| eval_monomial(m, p)).collect::<Vec<_>>());
            b.push(top.evaluate(p)?.neg());
        }
        let x = solve_square(a, b).ok_or_else(|| {
            Error::TheoryViolation(format!("singular interpolation system for {}", nu))
        })?;
        let mut estar = top;
        for (m, c) in unknowns.into_iter().zip(x) {
            estar.add_term(m, c);
        }
        estar
    };
    check_estar_contract(nu, &result)?;
    ctx.estar_cache
        .lock()
        .unwrap()
        .entry(nu.0.clone())
        .or_insert_with(|| result.clone());
    Ok(result)
}

/// E*_nu solved without seeding any Macdonald polynomial: monic at z^nu,
/// all other coefficients of degree <= |nu| unknown, vanishing imposed at
/// every point mu != nu with |mu| <= |nu|. Used to cross-validate the
/// recursion constructor for E.
pub fn estar_unpinned(_ctx: &Ctx, nu: &Composition) -> Result<SparsePolynomial, Error> {
    let n = nu.len();
    let d = nu.size();
    let lead = Monomial(nu.0.iter().map(|&x| x as u16).collect());
    let unknowns: Vec<Monomial> = compositions_up_to(n, d)
        .iter()
        .map(|c| Monomial(c.0.iter().map(|&x| x as u16).collect()))
        .filter(|m| *m != lead)
        .collect();
    let points: Vec<Vec<QtRational>> = compositions_up_to(n, d)
        .iter()
        .filter(|mu| *mu != nu)
        .map(spectral_z)
        .collect();
    assert_eq!(unknowns.len(), points.len());
    let mut a = Vec::with_capacity(points.len());
    let mut b = Vec::with_capacity(points.len());
    for p in &points {
        a.push(unknowns.iter().map(|m| eval_monomial(m, p)).collect::<Vec<_>>());
        b.push(eval_monomial(&lead, p).neg());
    }
    let x = solve_square(a, b).ok_or_else(|| {
        Error::TheoryViolation(format!("singular unpinned interpolation system for {}", nu))
    })?;
    let mut estar = SparsePolynomial::zero(n);
    estar.add_term(lead, QtRational::one());
    for (m, c) in unknowns.into_iter().zip(x) {
        estar.add_term(m, c);
    }
    Ok(estar)
}

/// Delta f(z_1..z_n) = f(z_n/q, z_1, ..., z_{n-1}).
pub fn delta(f: &SparsePolynomial) -> SparsePolynomial {
    let n = f.nvars();
    let mut out = SparsePolynomial::zero(n);
    for (m, c) in f.terms() {
        let first = m.0[0];
        let mut e = Vec::with_capacity(n);
        e.extend_from_slice(&m.0[1..]);
        e.push(first);
        out.add_term(
            Monomial(e),
            c.mul(&QtRational::monomial_pow(-(first as i64), 0)),
        );
    }
    out
}

/// Phi = (z_n - t^{-n+1}) Delta.
pub fn phi(f: &SparsePolynomial) -> SparsePolynomial {
    let n = f.nvars();
    let d = delta(f);
    let shift = QtRational::monomial_pow(0, -((n as i64) - 1));
    d.mul_var(n).sub(&d.scalar_mul(&shift))
}

/// The raising chain Ztilde_i = H_i .. H_{n-1} Phi H_1 .. H_{i-1}.
pub fn z_tilde(f: &SparsePolynomial, i: usize) -> SparsePolynomial {
    let n = f.nvars();
    assert!(1 <= i && i <= n);
    let right: Vec<usize> = (1..i).collect();
    let left: Vec<usize> = (i..n).collect();
    let g = apply_word(f, &right, Convention::H);
    let g = phi(&g);
    apply_word(&g, &left, Convention::H)
}

/// Xi_i f = z_i^{-1} (f + Ztilde_i f); exact only because the theory makes
/// the bracket divisible by z_i, so a failed division is an internal error.
pub fn xi(f: &SparsePolynomial, i: usize) -> Result<SparsePolynomial, Error> {
    let g = f.add(&z_tilde(f, i));
    g.div_var(i).ok_or_else(|| {
        Error::TheoryViolation(format!("Xi_{} produced a polynomial not divisible by z_{}", i, i))
    })
}

/// Expand a homogeneous polynomial in the degree-d E-dagger basis.
pub fn expand_in_edagger_degree(
    ctx: &Ctx,
    f: &SparsePolynomial,
    d: u32,
) -> Result<BTreeMap<Composition, QtRational>, Error> {
    let n = f.nvars();
    let comps = compositions_of(n, d);
    let family: Vec<SparsePolynomial> = comps.iter().map(|c| e_dagger(ctx, c)).collect();
    let coeffs = crate::linalg::expand_in_family(f, &family)?;
    Ok(comps
        .into_iter()
        .zip(coeffs)
        .filter(|(_, c)| !c.is_zero())
        .collect())
}

/// Expand any polynomial in the E* basis, by descending degree: the top
/// component of what remains determines the top-degree coefficients.
pub fn expand_in_estar(
    ctx: &Ctx,
    f: &SparsePolynomial,
) -> Result<BTreeMap<Composition, QtRational>, Error> {
    let mut rest = f.clone();
    let mut out = BTreeMap::new();
    while !rest.is_zero() {
        let d = rest.total_degree().unwrap();
        let top = rest.homogeneous_component(d);
        let coeffs = expand_in_edagger_degree(ctx, &top, d)?;
        for (nu, c) in coeffs {
            rest = rest.sub(&estar(ctx, &nu)?.scalar_mul(&c));
            out.insert(nu, c);
        }
    }
    Ok(out)
}

/// Psi: the linear isomorphism sending E-dagger_nu to E*_nu.
pub fn psi(ctx: &Ctx, f: &SparsePolynomial) -> Result<SparsePolynomial, Error> {
    let n = f.nvars();
    let mut out = SparsePolynomial::zero(n);
    let mut d = match f.total_degree() {
        None => return Ok(out),
        Some(d) => d as i64,
    };
    while d >= 0 {
        let comp = f.homogeneous_component(d as u32);
        if !comp.is_zero() {
            for (nu, c) in expand_in_edagger_degree(ctx, &comp, d as u32)? {
                out = out.add(&estar(ctx, &nu)?.scalar_mul(&c));
            }
        }
        d -= 1;
    }
    Ok(out)
}

/// Psi^{-1}: expand in E* and reassemble on the E-dagger side.
pub fn psi_inv(ctx: &Ctx, f: &SparsePolynomial) -> Result<SparsePolynomial, Error> {
    let n = f.nvars();
    let mut out = SparsePolynomial::zero(n);
    for (nu, c) in expand_in_estar(ctx, f)? {
        out = out.add(&e_dagger(ctx, &nu).scalar_mul(&c));
    }
    Ok(out)
}

/// Z_i = t^{-C(n,2)} Ztilde_i Xi_i^{-1} prod_j Xi_j, realized through the
/// E* expansion: prod Xi_j has eigenvalue q^{-|nu|} t^{C(n,2)} and Xi_i^{-1}
/// has eigenvalue nubar_i.
pub fn z_op(ctx: &Ctx, f: &SparsePolynomial, i: usize) -> Result<SparsePolynomial, Error> {
    let n = f.nvars();
    let mut staged = SparsePolynomial::zero(n);
    for (nu, c) in expand_in_estar(ctx, f)? {
        let bar_i = spectral_z(&nu)[i - 1].clone();
        let scale = c
            .mul(&QtRational::monomial_pow(-(nu.size() as i64), 0))
            .mul(&bar_i);
        staged = staged.add(&estar(ctx, &nu)?.scalar_mul(&scale));
    }
    Ok(z_tilde(&staged, i))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(v: &[u32]) -> Composition {
        Composition::new(v.to_vec())
    }

    fn qt(s: &str) -> QtRational {
        s.parse().unwrap()
    }

    #[test]
    fn spectral_examples() {
        let nu = c(&[1, 3, 1, 1, 0, 1]);
        let expect: Vec<QtRational> = [
            "q/t^4", "q^3", "q/t^3", "q/t^2", "1/t^5", "q/t",
        ]
        .iter()
        .map(|s| qt(s))
        .collect();
        assert_eq!(spectral_row(&nu), expect);

        let nu = c(&[1, 3, 2, 1, 0, 1]);
        let expect: Vec<QtRational> = [
            "q/t^4", "q^3", "q^2/t", "q/t^3", "1/t^5", "q/t^2",
        ]
        .iter()
        .map(|s| qt(s))
        .collect();
        assert_eq!(spectral_row(&nu), expect);

        // zero weight: (t^{-(n-1)}, ..., t^0) row-wise
        assert_eq!(
            spectral_row(&c(&[0, 0, 0])),
            vec![qt("1/t^2"), qt("1/t"), qt("1")]
        );
        // and the mirror of that for the z convention
        assert_eq!(
            spectral_z(&c(&[0, 0, 0])),
            vec![qt("1"), qt("1/t"), qt("1/t^2")]
        );
    }

    #[test]
    fn spectral_swap_lemma() {
        // s_i(nubar) = (s_i nu)bar iff nu_i != nu_{i+1}, exhaustively for
        // n <= 4 with entries <= 3, in both variants.
        for n in 2..=4usize {
            for nu in compositions_up_to(n, 3) {
                if nu.0.iter().any(|&x| x > 3) {
                    continue;
                }
                for variant in [LprimeVariant::Row, LprimeVariant::Mirror] {
                    let bar = spectral_vector(&nu, variant);
                    for i in 1..n {
                        let mut swapped_bar = bar.clone();
                        swapped_bar.swap(i - 1, i);
                        let bar_of_swapped = spectral_vector(&nu.swapped(i), variant);
                        let equal = swapped_bar == bar_of_swapped;
                        assert_eq!(
                            equal,
                            nu.0[i - 1] != nu.0[i],
                            "swap lemma fails for {} at i={} ({:?})",
                            nu,
                            i,
                            variant
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn spectral_rotation_lemma() {
        // for nu_n > 0: (nu_n - 1, nu_1, ..., nu_{n-1})bar
        //   = (q^{-1} nubar_n, nubar_1, ..., nubar_{n-1})   (z convention)
        for n in 2..=4usize {
            for nu in compositions_up_to(n, 4) {
                if nu.0[n - 1] == 0 {
                    continue;
                }
                let mut rotated = vec![nu.0[n - 1] - 1];
                rotated.extend_from_slice(&nu.0[..n - 1]);
                let lhs = spectral_z(&Composition::new(rotated));
                let bar = spectral_z(&nu);
                let mut rhs = vec![bar[n - 1].mul(&QtRational::monomial_pow(-1, 0))];
                rhs.extend_from_slice(&bar[..n - 1]);
                assert_eq!(lhs, rhs, "rotation lemma fails for {}", nu);
            }
        }
    }

    #[test]
    fn delta_and_phi_examples() {
        let n = 3;
        let z1 = SparsePolynomial::var(n, 1);
        // Delta z1 = z_n / q
        assert_eq!(
            delta(&z1),
            SparsePolynomial::var(n, 3).scalar_mul(&qt("1/q"))
        );
        // Delta(z2 z3) = z1 z2
        let z23 = SparsePolynomial::var(n, 2).mul(&SparsePolynomial::var(n, 3));
        assert_eq!(
            delta(&z23),
            SparsePolynomial::var(n, 1).mul(&SparsePolynomial::var(n, 2))
        );
        // Phi(1) = z_n - t^{-n+1}
        let got = phi(&SparsePolynomial::one(n));
        let expect = SparsePolynomial::var(n, 3)
            .sub(&SparsePolynomial::constant(n, qt("1/t^2")));
        assert_eq!(got, expect);
    }

    #[test]
    fn estar_degree_one() {
        // closed form for n=2: E*_(1,0) = z1 + (1-t)/(1-qt) z2 - (1-qt^2)/(t(1-qt))
        let ctx = Ctx::new();
        let got = estar(&ctx, &c(&[1, 0])).unwrap();
        let expect = SparsePolynomial::var(2, 1)
            .add(&SparsePolynomial::var(2, 2).scalar_mul(&qt("(1 - t)/(1 - q*t)")))
            .sub(&SparsePolynomial::constant(2, qt("(1 - q*t^2)/(t - q*t^2)")));
        assert_eq!(got, expect);
    }

    #[test]
    fn estar_vanishing_and_principal() {
        let ctx = Ctx::new();
        assert_eq!(estar(&ctx, &c(&[0, 0])).unwrap(), SparsePolynomial::one(2));
        let e = estar(&ctx, &c(&[1, 0])).unwrap();
        // vanishing at the spectral point of (0,1)
        let v = e.evaluate(&spectral_z(&c(&[0, 1]))).unwrap();
        assert!(v.is_zero());
        // principal value q(1 - q^{-1} t^{-1}) in the mirrored formula
        let p = e.evaluate(&spectral_z(&c(&[1, 0]))).unwrap();
        assert_eq!(p, qt("q - 1"));
        assert_eq!(estar_principal_z(&c(&[1, 0])), qt("q - 1"));
        // and the x-convention formula on the reversed label
        assert_eq!(estar_principal_row(&c(&[1, 0])), qt("q").mul(&qt("1 - 1/(q*t)")));
    }

    #[test]
    fn estar_principal_zero_weight() {
        assert!(estar_principal_row(&c(&[0, 0, 0])).is_one());
        assert!(estar_principal_z(&c(&[0, 0, 0])).is_one());
    }

    #[test]
    fn xi_eigenrelations_small() {
        let ctx = Ctx::new();
        for nu in compositions_up_to(2, 2) {
            let e = estar(&ctx, &nu).unwrap();
            let bar = spectral_z(&nu);
            for i in 1..=2usize {
                let got = xi(&e, i).unwrap();
                let expect = e.scalar_mul(&bar[i - 1].inverse().unwrap());
                assert_eq!(got, expect, "Xi_{} eigenrelation fails on {}", i, nu);
            }
        }
    }

    #[test]
    fn unpinned_estar_matches_pinned() {
        let ctx = Ctx::new();
        for nu in compositions_up_to(2, 3) {
            let pinned = estar(&ctx, &nu).unwrap();
            let unpinned = estar_unpinned(&ctx, &nu).unwrap();
            assert_eq!(pinned, unpinned, "the two solves disagree at {}", nu);
        }
    }
}
