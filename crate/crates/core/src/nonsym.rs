//! Nonsymmetric Macdonald polynomials E_mu and their integral forms.
//!
//! Two independent constructors are kept side by side:
//!
//! - [`e_poly`], the fast one: the classical raising-operator recursion.
//!   From E_sigma one reaches E_{(sigma_n+1, sigma_1..sigma_{n-1})} by
//!   q^{sigma_n} x_1 E_sigma(x_2..x_n, x_1/q), and within a degree the
//!   Hecke exchange law walks between rearrangements.
//! - [`e_via_interpolation`], the slow one: solve the vanishing conditions
//!   for the interpolation polynomial and take its top homogeneous
//!   component.
//!
//! They are compared on a sweep by the test suite; all other modules
//! consume the recursion route.

use crate::hecke::apply_t;
use crate::multipoly::{Monomial, SparsePolynomial};
use crate::qtfield::QtRational;
use crate::shapes::{arm, leg, Composition};
use crate::Ctx;

/// x^mu as a polynomial.
pub fn monomial_of(mu: &Composition) -> SparsePolynomial {
    let expo: Vec<u16> = mu.0.iter().map(|&e| e as u16).collect();
    SparsePolynomial::from_terms(mu.len(), [(Monomial(expo), QtRational::one())])
}

/// The raising step: from E_sigma (n variables) to the polynomial for
/// (sigma_n + 1, sigma_1, ..., sigma_{n-1}).
fn raise(e_sigma: &SparsePolynomial, sigma_last: u32) -> SparsePolynomial {
    let n = e_sigma.nvars();
    let mut rotated = SparsePolynomial::zero(n);
    for (m, c) in e_sigma.terms() {
        // x_i -> x_{i+1}, x_n -> x_1/q
        let mut e = vec![0u16; n];
        let last = m.0[n - 1];
        e[0] = last;
        e[1..n].copy_from_slice(&m.0[..n - 1]);
        let coeff = c.mul(&QtRational::monomial_pow(-(last as i64), 0));
        rotated.add_term(Monomial(e), coeff);
    }
    rotated
        .mul_var(1)
        .scalar_mul(&QtRational::monomial_pow(sigma_last as i64, 0))
}

/// E_mu by the raising/exchange recursion, memoized in `ctx`.
pub fn e_poly(ctx: &Ctx, mu: &Composition) -> SparsePolynomial {
    if let Some(p) = ctx.e_cache.lock().unwrap().get(&mu.0) {
        return p.clone();
    }
    let n = mu.len();
    let result = if mu.size() == 0 {
        SparsePolynomial::one(n)
    } else if let Some(i) = (1..n).find(|&i| mu.0[i - 1] < mu.0[i]) {
        // exchange law: for nu = s_i(mu) with nu_i > nu_{i+1},
        //   E_mu = T_i E_nu + (1-t)/(1 - q^{leg+1} t^{arm}) E_nu
        // with the box (i, mu_i + 1) in the diagram of nu.
        let nu = mu.swapped(i);
        let e_nu = e_poly(ctx, &nu);
        let l = leg(&nu, i, mu.0[i - 1] + 1);
        let a = arm(&nu, i, mu.0[i - 1] + 1);
        let denom = QtRational::one_minus_q_t(l + 1, a);
        let c = QtRational::one()
            .sub(&QtRational::t())
            .div(&denom)
            .expect("box factor is nonzero");
        apply_t(&e_nu, i).add(&e_nu.scalar_mul(&c))
    } else {
        // weakly decreasing with mu_1 >= 1: unraise
        let mut sigma = mu.0[1..].to_vec();
        sigma.push(mu.0[0] - 1);
        let e_sigma = e_poly(ctx, &Composition::new(sigma));
        raise(&e_sigma, mu.0[0] - 1)
    };
    ctx.e_cache
        .lock()
        .unwrap()
        .entry(mu.0.clone())
        .or_insert_with(|| result.clone());
    result
}

/// E in the reversed-variable world: the top homogeneous component of the
/// interpolation polynomial with reversed label.
pub fn e_dagger(ctx: &Ctx, nu: &Composition) -> SparsePolynomial {
    if let Some(p) = ctx.edag_cache.lock().unwrap().get(&nu.0) {
        return p.clone();
    }
    let result = e_poly(ctx, &nu.reversed()).reverse_vars();
    ctx.edag_cache
        .lock()
        .unwrap()
        .entry(nu.0.clone())
        .or_insert_with(|| result.clone());
    result
}

/// The scalar that clears all denominators of E_nu:
/// prod over boxes of (1 - q^{leg+1} t^{arm+1}).
pub fn integral_clearing(nu: &Composition) -> QtRational {
    let mut c = QtRational::one();
    for (col, row) in nu.boxes() {
        c = c.mul(&QtRational::one_minus_q_t(leg(nu, col, row) + 1, arm(nu, col, row) + 1));
    }
    c
}

/// The integral form of E_nu.
pub fn integral_e(ctx: &Ctx, nu: &Composition) -> SparsePolynomial {
    e_poly(ctx, nu).scalar_mul(&integral_clearing(nu))
}

/// E_mu recovered from the interpolation route: solve the vanishing
/// conditions for the reversed label and take the top component back.
/// Independent of the recursion (the solve is not seeded with any E).
pub fn e_via_interpolation(ctx: &Ctx, mu: &Composition) -> Result<SparsePolynomial, crate::Error> {
    let estar = crate::interpolation::estar_unpinned(ctx, &mu.reversed())?;
    Ok(estar.top_homogeneous()?.reverse_vars())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shapes::comp_bruhat_lt;

    fn c(v: &[u32]) -> Composition {
        Composition::new(v.to_vec())
    }

    fn qt(s: &str) -> QtRational {
        s.parse().unwrap()
    }

    #[test]
    fn base_cases() {
        let ctx = Ctx::new();
        assert_eq!(e_poly(&ctx, &c(&[0, 0, 0])), SparsePolynomial::one(3));
        assert_eq!(e_poly(&ctx, &c(&[1, 0])), SparsePolynomial::var(2, 1));
        // E_(0,1) = x2 + (1-t)/(1-qt) x1
        let got = e_poly(&ctx, &c(&[0, 1]));
        let expect = SparsePolynomial::var(2, 2)
            .add(&SparsePolynomial::var(2, 1).scalar_mul(&qt("(1 - t)/(1 - q*t)")));
        assert_eq!(got, expect);
    }

    #[test]
    fn monic_homogeneous_triangular() {
        let ctx = Ctx::new();
        let cases = [
            c(&[2, 0]),
            c(&[0, 2]),
            c(&[1, 1]),
            c(&[0, 2, 1]),
            c(&[3, 0, 1]),
            c(&[1, 0, 2]),
            c(&[2, 2, 0, 1]),
        ];
        for mu in cases {
            let e = e_poly(&ctx, &mu);
            assert!(e.is_homogeneous(), "E_{} not homogeneous", mu);
            assert_eq!(e.total_degree(), Some(mu.size()));
            let lead = monomial_of(&mu);
            let (lead_mono, _) = lead.terms().next().unwrap();
            assert!(e.coeff(lead_mono).is_one(), "E_{} not monic", mu);
            for (mono, _) in e.terms() {
                if mono == lead_mono {
                    continue;
                }
                let nu = Composition::new(mono.0.iter().map(|&x| x as u32).collect());
                assert!(
                    comp_bruhat_lt(&nu, &mu),
                    "triangularity fails: {} appears in E_{}",
                    nu,
                    mu
                );
            }
        }
    }

    #[test]
    fn exchange_laws_hold() {
        // For mu_i > mu_{i+1}: T_i E_mu = E_{s_i mu} - (1-t)/(1-q^{l+1}t^a) E_mu
        // with the box (i, mu_{i+1}+1) in dg(mu).
        let ctx = Ctx::new();
        let cases = [(c(&[1, 0]), 1), (c(&[2, 0, 1]), 1), (c(&[1, 2, 0]), 2)];
        for (mu, i) in cases {
            assert!(mu.0[i - 1] > mu.0[i]);
            let e_mu = e_poly(&ctx, &mu);
            let e_smu = e_poly(&ctx, &mu.swapped(i));
            let l = leg(&mu, i, mu.0[i] + 1);
            let a = arm(&mu, i, mu.0[i] + 1);
            let coeff = qt("1 - t").div(&QtRational::one_minus_q_t(l + 1, a)).unwrap();
            let lhs = apply_t(&e_mu, i);
            let rhs = e_smu.sub(&e_mu.scalar_mul(&coeff));
            assert_eq!(lhs, rhs, "exchange law fails for {} at i={}", mu, i);
        }
    }

    #[test]
    fn equal_entries_eigen() {
        let ctx = Ctx::new();
        let mu = c(&[1, 1, 0]);
        let e = e_poly(&ctx, &mu);
        assert_eq!(apply_t(&e, 1), e.scalar_mul(&qt("t")));
    }

    #[test]
    fn integral_form_examples() {
        let ctx = Ctx::new();
        assert_eq!(integral_e(&ctx, &c(&[0, 0])), SparsePolynomial::one(2));
        // single box, leg 0 and arm 0: (1 - q t) x1
        let got = integral_e(&ctx, &c(&[1]));
        assert_eq!(got, SparsePolynomial::var(1, 1).scalar_mul(&qt("1 - q*t")));
        // all coefficients land in Z[q,t]
        for nu in [c(&[0, 2]), c(&[2, 1]), c(&[1, 0, 2])] {
            let j = integral_e(&ctx, &nu);
            for (_, coeff) in j.terms() {
                assert!(coeff.is_polynomial(), "non-integral coefficient in E-integral {}", nu);
            }
        }
    }
}
