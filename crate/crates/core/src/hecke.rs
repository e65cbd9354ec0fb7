//! Demazure-Lusztig operators in both indexing conventions.
//!
//! In x variables (the convention of the main construction),
//!
//!   T_i = t s_i + (t-1) x_{i+1}/(x_{i+1}-x_i) (1 - s_i),
//!
//! and in the reversed z variables,
//!
//!   H_i = (t-1) z_i/(z_i-z_{i+1}) + (z_i - t z_{i+1})/(z_i-z_{i+1}) s_i,
//!
//! with the dictionary T_i f(x_1..x_n) = H_{n-i} f(z_n..z_1): reversing the
//! variables conjugates T_i into H_{n-i}. Both are computed through the
//! termwise divided difference, so no rational-function division in the x's
//! ever happens.

use crate::multipoly::SparsePolynomial;
use crate::qtfield::QtRational;
use crate::shapes::{poincare_w, symmetric_group, Composition};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Convention {
    /// T_i acting on x variables.
    T,
    /// H_i acting on z variables.
    H,
}

fn t_minus_one() -> QtRational {
    QtRational::t().sub(&QtRational::one())
}

/// T_i f = t s_i f - (t-1) x_{i+1} d_i f, where d_i is the divided
/// difference for (x_i - x_{i+1}).
pub fn apply_t(f: &SparsePolynomial, i: usize) -> SparsePolynomial {
    let swapped = f.swap_vars(i).scalar_mul(&QtRational::t());
    let dd = f.divided_difference(i).mul_var(i + 1).scalar_mul(&t_minus_one());
    swapped.sub(&dd)
}

/// H_i f = t s_i f + (t-1) z_i d_i f.
pub fn apply_h(f: &SparsePolynomial, i: usize) -> SparsePolynomial {
    let swapped = f.swap_vars(i).scalar_mul(&QtRational::t());
    let dd = f.divided_difference(i).mul_var(i).scalar_mul(&t_minus_one());
    swapped.add(&dd)
}

/// Hbar_i f = s_i f + (t-1) z_{i+1} d_i f; satisfies H_i Hbar_i = t and
/// fixes s_i-symmetric polynomials.
pub fn apply_hbar(f: &SparsePolynomial, i: usize) -> SparsePolynomial {
    let swapped = f.swap_vars(i);
    let dd = f.divided_difference(i).mul_var(i + 1).scalar_mul(&t_minus_one());
    swapped.add(&dd)
}

pub fn apply_op(f: &SparsePolynomial, i: usize, conv: Convention) -> SparsePolynomial {
    match conv {
        Convention::T => apply_t(f, i),
        Convention::H => apply_h(f, i),
    }
}

/// Apply T_w (or H_w) for w given by a reduced word, leftmost letter
/// outermost: the rightmost letter acts first.
pub fn apply_word(f: &SparsePolynomial, word: &[usize], conv: Convention) -> SparsePolynomial {
    let mut g = f.clone();
    for &i in word.iter().rev() {
        g = apply_op(&g, i, conv);
    }
    g
}

/// e+ over the block [lo, hi] (1-based, inclusive): the sum of T_w (or H_w)
/// over all w in the symmetric group permuting x_lo..x_hi.
pub fn e_plus_block(f: &SparsePolynomial, lo: usize, hi: usize, conv: Convention) -> SparsePolynomial {
    assert!(lo >= 1 && hi <= f.nvars());
    if hi <= lo {
        return f.clone();
    }
    let m = hi - lo + 1;
    let mut acc = SparsePolynomial::zero(f.nvars());
    for w in symmetric_group(m) {
        let word: Vec<usize> = w.word.iter().map(|&i| i + lo - 1).collect();
        acc = acc.add(&apply_word(f, &word, conv));
    }
    acc
}

/// The partial symmetrizer of the main construction: block [1, n-k] in the
/// T convention, block [k+1, n] in the H convention.
pub fn symmetrize_e_plus(f: &SparsePolynomial, n: usize, k: usize, conv: Convention) -> SparsePolynomial {
    assert!(k <= n);
    match conv {
        Convention::T => e_plus_block(f, 1, n - k, Convention::T),
        Convention::H => e_plus_block(f, k + 1, n, Convention::H),
    }
}

/// Divide e+ f by the Poincare polynomial of the full block: for f fully
/// symmetric in the block, e+ f = W(t) f.
pub fn w_full_block(m: usize) -> QtRational {
    QtRational::from_poly(poincare_w(&Composition::new(vec![0; m])))
}

/// Pure variable reversal x_i <-> z_{n+1-i}; conjugates T_i into H_{n-i}.
pub fn reverse_vars(f: &SparsePolynomial) -> SparsePolynomial {
    f.reverse_vars()
}

/// The full convention dictionary x_i <-> z_{n+1-i}, (q,t) <-> (1/q,1/t).
/// An involution.
pub fn convention_map(f: &SparsePolynomial) -> SparsePolynomial {
    f.reverse_vars().map_coeffs(|c| c.invert_parameters())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn qt(s: &str) -> QtRational {
        s.parse().unwrap()
    }

    fn x(n: usize, i: usize) -> SparsePolynomial {
        SparsePolynomial::var(n, i)
    }

    pub(crate) fn random_poly(rng: &mut ChaCha8Rng, n: usize, max_deg: u16, terms: usize) -> SparsePolynomial {
        let mut p = SparsePolynomial::zero(n);
        for _ in 0..terms {
            let expo: Vec<u16> = (0..n).map(|_| rng.gen_range(0..=max_deg)).collect();
            let a = rng.gen_range(-3i64..=3);
            let b = rng.gen_range(0i64..=2);
            let c = rng.gen_range(0i64..=2);
            let coeff = QtRational::from_int(if a == 0 { 1 } else { a })
                .mul(&QtRational::monomial_pow(b, c));
            p.add_term(crate::multipoly::Monomial(expo), coeff);
        }
        p
    }

    #[test]
    fn t_on_monomials() {
        // T_1 x1 = x2 for n=2
        assert_eq!(apply_t(&x(2, 1), 1), x(2, 2));
        // T_1 x2 = t x1 + (t-1) x2
        let got = apply_t(&x(2, 2), 1);
        let expect = x(2, 1).scalar_mul(&qt("t")).add(&x(2, 2).scalar_mul(&qt("t - 1")));
        assert_eq!(got, expect);
        // symmetric input: T_i f = t f
        let sym = x(2, 1).mul(&x(2, 2)).add(&x(2, 1).add(&x(2, 2)).pow(2));
        assert_eq!(apply_t(&sym, 1), sym.scalar_mul(&qt("t")));
    }

    #[test]
    fn h_on_monomials() {
        // H_1 z2 = z1 and H_1 z1 = (t-1) z1 + t z2
        assert_eq!(apply_h(&x(2, 2), 1), x(2, 1));
        let got = apply_h(&x(2, 1), 1);
        let expect = x(2, 1).scalar_mul(&qt("t - 1")).add(&x(2, 2).scalar_mul(&qt("t")));
        assert_eq!(got, expect);
    }

    #[test]
    fn quadratic_relation() {
        // (T_i - t)(T_i + 1) = 0 on a random corpus
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in 2..=4 {
            for _ in 0..12 {
                let f = random_poly(&mut rng, n, 3, 4);
                for i in 1..n {
                    for conv in [Convention::T, Convention::H] {
                        let tf = apply_op(&f, i, conv);
                        let lhs = apply_op(&tf, i, conv)
                            .add(&tf)
                            .sub(&tf.scalar_mul(&qt("t")))
                            .sub(&f.scalar_mul(&qt("t")));
                        assert!(lhs.is_zero(), "quadratic fails n={} i={}", n, i);
                    }
                }
            }
        }
    }

    #[test]
    fn braid_relations() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in 3..=4 {
            for _ in 0..10 {
                let f = random_poly(&mut rng, n, 3, 4);
                for conv in [Convention::T, Convention::H] {
                    for i in 1..(n - 1) {
                        let lhs = apply_word(&f, &[i, i + 1, i], conv);
                        let rhs = apply_word(&f, &[i + 1, i, i + 1], conv);
                        assert_eq!(lhs, rhs, "braid fails at i={}", i);
                    }
                }
                if n == 4 {
                    let lhs = apply_word(&f, &[1, 3], Convention::T);
                    let rhs = apply_word(&f, &[3, 1], Convention::T);
                    assert_eq!(lhs, rhs, "commuting relation fails");
                }
            }
        }
    }

    #[test]
    fn empty_word_is_identity() {
        let f = x(3, 1).mul(&x(3, 3));
        assert_eq!(apply_word(&f, &[], Convention::T), f);
    }

    #[test]
    fn h_hbar_product_and_fixed_points() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..8 {
            let f = random_poly(&mut rng, 3, 3, 4);
            for i in 1..3 {
                let hh = apply_h(&apply_hbar(&f, i), i);
                assert_eq!(hh, f.scalar_mul(&qt("t")), "H Hbar != t at i={}", i);
            }
        }
        let sym = x(2, 1).add(&x(2, 2));
        assert_eq!(apply_hbar(&sym, 1), sym);
    }

    #[test]
    fn symmetrizer_examples() {
        // k = n: trivial block
        let f = x(2, 1);
        assert_eq!(symmetrize_e_plus(&f, 2, 2, Convention::T), f);
        // n=2, k=0: x1 + T_1 x1 = x1 + x2
        let got = symmetrize_e_plus(&x(2, 1), 2, 0, Convention::T);
        assert_eq!(got, x(2, 1).add(&x(2, 2)));
        // output is literally symmetric and reabsorbs T_i up to t
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let f = random_poly(&mut rng, 3, 2, 3);
        let e = symmetrize_e_plus(&f, 3, 1, Convention::T);
        assert_eq!(e.swap_vars(1), e);
        assert_eq!(apply_t(&e, 1), e.scalar_mul(&qt("t")));
    }

    #[test]
    fn symmetrizer_on_symmetric_input_gives_w_factor() {
        let sym = x(3, 1).add(&x(3, 2)).mul(&x(3, 1).add(&x(3, 2)));
        let got = e_plus_block(&sym, 1, 2, Convention::T);
        assert_eq!(got, sym.scalar_mul(&w_full_block(2)));
    }

    #[test]
    fn reversal_conjugates_t_into_h() {
        let mut rng = ChaCha8Rng::seed_from_u64(19);
        for n in 2..=4 {
            let f = random_poly(&mut rng, n, 3, 4);
            for i in 1..n {
                let lhs = reverse_vars(&apply_t(&f, i));
                let rhs = apply_h(&reverse_vars(&f), n - i);
                assert_eq!(lhs, rhs, "dictionary fails n={} i={}", n, i);
            }
        }
    }

    #[test]
    fn convention_map_involutive() {
        let f = x(3, 1)
            .scalar_mul(&qt("(1 - t)/(1 - q*t)"))
            .add(&x(3, 2).mul(&x(3, 3)).scalar_mul(&qt("q^2")));
        assert_eq!(convention_map(&f), {
            let g = f.reverse_vars();
            g.map_coeffs(|c| c.invert_parameters())
        });
        assert_eq!(convention_map(&convention_map(&f)), f);
        assert_eq!(convention_map(&x(3, 1)), x(3, 3));
    }
}
