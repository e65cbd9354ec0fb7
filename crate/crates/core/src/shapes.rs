//! Compositions, split compositions, column diagrams and their statistics.
//!
//! A composition nu = (nu_1..nu_n) is drawn as columns: dg(nu) = {(i,j) :
//! 1 <= i <= n, 1 <= j <= nu_i} with boxes addressed as (column, row), both
//! 1-based. Three arm counts coexist:
//!
//!   leg(i,j)   = nu_i - j
//!   arm(i,j)   = #{r<i : j <= nu_r <= nu_i} + #{r>i : j-1 <= nu_r < nu_i}
//!   arm~(i,j)  = #{r<i : j <= nu_r <= nu_i} + #{r>i : j   <= nu_r < nu_i}
//!   coarm(i)   = #{r<i : nu_r > nu_i} + #{r>i : nu_r >= nu_i}
//!
//! Split diagrams use arm~ on the symmetric block and arm on the
//! nonsymmetric block. The spectral exponent l' comes in two mirror-image
//! flavors; `LprimeVariant::Row` is the one matching printed eigenvalue
//! vectors for compositions written symmetric-block-first, and
//! `LprimeVariant::Mirror` is its reversal twin used natively by the
//! interpolation calculus.

use crate::qtfield::BivariatePoly;
use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Composition(pub Vec<u32>);

impl Composition {
    pub fn new(parts: Vec<u32>) -> Self {
        Composition(parts)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn size(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn part(&self, i: usize) -> u32 {
        self.0[i - 1]
    }

    pub fn is_weakly_decreasing(&self) -> bool {
        self.0.windows(2).all(|w| w[0] >= w[1])
    }

    pub fn is_weakly_increasing(&self) -> bool {
        self.0.windows(2).all(|w| w[0] <= w[1])
    }

    pub fn sorted_increasing(&self) -> Self {
        let mut v = self.0.clone();
        v.sort_unstable();
        Composition(v)
    }

    pub fn sorted_decreasing(&self) -> Self {
        let mut v = self.0.clone();
        v.sort_unstable_by(|a, b| b.cmp(a));
        Composition(v)
    }

    pub fn reversed(&self) -> Self {
        let mut v = self.0.clone();
        v.reverse();
        Composition(v)
    }

    pub fn swapped(&self, i: usize) -> Self {
        let mut v = self.0.clone();
        v.swap(i - 1, i);
        Composition(v)
    }

    pub fn concat(&self, other: &Self) -> Self {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Composition(v)
    }

    /// Multiplicity of the value `h` among the parts.
    pub fn multiplicity(&self, h: u32) -> usize {
        self.0.iter().filter(|&&x| x == h).count()
    }

    /// All boxes (col, row) of the column diagram.
    pub fn boxes(&self) -> Vec<(usize, u32)> {
        let mut out = Vec::new();
        for (i, &h) in self.0.iter().enumerate() {
            for j in 1..=h {
                out.push((i + 1, j));
            }
        }
        out
    }

    pub fn contains_box(&self, col: usize, row: u32) -> bool {
        col >= 1 && col <= self.len() && row >= 1 && row <= self.0[col - 1]
    }
}

impl fmt::Display for Composition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({})",
            self.0.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
        )
    }
}

/// A composition split as (lambda | gamma): lambda occupies the symmetric
/// block x_1..x_{n-k}, gamma the nonsymmetric block x_{n-k+1}..x_n.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct SplitComposition {
    pub lambda: Composition,
    pub gamma: Composition,
}

impl SplitComposition {
    pub fn new(lambda: Composition, gamma: Composition) -> Self {
        SplitComposition { lambda, gamma }
    }

    pub fn n(&self) -> usize {
        self.lambda.len() + self.gamma.len()
    }

    pub fn k(&self) -> usize {
        self.gamma.len()
    }

    pub fn full(&self) -> Composition {
        self.lambda.concat(&self.gamma)
    }

    pub fn size(&self) -> u32 {
        self.lambda.size() + self.gamma.size()
    }
}

impl fmt::Display for SplitComposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let l: Vec<String> = self.lambda.0.iter().map(|x| x.to_string()).collect();
        let g: Vec<String> = self.gamma.0.iter().map(|x| x.to_string()).collect();
        write!(f, "({}|{})", l.join(","), g.join(","))
    }
}

fn assert_box(nu: &Composition, col: usize, row: u32) {
    assert!(
        nu.contains_box(col, row),
        "box ({},{}) outside the diagram of {}",
        col,
        row,
        nu
    );
}

pub fn leg(nu: &Composition, col: usize, row: u32) -> u32 {
    assert_box(nu, col, row);
    nu.0[col - 1] - row
}

pub fn arm(nu: &Composition, col: usize, row: u32) -> u32 {
    assert_box(nu, col, row);
    let h = nu.0[col - 1];
    let mut a = 0;
    for (r0, &x) in nu.0.iter().enumerate() {
        let r = r0 + 1;
        if r < col {
            if row <= x && x <= h {
                a += 1;
            }
        } else if r > col {
            if x < h && x + 1 >= row {
                a += 1;
            }
        }
    }
    a
}

/// The alternate arm count used on symmetric columns of split diagrams.
pub fn arm_tilde(nu: &Composition, col: usize, row: u32) -> u32 {
    assert_box(nu, col, row);
    let h = nu.0[col - 1];
    let mut a = 0;
    for (r0, &x) in nu.0.iter().enumerate() {
        let r = r0 + 1;
        if r < col {
            if row <= x && x <= h {
                a += 1;
            }
        } else if r > col {
            if row <= x && x < h {
                a += 1;
            }
        }
    }
    a
}

pub fn coarm(nu: &Composition, col: usize, row: u32) -> u32 {
    assert_box(nu, col, row);
    let h = nu.0[col - 1];
    let mut a = 0;
    for (r0, &x) in nu.0.iter().enumerate() {
        let r = r0 + 1;
        if r < col && x > h {
            a += 1;
        } else if r > col && x >= h {
            a += 1;
        }
    }
    a
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LprimeVariant {
    /// #{j<i : nu_j > nu_i} + #{j>i : nu_j >= nu_i}
    Row,
    /// #{j<i : nu_j >= nu_i} + #{j>i : nu_j > nu_i}
    Mirror,
}

pub fn lprime(nu: &Composition, i: usize, variant: LprimeVariant) -> u32 {
    assert!(1 <= i && i <= nu.len(), "index {} out of range", i);
    let v = nu.0[i - 1];
    let mut c = 0;
    for (r0, &x) in nu.0.iter().enumerate() {
        let r = r0 + 1;
        let counted = match variant {
            LprimeVariant::Row => (r < i && x > v) || (r > i && x >= v),
            LprimeVariant::Mirror => (r < i && x >= v) || (r > i && x > v),
        };
        if counted {
            c += 1;
        }
    }
    c
}

pub fn lprime_vector(nu: &Composition, variant: LprimeVariant) -> Vec<u32> {
    (1..=nu.len()).map(|i| lprime(nu, i, variant)).collect()
}

/// Poincare polynomial of the stabilizer of lambda inside the symmetric
/// group on its positions: a product of t-factorials over multiplicities.
pub fn poincare_w(lambda: &Composition) -> BivariatePoly {
    let mut mult: BTreeMap<u32, u32> = BTreeMap::new();
    for &x in &lambda.0 {
        *mult.entry(x).or_insert(0) += 1;
    }
    let mut w = BivariatePoly::one();
    for (_, m) in mult {
        for j in 1..=m {
            // [j]_t = 1 + t + ... + t^{j-1}
            let mut bracket = BivariatePoly::zero();
            for e in 0..j {
                bracket.add_term(0, e, BigInt::from(1));
            }
            w = w.mul(&bracket);
        }
    }
    w
}

/// One element of a symmetric group together with a reduced word.
#[derive(Debug, Clone)]
pub struct PermWord {
    /// Images on 0-based positions: perm[i] is where position i is sent.
    pub perm: Vec<usize>,
    /// Reduced word in 1-based simple reflection letters, applied left to
    /// right as operators (w = s_{w_1} ... s_{w_l}).
    pub word: Vec<usize>,
    pub length: usize,
}

/// All elements of S_m with reduced words, sorted by length (identity
/// first). BFS with right multiplication: l(w s_i) = l(w)+1 iff
/// w(i) < w(i+1).
pub fn symmetric_group(m: usize) -> Vec<PermWord> {
    let id = PermWord { perm: (0..m).collect(), word: vec![], length: 0 };
    let mut seen: HashMap<Vec<usize>, usize> = HashMap::new();
    seen.insert(id.perm.clone(), 0);
    let mut out = vec![id];
    let mut queue = VecDeque::new();
    queue.push_back(0usize);
    while let Some(idx) = queue.pop_front() {
        let current = out[idx].clone();
        for i in 1..m {
            if current.perm[i - 1] < current.perm[i] {
                let mut perm = current.perm.clone();
                perm.swap(i - 1, i);
                if !seen.contains_key(&perm) {
                    let mut word = current.word.clone();
                    word.push(i);
                    let entry = PermWord { perm, length: current.length + 1, word };
                    seen.insert(entry.perm.clone(), out.len());
                    out.push(entry);
                    queue.push_back(out.len() - 1);
                }
            }
        }
    }
    out.sort_by_key(|p| (p.length, p.perm.clone()));
    out
}

/// Apply a word of simple reflections to a composition: letter i swaps
/// entries i and i+1; the word acts left to right as operators, so the
/// rightmost letter acts first.
pub fn apply_word(word: &[usize], nu: &Composition) -> Composition {
    let mut v = nu.clone();
    for &i in word.iter().rev() {
        v = v.swapped(i);
    }
    v
}

/// One element of the orbit of lambda^- with its minimal-length coset data.
#[derive(Debug, Clone)]
pub struct OrbitEntry {
    pub comp: Composition,
    /// Reduced word of the minimal w with w(lambda^-) = comp.
    pub word: Vec<usize>,
    pub length: usize,
}

/// Orbit of `start` with, for every rearrangement mu, a reduced word of the
/// minimal w such that w(start) = mu (BFS, so lengths are distances).
pub fn orbit_words_from(start: &Composition) -> Vec<OrbitEntry> {
    let mut seen: HashMap<Vec<u32>, usize> = HashMap::new();
    let mut out = vec![OrbitEntry { comp: start.clone(), word: vec![], length: 0 }];
    seen.insert(start.0.clone(), 0);
    let mut queue = VecDeque::new();
    queue.push_back(0usize);
    while let Some(idx) = queue.pop_front() {
        let cur = out[idx].clone();
        for i in 1..start.len() {
            let next = cur.comp.swapped(i);
            if next == cur.comp {
                continue;
            }
            if !seen.contains_key(&next.0) {
                // s_i composed after the current word
                let mut word = vec![i];
                word.extend_from_slice(&cur.word);
                seen.insert(next.0.clone(), out.len());
                out.push(OrbitEntry { comp: next, word, length: cur.length + 1 });
                queue.push_back(out.len() - 1);
            }
        }
    }
    out.sort_by_key(|e| (e.length, e.comp.0.clone()));
    out
}

/// Full orbit of `lambda`, each rearrangement with the minimal word from
/// the weakly increasing arrangement (which sits at length 0). This is the
/// indexing the expansion coefficients f use.
pub fn orbit_and_order(lambda: &Composition) -> Vec<OrbitEntry> {
    orbit_words_from(&lambda.sorted_increasing())
}

/// Minimal coset representatives of the stabilizer of a weakly decreasing
/// lambda: one reduced word per rearrangement, minimal with w(lambda) = mu.
/// For dominant lambda the stabilizer is a standard parabolic subgroup, so
/// summing T over these words realizes e+/W.
pub fn coset_reps_of_stabilizer(lambda: &Composition) -> Vec<OrbitEntry> {
    orbit_words_from(lambda)
}

/// Length of the minimal permutation sorting: the inversion count.
pub fn min_word_length(nu: &Composition) -> usize {
    let v = &nu.0;
    let mut inv = 0;
    for i in 0..v.len() {
        for j in (i + 1)..v.len() {
            if v[i] > v[j] {
                inv += 1;
            }
        }
    }
    inv
}

/// Ehresmann criterion for Bruhat order on permutations given as images.
pub fn bruhat_leq_perm(u: &[usize], w: &[usize]) -> bool {
    let n = u.len();
    assert_eq!(w.len(), n);
    for i in 1..n {
        // compare sorted prefixes u(1..i) and w(1..i): u <= w iff each
        // sorted u-prefix is entrywise <= the sorted w-prefix
        let mut pu: Vec<usize> = u[..i].to_vec();
        let mut pw: Vec<usize> = w[..i].to_vec();
        pu.sort_unstable();
        pw.sort_unstable();
        if pu.iter().zip(&pw).any(|(a, b)| a > b) {
            return false;
        }
    }
    true
}

/// Convert a word s_{i_1} ... s_{i_l} into the image vector of the
/// permutation it denotes: build by right multiplications, which swap the
/// slots i-1 and i, scanning the word left to right.
pub fn word_to_perm(word: &[usize], n: usize) -> Vec<usize> {
    let mut perm: Vec<usize> = (0..n).collect();
    for &i in word {
        perm.swap(i - 1, i);
    }
    perm
}

fn minimal_perm_for(nu: &Composition) -> Vec<usize> {
    // The minimal w with w(nu^-) = nu, found by BFS through the orbit.
    for entry in orbit_and_order(nu) {
        if entry.comp == *nu {
            return word_to_perm(&entry.word, nu.len());
        }
    }
    unreachable!("composition not found in its own orbit")
}

/// Strict dominance on partitions of equal size (both weakly decreasing).
pub fn dominance_lt(a: &Composition, b: &Composition) -> bool {
    debug_assert_eq!(a.size(), b.size());
    let mut sa = 0i64;
    let mut sb = 0i64;
    let mut strict = false;
    let len = a.len().max(b.len());
    for i in 0..len {
        sa += *a.0.get(i).unwrap_or(&0) as i64;
        sb += *b.0.get(i).unwrap_or(&0) as i64;
        if sa > sb {
            return false;
        }
        if sa < sb {
            strict = true;
        }
    }
    strict && a != b
}

/// The order used for triangularity tests on monomial supports: nu < mu
/// when the decreasing sorts are strictly dominance-comparable, and within a
/// single rearrangement class when the minimal sorting permutation of nu is
/// Bruhat-above the one of mu (the antidominant arrangement is maximal).
pub fn comp_bruhat_lt(nu: &Composition, mu: &Composition) -> bool {
    if nu == mu || nu.size() != mu.size() {
        return false;
    }
    let a = nu.sorted_decreasing();
    let b = mu.sorted_decreasing();
    if a != b {
        return dominance_lt(&a, &b);
    }
    let pu = minimal_perm_for(nu);
    let pw = minimal_perm_for(mu);
    pu != pw && bruhat_leq_perm(&pw, &pu)
}
