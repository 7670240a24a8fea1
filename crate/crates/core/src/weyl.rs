//! Finite Weyl group arithmetic, Bruhat order, cosets and reflection chains.
//!
//! An element `w` is determined by `w(ρ∨)`, which lies in the free orbit of
//! the regular coweight `ρ∨`. Left descents of `w` are the indices where
//! `w(ρ∨)` has a negative coordinate.

use std::collections::{HashMap, VecDeque};

use num_traits::{Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::coweight::{sign, Coweight, Q};
use crate::rootsys::RootSystem;

/// Element of the finite Weyl group.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WeylElement {
    word: Vec<usize>,
    matrix: Vec<Vec<i64>>,
    rho_image: Vec<i64>,
}

fn simple_matrix(rs: &RootSystem, i: usize) -> Vec<Vec<i64>> {
    let n = rs.rank();
    (0..n)
        .map(|r| (0..n).map(|c| i64::from(r == c) - if c == i { rs.cartan[i][r] } else { 0 }).collect())
        .collect()
}

fn mat_mul(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = a.len();
    (0..n).map(|i| (0..n).map(|j| (0..n).map(|k| a[i][k] * b[k][j]).sum()).collect()).collect()
}

fn reflect_int(rs: &RootSystem, i: usize, x: &[i64]) -> Vec<i64> {
    let xi = x[i];
    x.iter().zip(&rs.cartan[i]).map(|(a, b)| a - xi * b).collect()
}

impl WeylElement {
    pub fn identity(rs: &RootSystem) -> Self {
        WeylElement::from_word(rs, &[])
    }

    /// The product `r_{i_1} ⋯ r_{i_k}`.
    pub fn from_word(rs: &RootSystem, word: &[usize]) -> Self {
        let n = rs.rank();
        let mut v = vec![1i64; n];
        for &i in word.iter().rev() {
            v = reflect_int(rs, i, &v);
        }
        WeylElement::from_rho_image(rs, v)
    }

    /// Recovers the element from `w(ρ∨)`.
    pub fn from_rho_image(rs: &RootSystem, rho_image: Vec<i64>) -> Self {
        let n = rs.rank();
        let mut word = Vec::new();
        let mut v = rho_image.clone();
        while let Some(i) = (0..n).find(|&i| v[i] < 0) {
            word.push(i);
            v = reflect_int(rs, i, &v);
        }
        debug_assert!(v.iter().all(|&c| c == 1), "not a Weyl image of rho");
        let mut matrix: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
        for &i in &word {
            matrix = mat_mul(&matrix, &simple_matrix(rs, i));
        }
        WeylElement { word, matrix, rho_image }
    }

    /// Lexicographically least reduced word.
    pub fn word(&self) -> &[usize] {
        &self.word
    }

    /// Action matrix on coweight coordinates.
    pub fn matrix(&self) -> &[Vec<i64>] {
        &self.matrix
    }

    pub fn rho_image(&self) -> &[i64] {
        &self.rho_image
    }

    pub fn length(&self) -> usize {
        self.word.len()
    }

    pub fn is_identity(&self) -> bool {
        self.word.is_empty()
    }

    pub fn apply(&self, x: &Coweight) -> Coweight {
        Coweight(
            self.matrix
                .iter()
                .map(|row| row.iter().zip(&x.0).fold(Q::zero(), |s, (a, b)| s + b * *a))
                .collect(),
        )
    }

    pub fn mul(&self, rs: &RootSystem, other: &WeylElement) -> WeylElement {
        let v = Coweight::from_ints(&other.rho_image);
        let img = self.apply(&v).to_ints().expect("integral");
        WeylElement::from_rho_image(rs, img)
    }

    pub fn inverse(&self, rs: &RootSystem) -> WeylElement {
        let w: Vec<usize> = self.word.iter().rev().copied().collect();
        WeylElement::from_word(rs, &w)
    }

    /// `r_i · self`.
    pub fn left_mul_simple(&self, rs: &RootSystem, i: usize) -> WeylElement {
        WeylElement::from_rho_image(rs, reflect_int(rs, i, &self.rho_image))
    }

    /// `r_β · self`.
    pub fn left_mul_reflection(&self, rs: &RootSystem, beta: usize) -> WeylElement {
        let img = rs.reflect(beta, &Coweight::from_ints(&self.rho_image));
        WeylElement::from_rho_image(rs, img.to_ints().expect("integral"))
    }

    /// `self · r_i`.
    pub fn right_mul_simple(&self, rs: &RootSystem, i: usize) -> WeylElement {
        self.mul(rs, &WeylElement::from_word(rs, &[i]))
    }

    /// Left descent set.
    pub fn left_descents(&self) -> Vec<usize> {
        (0..self.rho_image.len()).filter(|&i| self.rho_image[i] < 0).collect()
    }

    /// Inversion count: positive roots sent to negative roots.
    pub fn inversions(&self, rs: &RootSystem) -> usize {
        let v = Coweight::from_ints(&self.rho_image);
        (0..rs.num_positive_roots()).filter(|&b| rs.pair(b, &v).is_negative()).count()
    }
}

impl Serialize for WeylElement {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.word.iter().map(|i| i + 1).collect::<Vec<_>>().serialize(s)
    }
}

/// `ℓ(w)` as the number of positive roots made negative.
pub fn length(rs: &RootSystem, w: &WeylElement) -> usize {
    w.inversions(rs)
}

/// Bruhat–Chevalley order via the lifting property.
pub fn bruhat_leq(rs: &RootSystem, lower: &WeylElement, upper: &WeylElement) -> bool {
    let mut a = lower.clone();
    let mut b = upper.clone();
    loop {
        if a.length() > b.length() {
            return false;
        }
        let Some(&s) = b.left_descents().first() else {
            return a.is_identity();
        };
        if a.rho_image[s] < 0 {
            a = a.left_mul_simple(rs, s);
        }
        b = b.left_mul_simple(rs, s);
    }
}

/// All elements of `W`, sorted by length then word. Only sensible for small groups.
pub fn enumerate_group(rs: &RootSystem) -> Vec<WeylElement> {
    let mut seen: HashMap<Vec<i64>, ()> = HashMap::new();
    let start = vec![1i64; rs.rank()];
    let mut queue = VecDeque::from([start.clone()]);
    seen.insert(start, ());
    let mut out = Vec::new();
    while let Some(v) = queue.pop_front() {
        for i in 0..rs.rank() {
            let u = reflect_int(rs, i, &v);
            if !seen.contains_key(&u) {
                seen.insert(u.clone(), ());
                queue.push_back(u);
            }
        }
        out.push(WeylElement::from_rho_image(rs, v));
    }
    out.sort_by(|a, b| a.length().cmp(&b.length()).then_with(|| a.word.cmp(&b.word)));
    out
}

/// The longest element.
pub fn longest_element(rs: &RootSystem) -> WeylElement {
    WeylElement::from_rho_image(rs, vec![-1; rs.rank()])
}

/// Stabilizer generators: simple indices with `α_i(λ) = 0`.
pub fn stabilizer_generators(lambda: &Coweight) -> Vec<usize> {
    (0..lambda.rank()).filter(|&i| lambda.0[i].is_zero()).collect()
}

/// `ℓ_λ` of the coset sending `λ` to `η`: the number of positive roots negative on `η`.
pub fn ell_lambda(rs: &RootSystem, eta: &Coweight) -> usize {
    (0..rs.num_positive_roots()).filter(|&b| rs.pair(b, eta).is_negative()).count()
}

/// Minimal representative of the class `w W_λ`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct CosetRep {
    pub rep: WeylElement,
    pub lambda: Coweight,
}

impl CosetRep {
    /// `ℓ_λ` of the class.
    pub fn ell(&self) -> usize {
        self.rep.length()
    }

    pub fn image(&self) -> Coweight {
        self.rep.apply(&self.lambda)
    }
}

/// Minimal element `w̃` with `w̃λ = η`.
pub fn min_rep_of_vector(rs: &RootSystem, eta: &Coweight) -> WeylElement {
    let (_, word) = rs.dominant_with_word(eta);
    WeylElement::from_word(rs, &word)
}

/// Minimal representative of `w W_λ`.
pub fn coset_min_rep(rs: &RootSystem, w: &WeylElement, lambda: &Coweight) -> CosetRep {
    let mut u = w.clone();
    let gens = stabilizer_generators(lambda);
    loop {
        let shorter = gens.iter().map(|&i| u.right_mul_simple(rs, i)).find(|v| v.length() < u.length());
        match shorter {
            Some(v) => u = v,
            None => return CosetRep { rep: u, lambda: lambda.clone() },
        }
    }
}

/// Order on `W/W_λ` through minimal representatives.
pub fn coset_leq(rs: &RootSystem, lower: &WeylElement, upper: &WeylElement, lambda: &Coweight) -> bool {
    let a = coset_min_rep(rs, lower, lambda);
    let b = coset_min_rep(rs, upper, lambda);
    bruhat_leq(rs, &a.rep, &b.rep)
}

/// Coset order stated on orbit vectors `η' = w̃'λ`, `η = w̃λ`.
pub fn orbit_leq(rs: &RootSystem, lower: &Coweight, upper: &Coweight) -> bool {
    bruhat_leq(rs, &min_rep_of_vector(rs, lower), &min_rep_of_vector(rs, upper))
}

/// A chamber for chain conditions, given by a vector in its interior
/// relative to the walls in play: `−C^v` or a local chamber `ā_x`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChamberDatum {
    pub toward: Coweight,
}

impl ChamberDatum {
    /// The antidominant chamber `−C^v`.
    pub fn neg_dominant(rs: &RootSystem) -> Self {
        ChamberDatum { toward: -&rs.rho_vee() }
    }

    /// Local chamber at `x` containing the directions toward the point `inner`
    /// (an interior point of an alcove).
    pub fn toward_point(x: &Coweight, inner: &Coweight) -> Self {
        ChamberDatum { toward: inner - x }
    }

    /// Side of the chamber relative to `ker β`.
    pub fn side(&self, rs: &RootSystem, beta: usize) -> i32 {
        sign(&rs.pair(beta, &self.toward))
    }
}

/// A chain `η_0 → … → η_m` with roots `β_1 … β_m`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Chain {
    pub etas: Vec<Coweight>,
    /// Indices of the positive roots used.
    pub roots: Vec<usize>,
}

impl Chain {
    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    /// Checks each step against `chamber`, and integrality at `point` if given.
    pub fn verify(&self, rs: &RootSystem, chamber: &ChamberDatum, point: Option<&Coweight>) -> bool {
        if self.etas.len() != self.roots.len() + 1 {
            return false;
        }
        self.roots.iter().enumerate().all(|(i, &b)| {
            let prev = &self.etas[i];
            let next = &self.etas[i + 1];
            let side = chamber.side(rs, b);
            side != 0
                && rs.reflect(b, prev) == *next
                && sign(&rs.pair(b, prev)) == side
                && point.is_none_or(|p| rs.pair(b, p).is_integer())
        })
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ChainError {
    #[error("{from} and {to} lie in different Weyl orbits")]
    OrbitMismatch { from: String, to: String },
}

/// Whether the step `η ↦ r_β η` is admissible: `η` on the chamber side of
/// `ker β`, and `β(p) ∈ ℤ` when a constraint point is given.
pub fn chain_step_ok(rs: &RootSystem, beta: usize, eta: &Coweight, chamber: &ChamberDatum, point: Option<&Coweight>) -> bool {
    let s = sign(&rs.pair(beta, eta));
    s != 0 && s == chamber.side(rs, beta) && point.is_none_or(|p| rs.pair(beta, p).is_integer())
}

/// Shortest chain from `from` to `to`, breadth first with ties broken by root order.
pub fn find_chain(
    rs: &RootSystem,
    from: &Coweight,
    to: &Coweight,
    chamber: &ChamberDatum,
    point: Option<&Coweight>,
) -> Result<Option<Chain>, ChainError> {
    if rs.dominant_projection(from) != rs.dominant_projection(to) {
        return Err(ChainError::OrbitMismatch { from: from.to_string(), to: to.to_string() });
    }
    let allowed: Vec<usize> = (0..rs.num_positive_roots())
        .filter(|&b| chamber.side(rs, b) != 0 && point.is_none_or(|p| rs.pair(b, p).is_integer()))
        .collect();
    let mut parent: HashMap<Coweight, Option<(Coweight, usize)>> = HashMap::new();
    parent.insert(from.clone(), None);
    let mut queue = VecDeque::from([from.clone()]);
    while let Some(eta) = queue.pop_front() {
        if eta == *to {
            let mut etas = vec![eta.clone()];
            let mut roots = Vec::new();
            let mut cur = eta;
            while let Some(Some((prev, b))) = parent.get(&cur).cloned() {
                etas.push(prev.clone());
                roots.push(b);
                cur = prev;
            }
            etas.reverse();
            roots.reverse();
            return Ok(Some(Chain { etas, roots }));
        }
        for &b in &allowed {
            if sign(&rs.pair(b, &eta)) == chamber.side(rs, b) {
                let next = rs.reflect(b, &eta);
                if !parent.contains_key(&next) {
                    parent.insert(next.clone(), Some((eta.clone(), b)));
                    queue.push_back(next);
                }
            }
        }
    }
    Ok(None)
}

/// Vectors reachable from `from` by admissible chain steps, including `from`.
pub fn chain_reachable(rs: &RootSystem, from: &Coweight, chamber: &ChamberDatum, point: Option<&Coweight>) -> Vec<Coweight> {
    let mut seen = vec![from.clone()];
    let mut queue = VecDeque::from([from.clone()]);
    while let Some(eta) = queue.pop_front() {
        for b in 0..rs.num_positive_roots() {
            if chain_step_ok(rs, b, &eta, chamber, point) {
                let next = rs.reflect(b, &eta);
                if !seen.contains(&next) {
                    seen.push(next.clone());
                    queue.push_back(next);
                }
            }
        }
    }
    seen
}

/// Whether `a` and `b` lie in a common closed Weyl chamber: no root is
/// strictly positive on one and strictly negative on the other.
pub fn share_chamber(rs: &RootSystem, a: &Coweight, b: &Coweight) -> bool {
    (0..rs.num_positive_roots()).all(|r| sign(&rs.pair(r, a)) * sign(&rs.pair(r, b)) >= 0)
}

/// Generators `r_β` of `W_p` for the point `p`: roots with `β(p) ∈ ℤ`.
pub fn local_roots(rs: &RootSystem, p: &Coweight) -> Vec<usize> {
    (0..rs.num_positive_roots()).filter(|&b| rs.pair(b, p).is_integer()).collect()
}

/// Whether `to ∈ W_p · from`.
pub fn in_local_orbit(rs: &RootSystem, from: &Coweight, to: &Coweight, p: &Coweight) -> bool {
    let roots = local_roots(rs, p);
    let mut seen = vec![from.clone()];
    let mut queue = VecDeque::from([from.clone()]);
    while let Some(eta) = queue.pop_front() {
        if eta == *to {
            return true;
        }
        for &b in &roots {
            let next = rs.reflect(b, &eta);
            if !seen.contains(&next) {
                seen.push(next.clone());
                queue.push_back(next);
            }
        }
    }
    false
}

/// Number of positive roots that are strictly negative on `x`; zero iff dominant.
pub fn negativity(rs: &RootSystem, x: &Coweight) -> usize {
    (0..rs.num_positive_roots()).filter(|&b| rs.pair(b, x) < Q::zero()).count()
}
