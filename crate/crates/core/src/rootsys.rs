//! Irreducible root data and the exact geometry of the model apartment.
//!
//! Vectors of the apartment are [`Coweight`]s in the fundamental-coweight
//! basis, so `α_i(x)` is the `i`-th coordinate. Roots are integer
//! coefficient vectors over the simple roots. The Cartan matrix follows the
//! convention `a[i][j] = α_j(α_i∨)`, hence row `i` is `α_i∨` in coweight
//! coordinates.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::coweight::{qi, Coweight, Q};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RootSystemError {
    #[error("invalid rank {rank} for series {series}")]
    InvalidRank { series: char, rank: usize },
    #[error("unknown series {0}")]
    UnknownSeries(char),
    #[error("cannot parse Cartan type {0:?}")]
    Parse(String),
    #[error("{0} is not in the coweight lattice")]
    NotIntegral(String),
    #[error("{0} is not dominant")]
    NotDominant(String),
    #[error("expected {expected} coordinates, got {got}")]
    RankMismatch { expected: usize, got: usize },
}

/// Series letter and rank of an irreducible reduced root system.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CartanType {
    pub series: char,
    pub rank: usize,
}

impl CartanType {
    pub fn new(series: char, rank: usize) -> Result<Self, RootSystemError> {
        let series = series.to_ascii_uppercase();
        let ok = match series {
            'A' => rank >= 1,
            'B' | 'C' => rank >= 2,
            'D' => rank >= 3,
            'E' => (6..=8).contains(&rank),
            'F' => rank == 4,
            'G' => rank == 2,
            _ => return Err(RootSystemError::UnknownSeries(series)),
        };
        if ok {
            Ok(CartanType { series, rank })
        } else {
            Err(RootSystemError::InvalidRank { series, rank })
        }
    }

    /// Every valid type of rank at most `max_rank`.
    pub fn all_up_to(max_rank: usize) -> Vec<CartanType> {
        let mut out = Vec::new();
        for s in ['A', 'B', 'C', 'D', 'E', 'F', 'G'] {
            for r in 1..=max_rank {
                if let Ok(ct) = CartanType::new(s, r) {
                    out.push(ct);
                }
            }
        }
        out
    }
}

impl fmt::Display for CartanType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.series, self.rank)
    }
}

impl FromStr for CartanType {
    type Err = RootSystemError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let mut chars = s.chars();
        let series = chars.next().ok_or_else(|| RootSystemError::Parse(s.to_string()))?;
        let rank: usize = chars
            .as_str()
            .parse()
            .map_err(|_| RootSystemError::Parse(s.to_string()))?;
        CartanType::new(series, rank)
    }
}

impl Serialize for CartanType {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Cartan matrix with `a[i][j] = α_j(α_i∨)`, Bourbaki numbering.
pub fn cartan_matrix(ct: CartanType) -> Vec<Vec<i64>> {
    let n = ct.rank;
    let mut a = vec![vec![0i64; n]; n];
    for (i, row) in a.iter_mut().enumerate() {
        row[i] = 2;
    }
    let mut link = |i: usize, j: usize, aij: i64, aji: i64| {
        a[i][j] = aij;
        a[j][i] = aji;
    };
    match ct.series {
        'A' => {
            for i in 0..n.saturating_sub(1) {
                link(i, i + 1, -1, -1);
            }
        }
        'B' => {
            for i in 0..n - 2 {
                link(i, i + 1, -1, -1);
            }
            link(n - 2, n - 1, -1, -2);
        }
        'C' => {
            for i in 0..n - 2 {
                link(i, i + 1, -1, -1);
            }
            link(n - 2, n - 1, -2, -1);
        }
        'D' => {
            for i in 0..n - 2 {
                link(i, i + 1, -1, -1);
            }
            link(n - 3, n - 1, -1, -1);
        }
        'E' => {
            link(0, 2, -1, -1);
            link(1, 3, -1, -1);
            for i in 2..n - 1 {
                link(i, i + 1, -1, -1);
            }
        }
        'F' => {
            link(0, 1, -1, -1);
            link(1, 2, -1, -2);
            link(2, 3, -1, -1);
        }
        'G' => {
            link(0, 1, -3, -1);
        }
        _ => unreachable!("validated series"),
    }
    a
}

/// An affine wall `M(α,k) = {x : α(x) + k = 0}` for a positive root `α`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Wall {
    /// Index into [`RootSystem::positive_roots`].
    pub root: usize,
    pub level: i64,
}

impl Wall {
    /// `α(x) + k`; zero exactly on the wall.
    pub fn eval(&self, rs: &RootSystem, x: &Coweight) -> Q {
        x.pair(&rs.positive_roots[self.root]) + qi(self.level)
    }

    /// Side of `x` as -1, 0, 1.
    pub fn side(&self, rs: &RootSystem, x: &Coweight) -> i32 {
        crate::coweight::sign(&self.eval(rs, x))
    }
}

/// Immutable root datum of an irreducible type.
#[derive(Clone, Debug)]
pub struct RootSystem {
    pub cartan_type: CartanType,
    pub cartan: Vec<Vec<i64>>,
    /// Positive roots over the simple roots, sorted by height and then with
    /// simple roots in index order.
    pub positive_roots: Vec<Vec<i64>>,
    /// Coroot of each positive root in coweight coordinates.
    pub positive_coroots: Vec<Vec<i64>>,
    /// Coefficients `m_i` of the highest root.
    pub highest_root: Vec<i64>,
    pub k_phi: i64,
    /// Gram matrix of the invariant form `Σ_{β>0} β(x)β(y)` on coweights.
    pub form: Vec<Vec<i64>>,
    root_index: HashMap<Vec<i64>, usize>,
}

fn height(r: &[i64]) -> i64 {
    r.iter().sum()
}

impl RootSystem {
    /// Builds the root datum, generating positive roots by reflection closure.
    pub fn new(ct: CartanType) -> Self {
        let n = ct.rank;
        let cartan = cartan_matrix(ct);
        let reflect_root = |beta: &[i64], j: usize| -> Vec<i64> {
            let pairing: i64 = (0..n).map(|k| beta[k] * cartan[j][k]).sum();
            let mut out = beta.to_vec();
            out[j] -= pairing;
            out
        };
        let reflect_coweight = |x: &[i64], j: usize| -> Vec<i64> {
            let xj = x[j];
            (0..n).map(|k| x[k] - xj * cartan[j][k]).collect()
        };
        let mut seen: HashMap<Vec<i64>, Vec<i64>> = HashMap::new();
        let mut queue = VecDeque::new();
        for i in 0..n {
            let mut e = vec![0; n];
            e[i] = 1;
            seen.insert(e.clone(), cartan[i].clone());
            queue.push_back(e);
        }
        while let Some(beta) = queue.pop_front() {
            let cor = seen[&beta].clone();
            for j in 0..n {
                let b2 = reflect_root(&beta, j);
                if b2.iter().all(|&c| c >= 0) && !seen.contains_key(&b2) {
                    seen.insert(b2.clone(), reflect_coweight(&cor, j));
                    queue.push_back(b2);
                }
            }
        }
        let mut roots: Vec<Vec<i64>> = seen.keys().cloned().collect();
        roots.sort_by(|a, b| height(a).cmp(&height(b)).then_with(|| b.cmp(a)));
        let positive_coroots: Vec<Vec<i64>> = roots.iter().map(|r| seen[r].clone()).collect();
        let highest_root = roots.last().expect("nonempty").clone();
        let k_phi = highest_root.iter().fold(1i64, |acc, &m| acc.lcm(&m));
        let mut form = vec![vec![0i64; n]; n];
        for r in &roots {
            for i in 0..n {
                for j in 0..n {
                    form[i][j] += r[i] * r[j];
                }
            }
        }
        let root_index = roots.iter().enumerate().map(|(i, r)| (r.clone(), i)).collect();
        RootSystem {
            cartan_type: ct,
            cartan,
            positive_roots: roots,
            positive_coroots,
            highest_root,
            k_phi,
            form,
            root_index,
        }
    }

    pub fn from_str_type(s: &str) -> Result<Self, RootSystemError> {
        Ok(RootSystem::new(s.parse()?))
    }

    pub fn rank(&self) -> usize {
        self.cartan_type.rank
    }

    pub fn num_positive_roots(&self) -> usize {
        self.positive_roots.len()
    }

    /// Index of a positive root given by coefficients.
    pub fn root_index(&self, coeffs: &[i64]) -> Option<usize> {
        self.root_index.get(coeffs).copied()
    }

    /// Index of the simple root `α_i` in the positive-root list.
    pub fn simple_root_index(&self, i: usize) -> usize {
        let mut e = vec![0; self.rank()];
        e[i] = 1;
        self.root_index[&e]
    }

    pub fn coroot(&self, beta: usize) -> Coweight {
        Coweight::from_ints(&self.positive_coroots[beta])
    }

    pub fn simple_coroot(&self, i: usize) -> Coweight {
        Coweight::from_ints(&self.cartan[i])
    }

    pub fn fundamental_coweight(&self, i: usize) -> Coweight {
        let mut v = vec![0; self.rank()];
        v[i] = 1;
        Coweight::from_ints(&v)
    }

    /// `ρ∨ = Σ ϖ_i∨`, the half-sum of positive coroots.
    pub fn rho_vee(&self) -> Coweight {
        Coweight::from_ints(&vec![1; self.rank()])
    }

    /// `β(x)` for the positive root with index `beta`.
    pub fn pair(&self, beta: usize, x: &Coweight) -> Q {
        x.pair(&self.positive_roots[beta])
    }

    /// Reflection `r_β(x) = x − β(x)β∨`.
    pub fn reflect(&self, beta: usize, x: &Coweight) -> Coweight {
        let c = self.pair(beta, x);
        if c.is_zero() {
            return x.clone();
        }
        let cor = &self.positive_coroots[beta];
        Coweight(x.0.iter().zip(cor).map(|(a, b)| a - c * *b).collect())
    }

    /// Simple reflection `r_i`.
    pub fn reflect_simple(&self, i: usize, x: &Coweight) -> Coweight {
        let c = x.0[i];
        if c.is_zero() {
            return x.clone();
        }
        Coweight(x.0.iter().zip(&self.cartan[i]).map(|(a, b)| a - c * *b).collect())
    }

    /// Affine reflection in the hyperplane `β = k`.
    pub fn reflect_affine(&self, beta: usize, k: Q, x: &Coweight) -> Coweight {
        let c = self.pair(beta, x) - k;
        let cor = &self.positive_coroots[beta];
        Coweight(x.0.iter().zip(cor).map(|(a, b)| a - c * *b).collect())
    }

    /// Integer matrix of `r_β` acting on coweight coordinates.
    pub fn reflection_matrix(&self, beta: usize) -> Vec<Vec<i64>> {
        let n = self.rank();
        let r = &self.positive_roots[beta];
        let c = &self.positive_coroots[beta];
        (0..n)
            .map(|i| (0..n).map(|j| i64::from(i == j) - c[i] * r[j]).collect())
            .collect()
    }

    /// `(x, ρ)` with `ρ` the half-sum of positive roots.
    pub fn pair_rho(&self, x: &Coweight) -> Q {
        let two: Q = self.positive_roots.iter().map(|r| x.pair(r)).sum();
        two / qi(2)
    }

    /// Invariant form `Σ_{β>0} β(x)β(y)`.
    pub fn inner(&self, x: &Coweight, y: &Coweight) -> Q {
        let mut s = Q::zero();
        for i in 0..self.rank() {
            for j in 0..self.rank() {
                if self.form[i][j] != 0 {
                    s += x.0[i] * y.0[j] * self.form[i][j];
                }
            }
        }
        s
    }

    /// Coordinates of `x` on the simple coroots.
    pub fn coroot_coordinates(&self, x: &Coweight) -> Vec<Q> {
        let n = self.rank();
        // x_j = Σ_i d_i a[i][j]; solve the transposed system.
        let mut m: Vec<Vec<Q>> = (0..n)
            .map(|j| {
                let mut row: Vec<Q> = (0..n).map(|i| qi(self.cartan[i][j])).collect();
                row.push(x.0[j]);
                row
            })
            .collect();
        for col in 0..n {
            let piv = (col..n).find(|&r| !m[r][col].is_zero()).expect("Cartan matrix invertible");
            m.swap(col, piv);
            let p = m[col][col];
            for k in col..=n {
                m[col][k] /= p;
            }
            for r in 0..n {
                if r != col && !m[r][col].is_zero() {
                    let f = m[r][col];
                    for k in col..=n {
                        let v = m[col][k];
                        m[r][k] -= f * v;
                    }
                }
            }
        }
        m.into_iter().map(|row| row[n]).collect()
    }

    pub fn in_coweight_lattice(&self, x: &Coweight) -> bool {
        x.is_integral()
    }

    pub fn in_coroot_lattice(&self, x: &Coweight) -> bool {
        self.coroot_coordinates(x).iter().all(|d| d.is_integer())
    }

    /// `μ ≤ λ` in the dominance order: `λ − μ` is a nonnegative coroot combination.
    pub fn dominance_leq(&self, mu: &Coweight, lambda: &Coweight) -> bool {
        self.coroot_coordinates(&(lambda - mu)).iter().all(|d| !d.is_negative())
    }

    /// Dominant representative of `W·v` with a word `i_1…i_k` such that
    /// `v = r_{i_1}…r_{i_k}(result)`. The word is reduced and picks the
    /// smallest descent at each step.
    pub fn dominant_with_word(&self, v: &Coweight) -> (Coweight, Vec<usize>) {
        let mut x = v.clone();
        let mut word = Vec::new();
        while let Some(i) = (0..self.rank()).find(|&i| x.0[i].is_negative()) {
            x = self.reflect_simple(i, &x);
            word.push(i);
        }
        (x, word)
    }

    /// The unique dominant element of the Weyl orbit of `v`.
    pub fn dominant_projection(&self, v: &Coweight) -> Coweight {
        self.dominant_with_word(v).0
    }

    /// `λ* = −w₀λ`.
    pub fn star(&self, lambda: &Coweight) -> Result<Coweight, RootSystemError> {
        if !lambda.is_dominant() {
            return Err(RootSystemError::NotDominant(lambda.to_string()));
        }
        Ok(self.dominant_projection(&-lambda))
    }

    /// Full Weyl orbit of `v`, sorted.
    pub fn orbit(&self, v: &Coweight) -> Vec<Coweight> {
        let mut seen = BTreeSet::new();
        let mut queue = VecDeque::new();
        seen.insert(v.clone());
        queue.push_back(v.clone());
        while let Some(x) = queue.pop_front() {
            for i in 0..self.rank() {
                let y = self.reflect_simple(i, &x);
                if seen.insert(y.clone()) {
                    queue.push_back(y);
                }
            }
        }
        seen.into_iter().collect()
    }

    /// Vertices of the fundamental alcove: `0`, then `ϖ_i∨/m_i`.
    pub fn alcove_vertices(&self) -> Vec<Coweight> {
        let n = self.rank();
        let mut out = vec![Coweight::zero(n)];
        for i in 0..n {
            let mut v = Coweight::zero(n);
            v.0[i] = Q::new(1, self.highest_root[i]);
            out.push(v);
        }
        out
    }

    /// Indices (into [`alcove_vertices`](Self::alcove_vertices)) of special vertices.
    pub fn special_vertex_indices(&self) -> Vec<usize> {
        let mut out = vec![0];
        out.extend((0..self.rank()).filter(|&i| self.highest_root[i] == 1).map(|i| i + 1));
        out
    }

    /// Barycentre of the fundamental alcove.
    pub fn alcove_centroid(&self) -> Coweight {
        let n = self.rank();
        let mut c = Coweight::zero(n);
        for v in self.alcove_vertices() {
            c = &c + &v;
        }
        c.scale(Q::new(1, n as i64 + 1))
    }

    /// Whether `x` lies in the closed fundamental alcove.
    pub fn in_fundamental_alcove(&self, x: &Coweight) -> bool {
        x.is_dominant() && x.pair(&self.highest_root) <= qi(1)
    }

    /// An element of `W^a = W^v ⋉ Q∨`, as `x ↦ Mx + t`, carrying `y` into
    /// the closed fundamental alcove.
    pub fn reduce_to_fundamental_alcove(&self, y: &Coweight) -> AffineMap {
        let n = self.rank();
        let theta = self.positive_roots.len() - 1;
        let mut map = AffineMap::identity(n);
        let mut x = y.clone();
        loop {
            if let Some(i) = (0..n).find(|&i| x.0[i].is_negative()) {
                let beta = self.simple_root_index(i);
                map = AffineMap::reflection(self, beta, 0).compose(&map);
                x = self.reflect_simple(i, &x);
            } else if x.pair(&self.highest_root) > qi(1) {
                map = AffineMap::reflection(self, theta, 1).compose(&map);
                x = self.reflect_affine(theta, qi(1), &x);
            } else {
                return map;
            }
        }
    }

    /// The permutation `φ_λ` of the vertices of the fundamental alcove
    /// induced by `w_λ ∘ τ_λ`. Entry `i` is the index of `φ_λ(v_i)`.
    pub fn alcove_vertex_action(&self, lambda: &Coweight) -> Result<Vec<usize>, RootSystemError> {
        if lambda.rank() != self.rank() {
            return Err(RootSystemError::RankMismatch { expected: self.rank(), got: lambda.rank() });
        }
        if !lambda.is_integral() {
            return Err(RootSystemError::NotIntegral(lambda.to_string()));
        }
        let c = self.alcove_centroid();
        let w = self.reduce_to_fundamental_alcove(&(&c + lambda));
        let verts = self.alcove_vertices();
        let perm = verts
            .iter()
            .map(|v| {
                let img = w.apply(&(v + lambda));
                verts.iter().position(|u| *u == img).expect("alcove maps to alcove")
            })
            .collect();
        Ok(perm)
    }

    /// Rank of the set of roots taking integral values at `x`; `x` is a
    /// vertex of the alcove structure iff this equals the rank.
    pub fn local_rank(&self, x: &Coweight) -> usize {
        let mut rows: Vec<Vec<Q>> = (0..self.num_positive_roots())
            .filter(|&b| self.pair(b, x).is_integer())
            .map(|b| self.positive_roots[b].iter().map(|&c| qi(c)).collect())
            .collect();
        let n = self.rank();
        let mut r = 0;
        for col in 0..n {
            let Some(p) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else { continue };
            rows.swap(r, p);
            for i in 0..rows.len() {
                if i != r && !rows[i][col].is_zero() {
                    let f = rows[i][col] / rows[r][col];
                    for c in 0..n {
                        let v = rows[r][c];
                        rows[i][c] -= f * v;
                    }
                }
            }
            r += 1;
        }
        r
    }

    pub fn is_vertex(&self, x: &Coweight) -> bool {
        self.local_rank(x) == self.rank()
    }

    /// Canonical JSON document used for golden fixtures.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "cartan_type": self.cartan_type.to_string(),
            "cartan_matrix": self.cartan,
            "positive_roots": self.positive_roots.iter().zip(&self.positive_coroots).map(|(r, c)| {
                serde_json::json!({ "root": r, "coroot": c })
            }).collect::<Vec<_>>(),
            "highest_root": self.highest_root,
            "k_phi": self.k_phi,
        })
    }

    /// Parses comma-separated coordinates and checks the rank.
    pub fn parse_coweight(&self, s: &str) -> Result<Coweight, RootSystemError> {
        let parts: Vec<&str> = s.split(',').map(str::trim).filter(|p| !p.is_empty()).collect();
        let coords = parts
            .iter()
            .map(|p| crate::coweight::parse_q(p).ok_or_else(|| RootSystemError::Parse(s.to_string())))
            .collect::<Result<Vec<_>, _>>()?;
        if coords.len() != self.rank() {
            return Err(RootSystemError::RankMismatch { expected: self.rank(), got: coords.len() });
        }
        Ok(Coweight(coords))
    }
}

/// Affine map `x ↦ Mx + t` with integral linear part.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AffineMap {
    pub linear: Vec<Vec<i64>>,
    pub translation: Coweight,
}

impl AffineMap {
    pub fn identity(n: usize) -> Self {
        AffineMap {
            linear: (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect(),
            translation: Coweight::zero(n),
        }
    }

    /// Reflection in the hyperplane `β = k`.
    pub fn reflection(rs: &RootSystem, beta: usize, k: i64) -> Self {
        let linear = rs.reflection_matrix(beta);
        let translation = rs.coroot(beta).scale(qi(k));
        AffineMap { linear, translation }
    }

    pub fn apply_linear(&self, x: &Coweight) -> Coweight {
        Coweight(
            self.linear
                .iter()
                .map(|row| row.iter().zip(&x.0).fold(Q::zero(), |s, (a, b)| s + b * *a))
                .collect(),
        )
    }

    pub fn apply(&self, x: &Coweight) -> Coweight {
        &self.apply_linear(x) + &self.translation
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &AffineMap) -> AffineMap {
        let n = self.linear.len();
        let linear = (0..n)
            .map(|i| (0..n).map(|j| (0..n).map(|k| self.linear[i][k] * other.linear[k][j]).sum()).collect())
            .collect();
        AffineMap { linear, translation: self.apply(&other.translation) }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coweight::qr;

    fn rs(s: &str) -> RootSystem {
        RootSystem::from_str_type(s).unwrap()
    }

    #[test]
    fn rank_validation() {
        assert!(CartanType::new('A', 0).is_err());
        assert!(CartanType::new('B', 1).is_err());
        assert!(CartanType::new('D', 2).is_err());
        assert!(CartanType::new('E', 5).is_err());
        assert!(CartanType::new('F', 3).is_err());
        assert!(CartanType::new('G', 3).is_err());
        assert!("X3".parse::<CartanType>().is_err());
        assert_eq!("g2".parse::<CartanType>().unwrap().to_string(), "G2");
    }

    #[test]
    fn small_types() {
        let a1 = rs("A1");
        assert_eq!(a1.positive_roots, vec![vec![1]]);
        assert_eq!(a1.k_phi, 1);
        assert_eq!(a1.pair_rho(&a1.fundamental_coweight(0)), qr(1, 2));
        let a2 = rs("A2");
        assert_eq!(a2.num_positive_roots(), 3);
        assert_eq!(a2.highest_root, vec![1, 1]);
        let g2 = rs("G2");
        assert_eq!(g2.num_positive_roots(), 6);
        assert_eq!(g2.highest_root, vec![3, 2]);
        assert_eq!(g2.k_phi, 6);
        assert_eq!(rs("B2").highest_root, vec![1, 2]);
        assert_eq!(rs("F4").highest_root, vec![2, 3, 4, 2]);
    }

    #[test]
    fn root_order_is_height_then_index() {
        let a2 = rs("A2");
        assert_eq!(a2.positive_roots, vec![vec![1, 0], vec![0, 1], vec![1, 1]]);
        assert_eq!(a2.simple_root_index(1), 1);
    }

    #[test]
    fn coroot_pairing_is_two() {
        for t in ["A3", "B3", "C3", "G2", "F4", "D4"] {
            let r = rs(t);
            for b in 0..r.num_positive_roots() {
                assert_eq!(r.pair(b, &r.coroot(b)), qi(2));
            }
        }
    }

    #[test]
    fn projection_and_star() {
        let a2 = rs("A2");
        let v = Coweight::from_ints(&[-1, 0]);
        assert_eq!(a2.dominant_projection(&v), Coweight::from_ints(&[0, 1]));
        assert_eq!(a2.star(&Coweight::from_ints(&[1, 0])).unwrap(), Coweight::from_ints(&[0, 1]));
        let b2 = rs("B2");
        assert_eq!(b2.star(&Coweight::from_ints(&[2, 1])).unwrap(), Coweight::from_ints(&[2, 1]));
        assert!(a2.star(&v).is_err());
    }

    #[test]
    fn coroot_lattice() {
        let a1 = rs("A1");
        assert!(!a1.in_coroot_lattice(&Coweight::from_ints(&[1])));
        assert!(a1.in_coroot_lattice(&Coweight::from_ints(&[2])));
        let a2 = rs("A2");
        assert!(a2.in_coroot_lattice(&Coweight::from_ints(&[1, 1])));
        assert!(!a2.in_coroot_lattice(&Coweight::from_ints(&[1, 0])));
    }

    #[test]
    fn a2_vertex_action_is_three_cycle() {
        let a2 = rs("A2");
        let p = a2.alcove_vertex_action(&Coweight::from_ints(&[1, 0])).unwrap();
        assert!(p.iter().enumerate().all(|(i, &j)| i != j));
        let q = a2.alcove_vertex_action(&Coweight::from_ints(&[1, 1])).unwrap();
        assert_eq!(q, vec![0, 1, 2]);
        assert!(a2.alcove_vertex_action(&Coweight(vec![qr(1, 2), qi(0)])).is_err());
    }

    #[test]
    fn json_fixture_a2() {
        let j = rs("A2").to_json();
        assert_eq!(j["k_phi"], 1);
        assert_eq!(j["positive_roots"][2]["root"], serde_json::json!([1, 1]));
        assert_eq!(j["positive_roots"][2]["coroot"], serde_json::json!([1, 1]));
    }
}
