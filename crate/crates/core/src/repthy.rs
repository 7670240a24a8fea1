//! Weight multiplicities, tensor products via the path rule, the cone of
//! triangle side lengths and the saturation scans.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::{Arc, Mutex};

use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::alcove::Alcove;
use crate::coweight::{qi, Coweight, Q};
use crate::paths::{
    coarse_ls_upgrade, dilate_generalized, fold_dominant, fold_dominant_generalized,
    fundamental_decomposition, generate_ls, is_generalized_hecke, is_generalized_ls, is_hecke, junction_ok,
    stays_dominant, Breakpoint, FoldReference, GeneralizedPath, PLPath, PathError, Segment,
};
use crate::rootsys::{CartanType, RootSystem};
use crate::weyl::{find_chain, longest_element};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RepError {
    #[error("{0} is not a dominant element of P∨")]
    BadWeight(String),
    #[error("oracle inconsistency: {0}")]
    Oracle(String),
    #[error(transparent)]
    Path(#[from] PathError),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("search exceeded {0} nodes")]
    SearchLimit(usize),
}

fn check_weight(rs: &RootSystem, w: &Coweight) -> Result<(), RepError> {
    if w.rank() != rs.rank() || !w.is_integral() || !w.is_dominant() {
        return Err(RepError::BadWeight(w.to_string()));
    }
    Ok(())
}

/// Dominant weights with multiplicities, in a fixed context.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiplicityTable {
    pub cartan_type: CartanType,
    pub context: Vec<Coweight>,
    pub entries: BTreeMap<Coweight, u64>,
}

impl MultiplicityTable {
    pub fn get(&self, w: &Coweight) -> u64 {
        self.entries.get(w).copied().unwrap_or(0)
    }
}

impl Serialize for MultiplicityTable {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        #[derive(Serialize)]
        struct Entry<'a> {
            weight: &'a Coweight,
            multiplicity: u64,
        }
        let entries: Vec<Entry> = self
            .entries
            .iter()
            .rev()
            .map(|(w, &m)| Entry { weight: w, multiplicity: m })
            .collect();
        let mut st = s.serialize_struct("MultiplicityTable", 3)?;
        st.serialize_field("cartan_type", &self.cartan_type)?;
        st.serialize_field("context", &self.context)?;
        st.serialize_field("entries", &entries)?;
        st.end()
    }
}

/// `Π_{β>0} β(λ+ρ∨)/β(ρ∨)`.
pub fn weyl_dimension(rs: &RootSystem, lambda: &Coweight) -> u128 {
    let shifted = lambda + &rs.rho_vee();
    let rho = rs.rho_vee();
    let mut d = Q::from_integer(1);
    for b in 0..rs.num_positive_roots() {
        d = d * rs.pair(b, &shifted) / rs.pair(b, &rho);
    }
    assert!(d.is_integer() && !d.is_negative());
    d.to_integer() as u128
}

/// Dominant weights `μ ≤ λ`, highest first.
pub fn dominant_weights(rs: &RootSystem, lambda: &Coweight) -> Vec<Coweight> {
    let coroots: Vec<Coweight> = (0..rs.num_positive_roots()).map(|b| rs.coroot(b)).collect();
    let mut seen = BTreeSet::from([lambda.clone()]);
    let mut stack = vec![lambda.clone()];
    while let Some(mu) = stack.pop() {
        for c in &coroots {
            let nu = &mu - c;
            if nu.is_dominant() && seen.insert(nu.clone()) {
                stack.push(nu);
            }
        }
    }
    let mut out: Vec<Coweight> = seen.into_iter().collect();
    out.sort_by(|a, b| rs.pair_rho(b).cmp(&rs.pair_rho(a)).then_with(|| b.cmp(a)));
    out
}

/// Freudenthal's recursion over the dominant weights of `V(λ)`, run in the
/// dual root system (coroots as roots, `ρ∨` as Weyl vector).
pub fn freudenthal_table(rs: &RootSystem, lambda: &Coweight) -> Result<MultiplicityTable, RepError> {
    check_weight(rs, lambda)?;
    let rho = rs.rho_vee();
    let coroots: Vec<Coweight> = (0..rs.num_positive_roots()).map(|b| rs.coroot(b)).collect();
    let norm = |x: &Coweight| rs.inner(x, x);
    let top = norm(&(lambda + &rho));
    let mut mult: BTreeMap<Coweight, u64> = BTreeMap::new();
    for mu in dominant_weights(rs, lambda) {
        if mu == *lambda {
            mult.insert(mu, 1);
            continue;
        }
        let mut num = Q::zero();
        for c in &coroots {
            let mut k = 1;
            loop {
                let nu = mu.add_scaled(c, qi(k));
                let Some(&m) = mult.get(&rs.dominant_projection(&nu)) else { break };
                num += qi(2) * rs.inner(&nu, c) * qi(m as i64);
                k += 1;
            }
        }
        let den = top - norm(&(&mu + &rho));
        let m = num / den;
        if !m.is_integer() || m.is_negative() {
            return Err(RepError::Oracle(format!("non-integral multiplicity {m} at {mu}")));
        }
        if !m.is_zero() {
            mult.insert(mu, m.to_integer() as u64);
        }
    }
    Ok(MultiplicityTable { cartan_type: rs.cartan_type, context: vec![lambda.clone()], entries: mult })
}

pub fn mult_freudenthal(rs: &RootSystem, lambda: &Coweight, mu: &Coweight) -> Result<u64, RepError> {
    Ok(freudenthal_table(rs, lambda)?.get(&rs.dominant_projection(mu)))
}

/// Every weight of a table, with Weyl-orbit expansion.
pub fn full_character(rs: &RootSystem, table: &MultiplicityTable) -> BTreeMap<Coweight, i64> {
    let mut out = BTreeMap::new();
    for (w, &m) in &table.entries {
        for v in rs.orbit(w) {
            out.insert(v, m as i64);
        }
    }
    out
}

/// Endpoint counts of the LS paths of type `λ` (all weights).
pub fn ls_character(rs: &RootSystem, lambda: &Coweight) -> Result<BTreeMap<Coweight, u64>, RepError> {
    check_weight(rs, lambda)?;
    let mut out = BTreeMap::new();
    for p in generate_ls(rs, lambda)? {
        *out.entry(p.endpoint()).or_insert(0) += 1;
    }
    Ok(out)
}

/// Dominant part of [`ls_character`].
pub fn ls_table(rs: &RootSystem, lambda: &Coweight) -> Result<MultiplicityTable, RepError> {
    let entries = ls_character(rs, lambda)?
        .into_iter()
        .filter(|(w, _)| w.is_dominant())
        .collect();
    Ok(MultiplicityTable { cartan_type: rs.cartan_type, context: vec![lambda.clone()], entries })
}

pub fn mult_ls(rs: &RootSystem, lambda: &Coweight, mu: &Coweight) -> Result<u64, RepError> {
    Ok(ls_character(rs, lambda)?.get(mu).copied().unwrap_or(0))
}

/// Irreducible constituents of `V(λ) ⊗ V(μ)` by multiplying weight tables
/// and peeling off highest weights.
pub fn character_product_oracle(rs: &RootSystem, lambda: &Coweight, mu: &Coweight) -> Result<MultiplicityTable, RepError> {
    let a = full_character(rs, &freudenthal_table(rs, lambda)?);
    let b = full_character(rs, &freudenthal_table(rs, mu)?);
    let mut prod: BTreeMap<Coweight, i64> = BTreeMap::new();
    for (x, mx) in &a {
        for (y, my) in &b {
            *prod.entry(x + y).or_insert(0) += mx * my;
        }
    }
    let mut out = BTreeMap::new();
    loop {
        prod.retain(|_, m| *m != 0);
        if let Some((w, m)) = prod.iter().find(|(_, m)| **m < 0) {
            return Err(RepError::Oracle(format!("negative multiplicity {m} at {w}")));
        }
        let Some(top) = prod
            .keys()
            .max_by(|x, y| rs.pair_rho(x).cmp(&rs.pair_rho(y)).then_with(|| x.cmp(y)))
            .cloned()
        else {
            break;
        };
        if !top.is_dominant() {
            return Err(RepError::Oracle(format!("highest remaining weight {top} is not dominant")));
        }
        let c = prod[&top];
        out.insert(top.clone(), c as u64);
        for (w, m) in full_character(rs, &freudenthal_table(rs, &top)?) {
            *prod.entry(w).or_insert(0) -= c * m;
        }
    }
    Ok(MultiplicityTable { cartan_type: rs.cartan_type, context: vec![lambda.clone(), mu.clone()], entries: out })
}

/// Memoized LS path sets keyed by type. Safe to share between threads; the
/// stored values do not depend on which thread computed them.
#[derive(Default)]
pub struct LsCache {
    map: Mutex<HashMap<Coweight, Arc<Vec<PLPath>>>>,
}

impl LsCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, rs: &RootSystem, lambda: &Coweight) -> Result<Arc<Vec<PLPath>>, RepError> {
        if let Some(v) = self.map.lock().expect("cache lock").get(lambda) {
            return Ok(v.clone());
        }
        let v = Arc::new(generate_ls(rs, lambda)?);
        self.map.lock().expect("cache lock").entry(lambda.clone()).or_insert(v.clone());
        Ok(v)
    }
}

fn witnesses(rs: &RootSystem, lambda: &Coweight, mu: &Coweight, nu: &Coweight, cache: &LsCache) -> Result<Vec<PLPath>, RepError> {
    for w in [lambda, mu, nu] {
        check_weight(rs, w)?;
    }
    let target = rs.star(nu).map_err(|e| RepError::Precondition(e.to_string()))?;
    let end = &target - lambda;
    Ok(cache
        .get(rs, mu)?
        .iter()
        .filter(|p| p.endpoint() == end && stays_dominant(p, lambda))
        .cloned()
        .collect())
}

/// An LS path `π` of type `μ` with `λ + π(1) = ν*` and `λ + π ⊂ C^v`, if any.
pub fn tensor_invariant_witness(rs: &RootSystem, lambda: &Coweight, mu: &Coweight, nu: &Coweight, cache: &LsCache) -> Result<Option<PLPath>, RepError> {
    Ok(witnesses(rs, lambda, mu, nu, cache)?.into_iter().next())
}

pub fn tensor_invariant_nonzero(rs: &RootSystem, lambda: &Coweight, mu: &Coweight, nu: &Coweight) -> Result<bool, RepError> {
    Ok(tensor_invariant_witness(rs, lambda, mu, nu, &LsCache::new())?.is_some())
}

/// Nonvanishing with the roles permuted so that the path type has the
/// smallest representation; the invariant space is symmetric in the three.
pub fn invariant_nonzero_fast(rs: &RootSystem, lambda: &Coweight, mu: &Coweight, nu: &Coweight, cache: &LsCache) -> Result<bool, RepError> {
    let mut ws = [lambda, mu, nu];
    ws.sort_by_key(|w| (weyl_dimension(rs, w), (*w).clone()));
    Ok(tensor_invariant_witness(rs, ws[1], ws[0], ws[2], cache)?.is_some())
}

/// Number of witness paths: the multiplicity of `V(ν*)` in `V(λ) ⊗ V(μ)`.
pub fn lr_multiplicity(rs: &RootSystem, lambda: &Coweight, mu: &Coweight, nu: &Coweight, cache: &LsCache) -> Result<u64, RepError> {
    Ok(witnesses(rs, lambda, mu, nu, cache)?.len() as u64)
}

pub fn lr_witnesses(rs: &RootSystem, lambda: &Coweight, mu: &Coweight, nu: &Coweight, cache: &LsCache) -> Result<Vec<PLPath>, RepError> {
    witnesses(rs, lambda, mu, nu, cache)
}

/// `V(λ) ⊗ V(μ)` by the path rule: `ν ↦ #{π : λ + π ⊂ C^v, λ + π(1) = ν}`.
pub fn tensor_decomposition(rs: &RootSystem, lambda: &Coweight, mu: &Coweight, cache: &LsCache) -> Result<MultiplicityTable, RepError> {
    check_weight(rs, lambda)?;
    check_weight(rs, mu)?;
    let mut entries = BTreeMap::new();
    for p in cache.get(rs, mu)?.iter() {
        if stays_dominant(p, lambda) {
            *entries.entry(lambda + &p.endpoint()).or_insert(0) += 1;
        }
    }
    Ok(MultiplicityTable { cartan_type: rs.cartan_type, context: vec![lambda.clone(), mu.clone()], entries })
}

/// Limits of the folded-path search.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SearchConfig {
    /// Maximal number of bends; `None` uses `ℓ(w_0)` times the number of
    /// walls crossed by the straight path of the total type.
    pub max_folds: Option<usize>,
    /// Allow bends only at vertices.
    pub vertex_only: bool,
    pub node_limit: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig { max_folds: None, vertex_only: false, node_limit: 2_000_000 }
    }
}

struct Search<'a> {
    rs: &'a RootSystem,
    target: Coweight,
    types: Vec<Coweight>,
    tails: Vec<Coweight>,
    orbits: Vec<Vec<Coweight>>,
    reference: FoldReference,
    vertex_only: bool,
    max_folds: usize,
    node_limit: usize,
    nodes: usize,
    failed: HashMap<(usize, Q, Coweight, Coweight), usize>,
    factors: Vec<Vec<Segment>>,
}

impl Search<'_> {
    fn reachable(&self, k: usize, s: Q, y: &Coweight) -> bool {
        let budget = self.types[k].scale(Q::from_integer(1) - s).add_scaled(&self.tails[k], Q::from_integer(1));
        let need = self.rs.dominant_projection(&(&self.target - y));
        self.rs.coroot_coordinates(&(&budget - &need)).iter().all(|c| !c.is_negative())
    }

    fn stop_times(&self, s: Q, x: &Coweight, eta: &Coweight) -> Vec<Q> {
        let one = Q::from_integer(1);
        let mut ts = BTreeSet::new();
        for b in 0..self.rs.num_positive_roots() {
            let c = self.rs.pair(b, eta);
            if c.is_zero() {
                continue;
            }
            let a0 = self.rs.pair(b, x);
            let a1 = a0 + c * (one - s);
            let (lo, hi) = if a0 < a1 { (a0, a1) } else { (a1, a0) };
            let mut m = lo.floor().to_integer();
            while qi(m) <= hi {
                let t = s + (qi(m) - a0) / c;
                if t > s && t < one {
                    ts.insert(t);
                }
                m += 1;
            }
        }
        let mut out: Vec<Q> = ts
            .into_iter()
            .filter(|t| !self.vertex_only || self.rs.is_vertex(&x.add_scaled(eta, *t - s)))
            .collect();
        out.insert(0, one);
        out
    }

    fn decide(&mut self, k: usize, s: Q, x: &Coweight, incoming: Option<&Coweight>, folds: usize) -> Result<bool, RepError> {
        self.nodes += 1;
        if self.nodes > self.node_limit {
            return Err(RepError::SearchLimit(self.node_limit));
        }
        let key = (k, s, x.clone(), incoming.cloned().unwrap_or_else(|| Coweight::zero(x.rank())));
        if self.failed.get(&key).is_some_and(|&f| folds >= f) {
            return Ok(false);
        }
        let goal = &self.target - x;
        let mut dirs = self.orbits[k].clone();
        dirs.sort_by(|a, b| self.rs.inner(b, &goal).cmp(&self.rs.inner(a, &goal)).then_with(|| a.cmp(b)));
        for eta in dirs {
            let bend = incoming.is_some_and(|inc| *inc != eta);
            if incoming.is_some_and(|inc| *inc == eta) && s > Q::zero() {
                continue;
            }
            if bend {
                if folds >= self.max_folds || (self.vertex_only && !self.rs.is_vertex(x)) {
                    continue;
                }
                let inc = incoming.expect("bend has an incoming direction");
                let ok = if s.is_zero() {
                    let bp = Breakpoint { time: Q::zero(), point: x.clone(), incoming: inc.clone(), outgoing: eta.clone() };
                    junction_ok(self.rs, &bp, &self.reference)
                } else {
                    let ch = self.reference.chamber_at(self.rs, x);
                    find_chain(self.rs, inc, &eta, &ch, Some(x)).map_err(PathError::from)?.is_some()
                };
                if !ok {
                    continue;
                }
            }
            if self.advance(k, s, x, &eta, folds + usize::from(bend))? {
                return Ok(true);
            }
        }
        let e = self.failed.entry(key).or_insert(folds);
        *e = (*e).min(folds);
        Ok(false)
    }

    fn advance(&mut self, k: usize, s: Q, x: &Coweight, eta: &Coweight, folds: usize) -> Result<bool, RepError> {
        let one = Q::from_integer(1);
        for t in self.stop_times(s, x, eta) {
            let y = x.add_scaled(eta, t - s);
            if !self.reachable(k, t, &y) {
                continue;
            }
            self.factors[k].push(Segment { direction: eta.clone(), duration: t - s });
            let done = if t == one {
                if k + 1 == self.types.len() {
                    y == self.target
                } else {
                    self.decide(k + 1, Q::zero(), &y, Some(eta), folds)?
                }
            } else {
                self.decide(k, t, &y, Some(eta), folds)?
            };
            if done {
                return Ok(true);
            }
            self.factors[k].pop();
        }
        Ok(false)
    }
}

/// Depth-first search for a generalized Hecke path from `start` to `target`
/// whose factors have the given types.
pub fn hecke_search(
    rs: &RootSystem,
    start: &Coweight,
    target: &Coweight,
    types: &[Coweight],
    reference: &FoldReference,
    cfg: &SearchConfig,
) -> Result<Option<GeneralizedPath>, RepError> {
    let types: Vec<Coweight> = types.iter().filter(|t| !t.is_zero()).cloned().collect();
    if types.is_empty() {
        return Ok((start == target)
            .then(|| GeneralizedPath::straight(rs, &Coweight::zero(rs.rank()), &[]).ok())
            .flatten());
    }
    let total = types.iter().fold(Coweight::zero(rs.rank()), |a, t| &a + t);
    let walls: i64 = (0..rs.num_positive_roots()).map(|b| rs.pair(b, &total).to_integer()).sum();
    let max_folds = cfg
        .max_folds
        .unwrap_or(longest_element(rs).length() * walls.max(1) as usize);
    let mut tails = vec![Coweight::zero(rs.rank()); types.len()];
    for k in (0..types.len() - 1).rev() {
        tails[k] = &tails[k + 1] + &types[k + 1];
    }
    let mut search = Search {
        rs,
        target: target.clone(),
        orbits: types.iter().map(|t| rs.orbit(t)).collect(),
        types: types.clone(),
        tails,
        reference: reference.clone(),
        vertex_only: cfg.vertex_only,
        max_folds,
        node_limit: cfg.node_limit,
        nodes: 0,
        failed: HashMap::new(),
        factors: vec![Vec::new(); types.len()],
    };
    if !search.reachable(0, Q::zero(), start) || !search.decide(0, Q::zero(), start, None, 0)? {
        return Ok(None);
    }
    let mut base = start.clone();
    let mut factors = Vec::new();
    for segs in search.factors {
        let f = PLPath::new(base, segs)?;
        base = f.endpoint();
        factors.push(f);
    }
    Ok(Some(GeneralizedPath::new(rs, types, factors)?))
}

/// How membership in the cone of side lengths was decided.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConeResult {
    pub member: bool,
    /// `"tensor-witness"`, `"search"` or `"trivial"`.
    pub via: String,
    /// Vertex of `𝔞_-` playing the role of the triangle's first corner.
    pub origin: Option<Coweight>,
    pub path: Option<PLPath>,
}

/// Whether some triangle with side lengths `(λ, μ, ν)` unfolds to an
/// apartment polygon: a vertex `x_0` of `𝔞_-` and a path of type `μ`,
/// Hecke relative to `𝔞_-`, from `x_0 + wλ` to `x_0 + w'ν*`. At `x_0 = 0`
/// folding into `C^v` reduces to the single pair `λ → ν*`.
pub fn cone_membership(
    rs: &RootSystem,
    lambda: &Coweight,
    mu: &Coweight,
    nu: &Coweight,
    cfg: &SearchConfig,
    cache: &LsCache,
) -> Result<ConeResult, RepError> {
    for w in [lambda, mu, nu] {
        check_weight(rs, w)?;
    }
    let target = rs.star(nu).map_err(|e| RepError::Precondition(e.to_string()))?;
    let zero = Coweight::zero(rs.rank());
    if mu.is_zero() {
        let member = rs.dominant_projection(&target) == *lambda;
        return Ok(ConeResult { member, via: "trivial".into(), origin: member.then_some(zero), path: None });
    }
    let neg = Alcove::negative(rs);
    let reference = FoldReference::Alcove(neg.clone());
    if let Some(w) = tensor_invariant_witness(rs, lambda, mu, nu, cache)? {
        let p = w.translate(lambda);
        if !is_hecke(rs, &p, &reference)? {
            return Err(RepError::Oracle("tensor witness is not Hecke relative to 𝔞_-".into()));
        }
        return Ok(ConeResult { member: true, via: "tensor-witness".into(), origin: Some(zero), path: Some(p) });
    }
    let mut attempts = vec![(zero.clone(), lambda.clone(), target.clone())];
    for x0 in neg.vertices(rs).into_iter().filter(|v| !v.is_zero()) {
        for s in rs.orbit(lambda) {
            for t in rs.orbit(&target) {
                attempts.push((x0.clone(), &x0 + &s, &x0 + &t));
            }
        }
    }
    for (x0, s, t) in attempts {
        if let Some(g) = hecke_search(rs, &s, &t, std::slice::from_ref(mu), &reference, cfg)? {
            return Ok(ConeResult {
                member: true,
                via: "search".into(),
                origin: Some(x0),
                path: Some(g.factors[0].clone()),
            });
        }
    }
    Ok(ConeResult { member: false, via: "search".into(), origin: None, path: None })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StageCheck {
    pub name: String,
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Stage {
    pub stage: String,
    pub checks: Vec<StageCheck>,
    pub path: Option<serde_json::Value>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PipelineTrace {
    pub lambda: Coweight,
    pub mu: Coweight,
    pub nu: Coweight,
    pub n: i64,
    pub k: i64,
    pub stages: Vec<Stage>,
    pub ok: bool,
}

impl PipelineTrace {
    pub fn failures(&self) -> Vec<String> {
        self.stages
            .iter()
            .flat_map(|s| s.checks.iter().filter(|c| !c.ok).map(move |c| format!("{}: {}", s.stage, c.name)))
            .collect()
    }
}

fn check(name: &str, ok: bool) -> StageCheck {
    StageCheck { name: name.into(), ok }
}

fn bends(g: &GeneralizedPath) -> Vec<Coweight> {
    let mut pts: Vec<Coweight> = g.factors.iter().flat_map(|f| f.breakpoints().into_iter().map(|b| b.point)).collect();
    pts.extend(g.junctions().into_iter().filter(|j| j.incoming != j.outgoing).map(|j| j.point));
    pts
}

fn inside_dominant(g: &GeneralizedPath) -> bool {
    g.factors.iter().all(|f| stays_dominant(f, &Coweight::zero(f.rank())))
}

/// Runs the dilation, substitution, folding and upgrade steps of the
/// saturation argument on a triple with a nonzero invariant at `N`.
pub fn pipeline_steps45(
    rs: &RootSystem,
    lambda: &Coweight,
    mu: &Coweight,
    nu: &Coweight,
    n: i64,
    cfg: &SearchConfig,
    cache: &LsCache,
) -> Result<PipelineTrace, RepError> {
    let k = rs.k_phi;
    let nq = qi(n);
    let (nl, nm, nn) = (lambda.scale(nq), mu.scale(nq), nu.scale(nq));
    let Some(w) = tensor_invariant_witness(rs, &nl, &nm, &nn, cache)? else {
        return Err(RepError::Precondition(format!("no invariant at N={n}")));
    };
    let alc = FoldReference::Alcove(Alcove::negative(rs));
    let neg = FoldReference::NegDominant;
    let target = rs.star(nu).map_err(|e| RepError::Precondition(e.to_string()))?;
    let json = |v: &dyn erased::ToJson| Some(v.to_json());
    let mut stages = Vec::new();

    let poly = w.translate(&nl);
    stages.push(Stage {
        stage: "witness".into(),
        checks: vec![
            check("ends at (Nν)*", poly.endpoint() == target.scale(nq)),
            check("stays in C^v", stays_dominant(&poly, &Coweight::zero(rs.rank()))),
            check("Hecke relative to 𝔞_-", is_hecke(rs, &poly, &alc)?),
        ],
        path: json(&poly),
    });

    let (origin, hecke) = if n == 1 {
        (Coweight::zero(rs.rank()), Some(poly.clone()))
    } else {
        let c = cone_membership(rs, lambda, mu, nu, cfg, cache)?;
        (c.origin.unwrap_or_else(|| Coweight::zero(rs.rank())), c.path)
    };
    let Some(h) = hecke else {
        stages.push(Stage { stage: "hecke-type-mu".into(), checks: vec![check("found", false)], path: None });
        return Ok(PipelineTrace { lambda: lambda.clone(), mu: mu.clone(), nu: nu.clone(), n, k, stages, ok: false });
    };
    stages.push(Stage {
        stage: "hecke-type-mu".into(),
        checks: vec![
            check("found", true),
            check("type μ", mu.is_zero() || h.is_lambda_path(rs, mu)),
            check(
                "from x₀ + Wλ to x₀ + Wν*",
                rs.dominant_projection(&(&h.base - &origin)) == *lambda
                    && rs.dominant_projection(&(&h.endpoint() - &origin)) == rs.dominant_projection(&target),
            ),
            check("Hecke relative to 𝔞_-", is_hecke(rs, &h, &alc)?),
            check("folding keeps Hecke relative to 𝔞_-", is_hecke(rs, &fold_dominant(rs, &h), &alc)?),
        ],
        path: json(&h),
    });

    let hk = h.dilate(k);
    stages.push(Stage {
        stage: "dilate".into(),
        checks: vec![
            check("Hecke relative to 𝔞_-", is_hecke(rs, &hk, &alc)?),
            check("folding keeps Hecke relative to 𝔞_-", is_hecke(rs, &fold_dominant(rs, &hk), &alc)?),
            check("ends are special", hk.base.is_integral() && hk.endpoint().is_integral()),
        ],
        path: json(&hk),
    });

    let eta = mu.scale(qi(k));
    let types = fundamental_decomposition(rs, &eta)?;
    let (kl, kt) = (lambda.scale(qi(k)), target.scale(qi(k)));
    let vcfg = SearchConfig { vertex_only: true, ..cfg.clone() };
    let g = if types.is_empty() {
        None
    } else {
        hecke_search(rs, &kl, &kt, &types, &alc, &vcfg)?
    };
    let finish = |stages: Vec<Stage>| {
        let ok = stages.iter().all(|s| s.checks.iter().all(|c| c.ok));
        PipelineTrace { lambda: lambda.clone(), mu: mu.clone(), nu: nu.clone(), n, k, stages, ok }
    };
    let Some(g) = g else {
        let trivial = types.is_empty() && kl == kt;
        stages.push(Stage { stage: "generalized".into(), checks: vec![check("found", trivial)], path: None });
        if trivial {
            let k2 = k * k;
            stages.push(Stage {
                stage: "nonvanishing".into(),
                checks: vec![check(
                    "invariant at k²",
                    invariant_nonzero_fast(rs, &lambda.scale(qi(k2)), &mu.scale(qi(k2)), &nu.scale(qi(k2)), cache)?,
                )],
                path: None,
            });
        }
        return Ok(finish(stages));
    };
    stages.push(Stage {
        stage: "generalized".into(),
        checks: vec![
            check("found", true),
            check("generalized Hecke relative to 𝔞_-", is_generalized_hecke(rs, &g, &alc)?),
            check("bends at vertices", bends(&g).iter().all(|p| rs.is_vertex(p))),
        ],
        path: json(&g),
    });

    let folded = fold_dominant_generalized(rs, &g)?;
    stages.push(Stage {
        stage: "fold".into(),
        checks: vec![
            check("inside C^v", inside_dominant(&folded)),
            check("same ends", folded.factors[0].base == kl && folded.endpoint() == kt),
            check("generalized Hecke relative to 𝔞_-", is_generalized_hecke(rs, &folded, &alc)?),
            check("generalized Hecke relative to −C^v", is_generalized_hecke(rs, &folded, &neg)?),
        ],
        path: json(&folded),
    });

    let dk = dilate_generalized(&folded, k);
    stages.push(Stage {
        stage: "dilate-again".into(),
        checks: vec![
            check("bends are special", bends(&dk).iter().all(|p| p.is_integral())),
            check("generalized Hecke relative to −C^v", is_generalized_hecke(rs, &dk, &neg)?),
        ],
        path: json(&dk),
    });

    let mut upgrades = true;
    for f in &dk.factors {
        upgrades &= coarse_ls_upgrade(rs, f)?.is_some();
    }
    stages.push(Stage {
        stage: "ls-upgrade".into(),
        checks: vec![check("factors are LS", upgrades), check("generalized LS", is_generalized_ls(rs, &dk)?)],
        path: None,
    });

    let k2 = k * k;
    let (l2, m2, n2) = (lambda.scale(qi(k2)), mu.scale(qi(k2)), nu.scale(qi(k2)));
    stages.push(Stage {
        stage: "nonvanishing".into(),
        checks: vec![
            check(
                "generalized witness from k²λ to k²ν* in C^v",
                dk.factors[0].base == l2 && dk.endpoint() == target.scale(qi(k2)) && inside_dominant(&dk),
            ),
            check("invariant at k²", invariant_nonzero_fast(rs, &l2, &m2, &n2, cache)?),
        ],
        path: None,
    });
    Ok(finish(stages))
}

mod erased {
    pub trait ToJson {
        fn to_json(&self) -> serde_json::Value;
    }

    impl<T: serde::Serialize> ToJson for T {
        fn to_json(&self) -> serde_json::Value {
            serde_json::to_value(self).expect("serializable")
        }
    }
}

/// Parameters of a saturation scan.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ScanConfig {
    pub bound: i64,
    pub n_max: i64,
    pub search: SearchConfig,
    pub pipeline: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TripleRecord {
    pub lambda: Coweight,
    pub mu: Coweight,
    pub nu: Coweight,
    /// Nonvanishing of the invariants for `N = 1..=n_max`.
    pub invariants: Vec<bool>,
    pub at_k: bool,
    pub at_k2: bool,
    pub cone: Option<bool>,
    pub cone_via: Option<String>,
    pub theorem_ok: bool,
    pub cone_saturated: bool,
    pub k_conjecture_ok: bool,
    pub saturated_k1: bool,
    pub pipeline_ok: Option<bool>,
    pub pipeline_failures: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScanReport {
    pub cartan_type: CartanType,
    pub k_phi: i64,
    pub config: ScanConfig,
    pub version: String,
    pub triples: usize,
    pub nonzero: usize,
    pub theorem_violations: usize,
    pub cone_saturation_failures: usize,
    pub k_conjecture_holds: bool,
    pub saturation_k1_holds: bool,
    pub pipeline_failures: usize,
    pub records: Vec<TripleRecord>,
}

/// Dominant triples in the box `[0, bound]^rank` with `λ + μ + ν ∈ Q∨`.
pub fn scan_triples(rs: &RootSystem, bound: i64) -> Vec<(Coweight, Coweight, Coweight)> {
    let n = rs.rank();
    let mut box_pts = Vec::new();
    let mut idx = vec![0i64; n];
    loop {
        box_pts.push(Coweight::from_ints(&idx));
        let mut i = 0;
        while i < n {
            idx[i] += 1;
            if idx[i] <= bound {
                break;
            }
            idx[i] = 0;
            i += 1;
        }
        if i == n {
            break;
        }
    }
    let mut out = Vec::new();
    for l in &box_pts {
        for m in &box_pts {
            for v in &box_pts {
                if rs.in_coroot_lattice(&(&(l + m) + v)) {
                    out.push((l.clone(), m.clone(), v.clone()));
                }
            }
        }
    }
    out
}

fn scan_one(rs: &RootSystem, l: &Coweight, m: &Coweight, v: &Coweight, cfg: &ScanConfig, cache: &LsCache) -> Result<TripleRecord, RepError> {
    let k = rs.k_phi;
    let at = |c: i64| invariant_nonzero_fast(rs, &l.scale(qi(c)), &m.scale(qi(c)), &v.scale(qi(c)), cache);
    let invariants = (1..=cfg.n_max).map(at).collect::<Result<Vec<_>, _>>()?;
    let any = invariants.iter().any(|&b| b);
    let (at_k, at_k2) = if any { (at(k)?, at(k * k)?) } else { (false, false) };
    let mut rec = TripleRecord {
        lambda: l.clone(),
        mu: m.clone(),
        nu: v.clone(),
        theorem_ok: !any || at_k2,
        k_conjecture_ok: !any || at_k,
        saturated_k1: !any || invariants[0],
        invariants,
        at_k,
        at_k2,
        cone: None,
        cone_via: None,
        cone_saturated: true,
        pipeline_ok: None,
        pipeline_failures: Vec::new(),
    };
    if any {
        let c = cone_membership(rs, l, m, v, &cfg.search, cache)?;
        rec.cone_saturated = c.member;
        rec.cone = Some(c.member);
        rec.cone_via = Some(c.via);
        if cfg.pipeline {
            let n = rec.invariants.iter().position(|&b| b).expect("some N") as i64 + 1;
            let trace = pipeline_steps45(rs, l, m, v, n, &cfg.search, cache)?;
            rec.pipeline_ok = Some(trace.ok);
            rec.pipeline_failures = trace.failures();
        }
    }
    Ok(rec)
}

/// Runs the scan on a pool of `jobs` workers; the report does not depend on `jobs`.
pub fn saturation_scan(rs: &RootSystem, cfg: &ScanConfig, jobs: usize) -> Result<ScanReport, RepError> {
    let triples = scan_triples(rs, cfg.bound);
    let cache = LsCache::new();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| RepError::Precondition(e.to_string()))?;
    let records = pool.install(|| {
        triples
            .par_iter()
            .map(|(l, m, v)| scan_one(rs, l, m, v, cfg, &cache))
            .collect::<Result<Vec<_>, _>>()
    })?;
    Ok(ScanReport {
        cartan_type: rs.cartan_type,
        k_phi: rs.k_phi,
        config: cfg.clone(),
        version: crate::VERSION.to_string(),
        triples: records.len(),
        nonzero: records.iter().filter(|r| r.invariants.iter().any(|&b| b)).count(),
        theorem_violations: records.iter().filter(|r| !r.theorem_ok).count(),
        cone_saturation_failures: records.iter().filter(|r| !r.cone_saturated).count(),
        k_conjecture_holds: records.iter().all(|r| r.k_conjecture_ok),
        saturation_k1_holds: records.iter().all(|r| r.saturated_k1),
        pipeline_failures: records.iter().filter(|r| r.pipeline_ok == Some(false)).count(),
        records,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(v: &[i64]) -> Coweight {
        Coweight::from_ints(v)
    }

    #[test]
    fn dimensions_and_freudenthal() {
        let a2 = RootSystem::from_str_type("A2").unwrap();
        assert_eq!(weyl_dimension(&a2, &w(&[1, 1])), 8);
        let t = freudenthal_table(&a2, &w(&[1, 1])).unwrap();
        assert_eq!(t.get(&w(&[0, 0])), 2);
        assert_eq!(t.get(&w(&[1, 1])), 1);
        let total: i64 = full_character(&a2, &t).values().sum();
        assert_eq!(total, 8);
        assert_eq!(mult_freudenthal(&a2, &w(&[1, 0]), &w(&[0, 1])).unwrap(), 0);
        let g2 = RootSystem::from_str_type("G2").unwrap();
        assert_eq!(weyl_dimension(&g2, &w(&[1, 0])), 14);
        assert_eq!(weyl_dimension(&g2, &w(&[0, 1])), 7);
    }

    #[test]
    fn product_oracle_sl2() {
        let a1 = RootSystem::from_str_type("A1").unwrap();
        let t = character_product_oracle(&a1, &w(&[2]), &w(&[2])).unwrap();
        let expect: BTreeMap<Coweight, u64> = [(w(&[4]), 1), (w(&[2]), 1), (w(&[0]), 1)].into_iter().collect();
        assert_eq!(t.entries, expect);
        let t = character_product_oracle(&a1, &w(&[3]), &w(&[0])).unwrap();
        assert_eq!(t.entries.len(), 1);
    }

    #[test]
    fn invariants_a2() {
        let a2 = RootSystem::from_str_type("A2").unwrap();
        let cache = LsCache::new();
        assert!(tensor_invariant_nonzero(&a2, &w(&[1, 0]), &w(&[1, 0]), &w(&[1, 0])).unwrap());
        assert!(!tensor_invariant_nonzero(&a2, &w(&[1, 0]), &w(&[1, 0]), &w(&[0, 1])).unwrap());
        assert_eq!(lr_multiplicity(&a2, &w(&[1, 1]), &w(&[1, 1]), &w(&[1, 1]), &cache).unwrap(), 2);
        assert_eq!(lr_multiplicity(&a2, &w(&[2, 1]), &w(&[0, 0]), &w(&[1, 2]), &cache).unwrap(), 1);
    }

    #[test]
    fn cone_search_agrees_with_witness() {
        let b2 = RootSystem::from_str_type("B2").unwrap();
        let cache = LsCache::new();
        let alc = FoldReference::Alcove(Alcove::negative(&b2));
        let (l, m, v) = (w(&[1, 0]), w(&[1, 1]), w(&[0, 1]));
        assert!(tensor_invariant_nonzero(&b2, &l, &m, &v).unwrap());
        let g = hecke_search(&b2, &l, &b2.star(&v).unwrap(), std::slice::from_ref(&m), &alc, &SearchConfig::default())
            .unwrap()
            .unwrap();
        assert!(is_hecke(&b2, &g.factors[0], &alc).unwrap());
        assert!(cone_membership(&b2, &l, &m, &v, &SearchConfig::default(), &cache).unwrap().member);
    }
}
