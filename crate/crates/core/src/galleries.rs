//! Galleries of alcoves of the type of a minimal gallery `γ_λ` from `0` to
//! `λ`, their positive folds relative to the sector germ of `−C^v`, and the
//! load-bearing walls that give their dimension.

use std::collections::BTreeMap;
use std::io::Write;

use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::alcove::Alcove;
use crate::coweight::{qi, Coweight, Q};
use crate::paths::{PLPath, Segment};
use crate::rootsys::{RootSystem, Wall};
use crate::weyl::{enumerate_group, longest_element};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GalleryError {
    #[error("expected {expected} coordinates, got {got}")]
    RankMismatch { expected: usize, got: usize },
    #[error("{0} is not in P∨")]
    NotIntegral(String),
    #[error("{0} is not dominant and regular")]
    NotRegularDominant(String),
    #[error("gallery is not positively folded")]
    NotPositivelyFolded,
    #[error("gallery type does not match the model")]
    TypeMismatch,
}

/// Alcoves `𝔞'_0, …, 𝔞'_p` of type `(i_1, …, i_p)`; step `j` either crosses
/// the face of type `i_j` or folds back onto it.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Gallery {
    pub type_word: Vec<usize>,
    pub alcoves: Vec<Alcove>,
    pub folds: Vec<bool>,
}

impl Gallery {
    pub fn len(&self) -> usize {
        self.type_word.len()
    }

    pub fn is_empty(&self) -> bool {
        self.type_word.is_empty()
    }

    pub fn first(&self) -> &Alcove {
        &self.alcoves[0]
    }

    pub fn last(&self) -> &Alcove {
        self.alcoves.last().expect("nonempty")
    }

    /// Steps (1-based) at which the gallery folds.
    pub fn fold_steps(&self) -> Vec<usize> {
        (0..self.len()).filter(|&j| self.folds[j]).map(|j| j + 1).collect()
    }

    /// The wall `M_j` carrying the face of type `i_j` of `𝔞'_j` (1-based `j`).
    pub fn wall(&self, rs: &RootSystem, j: usize) -> Wall {
        self.alcoves[j].face_wall(rs, self.type_word[j - 1])
    }
}

impl Serialize for Gallery {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("Gallery", 4)?;
        st.serialize_field("type_word", &self.type_word)?;
        st.serialize_field("fold_steps", &self.fold_steps())?;
        st.serialize_field("linear_parts", &self.alcoves.iter().map(|a| &a.map.linear).collect::<Vec<_>>())?;
        st.serialize_field("translations", &self.alcoves.iter().map(|a| &a.map.translation).collect::<Vec<_>>())?;
        st.end()
    }
}

/// The fixed minimal gallery `γ_λ` together with the data linking it to `[0, λ]`.
#[derive(Clone, Debug, Serialize)]
pub struct MinimalGallery {
    pub lambda: Coweight,
    pub gallery: Gallery,
    /// Wall crossed at each step.
    pub walls: Vec<Wall>,
    /// Time at which `t ↦ tλ` meets each crossed wall; nondecreasing.
    #[serde(skip)]
    pub times: Vec<Q>,
    /// Type of `λ` as a vertex of the last alcove.
    pub target_type: usize,
}

/// `γ_λ` from the fundamental alcove to the alcove at `λ` on the side of `0`,
/// crossing walls in the order the segment `[0, λ]` meets them.
///
/// Any regular dominant `λ ∈ P∨` is accepted, not only `λ ∈ Q∨`.
pub fn minimal_gallery(rs: &RootSystem, lambda: &Coweight) -> Result<MinimalGallery, GalleryError> {
    if lambda.rank() != rs.rank() {
        return Err(GalleryError::RankMismatch { expected: rs.rank(), got: lambda.rank() });
    }
    if !lambda.is_integral() {
        return Err(GalleryError::NotIntegral(lambda.to_string()));
    }
    if !lambda.is_regular_dominant() {
        return Err(GalleryError::NotRegularDominant(lambda.to_string()));
    }
    let mut pending: Vec<(Q, Wall)> = Vec::new();
    for b in 0..rs.num_positive_roots() {
        let top = rs.pair(b, lambda).to_integer();
        for k in 1..top {
            pending.push((Q::new(k, top), Wall { root: b, level: -k }));
        }
    }
    let mut cur = Alcove::fundamental(rs);
    let mut alcoves = vec![cur.clone()];
    let mut type_word = Vec::new();
    let mut walls = Vec::new();
    let mut times = Vec::new();
    while !pending.is_empty() {
        let (ty, pos) = (0..=rs.rank())
            .filter_map(|ty| {
                let w = cur.face_wall(rs, ty);
                pending.iter().position(|(_, pw)| *pw == w).map(|pos| (ty, pos))
            })
            .min_by(|a, b| pending[a.1].cmp(&pending[b.1]))
            .expect("some face separates the current alcove from the target");
        let (t, w) = pending.remove(pos);
        cur = cur.neighbour(rs, ty);
        alcoves.push(cur.clone());
        type_word.push(ty);
        walls.push(w);
        times.push(t);
    }
    debug_assert!(times.windows(2).all(|w| w[0] <= w[1]));
    let target_type = (0..=rs.rank())
        .find(|&ty| cur.vertex(rs, ty) == *lambda)
        .expect("last alcove has vertex λ");
    let folds = vec![false; type_word.len()];
    Ok(MinimalGallery {
        lambda: lambda.clone(),
        gallery: Gallery { type_word, alcoves, folds },
        walls,
        times,
        target_type,
    })
}

/// `𝔞'_j = 𝔞'_{j-1}` is a positive fold iff `M_j` separates `𝔞'_j` from the
/// germ of `−C^v`, which lies on the negative side of every wall.
fn fold_is_positive(rs: &RootSystem, alcove: &Alcove, ty: usize) -> bool {
    alcove.side(rs, &alcove.face_wall(rs, ty)) > 0
}

pub fn is_positively_folded(rs: &RootSystem, g: &Gallery) -> bool {
    (1..=g.len()).all(|j| !g.folds[j - 1] || fold_is_positive(rs, &g.alcoves[j], g.type_word[j - 1]))
}

fn extend(rs: &RootSystem, word: &[usize], prefix: Gallery, positive_only: bool, out: &mut Vec<Gallery>) {
    let j = prefix.len();
    if j == word.len() {
        out.push(prefix);
        return;
    }
    let ty = word[j];
    let cur = prefix.last().clone();
    if !positive_only || fold_is_positive(rs, &cur, ty) {
        let mut g = prefix.clone();
        g.type_word.push(ty);
        g.alcoves.push(cur.clone());
        g.folds.push(true);
        extend(rs, word, g, positive_only, out);
    }
    let mut g = prefix;
    g.type_word.push(ty);
    g.alcoves.push(cur.neighbour(rs, ty));
    g.folds.push(false);
    extend(rs, word, g, positive_only, out);
}

fn enumerate(rs: &RootSystem, model: &MinimalGallery, positive_only: bool) -> Vec<Gallery> {
    let word = &model.gallery.type_word;
    let mut out: Vec<Gallery> = enumerate_group(rs)
        .par_iter()
        .flat_map_iter(|w| {
            let start = Gallery { type_word: vec![], alcoves: vec![Alcove::from_weyl(rs, w)], folds: vec![] };
            let mut v = Vec::new();
            extend(rs, word, start, positive_only, &mut v);
            v
        })
        .collect();
    out.sort();
    out
}

/// `Γ(γ_λ)`: every gallery of type `t(γ_λ)` whose first alcove contains `0`.
pub fn enumerate_folded(rs: &RootSystem, model: &MinimalGallery) -> Vec<Gallery> {
    enumerate(rs, model, false)
}

/// `Γ^+(γ_λ)`, generated directly with only positive folds.
pub fn enumerate_positively_folded(rs: &RootSystem, model: &MinimalGallery) -> Vec<Gallery> {
    enumerate(rs, model, true)
}

/// The vertex of the last alcove of the same type as `λ` in `γ_λ`.
pub fn target(rs: &RootSystem, model: &MinimalGallery, g: &Gallery) -> Coweight {
    g.last().vertex(rs, model.target_type)
}

/// Size of the parameter set a step contributes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Parameter {
    /// An affine line.
    C,
    /// A punctured line.
    CStar,
    /// A single point.
    Point,
}

impl Serialize for Parameter {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(match self {
            Parameter::C => "C",
            Parameter::CStar => "C*",
            Parameter::Point => "pt",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StepRecord {
    /// Steps `≤ 0` belong to the stretch from `𝔞_-` to `𝔞'_0`.
    pub step: i64,
    pub wall: Wall,
    /// Which case of the load-bearing definition applies, if any.
    pub case: Option<u8>,
    pub parameter: Parameter,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DimensionLedger {
    pub steps: Vec<StepRecord>,
    pub dim: usize,
}

/// Lexicographically least minimal gallery from `𝔞_-` to an alcove at `0`,
/// as (type, alcove) steps.
pub fn auxiliary_stretch(rs: &RootSystem, to: &Alcove) -> Vec<(usize, Alcove)> {
    let mut cur = Alcove::negative(rs);
    let mut out = Vec::new();
    while cur != *to {
        let ty = (1..=rs.rank())
            .find(|&ty| {
                let w = cur.face_wall(rs, ty);
                cur.side(rs, &w) != to.side(rs, &w)
            })
            .expect("alcoves at 0 are separated by walls through 0");
        cur = cur.neighbour(rs, ty);
        out.push((ty, cur.clone()));
    }
    out
}

pub fn load_bearing_walls(rs: &RootSystem, g: &Gallery) -> Result<DimensionLedger, GalleryError> {
    if !is_positively_folded(rs, g) {
        return Err(GalleryError::NotPositivelyFolded);
    }
    let neg = Alcove::negative(rs);
    let start = g.first();
    let stretch = auxiliary_stretch(rs, start);
    let q = stretch.len() as i64;
    let mut steps = Vec::new();
    let mut prev = neg.clone();
    for (k, (ty, a)) in stretch.iter().enumerate() {
        let w = a.face_wall(rs, *ty);
        let case1 = neg.side(rs, &w) == prev.side(rs, &w)
            && start.side(rs, &w) == a.side(rs, &w)
            && neg.side(rs, &w) != a.side(rs, &w);
        steps.push(StepRecord {
            step: k as i64 + 1 - q,
            wall: w,
            case: case1.then_some(1),
            parameter: if case1 { Parameter::C } else { Parameter::Point },
        });
        prev = a.clone();
    }
    for j in 1..=g.len() {
        let w = g.wall(rs, j);
        let (before, after) = (&g.alcoves[j - 1], &g.alcoves[j]);
        let (case, parameter) = if g.folds[j - 1] {
            (Some(2), Parameter::CStar)
        } else if before.side(rs, &w) < 0 && after.side(rs, &w) > 0 {
            (Some(3), Parameter::C)
        } else {
            (None, Parameter::Point)
        };
        steps.push(StepRecord { step: j as i64, wall: w, case, parameter });
    }
    let dim = steps.iter().filter(|s| s.case.is_some()).count();
    Ok(DimensionLedger { steps, dim })
}

pub fn dim_gallery(rs: &RootSystem, g: &Gallery) -> Result<usize, GalleryError> {
    Ok(load_bearing_walls(rs, g)?.dim)
}

/// `(λ + μ, ρ)`, an integer whenever `λ − μ ∈ Q∨`.
pub fn ls_dimension(rs: &RootSystem, lambda: &Coweight, mu: &Coweight) -> Q {
    rs.pair_rho(lambda) + rs.pair_rho(mu)
}

pub fn is_ls_gallery(rs: &RootSystem, model: &MinimalGallery, g: &Gallery) -> Result<bool, GalleryError> {
    let mu = target(rs, model, g);
    Ok(qi(dim_gallery(rs, g)? as i64) == ls_dimension(rs, &model.lambda, &mu))
}

/// `Γ^+_LS(γ_λ, μ)`.
pub fn ls_galleries(rs: &RootSystem, model: &MinimalGallery, mu: &Coweight) -> Vec<Gallery> {
    enumerate_positively_folded(rs, model)
        .into_iter()
        .filter(|g| target(rs, model, g) == *mu && is_ls_gallery(rs, model, g).expect("positively folded"))
        .collect()
}

/// Number of LS galleries ending at each target.
pub fn ls_gallery_counts(rs: &RootSystem, model: &MinimalGallery) -> BTreeMap<Coweight, usize> {
    let mut out = BTreeMap::new();
    for g in enumerate_positively_folded(rs, model) {
        if is_ls_gallery(rs, model, &g).expect("positively folded") {
            *out.entry(target(rs, model, &g)).or_insert(0) += 1;
        }
    }
    out
}

/// The path `π_γ` obtained by folding `w·π_λ` along the folds of `γ`.
pub fn gallery_to_path(rs: &RootSystem, model: &MinimalGallery, g: &Gallery) -> Result<PLPath, GalleryError> {
    if g.type_word != model.gallery.type_word {
        return Err(GalleryError::TypeMismatch);
    }
    let p = g.len();
    let mut bounds = vec![Q::zero()];
    bounds.extend(model.times.iter().copied());
    bounds.push(Q::from_integer(1));
    let mut segments = Vec::new();
    for j in 0..=p {
        let dur = bounds[j + 1] - bounds[j];
        if dur.is_positive() {
            let phi = g.alcoves[j].map.compose(&model.gallery.alcoves[j].inverse_map(rs));
            segments.push(Segment { direction: phi.apply_linear(&model.lambda), duration: dur });
        }
    }
    let base = g.first().map.apply(&Coweight::zero(rs.rank()));
    Ok(PLPath::new(base, segments).expect("durations sum to 1"))
}

/// Writes the ledger as CSV rows `step,root,level,case,parameter`.
pub fn write_ledger_csv<W: Write>(ledger: &DimensionLedger, out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["step", "root", "level", "case", "parameter"])?;
    for s in &ledger.steps {
        let param = match s.parameter {
            Parameter::C => "C",
            Parameter::CStar => "C*",
            Parameter::Point => "pt",
        };
        w.write_record([
            s.step.to_string(),
            (s.wall.root + 1).to_string(),
            s.wall.level.to_string(),
            s.case.map(|c| c.to_string()).unwrap_or_default(),
            param.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// `w_0·γ_λ`, the image of the model in the antidominant chamber.
pub fn antidominant_image(rs: &RootSystem, model: &MinimalGallery) -> Gallery {
    let w0 = Alcove::from_weyl(rs, &longest_element(rs));
    let mut g = model.gallery.clone();
    for a in &mut g.alcoves {
        a.map = w0.map.compose(&a.map);
    }
    g
}

#[cfg(test)]
mod tests {
    use super::*;

    fn setup(t: &str, l: &[i64]) -> (RootSystem, MinimalGallery) {
        let rs = RootSystem::from_str_type(t).unwrap();
        let m = minimal_gallery(&rs, &Coweight::from_ints(l)).unwrap();
        (rs, m)
    }

    #[test]
    fn minimal_lengths() {
        let (_, m) = setup("A1", &[2]);
        assert_eq!(m.gallery.type_word, vec![0]);
        let (_, m) = setup("A2", &[1, 1]);
        assert_eq!(m.gallery.len(), 1);
        let (rs, m) = setup("B2", &[2, 1]);
        assert_eq!(m.gallery.len(), 6);
        assert_eq!(target(&rs, &m, &m.gallery), Coweight::from_ints(&[2, 1]));
        let rs = RootSystem::from_str_type("A2").unwrap();
        assert!(minimal_gallery(&rs, &Coweight::from_ints(&[1, 0])).is_err());
    }

    #[test]
    fn a1_positive_galleries() {
        let (rs, m) = setup("A1", &[2]);
        let all = enumerate_folded(&rs, &m);
        assert_eq!(all.len(), 4);
        let pos = enumerate_positively_folded(&rs, &m);
        assert_eq!(pos.len(), 3);
        let filtered: Vec<_> = all.into_iter().filter(|g| is_positively_folded(&rs, g)).collect();
        assert_eq!(filtered, pos);
        let folded: Vec<_> = pos.iter().filter(|g| !g.fold_steps().is_empty()).collect();
        assert_eq!(folded.len(), 1);
        assert_eq!(target(&rs, &m, folded[0]), Coweight::from_ints(&[0]));
    }

    #[test]
    fn dimension_of_extremes() {
        let (rs, m) = setup("B2", &[2, 1]);
        let lam = &m.lambda;
        assert_eq!(qi(dim_gallery(&rs, &m.gallery).unwrap() as i64), ls_dimension(&rs, lam, lam));
        let low = antidominant_image(&rs, &m);
        assert!(is_positively_folded(&rs, &low));
        assert_eq!(dim_gallery(&rs, &low).unwrap(), 0);
        assert_eq!(target(&rs, &m, &low), -lam);
    }

    #[test]
    fn adjoint_zero_weight() {
        let (rs, m) = setup("A2", &[1, 1]);
        assert_eq!(ls_galleries(&rs, &m, &Coweight::from_ints(&[0, 0])).len(), 2);
        assert_eq!(ls_galleries(&rs, &m, &Coweight::from_ints(&[1, 1])).len(), 1);
    }

    #[test]
    fn ledger_csv_has_header() {
        let (rs, m) = setup("A1", &[2]);
        let ledger = load_bearing_walls(&rs, &m.gallery).unwrap();
        let mut buf = Vec::new();
        write_ledger_csv(&ledger, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("step,root,level,case,parameter\n0,1,0,1,C\n1,1,-1,3,C"));
    }
}
