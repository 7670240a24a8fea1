//! Alcoves as images of the fundamental alcove under `W^a = W^v ⋉ Q∨`.

use serde::Serialize;

use crate::coweight::{sign, Coweight};
use crate::rootsys::{AffineMap, RootSystem, Wall};
use crate::weyl::{longest_element, WeylElement};

/// The alcove `g(𝔞)` for an affine Weyl element `g` and the fundamental alcove `𝔞`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Alcove {
    pub map: AffineMap,
}

impl Alcove {
    pub fn fundamental(rs: &RootSystem) -> Self {
        Alcove { map: AffineMap::identity(rs.rank()) }
    }

    /// The alcove with vertex `0` inside `−C^v`.
    pub fn negative(rs: &RootSystem) -> Self {
        Alcove::from_weyl(rs, &longest_element(rs))
    }

    /// The alcove `w(𝔞)` at the origin.
    pub fn from_weyl(rs: &RootSystem, w: &WeylElement) -> Self {
        let mut map = AffineMap::identity(rs.rank());
        map.linear = w.matrix().to_vec();
        Alcove { map }
    }

    /// Finite part of the affine element.
    pub fn finite_part(&self, rs: &RootSystem) -> WeylElement {
        let img = self.map.apply_linear(&rs.rho_vee());
        WeylElement::from_rho_image(rs, img.to_ints().expect("integral"))
    }

    /// The affine Weyl element `g` with `g(𝔞) = self`, inverted.
    pub fn inverse_map(&self, rs: &RootSystem) -> AffineMap {
        let inv = self.finite_part(rs).inverse(rs);
        let linear = inv.matrix().to_vec();
        let translation = -&inv.apply(&self.map.translation);
        AffineMap { linear, translation }
    }

    pub fn translation(&self) -> &Coweight {
        &self.map.translation
    }

    /// Vertices indexed by type: `0`, then `1..=rank`.
    pub fn vertices(&self, rs: &RootSystem) -> Vec<Coweight> {
        rs.alcove_vertices().iter().map(|v| self.map.apply(v)).collect()
    }

    pub fn vertex(&self, rs: &RootSystem, ty: usize) -> Coweight {
        self.map.apply(&rs.alcove_vertices()[ty])
    }

    pub fn centroid(&self, rs: &RootSystem) -> Coweight {
        self.map.apply(&rs.alcove_centroid())
    }

    /// The wall carrying the face of type `ty` (the face opposite vertex `ty`).
    pub fn face_wall(&self, rs: &RootSystem, ty: usize) -> Wall {
        let verts: Vec<Coweight> = self
            .vertices(rs)
            .into_iter()
            .enumerate()
            .filter(|(i, _)| *i != ty)
            .map(|(_, v)| v)
            .collect();
        for b in 0..rs.num_positive_roots() {
            let c = rs.pair(b, &verts[0]);
            if verts.iter().all(|v| rs.pair(b, v) == c) {
                return Wall { root: b, level: -c.to_integer() };
            }
        }
        unreachable!("every face lies on a wall")
    }

    /// The alcove sharing the face of type `ty`.
    pub fn neighbour(&self, rs: &RootSystem, ty: usize) -> Alcove {
        let s = if ty == 0 {
            AffineMap::reflection(rs, rs.num_positive_roots() - 1, 1)
        } else {
            AffineMap::reflection(rs, rs.simple_root_index(ty - 1), 0)
        };
        Alcove { map: self.map.compose(&s) }
    }

    /// Side of the alcove relative to a wall (never zero).
    pub fn side(&self, rs: &RootSystem, wall: &Wall) -> i32 {
        sign(&wall.eval(rs, &self.centroid(rs)))
    }

    /// Whether the closed alcove contains `x`.
    pub fn contains(&self, rs: &RootSystem, x: &Coweight) -> bool {
        (0..=rs.rank()).all(|ty| {
            let w = self.face_wall(rs, ty);
            let s = w.side(rs, x);
            s == 0 || s == self.side(rs, &w)
        })
    }
}

impl Serialize for Alcove {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("Alcove", 2)?;
        st.serialize_field("linear", &self.map.linear)?;
        st.serialize_field("translation", &self.map.translation)?;
        st.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn a1_neighbours() {
        let rs = RootSystem::from_str_type("A1").unwrap();
        let a = Alcove::fundamental(&rs);
        let b = a.neighbour(&rs, 0);
        assert_eq!(b.vertices(&rs), vec![Coweight::from_ints(&[2]), Coweight::from_ints(&[1])]);
        assert_eq!(b.neighbour(&rs, 0), a);
        let n = Alcove::negative(&rs);
        assert!(n.contains(&rs, &Coweight::from_ints(&[-1])));
        assert!(!n.contains(&rs, &Coweight::from_ints(&[1])));
        let g = b.map.compose(&n.map);
        let inv = Alcove { map: g.clone() }.inverse_map(&rs);
        assert_eq!(inv.compose(&g), AffineMap::identity(1));
    }

    #[test]
    fn face_walls_of_fundamental() {
        let rs = RootSystem::from_str_type("G2").unwrap();
        let a = Alcove::fundamental(&rs);
        assert_eq!(a.face_wall(&rs, 0), Wall { root: 5, level: -1 });
        assert_eq!(a.face_wall(&rs, 1), Wall { root: 0, level: 0 });
        for ty in 0..=2 {
            let b = a.neighbour(&rs, ty);
            assert_eq!(b.face_wall(&rs, ty), a.face_wall(&rs, ty));
            assert_eq!(b.side(&rs, &a.face_wall(&rs, ty)), -a.side(&rs, &a.face_wall(&rs, ty)));
        }
    }
}
