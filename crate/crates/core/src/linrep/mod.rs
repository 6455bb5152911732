//! Linear representations of finite groupoids over the rationals, short
//! exact sequences of them, and equivariant splittings.

mod matrix;

use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

pub use matrix::{int, q, QMatrix, Q};

use crate::functor::same_groupoid;
use crate::groupoid::FiniteGroupoid;

#[derive(Clone, Debug, PartialEq, Eq, Error, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BundleError {
    #[error("shape mismatch: {detail}")]
    ShapeMismatch { detail: String },
    #[error("matrices are not functorial on ({f}, {g})")]
    NotFunctorial { f: usize, g: usize },
    #[error("matrix of arrow {arrow} is singular")]
    Singular { arrow: usize },
}

/// A functor from a groupoid to rational vector spaces: a dimension per
/// object and an invertible `dim(tgt) × dim(src)` matrix per arrow.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupoidVectorBundle {
    groupoid: Arc<FiniteGroupoid>,
    dims: Vec<usize>,
    mats: Vec<QMatrix>,
}

impl GroupoidVectorBundle {
    pub fn validate(
        groupoid: Arc<FiniteGroupoid>,
        dims: Vec<usize>,
        mats: Vec<QMatrix>,
    ) -> Result<Self, BundleError> {
        let g = &groupoid;
        if dims.len() != g.num_objects() || mats.len() != g.num_morphisms() {
            return Err(BundleError::ShapeMismatch {
                detail: format!(
                    "{} dimensions and {} matrices for {} objects and {} arrows",
                    dims.len(),
                    mats.len(),
                    g.num_objects(),
                    g.num_morphisms()
                ),
            });
        }
        for (a, m) in mats.iter().enumerate() {
            let want = (dims[g.tgt(a)], dims[g.src(a)]);
            if m.shape() != want {
                return Err(BundleError::ShapeMismatch {
                    detail: format!("arrow {a} has shape {:?}, expected {want:?}", m.shape()),
                });
            }
        }
        for (a, m) in mats.iter().enumerate() {
            if m.inverse().is_none() {
                return Err(BundleError::Singular { arrow: a });
            }
        }
        for x in 0..g.num_objects() {
            let i = g.ident(x);
            if mats[i] != QMatrix::identity(dims[x]) {
                return Err(BundleError::NotFunctorial { f: i, g: i });
            }
        }
        for f in 0..g.num_morphisms() {
            for &h in g.out_arrows(g.tgt(f)) {
                if mats[g.then(f, h)] != &mats[h] * &mats[f] {
                    return Err(BundleError::NotFunctorial { f, g: h });
                }
            }
        }
        Ok(Self { groupoid, dims, mats })
    }

    /// Every fibre `ℚ^dim`, every arrow the identity.
    pub fn trivial(groupoid: Arc<FiniteGroupoid>, dim: usize) -> Self {
        let dims = vec![dim; groupoid.num_objects()];
        let mats = vec![QMatrix::identity(dim); groupoid.num_morphisms()];
        Self { groupoid, dims, mats }
    }

    pub fn groupoid(&self) -> &Arc<FiniteGroupoid> {
        &self.groupoid
    }

    pub fn dim(&self, x: usize) -> usize {
        self.dims[x]
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn mat(&self, a: usize) -> &QMatrix {
        &self.mats[a]
    }

    pub fn mats(&self) -> &[QMatrix] {
        &self.mats
    }

    pub fn direct_sum(a: &Self, b: &Self) -> Self {
        assert!(same_groupoid(&a.groupoid, &b.groupoid), "bundles over different groupoids");
        Self {
            groupoid: a.groupoid.clone(),
            dims: a.dims.iter().zip(&b.dims).map(|(x, y)| x + y).collect(),
            mats: a.mats.iter().zip(&b.mats).map(|(x, y)| QMatrix::block_diag(x, y)).collect(),
        }
    }

    pub fn tensor(a: &Self, b: &Self) -> Self {
        assert!(same_groupoid(&a.groupoid, &b.groupoid), "bundles over different groupoids");
        Self {
            groupoid: a.groupoid.clone(),
            dims: a.dims.iter().zip(&b.dims).map(|(x, y)| x * y).collect(),
            mats: a.mats.iter().zip(&b.mats).map(|(x, y)| QMatrix::kron(x, y)).collect(),
        }
    }

    /// The same representation in new fibre coordinates `v ↦ P_x v`.
    pub fn change_basis(&self, basis: &[QMatrix]) -> Self {
        let g = &self.groupoid;
        let inv: Vec<QMatrix> = basis.iter().map(|p| p.inverse().expect("invertible")).collect();
        let mats = (0..g.num_morphisms())
            .map(|a| &(&basis[g.tgt(a)] * &self.mats[a]) * &inv[g.src(a)])
            .collect();
        Self {
            groupoid: g.clone(),
            dims: self.dims.clone(),
            mats,
        }
    }
}

/// Whether per-object matrices `m_x: E_x → F_x` commute with every arrow.
pub fn is_bundle_map(e: &GroupoidVectorBundle, f: &GroupoidVectorBundle, m: &[QMatrix]) -> Option<usize> {
    let g = e.groupoid();
    (0..g.num_morphisms())
        .find(|&a| &f.mats[a] * &m[g.src(a)] != &m[g.tgt(a)] * &e.mats[a])
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SesMap {
    J,
    Q,
}

#[derive(Clone, Debug, PartialEq, Eq, Error, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SesError {
    #[error("bundles live over different groupoids")]
    GroupoidMismatch,
    #[error("shape mismatch: {detail}")]
    ShapeMismatch { detail: String },
    #[error("sequence is not exact at object {object}")]
    NotExactAt { object: usize },
    #[error("{map:?} does not commute with arrow {arrow}")]
    NotEquivariant { arrow: usize, map: SesMap },
}

/// `0 → A -j→ B -q→ C → 0`
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BundleSES {
    pub a: GroupoidVectorBundle,
    pub b: GroupoidVectorBundle,
    pub c: GroupoidVectorBundle,
    pub j: Vec<QMatrix>,
    pub q: Vec<QMatrix>,
}

impl BundleSES {
    pub fn validate(
        a: GroupoidVectorBundle,
        b: GroupoidVectorBundle,
        c: GroupoidVectorBundle,
        j: Vec<QMatrix>,
        q: Vec<QMatrix>,
    ) -> Result<Self, SesError> {
        if !same_groupoid(&a.groupoid, &b.groupoid) || !same_groupoid(&b.groupoid, &c.groupoid) {
            return Err(SesError::GroupoidMismatch);
        }
        let n = a.groupoid.num_objects();
        if j.len() != n || q.len() != n {
            return Err(SesError::ShapeMismatch {
                detail: format!("expected {n} matrices for each map"),
            });
        }
        for x in 0..n {
            if j[x].shape() != (b.dim(x), a.dim(x)) || q[x].shape() != (c.dim(x), b.dim(x)) {
                return Err(SesError::ShapeMismatch {
                    detail: format!("maps at object {x} have the wrong shape"),
                });
            }
        }
        for x in 0..n {
            let injective = j[x].rank() == a.dim(x);
            let surjective = q[x].rank() == c.dim(x);
            let composite_zero = (&q[x] * &j[x]).is_zero();
            // rank(j) = dim ker(q) once q∘j = 0
            let exact_middle = a.dim(x) + c.dim(x) == b.dim(x);
            if !(injective && surjective && composite_zero && exact_middle) {
                return Err(SesError::NotExactAt { object: x });
            }
        }
        if let Some(arrow) = is_bundle_map(&a, &b, &j) {
            return Err(SesError::NotEquivariant { arrow, map: SesMap::J });
        }
        if let Some(arrow) = is_bundle_map(&b, &c, &q) {
            return Err(SesError::NotEquivariant { arrow, map: SesMap::Q });
        }
        Ok(Self { a, b, c, j, q })
    }

    /// `0 → A → A ⊕ C → C → 0` with block inclusion and projection.
    pub fn direct_sum(a: GroupoidVectorBundle, c: GroupoidVectorBundle) -> Self {
        let b = GroupoidVectorBundle::direct_sum(&a, &c);
        let n = a.groupoid.num_objects();
        let j = (0..n)
            .map(|x| {
                let mut m = QMatrix::zeros(b.dim(x), a.dim(x));
                m.set_block(0, 0, &QMatrix::identity(a.dim(x)));
                m
            })
            .collect();
        let q = (0..n)
            .map(|x| {
                let mut m = QMatrix::zeros(c.dim(x), b.dim(x));
                m.set_block(0, a.dim(x), &QMatrix::identity(c.dim(x)));
                m
            })
            .collect();
        Self { a, b, c, j, q }
    }

    /// `0 → A → B → B/A → 0` for an invariant subbundle given by injective
    /// `j`; the quotient is coordinatized by a basis of the left kernel of `j`.
    pub fn quotient(a: GroupoidVectorBundle, b: GroupoidVectorBundle, j: Vec<QMatrix>) -> Result<Self, SesError> {
        let g = b.groupoid().clone();
        if j.len() != g.num_objects() {
            return Err(SesError::ShapeMismatch {
                detail: format!("expected {} matrices for j", g.num_objects()),
            });
        }
        let q: Vec<QMatrix> = j.iter().map(|m| m.transpose().kernel().transpose()).collect();
        let sections: Vec<QMatrix> = q
            .iter()
            .map(|m| m.solve(&QMatrix::identity(m.rows())).expect("full row rank"))
            .collect();
        let dims = q.iter().map(|m| m.rows()).collect();
        let mats = (0..g.num_morphisms())
            .map(|arrow| &(&q[g.tgt(arrow)] * b.mat(arrow)) * &sections[g.src(arrow)])
            .collect();
        let c = GroupoidVectorBundle::validate(g, dims, mats).map_err(|e| SesError::ShapeMismatch {
            detail: format!("quotient is not a bundle: {e}"),
        })?;
        Self::validate(a, b, c, j, q)
    }

    /// `0 → A⊗R → B⊗R → C⊗R → 0`
    pub fn tensor(&self, r: &GroupoidVectorBundle) -> Self {
        let n = self.b.groupoid().num_objects();
        let id = |x: usize| QMatrix::identity(r.dim(x));
        Self {
            a: GroupoidVectorBundle::tensor(&self.a, r),
            b: GroupoidVectorBundle::tensor(&self.b, r),
            c: GroupoidVectorBundle::tensor(&self.c, r),
            j: (0..n).map(|x| QMatrix::kron(&self.j[x], &id(x))).collect(),
            q: (0..n).map(|x| QMatrix::kron(&self.q[x], &id(x))).collect(),
        }
    }

    /// Re-coordinatizes the middle term by `P_x`.
    pub fn change_middle_basis(&self, basis: &[QMatrix]) -> Self {
        let inv: Vec<QMatrix> = basis.iter().map(|p| p.inverse().expect("invertible")).collect();
        Self {
            a: self.a.clone(),
            b: self.b.change_basis(basis),
            c: self.c.clone(),
            j: self.j.iter().zip(basis).map(|(j, p)| p * j).collect(),
            q: self.q.iter().zip(&inv).map(|(q, pi)| q * pi).collect(),
        }
    }
}

/// The stacked constraints `q_x r_x = I` and `B(γ) r_src = r_tgt C(γ)` on the
/// unknown entries of all `r_x`, laid out object by object, row-major.
#[derive(Clone, Debug)]
pub struct SplittingSystem {
    pub matrix: QMatrix,
    pub rhs: QMatrix,
    offsets: Vec<usize>,
    shapes: Vec<(usize, usize)>,
}

impl SplittingSystem {
    pub fn new(ses: &BundleSES) -> Self {
        let g = ses.b.groupoid();
        let shapes: Vec<(usize, usize)> =
            (0..g.num_objects()).map(|x| (ses.b.dim(x), ses.c.dim(x))).collect();
        let mut offsets = vec![0];
        for &(r, c) in &shapes {
            offsets.push(offsets.last().unwrap() + r * c);
        }
        let unknowns = *offsets.last().unwrap();
        let mut rows: Vec<(Vec<(usize, Q)>, Q)> = Vec::new();
        let var = |x: usize, r: usize, c: usize| offsets[x] + r * shapes[x].1 + c;
        for x in 0..g.num_objects() {
            let (bd, cd) = shapes[x];
            for i in 0..cd {
                for k in 0..cd {
                    let terms = (0..bd).map(|t| (var(x, t, k), ses.q[x][(i, t)].clone())).collect();
                    rows.push((terms, if i == k { int(1) } else { int(0) }));
                }
            }
        }
        for a in 0..g.num_morphisms() {
            let (s, t) = (g.src(a), g.tgt(a));
            let (mb, mc) = (ses.b.mat(a), ses.c.mat(a));
            for i in 0..ses.b.dim(t) {
                for k in 0..ses.c.dim(s) {
                    let mut terms = Vec::new();
                    for m in 0..ses.b.dim(s) {
                        terms.push((var(s, m, k), mb[(i, m)].clone()));
                    }
                    for m in 0..ses.c.dim(t) {
                        terms.push((var(t, i, m), -mc[(m, k)].clone()));
                    }
                    rows.push((terms, int(0)));
                }
            }
        }
        let mut matrix = QMatrix::zeros(rows.len(), unknowns);
        let mut rhs = QMatrix::zeros(rows.len(), 1);
        for (r, (terms, b)) in rows.into_iter().enumerate() {
            for (v, coeff) in terms {
                let e = &matrix[(r, v)] + coeff;
                matrix[(r, v)] = e;
            }
            rhs[(r, 0)] = b;
        }
        Self {
            matrix,
            rhs,
            offsets,
            shapes,
        }
    }

    pub fn flatten(&self, r: &[QMatrix]) -> QMatrix {
        let mut v = QMatrix::zeros(*self.offsets.last().unwrap(), 1);
        for (x, m) in r.iter().enumerate() {
            for (k, e) in m.entries().iter().enumerate() {
                v[(self.offsets[x] + k, 0)] = e.clone();
            }
        }
        v
    }

    pub fn unflatten(&self, v: &QMatrix) -> Vec<QMatrix> {
        self.shapes
            .iter()
            .enumerate()
            .map(|(x, &(r, c))| {
                QMatrix::with_shape(r, c, (0..r * c).map(|k| v[(self.offsets[x] + k, 0)].clone()).collect())
            })
            .collect()
    }

    pub fn is_satisfied_by(&self, r: &[QMatrix]) -> bool {
        r.len() == self.shapes.len()
            && r.iter().zip(&self.shapes).all(|(m, &s)| m.shape() == s)
            && &self.matrix * &self.flatten(r) == self.rhs
    }
}

/// A splitting `r: C → B` with `q∘r = id` commuting with every arrow, by
/// exact elimination on the stacked system; `None` iff it is infeasible.
pub fn find_equivariant_splitting(ses: &BundleSES) -> Option<Vec<QMatrix>> {
    let system = SplittingSystem::new(ses);
    let v = system.matrix.solve(&system.rhs)?;
    Some(system.unflatten(&v))
}

/// Direct check of both splitting conditions.
pub fn is_equivariant_splitting(ses: &BundleSES, r: &[QMatrix]) -> bool {
    let g = ses.b.groupoid();
    r.len() == g.num_objects()
        && (0..g.num_objects()).all(|x| {
            r[x].shape() == (ses.b.dim(x), ses.c.dim(x))
                && &ses.q[x] * &r[x] == QMatrix::identity(ses.c.dim(x))
        })
        && is_bundle_map(&ses.c, &ses.b, r).is_none()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::FiniteGroup;

    fn z2() -> Arc<FiniteGroupoid> {
        Arc::new(FiniteGroupoid::group(&FiniteGroup::cyclic(2)))
    }

    fn sign() -> GroupoidVectorBundle {
        GroupoidVectorBundle::validate(
            z2(),
            vec![1],
            vec![QMatrix::from_ints(&[&[1]]), QMatrix::from_ints(&[&[-1]])],
        )
        .unwrap()
    }

    #[test]
    fn bundle_validation() {
        sign();
        let singular = GroupoidVectorBundle::validate(
            z2(),
            vec![1],
            vec![QMatrix::from_ints(&[&[1]]), QMatrix::from_ints(&[&[0]])],
        );
        assert_eq!(singular.unwrap_err(), BundleError::Singular { arrow: 1 });
        let not_functorial = GroupoidVectorBundle::validate(
            z2(),
            vec![1],
            vec![QMatrix::from_ints(&[&[1]]), QMatrix::from_ints(&[&[2]])],
        );
        assert_eq!(not_functorial.unwrap_err(), BundleError::NotFunctorial { f: 1, g: 1 });
        let shape = GroupoidVectorBundle::validate(z2(), vec![2], vec![QMatrix::identity(1); 2]);
        assert!(matches!(shape, Err(BundleError::ShapeMismatch { .. })));
    }

    fn regular() -> BundleSES {
        let reg = GroupoidVectorBundle::validate(
            z2(),
            vec![2],
            vec![QMatrix::identity(2), QMatrix::from_ints(&[&[0, 1], &[1, 0]])],
        )
        .unwrap();
        BundleSES::validate(
            GroupoidVectorBundle::trivial(z2(), 1),
            reg,
            sign(),
            vec![QMatrix::from_ints(&[&[1], &[1]])],
            vec![QMatrix::from_ints(&[&[1, -1]])],
        )
        .unwrap()
    }

    #[test]
    fn regular_representation_splits() {
        let ses = regular();
        let r = find_equivariant_splitting(&ses).unwrap();
        assert!(is_equivariant_splitting(&ses, &r));
        assert_eq!(r[0], QMatrix::from_rows(vec![vec![q(1, 2)], vec![q(-1, 2)]]));
    }

    #[test]
    fn mutations_are_caught() {
        let mut ses = regular();
        ses.q[0] = QMatrix::from_ints(&[&[1, 0]]);
        let err = BundleSES::validate(ses.a, ses.b, ses.c, ses.j, ses.q).unwrap_err();
        assert_eq!(err, SesError::NotExactAt { object: 0 });
        let ses = regular();
        let err = BundleSES::validate(
            ses.a,
            ses.b,
            ses.c,
            vec![QMatrix::from_ints(&[&[1], &[2]])],
            vec![QMatrix::from_ints(&[&[2, -1]])],
        )
        .unwrap_err();
        assert_eq!(err, SesError::NotEquivariant { arrow: 1, map: SesMap::J });
    }

    #[test]
    fn direct_sum_gives_block_inclusion() {
        let ses = BundleSES::direct_sum(GroupoidVectorBundle::trivial(z2(), 1), sign());
        let again = BundleSES::validate(
            ses.a.clone(),
            ses.b.clone(),
            ses.c.clone(),
            ses.j.clone(),
            ses.q.clone(),
        )
        .unwrap();
        let r = find_equivariant_splitting(&again).unwrap();
        assert_eq!(r[0], QMatrix::from_ints(&[&[0], &[1]]));
    }

    #[test]
    fn non_equivariant_section_is_rejected() {
        let ses = regular();
        let again = BundleSES::quotient(ses.a.clone(), ses.b.clone(), ses.j.clone()).unwrap();
        assert_eq!(again.c.mat(1), &QMatrix::from_ints(&[&[-1]]));
        assert!(!is_equivariant_splitting(&ses, &[QMatrix::from_ints(&[&[1], &[0]])]));
    }
}
