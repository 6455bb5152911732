//! Bibundles between finite groupoids and their composition.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::actions::{fiber_violations, principal_violations, BundleViolation, GroupoidAction, Side};
use crate::functor::{same_groupoid, GroupoidFunctor};
use crate::groupoid::FiniteGroupoid;
use crate::iso::{find_bijection, MovedSet};
use crate::union_find::UnionFind;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum BibundleViolation {
    #[error("left action must act on the left and right action on the right")]
    WrongSides,
    #[error("the two actions have carriers of sizes {left} and {right}")]
    CarrierMismatch { left: usize, right: usize },
    #[error("left anchor is not a principal bundle for the right action: {0:?}")]
    LeftAnchorNotPrincipal(Vec<BundleViolation>),
    #[error("right anchor changes under arrow {arrow} at point {point}")]
    RightAnchorNotInvariant { arrow: usize, point: usize },
    #[error("({left}·{point})·{right} ≠ {left}·({point}·{right})")]
    Incompatible {
        left: usize,
        point: usize,
        right: usize,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub struct BibundleReport {
    pub violations: Vec<BibundleViolation>,
}

impl fmt::Display for BibundleReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} bibundle violation(s)", self.violations.len())?;
        for v in &self.violations {
            write!(f, "\n  {v}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("the right groupoid of the first bibundle is not the left groupoid of the second")]
pub struct MiddleMismatch;

/// A `G`–`H` bibundle: a left `G`-action and a right `H`-action on one carrier.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bibundle {
    pub left: GroupoidAction,
    pub right: GroupoidAction,
}

impl Bibundle {
    pub fn validate(left: GroupoidAction, right: GroupoidAction) -> Result<Self, BibundleReport> {
        let b = Self { left, right };
        let violations = b.violations();
        if violations.is_empty() {
            Ok(b)
        } else {
            Err(BibundleReport { violations })
        }
    }

    fn violations(&self) -> Vec<BibundleViolation> {
        let (l, r) = (&self.left, &self.right);
        if l.side != Side::Left || r.side != Side::Right {
            return vec![BibundleViolation::WrongSides];
        }
        if l.len() != r.len() {
            return vec![BibundleViolation::CarrierMismatch {
                left: l.len(),
                right: r.len(),
            }];
        }
        let mut out = Vec::new();
        let principal = principal_violations(r, l.groupoid.num_objects(), &l.anchor);
        if !principal.is_empty() {
            out.push(BibundleViolation::LeftAnchorNotPrincipal(principal));
        }
        for p in 0..l.len() {
            for &g in l.acting_arrows(p) {
                let gp = l.apply(p, g).expect("acting arrow");
                if r.anchor[gp] != r.anchor[p] {
                    out.push(BibundleViolation::RightAnchorNotInvariant { arrow: g, point: p });
                }
            }
        }
        if !out.is_empty() {
            return out;
        }
        for p in 0..l.len() {
            for &g in l.acting_arrows(p) {
                let gp = l.apply(p, g).expect("acting arrow");
                for &h in r.acting_arrows(p) {
                    let ph = r.apply(p, h).expect("acting arrow");
                    if r.apply(gp, h) != l.apply(ph, g) {
                        out.push(BibundleViolation::Incompatible {
                            left: g,
                            point: p,
                            right: h,
                        });
                    }
                }
            }
        }
        out
    }

    pub fn left_groupoid(&self) -> &Arc<FiniteGroupoid> {
        &self.left.groupoid
    }

    pub fn right_groupoid(&self) -> &Arc<FiniteGroupoid> {
        &self.right.groupoid
    }

    pub fn len(&self) -> usize {
        self.left.len()
    }

    pub fn is_empty(&self) -> bool {
        self.left.is_empty()
    }

    /// The left action read as a right action through inverses, checked for
    /// principality over the right anchor.
    pub fn left_principal_violations(&self) -> Vec<BundleViolation> {
        let g = &self.left.groupoid;
        fiber_violations(
            self.len(),
            &|p| self.left.results(p),
            &|p, k| g.inv(self.left.acting_arrows(p)[k]),
            self.right.groupoid.num_objects(),
            &self.right.anchor,
        )
    }

    pub fn is_left_principal(&self) -> bool {
        self.left_principal_violations().is_empty()
    }

    fn moved_set(&self) -> MovedSet {
        let colors = (0..self.len())
            .map(|p| ((self.left.anchor[p] as u64) << 32) | self.right.anchor[p] as u64)
            .collect();
        let mut moves = self.left.moved_set(Vec::new()).moves;
        moves.extend(self.right.moved_set(Vec::new()).moves);
        MovedSet { colors, moves }
    }
}

/// The bibundle of a functor `φ: G → H`: carrier `{(u, h) : φ₀(u) = tgt h}`
/// in lexicographic order, `γ·(u, h) = (tgt γ, h then φ₁γ)`,
/// `(u, h)·h' = (u, h' then h)`, anchors `u` and `src h`.
pub fn bibundle_of_functor(phi: &GroupoidFunctor) -> Bibundle {
    let (g, h) = (&phi.source, &phi.target);
    let mut pairs = Vec::new();
    let mut offset = Vec::with_capacity(g.num_objects());
    for u in 0..g.num_objects() {
        offset.push(pairs.len());
        for &x in h.in_arrows(phi.f0[u]) {
            pairs.push((u, x));
        }
    }
    let mut pos = vec![0; h.num_morphisms()];
    for y in 0..h.num_objects() {
        for (k, &x) in h.in_arrows(y).iter().enumerate() {
            pos[x] = k;
        }
    }
    let index = |u: usize, x: usize| offset[u] + pos[x];
    let carrier: Arc<[String]> = pairs
        .iter()
        .map(|&(u, x)| {
            let (a, b) = (g.object_label(u), h.morphism_label(x));
            let mut s = String::with_capacity(a.len() + b.len() + 3);
            s.push('(');
            s.push_str(a);
            s.push(',');
            s.push_str(b);
            s.push(')');
            s
        })
        .collect();
    let left = GroupoidAction::unchecked(
        g.clone(),
        Side::Left,
        carrier.clone(),
        pairs.iter().map(|&(u, _)| u).collect(),
        |i, a| {
            let (_, x) = pairs[i];
            index(g.tgt(a), h.then(x, phi.f1[a]))
        },
    );
    let right = GroupoidAction::unchecked(
        h.clone(),
        Side::Right,
        carrier,
        pairs.iter().map(|&(_, x)| h.src(x)).collect(),
        |i, a| {
            let (u, x) = pairs[i];
            index(u, h.then(a, x))
        },
    );
    Bibundle { left, right }
}

/// `Q ∘ P`: pairs `(p, q)` over the middle groupoid modulo
/// `(p, q) ~ (p·h, h⁻¹·q)`, represented by the smallest pair.
pub fn compose_bibundles(p: &Bibundle, q: &Bibundle) -> Result<Bibundle, MiddleMismatch> {
    if !same_groupoid(p.right_groupoid(), q.left_groupoid()) {
        return Err(MiddleMismatch);
    }
    let mid = p.right_groupoid();
    let mut pairs = Vec::new();
    for x in 0..p.len() {
        for y in 0..q.len() {
            if p.right.anchor[x] == q.left.anchor[y] {
                pairs.push((x, y));
            }
        }
    }
    let index: HashMap<(usize, usize), usize> =
        pairs.iter().enumerate().map(|(i, &pr)| (pr, i)).collect();
    let mut uf = UnionFind::new(pairs.len());
    for (i, &(x, y)) in pairs.iter().enumerate() {
        for &h in p.right.acting_arrows(x) {
            let xh = p.right.apply(x, h).expect("acting arrow");
            let hy = q.left.apply(y, mid.inv(h)).expect("inverse acts");
            uf.union(i, index[&(xh, hy)]);
        }
    }
    let classes = uf.classes();
    let mut class_of = vec![0; pairs.len()];
    for (c, members) in classes.iter().enumerate() {
        for &i in members {
            class_of[i] = c;
        }
    }
    let reps: Vec<(usize, usize)> = classes.iter().map(|c| pairs[c[0]]).collect();
    let carrier: Arc<[String]> = reps
        .iter()
        .map(|&(x, y)| format!("[{},{}]", p.left.carrier[x], q.left.carrier[y]))
        .collect();
    let left = GroupoidAction::unchecked(
        p.left_groupoid().clone(),
        Side::Left,
        carrier.clone(),
        reps.iter().map(|&(x, _)| p.left.anchor[x]).collect(),
        |c, a| {
            let (x, y) = reps[c];
            class_of[index[&(p.left.apply(x, a).expect("acting arrow"), y)]]
        },
    );
    let right = GroupoidAction::unchecked(
        q.right_groupoid().clone(),
        Side::Right,
        carrier,
        reps.iter().map(|&(_, y)| q.right.anchor[y]).collect(),
        |c, a| {
            let (x, y) = reps[c];
            class_of[index[&(x, q.right.apply(y, a).expect("acting arrow"))]]
        },
    );
    Ok(Bibundle { left, right })
}

/// A bijection of carriers commuting with both actions and both anchors.
pub fn bibundle_isomorphism(a: &Bibundle, b: &Bibundle) -> Option<Vec<usize>> {
    if !same_groupoid(a.left_groupoid(), b.left_groupoid())
        || !same_groupoid(a.right_groupoid(), b.right_groupoid())
    {
        return None;
    }
    find_bijection(&a.moved_set(), &b.moved_set())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::actions::PrincipalGroupoidBundle;
    use crate::functor::compose_functors;
    use crate::group::FiniteGroup;

    fn quotient(n: usize, m: usize) -> GroupoidFunctor {
        let from = Arc::new(FiniteGroupoid::group(&FiniteGroup::cyclic(n)));
        let to = Arc::new(FiniteGroupoid::group(&FiniteGroup::cyclic(m)));
        GroupoidFunctor::new(from, to, vec![0], (0..n).map(|k| k % m).collect()).unwrap()
    }

    #[test]
    fn functor_bibundles_validate() {
        let q = quotient(4, 2);
        let b = bibundle_of_functor(&q);
        assert_eq!(b.len(), 2);
        Bibundle::validate(b.left.clone(), b.right.clone()).unwrap();
        // Z4 acts through the quotient: 1·p = 3·p
        for p in 0..2 {
            assert_eq!(b.left.apply(p, 1), b.left.apply(p, 3));
        }
        let g = Arc::new(FiniteGroupoid::pair(3));
        let id = bibundle_of_functor(&GroupoidFunctor::identity(g.clone()));
        assert_eq!(id.len(), g.num_morphisms());
    }

    #[test]
    fn unit_bibundle() {
        // G₁ with G acting on both sides, left anchor tgt, right anchor src
        let g = Arc::new(FiniteGroupoid::product(
            &FiniteGroupoid::pair(2),
            &FiniteGroupoid::group(&FiniteGroup::cyclic(3)),
        ));
        let left = GroupoidAction::on_arrows(g.clone(), Side::Left);
        let right = GroupoidAction::on_arrows(g, Side::Right);
        let b = Bibundle::validate(left, right).unwrap();
        assert!(b.is_left_principal());
    }

    #[test]
    fn principal_bundle_as_bibundle() {
        let z2 = Arc::new(FiniteGroupoid::group(&FiniteGroup::cyclic(2)));
        let bundle = crate::actions::trivial_bundle(z2, 3);
        let base = Arc::new(FiniteGroupoid::discrete(3));
        let PrincipalGroupoidBundle { action, proj, .. } = bundle;
        let left = GroupoidAction::from_fn(base, Side::Left, action.carrier.clone(), proj, |p, _| p)
            .unwrap();
        Bibundle::validate(left, action).unwrap();
    }

    #[test]
    fn composition_matches_composite_functor() {
        let (f, g) = (quotient(8, 4), quotient(4, 2));
        let bf = bibundle_of_functor(&f);
        let bg = bibundle_of_functor(&g);
        let composed = compose_bibundles(&bf, &bg).unwrap();
        Bibundle::validate(composed.left.clone(), composed.right.clone()).unwrap();
        let direct = bibundle_of_functor(&compose_functors(&f, &g).unwrap());
        assert!(bibundle_isomorphism(&composed, &direct).is_some());
        assert_eq!(compose_bibundles(&bg, &bf), Err(MiddleMismatch));
    }

    #[test]
    fn broken_compatibility_is_reported() {
        let b = bibundle_of_functor(&quotient(4, 2));
        let mut spec = b.left.to_spec();
        // swap the result of one left move
        let k = spec.triples.iter().position(|&(_, a, _)| a == 1).unwrap();
        spec.triples[k].2 = spec.triples[k].0;
        let left = GroupoidAction::validate(b.left.groupoid.clone(), spec);
        // either the action itself breaks or the bibundle does
        if let Ok(left) = left {
            assert!(Bibundle::validate(left, b.right).is_err());
        }
    }
}
