//! Groupoid actions on finite sets, principal bundles, and their pullbacks.
//!
//! A right action has `p·γ` defined when `tgt(γ) = a(p)`, with
//! `a(p·γ) = src(γ)` and `(p·γ)·γ' = p·(γ' then γ)`. A left action has `γ·p`
//! defined when `src(γ) = a(p)`, with `a(γ·p) = tgt(γ)` and
//! `γ'·(γ·p) = (γ then γ')·p`.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::groupoid::FiniteGroupoid;
use crate::iso::{find_bijection, MovedSet};
use crate::union_find::UnionFind;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ActionViolation {
    #[error("anchor has {found} entries for a carrier of {expected}")]
    AnchorLength { expected: usize, found: usize },
    #[error("index out of range in {what}: {value}")]
    Dangling { what: &'static str, value: usize },
    #[error("({point}, {arrow}) is not composable but was given a result")]
    NotComposable { point: usize, arrow: usize },
    #[error("({point}, {arrow}) given twice")]
    Conflicting { point: usize, arrow: usize },
    #[error("({point}, {arrow}) is composable but has no result")]
    Missing { point: usize, arrow: usize },
    #[error("identity law fails at {point}")]
    IdentityLawFail { point: usize },
    #[error("anchor shift fails at ({point}, {arrow})")]
    AnchorShiftFail { point: usize, arrow: usize },
    #[error("associativity fails at ({point}, {first}, {second})")]
    AssocFail {
        point: usize,
        first: usize,
        second: usize,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub struct ActionReport {
    pub violations: Vec<ActionViolation>,
}

impl fmt::Display for ActionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} action violation(s)", self.violations.len())?;
        for v in &self.violations {
            write!(f, "\n  {v}")?;
        }
        Ok(())
    }
}

fn flatten(rows: Vec<Vec<usize>>) -> (Vec<usize>, Vec<usize>) {
    let mut start = Vec::with_capacity(rows.len() + 1);
    let mut act = Vec::new();
    for row in rows {
        start.push(act.len());
        act.extend(row);
    }
    start.push(act.len());
    (act, start)
}

/// Unvalidated action data: `triples` lists `(point, arrow, result)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ActionSpec {
    pub side: Side,
    pub carrier: Vec<String>,
    pub anchor: Vec<usize>,
    pub triples: Vec<(usize, usize, usize)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupoidAction {
    pub groupoid: Arc<FiniteGroupoid>,
    pub side: Side,
    pub carrier: Arc<[String]>,
    pub anchor: Vec<usize>,
    /// `act[start[p] + k]` is `p` acted on by the `k`-th arrow able to act on
    /// it (`in_arrows(a(p))` on the right, `out_arrows(a(p))` on the left).
    act: Vec<usize>,
    start: Vec<usize>,
}

impl GroupoidAction {
    pub fn validate(groupoid: Arc<FiniteGroupoid>, spec: ActionSpec) -> Result<Self, ActionReport> {
        let n = spec.carrier.len();
        let g = &groupoid;
        let mut violations = Vec::new();
        if spec.anchor.len() != n {
            violations.push(ActionViolation::AnchorLength {
                expected: n,
                found: spec.anchor.len(),
            });
        }
        for &x in &spec.anchor {
            if x >= g.num_objects() {
                violations.push(ActionViolation::Dangling {
                    what: "anchor",
                    value: x,
                });
            }
        }
        for &(p, a, q) in &spec.triples {
            if p >= n || q >= n {
                violations.push(ActionViolation::Dangling {
                    what: "carrier",
                    value: p.max(q),
                });
            }
            if a >= g.num_morphisms() {
                violations.push(ActionViolation::Dangling {
                    what: "arrow",
                    value: a,
                });
            }
        }
        if !violations.is_empty() {
            return Err(ActionReport { violations });
        }
        let side = spec.side;
        let acting = |p: usize| -> &[usize] {
            match side {
                Side::Right => g.in_arrows(spec.anchor[p]),
                Side::Left => g.out_arrows(spec.anchor[p]),
            }
        };
        let mut act: Vec<Vec<usize>> = (0..n).map(|p| vec![usize::MAX; acting(p).len()]).collect();
        for &(p, a, q) in &spec.triples {
            let Ok(k) = acting(p).binary_search(&a) else {
                violations.push(ActionViolation::NotComposable { point: p, arrow: a });
                continue;
            };
            if act[p][k] != usize::MAX && act[p][k] != q {
                violations.push(ActionViolation::Conflicting { point: p, arrow: a });
            }
            act[p][k] = q;
        }
        for (p, row) in act.iter().enumerate() {
            for (k, &q) in row.iter().enumerate() {
                if q == usize::MAX {
                    violations.push(ActionViolation::Missing {
                        point: p,
                        arrow: acting(p)[k],
                    });
                }
            }
        }
        if !violations.is_empty() {
            return Err(ActionReport { violations });
        }
        let (act, start) = flatten(act);
        let action = Self {
            groupoid: groupoid.clone(),
            side,
            carrier: spec.carrier.into(),
            anchor: spec.anchor,
            act,
            start,
        };
        let violations = action.law_violations();
        if violations.is_empty() {
            Ok(action)
        } else {
            Err(ActionReport { violations })
        }
    }

    /// Builds an action from a closure over every acting pair and validates it.
    pub fn from_fn(
        groupoid: Arc<FiniteGroupoid>,
        side: Side,
        carrier: impl Into<Arc<[String]>>,
        anchor: Vec<usize>,
        f: impl Fn(usize, usize) -> usize,
    ) -> Result<Self, ActionReport> {
        let action = Self::unchecked(groupoid, side, carrier, anchor, f);
        let violations = action.law_violations();
        if violations.is_empty() {
            Ok(action)
        } else {
            Err(ActionReport { violations })
        }
    }

    pub(crate) fn unchecked(
        groupoid: Arc<FiniteGroupoid>,
        side: Side,
        carrier: impl Into<Arc<[String]>>,
        anchor: Vec<usize>,
        f: impl Fn(usize, usize) -> usize,
    ) -> Self {
        let carrier = carrier.into();
        let arrows = |x: usize| match side {
            Side::Right => groupoid.in_arrows(x),
            Side::Left => groupoid.out_arrows(x),
        };
        let mut act = Vec::with_capacity(anchor.iter().map(|&x| arrows(x).len()).sum());
        let mut start = Vec::with_capacity(carrier.len() + 1);
        for (p, &x) in anchor.iter().enumerate() {
            start.push(act.len());
            act.extend(arrows(x).iter().map(|&a| f(p, a)));
        }
        start.push(act.len());
        Self {
            groupoid,
            side,
            carrier,
            anchor,
            act,
            start,
        }
    }

    fn law_violations(&self) -> Vec<ActionViolation> {
        let g = &self.groupoid;
        let n = self.carrier.len();
        let mut out = Vec::new();
        for p in 0..n {
            if self.apply(p, g.ident(self.anchor[p])) != Some(p) {
                out.push(ActionViolation::IdentityLawFail { point: p });
            }
            for &a in self.acting_arrows(p) {
                let q = self.apply(p, a).expect("acting arrow");
                if q >= n {
                    out.push(ActionViolation::Dangling {
                        what: "carrier",
                        value: q,
                    });
                    continue;
                }
                let expected = match self.side {
                    Side::Right => g.src(a),
                    Side::Left => g.tgt(a),
                };
                if self.anchor[q] != expected {
                    out.push(ActionViolation::AnchorShiftFail { point: p, arrow: a });
                }
            }
        }
        if !out.is_empty() {
            return out;
        }
        for p in 0..n {
            for &a in self.acting_arrows(p) {
                let q = self.apply(p, a).expect("acting arrow");
                for &b in self.acting_arrows(q) {
                    let lhs = self.apply(q, b);
                    let ab = match self.side {
                        Side::Right => g.then(b, a),
                        Side::Left => g.then(a, b),
                    };
                    if lhs != self.apply(p, ab) {
                        out.push(ActionViolation::AssocFail {
                            point: p,
                            first: a,
                            second: b,
                        });
                    }
                }
            }
        }
        out
    }

    /// Arrows that can act on `p`, ascending.
    pub fn acting_arrows(&self, p: usize) -> &[usize] {
        match self.side {
            Side::Right => self.groupoid.in_arrows(self.anchor[p]),
            Side::Left => self.groupoid.out_arrows(self.anchor[p]),
        }
    }

    /// `p·γ` (right) or `γ·p` (left), if defined.
    pub fn apply(&self, p: usize, arrow: usize) -> Option<usize> {
        let k = self.acting_arrows(p).binary_search(&arrow).ok()?;
        Some(self.act[self.start[p] + k])
    }

    /// Results of the acting arrows on `p`, in `acting_arrows` order.
    pub fn results(&self, p: usize) -> &[usize] {
        &self.act[self.start[p]..self.start[p + 1]]
    }

    pub fn len(&self) -> usize {
        self.carrier.len()
    }

    pub fn is_empty(&self) -> bool {
        self.carrier.is_empty()
    }

    pub fn to_spec(&self) -> ActionSpec {
        let mut triples = Vec::new();
        for p in 0..self.len() {
            for (k, &a) in self.acting_arrows(p).iter().enumerate() {
                triples.push((p, a, self.act[self.start[p] + k]));
            }
        }
        ActionSpec {
            side: self.side,
            carrier: self.carrier.to_vec(),
            anchor: self.anchor.clone(),
            triples,
        }
    }

    /// The groupoid acting on its own arrows: on the right with anchor `src`
    /// and `p·γ = γ then p`; on the left with anchor `tgt` and
    /// `γ·p = p then γ`.
    pub fn on_arrows(groupoid: Arc<FiniteGroupoid>, side: Side) -> Self {
        let g = groupoid.clone();
        let carrier = g.morphism_labels().to_vec();
        let m = g.num_morphisms();
        match side {
            Side::Right => {
                let anchor = (0..m).map(|p| g.src(p)).collect();
                Self::unchecked(groupoid, side, carrier, anchor, |p, a| g.then(a, p))
            }
            Side::Left => {
                let anchor = (0..m).map(|p| g.tgt(p)).collect();
                Self::unchecked(groupoid, side, carrier, anchor, |p, a| g.then(p, a))
            }
        }
    }

    /// Orbits of the action, ordered by smallest point.
    pub fn orbits(&self) -> Vec<Vec<usize>> {
        let mut uf = UnionFind::new(self.len());
        for p in 0..self.len() {
            for &q in &self.act[self.start[p]..self.start[p + 1]] {
                uf.union(p, q);
            }
        }
        uf.classes()
    }

    pub(crate) fn moved_set(&self, colors: Vec<u64>) -> MovedSet {
        let moves = (0..self.groupoid.num_morphisms())
            .map(|a| (0..self.len()).map(|p| self.apply(p, a)).collect())
            .collect();
        MovedSet { colors, moves }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum BundleViolation {
    #[error("bundles need a right action")]
    NotRight,
    #[error("projection has {found} entries for a carrier of {expected}")]
    ProjLength { expected: usize, found: usize },
    #[error("projection sends {point} outside the base")]
    ProjOutOfRange { point: usize },
    #[error("base point {base} has empty fiber")]
    ProjNotSurjective { base: usize },
    #[error("projection is not invariant at ({point}, {arrow})")]
    NotInvariant { point: usize, arrow: usize },
    #[error("{point}·{first} = {point}·{second}: division map not injective")]
    DivisionNotInjective {
        point: usize,
        first: usize,
        second: usize,
    },
    #[error("no arrow carries {from} to {to} in the same fiber: division map not surjective")]
    DivisionNotSurjective { from: usize, to: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub struct BundleReport {
    pub violations: Vec<BundleViolation>,
}

impl fmt::Display for BundleReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} bundle violation(s)", self.violations.len())?;
        for v in &self.violations {
            write!(f, "\n  {v}")?;
        }
        Ok(())
    }
}

/// A right principal bundle `π: P → M`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrincipalGroupoidBundle {
    pub action: GroupoidAction,
    pub base: Vec<String>,
    pub proj: Vec<usize>,
}

/// Checks invariance, the division bijection, and surjectivity of `proj`.
pub fn principal_violations(
    action: &GroupoidAction,
    base_len: usize,
    proj: &[usize],
) -> Vec<BundleViolation> {
    if action.side != Side::Right {
        return vec![BundleViolation::NotRight];
    }
    let n = action.len();
    if proj.len() != n {
        return vec![BundleViolation::ProjLength {
            expected: n,
            found: proj.len(),
        }];
    }
    if let Some(point) = proj.iter().position(|&m| m >= base_len) {
        return vec![BundleViolation::ProjOutOfRange { point }];
    }
    fiber_violations(
        n,
        &|p| action.results(p),
        &|p, k| action.acting_arrows(p)[k],
        base_len,
        proj,
    )
}

/// Surjectivity, invariance and the division bijection for a right action
/// where `results(p)[k]` is `p` acted on by the arrow `arrow(p, k)`, with
/// `proj` already in range.
pub(crate) fn fiber_violations<'a>(
    n: usize,
    results: &dyn Fn(usize) -> &'a [usize],
    arrow: &dyn Fn(usize, usize) -> usize,
    base_len: usize,
    proj: &[usize],
) -> Vec<BundleViolation> {
    let mut out = Vec::new();
    let mut hit = vec![false; base_len];
    for &m in proj {
        hit[m] = true;
    }
    for (base, h) in hit.iter().enumerate() {
        if !h {
            out.push(BundleViolation::ProjNotSurjective { base });
        }
    }
    let mut fiber = vec![0usize; base_len];
    for &m in proj {
        fiber[m] += 1;
    }
    let mut reached: Vec<Option<usize>> = vec![None; n];
    let mut touched = Vec::new();
    for p in 0..n {
        let mut inside = 0;
        touched.clear();
        for (k, &q) in results(p).iter().enumerate() {
            if proj[q] != proj[p] {
                out.push(BundleViolation::NotInvariant { point: p, arrow: arrow(p, k) });
            }
            if let Some(first) = reached[q] {
                out.push(BundleViolation::DivisionNotInjective {
                    point: p,
                    first,
                    second: arrow(p, k),
                });
            } else {
                reached[q] = Some(arrow(p, k));
                touched.push(q);
                inside += usize::from(proj[q] == proj[p]);
            }
        }
        if inside < fiber[proj[p]] {
            for q in 0..n {
                if proj[q] == proj[p] && reached[q].is_none() {
                    out.push(BundleViolation::DivisionNotSurjective { from: p, to: q });
                }
            }
        }
        for &q in &touched {
            reached[q] = None;
        }
    }
    out
}

impl PrincipalGroupoidBundle {
    pub fn validate(
        action: GroupoidAction,
        base: Vec<String>,
        proj: Vec<usize>,
    ) -> Result<Self, BundleReport> {
        let violations = principal_violations(&action, base.len(), &proj);
        if violations.is_empty() {
            Ok(Self { action, base, proj })
        } else {
            Err(BundleReport { violations })
        }
    }

    /// The unit bundle `tgt: G₁ → G₀` with `G` acting on the right by
    /// composition.
    pub fn unit(groupoid: Arc<FiniteGroupoid>) -> Self {
        let base = groupoid.object_labels().to_vec();
        let proj = (0..groupoid.num_morphisms()).map(|p| groupoid.tgt(p)).collect();
        Self {
            action: GroupoidAction::on_arrows(groupoid, Side::Right),
            base,
            proj,
        }
    }

    pub fn groupoid(&self) -> &Arc<FiniteGroupoid> {
        &self.action.groupoid
    }

    /// The unique `γ` with `p·γ = q`, for `p`, `q` in the same fiber.
    pub fn delta(&self, p: usize, q: usize) -> Option<usize> {
        if self.proj[p] != self.proj[q] {
            return None;
        }
        self.action
            .acting_arrows(p)
            .iter()
            .copied()
            .find(|&a| self.action.apply(p, a) == Some(q))
    }

    pub fn fiber(&self, m: usize) -> Vec<usize> {
        (0..self.proj.len()).filter(|&p| self.proj[p] == m).collect()
    }
}

/// Pullback along `f: N → M`. The carrier is `{(n, p) : f(n) = π(p)}` in
/// lexicographic order, acted on in the second coordinate.
pub fn pullback_bundle(
    bundle: &PrincipalGroupoidBundle,
    base: Vec<String>,
    f: &[usize],
) -> PrincipalGroupoidBundle {
    let mut pairs = Vec::new();
    for (n, &m) in f.iter().enumerate() {
        for p in bundle.fiber(m) {
            pairs.push((n, p));
        }
    }
    let index: HashMap<(usize, usize), usize> =
        pairs.iter().enumerate().map(|(i, &pair)| (pair, i)).collect();
    let carrier: Vec<String> = pairs
        .iter()
        .map(|&(n, p)| format!("({},{})", base[n], bundle.action.carrier[p]))
        .collect();
    let anchor = pairs.iter().map(|&(_, p)| bundle.action.anchor[p]).collect();
    let proj = pairs.iter().map(|&(n, _)| n).collect();
    let action = GroupoidAction::unchecked(
        bundle.groupoid().clone(),
        Side::Right,
        carrier,
        anchor,
        |i, a| {
            let (n, p) = pairs[i];
            index[&(n, bundle.action.apply(p, a).expect("acting arrow"))]
        },
    );
    PrincipalGroupoidBundle { action, base, proj }
}

/// An equivariant bijection of carriers over the identity of the base.
pub fn bundle_isomorphism(
    a: &PrincipalGroupoidBundle,
    b: &PrincipalGroupoidBundle,
) -> Option<Vec<usize>> {
    if a.base.len() != b.base.len() || a.groupoid() != b.groupoid() {
        return None;
    }
    let colors = |x: &PrincipalGroupoidBundle| {
        (0..x.action.len())
            .map(|p| ((x.proj[p] as u64) << 32) | x.action.anchor[p] as u64)
            .collect()
    };
    find_bijection(&a.action.moved_set(colors(a)), &b.action.moved_set(colors(b)))
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum GaugeError {
    #[error("gauge groupoids need a one-object structure groupoid, found {0} objects")]
    NotOneObject(usize),
    #[error("not principal: {0}")]
    NotPrincipal(BundleReport),
}

/// Gauge groupoid of a bundle whose structure groupoid has one object.
/// Arrows are diagonal orbits `[x₁, x₂]` from `π(x₁)` to `π(x₂)`, listed by
/// smallest representative pair.
pub fn gauge_groupoid(bundle: &PrincipalGroupoidBundle) -> Result<FiniteGroupoid, GaugeError> {
    let g = bundle.groupoid();
    if g.num_objects() != 1 {
        return Err(GaugeError::NotOneObject(g.num_objects()));
    }
    let violations = principal_violations(&bundle.action, bundle.base.len(), &bundle.proj);
    if !violations.is_empty() {
        return Err(GaugeError::NotPrincipal(BundleReport { violations }));
    }
    let n = bundle.action.len();
    let act = |p: usize, a: usize| bundle.action.apply(p, a).expect("one object");
    let mut uf = UnionFind::new(n * n);
    for x1 in 0..n {
        for x2 in 0..n {
            for a in 0..g.num_morphisms() {
                uf.union(x1 * n + x2, act(x1, a) * n + act(x2, a));
            }
        }
    }
    let classes = uf.classes();
    let mut class_of = vec![0; n * n];
    for (c, members) in classes.iter().enumerate() {
        for &pair in members {
            class_of[pair] = c;
        }
    }
    let reps: Vec<(usize, usize)> = classes.iter().map(|c| (c[0] / n, c[0] % n)).collect();
    let src = reps.iter().map(|&(x1, _)| bundle.proj[x1]).collect();
    let tgt = reps.iter().map(|&(_, x2)| bundle.proj[x2]).collect();
    let ident = (0..bundle.base.len())
        .map(|m| {
            let x = bundle.fiber(m)[0];
            class_of[x * n + x]
        })
        .collect();
    let inv = reps.iter().map(|&(x1, x2)| class_of[x2 * n + x1]).collect();
    let labels = reps
        .iter()
        .map(|&(x1, x2)| format!("[{},{}]", bundle.action.carrier[x1], bundle.action.carrier[x2]))
        .collect();
    let b = bundle.clone();
    let rule = move |f: usize, h: usize| {
        let (x1, x2) = reps[f];
        let (x3, x4) = reps[h];
        let g = b.delta(x3, x2).expect("aligned fibers");
        let moved = b.action.apply(x4, g).expect("one object");
        class_of[x1 * n + moved]
    };
    Ok(FiniteGroupoid::assemble(
        bundle.base.clone(),
        labels,
        src,
        tgt,
        ident,
        inv,
        rule,
    ))
}

/// The trivial bundle `M × G` over `0..m` for a group groupoid `G`.
pub fn trivial_bundle(groupoid: Arc<FiniteGroupoid>, m: usize) -> PrincipalGroupoidBundle {
    let k = groupoid.num_morphisms();
    let g = groupoid.clone();
    let carrier: Vec<String> = (0..m * k)
        .map(|i| format!("({},{})", i / k, g.morphism_label(i % k)))
        .collect();
    let action = GroupoidAction::unchecked(groupoid, Side::Right, carrier, vec![0; m * k], |p, a| {
        (p / k) * k + g.then(a, p % k)
    });
    PrincipalGroupoidBundle {
        action,
        base: (0..m).map(|i| i.to_string()).collect(),
        proj: (0..m * k).map(|p| p / k).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::FiniteGroup;

    fn z2() -> Arc<FiniteGroupoid> {
        Arc::new(FiniteGroupoid::group(&FiniteGroup::cyclic(2)))
    }

    #[test]
    fn actions_on_arrows_validate() {
        let g = Arc::new(FiniteGroupoid::product(
            &FiniteGroupoid::pair(2),
            &FiniteGroupoid::group(&FiniteGroup::symmetric(3)),
        ));
        for side in [Side::Left, Side::Right] {
            let a = GroupoidAction::on_arrows(g.clone(), side);
            GroupoidAction::validate(g.clone(), a.to_spec()).unwrap();
        }
        let unit = PrincipalGroupoidBundle::unit(g);
        PrincipalGroupoidBundle::validate(unit.action, unit.base, unit.proj).unwrap();
    }

    #[test]
    fn bad_action_is_rejected() {
        let spec = ActionSpec {
            side: Side::Right,
            carrier: vec!["0".into(), "1".into()],
            anchor: vec![0, 0],
            triples: vec![(0, 0, 0), (0, 1, 0), (1, 0, 1), (1, 1, 0)],
        };
        let report = GroupoidAction::validate(z2(), spec).unwrap_err();
        assert!(report
            .violations
            .iter()
            .any(|v| matches!(v, ActionViolation::AssocFail { point: 1, .. })));
    }

    #[test]
    fn discrete_groupoid_acts_through_any_map() {
        let d = Arc::new(FiniteGroupoid::discrete(2));
        let anchor = vec![0, 1, 1];
        let a = GroupoidAction::from_fn(
            d.clone(),
            Side::Right,
            vec!["p".into(), "q".into(), "r".into()],
            anchor,
            |p, _| p,
        )
        .unwrap();
        // P = M with π = id is principal
        let id = GroupoidAction::from_fn(d, Side::Right, vec!["0".into(), "1".into()], vec![0, 1], |p, _| p)
            .unwrap();
        PrincipalGroupoidBundle::validate(id, vec!["0".into(), "1".into()], vec![0, 1]).unwrap();
        assert_eq!(a.orbits().len(), 3);
    }

    #[test]
    fn trivial_action_on_a_point_is_not_principal() {
        let a = GroupoidAction::from_fn(z2(), Side::Right, vec!["0".into()], vec![0], |p, _| p)
            .unwrap();
        let report = PrincipalGroupoidBundle::validate(a, vec!["0".into()], vec![0]).unwrap_err();
        assert_eq!(
            report.violations,
            vec![BundleViolation::DivisionNotInjective { point: 0, first: 0, second: 1 }]
        );
    }

    #[test]
    fn difference_map_round_trips() {
        let g = Arc::new(FiniteGroupoid::action(&FiniteGroup::symmetric(3), &[vec![0; 6]]).unwrap());
        let b = trivial_bundle(g, 3);
        for p in 0..b.action.len() {
            for q in 0..b.action.len() {
                match b.delta(p, q) {
                    Some(d) => assert_eq!(b.action.apply(p, d), Some(q)),
                    None => assert_ne!(b.proj[p], b.proj[q]),
                }
            }
        }
    }

    #[test]
    fn pullbacks() {
        let g = Arc::new(FiniteGroupoid::pair(3));
        let unit = PrincipalGroupoidBundle::unit(g.clone());
        // along the point 1 → G₀: arrows with target 1
        let at_one = pullback_bundle(&unit, vec!["*".into()], &[1]);
        assert_eq!(at_one.action.len(), 3);
        PrincipalGroupoidBundle::validate(at_one.action.clone(), at_one.base.clone(), at_one.proj.clone())
            .unwrap();
        let same = pullback_bundle(&unit, unit.base.clone(), &[0, 1, 2]);
        assert!(bundle_isomorphism(&same, &unit).is_some());
        let constant = pullback_bundle(&at_one, vec!["a".into(), "b".into()], &[0, 0]);
        assert_eq!(constant.action.len(), 6);
    }

    #[test]
    fn gauge_groupoids() {
        let b = trivial_bundle(z2(), 2);
        let gauge = gauge_groupoid(&b).unwrap();
        assert_eq!(gauge.num_morphisms(), 8);
        assert!(gauge.is_transitive());
        FiniteGroupoid::from_raw(gauge.to_raw(), gauge.inverse_table().to_vec()).unwrap();
        assert_eq!(gauge.isotropy(0).0.order(), 2);
        let one = gauge_groupoid(&trivial_bundle(z2(), 1)).unwrap();
        assert_eq!(one.num_morphisms(), 2);
        assert_eq!(one.then(1, 1), 0);
    }
}
