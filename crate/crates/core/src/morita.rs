//! Pullback groupoids, Morita morphisms, and deciding Morita equivalence.
//!
//! For finite groupoids Morita equivalence coincides with equivalence of
//! categories, which is decided by matching components and comparing their
//! isotropy groups up to isomorphism.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::functor::{
    compose_functors, is_equivalence, EquivalenceReport, GroupoidFunctor, NatError, NatTransform,
};
use crate::group::{GroupError, ISOMORPHISM_SEARCH_CAP};
use crate::groupoid::FiniteGroupoid;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum MoritaError {
    #[error("object {object} is not in the image of the map")]
    NotSurjective { object: usize },
    #[error("isotropy group of order {order} exceeds the search cap")]
    IsotropyTooLarge { order: usize },
    #[error("groupoid is not transitive")]
    NotTransitive,
    #[error("object {0} does not exist")]
    NoSuchObject(usize),
}

/// Pullback of `gamma` along `j: P₀ → Γ₀`. Arrows are triples `(p, x, q)`
/// with `j(p) = src x`, `tgt x = j(q)`, ordered lexicographically; `(p, x, q)`
/// then `(q, y, r)` is `(p, x then y, r)`.
pub struct PullbackGroupoid {
    pub groupoid: Arc<FiniteGroupoid>,
    pub projection: GroupoidFunctor,
    pub triples: Vec<(usize, usize, usize)>,
}

impl fmt::Debug for PullbackGroupoid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PullbackGroupoid")
            .field("groupoid", &self.groupoid)
            .field("triples", &self.triples.len())
            .finish()
    }
}

pub fn pullback_groupoid(
    gamma: &Arc<FiniteGroupoid>,
    labels: Vec<String>,
    j: &[usize],
) -> Result<PullbackGroupoid, MoritaError> {
    let mut hit = vec![false; gamma.num_objects()];
    for &x in j {
        hit[x] = true;
    }
    if let Some(object) = hit.iter().position(|&h| !h) {
        return Err(MoritaError::NotSurjective { object });
    }
    let mut fibers = vec![Vec::new(); gamma.num_objects()];
    let mut fiber_pos = vec![0; j.len()];
    for (p, &x) in j.iter().enumerate() {
        fiber_pos[p] = fibers[x].len();
        fibers[x].push(p);
    }
    // offsets[p][k]: index of (p, out_arrows(j p)[k], first q)
    let mut offsets = Vec::with_capacity(j.len());
    let mut triples = Vec::new();
    for (p, &jp) in j.iter().enumerate() {
        let mut row = Vec::new();
        for &x in gamma.out_arrows(jp) {
            row.push(triples.len());
            for &q in &fibers[gamma.tgt(x)] {
                triples.push((p, x, q));
            }
        }
        offsets.push(row);
    }
    let g = gamma.clone();
    let index = move |p: usize, x: usize, q: usize| -> usize {
        let k = g.out_arrows(g.src(x)).binary_search(&x).expect("arrow out of j(p)");
        offsets[p][k] + fiber_pos[q]
    };
    let src = triples.iter().map(|t| t.0).collect();
    let tgt = triples.iter().map(|t| t.2).collect();
    let ident = (0..j.len()).map(|p| index(p, gamma.ident(j[p]), p)).collect();
    let inv = triples
        .iter()
        .map(|&(p, x, q)| index(q, gamma.inv(x), p))
        .collect();
    let morphisms = triples
        .iter()
        .map(|&(p, x, q)| format!("({},{},{})", labels[p], gamma.morphism_label(x), labels[q]))
        .collect();
    let t = triples.clone();
    let g = gamma.clone();
    let rule = move |a: usize, b: usize| {
        let (p, x, _) = t[a];
        let (_, y, r) = t[b];
        index(p, g.then(x, y), r)
    };
    let groupoid = Arc::new(FiniteGroupoid::assemble(
        labels,
        morphisms,
        src,
        tgt,
        ident,
        inv,
        rule,
    ));
    let projection = GroupoidFunctor::unchecked(
        groupoid.clone(),
        gamma.clone(),
        j.to_vec(),
        triples.iter().map(|t| t.1).collect(),
    );
    Ok(PullbackGroupoid {
        groupoid,
        projection,
        triples,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MoritaFailure {
    ObjectNotHit { object: usize },
    MissingTriple { src: usize, arrow: usize, tgt: usize },
    RepeatedTriple { first: usize, second: usize },
}

impl fmt::Display for MoritaFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MoritaFailure::ObjectNotHit { object } => {
                write!(f, "object {object} of the target is not hit")
            }
            MoritaFailure::MissingTriple { src, arrow, tgt } => {
                write!(f, "triple ({src}, {arrow}, {tgt}) has no preimage")
            }
            MoritaFailure::RepeatedTriple { first, second } => {
                write!(f, "arrows {first} and {second} give the same triple")
            }
        }
    }
}

/// `Ok(())` when `f` is a Morita morphism: surjective on objects, and
/// `γ ↦ (src γ, F γ, tgt γ)` a bijection onto the pullback triples.
pub fn is_morita_morphism(f: &GroupoidFunctor) -> Result<(), MoritaFailure> {
    let (g, h) = (&f.source, &f.target);
    let mut hit = vec![false; h.num_objects()];
    for &x in &f.f0 {
        hit[x] = true;
    }
    if let Some(object) = hit.iter().position(|&b| !b) {
        return Err(MoritaFailure::ObjectNotHit { object });
    }
    let mut seen: HashMap<(usize, usize, usize), usize> = HashMap::new();
    for a in 0..g.num_morphisms() {
        let key = (g.src(a), f.f1[a], g.tgt(a));
        if let Some(&first) = seen.get(&key) {
            return Err(MoritaFailure::RepeatedTriple { first, second: a });
        }
        seen.insert(key, a);
    }
    let mut fibers = vec![Vec::new(); h.num_objects()];
    for (p, &x) in f.f0.iter().enumerate() {
        fibers[x].push(p);
    }
    for p in 0..g.num_objects() {
        for &x in h.out_arrows(f.f0[p]) {
            for &q in &fibers[h.tgt(x)] {
                if !seen.contains_key(&(p, x, q)) {
                    return Err(MoritaFailure::MissingTriple {
                        src: p,
                        arrow: x,
                        tgt: q,
                    });
                }
            }
        }
    }
    Ok(())
}

/// A pair of functors with natural isomorphisms `id ⇒ K∘F` and `F∘K ⇒ id`.
#[derive(Clone, Debug)]
pub struct EquivalenceWitness {
    pub forward: GroupoidFunctor,
    pub backward: GroupoidFunctor,
    pub unit: NatTransform,
    pub counit: NatTransform,
}

/// An apex groupoid with two Morita morphisms out of it.
#[derive(Clone, Debug)]
pub struct SpanWitness {
    pub apex: Arc<FiniteGroupoid>,
    pub left: GroupoidFunctor,
    pub right: GroupoidFunctor,
}

#[derive(Clone, Debug)]
pub enum MoritaWitness {
    Equivalence(EquivalenceWitness),
    Span(SpanWitness),
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum WitnessError {
    #[error("invalid 2-cell: {0}")]
    Cell(#[from] NatError),
    #[error("forward functor is not an equivalence: {0:?}")]
    NotEquivalence(EquivalenceReport),
    #[error("{leg} leg is not a Morita morphism: {failure}")]
    Leg {
        leg: &'static str,
        failure: MoritaFailure,
    },
    #[error("functors do not fit together")]
    Shape,
}

impl MoritaWitness {
    pub fn kind(&self) -> &'static str {
        match self {
            MoritaWitness::Equivalence(_) => "equivalence",
            MoritaWitness::Span(_) => "span",
        }
    }

    pub fn verify(&self) -> Result<(), WitnessError> {
        match self {
            MoritaWitness::Equivalence(w) => w.verify(),
            MoritaWitness::Span(w) => w.verify(),
        }
    }
}

impl EquivalenceWitness {
    pub fn verify(&self) -> Result<(), WitnessError> {
        let kf = compose_functors(&self.forward, &self.backward).map_err(|_| WitnessError::Shape)?;
        let fk = compose_functors(&self.backward, &self.forward).map_err(|_| WitnessError::Shape)?;
        let id_g = GroupoidFunctor::identity(self.forward.source.clone());
        let id_h = GroupoidFunctor::identity(self.forward.target.clone());
        if self.unit.source != id_g || self.unit.target != kf {
            return Err(WitnessError::Shape);
        }
        if self.counit.source != fk || self.counit.target != id_h {
            return Err(WitnessError::Shape);
        }
        NatTransform::new(id_g, kf, self.unit.eta.clone())?;
        NatTransform::new(fk, id_h, self.counit.eta.clone())?;
        let report = is_equivalence(&self.forward);
        if !report.equivalence {
            return Err(WitnessError::NotEquivalence(report));
        }
        Ok(())
    }
}

impl SpanWitness {
    pub fn verify(&self) -> Result<(), WitnessError> {
        if !crate::functor::same_groupoid(&self.left.source, &self.apex)
            || !crate::functor::same_groupoid(&self.right.source, &self.apex)
        {
            return Err(WitnessError::Shape);
        }
        is_morita_morphism(&self.left).map_err(|failure| WitnessError::Leg {
            leg: "left",
            failure,
        })?;
        is_morita_morphism(&self.right).map_err(|failure| WitnessError::Leg {
            leg: "right",
            failure,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Inequivalence {
    ComponentCount { left: usize, right: usize },
    /// The component of `left` represented by `rep` has no partner.
    UnmatchedIsotropy { rep: usize, order: usize },
}

impl fmt::Display for Inequivalence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Inequivalence::ComponentCount { left, right } => {
                write!(f, "component count {left} ≠ {right}")
            }
            Inequivalence::UnmatchedIsotropy { rep, order } => write!(
                f,
                "isotropy group of order {order} at object {rep} matches no component"
            ),
        }
    }
}

#[derive(Clone, Debug)]
pub struct MoritaDecision {
    pub equivalent: bool,
    pub reason: Option<Inequivalence>,
    pub equivalence: Option<EquivalenceWitness>,
    pub span: Option<SpanWitness>,
}

fn map_group_error(e: GroupError) -> MoritaError {
    match e {
        GroupError::TooLarge { order, .. } => MoritaError::IsotropyTooLarge { order },
        GroupError::NotAGroup(_) => unreachable!("isotropy groups are groups"),
    }
}

pub fn morita_equivalent(
    g: &Arc<FiniteGroupoid>,
    h: &Arc<FiniteGroupoid>,
) -> Result<MoritaDecision, MoritaError> {
    let cg = g.components_and_isotropy();
    let ch = h.components_and_isotropy();
    for c in cg.iter().chain(&ch) {
        if c.isotropy.order() > ISOMORPHISM_SEARCH_CAP {
            return Err(MoritaError::IsotropyTooLarge {
                order: c.isotropy.order(),
            });
        }
    }
    let refuse = |reason| {
        Ok(MoritaDecision {
            equivalent: false,
            reason: Some(reason),
            equivalence: None,
            span: None,
        })
    };
    if cg.len() != ch.len() {
        return refuse(Inequivalence::ComponentCount {
            left: cg.len(),
            right: ch.len(),
        });
    }
    // isomorphism is an equivalence relation, so greedy matching is exact
    let mut used = vec![false; ch.len()];
    let mut matches = Vec::with_capacity(cg.len());
    for c in &cg {
        let mut found = None;
        for (k, d) in ch.iter().enumerate() {
            if used[k] || d.isotropy.order() != c.isotropy.order() {
                continue;
            }
            if let Some(iso) = c
                .isotropy
                .isomorphism(&d.isotropy, ISOMORPHISM_SEARCH_CAP)
                .map_err(map_group_error)?
            {
                found = Some((k, iso));
                break;
            }
        }
        let Some((k, iso)) = found else {
            return refuse(Inequivalence::UnmatchedIsotropy {
                rep: c.rep,
                order: c.isotropy.order(),
            });
        };
        used[k] = true;
        matches.push((k, iso));
    }

    // θ on loops at the representatives, transversals on both sides
    let tau_g: Vec<Vec<Option<usize>>> = cg.iter().map(|c| g.transversal(c.rep)).collect();
    let tau_h: Vec<Vec<Option<usize>>> = ch.iter().map(|c| h.transversal(c.rep)).collect();
    let comp_g = g.component_index();
    let comp_h = h.component_index();
    let mut theta: HashMap<usize, usize> = HashMap::new();
    let mut theta_inv: HashMap<usize, usize> = HashMap::new();
    let mut partner_of_h = vec![0; ch.len()];
    for (ci, (k, iso)) in matches.iter().enumerate() {
        partner_of_h[*k] = ci;
        for (e, &img) in iso.iter().enumerate() {
            let (a, b) = (cg[ci].arrows[e], ch[*k].arrows[img]);
            theta.insert(a, b);
            theta_inv.insert(b, a);
        }
    }
    let tg = |x: usize| tau_g[comp_g[x]][x].expect("same component");
    let th = |y: usize| tau_h[comp_h[y]][y].expect("same component");

    let f0: Vec<usize> = (0..g.num_objects()).map(|x| ch[matches[comp_g[x]].0].rep).collect();
    let f1: Vec<usize> = (0..g.num_morphisms())
        .map(|a| {
            let k = g.then(g.then(tg(g.src(a)), a), g.inv(tg(g.tgt(a))));
            theta[&k]
        })
        .collect();
    let k0: Vec<usize> = (0..h.num_objects()).map(|y| cg[partner_of_h[comp_h[y]]].rep).collect();
    let k1: Vec<usize> = (0..h.num_morphisms())
        .map(|a| {
            let k = h.then(h.then(th(h.src(a)), a), h.inv(th(h.tgt(a))));
            theta_inv[&k]
        })
        .collect();
    let forward = GroupoidFunctor::unchecked(g.clone(), h.clone(), f0, f1);
    let backward = GroupoidFunctor::unchecked(h.clone(), g.clone(), k0, k1);
    let kf = compose_functors(&forward, &backward).expect("composable");
    let fk = compose_functors(&backward, &forward).expect("composable");
    let unit = NatTransform {
        source: GroupoidFunctor::identity(g.clone()),
        target: kf,
        eta: (0..g.num_objects()).map(|x| g.inv(tg(x))).collect(),
    };
    let counit = NatTransform {
        source: fk,
        target: GroupoidFunctor::identity(h.clone()),
        eta: (0..h.num_objects()).map(th).collect(),
    };
    let witness = EquivalenceWitness {
        forward,
        backward,
        unit,
        counit,
    };
    let span = span_from_equivalence(&witness);
    Ok(MoritaDecision {
        equivalent: true,
        reason: None,
        equivalence: Some(witness),
        span: Some(span),
    })
}

/// Apex: the pullback of `H` along `G₀ ⊔ H₀ → H₀` (`F₀` on the first
/// summand, identity on the second). The right leg is the projection; the
/// left leg lifts each arrow through the full and faithful `F` after
/// correcting its ends by the counit.
pub fn span_from_equivalence(w: &EquivalenceWitness) -> SpanWitness {
    let (g, h) = (&w.forward.source, &w.forward.target);
    let ng = g.num_objects();
    let mut labels: Vec<String> = g.object_labels().iter().map(|x| format!("0.{x}")).collect();
    labels.extend(h.object_labels().iter().map(|y| format!("1.{y}")));
    let mut j = w.forward.f0.clone();
    j.extend(0..h.num_objects());
    let pb = pullback_groupoid(h, labels, &j).expect("identity summand is surjective");
    let l0: Vec<usize> = (0..j.len())
        .map(|p| if p < ng { p } else { w.backward.f0[p - ng] })
        .collect();
    // ζ_p: F(L p) → J(p)
    let zeta = |p: usize| -> usize {
        if p < ng {
            h.ident(j[p])
        } else {
            w.counit.eta[p - ng]
        }
    };
    let mut lift: HashMap<(usize, usize, usize), usize> = HashMap::new();
    for a in 0..g.num_morphisms() {
        lift.insert((g.src(a), g.tgt(a), w.forward.f1[a]), a);
    }
    let l1: Vec<usize> = pb
        .triples
        .iter()
        .map(|&(p, x, q)| {
            let corrected = h.then(h.then(zeta(p), x), h.inv(zeta(q)));
            lift[&(l0[p], l0[q], corrected)]
        })
        .collect();
    let left = GroupoidFunctor::unchecked(pb.groupoid.clone(), g.clone(), l0, l1);
    SpanWitness {
        apex: pb.groupoid,
        left,
        right: pb.projection,
    }
}

/// The one-object groupoid of the isotropy at `x`, its inclusion, a
/// retraction, and the span `(G; id, retraction)`.
#[derive(Clone, Debug)]
pub struct TransitiveReduction {
    pub isotropy: Arc<FiniteGroupoid>,
    pub inclusion: GroupoidFunctor,
    pub retraction: GroupoidFunctor,
    pub span: SpanWitness,
}

pub fn transitive_reduction(
    g: &Arc<FiniteGroupoid>,
    x: usize,
) -> Result<TransitiveReduction, MoritaError> {
    if x >= g.num_objects() {
        return Err(MoritaError::NoSuchObject(x));
    }
    if !g.is_transitive() {
        return Err(MoritaError::NotTransitive);
    }
    let (group, loops) = g.isotropy(x);
    let isotropy = Arc::new(FiniteGroupoid::group(&group));
    let inclusion = GroupoidFunctor::unchecked(isotropy.clone(), g.clone(), vec![x], loops.clone());
    let tau = g.transversal(x);
    let t = |y: usize| tau[y].expect("transitive");
    let retraction = GroupoidFunctor::unchecked(
        g.clone(),
        isotropy.clone(),
        vec![0; g.num_objects()],
        (0..g.num_morphisms())
            .map(|a| {
                let k = g.then(g.then(t(g.src(a)), a), g.inv(t(g.tgt(a))));
                loops.binary_search(&k).expect("loop at x")
            })
            .collect(),
    );
    let span = SpanWitness {
        apex: g.clone(),
        left: GroupoidFunctor::identity(g.clone()),
        right: retraction.clone(),
    };
    Ok(TransitiveReduction {
        isotropy,
        inclusion,
        retraction,
        span,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::FiniteGroup;

    fn arc(g: FiniteGroupoid) -> Arc<FiniteGroupoid> {
        Arc::new(g)
    }

    #[test]
    fn pullback_counts() {
        let z3 = arc(FiniteGroupoid::group(&FiniteGroup::cyclic(3)));
        let pb = pullback_groupoid(&z3, vec!["a".into(), "b".into()], &[0, 0]).unwrap();
        assert_eq!(pb.groupoid.num_morphisms(), 12);
        FiniteGroupoid::from_raw(pb.groupoid.to_raw(), pb.groupoid.inverse_table().to_vec())
            .unwrap();
        is_morita_morphism(&pb.projection).unwrap();
        let two = arc(FiniteGroupoid::discrete(2));
        assert_eq!(
            pullback_groupoid(&two, vec!["a".into(), "b".into()], &[0, 0]).unwrap_err(),
            MoritaError::NotSurjective { object: 1 }
        );
    }

    #[test]
    fn identity_pullback_is_a_copy() {
        let g = arc(FiniteGroupoid::product(
            &FiniteGroupoid::pair(2),
            &FiniteGroupoid::group(&FiniteGroup::cyclic(2)),
        ));
        let pb = pullback_groupoid(&g, g.object_labels().to_vec(), &[0, 1]).unwrap();
        assert_eq!(pb.groupoid.num_morphisms(), g.num_morphisms());
        assert!(is_equivalence(&pb.projection).equivalence);
    }

    #[test]
    fn morita_morphism_examples() {
        let s3 = arc(FiniteGroupoid::group(&FiniteGroup::symmetric(3)));
        assert_eq!(is_morita_morphism(&GroupoidFunctor::identity(s3)), Ok(()));
        let pair = arc(FiniteGroupoid::pair(2));
        let point = arc(FiniteGroupoid::discrete(1));
        let incl = GroupoidFunctor::new(point, pair.clone(), vec![0], vec![0]).unwrap();
        assert_eq!(
            is_morita_morphism(&incl),
            Err(MoritaFailure::ObjectNotHit { object: 1 })
        );
        // discrete(2) → pair(2) is surjective on objects but not full
        let disc = arc(FiniteGroupoid::discrete(2));
        let f = GroupoidFunctor::new(disc, pair, vec![0, 1], vec![0, 3]).unwrap();
        assert!(matches!(
            is_morita_morphism(&f),
            Err(MoritaFailure::MissingTriple { .. })
        ));
    }

    #[test]
    fn decisions() {
        let d3 = arc(FiniteGroupoid::discrete(3));
        let one = arc(FiniteGroupoid::group(&FiniteGroup::trivial()));
        let r = morita_equivalent(&d3, &one).unwrap();
        assert!(!r.equivalent);
        assert_eq!(r.reason.unwrap().to_string(), "component count 3 ≠ 1");

        let p3 = arc(FiniteGroupoid::pair(3));
        let r = morita_equivalent(&p3, &one).unwrap();
        assert!(r.equivalent);
        MoritaWitness::Equivalence(r.equivalence.unwrap()).verify().unwrap();
        MoritaWitness::Span(r.span.unwrap()).verify().unwrap();

        let swap = arc(
            FiniteGroupoid::action(&FiniteGroup::cyclic(2), &[vec![0, 1], vec![1, 0]]).unwrap(),
        );
        assert!(morita_equivalent(&swap, &one).unwrap().equivalent);

        let z4 = arc(FiniteGroupoid::group(&FiniteGroup::cyclic(4)));
        let v4 = arc(FiniteGroupoid::group(&FiniteGroup::direct_product(
            &FiniteGroup::cyclic(2),
            &FiniteGroup::cyclic(2),
        )));
        assert!(!morita_equivalent(&z4, &v4).unwrap().equivalent);
        let s5 = arc(FiniteGroupoid::group(&FiniteGroup::symmetric(5)));
        assert_eq!(
            morita_equivalent(&s5, &s5).unwrap_err(),
            MoritaError::IsotropyTooLarge { order: 120 }
        );
    }

    #[test]
    fn mixed_components_witness() {
        let s3 = FiniteGroupoid::group(&FiniteGroup::symmetric(3));
        let a = arc(FiniteGroupoid::disjoint_union(
            &FiniteGroupoid::product(&FiniteGroupoid::pair(2), &s3),
            &FiniteGroupoid::group(&FiniteGroup::cyclic(2)),
        ));
        let b = arc(FiniteGroupoid::disjoint_union(
            &FiniteGroupoid::action(&FiniteGroup::cyclic(2), &[vec![0, 0]]).unwrap(),
            &FiniteGroupoid::product(&s3, &FiniteGroupoid::pair(3)),
        ));
        let r = morita_equivalent(&a, &b).unwrap();
        assert!(r.equivalent);
        r.equivalence.unwrap().verify().unwrap();
        r.span.unwrap().verify().unwrap();
    }

    #[test]
    fn reductions() {
        let p3 = arc(FiniteGroupoid::pair(3));
        let red = transitive_reduction(&p3, 0).unwrap();
        assert_eq!(red.isotropy.num_morphisms(), 1);
        red.span.verify().unwrap();
        assert!(is_morita_morphism(&red.inclusion).is_err());

        let z2 = arc(FiniteGroupoid::group(&FiniteGroup::cyclic(2)));
        let bundle = crate::actions::trivial_bundle(z2, 3);
        let gauge = arc(crate::actions::gauge_groupoid(&bundle).unwrap());
        let red = transitive_reduction(&gauge, 1).unwrap();
        assert_eq!(red.isotropy.num_morphisms(), 2);
        assert!(morita_equivalent(&gauge, &red.isotropy).unwrap().equivalent);

        let d2 = arc(FiniteGroupoid::discrete(2));
        assert_eq!(transitive_reduction(&d2, 0).unwrap_err(), MoritaError::NotTransitive);
        let s3 = arc(FiniteGroupoid::group(&FiniteGroup::symmetric(3)));
        let red = transitive_reduction(&s3, 0).unwrap();
        assert_eq!(is_morita_morphism(&red.inclusion), Ok(()));
    }
}
