//! Descent for presheaves of groupoids over finite sets.

mod presheaf;
mod site;

use std::collections::HashMap;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

pub use presheaf::{
    all_maps, check_coherence, BgPresheaf, CoherenceViolation, ConstantPresheaf,
    GroupoidPresheaf, TwistError,
};
pub use site::{
    partitions, set_pullback, Covering, FiniteSite, SetMap, SetPullback, SiteReport,
    SiteViolation,
};

use crate::functor::{is_equivalence, GroupoidFunctor, NatTransform};
use crate::groupoid::FiniteGroupoid;

/// `U_{ijk}` as lexicographic triples with its three projections to the
/// double overlaps.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TripleOverlap {
    pub points: Vec<(usize, usize, usize)>,
    pub pr12: SetMap,
    pub pr13: SetMap,
    pub pr23: SetMap,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Overlaps {
    pub covering: Covering,
    /// `pairs[i*k + j] = U_i ×_U U_j`
    pub pairs: Vec<SetPullback>,
    /// `triples[(i*k + j)*k + l]`
    pub triples: Vec<TripleOverlap>,
}

impl Overlaps {
    pub fn new(covering: &Covering) -> Self {
        let k = covering.maps.len();
        let mut pairs = Vec::with_capacity(k * k);
        for i in 0..k {
            for j in 0..k {
                pairs.push(set_pullback(&covering.maps[i], &covering.maps[j]));
            }
        }
        let mut triples = Vec::with_capacity(k * k * k);
        for i in 0..k {
            for j in 0..k {
                for l in 0..k {
                    let (fi, fj, fl) = (&covering.maps[i], &covering.maps[j], &covering.maps[l]);
                    let mut points = Vec::new();
                    for a in 0..fi.domain {
                        for b in 0..fj.domain {
                            if fi.map[a] != fj.map[b] {
                                continue;
                            }
                            for c in 0..fl.domain {
                                if fl.map[c] == fi.map[a] {
                                    points.push((a, b, c));
                                }
                            }
                        }
                    }
                    let proj = |pair: &SetPullback, pick: fn(&(usize, usize, usize)) -> (usize, usize)| {
                        SetMap::new(
                            pair.len(),
                            points.iter().map(|p| pair.index(pick(p)).unwrap()).collect(),
                        )
                    };
                    let pr12 = proj(&pairs[i * k + j], |p| (p.0, p.1));
                    let pr13 = proj(&pairs[i * k + l], |p| (p.0, p.2));
                    let pr23 = proj(&pairs[j * k + l], |p| (p.1, p.2));
                    triples.push(TripleOverlap {
                        points,
                        pr12,
                        pr13,
                        pr23,
                    });
                }
            }
        }
        Self {
            covering: covering.clone(),
            pairs,
            triples,
        }
    }

    pub fn len(&self) -> usize {
        self.covering.maps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.covering.maps.is_empty()
    }

    fn sizes(&self) -> impl Iterator<Item = usize> + '_ {
        std::iter::once(self.covering.base)
            .chain(self.covering.maps.iter().map(|m| m.domain))
            .chain(self.pairs.iter().map(|p| p.len()))
            .chain(self.triples.iter().map(|t| t.points.len()))
    }
}

/// Sections `s_i ∈ F(U_i)` and gluing arrows `φ_ij: pr₂* s_j → pr₁* s_i` in
/// `F(U_ij)`, indexed `i*k + j`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct DescentObject {
    pub sections: Vec<usize>,
    pub gluing: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Error, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DatumViolation {
    #[error("expected {expected} entries, found {found}")]
    Shape { expected: usize, found: usize },
    #[error("section {index} is not an object of its groupoid")]
    BadSection { index: usize },
    #[error("gluing arrow ({i}, {j}) has the wrong endpoints")]
    Endpoints { i: usize, j: usize },
    #[error("cocycle condition fails on ({i}, {j}, {k})")]
    Cocycle { i: usize, j: usize, k: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum DescentError {
    #[error("a set of size {size} exceeds the presheaf cap {cap}")]
    CapExceeded { size: usize, cap: usize },
    #[error("covering maps into a set of size {found}, expected {expected}")]
    BaseMismatch { expected: usize, found: usize },
    #[error("the comparison functor leaves the descent category at object {object}")]
    NotCoherent { object: usize },
}

/// Precomputed restriction functors and 2-cells used to compare gluing
/// arrows on triple overlaps.
struct Transport {
    sections: Vec<Arc<FiniteGroupoid>>,
    pair_groupoids: Vec<Arc<FiniteGroupoid>>,
    p1: Vec<GroupoidFunctor>,
    p2: Vec<GroupoidFunctor>,
    /// per triple, per leg (12, 13, 23): `(pr*, α_{pr,p1}, α_{pr,p2})`
    legs: Vec<[(GroupoidFunctor, NatTransform, NatTransform); 3]>,
    triple_groupoids: Vec<Arc<FiniteGroupoid>>,
    k: usize,
}

impl Transport {
    fn new(p: &dyn GroupoidPresheaf, ov: &Overlaps) -> Result<Self, DescentError> {
        let cap = p.max_size();
        if let Some(size) = ov.sizes().find(|&s| s > cap) {
            return Err(DescentError::CapExceeded { size, cap });
        }
        let k = ov.len();
        let sections = ov.covering.maps.iter().map(|m| p.sections(m.domain)).collect();
        let pair_groupoids = ov.pairs.iter().map(|q| p.sections(q.len())).collect();
        let p1 = ov.pairs.iter().map(|q| p.restrict(&q.p1)).collect();
        let p2 = ov.pairs.iter().map(|q| p.restrict(&q.p2)).collect();
        let mut legs = Vec::with_capacity(k * k * k);
        let mut triple_groupoids = Vec::with_capacity(k * k * k);
        for i in 0..k {
            for j in 0..k {
                for l in 0..k {
                    let t = &ov.triples[(i * k + j) * k + l];
                    let leg = |pr: &SetMap, a: usize, b: usize| {
                        let q = &ov.pairs[a * k + b];
                        (p.restrict(pr), p.comparison(pr, &q.p1), p.comparison(pr, &q.p2))
                    };
                    legs.push([leg(&t.pr12, i, j), leg(&t.pr13, i, l), leg(&t.pr23, j, l)]);
                    triple_groupoids.push(p.sections(t.points.len()));
                }
            }
        }
        Ok(Self {
            sections,
            pair_groupoids,
            p1,
            p2,
            legs,
            triple_groupoids,
            k,
        })
    }

    /// `φ_ab` carried to `q_b* s_b → q_a* s_a` over `U_ijk`.
    fn carry(&self, t: usize, leg: usize, sa: usize, sb: usize, phi: usize) -> usize {
        let (pr, a1, a2) = &self.legs[t][leg];
        let g = &self.triple_groupoids[t];
        g.then(g.then(g.inv(a2.eta[sb]), pr.f1[phi]), a1.eta[sa])
    }

    fn cocycle_holds(&self, s: &[usize], phi: &[usize], i: usize, j: usize, l: usize) -> bool {
        let k = self.k;
        let t = (i * k + j) * k + l;
        let ij = self.carry(t, 0, s[i], s[j], phi[i * k + j]);
        let il = self.carry(t, 1, s[i], s[l], phi[i * k + l]);
        let jl = self.carry(t, 2, s[j], s[l], phi[j * k + l]);
        il == self.triple_groupoids[t].then(jl, ij)
    }

    fn gluing_hom(&self, s: &[usize], i: usize, j: usize) -> Vec<usize> {
        let q = i * self.k + j;
        self.pair_groupoids[q].hom(self.p2[q].f0[s[j]], self.p1[q].f0[s[i]])
    }
}

/// Checks a single descent datum for shape, endpoints and the cocycle
/// condition on every triple overlap.
pub fn check_descent_datum(
    p: &dyn GroupoidPresheaf,
    ov: &Overlaps,
    datum: &DescentObject,
) -> Result<Result<(), DatumViolation>, DescentError> {
    let tr = Transport::new(p, ov)?;
    let k = ov.len();
    if datum.sections.len() != k {
        return Ok(Err(DatumViolation::Shape {
            expected: k,
            found: datum.sections.len(),
        }));
    }
    if datum.gluing.len() != k * k {
        return Ok(Err(DatumViolation::Shape {
            expected: k * k,
            found: datum.gluing.len(),
        }));
    }
    for (index, &s) in datum.sections.iter().enumerate() {
        if s >= tr.sections[index].num_objects() {
            return Ok(Err(DatumViolation::BadSection { index }));
        }
    }
    for i in 0..k {
        for j in 0..k {
            let q = i * k + j;
            let g = &tr.pair_groupoids[q];
            let phi = datum.gluing[q];
            if phi >= g.num_morphisms()
                || g.src(phi) != tr.p2[q].f0[datum.sections[j]]
                || g.tgt(phi) != tr.p1[q].f0[datum.sections[i]]
            {
                return Ok(Err(DatumViolation::Endpoints { i, j }));
            }
        }
    }
    for i in 0..k {
        for j in 0..k {
            for l in 0..k {
                if !tr.cocycle_holds(&datum.sections, &datum.gluing, i, j, l) {
                    return Ok(Err(DatumViolation::Cocycle { i, j, k: l }));
                }
            }
        }
    }
    Ok(Ok(()))
}

/// The groupoid of descent data for a covering, enumerated exhaustively.
#[derive(Clone, Debug)]
pub struct DescentCategory {
    pub groupoid: Arc<FiniteGroupoid>,
    pub objects: Vec<DescentObject>,
    /// components `θ_i` of each morphism
    pub morphisms: Vec<Vec<usize>>,
    pub overlaps: Overlaps,
}

impl DescentCategory {
    pub fn object_index(&self, obj: &DescentObject) -> Option<usize> {
        self.objects.iter().position(|o| o == obj)
    }
}

fn product_of<T: Clone>(lists: &[Vec<T>], visit: &mut impl FnMut(&[T])) {
    fn rec<T: Clone>(lists: &[Vec<T>], cur: &mut Vec<T>, visit: &mut impl FnMut(&[T])) {
        if cur.len() == lists.len() {
            visit(cur);
            return;
        }
        for x in &lists[cur.len()] {
            cur.push(x.clone());
            rec(lists, cur, visit);
            cur.pop();
        }
    }
    rec(lists, &mut Vec::with_capacity(lists.len()), visit);
}

pub fn descent_category(
    p: &dyn GroupoidPresheaf,
    covering: &Covering,
) -> Result<DescentCategory, DescentError> {
    let ov = Overlaps::new(covering);
    let tr = Transport::new(p, &ov)?;
    let k = ov.len();
    // triples to check once the gluing arrow with the largest index among
    // their three pairs has been chosen
    let mut checks: Vec<Vec<(usize, usize, usize)>> = vec![Vec::new(); k * k];
    for i in 0..k {
        for j in 0..k {
            for l in 0..k {
                let last = (i * k + j).max(i * k + l).max(j * k + l);
                checks[last].push((i, j, l));
            }
        }
    }
    let mut objects = Vec::new();
    let section_lists: Vec<Vec<usize>> =
        tr.sections.iter().map(|g| (0..g.num_objects()).collect()).collect();
    product_of(&section_lists, &mut |s: &[usize]| {
        let homs: Vec<Vec<usize>> = (0..k * k).map(|q| tr.gluing_hom(s, q / k, q % k)).collect();
        let mut phi = Vec::with_capacity(k * k);
        fn rec(
            tr: &Transport,
            s: &[usize],
            homs: &[Vec<usize>],
            checks: &[Vec<(usize, usize, usize)>],
            phi: &mut Vec<usize>,
            out: &mut Vec<DescentObject>,
        ) {
            let q = phi.len();
            if q == homs.len() {
                out.push(DescentObject {
                    sections: s.to_vec(),
                    gluing: phi.clone(),
                });
                return;
            }
            for &a in &homs[q] {
                phi.push(a);
                if checks[q].iter().all(|&(i, j, l)| tr.cocycle_holds(s, phi, i, j, l)) {
                    rec(tr, s, homs, checks, phi, out);
                }
                phi.pop();
            }
        }
        rec(&tr, s, &homs, &checks, &mut phi, &mut objects);
    });

    let index: HashMap<DescentObject, usize> =
        objects.iter().cloned().enumerate().map(|(n, o)| (o, n)).collect();
    let mut morphisms: Vec<Vec<usize>> = Vec::new();
    let (mut src, mut tgt) = (Vec::new(), Vec::new());
    for (x, obj) in objects.iter().enumerate() {
        let outs: Vec<Vec<usize>> = (0..k)
            .map(|i| tr.sections[i].out_arrows(obj.sections[i]).to_vec())
            .collect();
        product_of(&outs, &mut |theta: &[usize]| {
            let sections: Vec<usize> =
                (0..k).map(|i| tr.sections[i].tgt(theta[i])).collect();
            let gluing = (0..k * k)
                .map(|q| {
                    let (i, j) = (q / k, q % k);
                    let g = &tr.pair_groupoids[q];
                    g.then(
                        g.then(g.inv(tr.p2[q].f1[theta[j]]), obj.gluing[q]),
                        tr.p1[q].f1[theta[i]],
                    )
                })
                .collect();
            let y = index[&DescentObject { sections, gluing }];
            morphisms.push(theta.to_vec());
            src.push(x);
            tgt.push(y);
        });
    }
    let arrow_index: HashMap<(usize, Vec<usize>), usize> = morphisms
        .iter()
        .enumerate()
        .map(|(a, th)| ((src[a], th.clone()), a))
        .collect();
    let ident: Vec<usize> = objects
        .iter()
        .enumerate()
        .map(|(x, o)| {
            let th = (0..k).map(|i| tr.sections[i].ident(o.sections[i])).collect();
            arrow_index[&(x, th)]
        })
        .collect();
    let inv: Vec<usize> = (0..morphisms.len())
        .map(|a| {
            let th = (0..k).map(|i| tr.sections[i].inv(morphisms[a][i])).collect();
            arrow_index[&(tgt[a], th)]
        })
        .collect();
    let object_labels = objects
        .iter()
        .map(|o| {
            let s: Vec<&str> = (0..k).map(|i| tr.sections[i].object_label(o.sections[i])).collect();
            let g: Vec<&str> = (0..k * k)
                .map(|q| tr.pair_groupoids[q].morphism_label(o.gluing[q]))
                .collect();
            format!("({}; {})", s.join(" "), g.join(" "))
        })
        .collect();
    let arrow_labels = morphisms
        .iter()
        .map(|th| {
            let s: Vec<&str> = (0..k).map(|i| tr.sections[i].morphism_label(th[i])).collect();
            format!("({})", s.join(" "))
        })
        .collect();
    let rule_src = src.clone();
    let rule_morphisms = morphisms.clone();
    let rule_sections = tr.sections.clone();
    let groupoid = FiniteGroupoid::assemble(
        object_labels,
        arrow_labels,
        src,
        tgt,
        ident,
        inv,
        move |f, g| {
            let th = (0..k)
                .map(|i| rule_sections[i].then(rule_morphisms[f][i], rule_morphisms[g][i]))
                .collect();
            arrow_index[&(rule_src[f], th)]
        },
    );
    Ok(DescentCategory {
        groupoid: Arc::new(groupoid),
        objects,
        morphisms,
        overlaps: ov,
    })
}

/// `F(U) → Desc`: a section goes to its restrictions glued by the canonical
/// 2-cells, an arrow to its restrictions.
pub fn comparison_functor(
    p: &dyn GroupoidPresheaf,
    desc: &DescentCategory,
) -> Result<GroupoidFunctor, DescentError> {
    let cov = &desc.overlaps.covering;
    let k = cov.maps.len();
    let cap = p.max_size();
    if cov.base > cap {
        return Err(DescentError::CapExceeded { size: cov.base, cap });
    }
    let base = p.sections(cov.base);
    let restrict: Vec<GroupoidFunctor> = cov.maps.iter().map(|m| p.restrict(m)).collect();
    let cells: Vec<(NatTransform, NatTransform)> = desc
        .overlaps
        .pairs
        .iter()
        .enumerate()
        .map(|(q, pair)| {
            let (i, j) = (q / k, q % k);
            (
                p.comparison(&pair.p1, &cov.maps[i]),
                p.comparison(&pair.p2, &cov.maps[j]),
            )
        })
        .collect();
    let index: HashMap<&DescentObject, usize> =
        desc.objects.iter().enumerate().map(|(n, o)| (o, n)).collect();
    let mut f0 = Vec::with_capacity(base.num_objects());
    for s in 0..base.num_objects() {
        let obj = DescentObject {
            sections: restrict.iter().map(|r| r.f0[s]).collect(),
            gluing: cells
                .iter()
                .map(|(a1, a2)| {
                    let g = &a1.target.target;
                    g.then(a2.eta[s], g.inv(a1.eta[s]))
                })
                .collect(),
        };
        match index.get(&obj) {
            Some(&x) => f0.push(x),
            None => return Err(DescentError::NotCoherent { object: s }),
        }
    }
    let arrow_index: HashMap<(usize, Vec<usize>), usize> = desc
        .morphisms
        .iter()
        .enumerate()
        .map(|(a, th)| ((desc.groupoid.src(a), th.clone()), a))
        .collect();
    let f1 = (0..base.num_morphisms())
        .map(|a| {
            let th: Vec<usize> = restrict.iter().map(|r| r.f1[a]).collect();
            arrow_index[&(f0[base.src(a)], th)]
        })
        .collect();
    Ok(GroupoidFunctor::unchecked(base, desc.groupoid.clone(), f0, f1))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StackReport {
    pub full: bool,
    pub faithful: bool,
    pub ess_surjective: bool,
    pub stack: bool,
    pub descent_objects: usize,
    pub descent_morphisms: usize,
    /// a descent datum not isomorphic to the restriction of any section
    pub unglued: Option<DescentObject>,
}

/// Whether the comparison functor for this covering is an equivalence.
pub fn check_stack_condition(
    p: &dyn GroupoidPresheaf,
    covering: &Covering,
) -> Result<StackReport, DescentError> {
    let desc = descent_category(p, covering)?;
    let cmp = comparison_functor(p, &desc)?;
    let eq = is_equivalence(&cmp);
    let comp = desc.groupoid.component_index();
    let mut hit = vec![false; desc.objects.len()];
    for &x in &cmp.f0 {
        hit[comp[x]] = true;
    }
    let unglued = (0..desc.objects.len())
        .find(|&x| !hit[comp[x]])
        .map(|x| desc.objects[x].clone());
    Ok(StackReport {
        full: eq.full,
        faithful: eq.faithful,
        ess_surjective: eq.ess_surjective,
        stack: eq.equivalence,
        descent_objects: desc.objects.len(),
        descent_morphisms: desc.morphisms.len(),
        unglued,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::FiniteGroup;

    fn z(n: usize) -> Arc<FiniteGroupoid> {
        Arc::new(FiniteGroupoid::group(&FiniteGroup::cyclic(n)))
    }

    #[test]
    fn bg_over_two_singletons() {
        let p = BgPresheaf::new(z(2), 4);
        let cov = Covering::by_parts(2, &[vec![0], vec![1]]);
        let desc = descent_category(&p, &cov).unwrap();
        let comps = desc.groupoid.components_and_isotropy();
        assert_eq!(comps.len(), 1);
        assert_eq!(comps[0].isotropy.order(), 4);
        assert!(check_stack_condition(&p, &cov).unwrap().stack);
    }

    #[test]
    fn twisted_presheaf_still_descends() {
        let p = BgPresheaf::twisted(z(4), vec![2], 3).unwrap();
        for parts in partitions(3, 3) {
            let report = check_stack_condition(&p, &Covering::by_parts(3, &parts)).unwrap();
            assert!(report.stack, "{parts:?}");
        }
        let overlapping = Covering::by_parts(3, &[vec![0, 1], vec![1, 2]]);
        assert!(check_stack_condition(&p, &overlapping).unwrap().stack);
    }

    #[test]
    fn constant_presheaf_fails_to_glue() {
        let p = ConstantPresheaf::new(Arc::new(FiniteGroupoid::discrete(2)), 4);
        let cov = Covering::by_parts(2, &[vec![0], vec![1]]);
        let report = check_stack_condition(&p, &cov).unwrap();
        assert!(report.full && report.faithful && !report.ess_surjective);
        assert!(report.unglued.is_some());
        // a single part is fine
        assert!(check_stack_condition(&p, &Covering::identity(2)).unwrap().stack);
    }

    #[test]
    fn empty_covering_of_empty_set() {
        let p = BgPresheaf::new(Arc::new(FiniteGroupoid::pair(2)), 2);
        let report = check_stack_condition(&p, &Covering::new(0, vec![])).unwrap();
        assert!(report.stack);
        assert_eq!(report.descent_objects, 1);
    }

    #[test]
    fn datum_checks() {
        let p = BgPresheaf::new(z(3), 3);
        let cov = Covering::by_parts(2, &[vec![0, 1], vec![1]]);
        let ov = Overlaps::new(&cov);
        let desc = descent_category(&p, &cov).unwrap();
        for obj in &desc.objects {
            assert_eq!(check_descent_datum(&p, &ov, obj).unwrap(), Ok(()));
        }
        let mut bad = desc.objects[0].clone();
        // U_01 has one point; F of it is Z3, so the gluing arrow is a rotation
        bad.gluing[1] = 1;
        assert!(matches!(
            check_descent_datum(&p, &ov, &bad).unwrap(),
            Err(DatumViolation::Cocycle { .. })
        ));
    }

    #[test]
    fn cap_is_enforced() {
        let p = BgPresheaf::new(z(2), 2);
        let err = check_stack_condition(&p, &Covering::identity(3)).unwrap_err();
        assert_eq!(err, DescentError::CapExceeded { size: 3, cap: 2 });
    }
}
