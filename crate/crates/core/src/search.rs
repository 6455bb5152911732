//! Exhaustive and random enumeration of functors and natural
//! transformations between finite groupoids.
//!
//! A functor is pinned down by, for each component of the source with
//! representative `r` and transversal `τ`, the image of `r`, a homomorphism
//! of isotropy groups at `r`, and the images of the transversal arrows. Every
//! other arrow `g: x → y` factors as `τ_x⁻¹ · k · τ_y` with `k` a loop at `r`.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::functor::{GroupoidFunctor, NatTransform};
use crate::groupoid::FiniteGroupoid;

struct ComponentPlan {
    rep: usize,
    objects: Vec<usize>,
    /// `tau[y]` for `y` in `objects`: an arrow `rep → y`.
    tau: Vec<usize>,
    /// Loops at `rep`, indexed like the isotropy group.
    loops: Vec<usize>,
    /// `loop_of[g]` for every arrow of the component: the loop `τ_x g τ_y⁻¹`.
    iso: crate::group::FiniteGroup,
}

fn plan(g: &FiniteGroupoid) -> Vec<ComponentPlan> {
    g.components_and_isotropy()
        .into_iter()
        .map(|c| {
            let t = g.transversal(c.rep);
            let tau = c.objects.iter().map(|&y| t[y].expect("same component")).collect();
            ComponentPlan {
                rep: c.rep,
                objects: c.objects,
                tau,
                loops: c.arrows,
                iso: c.isotropy,
            }
        })
        .collect()
}

/// Per-component choice: image of the representative, images of the
/// isotropy loops, images of the transversal arrows.
#[derive(Clone)]
struct Choice {
    rep_image: usize,
    loop_images: Vec<usize>,
    tau_images: Vec<usize>,
}

fn assemble(
    g: &Arc<FiniteGroupoid>,
    h: &Arc<FiniteGroupoid>,
    plans: &[ComponentPlan],
    choices: &[Choice],
) -> GroupoidFunctor {
    let mut f0 = vec![0; g.num_objects()];
    let mut tau_of = vec![0; g.num_objects()];
    let mut tau_img = vec![0; g.num_objects()];
    let mut comp_of = vec![0; g.num_objects()];
    for (ci, (p, c)) in plans.iter().zip(choices).enumerate() {
        for (k, &y) in p.objects.iter().enumerate() {
            tau_of[y] = p.tau[k];
            tau_img[y] = c.tau_images[k];
            f0[y] = h.tgt(c.tau_images[k]);
            comp_of[y] = ci;
        }
        let _ = c.rep_image;
    }
    let f1 = (0..g.num_morphisms())
        .map(|a| {
            let (x, y) = (g.src(a), g.tgt(a));
            let p = &plans[comp_of[x]];
            let c = &choices[comp_of[x]];
            let k = g.then(g.then(tau_of[x], a), g.inv(tau_of[y]));
            let ki = p.loops.binary_search(&k).expect("loop at the representative");
            h.then(h.then(h.inv(tau_img[x]), c.loop_images[ki]), tau_img[y])
        })
        .collect();
    GroupoidFunctor::unchecked(g.clone(), h.clone(), f0, f1)
}

/// Options for each component: all (rep image, loop images).
fn isotropy_options(p: &ComponentPlan, h: &FiniteGroupoid) -> Vec<(usize, Vec<usize>)> {
    let mut out = Vec::new();
    for x in 0..h.num_objects() {
        let (hx, hloops) = h.isotropy(x);
        for hom in p.iso.homomorphisms(&hx) {
            out.push((x, hom.iter().map(|&i| hloops[i]).collect()));
        }
    }
    out
}

/// Calls `visit` on every functor `g → h` until it returns `false`.
/// Returns `false` when stopped early.
pub fn for_each_functor(
    g: &Arc<FiniteGroupoid>,
    h: &Arc<FiniteGroupoid>,
    visit: &mut dyn FnMut(GroupoidFunctor) -> bool,
) -> bool {
    for_each_functor_where(g, h, &|_| true, visit)
}

/// Like [`for_each_functor`], pruned by `admit`. It sees partial object
/// maps, with `usize::MAX` for objects not yet placed, and may reject a
/// partial map only if it rejects every completion of it.
pub fn for_each_functor_where(
    g: &Arc<FiniteGroupoid>,
    h: &Arc<FiniteGroupoid>,
    admit: &dyn Fn(&[usize]) -> bool,
    visit: &mut dyn FnMut(GroupoidFunctor) -> bool,
) -> bool {
    let plans = plan(g);
    let options: Vec<Vec<(usize, Vec<usize>)>> =
        plans.iter().map(|p| isotropy_options(p, h)).collect();
    let mut choices: Vec<Choice> = Vec::with_capacity(plans.len());
    let mut f0 = vec![usize::MAX; g.num_objects()];
    rec_component(g, h, &plans, &options, &mut choices, &mut f0, admit, visit)
}

#[allow(clippy::too_many_arguments)]
fn rec_component(
    g: &Arc<FiniteGroupoid>,
    h: &Arc<FiniteGroupoid>,
    plans: &[ComponentPlan],
    options: &[Vec<(usize, Vec<usize>)>],
    choices: &mut Vec<Choice>,
    f0: &mut Vec<usize>,
    admit: &dyn Fn(&[usize]) -> bool,
    visit: &mut dyn FnMut(GroupoidFunctor) -> bool,
) -> bool {
    let ci = choices.len();
    if ci == plans.len() {
        return visit(assemble(g, h, plans, choices));
    }
    let p = &plans[ci];
    for (x, loops) in &options[ci] {
        let reach: Vec<usize> = h.out_arrows(*x).to_vec();
        let mut tau_images = vec![h.ident(*x); p.objects.len()];
        let rep_pos = p.objects.iter().position(|&y| y == p.rep).expect("rep in component");
        let keep = rec_tau(&reach, rep_pos, 0, &mut tau_images, &mut |taus| {
            for (k, &y) in p.objects.iter().enumerate() {
                f0[y] = h.tgt(taus[k]);
            }
            let mut keep = true;
            if admit(f0) {
                choices.push(Choice {
                    rep_image: *x,
                    loop_images: loops.clone(),
                    tau_images: taus.to_vec(),
                });
                keep = rec_component(g, h, plans, options, choices, f0, admit, visit);
                choices.pop();
            }
            for &y in &p.objects {
                f0[y] = usize::MAX;
            }
            keep
        });
        if !keep {
            return false;
        }
    }
    true
}

fn rec_tau(
    reach: &[usize],
    rep_pos: usize,
    k: usize,
    taus: &mut Vec<usize>,
    visit: &mut dyn FnMut(&[usize]) -> bool,
) -> bool {
    if k == taus.len() {
        return visit(taus);
    }
    if k == rep_pos {
        return rec_tau(reach, rep_pos, k + 1, taus, visit);
    }
    for &a in reach {
        taus[k] = a;
        if !rec_tau(reach, rep_pos, k + 1, taus, visit) {
            return false;
        }
    }
    true
}

pub fn functors(g: &Arc<FiniteGroupoid>, h: &Arc<FiniteGroupoid>) -> Vec<GroupoidFunctor> {
    let mut out = Vec::new();
    for_each_functor(g, h, &mut |f| {
        out.push(f);
        true
    });
    out
}

/// Every natural transformation `f ⇒ g`.
pub fn natural_transformations(f: &GroupoidFunctor, g: &GroupoidFunctor) -> Vec<NatTransform> {
    let (c, d) = (&f.source, &f.target);
    let plans = plan(c);
    // per component, the admissible components at the representative
    let mut per_comp: Vec<Vec<Vec<(usize, usize)>>> = Vec::new();
    for p in &plans {
        let mut opts = Vec::new();
        for e in d.hom(f.f0[p.rep], g.f0[p.rep]) {
            let mut eta = Vec::with_capacity(p.objects.len());
            for (k, &y) in p.objects.iter().enumerate() {
                let t = p.tau[k];
                eta.push((y, d.then(d.then(d.inv(f.f1[t]), e), g.f1[t])));
            }
            let natural = p.loops.iter().all(|&l| {
                d.then(f.f1[l], e) == d.then(e, g.f1[l])
            });
            if natural {
                opts.push(eta);
            }
        }
        per_comp.push(opts);
    }
    let mut out = Vec::new();
    let mut eta = vec![0; c.num_objects()];
    fn rec(
        per_comp: &[Vec<Vec<(usize, usize)>>],
        k: usize,
        eta: &mut Vec<usize>,
        f: &GroupoidFunctor,
        g: &GroupoidFunctor,
        out: &mut Vec<NatTransform>,
    ) {
        if k == per_comp.len() {
            out.push(NatTransform {
                source: f.clone(),
                target: g.clone(),
                eta: eta.clone(),
            });
            return;
        }
        for opt in &per_comp[k] {
            for &(y, e) in opt {
                eta[y] = e;
            }
            rec(per_comp, k + 1, eta, f, g, out);
        }
    }
    rec(&per_comp, 0, &mut eta, f, g, &mut out);
    out
}

/// A uniformly chosen functor per component choice, or `None` when the
/// target is empty and the source is not.
pub fn random_functor<R: Rng>(
    g: &Arc<FiniteGroupoid>,
    h: &Arc<FiniteGroupoid>,
    rng: &mut R,
) -> Option<GroupoidFunctor> {
    let plans = plan(g);
    let mut choices = Vec::with_capacity(plans.len());
    for p in &plans {
        let options = isotropy_options(p, h);
        let (x, loops) = options.choose(rng)?.clone();
        let reach = h.out_arrows(x);
        let tau_images = p
            .objects
            .iter()
            .map(|&y| {
                if y == p.rep {
                    h.ident(x)
                } else {
                    *reach.choose(rng).expect("identity is always reachable")
                }
            })
            .collect();
        choices.push(Choice {
            rep_image: x,
            loop_images: loops,
            tau_images,
        });
    }
    Some(assemble(g, h, &plans, &choices))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functor::is_equivalence;
    use crate::group::FiniteGroup;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn arc(g: FiniteGroupoid) -> Arc<FiniteGroupoid> {
        Arc::new(g)
    }

    #[test]
    fn counts_between_groups() {
        let z4 = arc(FiniteGroupoid::group(&FiniteGroup::cyclic(4)));
        let z6 = arc(FiniteGroupoid::group(&FiniteGroup::cyclic(6)));
        assert_eq!(functors(&z4, &z6).len(), 2);
        let s3 = arc(FiniteGroupoid::group(&FiniteGroup::symmetric(3)));
        assert_eq!(functors(&s3, &s3).len(), 10);
    }

    #[test]
    fn counts_into_pair_groupoid() {
        // functors from pair(2) to pair(3): any map of objects extends uniquely
        let p2 = arc(FiniteGroupoid::pair(2));
        let p3 = arc(FiniteGroupoid::pair(3));
        let all = functors(&p2, &p3);
        assert_eq!(all.len(), 9);
        let mut f0s: Vec<Vec<usize>> = all.iter().map(|f| f.f0.clone()).collect();
        f0s.sort();
        f0s.dedup();
        assert_eq!(f0s.len(), 9);
        for f in &all {
            GroupoidFunctor::new(f.source.clone(), f.target.clone(), f.f0.clone(), f.f1.clone())
                .unwrap();
        }
    }

    #[test]
    fn empty_cases() {
        let e = arc(FiniteGroupoid::empty());
        let p = arc(FiniteGroupoid::pair(2));
        assert_eq!(functors(&e, &p).len(), 1);
        assert!(functors(&p, &e).is_empty());
    }

    #[test]
    fn transformations_between_identities() {
        let s3 = arc(FiniteGroupoid::group(&FiniteGroup::symmetric(3)));
        let id = GroupoidFunctor::identity(s3);
        // the center of S3 is trivial
        assert_eq!(natural_transformations(&id, &id).len(), 1);
        let p3 = arc(FiniteGroupoid::pair(3));
        let id = GroupoidFunctor::identity(p3);
        assert_eq!(natural_transformations(&id, &id).len(), 1);
        for n in natural_transformations(&id, &id) {
            NatTransform::new(n.source.clone(), n.target.clone(), n.eta.clone()).unwrap();
        }
    }

    #[test]
    fn random_functors_validate() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let a = arc(FiniteGroupoid::disjoint_union(
            &FiniteGroupoid::pair(2),
            &FiniteGroupoid::group(&FiniteGroup::cyclic(4)),
        ));
        let b = arc(FiniteGroupoid::product(
            &FiniteGroupoid::pair(2),
            &FiniteGroupoid::group(&FiniteGroup::cyclic(2)),
        ));
        for _ in 0..50 {
            let f = random_functor(&a, &b, &mut rng).unwrap();
            GroupoidFunctor::new(f.source.clone(), f.target.clone(), f.f0.clone(), f.f1.clone())
                .unwrap();
            let _ = is_equivalence(&f);
        }
    }
}
