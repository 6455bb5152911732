//! Deterministic generators for test and benchmark corpora: small groups
//! and their quotients, extensions, groupoid catalogues, random tables with
//! single-entry mutations, functor pairs, and exact sequences of
//! representations.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::category::RawCategory;
use crate::extension::{pullback_extension, GroupoidExtension};
use crate::functor::GroupoidFunctor;
use crate::group::FiniteGroup;
use crate::groupoid::FiniteGroupoid;
use crate::linrep::{int, BundleSES, GroupoidVectorBundle, QMatrix};
use crate::search::random_functor;

pub const DEFAULT_SEED: u64 = 20_240_917;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn named(name: &str, g: FiniteGroup) -> (String, FiniteGroup) {
    (name.to_string(), g)
}

/// One group per isomorphism class for orders up to 8.
pub fn groups_up_to_8() -> Vec<(String, FiniteGroup)> {
    let z = FiniteGroup::cyclic;
    let x = FiniteGroup::direct_product;
    let mut out: Vec<_> = (1..=8).map(|n| named(&format!("Z{n}"), z(n))).collect();
    out.push(named("Z2xZ2", x(&z(2), &z(2))));
    out.push(named("S3", FiniteGroup::symmetric(3)));
    out.push(named("Z2xZ4", x(&z(2), &z(4))));
    out.push(named("Z2^3", x(&x(&z(2), &z(2)), &z(2))));
    out.push(named("D4", FiniteGroup::dihedral(4)));
    out.push(named("Q8", FiniteGroup::quaternion()));
    out.sort_by_key(|(_, g)| g.order());
    out
}

/// Representative groups of order at most 16: all classes up to order 8
/// and a spread of the larger ones.
pub fn small_groups() -> Vec<(String, FiniteGroup)> {
    let z = FiniteGroup::cyclic;
    let x = FiniteGroup::direct_product;
    let mut out = groups_up_to_8();
    for n in 9..=16 {
        out.push(named(&format!("Z{n}"), z(n)));
    }
    out.push(named("Z3xZ3", x(&z(3), &z(3))));
    out.push(named("D5", FiniteGroup::dihedral(5)));
    out.push(named("A4", FiniteGroup::alternating(4)));
    out.push(named("D6", FiniteGroup::dihedral(6)));
    out.push(named("Dic3", FiniteGroup::dicyclic(3)));
    out.push(named("Z2xZ6", x(&z(2), &z(6))));
    out.push(named("D7", FiniteGroup::dihedral(7)));
    out.push(named("D8", FiniteGroup::dihedral(8)));
    out.push(named("Q16", FiniteGroup::dicyclic(4)));
    out.push(named("Z4xZ4", x(&z(4), &z(4))));
    out.push(named("Z2xZ8", x(&z(2), &z(8))));
    out.push(named("Z2xD4", x(&z(2), &FiniteGroup::dihedral(4))));
    out.push(named("Z2xQ8", x(&z(2), &FiniteGroup::quaternion())));
    out.push(named("Z2^4", x(&x(&z(2), &z(2)), &x(&z(2), &z(2)))));
    out.sort_by_key(|(_, g)| g.order());
    out
}

pub struct Surjection {
    pub name: String,
    pub source: FiniteGroup,
    pub target: FiniteGroup,
    pub map: Vec<usize>,
}

/// Every quotient map `G → G/N` for the groups of [`small_groups`].
pub fn group_surjections() -> Vec<Surjection> {
    let mut out = Vec::new();
    for (name, g) in small_groups() {
        for (k, n) in g.normal_subgroups().into_iter().enumerate() {
            let (target, map) = g.quotient(&n);
            out.push(Surjection {
                name: format!("{name}/N{k}(|N|={})", n.len()),
                source: g.clone(),
                target,
                map,
            });
        }
    }
    out
}

/// Right action on right cosets `Kx`, as a table `act[coset][g]`.
pub fn coset_action(g: &FiniteGroup, subgroup: &[usize]) -> Vec<Vec<usize>> {
    let mut coset_of = vec![usize::MAX; g.order()];
    let mut reps = Vec::new();
    for x in 0..g.order() {
        if coset_of[x] != usize::MAX {
            continue;
        }
        for &k in subgroup {
            coset_of[g.mul(k, x)] = reps.len();
        }
        reps.push(x);
    }
    reps.iter()
        .map(|&x| (0..g.order()).map(|h| coset_of[g.mul(x, h)]).collect())
        .collect()
}

/// Right actions of `g` on at most `max_points` points: coset actions of
/// small index and the trivial action on two points.
pub fn small_actions(g: &FiniteGroup, max_points: usize) -> Vec<Vec<Vec<usize>>> {
    let mut out: Vec<Vec<Vec<usize>>> = Vec::new();
    for k in g.subgroups() {
        let index = g.order() / k.len();
        if index <= max_points {
            let act = coset_action(g, &k);
            if !out.contains(&act) {
                out.push(act);
            }
        }
    }
    if max_points >= 2 {
        out.push(vec![vec![0; g.order()], vec![1; g.order()]]);
    }
    out
}

fn action_extension(s: &Surjection, act: &[Vec<usize>]) -> GroupoidExtension {
    let pulled: Vec<Vec<usize>> = act
        .iter()
        .map(|row| (0..s.source.order()).map(|g| row[s.map[g]]).collect())
        .collect();
    let big = Arc::new(FiniteGroupoid::action(&s.source, &pulled).expect("pulled action"));
    let small = Arc::new(FiniteGroupoid::action(&s.target, act).expect("coset action"));
    let (m, n) = (s.source.order(), s.target.order());
    let f1 = (0..big.num_morphisms())
        .map(|a| (a / m) * n + s.map[a % m])
        .collect();
    let f0 = (0..big.num_objects()).collect();
    GroupoidExtension::from_functor(GroupoidFunctor::new(big, small, f0, f1).expect("functor"))
        .expect("extension")
}

pub struct ExtensionCase {
    pub name: String,
    pub extension: GroupoidExtension,
}

/// Group quotients as one-object extensions, each with one seeded action
/// groupoid extension on at most three points, plus seeded pullbacks of
/// some of those along surjections from larger object sets.
pub fn extension_corpus(seed: u64) -> Vec<ExtensionCase> {
    let mut rng = rng(seed);
    let mut out = Vec::new();
    for s in group_surjections() {
        let one = action_extension(&s, &[vec![0; s.target.order()]]);
        out.push(ExtensionCase {
            name: s.name.clone(),
            extension: one,
        });
        let actions: Vec<_> = small_actions(&s.target, 3)
            .into_iter()
            .filter(|a| a.len() > 1)
            .collect();
        if let Some(act) = actions.choose(&mut rng) {
            let ext = action_extension(&s, act);
            if s.source.order() <= 8 && rng.gen_bool(0.5) {
                let points = ext.quotient().num_objects();
                let extra = rng.gen_range(0..2);
                let mut f: Vec<usize> = (0..points).collect();
                for _ in 0..extra {
                    f.push(rng.gen_range(0..points));
                }
                f.shuffle(&mut rng);
                let labels = (0..f.len()).map(|i| format!("n{i}")).collect();
                let (pulled, _) = pullback_extension(&ext, labels, &f).expect("surjective map");
                out.push(ExtensionCase {
                    name: format!("{} pulled back along {f:?}", s.name),
                    extension: pulled,
                });
            }
            out.push(ExtensionCase {
                name: format!("{} on {} points", s.name, act.len()),
                extension: ext,
            });
        }
    }
    out
}

/// Functors that miss arrows: proper subgroup inclusions, and constant
/// maps onto a point of a groupoid with nontrivial isotropy.
pub fn non_full_functors(seed: u64) -> Vec<(String, GroupoidFunctor)> {
    let mut rng = rng(seed);
    let mut out = Vec::new();
    for (name, g) in small_groups() {
        let big = Arc::new(FiniteGroupoid::group(&g));
        let subs: Vec<Vec<usize>> = g.subgroups().into_iter().filter(|k| k.len() < g.order()).collect();
        let Some(k) = subs.choose(&mut rng) else { continue };
        let (sub, embed) = g.subgroup(k);
        let small = Arc::new(FiniteGroupoid::group(&sub));
        let f = GroupoidFunctor::new(small, big.clone(), vec![0], embed).expect("inclusion");
        out.push((format!("subgroup of order {} in {name}", k.len()), f));
        let points = rng.gen_range(1..=3);
        let discrete = Arc::new(FiniteGroupoid::discrete(points));
        let f = GroupoidFunctor::new(discrete, big, vec![0; points], vec![g.identity(); points])
            .expect("constant");
        out.push((format!("{points} points into {name}"), f));
    }
    out
}

/// Transitive groupoids `pair(n) × G`.
pub fn transitive(n: usize, g: &FiniteGroup) -> FiniteGroupoid {
    FiniteGroupoid::product(&FiniteGroupoid::pair(n), &FiniteGroupoid::group(g))
}

/// Multisets of `(objects, group index)` pieces, each piece of size
/// `n²·|G|`, whose total size satisfies `admit`.
fn piece_multisets(
    groups: &[(String, FiniteGroup)],
    max_objects: usize,
    max_pieces: usize,
    admit: &dyn Fn(usize, usize) -> bool,
) -> Vec<Vec<(usize, usize)>> {
    let mut kinds = Vec::new();
    for n in 1..=max_objects {
        for gi in 0..groups.len() {
            kinds.push((n, gi));
        }
    }
    let mut out = Vec::new();
    fn rec(
        kinds: &[(usize, usize)],
        groups: &[(String, FiniteGroup)],
        start: usize,
        objects: usize,
        morphisms: usize,
        max_pieces: usize,
        cur: &mut Vec<(usize, usize)>,
        admit: &dyn Fn(usize, usize) -> bool,
        out: &mut Vec<Vec<(usize, usize)>>,
    ) {
        out.push(cur.clone());
        if cur.len() == max_pieces {
            return;
        }
        for k in start..kinds.len() {
            let (n, gi) = kinds[k];
            let (o, m) = (objects + n, morphisms + n * n * groups[gi].1.order());
            if admit(o, m) {
                cur.push(kinds[k]);
                rec(kinds, groups, k, o, m, max_pieces, cur, admit, out);
                cur.pop();
            }
        }
    }
    rec(&kinds, groups, 0, 0, 0, max_pieces, &mut Vec::new(), admit, &mut out);
    out
}

fn assemble_pieces(groups: &[(String, FiniteGroup)], pieces: &[(usize, usize)]) -> (String, FiniteGroupoid) {
    let parts: Vec<FiniteGroupoid> = pieces.iter().map(|&(n, gi)| transitive(n, &groups[gi].1)).collect();
    let name: Vec<String> = pieces
        .iter()
        .map(|&(n, gi)| format!("pair({n})x{}", groups[gi].0))
        .collect();
    let name = if name.is_empty() { "empty".to_string() } else { name.join(" + ") };
    (name, FiniteGroupoid::disjoint_union_all(&parts))
}

/// Every groupoid with at most `max` morphisms, up to isomorphism.
pub fn groupoids_with_at_most(max: usize) -> Vec<(String, FiniteGroupoid)> {
    let groups: Vec<_> = groups_up_to_8().into_iter().filter(|(_, g)| g.order() <= max).collect();
    piece_multisets(&groups, max, max, &|_, m| m <= max)
        .iter()
        .map(|p| assemble_pieces(&groups, p))
        .collect()
}

/// Every groupoid with at most `max_objects` objects whose isotropy groups
/// all come from `groups`, up to isomorphism.
pub fn groupoids_with_isotropy(
    groups: &[(String, FiniteGroup)],
    max_objects: usize,
) -> Vec<(String, FiniteGroupoid)> {
    piece_multisets(groups, max_objects, max_objects, &|o, _| o <= max_objects)
        .iter()
        .map(|p| assemble_pieces(groups, p))
        .collect()
}

/// A random groupoid built from the standard constructors.
pub fn random_groupoid<R: Rng>(rng: &mut R) -> FiniteGroupoid {
    let groups = groups_up_to_8();
    let pick_group = |rng: &mut R| groups[rng.gen_range(0..groups.len())].1.clone();
    let base = |rng: &mut R| -> FiniteGroupoid {
        match rng.gen_range(0..4) {
            0 => FiniteGroupoid::group(&pick_group(rng)),
            1 => FiniteGroupoid::pair(rng.gen_range(1..=3)),
            2 => FiniteGroupoid::discrete(rng.gen_range(1..=3)),
            _ => {
                let g = pick_group(rng);
                let actions = small_actions(&g, 3);
                let act = actions.choose(rng).expect("trivial coset action exists");
                FiniteGroupoid::action(&g, act).expect("coset action")
            }
        }
    };
    let a = base(rng);
    match rng.gen_range(0..3) {
        0 => a,
        1 => {
            let b = base(rng);
            if a.num_morphisms() * b.num_morphisms() <= 64 {
                FiniteGroupoid::product(&a, &b)
            } else {
                a
            }
        }
        _ => FiniteGroupoid::disjoint_union(&a, &base(rng)),
    }
}

/// One-entry change of a valid table, with a short description.
pub fn mutate<R: Rng>(raw: &RawCategory, inv: &[usize], rng: &mut R) -> (RawCategory, Vec<usize>, String) {
    let mut raw = raw.clone();
    let mut inv = inv.to_vec();
    let m = raw.morphisms.len();
    let n = raw.objects.len();
    let other = |rng: &mut R, x: usize, bound: usize| {
        if bound <= 1 {
            x
        } else {
            (x + rng.gen_range(1..bound)) % bound
        }
    };
    let what = loop {
        match rng.gen_range(0..6) {
            0 if !raw.compose.is_empty() => {
                let k = rng.gen_range(0..raw.compose.len());
                raw.compose[k][2] = other(rng, raw.compose[k][2], m);
                break format!("changed composite entry {k}");
            }
            1 if !raw.compose.is_empty() => {
                let k = rng.gen_range(0..raw.compose.len());
                raw.compose.remove(k);
                break format!("removed composite entry {k}");
            }
            2 if n > 1 => {
                let f = rng.gen_range(0..m);
                raw.src[f] = other(rng, raw.src[f], n);
                break format!("changed source of {f}");
            }
            3 if n > 1 => {
                let f = rng.gen_range(0..m);
                raw.tgt[f] = other(rng, raw.tgt[f], n);
                break format!("changed target of {f}");
            }
            4 if m > n => {
                let x = rng.gen_range(0..n);
                raw.ident[x] = other(rng, raw.ident[x], m);
                break format!("changed identity of {x}");
            }
            5 if m > 1 => {
                let f = rng.gen_range(0..m);
                inv[f] = other(rng, inv[f], m);
                break format!("changed inverse of {f}");
            }
            _ if m == 0 => break "nothing to change".to_string(),
            _ => continue,
        }
    };
    (raw, inv, what)
}

/// Seeded tables: the first half valid, the second half mutated.
pub fn table_corpus(seed: u64, count: usize) -> Vec<(RawCategory, Vec<usize>, String)> {
    let mut rng = rng(seed);
    let mut out = Vec::with_capacity(count);
    for k in 0..count {
        let mut g = random_groupoid(&mut rng);
        while g.num_morphisms() < 2 {
            g = random_groupoid(&mut rng);
        }
        let raw = g.to_raw();
        let inv = g.inverse_table().to_vec();
        if k < count / 2 {
            out.push((raw, inv, "valid".to_string()));
        } else {
            out.push(mutate(&raw, &inv, &mut rng));
        }
    }
    out
}

/// `⟨φ⟩` has one element per pair `(x, h)` with `h` leaving `φ(x)`.
pub fn functor_carrier(f: &GroupoidFunctor) -> usize {
    f.f0.iter().map(|&y| f.target.out_arrows(y).len()).sum()
}

/// Composable functor pairs `ψ: A → B`, `φ: B → C` between random
/// groupoids, keeping carriers of both bibundles and of the composite
/// within `max_carrier`.
pub fn composable_functor_pairs(
    seed: u64,
    count: usize,
    max_carrier: usize,
) -> Vec<(GroupoidFunctor, GroupoidFunctor)> {
    let mut rng = rng(seed);
    let small = || -> Vec<FiniteGroupoid> {
        let mut v: Vec<FiniteGroupoid> = groupoids_with_at_most(6)
            .into_iter()
            .map(|(_, g)| g)
            .filter(|g| g.num_objects() > 0)
            .collect();
        v.push(FiniteGroupoid::action(&FiniteGroup::cyclic(2), &coset_action(&FiniteGroup::cyclic(2), &[0])).unwrap());
        v
    };
    let pool: Vec<Arc<FiniteGroupoid>> = small().into_iter().map(Arc::new).collect();
    let mut out = Vec::with_capacity(count);
    let mut attempts = 0;
    while out.len() < count {
        attempts += 1;
        assert!(attempts < 100_000, "functor pair generation is stuck");
        let a = pool.choose(&mut rng).unwrap();
        let b = pool.choose(&mut rng).unwrap();
        let c = pool.choose(&mut rng).unwrap();
        let (Some(psi), Some(phi)) = (random_functor(a, b, &mut rng), random_functor(b, c, &mut rng)) else {
            continue;
        };
        let composite = crate::functor::compose_functors(&psi, &phi).unwrap();
        if functor_carrier(&psi) <= max_carrier
            && functor_carrier(&phi) <= max_carrier
            && functor_carrier(&composite) <= max_carrier
        {
            out.push((psi, phi));
        }
    }
    out
}

/// Permutation representation on right cosets of `subgroup`, one matrix
/// per group element, with `ρ(gh) = ρ(h)ρ(g)` as required by the
/// composition order of the group groupoid.
pub fn coset_representation(g: &FiniteGroup, subgroup: &[usize]) -> Vec<QMatrix> {
    let act = coset_action(g, subgroup);
    let d = act.len();
    (0..g.order())
        .map(|x| {
            let mut m = QMatrix::zeros(d, d);
            for (c, row) in act.iter().enumerate() {
                m[(row[x], c)] = int(1);
            }
            m
        })
        .collect()
}

/// Bundle on `pair(n) × G` from a representation of `G`.
fn spread(g: &FiniteGroup, n: usize, rep: &[QMatrix], over: Arc<FiniteGroupoid>) -> GroupoidVectorBundle {
    let dim = rep[0].rows();
    let mats = (0..over.num_morphisms()).map(|a| rep[a % g.order()].clone()).collect();
    GroupoidVectorBundle::validate(over, vec![dim; n], mats).expect("representation")
}

/// Concatenates per-component sequences over a disjoint union.
fn glue_sequences(over: Arc<FiniteGroupoid>, parts: &[BundleSES]) -> BundleSES {
    let cat = |pick: &dyn Fn(&BundleSES) -> &GroupoidVectorBundle| {
        let dims = parts.iter().flat_map(|s| pick(s).dims().to_vec()).collect();
        let mats = parts.iter().flat_map(|s| pick(s).mats().to_vec()).collect();
        GroupoidVectorBundle::validate(over.clone(), dims, mats).expect("glued bundle")
    };
    let (a, b, c) = (cat(&|s| &s.a), cat(&|s| &s.b), cat(&|s| &s.c));
    let j = parts.iter().flat_map(|s| s.j.clone()).collect();
    let q = parts.iter().flat_map(|s| s.q.clone()).collect();
    BundleSES::validate(a, b, c, j, q).expect("glued sequence")
}

fn random_invertible<R: Rng>(rng: &mut R, n: usize) -> QMatrix {
    loop {
        let data = (0..n * n).map(|_| int(rng.gen_range(-2..=2))).collect();
        let m = QMatrix::with_shape(n, n, data);
        if m.inverse().is_some() {
            return m;
        }
    }
}

/// Exact sequences of representations over groupoids with at most two
/// components, isotropy among `1, Z2, Z3, S3`: coset permutation modules
/// over their invariant line, rebased direct sums of small modules, and
/// tensors of these with small modules.
pub fn ses_corpus(seed: u64) -> Vec<(String, BundleSES)> {
    let mut rng = rng(seed);
    let groups = [
        named("1", FiniteGroup::trivial()),
        named("Z2", FiniteGroup::cyclic(2)),
        named("Z3", FiniteGroup::cyclic(3)),
        named("S3", FiniteGroup::symmetric(3)),
    ];
    // per group: sequences over the one-object groupoid, described by reps
    let group_level = |g: &FiniteGroup, rng: &mut ChaCha8Rng| -> Vec<(String, Vec<QMatrix>, Vec<QMatrix>, Vec<QMatrix>, QMatrix, QMatrix)> {
        let one = Arc::new(FiniteGroupoid::group(g));
        let line = GroupoidVectorBundle::trivial(one.clone(), 1);
        let mut basic: Vec<Vec<QMatrix>> = vec![vec![QMatrix::identity(1); g.order()]];
        let mut natural = Vec::new();
        for k in g.subgroups() {
            let index = g.order() / k.len();
            if index < 2 {
                continue;
            }
            let perm = coset_representation(g, &k);
            let b = GroupoidVectorBundle::validate(one.clone(), vec![index], perm).unwrap();
            let ones = QMatrix::with_shape(index, 1, vec![int(1); index]);
            let ses = BundleSES::quotient(line.clone(), b, vec![ones]).unwrap();
            if ses.c.dim(0) <= 2 && !basic.iter().any(|r| r == ses.c.mats()) {
                basic.push(ses.c.mats().to_vec());
            }
            natural.push(ses);
        }
        let mut out = Vec::new();
        let describe = |s: &BundleSES| (s.a.mats().to_vec(), s.b.mats().to_vec(), s.c.mats().to_vec(), s.j[0].clone(), s.q[0].clone());
        for (k, s) in natural.iter().enumerate() {
            if s.b.dim(0) <= 6 {
                let (a, b, c, j, q) = describe(s);
                out.push((format!("coset module {k}"), a, b, c, j, q));
            }
            for (r, rep) in basic.iter().enumerate() {
                if s.b.dim(0) * rep[0].rows() <= 6 && r > 0 {
                    let rb = GroupoidVectorBundle::validate(one.clone(), vec![rep[0].rows()], rep.clone()).unwrap();
                    let (a, b, c, j, q) = describe(&s.tensor(&rb));
                    out.push((format!("coset module {k} tensor basic {r}"), a, b, c, j, q));
                }
            }
        }
        for (x, ra) in basic.iter().enumerate() {
            for (y, rc) in basic.iter().enumerate() {
                let a = GroupoidVectorBundle::validate(one.clone(), vec![ra[0].rows()], ra.clone()).unwrap();
                let c = GroupoidVectorBundle::validate(one.clone(), vec![rc[0].rows()], rc.clone()).unwrap();
                let sum = BundleSES::direct_sum(a, c);
                let p = random_invertible(rng, sum.b.dim(0));
                let (a, b, c, j, q) = describe(&sum.change_middle_basis(&[p]));
                out.push((format!("rebased sum {x}+{y}"), a, b, c, j, q));
            }
        }
        out
    };
    let per_group: Vec<Vec<_>> = groups.iter().map(|(_, g)| group_level(g, &mut rng)).collect();
    // the sequence `case` of group `gi`, spread over `pair(n) × G`
    let piece = |gi: usize, case: usize, n: usize| -> (String, BundleSES) {
        let g = &groups[gi].1;
        let (name, a, b, c, j, q) = &per_group[gi][case];
        let over = Arc::new(transitive(n, g));
        let ses = BundleSES::validate(
            spread(g, n, a, over.clone()),
            spread(g, n, b, over.clone()),
            spread(g, n, c, over.clone()),
            vec![j.clone(); n],
            vec![q.clone(); n],
        )
        .expect("spread sequence");
        (format!("{name} over pair({n})x{}", groups[gi].0), ses)
    };
    let mut out = Vec::new();
    for gi in 0..groups.len() {
        for case in 0..per_group[gi].len() {
            let (label, first) = piece(gi, case, rng.gen_range(1..=2));
            if rng.gen_bool(0.5) {
                let gj = rng.gen_range(0..groups.len());
                let other = rng.gen_range(0..per_group[gj].len());
                let (label2, second) = piece(gj, other, rng.gen_range(1..=2));
                let whole = Arc::new(FiniteGroupoid::disjoint_union(
                    first.b.groupoid(),
                    second.b.groupoid(),
                ));
                out.push((format!("{label} + {label2}"), glue_sequences(whole, &[first.clone(), second])));
            }
            out.push((label, first));
        }
    }
    out
}
