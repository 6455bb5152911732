mod common;

use std::sync::{Arc, Mutex, MutexGuard};
use std::time::{Duration, Instant};

use rand::Rng;

use gpd_core::bibundle::{bibundle_isomorphism, bibundle_of_functor, compose_bibundles};
use gpd_core::corpus::{self, DEFAULT_SEED};
use gpd_core::descent::{partitions, check_stack_condition, BgPresheaf, Covering};
use gpd_core::extension::{
    check_gerbe_conditions, fiber_product_groupoid, induced_extension, induced_witness,
    verify_extension_morita,
};
use gpd_core::linrep::{find_equivariant_splitting, is_equivariant_splitting, SplittingSystem};
use gpd_core::morita::{is_morita_morphism, morita_equivalent, transitive_reduction};
use gpd_core::search::{
    for_each_functor, for_each_functor_where, natural_transformations, random_functor,
};
use gpd_core::{
    compose_functors, hcomp, vcomp, FiniteGroup, FiniteGroupoid, GroupoidFunctor, NatTransform,
};

use common::{averaging_splitting, brute_equivalent, interchange_sides, scan_axioms};

/// Prints the verdict line and fails the test on a miss or a timeout.
/// Criteria run one at a time so their timings do not overlap.
static SERIAL: Mutex<()> = Mutex::new(());

fn serial() -> MutexGuard<'static, ()> {
    SERIAL.lock().unwrap_or_else(|e| e.into_inner())
}

fn verdict(id: u32, what: &str, limit: Duration, started: Instant, failures: &[String], detail: &str) {
    let elapsed = started.elapsed();
    let pass = failures.is_empty() && elapsed < limit;
    println!(
        "[{id:>2}] {} {what}: {detail}; {} failure(s); {:.2?} (limit {:?})",
        if pass { "PASS" } else { "FAIL" },
        failures.len(),
        elapsed,
        limit,
    );
    for f in failures.iter().take(5) {
        println!("       {f}");
    }
    assert!(failures.is_empty(), "{what}: {} failure(s), first: {}", failures.len(), failures[0]);
    assert!(elapsed < limit, "{what}: took {elapsed:?}, limit {limit:?}");
}

#[test]
fn axiom_validation_agrees_with_scanner() {
    let _serial = serial();
    let started = Instant::now();
    let tables = corpus::table_corpus(DEFAULT_SEED, 200);
    let mut failures = Vec::new();
    let mut rejected = 0;
    for (k, (raw, inv, what)) in tables.iter().enumerate() {
        let ours = FiniteGroupoid::from_raw(raw.clone(), inv.clone()).is_ok();
        let oracle = scan_axioms(raw, inv);
        if !ours {
            rejected += 1;
        }
        if ours != oracle {
            failures.push(format!("table {k} ({what}): validator {ours}, scanner {oracle}"));
        }
    }
    verdict(
        1,
        "axiom validation vs scanner",
        Duration::from_secs(5),
        started,
        &failures,
        &format!("{} tables, {rejected} rejected", tables.len()),
    );
}

#[test]
fn extensions_satisfy_gerbe_conditions() {
    let _serial = serial();
    let started = Instant::now();
    let cases = corpus::extension_corpus(DEFAULT_SEED);
    let non_full = corpus::non_full_functors(DEFAULT_SEED);
    let mut failures = Vec::new();
    for case in &cases {
        if !check_gerbe_conditions(case.extension.functor()).gerbe {
            failures.push(format!("{} is not a gerbe", case.name));
        }
    }
    for (name, f) in &non_full {
        if check_gerbe_conditions(f).arrows_lift {
            failures.push(format!("{name}: arrows reported to lift"));
        }
    }
    if cases.len() < 50 {
        failures.push(format!("only {} extensions", cases.len()));
    }
    if non_full.len() < 50 {
        failures.push(format!("only {} non-full functors", non_full.len()));
    }
    verdict(
        2,
        "extensions are gerbes, non-full functors are not",
        Duration::from_secs(10),
        started,
        &failures,
        &format!("{} extensions, {} non-full functors", cases.len(), non_full.len()),
    );
}

#[test]
fn fiber_products_are_transitive() {
    let _serial = serial();
    let started = Instant::now();
    let cases = corpus::extension_corpus(DEFAULT_SEED);
    let failures: Vec<String> = cases
        .iter()
        .filter(|c| !fiber_product_groupoid(&c.extension).groupoid.is_transitive())
        .map(|c| {
            let base = if c.extension.quotient().is_transitive() { "transitive" } else { "non-transitive" };
            format!("{}: fiber product not transitive ({base} quotient)", c.name)
        })
        .collect();
    let over_transitive = failures.iter().filter(|f| f.ends_with("(transitive quotient)")).count();
    verdict(
        3,
        "fiber product over the quotient is transitive",
        Duration::from_secs(5),
        started,
        &failures,
        &format!("{} extensions, {over_transitive} failure(s) over a transitive quotient", cases.len()),
    );
}

#[test]
fn transitive_groupoids_reduce_to_isotropy() {
    let _serial = serial();
    let started = Instant::now();
    let mut failures = Vec::new();
    let mut checked = 0;
    for (name, group) in corpus::groups_up_to_8() {
        let iso = Arc::new(FiniteGroupoid::group(&group));
        for n in 1..=5 {
            let g = Arc::new(corpus::transitive(n, &group));
            checked += 1;
            let label = format!("pair({n}) x {name}");
            match morita_equivalent(&g, &iso) {
                Ok(d) if d.equivalent => {
                    let eq = d.equivalence.as_ref().map(|w| w.verify());
                    let span = d.span.as_ref().map(|w| w.verify());
                    if !matches!(eq, Some(Ok(()))) || !matches!(span, Some(Ok(()))) {
                        failures.push(format!("{label}: witness does not verify"));
                    }
                }
                Ok(_) => failures.push(format!("{label}: reported inequivalent")),
                Err(e) => failures.push(format!("{label}: {e}")),
            }
            match transitive_reduction(&g, n - 1) {
                Ok(r) if r.span.verify().is_ok() => {}
                Ok(_) => failures.push(format!("{label}: reduction span does not verify")),
                Err(e) => failures.push(format!("{label}: {e}")),
            }
        }
    }
    verdict(
        4,
        "transitive groupoid is Morita equivalent to its isotropy",
        Duration::from_secs(10),
        started,
        &failures,
        &format!("{checked} groupoids"),
    );
}

#[test]
fn morita_decision_agrees_with_brute_force() {
    let _serial = serial();
    let started = Instant::now();
    let groups = vec![
        ("Z1".to_string(), FiniteGroup::trivial()),
        ("Z2".to_string(), FiniteGroup::cyclic(2)),
        ("Z3".to_string(), FiniteGroup::cyclic(3)),
        ("S3".to_string(), FiniteGroup::symmetric(3)),
    ];
    let pool: Vec<(String, Arc<FiniteGroupoid>)> = corpus::groupoids_with_isotropy(&groups, 3)
        .into_iter()
        .map(|(n, g)| (n, Arc::new(g)))
        .collect();
    let mut failures = Vec::new();
    let mut equivalent = 0;
    for (na, a) in &pool {
        for (nb, b) in &pool {
            let ours = match morita_equivalent(a, b) {
                Ok(d) => d.equivalent,
                Err(e) => {
                    failures.push(format!("{na} vs {nb}: {e}"));
                    continue;
                }
            };
            let oracle = brute_equivalent(a, b);
            if ours {
                equivalent += 1;
            }
            if ours != oracle {
                failures.push(format!("{na} vs {nb}: decision {ours}, brute force {oracle}"));
            }
        }
    }
    verdict(
        5,
        "Morita decision vs exhaustive equivalence search",
        Duration::from_secs(60),
        started,
        &failures,
        &format!("{} groupoids, {} pairs, {equivalent} equivalent", pool.len(), pool.len() * pool.len()),
    );
}

#[test]
fn bibundles_compose_functorially_and_detect_morita_morphisms() {
    let _serial = serial();
    let started = Instant::now();
    let max_carrier = 12;
    let mut failures = Vec::new();
    let pairs = corpus::composable_functor_pairs(DEFAULT_SEED, 100, max_carrier);
    for (k, (psi, phi)) in pairs.iter().enumerate() {
        let composite = compose_functors(psi, phi).expect("composable");
        let glued = compose_bibundles(&bibundle_of_functor(psi), &bibundle_of_functor(phi))
            .expect("middle groupoids agree");
        if bibundle_isomorphism(&glued, &bibundle_of_functor(&composite)).is_none() {
            failures.push(format!("pair {k}: <phi> o <psi> is not isomorphic to <phi o psi>"));
        }
    }
    let pool: Vec<Arc<FiniteGroupoid>> = corpus::groupoids_with_at_most(max_carrier)
        .into_iter()
        .map(|(_, g)| g)
        .filter(|g| g.num_objects() > 0 && g.num_objects() <= 3)
        .map(Arc::new)
        .collect();
    let (mut functors, mut morita, mut principal) = (0usize, 0usize, 0usize);
    for g in &pool {
        for h in &pool {
            let min_out = (0..h.num_objects()).map(|y| h.out_arrows(y).len()).min().unwrap();
            if g.num_objects() * min_out > max_carrier {
                continue;
            }
            let admit = |f0: &[usize]| {
                let placed = f0.iter().filter(|&&y| y != usize::MAX);
                placed.map(|&y| h.out_arrows(y).len()).sum::<usize>() <= max_carrier
            };
            for_each_functor_where(g, h, &admit, &mut |f| {
                functors += 1;
                let is_morita = is_morita_morphism(&f).is_ok();
                let is_principal = bibundle_of_functor(&f).is_left_principal();
                morita += is_morita as usize;
                principal += is_principal as usize;
                if is_morita != is_principal {
                    failures.push(format!(
                        "functor {:?}/{:?} from {} objects to {} objects: Morita morphism {is_morita}, left principal {is_principal}",
                        f.f0,
                        f.f1,
                        g.num_objects(),
                        h.num_objects()
                    ));
                }
                true
            });
        }
    }
    verdict(
        6,
        "bibundle functoriality and Morita <=> left principal",
        Duration::from_secs(30),
        started,
        &failures,
        &format!(
            "{} composable pairs; {functors} functors, {morita} Morita morphisms, {principal} left principal",
            pairs.len()
        ),
    );
}

#[test]
fn bg_satisfies_stack_condition_on_partitions() {
    let _serial = serial();
    let started = Instant::now();
    let mut failures = Vec::new();
    let mut checks = 0;
    let groupoids = corpus::groupoids_with_at_most(6);
    for (name, g) in &groupoids {
        let presheaf = BgPresheaf::new(Arc::new(g.clone()), 4);
        for n in 0..=4 {
            for parts in partitions(n, 3) {
                checks += 1;
                let cover = Covering::by_parts(n, &parts);
                match check_stack_condition(&presheaf, &cover) {
                    Ok(r) if r.stack => {}
                    Ok(r) => failures.push(format!("{name} over {parts:?}: {r:?}")),
                    Err(e) => failures.push(format!("{name} over {parts:?}: {e}")),
                }
            }
        }
    }
    verdict(
        7,
        "stack condition for BG over partition covers",
        Duration::from_secs(60),
        started,
        &failures,
        &format!("{} groupoids, {checks} coverings checked", groupoids.len()),
    );
}

#[test]
fn induced_extension_round_trips() {
    let _serial = serial();
    let started = Instant::now();
    let cases = corpus::extension_corpus(DEFAULT_SEED);
    let mut failures = Vec::new();
    for case in &cases {
        match induced_extension(case.extension.functor()) {
            Ok(induced) => {
                let w = induced_witness(&case.extension, &induced);
                let problems = verify_extension_morita(&case.extension, &induced.extension, &w);
                if !problems.is_empty() {
                    failures.push(format!("{}: {:?}", case.name, problems[0]));
                }
            }
            Err(e) => failures.push(format!("{}: {e}", case.name)),
        }
    }
    verdict(
        8,
        "induced extension is Morita equivalent to the original",
        Duration::from_secs(10),
        started,
        &failures,
        &format!("{} extensions", cases.len()),
    );
}

#[test]
fn equivariant_splittings_exist_and_agree_with_averaging() {
    let _serial = serial();
    let started = Instant::now();
    let cases = corpus::ses_corpus(DEFAULT_SEED);
    let mut failures = Vec::new();
    for (name, ses) in &cases {
        let system = SplittingSystem::new(ses);
        match find_equivariant_splitting(ses) {
            Some(r) if is_equivariant_splitting(ses, &r) && system.is_satisfied_by(&r) => {}
            Some(_) => failures.push(format!("{name}: solver output is not a splitting")),
            None => failures.push(format!("{name}: no splitting found")),
        }
        let avg = averaging_splitting(ses);
        if !system.is_satisfied_by(&avg) || !is_equivariant_splitting(ses, &avg) {
            failures.push(format!("{name}: averaged splitting violates the system"));
        }
    }
    verdict(
        9,
        "equivariant splitting solver vs averaging",
        Duration::from_secs(5),
        started,
        &failures,
        &format!("{} sequences", cases.len()),
    );
}

/// Checks one instance of the interchange law against both the library
/// composites and the oracle formulas.
fn interchange_failure(
    alpha: &NatTransform,
    alpha2: &NatTransform,
    beta: &NatTransform,
    beta2: &NatTransform,
) -> Option<String> {
    let lhs = hcomp(&vcomp(alpha, alpha2).ok()?, &vcomp(beta, beta2).ok()?);
    let rhs = vcomp(&hcomp(alpha, beta).ok()?, &hcomp(alpha2, beta2).ok()?);
    let (olhs, orhs) = interchange_sides(alpha, alpha2, beta, beta2);
    match (lhs, rhs) {
        (Ok(l), Ok(r)) if l == r && l.eta == olhs && olhs == orhs => None,
        (l, r) => Some(format!("lhs {l:?} rhs {r:?} oracle {olhs:?} / {orhs:?}")),
    }
}

/// Chains `F ⇒ F' ⇒ F''` of 2-cells among the given endofunctors.
fn chains(endo: &[GroupoidFunctor]) -> Vec<(NatTransform, NatTransform)> {
    let mut out = Vec::new();
    for a in endo {
        for b in endo {
            let first = natural_transformations(a, b);
            if first.is_empty() {
                continue;
            }
            for c in endo {
                let second = natural_transformations(b, c);
                for x in &first {
                    for y in &second {
                        out.push((x.clone(), y.clone()));
                    }
                }
            }
        }
    }
    out
}

/// Conjugates `f` by arbitrary arrows out of its images, giving a random
/// 2-cell `f ⇒ f'`.
fn random_cell<R: Rng>(f: &GroupoidFunctor, rng: &mut R) -> NatTransform {
    let (c, d) = (&f.source, &f.target);
    let eta: Vec<usize> = f
        .f0
        .iter()
        .map(|&y| {
            let out = d.out_arrows(y);
            out[rng.gen_range(0..out.len())]
        })
        .collect();
    let f0 = eta.iter().map(|&e| d.tgt(e)).collect();
    let f1 = (0..c.num_morphisms())
        .map(|a| d.then(d.then(d.inv(eta[c.src(a)]), f.f1[a]), eta[c.tgt(a)]))
        .collect();
    let target = GroupoidFunctor::new(c.clone(), d.clone(), f0, f1).expect("conjugate functor");
    NatTransform::new(f.clone(), target, eta).expect("conjugation is natural")
}

#[test]
fn interchange_law_holds() {
    const ENDOFUNCTORS: usize = 6;
    const SAMPLED_CHAINS: usize = 4;
    const RANDOM: usize = 1000;
    let _serial = serial();
    let started = Instant::now();
    let mut rng = corpus::rng(DEFAULT_SEED);
    let mut failures = Vec::new();
    let mut instances = 0usize;
    let catalogue = corpus::groupoids_with_at_most(8);
    for (name, g) in &catalogue {
        let g = Arc::new(g.clone());
        let mut endo = Vec::new();
        for_each_functor(&g, &g, &mut |f| {
            endo.push(f);
            endo.len() < ENDOFUNCTORS
        });
        let all = chains(&endo);
        let sampled: Vec<_> = (0..SAMPLED_CHAINS.min(all.len()))
            .map(|_| &all[rng.gen_range(0..all.len())])
            .collect();
        for (a, a2) in &all {
            for (b, b2) in &sampled {
                instances += 2;
                for fail in [interchange_failure(a, a2, b, b2), interchange_failure(b, b2, a, a2)]
                    .into_iter()
                    .flatten()
                {
                    failures.push(format!("{name}: {fail}"));
                }
            }
        }
    }
    for k in 0..RANDOM {
        let c = Arc::new(corpus::random_groupoid(&mut rng));
        let d = Arc::new(corpus::random_groupoid(&mut rng));
        let e = Arc::new(corpus::random_groupoid(&mut rng));
        let (Some(f), Some(k1)) = (random_functor(&c, &d, &mut rng), random_functor(&d, &e, &mut rng))
        else {
            failures.push(format!("random instance {k}: no functor"));
            continue;
        };
        let alpha = random_cell(&f, &mut rng);
        let alpha2 = random_cell(&alpha.target, &mut rng);
        let beta = random_cell(&k1, &mut rng);
        let beta2 = random_cell(&beta.target, &mut rng);
        instances += 1;
        if let Some(fail) = interchange_failure(&alpha, &alpha2, &beta, &beta2) {
            failures.push(format!("random instance {k}: {fail}"));
        }
    }
    verdict(
        10,
        "interchange law",
        Duration::from_secs(5),
        started,
        &failures,
        &format!("{} groupoids, {instances} instances", catalogue.len()),
    );
}
