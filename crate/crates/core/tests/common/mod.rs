//! Independent oracles shared by the integration tests. Nothing here calls
//! the validators, searches or solvers being checked.

#![allow(dead_code)]

use std::collections::HashSet;

use gpd_core::descent::{Covering, DescentObject};
use gpd_core::linrep::{q, BundleSES, QMatrix};
use gpd_core::{FiniteGroupoid, NatTransform, RawCategory};

/// Scans every groupoid axiom directly on the raw tables.
pub fn scan_axioms(raw: &RawCategory, inv: &[usize]) -> bool {
    let n = raw.objects.len();
    let m = raw.morphisms.len();
    if raw.src.len() != m || raw.tgt.len() != m || raw.ident.len() != n || inv.len() != m {
        return false;
    }
    if raw.src.iter().chain(&raw.tgt).any(|&x| x >= n) {
        return false;
    }
    if raw.ident.iter().chain(inv).any(|&f| f >= m) {
        return false;
    }
    let mut table: Vec<Vec<Option<usize>>> = vec![vec![None; m]; m];
    for &[f, g, r] in &raw.compose {
        if f >= m || g >= m || r >= m {
            return false;
        }
        if raw.tgt[f] != raw.src[g] || raw.src[r] != raw.src[f] || raw.tgt[r] != raw.tgt[g] {
            return false;
        }
        if table[f][g].is_some_and(|x| x != r) {
            return false;
        }
        table[f][g] = Some(r);
    }
    for f in 0..m {
        for g in 0..m {
            if raw.tgt[f] == raw.src[g] && table[f][g].is_none() {
                return false;
            }
        }
    }
    let c = |f: usize, g: usize| table[f][g].unwrap();
    for x in 0..n {
        let e = raw.ident[x];
        if raw.src[e] != x || raw.tgt[e] != x {
            return false;
        }
        for f in 0..m {
            if raw.src[f] == x && c(e, f) != f {
                return false;
            }
            if raw.tgt[f] == x && c(f, e) != f {
                return false;
            }
        }
    }
    for f in 0..m {
        for g in 0..m {
            if raw.tgt[f] != raw.src[g] {
                continue;
            }
            for h in 0..m {
                if raw.tgt[g] == raw.src[h] && c(c(f, g), h) != c(f, c(g, h)) {
                    return false;
                }
            }
        }
    }
    for f in 0..m {
        let i = inv[f];
        if raw.src[i] != raw.tgt[f] || raw.tgt[i] != raw.src[f] {
            return false;
        }
        if c(f, i) != raw.ident[raw.src[f]] || c(i, f) != raw.ident[raw.tgt[f]] {
            return false;
        }
    }
    true
}

/// Plain tables read back out of a groupoid.
struct Tables {
    n: usize,
    m: usize,
    src: Vec<usize>,
    tgt: Vec<usize>,
    ident: Vec<usize>,
    comp: Vec<Vec<Option<usize>>>,
}

impl Tables {
    fn of(g: &FiniteGroupoid) -> Self {
        let raw = g.to_raw();
        let m = raw.morphisms.len();
        let mut comp = vec![vec![None; m]; m];
        for &[f, h, r] in &raw.compose {
            comp[f][h] = Some(r);
        }
        Self {
            n: raw.objects.len(),
            m,
            src: raw.src,
            tgt: raw.tgt,
            ident: raw.ident,
            comp,
        }
    }

    fn hom(&self, a: usize, b: usize) -> Vec<usize> {
        (0..self.m).filter(|&f| self.src[f] == a && self.tgt[f] == b).collect()
    }
}

/// Whether some functor `g → h` is full, faithful and essentially
/// surjective, by enumerating object maps and then arrow maps arrow by
/// arrow with the composition constraints checked as soon as they close.
pub fn brute_equivalent(g: &FiniteGroupoid, h: &FiniteGroupoid) -> bool {
    let tg = Tables::of(g);
    let th = Tables::of(h);
    let mut closing: Vec<Vec<(usize, usize, usize)>> = vec![Vec::new(); tg.m];
    for f in 0..tg.m {
        for k in 0..tg.m {
            if let Some(r) = tg.comp[f][k] {
                closing[f.max(k).max(r)].push((f, k, r));
            }
        }
    }
    let mut f0 = vec![0; tg.n];
    let mut found = false;
    for_each_object_map(tg.n, th.n, &mut f0, 0, &mut |f0| {
        let mut f1 = vec![usize::MAX; tg.m];
        found = arrows(&tg, &th, &closing, f0, &mut f1, 0);
        !found
    });
    found
}

fn for_each_object_map(
    n: usize,
    base: usize,
    cur: &mut Vec<usize>,
    at: usize,
    visit: &mut dyn FnMut(&[usize]) -> bool,
) -> bool {
    if at == n {
        return visit(cur);
    }
    for y in 0..base {
        cur[at] = y;
        if !for_each_object_map(n, base, cur, at + 1, visit) {
            return false;
        }
    }
    true
}

fn arrows(
    tg: &Tables,
    th: &Tables,
    closing: &[Vec<(usize, usize, usize)>],
    f0: &[usize],
    f1: &mut Vec<usize>,
    at: usize,
) -> bool {
    if at == tg.m {
        return is_equivalence_naive(tg, th, f0, f1);
    }
    let (a, b) = (tg.src[at], tg.tgt[at]);
    let options = if tg.ident[a] == at {
        vec![th.ident[f0[a]]]
    } else {
        th.hom(f0[a], f0[b])
    };
    for x in options {
        f1[at] = x;
        let ok = closing[at]
            .iter()
            .all(|&(f, k, r)| th.comp[f1[f]][f1[k]] == Some(f1[r]));
        if ok && arrows(tg, th, closing, f0, f1, at + 1) {
            return true;
        }
    }
    f1[at] = usize::MAX;
    false
}

fn is_equivalence_naive(tg: &Tables, th: &Tables, f0: &[usize], f1: &[usize]) -> bool {
    for a in 0..tg.n {
        for b in 0..tg.n {
            let src = tg.hom(a, b);
            let image: HashSet<usize> = src.iter().map(|&f| f1[f]).collect();
            if image.len() != src.len() || image.len() != th.hom(f0[a], f0[b]).len() {
                return false;
            }
        }
    }
    (0..th.n).all(|y| f0.iter().any(|&x| !th.hom(x, y).is_empty()))
}

fn digits(mut x: usize, base: usize, len: usize) -> Vec<usize> {
    let mut d = vec![0; len];
    for slot in d.iter_mut().rev() {
        *slot = x % base;
        x /= base;
    }
    d
}

/// Descent datum check for the strict presheaf `U ↦ G^U`, point by point:
/// each gluing arrow runs from the `j`-th to the `i`-th section, and
/// `φ_il(a,c) = φ_jl(b,c) ∘ φ_ij(a,b)` on every triple overlap.
pub fn pointwise_datum_ok(g: &FiniteGroupoid, cover: &Covering, datum: &DescentObject) -> bool {
    let k = cover.maps.len();
    let (n, m) = (g.num_objects(), g.num_morphisms());
    if datum.sections.len() != k || datum.gluing.len() != k * k {
        return false;
    }
    let sections: Vec<Vec<usize>> = (0..k)
        .map(|i| digits(datum.sections[i], n, cover.maps[i].domain))
        .collect();
    let mut pairs = vec![Vec::new(); k * k];
    for i in 0..k {
        for j in 0..k {
            let (fi, fj) = (&cover.maps[i], &cover.maps[j]);
            for a in 0..fi.domain {
                for b in 0..fj.domain {
                    if fi.map[a] == fj.map[b] {
                        pairs[i * k + j].push((a, b));
                    }
                }
            }
        }
    }
    let glue: Vec<Vec<usize>> = (0..k * k)
        .map(|q| digits(datum.gluing[q], m, pairs[q].len()))
        .collect();
    let at = |i: usize, j: usize, a: usize, b: usize| {
        let q = i * k + j;
        let pos = pairs[q].iter().position(|&p| p == (a, b)).unwrap();
        glue[q][pos]
    };
    for i in 0..k {
        for j in 0..k {
            for (pos, &(a, b)) in pairs[i * k + j].iter().enumerate() {
                let arrow = glue[i * k + j][pos];
                if g.src(arrow) != sections[j][b] || g.tgt(arrow) != sections[i][a] {
                    return false;
                }
            }
        }
    }
    for i in 0..k {
        for j in 0..k {
            for l in 0..k {
                for &(a, b) in &pairs[i * k + j] {
                    for c in 0..cover.maps[l].domain {
                        if cover.maps[l].map[c] != cover.maps[i].map[a] {
                            continue;
                        }
                        if at(i, l, a, c) != g.then(at(j, l, b, c), at(i, j, a, b)) {
                            return false;
                        }
                    }
                }
            }
        }
    }
    true
}

/// Averages a right inverse of `q` over the isotropy group at each
/// component's first object and transports it along chosen arrows.
pub fn averaging_splitting(ses: &BundleSES) -> Vec<QMatrix> {
    let g = ses.b.groupoid();
    let mut r: Vec<Option<QMatrix>> = vec![None; g.num_objects()];
    for x in 0..g.num_objects() {
        if r[x].is_some() {
            continue;
        }
        let quotient = &ses.q[x];
        let qt = quotient.transpose();
        let gram = (quotient * &qt).inverse().expect("q has full row rank");
        let s = &qt * &gram;
        let loops = g.hom(x, x);
        let mut sum = QMatrix::zeros(ses.b.dim(x), ses.c.dim(x));
        for &l in &loops {
            sum = &sum + &(&(ses.b.mat(l) * &s) * ses.c.mat(g.inv(l)));
        }
        let avg = sum.scale(&q(1, loops.len() as i64));
        for y in 0..g.num_objects() {
            if let Some(&tau) = g.hom(x, y).first() {
                r[y] = Some(&(ses.b.mat(tau) * &avg) * ses.c.mat(g.inv(tau)));
            }
        }
    }
    r.into_iter().map(|m| m.unwrap()).collect()
}

/// Horizontal composite `β * α` computed as `K(α_c)` followed by `β`.
pub fn whiskered_hcomp(alpha: &NatTransform, beta: &NatTransform) -> Vec<usize> {
    let e = &beta.source.target;
    let k = &beta.source;
    alpha
        .eta
        .iter()
        .enumerate()
        .map(|(c, &a)| e.then(k.f1[a], beta.eta[alpha.target.f0[c]]))
        .collect()
}

/// Both sides of the interchange law, each assembled from the oracle
/// formulas: `(β'·β) * (α'·α)` and `(β' * α')·(β * α)`.
pub fn interchange_sides(
    alpha: &NatTransform,
    alpha2: &NatTransform,
    beta: &NatTransform,
    beta2: &NatTransform,
) -> (Vec<usize>, Vec<usize>) {
    let d = &alpha.source.target;
    let e = &beta.source.target;
    let va: Vec<usize> = alpha.eta.iter().zip(&alpha2.eta).map(|(&a, &b)| d.then(a, b)).collect();
    let vb: Vec<usize> = beta.eta.iter().zip(&beta2.eta).map(|(&a, &b)| e.then(a, b)).collect();
    let k = &beta.source;
    let lhs: Vec<usize> = va
        .iter()
        .enumerate()
        .map(|(c, &a)| e.then(k.f1[a], vb[alpha2.target.f0[c]]))
        .collect();
    let first = whiskered_hcomp(alpha, beta);
    let second = whiskered_hcomp(alpha2, beta2);
    let rhs = first.iter().zip(&second).map(|(&a, &b)| e.then(a, b)).collect();
    (lhs, rhs)
}
