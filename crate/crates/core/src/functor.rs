//! Functors between finite groupoids, natural transformations, and the two
//! compositions of 2-cells.

use std::collections::{HashMap, HashSet};
use std::sync::Arc;

use thiserror::Error;

use crate::groupoid::FiniteGroupoid;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum FunctorError {
    #[error("object map has {found} entries, expected {expected}")]
    ObjectMapLength { expected: usize, found: usize },
    #[error("arrow map has {found} entries, expected {expected}")]
    ArrowMapLength { expected: usize, found: usize },
    #[error("image of {what} {index} is out of range")]
    OutOfRange { what: &'static str, index: usize },
    #[error("arrow {arrow} is sent to an arrow with the wrong endpoints")]
    Endpoints { arrow: usize },
    #[error("F({g}∘{f}) ≠ F({g})∘F({f})")]
    NotMultiplicative { f: usize, g: usize },
    #[error("identity of object {object} is not preserved")]
    IdentityNotPreserved { object: usize },
    #[error("the target of the first functor is not the source of the second")]
    DomainMismatch,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum NatError {
    #[error("functors are not parallel")]
    NotParallel,
    #[error("component table has {found} entries, expected {expected}")]
    Length { expected: usize, found: usize },
    #[error("component at object {object} has the wrong endpoints")]
    Endpoints { object: usize },
    #[error("naturality square fails at arrow {arrow}")]
    NotNatural { arrow: usize },
    #[error("2-cells do not share the required boundary")]
    BoundaryMismatch,
    #[error("the two horizontal composition formulas disagree at object {object}")]
    FormulaDisagreement { object: usize },
}

pub(crate) fn same_groupoid(a: &Arc<FiniteGroupoid>, b: &Arc<FiniteGroupoid>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

#[derive(Clone, Debug)]
pub struct GroupoidFunctor {
    pub source: Arc<FiniteGroupoid>,
    pub target: Arc<FiniteGroupoid>,
    pub f0: Vec<usize>,
    pub f1: Vec<usize>,
}

impl PartialEq for GroupoidFunctor {
    fn eq(&self, other: &Self) -> bool {
        self.f0 == other.f0
            && self.f1 == other.f1
            && same_groupoid(&self.source, &other.source)
            && same_groupoid(&self.target, &other.target)
    }
}

impl Eq for GroupoidFunctor {}

impl GroupoidFunctor {
    pub fn new(
        source: Arc<FiniteGroupoid>,
        target: Arc<FiniteGroupoid>,
        f0: Vec<usize>,
        f1: Vec<usize>,
    ) -> Result<Self, FunctorError> {
        let f = Self {
            source,
            target,
            f0,
            f1,
        };
        f.check()?;
        Ok(f)
    }

    fn check(&self) -> Result<(), FunctorError> {
        let (s, t) = (&self.source, &self.target);
        if self.f0.len() != s.num_objects() {
            return Err(FunctorError::ObjectMapLength {
                expected: s.num_objects(),
                found: self.f0.len(),
            });
        }
        if self.f1.len() != s.num_morphisms() {
            return Err(FunctorError::ArrowMapLength {
                expected: s.num_morphisms(),
                found: self.f1.len(),
            });
        }
        if let Some(index) = self.f0.iter().position(|&x| x >= t.num_objects()) {
            return Err(FunctorError::OutOfRange {
                what: "object",
                index,
            });
        }
        if let Some(index) = self.f1.iter().position(|&x| x >= t.num_morphisms()) {
            return Err(FunctorError::OutOfRange {
                what: "arrow",
                index,
            });
        }
        for g in 0..s.num_morphisms() {
            let h = self.f1[g];
            if t.src(h) != self.f0[s.src(g)] || t.tgt(h) != self.f0[s.tgt(g)] {
                return Err(FunctorError::Endpoints { arrow: g });
            }
        }
        for a in 0..s.num_objects() {
            if self.f1[s.ident(a)] != t.ident(self.f0[a]) {
                return Err(FunctorError::IdentityNotPreserved { object: a });
            }
        }
        for f in 0..s.num_morphisms() {
            for &g in s.out_arrows(s.tgt(f)) {
                if self.f1[s.then(f, g)] != t.then(self.f1[f], self.f1[g]) {
                    return Err(FunctorError::NotMultiplicative { f, g });
                }
            }
        }
        Ok(())
    }

    pub fn identity(g: Arc<FiniteGroupoid>) -> Self {
        Self {
            f0: (0..g.num_objects()).collect(),
            f1: (0..g.num_morphisms()).collect(),
            source: g.clone(),
            target: g,
        }
    }

    /// Trusted constructor for maps built inside the crate.
    pub(crate) fn unchecked(
        source: Arc<FiniteGroupoid>,
        target: Arc<FiniteGroupoid>,
        f0: Vec<usize>,
        f1: Vec<usize>,
    ) -> Self {
        Self {
            source,
            target,
            f0,
            f1,
        }
    }

    pub fn is_surjective_on_objects(&self) -> bool {
        let mut hit = vec![false; self.target.num_objects()];
        for &x in &self.f0 {
            hit[x] = true;
        }
        hit.into_iter().all(|b| b)
    }
}

/// `G ∘ F`: first `f`, then `g`.
pub fn compose_functors(
    f: &GroupoidFunctor,
    g: &GroupoidFunctor,
) -> Result<GroupoidFunctor, FunctorError> {
    if !same_groupoid(&f.target, &g.source) {
        return Err(FunctorError::DomainMismatch);
    }
    Ok(GroupoidFunctor {
        source: f.source.clone(),
        target: g.target.clone(),
        f0: f.f0.iter().map(|&x| g.f0[x]).collect(),
        f1: f.f1.iter().map(|&x| g.f1[x]).collect(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NatTransform {
    pub source: GroupoidFunctor,
    pub target: GroupoidFunctor,
    pub eta: Vec<usize>,
}

impl NatTransform {
    pub fn new(
        source: GroupoidFunctor,
        target: GroupoidFunctor,
        eta: Vec<usize>,
    ) -> Result<Self, NatError> {
        if !same_groupoid(&source.source, &target.source)
            || !same_groupoid(&source.target, &target.target)
        {
            return Err(NatError::NotParallel);
        }
        let n = Self {
            source,
            target,
            eta,
        };
        n.check()?;
        Ok(n)
    }

    fn check(&self) -> Result<(), NatError> {
        let (c, d) = (&self.source.source, &self.source.target);
        let (f, g) = (&self.source, &self.target);
        if self.eta.len() != c.num_objects() {
            return Err(NatError::Length {
                expected: c.num_objects(),
                found: self.eta.len(),
            });
        }
        for (a, &e) in self.eta.iter().enumerate() {
            if e >= d.num_morphisms() || d.src(e) != f.f0[a] || d.tgt(e) != g.f0[a] {
                return Err(NatError::Endpoints { object: a });
            }
        }
        for arrow in 0..c.num_morphisms() {
            let left = d.then(f.f1[arrow], self.eta[c.tgt(arrow)]);
            let right = d.then(self.eta[c.src(arrow)], g.f1[arrow]);
            if left != right {
                return Err(NatError::NotNatural { arrow });
            }
        }
        Ok(())
    }

    pub fn identity(f: &GroupoidFunctor) -> Self {
        Self {
            eta: f.f0.iter().map(|&x| f.target.ident(x)).collect(),
            source: f.clone(),
            target: f.clone(),
        }
    }

    /// Componentwise inverse `G ⇒ F`.
    pub fn inverse(&self) -> Self {
        let d = &self.source.target;
        Self {
            source: self.target.clone(),
            target: self.source.clone(),
            eta: self.eta.iter().map(|&e| d.inv(e)).collect(),
        }
    }
}

/// Vertical composite of `alpha: F ⇒ G` and `beta: G ⇒ H`.
pub fn vcomp(alpha: &NatTransform, beta: &NatTransform) -> Result<NatTransform, NatError> {
    if alpha.target != beta.source {
        return Err(NatError::BoundaryMismatch);
    }
    let d = &alpha.source.target;
    Ok(NatTransform {
        source: alpha.source.clone(),
        target: beta.target.clone(),
        eta: alpha
            .eta
            .iter()
            .zip(&beta.eta)
            .map(|(&a, &b)| d.then(a, b))
            .collect(),
    })
}

/// Horizontal composite of `alpha: F ⇒ G` (over `C → D`) and
/// `beta: F' ⇒ G'` (over `D → E`), a 2-cell `F'F ⇒ G'G`. Both ways around
/// the square are computed and compared.
pub fn hcomp(alpha: &NatTransform, beta: &NatTransform) -> Result<NatTransform, NatError> {
    if !same_groupoid(&alpha.source.target, &beta.source.source) {
        return Err(NatError::BoundaryMismatch);
    }
    let e = &beta.source.target;
    let (f, g) = (&alpha.source, &alpha.target);
    let (f2, g2) = (&beta.source, &beta.target);
    let mut eta = Vec::with_capacity(alpha.eta.len());
    for (object, &a) in alpha.eta.iter().enumerate() {
        let one = e.then(beta.eta[f.f0[object]], g2.f1[a]);
        let other = e.then(f2.f1[a], beta.eta[g.f0[object]]);
        if one != other {
            return Err(NatError::FormulaDisagreement { object });
        }
        eta.push(one);
    }
    Ok(NatTransform {
        source: compose_functors(f, f2).map_err(|_| NatError::BoundaryMismatch)?,
        target: compose_functors(g, g2).map_err(|_| NatError::BoundaryMismatch)?,
        eta,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub struct EquivalenceReport {
    pub full: bool,
    pub faithful: bool,
    pub ess_surjective: bool,
    pub equivalence: bool,
}

/// Fullness and faithfulness per hom-set, essential surjectivity per
/// component of the target.
pub fn is_equivalence(f: &GroupoidFunctor) -> EquivalenceReport {
    let (c, d) = (&*f.source, &*f.target);
    let mut faithful = true;
    let mut full = true;
    let mut target_homs: HashMap<usize, HashMap<usize, usize>> = HashMap::new();
    for a in 0..c.num_objects() {
        let fa = f.f0[a];
        let counts = target_homs.entry(fa).or_insert_with(|| {
            let mut m = HashMap::new();
            for &h in d.out_arrows(fa) {
                *m.entry(d.tgt(h)).or_insert(0) += 1;
            }
            m
        });
        let mut images: HashMap<usize, HashSet<usize>> = HashMap::new();
        for &g in c.out_arrows(a) {
            if !images.entry(c.tgt(g)).or_default().insert(f.f1[g]) {
                faithful = false;
            }
        }
        for b in 0..c.num_objects() {
            let available = counts.get(&f.f0[b]).copied().unwrap_or(0);
            let hit = images.get(&b).map_or(0, |s| s.len());
            if hit != available {
                full = false;
            }
        }
        if !full && !faithful {
            break;
        }
    }
    let comp = d.component_index();
    let mut hit = vec![false; comp.iter().max().map_or(0, |&m| m + 1)];
    for &x in &f.f0 {
        hit[comp[x]] = true;
    }
    let ess_surjective = hit.into_iter().all(|b| b);
    EquivalenceReport {
        full,
        faithful,
        ess_surjective,
        equivalence: full && faithful && ess_surjective,
    }
}
