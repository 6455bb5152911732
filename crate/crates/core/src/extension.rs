//! Groupoid extensions over a fixed object set, the fiber product
//! `G ×_H G`, gerbe conditions, and Morita equivalence of extensions.

use std::collections::HashSet;
use std::fmt;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::functor::{same_groupoid, FunctorError, GroupoidFunctor};
use crate::groupoid::FiniteGroupoid;
use crate::morita::{is_morita_morphism, pullback_groupoid, MoritaFailure, PullbackGroupoid};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ExtensionError {
    #[error("object sets differ ({left} vs {right} objects)")]
    ObjectSetMismatch { left: usize, right: usize },
    #[error("not a functor: {0}")]
    NotAFunctor(#[from] FunctorError),
    #[error("arrow {arrow} of the quotient is not hit")]
    NotSurjective { arrow: usize },
    #[error("base point {point} is not hit")]
    MapNotSurjective { point: usize },
}

/// An identity-on-objects functor `G → H` that is onto on arrows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupoidExtension {
    functor: GroupoidFunctor,
}

impl GroupoidExtension {
    pub fn validate(
        g: Arc<FiniteGroupoid>,
        h: Arc<FiniteGroupoid>,
        arrow_map: Vec<usize>,
    ) -> Result<Self, ExtensionError> {
        if g.num_objects() != h.num_objects() {
            return Err(ExtensionError::ObjectSetMismatch {
                left: g.num_objects(),
                right: h.num_objects(),
            });
        }
        let f0 = (0..g.num_objects()).collect();
        let functor = GroupoidFunctor::new(g, h, f0, arrow_map)?;
        Self::from_functor(functor)
    }

    /// Accepts a functor that is the identity on objects and onto on arrows.
    pub fn from_functor(functor: GroupoidFunctor) -> Result<Self, ExtensionError> {
        let (g, h) = (&functor.source, &functor.target);
        if g.num_objects() != h.num_objects() || functor.f0.iter().enumerate().any(|(a, &b)| a != b)
        {
            return Err(ExtensionError::ObjectSetMismatch {
                left: g.num_objects(),
                right: h.num_objects(),
            });
        }
        let mut hit = vec![false; h.num_morphisms()];
        for &x in &functor.f1 {
            hit[x] = true;
        }
        if let Some(arrow) = hit.iter().position(|&b| !b) {
            return Err(ExtensionError::NotSurjective { arrow });
        }
        Ok(Self { functor })
    }

    pub fn functor(&self) -> &GroupoidFunctor {
        &self.functor
    }

    pub fn extended(&self) -> &Arc<FiniteGroupoid> {
        &self.functor.source
    }

    pub fn quotient(&self) -> &Arc<FiniteGroupoid> {
        &self.functor.target
    }

    pub fn map(&self, g: usize) -> usize {
        self.functor.f1[g]
    }
}

/// `G ×_H G`. Objects are the arrows of `H`. The arrow `(h, g₁, g₂)` runs
/// from `h: a → b` to `F(g₁)⁻¹ h F(g₂)` (written left to right), for
/// `g₁` out of `a` and `g₂` out of `b`; composition is componentwise.
pub struct FiberProduct {
    pub groupoid: Arc<FiniteGroupoid>,
    /// `canonical[m] = (h, g₁, g₂)`.
    pub canonical: Vec<(usize, usize, usize)>,
    ext: GroupoidExtension,
}

impl fmt::Debug for FiberProduct {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiberProduct")
            .field("objects", &self.groupoid.num_objects())
            .field("morphisms", &self.groupoid.num_morphisms())
            .finish()
    }
}

impl FiberProduct {
    /// The triple `(g₁, k, g₂)` with `tgt g₁ = src k`, `tgt k = src g₂`,
    /// whose source object is `F(g₁) then k` and target `k then F(g₂)`.
    pub fn triple(&self, m: usize) -> (usize, usize, usize) {
        let (h, g1, g2) = self.canonical[m];
        let q = self.ext.quotient();
        (g1, q.then(q.inv(self.ext.map(g1)), h), g2)
    }
}

pub fn fiber_product_groupoid(ext: &GroupoidExtension) -> FiberProduct {
    let g = ext.extended().clone();
    let h = ext.quotient().clone();
    let mut canonical = Vec::new();
    let mut offset = Vec::with_capacity(h.num_morphisms());
    for x in 0..h.num_morphisms() {
        offset.push(canonical.len());
        for &g1 in g.out_arrows(h.src(x)) {
            for &g2 in g.out_arrows(h.tgt(x)) {
                canonical.push((x, g1, g2));
            }
        }
    }
    let gi = g.clone();
    let hi = h.clone();
    let index = move |x: usize, g1: usize, g2: usize| -> usize {
        let out1 = gi.out_arrows(hi.src(x));
        let out2 = gi.out_arrows(hi.tgt(x));
        let k1 = out1.binary_search(&g1).expect("g1 leaves src h");
        let k2 = out2.binary_search(&g2).expect("g2 leaves tgt h");
        offset[x] + k1 * out2.len() + k2
    };
    let f1 = ext.functor().f1.clone();
    let end = |x: usize, g1: usize, g2: usize| h.then(h.then(h.inv(f1[g1]), x), f1[g2]);
    let src: Vec<usize> = canonical.iter().map(|c| c.0).collect();
    let tgt: Vec<usize> = canonical.iter().map(|&(x, g1, g2)| end(x, g1, g2)).collect();
    let ident = (0..h.num_morphisms())
        .map(|x| index(x, g.ident(h.src(x)), g.ident(h.tgt(x))))
        .collect();
    let inv = canonical
        .iter()
        .zip(&tgt)
        .map(|(&(_, g1, g2), &y)| index(y, g.inv(g1), g.inv(g2)))
        .collect();
    let morphisms = canonical
        .iter()
        .map(|&(x, g1, g2)| {
            format!(
                "({},{},{})",
                g.morphism_label(g1),
                h.morphism_label(x),
                g.morphism_label(g2)
            )
        })
        .collect();
    let c = canonical.clone();
    let gc = g.clone();
    let rule = move |a: usize, b: usize| {
        let (x, g1, g2) = c[a];
        let (_, k1, k2) = c[b];
        index(x, gc.then(g1, k1), gc.then(g2, k2))
    };
    let groupoid = Arc::new(FiniteGroupoid::assemble_lazy(
        h.morphism_labels().to_vec(),
        morphisms,
        src,
        tgt,
        ident,
        inv,
        rule,
    ));
    FiberProduct {
        groupoid,
        canonical,
        ext: ext.clone(),
    }
}

/// `Δ: G → G ×_H G`, `a ↦ 1_a`, `g ↦ (1_{src g}, g, g)`.
pub fn diagonal_functor(ext: &GroupoidExtension, fp: &FiberProduct) -> GroupoidFunctor {
    let (g, h) = (ext.extended(), ext.quotient());
    let f0: Vec<usize> = (0..g.num_objects()).map(|a| h.ident(a)).collect();
    let f1 = (0..g.num_morphisms())
        .map(|a| {
            let x = h.ident(g.src(a));
            fp.groupoid
                .out_arrows(x)
                .iter()
                .copied()
                .find(|&m| fp.canonical[m] == (x, a, a))
                .expect("diagonal arrow exists")
        })
        .collect();
    GroupoidFunctor::unchecked(g.clone(), fp.groupoid.clone(), f0, f1)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GerbeReport {
    pub objects_lift: bool,
    pub arrows_lift: bool,
    pub gerbe: bool,
    /// An object of the target not isomorphic to any image.
    pub unlifted_object: Option<usize>,
    /// `(a, p, b)`: `p: F(a) → F(b)` with no preimage `a → b`.
    pub unlifted_arrow: Option<(usize, usize, usize)>,
}

/// Both lifting conditions, checked at every point.
pub fn check_gerbe_conditions(f: &GroupoidFunctor) -> GerbeReport {
    let (g, h) = (&f.source, &f.target);
    let comp = h.component_index();
    let hit: HashSet<usize> = f.f0.iter().map(|&x| comp[x]).collect();
    let unlifted_object = (0..h.num_objects()).find(|&y| !hit.contains(&comp[y]));
    let mut unlifted_arrow = None;
    let mut by_image = vec![Vec::new(); h.num_objects()];
    for (a, &x) in f.f0.iter().enumerate() {
        by_image[x].push(a);
    }
    'outer: for a in 0..g.num_objects() {
        let images: HashSet<(usize, usize)> =
            g.out_arrows(a).iter().map(|&t| (g.tgt(t), f.f1[t])).collect();
        for &p in h.out_arrows(f.f0[a]) {
            for &b in &by_image[h.tgt(p)] {
                if !images.contains(&(b, p)) {
                    unlifted_arrow = Some((a, p, b));
                    break 'outer;
                }
            }
        }
    }
    let objects_lift = unlifted_object.is_none();
    let arrows_lift = unlifted_arrow.is_none();
    GerbeReport {
        objects_lift,
        arrows_lift,
        gerbe: objects_lift && arrows_lift,
        unlifted_object,
        unlifted_arrow,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum InduceError {
    #[error("object {object} of the target is not hit")]
    NotSurjectiveOnObjects { object: usize },
    #[error("triple ({src}, {arrow}, {tgt}) is not the image of any arrow")]
    NotFull { src: usize, arrow: usize, tgt: usize },
}

/// The extension `G → F*H` onto the pullback of `H` along `F₀`.
pub struct InducedExtension {
    pub extension: GroupoidExtension,
    pub pullback: PullbackGroupoid,
}

pub fn induced_extension(f: &GroupoidFunctor) -> Result<InducedExtension, InduceError> {
    let g = &f.source;
    let pullback = pullback_groupoid(&f.target, g.object_labels().to_vec(), &f.f0).map_err(
        |e| match e {
            crate::morita::MoritaError::NotSurjective { object } => {
                InduceError::NotSurjectiveOnObjects { object }
            }
            _ => unreachable!("pullback only fails on surjectivity"),
        },
    )?;
    let p = &pullback.groupoid;
    let mut hit = vec![false; p.num_morphisms()];
    let mut f1 = Vec::with_capacity(g.num_morphisms());
    for a in 0..g.num_morphisms() {
        let (s, t) = (g.src(a), g.tgt(a));
        let m = p
            .hom(s, t)
            .into_iter()
            .find(|&m| pullback.triples[m].1 == f.f1[a])
            .expect("image triple exists");
        hit[m] = true;
        f1.push(m);
    }
    if let Some(m) = hit.iter().position(|&b| !b) {
        let (src, arrow, tgt) = pullback.triples[m];
        return Err(InduceError::NotFull { src, arrow, tgt });
    }
    let functor = GroupoidFunctor::unchecked(
        g.clone(),
        p.clone(),
        (0..g.num_objects()).collect(),
        f1,
    );
    Ok(InducedExtension {
        extension: GroupoidExtension { functor },
        pullback,
    })
}

/// A Morita morphism of extensions `E'' → E`: functors on both levels.
#[derive(Clone, Debug)]
pub struct ExtensionMorphism {
    pub on_extended: GroupoidFunctor,
    pub on_quotient: GroupoidFunctor,
}

/// `E₁ ← apex → E₂`.
#[derive(Clone, Debug)]
pub struct ExtensionWitness {
    pub apex: GroupoidExtension,
    pub to_first: ExtensionMorphism,
    pub to_second: ExtensionMorphism,
}

impl ExtensionWitness {
    pub fn identity(ext: &GroupoidExtension) -> Self {
        let leg = ExtensionMorphism {
            on_extended: GroupoidFunctor::identity(ext.extended().clone()),
            on_quotient: GroupoidFunctor::identity(ext.quotient().clone()),
        };
        Self {
            apex: ext.clone(),
            to_first: leg.clone(),
            to_second: leg,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ExtensionFailure {
    Shape { leg: &'static str },
    NotAFunctor { leg: &'static str, detail: String },
    NotMorita { leg: &'static str, level: &'static str, failure: MoritaFailure },
    ObjectsDisagree { leg: &'static str, object: usize },
    SquareFails { leg: &'static str, arrow: usize },
}

impl fmt::Display for ExtensionFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtensionFailure::Shape { leg } => write!(f, "{leg} leg has the wrong endpoints"),
            ExtensionFailure::NotAFunctor { leg, detail } => {
                write!(f, "{leg} leg is not a functor: {detail}")
            }
            ExtensionFailure::NotMorita { leg, level, failure } => {
                write!(f, "{leg} leg on the {level} level: {failure}")
            }
            ExtensionFailure::ObjectsDisagree { leg, object } => {
                write!(f, "{leg} leg moves object {object} differently on the two levels")
            }
            ExtensionFailure::SquareFails { leg, arrow } => {
                write!(f, "{leg} leg: square fails at arrow {arrow}")
            }
        }
    }
}

fn check_leg(
    leg: &'static str,
    apex: &GroupoidExtension,
    m: &ExtensionMorphism,
    ext: &GroupoidExtension,
    out: &mut Vec<ExtensionFailure>,
) {
    let (a, b) = (&m.on_extended, &m.on_quotient);
    if !same_groupoid(&a.source, apex.extended())
        || !same_groupoid(&b.source, apex.quotient())
        || !same_groupoid(&a.target, ext.extended())
        || !same_groupoid(&b.target, ext.quotient())
    {
        out.push(ExtensionFailure::Shape { leg });
        return;
    }
    for f in [a, b] {
        if let Err(e) =
            GroupoidFunctor::new(f.source.clone(), f.target.clone(), f.f0.clone(), f.f1.clone())
        {
            out.push(ExtensionFailure::NotAFunctor {
                leg,
                detail: e.to_string(),
            });
            return;
        }
    }
    for (level, f) in [("extended", a), ("quotient", b)] {
        if let Err(failure) = is_morita_morphism(f) {
            out.push(ExtensionFailure::NotMorita {
                leg,
                level,
                failure,
            });
        }
    }
    if let Some(object) = (0..a.f0.len()).find(|&x| a.f0[x] != b.f0[x]) {
        out.push(ExtensionFailure::ObjectsDisagree { leg, object });
    }
    for arrow in 0..apex.extended().num_morphisms() {
        if b.f1[apex.map(arrow)] != ext.map(a.f1[arrow]) {
            out.push(ExtensionFailure::SquareFails { leg, arrow });
            break;
        }
    }
}

/// Every failure found on either leg; empty when the witness is valid.
pub fn verify_extension_morita(
    first: &GroupoidExtension,
    second: &GroupoidExtension,
    witness: &ExtensionWitness,
) -> Vec<ExtensionFailure> {
    let mut out = Vec::new();
    check_leg("first", &witness.apex, &witness.to_first, first, &mut out);
    check_leg("second", &witness.apex, &witness.to_second, second, &mut out);
    out
}

/// Pulls both levels back along a surjection `f: N → M`, returning the new
/// extension and the projection morphism onto `ext`.
pub fn pullback_extension(
    ext: &GroupoidExtension,
    labels: Vec<String>,
    f: &[usize],
) -> Result<(GroupoidExtension, ExtensionMorphism), ExtensionError> {
    let map_err = |e| match e {
        crate::morita::MoritaError::NotSurjective { object } => {
            ExtensionError::MapNotSurjective { point: object }
        }
        _ => unreachable!("pullback only fails on surjectivity"),
    };
    let pg = pullback_groupoid(ext.extended(), labels.clone(), f).map_err(map_err)?;
    let ph = pullback_groupoid(ext.quotient(), labels, f).map_err(map_err)?;
    let arrow_map = pg
        .triples
        .iter()
        .map(|&(p, x, q)| {
            let y = ext.map(x);
            ph.groupoid
                .hom(p, q)
                .into_iter()
                .find(|&m| ph.triples[m].1 == y)
                .expect("image triple exists")
        })
        .collect();
    let functor = GroupoidFunctor::unchecked(
        pg.groupoid.clone(),
        ph.groupoid.clone(),
        (0..f.len()).collect(),
        arrow_map,
    );
    let pulled = GroupoidExtension::from_functor(functor)?;
    Ok((
        pulled,
        ExtensionMorphism {
            on_extended: pg.projection,
            on_quotient: ph.projection,
        },
    ))
}

/// The witness relating `ext` to the extension induced by its functor: the
/// induced extension is the apex, mapping to itself by identities and to
/// `ext` by the identity on `G` and the pullback projection on `H`.
pub fn induced_witness(ext: &GroupoidExtension, induced: &InducedExtension) -> ExtensionWitness {
    let apex = induced.extension.clone();
    let to_induced = ExtensionMorphism {
        on_extended: GroupoidFunctor::identity(apex.extended().clone()),
        on_quotient: GroupoidFunctor::identity(apex.quotient().clone()),
    };
    let to_ext = ExtensionMorphism {
        on_extended: GroupoidFunctor::identity(ext.extended().clone()),
        on_quotient: induced.pullback.projection.clone(),
    };
    ExtensionWitness {
        apex,
        to_first: to_ext,
        to_second: to_induced,
    }
}
