//! JSON documents for groupoids, functors, extensions, actions, bundles,
//! bibundles, sites, coverings and representations. Everything refers to
//! objects and arrows by their string ids.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::actions::{ActionSpec, GroupoidAction, PrincipalGroupoidBundle, Side};
use crate::bibundle::Bibundle;
use crate::category::{validate_category, FiniteCategory, RawCategory, ValidationReport};
use crate::descent::{Covering, FiniteSite};
use crate::extension::GroupoidExtension;
use crate::functor::GroupoidFunctor;
use crate::groupoid::{validate_groupoid, FiniteGroupoid};
use crate::linrep::{BundleSES, GroupoidVectorBundle, QMatrix};

/// Problems with a document before any mathematical validation.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum DocError {
    #[error("duplicate {kind} id {id:?}")]
    Duplicate { kind: &'static str, id: String },
    #[error("unknown {kind} id {id:?}")]
    Unknown { kind: &'static str, id: String },
    #[error("no {what} given for {id:?}")]
    Missing { what: &'static str, id: String },
    #[error("{0}")]
    Other(String),
}

/// A document that parsed but describes an invalid structure.
#[derive(Clone, Debug, Error)]
pub enum LoadError {
    #[error(transparent)]
    Doc(#[from] DocError),
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Category(#[from] ValidationReport),
}

fn index_of(kind: &'static str, ids: &[String]) -> Result<HashMap<String, usize>, DocError> {
    let mut m = HashMap::with_capacity(ids.len());
    for (k, id) in ids.iter().enumerate() {
        if m.insert(id.clone(), k).is_some() {
            return Err(DocError::Duplicate { kind, id: id.clone() });
        }
    }
    Ok(m)
}

fn look(kind: &'static str, m: &HashMap<String, usize>, id: &str) -> Result<usize, DocError> {
    m.get(id).copied().ok_or_else(|| DocError::Unknown {
        kind,
        id: id.to_string(),
    })
}

/// Reads a total map keyed by ids of `domain`.
fn total_map(
    what: &'static str,
    domain: &[String],
    map: &BTreeMap<String, String>,
    dom_index: &HashMap<String, usize>,
    codomain: &HashMap<String, usize>,
    kind: &'static str,
) -> Result<Vec<usize>, DocError> {
    for key in map.keys() {
        look(what, dom_index, key)?;
    }
    domain
        .iter()
        .map(|id| {
            let v = map.get(id).ok_or_else(|| DocError::Missing {
                what,
                id: id.clone(),
            })?;
            look(kind, codomain, v)
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MorphismDoc {
    pub id: String,
    pub src: String,
    pub tgt: String,
}

/// `compose` lists `[f, g, g∘f]`; pairs left out are read as not composable.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupoidDoc {
    pub objects: Vec<String>,
    pub morphisms: Vec<MorphismDoc>,
    #[serde(default)]
    pub compose: Vec<[String; 3]>,
    pub identity: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub inverse: Option<BTreeMap<String, String>>,
}

impl GroupoidDoc {
    pub fn from_category(c: &FiniteCategory) -> Self {
        let objects = c.object_labels().to_vec();
        let morphisms = (0..c.num_morphisms())
            .map(|f| MorphismDoc {
                id: c.morphism_label(f).to_string(),
                src: c.object_label(c.src(f)).to_string(),
                tgt: c.object_label(c.tgt(f)).to_string(),
            })
            .collect();
        let mut compose = Vec::new();
        for f in 0..c.num_morphisms() {
            for &g in c.out_arrows(c.tgt(f)) {
                compose.push([
                    c.morphism_label(f).to_string(),
                    c.morphism_label(g).to_string(),
                    c.morphism_label(c.then(f, g)).to_string(),
                ]);
            }
        }
        let identity = (0..c.num_objects())
            .map(|x| (c.object_label(x).to_string(), c.morphism_label(c.ident(x)).to_string()))
            .collect();
        Self {
            objects,
            morphisms,
            compose,
            identity,
            inverse: None,
        }
    }

    pub fn from_groupoid(g: &FiniteGroupoid) -> Self {
        let mut doc = Self::from_category(g.category());
        doc.inverse = Some(
            (0..g.num_morphisms())
                .map(|f| (g.morphism_label(f).to_string(), g.morphism_label(g.inv(f)).to_string()))
                .collect(),
        );
        doc
    }

    /// Raw tables and, when present, the inverse table.
    pub fn to_raw(&self) -> Result<(RawCategory, Option<Vec<usize>>), DocError> {
        let objects = index_of("object", &self.objects)?;
        let ids: Vec<String> = self.morphisms.iter().map(|m| m.id.clone()).collect();
        let arrows = index_of("morphism", &ids)?;
        let mut src = Vec::with_capacity(ids.len());
        let mut tgt = Vec::with_capacity(ids.len());
        for m in &self.morphisms {
            src.push(look("object", &objects, &m.src)?);
            tgt.push(look("object", &objects, &m.tgt)?);
        }
        let ident = total_map("identity", &self.objects, &self.identity, &objects, &arrows, "morphism")?;
        let compose = self
            .compose
            .iter()
            .map(|[f, g, h]| {
                Ok([
                    look("morphism", &arrows, f)?,
                    look("morphism", &arrows, g)?,
                    look("morphism", &arrows, h)?,
                ])
            })
            .collect::<Result<_, DocError>>()?;
        let inv = match &self.inverse {
            None => None,
            Some(m) => Some(total_map("inverse", &ids, m, &arrows, &arrows, "morphism")?),
        };
        let raw = RawCategory {
            objects: self.objects.clone(),
            morphisms: ids,
            src,
            tgt,
            ident,
            compose,
        };
        Ok((raw, inv))
    }

    pub fn to_category(&self) -> Result<FiniteCategory, LoadError> {
        let (raw, _) = self.to_raw()?;
        Ok(validate_category(raw)?)
    }

    pub fn to_groupoid(&self) -> Result<FiniteGroupoid, LoadError> {
        let (raw, inv) = self.to_raw()?;
        let inv = inv.ok_or_else(|| DocError::Missing {
            what: "inverse table",
            id: "groupoid".to_string(),
        })?;
        Ok(validate_groupoid(validate_category(raw)?, inv)?)
    }
}

fn ids_of(g: &FiniteGroupoid) -> (HashMap<String, usize>, HashMap<String, usize>) {
    let o = g.object_labels().iter().enumerate().map(|(k, s)| (s.clone(), k)).collect();
    let m = g.morphism_labels().iter().enumerate().map(|(k, s)| (s.clone(), k)).collect();
    (o, m)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FunctorDoc {
    pub source: GroupoidDoc,
    pub target: GroupoidDoc,
    pub object_map: BTreeMap<String, String>,
    pub arrow_map: BTreeMap<String, String>,
}

impl FunctorDoc {
    pub fn from_functor(f: &GroupoidFunctor) -> Self {
        let (s, t) = (&f.source, &f.target);
        Self {
            source: GroupoidDoc::from_groupoid(s),
            target: GroupoidDoc::from_groupoid(t),
            object_map: (0..s.num_objects())
                .map(|x| (s.object_label(x).to_string(), t.object_label(f.f0[x]).to_string()))
                .collect(),
            arrow_map: (0..s.num_morphisms())
                .map(|a| (s.morphism_label(a).to_string(), t.morphism_label(f.f1[a]).to_string()))
                .collect(),
        }
    }

    pub fn load(&self) -> Result<GroupoidFunctor, LoadError> {
        let s = Arc::new(self.source.to_groupoid()?);
        let t = Arc::new(self.target.to_groupoid()?);
        functor_between(s, t, &self.object_map, &self.arrow_map)
    }
}

fn functor_between(
    s: Arc<FiniteGroupoid>,
    t: Arc<FiniteGroupoid>,
    objects: &BTreeMap<String, String>,
    arrows: &BTreeMap<String, String>,
) -> Result<GroupoidFunctor, LoadError> {
    let (so, sm) = ids_of(&s);
    let (to, tm) = ids_of(&t);
    let f0 = total_map("object image", s.object_labels(), objects, &so, &to, "object")?;
    let f1 = total_map("arrow image", s.morphism_labels(), arrows, &sm, &tm, "morphism")?;
    GroupoidFunctor::new(s, t, f0, f1).map_err(|e| LoadError::Invalid(e.to_string()))
}

/// Two groupoids on the same object ids and an onto arrow map.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExtensionDoc {
    pub extended: GroupoidDoc,
    pub quotient: GroupoidDoc,
    pub arrow_map: BTreeMap<String, String>,
}

impl ExtensionDoc {
    pub fn from_extension(e: &GroupoidExtension) -> Self {
        let f = FunctorDoc::from_functor(e.functor());
        Self {
            extended: f.source,
            quotient: f.target,
            arrow_map: f.arrow_map,
        }
    }

    pub fn load(&self) -> Result<GroupoidExtension, LoadError> {
        let g = Arc::new(self.extended.to_groupoid()?);
        let h = Arc::new(self.quotient.to_groupoid()?);
        if g.object_labels() != h.object_labels() {
            return Err(LoadError::Invalid(
                "extended and quotient groupoids must list the same objects in the same order".into(),
            ));
        }
        let objects = g.object_labels().iter().map(|x| (x.clone(), x.clone())).collect();
        let f = functor_between(g, h, &objects, &self.arrow_map)?;
        GroupoidExtension::from_functor(f).map_err(|e| LoadError::Invalid(e.to_string()))
    }
}

/// An action block; `act` lists `[point, arrow, result]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ActionBlock {
    pub groupoid: GroupoidDoc,
    pub anchor: BTreeMap<String, String>,
    pub act: Vec<[String; 3]>,
}

impl ActionBlock {
    fn from_action(a: &GroupoidAction) -> Self {
        let g = &a.groupoid;
        let mut act = Vec::new();
        for p in 0..a.len() {
            for &arrow in a.acting_arrows(p) {
                let r = a.apply(p, arrow).expect("acting arrow");
                act.push([a.carrier[p].clone(), g.morphism_label(arrow).to_string(), a.carrier[r].clone()]);
            }
        }
        Self {
            groupoid: GroupoidDoc::from_groupoid(g),
            anchor: (0..a.len())
                .map(|p| (a.carrier[p].clone(), g.object_label(a.anchor[p]).to_string()))
                .collect(),
            act,
        }
    }

    fn load(
        &self,
        side: Side,
        carrier: &[String],
        groupoid: Option<Arc<FiniteGroupoid>>,
    ) -> Result<GroupoidAction, LoadError> {
        let g = match groupoid {
            Some(g) => g,
            None => Arc::new(self.groupoid.to_groupoid()?),
        };
        let points = index_of("point", carrier)?;
        let (objects, arrows) = ids_of(&g);
        let anchor = total_map("anchor", carrier, &self.anchor, &points, &objects, "object")?;
        let triples = self
            .act
            .iter()
            .map(|[p, a, r]| {
                Ok((
                    look("point", &points, p)?,
                    look("morphism", &arrows, a)?,
                    look("point", &points, r)?,
                ))
            })
            .collect::<Result<_, DocError>>()?;
        let spec = ActionSpec {
            side,
            carrier: carrier.to_vec(),
            anchor,
            triples,
        };
        GroupoidAction::validate(g, spec).map_err(|e| LoadError::Invalid(e.to_string()))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ActionDoc {
    pub side: Side,
    pub carrier: Vec<String>,
    pub groupoid: GroupoidDoc,
    pub anchor: BTreeMap<String, String>,
    pub act: Vec<[String; 3]>,
}

impl ActionDoc {
    pub fn load(&self) -> Result<GroupoidAction, LoadError> {
        let block = ActionBlock {
            groupoid: self.groupoid.clone(),
            anchor: self.anchor.clone(),
            act: self.act.clone(),
        };
        block.load(self.side, &self.carrier, None)
    }
}

/// A right principal bundle: a right action plus a projection to `base`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BundleDoc {
    pub carrier: Vec<String>,
    pub groupoid: GroupoidDoc,
    pub anchor: BTreeMap<String, String>,
    pub act: Vec<[String; 3]>,
    pub base: Vec<String>,
    pub proj: BTreeMap<String, String>,
}

impl BundleDoc {
    pub fn from_bundle(b: &PrincipalGroupoidBundle) -> Self {
        let block = ActionBlock::from_action(&b.action);
        Self {
            carrier: b.action.carrier.to_vec(),
            groupoid: block.groupoid,
            anchor: block.anchor,
            act: block.act,
            base: b.base.clone(),
            proj: (0..b.action.len())
                .map(|p| (b.action.carrier[p].clone(), b.base[b.proj[p]].clone()))
                .collect(),
        }
    }

    pub fn load(&self) -> Result<PrincipalGroupoidBundle, LoadError> {
        let block = ActionBlock {
            groupoid: self.groupoid.clone(),
            anchor: self.anchor.clone(),
            act: self.act.clone(),
        };
        let action = block.load(Side::Right, &self.carrier, None)?;
        let points = index_of("point", &self.carrier)?;
        let base = index_of("base point", &self.base)?;
        let proj = total_map("projection", &self.carrier, &self.proj, &points, &base, "base point")?;
        PrincipalGroupoidBundle::validate(action, self.base.clone(), proj)
            .map_err(|e| LoadError::Invalid(e.to_string()))
    }
}

/// Two action blocks on a shared carrier: `left` acts on the left.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BibundleDoc {
    pub carrier: Vec<String>,
    pub left: ActionBlock,
    pub right: ActionBlock,
}

impl BibundleDoc {
    pub fn from_bibundle(b: &Bibundle) -> Self {
        Self {
            carrier: b.left.carrier.to_vec(),
            left: ActionBlock::from_action(&b.left),
            right: ActionBlock::from_action(&b.right),
        }
    }

    pub fn load(&self) -> Result<Bibundle, LoadError> {
        self.load_over(None, None)
    }

    /// Reuses already loaded groupoids when given, so that bibundles read
    /// from separate documents share their middle groupoid.
    pub fn load_over(
        &self,
        left: Option<Arc<FiniteGroupoid>>,
        right: Option<Arc<FiniteGroupoid>>,
    ) -> Result<Bibundle, LoadError> {
        let l = self.left.load(Side::Left, &self.carrier, left)?;
        let r = self.right.load(Side::Right, &self.carrier, right)?;
        Bibundle::validate(l, r).map_err(|e| LoadError::Invalid(e.to_string()))
    }
}

/// A finite category with chosen pullbacks `[f, g, p1, p2]` and covering
/// families of arrow ids per object.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SiteDoc {
    pub objects: Vec<String>,
    pub morphisms: Vec<MorphismDoc>,
    #[serde(default)]
    pub compose: Vec<[String; 3]>,
    pub identity: BTreeMap<String, String>,
    pub pullbacks: Vec<[String; 4]>,
    pub coverings: BTreeMap<String, Vec<Vec<String>>>,
}

impl SiteDoc {
    pub fn from_site(s: &FiniteSite) -> Self {
        let c = &s.category;
        let cat = GroupoidDoc::from_category(c);
        let mut pullbacks: Vec<[String; 4]> = s
            .pullbacks
            .iter()
            .map(|(&(f, g), &(p, q))| {
                [f, g, p, q].map(|a| c.morphism_label(a).to_string())
            })
            .collect();
        pullbacks.sort();
        let coverings = s
            .coverings
            .iter()
            .enumerate()
            .map(|(u, fams)| {
                let fams = fams
                    .iter()
                    .map(|fam| fam.iter().map(|&a| c.morphism_label(a).to_string()).collect())
                    .collect();
                (c.object_label(u).to_string(), fams)
            })
            .collect();
        Self {
            objects: cat.objects,
            morphisms: cat.morphisms,
            compose: cat.compose,
            identity: cat.identity,
            pullbacks,
            coverings,
        }
    }

    /// Reads and validates the category; the topology axioms are checked
    /// separately by [`FiniteSite::validate`].
    pub fn load(&self) -> Result<FiniteSite, LoadError> {
        let category = GroupoidDoc {
            objects: self.objects.clone(),
            morphisms: self.morphisms.clone(),
            compose: self.compose.clone(),
            identity: self.identity.clone(),
            inverse: None,
        }
        .to_category()?;
        let arrows: HashMap<String, usize> = category
            .morphism_labels()
            .iter()
            .enumerate()
            .map(|(k, s)| (s.clone(), k))
            .collect();
        let objects: HashMap<String, usize> = category
            .object_labels()
            .iter()
            .enumerate()
            .map(|(k, s)| (s.clone(), k))
            .collect();
        let mut pullbacks = HashMap::new();
        for row in &self.pullbacks {
            let [f, g, p, q] = row.clone().map(|a| look("morphism", &arrows, &a));
            pullbacks.insert((f?, g?), (p?, q?));
        }
        let mut coverings = vec![Vec::new(); category.num_objects()];
        for (u, fams) in &self.coverings {
            let u = look("object", &objects, u)?;
            for fam in fams {
                let fam = fam
                    .iter()
                    .map(|a| look("morphism", &arrows, a))
                    .collect::<Result<Vec<_>, _>>()?;
                coverings[u].push(fam);
            }
        }
        Ok(FiniteSite {
            category,
            pullbacks,
            coverings,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PresheafKind {
    /// bundles for the groupoid, in normal form
    Bg,
    /// the groupoid itself over every nonempty set
    Constant,
}

/// A covering of `0..base` by maps listed as their value arrays.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DescentDoc {
    pub groupoid: GroupoidDoc,
    pub presheaf: PresheafKind,
    pub base: usize,
    pub cover: Vec<Vec<usize>>,
}

impl DescentDoc {
    pub fn covering(&self) -> Result<Covering, DocError> {
        for (k, m) in self.cover.iter().enumerate() {
            if let Some(&x) = m.iter().find(|&&x| x >= self.base) {
                return Err(DocError::Other(format!(
                    "cover map {k} sends a point to {x}, outside 0..{}",
                    self.base
                )));
            }
        }
        Ok(Covering::by_parts(self.base, &self.cover))
    }
}

/// Dimensions per object id and matrices per arrow id.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VectorBundleDoc {
    pub dims: BTreeMap<String, usize>,
    pub mats: BTreeMap<String, QMatrix>,
}

impl VectorBundleDoc {
    pub fn from_bundle(b: &GroupoidVectorBundle) -> Self {
        let g = b.groupoid();
        Self {
            dims: (0..g.num_objects()).map(|x| (g.object_label(x).to_string(), b.dim(x))).collect(),
            mats: (0..g.num_morphisms())
                .map(|a| (g.morphism_label(a).to_string(), b.mat(a).clone()))
                .collect(),
        }
    }

    pub fn load(&self, g: &Arc<FiniteGroupoid>) -> Result<GroupoidVectorBundle, LoadError> {
        let dims = per_id("dimension", g.object_labels(), &self.dims)?;
        let mats = per_id("matrix", g.morphism_labels(), &self.mats)?;
        GroupoidVectorBundle::validate(g.clone(), dims, mats).map_err(|e| LoadError::Invalid(e.to_string()))
    }
}

fn per_id<T: Clone>(what: &'static str, ids: &[String], m: &BTreeMap<String, T>) -> Result<Vec<T>, DocError> {
    let known = index_of("id", ids)?;
    for key in m.keys() {
        look(what, &known, key)?;
    }
    ids.iter()
        .map(|id| {
            m.get(id).cloned().ok_or_else(|| DocError::Missing {
                what,
                id: id.clone(),
            })
        })
        .collect()
}

/// `0 → a -j→ b -q→ c → 0` with `j`, `q` given per object id.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SesDoc {
    pub groupoid: GroupoidDoc,
    pub a: VectorBundleDoc,
    pub b: VectorBundleDoc,
    pub c: VectorBundleDoc,
    pub j: BTreeMap<String, QMatrix>,
    pub q: BTreeMap<String, QMatrix>,
}

impl SesDoc {
    pub fn from_ses(s: &BundleSES) -> Self {
        let g = s.b.groupoid();
        let per_object = |m: &[QMatrix]| {
            (0..g.num_objects())
                .map(|x| (g.object_label(x).to_string(), m[x].clone()))
                .collect()
        };
        Self {
            groupoid: GroupoidDoc::from_groupoid(g),
            a: VectorBundleDoc::from_bundle(&s.a),
            b: VectorBundleDoc::from_bundle(&s.b),
            c: VectorBundleDoc::from_bundle(&s.c),
            j: per_object(&s.j),
            q: per_object(&s.q),
        }
    }

    pub fn load(&self) -> Result<BundleSES, LoadError> {
        let g = Arc::new(self.groupoid.to_groupoid()?);
        let (a, b, c) = (self.a.load(&g)?, self.b.load(&g)?, self.c.load(&g)?);
        let j = per_id("j", g.object_labels(), &self.j)?;
        let q = per_id("q", g.object_labels(), &self.q)?;
        BundleSES::validate(a, b, c, j, q).map_err(|e| LoadError::Invalid(e.to_string()))
    }
}

/// Per-object splitting matrices keyed by object id.
pub fn splitting_doc(g: &FiniteGroupoid, r: &[QMatrix]) -> BTreeMap<String, QMatrix> {
    (0..g.num_objects())
        .map(|x| (g.object_label(x).to_string(), r[x].clone()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::FiniteGroup;

    #[test]
    fn groupoid_round_trip() {
        let g = FiniteGroupoid::product(
            &FiniteGroupoid::pair(2),
            &FiniteGroupoid::group(&FiniteGroup::cyclic(2)),
        );
        let doc = GroupoidDoc::from_groupoid(&g);
        let text = serde_json::to_string(&doc).unwrap();
        let back: GroupoidDoc = serde_json::from_str(&text).unwrap();
        assert_eq!(back.to_groupoid().unwrap(), g);
    }

    #[test]
    fn unknown_fields_and_ids_are_rejected() {
        let text = r#"{"objects":["a"],"morphisms":[{"id":"1","src":"a","tgt":"a"}],
            "identity":{"a":"1"},"inverse":{"1":"1"},"extra":0}"#;
        assert!(serde_json::from_str::<GroupoidDoc>(text).is_err());
        let text = r#"{"objects":["a"],"morphisms":[{"id":"1","src":"a","tgt":"b"}],
            "identity":{"a":"1"},"inverse":{"1":"1"}}"#;
        let doc: GroupoidDoc = serde_json::from_str(text).unwrap();
        assert!(matches!(doc.to_raw(), Err(DocError::Unknown { .. })));
    }

    #[test]
    fn missing_composite_is_a_validation_error() {
        let text = r#"{"objects":["a"],"morphisms":[{"id":"1","src":"a","tgt":"a"}],
            "identity":{"a":"1"},"inverse":{"1":"1"}}"#;
        let doc: GroupoidDoc = serde_json::from_str(text).unwrap();
        assert!(matches!(doc.to_groupoid(), Err(LoadError::Category(_))));
    }

    #[test]
    fn site_round_trip() {
        let site = FiniteSite::subsets(2, true);
        let doc = SiteDoc::from_site(&site);
        let back = doc.load().unwrap();
        back.validate().unwrap();
        assert_eq!(back.pullbacks, site.pullbacks);
    }
}
