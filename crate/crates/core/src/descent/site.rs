//! Finite sets, pullbacks of finite sets, coverings, and Grothendieck
//! topologies on small finite categories.

use std::collections::{HashMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::category::FiniteCategory;

/// A function `0..domain → 0..codomain`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SetMap {
    pub domain: usize,
    pub codomain: usize,
    pub map: Vec<usize>,
}

impl SetMap {
    pub fn new(codomain: usize, map: Vec<usize>) -> Self {
        assert!(map.iter().all(|&x| x < codomain), "map leaves its codomain");
        Self {
            domain: map.len(),
            codomain,
            map,
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::new(n, (0..n).collect())
    }

    /// `g ∘ self`.
    pub fn then(&self, g: &SetMap) -> SetMap {
        assert_eq!(self.codomain, g.domain, "maps are not composable");
        SetMap::new(g.codomain, self.map.iter().map(|&x| g.map[x]).collect())
    }

    pub fn is_bijective(&self) -> bool {
        if self.domain != self.codomain {
            return false;
        }
        let mut hit = vec![false; self.codomain];
        self.map.iter().all(|&x| !std::mem::replace(&mut hit[x], true))
    }
}

/// `A ×_C B = {(a, b) : f(a) = g(b)}` in lexicographic order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SetPullback {
    pub pairs: Vec<(usize, usize)>,
    pub p1: SetMap,
    pub p2: SetMap,
}

impl SetPullback {
    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn index(&self, pair: (usize, usize)) -> Option<usize> {
        self.pairs.binary_search(&pair).ok()
    }
}

pub fn set_pullback(f: &SetMap, g: &SetMap) -> SetPullback {
    assert_eq!(f.codomain, g.codomain, "maps into different sets");
    let mut pairs = Vec::new();
    for a in 0..f.domain {
        for b in 0..g.domain {
            if f.map[a] == g.map[b] {
                pairs.push((a, b));
            }
        }
    }
    let p1 = SetMap::new(f.domain, pairs.iter().map(|p| p.0).collect());
    let p2 = SetMap::new(g.domain, pairs.iter().map(|p| p.1).collect());
    SetPullback { pairs, p1, p2 }
}

/// A family of maps into `0..base`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Covering {
    pub base: usize,
    pub maps: Vec<SetMap>,
}

impl Covering {
    pub fn new(base: usize, maps: Vec<SetMap>) -> Self {
        assert!(maps.iter().all(|m| m.codomain == base), "map into another set");
        Self { base, maps }
    }

    /// Inclusions of the given subsets, each listed in the given order.
    pub fn by_parts(base: usize, parts: &[Vec<usize>]) -> Self {
        Self::new(
            base,
            parts.iter().map(|p| SetMap::new(base, p.clone())).collect(),
        )
    }

    pub fn identity(base: usize) -> Self {
        Self::new(base, vec![SetMap::identity(base)])
    }

    /// Every point of the base is hit by some map.
    pub fn is_jointly_surjective(&self) -> bool {
        let mut hit = vec![false; self.base];
        for m in &self.maps {
            for &x in &m.map {
                hit[x] = true;
            }
        }
        hit.into_iter().all(|b| b)
    }
}

/// All partitions of `0..n` into at most `max_blocks` nonempty blocks, each
/// block ascending, blocks ordered by smallest element.
pub fn partitions(n: usize, max_blocks: usize) -> Vec<Vec<Vec<usize>>> {
    fn rec(k: usize, n: usize, max: usize, cur: &mut Vec<Vec<usize>>, out: &mut Vec<Vec<Vec<usize>>>) {
        if k == n {
            out.push(cur.clone());
            return;
        }
        for b in 0..cur.len() {
            cur[b].push(k);
            rec(k + 1, n, max, cur, out);
            cur[b].pop();
        }
        if cur.len() < max {
            cur.push(vec![k]);
            rec(k + 1, n, max, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, max_blocks, &mut Vec::new(), &mut out);
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum SiteViolation {
    #[error("object {object} has {arrows} incoming arrows; at most 64 are supported")]
    TooLarge { object: usize, arrows: usize },
    #[error("no chosen pullback of ({f}, {g})")]
    MissingPullback { f: usize, g: usize },
    #[error("chosen pullback of ({f}, {g}) does not form a commuting square")]
    BadPullback { f: usize, g: usize },
    #[error("covering family {family:?} of {object} is not made of arrows into it")]
    MalformedCovering { object: usize, family: Vec<usize> },
    #[error("isomorphism {arrow} into {object} is not a covering")]
    IsoCoveringMissing { object: usize, arrow: usize },
    #[error("composite family {family:?} of {object} is not a covering")]
    CompositionNotCovering { object: usize, family: Vec<usize> },
    #[error("pullback of a covering of {object} along arrow {along} gives non-covering {family:?}")]
    PullbackNotCovering {
        object: usize,
        along: usize,
        family: Vec<usize>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub struct SiteReport {
    pub violations: Vec<SiteViolation>,
}

impl fmt::Display for SiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} site violation(s)", self.violations.len())?;
        for v in &self.violations {
            write!(f, "\n  {v}")?;
        }
        Ok(())
    }
}

/// A finite category with chosen pullbacks and, for each object, its
/// covering families as sets of incoming arrows.
#[derive(Clone, Debug)]
pub struct FiniteSite {
    pub category: FiniteCategory,
    /// `(f, g) ↦ (p₁, p₂)` with `p₁ then f = p₂ then g`.
    pub pullbacks: HashMap<(usize, usize), (usize, usize)>,
    pub coverings: Vec<Vec<Vec<usize>>>,
}

fn mask(arrows: &[usize], pos: &HashMap<usize, usize>) -> u64 {
    arrows.iter().fold(0, |m, a| m | 1 << pos[a])
}

impl FiniteSite {
    /// Checks the three topology axioms. Composites are explored with a
    /// dynamic program over sets of arrows, so every refinement choice is
    /// covered without enumerating the product of choices.
    pub fn validate(&self) -> Result<(), SiteReport> {
        let c = &self.category;
        let n = c.num_objects();
        let mut violations = Vec::new();
        for u in 0..n {
            if c.in_arrows(u).len() > 64 {
                violations.push(SiteViolation::TooLarge {
                    object: u,
                    arrows: c.in_arrows(u).len(),
                });
            }
        }
        if !violations.is_empty() {
            return Err(SiteReport { violations });
        }
        let pos: Vec<HashMap<usize, usize>> = (0..n)
            .map(|u| c.in_arrows(u).iter().enumerate().map(|(k, &a)| (a, k)).collect())
            .collect();
        let mut covers: Vec<HashSet<u64>> = vec![HashSet::new(); n];
        for (u, fams) in self.coverings.iter().enumerate() {
            for fam in fams {
                if fam.iter().any(|&a| a >= c.num_morphisms() || c.tgt(a) != u) {
                    violations.push(SiteViolation::MalformedCovering {
                        object: u,
                        family: fam.clone(),
                    });
                    continue;
                }
                covers[u].insert(mask(fam, &pos[u]));
            }
        }
        for f in 0..c.num_morphisms() {
            for g in 0..c.num_morphisms() {
                if c.tgt(f) != c.tgt(g) {
                    continue;
                }
                match self.pullbacks.get(&(f, g)) {
                    None => violations.push(SiteViolation::MissingPullback { f, g }),
                    Some(&(p1, p2)) => {
                        let ok = c.src(p1) == c.src(p2)
                            && c.tgt(p1) == c.src(f)
                            && c.tgt(p2) == c.src(g)
                            && c.then(p1, f) == c.then(p2, g);
                        if !ok {
                            violations.push(SiteViolation::BadPullback { f, g });
                        }
                    }
                }
            }
        }
        if !violations.is_empty() {
            return Err(SiteReport { violations });
        }
        let is_iso = |a: usize| {
            c.out_arrows(c.tgt(a)).iter().any(|&b| {
                c.tgt(b) == c.src(a)
                    && c.then(a, b) == c.ident(c.src(a))
                    && c.then(b, a) == c.ident(c.tgt(a))
            })
        };
        for a in 0..c.num_morphisms() {
            let u = c.tgt(a);
            if is_iso(a) && !covers[u].contains(&mask(&[a], &pos[u])) {
                violations.push(SiteViolation::IsoCoveringMissing { object: u, arrow: a });
            }
        }
        for u in 0..n {
            for fam in &self.coverings[u] {
                // reachable composite families, as masks of arrows into u
                let mut reach: HashSet<u64> = HashSet::from([0]);
                for &f in fam {
                    let options: HashSet<u64> = self.coverings[c.src(f)]
                        .iter()
                        .map(|r| {
                            let comp: Vec<usize> = r.iter().map(|&g| c.then(g, f)).collect();
                            mask(&comp, &pos[u])
                        })
                        .collect();
                    reach = reach
                        .iter()
                        .flat_map(|&a| options.iter().map(move |&b| a | b))
                        .collect();
                }
                let mut bad: Vec<u64> = reach.difference(&covers[u]).copied().collect();
                bad.sort_unstable();
                if let Some(&m) = bad.first() {
                    let family = c.in_arrows(u)
                        .iter()
                        .enumerate()
                        .filter(|(k, _)| m >> k & 1 == 1)
                        .map(|(_, &a)| a)
                        .collect();
                    violations.push(SiteViolation::CompositionNotCovering { object: u, family });
                }
                for &along in c.in_arrows(u) {
                    let v = c.src(along);
                    let mut pulled: Vec<usize> =
                        fam.iter().map(|&f| self.pullbacks[&(f, along)].1).collect();
                    pulled.sort_unstable();
                    pulled.dedup();
                    if !covers[v].contains(&mask(&pulled, &pos[v])) {
                        violations.push(SiteViolation::PullbackNotCovering {
                            object: u,
                            along,
                            family: pulled,
                        });
                    }
                }
            }
        }
        if violations.is_empty() {
            Ok(())
        } else {
            Err(SiteReport { violations })
        }
    }

    /// Subsets of `0..n` ordered by inclusion, pullback = intersection.
    /// With `union_covers`, families whose union is the target are coverings;
    /// otherwise only the identity arrows cover.
    pub fn subsets(n: usize, union_covers: bool) -> Self {
        let objects: Vec<u32> = (0..1u32 << n).collect();
        let mut src = Vec::new();
        let mut tgt = Vec::new();
        let mut labels = Vec::new();
        let mut arrow_of: HashMap<(u32, u32), usize> = HashMap::new();
        for &a in &objects {
            for &b in &objects {
                if a & b == a {
                    arrow_of.insert((a, b), src.len());
                    src.push(a as usize);
                    tgt.push(b as usize);
                    labels.push(format!("{a:b}⊆{b:b}"));
                }
            }
        }
        let ident = objects.iter().map(|&a| arrow_of[&(a, a)]).collect();
        let arrows: Vec<(u32, u32)> = src.iter().zip(&tgt).map(|(&a, &b)| (a as u32, b as u32)).collect();
        let lookup = arrow_of.clone();
        let category = FiniteCategory::from_rule(
            objects.iter().map(|a| format!("{a:b}")).collect(),
            labels,
            src,
            tgt,
            ident,
            std::sync::Arc::new(move |f, g| lookup[&(arrows[f].0, arrows[g].1)]),
        );
        let mut pullbacks = HashMap::new();
        for (&(a, c), &f) in &arrow_of {
            for (&(b, c2), &g) in &arrow_of {
                if c == c2 {
                    let p = a & b;
                    pullbacks.insert((f, g), (arrow_of[&(p, a)], arrow_of[&(p, b)]));
                }
            }
        }
        let coverings = objects
            .iter()
            .map(|&u| {
                let into: Vec<usize> = category.in_arrows(u as usize).to_vec();
                if !union_covers {
                    return vec![vec![arrow_of[&(u, u)]]];
                }
                let mut fams = Vec::new();
                for m in 0u64..1 << into.len() {
                    let fam: Vec<usize> = (0..into.len())
                        .filter(|k| m >> k & 1 == 1)
                        .map(|k| into[k])
                        .collect();
                    let union = fam.iter().fold(0u32, |acc, &f| acc | category.src(f) as u32);
                    if union == u {
                        fams.push(fam);
                    }
                }
                fams
            })
            .collect();
        Self {
            category,
            pullbacks,
            coverings,
        }
    }
}
