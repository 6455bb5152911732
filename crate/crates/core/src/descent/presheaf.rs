//! Presheaves of groupoids on finite sets, given as pseudo-functors: a
//! groupoid of sections per set size, a restriction functor per map, and
//! invertible 2-cells `ε_U: (1_U)* ⇒ 1` and `α_{f,g}: f* g* ⇒ (g∘f)*`.

use std::sync::{Arc, OnceLock};

use thiserror::Error;

use super::site::SetMap;
use crate::functor::{compose_functors, GroupoidFunctor, NatTransform};
use crate::groupoid::FiniteGroupoid;

pub trait GroupoidPresheaf: Send + Sync {
    /// Largest set size whose sections may be requested.
    fn max_size(&self) -> usize;

    fn sections(&self, n: usize) -> Arc<FiniteGroupoid>;

    /// `f*: F(codomain) → F(domain)`.
    fn restrict(&self, f: &SetMap) -> GroupoidFunctor;

    /// `ε_U: (1_U)* ⇒ 1` on `F(U)`.
    fn unit(&self, n: usize) -> NatTransform;

    /// `α_{f,g}: f* g* ⇒ (g∘f)*` on `F(W)` for `f: U → V`, `g: V → W`.
    fn comparison(&self, f: &SetMap, g: &SetMap) -> NatTransform;
}

fn digits(mut x: usize, base: usize, k: usize) -> Vec<usize> {
    let mut d = vec![0; k];
    for slot in d.iter_mut().rev() {
        *slot = x % base;
        x /= base;
    }
    d
}

fn encode(d: impl IntoIterator<Item = usize>, base: usize) -> usize {
    d.into_iter().fold(0, |acc, x| acc * base + x)
}

/// Central data for twisting: a natural automorphism `ζ` of the identity
/// functor of the base groupoid, one loop per object.
#[derive(Clone, Debug)]
struct Twist {
    /// `powers[x][e] = ζ_x^e`
    powers: Vec<Vec<usize>>,
}

impl Twist {
    fn order(&self) -> usize {
        self.powers.first().map_or(1, |p| p.len())
    }

    /// Exponent of the chosen cell `λ_f` at the point `u` of its domain.
    fn exponent(&self, f: &SetMap, u: usize) -> usize {
        let sum: usize = f.map.iter().sum();
        (sum + u * (f.domain + 1) + f.codomain) % self.order()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum TwistError {
    #[error("expected one loop per object")]
    Length,
    #[error("arrow {0} is not a loop")]
    NotLoop(usize),
    #[error("not natural at arrow {0}")]
    NotNatural(usize),
}

/// Bundles over finite sets for a groupoid `𝒢`, in normal form: a bundle
/// over `U` is determined up to unique isomorphism by the map `U → 𝒢₀`
/// classifying its fibres, so `F(U) = 𝒢^U` and `f*` is precomposition.
/// In this normal form the canonical isomorphisms between iterated
/// pullbacks are identities.
///
/// A twisted variant keeps the same sections and restrictions and replaces
/// the 2-cells by `λ`-conjugates built from a central automorphism, which
/// gives an equivalent pseudo-functor with non-identity `α` and `ε`.
pub struct BgPresheaf {
    base: Arc<FiniteGroupoid>,
    cap: usize,
    twist: Option<Twist>,
    cache: Vec<OnceLock<Arc<FiniteGroupoid>>>,
}

impl BgPresheaf {
    pub fn new(base: Arc<FiniteGroupoid>, cap: usize) -> Self {
        Self {
            base,
            cap,
            twist: None,
            cache: (0..=cap).map(|_| OnceLock::new()).collect(),
        }
    }

    /// `zeta[x]` is a loop at `x`; the family must commute with every arrow.
    pub fn twisted(base: Arc<FiniteGroupoid>, zeta: Vec<usize>, cap: usize) -> Result<Self, TwistError> {
        let g = &base;
        if zeta.len() != g.num_objects() {
            return Err(TwistError::Length);
        }
        for (x, &z) in zeta.iter().enumerate() {
            if g.src(z) != x || g.tgt(z) != x {
                return Err(TwistError::NotLoop(z));
            }
        }
        for a in 0..g.num_morphisms() {
            if g.then(a, zeta[g.tgt(a)]) != g.then(zeta[g.src(a)], a) {
                return Err(TwistError::NotNatural(a));
            }
        }
        let mut order = 1;
        while (0..g.num_objects()).any(|x| {
            (0..order).fold(g.ident(x), |acc, _| g.then(acc, zeta[x])) != g.ident(x)
        }) {
            order += 1;
        }
        let powers = (0..g.num_objects())
            .map(|x| {
                let mut p = vec![g.ident(x)];
                for e in 1..order {
                    p.push(g.then(p[e - 1], zeta[x]));
                }
                p
            })
            .collect();
        let mut p = Self::new(base, cap);
        p.twist = Some(Twist { powers });
        Ok(p)
    }

    pub fn base(&self) -> &Arc<FiniteGroupoid> {
        &self.base
    }

    /// The arrow of `F(n)` at object `c` whose digit at `u` is `ζ^{e(u)}`.
    fn central_arrow(&self, n: usize, c: usize, exps: &[usize]) -> usize {
        let twist = self.twist.as_ref().expect("twisted presheaf");
        let (no, nm) = (self.base.num_objects(), self.base.num_morphisms());
        let c = digits(c, no, n);
        encode(
            (0..n).map(|u| twist.powers[c[u]][exps[u] % twist.order()]),
            nm,
        )
    }
}

impl GroupoidPresheaf for BgPresheaf {
    fn max_size(&self) -> usize {
        self.cap
    }

    fn sections(&self, n: usize) -> Arc<FiniteGroupoid> {
        assert!(n <= self.cap, "set of size {n} exceeds cap {}", self.cap);
        self.cache[n]
            .get_or_init(|| Arc::new(self.base.power(n)))
            .clone()
    }

    fn restrict(&self, f: &SetMap) -> GroupoidFunctor {
        let (from, to) = (self.sections(f.codomain), self.sections(f.domain));
        let (no, nm) = (self.base.num_objects(), self.base.num_morphisms());
        let pull = |x: usize, base: usize| {
            let d = digits(x, base, f.codomain);
            encode(f.map.iter().map(|&v| d[v]), base)
        };
        let f0 = (0..from.num_objects()).map(|x| pull(x, no)).collect();
        let f1 = (0..from.num_morphisms()).map(|x| pull(x, nm)).collect();
        GroupoidFunctor::unchecked(from, to, f0, f1)
    }

    fn unit(&self, n: usize) -> NatTransform {
        let id = self.restrict(&SetMap::identity(n));
        match &self.twist {
            None => NatTransform::identity(&id),
            Some(t) => {
                let exps: Vec<usize> = (0..n).map(|u| t.exponent(&SetMap::identity(n), u)).collect();
                let eta = (0..id.source.num_objects())
                    .map(|c| self.central_arrow(n, c, &exps))
                    .collect();
                NatTransform {
                    source: id.clone(),
                    target: GroupoidFunctor::identity(id.source.clone()),
                    eta,
                }
            }
        }
    }

    fn comparison(&self, f: &SetMap, g: &SetMap) -> NatTransform {
        let gf = f.then(g);
        let source = compose_functors(&self.restrict(g), &self.restrict(f)).expect("composable");
        let target = self.restrict(&gf);
        match &self.twist {
            None => NatTransform {
                eta: target.f0.iter().map(|&x| target.target.ident(x)).collect(),
                source,
                target,
            },
            Some(t) => {
                let r = t.order();
                let exps: Vec<usize> = (0..f.domain)
                    .map(|u| t.exponent(f, u) + t.exponent(g, f.map[u]) + r - t.exponent(&gf, u))
                    .collect();
                let eta = target
                    .f0
                    .iter()
                    .map(|&c| self.central_arrow(f.domain, c, &exps))
                    .collect();
                NatTransform { source, target, eta }
            }
        }
    }
}

/// The same groupoid over every nonempty set and the terminal groupoid over
/// the empty set, with identity restrictions. Sections are not local, so
/// this fails the stack condition as soon as the fibre has two objects.
pub struct ConstantPresheaf {
    fiber: Arc<FiniteGroupoid>,
    point: Arc<FiniteGroupoid>,
    cap: usize,
}

impl ConstantPresheaf {
    pub fn new(fiber: Arc<FiniteGroupoid>, cap: usize) -> Self {
        Self {
            fiber,
            point: Arc::new(FiniteGroupoid::discrete(1)),
            cap,
        }
    }
}

impl GroupoidPresheaf for ConstantPresheaf {
    fn max_size(&self) -> usize {
        self.cap
    }

    fn sections(&self, n: usize) -> Arc<FiniteGroupoid> {
        if n == 0 {
            self.point.clone()
        } else {
            self.fiber.clone()
        }
    }

    fn restrict(&self, f: &SetMap) -> GroupoidFunctor {
        let (from, to) = (self.sections(f.codomain), self.sections(f.domain));
        if f.domain == 0 {
            let (n, m) = (from.num_objects(), from.num_morphisms());
            GroupoidFunctor::unchecked(from, to, vec![0; n], vec![0; m])
        } else {
            GroupoidFunctor::identity(from)
        }
    }

    fn unit(&self, n: usize) -> NatTransform {
        NatTransform::identity(&self.restrict(&SetMap::identity(n)))
    }

    fn comparison(&self, f: &SetMap, g: &SetMap) -> NatTransform {
        let source = compose_functors(&self.restrict(g), &self.restrict(f)).expect("composable");
        let target = self.restrict(&f.then(g));
        NatTransform {
            eta: target.f0.iter().map(|&x| target.target.ident(x)).collect(),
            source,
            target,
        }
    }
}

/// All maps `0..m → 0..n`.
pub fn all_maps(m: usize, n: usize) -> Vec<SetMap> {
    if n == 0 {
        return if m == 0 { vec![SetMap::identity(0)] } else { Vec::new() };
    }
    (0..n.pow(m as u32))
        .map(|x| SetMap::new(n, digits(x, n, m)))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum CoherenceViolation {
    #[error("a 2-cell has the wrong boundary")]
    Boundary,
    #[error("left unit law fails for {f:?} at object {object}")]
    LeftUnit { f: SetMap, object: usize },
    #[error("right unit law fails for {f:?} at object {object}")]
    RightUnit { f: SetMap, object: usize },
    #[error("associativity fails for {f:?}, {g:?}, {h:?} at object {object}")]
    Associativity {
        f: SetMap,
        g: SetMap,
        h: SetMap,
        object: usize,
    },
}

/// Checks the unit and associativity coherence of the 2-cells over all maps
/// between sets of size at most `max`.
pub fn check_coherence(p: &dyn GroupoidPresheaf, max: usize) -> Result<(), CoherenceViolation> {
    let max = max.min(p.max_size());
    let check = |t: &NatTransform| -> Result<(), CoherenceViolation> {
        NatTransform::new(t.source.clone(), t.target.clone(), t.eta.clone())
            .map(|_| ())
            .map_err(|_| CoherenceViolation::Boundary)
    };
    for n in 0..=max {
        check(&p.unit(n))?;
    }
    for u in 0..=max {
        for v in 0..=max {
            for f in all_maps(u, v) {
                let fs = p.restrict(&f);
                let eps_v = p.unit(v);
                let eps_u = p.unit(u);
                let right = p.comparison(&f, &SetMap::identity(v));
                let left = p.comparison(&SetMap::identity(u), &f);
                check(&right)?;
                check(&left)?;
                for eta in 0..fs.source.num_objects() {
                    if right.eta[eta] != fs.f1[eps_v.eta[eta]] {
                        return Err(CoherenceViolation::RightUnit { f, object: eta });
                    }
                    if left.eta[eta] != eps_u.eta[fs.f0[eta]] {
                        return Err(CoherenceViolation::LeftUnit { f, object: eta });
                    }
                }
                for w in 0..=max {
                    for g in all_maps(v, w) {
                        let a_fg = p.comparison(&f, &g);
                        let gf = f.then(&g);
                        for x in 0..=max {
                            for h in all_maps(w, x) {
                                let hs = p.restrict(&h);
                                let a_gf_h = p.comparison(&gf, &h);
                                let a_gh = p.comparison(&g, &h);
                                let a_f_hg = p.comparison(&f, &g.then(&h));
                                let fu = &*a_gf_h.target.target;
                                for eta in 0..hs.source.num_objects() {
                                    let l = fu.then(a_fg.eta[hs.f0[eta]], a_gf_h.eta[eta]);
                                    let r = fu.then(fs.f1[a_gh.eta[eta]], a_f_hg.eta[eta]);
                                    if l != r {
                                        return Err(CoherenceViolation::Associativity {
                                            f,
                                            g,
                                            h,
                                            object: eta,
                                        });
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::FiniteGroup;

    fn z(n: usize) -> Arc<FiniteGroupoid> {
        Arc::new(FiniteGroupoid::group(&FiniteGroup::cyclic(n)))
    }

    #[test]
    fn strict_and_twisted_are_coherent() {
        check_coherence(&BgPresheaf::new(z(2), 3), 2).unwrap();
        check_coherence(&BgPresheaf::new(Arc::new(FiniteGroupoid::pair(2)), 3), 2).unwrap();
        let twisted = BgPresheaf::twisted(z(4), vec![2], 3).unwrap();
        assert!(twisted.unit(2).eta.iter().any(|&a| !twisted.sections(2).is_identity(a)));
        check_coherence(&twisted, 2).unwrap();
        check_coherence(&ConstantPresheaf::new(Arc::new(FiniteGroupoid::discrete(2)), 3), 2)
            .unwrap();
    }

    #[test]
    fn non_central_twist_is_rejected() {
        let s3 = Arc::new(FiniteGroupoid::group(&FiniteGroup::symmetric(3)));
        let loops: Vec<usize> = (1..6).collect();
        for z in loops {
            assert!(BgPresheaf::twisted(s3.clone(), vec![z], 2).is_err());
        }
    }

    #[test]
    fn restriction_permutes_digits() {
        let p = BgPresheaf::new(Arc::new(FiniteGroupoid::discrete(3)), 3);
        let swap = SetMap::new(2, vec![1, 0]);
        let r = p.restrict(&swap);
        // [0,2] = 2 ↦ [2,0] = 6
        assert_eq!(r.f0[2], 6);
        let drop = SetMap::new(2, vec![1]);
        assert_eq!(p.restrict(&drop).f0[5], 2);
    }
}
