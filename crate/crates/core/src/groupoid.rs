//! Finite groupoids and the standard constructions.

use std::ops::Deref;
use std::sync::Arc;

use thiserror::Error;

use crate::category::{
    validate_category, FiniteCategory, InverseLaw, RawCategory, ValidationReport, Violation,
};
use crate::group::FiniteGroup;
use crate::union_find::UnionFind;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroupoid {
    cat: FiniteCategory,
    inv: Vec<usize>,
}

impl Deref for FiniteGroupoid {
    type Target = FiniteCategory;

    fn deref(&self) -> &FiniteCategory {
        &self.cat
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ActionError {
    #[error("action table is {rows}x{cols}, expected {points}x{order}")]
    Shape {
        rows: usize,
        cols: usize,
        points: usize,
        order: usize,
    },
    #[error("point {point} acted on by {g} lands outside the set")]
    OutOfRange { point: usize, g: usize },
    #[error("identity law fails at point {point}")]
    Identity { point: usize },
    #[error("(p·{g})·{h} ≠ p·({g}{h}) at p = {point}")]
    Compatibility { point: usize, g: usize, h: usize },
}

/// One connected component with the isotropy group at its smallest object.
#[derive(Clone, Debug)]
pub struct Component {
    pub objects: Vec<usize>,
    pub rep: usize,
    pub isotropy: FiniteGroup,
    /// `arrows[k]` is the loop at `rep` standing for group element `k`.
    pub arrows: Vec<usize>,
}

/// Checks the inverse axioms on top of a validated category.
pub fn validate_groupoid(
    cat: FiniteCategory,
    inv: Vec<usize>,
) -> Result<FiniteGroupoid, ValidationReport> {
    let n = cat.num_morphisms();
    let mut violations = Vec::new();
    if inv.len() != n {
        violations.push(Violation::TableLength {
            table: "inverse",
            expected: n,
            found: inv.len(),
        });
    }
    for (entry, &value) in inv.iter().enumerate() {
        if value >= n {
            violations.push(Violation::DanglingIndex {
                table: "inverse",
                entry,
                value,
            });
        }
    }
    if !violations.is_empty() {
        return Err(ValidationReport { violations });
    }
    for (g, &h) in inv.iter().enumerate() {
        if cat.src(h) != cat.tgt(g) || cat.tgt(h) != cat.src(g) {
            violations.push(Violation::NotInvertible {
                morphism: g,
                law: InverseLaw::Endpoints,
            });
            continue;
        }
        if cat.then(g, h) != cat.ident(cat.src(g)) {
            violations.push(Violation::NotInvertible {
                morphism: g,
                law: InverseLaw::Left,
            });
        }
        if cat.then(h, g) != cat.ident(cat.tgt(g)) {
            violations.push(Violation::NotInvertible {
                morphism: g,
                law: InverseLaw::Right,
            });
        }
    }
    if violations.is_empty() {
        Ok(FiniteGroupoid { cat, inv })
    } else {
        Err(ValidationReport { violations })
    }
}

fn indexed(n: usize) -> Vec<String> {
    (0..n).map(|i| i.to_string()).collect()
}

impl FiniteGroupoid {
    /// Validates raw tables as a category and then as a groupoid.
    pub fn from_raw(raw: RawCategory, inv: Vec<usize>) -> Result<Self, ValidationReport> {
        validate_groupoid(validate_category(raw)?, inv)
    }

    /// Trusted assembly used by the constructions in this crate.
    pub(crate) fn assemble(
        objects: Vec<String>,
        morphisms: Vec<String>,
        src: Vec<usize>,
        tgt: Vec<usize>,
        ident: Vec<usize>,
        inv: Vec<usize>,
        rule: impl Fn(usize, usize) -> usize + Send + Sync + 'static,
    ) -> Self {
        let cat = FiniteCategory::from_rule(objects, morphisms, src, tgt, ident, Arc::new(rule));
        Self { cat, inv }
    }

    /// As [`FiniteGroupoid::assemble`], composing on demand.
    pub(crate) fn assemble_lazy(
        objects: Vec<String>,
        morphisms: Vec<String>,
        src: Vec<usize>,
        tgt: Vec<usize>,
        ident: Vec<usize>,
        inv: Vec<usize>,
        rule: impl Fn(usize, usize) -> usize + Send + Sync + 'static,
    ) -> Self {
        let cat =
            FiniteCategory::from_rule_lazy(objects, morphisms, src, tgt, ident, Arc::new(rule));
        Self { cat, inv }
    }

    pub fn category(&self) -> &FiniteCategory {
        &self.cat
    }

    pub fn inv(&self, g: usize) -> usize {
        self.inv[g]
    }

    pub fn inverse_table(&self) -> &[usize] {
        &self.inv
    }

    pub fn empty() -> Self {
        Self::discrete(0)
    }

    pub fn discrete(n: usize) -> Self {
        Self::discrete_labeled(indexed(n))
    }

    pub fn discrete_labeled(labels: Vec<String>) -> Self {
        let n = labels.len();
        let id: Vec<usize> = (0..n).collect();
        Self::assemble(
            labels.clone(),
            labels,
            id.clone(),
            id.clone(),
            id.clone(),
            id,
            |f, _| f,
        )
    }

    /// One object `*`; arrow `a` then `b` composes to `a·b`.
    pub fn group(group: &FiniteGroup) -> Self {
        let n = group.order();
        let g = group.clone();
        Self::assemble(
            vec!["*".into()],
            group.labels().to_vec(),
            vec![0; n],
            vec![0; n],
            vec![group.identity()],
            (0..n).map(|a| group.inv(a)).collect(),
            move |a, b| g.mul(a, b),
        )
    }

    /// Action groupoid of a right action `act[m][g] = m·g` on `0..points`.
    /// Arrow `(m, g)` has index `m * |G| + g`, runs from `m` to `m·g`, and
    /// `(m, g)` then `(m·g, h)` is `(m, gh)`.
    pub fn action(group: &FiniteGroup, act: &[Vec<usize>]) -> Result<Self, ActionError> {
        let points = act.len();
        let order = group.order();
        for row in act {
            if row.len() != order {
                return Err(ActionError::Shape {
                    rows: points,
                    cols: row.len(),
                    points,
                    order,
                });
            }
        }
        for (m, row) in act.iter().enumerate() {
            if let Some(g) = row.iter().position(|&x| x >= points) {
                return Err(ActionError::OutOfRange { point: m, g });
            }
            if row[group.identity()] != m {
                return Err(ActionError::Identity { point: m });
            }
        }
        for (m, row) in act.iter().enumerate() {
            for g in 0..order {
                for h in 0..order {
                    if act[row[g]][h] != row[group.mul(g, h)] {
                        return Err(ActionError::Compatibility { point: m, g, h });
                    }
                }
            }
        }
        let mut src = Vec::with_capacity(points * order);
        let mut tgt = Vec::with_capacity(points * order);
        let mut inv = Vec::with_capacity(points * order);
        let mut morphisms = Vec::with_capacity(points * order);
        for (m, row) in act.iter().enumerate() {
            for g in 0..order {
                src.push(m);
                tgt.push(row[g]);
                inv.push(row[g] * order + group.inv(g));
                morphisms.push(format!("({m},{})", group.label(g)));
            }
        }
        let ident = (0..points).map(|m| m * order + group.identity()).collect();
        let grp = group.clone();
        Ok(Self::assemble(
            indexed(points),
            morphisms,
            src,
            tgt,
            ident,
            inv,
            move |f, g| (f / order) * order + grp.mul(f % order, g % order),
        ))
    }

    /// Pair groupoid on `0..n`: one arrow `(i, j)` from `i` to `j` for each
    /// ordered pair, with index `i * n + j`.
    pub fn pair(n: usize) -> Self {
        let mut src = Vec::with_capacity(n * n);
        let mut tgt = Vec::with_capacity(n * n);
        let mut inv = Vec::with_capacity(n * n);
        let mut morphisms = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                src.push(i);
                tgt.push(j);
                inv.push(j * n + i);
                morphisms.push(format!("({i},{j})"));
            }
        }
        Self::assemble(
            indexed(n),
            morphisms,
            src,
            tgt,
            (0..n).map(|i| i * n + i).collect(),
            inv,
            move |f, g| (f / n) * n + g % n,
        )
    }

    /// Cartesian product; object `(x, y)` has index `x * |B₀| + y`, arrow
    /// `(f, g)` has index `f * |B₁| + g`.
    pub fn product(a: &FiniteGroupoid, b: &FiniteGroupoid) -> Self {
        let (nb, mb) = (b.num_objects(), b.num_morphisms());
        let mut objects = Vec::new();
        for x in a.object_labels() {
            for y in b.object_labels() {
                objects.push(format!("({x},{y})"));
            }
        }
        let mut morphisms = Vec::new();
        let (mut src, mut tgt, mut inv) = (Vec::new(), Vec::new(), Vec::new());
        for f in 0..a.num_morphisms() {
            for g in 0..mb {
                morphisms.push(format!("({},{})", a.morphism_label(f), b.morphism_label(g)));
                src.push(a.src(f) * nb + b.src(g));
                tgt.push(a.tgt(f) * nb + b.tgt(g));
                inv.push(a.inv(f) * mb + b.inv(g));
            }
        }
        let mut ident = Vec::new();
        for x in 0..a.num_objects() {
            for y in 0..nb {
                ident.push(a.ident(x) * mb + b.ident(y));
            }
        }
        let (a, b) = (a.clone(), b.clone());
        Self::assemble(objects, morphisms, src, tgt, ident, inv, move |f, g| {
            a.then(f / mb, g / mb) * mb + b.then(f % mb, g % mb)
        })
    }

    /// The groupoid of functions `0..k → self`, computed pointwise.
    /// Objects and arrows are encoded as base-`|G₀|` / base-`|G₁|` digit
    /// strings, most significant digit first.
    pub fn power(&self, k: usize) -> Self {
        let (n, m) = (self.num_objects(), self.num_morphisms());
        let n_obj = n.pow(k as u32);
        let n_mor = m.pow(k as u32);
        let digits = |mut x: usize, base: usize| -> Vec<usize> {
            let mut d = vec![0; k];
            for slot in d.iter_mut().rev() {
                *slot = x % base;
                x /= base;
            }
            d
        };
        let encode = |d: &[usize], base: usize| d.iter().fold(0, |acc, &x| acc * base + x);
        let mut objects = Vec::with_capacity(n_obj);
        let mut ident = Vec::with_capacity(n_obj);
        for x in 0..n_obj {
            let d = digits(x, n);
            let labels: Vec<&str> = d.iter().map(|&i| self.object_label(i)).collect();
            objects.push(format!("[{}]", labels.join(",")));
            let e: Vec<usize> = d.iter().map(|&i| self.ident(i)).collect();
            ident.push(encode(&e, m));
        }
        let mut morphisms = Vec::with_capacity(n_mor);
        let (mut src, mut tgt, mut inv) = (
            Vec::with_capacity(n_mor),
            Vec::with_capacity(n_mor),
            Vec::with_capacity(n_mor),
        );
        for f in 0..n_mor {
            let d = digits(f, m);
            let labels: Vec<&str> = d.iter().map(|&i| self.morphism_label(i)).collect();
            morphisms.push(format!("[{}]", labels.join(",")));
            let s: Vec<usize> = d.iter().map(|&i| self.src(i)).collect();
            let t: Vec<usize> = d.iter().map(|&i| self.tgt(i)).collect();
            let v: Vec<usize> = d.iter().map(|&i| self.inv(i)).collect();
            src.push(encode(&s, n));
            tgt.push(encode(&t, n));
            inv.push(encode(&v, m));
        }
        let base = self.clone();
        Self::assemble(objects, morphisms, src, tgt, ident, inv, move |f, g| {
            let (mut f, mut g) = (f, g);
            let mut place = 1;
            let mut out = 0;
            for _ in 0..k {
                out += base.then(f % m, g % m) * place;
                f /= m;
                g /= m;
                place *= m;
            }
            out
        })
    }

    /// Disjoint union; the second summand's indices are shifted past the first.
    pub fn disjoint_union(a: &FiniteGroupoid, b: &FiniteGroupoid) -> Self {
        let (na, ma) = (a.num_objects(), a.num_morphisms());
        let mut objects: Vec<String> = a.object_labels().iter().map(|x| format!("0.{x}")).collect();
        objects.extend(b.object_labels().iter().map(|x| format!("1.{x}")));
        let mut morphisms: Vec<String> =
            a.morphism_labels().iter().map(|x| format!("0.{x}")).collect();
        morphisms.extend(b.morphism_labels().iter().map(|x| format!("1.{x}")));
        let src = (0..ma)
            .map(|f| a.src(f))
            .chain((0..b.num_morphisms()).map(|f| b.src(f) + na))
            .collect();
        let tgt = (0..ma)
            .map(|f| a.tgt(f))
            .chain((0..b.num_morphisms()).map(|f| b.tgt(f) + na))
            .collect();
        let ident = (0..na)
            .map(|x| a.ident(x))
            .chain((0..b.num_objects()).map(|x| b.ident(x) + ma))
            .collect();
        let inv = (0..ma)
            .map(|f| a.inv(f))
            .chain((0..b.num_morphisms()).map(|f| b.inv(f) + ma))
            .collect();
        let (a, b) = (a.clone(), b.clone());
        Self::assemble(objects, morphisms, src, tgt, ident, inv, move |f, g| {
            if f < ma {
                a.then(f, g)
            } else {
                b.then(f - ma, g - ma) + ma
            }
        })
    }

    /// Disjoint union of many groupoids, folded left.
    pub fn disjoint_union_all(parts: &[FiniteGroupoid]) -> Self {
        let mut iter = parts.iter();
        let Some(first) = iter.next() else {
            return Self::empty();
        };
        iter.fold(first.clone(), |acc, g| Self::disjoint_union(&acc, g))
    }

    /// Connected components, each sorted, ordered by smallest object.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut uf = UnionFind::new(self.num_objects());
        for f in 0..self.num_morphisms() {
            uf.union(self.src(f), self.tgt(f));
        }
        uf.classes()
    }

    /// `component_index()[x]` is the position of `x`'s component in
    /// [`FiniteGroupoid::components`].
    pub fn component_index(&self) -> Vec<usize> {
        let mut idx = vec![0; self.num_objects()];
        for (c, objs) in self.components().iter().enumerate() {
            for &x in objs {
                idx[x] = c;
            }
        }
        idx
    }

    pub fn is_transitive(&self) -> bool {
        self.components().len() <= 1
    }

    /// The isotropy group at `x`; element `k` is the loop `arrows[k]`,
    /// listed in increasing arrow order so the identity need not come first.
    pub fn isotropy(&self, x: usize) -> (FiniteGroup, Vec<usize>) {
        let arrows = self.hom(x, x);
        let pos = |f: usize| arrows.binary_search(&f).expect("loop composes to a loop");
        let table = arrows
            .iter()
            .map(|&a| arrows.iter().map(|&b| pos(self.then(a, b))).collect())
            .collect();
        let labels = arrows.iter().map(|&a| self.morphism_label(a).to_string()).collect();
        let group =
            FiniteGroup::from_labeled_table(labels, table).expect("loops of a groupoid form a group");
        (group, arrows)
    }

    pub fn components_and_isotropy(&self) -> Vec<Component> {
        self.components()
            .into_iter()
            .map(|objects| {
                let rep = objects[0];
                let (isotropy, arrows) = self.isotropy(rep);
                Component {
                    objects,
                    rep,
                    isotropy,
                    arrows,
                }
            })
            .collect()
    }

    /// For each object `y`, an arrow `from → y` if one exists, found by a
    /// breadth-first search that always follows the smallest arrow first.
    pub fn transversal(&self, from: usize) -> Vec<Option<usize>> {
        let mut tau = vec![None; self.num_objects()];
        tau[from] = Some(self.ident(from));
        let mut queue = vec![from];
        let mut head = 0;
        while head < queue.len() {
            let y = queue[head];
            head += 1;
            let t = tau[y].expect("queued objects are reached");
            for &f in self.out_arrows(y) {
                let z = self.tgt(f);
                if tau[z].is_none() {
                    tau[z] = Some(self.then(t, f));
                    queue.push(z);
                }
            }
        }
        tau
    }
}
