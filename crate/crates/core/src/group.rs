//! Finite groups given by Cayley tables.
//!
//! Elements are indices `0..order`. Multiplication `mul(a, b)` is the table
//! entry `table[a][b]`; when a group is turned into a one-object groupoid the
//! pair `(a, b)` composes (first `a`, then `b`) to `mul(a, b)`.

use std::collections::{BTreeSet, HashMap};

use thiserror::Error;

/// Default cap for exhaustive isomorphism searches.
pub const ISOMORPHISM_SEARCH_CAP: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("not a group: {0}")]
    NotAGroup(String),
    #[error("group of order {order} exceeds the isomorphism search cap of {cap}")]
    TooLarge { order: usize, cap: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroup {
    labels: Vec<String>,
    table: Vec<Vec<usize>>,
    identity: usize,
    inverse: Vec<usize>,
}

impl FiniteGroup {
    /// Validates a Cayley table. Labels default to the element indices.
    pub fn from_table(table: Vec<Vec<usize>>) -> Result<Self, GroupError> {
        let labels = (0..table.len()).map(|i| i.to_string()).collect();
        Self::from_labeled_table(labels, table)
    }

    pub fn from_labeled_table(
        labels: Vec<String>,
        table: Vec<Vec<usize>>,
    ) -> Result<Self, GroupError> {
        let n = table.len();
        if n == 0 {
            return Err(GroupError::NotAGroup("empty table".into()));
        }
        if labels.len() != n {
            return Err(GroupError::NotAGroup(format!(
                "{} labels for {} elements",
                labels.len(),
                n
            )));
        }
        for (a, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(GroupError::NotAGroup(format!("row {a} has length {}", row.len())));
            }
            if let Some(&bad) = row.iter().find(|&&x| x >= n) {
                return Err(GroupError::NotAGroup(format!("entry {bad} in row {a} out of range")));
            }
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|a| table[e][a] == a && table[a][e] == a))
            .ok_or_else(|| GroupError::NotAGroup("no two-sided identity".into()))?;
        let mut inverse = vec![0; n];
        for a in 0..n {
            inverse[a] = (0..n)
                .find(|&b| table[a][b] == identity && table[b][a] == identity)
                .ok_or_else(|| GroupError::NotAGroup(format!("element {a} has no inverse")))?;
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return Err(GroupError::NotAGroup(format!(
                            "associativity fails at ({a}, {b}, {c})"
                        )));
                    }
                }
            }
        }
        Ok(Self {
            labels,
            table,
            identity,
            inverse,
        })
    }

    /// Builds a table from a multiplication closure without re-validating.
    /// Callers must pass an actual group law with identity `0`.
    fn from_law(labels: Vec<String>, mul: impl Fn(usize, usize) -> usize) -> Self {
        let n = labels.len();
        let table: Vec<Vec<usize>> = (0..n).map(|a| (0..n).map(|b| mul(a, b)).collect()).collect();
        let inverse = (0..n)
            .map(|a| (0..n).find(|&b| table[a][b] == 0).expect("group law without inverse"))
            .collect();
        Self {
            labels,
            table,
            identity: 0,
            inverse,
        }
    }

    pub fn trivial() -> Self {
        Self::cyclic(1)
    }

    pub fn cyclic(n: usize) -> Self {
        assert!(n > 0, "cyclic group of order 0");
        let labels = (0..n).map(|k| k.to_string()).collect();
        Self::from_law(labels, |a, b| (a + b) % n)
    }

    /// Dihedral group of order `2n`: element `k + n*f` is `r^k s^f`.
    pub fn dihedral(n: usize) -> Self {
        assert!(n > 0);
        let labels = (0..2 * n)
            .map(|i| {
                let (k, f) = (i % n, i / n);
                if f == 0 {
                    format!("r{k}")
                } else {
                    format!("r{k}s")
                }
            })
            .collect();
        Self::from_law(labels, |a, b| {
            let (ka, fa) = (a % n, a / n);
            let (kb, fb) = (b % n, b / n);
            let k = if fa == 0 { (ka + kb) % n } else { (ka + n - kb) % n };
            k + n * ((fa + fb) % 2)
        })
    }

    /// Dicyclic group of order `4n` (`n = 2` is the quaternion group).
    /// Element `k + 2n*f` is `a^k x^f` with `a^{2n} = 1`, `x^2 = a^n`,
    /// `x a x^{-1} = a^{-1}`.
    pub fn dicyclic(n: usize) -> Self {
        assert!(n > 1);
        let m = 2 * n;
        let labels = (0..2 * m)
            .map(|i| {
                let (k, f) = (i % m, i / m);
                if f == 0 {
                    format!("a{k}")
                } else {
                    format!("a{k}x")
                }
            })
            .collect();
        Self::from_law(labels, |a, b| {
            let (ka, fa) = (a % m, a / m);
            let (kb, fb) = (b % m, b / m);
            let mut k = if fa == 0 { (ka + kb) % m } else { (ka + m - kb) % m };
            if fa == 1 && fb == 1 {
                k = (k + n) % m;
            }
            k + m * ((fa + fb) % 2)
        })
    }

    pub fn quaternion() -> Self {
        Self::dicyclic(2)
    }

    pub fn symmetric(n: usize) -> Self {
        let gens: Vec<Vec<usize>> = if n <= 1 {
            vec![vec![0; n].into_iter().enumerate().map(|(i, _)| i).collect()]
        } else {
            let mut swap: Vec<usize> = (0..n).collect();
            swap.swap(0, 1);
            let cycle: Vec<usize> = (0..n).map(|i| (i + 1) % n).collect();
            vec![swap, cycle]
        };
        Self::from_permutations(n, &gens)
    }

    pub fn alternating(n: usize) -> Self {
        let gens: Vec<Vec<usize>> = (2..n)
            .map(|k| {
                // 3-cycle (0 1 k)
                let mut p: Vec<usize> = (0..n).collect();
                p[0] = 1;
                p[1] = k;
                p[k] = 0;
                p
            })
            .collect();
        Self::from_permutations(n, &gens)
    }

    /// Permutation group generated by `gens` acting on `0..degree`.
    /// Elements are ordered by discovery (breadth first), identity first.
    /// Multiplication composes left to right: `(p*q)(i) = q(p(i))`.
    pub fn from_permutations(degree: usize, gens: &[Vec<usize>]) -> Self {
        let id: Vec<usize> = (0..degree).collect();
        let mut elems = vec![id.clone()];
        let mut index: HashMap<Vec<usize>, usize> = HashMap::from([(id, 0)]);
        let mut i = 0;
        while i < elems.len() {
            for g in gens {
                let prod: Vec<usize> = elems[i].iter().map(|&x| g[x]).collect();
                if !index.contains_key(&prod) {
                    index.insert(prod.clone(), elems.len());
                    elems.push(prod);
                }
            }
            i += 1;
        }
        let labels = elems
            .iter()
            .map(|p| {
                let body: Vec<String> = p.iter().map(|x| x.to_string()).collect();
                format!("[{}]", body.join(" "))
            })
            .collect();
        Self::from_law(labels, |a, b| {
            let prod: Vec<usize> = elems[a].iter().map(|&x| elems[b][x]).collect();
            index[&prod]
        })
    }

    pub fn direct_product(a: &FiniteGroup, b: &FiniteGroup) -> Self {
        let nb = b.order();
        let labels = (0..a.order() * nb)
            .map(|i| format!("({},{})", a.labels[i / nb], b.labels[i % nb]))
            .collect();
        let mut g = Self::from_law(labels, |x, y| {
            a.mul(x / nb, y / nb) * nb + b.mul(x % nb, y % nb)
        });
        g.identity = a.identity * nb + b.identity;
        g.inverse = (0..g.order())
            .map(|x| a.inv(x / nb) * nb + b.inv(x % nb))
            .collect();
        g
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn label(&self, a: usize) -> &str {
        &self.labels[a]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }

    pub fn is_abelian(&self) -> bool {
        let n = self.order();
        (0..n).all(|a| (0..n).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut k = 1;
        let mut x = a;
        while x != self.identity {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    /// Sorted elements of the subgroup generated by `gens`.
    pub fn generated(&self, gens: &[usize]) -> Vec<usize> {
        let mut seen = vec![false; self.order()];
        let mut stack = vec![self.identity];
        seen[self.identity] = true;
        while let Some(x) = stack.pop() {
            for &g in gens {
                let y = self.mul(x, g);
                if !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        (0..self.order()).filter(|&x| seen[x]).collect()
    }

    /// A generating set chosen greedily: repeatedly add the smallest element
    /// outside the subgroup generated so far.
    pub fn generators(&self) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut span = self.generated(&gens);
        while span.len() < self.order() {
            let next = (0..self.order())
                .find(|x| span.binary_search(x).is_err())
                .expect("proper subgroup has a complement element");
            gens.push(next);
            span = self.generated(&gens);
        }
        gens
    }

    /// All subgroups, each as a sorted element list, ordered by size then
    /// lexicographically.
    pub fn subgroups(&self) -> Vec<Vec<usize>> {
        let trivial = vec![self.identity];
        let mut found: BTreeSet<Vec<usize>> = BTreeSet::from([trivial.clone()]);
        let mut frontier = vec![trivial];
        while let Some(h) = frontier.pop() {
            for g in 0..self.order() {
                if h.binary_search(&g).is_ok() {
                    continue;
                }
                let mut gens = h.clone();
                gens.push(g);
                let bigger = self.generated(&gens);
                if found.insert(bigger.clone()) {
                    frontier.push(bigger);
                }
            }
        }
        let mut out: Vec<Vec<usize>> = found.into_iter().collect();
        out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        out
    }

    pub fn is_normal(&self, subgroup: &[usize]) -> bool {
        (0..self.order()).all(|g| {
            subgroup.iter().all(|&h| {
                let conj = self.mul(self.mul(self.inv(g), h), g);
                subgroup.binary_search(&conj).is_ok()
            })
        })
    }

    pub fn normal_subgroups(&self) -> Vec<Vec<usize>> {
        self.subgroups()
            .into_iter()
            .filter(|h| self.is_normal(h))
            .collect()
    }

    /// The subgroup on `elements` (sorted, closed) as a group of its own,
    /// with the embedding into `self`.
    pub fn subgroup(&self, elements: &[usize]) -> (FiniteGroup, Vec<usize>) {
        let pos: HashMap<usize, usize> = elements.iter().enumerate().map(|(i, &x)| (x, i)).collect();
        let labels = elements.iter().map(|&x| self.labels[x].clone()).collect();
        let table = elements
            .iter()
            .map(|&a| elements.iter().map(|&b| pos[&self.mul(a, b)]).collect())
            .collect();
        let group = FiniteGroup::from_labeled_table(labels, table)
            .expect("closed subset of a group is a group");
        (group, elements.to_vec())
    }

    /// Quotient by a normal subgroup together with the projection.
    /// Cosets are numbered by their smallest element.
    pub fn quotient(&self, normal: &[usize]) -> (FiniteGroup, Vec<usize>) {
        let n = self.order();
        let mut coset_of = vec![usize::MAX; n];
        let mut reps = Vec::new();
        for g in 0..n {
            if coset_of[g] != usize::MAX {
                continue;
            }
            let c = reps.len();
            reps.push(g);
            for &h in normal {
                coset_of[self.mul(g, h)] = c;
            }
        }
        let labels = reps
            .iter()
            .map(|&g| format!("{}N", self.labels[g]))
            .collect();
        let table = reps
            .iter()
            .map(|&a| reps.iter().map(|&b| coset_of[self.mul(a, b)]).collect())
            .collect();
        let q = FiniteGroup::from_labeled_table(labels, table)
            .expect("quotient by a normal subgroup is a group");
        (q, coset_of)
    }

    pub fn is_homomorphism(&self, target: &FiniteGroup, map: &[usize]) -> bool {
        let n = self.order();
        map.len() == n
            && map.iter().all(|&x| x < target.order())
            && (0..n).all(|a| {
                (0..n).all(|b| map[self.mul(a, b)] == target.mul(map[a], map[b]))
            })
    }

    /// Extends generator images to a homomorphism, or `None` when the
    /// assignment is inconsistent.
    fn extend(&self, target: &FiniteGroup, gens: &[usize], images: &[usize]) -> Option<Vec<usize>> {
        let mut map = vec![usize::MAX; self.order()];
        map[self.identity] = target.identity;
        let mut queue = vec![self.identity];
        let mut head = 0;
        while head < queue.len() {
            let x = queue[head];
            head += 1;
            for (g, &img) in gens.iter().zip(images) {
                let y = self.mul(x, *g);
                let fy = target.mul(map[x], img);
                if map[y] == usize::MAX {
                    map[y] = fy;
                    queue.push(y);
                } else if map[y] != fy {
                    return None;
                }
            }
        }
        Some(map)
    }

    /// Every homomorphism `self -> target`, enumerated over generator images
    /// whose order divides the generator's order.
    pub fn homomorphisms(&self, target: &FiniteGroup) -> Vec<Vec<usize>> {
        let gens = self.generators();
        let candidates: Vec<Vec<usize>> = gens
            .iter()
            .map(|&g| {
                let k = self.element_order(g);
                (0..target.order())
                    .filter(|&y| k.is_multiple_of(target.element_order(y)))
                    .collect()
            })
            .collect();
        let mut out = Vec::new();
        let mut images = vec![0; gens.len()];
        self.hom_search(target, &gens, &candidates, &mut images, 0, false, &mut |m| {
            out.push(m);
            true
        });
        out
    }

    /// An isomorphism `self -> other`, searched exhaustively over generator
    /// images with element-order pruning. Groups above `cap` are refused.
    pub fn isomorphism(&self, other: &FiniteGroup, cap: usize) -> Result<Option<Vec<usize>>, GroupError> {
        for g in [self, other] {
            if g.order() > cap {
                return Err(GroupError::TooLarge { order: g.order(), cap });
            }
        }
        if self.order() != other.order() {
            return Ok(None);
        }
        let mut profile_a: Vec<usize> = (0..self.order()).map(|x| self.element_order(x)).collect();
        let mut profile_b: Vec<usize> = (0..other.order()).map(|x| other.element_order(x)).collect();
        profile_a.sort_unstable();
        profile_b.sort_unstable();
        if profile_a != profile_b {
            return Ok(None);
        }
        let gens = self.generators();
        let candidates: Vec<Vec<usize>> = gens
            .iter()
            .map(|&g| {
                let k = self.element_order(g);
                (0..other.order()).filter(|&y| other.element_order(y) == k).collect()
            })
            .collect();
        let mut found = None;
        let mut images = vec![0; gens.len()];
        self.hom_search(other, &gens, &candidates, &mut images, 0, true, &mut |m| {
            found = Some(m);
            false
        });
        Ok(found)
    }

    #[allow(clippy::too_many_arguments)]
    fn hom_search(
        &self,
        target: &FiniteGroup,
        gens: &[usize],
        candidates: &[Vec<usize>],
        images: &mut Vec<usize>,
        depth: usize,
        bijective: bool,
        visit: &mut dyn FnMut(Vec<usize>) -> bool,
    ) -> bool {
        if depth == gens.len() {
            if let Some(map) = self.extend(target, gens, images) {
                if bijective {
                    let mut hit = vec![false; target.order()];
                    for &y in &map {
                        if hit[y] {
                            return true;
                        }
                        hit[y] = true;
                    }
                }
                return visit(map);
            }
            return true;
        }
        for &c in &candidates[depth] {
            images[depth] = c;
            if !self.hom_search(target, gens, candidates, images, depth + 1, bijective, visit) {
                return false;
            }
        }
        true
    }

    pub fn is_isomorphic(&self, other: &FiniteGroup) -> Result<bool, GroupError> {
        Ok(self.isomorphism(other, ISOMORPHISM_SEARCH_CAP)?.is_some())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_groups() {
        // {e, a} with a*a = a is a monoid, not a group
        let err = FiniteGroup::from_table(vec![vec![0, 1], vec![1, 1]]).unwrap_err();
        assert!(matches!(err, GroupError::NotAGroup(_)));
        assert!(FiniteGroup::from_table(vec![]).is_err());
        assert!(FiniteGroup::from_table(vec![vec![0, 2], vec![1, 0]]).is_err());
    }

    #[test]
    fn standard_orders() {
        assert_eq!(FiniteGroup::symmetric(3).order(), 6);
        assert_eq!(FiniteGroup::symmetric(4).order(), 24);
        assert_eq!(FiniteGroup::alternating(4).order(), 12);
        assert_eq!(FiniteGroup::dihedral(4).order(), 8);
        assert_eq!(FiniteGroup::quaternion().order(), 8);
        assert_eq!(FiniteGroup::dicyclic(3).order(), 12);
        assert!(!FiniteGroup::symmetric(3).is_abelian());
        assert!(FiniteGroup::cyclic(6).is_abelian());
    }

    #[test]
    fn constructed_tables_validate() {
        for g in [
            FiniteGroup::dihedral(5),
            FiniteGroup::dicyclic(2),
            FiniteGroup::dicyclic(4),
            FiniteGroup::alternating(4),
            FiniteGroup::direct_product(&FiniteGroup::cyclic(2), &FiniteGroup::symmetric(3)),
        ] {
            let again = FiniteGroup::from_labeled_table(g.labels.clone(), g.table.clone()).unwrap();
            assert_eq!(again.identity(), g.identity());
        }
    }

    #[test]
    fn subgroup_counts() {
        // S3: trivial, three of order 2, A3, S3
        assert_eq!(FiniteGroup::symmetric(3).subgroups().len(), 6);
        assert_eq!(FiniteGroup::symmetric(3).normal_subgroups().len(), 3);
        // Q8: every subgroup is normal
        let q8 = FiniteGroup::quaternion();
        assert_eq!(q8.subgroups().len(), 6);
        assert_eq!(q8.normal_subgroups().len(), 6);
        // Z2^3 has 16 subgroups
        let v = FiniteGroup::direct_product(
            &FiniteGroup::direct_product(&FiniteGroup::cyclic(2), &FiniteGroup::cyclic(2)),
            &FiniteGroup::cyclic(2),
        );
        assert_eq!(v.subgroups().len(), 16);
    }

    #[test]
    fn quotient_projection_is_homomorphism() {
        let z4 = FiniteGroup::cyclic(4);
        let (q, proj) = z4.quotient(&[0, 2]);
        assert_eq!(q.order(), 2);
        assert!(z4.is_homomorphism(&q, &proj));
        assert_eq!(proj, vec![0, 1, 0, 1]);
    }

    #[test]
    fn homomorphism_counts() {
        // |Hom(Z_m, Z_n)| = gcd(m, n)
        assert_eq!(FiniteGroup::cyclic(4).homomorphisms(&FiniteGroup::cyclic(6)).len(), 2);
        assert_eq!(FiniteGroup::cyclic(6).homomorphisms(&FiniteGroup::cyclic(6)).len(), 6);
        // End(S3) has 10 elements: trivial, 3 onto order-2 images, 6 automorphisms
        let s3 = FiniteGroup::symmetric(3);
        assert_eq!(s3.homomorphisms(&s3).len(), 10);
    }

    #[test]
    fn isomorphism_search() {
        let d3 = FiniteGroup::dihedral(3);
        let s3 = FiniteGroup::symmetric(3);
        let iso = d3.isomorphism(&s3, 64).unwrap().unwrap();
        assert!(d3.is_homomorphism(&s3, &iso));
        let z6 = FiniteGroup::cyclic(6);
        assert!(s3.isomorphism(&z6, 64).unwrap().is_none());
        let z2z3 = FiniteGroup::direct_product(&FiniteGroup::cyclic(2), &FiniteGroup::cyclic(3));
        assert!(z6.is_isomorphic(&z2z3).unwrap());
        assert!(!FiniteGroup::quaternion().is_isomorphic(&FiniteGroup::dihedral(4)).unwrap());
        let big = FiniteGroup::symmetric(5);
        assert_eq!(
            big.isomorphism(&big, 64),
            Err(GroupError::TooLarge { order: 120, cap: 64 })
        );
    }
}
