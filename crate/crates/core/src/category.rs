//! Finite categories with validated axioms.
//!
//! Composition is stored in "first, then" order: `compose(f, g)` is defined
//! when `tgt(f) == src(g)` and returns the arrow usually written `g ∘ f`.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

/// Pairs above this count are composed on demand instead of tabulated.
const TABULATE_LIMIT: usize = 1 << 22;

pub type CompositionRule = Arc<dyn Fn(usize, usize) -> usize + Send + Sync>;

#[derive(Clone)]
enum Composition {
    /// `table[f][k]` composes `f` with the `k`-th arrow out of `tgt(f)`.
    Table(Vec<Vec<usize>>),
    Rule(CompositionRule),
}

/// Unvalidated category tables, indexed by position.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct RawCategory {
    pub objects: Vec<String>,
    pub morphisms: Vec<String>,
    pub src: Vec<usize>,
    pub tgt: Vec<usize>,
    pub ident: Vec<usize>,
    /// Entries `[f, g, result]` meaning `result = g ∘ f`.
    pub compose: Vec<[usize; 3]>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InverseLaw {
    /// `src(inv γ) = tgt γ` or `tgt(inv γ) = src γ` fails.
    Endpoints,
    /// `inv γ ∘ γ ≠ ident(src γ)`.
    Left,
    /// `γ ∘ inv γ ≠ ident(tgt γ)`.
    Right,
}

impl fmt::Display for InverseLaw {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            InverseLaw::Endpoints => "endpoints of the inverse",
            InverseLaw::Left => "inv(γ)∘γ = 1_src",
            InverseLaw::Right => "γ∘inv(γ) = 1_tgt",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum Violation {
    #[error("{table}[{entry}] = {value} is not a declared index")]
    DanglingIndex {
        table: &'static str,
        entry: usize,
        value: usize,
    },
    #[error("{table} has {found} entries, expected {expected}")]
    TableLength {
        table: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("composite given for non-composable pair ({f}, {g})")]
    CompositionDomainMismatch { f: usize, g: usize },
    #[error("composite {result} of ({f}, {g}) has wrong endpoints")]
    CompositeEndpoints { f: usize, g: usize, result: usize },
    #[error("pair ({f}, {g}) composed twice, to {first} and {second}")]
    ConflictingComposite {
        f: usize,
        g: usize,
        first: usize,
        second: usize,
    },
    #[error("composable pair ({f}, {g}) has no composite")]
    MissingComposite { f: usize, g: usize },
    #[error("identity {morphism} of object {object} is not a loop at it")]
    IdentityNotLoop { object: usize, morphism: usize },
    #[error("unit law fails for morphism {morphism} against identity {identity}")]
    UnitViolation { morphism: usize, identity: usize },
    #[error("associativity fails at ({f}, {g}, {h})")]
    AssociativityViolation { f: usize, g: usize, h: usize },
    #[error("morphism {morphism} is not invertible: {law}")]
    NotInvertible { morphism: usize, law: InverseLaw },
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} violation(s)", self.violations.len())?;
        for v in &self.violations {
            write!(f, "\n  {v}")?;
        }
        Ok(())
    }
}

#[derive(Clone)]
pub struct FiniteCategory {
    objects: Vec<String>,
    morphisms: Vec<String>,
    src: Vec<usize>,
    tgt: Vec<usize>,
    ident: Vec<usize>,
    out: Vec<Vec<usize>>,
    inc: Vec<Vec<usize>>,
    out_pos: Vec<usize>,
    comp: Composition,
}

impl fmt::Debug for FiniteCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteCategory")
            .field("objects", &self.objects)
            .field("morphisms", &self.morphisms.len())
            .finish()
    }
}

impl PartialEq for FiniteCategory {
    fn eq(&self, other: &Self) -> bool {
        self.objects == other.objects
            && self.morphisms == other.morphisms
            && self.src == other.src
            && self.tgt == other.tgt
            && self.ident == other.ident
            && (0..self.num_morphisms()).all(|f| {
                self.out[self.tgt[f]]
                    .iter()
                    .all(|&g| self.then(f, g) == other.then(f, g))
            })
    }
}

impl Eq for FiniteCategory {}

fn adjacency(n: usize, ends: &[usize]) -> Vec<Vec<usize>> {
    let mut lists = vec![Vec::new(); n];
    for (f, &a) in ends.iter().enumerate() {
        lists[a].push(f);
    }
    lists
}

impl FiniteCategory {
    /// Assembles a category from trusted data. The rule is tabulated unless
    /// the number of composable pairs is very large.
    pub(crate) fn from_rule(
        objects: Vec<String>,
        morphisms: Vec<String>,
        src: Vec<usize>,
        tgt: Vec<usize>,
        ident: Vec<usize>,
        rule: CompositionRule,
    ) -> Self {
        Self::build(objects, morphisms, src, tgt, ident, rule, TABULATE_LIMIT)
    }

    /// Like [`FiniteCategory::from_rule`] but never tabulates.
    pub(crate) fn from_rule_lazy(
        objects: Vec<String>,
        morphisms: Vec<String>,
        src: Vec<usize>,
        tgt: Vec<usize>,
        ident: Vec<usize>,
        rule: CompositionRule,
    ) -> Self {
        Self::build(objects, morphisms, src, tgt, ident, rule, 0)
    }

    fn build(
        objects: Vec<String>,
        morphisms: Vec<String>,
        src: Vec<usize>,
        tgt: Vec<usize>,
        ident: Vec<usize>,
        rule: CompositionRule,
        limit: usize,
    ) -> Self {
        let out = adjacency(objects.len(), &src);
        let inc = adjacency(objects.len(), &tgt);
        let mut out_pos = vec![0; morphisms.len()];
        for list in &out {
            for (k, &g) in list.iter().enumerate() {
                out_pos[g] = k;
            }
        }
        let pairs: usize = tgt.iter().map(|&b| out[b].len()).sum();
        let comp = if pairs <= limit {
            Composition::Table(
                tgt.iter()
                    .enumerate()
                    .map(|(f, &b)| out[b].iter().map(|&g| rule(f, g)).collect())
                    .collect(),
            )
        } else {
            Composition::Rule(rule)
        };
        Self {
            objects,
            morphisms,
            src,
            tgt,
            ident,
            out,
            inc,
            out_pos,
            comp,
        }
    }

    pub fn num_objects(&self) -> usize {
        self.objects.len()
    }

    pub fn num_morphisms(&self) -> usize {
        self.morphisms.len()
    }

    pub fn object_label(&self, a: usize) -> &str {
        &self.objects[a]
    }

    pub fn morphism_label(&self, f: usize) -> &str {
        &self.morphisms[f]
    }

    pub fn object_labels(&self) -> &[String] {
        &self.objects
    }

    pub fn morphism_labels(&self) -> &[String] {
        &self.morphisms
    }

    pub fn object_index(&self, label: &str) -> Option<usize> {
        self.objects.iter().position(|x| x == label)
    }

    pub fn morphism_index(&self, label: &str) -> Option<usize> {
        self.morphisms.iter().position(|x| x == label)
    }

    pub fn src(&self, f: usize) -> usize {
        self.src[f]
    }

    pub fn tgt(&self, f: usize) -> usize {
        self.tgt[f]
    }

    pub fn ident(&self, a: usize) -> usize {
        self.ident[a]
    }

    pub fn is_identity(&self, f: usize) -> bool {
        self.ident[self.src[f]] == f
    }

    /// Arrows with source `a`.
    pub fn out_arrows(&self, a: usize) -> &[usize] {
        &self.out[a]
    }

    /// Arrows with target `a`.
    pub fn in_arrows(&self, a: usize) -> &[usize] {
        &self.inc[a]
    }

    pub fn hom(&self, a: usize, b: usize) -> Vec<usize> {
        self.out[a].iter().copied().filter(|&f| self.tgt[f] == b).collect()
    }

    /// `g ∘ f`, or `None` when `tgt(f) != src(g)`.
    pub fn compose(&self, f: usize, g: usize) -> Option<usize> {
        (self.tgt[f] == self.src[g]).then(|| self.then(f, g))
    }

    /// `g ∘ f` for a composable pair; panics otherwise.
    pub fn then(&self, f: usize, g: usize) -> usize {
        assert_eq!(
            self.tgt[f], self.src[g],
            "arrows {f} and {g} are not composable"
        );
        match &self.comp {
            Composition::Table(t) => t[f][self.out_pos[g]],
            Composition::Rule(r) => r(f, g),
        }
    }

    pub fn to_raw(&self) -> RawCategory {
        let mut compose = Vec::new();
        for f in 0..self.num_morphisms() {
            for &g in &self.out[self.tgt[f]] {
                compose.push([f, g, self.then(f, g)]);
            }
        }
        RawCategory {
            objects: self.objects.clone(),
            morphisms: self.morphisms.clone(),
            src: self.src.clone(),
            tgt: self.tgt.clone(),
            ident: self.ident.clone(),
            compose,
        }
    }
}

fn check_indices(
    table: &'static str,
    values: &[usize],
    bound: usize,
    expected: usize,
    out: &mut Vec<Violation>,
) {
    if values.len() != expected {
        out.push(Violation::TableLength {
            table,
            expected,
            found: values.len(),
        });
    }
    for (entry, &value) in values.iter().enumerate() {
        if value >= bound {
            out.push(Violation::DanglingIndex {
                table,
                entry,
                value,
            });
        }
    }
}

/// Checks every category axiom and either seals the tables or reports
/// every failing instance.
pub fn validate_category(raw: RawCategory) -> Result<FiniteCategory, ValidationReport> {
    let n_obj = raw.objects.len();
    let n_mor = raw.morphisms.len();
    let mut violations = Vec::new();
    check_indices("src", &raw.src, n_obj, n_mor, &mut violations);
    check_indices("tgt", &raw.tgt, n_obj, n_mor, &mut violations);
    check_indices("identity", &raw.ident, n_mor, n_obj, &mut violations);
    for (i, entry) in raw.compose.iter().enumerate() {
        for &v in entry {
            if v >= n_mor {
                violations.push(Violation::DanglingIndex {
                    table: "compose",
                    entry: i,
                    value: v,
                });
            }
        }
    }
    if !violations.is_empty() {
        return Err(ValidationReport { violations });
    }

    let (src, tgt, ident) = (&raw.src, &raw.tgt, &raw.ident);
    for (a, &e) in ident.iter().enumerate() {
        if src[e] != a || tgt[e] != a {
            violations.push(Violation::IdentityNotLoop {
                object: a,
                morphism: e,
            });
        }
    }

    let mut table: HashMap<(usize, usize), usize> = HashMap::new();
    for &[f, g, r] in &raw.compose {
        if tgt[f] != src[g] {
            violations.push(Violation::CompositionDomainMismatch { f, g });
            continue;
        }
        if src[r] != src[f] || tgt[r] != tgt[g] {
            violations.push(Violation::CompositeEndpoints { f, g, result: r });
        }
        match table.get(&(f, g)) {
            Some(&prev) if prev != r => violations.push(Violation::ConflictingComposite {
                f,
                g,
                first: prev,
                second: r,
            }),
            Some(_) => {}
            None => {
                table.insert((f, g), r);
            }
        }
    }
    let out = adjacency(n_obj, src);
    let mut complete = true;
    for f in 0..n_mor {
        for &g in &out[tgt[f]] {
            if !table.contains_key(&(f, g)) {
                complete = false;
                violations.push(Violation::MissingComposite { f, g });
            }
        }
    }
    if !complete || !violations.is_empty() {
        return Err(ValidationReport { violations });
    }

    let c = |f: usize, g: usize| table[&(f, g)];
    for f in 0..n_mor {
        let (a, b) = (src[f], tgt[f]);
        if c(ident[a], f) != f {
            violations.push(Violation::UnitViolation {
                morphism: f,
                identity: ident[a],
            });
        }
        if c(f, ident[b]) != f {
            violations.push(Violation::UnitViolation {
                morphism: f,
                identity: ident[b],
            });
        }
    }
    for f in 0..n_mor {
        for &g in &out[tgt[f]] {
            let fg = c(f, g);
            for &h in &out[tgt[g]] {
                if c(fg, h) != c(f, c(g, h)) {
                    violations.push(Violation::AssociativityViolation { f, g, h });
                }
            }
        }
    }
    if !violations.is_empty() {
        return Err(ValidationReport { violations });
    }
    let rule: CompositionRule = Arc::new(move |f, g| table[&(f, g)]);
    Ok(FiniteCategory::from_rule(
        raw.objects,
        raw.morphisms,
        raw.src,
        raw.tgt,
        raw.ident,
        rule,
    ))
}
