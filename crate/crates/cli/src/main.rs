//! `gpd`: checks finite groupoid constructions stored as JSON documents.
//!
//! Exit status is 0 when the property holds, 1 when it fails (a witness is
//! printed) and 2 when an input cannot be read or is out of range.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde::de::DeserializeOwned;
use serde::Deserialize;
use serde_json::{json, Value};

use gpd_core::bibundle::compose_bibundles;
use gpd_core::corpus::{self, DEFAULT_SEED};
use gpd_core::descent::{check_stack_condition, BgPresheaf, ConstantPresheaf, GroupoidPresheaf};
use gpd_core::extension::{check_gerbe_conditions, induced_extension, pullback_extension};
use gpd_core::interchange::{
    splitting_doc, BibundleDoc, DescentDoc, ExtensionDoc, FunctorDoc, GroupoidDoc, PresheafKind, SesDoc,
};
use gpd_core::linrep::find_equivariant_splitting;
use gpd_core::morita::{morita_equivalent, MoritaError};
use gpd_core::{validate_category, validate_groupoid, FiniteGroupoid, GroupoidFunctor, RawCategory};

#[derive(Parser)]
#[command(name = "gpd", version, about = "Exact checks on finite groupoids")]
struct Cli {
    /// Report style.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    /// Seed for randomized checks.
    #[arg(long, default_value_t = DEFAULT_SEED, global = true)]
    seed: u64,
    /// Largest finite set a presheaf is evaluated on.
    #[arg(long, default_value_t = 4, global = true)]
    cap: usize,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Structured,
}

#[derive(Subcommand)]
enum Verb {
    /// Validate a groupoid, or a category when no inverse table is given.
    Validate {
        file: PathBuf,
        /// Also validate this many seeded one-entry mutations of the input.
        #[arg(long, default_value_t = 0)]
        mutations: usize,
    },
    /// Decide Morita equivalence of two groupoids.
    Morita { left: PathBuf, right: PathBuf },
    /// Compose two bibundles `P: G → H` and `Q: H → K`.
    Compose { first: PathBuf, second: PathBuf },
    /// Check both lifting conditions for the functor of an extension file.
    GerbeCheck { file: PathBuf },
    /// Build the extension induced by a functor.
    ExtensionInduce { file: PathBuf },
    /// Pull an extension back along a map onto its objects.
    Pullback { extension: PathBuf, map: PathBuf },
    /// Compare sections over the base with descent data for a covering.
    DescentCheck { file: PathBuf },
    /// Find an equivariant splitting of a short exact sequence.
    Split { file: PathBuf },
}

/// A map from new point ids onto the objects of an extension.
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PullbackMapDoc {
    points: Vec<String>,
    map: BTreeMap<String, String>,
}

struct Report {
    holds: bool,
    text: String,
    data: Value,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli).and_then(|r| emit(&cli, &r).map(|()| r)) {
        Ok(r) if r.holds => ExitCode::SUCCESS,
        Ok(_) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn emit(cli: &Cli, r: &Report) -> Result<()> {
    let body = match cli.format {
        Format::Text => r.text.clone(),
        Format::Structured => serde_json::to_string_pretty(&r.data)? + "\n",
    };
    match &cli.output {
        Some(path) => fs::write(path, body).with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{body}");
            Ok(())
        }
    }
}

fn read<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).map_err(|e| {
        anyhow!(
            "{}: line {} column {}: {e}",
            path.display(),
            e.line(),
            e.column()
        )
    })
}

fn load_groupoid(path: &Path) -> Result<Arc<FiniteGroupoid>> {
    let doc: GroupoidDoc = read(path)?;
    let g = doc.to_groupoid().with_context(|| format!("{} is not a valid groupoid", path.display()))?;
    Ok(Arc::new(g))
}

fn run(cli: &Cli) -> Result<Report> {
    match &cli.verb {
        Verb::Validate { file, mutations } => validate(file, *mutations, cli.seed),
        Verb::Morita { left, right } => morita(left, right),
        Verb::Compose { first, second } => compose(first, second),
        Verb::GerbeCheck { file } => gerbe_check(file),
        Verb::ExtensionInduce { file } => extension_induce(file),
        Verb::Pullback { extension, map } => pullback(extension, map),
        Verb::DescentCheck { file } => descent_check(file, cli.cap),
        Verb::Split { file } => split(file),
    }
}

fn check_tables(raw: &RawCategory, inv: Option<&[usize]>) -> Vec<String> {
    let cat = match validate_category(raw.clone()) {
        Ok(c) => c,
        Err(r) => return r.violations.iter().map(|v| v.to_string()).collect(),
    };
    match inv {
        None => Vec::new(),
        Some(inv) => match validate_groupoid(cat, inv.to_vec()) {
            Ok(_) => Vec::new(),
            Err(r) => r.violations.iter().map(|v| v.to_string()).collect(),
        },
    }
}

fn validate(path: &Path, mutations: usize, seed: u64) -> Result<Report> {
    let doc: GroupoidDoc = read(path)?;
    let (raw, inv) = doc.to_raw().with_context(|| path.display().to_string())?;
    let kind = if inv.is_some() { "groupoid" } else { "category" };
    let violations = check_tables(&raw, inv.as_deref());
    let holds = violations.is_empty();
    let mut text = if holds {
        format!("valid {kind}: {} objects, {} morphisms\n", raw.objects.len(), raw.morphisms.len())
    } else {
        let mut s = format!("invalid {kind} (indices refer to positions in objects and morphisms)\n");
        for v in &violations {
            s += &format!("  {v}\n");
        }
        s
    };
    let mut data = json!({ "kind": kind, "valid": holds, "violations": violations });
    if mutations > 0 {
        let inv = match (&inv, holds) {
            (Some(inv), true) => inv,
            _ => bail!("--mutations needs a valid groupoid with an inverse table"),
        };
        let mut rng = corpus::rng(seed);
        let mut rows = Vec::with_capacity(mutations);
        let mut rejected = 0;
        for _ in 0..mutations {
            let (mraw, minv, what) = corpus::mutate(&raw, inv, &mut rng);
            let found = check_tables(&mraw, Some(&minv));
            rejected += usize::from(!found.is_empty());
            rows.push(json!({ "mutation": what, "rejected": !found.is_empty(), "violations": found }));
        }
        text += &format!("mutations: {rejected} of {mutations} rejected (seed {seed})\n");
        data["mutations"] = Value::Array(rows);
        data["seed"] = json!(seed);
    }
    Ok(Report { holds, text, data })
}

fn functor_maps(f: &GroupoidFunctor) -> Value {
    let (s, t) = (&f.source, &f.target);
    let objects: BTreeMap<&str, &str> = (0..s.num_objects())
        .map(|x| (s.object_label(x), t.object_label(f.f0[x])))
        .collect();
    let arrows: BTreeMap<&str, &str> = (0..s.num_morphisms())
        .map(|a| (s.morphism_label(a), t.morphism_label(f.f1[a])))
        .collect();
    json!({ "object_map": objects, "arrow_map": arrows })
}

fn morita(left: &Path, right: &Path) -> Result<Report> {
    let (g, h) = (load_groupoid(left)?, load_groupoid(right)?);
    let d = morita_equivalent(&g, &h).map_err(|e| match e {
        MoritaError::IsotropyTooLarge { order } => anyhow!("cap exceeded: isotropy group of order {order}"),
        e => anyhow!(e),
    })?;
    if !d.equivalent {
        let reason = d.reason.expect("inequivalence has a reason");
        return Ok(Report {
            holds: false,
            text: format!("not Morita equivalent: {reason}\n"),
            data: json!({ "equivalent": false, "reason": reason, "message": reason.to_string() }),
        });
    }
    let (text, witness) = match (&d.equivalence, &d.span) {
        (Some(w), _) => (
            "Morita equivalent: an equivalence of groupoids exists\n".to_string(),
            json!({ "kind": "equivalence", "forward": functor_maps(&w.forward), "backward": functor_maps(&w.backward) }),
        ),
        (None, Some(s)) => (
            format!("Morita equivalent through a span with {} apex objects\n", s.apex.num_objects()),
            json!({
                "kind": "span",
                "apex": GroupoidDoc::from_groupoid(&s.apex),
                "left": functor_maps(&s.left),
                "right": functor_maps(&s.right),
            }),
        ),
        (None, None) => bail!("equivalence reported without a witness"),
    };
    Ok(Report {
        holds: true,
        text,
        data: json!({ "equivalent": true, "witness": witness }),
    })
}

fn compose(first: &Path, second: &Path) -> Result<Report> {
    let p = read::<BibundleDoc>(first)?.load().with_context(|| first.display().to_string())?;
    let q = read::<BibundleDoc>(second)?.load().with_context(|| second.display().to_string())?;
    let r = compose_bibundles(&p, &q)
        .map_err(|_| anyhow!("the right groupoid of the first bibundle is not the left groupoid of the second"))?;
    let mut text = format!("composite bibundle with {} points\n", r.len());
    for (k, point) in r.left.carrier.iter().enumerate() {
        text += &format!(
            "  {point} over {} and {}\n",
            r.left.groupoid.object_label(r.left.anchor[k]),
            r.right.groupoid.object_label(r.right.anchor[k])
        );
    }
    Ok(Report {
        holds: true,
        text,
        data: serde_json::to_value(BibundleDoc::from_bibundle(&r))?,
    })
}

fn gerbe_check(path: &Path) -> Result<Report> {
    let doc: ExtensionDoc = read(path)?;
    let objects = doc.extended.objects.iter().map(|x| (x.clone(), x.clone())).collect();
    let f = FunctorDoc {
        source: doc.extended,
        target: doc.quotient,
        object_map: objects,
        arrow_map: doc.arrow_map,
    }
    .load()
    .with_context(|| path.display().to_string())?;
    let r = check_gerbe_conditions(&f);
    let (g, h) = (&f.source, &f.target);
    let mut text = format!(
        "objects_lift: {}\narrows_lift: {}\ngerbe: {}\n",
        r.objects_lift, r.arrows_lift, r.gerbe
    );
    let unlifted_object = r.unlifted_object.map(|y| h.object_label(y).to_string());
    let unlifted_arrow = r.unlifted_arrow.map(|(a, p, b)| {
        [g.object_label(a), h.morphism_label(p), g.object_label(b)].map(str::to_string)
    });
    if let Some(y) = &unlifted_object {
        text += &format!("witness: object {y} is not isomorphic to any image\n");
    }
    if let Some([a, p, b]) = &unlifted_arrow {
        text += &format!("witness: arrow {p} between the images of {a} and {b} has no preimage\n");
    }
    Ok(Report {
        holds: r.gerbe,
        text,
        data: json!({
            "objects_lift": r.objects_lift,
            "arrows_lift": r.arrows_lift,
            "gerbe": r.gerbe,
            "unlifted_object": unlifted_object,
            "unlifted_arrow": unlifted_arrow,
        }),
    })
}

fn extension_induce(path: &Path) -> Result<Report> {
    let f = read::<FunctorDoc>(path)?.load().with_context(|| path.display().to_string())?;
    match induced_extension(&f) {
        Ok(ind) => {
            let e = &ind.extension;
            Ok(Report {
                holds: true,
                text: format!(
                    "induced extension: {} objects, {} arrows onto {} arrows\n",
                    e.extended().num_objects(),
                    e.extended().num_morphisms(),
                    e.quotient().num_morphisms()
                ),
                data: serde_json::to_value(ExtensionDoc::from_extension(e))?,
            })
        }
        Err(err) => Ok(Report {
            holds: false,
            text: format!("no induced extension: {err}\n"),
            data: json!({ "induced": false, "reason": err.to_string() }),
        }),
    }
}

fn pullback(ext_path: &Path, map_path: &Path) -> Result<Report> {
    let ext = read::<ExtensionDoc>(ext_path)?.load().with_context(|| ext_path.display().to_string())?;
    let m: PullbackMapDoc = read(map_path)?;
    let g = ext.extended();
    let mut f = Vec::with_capacity(m.points.len());
    for p in &m.points {
        let y = m.map.get(p).ok_or_else(|| anyhow!("{}: no image for point {p:?}", map_path.display()))?;
        let x = g.object_index(y).ok_or_else(|| anyhow!("{}: unknown object {y:?}", map_path.display()))?;
        f.push(x);
    }
    if let Some(extra) = m.map.keys().find(|k| !m.points.contains(k)) {
        bail!("{}: {extra:?} is not a listed point", map_path.display());
    }
    match pullback_extension(&ext, m.points.clone(), &f) {
        Ok((pulled, _)) => Ok(Report {
            holds: true,
            text: format!(
                "pulled back extension: {} objects, {} arrows\n",
                pulled.extended().num_objects(),
                pulled.extended().num_morphisms()
            ),
            data: serde_json::to_value(ExtensionDoc::from_extension(&pulled))?,
        }),
        Err(e) => Ok(Report {
            holds: false,
            text: format!("pullback failed: {e}\n"),
            data: json!({ "pulled_back": false, "reason": e.to_string() }),
        }),
    }
}

fn descent_check(path: &Path, cap: usize) -> Result<Report> {
    let doc: DescentDoc = read(path)?;
    let g = Arc::new(doc.groupoid.to_groupoid().with_context(|| path.display().to_string())?);
    let cover = doc.covering().with_context(|| path.display().to_string())?;
    let presheaf: Box<dyn GroupoidPresheaf> = match doc.presheaf {
        PresheafKind::Bg => Box::new(BgPresheaf::new(g, cap)),
        PresheafKind::Constant => Box::new(ConstantPresheaf::new(g, cap)),
    };
    let r = check_stack_condition(presheaf.as_ref(), &cover)?;
    let mut text = format!(
        "full: {}\nfaithful: {}\nessentially surjective: {}\nstack condition: {}\n",
        r.full, r.faithful, r.ess_surjective, r.stack
    );
    text += &format!(
        "descent category: {} objects, {} morphisms\n",
        r.descent_objects, r.descent_morphisms
    );
    if let Some(d) = &r.unglued {
        text += &format!(
            "witness: descent datum with sections {:?} and gluing {:?} does not come from the base\n",
            d.sections, d.gluing
        );
    }
    Ok(Report {
        holds: r.stack,
        text,
        data: serde_json::to_value(&r)?,
    })
}

fn split(path: &Path) -> Result<Report> {
    let ses = read::<SesDoc>(path)?.load().with_context(|| path.display().to_string())?;
    let g = ses.b.groupoid().clone();
    match find_equivariant_splitting(&ses) {
        Some(r) => {
            let doc = splitting_doc(&g, &r);
            let mut text = String::new();
            for (x, m) in &doc {
                text += &format!("r[{x}] = {m}\n");
            }
            Ok(Report {
                holds: true,
                text,
                data: json!({ "splitting": doc }),
            })
        }
        None => Ok(Report {
            holds: false,
            text: "INFEASIBLE\n".to_string(),
            data: json!({ "splitting": "INFEASIBLE" }),
        }),
    }
}
