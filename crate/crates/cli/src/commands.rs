//! Command implementations. Each returns a report plus, for `search` and
//! `regularize`, the serialized artifact to write next to it.

use std::collections::BTreeMap;

use regcat_core::category::{double_count, AxiomCheck};
use regcat_core::monoidal::{
    check_braiding_compat, check_obstruction_multiplicativity, search_ybe_solutions, ybe_sides, LAW_YBE,
};
use regcat_core::morphism::{generalized_inverses, is_regular_pair};
use regcat_core::semiatlas::{derive_transitions, orientation_report};
use regcat_core::{
    build_regularization, enumerate_regular_ncycles, obstructedness_degree, verify_2category_axioms, Backend, Braiding,
    CategoryError, FinCategory, FinObject, MonoidalError, MonoidalStructure, Morphism, MorphismError,
    ObstructionAssignment, Reg2Category, RegAlgebraError, RegularityMode, SearchBounds, SemiAtlas, SemiAtlasError,
};
use serde::Serialize;

use crate::report::{sha256_hex, Artifact, Builder, Effective, Header, Record, Report};
use crate::schema::{
    index_of, resolve_objects, AtlasSpec, CategorySpec, Document, Input, Kind, MapSpec, MonoidalSpec, MorphismSpec,
    Options, SchemaError,
};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("cannot access {path}: {message}")]
    Io { path: String, message: String },
    #[error(transparent)]
    Schema(#[from] SchemaError),
    #[error("invalid input: {0}")]
    Input(String),
    #[error("search space too large: {0}")]
    Bound(String),
    #[error("{command} does not apply to {kind} inputs")]
    Unsupported { command: String, kind: String },
}

impl CliError {
    /// 2 for input errors, 3 for exceeded resource bounds.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Bound(_) => 3,
            _ => 2,
        }
    }
}

fn morphism_bound(e: &MorphismError) -> bool {
    matches!(e, MorphismError::SearchSpaceTooLarge { .. })
}

impl From<MorphismError> for CliError {
    fn from(e: MorphismError) -> Self {
        if morphism_bound(&e) {
            CliError::Bound(e.to_string())
        } else {
            CliError::Input(e.to_string())
        }
    }
}

impl From<CategoryError> for CliError {
    fn from(e: CategoryError) -> Self {
        match &e {
            CategoryError::SearchSpaceTooLarge { .. } => CliError::Bound(e.to_string()),
            CategoryError::Morphism(m) if morphism_bound(m) => CliError::Bound(e.to_string()),
            _ => CliError::Input(e.to_string()),
        }
    }
}

impl From<SemiAtlasError> for CliError {
    fn from(e: SemiAtlasError) -> Self {
        match &e {
            SemiAtlasError::Morphism(m) if morphism_bound(m) => CliError::Bound(e.to_string()),
            _ => CliError::Input(e.to_string()),
        }
    }
}

impl From<MonoidalError> for CliError {
    fn from(e: MonoidalError) -> Self {
        match &e {
            MonoidalError::ObjectTooLarge { .. } => CliError::Bound(e.to_string()),
            MonoidalError::Morphism(m) if morphism_bound(m) => CliError::Bound(e.to_string()),
            _ => CliError::Input(e.to_string()),
        }
    }
}

impl From<RegAlgebraError> for CliError {
    fn from(e: RegAlgebraError) -> Self {
        CliError::Input(e.to_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CommandKind {
    Check,
    Search,
    Regularize,
}

impl CommandKind {
    fn name(self) -> &'static str {
        match self {
            CommandKind::Check => "check",
            CommandKind::Search => "search",
            CommandKind::Regularize => "regularize",
        }
    }
}

/// Flag values; `None` defers to the document's options.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub n_max: Option<usize>,
    pub bound: Option<u64>,
    pub mode: Option<RegularityMode>,
    pub backend: Option<Backend>,
    pub seed: Option<u64>,
}

struct Context {
    n_max: Option<usize>,
    bounds: SearchBounds,
    mode: RegularityMode,
    seed: u64,
}

impl Context {
    fn n_max_or(&self, default: usize) -> usize {
        self.n_max.unwrap_or(default)
    }
}

pub struct Outcome {
    pub report: Report,
    pub artifact: Option<String>,
}

fn artifact_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("artifacts serialize");
    s.push('\n');
    s
}

pub fn run(command: CommandKind, input_bytes: &[u8], over: &Overrides) -> Result<Outcome, CliError> {
    let text = std::str::from_utf8(input_bytes).map_err(|e| CliError::Input(format!("input is not UTF-8: {e}")))?;
    let input = crate::schema::parse(text)?;
    if let Some(b) = over.backend {
        if b != input.backend {
            return Err(SchemaError::schema(
                "backend",
                format!("document backend {} differs from --backend {b}", input.backend),
            )
            .into());
        }
    }
    let ctx = Context {
        n_max: over.n_max.or(input.options.n_max),
        bounds: SearchBounds::with_max(
            over.bound
                .or(input.options.bound)
                .unwrap_or(SearchBounds::default().max_candidates),
        ),
        mode: over.mode.or(input.options.mode).unwrap_or_default(),
        seed: over.seed.or(input.options.seed).unwrap_or(0),
    };
    let mut b = Builder::default();
    let mut artifact = None;
    let n_max = match (command, &input.document) {
        (CommandKind::Check, Document::Atlas(s)) => check_atlas(&input, s, &ctx, &mut b)?,
        (CommandKind::Search, Document::Atlas(s)) => {
            let (n, a) = search_atlas(&input, s, &ctx, &mut b)?;
            artifact = Some(a);
            n
        }
        (CommandKind::Check, Document::Category(s)) => check_category(&input, s, &ctx, &mut b)?,
        (CommandKind::Search, Document::Category(s)) => {
            let (n, a) = search_category(&input, s, &ctx, &mut b)?;
            artifact = Some(a);
            n
        }
        (CommandKind::Regularize, Document::Category(s)) => {
            let (n, a) = regularize_category(&input, s, &ctx, &mut b)?;
            artifact = Some(a);
            n
        }
        (CommandKind::Check, Document::Reg2Category(r)) => {
            push_axioms(&mut b, r);
            r.n
        }
        (CommandKind::Check, Document::Monoidal(s)) => check_monoidal(&input, s, &ctx, &mut b)?,
        (CommandKind::Search, Document::Monoidal(s)) => {
            let (n, a) = search_monoidal(&input, s, &ctx, &mut b)?;
            artifact = Some(a);
            n
        }
        (CommandKind::Check, Document::AlgebraBundle(s)) => {
            let report = s.resolve()?.check_all()?;
            b.extend(report.laws);
            let pre: Vec<Record> = report.preconditions.into_iter().map(Record::from).collect();
            b.fact("preconditions", pre);
            0
        }
        (CommandKind::Check, Document::Morphism(s)) => check_morphism(&input, s, &ctx, &mut b)?,
        (CommandKind::Search, Document::Morphism(s)) => {
            let (n, a) = search_morphism(&input, s, &ctx, &mut b)?;
            artifact = Some(a);
            n
        }
        _ => {
            return Err(CliError::Unsupported {
                command: command.name().to_string(),
                kind: input.kind.name().to_string(),
            })
        }
    };
    if let (Some(a), Some(text)) = (&mut b.artifact, &artifact) {
        a.sha256 = sha256_hex(text.as_bytes());
    }
    let header = Header {
        command: command.name().to_string(),
        kind: input.kind.name().to_string(),
        backend: input.backend.to_string(),
        input_sha256: sha256_hex(input_bytes),
        seed: ctx.seed,
        options: Effective {
            n_max,
            bound: ctx.bounds.max_candidates,
            mode: mode_flag(ctx.mode).to_string(),
        },
    };
    Ok(Outcome {
        report: Report::assemble(header, b),
        artifact,
    })
}

/// The spelling accepted by `--mode`.
fn mode_flag(mode: RegularityMode) -> &'static str {
    match mode {
        RegularityMode::Stated => "stated",
        RegularityMode::AllRotations => "all-rotations",
    }
}

fn set_artifact(b: &mut Builder, kind: &str, entries: usize) {
    b.artifact = Some(Artifact {
        kind: kind.to_string(),
        entries,
        sha256: String::new(),
    });
}

fn build_atlas(input: &Input, s: &AtlasSpec) -> Result<SemiAtlas, CliError> {
    let charts = resolve_objects(&s.charts, input.backend, "payload.charts")?;
    let mut atlas = SemiAtlas::new(charts.clone())?;
    for (i, [a, c]) in s.overlaps.iter().enumerate() {
        let f = format!("payload.overlaps[{i}]");
        atlas.add_overlap(index_of(&charts, a, &f)?, index_of(&charts, c, &f)?)?;
    }
    for (i, t) in s.transitions.iter().enumerate() {
        let f = format!("payload.transitions[{i}]");
        let (to, from) = (index_of(&charts, &t.to, &f)?, index_of(&charts, &t.from, &f)?);
        let phi = t.map.resolve(&charts[from].1, &charts[to].1, &format!("{f}.map"))?;
        atlas.add_overlap(to, from)?;
        atlas.set_transition(to, from, phi)?;
    }
    if let Some(m) = &s.model {
        let model = m.object.resolve(input.backend, "payload.model.object")?;
        let mut maps = BTreeMap::new();
        for (name, spec) in &m.maps {
            let f = format!("payload.model.maps.{name}");
            let a = index_of(&charts, name, &f)?;
            maps.insert(a, spec.resolve(&model, &charts[a].1, &f)?);
        }
        atlas.set_model(model, maps)?;
    }
    Ok(atlas)
}

fn check_atlas(input: &Input, s: &AtlasSpec, ctx: &Context, b: &mut Builder) -> Result<usize, CliError> {
    let atlas = build_atlas(input, s)?;
    let n_max = ctx.n_max_or(atlas.len());
    let names = atlas.names().to_vec();
    if s.model.is_some() {
        let bad = atlas.gluing_violations();
        for (a, c) in atlas.edges() {
            let subject = format!("{}→{}", names[c], names[a]);
            b.push(Record::new(
                "gluing relation",
                subject,
                !bad.contains(&(a, c)),
                Some("Φ∘φ differs from φ".into()),
            ));
        }
    }
    let tower = obstructedness_degree(&atlas, Some(n_max));
    for r in &tower.records {
        let subject = format!("n={} ({})", r.n, r.cycle.join(" "));
        let detail = match &r.obstruction {
            Some(e) => format!("tower identity {e}"),
            None => "a transition on the cycle is missing".to_string(),
        };
        b.push(Record::new(
            "cocycle condition",
            subject.clone(),
            r.cocycle_holds,
            Some(detail.clone()),
        ));
        b.push(Record::new("n-regularity", subject, r.n_regular, Some(detail)));
    }
    b.fact("charts", atlas.len());
    b.fact("obstructedness_degree", tower.obstructedness_degree);
    if input.backend == Backend::Super {
        b.fact("orientation", orientation_report(&atlas)?);
    }
    Ok(n_max)
}

#[derive(Serialize)]
struct AtlasCatalog {
    kind: &'static str,
    edges: Vec<regcat_core::semiatlas::EdgeSolutions>,
    transitions: Vec<crate::schema::Arrow>,
}

fn search_atlas(input: &Input, s: &AtlasSpec, ctx: &Context, b: &mut Builder) -> Result<(usize, String), CliError> {
    let atlas = build_atlas(input, s)?;
    let names = atlas.names().to_vec();
    let n_max = ctx.n_max_or(atlas.len());
    match derive_transitions(&atlas, &ctx.bounds) {
        Ok((derived, edges)) => {
            for e in &edges {
                b.push(Record::new(
                    "gluing relation solvable",
                    format!("{}→{}", e.beta, e.alpha),
                    true,
                    None,
                ));
            }
            let transitions = derived
                .transitions()
                .map(|((a, c), phi)| crate::schema::Arrow {
                    from: names[c].clone(),
                    to: names[a].clone(),
                    map: MapSpec::of(phi),
                })
                .collect();
            set_artifact(b, "transition catalog", edges.len());
            let cat = AtlasCatalog {
                kind: "transitions",
                edges,
                transitions,
            };
            Ok((n_max, artifact_json(&cat)))
        }
        Err(SemiAtlasError::NoSolution(failing)) => {
            for e in &failing {
                b.push(Record::new(
                    "gluing relation solvable",
                    e.clone(),
                    false,
                    Some("no transition satisfies Φ∘φ_β = φ_α".into()),
                ));
            }
            set_artifact(b, "transition catalog", 0);
            let cat = AtlasCatalog {
                kind: "transitions",
                edges: Vec::new(),
                transitions: Vec::new(),
            };
            Ok((n_max, artifact_json(&cat)))
        }
        Err(e) => Err(e.into()),
    }
}

fn build_category(input: &Input, s: &CategorySpec, ctx: &Context) -> Result<FinCategory, CliError> {
    let objects = resolve_objects(&s.objects, input.backend, "payload.objects")?;
    if s.full {
        return Ok(FinCategory::full(objects, &ctx.bounds)?);
    }
    let mut gens = Vec::new();
    for (i, g) in s.generators.iter().enumerate() {
        let f = format!("payload.generators[{i}]");
        let (x, y) = (index_of(&objects, &g.from, &f)?, index_of(&objects, &g.to, &f)?);
        gens.push((x, y, g.map.resolve(&objects[x].1, &objects[y].1, &format!("{f}.map"))?));
    }
    Ok(FinCategory::generated(objects, gens, &ctx.bounds)?)
}

fn axiom_record(n: usize, c: &AxiomCheck) -> Record {
    let detail = (!c.violations.is_empty())
        .then(|| format!("{} violations, e.g. {}", c.violation_count, c.violations.join("; ")));
    Record::new(
        &c.law,
        format!("Reg_{n} ({} instances)", c.checked),
        c.violation_count == 0,
        detail,
    )
}

fn push_axioms(b: &mut Builder, r: &Reg2Category) {
    for c in &verify_2category_axioms(r).checks {
        b.push(axiom_record(r.n, c));
    }
    b.fact(
        &format!("reg_{}_cells", r.n),
        [r.zero_cells.len(), r.one_cells.len(), r.two_cells.len()],
    );
}

fn category_axioms(cat: &FinCategory, b: &mut Builder) {
    let v = cat.axiom_violations();
    let detail = (!v.is_empty()).then(|| v.join("; "));
    b.push(Record::new(
        "category axioms",
        format!("{} objects", cat.len()),
        v.is_empty(),
        detail,
    ));
}

fn check_category(input: &Input, s: &CategorySpec, ctx: &Context, b: &mut Builder) -> Result<usize, CliError> {
    let cat = build_category(input, s, ctx)?;
    let n_max = ctx.n_max_or(2);
    category_axioms(&cat, b);
    for n in 1..=n_max {
        let r = build_regularization(&cat, n, ctx.mode, &ctx.bounds)?;
        push_axioms(b, &r);
        let dc = double_count(&cat, n, ctx.mode, &ctx.bounds)?;
        b.fact(
            &format!("double_count_{n}"),
            serde_json::json!({ "classes": dc.classes, "structures": dc.structures, "bijective": dc.bijective }),
        );
    }
    b.fact("morphisms", cat.morphism_count());
    Ok(n_max)
}

fn regularize_category(
    input: &Input,
    s: &CategorySpec,
    ctx: &Context,
    b: &mut Builder,
) -> Result<(usize, String), CliError> {
    let cat = build_category(input, s, ctx)?;
    let n = ctx.n_max_or(1);
    category_axioms(&cat, b);
    let r = build_regularization(&cat, n, ctx.mode, &ctx.bounds)?;
    push_axioms(b, &r);
    set_artifact(
        b,
        "reg2category",
        r.zero_cells.len() + r.one_cells.len() + r.two_cells.len(),
    );
    // written as a canonical input document so `check` and `fmt` accept it
    let doc = Input {
        kind: Kind::Reg2category,
        backend: Backend::FinMap,
        options: Options::default(),
        document: Document::Reg2Category(Box::new(r)),
    };
    Ok((n, doc.to_canonical()))
}

#[derive(Serialize)]
struct CycleEntry {
    n: usize,
    objects: Vec<String>,
    legs: Vec<MapSpec>,
}

fn search_category(
    input: &Input,
    s: &CategorySpec,
    ctx: &Context,
    b: &mut Builder,
) -> Result<(usize, String), CliError> {
    let cat = build_category(input, s, ctx)?;
    let n_max = ctx.n_max_or(2);
    let mut entries = Vec::new();
    for n in 1..=n_max {
        let cycles = enumerate_regular_ncycles(&cat, n, ctx.mode, &ctx.bounds)?;
        b.fact(&format!("regular_{n}_cycles"), cycles.len());
        for c in &cycles {
            b.push(Record::new(
                "regular n-cycle",
                c.describe(&cat),
                c.is_regular(ctx.mode),
                None,
            ));
            entries.push(CycleEntry {
                n,
                objects: c.objects().iter().map(|&x| cat.name(x).to_string()).collect(),
                legs: c.legs().iter().map(MapSpec::of).collect(),
            });
        }
    }
    set_artifact(b, "regular cycle catalog", entries.len());
    let doc = serde_json::json!({ "kind": "regular-cycles", "mode": ctx.mode, "cycles": entries });
    Ok((n_max, artifact_json(&doc)))
}

struct MonoidalSetup {
    m: MonoidalStructure,
    objects: Vec<FinObject>,
    e: ObstructionAssignment,
    braiding: Option<Braiding>,
}

fn build_monoidal(input: &Input, s: &MonoidalSpec) -> Result<MonoidalSetup, CliError> {
    let m = MonoidalStructure::new(input.backend)?;
    let objects = s
        .objects
        .iter()
        .enumerate()
        .map(|(i, o)| o.resolve(input.backend, &format!("payload.objects[{i}]")))
        .collect::<Result<Vec<_>, _>>()?;
    let mut e = if s.default_identity {
        ObstructionAssignment::identities()
    } else {
        ObstructionAssignment::default()
    };
    for (i, o) in s.obstructions.iter().enumerate() {
        let f = format!("payload.obstructions[{i}]");
        let x = o.object.resolve(input.backend, &f)?;
        e = e.with(o.map.resolve(&x, &x, &format!("{f}.map"))?);
    }
    let braiding = match &s.braiding {
        None => None,
        Some(bs) => {
            let mut br = Braiding {
                rule: bs.rule,
                ..Braiding::default()
            };
            for (i, c) in bs.components.iter().enumerate() {
                let f = format!("payload.braiding.components[{i}]");
                let x = c.x.resolve(input.backend, &f)?;
                let y = c.y.resolve(input.backend, &f)?;
                let map = c.map.resolve(
                    &m.tensor_objects(&x, &y)?,
                    &m.tensor_objects(&y, &x)?,
                    &format!("{f}.map"),
                )?;
                br = br.with(x, y, map);
            }
            Some(br)
        }
    };
    Ok(MonoidalSetup {
        m,
        objects,
        e,
        braiding,
    })
}

fn check_monoidal(input: &Input, s: &MonoidalSpec, _ctx: &Context, b: &mut Builder) -> Result<usize, CliError> {
    let st = build_monoidal(input, s)?;
    b.extend(check_obstruction_multiplicativity(&st.m, &st.e, &st.objects));
    if let Some(br) = &st.braiding {
        b.extend(check_braiding_compat(&st.m, br, &st.e, &st.objects));
        for x in &st.objects {
            for y in &st.objects {
                for z in &st.objects {
                    let subject = format!("({x}, {y}, {z})");
                    match ybe_sides(&st.m, br, &st.e, x, y, z) {
                        Ok((l, r)) => b.push(Record::new(
                            LAW_YBE,
                            subject,
                            l == r,
                            Some(format!("lhs = {l}, rhs = {r}")),
                        )),
                        Err(err) => b.push(Record::new(LAW_YBE, subject, false, Some(err.to_string()))),
                    }
                }
            }
        }
    }
    b.fact("objects", st.objects.len());
    Ok(0)
}

#[derive(Serialize)]
struct YbeCatalogDoc {
    kind: &'static str,
    object: crate::schema::ObjectSpec,
    candidates: u64,
    ybe_count: u64,
    solutions: Vec<MapSpec>,
}

fn search_monoidal(
    input: &Input,
    s: &MonoidalSpec,
    ctx: &Context,
    b: &mut Builder,
) -> Result<(usize, String), CliError> {
    let st = build_monoidal(input, s)?;
    let x = match &s.search_object {
        Some(o) => o.resolve(input.backend, "payload.search_object")?,
        None => *st
            .objects
            .first()
            .ok_or_else(|| SchemaError::schema("payload.objects", "no object to search on"))?,
    };
    let cat = search_ybe_solutions(&st.m, &st.e, &x, s.object_bound, &ctx.bounds)?;
    for sol in &cat.solutions {
        b.push(Record::new(LAW_YBE, sol.to_string(), true, None));
    }
    b.fact("candidates", cat.candidates);
    b.fact("ybe_count", cat.ybe_count);
    b.fact("solutions", cat.solutions.len());
    set_artifact(b, "ybe catalog", cat.solutions.len());
    let doc = YbeCatalogDoc {
        kind: "ybe-solutions",
        object: crate::schema::ObjectSpec::of(&x),
        candidates: cat.candidates,
        ybe_count: cat.ybe_count,
        solutions: cat.solutions.iter().map(MapSpec::of).collect(),
    };
    Ok((0, artifact_json(&doc)))
}

fn build_morphism(input: &Input, s: &MorphismSpec) -> Result<Morphism, CliError> {
    let dom = s.dom.resolve(input.backend, "payload.dom")?;
    let cod = s.cod.resolve(input.backend, "payload.cod")?;
    Ok(s.map.resolve(&dom, &cod, "payload.map")?)
}

fn check_morphism(input: &Input, s: &MorphismSpec, ctx: &Context, b: &mut Builder) -> Result<usize, CliError> {
    let f = build_morphism(input, s)?;
    let inverses = generalized_inverses(&f, &ctx.bounds)?;
    let detail = Some("no g with f∘g∘f = f in the search space".to_string());
    b.push(Record::new(
        "regular element",
        f.to_string(),
        !inverses.is_empty(),
        detail,
    ));
    if let Some(g) = inverses.first() {
        b.push(Record::new(
            "generalized inverse",
            g.to_string(),
            is_regular_pair(&f, g)?,
            None,
        ));
    }
    b.fact("generalized_inverses", inverses.len());
    Ok(0)
}

fn search_morphism(
    input: &Input,
    s: &MorphismSpec,
    ctx: &Context,
    b: &mut Builder,
) -> Result<(usize, String), CliError> {
    let f = build_morphism(input, s)?;
    let inverses = generalized_inverses(&f, &ctx.bounds)?;
    for g in &inverses {
        b.push(Record::new("generalized inverse", g.to_string(), true, None));
    }
    b.fact("generalized_inverses", inverses.len());
    set_artifact(b, "generalized inverse catalog", inverses.len());
    let doc = serde_json::json!({
        "kind": "generalized-inverses",
        "morphism": MapSpec::of(&f),
        "inverses": inverses.iter().map(MapSpec::of).collect::<Vec<_>>(),
    });
    Ok((0, artifact_json(&doc)))
}
