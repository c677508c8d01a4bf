//! The input document format.
//!
//! Every input is one JSON object:
//!
//! ```json
//! { "kind": "atlas", "backend": "finmap", "options": { "n_max": 3 }, "payload": { ... } }
//! ```
//!
//! Inside a payload, objects are written compactly for the document's
//! backend (a size for `finmap`, a dimension for `rat`, an
//! `{even, odd, generators}` triple for `super`) and morphisms are bare
//! payloads whose domain and codomain come from context: a table for
//! `finmap`, a list of rows for `rat` and `super`.

use std::collections::BTreeMap;

use regcat_core::grassmann::{SuperDim, SuperMatrix, Supernumber};
use regcat_core::rational::RationalRepr;
use regcat_core::regalgebra::{LinearSpace, StructureMaps};
use regcat_core::{Backend, FinObject, Morphism, Payload, RatMatrix, Rational, Reg2Category, RegularityMode};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

#[derive(Debug, thiserror::Error)]
pub enum SchemaError {
    #[error("parse error at line {line}, column {column}{}: {message}", field_suffix(.field))]
    Parse {
        line: usize,
        column: usize,
        field: String,
        message: String,
    },
    #[error("schema error at {field}: {message}")]
    Schema { field: String, message: String },
}

fn field_suffix(field: &str) -> String {
    if field.is_empty() || field == "." {
        String::new()
    } else {
        format!(" (field {field})")
    }
}

impl SchemaError {
    pub fn schema(field: impl Into<String>, message: impl ToString) -> Self {
        SchemaError::Schema {
            field: field.into(),
            message: message.to_string(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Kind {
    Atlas,
    Category,
    Monoidal,
    AlgebraBundle,
    Morphism,
    Reg2category,
}

impl Kind {
    pub fn name(self) -> &'static str {
        match self {
            Kind::Atlas => "atlas",
            Kind::Category => "category",
            Kind::Monoidal => "monoidal",
            Kind::AlgebraBundle => "algebra-bundle",
            Kind::Morphism => "morphism",
            Kind::Reg2category => "reg2category",
        }
    }
}

/// Options stored in the document; command-line flags override them.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Options {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_max: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bound: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode: Option<RegularityMode>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl Options {
    pub fn is_empty(&self) -> bool {
        *self == Options::default()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Envelope {
    pub kind: Kind,
    pub backend: Backend,
    #[serde(default, skip_serializing_if = "Options::is_empty")]
    pub options: Options,
    pub payload: serde_json::Value,
}

/// An object in compact form.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ObjectSpec {
    Size(usize),
    Super { even: usize, odd: usize, generators: usize },
}

impl ObjectSpec {
    pub fn resolve(&self, backend: Backend, field: &str) -> Result<FinObject, SchemaError> {
        match (backend, self) {
            (Backend::FinMap, ObjectSpec::Size(n)) => Ok(FinObject::set(*n)),
            (Backend::Rat, ObjectSpec::Size(n)) => Ok(FinObject::vector(*n)),
            (Backend::Super, &ObjectSpec::Super { even, odd, generators }) => {
                Ok(FinObject::superspace(SuperDim::new(even, odd), generators))
            }
            _ => Err(SchemaError::schema(
                field,
                format!("object form does not match backend {backend}"),
            )),
        }
    }

    pub fn of(obj: &FinObject) -> Self {
        match *obj {
            FinObject::Set { size } => ObjectSpec::Size(size),
            FinObject::Rat { dim } => ObjectSpec::Size(dim),
            FinObject::Super { even, odd, generators } => ObjectSpec::Super { even, odd, generators },
        }
    }
}

/// A matrix entry: a rational, or a full supernumber for the `super` backend.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum EntrySpec {
    Scalar(RationalRepr),
    Super(Supernumber),
}

/// A morphism payload in compact form.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MapSpec {
    Table(Vec<usize>),
    Rows(Vec<Vec<EntrySpec>>),
}

fn rational(e: &EntrySpec, field: &str) -> Result<Rational, SchemaError> {
    match e {
        EntrySpec::Scalar(r) => Rational::try_from(r.clone()).map_err(|err| SchemaError::schema(field, err)),
        EntrySpec::Super(_) => Err(SchemaError::schema(field, "supernumber entry in a rational matrix")),
    }
}

fn check_rows(rows: &[Vec<EntrySpec>], r: usize, c: usize, field: &str) -> Result<(), SchemaError> {
    if rows.len() != r || rows.iter().any(|row| row.len() != c) {
        return Err(SchemaError::schema(field, format!("expected a {r}x{c} matrix")));
    }
    Ok(())
}

impl MapSpec {
    /// `[]` parses as a table; for matrices it is accepted as the empty
    /// list of rows.
    pub fn resolve(&self, dom: &FinObject, cod: &FinObject, field: &str) -> Result<Morphism, SchemaError> {
        let payload = match (dom.backend(), self) {
            (Backend::FinMap, MapSpec::Table(t)) => Payload::Map(t.clone()),
            (Backend::Rat, MapSpec::Rows(rows)) => {
                check_rows(rows, cod.size(), dom.size(), field)?;
                let data = rows
                    .iter()
                    .flatten()
                    .map(|e| rational(e, field))
                    .collect::<Result<Vec<_>, _>>()?;
                Payload::Rat(RatMatrix::new(cod.size(), dom.size(), data).map_err(|e| SchemaError::schema(field, e))?)
            }
            (Backend::Rat, MapSpec::Table(t)) if t.is_empty() && cod.size() == 0 => {
                Payload::Rat(RatMatrix::zeros(cod.size(), dom.size()))
            }
            (Backend::Super, MapSpec::Rows(rows)) => {
                let (rd, cd) = (cod.super_dim().expect("super"), dom.super_dim().expect("super"));
                let FinObject::Super { generators, .. } = *dom else {
                    unreachable!()
                };
                check_rows(rows, rd.total(), cd.total(), field)?;
                let entries = rows
                    .iter()
                    .flatten()
                    .map(|e| match e {
                        EntrySpec::Super(s) => Ok(s.clone()),
                        EntrySpec::Scalar(_) => Ok(Supernumber::scalar(generators, rational(e, field)?)),
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                Payload::Super(
                    SuperMatrix::new(rd, cd, generators, entries).map_err(|e| SchemaError::schema(field, e))?,
                )
            }
            (b, _) => {
                return Err(SchemaError::schema(
                    field,
                    format!("map form does not match backend {b}"),
                ))
            }
        };
        Morphism::new(*dom, *cod, payload).map_err(|e| SchemaError::schema(field, e))
    }

    pub fn of(m: &Morphism) -> Self {
        match m.payload() {
            Payload::Map(t) => MapSpec::Table(t.clone()),
            Payload::Rat(r) => MapSpec::Rows(
                r.row_vecs()
                    .iter()
                    .map(|row| row.iter().map(|q| EntrySpec::Scalar(RationalRepr::from(q))).collect())
                    .collect(),
            ),
            Payload::Super(s) => MapSpec::Rows(
                s.row_vecs()
                    .into_iter()
                    .map(|row| row.into_iter().map(EntrySpec::Super).collect())
                    .collect(),
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NamedObject {
    pub name: String,
    pub object: ObjectSpec,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Arrow {
    pub from: String,
    pub to: String,
    pub map: MapSpec,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelSpec {
    pub object: ObjectSpec,
    pub maps: BTreeMap<String, MapSpec>,
}

/// Charts, transition maps `from → to` and an optional model. Overlaps are
/// the pairs with a transition in either direction plus any listed
/// explicitly.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AtlasSpec {
    pub charts: Vec<NamedObject>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub overlaps: Vec<[String; 2]>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub transitions: Vec<Arrow>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub model: Option<ModelSpec>,
}

/// Objects and generating morphisms; the category is their closure, or
/// every map between the objects when `full` is set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CategorySpec {
    pub objects: Vec<NamedObject>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub generators: Vec<Arrow>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub full: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ObstructionSpec {
    pub object: ObjectSpec,
    pub map: MapSpec,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComponentSpec {
    pub x: ObjectSpec,
    pub y: ObjectSpec,
    pub map: MapSpec,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BraidingSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rule: Option<regcat_core::BraidingRule>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub components: Vec<ComponentSpec>,
}

fn default_true() -> bool {
    true
}

fn is_true(b: &bool) -> bool {
    *b
}

fn default_object_bound() -> usize {
    2
}

fn is_default_object_bound(n: &usize) -> bool {
    *n == default_object_bound()
}

/// Objects to check, obstructions (identity where unassigned unless
/// `default_identity` is false), a braiding, and the object for YBE search.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MonoidalSpec {
    pub objects: Vec<ObjectSpec>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub obstructions: Vec<ObstructionSpec>,
    #[serde(default = "default_true", skip_serializing_if = "is_true")]
    pub default_identity: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub braiding: Option<BraidingSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub search_object: Option<ObjectSpec>,
    #[serde(default = "default_object_bound", skip_serializing_if = "is_default_object_bound")]
    pub object_bound: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceSpec {
    pub dim: usize,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub labels: Vec<String>,
}

pub type Rows = Vec<Vec<RationalRepr>>;

/// Structure maps over an algebra `A` as rational row lists.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BundleSpec {
    pub algebra: SpaceSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub module_m: Option<SpaceSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub module_n: Option<SpaceSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub multiplication: Option<Rows>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub comultiplication: Option<Rows>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub action_m: Option<Rows>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub action_n: Option<Rows>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coaction_m: Option<Rows>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coaction_n: Option<Rows>,
    pub e_a: Rows,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub e_m: Option<Rows>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub e_n: Option<Rows>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MorphismSpec {
    pub dom: ObjectSpec,
    pub cod: ObjectSpec,
    pub map: MapSpec,
}

/// A parsed document with a typed payload.
#[derive(Debug, Clone, PartialEq)]
pub enum Document {
    Atlas(AtlasSpec),
    Category(CategorySpec),
    Monoidal(MonoidalSpec),
    AlgebraBundle(BundleSpec),
    Morphism(MorphismSpec),
    Reg2Category(Box<Reg2Category>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Input {
    pub kind: Kind,
    pub backend: Backend,
    pub options: Options,
    pub document: Document,
}

fn located<T: DeserializeOwned>(text: &str) -> Result<T, SchemaError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let field = e.path().to_string();
        let inner = e.into_inner();
        SchemaError::Parse {
            line: inner.line(),
            column: inner.column(),
            field,
            message: inner.to_string(),
        }
    })
}

fn payload<T: DeserializeOwned>(text: &str, value: &serde_json::Value) -> Result<T, SchemaError> {
    serde_path_to_error::deserialize(value).map_err(|e| {
        let field = format!("payload.{}", e.path());
        let message = e.into_inner().to_string();
        // the payload was already parsed once, so locate the field in the text
        let (line, column) = locate_key(text, "payload");
        SchemaError::Parse {
            line,
            column,
            field,
            message,
        }
    })
}

fn locate_key(text: &str, key: &str) -> (usize, usize) {
    let needle = format!("\"{key}\"");
    text.lines()
        .enumerate()
        .find_map(|(i, l)| l.find(&needle).map(|c| (i + 1, c + 1)))
        .unwrap_or((1, 1))
}

pub fn parse(text: &str) -> Result<Input, SchemaError> {
    let env: Envelope = located(text)?;
    let document = match env.kind {
        Kind::Atlas => Document::Atlas(payload(text, &env.payload)?),
        Kind::Category => Document::Category(payload(text, &env.payload)?),
        Kind::Monoidal => Document::Monoidal(payload(text, &env.payload)?),
        Kind::AlgebraBundle => Document::AlgebraBundle(payload(text, &env.payload)?),
        Kind::Morphism => Document::Morphism(payload(text, &env.payload)?),
        Kind::Reg2category => Document::Reg2Category(Box::new(payload(text, &env.payload)?)),
    };
    let input = Input {
        kind: env.kind,
        backend: env.backend,
        options: env.options,
        document,
    };
    input.validate_backend()?;
    Ok(input)
}

impl Input {
    fn validate_backend(&self) -> Result<(), SchemaError> {
        let ok = match self.kind {
            Kind::AlgebraBundle => self.backend == Backend::Rat,
            Kind::Monoidal => self.backend != Backend::Super,
            Kind::Category | Kind::Reg2category => self.backend == Backend::FinMap,
            Kind::Atlas | Kind::Morphism => true,
        };
        if ok {
            Ok(())
        } else {
            Err(SchemaError::schema(
                "backend",
                format!("kind {} does not support backend {}", self.kind.name(), self.backend),
            ))
        }
    }

    /// Canonical serialization: the envelope with a typed payload, pretty
    /// printed, ending in a newline.
    pub fn to_canonical(&self) -> String {
        let payload = match &self.document {
            Document::Atlas(s) => serde_json::to_value(s),
            Document::Category(s) => serde_json::to_value(s),
            Document::Monoidal(s) => serde_json::to_value(s),
            Document::AlgebraBundle(s) => serde_json::to_value(s),
            Document::Morphism(s) => serde_json::to_value(s),
            Document::Reg2Category(s) => serde_json::to_value(s),
        }
        .expect("payloads serialize");
        let env = Envelope {
            kind: self.kind,
            backend: self.backend,
            options: self.options.clone(),
            payload,
        };
        let mut out = serde_json::to_string_pretty(&env).expect("envelope serializes");
        out.push('\n');
        out
    }
}

/// Resolves named objects, rejecting duplicates.
pub fn resolve_objects(
    objs: &[NamedObject],
    backend: Backend,
    field: &str,
) -> Result<Vec<(String, FinObject)>, SchemaError> {
    let mut out: Vec<(String, FinObject)> = Vec::new();
    for (i, o) in objs.iter().enumerate() {
        let f = format!("{field}[{i}]");
        if out.iter().any(|(n, _)| *n == o.name) {
            return Err(SchemaError::schema(f, format!("duplicate name {}", o.name)));
        }
        out.push((o.name.clone(), o.object.resolve(backend, &f)?));
    }
    Ok(out)
}

pub fn index_of(names: &[(String, FinObject)], name: &str, field: &str) -> Result<usize, SchemaError> {
    names
        .iter()
        .position(|(n, _)| n == name)
        .ok_or_else(|| SchemaError::schema(field, format!("unknown name {name}")))
}

fn matrix(rows: &Rows, r: usize, c: usize, field: &str) -> Result<RatMatrix, SchemaError> {
    if rows.len() != r || rows.iter().any(|row| row.len() != c) {
        return Err(SchemaError::schema(field, format!("expected a {r}x{c} matrix")));
    }
    let data = rows
        .iter()
        .flatten()
        .map(|q| Rational::try_from(q.clone()).map_err(|e| SchemaError::schema(field, e)))
        .collect::<Result<Vec<_>, _>>()?;
    RatMatrix::new(r, c, data).map_err(|e| SchemaError::schema(field, e))
}

fn opt_matrix(rows: &Option<Rows>, r: usize, c: usize, field: &str) -> Result<Option<RatMatrix>, SchemaError> {
    rows.as_ref().map(|x| matrix(x, r, c, field)).transpose()
}

fn space(s: &SpaceSpec, field: &str) -> Result<LinearSpace, SchemaError> {
    if !s.labels.is_empty() && s.labels.len() != s.dim {
        return Err(SchemaError::schema(field, "label count differs from dimension"));
    }
    Ok(LinearSpace {
        dim: s.dim,
        labels: s.labels.clone(),
    })
}

impl BundleSpec {
    /// Converts to structure maps, checking every declared shape.
    pub fn resolve(&self) -> Result<StructureMaps, SchemaError> {
        let f = |name: &str| format!("payload.{name}");
        let a = self.algebra.dim;
        let need = |s: &Option<SpaceSpec>, what: &str, name: &str| -> Result<usize, SchemaError> {
            s.as_ref()
                .map(|s| s.dim)
                .ok_or_else(|| SchemaError::schema(f(what), format!("required by {name}")))
        };
        let uses_m = self.action_m.is_some() || self.coaction_m.is_some() || self.e_m.is_some();
        let uses_n = self.action_n.is_some() || self.coaction_n.is_some() || self.e_n.is_some();
        let m = if uses_m {
            need(&self.module_m, "module_m", "the M maps")?
        } else {
            0
        };
        let n = if uses_n {
            need(&self.module_n, "module_n", "the N maps")?
        } else {
            0
        };
        Ok(StructureMaps {
            algebra: space(&self.algebra, &f("algebra"))?,
            module_m: self.module_m.as_ref().map(|s| space(s, &f("module_m"))).transpose()?,
            module_n: self.module_n.as_ref().map(|s| space(s, &f("module_n"))).transpose()?,
            multiplication: opt_matrix(&self.multiplication, a, a * a, &f("multiplication"))?,
            comultiplication: opt_matrix(&self.comultiplication, a * a, a, &f("comultiplication"))?,
            action_m: opt_matrix(&self.action_m, m, a * m, &f("action_m"))?,
            action_n: opt_matrix(&self.action_n, n, a * n, &f("action_n"))?,
            coaction_m: opt_matrix(&self.coaction_m, m * a, m, &f("coaction_m"))?,
            coaction_n: opt_matrix(&self.coaction_n, n * a, n, &f("coaction_n"))?,
            e_a: matrix(&self.e_a, a, a, &f("e_a"))?,
            e_m: opt_matrix(&self.e_m, m, m, &f("e_m"))?,
            e_n: opt_matrix(&self.e_n, n, n, &f("e_n"))?,
        })
    }
}
