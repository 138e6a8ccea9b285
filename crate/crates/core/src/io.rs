//! Versioned JSON interchange documents.
//!
//! Every document is one JSON object with a common header (`format`,
//! `version`, `kind`, `field`, `algebra`, optional `shape`) and a body whose
//! keys depend on `kind`. Scalars are integers `0..p` over `F_p` and
//! `"num/den"` strings over `Q`. Matrices are row-major lists of rows.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::diagram::{Diagram, DiagramCategory, DiagramMap};
use crate::error::{Error, Result};
use crate::field::{Field, FieldSpec};
use crate::matrix::Matrix;
use crate::module::{Module, ModuleMap};
use crate::quiver::{Arrow, QuiverAlgebra, Relation};
use crate::shape::{ShapeCategory, ShapeKind};

pub const FORMAT: &str = "qshape";
pub const VERSION: u32 = 1;

pub type MatrixDoc = Vec<Vec<Value>>;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArrowDoc {
    pub name: String,
    pub source: String,
    pub target: String,
}

/// One term `coeff · path` of a relation; the path lists arrow names in the
/// order they are traversed.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermDoc {
    pub coeff: Value,
    pub path: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraDoc {
    pub vertices: Vec<String>,
    #[serde(default)]
    pub arrows: Vec<ArrowDoc>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub relations: Vec<Vec<TermDoc>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum ShapeDoc {
    Loop,
    Cyclic {
        m: usize,
        #[serde(rename = "N")]
        n: usize,
    },
    Custom {
        algebra: AlgebraDoc,
    },
}

/// A module: its dimension vector and one matrix per arrow, keyed by arrow name.
/// Arrows whose source or target has dimension zero may be omitted.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModuleDoc {
    pub dims: Vec<usize>,
    #[serde(default)]
    pub maps: BTreeMap<String, MatrixDoc>,
}

/// A diagram: the module at each shape object, and for each shape arrow one
/// matrix per base vertex.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiagramDoc {
    pub objects: Vec<ModuleDoc>,
    #[serde(default)]
    pub shape_maps: BTreeMap<String, Vec<MatrixDoc>>,
}

/// A morphism of diagrams: for each shape object, one matrix per base vertex.
/// Module maps are the one-object case.
pub type MapDoc = Vec<Vec<MatrixDoc>>;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Header {
    pub format: String,
    pub version: u32,
    pub field: FieldSpec,
    pub algebra: AlgebraDoc,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shape: Option<ShapeDoc>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HomologyEntry {
    pub object: String,
    pub degree: usize,
    pub dims: Vec<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ResolutionCertificates {
    pub weak_equivalence: bool,
    pub semiinjective: bool,
    pub minimal: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum IsoVerdictDoc {
    Isomorphic,
    NotIsomorphic,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CheckDoc {
    pub name: String,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Body {
    Module {
        module: ModuleDoc,
    },
    Diffmod {
        module: ModuleDoc,
        differential: Vec<MatrixDoc>,
    },
    Diagram {
        diagram: DiagramDoc,
    },
    Homology {
        source: DiagramDoc,
        entries: Vec<HomologyEntry>,
        exact: bool,
    },
    Resolution {
        source: DiagramDoc,
        target: DiagramDoc,
        map: MapDoc,
        certificates: ResolutionCertificates,
    },
    Split {
        source: DiagramDoc,
        minimal: DiagramDoc,
        injective: DiagramDoc,
        /// `source → minimal ⊕ injective`.
        iso: MapDoc,
    },
    Minimality {
        source: DiagramDoc,
        semiinjective: bool,
        minimal: bool,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        socle_in_cycles: Option<bool>,
        /// Present when `source` is semiinjective.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        split: Option<SplitWitness>,
    },
    Isomorphism {
        first: DiagramDoc,
        second: DiagramDoc,
        verdict: IsoVerdictDoc,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        reason: Option<String>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        witness: Option<MapDoc>,
    },
    DerivedHom {
        source: DiagramDoc,
        target: DiagramDoc,
        dim: usize,
        resolution_target: DiagramDoc,
        resolution_map: MapDoc,
        representatives: Vec<MapDoc>,
    },
    Verification {
        checked: String,
        checks: Vec<CheckDoc>,
        passed: bool,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SplitWitness {
    pub minimal: DiagramDoc,
    pub injective: DiagramDoc,
    pub iso: MapDoc,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Document {
    pub header: Header,
    pub body: Body,
}

impl Body {
    pub fn kind(&self) -> &'static str {
        match self {
            Body::Module { .. } => "module",
            Body::Diffmod { .. } => "diffmod",
            Body::Diagram { .. } => "diagram",
            Body::Homology { .. } => "homology",
            Body::Resolution { .. } => "resolution",
            Body::Split { .. } => "split",
            Body::Minimality { .. } => "minimality",
            Body::Isomorphism { .. } => "isomorphism",
            Body::DerivedHom { .. } => "derived-hom",
            Body::Verification { .. } => "verification",
        }
    }
}

const HEADER_KEYS: [&str; 5] = ["format", "version", "field", "algebra", "shape"];

fn from_value<T: DeserializeOwned>(v: Value, what: &str) -> Result<T> {
    serde_path_to_error::deserialize(v).map_err(|e| {
        let path = e.path().to_string();
        Error::Parse(format!("{what}: at `{path}`: {}", e.into_inner()))
    })
}

impl Document {
    pub fn parse(text: &str) -> Result<Self> {
        let value: Value =
            serde_json::from_str(text).map_err(|e| Error::Parse(format!("line {} column {}: {e}", e.line(), e.column())))?;
        Self::from_json(value)
    }

    pub fn from_json(value: Value) -> Result<Self> {
        let Value::Object(map) = value else {
            return Err(Error::Parse("document must be a JSON object".into()));
        };
        let (mut head, mut body) = (serde_json::Map::new(), serde_json::Map::new());
        for (k, v) in map {
            if HEADER_KEYS.contains(&k.as_str()) {
                head.insert(k, v);
            } else {
                body.insert(k, v);
            }
        }
        let header: Header = from_value(Value::Object(head), "header")?;
        if header.format != FORMAT {
            return Err(Error::Parse(format!("at `format`: expected \"{FORMAT}\", found {:?}", header.format)));
        }
        if header.version != VERSION {
            return Err(Error::Parse(format!("at `version`: unsupported version {}, expected {VERSION}", header.version)));
        }
        header.field.validate().map_err(|e| Error::Parse(format!("at `field`: {e}")))?;
        let body: Body = from_value(Value::Object(body), "body")?;
        Ok(Document { header, body })
    }

    pub fn to_json(&self) -> Value {
        let mut map = match serde_json::to_value(&self.header).expect("serializable") {
            Value::Object(m) => m,
            _ => unreachable!(),
        };
        if let Value::Object(b) = serde_json::to_value(&self.body).expect("serializable") {
            map.extend(b);
        }
        Value::Object(map)
    }

    /// Indented JSON with sorted keys, scalar arrays on one line, and a trailing newline.
    pub fn to_string_pretty(&self) -> String {
        to_string_pretty(&self.to_json())
    }

    pub fn digest(&self) -> String {
        digest(&self.to_json())
    }
}

pub fn to_string_pretty(v: &Value) -> String {
    let mut out = String::new();
    write_value(&mut out, v, 0);
    out.push('\n');
    out
}

fn is_scalar(v: &Value) -> bool {
    !matches!(v, Value::Array(_) | Value::Object(_))
}

fn write_value(out: &mut String, v: &Value, depth: usize) {
    let pad = |out: &mut String, d: usize| out.extend(std::iter::repeat_n("  ", d));
    match v {
        Value::Array(items) if items.is_empty() => out.push_str("[]"),
        Value::Array(items) if items.iter().all(is_scalar) => {
            out.push('[');
            for (i, x) in items.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                out.push_str(&x.to_string());
            }
            out.push(']');
        }
        Value::Array(items) => {
            out.push_str("[\n");
            for (i, x) in items.iter().enumerate() {
                pad(out, depth + 1);
                write_value(out, x, depth + 1);
                out.push_str(if i + 1 < items.len() { ",\n" } else { "\n" });
            }
            pad(out, depth);
            out.push(']');
        }
        Value::Object(map) if map.is_empty() => out.push_str("{}"),
        Value::Object(map) => {
            out.push_str("{\n");
            for (i, (k, x)) in map.iter().enumerate() {
                pad(out, depth + 1);
                out.push_str(&Value::String(k.clone()).to_string());
                out.push_str(": ");
                write_value(out, x, depth + 1);
                out.push_str(if i + 1 < map.len() { ",\n" } else { "\n" });
            }
            pad(out, depth);
            out.push('}');
        }
        scalar => out.push_str(&scalar.to_string()),
    }
}

/// First 16 hex digits of the SHA-256 of the compact sorted-key JSON.
pub fn digest(v: &Value) -> String {
    let bytes = serde_json::to_vec(v).expect("serializable");
    Sha256::digest(&bytes).iter().take(8).map(|b| format!("{b:02x}")).collect()
}

pub fn header<F: Field>(algebra: &QuiverAlgebra<F>, shape: Option<&ShapeCategory<F>>) -> Header {
    Header {
        format: FORMAT.into(),
        version: VERSION,
        field: algebra.field().spec(),
        algebra: algebra_doc(algebra),
        shape: shape.map(shape_doc),
    }
}

pub fn algebra_doc<F: Field>(a: &QuiverAlgebra<F>) -> AlgebraDoc {
    let f = a.field();
    let names = a.vertices();
    let arrows = a.arrows();
    AlgebraDoc {
        vertices: names.to_vec(),
        arrows: arrows
            .iter()
            .map(|x| ArrowDoc { name: x.name.clone(), source: names[x.source].clone(), target: names[x.target].clone() })
            .collect(),
        relations: a
            .relations()
            .iter()
            .map(|r| {
                r.terms
                    .iter()
                    .map(|(c, p)| TermDoc { coeff: f.to_json(c), path: p.iter().map(|&i| arrows[i].name.clone()).collect() })
                    .collect()
            })
            .collect(),
    }
}

pub fn parse_algebra<F: Field>(field: F, doc: &AlgebraDoc, at: &str) -> Result<Arc<QuiverAlgebra<F>>> {
    let vertex = |name: &str, path: String| {
        doc.vertices.iter().position(|v| v == name).ok_or_else(|| Error::Parse(format!("at `{path}`: unknown vertex {name:?}")))
    };
    let mut seen = std::collections::HashSet::new();
    for (i, v) in doc.vertices.iter().enumerate() {
        if !seen.insert(v) {
            return Err(Error::Parse(format!("at `{at}.vertices[{i}]`: duplicate vertex {v:?}")));
        }
    }
    let mut arrows = Vec::new();
    for (i, a) in doc.arrows.iter().enumerate() {
        arrows.push(Arrow {
            name: a.name.clone(),
            source: vertex(&a.source, format!("{at}.arrows[{i}].source"))?,
            target: vertex(&a.target, format!("{at}.arrows[{i}].target"))?,
        });
    }
    let mut relations = Vec::new();
    for (r, rel) in doc.relations.iter().enumerate() {
        let mut terms = Vec::new();
        for (t, term) in rel.iter().enumerate() {
            let here = format!("{at}.relations[{r}][{t}]");
            let c = field.from_json(&term.coeff).map_err(|e| Error::Parse(format!("at `{here}.coeff`: {e}")))?;
            let path = term
                .path
                .iter()
                .map(|n| {
                    doc.arrows
                        .iter()
                        .position(|a| &a.name == n)
                        .ok_or_else(|| Error::Parse(format!("at `{here}.path`: unknown arrow {n:?}")))
                })
                .collect::<Result<Vec<_>>>()?;
            terms.push((c, path));
        }
        relations.push(Relation { terms });
    }
    QuiverAlgebra::new(field, doc.vertices.clone(), arrows, relations).map_err(|e| Error::Parse(format!("at `{at}`: {e}")))
}

pub fn shape_doc<F: Field>(s: &ShapeCategory<F>) -> ShapeDoc {
    match s.kind() {
        ShapeKind::Loop => ShapeDoc::Loop,
        ShapeKind::Cyclic { m, n } => ShapeDoc::Cyclic { m, n },
        ShapeKind::Custom => ShapeDoc::Custom { algebra: algebra_doc(s.algebra()) },
    }
}

pub fn parse_shape<F: Field>(field: F, doc: &ShapeDoc) -> Result<Arc<ShapeCategory<F>>> {
    match doc {
        ShapeDoc::Loop => Ok(ShapeCategory::shape_loop(field)),
        ShapeDoc::Cyclic { m, n } => {
            ShapeCategory::shape_cyclic(field, *m, *n).map_err(|e| Error::Parse(format!("at `shape`: {e}")))
        }
        ShapeDoc::Custom { algebra } => ShapeCategory::custom(parse_algebra(field, algebra, "shape.algebra")?)
            .map_err(|e| Error::Parse(format!("at `shape`: {e}"))),
    }
}

pub fn matrix_doc<F: Field>(m: &Matrix<F>) -> MatrixDoc {
    let f = m.field();
    (0..m.rows()).map(|i| m.row(i).iter().map(|x| f.to_json(x)).collect()).collect()
}

pub fn parse_matrix<F: Field>(field: F, doc: &MatrixDoc, rows: usize, cols: usize, at: &str) -> Result<Matrix<F>> {
    // A matrix with no rows or no columns may be written as [] or as empty rows.
    if rows == 0 || cols == 0 {
        let ok = doc.is_empty() || (doc.len() == rows && doc.iter().all(|r| r.is_empty()));
        if !ok {
            return Err(Error::Parse(format!("at `{at}`: expected an empty {rows}×{cols} matrix")));
        }
        return Ok(Matrix::zeros(field, rows, cols));
    }
    if doc.len() != rows {
        return Err(Error::Parse(format!("at `{at}`: expected {rows} rows, found {}", doc.len())));
    }
    let mut data = Vec::with_capacity(rows * cols);
    for (i, row) in doc.iter().enumerate() {
        if row.len() != cols {
            return Err(Error::Parse(format!("at `{at}[{i}]`: expected {cols} entries, found {}", row.len())));
        }
        for (j, x) in row.iter().enumerate() {
            data.push(field.from_json(x).map_err(|e| Error::Parse(format!("at `{at}[{i}][{j}]`: {e}")))?);
        }
    }
    Matrix::from_vec(field, rows, cols, data)
}

pub fn module_doc<F: Field>(m: &Module<F>) -> ModuleDoc {
    let arrows = m.algebra().arrows();
    ModuleDoc {
        dims: m.dims().to_vec(),
        maps: arrows.iter().enumerate().map(|(i, a)| (a.name.clone(), matrix_doc(m.arrow_map(i)))).collect(),
    }
}

pub fn parse_module<F: Field>(algebra: &Arc<QuiverAlgebra<F>>, doc: &ModuleDoc, at: &str) -> Result<Module<F>> {
    let f = algebra.field();
    if doc.dims.len() != algebra.num_vertices() {
        return Err(Error::Parse(format!(
            "at `{at}.dims`: expected {} entries, found {}",
            algebra.num_vertices(),
            doc.dims.len()
        )));
    }
    for name in doc.maps.keys() {
        if algebra.arrow_index(name).is_none() {
            return Err(Error::Parse(format!("at `{at}.maps`: unknown arrow {name:?}")));
        }
    }
    let mut maps = Vec::new();
    for a in algebra.arrows() {
        let (rows, cols) = (doc.dims[a.target], doc.dims[a.source]);
        let here = format!("{at}.maps.{}", a.name);
        match doc.maps.get(&a.name) {
            Some(m) => maps.push(parse_matrix(f, m, rows, cols, &here)?),
            None if rows == 0 || cols == 0 => maps.push(Matrix::zeros(f, rows, cols)),
            None => return Err(Error::Parse(format!("at `{here}`: missing matrix"))),
        }
    }
    Module::new(algebra.clone(), doc.dims.clone(), maps)
}

pub fn module_map_doc<F: Field>(g: &ModuleMap<F>) -> Vec<MatrixDoc> {
    g.vertex_maps().iter().map(matrix_doc).collect()
}

pub fn parse_module_map<F: Field>(source: &Module<F>, target: &Module<F>, doc: &[MatrixDoc], at: &str) -> Result<ModuleMap<F>> {
    let n = source.num_vertices();
    if doc.len() != n {
        return Err(Error::Parse(format!("at `{at}`: expected {n} vertex matrices, found {}", doc.len())));
    }
    let maps = (0..n)
        .map(|v| parse_matrix(source.field(), &doc[v], target.dim(v), source.dim(v), &format!("{at}[{v}]")))
        .collect::<Result<Vec<_>>>()?;
    ModuleMap::new(source.clone(), target.clone(), maps)
}

/// A module as a one-object diagram document.
pub fn module_as_diagram_doc<F: Field>(m: &Module<F>) -> DiagramDoc {
    DiagramDoc { objects: vec![module_doc(m)], shape_maps: BTreeMap::new() }
}

pub fn diagram_doc<F: Field>(cat: &DiagramCategory<F>, x: &Diagram<F>) -> DiagramDoc {
    let q = cat.shape().algebra();
    let na = cat.base().num_vertices();
    DiagramDoc {
        objects: (0..cat.num_objects()).map(|o| module_doc(&cat.evaluate(o, x))).collect(),
        shape_maps: q
            .arrows()
            .iter()
            .enumerate()
            .map(|(c, a)| (a.name.clone(), (0..na).map(|v| matrix_doc(x.arrow_map(cat.shape_arrow(c, v)))).collect()))
            .collect(),
    }
}

pub fn parse_diagram<F: Field>(cat: &DiagramCategory<F>, doc: &DiagramDoc, at: &str) -> Result<Diagram<F>> {
    let q = cat.shape().algebra();
    if doc.objects.len() != cat.num_objects() {
        return Err(Error::Parse(format!(
            "at `{at}.objects`: expected {} objects, found {}",
            cat.num_objects(),
            doc.objects.len()
        )));
    }
    for name in doc.shape_maps.keys() {
        if q.arrow_index(name).is_none() {
            return Err(Error::Parse(format!("at `{at}.shape_maps`: unknown shape arrow {name:?}")));
        }
    }
    let objects = doc
        .objects
        .iter()
        .enumerate()
        .map(|(o, m)| parse_module(cat.base(), m, &format!("{at}.objects[{o}]")))
        .collect::<Result<Vec<_>>>()?;
    let mut maps = Vec::new();
    for a in q.arrows() {
        let (s, t) = (&objects[a.source], &objects[a.target]);
        let here = format!("{at}.shape_maps.{}", a.name);
        match doc.shape_maps.get(&a.name) {
            Some(m) => maps.push(parse_module_map(s, t, m, &here)?),
            None if s.is_zero() || t.is_zero() => maps.push(ModuleMap::zero(s, t)),
            None => return Err(Error::Parse(format!("at `{here}`: missing map"))),
        }
    }
    cat.from_components(&objects, &maps)
}

pub fn diagram_map_doc<F: Field>(cat: &DiagramCategory<F>, g: &DiagramMap<F>) -> MapDoc {
    (0..cat.num_objects()).map(|o| module_map_doc(&cat.evaluate_map(o, g))).collect()
}

pub fn parse_diagram_map<F: Field>(
    cat: &DiagramCategory<F>,
    source: &Diagram<F>,
    target: &Diagram<F>,
    doc: &MapDoc,
    at: &str,
) -> Result<DiagramMap<F>> {
    if doc.len() != cat.num_objects() {
        return Err(Error::Parse(format!("at `{at}`: expected {} objects, found {}", cat.num_objects(), doc.len())));
    }
    let na = cat.base().num_vertices();
    let mut maps = vec![None; source.num_vertices()];
    for (o, per) in doc.iter().enumerate() {
        let part = parse_module_map(&cat.evaluate(o, source), &cat.evaluate(o, target), per, &format!("{at}[{o}]"))?;
        for v in 0..na {
            maps[cat.vertex(o, v)] = Some(part.vertex_map(v).clone());
        }
    }
    ModuleMap::new(source.clone(), target.clone(), maps.into_iter().map(|m| m.expect("every vertex covered")).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diffmod::{loop_category, DifferentialModule};
    use crate::field::{PrimeField, Rationals};

    #[test]
    fn rational_entries_round_trip() {
        let a = QuiverAlgebra::path_algebra(Rationals, 2, &[(0, 1)]).unwrap();
        let m = Module::projective(&a, 0).unwrap();
        let doc = module_doc(&m);
        let back = parse_module(&a, &doc, "module").unwrap();
        assert_eq!(back.dims(), m.dims());
        assert_eq!(back.arrow_maps(), m.arrow_maps());
        let f = Rationals;
        let half = f.inv(&f.from_i64(-2)).unwrap();
        assert_eq!(f.to_json(&half), Value::String("-1/2".into()));
    }

    #[test]
    fn documents_round_trip_through_text() {
        let f = PrimeField::new(3).unwrap();
        let a = QuiverAlgebra::linear_a(f, 2).unwrap();
        let cat = loop_category(&a);
        let m = Module::projective(&a, 0).unwrap();
        let d = DifferentialModule::trivial(&m);
        let x = d.to_diagram(&cat).unwrap();
        let doc = Document { header: header(&a, Some(cat.shape())), body: Body::Diagram { diagram: diagram_doc(&cat, &x) } };
        let text = doc.to_string_pretty();
        let back = Document::parse(&text).unwrap();
        assert_eq!(back, doc);
        let Body::Diagram { diagram } = &back.body else { panic!() };
        let y = parse_diagram(&cat, diagram, "diagram").unwrap();
        assert_eq!(y.dims(), x.dims());
        assert_eq!(y.arrow_maps(), x.arrow_maps());
        assert_eq!(back.digest(), doc.digest());
    }

    #[test]
    fn diagnostics_name_the_field() {
        let text = r#"{"format":"qshape","version":1,"kind":"module","field":{"kind":"prime","p":2},
            "algebra":{"vertices":["1","2"],"arrows":[{"name":"a","source":"1","target":"2"}]},
            "module":{"dims":[1,1],"maps":{"a":[[1,0]]}}}"#;
        let doc = Document::parse(text).unwrap();
        let Body::Module { module } = &doc.body else { panic!() };
        let a = parse_algebra(PrimeField::new(2).unwrap(), &doc.header.algebra, "algebra").unwrap();
        let err = parse_module(&a, module, "module").unwrap_err().to_string();
        assert!(err.contains("module.maps.a[0]"), "{err}");

        let err = Document::parse(r#"{"format":"qshape","version":1,"kind":"module","field":{"kind":"prime","p":4},"algebra":{"vertices":[]},"module":{"dims":[]}}"#)
            .unwrap_err()
            .to_string();
        assert!(err.contains("field"), "{err}");
        let err = Document::parse("{\n\"format\": }").unwrap_err().to_string();
        assert!(err.contains("line 2"), "{err}");
        let err = Document::parse(r#"{"format":"qshape","version":1,"kind":"module","field":{"kind":"rationals"},"algebra":{"vertices":["1"]},"module":{"dimz":[1]}}"#)
            .unwrap_err()
            .to_string();
        assert!(err.contains("dimz"), "{err}");
    }
}
