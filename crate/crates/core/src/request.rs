//! Input documents: analysis requests, germ groups and orbit runs.
//!
//! Exact coefficients are 4-tuples of `"num/den"` strings on the basis
//! `1, sqrt d, i, i sqrt d`. Errors carry a JSON-pointer path.

use num_complex::Complex64;
use serde_json::{Map, Value};

use crate::error::{Error, Result};
use crate::exactalg::{Field, KElement, SparsePoly};
use crate::holonomy::{FormalGerm, Jet, Multiplier, NumericGenerator, OrbitEvidence, OrbitParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    #[default]
    Json,
    Dot,
    Text,
}

impl std::str::FromStr for OutputFormat {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "json" => Ok(OutputFormat::Json),
            "dot" => Ok(OutputFormat::Dot),
            "text" => Ok(OutputFormat::Text),
            _ => Err(format!("unknown format `{s}` (json|dot|text)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GermKind {
    OneForm,
    VectorField,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct AnalysisOptions {
    pub jet_order: u32,
    pub max_blowups: usize,
    pub degree_bound: u32,
    pub word_budget: usize,
    pub orbit_evidence: OrbitEvidence,
}

impl Default for AnalysisOptions {
    fn default() -> Self {
        AnalysisOptions {
            jet_order: 20,
            max_blowups: 64,
            degree_bound: 6,
            word_budget: 200,
            orbit_evidence: OrbitEvidence::None,
        }
    }
}

/// A germ `A dx + B dy`; vector-field input is converted with `A = -Q`,
/// `B = P`.
#[derive(Debug, Clone, PartialEq)]
pub struct AnalysisRequest {
    pub field: Field,
    pub kind: GermKind,
    pub a: SparsePoly,
    pub b: SparsePoly,
    pub options: AnalysisOptions,
    pub format: OutputFormat,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GroupRequest {
    pub field: Field,
    pub generators: Vec<FormalGerm>,
    pub jet_order: usize,
    pub word_budget: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OrbitRequest {
    pub generators: Vec<FormalGerm>,
    pub radii: Vec<f64>,
    pub seed: Complex64,
    pub u_radius: Option<f64>,
    pub v_radius: Option<f64>,
    pub steps: Option<usize>,
}

impl OrbitRequest {
    pub const DEFAULT_U_RADIUS: f64 = 0.1;
    pub const DEFAULT_V_RADIUS: f64 = 0.08;
    pub const DEFAULT_STEPS: usize = 10_000;

    /// Generators paired with their radii, and simulation parameters with
    /// defaults filled in.
    pub fn into_parts(self) -> (Vec<NumericGenerator>, OrbitParams) {
        let params = OrbitParams {
            seed: self.seed,
            u_radius: self.u_radius.unwrap_or(Self::DEFAULT_U_RADIUS),
            v_radius: self.v_radius.unwrap_or(Self::DEFAULT_V_RADIUS),
            steps: self.steps.unwrap_or(Self::DEFAULT_STEPS),
        };
        let gens = self
            .generators
            .into_iter()
            .zip(self.radii)
            .map(|(germ, radius)| NumericGenerator { germ, radius })
            .collect();
        (gens, params)
    }
}

fn child(path: &str, key: impl std::fmt::Display) -> String {
    if path == "/" {
        format!("/{key}")
    } else {
        format!("{path}/{key}")
    }
}

fn parse_json(bytes: &[u8]) -> Result<Value> {
    serde_json::from_slice(bytes)
        .map_err(|e| Error::parse("/", format!("invalid JSON at line {} column {}: {e}", e.line(), e.column())))
}

fn object<'a>(v: &'a Value, path: &str, allowed: &[&str]) -> Result<&'a Map<String, Value>> {
    let m = v.as_object().ok_or_else(|| Error::parse(path, "expected an object"))?;
    if let Some(k) = m.keys().find(|k| !allowed.contains(&k.as_str())) {
        return Err(Error::parse(child(path, k), "unknown field"));
    }
    Ok(m)
}

fn required<'a>(m: &'a Map<String, Value>, path: &str, key: &str) -> Result<&'a Value> {
    m.get(key)
        .ok_or_else(|| Error::parse(path, format!("missing field `{key}`")))
}

fn array<'a>(v: &'a Value, path: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| Error::parse(path, "expected an array"))
}

fn uint(v: &Value, path: &str) -> Result<u64> {
    v.as_u64()
        .ok_or_else(|| Error::parse(path, "expected a non-negative integer"))
}

fn small_uint<T: TryFrom<u64>>(v: &Value, path: &str) -> Result<T> {
    T::try_from(uint(v, path)?).map_err(|_| Error::parse(path, "integer out of range"))
}

fn float(v: &Value, path: &str) -> Result<f64> {
    v.as_f64().ok_or_else(|| Error::parse(path, "expected a number"))
}

fn complex(v: &Value, path: &str) -> Result<Complex64> {
    match array(v, path)?.as_slice() {
        [re, im] => Ok(Complex64::new(float(re, &child(path, 0))?, float(im, &child(path, 1))?)),
        _ => Err(Error::parse(path, "expected [re, im]")),
    }
}

fn field(root: &Map<String, Value>) -> Result<Field> {
    let Some(v) = root.get("field") else {
        return Ok(Field::gaussian());
    };
    let m = object(v, "/field", &["sqrt"])?;
    let d = uint(required(m, "/field", "sqrt")?, "/field/sqrt")?;
    Field::new(d).map_err(|e| Error::parse("/field/sqrt", e.to_string()))
}

fn kelement(v: &Value, path: &str, field: &Field) -> Result<KElement> {
    let parts = array(v, path)?;
    let strs: Vec<&str> = parts
        .iter()
        .enumerate()
        .map(|(i, p)| {
            p.as_str()
                .ok_or_else(|| Error::parse(child(path, i), "expected a rational string"))
        })
        .collect::<Result<_>>()?;
    KElement::parse(&strs, field).map_err(|m| Error::parse(path, m))
}

fn polynomial(v: &Value, path: &str, field: &Field) -> Result<SparsePoly> {
    let mut p = SparsePoly::zero();
    for (i, t) in array(v, path)?.iter().enumerate() {
        let tp = child(path, i);
        let m = object(t, &tp, &["ex", "ey", "c"])?;
        let ex: u32 = small_uint(required(m, &tp, "ex")?, &child(&tp, "ex"))?;
        let ey: u32 = small_uint(required(m, &tp, "ey")?, &child(&tp, "ey"))?;
        let c = kelement(required(m, &tp, "c")?, &child(&tp, "c"), field)?;
        p.add_term((ex, ey), c);
    }
    Ok(p)
}

fn options(v: Option<&Value>) -> Result<(AnalysisOptions, OutputFormat)> {
    let mut o = AnalysisOptions::default();
    let mut format = OutputFormat::default();
    let Some(v) = v else { return Ok((o, format)) };
    let path = "/options";
    let m = object(
        v,
        path,
        &["jet_order", "max_blowups", "degree_bound", "word_budget", "orbit_evidence", "format"],
    )?;
    for (k, val) in m {
        let p = child(path, k);
        match k.as_str() {
            "jet_order" => o.jet_order = small_uint(val, &p)?,
            "max_blowups" => o.max_blowups = small_uint(val, &p)?,
            "degree_bound" => o.degree_bound = small_uint(val, &p)?,
            "word_budget" => o.word_budget = small_uint(val, &p)?,
            "orbit_evidence" => {
                o.orbit_evidence = serde_json::from_value(val.clone())
                    .map_err(|_| Error::parse(&p, "expected none|closed_off_origin|non_recurrent"))?
            }
            "format" => {
                let s = val.as_str().ok_or_else(|| Error::parse(&p, "expected a string"))?;
                format = s.parse().map_err(|e: String| Error::parse(&p, e))?;
            }
            _ => unreachable!("keys checked by object()"),
        }
    }
    if o.jet_order == 0 {
        return Err(Error::parse(child(path, "jet_order"), "must be positive"));
    }
    Ok((o, format))
}

/// Parses an analysis request.
pub fn parse_request(bytes: &[u8]) -> Result<AnalysisRequest> {
    let v = parse_json(bytes)?;
    let root = object(&v, "/", &["field", "one_form", "vector_field", "options"])?;
    let field = field(root)?;
    let (kind, a, b) = match (root.get("one_form"), root.get("vector_field")) {
        (Some(w), None) => {
            let m = object(w, "/one_form", &["A", "B"])?;
            let a = polynomial(required(m, "/one_form", "A")?, "/one_form/A", &field)?;
            let b = polynomial(required(m, "/one_form", "B")?, "/one_form/B", &field)?;
            (GermKind::OneForm, a, b)
        }
        (None, Some(x)) => {
            let m = object(x, "/vector_field", &["P", "Q"])?;
            let p = polynomial(required(m, "/vector_field", "P")?, "/vector_field/P", &field)?;
            let q = polynomial(required(m, "/vector_field", "Q")?, "/vector_field/Q", &field)?;
            (GermKind::VectorField, -&q, p)
        }
        _ => return Err(Error::parse("/", "exactly one of vector_field|one_form")),
    };
    let (options, format) = options(root.get("options"))?;
    Ok(AnalysisRequest {
        field,
        kind,
        a,
        b,
        options,
        format,
    })
}

fn multiplier(v: &Value, path: &str, field: &Field) -> Result<Multiplier> {
    let m = object(v, path, &["exact", "exp_2pi_i", "numeric"])?;
    if m.len() != 1 {
        return Err(Error::parse(path, "expected exactly one of exact|exp_2pi_i|numeric"));
    }
    let (k, val) = m.iter().next().expect("one entry");
    let p = child(path, k);
    Ok(match k.as_str() {
        "exact" => Multiplier::Exact(kelement(val, &p, field)?),
        "exp_2pi_i" => Multiplier::exp_2pi_i(kelement(val, &p, field)?, field),
        _ => Multiplier::Numeric(complex(val, &p)?),
    })
}

/// `{"multiplier": .., "jet": [a_2, ..]}`; a missing jet means a linear
/// germ known through `jet_order`.
fn germ(v: &Value, path: &str, field: &Field, jet_order: usize, extra: &[&str]) -> Result<FormalGerm> {
    let allowed: Vec<&str> = ["multiplier", "jet"].iter().chain(extra).copied().collect();
    let m = object(v, path, &allowed)?;
    let mult = multiplier(required(m, path, "multiplier")?, &child(path, "multiplier"), field)?;
    let bad = |e: Error| Error::parse(path, e.to_string());
    let Some(jet) = m.get("jet") else {
        return FormalGerm::linear(mult, jet_order.max(1)).map_err(bad);
    };
    let jp = child(path, "jet");
    let items = array(jet, &jp)?;
    let jet = if mult.is_numeric() {
        let cs = items
            .iter()
            .enumerate()
            .map(|(i, c)| complex(c, &child(&jp, i)))
            .collect::<Result<Vec<_>>>()?;
        Jet::Numeric(cs)
    } else {
        let cs = items
            .iter()
            .enumerate()
            .map(|(i, c)| kelement(c, &child(&jp, i), field))
            .collect::<Result<Vec<_>>>()?;
        Jet::Exact(cs)
    };
    FormalGerm::new(mult, jet).map_err(bad)
}

/// Parses `{"field", "generators": [germ], "jet_order", "word_budget"}`.
pub fn parse_group_request(bytes: &[u8]) -> Result<GroupRequest> {
    let v = parse_json(bytes)?;
    let root = object(&v, "/", &["field", "generators", "jet_order", "word_budget"])?;
    let field = field(root)?;
    let jet_order = match root.get("jet_order") {
        Some(j) => small_uint(j, "/jet_order")?,
        None => 20,
    };
    let word_budget = match root.get("word_budget") {
        Some(w) => small_uint(w, "/word_budget")?,
        None => 200,
    };
    let gens = array(required(root, "/", "generators")?, "/generators")?;
    if gens.is_empty() {
        return Err(Error::parse("/generators", "at least one generator required"));
    }
    let generators = gens
        .iter()
        .enumerate()
        .map(|(i, g)| germ(g, &child("/generators", i), &field, jet_order, &[]))
        .collect::<Result<_>>()?;
    Ok(GroupRequest {
        field,
        generators,
        jet_order,
        word_budget,
    })
}

/// Parses `{"field", "generators": [germ + "radius"], "seed": [re, im],
/// "u_radius", "v_radius", "steps"}`.
pub fn parse_orbit_request(bytes: &[u8]) -> Result<OrbitRequest> {
    let v = parse_json(bytes)?;
    let root = object(&v, "/", &["field", "generators", "seed", "u_radius", "v_radius", "steps"])?;
    let field = field(root)?;
    let gens = array(required(root, "/", "generators")?, "/generators")?;
    let mut generators = Vec::new();
    let mut radii = Vec::new();
    for (i, g) in gens.iter().enumerate() {
        let p = child("/generators", i);
        generators.push(germ(g, &p, &field, 1, &["radius"])?);
        let r = match g.get("radius") {
            Some(r) => float(r, &child(&p, "radius"))?,
            None => 1.0,
        };
        radii.push(r);
    }
    let seed = complex(required(root, "/", "seed")?, "/seed")?;
    let opt_f = |k: &str| root.get(k).map(|x| float(x, &child("/", k))).transpose();
    Ok(OrbitRequest {
        generators,
        radii,
        seed,
        u_radius: opt_f("u_radius")?,
        v_radius: opt_f("v_radius")?,
        steps: root.get("steps").map(|s| small_uint(s, "/steps")).transpose()?,
    })
}
