//! The JSON instance file. Every number is an integer or a `"p/q"` string
//! on input and is always written back as a string.

use std::fmt;
use std::path::Path;

use farkas_core::polyapprox::equispaced_nodes;
use farkas_core::rational::format_rational;
use farkas_core::{
    parse_rational, AffinePiece, ApproxProblem, FarkasError, FarkasInstance, GridSystem, IntervalBox, LinearOperator,
    MaxAffineFn, MomentRow, Polyhedron, Rational, Result, Target,
};
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// An exact rational as it appears in a file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Q(pub Rational);

impl Serialize for Q {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(&self.0))
    }
}

struct QVisitor;

impl Visitor<'_> for QVisitor {
    type Value = Q;

    fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("an integer or a \"p/q\" string")
    }

    fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<Q, E> {
        Ok(Q(Rational::from_integer(v.into())))
    }

    fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<Q, E> {
        Ok(Q(Rational::from_integer(v.into())))
    }

    fn visit_f64<E: de::Error>(self, v: f64) -> std::result::Result<Q, E> {
        Err(E::custom(format!("floating-point number {v} (write it as \"p/q\")")))
    }

    fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<Q, E> {
        parse_rational(v).map(Q).map_err(E::custom)
    }
}

impl<'de> Deserialize<'de> for Q {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Q, D::Error> {
        d.deserialize_any(QVisitor)
    }
}

fn unwrap(v: &[Q]) -> Vec<Rational> {
    v.iter().map(|q| q.0.clone()).collect()
}

fn unwrap_rows(rows: &[Vec<Q>]) -> Vec<Vec<Rational>> {
    rows.iter().map(|r| unwrap(r)).collect()
}

fn wrap(v: &[Rational]) -> Vec<Q> {
    v.iter().cloned().map(Q).collect()
}

fn wrap_rows(rows: &[Vec<Rational>]) -> Vec<Vec<Q>> {
    rows.iter().map(|r| wrap(r)).collect()
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolySpec {
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub ineq: Vec<Vec<Q>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub ineq_rhs: Vec<Q>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub eq: Vec<Vec<Q>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub eq_rhs: Vec<Q>,
}

impl PolySpec {
    pub fn build(&self, dim: usize) -> Result<Polyhedron> {
        Polyhedron::with_equalities(
            dim,
            unwrap_rows(&self.ineq),
            unwrap(&self.ineq_rhs),
            unwrap_rows(&self.eq),
            unwrap(&self.eq_rhs),
        )
    }

    pub fn from_polyhedron(p: &Polyhedron) -> Self {
        PolySpec {
            ineq: wrap_rows(&p.ineq),
            ineq_rhs: wrap(&p.ineq_rhs),
            eq: wrap_rows(&p.eq),
            eq_rhs: wrap(&p.eq_rhs),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PieceSpec {
    pub slope: Vec<Q>,
    pub offset: Q,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FnSpec {
    pub pieces: Vec<PieceSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub domain: Option<PolySpec>,
}

impl FnSpec {
    pub fn dim(&self) -> Result<usize> {
        self.pieces
            .first()
            .map(|p| p.slope.len())
            .ok_or_else(|| FarkasError::Invalid("f needs at least one piece".into()))
    }

    pub fn build(&self) -> Result<MaxAffineFn> {
        let n = self.dim()?;
        let pieces = self.pieces.iter().map(|p| AffinePiece::new(unwrap(&p.slope), p.offset.0.clone())).collect();
        let domain = self.domain.as_ref().map(|d| d.build(n)).transpose()?;
        MaxAffineFn::new(n, pieces, domain)
    }

    pub fn from_fn(f: &MaxAffineFn) -> Self {
        FnSpec {
            pieces: f
                .pieces()
                .iter()
                .map(|p| PieceSpec { slope: wrap(&p.slope), offset: Q(p.offset.clone()) })
                .collect(),
            domain: f.domain().map(PolySpec::from_polyhedron),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", deny_unknown_fields)]
pub enum TargetSpec {
    Box { lo: Vec<Q>, hi: Vec<Q> },
    Polyhedron(PolySpec),
}

impl TargetSpec {
    pub fn build(&self, m: usize) -> Result<Target> {
        match self {
            TargetSpec::Box { lo, hi } => {
                let b = IntervalBox::new(unwrap(lo), unwrap(hi))?;
                if b.dim() != m {
                    return Err(FarkasError::Dimension(format!("D box: expected {m}, got {}", b.dim())));
                }
                Ok(Target::Box(b))
            }
            TargetSpec::Polyhedron(p) => Ok(Target::Polyhedron(p.build(m)?)),
        }
    }

    pub fn from_target(d: &Target) -> Self {
        match d {
            Target::Box(b) => TargetSpec::Box { lo: wrap(&b.lo), hi: wrap(&b.hi) },
            Target::Polyhedron(p) => TargetSpec::Polyhedron(PolySpec::from_polyhedron(p)),
        }
    }
}

/// Rows are `[a, lo, hi]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub rows: Vec<(Vec<Q>, Q, Q)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum NodesSpec {
    Equispaced { equispaced: usize },
    List(Vec<Q>),
}

/// Either `values` (one per node) or `polynomial` (coefficients of `g`,
/// constant term first) must be given.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ApproxSpec {
    pub degree: usize,
    pub nodes: NodesSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub values: Option<Vec<Q>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub polynomial: Option<Vec<Q>>,
    pub epsilons: Vec<Q>,
}

impl ApproxSpec {
    pub fn build(&self) -> Result<ApproxProblem> {
        let nodes = match &self.nodes {
            NodesSpec::Equispaced { equispaced } => equispaced_nodes(*equispaced),
            NodesSpec::List(v) => unwrap(v),
        };
        let eps = unwrap(&self.epsilons);
        match (&self.values, &self.polynomial) {
            (Some(v), None) => ApproxProblem::from_table(self.degree, nodes, unwrap(v), eps),
            (None, Some(c)) => ApproxProblem::from_polynomial(self.degree, &unwrap(c), nodes, eps),
            _ => Err(FarkasError::Invalid("approx needs exactly one of `values` and `polynomial`".into())),
        }
    }
}

/// `(x′, r)` pairs.
pub type Tilts = Vec<(Vec<Rational>, Rational)>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TiltSpec {
    pub x: Vec<Q>,
    #[serde(default = "zero_q")]
    pub r: Q,
}

fn zero_q() -> Q {
    Q(Rational::from_integer(0.into()))
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub f: Option<FnSpec>,
    #[serde(rename = "C", default, skip_serializing_if = "Option::is_none")]
    pub c: Option<PolySpec>,
    #[serde(rename = "A", default, skip_serializing_if = "Option::is_none")]
    pub a: Option<Vec<Vec<Q>>>,
    #[serde(rename = "D", default, skip_serializing_if = "Option::is_none")]
    pub d: Option<TargetSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<GridSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub approx: Option<ApproxSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tilts: Option<Vec<TiltSpec>>,
}

impl InstanceFile {
    pub fn parse(text: &str) -> Result<Self> {
        let file: InstanceFile = serde_json::from_str(text).map_err(|e| FarkasError::Parse(e.to_string()))?;
        file.validate()?;
        Ok(file)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| FarkasError::Parse(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("instance files always serialize")
    }

    pub fn from_instance(inst: &FarkasInstance) -> Self {
        InstanceFile {
            f: Some(FnSpec::from_fn(&inst.f)),
            c: Some(PolySpec::from_polyhedron(&inst.c)),
            a: Some(wrap_rows(inst.a.matrix())),
            d: Some(TargetSpec::from_target(&inst.d)),
            ..Default::default()
        }
    }

    /// Builds every block that is present so that dimension errors surface
    /// on load.
    fn validate(&self) -> Result<()> {
        if self.a.is_some() || self.d.is_some() {
            let inst = self.instance()?;
            if let Some(t) = &self.tilts {
                self.tilts_for(t, inst.n())?;
            }
        }
        if self.grid.is_some() {
            self.grid()?;
        } else if let Some(f) = &self.f {
            f.build()?;
        }
        if let Some(a) = &self.approx {
            a.build()?;
        }
        Ok(())
    }

    fn missing(key: &str) -> FarkasError {
        FarkasError::Invalid(format!("instance file has no `{key}`"))
    }

    pub fn instance(&self) -> Result<FarkasInstance> {
        let f = self.f.as_ref().ok_or_else(|| Self::missing("f"))?.build()?;
        let n = f.dim();
        let c = self.c.as_ref().map(|c| c.build(n)).transpose()?.unwrap_or_else(|| Polyhedron::whole(n));
        let a = LinearOperator::new(unwrap_rows(self.a.as_ref().ok_or_else(|| Self::missing("A"))?), n)?;
        let d = self.d.as_ref().ok_or_else(|| Self::missing("D"))?.build(a.rows())?;
        FarkasInstance::new(f, c, a, d)
    }

    /// The grid system; `f` defaults to zero and `C` to the whole space.
    pub fn grid(&self) -> Result<GridSystem> {
        let spec = self.grid.as_ref().ok_or_else(|| Self::missing("grid"))?;
        let n = match (&self.f, spec.rows.first()) {
            (Some(f), _) => f.dim()?,
            (None, Some(row)) => row.0.len(),
            (None, None) => return Err(FarkasError::Empty("grid")),
        };
        let rows = spec
            .rows
            .iter()
            .map(|(a, lo, hi)| MomentRow { a: unwrap(a), lo: lo.0.clone(), hi: hi.0.clone() })
            .collect();
        let f = self.f.as_ref().map(FnSpec::build).transpose()?.unwrap_or_else(|| MaxAffineFn::zero(n));
        let c = self.c.as_ref().map(|c| c.build(n)).transpose()?.unwrap_or_else(|| Polyhedron::whole(n));
        GridSystem::new(n, rows, c, f)
    }

    pub fn approx(&self) -> Result<ApproxProblem> {
        self.approx.as_ref().ok_or_else(|| Self::missing("approx"))?.build()
    }

    /// The file's tilts, checked against dimension `n`.
    pub fn tilts(&self, n: usize) -> Result<Option<Tilts>> {
        self.tilts.as_ref().map(|t| self.tilts_for(t, n)).transpose()
    }

    fn tilts_for(&self, tilts: &[TiltSpec], n: usize) -> Result<Tilts> {
        tilts
            .iter()
            .map(|t| {
                if t.x.len() != n {
                    return Err(FarkasError::Dimension(format!("tilt: expected {n}, got {}", t.x.len())));
                }
                Ok((unwrap(&t.x), t.r.0.clone()))
            })
            .collect()
    }
}

/// Parses `"1,-1/2"` into a vector.
pub fn parse_point(s: &str) -> Result<Vec<Rational>> {
    s.split(',').map(parse_rational).collect()
}
