//! JSON problem-spec documents and the built-in problem families.
//!
//! ```json
//! {
//!   "name": "qp2d",
//!   "family": "qp-box",
//!   "params": { "hessian": [[1, 0], [0, 1]], "linear": [0, 0],
//!               "lower": -10, "upper": 10,
//!               "eq_matrix": [[1, 1]], "eq_rhs": [1] },
//!   "solver": { "max_outer": 50 },
//!   "seed": 42
//! }
//! ```
//!
//! Bounds accept numbers or the strings `"inf"` / `"-inf"`, either as one
//! scalar for every coordinate or as a vector.

use std::path::Path;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::Value;

use super::analytic::PiecewiseAnalytic;
use super::evaluators::{
    AffineMap, BoxConstraintMap, ConstraintMap, DiagonalQuadratic, LinearObjective, Objective, QuadraticMap,
    QuadraticObjective, ScaledCoordinateMap, ZeroMap,
};
use super::fd::fd_check;
use super::grid::{discretize_interval, GridDiscretization};
use super::Problem;
use crate::alm::AlmConfig;
use crate::convex::{ConvexSet, WeightedSpace};
use crate::error::{Error, Result};
use crate::linalg::Matrix;

pub const DEFAULT_SEED: u64 = 42;

/// Problems whose derivative check exceeds this relative error are rejected.
pub const FD_REJECT_TOL: f64 = 1e-3;
const FD_STEP: f64 = 1e-6;

/// Extended real number, serialized as a JSON number or `"inf"`/`"-inf"`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExtF64(pub f64);

impl Serialize for ExtF64 {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self.0 {
            v if v == f64::INFINITY => s.serialize_str("inf"),
            v if v == f64::NEG_INFINITY => s.serialize_str("-inf"),
            v => s.serialize_f64(v),
        }
    }
}

impl<'de> Deserialize<'de> for ExtF64 {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Str(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(v) => Ok(ExtF64(v)),
            Raw::Str(s) => match s.to_ascii_lowercase().as_str() {
                "inf" | "+inf" | "infinity" | "+infinity" => Ok(ExtF64(f64::INFINITY)),
                "-inf" | "-infinity" => Ok(ExtF64(f64::NEG_INFINITY)),
                other => Err(serde::de::Error::custom(format!("expected a number or \"inf\"/\"-inf\", got \"{other}\""))),
            },
        }
    }
}

/// One bound for every coordinate, or one per coordinate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum BoundSpec {
    Scalar(ExtF64),
    Vector(Vec<ExtF64>),
}

impl BoundSpec {
    fn expand(&self, n: usize, what: &str) -> Result<Vec<f64>> {
        match self {
            BoundSpec::Scalar(v) => Ok(vec![v.0; n]),
            BoundSpec::Vector(v) if v.len() == n => Ok(v.iter().map(|b| b.0).collect()),
            BoundSpec::Vector(v) => Err(Error::Schema(format!("{what} has {} entries, expected {n}", v.len()))),
        }
    }
}

/// Randomly generated instance size.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RandomSize {
    pub n: usize,
    #[serde(default)]
    pub m: usize,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QpBoxParams {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub random: Option<RandomSize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hessian: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub linear: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lower: Option<BoundSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub upper: Option<BoundSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eq_matrix: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eq_rhs: Option<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AffineParams {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub random: Option<RandomSize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b: Option<Vec<f64>>,
    /// Defaults to the identity.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hessian: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub linear: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lower: Option<BoundSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub upper: Option<BoundSpec>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NonlinearParams {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub random: Option<RandomSize>,
    /// One symmetric matrix per constraint row.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quads: Option<Vec<Vec<Vec<f64>>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hessian: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub linear: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lower: Option<BoundSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub upper: Option<BoundSpec>,
}

/// Desired state `u_d` of the control family.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum Target {
    Constant { value: f64 },
    /// `Σ cᵢ tⁱ`
    Polynomial { coeffs: Vec<f64> },
    /// `amplitude · sin(2π · frequency · t)`
    Sine { amplitude: f64, frequency: f64 },
}

impl Target {
    pub fn eval(&self, t: f64) -> f64 {
        match self {
            Target::Constant { value } => *value,
            Target::Polynomial { coeffs } => coeffs.iter().rev().fold(0.0, |acc, c| acc * t + c),
            Target::Sine { amplitude, frequency } => amplitude * (2.0 * std::f64::consts::PI * frequency * t).sin(),
        }
    }
}

fn default_grading_one() -> f64 {
    1.0
}

fn default_grading_four() -> f64 {
    4.0
}

fn default_alpha_coefficient() -> f64 {
    -1.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ControlParams {
    pub n: usize,
    #[serde(default = "default_grading_one")]
    pub grading: f64,
    pub lower: f64,
    pub upper: f64,
    pub target: Target,
    pub nu: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Example35Params {
    pub n: usize,
    #[serde(default = "default_grading_four")]
    pub grading: f64,
    /// Objective `f(α, u) = c · α`.
    #[serde(default = "default_alpha_coefficient")]
    pub alpha_coefficient: f64,
}

/// Family tag plus typed parameters.
#[derive(Debug, Clone, PartialEq)]
pub enum FamilySpec {
    QpBox(QpBoxParams),
    AffineEquality(AffineParams),
    NonlinearEquality(NonlinearParams),
    L2BoxControl(ControlParams),
    Example35(Example35Params),
}

impl FamilySpec {
    pub fn family_name(&self) -> &'static str {
        match self {
            FamilySpec::QpBox(_) => "qp-box",
            FamilySpec::AffineEquality(_) => "affine-equality",
            FamilySpec::NonlinearEquality(_) => "nonlinear-equality",
            FamilySpec::L2BoxControl(_) => "l2-box-control",
            FamilySpec::Example35(_) => "example35",
        }
    }

    fn params_value(&self) -> Value {
        let v = match self {
            FamilySpec::QpBox(p) => serde_json::to_value(p),
            FamilySpec::AffineEquality(p) => serde_json::to_value(p),
            FamilySpec::NonlinearEquality(p) => serde_json::to_value(p),
            FamilySpec::L2BoxControl(p) => serde_json::to_value(p),
            FamilySpec::Example35(p) => serde_json::to_value(p),
        };
        v.expect("parameter structs serialize")
    }

    fn parse(family: &str, params: Value) -> Result<Self> {
        let err = |e: serde_json::Error| Error::Schema(format!("params of family {family}: {e}"));
        Ok(match family {
            "qp-box" => FamilySpec::QpBox(serde_json::from_value(params).map_err(err)?),
            "affine-equality" => FamilySpec::AffineEquality(serde_json::from_value(params).map_err(err)?),
            "nonlinear-equality" => FamilySpec::NonlinearEquality(serde_json::from_value(params).map_err(err)?),
            "l2-box-control" => FamilySpec::L2BoxControl(serde_json::from_value(params).map_err(err)?),
            "example35" => FamilySpec::Example35(serde_json::from_value(params).map_err(err)?),
            other => return Err(Error::Schema(format!("unknown family \"{other}\""))),
        })
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSpec {
    name: String,
    family: String,
    #[serde(default)]
    params: Value,
    #[serde(default)]
    solver: AlmConfig,
    #[serde(default)]
    seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    x0: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    lambda0: Option<Vec<f64>>,
}

/// A parsed problem-spec document with defaults filled in.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawSpec", into = "RawSpec")]
pub struct ProblemSpec {
    pub name: String,
    pub family: FamilySpec,
    pub solver: AlmConfig,
    pub seed: u64,
    pub x0: Option<Vec<f64>>,
    pub lambda0: Option<Vec<f64>>,
}

impl TryFrom<RawSpec> for ProblemSpec {
    type Error = Error;

    fn try_from(raw: RawSpec) -> Result<Self> {
        let params = if raw.params.is_null() { Value::Object(Default::default()) } else { raw.params };
        let family = FamilySpec::parse(&raw.family, params)?;
        raw.solver.validate().map_err(|e| Error::Schema(e.to_string()))?;
        Ok(Self {
            name: raw.name,
            family,
            solver: raw.solver,
            seed: raw.seed.unwrap_or(DEFAULT_SEED),
            x0: raw.x0,
            lambda0: raw.lambda0,
        })
    }
}

impl From<ProblemSpec> for RawSpec {
    fn from(s: ProblemSpec) -> Self {
        RawSpec {
            name: s.name,
            family: s.family.family_name().to_string(),
            params: s.family.params_value(),
            solver: s.solver,
            seed: Some(s.seed),
            x0: s.x0,
            lambda0: s.lambda0,
        }
    }
}

impl ProblemSpec {
    pub fn from_json_str(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json_str(&std::fs::read_to_string(path)?)
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("spec serializes")
    }
}

/// Builds and validates the problem described by `spec`, including a
/// finite-difference check of its derivatives at a seeded random point.
pub fn load_problem(spec: &ProblemSpec) -> Result<Problem> {
    let problem = build(spec)?.with_spec(spec.clone());
    if let Some(x0) = &spec.x0 {
        problem.check_x(x0).map_err(|e| Error::Schema(format!("x0: {e}")))?;
    }
    if let Some(l0) = &spec.lambda0 {
        problem.check_y(l0).map_err(|e| Error::Schema(format!("lambda0: {e}")))?;
    }
    let x = random_point(&problem, spec.seed);
    let report = fd_check(&problem, &x, FD_STEP)?;
    if report.max_error() > FD_REJECT_TOL {
        return Err(Error::DerivativeCheck(report.max_error()));
    }
    Ok(problem)
}

/// A point of `C` drawn from the seeded generator: uniform in `[-1, 1]ⁿ`,
/// then projected.
pub fn random_point(problem: &Problem, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed_f00d);
    let x: Vec<f64> = (0..problem.dim_x()).map(|_| rng.gen_range(-1.0..1.0)).collect();
    problem.set_c.project(&x, &problem.space_x).expect("dimensions match")
}

fn matrix(rows: &[Vec<f64>], what: &str) -> Result<Matrix> {
    Matrix::from_rows(rows).map_err(|e| Error::Schema(format!("{what}: {e}")))
}

fn vector(v: &Option<Vec<f64>>, n: usize, what: &str) -> Result<Vec<f64>> {
    match v {
        None => Ok(vec![0.0; n]),
        Some(v) if v.len() == n => Ok(v.clone()),
        Some(v) => Err(Error::Schema(format!("{what} has {} entries, expected {n}", v.len()))),
    }
}

fn square(rows: &[Vec<f64>], n: usize, what: &str) -> Result<Matrix> {
    let m = matrix(rows, what)?;
    if m.rows() != n || m.cols() != n {
        return Err(Error::Schema(format!("{what} is {}x{}, expected {n}x{n}", m.rows(), m.cols())));
    }
    Ok(m)
}

fn set_c(lower: &Option<BoundSpec>, upper: &Option<BoundSpec>, n: usize) -> Result<ConvexSet> {
    if lower.is_none() && upper.is_none() {
        return Ok(ConvexSet::WholeSpace { dim: n });
    }
    let lo = lower.as_ref().map_or(Ok(vec![f64::NEG_INFINITY; n]), |b| b.expand(n, "lower"))?;
    let up = upper.as_ref().map_or(Ok(vec![f64::INFINITY; n]), |b| b.expand(n, "upper"))?;
    ConvexSet::new_box(lo, up).map_err(|e| Error::Schema(e.to_string()))
}

fn uniform_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> Matrix {
    let data = (0..rows * cols).map(|_| rng.gen_range(-1.0..1.0)).collect();
    Matrix::new(rows, cols, data).expect("finite entries")
}

fn uniform_vec(rng: &mut ChaCha8Rng, n: usize, half_width: f64) -> Vec<f64> {
    (0..n).map(|_| rng.gen_range(-half_width..half_width)).collect()
}

/// `I + BᵀB / n`, symmetric positive definite.
fn random_spd(rng: &mut ChaCha8Rng, n: usize) -> Matrix {
    let b = uniform_matrix(rng, n, n);
    let mut h = b.transpose().matmul(&b).expect("square").scale(1.0 / n as f64);
    for i in 0..n {
        h[(i, i)] += 1.0;
    }
    for i in 0..n {
        for j in 0..i {
            let avg = 0.5 * (h[(i, j)] + h[(j, i)]);
            h[(i, j)] = avg;
            h[(j, i)] = avg;
        }
    }
    h
}

fn random_symmetric(rng: &mut ChaCha8Rng, n: usize, scale: f64) -> Matrix {
    let mut q = Matrix::zeros(n, n);
    for i in 0..n {
        for j in 0..=i {
            let v = scale * rng.gen_range(-1.0..1.0);
            q[(i, j)] = v;
            q[(j, i)] = v;
        }
    }
    q
}

fn equality_space(m: usize) -> (WeightedSpace, ConvexSet) {
    (WeightedSpace::euclidean(m), ConvexSet::Zero { dim: m })
}

fn build(spec: &ProblemSpec) -> Result<Problem> {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let name = spec.name.clone();
    match &spec.family {
        FamilySpec::QpBox(p) => {
            let (hessian, linear, c, eq) = if let Some(size) = &p.random {
                let n = size.n;
                if n == 0 {
                    return Err(Error::Schema("random.n must be positive".into()));
                }
                let h = random_spd(&mut rng, n);
                let lin = uniform_vec(&mut rng, n, 1.0);
                let c = ConvexSet::uniform_box(n, -0.5, 0.5)?;
                let eq = if size.m > 0 {
                    let a = uniform_matrix(&mut rng, size.m, n);
                    let xf = uniform_vec(&mut rng, n, 0.25);
                    let b = a.matvec(&xf);
                    Some((a, b))
                } else {
                    None
                };
                (h, lin, c, eq)
            } else {
                let rows = p.hessian.as_ref().ok_or_else(|| Error::Schema("qp-box needs hessian or random".into()))?;
                let n = rows.len();
                let h = square(rows, n, "hessian")?;
                let lin = vector(&p.linear, n, "linear")?;
                let c = set_c(&p.lower, &p.upper, n)?;
                let eq = match (&p.eq_matrix, &p.eq_rhs) {
                    (Some(a), Some(b)) => {
                        let a = matrix(a, "eq_matrix")?;
                        if a.cols() != n {
                            return Err(Error::Schema(format!("eq_matrix has {} columns, expected {n}", a.cols())));
                        }
                        Some((a, b.clone()))
                    }
                    (None, None) => None,
                    _ => return Err(Error::Schema("eq_matrix and eq_rhs must be given together".into())),
                };
                (h, lin, c, eq)
            };
            let n = hessian.rows();
            let objective: Arc<dyn Objective> =
                Arc::new(QuadraticObjective::new(hessian, linear, 0.0).map_err(|e| Error::Schema(e.to_string()))?);
            let (constraint, m): (Arc<dyn ConstraintMap>, usize) = match eq {
                Some((a, b)) => {
                    let m = a.rows();
                    (Arc::new(AffineMap::new(a, b).map_err(|e| Error::Schema(format!("eq_rhs: {e}")))?), m)
                }
                None => (Arc::new(ZeroMap { dim_in: n, dim_out: 0 }), 0),
            };
            let (space_y, k) = equality_space(m);
            Problem::new(name, WeightedSpace::euclidean(n), space_y, objective, constraint, c, k)
        }
        FamilySpec::AffineEquality(p) => {
            let (a, b, hessian, linear, c) = if let Some(size) = &p.random {
                let (n, m) = (size.n, size.m.max(1));
                let a = uniform_matrix(&mut rng, m, n);
                let b = uniform_vec(&mut rng, m, 1.0);
                let lin = uniform_vec(&mut rng, n, 1.0);
                (a, b, Matrix::identity(n), lin, ConvexSet::WholeSpace { dim: n })
            } else {
                let a = matrix(p.a.as_ref().ok_or_else(|| Error::Schema("affine-equality needs a or random".into()))?, "a")?;
                let n = a.cols();
                let b = vector(&p.b, a.rows(), "b")?;
                let h = match &p.hessian {
                    Some(rows) => square(rows, n, "hessian")?,
                    None => Matrix::identity(n),
                };
                (a, b, h, vector(&p.linear, n, "linear")?, set_c(&p.lower, &p.upper, n)?)
            };
            let (n, m) = (a.cols(), a.rows());
            let objective =
                Arc::new(QuadraticObjective::new(hessian, linear, 0.0).map_err(|e| Error::Schema(e.to_string()))?);
            let (space_y, k) = equality_space(m);
            Problem::new(name, WeightedSpace::euclidean(n), space_y, objective, Arc::new(AffineMap::new(a, b)?), c, k)
        }
        FamilySpec::NonlinearEquality(p) => {
            let (quads, a, b, hessian, linear, c) = if let Some(size) = &p.random {
                let (n, m) = (size.n, size.m.max(1));
                let quads: Vec<Matrix> = (0..m).map(|_| random_symmetric(&mut rng, n, 0.5)).collect();
                let a = uniform_matrix(&mut rng, m, n);
                let xf = uniform_vec(&mut rng, n, 1.0);
                let b = QuadraticMap::new(quads.clone(), a.clone(), vec![0.0; m])?.value(&xf);
                let lin = uniform_vec(&mut rng, n, 1.0);
                (quads, a, b, Matrix::identity(n), lin, ConvexSet::WholeSpace { dim: n })
            } else {
                let a = matrix(p.a.as_ref().ok_or_else(|| Error::Schema("nonlinear-equality needs a or random".into()))?, "a")?;
                let (m, n) = (a.rows(), a.cols());
                let quads = p.quads.as_ref().ok_or_else(|| Error::Schema("nonlinear-equality needs quads".into()))?;
                if quads.len() != m {
                    return Err(Error::Schema(format!("{} quads given for {m} constraints", quads.len())));
                }
                let quads = quads.iter().map(|q| square(q, n, "quads")).collect::<Result<Vec<_>>>()?;
                for q in &quads {
                    QuadraticObjective::new(q.clone(), vec![0.0; n], 0.0).map_err(|e| Error::Schema(format!("quads: {e}")))?;
                }
                let h = match &p.hessian {
                    Some(rows) => square(rows, n, "hessian")?,
                    None => Matrix::identity(n),
                };
                let b = vector(&p.b, m, "b")?;
                (quads, a, b, h, vector(&p.linear, n, "linear")?, set_c(&p.lower, &p.upper, n)?)
            };
            let (n, m) = (a.cols(), a.rows());
            let objective =
                Arc::new(QuadraticObjective::new(hessian, linear, 0.0).map_err(|e| Error::Schema(e.to_string()))?);
            let (space_y, k) = equality_space(m);
            Problem::new(name, WeightedSpace::euclidean(n), space_y, objective, Arc::new(QuadraticMap::new(quads, a, b)?), c, k)
        }
        FamilySpec::L2BoxControl(p) => {
            if !(p.lower <= p.upper) || !p.lower.is_finite() || !p.upper.is_finite() {
                return Err(Error::Schema(format!("control bounds [{}, {}] must be finite and ordered", p.lower, p.upper)));
            }
            if !(p.nu >= 0.0) {
                return Err(Error::Schema(format!("nu must be nonnegative, got {}", p.nu)));
            }
            let grid = discretize_interval(p.n, p.grading).map_err(|e| Error::Schema(e.to_string()))?;
            let n = grid.len();
            let ud = grid.sample_fn(|t| p.target.eval(t));
            let w = &grid.weights;
            // f(u) = ½‖u − u_d‖² + (ν/2)‖u‖² in the L² weights.
            let objective = DiagonalQuadratic {
                diag: w.iter().map(|wi| wi * (1.0 + p.nu)).collect(),
                linear: w.iter().zip(&ud).map(|(wi, d)| -wi * d).collect(),
                constant: 0.5 * w.iter().zip(&ud).map(|(wi, d)| wi * d * d).sum::<f64>(),
            };
            let space_x = grid.space();
            let space_y = WeightedSpace::product(&[&space_x, &space_x]);
            let constraint = BoxConstraintMap { lower: vec![p.lower; n], upper: vec![p.upper; n] };
            Problem::new(
                name,
                space_x,
                space_y,
                Arc::new(objective),
                Arc::new(constraint),
                ConvexSet::WholeSpace { dim: n },
                ConvexSet::NonnegCone { dim: 2 * n },
            )
        }
        FamilySpec::Example35(p) => example35_problem(name, p),
    }
}

/// `min c·α` over `(α, u) ∈ ℝ × {|u| ≤ 1}` subject to `α q − u = 0`, with
/// `q(t) = t^{-1/4}` replaced by its exact cell averages.
fn example35_problem(name: String, p: &Example35Params) -> Result<Problem> {
    let grid = discretize_interval(p.n, p.grading).map_err(|e| Error::Schema(e.to_string()))?;
    example35_from_grid(name, &grid, p.alpha_coefficient)
}

pub(crate) fn example35_from_grid(name: impl Into<String>, grid: &GridDiscretization, alpha_coefficient: f64) -> Result<Problem> {
    let n = grid.len();
    let profile = grid.cell_averages(&PiecewiseAnalytic::power(1.0, -0.25))?;
    let space_u = grid.space();
    let space_x = WeightedSpace::product(&[&WeightedSpace::euclidean(1), &space_u]);
    let mut coeffs = vec![0.0; n + 1];
    coeffs[0] = alpha_coefficient;
    let set_c = ConvexSet::Product(vec![ConvexSet::WholeSpace { dim: 1 }, ConvexSet::uniform_box(n, -1.0, 1.0)?]);
    Problem::new(
        name,
        space_x,
        space_u,
        Arc::new(LinearObjective { coeffs }),
        Arc::new(ScaledCoordinateMap { profile }),
        set_c,
        ConvexSet::Zero { dim: n },
    )
}
