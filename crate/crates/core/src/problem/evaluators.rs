use crate::error::{check_dim, Error, Result};
use crate::linalg::{dot, Matrix};

/// Smooth objective `f: ℝⁿ → ℝ`. The gradient is the vector of plain partial
/// derivatives `∂f/∂xᵢ`.
pub trait Objective: Send + Sync {
    fn value(&self, x: &[f64]) -> f64;
    fn gradient(&self, x: &[f64]) -> Vec<f64>;
    /// Both at once; implementations sharing work between the two override it.
    fn value_and_gradient(&self, x: &[f64]) -> (f64, Vec<f64>) {
        (self.value(x), self.gradient(x))
    }
}

/// Smooth constraint map `G: ℝⁿ → ℝᵐ` with Jacobian products in plain
/// coordinates.
pub trait ConstraintMap: Send + Sync {
    fn dim_in(&self) -> usize;
    fn dim_out(&self) -> usize;
    fn value(&self, x: &[f64]) -> Vec<f64>;
    /// `J(x) d`
    fn jvp(&self, x: &[f64], d: &[f64]) -> Vec<f64>;
    /// `J(x)ᵀ v`
    fn vjp(&self, x: &[f64], v: &[f64]) -> Vec<f64>;
}

/// `f(x) = Σ aᵢ xᵢ`
#[derive(Debug, Clone)]
pub struct LinearObjective {
    pub coeffs: Vec<f64>,
}

impl Objective for LinearObjective {
    fn value(&self, x: &[f64]) -> f64 {
        dot(&self.coeffs, x)
    }

    fn gradient(&self, _x: &[f64]) -> Vec<f64> {
        self.coeffs.clone()
    }
}

/// `f(x) = ½ xᵀ H x + cᵀ x + k` with a dense symmetric `H`.
#[derive(Debug, Clone)]
pub struct QuadraticObjective {
    pub hessian: Matrix,
    pub linear: Vec<f64>,
    pub constant: f64,
}

impl QuadraticObjective {
    pub fn new(hessian: Matrix, linear: Vec<f64>, constant: f64) -> Result<Self> {
        check_dim(hessian.rows(), hessian.cols())?;
        check_dim(hessian.rows(), linear.len())?;
        let n = hessian.rows();
        for i in 0..n {
            for j in 0..i {
                let (a, b) = (hessian[(i, j)], hessian[(j, i)]);
                if (a - b).abs() > 1e-12 * (1.0 + a.abs().max(b.abs())) {
                    return Err(Error::InvalidInput(format!("hessian not symmetric at ({i}, {j})")));
                }
            }
        }
        Ok(Self { hessian, linear, constant })
    }
}

impl Objective for QuadraticObjective {
    fn value(&self, x: &[f64]) -> f64 {
        0.5 * dot(x, &self.hessian.matvec(x)) + dot(&self.linear, x) + self.constant
    }

    fn gradient(&self, x: &[f64]) -> Vec<f64> {
        let mut g = self.hessian.matvec(x);
        for (gi, ci) in g.iter_mut().zip(&self.linear) {
            *gi += ci;
        }
        g
    }

    fn value_and_gradient(&self, x: &[f64]) -> (f64, Vec<f64>) {
        let hx = self.hessian.matvec(x);
        let value = 0.5 * dot(x, &hx) + dot(&self.linear, x) + self.constant;
        let g = hx.iter().zip(&self.linear).map(|(h, c)| h + c).collect();
        (value, g)
    }
}

/// `f(x) = Σ ½ dᵢ xᵢ² + cᵢ xᵢ + k`.
#[derive(Debug, Clone)]
pub struct DiagonalQuadratic {
    pub diag: Vec<f64>,
    pub linear: Vec<f64>,
    pub constant: f64,
}

impl Objective for DiagonalQuadratic {
    fn value(&self, x: &[f64]) -> f64 {
        self.constant
            + x.iter().zip(self.diag.iter().zip(&self.linear)).map(|(xi, (d, c))| 0.5 * d * xi * xi + c * xi).sum::<f64>()
    }

    fn gradient(&self, x: &[f64]) -> Vec<f64> {
        x.iter().zip(self.diag.iter().zip(&self.linear)).map(|(xi, (d, c))| d * xi + c).collect()
    }
}

type ScalarFn = dyn Fn(&[f64]) -> f64 + Send + Sync;
type VectorFn = dyn Fn(&[f64]) -> Vec<f64> + Send + Sync;
type MatrixFn = dyn Fn(&[f64]) -> Matrix + Send + Sync;

/// Objective assembled from closures.
pub struct FnObjective {
    value: Box<ScalarFn>,
    gradient: Box<VectorFn>,
}

impl FnObjective {
    pub fn new(
        value: impl Fn(&[f64]) -> f64 + Send + Sync + 'static,
        gradient: impl Fn(&[f64]) -> Vec<f64> + Send + Sync + 'static,
    ) -> Self {
        Self { value: Box::new(value), gradient: Box::new(gradient) }
    }
}

impl Objective for FnObjective {
    fn value(&self, x: &[f64]) -> f64 {
        (self.value)(x)
    }

    fn gradient(&self, x: &[f64]) -> Vec<f64> {
        (self.gradient)(x)
    }
}

/// Constraint map assembled from closures; the Jacobian closure returns the
/// dense plain Jacobian.
pub struct FnConstraint {
    dim_in: usize,
    dim_out: usize,
    value: Box<VectorFn>,
    jacobian: Box<MatrixFn>,
}

impl FnConstraint {
    pub fn new(
        dim_in: usize,
        dim_out: usize,
        value: impl Fn(&[f64]) -> Vec<f64> + Send + Sync + 'static,
        jacobian: impl Fn(&[f64]) -> Matrix + Send + Sync + 'static,
    ) -> Self {
        Self { dim_in, dim_out, value: Box::new(value), jacobian: Box::new(jacobian) }
    }
}

impl ConstraintMap for FnConstraint {
    fn dim_in(&self) -> usize {
        self.dim_in
    }
    fn dim_out(&self) -> usize {
        self.dim_out
    }
    fn value(&self, x: &[f64]) -> Vec<f64> {
        (self.value)(x)
    }
    fn jvp(&self, x: &[f64], d: &[f64]) -> Vec<f64> {
        (self.jacobian)(x).matvec(d)
    }
    fn vjp(&self, x: &[f64], v: &[f64]) -> Vec<f64> {
        (self.jacobian)(x).tr_matvec(v)
    }
}

/// `G(x) = A x − b`
#[derive(Debug, Clone)]
pub struct AffineMap {
    pub a: Matrix,
    pub b: Vec<f64>,
}

impl AffineMap {
    pub fn new(a: Matrix, b: Vec<f64>) -> Result<Self> {
        check_dim(a.rows(), b.len())?;
        Ok(Self { a, b })
    }
}

impl ConstraintMap for AffineMap {
    fn dim_in(&self) -> usize {
        self.a.cols()
    }
    fn dim_out(&self) -> usize {
        self.a.rows()
    }
    fn value(&self, x: &[f64]) -> Vec<f64> {
        let mut g = self.a.matvec(x);
        for (gi, bi) in g.iter_mut().zip(&self.b) {
            *gi -= bi;
        }
        g
    }
    fn jvp(&self, _x: &[f64], d: &[f64]) -> Vec<f64> {
        self.a.matvec(d)
    }
    fn vjp(&self, _x: &[f64], v: &[f64]) -> Vec<f64> {
        self.a.tr_matvec(v)
    }
}

/// `Gⱼ(x) = ½ xᵀ Qⱼ x + (A x)ⱼ − bⱼ` with symmetric `Qⱼ`.
#[derive(Debug, Clone)]
pub struct QuadraticMap {
    pub quads: Vec<Matrix>,
    pub affine: AffineMap,
}

impl QuadraticMap {
    pub fn new(quads: Vec<Matrix>, a: Matrix, b: Vec<f64>) -> Result<Self> {
        check_dim(a.rows(), quads.len())?;
        for q in &quads {
            check_dim(a.cols(), q.rows())?;
            check_dim(a.cols(), q.cols())?;
        }
        Ok(Self { quads, affine: AffineMap::new(a, b)? })
    }
}

impl ConstraintMap for QuadraticMap {
    fn dim_in(&self) -> usize {
        self.affine.dim_in()
    }
    fn dim_out(&self) -> usize {
        self.affine.dim_out()
    }
    fn value(&self, x: &[f64]) -> Vec<f64> {
        let mut g = self.affine.value(x);
        for (gi, q) in g.iter_mut().zip(&self.quads) {
            *gi += 0.5 * dot(x, &q.matvec(x));
        }
        g
    }
    fn jvp(&self, x: &[f64], d: &[f64]) -> Vec<f64> {
        let mut out = self.affine.a.matvec(d);
        for (oi, q) in out.iter_mut().zip(&self.quads) {
            *oi += dot(&q.matvec(x), d);
        }
        out
    }
    fn vjp(&self, x: &[f64], v: &[f64]) -> Vec<f64> {
        let mut out = self.affine.a.tr_matvec(v);
        for (vj, q) in v.iter().zip(&self.quads) {
            if *vj != 0.0 {
                for (oi, qx) in out.iter_mut().zip(q.matvec(x)) {
                    *oi += vj * qx;
                }
            }
        }
        out
    }
}

/// Two-sided bounds as a cone constraint: `G(u) = (u_b − u, u − u_a) ∈ K`
/// with `K` the nonnegative cone of `Y = X × X`.
#[derive(Debug, Clone)]
pub struct BoxConstraintMap {
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

impl ConstraintMap for BoxConstraintMap {
    fn dim_in(&self) -> usize {
        self.lower.len()
    }
    fn dim_out(&self) -> usize {
        2 * self.lower.len()
    }
    fn value(&self, x: &[f64]) -> Vec<f64> {
        let upper_part = self.upper.iter().zip(x).map(|(ub, u)| ub - u);
        let lower_part = x.iter().zip(&self.lower).map(|(u, ua)| u - ua);
        upper_part.chain(lower_part).collect()
    }
    fn jvp(&self, _x: &[f64], d: &[f64]) -> Vec<f64> {
        d.iter().map(|v| -v).chain(d.iter().copied()).collect()
    }
    fn vjp(&self, _x: &[f64], v: &[f64]) -> Vec<f64> {
        let n = self.lower.len();
        (0..n).map(|i| v[n + i] - v[i]).collect()
    }
}

/// `G(α, u) = α q − u` on `ℝ × ℝⁿ → ℝⁿ`.
#[derive(Debug, Clone)]
pub struct ScaledCoordinateMap {
    pub profile: Vec<f64>,
}

impl ConstraintMap for ScaledCoordinateMap {
    fn dim_in(&self) -> usize {
        self.profile.len() + 1
    }
    fn dim_out(&self) -> usize {
        self.profile.len()
    }
    fn value(&self, x: &[f64]) -> Vec<f64> {
        let alpha = x[0];
        self.profile.iter().zip(&x[1..]).map(|(q, u)| alpha * q - u).collect()
    }
    fn jvp(&self, _x: &[f64], d: &[f64]) -> Vec<f64> {
        self.profile.iter().zip(&d[1..]).map(|(q, du)| d[0] * q - du).collect()
    }
    fn vjp(&self, _x: &[f64], v: &[f64]) -> Vec<f64> {
        std::iter::once(dot(&self.profile, v)).chain(v.iter().map(|vi| -vi)).collect()
    }
}

/// The zero map `ℝⁿ → ℝᵐ`.
#[derive(Debug, Clone)]
pub struct ZeroMap {
    pub dim_in: usize,
    pub dim_out: usize,
}

impl ConstraintMap for ZeroMap {
    fn dim_in(&self) -> usize {
        self.dim_in
    }
    fn dim_out(&self) -> usize {
        self.dim_out
    }
    fn value(&self, _x: &[f64]) -> Vec<f64> {
        vec![0.0; self.dim_out]
    }
    fn jvp(&self, _x: &[f64], _d: &[f64]) -> Vec<f64> {
        vec![0.0; self.dim_out]
    }
    fn vjp(&self, _x: &[f64], _v: &[f64]) -> Vec<f64> {
        vec![0.0; self.dim_in]
    }
}
