use crate::error::{Error, Result};

/// `coeff · t^exponent`
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerTerm {
    pub coeff: f64,
    pub exponent: f64,
}

impl PowerTerm {
    pub fn new(coeff: f64, exponent: f64) -> Self {
        Self { coeff, exponent }
    }

    pub fn constant(c: f64) -> Self {
        Self { coeff: c, exponent: 0.0 }
    }

    pub fn eval(&self, t: f64) -> f64 {
        if self.exponent == 0.0 {
            self.coeff
        } else {
            self.coeff * t.powf(self.exponent)
        }
    }

    /// `∫_a^b coeff · t^exponent dt` for `0 ≤ a ≤ b`.
    pub fn integrate(&self, a: f64, b: f64) -> Result<f64> {
        if self.coeff == 0.0 || a == b {
            return Ok(0.0);
        }
        let s = self.exponent;
        if s == -1.0 {
            if a <= 0.0 {
                return Err(Error::InvalidInput("t^-1 is not integrable at 0".into()));
            }
            return Ok(self.coeff * (b / a).ln());
        }
        if s < -1.0 && a <= 0.0 {
            return Err(Error::InvalidInput(format!("t^{s} is not integrable at 0")));
        }
        let p = s + 1.0;
        Ok(self.coeff * (b.powf(p) - a.powf(p)) / p)
    }
}

/// A sum of power terms, valid on one interval of a [`PiecewiseAnalytic`].
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Segment {
    pub terms: Vec<PowerTerm>,
}

impl Segment {
    pub fn new(terms: Vec<PowerTerm>) -> Self {
        Self { terms }
    }

    pub fn zero() -> Self {
        Self { terms: Vec::new() }
    }

    pub fn constant(c: f64) -> Self {
        Self { terms: vec![PowerTerm::constant(c)] }
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.terms.iter().map(|p| p.eval(t)).sum()
    }

    pub fn integrate(&self, a: f64, b: f64) -> Result<f64> {
        self.terms.iter().map(|p| p.integrate(a, b)).sum()
    }

    /// Product, expanded term by term (exponents add).
    pub fn mul(&self, other: &Segment) -> Segment {
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for a in &self.terms {
            for b in &other.terms {
                terms.push(PowerTerm::new(a.coeff * b.coeff, a.exponent + b.exponent));
            }
        }
        Segment { terms }
    }

    pub fn scale(&self, c: f64) -> Segment {
        Segment { terms: self.terms.iter().map(|p| PowerTerm::new(c * p.coeff, p.exponent)).collect() }
    }

    pub fn add(&self, other: &Segment) -> Segment {
        Segment { terms: self.terms.iter().chain(&other.terms).copied().collect() }
    }
}

/// Function on `[b₀, b_m] ⊂ [0, ∞)` that is a finite sum of power functions
/// on each interval `[bᵢ, bᵢ₊₁]`. Values at the breakpoints themselves
/// follow the left-closed convention `[bᵢ, bᵢ₊₁)`, except at the right end.
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseAnalytic {
    breakpoints: Vec<f64>,
    segments: Vec<Segment>,
}

impl PiecewiseAnalytic {
    pub fn new(breakpoints: Vec<f64>, segments: Vec<Segment>) -> Result<Self> {
        if breakpoints.len() < 2 || segments.len() + 1 != breakpoints.len() {
            return Err(Error::InvalidInput(format!(
                "{} breakpoints need {} segments, got {}",
                breakpoints.len(),
                breakpoints.len().saturating_sub(1),
                segments.len()
            )));
        }
        if breakpoints[0] < 0.0 || breakpoints.iter().any(|b| !b.is_finite()) {
            return Err(Error::InvalidInput("breakpoints must be finite and nonnegative".into()));
        }
        if breakpoints.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidInput("breakpoints must be strictly increasing".into()));
        }
        Ok(Self { breakpoints, segments })
    }

    /// A single segment on `(0, 1)`.
    pub fn on_unit_interval(segment: Segment) -> Self {
        Self { breakpoints: vec![0.0, 1.0], segments: vec![segment] }
    }

    pub fn constant(c: f64) -> Self {
        Self::on_unit_interval(Segment::constant(c))
    }

    pub fn power(coeff: f64, exponent: f64) -> Self {
        Self::on_unit_interval(Segment::new(vec![PowerTerm::new(coeff, exponent)]))
    }

    /// `c · χ_[a, b)` on `(0, 1)`.
    pub fn indicator(c: f64, a: f64, b: f64) -> Result<Self> {
        if !(0.0 <= a && a < b && b <= 1.0) {
            return Err(Error::InvalidInput(format!("indicator interval [{a}, {b}] not inside [0, 1]")));
        }
        let mut bp = vec![0.0];
        let mut segs = Vec::new();
        if a > 0.0 {
            bp.push(a);
            segs.push(Segment::zero());
        }
        bp.push(b);
        segs.push(Segment::constant(c));
        if b < 1.0 {
            bp.push(1.0);
            segs.push(Segment::zero());
        }
        Self::new(bp, segs)
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.breakpoints[0], *self.breakpoints.last().expect("at least two breakpoints"))
    }

    fn segment_index(&self, t: f64) -> Option<usize> {
        let (a, b) = self.domain();
        if t < a || t > b {
            return None;
        }
        let idx = self.breakpoints.partition_point(|&bp| bp <= t);
        Some(idx.saturating_sub(1).min(self.segments.len() - 1))
    }

    /// Value at `t`; zero outside the domain.
    pub fn eval(&self, t: f64) -> f64 {
        self.segment_index(t).map_or(0.0, |i| self.segments[i].eval(t))
    }

    /// `∫_a^b`, clipped to the domain.
    pub fn integrate(&self, a: f64, b: f64) -> Result<f64> {
        let mut total = 0.0;
        for (i, seg) in self.segments.iter().enumerate() {
            let lo = self.breakpoints[i].max(a);
            let hi = self.breakpoints[i + 1].min(b);
            if lo < hi {
                total += seg.integrate(lo, hi)?;
            }
        }
        Ok(total)
    }

    /// Cell averages `(1/|cell|) ∫_cell` over consecutive cells given by
    /// `boundaries`.
    pub fn cell_averages(&self, boundaries: &[f64]) -> Result<Vec<f64>> {
        boundaries.windows(2).map(|w| Ok(self.integrate(w[0], w[1])? / (w[1] - w[0]))).collect()
    }

    pub fn sample(&self, nodes: &[f64]) -> Vec<f64> {
        nodes.iter().map(|&t| self.eval(t)).collect()
    }

    /// Both functions re-expressed on the union of their breakpoints,
    /// restricted to the common domain.
    fn refine(&self, other: &Self) -> Result<(Vec<f64>, Vec<(Segment, Segment)>)> {
        let (a0, a1) = self.domain();
        let (b0, b1) = other.domain();
        let (lo, hi) = (a0.max(b0), a1.min(b1));
        if lo >= hi {
            return Err(Error::InvalidInput("domains do not overlap".into()));
        }
        let mut bp: Vec<f64> = self
            .breakpoints
            .iter()
            .chain(&other.breakpoints)
            .copied()
            .filter(|&b| b >= lo && b <= hi)
            .collect();
        bp.sort_by(f64::total_cmp);
        bp.dedup();
        let pieces = bp
            .windows(2)
            .map(|w| {
                let mid = 0.5 * (w[0] + w[1]);
                let i = self.segment_index(mid).expect("inside domain");
                let j = other.segment_index(mid).expect("inside domain");
                (self.segments[i].clone(), other.segments[j].clone())
            })
            .collect();
        Ok((bp, pieces))
    }

    /// Pointwise product on the common domain.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        let (bp, pieces) = self.refine(other)?;
        Self::new(bp, pieces.iter().map(|(a, b)| a.mul(b)).collect())
    }

    /// `self + c · other` on the common domain.
    pub fn add_scaled(&self, c: f64, other: &Self) -> Result<Self> {
        let (bp, pieces) = self.refine(other)?;
        Self::new(bp, pieces.iter().map(|(a, b)| a.add(&b.scale(c))).collect())
    }

    pub fn scale(&self, c: f64) -> Self {
        Self { breakpoints: self.breakpoints.clone(), segments: self.segments.iter().map(|s| s.scale(c)).collect() }
    }

    /// `∫ self · other` by closed-form antiderivatives.
    pub fn inner(&self, other: &Self) -> Result<f64> {
        let (bp, pieces) = self.refine(other)?;
        let mut total = 0.0;
        for (w, (a, b)) in bp.windows(2).zip(&pieces) {
            total += a.mul(b).integrate(w[0], w[1])?;
        }
        Ok(total)
    }

    pub fn norm(&self) -> Result<f64> {
        Ok(self.inner(self)?.sqrt())
    }
}

/// `∫ f₁ f₂` over the common domain, exact up to roundoff.
pub fn exact_inner(f1: &PiecewiseAnalytic, f2: &PiecewiseAnalytic) -> Result<f64> {
    f1.inner(f2)
}
