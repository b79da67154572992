//! Evaluable smooth maps between closed-form manifolds.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use num_traits::{ToPrimitive, Zero};

use super::expr::{parse_expressions, Expr};
use super::manifold::{Chart, ChartPoint, ManifoldDescriptor};
use super::poly::RatPoly;
use super::AnalyticError;
use crate::linalg::{Rational, RationalMatrix};
use crate::numeric::{fd_jacobian, norm, plain_diff, wrap_unit, wrapped_diff, JacobianEstimate, RealMatrix};

#[derive(Debug, Clone, PartialEq)]
pub enum MapFamily {
    /// `x -> A x + c mod Z^n` with `A` an integer `n × m` matrix.
    TorusLinear { matrix: Vec<Vec<i64>>, offset: Vec<Rational> },
    /// `x -> k x + c mod 1` on the circle.
    CirclePower { power: i64, offset: Rational },
    /// `z -> p(z)/q(z)` on the Riemann sphere, stored with `gcd(p, q) = 1`.
    SphereRational { numerator: RatPoly, denominator: RatPoly },
    /// One expression per codomain coordinate, in the primary chart of each side.
    ChartExpr { exprs: Arc<Vec<Expr>>, source: String },
}

#[derive(Debug, Clone, PartialEq)]
pub struct SmoothMapSpec {
    pub domain: ManifoldDescriptor,
    pub codomain: ManifoldDescriptor,
    pub family: MapFamily,
}

impl SmoothMapSpec {
    pub fn torus_linear(matrix: Vec<Vec<i64>>, offset: Vec<Rational>) -> Result<Self, AnalyticError> {
        let n = matrix.len();
        let m = matrix.first().map_or(0, Vec::len);
        if n == 0 || m == 0 || matrix.iter().any(|r| r.len() != m) {
            return Err(AnalyticError::InvalidMap("torus-linear matrix must be a non-empty rectangle".into()));
        }
        if offset.len() != n {
            return Err(AnalyticError::ArityMismatch { expected: n, got: offset.len() });
        }
        Ok(Self {
            domain: ManifoldDescriptor::Torus(m),
            codomain: ManifoldDescriptor::Torus(n),
            family: MapFamily::TorusLinear { matrix, offset },
        })
    }

    pub fn torus_linear_i64(matrix: &[&[i64]]) -> Self {
        let n = matrix.len();
        Self::torus_linear(matrix.iter().map(|r| r.to_vec()).collect(), vec![Rational::zero(); n])
            .expect("well-formed matrix")
    }

    pub fn circle_power(power: i64, offset: Rational) -> Self {
        Self {
            domain: ManifoldDescriptor::circle(),
            codomain: ManifoldDescriptor::circle(),
            family: MapFamily::CirclePower { power, offset },
        }
    }

    /// `p/q` on `S^2`, reduced by the polynomial gcd.
    pub fn sphere_rational(numerator: RatPoly, denominator: RatPoly) -> Result<Self, AnalyticError> {
        if denominator.is_zero() {
            return Err(AnalyticError::InvalidMap("denominator of a rational map must be non-zero".into()));
        }
        if numerator.is_zero() {
            // constant map 0
            return Ok(Self::sphere_rational_raw(numerator, RatPoly::from_integers(&[1])));
        }
        let g = RatPoly::gcd(&numerator, &denominator);
        let (p, _) = numerator.div_rem(&g);
        let (q, _) = denominator.div_rem(&g);
        Ok(Self::sphere_rational_raw(p, q))
    }

    fn sphere_rational_raw(numerator: RatPoly, denominator: RatPoly) -> Self {
        Self {
            domain: ManifoldDescriptor::sphere(2),
            codomain: ManifoldDescriptor::sphere(2),
            family: MapFamily::SphereRational { numerator, denominator },
        }
    }

    pub fn identity(manifold: &ManifoldDescriptor) -> Result<Self, AnalyticError> {
        match manifold.normalized() {
            ManifoldDescriptor::Torus(m) => Self::torus_linear(
                (0..m).map(|i| (0..m).map(|j| i64::from(i == j)).collect()).collect(),
                vec![Rational::zero(); m],
            ),
            ManifoldDescriptor::Sphere(2) => {
                Self::sphere_rational(RatPoly::from_integers(&[0, 1]), RatPoly::from_integers(&[1]))
            }
            ManifoldDescriptor::Sphere(m) => {
                let vars = ["x1", "x2", "x3", "x4"];
                if m > vars.len() {
                    return Err(AnalyticError::Unsupported(format!("identity on S^{m}")));
                }
                parse_map_expr(&vars[..m].join("; "), manifold, manifold)
            }
            other => Err(AnalyticError::Unsupported(format!("identity on {other}"))),
        }
    }

    /// Integer linear part and offset, for the families that have one.
    pub fn linear_data(&self) -> Option<(Vec<Vec<i64>>, Vec<Rational>)> {
        match &self.family {
            MapFamily::TorusLinear { matrix, offset } => Some((matrix.clone(), offset.clone())),
            MapFamily::CirclePower { power, offset } => Some((vec![vec![*power]], vec![offset.clone()])),
            _ => None,
        }
    }

    pub fn family_name(&self) -> &'static str {
        match self.family {
            MapFamily::TorusLinear { .. } => "torus_linear",
            MapFamily::CirclePower { .. } => "circle_power",
            MapFamily::SphereRational { .. } => "sphere_rational",
            MapFamily::ChartExpr { .. } => "chart_expr",
        }
    }

    /// Exact image of a rational point on a torus, reduced to `[0,1)^n`.
    pub fn eval_exact(&self, x: &[Rational]) -> Result<Vec<Rational>, AnalyticError> {
        let (a, c) = self
            .linear_data()
            .ok_or_else(|| AnalyticError::FamilyMismatch("exact evaluation needs a linear torus map".into()))?;
        if x.len() != self.domain.dimension() {
            return Err(AnalyticError::ArityMismatch { expected: self.domain.dimension(), got: x.len() });
        }
        let a = RationalMatrix::from_i64_rows(&a);
        Ok(a.mul_vec(x)
            .into_iter()
            .zip(c)
            .map(|(v, c)| {
                let y = v + c;
                let fl = Rational::from_integer(y.floor().to_integer());
                y - fl
            })
            .collect())
    }

    /// Image of a point given in the primary chart of the domain; torus
    /// outputs are reduced to `[0,1)`.
    pub fn eval_map(&self, point: &[f64]) -> Result<Vec<f64>, AnalyticError> {
        let chart = self.domain.primary_chart()?;
        let target = self.codomain.primary_chart()?;
        Ok(self.eval_in(&ChartPoint::new(chart, point.to_vec()), Some(target))?.coords)
    }

    /// Evaluates at a chart point. With `target = None` the image is returned
    /// in the codomain chart where it lies in the unit ball (spheres) or the
    /// fundamental domain (tori).
    pub fn eval_in(&self, p: &ChartPoint, target: Option<Chart>) -> Result<ChartPoint, AnalyticError> {
        let m = self.domain.dimension();
        if p.coords.len() != m {
            return Err(AnalyticError::ArityMismatch { expected: m, got: p.coords.len() });
        }
        if p.coords.iter().any(|v| !v.is_finite()) {
            return Err(AnalyticError::ChartDomain(format!("non-finite point {:?}", p.coords)));
        }
        let image = match &self.family {
            MapFamily::TorusLinear { .. } | MapFamily::CirclePower { .. } => {
                let (a, c) = self.linear_data().expect("linear family");
                let x = self.domain.to_chart(p, Chart::Angle)?;
                let y = a
                    .iter()
                    .zip(&c)
                    .map(|(row, c)| {
                        let s: f64 = row.iter().zip(&x).map(|(&aij, xj)| aij as f64 * xj).sum();
                        wrap_unit(s + c.to_f64().unwrap_or(0.0))
                    })
                    .collect();
                ChartPoint::new(Chart::Angle, y)
            }
            MapFamily::SphereRational { numerator, denominator } => {
                let (num, den) = rational_homogeneous(numerator, denominator, p)?;
                let chart = match target {
                    Some(c) => c,
                    None if num.norm() <= den.norm() => Chart::Z,
                    None => Chart::W,
                };
                let v = match chart {
                    Chart::Z => num / den,
                    Chart::W => den / num,
                    Chart::Angle => return Err(AnalyticError::ChartDomain("angle chart on a sphere".into())),
                };
                if !v.re.is_finite() || !v.im.is_finite() {
                    return Err(AnalyticError::ChartDomain(format!("image is the pole of chart {chart:?}")));
                }
                return Ok(ChartPoint::new(chart, vec![v.re, v.im]));
            }
            MapFamily::ChartExpr { exprs, .. } => {
                let x = self.domain.to_chart(p, self.domain.primary_chart()?)?;
                let out: Vec<f64> = exprs.iter().map(|e| e.eval(&x)).collect();
                if out.iter().any(|v| !v.is_finite()) {
                    return Err(AnalyticError::ChartDomain(format!("expression is undefined at {x:?}")));
                }
                let primary = self.codomain.primary_chart()?;
                let out = if primary == Chart::Angle { out.into_iter().map(wrap_unit).collect() } else { out };
                ChartPoint::new(primary, out)
            }
        };
        match target {
            Some(c) => Ok(ChartPoint::new(c, self.codomain.to_chart(&image, c)?)),
            None => self.codomain.canonical(&image),
        }
    }

    /// Jacobian in the primary charts at `point`.
    pub fn jacobian(&self, point: &[f64]) -> Result<JacobianEstimate, AnalyticError> {
        let chart = self.domain.primary_chart()?;
        let target = self.codomain.primary_chart()?;
        self.jacobian_in(&ChartPoint::new(chart, point.to_vec()), target)
    }

    /// Jacobian of the map read in domain chart `p.chart` and codomain chart
    /// `target`. Exact for the linear torus families.
    pub fn jacobian_in(&self, p: &ChartPoint, target: Chart) -> Result<JacobianEstimate, AnalyticError> {
        let (m, n) = (self.domain.dimension(), self.codomain.dimension());
        if let Some((a, _)) = self.linear_data() {
            let flat: Vec<f64> = a.iter().flatten().map(|&v| v as f64).collect();
            return Ok(JacobianEstimate::exact(RealMatrix::from_row_slice(n, m, &flat)));
        }
        // validate the centre first so chart errors surface directly
        self.eval_in(p, Some(target))?;
        let diff = if target == Chart::Angle { wrapped_diff } else { plain_diff };
        fd_jacobian(
            &p.coords,
            n,
            |x| {
                self.eval_in(&ChartPoint::new(p.chart, x.to_vec()), Some(target))
                    .map(|q| q.coords)
                    .map_err(|e| e.to_string())
            },
            diff,
        )
        .map_err(AnalyticError::ChartDomain)
    }
}

impl fmt::Display for SmoothMapSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {} -> {}", self.family_name(), self.domain, self.codomain)
    }
}

// `(numerator, denominator)` of `p/q` at a chart point, with the W chart
// handled through the reversed polynomials so that `∞` is a regular point.
fn rational_homogeneous(p: &RatPoly, q: &RatPoly, pt: &ChartPoint) -> Result<(Complex64, Complex64), AnalyticError> {
    let z = Complex64::new(pt.coords[0], pt.coords[1]);
    let (num, den) = match pt.chart {
        Chart::Z => (p.eval(z), q.eval(z)),
        Chart::W => {
            let d = p.degree().max(q.degree());
            (p.reversed(d).eval(z), q.reversed(d).eval(z))
        }
        Chart::Angle => return Err(AnalyticError::ChartDomain("angle chart on a sphere".into())),
    };
    if num.norm() == 0.0 && den.norm() == 0.0 {
        return Err(AnalyticError::ChartDomain("numerator and denominator vanish together".into()));
    }
    Ok((num, den))
}

/// Algebraic degree of a reduced rational map.
pub fn rational_degree(s: &SmoothMapSpec) -> Option<i64> {
    match &s.family {
        MapFamily::SphereRational { numerator, denominator } => {
            if numerator.is_zero() {
                Some(0)
            } else {
                Some(numerator.degree().max(denominator.degree()) as i64)
            }
        }
        _ => None,
    }
}

const PERIODICITY_SAMPLES: [f64; 5] = [0.137, 0.421, 0.613, 0.829, 0.291];

/// Parses a `;`-separated list of chart expressions into a map spec.
///
/// Torus-to-torus expressions that are affine are recognized as
/// [`MapFamily::TorusLinear`] and must have integer linear coefficients. Other
/// torus targets are checked for periodicity at sample points.
pub fn parse_map_expr(
    text: &str,
    domain: &ManifoldDescriptor,
    codomain: &ManifoldDescriptor,
) -> Result<SmoothMapSpec, AnalyticError> {
    domain.validate()?;
    codomain.validate()?;
    let exprs = parse_expressions(text)?;
    let (m, n) = (domain.dimension(), codomain.dimension());
    if exprs.len() != n {
        return Err(AnalyticError::ArityMismatch { expected: n, got: exprs.len() });
    }
    if let Some(v) = exprs.iter().filter_map(Expr::max_var).max() {
        if v >= m {
            return Err(AnalyticError::Parse(super::expr::ParseError {
                position: 0,
                message: format!("variable x{} is not a coordinate of {domain}", v + 1),
            }));
        }
    }
    let (domain, codomain) = (domain.normalized(), codomain.normalized());
    domain.charts()?;
    codomain.charts()?;

    if domain.is_torus() && codomain.is_torus() {
        let affine: Option<Vec<_>> = exprs.iter().map(Expr::affine).collect();
        if let Some(forms) = affine {
            let mut matrix = Vec::with_capacity(n);
            for (i, form) in forms.iter().enumerate() {
                let mut row = Vec::with_capacity(m);
                for j in 0..m {
                    let c = form.coefficient(j);
                    if !c.is_integer() {
                        return Err(AnalyticError::NotWellDefinedOnQuotient(format!(
                            "coefficient {c} of x{} in output {} is not an integer",
                            j + 1,
                            i + 1
                        )));
                    }
                    row.push(c.to_integer().to_i64().ok_or_else(|| {
                        AnalyticError::InvalidMap(format!("coefficient {c} does not fit in 64 bits"))
                    })?);
                }
                matrix.push(row);
            }
            let offset = forms.into_iter().map(|f| f.constant).collect();
            let mut s = SmoothMapSpec::torus_linear(matrix, offset)?;
            s.domain = domain;
            s.codomain = codomain;
            return Ok(s);
        }
    }

    let spec = SmoothMapSpec {
        domain: domain.clone(),
        codomain: codomain.clone(),
        family: MapFamily::ChartExpr { exprs: Arc::new(exprs.clone()), source: text.trim().to_string() },
    };
    if domain.is_torus() {
        check_periodicity(&exprs, m, codomain.is_torus())?;
    }
    Ok(spec)
}

// f(x + e_i) must agree with f(x), mod 1 for torus targets.
fn check_periodicity(exprs: &[Expr], m: usize, torus_target: bool) -> Result<(), AnalyticError> {
    for s in 0..PERIODICITY_SAMPLES.len() {
        let x: Vec<f64> = (0..m).map(|j| PERIODICITY_SAMPLES[(s + j) % PERIODICITY_SAMPLES.len()]).collect();
        let base: Vec<f64> = exprs.iter().map(|e| e.eval(&x)).collect();
        for i in 0..m {
            let mut shifted = x.clone();
            shifted[i] += 1.0;
            let moved: Vec<f64> = exprs.iter().map(|e| e.eval(&shifted)).collect();
            let d = if torus_target { wrapped_diff(&moved, &base) } else { plain_diff(&moved, &base) };
            let scale = 1.0 + norm(&base);
            if norm(&d) > 1e-9 * scale {
                return Err(AnalyticError::NotWellDefinedOnQuotient(format!(
                    "value changes by {d:?} under the lattice shift of x{} at {x:?}",
                    i + 1
                )));
            }
        }
    }
    Ok(())
}
