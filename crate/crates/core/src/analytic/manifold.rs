//! Closed-form manifolds and their charts.
//!
//! * `T^m` has the single fundamental-domain chart `[0,1)^m`; coordinates are
//!   read mod 1.
//! * `S^m` has two stereographic charts. The `Z` chart is positively oriented
//!   and misses the north pole; the `W` chart misses the south pole. On `S^2`
//!   the transition is the holomorphic `w = 1/z`, so both charts are
//!   positively oriented. For `m != 2` the transition is the inversion
//!   `w = z/|z|^2`, which reverses orientation.

use std::fmt;

use super::AnalyticError;
use crate::numeric::{norm, wrap_centered, wrap_unit};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ManifoldDescriptor {
    Torus(usize),
    Sphere(usize),
    /// Product with the orientation of the first factor followed by the second.
    Product(Vec<ManifoldDescriptor>),
}

impl ManifoldDescriptor {
    pub fn torus(m: usize) -> Self {
        Self::Torus(m)
    }

    pub fn sphere(m: usize) -> Self {
        Self::Sphere(m)
    }

    pub fn circle() -> Self {
        Self::Torus(1)
    }

    pub fn dimension(&self) -> usize {
        match self {
            Self::Torus(m) | Self::Sphere(m) => *m,
            Self::Product(fs) => fs.iter().map(Self::dimension).sum(),
        }
    }

    pub fn validate(&self) -> Result<(), AnalyticError> {
        match self {
            Self::Torus(0) | Self::Sphere(0) => {
                Err(AnalyticError::InvalidManifold("dimension must be at least 1".into()))
            }
            Self::Product(fs) if fs.is_empty() => Err(AnalyticError::InvalidManifold("empty product".into())),
            Self::Product(fs) => fs.iter().try_for_each(Self::validate),
            _ => Ok(()),
        }
    }

    /// Flattens products of tori into a single torus; a one-factor product
    /// becomes its factor.
    pub fn normalized(&self) -> Self {
        match self {
            Self::Product(fs) => {
                let fs: Vec<Self> = fs.iter().map(Self::normalized).collect();
                if fs.len() == 1 {
                    return fs[0].clone();
                }
                if fs.iter().all(|f| matches!(f, Self::Torus(_))) {
                    Self::Torus(fs.iter().map(Self::dimension).sum())
                } else {
                    Self::Product(fs)
                }
            }
            other => other.clone(),
        }
    }

    pub fn is_torus(&self) -> bool {
        matches!(self.normalized(), Self::Torus(_))
    }

    pub fn is_sphere(&self) -> bool {
        matches!(self.normalized(), Self::Sphere(_))
    }

    pub fn charts(&self) -> Result<Vec<Chart>, AnalyticError> {
        match self.normalized() {
            Self::Torus(_) => Ok(vec![Chart::Angle]),
            Self::Sphere(_) => Ok(vec![Chart::Z, Chart::W]),
            Self::Product(_) => Err(AnalyticError::Unsupported(format!("charts on {self}"))),
        }
    }

    /// The chart expressions are written in.
    pub fn primary_chart(&self) -> Result<Chart, AnalyticError> {
        Ok(self.charts()?[0])
    }

    /// `+1` if the chart is positively oriented.
    pub fn orientation_sign(&self, chart: Chart) -> i32 {
        match chart {
            Chart::Angle | Chart::Z => 1,
            Chart::W => {
                if self.dimension() == 2 {
                    1
                } else {
                    -1
                }
            }
        }
    }

    /// Re-expresses a point in another chart.
    pub fn to_chart(&self, p: &ChartPoint, chart: Chart) -> Result<Vec<f64>, AnalyticError> {
        if p.chart == chart {
            return Ok(match chart {
                Chart::Angle => p.coords.iter().map(|&t| wrap_unit(t)).collect(),
                _ => p.coords.clone(),
            });
        }
        match (p.chart, chart) {
            (Chart::Z, Chart::W) | (Chart::W, Chart::Z) => self.sphere_inversion(&p.coords),
            _ => Err(AnalyticError::ChartDomain(format!("no transition from {:?} to {:?} on {self}", p.chart, chart))),
        }
    }

    fn sphere_inversion(&self, x: &[f64]) -> Result<Vec<f64>, AnalyticError> {
        let r2: f64 = x.iter().map(|v| v * v).sum();
        if r2 == 0.0 || !r2.is_finite() {
            return Err(AnalyticError::ChartDomain(format!("chart pole at {x:?}")));
        }
        if self.dimension() == 2 {
            Ok(vec![x[0] / r2, -x[1] / r2])
        } else {
            Ok(x.iter().map(|v| v / r2).collect())
        }
    }

    /// The chart of choice for a point: the fundamental domain on tori, the
    /// chart in which the point lies in the closed unit ball on spheres.
    pub fn canonical(&self, p: &ChartPoint) -> Result<ChartPoint, AnalyticError> {
        match p.chart {
            Chart::Angle => Ok(ChartPoint::new(Chart::Angle, self.to_chart(p, Chart::Angle)?)),
            Chart::Z | Chart::W => {
                if norm(&p.coords) <= 1.0 {
                    Ok(p.clone())
                } else {
                    let other = if p.chart == Chart::Z { Chart::W } else { Chart::Z };
                    Ok(ChartPoint::new(other, self.to_chart(p, other)?))
                }
            }
        }
    }

    /// Point of the round sphere in `R^{m+1}` for a chart point.
    pub fn embed_sphere(&self, p: &ChartPoint) -> Vec<f64> {
        let r2: f64 = p.coords.iter().map(|v| v * v).sum();
        let denom = 1.0 + r2;
        let mut out: Vec<f64> = p.coords.iter().map(|v| 2.0 * v / denom).collect();
        match p.chart {
            Chart::Z => out.push((r2 - 1.0) / denom),
            _ => {
                if self.dimension() == 2 {
                    out[1] = -out[1];
                }
                out.push((1.0 - r2) / denom);
            }
        }
        out
    }

    /// Distance between two points: periodic on tori, chordal on spheres.
    pub fn distance(&self, a: &ChartPoint, b: &ChartPoint) -> Result<f64, AnalyticError> {
        match self.normalized() {
            Self::Torus(_) => {
                let d: Vec<f64> = a.coords.iter().zip(&b.coords).map(|(x, y)| wrap_centered(x - y)).collect();
                Ok(norm(&d))
            }
            Self::Sphere(_) => {
                let (ea, eb) = (self.embed_sphere(a), self.embed_sphere(b));
                Ok(ea.iter().zip(&eb).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt())
            }
            Self::Product(_) => Err(AnalyticError::Unsupported(format!("distance on {self}"))),
        }
    }
}

impl fmt::Display for ManifoldDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Torus(m) => write!(f, "T^{m}"),
            Self::Sphere(m) => write!(f, "S^{m}"),
            Self::Product(fs) => {
                let parts: Vec<String> = fs.iter().map(ToString::to_string).collect();
                write!(f, "{}", parts.join(" x "))
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Chart {
    /// Fundamental domain `[0,1)^m` of a torus.
    Angle,
    /// Stereographic chart around the south pole of a sphere.
    Z,
    /// Stereographic chart around the north pole (`∞`) of a sphere.
    W,
}

impl Chart {
    pub fn label(self) -> &'static str {
        match self {
            Chart::Angle => "x",
            Chart::Z => "z",
            Chart::W => "w",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChartPoint {
    pub chart: Chart,
    pub coords: Vec<f64>,
}

impl ChartPoint {
    pub fn new(chart: Chart, coords: Vec<f64>) -> Self {
        Self { chart, coords }
    }
}

impl fmt::Display for ChartPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cs: Vec<String> = self.coords.iter().map(|c| format_coord(*c)).collect();
        write!(f, "{}=({})", self.chart.label(), cs.join(", "))
    }
}

/// Fixed-precision rendering; tiny values print as 0.
pub fn format_coord(c: f64) -> String {
    let c = if c.abs() < 5e-7 { 0.0 } else { c };
    format!("{c:.6}")
}
