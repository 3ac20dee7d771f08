//! Epigraph and envelope computations on sampled surplus curves.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::ProductionCurve;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SurplusPoint {
    pub cost: f64,
    pub surplus: f64,
}

impl SurplusPoint {
    pub fn output(&self) -> f64 {
        self.surplus + self.cost
    }
}

/// Social surplus `g(c) - c` sampled on the production curve's cost grid.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SurplusCurve {
    pub points: Vec<SurplusPoint>,
}

impl SurplusCurve {
    pub fn from_production(curve: &ProductionCurve) -> Self {
        SurplusCurve { points: curve.samples().map(|(c, g)| SurplusPoint { cost: c, surplus: g - c }).collect() }
    }

    pub fn cost_cap(&self) -> f64 {
        self.points.last().map_or(0.0, |p| p.cost)
    }

    /// Back to `g(c) = s(c) + c`.
    pub fn to_production(&self) -> Result<ProductionCurve> {
        ProductionCurve::new(
            self.points.iter().map(|p| p.cost).collect(),
            self.points.iter().map(SurplusPoint::output).collect(),
        )
    }

    /// Point of largest surplus; ties go to the lower cost.
    pub fn max_point(&self) -> SurplusPoint {
        extremal_point(self, (0.0, 1.0), 0.0)
    }
}

/// Sampled point maximizing `<direction, (c, s)>`.
///
/// Points within `eps_tie` of the maximum are tied; among them the one with
/// the larger output `s + c` (the principal's side) wins, then the lower cost.
/// Panics on an empty curve.
pub fn extremal_point(curve: &SurplusCurve, direction: (f64, f64), eps_tie: f64) -> SurplusPoint {
    let (dx, dy) = direction;
    let score = |p: &SurplusPoint| dx * p.cost + dy * p.surplus;
    let top = curve.points.iter().map(score).fold(f64::NEG_INFINITY, f64::max);
    let mut best: Option<SurplusPoint> = None;
    for p in curve.points.iter().filter(|p| score(p) >= top - eps_tie) {
        best = match best {
            None => Some(*p),
            Some(b) => {
                let better =
                    p.output() > b.output() + eps_tie || (p.output() >= b.output() - eps_tie && p.cost < b.cost);
                Some(if better { *p } else { b })
            }
        };
    }
    best.expect("nonempty surplus curve")
}

fn cross(o: (f64, f64), a: (f64, f64), b: (f64, f64)) -> f64 {
    (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
}

/// Upper convex hull (monotone chain) of points sorted by strictly
/// increasing x. Collinear interior points are dropped.
pub fn upper_hull(points: &[(f64, f64)]) -> Vec<(f64, f64)> {
    let mut hull: Vec<(f64, f64)> = Vec::with_capacity(points.len());
    for &p in points {
        while hull.len() >= 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) >= 0.0 {
            hull.pop();
        }
        hull.push(p);
    }
    hull
}

/// Least concave majorant of the sampled surplus, evaluated back on the
/// original cost grid.
pub fn concave_envelope(curve: &SurplusCurve) -> SurplusCurve {
    let pts: Vec<(f64, f64)> = curve.points.iter().map(|p| (p.cost, p.surplus)).collect();
    let hull = upper_hull(&pts);
    let mut seg = 0;
    let points = curve
        .points
        .iter()
        .map(|p| {
            while seg + 1 < hull.len() - 1 && hull[seg + 1].0 <= p.cost {
                seg += 1;
            }
            let s = if hull.len() == 1 {
                hull[0].1
            } else {
                let (a, b) = (hull[seg], hull[seg + 1]);
                a.1 + (b.1 - a.1) * (p.cost - a.0) / (b.0 - a.0)
            };
            // interpolation rounding must not dip below a hull vertex
            SurplusPoint { cost: p.cost, surplus: s.max(p.surplus) }
        })
        .collect();
    SurplusCurve { points }
}

/// Concave envelope of a production curve (adding `c` commutes with the envelope).
pub fn production_envelope(curve: &ProductionCurve) -> Result<ProductionCurve> {
    concave_envelope(&SurplusCurve::from_production(curve)).to_production()
}

/// Finite-difference `g'` at every grid node: central in the interior,
/// one-sided at the ends.
pub fn node_derivatives(curve: &ProductionCurve) -> Result<Vec<f64>> {
    let (c, g) = (curve.costs(), curve.outputs());
    let n = c.len();
    if n < 2 {
        return Err(Error::Invalid("derivative needs at least two samples".into()));
    }
    Ok((0..n)
        .map(|i| {
            let (lo, hi) = (i.saturating_sub(1), (i + 1).min(n - 1));
            (g[hi] - g[lo]) / (c[hi] - c[lo])
        })
        .collect())
}

/// `g'(c)`, interpolating the node derivatives between grid points.
pub fn derivative(curve: &ProductionCurve, c: f64) -> Result<f64> {
    let costs = curve.costs();
    let (lo, hi) = (costs[0], curve.cost_cap());
    if !(c >= lo && c <= hi) {
        return Err(Error::OutOfDomain { cost: c, cap: hi });
    }
    let d = node_derivatives(curve)?;
    let j = costs.partition_point(|&x| x < c);
    if j < costs.len() && costs[j] == c {
        return Ok(d[j]);
    }
    let (c0, c1) = (costs[j - 1], costs[j]);
    Ok(d[j - 1] + (d[j] - d[j - 1]) * (c - c0) / (c1 - c0))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct InverseDerivative {
    pub cost: f64,
    /// `v` lay outside the range of `g'` and was clamped to the nearest end.
    pub clamped: bool,
}

/// The cost at which `g'` equals `v`.
///
/// Requires `g'` to be monotone and non-constant on the grid. Bisection
/// locates the bracketing cell, inside which the interpolated derivative is
/// inverted exactly.
pub fn inverse_derivative(curve: &ProductionCurve, v: f64) -> Result<InverseDerivative> {
    let d = node_derivatives(curve)?;
    let costs = curve.costs();
    let scale = d.iter().fold(1.0_f64, |m, x| m.max(x.abs()));
    let tol = 1e-9 * scale;
    let nonincreasing = d.windows(2).all(|w| w[1] <= w[0] + tol);
    let nondecreasing = d.windows(2).all(|w| w[1] >= w[0] - tol);
    let (dmin, dmax) = d.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &x| (a.min(x), b.max(x)));
    if dmax - dmin <= tol {
        return Err(Error::NotInvertible(format!("g' is constant ({dmin})")));
    }
    if !nonincreasing && !nondecreasing {
        return Err(Error::NotInvertible("g' is not monotone on the grid".into()));
    }
    // orient so the search runs over a nondecreasing sequence
    let key = |x: f64| if nondecreasing { x } else { -x };
    let target = key(v);
    let first = key(d[0]);
    let last = key(d[d.len() - 1]);
    if target <= first {
        return Ok(InverseDerivative { cost: costs[0], clamped: target < first });
    }
    if target >= last {
        return Ok(InverseDerivative { cost: curve.cost_cap(), clamped: target > last });
    }
    let (mut lo, mut hi) = (0usize, d.len() - 1);
    while hi - lo > 1 {
        let mid = (lo + hi) / 2;
        if key(d[mid]) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let (k0, k1) = (key(d[lo]), key(d[hi]));
    let frac = if k1 > k0 { (target - k0) / (k1 - k0) } else { 0.0 };
    Ok(InverseDerivative { cost: costs[lo] + frac * (costs[hi] - costs[lo]), clamped: false })
}
