//! Weighted Weber point: the location minimizing
//! `f(x) = sum_i w_i * |x - p_i|`.
//!
//! [`solve`] runs Weiszfeld's fixed-point iteration from the weighted
//! centroid. Whenever an iterate lands on (or within `step_tol` of) a data
//! point, the vertex test decides whether that point is itself optimal; if
//! not, Kuhn's step moves off it along the resultant pull. [`solve_smoothed`]
//! instead runs gradient descent on `sum_i w_i * sqrt(|x - p_i|^2 + eps^2)`.

use std::io::Read;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::road_graph::{Point, RoadNetwork};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundingBox {
    pub min: Point,
    pub max: Point,
}

impl BoundingBox {
    pub fn new(min: Point, max: Point) -> Result<Self> {
        if !(min.is_finite() && max.is_finite() && min.x <= max.x && min.y <= max.y) {
            return Err(invalid(
                "bounding box corners must be finite with min <= max",
            ));
        }
        Ok(BoundingBox { min, max })
    }

    pub fn project(&self, p: Point) -> Point {
        Point::new(
            p.x.clamp(self.min.x, self.max.x),
            p.y.clamp(self.min.y, self.max.y),
        )
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeberProblem {
    points: Vec<Point>,
    weights: Vec<f64>,
    region: Option<BoundingBox>,
}

impl WeberProblem {
    pub fn new(points: Vec<Point>, weights: Vec<f64>) -> Result<Self> {
        if points.is_empty() {
            return Err(invalid("a Weber problem needs at least one point"));
        }
        if points.len() != weights.len() {
            return Err(invalid(format!(
                "{} points but {} weights",
                points.len(),
                weights.len()
            )));
        }
        if let Some(p) = points.iter().find(|p| !p.is_finite()) {
            return Err(invalid(format!("non-finite point {p:?}")));
        }
        if let Some(w) = weights.iter().find(|w| !(w.is_finite() && **w > 0.0)) {
            return Err(invalid(format!("weights must be positive, got {w}")));
        }
        Ok(WeberProblem {
            points,
            weights,
            region: None,
        })
    }

    pub fn unweighted(points: Vec<Point>) -> Result<Self> {
        let weights = vec![1.0; points.len()];
        WeberProblem::new(points, weights)
    }

    /// Restrict the feasible set to a box; iterates are projected onto it.
    pub fn with_region(mut self, region: BoundingBox) -> Self {
        self.region = Some(region);
        self
    }

    /// Reads `x,y[,weight]` records. A non-numeric first record is treated as
    /// a header and skipped.
    pub fn from_csv<R: Read>(input: R) -> Result<Self> {
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(false)
            .flexible(true)
            .trim(csv::Trim::All)
            .comment(Some(b'#'))
            .from_reader(input);
        let mut points = Vec::new();
        let mut weights = Vec::new();
        for (row, record) in reader.records().enumerate() {
            let record = record?;
            if record.iter().all(|f| f.is_empty()) {
                continue;
            }
            let parsed: std::result::Result<Vec<f64>, _> =
                record.iter().map(|f| f.parse::<f64>()).collect();
            let values = match parsed {
                Ok(v) => v,
                Err(_) if row == 0 => continue,
                Err(e) => return Err(invalid(format!("line {}: {e}", row + 1))),
            };
            match values[..] {
                [x, y] => {
                    points.push(Point::new(x, y));
                    weights.push(1.0);
                }
                [x, y, w] => {
                    points.push(Point::new(x, y));
                    weights.push(w);
                }
                _ => {
                    return Err(invalid(format!(
                        "line {}: expected x,y[,weight], got {} fields",
                        row + 1,
                        values.len()
                    )))
                }
            }
        }
        WeberProblem::new(points, weights)
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn region(&self) -> Option<&BoundingBox> {
        self.region.as_ref()
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn total_weight(&self) -> f64 {
        self.weights.iter().sum()
    }

    pub fn centroid(&self) -> Point {
        let w = self.total_weight();
        let (sx, sy) = self
            .points
            .iter()
            .zip(&self.weights)
            .fold((0.0, 0.0), |(sx, sy), (p, wi)| {
                (sx + wi * p.x, sy + wi * p.y)
            });
        Point::new(sx / w, sy / w)
    }

    /// Diagonal of the points' bounding box.
    pub fn diameter(&self) -> f64 {
        let (mut lo, mut hi) = (self.points[0], self.points[0]);
        for p in &self.points {
            lo = Point::new(lo.x.min(p.x), lo.y.min(p.y));
            hi = Point::new(hi.x.max(p.x), hi.y.max(p.y));
        }
        lo.distance(&hi)
    }

    /// `sum_i w_i * |at - p_i|`.
    pub fn objective(&self, at: Point) -> f64 {
        self.points
            .iter()
            .zip(&self.weights)
            .map(|(p, w)| w * at.distance(p))
            .sum()
    }

    fn smoothed_objective(&self, at: Point, eps: f64) -> f64 {
        self.points
            .iter()
            .zip(&self.weights)
            .map(|(p, w)| w * (at.distance(p).powi(2) + eps * eps).sqrt())
            .sum()
    }

    fn smoothed_gradient(&self, at: Point, eps: f64) -> Point {
        let (mut gx, mut gy) = (0.0, 0.0);
        for (p, w) in self.points.iter().zip(&self.weights) {
            let r = (at.distance(p).powi(2) + eps * eps).sqrt();
            gx += w * (at.x - p.x) / r;
            gy += w * (at.y - p.y) / r;
        }
        Point::new(gx, gy)
    }

    /// Gradient `sum_i w_i (at - p_i) / |at - p_i|`. Undefined on a data
    /// point; there the vertex test applies.
    pub fn gradient(&self, at: Point) -> Result<Point> {
        let (mut gx, mut gy) = (0.0, 0.0);
        for (i, (p, w)) in self.points.iter().zip(&self.weights).enumerate() {
            let d = at.distance(p);
            if d == 0.0 {
                return Err(Error::CoincidentVertex(i));
            }
            gx += w * (at.x - p.x) / d;
            gy += w * (at.y - p.y) / d;
        }
        Ok(Point::new(gx, gy))
    }

    /// Optimality test at data point `k`.
    ///
    /// The other points pull on `p_k` with resultant `R` (unit vectors
    /// weighted by `w_i`, coincident points merged into `w_k`). With
    /// `omega = |R|`, `p_k` is the minimizer iff `omega <= w_k`.
    pub fn vertex_test(&self, k: usize) -> Result<VertexTest> {
        let pk = *self
            .points
            .get(k)
            .ok_or_else(|| invalid(format!("point index {k} out of range")))?;
        let pull = self.vertex_pull(k, pk);
        let omega = pull.resultant.x.hypot(pull.resultant.y);
        if omega <= pull.own_weight {
            return Ok(VertexTest::Optimal { omega });
        }
        let scale = (omega - pull.own_weight) / omega / omega;
        Ok(VertexTest::Descend {
            omega,
            direction: Point::new(scale * pull.resultant.x, scale * pull.resultant.y),
        })
    }

    fn vertex_pull(&self, k: usize, pk: Point) -> VertexPull {
        let mut own_weight = 0.0;
        let (mut rx, mut ry) = (0.0, 0.0);
        let mut inv_dist = 0.0;
        for (i, (p, w)) in self.points.iter().zip(&self.weights).enumerate() {
            let d = pk.distance(p);
            if i == k || d == 0.0 {
                own_weight += w;
                continue;
            }
            rx += w * (p.x - pk.x) / d;
            ry += w * (p.y - pk.y) / d;
            inv_dist += w / d;
        }
        VertexPull {
            own_weight,
            resultant: Point::new(rx, ry),
            inv_dist,
        }
    }

    /// Kuhn's step off a non-optimal vertex:
    /// `p_k + (omega - w_k) / (sum_{i != k} w_i / d_i) * R / omega`.
    fn step_off_vertex(&self, k: usize) -> Point {
        let pk = self.points[k];
        let pull = self.vertex_pull(k, pk);
        let omega = pull.resultant.x.hypot(pull.resultant.y);
        let t = (omega - pull.own_weight) / pull.inv_dist;
        Point::new(
            pk.x + t * pull.resultant.x / omega,
            pk.y + t * pull.resultant.y / omega,
        )
    }

    fn nearest_point(&self, at: Point) -> (usize, f64) {
        self.points
            .iter()
            .enumerate()
            .map(|(i, p)| (i, at.distance(p)))
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .expect("non-empty problem")
    }

    fn project(&self, p: Point) -> Point {
        match &self.region {
            Some(b) => b.project(p),
            None => p,
        }
    }
}

struct VertexPull {
    own_weight: f64,
    resultant: Point,
    inv_dist: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum VertexTest {
    /// The data point is the minimizer.
    Optimal { omega: f64 },
    /// Moving along `direction` decreases the objective. The direction is the
    /// unit pull scaled by `(omega - w_k) / omega`.
    Descend { omega: f64, direction: Point },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolverMode {
    Weiszfeld,
    SmoothedGradient,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    /// Smoothing constant for [`solve_smoothed`].
    pub epsilon: f64,
    /// Convergence threshold on iterate movement; defaults to 1e-7 times the
    /// instance diameter.
    pub step_tol: Option<f64>,
    pub max_iters: usize,
    pub mode: SolverMode,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            epsilon: 1e-6,
            step_tol: None,
            max_iters: 100_000,
            mode: SolverMode::Weiszfeld,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.epsilon.is_finite() && self.epsilon > 0.0) {
            return Err(invalid("epsilon must be positive"));
        }
        if let Some(t) = self.step_tol {
            if !(t.is_finite() && t > 0.0) {
                return Err(invalid("step_tol must be positive"));
            }
        }
        if self.max_iters == 0 {
            return Err(invalid("max_iters must be at least 1"));
        }
        Ok(())
    }

    fn step_tol_for(&self, p: &WeberProblem) -> f64 {
        self.step_tol.unwrap_or_else(|| {
            let d = p.diameter();
            if d > 0.0 {
                1e-7 * d
            } else {
                1e-12
            }
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeberSolution {
    pub location: Point,
    pub objective: f64,
    pub iterations: usize,
    /// Index of the data point the solution sits on, when optimal there.
    pub at_vertex: Option<usize>,
    /// Gradient norm at the solution, or `max(0, omega - w_k)` on a vertex.
    pub gradient_norm: f64,
    pub converged: bool,
}

/// Weiszfeld iteration from the weighted centroid.
pub fn solve(p: &WeberProblem, cfg: &SolverConfig) -> Result<WeberSolution> {
    Ok(solve_with_history(p, cfg)?.0)
}

/// Dispatch on `cfg.mode`.
pub fn run(p: &WeberProblem, cfg: &SolverConfig) -> Result<WeberSolution> {
    match cfg.mode {
        SolverMode::Weiszfeld => solve(p, cfg),
        SolverMode::SmoothedGradient => solve_smoothed(p, cfg),
    }
}

fn finish(p: &WeberProblem, location: Point, iterations: usize, converged: bool) -> WeberSolution {
    let (k, d) = p.nearest_point(location);
    let (at_vertex, gradient_norm) = if d == 0.0 {
        let pull = p.vertex_pull(k, location);
        let omega = pull.resultant.x.hypot(pull.resultant.y);
        let residual = (omega - pull.own_weight).max(0.0);
        (if residual == 0.0 { Some(k) } else { None }, residual)
    } else {
        let g = p.gradient(location).expect("location is not a data point");
        (None, g.x.hypot(g.y))
    };
    WeberSolution {
        location,
        objective: p.objective(location),
        iterations,
        at_vertex,
        gradient_norm,
        converged,
    }
}

/// Weiszfeld iteration that also returns the objective after every step.
pub fn solve_with_history(
    p: &WeberProblem,
    cfg: &SolverConfig,
) -> Result<(WeberSolution, Vec<f64>)> {
    cfg.validate()?;
    let step_tol = cfg.step_tol_for(p);

    // an optimal vertex ends the search before any iteration
    for k in 0..p.len() {
        if let VertexTest::Optimal { .. } = p.vertex_test(k)? {
            let loc = p.points[k];
            let objective = p.objective(loc);
            return Ok((finish(p, loc, 0, true), vec![objective]));
        }
    }

    let mut x = p.project(p.centroid());
    let mut history = vec![p.objective(x)];
    let mut converged = false;
    let mut iterations = 0;
    while iterations < cfg.max_iters {
        iterations += 1;
        let (k, dk) = p.nearest_point(x);
        let next = if dk == 0.0 {
            // no vertex is optimal, so step off it
            p.step_off_vertex(k)
        } else {
            let (mut nx, mut ny, mut den) = (0.0, 0.0, 0.0);
            for (q, w) in p.points.iter().zip(&p.weights) {
                let c = w / x.distance(q);
                nx += c * q.x;
                ny += c * q.y;
                den += c;
            }
            Point::new(nx / den, ny / den)
        };
        let next = p.project(next);
        let moved = next.distance(&x);
        x = next;
        history.push(p.objective(x));
        if moved < step_tol {
            converged = true;
            break;
        }
    }
    Ok((finish(p, x, iterations, converged), history))
}

/// Gradient descent with backtracking on the smoothed objective
/// `sum_i w_i * sqrt(|x - p_i|^2 + eps^2)`, which is differentiable
/// everywhere and tends to the Weber objective as `eps -> 0`.
pub fn solve_smoothed(p: &WeberProblem, cfg: &SolverConfig) -> Result<WeberSolution> {
    Ok(solve_smoothed_with_history(p, cfg)?.0)
}

pub fn solve_smoothed_with_history(
    p: &WeberProblem,
    cfg: &SolverConfig,
) -> Result<(WeberSolution, Vec<f64>)> {
    cfg.validate()?;
    let eps = cfg.epsilon;
    let step_tol = cfg.step_tol_for(p);
    let mut x = p.project(p.centroid());
    let mut fx = p.smoothed_objective(x, eps);
    let mut history = vec![fx];
    let mut t = p.diameter().max(step_tol) / p.total_weight();
    let mut converged = false;
    let mut iterations = 0;
    while iterations < cfg.max_iters {
        iterations += 1;
        let g = p.smoothed_gradient(x, eps);
        let gg = g.x * g.x + g.y * g.y;
        if gg == 0.0 {
            converged = true;
            break;
        }
        t *= 2.0;
        let (next, f_next) = loop {
            let cand = p.project(Point::new(x.x - t * g.x, x.y - t * g.y));
            let fc = p.smoothed_objective(cand, eps);
            // Armijo condition along the projected step
            let decrease = (x.x - cand.x) * g.x + (x.y - cand.y) * g.y;
            if fc <= fx - 1e-4 * decrease || t < 1e-300 {
                break (cand, fc);
            }
            t *= 0.5;
        };
        let moved = next.distance(&x);
        if f_next <= fx {
            x = next;
            fx = f_next;
        }
        history.push(fx);
        if moved < step_tol {
            converged = true;
            break;
        }
    }
    // snap onto a data point when that point is the exact minimizer
    let (k, d) = p.nearest_point(x);
    if d < step_tol.max(10.0 * eps) {
        if let VertexTest::Optimal { .. } = p.vertex_test(k)? {
            x = p.points[k];
        }
    }
    Ok((finish(p, x, iterations, converged), history))
}

/// Lower bound on the mean hop count from a zone at `site`: every hop covers
/// at most the connection range, so intersection i needs at least
/// `ceil(|site - p_i| / r)` hops.
pub fn avg_hops_lower_bound(net: &RoadNetwork, site: Point) -> Result<f64> {
    let r = net.connection_range();
    if !(r > 0.0) {
        return Err(invalid("connection range must be positive"));
    }
    let total: f64 = net
        .intersections()
        .iter()
        .map(|i| (i.position().distance(&site) / r).ceil())
        .sum();
    Ok(total / net.len() as f64)
}
