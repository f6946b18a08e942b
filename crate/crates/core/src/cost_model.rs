//! Placement cost model and link-length allocation.
//!
//! A zone reached over a link of length `d` costs `Z * d^alpha`. An
//! intersection relays through every link on its shortest path to its zone,
//! so on a line served from site `I` link `k` is paid once by every
//! intersection beyond it: its weight is `k` left of the site and `N - k` to
//! the right, giving `CT = Z * sum_k w_k * d_k^alpha`.
//!
//! Two allocators distribute a fixed corridor length over the links: the
//! closed form `d_k ~ w_k^(-1/alpha)` and the exact constrained minimizer
//! `d_k ~ w_k^(-1/(alpha-1))`.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::road_graph::RoadNetwork;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CostParams {
    /// Cost constant folding road lines, traffic, zone size, user
    /// correlation and coverage range.
    pub z: f64,
    /// Path exponent on link length.
    pub alpha: f64,
    /// Path-loss exponent for deployment scaling.
    pub gamma: f64,
    /// Total corridor length shared by the links.
    pub budget: f64,
}

impl Default for CostParams {
    fn default() -> Self {
        CostParams {
            z: 1.0,
            alpha: 2.0,
            gamma: 2.0,
            budget: 1.0,
        }
    }
}

impl CostParams {
    pub fn new(z: f64, alpha: f64, gamma: f64, budget: f64) -> Result<Self> {
        let p = CostParams {
            z,
            alpha,
            gamma,
            budget,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |v: f64| v.is_finite() && v > 0.0;
        if !positive(self.z) || !positive(self.budget) {
            return Err(invalid("cost constant and budget must be positive"));
        }
        if !(self.alpha.is_finite() && self.alpha >= 1.0) {
            return Err(invalid(format!("alpha must be >= 1, got {}", self.alpha)));
        }
        if !(self.gamma.is_finite() && self.gamma >= 1.0) {
            return Err(invalid(format!("gamma must be >= 1, got {}", self.gamma)));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AllocationMethod {
    ClosedForm,
    NumericalOptimal,
    Uniform,
}

impl AllocationMethod {
    pub fn label(&self) -> &'static str {
        match self {
            AllocationMethod::ClosedForm => "closed-form",
            AllocationMethod::NumericalOptimal => "optimal",
            AllocationMethod::Uniform => "uniform",
        }
    }
}

/// Lengths for links 1..N-1 of a line (link k joins k and k+1).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LinkAllocation {
    pub lengths: Vec<f64>,
    /// Number of intersections relaying over each link.
    pub weights: Vec<f64>,
    pub total_cost: f64,
    pub method: AllocationMethod,
}

impl LinkAllocation {
    /// CSV with one row per link: link_index, length, weight, method, cost.
    pub fn write_csv<W: Write>(&self, out: W, params: &CostParams) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["link_index", "length", "weight", "method", "cost"])?;
        for (k, (&d, &wt)) in self.lengths.iter().zip(&self.weights).enumerate() {
            let cost = params.z * wt * d.powf(params.alpha);
            w.write_record([
                (k + 1).to_string(),
                d.to_string(),
                wt.to_string(),
                self.method.label().to_string(),
                cost.to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Cost of reaching a zone across one link of length `d`: `Z * d^alpha`.
pub fn zone_placement_cost(params: &CostParams, d: f64) -> Result<f64> {
    if !(d.is_finite() && d > 0.0) {
        return Err(invalid(format!("distance must be positive, got {d}")));
    }
    Ok(d.powf(params.alpha) * params.z)
}

/// Relay cost along a path: the sum of per-link zone costs. An intersection
/// hosting its own zone has an empty path and pays nothing.
pub fn path_relay_cost(params: &CostParams, link_lengths: &[f64]) -> Result<f64> {
    link_lengths
        .iter()
        .map(|&d| zone_placement_cost(params, d))
        .sum()
}

/// Total relay cost of a placement: every intersection pays the relay cost of
/// its shortest path to the nearest site.
pub fn total_cost(net: &RoadNetwork, sites: &[usize], params: &CostParams) -> Result<f64> {
    let forest = net.nearest_site_forest(sites)?;
    let n = net.len();
    if let Some(u) = forest.distance.iter().position(|d| !d.is_finite()) {
        return Err(Error::NoPath {
            from: u + 1,
            to: sites[0],
        });
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| forest.distance[a].total_cmp(&forest.distance[b]));
    let mut cost = vec![0.0; n];
    for u in order {
        if let Some((p, len)) = forest.parent[u] {
            cost[u] = cost[p] + zone_placement_cost(params, len)?;
        }
    }
    Ok(cost.iter().sum())
}

/// `Z * sum_k w_k * d_k^alpha`.
pub fn weighted_cost(params: &CostParams, weights: &[f64], lengths: &[f64]) -> f64 {
    params.z
        * weights
            .iter()
            .zip(lengths)
            .map(|(w, d)| w * d.powf(params.alpha))
            .sum::<f64>()
}

/// Relay weights of the links of a line served from `site`.
pub fn line_link_weights(n: usize, site: usize) -> Result<Vec<f64>> {
    check_line(n, &[site])?;
    Ok((1..n)
        .map(|k| if k < site { k as f64 } else { (n - k) as f64 })
        .collect())
}

fn check_line(n: usize, sites: &[usize]) -> Result<()> {
    if n < 2 {
        return Err(invalid("link allocation needs at least two intersections"));
    }
    if sites.is_empty() {
        return Err(invalid("at least one site is required"));
    }
    if !sites.windows(2).all(|w| w[0] < w[1]) {
        return Err(invalid("sites must be strictly ascending"));
    }
    match sites.iter().find(|&&s| s == 0 || s > n) {
        Some(&bad) => Err(Error::UnknownIntersection(bad)),
        None => Ok(()),
    }
}

fn allocate(
    weights: Vec<f64>,
    sizing: &[f64],
    params: &CostParams,
    method: AllocationMethod,
) -> Result<LinkAllocation> {
    params.validate()?;
    let exponent = match method {
        AllocationMethod::ClosedForm => -1.0 / params.alpha,
        AllocationMethod::NumericalOptimal => {
            if params.alpha <= 1.0 {
                return Err(Error::UnsupportedExponent(params.alpha));
            }
            -1.0 / (params.alpha - 1.0)
        }
        AllocationMethod::Uniform => 0.0,
    };
    let raw: Vec<f64> = sizing.iter().map(|w| w.powf(exponent)).collect();
    let scale = params.budget / raw.iter().sum::<f64>();
    let lengths: Vec<f64> = raw.iter().map(|r| r * scale).collect();
    let total_cost = weighted_cost(params, &weights, &lengths);
    Ok(LinkAllocation {
        lengths,
        weights,
        total_cost,
        method,
    })
}

/// Closed-form allocation `d_k = L * w_k^(-1/alpha) / sum_j w_j^(-1/alpha)`.
pub fn allocate_links_closed_form(
    n: usize,
    site: usize,
    params: &CostParams,
) -> Result<LinkAllocation> {
    let weights = line_link_weights(n, site)?;
    let sizing = weights.clone();
    allocate(weights, &sizing, params, AllocationMethod::ClosedForm)
}

/// Exact minimizer of `sum_k w_k d_k^alpha` subject to `sum_k d_k = L`.
/// Stationarity of the Lagrangian gives `d_k ~ w_k^(-1/(alpha-1))`; requires
/// `alpha > 1`.
pub fn allocate_links_optimal(
    n: usize,
    site: usize,
    params: &CostParams,
) -> Result<LinkAllocation> {
    let weights = line_link_weights(n, site)?;
    let sizing = weights.clone();
    allocate(weights, &sizing, params, AllocationMethod::NumericalOptimal)
}

pub fn allocate_links_uniform(
    n: usize,
    site: usize,
    params: &CostParams,
) -> Result<LinkAllocation> {
    let weights = line_link_weights(n, site)?;
    let sizing = weights.clone();
    allocate(weights, &sizing, params, AllocationMethod::Uniform)
}

pub fn allocate_links(
    n: usize,
    site: usize,
    params: &CostParams,
    method: AllocationMethod,
) -> Result<LinkAllocation> {
    multi_site_allocate(n, &[site], params, method)
}

/// Segment boundaries z_0 = 0 < z_1 < ... < z_MZ = N: the line splits at the
/// midpoints between consecutive sites and segment h is (z_{h-1}, z_h].
pub fn segment_bounds(n: usize, sites: &[usize]) -> Result<Vec<usize>> {
    check_line(n, sites)?;
    let mut z = vec![0];
    z.extend(sites.windows(2).map(|w| (w[0] + w[1]) / 2));
    z.push(n);
    Ok(z)
}

/// Allocation for several sites on one line. Within each midpoint segment a
/// link's weight counts the intersections of that segment relaying over it.
/// Links joining two segments carry no relay traffic (weight 0); they are
/// sized like weight-one links so every length stays positive.
pub fn multi_site_allocate(
    n: usize,
    sites: &[usize],
    params: &CostParams,
    method: AllocationMethod,
) -> Result<LinkAllocation> {
    let z = segment_bounds(n, sites)?;
    let mut weights = Vec::with_capacity(n - 1);
    let mut sizing = Vec::with_capacity(n - 1);
    for k in 1..n {
        // segment containing intersection k
        let h = z.partition_point(|&b| b < k);
        if k == z[h] {
            weights.push(0.0);
            sizing.push(1.0);
            continue;
        }
        let site = sites[h - 1];
        let w = if k < site { k - z[h - 1] } else { z[h] - k } as f64;
        weights.push(w);
        sizing.push(w);
    }
    allocate(weights, &sizing, params, method)
}

/// Deployment cost scaling `r^gamma * I(G)`, proportionality constant 1.
pub fn deployment_cost_scaling(params: &CostParams, r: f64, zone_count: usize) -> Result<f64> {
    if !(r.is_finite() && r > 0.0) {
        return Err(invalid(format!("range must be positive, got {r}")));
    }
    Ok(r.powf(params.gamma) * zone_count as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::road_graph::generate_line;
    use proptest::prelude::*;

    fn params(z: f64, alpha: f64, budget: f64) -> CostParams {
        CostParams::new(z, alpha, 2.0, budget).unwrap()
    }

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * (1.0 + b.abs())
    }

    #[test]
    fn zone_cost_values() {
        assert_eq!(
            zone_placement_cost(&params(1.0, 2.0, 1.0), 1.0).unwrap(),
            1.0
        );
        assert_eq!(
            zone_placement_cost(&params(2.0, 2.0, 1.0), 3.0).unwrap(),
            18.0
        );
        assert_eq!(
            zone_placement_cost(&params(1.0, 1.0, 1.0), 5.0).unwrap(),
            5.0
        );
        assert!(zone_placement_cost(&params(1.0, 2.0, 1.0), 0.0).is_err());
        assert!(zone_placement_cost(&params(1.0, 2.0, 1.0), -1.0).is_err());
    }

    #[test]
    fn relay_cost_values() {
        assert_eq!(path_relay_cost(&params(1.0, 2.0, 1.0), &[]).unwrap(), 0.0);
        assert_eq!(
            path_relay_cost(&params(1.0, 2.0, 1.0), &[1.0, 1.0]).unwrap(),
            2.0
        );
        assert_eq!(
            path_relay_cost(&params(3.0, 2.0, 1.0), &[2.0]).unwrap(),
            12.0
        );
    }

    #[test]
    fn total_cost_on_lines() {
        let p = params(1.0, 2.0, 1.0);
        let net = generate_line(3, &[1.0, 1.0]).unwrap();
        assert_eq!(total_cost(&net, &[2], &p).unwrap(), 2.0);
        assert_eq!(total_cost(&net, &[1], &p).unwrap(), 3.0);
        assert_eq!(total_cost(&net, &[1, 2, 3], &p).unwrap(), 0.0);
        assert!(total_cost(&net, &[], &p).is_err());
        assert!(total_cost(&net, &[4], &p).is_err());
    }

    #[test]
    fn params_validation() {
        assert!(CostParams::new(0.0, 2.0, 2.0, 1.0).is_err());
        assert!(CostParams::new(1.0, 0.5, 2.0, 1.0).is_err());
        assert!(CostParams::new(1.0, 2.0, 0.5, 1.0).is_err());
        assert!(CostParams::new(1.0, 2.0, 2.0, -1.0).is_err());
        assert!(CostParams::new(1.0, 1.0, 1.0, 1.0).is_ok());
    }

    #[test]
    fn weights_on_line() {
        assert_eq!(line_link_weights(3, 2).unwrap(), vec![1.0, 1.0]);
        assert_eq!(line_link_weights(3, 1).unwrap(), vec![2.0, 1.0]);
        assert_eq!(line_link_weights(5, 3).unwrap(), vec![1.0, 2.0, 2.0, 1.0]);
        assert!(line_link_weights(1, 1).is_err());
        assert!(line_link_weights(3, 4).is_err());
    }

    #[test]
    fn closed_form_allocation_examples() {
        let a = allocate_links_closed_form(3, 2, &params(1.0, 2.0, 10.0)).unwrap();
        assert!(close(a.lengths[0], 5.0, 1e-12) && close(a.lengths[1], 5.0, 1e-12));

        let a = allocate_links_closed_form(3, 1, &params(1.0, 2.0, 1.0)).unwrap();
        let s = 0.5f64.sqrt();
        assert!(close(a.lengths[0], s / (1.0 + s), 1e-12));
        assert!(close(a.lengths[0], 0.4142, 1e-4));
        assert!(close(a.lengths[1], 0.5858, 1e-4));
        assert!(close(a.total_cost, 0.6863, 1e-4));

        let a = allocate_links_closed_form(4, 1, &params(1.0, 2.0, 1.0)).unwrap();
        let raw = [3f64.powf(-0.5), 2f64.powf(-0.5), 1.0];
        let sum: f64 = raw.iter().sum();
        for (d, r) in a.lengths.iter().zip(raw) {
            assert!(close(*d, r / sum, 1e-12));
        }
    }

    #[test]
    fn optimal_allocation_examples() {
        let a = allocate_links_optimal(3, 2, &params(1.0, 2.0, 1.0)).unwrap();
        assert!(close(a.lengths[0], 0.5, 1e-12));

        let a = allocate_links_optimal(3, 1, &params(1.0, 2.0, 1.0)).unwrap();
        assert!(close(a.lengths[0], 1.0 / 3.0, 1e-12));
        assert!(close(a.lengths[1], 2.0 / 3.0, 1e-12));
        assert!(close(a.total_cost, 2.0 / 3.0, 1e-12));

        let closed = allocate_links_closed_form(3, 1, &params(1.0, 2.0, 1.0)).unwrap();
        assert!(a.total_cost < closed.total_cost);

        assert!(matches!(
            allocate_links_optimal(3, 1, &params(1.0, 1.0, 1.0)),
            Err(Error::UnsupportedExponent(_))
        ));
        // the closed form stays evaluable at alpha = 1
        assert!(allocate_links_closed_form(3, 1, &params(1.0, 1.0, 1.0)).is_ok());
    }

    // minimize over the one free length of a two-link line: 10^4-point grid,
    // then golden-section refinement inside the best grid cell
    fn two_link_grid_oracle(w: [f64; 2], p: &CostParams) -> f64 {
        let f = |d1: f64| weighted_cost(p, &w, &[d1, p.budget - d1]);
        let steps = 10_000;
        let h = p.budget / steps as f64;
        let best = (1..steps)
            .min_by(|&a, &b| f(a as f64 * h).total_cmp(&f(b as f64 * h)))
            .unwrap();
        let (mut lo, mut hi) = ((best - 1) as f64 * h, (best + 1) as f64 * h);
        let g = (5f64.sqrt() - 1.0) / 2.0;
        for _ in 0..200 {
            let a = hi - g * (hi - lo);
            let b = lo + g * (hi - lo);
            if f(a) < f(b) {
                hi = b;
            } else {
                lo = a;
            }
        }
        f(0.5 * (lo + hi))
    }

    #[test]
    fn two_link_grid_oracle_confirms_optimum() {
        for alpha in [1.5, 2.0, 3.0] {
            let p = params(1.0, alpha, 1.0);
            let opt = allocate_links_optimal(3, 1, &p).unwrap();
            let oracle = two_link_grid_oracle([2.0, 1.0], &p);
            assert!(
                close(opt.total_cost, oracle, 1e-9),
                "alpha {alpha}: {} vs {oracle}",
                opt.total_cost
            );
        }
        let oracle = two_link_grid_oracle([2.0, 1.0], &params(1.0, 2.0, 1.0));
        assert!(close(oracle, 2.0 / 3.0, 1e-9));
    }

    #[test]
    fn allocation_matches_network_recomputation() {
        for n in 2..=8 {
            for site in 1..=n {
                for method in [
                    AllocationMethod::ClosedForm,
                    AllocationMethod::NumericalOptimal,
                    AllocationMethod::Uniform,
                ] {
                    let p = params(1.7, 2.5, 3.0);
                    let a = allocate_links(n, site, &p, method).unwrap();
                    assert!(close(a.lengths.iter().sum(), p.budget, 1e-12));
                    let net = generate_line(n, &a.lengths).unwrap();
                    let direct = total_cost(&net, &[site], &p).unwrap();
                    assert!(close(direct, a.total_cost, 1e-12), "N={n} I={site}");
                }
            }
        }
    }

    #[test]
    fn multi_site_examples() {
        let p = params(1.0, 2.0, 1.0);
        let a = multi_site_allocate(6, &[2, 5], &p, AllocationMethod::ClosedForm).unwrap();
        // segments [1,3] and [4,6]; link 3 joins them
        assert_eq!(a.weights, vec![1.0, 1.0, 0.0, 1.0, 1.0]);
        for k in 0..5 {
            assert!(close(a.lengths[k], a.lengths[4 - k], 1e-12));
        }

        let a = multi_site_allocate(5, &[1, 5], &p, AllocationMethod::ClosedForm).unwrap();
        assert_eq!(segment_bounds(5, &[1, 5]).unwrap(), vec![0, 3, 5]);
        assert_eq!(a.weights, vec![2.0, 1.0, 0.0, 1.0]);
        let longest = a.lengths.iter().cloned().fold(0.0, f64::max);
        // the links meeting at the segment boundary (z_1 = 3) are the longest
        assert!(close(a.lengths[1], longest, 1e-12));
        assert!(close(a.lengths[2], longest, 1e-12));
        assert!(a.lengths[0] < longest);

        for method in [
            AllocationMethod::ClosedForm,
            AllocationMethod::NumericalOptimal,
        ] {
            for site in 1..=7 {
                let single = match method {
                    AllocationMethod::ClosedForm => allocate_links_closed_form(7, site, &p),
                    _ => allocate_links_optimal(7, site, &p),
                }
                .unwrap();
                assert_eq!(multi_site_allocate(7, &[site], &p, method).unwrap(), single);
            }
        }
        assert!(multi_site_allocate(6, &[5, 2], &p, AllocationMethod::Uniform).is_err());
    }

    #[test]
    fn csv_output() {
        let p = params(1.0, 2.0, 1.0);
        let a = allocate_links_optimal(3, 1, &p).unwrap();
        let mut buf = Vec::new();
        a.write_csv(&mut buf, &p).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "link_index,length,weight,method,cost");
        assert_eq!(lines.len(), 3);
        assert!(lines[1].starts_with("1,0.333"));
        assert!(lines[2].contains(",optimal,"));
    }

    #[test]
    fn deployment_scaling() {
        let p = params(1.0, 2.0, 1.0);
        assert_eq!(deployment_cost_scaling(&p, 1.0, 7).unwrap(), 7.0);
        assert_eq!(deployment_cost_scaling(&p, 2.0, 3).unwrap(), 12.0);
        assert_eq!(deployment_cost_scaling(&p, 2.0, 0).unwrap(), 0.0);
        assert!(deployment_cost_scaling(&p, 0.0, 1).is_err());
    }

    proptest! {
        #[test]
        fn nearer_links_are_shorter(n in 2usize..20, site_pick in 0usize..100, alpha in 1.1f64..4.0) {
            let site = site_pick % n + 1;
            let p = params(1.0, alpha, 1.0);
            for a in [allocate_links_closed_form(n, site, &p).unwrap(), allocate_links_optimal(n, site, &p).unwrap()] {
                for i in 0..a.weights.len() {
                    for j in 0..a.weights.len() {
                        if a.weights[i] > a.weights[j] {
                            prop_assert!(a.lengths[i] <= a.lengths[j]);
                        }
                    }
                }
            }
        }

        #[test]
        fn total_cost_mirror_symmetry(lengths in proptest::collection::vec(0.1f64..5.0, 1..15), site_pick in 0usize..100) {
            let n = lengths.len() + 1;
            let site = site_pick % n + 1;
            let p = params(1.3, 2.2, 1.0);
            let net = generate_line(n, &lengths).unwrap();
            let reversed: Vec<f64> = lengths.iter().rev().cloned().collect();
            let mirror = generate_line(n, &reversed).unwrap();
            let a = total_cost(&net, &[site], &p).unwrap();
            let b = total_cost(&mirror, &[n + 1 - site], &p).unwrap();
            prop_assert!(close(a, b, 1e-12));
        }

        #[test]
        fn budget_scaling(n in 2usize..15, site_pick in 0usize..100, c in 0.1f64..10.0, alpha in 1.1f64..3.5) {
            let site = site_pick % n + 1;
            let base = params(1.0, alpha, 2.0);
            let scaled = params(1.0, alpha, 2.0 * c);
            for method in [AllocationMethod::ClosedForm, AllocationMethod::NumericalOptimal, AllocationMethod::Uniform] {
                let a = allocate_links(n, site, &base, method).unwrap();
                let b = allocate_links(n, site, &scaled, method).unwrap();
                for (x, y) in a.lengths.iter().zip(&b.lengths) {
                    prop_assert!(close(x * c, *y, 1e-12));
                }
                prop_assert!(close(a.total_cost * c.powf(alpha), b.total_cost, 1e-10));
            }
        }
    }
}
