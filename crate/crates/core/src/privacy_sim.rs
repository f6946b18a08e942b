//! Seeded vehicle simulation over a placed network and the privacy metrics
//! computed from it.
//!
//! Vehicles drive chained shortest-path trips. Passing a site intersection is
//! a zone traversal; its anonymity set is every vehicle that passed the same
//! zone within `zone_dwell_window` seconds. The adversary guesses uniformly
//! inside each set, independently per zone.

use std::collections::{BTreeMap, HashSet};
use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::cost_model::CostParams;
use crate::error::{invalid, Result};
use crate::placement_search::{ga_search, Placement, SearchParams};
use crate::road_graph::RoadNetwork;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimConfig {
    pub vehicle_count: usize,
    pub trips_per_vehicle: usize,
    /// Meters per second.
    pub mean_speed: f64,
    /// Seconds. Traversals of one zone closer than this share an anonymity set.
    pub zone_dwell_window: f64,
    pub seed: u64,
    /// Seconds. Vehicles depart uniformly within `[0, duration)`.
    pub duration: f64,
    /// Aggregate relay capacity shared by all roadside units.
    #[serde(default = "default_aggregate_rate")]
    pub aggregate_rate: f64,
}

fn default_aggregate_rate() -> f64 {
    1.0
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig {
            vehicle_count: 200,
            trips_per_vehicle: 6,
            mean_speed: 14.0,
            zone_dwell_window: 300.0,
            seed: 0,
            duration: 1800.0,
            aggregate_rate: 1.0,
        }
    }
}

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        if self.vehicle_count == 0 || self.trips_per_vehicle == 0 {
            return Err(invalid(
                "vehicle_count and trips_per_vehicle must be positive",
            ));
        }
        for (name, v) in [
            ("mean_speed", self.mean_speed),
            ("zone_dwell_window", self.zone_dwell_window),
            ("duration", self.duration),
            ("aggregate_rate", self.aggregate_rate),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(invalid(format!("{name} must be positive, got {v}")));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ZoneTraversal {
    pub vehicle: usize,
    /// Index into the placement's site list.
    pub zone: usize,
    pub entry_time: f64,
    pub exit_time: f64,
    /// Distinct vehicles in the zone's padded interval, including this one.
    pub anonymity_set_size: usize,
}

/// Drive every vehicle and record its zone traversals, ordered by vehicle
/// then time. The vehicle stream depends only on `cfg` and `net`, so two
/// placements simulated with one config see identical traffic.
pub fn simulate(
    net: &RoadNetwork,
    placement: &Placement,
    cfg: &SimConfig,
) -> Result<Vec<ZoneTraversal>> {
    cfg.validate()?;
    let mut zone_at = vec![None; net.len()];
    for (z, &s) in placement.sites().iter().enumerate() {
        if !net.contains(s) {
            return Err(invalid(format!("site {s} is not in the network")));
        }
        zone_at[s - 1] = Some(z);
    }

    let n = net.len();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut out = Vec::new();
    for vehicle in 0..cfg.vehicle_count {
        let mut t = rng.random_range(0.0..cfg.duration);
        let mut here = rng.random_range(1..=n);
        if let Some(zone) = zone_at[here - 1] {
            out.push(point_traversal(vehicle, zone, t));
        }
        if n == 1 {
            continue;
        }
        for _ in 0..cfg.trips_per_vehicle {
            let mut dest = rng.random_range(1..n);
            if dest >= here {
                dest += 1;
            }
            let route = net.shortest_path(here, dest)?;
            for (&node, len) in route.nodes[1..].iter().zip(&route.link_lengths) {
                t += len / cfg.mean_speed;
                if let Some(zone) = zone_at[node - 1] {
                    out.push(point_traversal(vehicle, zone, t));
                }
            }
            here = dest;
        }
    }
    fill_anonymity_sets(&mut out, cfg.zone_dwell_window);
    Ok(out)
}

fn point_traversal(vehicle: usize, zone: usize, t: f64) -> ZoneTraversal {
    ZoneTraversal {
        vehicle,
        zone,
        entry_time: t,
        exit_time: t,
        anonymity_set_size: 1,
    }
}

/// Set each traversal's anonymity set size from co-presence at its zone.
pub fn fill_anonymity_sets(traversals: &mut [ZoneTraversal], window: f64) {
    let zones = traversals.iter().map(|t| t.zone + 1).max().unwrap_or(0);
    let mut by_zone: Vec<Vec<usize>> = vec![Vec::new(); zones];
    for (i, t) in traversals.iter().enumerate() {
        by_zone[t.zone].push(i);
    }
    for idx in by_zone {
        let mut sizes = Vec::with_capacity(idx.len());
        for &i in &idx {
            let me = &traversals[i];
            let (lo, hi) = (me.entry_time - window, me.exit_time + window);
            let set: HashSet<usize> = idx
                .iter()
                .map(|&k| &traversals[k])
                .filter(|o| o.exit_time >= lo && o.entry_time <= hi)
                .map(|o| o.vehicle)
                .collect();
            sizes.push(set.len());
        }
        for (&i, s) in idx.iter().zip(sizes) {
            traversals[i].anonymity_set_size = s;
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TrackingMode {
    /// Mean over the cohort of the product of per-zone success chances.
    Exact,
    /// Seeded simulation of the adversary's guesses.
    MonteCarlo { trials: usize, seed: u64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrackingSuccess {
    pub value: f64,
    /// Vehicles with at least `j` traversals.
    pub cohort: usize,
    /// True when the cohort is empty; `value` is then 0.
    pub empty: bool,
}

/// Per-vehicle traversals in time order.
fn by_vehicle(traversals: &[ZoneTraversal]) -> BTreeMap<usize, Vec<&ZoneTraversal>> {
    let mut map: BTreeMap<usize, Vec<&ZoneTraversal>> = BTreeMap::new();
    for t in traversals {
        map.entry(t.vehicle).or_default().push(t);
    }
    for v in map.values_mut() {
        v.sort_by(|a, b| a.entry_time.total_cmp(&b.entry_time));
    }
    map
}

/// Fraction of vehicles the adversary links through their first `j` zones,
/// among vehicles with at least `j` traversals.
pub fn tracking_success(
    traversals: &[ZoneTraversal],
    j: usize,
    mode: TrackingMode,
) -> Result<TrackingSuccess> {
    if j == 0 {
        return Err(invalid("j must be at least 1"));
    }
    let cohort: Vec<Vec<f64>> = by_vehicle(traversals)
        .into_values()
        .filter(|v| v.len() >= j)
        .map(|v| {
            v[..j]
                .iter()
                .map(|t| 1.0 / t.anonymity_set_size as f64)
                .collect()
        })
        .collect();
    if cohort.is_empty() {
        return Ok(TrackingSuccess {
            value: 0.0,
            cohort: 0,
            empty: true,
        });
    }
    let m = cohort.len() as f64;
    let value = match mode {
        TrackingMode::Exact => {
            cohort
                .iter()
                .map(|p| p.iter().product::<f64>())
                .sum::<f64>()
                / m
        }
        TrackingMode::MonteCarlo { trials, seed } => {
            if trials == 0 {
                return Err(invalid("trials must be at least 1"));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut tracked = 0usize;
            for _ in 0..trials {
                for probs in &cohort {
                    // every guess is drawn so the stream does not depend on outcomes
                    let mut ok = true;
                    for &p in probs {
                        ok &= rng.random::<f64>() < p;
                    }
                    tracked += ok as usize;
                }
            }
            tracked as f64 / (trials as f64 * m)
        }
    };
    Ok(TrackingSuccess {
        value,
        cohort: cohort.len(),
        empty: false,
    })
}

/// Bits of uncertainty accumulated by one vehicle: the sum of `log2` of its
/// anonymity set sizes. The flag is true when the vehicle never crossed a
/// zone.
pub fn cumulative_entropy(traversals: &[ZoneTraversal], vehicle: usize) -> (f64, bool) {
    let mut bits = 0.0;
    let mut seen = false;
    for t in traversals.iter().filter(|t| t.vehicle == vehicle) {
        bits += (t.anonymity_set_size as f64).log2();
        seen = true;
    }
    (bits, !seen)
}

/// Largest per-unit rate `phi` with `phi * lambda * n <= aggregate` when
/// every unit's load factor is at least `lambda_min`.
pub fn capacity_bound(aggregate: f64, n: usize, lambda_min: f64) -> Result<f64> {
    if !(aggregate.is_finite() && aggregate > 0.0) {
        return Err(invalid("aggregate rate must be positive"));
    }
    let den = n as f64 * lambda_min;
    if !(den.is_finite() && den > 0.0) {
        return Err(invalid("unit count and lambda_min must be positive"));
    }
    Ok(aggregate / den)
}

/// True when `phi * lambda * n <= aggregate` for every unit load `lambda`,
/// with `n = lambdas.len()`.
pub fn is_admissible(phi: f64, aggregate: f64, lambdas: &[f64]) -> bool {
    let n = lambdas.len() as f64;
    lambdas.iter().all(|l| phi * l * n <= aggregate)
}

/// Per-unit load factors of a placement: the hop count from every
/// intersection that is not itself a zone to its zone.
pub fn relay_loads(placement: &Placement) -> Vec<f64> {
    placement
        .hops()
        .iter()
        .filter(|&&h| h > 0)
        .map(|&h| h as f64)
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimulationReport {
    /// TS(j) for each `j` with a non-empty cohort.
    pub ts_curve: BTreeMap<usize, f64>,
    /// Cumulative entropy in bits, indexed by vehicle.
    pub entropy_per_vehicle: Vec<f64>,
    pub mean_entropy: f64,
    pub mean_anonymity_set: f64,
    /// Capacity bound with the placement's mean hop count as the load
    /// factor; absent when every intersection is a zone.
    pub capacity_phi_max: Option<f64>,
}

/// Exact-mode metrics over `1..=max_j`.
pub fn report(
    net: &RoadNetwork,
    placement: &Placement,
    traversals: &[ZoneTraversal],
    cfg: &SimConfig,
    max_j: usize,
) -> Result<SimulationReport> {
    let mut ts_curve = BTreeMap::new();
    for j in 1..=max_j {
        let ts = tracking_success(traversals, j, TrackingMode::Exact)?;
        if !ts.empty {
            ts_curve.insert(j, ts.value);
        }
    }
    let mut entropy_per_vehicle = vec![0.0; cfg.vehicle_count];
    for t in traversals {
        entropy_per_vehicle[t.vehicle] += (t.anonymity_set_size as f64).log2();
    }
    let mean_entropy = entropy_per_vehicle.iter().sum::<f64>() / cfg.vehicle_count as f64;
    let mean_anonymity_set = if traversals.is_empty() {
        0.0
    } else {
        traversals
            .iter()
            .map(|t| t.anonymity_set_size as f64)
            .sum::<f64>()
            / traversals.len() as f64
    };
    let avg = placement.avg_hops();
    let capacity_phi_max = if avg > 0.0 {
        Some(capacity_bound(cfg.aggregate_rate, net.len(), avg)?)
    } else {
        None
    };
    Ok(SimulationReport {
        ts_curve,
        entropy_per_vehicle,
        mean_entropy,
        mean_anonymity_set,
        capacity_phi_max,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub mz: usize,
    pub sites: Vec<usize>,
    pub report: SimulationReport,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct PrivacyCurve {
    pub points: Vec<CurvePoint>,
}

impl PrivacyCurve {
    /// Columns: mz, j, ts, entropy_mean, anonymity_mean.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["mz", "j", "ts", "entropy_mean", "anonymity_mean"])?;
        for p in &self.points {
            for (j, ts) in &p.report.ts_curve {
                w.write_record([
                    p.mz.to_string(),
                    j.to_string(),
                    ts.to_string(),
                    p.report.mean_entropy.to_string(),
                    p.report.mean_anonymity_set.to_string(),
                ])?;
            }
        }
        w.flush()?;
        Ok(())
    }
}

/// Seed for the search run of one sweep point.
pub fn sweep_seed(seed: u64, mz: usize) -> u64 {
    seed ^ (mz as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

/// For each zone count: search a placement, simulate traffic, and score it.
///
/// Each point's search is seeded from `(sp.seed, mz)`. All points share the
/// vehicle stream seeded by `cfg.seed`, so they differ only in placement.
/// Points run on separate threads.
pub fn privacy_curve(
    net: &RoadNetwork,
    cfg: &SimConfig,
    mz_counts: &[usize],
    sp: &SearchParams,
    cp: &CostParams,
    max_j: usize,
) -> Result<PrivacyCurve> {
    cfg.validate()?;
    if let Some(&bad) = mz_counts.iter().find(|&&m| m == 0 || m > net.len()) {
        return Err(invalid(format!(
            "zone count {bad} must be in 1..={}",
            net.len()
        )));
    }
    let run = |mz: usize| -> Result<CurvePoint> {
        let params = SearchParams {
            seed: sweep_seed(sp.seed, mz),
            ..*sp
        };
        let (placement, _) = ga_search(net, mz, &params, cp)?;
        let traversals = simulate(net, &placement, cfg)?;
        Ok(CurvePoint {
            mz,
            sites: placement.sites().to_vec(),
            report: report(net, &placement, &traversals, cfg, max_j)?,
        })
    };
    let points = std::thread::scope(|s| {
        let handles: Vec<_> = mz_counts
            .iter()
            .map(|&mz| s.spawn(move || run(mz)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("sweep worker panicked"))
            .collect::<Result<Vec<_>>>()
    })?;
    Ok(PrivacyCurve { points })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::road_graph::{generate_grid, generate_line, generate_poisson};
    use proptest::prelude::*;
    use rand::Rng;

    fn tr(vehicle: usize, zone: usize, t: f64, size: usize) -> ZoneTraversal {
        ZoneTraversal {
            vehicle,
            zone,
            entry_time: t,
            exit_time: t,
            anonymity_set_size: size,
        }
    }

    /// Enumerate every combination of adversary guesses over the cohort's
    /// first `j` traversals and count the fraction of tracked vehicles.
    fn brute_force_ts(traversals: &[ZoneTraversal], j: usize) -> f64 {
        let cohort: Vec<Vec<usize>> = by_vehicle(traversals)
            .into_values()
            .filter(|v| v.len() >= j)
            .map(|v| v[..j].iter().map(|t| t.anonymity_set_size).collect())
            .collect();
        let slots: Vec<usize> = cohort.iter().flatten().copied().collect();
        let total: usize = slots.iter().product();
        let mut tracked = 0usize;
        let mut guess = vec![0usize; slots.len()];
        for _ in 0..total {
            // guess 0 stands for picking the true vehicle
            let mut k = 0;
            for sizes in &cohort {
                tracked += guess[k..k + sizes.len()].iter().all(|&g| g == 0) as usize;
                k += sizes.len();
            }
            for (g, &s) in guess.iter_mut().zip(&slots) {
                *g += 1;
                if *g < s {
                    break;
                }
                *g = 0;
            }
        }
        tracked as f64 / (total as f64 * cohort.len() as f64)
    }

    fn cfg(vehicles: usize, seed: u64) -> SimConfig {
        SimConfig {
            vehicle_count: vehicles,
            seed,
            ..SimConfig::default()
        }
    }

    #[test]
    fn single_vehicle_is_alone() {
        let net = generate_grid(4, 4, 100.0).unwrap();
        let p = Placement::new(&net, &[6, 11]).unwrap();
        let t = simulate(&net, &p, &cfg(1, 3)).unwrap();
        assert!(!t.is_empty());
        assert!(t.iter().all(|t| t.anonymity_set_size == 1));
    }

    #[test]
    fn simultaneous_vehicles_share_a_set() {
        let mut t = vec![
            tr(0, 0, 10.0, 1),
            tr(1, 0, 10.0, 1),
            tr(2, 0, 500.0, 1),
            tr(1, 1, 10.0, 1),
        ];
        fill_anonymity_sets(&mut t, 5.0);
        let sizes: Vec<usize> = t.iter().map(|t| t.anonymity_set_size).collect();
        assert_eq!(sizes, vec![2, 2, 1, 1]);
        // a vehicle passing twice counts once
        let mut t = vec![tr(0, 0, 10.0, 1), tr(0, 0, 12.0, 1)];
        fill_anonymity_sets(&mut t, 5.0);
        assert!(t.iter().all(|t| t.anonymity_set_size == 1));
    }

    #[test]
    fn traversals_follow_routes() {
        // line 1..5, zone at 3: any trip crossing or ending at 3 is recorded
        let net = generate_line(5, &[10.0]).unwrap();
        let p = Placement::new(&net, &[3]).unwrap();
        let c = SimConfig {
            vehicle_count: 50,
            trips_per_vehicle: 3,
            mean_speed: 1.0,
            ..SimConfig::default()
        };
        let t = simulate(&net, &p, &c).unwrap();
        for w in t.windows(2) {
            assert!(w[0].vehicle < w[1].vehicle || w[0].entry_time <= w[1].entry_time);
        }
        assert!(t.iter().all(|t| t.zone == 0 && t.exit_time >= t.entry_time));
        // consecutive traversals by one vehicle are at least one round trip apart
        for w in t.windows(2).filter(|w| w[0].vehicle == w[1].vehicle) {
            assert!(w[1].entry_time - w[0].entry_time >= 20.0 - 1e-9);
        }
    }

    #[test]
    fn simulation_is_deterministic() {
        let net = generate_poisson(2000.0, 2000.0, 2.5e-5, 500.0, 4)
            .unwrap()
            .network;
        let p = Placement::new(&net, &[1, net.len()]).unwrap();
        let a = simulate(&net, &p, &cfg(40, 8)).unwrap();
        let b = simulate(&net, &p, &cfg(40, 8)).unwrap();
        assert_eq!(a, b);
        let c = simulate(&net, &p, &cfg(40, 9)).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn invalid_inputs() {
        let net = generate_line(4, &[1.0]).unwrap();
        let other = generate_line(6, &[1.0]).unwrap();
        let p = Placement::new(&other, &[6]).unwrap();
        assert!(simulate(&net, &p, &cfg(5, 0)).is_err());
        let p = Placement::new(&net, &[2]).unwrap();
        let bad = SimConfig {
            mean_speed: 0.0,
            ..cfg(5, 0)
        };
        assert!(simulate(&net, &p, &bad).is_err());
        assert!(tracking_success(&[], 0, TrackingMode::Exact).is_err());
    }

    #[test]
    fn mean_set_size_grows_with_traffic() {
        let net = generate_poisson(3000.0, 3000.0, 1.1e-5, 700.0, 21)
            .unwrap()
            .network;
        let p = Placement::new(&net, &[net.len() / 3 + 1, 2 * net.len() / 3 + 1]).unwrap();
        let mut last = 0.0;
        for v in [50, 100, 200] {
            let t = simulate(&net, &p, &cfg(v, 5)).unwrap();
            let r = report(&net, &p, &t, &cfg(v, 5), 3).unwrap();
            assert!(
                r.mean_anonymity_set > last,
                "{v}: {} <= {last}",
                r.mean_anonymity_set
            );
            last = r.mean_anonymity_set;
        }
    }

    #[test]
    fn tracking_examples() {
        let ones: Vec<_> = (0..4)
            .flat_map(|v| (0..3).map(move |k| tr(v, k, k as f64, 1)))
            .collect();
        for j in 1..=3 {
            let ts = tracking_success(&ones, j, TrackingMode::Exact).unwrap();
            assert_eq!(ts.value, 1.0);
            assert_eq!(ts.cohort, 4);
        }
        let twos: Vec<_> = (0..3)
            .flat_map(|v| (0..3).map(move |k| tr(v, k, k as f64, 2)))
            .collect();
        assert_eq!(
            tracking_success(&twos, 3, TrackingMode::Exact)
                .unwrap()
                .value,
            0.125
        );
        assert_eq!(brute_force_ts(&twos, 3), 0.125);

        let empty = tracking_success(&twos, 4, TrackingMode::Exact).unwrap();
        assert!(empty.empty);
        assert_eq!(empty.value, 0.0);
    }

    #[test]
    fn first_j_traversals_in_time_order() {
        // vehicle 0 listed out of order: sizes by time are 1, 4
        let t = vec![tr(0, 1, 9.0, 4), tr(0, 0, 1.0, 1)];
        assert_eq!(
            tracking_success(&t, 1, TrackingMode::Exact).unwrap().value,
            1.0
        );
        assert_eq!(
            tracking_success(&t, 2, TrackingMode::Exact).unwrap().value,
            0.25
        );
    }

    #[test]
    fn exact_matches_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..200 {
            let vehicles = rng.random_range(1..=3);
            let mut t = Vec::new();
            for v in 0..vehicles {
                for k in 0..rng.random_range(1..=3) {
                    t.push(tr(v, k, k as f64, rng.random_range(1..=4)));
                }
            }
            for j in 1..=3 {
                let ts = tracking_success(&t, j, TrackingMode::Exact).unwrap();
                if ts.empty {
                    continue;
                }
                let bf = brute_force_ts(&t, j);
                assert!((ts.value - bf).abs() < 1e-12, "{} vs {bf}", ts.value);
            }
        }
    }

    #[test]
    fn monte_carlo_agrees_with_exact() {
        let net = generate_grid(5, 5, 200.0).unwrap();
        let p = Placement::new(&net, &[7, 13, 19]).unwrap();
        let t = simulate(&net, &p, &cfg(60, 2)).unwrap();
        for j in 1..=3 {
            let exact = tracking_success(&t, j, TrackingMode::Exact).unwrap();
            let trials = 10_000;
            let mc = tracking_success(&t, j, TrackingMode::MonteCarlo { trials, seed: 1 }).unwrap();
            let draws = (trials * exact.cohort) as f64;
            let sigma = (exact.value * (1.0 - exact.value) / draws).sqrt();
            assert!(
                (mc.value - exact.value).abs() <= 3.0 * sigma + 1e-12,
                "j={j}"
            );
        }
    }

    #[test]
    fn entropy_examples() {
        let t = vec![tr(0, 0, 0.0, 2), tr(0, 1, 1.0, 4), tr(1, 0, 0.0, 1)];
        assert_eq!(cumulative_entropy(&t, 0), (3.0, false));
        assert_eq!(cumulative_entropy(&t, 1), (0.0, false));
        assert_eq!(cumulative_entropy(&t, 7), (0.0, true));
    }

    #[test]
    fn capacity_examples() {
        assert_eq!(capacity_bound(100.0, 10, 2.0).unwrap(), 5.0);
        assert_eq!(capacity_bound(100.0, 10, 1.0).unwrap(), 10.0);
        let lambda = crate::linear_placement::optimal_single(5)
            .unwrap()
            .avg_hops_f64();
        assert_eq!(capacity_bound(12.0, 5, lambda).unwrap(), 2.0);
        assert!(capacity_bound(1.0, 0, 1.0).is_err());
        assert!(capacity_bound(1.0, 3, 0.0).is_err());
    }

    #[test]
    fn admissible_demand_within_bound() {
        let net = generate_poisson(2000.0, 2000.0, 2.5e-5, 500.0, 6)
            .unwrap()
            .network;
        let sp = SearchParams {
            maxgen: 20,
            ..SearchParams::default()
        };
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for mz in 1..=4 {
            let (p, _) = ga_search(&net, mz, &sp, &CostParams::default()).unwrap();
            let loads = relay_loads(&p);
            let lmin = loads.iter().copied().fold(f64::INFINITY, f64::min);
            let bound = capacity_bound(10.0, loads.len(), lmin).unwrap();
            for _ in 0..500 {
                let phi = rng.random_range(0.0..2.0 * bound);
                if is_admissible(phi, 10.0, &loads) {
                    assert!(phi <= bound);
                }
            }
        }
    }

    #[test]
    fn curve_rejects_bad_counts_and_writes_csv() {
        let net = generate_grid(3, 3, 100.0).unwrap();
        let sp = SearchParams {
            maxgen: 5,
            ..SearchParams::default()
        };
        let cp = CostParams::default();
        assert!(privacy_curve(&net, &cfg(10, 0), &[0], &sp, &cp, 2).is_err());
        assert!(privacy_curve(&net, &cfg(10, 0), &[10], &sp, &cp, 2).is_err());
        let curve = privacy_curve(&net, &cfg(10, 0), &[1, 2], &sp, &cp, 2).unwrap();
        assert_eq!(curve.points.len(), 2);
        let again = privacy_curve(&net, &cfg(10, 0), &[1, 2], &sp, &cp, 2).unwrap();
        assert_eq!(curve, again);
        let mut out = Vec::new();
        curve.write_csv(&mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        assert!(text.starts_with("mz,j,ts,entropy_mean,anonymity_mean\n1,1,"));
    }

    proptest! {
        #[test]
        fn ts_bounded_and_non_increasing(
            sizes in proptest::collection::vec(proptest::collection::vec(1usize..6, 1..6), 1..8),
        ) {
            // equal-length histories keep the cohort fixed across j
            let len = sizes.iter().map(Vec::len).min().unwrap();
            let t: Vec<_> = sizes
                .iter()
                .enumerate()
                .flat_map(|(v, s)| s[..len].iter().enumerate().map(move |(k, &z)| tr(v, k, k as f64, z)))
                .collect();
            let mut last = 1.0;
            for j in 1..=len {
                let ts = tracking_success(&t, j, TrackingMode::Exact).unwrap().value;
                prop_assert!((0.0..=1.0).contains(&ts));
                prop_assert!(ts <= last);
                last = ts;
            }
        }

        #[test]
        fn entropy_is_additive(
            a in proptest::collection::vec(1usize..9, 0..6),
            b in proptest::collection::vec(1usize..9, 0..6),
        ) {
            let ta: Vec<_> = a.iter().enumerate().map(|(k, &s)| tr(0, 0, k as f64, s)).collect();
            let tb: Vec<_> = b.iter().enumerate().map(|(k, &s)| tr(0, 0, 10.0 + k as f64, s)).collect();
            let joined: Vec<_> = ta.iter().chain(&tb).copied().collect();
            let sum = cumulative_entropy(&ta, 0).0 + cumulative_entropy(&tb, 0).0;
            prop_assert!((cumulative_entropy(&joined, 0).0 - sum).abs() < 1e-12);
            prop_assert!(cumulative_entropy(&joined, 0).0 >= cumulative_entropy(&ta, 0).0);
        }

        #[test]
        fn set_sizes_at_least_one_and_bounded(seed in 0u64..200, vehicles in 1usize..30) {
            let net = generate_grid(4, 4, 100.0).unwrap();
            let p = Placement::new(&net, &[6, 11]).unwrap();
            let t = simulate(&net, &p, &cfg(vehicles, seed)).unwrap();
            prop_assert!(t.iter().all(|t| t.anonymity_set_size >= 1 && t.anonymity_set_size <= vehicles));
        }
    }
}
