//! Mix-zone placement on general road networks.
//!
//! Three strategies live here: a genetic search with local-search polishing
//! ([`ga_search`]), a traffic-balanced partition used to seed it
//! ([`cluster_network`]), and a reduction of line-like networks to the 1-D
//! closed form ([`place_normal_traffic`]).

use std::collections::{HashMap, VecDeque};
use std::io::Write;

use itertools::Itertools;
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::cost_model::{self, CostParams};
use crate::error::{invalid, Error, Result};
use crate::linear_placement::{self, ORACLE_MAX_MZ, ORACLE_MAX_N};
use crate::road_graph::{Point, RoadNetwork};
use crate::weber_solver::{self, SolverConfig, WeberProblem};

/// A set of mix-zone sites and the intersections each one serves.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Placement {
    sites: Vec<usize>,
    assignment: Vec<usize>,
    hops: Vec<usize>,
}

impl Placement {
    /// Sites are stored in ascending id order. Each intersection is served by
    /// the site with the fewest hops, ties going to the lower site.
    pub fn new(net: &RoadNetwork, sites: &[usize]) -> Result<Self> {
        if sites.is_empty() {
            return Err(invalid("a placement needs at least one site"));
        }
        let mut sorted = sites.to_vec();
        sorted.sort_unstable();
        if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
            return Err(invalid(format!("site {} listed twice", w[0])));
        }
        let (assignment, hops) = net.nearest_site_hops(&sorted)?;
        if let Some(u) = assignment.iter().position(|&s| s == usize::MAX) {
            return Err(Error::NoPath {
                from: u + 1,
                to: sorted[0],
            });
        }
        Ok(Placement {
            sites: sorted,
            assignment,
            hops,
        })
    }

    /// Snap planar points to their nearest intersections (ties to the lower
    /// id). Points landing on the same intersection collapse into one site.
    pub fn from_points(net: &RoadNetwork, points: &[Point]) -> Result<Self> {
        let mut sites: Vec<usize> = points
            .iter()
            .map(|p| nearest_intersection(net, *p, net.ids()))
            .collect();
        sites.sort_unstable();
        sites.dedup();
        Placement::new(net, &sites)
    }

    pub fn sites(&self) -> &[usize] {
        &self.sites
    }

    /// Index into [`Placement::sites`] of the site serving each intersection
    /// (indexed by id - 1).
    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    pub fn hops(&self) -> &[usize] {
        &self.hops
    }

    pub fn site_of(&self, id: usize) -> usize {
        self.sites[self.assignment[id - 1]]
    }

    /// Intersection ids served by each site.
    pub fn clusters(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.sites.len()];
        for (u, &s) in self.assignment.iter().enumerate() {
            out[s].push(u + 1);
        }
        out
    }

    pub fn avg_hops(&self) -> f64 {
        self.hops.iter().sum::<usize>() as f64 / self.hops.len() as f64
    }
}

fn nearest_intersection(
    net: &RoadNetwork,
    p: Point,
    candidates: impl Iterator<Item = usize>,
) -> usize {
    candidates
        .map(|id| (id, net.intersections()[id - 1].position().distance(&p)))
        .min_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0)))
        .map(|(id, _)| id)
        .expect("at least one candidate")
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FitnessMetric {
    /// Mean hop count from an intersection to its zone.
    #[default]
    AvgHops,
    /// Relay cost along shortest paths, see [`cost_model::total_cost`].
    TotalCost,
    /// Sum of traffic weight times road distance to the nearest zone.
    WeightedDistance,
}

impl FitnessMetric {
    pub fn label(&self) -> &'static str {
        match self {
            FitnessMetric::AvgHops => "avg_hops",
            FitnessMetric::TotalCost => "total_cost",
            FitnessMetric::WeightedDistance => "weighted_distance",
        }
    }
}

/// Lower is better under every metric.
pub fn fitness(
    net: &RoadNetwork,
    placement: &Placement,
    cp: &CostParams,
    metric: FitnessMetric,
) -> Result<f64> {
    sites_fitness(net, placement.sites(), cp, metric)
}

fn sites_fitness(
    net: &RoadNetwork,
    sites: &[usize],
    cp: &CostParams,
    metric: FitnessMetric,
) -> Result<f64> {
    match metric {
        FitnessMetric::AvgHops => {
            let (owner, hops) = net.nearest_site_hops(sites)?;
            if let Some(u) = owner.iter().position(|&s| s == usize::MAX) {
                return Err(Error::NoPath {
                    from: u + 1,
                    to: sites[0],
                });
            }
            Ok(hops.iter().sum::<usize>() as f64 / net.len() as f64)
        }
        FitnessMetric::TotalCost => cost_model::total_cost(net, sites, cp),
        FitnessMetric::WeightedDistance => {
            let forest = net.nearest_site_forest(sites)?;
            let mut total = 0.0;
            for (u, d) in forest.distance.iter().enumerate() {
                if !d.is_finite() {
                    return Err(Error::NoPath {
                        from: u + 1,
                        to: sites[0],
                    });
                }
                total += net.node_weight(u + 1) * d;
            }
            Ok(total)
        }
    }
}

/// One part of a partitioned network.
#[derive(Clone, Debug, PartialEq)]
pub struct Cluster {
    /// Original intersection ids, ascending. Id `i` of `network` is
    /// `members[i - 1]`.
    pub members: Vec<usize>,
    pub network: RoadNetwork,
}

fn bfs(net: &RoadNetwork, from: usize) -> (Vec<usize>, Vec<Option<usize>>) {
    let n = net.len();
    let mut dist = vec![usize::MAX; n];
    let mut parent = vec![None; n];
    let mut queue = VecDeque::from([from]);
    dist[from - 1] = 0;
    while let Some(u) = queue.pop_front() {
        for (v, _) in net.neighbors(u) {
            if dist[v - 1] == usize::MAX {
                dist[v - 1] = dist[u - 1] + 1;
                parent[v - 1] = Some(u);
                queue.push_back(v);
            }
        }
    }
    (dist, parent)
}

/// Split the network into `k` connected clusters of similar traffic load.
///
/// Seeds are chosen by farthest-point sampling in hop distance, starting from
/// the node farthest from a seeded random intersection. Clusters then grow
/// breadth-first, the lightest cluster claiming the next node each round.
pub fn cluster_network(net: &RoadNetwork, k: usize, seed: u64) -> Result<Vec<Cluster>> {
    let n = net.len();
    if k == 0 || k > n {
        return Err(invalid(format!("cluster count {k} must be in 1..={n}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let start = rng.random_range(1..=n);
    let (from_start, _) = bfs(net, start);
    let first = argmax_lowest(&from_start);
    let mut seeds = vec![first];
    let mut nearest = bfs(net, first).0;
    while seeds.len() < k {
        let next = argmax_lowest(&nearest);
        seeds.push(next);
        let (d, _) = bfs(net, next);
        for (a, b) in nearest.iter_mut().zip(d) {
            *a = (*a).min(b);
        }
    }

    let mut owner = vec![usize::MAX; n];
    let mut load = vec![0.0; k];
    let mut frontier: Vec<VecDeque<usize>> = vec![VecDeque::new(); k];
    for (c, &s) in seeds.iter().enumerate() {
        owner[s - 1] = c;
        load[c] += net.node_weight(s);
        frontier[c].extend(net.neighbors(s).map(|(v, _)| v));
    }
    let mut remaining = n - k;
    while remaining > 0 {
        let mut order: Vec<usize> = (0..k).collect();
        order.sort_by(|&a, &b| load[a].total_cmp(&load[b]).then(a.cmp(&b)));
        let mut claimed = false;
        for c in order {
            while let Some(v) = frontier[c].pop_front() {
                if owner[v - 1] != usize::MAX {
                    continue;
                }
                owner[v - 1] = c;
                load[c] += net.node_weight(v);
                frontier[c].extend(
                    net.neighbors(v)
                        .map(|(w, _)| w)
                        .filter(|w| owner[w - 1] == usize::MAX),
                );
                remaining -= 1;
                claimed = true;
                break;
            }
            if claimed {
                break;
            }
        }
        debug_assert!(claimed, "connected network always has a frontier");
    }

    let mut members = vec![Vec::new(); k];
    for (u, &c) in owner.iter().enumerate() {
        members[c].push(u + 1);
    }
    members.sort_by_key(|m| m[0]);
    members
        .into_iter()
        .map(|m| {
            Ok(Cluster {
                network: net.subnetwork(&m)?,
                members: m,
            })
        })
        .collect()
}

fn argmax_lowest(d: &[usize]) -> usize {
    let mut best = 0;
    for (i, &v) in d.iter().enumerate() {
        if v > d[best] {
            best = i;
        }
    }
    best + 1
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Initialization {
    /// One individual starts from the per-cluster Weber points.
    #[default]
    WeberSeeded,
    /// Every individual is a uniformly random set of distinct sites.
    Random,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SearchParams {
    pub population_size: usize,
    /// Crossover probability.
    pub pc: f64,
    /// Mutation probability.
    pub pm: f64,
    pub maxgen: usize,
    pub seed: u64,
    pub local_search: bool,
    pub metric: FitnessMetric,
    pub init: Initialization,
}

impl Default for SearchParams {
    fn default() -> Self {
        SearchParams {
            population_size: 30,
            pc: 0.8,
            pm: 0.2,
            maxgen: 200,
            seed: 0,
            local_search: true,
            metric: FitnessMetric::AvgHops,
            init: Initialization::WeberSeeded,
        }
    }
}

impl SearchParams {
    pub fn validate(&self) -> Result<()> {
        if self.population_size < 2 {
            return Err(invalid("population_size must be at least 2"));
        }
        for (name, p) in [("pc", self.pc), ("pm", self.pm)] {
            if !(0.0..=1.0).contains(&p) {
                return Err(invalid(format!("{name} must lie in [0, 1], got {p}")));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GenerationRecord {
    pub generation: usize,
    pub best: f64,
    pub mean: f64,
    pub best_sites: Vec<usize>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SearchTrace {
    pub generations: Vec<GenerationRecord>,
}

impl SearchTrace {
    pub fn best(&self) -> impl Iterator<Item = f64> + '_ {
        self.generations.iter().map(|g| g.best)
    }

    /// Columns: generation, best, mean.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["generation", "best", "mean"])?;
        for g in &self.generations {
            w.write_record([
                g.generation.to_string(),
                g.best.to_string(),
                g.mean.to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Serialized form of a placement: `{sites, metric, value}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PlacementSummary {
    pub sites: Vec<usize>,
    pub metric: FitnessMetric,
    pub value: f64,
}

impl PlacementSummary {
    pub fn new(
        net: &RoadNetwork,
        placement: &Placement,
        cp: &CostParams,
        metric: FitnessMetric,
    ) -> Result<Self> {
        Ok(PlacementSummary {
            sites: placement.sites().to_vec(),
            metric,
            value: fitness(net, placement, cp, metric)?,
        })
    }
}

/// Memoized fitness over sorted site sets.
struct Evaluator<'a> {
    net: &'a RoadNetwork,
    cp: &'a CostParams,
    metric: FitnessMetric,
    cache: HashMap<Vec<usize>, f64>,
}

impl<'a> Evaluator<'a> {
    fn new(net: &'a RoadNetwork, cp: &'a CostParams, metric: FitnessMetric) -> Self {
        Evaluator {
            net,
            cp,
            metric,
            cache: HashMap::new(),
        }
    }

    fn eval(&mut self, sites: &[usize]) -> Result<f64> {
        if let Some(&f) = self.cache.get(sites) {
            return Ok(f);
        }
        let f = sites_fitness(self.net, sites, self.cp, self.metric)?;
        self.cache.insert(sites.to_vec(), f);
        Ok(f)
    }
}

fn improves(new: f64, old: f64) -> bool {
    new < old - 1e-12 * old.abs().max(1.0)
}

/// Single-site relocation descent. Each round tries moving every site to
/// each intersection it currently serves (recentering) and to each of its
/// neighbours, keeping any strict improvement. Stops at a fixed point.
pub fn local_search(
    net: &RoadNetwork,
    placement: &Placement,
    cp: &CostParams,
    metric: FitnessMetric,
) -> Result<Placement> {
    let mut ev = Evaluator::new(net, cp, metric);
    let (sites, _) = descend(&mut ev, placement.sites().to_vec())?;
    Placement::new(net, &sites)
}

/// Returns the final sites and the fitness after every accepted move.
fn descend(ev: &mut Evaluator, mut sites: Vec<usize>) -> Result<(Vec<usize>, Vec<f64>)> {
    let net = ev.net;
    let mut current = ev.eval(&sites)?;
    let mut trace = vec![current];
    loop {
        let mut moved = false;
        for slot in 0..sites.len() {
            let placement = Placement::new(net, &sites)?;
            let here = sites[slot];
            let served = placement.clusters()[placement
                .sites()
                .binary_search(&here)
                .expect("site present")]
            .clone();
            let candidates = served
                .into_iter()
                .chain(net.neighbors(here).map(|(v, _)| v))
                .filter(|c| !sites.contains(c))
                .sorted()
                .dedup()
                .collect::<Vec<_>>();
            let mut best: Option<(f64, Vec<usize>)> = None;
            for c in candidates {
                let mut trial = sites.clone();
                trial[slot] = c;
                trial.sort_unstable();
                let f = ev.eval(&trial)?;
                let bar = best.as_ref().map_or(current, |b| b.0);
                if improves(f, bar) {
                    best = Some((f, trial));
                }
            }
            if let Some((f, trial)) = best {
                sites = trial;
                current = f;
                trace.push(f);
                moved = true;
                break;
            }
        }
        if !moved {
            return Ok((sites, trace));
        }
    }
}

fn weber_seed(net: &RoadNetwork, mz: usize, cluster_seed: u64) -> Result<Vec<usize>> {
    let clusters = cluster_network(net, mz, cluster_seed)?;
    let mut sites = Vec::with_capacity(mz);
    for c in &clusters {
        let points: Vec<Point> = c
            .members
            .iter()
            .map(|&id| net.intersections()[id - 1].position())
            .collect();
        let weights: Vec<f64> = c
            .members
            .iter()
            .map(|&id| net.node_weight(id).max(1e-9))
            .collect();
        let problem = WeberProblem::new(points, weights)?;
        let sol = weber_solver::solve(&problem, &SolverConfig::default())?;
        sites.push(nearest_intersection(
            net,
            sol.location,
            c.members.iter().copied(),
        ));
    }
    sites.sort_unstable();
    Ok(sites)
}

fn random_sites<R: Rng>(rng: &mut R, n: usize, mz: usize) -> Vec<usize> {
    let mut s: Vec<usize> = sample(rng, n, mz).into_iter().map(|i| i + 1).collect();
    s.sort_unstable();
    s
}

fn tournament<R: Rng>(rng: &mut R, fit: &[f64]) -> usize {
    let a = rng.random_range(0..fit.len());
    let b = rng.random_range(0..fit.len());
    if fit[b] < fit[a] {
        b
    } else {
        a
    }
}

/// Replace repeated ids with random unused ones, then sort.
fn repair<R: Rng>(rng: &mut R, mut genes: Vec<usize>, n: usize) -> Vec<usize> {
    let mut seen = vec![false; n + 1];
    for g in genes.iter_mut() {
        if seen[*g] {
            let free: Vec<usize> = (1..=n).filter(|&v| !seen[v]).collect();
            *g = free[rng.random_range(0..free.len())];
        }
        seen[*g] = true;
    }
    genes.sort_unstable();
    genes
}

/// Genetic search for `mz` sites minimizing `sp.metric`.
///
/// Tournament-2 selection, one-point crossover with duplicate repair,
/// single-site resampling mutation, elitism of one, and optional local search
/// on each generation's best offspring. All randomness comes from one
/// ChaCha8 stream seeded by `sp.seed`.
pub fn ga_search(
    net: &RoadNetwork,
    mz: usize,
    sp: &SearchParams,
    cp: &CostParams,
) -> Result<(Placement, SearchTrace)> {
    sp.validate()?;
    let n = net.len();
    if mz == 0 || mz > n {
        return Err(invalid(format!("zone count {mz} must be in 1..={n}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(sp.seed);
    let mut ev = Evaluator::new(net, cp, sp.metric);

    let mut pop: Vec<Vec<usize>> = Vec::with_capacity(sp.population_size);
    if sp.init == Initialization::WeberSeeded {
        let cluster_seed = rng.random();
        pop.push(weber_seed(net, mz, cluster_seed)?);
    }
    while pop.len() < sp.population_size {
        pop.push(random_sites(&mut rng, n, mz));
    }
    let mut fit = pop
        .iter()
        .map(|s| ev.eval(s))
        .collect::<Result<Vec<f64>>>()?;
    let mut trace = SearchTrace::default();
    record(&mut trace, 0, &pop, &fit);

    for gen in 1..=sp.maxgen {
        let elite = best_index(&fit);
        let mut next = vec![pop[elite].clone()];
        while next.len() < sp.population_size {
            let a = &pop[tournament(&mut rng, &fit)];
            let b = &pop[tournament(&mut rng, &fit)];
            let mut child = if rng.random_bool(sp.pc) {
                let cut = if mz > 1 { rng.random_range(1..mz) } else { 0 };
                let genes = a[..cut].iter().chain(&b[cut..]).copied().collect();
                repair(&mut rng, genes, n)
            } else {
                a.clone()
            };
            if mz < n && rng.random_bool(sp.pm) {
                let slot = rng.random_range(0..mz);
                let free: Vec<usize> = (1..=n).filter(|v| !child.contains(v)).collect();
                child[slot] = free[rng.random_range(0..free.len())];
                child.sort_unstable();
            }
            next.push(child);
        }
        let mut next_fit = next
            .iter()
            .map(|s| ev.eval(s))
            .collect::<Result<Vec<f64>>>()?;
        if sp.local_search && next.len() > 1 {
            let i = 1 + best_index(&next_fit[1..]);
            let (polished, trace) = descend(&mut ev, next[i].clone())?;
            next_fit[i] = *trace.last().expect("non-empty trace");
            next[i] = polished;
        }
        pop = next;
        fit = next_fit;
        record(&mut trace, gen, &pop, &fit);
    }

    let best = best_index(&fit);
    Ok((Placement::new(net, &pop[best])?, trace))
}

fn best_index(fit: &[f64]) -> usize {
    let mut best = 0;
    for (i, f) in fit.iter().enumerate() {
        if *f < fit[best] {
            best = i;
        }
    }
    best
}

fn record(trace: &mut SearchTrace, generation: usize, pop: &[Vec<usize>], fit: &[f64]) {
    let b = best_index(fit);
    trace.generations.push(GenerationRecord {
        generation,
        best: fit[b],
        mean: fit.iter().sum::<f64>() / fit.len() as f64,
        best_sites: pop[b].clone(),
    });
}

/// Best placement by enumerating every site set of size `min(mz, N)`.
/// Ties keep the lexicographically first set.
pub fn exhaustive_search(
    net: &RoadNetwork,
    mz: usize,
    cp: &CostParams,
    metric: FitnessMetric,
) -> Result<(Placement, f64)> {
    let n = net.len();
    if mz == 0 {
        return Err(invalid("zone count must be at least 1"));
    }
    let k = mz.min(n);
    if n > ORACLE_MAX_N || k > ORACLE_MAX_MZ {
        return Err(Error::Oversize {
            n,
            mz,
            max_n: ORACLE_MAX_N,
            max_mz: ORACLE_MAX_MZ,
        });
    }
    let mut ev = Evaluator::new(net, cp, metric);
    let mut best: Option<(f64, Vec<usize>)> = None;
    for combo in (1..=n).combinations(k) {
        let f = ev.eval(&combo)?;
        if best.as_ref().is_none_or(|b| f < b.0) {
            best = Some((f, combo));
        }
    }
    let (f, sites) = best.expect("at least one combination");
    Ok((Placement::new(net, &sites)?, f))
}

/// Outcome of [`place_normal_traffic`].
#[derive(Clone, Debug, PartialEq)]
pub struct NormalTrafficPlacement {
    pub placement: Placement,
    /// Backbone intersections in path order, when one was detected.
    pub backbone: Option<Vec<usize>>,
    /// Set when no backbone qualified and the genetic search was used.
    pub warning: Option<String>,
}

/// Longest hop-count shortest path, ties to the lexicographically smallest
/// endpoint pair.
pub fn hop_diameter_path(net: &RoadNetwork) -> Vec<usize> {
    let mut best = (0, 1, 1);
    for a in net.ids() {
        let (d, _) = bfs(net, a);
        for b in (a + 1)..=net.len() {
            if d[b - 1] > best.0 {
                best = (d[b - 1], a, b);
            }
        }
    }
    let (_, a, b) = best;
    let (_, parent) = bfs(net, a);
    let mut path = vec![b];
    let mut cur = b;
    while let Some(p) = parent[cur - 1] {
        path.push(p);
        cur = p;
    }
    path.reverse();
    path
}

/// Accepts a backbone when at least 70% of intersections lie within one hop
/// of it and no more intersections hang off it than lie on it.
pub fn backbone_qualifies(net: &RoadNetwork, backbone: &[usize]) -> Result<bool> {
    let (_, hops) = net.nearest_site_hops(backbone)?;
    let near = hops.iter().filter(|&&h| h <= 1).count();
    let off = net.len() - backbone.len();
    Ok(near * 10 >= net.len() * 7 && off <= backbone.len())
}

/// Placement for line-like networks: order intersections along the hop
/// diameter, apply the 1-D optimum to that order, and map each group's
/// median back onto the backbone. Networks without such a backbone fall
/// back to [`ga_search`] with `fallback`.
pub fn place_normal_traffic(
    net: &RoadNetwork,
    mz: usize,
    cp: &CostParams,
    fallback: &SearchParams,
) -> Result<NormalTrafficPlacement> {
    let n = net.len();
    if mz == 0 {
        return Err(invalid("zone count must be at least 1"));
    }
    if mz >= n {
        return Ok(NormalTrafficPlacement {
            placement: Placement::new(net, &net.ids().collect::<Vec<_>>())?,
            backbone: None,
            warning: None,
        });
    }
    let backbone = hop_diameter_path(net);
    if !backbone_qualifies(net, &backbone)? {
        let (placement, _) = ga_search(net, mz, fallback, cp)?;
        return Ok(NormalTrafficPlacement {
            placement,
            backbone: None,
            warning: Some("no dominant backbone found; used genetic search".into()),
        });
    }

    let (anchor, depth) = net.nearest_site_hops(&backbone)?;
    let mut order: Vec<usize> = net.ids().collect();
    order.sort_by_key(|&id| (anchor[id - 1], depth[id - 1], id));

    let line = linear_placement::optimal_multi(n, mz)?;
    let mut sites = Vec::with_capacity(mz);
    let mut start = 0;
    for (&pos, &size) in line.sites.iter().zip(&line.group_sizes) {
        let group = &order[start..start + size];
        let median = order[pos - 1];
        let preferred = backbone[anchor[median - 1]];
        let pick = std::iter::once(preferred)
            .chain(std::iter::once(median))
            .chain(group.iter().copied())
            .find(|c| !sites.contains(c))
            .expect("group has an unused intersection");
        sites.push(pick);
        start += size;
    }
    Ok(NormalTrafficPlacement {
        placement: Placement::new(net, &sites)?,
        backbone: Some(backbone),
        warning: None,
    })
}
