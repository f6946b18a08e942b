//! Road-network model: intersections joined by undirected links.
//!
//! Intersection ids are 1-based and contiguous. Every algorithm in the crate
//! runs on a [`RoadNetwork`], which is validated on construction (connected,
//! positive link lengths, no duplicate links) and immutable afterwards.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashSet, VecDeque};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn distance(&self, other: &Point) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Intersection {
    pub id: usize,
    pub x: f64,
    pub y: f64,
}

impl Intersection {
    pub fn position(&self) -> Point {
        Point::new(self.x, self.y)
    }
}

fn default_traffic() -> f64 {
    1.0
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Link {
    pub from: usize,
    pub to: usize,
    pub length: f64,
    /// Vehicles per hour carried by the link.
    #[serde(rename = "traffic", default = "default_traffic")]
    pub traffic_weight: f64,
}

impl Link {
    pub fn new(from: usize, to: usize, length: f64) -> Self {
        Link {
            from,
            to,
            length,
            traffic_weight: 1.0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TopologyKind {
    Line,
    Grid,
    General,
}

/// On-disk form of a network. Unknown fields are rejected.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct NetworkFile {
    intersections: Vec<Intersection>,
    links: Vec<Link>,
    connection_range: f64,
    kind: TopologyKind,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(into = "NetworkFile", try_from = "NetworkFile")]
pub struct RoadNetwork {
    intersections: Vec<Intersection>,
    links: Vec<Link>,
    connection_range: f64,
    kind: TopologyKind,
    // adjacency[i] = (neighbour index, link index), sorted by neighbour index
    adjacency: Vec<Vec<(usize, usize)>>,
}

impl From<RoadNetwork> for NetworkFile {
    fn from(net: RoadNetwork) -> Self {
        NetworkFile {
            intersections: net.intersections,
            links: net.links,
            connection_range: net.connection_range,
            kind: net.kind,
        }
    }
}

impl TryFrom<NetworkFile> for RoadNetwork {
    type Error = Error;

    fn try_from(file: NetworkFile) -> Result<Self> {
        RoadNetwork::new(
            file.intersections,
            file.links,
            file.connection_range,
            file.kind,
        )
    }
}

impl PartialEq for RoadNetwork {
    fn eq(&self, other: &Self) -> bool {
        self.intersections == other.intersections
            && self.links == other.links
            && self.connection_range == other.connection_range
            && self.kind == other.kind
    }
}

/// A shortest route between two intersections.
#[derive(Clone, Debug, PartialEq)]
pub struct Route {
    /// Intersection ids from origin to destination, inclusive.
    pub nodes: Vec<usize>,
    pub link_lengths: Vec<f64>,
    pub length: f64,
}

/// Result of a multi-source shortest-path sweep from a set of sites.
#[derive(Clone, Debug)]
pub struct SiteForest {
    /// Index (into the site list) of the site serving each intersection.
    pub site_of: Vec<usize>,
    /// Distance in meters to the serving site.
    pub distance: Vec<f64>,
    /// Parent intersection index and link length on the path toward the site.
    pub parent: Vec<Option<(usize, f64)>>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
struct HeapEntry {
    dist: f64,
    source: usize,
    node: usize,
}

impl Eq for HeapEntry {}

impl Ord for HeapEntry {
    fn cmp(&self, other: &Self) -> Ordering {
        // min-heap on (dist, source, node)
        other
            .dist
            .total_cmp(&self.dist)
            .then_with(|| other.source.cmp(&self.source))
            .then_with(|| other.node.cmp(&self.node))
    }
}

impl PartialOrd for HeapEntry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl RoadNetwork {
    pub fn new(
        intersections: Vec<Intersection>,
        links: Vec<Link>,
        connection_range: f64,
        kind: TopologyKind,
    ) -> Result<Self> {
        if intersections.is_empty() {
            return Err(Error::EmptyNetwork);
        }
        if !(connection_range.is_finite() && connection_range > 0.0) {
            return Err(invalid(format!(
                "connection_range must be positive, got {connection_range}"
            )));
        }
        for (i, node) in intersections.iter().enumerate() {
            if node.id != i + 1 {
                return Err(invalid(format!(
                    "intersection ids must be contiguous from 1; position {} has id {}",
                    i + 1,
                    node.id
                )));
            }
            if !node.position().is_finite() {
                return Err(invalid(format!(
                    "intersection {} has a non-finite position",
                    node.id
                )));
            }
        }
        let n = intersections.len();
        let mut adjacency = vec![Vec::new(); n];
        let mut seen = HashSet::new();
        for (li, link) in links.iter().enumerate() {
            for end in [link.from, link.to] {
                if end == 0 || end > n {
                    return Err(Error::UnknownIntersection(end));
                }
            }
            if link.from == link.to {
                return Err(invalid(format!(
                    "link {li} is a self-loop on {}",
                    link.from
                )));
            }
            if !(link.length.is_finite() && link.length > 0.0) {
                return Err(invalid(format!(
                    "link {}-{} has non-positive length {}",
                    link.from, link.to, link.length
                )));
            }
            if !(link.traffic_weight.is_finite() && link.traffic_weight >= 0.0) {
                return Err(invalid(format!(
                    "link {}-{} has negative traffic weight",
                    link.from, link.to
                )));
            }
            let key = (link.from.min(link.to), link.from.max(link.to));
            if !seen.insert(key) {
                return Err(invalid(format!("duplicate link {}-{}", key.0, key.1)));
            }
            adjacency[link.from - 1].push((link.to - 1, li));
            adjacency[link.to - 1].push((link.from - 1, li));
        }
        for adj in &mut adjacency {
            adj.sort_unstable();
        }
        let net = RoadNetwork {
            intersections,
            links,
            connection_range,
            kind,
            adjacency,
        };
        if net.component_of(0).len() != n {
            return Err(invalid("network is not connected"));
        }
        if kind == TopologyKind::Line {
            let is_path =
                net.links.len() == n - 1 && net.links.iter().all(|l| l.from.abs_diff(l.to) == 1);
            if !is_path {
                return Err(invalid(
                    "line networks must link intersections 1-2-...-N in order",
                ));
            }
        }
        Ok(net)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn len(&self) -> usize {
        self.intersections.len()
    }

    /// Always false: construction rejects empty networks.
    pub fn is_empty(&self) -> bool {
        self.intersections.is_empty()
    }

    pub fn intersections(&self) -> &[Intersection] {
        &self.intersections
    }

    pub fn links(&self) -> &[Link] {
        &self.links
    }

    pub fn connection_range(&self) -> f64 {
        self.connection_range
    }

    pub fn kind(&self) -> TopologyKind {
        self.kind
    }

    pub fn ids(&self) -> impl Iterator<Item = usize> {
        1..=self.len()
    }

    pub fn contains(&self, id: usize) -> bool {
        id >= 1 && id <= self.len()
    }

    pub(crate) fn check_id(&self, id: usize) -> Result<usize> {
        if self.contains(id) {
            Ok(id - 1)
        } else {
            Err(Error::UnknownIntersection(id))
        }
    }

    pub fn position(&self, id: usize) -> Result<Point> {
        Ok(self.intersections[self.check_id(id)?].position())
    }

    /// Neighbouring intersection ids with the connecting link, in id order.
    pub fn neighbors(&self, id: usize) -> impl Iterator<Item = (usize, &Link)> + '_ {
        self.adjacency[id - 1]
            .iter()
            .map(move |&(j, li)| (j + 1, &self.links[li]))
    }

    pub fn degree(&self, id: usize) -> usize {
        self.adjacency[id - 1].len()
    }

    /// Traffic demand attributed to an intersection: the mean traffic weight
    /// of its incident links, or 1 for an isolated intersection.
    pub fn node_weight(&self, id: usize) -> f64 {
        let adj = &self.adjacency[id - 1];
        if adj.is_empty() {
            return 1.0;
        }
        adj.iter()
            .map(|&(_, li)| self.links[li].traffic_weight)
            .sum::<f64>()
            / adj.len() as f64
    }

    fn component_of(&self, start: usize) -> Vec<usize> {
        let mut seen = vec![false; self.len()];
        let mut out = vec![start];
        seen[start] = true;
        let mut head = 0;
        while head < out.len() {
            let u = out[head];
            head += 1;
            for &(v, _) in &self.adjacency[u] {
                if !seen[v] {
                    seen[v] = true;
                    out.push(v);
                }
            }
        }
        out
    }

    /// Hop counts from `id` to every intersection (indexed by id - 1).
    pub fn hops_from(&self, id: usize) -> Result<Vec<Option<usize>>> {
        let start = self.check_id(id)?;
        let mut hops = vec![None; self.len()];
        hops[start] = Some(0);
        let mut queue = VecDeque::from([start]);
        while let Some(u) = queue.pop_front() {
            let h = hops[u].unwrap_or(0);
            for &(v, _) in &self.adjacency[u] {
                if hops[v].is_none() {
                    hops[v] = Some(h + 1);
                    queue.push_back(v);
                }
            }
        }
        Ok(hops)
    }

    /// Minimum number of links on any path from `a` to `b`.
    pub fn hop_count(&self, a: usize, b: usize) -> Result<usize> {
        self.check_id(b)?;
        self.hops_from(a)?[b - 1].ok_or(Error::NoPath { from: a, to: b })
    }

    /// Multi-source BFS. Each intersection is served by the site with the
    /// fewest hops, ties going to the earlier site in `sites`.
    pub fn nearest_site_hops(&self, sites: &[usize]) -> Result<(Vec<usize>, Vec<usize>)> {
        let mut owner = vec![usize::MAX; self.len()];
        let mut hops = vec![usize::MAX; self.len()];
        let mut queue = VecDeque::new();
        for (si, &s) in sites.iter().enumerate() {
            let u = self.check_id(s)?;
            if owner[u] != usize::MAX {
                return Err(invalid(format!("site {s} listed twice")));
            }
            owner[u] = si;
            hops[u] = 0;
            queue.push_back(u);
        }
        if sites.is_empty() {
            return Err(invalid("at least one site is required"));
        }
        while let Some(u) = queue.pop_front() {
            for &(v, _) in &self.adjacency[u] {
                if owner[v] == usize::MAX {
                    owner[v] = owner[u];
                    hops[v] = hops[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        Ok((owner, hops))
    }

    /// Multi-source Dijkstra over link lengths. Ties in distance go to the
    /// earlier site in `sites`.
    pub fn nearest_site_forest(&self, sites: &[usize]) -> Result<SiteForest> {
        if sites.is_empty() {
            return Err(invalid("at least one site is required"));
        }
        let n = self.len();
        let mut site_of = vec![usize::MAX; n];
        let mut distance = vec![f64::INFINITY; n];
        let mut parent = vec![None; n];
        let mut done = vec![false; n];
        let mut heap = BinaryHeap::new();
        for (si, &s) in sites.iter().enumerate() {
            let u = self.check_id(s)?;
            if site_of[u] != usize::MAX {
                return Err(invalid(format!("site {s} listed twice")));
            }
            site_of[u] = si;
            distance[u] = 0.0;
            heap.push(HeapEntry {
                dist: 0.0,
                source: si,
                node: u,
            });
        }
        while let Some(HeapEntry { dist, source, node }) = heap.pop() {
            if done[node] || source != site_of[node] || dist > distance[node] {
                continue;
            }
            done[node] = true;
            for &(v, li) in &self.adjacency[node] {
                if done[v] {
                    continue;
                }
                let nd = dist + self.links[li].length;
                if nd < distance[v] || (nd == distance[v] && source < site_of[v]) {
                    distance[v] = nd;
                    site_of[v] = source;
                    parent[v] = Some((node, self.links[li].length));
                    heap.push(HeapEntry {
                        dist: nd,
                        source,
                        node: v,
                    });
                }
            }
        }
        Ok(SiteForest {
            site_of,
            distance,
            parent,
        })
    }

    /// Shortest route by link length from `a` to `b`.
    pub fn shortest_path(&self, a: usize, b: usize) -> Result<Route> {
        self.check_id(b)?;
        let forest = self.nearest_site_forest(&[a])?;
        let mut u = b - 1;
        if !forest.distance[u].is_finite() {
            return Err(Error::NoPath { from: a, to: b });
        }
        let mut nodes = vec![b];
        let mut link_lengths = Vec::new();
        while let Some((p, len)) = forest.parent[u] {
            nodes.push(p + 1);
            link_lengths.push(len);
            u = p;
        }
        nodes.reverse();
        link_lengths.reverse();
        Ok(Route {
            nodes,
            link_lengths,
            length: forest.distance[b - 1],
        })
    }

    pub fn shortest_path_length(&self, a: usize, b: usize) -> Result<f64> {
        Ok(self.shortest_path(a, b)?.length)
    }

    /// Induced subnetwork on `ids`, relabelled 1.. in the order given.
    /// Fails if the induced graph is disconnected.
    pub fn subnetwork(&self, ids: &[usize]) -> Result<RoadNetwork> {
        let mut relabel = vec![0usize; self.len()];
        let mut nodes = Vec::with_capacity(ids.len());
        for (k, &id) in ids.iter().enumerate() {
            let u = self.check_id(id)?;
            relabel[u] = k + 1;
            let p = self.intersections[u].position();
            nodes.push(Intersection {
                id: k + 1,
                x: p.x,
                y: p.y,
            });
        }
        let links = self
            .links
            .iter()
            .filter(|l| relabel[l.from - 1] != 0 && relabel[l.to - 1] != 0)
            .map(|l| Link {
                from: relabel[l.from - 1],
                to: relabel[l.to - 1],
                ..l.clone()
            })
            .collect();
        let kind = if self.kind == TopologyKind::Line {
            TopologyKind::General
        } else {
            self.kind
        };
        RoadNetwork::new(nodes, links, self.connection_range, kind)
    }
}

/// Path network 1-2-...-N laid out along the x axis.
///
/// `link_lengths` holds either N-1 lengths or a single length used for every
/// link. The connection range is the longest link.
pub fn generate_line(n: usize, link_lengths: &[f64]) -> Result<RoadNetwork> {
    if n == 0 {
        return Err(invalid("a line needs at least one intersection"));
    }
    let lengths: Vec<f64> = match link_lengths.len() {
        1 => vec![link_lengths[0]; n - 1],
        m if m == n - 1 => link_lengths.to_vec(),
        0 if n == 1 => Vec::new(),
        m => {
            return Err(invalid(format!(
                "expected {} link lengths (or one to replicate), got {m}",
                n - 1
            )))
        }
    };
    if let Some(bad) = lengths.iter().find(|d| !(d.is_finite() && **d > 0.0)) {
        return Err(invalid(format!("link length must be positive, got {bad}")));
    }
    let mut x = 0.0;
    let mut nodes = vec![Intersection { id: 1, x, y: 0.0 }];
    for (i, d) in lengths.iter().enumerate() {
        x += d;
        nodes.push(Intersection {
            id: i + 2,
            x,
            y: 0.0,
        });
    }
    let links = lengths
        .iter()
        .enumerate()
        .map(|(i, &d)| Link::new(i + 1, i + 2, d))
        .collect();
    let range = lengths.iter().cloned().fold(f64::NAN, f64::max);
    let range = if range.is_nan() { 1.0 } else { range };
    RoadNetwork::new(nodes, links, range, TopologyKind::Line)
}

/// Rectangular grid with `rows` x `cols` intersections spaced `spacing`
/// meters apart; id = row * cols + col + 1.
pub fn generate_grid(rows: usize, cols: usize, spacing: f64) -> Result<RoadNetwork> {
    if rows == 0 || cols == 0 {
        return Err(invalid("grid dimensions must be positive"));
    }
    if !(spacing.is_finite() && spacing > 0.0) {
        return Err(invalid(format!(
            "grid spacing must be positive, got {spacing}"
        )));
    }
    let id = |r: usize, c: usize| r * cols + c + 1;
    let mut nodes = Vec::with_capacity(rows * cols);
    let mut links = Vec::new();
    for r in 0..rows {
        for c in 0..cols {
            nodes.push(Intersection {
                id: id(r, c),
                x: c as f64 * spacing,
                y: r as f64 * spacing,
            });
            if c + 1 < cols {
                links.push(Link::new(id(r, c), id(r, c + 1), spacing));
            }
            if r + 1 < rows {
                links.push(Link::new(id(r, c), id(r + 1, c), spacing));
            }
        }
    }
    RoadNetwork::new(nodes, links, spacing, TopologyKind::Grid)
}

/// Output of [`generate_poisson`].
#[derive(Clone, Debug)]
pub struct PoissonNetwork {
    pub network: RoadNetwork,
    /// Number of points drawn before reduction to the largest component.
    pub sampled: usize,
    /// True when the draw was disconnected and only the largest component kept.
    pub truncated: bool,
}

/// Uniform points from a homogeneous Poisson process on the rectangle.
pub fn poisson_points<R: Rng + ?Sized>(
    width: f64,
    height: f64,
    intensity: f64,
    rng: &mut R,
) -> Result<Vec<Point>> {
    if !(width > 0.0 && height > 0.0 && width.is_finite() && height.is_finite()) {
        return Err(invalid("region dimensions must be positive"));
    }
    if !(intensity.is_finite() && intensity > 0.0) {
        return Err(invalid(format!(
            "intensity must be positive, got {intensity}"
        )));
    }
    let mean = intensity * width * height;
    let count = Poisson::new(mean)
        .map_err(|e| invalid(format!("poisson mean {mean}: {e}")))?
        .sample(rng) as usize;
    Ok((0..count)
        .map(|_| Point::new(rng.random::<f64>() * width, rng.random::<f64>() * height))
        .collect())
}

/// Random geometric road network: Poisson-distributed intersections, linked
/// whenever they lie within `connection_range` of each other.
pub fn generate_poisson(
    width: f64,
    height: f64,
    intensity: f64,
    connection_range: f64,
    seed: u64,
) -> Result<PoissonNetwork> {
    if !(connection_range.is_finite() && connection_range > 0.0) {
        return Err(invalid("connection_range must be positive"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let points = poisson_points(width, height, intensity, &mut rng)?;
    if points.is_empty() {
        return Err(Error::EmptyNetwork);
    }
    let n = points.len();
    let mut adjacency = vec![Vec::new(); n];
    let mut pairs = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let d = points[i].distance(&points[j]);
            if d > 0.0 && d <= connection_range {
                adjacency[i].push(j);
                adjacency[j].push(i);
                pairs.push((i, j, d));
            }
        }
    }

    // largest connected component, ties to the one holding the smallest index
    let mut comp = vec![usize::MAX; n];
    let mut best: (usize, usize) = (0, 0); // (size, component id)
    let mut n_comp = 0;
    for s in 0..n {
        if comp[s] != usize::MAX {
            continue;
        }
        let mut stack = vec![s];
        comp[s] = n_comp;
        let mut size = 0;
        while let Some(u) = stack.pop() {
            size += 1;
            for &v in &adjacency[u] {
                if comp[v] == usize::MAX {
                    comp[v] = n_comp;
                    stack.push(v);
                }
            }
        }
        if size > best.0 {
            best = (size, n_comp);
        }
        n_comp += 1;
    }
    let keep = best.1;
    let mut relabel = vec![0usize; n];
    let mut nodes = Vec::new();
    for (i, p) in points.iter().enumerate() {
        if comp[i] == keep {
            relabel[i] = nodes.len() + 1;
            nodes.push(Intersection {
                id: nodes.len() + 1,
                x: p.x,
                y: p.y,
            });
        }
    }
    let links = pairs
        .into_iter()
        .filter(|&(i, _, _)| comp[i] == keep)
        .map(|(i, j, d)| Link::new(relabel[i], relabel[j], d))
        .collect();
    let network = RoadNetwork::new(nodes, links, connection_range, TopologyKind::General)?;
    Ok(PoissonNetwork {
        truncated: n_comp > 1,
        sampled: n,
        network,
    })
}
