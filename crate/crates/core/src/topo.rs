use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::Rng;
use thiserror::Error;

use crate::name::Name;
use crate::time::SimTime;

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct NodeId(pub u32);

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct LinkId(pub u32);

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum NodeKind {
    Core,
    Edge,
    Consumer,
    Producer,
}

impl NodeKind {
    pub fn is_router(self) -> bool {
        matches!(self, NodeKind::Core | NodeKind::Edge)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            NodeKind::Core => "core",
            NodeKind::Edge => "edge",
            NodeKind::Consumer => "consumer",
            NodeKind::Producer => "producer",
        }
    }
}

#[derive(Clone, Debug)]
pub struct NodeInfo {
    pub name: String,
    pub kind: NodeKind,
}

#[derive(Clone, Debug)]
pub struct Link {
    pub a: NodeId,
    pub b: NodeId,
    pub delay: SimTime,
}

/// Network graph plus workload attachment: which producer registers which
/// prefixes, and which prefix each consumer requests.
#[derive(Clone, Debug, Default)]
pub struct Topology {
    pub nodes: Vec<NodeInfo>,
    pub links: Vec<Link>,
    /// Producer node -> prefixes it registers and serves.
    pub producer_prefixes: Vec<(NodeId, Vec<Name>)>,
    /// Consumer node -> prefix it requests (at most one per consumer).
    pub consumer_prefixes: Vec<(NodeId, Name)>,
}

#[derive(Error, Debug)]
pub enum TopoError {
    #[error("need at least 4 core routers for a 3-regular core, got {0}")]
    TooFewCore(usize),
    #[error("need at least 1 edge router, got {0}")]
    NoEdge(usize),
    #[error("could not generate a connected simple core graph after {0} attempts")]
    GenerationFailed(usize),
    #[error("producers must serve at least as many prefixes as producers: M={m} < P={p}")]
    TooFewPrefixes { m: usize, p: usize },
    #[error("duplicate node name '{0}'")]
    DuplicateNode(String),
    #[error("unknown node '{0}'")]
    UnknownNode(String),
}

#[derive(Clone, Debug)]
pub struct TopoParams {
    pub core_routers: usize,
    pub edge_routers: usize,
    pub consumers: usize,
    pub producers: usize,
    /// Total prefixes (defaults to max(consumers, producers) when 0).
    pub prefixes: usize,
    /// Parallel links per connected router pair.
    pub parallel_links: usize,
    pub link_delay: SimTime,
}

impl Default for TopoParams {
    fn default() -> TopoParams {
        TopoParams {
            core_routers: 21,
            edge_routers: 16,
            consumers: 100,
            producers: 4,
            prefixes: 0,
            parallel_links: 1,
            link_delay: SimTime::from_millis(10),
        }
    }
}

impl TopoParams {
    pub fn effective_prefixes(&self) -> usize {
        if self.prefixes == 0 {
            self.consumers.max(self.producers)
        } else {
            self.prefixes
        }
    }
}

impl Topology {
    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn node_by_name(&self, name: &str) -> Option<NodeId> {
        self.nodes
            .iter()
            .position(|n| n.name == name)
            .map(|i| NodeId(i as u32))
    }

    pub fn kind(&self, node: NodeId) -> NodeKind {
        self.nodes[node.0 as usize].kind
    }

    pub fn name(&self, node: NodeId) -> &str {
        &self.nodes[node.0 as usize].name
    }

    pub fn router_ids(&self, core_only: bool) -> Vec<NodeId> {
        self.nodes
            .iter()
            .enumerate()
            .filter(|(_, n)| {
                if core_only {
                    n.kind == NodeKind::Core
                } else {
                    n.kind.is_router()
                }
            })
            .map(|(i, _)| NodeId(i as u32))
            .collect()
    }

    /// Link between two named nodes (first parallel one), if any.
    pub fn find_link(&self, a: NodeId, b: NodeId) -> Option<LinkId> {
        self.links
            .iter()
            .position(|l| (l.a == a && l.b == b) || (l.a == b && l.b == a))
            .map(|i| LinkId(i as u32))
    }

    /// All parallel links between two nodes.
    pub fn links_between(&self, a: NodeId, b: NodeId) -> Vec<LinkId> {
        self.links
            .iter()
            .enumerate()
            .filter(|(_, l)| (l.a == a && l.b == b) || (l.a == b && l.b == a))
            .map(|(i, _)| LinkId(i as u32))
            .collect()
    }

    fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.nodes.len()];
        for l in &self.links {
            adj[l.a.0 as usize].push(l.b.0 as usize);
            adj[l.b.0 as usize].push(l.a.0 as usize);
        }
        adj
    }

    pub fn is_connected(&self) -> bool {
        if self.nodes.is_empty() {
            return true;
        }
        let adj = self.adjacency();
        let mut seen = vec![false; self.nodes.len()];
        let mut stack = vec![0usize];
        seen[0] = true;
        let mut count = 1;
        while let Some(n) = stack.pop() {
            for &m in &adj[n] {
                if !seen[m] {
                    seen[m] = true;
                    count += 1;
                    stack.push(m);
                }
            }
        }
        count == self.nodes.len()
    }

    fn bfs_dist(&self, from: usize, adj: &[Vec<usize>]) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.nodes.len()];
        let mut queue = std::collections::VecDeque::new();
        dist[from] = 0;
        queue.push_back(from);
        while let Some(n) = queue.pop_front() {
            for &m in &adj[n] {
                if dist[m] == usize::MAX {
                    dist[m] = dist[n] + 1;
                    queue.push_back(m);
                }
            }
        }
        dist
    }

    /// Access router (first adjacent edge/core router) of a host node.
    pub fn access_router(&self, host: NodeId) -> Option<NodeId> {
        for l in &self.links {
            if l.a == host && self.kind(l.b).is_router() {
                return Some(l.b);
            }
            if l.b == host && self.kind(l.a).is_router() {
                return Some(l.a);
            }
        }
        None
    }

    /// Mean shortest-path hop count between consumer and producer access
    /// routers, over all consumer/producer pairs. Host attachment links are
    /// not counted.
    pub fn mean_consumer_producer_hops(&self) -> f64 {
        let adj = self.adjacency();
        let producer_access: Vec<usize> = self
            .producer_prefixes
            .iter()
            .filter_map(|(p, _)| self.access_router(*p))
            .map(|r| r.0 as usize)
            .collect();
        let mut total = 0usize;
        let mut pairs = 0usize;
        for (c, _) in &self.consumer_prefixes {
            let Some(ca) = self.access_router(*c) else {
                continue;
            };
            let dist = self.bfs_dist(ca.0 as usize, &adj);
            for &pa in &producer_access {
                if dist[pa] != usize::MAX {
                    total += dist[pa];
                    pairs += 1;
                }
            }
        }
        if pairs == 0 {
            0.0
        } else {
            total as f64 / pairs as f64
        }
    }

    /// Plain-text listing (also valid scenario topology directives).
    pub fn render(&self) -> String {
        let mut out = String::new();
        out.push_str("topology = explicit\n");
        for n in &self.nodes {
            out.push_str(&format!("node = {} {}\n", n.name, n.kind.as_str()));
        }
        for l in &self.links {
            out.push_str(&format!(
                "link = {} {} {}\n",
                self.name(l.a),
                self.name(l.b),
                l.delay.as_millis_f64()
            ));
        }
        for (p, prefixes) in &self.producer_prefixes {
            for pre in prefixes {
                out.push_str(&format!("produce = {} {}\n", self.name(*p), pre));
            }
        }
        for (c, prefix) in &self.consumer_prefixes {
            out.push_str(&format!("consume = {} {}\n", self.name(*c), prefix));
        }
        out
    }
}

/// Generate the service-provider style graph: a 3-regular core (one node of
/// degree 4 when 3*core is odd), edge routers attached to 1..=3 cores, and
/// one attachment link per host. Prefixes are grouped into per-producer
/// namespaces: producer j registers `/pj` and serves `/pj/s<i>`.
pub fn generate(params: &TopoParams, rng: &mut impl Rng) -> Result<Topology, TopoError> {
    if params.core_routers < 4 {
        return Err(TopoError::TooFewCore(params.core_routers));
    }
    if params.edge_routers == 0 {
        return Err(TopoError::NoEdge(params.edge_routers));
    }
    let m = params.effective_prefixes();
    if m < params.producers {
        return Err(TopoError::TooFewPrefixes {
            m,
            p: params.producers,
        });
    }

    let mut nodes = Vec::new();
    for i in 0..params.core_routers {
        nodes.push(NodeInfo {
            name: format!("core{i}"),
            kind: NodeKind::Core,
        });
    }
    for i in 0..params.edge_routers {
        nodes.push(NodeInfo {
            name: format!("edge{i}"),
            kind: NodeKind::Edge,
        });
    }

    let core_pairs = regular_core_pairs(params.core_routers, rng)?;

    let mut links = Vec::new();
    let push_router_link = |links: &mut Vec<Link>, a: usize, b: usize| {
        for _ in 0..params.parallel_links.max(1) {
            links.push(Link {
                a: NodeId(a as u32),
                b: NodeId(b as u32),
                delay: params.link_delay,
            });
        }
    };
    for &(a, b) in &core_pairs {
        push_router_link(&mut links, a, b);
    }

    // Edge routers: one to three distinct core uplinks each.
    for e in 0..params.edge_routers {
        let edge_idx = params.core_routers + e;
        let uplinks = rng.gen_range(1..=3usize.min(params.core_routers));
        let mut cores: Vec<usize> = (0..params.core_routers).collect();
        cores.shuffle(rng);
        for &c in cores.iter().take(uplinks) {
            push_router_link(&mut links, c, edge_idx);
        }
    }

    // Hosts: consumers and producers, attached uniformly at random to one
    // edge router each.
    let edge_base = params.core_routers;
    let mut consumer_nodes = Vec::new();
    for i in 0..params.consumers {
        let id = nodes.len();
        nodes.push(NodeInfo {
            name: format!("c{i}"),
            kind: NodeKind::Consumer,
        });
        let edge = edge_base + rng.gen_range(0..params.edge_routers);
        links.push(Link {
            a: NodeId(id as u32),
            b: NodeId(edge as u32),
            delay: params.link_delay,
        });
        consumer_nodes.push(NodeId(id as u32));
    }
    let mut producer_nodes = Vec::new();
    for i in 0..params.producers {
        let id = nodes.len();
        nodes.push(NodeInfo {
            name: format!("p{i}"),
            kind: NodeKind::Producer,
        });
        let edge = edge_base + rng.gen_range(0..params.edge_routers);
        links.push(Link {
            a: NodeId(id as u32),
            b: NodeId(edge as u32),
            delay: params.link_delay,
        });
        producer_nodes.push(NodeId(id as u32));
    }

    // Prefix i lives in the namespace of a producer picked round-robin over
    // a per-seed random producer order.
    let mut order: Vec<usize> = (0..params.producers).collect();
    order.shuffle(rng);
    let producer_prefixes: Vec<(NodeId, Vec<Name>)> = producer_nodes
        .iter()
        .enumerate()
        .map(|(j, &p)| {
            let ns: Name = format!("/p{j}").parse().unwrap();
            (p, vec![ns])
        })
        .collect();
    let mut consumer_prefixes = Vec::new();
    let mut assigned: BTreeMap<usize, Name> = BTreeMap::new();
    for i in 0..m {
        let producer_idx = order[i % params.producers];
        let prefix: Name = format!("/p{producer_idx}/s{i}").parse().unwrap();
        assigned.insert(i, prefix);
    }
    for (i, &c) in consumer_nodes.iter().enumerate() {
        consumer_prefixes.push((c, assigned[&(i % m)].clone()));
    }
    let topo = Topology {
        nodes,
        links,
        producer_prefixes,
        consumer_prefixes,
    };
    debug_assert!(topo.is_connected());
    Ok(topo)
}

/// 3-regular simple connected graph via the pairing model with rejection.
/// When 3*n is odd, node 0 gets degree 4.
fn regular_core_pairs(n: usize, rng: &mut impl Rng) -> Result<Vec<(usize, usize)>, TopoError> {
    const MAX_ATTEMPTS: usize = 10_000;
    let mut degrees = vec![3usize; n];
    if (3 * n) % 2 == 1 {
        degrees[0] = 4;
    }
    'attempt: for _ in 0..MAX_ATTEMPTS {
        let mut stubs = Vec::new();
        for (i, &d) in degrees.iter().enumerate() {
            stubs.extend(std::iter::repeat(i).take(d));
        }
        stubs.shuffle(rng);
        let mut pairs = Vec::with_capacity(stubs.len() / 2);
        let mut seen = std::collections::HashSet::new();
        for chunk in stubs.chunks(2) {
            let (a, b) = (chunk[0], chunk[1]);
            if a == b || !seen.insert((a.min(b), a.max(b))) {
                continue 'attempt;
            }
            pairs.push((a, b));
        }
        // Connectivity check on the candidate core.
        let mut adj = vec![Vec::new(); n];
        for &(a, b) in &pairs {
            adj[a].push(b);
            adj[b].push(a);
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0usize];
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = stack.pop() {
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    stack.push(w);
                }
            }
        }
        if count == n {
            return Ok(pairs);
        }
    }
    Err(TopoError::GenerationFailed(MAX_ATTEMPTS))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha12Rng;

    fn gen(params: &TopoParams, seed: u64) -> Topology {
        generate(params, &mut ChaCha12Rng::seed_from_u64(seed)).unwrap()
    }

    #[test]
    fn core_degrees() {
        let params = TopoParams::default();
        let topo = gen(&params, 1);
        let mut deg = vec![0usize; params.core_routers];
        for l in &topo.links {
            if topo.kind(l.a) == NodeKind::Core && topo.kind(l.b) == NodeKind::Core {
                deg[l.a.0 as usize] += 1;
                deg[l.b.0 as usize] += 1;
            }
        }
        let fours = deg.iter().filter(|&&d| d == 4).count();
        let threes = deg.iter().filter(|&&d| d == 3).count();
        assert_eq!(fours, 1); // 3*21 is odd
        assert_eq!(threes, params.core_routers - 1);
    }

    #[test]
    fn connected_and_attached() {
        let topo = gen(&TopoParams::default(), 7);
        assert!(topo.is_connected());
        for (c, _) in &topo.consumer_prefixes {
            assert_eq!(topo.kind(topo.access_router(*c).unwrap()), NodeKind::Edge);
        }
        for (p, _) in &topo.producer_prefixes {
            assert_eq!(topo.kind(topo.access_router(*p).unwrap()), NodeKind::Edge);
        }
    }

    #[test]
    fn deterministic_per_seed() {
        let a = gen(&TopoParams::default(), 42);
        let b = gen(&TopoParams::default(), 42);
        assert_eq!(a.render(), b.render());
        let c = gen(&TopoParams::default(), 43);
        assert_ne!(a.render(), c.render());
    }

    #[test]
    fn parallel_links() {
        let params = TopoParams {
            parallel_links: 5,
            consumers: 2,
            producers: 2,
            ..TopoParams::default()
        };
        let topo = gen(&params, 3);
        // Router-router multiplicity is exactly 5.
        let mut mult: BTreeMap<(u32, u32), usize> = BTreeMap::new();
        for l in &topo.links {
            if topo.kind(l.a).is_router() && topo.kind(l.b).is_router() {
                let key = (l.a.0.min(l.b.0), l.a.0.max(l.b.0));
                *mult.entry(key).or_default() += 1;
            }
        }
        assert!(mult.values().all(|&m| m == 5));
    }

    #[test]
    fn prefix_assignment_round_robin() {
        let params = TopoParams {
            consumers: 10,
            producers: 4,
            ..TopoParams::default()
        };
        let topo = gen(&params, 11);
        assert_eq!(topo.consumer_prefixes.len(), 10);
        // Every consumer prefix sits under some producer namespace.
        for (_, prefix) in &topo.consumer_prefixes {
            assert!(topo
                .producer_prefixes
                .iter()
                .any(|(_, regs)| regs.iter().any(|r| r.is_prefix_of(prefix))));
        }
        // Each namespace serves either 2 or 3 of the 10 prefixes.
        for (_, regs) in &topo.producer_prefixes {
            let count = topo
                .consumer_prefixes
                .iter()
                .filter(|(_, p)| regs[0].is_prefix_of(p))
                .count();
            assert!((2..=3).contains(&count), "count {count}");
        }
    }

    #[test]
    fn error_cases() {
        let mut rng = ChaCha12Rng::seed_from_u64(0);
        assert!(matches!(
            generate(
                &TopoParams {
                    core_routers: 3,
                    ..TopoParams::default()
                },
                &mut rng
            ),
            Err(TopoError::TooFewCore(3))
        ));
        assert!(matches!(
            generate(
                &TopoParams {
                    consumers: 2,
                    producers: 4,
                    prefixes: 2,
                    ..TopoParams::default()
                },
                &mut rng
            ),
            Err(TopoError::TooFewPrefixes { m: 2, p: 4 })
        ));
    }

    #[test]
    fn path_length_in_expected_band() {
        let mut total = 0.0;
        for seed in 0..20 {
            let topo = gen(&TopoParams::default(), seed);
            total += topo.mean_consumer_producer_hops();
        }
        let mean = total / 20.0;
        assert!(
            (2.5..=4.5).contains(&mean),
            "mean access-router distance {mean}"
        );
    }
}
