use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use thiserror::Error;

use crate::name::Name;
use crate::packet::Strategy;
use crate::sim::SimConfig;
use crate::time::SimTime;
use crate::topo::{self, Link, NodeId, NodeInfo, NodeKind, TopoParams, Topology};

#[derive(Error, Debug)]
pub enum ScenarioError {
    #[error("line {0}: expected 'key = value', got '{1}'")]
    Syntax(usize, String),
    #[error("line {0}: unknown key '{1}'")]
    UnknownKey(usize, String),
    #[error("line {0}: bad value for '{1}': {2}")]
    BadValue(usize, String, String),
    #[error("unknown node '{0}' in {1} directive")]
    UnknownNode(String, &'static str),
    #[error("no link between '{0}' and '{1}'")]
    NoSuchLink(String, String),
    #[error("explicit directive '{0}' requires 'topology = explicit'")]
    NotExplicit(&'static str),
    #[error(transparent)]
    Topo(#[from] topo::TopoError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum TopoMode {
    Generated,
    Explicit,
}

/// Parsed scenario: simulation knobs plus either generator parameters or an
/// explicit topology, and a failure schedule by node names.
#[derive(Clone, Debug)]
pub struct Scenario {
    pub sim: SimConfig,
    pub params: TopoParams,
    mode: TopoMode,
    nodes: Vec<NodeInfo>,
    links: Vec<(String, String, SimTime)>,
    produces: Vec<(String, Name)>,
    consumes: Vec<(String, Name)>,
    fails: Vec<(String, String, SimTime)>,
}

impl Default for Scenario {
    fn default() -> Scenario {
        Scenario {
            sim: SimConfig::default(),
            params: TopoParams::default(),
            mode: TopoMode::Generated,
            nodes: Vec::new(),
            links: Vec::new(),
            produces: Vec::new(),
            consumes: Vec::new(),
            fails: Vec::new(),
        }
    }
}

fn parse_num<T: std::str::FromStr>(
    lineno: usize,
    key: &str,
    value: &str,
) -> Result<T, ScenarioError>
where
    T::Err: std::fmt::Display,
{
    value
        .parse()
        .map_err(|e: T::Err| ScenarioError::BadValue(lineno, key.to_string(), e.to_string()))
}

fn parse_secs(lineno: usize, key: &str, value: &str) -> Result<SimTime, ScenarioError> {
    Ok(SimTime::from_secs_f64(parse_num::<f64>(lineno, key, value)?))
}

fn parse_millis(lineno: usize, key: &str, value: &str) -> Result<SimTime, ScenarioError> {
    Ok(SimTime::from_secs_f64(
        parse_num::<f64>(lineno, key, value)? / 1000.0,
    ))
}

impl Scenario {
    pub fn parse(text: &str) -> Result<Scenario, ScenarioError> {
        let mut sc = Scenario::default();
        for (i, raw) in text.lines().enumerate() {
            let lineno = i + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(ScenarioError::Syntax(lineno, line.to_string()));
            };
            let key = key.trim();
            let value = value.trim();
            let bad = |what: &str| {
                ScenarioError::BadValue(lineno, key.to_string(), what.to_string())
            };
            match key {
                "strategy" => {
                    sc.sim.strategy = value.parse::<Strategy>().map_err(|e| bad(&e))?;
                }
                "seed" => sc.sim.seed = parse_num(lineno, key, value)?,
                "duration" => sc.sim.duration = parse_secs(lineno, key, value)?,
                "rate" => sc.sim.rate = parse_num(lineno, key, value)?,
                "start_spread" => sc.sim.start_spread = parse_secs(lineno, key, value)?,
                "tmp_ms" => sc.sim.tmp_window = parse_millis(lineno, key, value)?,
                "lifetime_ms" => sc.sim.interest_lifetime = parse_millis(lineno, key, value)?,
                "data_fanout" => sc.sim.data_fanout = parse_num(lineno, key, value)?,
                "rto_ms" => sc.sim.rto = parse_millis(lineno, key, value)?,
                "discovery_timer_ms" => {
                    sc.sim.discovery_timer = parse_millis(lineno, key, value)?
                }
                "max_alt_attempts" => sc.sim.max_alt_attempts = parse_num(lineno, key, value)?,
                "bfd_interval_ms" => sc.sim.bfd_interval = parse_millis(lineno, key, value)?,
                "bfd_dead_multiplier" => {
                    sc.sim.bfd_dead_multiplier = parse_num(lineno, key, value)?
                }
                "core_routers" => sc.params.core_routers = parse_num(lineno, key, value)?,
                "edge_routers" => sc.params.edge_routers = parse_num(lineno, key, value)?,
                "consumers" => sc.params.consumers = parse_num(lineno, key, value)?,
                "producers" => sc.params.producers = parse_num(lineno, key, value)?,
                "prefixes" => sc.params.prefixes = parse_num(lineno, key, value)?,
                "parallel_links" => sc.params.parallel_links = parse_num(lineno, key, value)?,
                "link_delay_ms" => sc.params.link_delay = parse_millis(lineno, key, value)?,
                "topology" => {
                    sc.mode = match value {
                        "generated" => TopoMode::Generated,
                        "explicit" => TopoMode::Explicit,
                        other => return Err(bad(&format!("unknown topology '{other}'"))),
                    }
                }
                "node" => {
                    let mut it = value.split_whitespace();
                    let (Some(name), Some(kind)) = (it.next(), it.next()) else {
                        return Err(bad("expected '<name> <kind>'"));
                    };
                    let kind = match kind {
                        "core" => NodeKind::Core,
                        "edge" => NodeKind::Edge,
                        "consumer" => NodeKind::Consumer,
                        "producer" => NodeKind::Producer,
                        other => return Err(bad(&format!("unknown node kind '{other}'"))),
                    };
                    sc.nodes.push(NodeInfo {
                        name: name.to_string(),
                        kind,
                    });
                }
                "link" => {
                    let parts: Vec<&str> = value.split_whitespace().collect();
                    if parts.len() < 2 {
                        return Err(bad("expected '<a> <b> [delay_ms]'"));
                    }
                    let delay = if parts.len() > 2 {
                        parse_millis(lineno, key, parts[2])?
                    } else {
                        sc.params.link_delay
                    };
                    sc.links
                        .push((parts[0].to_string(), parts[1].to_string(), delay));
                }
                "produce" => {
                    let Some((node, prefix)) = value.split_once(char::is_whitespace) else {
                        return Err(bad("expected '<node> <prefix>'"));
                    };
                    let prefix: Name = prefix.trim().parse().map_err(|e| bad(&format!("{e}")))?;
                    sc.produces.push((node.to_string(), prefix));
                }
                "consume" => {
                    let Some((node, prefix)) = value.split_once(char::is_whitespace) else {
                        return Err(bad("expected '<node> <prefix>'"));
                    };
                    let prefix: Name = prefix.trim().parse().map_err(|e| bad(&format!("{e}")))?;
                    sc.consumes.push((node.to_string(), prefix));
                }
                "fail" => {
                    let parts: Vec<&str> = value.split_whitespace().collect();
                    if parts.len() != 3 {
                        return Err(bad("expected '<a> <b> <time_s>'"));
                    }
                    let at = parse_secs(lineno, key, parts[2])?;
                    sc.fails
                        .push((parts[0].to_string(), parts[1].to_string(), at));
                }
                other => return Err(ScenarioError::UnknownKey(lineno, other.to_string())),
            }
        }
        Ok(sc)
    }

    /// Materialize the topology and finished sim config. `seed` and
    /// `strategy` overrides take precedence over the file.
    pub fn realize(
        &self,
        seed: Option<u64>,
        strategy: Option<Strategy>,
    ) -> Result<(SimConfig, Topology), ScenarioError> {
        let mut sim = self.sim.clone();
        if let Some(s) = seed {
            sim.seed = s;
        }
        if let Some(s) = strategy {
            sim.strategy = s;
        }
        let topo = match self.mode {
            TopoMode::Generated => {
                let mut rng = ChaCha12Rng::seed_from_u64(sim.seed);
                topo::generate(&self.params, &mut rng)?
            }
            TopoMode::Explicit => self.build_explicit()?,
        };
        sim.failures.clear();
        for (a, b, at) in &self.fails {
            let na = topo
                .node_by_name(a)
                .ok_or_else(|| ScenarioError::UnknownNode(a.clone(), "fail"))?;
            let nb = topo
                .node_by_name(b)
                .ok_or_else(|| ScenarioError::UnknownNode(b.clone(), "fail"))?;
            let link = topo
                .find_link(na, nb)
                .ok_or_else(|| ScenarioError::NoSuchLink(a.clone(), b.clone()))?;
            sim.failures.push((link, *at));
        }
        Ok((sim, topo))
    }

    fn build_explicit(&self) -> Result<Topology, ScenarioError> {
        if self.nodes.is_empty() {
            return Err(ScenarioError::NotExplicit("node"));
        }
        let ids: BTreeMap<&str, NodeId> = self
            .nodes
            .iter()
            .enumerate()
            .map(|(i, n)| (n.name.as_str(), NodeId(i as u32)))
            .collect();
        let resolve = |name: &str, what: &'static str| {
            ids.get(name)
                .copied()
                .ok_or_else(|| ScenarioError::UnknownNode(name.to_string(), what))
        };
        let mut links = Vec::new();
        for (a, b, delay) in &self.links {
            links.push(Link {
                a: resolve(a, "link")?,
                b: resolve(b, "link")?,
                delay: *delay,
            });
        }
        let mut producer_prefixes: Vec<(NodeId, Vec<Name>)> = Vec::new();
        for (node, prefix) in &self.produces {
            let id = resolve(node, "produce")?;
            match producer_prefixes.iter_mut().find(|(n, _)| *n == id) {
                Some((_, ps)) => ps.push(prefix.clone()),
                None => producer_prefixes.push((id, vec![prefix.clone()])),
            }
        }
        let mut consumer_prefixes = Vec::new();
        for (node, prefix) in &self.consumes {
            consumer_prefixes.push((resolve(node, "consume")?, prefix.clone()));
        }
        Ok(Topology {
            nodes: self.nodes.clone(),
            links,
            producer_prefixes,
            consumer_prefixes,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const EXPLICIT: &str = "
# square topology with a failure
strategy = self-learning
seed = 3
duration = 12
rate = 0
start_spread = 0
topology = explicit
node = c0 consumer
node = r1 edge
node = r2 core
node = p1 producer
link = c0 r1 10
link = r1 r2 10
link = r2 p1 10
produce = p1 /p1
consume = c0 /p1/s0
fail = r1 r2 8
";

    #[test]
    fn parses_explicit_scenario() {
        let sc = Scenario::parse(EXPLICIT).unwrap();
        assert_eq!(sc.sim.strategy, Strategy::SelfLearning);
        assert_eq!(sc.sim.duration, SimTime::from_secs(12));
        assert_eq!(sc.sim.rate, 0.0);
        let (sim, topo) = sc.realize(None, Some(Strategy::Samba)).unwrap();
        assert_eq!(sim.strategy, Strategy::Samba); // override wins
        assert_eq!(topo.nodes.len(), 4);
        assert_eq!(topo.links.len(), 3);
        assert_eq!(sim.failures.len(), 1);
        assert_eq!(sim.failures[0].1, SimTime::from_secs(8));
    }

    #[test]
    fn parses_generated_scenario() {
        let sc = Scenario::parse(
            "topology = generated\nconsumers = 10\nproducers = 4\nseed = 7\n",
        )
        .unwrap();
        let (sim, topo) = sc.realize(Some(9), None).unwrap();
        assert_eq!(sim.seed, 9);
        assert_eq!(topo.consumer_prefixes.len(), 10);
        assert_eq!(topo.producer_prefixes.len(), 4);
    }

    #[test]
    fn rejects_garbage() {
        assert!(matches!(
            Scenario::parse("not a directive\n"),
            Err(ScenarioError::Syntax(1, _))
        ));
        assert!(matches!(
            Scenario::parse("frobnicate = 3\n"),
            Err(ScenarioError::UnknownKey(1, _))
        ));
        assert!(matches!(
            Scenario::parse("seed = banana\n"),
            Err(ScenarioError::BadValue(1, _, _))
        ));
        let sc = Scenario::parse("topology = explicit\nfail = x y 1\n").unwrap();
        assert!(sc.realize(None, None).is_err());
    }

    #[test]
    fn explicit_runs_end_to_end() {
        let sc = Scenario::parse(EXPLICIT).unwrap();
        let (sim, topo) = sc.realize(None, None).unwrap();
        let report = crate::sim::Sim::new(sim, topo).run();
        // Window-limited consumer delivers plenty before the 8 s failure.
        assert!(report.delivered_total > 100, "{}", report.delivered_total);
    }
}
