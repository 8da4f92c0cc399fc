use std::collections::{BTreeMap, BinaryHeap};
use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

use crate::apps::{AppCmd, AppTimer, ConsumerApp, ConsumerConfig, ProducerApp, ProducerReply};
use crate::engine::{Action, Engine, EngineConfig, FaceMeta};
use crate::fib::FaceId;
use crate::name::{Name, TokenMode};
use crate::packet::{Packet, Strategy};
use crate::time::SimTime;
use crate::topo::{LinkId, NodeId, NodeKind, Topology};

#[derive(Clone, Debug)]
pub struct SimConfig {
    pub strategy: Strategy,
    pub seed: u64,
    pub duration: SimTime,
    /// Interests per second per consumer; 0 means window-limited.
    pub rate: f64,
    /// Consumer start times drawn uniformly in [0, spread].
    pub start_spread: SimTime,
    pub tmp_window: SimTime,
    pub interest_lifetime: SimTime,
    pub data_fanout: usize,
    pub rto: SimTime,
    pub discovery_timer: SimTime,
    pub max_alt_attempts: u32,
    pub bfd_interval: SimTime,
    pub bfd_dead_multiplier: u32,
    /// Scheduled link failures.
    pub failures: Vec<(LinkId, SimTime)>,
    pub trace: bool,
}

impl Default for SimConfig {
    fn default() -> SimConfig {
        SimConfig {
            strategy: Strategy::Samba,
            seed: 1,
            duration: SimTime::from_secs(60),
            rate: 8.0,
            start_spread: SimTime::from_secs(50),
            tmp_window: SimTime::from_millis(50),
            interest_lifetime: SimTime::from_secs(2),
            // Discovery data retraces a single reverse path by default;
            // scenarios that want disjoint backup paths raise this.
            data_fanout: 1,
            rto: SimTime::from_secs(1),
            discovery_timer: SimTime::from_secs(1),
            max_alt_attempts: 3,
            bfd_interval: SimTime::from_millis(5),
            bfd_dead_multiplier: 3,
            failures: Vec::new(),
            trace: false,
        }
    }
}

#[derive(Clone, Debug)]
enum Event {
    Arrival {
        node: NodeId,
        face: FaceId,
        packet: Packet,
    },
    EngineTimer {
        node: NodeId,
        name: Name,
    },
    AppStart {
        node: NodeId,
    },
    AppTimer {
        node: NodeId,
        timer: AppTimer,
    },
    LinkFail {
        link: LinkId,
    },
    Detect {
        node: NodeId,
        face: FaceId,
    },
}

struct Scheduled {
    at: SimTime,
    seq: u64,
    event: Event,
}

impl PartialEq for Scheduled {
    fn eq(&self, other: &Scheduled) -> bool {
        self.at == other.at && self.seq == other.seq
    }
}
impl Eq for Scheduled {}
impl PartialOrd for Scheduled {
    fn partial_cmp(&self, other: &Scheduled) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Scheduled {
    fn cmp(&self, other: &Scheduled) -> std::cmp::Ordering {
        // Reversed: BinaryHeap is a max-heap, we want earliest first.
        (other.at, other.seq).cmp(&(self.at, self.seq))
    }
}

/// End-of-run snapshot and counters.
#[derive(Clone, Debug)]
pub struct RunReport {
    pub strategy: Strategy,
    pub seed: u64,
    pub avg_fib_all: f64,
    pub avg_fib_core: f64,
    /// (node name, kind, FIB entry count) for every router.
    pub fib_entries: Vec<(String, &'static str, usize)>,
    pub app_all: f64,
    pub app_core: f64,
    /// Per-leaf face counts pooled over all routers.
    pub leaf_face_counts: Vec<usize>,
    /// Discovery interest / data transmissions over links.
    pub discovery_interest_tx: u64,
    pub discovery_data_tx: u64,
    /// (issue time, consumer name) for each discovery a consumer started.
    pub consumer_discoveries: Vec<(SimTime, String)>,
    pub consumer_timeouts: Vec<(String, u64)>,
    /// delivered data count per (1 s bin, consumer name).
    pub delivered_bins: BTreeMap<(u64, String), u64>,
    pub delivered_total: u64,
    /// PIT entries anywhere that outlived max(lifetime, tmp) by run end.
    pub pit_overdue_at_end: usize,
    pub sent: u64,
    pub arrived: u64,
    pub link_dropped: u64,
    pub engine_dropped: u64,
    pub trace: String,
}

pub struct Sim {
    cfg: SimConfig,
    topo: Topology,
    engines: Vec<Engine>,
    consumers: BTreeMap<u32, ConsumerApp>,
    producers: BTreeMap<u32, ProducerApp>,
    /// Per link: the two (node, face) endpoints.
    link_ends: Vec<[(NodeId, FaceId); 2]>,
    link_failed: Vec<Option<SimTime>>,
    heap: BinaryHeap<Scheduled>,
    seq: u64,
    now: SimTime,
    discovery_interest_tx: u64,
    discovery_data_tx: u64,
    consumer_discoveries: Vec<(SimTime, NodeId)>,
    delivered_bins: BTreeMap<(u64, u32), u64>,
    sent: u64,
    arrived: u64,
    link_dropped: u64,
    engine_dropped: u64,
    trace: String,
}

impl Sim {
    pub fn new(cfg: SimConfig, topo: Topology) -> Sim {
        let engine_cfg = |kind: NodeKind| EngineConfig {
            strategy: cfg.strategy,
            node_kind: kind,
            token_mode: TokenMode::Component,
            tmp_window: cfg.tmp_window,
            interest_lifetime: cfg.interest_lifetime,
            data_fanout: cfg.data_fanout,
        };
        let mut engines: Vec<Engine> = topo
            .nodes
            .iter()
            .map(|n| Engine::new(engine_cfg(n.kind)))
            .collect();

        // Faces follow link declaration order, then one app face per host.
        let mut link_ends = Vec::with_capacity(topo.links.len());
        for (li, link) in topo.links.iter().enumerate() {
            let lid = LinkId(li as u32);
            let fa = engines[link.a.0 as usize].add_face(FaceMeta::link(
                lid,
                link.b,
                topo.kind(link.b),
            ));
            let fb = engines[link.b.0 as usize].add_face(FaceMeta::link(
                lid,
                link.a,
                topo.kind(link.a),
            ));
            link_ends.push([(link.a, fa), (link.b, fb)]);
        }

        let mut producers = BTreeMap::new();
        for (node, prefixes) in &topo.producer_prefixes {
            let engine = &mut engines[node.0 as usize];
            engine.add_face(FaceMeta::app());
            for p in prefixes {
                engine.register_local(p);
            }
            producers.insert(node.0, ProducerApp::new(prefixes.clone(), cfg.strategy));
        }

        let mut workload_rng = ChaCha12Rng::seed_from_u64(cfg.seed ^ 0x5eed_0002);
        let mut consumers = BTreeMap::new();
        for (node, prefix) in &topo.consumer_prefixes {
            engines[node.0 as usize].add_face(FaceMeta::app());
            let start =
                SimTime((workload_rng.gen::<f64>() * cfg.start_spread.0 as f64) as u64);
            let mut ccfg = ConsumerConfig::new(prefix.clone(), start, cfg.duration);
            ccfg.rate = cfg.rate;
            ccfg.rto = cfg.rto;
            ccfg.discovery_timer = cfg.discovery_timer;
            ccfg.max_alt_attempts = cfg.max_alt_attempts;
            let app_rng = ChaCha12Rng::seed_from_u64(
                cfg.seed ^ (node.0 as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15),
            );
            consumers.insert(node.0, ConsumerApp::new(ccfg, app_rng));
        }

        let link_failed = vec![None; topo.links.len()];
        Sim {
            cfg,
            topo,
            engines,
            consumers,
            producers,
            link_ends,
            link_failed,
            heap: BinaryHeap::new(),
            seq: 0,
            now: SimTime::ZERO,
            discovery_interest_tx: 0,
            discovery_data_tx: 0,
            consumer_discoveries: Vec::new(),
            delivered_bins: BTreeMap::new(),
            sent: 0,
            arrived: 0,
            link_dropped: 0,
            engine_dropped: 0,
            trace: String::new(),
        }
    }

    fn schedule(&mut self, at: SimTime, event: Event) {
        debug_assert!(at >= self.now, "scheduling into the past");
        let seq = self.seq;
        self.seq += 1;
        self.heap.push(Scheduled { at, seq, event });
    }

    fn trace_line(&mut self, node: NodeId, event: &str, packet: &Packet, extra: &str) {
        if !self.cfg.trace {
            return;
        }
        let (nonce, reason) = match packet {
            Packet::Interest(i) => (i.nonce.to_string(), String::new()),
            Packet::Data(_) => ("-".to_string(), String::new()),
            Packet::Nack(n) => (n.nonce.to_string(), n.reason.as_str().to_string()),
        };
        let name = self.topo.name(node).to_string();
        let _ = writeln!(
            self.trace,
            "{},{},{}:{},{},{},{},{}",
            self.now,
            name,
            event,
            packet.kind_str(),
            packet.name(),
            nonce,
            extra,
            reason
        );
    }

    pub fn run(mut self) -> RunReport {
        // Consumer start events in node order.
        let starts: Vec<(NodeId, SimTime)> = self
            .consumers
            .iter()
            .map(|(&n, app)| (NodeId(n), app.cfg.start))
            .collect();
        for (node, start) in starts {
            self.schedule(start, Event::AppStart { node });
        }
        for (link, at) in self.cfg.failures.clone() {
            self.schedule(at, Event::LinkFail { link });
        }

        while let Some(item) = self.heap.pop() {
            if item.at > self.cfg.duration {
                break;
            }
            self.now = item.at;
            self.dispatch(item.event);
        }
        self.report()
    }

    fn dispatch(&mut self, event: Event) {
        match event {
            Event::Arrival { node, face, packet } => {
                self.arrived += 1;
                self.trace_line(node, "recv", &packet, &face.0.to_string());
                let actions = self.engines[node.0 as usize].on_packet(self.now, face, packet);
                self.process_actions(node, actions);
            }
            Event::EngineTimer { node, name } => {
                let actions = self.engines[node.0 as usize].on_timer(self.now, &name);
                self.process_actions(node, actions);
            }
            Event::AppStart { node } => {
                let cmds = self
                    .consumers
                    .get_mut(&node.0)
                    .expect("start event for consumer")
                    .on_start(self.now);
                self.process_cmds(node, cmds);
            }
            Event::AppTimer { node, timer } => {
                let cmds = self
                    .consumers
                    .get_mut(&node.0)
                    .expect("app timer for consumer")
                    .on_timer(self.now, timer);
                self.process_cmds(node, cmds);
            }
            Event::LinkFail { link } => {
                let li = link.0 as usize;
                if self.link_failed[li].is_some() {
                    return;
                }
                self.link_failed[li] = Some(self.now);
                let detect_at = self.now
                    + SimTime(self.cfg.bfd_interval.0 * self.cfg.bfd_dead_multiplier as u64);
                for (node, face) in self.link_ends[li] {
                    self.schedule(detect_at, Event::Detect { node, face });
                }
            }
            Event::Detect { node, face } => {
                let actions = self.engines[node.0 as usize].on_face_failed(self.now, face);
                self.process_actions(node, actions);
            }
        }
    }

    fn process_actions(&mut self, node: NodeId, actions: Vec<Action>) {
        for action in actions {
            match action {
                Action::Send { face, packet } => self.transmit(node, face, packet),
                Action::Deliver { face: _, packet } => self.deliver(node, packet),
                Action::Timer { name, at } => {
                    self.schedule(at.max(self.now), Event::EngineTimer { node, name });
                }
                Action::Drop { packet, reason } => {
                    self.engine_dropped += 1;
                    self.trace_line(node, "drop", &packet, reason);
                }
            }
        }
    }

    fn transmit(&mut self, node: NodeId, face: FaceId, packet: Packet) {
        let link = self.engines[node.0 as usize]
            .face(face)
            .link_id()
            .expect("send on link face");
        let li = link.0 as usize;
        match packet.kind_str() {
            "dint" => self.discovery_interest_tx += 1,
            "ddata" => self.discovery_data_tx += 1,
            _ => {}
        }
        self.sent += 1;
        self.trace_line(node, "send", &packet, &face.0.to_string());
        let arrival = self.now + self.topo.links[li].delay;
        if let Some(failed_at) = self.link_failed[li] {
            if arrival > failed_at {
                self.link_dropped += 1;
                self.trace_line(node, "link-drop", &packet, &face.0.to_string());
                return;
            }
        }
        let [(a, fa), (b, fb)] = self.link_ends[li];
        let (dst, dst_face) = if a == node { (b, fb) } else { (a, fa) };
        self.schedule(
            arrival,
            Event::Arrival {
                node: dst,
                face: dst_face,
                packet,
            },
        );
    }

    fn deliver(&mut self, node: NodeId, packet: Packet) {
        self.trace_line(node, "deliver", &packet, "app");
        match self.topo.kind(node) {
            NodeKind::Consumer => {
                let app = self.consumers.get_mut(&node.0).expect("consumer app");
                let before = app.delivered;
                let cmds = match &packet {
                    Packet::Data(d) => app.on_data(self.now, d),
                    Packet::Nack(n) => app.on_nack(self.now, n),
                    Packet::Interest(_) => Vec::new(),
                };
                if app.delivered > before {
                    *self
                        .delivered_bins
                        .entry((self.now.bin_1s() as u64, node.0))
                        .or_default() += app.delivered - before;
                }
                self.process_cmds(node, cmds);
            }
            NodeKind::Producer => {
                if let Packet::Interest(interest) = packet {
                    let reply = self
                        .producers
                        .get_mut(&node.0)
                        .expect("producer app")
                        .on_interest(&interest);
                    let actions = match reply {
                        ProducerReply::Data(data) => {
                            self.engines[node.0 as usize].on_app_data(self.now, data)
                        }
                        ProducerReply::Reject => {
                            self.engines[node.0 as usize].on_app_reject(&interest.name)
                        }
                    };
                    self.process_actions(node, actions);
                }
            }
            _ => {}
        }
    }

    fn process_cmds(&mut self, node: NodeId, cmds: Vec<AppCmd>) {
        for cmd in cmds {
            match cmd {
                AppCmd::SendInterest(interest) => {
                    if interest.is_discovery {
                        self.consumer_discoveries.push((self.now, node));
                    }
                    let packet = Packet::Interest(interest.clone());
                    self.trace_line(node, "app-send", &packet, "app");
                    let actions = self.engines[node.0 as usize].on_app_interest(interest);
                    self.process_actions(node, actions);
                }
                AppCmd::Timer { at, timer } => {
                    self.schedule(at.max(self.now), Event::AppTimer { node, timer });
                }
            }
        }
    }

    /// Prefix universe for the paths-per-prefix metric: every prefix
    /// discovery data may announce under this strategy.
    fn announced_prefixes(&self) -> Vec<Name> {
        let mut out: Vec<Name> = match self.cfg.strategy {
            Strategy::Samba => self
                .topo
                .producer_prefixes
                .iter()
                .flat_map(|(_, ps)| ps.iter().cloned())
                .collect(),
            Strategy::SelfLearning => self
                .topo
                .consumer_prefixes
                .iter()
                .map(|(_, p)| p.clone())
                .collect(),
        };
        out.sort();
        out.dedup();
        out
    }

    fn report(self) -> RunReport {
        let routers = self.topo.router_ids(false);
        let cores = self.topo.router_ids(true);
        let fib_entries: Vec<(String, &'static str, usize)> = routers
            .iter()
            .map(|&r| {
                (
                    self.topo.name(r).to_string(),
                    self.topo.kind(r).as_str(),
                    self.engines[r.0 as usize].fib.leaf_count(),
                )
            })
            .collect();
        let mean_entries = |ids: &[NodeId]| {
            if ids.is_empty() {
                0.0
            } else {
                ids.iter()
                    .map(|&r| self.engines[r.0 as usize].fib.leaf_count())
                    .sum::<usize>() as f64
                    / ids.len() as f64
            }
        };
        let universe = self.announced_prefixes();
        let app_metric = |ids: &[NodeId]| {
            if ids.is_empty() || universe.is_empty() {
                return 0.0;
            }
            let total: usize = ids
                .iter()
                .map(|&r| {
                    universe
                        .iter()
                        .map(|p| self.engines[r.0 as usize].fib.faces_at(p))
                        .sum::<usize>()
                })
                .sum();
            total as f64 / (ids.len() * universe.len()) as f64
        };
        let leaf_face_counts = routers
            .iter()
            .flat_map(|&r| self.engines[r.0 as usize].fib.leaf_face_counts())
            .collect();
        let delivered_bins = self
            .delivered_bins
            .iter()
            .map(|(&(bin, node), &v)| ((bin, self.topo.name(NodeId(node)).to_string()), v))
            .collect();
        let consumer_discoveries = self
            .consumer_discoveries
            .iter()
            .map(|&(t, n)| (t, self.topo.name(n).to_string()))
            .collect();
        let consumer_timeouts = self
            .consumers
            .iter()
            .map(|(&n, app)| (self.topo.name(NodeId(n)).to_string(), app.timeouts_seen))
            .collect();
        RunReport {
            strategy: self.cfg.strategy,
            seed: self.cfg.seed,
            avg_fib_all: mean_entries(&routers),
            avg_fib_core: mean_entries(&cores),
            fib_entries,
            app_all: app_metric(&routers),
            app_core: app_metric(&cores),
            leaf_face_counts,
            discovery_interest_tx: self.discovery_interest_tx,
            discovery_data_tx: self.discovery_data_tx,
            consumer_discoveries,
            consumer_timeouts,
            delivered_bins,
            delivered_total: self.consumers.values().map(|a| a.delivered).sum(),
            pit_overdue_at_end: self
                .engines
                .iter()
                .map(|e| e.pit.overdue(self.now))
                .sum(),
            sent: self.sent,
            arrived: self.arrived,
            link_dropped: self.link_dropped,
            engine_dropped: self.engine_dropped,
            trace: self.trace,
        }
    }
}
