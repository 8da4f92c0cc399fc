use crate::fib::{FaceId, FaceKind, FibTrie, Resolution};
use crate::name::{Name, TokenMode};
use crate::packet::{Data, Interest, Nack, NackReason, Nonce, Packet, Strategy};
use crate::pit::{Admit, DataMatch, Pit};
use crate::time::SimTime;
use crate::topo::{LinkId, NodeId, NodeKind};

/// What sits behind a face of this node.
#[derive(Clone, Copy, Debug)]
pub enum FaceTarget {
    /// The node's own application (consumer or producer).
    App,
    Link {
        link: LinkId,
        neighbor: NodeId,
        neighbor_kind: NodeKind,
    },
}

#[derive(Clone, Copy, Debug)]
pub struct FaceMeta {
    pub target: FaceTarget,
}

impl FaceMeta {
    pub fn app() -> FaceMeta {
        FaceMeta {
            target: FaceTarget::App,
        }
    }

    pub fn link(link: LinkId, neighbor: NodeId, neighbor_kind: NodeKind) -> FaceMeta {
        FaceMeta {
            target: FaceTarget::Link {
                link,
                neighbor,
                neighbor_kind,
            },
        }
    }

    pub fn is_app(&self) -> bool {
        matches!(self.target, FaceTarget::App)
    }

    pub fn neighbor(&self) -> Option<(NodeId, NodeKind)> {
        match self.target {
            FaceTarget::App => None,
            FaceTarget::Link {
                neighbor,
                neighbor_kind,
                ..
            } => Some((neighbor, neighbor_kind)),
        }
    }

    pub fn link_id(&self) -> Option<LinkId> {
        match self.target {
            FaceTarget::App => None,
            FaceTarget::Link { link, .. } => Some(link),
        }
    }
}

/// Engine output, executed by the event loop.
#[derive(Clone, Debug)]
pub enum Action {
    /// Transmit on a network face.
    Send { face: FaceId, packet: Packet },
    /// Hand to the application behind an app face.
    Deliver { face: FaceId, packet: Packet },
    /// Re-check PIT expiry for `name` at `at`.
    Timer { name: Name, at: SimTime },
    /// Packet consumed without forwarding; kept for trace/conservation.
    Drop {
        packet: Packet,
        reason: &'static str,
    },
}

#[derive(Clone, Debug)]
pub struct EngineConfig {
    pub strategy: Strategy,
    pub node_kind: NodeKind,
    pub token_mode: TokenMode,
    /// Alternative-egress window after the first discovery data.
    pub tmp_window: SimTime,
    pub interest_lifetime: SimTime,
    /// Maximum distinct downstream router neighbors the first discovery
    /// data is copied to; app and host-facing faces are always served.
    pub data_fanout: usize,
}

impl Default for EngineConfig {
    fn default() -> EngineConfig {
        EngineConfig {
            strategy: Strategy::Samba,
            node_kind: NodeKind::Core,
            token_mode: TokenMode::Component,
            tmp_window: SimTime::from_millis(50),
            interest_lifetime: SimTime::from_secs(2),
            data_fanout: 2,
        }
    }
}

/// Per-node forwarding engine: FIB + PIT + face table, emitting actions for
/// the event loop. Consumer hosts run in pass-through mode (no FIB/PIT):
/// app interests go out the uplink, returning packets go to the app.
pub struct Engine {
    cfg: EngineConfig,
    pub fib: FibTrie,
    pub pit: Pit,
    faces: Vec<FaceMeta>,
    dead: Vec<bool>,
    app_face: Option<FaceId>,
    uplink: Option<FaceId>,
}

impl Engine {
    pub fn new(cfg: EngineConfig) -> Engine {
        let mode = cfg.token_mode;
        Engine {
            cfg,
            fib: FibTrie::new(mode),
            pit: Pit::new(),
            faces: Vec::new(),
            dead: Vec::new(),
            app_face: None,
            uplink: None,
        }
    }

    pub fn config(&self) -> &EngineConfig {
        &self.cfg
    }

    pub fn add_face(&mut self, meta: FaceMeta) -> FaceId {
        let id = FaceId(self.faces.len() as u32);
        if meta.is_app() {
            self.app_face = Some(id);
        } else if self.uplink.is_none() {
            self.uplink = Some(id);
        }
        self.faces.push(meta);
        self.dead.push(false);
        id
    }

    pub fn face(&self, face: FaceId) -> &FaceMeta {
        &self.faces[face.0 as usize]
    }

    pub fn app_face(&self) -> Option<FaceId> {
        self.app_face
    }

    /// Register a locally served prefix (producer namespace) on the app face.
    pub fn register_local(&mut self, prefix: &Name) {
        let face = self.app_face.expect("app face registered before prefixes");
        self.fib.insert(prefix, face, FaceKind::Local);
    }

    fn emit(&self, face: FaceId, packet: Packet) -> Action {
        if self.faces[face.0 as usize].is_app() {
            Action::Deliver { face, packet }
        } else {
            Action::Send { face, packet }
        }
    }

    fn nack(&self, face: FaceId, name: Name, nonce: Nonce, reason: NackReason) -> Action {
        self.emit(face, Packet::Nack(Nack { name, nonce, reason }))
    }

    // ---- packets from the network -------------------------------------

    pub fn on_packet(&mut self, now: SimTime, iface: FaceId, packet: Packet) -> Vec<Action> {
        if self.cfg.node_kind == NodeKind::Consumer {
            return match packet {
                Packet::Data(_) | Packet::Nack(_) => match self.app_face {
                    Some(app) => vec![Action::Deliver { face: app, packet }],
                    None => vec![Action::Drop {
                        packet,
                        reason: "no-app",
                    }],
                },
                Packet::Interest(_) => vec![Action::Drop {
                    packet,
                    reason: "host-interest",
                }],
            };
        }
        match packet {
            Packet::Interest(i) if i.is_discovery => self.on_discovery_interest(now, iface, i),
            Packet::Interest(i) => self.on_interest(now, iface, i),
            Packet::Data(d) => self.on_data(now, iface, d),
            Packet::Nack(n) => self.on_nack(now, iface, n),
        }
    }

    fn on_interest(&mut self, now: SimTime, iface: FaceId, interest: Interest) -> Vec<Action> {
        let name = interest.name.clone();
        let admit = self.pit.admit(
            &name,
            interest.nonce,
            iface,
            false,
            interest.hop,
            now,
            self.cfg.interest_lifetime,
        );
        match admit {
            Admit::LoopDrop => vec![Action::Drop {
                packet: Packet::Interest(interest),
                reason: "loop",
            }],
            Admit::DuplicateDrop => vec![Action::Drop {
                packet: Packet::Interest(interest),
                reason: "duplicate",
            }],
            Admit::AppendedFace => vec![Action::Drop {
                packet: Packet::Interest(interest),
                reason: "aggregated",
            }],
            Admit::New => {
                let mut actions = vec![Action::Timer {
                    name: name.clone(),
                    at: now + self.cfg.interest_lifetime,
                }];
                let resolution = match self.cfg.strategy {
                    Strategy::Samba => self.fib.resolve(&name, Some(iface)),
                    Strategy::SelfLearning => self.fib.resolve_exact(&name, Some(iface)),
                };
                match resolution {
                    Resolution::Deliver { face, .. } | Resolution::Forward { face, .. } => {
                        self.pit.mark_sent(&name, &[face]);
                        let mut out = interest;
                        out.hop = out.hop.saturating_add(1);
                        actions.push(self.emit(face, Packet::Interest(out)));
                    }
                    Resolution::NoRoute => {
                        actions.push(self.nack(iface, name.clone(), interest.nonce, NackReason::NoRoute));
                        self.pit.remove(&name);
                    }
                }
                actions
            }
        }
    }

    fn on_discovery_interest(
        &mut self,
        now: SimTime,
        iface: FaceId,
        interest: Interest,
    ) -> Vec<Action> {
        let name = interest.name.clone();
        // The baseline drops duplicates outright, without face aggregation.
        if self.cfg.strategy == Strategy::SelfLearning && self.pit.has_nonce(&name, interest.nonce)
        {
            return vec![Action::Drop {
                packet: Packet::Interest(interest),
                reason: "duplicate",
            }];
        }
        let admit = self.pit.admit(
            &name,
            interest.nonce,
            iface,
            true,
            interest.hop,
            now,
            self.cfg.interest_lifetime,
        );
        match admit {
            Admit::LoopDrop => vec![Action::Drop {
                packet: Packet::Interest(interest),
                reason: "loop",
            }],
            Admit::AppendedFace | Admit::DuplicateDrop => vec![Action::Drop {
                packet: Packet::Interest(interest),
                reason: "aggregated",
            }],
            Admit::New => {
                let mut actions = vec![Action::Timer {
                    name: name.clone(),
                    at: now + self.cfg.interest_lifetime,
                }];
                // A serving producer consumes the discovery instead of
                // broadcasting it further.
                if let Resolution::Deliver { face, .. } = self.fib.resolve_exact(&name, None) {
                    self.pit.mark_sent(&name, &[face]);
                    actions.push(self.emit(face, Packet::Interest(interest)));
                    return actions;
                }
                if self.cfg.node_kind == NodeKind::Producer {
                    // Wrong producer: nothing to serve, nowhere to flood.
                    actions.push(self.nack(
                        iface,
                        name.clone(),
                        interest.nonce,
                        NackReason::NoRoute,
                    ));
                    self.pit.remove(&name);
                    return actions;
                }
                let out_faces: Vec<FaceId> = self
                    .faces
                    .iter()
                    .enumerate()
                    .filter_map(|(i, meta)| {
                        let face = FaceId(i as u32);
                        if face == iface || self.dead[i] {
                            return None;
                        }
                        match meta.neighbor() {
                            // Never flood toward consumer hosts or apps.
                            Some((_, NodeKind::Consumer)) | None => None,
                            Some(_) => Some(face),
                        }
                    })
                    .collect();
                if out_faces.is_empty() {
                    actions.push(Action::Drop {
                        packet: Packet::Interest(interest),
                        reason: "dead-end",
                    });
                    return actions;
                }
                self.pit.mark_sent(&name, &out_faces);
                let mut out = interest;
                out.hop = out.hop.saturating_add(1);
                for face in out_faces {
                    actions.push(self.emit(face, Packet::Interest(out.clone())));
                }
                actions
            }
        }
    }

    fn on_data(&mut self, now: SimTime, iface: FaceId, data: Data) -> Vec<Action> {
        let name = data.name.clone();
        // Data answering a pending discovery reveals a path worth learning
        // even when the data packet itself came back down a plain-interest
        // branch: another consumer's interest for the same name can race the
        // flood and be answered first.
        let discovery = data.is_discovery
            || self.pit.get(&name).is_some_and(|e| e.is_discovery);
        match self.pit.match_data(&name, now) {
            DataMatch::FirstData(in_faces) => {
                if discovery {
                    match self.cfg.strategy {
                        Strategy::Samba => {
                            self.fib
                                .insert(&data.announced_prefix, iface, FaceKind::Network);
                        }
                        Strategy::SelfLearning => {
                            self.fib.insert_if_vacant(
                                &data.announced_prefix,
                                iface,
                                FaceKind::Network,
                            );
                        }
                    }
                }
                let downstream: Vec<FaceId> =
                    in_faces.iter().copied().filter(|&f| f != iface).collect();
                let selected = if discovery {
                    self.select_downstream(&downstream)
                } else {
                    downstream
                };
                let mut actions: Vec<Action> = selected
                    .iter()
                    .map(|&f| self.emit(f, Packet::Data(data.clone())))
                    .collect();
                if discovery && self.cfg.strategy == Strategy::Samba {
                    let tmp = now + self.cfg.tmp_window;
                    self.pit.open_alt_window(&name, iface, tmp);
                    if let Some(entry) = self.pit.get(&name) {
                        actions.push(Action::Timer {
                            name: name.clone(),
                            at: entry.max_expiry(),
                        });
                    }
                } else {
                    self.pit.remove(&name);
                }
                if actions.is_empty() {
                    actions.push(Action::Drop {
                        packet: Packet::Data(data),
                        reason: "no-downstream",
                    });
                }
                actions
            }
            DataMatch::AltWindow => {
                if discovery {
                    // Alternative egress: remember the extra path.
                    self.fib
                        .insert(&data.announced_prefix, iface, FaceKind::Network);
                }
                self.pit.clear_out_face(&name, iface);
                vec![Action::Drop {
                    packet: Packet::Data(data),
                    reason: if discovery { "alt-egress" } else { "alt-window" },
                }]
            }
            DataMatch::Unsolicited => {
                if data.is_discovery {
                    vec![self.nack(iface, name, Nonce(0), NackReason::UnsolicitedData)]
                } else {
                    vec![Action::Drop {
                        packet: Packet::Data(data),
                        reason: "unsolicited",
                    }]
                }
            }
        }
    }

    /// Downstream faces the first discovery data is copied to: app faces and
    /// host-facing faces always; router-facing faces capped at
    /// `data_fanout` distinct neighbors (all parallel faces of a selected
    /// neighbor are kept, so multipath over link bundles survives).
    fn select_downstream(&self, in_faces: &[FaceId]) -> Vec<FaceId> {
        let mut routers: Vec<NodeId> = Vec::new();
        let mut selected = Vec::with_capacity(in_faces.len());
        for &f in in_faces {
            match self.faces[f.0 as usize].neighbor() {
                None | Some((_, NodeKind::Consumer)) | Some((_, NodeKind::Producer)) => {
                    selected.push(f);
                }
                Some((node, _)) => {
                    if routers.contains(&node) {
                        selected.push(f);
                    } else if routers.len() < self.cfg.data_fanout {
                        routers.push(node);
                        selected.push(f);
                    }
                }
            }
        }
        selected
    }

    fn on_nack(&mut self, now: SimTime, iface: FaceId, nack: Nack) -> Vec<Action> {
        let _ = now;
        let name = nack.name.clone();
        let Some(entry) = self.pit.get(&name) else {
            return vec![Action::Drop {
                packet: Packet::Nack(nack),
                reason: "no-pit",
            }];
        };
        let in_faces = entry.in_faces.clone();
        // A nack against a flooded discovery means one branch of the flood
        // found no producer; other branches may still answer. Stop waiting
        // on that branch and nothing more — tearing down FIB state or
        // propagating the nack would starve the consumer whenever a
        // non-serving producer is closer than the serving one.
        if entry.is_discovery && nack.reason != NackReason::UnsolicitedData {
            self.pit.clear_out_face(&name, iface);
            return vec![Action::Drop {
                packet: Packet::Nack(nack),
                reason: "discovery-branch-dead",
            }];
        }
        match nack.reason {
            NackReason::UnsolicitedData => {
                // The alternative path beyond `iface` refused our data; stop
                // waiting on it.
                self.pit.clear_out_face(&name, iface);
                vec![Action::Drop {
                    packet: Packet::Nack(nack),
                    reason: "alt-refused",
                }]
            }
            NackReason::AltRoute => {
                // Forward verbatim; local FIB faces stay intact so the
                // consumer's retransmission can test the alternative here.
                let actions = in_faces
                    .iter()
                    .map(|&f| self.emit(f, Packet::Nack(nack.clone())))
                    .collect();
                self.pit.remove(&name);
                actions
            }
            NackReason::NoRoute => {
                self.pit.clear_out_face(&name, iface);
                let alt = match self.cfg.strategy {
                    Strategy::Samba => self.fib.fail_face(&name, iface, &in_faces),
                    Strategy::SelfLearning => {
                        self.fib.fail_face(&name, iface, &in_faces);
                        None
                    }
                };
                let reason = if alt.is_some() {
                    NackReason::AltRoute
                } else {
                    NackReason::NoRoute
                };
                let actions = in_faces
                    .iter()
                    .map(|&f| {
                        self.nack(f, name.clone(), nack.nonce, reason)
                    })
                    .collect();
                self.pit.remove(&name);
                actions
            }
        }
    }

    // ---- packets from the local application ----------------------------

    /// Consumer app emits an interest (regular or discovery): pass-through
    /// out of the uplink.
    pub fn on_app_interest(&mut self, interest: Interest) -> Vec<Action> {
        debug_assert_eq!(self.cfg.node_kind, NodeKind::Consumer);
        match self.uplink {
            Some(face) => vec![Action::Send {
                face,
                packet: Packet::Interest(interest),
            }],
            None => vec![Action::Drop {
                packet: Packet::Interest(interest),
                reason: "no-uplink",
            }],
        }
    }

    /// Producer app answers a delivered interest.
    pub fn on_app_data(&mut self, now: SimTime, data: Data) -> Vec<Action> {
        let name = data.name.clone();
        match self.pit.match_data(&name, now) {
            DataMatch::FirstData(in_faces) => {
                let mut actions: Vec<Action> = in_faces
                    .iter()
                    .map(|&f| self.emit(f, Packet::Data(data.clone())))
                    .collect();
                self.pit.remove(&name);
                if actions.is_empty() {
                    actions.push(Action::Drop {
                        packet: Packet::Data(data),
                        reason: "no-downstream",
                    });
                }
                actions
            }
            _ => vec![Action::Drop {
                packet: Packet::Data(data),
                reason: "stale-reply",
            }],
        }
    }

    /// Producer app rejects an interest it does not serve.
    pub fn on_app_reject(&mut self, name: &Name) -> Vec<Action> {
        let Some(entry) = self.pit.get(name) else {
            return Vec::new();
        };
        let nonce = entry.nonces.last().map(|&(n, _)| n).unwrap_or(Nonce(0));
        let actions = entry
            .in_faces
            .clone()
            .into_iter()
            .map(|f| self.nack(f, name.clone(), nonce, NackReason::NoRoute))
            .collect();
        self.pit.remove(name);
        actions
    }

    // ---- timers and failures -------------------------------------------

    pub fn on_timer(&mut self, now: SimTime, name: &Name) -> Vec<Action> {
        self.pit.expire(name, now);
        Vec::new()
    }

    /// A link face died (failure detection fired): purge it from the FIB
    /// and deal with every interest still pending on it. With multipath
    /// nack rewriting, downstream learns immediately (AltRoute when an
    /// alternative survives here, NoRoute otherwise). The baseline has no
    /// nack-based failure reporting: state is dropped silently and the
    /// consumer recovers through its retransmission timeout.
    pub fn on_face_failed(&mut self, _now: SimTime, face: FaceId) -> Vec<Action> {
        self.dead[face.0 as usize] = true;
        let pending = self.pit.pending_on_face(face);
        self.fib.remove_face_everywhere(face);
        let mut actions = Vec::new();
        for name in pending {
            let Some(entry) = self.pit.get(&name) else {
                continue;
            };
            if self.cfg.strategy == Strategy::SelfLearning {
                self.pit.remove(&name);
                continue;
            }
            let in_faces = entry.in_faces.clone();
            let nonce = entry.nonces.last().map(|&(n, _)| n).unwrap_or(Nonce(0));
            let alt = self.fib.next_alternative_face(&name, &in_faces);
            let reason = if alt.is_some() {
                NackReason::AltRoute
            } else {
                NackReason::NoRoute
            };
            for f in in_faces {
                actions.push(self.nack(f, name.clone(), nonce, reason));
            }
            self.pit.remove(&name);
        }
        actions
    }
}
