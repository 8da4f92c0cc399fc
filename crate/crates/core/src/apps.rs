use std::collections::BTreeMap;
use std::collections::VecDeque;

use rand::Rng;
use rand_chacha::ChaCha12Rng;

use crate::name::Name;
use crate::packet::{Data, Interest, Nack, NackReason, Nonce, Strategy};
use crate::time::SimTime;

/// Consumer-side timers, scheduled through the event loop. Generation
/// counters invalidate stale timers without cancellation support.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum AppTimer {
    /// Rate pacing tick: enqueue the next sequence number.
    Pace,
    /// Retransmission timeout for one outstanding sequence.
    Rto { seq: u64, generation: u64 },
    /// Discovery re-issue timer.
    Discovery { generation: u64 },
}

/// Consumer output, executed by the event loop.
#[derive(Clone, Debug)]
pub enum AppCmd {
    SendInterest(Interest),
    Timer { at: SimTime, timer: AppTimer },
}

#[derive(Clone, Debug)]
pub struct ConsumerConfig {
    pub prefix: Name,
    /// Interests per second; 0 means purely window-limited.
    pub rate: f64,
    pub start: SimTime,
    pub stop: SimTime,
    pub rto: SimTime,
    pub discovery_timer: SimTime,
    pub max_alt_attempts: u32,
    pub initial_ssthresh: f64,
}

impl ConsumerConfig {
    pub fn new(prefix: Name, start: SimTime, stop: SimTime) -> ConsumerConfig {
        ConsumerConfig {
            prefix,
            rate: 8.0,
            start,
            stop,
            rto: SimTime::from_secs(1),
            discovery_timer: SimTime::from_secs(1),
            max_alt_attempts: 3,
            initial_ssthresh: 64.0,
        }
    }
}

#[derive(Clone, Debug)]
struct Flight {
    nonce: Nonce,
    alt_attempts: u32,
    timeouts: u32,
    rto_generation: u64,
}

/// Fetches `/prefix/seq` content with AIMD window control and stop-and-wait
/// route discovery: while a discovery is in flight, regular interests queue
/// up and are flushed in order once the route exists.
pub struct ConsumerApp {
    pub cfg: ConsumerConfig,
    rng: ChaCha12Rng,
    next_seq: u64,
    queue: VecDeque<u64>,
    in_flight: BTreeMap<u64, Flight>,
    cwnd: f64,
    ssthresh: f64,
    discovery_in_flight: Option<u64>, // seq the discovery will satisfy
    discovery_generation: u64,
    timer_generation: u64,
    // Counters for metrics and assertions.
    pub delivered: u64,
    pub discoveries_sent: u64,
    pub timeouts_seen: u64,
    pub min_cwnd_after_start: f64,
}

impl ConsumerApp {
    pub fn new(cfg: ConsumerConfig, rng: ChaCha12Rng) -> ConsumerApp {
        let ssthresh = cfg.initial_ssthresh;
        ConsumerApp {
            cfg,
            rng,
            next_seq: 0,
            queue: VecDeque::new(),
            in_flight: BTreeMap::new(),
            cwnd: 1.0,
            ssthresh,
            discovery_in_flight: None,
            discovery_generation: 0,
            timer_generation: 0,
            delivered: 0,
            discoveries_sent: 0,
            timeouts_seen: 0,
            min_cwnd_after_start: 1.0,
        }
    }

    pub fn cwnd(&self) -> f64 {
        self.cwnd
    }

    pub fn discovery_in_flight(&self) -> bool {
        self.discovery_in_flight.is_some()
    }

    fn nonce(&mut self) -> Nonce {
        Nonce(self.rng.gen())
    }

    fn name_for(&self, seq: u64) -> Name {
        self.cfg.prefix.child(&seq.to_string())
    }

    fn window(&self) -> usize {
        self.cwnd.max(1.0) as usize
    }

    fn pace_interval(&self) -> Option<SimTime> {
        if self.cfg.rate > 0.0 {
            Some(SimTime::from_secs_f64(1.0 / self.cfg.rate))
        } else {
            None
        }
    }

    pub fn on_start(&mut self, now: SimTime) -> Vec<AppCmd> {
        let mut cmds = Vec::new();
        match self.pace_interval() {
            Some(_) => cmds.push(AppCmd::Timer {
                at: now,
                timer: AppTimer::Pace,
            }),
            None => cmds.extend(self.try_send(now)),
        }
        cmds
    }

    pub fn on_timer(&mut self, now: SimTime, timer: AppTimer) -> Vec<AppCmd> {
        match timer {
            AppTimer::Pace => {
                let mut cmds = Vec::new();
                self.queue.push_back(self.next_seq);
                self.next_seq += 1;
                if let Some(interval) = self.pace_interval() {
                    let next = now + interval;
                    if next < self.cfg.stop {
                        cmds.push(AppCmd::Timer {
                            at: next,
                            timer: AppTimer::Pace,
                        });
                    }
                }
                cmds.extend(self.try_send(now));
                cmds
            }
            AppTimer::Rto { seq, generation } => self.on_rto(now, seq, generation),
            AppTimer::Discovery { generation } => {
                if self.discovery_in_flight.is_some() && generation == self.discovery_generation {
                    // Discovery timed out: re-issue.
                    self.issue_discovery(now, self.discovery_in_flight.unwrap())
                } else {
                    Vec::new()
                }
            }
        }
    }

    fn try_send(&mut self, now: SimTime) -> Vec<AppCmd> {
        let mut cmds = Vec::new();
        if self.discovery_in_flight.is_some() || now < self.cfg.start || now >= self.cfg.stop {
            return cmds;
        }
        while self.in_flight.len() < self.window() {
            let seq = match self.queue.pop_front() {
                Some(s) => s,
                None if self.cfg.rate == 0.0 => {
                    let s = self.next_seq;
                    self.next_seq += 1;
                    s
                }
                None => break,
            };
            cmds.extend(self.send_seq(now, seq));
        }
        cmds
    }

    fn send_seq(&mut self, now: SimTime, seq: u64) -> Vec<AppCmd> {
        let nonce = self.nonce();
        self.timer_generation += 1;
        let generation = self.timer_generation;
        let flight = self.in_flight.entry(seq).or_insert(Flight {
            nonce,
            alt_attempts: 0,
            timeouts: 0,
            rto_generation: generation,
        });
        flight.nonce = nonce;
        flight.rto_generation = generation;
        vec![
            AppCmd::SendInterest(Interest {
                name: self.name_for(seq),
                nonce,
                is_discovery: false,
                hop: 0,
            }),
            AppCmd::Timer {
                at: now + self.cfg.rto,
                timer: AppTimer::Rto { seq, generation },
            },
        ]
    }

    fn issue_discovery(&mut self, now: SimTime, seq: u64) -> Vec<AppCmd> {
        self.discovery_in_flight = Some(seq);
        self.discovery_generation += 1;
        self.discoveries_sent += 1;
        let nonce = self.nonce();
        vec![
            AppCmd::SendInterest(Interest {
                name: self.name_for(seq),
                nonce,
                is_discovery: true,
                hop: 0,
            }),
            AppCmd::Timer {
                at: now + self.cfg.discovery_timer,
                timer: AppTimer::Discovery {
                    generation: self.discovery_generation,
                },
            },
        ]
    }

    /// Window loss reaction shared by timeouts and NoRoute nacks.
    fn on_loss(&mut self) {
        self.ssthresh = (self.cwnd / 2.0).max(1.0);
        self.cwnd = 1.0;
        self.min_cwnd_after_start = self.min_cwnd_after_start.min(self.cwnd);
    }

    pub fn on_data(&mut self, now: SimTime, data: &Data) -> Vec<AppCmd> {
        let Some(seq) = data.name.seq() else {
            return Vec::new();
        };
        let known = self.in_flight.remove(&seq).is_some();
        let satisfies_discovery = self.discovery_in_flight == Some(seq);
        if satisfies_discovery {
            self.discovery_in_flight = None;
            self.discovery_generation += 1;
        }
        if !known && !satisfies_discovery {
            return Vec::new();
        }
        self.delivered += 1;
        if self.cwnd < self.ssthresh {
            self.cwnd += 1.0;
        } else {
            self.cwnd += 1.0 / self.cwnd;
        }
        self.min_cwnd_after_start = self.min_cwnd_after_start.min(self.cwnd);
        self.try_send(now)
    }

    pub fn on_nack(&mut self, now: SimTime, nack: &Nack) -> Vec<AppCmd> {
        let Some(seq) = nack.name.seq() else {
            return Vec::new();
        };
        if !self.in_flight.contains_key(&seq) {
            return Vec::new();
        }
        match nack.reason {
            NackReason::UnsolicitedData => Vec::new(),
            NackReason::AltRoute => {
                let flight = self.in_flight.get_mut(&seq).unwrap();
                flight.alt_attempts += 1;
                if flight.alt_attempts >= self.cfg.max_alt_attempts {
                    // "After a few attempts" the consumer gives up on
                    // alternatives and rediscovers.
                    self.in_flight.remove(&seq);
                    if self.discovery_in_flight.is_some() {
                        self.queue.push_front(seq);
                        Vec::new()
                    } else {
                        self.issue_discovery(now, seq)
                    }
                } else {
                    // Retransmit immediately with a fresh nonce; the window
                    // is intentionally untouched.
                    let nonce = self.nonce();
                    self.timer_generation += 1;
                    let generation = self.timer_generation;
                    let flight = self.in_flight.get_mut(&seq).unwrap();
                    flight.nonce = nonce;
                    flight.rto_generation = generation;
                    vec![
                        AppCmd::SendInterest(Interest {
                            name: self.name_for(seq),
                            nonce,
                            is_discovery: false,
                            hop: 0,
                        }),
                        AppCmd::Timer {
                            at: now + self.cfg.rto,
                            timer: AppTimer::Rto { seq, generation },
                        },
                    ]
                }
            }
            NackReason::NoRoute => {
                self.in_flight.remove(&seq);
                self.on_loss();
                if self.discovery_in_flight.is_some() {
                    self.queue.push_front(seq);
                    Vec::new()
                } else {
                    self.issue_discovery(now, seq)
                }
            }
        }
    }

    fn on_rto(&mut self, now: SimTime, seq: u64, generation: u64) -> Vec<AppCmd> {
        let Some(flight) = self.in_flight.get_mut(&seq) else {
            return Vec::new();
        };
        if flight.rto_generation != generation {
            return Vec::new();
        }
        flight.timeouts += 1;
        let timeouts = flight.timeouts;
        self.timeouts_seen += 1;
        self.on_loss();
        if timeouts >= 2 {
            // Repeated silence: the path is gone in a way nacks did not
            // report; rediscover.
            self.in_flight.remove(&seq);
            if self.discovery_in_flight.is_some() {
                self.queue.push_front(seq);
                return Vec::new();
            }
            return self.issue_discovery(now, seq);
        }
        if self.discovery_in_flight.is_some() {
            self.in_flight.remove(&seq);
            self.queue.push_front(seq);
            return Vec::new();
        }
        // Single timeout: retransmit with a fresh nonce, keeping the
        // timeout count.
        let nonce = self.nonce();
        self.timer_generation += 1;
        let generation = self.timer_generation;
        let flight = self.in_flight.get_mut(&seq).unwrap();
        flight.nonce = nonce;
        flight.rto_generation = generation;
        vec![
            AppCmd::SendInterest(Interest {
                name: self.name_for(seq),
                nonce,
                is_discovery: false,
                hop: 0,
            }),
            AppCmd::Timer {
                at: now + self.cfg.rto,
                timer: AppTimer::Rto { seq, generation },
            },
        ]
    }
}

/// Producer reply to a delivered interest.
#[derive(Clone, Debug)]
pub enum ProducerReply {
    Data(Data),
    Reject,
}

/// Serves every name under its registered prefixes. Discovery replies
/// announce the registered prefix itself (aggregating strategy) or the
/// interest name minus its sequence component (single-path baseline).
pub struct ProducerApp {
    pub registered: Vec<Name>,
    pub strategy: Strategy,
    pub served: u64,
    pub rejected: u64,
}

impl ProducerApp {
    pub fn new(registered: Vec<Name>, strategy: Strategy) -> ProducerApp {
        ProducerApp {
            registered,
            strategy,
            served: 0,
            rejected: 0,
        }
    }

    pub fn on_interest(&mut self, interest: &Interest) -> ProducerReply {
        let Some(reg) = self
            .registered
            .iter()
            .find(|r| r.is_prefix_of(&interest.name))
        else {
            self.rejected += 1;
            return ProducerReply::Reject;
        };
        self.served += 1;
        // Announce what a router should hold in its FIB for this name: the
        // whole registered namespace under the aggregating strategy, the
        // individual prefix under the baseline.
        let announced_prefix = match self.strategy {
            Strategy::Samba => reg.clone(),
            Strategy::SelfLearning => interest.name.strip_seq(),
        };
        ProducerReply::Data(Data {
            name: interest.name.clone(),
            announced_prefix,
            is_discovery: interest.is_discovery,
            payload: 1,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    fn consumer(rate: f64) -> ConsumerApp {
        let mut cfg = ConsumerConfig::new(
            "/p/s0".parse().unwrap(),
            SimTime::ZERO,
            SimTime::from_secs(60),
        );
        cfg.rate = rate;
        ConsumerApp::new(cfg, ChaCha12Rng::seed_from_u64(1))
    }

    fn sent(cmds: &[AppCmd]) -> Vec<&Interest> {
        cmds.iter()
            .filter_map(|c| match c {
                AppCmd::SendInterest(i) => Some(i),
                _ => None,
            })
            .collect()
    }

    fn data_for(app: &ConsumerApp, interest: &Interest) -> Data {
        let _ = app;
        Data {
            name: interest.name.clone(),
            announced_prefix: "/p".parse().unwrap(),
            is_discovery: interest.is_discovery,
            payload: 1,
        }
    }

    #[test]
    fn paced_sending_respects_rate() {
        let mut app = consumer(8.0);
        let mut cmds = app.on_start(SimTime::ZERO);
        let mut interests = 0;
        // Drive only pace timers for one second; answer data instantly so
        // the window never binds.
        while let Some(pos) = cmds.iter().position(
            |c| matches!(c, AppCmd::Timer { timer: AppTimer::Pace, at } if *at < SimTime::from_secs(1)),
        ) {
            let AppCmd::Timer { at, .. } = cmds.remove(pos) else {
                unreachable!()
            };
            let clock = at;
            let out = app.on_timer(clock, AppTimer::Pace);
            for i in sent(&out) {
                interests += 1;
                let d = data_for(&app, i);
                app.on_data(clock, &d);
            }
            cmds.extend(out);
        }
        assert_eq!(interests, 8);
    }

    #[test]
    fn slow_start_then_congestion_avoidance() {
        let mut app = consumer(0.0);
        app.ssthresh = 2.0;
        let cmds = app.on_start(SimTime::ZERO);
        let first = sent(&cmds)[0].clone();
        assert_eq!(app.cwnd(), 1.0);
        let d = data_for(&app, &first);
        app.on_data(SimTime::from_millis(10), &d);
        assert_eq!(app.cwnd(), 2.0); // slow start: +1
        let mut d2 = d.clone();
        d2.name = "/p/s0/1".parse().unwrap();
        app.on_data(SimTime::from_millis(20), &d2);
        assert_eq!(app.cwnd(), 2.5); // avoidance: +1/cwnd
    }

    #[test]
    fn noroute_triggers_discovery_and_slow_start() {
        let mut app = consumer(0.0);
        app.cwnd = 8.0;
        let cmds = app.on_start(SimTime::ZERO);
        let initial = sent(&cmds)
            .into_iter()
            .cloned()
            .collect::<Vec<Interest>>();
        assert_eq!(initial.len(), 8);
        let out = app.on_nack(
            SimTime::from_millis(5),
            &Nack {
                name: initial[0].name.clone(),
                nonce: initial[0].nonce,
                reason: NackReason::NoRoute,
            },
        );
        assert_eq!(app.ssthresh, 4.0);
        assert_eq!(app.cwnd(), 1.0);
        let s = sent(&out);
        assert_eq!(s.len(), 1);
        assert!(s[0].is_discovery);
        let discovery = s[0].clone();
        // The route is gone for the whole prefix, so the rest of the window
        // gets its own nacks; those requeue behind the pending discovery.
        for i in &initial[1..] {
            let out = app.on_nack(
                SimTime::from_millis(6),
                &Nack {
                    name: i.name.clone(),
                    nonce: i.nonce,
                    reason: NackReason::NoRoute,
                },
            );
            assert!(sent(&out).is_empty());
        }
        assert!(app.discovery_in_flight());
        // Stop-and-wait: no regular sends while discovery pending.
        assert!(sent(&app.on_timer(SimTime::from_millis(10), AppTimer::Pace)).is_empty());
        // Discovery data releases the queue and counts as delivery.
        let reply = Data {
            name: discovery.name.clone(),
            announced_prefix: "/p".parse().unwrap(),
            is_discovery: true,
            payload: 1,
        };
        let out = app.on_data(SimTime::from_millis(30), &reply);
        assert!(!app.discovery_in_flight());
        assert_eq!(app.delivered, 1);
        assert!(!sent(&out).is_empty());
    }

    #[test]
    fn altroute_retransmits_without_window_change() {
        let mut app = consumer(0.0);
        app.cwnd = 8.0;
        app.in_flight.insert(
            3,
            Flight {
                nonce: Nonce(1),
                alt_attempts: 0,
                timeouts: 0,
                rto_generation: 0,
            },
        );
        let nack = Nack {
            name: "/p/s0/3".parse().unwrap(),
            nonce: Nonce(1),
            reason: NackReason::AltRoute,
        };
        for attempt in 1..=2 {
            let out = app.on_nack(SimTime::from_millis(attempt), &nack);
            let s = sent(&out);
            assert_eq!(s.len(), 1);
            assert!(!s[0].is_discovery);
            assert_ne!(s[0].nonce, Nonce(1)); // fresh nonce
            assert_eq!(app.cwnd(), 8.0);
        }
        // Third consecutive alternative failure: discovery.
        let out = app.on_nack(SimTime::from_millis(3), &nack);
        let s = sent(&out);
        assert!(s[0].is_discovery);
        assert_eq!(app.cwnd(), 8.0); // alt handling never shrinks the window
    }

    #[test]
    fn second_timeout_escalates_to_discovery() {
        let mut app = consumer(0.0);
        let cmds = app.on_start(SimTime::ZERO);
        let gen1 = cmds
            .iter()
            .find_map(|c| match c {
                AppCmd::Timer {
                    timer: AppTimer::Rto { seq: 0, generation },
                    ..
                } => Some(*generation),
                _ => None,
            })
            .unwrap();
        let out = app.on_timer(
            SimTime::from_secs(1),
            AppTimer::Rto {
                seq: 0,
                generation: gen1,
            },
        );
        let s = sent(&out);
        assert_eq!(s.len(), 1);
        assert!(!s[0].is_discovery); // first timeout: plain retransmit
        let gen2 = out
            .iter()
            .find_map(|c| match c {
                AppCmd::Timer {
                    timer: AppTimer::Rto { seq: 0, generation },
                    ..
                } => Some(*generation),
                _ => None,
            })
            .unwrap();
        // Stale timer is ignored.
        assert!(app
            .on_timer(
                SimTime::from_secs(2),
                AppTimer::Rto {
                    seq: 0,
                    generation: gen1
                }
            )
            .is_empty());
        let out = app.on_timer(
            SimTime::from_secs(2),
            AppTimer::Rto {
                seq: 0,
                generation: gen2,
            },
        );
        assert!(sent(&out)[0].is_discovery);
    }

    #[test]
    fn discovery_timer_reissues() {
        let mut app = consumer(0.0);
        app.on_start(SimTime::ZERO);
        let out = app.on_nack(
            SimTime::from_millis(5),
            &Nack {
                name: "/p/s0/0".parse().unwrap(),
                nonce: Nonce(0),
                reason: NackReason::NoRoute,
            },
        );
        let generation = out
            .iter()
            .find_map(|c| match c {
                AppCmd::Timer {
                    timer: AppTimer::Discovery { generation },
                    ..
                } => Some(*generation),
                _ => None,
            })
            .unwrap();
        let out = app.on_timer(SimTime::from_secs(2), AppTimer::Discovery { generation });
        assert!(sent(&out)[0].is_discovery);
        assert_eq!(app.discoveries_sent, 2);
    }

    #[test]
    fn producer_serves_and_announces_per_strategy() {
        let reg: Name = "/p0".parse().unwrap();
        let mut samba = ProducerApp::new(vec![reg.clone()], Strategy::Samba);
        let mut sl = ProducerApp::new(vec![reg.clone()], Strategy::SelfLearning);
        let di = Interest {
            name: "/p0/s3/17".parse().unwrap(),
            nonce: Nonce(1),
            is_discovery: true,
            hop: 0,
        };
        match samba.on_interest(&di) {
            ProducerReply::Data(d) => assert_eq!(d.announced_prefix, reg),
            other => panic!("{other:?}"),
        }
        match sl.on_interest(&di) {
            ProducerReply::Data(d) => {
                assert_eq!(d.announced_prefix, "/p0/s3".parse().unwrap())
            }
            other => panic!("{other:?}"),
        }
        let wrong = Interest {
            name: "/q/1".parse().unwrap(),
            nonce: Nonce(2),
            is_discovery: false,
            hop: 0,
        };
        assert!(matches!(samba.on_interest(&wrong), ProducerReply::Reject));
    }
}
