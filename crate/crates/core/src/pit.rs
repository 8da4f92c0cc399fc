use std::collections::{BTreeMap, HashSet, VecDeque};

use smallvec::SmallVec;

use crate::fib::FaceId;
use crate::name::Name;
use crate::packet::Nonce;
use crate::time::SimTime;

pub const DEAD_NONCE_CAPACITY: usize = 4096;

/// Outcome of admitting an interest.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Admit {
    /// No pending record for this identity; caller forwards/broadcasts.
    /// Discoveries are identified by (name, nonce), regular interests by name.
    New,
    /// Recorded on an existing entry; caller discards the packet.
    AppendedFace,
    /// Nonce seen before (live entry or dead-nonce list): looping copy.
    LoopDrop,
    /// Retransmission from a face already waiting on this name.
    DuplicateDrop,
}

/// Outcome of matching arriving data against the table.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum DataMatch {
    /// First data for the entry; downstream faces recorded so far.
    FirstData(Vec<FaceId>),
    /// Further data within the alternative-egress window.
    AltWindow,
    /// No live entry (or window closed): unsolicited.
    Unsolicited,
}

#[derive(Clone, Debug)]
pub struct PitEntry {
    /// Nonces seen for this name with the hop distance of their first copy.
    pub nonces: SmallVec<[(Nonce, u8); 2]>,
    pub in_faces: Vec<FaceId>,
    pub out_pending: Vec<FaceId>,
    pub is_discovery: bool,
    pub lifetime_expiry: SimTime,
    /// Alternative-egress window; set once the first data is consumed.
    pub tmp_expiry: Option<SimTime>,
}

impl PitEntry {
    pub fn max_expiry(&self) -> SimTime {
        self.tmp_expiry
            .map_or(self.lifetime_expiry, |t| t.max(self.lifetime_expiry))
    }
}

/// Pending-interest table with a fixed-capacity dead-nonce list for loop
/// suppression after entry removal.
pub struct Pit {
    entries: BTreeMap<Name, PitEntry>,
    dead_set: HashSet<(Name, Nonce)>,
    dead_fifo: VecDeque<(Name, Nonce)>,
}

impl Pit {
    pub fn new() -> Pit {
        Pit {
            entries: BTreeMap::new(),
            dead_set: HashSet::new(),
            dead_fifo: VecDeque::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, name: &Name) -> Option<&PitEntry> {
        self.entries.get(name)
    }

    /// Whether a live entry has already seen this nonce.
    pub fn has_nonce(&self, name: &Name, nonce: Nonce) -> bool {
        self.entries
            .get(name)
            .is_some_and(|e| e.nonces.iter().any(|&(n, _)| n == nonce))
    }

    pub fn entries(&self) -> impl Iterator<Item = (&Name, &PitEntry)> {
        self.entries.iter()
    }

    /// Admit an interest. `hop` is the advertised hop distance the packet
    /// travelled; for discoveries an extra downstream face is only recorded
    /// when the duplicate arrived over an equally short path, which keeps
    /// the recorded in-faces on shortest alternative branches.
    #[allow(clippy::too_many_arguments)]
    pub fn admit(
        &mut self,
        name: &Name,
        nonce: Nonce,
        iface: FaceId,
        is_discovery: bool,
        hop: u8,
        now: SimTime,
        lifetime: SimTime,
    ) -> Admit {
        if self.dead_set.contains(&(name.clone(), nonce)) {
            return Admit::LoopDrop;
        }
        match self.entries.get_mut(name) {
            None => {
                self.entries.insert(
                    name.clone(),
                    PitEntry {
                        nonces: SmallVec::from_elem((nonce, hop), 1),
                        in_faces: vec![iface],
                        out_pending: Vec::new(),
                        is_discovery,
                        lifetime_expiry: now + lifetime,
                        tmp_expiry: None,
                    },
                );
                Admit::New
            }
            Some(entry) => {
                if is_discovery {
                    match entry.nonces.iter().find(|&&(n, _)| n == nonce) {
                        Some(&(_, first_hop)) => {
                            if hop <= first_hop && !entry.in_faces.contains(&iface) {
                                entry.in_faces.push(iface);
                            }
                            Admit::AppendedFace
                        }
                        None => {
                            // A distinct nonce is a distinct discovery wave;
                            // record it and let the caller broadcast again.
                            // Any alternative-egress window left over from an
                            // earlier wave is stale: the new wave is waiting
                            // for a first data again.
                            entry.nonces.push((nonce, hop));
                            entry.is_discovery = true;
                            entry.tmp_expiry = None;
                            if !entry.in_faces.contains(&iface) {
                                entry.in_faces.push(iface);
                            }
                            entry.lifetime_expiry = entry.lifetime_expiry.max(now + lifetime);
                            Admit::New
                        }
                    }
                } else if entry.nonces.iter().any(|&(n, _)| n == nonce) {
                    Admit::LoopDrop
                } else if entry.in_faces.contains(&iface) {
                    Admit::DuplicateDrop
                } else {
                    entry.nonces.push((nonce, hop));
                    entry.in_faces.push(iface);
                    Admit::AppendedFace
                }
            }
        }
    }

    pub fn mark_sent(&mut self, name: &Name, faces: &[FaceId]) {
        if let Some(entry) = self.entries.get_mut(name) {
            for f in faces {
                if !entry.out_pending.contains(f) {
                    entry.out_pending.push(*f);
                }
            }
        }
    }

    /// Match data against the table; callers decide how to consume.
    pub fn match_data(&mut self, name: &Name, now: SimTime) -> DataMatch {
        let Some(entry) = self.entries.get(name) else {
            return DataMatch::Unsolicited;
        };
        match entry.tmp_expiry {
            None => DataMatch::FirstData(entry.in_faces.clone()),
            Some(t) if now < t => DataMatch::AltWindow,
            Some(_) => {
                self.remove(name);
                DataMatch::Unsolicited
            }
        }
    }

    /// After the first data: clear downstream faces, drop the satisfied
    /// upstream face and open the alternative-egress window.
    pub fn open_alt_window(&mut self, name: &Name, oface: FaceId, tmp_expiry: SimTime) {
        if let Some(entry) = self.entries.get_mut(name) {
            entry.in_faces.clear();
            entry.out_pending.retain(|&f| f != oface);
            entry.tmp_expiry = Some(tmp_expiry);
        }
    }

    pub fn clear_out_face(&mut self, name: &Name, oface: FaceId) {
        if let Some(entry) = self.entries.get_mut(name) {
            entry.out_pending.retain(|&f| f != oface);
        }
    }

    /// Names of entries still waiting on `face` upstream.
    pub fn pending_on_face(&self, face: FaceId) -> Vec<Name> {
        self.entries
            .iter()
            .filter(|(_, e)| e.out_pending.contains(&face))
            .map(|(n, _)| n.clone())
            .collect()
    }

    pub fn remove(&mut self, name: &Name) {
        if let Some(entry) = self.entries.remove(name) {
            for (nonce, _) in entry.nonces {
                self.push_dead(name.clone(), nonce);
            }
        }
    }

    fn push_dead(&mut self, name: Name, nonce: Nonce) {
        let key = (name, nonce);
        if self.dead_set.insert(key.clone()) {
            self.dead_fifo.push_back(key);
            if self.dead_fifo.len() > DEAD_NONCE_CAPACITY {
                if let Some(old) = self.dead_fifo.pop_front() {
                    self.dead_set.remove(&old);
                }
            }
        }
    }

    /// Entries whose maximum lifetime has already passed; a lazy-expiry
    /// scheme is correct only while this stays zero at every timer tick.
    pub fn overdue(&self, now: SimTime) -> usize {
        self.entries
            .values()
            .filter(|e| now > e.max_expiry())
            .count()
    }

    /// Drop the entry if its maximum lifetime has passed. Returns whether it
    /// was removed.
    pub fn expire(&mut self, name: &Name, now: SimTime) -> bool {
        let due = self
            .entries
            .get(name)
            .is_some_and(|e| now >= e.max_expiry());
        if due {
            self.remove(name);
        }
        due
    }
}

impl Default for Pit {
    fn default() -> Pit {
        Pit::new()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn name(s: &str) -> Name {
        s.parse().unwrap()
    }

    const LIFE: SimTime = SimTime::from_secs(2);
    const F1: FaceId = FaceId(1);
    const F2: FaceId = FaceId(2);
    const F3: FaceId = FaceId(3);

    #[test]
    fn admit_matrix() {
        let mut pit = Pit::new();
        let n = name("/a/1");
        let t0 = SimTime::ZERO;
        assert_eq!(pit.admit(&n, Nonce(7), F1, false, 0, t0, LIFE), Admit::New);
        // Same nonce again: loop.
        assert_eq!(
            pit.admit(&n, Nonce(7), F2, false, 0, t0, LIFE),
            Admit::LoopDrop
        );
        // Different nonce, new face: aggregation.
        assert_eq!(
            pit.admit(&n, Nonce(8), F2, false, 0, t0, LIFE),
            Admit::AppendedFace
        );
        // Different nonce, same face: retransmission.
        assert_eq!(
            pit.admit(&n, Nonce(9), F1, false, 0, t0, LIFE),
            Admit::DuplicateDrop
        );
        assert_eq!(pit.get(&n).unwrap().in_faces, vec![F1, F2]);
    }

    #[test]
    fn discovery_duplicates_append() {
        let mut pit = Pit::new();
        let n = name("/p/1");
        let t0 = SimTime::ZERO;
        assert_eq!(pit.admit(&n, Nonce(1), F1, true, 2, t0, LIFE), Admit::New);
        // Equal-length duplicate: face recorded.
        assert_eq!(
            pit.admit(&n, Nonce(1), F2, true, 2, t0, LIFE),
            Admit::AppendedFace
        );
        assert_eq!(pit.get(&n).unwrap().in_faces, vec![F1, F2]);
        // Longer-path duplicate: discarded without recording.
        assert_eq!(
            pit.admit(&n, Nonce(1), F3, true, 5, t0, LIFE),
            Admit::AppendedFace
        );
        assert_eq!(pit.get(&n).unwrap().in_faces, vec![F1, F2]);
        // Fresh nonce: new wave, rebroadcast.
        assert_eq!(pit.admit(&n, Nonce(2), F3, true, 1, t0, LIFE), Admit::New);
        assert_eq!(pit.get(&n).unwrap().in_faces, vec![F1, F2, F3]);
    }

    #[test]
    fn data_matching_and_alt_window() {
        let mut pit = Pit::new();
        let n = name("/p/1");
        let t0 = SimTime::ZERO;
        pit.admit(&n, Nonce(1), F1, true, 0, t0, LIFE);
        pit.mark_sent(&n, &[F2, F3]);
        match pit.match_data(&n, SimTime::from_millis(30)) {
            DataMatch::FirstData(faces) => assert_eq!(faces, vec![F1]),
            other => panic!("{other:?}"),
        }
        pit.open_alt_window(&n, F2, SimTime::from_millis(80));
        assert_eq!(pit.get(&n).unwrap().out_pending, vec![F3]);
        assert_eq!(
            pit.match_data(&n, SimTime::from_millis(60)),
            DataMatch::AltWindow
        );
        // Window closed: unsolicited and entry dropped.
        assert_eq!(
            pit.match_data(&n, SimTime::from_millis(90)),
            DataMatch::Unsolicited
        );
        assert!(pit.get(&n).is_none());
    }

    #[test]
    fn unsolicited_without_entry() {
        let mut pit = Pit::new();
        assert_eq!(
            pit.match_data(&name("/x/1"), SimTime::ZERO),
            DataMatch::Unsolicited
        );
    }

    #[test]
    fn dead_nonce_loop_drop_after_removal() {
        let mut pit = Pit::new();
        let n = name("/a/1");
        pit.admit(&n, Nonce(5), F1, false, 0, SimTime::ZERO, LIFE);
        pit.remove(&n);
        assert_eq!(
            pit.admit(&n, Nonce(5), F1, false, 0, SimTime::ZERO, LIFE),
            Admit::LoopDrop
        );
        // A fresh nonce is fine.
        assert_eq!(
            pit.admit(&n, Nonce(6), F1, false, 0, SimTime::ZERO, LIFE),
            Admit::New
        );
    }

    #[test]
    fn dead_nonce_list_is_bounded() {
        let mut pit = Pit::new();
        for i in 0..(DEAD_NONCE_CAPACITY + 10) {
            let n = name(&format!("/x/{i}"));
            pit.admit(&n, Nonce(i as u64), F1, false, 0, SimTime::ZERO, LIFE);
            pit.remove(&n);
        }
        assert_eq!(pit.dead_fifo.len(), DEAD_NONCE_CAPACITY);
        // Oldest entry evicted.
        assert_eq!(
            pit.admit(&name("/x/0"), Nonce(0), F1, false, 0, SimTime::ZERO, LIFE),
            Admit::New
        );
    }

    #[test]
    fn expiry_honours_alt_window() {
        let mut pit = Pit::new();
        let n = name("/p/1");
        pit.admit(&n, Nonce(1), F1, true, 0, SimTime::ZERO, SimTime::from_millis(100));
        pit.open_alt_window(&n, F2, SimTime::from_millis(300));
        assert!(!pit.expire(&n, SimTime::from_millis(150)));
        assert!(pit.expire(&n, SimTime::from_millis(300)));
        assert!(pit.is_empty());
    }

    #[test]
    fn pending_on_face() {
        let mut pit = Pit::new();
        let a = name("/a/1");
        let b = name("/b/1");
        pit.admit(&a, Nonce(1), F1, false, 0, SimTime::ZERO, LIFE);
        pit.admit(&b, Nonce(2), F1, false, 0, SimTime::ZERO, LIFE);
        pit.mark_sent(&a, &[F2]);
        pit.mark_sent(&b, &[F3]);
        assert_eq!(pit.pending_on_face(F2), vec![a]);
    }
}
