//! Property tests for the FIB trie, PIT, and name handling.

use std::collections::BTreeMap;

use proptest::collection::vec;
use proptest::prelude::*;

use samba_core::{FaceId, FaceKind, FibTrie, LookupResult, Name, Pit, SimTime, TokenMode};

fn token() -> impl Strategy<Value = String> {
    prop::sample::select(vec!["a", "b", "c", "d"]).prop_map(str::to_string)
}

fn prefix() -> impl Strategy<Value = Vec<String>> {
    vec(token(), 1..=4)
}

fn lcp(a: &[String], b: &[String]) -> usize {
    a.iter().zip(b.iter()).take_while(|(x, y)| x == y).count()
}

fn oracle(prefixes: &BTreeMap<Vec<String>, FaceId>, q: &[String]) -> LookupResult {
    let exact = prefixes
        .iter()
        .filter(|(p, _)| p.len() <= q.len() && q[..p.len()] == p[..])
        .max_by_key(|(p, _)| p.len());
    if let Some((_, &face)) = exact {
        return LookupResult::Forward(face);
    }
    let depth = prefixes
        .keys()
        .map(|p| lcp(p, q))
        .max()
        .unwrap_or(0)
        .min(q.len());
    prefixes
        .iter()
        .filter(|(p, _)| p.len() > depth && p[..depth] == q[..depth])
        .min_by(|(a, _), (b, _)| a.cmp(b))
        .map_or(LookupResult::NoRoute, |(_, &f)| LookupResult::Forward(f))
}

fn build(prefixes: &[Vec<String>]) -> (FibTrie, BTreeMap<Vec<String>, FaceId>) {
    let mut trie = FibTrie::new(TokenMode::Component);
    let mut map = BTreeMap::new();
    for (i, p) in prefixes.iter().enumerate() {
        if let std::collections::btree_map::Entry::Vacant(e) = map.entry(p.clone()) {
            let face = FaceId(i as u32);
            e.insert(face);
            trie.insert_tokens(p, face, FaceKind::Network);
        }
    }
    (trie, map)
}

proptest! {
    /// Approximate forwarding equals the brute-force oracle.
    #[test]
    fn af_lookup_matches_oracle(
        prefixes in vec(prefix(), 0..20),
        query in vec(token(), 1..=6),
    ) {
        let (trie, map) = build(&prefixes);
        prop_assert_eq!(trie.af_lookup_tokens(&query), oracle(&map, &query));
    }

    /// Leaf count equals the number of distinct inserted prefixes, and
    /// removing every entry leaves an empty trie.
    #[test]
    fn insert_remove_roundtrip(prefixes in vec(prefix(), 1..20)) {
        let (mut trie, map) = build(&prefixes);
        prop_assert_eq!(trie.leaf_count(), map.len());
        for p in map.keys() {
            let name = Name::from_components(p.iter().cloned()).unwrap();
            trie.remove_entry(&name);
        }
        prop_assert_eq!(trie.leaf_count(), 0);
        prop_assert_eq!(trie.node_count(), 1); // only the root remains
    }

    /// A prefix resolves to every face in insertion order as earlier faces
    /// are failed, then disappears from the trie entirely.
    #[test]
    fn face_failover_order(faces in vec(0u32..64, 1..6)) {
        let mut distinct: Vec<u32> = Vec::new();
        for f in faces {
            if !distinct.contains(&f) {
                distinct.push(f);
            }
        }
        let name: Name = "/p/s0".parse().unwrap();
        let mut trie = FibTrie::new(TokenMode::Component);
        for &f in &distinct {
            trie.insert(&name, FaceId(f), FaceKind::Network);
        }
        for (i, &f) in distinct.iter().enumerate() {
            prop_assert_eq!(trie.af_lookup(&name), LookupResult::Forward(FaceId(f)));
            let next = trie.fail_face(&name, FaceId(f), &[]);
            let expect = distinct.get(i + 1).map(|&g| FaceId(g));
            prop_assert_eq!(next, expect);
        }
        prop_assert_eq!(trie.af_lookup(&name), LookupResult::NoRoute);
        prop_assert_eq!(trie.leaf_count(), 0);
    }

    /// PIT entries are gone once expired at max(lifetime, tmp) and never
    /// report as overdue straight after the expiry sweep.
    #[test]
    fn pit_expiry_is_tight(
        lifetime_ms in 1u64..3000,
        tmp_ms in 1u64..200,
        probe_ms in 0u64..4000,
    ) {
        let name: Name = "/p/s0".parse().unwrap();
        let mut pit = Pit::new();
        let t0 = SimTime::ZERO;
        let lifetime = SimTime::from_millis(lifetime_ms);
        pit.admit(&name, samba_core::Nonce(1), FaceId(0), false, 0, t0, lifetime);
        pit.open_alt_window(&name, FaceId(1), SimTime::from_millis(tmp_ms));
        let deadline = SimTime::from_millis(lifetime_ms.max(tmp_ms));
        let probe = SimTime::from_millis(probe_ms);
        let removed = pit.expire(&name, probe);
        prop_assert_eq!(removed, probe >= deadline);
        prop_assert_eq!(pit.overdue(probe), 0);
    }

    /// Names render and reparse losslessly.
    #[test]
    fn name_roundtrip(parts in vec("[a-z0-9]{1,8}", 1..=5)) {
        let name = Name::from_components(parts.iter().cloned()).unwrap();
        let reparsed: Name = name.to_string().parse().unwrap();
        prop_assert_eq!(name, reparsed);
    }
}
