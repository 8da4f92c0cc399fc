use crate::name::{Name, TokenMode};

/// Face index local to one node's face table.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct FaceId(pub u32);

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum FaceKind {
    /// Attached application (producer/consumer on this node).
    Local,
    /// Link towards another node.
    Network,
}

/// Result of the public lookup: either a network face to forward on, or
/// nothing usable. Local faces are never surfaced here.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum LookupResult {
    Forward(FaceId),
    NoRoute,
}

/// Longest-prefix-match outcome. `Leaf` is the deepest node on the matched
/// path that carries faces; `Stop` is the deepest matched node when no node
/// on the path carries any face.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Lpm {
    Leaf { node: usize, depth: usize },
    Stop { node: usize, depth: usize },
}

/// Full resolution used by the forwarding engine. `Deliver` means the match
/// landed on a local (application) face via exact longest-prefix match;
/// a local face reached only through the depth-first fallback resolves to
/// `NoRoute` instead, since it cannot serve the name.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Resolution {
    Forward { face: FaceId, leaf: usize },
    Deliver { face: FaceId, leaf: usize },
    NoRoute,
}

const NO_PARENT: u32 = u32::MAX;

#[derive(Clone)]
struct Node {
    token: Box<str>,
    parent: u32,
    /// Child node indices kept sorted by child token (lexicographic).
    children: Vec<u32>,
    faces: Vec<(FaceId, FaceKind)>,
}

/// Prefix trie mapping names to ordered face lists.
///
/// Leaves are nodes with a non-empty face list; interior nodes may become
/// face-less leaves temporarily after face removal and are pruned by
/// `remove_entry`.
#[derive(Clone)]
pub struct FibTrie {
    mode: TokenMode,
    nodes: Vec<Node>,
    free: Vec<u32>,
    leaf_count: usize,
}

impl FibTrie {
    pub fn new(mode: TokenMode) -> FibTrie {
        FibTrie {
            mode,
            nodes: vec![Node {
                token: "".into(),
                parent: NO_PARENT,
                children: Vec::new(),
                faces: Vec::new(),
            }],
            free: Vec::new(),
            leaf_count: 0,
        }
    }

    pub fn mode(&self) -> TokenMode {
        self.mode
    }

    /// Number of entries (nodes with at least one face).
    pub fn leaf_count(&self) -> usize {
        self.leaf_count
    }

    fn find_child(&self, node: usize, token: &str) -> Option<usize> {
        let children = &self.nodes[node].children;
        children
            .binary_search_by(|&c| self.nodes[c as usize].token.as_ref().cmp(token))
            .ok()
            .map(|i| children[i] as usize)
    }

    fn add_child(&mut self, node: usize, token: &str) -> usize {
        let idx = match self.free.pop() {
            Some(i) => {
                let slot = &mut self.nodes[i as usize];
                slot.token = token.into();
                slot.parent = node as u32;
                slot.children.clear();
                slot.faces.clear();
                i as usize
            }
            None => {
                self.nodes.push(Node {
                    token: token.into(),
                    parent: node as u32,
                    children: Vec::new(),
                    faces: Vec::new(),
                });
                self.nodes.len() - 1
            }
        };
        let pos = self.nodes[node]
            .children
            .binary_search_by(|&c| self.nodes[c as usize].token.as_ref().cmp(token))
            .unwrap_err();
        self.nodes[node].children.insert(pos, idx as u32);
        idx
    }

    /// Insert `prefix -> face`. Appends the face to the entry's face list if
    /// absent; an already-present face is a no-op.
    pub fn insert(&mut self, prefix: &Name, face: FaceId, kind: FaceKind) {
        let tokens = prefix.tokens(self.mode);
        self.insert_tokens(&tokens, face, kind);
    }

    /// Same as `insert`, but the entry is only created when the resolved
    /// node has no face yet (single-path installation).
    pub fn insert_if_vacant(&mut self, prefix: &Name, face: FaceId, kind: FaceKind) -> bool {
        let tokens = prefix.tokens(self.mode);
        let mut cur = 0usize;
        let mut exists = true;
        for t in &tokens {
            match self.find_child(cur, t) {
                Some(c) => cur = c,
                None => {
                    exists = false;
                    break;
                }
            }
        }
        if exists && !self.nodes[cur].faces.is_empty() {
            return false;
        }
        self.insert_tokens(&tokens, face, kind);
        true
    }

    pub fn insert_tokens<S: AsRef<str>>(&mut self, tokens: &[S], face: FaceId, kind: FaceKind) {
        let mut cur = 0usize;
        for t in tokens {
            let t = t.as_ref();
            cur = match self.find_child(cur, t) {
                Some(c) => c,
                None => self.add_child(cur, t),
            };
        }
        let node = &mut self.nodes[cur];
        if node.faces.iter().any(|&(f, _)| f == face) {
            return;
        }
        if node.faces.is_empty() {
            self.leaf_count += 1;
        }
        self.nodes[cur].faces.push((face, kind));
    }

    pub fn lpm(&self, name: &Name) -> Lpm {
        self.lpm_tokens(&name.tokens(self.mode))
    }

    pub fn lpm_tokens<S: AsRef<str>>(&self, tokens: &[S]) -> Lpm {
        let mut cur = 0usize;
        let mut depth = 0usize;
        let mut best: Option<(usize, usize)> = None;
        for t in tokens {
            match self.find_child(cur, t.as_ref()) {
                Some(c) => {
                    cur = c;
                    depth += 1;
                    if !self.nodes[cur].faces.is_empty() {
                        best = Some((cur, depth));
                    }
                }
                None => break,
            }
        }
        match best {
            Some((node, d)) => Lpm::Leaf { node, depth: d },
            None => Lpm::Stop { node: cur, depth },
        }
    }

    /// First node carrying faces in pre-order (children in token order)
    /// within the subtrie rooted at `node`, including `node` itself.
    pub fn dfs_first_leaf(&self, node: usize) -> Option<usize> {
        let mut stack = vec![node];
        while let Some(n) = stack.pop() {
            if !self.nodes[n].faces.is_empty() {
                return Some(n);
            }
            for &c in self.nodes[n].children.iter().rev() {
                stack.push(c as usize);
            }
        }
        None
    }

    /// Resolve a name for forwarding: exact longest-prefix match first, then
    /// depth-first fallback from the stopping node. `avoid` skips a face
    /// (typically the arrival face) when the leaf offers alternatives.
    pub fn resolve(&self, name: &Name, avoid: Option<FaceId>) -> Resolution {
        self.resolve_tokens(&name.tokens(self.mode), avoid)
    }

    pub fn resolve_tokens<S: AsRef<str>>(&self, tokens: &[S], avoid: Option<FaceId>) -> Resolution {
        match self.lpm_tokens(tokens) {
            Lpm::Leaf { node, .. } => match self.pick_face(node, avoid) {
                Some((face, FaceKind::Local)) => Resolution::Deliver { face, leaf: node },
                Some((face, FaceKind::Network)) => Resolution::Forward { face, leaf: node },
                None => Resolution::NoRoute,
            },
            Lpm::Stop { node, .. } => match self.dfs_first_leaf(node) {
                Some(leaf) => match self.pick_face(leaf, avoid) {
                    // A local face found only via the fallback means the
                    // interest would land at an application that cannot
                    // serve it: no route.
                    Some((_, FaceKind::Local)) | None => Resolution::NoRoute,
                    Some((face, FaceKind::Network)) => Resolution::Forward { face, leaf },
                },
                None => Resolution::NoRoute,
            },
        }
    }

    /// Strict longest-prefix-match resolution with no depth-first fallback
    /// (the single-path baseline's lookup).
    pub fn resolve_exact(&self, name: &Name, avoid: Option<FaceId>) -> Resolution {
        match self.lpm(name) {
            Lpm::Leaf { node, .. } => match self.pick_face(node, avoid) {
                Some((face, FaceKind::Local)) => Resolution::Deliver { face, leaf: node },
                Some((face, FaceKind::Network)) => Resolution::Forward { face, leaf: node },
                None => Resolution::NoRoute,
            },
            Lpm::Stop { .. } => Resolution::NoRoute,
        }
    }

    fn pick_face(&self, node: usize, avoid: Option<FaceId>) -> Option<(FaceId, FaceKind)> {
        self.nodes[node]
            .faces
            .iter()
            .find(|&&(f, _)| Some(f) != avoid)
            .copied()
    }

    /// Approximate lookup as exposed to forwarding: a local-face resolution
    /// is reported as `NoRoute` (local delivery is the engine's business).
    pub fn af_lookup(&self, name: &Name) -> LookupResult {
        match self.resolve(name, None) {
            Resolution::Forward { face, .. } => LookupResult::Forward(face),
            _ => LookupResult::NoRoute,
        }
    }

    pub fn af_lookup_tokens<S: AsRef<str>>(&self, tokens: &[S]) -> LookupResult {
        match self.resolve_tokens(tokens, None) {
            Resolution::Forward { face, .. } => LookupResult::Forward(face),
            _ => LookupResult::NoRoute,
        }
    }

    /// The leaf a lookup for `name` resolves to, if any.
    fn resolve_leaf(&self, name: &Name) -> Option<usize> {
        match self.lpm(name) {
            Lpm::Leaf { node, .. } => Some(node),
            Lpm::Stop { node, .. } => self.dfs_first_leaf(node),
        }
    }

    /// Remove `face` from the leaf that resolves for `name` (the leaf that
    /// supplied a face that just failed). The node is kept even when its
    /// face list becomes empty; `remove_entry` prunes it.
    pub fn remove_face_from_leaf(&mut self, name: &Name, face: FaceId) {
        if let Some(leaf) = self.resolve_leaf(name) {
            let faces = &mut self.nodes[leaf].faces;
            let before = faces.len();
            faces.retain(|&(f, _)| f != face);
            if before > 0 && faces.is_empty() {
                self.leaf_count -= 1;
            }
        }
    }

    /// Head of the resolved leaf's face list, skipping local faces and any
    /// face in `avoid` (typically the downstream faces of the waiting
    /// interest, to prevent bounce-back).
    pub fn next_alternative_face(&self, name: &Name, avoid: &[FaceId]) -> Option<FaceId> {
        let leaf = self.resolve_leaf(name)?;
        self.nodes[leaf]
            .faces
            .iter()
            .find(|&&(f, k)| k == FaceKind::Network && !avoid.contains(&f))
            .map(|&(f, _)| f)
    }

    /// Record that `face` failed for `name`: remove it from the leaf that
    /// exactly matches the name, pruning the leaf if it loses its last face.
    /// Returns the first surviving network face outside `avoid`, i.e. the
    /// alternative route to try, if one exists at this same leaf.
    ///
    /// Only an exact (longest-prefix) match is touched. A face reached via
    /// the depth-first fallback belongs to a *different* prefix that is
    /// still perfectly routable; failing an approximate path must not erase
    /// it, the consumer recovers by discovering the real prefix instead.
    pub fn fail_face(&mut self, name: &Name, face: FaceId, avoid: &[FaceId]) -> Option<FaceId> {
        let leaf = match self.lpm(name) {
            Lpm::Leaf { node, .. } => node,
            Lpm::Stop { .. } => return None,
        };
        let faces = &mut self.nodes[leaf].faces;
        let before = faces.len();
        faces.retain(|&(f, _)| f != face);
        if before > 0 && self.nodes[leaf].faces.is_empty() {
            self.leaf_count -= 1;
            self.prune_up(leaf);
            return None;
        }
        self.nodes[leaf]
            .faces
            .iter()
            .find(|&&(f, k)| k == FaceKind::Network && !avoid.contains(&f))
            .map(|&(f, _)| f)
    }

    /// Drop the entry `name` resolves to and prune face-less, child-less
    /// ancestors.
    pub fn remove_entry(&mut self, name: &Name) {
        // Deepest existing node on the matched path, with or without faces,
        // so that an entry already emptied by face removal is still pruned.
        let mut cur = 0usize;
        for t in name.tokens(self.mode) {
            match self.find_child(cur, &t) {
                Some(c) => cur = c,
                None => break,
            }
        }
        if cur == 0 {
            return;
        }
        if !self.nodes[cur].faces.is_empty() {
            self.leaf_count -= 1;
        }
        self.nodes[cur].faces.clear();
        self.prune_up(cur);
    }

    fn prune_up(&mut self, mut node: usize) {
        while node != 0
            && self.nodes[node].children.is_empty()
            && self.nodes[node].faces.is_empty()
        {
            let parent = self.nodes[node].parent as usize;
            let pos = self.nodes[parent]
                .children
                .iter()
                .position(|&c| c as usize == node)
                .expect("child listed in parent");
            self.nodes[parent].children.remove(pos);
            self.free.push(node as u32);
            node = parent;
        }
    }

    /// Remove `face` from every entry (link failure). Emptied entries are
    /// pruned. Returns how many entries lost the face.
    pub fn remove_face_everywhere(&mut self, face: FaceId) -> usize {
        let mut affected = Vec::new();
        self.walk_alive(|trie, n| {
            if trie.nodes[n].faces.iter().any(|&(f, _)| f == face) {
                affected.push(n);
            }
        });
        let count = affected.len();
        for n in affected {
            self.nodes[n].faces.retain(|&(f, _)| f != face);
            if self.nodes[n].faces.is_empty() {
                self.leaf_count -= 1;
                self.prune_up(n);
            }
        }
        count
    }

    fn walk_alive(&self, mut visit: impl FnMut(&FibTrie, usize)) {
        let mut stack = vec![0usize];
        while let Some(n) = stack.pop() {
            visit(self, n);
            for &c in self.nodes[n].children.iter().rev() {
                stack.push(c as usize);
            }
        }
    }

    /// All entries with their face lists, in pre-order. Token sequences are
    /// joined with `/`; in component mode that is the canonical name body.
    pub fn entries(&self) -> Vec<(String, Vec<(FaceId, FaceKind)>)> {
        let mut out = Vec::new();
        let mut path: Vec<&str> = Vec::new();
        self.collect_entries(0, &mut path, &mut out);
        out
    }

    fn collect_entries<'a>(
        &'a self,
        node: usize,
        path: &mut Vec<&'a str>,
        out: &mut Vec<(String, Vec<(FaceId, FaceKind)>)>,
    ) {
        if node != 0 {
            path.push(&self.nodes[node].token);
            if !self.nodes[node].faces.is_empty() {
                out.push((path.join("/"), self.nodes[node].faces.clone()));
            }
        }
        for &c in &self.nodes[node].children {
            self.collect_entries(c as usize, path, out);
        }
        if node != 0 {
            path.pop();
        }
    }

    /// Face count at the exact node for `prefix`; 0 when absent. Used by
    /// the paths-per-prefix metric, which counts missing prefixes as zero.
    pub fn faces_at(&self, prefix: &Name) -> usize {
        let mut cur = 0usize;
        for t in prefix.tokens(self.mode) {
            match self.find_child(cur, &t) {
                Some(c) => cur = c,
                None => return 0,
            }
        }
        self.nodes[cur].faces.len()
    }

    /// Face counts of every entry (for per-leaf assertions).
    pub fn leaf_face_counts(&self) -> Vec<usize> {
        let mut counts = Vec::new();
        self.walk_alive(|trie, n| {
            if !trie.nodes[n].faces.is_empty() {
                counts.push(trie.nodes[n].faces.len());
            }
        });
        counts
    }

    /// Total number of faces across all entries (multipath weight).
    pub fn total_faces(&self) -> usize {
        let mut total = 0;
        self.walk_alive(|trie, n| total += trie.nodes[n].faces.len());
        total
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len() - self.free.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn n(s: &str) -> Name {
        s.parse().unwrap()
    }

    const F1: FaceId = FaceId(1);
    const F2: FaceId = FaceId(2);
    const F3: FaceId = FaceId(3);

    fn net(trie: &mut FibTrie, name: &str, f: FaceId) {
        trie.insert(&n(name), f, FaceKind::Network);
    }

    /// Six-entry example trie: two leaves under /A/B resolved via exact
    /// match or fallback, plus an exhausted branch under /A/H.
    fn example_trie() -> FibTrie {
        let mut t = FibTrie::new(TokenMode::Component);
        net(&mut t, "/A/B/D", F1);
        net(&mut t, "/A/B/F", F1);
        net(&mut t, "/A/C/M", F2);
        net(&mut t, "/A/E", F2);
        net(&mut t, "/Q/R", F3);
        net(&mut t, "/Q/S", F3);
        net(&mut t, "/A/H/K", FaceId(9));
        t.remove_face_from_leaf(&n("/A/H/K"), FaceId(9));
        t
    }

    #[test]
    fn example_lookups() {
        let t = example_trie();
        assert_eq!(t.leaf_count(), 6);
        // Exact match.
        assert_eq!(t.af_lookup(&n("/A/B/F")), LookupResult::Forward(F1));
        // Fallback from /A/B picks the lexicographically first leaf (D).
        assert_eq!(t.af_lookup(&n("/A/B/Y")), LookupResult::Forward(F1));
        // Fallback from /A/H finds only a face-less node.
        assert_eq!(t.af_lookup(&n("/A/H/Z")), LookupResult::NoRoute);
    }

    #[test]
    fn lpm_variants() {
        let t = example_trie();
        match t.lpm(&n("/A/B/F")) {
            Lpm::Leaf { depth, .. } => assert_eq!(depth, 3),
            other => panic!("expected leaf, got {other:?}"),
        }
        match t.lpm(&n("/A/B/Y")) {
            Lpm::Stop { depth, .. } => assert_eq!(depth, 2),
            other => panic!("expected stop, got {other:?}"),
        }
        match t.lpm(&n("/Z/Z")) {
            Lpm::Stop { node, depth } => {
                assert_eq!(node, 0);
                assert_eq!(depth, 0);
            }
            other => panic!("expected root stop, got {other:?}"),
        }
    }

    #[test]
    fn deeper_face_on_path_wins() {
        let mut t = FibTrie::new(TokenMode::Component);
        net(&mut t, "/a", F1);
        net(&mut t, "/a/b/c", F2);
        // Path /a/b/c/d matches /a/b/c (deepest with faces).
        assert_eq!(t.af_lookup(&n("/a/b/c/d")), LookupResult::Forward(F2));
        // /a/x only matches /a.
        assert_eq!(t.af_lookup(&n("/a/x")), LookupResult::Forward(F1));
    }

    #[test]
    fn dfs_includes_start_node() {
        let mut t = FibTrie::new(TokenMode::Component);
        net(&mut t, "/a", F1);
        let leaf = match t.lpm(&n("/a")) {
            Lpm::Leaf { node, .. } => node,
            _ => panic!(),
        };
        assert_eq!(t.dfs_first_leaf(leaf), Some(leaf));
    }

    #[test]
    fn local_faces() {
        let mut t = FibTrie::new(TokenMode::Component);
        t.insert(&n("/p"), F1, FaceKind::Local);
        // Exact match on a local face: deliver.
        assert!(matches!(
            t.resolve(&n("/p/3"), None),
            Resolution::Deliver { face: F1, .. }
        ));
        assert_eq!(t.af_lookup(&n("/p/3")), LookupResult::NoRoute);
        // Fallback onto a local face: no route.
        assert_eq!(t.resolve(&n("/q/3"), None), Resolution::NoRoute);
        // Local faces are not alternatives.
        assert_eq!(t.next_alternative_face(&n("/p/3"), &[]), None);
    }

    #[test]
    fn resolve_exact_skips_fallback() {
        let t = example_trie();
        assert!(matches!(
            t.resolve_exact(&n("/A/B/F"), None),
            Resolution::Forward { face: F1, .. }
        ));
        // Fallback paths are not taken.
        assert_eq!(t.resolve_exact(&n("/A/B/Y"), None), Resolution::NoRoute);
        assert_eq!(t.resolve_exact(&n("/A/H/Z"), None), Resolution::NoRoute);
    }

    #[test]
    fn fail_face_returns_alternative_then_prunes() {
        let mut t = FibTrie::new(TokenMode::Component);
        net(&mut t, "/a/b", F1);
        net(&mut t, "/a/b", F2);
        net(&mut t, "/a/b", F3);
        // F2 failing leaves F1 as alternative (F3 avoided: downstream).
        assert_eq!(t.fail_face(&n("/a/b/1"), F2, &[F3]), Some(F1));
        assert_eq!(t.fail_face(&n("/a/b/1"), F1, &[]), Some(F3));
        // Losing the last face prunes the entry entirely.
        assert_eq!(t.fail_face(&n("/a/b/1"), F3, &[]), None);
        assert_eq!(t.node_count(), 1);
        assert_eq!(t.leaf_count(), 0);
    }

    #[test]
    fn face_removal_and_alternatives() {
        let mut t = FibTrie::new(TokenMode::Component);
        net(&mut t, "/a/b", F2);
        net(&mut t, "/a/b", F3);
        assert_eq!(t.leaf_count(), 1);
        assert_eq!(t.af_lookup(&n("/a/b/1")), LookupResult::Forward(F2));
        t.remove_face_from_leaf(&n("/a/b/1"), F2);
        assert_eq!(t.next_alternative_face(&n("/a/b/1"), &[]), Some(F3));
        t.remove_face_from_leaf(&n("/a/b/1"), F3);
        // Node empty but retained until removal.
        assert_eq!(t.leaf_count(), 0);
        assert_eq!(t.next_alternative_face(&n("/a/b/1"), &[]), None);
        t.remove_entry(&n("/a/b/1"));
        assert_eq!(t.node_count(), 1);
    }

    #[test]
    fn remove_entry_prunes_only_empty_ancestors() {
        let mut t = FibTrie::new(TokenMode::Component);
        net(&mut t, "/a/b/c", F1);
        net(&mut t, "/a/x", F2);
        t.remove_entry(&n("/a/b/c"));
        assert_eq!(t.leaf_count(), 1);
        assert_eq!(t.af_lookup(&n("/a/x")), LookupResult::Forward(F2));
        assert_eq!(t.af_lookup(&n("/a/b/c")), LookupResult::Forward(F2)); // fallback
    }

    #[test]
    fn duplicate_insert_is_noop() {
        let mut t = FibTrie::new(TokenMode::Component);
        net(&mut t, "/a", F1);
        net(&mut t, "/a", F1);
        assert_eq!(t.total_faces(), 1);
        net(&mut t, "/a", F2);
        assert_eq!(t.total_faces(), 2);
        assert_eq!(t.leaf_count(), 1);
    }

    #[test]
    fn insert_if_vacant() {
        let mut t = FibTrie::new(TokenMode::Component);
        assert!(t.insert_if_vacant(&n("/a"), F1, FaceKind::Network));
        assert!(!t.insert_if_vacant(&n("/a"), F2, FaceKind::Network));
        assert_eq!(t.total_faces(), 1);
    }

    #[test]
    fn avoid_face_prefers_alternative() {
        let mut t = FibTrie::new(TokenMode::Component);
        net(&mut t, "/a", F1);
        net(&mut t, "/a", F2);
        match t.resolve(&n("/a/1"), Some(F1)) {
            Resolution::Forward { face, .. } => assert_eq!(face, F2),
            other => panic!("{other:?}"),
        }
        // Sole face equal to avoid: refuse to bounce back.
        let mut t2 = FibTrie::new(TokenMode::Component);
        net(&mut t2, "/a", F1);
        assert_eq!(t2.resolve(&n("/a/1"), Some(F1)), Resolution::NoRoute);
    }

    #[test]
    fn character_mode() {
        let mut t = FibTrie::new(TokenMode::Character);
        net(&mut t, "/AB", F1);
        net(&mut t, "/AC", F2);
        assert_eq!(t.af_lookup(&n("/AB")), LookupResult::Forward(F1));
        assert_eq!(t.af_lookup(&n("/AC")), LookupResult::Forward(F2));
        // /AD stops at 'A'; fallback finds 'B' branch first.
        assert_eq!(t.af_lookup(&n("/AD")), LookupResult::Forward(F1));
    }

    #[test]
    fn remove_face_everywhere() {
        let mut t = FibTrie::new(TokenMode::Component);
        net(&mut t, "/a/b", F1);
        net(&mut t, "/a/c", F1);
        net(&mut t, "/a/c", F2);
        assert_eq!(t.remove_face_everywhere(F1), 2);
        assert_eq!(t.leaf_count(), 1);
        assert_eq!(t.af_lookup(&n("/a/b")), LookupResult::Forward(F2));
    }

    #[test]
    fn entries_listing() {
        let t = example_trie();
        let names: Vec<String> = t.entries().into_iter().map(|(p, _)| p).collect();
        assert_eq!(names, ["A/B/D", "A/B/F", "A/C/M", "A/E", "Q/R", "Q/S"]);
    }
}
