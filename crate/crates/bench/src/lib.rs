//! Criterion benchmark crate; see `benches/fib_trie.rs`.
