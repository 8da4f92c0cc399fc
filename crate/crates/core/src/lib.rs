//! Core library for the SAMBA network simulator: a FIB trie with
//! approximate forwarding, a deterministic discrete-event engine, topology
//! generation, measurement sweeps, and a trie microbenchmark harness.

pub mod apps;
pub mod engine;
pub mod experiments;
pub mod fib;
pub mod fibbench;
pub mod metrics;
pub mod name;
pub mod packet;
pub mod pit;
pub mod scenario;
pub mod sim;
pub mod time;
pub mod topo;

pub use fib::{FaceId, FaceKind, FibTrie, LookupResult, Resolution};
pub use name::{Name, TokenMode};
pub use packet::{Data, Interest, Nack, NackReason, Nonce, Packet, Strategy};
pub use pit::Pit;
pub use sim::{RunReport, Sim, SimConfig};
pub use time::SimTime;
pub use topo::{generate, NodeId, TopoParams, Topology};
