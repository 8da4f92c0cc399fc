use std::fmt;
use std::str::FromStr;

use crate::name::Name;

/// Random interest identifier used for loop suppression.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Nonce(pub u64);

impl fmt::Display for Nonce {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:016x}", self.0)
    }
}

/// Forwarding strategy run by every router in a scenario.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Strategy {
    /// Approximate forwarding with multipath discovery.
    Samba,
    /// Exact longest-prefix match, single-path discovery.
    SelfLearning,
}

impl Strategy {
    pub fn as_str(self) -> &'static str {
        match self {
            Strategy::Samba => "samba",
            Strategy::SelfLearning => "self-learning",
        }
    }
}

impl FromStr for Strategy {
    type Err = String;

    fn from_str(s: &str) -> Result<Strategy, String> {
        match s {
            "samba" => Ok(Strategy::Samba),
            "self-learning" => Ok(Strategy::SelfLearning),
            other => Err(format!(
                "unknown strategy '{other}' (expected 'samba' or 'self-learning')"
            )),
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Interest {
    pub name: Name,
    pub nonce: Nonce,
    pub is_discovery: bool,
    /// Hops travelled so far; incremented on every node-to-node send.
    pub hop: u8,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Data {
    pub name: Name,
    /// Prefix the producer announces; discovery data installs exactly this.
    pub announced_prefix: Name,
    pub is_discovery: bool,
    pub payload: u32,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum NackReason {
    NoRoute,
    AltRoute,
    UnsolicitedData,
}

impl NackReason {
    pub fn as_str(self) -> &'static str {
        match self {
            NackReason::NoRoute => "no-route",
            NackReason::AltRoute => "alt-route",
            NackReason::UnsolicitedData => "unsolicited-data",
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Nack {
    pub name: Name,
    pub nonce: Nonce,
    pub reason: NackReason,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Packet {
    Interest(Interest),
    Data(Data),
    Nack(Nack),
}

impl Packet {
    pub fn name(&self) -> &Name {
        match self {
            Packet::Interest(i) => &i.name,
            Packet::Data(d) => &d.name,
            Packet::Nack(n) => &n.name,
        }
    }

    pub fn kind_str(&self) -> &'static str {
        match self {
            Packet::Interest(i) if i.is_discovery => "dint",
            Packet::Interest(_) => "int",
            Packet::Data(d) if d.is_discovery => "ddata",
            Packet::Data(_) => "data",
            Packet::Nack(_) => "nack",
        }
    }
}
