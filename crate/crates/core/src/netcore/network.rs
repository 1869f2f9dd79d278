use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type NodeId = usize;

/// Dense arc index; arcs of a network are numbered `0..arc_count()`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ArcId(pub usize);

impl fmt::Display for ArcId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ArcKind {
    /// Usable from the first period on.
    Existing,
    /// Usable only in periods after it has been built.
    Potential,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Arc {
    pub id: ArcId,
    pub tail: NodeId,
    pub head: NodeId,
    pub capacity: u64,
    pub kind: ArcKind,
}

impl Arc {
    pub fn is_potential(&self) -> bool {
        self.kind == ArcKind::Potential
    }
}

/// A structural defect found by [`Network::validate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    SourceIsSink,
    NodeOutOfRange { what: &'static str, node: NodeId },
    ArcEndpointOutOfRange { arc: ArcId, node: NodeId },
    ZeroCapacity { arc: ArcId },
    SelfLoop { arc: ArcId },
    IdMismatch { position: usize, id: ArcId },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::SourceIsSink => write!(f, "source equals sink"),
            Violation::NodeOutOfRange { what, node } => write!(f, "{what} {node} out of range"),
            Violation::ArcEndpointOutOfRange { arc, node } => {
                write!(f, "arc {arc}: endpoint {node} out of range")
            }
            Violation::ZeroCapacity { arc } => write!(f, "arc {arc}: capacity < 1"),
            Violation::SelfLoop { arc } => write!(f, "arc {arc}: self-loop"),
            Violation::IdMismatch { position, id } => {
                write!(f, "arc at position {position} has id {id} (duplicate or gap)")
            }
        }
    }
}

/// Directed s-t network whose arcs are either existing or potential.
///
/// The adjacency lists are maintained alongside the arc list so the flow
/// routines never have to rebuild them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Network {
    node_count: usize,
    source: NodeId,
    sink: NodeId,
    arcs: Vec<Arc>,
    out_arcs: Vec<Vec<ArcId>>,
    in_arcs: Vec<Vec<ArcId>>,
}

impl Network {
    pub fn new(node_count: usize, source: NodeId, sink: NodeId) -> Self {
        Network {
            node_count,
            source,
            sink,
            arcs: Vec::new(),
            out_arcs: vec![Vec::new(); node_count],
            in_arcs: vec![Vec::new(); node_count],
        }
    }

    /// Appends an arc without validating it; see [`Network::validate`].
    pub fn add_arc(&mut self, tail: NodeId, head: NodeId, capacity: u64, kind: ArcKind) -> ArcId {
        let id = ArcId(self.arcs.len());
        self.push_arc(Arc { id, tail, head, capacity, kind });
        id
    }

    pub fn add_existing(&mut self, tail: NodeId, head: NodeId, capacity: u64) -> ArcId {
        self.add_arc(tail, head, capacity, ArcKind::Existing)
    }

    pub fn add_potential(&mut self, tail: NodeId, head: NodeId, capacity: u64) -> ArcId {
        self.add_arc(tail, head, capacity, ArcKind::Potential)
    }

    /// Appends a path of `len` potential arcs from `from` to `to`, creating
    /// `len - 1` fresh interior nodes. Returns the arc ids in path order.
    pub fn add_potential_path(&mut self, from: NodeId, to: NodeId, len: usize, capacity: u64) -> Vec<ArcId> {
        assert!(len >= 1, "a path needs at least one arc");
        let mut ids = Vec::with_capacity(len);
        let mut prev = from;
        for step in 0..len {
            let next = if step + 1 == len { to } else { self.add_node() };
            ids.push(self.add_potential(prev, next, capacity));
            prev = next;
        }
        ids
    }

    pub fn add_node(&mut self) -> NodeId {
        self.node_count += 1;
        self.out_arcs.push(Vec::new());
        self.in_arcs.push(Vec::new());
        self.node_count - 1
    }

    /// Inserts an arc carrying an explicit id. Used by the file reader so that
    /// id gaps and duplicates surface as violations instead of being renumbered.
    pub(crate) fn push_arc(&mut self, arc: Arc) {
        if arc.tail < self.node_count {
            self.out_arcs[arc.tail].push(ArcId(self.arcs.len()));
        }
        if arc.head < self.node_count {
            self.in_arcs[arc.head].push(ArcId(self.arcs.len()));
        }
        self.arcs.push(arc);
    }

    pub fn validate(&self) -> Vec<Violation> {
        let mut v = Vec::new();
        if self.source >= self.node_count {
            v.push(Violation::NodeOutOfRange { what: "source", node: self.source });
        }
        if self.sink >= self.node_count {
            v.push(Violation::NodeOutOfRange { what: "sink", node: self.sink });
        }
        if self.source == self.sink {
            v.push(Violation::SourceIsSink);
        }
        for (pos, a) in self.arcs.iter().enumerate() {
            if a.id.0 != pos {
                v.push(Violation::IdMismatch { position: pos, id: a.id });
            }
            for node in [a.tail, a.head] {
                if node >= self.node_count {
                    v.push(Violation::ArcEndpointOutOfRange { arc: a.id, node });
                }
            }
            if a.tail == a.head {
                v.push(Violation::SelfLoop { arc: a.id });
            }
            if a.capacity < 1 {
                v.push(Violation::ZeroCapacity { arc: a.id });
            }
        }
        v
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_empty()
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn source(&self) -> NodeId {
        self.source
    }

    pub fn sink(&self) -> NodeId {
        self.sink
    }

    pub fn arc_count(&self) -> usize {
        self.arcs.len()
    }

    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    pub fn arc(&self, id: ArcId) -> &Arc {
        &self.arcs[id.0]
    }

    pub fn out_arcs(&self, node: NodeId) -> &[ArcId] {
        &self.out_arcs[node]
    }

    pub fn in_arcs(&self, node: NodeId) -> &[ArcId] {
        &self.in_arcs[node]
    }

    pub fn potential_arcs(&self) -> impl Iterator<Item = ArcId> + '_ {
        self.arcs.iter().filter(|a| a.is_potential()).map(|a| a.id)
    }

    pub fn potential_count(&self) -> usize {
        self.arcs.iter().filter(|a| a.is_potential()).count()
    }

    pub fn existing_set(&self) -> ArcSet {
        ArcSet::from_ids(self.arc_count(), self.arcs.iter().filter(|a| !a.is_potential()).map(|a| a.id))
    }

    pub fn potential_set(&self) -> ArcSet {
        ArcSet::from_ids(self.arc_count(), self.potential_arcs())
    }

    pub fn all_arcs(&self) -> ArcSet {
        ArcSet::full(self.arc_count())
    }

    pub fn is_unit_capacity(&self) -> bool {
        self.arcs.iter().all(|a| a.capacity == 1)
    }

    /// Errors with the first arc whose capacity exceeds one.
    pub fn require_unit_capacity(&self) -> Result<()> {
        match self.arcs.iter().find(|a| a.capacity != 1) {
            Some(a) => Err(Error::UnitCapacityRequired { arc: a.id, capacity: a.capacity }),
            None => Ok(()),
        }
    }
}

/// A network together with its planning horizon.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    pub network: Network,
    pub horizon: u64,
}

impl Instance {
    /// Validates the network and requires `horizon > |A_p|`.
    pub fn new(network: Network, horizon: u64) -> Result<Self> {
        let violations = network.validate();
        if !violations.is_empty() {
            return Err(Error::InvalidNetwork(violations));
        }
        check_horizon(&network, horizon)?;
        Ok(Instance { network, horizon })
    }

    /// Instance with the tightest legal horizon, `|A_p| + 1`.
    pub fn with_min_horizon(network: Network) -> Result<Self> {
        let t = network.potential_count() as u64 + 1;
        Instance::new(network, t)
    }
}

pub(crate) fn check_horizon(net: &Network, horizon: u64) -> Result<()> {
    let potential = net.potential_count();
    if horizon <= potential as u64 {
        return Err(Error::HorizonTooShort { horizon, potential });
    }
    Ok(())
}

/// Fixed-size bitset over arc ids.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ArcSet {
    words: Vec<u64>,
    universe: usize,
}

impl ArcSet {
    pub fn empty(universe: usize) -> Self {
        ArcSet { words: vec![0; universe.div_ceil(64)], universe }
    }

    pub fn full(universe: usize) -> Self {
        let mut s = ArcSet::empty(universe);
        for i in 0..universe {
            s.insert(ArcId(i));
        }
        s
    }

    pub fn from_ids(universe: usize, ids: impl IntoIterator<Item = ArcId>) -> Self {
        let mut s = ArcSet::empty(universe);
        for id in ids {
            s.insert(id);
        }
        s
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn insert(&mut self, id: ArcId) -> bool {
        assert!(id.0 < self.universe, "arc {id} outside set universe {}", self.universe);
        let (w, b) = (id.0 / 64, id.0 % 64);
        let fresh = self.words[w] & (1 << b) == 0;
        self.words[w] |= 1 << b;
        fresh
    }

    pub fn remove(&mut self, id: ArcId) {
        if id.0 < self.universe {
            self.words[id.0 / 64] &= !(1 << (id.0 % 64));
        }
    }

    pub fn contains(&self, id: ArcId) -> bool {
        id.0 < self.universe && self.words[id.0 / 64] & (1 << (id.0 % 64)) != 0
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn union_with(&mut self, other: &ArcSet) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    pub fn union(&self, other: &ArcSet) -> ArcSet {
        let mut s = self.clone();
        s.union_with(other);
        s
    }

    pub fn difference(&self, other: &ArcSet) -> ArcSet {
        let mut s = self.clone();
        for (a, b) in s.words.iter_mut().zip(&other.words) {
            *a &= !b;
        }
        s
    }

    pub fn is_subset(&self, other: &ArcSet) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    /// Ids in increasing order.
    pub fn iter(&self) -> impl Iterator<Item = ArcId> + '_ {
        (0..self.universe).map(ArcId).filter(|&id| self.contains(id))
    }

    pub fn to_vec(&self) -> Vec<ArcId> {
        self.iter().collect()
    }
}

impl fmt::Debug for ArcSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter().map(|a| a.0)).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_arc_is_valid() {
        let mut net = Network::new(2, 0, 1);
        net.add_existing(0, 1, 1);
        assert!(net.validate().is_empty());
    }

    #[test]
    fn zero_capacity_is_reported() {
        let mut net = Network::new(2, 0, 1);
        net.add_existing(0, 1, 0);
        let v = net.validate();
        assert_eq!(v, vec![Violation::ZeroCapacity { arc: ArcId(0) }]);
        assert!(v[0].to_string().contains("capacity < 1"));
    }

    #[test]
    fn self_loop_is_reported() {
        let mut net = Network::new(3, 0, 2);
        net.add_potential(1, 1, 2);
        let v = net.validate();
        assert_eq!(v, vec![Violation::SelfLoop { arc: ArcId(0) }]);
        assert!(v[0].to_string().contains("self-loop"));
    }

    #[test]
    fn every_violation_is_collected() {
        let mut net = Network::new(2, 1, 1);
        net.add_existing(0, 5, 0);
        net.push_arc(Arc { id: ArcId(0), tail: 0, head: 1, capacity: 1, kind: ArcKind::Existing });
        let v = net.validate();
        assert!(v.contains(&Violation::SourceIsSink));
        assert!(v.contains(&Violation::ArcEndpointOutOfRange { arc: ArcId(0), node: 5 }));
        assert!(v.contains(&Violation::ZeroCapacity { arc: ArcId(0) }));
        assert!(v.contains(&Violation::IdMismatch { position: 1, id: ArcId(0) }));
    }

    #[test]
    fn horizon_must_exceed_potential_count() {
        let mut net = Network::new(2, 0, 1);
        net.add_potential(0, 1, 1);
        assert!(matches!(Instance::new(net.clone(), 1), Err(Error::HorizonTooShort { .. })));
        assert!(Instance::new(net, 2).is_ok());
    }

    #[test]
    fn potential_path_creates_interior_nodes() {
        let mut net = Network::new(2, 0, 1);
        let ids = net.add_potential_path(0, 1, 3, 1);
        assert_eq!(ids.len(), 3);
        assert_eq!(net.node_count(), 4);
        assert_eq!(net.arc(ids[0]).tail, 0);
        assert_eq!(net.arc(ids[2]).head, 1);
        assert!(net.is_valid());
    }

    #[test]
    fn arc_set_ops() {
        let mut a = ArcSet::empty(130);
        assert!(a.insert(ArcId(3)));
        assert!(!a.insert(ArcId(3)));
        a.insert(ArcId(129));
        let b = ArcSet::from_ids(130, [ArcId(3), ArcId(64)]);
        assert_eq!(a.union(&b).to_vec(), vec![ArcId(3), ArcId(64), ArcId(129)]);
        assert_eq!(a.difference(&b).to_vec(), vec![ArcId(129)]);
        assert!(ArcSet::from_ids(130, [ArcId(3)]).is_subset(&a));
        assert_eq!(a.len(), 2);
    }
}
