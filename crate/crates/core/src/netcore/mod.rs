//! Networks, maximum flows, unit-cost min-cost flows and residual labels.

mod chains;
mod labels;
mod maxflow;
mod mcf;
mod network;

pub(crate) use chains::Items;
pub use chains::{potential_chains, Chain};
pub(crate) use labels::{augment, labels_within};
pub use labels::{residual_labels, ResidualLabels, ResidualStep, INF_DELTA};
pub use maxflow::{cut_capacity, max_flow, max_flow_from, max_flow_value, FlowResult};
pub use mcf::min_cost_flow_unit;
pub(crate) use mcf::{unit_cost_flow, unit_cost_profile};
pub(crate) use network::check_horizon;
pub use network::{Arc, ArcId, ArcKind, ArcSet, Instance, Network, NodeId, Violation};

/// Every invariant violation of `net`; empty iff the network is well formed.
pub fn validate_network(net: &Network) -> Vec<Violation> {
    net.validate()
}
