//! Small hand-built instances used by tests, benches, and the docs.

use crate::mixing::{FlowMask, MixingDesign};
use crate::netmodel::{CostFn, Edge, Flow, NetworkInstance, Terminal};

fn unit_edge(tail: u32, head: u32, capacity: f64) -> Edge {
    Edge {
        tail,
        head,
        capacity,
        cost: CostFn::Linear { a: 1.0 },
    }
}

/// Seven-node network with three flows and two terminals; terminal 6 demands
/// flows {1,2}, terminal 7 demands {1,2,3}. Unit rates, capacity 2, unit
/// linear costs. The smallest instance where one mixing slot is infeasible
/// but two suffice.
pub fn fig2() -> NetworkInstance {
    let edges = vec![
        unit_edge(1, 6, 2.0),
        unit_edge(1, 4, 2.0),
        unit_edge(2, 7, 2.0),
        unit_edge(2, 4, 2.0),
        unit_edge(3, 4, 2.0),
        unit_edge(4, 5, 2.0),
        unit_edge(5, 6, 2.0),
        unit_edge(5, 7, 2.0),
    ];
    NetworkInstance::new(
        (1..=7).collect(),
        edges,
        vec![
            Flow { source: 1, rate: 1.0 },
            Flow { source: 2, rate: 1.0 },
            Flow { source: 3, rate: 1.0 },
        ],
        vec![
            Terminal { node: 6, demands: vec![1, 2] },
            Terminal { node: 7, demands: vec![1, 2, 3] },
        ],
    )
}

/// Classical butterfly: two unit-rate flows multicast to two terminals over
/// unit-capacity edges. Node 3 is the coding point; without inter-flow
/// mixing the middle edge (3,4) is a bottleneck.
pub fn butterfly() -> NetworkInstance {
    let edges = vec![
        unit_edge(1, 3, 1.0),
        unit_edge(1, 5, 1.0),
        unit_edge(2, 3, 1.0),
        unit_edge(2, 6, 1.0),
        unit_edge(3, 4, 1.0),
        unit_edge(4, 5, 1.0),
        unit_edge(4, 6, 1.0),
    ];
    NetworkInstance::new(
        (1..=6).collect(),
        edges,
        vec![
            Flow { source: 1, rate: 1.0 },
            Flow { source: 2, rate: 1.0 },
        ],
        vec![
            Terminal { node: 5, demands: vec![1, 2] },
            Terminal { node: 6, demands: vec![1, 2] },
        ],
    )
}

/// Three disjoint unicast sessions sharing no edges.
pub fn three_unicast() -> NetworkInstance {
    let edges = vec![
        unit_edge(1, 4, 2.0),
        unit_edge(2, 5, 2.0),
        unit_edge(3, 6, 2.0),
    ];
    NetworkInstance::new(
        (1..=6).collect(),
        edges,
        vec![
            Flow { source: 1, rate: 1.0 },
            Flow { source: 2, rate: 1.0 },
            Flow { source: 3, rate: 1.0 },
        ],
        vec![
            Terminal { node: 4, demands: vec![1] },
            Terminal { node: 5, demands: vec![2] },
            Terminal { node: 6, demands: vec![3] },
        ],
    )
}

/// The two-slot design for [`fig2`] that keeps flow 3 on its own slot:
/// flows 1 and 2 share slot 1 through the junction while flow 3 rides
/// slot 2 of (4,5) and (5,7), never reaching terminal 6.
pub fn example1_design(inst: &NetworkInstance) -> MixingDesign {
    let mut d = MixingDesign::with_source_identities(inst, 2);
    let m = |s: &str| FlowMask::from_bitstring(s).unwrap();
    // Edge indices: 0:(1,6) 1:(1,4) 2:(2,7) 3:(2,4) 4:(3,4) 5:(4,5) 6:(5,6) 7:(5,7)
    d.set_mask(5, 0, m("110"));
    d.set_mask(5, 1, m("001"));
    d.set_mask(6, 0, m("110"));
    d.set_mask(6, 1, m("000"));
    d.set_mask(7, 0, m("110"));
    d.set_mask(7, 1, m("001"));
    // In-edges of node 4 arrive in edge order [(1,4), (2,4), (3,4)].
    d.set_feed(5, 0, 0, 0, true);
    d.set_feed(5, 1, 0, 0, true);
    d.set_feed(5, 2, 0, 1, true);
    d.set_feed(6, 0, 0, 0, true);
    d.set_feed(7, 0, 0, 0, true);
    d.set_feed(7, 0, 1, 1, true);
    d
}

/// One flow at the given rate over a two-edge path 1 -> 2 -> 3.
pub fn single_path(rate: f64) -> NetworkInstance {
    let edges = vec![unit_edge(1, 2, 2.0), unit_edge(2, 3, 2.0)];
    NetworkInstance::new(
        (1..=3).collect(),
        edges,
        vec![Flow { source: 1, rate }],
        vec![Terminal { node: 3, demands: vec![1] }],
    )
}
