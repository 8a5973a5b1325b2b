//! Network instances: DAGs with capacitated, cost-bearing edges, rate-bearing
//! flows, and terminals demanding flow subsets.
//!
//! Node labels in instance files are arbitrary small non-negative integers;
//! internally every node, edge, flow, and terminal also carries a dense index
//! so solver state can live in flat arrays. Flow numbering is 1-based in files
//! and CLI output, 0-based in the API.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::NetmixError;

/// User-facing node label.
pub type NodeId = u32;

/// Edge cost function, convex and non-decreasing on the capacity interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum CostFn {
    /// a * z with a >= 0.
    Linear { a: f64 },
    /// a * z + b * z^2 with a, b >= 0.
    Quadratic { a: f64, b: f64 },
}

impl CostFn {
    pub fn eval(&self, z: f64) -> f64 {
        match *self {
            CostFn::Linear { a } => a * z,
            CostFn::Quadratic { a, b } => a * z + b * z * z,
        }
    }

    pub fn deriv(&self, z: f64) -> f64 {
        match *self {
            CostFn::Linear { a } => a,
            CostFn::Quadratic { a, b } => a + 2.0 * b * z,
        }
    }

    pub fn is_linear(&self) -> bool {
        matches!(self, CostFn::Linear { .. })
    }

    fn coefficients_valid(&self) -> bool {
        match *self {
            CostFn::Linear { a } => a >= 0.0 && a.is_finite(),
            CostFn::Quadratic { a, b } => a >= 0.0 && b >= 0.0 && a.is_finite() && b.is_finite(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Edge {
    pub tail: NodeId,
    pub head: NodeId,
    pub capacity: f64,
    pub cost: CostFn,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Flow {
    pub source: NodeId,
    pub rate: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Terminal {
    pub node: NodeId,
    /// 1-based flow numbers, matching the on-disk format.
    pub demands: Vec<usize>,
}

/// Canonical on-disk form; field names are stable.
#[derive(Debug, Clone, Serialize, Deserialize)]
struct InstanceFile {
    nodes: Vec<NodeId>,
    edges: Vec<Edge>,
    flows: Vec<Flow>,
    terminals: Vec<Terminal>,
}

/// A directed network with general connections.
///
/// Construction never fails; [`NetworkInstance::validate`] reports every
/// violated model assumption instead. Operations documented as requiring a
/// valid instance may panic or misbehave on invalid ones.
#[derive(Debug, Clone)]
pub struct NetworkInstance {
    pub nodes: Vec<NodeId>,
    pub edges: Vec<Edge>,
    pub flows: Vec<Flow>,
    pub terminals: Vec<Terminal>,
    index: NetworkIndex,
}

/// Dense adjacency built once at construction.
#[derive(Debug, Clone, Default)]
struct NetworkIndex {
    node_pos: BTreeMap<NodeId, usize>,
    in_edges: Vec<Vec<usize>>,
    out_edges: Vec<Vec<usize>>,
    topo_nodes: Option<Vec<usize>>,
    source_flow: Vec<Option<usize>>,
    terminal_at: Vec<Option<usize>>,
}

impl PartialEq for NetworkInstance {
    fn eq(&self, other: &Self) -> bool {
        self.nodes == other.nodes
            && self.edges == other.edges
            && self.flows == other.flows
            && self.terminals == other.terminals
    }
}

impl NetworkInstance {
    pub fn new(
        nodes: Vec<NodeId>,
        edges: Vec<Edge>,
        flows: Vec<Flow>,
        terminals: Vec<Terminal>,
    ) -> Self {
        let mut inst = NetworkInstance {
            nodes,
            edges,
            flows,
            terminals,
            index: NetworkIndex::default(),
        };
        inst.index = inst.build_index();
        inst
    }

    fn build_index(&self) -> NetworkIndex {
        let mut node_pos = BTreeMap::new();
        for (i, &n) in self.nodes.iter().enumerate() {
            node_pos.entry(n).or_insert(i);
        }
        let v = self.nodes.len();
        let mut in_edges = vec![Vec::new(); v];
        let mut out_edges = vec![Vec::new(); v];
        for (e, edge) in self.edges.iter().enumerate() {
            if let (Some(&t), Some(&h)) = (node_pos.get(&edge.tail), node_pos.get(&edge.head)) {
                out_edges[t].push(e);
                in_edges[h].push(e);
            }
        }
        // Kahn's algorithm; None when a cycle or dangling endpoint exists.
        let mut indeg: Vec<usize> = in_edges.iter().map(Vec::len).collect();
        let mut queue: Vec<usize> = (0..v).filter(|&i| indeg[i] == 0).collect();
        queue.sort_unstable();
        let mut topo = Vec::with_capacity(v);
        let mut head = 0;
        while head < queue.len() {
            let i = queue[head];
            head += 1;
            topo.push(i);
            for &e in &out_edges[i] {
                let h = node_pos[&self.edges[e].head];
                indeg[h] -= 1;
                if indeg[h] == 0 {
                    queue.push(h);
                }
            }
        }
        let dangling = self
            .edges
            .iter()
            .any(|e| !node_pos.contains_key(&e.tail) || !node_pos.contains_key(&e.head));
        let topo_nodes = if topo.len() == v && !dangling {
            Some(topo)
        } else {
            None
        };
        let mut source_flow = vec![None; v];
        for (p, f) in self.flows.iter().enumerate() {
            if let Some(&i) = node_pos.get(&f.source) {
                source_flow[i] = Some(p);
            }
        }
        let mut terminal_at = vec![None; v];
        for (t, term) in self.terminals.iter().enumerate() {
            if let Some(&i) = node_pos.get(&term.node) {
                terminal_at[i] = Some(t);
            }
        }
        NetworkIndex {
            node_pos,
            in_edges,
            out_edges,
            topo_nodes,
            source_flow,
            terminal_at,
        }
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn flow_count(&self) -> usize {
        self.flows.len()
    }

    pub fn terminal_count(&self) -> usize {
        self.terminals.len()
    }

    pub fn node_index(&self, id: NodeId) -> Option<usize> {
        self.index.node_pos.get(&id).copied()
    }

    /// Edge indices entering the node at dense index `i`.
    pub fn in_edges(&self, i: usize) -> &[usize] {
        &self.index.in_edges[i]
    }

    pub fn out_edges(&self, i: usize) -> &[usize] {
        &self.index.out_edges[i]
    }

    pub fn tail_index(&self, e: usize) -> usize {
        self.index.node_pos[&self.edges[e].tail]
    }

    pub fn head_index(&self, e: usize) -> usize {
        self.index.node_pos[&self.edges[e].head]
    }

    /// Flow sourced at node index `i`, if any.
    pub fn flow_at(&self, i: usize) -> Option<usize> {
        self.index.source_flow[i]
    }

    /// Terminal index at node index `i`, if any.
    pub fn terminal_at(&self, i: usize) -> Option<usize> {
        self.index.terminal_at[i]
    }

    pub fn is_source_node(&self, i: usize) -> bool {
        self.index.source_flow[i].is_some()
    }

    /// Node indices in topological order; `None` if the graph has a cycle.
    pub fn topo_nodes(&self) -> Option<&[usize]> {
        self.index.topo_nodes.as_deref()
    }

    /// Edge indices ordered by topological position of their tails.
    pub fn topo_edges(&self) -> Option<Vec<usize>> {
        let topo = self.topo_nodes()?;
        let mut edges = Vec::with_capacity(self.edge_count());
        for &i in topo {
            let mut out = self.index.out_edges[i].clone();
            out.sort_unstable();
            edges.extend(out);
        }
        Some(edges)
    }

    /// Max of in- and out-degrees over all nodes (the derived degree bound).
    pub fn max_degree(&self) -> usize {
        (0..self.node_count())
            .map(|i| self.index.in_edges[i].len().max(self.index.out_edges[i].len()))
            .max()
            .unwrap_or(0)
    }

    /// Whether terminal `t` demands flow `p` (0-based).
    pub fn demands(&self, t: usize, p: usize) -> bool {
        self.terminals[t].demands.contains(&(p + 1))
    }

    /// 0-based demand list of terminal `t`.
    pub fn demand_set(&self, t: usize) -> Vec<usize> {
        let mut d: Vec<usize> = self.terminals[t]
            .demands
            .iter()
            .filter(|&&q| q >= 1 && q <= self.flow_count())
            .map(|&q| q - 1)
            .collect();
        d.sort_unstable();
        d.dedup();
        d
    }

    pub fn to_json(&self) -> String {
        let file = InstanceFile {
            nodes: self.nodes.clone(),
            edges: self.edges.clone(),
            flows: self.flows.clone(),
            terminals: self.terminals.clone(),
        };
        serde_json::to_string_pretty(&file).expect("instance serialization")
    }

    pub fn from_json(text: &str) -> Result<Self, NetmixError> {
        let file: InstanceFile =
            serde_json::from_str(text).map_err(|e| NetmixError::Format(e.to_string()))?;
        Ok(NetworkInstance::new(
            file.nodes,
            file.edges,
            file.flows,
            file.terminals,
        ))
    }

    /// Checks every model assumption and reports all violations found.
    pub fn validate(&self) -> ValidationReport {
        let mut violations = Vec::new();
        let mut seen_nodes = BTreeSet::new();
        for &n in &self.nodes {
            if !seen_nodes.insert(n) {
                violations.push(Violation::DuplicateNode(n));
            }
        }
        let mut seen_pairs = BTreeSet::new();
        for e in &self.edges {
            if !seen_nodes.contains(&e.tail) || !seen_nodes.contains(&e.head) {
                violations.push(Violation::UnknownEndpoint(e.tail, e.head));
                continue;
            }
            if e.tail == e.head {
                violations.push(Violation::SelfLoop(e.tail));
            }
            if !seen_pairs.insert((e.tail, e.head)) {
                violations.push(Violation::ParallelEdge(e.tail, e.head));
            }
            if !(e.capacity >= 0.0) || !e.capacity.is_finite() {
                violations.push(Violation::BadCapacity(e.tail, e.head));
            }
            if !e.cost.coefficients_valid() {
                violations.push(Violation::BadCost(e.tail, e.head));
            }
        }
        if self.index.topo_nodes.is_none() {
            violations.push(Violation::Cyclic);
        }
        let mut sources = BTreeSet::new();
        for (p, f) in self.flows.iter().enumerate() {
            if !(f.rate > 0.0) || !f.rate.is_finite() {
                violations.push(Violation::BadRate(p + 1));
            }
            match self.node_index(f.source) {
                None => violations.push(Violation::UnknownSource(p + 1, f.source)),
                Some(i) => {
                    if !sources.insert(f.source) {
                        violations.push(Violation::SharedSource(f.source));
                    }
                    if !self.index.in_edges[i].is_empty() {
                        violations.push(Violation::SourceHasInEdge(f.source));
                    }
                }
            }
        }
        let mut demanded = vec![false; self.flow_count()];
        for term in &self.terminals {
            match self.node_index(term.node) {
                None => violations.push(Violation::UnknownTerminal(term.node)),
                Some(i) => {
                    if !self.index.out_edges[i].is_empty() {
                        violations.push(Violation::TerminalHasOutEdge(term.node));
                    }
                }
            }
            if term.demands.is_empty() {
                violations.push(Violation::EmptyDemand(term.node));
            }
            for &q in &term.demands {
                if q < 1 || q > self.flow_count() {
                    violations.push(Violation::UnknownFlow(term.node, q));
                } else {
                    demanded[q - 1] = true;
                }
            }
        }
        for (p, &d) in demanded.iter().enumerate() {
            if !d {
                violations.push(Violation::UndemandedFlow(p + 1));
            }
        }
        ValidationReport { violations }
    }

    /// Atoms of the algebra generated by the terminals' demand sets.
    ///
    /// Flows are grouped by their demand-membership signature; atoms are
    /// ordered by smallest member. Requires a valid instance.
    pub fn atom_partition(&self) -> AtomPartition {
        let mut by_sig: BTreeMap<Vec<bool>, Vec<usize>> = BTreeMap::new();
        for p in 0..self.flow_count() {
            let sig: Vec<bool> = (0..self.terminal_count())
                .map(|t| self.demands(t, p))
                .collect();
            by_sig.entry(sig).or_default().push(p);
        }
        let mut atoms: Vec<Vec<usize>> = by_sig.into_values().collect();
        atoms.sort_by_key(|a| a[0]);
        AtomPartition { atoms }
    }

    /// Size of the atom partition; the largest useful mixing parameter.
    pub fn l_max(&self) -> usize {
        self.atom_partition().atoms.len()
    }

    /// Exact count of slot-link variables at mixing parameter `slots`:
    /// `slots^2 * sum over edges (i,j) of indegree(i)`.
    pub fn discrete_variable_count(&self, slots: usize) -> usize {
        let pair_count: usize = (0..self.edge_count())
            .map(|e| self.index.in_edges[self.tail_index(e)].len())
            .sum();
        slots * slots * pair_count
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    DuplicateNode(NodeId),
    UnknownEndpoint(NodeId, NodeId),
    SelfLoop(NodeId),
    ParallelEdge(NodeId, NodeId),
    BadCapacity(NodeId, NodeId),
    BadCost(NodeId, NodeId),
    Cyclic,
    BadRate(usize),
    UnknownSource(usize, NodeId),
    SharedSource(NodeId),
    SourceHasInEdge(NodeId),
    UnknownTerminal(NodeId),
    TerminalHasOutEdge(NodeId),
    EmptyDemand(NodeId),
    UnknownFlow(NodeId, usize),
    UndemandedFlow(usize),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::DuplicateNode(n) => write!(f, "duplicate node {n}"),
            Violation::UnknownEndpoint(t, h) => write!(f, "edge ({t},{h}) has unknown endpoint"),
            Violation::SelfLoop(n) => write!(f, "self-loop at node {n}"),
            Violation::ParallelEdge(t, h) => write!(f, "parallel edge ({t},{h})"),
            Violation::BadCapacity(t, h) => write!(f, "edge ({t},{h}) capacity must be >= 0"),
            Violation::BadCost(t, h) => write!(f, "edge ({t},{h}) cost coefficients must be >= 0"),
            Violation::Cyclic => write!(f, "graph is not acyclic"),
            Violation::BadRate(p) => write!(f, "flow {p} rate must be > 0"),
            Violation::UnknownSource(p, n) => write!(f, "flow {p} source {n} not a node"),
            Violation::SharedSource(n) => write!(f, "node {n} sources more than one flow"),
            Violation::SourceHasInEdge(n) => write!(f, "source node {n} has an incoming edge"),
            Violation::UnknownTerminal(n) => write!(f, "terminal node {n} not a node"),
            Violation::TerminalHasOutEdge(n) => write!(f, "terminal node {n} has an outgoing edge"),
            Violation::EmptyDemand(n) => write!(f, "terminal {n} demands no flow"),
            Violation::UnknownFlow(n, p) => write!(f, "terminal {n} demands unknown flow {p}"),
            Violation::UndemandedFlow(p) => write!(f, "undemanded flow {p}"),
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            write!(f, "ok")
        } else {
            for v in &self.violations {
                writeln!(f, "{v}")?;
            }
            Ok(())
        }
    }
}

/// Disjoint flow groups induced by the demand sets; their union is all flows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AtomPartition {
    /// 0-based flow indices, each atom sorted, atoms ordered by first member.
    pub atoms: Vec<Vec<usize>>,
}

impl AtomPartition {
    /// Atom index containing flow `p`.
    pub fn atom_of(&self, p: usize) -> usize {
        self.atoms
            .iter()
            .position(|a| a.contains(&p))
            .expect("flow in some atom")
    }
}

impl fmt::Display for AtomPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, atom) in self.atoms.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{{")?;
            for (j, p) in atom.iter().enumerate() {
                if j > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{}", p + 1)?;
            }
            write!(f, "}}")?;
        }
        write!(f, "}}")
    }
}

/// Parameters for [`generate_random_instance`].
#[derive(Debug, Clone)]
pub struct GenParams {
    pub nodes: usize,
    pub edge_prob: f64,
    pub flows: usize,
    pub terminals: usize,
    pub demand_density: f64,
    pub capacity_range: (f64, f64),
    pub linear_cost: bool,
    /// Retries before giving up on a connected valid draw.
    pub max_retries: usize,
}

impl Default for GenParams {
    fn default() -> Self {
        GenParams {
            nodes: 7,
            edge_prob: 0.5,
            flows: 2,
            terminals: 2,
            demand_density: 0.6,
            capacity_range: (1.0, 4.0),
            linear_cost: true,
            max_retries: 200,
        }
    }
}

/// Draws a valid instance: nodes laid out in a topological line with sources
/// first and terminals last, edges sampled forward, demands sampled then
/// patched so every terminal demands something and every flow is demanded,
/// and every demanded (terminal, flow) pair connected. Deterministic in the
/// seed; fails after bounded retries when the parameters cannot connect.
pub fn generate_random_instance(params: &GenParams, seed: u64) -> Result<NetworkInstance, NetmixError> {
    if params.nodes < params.flows + params.terminals || params.flows == 0 || params.terminals == 0
    {
        return Err(NetmixError::Generation(
            "need nodes >= flows + terminals, both nonzero".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..params.max_retries {
        if let Some(inst) = try_generate(params, &mut rng) {
            return Ok(inst);
        }
    }
    Err(NetmixError::Generation(format!(
        "no valid connected instance after {} retries",
        params.max_retries
    )))
}

fn try_generate(params: &GenParams, rng: &mut ChaCha8Rng) -> Option<NetworkInstance> {
    let n = params.nodes;
    let np = params.flows;
    let nt = params.terminals;
    let nodes: Vec<NodeId> = (1..=n as u32).collect();
    // Topological position = node order: 1..=np sources, last nt terminals.
    let mut edges = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            let tail_is_terminal = i >= n - nt;
            let head_is_source = j < np;
            if tail_is_terminal || head_is_source {
                continue;
            }
            if rng.gen::<f64>() < params.edge_prob {
                let (lo, hi) = params.capacity_range;
                let capacity = lo + (hi - lo) * rng.gen::<f64>();
                let a = 0.5 + 1.5 * rng.gen::<f64>();
                let cost = if params.linear_cost {
                    CostFn::Linear { a }
                } else {
                    CostFn::Quadratic { a, b: 0.25 + 0.75 * rng.gen::<f64>() }
                };
                edges.push(Edge { tail: nodes[i], head: nodes[j], capacity, cost });
            }
        }
    }
    let flows: Vec<Flow> = (0..np)
        .map(|p| Flow { source: nodes[p], rate: 0.5 + 1.5 * rng.gen::<f64>() })
        .collect();
    let mut demand_sets: Vec<BTreeSet<usize>> = (0..nt)
        .map(|_| {
            (1..=np)
                .filter(|_| rng.gen::<f64>() < params.demand_density)
                .collect()
        })
        .collect();
    for set in demand_sets.iter_mut() {
        if set.is_empty() {
            set.insert(rng.gen_range(1..=np));
        }
    }
    for p in 1..=np {
        if !demand_sets.iter().any(|s| s.contains(&p)) {
            let t = rng.gen_range(0..nt);
            demand_sets[t].insert(p);
        }
    }
    let terminals: Vec<Terminal> = demand_sets
        .into_iter()
        .enumerate()
        .map(|(t, set)| Terminal {
            node: nodes[n - nt + t],
            demands: set.into_iter().collect(),
        })
        .collect();
    let inst = NetworkInstance::new(nodes, edges, flows, terminals);
    if !inst.validate().is_ok() {
        return None;
    }
    // Every demanded pair must be connected.
    let reach = reachability(&inst);
    for (t, term) in inst.terminals.iter().enumerate() {
        let ti = inst.node_index(term.node)?;
        for p in inst.demand_set(t) {
            let si = inst.node_index(inst.flows[p].source)?;
            if !reach[si][ti] {
                return None;
            }
        }
    }
    Some(inst)
}

/// reach[i][j] = a directed path from node index i to j exists.
fn reachability(inst: &NetworkInstance) -> Vec<Vec<bool>> {
    let v = inst.node_count();
    let mut reach = vec![vec![false; v]; v];
    for i in 0..v {
        reach[i][i] = true;
    }
    if let Some(topo) = inst.topo_nodes() {
        for &i in topo.iter().rev() {
            for &e in inst.out_edges(i) {
                let h = inst.head_index(e);
                for j in 0..v {
                    if reach[h][j] {
                        reach[i][j] = true;
                    }
                }
            }
        }
    }
    reach
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn fig2_is_valid() {
        let inst = fixtures::fig2();
        assert!(inst.validate().is_ok(), "{}", inst.validate());
    }

    #[test]
    fn terminal_out_edge_reported() {
        let mut inst = fixtures::fig2();
        inst.edges.push(Edge {
            tail: 6,
            head: 1,
            capacity: 2.0,
            cost: CostFn::Linear { a: 1.0 },
        });
        let inst = NetworkInstance::new(inst.nodes, inst.edges, inst.flows, inst.terminals);
        let report = inst.validate();
        assert!(report.violations.contains(&Violation::TerminalHasOutEdge(6)));
        assert!(report.violations.contains(&Violation::SourceHasInEdge(1)));
    }

    #[test]
    fn undemanded_flow_reported() {
        let mut inst = fixtures::fig2();
        inst.terminals[1].demands = vec![1, 2];
        let inst = NetworkInstance::new(inst.nodes, inst.edges, inst.flows, inst.terminals);
        let report = inst.validate();
        assert!(report.violations.contains(&Violation::UndemandedFlow(3)));
    }

    #[test]
    fn fig2_atoms_and_l_max() {
        let inst = fixtures::fig2();
        let atoms = inst.atom_partition();
        assert_eq!(atoms.atoms, vec![vec![0, 1], vec![2]]);
        assert_eq!(atoms.to_string(), "{{1,2},{3}}");
        assert_eq!(inst.l_max(), 2);
    }

    #[test]
    fn multicast_single_atom() {
        let inst = fixtures::butterfly();
        assert_eq!(inst.atom_partition().atoms, vec![vec![0, 1]]);
        assert_eq!(inst.l_max(), 1);
    }

    #[test]
    fn unicast_atoms_are_singletons() {
        let inst = fixtures::three_unicast();
        assert_eq!(inst.l_max(), 3);
        assert_eq!(
            inst.atom_partition().atoms,
            vec![vec![0], vec![1], vec![2]]
        );
    }

    #[test]
    fn single_flow_l_max_one() {
        let inst = fixtures::single_path(0.7);
        assert_eq!(inst.l_max(), 1);
    }

    #[test]
    fn fig2_variable_count() {
        let inst = fixtures::fig2();
        assert_eq!(inst.discrete_variable_count(2), 20);
        let d = inst.max_degree();
        let e = inst.edge_count();
        assert!(inst.discrete_variable_count(2) <= 4 * d * e);
    }

    #[test]
    fn no_consecutive_edges_no_variables() {
        let inst = NetworkInstance::new(
            vec![1, 2],
            vec![Edge { tail: 1, head: 2, capacity: 1.0, cost: CostFn::Linear { a: 1.0 } }],
            vec![Flow { source: 1, rate: 1.0 }],
            vec![Terminal { node: 2, demands: vec![1] }],
        );
        assert_eq!(inst.discrete_variable_count(1), 0);
    }

    #[test]
    fn generator_is_deterministic_and_valid() {
        let params = GenParams { nodes: 7, flows: 3, terminals: 2, ..GenParams::default() };
        let a = generate_random_instance(&params, 1).unwrap();
        let b = generate_random_instance(&params, 1).unwrap();
        assert_eq!(a, b);
        assert!(a.validate().is_ok());
    }

    #[test]
    fn generator_fails_without_edges() {
        let params = GenParams { edge_prob: 0.0, max_retries: 5, ..GenParams::default() };
        assert!(generate_random_instance(&params, 1).is_err());
    }

    #[test]
    fn instance_json_round_trip() {
        let inst = fixtures::fig2();
        let text = inst.to_json();
        let back = NetworkInstance::from_json(&text).unwrap();
        assert_eq!(inst, back);
        assert_eq!(text, back.to_json());
    }
}
