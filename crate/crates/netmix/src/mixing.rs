//! Mixing designs: per-edge, per-slot flow masks plus slot-feed permissions,
//! their feasibility rules, and the constraint-satisfaction encoding used by
//! the decentralized solver.
//!
//! A design is feasible when source edges carry exactly their own flow on
//! every slot, every non-source mask is the disjunction of the input masks
//! its feeds select, terminals never see undemanded flows, and every demanded
//! flow reaches its terminal on some slot.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use smallvec::{smallvec, SmallVec};

use crate::netmodel::NetworkInstance;
use crate::NetmixError;

/// Packed bit set over flows; one inline word covers up to 64 flows and
/// larger flow counts spill to the heap.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FlowMask {
    len: usize,
    words: SmallVec<[u64; 1]>,
}

impl FlowMask {
    pub fn zero(len: usize) -> Self {
        let n = len.div_ceil(64).max(1);
        FlowMask { len, words: smallvec![0; n] }
    }

    pub fn unit(len: usize, p: usize) -> Self {
        let mut m = Self::zero(len);
        m.set(p, true);
        m
    }

    pub fn from_bits(bits: &[bool]) -> Self {
        let mut m = Self::zero(bits.len());
        for (p, &b) in bits.iter().enumerate() {
            m.set(p, b);
        }
        m
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, p: usize) -> bool {
        debug_assert!(p < self.len);
        self.words[p / 64] >> (p % 64) & 1 == 1
    }

    pub fn set(&mut self, p: usize, value: bool) {
        debug_assert!(p < self.len);
        if value {
            self.words[p / 64] |= 1 << (p % 64);
        } else {
            self.words[p / 64] &= !(1 << (p % 64));
        }
    }

    pub fn or_assign(&mut self, other: &FlowMask) {
        debug_assert_eq!(self.len, other.len);
        for (w, o) in self.words.iter_mut().zip(&other.words) {
            *w |= o;
        }
    }

    /// True when every set bit of `self` is also set in `other`.
    pub fn dominated_by(&self, other: &FlowMask) -> bool {
        debug_assert_eq!(self.len, other.len);
        self.words.iter().zip(&other.words).all(|(w, o)| w & !o == 0)
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(move |&p| self.get(p))
    }

    pub fn to_bitstring(&self) -> String {
        (0..self.len).map(|p| if self.get(p) { '1' } else { '0' }).collect()
    }

    pub fn from_bitstring(s: &str) -> Result<Self, NetmixError> {
        let mut m = Self::zero(s.len());
        for (p, c) in s.chars().enumerate() {
            match c {
                '1' => m.set(p, true),
                '0' => {}
                _ => return Err(NetmixError::Format(format!("bad mask bit {c:?}"))),
            }
        }
        Ok(m)
    }
}

impl fmt::Display for FlowMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_bitstring())
    }
}

/// Componentwise OR of the masks whose select bit is set. `len` fixes the
/// flow count so an empty selection still has a well-defined result.
pub fn or_combine<'a, I>(len: usize, inputs: I) -> Result<FlowMask, NetmixError>
where
    I: IntoIterator<Item = (&'a FlowMask, bool)>,
{
    let mut out = FlowMask::zero(len);
    for (mask, selected) in inputs {
        if mask.len() != len {
            return Err(NetmixError::Dimension(format!(
                "mask length {} != {}",
                mask.len(),
                len
            )));
        }
        if selected {
            out.or_assign(mask);
        }
    }
    Ok(out)
}

/// Whether `target` is an OR of some subset of `inputs`, and the canonical
/// witness selection when it is: exactly the inputs dominated by the target.
/// Dominated inputs never overshoot, and a target bit they miss cannot be
/// supplied by any other subset.
pub fn or_decompose(target: &FlowMask, inputs: &[FlowMask]) -> Option<Vec<bool>> {
    let mut acc = FlowMask::zero(target.len());
    let selection: Vec<bool> = inputs
        .iter()
        .map(|m| {
            let take = m.dominated_by(target);
            if take {
                acc.or_assign(m);
            }
            take
        })
        .collect();
    if acc == *target {
        Some(selection)
    } else {
        None
    }
}

/// All distinct masks reachable as an OR of any subset of `inputs`
/// (the zero mask included).
pub fn achievable_masks(len: usize, inputs: &[FlowMask]) -> Vec<FlowMask> {
    let mut set: Vec<FlowMask> = vec![FlowMask::zero(len)];
    for input in inputs {
        let mut extra = Vec::new();
        for m in &set {
            let mut u = m.clone();
            u.or_assign(input);
            if !set.contains(&u) && !extra.contains(&u) {
                extra.push(u);
            }
        }
        set.extend(extra);
    }
    set
}

/// A mixing design for a fixed slot count: one mask per (edge, slot) and one
/// feed bit per (in-edge, out-edge, in-slot, out-slot) at every junction.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MixingDesign {
    pub slots: usize,
    masks: Vec<FlowMask>,
    feeds: Vec<bool>,
    feed_base: Vec<usize>,
}

impl MixingDesign {
    pub fn zero(inst: &NetworkInstance, slots: usize) -> Self {
        let p = inst.flow_count();
        let masks = vec![FlowMask::zero(p); inst.edge_count() * slots];
        let mut feed_base = Vec::with_capacity(inst.edge_count() + 1);
        let mut total = 0;
        for e in 0..inst.edge_count() {
            feed_base.push(total);
            total += inst.in_edges(inst.tail_index(e)).len() * slots * slots;
        }
        feed_base.push(total);
        MixingDesign { slots, masks, feeds: vec![false; total], feed_base }
    }

    /// Source-edge masks preset to the sourced flow on every slot.
    pub fn with_source_identities(inst: &NetworkInstance, slots: usize) -> Self {
        let mut d = Self::zero(inst, slots);
        for e in 0..inst.edge_count() {
            if let Some(p) = inst.flow_at(inst.tail_index(e)) {
                for l in 0..slots {
                    d.set_mask(e, l, FlowMask::unit(inst.flow_count(), p));
                }
            }
        }
        d
    }

    pub fn mask(&self, edge: usize, slot: usize) -> &FlowMask {
        &self.masks[edge * self.slots + slot]
    }

    pub fn set_mask(&mut self, edge: usize, slot: usize, mask: FlowMask) {
        self.masks[edge * self.slots + slot] = mask;
    }

    fn feed_index(&self, out_edge: usize, in_pos: usize, from_slot: usize, to_slot: usize) -> usize {
        self.feed_base[out_edge] + (in_pos * self.slots + from_slot) * self.slots + to_slot
    }

    /// Feed bit for the `in_pos`-th incoming edge of `out_edge`'s tail.
    pub fn feed(&self, out_edge: usize, in_pos: usize, from_slot: usize, to_slot: usize) -> bool {
        self.feeds[self.feed_index(out_edge, in_pos, from_slot, to_slot)]
    }

    pub fn set_feed(
        &mut self,
        out_edge: usize,
        in_pos: usize,
        from_slot: usize,
        to_slot: usize,
        value: bool,
    ) {
        let i = self.feed_index(out_edge, in_pos, from_slot, to_slot);
        self.feeds[i] = value;
    }

    pub fn feed_count(&self) -> usize {
        self.feeds.len()
    }

    /// Rebuilds the feed bits from the masks using the canonical dominated
    /// witness at every junction; fails where a mask is not OR-achievable.
    pub fn rederive_feeds(&mut self, inst: &NetworkInstance) -> Result<(), NetmixError> {
        for e in 0..inst.edge_count() {
            let tail = inst.tail_index(e);
            if inst.is_source_node(tail) {
                continue;
            }
            let in_edges = inst.in_edges(tail);
            let mut inputs = Vec::with_capacity(in_edges.len() * self.slots);
            for &k in in_edges {
                for m in 0..self.slots {
                    inputs.push(self.mask(k, m).clone());
                }
            }
            for l in 0..self.slots {
                let target = self.mask(e, l).clone();
                let selection = or_decompose(&target, &inputs).ok_or_else(|| {
                    NetmixError::Infeasible(format!(
                        "mask on edge {} slot {} is not an OR of its inputs",
                        e, l
                    ))
                })?;
                for (pos, &take) in selection.iter().enumerate() {
                    let (in_pos, from_slot) = (pos / self.slots, pos % self.slots);
                    self.set_feed(e, in_pos, from_slot, l, take);
                }
            }
        }
        Ok(())
    }

    pub fn to_json(&self, inst: &NetworkInstance) -> String {
        let mut x = BTreeMap::new();
        for (e, edge) in inst.edges.iter().enumerate() {
            let key = format!("{},{}", edge.tail, edge.head);
            let strings: Vec<String> =
                (0..self.slots).map(|l| self.mask(e, l).to_bitstring()).collect();
            x.insert(key, strings);
        }
        let mut beta = Vec::new();
        for e in 0..inst.edge_count() {
            let tail = inst.tail_index(e);
            for (in_pos, &k) in inst.in_edges(tail).iter().enumerate() {
                for from_slot in 0..self.slots {
                    for to_slot in 0..self.slots {
                        if self.feed(e, in_pos, from_slot, to_slot) {
                            beta.push(vec![
                                u64::from(inst.edges[k].tail),
                                u64::from(inst.edges[e].tail),
                                u64::from(inst.edges[e].head),
                                from_slot as u64 + 1,
                                to_slot as u64 + 1,
                            ]);
                        }
                    }
                }
            }
        }
        let file = DesignFile { l: self.slots, x, beta };
        serde_json::to_string_pretty(&file).expect("design serialization")
    }

    pub fn from_json(inst: &NetworkInstance, text: &str) -> Result<Self, NetmixError> {
        let file: DesignFile =
            serde_json::from_str(text).map_err(|e| NetmixError::Format(e.to_string()))?;
        let mut d = Self::zero(inst, file.l);
        for (key, strings) in &file.x {
            let (tail, head) = parse_edge_key(key)?;
            let e = edge_index(inst, tail, head)?;
            if strings.len() != file.l {
                return Err(NetmixError::Format(format!("edge {key}: wrong slot count")));
            }
            for (l, s) in strings.iter().enumerate() {
                let mask = FlowMask::from_bitstring(s)?;
                if mask.len() != inst.flow_count() {
                    return Err(NetmixError::Format(format!("edge {key}: wrong mask length")));
                }
                d.set_mask(e, l, mask);
            }
        }
        for entry in &file.beta {
            if entry.len() != 5 {
                return Err(NetmixError::Format("beta entry needs 5 fields".into()));
            }
            let (k, i, j) = (entry[0] as u32, entry[1] as u32, entry[2] as u32);
            let (from_slot, to_slot) = (entry[3] as usize - 1, entry[4] as usize - 1);
            let in_edge = edge_index(inst, k, i)?;
            let out_edge = edge_index(inst, i, j)?;
            let tail = inst.tail_index(out_edge);
            let in_pos = inst
                .in_edges(tail)
                .iter()
                .position(|&c| c == in_edge)
                .ok_or_else(|| NetmixError::Format(format!("({k},{i}) not into ({i},{j})")))?;
            if from_slot >= file.l || to_slot >= file.l {
                return Err(NetmixError::Format("beta slot out of range".into()));
            }
            d.set_feed(out_edge, in_pos, from_slot, to_slot, true);
        }
        Ok(d)
    }
}

#[derive(Serialize, Deserialize)]
struct DesignFile {
    #[serde(rename = "L")]
    l: usize,
    x: BTreeMap<String, Vec<String>>,
    beta: Vec<Vec<u64>>,
}

fn parse_edge_key(key: &str) -> Result<(u32, u32), NetmixError> {
    let (a, b) = key
        .split_once(',')
        .ok_or_else(|| NetmixError::Format(format!("bad edge key {key:?}")))?;
    let tail = a.trim().parse().map_err(|_| NetmixError::Format(format!("bad edge key {key:?}")))?;
    let head = b.trim().parse().map_err(|_| NetmixError::Format(format!("bad edge key {key:?}")))?;
    Ok((tail, head))
}

fn edge_index(inst: &NetworkInstance, tail: u32, head: u32) -> Result<usize, NetmixError> {
    inst.edges
        .iter()
        .position(|e| e.tail == tail && e.head == head)
        .ok_or_else(|| NetmixError::Format(format!("unknown edge ({tail},{head})")))
}

/// Which feasibility rule a violation belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MixingRule {
    SourceIdentity,
    OrPropagation,
    TerminalExclusion,
    TerminalCoverage,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MixingViolation {
    pub rule: MixingRule,
    /// Edge index, or the terminal's node index for coverage violations.
    pub place: usize,
    pub slot: Option<usize>,
    pub flow: usize,
}

#[derive(Debug, Clone, Default)]
pub struct MixingReport {
    pub violations: Vec<MixingViolation>,
}

impl MixingReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn has(&self, rule: MixingRule) -> bool {
        self.violations.iter().any(|v| v.rule == rule)
    }
}

/// Checks a design against every feasibility rule and reports all violations.
pub fn check_feasible_mixing(inst: &NetworkInstance, design: &MixingDesign) -> MixingReport {
    let p_count = inst.flow_count();
    let slots = design.slots;
    let mut violations = Vec::new();
    for e in 0..inst.edge_count() {
        let tail = inst.tail_index(e);
        if let Some(p_src) = inst.flow_at(tail) {
            let want = FlowMask::unit(p_count, p_src);
            for l in 0..slots {
                if design.mask(e, l) != &want {
                    for p in 0..p_count {
                        if design.mask(e, l).get(p) != want.get(p) {
                            violations.push(MixingViolation {
                                rule: MixingRule::SourceIdentity,
                                place: e,
                                slot: Some(l),
                                flow: p,
                            });
                        }
                    }
                }
            }
        } else {
            let in_edges = inst.in_edges(tail);
            for l in 0..slots {
                let mut expect = FlowMask::zero(p_count);
                for (in_pos, &k) in in_edges.iter().enumerate() {
                    for m in 0..slots {
                        if design.feed(e, in_pos, m, l) {
                            expect.or_assign(design.mask(k, m));
                        }
                    }
                }
                if &expect != design.mask(e, l) {
                    for p in 0..p_count {
                        if expect.get(p) != design.mask(e, l).get(p) {
                            violations.push(MixingViolation {
                                rule: MixingRule::OrPropagation,
                                place: e,
                                slot: Some(l),
                                flow: p,
                            });
                        }
                    }
                }
            }
        }
        if let Some(t) = inst.terminal_at(inst.head_index(e)) {
            for l in 0..slots {
                for p in 0..p_count {
                    if design.mask(e, l).get(p) && !inst.demands(t, p) {
                        violations.push(MixingViolation {
                            rule: MixingRule::TerminalExclusion,
                            place: e,
                            slot: Some(l),
                            flow: p,
                        });
                    }
                }
            }
        }
    }
    for (t, term) in inst.terminals.iter().enumerate() {
        let ti = match inst.node_index(term.node) {
            Some(i) => i,
            None => continue,
        };
        for p in inst.demand_set(t) {
            let covered = inst
                .in_edges(ti)
                .iter()
                .any(|&e| (0..slots).any(|l| design.mask(e, l).get(p)));
            if !covered {
                violations.push(MixingViolation {
                    rule: MixingRule::TerminalCoverage,
                    place: ti,
                    slot: None,
                    flow: p,
                });
            }
        }
    }
    MixingReport { violations }
}

/// One CSP clause. Standard clauses follow the per-(edge, slot, flow) case
/// split: the mask must be OR-achievable from its junction inputs, and when
/// the head is a terminal the flow must additionally be covered (demanded) or
/// absent (undemanded). `Impossible` marks a demanded flow that no in-edge of
/// its terminal could ever carry.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Clause {
    EdgeSlotFlow { edge: usize, slot: usize, flow: usize },
    Impossible { terminal: usize, flow: usize },
}

/// The CSP over free mask bits: one boolean variable per
/// (non-source edge, slot, flow) with source masks fixed.
#[derive(Debug, Clone)]
pub struct CspProblem {
    pub slots: usize,
    pub intra_flow: bool,
    /// Edges with non-source tails, in edge order.
    pub free_edges: Vec<usize>,
    free_pos: Vec<Option<usize>>,
    pub clauses: Vec<Clause>,
    /// For each variable, the clause indices it participates in.
    pub partition: Vec<Vec<usize>>,
    flow_count: usize,
}

impl CspProblem {
    pub fn var_count(&self) -> usize {
        self.free_edges.len() * self.slots * self.flow_count
    }

    pub fn var_of(&self, edge: usize, slot: usize, flow: usize) -> Option<usize> {
        self.free_pos[edge]
            .map(|pos| (pos * self.slots + slot) * self.flow_count + flow)
    }

    /// (edge, slot, flow) for a variable index.
    pub fn var_site(&self, var: usize) -> (usize, usize, usize) {
        let flow = var % self.flow_count;
        let rest = var / self.flow_count;
        let slot = rest % self.slots;
        let edge = self.free_edges[rest / self.slots];
        (edge, slot, flow)
    }

    /// Expands an assignment into per-(edge, slot) masks, with source masks
    /// fixed to their identities.
    pub fn masks_from(&self, inst: &NetworkInstance, assignment: &[bool]) -> Vec<FlowMask> {
        let mut masks = vec![FlowMask::zero(self.flow_count); inst.edge_count() * self.slots];
        for e in 0..inst.edge_count() {
            if let Some(p) = inst.flow_at(inst.tail_index(e)) {
                for l in 0..self.slots {
                    masks[e * self.slots + l] = FlowMask::unit(self.flow_count, p);
                }
            }
        }
        for var in 0..self.var_count() {
            if assignment[var] {
                let (e, l, p) = self.var_site(var);
                masks[e * self.slots + l].set(p, true);
            }
        }
        masks
    }

    /// Truth value of one clause under fully expanded masks.
    pub fn eval_clause(&self, inst: &NetworkInstance, masks: &[FlowMask], clause: &Clause) -> bool {
        match *clause {
            Clause::Impossible { .. } => false,
            Clause::EdgeSlotFlow { edge, slot, flow } => {
                let target = &masks[edge * self.slots + slot];
                if self.intra_flow && target.count_ones() > 1 {
                    return false;
                }
                let tail = inst.tail_index(edge);
                let inputs: Vec<FlowMask> = inst
                    .in_edges(tail)
                    .iter()
                    .flat_map(|&k| (0..self.slots).map(move |m| masks[k * self.slots + m].clone()))
                    .collect();
                if or_decompose(target, &inputs).is_none() {
                    return false;
                }
                let head = inst.head_index(edge);
                if let Some(t) = inst.terminal_at(head) {
                    if inst.demands(t, flow) {
                        let covered = inst
                            .in_edges(head)
                            .iter()
                            .any(|&e2| (0..self.slots).any(|m| masks[e2 * self.slots + m].get(flow)));
                        if !covered {
                            return false;
                        }
                    } else if target.get(flow) {
                        return false;
                    }
                }
                true
            }
        }
    }

    /// Truth values of all clauses under an assignment.
    pub fn eval_all(&self, inst: &NetworkInstance, assignment: &[bool]) -> Vec<bool> {
        let masks = self.masks_from(inst, assignment);
        self.clauses
            .iter()
            .map(|c| self.eval_clause(inst, &masks, c))
            .collect()
    }

    pub fn satisfied(&self, inst: &NetworkInstance, assignment: &[bool]) -> bool {
        self.eval_all(inst, assignment).iter().all(|&s| s)
    }

    /// Decodes a satisfying assignment into a design, deriving feeds from the
    /// canonical dominated witness at every junction.
    pub fn decode(
        &self,
        inst: &NetworkInstance,
        assignment: &[bool],
    ) -> Result<MixingDesign, NetmixError> {
        let masks = self.masks_from(inst, assignment);
        let mut design = MixingDesign::with_source_identities(inst, self.slots);
        for e in 0..inst.edge_count() {
            for l in 0..self.slots {
                design.set_mask(e, l, masks[e * self.slots + l].clone());
            }
        }
        design.rederive_feeds(inst)?;
        Ok(design)
    }

    /// Encodes a design's free mask bits as an assignment.
    pub fn encode(&self, design: &MixingDesign) -> Vec<bool> {
        let mut a = vec![false; self.var_count()];
        for var in 0..self.var_count() {
            let (e, l, p) = self.var_site(var);
            a[var] = design.mask(e, l).get(p);
        }
        a
    }
}

/// Builds the clause set and clause partition for an instance at the given
/// slot count. With `intra_flow` set, every slot is additionally restricted
/// to carry at most one flow.
pub fn build_clauses(inst: &NetworkInstance, slots: usize, intra_flow: bool) -> CspProblem {
    let p_count = inst.flow_count();
    let free_edges: Vec<usize> = (0..inst.edge_count())
        .filter(|&e| !inst.is_source_node(inst.tail_index(e)))
        .collect();
    let mut free_pos = vec![None; inst.edge_count()];
    for (pos, &e) in free_edges.iter().enumerate() {
        free_pos[e] = Some(pos);
    }
    let mut clauses = Vec::new();
    let mut clause_of = BTreeMap::new();
    for &e in &free_edges {
        for l in 0..slots {
            for p in 0..p_count {
                clause_of.insert((e, l, p), clauses.len());
                clauses.push(Clause::EdgeSlotFlow { edge: e, slot: l, flow: p });
            }
        }
    }
    // A demanded flow whose terminal is fed only by source edges has no
    // clause to enforce coverage; when no such source edge carries it, the
    // CSP must be unsatisfiable.
    for (t, term) in inst.terminals.iter().enumerate() {
        if let Some(ti) = inst.node_index(term.node) {
            let all_source = inst
                .in_edges(ti)
                .iter()
                .all(|&e| inst.is_source_node(inst.tail_index(e)));
            if all_source {
                for p in inst.demand_set(t) {
                    let covered = inst
                        .in_edges(ti)
                        .iter()
                        .any(|&e| inst.flow_at(inst.tail_index(e)) == Some(p));
                    if !covered {
                        clauses.push(Clause::Impossible { terminal: t, flow: p });
                    }
                }
            }
        }
    }
    let csp = CspProblem {
        slots,
        intra_flow,
        free_edges: free_edges.clone(),
        free_pos,
        clauses,
        partition: Vec::new(),
        flow_count: p_count,
    };
    let mut partition = vec![Vec::new(); csp.var_count()];
    for var in 0..csp.var_count() {
        let (e, l, p) = csp.var_site(var);
        let mut set = vec![clause_of[&(e, l, p)]];
        let head = inst.head_index(e);
        for &down in inst.out_edges(head) {
            for m in 0..slots {
                if let Some(&c) = clause_of.get(&(down, m, p)) {
                    set.push(c);
                }
            }
        }
        if inst.terminal_at(head).is_some() {
            for &sib in inst.in_edges(head) {
                for m in 0..slots {
                    if let Some(&c) = clause_of.get(&(sib, m, p)) {
                        set.push(c);
                    }
                }
            }
        }
        set.sort_unstable();
        set.dedup();
        partition[var] = set;
    }
    CspProblem { partition, ..csp }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn mask(s: &str) -> FlowMask {
        FlowMask::from_bitstring(s).unwrap()
    }

    #[test]
    fn or_combine_examples() {
        let inputs = [mask("100"), mask("010"), mask("001")];
        let out = or_combine(3, inputs.iter().zip([true, true, false]).map(|(m, b)| (m, b)))
            .unwrap();
        assert_eq!(out, mask("110"));
        let none = or_combine(3, inputs.iter().map(|m| (m, false))).unwrap();
        assert!(none.is_zero());
        let single = or_combine(3, [(&inputs[2], true)]).unwrap();
        assert_eq!(single, inputs[2]);
        assert!(or_combine(2, [(&inputs[0], true)]).is_err());
    }

    #[test]
    fn or_decompose_examples() {
        let inputs = [mask("100"), mask("010"), mask("001")];
        assert_eq!(
            or_decompose(&mask("110"), &inputs),
            Some(vec![true, true, false])
        );
        let inputs2 = [mask("110"), mask("001")];
        assert_eq!(or_decompose(&mask("001"), &inputs2), Some(vec![false, true]));
        assert_eq!(or_decompose(&mask("101"), &inputs2), None);
    }

    #[test]
    fn or_decompose_matches_exhaustive_search() {
        // Cross-checked against brute force over all subsets.
        use rand::Rng;
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..300 {
            let p = rng.gen_range(1..=6);
            let k = rng.gen_range(0..=10usize);
            let inputs: Vec<FlowMask> = (0..k)
                .map(|_| {
                    let bits: Vec<bool> = (0..p).map(|_| rng.gen()).collect();
                    FlowMask::from_bits(&bits)
                })
                .collect();
            let target = FlowMask::from_bits(&(0..p).map(|_| rng.gen()).collect::<Vec<_>>());
            let brute = (0..1u32 << k).any(|sel| {
                let chosen = inputs
                    .iter()
                    .enumerate()
                    .map(|(i, m)| (m, sel >> i & 1 == 1));
                or_combine(p, chosen).unwrap() == target
            });
            let got = or_decompose(&target, &inputs);
            assert_eq!(got.is_some(), brute);
            if let Some(sel) = got {
                let recomposed =
                    or_combine(p, inputs.iter().zip(sel.iter().copied())).unwrap();
                assert_eq!(recomposed, target);
            }
        }
    }

    #[test]
    fn example_design_is_feasible() {
        let inst = fixtures::fig2();
        let design = fixtures::example1_design(&inst);
        let report = check_feasible_mixing(&inst, &design);
        assert!(report.is_ok(), "{:?}", report.violations);
    }

    #[test]
    fn undemanded_flow_at_terminal_is_flagged() {
        let inst = fixtures::fig2();
        let mut design = fixtures::example1_design(&inst);
        design.set_mask(6, 0, FlowMask::from_bitstring("111").unwrap());
        let report = check_feasible_mixing(&inst, &design);
        assert!(report
            .violations
            .iter()
            .any(|v| v.rule == MixingRule::TerminalExclusion
                && v.place == 6
                && v.slot == Some(0)
                && v.flow == 2));
    }

    #[test]
    fn fig2_clause_count() {
        let inst = fixtures::fig2();
        let csp = build_clauses(&inst, 2, false);
        assert_eq!(csp.clauses.len(), 18);
        assert_eq!(csp.var_count(), 18);
    }

    #[test]
    fn partition_of_interior_edge_variable() {
        let inst = fixtures::fig2();
        let csp = build_clauses(&inst, 2, false);
        // Variable on edge (4,5) slot 0, flow 0: own clause plus both slots
        // of the downstream edges (5,6) and (5,7) for the same flow.
        let var = csp.var_of(5, 0, 0).unwrap();
        let got: Vec<Clause> = csp.partition[var]
            .iter()
            .map(|&c| csp.clauses[c].clone())
            .collect();
        let want_members = [
            Clause::EdgeSlotFlow { edge: 5, slot: 0, flow: 0 },
            Clause::EdgeSlotFlow { edge: 6, slot: 0, flow: 0 },
            Clause::EdgeSlotFlow { edge: 6, slot: 1, flow: 0 },
            Clause::EdgeSlotFlow { edge: 7, slot: 0, flow: 0 },
            Clause::EdgeSlotFlow { edge: 7, slot: 1, flow: 0 },
        ];
        assert_eq!(got.len(), want_members.len());
        for w in &want_members {
            assert!(got.contains(w));
        }
    }

    #[test]
    fn partition_of_terminal_edge_variable_includes_siblings() {
        let inst = fixtures::fig2();
        let csp = build_clauses(&inst, 2, false);
        // Edge (5,7) heads into terminal 7; its own clauses on both slots are
        // the sibling set ((2,7) is a source edge and carries no clause).
        let var = csp.var_of(7, 0, 1).unwrap();
        let got: Vec<Clause> = csp.partition[var]
            .iter()
            .map(|&c| csp.clauses[c].clone())
            .collect();
        assert_eq!(got.len(), 2);
        assert!(got.contains(&Clause::EdgeSlotFlow { edge: 7, slot: 0, flow: 1 }));
        assert!(got.contains(&Clause::EdgeSlotFlow { edge: 7, slot: 1, flow: 1 }));
    }

    #[test]
    fn csp_agrees_with_feasibility_check_on_example() {
        let inst = fixtures::fig2();
        let csp = build_clauses(&inst, 2, false);
        let design = fixtures::example1_design(&inst);
        let assignment = csp.encode(&design);
        assert!(csp.satisfied(&inst, &assignment));
        let decoded = csp.decode(&inst, &assignment).unwrap();
        assert!(check_feasible_mixing(&inst, &decoded).is_ok());
    }

    #[test]
    fn design_json_round_trip() {
        let inst = fixtures::fig2();
        let design = fixtures::example1_design(&inst);
        let text = design.to_json(&inst);
        let back = MixingDesign::from_json(&inst, &text).unwrap();
        assert_eq!(design, back);
    }
}
