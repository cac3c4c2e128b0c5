//! Compressed tree of sub-bins.
//!
//! The bin of `w` columns and `H` rows is a single level-0 sub-bin. Each
//! level-`k` sub-bin with vertical index `q` covers rows
//! `[q * H_k, (q + 1) * H_k)` and splits into `b_{k+1}` level-`k+1` children.
//! Rectangles of height `H_k` are assigned to a level-`k` sub-bin and laid out
//! left to right after everything packed in its ancestors, which makes every
//! packing read off the tree canonical.
//!
//! Only sub-bins with at least one rectangle somewhere in their subtree are
//! stored; all missing children of a node are interchangeable empty slots.
//! Loads are tracked twice: nominal (including dummy rectangles) and real.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::domain::HarmonicPeriodSet;
use crate::feasibility::{Packing, Point};
use crate::{JobId, Time};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TreeError {
    #[error("width {width} does not fit sub-bin {q} of level {level} (residual {residual})")]
    WouldOverflow {
        level: usize,
        q: Time,
        width: Time,
        residual: Time,
    },
    #[error("no sub-bin {q} at level {level}")]
    NoSuchSubBin { level: usize, q: Time },
    #[error("tree still holds dummy rectangles")]
    DummiesPresent,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RectId {
    Job(JobId),
    Dummy(u32),
}

impl RectId {
    pub fn is_dummy(self) -> bool {
        matches!(self, RectId::Dummy(_))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Item {
    pub id: RectId,
    pub width: Time,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct NodeId(usize);

#[derive(Debug, Clone)]
struct Node {
    level: usize,
    q: Time,
    parent: Option<NodeId>,
    /// Keyed by the child's own vertical index.
    children: BTreeMap<Time, NodeId>,
    items: Vec<Item>,
    load: Time,
    dummy_load: Time,
    /// Own load plus the heaviest child chain, nominal and real.
    deep: Time,
    deep_real: Time,
    /// Items stored in this subtree.
    count: usize,
}

impl Node {
    fn new(level: usize, q: Time, parent: Option<NodeId>) -> Self {
        Self {
            level,
            q,
            parent,
            children: BTreeMap::new(),
            items: Vec::new(),
            load: 0,
            dummy_load: 0,
            deep: 0,
            deep_real: 0,
            count: 0,
        }
    }

    fn real_load(&self) -> Time {
        self.load - self.dummy_load
    }
}

/// Where a rectangle could go: an existing sub-bin, or the lowest sub-bin of
/// an empty child subtree of `parent`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Slot {
    Node(NodeId),
    Empty { parent: NodeId, child: Time },
}

/// A level-`k` sub-bin together with the worst row usage inside it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Candidate {
    pub level: usize,
    pub q: Time,
    pub slot: Slot,
    /// Largest nominal row load over the rows of the sub-bin.
    pub used: Time,
    /// Same, ignoring dummy rectangles.
    pub used_real: Time,
    /// Column where a new rectangle would start.
    pub next_x: Time,
}

impl Candidate {
    pub fn residual(&self, width: Time) -> Time {
        width.saturating_sub(self.used)
    }

    pub fn residual_real(&self, width: Time) -> Time {
        width.saturating_sub(self.used_real)
    }
}

/// Which sub-bins [`SubBinTree::candidates`] lists.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Enumeration {
    /// Stored sub-bins plus the lowest sub-bin of the first empty child of
    /// every node; empty siblings are interchangeable.
    FirstEmpty,
    /// Stored sub-bins plus the lowest sub-bin of every empty child.
    EveryEmptyChild,
    /// Every sub-bin of the level.
    Exhaustive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PlacedRectangle {
    pub id: RectId,
    pub width: Time,
    pub height: Time,
    pub level: usize,
    pub q: Time,
    pub node: NodeId,
    /// Nominal column at insertion time.
    pub x: Time,
    /// Set when a forced insertion pushed some row past the bin width.
    pub overflowed: bool,
}

#[derive(Debug, Clone)]
pub struct SubBinTree {
    width: Time,
    heights: Vec<Time>,
    fanouts: Vec<Time>,
    nodes: Vec<Node>,
    free: Vec<usize>,
}

const ROOT: NodeId = NodeId(0);

impl SubBinTree {
    pub fn new(periods: &HarmonicPeriodSet) -> Self {
        Self {
            width: periods.width(),
            heights: periods.heights(),
            fanouts: periods.bases().to_vec(),
            nodes: vec![Node::new(0, 0, None)],
            free: Vec::new(),
        }
    }

    pub fn width(&self) -> Time {
        self.width
    }

    pub fn levels(&self) -> usize {
        self.heights.len()
    }

    pub fn height(&self, level: usize) -> Time {
        self.heights[level]
    }

    /// Number of sub-bins at `level`, i.e. `H_0 / H_level`.
    pub fn sub_bins(&self, level: usize) -> Time {
        self.heights[0] / self.heights[level]
    }

    pub fn root(&self) -> NodeId {
        ROOT
    }

    pub fn is_empty(&self) -> bool {
        self.nodes[0].count == 0
    }

    pub fn item_count(&self) -> usize {
        self.nodes[0].count
    }

    pub fn node_level(&self, id: NodeId) -> usize {
        self.nodes[id.0].level
    }

    pub fn node_q(&self, id: NodeId) -> Time {
        self.nodes[id.0].q
    }

    pub fn items(&self, id: NodeId) -> &[Item] {
        &self.nodes[id.0].items
    }

    pub fn load(&self, id: NodeId) -> Time {
        self.nodes[id.0].load
    }

    pub fn real_load(&self, id: NodeId) -> Time {
        self.nodes[id.0].real_load()
    }

    /// Stored sub-bin at (`level`, `q`), if any.
    pub fn find(&self, level: usize, q: Time) -> Option<NodeId> {
        let mut node = ROOT;
        for j in 1..=level {
            let qj = q * self.heights[level] / self.heights[j];
            node = *self.nodes[node.0].children.get(&qj)?;
        }
        Some(node)
    }

    /// Candidate view of sub-bin (`level`, `q`), stored or not.
    pub fn candidate(&self, level: usize, q: Time) -> Result<Candidate, TreeError> {
        if level >= self.levels() || q >= self.sub_bins(level) {
            return Err(TreeError::NoSuchSubBin { level, q });
        }
        let mut node = ROOT;
        let (mut prefix, mut prefix_real) = (0, 0);
        for j in 1..=level {
            let qj = q * self.heights[level] / self.heights[j];
            let n = &self.nodes[node.0];
            match n.children.get(&qj) {
                Some(&child) => {
                    prefix += n.load;
                    prefix_real += n.real_load();
                    node = child;
                }
                None => {
                    let used = prefix + n.load;
                    return Ok(Candidate {
                        level,
                        q,
                        slot: Slot::Empty {
                            parent: node,
                            child: qj,
                        },
                        used,
                        used_real: prefix_real + n.real_load(),
                        next_x: used,
                    });
                }
            }
        }
        let n = &self.nodes[node.0];
        Ok(Candidate {
            level,
            q,
            slot: Slot::Node(node),
            used: prefix + n.deep,
            used_real: prefix_real + n.deep_real,
            next_x: prefix + n.load,
        })
    }

    /// Level-`level` sub-bins in increasing `q`.
    pub fn candidates(&self, level: usize, mode: Enumeration) -> Vec<Candidate> {
        let mut out = Vec::new();
        if mode == Enumeration::Exhaustive {
            for q in 0..self.sub_bins(level) {
                out.push(self.candidate(level, q).expect("q in range"));
            }
            return out;
        }
        self.collect(ROOT, level, mode, 0, 0, &mut out);
        out
    }

    fn collect(
        &self,
        id: NodeId,
        level: usize,
        mode: Enumeration,
        prefix: Time,
        prefix_real: Time,
        out: &mut Vec<Candidate>,
    ) {
        let n = &self.nodes[id.0];
        if n.level == level {
            out.push(Candidate {
                level,
                q: n.q,
                slot: Slot::Node(id),
                used: prefix + n.deep,
                used_real: prefix_real + n.deep_real,
                next_x: prefix + n.load,
            });
            return;
        }
        let fanout = self.fanouts[n.level];
        let below = self.heights[n.level + 1] / self.heights[level];
        let used = prefix + n.load;
        let used_real = prefix_real + n.real_load();
        let mut empty_seen = false;
        for child in n.q * fanout..(n.q + 1) * fanout {
            match n.children.get(&child) {
                Some(&c) => self.collect(c, level, mode, used, used_real, out),
                None => {
                    if empty_seen && mode == Enumeration::FirstEmpty {
                        continue;
                    }
                    empty_seen = true;
                    out.push(Candidate {
                        level,
                        q: child * below,
                        slot: Slot::Empty { parent: id, child },
                        used,
                        used_real,
                        next_x: used,
                    });
                }
            }
        }
    }

    /// Visits level-`level` candidates in increasing `q` (first empty child
    /// only) until `f` returns `true`; returns that candidate.
    pub fn first_candidate(
        &self,
        level: usize,
        mut f: impl FnMut(&Candidate) -> bool,
    ) -> Option<Candidate> {
        let mut hit = None;
        self.scan(ROOT, level, 0, 0, &mut |c| {
            if f(c) {
                hit = Some(*c);
                true
            } else {
                false
            }
        });
        hit
    }

    fn scan(
        &self,
        id: NodeId,
        level: usize,
        prefix: Time,
        prefix_real: Time,
        f: &mut dyn FnMut(&Candidate) -> bool,
    ) -> bool {
        let n = &self.nodes[id.0];
        if n.level == level {
            return f(&Candidate {
                level,
                q: n.q,
                slot: Slot::Node(id),
                used: prefix + n.deep,
                used_real: prefix_real + n.deep_real,
                next_x: prefix + n.load,
            });
        }
        let fanout = self.fanouts[n.level];
        let below = self.heights[n.level + 1] / self.heights[level];
        let used = prefix + n.load;
        let used_real = prefix_real + n.real_load();
        let mut empty_seen = false;
        for child in n.q * fanout..(n.q + 1) * fanout {
            let stop = match n.children.get(&child) {
                Some(&c) => self.scan(c, level, used, used_real, f),
                None if empty_seen => false,
                None => {
                    empty_seen = true;
                    f(&Candidate {
                        level,
                        q: child * below,
                        slot: Slot::Empty { parent: id, child },
                        used,
                        used_real,
                        next_x: used,
                    })
                }
            };
            if stop {
                return true;
            }
        }
        false
    }

    fn alloc(&mut self, node: Node) -> NodeId {
        match self.free.pop() {
            Some(i) => {
                self.nodes[i] = node;
                NodeId(i)
            }
            None => {
                self.nodes.push(node);
                NodeId(self.nodes.len() - 1)
            }
        }
    }

    fn materialize(&mut self, level: usize, q: Time) -> NodeId {
        let mut node = ROOT;
        for j in 1..=level {
            let qj = q * self.heights[level] / self.heights[j];
            node = match self.nodes[node.0].children.get(&qj) {
                Some(&c) => c,
                None => {
                    let c = self.alloc(Node::new(j, qj, Some(node)));
                    self.nodes[node.0].children.insert(qj, c);
                    c
                }
            };
        }
        node
    }

    fn refresh_upwards(&mut self, from: NodeId) {
        let mut cur = Some(from);
        while let Some(id) = cur {
            let (max_deep, max_real) = self.nodes[id.0]
                .children
                .values()
                .map(|c| (self.nodes[c.0].deep, self.nodes[c.0].deep_real))
                .fold((0, 0), |(a, b), (c, d)| (a.max(c), b.max(d)));
            let n = &mut self.nodes[id.0];
            n.deep = n.load + max_deep;
            n.deep_real = n.real_load() + max_real;
            cur = n.parent;
        }
    }

    fn adjust_count(&mut self, from: NodeId, added: bool) {
        let mut cur = Some(from);
        while let Some(id) = cur {
            let n = &mut self.nodes[id.0];
            if added {
                n.count += 1;
            } else {
                n.count -= 1;
            }
            cur = n.parent;
        }
    }

    /// Drops empty non-root nodes from `from` upwards; returns the first
    /// surviving ancestor.
    fn prune(&mut self, from: NodeId) -> NodeId {
        let mut id = from;
        while id != ROOT && self.nodes[id.0].count == 0 {
            let parent = self.nodes[id.0].parent.expect("non-root has a parent");
            let q = self.nodes[id.0].q;
            self.nodes[parent.0].children.remove(&q);
            self.free.push(id.0);
            id = parent;
        }
        id
    }

    /// Puts a rectangle of `width` into sub-bin (`level`, `q`). Unless
    /// `force` is set, refuses when some covered row would exceed the bin
    /// width (dummy rectangles included).
    pub fn insert(
        &mut self,
        level: usize,
        q: Time,
        id: RectId,
        width: Time,
        force: bool,
    ) -> Result<PlacedRectangle, TreeError> {
        let cand = self.candidate(level, q)?;
        let residual = cand.residual(self.width);
        if !force && width > residual {
            return Err(TreeError::WouldOverflow {
                level,
                q,
                width,
                residual,
            });
        }
        let node = match cand.slot {
            Slot::Node(n) => n,
            Slot::Empty { .. } => self.materialize(level, q),
        };
        let n = &mut self.nodes[node.0];
        n.items.push(Item { id, width });
        n.load += width;
        if id.is_dummy() {
            n.dummy_load += width;
        }
        self.adjust_count(node, true);
        self.refresh_upwards(node);
        Ok(PlacedRectangle {
            id,
            width,
            height: self.heights[level],
            level,
            q,
            node,
            x: cand.next_x,
            overflowed: cand.used + width > self.width,
        })
    }

    /// Inserts into the sub-bin described by a candidate.
    pub fn insert_at(
        &mut self,
        cand: &Candidate,
        id: RectId,
        width: Time,
        force: bool,
    ) -> Result<PlacedRectangle, TreeError> {
        self.insert(cand.level, cand.q, id, width, force)
    }

    /// Removes the most recently inserted item of `node`.
    pub fn pop_item(&mut self, node: NodeId) -> Option<Item> {
        let item = self.nodes[node.0].items.pop()?;
        let n = &mut self.nodes[node.0];
        n.load -= item.width;
        if item.id.is_dummy() {
            n.dummy_load -= item.width;
        }
        self.adjust_count(node, false);
        let survivor = self.prune(node);
        self.refresh_upwards(survivor);
        Some(item)
    }

    fn nodes_at(&self, level: usize) -> Vec<NodeId> {
        let mut out = Vec::new();
        let mut stack = vec![ROOT];
        while let Some(id) = stack.pop() {
            let n = &self.nodes[id.0];
            if n.level == level {
                out.push(id);
            } else {
                stack.extend(n.children.values().rev().copied());
            }
        }
        out
    }

    /// Removes every dummy rectangle stored at `level`. Returns how many.
    pub fn remove_dummies(&mut self, level: usize) -> usize {
        let mut removed = 0;
        for id in self.nodes_at(level) {
            let n = &mut self.nodes[id.0];
            let before = n.items.len();
            n.items.retain(|it| !it.id.is_dummy());
            let dropped = before - n.items.len();
            if dropped == 0 {
                continue;
            }
            removed += dropped;
            n.load -= n.dummy_load;
            n.dummy_load = 0;
            for _ in 0..dropped {
                self.adjust_count(id, false);
            }
            let survivor = self.prune(id);
            self.refresh_upwards(survivor);
        }
        removed
    }

    /// Whether every row respects the bin width, counting dummies.
    pub fn within_capacity(&self) -> bool {
        self.nodes[0].deep <= self.width
    }

    /// Lays the stored rectangles out left to right in every sub-bin and
    /// returns their bottom-left corners.
    pub fn to_packing(&self) -> Result<Packing, TreeError> {
        let mut placements = BTreeMap::new();
        let mut stack = vec![(ROOT, 0)];
        while let Some((id, offset)) = stack.pop() {
            let n = &self.nodes[id.0];
            let y = n.q * self.heights[n.level];
            let mut x = offset;
            for item in &n.items {
                match item.id {
                    RectId::Job(job) => {
                        placements.insert(job, Point { x, y });
                    }
                    RectId::Dummy(_) => return Err(TreeError::DummiesPresent),
                }
                x += item.width;
            }
            stack.extend(n.children.values().map(|&c| (c, x)));
        }
        Ok(Packing::new(placements))
    }
}
