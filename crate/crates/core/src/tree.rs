//! The partly overloaded OVSF code tree.
//!
//! Variant-0 nodes carry the classical OVSF codes; at the leaf layer the
//! lower half additionally carries the extra sequences of the overloaded
//! set, attached round-robin: extra j hangs off lower leaf j mod 2^(L-1)
//! as variant 1 + j / 2^(L-1).

use std::collections::BTreeMap;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::codes::{self, ChipSequence, ExtraCount, OverloadedCodeSet};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TreeError {
    #[error("invalid node address {0:?}")]
    InvalidNode(NodeAddress),
    #[error("leaf layer {0} is outside the supported range 2..=5")]
    LayerOutOfRange(u32),
    #[error("spreading factor {0} does not name a tree layer")]
    InvalidSpreadingFactor(usize),
    #[error("no free globally orthogonal code for a machine-type user")]
    NoOrthogonalCapacity,
    #[error("base codes and extras are all taken for best-effort users")]
    OverloadCapacityExhausted,
    #[error("node {0:?} is not allocated")]
    NotAllocated(NodeAddress),
}

/// A position in the tree: layer, index within the layer, and code variant
/// (0 = the OVSF base code, v >= 1 = the v-th extra attached to the node).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct NodeAddress {
    pub layer: u32,
    pub index: u32,
    pub variant: u32,
}

impl NodeAddress {
    pub fn new(layer: u32, index: u32, variant: u32) -> Self {
        Self { layer, index, variant }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TrafficClass {
    MachineType,
    BestEffort,
}

impl TrafficClass {
    pub fn as_str(self) -> &'static str {
        match self {
            TrafficClass::MachineType => "machine_type",
            TrafficClass::BestEffort => "best_effort",
        }
    }
}

pub type UserId = u64;

/// True iff `a` is a strict ancestor of `b` or vice versa. Both addresses
/// must be variant 0; equal nodes are not each other's mother.
pub fn is_mother(a: &NodeAddress, b: &NodeAddress) -> Result<bool, TreeError> {
    if a.variant != 0 {
        return Err(TreeError::InvalidNode(*a));
    }
    if b.variant != 0 {
        return Err(TreeError::InvalidNode(*b));
    }
    let strict_ancestor = |upper: &NodeAddress, lower: &NodeAddress| {
        upper.layer < lower.layer && lower.index >> (lower.layer - upper.layer) == upper.index
    };
    Ok(strict_ancestor(a, b) || strict_ancestor(b, a))
}

/// Lineage conflict over (layer, index) regardless of variant: extras block
/// and are blocked by allocations on their branch just like base codes.
fn same_branch(a: &NodeAddress, b: &NodeAddress) -> bool {
    let anc = |u: &NodeAddress, l: &NodeAddress| {
        u.layer < l.layer && l.index >> (l.layer - u.layer) == u.index
    };
    anc(a, b) || anc(b, a)
}

/// The partly overloaded OVSF tree with its allocation state.
#[derive(Debug)]
pub struct CodeTree {
    max_layer: u32,
    allocations: BTreeMap<NodeAddress, (UserId, TrafficClass)>,
    next_user: UserId,
    extras: OnceLock<OverloadedCodeSet>,
}

impl CodeTree {
    /// Leaf spreading factor is 2^max_layer; the extras catalog limits the
    /// leaf layer to 2..=5.
    pub fn new(max_layer: u32) -> Result<Self, TreeError> {
        if !(2..=5).contains(&max_layer) {
            return Err(TreeError::LayerOutOfRange(max_layer));
        }
        Ok(Self {
            max_layer,
            allocations: BTreeMap::new(),
            next_user: 0,
            extras: OnceLock::new(),
        })
    }

    pub fn max_layer(&self) -> u32 {
        self.max_layer
    }

    pub fn leaf_sf(&self) -> usize {
        1 << self.max_layer
    }

    /// The overloaded set for the leaf layer, built on first use.
    pub fn extras_catalog(&self) -> &OverloadedCodeSet {
        self.extras.get_or_init(|| {
            codes::generate_overloaded_set(1 << self.max_layer, ExtraCount::All)
                .expect("leaf layer validated at construction")
        })
    }

    fn check_node(&self, node: &NodeAddress) -> Result<(), TreeError> {
        let invalid = TreeError::InvalidNode(*node);
        if node.layer > self.max_layer || node.index >= 1 << node.layer {
            return Err(invalid);
        }
        if node.variant > 0 {
            // Extras exist only on lower-half leaves.
            if node.layer != self.max_layer || node.layer == 0 {
                return Err(invalid);
            }
            let half = 1u32 << (node.layer - 1);
            if node.index < half {
                return Err(invalid);
            }
            if self.extra_index(node).is_none() {
                return Err(invalid);
            }
        }
        Ok(())
    }

    /// Catalog position of the extra carried by a variant >= 1 node.
    fn extra_index(&self, node: &NodeAddress) -> Option<usize> {
        let half = 1usize << (self.max_layer - 1);
        let slot = node.index as usize - half;
        let idx = (node.variant as usize - 1) * half + slot;
        (idx < self.extras_catalog().extras().len()).then_some(idx)
    }

    /// The chip sequence carried by a node.
    pub fn code_of(&self, node: &NodeAddress) -> Result<ChipSequence, TreeError> {
        self.check_node(node)?;
        if node.variant == 0 {
            return codes::ovsf_row(node.layer, node.index as u64)
                .map_err(|_| TreeError::InvalidNode(*node));
        }
        let idx = self.extra_index(node).ok_or(TreeError::InvalidNode(*node))?;
        Ok(self.extras_catalog().extras()[idx].clone())
    }

    /// Orthogonality decided numerically, not structurally: the longer code
    /// is split into windows of the shorter code's length (the despreading
    /// periods of the shorter code) and every exact integer window
    /// correlation must be zero. A single full-period correlation would miss
    /// mother/descendant pairs whose concatenation signs cancel.
    pub fn are_orthogonal(&self, a: &NodeAddress, b: &NodeAddress) -> Result<bool, TreeError> {
        let ca = self.code_of(a)?;
        let cb = self.code_of(b)?;
        let (short, long) = if ca.len() <= cb.len() { (&ca, &cb) } else { (&cb, &ca) };
        Ok(long.chips().chunks(short.len()).all(|window| {
            let corr: i64 = window
                .iter()
                .zip(short.chips())
                .map(|(&x, &y)| i64::from(x) * i64::from(y))
                .sum();
            corr == 0
        }))
    }

    /// Allocates the lowest-index free code of the requested spreading
    /// factor: machine-type users get upper-half codes, best-effort users
    /// lower-half base codes and then (at the leaf layer) extras in catalog
    /// order.
    pub fn allocate(&mut self, class: TrafficClass, sf: usize) -> Result<NodeAddress, TreeError> {
        if !sf.is_power_of_two() {
            return Err(TreeError::InvalidSpreadingFactor(sf));
        }
        let layer = sf.trailing_zeros();
        if layer == 0 || layer > self.max_layer {
            return Err(TreeError::InvalidSpreadingFactor(sf));
        }
        let half = 1u32 << (layer - 1);
        let base_range = match class {
            TrafficClass::MachineType => 0..half,
            TrafficClass::BestEffort => half..2 * half,
        };
        for index in base_range {
            let node = NodeAddress::new(layer, index, 0);
            if self.is_free(&node) {
                return Ok(self.record(node, class));
            }
        }
        if class == TrafficClass::BestEffort && layer == self.max_layer {
            for j in 0..self.extras_catalog().extras().len() {
                let node = NodeAddress::new(
                    layer,
                    half + (j as u32 % half),
                    1 + j as u32 / half,
                );
                if self.is_free(&node) {
                    return Ok(self.record(node, class));
                }
            }
        }
        match class {
            TrafficClass::MachineType => Err(TreeError::NoOrthogonalCapacity),
            TrafficClass::BestEffort => Err(TreeError::OverloadCapacityExhausted),
        }
    }

    fn is_free(&self, node: &NodeAddress) -> bool {
        !self.allocations.contains_key(node)
            && !self.allocations.keys().any(|held| same_branch(held, node))
    }

    fn record(&mut self, node: NodeAddress, class: TrafficClass) -> NodeAddress {
        let user = self.next_user;
        self.next_user += 1;
        self.allocations.insert(node, (user, class));
        node
    }

    pub fn release(&mut self, node: &NodeAddress) -> Result<(), TreeError> {
        self.allocations
            .remove(node)
            .map(|_| ())
            .ok_or(TreeError::NotAllocated(*node))
    }

    pub fn allocations(&self) -> impl Iterator<Item = (&NodeAddress, UserId, TrafficClass)> {
        self.allocations.iter().map(|(n, &(u, c))| (n, u, c))
    }

    /// Text dump: one "layer,index,variant,user_id,class" line per
    /// allocation, in address order.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for (node, user, class) in self.allocations() {
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                node.layer,
                node.index,
                node.variant,
                user,
                class.as_str()
            ));
        }
        out
    }
}
