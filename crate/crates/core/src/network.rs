//! Field geometry, node deployment and region-wise ID assignment.

use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use rand::Rng;

use crate::error::SimError;
use crate::radio::Joules;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }
}

/// Euclidean distance in metres.
pub fn distance(a: Point, b: Point) -> f64 {
    libm::hypot(a.x - b.x, a.y - b.y)
}

/// Network-wide node identifier, starting at 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(pub u32);

impl NodeId {
    /// Position of this node in an ID-ordered node list.
    pub fn index(self) -> usize {
        self.0 as usize - 1
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Region {
    R1,
    R2,
}

impl Region {
    pub const ALL: [Region; 2] = [Region::R1, Region::R2];

    pub fn index(self) -> usize {
        match self {
            Region::R1 => 0,
            Region::R2 => 1,
        }
    }
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Region::R1 => "R1",
            Region::R2 => "R2",
        })
    }
}

/// Orientation of the line that halves the field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SplitAxis {
    /// Split at `x = width / 2`; R1 is the left half.
    #[default]
    Vertical,
    /// Split at `y = height / 2`; R1 is the lower half.
    Horizontal,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldConfig {
    pub width: f64,
    pub height: f64,
    pub bs: Point,
    pub split_axis: SplitAxis,
    pub nodes_per_region: u32,
}

impl Default for FieldConfig {
    fn default() -> Self {
        Self {
            width: 100.0,
            height: 100.0,
            bs: Point::new(50.0, 50.0),
            split_axis: SplitAxis::Vertical,
            nodes_per_region: 50,
        }
    }
}

impl FieldConfig {
    pub fn n_total(&self) -> u32 {
        2 * self.nodes_per_region
    }

    pub fn validate(&self) -> Result<(), SimError> {
        if !(self.width.is_finite() && self.width > 0.0) {
            return Err(SimError::InvalidParameter {
                name: "width",
                reason: "must be finite and strictly positive",
            });
        }
        if !(self.height.is_finite() && self.height > 0.0) {
            return Err(SimError::InvalidParameter {
                name: "height",
                reason: "must be finite and strictly positive",
            });
        }
        if !(0.0..=self.width).contains(&self.bs.x) {
            return Err(SimError::InvalidParameter {
                name: "bs_x",
                reason: "base station must lie inside the field",
            });
        }
        if !(0.0..=self.height).contains(&self.bs.y) {
            return Err(SimError::InvalidParameter {
                name: "bs_y",
                reason: "base station must lie inside the field",
            });
        }
        if self.nodes_per_region == 0 {
            return Err(SimError::InvalidParameter {
                name: "nodes_per_region",
                reason: "must be at least 1",
            });
        }
        Ok(())
    }

    /// Which half of the field `p` falls into.
    pub fn region_of(&self, p: Point) -> Region {
        let below_split = match self.split_axis {
            SplitAxis::Vertical => p.x < self.width / 2.0,
            SplitAxis::Horizontal => p.y < self.height / 2.0,
        };
        if below_split {
            Region::R1
        } else {
            Region::R2
        }
    }

    /// `(x range, y range)` of a region as half-open intervals.
    fn bounds(&self, region: Region) -> ((f64, f64), (f64, f64)) {
        let (w, h) = (self.width, self.height);
        match (self.split_axis, region) {
            (SplitAxis::Vertical, Region::R1) => ((0.0, w / 2.0), (0.0, h)),
            (SplitAxis::Vertical, Region::R2) => ((w / 2.0, w), (0.0, h)),
            (SplitAxis::Horizontal, Region::R1) => ((0.0, w), (0.0, h / 2.0)),
            (SplitAxis::Horizontal, Region::R2) => ((0.0, w), (h / 2.0, h)),
        }
    }
}

/// What a node does in the current round.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Role {
    ClusterHead,
    Member,
    DirectSender,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NodeState {
    pub id: NodeId,
    pub region: Region,
    pub pos: Point,
    pub energy: Joules,
    pub alive: bool,
    /// `None` before the first round and for nodes already dead when the
    /// round started.
    pub role: Option<Role>,
}

impl NodeState {
    fn fresh(id: u32, region: Region, pos: Point, e_init: Joules) -> Self {
        Self {
            id: NodeId(id),
            region,
            pos,
            energy: e_init,
            alive: true,
            role: None,
        }
    }
}

/// Places `nodes_per_region` nodes uniformly in R1, then as many in R2.
///
/// Each node consumes two draws from `rng`, `x` then `y`. The returned IDs
/// follow deployment order; call [`assign_ids`] for the final numbering.
pub fn deploy<R: Rng + ?Sized>(field: &FieldConfig, e_init: Joules, rng: &mut R) -> Vec<NodeState> {
    let mut nodes = Vec::with_capacity(field.n_total() as usize);
    for region in Region::ALL {
        let ((x0, x1), (y0, y1)) = field.bounds(region);
        for _ in 0..field.nodes_per_region {
            let x = rng.random_range(x0..x1);
            let y = rng.random_range(y0..y1);
            let id = nodes.len() as u32 + 1;
            nodes.push(NodeState::fresh(id, region, Point::new(x, y), e_init));
        }
    }
    nodes
}

fn id_order(a: &NodeState, b: &NodeState) -> Ordering {
    a.region
        .cmp(&b.region)
        .then_with(|| b.pos.y.total_cmp(&a.pos.y))
        .then_with(|| a.pos.x.total_cmp(&b.pos.x))
}

/// Numbers nodes region by region: R1 first, and within a region from the
/// top-most node down (ties by ascending `x`, then deployment order).
///
/// The result is sorted by ID, so `nodes[id.index()]` is node `id`.
pub fn assign_ids(mut nodes: Vec<NodeState>) -> Vec<NodeState> {
    // stable sort keeps deployment order for identical positions
    nodes.sort_by(id_order);
    for (i, node) in nodes.iter_mut().enumerate() {
        node.id = NodeId(i as u32 + 1);
    }
    nodes
}

/// Builds an ID-assigned network from explicit positions, tagging each node
/// with the region its position falls in.
pub fn nodes_from_positions(field: &FieldConfig, e_init: Joules, positions: &[Point]) -> Vec<NodeState> {
    let nodes = positions
        .iter()
        .enumerate()
        .map(|(i, &p)| NodeState::fresh(i as u32 + 1, field.region_of(p), p, e_init))
        .collect();
    assign_ids(nodes)
}
