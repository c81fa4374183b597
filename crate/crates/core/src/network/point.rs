use super::{ArcId, NodeId};
use crate::rational::Rational;

/// Location on a network.
///
/// Points built through [`super::Network::point`] are canonical: an
/// interior offset is always strictly between 0 and the arc length, so two
/// equal locations compare equal. The derived order (nodes by id, then
/// arcs by id, then offset) is the canonical tie-break order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Point {
    Node(NodeId),
    Interior { arc: ArcId, offset: Rational },
}

impl Point {
    pub fn is_node(&self) -> bool {
        matches!(self, Point::Node(_))
    }

    pub fn as_node(&self) -> Option<NodeId> {
        match self {
            Point::Node(n) => Some(*n),
            Point::Interior { .. } => None,
        }
    }
}
