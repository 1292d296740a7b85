//! Exact Euclidean projection onto a 2-D polyhedron.
//!
//! The position subproblem maximizes an isotropic concave quadratic over the
//! antenna region intersected with linearized spacing constraints, which is
//! the projection of the unconstrained maximizer onto that polyhedron. In
//! two dimensions the projection is either the point itself, its projection
//! onto one active constraint line, or a vertex where two constraint lines
//! meet, so enumerating those candidates solves the subproblem exactly.

use crate::channel::{Position, Region};
use crate::error::{Error, Result};

/// Feasibility slack for constraint checks.
const FEAS_TOL: f64 = 1e-9;

/// Closed halfspace `normal . t >= offset`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Halfspace {
    pub normal: [f64; 2],
    pub offset: f64,
}

impl Halfspace {
    pub fn satisfied_by(&self, p: Position, tol: f64) -> bool {
        self.normal[0] * p.x + self.normal[1] * p.y >= self.offset - tol
    }

    /// Euclidean projection of `p` onto the boundary line.
    fn project_onto_boundary(&self, p: Position) -> Position {
        let nn = self.normal[0] * self.normal[0] + self.normal[1] * self.normal[1];
        let excess = (self.offset - self.normal[0] * p.x - self.normal[1] * p.y) / nn;
        Position::new(p.x + excess * self.normal[0], p.y + excess * self.normal[1])
    }
}

/// First-order outer linearization of the pairwise spacing constraints for
/// antenna `n`, anchored at the current positions.
///
/// For every other antenna v the constraint `|t - t_v| >= D` is replaced by
/// the halfspace `a . t >= D + a . t_v` with `a` the unit vector from t_v to
/// the anchor. Satisfying the halfspace implies the true distance bound by
/// Cauchy-Schwarz, and the anchor itself satisfies every emitted halfspace
/// whenever the current layout is feasible.
pub fn linearized_spacing_halfspaces(
    n: usize,
    positions: &[Position],
    min_spacing: f64,
) -> Result<Vec<Halfspace>> {
    let anchor = positions[n];
    let mut halfspaces = Vec::with_capacity(positions.len().saturating_sub(1));
    for (v, &other) in positions.iter().enumerate() {
        if v == n {
            continue;
        }
        let dx = anchor.x - other.x;
        let dy = anchor.y - other.y;
        let dist = dx.hypot(dy);
        if dist == 0.0 {
            return Err(Error::InfeasibleAnchor { n, v });
        }
        let normal = [dx / dist, dy / dist];
        halfspaces.push(Halfspace {
            normal,
            offset: min_spacing + normal[0] * other.x + normal[1] * other.y,
        });
    }
    Ok(halfspaces)
}

/// Nearest point to `p` in the intersection of the region box with the
/// given halfspaces.
///
/// The feasible set must be nonempty (in the optimizer it always contains
/// the anchor); an empty candidate set signals a caller bug.
pub fn project_onto_polyhedron(
    p: Position,
    region: &Region,
    halfspaces: &[Halfspace],
) -> Result<Position> {
    let hw = region.half_width();
    let mut constraints: Vec<Halfspace> = Vec::with_capacity(4 + halfspaces.len());
    constraints.push(Halfspace {
        normal: [1.0, 0.0],
        offset: -hw,
    });
    constraints.push(Halfspace {
        normal: [-1.0, 0.0],
        offset: -hw,
    });
    constraints.push(Halfspace {
        normal: [0.0, 1.0],
        offset: -hw,
    });
    constraints.push(Halfspace {
        normal: [0.0, -1.0],
        offset: -hw,
    });
    constraints.extend_from_slice(halfspaces);

    let feasible = |q: Position| constraints.iter().all(|c| c.satisfied_by(q, FEAS_TOL));

    if feasible(p) {
        return Ok(region.clamp(p));
    }

    let mut best: Option<(f64, Position)> = None;
    let mut consider = |q: Position| {
        if feasible(q) {
            let d = q.distance_to(p);
            if best.is_none_or(|(bd, _)| d < bd) {
                best = Some((d, q));
            }
        }
    };

    // Projections onto single constraint lines.
    for c in &constraints {
        consider(c.project_onto_boundary(p));
    }
    // Pairwise constraint-line intersections.
    for i in 0..constraints.len() {
        for j in (i + 1)..constraints.len() {
            let a = constraints[i];
            let b = constraints[j];
            let det = a.normal[0] * b.normal[1] - a.normal[1] * b.normal[0];
            if det.abs() < 1e-14 {
                continue;
            }
            let x = (a.offset * b.normal[1] - b.offset * a.normal[1]) / det;
            let y = (a.normal[0] * b.offset - b.normal[0] * a.offset) / det;
            consider(Position::new(x, y));
        }
    }

    match best {
        Some((_, q)) => Ok(region.clamp(q)),
        None => Err(Error::ProjectionInfeasible),
    }
}
