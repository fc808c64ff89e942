//! Ray/equipotential partitions of the plane and their pullbacks.
//!
//! Depth 0 cuts the region inside a base equipotential by a cycle of
//! external rays landing on a repelling orbit; the faces of that
//! arrangement are the depth-0 pieces. Deeper pieces are preimage
//! components: the boundary of a depth-`n` piece is lifted pointwise
//! through `z -> sqrt(z - c)` from its image piece at depth `n-1`, which
//! keeps every computation on contracting branches. Pieces are nested,
//! carry stable ids, and answer membership queries geometrically.

use std::collections::HashMap;

use num_complex::Complex64;
use thiserror::Error;

use crate::angle::{orbits_of_period, Angle};
use crate::dynamics::{PeriodicKind, QuadraticParameter};
use crate::geom::ClosedPolyline;
use crate::potential::{
    external_angle_unchecked, green, ray_point_f, trace_ray, trace_ray_orbit, ExternalRay,
    PotentialError, RayStatus,
};

#[derive(Debug, Error)]
pub enum PuzzleError {
    #[error("the separate fixed point is not repelling")]
    AlphaNotRepelling,
    #[error("the non-separate fixed point is not repelling")]
    BetaNotRepelling,
    #[error("no ray cycle found landing at the target up to period {0}")]
    NoCycleFound(u32),
    #[error("more than one ray cycle of minimal period lands at the target")]
    MultipleCycles,
    #[error("critical orbit escapes; puzzle undefined")]
    CriticalOrbitEscapes,
    #[error("piece boundary passes through the critical value")]
    BoundaryThroughCriticalValue,
    #[error("construction truncated at depth {reached} (requested {requested})")]
    DepthTruncated { reached: u32, requested: u32 },
    #[error("face walk failed: {0}")]
    FaceWalk(String),
    #[error(transparent)]
    Ray(#[from] PotentialError),
}

/// Tolerance for matching ray landing points to target orbits.
pub const LANDING_TOL: f64 = 1e-6;
/// Membership queries closer than this to a boundary polyline answer
/// `OnBoundary`; matches the ray-tracing accuracy.
pub const BOUNDARY_TOL: f64 = 1e-7;

/// A cycle of external rays landing on a repelling orbit.
#[derive(Debug, Clone)]
pub struct RayCycle {
    /// Number of rays landing at the base point itself.
    pub q: u32,
    /// All angles in the doubling cycle, in trace order.
    pub angles: Vec<Angle>,
    /// Traced rays, aligned with `angles`.
    pub rays: Vec<ExternalRay>,
    /// Distance from each ray's landing estimate to its nearest target.
    pub landing_residuals: Vec<f64>,
}

/// Search for the cycle of rays landing at the separate fixed point.
///
/// For `q = 2..q_max`, every doubling orbit of exact period `q` is traced
/// (one representative first); the first period whose rays land at alpha
/// is returned. Distinct minimal-period cycles landing at the same point
/// are reported as an error rather than disambiguated silently.
pub fn alpha_ray_cycle(c: Complex64, q_max: u32) -> Result<RayCycle, PuzzleError> {
    let p = QuadraticParameter::new(c).map_err(|_| PuzzleError::AlphaNotRepelling)?;
    if p.alpha_class.kind != PeriodicKind::Repelling {
        return Err(PuzzleError::AlphaNotRepelling);
    }
    cycle_landing_at(c, &[p.alpha], 2, q_max)
}

/// Search for a ray cycle landing on the given periodic orbit of `P_c`.
/// Candidate cycle lengths run over multiples of the orbit length, up to
/// `q_max` in total.
pub fn cycle_landing_at(
    c: Complex64,
    orbit: &[Complex64],
    q_min: u32,
    q_max: u32,
) -> Result<RayCycle, PuzzleError> {
    let near_orbit = |z: Complex64| orbit.iter().any(|p| (z - *p).norm() <= LANDING_TOL);
    let base = orbit[0];
    for q in q_min..=q_max {
        if q as usize % orbit.len() != 0 {
            continue;
        }
        let mut found: Option<RayCycle> = None;
        for rep_orbit in orbits_of_period(q) {
            let theta = rep_orbit[0];
            let probe = trace_ray(c, theta, 0.0)?;
            if !probe.landed || !near_orbit(probe.landing.unwrap()) {
                continue;
            }
            // Promising: trace the whole cycle and check every landing.
            let rays = trace_ray_orbit(c, theta, None)?;
            let mut ok = true;
            let mut residuals = Vec::with_capacity(rays.len());
            let mut q_at_base = 0u32;
            for ray in &rays {
                match ray.landing {
                    Some(l) if near_orbit(l) => {
                        let r =
                            orbit.iter().map(|p| (l - *p).norm()).fold(f64::INFINITY, f64::min);
                        residuals.push(r);
                        if (l - base).norm() <= LANDING_TOL {
                            q_at_base += 1;
                        }
                    }
                    _ => {
                        ok = false;
                        break;
                    }
                }
            }
            if !ok || q_at_base == 0 {
                continue;
            }
            let cycle = RayCycle {
                q: q_at_base,
                angles: rays.iter().map(|r| r.theta).collect(),
                rays,
                landing_residuals: residuals,
            };
            if found.is_some() {
                return Err(PuzzleError::MultipleCycles);
            }
            found = Some(cycle);
        }
        if let Some(cycle) = found {
            return Ok(cycle);
        }
    }
    Err(PuzzleError::NoCycleFound(q_max))
}

/// Stable piece identifier: index into the puzzle's arena.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PieceId(pub u32);

#[derive(Debug, Clone)]
pub enum EdgeKind {
    /// Ray segment of the given external angle, running inward from the
    /// piece's equipotential to the landing point (or back out).
    Ray { angle: Angle, inward: bool },
    /// Equipotential arc between two external angles (turns; approximate
    /// for lifted arcs) at the piece level.
    Arc { from: f64, to: f64 },
}

/// One directed boundary edge of a piece. The first point of each edge
/// continues the last point of the previous edge.
#[derive(Debug, Clone)]
pub struct BoundaryEdge {
    pub kind: EdgeKind,
    pub points: Vec<Complex64>,
}

#[derive(Debug, Clone)]
pub struct Piece {
    pub id: PieceId,
    pub depth: u32,
    /// Potential of the truncating equipotential, `log(r) / 2^depth`.
    pub level: f64,
    pub edges: Vec<BoundaryEdge>,
    pub boundary: ClosedPolyline,
    /// Landing points (preimages of the cut orbit) on the boundary.
    pub vertices: Vec<Complex64>,
    /// External angles of the boundary rays, sorted.
    pub ray_angles: Vec<Angle>,
    pub is_critical: bool,
    pub witness: Complex64,
    /// Cached bounding box of the boundary.
    pub bbox: (Complex64, Complex64),
    /// Containing piece one depth up (unset at depth 0).
    pub parent: Option<PieceId>,
    /// Image piece under `P_c` (unset at depth 0).
    pub image: Option<PieceId>,
}

/// Result of a membership query.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Membership {
    Piece(PieceId),
    OnBoundary,
    Exterior,
}

pub struct Puzzle {
    pub c: Complex64,
    /// Base equipotential parameter: depth `n` is truncated at
    /// `G = log(r) / 2^n`.
    pub r: f64,
    pub cycle: RayCycle,
    pieces: Vec<Piece>,
    levels: Vec<Vec<PieceId>>,
    /// Memoized preimage components per piece.
    lifts: HashMap<PieceId, Vec<PieceId>>,
}

impl Puzzle {
    pub fn piece(&self, id: PieceId) -> &Piece {
        &self.pieces[id.0 as usize]
    }

    pub fn max_depth(&self) -> u32 {
        self.levels.len() as u32 - 1
    }

    /// Ids of the materialized partition at `depth`.
    pub fn level(&self, depth: u32) -> &[PieceId] {
        &self.levels[depth as usize]
    }

    pub fn level_potential(&self, depth: u32) -> f64 {
        self.r.ln() / 2.0f64.powi(depth as i32)
    }

    /// The critical piece of the materialized partition at `depth`.
    pub fn critical_piece(&self, depth: u32) -> Option<PieceId> {
        self.levels[depth as usize].iter().copied().find(|id| self.piece(*id).is_critical)
    }

    /// Locate `z` within the materialized partition at `depth`.
    pub fn piece_containing(&self, z: Complex64, depth: u32) -> Membership {
        let level = self.level_potential(depth);
        if let Ok(est) = green(self.c, z) {
            if est.value > level + 1e-9 {
                return Membership::Exterior;
            }
        }
        for &id in &self.levels[depth as usize] {
            let piece = &self.pieces[id.0 as usize];
            let (lo, hi) = piece.bbox;
            if z.re < lo.re - BOUNDARY_TOL
                || z.re > hi.re + BOUNDARY_TOL
                || z.im < lo.im - BOUNDARY_TOL
                || z.im > hi.im + BOUNDARY_TOL
            {
                continue;
            }
            if piece.boundary.distance(z) < BOUNDARY_TOL {
                return Membership::OnBoundary;
            }
            if piece.boundary.contains(z) {
                return Membership::Piece(id);
            }
        }
        // Inside the equipotential but in no face at sampling resolution.
        Membership::OnBoundary
    }

    /// Extend a single end lazily: the piece at `depth` containing
    /// `orbit[idx]`, where `orbit` is a forward orbit under `P_c`.
    /// Materialized depths answer directly; deeper pieces are produced by
    /// lifting the end of the next orbit point.
    pub fn end_piece(
        &mut self,
        orbit: &[Complex64],
        idx: usize,
        depth: u32,
    ) -> Result<PieceId, PuzzleError> {
        if depth <= self.max_depth() {
            return match self.piece_containing(orbit[idx], depth) {
                Membership::Piece(id) => Ok(id),
                other => Err(PuzzleError::FaceWalk(format!(
                    "orbit point not interior at depth {depth}: {other:?}"
                ))),
            };
        }
        if idx + 1 >= orbit.len() {
            return Err(PuzzleError::DepthTruncated {
                reached: self.max_depth(),
                requested: depth,
            });
        }
        let parent = self.end_piece(orbit, idx + 1, depth - 1)?;
        let children = lift_piece(self, parent)?;
        for id in children {
            let piece = &self.pieces[id.0 as usize];
            if piece.boundary.distance(orbit[idx]) < BOUNDARY_TOL {
                return Err(PuzzleError::FaceWalk(format!(
                    "orbit point on boundary at depth {depth}"
                )));
            }
            if piece.boundary.contains(orbit[idx]) {
                return Ok(id);
            }
        }
        Err(PuzzleError::FaceWalk(format!("orbit point escaped its end at depth {depth}")))
    }

    /// The critical-end piece at `depth` (any depth; lifts lazily).
    pub fn critical_end_piece(&mut self, depth: u32) -> Result<PieceId, PuzzleError> {
        if depth <= self.max_depth() {
            return self
                .critical_piece(depth)
                .ok_or_else(|| PuzzleError::FaceWalk("no critical piece".into()));
        }
        // 0's end: orbit of 0 long enough for the recursion.
        let need = (depth - self.max_depth()) as usize + 2;
        let orbit = crate::dynamics::iterate(self.c, Complex64::new(0.0, 0.0), need as u32)
            .map_err(|_| PuzzleError::CriticalOrbitEscapes)?;
        self.end_piece(&orbit.points, 0, depth)
    }

    pub fn piece_count(&self, depth: u32) -> usize {
        self.levels[depth as usize].len()
    }
}

const ARC_SAMPLES_PER_TURN: f64 = 256.0;

/// Build the puzzle for `P_c` to depth `max_depth`, cutting at the
/// equipotential `G = log r` with the ray cycle at the separate fixed
/// point.
pub fn build_puzzle(c: Complex64, max_depth: u32, r: f64) -> Result<Puzzle, PuzzleError> {
    let p = QuadraticParameter::new(c).map_err(|_| PuzzleError::AlphaNotRepelling)?;
    if p.alpha_class.kind != PeriodicKind::Repelling {
        return Err(PuzzleError::AlphaNotRepelling);
    }
    if p.beta_class.kind != PeriodicKind::Repelling {
        return Err(PuzzleError::BetaNotRepelling);
    }
    let cycle = alpha_ray_cycle(c, 8)?;
    build_puzzle_with_cycle(c, max_depth, r, cycle)
}

/// Build a puzzle from an explicit ray cycle (renormalization cascades
/// pass cycles landing on higher-period orbits).
pub fn build_puzzle_with_cycle(
    c: Complex64,
    max_depth: u32,
    r: f64,
    cycle: RayCycle,
) -> Result<Puzzle, PuzzleError> {
    assert!(r > 1.0, "base equipotential parameter must exceed 1");
    let orbit = crate::dynamics::iterate(c, Complex64::new(0.0, 0.0), 64)
        .map_err(|_| PuzzleError::CriticalOrbitEscapes)?;
    if orbit.escaped {
        return Err(PuzzleError::CriticalOrbitEscapes);
    }

    // Retrace the cycle rays with levels aligned to log(r) / 2^j.
    let g0 = r.ln();
    let rays = trace_ray_orbit(c, cycle.angles[0], Some(g0))?;
    for ray in &rays {
        if ray.status != RayStatus::Landed {
            return Err(PuzzleError::Ray(PotentialError::PrecisionFloor));
        }
    }

    let mut puzzle = Puzzle {
        c,
        r,
        cycle,
        pieces: Vec::new(),
        levels: Vec::new(),
        lifts: HashMap::new(),
    };

    let base = base_partition(&mut puzzle, &rays, g0)?;
    puzzle.levels.push(base);

    for depth in 1..=max_depth {
        let parents = puzzle.levels[depth as usize - 1].clone();
        let mut level = Vec::new();
        for parent in parents {
            let children = lift_piece(&mut puzzle, parent)?;
            level.extend(children);
        }
        if level.is_empty() {
            return Err(PuzzleError::DepthTruncated { reached: depth - 1, requested: max_depth });
        }
        // Containment parents within the previous materialized level.
        let prev = puzzle.levels[depth as usize - 1].clone();
        for &id in &level {
            let w = puzzle.pieces[id.0 as usize].witness;
            let parent =
                prev.iter().copied().find(|pid| puzzle.pieces[pid.0 as usize].boundary.contains(w));
            puzzle.pieces[id.0 as usize].parent = parent;
        }
        puzzle.levels.push(level);
    }
    Ok(puzzle)
}

/// Assemble the depth-0 faces of the arrangement cut by the cycle rays.
fn base_partition(
    puzzle: &mut Puzzle,
    rays: &[ExternalRay],
    g0: f64,
) -> Result<Vec<PieceId>, PuzzleError> {
    let c = puzzle.c;
    // Group rays by landing point.
    let mut vertices: Vec<(Complex64, Vec<usize>)> = Vec::new();
    for (i, ray) in rays.iter().enumerate() {
        let l = ray.landing.unwrap();
        match vertices.iter_mut().find(|(p, _)| (*p - l).norm() <= 10.0 * LANDING_TOL) {
            Some((_, list)) => list.push(i),
            None => vertices.push((l, vec![i])),
        }
    }
    for (_, list) in &mut vertices {
        list.sort_by(|a, b| rays[*a].theta.cmp(&rays[*b].theta));
    }

    // Circle nodes sorted by angle.
    let n = rays.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|a, b| rays[*a].theta.cmp(&rays[*b].theta));
    let mut slot_of = vec![0usize; n];
    for (s, &k) in order.iter().enumerate() {
        slot_of[k] = s;
    }

    // Directed edges: 0..n rays inward (circle -> vertex), n..2n rays
    // outward, 2n..3n arcs ccw (from angle k to the next angle), 3n..4n
    // the reversed arcs.
    let rev = |e: usize| -> usize {
        if e < n {
            e + n
        } else if e < 2 * n {
            e - n
        } else if e < 3 * n {
            e + n
        } else {
            e - n
        }
    };

    // With interiors on the left, the next edge after arriving at a node
    // is the predecessor of the reversed edge in the node's
    // counterclockwise rotation of outgoing edges.
    let mut next_edge = vec![usize::MAX; 4 * n];
    let set_rotation = |rot: &[usize], next_edge: &mut [usize]| {
        for (j, &out) in rot.iter().enumerate() {
            let incoming = rev(out);
            let prev = rot[(j + rot.len() - 1) % rot.len()];
            next_edge[incoming] = prev;
        }
    };
    for (s, &k) in order.iter().enumerate() {
        let arc_fwd = 2 * n + k;
        let prev_k = order[(s + n - 1) % n];
        let arc_back = 3 * n + prev_k;
        // CCW rotation of outgoing edges at a circle node: tangent toward
        // the next angle, the ray inward, tangent toward the previous.
        set_rotation(&[arc_fwd, k, arc_back], &mut next_edge);
    }
    for (_, list) in &vertices {
        let rot: Vec<usize> = list.iter().map(|&k| n + k).collect();
        set_rotation(&rot, &mut next_edge);
    }

    // Extract faces.
    let mut seen = vec![false; 4 * n];
    let mut faces: Vec<Vec<usize>> = Vec::new();
    for start in 0..4 * n {
        if seen[start] {
            continue;
        }
        let mut face = Vec::new();
        let mut e = start;
        loop {
            if seen[e] {
                return Err(PuzzleError::FaceWalk("edge revisited".into()));
            }
            seen[e] = true;
            face.push(e);
            e = next_edge[e];
            if e == usize::MAX {
                return Err(PuzzleError::FaceWalk("missing rotation".into()));
            }
            if e == start {
                break;
            }
        }
        faces.push(face);
    }

    // Bounded faces traverse their arcs counterclockwise; the outer face
    // traverses every arc clockwise.
    let mut ids = Vec::new();
    for face in faces {
        let arcs_ccw = face.iter().filter(|&&e| (2 * n..3 * n).contains(&e)).count();
        let arcs_cw = face.iter().filter(|&&e| e >= 3 * n).count();
        if arcs_ccw == 0 && arcs_cw > 0 {
            continue; // outer face
        }
        if arcs_cw > 0 {
            return Err(PuzzleError::FaceWalk("mixed arc orientation in face".into()));
        }
        let mut edges = Vec::new();
        for &e in &face {
            if e < n {
                let pts: Vec<Complex64> = rays[e]
                    .points
                    .iter()
                    .filter(|p| p.g <= g0 * (1.0 + 1e-12))
                    .map(|p| p.z)
                    .chain(std::iter::once(rays[e].landing.unwrap()))
                    .collect();
                edges.push(BoundaryEdge {
                    kind: EdgeKind::Ray { angle: rays[e].theta, inward: true },
                    points: pts,
                });
            } else if e < 2 * n {
                let k = e - n;
                let mut pts: Vec<Complex64> = rays[k]
                    .points
                    .iter()
                    .filter(|p| p.g <= g0 * (1.0 + 1e-12))
                    .map(|p| p.z)
                    .chain(std::iter::once(rays[k].landing.unwrap()))
                    .collect();
                pts.reverse();
                edges.push(BoundaryEdge {
                    kind: EdgeKind::Ray { angle: rays[k].theta, inward: false },
                    points: pts,
                });
            } else {
                let (k, ccw) = if e < 3 * n { (e - 2 * n, true) } else { (e - 3 * n, false) };
                let s = slot_of[k];
                let from = rays[k].theta.to_f64();
                let mut to = rays[order[(s + 1) % n]].theta.to_f64();
                if to <= from {
                    to += 1.0;
                }
                let mut pts = sample_arc(c, from, to, g0)?;
                if !ccw {
                    pts.reverse();
                }
                let (a, b) = if ccw { (from, to) } else { (to, from) };
                edges.push(BoundaryEdge { kind: EdgeKind::Arc { from: a, to: b }, points: pts });
            }
        }
        let id = finish_piece(puzzle, 0, g0, edges, None)?;
        ids.push(id);
    }
    if ids.is_empty() {
        return Err(PuzzleError::FaceWalk("no bounded faces".into()));
    }
    Ok(ids)
}

fn sample_arc(c: Complex64, from: f64, to: f64, g: f64) -> Result<Vec<Complex64>, PuzzleError> {
    let span = to - from;
    let count = ((span * ARC_SAMPLES_PER_TURN).ceil() as usize).max(8);
    let mut pts = Vec::with_capacity(count + 1);
    for k in 0..=count {
        let t = from + span * k as f64 / count as f64;
        pts.push(ray_point_f(c, t, g)?);
    }
    Ok(pts)
}

/// Register a piece: flatten the boundary, compute the witness and flags.
fn finish_piece(
    puzzle: &mut Puzzle,
    depth: u32,
    level: f64,
    edges: Vec<BoundaryEdge>,
    image: Option<PieceId>,
) -> Result<PieceId, PuzzleError> {
    let mut flat = Vec::new();
    for e in &edges {
        let take = e.points.len().saturating_sub(1).max(1);
        flat.extend_from_slice(&e.points[..take]);
    }
    let boundary = ClosedPolyline::new(flat);
    let witness = boundary
        .interior_point()
        .ok_or_else(|| PuzzleError::FaceWalk("piece with empty interior".into()))?;
    let mut vertices: Vec<Complex64> = Vec::new();
    let mut ray_angles = Vec::new();
    for e in &edges {
        if let EdgeKind::Ray { angle, inward } = e.kind {
            if inward {
                let v = *e.points.last().unwrap();
                if !vertices.iter().any(|u| (*u - v).norm() < 1e-9) {
                    vertices.push(v);
                }
            }
            if !ray_angles.contains(&angle) {
                ray_angles.push(angle);
            }
        }
    }
    ray_angles.sort();
    let is_critical = boundary.contains(Complex64::new(0.0, 0.0));
    let bbox = boundary.bbox();
    let id = PieceId(puzzle.pieces.len() as u32);
    puzzle.pieces.push(Piece {
        id,
        depth,
        level,
        edges,
        boundary,
        vertices,
        ray_angles,
        is_critical,
        witness,
        bbox,
        parent: None,
        image,
    });
    Ok(id)
}

/// Lift a piece through `P_c`: the preimage is one symmetric piece when
/// the parent contains the critical value, and two disjoint pieces
/// otherwise. Memoized per parent.
pub fn lift_piece(puzzle: &mut Puzzle, parent: PieceId) -> Result<Vec<PieceId>, PuzzleError> {
    if let Some(children) = puzzle.lifts.get(&parent) {
        return Ok(children.clone());
    }
    let c = puzzle.c;
    let (parent_edges, parent_depth, parent_level, parent_diam, parent_contains_cv, cv_dist) = {
        let p = &puzzle.pieces[parent.0 as usize];
        (
            p.edges.clone(),
            p.depth,
            p.level,
            p.boundary.diameter(),
            p.boundary.contains(c),
            p.boundary.distance(c),
        )
    };
    if cv_dist < 1e-11 {
        return Err(PuzzleError::BoundaryThroughCriticalValue);
    }
    let critical = parent_contains_cv;
    let loops = if critical { 2 } else { 1 };
    let components = if critical { 1 } else { 2 };

    let mut children = Vec::new();
    for component in 0..components {
        let first_parent_pt = parent_edges[0].points[0];
        let w0 = (first_parent_pt - c).sqrt();
        let seed = if component == 0 { w0 } else { -w0 };

        let mut lifted_edges: Vec<BoundaryEdge> = Vec::new();
        let mut run = seed;
        let mut first = true;
        for _ in 0..loops {
            for edge in &parent_edges {
                let mut pts = Vec::with_capacity(edge.points.len());
                for &z in edge.points.iter() {
                    let d = z - c;
                    if d.norm() < 1e-14 {
                        return Err(PuzzleError::BoundaryThroughCriticalValue);
                    }
                    let w = d.sqrt();
                    let w = if first {
                        first = false;
                        seed
                    } else if (w - run).norm() <= (-w - run).norm() {
                        w
                    } else {
                        -w
                    };
                    run = w;
                    pts.push(w);
                }
                let kind = lift_edge_kind(puzzle, &edge.kind, &pts)?;
                lifted_edges.push(BoundaryEdge { kind, points: pts });
            }
        }
        // Closure check.
        let start = lifted_edges[0].points[0];
        let end = *lifted_edges.last().unwrap().points.last().unwrap();
        if (end - start).norm() > 1e-5 * parent_diam.max(1e-9) {
            return Err(PuzzleError::FaceWalk(format!(
                "lifted boundary failed to close (gap {:.3e})",
                (end - start).norm()
            )));
        }
        let id =
            finish_piece(puzzle, parent_depth + 1, parent_level / 2.0, lifted_edges, Some(parent))?;
        children.push(id);
    }
    puzzle.lifts.insert(parent, children.clone());
    Ok(children)
}

/// Symbolic kind of a lifted edge. Ray angles halve into one of two
/// branches, decided by the Böttcher argument at the lifted outer
/// endpoint; lifted arc endpoints are measured the same way.
fn lift_edge_kind(
    puzzle: &Puzzle,
    kind: &EdgeKind,
    lifted: &[Complex64],
) -> Result<EdgeKind, PuzzleError> {
    match kind {
        EdgeKind::Ray { angle, inward } => {
            let outer = if *inward { lifted[0] } else { *lifted.last().unwrap() };
            let (h1, h2) = angle.halves();
            let measured = external_angle_unchecked(puzzle.c, outer)?;
            let d1 = wrap_dist(measured, h1.to_f64());
            let d2 = wrap_dist(measured, h2.to_f64());
            let angle = if d1 <= d2 { h1 } else { h2 };
            Ok(EdgeKind::Ray { angle, inward: *inward })
        }
        EdgeKind::Arc { .. } => {
            let from = external_angle_unchecked(puzzle.c, lifted[0])?;
            let to = external_angle_unchecked(puzzle.c, *lifted.last().unwrap())?;
            Ok(EdgeKind::Arc { from, to })
        }
    }
}

fn wrap_dist(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(1.0);
    d.min(1.0 - d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::step;
    use crate::cx;

    #[test]
    fn basilica_cycle() {
        let cycle = alpha_ray_cycle(cx(-1.0, 0.0), 6).unwrap();
        assert_eq!(cycle.q, 2);
        let mut angles = cycle.angles.clone();
        angles.sort();
        assert_eq!(angles, vec![Angle::new(1, 3), Angle::new(2, 3)]);
        for r in &cycle.landing_residuals {
            assert!(*r <= LANDING_TOL);
        }
    }

    #[test]
    fn rabbit_cycle() {
        let cycle = alpha_ray_cycle(cx(-0.122561166876654, 0.744861766619744), 6).unwrap();
        assert_eq!(cycle.q, 3);
        let mut angles = cycle.angles.clone();
        angles.sort();
        assert_eq!(angles, vec![Angle::new(1, 7), Angle::new(2, 7), Angle::new(4, 7)]);
    }

    #[test]
    fn no_cycle_for_attracting_alpha() {
        assert!(matches!(alpha_ray_cycle(cx(0.0, 0.0), 4), Err(PuzzleError::AlphaNotRepelling)));
    }

    #[test]
    fn basilica_base_partition() {
        let puzzle = build_puzzle(cx(-1.0, 0.0), 0, 4.0).unwrap();
        assert_eq!(puzzle.level(0).len(), 2);
        let c0 = puzzle.critical_piece(0).unwrap();
        assert!(puzzle.piece(c0).boundary.contains(cx(0.0, 0.0)));
        match puzzle.piece_containing(cx(-1.0, 0.0), 0) {
            Membership::Piece(id) => assert_ne!(id, c0),
            m => panic!("unexpected membership {m:?}"),
        }
    }

    #[test]
    fn basilica_nesting_depth_three() {
        let puzzle = build_puzzle(cx(-1.0, 0.0), 3, 4.0).unwrap();
        let mut prev: Option<PieceId> = None;
        for depth in 0..=3 {
            let cid = puzzle.critical_piece(depth).unwrap();
            if let Some(p) = prev {
                assert_eq!(puzzle.piece(cid).parent, Some(p));
            }
            prev = Some(cid);
        }
    }

    #[test]
    fn chebyshev_piece_images() {
        let puzzle = build_puzzle(cx(-2.0, 0.0), 2, 4.0).unwrap();
        for &id in puzzle.level(2) {
            let piece = puzzle.piece(id);
            let image = piece.image.expect("depth-2 piece has an image");
            assert_eq!(puzzle.piece(image).depth, 1);
            let w = step(puzzle.c, piece.witness);
            match puzzle.piece_containing(w, 1) {
                Membership::Piece(got) => assert_eq!(got, image),
                m => panic!("witness image not interior: {m:?}"),
            }
        }
    }

    #[test]
    fn symmetric_partition() {
        let puzzle = build_puzzle(cx(-1.0, 0.0), 2, 4.0).unwrap();
        for depth in 0..=2 {
            for &id in puzzle.level(depth) {
                let w = puzzle.piece(id).witness;
                match puzzle.piece_containing(-w, depth) {
                    Membership::Piece(_) => {}
                    m => panic!("mirror witness not interior: {m:?}"),
                }
            }
        }
    }

    #[test]
    fn vertex_and_germ_counts() {
        let puzzle = build_puzzle(cx(-1.0, 0.0), 4, 4.0).unwrap();
        for depth in 0..=4u32 {
            let mut verts: Vec<Complex64> = Vec::new();
            for &id in puzzle.level(depth) {
                for v in &puzzle.piece(id).vertices {
                    if !verts.iter().any(|u| (*u - *v).norm() < 1e-5) {
                        verts.push(*v);
                    }
                }
            }
            // Distinct landing vertices at depth n: 2^n; each carries q
            // germs, so the level is cut by q 2^n distinct ray angles.
            assert_eq!(verts.len(), 1 << depth, "vertices at depth {depth}");
            let mut angles: Vec<Angle> = Vec::new();
            for &id in puzzle.level(depth) {
                for a in &puzzle.piece(id).ray_angles {
                    if !angles.contains(a) {
                        angles.push(*a);
                    }
                }
            }
            assert_eq!(angles.len(), 2 << depth, "ray germs at depth {depth}");
        }
    }

    #[test]
    fn alpha_is_on_every_critical_boundary() {
        let puzzle = build_puzzle(cx(-1.0, 0.0), 3, 4.0).unwrap();
        let alpha = QuadraticParameter::new(cx(-1.0, 0.0)).unwrap().alpha;
        for depth in 0..=3 {
            assert_eq!(puzzle.piece_containing(alpha, depth), Membership::OnBoundary);
        }
    }

    #[test]
    fn lazy_end_extension() {
        let mut puzzle = build_puzzle(cx(-1.0, 0.0), 2, 4.0).unwrap();
        let deep = puzzle.critical_end_piece(6).unwrap();
        let piece = puzzle.piece(deep).clone();
        assert_eq!(piece.depth, 6);
        assert!(piece.boundary.contains(cx(0.0, 0.0)));
        // nested inside the materialized critical piece
        let c2 = puzzle.critical_piece(2).unwrap();
        let c2 = puzzle.piece(c2).boundary.clone();
        assert!(c2.contains(piece.witness));
    }
}
