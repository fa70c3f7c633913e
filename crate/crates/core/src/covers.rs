//! Degree-p admissible covers of semi-stable curves over `F_q`: the data
//! model (dual graphs, vertex/edge maps, per-component torsor charts, marked
//! places), the conductor/residue table, and the validator for the cover
//! axioms. Mathematical violations are collected into reports; only
//! malformed containers raise errors.

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;

use crate::error::{StructureError, TorsorError, TransformError};
use crate::field::FieldSpec;
use crate::graph::{DualGraph, EdgeId, VertexId};
use crate::rational::{Place, RationalFunction};
use crate::torsors::{self, ConductorResidue, GroupTag, TorsorSpec};

/// Per-component datum: either a genuine torsor chart, or the tag for a
/// component whose preimage is disconnected (a free orbit), which carries no
/// chart.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum VertexData {
    Split,
    Torsor {
        group: GroupTag,
        u: RationalFunction,
    },
}

impl VertexData {
    pub fn group(&self) -> Option<GroupTag> {
        match self {
            VertexData::Split => None,
            VertexData::Torsor { group, .. } => Some(group.normalized()),
        }
    }

    pub fn is_radiciel(&self) -> bool {
        self.group().is_some_and(|g| g.is_radiciel())
    }
}

/// Which end of a stored edge.
#[derive(Copy, Clone, PartialEq, Eq, Debug)]
pub enum Side {
    Origin,
    Terminal,
}

impl Side {
    pub fn other(self) -> Side {
        match self {
            Side::Origin => Side::Terminal,
            Side::Terminal => Side::Origin,
        }
    }
}

/// A degree-p cover of semi-stable curves with per-component torsor data and
/// marked places on the base charts.
#[derive(Clone, PartialEq, Debug)]
pub struct CoverGraph {
    pub field: FieldSpec,
    pub y: DualGraph,
    pub x: DualGraph,
    /// Component map Y -> X.
    pub vmap: Vec<VertexId>,
    /// Edge map Y -> X; the flag records whether the stored orientations are
    /// opposite.
    pub emap: Vec<(EdgeId, bool)>,
    pub vertex_data: Vec<VertexData>,
    /// Per X-edge: the marked place of the double point on the origin-side
    /// chart and on the terminal-side chart.
    pub edge_places: Vec<(Place, Place)>,
    /// Smooth points of Y where the map is not a torsor, with the place of
    /// the image on the component's base chart.
    pub exceptional: Vec<(VertexId, Place)>,
}

impl CoverGraph {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        field: FieldSpec,
        y: DualGraph,
        x: DualGraph,
        vmap: Vec<VertexId>,
        emap: Vec<(EdgeId, bool)>,
        vertex_data: Vec<VertexData>,
        edge_places: Vec<(Place, Place)>,
        exceptional: Vec<(VertexId, Place)>,
    ) -> Result<Self, StructureError> {
        if vmap.len() != y.vertex_count() {
            return Err(StructureError("vmap length mismatch".into()));
        }
        if emap.len() != y.edge_count() {
            return Err(StructureError("emap length mismatch".into()));
        }
        if vertex_data.len() != y.vertex_count() {
            return Err(StructureError("vertex_data length mismatch".into()));
        }
        if edge_places.len() != x.edge_count() {
            return Err(StructureError("edge_places length mismatch".into()));
        }
        for &v in &vmap {
            if v.0 >= x.vertex_count() {
                return Err(StructureError("vmap target out of range".into()));
            }
        }
        for &(e, _) in &emap {
            if e.0 >= x.edge_count() {
                return Err(StructureError("emap target out of range".into()));
            }
        }
        for &(v, _) in &exceptional {
            if v.0 >= y.vertex_count() {
                return Err(StructureError("exceptional vertex out of range".into()));
            }
        }
        // edge maps must commute with incidence
        for (i, &(xe, flip)) in emap.iter().enumerate() {
            let (a, b) = y.edges[i];
            let (xa, xb) = x.edges[xe.0];
            let (want_a, want_b) = if flip { (xb, xa) } else { (xa, xb) };
            if vmap[a.0] != want_a || vmap[b.0] != want_b {
                return Err(StructureError(format!(
                    "edge {i} does not commute with the vertex map"
                )));
            }
        }
        Ok(CoverGraph {
            field,
            y,
            x,
            vmap,
            emap,
            vertex_data,
            edge_places,
            exceptional,
        })
    }

    pub fn p(&self) -> u32 {
        self.field.p()
    }

    pub fn vertex_fibers(&self) -> Vec<Vec<VertexId>> {
        let mut fibers = vec![vec![]; self.x.vertex_count()];
        for (i, &xv) in self.vmap.iter().enumerate() {
            fibers[xv.0].push(VertexId(i));
        }
        fibers
    }

    pub fn edge_fibers(&self) -> Vec<Vec<EdgeId>> {
        let mut fibers = vec![vec![]; self.x.edge_count()];
        for (i, &(xe, _)) in self.emap.iter().enumerate() {
            fibers[xe.0].push(EdgeId(i));
        }
        fibers
    }

    pub fn is_fixed_vertex(&self, v: VertexId) -> bool {
        self.vmap.iter().filter(|&&xv| xv == self.vmap[v.0]).count() == 1
    }

    /// Ramified = the whole fiber of the base node is one double point.
    pub fn is_ramified_edge(&self, e: EdgeId) -> bool {
        let xe = self.emap[e.0].0;
        self.emap.iter().filter(|&&(x, _)| x == xe).count() == 1
    }

    pub fn edge_endpoint(&self, e: EdgeId, side: Side) -> VertexId {
        let (a, b) = self.y.edges[e.0];
        match side {
            Side::Origin => a,
            Side::Terminal => b,
        }
    }

    /// The marked place of a double point on the chart seen from one side of
    /// a Y-edge.
    pub fn place_for(&self, e: EdgeId, side: Side) -> Place {
        let (xe, flip) = self.emap[e.0];
        let (po, pt) = self.edge_places[xe.0];
        match (side, flip) {
            (Side::Origin, false) | (Side::Terminal, true) => po,
            (Side::Origin, true) | (Side::Terminal, false) => pt,
        }
    }

    pub fn torsor_spec(&self, v: VertexId) -> Option<TorsorSpec> {
        match &self.vertex_data[v.0] {
            VertexData::Split => None,
            VertexData::Torsor { group, u } => Some(TorsorSpec::global(*group, u.clone())),
        }
    }

    /// All marked places on the chart of one base component: node places of
    /// incident base edges plus images of exceptional points.
    pub fn marked_places_on_chart(&self, xv: VertexId) -> Vec<Place> {
        let mut out = vec![];
        for (i, &(a, b)) in self.x.edges.iter().enumerate() {
            let (po, pt) = self.edge_places[i];
            if a == xv {
                out.push(po);
            }
            if b == xv {
                out.push(pt);
            }
        }
        for &(yv, pl) in &self.exceptional {
            if self.vmap[yv.0] == xv {
                out.push(pl);
            }
        }
        out
    }
}

/// One violated axiom with its location.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Violation {
    pub rule: String,
    pub location: String,
    pub detail: String,
}

#[derive(Clone, PartialEq, Eq, Debug, Default, Serialize, Deserialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn push(&mut self, rule: &str, location: String, detail: String) {
        self.violations.push(Violation {
            rule: rule.to_string(),
            location,
            detail,
        });
    }

    pub fn merge(&mut self, other: ValidationReport) {
        self.violations.extend(other.violations);
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return write!(f, "valid");
        }
        for v in &self.violations {
            writeln!(f, "[{}] {}: {}", v.rule, v.location, v.detail)?;
        }
        Ok(())
    }
}

/// Conductors and residues at every ramified double point (both
/// orientations) and every exceptional point.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ConductorTable {
    /// Ramified Y-edges: the value computed from the origin chart and from
    /// the terminal chart.
    pub edges: BTreeMap<EdgeId, (ConductorResidue, ConductorResidue)>,
    /// Parallel to the cover's exceptional list.
    pub exceptional: Vec<ConductorResidue>,
}

/// Conductor/residue data of a cover. Requires the structural pass to hold
/// (ramified edges end on torsor components).
pub fn conductor_table(c: &CoverGraph) -> Result<ConductorTable, TorsorError> {
    let mut edges = BTreeMap::new();
    for e in 0..c.y.edge_count() {
        let e = EdgeId(e);
        if !c.is_ramified_edge(e) {
            continue;
        }
        let mut pair = vec![];
        for side in [Side::Origin, Side::Terminal] {
            let v = c.edge_endpoint(e, side);
            let spec = c.torsor_spec(v).ok_or(TorsorError::DegenerateDatum)?;
            let place = c.place_for(e, side);
            pair.push(torsors::conductor_residue(&c.field, &spec, place)?);
        }
        edges.insert(e, (pair[0], pair[1]));
    }
    let mut exceptional = vec![];
    for &(v, place) in &c.exceptional {
        let spec = c.torsor_spec(v).ok_or(TorsorError::DegenerateDatum)?;
        exceptional.push(torsors::conductor_residue(&c.field, &spec, place)?);
    }
    Ok(ConductorTable { edges, exceptional })
}

/// Z/p labels establishing a cyclic relabeling of the fibers; label 0 is the
/// canonical representative, fixed items always carry label 0.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct OrbitStructure {
    pub vertex_label: Vec<usize>,
    pub edge_label: Vec<usize>,
}

/// Find Z/p labels on the fibers so that relabeling by +1 is a graph
/// automorphism over the identity of X. This is the p-cyclic structure a
/// genuine quotient map must admit.
pub fn orbit_structure(c: &CoverGraph) -> Result<OrbitStructure, TransformError> {
    let p = c.p() as usize;
    let ny = c.y.vertex_count();
    let ne = c.y.edge_count();
    // union-find over items: vertices 0..ny, edges ny..ny+ne
    let mut parent: Vec<usize> = (0..ny + ne).collect();
    fn find(parent: &mut Vec<usize>, i: usize) -> usize {
        if parent[i] != i {
            let r = find(parent, parent[i]);
            parent[i] = r;
        }
        parent[i]
    }
    let vertex_fibers = c.vertex_fibers();
    let edge_fibers = c.edge_fibers();
    let fixed_v: Vec<bool> = (0..ny)
        .map(|v| vertex_fibers[c.vmap[v].0].len() == 1)
        .collect();
    let fixed_e: Vec<bool> = (0..ne)
        .map(|e| edge_fibers[c.emap[e].0 .0].len() == 1)
        .collect();
    for (e, &fixed) in fixed_e.iter().enumerate() {
        if fixed {
            continue;
        }
        let (a, b) = c.y.edges[e];
        for v in [a, b] {
            if !fixed_v[v.0] {
                let ra = find(&mut parent, ny + e);
                let rb = find(&mut parent, v.0);
                parent[ra] = rb;
            }
        }
    }
    // greedy label assignment per fiber, classes shared across fibers
    let mut class_label: BTreeMap<usize, usize> = BTreeMap::new();
    let mut assign = |members: Vec<usize>, parent: &mut Vec<usize>| -> Result<(), TransformError> {
        if members.len() == 1 {
            return Ok(());
        }
        if members.len() != p {
            return Err(TransformError::NoCyclicStructure(format!(
                "fiber of size {} with p = {p}",
                members.len()
            )));
        }
        let mut used = vec![false; p];
        let mut unknown = vec![];
        for &it in &members {
            let cls = find(parent, it);
            match class_label.get(&cls) {
                Some(&l) => {
                    if used[l] {
                        return Err(TransformError::NoCyclicStructure(
                            "two fiber members share a label".into(),
                        ));
                    }
                    used[l] = true;
                }
                None => unknown.push(cls),
            }
        }
        let mut next = 0;
        for cls in unknown {
            while used[next] {
                next += 1;
            }
            // a class may appear twice in one fiber only through a conflict
            if class_label.insert(cls, next).is_some() {
                return Err(TransformError::NoCyclicStructure(
                    "two fiber members share a class".into(),
                ));
            }
            used[next] = true;
        }
        Ok(())
    };
    for fiber in &vertex_fibers {
        assign(fiber.iter().map(|v| v.0).collect(), &mut parent)?;
    }
    for fiber in &edge_fibers {
        assign(fiber.iter().map(|e| ny + e.0).collect(), &mut parent)?;
    }
    let mut vertex_label = vec![0usize; ny];
    let mut edge_label = vec![0usize; ne];
    for v in 0..ny {
        if !fixed_v[v] {
            let cls = find(&mut parent, v);
            vertex_label[v] = *class_label.get(&cls).unwrap_or(&0);
        }
    }
    for e in 0..ne {
        if !fixed_e[e] {
            let cls = find(&mut parent, ny + e);
            edge_label[e] = *class_label.get(&cls).unwrap_or(&0);
        }
    }
    Ok(OrbitStructure {
        vertex_label,
        edge_label,
    })
}

/// Validate the cover axioms: structural well-formedness, nontriviality of
/// every chart, and the compatibility of conductors and residues across
/// every ramified double point.
pub fn validate_cover(c: &CoverGraph) -> ValidationReport {
    let mut report = ValidationReport::default();
    let p = c.p() as usize;

    if !c.y.is_connected() {
        report.push("structure", "Y".into(), "graph is disconnected".into());
    }
    if !c.x.is_connected() {
        report.push("structure", "X".into(), "graph is disconnected".into());
    }

    // (a) structural: fibers have size 1 or p, charts sit on fixed
    // components, split orbits carry no chart, the cyclic relabeling exists
    let vertex_fibers = c.vertex_fibers();
    for (xv, fiber) in vertex_fibers.iter().enumerate() {
        if fiber.len() != 1 && fiber.len() != p {
            report.push(
                "structure",
                format!("X-vertex {xv}"),
                format!("vertex fiber has size {}", fiber.len()),
            );
            continue;
        }
        if fiber.len() == 1 {
            if matches!(c.vertex_data[fiber[0].0], VertexData::Split) {
                report.push(
                    "structure",
                    format!("Y-vertex {}", fiber[0].0),
                    "fixed component tagged as split orbit".into(),
                );
            }
        } else {
            for &v in fiber {
                if !matches!(c.vertex_data[v.0], VertexData::Split) {
                    report.push(
                        "structure",
                        format!("Y-vertex {}", v.0),
                        "free-orbit component must be tagged split".into(),
                    );
                }
            }
        }
    }
    let edge_fibers = c.edge_fibers();
    for (xe, fiber) in edge_fibers.iter().enumerate() {
        if fiber.len() != 1 && fiber.len() != p {
            report.push(
                "structure",
                format!("X-edge {xe}"),
                format!("edge fiber has size {}", fiber.len()),
            );
        }
    }
    if let Err(e) = orbit_structure(c) {
        report.push("structure", "cover".into(), e.to_string());
    }

    // radiciel components are purely inseparable over their image: every
    // incident edge is ramified, and the component itself is fixed
    for v in c.y.vertices() {
        if c.vertex_data[v.0].is_radiciel() {
            if !c.is_fixed_vertex(v) {
                report.push(
                    "structure",
                    format!("Y-vertex {}", v.0),
                    "radiciel component is not fixed".into(),
                );
            }
            for e in c.y.incident_edges(v) {
                if !c.is_ramified_edge(e) {
                    report.push(
                        "structure",
                        format!("Y-edge {}", e.0),
                        "free edge at a radiciel component".into(),
                    );
                }
            }
        }
    }

    // exceptional points must sit on torsor components
    for (i, &(v, _)) in c.exceptional.iter().enumerate() {
        if matches!(c.vertex_data[v.0], VertexData::Split) {
            report.push(
                "structure",
                format!("exceptional {i}"),
                "marked point on a split-orbit component".into(),
            );
        }
    }

    // marked places pairwise distinct on every chart
    for xv in c.x.vertices() {
        let places = c.marked_places_on_chart(xv);
        let mut seen = BTreeMap::new();
        for pl in places {
            *seen.entry(pl.order_index(&c.field)).or_insert(0usize) += 1;
        }
        for (idx, count) in seen {
            if count > 1 {
                report.push(
                    "structure",
                    format!("X-vertex {}", xv.0),
                    format!("marked place with order index {idx} used {count} times"),
                );
            }
        }
    }

    // (b) every chart defines a nontrivial torsor
    for v in c.y.vertices() {
        if let Some(spec) = c.torsor_spec(v) {
            match torsors::is_nontrivial(&c.field, &spec) {
                Ok(true) => {}
                Ok(false) => report.push(
                    "torsor",
                    format!("Y-vertex {}", v.0),
                    "chart datum defines the trivial torsor".into(),
                ),
                Err(e) => report.push(
                    "torsor",
                    format!("Y-vertex {}", v.0),
                    format!("chart datum rejected: {e}"),
                ),
            }
        }
    }

    // (c) ramified edges: one radiciel endpoint and matched conductors
    for e in 0..c.y.edge_count() {
        let e = EdgeId(e);
        if !c.is_ramified_edge(e) {
            continue;
        }
        let (a, b) = c.y.edges[e.0];
        let radiciel = c.vertex_data[a.0].is_radiciel() || c.vertex_data[b.0].is_radiciel();
        if !radiciel {
            report.push(
                "compatibility",
                format!("Y-edge {}", e.0),
                "ramified edge with no radiciel endpoint".into(),
            );
        }
        let mut values = vec![];
        for side in [Side::Origin, Side::Terminal] {
            let v = c.edge_endpoint(e, side);
            let Some(spec) = c.torsor_spec(v) else {
                report.push(
                    "compatibility",
                    format!("Y-edge {}", e.0),
                    "ramified edge ends on a split-orbit component".into(),
                );
                continue;
            };
            match torsors::conductor_residue(&c.field, &spec, c.place_for(e, side)) {
                Ok(cr) => values.push(cr),
                Err(err) => report.push(
                    "compatibility",
                    format!("Y-edge {}", e.0),
                    format!("conductor computation failed: {err}"),
                ),
            }
        }
        if let [ca, cb] = values[..] {
            if ca.m != -cb.m {
                report.push(
                    "compatibility",
                    format!("Y-edge {}", e.0),
                    format!("conductors {} and {} do not oppose", ca.m, cb.m),
                );
            }
            let p = c.p();
            if (ca.h + cb.h) % p != 0 {
                report.push(
                    "compatibility",
                    format!("Y-edge {}", e.0),
                    format!("residues {} and {} do not oppose", ca.h, cb.h),
                );
            }
        }
    }

    report
}

/// The two hypotheses of the lifting theorem: no multiplicative chart, and
/// every exceptional point is an additive-chart point of order `1 - pn`.
pub fn check_h1_h2(c: &CoverGraph) -> ValidationReport {
    let mut report = ValidationReport::default();
    let p = c.p() as i64;
    for v in c.y.vertices() {
        if c.vertex_data[v.0].group() == Some(GroupTag::MuP) {
            report.push(
                "H1",
                format!("Y-vertex {}", v.0),
                "multiplicative chart present".into(),
            );
        }
    }
    for (i, &(v, place)) in c.exceptional.iter().enumerate() {
        match &c.vertex_data[v.0] {
            VertexData::Torsor { group, u } if group.normalized() == GroupTag::AlphaP => {
                let ord = u.ord_at(&c.field, place).unwrap_or(0);
                let fits = ord <= 1 && (1 - ord) % p == 0;
                if !fits {
                    report.push(
                        "H2",
                        format!("exceptional {i}"),
                        format!("order {ord} is not of the form 1 - pn"),
                    );
                }
            }
            VertexData::Torsor { .. } => {
                report.push(
                    "H2",
                    format!("exceptional {i}"),
                    "marked point on a chart that is not additive".into(),
                );
            }
            VertexData::Split => {} // reported structurally by validate_cover
        }
    }
    report
}
