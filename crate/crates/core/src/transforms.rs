//! The constructive rewrites that bring a cover into liftable shape:
//! retagging multiplicative charts as additive ones with matched conductors,
//! absorbing marked smooth points into new projective-line tails, and the
//! tree recursion that synthesizes thickness and different data for an
//! adapted Hurwitz graph.

use num_integer::Integer;
use num_rational::Ratio;

use crate::covers::{check_h1_h2, conductor_table, validate_cover, CoverGraph, Side, VertexData};
use crate::error::{TorsorError, TransformError};
use crate::field::FieldSpec;
use crate::graph::{DualGraph, EdgeId, VertexId};
use crate::hurwitz::{skeleton_from_cover, HurwitzGraph};
use crate::poly::Poly;
use crate::rational::{Place, RationalFunction};
use crate::torsors::{self, GroupTag};

/// A decomposition `n = Σ (1 - p·n_i)` with `q` parts, all `n_i ≥ 0`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Decomposition {
    pub q: i64,
    pub parts: Vec<i64>,
}

/// Decompose n with the least admissible number of parts: `q = n` with all
/// parts zero when n > 0, otherwise the least positive `q ≡ n (mod p)` with
/// the deficit front-loaded into the first part.
pub fn decompose_n(n: i64, p: u32) -> Decomposition {
    let p = p as i64;
    if n > 0 {
        return Decomposition {
            q: n,
            parts: vec![0; n as usize],
        };
    }
    let q = (n - 1).rem_euclid(p) + 1;
    let mut parts = vec![0i64; q as usize];
    parts[0] = (q - n) / p;
    debug_assert_eq!(parts.iter().map(|&ni| 1 - p * ni).sum::<i64>(), n);
    Decomposition { q, parts }
}

fn require_valid(c: &CoverGraph) -> Result<(), TransformError> {
    let report = validate_cover(c);
    if !report.is_valid() {
        return Err(TransformError::InvalidCover(report.to_string()));
    }
    Ok(())
}

/// A rational function with divisor `P - Q` on the chart.
fn coordinate_with_divisor(field: &FieldSpec, p_place: Place, q_place: Place) -> RationalFunction {
    match (p_place, q_place) {
        (Place::Finite(a), Place::Finite(b)) => RationalFunction::new(
            field,
            Poly::linear_root(field, a),
            Poly::linear_root(field, b),
        )
        .expect("nonzero denominator"),
        (Place::Finite(a), Place::Infinity) => {
            RationalFunction::from_poly(field, Poly::linear_root(field, a))
        }
        (Place::Infinity, Place::Finite(b)) => {
            RationalFunction::new(field, Poly::one(field), Poly::linear_root(field, b))
                .expect("nonzero denominator")
        }
        (Place::Infinity, Place::Infinity) => RationalFunction::one(field),
    }
}

/// Replace every multiplicative chart by an additive one defining the same
/// cover data: conductors at already-ramified places are untouched, and at
/// conductor-zero double points the datum is twisted by a p-th power so the
/// additive conductors oppose across the node.
pub fn eliminate_mu_p(c: &CoverGraph) -> Result<CoverGraph, TransformError> {
    require_valid(c)?;
    if !c.x.is_tree() {
        return Err(TransformError::BaseNotTree);
    }
    let field = &c.field;
    let p = c.p() as i64;
    let has_mu = c
        .vertex_data
        .iter()
        .any(|d| d.group() == Some(GroupTag::MuP));
    if !has_mu {
        return Ok(c.clone());
    }

    // normalize every multiplicative chart so it is a unit at its nonzero-
    // conductor places
    let mut data: Vec<VertexData> = Vec::with_capacity(c.vertex_data.len());
    for (v, d) in c.vertex_data.iter().enumerate() {
        match d {
            VertexData::Torsor { group, u } if group.normalized() == GroupTag::MuP => {
                let marked = c.marked_places_on_chart(c.vmap[v]);
                let nu =
                    torsors::mu_p_normalize(field, u, &marked).map_err(TransformError::Torsor)?;
                data.push(VertexData::Torsor {
                    group: GroupTag::MuP,
                    u: nu,
                });
            }
            other => data.push(other.clone()),
        }
    }

    // breadth-first over Y from the least multiplicative vertex
    let root = c
        .vertex_data
        .iter()
        .position(|d| d.group() == Some(GroupTag::MuP))
        .expect("multiplicative vertex exists");
    let ny = c.y.vertex_count();
    let mut dist = vec![usize::MAX; ny];
    let mut order = vec![root];
    dist[root] = 0;
    let mut head = 0;
    while head < order.len() {
        let v = order[head];
        head += 1;
        for e in c.y.incident_edges(VertexId(v)) {
            let (a, b) = c.y.edges[e.0];
            let w = if a.0 == v { b.0 } else { a.0 };
            if dist[w] == usize::MAX {
                dist[w] = dist[v] + 1;
                order.push(w);
            }
        }
    }
    // vertices unreachable from the root keep their data (Y is connected for
    // valid covers, so this is only defensive)
    let mut done = vec![false; ny];
    done[root] = true;

    for &v in order.iter().skip(1) {
        let vid = VertexId(v);
        let is_mu = matches!(
            &data[v],
            VertexData::Torsor { group, .. } if group.normalized() == GroupTag::MuP
        );
        if is_mu {
            // locate the ramified edge back toward the processed region
            let mut back_edges = vec![];
            for e in c.y.incident_edges(vid) {
                let (a, b) = c.y.edges[e.0];
                let w = if a.0 == v { b.0 } else { a.0 };
                if done[w] && c.is_ramified_edge(e) {
                    back_edges.push((e, w));
                }
            }
            if back_edges.len() > 1 {
                return Err(TransformError::NoAdaptedGraph(
                    "two ramified edges toward the processed region over a tree base".into(),
                ));
            }
            if let Some(&(e, w)) = back_edges.first() {
                let (side_v, side_w) = edge_sides(c, e, v, w);
                let place_v = c.place_for(e, side_v);
                let place_w = c.place_for(e, side_w);
                let u_v = torsor_datum(&data[v]);
                let n_v = u_v.ord_at(field, place_v).unwrap_or(0);
                if n_v % p != 0 {
                    // conductor-zero node: twist so the additive conductors
                    // oppose; the target order is the negative of the
                    // processed side's order
                    let u_w = torsor_datum(&data[w]);
                    let n_w = u_w.ord_at(field, place_w).unwrap_or(0);
                    let target = -n_w;
                    if (target - n_v) % p != 0 {
                        return Err(TransformError::NoAdaptedGraph(format!(
                            "orders {n_v} and {n_w} are incompatible modulo p at edge {}",
                            e.0
                        )));
                    }
                    let r = (target - n_v) / p;
                    if r != 0 {
                        let marked = c.marked_places_on_chart(c.vmap[v]);
                        let q_place = select_twist_point(field, u_v, place_v, &marked)?;
                        let coord = coordinate_with_divisor(field, place_v, q_place);
                        let twist = coord
                            .pow(field, p * r)
                            .map_err(TorsorError::Arithmetic)
                            .map_err(TransformError::Torsor)?;
                        let new_u = u_v.mul(field, &twist);
                        data[v] = VertexData::Torsor {
                            group: GroupTag::MuP,
                            u: new_u,
                        };
                    }
                }
            }
        }
        done[v] = true;
    }

    // retag every multiplicative chart as additive
    for d in data.iter_mut() {
        if let VertexData::Torsor { group, .. } = d {
            if group.normalized() == GroupTag::MuP {
                *group = GroupTag::AlphaP;
            }
        }
    }

    let out = CoverGraph::new(
        field.clone(),
        c.y.clone(),
        c.x.clone(),
        c.vmap.clone(),
        c.emap.clone(),
        data,
        c.edge_places.clone(),
        c.exceptional.clone(),
    )
    .expect("same shape as the input");
    let report = validate_cover(&out);
    if !report.is_valid() {
        return Err(TransformError::InvalidCover(format!(
            "rewrite produced an invalid cover: {report}"
        )));
    }
    Ok(out)
}

fn torsor_datum(d: &VertexData) -> &RationalFunction {
    match d {
        VertexData::Torsor { u, .. } => u,
        VertexData::Split => unreachable!("split components carry no chart"),
    }
}

fn edge_sides(c: &CoverGraph, e: EdgeId, v: usize, w: usize) -> (Side, Side) {
    let (a, b) = c.y.edges[e.0];
    debug_assert!(a.0 == v || b.0 == v);
    debug_assert!(a.0 == w || b.0 == w);
    if a.0 == v {
        (Side::Origin, Side::Terminal)
    } else {
        let _ = b;
        (Side::Terminal, Side::Origin)
    }
}

/// The least rational place carrying a prime-to-p order of u, distinct from
/// the node place. Unmarked places are preferred; a marked place (another
/// conductor-zero node or a marked point, never a unit place) is a valid
/// fallback, since the compatibility across it is established when its own
/// edge is processed.
fn select_twist_point(
    field: &FieldSpec,
    u: &RationalFunction,
    node: Place,
    marked: &[Place],
) -> Result<Place, TransformError> {
    let p = field.p() as i64;
    let divisor = u
        .divisor(field)
        .map_err(|e| TransformError::Torsor(TorsorError::Arithmetic(e)))?;
    let mut fallback = None;
    for (pl, n) in divisor {
        if n % p == 0 || pl == node {
            continue;
        }
        if !marked.contains(&pl) {
            return Ok(pl);
        }
        if fallback.is_none() {
            fallback = Some(pl);
        }
    }
    fallback.ok_or(TransformError::ChartExhausted)
}

/// Attach a projective-line tail at every marked smooth point, moving the
/// chart degeneracy onto the tail where every order has the form `1 - pn`.
/// Arithmetic genera of both curves are preserved.
pub fn stabilize(c: &CoverGraph) -> Result<CoverGraph, TransformError> {
    require_valid(c)?;
    let h1 = check_h1_h2(c);
    if h1.violations.iter().any(|v| v.rule == "H1") {
        return Err(TransformError::InvalidCover(
            "multiplicative charts present; eliminate them first".into(),
        ));
    }
    if c.exceptional.is_empty() {
        return Ok(c.clone());
    }
    let field = &c.field;
    let p = c.p();

    let mut y_genus = c.y.genus.clone();
    let mut y_edges = c.y.edges.clone();
    let mut x_genus = c.x.genus.clone();
    let mut x_edges = c.x.edges.clone();
    let mut vmap = c.vmap.clone();
    let mut emap = c.emap.clone();
    let mut data = c.vertex_data.clone();
    let mut edge_places = c.edge_places.clone();
    let mut new_exceptional: Vec<(VertexId, Place)> = vec![];

    for &(v, place) in &c.exceptional {
        let (group, u) = match &c.vertex_data[v.0] {
            VertexData::Torsor { group, u } => (group.normalized(), u),
            VertexData::Split => {
                return Err(TransformError::InvalidCover(
                    "marked point on a split-orbit component".into(),
                ))
            }
        };
        // the order the tail must cancel: additive charts use the order of
        // the datum, étale charts the reduced pole order of the extension
        let n = match group {
            GroupTag::AlphaP | GroupTag::Mn(_) => u.ord_at(field, place).unwrap_or(0),
            GroupTag::Etale => {
                let expansion = u
                    .expand_at(field, place, 1)
                    .map_err(|e| TransformError::Torsor(TorsorError::Arithmetic(e)))?;
                let (_, m) = torsors::as_reduce(field, &expansion)
                    .map_err(|e| TransformError::Torsor(TorsorError::Arithmetic(e)))?;
                -m
            }
            GroupTag::MuP => unreachable!("H1 checked above"),
        };
        if n == 0 {
            return Err(TransformError::InvalidCover(format!(
                "marked point at {place:?} where the chart does not degenerate"
            )));
        }
        let dec = decompose_n(n, p);
        if dec.q as u32 > field.q() {
            return Err(TransformError::EnlargeField);
        }
        // tail chart: node at infinity with order -n, finite places carry
        // the parts
        let mut factors = vec![];
        let mut tail_u = RationalFunction::one(field);
        for (i, &ni) in dec.parts.iter().enumerate() {
            let root = field.element(i as u32);
            factors.push((root, 1 - p as i64 * ni));
        }
        tail_u = tail_u.mul(
            field,
            &RationalFunction::from_root_powers(field, &factors)
                .map_err(|e| TransformError::Torsor(TorsorError::Arithmetic(e)))?,
        );
        let new_y = VertexId(y_genus.len());
        y_genus.push(0);
        let new_x = VertexId(x_genus.len());
        x_genus.push(0);
        vmap.push(new_x);
        data.push(VertexData::Torsor {
            group: GroupTag::AlphaP,
            u: tail_u,
        });
        let new_x_edge = EdgeId(x_edges.len());
        x_edges.push((c.vmap[v.0], new_x));
        edge_places.push((place, Place::Infinity));
        y_edges.push((v, new_y));
        emap.push((new_x_edge, false));
        for (i, &ni) in dec.parts.iter().enumerate() {
            if ni >= 1 {
                new_exceptional.push((new_y, Place::Finite(field.element(i as u32))));
            }
        }
    }

    let out = CoverGraph::new(
        field.clone(),
        DualGraph::new(y_genus, y_edges).expect("well-formed"),
        DualGraph::new(x_genus, x_edges).expect("well-formed"),
        vmap,
        emap,
        data,
        edge_places,
        new_exceptional,
    )
    .expect("well-formed extension");
    let report = validate_cover(&out);
    if !report.is_valid() {
        return Err(TransformError::InvalidCover(format!(
            "stabilization produced an invalid cover: {report}"
        )));
    }
    let h = check_h1_h2(&out);
    if !h.is_valid() {
        return Err(TransformError::InvalidCover(format!(
            "stabilization left the lifting hypotheses violated: {h}"
        )));
    }
    Ok(out)
}

/// Vertex classes on the base tree.
#[derive(Copy, Clone, PartialEq, Eq, Debug)]
enum BaseClass {
    Etale,
    Radiciel,
}

/// Build an adapted Hurwitz graph over the cover's skeleton: thicknesses and
/// differents are produced by recursion over the base tree from an étale
/// root, then scaled to integers by the least common multiple of the
/// denominators.
pub fn synthesize_hurwitz(c: &CoverGraph) -> Result<HurwitzGraph, TransformError> {
    require_valid(c)?;
    let h12 = check_h1_h2(c);
    if !h12.is_valid() {
        return Err(TransformError::InvalidCover(format!(
            "lifting hypotheses violated: {h12}"
        )));
    }
    if !c.x.is_tree() {
        return Err(TransformError::BaseNotTree);
    }
    let p = c.p() as i64;
    let py =
        c.y.arithmetic_genus()
            .map_err(|e| TransformError::InvalidCover(e.to_string()))?;
    if py < 2 {
        return Err(TransformError::InvalidCover(format!(
            "total arithmetic genus {py} is below 2"
        )));
    }

    let skeleton = skeleton_from_cover(c)?;
    let table = conductor_table(c).map_err(TransformError::Torsor)?;

    // class of each base vertex
    let fibers = c.vertex_fibers();
    let mut class = vec![BaseClass::Etale; c.x.vertex_count()];
    for (xv, fiber) in fibers.iter().enumerate() {
        class[xv] = if fiber.len() == 1 {
            match c.vertex_data[fiber[0].0].group() {
                Some(GroupTag::Etale) | Some(GroupTag::Mn(0)) => BaseClass::Etale,
                Some(_) => BaseClass::Radiciel,
                None => BaseClass::Etale,
            }
        } else {
            BaseClass::Etale
        };
    }
    let root = class
        .iter()
        .position(|&cl| cl == BaseClass::Etale)
        .ok_or_else(|| {
            TransformError::NoAdaptedGraph("no étale component to root the recursion".into())
        })?;

    type Q = Ratio<i64>;
    let nx = c.x.vertex_count();
    let mut d_x: Vec<Option<Q>> = vec![None; nx];
    let mut eps_x: Vec<Option<Q>> = vec![None; c.x.edge_count()];
    d_x[root] = Some(Q::from_integer(0));
    let mut queue = vec![root];
    let mut head = 0;
    while head < queue.len() {
        let x1 = queue[head];
        head += 1;
        let d1 = d_x[x1].unwrap();
        for (ei, &(a, b)) in c.x.edges.iter().enumerate() {
            if a.0 != x1 && b.0 != x1 {
                continue;
            }
            let x2 = if a.0 == x1 { b.0 } else { a.0 };
            if d_x[x2].is_some() {
                continue;
            }
            let fiber: Vec<EdgeId> = c
                .emap
                .iter()
                .enumerate()
                .filter(|&(_, &(xe, _))| xe.0 == ei)
                .map(|(i, _)| EdgeId(i))
                .collect();
            if fiber.len() > 1 {
                // free edge: both sides étale
                if d1 != Q::from_integer(0) || class[x2] != BaseClass::Etale {
                    return Err(TransformError::NoAdaptedGraph(
                        "free edge adjacent to a nonzero different".into(),
                    ));
                }
                eps_x[ei] = Some(Q::from_integer(1));
                d_x[x2] = Some(Q::from_integer(0));
            } else {
                let ye = fiber[0];
                let (yo, _) = c.y.edges[ye.0];
                let mark = skeleton.marks[ye.0].expect("ramified edges carry marks");
                // conductor on the orientation x1 -> x2
                let m = if c.vmap[yo.0].0 == x1 {
                    mark.m
                } else {
                    -mark.m
                };
                if m == 0 {
                    return Err(TransformError::NoAdaptedGraph(
                        "conductor-zero node after elimination".into(),
                    ));
                }
                let (eps, d2) = match class[x2] {
                    BaseClass::Etale => {
                        if m >= 0 || d1 == Q::from_integer(0) {
                            return Err(TransformError::NoAdaptedGraph(format!(
                                "étale target with conductor {m} and source different {d1}"
                            )));
                        }
                        let eps = -d1 / Q::from_integer(m * (p - 1));
                        (eps, Q::from_integer(0))
                    }
                    BaseClass::Radiciel => {
                        if m > 0 {
                            let eps = Q::from_integer(1);
                            (eps, d1 + Q::from_integer(m * (p - 1)))
                        } else {
                            // halve the available different
                            let eps = d1 / Q::from_integer(2 * (p - 1) * (-m));
                            (eps, d1 / Q::from_integer(2))
                        }
                    }
                };
                if d2 < Q::from_integer(0) || eps < Q::from_integer(0) {
                    return Err(TransformError::NoAdaptedGraph(
                        "negative thickness or different in the recursion".into(),
                    ));
                }
                eps_x[ei] = Some(eps);
                d_x[x2] = Some(d2);
            }
            queue.push(x2);
        }
    }
    if d_x.iter().any(|d| d.is_none()) {
        return Err(TransformError::NoAdaptedGraph(
            "base tree not fully reached".into(),
        ));
    }

    // point edges
    let ne = c.y.edge_count();
    let mut point_eps: Vec<Q> = vec![];
    let mut point_d: Vec<Q> = vec![];
    for (i, &(v, _)) in c.exceptional.iter().enumerate() {
        let mu = table.exceptional[i].m;
        let dv = d_x[c.vmap[v.0].0].unwrap();
        if (mu + 1) % p != 0 || mu < -1 {
            return Err(TransformError::NoAdaptedGraph(format!(
                "marked point {i} with conductor {mu} outside the admissible family"
            )));
        }
        if mu == -1 {
            point_eps.push(dv / Q::from_integer(p - 1));
            point_d.push(Q::from_integer(0));
        } else {
            point_eps.push(Q::from_integer(1));
            point_d.push(dv + Q::from_integer(mu * (p - 1)));
        }
    }

    // clear denominators with one common factor
    let mut lcm: i64 = 1;
    for q in d_x
        .iter()
        .map(|d| d.unwrap())
        .chain(eps_x.iter().map(|e| e.unwrap()))
        .chain(point_eps.iter().copied())
        .chain(point_d.iter().copied())
    {
        lcm = lcm.lcm(q.denom());
    }
    let scale = Q::from_integer(lcm);
    let to_int = |q: Q| -> i64 { (q * scale).to_integer() };

    let mut eps = Vec::with_capacity(ne + point_eps.len());
    for e in 0..ne {
        eps.push(to_int(eps_x[c.emap[e].0 .0].unwrap()));
    }
    eps.extend(point_eps.into_iter().map(to_int));
    let mut d = Vec::with_capacity(c.y.vertex_count() + point_d.len());
    for v in 0..c.y.vertex_count() {
        d.push(to_int(d_x[c.vmap[v].0].unwrap()));
    }
    d.extend(point_d.into_iter().map(to_int));

    Ok(HurwitzGraph::from_skeleton(skeleton, None, eps, d))
}

/// The full reduction chain: eliminate multiplicative charts, absorb marked
/// points, then synthesize the adapted graph.
pub fn pipeline(c: &CoverGraph) -> Result<(CoverGraph, HurwitzGraph), TransformError> {
    let step1 = eliminate_mu_p(c)?;
    let step2 = stabilize(&step1)?;
    let h = synthesize_hurwitz(&step2)?;
    Ok((step2, h))
}
