//! On-disk document schema: one JSON object per document, canonical form
//! (sorted keys, no floats, LF terminated) so that parse → serialize is the
//! identity on canonical input. Field elements travel as length-e integer
//! vectors, rationals as integer pairs.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::covers::{CoverGraph, VertexData};
use crate::field::FieldSpec;
use crate::graph::{DualGraph, EdgeId, VertexId};
use crate::hodge::ReductionConfig;
use crate::hurwitz::{HurwitzGraph, Mark, Sigma};
use crate::poly::Poly;
use crate::rational::{Place, RationalFunction};
use crate::torsors::GroupTag;

#[derive(Debug, Error)]
pub enum DocError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("schema error: {0}")]
    Schema(String),
}

#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct Document {
    pub version: String,
    pub field: FieldDoc,
    pub payload: Payload,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct FieldDoc {
    pub p: u32,
    pub e: u32,
    pub modulus: Vec<u32>,
}

#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Payload {
    Cover(CoverDoc),
    Hurwitz(HurwitzDoc),
    HodgeConfig(ReductionConfig),
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct GraphDoc {
    pub genus: Vec<u32>,
    pub edges: Vec<(usize, usize)>,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PlaceDoc {
    Finite(Vec<u32>),
    Infinity,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct RationalFunctionDoc {
    pub num: Vec<Vec<u32>>,
    pub den: Vec<Vec<u32>>,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GroupDoc {
    Etale,
    AlphaP,
    MuP,
    Mn(u32),
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VertexDataDoc {
    Split,
    Torsor {
        group: GroupDoc,
        u: RationalFunctionDoc,
    },
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct CoverDoc {
    pub y: GraphDoc,
    pub x: GraphDoc,
    pub vmap: Vec<usize>,
    pub emap: Vec<(usize, bool)>,
    pub vertex_data: Vec<VertexDataDoc>,
    pub edge_places: Vec<(PlaceDoc, PlaceDoc)>,
    pub exceptional: Vec<(usize, PlaceDoc)>,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct SigmaDoc {
    pub vertex: Vec<usize>,
    pub edge: Vec<usize>,
    pub flip: Vec<bool>,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct MarkDoc {
    pub m: i64,
    pub h: u32,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct HurwitzDoc {
    pub graph: GraphDoc,
    pub point_vertices: Vec<bool>,
    pub sigma: SigmaDoc,
    pub nu_p: Option<i64>,
    pub eps: Vec<i64>,
    pub d: Vec<i64>,
    pub marks: Vec<Option<MarkDoc>>,
}

/// Serialize in canonical form: compact JSON with sorted keys, one trailing
/// newline.
pub fn to_canonical_json(doc: &Document) -> String {
    let value = serde_json::to_value(doc).expect("documents are serializable");
    let mut s = serde_json::to_string(&value).expect("values are serializable");
    s.push('\n');
    s
}

pub fn parse(input: &str) -> Result<Document, DocError> {
    serde_json::from_str(input).map_err(|e| DocError::Parse(e.to_string()))
}

impl Document {
    pub fn field_spec(&self) -> Result<FieldSpec, DocError> {
        FieldSpec::new(self.field.p, self.field.e, self.field.modulus.clone())
            .map_err(|e| DocError::Schema(e.to_string()))
    }

    pub fn new_cover(c: &CoverGraph) -> Document {
        Document {
            version: "1".into(),
            field: field_doc(&c.field),
            payload: Payload::Cover(cover_to_doc(c)),
        }
    }

    pub fn new_hurwitz(field: &FieldSpec, h: &HurwitzGraph) -> Document {
        Document {
            version: "1".into(),
            field: field_doc(field),
            payload: Payload::Hurwitz(hurwitz_to_doc(h)),
        }
    }

    pub fn new_hodge(field: &FieldSpec, cfg: &ReductionConfig) -> Document {
        Document {
            version: "1".into(),
            field: field_doc(field),
            payload: Payload::HodgeConfig(*cfg),
        }
    }

    pub fn to_cover(&self) -> Result<CoverGraph, DocError> {
        let field = self.field_spec()?;
        match &self.payload {
            Payload::Cover(doc) => cover_from_doc(&field, doc),
            _ => Err(DocError::Schema("document does not hold a cover".into())),
        }
    }

    pub fn to_hurwitz(&self) -> Result<(FieldSpec, HurwitzGraph), DocError> {
        let field = self.field_spec()?;
        match &self.payload {
            Payload::Hurwitz(doc) => Ok((field.clone(), hurwitz_from_doc(&field, doc)?)),
            _ => Err(DocError::Schema(
                "document does not hold a Hurwitz graph".into(),
            )),
        }
    }
}

fn field_doc(field: &FieldSpec) -> FieldDoc {
    FieldDoc {
        p: field.p(),
        e: field.e(),
        modulus: field.modulus().to_vec(),
    }
}

fn place_to_doc(field: &FieldSpec, place: Place) -> PlaceDoc {
    match place {
        Place::Finite(c) => PlaceDoc::Finite(field.to_vector(c)),
        Place::Infinity => PlaceDoc::Infinity,
    }
}

fn place_from_doc(field: &FieldSpec, doc: &PlaceDoc) -> Result<Place, DocError> {
    match doc {
        PlaceDoc::Finite(v) => Ok(Place::Finite(
            field
                .from_vector(v)
                .map_err(|e| DocError::Schema(e.to_string()))?,
        )),
        PlaceDoc::Infinity => Ok(Place::Infinity),
    }
}

fn poly_to_doc(field: &FieldSpec, poly: &Poly) -> Vec<Vec<u32>> {
    poly.coeffs.iter().map(|&c| field.to_vector(c)).collect()
}

fn poly_from_doc(field: &FieldSpec, doc: &[Vec<u32>]) -> Result<Poly, DocError> {
    let coeffs = doc
        .iter()
        .map(|v| field.from_vector(v))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| DocError::Schema(e.to_string()))?;
    Ok(Poly::new(field, coeffs))
}

fn rf_to_doc(field: &FieldSpec, u: &RationalFunction) -> RationalFunctionDoc {
    RationalFunctionDoc {
        num: poly_to_doc(field, &u.num),
        den: poly_to_doc(field, &u.den),
    }
}

fn rf_from_doc(field: &FieldSpec, doc: &RationalFunctionDoc) -> Result<RationalFunction, DocError> {
    let num = poly_from_doc(field, &doc.num)?;
    let den = poly_from_doc(field, &doc.den)?;
    RationalFunction::new(field, num, den).map_err(|e| DocError::Schema(e.to_string()))
}

fn group_to_doc(group: GroupTag) -> GroupDoc {
    match group {
        GroupTag::Etale => GroupDoc::Etale,
        GroupTag::AlphaP => GroupDoc::AlphaP,
        GroupTag::MuP => GroupDoc::MuP,
        GroupTag::Mn(n) => GroupDoc::Mn(n),
    }
}

fn group_from_doc(doc: &GroupDoc) -> GroupTag {
    match doc {
        GroupDoc::Etale => GroupTag::Etale,
        GroupDoc::AlphaP => GroupTag::AlphaP,
        GroupDoc::MuP => GroupTag::MuP,
        GroupDoc::Mn(n) => GroupTag::Mn(*n),
    }
}

fn graph_to_doc(g: &DualGraph) -> GraphDoc {
    GraphDoc {
        genus: g.genus.clone(),
        edges: g.edges.iter().map(|&(a, b)| (a.0, b.0)).collect(),
    }
}

fn graph_from_doc(doc: &GraphDoc) -> Result<DualGraph, DocError> {
    DualGraph::new(
        doc.genus.clone(),
        doc.edges
            .iter()
            .map(|&(a, b)| (VertexId(a), VertexId(b)))
            .collect(),
    )
    .map_err(|e| DocError::Schema(e.to_string()))
}

fn cover_to_doc(c: &CoverGraph) -> CoverDoc {
    CoverDoc {
        y: graph_to_doc(&c.y),
        x: graph_to_doc(&c.x),
        vmap: c.vmap.iter().map(|v| v.0).collect(),
        emap: c.emap.iter().map(|&(e, f)| (e.0, f)).collect(),
        vertex_data: c
            .vertex_data
            .iter()
            .map(|d| match d {
                VertexData::Split => VertexDataDoc::Split,
                VertexData::Torsor { group, u } => VertexDataDoc::Torsor {
                    group: group_to_doc(*group),
                    u: rf_to_doc(&c.field, u),
                },
            })
            .collect(),
        edge_places: c
            .edge_places
            .iter()
            .map(|&(o, t)| (place_to_doc(&c.field, o), place_to_doc(&c.field, t)))
            .collect(),
        exceptional: c
            .exceptional
            .iter()
            .map(|&(v, pl)| (v.0, place_to_doc(&c.field, pl)))
            .collect(),
    }
}

fn cover_from_doc(field: &FieldSpec, doc: &CoverDoc) -> Result<CoverGraph, DocError> {
    let y = graph_from_doc(&doc.y)?;
    let x = graph_from_doc(&doc.x)?;
    let vertex_data = doc
        .vertex_data
        .iter()
        .map(|d| match d {
            VertexDataDoc::Split => Ok(VertexData::Split),
            VertexDataDoc::Torsor { group, u } => Ok(VertexData::Torsor {
                group: group_from_doc(group),
                u: rf_from_doc(field, u)?,
            }),
        })
        .collect::<Result<Vec<_>, DocError>>()?;
    let edge_places = doc
        .edge_places
        .iter()
        .map(|(o, t)| Ok((place_from_doc(field, o)?, place_from_doc(field, t)?)))
        .collect::<Result<Vec<_>, DocError>>()?;
    let exceptional = doc
        .exceptional
        .iter()
        .map(|(v, pl)| Ok((VertexId(*v), place_from_doc(field, pl)?)))
        .collect::<Result<Vec<_>, DocError>>()?;
    CoverGraph::new(
        field.clone(),
        y,
        x,
        doc.vmap.iter().map(|&v| VertexId(v)).collect(),
        doc.emap.iter().map(|&(e, f)| (EdgeId(e), f)).collect(),
        vertex_data,
        edge_places,
        exceptional,
    )
    .map_err(|e| DocError::Schema(e.to_string()))
}

fn hurwitz_to_doc(h: &HurwitzGraph) -> HurwitzDoc {
    HurwitzDoc {
        graph: graph_to_doc(&h.graph),
        point_vertices: h.point_vertex.clone(),
        sigma: SigmaDoc {
            vertex: h.sigma.vertex.clone(),
            edge: h.sigma.edge.clone(),
            flip: h.sigma.flip.clone(),
        },
        nu_p: h.nu_p,
        eps: h.eps.clone(),
        d: h.d.clone(),
        marks: h
            .marks
            .iter()
            .map(|m| m.map(|Mark { m, h }| MarkDoc { m, h }))
            .collect(),
    }
}

fn hurwitz_from_doc(field: &FieldSpec, doc: &HurwitzDoc) -> Result<HurwitzGraph, DocError> {
    let graph = graph_from_doc(&doc.graph)?;
    let nv = graph.vertex_count();
    let ne = graph.edge_count();
    if doc.point_vertices.len() != nv
        || doc.sigma.vertex.len() != nv
        || doc.sigma.edge.len() != ne
        || doc.sigma.flip.len() != ne
        || doc.eps.len() != ne
        || doc.d.len() != nv
        || doc.marks.len() != ne
    {
        return Err(DocError::Schema(
            "hurwitz data lengths do not match the graph".into(),
        ));
    }
    Ok(HurwitzGraph {
        p: field.p(),
        graph,
        point_vertex: doc.point_vertices.clone(),
        sigma: Sigma {
            vertex: doc.sigma.vertex.clone(),
            edge: doc.sigma.edge.clone(),
            flip: doc.sigma.flip.clone(),
        },
        nu_p: doc.nu_p,
        eps: doc.eps.clone(),
        d: doc.d.clone(),
        marks: doc
            .marks
            .iter()
            .map(|m| m.as_ref().map(|MarkDoc { m, h }| Mark { m: *m, h: *h }))
            .collect(),
    })
}
