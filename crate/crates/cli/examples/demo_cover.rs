//! Emit a small demo cover document on stdout: an étale chart with a triple
//! pole meeting an additive chart at a single node, plus one marked point.
//!
//!     cargo run -p pcover-cli --example demo_cover > cover.json
//!     pcover validate cover.json --kind cover

use pcover::covers::{CoverGraph, VertexData};
use pcover::doc::{to_canonical_json, Document};
use pcover::field::FieldSpec;
use pcover::graph::{DualGraph, EdgeId, VertexId};
use pcover::poly::Poly;
use pcover::rational::{Place, RationalFunction};
use pcover::torsors::GroupTag;

fn main() {
    let field = FieldSpec::standard(2, 3).expect("standard field");
    let pole3 = |c: u32| {
        RationalFunction::new(
            &field,
            Poly::one(&field),
            Poly::linear_root(&field, field.element(c)).pow(&field, 3),
        )
        .expect("nonzero denominator")
    };
    let hub = pole3(0).add(&field, &pole3(1));
    let leaf = RationalFunction::new(
        &field,
        Poly::one(&field),
        Poly::monomial(&field, field.one(), 3),
    )
    .expect("nonzero denominator");
    let cover = CoverGraph::new(
        field.clone(),
        DualGraph::new(
            vec![3, 0, 0],
            vec![(VertexId(0), VertexId(1)), (VertexId(0), VertexId(2))],
        )
        .expect("well-formed"),
        DualGraph::new(
            vec![0, 0, 0],
            vec![(VertexId(0), VertexId(1)), (VertexId(0), VertexId(2))],
        )
        .expect("well-formed"),
        vec![VertexId(0), VertexId(1), VertexId(2)],
        vec![(EdgeId(0), false), (EdgeId(1), false)],
        vec![
            VertexData::Torsor {
                group: GroupTag::Etale,
                u: hub,
            },
            VertexData::Torsor {
                group: GroupTag::AlphaP,
                u: leaf.clone(),
            },
            VertexData::Torsor {
                group: GroupTag::AlphaP,
                u: leaf,
            },
        ],
        vec![
            (Place::Finite(field.element(0)), Place::Infinity),
            (Place::Finite(field.element(1)), Place::Infinity),
        ],
        vec![
            (VertexId(1), Place::Finite(field.zero())),
            (VertexId(2), Place::Finite(field.zero())),
        ],
    )
    .expect("well-formed cover");
    print!("{}", to_canonical_json(&Document::new_cover(&cover)));
}
