//! Random generation of valid tree-based covers for the integration and
//! acceptance suites. Every chart is drawn from a family whose degeneracy
//! places are known exactly, so each generated cover validates by
//! construction and survives the full rewrite pipeline.

#![allow(dead_code)]

use pcover::covers::{validate_cover, CoverGraph, VertexData};
use pcover::field::{FieldSpec, Fq};
use pcover::graph::{DualGraph, EdgeId, VertexId};
use pcover::poly::Poly;
use pcover::rational::{all_places, Place, RationalFunction};
use pcover::torsors::{conductor_residue, GroupTag, TorsorSpec};
use rand::prelude::*;

pub struct CoverBuilder {
    pub field: FieldSpec,
    y_genus: Vec<u32>,
    y_edges: Vec<(VertexId, VertexId)>,
    x_genus: Vec<u32>,
    x_edges: Vec<(VertexId, VertexId)>,
    vmap: Vec<VertexId>,
    emap: Vec<(EdgeId, bool)>,
    data: Vec<Option<VertexData>>,
    edge_places: Vec<(Place, Place)>,
    exceptional: Vec<(VertexId, Place)>,
    /// Hub-chart pole terms: (place, conductor).
    hub_poles: Vec<(Fq, i64)>,
    hub_next_place: u32,
    /// Predicted arithmetic genus of Y.
    pub predicted_pa: i64,
}

impl CoverBuilder {
    pub fn new(field: FieldSpec) -> CoverBuilder {
        let base = 1 - field.p() as i64;
        CoverBuilder {
            field,
            y_genus: vec![0],
            y_edges: vec![],
            x_genus: vec![0],
            x_edges: vec![],
            vmap: vec![VertexId(0)],
            emap: vec![],
            data: vec![None],
            edge_places: vec![],
            exceptional: vec![],
            hub_poles: vec![],
            hub_next_place: 0,
            predicted_pa: base,
        }
    }

    fn p(&self) -> i64 {
        self.field.p() as i64
    }

    fn fresh_hub_place(&mut self) -> Fq {
        let c = self.field.element(self.hub_next_place);
        self.hub_next_place += 1;
        assert!(self.hub_next_place <= self.field.q(), "hub chart exhausted");
        c
    }

    fn add_y_vertex(&mut self, genus: u32, data: VertexData, x_vertex: VertexId) -> VertexId {
        let v = VertexId(self.y_genus.len());
        self.y_genus.push(genus);
        self.vmap.push(x_vertex);
        self.data.push(Some(data));
        v
    }

    fn add_x_vertex(&mut self) -> VertexId {
        let x = VertexId(self.x_genus.len());
        self.x_genus.push(0);
        x
    }

    /// Ramified edge: one Y-edge over a fresh X-edge.
    fn add_ramified_edge(&mut self, a: VertexId, b: VertexId, place_a: Place, place_b: Place) {
        let xe = EdgeId(self.x_edges.len());
        self.x_edges.push((self.vmap[a.0], self.vmap[b.0]));
        self.edge_places.push((place_a, place_b));
        self.y_edges.push((a, b));
        self.emap.push((xe, false));
    }

    /// Free bundle: p parallel Y-edges over a fresh X-edge.
    fn add_free_bundle(&mut self, pairs: &[(VertexId, VertexId)], place_a: Place, place_b: Place) {
        let xe = EdgeId(self.x_edges.len());
        let (a0, b0) = pairs[0];
        self.x_edges.push((self.vmap[a0.0], self.vmap[b0.0]));
        self.edge_places.push((place_a, place_b));
        for &(a, b) in pairs {
            self.y_edges.push((a, b));
            self.emap.push((xe, false));
        }
    }

    fn alpha_link_datum(&self, k: i64) -> RationalFunction {
        RationalFunction::new(
            &self.field,
            Poly::one(&self.field),
            Poly::monomial(&self.field, self.field.one(), k as usize),
        )
        .unwrap()
    }

    /// Conductor options prime to p with -k ≡ 1 (mod p), so marked poles stay
    /// in the admissible family all the way through the pipeline.
    fn conductor_options(&self) -> Vec<i64> {
        match self.field.p() {
            2 => vec![1, 3, 5],
            3 => vec![2, 5],
            _ => vec![(self.p() - 1)],
        }
    }

    /// A chain of additive links hanging off the hub, ending in a marked pole.
    pub fn add_alpha_chain(&mut self, rng: &mut impl Rng) {
        let k = *self.conductor_options().choose(rng).unwrap();
        let len = rng.gen_range(1..=3);
        self.add_alpha_chain_with(k, len);
    }

    /// Deterministic variant with a prescribed conductor and length.
    pub fn add_alpha_chain_with(&mut self, k: i64, len: usize) {
        let hub_place = self.fresh_hub_place();
        self.hub_poles.push((hub_place, k));
        self.predicted_pa += (k + 1) * (self.p() - 1) / 2;
        let mut prev: Option<VertexId> = None;
        for _ in 0..len {
            let x = self.add_x_vertex();
            let v = self.add_y_vertex(
                0,
                VertexData::Torsor {
                    group: GroupTag::AlphaP,
                    u: self.alpha_link_datum(k),
                },
                x,
            );
            match prev {
                None => self.add_ramified_edge(
                    VertexId(0),
                    v,
                    Place::Finite(hub_place),
                    Place::Infinity,
                ),
                Some(w) => {
                    self.add_ramified_edge(w, v, Place::Finite(self.field.zero()), Place::Infinity)
                }
            }
            prev = Some(v);
        }
        self.exceptional
            .push((prev.unwrap(), Place::Finite(self.field.zero())));
    }

    /// Two additive links joining the hub to a second étale component, with
    /// a conductor-(−1) node in the middle. Exercises the fractional branch
    /// of the thickness recursion.
    pub fn add_bridge(&mut self) {
        let kb = if self.field.p() == 2 { 1 } else { 2 };
        let hub_place = self.fresh_hub_place();
        self.hub_poles.push((hub_place, kb));
        self.predicted_pa += (kb + 1) * (self.p() - 1) / 2;
        let x1 = self.add_x_vertex();
        let r1 = self.add_y_vertex(
            0,
            VertexData::Torsor {
                group: GroupTag::AlphaP,
                u: self.alpha_link_datum(kb),
            },
            x1,
        );
        self.add_ramified_edge(VertexId(0), r1, Place::Finite(hub_place), Place::Infinity);
        self.exceptional
            .push((r1, Place::Finite(self.field.zero())));
        let x2 = self.add_x_vertex();
        let r2 = self.add_y_vertex(
            0,
            VertexData::Torsor {
                group: GroupTag::AlphaP,
                u: self.alpha_link_datum(1),
            },
            x2,
        );
        // generic place of the first link faces the pole of the second
        self.add_ramified_edge(
            r1,
            r2,
            Place::Finite(self.field.one()),
            Place::Finite(self.field.zero()),
        );
        let x3 = self.add_x_vertex();
        let e1_u = RationalFunction::new(
            &self.field,
            Poly::one(&self.field),
            Poly::linear_root(&self.field, self.field.zero()),
        )
        .unwrap();
        let e1 = self.add_y_vertex(
            0,
            VertexData::Torsor {
                group: GroupTag::Etale,
                u: e1_u,
            },
            x3,
        );
        self.add_ramified_edge(r2, e1, Place::Infinity, Place::Finite(self.field.zero()));
    }

    /// Multiplicative cluster: a head chart ramified-attached to the hub at
    /// the degeneracy place of its logarithmic differential, one marked
    /// pole, and optionally a descending chain of two-support charts joined
    /// at conductor-zero nodes (the case the elimination twist rewrites).
    /// For p = 2 the chain may start with a chart that needs the unit
    /// normalization first.
    pub fn add_mu_cluster(&mut self, rng: &mut impl Rng) {
        let f = self.field.clone();
        // head chart with its hook conductor, marked pole and the support
        // place (of order +1) where a chain may continue
        let (head_u, hook_k, xstar, exc_place, chain_support) = match f.p() {
            2 => {
                // u = x (x - λ)(x - μ): the chart differential degenerates at
                // the square root of λμ with conductor -3
                let (lambda, mu) = loop {
                    let l = f.element(rng.gen_range(1..f.q()));
                    let m = f.element(rng.gen_range(1..f.q()));
                    if l != m {
                        break (l, m);
                    }
                };
                let u = RationalFunction::from_poly(
                    &f,
                    Poly::monomial(&f, f.one(), 1)
                        .mul(&f, &Poly::linear_root(&f, lambda))
                        .mul(&f, &Poly::linear_root(&f, mu)),
                );
                let xstar = Place::Finite(f.pth_root(f.mul(lambda, mu)));
                (u, 3i64, xstar, Place::Infinity, f.zero())
            }
            3 => {
                // u = (x - β)(x - γ)/(x - α)^2: exactly one simple zero of
                // the logarithmic differential, with conductor -2
                loop {
                    let mut picks: Vec<Fq> = f.elements().collect();
                    picks.shuffle(rng);
                    let (a, b, g) = (picks[0], picks[1], picks[2]);
                    let u = RationalFunction::new(
                        &f,
                        Poly::linear_root(&f, b).mul(&f, &Poly::linear_root(&f, g)),
                        Poly::linear_root(&f, a).pow(&f, 2),
                    )
                    .unwrap();
                    if let Some(x) = find_dlog_degeneracy(&f, &u, &[a, b, g]) {
                        break (u, 2i64, x, Place::Finite(a), b);
                    }
                }
            }
            _ => unreachable!("generator supports p = 2 and p = 3"),
        };
        let hub_place = self.fresh_hub_place();
        self.hub_poles.push((hub_place, hook_k));
        self.predicted_pa += (hook_k + 1) * (self.p() - 1) / 2;
        let x = self.add_x_vertex();
        let head = self.add_y_vertex(
            0,
            VertexData::Torsor {
                group: GroupTag::MuP,
                u: head_u,
            },
            x,
        );
        self.add_ramified_edge(VertexId(0), head, Place::Finite(hub_place), xstar);
        self.exceptional.push((head, exc_place));

        // descending chain through conductor-zero nodes; every link has
        // exactly two support places, so the twist keeps it clean
        let two_support = |c: i64| -> RationalFunction {
            // (x - 1)^c / x^c
            RationalFunction::new(
                &f,
                Poly::linear_root(&f, f.one()).pow(&f, c as u32),
                Poly::monomial(&f, f.one(), c as usize),
            )
            .unwrap()
        };
        let link_orders: &[i64] = if f.p() == 2 { &[1, 3, 5] } else { &[1, 4] };
        let mut upper = head;
        let mut upper_support = chain_support;
        let normalization_link = f.p() == 2 && rng.gen_bool(0.5);
        for _ in 0..rng.gen_range(0..=2usize) {
            let x = self.add_x_vertex();
            if normalization_link {
                // x^2 (x - λ)(x - μ): the square factor is stripped by the
                // unit normalization inside the elimination step
                let (lambda, mu) = loop {
                    let l = f.element(rng.gen_range(1..f.q()));
                    let m = f.element(rng.gen_range(1..f.q()));
                    if l != m {
                        break (l, m);
                    }
                };
                let u = RationalFunction::from_poly(
                    &f,
                    Poly::monomial(&f, f.one(), 2)
                        .mul(&f, &Poly::linear_root(&f, lambda))
                        .mul(&f, &Poly::linear_root(&f, mu)),
                );
                let q0 = if lambda.0 < mu.0 { lambda } else { mu };
                let sigma = if lambda.0 < mu.0 { mu } else { lambda };
                let v = self.add_y_vertex(
                    0,
                    VertexData::Torsor {
                        group: GroupTag::MuP,
                        u,
                    },
                    x,
                );
                self.add_ramified_edge(
                    upper,
                    v,
                    Place::Finite(upper_support),
                    Place::Finite(sigma),
                );
                self.exceptional.push((v, Place::Finite(q0)));
                // the normalized chart has no further free support
                return;
            }
            let c = *link_orders.choose(rng).unwrap();
            let v = self.add_y_vertex(
                0,
                VertexData::Torsor {
                    group: GroupTag::MuP,
                    u: two_support(c),
                },
                x,
            );
            self.add_ramified_edge(
                upper,
                v,
                Place::Finite(upper_support),
                Place::Finite(f.zero()),
            );
            upper = v;
            upper_support = f.one();
        }
    }

    /// Path piece: hub, additive link joined at conductor 1, then a new
    /// étale component across a conductor -1 node. The middle link keeps
    /// its marked pole.
    pub fn add_etale_tail_path(&mut self) {
        let f = self.field.clone();
        let hub_place = self.fresh_hub_place();
        self.hub_poles.push((hub_place, 1));
        self.predicted_pa += self.p() - 1;
        let x1 = self.add_x_vertex();
        let r1 = self.add_y_vertex(
            0,
            VertexData::Torsor {
                group: GroupTag::AlphaP,
                u: self.alpha_link_datum(1),
            },
            x1,
        );
        self.add_ramified_edge(VertexId(0), r1, Place::Finite(hub_place), Place::Infinity);
        self.exceptional.push((r1, Place::Finite(f.zero())));
        let x2 = self.add_x_vertex();
        let e2_u =
            RationalFunction::new(&f, Poly::one(&f), Poly::linear_root(&f, f.zero())).unwrap();
        let e2 = self.add_y_vertex(
            0,
            VertexData::Torsor {
                group: GroupTag::Etale,
                u: e2_u,
            },
            x2,
        );
        self.add_ramified_edge(r1, e2, Place::Finite(f.one()), Place::Finite(f.zero()));
    }

    /// A free orbit of p projective lines over a new base component.
    pub fn add_split_orbit(&mut self) {
        let x = self.add_x_vertex();
        let mut pairs = vec![];
        for _ in 0..self.field.p() {
            let v = self.add_y_vertex(0, VertexData::Split, x);
            pairs.push((VertexId(0), v));
        }
        let hub_place = self.fresh_hub_place();
        self.add_free_bundle(
            &pairs,
            Place::Finite(hub_place),
            Place::Finite(self.field.zero()),
        );
    }

    /// A marked pole directly on the hub chart (an étale marked point, which
    /// the stabilization step must absorb).
    pub fn add_hub_exceptional(&mut self, rng: &mut impl Rng) {
        let k = *self.conductor_options().choose(rng).unwrap();
        let place = self.fresh_hub_place();
        self.hub_poles.push((place, k));
        self.predicted_pa += (k + 1) * (self.p() - 1) / 2;
        self.exceptional.push((VertexId(0), Place::Finite(place)));
    }

    pub fn finish(mut self, rng: &mut impl Rng) -> CoverGraph {
        let f = self.field.clone();
        let p = self.p();
        // hub chart: sum of simple-principal-part terms, one per pole
        let hub_u = if self.hub_poles.is_empty() {
            let c = f
                .elements()
                .find(|&c| f.trace_to_prime(c) != 0)
                .expect("trace is onto the prime field");
            RationalFunction::constant(&f, c)
        } else {
            let mut acc = RationalFunction::zero(&f);
            for &(place, k) in &self.hub_poles {
                let c = f.element(rng.gen_range(1..f.q()));
                let term = RationalFunction::new(
                    &f,
                    Poly::constant(&f, c),
                    Poly::linear_root(&f, place).pow(&f, k as u32),
                )
                .unwrap();
                acc = acc.add(&f, &term);
            }
            acc
        };
        let ram_sum: i64 = self.hub_poles.iter().map(|&(_, k)| (k + 1) * (p - 1)).sum();
        let hub_genus = if self.hub_poles.is_empty() {
            1
        } else {
            (2 - 2 * p + ram_sum) / 2
        };
        assert!(hub_genus >= 0, "hub genus went negative");
        self.y_genus[0] = hub_genus as u32;
        self.data[0] = Some(VertexData::Torsor {
            group: GroupTag::Etale,
            u: hub_u,
        });

        let cover = CoverGraph::new(
            f,
            DualGraph::new(self.y_genus, self.y_edges).unwrap(),
            DualGraph::new(self.x_genus, self.x_edges).unwrap(),
            self.vmap,
            self.emap,
            self.data.into_iter().map(Option::unwrap).collect(),
            self.edge_places,
            self.exceptional,
        )
        .unwrap();
        let report = validate_cover(&cover);
        assert!(report.is_valid(), "generated cover invalid:\n{report}");
        assert_eq!(
            cover.y.arithmetic_genus().unwrap(),
            self.predicted_pa,
            "genus prediction drifted"
        );
        cover
    }
}

/// The unique place where the logarithmic differential of u degenerates with
/// conductor exactly -2, if it is disjoint from the listed support.
fn find_dlog_degeneracy(field: &FieldSpec, u: &RationalFunction, support: &[Fq]) -> Option<Place> {
    let spec = TorsorSpec::global(GroupTag::MuP, u.clone());
    let mut found = None;
    for place in all_places(field) {
        let cr = conductor_residue(field, &spec, place).ok()?;
        if cr.m <= -2 {
            if cr.m != -2 || found.is_some() {
                return None;
            }
            if let Place::Finite(c) = place {
                if support.contains(&c) {
                    return None;
                }
            }
            found = Some(place);
        }
    }
    found
}

/// A random valid tree cover with mixed chart types, total genus at least 2.
pub fn random_tree_cover(rng: &mut impl Rng, p: u32) -> CoverGraph {
    let field = match p {
        2 => FieldSpec::standard(2, 3).unwrap(),
        3 => FieldSpec::standard(3, 2).unwrap(),
        _ => panic!("generator supports p = 2 and p = 3"),
    };
    let mut builder = CoverBuilder::new(field);
    builder.add_alpha_chain(rng);
    let extras = rng.gen_range(1..=3);
    for _ in 0..extras {
        match rng.gen_range(0..5) {
            0 => builder.add_alpha_chain(rng),
            1 => builder.add_bridge(),
            2 => builder.add_mu_cluster(rng),
            3 => builder.add_split_orbit(),
            4 => builder.add_hub_exceptional(rng),
            _ => unreachable!(),
        }
    }
    while builder.predicted_pa < 2 {
        builder.add_alpha_chain(rng);
    }
    builder.finish(rng)
}

/// One étale component (triple pole toward the node) meeting one additive
/// component (matching place at infinity) at a single ramified node, with a
/// marked pole on the additive side.
pub fn etale_alpha_fixture() -> CoverGraph {
    let field = FieldSpec::standard(2, 1).unwrap();
    let x3_inv = RationalFunction::new(
        &field,
        Poly::one(&field),
        Poly::monomial(&field, field.one(), 3),
    )
    .unwrap();
    CoverGraph::new(
        field.clone(),
        DualGraph::new(vec![1, 0], vec![(VertexId(0), VertexId(1))]).unwrap(),
        DualGraph::new(vec![0, 0], vec![(VertexId(0), VertexId(1))]).unwrap(),
        vec![VertexId(0), VertexId(1)],
        vec![(EdgeId(0), false)],
        vec![
            VertexData::Torsor {
                group: GroupTag::Etale,
                u: x3_inv.clone(),
            },
            VertexData::Torsor {
                group: GroupTag::AlphaP,
                u: x3_inv,
            },
        ],
        vec![(Place::Finite(field.zero()), Place::Infinity)],
        vec![(VertexId(1), Place::Finite(field.zero()))],
    )
    .unwrap()
}

/// The path of the thickness recursion with unit conductors: hub, additive
/// link, new étale tail, plus a conductor-3 branch that raises the genus.
pub fn path_fixture_p2() -> CoverGraph {
    let field = FieldSpec::standard(2, 3).unwrap();
    let mut builder = CoverBuilder::new(field);
    builder.add_alpha_chain_with(3, 1);
    builder.add_etale_tail_path();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
    builder.finish(&mut rng)
}

/// The chain with a conductor-(-1) node between two additive links, which
/// forces the half-integral intermediate thickness.
pub fn bridge_fixture_p2() -> CoverGraph {
    let field = FieldSpec::standard(2, 3).unwrap();
    let mut builder = CoverBuilder::new(field);
    builder.add_alpha_chain_with(3, 1);
    builder.add_bridge();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
    builder.finish(&mut rng)
}

/// A fixed small cover with one multiplicative cluster, used by several tests.
pub fn mu_cluster_fixture(p: u32) -> CoverGraph {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
    let field = match p {
        2 => FieldSpec::standard(2, 3).unwrap(),
        3 => FieldSpec::standard(3, 2).unwrap(),
        _ => panic!(),
    };
    let mut builder = CoverBuilder::new(field);
    builder.add_alpha_chain(&mut rng);
    builder.add_mu_cluster(&mut rng);
    while builder.predicted_pa < 2 {
        builder.add_alpha_chain(&mut rng);
    }
    builder.finish(&mut rng)
}
