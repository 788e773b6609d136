//! Serde helpers: inside reports vertices are written as bare coordinate
//! arrays, the level being implied by the enclosing report.

use serde::ser::{SerializeSeq, Serializer};

use crate::vertex::Vertex;

pub(crate) fn coords<S: Serializer>(v: &Vertex, s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(&v.coords)
}

pub(crate) fn opt_coords<S: Serializer>(v: &Option<Vertex>, s: S) -> Result<S::Ok, S::Error> {
    match v {
        Some(v) => s.collect_seq(&v.coords),
        None => s.serialize_none(),
    }
}

pub(crate) fn coords_list<S: Serializer>(vs: &[Vertex], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(vs.iter().map(|v| &v.coords))
}

pub(crate) fn coord_pairs<S: Serializer>(ps: &[(Vertex, Vertex)], s: S) -> Result<S::Ok, S::Error> {
    let mut seq = s.serialize_seq(Some(ps.len()))?;
    for (a, b) in ps {
        seq.serialize_element(&(&a.coords, &b.coords))?;
    }
    seq.end()
}
