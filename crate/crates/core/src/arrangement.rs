//! The dual line arrangement, built as a half-edge mesh of great circles on
//! the sphere double cover and reported in projective counts.
//!
//! Point p dualizes to the great circle {v : P_p · v = 0}; the connecting
//! line ℓ dualizes to the antipodal vertex pair ±L_ℓ, L_ℓ = P_i × P_j.

use std::cell::RefCell;
use std::cmp::Ordering;
use std::collections::{BTreeMap, HashSet};
use std::fmt::Write as _;

use serde::Serialize;

use crate::configurations::Configuration;
use crate::error::{Error, Result};
use crate::incidence::{enumerate_lines_with, IncidenceSpectrum, LineTable, Strategy};
use crate::scalar::{ScalarTerm, Sign, SignEngine, SignPolicy, VecTerm};

pub const DEFAULT_MAX_VERTICES: usize = 1_000_000;

#[derive(Clone, Copy, Debug)]
pub struct BuildOptions {
    pub policy: SignPolicy,
    pub strategy: Strategy,
    /// build even when V exceeds the size guard
    pub force: bool,
    pub max_vertices: usize,
}

impl Default for BuildOptions {
    fn default() -> Self {
        BuildOptions { policy: SignPolicy::geometric(), strategy: Strategy::Auto, force: false, max_vertices: DEFAULT_MAX_VERTICES }
    }
}

#[derive(Clone, Debug)]
pub struct HalfEdge {
    pub origin: usize,
    pub twin: usize,
    pub next: usize,
    pub face: usize,
    /// index of the point whose dual circle carries this edge
    pub circle: usize,
    /// along the circle's counterclockwise orientation
    pub forward: bool,
}

/// Half-edge mesh on the sphere. Vertex 2ℓ is +L_ℓ, vertex 2ℓ+1 is −L_ℓ.
#[derive(Clone, Debug)]
pub struct SphericalDcel {
    table: LineTable,
    half_edges: Vec<HalfEdge>,
    /// outgoing half-edges per vertex, counterclockwise
    rotation: Vec<Vec<usize>>,
    /// first half-edge of each face
    faces: Vec<usize>,
    face_size: Vec<usize>,
    antipode: Vec<usize>,
}

impl SphericalDcel {
    pub fn table(&self) -> &LineTable {
        &self.table
    }

    pub fn half_edges(&self) -> &[HalfEdge] {
        &self.half_edges
    }

    pub fn rotation(&self, v: usize) -> &[usize] {
        &self.rotation[v]
    }

    pub fn vertex_count(&self) -> usize {
        self.rotation.len()
    }

    pub fn face_count(&self) -> usize {
        self.faces.len()
    }

    pub fn face_size(&self, f: usize) -> usize {
        self.face_size[f]
    }

    /// Antipodal image of a half-edge.
    pub fn antipode(&self, h: usize) -> usize {
        self.antipode[h]
    }

    /// Line index of a sphere vertex.
    pub fn line_of(v: usize) -> usize {
        v / 2
    }

    pub fn destination(&self, h: usize) -> usize {
        self.half_edges[self.half_edges[h].twin].origin
    }

    /// Mesh well-formedness and antipodal symmetry.
    pub fn check_invariants(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvariantViolation(m.into()));
        for (h, e) in self.half_edges.iter().enumerate() {
            if self.half_edges[e.twin].twin != h || e.twin == h {
                return bad("twin is not an involution");
            }
            if self.half_edges[e.twin].face == e.face {
                return bad("edge borders the same face twice");
            }
            if self.destination(h) != self.half_edges[e.next].origin {
                return bad("next does not start at the destination");
            }
            let a = self.antipode[h];
            if a == h || self.antipode[a] != h || self.half_edges[a].origin != self.half_edges[h].origin ^ 1 {
                return bad("antipodal map is not a fixed-point-free involution");
            }
            if self.face_size[self.half_edges[a].face] != self.face_size[e.face] || self.half_edges[a].face == e.face {
                return bad("antipodal map does not act freely on faces");
            }
        }
        if self.face_size.iter().any(|&s| s < 3) {
            return bad("face with fewer than three edges");
        }
        Ok(())
    }
}

pub fn build_dual_arrangement(c: &Configuration) -> Result<SphericalDcel> {
    build_dual_arrangement_with(c, &BuildOptions::default())
}

pub fn build_dual_arrangement_with(c: &Configuration, opts: &BuildOptions) -> Result<SphericalDcel> {
    if c.len() < 3 {
        return Err(Error::InvalidParameter("need at least three points".into()));
    }
    let table = enumerate_lines_with(c, opts.strategy, &opts.policy)?;
    if table.len() == 1 {
        return Err(Error::DegeneratePencil);
    }
    if table.len() > opts.max_vertices && !opts.force {
        return Err(Error::ArrangementTooLarge { vertices: table.len() });
    }
    let engine = c.sign_engine(&opts.policy);
    let n = c.len();
    let line_vec: Vec<VecTerm> = table.lines().iter().map(|l| VecTerm::join(l[0], l[1])).collect();

    let mut through: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (li, l) in table.lines().iter().enumerate() {
        for &p in l {
            through[p].push(li);
        }
    }

    // Order the vertices around each circle.
    let mut circle_cycle: Vec<Vec<usize>> = Vec::with_capacity(n);
    for p in 0..n {
        let vecs: Vec<VecTerm> = through[p].iter().map(|&l| line_vec[l].clone()).collect();
        let order = angular_order(&engine, &VecTerm::Point(p), &vecs)?;
        circle_cycle.push(order.into_iter().map(|(i, s)| 2 * through[p][i] + usize::from(!s)).collect());
    }

    // Half-edge ids: circle p of degree d owns 4d ids starting at base[p];
    // forward t runs w_t → w_{t+1}, backward t runs w_{t+1} → w_t.
    let mut base = vec![0usize; n + 1];
    for p in 0..n {
        base[p + 1] = base[p] + 2 * circle_cycle[p].len();
    }
    let total = base[n];
    let mut half_edges = Vec::with_capacity(total);
    let mut antipode = vec![0usize; total];
    for p in 0..n {
        let cyc = &circle_cycle[p];
        let len = cyc.len();
        let d = len / 2;
        for t in 0..len {
            half_edges.push(HalfEdge { origin: cyc[t], twin: base[p] + len + t, next: 0, face: 0, circle: p, forward: true });
        }
        for t in 0..len {
            half_edges.push(HalfEdge { origin: cyc[(t + 1) % len], twin: base[p] + t, next: 0, face: 0, circle: p, forward: false });
        }
        for t in 0..len {
            antipode[base[p] + t] = base[p] + (t + d) % len;
            antipode[base[p] + len + t] = base[p] + len + (t + d) % len;
        }
    }

    // Rotation at each vertex: order ±P_p (p ∈ ℓ) counterclockwise around
    // +L_ℓ; +P_p stands for the forward half-edge, −P_p for the backward one.
    let vcount = 2 * table.len();
    let mut out_of: Vec<BTreeMap<(usize, bool), usize>> = vec![BTreeMap::new(); vcount];
    for (h, e) in half_edges.iter().enumerate() {
        out_of[e.origin].insert((e.circle, e.forward), h);
    }
    let mut rotation = vec![Vec::new(); vcount];
    for (li, l) in table.lines().iter().enumerate() {
        let axes: Vec<VecTerm> = l.iter().map(|&p| VecTerm::Point(p)).collect();
        let order = angular_order(&engine, &line_vec[li], &axes)?;
        let ccw: Vec<(usize, bool)> = order.iter().map(|&(i, s)| (l[i], s)).collect();
        let plus: Vec<usize> = ccw.iter().map(|k| out_of[2 * li][k]).collect();
        let mut minus: Vec<usize> = ccw.iter().map(|k| out_of[2 * li + 1][k]).collect();
        minus.reverse();
        rotation[2 * li] = plus;
        rotation[2 * li + 1] = minus;
    }

    // next(h): outgoing edge just clockwise of twin(h) at the destination.
    let mut pos = vec![0usize; total];
    for r in &rotation {
        for (i, &h) in r.iter().enumerate() {
            pos[h] = i;
        }
    }
    for h in 0..total {
        let tw = half_edges[h].twin;
        let r = &rotation[half_edges[tw].origin];
        let i = pos[tw];
        half_edges[h].next = r[(i + r.len() - 1) % r.len()];
    }

    let mut faces = Vec::new();
    let mut face_size = Vec::new();
    let mut seen = vec![false; total];
    for start in 0..total {
        if seen[start] {
            continue;
        }
        let f = faces.len();
        let mut h = start;
        let mut size = 0;
        while !seen[h] {
            seen[h] = true;
            half_edges[h].face = f;
            size += 1;
            h = half_edges[h].next;
        }
        if h != start {
            return Err(Error::InvariantViolation("face walk did not close".into()));
        }
        faces.push(start);
        face_size.push(size);
    }

    Ok(SphericalDcel { table, half_edges, rotation, faces, face_size, antipode })
}

/// Counterclockwise order around `axis` of the antipodal pairs ±v for v in
/// `vecs` (all perpendicular to the axis). Returns (index, positive sign)
/// for the full cycle of 2·len entries.
fn angular_order(engine: &SignEngine, axis: &VecTerm, vecs: &[VecTerm]) -> Result<Vec<(usize, bool)>> {
    let det = |a: &VecTerm, b: &VecTerm| engine.sign(&ScalarTerm::Det(axis.clone(), a.clone(), b.clone()));
    let mut half: Vec<(usize, bool)> = Vec::with_capacity(vecs.len());
    for (i, v) in vecs.iter().enumerate() {
        let s = if i == 0 { Sign::Positive } else { det(&vecs[0], v)? };
        match s {
            Sign::Zero => return Err(Error::InvariantViolation("coincident dual vertices".into())),
            Sign::Positive => half.push((i, true)),
            Sign::Negative => half.push((i, false)),
        }
    }
    let err = RefCell::new(None);
    half.sort_by(|&(i, si), &(j, sj)| {
        if i == j {
            return Ordering::Equal;
        }
        if i == 0 {
            return Ordering::Less;
        }
        if j == 0 {
            return Ordering::Greater;
        }
        match det(&vecs[i], &vecs[j]) {
            Ok(s) => {
                let s = if si == sj { s } else { s.negate() };
                match s {
                    Sign::Positive => Ordering::Less,
                    Sign::Negative => Ordering::Greater,
                    Sign::Zero => Ordering::Equal,
                }
            }
            Err(e) => {
                err.borrow_mut().get_or_insert(e);
                Ordering::Equal
            }
        }
    });
    if let Some(e) = err.into_inner() {
        return Err(e);
    }
    let mut cycle = half.clone();
    cycle.extend(half.iter().map(|&(i, s)| (i, !s)));
    Ok(cycle)
}

/// One edge of the projective arrangement.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EdgeInfo {
    pub id: usize,
    /// the dual circle (point index) carrying the edge
    pub circle: usize,
    /// the connecting lines at either end
    pub lines: (usize, usize),
    pub good: bool,
    pub really_good: bool,
}

/// Good: both ends are 3-point lines (degree 6) and both faces triangles.
/// Really good: every edge at an end vertex or at a neighbour of one is good.
pub fn classify_edges(d: &SphericalDcel) -> Vec<EdgeInfo> {
    let he = &d.half_edges;
    let sizes: Vec<usize> = d.table.lines().iter().map(Vec::len).collect();
    let good_h: Vec<bool> = (0..he.len())
        .map(|h| {
            let e = &he[h];
            let tw = &he[e.twin];
            sizes[e.origin / 2] == 3 && sizes[tw.origin / 2] == 3 && d.face_size[e.face] == 3 && d.face_size[tw.face] == 3
        })
        .collect();
    let vertex_ok: Vec<bool> = d.rotation.iter().map(|r| r.iter().all(|&h| good_h[h])).collect();
    let really = |h: usize| -> bool {
        let mut near = HashSet::new();
        for v in [he[h].origin, d.destination(h)] {
            near.insert(v);
            for &o in &d.rotation[v] {
                near.insert(d.destination(o));
            }
        }
        near.into_iter().all(|v| vertex_ok[v])
    };
    // one representative per projective edge: forward half-edges on the
    // first half of each circle's cycle
    let mut out = Vec::new();
    for (h, e) in he.iter().enumerate() {
        if !e.forward || d.antipode[h] < h {
            continue;
        }
        let good = good_h[h];
        out.push(EdgeInfo {
            id: out.len(),
            circle: e.circle,
            lines: (e.origin / 2, d.destination(h) / 2),
            good,
            really_good: good && really(h),
        });
    }
    out
}

pub fn edges_csv(edges: &[EdgeInfo]) -> String {
    let mut s = String::from("edge,circle,line_a,line_b,good,really_good\n");
    for e in edges {
        let _ = writeln!(s, "{},{},{},{},{},{}", e.id, e.circle, e.lines.0, e.lines.1, e.good, e.really_good);
    }
    s
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ArrangementSummary {
    pub n: usize,
    #[serde(rename = "V")]
    pub v: u64,
    #[serde(rename = "E")]
    pub e: u64,
    #[serde(rename = "F")]
    pub f: u64,
    pub degree_hist: BTreeMap<usize, u64>,
    #[serde(rename = "M")]
    pub m: BTreeMap<usize, u64>,
    pub ordinary: u64,
    pub good_edges: u64,
    pub bad_edges: u64,
    pub really_good_edges: u64,
    #[serde(rename = "K_ratio")]
    pub k_ratio: f64,
    /// 16·K·n = 16·N_2
    pub bad_edge_bound: u64,
    pub bad_edge_bound_holds: bool,
    /// V − E + F − 1
    pub euler_residual: i64,
    /// N_2 − 3 − Σ(k−3)N_k − Σ(s−3)M_s, summed over k, s ≥ 4
    pub melchior_residual: i64,
    /// 2E − Σ s·M_s
    pub face_edge_residual: i64,
    /// 2E − Σ 2k·N_k
    pub vertex_edge_residual: i64,
    pub melchior_inequality_holds: bool,
}

impl ArrangementSummary {
    pub fn identities_hold(&self) -> bool {
        self.euler_residual == 0 && self.melchior_residual == 0 && self.face_edge_residual == 0 && self.vertex_edge_residual == 0
    }
}

pub fn summarize(d: &SphericalDcel) -> ArrangementSummary {
    let s = IncidenceSpectrum::from_table(&d.table);
    let n = d.table.point_count();
    let v = (d.vertex_count() / 2) as u64;
    let e = (d.half_edges.len() / 4) as u64;
    let f = (d.faces.len() / 2) as u64;
    let mut degree_hist = BTreeMap::new();
    for (&k, &c) in s.counts() {
        *degree_hist.entry(2 * k).or_insert(0) += c;
    }
    let mut m = BTreeMap::new();
    for &sz in &d.face_size {
        *m.entry(sz).or_insert(0u64) += 1;
    }
    for c in m.values_mut() {
        *c /= 2;
    }
    let edges = classify_edges(d);
    let good = edges.iter().filter(|x| x.good).count() as u64;
    let really_good = edges.iter().filter(|x| x.really_good).count() as u64;
    let n2 = s.ordinary();
    let excess_k: i64 = s.counts().iter().filter(|(&k, _)| k >= 4).map(|(&k, &c)| (k as i64 - 3) * c as i64).sum();
    let excess_s: i64 = m.iter().filter(|(&k, _)| k >= 4).map(|(&k, &c)| (k as i64 - 3) * c as i64).sum();
    let face_edges: i64 = m.iter().map(|(&k, &c)| k as i64 * c as i64).sum();
    ArrangementSummary {
        n,
        v,
        e,
        f,
        degree_hist,
        m,
        ordinary: n2,
        good_edges: good,
        bad_edges: e - good,
        really_good_edges: really_good,
        k_ratio: n2 as f64 / n as f64,
        bad_edge_bound: 16 * n2,
        bad_edge_bound_holds: e - good <= 16 * n2,
        euler_residual: v as i64 - e as i64 + f as i64 - 1,
        melchior_residual: n2 as i64 - 3 - excess_k - excess_s,
        face_edge_residual: 2 * e as i64 - face_edges,
        vertex_edge_residual: 2 * e as i64 - 2 * s.incidences() as i64,
        melchior_inequality_holds: n2 >= 3,
    }
}

/// Builds the arrangement and reports its counts and identity residuals.
pub fn melchior_audit(c: &Configuration) -> Result<ArrangementSummary> {
    melchior_audit_with(c, &BuildOptions::default())
}

pub fn melchior_audit_with(c: &Configuration, opts: &BuildOptions) -> Result<ArrangementSummary> {
    Ok(summarize(&build_dual_arrangement_with(c, opts)?))
}
