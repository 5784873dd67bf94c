//! Nodal sets of grid fields by marching squares in `(s, t)`.

#[cfg(not(feature = "std"))]
use num_traits::Float;

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::f64::consts::TAU;

use super::auxiliary::AuxiliaryField;
use super::fit::JetSampler;
use crate::error::{Error, Result};
use crate::geometry::ambient::Vec3;
use crate::pde::{PolarGrid, ScalarField};

/// Values below this fraction of the sup norm count as positive, so that
/// round-off cannot create spurious sign changes.
pub const DEAD_BAND: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct NodalSet {
    /// Zero curves as ambient points, in order along each curve.
    pub polylines: Vec<Vec<Vec3>>,
    /// The same curves in chart coordinates.
    pub chart_polylines: Vec<Vec<[f64; 2]>>,
    /// Whether each curve is closed.
    pub closed: Vec<bool>,
    pub boundary_zero_count: usize,
    /// Points where two or more zero curves meet.
    pub crossings: Vec<Vec3>,
}

pub fn trace_nodal_set(field: &AuxiliaryField) -> Result<NodalSet> {
    trace_zero_set(&field.values)
}

/// Zero set of any grid field.
pub fn trace_zero_set(field: &ScalarField) -> Result<NodalSet> {
    let g = &*field.grid;
    let sup = field.sup();
    if !(sup > 1e-300) || field.values.iter().all(|v| v.abs() <= DEAD_BAND * sup) {
        return Err(Error::IdenticallyZero);
    }
    let pos = |k: usize| field.values[k] >= -DEAD_BAND * sup;

    // Crossing points keyed by their edge; segments join two keys.
    let mut points: BTreeMap<(usize, usize), Vec3> = BTreeMap::new();
    let mut segments: Vec<((usize, usize), (usize, usize))> = Vec::new();
    let edge_point = |a: (usize, f64, f64), b: (usize, f64, f64), pts: &mut BTreeMap<(usize, usize), Vec3>| {
        let key = (a.0.min(b.0), a.0.max(b.0));
        pts.entry(key).or_insert_with(|| {
            let (va, vb) = (field.values[a.0], field.values[b.0]);
            let al = if va == vb { 0.5 } else { (va / (va - vb)).clamp(0.0, 1.0) };
            let s = a.1 + al * (b.1 - a.1);
            let t = a.2 + al * (b.2 - a.2);
            g.frame.point(s * g.domain.rho(t), t)
        });
        key
    };

    for j in 0..g.n_t {
        let jn = (j + 1) % g.n_t;
        let (t0, t1) = (g.t(j), g.t(j) + g.dt());
        // Pole fan triangle.
        let tri = [(0usize, 0.0, t0), (g.index(1, j), g.ds(), t0), (g.index(1, jn), g.ds(), t1)];
        let mut cut = Vec::new();
        for e in 0..3 {
            let (a, b) = (tri[e], tri[(e + 1) % 3]);
            if pos(a.0) != pos(b.0) {
                // The pole sits at s = 0 with the angle of its partner.
                let a = if a.0 == 0 { (0, 0.0, b.2) } else { a };
                let b = if b.0 == 0 { (0, 0.0, a.2) } else { b };
                cut.push(edge_point(a, b, &mut points));
            }
        }
        if cut.len() == 2 {
            segments.push((cut[0], cut[1]));
        }
        for i in 1..g.n_s {
            let (s0, s1) = (g.s(i), g.s(i + 1));
            let q = [
                (g.index(i, j), s0, t0),
                (g.index(i, jn), s0, t1),
                (g.index(i + 1, jn), s1, t1),
                (g.index(i + 1, j), s1, t0),
            ];
            let mut cut = [None; 4];
            let mut n = 0;
            for e in 0..4 {
                let (a, b) = (q[e], q[(e + 1) % 4]);
                if pos(a.0) != pos(b.0) {
                    cut[e] = Some(edge_point(a, b, &mut points));
                    n += 1;
                }
            }
            match n {
                2 => {
                    let c: Vec<_> = cut.iter().flatten().copied().collect();
                    segments.push((c[0], c[1]));
                }
                4 => {
                    let centre: f64 = q.iter().map(|c| field.values[c.0]).sum::<f64>() / 4.0;
                    let c = cut.map(|x| x.unwrap());
                    // Edge e runs from corner e to corner e+1.
                    if (centre >= -DEAD_BAND * sup) == pos(q[0].0) {
                        // Corners 0 and 2 connect through the centre.
                        segments.push((c[0], c[1]));
                        segments.push((c[2], c[3]));
                    } else {
                        segments.push((c[3], c[0]));
                        segments.push((c[1], c[2]));
                    }
                }
                _ => {}
            }
        }
    }

    let (polylines, closed) = chain(&points, &segments);
    let surf = g.domain.surface;
    let chart_polylines = polylines.iter().map(|l| l.iter().map(|x| surf.from_ambient(*x)).collect()).collect();

    let boundary_zero_count = boundary_sign_changes(g, &field.values, sup);
    let crossings = crossing_nodes(g, &pos);
    Ok(NodalSet { polylines, chart_polylines, closed, boundary_zero_count, crossings })
}

fn chain(
    points: &BTreeMap<(usize, usize), Vec3>,
    segments: &[((usize, usize), (usize, usize))],
) -> (Vec<Vec<Vec3>>, Vec<bool>) {
    let mut adj: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
    for (s, (a, b)) in segments.iter().enumerate() {
        adj.entry(*a).or_default().push(s);
        adj.entry(*b).or_default().push(s);
    }
    let mut used = alloc::vec![false; segments.len()];
    let mut lines = Vec::new();
    let mut closed = Vec::new();
    // Open curves start at vertices of odd degree, then the remaining loops.
    let starts: Vec<(usize, usize)> =
        adj.iter().filter(|(_, v)| v.len() % 2 == 1).map(|(k, _)| *k).chain(adj.keys().copied()).collect();
    for start in starts {
        while let Some(&s0) = adj[&start].iter().find(|s| !used[**s]) {
            let mut line = alloc::vec![points[&start]];
            let mut cur = start;
            let mut seg = s0;
            loop {
                used[seg] = true;
                let (a, b) = segments[seg];
                cur = if a == cur { b } else { a };
                line.push(points[&cur]);
                match adj[&cur].iter().find(|s| !used[**s]) {
                    Some(&s) => seg = s,
                    None => break,
                }
            }
            closed.push(cur == start && line.len() > 2);
            lines.push(line);
        }
    }
    (lines, closed)
}

/// Sign changes of the boundary ring values, cyclically.
pub fn boundary_sign_changes(g: &PolarGrid, values: &[f64], sup: f64) -> usize {
    let signs: Vec<bool> = (0..g.n_t).map(|j| values[g.index(g.n_s, j)] >= -DEAD_BAND * sup).collect();
    (0..g.n_t).filter(|&j| signs[j] != signs[(j + 1) % g.n_t]).count()
}

fn loop_sign_changes(nodes: &[usize], pos: &impl Fn(usize) -> bool) -> usize {
    let n = nodes.len();
    (0..n).filter(|&m| pos(nodes[m]) != pos(nodes[(m + 1) % n])).count()
}

/// Nodes around which the sign changes at least four times on the
/// surrounding cell loop, clustered within three mesh widths.
fn crossing_nodes(g: &PolarGrid, pos: &impl Fn(usize) -> bool) -> Vec<Vec3> {
    let mut hits = Vec::new();
    let ring1: Vec<usize> = (0..g.n_t).map(|j| g.index(1, j)).collect();
    if loop_sign_changes(&ring1, pos) >= 4 {
        hits.push(0);
    }
    for i in 1..g.n_s {
        for j in 0..g.n_t {
            let jp = (j + 1) % g.n_t;
            let jm = (j + g.n_t - 1) % g.n_t;
            let mut l = Vec::with_capacity(8);
            if i == 1 {
                l.push(0);
            } else {
                l.extend_from_slice(&[g.index(i - 1, jm), g.index(i - 1, j), g.index(i - 1, jp)]);
            }
            l.extend_from_slice(&[
                g.index(i, jp),
                g.index(i + 1, jp),
                g.index(i + 1, j),
                g.index(i + 1, jm),
                g.index(i, jm),
            ]);
            if loop_sign_changes(&l, pos) >= 4 {
                hits.push(g.index(i, j));
            }
        }
    }
    let surf = g.domain.surface;
    let mut out: Vec<Vec3> = Vec::new();
    for k in hits {
        let x = g.position(k);
        if out.iter().all(|y| surf.distance(*y, x) > 3.0 * g.h()) {
            out.push(x);
        }
    }
    out
}

/// Whether the zero set of `field` crosses itself at `x`: at least four sign
/// changes on a small metric circle about `x`.
pub fn crossing_at(field: &ScalarField, x: Vec3, radius: f64) -> bool {
    let s = JetSampler::new(&field.grid, &field.values);
    let frame = s.frame_at(x);
    let sup = field.sup();
    let n = 64;
    let signs: Vec<Option<bool>> = (0..n)
        .map(|k| {
            let phi = TAU * k as f64 / n as f64;
            let y = frame.exp([radius * phi.cos(), radius * phi.sin()]);
            s.jet_at(y).ok().map(|j| j.value >= -DEAD_BAND * sup)
        })
        .collect();
    if signs.iter().any(|v| v.is_none()) {
        return false;
    }
    (0..n).filter(|&k| signs[k] != signs[(k + 1) % n]).count() >= 4
}
