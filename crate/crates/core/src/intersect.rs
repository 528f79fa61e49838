//! Segment-segment crossings between sampled polylines.

use serde::{Deserialize, Serialize};

use crate::geom::Vec2;
use crate::polyline::Polyline;

/// A crossing between segment `(arc_a, seg_a)` of one polyline and `(arc_b, seg_b)` of another,
/// with the parameters interpolated at the crossing.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Seed {
    pub arc_a: usize,
    pub seg_a: usize,
    pub arc_b: usize,
    pub seg_b: usize,
    pub s: f64,
    pub t: f64,
    pub point: Vec2,
}

/// Crossing of segments `p0p1` and `q0q1` as fractions along each, endpoints included.
pub fn segment_crossing(p0: Vec2, p1: Vec2, q0: Vec2, q1: Vec2) -> Option<(f64, f64)> {
    segment_crossing_ends(p0, p1, q0, q1, true, true)
}

/// As [`segment_crossing`], with the far endpoint of each segment included only on request, so
/// a crossing through a shared polyline vertex is counted once.
pub fn segment_crossing_ends(p0: Vec2, p1: Vec2, q0: Vec2, q1: Vec2, p_end: bool, q_end: bool) -> Option<(f64, f64)> {
    let r = p1 - p0;
    let s = q1 - q0;
    let den = r.cross(s);
    if den == 0.0 {
        return None;
    }
    let w = q0 - p0;
    let u = w.cross(s) / den;
    let v = w.cross(r) / den;
    let within = |x: f64, end: bool| x >= 0.0 && (x < 1.0 || (end && x == 1.0));
    (within(u, p_end) && within(v, q_end)).then_some((u, v))
}

#[derive(Clone, Copy)]
struct Seg {
    arc: usize,
    idx: usize,
    lo: Vec2,
    hi: Vec2,
}

fn segments(p: &Polyline) -> Vec<Seg> {
    let mut out = Vec::new();
    for (arc, a) in p.arcs.iter().enumerate() {
        for (idx, w) in a.points.windows(2).enumerate() {
            out.push(Seg {
                arc,
                idx,
                lo: Vec2::new(w[0].x.min(w[1].x), w[0].y.min(w[1].y)),
                hi: Vec2::new(w[0].x.max(w[1].x), w[0].y.max(w[1].y)),
            });
        }
    }
    out
}

fn param_at(p: &Polyline, arc: usize, idx: usize, u: f64) -> f64 {
    let ps = &p.arcs[arc].params;
    if ps.len() > idx + 1 {
        ps[idx] + u * (ps[idx + 1] - ps[idx])
    } else {
        idx as f64 + u
    }
}

/// All crossings between `a` and `b`. When `a == b` the search is a self-intersection search:
/// each unordered segment pair is tested once and neighbours on the same arc are skipped.
///
/// Candidate pairs come from a sweep over x-extents, followed by a y-extent check.
pub fn polyline_oracle(a: &Polyline, b: &Polyline) -> Vec<Seed> {
    let same = a == b;
    let sa = segments(a);
    let sb = if same { Vec::new() } else { segments(b) };

    // (xmin, set, index); set 0 is `a`, set 1 is `b`.
    let mut events: Vec<(f64, u8, usize)> = sa.iter().enumerate().map(|(i, s)| (s.lo.x, 0, i)).collect();
    events.extend(sb.iter().enumerate().map(|(i, s)| (s.lo.x, 1, i)));
    events.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.cmp(&y.1)).then(x.2.cmp(&y.2)));

    let get = |set: u8, i: usize| if set == 0 { &sa[i] } else { &sb[i] };
    let mut active: [Vec<usize>; 2] = [Vec::new(), Vec::new()];
    let mut seeds = Vec::new();
    for &(x, set, i) in &events {
        for k in 0..2u8 {
            active[k as usize].retain(|&j| get(k, j).hi.x >= x);
        }
        let cur = get(set, i);
        let other = if same { 0 } else { 1 - set };
        for &j in &active[other as usize] {
            let o = get(other, j);
            if o.hi.y < cur.lo.y || o.lo.y > cur.hi.y {
                continue;
            }
            let (mut sa_seg, mut sb_seg) = if set == 0 { (cur, o) } else { (o, cur) };
            // In self mode compute from the earlier segment, as the brute-force search does.
            if same && (sa_seg.arc, sa_seg.idx) > (sb_seg.arc, sb_seg.idx) {
                std::mem::swap(&mut sa_seg, &mut sb_seg);
            }
            if same && sa_seg.arc == sb_seg.arc && sa_seg.idx.abs_diff(sb_seg.idx) <= 1 {
                continue;
            }
            let pa = &a.arcs[sa_seg.arc].points;
            let pb = &b.arcs[sb_seg.arc].points;
            let Some((u, v)) = segment_crossing_ends(
                pa[sa_seg.idx],
                pa[sa_seg.idx + 1],
                pb[sb_seg.idx],
                pb[sb_seg.idx + 1],
                sa_seg.idx + 2 == pa.len(),
                sb_seg.idx + 2 == pb.len(),
            ) else {
                continue;
            };
            let point = pa[sa_seg.idx].lerp(pa[sa_seg.idx + 1], u);
            seeds.push(Seed {
                arc_a: sa_seg.arc,
                seg_a: sa_seg.idx,
                arc_b: sb_seg.arc,
                seg_b: sb_seg.idx,
                s: param_at(a, sa_seg.arc, sa_seg.idx, u),
                t: param_at(b, sb_seg.arc, sb_seg.idx, v),
                point,
            });
        }
        active[set as usize].push(i);
    }
    seeds.sort_by_key(|x| (x.arc_a, x.seg_a, x.arc_b, x.seg_b));
    seeds
}

/// Quadratic reference implementation of [`polyline_oracle`].
pub fn polyline_oracle_brute(a: &Polyline, b: &Polyline) -> Vec<Seed> {
    let same = a == b;
    let mut seeds = Vec::new();
    for (ia, arc_a) in a.arcs.iter().enumerate() {
        for (ib, arc_b) in b.arcs.iter().enumerate() {
            if same && ib < ia {
                continue;
            }
            for ka in 0..arc_a.len().saturating_sub(1) {
                for kb in 0..arc_b.len().saturating_sub(1) {
                    if same && ia == ib && kb <= ka + 1 {
                        continue;
                    }
                    let (p, q) = (&arc_a.points, &arc_b.points);
                    let ends = (ka + 2 == p.len(), kb + 2 == q.len());
                    if let Some((u, v)) = segment_crossing_ends(p[ka], p[ka + 1], q[kb], q[kb + 1], ends.0, ends.1) {
                        seeds.push(Seed {
                            arc_a: ia,
                            seg_a: ka,
                            arc_b: ib,
                            seg_b: kb,
                            s: param_at(a, ia, ka, u),
                            t: param_at(b, ib, kb, v),
                            point: p[ka].lerp(p[ka + 1], u),
                        });
                    }
                }
            }
        }
    }
    seeds
}
