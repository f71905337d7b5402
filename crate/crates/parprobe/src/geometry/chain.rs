//! Chain of balls along an arc: centers x₁, x₂, … with |x_{i+1} − x_i| = 2ρ̄,
//! each new center at the last arc parameter at distance 2ρ̄ from the
//! previous one, stopping once the target is within 2ρ̄.

use crate::{Error, Result};

/// Construct the chain. The arc is a polyline from the start point to
/// `target` (the final vertex must coincide with `target`).
pub fn chain_of_balls(arc: &[[f64; 2]], rho_bar: f64, target: [f64; 2]) -> Result<Vec<[f64; 2]>> {
    if arc.is_empty() {
        return Err(Error::EmptySet("chain_of_balls arc"));
    }
    if !(rho_bar > 0.0) {
        return Err(Error::Precondition(format!("rho_bar must be positive, got {rho_bar}")));
    }
    let last = arc[arc.len() - 1];
    let scale = rho_bar.max(1.0);
    if (last[0] - target[0]).hypot(last[1] - target[1]) > 1e-9 * scale {
        return Err(Error::Precondition("arc must end at the target point".into()));
    }
    if let Some((i, j)) = first_self_intersection(arc) {
        return Err(Error::Precondition(format!(
            "self-intersecting arc: segments {i} and {j} cross"
        )));
    }

    let step = 2.0 * rho_bar;
    let mut centers = vec![arc[0]];
    loop {
        let x = *centers.last().unwrap();
        if (x[0] - target[0]).hypot(x[1] - target[1]) < step {
            break;
        }
        let next = last_crossing(arc, x, step).ok_or_else(|| {
            Error::Precondition("arc never leaves the 2*rho_bar ball of the current center".into())
        })?;
        centers.push(next);
        if centers.len() > 4 * (arc_length(arc) / step).ceil() as usize + 8 {
            return Err(Error::Precondition("chain construction is not advancing".into()));
        }
    }

    // the max-parameter rule makes the radius-ρ̄ balls pairwise disjoint;
    // assert it anyway
    for i in 0..centers.len() {
        for j in i + 1..centers.len() {
            let d = (centers[i][0] - centers[j][0]).hypot(centers[i][1] - centers[j][1]);
            if d < step * (1.0 - 1e-9) {
                return Err(Error::Precondition(format!(
                    "chain invariant broken: centers {i} and {j} are {d:.6} < 2*rho_bar apart"
                )));
            }
        }
    }
    Ok(centers)
}

/// Indices of the first pair of non-adjacent segments that intersect, if any.
fn first_self_intersection(arc: &[[f64; 2]]) -> Option<(usize, usize)> {
    let m = arc.len().saturating_sub(1);
    for i in 0..m {
        for j in i + 2..m {
            if i == 0 && j == m - 1 && (arc[0][0] - arc[m][0]).hypot(arc[0][1] - arc[m][1]) < 1e-12 {
                continue; // closed curves are treated elsewhere
            }
            if segments_cross(arc[i], arc[i + 1], arc[j], arc[j + 1]) {
                return Some((i, j));
            }
        }
    }
    None
}

fn segments_cross(a: [f64; 2], b: [f64; 2], c: [f64; 2], d: [f64; 2]) -> bool {
    let orient = |p: [f64; 2], q: [f64; 2], r: [f64; 2]| {
        (q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0])
    };
    let o1 = orient(a, b, c);
    let o2 = orient(a, b, d);
    let o3 = orient(c, d, a);
    let o4 = orient(c, d, b);
    o1 * o2 < 0.0 && o3 * o4 < 0.0
}

pub fn arc_length(arc: &[[f64; 2]]) -> f64 {
    arc.windows(2)
        .map(|w| (w[1][0] - w[0][0]).hypot(w[1][1] - w[0][1]))
        .sum()
}

/// The point γ(t*) with t* = max{t : |γ(t) − x| = r}: scan segments from the
/// end and return the largest root in the first segment that has one.
fn last_crossing(arc: &[[f64; 2]], x: [f64; 2], r: f64) -> Option<[f64; 2]> {
    for w in arc.windows(2).rev() {
        let (a, b) = (w[0], w[1]);
        let d = [b[0] - a[0], b[1] - a[1]];
        let f = [a[0] - x[0], a[1] - x[1]];
        let qa = d[0] * d[0] + d[1] * d[1];
        if qa < 1e-300 {
            continue;
        }
        let qb = 2.0 * (f[0] * d[0] + f[1] * d[1]);
        let qc = f[0] * f[0] + f[1] * f[1] - r * r;
        let disc = qb * qb - 4.0 * qa * qc;
        if disc < 0.0 {
            continue;
        }
        let sq = disc.sqrt();
        for s in [(-qb + sq) / (2.0 * qa), (-qb - sq) / (2.0 * qa)] {
            if (-1e-12..=1.0 + 1e-12).contains(&s) {
                let s = s.clamp(0.0, 1.0);
                return Some([a[0] + s * d[0], a[1] + s * d[1]]);
            }
        }
    }
    None
}
