//! Plane and cylinder fitting for surface-consistency statistics.
//!
//! The cylinder model uses an axis point `C`, a non-unit axis vector `V` and
//! `s = 1/(r|V|)²`. With `D = X − C` and `q = |V|²|D|² − (V·D)²` (which is
//! `|V|²` times the squared distance of `X` from the axis) the cost is
//! `E = Σ (s·q − 1)²`.

use nalgebra::{Matrix3, SMatrix, SVector, SymmetricEigen, Vector3};

use crate::{Error, Result};

pub type Vec3 = Vector3<f64>;

#[derive(Clone, Debug, PartialEq)]
pub struct PlaneFit {
    /// Unit normal, oriented toward +z (ties: +y, then +x).
    pub normal: Vec3,
    pub centroid: Vec3,
    /// Sum of squared perpendicular distances.
    pub sse: f64,
}

impl PlaneFit {
    pub fn distance(&self, p: &Vec3) -> f64 {
        self.normal.dot(&(p - self.centroid))
    }
}

/// Total least squares plane through the least-variance principal axis.
pub fn fit_plane_tls(points: &[Vec3]) -> Result<PlaneFit> {
    if points.len() < 3 {
        return Err(Error::Degenerate(format!(
            "plane fit needs at least 3 points, got {}",
            points.len()
        )));
    }
    let n = points.len() as f64;
    let centroid = points.iter().sum::<Vec3>() / n;
    let mut scatter = Matrix3::zeros();
    for p in points {
        let d = p - centroid;
        scatter += d * d.transpose();
    }
    let eig = SymmetricEigen::new(scatter);
    let mut order = [0usize, 1, 2];
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let (lo, mid, hi) = (
        eig.eigenvalues[order[0]],
        eig.eigenvalues[order[1]],
        eig.eigenvalues[order[2]],
    );
    if !(hi > 0.0) || mid <= hi * 1e-24 {
        return Err(Error::Degenerate(
            "points are collinear or coincident; plane is undefined".into(),
        ));
    }
    let mut normal: Vec3 = eig.eigenvectors.column(order[0]).into();
    normal.normalize_mut();
    orient_positive(&mut normal);
    let sse = points
        .iter()
        .map(|p| normal.dot(&(p - centroid)).powi(2))
        .sum::<f64>();
    debug_assert!(lo >= -1e-9 * hi);
    Ok(PlaneFit {
        normal,
        centroid,
        sse,
    })
}

fn orient_positive(v: &mut Vec3) {
    let flip = if v.z != 0.0 {
        v.z < 0.0
    } else if v.y != 0.0 {
        v.y < 0.0
    } else {
        v.x < 0.0
    };
    if flip {
        *v = -*v;
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CylinderFit {
    /// Point on the axis.
    pub c: Vec3,
    /// Axis direction, not necessarily unit length.
    pub v: Vec3,
    /// `1/(r|V|)²`.
    pub s: f64,
    pub r: f64,
    /// Final cost.
    pub residual: f64,
    pub iterations: usize,
}

impl CylinderFit {
    /// Builds a parameter set from an axis and radius; `residual` is left at 0.
    pub fn from_axis(c: Vec3, v: Vec3, r: f64) -> Result<Self> {
        let vv = v.norm_squared();
        if !(vv > 0.0) || !(r > 0.0) {
            return Err(Error::invalid("cylinder needs a non-zero axis and positive radius"));
        }
        Ok(Self {
            c,
            v,
            s: 1.0 / (r * r * vv),
            r,
            residual: 0.0,
            iterations: 0,
        })
    }

    /// Unit axis direction.
    pub fn axis(&self) -> Vec3 {
        self.v.normalize()
    }
}

fn radius_of(v: &Vec3, s: f64) -> f64 {
    1.0 / (v.norm() * s.sqrt())
}

fn check_params(v: &Vec3, s: f64) -> Result<()> {
    if !(v.norm_squared() > 0.0) {
        return Err(Error::invalid("cylinder axis vector is zero"));
    }
    if !(s > 0.0) {
        return Err(Error::invalid(format!("cylinder scale s must be positive, got {s}")));
    }
    Ok(())
}

fn q_of(c: &Vec3, v: &Vec3, x: &Vec3) -> f64 {
    let d = x - c;
    v.norm_squared() * d.norm_squared() - v.dot(&d).powi(2)
}

pub fn cylinder_cost(c: &Vec3, v: &Vec3, s: f64, points: &[Vec3]) -> Result<f64> {
    check_params(v, s)?;
    Ok(points
        .iter()
        .map(|x| (s * q_of(c, v, x) - 1.0).powi(2))
        .sum())
}

type Params = SVector<f64, 7>;

fn pack(c: &Vec3, v: &Vec3, s: f64) -> Params {
    Params::from_column_slice(&[c.x, c.y, c.z, v.x, v.y, v.z, s])
}

fn unpack(p: &Params) -> (Vec3, Vec3, f64) {
    (
        Vec3::new(p[0], p[1], p[2]),
        Vec3::new(p[3], p[4], p[5]),
        p[6],
    )
}

/// Residual `s·q − 1` and its derivative with respect to `(C, V, s)`.
fn residual_row(c: &Vec3, v: &Vec3, s: f64, x: &Vec3) -> (f64, SVector<f64, 7>) {
    let d = x - c;
    let vv = v.norm_squared();
    let vd = v.dot(&d);
    let q = vv * d.norm_squared() - vd * vd;
    let dq_dc = -2.0 * (vv * d - vd * v);
    let dq_dv = 2.0 * d.norm_squared() * v - 2.0 * vd * d;
    let mut row = SVector::<f64, 7>::zeros();
    row.fixed_rows_mut::<3>(0).copy_from(&(s * dq_dc));
    row.fixed_rows_mut::<3>(3).copy_from(&(s * dq_dv));
    row[6] = q;
    (s * q - 1.0, row)
}

/// Analytic gradient of the cost with respect to `(Cx, Cy, Cz, Vx, Vy, Vz, s)`.
pub fn cylinder_gradient(c: &Vec3, v: &Vec3, s: f64, points: &[Vec3]) -> Result<[f64; 7]> {
    check_params(v, s)?;
    let mut g = SVector::<f64, 7>::zeros();
    for x in points {
        let (r, row) = residual_row(c, v, s, x);
        g += 2.0 * r * row;
    }
    Ok(g.into())
}

const MAX_ITERATIONS: usize = 200;
const REL_TOL: f64 = 1e-10;

/// Levenberg–Marquardt minimization of the cylinder cost from `init`.
///
/// Each accepted step rescales `V` back to its initial length (adjusting `s`
/// to match) and slides `C` along the axis back to the plane through the
/// initial `C`, so the two flat directions of the cost stay pinned.
pub fn fit_cylinder(points: &[Vec3], init: &CylinderFit) -> Result<CylinderFit> {
    if points.len() < 7 {
        return Err(Error::Degenerate(format!(
            "cylinder fit needs at least 7 points, got {}",
            points.len()
        )));
    }
    check_params(&init.v, init.s)?;
    let v_len = init.v.norm();
    let c0 = init.c;

    let normal_equations = |p: &Params| {
        let (c, v, s) = unpack(p);
        let mut jtj = SMatrix::<f64, 7, 7>::zeros();
        let mut jtr = SVector::<f64, 7>::zeros();
        let mut cost = 0.0;
        for x in points {
            let (r, row) = residual_row(&c, &v, s, x);
            jtj += row * row.transpose();
            jtr += r * row;
            cost += r * r;
        }
        (jtj, jtr, cost)
    };
    let cost_of = |p: &Params| {
        let (c, v, s) = unpack(p);
        points
            .iter()
            .map(|x| (s * q_of(&c, &v, x) - 1.0).powi(2))
            .sum::<f64>()
    };
    let regauge = |p: &Params| {
        let (c, v, s) = unpack(p);
        let k = v_len / v.norm();
        let (v, s) = (v * k, s / (k * k));
        let axis = v / v_len;
        let c = c - (c - c0).dot(&axis) * axis;
        pack(&c, &v, s)
    };
    let finish = |p: &Params, cost: f64, iterations: usize| {
        let (c, v, s) = unpack(p);
        CylinderFit {
            c,
            v,
            s,
            r: radius_of(&v, s),
            residual: cost,
            iterations,
        }
    };

    let mut p = pack(&init.c, &init.v, init.s);
    let mut lambda = 1e-3;
    let (mut jtj, mut jtr, mut cost) = normal_equations(&p);
    for iteration in 0..MAX_ITERATIONS {
        // residuals at rounding level: nothing left to fit
        if cost <= points.len() as f64 * 1e-28 || jtr.amax() == 0.0 {
            return Ok(finish(&p, cost, iteration));
        }
        let diag_floor = jtj.diagonal().amax() * 1e-12;
        loop {
            let mut a = jtj;
            for k in 0..7 {
                a[(k, k)] += lambda * jtj[(k, k)].max(diag_floor);
            }
            let step = a.cholesky().map(|ch| ch.solve(&(-jtr)));
            if let Some(step) = step {
                let candidate = regauge(&(p + step));
                let new_cost = cost_of(&candidate);
                if new_cost.is_finite() && new_cost < cost && candidate[6] > 0.0 {
                    let decrease = (cost - new_cost) / cost;
                    p = candidate;
                    lambda = (lambda / 10.0).max(1e-15);
                    (jtj, jtr, cost) = normal_equations(&p);
                    if decrease < REL_TOL {
                        return Ok(finish(&p, cost, iteration + 1));
                    }
                    break;
                }
            }
            lambda *= 10.0;
            if lambda > 1e16 {
                // no descent direction left: a local minimum to working precision
                return Ok(finish(&p, cost, iteration + 1));
            }
        }
    }
    Err(Error::NotConverged {
        iterations: MAX_ITERATIONS,
        cost,
        last: Box::new(finish(&p, cost, MAX_ITERATIONS)),
    })
}

/// Per-frame consistency statistics over a sequence of fitted direction
/// vectors and their fit errors.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FrameStats {
    /// Mean Euclidean distance of each unit vector from the mean unit vector.
    pub mean_distance: f64,
    pub distance_variance: f64,
    pub mean_sse: f64,
    pub sse_variance: f64,
}

impl FrameStats {
    /// Each statistic divided by the corresponding one of `baseline`.
    pub fn relative_to(&self, baseline: &FrameStats) -> FrameStats {
        FrameStats {
            mean_distance: self.mean_distance / baseline.mean_distance,
            distance_variance: self.distance_variance / baseline.distance_variance,
            mean_sse: self.mean_sse / baseline.mean_sse,
            sse_variance: self.sse_variance / baseline.sse_variance,
        }
    }
}

fn mean_and_variance(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var)
}

/// Vectors are normalized and sign-aligned with the first one (axis vectors
/// have no intrinsic sign). Variances use the `n − 1` denominator.
pub fn frame_stats(vectors: &[Vec3], sse: &[f64]) -> Result<FrameStats> {
    if vectors.len() < 2 {
        return Err(Error::invalid(format!(
            "frame statistics need at least 2 frames, got {}",
            vectors.len()
        )));
    }
    if vectors.len() != sse.len() {
        return Err(Error::invalid(format!(
            "{} vectors but {} sse values",
            vectors.len(),
            sse.len()
        )));
    }
    let first = vectors[0]
        .try_normalize(0.0)
        .ok_or_else(|| Error::invalid("zero direction vector"))?;
    let mut units = Vec::with_capacity(vectors.len());
    for v in vectors {
        let u = v
            .try_normalize(0.0)
            .ok_or_else(|| Error::invalid("zero direction vector"))?;
        units.push(if u.dot(&first) < 0.0 { -u } else { u });
    }
    let sum: Vec3 = units.iter().sum();
    let mean = sum
        .try_normalize(1e-12 * units.len() as f64)
        .ok_or_else(|| Error::Degenerate("direction vectors cancel; mean is undefined".into()))?;
    let dists: Vec<f64> = units.iter().map(|u| (u - mean).norm()).collect();
    let (mean_distance, distance_variance) = mean_and_variance(&dists);
    let (mean_sse, sse_variance) = mean_and_variance(sse);
    Ok(FrameStats {
        mean_distance,
        distance_variance,
        mean_sse,
        sse_variance,
    })
}
