//! Explicit inverse mean curvature flow `dX/dtau = -N/H` on sampled grids,
//! and deviation of the evolved grid from the homothety `exp(eps C tau) X0`.

use argmin::core::{CostFunction, Executor, State, TerminationReason, TerminationStatus};
use argmin::solver::neldermead::NelderMead;

use crate::error::{Error, Result};
use crate::mink::LVec3;
use crate::ruled::{Orientation, Partials, RuledSurface, DEFAULT_TAU_H, DEFAULT_TAU_ND};

/// Nodes excluded from diagnostics along each edge of a grid.
pub const MARGIN: usize = 2;

/// Surface samples on a uniform tensor grid, stored row-major in `s`.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleGrid {
    pub s_nodes: Vec<f64>,
    pub t_nodes: Vec<f64>,
    pub points: Vec<LVec3>,
    pub time: f64,
}

fn check_uniform(name: &str, v: &[f64]) -> Result<f64> {
    if v.len() < 2 * MARGIN + 1 {
        return Err(Error::Grid(format!("{name} needs at least {} nodes, got {}", 2 * MARGIN + 1, v.len())));
    }
    let h = (v[v.len() - 1] - v[0]) / (v.len() - 1) as f64;
    if !(h > 0.0) {
        return Err(Error::Grid(format!("{name} nodes must be strictly increasing")));
    }
    for (i, w) in v.windows(2).enumerate() {
        if ((w[1] - w[0]) - h).abs() > 1e-9 * h {
            return Err(Error::Grid(format!("{name} spacing is not uniform at node {i}")));
        }
    }
    Ok(h)
}

impl SampleGrid {
    pub fn new(s_nodes: Vec<f64>, t_nodes: Vec<f64>, points: Vec<LVec3>, time: f64) -> Result<Self> {
        check_uniform("s", &s_nodes)?;
        check_uniform("t", &t_nodes)?;
        if points.len() != s_nodes.len() * t_nodes.len() {
            return Err(Error::Grid(format!(
                "expected {} points, got {}",
                s_nodes.len() * t_nodes.len(),
                points.len()
            )));
        }
        Ok(SampleGrid {
            s_nodes,
            t_nodes,
            points,
            time,
        })
    }

    /// Sample `surf` at the tensor product of the nodes, at time 0.
    pub fn from_surface(surf: &RuledSurface, s_nodes: Vec<f64>, t_nodes: Vec<f64>) -> Result<Self> {
        let mut points = Vec::with_capacity(s_nodes.len() * t_nodes.len());
        for &s in &s_nodes {
            for &t in &t_nodes {
                let p = surf.position(s, t);
                if !p.is_finite() {
                    return Err(Error::NonFinite { x: p.x, y: p.y, z: p.z });
                }
                points.push(p);
            }
        }
        SampleGrid::new(s_nodes, t_nodes, points, 0.0)
    }

    pub fn ns(&self) -> usize {
        self.s_nodes.len()
    }

    pub fn nt(&self) -> usize {
        self.t_nodes.len()
    }

    pub fn ds(&self) -> f64 {
        (self.s_nodes[self.ns() - 1] - self.s_nodes[0]) / (self.ns() - 1) as f64
    }

    pub fn dt(&self) -> f64 {
        (self.t_nodes[self.nt() - 1] - self.t_nodes[0]) / (self.nt() - 1) as f64
    }

    #[inline]
    pub fn idx(&self, i: usize, j: usize) -> usize {
        i * self.nt() + j
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> LVec3 {
        self.points[self.idx(i, j)]
    }

    pub fn is_interior(&self, i: usize, j: usize) -> bool {
        i >= MARGIN && j >= MARGIN && i + MARGIN < self.ns() && j + MARGIN < self.nt()
    }

    /// Interior node indices, row-major.
    pub fn interior(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (MARGIN..self.ns() - MARGIN).flat_map(move |i| (MARGIN..self.nt() - MARGIN).map(move |j| (i, j)))
    }

    /// Every point multiplied by `factor`, stamped with `time`.
    pub fn scaled(&self, factor: f64, time: f64) -> Self {
        SampleGrid {
            points: self.points.iter().map(|p| *p * factor).collect(),
            time,
            ..self.clone()
        }
    }

    fn min_cell_diagonal(&self) -> f64 {
        let mut m = f64::INFINITY;
        for i in 0..self.ns() - 1 {
            for j in 0..self.nt() - 1 {
                m = m.min(self.at(i + 1, j + 1).euclid_dist(&self.at(i, j)));
            }
        }
        m
    }
}

/// Finite-difference stencil for the grid partials.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Stencil {
    /// Second-order centred differences.
    Central2,
    /// Fourth-order centred differences.
    #[default]
    Central4,
}

const D1_2: [f64; 5] = [0.0, -0.5, 0.0, 0.5, 0.0];
const D2_2: [f64; 5] = [0.0, 1.0, -2.0, 1.0, 0.0];
const D1_4: [f64; 5] = [1.0 / 12.0, -8.0 / 12.0, 0.0, 8.0 / 12.0, -1.0 / 12.0];
const D2_4: [f64; 5] = [-1.0 / 12.0, 16.0 / 12.0, -30.0 / 12.0, 16.0 / 12.0, -1.0 / 12.0];

impl Stencil {
    fn weights(self) -> (&'static [f64; 5], &'static [f64; 5]) {
        match self {
            Stencil::Central2 => (&D1_2, &D2_2),
            Stencil::Central4 => (&D1_4, &D2_4),
        }
    }
}

/// FD partials at an interior node.
pub fn grid_partials(g: &SampleGrid, i: usize, j: usize, stencil: Stencil) -> Partials {
    let (d1, d2) = stencil.weights();
    let (hs, ht) = (g.ds(), g.dt());
    let mut p = Partials {
        x: g.at(i, j),
        xs: LVec3::ZERO,
        xt: LVec3::ZERO,
        xss: LVec3::ZERO,
        xst: LVec3::ZERO,
        xtt: LVec3::ZERO,
    };
    for k in 0..5 {
        let (ik, jk) = (i + k - 2, j + k - 2);
        let (ps, pt) = (g.at(ik, j), g.at(i, jk));
        p.xs += ps * (d1[k] / hs);
        p.xss += ps * (d2[k] / (hs * hs));
        p.xt += pt * (d1[k] / ht);
        p.xtt += pt * (d2[k] / (ht * ht));
        for l in 0..5 {
            let w = d1[k] * d1[l];
            if w != 0.0 {
                p.xst += g.at(ik, j + l - 2) * (w / (hs * ht));
            }
        }
    }
    p
}

/// Normal, mean curvature and causal sign at a node.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NodeGeometry {
    pub n: LVec3,
    pub h: f64,
    pub eps: f64,
}

/// Geometry at every interior node, row-major over the interior block.
pub fn grid_geometry(g: &SampleGrid, stencil: Stencil, tau_nd: f64) -> Result<Vec<NodeGeometry>> {
    g.interior()
        .map(|(i, j)| {
            let p = grid_partials(g, i, j, stencil);
            let (n, h) = p
                .normal(Orientation::Positive, tau_nd)
                .zip(p.mean_curvature(Orientation::Positive, tau_nd))
                .ok_or_else(|| Error::DegenerateNode {
                    i,
                    j,
                    disc: p.first_form().disc,
                })?;
            Ok(NodeGeometry { n: n.n, h, eps: n.eps })
        })
        .collect()
}

/// Largest `|C <N, X> H + 1|` over interior nodes: the soliton equation
/// evaluated with grid partials.
pub fn grid_soliton_residual(g: &SampleGrid, c: f64, stencil: Stencil, tau_nd: f64) -> Result<f64> {
    let geo = grid_geometry(g, stencil, tau_nd)?;
    Ok(g.interior()
        .zip(geo)
        .map(|((i, j), n)| (c * n.n.dot(&g.at(i, j)) * n.h + 1.0).abs())
        .fold(0.0, f64::max))
}

/// Treatment of the `MARGIN` outer rings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Boundary {
    /// Kept at their initial positions.
    Frozen,
    /// Moved by the exact homothety `exp(exponent * tau)` of the initial grid.
    Homothety { exponent: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlowOptions {
    pub dt: f64,
    pub steps: usize,
    pub stencil: Stencil,
    pub boundary: Boundary,
    /// Keep every `record_every`-th grid (the initial and final grids are
    /// always kept).
    pub record_every: usize,
    pub tau_nd: f64,
    pub tau_h: f64,
}

impl FlowOptions {
    pub fn new(dt: f64, steps: usize, boundary: Boundary) -> Self {
        FlowOptions {
            dt,
            steps,
            stencil: Stencil::default(),
            boundary,
            record_every: 1,
            tau_nd: DEFAULT_TAU_ND,
            tau_h: DEFAULT_TAU_H,
        }
    }
}

/// Explicit Euler steps `X <- X - (dt/H) N` at interior nodes.
///
/// Each step is rejected if `max |dt/H|` exceeds half the smallest cell
/// diagonal.
pub fn evolve(g0: &SampleGrid, opts: &FlowOptions) -> Result<Vec<SampleGrid>> {
    if !(opts.dt > 0.0 && opts.dt.is_finite()) {
        return Err(Error::Param(format!("time step must be positive, got {}", opts.dt)));
    }
    if opts.record_every == 0 {
        return Err(Error::Param("record_every must be positive".into()));
    }
    let mut out = vec![g0.clone()];
    let mut cur = g0.clone();
    for step in 1..=opts.steps {
        let geo = grid_geometry(&cur, opts.stencil, opts.tau_nd)?;
        let limit = 0.5 * cur.min_cell_diagonal();
        let mut worst = 0.0f64;
        for ((i, j), n) in cur.interior().zip(&geo) {
            if n.h.abs() <= opts.tau_h {
                return Err(Error::ZeroMeanCurvatureNode { step, i, j, h: n.h });
            }
            worst = worst.max((opts.dt / n.h).abs());
        }
        if worst > limit {
            return Err(Error::StepTooLarge {
                step,
                displacement: worst,
                limit,
            });
        }
        let time = g0.time + step as f64 * opts.dt;
        let mut next = match opts.boundary {
            Boundary::Frozen => cur.clone(),
            Boundary::Homothety { exponent } => g0.scaled((exponent * (time - g0.time)).exp(), time),
        };
        next.time = time;
        for ((i, j), n) in cur.interior().zip(&geo) {
            let k = cur.idx(i, j);
            next.points[k] = cur.points[k] - n.n * (opts.dt / n.h);
        }
        if step % opts.record_every == 0 || step == opts.steps {
            out.push(next.clone());
        }
        cur = next;
    }
    Ok(out)
}

/// Deviation of a trajectory from the homothety of a reference surface.
#[derive(Debug, Clone, PartialEq)]
pub struct FlowReport {
    pub times: Vec<f64>,
    /// Largest interior point-to-surface distance at each time.
    pub hausdorff_like_dev: Vec<f64>,
    /// Largest `|phi H(tau) - H(0)|` over interior nodes at each time.
    pub max_h_drift: Vec<f64>,
    /// Interior nodes whose projection did not converge, per time.
    pub projection_failures: Vec<usize>,
}

impl FlowReport {
    pub fn terminal_deviation(&self) -> f64 {
        self.hausdorff_like_dev.last().copied().unwrap_or(f64::NAN)
    }
}

/// Cells searched on each side of the source parameters.
pub const PROJECTION_CELLS: f64 = 3.0;

struct Distance<'a> {
    surf: &'a RuledSurface,
    factor: f64,
    p: LVec3,
    s_box: (f64, f64),
    t_box: (f64, f64),
}

impl CostFunction for Distance<'_> {
    type Param = Vec<f64>;
    type Output = f64;

    fn cost(&self, x: &Self::Param) -> std::result::Result<f64, argmin::core::Error> {
        let s = x[0].clamp(self.s_box.0, self.s_box.1);
        let t = x[1].clamp(self.t_box.0, self.t_box.1);
        let q = self.surf.position(s, t) * self.factor;
        let d = self.p.euclid_dist(&q);
        Ok(if d.is_finite() { d } else { f64::INFINITY })
    }
}

/// Euclidean distance from `p` to `factor * surf`, searched in a box of
/// `PROJECTION_CELLS` cells around `(s, t)`. `None` if the search fails.
pub fn project_distance(surf: &RuledSurface, factor: f64, p: LVec3, s: f64, t: f64, hs: f64, ht: f64) -> Option<f64> {
    let (ws, wt) = (PROJECTION_CELLS * hs, PROJECTION_CELLS * ht);
    let cost = Distance {
        surf,
        factor,
        p,
        s_box: ((s - ws).max(surf.s_domain.lo), (s + ws).min(surf.s_domain.hi)),
        t_box: ((t - wt).max(surf.t_domain.lo), (t + wt).min(surf.t_domain.hi)),
    };
    let start = cost.cost(&vec![s, t]).ok()?;
    if start == 0.0 {
        return Some(0.0);
    }
    let simplex = vec![vec![s, t], vec![s + 0.5 * hs, t], vec![s, t + 0.5 * ht]];
    let solver = NelderMead::new(simplex).with_sd_tolerance(1e-15).ok()?;
    let res = Executor::new(cost, solver).configure(|st| st.max_iters(1000)).run().ok()?;
    let st = res.state();
    let converged = matches!(
        st.get_termination_status(),
        TerminationStatus::Terminated(TerminationReason::SolverConverged)
    );
    let best = st.get_best_cost();
    (converged && best.is_finite()).then_some(best.min(start))
}

/// Compare every grid of `traj` with `exp(exponent * tau) * x0`, over
/// interior nodes. Node `(i, j)` is projected near its initial parameters.
pub fn homothety_deviation(traj: &[SampleGrid], x0: &RuledSurface, exponent: f64, stencil: Stencil, tau_nd: f64) -> Result<FlowReport> {
    let first = traj.first().ok_or_else(|| Error::Grid("empty trajectory".into()))?;
    let h0: Vec<f64> = grid_geometry(first, stencil, tau_nd)?.iter().map(|n| n.h).collect();
    let mut rep = FlowReport {
        times: vec![],
        hausdorff_like_dev: vec![],
        max_h_drift: vec![],
        projection_failures: vec![],
    };
    for g in traj {
        let tau = g.time - first.time;
        let phi = (exponent * tau).exp();
        let (hs, ht) = (g.ds(), g.dt());
        let mut dev = 0.0f64;
        let mut failures = 0;
        for (i, j) in g.interior() {
            match project_distance(x0, phi, g.at(i, j), g.s_nodes[i], g.t_nodes[j], hs, ht) {
                Some(d) => dev = dev.max(d),
                None => failures += 1,
            }
        }
        let drift = grid_geometry(g, stencil, tau_nd)?
            .iter()
            .zip(&h0)
            .map(|(n, h)| (phi * n.h - h).abs())
            .fold(0.0, f64::max);
        rep.times.push(g.time);
        rep.hausdorff_like_dev.push(dev);
        rep.max_h_drift.push(drift);
        rep.projection_failures.push(failures);
    }
    Ok(rep)
}

/// Exact homothetic trajectory of `g0` at the given times.
pub fn homothety_replay(g0: &SampleGrid, exponent: f64, times: &[f64]) -> Vec<SampleGrid> {
    times.iter().map(|&t| g0.scaled((exponent * (t - g0.time)).exp(), t)).collect()
}

/// `dev(dt) / dev(dt/2)`; close to 2 for a first-order scheme.
pub fn richardson_ratio(coarse: f64, fine: f64) -> f64 {
    coarse / fine
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::{Curve, Interval};
    use crate::jet::{Jet, VJet};

    fn iv(a: f64, b: f64) -> Interval {
        Interval::new(a, b).unwrap()
    }

    fn circle_cylinder() -> RuledSurface {
        let g = Curve::analytic(iv(-4.0, 4.0), 4, |s| VJet::new(s.cos(), s.sin(), Jet::constant(0.0)));
        RuledSurface::new(g, Curve::constant(iv(-4.0, 4.0), LVec3::E3), iv(-4.0, 4.0), iv(-2.0, 2.0))
    }

    fn hyperbola_cylinder() -> RuledSurface {
        let g = Curve::analytic(iv(-3.0, 3.0), 4, |s| VJet::new(Jet::constant(0.0), s.sinh(), s.cosh()));
        RuledSurface::new(g, Curve::constant(iv(-3.0, 3.0), LVec3::E1), iv(-3.0, 3.0), iv(-2.0, 2.0))
    }

    fn grid(surf: &RuledSurface, s: (f64, f64, usize), t: (f64, f64, usize)) -> SampleGrid {
        SampleGrid::from_surface(surf, iv(s.0, s.1).linspace(s.2), iv(t.0, t.1).linspace(t.2)).unwrap()
    }

    #[test]
    fn grid_geometry_examples() {
        let g = grid(&circle_cylinder(), (-1.0, 1.0, 41), (-1.0, 1.0, 41));
        for st in [Stencil::Central2, Stencil::Central4] {
            for n in grid_geometry(&g, st, 1e-9).unwrap() {
                assert!((n.h + 0.5).abs() < 2e-3);
                assert_eq!(n.eps, 1.0);
            }
        }
        let g = grid(&hyperbola_cylinder(), (-1.0, 1.0, 41), (-1.0, 1.0, 41));
        for n in grid_geometry(&g, Stencil::Central2, 1e-9).unwrap() {
            assert!((n.h.abs() - 0.5).abs() < 2e-3);
        }
        let d = iv(-1.0, 1.0);
        let plane = RuledSurface::new(Curve::line(d, LVec3::ZERO, LVec3::E1), Curve::constant(d, LVec3::E2), d, d);
        for n in grid_geometry(&grid(&plane, (-1.0, 1.0, 9), (-1.0, 1.0, 9)), Stencil::Central2, 1e-9).unwrap() {
            assert!(n.h.abs() < 1e-10);
        }
    }

    #[test]
    fn degenerate_node_is_reported() {
        let d = iv(-1.0, 1.0);
        let plane = RuledSurface::new(Curve::line(d, LVec3::ZERO, LVec3::E1), Curve::constant(d, LVec3::new(0.0, 1.0, 1.0)), d, d);
        let e = grid_geometry(&grid(&plane, (-1.0, 1.0, 7), (-1.0, 1.0, 7)), Stencil::Central4, 1e-9).unwrap_err();
        assert!(matches!(e, Error::DegenerateNode { i: 2, j: 2, .. }));
    }

    #[test]
    fn grid_validation() {
        assert!(matches!(SampleGrid::new(vec![0.0, 1.0, 3.0, 4.0, 5.0], vec![0.0, 1.0, 2.0, 3.0, 4.0], vec![LVec3::ZERO; 25], 0.0), Err(Error::Grid(_))));
        assert!(matches!(SampleGrid::new(vec![0.0, 1.0, 2.0], vec![0.0, 1.0, 2.0], vec![LVec3::ZERO; 9], 0.0), Err(Error::Grid(_))));
    }

    #[test]
    fn replay_has_zero_deviation() {
        let surf = circle_cylinder();
        let g0 = grid(&surf, (-1.0, 1.0, 21), (-2.0, 2.0, 5));
        let traj = homothety_replay(&g0, 2.0, &[0.0, 0.05, 0.1]);
        let rep = homothety_deviation(&traj, &surf, 2.0, Stencil::Central4, 1e-9).unwrap();
        assert!(rep.hausdorff_like_dev.iter().all(|d| *d <= 1e-12));
        assert!(rep.max_h_drift.iter().all(|d| *d <= 1e-9));
    }

    #[test]
    fn step_guard() {
        let g0 = grid(&circle_cylinder(), (-1.0, 1.0, 21), (-2.0, 2.0, 5));
        let e = evolve(&g0, &FlowOptions::new(0.5, 1, Boundary::Frozen)).unwrap_err();
        assert!(matches!(e, Error::StepTooLarge { step: 1, .. }));
    }
}
