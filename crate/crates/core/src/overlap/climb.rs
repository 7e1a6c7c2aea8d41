//! Multi-start hill climbing of `f(P, w)` over unit vectors orthogonal to the
//! keep-plane normals, optionally restricted to projections that keep
//! chosen properties strictly separable.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::data::LabeledPointSet;
use crate::error::{Error, Result};
use crate::geometry::{orthonormalize, project_points, OrthoBasis};
use crate::linalg::{self, dot, norm};
use crate::separability::strict_slack;
use crate::Tolerances;

use super::{f_value, OverlapSpec};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClimbOptions {
    pub starts: usize,
    pub seed: u64,
    /// Properties that must stay strictly separable after projection
    /// (zero-based).
    pub preserve: Vec<usize>,
    /// Central-difference step.
    pub fd_step: f64,
    pub initial_step: f64,
    pub min_step: f64,
    pub max_iter: usize,
    /// Angular radius of a maxima cluster, with `w` and `−w` identified.
    pub theta_cluster: f64,
    /// Random draws allowed when looking for a feasible start.
    pub max_start_draws: usize,
}

impl Default for ClimbOptions {
    fn default() -> Self {
        Self {
            starts: 20,
            seed: 0,
            preserve: Vec::new(),
            fd_step: 1e-5,
            initial_step: 0.1,
            min_step: 1e-8,
            max_iter: 2000,
            theta_cluster: 0.2,
            max_start_draws: 100_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MaximumCluster {
    /// Best member.
    pub w: Vec<f64>,
    pub value: f64,
    /// Start indices that ended in this cluster.
    pub members: Vec<usize>,
    pub min_value: f64,
    pub max_value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptResult {
    pub best: Vec<f64>,
    pub value: f64,
    pub starts: usize,
    pub maxima: Vec<MaximumCluster>,
    /// Final vector and value of every start.
    pub finals: Vec<(Vec<f64>, f64)>,
    /// Accepted values per start, non-decreasing.
    pub trace: Vec<Vec<f64>>,
}

/// The chart `(x/z, y/z)` for vectors in `R^3`; `None` when `z = 0`.
pub fn encode_chart(w: &[f64]) -> Option<(f64, f64)> {
    (w.len() == 3 && w[2] != 0.0).then(|| (w[0] / w[2], w[1] / w[2]))
}

struct Climber<'a> {
    data: &'a LabeledPointSet,
    spec: &'a OverlapSpec,
    domain: OrthoBasis,
    opts: &'a ClimbOptions,
    tol: &'a Tolerances,
}

impl Climber<'_> {
    fn retract(&self, w: &[f64]) -> Vec<f64> {
        let u = self.domain.project_onto(w);
        let n = norm(&u);
        linalg::scale(&u, 1.0 / n)
    }

    fn f(&self, w: &[f64]) -> Result<f64> {
        f_value(self.data, w, self.spec)
    }

    /// Smallest strict-separation slack over the preserved properties after
    /// projecting along `w`; positive means feasible.
    fn slack(&self, w: &[f64]) -> Result<f64> {
        if self.opts.preserve.is_empty() {
            return Ok(f64::INFINITY);
        }
        let basis = OrthoBasis::from_orthonormal(w.len(), vec![w.to_vec()], 1e-8)?;
        let projected = project_points(self.data.points(), &basis)?;
        let mut worst = f64::INFINITY;
        for &i in &self.opts.preserve {
            let (a, b) = self.data.split_indices(i);
            let pa: Vec<Vec<f64>> = a.iter().map(|&j| projected[j].clone()).collect();
            let pb: Vec<Vec<f64>> = b.iter().map(|&j| projected[j].clone()).collect();
            worst = worst.min(strict_slack(&pa, &pb)?);
        }
        Ok(worst)
    }

    fn feasible(&self, w: &[f64]) -> Result<bool> {
        Ok(self.slack(w)? > self.tol.lp)
    }

    fn tangent(&self, w: &[f64]) -> Vec<Vec<f64>> {
        let wb = OrthoBasis::from_orthonormal(w.len(), vec![w.to_vec()], 1e-6).expect("unit vector");
        let out: Vec<Vec<f64>> = self
            .domain
            .vectors()
            .iter()
            .map(|v| wb.project_out(v))
            .filter(|r| norm(r) > 1e-6)
            .collect();
        orthonormalize(&out, 1e-6).map(OrthoBasis::into_vectors).unwrap_or_default()
    }

    fn gradient<F: Fn(&[f64]) -> Result<f64>>(&self, w: &[f64], tangent: &[Vec<f64>], h: f64, fun: F) -> Result<Vec<f64>> {
        let mut g = vec![0.0; w.len()];
        for t in tangent {
            let mut plus = w.to_vec();
            linalg::axpy(h, t, &mut plus);
            let mut minus = w.to_vec();
            linalg::axpy(-h, t, &mut minus);
            let diff = (fun(&self.retract(&plus))? - fun(&self.retract(&minus))?) / (2.0 * h);
            linalg::axpy(diff, t, &mut g);
        }
        Ok(g)
    }

    fn start(&self, index: usize) -> Result<Vec<f64>> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.opts.seed);
        rng.set_stream(index as u64);
        for _ in 0..self.opts.max_start_draws {
            let coords: Vec<f64> = (0..self.domain.len()).map(|_| StandardNormal.sample(&mut rng)).collect();
            let Some(c) = linalg::normalized(&coords, 1e-12) else {
                continue;
            };
            let w = self.domain.lift(&c);
            if self.feasible(&w)? {
                return Ok(w);
            }
        }
        Err(Error::SamplingFailed {
            attempts: self.opts.max_start_draws,
        })
    }

    fn climb(&self, index: usize) -> Result<(Vec<f64>, f64, Vec<f64>)> {
        let mut w = self.start(index)?;
        let mut fw = self.f(&w)?;
        let mut trace = vec![fw];
        let mut step = self.opts.initial_step;
        let h = self.opts.fd_step;
        for _ in 0..self.opts.max_iter {
            if step < self.opts.min_step {
                break;
            }
            let tangent = self.tangent(&w);
            if tangent.is_empty() {
                break;
            }
            let g = self.gradient(&w, &tangent, h, |u| self.f(u))?;
            let Some(mut dir) = linalg::normalized(&g, 1e-14) else {
                break;
            };
            let mut slid = false;
            loop {
                let mut cand = w.clone();
                linalg::axpy(step, &dir, &mut cand);
                let cand = self.retract(&cand);
                let feasible = self.feasible(&cand)?;
                if feasible {
                    let fc = self.f(&cand)?;
                    if fc > fw {
                        w = cand;
                        fw = fc;
                        trace.push(fw);
                        step *= 2.0;
                        break;
                    }
                } else if !slid {
                    // Slide along the boundary: drop the component of the
                    // direction along the slack gradient.
                    slid = true;
                    let n = self.gradient(&w, &tangent, h, |u| self.slack(u))?;
                    if let Some(n) = linalg::normalized(&n, 1e-14) {
                        let mut t = dir.clone();
                        linalg::axpy(-dot(&t, &n), &n, &mut t);
                        if let Some(t) = linalg::normalized(&t, 1e-10) {
                            if dot(&t, &g) > 0.0 {
                                dir = t;
                                continue;
                            }
                        }
                    }
                }
                step /= 2.0;
                if step < self.opts.min_step {
                    break;
                }
            }
        }
        Ok((w, fw, trace))
    }
}

/// Multi-start hill climbing of `f(P, w)` over unit `w` orthogonal to
/// `keep_normals`, restricted to projections keeping the properties in
/// `opts.preserve` strictly separable. Starts run in parallel; each derives
/// its random stream from `(opts.seed, start index)`.
pub fn maximize_overlap(
    data: &LabeledPointSet,
    spec: &OverlapSpec,
    keep_normals: &[Vec<f64>],
    opts: &ClimbOptions,
    tol: &Tolerances,
) -> Result<OptResult> {
    spec.validate(data)?;
    if opts.starts == 0 {
        return Err(Error::BadParams("at least one start is required".into()));
    }
    for &i in &opts.preserve {
        data.property_count_check(i)?;
    }
    let d = data.dim();
    for v in keep_normals {
        if v.len() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: v.len(),
            });
        }
    }
    let domain = if keep_normals.is_empty() {
        OrthoBasis::empty(d).complement()
    } else {
        orthonormalize(keep_normals, tol.rank)?.complement()
    };
    if domain.is_empty() {
        return Err(Error::EmptySubspace);
    }
    let climber = Climber {
        data,
        spec,
        domain,
        opts,
        tol,
    };
    let runs: Vec<(Vec<f64>, f64, Vec<f64>)> = (0..opts.starts)
        .into_par_iter()
        .map(|i| climber.climb(i))
        .collect::<Result<_>>()?;

    let mut maxima: Vec<MaximumCluster> = Vec::new();
    let mut reps: Vec<Vec<f64>> = Vec::new();
    for (i, (w, v, _)) in runs.iter().enumerate() {
        let hit = reps
            .iter()
            .position(|r| dot(r, w).abs().min(1.0).acos() <= opts.theta_cluster);
        match hit {
            Some(c) => {
                let m = &mut maxima[c];
                m.members.push(i);
                m.min_value = m.min_value.min(*v);
                m.max_value = m.max_value.max(*v);
                if *v > m.value {
                    m.value = *v;
                    m.w = w.clone();
                }
            }
            None => {
                reps.push(w.clone());
                maxima.push(MaximumCluster {
                    w: w.clone(),
                    value: *v,
                    members: vec![i],
                    min_value: *v,
                    max_value: *v,
                });
            }
        }
    }
    maxima.sort_by(|a, b| b.value.total_cmp(&a.value));
    let best = maxima[0].w.clone();
    let value = maxima[0].value;
    Ok(OptResult {
        best,
        value,
        starts: opts.starts,
        maxima,
        finals: runs.iter().map(|(w, v, _)| (w.clone(), *v)).collect(),
        trace: runs.into_iter().map(|(_, _, t)| t).collect(),
    })
}
