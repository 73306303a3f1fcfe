//! Seeded Monte Carlo experiments: single trials, parameter sweeps and
//! empirical threshold location.

use std::path::PathBuf;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cliques::{enumerate_k_cliques, enumerate_oriented_copies, enumerate_subgraph_copies, Motif, OrientationSpec};
use crate::components::{components_by_cross_edges, components_by_overlap, ComponentSummary};
use crate::error::{Error, Result};
use crate::graph::{gen_directed_gnp, gen_gnp};
use crate::seed::Seed;
use crate::theory::combinatorics::{binomial, PowerLaw};
use crate::theory::{self, orientation_type_matrix, ThresholdModel};

/// Refuse trials whose expected copy count exceeds this.
pub const MAX_PROJECTED_COPIES: f64 = 1e8;
/// Refuse edge-joined trials whose pairwise scan exceeds this many pairs.
pub const MAX_PAIR_SCANS: f64 = 1e9;

/// Environment variable overriding the worker count.
pub const THREADS_ENV: &str = "CPL_THREADS";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Variant {
    /// k-cliques sharing at least ell vertices.
    Shared,
    /// Copies of an orientation of K_k in the random digraph, sharing at least ell vertices.
    Oriented,
    /// Vertex-disjoint k-cliques with at least ell edges between them.
    EdgeJoined,
    /// 4-cycles sharing at least ell vertices.
    MotifC4,
}

impl Variant {
    pub fn name(self) -> &'static str {
        match self {
            Variant::Shared => "shared",
            Variant::Oriented => "oriented",
            Variant::EdgeJoined => "edge-joined",
            Variant::MotifC4 => "motif-c4",
        }
    }
}

impl std::fmt::Display for Variant {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "shared" => Ok(Variant::Shared),
            "oriented" => Ok(Variant::Oriented),
            "edge-joined" => Ok(Variant::EdgeJoined),
            "motif-c4" => Ok(Variant::MotifC4),
            other => Err(Error::invalid(format!("unknown variant {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub variant: Variant,
    pub k: usize,
    pub ell: usize,
    pub n: u64,
    /// Edge probability; exclusive with `target_mu`.
    pub p: Option<f64>,
    /// Target value of the variant's mean-offspring parameter.
    pub target_mu: Option<f64>,
    pub trials: u32,
    pub master_seed: u64,
    /// Orientation for the oriented variant; `None` means transitive.
    pub orientation: Option<OrientationSpec>,
    pub output: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn new(variant: Variant, k: usize, ell: usize, n: u64) -> Self {
        Self {
            variant,
            k,
            ell,
            n,
            p: None,
            target_mu: None,
            trials: 1,
            master_seed: 0,
            orientation: None,
            output: None,
        }
    }

    pub fn with_p(mut self, p: f64) -> Self {
        self.p = Some(p);
        self.target_mu = None;
        self
    }

    pub fn with_mu(mut self, mu: f64) -> Self {
        self.target_mu = Some(mu);
        self.p = None;
        self
    }

    pub fn with_trials(mut self, trials: u32) -> Self {
        self.trials = trials;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.master_seed = seed;
        self
    }

    pub fn with_orientation(mut self, h: OrientationSpec) -> Self {
        self.orientation = Some(h);
        self
    }

    /// Checks the structural parameters; the point (`p` or `target_mu`) is
    /// checked separately since sweeps supply their own grid.
    fn validate_shape(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::invalid("trials must be at least 1"));
        }
        if self.n > u32::MAX as u64 {
            return Err(Error::invalid(format!("n={} exceeds 32-bit vertex index", self.n)));
        }
        let (k, ell) = (self.k, self.ell);
        match self.variant {
            Variant::Shared | Variant::Oriented => {
                if k < 2 || ell < 1 || ell >= k {
                    return Err(Error::invalid(format!("need 1 <= ell <= k-1, got k={k}, ell={ell}")));
                }
            }
            Variant::EdgeJoined => {
                if k < 2 || ell < 1 || ell > k * k {
                    return Err(Error::invalid(format!("need 1 <= ell <= k^2, got k={k}, ell={ell}")));
                }
            }
            Variant::MotifC4 => {
                if k != 4 || !(1..=3).contains(&ell) {
                    return Err(Error::invalid(format!("motif-c4 needs k=4 and 1 <= ell <= 3, got k={k}, ell={ell}")));
                }
            }
        }
        if let Some(h) = &self.orientation {
            if self.variant != Variant::Oriented {
                return Err(Error::invalid("an orientation only applies to the oriented variant"));
            }
            if h.k() != k {
                return Err(Error::invalid(format!("orientation has order {}, expected k={k}", h.k())));
            }
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        self.validate_shape()?;
        match (self.p, self.target_mu) {
            (Some(_), None) | (None, Some(_)) => Ok(()),
            _ => Err(Error::invalid("give exactly one of p and target mu")),
        }
    }

    pub fn orientation_or_transitive(&self) -> Result<OrientationSpec> {
        match &self.orientation {
            Some(h) => Ok(h.clone()),
            None => OrientationSpec::transitive(self.k),
        }
    }

    fn threshold_model(&self) -> Result<Option<ThresholdModel>> {
        Ok(match self.variant {
            Variant::Shared => Some(ThresholdModel::Shared),
            Variant::EdgeJoined => Some(ThresholdModel::EdgeJoined),
            Variant::Oriented => {
                let h = self.orientation_or_transitive()?;
                if h == OrientationSpec::transitive(self.k)? {
                    Some(ThresholdModel::OrientedTransitive)
                } else {
                    Some(ThresholdModel::Oriented(h))
                }
            }
            Variant::MotifC4 => None,
        })
    }

    /// Mean-offspring parameter of the variant at `p`. For `motif-c4` this is
    /// the heuristic `lambda^4/2 + 2 lambda^2` with `lambda = p sqrt(n)`.
    pub fn mu_at(&self, p: f64) -> Result<f64> {
        match self.threshold_model()? {
            Some(model) => Ok(model.growth_law::<f64>(self.n, self.k, self.ell)?.eval(p)),
            None => {
                let lambda2 = p * p * self.n as f64;
                Ok(lambda2 * lambda2 / 2.0 + 2.0 * lambda2)
            }
        }
    }

    /// Inverts [`Self::mu_at`] in closed form.
    pub fn p_for_mu(&self, mu: f64) -> Result<f64> {
        if !mu.is_finite() || mu < 0.0 {
            return Err(Error::invalid(format!("target mu {mu} must be finite and >= 0")));
        }
        let p = match self.threshold_model()? {
            Some(model) => model.growth_law::<f64>(self.n, self.k, self.ell)?.solve(mu)?,
            None => {
                // lambda^2 = sqrt(4 + 2 mu) - 2
                let lambda2 = (4.0 + 2.0 * mu).sqrt() - 2.0;
                (lambda2 / self.n as f64).sqrt()
            }
        };
        if p > 1.0 {
            return Err(Error::invalid(format!("target mu {mu} needs p={p} > 1")));
        }
        Ok(p)
    }

    /// Predicted giant fraction at `p`; `None` for `motif-c4`.
    pub fn sigma_at(&self, p: f64) -> Result<Option<f64>> {
        match self.threshold_model()? {
            None => Ok(None),
            Some(ThresholdModel::Oriented(h)) => {
                let model = orientation_type_matrix::<f64>(&h, self.ell)?.instantiate(self.n, p);
                Ok(Some(model.survival()?))
            }
            Some(ThresholdModel::EdgeJoined) => Ok(Some(theory::survival_sigma0(self.mu_at(p)?)?)),
            Some(_) => Ok(Some(theory::survival_sigma(self.k, self.ell, self.mu_at(p)?)?)),
        }
    }

    /// Expected number of copies at `p`.
    pub fn projected_copies(&self, p: f64) -> Result<f64> {
        let n = self.n;
        Ok(match self.variant {
            Variant::Shared | Variant::EdgeJoined => theory::nu(n, p, self.k)?,
            Variant::Oriented => theory::nu_oriented(n, p, &self.orientation_or_transitive()?)?,
            Variant::MotifC4 => 3.0 * PowerLaw::new(binomial::<f64>(n, 4).ln(), 4).eval(p),
        })
    }

    fn resolve_point(&self, point: GridPoint) -> Result<f64> {
        let p = match point {
            GridPoint::P(p) => p,
            GridPoint::Mu(mu) => {
                let p = self.p_for_mu(mu)?;
                log::info!("{} k={} ell={} n={}: mu={mu} -> p={p}", self.variant, self.k, self.ell, self.n);
                p
            }
        };
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::invalid(format!("probability {p} outside [0, 1]")));
        }
        Ok(p)
    }

    fn check_resources(&self, p: f64) -> Result<()> {
        let projected = self.projected_copies(p)?;
        if projected > MAX_PROJECTED_COPIES {
            return Err(Error::ResourceGuard(format!(
                "projected {projected:.3e} copies at p={p} exceeds {MAX_PROJECTED_COPIES:e}"
            )));
        }
        if self.variant == Variant::EdgeJoined && projected * projected / 2.0 > MAX_PAIR_SCANS {
            return Err(Error::ResourceGuard(format!(
                "projected {:.3e} clique pairs at p={p} exceeds {MAX_PAIR_SCANS:e}",
                projected * projected / 2.0
            )));
        }
        Ok(())
    }
}

/// Outcome of one simulated graph. Equality ignores `wall_time`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TrialResult {
    pub trial: u32,
    pub seed: u64,
    pub clique_count: usize,
    pub c1: usize,
    pub c2: usize,
    pub frac_c1: f64,
    pub frac_c2: f64,
    #[serde(skip)]
    pub wall_time: Duration,
}

impl PartialEq for TrialResult {
    fn eq(&self, other: &Self) -> bool {
        (self.trial, self.seed, self.clique_count, self.c1, self.c2) == (other.trial, other.seed, other.clique_count, other.c1, other.c2)
            && self.frac_c1 == other.frac_c1
            && self.frac_c2 == other.frac_c2
    }
}

impl TrialResult {
    fn from_summary(trial: u32, seed: Seed, summary: &ComponentSummary, wall_time: Duration) -> Self {
        let count = summary.clique_count();
        let frac = |c: usize| if count == 0 { 0.0 } else { c as f64 / count as f64 };
        Self {
            trial,
            seed: seed.0,
            clique_count: count,
            c1: summary.c1(),
            c2: summary.c2(),
            frac_c1: frac(summary.c1()),
            frac_c2: frac(summary.c2()),
            wall_time,
        }
    }
}

/// Simulates one graph at edge probability `p` and summarizes the overlap
/// components of its copies under the variant's rule.
pub fn run_trial_at(config: &ExperimentConfig, p: f64, trial: u32, seed: Seed) -> Result<TrialResult> {
    config.validate_shape()?;
    config.check_resources(p)?;
    let start = Instant::now();
    let n = config.n as usize;
    let summary = match config.variant {
        Variant::Shared => {
            let g = gen_gnp(n, p, seed)?;
            let cliques = enumerate_k_cliques(&g, config.k)?;
            components_by_overlap(&cliques, config.ell)?
        }
        Variant::Oriented => {
            let d = gen_directed_gnp(n, p, seed)?;
            let copies = enumerate_oriented_copies(&d, &config.orientation_or_transitive()?)?;
            components_by_overlap(&copies, config.ell)?
        }
        Variant::EdgeJoined => {
            let g = gen_gnp(n, p, seed)?;
            let cliques = enumerate_k_cliques(&g, config.k)?;
            let scans = cliques.len() as f64 * cliques.len() as f64 / 2.0;
            if scans > MAX_PAIR_SCANS {
                return Err(Error::ResourceGuard(format!(
                    "{} cliques need {scans:.3e} pair scans",
                    cliques.len()
                )));
            }
            components_by_cross_edges(&g, &cliques, config.ell)?
        }
        Variant::MotifC4 => {
            let g = gen_gnp(n, p, seed)?;
            let copies = enumerate_subgraph_copies(&g, &Motif::cycle(4)?)?;
            components_by_overlap(&copies, config.ell)?
        }
    };
    Ok(TrialResult::from_summary(trial, seed, &summary, start.elapsed()))
}

/// Runs trial `trial` of a single-point configuration, seeded from
/// `master_seed` as grid point 0.
pub fn run_trial(config: &ExperimentConfig, trial: u32) -> Result<TrialResult> {
    config.validate()?;
    let point = match (config.p, config.target_mu) {
        (Some(p), _) => GridPoint::P(p),
        (None, Some(mu)) => GridPoint::Mu(mu),
        (None, None) => unreachable!("validated"),
    };
    let p = config.resolve_point(point)?;
    run_trial_at(config, p, trial, Seed(config.master_seed).for_trial(0, trial))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum GridPoint {
    P(f64),
    Mu(f64),
}

/// Aggregate over the trials at one grid point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub p: f64,
    pub mu: f64,
    pub sigma_theory: Option<f64>,
    pub mean_frac_c1: f64,
    /// Standard error of `mean_frac_c1`.
    pub stderr: f64,
    pub mean_frac_c2: f64,
    pub trials: u32,
    pub results: Vec<TrialResult>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub config: ExperimentConfig,
    /// Sorted by `p`.
    pub points: Vec<SweepPoint>,
}

fn mean_and_stderr(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

/// Runs `config.trials` trials at every grid point.
///
/// Trial `t` of the point with index `i` (after sorting by `p`) uses
/// `Seed(master_seed).for_trial(i, t)`. Trials run in parallel and results
/// are collected in (point, trial) order.
pub fn run_sweep(config: &ExperimentConfig, grid: &[GridPoint]) -> Result<SweepResult> {
    config.validate_shape()?;
    if grid.is_empty() {
        return Err(Error::invalid("sweep grid is empty"));
    }
    let mut ps: Vec<f64> = grid
        .iter()
        .map(|&g| config.resolve_point(g))
        .collect::<Result<_>>()?;
    ps.sort_by(f64::total_cmp);
    for &p in &ps {
        config.check_resources(p)?;
    }
    let master = Seed(config.master_seed);
    let jobs: Vec<(usize, u32)> = (0..ps.len())
        .flat_map(|i| (0..config.trials).map(move |t| (i, t)))
        .collect();
    let results: Vec<TrialResult> = jobs
        .par_iter()
        .map(|&(i, t)| run_trial_at(config, ps[i], t, master.for_trial(i as u32, t)))
        .collect::<Result<_>>()?;
    let mut points = Vec::with_capacity(ps.len());
    for (i, chunk) in results.chunks(config.trials as usize).enumerate() {
        let p = ps[i];
        let c1: Vec<f64> = chunk.iter().map(|r| r.frac_c1).collect();
        let c2: Vec<f64> = chunk.iter().map(|r| r.frac_c2).collect();
        let (mean_frac_c1, stderr) = mean_and_stderr(&c1);
        points.push(SweepPoint {
            p,
            mu: config.mu_at(p)?,
            sigma_theory: config.sigma_at(p)?,
            mean_frac_c1,
            stderr,
            mean_frac_c2: mean_and_stderr(&c2).0,
            trials: config.trials,
            results: chunk.to_vec(),
        });
    }
    Ok(SweepResult {
        config: config.clone(),
        points,
    })
}

/// Runs the single point given by `config.p` or `config.target_mu`.
pub fn run_simulation(config: &ExperimentConfig) -> Result<SweepResult> {
    config.validate()?;
    let point = match (config.p, config.target_mu) {
        (Some(p), _) => GridPoint::P(p),
        (None, Some(mu)) => GridPoint::Mu(mu),
        (None, None) => unreachable!("validated"),
    };
    run_sweep(config, &[point])
}

/// Locates the first upward crossing of `mean_frac_c1` through `eps` by
/// linear interpolation in `p`.
pub fn estimate_threshold(sweep: &SweepResult, eps: f64) -> Result<f64> {
    for w in sweep.points.windows(2) {
        let (a, b) = (&w[0], &w[1]);
        if a.mean_frac_c1 < eps && b.mean_frac_c1 >= eps {
            let t = (eps - a.mean_frac_c1) / (b.mean_frac_c1 - a.mean_frac_c1);
            return Ok(a.p + t * (b.p - a.p));
        }
    }
    Err(Error::NoCrossing { threshold: eps })
}

/// Sizes the global thread pool from `CPL_THREADS`, if set. Call once before
/// any parallel work.
pub fn configure_threads_from_env() -> Result<()> {
    let Ok(value) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let threads: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .ok_or_else(|| Error::invalid(format!("{THREADS_ENV}={value:?} is not a positive integer")))?;
    // a second initialization attempt is harmless
    let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn point(p: f64, mean: f64) -> SweepPoint {
        SweepPoint {
            p,
            mu: 0.0,
            sigma_theory: None,
            mean_frac_c1: mean,
            stderr: 0.0,
            mean_frac_c2: 0.0,
            trials: 1,
            results: Vec::new(),
        }
    }

    fn sweep(points: Vec<SweepPoint>) -> SweepResult {
        SweepResult {
            config: ExperimentConfig::new(Variant::Shared, 3, 2, 10),
            points,
        }
    }

    #[test]
    fn threshold_interpolation() {
        let s = sweep(vec![point(0.1, 0.0), point(0.3, 0.1)]);
        assert!((estimate_threshold(&s, 0.05).unwrap() - 0.2).abs() < 1e-15);
        let s = sweep(vec![point(0.1, 0.0), point(0.2, 0.0)]);
        assert!(matches!(estimate_threshold(&s, 0.05), Err(Error::NoCrossing { .. })));
        let s = sweep(vec![point(0.1, 0.2), point(0.2, 0.01), point(0.3, 0.09)]);
        assert!((estimate_threshold(&s, 0.05).unwrap() - 0.25).abs() < 1e-12);
    }

    #[test]
    fn trivial_trials() {
        let cfg = ExperimentConfig::new(Variant::Shared, 3, 2, 200).with_p(0.0);
        let r = run_trial(&cfg, 0).unwrap();
        assert_eq!((r.clique_count, r.c1, r.frac_c1), (0, 0, 0.0));

        let cfg = ExperimentConfig::new(Variant::Shared, 3, 2, 12).with_p(1.0);
        let r = run_trial(&cfg, 0).unwrap();
        assert_eq!(r.clique_count, 220);
        assert_eq!(r.c1, 220);
        assert_eq!(r.frac_c1, 1.0);
    }

    #[test]
    fn config_validation() {
        let cfg = ExperimentConfig::new(Variant::Shared, 3, 2, 100);
        assert!(cfg.validate().is_err());
        let mut both = cfg.clone().with_p(0.1);
        both.target_mu = Some(1.0);
        assert!(both.validate().is_err());
        assert!(cfg.clone().with_p(0.1).with_trials(0).validate().is_err());
        assert!(ExperimentConfig::new(Variant::Shared, 3, 3, 100).with_p(0.1).validate().is_err());
        assert!(ExperimentConfig::new(Variant::EdgeJoined, 3, 9, 100).with_p(0.1).validate().is_ok());
        assert!(ExperimentConfig::new(Variant::MotifC4, 3, 2, 100).with_p(0.1).validate().is_err());
        let wrong = ExperimentConfig::new(Variant::Shared, 4, 3, 100)
            .with_p(0.1)
            .with_orientation(OrientationSpec::k4_two_cyclic());
        assert!(wrong.validate().is_err());
    }

    #[test]
    fn mu_inversion() {
        let cfg = ExperimentConfig::new(Variant::Shared, 3, 2, 3000);
        let p = cfg.p_for_mu(2.0).unwrap();
        assert!((p - 1.0 / 3000f64.sqrt()).abs() < 1e-15);
        let cfg = ExperimentConfig::new(Variant::Oriented, 3, 2, 3000);
        let p = cfg.p_for_mu(2.0).unwrap();
        assert!((p - (1.0 / 9000f64).sqrt()).abs() < 1e-15);
        let cfg = ExperimentConfig::new(Variant::MotifC4, 4, 3, 10_000);
        let p = cfg.p_for_mu(1.0).unwrap();
        assert!((p - 0.006_704_399_621_018_856).abs() < 1e-12);
        assert!((cfg.mu_at(p).unwrap() - 1.0).abs() < 1e-12);
        assert!(ExperimentConfig::new(Variant::Shared, 3, 2, 3).p_for_mu(1e6).is_err());
    }

    #[test]
    fn resource_guard() {
        let cfg = ExperimentConfig::new(Variant::Shared, 3, 2, 100_000).with_p(0.5);
        assert!(matches!(run_trial(&cfg, 0), Err(Error::ResourceGuard(_))));
        let cfg = ExperimentConfig::new(Variant::EdgeJoined, 3, 1, 100_000).with_p(0.001);
        assert!(matches!(run_trial(&cfg, 0), Err(Error::ResourceGuard(_))));
    }

    #[test]
    fn sweep_rows_and_order() {
        let cfg = ExperimentConfig::new(Variant::Shared, 3, 2, 300).with_trials(3).with_seed(11);
        let grid = [GridPoint::Mu(1.5), GridPoint::Mu(0.0), GridPoint::P(0.02)];
        let s = run_sweep(&cfg, &grid).unwrap();
        assert_eq!(s.points.len(), 3);
        assert!(s.points.windows(2).all(|w| w[0].p <= w[1].p));
        assert!(s.points[0].results.iter().all(|r| r.frac_c1 == 0.0));
        for pt in &s.points {
            assert_eq!(pt.results.len(), 3);
            for r in &pt.results {
                assert!(r.c1 + r.c2 <= r.clique_count);
                assert!(r.frac_c1 + r.frac_c2 <= 1.0);
            }
        }
        assert!(run_sweep(&cfg, &[]).is_err());
        let again = run_sweep(&cfg, &grid).unwrap();
        assert_eq!(s.points, again.points);
    }

    #[test]
    fn each_variant_runs() {
        let cfgs = [
            ExperimentConfig::new(Variant::Oriented, 3, 2, 200).with_mu(1.5),
            ExperimentConfig::new(Variant::Oriented, 4, 3, 60)
                .with_mu(1.5)
                .with_orientation(OrientationSpec::k4_two_cyclic()),
            ExperimentConfig::new(Variant::EdgeJoined, 3, 1, 2000).with_mu(1.5),
            ExperimentConfig::new(Variant::MotifC4, 4, 3, 300).with_mu(1.5),
        ];
        for cfg in cfgs {
            let s = run_simulation(&cfg.with_trials(2).with_seed(3)).unwrap();
            let pt = &s.points[0];
            assert!((pt.mu - 1.5).abs() < 1e-9);
            assert_eq!(pt.sigma_theory.is_none(), s.config.variant == Variant::MotifC4);
        }
    }
}
