//! Identification of a two-layer Urysohn tree — a single root operator fed
//! by `K` branch operators through unobserved auxiliary variables.
//!
//! The tree computes `z_hat = Σ_k Φ_k(φ_k)` with `φ_k = Σ_j f_kj(x_j)`:
//! each branch is a discrete Urysohn operator over the actual inputs, and
//! the root is a Urysohn operator over the branch outputs. With `K = 2m+1`
//! addends this is the Kolmogorov-Arnold representation; smaller `K` gives
//! a reduced model, down to `K = 1` which contains the single Urysohn
//! operator (and hence linear regression) as special cases.
//!
//! The auxiliary variables `φ_k` are never observed. A training step first
//! proposes where they should move — splitting the record's residual `R`
//! across the addends through the root slopes,
//!
//! ```text
//! Δφ_k = μ R / (K · T(Φ_k'(φ_k)))
//! ```
//!
//! with `T` a threshold guard against division by a vanishing slope — and
//! only if the proposal strictly shrinks the record's error does it train
//! the branches toward `φ + Δφ` and the root toward `z`. Records that fail
//! the gate leave the tree bit-identical, which keeps the descent stable
//! even though the underlying problem is non-convex.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::pwl::{PiecewiseLinear, UrysohnOperator};
use crate::train::{kaczmarz_step, TrainData, TrainTrace};
use crate::{Error, Result};

/// A two-layer tree of Urysohn operators: `K` branches over the inputs and
/// one root over the branch outputs.
#[derive(Debug, Clone, PartialEq)]
pub struct UrysohnTree {
    branches: Vec<UrysohnOperator>,
    root: UrysohnOperator,
}

impl UrysohnTree {
    /// Tree from explicit parts.
    ///
    /// # Panics
    ///
    /// Panics unless there is one root function per branch and all branches
    /// have the same input width.
    pub fn new(branches: Vec<UrysohnOperator>, root: UrysohnOperator) -> Self {
        assert!(!branches.is_empty(), "a tree needs at least one branch");
        assert_eq!(
            branches.len(),
            root.input_len(),
            "the root needs exactly one function per branch",
        );
        let m = branches[0].input_len();
        assert!(
            branches.iter().all(|b| b.input_len() == m),
            "all branches must share the input width",
        );
        UrysohnTree { branches, root }
    }

    /// Number of addends `K`.
    pub fn addends(&self) -> usize {
        self.branches.len()
    }

    /// Number of tree inputs `m`.
    pub fn input_len(&self) -> usize {
        self.branches[0].input_len()
    }

    pub fn branches(&self) -> &[UrysohnOperator] {
        &self.branches
    }

    pub fn root(&self) -> &UrysohnOperator {
        &self.root
    }

    /// Model output and the auxiliary variables at a record. Auxiliary
    /// values falling outside a root function's domain are clamped — that
    /// is the prediction-time convention; training repositions the domain
    /// instead.
    pub fn forward(&self, x: &[f64]) -> (f64, Vec<f64>) {
        let phi: Vec<f64> = self.branches.iter().map(|b| b.evaluate(x)).collect();
        let z_hat = self.root.evaluate(&phi);
        (z_hat, phi)
    }

    /// Model output at a record.
    pub fn predict(&self, x: &[f64]) -> f64 {
        let phi: Vec<f64> = self.branches.iter().map(|b| b.evaluate(x)).collect();
        self.root.evaluate(&phi)
    }
}

/// Settings for tree training.
#[derive(Debug, Clone)]
pub struct TreeConfig {
    /// Addend count `K`. [`TreeConfig::new`] defaults it to `2m + 1`, the
    /// full Kolmogorov-Arnold width.
    pub addends: usize,
    /// Node count per branch input; quantized inputs ignore their entry
    /// and use one node per level.
    pub branch_nodes: Vec<usize>,
    /// Node count of every root function.
    pub root_nodes: usize,
    /// Noise-reduction factor of the auxiliary increments, in `(0, 1]`.
    pub mu: f64,
    /// Slope threshold of the increment denominator. `None` derives it per
    /// root function as `1e-3` of the function's current nodal value
    /// spread, floored at `1e-6`.
    pub delta: Option<f64>,
    /// Relaxation of the branch projection steps, in `(0, 2)`.
    pub alpha_branch: f64,
    /// Relaxation of the root projection steps, in `(0, 2)`.
    pub alpha_root: f64,
    /// Number of full passes over the records after initialization.
    pub epochs: usize,
    /// Seeds the random auxiliary initialization and the per-epoch record
    /// shuffles.
    pub seed: u64,
}

impl TreeConfig {
    /// Config for inputs with the given per-input branch node counts,
    /// `2m + 1` addends, and defaults suited to noisy data: `mu = 0.2`,
    /// `alpha_branch = alpha_root = 0.05`, adaptive `delta`, 20 epochs.
    /// Clean, noise-free data tolerates far larger relaxations (0.5).
    pub fn new(branch_nodes: Vec<usize>, root_nodes: usize) -> Self {
        let m = branch_nodes.len();
        TreeConfig {
            addends: 2 * m + 1,
            branch_nodes,
            root_nodes,
            mu: 0.2,
            delta: None,
            alpha_branch: 0.05,
            alpha_root: 0.05,
            epochs: 20,
            seed: 0,
        }
    }

    pub fn with_addends(mut self, addends: usize) -> Self {
        self.addends = addends;
        self
    }

    pub fn with_mu(mut self, mu: f64) -> Self {
        self.mu = mu;
        self
    }

    pub fn with_delta(mut self, delta: f64) -> Self {
        self.delta = Some(delta);
        self
    }

    pub fn with_alphas(mut self, alpha_branch: f64, alpha_root: f64) -> Self {
        self.alpha_branch = alpha_branch;
        self.alpha_root = alpha_root;
        self
    }

    pub fn with_epochs(mut self, epochs: usize) -> Self {
        self.epochs = epochs;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    fn validate(&self, data: &TrainData) -> Result<()> {
        if self.addends == 0 {
            return Err(Error::Config("a tree needs at least one addend".into()));
        }
        if !(self.mu > 0.0 && self.mu <= 1.0) {
            return Err(Error::Config(format!("mu must lie in (0, 1], got {}", self.mu)));
        }
        if let Some(delta) = self.delta {
            if !(delta > 0.0) {
                return Err(Error::Config(format!("delta must be positive, got {delta}")));
            }
        }
        for (name, alpha) in [("alpha_branch", self.alpha_branch), ("alpha_root", self.alpha_root)]
        {
            if !(alpha > 0.0 && alpha < 2.0) {
                return Err(Error::Config(format!("{name} must lie in (0, 2), got {alpha}")));
            }
        }
        if self.epochs == 0 {
            return Err(Error::Config("epochs must be at least 1".into()));
        }
        if self.root_nodes < 2 {
            return Err(Error::Config(format!(
                "root functions need at least 2 nodes, got {}",
                self.root_nodes
            )));
        }
        if self.branch_nodes.len() != data.input_len() {
            return Err(Error::Config(format!(
                "{} branch node counts for {} inputs",
                self.branch_nodes.len(),
                data.input_len()
            )));
        }
        for (j, (spec, &n)) in data.specs().iter().zip(&self.branch_nodes).enumerate() {
            if matches!(spec, crate::pwl::InputSpec::Continuous { .. }) && n < 2 {
                return Err(Error::Config(format!(
                    "input {j} is continuous and needs at least 2 branch nodes, got {n}"
                )));
            }
        }
        if data.record_count() == 0 {
            return Err(Error::Data("cannot train on zero records".into()));
        }
        Ok(())
    }
}

/// The guarded slope `T(ζ)`: `ζ` itself when `|ζ| ≥ δ`, otherwise the
/// nearest magnitude-`δ` value with `ζ`'s sign (`+δ` for `0 ≤ ζ < δ`,
/// `−δ` for `−δ < ζ < 0`). Keeps the increment denominator bounded away
/// from zero on flat root segments.
pub fn threshold_derivative(zeta: f64, delta: f64) -> f64 {
    debug_assert!(delta > 0.0, "threshold needs a positive delta");
    if zeta.abs() >= delta {
        zeta
    } else if zeta >= 0.0 {
        delta
    } else {
        -delta
    }
}

fn effective_delta(root_fn: &PiecewiseLinear, delta: Option<f64>) -> f64 {
    delta.unwrap_or_else(|| (1e-3 * root_fn.node_value_range()).max(1e-6))
}

/// Sum of the root functions extended linearly beyond their domains.
///
/// Training evaluates proposals this way so that the improvement gate sees
/// the same linear geometry the increments were computed from; clamping
/// would flatten the root exactly where a proposal steps outside and make
/// the comparison inconsistent.
fn root_unclamped(root: &UrysohnOperator, phi: &[f64]) -> f64 {
    root.functions().iter().zip(phi).map(|(f, &p)| f.evaluate_unclamped(p)).sum()
}

/// Proposed auxiliary increments `Δφ_k = μ R / (K · T(Φ_k'(φ_k)))` for one
/// record, splitting the residual equally across the `K` addends. `delta`
/// as in [`TreeConfig::delta`].
pub fn phi_increments(
    tree: &UrysohnTree,
    x: &[f64],
    z: f64,
    mu: f64,
    delta: Option<f64>,
) -> Vec<f64> {
    let k = tree.addends();
    let phi: Vec<f64> = tree.branches.iter().map(|b| b.evaluate(x)).collect();
    let r = z - root_unclamped(&tree.root, &phi);
    (0..k)
        .map(|a| {
            let f = &tree.root.functions()[a];
            let slope = threshold_derivative(f.derivative_at(phi[a]), effective_delta(f, delta));
            mu * r / (k as f64 * slope)
        })
        .collect()
}

struct TreeScratch {
    phi: Vec<f64>,
    phi_new: Vec<f64>,
}

impl TreeScratch {
    fn new(addends: usize) -> Self {
        TreeScratch { phi: vec![0.0; addends], phi_new: vec![0.0; addends] }
    }
}

/// One descent step on one record; returns the pre-step residual and
/// whether the proposal passed the improvement gate.
fn step_inner(
    tree: &mut UrysohnTree,
    x: &[f64],
    z: f64,
    cfg: &TreeConfig,
    mu: f64,
    scratch: &mut TreeScratch,
) -> (f64, bool) {
    let UrysohnTree { branches, root } = tree;
    let k = branches.len();

    for (a, branch) in branches.iter().enumerate() {
        scratch.phi[a] = branch.evaluate(x);
    }
    let r = z - root_unclamped(root, &scratch.phi);

    for a in 0..k {
        let f = &root.functions()[a];
        let slope =
            threshold_derivative(f.derivative_at(scratch.phi[a]), effective_delta(f, cfg.delta));
        scratch.phi_new[a] = scratch.phi[a] + mu * r / (k as f64 * slope);
    }

    // The gate: move only if the proposed auxiliary variables strictly
    // shrink this record's error. A skipped record leaves the tree
    // bit-identical.
    let error_new = (z - root_unclamped(root, &scratch.phi_new)).abs();
    if error_new >= r.abs() {
        return (r, false);
    }

    for (a, branch) in branches.iter_mut().enumerate() {
        kaczmarz_step(branch, x, scratch.phi_new[a], cfg.alpha_branch);
    }
    // The relaxed branch steps land somewhere short of the proposal, so
    // recompute where the auxiliary variables actually are, make sure the
    // root domains still contain them, and project the root toward z there.
    for (a, branch) in branches.iter().enumerate() {
        let actual = branch.evaluate(x);
        scratch.phi_new[a] = actual;
        root.functions_mut()[a].reposition_to_include(actual);
    }
    kaczmarz_step(root, &scratch.phi_new, z, cfg.alpha_root);
    (r, true)
}

/// One public descent step on one record with the config's `mu`; returns
/// whether the tree changed. See [`train_tree`] for the full loop.
pub fn tree_step(tree: &mut UrysohnTree, x: &[f64], z: f64, cfg: &TreeConfig) -> bool {
    let mut scratch = TreeScratch::new(tree.addends());
    step_inner(tree, x, z, cfg, cfg.mu, &mut scratch).1
}

fn initialize_with(
    data: &TrainData,
    cfg: &TreeConfig,
    rng: &mut ChaCha8Rng,
) -> Result<UrysohnTree> {
    let n = data.record_count();
    let k = cfg.addends;

    // Random auxiliary targets, one per (record, addend), drawn
    // record-major. Distinct targets per addend are what pulls the
    // branches apart; identical branches would make the addends redundant.
    let mut targets = vec![0.0f64; n * k];
    for t in targets.iter_mut() {
        *t = rng.gen_range(-1.0..1.0);
    }

    let mut branches: Vec<UrysohnOperator> =
        (0..k).map(|_| UrysohnOperator::zeros(data.specs(), &cfg.branch_nodes)).collect();
    for i in 0..n {
        let x = data.record(i);
        for (a, branch) in branches.iter_mut().enumerate() {
            kaczmarz_step(branch, x, targets[i * k + a], cfg.alpha_branch);
        }
    }

    // The branches now define actual auxiliary values; size each root
    // function's domain to cover them and fit the root in one pass.
    let mut phi = vec![0.0f64; n * k];
    for i in 0..n {
        let x = data.record(i);
        for (a, branch) in branches.iter().enumerate() {
            phi[i * k + a] = branch.evaluate(x);
        }
    }
    let root_functions: Vec<PiecewiseLinear> = (0..k)
        .map(|a| {
            let lo = (0..n).map(|i| phi[i * k + a]).fold(f64::INFINITY, f64::min);
            let hi = (0..n).map(|i| phi[i * k + a]).fold(f64::NEG_INFINITY, f64::max);
            // A one-record or degenerate start still needs a real interval.
            if hi - lo > 1e-12 {
                PiecewiseLinear::continuous(lo, hi, cfg.root_nodes)
            } else {
                PiecewiseLinear::continuous(lo - 0.5, hi + 0.5, cfg.root_nodes)
            }
        })
        .collect();
    let mut root = UrysohnOperator::new(root_functions);
    for i in 0..n {
        kaczmarz_step(&mut root, &phi[i * k..(i + 1) * k], data.output(i), cfg.alpha_root);
    }

    let tree = UrysohnTree::new(branches, root);
    for a in 0..k {
        for b in a + 1..k {
            assert_ne!(
                tree.branches[a], tree.branches[b],
                "initialization must leave the branch operators distinct",
            );
        }
    }
    Ok(tree)
}

/// Build a tree ready for descent: branches are pulled apart by training
/// each one toward its own random auxiliary targets (uniform on `[-1, 1]`
/// per record, seeded, one pass), then the root is fitted in one pass over
/// the auxiliary values the branches actually produce.
pub fn initialize_tree(data: &TrainData, cfg: &TreeConfig) -> Result<UrysohnTree> {
    cfg.validate(data)?;
    initialize_with(data, cfg, &mut ChaCha8Rng::seed_from_u64(cfg.seed))
}

/// Next epoch's `mu`: halved after an epoch in which every record was
/// skipped (the gate never passed, so the proposals are too coarse),
/// floored at 1/64 of the initial value.
fn next_mu(current: f64, initial: f64, fully_skipped: bool) -> f64 {
    if fully_skipped {
        (current * 0.5).max(initial / 64.0)
    } else {
        current
    }
}

/// Identify a Urysohn tree from records: initialize per
/// [`initialize_tree`], then sweep the records (reshuffled every epoch)
/// with gated descent steps for `cfg.epochs` passes. The trace holds each
/// epoch's mean absolute residual and the fraction of skipped records.
pub fn train_tree(data: &TrainData, cfg: &TreeConfig) -> Result<(UrysohnTree, TrainTrace)> {
    cfg.validate(data)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut tree = initialize_with(data, cfg, &mut rng)?;

    let n = data.record_count();
    let mut order: Vec<usize> = (0..n).collect();
    let mut scratch = TreeScratch::new(cfg.addends);
    let mut trace = TrainTrace::default();
    let mut mu = cfg.mu;
    for _ in 0..cfg.epochs {
        order.shuffle(&mut rng);
        let mut abs_sum = 0.0;
        let mut skips = 0usize;
        for &i in &order {
            let (r, accepted) = step_inner(&mut tree, data.record(i), data.output(i), cfg, mu, &mut scratch);
            abs_sum += r.abs();
            if !accepted {
                skips += 1;
            }
        }
        trace.epoch_mean_abs_residual.push(abs_sum / n as f64);
        trace.epoch_skip_rate.push(skips as f64 / n as f64);
        mu = next_mu(mu, cfg.mu, skips == n);
    }
    Ok((tree, trace))
}
