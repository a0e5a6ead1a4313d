//! Identification of a single discrete Urysohn operator by projection
//! descent.
//!
//! Each record `(x, z)` constrains the flattened nodal values to a
//! hyperplane: the operator's value at `x` is a fixed linear combination of
//! at most two nodes per input. A training step moves the current nodal
//! values toward that hyperplane by the relaxed Kaczmarz projection
//!
//! ```text
//! node[q_j] += alpha * D * (1 - psi_j) / chi
//! node[r_j] += alpha * D * psi_j       / chi
//! ```
//!
//! where `D` is the record's residual, `(q_j, r_j, psi_j)` locate `x_j` on
//! input `j`'s grid and `chi = sum_j ((1 - psi_j)^2 + psi_j^2)` is the
//! squared norm of the constraint row. Immediately after the step the
//! record's residual is `(1 - alpha) * D`, so `alpha = 1` is an exact
//! projection and `alpha` in `(0, 2)` keeps the iteration contractive.
//!
//! Starting from all-zero nodal values and sweeping the records repeatedly
//! converges, on a consistent system, to the minimum-norm solution — the
//! canonical representative of the solution set, which is never unique
//! because constant shifts can be traded between the addends.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::pwl::{InputSpec, SegmentLocation, UrysohnOperator};
use crate::{Error, Result};

/// Training records for one operator: a dense row-major input block plus
/// one output per record, with the per-input domain descriptions.
#[derive(Debug, Clone)]
pub struct TrainData {
    inputs: Vec<f64>,
    outputs: Vec<f64>,
    specs: Vec<InputSpec>,
}

impl TrainData {
    /// Bundle records for training. `inputs` holds the records row-major,
    /// one value per spec per record.
    ///
    /// # Panics
    ///
    /// Panics if `specs` is empty or the block shape does not match.
    pub fn new(inputs: Vec<f64>, outputs: Vec<f64>, specs: Vec<InputSpec>) -> Self {
        assert!(!specs.is_empty(), "training data needs at least one input");
        assert_eq!(
            inputs.len(),
            outputs.len() * specs.len(),
            "input block must hold one value per spec per record",
        );
        TrainData { inputs, outputs, specs }
    }

    pub fn record_count(&self) -> usize {
        self.outputs.len()
    }

    pub fn input_len(&self) -> usize {
        self.specs.len()
    }

    pub fn record(&self, i: usize) -> &[f64] {
        let m = self.specs.len();
        &self.inputs[i * m..(i + 1) * m]
    }

    pub fn output(&self, i: usize) -> f64 {
        self.outputs[i]
    }

    pub fn outputs(&self) -> &[f64] {
        &self.outputs
    }

    pub fn specs(&self) -> &[InputSpec] {
        &self.specs
    }
}

/// Settings for single-operator training.
#[derive(Debug, Clone)]
pub struct TrainConfig {
    /// Projection relaxation factor, in `(0, 2)`.
    pub alpha: f64,
    /// Number of full sweeps over the records.
    pub epochs: usize,
    /// Node count per input; quantized inputs ignore their entry and use
    /// one node per level.
    pub nodes_per_input: Vec<usize>,
    /// Stop sweeping once an epoch's mean absolute residual drops to this
    /// value or below.
    pub early_stop: Option<f64>,
    /// Seeds the per-epoch record shuffle.
    pub seed: u64,
}

impl TrainConfig {
    /// Config with the default relaxation (`alpha = 0.5`) and sweep count
    /// (`epochs = 100`).
    pub fn new(nodes_per_input: Vec<usize>) -> Self {
        TrainConfig { alpha: 0.5, epochs: 100, nodes_per_input, early_stop: None, seed: 0 }
    }

    /// Config giving every input the same node count.
    pub fn uniform(input_len: usize, nodes: usize) -> Self {
        Self::new(vec![nodes; input_len])
    }

    pub fn with_alpha(mut self, alpha: f64) -> Self {
        self.alpha = alpha;
        self
    }

    pub fn with_epochs(mut self, epochs: usize) -> Self {
        self.epochs = epochs;
        self
    }

    pub fn with_early_stop(mut self, tol: f64) -> Self {
        self.early_stop = Some(tol);
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    fn validate(&self, data: &TrainData) -> Result<()> {
        if !(self.alpha > 0.0 && self.alpha < 2.0) {
            return Err(Error::Config(format!(
                "alpha must lie in (0, 2), got {}",
                self.alpha
            )));
        }
        if self.epochs == 0 {
            return Err(Error::Config("epochs must be at least 1".into()));
        }
        if data.record_count() == 0 {
            return Err(Error::Data("cannot train on zero records".into()));
        }
        if self.nodes_per_input.len() != data.input_len() {
            return Err(Error::Config(format!(
                "{} node counts for {} inputs",
                self.nodes_per_input.len(),
                data.input_len()
            )));
        }
        for (j, (spec, &n)) in data.specs().iter().zip(&self.nodes_per_input).enumerate() {
            if matches!(spec, InputSpec::Continuous { .. }) && n < 2 {
                return Err(Error::Config(format!(
                    "input {j} is continuous and needs at least 2 nodes, got {n}"
                )));
            }
        }
        Ok(())
    }
}

/// Per-epoch record of how training went.
#[derive(Debug, Clone, Default)]
pub struct TrainTrace {
    /// Mean absolute pre-step residual of each epoch.
    pub epoch_mean_abs_residual: Vec<f64>,
    /// Fraction of update proposals skipped per epoch. Single-operator
    /// training never skips; tree training skips moves that fail its
    /// improvement gate.
    pub epoch_skip_rate: Vec<f64>,
}

impl TrainTrace {
    /// Mean absolute residual of the last completed epoch.
    pub fn final_mean_abs_residual(&self) -> f64 {
        self.epoch_mean_abs_residual.last().copied().unwrap_or(f64::NAN)
    }
}

/// Squared norm `chi` of a record's constraint row: the sum over the
/// inputs of `(1 - psi)^2 + psi^2`. Always in `[m/2, m]` for `m` inputs,
/// and exactly `m` when every input is quantized (all `psi = 0`).
///
/// # Panics
///
/// Panics on an empty location list.
pub fn chi_norm(locations: &[SegmentLocation]) -> f64 {
    assert!(!locations.is_empty(), "a constraint row needs at least one input");
    locations.iter().map(SegmentLocation::weight_sq).sum()
}

/// The linear-regression baseline as a Urysohn operator: two nodes per
/// continuous input (a two-node piecewise-linear function is affine on its
/// domain, so the sum is exactly a linear model), one node per level on
/// quantized inputs.
pub fn make_linear_baseline(specs: &[InputSpec]) -> UrysohnOperator {
    UrysohnOperator::zeros(specs, &vec![2; specs.len()])
}

/// Sugar for training the two-node linear baseline with [`train_single`].
pub fn linear_config(input_len: usize) -> TrainConfig {
    TrainConfig::uniform(input_len, 2)
}

/// Project the operator's nodal values one relaxed Kaczmarz step toward the
/// hyperplane of the record `(x, z)`. Returns the pre-step residual
/// `D = z - U(x)`; the post-step residual is `(1 - alpha) * D`.
///
/// The step touches at most two nodes per input and allocates nothing.
/// `alpha` is applied as given — callers wanting the guarantee of a
/// contraction validate it beforehand.
///
/// # Panics
///
/// Panics if `x` does not have one value per operator input.
pub fn kaczmarz_step(op: &mut UrysohnOperator, x: &[f64], z: f64, alpha: f64) -> f64 {
    assert_eq!(x.len(), op.input_len(), "record width must match input count");
    let mut prediction = 0.0;
    let mut chi = 0.0;
    for (f, &xj) in op.functions().iter().zip(x) {
        let loc = f.locate(xj);
        prediction += f.evaluate_at(&loc);
        chi += loc.weight_sq();
    }
    let residual = z - prediction;
    let amount = alpha * residual / chi;
    for (f, &xj) in op.functions_mut().iter_mut().zip(x) {
        let loc = f.locate(xj);
        f.apply_increment(&loc, amount);
    }
    residual
}

/// Identify a single Urysohn operator from records by sweeping them with
/// [`kaczmarz_step`], starting from all-zero nodal values. Each epoch
/// visits every record once in a freshly shuffled (seeded) order.
pub fn train_single(data: &TrainData, config: &TrainConfig) -> Result<(UrysohnOperator, TrainTrace)> {
    config.validate(data)?;
    let mut op = UrysohnOperator::zeros(data.specs(), &config.nodes_per_input);
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut order: Vec<usize> = (0..data.record_count()).collect();
    let mut trace = TrainTrace::default();
    for _ in 0..config.epochs {
        order.shuffle(&mut rng);
        let mut abs_sum = 0.0;
        for &i in &order {
            let d = kaczmarz_step(&mut op, data.record(i), data.output(i), config.alpha);
            abs_sum += d.abs();
        }
        let mean = abs_sum / data.record_count() as f64;
        trace.epoch_mean_abs_residual.push(mean);
        trace.epoch_skip_rate.push(0.0);
        if config.early_stop.is_some_and(|tol| mean <= tol) {
            break;
        }
    }
    Ok((op, trace))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pwl::PiecewiseLinear;
    use nalgebra::{DMatrix, DVector};
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn spec_ranges(specs: &[InputSpec]) -> Vec<(f64, f64)> {
        specs
            .iter()
            .map(|s| match *s {
                InputSpec::Continuous { min, max } => (min, max),
                InputSpec::Quantized { levels } => (1.0, levels as f64),
            })
            .collect()
    }

    /// Constraint row of one record over the flattened nodal values,
    /// derived from scratch (not via `locate`) so it can serve as an
    /// independent oracle: `b = 1 + (n - 1)(x - min)/(max - min)` on a
    /// one-based grid, floor/ceil nodes weighted `1 - psi` and `psi`.
    fn oracle_row(specs: &[InputSpec], nodes: &[usize], x: &[f64], row: &mut [f64]) {
        row.fill(0.0);
        let mut offset = 0;
        for (j, spec) in specs.iter().enumerate() {
            match *spec {
                InputSpec::Continuous { min, max } => {
                    let n = nodes[j];
                    let xc = x[j].clamp(min, max);
                    let b = 1.0 + (n as f64 - 1.0) * (xc - min) / (max - min);
                    let q = (b.floor() as usize).min(n - 1);
                    let psi = b - q as f64;
                    row[offset + q - 1] += 1.0 - psi;
                    if psi > 0.0 {
                        row[offset + q] += psi;
                    }
                    offset += n;
                }
                InputSpec::Quantized { levels } => {
                    let q = (x[j].round() as usize).clamp(1, levels);
                    row[offset + q - 1] += 1.0;
                    offset += levels;
                }
            }
        }
    }

    fn flatten_nodes(op: &UrysohnOperator) -> Vec<f64> {
        op.functions().iter().flat_map(|f| f.node_values().iter().copied()).collect()
    }

    #[test]
    fn chi_norm_sums_per_input_weight_norms() {
        let loc = |frac: f64| SegmentLocation {
            floor: 0,
            ceil: usize::from(frac > 0.0),
            frac,
        };
        assert_eq!(chi_norm(&[loc(0.0), loc(0.5)]), 1.5);
        assert_eq!(chi_norm(&[loc(0.0), loc(0.0), loc(0.0)]), 3.0);
        assert_eq!(chi_norm(&[loc(0.5), loc(0.5), loc(0.5), loc(0.5)]), 2.0);
    }

    #[test]
    fn midpoint_projection_fills_both_nodes() {
        // One input, two nodes, x at the domain midpoint: chi = 0.5, so an
        // exact step on z = 1 lifts both nodes to exactly 1.
        let mut op = UrysohnOperator::zeros(&[InputSpec::Continuous { min: 0.0, max: 1.0 }], &[2]);
        let d = kaczmarz_step(&mut op, &[0.5], 1.0, 1.0);
        assert_eq!(d, 1.0);
        assert_eq!(op.functions()[0].node_values(), &[1.0, 1.0]);
        assert_eq!(op.evaluate(&[0.5]), 1.0);
    }

    #[test]
    fn quantized_projection_touches_one_node() {
        let mut op = UrysohnOperator::zeros(&[InputSpec::Quantized { levels: 3 }], &[3]);
        kaczmarz_step(&mut op, &[2.0], 0.6, 1.0);
        assert_eq!(op.functions()[0].node_values(), &[0.0, 0.6, 0.0]);
        assert_eq!(op.evaluate(&[2.0]), 0.6);
    }

    #[test]
    fn residual_contracts_by_exactly_one_minus_alpha() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let specs = vec![
            InputSpec::Continuous { min: 0.0, max: 1.0 },
            InputSpec::Continuous { min: -2.0, max: 2.0 },
            InputSpec::Quantized { levels: 4 },
        ];
        for &alpha in &[0.2, 0.5, 1.0, 1.5] {
            let mut op = UrysohnOperator::zeros(&specs, &[5, 3, 4]);
            for _ in 0..200 {
                let x = [
                    rng.gen_range(0.0..1.0),
                    rng.gen_range(-2.0..2.0),
                    rng.gen_range(1..=4) as f64,
                ];
                let z = rng.gen_range(-3.0..3.0);
                let before = kaczmarz_step(&mut op, &x, z, alpha);
                let after = z - op.evaluate(&x);
                let expected = (1.0 - alpha) * before;
                assert!(
                    (after - expected).abs() <= 1e-12 * before.abs().max(1.0),
                    "alpha {alpha}: residual {before} contracted to {after}, expected {expected}"
                );
            }
        }
    }

    #[test]
    fn zero_alpha_leaves_the_operator_untouched() {
        let specs = vec![InputSpec::Continuous { min: 0.0, max: 1.0 }];
        let mut op = UrysohnOperator::zeros(&specs, &[4]);
        let before = op.clone();
        let d = kaczmarz_step(&mut op, &[0.3], 5.0, 0.0);
        assert_eq!(d, 5.0);
        assert_eq!(op, before);
    }

    #[test]
    fn exact_projection_zeroes_the_residual_for_one_record() {
        let specs = vec![
            InputSpec::Continuous { min: 0.0, max: 1.0 },
            InputSpec::Continuous { min: 0.0, max: 1.0 },
        ];
        let mut op = UrysohnOperator::zeros(&specs, &[3, 3]);
        let x = [0.37, 0.81];
        kaczmarz_step(&mut op, &x, 2.0, 1.0);
        assert!((op.evaluate(&x) - 2.0).abs() < 1e-14);
    }

    #[test]
    fn training_converges_on_a_consistent_system() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let specs = vec![
            InputSpec::Continuous { min: 0.0, max: 1.0 },
            InputSpec::Quantized { levels: 3 },
        ];
        let target = UrysohnOperator::new(vec![
            PiecewiseLinear::continuous_with_values(0.0, 1.0, vec![0.1, -0.4, 0.8, 0.3]),
            PiecewiseLinear::quantized_with_values(vec![1.0, -1.0, 0.5]),
        ]);
        let mut inputs = Vec::new();
        let mut outputs = Vec::new();
        for _ in 0..60 {
            let x = [rng.gen_range(0.0..1.0), rng.gen_range(1..=3) as f64];
            inputs.extend_from_slice(&x);
            outputs.push(target.evaluate(&x));
        }
        let data = TrainData::new(inputs, outputs, specs);
        let config = TrainConfig::new(vec![4, 3]).with_alpha(1.0).with_epochs(2000);
        let (op, trace) = train_single(&data, &config).unwrap();
        assert!(trace.final_mean_abs_residual() < 1e-9);
        for i in 0..data.record_count() {
            let err = (op.evaluate(data.record(i)) - data.output(i)).abs();
            assert!(err < 1e-8, "record {i} off by {err}");
        }
    }

    #[test]
    fn zero_start_converges_to_the_minimum_norm_solution() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for instance in 0..10 {
            let specs: Vec<InputSpec> = (0..rng.gen_range(1..=2usize))
                .map(|_| {
                    if rng.gen_bool(0.5) {
                        InputSpec::Continuous { min: 0.0, max: 1.0 }
                    } else {
                        InputSpec::Quantized { levels: rng.gen_range(2..=3) }
                    }
                })
                .collect();
            let nodes: Vec<usize> =
                specs.iter().map(|s| s.node_count(rng.gen_range(2..=3))).collect();
            let width: usize = nodes.iter().sum();
            let records = rng.gen_range(3..=20usize);
            let ranges = spec_ranges(&specs);

            // A consistent system: outputs come from a random nodal vector.
            let w: Vec<f64> = (0..width).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let mut rows = vec![0.0; records * width];
            let mut inputs = Vec::new();
            let mut outputs = Vec::new();
            for i in 0..records {
                let x: Vec<f64> = ranges
                    .iter()
                    .zip(&specs)
                    .map(|(&(lo, hi), s)| match s {
                        InputSpec::Continuous { .. } => rng.gen_range(lo..hi),
                        InputSpec::Quantized { .. } => rng.gen_range(lo as i64..=hi as i64) as f64,
                    })
                    .collect();
                oracle_row(&specs, &nodes, &x, &mut rows[i * width..(i + 1) * width]);
                let z: f64 =
                    rows[i * width..(i + 1) * width].iter().zip(&w).map(|(a, b)| a * b).sum();
                inputs.extend_from_slice(&x);
                outputs.push(z);
            }

            let a = DMatrix::from_row_slice(records, width, &rows);
            let b = DVector::from_column_slice(&outputs);
            let min_norm = a.clone().pseudo_inverse(1e-10).unwrap() * &b;

            let data = TrainData::new(inputs, outputs.clone(), specs);
            let config = TrainConfig::new(nodes).with_alpha(1.0).with_epochs(20000);
            let (op, _) = train_single(&data, &config).unwrap();
            let got = flatten_nodes(&op);

            let worst = got
                .iter()
                .zip(min_norm.iter())
                .map(|(g, m)| (g - m).abs())
                .fold(0.0f64, f64::max);
            assert!(worst < 1e-4, "instance {instance}: max nodal error {worst}");
        }
    }

    #[test]
    fn zero_outputs_from_zero_init_keep_the_operator_zero() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let specs = vec![
            InputSpec::Continuous { min: 0.0, max: 1.0 },
            InputSpec::Quantized { levels: 4 },
        ];
        let mut inputs = Vec::new();
        for _ in 0..30 {
            inputs.push(rng.gen_range(0.0..1.0));
            inputs.push(rng.gen_range(1..=4) as f64);
        }
        let data = TrainData::new(inputs, vec![0.0; 30], specs);
        let (op, trace) = train_single(&data, &TrainConfig::new(vec![5, 4])).unwrap();
        assert!(op.functions().iter().all(|f| f.node_values().iter().all(|&v| v == 0.0)));
        assert_eq!(trace.final_mean_abs_residual(), 0.0);
    }

    #[test]
    fn node_values_of_a_known_generator_are_recovered_up_to_the_shift_family() {
        // Outputs from a known two-input operator; training from zero
        // converges to the minimum-norm representative, which differs from
        // the generator only by the constant trade-off between the addends
        // (shift one function up, the other down). Projecting that
        // component out of the generator gives the exact expected nodes.
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let specs = vec![
            InputSpec::Continuous { min: 0.0, max: 1.0 },
            InputSpec::Continuous { min: 0.0, max: 1.0 },
        ];
        let target = UrysohnOperator::new(vec![
            PiecewiseLinear::continuous_with_values(0.0, 1.0, vec![0.4, -0.2, 0.7]),
            PiecewiseLinear::continuous_with_values(0.0, 1.0, vec![-0.5, 0.3, 0.1]),
        ]);
        let mut inputs = Vec::new();
        let mut outputs = Vec::new();
        for _ in 0..500 {
            let x = [rng.gen_range(0.0..1.0), rng.gen_range(0.0..1.0)];
            inputs.extend_from_slice(&x);
            outputs.push(target.evaluate(&x));
        }
        let data = TrainData::new(inputs, outputs, specs);
        let config = TrainConfig::new(vec![3, 3]).with_alpha(1.0).with_epochs(2000);
        let (op, _) = train_single(&data, &config).unwrap();

        let w = flatten_nodes(&target);
        let got = flatten_nodes(&op);
        // Null direction of every constraint row: +1 on one function's
        // nodes, −1 on the other's (row weights sum to 1 per function).
        let u = [1.0, 1.0, 1.0, -1.0, -1.0, -1.0];
        let shift: f64 = w.iter().zip(u).map(|(a, b)| a * b).sum::<f64>() / 6.0;
        let expected: Vec<f64> = w.iter().zip(u).map(|(a, b)| a - shift * b).collect();
        let rmse: f64 = (got
            .iter()
            .zip(&expected)
            .map(|(g, e)| (g - e) * (g - e))
            .sum::<f64>()
            / 6.0)
            .sqrt();
        assert!(rmse < 1e-6, "nodal RMSE {rmse} against the balanced generator");
    }

    #[test]
    fn linear_baseline_has_two_nodes_per_continuous_input() {
        let specs = vec![
            InputSpec::Continuous { min: 0.0, max: 1.0 },
            InputSpec::Continuous { min: -1.0, max: 1.0 },
            InputSpec::Continuous { min: 0.0, max: 2.0 },
            InputSpec::Continuous { min: 0.0, max: 5.0 },
            InputSpec::Continuous { min: 3.0, max: 4.0 },
        ];
        let op = make_linear_baseline(&specs);
        assert_eq!(op.input_len(), 5);
        assert!(op.functions().iter().all(|f| f.node_count() == 2));
    }

    #[test]
    fn linear_baseline_fits_exactly_linear_data() {
        let mut rng = ChaCha8Rng::seed_from_u64(29);
        let m = 3;
        let w = [1.3, -0.7, 0.4];
        let specs = vec![InputSpec::Continuous { min: 0.0, max: 1.0 }; m];
        let mut inputs = Vec::new();
        let mut outputs = Vec::new();
        for _ in 0..300 {
            let x: Vec<f64> = (0..m).map(|_| rng.gen_range(0.0..1.0)).collect();
            outputs.push(x.iter().zip(w).map(|(a, b)| a * b).sum());
            inputs.extend(x);
        }
        let data = TrainData::new(inputs, outputs.clone(), specs);
        let config = linear_config(m).with_alpha(1.0).with_epochs(2000);
        let (op, _) = train_single(&data, &config).unwrap();
        for i in 0..data.record_count() {
            assert!((op.evaluate(data.record(i)) - data.output(i)).abs() < 1e-6);
        }
    }

    #[test]
    fn linear_baseline_recovers_the_slope() {
        let specs = vec![InputSpec::Continuous { min: 0.0, max: 1.0 }];
        let inputs: Vec<f64> = (0..=10).map(|i| i as f64 / 10.0).collect();
        let outputs: Vec<f64> = inputs.iter().map(|x| 3.0 * x).collect();
        let data = TrainData::new(inputs, outputs, specs);
        let config = linear_config(1).with_alpha(1.0).with_epochs(3000);
        let (op, _) = train_single(&data, &config).unwrap();
        let nodes = op.functions()[0].node_values();
        assert!((nodes[1] - nodes[0] - 3.0).abs() < 1e-4, "slope {}", nodes[1] - nodes[0]);
    }

    #[test]
    fn early_stop_cuts_training_short() {
        let specs = vec![InputSpec::Continuous { min: 0.0, max: 1.0 }];
        let data = TrainData::new(vec![0.0, 0.5, 1.0], vec![1.0, 2.0, 3.0], specs);
        let config = TrainConfig::new(vec![3]).with_alpha(1.0).with_epochs(500).with_early_stop(1e-6);
        let (_, trace) = train_single(&data, &config).unwrap();
        assert!(trace.epoch_mean_abs_residual.len() < 500);
        assert!(trace.final_mean_abs_residual() <= 1e-6);
    }

    #[test]
    fn config_validation_rejects_bad_settings() {
        let specs = vec![InputSpec::Continuous { min: 0.0, max: 1.0 }];
        let data = TrainData::new(vec![0.1, 0.9], vec![1.0, 2.0], specs);
        let bad_alpha = TrainConfig::new(vec![3]).with_alpha(2.0);
        assert!(train_single(&data, &bad_alpha).is_err());
        let bad_nodes = TrainConfig::new(vec![1]);
        assert!(train_single(&data, &bad_nodes).is_err());
        let bad_width = TrainConfig::new(vec![3, 3]);
        assert!(train_single(&data, &bad_width).is_err());
    }
}
