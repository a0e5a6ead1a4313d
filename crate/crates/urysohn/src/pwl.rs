//! Piecewise-linear functions on uniform grids and the discrete Urysohn
//! operator built from them.
//!
//! A [`PiecewiseLinear`] function is a lookup table of `n` nodal values
//! placed on a uniform abscissa grid. Evaluation interpolates linearly
//! between the two bracketing nodes, so every value of the function is a
//! convex combination of exactly two nodal values — the property that turns
//! identification of a whole operator into a sparse linear system solvable
//! by row projections.
//!
//! Inputs come in two flavours. A *continuous* function covers a real
//! interval `[min, max]`. A *quantized* function models an integer-coded
//! input taking values `1..=levels`; it places one node per level, and every
//! admissible argument lands exactly on a node.

/// Where an argument falls on the node grid of a piecewise-linear function.
///
/// `floor` and `ceil` are zero-based node indices bracketing the argument,
/// and `frac` is the interpolation weight of the `ceil` node. When the
/// argument coincides with a node, `floor == ceil` and `frac == 0.0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SegmentLocation {
    /// Index of the node at or below the argument.
    pub floor: usize,
    /// Index of the node at or above the argument (`floor` or `floor + 1`).
    pub ceil: usize,
    /// Offset of the argument past the `floor` node, in `[0, 1)`.
    pub frac: f64,
}

impl SegmentLocation {
    /// Interpolation weights of the `(floor, ceil)` nodes; they sum to one.
    pub fn weights(&self) -> (f64, f64) {
        (1.0 - self.frac, self.frac)
    }

    /// Squared Euclidean norm of the interpolation weights,
    /// `(1 - frac)^2 + frac^2`, always in `[1/2, 1]`.
    ///
    /// Summed over the inputs of an operator this is the squared norm of a
    /// record's constraint row, the denominator of a projection step.
    pub fn weight_sq(&self) -> f64 {
        let (w0, w1) = self.weights();
        w0 * w0 + w1 * w1
    }
}

/// Domain description of one operator input.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InputSpec {
    /// Real-valued input covering `[min, max]`.
    Continuous { min: f64, max: f64 },
    /// Integer-coded input taking values `1..=levels`.
    Quantized { levels: usize },
}

impl InputSpec {
    /// Number of nodes a function over this input gets when `requested`
    /// nodes are asked for. Quantized inputs always use one node per level;
    /// the request only applies to continuous inputs.
    pub fn node_count(&self, requested: usize) -> usize {
        match *self {
            InputSpec::Continuous { .. } => requested,
            InputSpec::Quantized { levels } => levels,
        }
    }
}

/// A univariate piecewise-linear function on a uniform node grid.
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseLinear {
    nodes: Vec<f64>,
    min: f64,
    max: f64,
    quantized: bool,
}

impl PiecewiseLinear {
    /// Zero function over the real interval `[min, max]` with `node_count`
    /// uniformly spaced nodes.
    ///
    /// # Panics
    ///
    /// Panics if `node_count < 2`, if the interval is empty or degenerate,
    /// or if either bound is not finite.
    pub fn continuous(min: f64, max: f64, node_count: usize) -> Self {
        Self::continuous_with_values(min, max, vec![0.0; node_count])
    }

    /// Continuous function over `[min, max]` with the given nodal values.
    ///
    /// # Panics
    ///
    /// Panics under the same conditions as [`PiecewiseLinear::continuous`].
    pub fn continuous_with_values(min: f64, max: f64, values: Vec<f64>) -> Self {
        assert!(values.len() >= 2, "continuous function needs at least 2 nodes");
        assert!(min.is_finite() && max.is_finite(), "domain bounds must be finite");
        assert!(max > min, "domain must be a non-degenerate interval");
        PiecewiseLinear { nodes: values, min, max, quantized: false }
    }

    /// Zero function over the integer levels `1..=levels`.
    ///
    /// # Panics
    ///
    /// Panics if `levels == 0`.
    pub fn quantized(levels: usize) -> Self {
        Self::quantized_with_values(vec![0.0; levels])
    }

    /// Quantized function with one given nodal value per level.
    ///
    /// # Panics
    ///
    /// Panics if `values` is empty.
    pub fn quantized_with_values(values: Vec<f64>) -> Self {
        assert!(!values.is_empty(), "quantized function needs at least 1 level");
        let max = values.len() as f64;
        PiecewiseLinear { nodes: values, min: 1.0, max, quantized: true }
    }

    /// Zero function matching an input description; `requested_nodes` is the
    /// node count used for continuous inputs (quantized inputs get one node
    /// per level regardless).
    pub fn for_input(spec: &InputSpec, requested_nodes: usize) -> Self {
        match *spec {
            InputSpec::Continuous { min, max } => Self::continuous(min, max, requested_nodes),
            InputSpec::Quantized { levels } => Self::quantized(levels),
        }
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn node_values(&self) -> &[f64] {
        &self.nodes
    }

    pub fn is_quantized(&self) -> bool {
        self.quantized
    }

    /// Abscissa interval covered by the nodes.
    pub fn domain(&self) -> (f64, f64) {
        (self.min, self.max)
    }

    /// Abscissa of node `i`.
    ///
    /// # Panics
    ///
    /// Panics if `i` is out of range.
    pub fn node_position(&self, i: usize) -> f64 {
        let n = self.nodes.len();
        assert!(i < n, "node index {i} out of range for {n} nodes");
        if self.quantized {
            (i + 1) as f64
        } else if i == n - 1 {
            self.max
        } else {
            self.min + self.step() * i as f64
        }
    }

    /// Distance between adjacent node abscissas.
    pub fn step(&self) -> f64 {
        if self.quantized {
            1.0
        } else {
            (self.max - self.min) / (self.nodes.len() - 1) as f64
        }
    }

    /// Slope of the segment between nodes `i` and `i + 1`.
    ///
    /// # Panics
    ///
    /// Panics if the segment does not exist.
    pub fn segment_slope(&self, i: usize) -> f64 {
        assert!(i + 1 < self.nodes.len(), "segment {i} out of range");
        (self.nodes[i + 1] - self.nodes[i]) / self.step()
    }

    /// Bracketing nodes and interpolation weight for an argument.
    ///
    /// Continuous functions clamp the argument to the domain first, so the
    /// result is always a valid location. Quantized functions round the
    /// argument to the nearest level and clamp it into range; their
    /// locations always have `frac == 0.0`, so a projection step over a
    /// quantized input touches exactly one node.
    pub fn locate(&self, x: f64) -> SegmentLocation {
        let n = self.nodes.len();
        if self.quantized {
            let level = x.round().clamp(1.0, n as f64) as usize;
            return SegmentLocation { floor: level - 1, ceil: level - 1, frac: 0.0 };
        }
        let x = x.clamp(self.min, self.max);
        let b = (n as f64 - 1.0) * (x - self.min) / (self.max - self.min);
        let floor = b.floor() as usize;
        if floor >= n - 1 {
            return SegmentLocation { floor: n - 1, ceil: n - 1, frac: 0.0 };
        }
        let frac = b - floor as f64;
        let ceil = if frac == 0.0 { floor } else { floor + 1 };
        SegmentLocation { floor, ceil, frac }
    }

    /// Value at a previously computed location.
    pub fn evaluate_at(&self, loc: &SegmentLocation) -> f64 {
        let (w0, w1) = loc.weights();
        w0 * self.nodes[loc.floor] + w1 * self.nodes[loc.ceil]
    }

    /// Value at `x`, clamping continuous arguments into the domain and
    /// rounding quantized arguments to the nearest level.
    pub fn evaluate(&self, x: f64) -> f64 {
        self.evaluate_at(&self.locate(x))
    }

    /// Value at `x` without clamping: outside the domain the boundary
    /// segment is extended linearly. Quantized functions have no notion of
    /// extrapolation and fall back to [`PiecewiseLinear::evaluate`].
    pub fn evaluate_unclamped(&self, x: f64) -> f64 {
        if self.quantized {
            return self.evaluate(x);
        }
        if x < self.min {
            self.nodes[0] + (x - self.min) * self.segment_slope(0)
        } else if x > self.max {
            let last = self.nodes.len() - 1;
            self.nodes[last] + (x - self.max) * self.segment_slope(last - 1)
        } else {
            self.evaluate(x)
        }
    }

    /// Slope of the function at `x`. At a node the right-hand segment's
    /// slope is used, except at the last node where only the left-hand
    /// segment exists. Outside the domain the boundary segment's slope is
    /// returned, matching [`PiecewiseLinear::evaluate_unclamped`].
    ///
    /// # Panics
    ///
    /// Panics on quantized functions, whose lookup tables have no slope.
    pub fn derivative_at(&self, x: f64) -> f64 {
        assert!(!self.quantized, "a quantized lookup table has no derivative");
        let seg = self.locate(x).floor.min(self.nodes.len() - 2);
        self.segment_slope(seg)
    }

    /// Add `amount` to the function's value at a location by distributing it
    /// over the bracketing nodes with the interpolation weights.
    ///
    /// After the call the value at the location has grown by exactly
    /// `amount * loc.weight_sq()`; this is the elementary move of a
    /// projection descent step.
    pub fn apply_increment(&mut self, loc: &SegmentLocation, amount: f64) {
        let (w0, w1) = loc.weights();
        self.nodes[loc.floor] += amount * w0;
        if loc.ceil != loc.floor {
            self.nodes[loc.ceil] += amount * w1;
        }
    }

    /// Extend the domain so that it contains `x`, resampling the nodal
    /// values onto a fresh uniform grid of the same size. New abscissas
    /// inside the old domain take interpolated values; abscissas beyond it
    /// take linearly extrapolated ones. Returns whether anything changed
    /// (`x` already inside the domain is a no-op).
    ///
    /// # Panics
    ///
    /// Panics on quantized functions (their level grid is fixed) and on a
    /// non-finite `x`.
    pub fn reposition_to_include(&mut self, x: f64) -> bool {
        assert!(!self.quantized, "a quantized function has a fixed level grid");
        assert!(x.is_finite(), "cannot extend a domain to a non-finite point");
        if x >= self.min && x <= self.max {
            return false;
        }
        let new_min = self.min.min(x);
        let new_max = self.max.max(x);
        let n = self.nodes.len();
        let step = (new_max - new_min) / (n - 1) as f64;
        let resampled: Vec<f64> = (0..n)
            .map(|i| {
                let xi = if i == n - 1 { new_max } else { new_min + step * i as f64 };
                self.evaluate_unclamped(xi)
            })
            .collect();
        self.nodes = resampled;
        self.min = new_min;
        self.max = new_max;
        true
    }

    /// Spread of the nodal values, `max - min`. Zero for a constant table.
    pub fn node_value_range(&self) -> f64 {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for &v in &self.nodes {
            lo = lo.min(v);
            hi = hi.max(v);
        }
        hi - lo
    }

}

/// A discrete Urysohn operator: the sum of one piecewise-linear function per
/// input, `U(x) = g_1(x_1) + g_2(x_2) + ... + g_m(x_m)`.
#[derive(Debug, Clone, PartialEq)]
pub struct UrysohnOperator {
    functions: Vec<PiecewiseLinear>,
}

impl UrysohnOperator {
    /// Operator from explicit per-input functions.
    ///
    /// # Panics
    ///
    /// Panics if `functions` is empty.
    pub fn new(functions: Vec<PiecewiseLinear>) -> Self {
        assert!(!functions.is_empty(), "an operator needs at least one input");
        UrysohnOperator { functions }
    }

    /// Zero operator over the given inputs. `nodes_per_input[j]` is the node
    /// count for input `j` when it is continuous; quantized inputs get one
    /// node per level regardless.
    ///
    /// # Panics
    ///
    /// Panics if the slices are empty or of different lengths.
    pub fn zeros(specs: &[InputSpec], nodes_per_input: &[usize]) -> Self {
        assert_eq!(specs.len(), nodes_per_input.len(), "one node count per input");
        let functions = specs
            .iter()
            .zip(nodes_per_input)
            .map(|(spec, &n)| PiecewiseLinear::for_input(spec, n))
            .collect();
        Self::new(functions)
    }

    /// Number of inputs.
    pub fn input_len(&self) -> usize {
        self.functions.len()
    }

    pub fn functions(&self) -> &[PiecewiseLinear] {
        &self.functions
    }

    pub fn functions_mut(&mut self) -> &mut [PiecewiseLinear] {
        &mut self.functions
    }

    /// Operator value at a record, the sum of the per-input functions.
    ///
    /// # Panics
    ///
    /// Panics if `x` does not have one value per input.
    pub fn evaluate(&self, x: &[f64]) -> f64 {
        assert_eq!(x.len(), self.functions.len(), "record width must match input count");
        self.functions.iter().zip(x).map(|(f, &xj)| f.evaluate(xj)).sum()
    }
}
