//! The README's library example: cross-validate a tree on a CSV dataset.
//!
//! ```sh
//! cargo run -p urysohn-cli -- synth --count 4000 --seed 7 --out synth.csv
//! cargo run -p urysohn --example quickstart
//! ```

use urysohn::data::{parse_csv, ParseOptions};
use urysohn::{run_cv, ModelConfig, ModelKind, NodeCounts, Result};

fn main() -> Result<()> {
    let dataset = parse_csv("synth.csv".as_ref(), &ParseOptions::default())?;
    let cfg = ModelConfig::new(ModelKind::Tree)
        .with_nodes(NodeCounts::Uniform(10))
        .with_root_nodes(10)
        .with_alpha(0.5)
        .with_mu(1.0)
        .with_epochs(30)
        .with_seed(1);
    let cv = run_cv(&dataset, &cfg, 10, 5, None)?;
    println!("pearson {:.4} ± {:.4}", cv.pearson().mean, cv.pearson().half_width);
    Ok(())
}
