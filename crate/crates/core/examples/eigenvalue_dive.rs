//! Sweeps the angle across the first threshold angle at fixed `ε` and writes
//! the dive table as CSV on stdout. One eigenvalue drops below `π²/ε²`.

use thinstrip::geometry::GammaBc;
use thinstrip::harness::{dive_sweep, TrapezoidParams};

fn main() -> thinstrip::Result<()> {
    let alphas: Vec<f64> = (0..9).map(|i| 1.25 + 0.02 * i as f64).collect();
    let table = dive_sweep(
        0.05,
        &alphas,
        GammaBc::Neumann,
        3,
        &TrapezoidParams::default(),
    )?;
    table.write_csv(std::io::stdout().lock())?;
    for (i, b) in table.branches.iter().enumerate() {
        eprintln!("branch {}: {:.1} -> {:.1}", i + 1, b[0], b[b.len() - 1]);
    }
    Ok(())
}
