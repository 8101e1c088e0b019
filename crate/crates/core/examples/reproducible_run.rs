//! Writes a CSV with a content-hashed manifest into a run directory, then
//! repeats the run and checks that both hashes agree.

use serde::Serialize;
use thinstrip::cli::{write_csv, Cell, RunDir};
use thinstrip::harness::exact_alpha0_spectrum;

#[derive(Serialize)]
struct Params {
    eps: f64,
    count: usize,
}

fn run(root: &std::path::Path) -> thinstrip::Result<String> {
    let params = Params {
        eps: 0.05,
        count: 4,
    };
    let mut dir = RunDir::create(root, "exact", &params)?;
    let rows: Vec<Vec<Cell>> = exact_alpha0_spectrum(params.eps, params.count)
        .into_iter()
        .enumerate()
        .map(|(p, l)| vec![Cell::I(p + 1), Cell::F(l)])
        .collect();
    dir.write("exact.csv", write_csv(&["p", "lambda"], &rows).as_bytes())?;
    dir.finish()
}

fn main() -> thinstrip::Result<()> {
    let root = std::env::temp_dir().join("thinstrip-reproducible");
    let first = run(&root.join("a"))?;
    let second = run(&root.join("b"))?;
    println!("{first}\n{second}\nidentical: {}", first == second);
    print!(
        "{}",
        std::fs::read_to_string(root.join("a/exact/exact.csv"))?
    );
    Ok(())
}
