//! Rectangle case: compares the computed trapezoid spectrum at `α = 0` with
//! the closed form `π²/ε² + π²(p − 1/2)²` for P1 and P2 elements.

use std::f64::consts::PI;

use thinstrip::geometry::{ElementOrder, GammaBc};
use thinstrip::harness::{exact_alpha0_spectrum, trapezoid_spectrum, TrapezoidParams};

fn main() -> thinstrip::Result<()> {
    let eps = 0.05;
    let exact = exact_alpha0_spectrum(eps, 4);
    for order in [ElementOrder::P1, ElementOrder::P2] {
        let params = TrapezoidParams {
            order,
            h_over_eps: 1.0 / 6.0,
            ..Default::default()
        };
        let s = trapezoid_spectrum(eps, 0.0, GammaBc::Neumann, 4, &params)?;
        println!("{order:?}: {} dofs", s.n_dofs);
        for (p, (got, want)) in s.eigenvalues.iter().zip(&exact).enumerate() {
            let shifted = (got - PI * PI / (eps * eps)) / (PI * PI);
            println!("  p={} lambda={got:.6} exact={want:.6} rel={:.2e} (lambda - pi^2/eps^2)/pi^2={shifted:.5}", p + 1, (got - want).abs() / want);
        }
    }
    Ok(())
}
