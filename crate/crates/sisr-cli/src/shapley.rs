use sisr_core::coalition::read_payoff_csv;
use sisr_core::shapley::{exact_shapley, wls_shapley};
use sisr_core::Result;

use crate::output::write_atomic;
use crate::ShapleyArgs;

pub fn run(args: &ShapleyArgs) -> Result<()> {
    let table = read_payoff_csv(&args.payoffs)?;
    let exact = exact_shapley(&table)?;

    let mut csv = String::from("feature,beta\n");
    for (j, beta) in exact.beta.iter().enumerate() {
        csv.push_str(&format!("{},{beta:.16e}\n", j + 1));
    }
    write_atomic(&args.out, csv.as_bytes())?;

    let mut summary = format!(
        "p={} baseline={:.16e} efficiency_gap={:.2e}",
        table.p(),
        exact.baseline,
        exact.efficiency_gap(&table)
    );
    if args.check_wls {
        let wls = wls_shapley(&table)?;
        let worst = exact
            .beta
            .iter()
            .zip(&wls.beta)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0_f64, f64::max);
        summary.push_str(&format!(" wls_discrepancy={worst:.2e}"));
    }
    println!("{summary}");
    Ok(())
}
