use std::fs;

use sisr_core::isotonic::{build_order, isotonic_fit};
use sisr_core::{Result, SisrError};

use crate::output::write_atomic;
use crate::IsotonicArgs;

pub fn run(args: &IsotonicArgs) -> Result<()> {
    let text = fs::read_to_string(&args.data)?;
    let (values, weights) = parse_value_weight_csv(&text)?;

    // Row order is the target order: fit a non-decreasing sequence.
    let positions: Vec<f64> = (0..values.len()).map(|i| i as f64).collect();
    let plan = build_order(&positions)?;
    let fit = isotonic_fit(&values, &weights, &plan)?;

    let mut csv = String::from("value,weight,fitted\n");
    for i in 0..values.len() {
        csv.push_str(&format!(
            "{:.16e},{:.16e},{:.16e}\n",
            values[i], weights[i], fit.t[i]
        ));
    }
    write_atomic(&args.out, csv.as_bytes())?;
    println!(
        "n={} blocks={} objective={:.16e}",
        values.len(),
        fit.block_boundaries.len(),
        fit.objective
    );
    Ok(())
}

fn parse_value_weight_csv(text: &str) -> Result<(Vec<f64>, Vec<f64>)> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, header)) if header.trim() == "value,weight" => {}
        Some((_, header)) => {
            return Err(SisrError::Data(format!(
                "line 1: expected header `value,weight`, got `{}`",
                header.trim()
            )));
        }
        None => return Err(SisrError::Data("empty isotonic input".into())),
    }
    let mut values = Vec::new();
    let mut weights = Vec::new();
    for (index, line) in lines {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let (value, weight) = line.split_once(',').ok_or_else(|| {
            SisrError::Data(format!("line {}: expected `value,weight`", index + 1))
        })?;
        let value: f64 = value.trim().parse().map_err(|e| {
            SisrError::Data(format!("line {}: bad value `{value}`: {e}", index + 1))
        })?;
        let weight: f64 = weight.trim().parse().map_err(|e| {
            SisrError::Data(format!("line {}: bad weight `{weight}`: {e}", index + 1))
        })?;
        values.push(value);
        weights.push(weight);
    }
    if values.is_empty() {
        return Err(SisrError::Data("no data rows in isotonic input".into()));
    }
    Ok((values, weights))
}
