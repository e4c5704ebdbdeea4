//! Polynomial extrapolation to `h = 0` (Neville's scheme) for vector-valued samples.

use crate::error::{Error, Result};
use rug::Float;

#[derive(Clone, Debug)]
pub struct Extrapolation {
    pub value: Vec<Float>,
    /// Max-norm difference between the full value and the value built without the
    /// first (coarsest) sample.
    pub error: f64,
    /// Max-norm differences of consecutive diagonal entries, in order.
    pub history: Vec<f64>,
}

fn max_diff(a: &[Float], b: &[Float]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| Float::with_val(x.prec(), x - y).abs().to_f64())
        .fold(0.0, f64::max)
}

/// Extrapolates samples `values[k] ≈ f(hs[k])` to `f(0)` with the full Neville tableau.
///
/// Fails with `NonConvergence` when the diagonal differences grow overall and the
/// final one is above the rounding floor `floor`.
pub fn extrapolate_to_zero(hs: &[Float], values: &[Vec<Float>], floor: f64) -> Result<Extrapolation> {
    assert_eq!(hs.len(), values.len());
    let m = hs.len();
    if m == 0 {
        return Err(Error::Precondition("no samples to extrapolate".into()));
    }
    let prec = hs[0].prec();
    let mut table: Vec<Vec<Float>> = values.to_vec();
    let mut diagonal = vec![values[0].clone()];
    // value on all samples but the first; the last tableau row before the final step
    let mut without_first = values[m - 1].clone();
    for level in 1..m {
        if level == m - 1 {
            without_first = table[1].clone();
        }
        let mut next = Vec::with_capacity(m - level);
        for i in 0..m - level {
            let (hi, hj) = (&hs[i], &hs[i + level]);
            let denom = Float::with_val(prec, hi - hj);
            let row: Vec<Float> = table[i]
                .iter()
                .zip(&table[i + 1])
                .map(|(a, b)| {
                    // p(0) = (h_i·b − h_j·a) / (h_i − h_j)
                    let num = Float::with_val(prec, hi * b) - Float::with_val(prec, hj * a);
                    num / &denom
                })
                .collect();
            next.push(row);
        }
        table = next;
        diagonal.push(table[0].clone());
    }
    let history: Vec<f64> = diagonal.windows(2).map(|w| max_diff(&w[0], &w[1])).collect();
    let error = if m > 1 { max_diff(diagonal.last().unwrap(), &without_first) } else { f64::INFINITY };
    if let (Some(first), Some(last)) = (history.first(), history.last()) {
        if last > first && *last > floor {
            return Err(Error::NonConvergence { estimate: *last });
        }
    }
    Ok(Extrapolation {
        value: diagonal.pop().unwrap(),
        error: error.max(floor),
        history,
    })
}
