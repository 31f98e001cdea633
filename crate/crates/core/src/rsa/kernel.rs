//! RSA recursions on a dense `pairs x adjectives` score matrix.
//!
//! Listener matrices are column-stochastic (`L[p, a] = P(p | a)`), speaker
//! matrices row-stochastic (`S[p, a] = P(a | p)`). The rationality exponent
//! is applied once, at the middle step of each chain.

use ndarray::{Array2, Axis};

use super::check_alpha;
use crate::error::{Error, Result};

fn normalize_lanes(mut m: Array2<f64>, axis: Axis) -> Result<Array2<f64>> {
    for mut lane in m.lanes_mut(axis) {
        let sum: f64 = lane.sum();
        if !(sum.is_finite() && sum > 0.0) {
            return Err(Error::InsufficientData(format!("cannot normalize scores summing to {sum}")));
        }
        lane.mapv_inplace(|x| x / sum);
    }
    Ok(m)
}

fn check_scores(scores: &Array2<f64>) -> Result<()> {
    if scores.is_empty() || scores.iter().any(|x| !(x.is_finite() && *x >= 0.0)) {
        return Err(Error::InsufficientData("scores must be a non-empty non-negative matrix".into()));
    }
    Ok(())
}

/// `P_L0(p | a) ∝ s[p, a]`, normalized over pairs for every adjective.
pub fn literal_listener(scores: &Array2<f64>) -> Result<Array2<f64>> {
    check_scores(scores)?;
    normalize_lanes(scores.clone(), Axis(0))
}

/// `P_S0(a | p) ∝ s[p, a]`, normalized over adjectives for every pair.
pub fn literal_speaker(scores: &Array2<f64>) -> Result<Array2<f64>> {
    check_scores(scores)?;
    normalize_lanes(scores.clone(), Axis(1))
}

/// Speaker that reasons about the literal listener:
/// `P_S1(a | p) ∝ P_L0(p | a)^alpha`.
pub fn listener_side_speaker(scores: &Array2<f64>, alpha: f64) -> Result<Array2<f64>> {
    check_alpha(alpha)?;
    let l0 = literal_listener(scores)?;
    normalize_lanes(l0.mapv(|x| x.powf(alpha)), Axis(1))
}

/// Pragmatic listener: `P_L1(p | a) ∝ P_S1(a | p)` with `S1` from
/// [`listener_side_speaker`].
pub fn pragmatic_listener(scores: &Array2<f64>, alpha: f64) -> Result<Array2<f64>> {
    normalize_lanes(listener_side_speaker(scores, alpha)?, Axis(0))
}

/// Listener that reasons about the literal speaker:
/// `P_L1(p | a) ∝ P_S0(a | p)^alpha`.
pub fn speaker_side_listener(scores: &Array2<f64>, alpha: f64) -> Result<Array2<f64>> {
    check_alpha(alpha)?;
    let s0 = literal_speaker(scores)?;
    normalize_lanes(s0.mapv(|x| x.powf(alpha)), Axis(0))
}

/// Pragmatic speaker: `P_S1(a | p) ∝ P_L1(p | a)` with `L1` from
/// [`speaker_side_listener`].
pub fn pragmatic_speaker(scores: &Array2<f64>, alpha: f64) -> Result<Array2<f64>> {
    normalize_lanes(speaker_side_listener(scores, alpha)?, Axis(1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    #[test]
    fn worked_listener_chain() {
        let s = array![[0.9, 0.5], [0.1, 0.5]];
        let s1 = listener_side_speaker(&s, 1.0).unwrap();
        assert!((s1[[0, 0]] - 9.0 / 14.0).abs() < 1e-15);
        let l1 = pragmatic_listener(&s, 1.0).unwrap();
        // (9/14) / (9/14 + 1/6) = 27/34
        assert!((l1[[0, 0]] - 27.0 / 34.0).abs() < 1e-15);
        assert!((l1[[1, 0]] - 7.0 / 34.0).abs() < 1e-15);
    }

    #[test]
    fn worked_speaker_chain() {
        let s = array![[0.9, 0.5], [0.1, 0.5]];
        let s1 = pragmatic_speaker(&s, 1.0).unwrap();
        assert!((s1[[0, 0]] - 45.0 / 62.0).abs() < 1e-15);
        assert!((s1[[1, 1]] - 17.0 / 22.0).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_alpha_and_scores() {
        let s = array![[1.0]];
        assert!(matches!(pragmatic_speaker(&s, 0.0), Err(Error::InvalidAlpha(_))));
        assert!(matches!(pragmatic_listener(&s, f64::NAN), Err(Error::InvalidAlpha(_))));
        assert!(literal_listener(&array![[0.0, 1.0]]).is_err());
        assert!(literal_speaker(&array![[-1.0, 1.0]]).is_err());
    }
}
