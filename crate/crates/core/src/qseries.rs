//! Truncated integer q-expansions `a_0 + a_1 q + ... + a_M q^M`.

use rayon::prelude::*;
use serde::Serialize;

use crate::ternary_forms::TernaryQF;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct IntSeries {
    coefficients: Vec<i64>,
}

impl IntSeries {
    /// Panics on an empty coefficient list; a series always carries `a_0`.
    pub fn new(coefficients: Vec<i64>) -> Self {
        assert!(!coefficients.is_empty(), "a series has at least the constant term");
        IntSeries { coefficients }
    }

    /// The truncation `M`: coefficients are known for `0 <= m <= M`.
    pub fn truncation(&self) -> usize {
        self.coefficients.len() - 1
    }

    pub fn coefficients(&self) -> &[i64] {
        &self.coefficients
    }

    pub fn coefficient(&self, m: usize) -> Option<i64> {
        self.coefficients.get(m).copied()
    }

    /// `U_n: sum a_m q^m -> sum a_{nm} q^m`, truncated at `floor(M / n)`.
    pub fn u_operator(&self, n: usize) -> IntSeries {
        assert!(n >= 1, "U_n needs n >= 1");
        IntSeries::new(self.coefficients.iter().step_by(n).copied().collect())
    }
}

impl std::ops::Index<usize> for IntSeries {
    type Output = i64;

    fn index(&self, m: usize) -> &i64 {
        &self.coefficients[m]
    }
}

/// `theta(L; q) = sum_v q^{Q(v)}` up to `q^M`.
pub fn theta_series(form: &TernaryQF, max: u64) -> IntSeries {
    const SERIAL_LIMIT: u64 = 2000;
    let counts: Vec<u64> = if max <= SERIAL_LIMIT {
        form.representation_counts(max)
    } else {
        // blocks of coefficients are independent
        let blocks: Vec<(u64, u64)> = (0..=max)
            .step_by(SERIAL_LIMIT as usize)
            .map(|lo| (lo, (lo + SERIAL_LIMIT - 1).min(max)))
            .collect();
        blocks
            .into_par_iter()
            .flat_map_iter(|(lo, hi)| (lo..=hi).map(|m| form.count_representations(m)).collect::<Vec<_>>())
            .collect()
    };
    IntSeries::new(counts.into_iter().map(|c| c as i64).collect())
}

pub fn u_operator(f: &IntSeries, n: usize) -> IntSeries {
    f.u_operator(n)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn theta_examples() {
        let s3 = TernaryQF::sum_of_three_squares();
        assert_eq!(theta_series(&s3, 5).coefficients(), &[1, 6, 12, 8, 6, 24]);
        assert_eq!(theta_series(&s3, 0).coefficients(), &[1]);
        let g = TernaryQF::from_hessian([[8, 0, 4], [0, 8, 4], [4, 4, 6]]).unwrap();
        assert_eq!(theta_series(&g, 4).coefficients(), &[1, 0, 0, 8, 6]);
    }

    #[test]
    fn u_examples() {
        let f = IntSeries::new(vec![1, 6, 12, 8, 6, 24]);
        assert_eq!(f.u_operator(2).coefficients(), &[1, 12, 6]);
        assert_eq!(f.u_operator(1), f);
        assert_eq!(f.u_operator(9).coefficients(), &[1]);
        assert_eq!(f.u_operator(2).truncation(), 2);
    }

    #[test]
    fn u4_of_three_squares() {
        // r(4m) = r(m) for sums of three squares
        let theta = theta_series(&TernaryQF::sum_of_three_squares(), 16);
        assert_eq!(theta.u_operator(4).coefficients(), &[1, 6, 12, 8, 6]);
        assert_eq!(theta.u_operator(2).u_operator(2), theta.u_operator(4));
    }

    #[test]
    fn parallel_blocks_agree_with_histogram() {
        let g = TernaryQF::from_entries([4, 6, 10, -3, 2, 1]).unwrap();
        let direct = g.representation_counts(2500);
        let theta = theta_series(&g, 2500);
        assert!(theta.coefficients().iter().zip(&direct).all(|(a, &b)| *a as u64 == b));
    }
}
