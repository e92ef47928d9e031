//! Termwise differentiation in the orthonormal Chebyshev system.
//!
//! The basis satisfies d/dt T_k = 2k sum_{l < k, k + l odd} xi_l T_l with
//! xi_0 = 2^(-1/2) and xi_l = 1 for l >= 1. (In the classical basis the
//! first term of such sums is conventionally halved; with the sum written
//! out in full, the l = 0 weight is 2^(-1/2), which the symbolic oracle in
//! the test suite confirms.) Differentiating a finite expansion therefore
//! maps coefficients a to c with c_l = 2 xi_l sum_{k > l, k + l odd} k a_k.

use std::f64::consts::FRAC_1_SQRT_2;

use crate::series::ChebSeries;

/// One application of the coefficient map. Input of length M + 1 yields
/// output of length M; the suffix sums make the pass O(M).
pub fn derivative_pass(a: &[f64]) -> Vec<f64> {
    if a.len() <= 1 {
        return Vec::new();
    }
    let m = a.len() - 1;
    let mut out = vec![0.0; m];
    // acc[p] holds sum of k * a_k over already-visited k with k % 2 == p;
    // visiting l from high to low keeps exactly the k > l terms inside.
    let mut acc = [0.0f64; 2];
    for l in (0..m).rev() {
        let k = l + 1;
        acc[k % 2] += k as f64 * a[k];
        let xi = if l == 0 { FRAC_1_SQRT_2 } else { 1.0 };
        out[l] = 2.0 * xi * acc[(l + 1) % 2];
    }
    out
}

/// r-th derivative of an expansion, computed by applying the coefficient map
/// r times. The result is supported up to index M - r and has coefficient
/// length max(M + 1 - r, 0); r = 0 returns the input unchanged.
pub fn differentiate_series(series: &ChebSeries, r: usize) -> ChebSeries {
    let mut coeffs = series.coeffs().to_vec();
    for _ in 0..r {
        if coeffs.is_empty() {
            break;
        }
        coeffs = derivative_pass(&coeffs);
    }
    ChebSeries::new(coeffs).expect("derivative map preserves finiteness")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::lobatto_grid;
    use std::f64::consts::SQRT_2;

    const EPS: f64 = 1e-12;

    fn unit(k: usize) -> ChebSeries {
        let mut c = vec![0.0; k + 1];
        c[k] = 1.0;
        ChebSeries::new(c).unwrap()
    }

    #[test]
    fn derivative_of_t1_is_sqrt2_t0() {
        let d = differentiate_series(&unit(1), 1);
        assert_eq!(d.len(), 1);
        assert!((d.coeffs()[0] - SQRT_2).abs() < EPS);
    }

    #[test]
    fn derivative_of_t2_is_4_t1() {
        let d = differentiate_series(&unit(2), 1);
        assert_eq!(d.coeffs().len(), 2);
        assert!((d.coeffs()[1] - 4.0).abs() < EPS);
        assert_eq!(d.coeffs()[0], 0.0);
    }

    #[test]
    fn derivative_of_t3_hits_t2_and_t0() {
        // d/dt T_3 = 6 T_2 + 3 sqrt(2) T_0.
        let d = differentiate_series(&unit(3), 1);
        assert_eq!(d.len(), 3);
        assert!((d.coeffs()[0] - 3.0 * SQRT_2).abs() < EPS);
        assert_eq!(d.coeffs()[1], 0.0);
        assert!((d.coeffs()[2] - 6.0).abs() < EPS);
    }

    #[test]
    fn constants_differentiate_to_zero() {
        let d = differentiate_series(&unit(0), 1);
        assert!(d.is_empty());
        assert_eq!(d.norm_l2w(), 0.0);
    }

    #[test]
    fn zeroth_derivative_is_identity() {
        let s = ChebSeries::new(vec![0.3, -1.0, 2.5]).unwrap();
        assert_eq!(differentiate_series(&s, 0), s);
    }

    #[test]
    fn length_drops_by_one_per_order() {
        let s = ChebSeries::new(vec![1.0; 8]).unwrap();
        for r in 0..=9 {
            let d = differentiate_series(&s, r);
            assert_eq!(d.len(), 8usize.saturating_sub(r));
        }
    }

    #[test]
    fn repeated_passes_compose() {
        let s = ChebSeries::new(vec![0.1, 0.9, -0.4, 0.0, 0.7, 0.2]).unwrap();
        let twice = differentiate_series(&differentiate_series(&s, 1), 1);
        let once = differentiate_series(&s, 2);
        assert_eq!(twice, once);
    }

    #[test]
    fn matches_central_differences_inside_the_interval() {
        let s = ChebSeries::new(vec![0.2, -0.5, 0.8, 0.3, -0.1, 0.05]).unwrap();
        let d = differentiate_series(&s, 1);
        let h = 1e-5;
        for &t in lobatto_grid(17).iter().filter(|t| t.abs() < 0.95) {
            let fd = (s.eval(t + h).unwrap() - s.eval(t - h).unwrap()) / (2.0 * h);
            assert!((d.eval(t).unwrap() - fd).abs() < 1e-6);
        }
    }

    #[test]
    fn map_is_linear() {
        let f = ChebSeries::new(vec![0.4, -0.3, 0.9, 0.0, 0.2]).unwrap();
        let g = ChebSeries::new(vec![-1.0, 0.5, 0.0, 0.25, 0.6]).unwrap();
        let combo = f.add_scaled(&g, -2.5);
        let lhs = differentiate_series(&combo, 2);
        let rhs = differentiate_series(&f, 2).add_scaled(&differentiate_series(&g, 2), -2.5);
        for (a, b) in lhs.coeffs().iter().zip(rhs.coeffs()) {
            assert!((a - b).abs() < 1e-12);
        }
    }
}
