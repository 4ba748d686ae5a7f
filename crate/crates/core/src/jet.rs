//! Truncated Taylor series ("jets") at a real expansion point.
//!
//! The oscillatory tail correction needs exact derivatives of
//! `f(E)/(E − z)` at the truncation point; every form-factor kind can
//! produce its Taylor coefficients there, and the quotient with the pole
//! factor is a series product. Coefficient `k` stores f^{(k)}(a)/k!.

use num_complex::Complex64;

#[derive(Debug, Clone)]
pub(crate) struct Jet {
    pub coeffs: Vec<Complex64>,
}

impl Jet {
    pub fn constant(c: f64, order: usize) -> Self {
        let mut coeffs = vec![Complex64::new(0.0, 0.0); order];
        if order > 0 {
            coeffs[0] = Complex64::new(c, 0.0);
        }
        Jet { coeffs }
    }

    /// Taylor coefficients of a real polynomial Σ p_j E^j about E = a,
    /// by repeated synthetic division (exact).
    pub fn polynomial(p: &[f64], a: f64, order: usize) -> Self {
        let mut work: Vec<f64> = p.to_vec();
        let deg = work.len();
        let mut coeffs = vec![Complex64::new(0.0, 0.0); order];
        for c in coeffs.iter_mut().take(deg.min(order)) {
            // divide work by (E - a); remainder is the next coefficient
            let mut rem = 0.0f64;
            for w in work.iter_mut().rev() {
                let new = *w + rem * a;
                rem = new;
                *w = new;
            }
            // after the loop `work` holds quotient shifted by one with the
            // remainder in slot 0
            *c = Complex64::new(work[0], 0.0);
            work.remove(0);
            if work.is_empty() {
                break;
            }
        }
        Jet { coeffs }
    }

    /// (a + x)^alpha, a > 0: coefficients binom(alpha, k)·a^{alpha−k}.
    pub fn power_law(alpha: f64, a: f64, order: usize) -> Self {
        let mut coeffs = vec![Complex64::new(0.0, 0.0); order];
        let mut c = a.powf(alpha);
        for (k, slot) in coeffs.iter_mut().enumerate() {
            *slot = Complex64::new(c, 0.0);
            c *= (alpha - k as f64) / ((k as f64 + 1.0) * a);
        }
        Jet { coeffs }
    }

    /// e^{−(a+x)/lambda}: coefficients e^{−a/λ}·(−1/λ)^k/k!.
    pub fn exp_cutoff(lambda: f64, a: f64, order: usize) -> Self {
        let mut coeffs = vec![Complex64::new(0.0, 0.0); order];
        let mut c = (-a / lambda).exp();
        for (k, slot) in coeffs.iter_mut().enumerate() {
            *slot = Complex64::new(c, 0.0);
            c *= -1.0 / (lambda * (k as f64 + 1.0));
        }
        Jet { coeffs }
    }

    /// 1/((a − z) + x): coefficients (−1)^k/(a − z)^{k+1}.
    pub fn pole_factor(z: Complex64, a: f64, order: usize) -> Self {
        let base = (Complex64::new(a, 0.0) - z).inv();
        let mut coeffs = vec![Complex64::new(0.0, 0.0); order];
        let mut c = base;
        for slot in coeffs.iter_mut() {
            *slot = c;
            c *= -base;
        }
        Jet { coeffs }
    }

    pub fn mul(&self, other: &Jet) -> Jet {
        let order = self.coeffs.len().min(other.coeffs.len());
        let mut coeffs = vec![Complex64::new(0.0, 0.0); order];
        for (k, slot) in coeffs.iter_mut().enumerate() {
            let mut s = Complex64::new(0.0, 0.0);
            for i in 0..=k {
                s += self.coeffs[i] * other.coeffs[k - i];
            }
            *slot = s;
        }
        Jet { coeffs }
    }

    /// Series quotient self/other; other.coeffs[0] must be nonzero.
    pub fn div(&self, other: &Jet) -> Jet {
        let order = self.coeffs.len().min(other.coeffs.len());
        let inv0 = other.coeffs[0].inv();
        let mut coeffs = vec![Complex64::new(0.0, 0.0); order];
        for k in 0..order {
            let mut s = self.coeffs[k];
            for (c, o) in coeffs[..k].iter().zip(other.coeffs[1..=k].iter().rev()) {
                s -= c * o;
            }
            coeffs[k] = s * inv0;
        }
        Jet { coeffs }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: Complex64, b: Complex64) -> bool {
        (a - b).norm() <= 1e-12 * (1.0 + b.norm())
    }

    #[test]
    fn polynomial_shift_matches_binomial() {
        // (E^2 + 1) about a = 2: value 5, slope 4, curvature coeff 1
        let j = Jet::polynomial(&[1.0, 0.0, 1.0], 2.0, 5);
        assert!(close(j.coeffs[0], Complex64::new(5.0, 0.0)));
        assert!(close(j.coeffs[1], Complex64::new(4.0, 0.0)));
        assert!(close(j.coeffs[2], Complex64::new(1.0, 0.0)));
        assert!(close(j.coeffs[3], Complex64::new(0.0, 0.0)));
    }

    #[test]
    fn power_law_jet_matches_sqrt_derivatives() {
        // sqrt(4+x): 2, 1/4, -1/64
        let j = Jet::power_law(0.5, 4.0, 3);
        assert!(close(j.coeffs[0], Complex64::new(2.0, 0.0)));
        assert!(close(j.coeffs[1], Complex64::new(0.25, 0.0)));
        assert!(close(j.coeffs[2], Complex64::new(-1.0 / 64.0, 0.0)));
    }

    #[test]
    fn quotient_recovers_product() {
        let a = Jet::polynomial(&[1.0, 2.0, 3.0], 1.5, 8);
        let b = Jet::exp_cutoff(2.0, 1.5, 8);
        let prod = a.mul(&b);
        let back = prod.div(&b);
        for (x, y) in back.coeffs.iter().zip(a.coeffs.iter()) {
            assert!(close(*x, *y));
        }
    }

    #[test]
    fn pole_factor_is_geometric() {
        let z = Complex64::new(1.0, -0.5);
        let j = Jet::pole_factor(z, 3.0, 4);
        let d = Complex64::new(3.0, 0.0) - z;
        assert!(close(j.coeffs[0], d.inv()));
        assert!(close(j.coeffs[1], -(d * d).inv()));
        assert!(close(j.coeffs[2], (d * d * d).inv()));
    }
}
