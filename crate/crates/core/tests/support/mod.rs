//! Double-double arithmetic and an exact monomial-basis oracle for the
//! differentiation tests.
//!
//! The monomial coefficients of the classical Chebyshev polynomials are
//! integers, and for degrees up to 21 they stay below 2^53 through three
//! derivative passes, so the oracle side is exact. Evaluating both sides in
//! double-double precision leaves only the library's own coefficient-map
//! rounding in the comparison.

/// Unevaluated sum of two doubles; roughly 31 significant decimal digits.
#[derive(Clone, Copy, Debug)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, f64::mul_add(a, b, -p))
}

impl Dd {
    pub const fn new(hi: f64, lo: f64) -> Dd {
        Dd { hi, lo }
    }

    pub fn from_f64(x: f64) -> Dd {
        Dd::new(x, 0.0)
    }

    pub fn add(self, o: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, o.hi);
        let (hi, lo) = quick_two_sum(s, e + self.lo + o.lo);
        Dd { hi, lo }
    }

    pub fn neg(self) -> Dd {
        Dd::new(-self.hi, -self.lo)
    }

    pub fn sub(self, o: Dd) -> Dd {
        self.add(o.neg())
    }

    pub fn mul(self, o: Dd) -> Dd {
        let (p, e) = two_prod(self.hi, o.hi);
        let (hi, lo) = quick_two_sum(p, e + self.hi * o.lo + self.lo * o.hi);
        Dd { hi, lo }
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }
}

/// sqrt(2/pi) as hi + lo; the pair reconstructs it to ~1e-33.
/// The literals spell the true value, so they carry digits past f64.
#[allow(clippy::excessive_precision)]
pub const SQRT_2_OVER_PI: Dd = Dd::new(7.97884560802865406e-1, -4.98465440455546009e-17);
/// 1/sqrt(pi) as hi + lo.
#[allow(clippy::excessive_precision)]
pub const FRAC_1_SQRT_PI: Dd = Dd::new(5.64189583547756279e-1, 7.66772980658294061e-18);

/// Scale turning the classical polynomial of index k into the orthonormal one.
pub fn dd_basis_scale(k: usize) -> Dd {
    if k == 0 {
        FRAC_1_SQRT_PI
    } else {
        SQRT_2_OVER_PI
    }
}

/// Monomial coefficients (ascending powers, exact integers) of the classical
/// Chebyshev polynomial of degree k.
pub fn chebyshev_monomials(k: usize) -> Vec<f64> {
    let mut prev = vec![1.0];
    if k == 0 {
        return prev;
    }
    let mut cur = vec![0.0, 1.0];
    for _ in 1..k {
        let mut next = vec![0.0; cur.len() + 1];
        for (i, &c) in cur.iter().enumerate() {
            next[i + 1] += 2.0 * c;
        }
        for (i, &c) in prev.iter().enumerate() {
            next[i] -= c;
        }
        prev = cur;
        cur = next;
    }
    cur
}

/// Exact derivative of a monomial polynomial with integer coefficients.
pub fn monomial_derivative(c: &[f64]) -> Vec<f64> {
    c.iter()
        .enumerate()
        .skip(1)
        .map(|(i, &v)| i as f64 * v)
        .collect()
}

/// Horner evaluation of f64 coefficients in double-double.
pub fn dd_horner(c: &[f64], t: f64) -> Dd {
    let x = Dd::from_f64(t);
    let mut acc = Dd::from_f64(0.0);
    for &coeff in c.iter().rev() {
        acc = acc.mul(x).add(Dd::from_f64(coeff));
    }
    acc
}

/// Evaluates a series given by orthonormal coefficients in double-double,
/// using the classical Clenshaw recurrence.
pub fn dd_eval_orthonormal(coeffs: &[f64], t: f64) -> Dd {
    if coeffs.is_empty() {
        return Dd::from_f64(0.0);
    }
    let classical: Vec<Dd> = coeffs
        .iter()
        .enumerate()
        .map(|(k, &c)| Dd::from_f64(c).mul(dd_basis_scale(k)))
        .collect();
    let two_t = Dd::from_f64(2.0 * t);
    let mut b1 = Dd::from_f64(0.0);
    let mut b2 = Dd::from_f64(0.0);
    for k in (1..classical.len()).rev() {
        let b = classical[k].add(two_t.mul(b1)).sub(b2);
        b2 = b1;
        b1 = b;
    }
    classical[0].add(Dd::from_f64(t).mul(b1)).sub(b2)
}
