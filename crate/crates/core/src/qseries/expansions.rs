//! Sum sides of Euler's two expansions and of the Jacobi triple product.

use super::{poch_list, FactorSpec, QMono, QSeries, EXACT};
use crate::error::{Error, Result};
use crate::exactalg::{Den, ScaledExp};
use crate::trace;

/// Which side of the triple product to expand.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum JacobiForm {
    Sum,
    Product,
}

/// `1/(q;q)_k` for `k = 0, 1, ...`, each complete to `limit`.
struct InvPoch {
    den: Den,
    limit: ScaledExp,
    k: i64,
    cur: QSeries,
}

impl InvPoch {
    fn new(den: Den, limit: ScaledExp) -> InvPoch {
        InvPoch { den, limit, k: 0, cur: QSeries::one(den, limit) }
    }

    fn advance(&mut self) -> Result<()> {
        self.k += 1;
        let f = super::Binomial::one_minus(&QMono::q_pow(1, self.k * self.den.unit()));
        self.cur = self.cur.div_binomial(&f, self.limit)?;
        Ok(())
    }
}

/// Sums `sum_k pre(k) / (q;q)_k` where `pre(k)` has q-order `ord(k)`, a
/// function that is eventually increasing and exceeds `n` from `last` on.
fn euler_sum(den: Den, n: ScaledExp, pre: impl Fn(i64) -> Option<QMono>, last: i64) -> Result<QSeries> {
    let terms: Vec<QMono> = (0..=last).filter_map(&pre).collect();
    let min_ord = terms.iter().map(|m| m.q).min().unwrap_or(0).min(0);
    let mut inv = InvPoch::new(den, n - min_ord);
    let mut out = QSeries::zero(den, n);
    for k in 0..=last {
        if k > 0 {
            inv.advance()?;
        }
        if let Some(m) = pre(k) {
            if m.q <= n {
                out = out.try_add(&inv.cur.mul_mono(&m).truncate(n))?;
            }
        }
    }
    Ok(out)
}

/// Least `k` from which `a*C(k,2) + b*k > n` for every larger index.
fn quad_horizon(a: i64, b: i64, n: ScaledExp) -> i64 {
    let f = |k: i64| a * k * (k - 1) / 2 + b * k;
    let mut k = 0;
    loop {
        // past the vertex and above n
        if f(k) > n && f(k + 1) >= f(k) {
            return k;
        }
        k += 1;
    }
}

/// `sum_{k>=0} q^{C(k,2)} z^k / (q;q)_k`, which equals `(-z;q)_inf`.
pub fn euler_a(z: &QMono, den: Den, n: ScaledExp) -> Result<QSeries> {
    let _t = trace::enter("euler_a", || z.display(den));
    if z.is_zero() {
        return Ok(QSeries::one(den, n));
    }
    let d = den.unit();
    let last = quad_horizon(d, z.q, n);
    euler_sum(den, n, |k| Some(z.pow(k).unwrap().shift_q(d * k * (k - 1) / 2)), last)
}

/// `sum_{k>=0} z^k / (q;q)_k`, which equals `1/(z;q)_inf`. The q-order of
/// `z` must be positive.
pub fn euler_b(z: &QMono, den: Den, n: ScaledExp) -> Result<QSeries> {
    let _t = trace::enter("euler_b", || z.display(den));
    if z.is_zero() {
        return Ok(QSeries::one(den, n));
    }
    if z.q <= 0 {
        return Err(Error::Grading(format!(
            "sum of z^k/(q;q)_k with z = {} has q-order {} <= 0",
            z.display(den),
            crate::exactalg::fmt_exp(z.q, den)
        )));
    }
    let last = quad_horizon(0, z.q, n);
    euler_sum(den, n, |k| z.pow(k), last)
}

/// Jacobi's triple product, `sum_{k in Z} q^{C(k,2)} w^k` or
/// `(q, -w, -q/w; q)_inf`.
pub fn jacobi_triple(w: &QMono, den: Den, n: ScaledExp, form: JacobiForm) -> Result<QSeries> {
    let _t = trace::enter(
        match form {
            JacobiForm::Sum => "jacobi_sum",
            JacobiForm::Product => "jacobi_product",
        },
        || w.display(den),
    );
    let w_inv = w
        .unit_inverse()
        .ok_or_else(|| Error::Inversion(format!("triple product needs a unit argument, got {}", w.display(den))))?;
    let d = den.unit();
    match form {
        JacobiForm::Product => {
            let fs = [
                FactorSpec::infinite(QMono::q_pow(1, d), d)?,
                FactorSpec::infinite(w.neg(), d)?,
                FactorSpec::infinite(w_inv.neg().shift_q(d), d)?,
            ];
            poch_list(&fs, den, n)
        }
        JacobiForm::Sum => {
            // k >= 0 uses w^k; k = -j < 0 has exponent C(j+1,2) in q and w^-j.
            let mut out = QSeries::zero(den, EXACT);
            let up = quad_horizon(d, w.q, n);
            for k in 0..up {
                let m = w.pow(k).unwrap().shift_q(d * k * (k - 1) / 2);
                if m.q <= n {
                    out = out.try_add(&QSeries::from_mono(den, &m, EXACT))?;
                }
            }
            let down = quad_horizon(d, d - w.q, n);
            for j in 1..down {
                let m = w_inv.pow(j).unwrap().shift_q(d * j * (j + 1) / 2);
                if m.q <= n {
                    out = out.try_add(&QSeries::from_mono(den, &m, EXACT))?;
                }
            }
            Ok(out.truncate(n))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::ParamPoly;
    use crate::qseries::poch;

    const D: Den = Den::DEFAULT;

    fn ints(s: &QSeries, upto: i64) -> Vec<i64> {
        s.int_coeffs(upto).unwrap().iter().map(|c| i64::try_from(c).unwrap()).collect()
    }

    fn qm(c: i64, x: i64, y: i64, q: i64) -> QMono {
        QMono::new(c, 2 * x, 2 * y, 2 * q)
    }

    #[test]
    fn euler_examples() {
        assert_eq!(ints(&euler_a(&qm(1, 0, 0, 1), D, 8).unwrap(), 4), vec![1, 1, 1, 2, 2]);
        assert_eq!(euler_a(&QMono::zero(), D, 8).unwrap(), QSeries::one(D, 8));
        let s = euler_a(&qm(1, 1, 0, 1), D, 8).unwrap();
        assert_eq!(s.coeff(2), ParamPoly::from_terms(D, [(1, 2, 0)]));
        assert_eq!(ints(&euler_b(&qm(1, 0, 0, 1), D, 8).unwrap(), 4), vec![1, 1, 2, 3, 5]);
        assert_eq!(euler_b(&QMono::zero(), D, 8).unwrap(), QSeries::one(D, 8));
        assert!(matches!(euler_b(&qm(1, 1, 0, 0), D, 8), Err(Error::Grading(_))));
    }

    #[test]
    fn euler_sums_match_products() {
        let n = 80;
        for z in [qm(1, 0, 0, 1), qm(1, 0, 0, 2), qm(-1, 0, 0, 1), qm(1, 1, 0, 1), qm(1, 0, 2, 1)] {
            let a = euler_a(&z, D, n).unwrap();
            let pa = poch(&FactorSpec::infinite(z.neg(), 2).unwrap(), D, n).unwrap();
            assert_eq!(a, pa);
            assert_eq!(a.ncut(), n);
            let b = euler_b(&z, D, n).unwrap();
            let pb = poch(&FactorSpec::infinite(z.clone(), 2).unwrap(), D, n).unwrap();
            assert_eq!(b.mul_to(&pb, n).unwrap(), QSeries::one(D, n));
        }
    }

    #[test]
    fn euler_a_with_negative_order() {
        // (-z;q)_inf with z = q^-2: finite-order factors 1 + q^-2, 1 + q^-1, 2, ...
        let z = qm(1, 0, 0, -2);
        let a = euler_a(&z, D, 20).unwrap();
        let p = poch(&FactorSpec::infinite(z.neg(), 2).unwrap(), D, 20).unwrap();
        assert_eq!(a, p);
    }

    #[test]
    fn jacobi_examples() {
        let n = 80;
        for w in [qm(1, 0, 0, 1), qm(-1, 0, 0, 1), qm(1, 0, 0, 2), qm(-1, 0, 0, 2), qm(1, 1, 0, 1), qm(1, 0, 1, 2)] {
            let s = jacobi_triple(&w, D, n, JacobiForm::Sum).unwrap();
            let p = jacobi_triple(&w, D, n, JacobiForm::Product).unwrap();
            assert_eq!(s, p, "w = {}", w.display(D));
        }
        // w = q: k = 0 and k = -1 both contribute q^0
        let s = jacobi_triple(&qm(1, 0, 0, 1), D, 10, JacobiForm::Sum).unwrap();
        assert_eq!(s.coeff(0), ParamPoly::constant(D, 2));
        // w = -q: the product has the factor (1 - 1)
        assert!(jacobi_triple(&qm(-1, 0, 0, 1), D, 10, JacobiForm::Sum).unwrap().is_zero());
        // w = x q^2: q^2 carries x (k = 1) and x^-4 (k = -4)
        let s = jacobi_triple(&qm(1, 1, 0, 2), D, 10, JacobiForm::Sum).unwrap();
        assert_eq!(s.coeff(4), ParamPoly::from_terms(D, [(1, 2, 0), (1, -8, 0)]));
    }
}
