use num_bigint::BigInt;

use crate::error::Result;
use crate::exactalg::{Den, ScaledExp};
use crate::qseries::{product_ratio, Binomial, Env, FactorSpec, ProductTerm, QMono, QSeries};
use crate::summation::{lattice_sum, LatticeOptions, LatticeSummand};

/// Everything a builder needs: the specialization, the exponent
/// denominator, the order (scaled) and the knob.
#[derive(Clone, Debug)]
pub struct Ctx {
    pub env: Env,
    pub den: Den,
    pub n: ScaledExp,
    pub m: i64,
    pub margin: usize,
    pub window_scale: i64,
}

impl Ctx {
    pub fn unit(&self) -> i64 {
        self.den.unit()
    }

    /// `c x^a y^b q^e` in whole exponents, with the environment applied.
    pub fn mono(&self, c: i64, a: i64, b: i64, e: i64) -> Result<QMono> {
        let u = self.unit();
        self.env.apply(&QMono::new(c, a * u, b * u, e * u), self.den)
    }

    /// `c q^e`.
    pub fn q(&self, c: i64, e: i64) -> QMono {
        QMono::q_pow(c, e * self.unit())
    }

    pub fn fin(&self, arg: QMono, step: i64, k: i64) -> Result<FactorSpec> {
        FactorSpec::finite(arg, step * self.unit(), k.max(0) as u64)
    }

    pub fn inf(&self, arg: QMono, step: i64) -> Result<FactorSpec> {
        FactorSpec::infinite(arg, step * self.unit())
    }

    /// `(q^s; q^s)_k`.
    pub fn qq(&self, s: i64, k: i64) -> Result<FactorSpec> {
        self.fin(self.q(1, s), s, k)
    }

    /// `(q^s; q^s)_inf`.
    pub fn qq_inf(&self, s: i64) -> Result<FactorSpec> {
        self.inf(self.q(1, s), s)
    }

    /// `a + b` as a factor.
    pub fn binom(&self, a: QMono, b: QMono) -> Binomial {
        Binomial::new(a, b)
    }

    pub fn prod(&self, numer: &[FactorSpec], denom: &[FactorSpec]) -> Result<QSeries> {
        self.prod_to(numer, denom, self.n)
    }

    pub fn prod_to(&self, numer: &[FactorSpec], denom: &[FactorSpec], n: ScaledExp) -> Result<QSeries> {
        product_ratio(numer, denom, self.den, n)
    }

    pub fn lattice<F>(&self, dim: usize, label: &str, term: F) -> Result<QSeries>
    where
        F: Fn(&[i64]) -> Result<Option<ProductTerm>>,
    {
        self.lattice_to(dim, label, self.n, term)
    }

    pub fn lattice_to<F>(&self, dim: usize, label: &str, n: ScaledExp, term: F) -> Result<QSeries>
    where
        F: Fn(&[i64]) -> Result<Option<ProductTerm>>,
    {
        let summand = LatticeSummand::new(dim, label, term);
        lattice_sum(&summand, self.den, n, LatticeOptions { margin: self.margin })
    }

    pub fn mul(&self, a: &QSeries, b: &QSeries) -> Result<QSeries> {
        a.mul_to(b, self.n)
    }

    /// `a * b` through order `n`, recomputing either factor further when the
    /// other has negative valuation.
    pub fn mul_complete(
        &self,
        a: impl Fn(ScaledExp) -> Result<QSeries>,
        b: impl Fn(ScaledExp) -> Result<QSeries>,
    ) -> Result<QSeries> {
        let n = self.n;
        let mut sa = a(n)?;
        let mut sb = b(n - sa.lo().min(0))?;
        if sb.lo() < 0 {
            sa = a(n - sb.lo())?;
            if sa.lo() < 0 {
                sb = b(n - sa.lo())?;
            }
        }
        sa.mul_to(&sb, n)?.require(n)
    }

    pub fn half(&self, s: &QSeries) -> Result<QSeries> {
        s.div_exact_int(&BigInt::from(2))
    }
}

/// `C(k, 2)`.
pub fn tri(k: i64) -> i64 {
    k * (k - 1) / 2
}

/// `(-1)^k`.
pub fn sign(k: i64) -> i64 {
    if k.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}
