use std::sync::OnceLock;

use super::ctx::{sign, tri, Ctx};
use super::IdentityRecord;
use crate::contour::{constant_term, ContourOptions, ZFactor, ZKind};
use crate::error::{Error, Result};
use crate::exactalg::Den;
use crate::qseries::{
    euler_a, euler_b, jacobi_triple, poch_list, Binding, Binomial, Env, JacobiForm, Param, ProductTerm, QMono, QSeries,
};
use crate::summation::{gst_rhs, phi_series, schur, PhiSpec, GST_MAX_M};

const X: &[Param] = &[Param::X];
const XY: &[Param] = &[Param::X, Param::Y];
const NONE: &[Param] = &[];

pub(super) fn records() -> &'static [IdentityRecord] {
    static RECORDS: OnceLock<Vec<IdentityRecord>> = OnceLock::new();
    RECORDS.get_or_init(build)
}

fn rec(
    id: &'static str,
    reference: &'static str,
    summary: &'static str,
    lhs: super::Builder,
    rhs: super::Builder,
) -> IdentityRecord {
    IdentityRecord {
        id,
        reference,
        summary,
        params: NONE,
        knob: None,
        default_order: 40,
        tags: &[],
        lhs,
        rhs,
        aux: None,
        specialize: None,
        describe_knob: None,
        excludes: None,
    }
}

trait With {
    fn params(self, p: &'static [Param]) -> Self;
    fn knob(self, lo: i64, hi: i64) -> Self;
    fn order(self, n: i64) -> Self;
    fn tags(self, t: &'static [&'static str]) -> Self;
    fn aux(self, b: super::Builder) -> Self;
    fn excludes(self, why: &'static str, f: super::Exclusion) -> Self;
}

impl With for IdentityRecord {
    fn params(mut self, p: &'static [Param]) -> Self {
        self.params = p;
        self
    }
    fn knob(mut self, lo: i64, hi: i64) -> Self {
        self.knob = Some(lo..=hi);
        self
    }
    fn order(mut self, n: i64) -> Self {
        self.default_order = n;
        self
    }
    fn tags(mut self, t: &'static [&'static str]) -> Self {
        self.tags = t;
        self
    }
    fn aux(mut self, b: super::Builder) -> Self {
        self.aux = Some(b);
        self
    }
    fn excludes(mut self, why: &'static str, f: super::Exclusion) -> Self {
        self.excludes = Some((why, f));
        self
    }
}

fn build() -> Vec<IdentityRecord> {
    let mut v = vec![
        rec("rr1", "first Rogers-Ramanujan identity", "sum q^{k^2}/(q;q)_k = 1/(q,q^4;q^5)_inf", rr1_lhs, rr1_rhs)
            .tags(&["single", "classical"]),
        rec("rr2", "second Rogers-Ramanujan identity", "sum q^{k^2+k}/(q;q)_k = 1/(q^2,q^3;q^5)_inf", rr2_lhs, rr2_rhs)
            .tags(&["single", "classical"]),
        rec(
            "uz1",
            "Uncu-Zudilin double sum, first identity",
            "sum q^{j^2+2jk+2k^2}/((q;q)_j (q^2;q^2)_k) = (q^3;q^3)_inf^2/((q;q)_inf (q^6;q^6)_inf)",
            uz1_lhs,
            uz1_rhs,
        )
        .tags(&["double"]),
        rec(
            "uz2",
            "Uncu-Zudilin double sum, second identity",
            "sum q^{j^2+2jk+2k^2+j+2k}/((q;q)_j (q^2;q^2)_k) = (q^6;q^6)_inf^2/((q^2;q^2)_inf (q^3;q^3)_inf)",
            uz2_lhs,
            uz2_rhs,
        )
        .tags(&["double"]),
        rec(
            "cw1",
            "Cao-Wang parametric double sum, first identity",
            "sum (-1)^j x^{j+k} q^{j^2+2jk+2k^2}/((q;q)_j (q^2;q^2)_k) = (qx;q^2)_inf",
            cw1_lhs,
            cw1_rhs,
        )
        .params(X)
        .tags(&["double", "parametric"]),
        rec(
            "cw2",
            "Cao-Wang parametric double sum, second identity",
            "sum x^{j+2k} q^{j^2+2jk+2k^2+k}/((q;q)_j (q^2;q^2)_k) = (-qx;q)_inf",
            cw2_lhs,
            cw2_rhs,
        )
        .params(X)
        .tags(&["double", "parametric"]),
        rec(
            "thm11",
            "two-parameter double sum as a single sum of products",
            "sum x^j y^{2k} q^{j^2+2jk+2k^2-j-k}/((q;q)_j (q^2;q^2)_k) = sum_k (yq^k;q)_inf q^{C(k,2)} prod_{i<k}(y+xq^i)/(q;q)_k",
            thm11_lhs,
            thm11_rhs,
        )
        .params(XY)
        .tags(&["double", "parametric"]),
        rec(
            "cor12",
            "one-parameter specialization x = 0 of the two-parameter double sum",
            "sum y^{2k} q^{2k^2-k}/(q^2;q^2)_k = sum_k (yq^k;q)_inf y^k q^{C(k,2)}/(q;q)_k",
            cor12_lhs,
            cor12_rhs,
        )
        .params(&[Param::Y])
        .tags(&["single", "parametric"]),
        rec(
            "ram532",
            "Ramanujan lost notebook, modulus 12 (even)",
            "sum (-q;q^2)_k q^{k^2}/(q;q)_{2k} = (q^6;q^6)_inf^2/((q;q)_inf (q^12;q^12)_inf)",
            ram532_lhs,
            ram532_rhs,
        )
        .tags(&["single", "classical"]),
        rec(
            "ram344",
            "Ramanujan lost notebook, modulus 12 (odd)",
            "sum (-q;q^2)_k q^{k^2+2k}/(q;q)_{2k+1} = (q^12;q^12)_inf (-q^6;q^6)_inf/((q;q)_inf (-q^2;q^2)_inf)",
            ram344_lhs,
            ram344_rhs,
        )
        .tags(&["single", "classical"]),
        rec(
            "gst",
            "Garrett-Ismail-Stanton generalized Rogers-Ramanujan identities",
            "sum q^{k^2+mk}/(q;q)_k = (-1)^m q^{-C(m,2)} [E_{m-2}/(q,q^4;q^5)_inf - D_{m-2}/(q^2,q^3;q^5)_inf]",
            gst_lhs,
            gst_rhs_b,
        )
        .knob(0, GST_MAX_M)
        .tags(&["single", "family"]),
        rec(
            "cor13",
            "generalized Slater pair with Schur polynomials in q^4",
            "sum q^{k^2+2mk}/((q^2;q^2)_k (q^{1+2m};q^2)_k) = (-1)^m q^{2m-2m^2}/(q^{1+2m};q^2)_inf [E_{m-2}(q^4)/(q^4,q^16;q^20)_inf - D_{m-2}(q^4)/(q^8,q^12;q^20)_inf]",
            cor13_lhs,
            cor13_rhs,
        )
        .knob(0, 4)
        .tags(&["single", "family"]),
        rec(
            "slater98",
            "Slater's list, modulus 20 (even)",
            "sum q^{k^2}/(q;q)_{2k} = (q^10,q^8,q^2;q^10)_inf (q^14,q^6;q^20)_inf/(q;q)_inf",
            slater98_lhs,
            slater98_rhs,
        )
        .tags(&["single", "classical"]),
        rec(
            "slater96",
            "Slater's list, modulus 20 (odd)",
            "sum q^{k^2+2k}/(q;q)_{2k+1} = (q^10,q^6,q^4;q^10)_inf (q^18,q^2;q^20)_inf/(q;q)_inf",
            slater96_lhs,
            slater96_rhs,
        )
        .tags(&["single", "classical"]),
        rec(
            "thm14",
            "two-parameter triple sum with a (x;q)_j numerator",
            "sum (x;q)_j (-x)^{k+2l} y^{k+l} q^{j+C(k,2)+C(j+k+2l,2)}/((q;q)_j (q;q)_k (q^2;q^2)_l) = (qx,xy;q^2)_inf (-q;q)_inf",
            thm14_lhs,
            thm14_rhs,
        )
        .params(XY)
        .order(30)
        .tags(&["triple", "parametric"]),
        rec(
            "thm15",
            "two-parameter triple sum, even form",
            "sum (x^2y^2;q^2)_k x^j y^{2j+2l} (-1)^{j+k} q^{T(T-1)+l^2+k}/((q;q)_j (q^2;q^2)_k (q^2;q^2)_l) = [(q;q^2)(xy;q)(-y;q) + (q;q^2)(-xy;q)(y;q)]_inf/2",
            thm15_lhs,
            thm15_rhs,
        )
        .params(XY)
        .order(30)
        .tags(&["triple", "parametric"]),
        rec(
            "thm16",
            "two-parameter triple sum, odd form",
            "sum (x^2y^2;q^2)_k x^j y^{2j+2l} (-1)^{j+k} q^{T(T-1)+l^2+3k}/(...) = q [(q;q^2)(xy;q)(-y/q;q) - (q;q^2)(-xy;q)(y/q;q)]_inf/(2y(1-qx))",
            thm16_lhs,
            thm16_rhs,
        )
        .params(XY)
        .order(30)
        .excludes(DIVISOR, divisor_vanishes)
        .tags(&["triple", "parametric"]),
        rec(
            "cor17",
            "one-parameter triple sums with a shifted exponent",
            "sum (x^2;q^2)_k x^j (-1)^k q^{T(T-1)+l^2+k-m(j+2l)}/(...) = (-q^{-m};q)_m (-x;q)_inf",
            cor17_lhs,
            cor17_rhs,
        )
        .params(X)
        .knob(0, 4)
        .order(30)
        .tags(&["triple", "parametric", "family"]),
        rec(
            "cor18a",
            "one-parameter triple sum, (x;q^2)_k numerator, linear part k",
            "sum (x;q^2)_k x^{j+l} (-1)^{j+k} q^{T(T-1)+l^2+k}/(...) = (q,x;q^2)_inf",
            cor18a_lhs,
            cor18ab_rhs,
        )
        .params(X)
        .order(30)
        .tags(&["triple", "parametric"]),
        rec(
            "cor18b",
            "one-parameter triple sum, (x;q^2)_k numerator, linear part -j+k-2l",
            "sum (x;q^2)_k x^{j+l} (-1)^{j+k} q^{T(T-1)+l^2-j+k-2l}/(...) = (q,x;q^2)_inf",
            cor18b_lhs,
            cor18ab_rhs,
        )
        .params(X)
        .order(30)
        .tags(&["triple", "parametric"]),
        rec(
            "cor18c",
            "one-parameter triple sum, (x;q^2)_k numerator, linear part j+k+2l",
            "sum (x;q^2)_k x^{j+l} (-1)^{j+k} q^{T(T-1)+l^2+j+k+2l}/(...) = (q,q^2x;q^2)_inf",
            cor18c_lhs,
            cor18c_rhs,
        )
        .params(X)
        .order(30)
        .tags(&["triple", "parametric"]),
        rec(
            "cor19",
            "one-parameter triple sums, odd form with a shifted exponent",
            "sum (x^2;q^2)_k x^j (-1)^k q^{T(T-1)+l^2+3k-(m-1)(j+2l)}/(...) = q^m (-q^{-m};q)_m (-x;q)_m (-q^{m+1}x;q)_inf",
            cor19_lhs,
            cor19_rhs,
        )
        .params(X)
        .knob(0, 4)
        .order(30)
        .tags(&["triple", "parametric", "family"]),
        rec(
            "cor110a",
            "one-parameter triple sum, linear part 3k",
            "sum (x;q^2)_k x^{j+l} (-1)^{j+k} q^{T(T-1)+l^2+3k}/(...) = (q^3,x;q^2)_inf",
            cor110a_lhs,
            cor110a_rhs,
        )
        .params(X)
        .order(30)
        .tags(&["triple", "parametric"]),
        rec(
            "cor110b",
            "one-parameter triple sum, linear part 2j+3k+4l",
            "sum (x;q^2)_k x^{j+l} (-1)^{j+k} q^{T(T-1)+l^2+2j+3k+4l}/(...) = (q^3,q^2x;q^2)_inf",
            cor110b_lhs,
            cor110b_rhs,
        )
        .params(X)
        .order(30)
        .tags(&["triple", "parametric"]),
        rec("unit-rel", "Euler's parity relation", "(q,-q,-q^2;q^2)_inf = 1", unit_lhs, unit_rhs)
            .tags(&["product", "classical"]),
        rec("euler-a", "Euler's first expansion", "sum q^{C(k,2)} x^k/(q;q)_k = (-x;q)_inf", euler_a_lhs, euler_a_rhs)
            .params(X)
            .tags(&["single", "classical", "parametric"]),
        rec("euler-b", "Euler's second expansion", "sum x^k q^k/(q;q)_k = 1/(xq;q)_inf", euler_b_lhs, euler_b_rhs)
            .params(X)
            .tags(&["single", "classical", "parametric"]),
        rec(
            "jacobi",
            "Jacobi triple product",
            "sum_{k in Z} q^{C(k,2)} x^k = (q,-x,-q/x;q)_inf",
            jacobi_lhs,
            jacobi_rhs,
        )
        .params(X)
        .tags(&["bilateral", "classical", "parametric"]),
        rec(
            "qbinom",
            "q-binomial theorem",
            "sum (x;q)_k (yq)^k/(q;q)_k = (xyq;q)_inf/(yq;q)_inf",
            qbinom_lhs,
            qbinom_rhs,
        )
        .params(XY)
        .tags(&["single", "classical", "parametric"]),
        rec(
            "heine-a",
            "Heine transformation (second form)",
            "2phi1(a,b;c;q,z) = (c/a,az;q)_inf/(c,z;q)_inf 2phi1(abz/c,a;az;q,c/a)",
            heine_a_lhs,
            heine_a_rhs,
        )
        .knob(0, HEINE.len() as i64 - 1)
        .order(30)
        .tags(&["single", "transformation"]),
        rec(
            "heine-b",
            "Heine transformation (third form)",
            "2phi1(a,b;c;q,z) = (abz/c;q)_inf/(z;q)_inf 2phi1(c/a,c/b;c;q,abz/c)",
            heine_b_lhs,
            heine_b_rhs,
        )
        .knob(0, HEINE.len() as i64 - 1)
        .order(30)
        .tags(&["single", "transformation"]),
        rec(
            "threeterm-aa",
            "the two-parameter single sum as a pair of 2phi1 series",
            "sum_k (yq^k;q)_inf q^{C(k,2)} prod_{i<k}(y+xq^i)/(q;q)_k = [(y,x/y,q/y;q)_inf 2phi1(qy/x,0;-q;q,-qx/y^2) + (y -> -y, x -> x)]/(2(-q;q)_inf)",
            thm11_rhs,
            threeterm_rhs,
        )
        .params(XY)
        .knob(0, THREETERM.len() as i64 - 1)
        .order(30)
        .tags(&["single", "transformation"]),
        rec(
            "int-cc",
            "constant-term integral for the two-parameter double sum",
            "CT_z (-xz;q)_inf (q,z,q/z;q)_inf/(y^2z^2;q^2)_inf = sum_k (yq^k;q)_inf q^{C(k,2)} prod_{i<k}(y+xq^i)/(q;q)_k",
            int_cc_lhs,
            thm11_rhs,
        )
        .params(XY)
        .order(30)
        .aux(thm11_lhs)
        .tags(&["integral", "parametric"]),
        rec(
            "int-a3",
            "constant-term integral for the (x;q)_j triple sum",
            "CT_z (-qz;q)_inf/(-qz/x;q)_inf (-yz;q)_inf/(yz^2;q^2)_inf (q,xz^-1,q z/x;q)_inf = (-q;q)_inf (qx,xy;q^2)_inf",
            int_a3_lhs,
            thm14_rhs,
        )
        .params(XY)
        .order(30)
        .aux(thm14_lhs)
        .tags(&["integral", "parametric"]),
        rec(
            "int-c3",
            "constant-term integral for the even triple sum",
            "CT_z of four Euler, q-binomial and Jacobi factors = [(q;q^2)(xy;q)(-y;q) + (q;q^2)(-xy;q)(y;q)]_inf/2",
            int_c3_lhs,
            thm15_rhs,
        )
        .params(XY)
        .order(30)
        .aux(thm15_lhs)
        .tags(&["integral", "parametric"]),
        rec(
            "int-e3",
            "constant-term integral for the odd triple sum",
            "CT_z of four Euler, q-binomial and Jacobi factors = q [(q;q^2)(xy;q)(-y/q;q) - (q;q^2)(-xy;q)(y/q;q)]_inf/(2y(1-qx))",
            int_e3_lhs,
            thm16_rhs,
        )
        .params(XY)
        .order(30)
        .aux(thm16_lhs)
        .excludes(DIVISOR, divisor_vanishes)
        .tags(&["integral", "parametric"]),
        rec(
            "phi-even",
            "2phi1 with opposite numerator parameters",
            "2phi1(x,-x;-q;q,yq) = (x^2yq;q^2)_inf/(yq;q^2)_inf",
            phi_even_lhs,
            phi_even_rhs,
        )
        .params(XY)
        .tags(&["single", "parametric"]),
        rec(
            "phi-odd",
            "2phi1 in base q^2 with numerators x, xq",
            "2phi1(x,xq;q;q^2,y^2q^2) = [(xyq;q)/(yq;q) + (-xyq;q)/(-yq;q)]_inf/2",
            phi_odd_lhs,
            phi_odd_rhs,
        )
        .params(XY)
        .tags(&["single", "parametric"]),
        rec(
            "phi-sq",
            "2phi1 in base q^2 with numerators aq, aq^2",
            "2phi1(aq,aq^2;q^3;q^2,t^2) = (1-q)/(2(1-a)t) [(at;q)/(t;q) - (-at;q)/(-t;q)]_inf, a = xq, t = yq",
            phi_sq_lhs,
            phi_sq_rhs,
        )
        .params(XY)
        .excludes(DIVISOR, divisor_vanishes)
        .tags(&["single", "parametric"]),
        rec(
            "bisect-a",
            "even bisection of the second parametric double sum",
            "sum x^{2j+2k} q^{4j^2+4jk+2k^2+k}/((q;q)_{2j} (q^2;q^2)_k) = [(-qx;q)_inf + (qx;q)_inf]/2",
            bisect_a_lhs,
            bisect_a_rhs,
        )
        .params(X)
        .tags(&["double", "parametric"]),
        rec(
            "bisect-b",
            "odd bisection of the second parametric double sum",
            "sum x^{1+2j+2k} q^{4j^2+4jk+2k^2+4j+3k+1}/((q;q)_{2j+1} (q^2;q^2)_k) = [(-qx;q)_inf - (qx;q)_inf]/2",
            bisect_b_lhs,
            bisect_b_rhs,
        )
        .params(X)
        .tags(&["double", "parametric"]),
        rec(
            "wcy-a",
            "dissection of (-q;q^2)_inf, even part",
            "(-q;q^2)_inf + (q;q^2)_inf = 2 (q^16,-q^6,-q^10;q^16)_inf/(q^4;q^4)_inf",
            wcy_a_lhs,
            wcy_a_rhs,
        )
        .order(60)
        .tags(&["product"]),
        rec(
            "wcy-b",
            "dissection of (-q;q^2)_inf, odd part",
            "(-q;q^2)_inf - (q;q^2)_inf = 2q (q^16,-q^2,-q^14;q^16)_inf/(q^4;q^4)_inf",
            wcy_b_lhs,
            wcy_b_rhs,
        )
        .order(60)
        .tags(&["product"]),
        rec(
            "thm41a",
            "modulus 8 double sum, even part",
            "sum q^{4j^2+4jk+2k^2-j}/((q;q)_{2j} (q^2;q^2)_k) = (q^8,-q^3,-q^5;q^8)_inf/(q^2;q^2)_inf",
            thm41a_lhs,
            mod8_a_rhs,
        )
        .tags(&["double"]),
        rec(
            "thm41b",
            "modulus 8 double sum, odd part",
            "sum q^{4j^2+4jk+2k^2+3j+2k}/((q;q)_{2j+1} (q^2;q^2)_k) = (q^8,-q,-q^7;q^8)_inf/(q^2;q^2)_inf",
            thm41b_lhs,
            mod8_b_rhs,
        )
        .tags(&["double"]),
        rec(
            "thm42a",
            "modulus 8 triple sums with a shifted exponent, even part",
            "sum (q;q^2)_k (-1)^k q^{S(S-1)+l^2+j+k-2m(j+l)}/((q;q)_{2j} (q^2;q^2)_k (q^2;q^2)_l) = (-q^{-m};q)_m (q^8,-q^3,-q^5;q^8)_inf/(q^2;q^2)_inf, S = 2j+k+l",
            thm42a_lhs,
            thm42a_rhs,
        )
        .knob(0, 4)
        .tags(&["triple", "family"]),
        rec(
            "thm42b",
            "modulus 8 triple sums with a shifted exponent, odd part",
            "sum (q;q^2)_k (-1)^k q^{(S+1)S+l^2+j+k-m(1+2j+2l)}/((q;q)_{2j+1} (q^2;q^2)_k (q^2;q^2)_l) = (-q^{-m};q)_m (q^8,-q,-q^7;q^8)_inf/(q^2;q^2)_inf, S = 2j+k+l",
            thm42b_lhs,
            thm42b_rhs,
        )
        .knob(0, 4)
        .tags(&["triple", "family"]),
        rec(
            "thm43a",
            "modulus 8 triple sum with a (q^-1;q^2)_k numerator, even part",
            "sum (q^-1;q^2)_k (-1)^k q^{S(S-1)+l^2+j+3k+2l}/((q;q)_{2j} (q^2;q^2)_k (q^2;q^2)_l) = (q^8,-q^3,-q^5;q^8)_inf/(q^2;q^2)_inf",
            thm43a_lhs,
            mod8_a_rhs,
        )
        .tags(&["triple"]),
        rec(
            "thm43b",
            "modulus 8 triple sum with a (q^-1;q^2)_k numerator, odd part",
            "sum (q^-1;q^2)_k (-1)^k q^{(S+1)S+l^2+j+3k+2l}/((q;q)_{2j+1} (q^2;q^2)_k (q^2;q^2)_l) = (q^8,-q,-q^7;q^8)_inf/(q^2;q^2)_inf",
            thm43b_lhs,
            mod8_b_rhs,
        )
        .tags(&["triple"]),
        rec(
            "thm44a",
            "one-parameter triple sum with a modulus 4 product",
            "sum (x;q^2)_k (-1)^k x^{-l} q^{T(T-1)+l^2+j+k+2l}/((q;q)_j (q^2;q^2)_k (q^2;q^2)_l) = (-qx,-q^3/x;q^4)_inf/(q^2;q^4)_inf",
            thm44a_lhs,
            thm44a_rhs,
        )
        .params(X)
        .tags(&["triple", "parametric"]),
        rec(
            "thm44b",
            "one-parameter triple sum with a modulus 4 product, shifted",
            "sum (x;q^2)_k (-1)^k x^{-l} q^{T(T-1)+l^2+2j+3k+4l}/((q;q)_j (q^2;q^2)_k (q^2;q^2)_l) = (-q^3x,-q^5/x;q^4)_inf/(q^2;q^4)_inf",
            thm44b_lhs,
            thm44b_rhs,
        )
        .params(X)
        .tags(&["triple", "parametric"]),
    ];
    for r in &mut v {
        match r.id {
            "heine-a" | "heine-b" => r.describe_knob = Some(describe_heine),
            "threeterm-aa" => {
                r.specialize = Some(threeterm_env);
                r.describe_knob = Some(describe_threeterm);
            }
            _ => {}
        }
    }
    v
}

// single sums

fn single(c: &Ctx, label: &str, term: impl Fn(i64) -> Result<Option<ProductTerm>>) -> Result<QSeries> {
    c.lattice(1, label, |i| term(i[0]))
}

fn rr1_lhs(c: &Ctx) -> Result<QSeries> {
    single(c, "rr1", |k| Ok(Some(ProductTerm::new(c.q(1, k * k)).over(c.qq(1, k)?))))
}

fn rr1_rhs(c: &Ctx) -> Result<QSeries> {
    c.prod(&[], &[c.inf(c.q(1, 1), 5)?, c.inf(c.q(1, 4), 5)?])
}

fn rr2_lhs(c: &Ctx) -> Result<QSeries> {
    single(c, "rr2", |k| Ok(Some(ProductTerm::new(c.q(1, k * k + k)).over(c.qq(1, k)?))))
}

fn rr2_rhs(c: &Ctx) -> Result<QSeries> {
    c.prod(&[], &[c.inf(c.q(1, 2), 5)?, c.inf(c.q(1, 3), 5)?])
}

fn gst_lhs(c: &Ctx) -> Result<QSeries> {
    let m = c.m;
    single(c, &format!("gst m={m}"), |k| Ok(Some(ProductTerm::new(c.q(1, k * k + m * k)).over(c.qq(1, k)?))))
}

fn gst_rhs_b(c: &Ctx) -> Result<QSeries> {
    gst_rhs(c.m, c.den, c.n)
}

fn ram532_lhs(c: &Ctx) -> Result<QSeries> {
    single(c, "ram532", |k| {
        Ok(Some(ProductTerm::new(c.q(1, k * k)).times(c.fin(c.q(-1, 1), 2, k)?).over(c.qq(1, 2 * k)?)))
    })
}

fn ram532_rhs(c: &Ctx) -> Result<QSeries> {
    c.prod(&[c.qq_inf(6)?, c.qq_inf(6)?], &[c.qq_inf(1)?, c.qq_inf(12)?])
}

fn ram344_lhs(c: &Ctx) -> Result<QSeries> {
    single(c, "ram344", |k| {
        Ok(Some(ProductTerm::new(c.q(1, k * k + 2 * k)).times(c.fin(c.q(-1, 1), 2, k)?).over(c.qq(1, 2 * k + 1)?)))
    })
}

fn ram344_rhs(c: &Ctx) -> Result<QSeries> {
    c.prod(&[c.qq_inf(12)?, c.inf(c.q(-1, 6), 6)?], &[c.qq_inf(1)?, c.inf(c.q(-1, 2), 2)?])
}

fn slater98_lhs(c: &Ctx) -> Result<QSeries> {
    single(c, "slater98", |k| Ok(Some(ProductTerm::new(c.q(1, k * k)).over(c.qq(1, 2 * k)?))))
}

fn slater98_rhs(c: &Ctx) -> Result<QSeries> {
    let num =
        [c.qq_inf(10)?, c.inf(c.q(1, 8), 10)?, c.inf(c.q(1, 2), 10)?, c.inf(c.q(1, 14), 20)?, c.inf(c.q(1, 6), 20)?];
    c.prod(&num, &[c.qq_inf(1)?])
}

fn slater96_lhs(c: &Ctx) -> Result<QSeries> {
    single(c, "slater96", |k| Ok(Some(ProductTerm::new(c.q(1, k * k + 2 * k)).over(c.qq(1, 2 * k + 1)?))))
}

fn slater96_rhs(c: &Ctx) -> Result<QSeries> {
    let num =
        [c.qq_inf(10)?, c.inf(c.q(1, 6), 10)?, c.inf(c.q(1, 4), 10)?, c.inf(c.q(1, 18), 20)?, c.inf(c.q(1, 2), 20)?];
    c.prod(&num, &[c.qq_inf(1)?])
}

fn cor13_lhs(c: &Ctx) -> Result<QSeries> {
    let m = c.m;
    single(c, &format!("cor13 m={m}"), |k| {
        Ok(Some(ProductTerm::new(c.q(1, k * k + 2 * m * k)).over(c.qq(2, k)?).over(c.fin(c.q(1, 1 + 2 * m), 2, k)?)))
    })
}

/// `p(q) -> p(q^r)` for an exact polynomial.
fn dilate(p: &QSeries, r: i64) -> Result<QSeries> {
    QSeries::from_coeffs(p.den(), crate::qseries::EXACT, p.iter().map(|(e, c)| (e * r, c.clone())))
}

fn cor13_rhs(c: &Ctx) -> Result<QSeries> {
    let m = c.m;
    let shift = (2 * m * m - 2 * m) * c.unit();
    let work = c.n + shift;
    let pair = schur(m - 2, c.den)?;
    let twenty =
        |a: i64, b: i64| -> Result<QSeries> { c.prod_to(&[], &[c.inf(c.q(1, a), 20)?, c.inf(c.q(1, b), 20)?], work) };
    let first = dilate(&pair.e, 4)?.mul_to(&twenty(4, 16)?, work)?;
    let second = dilate(&pair.d, 4)?.mul_to(&twenty(8, 12)?, work)?;
    let outer = c.prod_to(&[], &[c.inf(c.q(1, 1 + 2 * m), 2)?], work)?;
    let all = first.try_sub(&second)?.mul_to(&outer, work)?;
    all.mul_mono(&QMono::q_pow(sign(m), -shift)).require(c.n)
}

fn cor12_lhs(c: &Ctx) -> Result<QSeries> {
    single(c, "cor12-lhs", |k| Ok(Some(ProductTerm::new(c.mono(1, 0, 2 * k, 2 * k * k - k)?).over(c.qq(2, k)?))))
}

fn cor12_rhs(c: &Ctx) -> Result<QSeries> {
    single(c, "cor12-rhs", |k| {
        Ok(Some(ProductTerm::new(c.mono(1, 0, k, tri(k))?).times(c.inf(c.mono(1, 0, 1, k)?, 1)?).over(c.qq(1, k)?)))
    })
}

fn thm11_rhs(c: &Ctx) -> Result<QSeries> {
    single(c, "thm11-rhs", |k| {
        let mut t = ProductTerm::new(c.q(1, tri(k))).times(c.inf(c.mono(1, 0, 1, k)?, 1)?).over(c.qq(1, k)?);
        for i in 0..k {
            t = t.times(Binomial::new(c.mono(1, 0, 1, 0)?, c.mono(1, 1, 0, i)?));
        }
        Ok(Some(t))
    })
}

// double sums over (q;q)_j (q^2;q^2)_k

fn double(c: &Ctx, label: &str, term: impl Fn(i64, i64) -> Result<Option<ProductTerm>>) -> Result<QSeries> {
    c.lattice(2, label, |i| term(i[0], i[1]))
}

fn jk_term(c: &Ctx, pre: QMono, j: i64, k: i64) -> Result<Option<ProductTerm>> {
    Ok(Some(ProductTerm::new(pre).over(c.qq(1, j)?).over(c.qq(2, k)?)))
}

fn quad(j: i64, k: i64) -> i64 {
    j * j + 2 * j * k + 2 * k * k
}

fn uz1_lhs(c: &Ctx) -> Result<QSeries> {
    double(c, "uz1", |j, k| jk_term(c, c.q(1, quad(j, k)), j, k))
}

fn uz1_rhs(c: &Ctx) -> Result<QSeries> {
    c.prod(&[c.qq_inf(3)?, c.qq_inf(3)?], &[c.qq_inf(1)?, c.qq_inf(6)?])
}

fn uz2_lhs(c: &Ctx) -> Result<QSeries> {
    double(c, "uz2", |j, k| jk_term(c, c.q(1, quad(j, k) + j + 2 * k), j, k))
}

fn uz2_rhs(c: &Ctx) -> Result<QSeries> {
    c.prod(&[c.qq_inf(6)?, c.qq_inf(6)?], &[c.qq_inf(2)?, c.qq_inf(3)?])
}

fn cw1_lhs(c: &Ctx) -> Result<QSeries> {
    double(c, "cw1", |j, k| jk_term(c, c.mono(sign(j), j + k, 0, quad(j, k))?, j, k))
}

fn cw1_rhs(c: &Ctx) -> Result<QSeries> {
    c.prod(&[c.inf(c.mono(1, 1, 0, 1)?, 2)?], &[])
}

fn cw2_lhs(c: &Ctx) -> Result<QSeries> {
    double(c, "cw2", |j, k| jk_term(c, c.mono(1, j + 2 * k, 0, quad(j, k) + k)?, j, k))
}

fn cw2_rhs(c: &Ctx) -> Result<QSeries> {
    c.prod(&[c.inf(c.mono(-1, 1, 0, 1)?, 1)?], &[])
}

fn thm11_lhs(c: &Ctx) -> Result<QSeries> {
    double(c, "thm11-lhs", |j, k| jk_term(c, c.mono(1, j, 2 * k, quad(j, k) - j - k)?, j, k))
}

fn bisect_a_lhs(c: &Ctx) -> Result<QSeries> {
    double(c, "bisect-a", |j, k| {
        let pre = c.mono(1, 2 * j + 2 * k, 0, 4 * j * j + 4 * j * k + 2 * k * k + k)?;
        Ok(Some(ProductTerm::new(pre).over(c.qq(1, 2 * j)?).over(c.qq(2, k)?)))
    })
}

fn bisect_b_lhs(c: &Ctx) -> Result<QSeries> {
    double(c, "bisect-b", |j, k| {
        let pre = c.mono(1, 1 + 2 * j + 2 * k, 0, 4 * j * j + 4 * j * k + 2 * k * k + 4 * j + 3 * k + 1)?;
        Ok(Some(ProductTerm::new(pre).over(c.qq(1, 2 * j + 1)?).over(c.qq(2, k)?)))
    })
}

fn plus_minus_qx(c: &Ctx) -> Result<(QSeries, QSeries)> {
    let plus = c.prod(&[c.inf(c.mono(-1, 1, 0, 1)?, 1)?], &[])?;
    let minus = c.prod(&[c.inf(c.mono(1, 1, 0, 1)?, 1)?], &[])?;
    Ok((plus, minus))
}

fn bisect_a_rhs(c: &Ctx) -> Result<QSeries> {
    let (p, m) = plus_minus_qx(c)?;
    c.half(&p.try_add(&m)?)
}

fn bisect_b_rhs(c: &Ctx) -> Result<QSeries> {
    let (p, m) = plus_minus_qx(c)?;
    c.half(&p.try_sub(&m)?)
}

fn thm41a_lhs(c: &Ctx) -> Result<QSeries> {
    double(c, "thm41a", |j, k| {
        let pre = c.q(1, 4 * j * j + 4 * j * k + 2 * k * k - j);
        Ok(Some(ProductTerm::new(pre).over(c.qq(1, 2 * j)?).over(c.qq(2, k)?)))
    })
}

fn thm41b_lhs(c: &Ctx) -> Result<QSeries> {
    double(c, "thm41b", |j, k| {
        let pre = c.q(1, 4 * j * j + 4 * j * k + 2 * k * k + 3 * j + 2 * k);
        Ok(Some(ProductTerm::new(pre).over(c.qq(1, 2 * j + 1)?).over(c.qq(2, k)?)))
    })
}

fn mod8(c: &Ctx, a: i64, n: i64) -> Result<QSeries> {
    c.prod_to(&[c.qq_inf(8)?, c.inf(c.q(-1, a), 8)?, c.inf(c.q(-1, 8 - a), 8)?], &[c.qq_inf(2)?], n)
}

fn mod8_a_rhs(c: &Ctx) -> Result<QSeries> {
    mod8(c, 3, c.n)
}

fn mod8_b_rhs(c: &Ctx) -> Result<QSeries> {
    mod8(c, 1, c.n)
}

// triple sums over (q;q)_j (q^2;q^2)_k (q^2;q^2)_l

fn triple(c: &Ctx, label: &str, term: impl Fn(i64, i64, i64) -> Result<Option<ProductTerm>>) -> Result<QSeries> {
    c.lattice(3, label, |i| term(i[0], i[1], i[2]))
}

fn jkl(c: &Ctx, t: ProductTerm, j: i64, k: i64, l: i64) -> Result<Option<ProductTerm>> {
    Ok(Some(t.over(c.qq(1, j)?).over(c.qq(2, k)?).over(c.qq(2, l)?)))
}

fn thm14_lhs(c: &Ctx) -> Result<QSeries> {
    triple(c, "thm14", |j, k, l| {
        let pre = c.mono(sign(k), k + 2 * l, k + l, j + tri(k) + tri(j + k + 2 * l))?;
        let t = ProductTerm::new(pre).times(c.fin(c.mono(1, 1, 0, 0)?, 1, j)?).over(c.qq(1, j)?).over(c.qq(1, k)?);
        Ok(Some(t.over(c.qq(2, l)?)))
    })
}

fn thm14_rhs(c: &Ctx) -> Result<QSeries> {
    c.prod(&[c.inf(c.mono(1, 1, 0, 1)?, 2)?, c.inf(c.mono(1, 1, 1, 0)?, 2)?, c.inf(c.q(-1, 1), 1)?], &[])
}

/// `(x^2 y^2;q^2)_k x^j y^{2j+2l} (-1)^{j+k} q^{T(T-1)+l^2+lin k}`.
fn even_odd_term(c: &Ctx, lin: i64, j: i64, k: i64, l: i64) -> Result<Option<ProductTerm>> {
    let t = j + k + l;
    let pre = c.mono(sign(j + k), j, 2 * j + 2 * l, t * (t - 1) + l * l + lin * k)?;
    jkl(c, ProductTerm::new(pre).times(c.fin(c.mono(1, 2, 2, 0)?, 2, k)?), j, k, l)
}

fn thm15_lhs(c: &Ctx) -> Result<QSeries> {
    triple(c, "thm15", |j, k, l| even_odd_term(c, 1, j, k, l))
}

fn thm16_lhs(c: &Ctx) -> Result<QSeries> {
    triple(c, "thm16", |j, k, l| even_odd_term(c, 3, j, k, l))
}

/// `(q;q^2)_inf (s xy;q)_inf (-s y q^e;q)_inf` for `s = +-1`.
fn mixed(c: &Ctx, s: i64, e: i64, n: i64) -> Result<QSeries> {
    c.prod_to(&[c.inf(c.q(1, 1), 2)?, c.inf(c.mono(s, 1, 1, 0)?, 1)?, c.inf(c.mono(-s, 0, 1, e)?, 1)?], &[], n)
}

fn thm15_rhs(c: &Ctx) -> Result<QSeries> {
    let a = mixed(c, 1, 0, c.n)?;
    let b = mixed(c, -1, 0, c.n)?;
    c.half(&a.try_add(&b)?)
}

fn thm16_rhs(c: &Ctx) -> Result<QSeries> {
    let t = c.mono(1, 0, 1, -1)?;
    if t.is_zero() {
        return Err(Error::Constraint("thm16 needs y != 0".into()));
    }
    let work = c.n + t.q;
    let a = mixed(c, 1, -1, work)?;
    let b = mixed(c, -1, -1, work)?;
    let half = c.half(&a.try_sub(&b)?)?;
    let shifted = half.div_exact_mono(&t)?;
    divide_one_minus(c, &shifted, c.mono(1, 1, 0, 1)?, "thm16 needs 1 - qx != 0")
}

const DIVISOR: &str = "the divisor y(1 - qx) vanishes: y = 0 or qx = 1 (e.g. x = 1/q on the line xy = 1)";

/// True when `y = 0` or `1 - qx = 0` after specialization.
fn divisor_vanishes(env: &Env, den: Den) -> Result<bool> {
    let u = den.unit();
    let y = env.apply(&QMono::new(1, 0, u, 0), den)?;
    let qx = env.apply(&QMono::new(1, u, 0, u), den)?;
    Ok(y.is_zero() || qx.is_one())
}

/// Divides by `1 - t`, rejecting the zero factor.
fn divide_one_minus(c: &Ctx, s: &QSeries, t: QMono, why: &str) -> Result<QSeries> {
    let b = Binomial::one_minus(&t);
    if b.is_zero() {
        return Err(Error::Constraint(why.into()));
    }
    s.div_binomial(&b, c.n)?.require(c.n)
}

fn cor17_lhs(c: &Ctx) -> Result<QSeries> {
    let m = c.m;
    triple(c, &format!("cor17 m={m}"), |j, k, l| {
        let t = j + k + l;
        let pre = c.mono(sign(k), j, 0, t * (t - 1) + l * l + k - m * (j + 2 * l))?;
        jkl(c, ProductTerm::new(pre).times(c.fin(c.mono(1, 2, 0, 0)?, 2, k)?), j, k, l)
    })
}

fn cor17_rhs(c: &Ctx) -> Result<QSeries> {
    let m = c.m;
    c.prod(&[c.fin(c.q(-1, -m), 1, m)?, c.inf(c.mono(-1, 1, 0, 0)?, 1)?], &[])
}

/// `(x;q^2)_k x^{j+l} (-1)^{j+k} q^{T(T-1)+l^2+aj+bk+cl}`.
fn cor18_term(c: &Ctx, lin: [i64; 3], j: i64, k: i64, l: i64) -> Result<Option<ProductTerm>> {
    let t = j + k + l;
    let e = t * (t - 1) + l * l + lin[0] * j + lin[1] * k + lin[2] * l;
    let pre = c.mono(sign(j + k), j + l, 0, e)?;
    jkl(c, ProductTerm::new(pre).times(c.fin(c.mono(1, 1, 0, 0)?, 2, k)?), j, k, l)
}

fn cor18a_lhs(c: &Ctx) -> Result<QSeries> {
    triple(c, "cor18a", |j, k, l| cor18_term(c, [0, 1, 0], j, k, l))
}

fn cor18b_lhs(c: &Ctx) -> Result<QSeries> {
    triple(c, "cor18b", |j, k, l| cor18_term(c, [-1, 1, -2], j, k, l))
}

fn cor18c_lhs(c: &Ctx) -> Result<QSeries> {
    triple(c, "cor18c", |j, k, l| cor18_term(c, [1, 1, 2], j, k, l))
}

fn cor110a_lhs(c: &Ctx) -> Result<QSeries> {
    triple(c, "cor110a", |j, k, l| cor18_term(c, [0, 3, 0], j, k, l))
}

fn cor110b_lhs(c: &Ctx) -> Result<QSeries> {
    triple(c, "cor110b", |j, k, l| cor18_term(c, [2, 3, 4], j, k, l))
}

/// `(q^a, q^b x; q^2)_inf`.
fn two_step(c: &Ctx, a: i64, b: i64) -> Result<QSeries> {
    c.prod(&[c.inf(c.q(1, a), 2)?, c.inf(c.mono(1, 1, 0, b)?, 2)?], &[])
}

fn cor18ab_rhs(c: &Ctx) -> Result<QSeries> {
    two_step(c, 1, 0)
}

fn cor18c_rhs(c: &Ctx) -> Result<QSeries> {
    two_step(c, 1, 2)
}

fn cor110a_rhs(c: &Ctx) -> Result<QSeries> {
    two_step(c, 3, 0)
}

fn cor110b_rhs(c: &Ctx) -> Result<QSeries> {
    two_step(c, 3, 2)
}

fn cor19_lhs(c: &Ctx) -> Result<QSeries> {
    let m = c.m;
    triple(c, &format!("cor19 m={m}"), |j, k, l| {
        let t = j + k + l;
        let pre = c.mono(sign(k), j, 0, t * (t - 1) + l * l + 3 * k - (m - 1) * (j + 2 * l))?;
        jkl(c, ProductTerm::new(pre).times(c.fin(c.mono(1, 2, 0, 0)?, 2, k)?), j, k, l)
    })
}

fn cor19_rhs(c: &Ctx) -> Result<QSeries> {
    let m = c.m;
    let num = [c.fin(c.q(-1, -m), 1, m)?, c.fin(c.mono(-1, 1, 0, 0)?, 1, m)?, c.inf(c.mono(-1, 1, 0, m + 1)?, 1)?];
    let shift = m * c.unit();
    Ok(c.prod_to(&num, &[], c.n - shift)?.mul_mono(&c.q(1, m)))
}

/// `(q^a;q^2)_k (-1)^k q^{Q+l^2+j+bk+cl-m(s+2j+2l)}`, `Q = (s+S)(S+s-1)`, over
/// `(q;q)_{2j+s} (q^2;q^2)_k (q^2;q^2)_l`.
#[allow(clippy::too_many_arguments)]
fn mod8_term(c: &Ctx, s: i64, a: i64, lin: [i64; 2], m: i64, j: i64, k: i64, l: i64) -> Result<Option<ProductTerm>> {
    let big = 2 * j + k + l + s;
    let e = big * (big - 1) + l * l + j + lin[0] * k + lin[1] * l - m * (s + 2 * j + 2 * l);
    let t = ProductTerm::new(c.q(sign(k), e))
        .times(c.fin(c.q(1, a), 2, k)?)
        .over(c.qq(1, 2 * j + s)?)
        .over(c.qq(2, k)?)
        .over(c.qq(2, l)?);
    Ok(Some(t))
}

fn thm42a_lhs(c: &Ctx) -> Result<QSeries> {
    let m = c.m;
    // -2m(j+l) is -m(0+2j+2l)
    triple(c, &format!("thm42a m={m}"), |j, k, l| mod8_term(c, 0, 1, [1, 0], m, j, k, l))
}

fn thm42b_lhs(c: &Ctx) -> Result<QSeries> {
    let m = c.m;
    triple(c, &format!("thm42b m={m}"), |j, k, l| mod8_term(c, 1, 1, [1, 0], m, j, k, l))
}

fn thm43a_lhs(c: &Ctx) -> Result<QSeries> {
    triple(c, "thm43a", |j, k, l| mod8_term(c, 0, -1, [3, 2], 0, j, k, l))
}

fn thm43b_lhs(c: &Ctx) -> Result<QSeries> {
    triple(c, "thm43b", |j, k, l| mod8_term(c, 1, -1, [3, 2], 0, j, k, l))
}

fn shifted_mod8(c: &Ctx, a: i64) -> Result<QSeries> {
    let m = c.m;
    let extra = tri(m + 1) * c.unit();
    let pre = c.prod(&[c.fin(c.q(-1, -m), 1, m)?], &[])?;
    let base = mod8(c, a, c.n + extra)?;
    pre.mul_to(&base, c.n)
}

fn thm42a_rhs(c: &Ctx) -> Result<QSeries> {
    shifted_mod8(c, 3)
}

fn thm42b_rhs(c: &Ctx) -> Result<QSeries> {
    shifted_mod8(c, 1)
}

fn thm44_term(c: &Ctx, lin: [i64; 3], j: i64, k: i64, l: i64) -> Result<Option<ProductTerm>> {
    let t = j + k + l;
    let e = t * (t - 1) + l * l + lin[0] * j + lin[1] * k + lin[2] * l;
    let pre = c.mono(sign(k), -l, 0, e)?;
    jkl(c, ProductTerm::new(pre).times(c.fin(c.mono(1, 1, 0, 0)?, 2, k)?), j, k, l)
}

fn thm44a_lhs(c: &Ctx) -> Result<QSeries> {
    triple(c, "thm44a", |j, k, l| thm44_term(c, [1, 1, 2], j, k, l))
}

fn thm44b_lhs(c: &Ctx) -> Result<QSeries> {
    triple(c, "thm44b", |j, k, l| thm44_term(c, [2, 3, 4], j, k, l))
}

fn mod4(c: &Ctx, a: i64) -> Result<QSeries> {
    c.prod(&[c.inf(c.mono(-1, 1, 0, a)?, 4)?, c.inf(c.mono(-1, -1, 0, a + 2)?, 4)?], &[c.inf(c.q(1, 2), 4)?])
}

fn thm44a_rhs(c: &Ctx) -> Result<QSeries> {
    mod4(c, 1)
}

fn thm44b_rhs(c: &Ctx) -> Result<QSeries> {
    mod4(c, 3)
}

// classical expansions

fn unit_lhs(c: &Ctx) -> Result<QSeries> {
    poch_list(&[c.inf(c.q(1, 1), 2)?, c.inf(c.q(-1, 1), 2)?, c.inf(c.q(-1, 2), 2)?], c.den, c.n)
}

fn unit_rhs(c: &Ctx) -> Result<QSeries> {
    Ok(QSeries::one(c.den, c.n))
}

fn euler_a_lhs(c: &Ctx) -> Result<QSeries> {
    euler_a(&c.mono(1, 1, 0, 0)?, c.den, c.n)
}

fn euler_a_rhs(c: &Ctx) -> Result<QSeries> {
    c.prod(&[c.inf(c.mono(-1, 1, 0, 0)?, 1)?], &[])
}

fn euler_b_lhs(c: &Ctx) -> Result<QSeries> {
    euler_b(&c.mono(1, 1, 0, 1)?, c.den, c.n)
}

fn euler_b_rhs(c: &Ctx) -> Result<QSeries> {
    c.prod(&[], &[c.inf(c.mono(1, 1, 0, 1)?, 1)?])
}

fn jacobi_lhs(c: &Ctx) -> Result<QSeries> {
    jacobi_triple(&c.mono(1, 1, 0, 0)?, c.den, c.n, JacobiForm::Sum)
}

fn jacobi_rhs(c: &Ctx) -> Result<QSeries> {
    jacobi_triple(&c.mono(1, 1, 0, 0)?, c.den, c.n, JacobiForm::Product)
}

fn phi(c: &Ctx, numer: Vec<QMono>, denom: Vec<QMono>, step: i64, arg: QMono) -> Result<QSeries> {
    phi_to(c, numer, denom, step, arg, c.n)
}

fn phi_to(c: &Ctx, numer: Vec<QMono>, denom: Vec<QMono>, step: i64, arg: QMono, n: i64) -> Result<QSeries> {
    let spec = PhiSpec { numer, denom, step: step * c.unit(), arg };
    phi_series(&spec, c.den, n)
}

fn qbinom_lhs(c: &Ctx) -> Result<QSeries> {
    phi(c, vec![c.mono(1, 1, 0, 0)?], vec![], 1, c.mono(1, 0, 1, 1)?)
}

fn qbinom_rhs(c: &Ctx) -> Result<QSeries> {
    c.prod(&[c.inf(c.mono(1, 1, 1, 1)?, 1)?], &[c.inf(c.mono(1, 0, 1, 1)?, 1)?])
}

fn phi_even_lhs(c: &Ctx) -> Result<QSeries> {
    phi(c, vec![c.mono(1, 1, 0, 0)?, c.mono(-1, 1, 0, 0)?], vec![c.q(-1, 1)], 1, c.mono(1, 0, 1, 1)?)
}

fn phi_even_rhs(c: &Ctx) -> Result<QSeries> {
    c.prod(&[c.inf(c.mono(1, 2, 1, 1)?, 2)?], &[c.inf(c.mono(1, 0, 1, 1)?, 2)?])
}

fn phi_odd_lhs(c: &Ctx) -> Result<QSeries> {
    phi(c, vec![c.mono(1, 1, 0, 0)?, c.mono(1, 1, 0, 1)?], vec![c.q(1, 1)], 2, c.mono(1, 0, 2, 2)?)
}

/// `(s xyq^e;q)_inf/(s yq;q)_inf` for `s = +-1`.
fn signed_ratio(c: &Ctx, s: i64, e: i64, n: i64) -> Result<QSeries> {
    c.prod_to(&[c.inf(c.mono(s, 1, 1, e)?, 1)?], &[c.inf(c.mono(s, 0, 1, 1)?, 1)?], n)
}

fn phi_odd_rhs(c: &Ctx) -> Result<QSeries> {
    let a = signed_ratio(c, 1, 1, c.n)?;
    let b = signed_ratio(c, -1, 1, c.n)?;
    c.half(&a.try_add(&b)?)
}

fn phi_sq_lhs(c: &Ctx) -> Result<QSeries> {
    phi(c, vec![c.mono(1, 1, 0, 2)?, c.mono(1, 1, 0, 3)?], vec![c.q(1, 3)], 2, c.mono(1, 0, 2, 2)?)
}

fn phi_sq_rhs(c: &Ctx) -> Result<QSeries> {
    let t = c.mono(1, 0, 1, 1)?;
    if t.is_zero() {
        return Err(Error::Constraint("phi-sq needs y != 0".into()));
    }
    let work = c.n + t.q;
    let a = signed_ratio(c, 1, 2, work)?;
    let b = signed_ratio(c, -1, 2, work)?;
    let half = c.half(&a.try_sub(&b)?)?;
    let scaled = half.mul_binomial(&Binomial::one_minus(&c.q(1, 1))).truncate(work);
    let shifted = scaled.div_exact_mono(&t)?;
    divide_one_minus(c, &shifted, c.mono(1, 1, 0, 1)?, "phi-sq needs 1 - qx != 0")
}

fn wcy_pair(c: &Ctx) -> Result<(QSeries, QSeries)> {
    let a = c.prod(&[c.inf(c.q(-1, 1), 2)?], &[])?;
    let b = c.prod(&[c.inf(c.q(1, 1), 2)?], &[])?;
    Ok((a, b))
}

fn wcy_a_lhs(c: &Ctx) -> Result<QSeries> {
    let (a, b) = wcy_pair(c)?;
    a.try_add(&b)
}

fn wcy_b_lhs(c: &Ctx) -> Result<QSeries> {
    let (a, b) = wcy_pair(c)?;
    a.try_sub(&b)
}

fn mod16(c: &Ctx, a: i64, n: i64) -> Result<QSeries> {
    c.prod_to(&[c.qq_inf(16)?, c.inf(c.q(-1, a), 16)?, c.inf(c.q(-1, 16 - a), 16)?], &[c.qq_inf(4)?], n)
}

fn wcy_a_rhs(c: &Ctx) -> Result<QSeries> {
    Ok(mod16(c, 6, c.n)?.mul_mono(&c.q(2, 0)))
}

fn wcy_b_rhs(c: &Ctx) -> Result<QSeries> {
    Ok(mod16(c, 2, c.n - c.unit())?.mul_mono(&c.q(2, 1)))
}

// Heine transformations at fixed specializations

/// `(a, b, c, z)` as `(coefficient, q-exponent)` pairs. No row has
/// `c = ab`, `c = az` or `c = bz`, where a transformation maps the series to
/// itself.
const HEINE: [[(i64, i64); 4]; 6] = [
    [(1, 1), (1, 3), (1, 2), (1, 2)],
    [(-1, 1), (1, 2), (1, 3), (1, 2)],
    [(1, 1), (-1, 1), (1, 2), (1, 3)],
    [(1, 2), (-1, 3), (1, 3), (-1, 1)],
    [(-1, 1), (-1, 1), (1, 3), (1, 2)],
    [(1, 1), (1, 3), (-1, 2), (-1, 2)],
];

fn heine(c: &Ctx) -> Result<[QMono; 4]> {
    let row = HEINE.get(c.m as usize).ok_or_else(|| Error::Constraint(format!("no Heine specialization {}", c.m)))?;
    Ok(row.map(|(k, e)| c.q(k, e)))
}

fn describe_heine(m: i64) -> String {
    let row = HEINE[m as usize];
    let names = ["a", "b", "c", "z"];
    let parts: Vec<String> = names
        .iter()
        .zip(row)
        .map(|(n, (k, e))| format!("{n}={}", QMono::q_pow(k, e * Den::DEFAULT.unit()).display(Den::DEFAULT)))
        .collect();
    parts.join(", ")
}

fn div(a: &QMono, b: &QMono) -> QMono {
    a.div_unit(b).expect("unit specialization")
}

fn heine_a_lhs(c: &Ctx) -> Result<QSeries> {
    let [a, b, cc, z] = heine(c)?;
    phi(c, vec![a, b], vec![cc], 1, z)
}

fn heine_b_lhs(c: &Ctx) -> Result<QSeries> {
    heine_a_lhs(c)
}

fn heine_a_rhs(c: &Ctx) -> Result<QSeries> {
    let [a, b, cc, z] = heine(c)?;
    let ca = div(&cc, &a);
    let az = a.mul(&z);
    let abzc = div(&a.mul(&b).mul(&z), &cc);
    let (num, den) = ([c.inf(ca.clone(), 1)?, c.inf(az.clone(), 1)?], [c.inf(cc, 1)?, c.inf(z, 1)?]);
    c.mul_complete(
        |n| c.prod_to(&num, &den, n),
        |n| phi_to(c, vec![abzc.clone(), a.clone()], vec![az.clone()], 1, ca.clone(), n),
    )
}

fn heine_b_rhs(c: &Ctx) -> Result<QSeries> {
    let [a, b, cc, z] = heine(c)?;
    let abzc = div(&a.mul(&b).mul(&z), &cc);
    let (num, den) = ([c.inf(abzc.clone(), 1)?], [c.inf(z, 1)?]);
    let numer = vec![div(&cc, &a), div(&cc, &b)];
    c.mul_complete(|n| c.prod_to(&num, &den, n), |n| phi_to(c, numer.clone(), vec![cc.clone()], 1, abzc.clone(), n))
}

// the single sum as two 2phi1 series

/// `(x, y)` as `(coefficient, q-exponent numerator, denominator)` triples.
const THREETERM: [[(i64, i64, i64); 2]; 6] = [
    [(1, 1, 1), (1, 1, 2)],
    [(1, 2, 1), (1, 1, 1)],
    [(1, 3, 1), (1, 1, 1)],
    [(1, 3, 1), (1, 3, 2)],
    [(-1, 1, 1), (1, 1, 2)],
    [(1, 2, 1), (-1, 1, 2)],
];

fn threeterm_env(m: i64, den: Den) -> Result<Env> {
    let row = THREETERM.get(m as usize).ok_or_else(|| Error::Constraint(format!("no specialization {m}")))?;
    let bind = |(k, a, b): (i64, i64, i64)| -> Result<Binding> { Ok(Binding::value(k, den.scale(a, b)?)) };
    Ok(Env::symbolic().with(Param::X, bind(row[0])?).with(Param::Y, bind(row[1])?))
}

fn describe_threeterm(m: i64) -> String {
    threeterm_env(m, Den::DEFAULT).map(|e| e.describe(Den::DEFAULT)).unwrap_or_default()
}

fn threeterm_rhs(c: &Ctx) -> Result<QSeries> {
    let mut total: Option<QSeries> = None;
    for s in [1, -1] {
        let y = c.mono(s, 0, 1, 0)?;
        let x_over_y = c.mono(s, 1, -1, 0)?;
        let q_over_y = c.mono(s, 0, -1, 1)?;
        let num = [c.inf(y, 1)?, c.inf(x_over_y, 1)?, c.inf(q_over_y, 1)?];
        let a = c.mono(s, -1, 1, 1)?;
        let arg = c.mono(-1, 1, -2, 1)?;
        let part = c.mul_complete(
            |n| c.prod_to(&num, &[], n),
            |n| phi_to(c, vec![a.clone(), QMono::zero()], vec![c.q(-1, 1)], 1, arg.clone(), n),
        )?;
        total = Some(match total {
            Some(t) => t.try_add(&part)?,
            None => part,
        });
    }
    let sum = c.half(&total.expect("two parts"))?;
    let inv = c.prod(&[], &[c.inf(c.q(-1, 1), 1)?])?;
    c.mul(&sum, &inv)
}

// constant-term integrals

fn ct(c: &Ctx, factors: &[ZFactor]) -> Result<QSeries> {
    constant_term(factors, c.den, c.n, ContourOptions { window_scale: c.window_scale, weight: None })
}

fn zf(c: &Ctx, kind: ZKind, base: i64, u: QMono, p: i64) -> Result<ZFactor> {
    ZFactor::new(kind, base * c.unit(), u, p)
}

pub(super) fn int_cc_factors(c: &Ctx) -> Result<Vec<ZFactor>> {
    Ok(vec![
        zf(c, ZKind::EulerA, 1, c.mono(-1, 1, 0, 0)?, 1)?,
        zf(c, ZKind::EulerB, 2, c.mono(1, 0, 2, 0)?, 2)?,
        zf(c, ZKind::Jacobi, 1, c.q(-1, 0), -1)?,
    ])
}

fn int_cc_lhs(c: &Ctx) -> Result<QSeries> {
    ct(c, &int_cc_factors(c)?)
}

fn int_a3_lhs(c: &Ctx) -> Result<QSeries> {
    let f = [
        zf(c, ZKind::QBinom { a: c.mono(1, 1, 0, 0)? }, 1, c.mono(-1, -1, 0, 1)?, 1)?,
        zf(c, ZKind::EulerA, 1, c.mono(1, 0, 1, 0)?, 1)?,
        zf(c, ZKind::EulerB, 2, c.mono(1, 0, 1, 0)?, 2)?,
        zf(c, ZKind::Jacobi, 1, c.mono(-1, 1, 0, 0)?, -1)?,
    ];
    ct(c, &f)
}

fn int_c3_lhs(c: &Ctx) -> Result<QSeries> {
    let f = [
        zf(c, ZKind::EulerB, 1, c.mono(1, 1, 0, 0)?, 1)?,
        zf(c, ZKind::QBinom { a: c.mono(1, 2, 2, 0)? }, 2, c.mono(1, 0, -2, 1)?, 1)?,
        zf(c, ZKind::EulerA, 2, c.q(-1, 1), 1)?,
        zf(c, ZKind::Jacobi, 2, c.mono(-1, 0, 2, 0)?, -1)?,
    ];
    ct(c, &f)
}

fn int_e3_lhs(c: &Ctx) -> Result<QSeries> {
    let f = [
        zf(c, ZKind::EulerB, 1, c.mono(1, 1, 0, 2)?, 1)?,
        zf(c, ZKind::QBinom { a: c.mono(1, 2, 2, 0)? }, 2, c.mono(1, 0, -2, 5)?, 1)?,
        zf(c, ZKind::EulerA, 2, c.q(-1, 3), 1)?,
        zf(c, ZKind::Jacobi, 2, c.mono(-1, 0, 2, -2)?, -1)?,
    ];
    ct(c, &f)
}
