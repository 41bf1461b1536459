//! Parameter tuples and their closed-form derived quantities.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::rational::{ExtRational, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParamError {
    #[error("dimension n must be at least 1")]
    Dimension,
    #[error("{name} = {value} is out of range: {need}")]
    Range { name: &'static str, value: Rational, need: &'static str },
}

/// Everything except the target weight exponent `c`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SpaceParams {
    pub n: u32,
    pub p: Rational,
    pub q: Rational,
    pub r: Rational,
    pub a: Rational,
    pub b: Rational,
}

/// The full tuple `(N, p, q, r, a, b, c)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Params {
    pub n: u32,
    pub p: Rational,
    pub q: Rational,
    pub r: Rational,
    pub a: Rational,
    pub b: Rational,
    pub c: Rational,
}

impl SpaceParams {
    pub fn with_c(&self, c: Rational) -> Params {
        Params {
            n: self.n,
            p: self.p.clone(),
            q: self.q.clone(),
            r: self.r.clone(),
            a: self.a.clone(),
            b: self.b.clone(),
            c,
        }
    }

    pub fn dim(&self) -> Rational {
        Rational::from(self.n)
    }

    /// `(a+N)/q`
    pub fn slope_a(&self) -> Rational {
        (&self.a + self.dim()) / &self.q
    }

    /// `(b−p+N)/p`
    pub fn slope_b(&self) -> Rational {
        (&self.b - &self.p + self.dim()) / &self.p
    }

    pub fn c0(&self) -> Rational {
        &self.r * self.slope_a() - self.dim()
    }

    pub fn c1(&self) -> Rational {
        &self.r * self.slope_b() - self.dim()
    }

    pub fn slopes_equal(&self) -> bool {
        self.slope_a() == self.slope_b()
    }

    pub fn p_star(&self) -> ExtRational {
        let n = self.dim();
        if self.p < n {
            ExtRational::Finite(&n * &self.p / (&n - &self.p))
        } else {
            ExtRational::PosInf
        }
    }

    /// `1/p − 1/N − 1/q`, the coefficient of θ in the θ-condition.
    pub fn theta_coefficient(&self) -> Rational {
        self.p.recip().unwrap() - self.dim().recip().unwrap() - self.q.recip().unwrap()
    }

    /// `1/r − 1/q`, the right-hand side of the θ-condition.
    pub fn theta_bound(&self) -> Rational {
        self.r.recip().unwrap() - self.q.recip().unwrap()
    }

    /// `θ(1/p − 1/N − 1/q) ≤ 1/r − 1/q`
    pub fn theta_condition(&self, theta: &Rational) -> bool {
        theta * self.theta_coefficient() <= self.theta_bound()
    }

    /// Value of θ_c at a given `c`, if the slopes differ.
    pub fn theta_at(&self, c: &Rational) -> Option<Rational> {
        let c0 = self.c0();
        let c1 = self.c1();
        if c0 == c1 {
            None
        } else {
            Some((c - &c0) / (c1 - c0))
        }
    }

    /// Inverse of [`theta_at`](Self::theta_at): `θ c¹ + (1−θ) c⁰`.
    pub fn c_at_theta(&self, theta: &Rational) -> Rational {
        theta * self.c1() + (Rational::one() - theta) * self.c0()
    }

    /// `max{p*, q}`
    pub fn r_ceiling(&self) -> ExtRational {
        let ps = self.p_star();
        let q = ExtRational::Finite(self.q.clone());
        if ps > q { ps } else { q }
    }

    pub fn validate_full(&self) -> Result<(), ParamError> {
        self.validate_common()?;
        if self.n >= 2 {
            for (name, v) in [("q", &self.q), ("r", &self.r)] {
                if *v < Rational::one() {
                    return Err(ParamError::Range { name, value: v.clone(), need: "must be >= 1 when n >= 2" });
                }
            }
        }
        Ok(())
    }

    pub fn validate_radial(&self) -> Result<(), ParamError> {
        self.validate_common()
    }

    fn validate_common(&self) -> Result<(), ParamError> {
        if self.n == 0 {
            return Err(ParamError::Dimension);
        }
        if self.p < Rational::one() {
            return Err(ParamError::Range { name: "p", value: self.p.clone(), need: "must be >= 1" });
        }
        for (name, v) in [("q", &self.q), ("r", &self.r)] {
            if !v.is_positive() {
                return Err(ParamError::Range { name, value: v.clone(), need: "must be > 0" });
            }
        }
        Ok(())
    }
}

impl Params {
    pub fn space(&self) -> SpaceParams {
        SpaceParams {
            n: self.n,
            p: self.p.clone(),
            q: self.q.clone(),
            r: self.r.clone(),
            a: self.a.clone(),
            b: self.b.clone(),
        }
    }

    pub fn dim(&self) -> Rational {
        Rational::from(self.n)
    }

    /// Builds a tuple from string literals; panics on malformed input.
    pub fn parse(n: u32, p: &str, q: &str, r: &str, a: &str, b: &str, c: &str) -> Params {
        use super::rational::q as lit;
        Params { n, p: lit(p), q: lit(q), r: lit(r), a: lit(a), b: lit(b), c: lit(c) }
    }

    pub fn with_c(&self, c: Rational) -> Params {
        Params { c, ..self.clone() }
    }

    pub fn validate_full(&self) -> Result<(), ParamError> {
        self.space().validate_full()
    }

    pub fn validate_radial(&self) -> Result<(), ParamError> {
        self.space().validate_radial()
    }
}

/// Closed-form quantities attached to a parameter tuple. Undefined values are `None`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DerivedQuantities {
    pub c0: Rational,
    pub c1: Rational,
    pub p_star: ExtRational,
    pub slope_a: Rational,
    pub slope_b: Rational,
    pub theta_c: Option<Rational>,
    pub eta: Option<Rational>,
    pub theta_breve: Rational,
    pub theta_bar: Option<Rational>,
    pub c_star: Rational,
    pub c_bar: Option<Rational>,
    pub p_conj: ExtRational,
}

pub fn derive(params: &Params) -> DerivedQuantities {
    let s = params.space();
    let slope_a = s.slope_a();
    let slope_b = s.slope_b();
    let c0 = s.c0();
    let c1 = s.c1();
    let equal = slope_a == slope_b;
    let theta_c = if equal { None } else { Some((&params.c - &c0) / (&c1 - &c0)) };
    let eta = if equal { Some(slope_a.clone()) } else { None };
    let p_conj = holder_conjugate(&params.p).expect("p >= 1");
    let one = Rational::one();
    let q_over_r = &params.q / &params.r;
    let theta_breve = (&one - &q_over_r) / (&params.q * p_conj.recip_or_zero() + &one);
    let coef = s.theta_coefficient();
    let theta_bar = if coef.is_zero() { None } else { Some(s.theta_bound() / coef) };
    let c_star = (&one - &q_over_r) * &c1 + &q_over_r * &c0;
    let c_bar = theta_bar.as_ref().map(|t| t * &c1 + (&one - t) * &c0);
    DerivedQuantities {
        c0,
        c1,
        p_star: s.p_star(),
        slope_a,
        slope_b,
        theta_c,
        eta,
        theta_breve,
        theta_bar,
        c_star,
        c_bar,
        p_conj,
    }
}

/// Parameters of the image space under the inversion `x ↦ x/|x|²`.
pub fn kelvin_params(params: &Params) -> Params {
    let two_n = Rational::from(2 * params.n);
    Params {
        n: params.n,
        p: params.p.clone(),
        q: params.q.clone(),
        r: params.r.clone(),
        a: -&two_n - &params.a,
        b: Rational::from_int(2) * &params.p - &two_n - &params.b,
        c: -&two_n - &params.c,
    }
}

/// `k′` with `1/k + 1/k′ = 1`; `1′ = ∞`. Rejects `k < 1`.
pub fn holder_conjugate(k: &Rational) -> Result<ExtRational, ParamError> {
    let one = Rational::one();
    if *k < one {
        return Err(ParamError::Range { name: "k", value: k.clone(), need: "must be >= 1" });
    }
    if *k == one {
        Ok(ExtRational::PosInf)
    } else {
        Ok(ExtRational::Finite(k / (k - &one)))
    }
}
