//! Benchmark copulas parameterized by Kendall's tau, with standard normal
//! margins, and their true mutual information.
//!
//! | family  | parameter            | construction                          |
//! |---------|----------------------|---------------------------------------|
//! | Gaussian| `rho = sin(pi tau/2)`| correlated normal pair                |
//! | Clayton | `theta = 2tau/(1-tau)`| Gamma(1/theta) frailty               |
//! | Gumbel  | `theta = 1/(1-tau)`  | positive stable(1/theta) frailty      |
//!
//! The frailty constructions draw `V`, two unit exponentials `E1, E2`, and set
//! `U_i = psi(E_i / V)` where `psi` is the Laplace transform of `V`.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1, Gamma, StandardNormal};

use crate::error::{Error, Result};
use crate::normal;
use crate::pseudo_obs::BivariateSample;
use crate::quadrature::{integrate_2d, QuadConfig};

/// Largest supported Kendall's tau.
pub const MAX_TAU: f64 = 0.95;

/// Half-width of the probit-space box used for the true-MI quadrature. The
/// normal margins put less than `1e-16` of the mass outside it.
const QUAD_HALF_WIDTH: f64 = 8.5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CopulaFamily {
    Independence,
    Gaussian,
    Clayton,
    Gumbel,
}

impl CopulaFamily {
    pub const BENCHMARK: [CopulaFamily; 3] = [Self::Gaussian, Self::Clayton, Self::Gumbel];

    pub fn name(&self) -> &'static str {
        match self {
            Self::Independence => "independence",
            Self::Gaussian => "gaussian",
            Self::Clayton => "clayton",
            Self::Gumbel => "gumbel",
        }
    }
}

impl fmt::Display for CopulaFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CopulaFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "independence" => Ok(Self::Independence),
            "gaussian" | "normal" => Ok(Self::Gaussian),
            "clayton" => Ok(Self::Clayton),
            "gumbel" => Ok(Self::Gumbel),
            other => Err(Error::Config(format!("unknown copula family '{other}'"))),
        }
    }
}

/// Copula parameter for `family` at Kendall's `tau`.
pub fn tau_to_param(family: CopulaFamily, tau: f64) -> Result<f64> {
    let max = if family == CopulaFamily::Independence { 0.0 } else { MAX_TAU };
    if !(0.0..=max).contains(&tau) {
        return Err(Error::DomainError {
            value: tau,
            domain: if max == 0.0 { "{0}" } else { "[0, 0.95]" },
        });
    }
    Ok(match family {
        CopulaFamily::Independence => 0.0,
        CopulaFamily::Gaussian => (FRAC_PI_2 * tau).sin(),
        CopulaFamily::Clayton => 2.0 * tau / (1.0 - tau),
        CopulaFamily::Gumbel => 1.0 / (1.0 - tau),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CopulaSpec {
    family: CopulaFamily,
    tau: f64,
    param: f64,
}

impl CopulaSpec {
    pub fn new(family: CopulaFamily, tau: f64) -> Result<Self> {
        let param = tau_to_param(family, tau)?;
        Ok(Self { family, tau, param })
    }

    pub fn independence() -> Self {
        Self {
            family: CopulaFamily::Independence,
            tau: 0.0,
            param: 0.0,
        }
    }

    pub fn family(&self) -> CopulaFamily {
        self.family
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    /// `rho` for the Gaussian family, `theta` for the Archimedean ones.
    pub fn param(&self) -> f64 {
        self.param
    }

    /// Whether the spec describes the independence copula.
    pub fn is_independent(&self) -> bool {
        self.tau == 0.0
    }

    /// Log copula density at probit coordinates `(x, y)`, i.e. at
    /// `(Phi(x), Phi(y))`.
    pub fn ln_density_probit(&self, x: f64, y: f64) -> f64 {
        if self.is_independent() {
            return 0.0;
        }
        match self.family {
            CopulaFamily::Independence => 0.0,
            CopulaFamily::Gaussian => {
                let r = self.param;
                let d = 1.0 - r * r;
                -0.5 * d.ln() - (r * r * (x * x + y * y) - 2.0 * r * x * y) / (2.0 * d)
            }
            CopulaFamily::Clayton => {
                let t = self.param;
                let (lu, lv) = (normal::ln_cdf(x), normal::ln_cdf(y));
                // ln(u^-t + v^-t - 1) with a = -t ln u, b = -t ln v, both >= 0
                let (a, b) = (-t * lu, -t * lv);
                let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
                let rest = if lo > 30.0 {
                    (lo - hi).exp() - (-hi).exp()
                } else {
                    (-hi).exp() * lo.exp_m1()
                };
                let ln_s = hi + rest.ln_1p();
                (1.0 + t).ln() - (t + 1.0) * (lu + lv) - (2.0 + 1.0 / t) * ln_s
            }
            CopulaFamily::Gumbel => {
                let t = self.param;
                // x' = -ln u, y' = -ln v, positive
                let (a, b) = (-normal::ln_cdf(x), -normal::ln_cdf(y));
                let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
                let ln_s = t * hi.ln() + ((lo / hi).powf(t)).ln_1p();
                let big_a = (ln_s / t).exp();
                -big_a + a + b + (t - 1.0) * (a.ln() + b.ln()) + (2.0 / t - 2.0) * ln_s
                    + ((t - 1.0) / big_a).ln_1p()
            }
        }
    }

    /// Log copula density at `(u, v)` in the open unit square.
    pub fn ln_density(&self, u: f64, v: f64) -> Result<f64> {
        let x = crate::pseudo_obs::probit(u)?;
        let y = crate::pseudo_obs::probit(v)?;
        Ok(self.ln_density_probit(x, y))
    }
}

/// Draws from a positive stable law with Laplace transform `exp(-s^alpha)`,
/// `0 < alpha <= 1` (Kanter's representation).
pub fn positive_stable<R: Rng + ?Sized>(alpha: f64, rng: &mut R) -> f64 {
    if alpha >= 1.0 {
        return 1.0;
    }
    let theta: f64 = PI * rng.random::<f64>();
    let w: f64 = rng.sample(Exp1);
    let a = (alpha * theta).sin() / theta.sin().powf(1.0 / alpha);
    let b = ((1.0 - alpha) * theta).sin() / w;
    a * b.powf((1.0 - alpha) / alpha)
}

/// Standard normal quantile of `u` given `ln u`, precise in both tails.
fn probit_from_ln(ln_u: f64) -> f64 {
    let u = ln_u.exp();
    if u < 0.5 {
        normal::quantile(u.max(f64::MIN_POSITIVE))
    } else {
        // 1 - u without cancellation
        -normal::quantile((-ln_u.exp_m1()).max(f64::MIN_POSITIVE))
    }
}

/// `n` draws with standard normal margins and the given copula.
pub fn sample_copula(spec: &CopulaSpec, n: usize, seed: u64) -> BivariateSample {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut x = Vec::with_capacity(n);
    let mut y = Vec::with_capacity(n);
    match (spec.family, spec.is_independent()) {
        (CopulaFamily::Independence, _) | (_, true) => {
            for _ in 0..n {
                x.push(rng.sample(StandardNormal));
                y.push(rng.sample(StandardNormal));
            }
        }
        (CopulaFamily::Gaussian, false) => {
            let r = spec.param;
            let s = (1.0 - r * r).sqrt();
            for _ in 0..n {
                let a: f64 = rng.sample(StandardNormal);
                let b: f64 = rng.sample(StandardNormal);
                x.push(a);
                y.push(r * a + s * b);
            }
        }
        (CopulaFamily::Clayton, false) => {
            let t = spec.param;
            let frailty = Gamma::new(1.0 / t, 1.0).expect("shape is positive");
            for _ in 0..n {
                let v: f64 = frailty.sample(&mut rng).max(f64::MIN_POSITIVE);
                let e1: f64 = rng.sample(Exp1);
                let e2: f64 = rng.sample(Exp1);
                // psi(s) = (1 + s)^(-1/theta)
                x.push(probit_from_ln(-(e1 / v).ln_1p() / t));
                y.push(probit_from_ln(-(e2 / v).ln_1p() / t));
            }
        }
        (CopulaFamily::Gumbel, false) => {
            let alpha = 1.0 / spec.param;
            for _ in 0..n {
                let v = positive_stable(alpha, &mut rng).max(f64::MIN_POSITIVE);
                let e1: f64 = rng.sample(Exp1);
                let e2: f64 = rng.sample(Exp1);
                // psi(s) = exp(-s^alpha)
                x.push(probit_from_ln(-(e1 / v).powf(alpha)));
                y.push(probit_from_ln(-(e2 / v).powf(alpha)));
            }
        }
    }
    BivariateSample::new(x, y).expect("generated coordinates are finite")
}

/// True mutual information (nats) of the copula.
///
/// Gaussian: `-ln(1 - rho^2) / 2`. Archimedean families: the integral of
/// `c ln c` over the unit square, computed in probit coordinates where the
/// corner singularities become smooth, normally decaying tails.
pub fn true_mi(spec: &CopulaSpec, quad: &QuadConfig) -> Result<f64> {
    if spec.is_independent() {
        return Ok(0.0);
    }
    match spec.family {
        CopulaFamily::Independence => Ok(0.0),
        CopulaFamily::Gaussian => Ok(-0.5 * (1.0 - spec.param * spec.param).ln()),
        CopulaFamily::Clayton | CopulaFamily::Gumbel => {
            let integrand = |x: f64, y: f64| {
                let lc = spec.ln_density_probit(x, y);
                let f = (lc + normal::ln_pdf(x) + normal::ln_pdf(y)).exp();
                if f == 0.0 {
                    0.0
                } else {
                    f * lc
                }
            };
            let b = QUAD_HALF_WIDTH;
            let est = integrate_2d(integrand, (-b, b), (-b, b), quad)?;
            if est.error > quad.abs_tol {
                return Err(Error::Numerical {
                    message: format!("true MI quadrature for {} at tau={}", spec.family, spec.tau),
                    achieved: est.error,
                });
            }
            Ok(est.value)
        }
    }
}
