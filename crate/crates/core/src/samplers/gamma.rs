use rand::distr::Open01;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::special::Shape;

/// Logs below this value must not be exponentiated; the linear value would
/// underflow to a subnormal or zero.
pub const MAX_EXP_SAFE_NEG_LOG: f64 = -700.0;

/// Natural log of a unit-scale Gamma variate.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct LogGammaSample(f64);

impl LogGammaSample {
    #[inline]
    pub fn log_value(self) -> f64 {
        self.0
    }

    /// The variate itself, or `None` when it is not representable.
    pub fn to_linear(self) -> Option<f64> {
        (self.0 >= MAX_EXP_SAFE_NEG_LOG).then(|| self.0.exp())
    }
}

/// Log-domain Gamma(shape, 1) sampler.
///
/// Shapes `>= 1` use Marsaglia–Tsang rejection with the quadratic squeeze.
/// Smaller shapes draw `Y' ~ Gamma(shape + 1)` and return
/// `ln Y' + ln(U) / shape`, which is `ln(Y' U^(1/shape))` without ever
/// forming the power.
#[derive(Debug, Clone, Copy)]
pub struct LogGamma {
    shape: Shape,
    inv_shape: Option<f64>,
    d: f64,
    c: f64,
    ln_d: f64,
}

impl LogGamma {
    pub fn new(shape: Shape) -> Self {
        let a = shape.get();
        let (inv_shape, base) = if a < 1.0 {
            (Some(a.recip()), a + 1.0)
        } else {
            (None, a)
        };
        let d = base - 1.0 / 3.0;
        Self {
            shape,
            inv_shape,
            d,
            c: (9.0 * d).sqrt().recip(),
            ln_d: d.ln(),
        }
    }

    pub fn shape(&self) -> Shape {
        self.shape
    }

    fn sample_large_ln<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        loop {
            let x: f64 = rng.sample(StandardNormal);
            let v_cbrt = 1.0 + self.c * x;
            if v_cbrt <= 0.0 {
                continue;
            }
            let ln_v = 3.0 * v_cbrt.ln();
            let v = v_cbrt * v_cbrt * v_cbrt;
            let u: f64 = rng.sample(Open01);
            let x_sqr = x * x;
            if u < 1.0 - 0.0331 * x_sqr * x_sqr || u.ln() < 0.5 * x_sqr + self.d * (1.0 - v + ln_v)
            {
                return self.ln_d + ln_v;
            }
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> LogGammaSample {
        let ln_base = self.sample_large_ln(rng);
        match self.inv_shape {
            None => LogGammaSample(ln_base),
            Some(inv) => {
                let u: f64 = rng.sample(Open01);
                LogGammaSample(ln_base + u.ln() * inv)
            }
        }
    }
}

/// One log-domain Gamma(`shape`) variate.
pub fn sample_gamma_log<R: Rng + ?Sized>(rng: &mut R, shape: Shape) -> LogGammaSample {
    LogGamma::new(shape).sample(rng)
}
