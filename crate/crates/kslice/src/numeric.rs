//! Shared numeric kernels: exact rational arithmetic, dyadic-rounded complex
//! evaluation, big-integer logarithms, and the small statistics helpers used
//! by the verification suites.

use num_bigint::{BigInt, BigUint, Sign};
use num_complex::Complex64;
use num_rational::Ratio;
use num_traits::{One, ToPrimitive, Zero};

/// Exact rational number. Every f64 input is converted losslessly, so chains
/// of rational operations carry no rounding error at all.
pub type Rat = Ratio<BigInt>;

/// Exact conversion of a finite f64 into a rational (every finite f64 is a
/// dyadic rational).
pub fn rat_from_f64(x: f64) -> Option<Rat> {
    if !x.is_finite() {
        return None;
    }
    Ratio::from_float(x)
}

/// Rational to f64 with correct handling of huge numerators/denominators.
pub fn rat_to_f64(x: &Rat) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// Natural log of a positive big integer, stable for values far beyond the
/// f64 range: reads the top 64 bits and adjusts by the bit length.
pub fn ln_biguint(x: &BigUint) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = x.bits();
    if bits <= 63 {
        return (x.to_u64().expect("fits") as f64).ln();
    }
    let shift = bits - 63;
    let top = (x >> shift).to_u64().expect("top 63 bits fit");
    (top as f64).ln() + shift as f64 * std::f64::consts::LN_2
}

/// Round a rational to a dyadic rational with roughly `bits` significant
/// bits. Keeps exact values exact when they are already short.
pub fn round_to_bits(x: &Rat, bits: u64) -> Rat {
    let (num, den) = (x.numer(), x.denom());
    if num.is_zero() {
        return Rat::zero();
    }
    let nb = num.magnitude().bits();
    let db = den.magnitude().bits();
    if nb <= bits && db <= bits {
        return x.clone();
    }
    // Scale so the result mantissa has `bits` bits: x ~ m / 2^e.
    let e = db as i64 + bits as i64 - nb as i64;
    let m = if e >= 0 {
        let scaled = (num << e as u64) / den;
        scaled
    } else {
        num / (den << (-e) as u64)
    };
    if e >= 0 {
        Rat::new(m, BigInt::one() << e as u64)
    } else {
        Rat::from_integer(m << (-e) as u64)
    }
}

/// Complex number with exact rational components.
#[derive(Clone, Debug, PartialEq)]
pub struct RatComplex {
    pub re: Rat,
    pub im: Rat,
}

impl RatComplex {
    pub fn new(re: Rat, im: Rat) -> Self {
        RatComplex { re, im }
    }

    pub fn zero() -> Self {
        RatComplex { re: Rat::zero(), im: Rat::zero() }
    }

    pub fn one() -> Self {
        RatComplex { re: Rat::one(), im: Rat::zero() }
    }

    pub fn from_f64(z: Complex64) -> Option<Self> {
        Some(RatComplex { re: rat_from_f64(z.re)?, im: rat_from_f64(z.im)? })
    }

    pub fn to_complex64(&self) -> Complex64 {
        Complex64::new(rat_to_f64(&self.re), rat_to_f64(&self.im))
    }

    pub fn conj(&self) -> Self {
        RatComplex { re: self.re.clone(), im: -self.im.clone() }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        RatComplex { re: &self.re + &rhs.re, im: &self.im + &rhs.im }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        RatComplex {
            re: &self.re * &rhs.re - &self.im * &rhs.im,
            im: &self.re * &rhs.im + &self.im * &rhs.re,
        }
    }

    pub fn scale(&self, s: &Rat) -> Self {
        RatComplex { re: &self.re * s, im: &self.im * s }
    }

    pub fn norm_sqr(&self) -> Rat {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn div(&self, rhs: &Self) -> Option<Self> {
        let d = rhs.norm_sqr();
        if d.is_zero() {
            return None;
        }
        let num = self.mul(&rhs.conj());
        Some(RatComplex { re: num.re / &d, im: num.im / d })
    }

    /// Round both components to ~`bits` significant bits.
    pub fn rounded(&self, bits: u64) -> Self {
        RatComplex { re: round_to_bits(&self.re, bits), im: round_to_bits(&self.im, bits) }
    }

    pub fn abs_f64(&self) -> f64 {
        let n = self.norm_sqr();
        rat_to_f64(&n).sqrt()
    }
}

/// Number of mantissa bits used by the dyadic-rounded complex pipeline.
/// 256 bits is about 77 decimal digits.
pub const EVAL_BITS: u64 = 256;

/// exp(t) for rational complex t, by Taylor series with per-step dyadic
/// rounding at `bits` precision. Accurate to ~2^-bits relative error for
/// |t| up to a few units, which covers every probe contour in use.
pub fn exp_rat_complex(t: &RatComplex, bits: u64) -> RatComplex {
    let t = t.rounded(bits);
    let mut term = RatComplex::one();
    let mut sum = RatComplex::one();
    for k in 1..400u64 {
        term = term.mul(&t).scale(&Rat::new(BigInt::one(), BigInt::from(k)));
        term = term.rounded(bits + 32);
        sum = sum.add(&term).rounded(bits + 32);
        // Stop once the term sits below the target precision; later terms
        // decay faster than geometrically.
        let ts = term.norm_sqr();
        let ss = sum.norm_sqr();
        if ts.is_zero() {
            break;
        }
        let ratio = rat_to_f64(&(ts / ss));
        if ratio == 0.0 || ratio < 0.25_f64.powi(bits as i32 + 8) {
            break;
        }
    }
    sum.rounded(bits)
}

/// SplitMix64 step, used to derive independent per-chain RNG stream seeds
/// from a user seed and a stream index.
pub fn splitmix64(state: u64) -> u64 {
    let mut z = state.wrapping_add(0x9e3779b97f4a7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

/// Derive the seed for stream `index` of master seed `seed`.
pub fn stream_seed(seed: u64, index: u64) -> u64 {
    splitmix64(seed ^ splitmix64(index.wrapping_add(0xa076_1d64_78bd_642f)))
}

/// Regularized lower incomplete gamma P(a, x).
pub fn gamma_p(a: f64, x: f64) -> f64 {
    assert!(a > 0.0 && x >= 0.0);
    if x == 0.0 {
        return 0.0;
    }
    if x < a + 1.0 {
        // series expansion
        let mut ap = a;
        let mut sum = 1.0 / a;
        let mut del = sum;
        for _ in 0..500 {
            ap += 1.0;
            del *= x / ap;
            sum += del;
            if del.abs() < sum.abs() * 1e-16 {
                break;
            }
        }
        sum * (-x + a * x.ln() - ln_gamma(a)).exp()
    } else {
        // continued fraction for Q, then P = 1 - Q
        let mut b = x + 1.0 - a;
        let mut c = 1.0 / 1e-300;
        let mut d = 1.0 / b;
        let mut h = d;
        for i in 1..500 {
            let an = -(i as f64) * (i as f64 - a);
            b += 2.0;
            d = an * d + b;
            if d.abs() < 1e-300 {
                d = 1e-300;
            }
            c = b + an / c;
            if c.abs() < 1e-300 {
                c = 1e-300;
            }
            d = 1.0 / d;
            let del = d * c;
            h *= del;
            if (del - 1.0).abs() < 1e-16 {
                break;
            }
        }
        1.0 - (-x + a * x.ln() - ln_gamma(a)).exp() * h
    }
}

/// ln Γ(x) by the Lanczos approximation.
pub fn ln_gamma(x: f64) -> f64 {
    const G: [f64; 6] = [
        76.18009172947146,
        -86.50532032941677,
        24.01409824083091,
        -1.231739572450155,
        0.1208650973866179e-2,
        -0.5395239384953e-5,
    ];
    let mut y = x;
    let tmp = x + 5.5;
    let tmp = tmp - (x + 0.5) * tmp.ln();
    let mut ser = 1.000000000190015;
    for g in G {
        y += 1.0;
        ser += g / y;
    }
    -tmp + (2.5066282746310005 * ser / x).ln()
}

/// Chi-square quantile: smallest x with P(df/2, x/2) >= p, by bisection.
pub fn chi_square_quantile(p: f64, df: usize) -> f64 {
    assert!((0.0..1.0).contains(&p) && df >= 1);
    let a = df as f64 / 2.0;
    let mut lo = 0.0;
    let mut hi = df as f64;
    while gamma_p(a, hi / 2.0) < p {
        hi *= 2.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if gamma_p(a, mid / 2.0) < p {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-10 * hi.max(1.0) {
            break;
        }
    }
    0.5 * (lo + hi)
}

/// Binomial coefficient over big integers.
pub fn binomial(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}

/// Format an f64 as a fixed-form decimal string, used everywhere machine
/// output must be byte-stable.
pub fn decimal(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    format!("{x:.17e}")
}

/// Exact rational as a "p/q" string.
pub fn rat_string(x: &Rat) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Sign-aware BigInt bit length helper used by `round_to_bits`.
pub fn bigint_bits(x: &BigInt) -> u64 {
    match x.sign() {
        Sign::NoSign => 0,
        _ => x.magnitude().bits(),
    }
}
