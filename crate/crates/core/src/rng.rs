//! Deterministic random streams for sketch matrices and test-matrix setup.
//!
//! Two sources feed the columns of the sketch matrix `G`:
//!
//! * [`UniformLaggedFibonacci`], a subtractive lagged-Fibonacci generator on
//!   `[-1, 1]` with lags (55, 24). Each step is one floating-point
//!   subtraction plus at most one fold by ±2; no integer arithmetic touches
//!   the stream once it is seeded.
//! * [`GaussianStream`], standard normal variates from the polar Box–Muller
//!   transform of that uniform stream.
//!
//! Integer work (seed expansion, permutation sampling) goes through
//! [`SplitMix64`].

use alloc::vec::Vec;

/// SplitMix64 integer generator; used for seeding and for index sampling.
#[derive(Clone, Debug)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform integer in `0..bound` without modulo bias.
    pub fn below(&mut self, bound: u64) -> u64 {
        assert!(bound > 0, "empty range");
        let zone = u64::MAX - (u64::MAX - bound + 1) % bound;
        loop {
            let v = self.next_u64();
            if v <= zone {
                return v % bound;
            }
        }
    }
}

/// Mixes a base seed with a stream tag so that one user seed can drive
/// several independent streams.
pub fn derive_seed(seed: u64, stream: u64) -> u64 {
    let mut mixer = SplitMix64::new(seed ^ stream.wrapping_mul(0xD1B5_4A32_D192_ED03));
    mixer.next_u64()
}

/// A stream of reals that can fill sketch columns one at a time.
pub trait SketchSource {
    fn next_value(&mut self) -> f64;

    /// Writes the next `out.len()` stream values into `out`.
    fn fill_column(&mut self, out: &mut [f64]) {
        for v in out {
            *v = self.next_value();
        }
    }

    /// The next `len` stream values; `len == 0` yields an empty vector and
    /// leaves the stream untouched.
    fn column(&mut self, len: usize) -> Vec<f64> {
        let mut out = alloc::vec![0.0; len];
        self.fill_column(&mut out);
        out
    }
}

impl<S: SketchSource + ?Sized> SketchSource for &mut S {
    fn next_value(&mut self) -> f64 {
        (**self).next_value()
    }

    fn fill_column(&mut self, out: &mut [f64]) {
        (**self).fill_column(out)
    }
}

const LONG_LAG: usize = 55;
const SHORT_LAG: usize = 24;
const WARMUP: usize = 10 * LONG_LAG;

/// Subtractive lagged-Fibonacci generator, `x_k = x_{k-55} − x_{k-24}`
/// folded back into `[-1, 1]`.
#[derive(Clone, Debug)]
pub struct UniformLaggedFibonacci {
    ring: [f64; LONG_LAG],
    // index of x_{k-55}, the oldest entry
    cursor: usize,
    seed: u64,
}

impl UniformLaggedFibonacci {
    pub fn new(seed: u64) -> Self {
        let mut mixer = SplitMix64::new(seed);
        let mut ring = [0.0; LONG_LAG];
        // Values on a 2^-51 grid in [-1, 1): every later difference and fold
        // is exact in double precision.
        for slot in ring.iter_mut() {
            let unit = (mixer.next_u64() >> 12) as f64 * (1.0 / (1u64 << 52) as f64);
            *slot = 2.0 * unit - 1.0;
        }
        let mut g = Self { ring, cursor: 0, seed };
        for _ in 0..WARMUP {
            g.next_uniform();
        }
        g
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    #[inline]
    pub fn next_uniform(&mut self) -> f64 {
        let short = (self.cursor + LONG_LAG - SHORT_LAG) % LONG_LAG;
        let mut v = self.ring[self.cursor] - self.ring[short];
        if v > 1.0 {
            v -= 2.0;
        } else if v < -1.0 {
            v += 2.0;
        }
        self.ring[self.cursor] = v;
        self.cursor += 1;
        if self.cursor == LONG_LAG {
            self.cursor = 0;
        }
        v
    }
}

impl SketchSource for UniformLaggedFibonacci {
    fn next_value(&mut self) -> f64 {
        self.next_uniform()
    }
}

/// Standard normal variates via the polar Box–Muller method.
#[derive(Clone, Debug)]
pub struct GaussianStream {
    base: UniformLaggedFibonacci,
    spare: Option<f64>,
}

impl GaussianStream {
    pub fn new(seed: u64) -> Self {
        Self {
            base: UniformLaggedFibonacci::new(seed),
            spare: None,
        }
    }

    pub fn seed(&self) -> u64 {
        self.base.seed()
    }

    pub fn next_gaussian(&mut self) -> f64 {
        if let Some(v) = self.spare.take() {
            return v;
        }
        loop {
            let u = self.base.next_uniform();
            let v = self.base.next_uniform();
            let s = u * u + v * v;
            if s > 0.0 && s < 1.0 {
                let factor = libm::sqrt(-2.0 * libm::log(s) / s);
                self.spare = Some(v * factor);
                return u * factor;
            }
        }
    }
}

impl SketchSource for GaussianStream {
    fn next_value(&mut self) -> f64 {
        self.next_gaussian()
    }
}

/// Which distribution fills the sketch matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SketchKind {
    LaggedFibonacci,
    Gaussian,
}

/// Runtime-selected sketch source.
#[derive(Clone, Debug)]
pub enum SketchRng {
    LaggedFibonacci(UniformLaggedFibonacci),
    Gaussian(GaussianStream),
}

impl SketchRng {
    pub fn new(kind: SketchKind, seed: u64) -> Self {
        match kind {
            SketchKind::LaggedFibonacci => Self::LaggedFibonacci(UniformLaggedFibonacci::new(seed)),
            SketchKind::Gaussian => Self::Gaussian(GaussianStream::new(seed)),
        }
    }
}

impl SketchSource for SketchRng {
    fn next_value(&mut self) -> f64 {
        match self {
            Self::LaggedFibonacci(g) => g.next_uniform(),
            Self::Gaussian(g) => g.next_gaussian(),
        }
    }

    fn fill_column(&mut self, out: &mut [f64]) {
        match self {
            Self::LaggedFibonacci(g) => g.fill_column(out),
            Self::Gaussian(g) => g.fill_column(out),
        }
    }
}
