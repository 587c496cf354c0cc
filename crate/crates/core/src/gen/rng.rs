//! SplitMix64: a 64-bit counter-based generator.
//!
//! Output `k` (1-based) for seed `s` is `mix(s + k * 0x9E3779B97F4A7C15)`
//! with the standard SplitMix64 finalizer, so any implementation can
//! reproduce the stream. Reference values for seed 0:
//!
//! ```text
//! 0xE220A8397B1DCDAF
//! 0x6E789E6AA1B965F4
//! 0x06C45D188009454F
//! ```
//!
//! Uniforms take the top 53 bits; normals use one Box-Muller draw per pair
//! of uniforms (the sine branch is discarded).

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::algebra::AlgebraElement;
use crate::hmodule::{AdjointableOp, ModuleVector};
use crate::linalg::{self, FlatMatrix};

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

#[derive(Clone, Debug)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GOLDEN_GAMMA);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform on `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform on `[lo, hi)`.
    pub fn uniform_in(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.uniform()
    }

    pub fn below(&mut self, bound: u64) -> u64 {
        self.next_u64() % bound
    }

    pub fn normal(&mut self) -> f64 {
        let u1 = 1.0 - self.uniform();
        let u2 = self.uniform();
        libm::sqrt(-2.0 * libm::log(u1)) * libm::cos(2.0 * core::f64::consts::PI * u2)
    }

    /// Standard complex Gaussian (`E|z|^2 = 1`).
    pub fn complex_normal(&mut self) -> Complex64 {
        let re = self.normal();
        let im = self.normal();
        Complex64::new(re, im) * core::f64::consts::FRAC_1_SQRT_2
    }

    pub fn gaussian_matrix(&mut self, rows: usize, cols: usize) -> FlatMatrix {
        FlatMatrix::from_fn(rows, cols, |_, _| self.complex_normal())
    }

    pub fn algebra_element(&mut self, n: usize) -> AlgebraElement {
        AlgebraElement::new(self.gaussian_matrix(n, n)).expect("gaussian entries are finite")
    }

    pub fn module_vector(&mut self, n: usize, len: usize) -> ModuleVector {
        ModuleVector::from_flat(n, self.gaussian_matrix(n, n * len)).expect("shape n x n len")
    }

    /// Operator `A^source -> A^target` with i.i.d. complex Gaussian flat
    /// entries scaled by `scale`.
    pub fn operator(&mut self, n: usize, source: usize, target: usize, scale: f64) -> AdjointableOp {
        let flat = self.gaussian_matrix(n * source, n * target).scale_real(scale);
        AdjointableOp::from_flat(n, flat).expect("block shape")
    }

    /// Haar unitary of size `dim` (Gram-Schmidt of a Gaussian matrix with
    /// positive diagonal `R`).
    pub fn unitary(&mut self, dim: usize) -> FlatMatrix {
        loop {
            let z = self.gaussian_matrix(dim, dim);
            if let Ok(q) = linalg::orthonormalize_columns(&z) {
                return q;
            }
        }
    }

    /// Unit vector uniformly distributed on the complex sphere.
    pub fn unit_vector(&mut self, dim: usize) -> Vec<Complex64> {
        loop {
            let v: Vec<Complex64> = (0..dim).map(|_| self.complex_normal()).collect();
            let norm = libm::sqrt(v.iter().map(|z| z.norm_sqr()).sum());
            if norm > 1e-12 {
                return v.into_iter().map(|z| z / norm).collect();
            }
        }
    }
}
