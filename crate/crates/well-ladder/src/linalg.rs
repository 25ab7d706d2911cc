//! Dense complex linear algebra: scaling-and-squaring matrix exponential
//! and an LU solver to back it.
//!
//! The exponential uses the order-13 Padé approximant with 1-norm based
//! scaling (Higham 2005, "The scaling and squaring method for the matrix
//! exponential revisited"). No Hermitian or anti-Hermitian structure is
//! assumed — the su(1,1) generators here are neither.

use ndarray::Array2;
use num_complex::Complex64 as C64;

const THETA_13: f64 = 5.371_920_351_148_152;

const PADE_13: [f64; 14] = [
    64_764_752_532_480_000.0,
    32_382_376_266_240_000.0,
    7_771_770_303_897_600.0,
    1_187_353_796_428_800.0,
    129_060_195_264_000.0,
    10_559_470_521_600.0,
    670_442_572_800.0,
    33_522_128_640.0,
    1_323_241_920.0,
    40_840_800.0,
    960_960.0,
    16_380.0,
    182.0,
    1.0,
];

/// Exact matrix 1-norm (maximum absolute column sum).
pub fn one_norm(a: &Array2<C64>) -> f64 {
    let mut worst = 0.0_f64;
    for col in a.columns() {
        worst = worst.max(col.iter().map(|v| v.norm()).sum());
    }
    worst
}

fn eye(n: usize) -> Array2<C64> {
    Array2::from_diag_elem(n, C64::new(1.0, 0.0))
}

/// exp(A) for a square complex matrix by Padé-13 scaling and squaring.
pub fn expm(a: &Array2<C64>) -> Array2<C64> {
    assert!(a.is_square(), "expm needs a square matrix");
    let n = a.nrows();
    let norm = one_norm(a);
    let s = if norm > THETA_13 {
        (norm / THETA_13).log2().ceil() as i32
    } else {
        0
    };
    let scale = C64::new(0.5_f64.powi(s), 0.0);
    let a1 = a.mapv(|v| v * scale);
    let a2 = a1.dot(&a1);
    let a4 = a2.dot(&a2);
    let a6 = a2.dot(&a4);
    let b = |k: usize| C64::new(PADE_13[k], 0.0);
    let id = eye(n);

    let w1 = a6.mapv(|v| v * b(13)) + &a4.mapv(|v| v * b(11)) + &a2.mapv(|v| v * b(9));
    let w2 = a6.mapv(|v| v * b(7))
        + &a4.mapv(|v| v * b(5))
        + &a2.mapv(|v| v * b(3))
        + &id.mapv(|v| v * b(1));
    let u = a1.dot(&(a6.dot(&w1) + &w2));

    let z1 = a6.mapv(|v| v * b(12)) + &a4.mapv(|v| v * b(10)) + &a2.mapv(|v| v * b(8));
    let v = a6.dot(&z1)
        + &a6.mapv(|x| x * b(6))
        + &a4.mapv(|x| x * b(4))
        + &a2.mapv(|x| x * b(2))
        + &id.mapv(|x| x * b(0));

    let lhs = &v - &u;
    let rhs = &v + &u;
    let mut f = lu_solve(lhs, rhs);
    for _ in 0..s {
        f = f.dot(&f);
    }
    f
}

/// Solves A·X = B by LU with partial pivoting, consuming both matrices.
/// Panics on a numerically singular pivot; the Padé denominators used here
/// are always well conditioned.
pub fn lu_solve(mut a: Array2<C64>, mut b: Array2<C64>) -> Array2<C64> {
    let n = a.nrows();
    assert!(a.is_square() && b.nrows() == n, "shape mismatch in lu_solve");
    for k in 0..n {
        // pivot
        let mut p = k;
        let mut best = a[[k, k]].norm();
        for r in k + 1..n {
            let m = a[[r, k]].norm();
            if m > best {
                best = m;
                p = r;
            }
        }
        assert!(best > 0.0, "singular matrix in lu_solve");
        if p != k {
            for c in 0..n {
                let tmp = a[[k, c]];
                a[[k, c]] = a[[p, c]];
                a[[p, c]] = tmp;
            }
            for c in 0..b.ncols() {
                let tmp = b[[k, c]];
                b[[k, c]] = b[[p, c]];
                b[[p, c]] = tmp;
            }
        }
        let piv = a[[k, k]];
        for r in k + 1..n {
            let factor = a[[r, k]] / piv;
            if factor.norm() == 0.0 {
                continue;
            }
            a[[r, k]] = factor;
            for c in k + 1..n {
                let akc = a[[k, c]];
                a[[r, c]] -= factor * akc;
            }
            for c in 0..b.ncols() {
                let bkc = b[[k, c]];
                b[[r, c]] -= factor * bkc;
            }
        }
    }
    // back substitution
    for c in 0..b.ncols() {
        for k in (0..n).rev() {
            let mut acc = b[[k, c]];
            for m in k + 1..n {
                acc -= a[[k, m]] * b[[m, c]];
            }
            b[[k, c]] = acc / a[[k, k]];
        }
    }
    b
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn max_abs_diff(a: &Array2<C64>, b: &Array2<C64>) -> f64 {
        a.iter()
            .zip(b.iter())
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max)
    }

    #[test]
    fn exponential_of_zero_is_identity() {
        let a = Array2::<C64>::zeros((5, 5));
        let e = expm(&a);
        assert!(max_abs_diff(&e, &eye(5)) < 1e-15);
    }

    #[test]
    fn exponential_of_diagonal() {
        let mut a = Array2::<C64>::zeros((3, 3));
        a[[0, 0]] = c(1.0, 0.0);
        a[[1, 1]] = c(-2.0, 0.5);
        a[[2, 2]] = c(0.0, 3.0);
        let e = expm(&a);
        for i in 0..3 {
            let expect = a[[i, i]].exp();
            assert!((e[[i, i]] - expect).norm() < 1e-14 * expect.norm());
        }
    }

    #[test]
    fn exponential_of_nilpotent() {
        let mut a = Array2::<C64>::zeros((2, 2));
        a[[0, 1]] = c(3.0, -1.0);
        let e = expm(&a);
        assert!((e[[0, 0]] - c(1.0, 0.0)).norm() < 1e-15);
        assert!((e[[0, 1]] - c(3.0, -1.0)).norm() < 1e-15);
        assert!(e[[1, 0]].norm() < 1e-15);
    }

    #[test]
    fn exponential_against_taylor_series() {
        // small-norm pseudo-random matrix: series converges fast
        let n = 6;
        let mut a = Array2::<C64>::zeros((n, n));
        let mut seed = 1u64;
        for v in a.iter_mut() {
            seed = seed.wrapping_mul(6_364_136_223_846_793_005).wrapping_add(1);
            let r1 = (seed >> 33) as f64 / (1u64 << 31) as f64 - 1.0;
            seed = seed.wrapping_mul(6_364_136_223_846_793_005).wrapping_add(1);
            let r2 = (seed >> 33) as f64 / (1u64 << 31) as f64 - 1.0;
            *v = c(0.2 * r1, 0.2 * r2);
        }
        let e = expm(&a);
        let mut series = eye(n);
        let mut term = eye(n);
        for k in 1..40 {
            term = term.dot(&a).mapv(|v| v / k as f64);
            series = series + &term;
        }
        assert!(max_abs_diff(&e, &series) < 1e-13);
    }

    #[test]
    fn scaling_path_inverse_identity() {
        // exp(A)·exp(−A) = I holds for any A; exercises s > 0
        let n = 8;
        let mut a = Array2::<C64>::zeros((n, n));
        for i in 0..n {
            for j in 0..n {
                let v = ((i * 7 + j * 3) % 11) as f64 - 5.0;
                a[[i, j]] = c(1.5 * v, 0.7 * (v - 1.0));
            }
        }
        assert!(one_norm(&a) > THETA_13);
        let e = expm(&a);
        let em = expm(&a.mapv(|v| -v));
        let prod = e.dot(&em);
        assert!(max_abs_diff(&prod, &eye(n)) < 1e-9);
    }

    #[test]
    fn anti_hermitian_generator_is_unitary() {
        let n = 5;
        let mut a = Array2::<C64>::zeros((n, n));
        for i in 0..n {
            for j in 0..i {
                let v = c(0.3 * (i + j) as f64, 0.1 * (i as f64 - j as f64));
                a[[i, j]] = v;
                a[[j, i]] = -v.conj();
            }
            a[[i, i]] = c(0.0, 0.5 * i as f64);
        }
        let e = expm(&a);
        let dagger = e.t().mapv(|v| v.conj());
        let prod = dagger.dot(&e);
        assert!(max_abs_diff(&prod, &eye(n)) < 1e-13);
    }

    #[test]
    fn lu_solves_small_system() {
        let mut a = Array2::<C64>::zeros((2, 2));
        a[[0, 0]] = c(2.0, 0.0);
        a[[0, 1]] = c(1.0, 1.0);
        a[[1, 0]] = c(0.0, -1.0);
        a[[1, 1]] = c(3.0, 0.0);
        let mut b = Array2::<C64>::zeros((2, 1));
        b[[0, 0]] = c(1.0, 0.0);
        b[[1, 0]] = c(0.0, 2.0);
        let x = lu_solve(a.clone(), b.clone());
        let r = a.dot(&x) - &b;
        assert!(r.iter().map(|v| v.norm()).fold(0.0, f64::max) < 1e-14);
    }
}
