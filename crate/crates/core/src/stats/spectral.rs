//! Second-largest singular value of the walk matrix.
//!
//! For undirected graphs and abelian Cayley graphs the walk matrix is normal,
//! so this equals the largest non-trivial eigenvalue modulus.

use nalgebra::{DMatrix, SymmetricEigen};
use rand::Rng;
use serde::Serialize;

use super::matrix::Matrix;
use crate::error::{input, Result};
use crate::graph::RegularGraph;
use crate::group::GroupSpec;
use crate::rng::stream;

/// Largest group handled by the character-sum path.
pub const MAX_CHARACTER_ORDER: u64 = 1 << 26;
/// Largest graph handled by dense decompositions.
pub const MAX_DENSE_SPECTRUM: usize = 2048;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LambdaEstimate {
    pub value: f64,
    pub converged: bool,
    pub iterations: usize,
}

/// Power iteration on `W^T W` restricted to the complement of the constant
/// vector. Returns `||W x||` for the final unit iterate `x`, which is a lower
/// bound on the true value and converges to it.
pub fn estimate_lambda(g: &RegularGraph, max_iter: usize, tolerance: f64) -> LambdaEstimate {
    let n = g.n();
    let d = g.d() as f64;
    let mut rng = stream(0x1a4b_da00, n as u64);
    let mut x: Vec<f64> = (0..n).map(|_| rng.random::<f64>() - 0.5).collect();
    deflate(&mut x);
    if normalize(&mut x) == 0.0 {
        return LambdaEstimate { value: 0.0, converged: true, iterations: 0 };
    }
    let mut prev = f64::NAN;
    let mut value = 0.0;
    for it in 1..=max_iter {
        // y = W x
        let y: Vec<f64> = (0..n).map(|u| g.neighbors(u).map(|w| x[w]).sum::<f64>() / d).collect();
        value = y.iter().map(|v| v * v).sum::<f64>().sqrt();
        // z = W^T y
        let mut z = vec![0.0; n];
        for (u, &yu) in y.iter().enumerate() {
            for w in g.neighbors(u) {
                z[w] += yu / d;
            }
        }
        deflate(&mut z);
        if normalize(&mut z) == 0.0 {
            return LambdaEstimate { value, converged: true, iterations: it };
        }
        x = z;
        if (value - prev).abs() <= tolerance * value.max(1e-300) {
            return LambdaEstimate { value, converged: true, iterations: it };
        }
        prev = value;
    }
    LambdaEstimate { value, converged: false, iterations: max_iter }
}

fn deflate(x: &mut [f64]) {
    let mean = x.iter().sum::<f64>() / x.len() as f64;
    x.iter_mut().for_each(|v| *v -= mean);
}

fn normalize(x: &mut [f64]) -> f64 {
    let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    if norm > 0.0 {
        x.iter_mut().for_each(|v| *v /= norm);
    }
    norm
}

/// Exact value from a dense decomposition (symmetric eigen for undirected
/// graphs, singular values otherwise).
pub fn exact_lambda(g: &RegularGraph) -> Result<f64> {
    let n = g.n();
    if n > MAX_DENSE_SPECTRUM {
        return input(format!("dense spectrum limited to n <= {MAX_DENSE_SPECTRUM}"));
    }
    if n == 1 {
        return Ok(0.0);
    }
    let w = Matrix::transition(g);
    let m = DMatrix::from_fn(n, n, |i, j| w.get(i, j));
    let mut values: Vec<f64> = if g.is_undirected() {
        SymmetricEigen::new(m).eigenvalues.iter().map(|v| v.abs()).collect()
    } else {
        m.svd(false, false).singular_values.iter().copied().collect()
    };
    values.sort_by(|a, b| b.total_cmp(a));
    Ok(values[1].min(1.0))
}

/// Exact value for an abelian Cayley graph from its characters:
/// `max |sum_s chi_a(s)| / d` over non-trivial characters `a`.
pub fn cayley_lambda(spec: &GroupSpec) -> Result<f64> {
    let order = match spec.order() {
        Some(o) if o <= MAX_CHARACTER_ORDER => o,
        _ => return input(format!("character sums limited to groups of order <= {MAX_CHARACTER_ORDER}")),
    };
    if order == 1 {
        return Ok(0.0);
    }
    let d = spec.degree() as f64;
    if spec.moduli().iter().all(|&m| m == 2) {
        // Walsh-Hadamard transform of the generator indicator
        let mut f = vec![0.0f64; order as usize];
        for s in spec.generators() {
            let id = spec.encode(s).expect("generator in group") as usize;
            f[id] += 1.0;
        }
        let mut h = 1;
        while h < f.len() {
            for i in (0..f.len()).step_by(2 * h) {
                for j in i..i + h {
                    let (a, b) = (f[j], f[j + h]);
                    f[j] = a + b;
                    f[j + h] = a - b;
                }
            }
            h *= 2;
        }
        return Ok(f[1..].iter().fold(0.0f64, |m, v| m.max(v.abs())) / d);
    }
    if order.saturating_mul(spec.degree() as u64) > 1 << 30 {
        return input("character sums too expensive for this group");
    }
    let moduli = spec.moduli();
    let gens: Vec<Vec<f64>> = spec
        .generators()
        .iter()
        .map(|s| s.0.iter().zip(moduli).map(|(&x, &m)| x as f64 / m as f64).collect())
        .collect();
    let mut best = 0.0f64;
    for id in 1..order {
        let a = spec.decode(id);
        let (mut re, mut im) = (0.0, 0.0);
        for s in &gens {
            let phase: f64 = a.0.iter().zip(s).map(|(&aj, sj)| aj as f64 * sj).sum();
            let angle = std::f64::consts::TAU * phase.fract();
            re += angle.cos();
            im += angle.sin();
        }
        best = best.max(re.hypot(im));
    }
    Ok(best / d)
}

/// Best available value: exact characters for Cayley graphs, a dense
/// decomposition for small graphs, otherwise power iteration.
pub fn lambda(g: &RegularGraph) -> LambdaEstimate {
    if let Some(spec) = g.group_spec() {
        if let Ok(value) = cayley_lambda(spec) {
            return LambdaEstimate { value, converged: true, iterations: 0 };
        }
    }
    if g.n() <= 512 {
        if let Ok(value) = exact_lambda(g) {
            return LambdaEstimate { value, converged: true, iterations: 0 };
        }
    }
    estimate_lambda(g, 5000, 1e-9)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen::{gen_cycle, gen_hypercube, gen_random_regular};
    use crate::graph::Orientation;

    // Closed forms: cycle C_n has eigenvalues cos(2 pi j / n); hypercube Q_m
    // has 1 - 2k/m; K_n has -1/(n-1).
    #[test]
    fn known_spectra() {
        let k4 = RegularGraph::from_lists(
            &[vec![1, 2, 3], vec![0, 2, 3], vec![0, 1, 3], vec![0, 1, 2]],
            Orientation::Undirected,
        )
        .unwrap();
        assert!((exact_lambda(&k4).unwrap() - 1.0 / 3.0).abs() < 1e-12);
        assert!((estimate_lambda(&k4, 100, 1e-12).value - 1.0 / 3.0).abs() < 1e-9);

        let c5 = gen_cycle(5).unwrap();
        let want = (std::f64::consts::TAU * 2.0 / 5.0).cos().abs();
        assert!((cayley_lambda(c5.group_spec().unwrap()).unwrap() - want).abs() < 1e-12);
        assert!((exact_lambda(&c5.materialize()).unwrap() - want).abs() < 1e-12);

        let c4 = gen_cycle(4).unwrap();
        assert!((cayley_lambda(c4.group_spec().unwrap()).unwrap() - 1.0).abs() < 1e-12);
        assert!((estimate_lambda(&c4, 100, 1e-12).value - 1.0).abs() < 1e-9);

        let q4 = gen_hypercube(4).unwrap();
        assert!((cayley_lambda(q4.group_spec().unwrap()).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn directed_cayley_uses_singular_values() {
        // Z_7 with generators {1, 2}: not symmetric, so the walk is directed.
        let g = RegularGraph::cayley(GroupSpec::cyclic(7, &[1, 2]).unwrap()).unwrap();
        assert!(!g.is_undirected());
        let chars = cayley_lambda(g.group_spec().unwrap()).unwrap();
        let svd = exact_lambda(&g.materialize()).unwrap();
        assert!((chars - svd).abs() < 1e-10);
    }

    #[test]
    fn power_iteration_matches_dense() {
        let g = gen_random_regular(200, 3, &mut stream(3, 0)).unwrap().graph;
        let exact = exact_lambda(&g).unwrap();
        let est = estimate_lambda(&g, 20_000, 1e-12);
        assert!(est.value <= exact + 1e-9);
        assert!((est.value - exact).abs() < 1e-3, "{} vs {exact}", est.value);
    }
}
