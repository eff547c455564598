use rand::Rng;
use rand_distr::{ChiSquared, Distribution, StandardNormal};

/// Brownian motion on `k / grid`, `k = 0..=grid`, starting at zero.
pub fn sample_bm<R: Rng + ?Sized>(grid: usize, rng: &mut R) -> Vec<f64> {
    let sd = 1.0 / (grid as f64).sqrt();
    let mut path = Vec::with_capacity(grid + 1);
    path.push(0.0);
    let mut acc = 0.0;
    for _ in 0..grid {
        let z: f64 = rng.sample(StandardNormal);
        acc += sd * z;
        path.push(acc);
    }
    path
}

/// Brownian bridge `b(s) = B(s) - s B(1)` on `k / grid`; both ends are zero.
pub fn sample_bridge<R: Rng + ?Sized>(grid: usize, rng: &mut R) -> Vec<f64> {
    let mut path = sample_bm(grid, rng);
    let end = path[grid];
    for (k, v) in path.iter_mut().enumerate() {
        *v -= k as f64 / grid as f64 * end;
    }
    path[grid] = 0.0;
    path
}

/// `(r, s) ↦ W(r, s)` on a `(grid+1) × (grid+1)` lattice, rows indexed by `r`.
#[derive(Debug, Clone, PartialEq)]
pub struct PillowcaseDraw {
    pub grid: usize,
    pub values: Vec<f64>,
}

impl PillowcaseDraw {
    pub fn get(&self, j: usize, k: usize) -> f64 {
        self.values[j * (self.grid + 1) + k]
    }

    pub fn sup_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |a: f64, v| a.max(v.abs()))
    }
}

/// `W_n(r, s) = n^{-1/2} Σ_{i=1}^{n} B_i(r) b_i(s)` from `n` independent
/// motion/bridge pairs.
pub fn sample_pillowcase<R: Rng + ?Sized>(grid: usize, inner_n: usize, rng: &mut R) -> PillowcaseDraw {
    let side = grid + 1;
    let mut values = vec![0.0; side * side];
    for _ in 0..inner_n {
        let bm = sample_bm(grid, rng);
        let bridge = sample_bridge(grid, rng);
        for (j, b) in bm.iter().enumerate().skip(1) {
            let row = &mut values[j * side..(j + 1) * side];
            for (v, br) in row.iter_mut().zip(&bridge) {
                *v += b * br;
            }
        }
    }
    let scale = 1.0 / (inner_n as f64).sqrt();
    values.iter_mut().for_each(|v| *v *= scale);
    PillowcaseDraw { grid, values }
}

/// Same law as [`sample_pillowcase`] for `inner_n >= grid`, at `O(grid³)`
/// cost instead of `O(inner_n · grid²)`.
///
/// With `Z`, `W` the `n × G` matrices of unit Gaussian increments of the
/// motions and bridges, `Σ_i B_i ⊗ B̃_i` is a double prefix sum of `ZᵀW / G`.
/// Given `Z`, the columns of `ZᵀW` are iid `N(0, ZᵀZ)`, and `ZᵀZ` is
/// Wishart(n, I). Writing its Bartlett factor as `A` (lower triangular,
/// `A_ii² ~ χ²_{n-i}`, standard normal below the diagonal), `ZᵀW` has the
/// law of `A V` with `V` a `G × G` standard normal matrix.
pub fn sample_pillowcase_wishart<R: Rng + ?Sized>(grid: usize, inner_n: usize, rng: &mut R) -> PillowcaseDraw {
    assert!(inner_n >= grid, "Wishart route needs inner_n >= grid");
    let g = grid;
    // Bartlett factor, row-major lower triangle.
    let mut a = vec![0.0; g * g];
    for i in 0..g {
        for j in 0..i {
            a[i * g + j] = rng.sample(StandardNormal);
        }
        let chi = ChiSquared::new((inner_n - i) as f64).expect("positive degrees of freedom");
        a[i * g + i] = chi.sample(rng).sqrt();
    }
    let v: Vec<f64> = (0..g * g).map(|_| rng.sample(StandardNormal)).collect();

    // M = A V; row a of M is Σ_{b <= a} A[a][b] V[b][·].
    let mut prod = vec![0.0; g * g];
    for i in 0..g {
        let row = &mut prod[i * g..(i + 1) * g];
        for b in 0..=i {
            let coef = a[i * g + b];
            for (m, vv) in row.iter_mut().zip(&v[b * g..(b + 1) * g]) {
                *m += coef * vv;
            }
        }
    }

    // P(j, k) = Σ_{a<j, c<k} M[a][c]; W(r_j, s_k) = (P(j,k) - s_k P(j,G)) / (G sqrt(n)).
    let side = g + 1;
    let mut values = vec![0.0; side * side];
    let mut col_acc = vec![0.0; g];
    let scale = 1.0 / (g as f64 * (inner_n as f64).sqrt());
    for j in 1..side {
        for (c, m) in col_acc.iter_mut().zip(&prod[(j - 1) * g..j * g]) {
            *c += m;
        }
        let total: f64 = col_acc.iter().sum();
        let row = &mut values[j * side..(j + 1) * side];
        let mut run = 0.0;
        for k in 1..side {
            run += col_acc[k - 1];
            let s = k as f64 / g as f64;
            row[k] = (run - s * total) * scale;
        }
        row[g] = 0.0;
    }
    PillowcaseDraw { grid, values }
}

/// Covariance of the Brownian pillowcase, `(r ∧ r2) ((s ∧ s2) - s s2)`.
pub fn pillowcase_covariance(r: f64, s: f64, r2: f64, s2: f64) -> f64 {
    r.min(r2) * (s.min(s2) - s * s2)
}
