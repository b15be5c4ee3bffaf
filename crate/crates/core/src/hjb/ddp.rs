//! Fully discretised dynamic programming over integer jumps.

use super::forcing::Forcing;

/// Jumps `(k, l) ∈ ℕ₀² \ {0}` with `k² + l² ≤ radius²`, in lexicographic order.
pub fn admissible_jumps(radius: f64) -> Vec<(usize, usize)> {
    let r = radius.max(0.0);
    let kmax = r.floor() as usize;
    let r2 = r * r;
    let mut jumps = Vec::new();
    for k in 0..=kmax {
        for l in 0..=kmax {
            if (k, l) != (0, 0) && ((k * k + l * l) as f64) <= r2 * (1.0 + 1e-12) {
                jumps.push((k, l));
            }
        }
    }
    jumps
}

/// Default radius `k·N^r` of the jump set.
pub fn default_radius(n: usize, k: f64, r: f64) -> f64 {
    k * (n as f64).powf(r)
}

/// One DDP node update: `max_{(k,l)} u[i−k][j−l] + hf·√(kl)`.
///
/// `u` is the row-major `(N+1)²` value array; only jumps that stay inside the grid are
/// considered. Axis-parallel jumps add nothing. Ties keep the first jump in `jumps`.
pub fn update_ddp(
    u: &[f64],
    n: usize,
    i: usize,
    j: usize,
    jumps: &[(usize, usize)],
    forcing: &dyn Forcing,
) -> (f64, (usize, usize)) {
    if i == 0 || j == 0 {
        return (0.0, (0, 0));
    }
    let stride = n + 1;
    let mut best = f64::NEG_INFINITY;
    let mut arg = (0, 0);
    for &(k, l) in jumps {
        if k > i || l > j {
            continue;
        }
        let gain = if k == 0 || l == 0 {
            0.0
        } else {
            forcing.hf_span(i, j, k, l)
        };
        let v = u[(i - k) * stride + (j - l)] + gain;
        if v > best {
            best = v;
            arg = (k, l);
        }
    }
    if best == f64::NEG_INFINITY {
        (0.0, (0, 0))
    } else {
        (best, arg)
    }
}

/// Exact maximum of `Σ hf_span` over all monotone lattice chains from `𝟘` to `𝟙` whose
/// jumps lie in `jumps`, by depth-first search with a Cauchy–Schwarz bound.
///
/// This enumerates paths instead of tabulating node values, so it is independent of
/// [`update_ddp`]. The bound is only valid for forcings of the form `hf·√(kl)`, where
/// `Σ √(kl) ≤ √((N−a)(N−b))` along any chain from `(a, b)`.
pub fn exhaustive_lattice_max(n: usize, jumps: &[(usize, usize)], forcing: &dyn Forcing, max_f: f64) -> f64 {
    let h = 1.0 / n as f64;
    let mut order: Vec<(usize, usize)> = jumps.to_vec();
    // large jumps first finds good incumbents early
    order.sort_by(|a, b| (b.0 * b.1).cmp(&(a.0 * a.1)).then(a.cmp(b)));
    let mut best = 0.0;
    let mut search = Search {
        n,
        h,
        max_f,
        jumps: &order,
        forcing,
        best: &mut best,
        pruning: true,
    };
    search.dfs(0, 0, 0.0);
    best
}

/// Plain enumeration of every chain; only usable for very small grids.
pub fn enumerate_lattice_max(n: usize, jumps: &[(usize, usize)], forcing: &dyn Forcing) -> f64 {
    let mut best = 0.0;
    let mut search = Search {
        n,
        h: 1.0 / n as f64,
        max_f: 0.0,
        jumps,
        forcing,
        best: &mut best,
        pruning: false,
    };
    search.dfs(0, 0, 0.0);
    best
}

struct Search<'a> {
    n: usize,
    h: f64,
    max_f: f64,
    jumps: &'a [(usize, usize)],
    forcing: &'a dyn Forcing,
    best: &'a mut f64,
    pruning: bool,
}

impl Search<'_> {
    fn dfs(&mut self, a: usize, b: usize, acc: f64) {
        if a == self.n && b == self.n {
            if acc > *self.best {
                *self.best = acc;
            }
            return;
        }
        if self.pruning {
            let bound = self.h * self.max_f * (((self.n - a) * (self.n - b)) as f64).sqrt();
            if acc + bound <= *self.best * (1.0 + 1e-14) {
                return;
            }
        }
        for &(k, l) in self.jumps {
            let (i, j) = (a + k, b + l);
            if i > self.n || j > self.n {
                continue;
            }
            let gain = if k == 0 || l == 0 {
                0.0
            } else {
                self.forcing.hf_span(i, j, k, l)
            };
            self.dfs(i, j, acc + gain);
        }
    }
}
