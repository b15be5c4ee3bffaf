use crate::error::{Error, Result};
use crate::hjb::{solve, GridSpec, Policy, Problem, Repr, SchemeConfig, Solution, ValueField};
use crate::registration::{backtrack_from, ReparamPath};

/// `u_tot = u_fwd + u_rev` together with the two solves that produced it.
#[derive(Debug, Clone)]
pub struct TotalValueField {
    pub u_tot: ValueField,
    pub forward: Solution,
    /// Solution of the reversed problem, in its own (reflected) coordinates.
    pub reverse: Solution,
}

impl TotalValueField {
    pub fn n(&self) -> usize {
        self.u_tot.n()
    }

    pub fn max(&self) -> f64 {
        self.u_tot.max_u()
    }

    /// Local maxima with the default threshold `10⁻³ · max u_tot`.
    pub fn maxima(&self) -> Vec<LocalMax> {
        find_local_maxima(&self.u_tot, 1e-3 * self.max())
    }

    /// Path through grid node `(i, j)` built from both solves.
    pub fn path_through(&self, i: usize, j: usize) -> Result<ReparamPath> {
        backtrack_through((i, j), &self.forward.policy, &self.reverse.policy)
    }
}

/// Solves the forward problem and the reversed problem `f(1 − x₁, 1 − x₂)` and adds
/// the reflected reverse value to the forward one.
pub fn total_value(problem: &Problem, grid: GridSpec, cfg: &SchemeConfig) -> Result<TotalValueField> {
    let forward = solve(problem, grid, cfg)?;
    let reverse = solve(&problem.reversed(), grid, cfg)?;
    let n = grid.n();
    let fwd = forward.value.to_u();
    let rev = reverse.value.to_u().reflected();
    let data = fwd
        .raw_data()
        .iter()
        .zip(rev.raw_data())
        .map(|(a, b)| a + b)
        .collect();
    Ok(TotalValueField {
        u_tot: ValueField::new(n, Repr::U, data)?,
        forward,
        reverse,
    })
}

/// A local maximum of `u_tot`, reported by the best node of its plateau.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalMax {
    pub i: usize,
    pub j: usize,
    pub value: f64,
    /// Number of nodes in the merged plateau.
    pub plateau: usize,
}

/// Interior local maxima of `field`.
///
/// A node is a local maximum when none of its 8 neighbours exceeds it by more than
/// `plateau_tol`. Connected maxima are merged into one plateau and reported by its
/// highest node.
pub fn find_local_maxima(field: &ValueField, plateau_tol: f64) -> Vec<LocalMax> {
    let n = field.n();
    let stride = n + 1;
    let u = |i: usize, j: usize| field.u(i, j);
    let neighbours = |i: usize, j: usize| {
        let mut out = Vec::with_capacity(8);
        for di in -1i64..=1 {
            for dj in -1i64..=1 {
                if di == 0 && dj == 0 {
                    continue;
                }
                let (a, b) = (i as i64 + di, j as i64 + dj);
                if a >= 0 && b >= 0 && a <= n as i64 && b <= n as i64 {
                    out.push((a as usize, b as usize));
                }
            }
        }
        out
    };

    let mut candidate = vec![false; stride * stride];
    for i in 1..n {
        for j in 1..n {
            let v = u(i, j);
            candidate[i * stride + j] = neighbours(i, j).iter().all(|&(a, b)| u(a, b) <= v + plateau_tol);
        }
    }

    let mut seen = vec![false; stride * stride];
    let mut maxima = Vec::new();
    for start in 0..stride * stride {
        if !candidate[start] || seen[start] {
            continue;
        }
        let mut stack = vec![start];
        seen[start] = true;
        let mut members = Vec::new();
        while let Some(k) = stack.pop() {
            members.push(k);
            for (a, b) in neighbours(k / stride, k % stride) {
                let m = a * stride + b;
                if candidate[m] && !seen[m] {
                    seen[m] = true;
                    stack.push(m);
                }
            }
        }
        let &best = members
            .iter()
            .max_by(|&&a, &&b| {
                u(a / stride, a % stride)
                    .partial_cmp(&u(b / stride, b % stride))
                    .unwrap()
                    .then(b.cmp(&a))
            })
            .unwrap();
        maxima.push(LocalMax {
            i: best / stride,
            j: best % stride,
            value: u(best / stride, best % stride),
            plateau: members.len(),
        });
    }
    maxima
}

/// Concatenates the forward path `𝟘 → x` with the reflected reverse path `x → 𝟙`.
pub fn backtrack_through(node: (usize, usize), forward: &Policy, reverse: &Policy) -> Result<ReparamPath> {
    let n = forward.n();
    if reverse.n() != n {
        return Err(Error::precondition("forward and reverse policies have different grids"));
    }
    let (i, j) = node;
    if i > n || j > n {
        return Err(Error::OutOfDomain {
            x1: i as f64 / n as f64,
            x2: j as f64 / n as f64,
        });
    }
    let x = [i as f64 / n as f64, j as f64 / n as f64];
    let mut points = backtrack_from(forward, x)?;
    let back = backtrack_from(reverse, [(n - i) as f64 / n as f64, (n - j) as f64 / n as f64])?;
    // back runs 𝟘 → 𝟙 − x in reflected coordinates; reflect and walk it backwards.
    for p in back.iter().rev().skip(1) {
        points.push([reflect(p[0], n), reflect(p[1], n)]);
    }
    ReparamPath::new(points)
}

fn reflect(v: f64, n: usize) -> f64 {
    let s = v * n as f64;
    let r = s.round();
    if (s - r).abs() < 1e-9 {
        (n as f64 - r) / n as f64
    } else {
        1.0 - v
    }
}
