//! Derivative-free minimization: adaptive Nelder-Mead with restarts, and a
//! seeded multi-start driver whose result does not depend on thread scheduling.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NelderMeadOptions {
    /// Stop when the spread of objective values across the simplex is below this.
    pub ftol: f64,
    /// Budget of objective evaluations for one local search, restarts included.
    pub max_evals: usize,
    /// Fresh simplices built around the incumbent after the first convergence.
    pub max_restarts: usize,
}

impl Default for NelderMeadOptions {
    fn default() -> Self {
        Self {
            ftol: 1e-8,
            max_evals: 40_000,
            max_restarts: 4,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Minimum {
    pub x: Vec<f64>,
    pub value: f64,
    pub evals: usize,
}

/// Minimizes `f` from `x0` with an axis-aligned initial simplex of edge `steps`.
///
/// Uses dimension-adaptive coefficients (reflection 1, expansion 1 + 2/n,
/// contraction 0.75 − 1/(2n), shrink 1 − 1/n), which behave far better than
/// the classic ones beyond a handful of dimensions. After convergence the
/// search restarts from the best vertex until a restart no longer improves
/// the value by more than `ftol`.
pub fn nelder_mead<F>(f: F, x0: &[f64], steps: &[f64], opts: &NelderMeadOptions) -> Minimum
where
    F: Fn(&[f64]) -> f64,
{
    assert_eq!(x0.len(), steps.len(), "one step per coordinate");
    let mut best = Minimum {
        x: x0.to_vec(),
        value: f(x0),
        evals: 1,
    };
    for round in 0..=opts.max_restarts {
        let budget = opts.max_evals.saturating_sub(best.evals);
        if budget == 0 {
            break;
        }
        let local = simplex_descent(&f, &best.x, steps, opts.ftol, budget);
        let improvement = best.value - local.value;
        let evals = best.evals + local.evals;
        if local.value < best.value {
            best = Minimum { evals, ..local };
        } else {
            best.evals = evals;
        }
        if round > 0 && improvement <= opts.ftol {
            break;
        }
    }
    best
}

fn simplex_descent<F>(f: &F, x0: &[f64], steps: &[f64], ftol: f64, budget: usize) -> Minimum
where
    F: Fn(&[f64]) -> f64,
{
    let n = x0.len();
    let nf = n as f64;
    let (alpha, beta, gamma, sigma) = (1.0, 1.0 + 2.0 / nf, 0.75 - 0.5 / nf, 1.0 - 1.0 / nf);

    let mut simplex: Vec<Vec<f64>> = Vec::with_capacity(n + 1);
    simplex.push(x0.to_vec());
    for (k, &h) in steps.iter().enumerate() {
        let mut v = x0.to_vec();
        v[k] += h;
        simplex.push(v);
    }
    let mut values: Vec<f64> = simplex.iter().map(|v| f(v)).collect();
    let mut evals = n + 1;
    let mut order: Vec<usize> = (0..=n).collect();
    let mut centroid = vec![0.0; n];
    let mut trial = vec![0.0; n];
    let mut trial2 = vec![0.0; n];

    let along = |out: &mut [f64], c: &[f64], w: &[f64], t: f64| {
        for ((o, ci), wi) in out.iter_mut().zip(c).zip(w) {
            *o = ci + t * (ci - wi);
        }
    };

    loop {
        order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
        let (lo, hi, second) = (order[0], order[n], order[n - 1]);
        if values[hi] - values[lo] <= ftol || evals >= budget {
            return Minimum {
                x: simplex[lo].clone(),
                value: values[lo],
                evals,
            };
        }
        centroid.iter_mut().for_each(|c| *c = 0.0);
        for &i in &order[..n] {
            for (c, v) in centroid.iter_mut().zip(&simplex[i]) {
                *c += v / nf;
            }
        }

        along(&mut trial, &centroid, &simplex[hi], alpha);
        let fr = f(&trial);
        evals += 1;
        if fr < values[lo] {
            along(&mut trial2, &centroid, &simplex[hi], alpha * beta);
            let fe = f(&trial2);
            evals += 1;
            if fe < fr {
                simplex[hi].copy_from_slice(&trial2);
                values[hi] = fe;
            } else {
                simplex[hi].copy_from_slice(&trial);
                values[hi] = fr;
            }
            continue;
        }
        if fr < values[second] {
            simplex[hi].copy_from_slice(&trial);
            values[hi] = fr;
            continue;
        }
        // contraction, outside if the reflected point beats the worst vertex
        let (t, reference) = if fr < values[hi] {
            (alpha * gamma, fr)
        } else {
            (-gamma, values[hi])
        };
        along(&mut trial2, &centroid, &simplex[hi], t);
        let fc = f(&trial2);
        evals += 1;
        if fc <= reference {
            simplex[hi].copy_from_slice(&trial2);
            values[hi] = fc;
            continue;
        }
        let anchor = simplex[lo].clone();
        for &i in &order[1..] {
            for (v, a) in simplex[i].iter_mut().zip(&anchor) {
                *v = a + sigma * (*v - a);
            }
            values[i] = f(&simplex[i]);
        }
        evals += n;
    }
}

/// Result of [`multistart`]: the best local minimum and the start it came from.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiStartResult {
    pub best: Minimum,
    pub start_index: usize,
    pub total_evals: usize,
}

/// Runs `local` from `n_starts` random points drawn by `sample`.
///
/// Start `k` draws from its own ChaCha stream (`seed`, stream `k`), so the
/// outcome is identical for any thread count. Ties go to the lowest index.
pub fn multistart<S, L>(n_starts: usize, seed: u64, sample: S, local: L) -> MultiStartResult
where
    S: Fn(&mut ChaCha8Rng) -> Vec<f64> + Sync,
    L: Fn(&[f64]) -> Minimum + Sync,
{
    assert!(n_starts >= 1, "at least one start is required");
    let runs: Vec<Minimum> = (0..n_starts)
        .into_par_iter()
        .map(|k| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(k as u64);
            local(&sample(&mut rng))
        })
        .collect();
    let total_evals = runs.iter().map(|m| m.evals).sum();
    let mut start_index = 0;
    for (k, run) in runs.iter().enumerate() {
        if run.value < runs[start_index].value {
            start_index = k;
        }
    }
    MultiStartResult {
        best: runs[start_index].clone(),
        start_index,
        total_evals,
    }
}
