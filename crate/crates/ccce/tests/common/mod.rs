//! Shared helpers for the integration suites: a seeded generator of
//! feasible bounded linear programs, a dense linear solve, a brute-force
//! vertex-enumeration oracle for tiny coordination problems, and rank
//! statistics. The oracle deliberately re-derives the incentive rows from
//! the game definition instead of calling the production builder, so the
//! two paths can disagree.

use ccce::game::{Game, SystemWeights};
use ccce::gaussian::std_normal_quantile;
use ccce::lp::LinearProgram;
use ccce::solver::ConstraintForm;
use rand::Rng;

/// Draw a feasible, bounded LP with at most `max_rows` inequality rows
/// (one of which is a simplex bound that keeps the optimum finite) and at
/// most `max_cols` variables. A random nonnegative point is generated
/// first and every constraint is built to hold there.
pub fn random_feasible_lp<R: Rng + ?Sized>(
    rng: &mut R,
    max_rows: usize,
    max_cols: usize,
) -> LinearProgram {
    let cols = rng.gen_range(1..=max_cols);
    let rows = rng.gen_range(1..max_rows); // leave room for the bounding row

    let witness: Vec<f64> = (0..cols)
        .map(|_| {
            if rng.gen_bool(0.5) {
                0.0
            } else {
                rng.gen_range(0.0..2.0)
            }
        })
        .collect();

    let mut ineq_matrix = Vec::with_capacity(rows + 1);
    let mut ineq_rhs = Vec::with_capacity(rows + 1);
    for _ in 0..rows {
        let row: Vec<f64> = (0..cols)
            .map(|_| {
                if rng.gen_bool(0.4) {
                    rng.gen_range(-1.0..1.0)
                } else {
                    0.0
                }
            })
            .collect();
        let at_witness: f64 = row.iter().zip(&witness).map(|(a, x)| a * x).sum();
        let slack = if rng.gen_bool(0.3) {
            0.0
        } else {
            rng.gen_range(0.0..1.0)
        };
        ineq_matrix.push(row);
        ineq_rhs.push(at_witness + slack);
    }
    // Bounding row: the sum of all variables stays below a generous cap,
    // which keeps every generated program bounded.
    let cap: f64 = witness.iter().sum::<f64>() + 10.0;
    ineq_matrix.push(vec![1.0; cols]);
    ineq_rhs.push(cap);

    let (eq_matrix, eq_rhs) = if rng.gen_bool(0.4) {
        let row: Vec<f64> = (0..cols).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let at_witness: f64 = row.iter().zip(&witness).map(|(a, x)| a * x).sum();
        (vec![row], vec![at_witness])
    } else {
        (Vec::new(), Vec::new())
    };

    let objective: Vec<f64> = (0..cols).map(|_| rng.gen_range(-1.0..1.0)).collect();

    LinearProgram {
        objective,
        ineq_matrix,
        ineq_rhs,
        eq_matrix,
        eq_rhs,
        nonneg: true,
    }
}

/// Solve `a x = b` for a dense square system by Gaussian elimination with
/// partial pivoting; `None` when the matrix is numerically singular.
pub fn solve_dense(mut a: Vec<f64>, mut b: Vec<f64>, n: usize) -> Option<Vec<f64>> {
    debug_assert_eq!(a.len(), n * n);
    debug_assert_eq!(b.len(), n);
    let scale = a.iter().fold(1.0f64, |acc, &v| acc.max(v.abs()));
    for c in 0..n {
        let mut piv = c;
        for r in (c + 1)..n {
            if a[r * n + c].abs() > a[piv * n + c].abs() {
                piv = r;
            }
        }
        if a[piv * n + c].abs() < 1e-11 * scale {
            return None;
        }
        if piv != c {
            for k in 0..n {
                a.swap(c * n + k, piv * n + k);
            }
            b.swap(c, piv);
        }
        let d = a[c * n + c];
        for r in 0..n {
            if r == c {
                continue;
            }
            let f = a[r * n + c] / d;
            if f != 0.0 {
                for k in c..n {
                    a[r * n + k] -= f * a[c * n + k];
                }
                b[r] -= f * b[c];
            }
        }
    }
    Some((0..n).map(|r| b[r] / a[r * n + r]).collect())
}

/// Incentive rows for a tiny game, derived directly from the definition:
/// one row per (agent, recommended action, deviation); under the
/// constant-margin form the uncertainty moves the right-hand side, under
/// the conditional-scaled form it joins the coefficients on the
/// recommendation's support.
fn oracle_rows(
    game: &Game,
    sigmas: &[f64],
    alpha: f64,
    form: ConstraintForm,
) -> (Vec<Vec<f64>>, Vec<f64>) {
    let q = std_normal_quantile(alpha).expect("alpha in (0,1)");
    let np = game.num_profiles();
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for agent in 0..game.num_agents() {
        let actions = game.action_counts()[agent];
        for rec in 0..actions {
            for dev in 0..actions {
                if dev == rec {
                    continue;
                }
                let mut row = vec![0.0; np];
                for p in 0..np {
                    let mut acts = game.profile_actions(p);
                    if acts[agent] != rec {
                        continue;
                    }
                    let stay = game.cost(agent, p);
                    acts[agent] = dev;
                    let moved = game.profile_index(&acts).expect("valid profile");
                    let gain = game.cost(agent, moved) - stay;
                    // Deviating must not be profitable: cost(stay) - cost(dev)
                    // enters as the margin, kept nonpositive.
                    row[p] = -gain;
                    if let ConstraintForm::ConditionalScaled = form {
                        row[p] += q * sigmas[agent];
                    }
                }
                let b = match form {
                    ConstraintForm::ConstantMargin => -q * sigmas[agent],
                    ConstraintForm::ConditionalScaled => 0.0,
                };
                rows.push(row);
                rhs.push(b);
            }
        }
    }
    (rows, rhs)
}

/// Exhaustive vertex enumeration for the coordination problem on a tiny
/// game: every basic solution of the polytope `{z >= 0, sum z = 1,
/// incentive rows}` is checked for feasibility and the best objective is
/// returned; `None` means no feasible vertex exists (an infeasible
/// problem, since the polytope is compact).
pub fn oracle_optimum(
    game: &Game,
    weights: &SystemWeights,
    sigmas: &[f64],
    alpha: f64,
    form: ConstraintForm,
) -> Option<f64> {
    let np = game.num_profiles();
    let (rows, rhs) = oracle_rows(game, sigmas, alpha, form);
    let objective: Vec<f64> = (0..np)
        .map(|p| {
            (0..game.num_agents())
                .map(|i| weights.as_slice()[i] * game.cost(i, p))
                .sum()
        })
        .collect();

    // Candidate tight constraints: every incentive row, then every bound
    // z_p = 0. The normalization row is always tight.
    let num_candidates = rows.len() + np;
    let mut best: Option<f64> = None;
    let mut picks = vec![0usize; np - 1];
    enumerate_combinations(num_candidates, np - 1, &mut picks, 0, 0, &mut |chosen| {
        let mut a = Vec::with_capacity(np * np);
        let mut b = Vec::with_capacity(np);
        a.extend(std::iter::repeat(1.0).take(np));
        b.push(1.0);
        for &c in chosen {
            if c < rows.len() {
                a.extend_from_slice(&rows[c]);
                b.push(rhs[c]);
            } else {
                let p = c - rows.len();
                let mut unit = vec![0.0; np];
                unit[p] = 1.0;
                a.extend_from_slice(&unit);
                b.push(0.0);
            }
        }
        let Some(z) = solve_dense(a, b, np) else {
            return;
        };
        if z.iter().any(|&v| v < -1e-9) {
            return;
        }
        for (row, &limit) in rows.iter().zip(&rhs) {
            let lhs: f64 = row.iter().zip(&z).map(|(a, x)| a * x).sum();
            if lhs > limit + 1e-9 {
                return;
            }
        }
        let value: f64 = objective.iter().zip(&z).map(|(c, x)| c * x).sum();
        best = Some(match best {
            Some(cur) => cur.min(value),
            None => value,
        });
    });
    best
}

/// Visit every `k`-combination of `0..n` (lexicographic).
fn enumerate_combinations(
    n: usize,
    k: usize,
    picks: &mut Vec<usize>,
    depth: usize,
    start: usize,
    visit: &mut impl FnMut(&[usize]),
) {
    if depth == k {
        visit(picks);
        return;
    }
    for c in start..n {
        picks[depth] = c;
        enumerate_combinations(n, k, picks, depth + 1, c + 1, visit);
    }
}

/// Median of a sample (sorts in place).
pub fn median(values: &mut [f64]) -> f64 {
    assert!(!values.is_empty(), "median of an empty sample");
    values.sort_by(|a, b| a.partial_cmp(b).expect("finite samples"));
    let n = values.len();
    if n % 2 == 1 {
        values[n / 2]
    } else {
        0.5 * (values[n / 2 - 1] + values[n / 2])
    }
}

/// Spearman rank correlation with average ranks for ties.
pub fn spearman_rho(x: &[f64], y: &[f64]) -> f64 {
    assert_eq!(x.len(), y.len());
    let rx = average_ranks(x);
    let ry = average_ranks(y);
    pearson(&rx, &ry)
}

fn average_ranks(values: &[f64]) -> Vec<f64> {
    let n = values.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| values[a].partial_cmp(&values[b]).expect("finite samples"));
    let mut ranks = vec![0.0; n];
    let mut i = 0;
    while i < n {
        let mut j = i;
        while j + 1 < n && values[order[j + 1]] == values[order[i]] {
            j += 1;
        }
        let avg = (i + j) as f64 / 2.0 + 1.0;
        for &idx in &order[i..=j] {
            ranks[idx] = avg;
        }
        i = j + 1;
    }
    ranks
}

fn pearson(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let mut cov = 0.0;
    let mut vx = 0.0;
    let mut vy = 0.0;
    for (a, b) in x.iter().zip(y) {
        cov += (a - mx) * (b - my);
        vx += (a - mx).powi(2);
        vy += (b - my).powi(2);
    }
    if vx == 0.0 || vy == 0.0 {
        return 0.0;
    }
    cov / (vx * vy).sqrt()
}
