//! Brute-force reference oracles, deliberately implemented with different
//! algorithms than the library: derivative-free scalar minimization for
//! proximal maps, exhaustive permutation / pair enumeration for metrics,
//! and restricted-growth-string enumeration of all partitions.

use std::collections::BTreeSet;

#[derive(Debug, PartialEq, Eq)]
pub enum OracleError {
    /// Exhaustive enumeration is only feasible for n ≤ 8.
    TooLarge { n: usize, limit: usize },
}

impl std::fmt::Display for OracleError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            OracleError::TooLarge { n, limit } => {
                write!(f, "exhaustive oracle limited to n ≤ {limit}, got {n}")
            }
        }
    }
}

impl std::error::Error for OracleError {}

/// The scalar function pieces whose proximal maps the library implements.
/// Loss pieces carry their data value; penalty pieces are data-free.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ScalarPiece {
    GaussianLoss { x: f64 },
    ManhattanLoss { x: f64 },
    BernoulliLoss { x: f64 },
    L0,
    L1,
}

impl ScalarPiece {
    fn value(&self, b: f64) -> f64 {
        match *self {
            ScalarPiece::GaussianLoss { x } => 0.5 * (x - b) * (x - b),
            ScalarPiece::ManhattanLoss { x } => (x - b).abs(),
            ScalarPiece::BernoulliLoss { x } => softplus(b) - x * b,
            ScalarPiece::L0 => {
                if b != 0.0 {
                    1.0
                } else {
                    0.0
                }
            }
            ScalarPiece::L1 => b.abs(),
        }
    }

    fn data_value(&self) -> Option<f64> {
        match *self {
            ScalarPiece::GaussianLoss { x }
            | ScalarPiece::ManhattanLoss { x }
            | ScalarPiece::BernoulliLoss { x } => Some(x),
            ScalarPiece::L0 | ScalarPiece::L1 => None,
        }
    }
}

fn softplus(v: f64) -> f64 {
    // Overflow-safe log(1 + e^v).
    if v > 0.0 {
        v + (-v).exp().ln_1p()
    } else {
        v.exp().ln_1p()
    }
}

/// Reference scalar proximal map: minimizes τ·f(b) + ½(b−a)² by
/// golden-section search on [a−10(1+τ), a+10(1+τ)] refined to 1e−9, then
/// takes the best among the search result and the closed-form candidates
/// {a, 0, data value}.
pub fn prox_oracle_scalar(piece: ScalarPiece, a: f64, tau: f64) -> f64 {
    let objective = |b: f64| tau * piece.value(b) + 0.5 * (b - a) * (b - a);
    let half_width = 10.0 * (1.0 + tau);
    let mut lo = a - half_width;
    let mut hi = a + half_width;
    let inv_phi = 0.618_033_988_749_894_9_f64;
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let mut f1 = objective(x1);
    let mut f2 = objective(x2);
    while hi - lo > 1e-9 {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = objective(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = objective(x2);
        }
    }
    // Exact candidates come first so they win ties against the inexact
    // golden-section midpoint; 0 precedes a to match the group-oracle
    // tie convention.
    let mut candidates = vec![0.0, a];
    if let Some(x) = piece.data_value() {
        candidates.push(x);
    }
    candidates.push(0.5 * (lo + hi));
    let mut best = candidates[0];
    let mut best_value = objective(best);
    for &c in &candidates[1..] {
        let v = objective(c);
        if v < best_value {
            best = c;
            best_value = v;
        }
    }
    best
}

/// Reference proximal map of the column-count penalty τ·β̄_j·1{‖b‖ ≠ 0} at a
/// column `a`: evaluates exactly the two candidates (keep `a`, or zero) and
/// prefers zero on ties.
pub fn prox_oracle_group(a: &[f64], weight: f64, tau: f64) -> Vec<f64> {
    let sq_norm: f64 = a.iter().map(|&v| v * v).sum();
    let keep_cost = tau * weight;
    let zero_cost = 0.5 * sq_norm;
    if keep_cost < zero_cost {
        a.to_vec()
    } else {
        vec![0.0; a.len()]
    }
}

fn dense_remap(labels: &[usize]) -> (Vec<usize>, usize) {
    let mut values: Vec<usize> = labels.to_vec();
    values.sort_unstable();
    values.dedup();
    let dense = labels
        .iter()
        .map(|l| values.binary_search(l).expect("value present"))
        .collect();
    (dense, values.len())
}

fn permutations_visit<F: FnMut(&[usize])>(k: usize, visit: &mut F) {
    // Heap's algorithm, iterative.
    let mut perm: Vec<usize> = (0..k).collect();
    let mut counters = vec![0usize; k];
    visit(&perm);
    let mut i = 0;
    while i < k {
        if counters[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(counters[i], i);
            }
            visit(&perm);
            counters[i] += 1;
            i = 0;
        } else {
            counters[i] = 0;
            i += 1;
        }
    }
}

const EXHAUSTIVE_LIMIT: usize = 8;

/// Exhaustive reference metrics: ACC by trying every relabeling permutation,
/// ARI and FMI by enumerating all sample pairs. Limited to n ≤ 8.
pub fn metric_oracles(r: &[usize], c: &[usize]) -> Result<(f64, f64, f64), OracleError> {
    assert_eq!(r.len(), c.len(), "oracle inputs must have equal lengths");
    let n = r.len();
    if n > EXHAUSTIVE_LIMIT {
        return Err(OracleError::TooLarge {
            n,
            limit: EXHAUSTIVE_LIMIT,
        });
    }
    let (r_dense, r_k) = dense_remap(r);
    let (c_dense, c_k) = dense_remap(c);
    let k = r_k.max(c_k);

    // ACC: best over all one-to-one relabelings of the prediction.
    let mut best_matches = 0usize;
    permutations_visit(k, &mut |perm| {
        let matches = r_dense
            .iter()
            .zip(c_dense.iter())
            .filter(|&(&ri, &ci)| ri == perm[ci])
            .count();
        best_matches = best_matches.max(matches);
    });
    let acc = best_matches as f64 / n as f64;

    // Pair enumeration for ARI and FMI.
    let mut together_both = 0u64;
    let mut together_r = 0u64;
    let mut together_c = 0u64;
    let mut total_pairs = 0u64;
    for i in 0..n {
        for j in (i + 1)..n {
            total_pairs += 1;
            let same_r = r_dense[i] == r_dense[j];
            let same_c = c_dense[i] == c_dense[j];
            together_r += u64::from(same_r);
            together_c += u64::from(same_c);
            together_both += u64::from(same_r && same_c);
        }
    }
    // Mirror the production expression structure exactly so agreement on
    // these integer counts implies bit-identical float results.
    let (index, a, b, pairs) = (
        together_both as f64,
        together_r as f64,
        together_c as f64,
        total_pairs as f64,
    );
    let expected = a * b / pairs;
    let denom = 0.5 * (a + b) - expected;
    let ari = if denom == 0.0 {
        1.0
    } else {
        (index - expected) / denom
    };
    let fmi = if together_both == 0 {
        0.0
    } else {
        ((index / b) * (index / a)).sqrt()
    };
    Ok((acc, ari, fmi))
}

/// Direct contingency-formula NMI, written with joint/marginal probabilities
/// (the library computes it from integer counts instead).
pub fn nmi_oracle(r: &[usize], c: &[usize]) -> f64 {
    assert_eq!(r.len(), c.len(), "oracle inputs must have equal lengths");
    let n = r.len() as f64;
    let (r_dense, r_k) = dense_remap(r);
    let (c_dense, c_k) = dense_remap(c);
    let mut joint = vec![vec![0.0f64; c_k]; r_k];
    for (&ri, &ci) in r_dense.iter().zip(c_dense.iter()) {
        joint[ri][ci] += 1.0 / n;
    }
    let p_r: Vec<f64> = joint.iter().map(|row| row.iter().sum()).collect();
    let p_c: Vec<f64> = (0..c_k).map(|j| joint.iter().map(|row| row[j]).sum()).collect();
    let entropy = |p: &[f64]| -> f64 { -p.iter().filter(|&&v| v > 0.0).map(|&v| v * v.ln()).sum::<f64>() };
    let h_r = entropy(&p_r);
    let h_c = entropy(&p_c);
    if h_r.max(h_c) == 0.0 {
        return 1.0;
    }
    let mut mi = 0.0;
    for (i, row) in joint.iter().enumerate() {
        for (j, &p) in row.iter().enumerate() {
            if p > 0.0 {
                mi += p * (p / (p_r[i] * p_c[j])).ln();
            }
        }
    }
    mi / h_r.max(h_c)
}

/// All partitions of {0, …, n−1} as 1-based label vectors, enumerated via
/// restricted growth strings (Bell(n) many; Bell(6) = 203).
pub fn all_partitions(n: usize) -> Vec<Vec<usize>> {
    assert!(
        (1..=EXHAUSTIVE_LIMIT).contains(&n),
        "partition enumeration limited to 1..=8"
    );
    let mut out = Vec::new();
    // rgs[i] in 0..=max(rgs[..i])+1, rgs[0] = 0.
    let mut rgs = vec![0usize; n];
    loop {
        out.push(rgs.iter().map(|&v| v + 1).collect());
        // Advance to the next restricted growth string.
        let mut i = n;
        loop {
            if i == 1 {
                return out;
            }
            i -= 1;
            let prefix_max = rgs[..i].iter().copied().max().expect("i >= 1");
            if rgs[i] <= prefix_max {
                rgs[i] += 1;
                for v in rgs[i + 1..].iter_mut() {
                    *v = 0;
                }
                break;
            }
        }
    }
}

/// Jaccard similarity of two index sets; 1 when both are empty.
pub fn jaccard(a: &[usize], b: &[usize]) -> f64 {
    let sa: BTreeSet<usize> = a.iter().copied().collect();
    let sb: BTreeSet<usize> = b.iter().copied().collect();
    let union = sa.union(&sb).count();
    if union == 0 {
        return 1.0;
    }
    let inter = sa.intersection(&sb).count();
    inter as f64 / union as f64
}
