//! External clustering evaluation: accuracy (ACC), normalized mutual
//! information (NMI), adjusted Rand index (ARI), and Fowlkes–Mallows index
//! (FMI), all computed from the truth-vs-prediction contingency table.
//!
//! Degenerate cases follow fixed conventions: NMI of two trivial (single
//! cluster) partitions is 1; ARI is 1 whenever its chance-corrected
//! denominator is exactly zero (identical degenerate partitions); FMI is 0
//! when there are no true-positive pairs.

use std::collections::BTreeMap;

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MetricsError {
    #[error("label vectors have different lengths: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("label vectors are empty")]
    EmptyInput,
    #[error("need at least 2 samples for pair-counting metrics, got {found}")]
    TooFewSamples { found: usize },
}

/// Counts n_ij of samples with truth cluster i and predicted cluster j,
/// with row/column margins. Label values are remapped to dense indices in
/// ascending value order, so the table is independent of label naming.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContingencyTable {
    counts: Vec<Vec<u64>>,
    row_sums: Vec<u64>,
    col_sums: Vec<u64>,
    total: u64,
}

impl ContingencyTable {
    pub fn from_labels(r: &[usize], c: &[usize]) -> Result<Self, MetricsError> {
        if r.len() != c.len() {
            return Err(MetricsError::LengthMismatch {
                left: r.len(),
                right: c.len(),
            });
        }
        if r.is_empty() {
            return Err(MetricsError::EmptyInput);
        }
        let remap = |labels: &[usize]| -> BTreeMap<usize, usize> {
            let mut map = BTreeMap::new();
            for &l in labels {
                let next = map.len();
                map.entry(l).or_insert(next);
            }
            // BTreeMap iteration is value-ordered; rebuild dense ids in that order.
            map.keys()
                .cloned()
                .enumerate()
                .map(|(dense, value)| (value, dense))
                .collect()
        };
        let r_map = remap(r);
        let c_map = remap(c);
        let (nr, nc) = (r_map.len(), c_map.len());
        let mut counts = vec![vec![0u64; nc]; nr];
        for (&ri, &ci) in r.iter().zip(c.iter()) {
            counts[r_map[&ri]][c_map[&ci]] += 1;
        }
        let row_sums: Vec<u64> = counts.iter().map(|row| row.iter().sum()).collect();
        let col_sums: Vec<u64> = (0..nc).map(|j| counts.iter().map(|row| row[j]).sum()).collect();
        let total = row_sums.iter().sum();
        Ok(ContingencyTable {
            counts,
            row_sums,
            col_sums,
            total,
        })
    }

    pub fn counts(&self) -> &[Vec<u64>] {
        &self.counts
    }
    pub fn row_sums(&self) -> &[u64] {
        &self.row_sums
    }
    pub fn col_sums(&self) -> &[u64] {
        &self.col_sums
    }
    pub fn total(&self) -> u64 {
        self.total
    }
}

fn pairs(x: u64) -> u64 {
    x * x.saturating_sub(1) / 2
}

/// Pair counts over the table: (same in both, same in truth, same in
/// prediction, total pairs).
fn pair_counts(table: &ContingencyTable) -> (u64, u64, u64, u64) {
    let index: u64 = table
        .counts
        .iter()
        .flat_map(|row| row.iter())
        .map(|&n| pairs(n))
        .sum();
    let a: u64 = table.row_sums.iter().map(|&n| pairs(n)).sum();
    let b: u64 = table.col_sums.iter().map(|&n| pairs(n)).sum();
    (index, a, b, pairs(table.total))
}

/// Minimum-cost assignment on a square cost matrix (classic potentials /
/// shortest-augmenting-path formulation, O(k³)). Returns the assigned cost
/// summed from the matrix entries.
fn min_cost_assignment(cost: &[Vec<i64>]) -> i64 {
    let n = cost.len();
    if n == 0 {
        return 0;
    }
    let inf = i64::MAX / 4;
    let mut u = vec![0i64; n + 1];
    let mut v = vec![0i64; n + 1];
    let mut assigned_row = vec![0usize; n + 1]; // column j -> row (1-based), 0 = free
    let mut way = vec![0usize; n + 1];
    for i in 1..=n {
        assigned_row[0] = i;
        let mut j0 = 0usize;
        let mut min_slack = vec![inf; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = assigned_row[j0];
            let mut delta = inf;
            let mut j1 = 0usize;
            for j in 1..=n {
                if !used[j] {
                    let reduced = cost[i0 - 1][j - 1] - u[i0] - v[j];
                    if reduced < min_slack[j] {
                        min_slack[j] = reduced;
                        way[j] = j0;
                    }
                    if min_slack[j] < delta {
                        delta = min_slack[j];
                        j1 = j;
                    }
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[assigned_row[j]] += delta;
                    v[j] -= delta;
                } else {
                    min_slack[j] -= delta;
                }
            }
            j0 = j1;
            if assigned_row[j0] == 0 {
                break;
            }
        }
        // Augment along the recorded alternating path.
        loop {
            let j1 = way[j0];
            assigned_row[j0] = assigned_row[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    (1..=n)
        .filter(|&j| assigned_row[j] != 0)
        .map(|j| cost[assigned_row[j] - 1][j - 1])
        .sum()
}

/// Clustering accuracy: the best fraction of agreeing samples over all
/// one-to-one relabelings of the prediction, found by optimal assignment on
/// the contingency table (zero-padded to square when rectangular).
pub fn accuracy(r: &[usize], c: &[usize]) -> Result<f64, MetricsError> {
    let table = ContingencyTable::from_labels(r, c)?;
    let k = table.counts.len().max(table.counts[0].len());
    let mut cost = vec![vec![0i64; k]; k];
    for (i, row) in table.counts.iter().enumerate() {
        for (j, &n) in row.iter().enumerate() {
            cost[i][j] = -(n as i64);
        }
    }
    let matched = -min_cost_assignment(&cost);
    Ok(matched as f64 / table.total as f64)
}

/// Normalized mutual information MI(r,c)/max(H(r), H(c)). Both partitions
/// trivial → 1 by convention; exactly one trivial gives 0 since MI = 0.
pub fn nmi(r: &[usize], c: &[usize]) -> Result<f64, MetricsError> {
    let table = ContingencyTable::from_labels(r, c)?;
    let n = table.total as f64;
    let entropy = |sums: &[u64]| -> f64 {
        sums.iter()
            .filter(|&&s| s > 0)
            .map(|&s| (s as f64 / n) * (n / s as f64).ln())
            .sum()
    };
    let h_r = entropy(&table.row_sums);
    let h_c = entropy(&table.col_sums);
    let h_max = h_r.max(h_c);
    if h_max == 0.0 {
        // Both partitions are a single cluster: identical, so NMI = 1.
        return Ok(1.0);
    }
    let mut mi = 0.0;
    for (i, row) in table.counts.iter().enumerate() {
        for (j, &nij) in row.iter().enumerate() {
            if nij > 0 {
                let joint = nij as f64 / n;
                mi += joint
                    * ((nij as f64 * n) / (table.row_sums[i] as f64 * table.col_sums[j] as f64))
                        .ln();
            }
        }
    }
    Ok((mi / h_max).clamp(0.0, 1.0))
}

/// Adjusted Rand index from pair counts; 1 when the chance-corrected
/// denominator is exactly zero (identical degenerate partitions).
pub fn ari(r: &[usize], c: &[usize]) -> Result<f64, MetricsError> {
    if r.len() == 1 && c.len() == 1 {
        return Err(MetricsError::TooFewSamples { found: 1 });
    }
    let table = ContingencyTable::from_labels(r, c)?;
    if table.total < 2 {
        return Err(MetricsError::TooFewSamples {
            found: table.total as usize,
        });
    }
    let (index, a, b, total_pairs) = pair_counts(&table);
    let (index, a, b, total_pairs) = (index as f64, a as f64, b as f64, total_pairs as f64);
    let expected = a * b / total_pairs;
    let denom = 0.5 * (a + b) - expected;
    if denom == 0.0 {
        Ok(1.0)
    } else {
        Ok((index - expected) / denom)
    }
}

/// Fowlkes–Mallows index: the geometric mean of pairwise precision and
/// recall; 0 when there are no true-positive pairs.
pub fn fmi(r: &[usize], c: &[usize]) -> Result<f64, MetricsError> {
    if r.len() == 1 && c.len() == 1 {
        return Err(MetricsError::TooFewSamples { found: 1 });
    }
    let table = ContingencyTable::from_labels(r, c)?;
    if table.total < 2 {
        return Err(MetricsError::TooFewSamples {
            found: table.total as usize,
        });
    }
    let (tp, a, b, _) = pair_counts(&table);
    if tp == 0 {
        return Ok(0.0);
    }
    let (tp, a, b) = (tp as f64, a as f64, b as f64);
    Ok(((tp / b) * (tp / a)).sqrt())
}
