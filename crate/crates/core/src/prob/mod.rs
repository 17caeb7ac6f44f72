//! Finite distributions, channels and joints.
//!
//! Every constructor validates its input: entries must be non-negative and
//! sum to one within [`NORMALIZATION_TOL`]. Nothing is renormalized behind
//! the caller's back. Entries below [`ZERO_CLAMP`] are set to exactly zero so
//! that support sets are exact.

mod alpha;
pub mod io;

use serde::{Deserialize, Serialize};

use crate::error::{LeakageError, Result};

pub use alpha::AlphaOrder;

/// Allowed deviation of a probability vector's sum from one.
pub const NORMALIZATION_TOL: f64 = 1e-9;
/// Magnitudes below this are treated as exact zeros on ingestion.
pub const ZERO_CLAMP: f64 = 1e-15;

/// Probability vector on `{0, .., n-1}` with its support precomputed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct Distribution {
    probs: Vec<f64>,
    support: Vec<usize>,
}

impl Distribution {
    pub fn new(raw: Vec<f64>) -> Result<Self> {
        if raw.is_empty() {
            return Err(LeakageError::Empty);
        }
        let mut probs = raw;
        for (index, p) in probs.iter_mut().enumerate() {
            if !p.is_finite() {
                return Err(LeakageError::NonFinite { row: None, index });
            }
            if p.abs() < ZERO_CLAMP {
                *p = 0.0;
            } else if *p < 0.0 {
                return Err(LeakageError::NegativeEntry {
                    row: None,
                    index,
                    value: *p,
                });
            }
        }
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > NORMALIZATION_TOL {
            return Err(LeakageError::NotNormalized { row: None, sum });
        }
        let support = probs
            .iter()
            .enumerate()
            .filter(|(_, &p)| p > 0.0)
            .map(|(i, _)| i)
            .collect();
        Ok(Distribution { probs, support })
    }

    pub fn uniform(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(LeakageError::Empty);
        }
        Distribution::new(vec![1.0 / n as f64; n])
    }

    pub fn point_mass(n: usize, at: usize) -> Result<Self> {
        if at >= n {
            return Err(LeakageError::SupportOutOfRange { index: at, size: n });
        }
        let mut probs = vec![0.0; n];
        probs[at] = 1.0;
        Distribution::new(probs)
    }

    /// Uniform distribution over `support` inside an alphabet of size `n`.
    pub fn uniform_on(n: usize, support: &[usize]) -> Result<Self> {
        let support = normalize_support(support, n)?;
        let mut probs = vec![0.0; n];
        let w = 1.0 / support.len() as f64;
        for &i in &support {
            probs[i] = w;
        }
        Distribution::new(probs)
    }

    /// Normalizes proportional weights. Used for tilted distributions where
    /// the caller has already produced non-negative masses.
    pub fn from_weights(weights: Vec<f64>) -> Result<Self> {
        let total: f64 = weights.iter().sum();
        if total.is_nan() || total <= 0.0 || !total.is_finite() {
            return Err(LeakageError::InvalidArgument(format!(
                "weights must have a positive finite total, got {total}"
            )));
        }
        Distribution::new(weights.into_iter().map(|w| w / total).collect())
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn get(&self, i: usize) -> f64 {
        self.probs[i]
    }

    /// Indices with strictly positive probability, ascending.
    pub fn support(&self) -> &[usize] {
        &self.support
    }

    pub fn has_full_support(&self) -> bool {
        self.support.len() == self.probs.len()
    }

    pub fn max(&self) -> f64 {
        self.probs.iter().cloned().fold(0.0, f64::max)
    }

    /// Lowest index attaining the maximum.
    pub fn argmax(&self) -> usize {
        let mut best = 0;
        for (i, &p) in self.probs.iter().enumerate() {
            if p > self.probs[best] {
                best = i;
            }
        }
        best
    }

    pub fn total_variation(&self, other: &Distribution) -> f64 {
        0.5 * self
            .probs
            .iter()
            .zip(&other.probs)
            .map(|(a, b)| (a - b).abs())
            .sum::<f64>()
    }
}

impl TryFrom<Vec<f64>> for Distribution {
    type Error = LeakageError;

    fn try_from(raw: Vec<f64>) -> Result<Self> {
        Distribution::new(raw)
    }
}

impl From<Distribution> for Vec<f64> {
    fn from(d: Distribution) -> Self {
        d.probs
    }
}

/// Sorts, deduplicates and range-checks a support set.
pub fn normalize_support(support: &[usize], size: usize) -> Result<Vec<usize>> {
    if support.is_empty() {
        return Err(LeakageError::EmptySupport);
    }
    let mut s = support.to_vec();
    s.sort_unstable();
    s.dedup();
    if let Some(&index) = s.iter().find(|&&i| i >= size) {
        return Err(LeakageError::SupportOutOfRange { index, size });
    }
    Ok(s)
}

/// Row-stochastic matrix `W(y|x)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ChannelRows", into = "ChannelRows")]
pub struct Channel {
    rows: Vec<Distribution>,
    out_size: usize,
}

/// Wire form of a channel: `{"rows": [[...], ...]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ChannelRows {
    pub rows: Vec<Vec<f64>>,
}

impl TryFrom<ChannelRows> for Channel {
    type Error = LeakageError;

    fn try_from(raw: ChannelRows) -> Result<Self> {
        Channel::from_rows(raw.rows)
    }
}

impl From<Channel> for ChannelRows {
    fn from(c: Channel) -> Self {
        ChannelRows {
            rows: c.rows.into_iter().map(Vec::from).collect(),
        }
    }
}

impl Channel {
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        let Some(first) = rows.first() else {
            return Err(LeakageError::Empty);
        };
        let out_size = first.len();
        let mut validated = Vec::with_capacity(rows.len());
        for (r, row) in rows.into_iter().enumerate() {
            if row.len() != out_size {
                return Err(LeakageError::DimensionMismatch {
                    expected: out_size,
                    found: row.len(),
                });
            }
            validated.push(Distribution::new(row).map_err(|e| e.in_row(r))?);
        }
        Ok(Channel {
            rows: validated,
            out_size,
        })
    }

    pub fn identity(n: usize) -> Result<Self> {
        Channel::from_rows(
            (0..n)
                .map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
                .collect(),
        )
    }

    /// Binary symmetric channel with crossover probability `p`.
    pub fn bsc(p: f64) -> Result<Self> {
        Channel::from_rows(vec![vec![1.0 - p, p], vec![p, 1.0 - p]])
    }

    /// Every row equal to `q`: the output is independent of the input.
    pub fn rank_one(in_size: usize, q: &Distribution) -> Result<Self> {
        if in_size == 0 {
            return Err(LeakageError::Empty);
        }
        Ok(Channel {
            rows: vec![q.clone(); in_size],
            out_size: q.len(),
        })
    }

    pub fn in_size(&self) -> usize {
        self.rows.len()
    }

    pub fn out_size(&self) -> usize {
        self.out_size
    }

    pub fn row(&self, x: usize) -> &Distribution {
        &self.rows[x]
    }

    pub fn rows(&self) -> &[Distribution] {
        &self.rows
    }

    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.rows[x].get(y)
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        self.rows.iter().map(|r| r.probs().to_vec()).collect()
    }

    /// Sub-channel keeping only the listed inputs, in ascending order.
    pub fn restrict_inputs(&self, support: &[usize]) -> Result<Channel> {
        let s = normalize_support(support, self.in_size())?;
        Ok(Channel {
            rows: s.iter().map(|&x| self.rows[x].clone()).collect(),
            out_size: self.out_size,
        })
    }

    /// True when all rows in `support` agree entrywise within `tol`.
    pub fn is_rank_one_on(&self, support: &[usize], tol: f64) -> bool {
        let Some(&first) = support.first() else {
            return true;
        };
        support.iter().all(|&x| {
            self.rows[x]
                .probs()
                .iter()
                .zip(self.rows[first].probs())
                .all(|(a, b)| (a - b).abs() <= tol)
        })
    }

    /// Convex combination `lambda * self + (1 - lambda) * other`.
    pub fn mix(&self, other: &Channel, lambda: f64) -> Result<Channel> {
        check_same_shape(self, other)?;
        if !(0.0..=1.0).contains(&lambda) {
            return Err(LeakageError::InvalidArgument(format!(
                "mixing weight {lambda} not in [0, 1]"
            )));
        }
        Channel::from_rows(
            self.rows
                .iter()
                .zip(&other.rows)
                .map(|(a, b)| {
                    a.probs()
                        .iter()
                        .zip(b.probs())
                        .map(|(p, q)| lambda * p + (1.0 - lambda) * q)
                        .collect()
                })
                .collect(),
        )
    }
}

fn check_same_shape(a: &Channel, b: &Channel) -> Result<()> {
    if a.in_size() != b.in_size() {
        return Err(LeakageError::DimensionMismatch {
            expected: a.in_size(),
            found: b.in_size(),
        });
    }
    if a.out_size() != b.out_size() {
        return Err(LeakageError::DimensionMismatch {
            expected: a.out_size(),
            found: b.out_size(),
        });
    }
    Ok(())
}

/// Joint distribution on `X x Y`, stored row-major by `x`.
#[derive(Debug, Clone, PartialEq)]
pub struct Joint {
    mass: Vec<Vec<f64>>,
    marginal_x: Vec<f64>,
    marginal_y: Vec<f64>,
}

impl Joint {
    pub fn from_mass(mass: Vec<Vec<f64>>) -> Result<Self> {
        let Some(first) = mass.first() else {
            return Err(LeakageError::Empty);
        };
        let cols = first.len();
        if cols == 0 {
            return Err(LeakageError::Empty);
        }
        let mut mass = mass;
        let mut total = 0.0;
        for (r, row) in mass.iter_mut().enumerate() {
            if row.len() != cols {
                return Err(LeakageError::DimensionMismatch {
                    expected: cols,
                    found: row.len(),
                });
            }
            for (index, m) in row.iter_mut().enumerate() {
                if !m.is_finite() {
                    return Err(LeakageError::NonFinite {
                        row: Some(r),
                        index,
                    });
                }
                if m.abs() < ZERO_CLAMP {
                    *m = 0.0;
                } else if *m < 0.0 {
                    return Err(LeakageError::NegativeEntry {
                        row: Some(r),
                        index,
                        value: *m,
                    });
                }
                total += *m;
            }
        }
        if (total - 1.0).abs() > NORMALIZATION_TOL {
            return Err(LeakageError::NotNormalized {
                row: None,
                sum: total,
            });
        }
        let marginal_x = mass.iter().map(|row| row.iter().sum()).collect();
        let marginal_y = (0..cols)
            .map(|y| mass.iter().map(|row| row[y]).sum())
            .collect();
        Ok(Joint {
            mass,
            marginal_x,
            marginal_y,
        })
    }

    pub fn x_size(&self) -> usize {
        self.mass.len()
    }

    pub fn y_size(&self) -> usize {
        self.marginal_y.len()
    }

    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.mass[x][y]
    }

    pub fn mass(&self) -> &[Vec<f64>] {
        &self.mass
    }

    pub fn marginal_x(&self) -> &[f64] {
        &self.marginal_x
    }

    pub fn marginal_y(&self) -> &[f64] {
        &self.marginal_y
    }

    pub fn prior(&self) -> Result<Distribution> {
        Distribution::new(self.marginal_x.clone())
    }

    pub fn output(&self) -> Result<Distribution> {
        Distribution::new(self.marginal_y.clone())
    }

    /// `P(.|y)`; `None` for zero-probability columns.
    pub fn posterior(&self, y: usize) -> Option<Vec<f64>> {
        let py = self.marginal_y[y];
        if py <= 0.0 {
            return None;
        }
        Some(self.mass.iter().map(|row| row[y] / py).collect())
    }

    /// `W(.|x)` for `x` with positive marginal.
    pub fn conditional(&self, x: usize) -> Option<Vec<f64>> {
        let px = self.marginal_x[x];
        if px <= 0.0 {
            return None;
        }
        Some(self.mass[x].iter().map(|m| m / px).collect())
    }

    /// Columns with positive marginal.
    pub fn live_columns(&self) -> impl Iterator<Item = usize> + '_ {
        self.marginal_y
            .iter()
            .enumerate()
            .filter(|(_, &p)| p > 0.0)
            .map(|(y, _)| y)
    }
}

/// `P(x, y) = prior(x) * W(y|x)`.
pub fn joint_from(prior: &Distribution, channel: &Channel) -> Result<Joint> {
    if prior.len() != channel.in_size() {
        return Err(LeakageError::DimensionMismatch {
            expected: channel.in_size(),
            found: prior.len(),
        });
    }
    Joint::from_mass(
        channel
            .rows()
            .iter()
            .zip(prior.probs())
            .map(|(row, &px)| row.probs().iter().map(|w| px * w).collect())
            .collect(),
    )
}

/// Channel to `(Y1, Y2)` from two channels with conditionally independent
/// outputs. Output index is `y1 * |Y2| + y2`.
pub fn product_channel(w1: &Channel, w2: &Channel) -> Result<Channel> {
    if w1.in_size() != w2.in_size() {
        return Err(LeakageError::DimensionMismatch {
            expected: w1.in_size(),
            found: w2.in_size(),
        });
    }
    Channel::from_rows(
        w1.rows()
            .iter()
            .zip(w2.rows())
            .map(|(a, b)| {
                a.probs()
                    .iter()
                    .flat_map(|p| b.probs().iter().map(move |q| p * q))
                    .collect()
            })
            .collect(),
    )
}

/// Cascade `X -> Y -> Z`: the matrix product `w1 * w2`.
pub fn cascade_channel(w1: &Channel, w2: &Channel) -> Result<Channel> {
    if w1.out_size() != w2.in_size() {
        return Err(LeakageError::DimensionMismatch {
            expected: w1.out_size(),
            found: w2.in_size(),
        });
    }
    Channel::from_rows(
        w1.rows()
            .iter()
            .map(|row| {
                (0..w2.out_size())
                    .map(|z| {
                        row.probs()
                            .iter()
                            .enumerate()
                            .map(|(y, p)| p * w2.get(y, z))
                            .sum()
                    })
                    .collect()
            })
            .collect(),
    )
}

/// Builds the channel `P(y|x)` for which `X = assignment[Y]` is a
/// deterministic function of `Y ~ out_dist`, together with the induced `P_X`.
///
/// `|X|` is `max(assignment) + 1`. Every `x` must receive positive mass.
pub fn reverse_deterministic_channel(
    assignment: &[usize],
    out_dist: &Distribution,
) -> Result<(Channel, Distribution)> {
    if assignment.len() != out_dist.len() {
        return Err(LeakageError::DimensionMismatch {
            expected: out_dist.len(),
            found: assignment.len(),
        });
    }
    let x_size = assignment.iter().max().map(|m| m + 1).unwrap_or(0);
    let mut px = vec![0.0; x_size];
    for (y, &x) in assignment.iter().enumerate() {
        px[x] += out_dist.get(y);
    }
    if let Some(x) = px.iter().position(|&m| m <= 0.0) {
        return Err(LeakageError::UncoveredX(x));
    }
    let rows = (0..x_size)
        .map(|x| {
            assignment
                .iter()
                .enumerate()
                .map(|(y, &ax)| if ax == x { out_dist.get(y) / px[x] } else { 0.0 })
                .collect()
        })
        .collect();
    Ok((Channel::from_rows(rows)?, Distribution::new(px)?))
}
