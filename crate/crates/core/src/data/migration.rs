//! Association matrices from bilateral migration counts.
//!
//! With `M = max_{i != j} |M_ij - M_ji|`, the matrix is `1` on the diagonal
//! and `(M_ji - M_ij) / M` below it, mirrored with opposite sign above. The
//! same expression holds for every ordered pair, so the result is
//! antisymmetric off the diagonal and equivariant under relabeling.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{BanzhafError, Result};
use crate::game::AssociationMatrix;

/// `flows[i][j]` people moving from country `i` to country `j`.
#[derive(Clone, Debug, PartialEq)]
pub struct MigrationTable {
    pub labels: Vec<String>,
    pub flows: Vec<Vec<f64>>,
}

impl MigrationTable {
    pub fn new(labels: Vec<String>, flows: Vec<Vec<f64>>) -> Result<Self> {
        let m = labels.len();
        if m == 0 {
            return Err(BanzhafError::InvalidParameter(
                "migration table is empty".into(),
            ));
        }
        if flows.len() != m {
            return Err(BanzhafError::DimensionMismatch {
                what: "migration rows",
                expected: m,
                found: flows.len(),
            });
        }
        for (i, row) in flows.iter().enumerate() {
            if row.len() != m {
                return Err(BanzhafError::DimensionMismatch {
                    what: "migration row length",
                    expected: m,
                    found: row.len(),
                });
            }
            if let Some((j, v)) = row
                .iter()
                .enumerate()
                .find(|&(j, v)| i != j && !(*v >= 0.0 && v.is_finite()))
            {
                return Err(BanzhafError::InvalidParameter(format!(
                    "flow {} -> {} is {v}; flows must be finite and non-negative",
                    labels[i], labels[j]
                )));
            }
        }
        Ok(MigrationTable { labels, flows })
    }

    /// Header row of country ids, then one row of counts per country.
    pub fn from_csv(text: &str) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(true)
            .trim(csv::Trim::All)
            .from_reader(text.as_bytes());
        let labels: Vec<String> = rdr
            .headers()
            .map_err(|e| BanzhafError::Parse(e.to_string()))?
            .iter()
            .map(str::to_string)
            .collect();
        let mut flows = Vec::new();
        for (r, rec) in rdr.records().enumerate() {
            let rec = rec.map_err(|e| BanzhafError::Parse(e.to_string()))?;
            let row = rec
                .iter()
                .enumerate()
                .map(|(c, cell)| {
                    cell.parse::<f64>().map_err(|e| {
                        BanzhafError::Parse(format!(
                            "row {}, column {}: `{cell}`: {e}",
                            r + 1,
                            c + 1
                        ))
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            flows.push(row);
        }
        Self::new(labels, flows)
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }
}

pub fn build_migration_association(table: &MigrationTable) -> Result<AssociationMatrix> {
    let m = table.len();
    let f = &table.flows;
    let mut norm = 0.0f64;
    for (i, row) in f.iter().enumerate() {
        for (j, &v) in row.iter().enumerate() {
            if i != j {
                norm = norm.max((v - f[j][i]).abs());
            }
        }
    }
    if norm == 0.0 {
        return Err(BanzhafError::SymmetricFlows);
    }
    let mut entries = vec![0.0; m * m];
    for i in 0..m {
        entries[i * m + i] = 1.0;
        for j in 0..i {
            let v = (f[j][i] - f[i][j]) / norm;
            entries[i * m + j] = v;
            entries[j * m + i] = -v;
        }
    }
    AssociationMatrix::from_flat(m, entries)
}

/// Off-diagonal entries uniform on `[-1, 1]`, unit diagonal.
pub fn random_association(m: usize, seed: u64) -> Result<AssociationMatrix> {
    if m == 0 {
        return Err(BanzhafError::InvalidParameter(
            "matrix size must be at least 1".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut entries = Vec::with_capacity(m * m);
    for i in 0..m {
        for j in 0..m {
            entries.push(if i == j {
                1.0
            } else {
                rng.random_range(-1.0..=1.0)
            });
        }
    }
    AssociationMatrix::from_flat(m, entries)
}
