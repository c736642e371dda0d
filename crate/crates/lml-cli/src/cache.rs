//! Append-only JSON-lines result cache with trust-but-verify reads.
//!
//! Every record is re-checked against the oracle before a lookup trusts it:
//! the witness graph's total must equal the recorded value and the weighing
//! must actually be k-local positive (vacuously, for vacuous records).
//! Records that fail re-verification or fail to parse are warned about and
//! treated as misses.

use std::fs::OpenOptions;
use std::io::Write;
use std::path::PathBuf;

use anyhow::Context;
use serde::{Deserialize, Serialize};

use lml_core::graph::parse_graph_json;
use lml_core::oracle::k_local_positivity;

pub const SCHEMA_VERSION: u32 = 1;

/// Cache key and CLI parameters for one extremal run.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct ExtremalParams {
    pub n: usize,
    pub k: usize,
    pub max_degree: Option<usize>,
}

/// The deterministic outputs of one extremal run; identical bytes whether
/// produced fresh or replayed from the cache.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExtremalOutputs {
    pub value: i64,
    pub vacuous: bool,
    pub witness_graph: serde_json::Value,
    pub witness_weighing: Vec<i8>,
    pub trees_searched: u64,
    pub nodes: u64,
    pub prunes: u64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Timestamps {
    pub run_at_epoch_s: u64,
    pub elapsed_ms: u64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ResultRecord {
    pub schema_version: u32,
    pub command: String,
    pub parameters: ExtremalParams,
    pub outputs: ExtremalOutputs,
    pub timestamps: Timestamps,
    pub revision: String,
}

pub struct ResultCache {
    path: PathBuf,
}

impl ResultCache {
    /// Cache file under `LML_CACHE_DIR` (or the working directory).
    pub fn from_env() -> Self {
        let dir = std::env::var_os("LML_CACHE_DIR")
            .map(PathBuf::from)
            .unwrap_or_else(|| PathBuf::from("."));
        Self {
            path: dir.join("results.jsonl"),
        }
    }

    #[cfg(test)]
    pub fn at(path: impl AsRef<std::path::Path>) -> Self {
        Self {
            path: path.as_ref().to_path_buf(),
        }
    }

    /// Newest record matching the key that survives integrity re-checking.
    pub fn lookup(&self, params: &ExtremalParams) -> Option<ResultRecord> {
        let text = std::fs::read_to_string(&self.path).ok()?;
        let lines: Vec<&str> = text.lines().collect();
        for (lineno, line) in lines.into_iter().enumerate().rev() {
            if line.trim().is_empty() {
                continue;
            }
            let record: ResultRecord = match serde_json::from_str(line) {
                Ok(r) => r,
                Err(e) => {
                    eprintln!(
                        "warning: skipping corrupt cache line {} in {}: {e}",
                        lineno + 1,
                        self.path.display()
                    );
                    continue;
                }
            };
            if record.parameters != *params || record.schema_version != SCHEMA_VERSION {
                continue;
            }
            match verify_record(&record) {
                Ok(()) => return Some(record),
                Err(e) => {
                    eprintln!(
                        "warning: cache line {} in {} failed verification ({e}); ignoring it",
                        lineno + 1,
                        self.path.display()
                    );
                }
            }
        }
        None
    }

    pub fn append(&self, record: &ResultRecord) -> anyhow::Result<()> {
        if let Some(parent) = self.path.parent() {
            if !parent.as_os_str().is_empty() {
                std::fs::create_dir_all(parent)
                    .with_context(|| format!("creating cache directory {}", parent.display()))?;
            }
        }
        let mut f = OpenOptions::new()
            .create(true)
            .append(true)
            .open(&self.path)
            .with_context(|| format!("opening cache file {}", self.path.display()))?;
        let line = serde_json::to_string(record)?;
        writeln!(f, "{line}").context("appending cache record")?;
        Ok(())
    }
}

/// Recomputes what the record claims: witness weight, weighing alignment,
/// and k-local positivity (vacuous records must be all-minus and genuinely
/// vacuous).
fn verify_record(record: &ResultRecord) -> anyhow::Result<()> {
    let graph_text = serde_json::to_string(&record.outputs.witness_graph)?;
    let graph = parse_graph_json(&graph_text).map_err(|e| anyhow::anyhow!("{e}"))?;
    if graph.weights() != record.outputs.witness_weighing {
        anyhow::bail!("witness weighing is not aligned with the witness graph");
    }
    if graph.total_weight() != record.outputs.value {
        anyhow::bail!(
            "recorded value {} but witness weighs {}",
            record.outputs.value,
            graph.total_weight()
        );
    }
    let status = k_local_positivity(&graph, record.parameters.k)
        .map_err(|e| anyhow::anyhow!("{e}"))?;
    if record.outputs.vacuous {
        if !status.is_vacuous() {
            anyhow::bail!("record is flagged vacuous but a connected k-subgraph exists");
        }
        if record.outputs.witness_weighing.iter().any(|&w| w != -1) {
            anyhow::bail!("vacuous witness must be the all-minus weighing");
        }
    } else if !status.holds() {
        anyhow::bail!("witness weighing is not k-local positive");
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample_record() -> ResultRecord {
        // path of 3 edges, k = 2: any -1 makes some adjacent pair weigh 0,
        // so the all-plus weighing with value 3 is the true optimum
        let graph: serde_json::Value =
            serde_json::from_str("{\"vertices\":4,\"edges\":[[0,1,1],[1,2,1],[2,3,1]]}")
                .unwrap();
        ResultRecord {
            schema_version: SCHEMA_VERSION,
            command: "extremal".into(),
            parameters: ExtremalParams {
                n: 3,
                k: 2,
                max_degree: None,
            },
            outputs: ExtremalOutputs {
                value: 3,
                vacuous: false,
                witness_graph: graph,
                witness_weighing: vec![1, 1, 1],
                trees_searched: 2,
                nodes: 0,
                prunes: 0,
            },
            timestamps: Timestamps {
                run_at_epoch_s: 0,
                elapsed_ms: 0,
            },
            revision: "test".into(),
        }
    }

    #[test]
    fn round_trip_hit() {
        let dir = tempfile::tempdir().unwrap();
        let cache = ResultCache::at(dir.path().join("results.jsonl"));
        let record = sample_record();
        assert!(cache.lookup(&record.parameters).is_none());
        cache.append(&record).unwrap();
        let hit = cache.lookup(&record.parameters).unwrap();
        assert_eq!(hit.outputs.value, 3);
    }

    #[test]
    fn tampered_record_is_a_miss() {
        let dir = tempfile::tempdir().unwrap();
        let cache = ResultCache::at(dir.path().join("results.jsonl"));
        let mut record = sample_record();
        record.outputs.value = -3; // lies about the witness weight
        cache.append(&record).unwrap();
        assert!(cache.lookup(&record.parameters).is_none());
    }

    #[test]
    fn corrupt_line_is_skipped() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("results.jsonl");
        let cache = ResultCache::at(&path);
        cache.append(&sample_record()).unwrap();
        std::fs::write(
            &path,
            format!(
                "{}\nnot json at all\n",
                std::fs::read_to_string(&path).unwrap().trim_end()
            ),
        )
        .unwrap();
        // newest line is corrupt; the older valid record still hits
        let hit = cache.lookup(&sample_record().parameters).unwrap();
        assert_eq!(hit.outputs.value, 3);
    }
}
