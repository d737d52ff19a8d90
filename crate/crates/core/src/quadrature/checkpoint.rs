//! Persistent values of `I(t) = ∫₀ᵗ Z²` at `t = 0, 100, 200, …`.
//!
//! The file is an append-only CSV:
//!
//! ```text
//! # hlz-checkpoint v1, mu=7,1,1, terms=5
//! t,I,err_accum
//! 0.0000000000000000e0,0.0000000000000000e0,0.0000000000000000e0
//! 1.0000000000000000e2,…
//! ```
//!
//! Numbers carry 17 significant digits, so a reload is bit-exact.

use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use super::MuParams;
use crate::error::{Error, Result};

/// Spacing of stored checkpoints.
pub const SPACING: f64 = 100.0;

const MAGIC: &str = "# hlz-checkpoint v1";
const COLUMNS: &str = "t,I,err_accum";

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Checkpoint {
    pub t: f64,
    pub i: f64,
    pub err_accum: f64,
}

impl Checkpoint {
    pub const ORIGIN: Checkpoint = Checkpoint {
        t: 0.0,
        i: 0.0,
        err_accum: 0.0,
    };
}

/// In-memory checkpoint table, optionally mirrored to a file.
#[derive(Debug)]
pub struct CheckpointStore {
    points: Vec<Checkpoint>,
    path: Option<PathBuf>,
}

fn header(mu: &MuParams, terms: usize) -> String {
    format!(
        "{MAGIC}, mu={},{},{}, terms={terms}",
        mu.coeff, mu.omega1, mu.omega2
    )
}

fn record(c: &Checkpoint) -> String {
    format!("{:.16e},{:.16e},{:.16e}", c.t, c.i, c.err_accum)
}

impl CheckpointStore {
    pub fn in_memory() -> Self {
        CheckpointStore {
            points: vec![Checkpoint::ORIGIN],
            path: None,
        }
    }

    /// Opens `path`, creating it if missing.
    ///
    /// A file written with a different number of Riemann–Siegel terms is
    /// rejected. The `mu` field of the header is informational: `I(t)`
    /// does not depend on it.
    pub fn open(path: &Path, mu: &MuParams, terms: usize) -> Result<Self> {
        let fail = |msg: String| Error::Checkpoint {
            path: path.to_path_buf(),
            msg,
        };
        if !path.exists() {
            let mut f = File::create(path)?;
            writeln!(f, "{}", header(mu, terms))?;
            writeln!(f, "{COLUMNS}")?;
            writeln!(f, "{}", record(&Checkpoint::ORIGIN))?;
            f.sync_data()?;
            return Ok(CheckpointStore {
                points: vec![Checkpoint::ORIGIN],
                path: Some(path.to_path_buf()),
            });
        }

        let reader = BufReader::new(File::open(path)?);
        let mut lines = reader.lines();
        let head = lines.next().transpose()?.unwrap_or_default();
        if !head.starts_with(MAGIC) {
            return Err(fail(format!("missing header line, found {head:?}")));
        }
        let file_terms = head
            .rsplit_once("terms=")
            .and_then(|(_, v)| v.trim().parse::<usize>().ok())
            .ok_or_else(|| fail("header lacks terms=<k>".into()))?;
        if file_terms != terms {
            return Err(fail(format!(
                "written with {file_terms} Riemann-Siegel terms, configured {terms}"
            )));
        }
        match lines.next().transpose()? {
            Some(l) if l.trim() == COLUMNS => {}
            other => return Err(fail(format!("expected column line, found {other:?}"))),
        }

        let mut points: Vec<Checkpoint> = Vec::new();
        for (n, line) in lines.enumerate() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let fields: Vec<f64> = line
                .split(',')
                .map(|f| f.trim().parse::<f64>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|e| fail(format!("record {}: {e}", n + 1)))?;
            let [t, i, err_accum] = fields[..] else {
                return Err(fail(format!("record {}: expected 3 fields", n + 1)));
            };
            let expect_t = points.len() as f64 * SPACING;
            if t != expect_t {
                return Err(fail(format!(
                    "record {}: t = {t}, expected {expect_t}",
                    n + 1
                )));
            }
            if let Some(prev) = points.last() {
                if !(i > prev.i) {
                    return Err(fail(format!("record {}: I not increasing", n + 1)));
                }
            }
            points.push(Checkpoint { t, i, err_accum });
        }
        if points.first() != Some(&Checkpoint::ORIGIN) {
            return Err(fail("first record must be t = 0, I = 0".into()));
        }
        Ok(CheckpointStore {
            points,
            path: Some(path.to_path_buf()),
        })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn get(&self, k: usize) -> Option<Checkpoint> {
        self.points.get(k).copied()
    }

    pub fn last(&self) -> Checkpoint {
        *self.points.last().expect("store always holds the origin")
    }

    pub fn points(&self) -> &[Checkpoint] {
        &self.points
    }

    pub fn path(&self) -> Option<&Path> {
        self.path.as_deref()
    }

    /// Appends the next checkpoints, writing them through to the file.
    pub fn extend(&mut self, new: &[Checkpoint]) -> Result<()> {
        if new.is_empty() {
            return Ok(());
        }
        if let Some(path) = &self.path {
            let mut f = OpenOptions::new().append(true).open(path)?;
            let mut buf = String::new();
            for c in new {
                buf.push_str(&record(c));
                buf.push('\n');
            }
            f.write_all(buf.as_bytes())?;
            f.sync_data()?;
        }
        self.points.extend_from_slice(new);
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrip_is_bit_exact() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("cp.csv");
        let mu = MuParams::default();
        let mut store = CheckpointStore::open(&path, &mu, 5).unwrap();
        let pts = [
            Checkpoint {
                t: 100.0,
                i: 1.0 / 3.0 * 500.0,
                err_accum: 1.234e-13,
            },
            Checkpoint {
                t: 200.0,
                i: std::f64::consts::PI * 150.0,
                err_accum: 2.5e-13,
            },
        ];
        store.extend(&pts).unwrap();
        let again = CheckpointStore::open(&path, &mu, 5).unwrap();
        assert_eq!(again.points(), store.points());
        assert!(CheckpointStore::open(&path, &mu, 2).is_err());
    }

    #[test]
    fn rejects_gaps() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("cp.csv");
        std::fs::write(
            &path,
            "# hlz-checkpoint v1, mu=7,1,1, terms=5\nt,I,err_accum\n0e0,0e0,0e0\n2e2,1e3,0e0\n",
        )
        .unwrap();
        assert!(CheckpointStore::open(&path, &MuParams::default(), 5).is_err());
    }
}
