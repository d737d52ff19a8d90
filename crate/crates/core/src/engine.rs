use std::path::PathBuf;
use std::sync::{Arc, RwLock};

use crate::error::{Error, Result};
use crate::quadrature::table::Z2Table;
use crate::quadrature::{CheckpointStore, MuParams};
use crate::zeta::{self, PrimeTable, ZSample, Zero};

/// Run-wide settings.
#[derive(Debug, Clone, PartialEq)]
pub struct Config {
    /// `ε` in `U₀ = T^{1/3 + 2ε}`
    pub epsilon: f64,
    pub mu: MuParams,
    /// Riemann–Siegel correction coefficients, `0..=5`
    pub rs_terms: usize,
    pub tol: f64,
    /// Largest height integrated directly.
    pub height_budget: f64,
    /// Largest argument of the prime sieve.
    pub sieve_budget: f64,
    pub checkpoint_path: Option<PathBuf>,
    pub threads: usize,
    /// Replace `∫ Z²` beyond the height budget by its mean value when
    /// evaluating `Φ`.
    pub asymptotic_tail: bool,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            epsilon: 0.01,
            mu: MuParams::default(),
            rs_terms: zeta::DEFAULT_RS_TERMS,
            tol: 1e-8,
            height_budget: 2e6,
            sieve_budget: zeta::primes::DEFAULT_SIEVE_BUDGET,
            checkpoint_path: None,
            threads: std::thread::available_parallelism().map_or(1, |n| n.get()),
            asymptotic_tail: false,
        }
    }
}

impl Config {
    pub fn validate(&self) -> Result<()> {
        let bad = |what: &str, v: f64| Err(Error::Config(format!("{what} = {v} out of range")));
        if !(self.epsilon > 0.0 && self.epsilon < 1.0 / 24.0) {
            return bad("epsilon (0 < epsilon < 1/24)", self.epsilon);
        }
        self.mu
            .validate()
            .map_err(|e| Error::Config(format!("mu: {e}")))?;
        if self.rs_terms > zeta::MAX_RS_TERMS {
            return bad("rs_terms (<= 5)", self.rs_terms as f64);
        }
        if !(self.tol > 0.0 && self.tol < 1.0) {
            return bad("tol", self.tol);
        }
        if !(self.height_budget > 0.0 && self.height_budget.is_finite()) {
            return bad("height_budget", self.height_budget);
        }
        if !(self.sieve_budget >= 2.0 && self.sieve_budget <= 4e9) {
            return bad("sieve_budget", self.sieve_budget);
        }
        if self.threads == 0 {
            return bad("threads", 0.0);
        }
        Ok(())
    }
}

/// Owns the configuration, the worker pool and the shared caches.
///
/// All methods take `&self`; the caches are behind locks and grow on
/// demand, so one engine can serve concurrent callers.
pub struct Engine {
    config: Config,
    pool: rayon::ThreadPool,
    table: RwLock<Z2Table>,
    checkpoints: RwLock<CheckpointStore>,
    primes: RwLock<Option<Arc<PrimeTable>>>,
}

impl std::fmt::Debug for Engine {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Engine")
            .field("config", &self.config)
            .finish_non_exhaustive()
    }
}

impl Engine {
    pub fn new(config: Config) -> Result<Self> {
        config.validate()?;
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(config.threads)
            .build()
            .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
        let checkpoints = match &config.checkpoint_path {
            Some(p) => CheckpointStore::open(p, &config.mu, config.rs_terms)?,
            None => CheckpointStore::in_memory(),
        };
        Ok(Engine {
            table: RwLock::new(Z2Table::new(config.rs_terms)),
            checkpoints: RwLock::new(checkpoints),
            primes: RwLock::new(None),
            pool,
            config,
        })
    }

    pub fn config(&self) -> &Config {
        &self.config
    }

    pub(crate) fn pool(&self) -> &rayon::ThreadPool {
        &self.pool
    }

    pub(crate) fn checkpoints(&self) -> &RwLock<CheckpointStore> {
        &self.checkpoints
    }

    pub(crate) fn check_height(&self, t: f64) -> Result<()> {
        if t > self.config.height_budget {
            return Err(Error::Budget {
                what: "height",
                requested: t,
                budget: self.config.height_budget,
            });
        }
        Ok(())
    }

    /// Runs `f` on the `Z²` table once it covers `height`.
    pub(crate) fn with_table<R>(&self, height: f64, f: impl FnOnce(&Z2Table) -> R) -> Result<R> {
        self.check_height(height)?;
        {
            let table = self.table.read().expect("table lock");
            if table.covered() >= height {
                return Ok(f(&table));
            }
        }
        let mut table = self.table.write().expect("table lock");
        table.extend_to(height, &self.pool);
        Ok(f(&table))
    }

    /// `Z(t)` with the configured number of correction terms.
    pub fn z(&self, t: f64) -> Result<ZSample> {
        zeta::z_eval(t, self.config.rs_terms)
    }

    pub fn zeros_in(&self, a: f64, b: f64) -> Result<Vec<Zero>> {
        self.check_height(b)?;
        zeta::zeros_in_with(a, b, self.config.rs_terms)
    }

    /// `π(x)` from a sieve shared across calls, grown up to the budget.
    pub fn prime_pi(&self, x: f64) -> Result<u64> {
        if !(x >= 0.0) {
            return Err(Error::domain("prime_pi", x, "x >= 0"));
        }
        if x > self.config.sieve_budget {
            return Err(Error::Budget {
                what: "prime_pi argument",
                requested: x,
                budget: self.config.sieve_budget,
            });
        }
        if let Some(t) = self.primes.read().expect("sieve lock").as_ref() {
            if (t.limit() as f64) >= x {
                return t.pi(x);
            }
        }
        let mut guard = self.primes.write().expect("sieve lock");
        let current = guard.as_ref().map_or(0, |t| t.limit());
        if (current as f64) < x {
            let limit = (x.floor() as u64)
                .max(2 * current)
                .max(1 << 16)
                .min(self.config.sieve_budget as u64);
            *guard = Some(Arc::new(PrimeTable::new(limit)));
        }
        guard.as_ref().expect("sieve built").pi(x)
    }
}
