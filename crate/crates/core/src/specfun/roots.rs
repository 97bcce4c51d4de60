use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, Mutex, OnceLock};

use rayon::prelude::*;

use super::bessel::{jn, jn_pair, mcmahon, MAX_ORDER};
use super::{Result, SpecFunError};

const MAX_ITERATIONS: usize = 100;

/// Positive zeros `w[j,k]` of `J_k`, `1 <= j <= roots_per_order`,
/// `0 <= k <= max_order`.
///
/// Tables are immutable once built and can be shared between threads.
#[derive(Debug, Clone, PartialEq)]
pub struct BesselRootTable {
    max_order: usize,
    roots_per_order: usize,
    // order-major: roots[k * roots_per_order + (j - 1)]
    roots: Vec<f64>,
}

type TableCache = HashMap<(usize, usize), Arc<BesselRootTable>>;

/// Shorthand for [`BesselRootTable::compute`].
pub fn bessel_roots(max_order: usize, roots_per_order: usize) -> Result<BesselRootTable> {
    BesselRootTable::compute(max_order, roots_per_order)
}

impl BesselRootTable {
    /// Computes the table from scratch.
    ///
    /// Zeros of `J_0` are bracketed in `((j - 1/2) pi, j pi)`. Zeros of `J_k`
    /// for `k >= 1` are bracketed by consecutive zeros of `J_{k-1}`
    /// (interlacing), so order `k - 1` is computed one zero deeper than
    /// order `k`. Each zero starts from McMahon's expansion when that lies in
    /// the bracket (the midpoint otherwise) and is refined by Newton steps
    /// with bisection fallback.
    pub fn compute(max_order: usize, roots_per_order: usize) -> Result<Self> {
        if roots_per_order == 0 {
            return Err(SpecFunError::InvalidTable(
                "roots_per_order must be at least 1".into(),
            ));
        }
        if max_order > MAX_ORDER {
            return Err(SpecFunError::UnsupportedOrder {
                order: max_order,
                max: MAX_ORDER,
            });
        }
        let mut roots = Vec::with_capacity((max_order + 1) * roots_per_order);

        let depth0 = roots_per_order + max_order;
        let mut prev: Vec<f64> = (1..=depth0)
            .into_par_iter()
            .map(|j| refine(0, j, (j as f64 - 0.5) * PI, j as f64 * PI))
            .collect::<Result<_>>()?;
        roots.extend_from_slice(&prev[..roots_per_order]);

        for k in 1..=max_order {
            let depth = roots_per_order + max_order - k;
            let below = &prev;
            let cur: Vec<f64> = (1..=depth)
                .into_par_iter()
                .map(|j| refine(k, j, below[j - 1], below[j]))
                .collect::<Result<_>>()?;
            roots.extend_from_slice(&cur[..roots_per_order]);
            prev = cur;
        }

        Ok(Self {
            max_order,
            roots_per_order,
            roots,
        })
    }

    /// Returns a shared table for `(max_order, roots_per_order)`, computing
    /// it on first request.
    pub fn cached(max_order: usize, roots_per_order: usize) -> Result<Arc<Self>> {
        static CACHE: OnceLock<Mutex<TableCache>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        let mut guard = cache.lock().unwrap_or_else(|e| e.into_inner());
        if let Some(table) = guard.get(&(max_order, roots_per_order)) {
            return Ok(Arc::clone(table));
        }
        let table = Arc::new(Self::compute(max_order, roots_per_order)?);
        guard.insert((max_order, roots_per_order), Arc::clone(&table));
        Ok(table)
    }

    /// Rebuilds a table from stored values (order-major layout).
    pub fn from_raw(max_order: usize, roots_per_order: usize, roots: Vec<f64>) -> Result<Self> {
        if roots_per_order == 0 {
            return Err(SpecFunError::InvalidTable(
                "roots_per_order must be at least 1".into(),
            ));
        }
        if roots.len() != (max_order + 1) * roots_per_order {
            return Err(SpecFunError::InvalidTable(format!(
                "expected {} roots, got {}",
                (max_order + 1) * roots_per_order,
                roots.len()
            )));
        }
        if roots.iter().any(|w| !w.is_finite() || *w <= 0.0) {
            return Err(SpecFunError::InvalidTable(
                "roots must be finite and positive".into(),
            ));
        }
        Ok(Self {
            max_order,
            roots_per_order,
            roots,
        })
    }

    pub fn max_order(&self) -> usize {
        self.max_order
    }

    pub fn roots_per_order(&self) -> usize {
        self.roots_per_order
    }

    /// `w[j,k]` with 1-based `j`.
    ///
    /// # Panics
    /// If `j` or `k` is outside the table.
    pub fn root(&self, j: usize, k: usize) -> f64 {
        assert!(j >= 1 && j <= self.roots_per_order && k <= self.max_order);
        self.roots[k * self.roots_per_order + j - 1]
    }

    /// All zeros of `J_k` in the table, increasing.
    pub fn order(&self, k: usize) -> &[f64] {
        let n = self.roots_per_order;
        &self.roots[k * n..(k + 1) * n]
    }

    /// Raw order-major storage.
    pub fn as_slice(&self) -> &[f64] {
        &self.roots
    }

    /// Whether the table provides orders `0..=max_order` with at least
    /// `roots_per_order` zeros each.
    pub fn covers(&self, max_order: usize, roots_per_order: usize) -> bool {
        self.max_order >= max_order && self.roots_per_order >= roots_per_order
    }
}

/// Locates the zero of `J_k` inside `(lo, hi)`.
fn refine(k: usize, index: usize, lo: f64, hi: f64) -> Result<f64> {
    let f_lo = jn(k, lo);
    let f_hi = jn(k, hi);
    if f_lo == 0.0 {
        return Ok(lo);
    }
    if f_hi == 0.0 {
        return Ok(hi);
    }
    if f_lo.signum() == f_hi.signum() {
        return Err(SpecFunError::Bracket {
            order: k,
            index,
            lo,
            hi,
        });
    }

    let (mut a, mut b) = (lo, hi);
    let guess = mcmahon(k, index);
    let mut x = if guess > a && guess < b {
        guess
    } else {
        0.5 * (a + b)
    };
    let mut last_step = b - a;

    for _ in 0..MAX_ITERATIONS {
        let (f, f_next) = jn_pair(k, x);
        if f == 0.0 {
            return Ok(x);
        }
        if f.signum() == f_lo.signum() {
            a = x;
        } else {
            b = x;
        }
        // J_k'(x) = (k / x) J_k(x) - J_{k+1}(x)
        let slope = k as f64 / x * f - f_next;
        let newton = x - f / slope;
        let next =
            if slope != 0.0 && newton > a && newton < b && (newton - x).abs() <= 0.5 * last_step {
                newton
            } else {
                0.5 * (a + b)
            };
        last_step = (next - x).abs();
        if last_step <= 2.0 * f64::EPSILON * next || b - a <= 4.0 * f64::EPSILON * next {
            return Ok(next);
        }
        x = next;
    }
    Err(SpecFunError::RootNotConverged {
        order: k,
        index,
        iterations: MAX_ITERATIONS,
    })
}
