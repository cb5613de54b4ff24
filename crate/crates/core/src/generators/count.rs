//! Exact counts of labeled DAGs by number of sources.

use std::fs;
use std::io::{self, BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use num_bigint::BigUint;
use num_traits::{One, Zero};
use thiserror::Error;

pub const DEFAULT_CAP: usize = 300;

/// Environment variable naming the directory that holds the count-table cache.
pub const CACHE_DIR_ENV: &str = "DAGFORGE_CACHE_DIR";

const CACHE_HEADER: &str = "dagforge-count-table v1";

#[derive(Debug, Error)]
pub enum CountError {
    #[error("count table requested for n = {n}, above the cap of {cap}")]
    CapExceeded { n: usize, cap: usize },
    #[error("count table needs n >= 1")]
    Empty,
    #[error("count-table cache {path}: {reason}")]
    BadCache { path: PathBuf, reason: String },
    #[error("count-table cache I/O: {0}")]
    Io(#[from] io::Error),
}

/// `a_{i,k}`, the number of labeled DAGs on `i` vertices with exactly `k`
/// sources, for `1 <= k <= i <= n`, together with the row sums `a_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountTable {
    a_nk: Vec<Vec<BigUint>>,
    a: Vec<BigUint>,
}

impl CountTable {
    pub fn compute(n: usize) -> Result<CountTable, CountError> {
        CountTable::compute_with_cap(n, DEFAULT_CAP)
    }

    pub fn compute_with_cap(n: usize, cap: usize) -> Result<CountTable, CountError> {
        if n == 0 {
            return Err(CountError::Empty);
        }
        if n > cap {
            return Err(CountError::CapExceeded { n, cap });
        }
        // a_nk[i][k]; index 0 unused in both dimensions.
        let mut a_nk: Vec<Vec<BigUint>> = vec![Vec::new()];
        let mut binom: Vec<BigUint> = vec![BigUint::one()];
        for i in 1..=n {
            binom = pascal_next(&binom);
            let mut row = vec![BigUint::zero(); i + 1];
            for (k, cell) in row.iter_mut().enumerate().skip(1) {
                *cell = if k == i {
                    BigUint::one()
                } else {
                    &binom[k] * b_sum(&a_nk[i - k], k)
                };
            }
            a_nk.push(row);
        }
        Ok(CountTable::from_rows(a_nk))
    }

    fn from_rows(a_nk: Vec<Vec<BigUint>>) -> CountTable {
        let a = a_nk.iter().map(|row| row.iter().sum()).collect();
        CountTable { a_nk, a }
    }

    /// Largest `n` covered.
    pub fn max_n(&self) -> usize {
        self.a_nk.len() - 1
    }

    /// `a_i`, the number of labeled DAGs on `i` vertices.
    pub fn a(&self, i: usize) -> &BigUint {
        &self.a[i]
    }

    /// `a_{i,k}`.
    pub fn a_nk(&self, i: usize, k: usize) -> &BigUint {
        &self.a_nk[i][k]
    }

    /// `b_{i,k}`, so that `a_{i,k} = C(i,k) b_{i,k}`.
    pub fn b(&self, i: usize, k: usize) -> BigUint {
        if i == k {
            BigUint::one()
        } else {
            b_sum(&self.a_nk[i - k], k)
        }
    }

    /// The table restricted to `n' <= n` vertices.
    pub fn truncated(&self, n: usize) -> CountTable {
        assert!(n >= 1 && n <= self.max_n());
        CountTable::from_rows(self.a_nk[..=n].to_vec())
    }

    pub fn write_to(&self, mut out: impl Write) -> io::Result<()> {
        writeln!(out, "{CACHE_HEADER} n={}", self.max_n())?;
        for (i, row) in self.a_nk.iter().enumerate().skip(1) {
            for (k, value) in row.iter().enumerate().skip(1) {
                writeln!(out, "{i} {k} {value}")?;
            }
        }
        Ok(())
    }

    pub fn read_from(input: impl BufRead, path: &Path) -> Result<CountTable, CountError> {
        let bad = |reason: String| CountError::BadCache {
            path: path.to_path_buf(),
            reason,
        };
        let mut lines = input.lines();
        let header = lines.next().transpose()?.unwrap_or_default();
        let n: usize = header
            .strip_prefix(CACHE_HEADER)
            .and_then(|rest| rest.trim().strip_prefix("n="))
            .and_then(|v| v.parse().ok())
            .ok_or_else(|| bad(format!("unrecognized header `{header}`")))?;
        let mut a_nk: Vec<Vec<BigUint>> = vec![Vec::new()];
        for i in 1..=n {
            let mut row = vec![BigUint::zero(); i + 1];
            for (k, cell) in row.iter_mut().enumerate().skip(1) {
                let line = lines
                    .next()
                    .transpose()?
                    .ok_or_else(|| bad(format!("truncated before entry ({i}, {k})")))?;
                let fields: Vec<&str> = line.split_whitespace().collect();
                let value = match fields.as_slice() {
                    [fi, fk, v] if fi.parse() == Ok(i) && fk.parse() == Ok(k) => {
                        v.parse::<BigUint>().ok()
                    }
                    _ => None,
                };
                *cell = value.ok_or_else(|| bad(format!("malformed entry `{line}`")))?;
            }
            a_nk.push(row);
        }
        Ok(CountTable::from_rows(a_nk))
    }

    /// Reads the cached table from `dir` when it covers `n`, otherwise
    /// computes it and refreshes the cache. Unreadable cache files are
    /// recomputed and overwritten.
    pub fn load_or_compute(n: usize, dir: &Path) -> Result<CountTable, CountError> {
        if n > DEFAULT_CAP {
            return Err(CountError::CapExceeded { n, cap: DEFAULT_CAP });
        }
        let path = dir.join("count_table.txt");
        if let Ok(file) = fs::File::open(&path) {
            if let Ok(table) = CountTable::read_from(BufReader::new(file), &path) {
                if table.max_n() >= n {
                    return Ok(table.truncated(n));
                }
            }
        }
        let table = CountTable::compute(n)?;
        fs::create_dir_all(dir)?;
        let tmp = dir.join(format!("count_table.txt.{}", std::process::id()));
        {
            let mut out = io::BufWriter::new(fs::File::create(&tmp)?);
            table.write_to(&mut out)?;
            out.flush()?;
        }
        fs::rename(&tmp, &path)?;
        Ok(table)
    }

    /// Uses the cache directory from [`CACHE_DIR_ENV`] when set.
    pub fn load_default(n: usize) -> Result<CountTable, CountError> {
        match std::env::var_os(CACHE_DIR_ENV) {
            Some(dir) if !dir.is_empty() => CountTable::load_or_compute(n, Path::new(&dir)),
            _ => CountTable::compute(n),
        }
    }
}

fn pascal_next(prev: &[BigUint]) -> Vec<BigUint> {
    let mut next = Vec::with_capacity(prev.len() + 1);
    next.push(BigUint::one());
    for w in prev.windows(2) {
        next.push(&w[0] + &w[1]);
    }
    next.push(BigUint::one());
    next
}

/// `sum_{s=1}^{m} (2^k - 1)^s 2^{k(m-s)} a_{m,s}` with `row = a_{m,.}`,
/// evaluated by Horner's rule from `s = m` down.
fn b_sum(row: &[BigUint], k: usize) -> BigUint {
    let m = row.len() - 1;
    let mut acc = BigUint::zero();
    for s in (1..=m).rev() {
        acc += &row[s] << (k * (m - s));
        // Multiply by 2^k - 1.
        acc = (&acc << k) - &acc;
    }
    acc
}

/// Term weights `(2^k - 1)^s 2^{k(m-s)} a_{m,s}` for `s = 1..=m`, returned
/// as prefix sums (the last entry is `b_{m+k,k}`).
pub(crate) fn layer_weight_prefix(table: &CountTable, m: usize, k: usize) -> Vec<BigUint> {
    let mut power = BigUint::one();
    let mut terms = Vec::with_capacity(m);
    for s in 1..=m {
        power = (&power << k) - &power;
        terms.push((&power << (k * (m - s))) * table.a_nk(m, s));
    }
    let mut running = BigUint::zero();
    terms
        .into_iter()
        .map(|t| {
            running += t;
            running.clone()
        })
        .collect()
}
