//! Explicit constants `K^m_k` of the recursive construction.
//!
//! Base entries are `K^m_N = 2^{2m−1}·√N`. Walls of an `(m, ·, N)` node are
//! `(m−1, 0, N−1)` problems, so the recurrence for `K^m_{k−1}` uses
//! `K' = K^{m−1}_0` at `N−1`, seeded by the convention `K^1_0` (default 1):
//!
//! ```text
//! c = 1 + 2·(2K')^{1/(m−1)}
//! K^m_{k−1} = max(K^m_k·c·2·(1 + 2K'), K^m_k·c + K')
//! 𝓛_m = c·L
//! ```

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default value of the free convention `K^1_0`.
pub const DEFAULT_K1_0: f64 = 1.0;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Constants {
    pub k1_0: f64,
}

impl Default for Constants {
    fn default() -> Self {
        Constants { k1_0: DEFAULT_K1_0 }
    }
}

fn check_mn(m: usize, big_n: usize) -> Result<()> {
    if m < 2 {
        return Err(Error::OutOfRange {
            what: "m",
            value: m as i64,
            min: 2,
            max: big_n as i64,
        });
    }
    if m > big_n {
        return Err(Error::OutOfRange {
            what: "m",
            value: m as i64,
            min: 2,
            max: big_n as i64,
        });
    }
    Ok(())
}

/// `K^m_N = 2^{2m−1}·√N`.
pub fn base_constant(m: usize, big_n: usize) -> Result<f64> {
    check_mn(m, big_n)?;
    Ok(2f64.powi(2 * m as i32 - 1) * (big_n as f64).sqrt())
}

impl Constants {
    pub fn new(k1_0: f64) -> Result<Self> {
        if !(k1_0 > 0.0 && k1_0.is_finite()) {
            return Err(Error::Precondition(format!("K^1_0 must be positive, got {k1_0}")));
        }
        Ok(Constants { k1_0 })
    }

    /// `K^{m−1}_0` at `N−1`: the constant of the wall subproblems.
    pub fn wall_constant(&self, m: usize, big_n: usize) -> Result<f64> {
        if m < 2 {
            return Err(Error::OutOfRange {
                what: "m",
                value: m as i64,
                min: 2,
                max: big_n as i64,
            });
        }
        if m == 2 {
            Ok(self.k1_0)
        } else {
            self.constant(m - 1, 0, big_n - 1)
        }
    }

    /// `1 + 2·(2K')^{1/(m−1)}`, the factor relating `𝓛_m` to `L`.
    pub fn script_l_multiplier(&self, m: usize, big_n: usize) -> Result<f64> {
        let kp = self.wall_constant(m, big_n)?;
        Ok(1.0 + 2.0 * (2.0 * kp).powf(1.0 / (m as f64 - 1.0)))
    }

    /// `𝓛_m` for a node with slab bound `L`.
    pub fn script_l(&self, m: usize, big_n: usize, l: f64) -> Result<f64> {
        if !(l > 0.0) {
            return Err(Error::Precondition(format!("L must be positive, got {l}")));
        }
        Ok(self.script_l_multiplier(m, big_n)? * l)
    }

    /// `K^m_{k−1}` from `K^m_k`: the larger of the two lower bounds.
    pub fn step_constant(&self, m: usize, big_n: usize, k_mk: f64) -> Result<f64> {
        let kp = self.wall_constant(m, big_n)?;
        let c = self.script_l_multiplier(m, big_n)?;
        Ok((k_mk * c * 2.0 * (1.0 + 2.0 * kp)).max(k_mk * c + kp))
    }

    /// `K^m_k` for the `(m, k, N)` proposition.
    pub fn constant(&self, m: usize, k: usize, big_n: usize) -> Result<f64> {
        if m == 1 && k == 0 {
            return Ok(self.k1_0);
        }
        check_mn(m, big_n)?;
        if k > big_n {
            return Err(Error::OutOfRange {
                what: "k",
                value: k as i64,
                min: 0,
                max: big_n as i64,
            });
        }
        let mut value = base_constant(m, big_n)?;
        for _ in k..big_n {
            value = self.step_constant(m, big_n, value)?;
        }
        Ok(value)
    }

    /// The constant of the top-level inequality: `K^m_0` with `N = n`.
    pub fn final_constant(&self, m: usize, n: usize) -> Result<f64> {
        self.constant(m, 0, n)
    }
}

/// `K^m_N` with the default convention.
pub fn step_constant(m: usize, big_n: usize, k_mk: f64) -> Result<f64> {
    Constants::default().step_constant(m, big_n, k_mk)
}

/// `𝓛_m` with the default convention.
pub fn script_l(m: usize, big_n: usize, l: f64) -> Result<f64> {
    Constants::default().script_l(m, big_n, l)
}

/// `K^m_0` at `N = n` with the default convention.
pub fn final_constant(m: usize, n: usize) -> Result<f64> {
    Constants::default().final_constant(m, n)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LedgerEntry {
    pub m: usize,
    pub k: usize,
    #[serde(rename = "N")]
    pub big_n: usize,
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MultiplierEntry {
    pub m: usize,
    #[serde(rename = "N")]
    pub big_n: usize,
    pub value: f64,
}

/// Every `K^m_k` needed to run the `(m, 0, n)` construction.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConstantLedger {
    pub convention_k1_0: f64,
    pub entries: Vec<LedgerEntry>,
    pub script_l_multipliers: Vec<MultiplierEntry>,
    pub final_constant: f64,
}

impl ConstantLedger {
    pub fn build(constants: &Constants, m: usize, n: usize) -> Result<Self> {
        check_mn(m, n)?;
        let mut entries = Vec::new();
        let mut script_l_multipliers = Vec::new();
        // the (m', N') pairs reached from (m, n): N' − m' = n − m
        for mm in (2..=m).rev() {
            let big_n = n - (m - mm);
            for k in (0..=big_n).rev() {
                entries.push(LedgerEntry {
                    m: mm,
                    k,
                    big_n,
                    value: constants.constant(mm, k, big_n)?,
                });
            }
            script_l_multipliers.push(MultiplierEntry {
                m: mm,
                big_n,
                value: constants.script_l_multiplier(mm, big_n)?,
            });
        }
        entries.push(LedgerEntry {
            m: 1,
            k: 0,
            big_n: n - (m - 1),
            value: constants.k1_0,
        });
        Ok(ConstantLedger {
            convention_k1_0: constants.k1_0,
            entries,
            script_l_multipliers,
            final_constant: constants.final_constant(m, n)?,
        })
    }

    pub fn get(&self, m: usize, k: usize, big_n: usize) -> Option<f64> {
        self.entries
            .iter()
            .find(|e| e.m == m && e.k == k && e.big_n == big_n)
            .map(|e| e.value)
    }

    /// Plain-text table, one row per entry.
    pub fn to_table(&self) -> String {
        let mut s = format!("K^1_0 convention = {}\n", self.convention_k1_0);
        s.push_str(&format!("{:>3} {:>3} {:>3}  {:>24}\n", "m", "k", "N", "K^m_k"));
        for e in &self.entries {
            s.push_str(&format!("{:>3} {:>3} {:>3}  {:>24.12}\n", e.m, e.k, e.big_n, e.value));
        }
        for e in &self.script_l_multipliers {
            s.push_str(&format!("script-L multiplier m={} N={}: {}\n", e.m, e.big_n, e.value));
        }
        s.push_str(&format!("final constant: {}\n", self.final_constant));
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    #[test]
    fn base_values() {
        assert!(rel(base_constant(2, 2).unwrap(), 8.0 * 2f64.sqrt()) < 1e-15);
        assert!(rel(base_constant(3, 3).unwrap(), 32.0 * 3f64.sqrt()) < 1e-15);
        assert!(base_constant(1, 2).is_err());
    }

    #[test]
    fn m2_chain() {
        let c = Constants::default();
        assert!(rel(c.constant(2, 1, 2).unwrap(), 240.0 * 2f64.sqrt()) < 1e-12);
        assert!(rel(c.constant(2, 0, 2).unwrap(), 7200.0 * 2f64.sqrt()) < 1e-12);
        assert!(rel(c.final_constant(2, 3).unwrap(), 216000.0 * 3f64.sqrt()) < 1e-12);
        assert_eq!(c.script_l(2, 2, 1.0).unwrap(), 5.0);
        assert!((c.script_l(2, 2, 0.3).unwrap() - 1.5).abs() < 1e-15);
    }

    #[test]
    fn m3_multiplier() {
        let c = Constants::default();
        let k20 = c.constant(2, 0, 2).unwrap();
        let expect = (1.0 + 2.0 * (2.0 * k20).sqrt()) * 0.7;
        assert!(rel(c.script_l(3, 3, 0.7).unwrap(), expect) < 1e-14);
    }

    #[test]
    fn ledger_contents() {
        let l = ConstantLedger::build(&Constants::default(), 3, 4).unwrap();
        assert!(l.get(3, 0, 4).is_some());
        assert!(l.get(2, 0, 3).is_some());
        assert_eq!(l.get(1, 0, 2), Some(1.0));
        assert_eq!(l.final_constant, l.get(3, 0, 4).unwrap());
    }
}
