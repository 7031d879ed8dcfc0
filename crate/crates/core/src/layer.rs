//! Layer-type laws: the joint distribution of a layer's size and strength.
//!
//! Text grammar used by config files and the CLI:
//!
//! ```text
//! point:x=5,y=0.5
//! table:(2,1.0,0.5);(3,0.2,0.5)      entries are (size, strength, weight)
//! binom:N=10,p=0.3,y=0.5
//! ```

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};

use crate::error::{Error, Result};
use crate::math::falling_factorial;

/// Weights of a table must sum to one within this tolerance.
pub const WEIGHT_TOLERANCE: f64 = 1e-9;

/// Default draw count for Monte Carlo moment estimates.
pub const DEFAULT_MOMENT_SAMPLES: u64 = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LayerSample {
    pub size: u64,
    pub strength: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TableEntry {
    pub size: u64,
    pub strength: f64,
    pub weight: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum LayerDistribution {
    PointMass {
        size: u64,
        strength: f64,
    },
    FiniteTable(Vec<TableEntry>),
    /// Size `Bin(trials, p)` with constant strength.
    BinomialSize {
        trials: u64,
        p: f64,
        strength: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentEstimate {
    pub estimate: f64,
    pub std_error: f64,
}

impl LayerDistribution {
    pub fn point(size: u64, strength: f64) -> Result<Self> {
        let d = LayerDistribution::PointMass { size, strength };
        d.validate()?;
        Ok(d)
    }

    pub fn table(entries: Vec<TableEntry>) -> Result<Self> {
        let d = LayerDistribution::FiniteTable(entries);
        d.validate()?;
        Ok(d)
    }

    pub fn binomial(trials: u64, p: f64, strength: f64) -> Result<Self> {
        let d = LayerDistribution::BinomialSize {
            trials,
            p,
            strength,
        };
        d.validate()?;
        Ok(d)
    }

    pub fn validate(&self) -> Result<()> {
        let check_unit = |name: &str, v: f64| {
            if (0.0..=1.0).contains(&v) {
                Ok(())
            } else {
                Err(Error::InvalidDistribution(format!(
                    "{name} = {v} outside [0, 1]"
                )))
            }
        };
        match self {
            LayerDistribution::PointMass { strength, .. } => check_unit("strength", *strength),
            LayerDistribution::FiniteTable(entries) => {
                if entries.is_empty() {
                    return Err(Error::InvalidDistribution("empty table".into()));
                }
                let mut total = 0.0;
                for e in entries {
                    check_unit("strength", e.strength)?;
                    if e.weight <= 0.0 || !e.weight.is_finite() {
                        return Err(Error::InvalidDistribution(format!(
                            "table weight {} must be positive",
                            e.weight
                        )));
                    }
                    total += e.weight;
                }
                if (total - 1.0).abs() > WEIGHT_TOLERANCE {
                    return Err(Error::InvalidDistribution(format!(
                        "table weights sum to {total}, expected 1"
                    )));
                }
                Ok(())
            }
            LayerDistribution::BinomialSize { p, strength, .. } => {
                check_unit("p", *p)?;
                check_unit("strength", *strength)
            }
        }
    }

    /// Largest size with positive probability.
    pub fn max_size(&self) -> u64 {
        match self {
            LayerDistribution::PointMass { size, .. } => *size,
            LayerDistribution::FiniteTable(entries) => {
                entries.iter().map(|e| e.size).max().unwrap_or(0)
            }
            LayerDistribution::BinomialSize { trials, p, .. } => {
                if *p == 0.0 {
                    0
                } else {
                    *trials
                }
            }
        }
    }

    /// Largest strength with positive probability.
    pub fn max_strength(&self) -> f64 {
        match self {
            LayerDistribution::PointMass { strength, .. } => *strength,
            LayerDistribution::FiniteTable(entries) => {
                entries.iter().map(|e| e.strength).fold(0.0, f64::max)
            }
            LayerDistribution::BinomialSize { strength, .. } => *strength,
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> LayerSample {
        match self {
            LayerDistribution::PointMass { size, strength } => LayerSample {
                size: *size,
                strength: *strength,
            },
            LayerDistribution::FiniteTable(entries) => {
                let u: f64 = rng.random();
                let mut acc = 0.0;
                for e in entries {
                    acc += e.weight;
                    if u < acc {
                        return LayerSample {
                            size: e.size,
                            strength: e.strength,
                        };
                    }
                }
                // u landed in the rounding slack above the last cumulative weight
                let last = entries.last().expect("validated table is nonempty");
                LayerSample {
                    size: last.size,
                    strength: last.strength,
                }
            }
            LayerDistribution::BinomialSize {
                trials,
                p,
                strength,
            } => {
                let size = Binomial::new(*trials, *p).expect("validated p").sample(rng);
                LayerSample {
                    size,
                    strength: *strength,
                }
            }
        }
    }

    /// `E[(X)_r Y^s]`.
    pub fn cross_moment(&self, r: u32, s: u32) -> f64 {
        match self {
            LayerDistribution::PointMass { size, strength } => {
                falling_factorial(*size as f64, r) * strength.powi(s as i32)
            }
            LayerDistribution::FiniteTable(entries) => entries
                .iter()
                .map(|e| e.weight * falling_factorial(e.size as f64, r) * e.strength.powi(s as i32))
                .sum(),
            LayerDistribution::BinomialSize {
                trials,
                p,
                strength,
            } => falling_factorial(*trials as f64, r) * p.powi(r as i32) * strength.powi(s as i32),
        }
    }

    /// `E[(X)_a Y^b 1(X > threshold)]`.
    pub fn truncated_cross_moment(&self, a: u32, b: u32, threshold: u64) -> f64 {
        match self {
            LayerDistribution::PointMass { size, .. } => {
                if *size > threshold {
                    self.cross_moment(a, b)
                } else {
                    0.0
                }
            }
            LayerDistribution::FiniteTable(entries) => entries
                .iter()
                .filter(|e| e.size > threshold)
                .map(|e| e.weight * falling_factorial(e.size as f64, a) * e.strength.powi(b as i32))
                .sum(),
            LayerDistribution::BinomialSize {
                trials,
                p,
                strength,
            } => {
                let tail: f64 = binomial_pmf(*trials, *p)
                    .into_iter()
                    .enumerate()
                    .skip(threshold.saturating_add(1).min(*trials + 1) as usize)
                    .map(|(k, pk)| pk * falling_factorial(k as f64, a))
                    .sum();
                tail * strength.powi(b as i32)
            }
        }
    }

    /// Monte Carlo estimate of `E[(X)_r Y^s]` with its standard error.
    pub fn cross_moment_monte_carlo(
        &self,
        r: u32,
        s: u32,
        samples: u64,
        seed: u64,
    ) -> MomentEstimate {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut mean = 0.0;
        let mut m2 = 0.0;
        for i in 0..samples {
            let d = self.sample(&mut rng);
            let v = falling_factorial(d.size as f64, r) * d.strength.powi(s as i32);
            let delta = v - mean;
            mean += delta / (i + 1) as f64;
            m2 += delta * (v - mean);
        }
        let var = if samples > 1 {
            m2 / (samples - 1) as f64
        } else {
            0.0
        };
        MomentEstimate {
            estimate: mean,
            std_error: (var / samples.max(1) as f64).sqrt(),
        }
    }
}

/// Probability mass function of `Bin(trials, p)` over `0..=trials`.
pub fn binomial_pmf(trials: u64, p: f64) -> Vec<f64> {
    let n = trials as usize;
    let mut pmf = vec![0.0; n + 1];
    if p <= 0.0 {
        pmf[0] = 1.0;
        return pmf;
    }
    if p >= 1.0 {
        pmf[n] = 1.0;
        return pmf;
    }
    // log-space recurrence keeps (1-p)^N from underflowing for large N
    let log_odds = (p / (1.0 - p)).ln();
    let mut log_pk = trials as f64 * (1.0 - p).ln();
    pmf[0] = log_pk.exp();
    for k in 0..n {
        log_pk += ((n - k) as f64 / (k + 1) as f64).ln() + log_odds;
        pmf[k + 1] = log_pk.exp();
    }
    pmf
}

impl fmt::Display for LayerDistribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LayerDistribution::PointMass { size, strength } => {
                write!(f, "point:x={size},y={strength}")
            }
            LayerDistribution::FiniteTable(entries) => {
                write!(f, "table:")?;
                for (i, e) in entries.iter().enumerate() {
                    if i > 0 {
                        write!(f, ";")?;
                    }
                    write!(f, "({},{},{})", e.size, e.strength, e.weight)?;
                }
                Ok(())
            }
            LayerDistribution::BinomialSize {
                trials,
                p,
                strength,
            } => {
                write!(f, "binom:N={trials},p={p},y={strength}")
            }
        }
    }
}

impl FromStr for LayerDistribution {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (kind, rest) = s
            .split_once(':')
            .ok_or_else(|| bad(format!("expected kind:params, got `{s}`")))?;
        match kind.trim() {
            "point" => {
                let kv = key_values(rest)?;
                Self::point(get_u64(&kv, "x")?, get_f64(&kv, "y")?)
            }
            "binom" => {
                let kv = key_values(rest)?;
                Self::binomial(get_u64(&kv, "N")?, get_f64(&kv, "p")?, get_f64(&kv, "y")?)
            }
            "table" => {
                let mut entries = Vec::new();
                for chunk in rest.split(';').map(str::trim).filter(|c| !c.is_empty()) {
                    let inner = chunk
                        .strip_prefix('(')
                        .and_then(|c| c.strip_suffix(')'))
                        .ok_or_else(|| bad(format!("table entry `{chunk}` must be (x,y,w)")))?;
                    let parts: Vec<_> = inner.split(',').map(str::trim).collect();
                    if parts.len() != 3 {
                        return Err(bad(format!("table entry `{chunk}` must have three fields")));
                    }
                    entries.push(TableEntry {
                        size: parse_num(parts[0])?,
                        strength: parse_num(parts[1])?,
                        weight: parse_num(parts[2])?,
                    });
                }
                Self::table(entries)
            }
            other => Err(bad(format!("unknown distribution kind `{other}`"))),
        }
    }
}

fn bad(msg: String) -> Error {
    Error::InvalidDistribution(msg)
}

fn key_values(s: &str) -> Result<Vec<(String, String)>> {
    s.split(',')
        .map(str::trim)
        .filter(|p| !p.is_empty())
        .map(|p| {
            p.split_once('=')
                .map(|(k, v)| (k.trim().to_string(), v.trim().to_string()))
                .ok_or_else(|| bad(format!("expected key=value, got `{p}`")))
        })
        .collect()
}

fn lookup<'a>(kv: &'a [(String, String)], key: &str) -> Result<&'a str> {
    kv.iter()
        .find(|(k, _)| k == key)
        .map(|(_, v)| v.as_str())
        .ok_or_else(|| bad(format!("missing `{key}`")))
}

fn get_u64(kv: &[(String, String)], key: &str) -> Result<u64> {
    parse_num(lookup(kv, key)?)
}

fn get_f64(kv: &[(String, String)], key: &str) -> Result<f64> {
    parse_num(lookup(kv, key)?)
}

fn parse_num<T: FromStr>(s: &str) -> Result<T> {
    s.parse().map_err(|_| bad(format!("bad number `{s}`")))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn binom(trials: u64, p: f64, y: f64) -> LayerDistribution {
        LayerDistribution::binomial(trials, p, y).unwrap()
    }

    #[test]
    fn point_mass_moments() {
        let d = LayerDistribution::point(5, 0.5).unwrap();
        assert_eq!(d.cross_moment(3, 3), 7.5);
        assert_eq!(
            LayerDistribution::point(2, 0.9).unwrap().cross_moment(3, 1),
            0.0
        );
        assert_eq!(d.truncated_cross_moment(3, 3, 5), 0.0);
        assert_eq!(d.truncated_cross_moment(3, 3, 4), 7.5);
    }

    #[test]
    fn binomial_factorial_moment_matches_pmf_sum() {
        let d = binom(10, 0.3, 1.0);
        // oracle: sum over the pmf directly
        let pmf = binomial_pmf(10, 0.3);
        let oracle: f64 = (0..=10usize)
            .map(|k| (k * k.saturating_sub(1)) as f64 * pmf[k])
            .sum();
        assert!((oracle - 8.1).abs() < 1e-12);
        assert!((d.cross_moment(2, 0) - 8.1).abs() < 1e-12);
        assert_eq!(d.truncated_cross_moment(2, 0, 10), 0.0);
        assert!((d.truncated_cross_moment(2, 0, 0) - 8.1).abs() < 1e-12);
        assert!((binomial_pmf(10, 0.3).iter().sum::<f64>() - 1.0).abs() < 1e-12);
        assert!((binomial_pmf(100_000, 0.00005).iter().sum::<f64>() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn table_moment_is_weighted_sum() {
        let d: LayerDistribution = "table:(2,1.0,0.5);(3,0.2,0.5)".parse().unwrap();
        let expect = 0.5 * 2.0 * 1.0 + 0.5 * 6.0 * 0.2;
        assert_eq!(d.cross_moment(2, 1), expect);
        assert_eq!(d.truncated_cross_moment(2, 1, 2), 0.5 * 6.0 * 0.2);
        assert_eq!(d.max_size(), 3);
    }

    #[test]
    fn unit_moment() {
        for d in [
            LayerDistribution::point(4, 0.0).unwrap(),
            binom(7, 0.4, 0.0),
            "table:(0,0.5,0.25);(9,1,0.75)".parse().unwrap(),
        ] {
            assert!((d.cross_moment(0, 0) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn sampling_laws() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let point = LayerDistribution::point(5, 0.5).unwrap();
        for _ in 0..100 {
            assert_eq!(
                point.sample(&mut rng),
                LayerSample {
                    size: 5,
                    strength: 0.5
                }
            );
        }

        let draws = 100_000;
        let table: LayerDistribution = "table:(2,1.0,0.5);(3,0.2,0.5)".parse().unwrap();
        let twos = (0..draws)
            .filter(|_| table.sample(&mut rng).size == 2)
            .count();
        let freq = twos as f64 / draws as f64;
        let se = (0.25f64 / draws as f64).sqrt();
        assert!((freq - 0.5).abs() < 3.0 * se, "freq {freq}");

        let b = binom(10, 0.3, 1.0);
        let mean = (0..draws)
            .map(|_| b.sample(&mut rng).size as f64)
            .sum::<f64>()
            / draws as f64;
        let se = (10.0f64 * 0.3 * 0.7 / draws as f64).sqrt();
        assert!((mean - 3.0).abs() < 3.0 * se, "mean {mean}");
    }

    #[test]
    fn monte_carlo_moment_converges() {
        let d = binom(10, 0.3, 0.7);
        let exact = d.cross_moment(2, 2);
        let mc = d.cross_moment_monte_carlo(2, 2, DEFAULT_MOMENT_SAMPLES, 5);
        assert!(
            (mc.estimate - exact).abs() < 4.0 * mc.std_error,
            "{mc:?} vs {exact}"
        );
    }

    #[test]
    fn parse_round_trip_and_rejections() {
        for s in [
            "point:x=5,y=0.5",
            "binom:N=10,p=0.3,y=0.5",
            "table:(2,1,0.5);(3,0.2,0.5)",
        ] {
            let d: LayerDistribution = s.parse().unwrap();
            assert_eq!(d.to_string(), s);
        }
        assert!("point:x=5,y=1.5".parse::<LayerDistribution>().is_err());
        assert!("table:(2,1,0.5);(3,0.2,0.4)"
            .parse::<LayerDistribution>()
            .is_err());
        assert!("table:(2,1,0.5);(3,0.2,0.5000000001)"
            .parse::<LayerDistribution>()
            .is_ok());
        assert!("binom:N=10,p=-0.1,y=1"
            .parse::<LayerDistribution>()
            .is_err());
        assert!("gauss:mu=1".parse::<LayerDistribution>().is_err());
        assert!("point:x=5".parse::<LayerDistribution>().is_err());
    }
}
