//! Seeded random interval programs.

use ilp_core::rational::ratio;
use ilp_core::{IlpProgram, Interval, Rational, Relation, RowSpec, Sense, Sign, Var};
use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SenseChoice {
    Min,
    Max,
    Either,
}

/// Everything [`generate`] depends on. Widths are in multiples of
/// `1 / denominator`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeneratorConfig {
    pub vars: usize,
    pub rows: usize,
    /// Relative weights of `=`, `<=` and `>=` rows.
    pub relation_weights: [u32; 3],
    pub min_eq_rows: usize,
    pub min_free_vars: usize,
    pub free_fraction: f64,
    pub sense: SenseChoice,
    pub min_width: u32,
    pub max_width: u32,
    pub denominator: u32,
    /// Coefficient centers lie in `[-magnitude, magnitude]`.
    pub magnitude: i64,
    /// Chance that an eligible entry becomes an interval.
    pub interval_fraction: f64,
    pub max_nondegenerate: usize,
    /// Chance that a matrix entry is zero.
    pub zero_fraction: f64,
    pub fixed_matrix: bool,
    pub seed: u64,
}

impl Default for GeneratorConfig {
    fn default() -> Self {
        GeneratorConfig {
            vars: 2,
            rows: 2,
            relation_weights: [1, 1, 1],
            min_eq_rows: 0,
            min_free_vars: 0,
            free_fraction: 0.5,
            sense: SenseChoice::Either,
            min_width: 0,
            max_width: 16,
            denominator: 16,
            magnitude: 3,
            interval_fraction: 0.4,
            max_nondegenerate: 8,
            zero_fraction: 0.25,
            fixed_matrix: false,
            seed: 0,
        }
    }
}

impl GeneratorConfig {
    pub fn validate(&self) -> CliResult<()> {
        let bad = |msg: &str| Err(CliError::Input(format!("generator config: {msg}")));
        if self.denominator == 0 {
            return bad("denominator bound must be positive");
        }
        if self.min_width > self.max_width {
            return bad("min_width exceeds max_width");
        }
        if self.min_eq_rows > self.rows {
            return bad("more equation rows requested than rows");
        }
        if self.min_free_vars > self.vars {
            return bad("more free variables requested than variables");
        }
        if self.min_eq_rows < self.rows && self.relation_weights.iter().all(|w| *w == 0) {
            return bad("all relation weights are zero");
        }
        for (name, f) in [
            ("free_fraction", self.free_fraction),
            ("interval_fraction", self.interval_fraction),
            ("zero_fraction", self.zero_fraction),
        ] {
            if !(0.0..=1.0).contains(&f) {
                return bad(&format!("{name} must lie in [0, 1]"));
            }
        }
        if self.magnitude < 0 {
            return bad("magnitude must be nonnegative");
        }
        if self.max_nondegenerate >= 64 {
            return bad("at most 63 interval entries");
        }
        Ok(())
    }
}

fn value(rng: &mut ChaCha8Rng, cfg: &GeneratorConfig) -> Rational {
    let d = rng.gen_range(1..=cfg.denominator as i64);
    let m = cfg.magnitude * d;
    ratio(rng.gen_range(-m..=m), d)
}

/// The program determined by `cfg`; equal configs give equal programs.
pub fn generate(cfg: &GeneratorConfig) -> CliResult<IlpProgram> {
    cfg.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let (n, m) = (cfg.vars, cfg.rows);

    let sense = match cfg.sense {
        SenseChoice::Min => Sense::Min,
        SenseChoice::Max => Sense::Max,
        SenseChoice::Either if rng.gen_bool(0.5) => Sense::Max,
        SenseChoice::Either => Sense::Min,
    };
    let mut signs: Vec<Sign> = (0..n)
        .map(|j| {
            if j < cfg.min_free_vars || rng.gen_bool(cfg.free_fraction) {
                Sign::Free
            } else {
                Sign::NonNeg
            }
        })
        .collect();
    signs.shuffle(&mut rng);
    let vars: Vec<Var> = signs
        .into_iter()
        .enumerate()
        .map(|(j, sign)| Var::new(format!("x{}", j + 1), sign))
        .collect();

    let mut order: Vec<usize> = (0..m).collect();
    order.shuffle(&mut rng);
    let mut rels = vec![Relation::Eq; m];
    let total: u32 = cfg.relation_weights.iter().sum();
    for &i in &order[cfg.min_eq_rows..] {
        let mut pick = rng.gen_range(0..total);
        rels[i] = [Relation::Eq, Relation::Le, Relation::Ge]
            .into_iter()
            .zip(cfg.relation_weights)
            .find(|(_, w)| {
                if pick < *w {
                    true
                } else {
                    pick -= w;
                    false
                }
            })
            .map(|(r, _)| r)
            .expect("weights cover the draw");
    }

    // Points are the entries in file order: objective, then each row's
    // coefficients and right-hand side.
    let width = n + m * (n + 1);
    let mut points: Vec<Rational> = Vec::with_capacity(width);
    let mut eligible = Vec::new();
    for k in 0..width {
        let in_matrix = k >= n && (k - n) % (n + 1) != n;
        let v = if in_matrix && rng.gen_bool(cfg.zero_fraction) {
            Rational::zero()
        } else {
            value(&mut rng, cfg)
        };
        points.push(v);
        if !(in_matrix && cfg.fixed_matrix) && rng.gen_bool(cfg.interval_fraction) {
            eligible.push(k);
        }
    }
    eligible.shuffle(&mut rng);
    eligible.truncate(cfg.max_nondegenerate);
    let mut widths = vec![Rational::zero(); width];
    for &k in &eligible {
        widths[k] = ratio(
            rng.gen_range(cfg.min_width..=cfg.max_width) as i64,
            cfg.denominator as i64,
        );
    }
    let mut intervals = points
        .into_iter()
        .zip(widths)
        .map(|(lo, w)| Interval::new(lo.clone(), lo + w).expect("nonnegative width"));

    let objective: Vec<Interval> = intervals.by_ref().take(n).collect();
    let rows = rels
        .into_iter()
        .map(|rel| {
            let coeffs: Vec<Interval> = intervals.by_ref().take(n).collect();
            let rhs = intervals.next().expect("row has a right-hand side");
            RowSpec::new(coeffs, rel, rhs)
        })
        .collect();
    Ok(IlpProgram::new(sense, objective, rows, vars)?.with_name(format!("generated-{}", cfg.seed)))
}
