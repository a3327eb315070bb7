//! Threshold assignment families: random in `[1, d(v)]`, constant
//! `min(t, d(v))`, proportional `ceil(alpha * d(v))`, and explicit lists.
//!
//! On directed graphs every formula uses the in-degree, since activation
//! counts active incoming neighbors.

use std::io::BufRead;
use std::path::PathBuf;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::Digraph;
use crate::{Error, NodeId, Result};

/// Per-node non-negative integer thresholds; length equals the node count.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThresholdAssignment {
    t: Vec<u32>,
}

impl ThresholdAssignment {
    pub fn get(&self, v: NodeId) -> u32 {
        self.t[v as usize]
    }

    pub fn len(&self) -> usize {
        self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }

    pub fn values(&self) -> &[u32] {
        &self.t
    }
}

/// Uniform threshold in `[1, d_in(v)]`; nodes with no incoming arcs get 1,
/// which forces them into every target set.
pub fn random_thresholds(g: &Digraph, seed: u64) -> ThresholdAssignment {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let t = g
        .nodes()
        .map(|v| {
            let d = g.in_degree(v) as u32;
            if d == 0 {
                1
            } else {
                rng.gen_range(1..=d)
            }
        })
        .collect();
    ThresholdAssignment { t }
}

/// `t(v) = min(t_const, d_in(v))`; isolated-in nodes get 0 and activate on
/// their own.
pub fn constant_thresholds(g: &Digraph, t_const: u32) -> Result<ThresholdAssignment> {
    if t_const < 1 {
        return Err(Error::InvalidParameter(
            "constant threshold must be >= 1".into(),
        ));
    }
    let t = g
        .nodes()
        .map(|v| t_const.min(g.in_degree(v) as u32))
        .collect();
    Ok(ThresholdAssignment { t })
}

/// `t(v) = ceil(alpha * d_in(v))` for `alpha` in (0, 1).
pub fn proportional_thresholds(g: &Digraph, alpha: f64) -> Result<ThresholdAssignment> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "alpha {alpha} outside (0, 1)"
        )));
    }
    let t = g
        .nodes()
        .map(|v| ceil_mul(alpha, g.in_degree(v) as u32))
        .collect();
    Ok(ThresholdAssignment { t })
}

/// Exact `ceil(alpha * d)`. The multiplier is taken at its shortest decimal
/// representation so that e.g. `alpha = 0.1, d = 10` yields 1, not the 2
/// that naive rational treatment of the nearest f64 would give.
fn ceil_mul(alpha: f64, d: u32) -> u32 {
    if d == 0 {
        return 0;
    }
    if let Some((p, q)) = decimal_ratio(alpha) {
        let prod = p * d as u128;
        return ((prod + q - 1) / q) as u32;
    }
    // Pathological alpha without a short decimal form: use the f64's own
    // binary rational, alpha = m * 2^-shift.
    let bits = alpha.to_bits();
    let exp_field = ((bits >> 52) & 0x7ff) as i64;
    let frac = bits & ((1u64 << 52) - 1);
    let (m, e) = if exp_field == 0 {
        (frac, -1074i64)
    } else {
        (frac | (1u64 << 52), exp_field - 1075)
    };
    debug_assert!(e < 0);
    let prod = m as u128 * d as u128;
    let shift = (-e) as u32;
    if shift >= 128 {
        return u32::from(prod > 0);
    }
    let q = prod >> shift;
    let rem = prod & ((1u128 << shift) - 1);
    (q + u128::from(rem > 0)) as u32
}

fn decimal_ratio(alpha: f64) -> Option<(u128, u128)> {
    let s = format!("{alpha}");
    let (int_part, frac_part) = s.split_once('.')?;
    if int_part != "0" || frac_part.len() > 19 || !frac_part.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    let p: u128 = frac_part.parse().ok()?;
    Some((p, 10u128.pow(frac_part.len() as u32)))
}

/// Stores user-supplied thresholds verbatim after validation.
pub fn explicit_thresholds(g: &Digraph, values: &[i64]) -> Result<ThresholdAssignment> {
    if values.len() != g.node_count() {
        return Err(Error::LengthMismatch {
            got: values.len(),
            expected: g.node_count(),
        });
    }
    let mut t = Vec::with_capacity(values.len());
    for &v in values {
        if v < 0 {
            return Err(Error::InvalidParameter(format!("negative threshold {v}")));
        }
        t.push(v as u32);
    }
    Ok(ThresholdAssignment { t })
}

/// Threshold scheme as spelled on the command line:
/// `random[:<seed>] | const:<t> | prop:<alpha> | file:<path>`.
#[derive(Debug, Clone, PartialEq)]
pub enum Scheme {
    Random { seed: Option<u64> },
    Constant(u32),
    Proportional(f64),
    File(PathBuf),
}

impl Scheme {
    pub fn parse(s: &str) -> Result<Scheme> {
        let bad = |msg: String| Error::InvalidParameter(msg);
        match s.split_once(':') {
            None if s == "random" => Ok(Scheme::Random { seed: None }),
            Some(("random", seed)) => {
                let seed = seed
                    .parse::<u64>()
                    .map_err(|_| bad(format!("invalid scheme seed {seed:?}")))?;
                Ok(Scheme::Random { seed: Some(seed) })
            }
            Some(("const", t)) => {
                let t = t
                    .parse::<u32>()
                    .map_err(|_| bad(format!("invalid constant threshold {t:?}")))?;
                if t < 1 {
                    return Err(bad("constant threshold must be >= 1".into()));
                }
                Ok(Scheme::Constant(t))
            }
            Some(("prop", a)) => {
                let a = a
                    .parse::<f64>()
                    .map_err(|_| bad(format!("invalid alpha {a:?}")))?;
                if !(a > 0.0 && a < 1.0) {
                    return Err(bad(format!("alpha {a} outside (0, 1)")));
                }
                Ok(Scheme::Proportional(a))
            }
            Some(("file", path)) => Ok(Scheme::File(PathBuf::from(path))),
            _ => Err(bad(format!(
                "unknown threshold scheme {s:?}; expected random[:<seed>], const:<t>, prop:<alpha> or file:<path>"
            ))),
        }
    }

    /// Canonical name used in CSV output (the seed travels in its own column).
    pub fn label(&self) -> String {
        match self {
            Scheme::Random { .. } => "random".into(),
            Scheme::Constant(t) => format!("const:{t}"),
            Scheme::Proportional(a) => format!("prop:{a}"),
            Scheme::File(path) => format!("file:{}", path.display()),
        }
    }

    /// Materializes the assignment; `fallback_seed` applies to `random`
    /// schemes that do not carry their own seed.
    pub fn thresholds(&self, g: &Digraph, fallback_seed: u64) -> Result<ThresholdAssignment> {
        match self {
            Scheme::Random { seed } => Ok(random_thresholds(g, seed.unwrap_or(fallback_seed))),
            Scheme::Constant(t) => constant_thresholds(g, *t),
            Scheme::Proportional(a) => proportional_thresholds(g, *a),
            Scheme::File(path) => {
                let file = std::fs::File::open(path)?;
                let values = parse_threshold_lines(std::io::BufReader::new(file))?;
                explicit_thresholds(g, &values)
            }
        }
    }
}

/// Reads one integer per line; blank and `#` lines are skipped.
pub fn parse_threshold_lines<R: BufRead>(reader: R) -> Result<Vec<i64>> {
    let mut values = Vec::new();
    for (lineno, line) in reader.lines().enumerate() {
        let line = line?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let v = line.parse::<i64>().map_err(|_| Error::Parse {
            line: lineno + 1,
            msg: format!("invalid threshold {line:?}"),
        })?;
        values.push(v);
    }
    Ok(values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{gen_clique, gen_cycle, gen_dag, gen_tree, Digraph};

    fn star(leaves: usize) -> Digraph {
        // center 0 <-> leaves
        let mut arcs = Vec::new();
        for i in 1..=leaves {
            arcs.push((0, i as NodeId));
            arcs.push((i as NodeId, 0));
        }
        Digraph::from_arcs(leaves + 1, arcs).unwrap()
    }

    #[test]
    fn random_respects_degree_interval() {
        let g = gen_tree(50, 4).unwrap();
        for seed in 0..10 {
            let t = random_thresholds(&g, seed);
            for v in g.nodes() {
                let d = g.in_degree(v) as u32;
                assert!(t.get(v) >= 1);
                assert!(t.get(v) <= d.max(1));
            }
        }
    }

    #[test]
    fn random_is_deterministic() {
        let g = gen_clique(8).unwrap();
        assert_eq!(random_thresholds(&g, 77), random_thresholds(&g, 77));
    }

    #[test]
    fn degree_one_always_gets_one() {
        let g = star(6);
        let t = random_thresholds(&g, 3);
        for v in 1..=6 {
            assert_eq!(t.get(v), 1);
        }
    }

    #[test]
    fn isolated_in_node_gets_one_under_random() {
        let g = Digraph::from_arcs(2, [(0, 1)]).unwrap();
        let t = random_thresholds(&g, 0);
        assert_eq!(t.get(0), 1);
    }

    #[test]
    fn constant_clamps_to_degree() {
        let g = star(10);
        let t = constant_thresholds(&g, 3).unwrap();
        assert_eq!(t.get(0), 3); // d_in = 10
        assert_eq!(t.get(1), 1); // d_in = 1
        let g2 = Digraph::from_arcs(2, [(0, 1)]).unwrap();
        let t2 = constant_thresholds(&g2, 3).unwrap();
        assert_eq!(t2.get(0), 0); // d_in = 0
        assert!(constant_thresholds(&g, 0).is_err());
    }

    #[test]
    fn proportional_examples() {
        assert_eq!(ceil_mul(0.5, 4), 2);
        assert_eq!(ceil_mul(0.5, 5), 3);
        assert_eq!(ceil_mul(0.1, 0), 0);
        assert_eq!(ceil_mul(0.1, 10), 1);
        assert_eq!(ceil_mul(0.3, 10), 3);
        assert_eq!(ceil_mul(0.7, 10), 7);
        assert_eq!(ceil_mul(0.9, 9), 9);
        assert_eq!(ceil_mul(0.2, 7), 2);
    }

    #[test]
    fn proportional_matches_tenths_grid() {
        for a in 1..=9u32 {
            let alpha = a as f64 / 10.0;
            for d in 0..500u32 {
                let expect = (a * d).div_ceil(10);
                assert_eq!(ceil_mul(alpha, d), expect, "alpha={alpha} d={d}");
            }
        }
    }

    #[test]
    fn proportional_monotone_in_alpha() {
        let g = gen_dag(60, 0.2, 5).unwrap();
        let alphas = [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9];
        for pair in alphas.windows(2) {
            let lo = proportional_thresholds(&g, pair[0]).unwrap();
            let hi = proportional_thresholds(&g, pair[1]).unwrap();
            for v in g.nodes() {
                assert!(lo.get(v) <= hi.get(v));
            }
        }
    }

    #[test]
    fn explicit_validation() {
        let g = gen_cycle(3, false).unwrap();
        assert_eq!(
            explicit_thresholds(&g, &[2, 1, 0]).unwrap().values(),
            &[2, 1, 0]
        );
        assert!(explicit_thresholds(&g, &[-1, 0, 0]).is_err());
        assert!(explicit_thresholds(&g, &[1, 1]).is_err());
    }

    #[test]
    fn scheme_round_trip() {
        assert_eq!(
            Scheme::parse("random:9").unwrap(),
            Scheme::Random { seed: Some(9) }
        );
        assert_eq!(Scheme::parse("random").unwrap(), Scheme::Random { seed: None });
        assert_eq!(Scheme::parse("const:4").unwrap(), Scheme::Constant(4));
        assert_eq!(
            Scheme::parse("prop:0.5").unwrap(),
            Scheme::Proportional(0.5)
        );
        assert!(Scheme::parse("prop:1.5").is_err());
        assert!(Scheme::parse("const:0").is_err());
        assert!(Scheme::parse("bogus").is_err());
        assert_eq!(Scheme::parse("prop:0.3").unwrap().label(), "prop:0.3");
    }

    #[test]
    fn threshold_file_lines() {
        let values = parse_threshold_lines("2\n# c\n\n1\n0\n".as_bytes()).unwrap();
        assert_eq!(values, vec![2, 1, 0]);
        assert!(parse_threshold_lines("x\n".as_bytes()).is_err());
    }
}
