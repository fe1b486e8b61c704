use serde::{Deserialize, Serialize};

use super::NetworkError;

/// Discretized universe of discourse: `k` uniform samples of `[lo, hi]`, endpoints included.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Universe {
    lo: f64,
    hi: f64,
    k: usize,
}

impl Universe {
    pub fn new(lo: f64, hi: f64, k: usize) -> Result<Self, NetworkError> {
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(NetworkError::InvalidUniverse(format!("need lo < hi, got [{lo}, {hi}]")));
        }
        if k < 2 {
            return Err(NetworkError::InvalidUniverse(format!("need at least 2 grid points, got {k}")));
        }
        Ok(Universe { lo, hi, k })
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn point(&self, i: usize) -> f64 {
        if i + 1 == self.k {
            self.hi
        } else {
            self.lo + self.width() * i as f64 / (self.k - 1) as f64
        }
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.k).map(|i| self.point(i)).collect()
    }

    pub fn contains(&self, x: f64) -> bool {
        x >= self.lo && x <= self.hi
    }

    /// Maps an 8-bit intensity onto the universe (`0 → lo`, `255 → hi`).
    pub fn from_intensity(&self, p: u8) -> f64 {
        match p {
            0 => self.lo,
            255 => self.hi,
            _ => self.lo + self.width() * (p as f64 / 255.0),
        }
    }
}

/// Shape of a linguistic term.
#[derive(Debug, Clone, PartialEq)]
pub enum MembershipFunction {
    /// Triangle with feet at `a`, `c` and peak at `b`; `a == b` or `b == c` gives a shoulder.
    Triangular { a: f64, b: f64, c: f64 },
    /// Explicit samples, one per universe grid point.
    Sampled(Vec<f64>),
}

impl MembershipFunction {
    pub fn triangular(a: f64, b: f64, c: f64) -> Result<Self, NetworkError> {
        if !(a.is_finite() && b.is_finite() && c.is_finite()) || a > b || b > c {
            return Err(NetworkError::InvalidMembership(format!(
                "triangle needs a <= b <= c, got ({a}, {b}, {c})"
            )));
        }
        Ok(MembershipFunction::Triangular { a, b, c })
    }

    /// Evaluates a triangular shape at `x`. Sampled shapes have no continuous form and return `None`.
    pub fn eval(&self, x: f64) -> Option<f64> {
        match *self {
            MembershipFunction::Triangular { a, b, c } => Some(if x == b {
                1.0
            } else if x < a || x > c {
                0.0
            } else if x < b {
                (x - a) / (b - a)
            } else {
                (c - x) / (c - b)
            }),
            MembershipFunction::Sampled(_) => None,
        }
    }

    /// Samples the shape at the universe grid points.
    pub fn discretize(&self, u: &Universe) -> Result<Vec<f64>, NetworkError> {
        let samples = match self {
            MembershipFunction::Triangular { .. } => u
                .points()
                .into_iter()
                .map(|x| self.eval(x).expect("triangular"))
                .collect::<Vec<_>>(),
            MembershipFunction::Sampled(s) => {
                if s.len() != u.k() {
                    return Err(NetworkError::DimensionMismatch {
                        what: "membership samples",
                        expected: u.k(),
                        got: s.len(),
                    });
                }
                s.clone()
            }
        };
        check_samples(&samples)?;
        Ok(samples)
    }
}

pub(crate) fn check_samples(samples: &[f64]) -> Result<(), NetworkError> {
    if let Some(bad) = samples.iter().find(|v| !(0.0..=1.0).contains(*v)) {
        return Err(NetworkError::InvalidMembership(format!(
            "membership degree {bad} outside [0, 1]"
        )));
    }
    if samples.iter().all(|&v| v == 0.0) {
        return Err(NetworkError::EmptySupport);
    }
    Ok(())
}

/// Which crisp signal drives a term's fuzzification terminal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Polarity {
    /// Receives `x - lo` (the "big" side).
    Direct,
    /// Receives `hi - x` (the "small" side).
    Complement,
}

impl Polarity {
    /// Terms whose membership mass sits in the upper half of the universe are
    /// driven directly, the rest by the complement.  Ties go to `Direct`.
    pub fn for_samples(samples: &[f64], u: &Universe) -> Polarity {
        let mass: f64 = samples.iter().sum();
        let centroid = samples
            .iter()
            .zip(u.points())
            .map(|(m, x)| m * x)
            .sum::<f64>()
            / mass;
        if centroid >= u.lo() + 0.5 * u.width() {
            Polarity::Direct
        } else {
            Polarity::Complement
        }
    }

    pub fn encode(self, x: f64, u: &Universe) -> f64 {
        match self {
            Polarity::Direct => x - u.lo(),
            Polarity::Complement => u.hi() - x,
        }
    }
}

/// Splits a crisp value into its direct and complement terminal signals.
pub fn complement_encode(x: f64, u: &Universe) -> Result<(f64, f64), NetworkError> {
    if !u.contains(x) {
        return Err(NetworkError::OutOfUniverse {
            variable: String::new(),
            value: x,
            lo: u.lo(),
            hi: u.hi(),
        });
    }
    Ok((Polarity::Direct.encode(x, u), Polarity::Complement.encode(x, u)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit(k: usize) -> Universe {
        Universe::new(0.0, 1.0, k).unwrap()
    }

    #[test]
    fn universe_validation() {
        assert!(Universe::new(1.0, 1.0, 4).is_err());
        assert!(Universe::new(0.0, 1.0, 1).is_err());
        assert_eq!(unit(3).points(), vec![0.0, 0.5, 1.0]);
        assert_eq!(Universe::new(-1.0, 3.0, 5).unwrap().points(), vec![-1.0, 0.0, 1.0, 2.0, 3.0]);
    }

    #[test]
    fn ramps_discretize() {
        let big = MembershipFunction::triangular(0.0, 1.0, 1.0).unwrap();
        let small = MembershipFunction::triangular(0.0, 0.0, 1.0).unwrap();
        let b = big.discretize(&unit(3)).unwrap();
        let s = small.discretize(&unit(3)).unwrap();
        assert_eq!(b, vec![0.0, 0.5, 1.0]);
        assert_eq!(s, vec![1.0, 0.5, 0.0]);
        let mut rev = b.clone();
        rev.reverse();
        assert_eq!(rev, s);
    }

    #[test]
    fn mirror_law_holds_at_default_grid() {
        let u = unit(16);
        let mut b = MembershipFunction::triangular(0.0, 1.0, 1.0).unwrap().discretize(&u).unwrap();
        let s = MembershipFunction::triangular(0.0, 0.0, 1.0).unwrap().discretize(&u).unwrap();
        b.reverse();
        for (x, y) in b.iter().zip(&s) {
            assert!((x - y).abs() < 1e-15);
        }
    }

    #[test]
    fn empty_support_and_bad_shapes() {
        // support strictly between grid points 0.5 and 1.0
        let narrow = MembershipFunction::triangular(0.6, 0.7, 0.8).unwrap();
        assert!(matches!(narrow.discretize(&unit(3)), Err(NetworkError::EmptySupport)));
        assert!(MembershipFunction::triangular(1.0, 0.5, 2.0).is_err());
        let sampled = MembershipFunction::Sampled(vec![0.0, 1.5]);
        assert!(sampled.discretize(&unit(2)).is_err());
        let short = MembershipFunction::Sampled(vec![1.0]);
        assert!(matches!(short.discretize(&unit(2)), Err(NetworkError::DimensionMismatch { .. })));
    }

    #[test]
    fn complement_encoding() {
        let u = Universe::new(0.0, 255.0, 16).unwrap();
        assert_eq!(complement_encode(255.0, &u).unwrap(), (255.0, 0.0));
        assert_eq!(complement_encode(0.0, &u).unwrap(), (0.0, 255.0));
        let v = Universe::new(2.0, 6.0, 4).unwrap();
        assert_eq!(complement_encode(6.0, &v).unwrap(), (4.0, 0.0));
        assert_eq!(complement_encode(2.0, &v).unwrap(), (0.0, 4.0));
        assert!(complement_encode(6.5, &v).is_err());
    }

    #[test]
    fn polarity_follows_centroid() {
        let u = unit(16);
        let big = MembershipFunction::triangular(0.0, 1.0, 1.0).unwrap().discretize(&u).unwrap();
        let small = MembershipFunction::triangular(0.0, 0.0, 1.0).unwrap().discretize(&u).unwrap();
        assert_eq!(Polarity::for_samples(&big, &u), Polarity::Direct);
        assert_eq!(Polarity::for_samples(&small, &u), Polarity::Complement);
    }

    #[test]
    fn intensity_mapping_hits_endpoints() {
        let u = unit(4);
        assert_eq!(u.from_intensity(0), 0.0);
        assert_eq!(u.from_intensity(255), 1.0);
        assert_eq!(u.from_intensity(51), 0.2);
    }
}
