use std::fmt;

use thiserror::Error;

/// A named hypothesis of the inversion and equality theorems.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Hypothesis {
    /// Essential classes reduce only to essential classes, and common
    /// reductions factor through the gcd level.
    GcdReducible,
    /// Boosts into the level are injective on essential classes.
    InjectiveOnBoosts,
    /// Weakly Jiang with a nonzero Nielsen number at the level.
    WeaklyJiangNonzero,
    /// Essential classes reduce only to essential classes.
    EssentiallyReducible,
    /// Klein bottle gate: gcd(a, b) = 1 and gcd(c, d) = 1.
    KleinCoprimeDegrees,
    /// The induced homomorphisms commute.
    Commuting,
}

impl fmt::Display for Hypothesis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Hypothesis::GcdReducible => "essential reducibility to the gcd",
            Hypothesis::InjectiveOnBoosts => "injectivity on essential boosts",
            Hypothesis::WeaklyJiangNonzero => "weakly Jiang with nonzero Nielsen number",
            Hypothesis::EssentiallyReducible => "essential reducibility",
            Hypothesis::KleinCoprimeDegrees => "gcd(a,b) = 1 and gcd(c,d) = 1",
            Hypothesis::Commuting => "commuting linearizations",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("column span has rank {rank} < ambient rank {ambient}")]
    RankDeficient { rank: usize, ambient: usize },
    #[error("lattices live in different ambient ranks ({0} vs {1})")]
    AmbientMismatch(usize, usize),
    #[error("level {m} does not divide level {n}")]
    NotDivisor { m: u64, n: u64 },
    #[error("levels must be positive")]
    ZeroLevel,
    #[error("linearizations do not commute (F*G != G*F)")]
    NonCommuting,
    #[error("class lives at level {got}, expected level {expected}")]
    LevelMismatch { expected: u64, got: u64 },
    #[error("Reidemeister set at level {0} is infinite")]
    InfiniteLevel(u64),
    #[error("class enumeration needs {needed} classes, budget is {budget}")]
    BudgetExceeded { needed: String, budget: u64 },
    #[error("precondition failed: {hypothesis} ({detail})")]
    Precondition { hypothesis: Hypothesis, detail: String },
    #[error("invalid Klein bottle map ({q},{r}): r must be odd, or r even with q = 0")]
    InvalidKleinMap { q: String, r: String },
    #[error("|c^n - d^n| = {0} is odd, halving is not exact")]
    NonIntegralHalf(String),
    #[error("{0} and {1} are not coprime")]
    NotCoprime(u64, u64),
    #[error("degree a = 0 is not allowed here")]
    ZeroDegree,
    #[error("point {0} is not a coincidence at level {1}")]
    NotCoincidence(String, u64),
    #[error("degenerate level {0}: the coincidence set is infinite")]
    DegenerateLevel(u64),
    #[error("G is not unimodular (det = {0})")]
    NotUnimodular(String),
    #[error("inexact polynomial division: {0}")]
    InexactDivision(String),
    #[error("root finding failed: {0}")]
    RootFinding(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
