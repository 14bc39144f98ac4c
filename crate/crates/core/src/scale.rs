//! Ordinal rating scales.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An ordinal scale `1..=m` with an indifference point and the fuzzy
/// thresholds used by the membership functions.
///
/// Categories at or below `lower` are negative choices; categories at or
/// above `upper` receive crisp membership.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RatingScale {
    categories: u32,
    indifference: u32,
    lower: u32,
    upper: u32,
}

impl RatingScale {
    /// Scale with `m` categories and the default bounds: `lower = i_p - 1`
    /// and `upper = m`, where `i_p = (m + 1) / 2`.
    pub fn new(m: u32) -> Result<Self> {
        if m <= 3 {
            return Err(Error::Domain(format!(
                "a CUB scale needs more than 3 categories, got {m}"
            )));
        }
        let ip = m.div_ceil(2);
        Self::with_bounds(m, ip - 1, m)
    }

    /// Scale with explicit bounds. The indifference point is the middle category.
    pub fn with_bounds(m: u32, lower: u32, upper: u32) -> Result<Self> {
        let ip = m.div_ceil(2);
        Self::with_indifference(m, ip, lower, upper)
    }

    pub fn with_indifference(m: u32, indifference: u32, lower: u32, upper: u32) -> Result<Self> {
        if m <= 3 {
            return Err(Error::Domain(format!(
                "a CUB scale needs more than 3 categories, got {m}"
            )));
        }
        if !(1 <= lower && lower < indifference && indifference < upper && upper <= m) {
            return Err(Error::Domain(format!(
                "scale bounds must satisfy 1 <= l_b < i_p < u_b <= m, got l_b={lower}, i_p={indifference}, u_b={upper}, m={m}"
            )));
        }
        Ok(Self {
            categories: m,
            indifference,
            lower,
            upper,
        })
    }

    pub fn categories(&self) -> u32 {
        self.categories
    }

    pub fn indifference(&self) -> u32 {
        self.indifference
    }

    pub fn lower(&self) -> u32 {
        self.lower
    }

    pub fn upper(&self) -> u32 {
        self.upper
    }

    pub fn len(&self) -> usize {
        self.categories as usize
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, rating: u32) -> bool {
        (1..=self.categories).contains(&rating)
    }

    /// Checks the extra constraints of the CUB-adjusted fuzzy functions:
    /// an odd scale of at least 5 categories, the indifference point in the
    /// middle and the negative block ending just below it.
    pub fn check_symmetric(&self) -> Result<()> {
        let m = self.categories;
        if m < 5 || m.is_multiple_of(2) {
            return Err(Error::Domain(format!(
                "fuzzy CUB profiles need an odd scale with at least 5 categories, got m={m}"
            )));
        }
        if self.indifference != m.div_ceil(2) {
            return Err(Error::Domain(format!(
                "indifference point must be the mid category {}, got {}",
                m.div_ceil(2),
                self.indifference
            )));
        }
        if self.lower + 1 != self.indifference {
            return Err(Error::Domain(format!(
                "l_b must equal i_p - 1 = {}, got {}",
                self.indifference - 1,
                self.lower
            )));
        }
        Ok(())
    }
}
