//! Explicit points of the dual polyhedron `Y(r, 3/2)`, in exact rationals.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

type Q = BigRational;

fn q(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

fn qi(n: usize) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// A point `(x, y, z)` with multiplier `γ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessY {
    pub r: usize,
    pub gamma: Q,
    /// `x[i]` for `0 ≤ i ≤ r − 1`; `x[r − 1] = 0` and `x_{−1}` is implicitly 0.
    pub x: Vec<Q>,
    /// `y[i][j]`, meaningful for `0 ≤ i < j ≤ r`.
    pub y: Vec<Vec<Q>>,
    pub z: Q,
}

fn rows(r: usize) -> usize {
    r.div_ceil(3)
}

/// Nonnegative `y[i][j]` for `i ≤ ⌊(r+2)/3⌋` with row sums
/// `Σ_j (j−i) y_ij ≥ r − 3i/2` and column sums at most one.
fn initial_segment(r: usize) -> Vec<Vec<Q>> {
    let mut y = vec![vec![Q::zero(); r + 1]; r + 1];
    fill_segment(&mut y, r);
    y
}

/// Writes the segment for `r` into columns `≤ r`; each level of the
/// recursion only touches columns above the level it extends.
fn fill_segment(y: &mut [Vec<Q>], r: usize) {
    match r {
        2 => {
            y[0][1] = q(1, 1);
            y[0][2] = q(1, 2);
            y[1][2] = q(1, 2);
        }
        4 => {
            y[0][1] = q(1, 1);
            y[0][2] = q(1, 1);
            y[0][3] = q(1, 3);
            y[1][3] = q(2, 3);
            y[1][4] = q(7, 18);
            y[2][4] = q(1, 2);
        }
        7 => {
            // The generic extension below would load column 6 with
            // 3/5 + 3/4; row 2 is spread over columns 6 and 7 instead.
            fill_segment(y, 4);
            y[0][5] = q(3, 5);
            y[1][6] = q(3, 5);
            y[2][6] = q(9, 32);
            y[2][7] = q(3, 8);
            y[3][7] = q(5, 8);
        }
        _ if r % 3 != 1 => {
            fill_segment(y, r - 1);
            for (i, row) in y.iter_mut().enumerate().take(rows(r) + 1) {
                row[r] = Q::one() / qi(r - i);
            }
        }
        _ => {
            let s = rows(r);
            fill_segment(y, r - 3);
            let i0 = (r - 5) / 4;
            for (i, row) in y.iter_mut().enumerate().take(s) {
                if i <= i0 {
                    row[r - 2] = qi(3) / qi(r - 2 - i);
                } else {
                    row[r - 1] = qi(3) / qi(r - 1 - i);
                }
            }
            y[s][r] = Q::new(BigInt::from(3 * (r - 2)), BigInt::from(4 * (r - 1)));
        }
    }
}

/// Builds the witness for `r ≥ 2` and verifies every constraint exactly.
pub fn witness_y(r: usize) -> Result<WitnessY> {
    if r < 2 {
        return Err(Error::InvalidParams(format!("witness needs r >= 2, got {r}")));
    }
    let s = rows(r);
    let y = initial_segment(r);
    let mut x = vec![Q::zero(); r];
    for (i, xi) in x.iter_mut().enumerate().take(r - 1).skip(s + 1) {
        let k = qi(i - s);
        *xi = k.clone() * (qi(r) - q(3, 2) * qi(s) - q(3, 4) * (k + Q::one()));
    }
    let w = WitnessY { r, gamma: q(3, 2), x, y, z: q(r as i64, 2) };
    w.verify()?;
    Ok(w)
}

impl WitnessY {
    /// Checks every defining inequality; the error names the first failure.
    pub fn verify(&self) -> Result<()> {
        let r = self.r;
        let fail = |what: String| Err(Error::ConstraintViolated(what));
        for j in 1..=r {
            let col: Q = (0..j).map(|i| &self.y[i][j]).filter(|v| !v.is_zero()).sum();
            if col > Q::one() {
                return fail(format!("column sum for j = {j} is {col} > 1"));
            }
        }
        for i in 0..r {
            let weighted: Q = (i + 1..=r).filter(|&j| !self.y[i][j].is_zero()).map(|j| qi(j - i) * &self.y[i][j]).sum();
            let prev = if i == 0 { Q::zero() } else { self.x[i - 1].clone() };
            let lhs = self.z.clone() + weighted + self.x[i].clone() - prev;
            let rhs = self.gamma.clone() * qi(r - i);
            if lhs < rhs {
                return fail(format!("row constraint for i = {i}: {lhs} < {rhs}"));
            }
        }
        if self.z > qi(r) * (self.gamma.clone() - Q::one()) {
            return fail(format!("z = {} exceeds r(γ−1)", self.z));
        }
        if !self.x[r - 1].is_zero() {
            return fail("boundary x_{r-1} is nonzero".into());
        }
        if self.z.is_negative() {
            return fail("z is negative".into());
        }
        if let Some(i) = self.x.iter().position(Signed::is_negative) {
            return fail(format!("x_{i} is negative"));
        }
        for i in 0..=r {
            for j in i + 1..=r {
                if self.y[i][j].is_negative() {
                    return fail(format!("y_{i}{j} is negative"));
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn base_case_two() {
        let w = witness_y(2).unwrap();
        assert_eq!(w.y[0][1], q(1, 1));
        assert_eq!(w.y[0][2], q(1, 2));
        assert_eq!(w.y[1][2], q(1, 2));
        assert_eq!(w.z, q(1, 1));
    }

    #[test]
    fn base_case_four() {
        let w = witness_y(4).unwrap();
        assert_eq!(w.y[1][4], q(7, 18));
        assert_eq!(w.y[2][4], q(1, 2));
        assert_eq!(w.y[1][2], Q::zero());
        assert_eq!(w.y[0][4], Q::zero());
    }

    #[test]
    fn last_x_matches_closed_form() {
        for r in 5..40usize {
            let w = witness_y(r).unwrap();
            let expect = match r % 3 {
                0 => q(r as i64, 2) - q(3, 2),
                1 => q(r as i64, 6) - q(2, 3),
                _ => q(r as i64, 3) - q(7, 6),
            };
            assert_eq!(w.x[r - 2], expect, "r = {r}");
        }
    }

    #[test]
    fn tampering_is_detected() {
        let mut w = witness_y(6).unwrap();
        w.z = q(4, 1);
        assert!(matches!(w.verify(), Err(Error::ConstraintViolated(_))));
        let mut w = witness_y(6).unwrap();
        w.y[0][1] = q(2, 1);
        assert!(w.verify().is_err());
    }

    #[test]
    fn generic_extension_fails_at_seven() {
        // Column 6 under the unadjusted recipe: rows 1 and 2 each put 3/(6 - i) there.
        let col: Q = (1..=2).map(|i| qi(3) / qi(6 - i)).sum();
        assert!(col > Q::one());
        let w = witness_y(7).unwrap();
        let fixed: Q = (0..6).map(|i| w.y[i][6].clone()).sum();
        assert!(fixed <= Q::one());
    }

    #[test]
    fn small_r_rejected() {
        assert!(witness_y(1).is_err());
    }
}
