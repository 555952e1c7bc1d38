use serde::{Deserialize, Serialize};

use super::skeleton::SkeletonGraph;
use super::ModelViolation;
use crate::error::{Error, Result};

/// Distance of r2' inside and r3 outside r2, in AB units.
pub const RAMP_HALF_WIDTH: f64 = 5.0;

/// Two radius bands must be separated by at least this gap (AB units).
pub const MIN_BAND_GAP: f64 = 3.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Radii {
    pub r1: f64,
    pub r2: f64,
    pub r2_prime: f64,
    pub r3: f64,
}

impl Radii {
    pub fn from_r1_r2(r1: f64, r2: f64) -> Self {
        Radii {
            r1,
            r2,
            r2_prime: r2 - RAMP_HALF_WIDTH,
            r3: r2 + RAMP_HALF_WIDTH,
        }
    }

    pub fn check(&self) -> std::result::Result<(), ModelViolation> {
        let ok = [self.r1, self.r2, self.r2_prime, self.r3]
            .iter()
            .all(|v| v.is_finite())
            && 0.0 < self.r1
            && self.r1 < self.r2_prime
            && self.r2_prime < self.r2
            && self.r2 < self.r3;
        if ok {
            Ok(())
        } else {
            Err(ModelViolation::RadiiOrdering {
                r1: self.r1,
                r2_prime: self.r2_prime,
                r2: self.r2,
                r3: self.r3,
            })
        }
    }
}

/// Split radii into an inner and an outer band at the widest gap and
/// return the two band means.
pub fn split_bands(radii: &[f64]) -> Result<(f64, f64)> {
    let mut r: Vec<f64> = radii.to_vec();
    r.sort_by(f64::total_cmp);
    let fail = || Error::RadiiNotIdentifiable { radii: r.clone() };
    if r.len() < 2 {
        return Err(fail());
    }
    let (cut, gap) = r
        .windows(2)
        .enumerate()
        .map(|(i, w)| (i + 1, w[1] - w[0]))
        .fold(
            (0, f64::NEG_INFINITY),
            |best, x| if x.1 > best.1 { x } else { best },
        );
    if gap < MIN_BAND_GAP {
        return Err(fail());
    }
    let mean = |s: &[f64]| s.iter().sum::<f64>() / s.len() as f64;
    Ok((mean(&r[..cut]), mean(&r[cut..])))
}

pub fn compute_radii(g: &SkeletonGraph) -> Result<Radii> {
    let (r1, r2) = split_bands(&g.junction_radii())?;
    let radii = Radii::from_r1_r2(r1, r2);
    radii.check()?;
    Ok(radii)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn two_bands() {
        let (r1, r2) = split_bands(&[24.0, 9.0, 11.0, 26.0, 10.0, 25.0]).unwrap();
        assert_abs_diff_eq!(r1, 10.0);
        assert_abs_diff_eq!(r2, 25.0);
        let r = Radii::from_r1_r2(r1, r2);
        assert_eq!((r.r2_prime, r.r3), (20.0, 30.0));
        assert!(r.check().is_ok());
    }

    #[test]
    fn single_band_fails() {
        assert!(split_bands(&[9.0, 10.0, 11.0]).is_err());
        assert!(split_bands(&[10.0]).is_err());
        match split_bands(&[]) {
            Err(Error::RadiiNotIdentifiable { radii }) => assert!(radii.is_empty()),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn ordering_is_enforced() {
        assert!(Radii::from_r1_r2(10.0, 14.0).check().is_err());
        assert!(Radii::from_r1_r2(0.0, 25.0).check().is_err());
        assert!(Radii::from_r1_r2(10.0, 15.5).check().is_ok());
    }
}
