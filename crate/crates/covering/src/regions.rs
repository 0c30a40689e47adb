//! The six-domain covering of R^N x R^N used by the remainder
//! estimates. Membership rules, with |x|, |y| the Euclidean norms:
//!
//!   A1: |x| >  R/2,  |y| <= R/8
//!   A2: |x| <= R/8,  |y| >  R/2
//!   A3: |x| >= 2R,   R/8 < |y| < R
//!   A4: R/8 < |x| < R,    |y| >= 2R
//!   A5: R/8 < |x| < 2R,   R/8 < |y| < 2R
//!   C:  (|x| <= R/2 and |y| <= R/2) or (|x| >= R and |y| >= R)
//!
//! The union covers the whole product space; the cutoff difference
//! gamma_R(x) - gamma_R(y) vanishes identically on C.

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Region {
    A1,
    A2,
    A3,
    A4,
    A5,
    C,
}

impl Region {
    pub const ALL: [Region; 6] = [
        Region::A1,
        Region::A2,
        Region::A3,
        Region::A4,
        Region::A5,
        Region::C,
    ];
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|c| c * c).sum::<f64>().sqrt()
}

/// Membership by radii; used by both the point API and the quadrature.
pub fn region_contains_radii(region: Region, rx: f64, ry: f64, r_scale: f64) -> bool {
    let r = r_scale;
    match region {
        Region::A1 => rx > r / 2.0 && ry <= r / 8.0,
        Region::A2 => rx <= r / 8.0 && ry > r / 2.0,
        Region::A3 => rx >= 2.0 * r && ry > r / 8.0 && ry < r,
        Region::A4 => rx > r / 8.0 && rx < r && ry >= 2.0 * r,
        Region::A5 => rx > r / 8.0 && rx < 2.0 * r && ry > r / 8.0 && ry < 2.0 * r,
        Region::C => (rx <= r / 2.0 && ry <= r / 2.0) || (rx >= r && ry >= r),
    }
}

/// All regions containing the pair (x, y); never empty.
pub fn region_membership(x: &[f64], y: &[f64], r_scale: f64) -> Vec<Region> {
    let (rx, ry) = (norm(x), norm(y));
    Region::ALL
        .iter()
        .copied()
        .filter(|&reg| region_contains_radii(reg, rx, ry, r_scale))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn membership_examples() {
        // |x| > R/2, |y| <= R/8 lies in A1
        assert!(region_membership(&[8.0], &[0.5], 8.0).contains(&Region::A1));
        // both inside R/2 lies in C
        assert_eq!(region_membership(&[1.0], &[1.0], 8.0), vec![Region::C]);
        // both outside R lies in C
        assert!(region_membership(&[9.0], &[10.0], 8.0).contains(&Region::C));
    }

    #[test]
    fn covering_is_complete_on_random_pairs() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in [1usize, 2, 3] {
            for r_scale in [1.0, 8.0] {
                for _ in 0..100_000 / n {
                    // heavy-tailed radii probe all scale bands
                    let draw = |rng: &mut ChaCha8Rng| {
                        let u: f64 = rng.gen_range(-4.0..2.0);
                        10f64.powf(u) * r_scale
                    };
                    let (rx, ry) = (draw(&mut rng), draw(&mut rng));
                    let scale = |r: f64, k: usize| {
                        let mut v = vec![0.0; k];
                        v[0] = r;
                        v
                    };
                    let x = scale(rx, n);
                    let y = scale(ry, n);
                    assert!(
                        !region_membership(&x, &y, r_scale).is_empty(),
                        "uncovered pair |x|={rx} |y|={ry} R={r_scale}"
                    );
                }
            }
        }
    }

    #[test]
    fn cutoff_difference_vanishes_on_c() {
        let cf = fraclap::CutoffFamily::new(8.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut tested = 0;
        while tested < 10_000 {
            let rx = 10f64.powf(rng.gen_range(-2.0..1.5)) * 8.0;
            let ry = 10f64.powf(rng.gen_range(-2.0..1.5)) * 8.0;
            if region_contains_radii(Region::C, rx, ry, 8.0) {
                let diff = cf.eval(&[rx]) - cf.eval(&[ry]);
                assert_eq!(diff, 0.0, "gamma_R differs on C at ({rx}, {ry})");
                tested += 1;
            }
        }
    }
}
