//! Closed-form placement of mix zones on a line of N intersections.
//!
//! With one zone the optimum sits at the median intersection. With MZ zones
//! the line splits into MZ contiguous groups whose sizes differ by at most
//! one, each served from its median. All averages are exact rationals so the
//! closed forms can be compared bit-for-bit against exhaustive enumeration.

use itertools::Itertools;
use num_rational::Rational64;
use num_traits::Zero;

use crate::error::{invalid, Error, Result};

/// Largest line the exhaustive oracle will enumerate.
pub const ORACLE_MAX_N: usize = 30;
/// Largest zone count the exhaustive oracle will enumerate.
pub const ORACLE_MAX_MZ: usize = 6;

/// Which closed form produced the average, keyed on C = N / MZ.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PlacementCase {
    /// MZ divides N and C is odd.
    OddBlocks,
    /// MZ divides N and C is even.
    EvenBlocks,
    /// N = MZ * C + H with 0 < H < MZ and C odd.
    OddRemainder { h: usize },
    /// N = MZ * C + H with 0 < H < MZ and C even.
    EvenRemainder { h: usize },
    /// MZ >= N: every intersection hosts a zone.
    Saturated,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LinearPlacementResult {
    /// Chosen sites, ascending. Even groups use their lower median.
    pub sites: Vec<usize>,
    /// Mean hop count from an intersection to its zone.
    pub avg_hops: Rational64,
    /// Number of intersections served by each site.
    pub group_sizes: Vec<usize>,
    /// Every optimal site within each group (two for even groups).
    pub median_choices: Vec<Vec<usize>>,
    pub case: PlacementCase,
}

impl LinearPlacementResult {
    pub fn avg_hops_f64(&self) -> f64 {
        *self.avg_hops.numer() as f64 / *self.avg_hops.denom() as f64
    }
}

fn ratio(num: usize, den: usize) -> Rational64 {
    Rational64::new(num as i64, den as i64)
}

/// Exact mean distance from each of 1..=n to its nearest site.
pub fn avg_hops_for_sites(n: usize, sites: &[usize]) -> Result<Rational64> {
    let (total, _) = assign_to_sites(n, sites)?;
    Ok(ratio(total, n))
}

// Sum of |i - site(i)| and per-site group sizes; ties go to the lower site.
fn assign_to_sites(n: usize, sites: &[usize]) -> Result<(usize, Vec<usize>)> {
    if n == 0 {
        return Err(invalid("a line needs at least one intersection"));
    }
    if sites.is_empty() {
        return Err(invalid("at least one site is required"));
    }
    if !sites.windows(2).all(|w| w[0] < w[1]) {
        return Err(invalid("sites must be strictly ascending"));
    }
    if let Some(&bad) = sites.iter().find(|&&s| s == 0 || s > n) {
        return Err(Error::UnknownIntersection(bad));
    }
    let mut sizes = vec![0; sites.len()];
    let mut total = 0;
    let mut p = 0;
    for i in 1..=n {
        while p + 1 < sites.len() && sites[p + 1].abs_diff(i) < sites[p].abs_diff(i) {
            p += 1;
        }
        total += sites[p].abs_diff(i);
        sizes[p] += 1;
    }
    Ok((total, sizes))
}

/// Case classification and closed-form optimal average for N intersections
/// and MZ zones.
pub fn closed_form_avg_hops(n: usize, mz: usize) -> Result<(PlacementCase, Rational64)> {
    if n == 0 || mz == 0 {
        return Err(invalid("N and MZ must both be at least 1"));
    }
    if mz >= n {
        return Ok((PlacementCase::Saturated, Rational64::zero()));
    }
    let h = n % mz;
    let c = n / mz;
    let out = match (h, c % 2) {
        (0, 1) => (PlacementCase::OddBlocks, ratio(mz * (c * c - 1), 4 * n)),
        (0, _) => (PlacementCase::EvenBlocks, ratio(n, 4 * mz)),
        // H groups of even size C + 1, MZ - H groups of odd size C
        (h, 1) => (
            PlacementCase::OddRemainder { h },
            ratio(h * (c + 1) * (c + 1) + (mz - h) * (c * c - 1), 4 * n),
        ),
        // H groups of odd size C + 1 and MZ - H of even size C collapse to
        // (N^2 - H^2) / (4 MZ N)
        (h, _) => (
            PlacementCase::EvenRemainder { h },
            ratio(n * n - h * h, 4 * mz * n),
        ),
    };
    Ok(out)
}

/// Optimal single zone on a line of `n` intersections.
pub fn optimal_single(n: usize) -> Result<LinearPlacementResult> {
    if n == 0 {
        return Err(invalid("N must be at least 1"));
    }
    optimal_multi(n, 1)
}

/// Optimal placement of `mz` zones on a line of `n` intersections.
pub fn optimal_multi(n: usize, mz: usize) -> Result<LinearPlacementResult> {
    let (case, avg_hops) = closed_form_avg_hops(n, mz)?;
    if case == PlacementCase::Saturated {
        return Ok(LinearPlacementResult {
            sites: (1..=n).collect(),
            avg_hops,
            group_sizes: vec![1; n],
            median_choices: (1..=n).map(|i| vec![i]).collect(),
            case,
        });
    }
    let c = n / mz;
    let h = n % mz;
    let group_sizes: Vec<usize> = (0..mz).map(|g| if g < h { c + 1 } else { c }).collect();
    let mut sites = Vec::with_capacity(mz);
    let mut median_choices = Vec::with_capacity(mz);
    let mut start = 1;
    for &size in &group_sizes {
        let choices = if size % 2 == 1 {
            vec![start + size / 2]
        } else {
            vec![start + size / 2 - 1, start + size / 2]
        };
        sites.push(choices[0]);
        median_choices.push(choices);
        start += size;
    }
    Ok(LinearPlacementResult {
        sites,
        avg_hops,
        group_sizes,
        median_choices,
        case,
    })
}

/// Exhaustive optimum: every MZ-subset of sites, each intersection served by
/// its nearest site. Limited to N <= 30 and MZ <= 6.
pub fn oracle_multi(n: usize, mz: usize) -> Result<LinearPlacementResult> {
    if n == 0 || mz == 0 {
        return Err(invalid("N and MZ must both be at least 1"));
    }
    if n > ORACLE_MAX_N || mz > ORACLE_MAX_MZ {
        return Err(Error::Oversize {
            n,
            mz,
            max_n: ORACLE_MAX_N,
            max_mz: ORACLE_MAX_MZ,
        });
    }
    let k = mz.min(n);
    let mut best: Option<(usize, Vec<usize>, Vec<usize>)> = None;
    for sites in (1..=n).combinations(k) {
        let (total, sizes) = assign_to_sites(n, &sites)?;
        if best.as_ref().is_none_or(|(t, _, _)| total < *t) {
            best = Some((total, sites, sizes));
        }
    }
    let (total, sites, group_sizes) = best.expect("at least one subset");
    let case = closed_form_avg_hops(n, mz)?.0;
    Ok(LinearPlacementResult {
        median_choices: sites.iter().map(|&s| vec![s]).collect(),
        sites,
        avg_hops: ratio(total, n),
        group_sizes,
        case,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    // direct enumeration of the single-zone average for every candidate site
    fn single_site_enumeration(n: usize) -> Vec<(usize, Rational64)> {
        (1..=n)
            .map(|site| {
                let sum: usize = (1..=n).map(|i| i.abs_diff(site)).sum();
                (site, ratio(sum, n))
            })
            .collect()
    }

    #[test]
    fn single_zone_spot_values() {
        let r = optimal_single(1).unwrap();
        assert_eq!(r.sites, vec![1]);
        assert_eq!(r.avg_hops, Rational64::zero());

        let r = optimal_single(4).unwrap();
        assert_eq!(r.sites, vec![2]);
        assert_eq!(r.median_choices, vec![vec![2, 3]]);
        assert_eq!(r.avg_hops, Rational64::from_integer(1));

        let r = optimal_single(5).unwrap();
        assert_eq!(r.sites, vec![3]);
        assert_eq!(r.avg_hops, Rational64::new(6, 5));
    }

    #[test]
    fn single_zone_matches_enumeration_and_both_parities() {
        for n in 1..=40 {
            let enumerated = single_site_enumeration(n);
            let best = enumerated.iter().map(|(_, a)| *a).min().unwrap();
            let argmins: Vec<usize> = enumerated
                .iter()
                .filter(|(_, a)| *a == best)
                .map(|(s, _)| *s)
                .collect();
            let r = optimal_single(n).unwrap();
            assert_eq!(r.avg_hops, best, "N={n}");
            assert_eq!(r.median_choices[0], argmins, "N={n}");
            let expected = if n % 2 == 0 {
                ratio(n, 4)
            } else {
                ratio(n * n - 1, 4 * n)
            };
            assert_eq!(r.avg_hops, expected);
            // ceil((N+1)/2) and floor((N+1)/2) are both optimal
            assert!(argmins.contains(&((n + 2) / 2)));
            assert!(argmins.contains(&((n + 1) / 2)));
        }
    }

    #[test]
    fn multi_zone_spot_values() {
        let r = optimal_multi(6, 2).unwrap();
        assert_eq!(r.group_sizes, vec![3, 3]);
        assert_eq!(r.sites, vec![2, 5]);
        assert_eq!(r.avg_hops, Rational64::new(2, 3));
        assert_eq!(r.case, PlacementCase::OddBlocks);

        let r = optimal_multi(8, 2).unwrap();
        assert_eq!(r.group_sizes, vec![4, 4]);
        assert_eq!(r.avg_hops, Rational64::from_integer(1));
        assert_eq!(r.case, PlacementCase::EvenBlocks);

        let r = optimal_multi(7, 2).unwrap();
        assert_eq!(r.group_sizes, vec![4, 3]);
        assert_eq!(r.avg_hops, Rational64::new(6, 7));
        assert_eq!(r.case, PlacementCase::OddRemainder { h: 1 });
        // (N^2 - H^2) / (4 MZ N) with H = 1
        assert_eq!(r.avg_hops, Rational64::new(49 - 1, 4 * 2 * 7));

        let r = optimal_multi(3, 5).unwrap();
        assert_eq!(r.avg_hops, Rational64::zero());
        assert_eq!(r.sites, vec![1, 2, 3]);
        assert_eq!(r.case, PlacementCase::Saturated);
    }

    #[test]
    fn even_remainder_case() {
        // 8 = 3 * 2 + 2
        let r = optimal_multi(8, 3).unwrap();
        assert_eq!(r.case, PlacementCase::EvenRemainder { h: 2 });
        assert_eq!(r.group_sizes, vec![3, 3, 2]);
        assert_eq!(r.avg_hops, Rational64::new(64 - 4, 4 * 3 * 8));
        assert_eq!(r.avg_hops, oracle_multi(8, 3).unwrap().avg_hops);
    }

    #[test]
    fn errors() {
        assert!(optimal_single(0).is_err());
        assert!(optimal_multi(0, 1).is_err());
        assert!(optimal_multi(4, 0).is_err());
        assert!(matches!(oracle_multi(31, 2), Err(Error::Oversize { .. })));
        assert!(matches!(oracle_multi(10, 7), Err(Error::Oversize { .. })));
    }

    #[test]
    fn oracle_examples() {
        assert_eq!(
            oracle_multi(5, 1).unwrap().avg_hops,
            optimal_single(5).unwrap().avg_hops
        );
        assert_eq!(oracle_multi(6, 2).unwrap().avg_hops, Rational64::new(2, 3));
        assert_eq!(oracle_multi(2, 2).unwrap().avg_hops, Rational64::zero());
    }

    #[test]
    fn recomputed_average_matches_closed_form() {
        for n in 1..=40 {
            for mz in 1..=8 {
                let r = optimal_multi(n, mz).unwrap();
                assert_eq!(
                    avg_hops_for_sites(n, &r.sites).unwrap(),
                    r.avg_hops,
                    "N={n} MZ={mz}"
                );
                assert_eq!(r.group_sizes.iter().sum::<usize>(), n);
                assert!(r.sites.windows(2).all(|w| w[0] < w[1]));
                // every reported alternative median is also optimal
                for (g, choices) in r.median_choices.iter().enumerate() {
                    for &alt in choices {
                        let mut sites = r.sites.clone();
                        sites[g] = alt;
                        assert_eq!(avg_hops_for_sites(n, &sites).unwrap(), r.avg_hops);
                    }
                }
            }
        }
    }

    #[test]
    fn closed_form_equals_oracle_on_small_lines() {
        for n in 1..=16 {
            for mz in 1..=4 {
                assert_eq!(
                    optimal_multi(n, mz).unwrap().avg_hops,
                    oracle_multi(n, mz).unwrap().avg_hops,
                    "N={n} MZ={mz}"
                );
            }
        }
    }

    #[test]
    fn order_n_over_mz_asymptotics() {
        for mz in 1..=5 {
            let n = mz * 2001;
            let r = optimal_multi(n, mz).unwrap();
            let scaled = r.avg_hops_f64() * mz as f64 / n as f64;
            assert!((scaled - 0.25).abs() < 1e-6, "MZ={mz}: {scaled}");
        }
    }

    proptest! {
        #[test]
        fn avg_hops_non_increasing_in_mz(n in 1usize..300, mz in 1usize..40) {
            let a = optimal_multi(n, mz).unwrap().avg_hops;
            let b = optimal_multi(n, mz + 1).unwrap().avg_hops;
            prop_assert!(b <= a);
            prop_assert_eq!(a.is_zero(), mz >= n);
        }

        #[test]
        fn single_equals_multi_with_one_zone(n in 1usize..1000) {
            prop_assert_eq!(optimal_single(n).unwrap(), optimal_multi(n, 1).unwrap());
        }
    }
}
