use serde::Serialize;

use super::{omega_loc_torsion, ComputeOptions, InvariantReport, Verdict};
use crate::biquadratic::is_squarefree;
use crate::error::{Error, Result};

/// How a sweep distributes its fields. Without the `parallel` feature both
/// variants run on the calling thread.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Execution {
    #[default]
    Parallel,
    Sequential,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SweepSummary {
    pub dmax: i64,
    pub fields: usize,
    pub vanishes: usize,
    pub nonzero: usize,
    pub inadmissible: usize,
    pub nonzero_fields: Vec<(i64, i64)>,
    pub inadmissible_fields: Vec<(i64, i64)>,
}

/// All `(d1, d2)` with `1 < d1 < d2 <= dmax`, both squarefree.
pub fn squarefree_pairs(dmax: i64) -> Vec<(i64, i64)> {
    let ds: Vec<i64> = (2..=dmax).filter(|&d| is_squarefree(d)).collect();
    ds.iter()
        .enumerate()
        .flat_map(|(i, &d1)| ds[i + 1..].iter().map(move |&d2| (d1, d2)))
        .collect()
}

fn run(
    pairs: &[(i64, i64)],
    opts: &ComputeOptions,
    exec: Execution,
) -> Result<Vec<InvariantReport>> {
    let one = |&(d1, d2): &(i64, i64)| omega_loc_torsion(d1, d2, opts);
    match exec {
        #[cfg(feature = "parallel")]
        Execution::Parallel => {
            use rayon::prelude::*;
            pairs.par_iter().map(one).collect()
        }
        _ => pairs.iter().map(one).collect(),
    }
}

/// Full reports for every pair, in pair order.
pub fn sweep_reports(
    dmax: i64,
    opts: &ComputeOptions,
    exec: Execution,
) -> Result<Vec<InvariantReport>> {
    if dmax < 3 {
        return Err(Error::InvalidInput(format!(
            "sweep bound {dmax} is below 3"
        )));
    }
    run(&squarefree_pairs(dmax), opts, exec)
}

pub fn sweep(dmax: i64, opts: &ComputeOptions, exec: Execution) -> Result<SweepSummary> {
    let reports = sweep_reports(dmax, opts, exec)?;
    let mut s = SweepSummary {
        dmax,
        fields: reports.len(),
        ..Default::default()
    };
    for r in &reports {
        let pair = (r.field.d1, r.field.d2);
        match r.verdict {
            Verdict::Vanishes => s.vanishes += 1,
            Verdict::Nonzero => {
                s.nonzero += 1;
                s.nonzero_fields.push(pair);
            }
            Verdict::Inadmissible => {
                s.inadmissible += 1;
                s.inadmissible_fields.push(pair);
            }
        }
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pairs() {
        assert_eq!(squarefree_pairs(5), vec![(2, 3), (2, 5), (3, 5)]);
        assert_eq!(squarefree_pairs(100).len(), 1770);
    }

    /// Odd primes `p` ramified in `E` and inert in its subfield unramified at `p`.
    fn full_odd_primes(d1: i64, d2: i64) -> usize {
        let f = crate::biquadratic::field_data(d1, d2, false).unwrap();
        crate::biquadratic::ramified_set(&f)
            .into_iter()
            .filter(|&p| p != 2)
            .filter(|&p| {
                f.subfield_discs
                    .iter()
                    .any(|&d| d % p as i64 != 0 && crate::biquadratic::kronecker(d, p) == -1)
            })
            .count()
    }

    #[test]
    fn small_sweeps() {
        let s = sweep(20, &ComputeOptions::default(), Execution::Parallel).unwrap();
        assert_eq!(s.fields, s.vanishes + s.nonzero + s.inadmissible);
        // the torsion is the sign of the local terms, one factor -1 per full prime
        let odd: Vec<(i64, i64)> = squarefree_pairs(20)
            .into_iter()
            .filter(|p| !s.inadmissible_fields.contains(p) && full_odd_primes(p.0, p.1) % 2 == 1)
            .collect();
        assert_eq!(s.nonzero_fields, odd);
        assert_eq!(s.nonzero_fields, vec![(3, 11), (3, 19), (7, 15), (11, 19)]);
        let s5 = sweep(5, &ComputeOptions::default(), Execution::Sequential).unwrap();
        assert!(s5.inadmissible_fields.contains(&(2, 5)));
        assert!(sweep(2, &ComputeOptions::default(), Execution::Sequential).is_err());
    }

    #[test]
    fn parallel_and_sequential_agree() {
        let opts = ComputeOptions::default();
        assert_eq!(
            sweep_reports(20, &opts, Execution::Parallel).unwrap(),
            sweep_reports(20, &opts, Execution::Sequential).unwrap()
        );
    }

    #[test]
    fn enlarging_s_by_three() {
        let base = sweep_reports(20, &ComputeOptions::default(), Execution::Parallel).unwrap();
        for r in base {
            if r.s_f.contains(&3) {
                continue;
            }
            let opts = ComputeOptions {
                extra_s: vec![3],
                ..Default::default()
            };
            let e = omega_loc_torsion(r.field.d1, r.field.d2, &opts).unwrap();
            assert_eq!((e.torsion, e.verdict), (r.torsion, r.verdict));
        }
    }
}
