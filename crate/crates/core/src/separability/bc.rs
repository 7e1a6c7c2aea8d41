//! Exhaustive `(b,c)`-separability oracle.
//!
//! `P` and `Q` are `(b,c)`-separable when `P` can be split into at most `b`
//! groups and `Q` into at most `c` groups such that every group of `P` is
//! strictly linearly separable from every group of `Q`. The roles of `b` and
//! `c` are interchangeable, so both assignments are tried.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::Tolerances;

use super::linear::strictly_separable;
use super::require_nonempty;

pub const DEFAULT_BRUTE_FORCE_CAP: usize = 14;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BcCover {
    pub groups_p: Vec<Vec<usize>>,
    pub groups_q: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BcOutcome {
    pub separable: bool,
    pub cover: Option<BcCover>,
}

struct Oracle<'a> {
    p: &'a [Vec<f64>],
    q: &'a [Vec<f64>],
    tol: &'a Tolerances,
    cache: HashMap<(u64, u64), bool>,
}

impl Oracle<'_> {
    fn separated(&mut self, mp: u64, mq: u64) -> Result<bool> {
        if let Some(&v) = self.cache.get(&(mp, mq)) {
            return Ok(v);
        }
        let pick = |pts: &[Vec<f64>], m: u64| -> Vec<Vec<f64>> {
            (0..pts.len()).filter(|&i| m >> i & 1 == 1).map(|i| pts[i].clone()).collect()
        };
        let v = strictly_separable(&pick(self.p, mp), &pick(self.q, mq), self.tol)?;
        self.cache.insert((mp, mq), v);
        Ok(v)
    }
}

/// Role: which original set is partitioned first (into `outer_parts`).
struct Search<'o, 'a> {
    oracle: &'o mut Oracle<'a>,
    p_outer: bool,
    n_outer: usize,
    n_inner: usize,
    outer_parts: usize,
    inner_parts: usize,
}

impl Search<'_, '_> {
    fn sep(&mut self, outer: u64, inner: u64) -> Result<bool> {
        if self.p_outer {
            self.oracle.separated(outer, inner)
        } else {
            self.oracle.separated(inner, outer)
        }
    }

    fn outer(&mut self, i: usize, parts: &mut Vec<u64>) -> Result<Option<(Vec<u64>, Vec<u64>)>> {
        if i == self.n_outer {
            let mut inner = Vec::new();
            if self.inner(0, parts, &mut inner)? {
                return Ok(Some((parts.clone(), inner)));
            }
            return Ok(None);
        }
        for t in 0..=parts.len() {
            let fresh = t == parts.len();
            if fresh {
                if parts.len() == self.outer_parts {
                    break;
                }
                parts.push(1 << i);
            } else {
                parts[t] |= 1 << i;
            }
            if let Some(found) = self.outer(i + 1, parts)? {
                return Ok(Some(found));
            }
            if fresh {
                parts.pop();
            } else {
                parts[t] &= !(1 << i);
            }
        }
        Ok(None)
    }

    fn inner(&mut self, j: usize, outer: &[u64], parts: &mut Vec<u64>) -> Result<bool> {
        if j == self.n_inner {
            return Ok(true);
        }
        for t in 0..=parts.len() {
            let fresh = t == parts.len();
            if fresh && parts.len() == self.inner_parts {
                break;
            }
            let candidate = if fresh { 1 << j } else { parts[t] | 1 << j };
            let mut ok = true;
            for &o in outer {
                if !self.sep(o, candidate)? {
                    ok = false;
                    break;
                }
            }
            if !ok {
                continue;
            }
            let saved = if fresh {
                parts.push(candidate);
                None
            } else {
                Some(std::mem::replace(&mut parts[t], candidate))
            };
            if self.inner(j + 1, outer, parts)? {
                return Ok(true);
            }
            match saved {
                None => {
                    parts.pop();
                }
                Some(old) => parts[t] = old,
            }
        }
        Ok(false)
    }
}

fn to_groups(masks: &[u64], n: usize) -> Vec<Vec<usize>> {
    masks
        .iter()
        .map(|&m| (0..n).filter(|&i| m >> i & 1 == 1).collect())
        .collect()
}

/// Exhaustive search for a `(b,c)` cover. The first cover in lexicographic
/// order of the partition encodings is returned, trying `P` into `b` parts
/// before `P` into `c` parts.
pub fn bc_separable_bruteforce(
    p: &[Vec<f64>],
    q: &[Vec<f64>],
    b: usize,
    c: usize,
    cap: usize,
    tol: &Tolerances,
) -> Result<BcOutcome> {
    require_nonempty(p, q)?;
    if b == 0 || c == 0 {
        return Err(Error::BadParams("b and c must be positive".into()));
    }
    let total = p.len() + q.len();
    if total > cap || p.len() > 63 || q.len() > 63 {
        return Err(Error::TooLarge { points: total, cap });
    }
    let mut oracle = Oracle {
        p,
        q,
        tol,
        cache: HashMap::new(),
    };
    let mut roles = vec![(b, c)];
    if b != c {
        roles.push((c, b));
    }
    for (bp, cq) in roles {
        // Partition the smaller-part side first: it has fewer outer
        // partitions, and the inner search prunes incrementally.
        let p_outer = bp <= cq;
        let mut search = Search {
            oracle: &mut oracle,
            p_outer,
            n_outer: if p_outer { p.len() } else { q.len() },
            n_inner: if p_outer { q.len() } else { p.len() },
            outer_parts: if p_outer { bp } else { cq },
            inner_parts: if p_outer { cq } else { bp },
        };
        if let Some((outer, inner)) = search.outer(0, &mut Vec::new())? {
            let (mp, mq) = if p_outer { (outer, inner) } else { (inner, outer) };
            return Ok(BcOutcome {
                separable: true,
                cover: Some(BcCover {
                    groups_p: to_groups(&mp, p.len()),
                    groups_q: to_groups(&mq, q.len()),
                }),
            });
        }
    }
    Ok(BcOutcome {
        separable: false,
        cover: None,
    })
}

/// Re-checks a cover: groups partition the index sets, sizes are within
/// `(b,c)` in one of the two role assignments, and every cross pair is
/// strictly separable.
pub fn validate_cover(
    p: &[Vec<f64>],
    q: &[Vec<f64>],
    b: usize,
    c: usize,
    cover: &BcCover,
    tol: &Tolerances,
) -> Result<()> {
    let covers = |groups: &[Vec<usize>], n: usize| {
        let mut seen = vec![false; n];
        for g in groups {
            for &i in g {
                if i >= n || seen[i] {
                    return false;
                }
                seen[i] = true;
            }
        }
        seen.into_iter().all(|s| s)
    };
    if !covers(&cover.groups_p, p.len()) || !covers(&cover.groups_q, q.len()) {
        return Err(Error::InvalidCertificate("groups do not partition the sets".into()));
    }
    let (gp, gq) = (cover.groups_p.len(), cover.groups_q.len());
    if !(gp <= b && gq <= c || gp <= c && gq <= b) {
        return Err(Error::InvalidCertificate("too many groups".into()));
    }
    for g in &cover.groups_p {
        let sp: Vec<Vec<f64>> = g.iter().map(|&i| p[i].clone()).collect();
        for h in &cover.groups_q {
            let sq: Vec<Vec<f64>> = h.iter().map(|&j| q[j].clone()).collect();
            if !strictly_separable(&sp, &sq, tol)? {
                return Err(Error::InvalidCertificate("a cross pair is not separable".into()));
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    #[test]
    fn one_one_is_linear_separability() {
        let p = vec![vec![0.0, 0.0], vec![1.0, 0.0]];
        let q = vec![vec![0.0, 2.0], vec![1.0, 2.0]];
        let r = bc_separable_bruteforce(&p, &q, 1, 1, 14, &tol()).unwrap();
        assert!(r.separable);
        let cover = r.cover.unwrap();
        assert_eq!(cover.groups_p, vec![vec![0, 1]]);
        validate_cover(&p, &q, 1, 1, &cover, &tol()).unwrap();
    }

    #[test]
    fn interleaved_line_needs_two_groups() {
        // P at both ends of a segment, Q in the middle.
        let p = vec![vec![0.0, 0.0], vec![4.0, 0.1]];
        let q = vec![vec![2.0, 0.05], vec![2.0, -1.0], vec![2.0, 1.0]];
        assert!(!bc_separable_bruteforce(&p, &q, 1, 1, 14, &tol()).unwrap().separable);
        let r = bc_separable_bruteforce(&p, &q, 1, 2, 14, &tol()).unwrap();
        assert!(r.separable);
        validate_cover(&p, &q, 1, 2, r.cover.as_ref().unwrap(), &tol()).unwrap();
    }

    #[test]
    fn cap_is_enforced() {
        let p = vec![vec![0.0]; 10];
        let q = vec![vec![1.0]; 10];
        assert_eq!(
            bc_separable_bruteforce(&p, &q, 1, 2, 14, &tol()),
            Err(Error::TooLarge { points: 20, cap: 14 })
        );
    }
}
