use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::pools::{exhaustive_group_pool, monomial_series_pool, sample_p_k};
use crate::chain::{enumerate_final_segments, ChainDescriptor, ChainShift, ChainValue};
use crate::field::{in_natural_ring, AutomorphismTower, ConvexValuation, HahnSeries};
use crate::group::{convex_subgroup_member, HahnGroupElement};
use crate::rank::{ring_from_initial_segment, InitialSegment, Relation, SegmentRing};
use crate::rational::{int, rat, Rational};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

/// One checked property.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OracleLine {
    pub case_id: String,
    pub property: String,
    pub status: Status,
    pub witness: Option<String>,
}

/// The outcome of an oracle suite, in deterministic order.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct OracleReport {
    lines: Vec<OracleLine>,
}

impl OracleReport {
    pub fn lines(&self) -> &[OracleLine] {
        &self.lines
    }

    pub fn passed(&self) -> bool {
        self.lines.iter().all(|l| l.status != Status::Fail)
    }

    pub fn failures(&self) -> impl Iterator<Item = &OracleLine> {
        self.lines.iter().filter(|l| l.status == Status::Fail)
    }

    pub fn extend(&mut self, other: OracleReport) {
        self.lines.extend(other.lines);
    }

    /// One JSON object per line.
    pub fn to_json_lines(&self) -> String {
        self.lines
            .iter()
            .map(|l| serde_json::to_string(l).expect("report lines serialize") + "\n")
            .collect()
    }
}

impl fmt::Display for OracleReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let fails = self.failures().count();
        write!(f, "{} checks, {} failed", self.lines.len(), fails)
    }
}

struct Recorder {
    case_id: String,
    lines: Vec<OracleLine>,
}

impl Recorder {
    fn new(case_id: impl Into<String>) -> Self {
        Recorder {
            case_id: case_id.into(),
            lines: Vec::new(),
        }
    }

    fn record(&mut self, property: impl Into<String>, failure: Option<String>) {
        self.lines.push(OracleLine {
            case_id: self.case_id.clone(),
            property: property.into(),
            status: if failure.is_some() { Status::Fail } else { Status::Pass },
            witness: failure,
        });
    }

    fn skip(&mut self, property: impl Into<String>, note: impl Into<String>) {
        self.lines.push(OracleLine {
            case_id: self.case_id.clone(),
            property: property.into(),
            status: Status::Skipped,
            witness: Some(note.into()),
        });
    }

    fn finish(self) -> OracleReport {
        OracleReport { lines: self.lines }
    }
}

fn first_failure<T>(items: impl IntoIterator<Item = T>, mut bad: impl FnMut(&T) -> Result<Option<String>>) -> Result<Option<String>> {
    for item in items {
        if let Some(w) = bad(&item)? {
            return Ok(Some(w));
        }
    }
    Ok(None)
}

/// Strict inclusion of membership tables over a common pool.
fn strictly_below(small: &[bool], large: &[bool]) -> bool {
    small.iter().zip(large).all(|(s, l)| !s || *l) && small != large
}

/// Checks, on `Finite(n)`, that final segments, convex subgroups and convex
/// valuation rings correspond bijectively and order-preservingly, and that
/// principal segments reverse the chain.
///
/// Subgroups are tabulated over the exhaustive group pool and rings over the
/// monomial series pool. Each table is compared against an independent
/// description: the subgroup generated by `1_γ`, `{g : |g| ≤ N·1_γ}`, and
/// the ring generated by `t^(-1_γ)`, `{a : |a| ≤ t^(-N·1_γ)}`, where `γ` is
/// the segment's minimum and `N ≤ 4` suffices on the pools.
pub fn oracle_verify_rank_correspondences(n: usize) -> Result<OracleReport> {
    if n == 0 {
        return Err(Error::DomainMismatch("the chain size must be positive".into()));
    }
    if n > 8 {
        return Err(Error::PoolTooLarge(n));
    }
    let chain = Arc::new(ChainDescriptor::Finite(n));
    let mut rec = Recorder::new(format!("correspondences/n={n}"));

    let segments = enumerate_final_segments(&chain)?;
    rec.record(
        "segment-count",
        (segments.len() != n).then(|| format!("{} segments", segments.len())),
    );
    let upward_closed = (1u32..(1 << n))
        .filter(|mask| (0..n).all(|i| mask & (1 << i) == 0 || (i..n).all(|j| mask & (1 << j) != 0)))
        .count();
    rec.record(
        "segments-exhaustive",
        (upward_closed != segments.len()).then(|| format!("{upward_closed} non-empty final segments by brute force")),
    );
    let nested = first_failure(segments.windows(2), |w| {
        let ok = w[0].is_subset_of(&w[1], &chain)? && !w[1].is_subset_of(&w[0], &chain)?;
        Ok((!ok).then(|| format!("{} ⊄ {}", w[0], w[1])))
    })?;
    rec.record("segments-increasing", nested);

    let minima: Vec<ChainValue> = segments
        .iter()
        .map(|s| s.minimum().cloned().expect("finite segments are principal"))
        .collect();

    let pool = exhaustive_group_pool(n);
    let subgroup_tables: Vec<Vec<bool>> = segments
        .par_iter()
        .map(|s| pool.iter().map(|g| convex_subgroup_member(s, g)).collect::<Result<Vec<_>>>())
        .collect::<Result<_>>()?;
    let generated_tables: Vec<Vec<bool>> = minima
        .par_iter()
        .map(|gamma| {
            let unit = HahnGroupElement::monomial(&chain, gamma.clone(), int(1))?;
            let bounds: Vec<_> = (1..=4).map(|k| unit.scale(&int(k))).collect();
            pool.iter()
                .map(|g| {
                    let a = g.abs();
                    first_failure(&bounds, |b| Ok((a.compare(b)? != Ordering::Greater).then(String::new)))
                        .map(|hit| hit.is_some())
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    let mismatch = (0..n).find_map(|i| {
        let j = (0..pool.len()).find(|&j| subgroup_tables[i][j] != generated_tables[i][j])?;
        Some(format!("{} at {}", pool[j], segments[i]))
    });
    rec.record("subgroup-is-generated-by-minimum", mismatch);

    let stride = (pool.len() / 1500).max(1);
    let probes: Vec<&HahnGroupElement> = pool.iter().step_by(stride).collect();
    let generators: Vec<HahnGroupElement> = pool.iter().filter(|g| g.terms().len() == 1).cloned().collect();
    let closure: Vec<Option<String>> = segments
        .par_iter()
        .map(|s| -> Result<_> {
            let member = |g: &HahnGroupElement| convex_subgroup_member(s, g);
            first_failure(&probes, |g| {
                if !member(g)? {
                    return Ok(None);
                }
                if !member(&g.neg())? {
                    return Ok(Some(format!("-({g}) outside {s}")));
                }
                first_failure(&generators, |h| {
                    Ok((member(h)? && !member(&g.add(h)?)?).then(|| format!("({g}) + ({h}) outside {s}")))
                })
            })
        })
        .collect::<Result<_>>()?;
    rec.record("subgroup-closed", closure.into_iter().flatten().next());

    // convexity: ordered by absolute value, each table is a prefix of the pool
    let abs: Vec<HahnGroupElement> = pool.iter().map(HahnGroupElement::abs).collect();
    let mut by_size: Vec<usize> = (0..pool.len()).collect();
    let mut failure = None;
    by_size.sort_by(|&i, &j| {
        abs[i].compare(&abs[j]).unwrap_or_else(|e| {
            failure.get_or_insert(e);
            Ordering::Equal
        })
    });
    if let Some(e) = failure {
        return Err(e);
    }
    let convex = (0..n).find_map(|i| {
        let w = by_size.windows(2).find(|w| !subgroup_tables[i][w[0]] && subgroup_tables[i][w[1]])?;
        Some(format!("|{}| ≤ |{}| but only the latter is in the subgroup of {}", pool[w[0]], pool[w[1]], segments[i]))
    });
    rec.record("subgroup-convex", convex);

    let distinct = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).find(|&(i, j)| subgroup_tables[i] == subgroup_tables[j]);
    rec.record(
        "subgroups-distinct",
        distinct.map(|(i, j)| format!("{} and {} give the same subgroup", segments[i], segments[j])),
    );
    let order = (1..n).find(|&i| !strictly_below(&subgroup_tables[i - 1], &subgroup_tables[i]));
    rec.record(
        "subgroups-order-preserving",
        order.map(|i| format!("subgroup of {} not inside that of {}", segments[i - 1], segments[i])),
    );

    let ring_pool = monomial_series_pool(n);
    let valuations: Vec<ConvexValuation> = segments.iter().map(|s| ConvexValuation::new(&chain, s.clone())).collect();
    let ring_tables: Vec<Vec<bool>> = valuations
        .par_iter()
        .map(|w| ring_pool.iter().map(|a| w.in_ring(a)).collect::<Result<Vec<_>>>())
        .collect::<Result<_>>()?;
    let ring_generated: Vec<Vec<bool>> = minima
        .iter()
        .map(|gamma| {
            let unit = HahnGroupElement::monomial(&chain, gamma.clone(), int(-1))?;
            let bounds: Vec<_> = (1..=4).map(|k| HahnSeries::monomial(unit.scale(&int(k)), int(1))).collect();
            ring_pool
                .iter()
                .map(|a| {
                    let x = a.abs();
                    first_failure(&bounds, |b| Ok((x.compare(b)? != Ordering::Greater).then(String::new)))
                        .map(|hit| hit.is_some())
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    let mismatch = (0..n).find_map(|i| {
        let j = (0..ring_pool.len()).find(|&j| ring_tables[i][j] != ring_generated[i][j])?;
        Some(format!("{} at {}", ring_pool[j], segments[i]))
    });
    rec.record("ring-is-generated-by-minimum", mismatch);

    let closure = valuations
        .par_iter()
        .map(|w| -> Result<Option<String>> {
            first_failure(&ring_pool, |a| {
                if !w.in_ring(a)? {
                    return Ok(None);
                }
                first_failure(&ring_pool, |b| {
                    if !w.in_ring(b)? {
                        return Ok(None);
                    }
                    let ok = w.in_ring(&a.add(b)?)? && w.in_ring(&a.mul(b)?)?;
                    Ok((!ok).then(|| format!("{a} and {b} in {w}")))
                })
            })
        })
        .collect::<Result<Vec<_>>>()?;
    rec.record("ring-closed", closure.into_iter().flatten().next());

    let natural = first_failure(valuations.iter().zip(&ring_tables), |(w, table)| {
        first_failure(ring_pool.iter().zip(table.iter()), |(a, inside)| {
            Ok((in_natural_ring(a)? && !**inside).then(|| format!("{a} outside {w}")))
        })
    })?;
    rec.record("ring-contains-natural-ring", natural);

    let distinct = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).find(|&(i, j)| ring_tables[i] == ring_tables[j]);
    rec.record(
        "rings-distinct",
        distinct.map(|(i, j)| format!("{} and {} give the same ring", segments[i], segments[j])),
    );
    let order = (1..n).find(|&i| !strictly_below(&ring_tables[i - 1], &ring_tables[i]));
    rec.record(
        "rings-order-preserving",
        order.map(|i| format!("ring of {} not inside that of {}", segments[i - 1], segments[i])),
    );

    let reversal = first_failure((0..n).flat_map(|i| (0..n).map(move |j| (i, j))), |&(i, j)| {
        let inclusion = segments[i].is_subset_of(&segments[j], &chain)?;
        let reversed = chain.compare(&minima[i], &minima[j])? != Ordering::Less;
        Ok((inclusion != reversed).then(|| format!("{} vs {}", segments[i], segments[j])))
    })?;
    rec.record("principal-reversal", reversal);
    let bijective = {
        let mut seen = minima.clone();
        seen.sort_by(|a, b| chain.compare(a, b).unwrap_or(Ordering::Equal));
        seen.dedup();
        seen.len() == n
    };
    rec.record("principal-bijective", (!bijective).then(|| "repeated minimum".to_string()));

    Ok(rec.finish())
}

/// Which equivalence on positive infinite elements an initial-segment check
/// uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RelationKind {
    Mult,
    Sigma,
}

impl fmt::Display for RelationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RelationKind::Mult => write!(f, "mult"),
            RelationKind::Sigma => write!(f, "sigma"),
        }
    }
}

fn probe(chain: &Arc<ChainDescriptor>, gamma: &ChainValue, e: Rational, c: i64) -> Result<HahnSeries> {
    Ok(HahnSeries::monomial(HahnGroupElement::monomial(chain, gamma.clone(), e)?, int(c)))
}

/// Test elements: monomials at the class representatives, at their images
/// under the shift and its inverse, and at sampled points, together with
/// constants and sampled positive infinite series; closed under negation.
fn test_pool(chain: &Arc<ChainDescriptor>, shift: &ChainShift, reps: &[ChainValue], seed: u64) -> Result<Vec<HahnSeries>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut points: Vec<ChainValue> = reps.to_vec();
    let inverse = shift.inverse().ok();
    for r in reps {
        let mut fwd = r.clone();
        let mut back = r.clone();
        for _ in 0..2 {
            fwd = shift.apply(&fwd)?;
            points.push(fwd.clone());
            if let Some(inv) = &inverse {
                back = inv.apply(&back)?;
                points.push(back.clone());
            }
        }
    }
    points.extend((0..6).map(|_| chain.sample(&mut rng)));
    points.sort_by(|a, b| chain.compare(a, b).unwrap_or(Ordering::Equal));
    points.dedup();

    let mut pool = vec![HahnSeries::one(chain), HahnSeries::constant(chain, int(5))];
    for gamma in &points {
        for e in [int(-2), int(-1), rat(-1, 2), int(1)] {
            pool.push(probe(chain, gamma, e, 1)?);
        }
    }
    for _ in 0..8 {
        pool.push(sample_p_k(chain, &mut rng, 3));
    }
    let negatives: Vec<HahnSeries> = pool.iter().map(HahnSeries::neg).collect();
    pool.extend(negatives);
    Ok(pool)
}

/// Checks the correspondence between initial segments of the classes of
/// positive infinite elements and convex rings strictly containing the
/// natural valuation ring.
///
/// For `Mult` the classes correspond to the points of the chain, which must
/// be finite; for `Sigma` they correspond to the classes of `shift`, whose
/// lifted automorphism must have proven square growth. At most six classes
/// are supported.
pub fn oracle_verify_theorem3(shift: &ChainShift, relation: RelationKind, cap: u32) -> Result<OracleReport> {
    let chain = Arc::new(shift.chain().clone());
    let (relation_value, reps, tower) = match relation {
        RelationKind::Mult => {
            let reps = chain.elements().ok_or_else(|| Error::NotFinite(chain.to_string()))?;
            (Relation::Mult, reps, None)
        }
        RelationKind::Sigma => {
            let tower = AutomorphismTower::from_chain_shift(shift)?;
            let growth = tower.square_growth()?;
            if !growth.is_proven() {
                return Err(Error::HypothesisNotProven(format!("square growth is {growth}")));
            }
            let reps = shift
                .class_representatives()
                .ok_or_else(|| Error::NoCanonicalQuotient(format!("{} under {}", chain, shift.map())))?;
            (Relation::Sigma(tower.clone()), reps, Some(tower))
        }
    };
    if reps.len() > 6 {
        return Err(Error::QuotientTooLarge(reps.len()));
    }
    let case_id = format!("theorem3/{relation}/{chain}/{}", shift.map());

    // increasing classes of positive infinite elements: larger chain points
    // give smaller elements
    let classes: Vec<HahnSeries> = reps
        .iter()
        .rev()
        .map(|g| probe(&chain, g, int(-1), 1))
        .collect::<Result<_>>()?;
    let pool = test_pool(&chain, shift, &reps, 0x7e0 + reps.len() as u64)?;

    let rings: Vec<SegmentRing> = (1..=classes.len())
        .map(|k| {
            let segment = InitialSegment {
                representatives: classes[..k].to_vec(),
                has_last: true,
            };
            ring_from_initial_segment(&chain, relation_value.clone(), &segment, cap)
        })
        .collect::<Result<_>>()?;
    let memberships: Vec<Vec<bool>> = rings
        .par_iter()
        .map(|ring| pool.iter().map(|a| ring.contains(a)).collect::<Result<Vec<_>>>())
        .collect::<Result<_>>()?;

    let mut head = Recorder::new(case_id.clone());
    head.skip("empty-initial-segment", "corresponds to the natural valuation ring");
    let mut report = head.finish();

    let per_segment: Vec<OracleReport> = (0..rings.len())
        .into_par_iter()
        .map(|i| {
            check_segment_ring(
                &format!("{case_id}/segment={}", i + 1),
                &chain,
                &rings,
                &memberships,
                i,
                &classes,
                &pool,
                tower.as_ref(),
                &relation_value,
                cap,
            )
        })
        .collect::<Result<_>>()?;
    for r in per_segment {
        report.extend(r);
    }
    Ok(report)
}

#[allow(clippy::too_many_arguments)]
fn check_segment_ring(
    case_id: &str,
    chain: &Arc<ChainDescriptor>,
    rings: &[SegmentRing],
    memberships: &[Vec<bool>],
    index: usize,
    classes: &[HahnSeries],
    pool: &[HahnSeries],
    tower: Option<&AutomorphismTower>,
    relation: &Relation,
    cap: u32,
) -> Result<OracleReport> {
    let ring = &rings[index];
    let inside = &memberships[index];
    let mut rec = Recorder::new(case_id);

    let symmetric = pool
        .iter()
        .zip(inside)
        .find(|(a, &m)| pool.iter().zip(inside).any(|(b, &n)| *b == a.neg() && n != m));
    rec.record("symmetric", symmetric.map(|(a, _)| a.to_string()));

    let mut positives: Vec<(&HahnSeries, bool)> = pool.iter().zip(inside.iter().copied()).filter(|(a, _)| a.is_positive()).collect();
    let mut failure = None;
    positives.sort_by(|(a, _), (b, _)| {
        a.compare(b).unwrap_or_else(|e| {
            failure.get_or_insert(e);
            Ordering::Equal
        })
    });
    if let Some(e) = failure {
        return Err(e);
    }
    let convex = positives
        .windows(2)
        .find(|w| !w[0].1 && w[1].1)
        .map(|w| format!("{} outside but {} inside", w[0].0, w[1].0));
    rec.record("convex", convex);

    let members: Vec<&HahnSeries> = pool.iter().zip(inside).filter(|(_, &m)| m).map(|(a, _)| a).collect();
    let stride = (members.len() / 24).max(1);
    let sampled: Vec<&HahnSeries> = members.iter().copied().step_by(stride).collect();
    let closed = first_failure(&sampled, |a| {
        first_failure(&sampled, |b| {
            let ok = ring.contains(&a.add(b)?)? && ring.contains(&a.mul(b)?)?;
            Ok((!ok).then(|| format!("{a} and {b}")))
        })
    })?;
    rec.record("ring-closed", closed);

    let agrees = first_failure(pool.iter().zip(inside), |(a, m)| {
        Ok((ring.valuation().in_ring(a)? != **m).then(|| format!("{a} with {}", ring.valuation())))
    })?;
    rec.record("matches-valuation", agrees);

    let natural = first_failure(pool.iter().zip(inside), |(a, m)| {
        Ok((in_natural_ring(a)? && !**m).then(|| a.to_string()))
    })?;
    let generator = ring.generator().expect("closed segments have a last class");
    let strict = natural.or_else(|| (in_natural_ring(generator).unwrap_or(true)).then(|| "generator is finite".into()));
    rec.record("strictly-contains-natural-ring", strict);

    let round_trip = first_failure(classes.iter().enumerate(), |(j, r)| {
        Ok((ring.contains(r)? != (*j <= index)).then(|| format!("class of {r}")))
    })?;
    rec.record("round-trip", round_trip);

    let principal = if !ring.contains(generator)? {
        Some(format!("{generator} not in its own ring"))
    } else {
        first_failure(&rings[..index], |smaller| {
            Ok(smaller.contains(generator)?.then(|| format!("{generator} already in a smaller ring")))
        })?
    };
    rec.record("principal", principal);

    if index + 1 < classes.len() {
        let open = ring_from_initial_segment(
            chain,
            relation.clone(),
            &InitialSegment {
                representatives: classes[..=index + 1].to_vec(),
                has_last: false,
            },
            cap,
        )?;
        let same = first_failure(pool.iter().zip(inside), |(a, m)| {
            Ok((open.contains(a)? != **m).then(|| a.to_string()))
        })?;
        rec.record("open-bound-agrees", same);
    }

    if let Some(tower) = tower {
        let exact = (!ring.valuation().is_sigma_compatible(tower)?).then(|| format!("{} moved", ring.valuation()));
        rec.record("sigma-compatible", exact);
        let inverse = tower.inverse()?;
        let sampled = first_failure(pool.iter().zip(inside), |(a, m)| {
            let fwd = ring.contains(&tower.apply(a)?)?;
            let back = ring.contains(&inverse.apply(a)?)?;
            Ok((fwd != **m || back != **m).then(|| a.to_string()))
        })?;
        rec.record("sigma-invariant-on-samples", sampled);
    }
    Ok(rec.finish())
}
