//! Desk-scale checks of the structural results about preservation sets.
//!
//! Each check enumerates its instances exhaustively (or from a seeded
//! generator) and returns a [`VerificationReport`] listing every
//! counterexample with a full, replayable witness. Family scans go through
//! [`TransformTable`], which precomputes `f . m` for every endofunction and
//! every enumerated space so that `P_X` of a family given as a bitmask is a
//! few table lookups.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use crate::alphabet::DistanceAlphabet;
use crate::error::{Error, Result};
use crate::functions::GridFunction;
use crate::json::{alphabet_value, family_value, function_set_value, function_value, space_value};
use crate::monoid::{all_endofunctions, compose, is_submonoid, FunctionSet};
use crate::preservation::{
    compute_am, compute_f0, compute_p_universe, compute_p_x, compute_si, mainth_construction,
    PreservationUniverse, PreservedKind,
};
use crate::spaces::{
    delhomme_space, discrete_space, enumerate_spaces, enumerate_spaces_up_to, DistanceMatrix,
    SpaceFamily, SpaceKind,
};

/// Largest number of spaces whose full family lattice (`2^n` families) a
/// scan will visit.
pub const MAX_SCANNED_SPACES: usize = 20;

/// Largest universe monoid whose subsets are scanned for submonoids.
pub const MAX_SUBMONOID_SCAN: usize = 20;

pub const DEFAULT_SEED: u64 = 7;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Verified,
    Falsified,
    NotApplicable,
}

/// Outcome of one check.
///
/// `verified` holds exactly when no counterexample was found among a
/// nonzero number of instances; `falsified` always carries at least one
/// counterexample.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub check: String,
    pub status: Status,
    pub parameters: Map<String, Value>,
    pub instances: u64,
    pub counterexamples: Vec<Value>,
    /// Computed sizes and named sub-results.
    #[serde(default, skip_serializing_if = "Map::is_empty")]
    pub details: Map<String, Value>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    /// A positive witness, e.g. the family found by a search.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
}

impl VerificationReport {
    fn new(check: &str) -> Self {
        Self {
            check: check.to_string(),
            status: Status::NotApplicable,
            parameters: Map::new(),
            instances: 0,
            counterexamples: Vec::new(),
            details: Map::new(),
            notes: Vec::new(),
            witness: None,
        }
    }

    fn param(mut self, key: &str, value: Value) -> Self {
        self.parameters.insert(key.to_string(), value);
        self
    }

    fn detail(&mut self, key: &str, value: Value) {
        self.details.insert(key.to_string(), value);
    }

    fn fail(&mut self, witness: Value) {
        self.counterexamples.push(witness);
    }

    fn finish(mut self) -> Self {
        self.status = if !self.counterexamples.is_empty() {
            Status::Falsified
        } else if self.instances > 0 {
            Status::Verified
        } else {
            Status::NotApplicable
        };
        self
    }

    fn not_applicable(mut self, reason: impl Into<String>) -> Self {
        self.notes.push(reason.into());
        self.status = Status::NotApplicable;
        self
    }

    pub fn is_verified(&self) -> bool {
        self.status == Status::Verified
    }

    /// Checks the status/counterexample consistency rule.
    pub fn is_consistent(&self) -> bool {
        match self.status {
            Status::Verified => self.counterexamples.is_empty() && self.instances > 0,
            Status::Falsified => !self.counterexamples.is_empty(),
            Status::NotApplicable => self.counterexamples.is_empty(),
        }
    }
}

/// Precomputed images of a list of spaces under every endofunction.
///
/// `image[f][i]` is the position in `spaces` of `spaces[i]` transformed by
/// `functions[f]`, or `None` if that matrix is not among the spaces.
pub struct TransformTable {
    pub spaces: Vec<DistanceMatrix>,
    pub functions: Vec<GridFunction>,
    image: Vec<Vec<Option<usize>>>,
}

impl TransformTable {
    pub fn new(spaces: &SpaceFamily) -> Result<Self> {
        if spaces.len() > MAX_SCANNED_SPACES {
            return Err(Error::LimitExceeded {
                what: format!("family lattice over {} spaces", spaces.len()),
                limit: MAX_SCANNED_SPACES as u64,
            });
        }
        let list = spaces.to_vec();
        let functions = all_endofunctions(spaces.alphabet())?.to_vec();
        let image = functions
            .iter()
            .map(|f| {
                list.iter()
                    .map(|m| {
                        let t = m.transform_unchecked(f);
                        list.binary_search(&t).ok()
                    })
                    .collect()
            })
            .collect();
        Ok(Self {
            spaces: list,
            functions,
            image,
        })
    }

    pub fn family_count(&self) -> u64 {
        1u64 << self.spaces.len()
    }

    /// Indices of the functions preserving the family `mask`.
    pub fn preserving(&self, mask: u64) -> Vec<usize> {
        (0..self.functions.len())
            .filter(|&f| {
                self.image[f].iter().enumerate().all(|(i, img)| {
                    mask & (1 << i) == 0 || img.is_some_and(|j| mask & (1 << j) != 0)
                })
            })
            .collect()
    }

    pub fn family(&self, mask: u64) -> SpaceFamily {
        let alphabet = self.functions[0].alphabet().clone();
        SpaceFamily::from_spaces(
            alphabet,
            self.members(mask).map(|i| self.spaces[i].clone()),
        )
        .expect("shared alphabet")
    }

    pub fn members(&self, mask: u64) -> impl Iterator<Item = usize> + '_ {
        (0..self.spaces.len()).filter(move |i| mask & (1 << i) != 0)
    }

    pub fn function_set(&self, indices: &[usize]) -> FunctionSet {
        let alphabet = self.functions[0].alphabet().clone();
        FunctionSet::from_functions(alphabet, indices.iter().map(|&f| self.functions[f].clone()))
            .expect("shared alphabet")
    }

    /// Positions of the members of `set` in `functions`.
    pub fn indices_of(&self, set: &FunctionSet) -> Vec<usize> {
        let mut out: Vec<usize> = set
            .iter()
            .filter_map(|f| self.functions.binary_search(f).ok())
            .collect();
        out.sort_unstable();
        out
    }
}

fn metric_spaces(alphabet: &DistanceAlphabet, max_points: usize) -> Result<SpaceFamily> {
    enumerate_spaces_up_to(alphabet, max_points, SpaceKind::Metric)
}

fn breaking_space<'a>(
    f: &GridFunction,
    spaces: &'a SpaceFamily,
    kind: SpaceKind,
) -> Option<&'a DistanceMatrix> {
    spaces.iter().find(|m| !kind.accepts(&m.transform_unchecked(f)))
}

fn set_difference_witnesses(
    report: &mut VerificationReport,
    label: &str,
    computed: &FunctionSet,
    expected: &FunctionSet,
    spaces: &SpaceFamily,
    kind: SpaceKind,
) {
    for f in computed.iter().filter(|f| !expected.contains(f)) {
        report.fail(json!({
            "label": label,
            "reason": "preserving but not predicted",
            "function": function_value(f),
        }));
    }
    for f in expected.iter().filter(|f| !computed.contains(f)) {
        let witness = breaking_space(f, spaces, kind).map(space_value);
        report.fail(json!({
            "label": label,
            "reason": "predicted but not preserving",
            "function": function_value(f),
            "matrix": witness,
        }));
    }
}

/// The empty family is preserved by everything, and no nonempty family of
/// metrics is preserved by a constant with positive value.
pub fn verify_empty_class(alphabet: &DistanceAlphabet) -> Result<VerificationReport> {
    let max_points = 3;
    let mut report = VerificationReport::new("l1")
        .param("alphabet", alphabet_value(alphabet))
        .param("max_points", json!(max_points));
    let all = all_endofunctions(alphabet)?;
    let empty = SpaceFamily::new(alphabet.clone());
    let p_empty = compute_p_x(&empty)?;
    report.instances += 1;
    report.detail("p_empty", json!(p_empty.len()));
    report.detail("all_endofunctions", json!(all.len()));
    if p_empty != all {
        report.fail(json!({
            "family": family_value(&empty),
            "p_x": function_set_value(&p_empty),
        }));
    }
    let spaces = metric_spaces(alphabet, max_points)?;
    for m in spaces.iter() {
        let single = SpaceFamily::from_spaces(alphabet.clone(), [m.clone()])?;
        for &c in &alphabet.values()[1..] {
            let f = GridFunction::constant(alphabet, c)?;
            report.instances += 1;
            if crate::preservation::is_in_p_x(&f, &single)? {
                report.fail(json!({
                    "family": family_value(&single),
                    "function": function_value(&f),
                }));
            }
        }
    }
    Ok(report.finish())
}

/// `P_X = F0` exactly for nonempty families of one-point spaces, over the
/// whole lattice of families of metrics on at most `max_points` points.
pub fn verify_one_point(
    alphabet: &DistanceAlphabet,
    max_points: usize,
) -> Result<VerificationReport> {
    let mut report = VerificationReport::new("th1")
        .param("alphabet", alphabet_value(alphabet))
        .param("max_points", json!(max_points));
    let table = TransformTable::new(&metric_spaces(alphabet, max_points)?)?;
    let f0 = table.indices_of(&compute_f0(alphabet)?);
    report.detail("f0", json!(f0.len()));
    report.detail("spaces", json!(table.spaces.len()));
    for mask in 0..table.family_count() {
        let one_point_only = mask != 0 && table.members(mask).all(|i| table.spaces[i].points() == 1);
        let p = table.preserving(mask);
        report.instances += 1;
        if one_point_only != (p == f0) {
            report.fail(json!({
                "family": family_value(&table.family(mask)),
                "one_point_only": one_point_only,
                "p_x": function_set_value(&table.function_set(&p)),
            }));
        }
    }
    Ok(report.finish())
}

/// Some nonzero `c1 < c2` in the alphabet with `c2 > 2 c1`.
pub fn separator_levels(alphabet: &DistanceAlphabet) -> Option<(u64, u64)> {
    let v = alphabet.values();
    v[1..]
        .iter()
        .flat_map(|&c1| v[1..].iter().map(move |&c2| (c1, c2)))
        .find(|&(c1, c2)| c2 > 2 * c1)
}

/// Whether a family of metrics consists of discrete spaces, has a member
/// with at least two points, and contains every discrete metric on the
/// point set of each member.
pub fn discrete_closure_condition(family: &SpaceFamily) -> Result<bool> {
    let alphabet = family.alphabet();
    if !family.iter().all(DistanceMatrix::is_discrete) {
        return Ok(false);
    }
    if !family.iter().any(|m| m.points() >= 2) {
        return Ok(false);
    }
    for m in family.iter() {
        for &k in &alphabet.values()[1..] {
            if !family.contains(&discrete_space(alphabet, m.points(), k)?) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Exhaustive scan: the discrete closure condition holds exactly when
/// `P_X = Am`.
pub fn verify_discrete_characterization(
    alphabet: &DistanceAlphabet,
    max_points: usize,
) -> Result<VerificationReport> {
    let report = VerificationReport::new("th2")
        .param("alphabet", alphabet_value(alphabet))
        .param("max_points", json!(max_points));
    let Some((c1, c2)) = separator_levels(alphabet) else {
        return Ok(report.not_applicable(
            "alphabet has no nonzero c1 < c2 with c2 > 2*c1",
        ));
    };
    let mut report = report;
    report.detail(
        "separator_levels",
        json!([alphabet.format_scaled(c1), alphabet.format_scaled(c2)]),
    );
    let table = TransformTable::new(&metric_spaces(alphabet, max_points)?)?;
    let am = table.indices_of(&compute_am(alphabet)?);
    report.detail("am", json!(am.len()));
    report.detail("spaces", json!(table.spaces.len()));
    report.detail("families", json!(table.family_count()));
    let mut condition_holds = 0u64;
    for mask in 0..table.family_count() {
        let family = table.family(mask);
        let condition = discrete_closure_condition(&family)?;
        let p = table.preserving(mask);
        report.instances += 1;
        condition_holds += u64::from(condition);
        if condition != (p == am) {
            report.fail(json!({
                "family": family_value(&family),
                "condition": condition,
                "p_x_equals_am": p == am,
                "p_x": function_set_value(&table.function_set(&p)),
            }));
        }
    }
    report.detail("families_satisfying_condition", json!(condition_holds));
    report.notes.push(
        "the triangle instance used against non-discrete triples is f(d(b,c)) <= f(d(b,a)) + f(d(a,c))"
            .into(),
    );
    Ok(report.finish())
}

/// A metric is discrete iff all of its three-point subspaces are.
pub fn verify_pr10(alphabet: &DistanceAlphabet, max_points: usize) -> Result<VerificationReport> {
    let mut report = VerificationReport::new("pr10")
        .param("alphabet", alphabet_value(alphabet))
        .param("max_points", json!(max_points));
    let mut candidates = 0u64;
    for n in 1..=max_points {
        let raw = enumerate_spaces(alphabet, n, SpaceKind::Raw)?;
        candidates += raw.len() as u64;
        for m in raw.iter().filter(|m| m.is_metric()) {
            report.instances += 1;
            let whole = m.is_discrete();
            let local = m.all_three_point_subspaces_discrete()?;
            if whole != local {
                report.fail(json!({
                    "matrix": space_value(m),
                    "discrete": whole,
                    "three_point_subspaces_discrete": local,
                }));
            }
        }
    }
    report.detail("candidates", json!(candidates));
    Ok(report.finish())
}

/// Ultrametric preserving functions are exactly the increasing amenable ones,
/// and the computed set does not change when one more point is allowed.
pub fn verify_ultrametric_preserving(
    alphabet: &DistanceAlphabet,
    max_points: usize,
) -> Result<VerificationReport> {
    if max_points < 3 {
        return Err(Error::InvalidParameter(format!(
            "ultrametric check needs max_points >= 3, got {max_points}"
        )));
    }
    let mut report = VerificationReport::new("t24")
        .param("alphabet", alphabet_value(alphabet))
        .param("max_points", json!(max_points));
    let predicted = all_endofunctions(alphabet)?.filter(|f| f.is_increasing() && f.is_amenable());
    report.detail("increasing_amenable", json!(predicted.len()));
    for (label, points) in [("p_u", max_points), ("p_u_plus_one", max_points + 1)] {
        let universe = PreservationUniverse::new(alphabet.clone(), points, PreservedKind::Ultrametric)?;
        let spaces = match universe.spaces() {
            Ok(s) => s,
            Err(Error::LimitExceeded { .. }) if points > max_points => {
                report
                    .notes
                    .push(format!("stability re-check at {points} points skipped: over limit"));
                continue;
            }
            Err(e) => return Err(e),
        };
        let computed = compute_p_universe(&universe)?;
        report.instances += all_endofunctions(alphabet)?.len() as u64;
        report.detail(label, json!(computed.len()));
        set_difference_witnesses(
            &mut report,
            label,
            &computed,
            &predicted,
            &spaces,
            SpaceKind::Ultrametric,
        );
    }
    Ok(report.finish())
}

/// `SI` equals the intersection of the metric and ultrametric preserving
/// sets on the grid `{0, 1, ..., n}`.
pub fn verify_si_intersection(n: u64) -> Result<VerificationReport> {
    verify_si_intersection_on(&DistanceAlphabet::uniform_grid(n)?)
}

/// Same as [`verify_si_intersection`] for an arbitrary alphabet; reports
/// not-applicable unless the alphabet is a uniform grid.
pub fn verify_si_intersection_on(alphabet: &DistanceAlphabet) -> Result<VerificationReport> {
    let max_points = 3;
    let report = VerificationReport::new("si")
        .param("alphabet", alphabet_value(alphabet))
        .param("max_points", json!(max_points));
    if !alphabet.is_uniform_grid() {
        return Ok(report.not_applicable(
            "grid subadditivity only matches metric preservation on uniform grids",
        ));
    }
    let mut report = report;
    let si = compute_si(alphabet)?;
    let pm = compute_p_universe(&PreservationUniverse::new(
        alphabet.clone(),
        max_points,
        PreservedKind::Metric,
    )?)?;
    let pu = compute_p_universe(&PreservationUniverse::new(
        alphabet.clone(),
        max_points,
        PreservedKind::Ultrametric,
    )?)?;
    let both = crate::monoid::intersect(&pm, &pu)?;
    report.instances = all_endofunctions(alphabet)?.len() as u64;
    report.detail("si", json!(si.len()));
    report.detail("p_m", json!(pm.len()));
    report.detail("p_u", json!(pu.len()));
    report.detail("intersection", json!(both.len()));
    for f in si.iter().filter(|f| !both.contains(f)) {
        report.fail(json!({"reason": "in SI only", "function": function_value(f)}));
    }
    for f in both.iter().filter(|f| !si.contains(f)) {
        report.fail(json!({"reason": "in intersection only", "function": function_value(f)}));
    }
    Ok(report.finish())
}

/// Random symmetric matrix on `1..=3` points with arbitrary entries,
/// diagonal included.
#[allow(clippy::needless_range_loop)]
fn random_raw_space(alphabet: &DistanceAlphabet, rng: &mut ChaCha8Rng) -> DistanceMatrix {
    let n = rng.gen_range(1..=3usize);
    let mut rows = vec![vec![0usize; n]; n];
    for i in 0..n {
        for j in i..n {
            let e = rng.gen_range(0..alphabet.len());
            rows[i][j] = e;
            rows[j][i] = e;
        }
    }
    DistanceMatrix::from_index_rows(alphabet.clone(), &rows).expect("symmetric by construction")
}

/// Seeded random family of up to four raw spaces.
pub fn random_family(alphabet: &DistanceAlphabet, rng: &mut ChaCha8Rng) -> SpaceFamily {
    let size = rng.gen_range(0..=4usize);
    let spaces: Vec<_> = (0..size).map(|_| random_raw_space(alphabet, rng)).collect();
    SpaceFamily::from_spaces(alphabet.clone(), spaces).expect("shared alphabet")
}

/// `P_X` is a submonoid for seeded random families of raw matrices.
pub fn verify_submonoid_property(
    alphabet: &DistanceAlphabet,
    trials: u64,
    seed: u64,
) -> Result<VerificationReport> {
    let mut report = VerificationReport::new("submonoid")
        .param("alphabet", alphabet_value(alphabet))
        .param("trials", json!(trials))
        .param("seed", json!(seed));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut fixed = vec![
        SpaceFamily::new(alphabet.clone()),
        enumerate_spaces(alphabet, 2, SpaceKind::Metric)?,
    ];
    let fixed_count = fixed.len();
    fixed.extend((0..trials).map(|_| random_family(alphabet, &mut rng)));
    for (i, family) in fixed.iter().enumerate() {
        let p = compute_p_x(family)?;
        report.instances += 1;
        if !is_submonoid(&p) {
            report.fail(json!({
                "trial": i as i64 - fixed_count as i64,
                "family": family_value(family),
                "p_x": function_set_value(&p),
            }));
        }
    }
    Ok(report.finish())
}

/// Every submonoid of the bounded preserving universe of `kind`.
pub fn universe_submonoids(
    alphabet: &DistanceAlphabet,
    kind: PreservedKind,
) -> Result<(FunctionSet, Vec<FunctionSet>)> {
    let universe = compute_p_universe(&PreservationUniverse::with_default_points(
        alphabet.clone(),
        kind,
    ))?;
    if universe.len() > MAX_SUBMONOID_SCAN {
        return Err(Error::LimitExceeded {
            what: format!("subset scan of a {}-element monoid", universe.len()),
            limit: MAX_SUBMONOID_SCAN as u64,
        });
    }
    let members = universe.to_vec();
    let mut out = Vec::new();
    for mask in 0..(1u64 << members.len()) {
        let subset = FunctionSet::from_functions(
            alphabet.clone(),
            (0..members.len())
                .filter(|i| mask & (1 << i) != 0)
                .map(|i| members[i].clone()),
        )?;
        if is_submonoid(&subset) {
            out.push(subset);
        }
    }
    Ok((universe, out))
}

/// Every submonoid of the preserving universe is the preservation set of
/// the family built from the Delhommé base; includes the `SI` instance.
pub fn verify_main_construction(
    alphabet: &DistanceAlphabet,
    kind: PreservedKind,
) -> Result<VerificationReport> {
    let id = match kind {
        PreservedKind::Metric => "mainth",
        PreservedKind::Ultrametric => "mainth-u",
    };
    let mut report = VerificationReport::new(id)
        .param("alphabet", alphabet_value(alphabet))
        .param("kind", json!(kind.name()));
    let base = delhomme_space(alphabet);
    let (universe, submonoids) = universe_submonoids(alphabet, kind)?;
    report.detail("universe", json!(universe.len()));
    report.detail("submonoids", json!(submonoids.len()));
    for a in &submonoids {
        let family = mainth_construction(a, &base)?;
        let p = compute_p_x(&family)?;
        report.instances += 1;
        if &p != a {
            report.fail(json!({
                "target": function_set_value(a),
                "family": family_value(&family),
                "p_x": function_set_value(&p),
            }));
        }
    }

    let si = compute_si(alphabet)?;
    if si.is_subset(&universe) {
        let family = mainth_construction(&si, &base)?;
        let p = compute_p_x(&family)?;
        report.instances += 1;
        report.detail("si", json!(si.len()));
        report.detail("si_family", json!(family.len()));
        report.detail("si_solved", json!(p == si));
        if p != si {
            report.fail(json!({
                "label": "si",
                "target": function_set_value(&si),
                "family": family_value(&family),
                "p_x": function_set_value(&p),
            }));
        }
    } else {
        report.notes.push("SI is not contained in this universe; SI instance skipped".into());
    }

    // Other covering bases give other families; their preservation sets are
    // reported but not asserted.
    let base_points = alphabet.len().clamp(2, 4);
    let bases: Vec<DistanceMatrix> = enumerate_spaces(alphabet, base_points, kind.space_kind())?
        .iter()
        .filter(|m| m.covers_alphabet())
        .cloned()
        .collect();
    let mut agreeing = 0usize;
    for a in &submonoids {
        for b in &bases {
            if compute_p_x(&mainth_construction(a, b)?)? == *a {
                agreeing += 1;
            }
        }
    }
    report.notes.push(format!(
        "alternative covering bases on {base_points} points: {} bases, {agreeing} of {} (submonoid, base) pairs give P_X = A",
        bases.len(),
        bases.len() * submonoids.len()
    ));
    Ok(report.finish())
}

/// How [`verify_ex10`] shows that `f1` preserves no nonempty family.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Ex10Mode {
    /// One instance per space: `f1` moves every metric off the metrics.
    Shortcut,
    /// One instance per nonempty family in the lattice.
    Exhaustive,
}

/// `{f1, id}` is a submonoid that is not the preservation set of any family
/// of metrics.
pub fn verify_ex10(
    alphabet: &DistanceAlphabet,
    max_points: usize,
    mode: Ex10Mode,
) -> Result<VerificationReport> {
    let report = VerificationReport::new("ex10")
        .param("alphabet", alphabet_value(alphabet))
        .param("max_points", json!(max_points))
        .param(
            "mode",
            json!(match mode {
                Ex10Mode::Shortcut => "shortcut",
                Ex10Mode::Exhaustive => "exhaustive",
            }),
        );
    let Ok(f1) = GridFunction::f1(alphabet) else {
        return Ok(report.not_applicable("alphabet does not contain 1"));
    };
    let mut report = report;
    let id = GridFunction::identity(alphabet);
    let a1 = FunctionSet::from_functions(alphabet.clone(), [f1.clone(), id])?;
    report.instances += 1;
    if !is_submonoid(&a1) || !compose(&f1, &f1)?.is_identity() {
        report.fail(json!({"label": "submonoid", "set": function_set_value(&a1)}));
    }
    let p_empty = compute_p_x(&SpaceFamily::new(alphabet.clone()))?;
    report.instances += 1;
    report.detail("p_empty", json!(p_empty.len()));
    if p_empty == a1 || p_empty != all_endofunctions(alphabet)? {
        report.fail(json!({"label": "empty family", "p_x": function_set_value(&p_empty)}));
    }
    let spaces = metric_spaces(alphabet, max_points)?;
    match mode {
        Ex10Mode::Shortcut => {
            for m in spaces.iter() {
                report.instances += 1;
                let img = m.transform_unchecked(&f1);
                if img.is_metric() {
                    report.fail(json!({"matrix": space_value(m), "image": space_value(&img)}));
                }
            }
        }
        Ex10Mode::Exhaustive => {
            let table = TransformTable::new(&spaces)?;
            let f1_index = table.functions.binary_search(&f1).expect("f1 is an endofunction");
            let a1_indices = table.indices_of(&a1);
            for mask in 1..table.family_count() {
                let p = table.preserving(mask);
                report.instances += 1;
                if p.contains(&f1_index) || p == a1_indices {
                    report.fail(json!({
                        "family": family_value(&table.family(mask)),
                        "p_x": function_set_value(&table.function_set(&p)),
                    }));
                }
            }
        }
    }
    Ok(report.finish())
}

/// Preservation sets of all discrete spaces and of all two-point spaces are
/// both the amenable functions.
pub fn verify_dis_corollary(
    alphabet: &DistanceAlphabet,
    max_points: usize,
) -> Result<VerificationReport> {
    let mut report = VerificationReport::new("dis")
        .param("alphabet", alphabet_value(alphabet))
        .param("max_points", json!(max_points));
    let am = compute_am(alphabet)?;
    report.detail("am", json!(am.len()));
    let discrete = enumerate_spaces_up_to(alphabet, max_points, SpaceKind::Discrete)?;
    let two_point = enumerate_spaces(alphabet, 2, SpaceKind::Metric)?;
    for (label, family) in [("discrete", discrete), ("two_point", two_point)] {
        let p = compute_p_x(&family)?;
        report.instances += 1;
        report.detail(label, json!(p.len()));
        if p != am {
            report.fail(json!({
                "label": label,
                "family": family_value(&family),
                "p_x": function_set_value(&p),
            }));
        }
    }
    Ok(report.finish())
}

/// Bounded search for a family of metrics whose preservation set is the
/// given submonoid of the amenable functions.
///
/// Exhausting the search space without a hit is reported as falsified at
/// this scale only; it says nothing about larger spaces.
pub fn explore_conjecture1(
    alphabet: &DistanceAlphabet,
    target: &FunctionSet,
    max_points: usize,
    budget: u64,
) -> Result<VerificationReport> {
    if target.alphabet() != alphabet {
        return Err(Error::AlphabetMismatch);
    }
    let am = compute_am(alphabet)?;
    if !target.is_subset(&am) || !is_submonoid(target) {
        return Err(Error::NotSubmonoid(
            "target must be a submonoid of the amenable functions".into(),
        ));
    }
    let mut report = VerificationReport::new("explore")
        .param("alphabet", alphabet_value(alphabet))
        .param("max_points", json!(max_points))
        .param("budget", json!(budget))
        .param("target", function_set_value(target));
    let table = TransformTable::new(&metric_spaces(alphabet, max_points)?)?;
    let wanted = table.indices_of(target);
    let total = table.family_count();
    for mask in 0..total {
        if report.instances >= budget {
            return Ok(report.not_applicable(format!(
                "budget of {budget} families exhausted before covering all {total}"
            )));
        }
        report.instances += 1;
        if table.preserving(mask) == wanted {
            report.witness = Some(family_value(&table.family(mask)));
            return Ok(report.finish());
        }
    }
    report.fail(json!({
        "target": function_set_value(target),
        "families_scanned": total,
        "note": "no family of metrics on this many points solves P_X = target; not a refutation beyond this bound",
    }));
    Ok(report.finish())
}

/// Parameters accepted by [`run_check`].
#[derive(Clone, Debug)]
pub struct CheckParams {
    pub alphabet: DistanceAlphabet,
    pub max_points: Option<usize>,
    pub trials: u64,
    pub seed: u64,
    pub exhaustive: bool,
}

impl CheckParams {
    pub fn new(alphabet: DistanceAlphabet) -> Self {
        Self {
            alphabet,
            max_points: None,
            trials: 1000,
            seed: DEFAULT_SEED,
            exhaustive: false,
        }
    }
}

pub const CHECK_IDS: &[&str] = &[
    "l1", "th1", "th2", "pr10", "t24", "si", "mainth", "mainth-u", "ex10", "dis", "submonoid",
];

/// Runs the check with the given identifier.
pub fn run_check(id: &str, p: &CheckParams) -> Result<VerificationReport> {
    let a = &p.alphabet;
    let points = |default: usize| p.max_points.unwrap_or(default);
    match id {
        "l1" => verify_empty_class(a),
        "th1" => verify_one_point(a, points(3)),
        "th2" => verify_discrete_characterization(a, points(3)),
        "pr10" => verify_pr10(a, points(5)),
        "t24" => verify_ultrametric_preserving(a, points(3)),
        "si" => verify_si_intersection_on(a),
        "mainth" => verify_main_construction(a, PreservedKind::Metric),
        "mainth-u" => verify_main_construction(a, PreservedKind::Ultrametric),
        "ex10" => verify_ex10(
            a,
            points(3),
            if p.exhaustive {
                Ex10Mode::Exhaustive
            } else {
                Ex10Mode::Shortcut
            },
        ),
        "dis" => verify_dis_corollary(a, points(3)),
        "submonoid" => verify_submonoid_property(a, p.trials, p.seed),
        other => Err(Error::Parse(format!(
            "unknown check {other:?}; expected one of {}",
            CHECK_IDS.join(", ")
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn abc(s: &str) -> DistanceAlphabet {
        DistanceAlphabet::parse(s).unwrap()
    }

    #[test]
    fn table_agrees_with_direct_computation() {
        let a = abc("0,1,2");
        let table = TransformTable::new(&metric_spaces(&a, 3).unwrap()).unwrap();
        assert_eq!(table.spaces.len(), 11);
        for mask in (0..table.family_count()).step_by(37) {
            let direct = compute_p_x(&table.family(mask)).unwrap();
            assert_eq!(table.function_set(&table.preserving(mask)), direct, "mask {mask}");
        }
    }

    #[test]
    fn empty_class() {
        let r = verify_empty_class(&abc("0,1,2")).unwrap();
        assert_eq!(r.status, Status::Verified);
        assert_eq!(r.details["p_empty"], json!(27));
        let r = verify_empty_class(&abc("0,1")).unwrap();
        assert_eq!(r.details["p_empty"], json!(4));
        let a = abc("0,1");
        let single = SpaceFamily::from_spaces(a.clone(), [discrete_space(&a, 2, 1).unwrap()]).unwrap();
        let one = GridFunction::constant(&a, 1).unwrap();
        assert!(!compute_p_x(&single).unwrap().contains(&one));
    }

    #[test]
    fn one_point() {
        let r = verify_one_point(&abc("0,1,2"), 3).unwrap();
        assert_eq!(r.status, Status::Verified);
        assert_eq!(r.instances, 2048);
        assert_eq!(r.details["f0"], json!(9));
        // the zero function breaks any two-point member
        let a = abc("0,1,2");
        let fam = SpaceFamily::from_spaces(
            a.clone(),
            [discrete_space(&a, 1, 1).unwrap(), discrete_space(&a, 2, 1).unwrap()],
        )
        .unwrap();
        let p = compute_p_x(&fam).unwrap();
        assert!(!p.contains(&GridFunction::constant(&a, 0).unwrap()));
        assert_ne!(p, compute_f0(&a).unwrap());
    }

    #[test]
    fn discrete_characterization_examples() {
        let a = abc("0,1,3");
        let twos = enumerate_spaces(&a, 2, SpaceKind::Metric).unwrap();
        assert!(discrete_closure_condition(&twos).unwrap());
        assert_eq!(compute_p_x(&twos).unwrap(), compute_am(&a).unwrap());
        assert_eq!(compute_am(&a).unwrap().len(), 4);

        let mut with_triple = twos.clone();
        let bad = DistanceMatrix::from_value_rows(
            a.clone(),
            &[vec![0, 1, 3], vec![1, 0, 3], vec![3, 3, 0]],
        )
        .unwrap();
        with_triple.insert(bad.clone()).unwrap();
        for k in [1, 3] {
            with_triple.insert(discrete_space(&a, 3, k).unwrap()).unwrap();
        }
        assert!(!discrete_closure_condition(&with_triple).unwrap());
        let p = compute_p_x(&with_triple).unwrap();
        assert_ne!(p, compute_am(&a).unwrap());
        // the separator sending d(b,c) = 1 to 3 and 3 to 1 is amenable but
        // breaks the triangle on the non-discrete member
        let sep = GridFunction::two_level_separator(&a, 1, 3, 1).unwrap();
        assert!(sep.is_amenable());
        assert!(!p.contains(&sep));
        assert!(!bad.transform(&sep).unwrap().is_metric());
    }

    #[test]
    fn discrete_characterization_scan() {
        let r = verify_discrete_characterization(&abc("0,1,3"), 3).unwrap();
        assert_eq!(r.status, Status::Verified, "{:?}", r.counterexamples);
        assert_eq!(r.details["spaces"], json!(8));
        assert_eq!(r.instances, 256);
        let na = verify_discrete_characterization(&abc("0,1,2"), 3).unwrap();
        assert_eq!(na.status, Status::NotApplicable);
        assert!(na.is_consistent());
    }

    #[test]
    fn pr10_counts() {
        let r = verify_pr10(&abc("0,1,2"), 5).unwrap();
        assert_eq!(r.status, Status::Verified);
        assert_eq!(r.details["candidates"], json!(1024 + 64 + 8 + 2 + 1));
        let two = verify_pr10(&abc("0,1,2"), 2).unwrap();
        assert_eq!(two.instances, 3);
    }

    #[test]
    fn pr10_spot_witness() {
        let a = abc("0,1,2");
        let mut rows = vec![vec![1u64; 4]; 4];
        for (i, row) in rows.iter_mut().enumerate() {
            row[i] = 0;
        }
        rows[0][1] = 2;
        rows[1][0] = 2;
        let m = DistanceMatrix::from_value_rows(a, &rows).unwrap();
        assert!(m.is_metric());
        assert!(!m.is_discrete());
        assert!(!m.all_three_point_subspaces_discrete().unwrap());
    }

    #[test]
    fn ultrametric_characterization() {
        let r = verify_ultrametric_preserving(&abc("0,1,2"), 3).unwrap();
        assert_eq!(r.status, Status::Verified);
        assert_eq!(r.details["p_u"], json!(3));
        assert_eq!(r.details["p_u_plus_one"], json!(3));
        let r = verify_ultrametric_preserving(&abc("0,1,2,3"), 3).unwrap();
        assert_eq!(r.details["increasing_amenable"], json!(10));
        assert!(verify_ultrametric_preserving(&abc("0,1,2"), 2).is_err());

        let a = abc("0,1,2");
        let swap = GridFunction::from_image_values(a.clone(), &[0, 2, 1]).unwrap();
        let tri = DistanceMatrix::from_value_rows(
            a,
            &[vec![0, 1, 2], vec![1, 0, 2], vec![2, 2, 0]],
        )
        .unwrap();
        assert!(tri.is_ultrametric());
        assert!(!tri.transform(&swap).unwrap().is_ultrametric());
    }

    #[test]
    fn si_intersection() {
        for n in 1..=3 {
            let r = verify_si_intersection(n).unwrap();
            assert_eq!(r.status, Status::Verified, "n={n}");
        }
        assert_eq!(verify_si_intersection(2).unwrap().details["si"], json!(3));
        assert_eq!(verify_si_intersection(1).unwrap().details["si"], json!(1));
        let na = verify_si_intersection_on(&abc("0,1,3")).unwrap();
        assert_eq!(na.status, Status::NotApplicable);
    }

    #[test]
    fn submonoid_property_is_reproducible() {
        let a = abc("0,1,2");
        let r1 = verify_submonoid_property(&a, 50, 7).unwrap();
        let r2 = verify_submonoid_property(&a, 50, 7).unwrap();
        assert_eq!(r1, r2);
        assert_eq!(r1.status, Status::Verified);
        let mut rng1 = ChaCha8Rng::seed_from_u64(3);
        let mut rng2 = ChaCha8Rng::seed_from_u64(3);
        assert_eq!(random_family(&a, &mut rng1), random_family(&a, &mut rng2));
    }

    #[test]
    fn main_construction() {
        let a = abc("0,1,2");
        let m = verify_main_construction(&a, PreservedKind::Metric).unwrap();
        assert_eq!(m.status, Status::Verified);
        assert_eq!(m.details["universe"], json!(4));
        assert_eq!(m.details["submonoids"], json!(6));
        assert_eq!(m.details["si"], json!(3));
        let u = verify_main_construction(&a, PreservedKind::Ultrametric).unwrap();
        assert_eq!(u.status, Status::Verified);
        assert_eq!(u.details["universe"], json!(3));
    }

    #[test]
    fn ex10_both_modes() {
        let a = abc("0,1,2");
        let s = verify_ex10(&a, 3, Ex10Mode::Shortcut).unwrap();
        assert_eq!(s.status, Status::Verified);
        let e = verify_ex10(&a, 3, Ex10Mode::Exhaustive).unwrap();
        assert_eq!(e.status, Status::Verified);
        assert_eq!(e.instances, 2 + 2047);
        assert_eq!(e.details["p_empty"], json!(27));
        assert_eq!(
            verify_ex10(&abc("0,2,3"), 3, Ex10Mode::Shortcut).unwrap().status,
            Status::NotApplicable
        );
    }

    #[test]
    fn dis_corollary() {
        for (s, pts, am) in [("0,1,2", 3, 4), ("0,1,3", 3, 4), ("0,1", 2, 1)] {
            let r = verify_dis_corollary(&abc(s), pts).unwrap();
            assert_eq!(r.status, Status::Verified, "{s}");
            assert_eq!(r.details["am"], json!(am));
        }
    }

    #[test]
    fn exploration() {
        let a = abc("0,1,3");
        let am = compute_am(&a).unwrap();
        let r = explore_conjecture1(&a, &am, 3, 1 << 20).unwrap();
        assert_eq!(r.status, Status::Verified);
        let fam: SpaceFamily = crate::json::from_str::<crate::json::FamilyJson, _>(
            &r.witness.clone().unwrap().to_string(),
        )
        .unwrap();
        assert_eq!(compute_p_x(&fam).unwrap(), am);

        let b = abc("0,1,2");
        let id = FunctionSet::from_functions(b.clone(), [GridFunction::identity(&b)]).unwrap();
        assert_eq!(explore_conjecture1(&b, &id, 3, 1 << 20).unwrap().status, Status::Verified);

        let f1 = GridFunction::f1(&b).unwrap();
        let a1 = FunctionSet::from_functions(b.clone(), [f1, GridFunction::identity(&b)]).unwrap();
        assert!(matches!(
            explore_conjecture1(&b, &a1, 3, 100),
            Err(Error::NotSubmonoid(_))
        ));

        let tiny = explore_conjecture1(&a, &am, 3, 1).unwrap();
        assert_eq!(tiny.status, Status::NotApplicable);
        assert!(tiny.is_consistent());
    }

    #[test]
    fn unknown_check() {
        assert!(run_check("nope", &CheckParams::new(abc("0,1"))).is_err());
    }
}
