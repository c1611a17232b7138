//! Oracles, generators and exhaustive game checkers shared by the
//! integration tests.
//!
//! The oracles deliberately avoid the crate's partition code. The classical
//! one only reads the transition structure (`edges`, `terminates`), the
//! kernel and enumeration ones only `observe`.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, HashSet};

use coalgame::functor::{Outcome, ProbObs, Row, SystemDesc};
use coalgame::game::{advance, engine_move, GameState, Move, Phase};
use coalgame::logic::{Formula, Modality, Named};
use coalgame::rational::{ratio, Rational};
use coalgame::{io, Analysis, Coalgebra, Kind, Label, Observation, Partition, Predicate, StateId};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn fixture_text(name: &str) -> String {
    let path = format!("{}/../../fixtures/{name}", env!("CARGO_MANIFEST_DIR"));
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{path}: {e}"))
}

pub fn fixture(name: &str) -> Coalgebra {
    io::load_str(&fixture_text(name)).expect("fixture is valid")
}

pub fn sid(c: &Coalgebra, name: &str) -> StateId {
    c.state(name).expect("state exists")
}

pub fn pred(c: &Coalgebra, names: &[&str]) -> Predicate {
    c.predicate(names.iter().copied()).expect("states exist")
}

pub type Relation = Vec<Vec<bool>>;

pub fn relation_of(p: &Partition) -> Relation {
    let n = p.universe();
    (0..n).map(|x| (0..n).map(|y| p.same_block(StateId(x), StateId(y))).collect()).collect()
}

fn classes(r: &Relation) -> Vec<Vec<usize>> {
    let n = r.len();
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for x in 0..n {
        if seen[x] {
            continue;
        }
        let class: Vec<usize> = (0..n).filter(|&y| r[x][y]).collect();
        for &y in &class {
            seen[y] = true;
        }
        out.push(class);
    }
    out
}

/// Greatest bisimulation from the textbook definitions: Milner's transfer
/// condition for LTSs, Larsen–Skou class masses for probabilistic systems.
pub fn classical_bisimilarity(c: &Coalgebra) -> Relation {
    let n = c.len();
    let edges = c.edges();
    match c.kind() {
        Kind::Lts => {
            let succ: Vec<Vec<(Label, usize)>> = (0..n)
                .map(|x| edges.iter().filter(|e| e.0 .0 == x).map(|e| (e.1.clone(), e.2 .0)).collect())
                .collect();
            let mut r = vec![vec![true; n]; n];
            loop {
                let mut changed = false;
                for x in 0..n {
                    for y in 0..n {
                        if !r[x][y] {
                            continue;
                        }
                        let fwd = succ[x].iter().all(|(a, x2)| succ[y].iter().any(|(b, y2)| a == b && r[*x2][*y2]));
                        let bwd = succ[y].iter().all(|(b, y2)| succ[x].iter().any(|(a, x2)| a == b && r[*x2][*y2]));
                        if !(fwd && bwd) {
                            r[x][y] = false;
                            changed = true;
                        }
                    }
                }
                if !changed {
                    return r;
                }
            }
        }
        Kind::Pts => {
            let mut r: Relation = (0..n)
                .map(|x| {
                    (0..n)
                        .map(|y| c.alphabet().iter().all(|a| c.terminates(StateId(x), a) == c.terminates(StateId(y), a)))
                        .collect()
                })
                .collect();
            loop {
                let cls = classes(&r);
                let mass = |x: usize, a: &Label, class: &[usize]| -> Rational {
                    edges
                        .iter()
                        .filter(|e| e.0 .0 == x && &e.1 == a && class.contains(&e.2 .0))
                        .map(|e| e.3.clone().expect("weighted"))
                        .fold(ratio(0, 1), |acc, w| acc + w)
                };
                let mut changed = false;
                for x in 0..n {
                    for y in 0..n {
                        if r[x][y]
                            && !c.alphabet().iter().all(|a| cls.iter().all(|k| mass(x, a, k) == mass(y, a, k)))
                        {
                            r[x][y] = false;
                            changed = true;
                        }
                    }
                }
                if !changed {
                    return r;
                }
            }
        }
    }
}

/// Splits on the full kernel `x ↦ (Fχ_P(α(x)))_P` over the classes of the
/// current relation until nothing changes.
pub fn kernel_oracle(c: &Coalgebra) -> Relation {
    let n = c.len();
    let mut r = vec![vec![true; n]; n];
    loop {
        let preds: Vec<Predicate> =
            classes(&r).iter().map(|k| Predicate::from_states(n, k.iter().map(|&i| StateId(i)))).collect();
        let kernel: Vec<Vec<Observation>> =
            (0..n).map(|x| preds.iter().map(|p| c.observe(StateId(x), p)).collect()).collect();
        let next: Relation = (0..n).map(|x| (0..n).map(|y| r[x][y] && kernel[x] == kernel[y]).collect()).collect();
        if next == r {
            return r;
        }
        r = next;
    }
}

/// All set partitions of `0..n` as block-index vectors.
fn set_partitions(n: usize) -> Vec<Vec<usize>> {
    fn go(i: usize, n: usize, cur: &mut Vec<usize>, max: usize, out: &mut Vec<Vec<usize>>) {
        if i == n {
            out.push(cur.clone());
            return;
        }
        for b in 0..=max {
            cur.push(b);
            go(i + 1, n, cur, if b == max { max + 1 } else { max }, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, &mut Vec::new(), 0, &mut out);
    out
}

/// Greatest equivalence `R` with `R ⊆ F_α(R)`, by enumerating every
/// equivalence relation. Only sensible for a handful of states.
pub fn enumeration_oracle(c: &Coalgebra) -> Relation {
    let n = c.len();
    assert!(n <= 6, "enumeration oracle is exponential");
    let mut closed: Vec<Relation> = Vec::new();
    for labels in set_partitions(n) {
        let blocks: BTreeSet<usize> = labels.iter().copied().collect();
        let preds: Vec<Predicate> = blocks
            .iter()
            .map(|&b| Predicate::from_states(n, (0..n).filter(|&x| labels[x] == b).map(StateId)))
            .collect();
        let stable = (0..n).all(|x| {
            (0..n).all(|y| {
                labels[x] != labels[y] || preds.iter().all(|p| c.observe(StateId(x), p) == c.observe(StateId(y), p))
            })
        });
        if stable {
            closed.push((0..n).map(|x| (0..n).map(|y| labels[x] == labels[y]).collect()).collect());
        }
    }
    let size = |r: &Relation| r.iter().flatten().filter(|&&b| b).count();
    let best = closed.iter().max_by_key(|r| size(r)).expect("identity is always closed").clone();
    for r in &closed {
        for x in 0..n {
            for y in 0..n {
                assert!(!r[x][y] || best[x][y], "closed relations are not dominated by the largest one");
            }
        }
    }
    best
}

// ---------------------------------------------------------------- generators

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

const LABELS: [&str; 2] = ["a", "b"];

fn names(n: usize) -> Vec<String> {
    (1..=n).map(|i| i.to_string()).collect()
}

fn build(kind: Kind, labels: usize, n: usize, rows: Vec<Row>) -> Coalgebra {
    let desc = SystemDesc {
        kind,
        alphabet: LABELS[..labels].iter().map(|s| s.to_string()).collect(),
        states: names(n),
        rows,
    };
    Coalgebra::from_desc(&desc).expect("generated systems are valid")
}

fn trans(src: usize, label: &str, dst: usize, w: Option<Rational>) -> Row {
    Row::Trans { src: (src + 1).to_string(), label: label.into(), dst: (dst + 1).to_string(), weight: w }
}

/// Independent edges with a random density.
pub fn random_lts(r: &mut impl Rng, n: usize, labels: usize) -> Coalgebra {
    let density = r.gen_range(0.05..0.45);
    let mut rows = Vec::new();
    for x in 0..n {
        for a in &LABELS[..labels] {
            for y in 0..n {
                if r.gen_bool(density) {
                    rows.push(trans(x, a, y, None));
                }
            }
        }
    }
    build(Kind::Lts, labels, n, rows)
}

/// A random system of `k` states blown up to `n ≥ k` states, so that many
/// pairs are bisimilar but not identical.
pub fn expanded_lts(r: &mut impl Rng, n: usize, labels: usize) -> Coalgebra {
    let k = r.gen_range(1..=n.min(4));
    let density = r.gen_range(0.1..0.6);
    let base = random_edges(r, k, labels, density);
    let origin = surjection(r, n, k);
    let mut rows = Vec::new();
    for x in 0..n {
        for &(_, a, b2) in base.iter().filter(|e| e.0 == origin[x]) {
            let pre: Vec<usize> = (0..n).filter(|&y| origin[y] == b2).collect();
            let mut chosen: Vec<usize> = pre.iter().copied().filter(|_| r.gen_bool(0.5)).collect();
            if chosen.is_empty() {
                chosen.push(*pre.choose(r).expect("surjective"));
            }
            rows.extend(chosen.into_iter().map(|y| trans(x, a, y, None)));
        }
    }
    build(Kind::Lts, labels, n, rows)
}

fn random_edges(r: &mut impl Rng, k: usize, labels: usize, density: f64) -> Vec<(usize, &'static str, usize)> {
    let mut out = Vec::new();
    for x in 0..k {
        for a in &LABELS[..labels] {
            for y in 0..k {
                if r.gen_bool(density) {
                    out.push((x, *a, y));
                }
            }
        }
    }
    out
}

fn surjection(r: &mut impl Rng, n: usize, k: usize) -> Vec<usize> {
    let mut origin: Vec<usize> = (0..n).map(|i| if i < k { i } else { r.gen_range(0..k) }).collect();
    origin.shuffle(r);
    origin
}

/// `units` split into `parts` nonnegative integers.
fn composition(r: &mut impl Rng, units: u32, parts: usize) -> Vec<u32> {
    let mut out = vec![0; parts];
    for _ in 0..units {
        out[r.gen_range(0..parts)] += 1;
    }
    out
}

/// Per state and label: terminate, or a distribution with denominator ≤ 10.
pub fn random_pts(r: &mut impl Rng, n: usize, labels: usize) -> Coalgebra {
    let mut rows = Vec::new();
    for x in 0..n {
        for a in &LABELS[..labels] {
            if r.gen_bool(0.25) {
                continue;
            }
            let den = r.gen_range(1..=10u32);
            let k = r.gen_range(1..=n.min(3));
            let mut targets: Vec<usize> = (0..n).collect();
            targets.shuffle(r);
            for (&y, u) in targets[..k].iter().zip(composition(r, den, k)) {
                if u > 0 {
                    rows.push(trans(x, a, y, Some(ratio(u as i64, den as i64))));
                }
            }
        }
    }
    build(Kind::Pts, labels, n, rows)
}

/// Probabilistic counterpart of [`expanded_lts`]: each copy spreads the mass
/// its original sends to a class over that class's members.
pub fn expanded_pts(r: &mut impl Rng, n: usize, labels: usize) -> Coalgebra {
    let k = r.gen_range(1..=n.min(4));
    // base[x][a] = None (terminate) or units per base target, over `den`.
    let base: Vec<Vec<Option<(u32, Vec<u32>)>>> = (0..k)
        .map(|_| {
            (0..labels)
                .map(|_| {
                    if r.gen_bool(0.25) {
                        None
                    } else {
                        let den = r.gen_range(1..=10u32);
                        Some((den, composition(r, den, k)))
                    }
                })
                .collect()
        })
        .collect();
    let origin = surjection(r, n, k);
    let mut rows = Vec::new();
    for x in 0..n {
        for (ai, a) in LABELS[..labels].iter().enumerate() {
            let Some((den, units)) = &base[origin[x]][ai] else { continue };
            for (b2, &u) in units.iter().enumerate() {
                let pre: Vec<usize> = (0..n).filter(|&y| origin[y] == b2).collect();
                for (&y, part) in pre.iter().zip(composition(r, u, pre.len())) {
                    if part > 0 {
                        rows.push(trans(x, a, y, Some(ratio(part as i64, *den as i64))));
                    }
                }
            }
        }
    }
    build(Kind::Pts, labels, n, rows)
}

/// `count` systems of one kind: alternating plain random and expanded, with
/// 1 to 8 states and 1 or 2 labels.
pub fn suite(kind: Kind, seed: u64, count: usize) -> Vec<Coalgebra> {
    let mut r = rng(seed);
    (0..count)
        .map(|i| {
            let n = r.gen_range(1..=8);
            let labels = r.gen_range(1..=2);
            match (kind, i % 2) {
                (Kind::Lts, 0) => random_lts(&mut r, n, labels),
                (Kind::Lts, _) => expanded_lts(&mut r, n, labels),
                (Kind::Pts, 0) => random_pts(&mut r, n, labels),
                (Kind::Pts, _) => expanded_pts(&mut r, n, labels),
            }
        })
        .collect()
}

pub fn random_prob_obs(r: &mut impl Rng, labels: usize) -> ProbObs {
    ProbObs::new(LABELS[..labels].iter().map(|a| {
        let o = if r.gen_bool(0.2) {
            Outcome::Terminate
        } else {
            let den = r.gen_range(1..=10);
            Outcome::Mass(ratio(r.gen_range(0..=den), den))
        };
        (Label::new(a), o)
    }))
}

/// A random formula of modal depth at most `depth` over modalities that fit `c`.
pub fn random_formula(r: &mut impl Rng, c: &Coalgebra, depth: usize) -> Formula {
    let leaf = depth == 0 || r.gen_bool(0.2);
    if leaf {
        return if r.gen_bool(0.8) { Formula::tt() } else { Formula::ff() };
    }
    match r.gen_range(0..6) {
        0 => Formula::neg(random_formula(r, c, depth)),
        1 => Formula::Conj(vec![random_formula(r, c, depth - 1), random_formula(r, c, depth - 1)]),
        2 => Formula::Disj(vec![random_formula(r, c, depth - 1), random_formula(r, c, depth - 1)]),
        _ => Formula::modal(random_modality(r, c), random_formula(r, c, depth - 1)),
    }
}

fn random_modality(r: &mut impl Rng, c: &Coalgebra) -> Modality {
    let a = c.alphabet().choose(r).cloned();
    let cone = r.gen_bool(0.5);
    match (c.kind(), a) {
        (Kind::Lts, Some(a)) if !cone => {
            if r.gen_bool(0.5) {
                Named::Box(a).into()
            } else {
                Named::Dia(a).into()
            }
        }
        (Kind::Lts, _) => {
            let f2 = c.enumerate_f2().expect("small alphabet");
            Modality::Cone(f2.choose(r).expect("nonempty").clone())
        }
        (Kind::Pts, Some(a)) if !cone => {
            if r.gen_bool(0.7) {
                let den = r.gen_range(1..=10);
                Named::AtLeast(a, ratio(r.gen_range(0..=den), den)).into()
            } else {
                Named::IsTerminate(a).into()
            }
        }
        (Kind::Pts, _) => Modality::Cone(Observation::Prob(random_prob_obs(r, c.alphabet().len()))),
    }
}

// -------------------------------------------------------- exhaustive games

fn subsets(n: usize) -> impl Iterator<Item = Predicate> {
    (0..1u64 << n).map(move |m| Predicate::from_mask(n, m))
}

fn engine(c: &Coalgebra, a: &Analysis, g: &GameState) -> Result<GameState, String> {
    let mv = engine_move(c, a, g).map_err(|e| format!("engine failed: {e}"))?.ok_or("engine asked to move after the end")?;
    advance(c, g, &mv).map_err(|e| format!("engine move {mv:?} rejected: {e}"))
}

/// Engine spoiler against every duplicator: from `pos`, every legal reply
/// either loses at once or leads to a position with strictly smaller `I`.
/// Positions already verified are skipped. Returns the number of duplicator
/// branches explored.
pub fn check_spoiler_wins(
    c: &Coalgebra,
    a: &Analysis,
    pos: (StateId, StateId),
    verified: &mut HashSet<(StateId, StateId)>,
) -> Result<usize, String> {
    if verified.contains(&pos) {
        return Ok(0);
    }
    let n = c.len();
    let i = a.table.index(pos.0, pos.1).ok_or_else(|| format!("{pos:?} is bisimilar"))?;
    let start = GameState::new(c, pos);
    let g1 = engine(c, a, &start)?;
    let mut branches = 0;
    let mut next_positions = Vec::new();
    if g1.phase != Phase::SpoilerWon {
        for p in subsets(n) {
            let Ok(g2) = advance(c, &g1, &Move::Answer { predicate: p }) else { continue };
            branches += 1;
            if g2.phase == Phase::DuplicatorWon {
                return Err(format!("duplicator won at {pos:?} in Step 3: {:?}", g2.reason));
            }
            let g3 = engine(c, a, &g2)?;
            if g3.phase == Phase::SpoilerWon {
                continue;
            }
            for (_, x) in g3.legal_picks() {
                let g4 = advance(c, &g3, &Move::Respond { state: x }).map_err(|e| e.to_string())?;
                if g4.phase.is_over() {
                    return Err(format!("game ended with {:?} after a full round from {pos:?}", g4.phase));
                }
                match a.table.index(g4.position.0, g4.position.1) {
                    Some(k) if k < i => next_positions.push(g4.position),
                    other => return Err(format!("I did not drop: {pos:?} (I={i}) -> {:?} (I={other:?})", g4.position)),
                }
            }
        }
    }
    verified.insert(pos);
    for q in next_positions {
        branches += check_spoiler_wins(c, a, q, verified)?;
    }
    Ok(branches)
}

/// Engine duplicator against every spoiler: from every bisimilar position
/// reachable from `pos`, no spoiler move wins and every round ends in a
/// bisimilar position. By induction the duplicator survives any number of
/// rounds. Returns the number of spoiler branches explored.
pub fn check_duplicator_survives(
    c: &Coalgebra,
    a: &Analysis,
    pos: (StateId, StateId),
    verified: &mut HashSet<(StateId, StateId)>,
) -> Result<usize, String> {
    let n = c.len();
    let mut todo = vec![pos];
    let mut branches = 0;
    while let Some(pos) = todo.pop() {
        if !verified.insert(pos) {
            continue;
        }
        if !a.bisimilar(pos.0, pos.1) {
            return Err(format!("duplicator reached non-bisimilar {pos:?}"));
        }
        let start = GameState::new(c, pos);
        for j in 0..2 {
            for p in subsets(n) {
                let g1 = advance(c, &start, &Move::Challenge { j, predicate: p }).map_err(|e| e.to_string())?;
                if g1.phase == Phase::SpoilerWon {
                    return Err(format!("spoiler won in Step 2 at {pos:?}: {:?}", g1.reason));
                }
                let g2 = engine(c, a, &g1)?;
                if g2.phase == Phase::DuplicatorWon {
                    continue;
                }
                for (ell, x) in g2.legal_picks() {
                    branches += 1;
                    let g3 = advance(c, &g2, &Move::Pick { ell, state: x }).map_err(|e| e.to_string())?;
                    if g3.phase == Phase::SpoilerWon {
                        return Err(format!("spoiler won in Step 4 at {pos:?}: {:?}", g3.reason));
                    }
                    let g4 = engine(c, a, &g3)?;
                    todo.push(g4.position);
                }
            }
        }
    }
    Ok(branches)
}

/// Plays a whole game with a random spoiler against the engine duplicator.
pub fn random_spoiler_game(c: &Coalgebra, a: &Analysis, pos: (StateId, StateId), r: &mut impl Rng) -> GameState {
    let n = c.len();
    let mut g = GameState::new(c, pos);
    while !g.phase.is_over() {
        let mv = match g.phase {
            Phase::Step1 => Move::Challenge { j: r.gen_range(0..2), predicate: Predicate::from_mask(n, r.gen_range(0..1u64 << n)) },
            Phase::Step3 => {
                let (ell, state) = *g.legal_picks().choose(r).expect("some pick");
                Move::Pick { ell, state }
            }
            _ => engine_move(c, a, &g).expect("engine").expect("not over"),
        };
        g = advance(c, &g, &mv).expect("legal");
    }
    g
}

/// Signature multiset used to compare partitions by content.
pub fn block_names(c: &Coalgebra, p: &Partition) -> Vec<Vec<String>> {
    p.blocks().iter().map(|b| b.iter().map(|&s| c.name(s).to_string()).collect()).collect()
}

pub fn prob_obs(entries: &[(&str, Option<(i64, i64)>)]) -> Observation {
    Observation::Prob(ProbObs::new(entries.iter().map(|(a, q)| {
        (Label::new(a), q.map_or(Outcome::Terminate, |(n, d)| Outcome::Mass(ratio(n, d))))
    })))
}

pub fn histogram<T: Ord + Clone>(items: &[T]) -> BTreeMap<T, usize> {
    let mut m = BTreeMap::new();
    for i in items {
        *m.entry(i.clone()).or_insert(0) += 1;
    }
    m
}
