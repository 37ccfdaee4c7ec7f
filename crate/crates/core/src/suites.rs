//! Named property suites, each run at a fixed desk scale.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::color::color_by_lines;
use crate::dual::{
    construct_r, construct_s, construct_t, continuant_numerator, det_via_lr, incident_vertices,
    lr_sequence_with, max_pairwise_det, Reading,
};
use crate::error::{Error, Result};
use crate::graph::{build, Mode, WindowSpec};
use crate::projline::{line_count, min_line_count_above, next_prime, LineSpace};
use crate::structure::{
    clique_number_exact_k, cut_vertex_check, find_isolated_witnesses, find_linked_pair,
    first_level_exceeding, is_forest, planarity_linking_check, stabilization, verify_monotone,
    CutCheck,
};
use crate::vertex::{det_pair, FareyVertex, Level};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    #[serde(rename = "theorem1")]
    ComponentCounts,
    Tree,
    Cut,
    Planarity,
    LrOracle,
    Constructions,
    Coloring,
}

impl Suite {
    pub const ALL: [Suite; 7] = [
        Suite::ComponentCounts,
        Suite::Tree,
        Suite::Cut,
        Suite::Planarity,
        Suite::LrOracle,
        Suite::Constructions,
        Suite::Coloring,
    ];
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Suite::ComponentCounts => "theorem1",
            Suite::Tree => "tree",
            Suite::Cut => "cut",
            Suite::Planarity => "planarity",
            Suite::LrOracle => "lr-oracle",
            Suite::Constructions => "constructions",
            Suite::Coloring => "coloring",
        })
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.to_string() == s)
            .ok_or_else(|| Error::Parse(format!("unknown suite {s:?}")))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub checks: Vec<Check>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

struct Checks(Vec<Check>);

impl Checks {
    fn add(&mut self, name: impl Into<String>, pass: bool, detail: impl Into<String>) {
        self.0.push(Check { name: name.into(), pass, detail: detail.into() });
    }
}

pub fn run_suite(suite: Suite) -> Result<SuiteReport> {
    let mut c = Checks(Vec::new());
    match suite {
        Suite::ComponentCounts => component_counts(&mut c)?,
        Suite::Tree => tree(&mut c)?,
        Suite::Cut => cut(&mut c)?,
        Suite::Planarity => planarity(&mut c)?,
        Suite::LrOracle => lr_oracle(&mut c)?,
        Suite::Constructions => constructions(&mut c)?,
        Suite::Coloring => coloring(&mut c)?,
    }
    Ok(SuiteReport { suite, checks: c.0 })
}

pub const PRIME_POWERS: [u64; 10] = [2, 3, 4, 5, 7, 8, 9, 11, 13, 16];
pub const NON_PRIME_POWERS: [u64; 5] = [6, 10, 12, 14, 15];

fn component_counts(c: &mut Checks) -> Result<()> {
    for k in PRIME_POWERS {
        let r = stabilization(k, 200)?;
        c.add(
            format!("k={k} stabilizes"),
            r.stabilized && r.plateau == r.target,
            format!("target {:?}, plateau {:?} from level {:?}", r.target, r.plateau, r.first_level),
        );
    }
    for k in NON_PRIME_POWERS {
        let m = verify_monotone(k, k + 1, 500)?;
        c.add(
            format!("k={k} monotone to level 500"),
            m.pass,
            m.counterexample.map_or("no merges".into(), |w| format!("{w:?}")),
        );
        let bound = 3 * line_count(k) as usize;
        let lvl = first_level_exceeding(k, bound, 500)?;
        c.add(format!("k={k} b0 > {bound} by level 500"), lvl.is_some(), format!("{lvl:?}"));
        let w = find_isolated_witnesses(k, 10)?;
        c.add(format!("k={k} isolated witnesses"), w.len() == 10, format!("{} found", w.len()));
    }
    Ok(())
}

fn tree(c: &mut Checks) -> Result<()> {
    let window = WindowSpec::level_cap(30);
    for k in (2..=12).step_by(2) {
        let g = build(Mode::ExactK, k, window)?;
        let mut bad = None;
        for comp in 0..g.component_count() {
            if !is_forest(&g, comp)? {
                bad = Some(comp);
                break;
            }
        }
        c.add(format!("k={k} components acyclic"), bad.is_none(), format!("{bad:?}"));
    }
    for k in (1..=12).step_by(2) {
        let tri = [
            FareyVertex::INFINITY,
            FareyVertex::new(1, k as i64)?,
            FareyVertex::new(2, k as i64)?,
        ];
        let ok = (0..3).all(|i| det_pair(tri[i], tri[(i + 1) % 3]) == k);
        c.add(format!("k={k} triangle 1/0, 1/k, 2/k"), ok, "");
    }
    for k in 1..=12 {
        let w = clique_number_exact_k(k, WindowSpec::level_cap(2 * k + 2))?;
        let want = if k % 2 == 0 { 2 } else { 3 };
        c.add(format!("k={k} clique number"), w == want, format!("{w}"));
    }
    Ok(())
}

fn cut(c: &mut Checks) -> Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(0xC07);
    for k in 2..=8 {
        let g = build(Mode::ExactK, k, WindowSpec::level_cap(40))?;
        let mut order: Vec<usize> = (0..g.len()).collect();
        order.shuffle(&mut rng);
        let (mut cut, mut not) = (0, Vec::new());
        for i in order {
            match cut_vertex_check(&g, g.vertices()[i], Level(10))? {
                CutCheck::Cut => cut += 1,
                CutCheck::NotCut => not.push(g.vertices()[i]),
                CutCheck::Inconclusive => continue,
            }
            if cut + not.len() == 50 {
                break;
            }
        }
        c.add(
            format!("k={k} sampled vertices are cut vertices"),
            cut == 50 && not.is_empty(),
            format!("{cut} cut, not cut: {not:?}"),
        );
    }
    Ok(())
}

fn planarity(c: &mut Checks) -> Result<()> {
    let g = build(Mode::ExactK, 1, WindowSpec::level_cap(12))?;
    let edges: Vec<_> = g.edges().map(|(i, j)| (g.vertices()[i], g.vertices()[j])).collect();
    c.add("k=1 unlinked", find_linked_pair(&edges).is_none(), "");
    for k in 2..=8 {
        let g = build(Mode::ExactK, k, WindowSpec::level_cap(30))?;
        let lines = LineSpace::new(k)?.lines();
        let mut bad = Vec::new();
        for line in &lines {
            if !planarity_linking_check(&g, *line)? {
                bad.push(line.to_string());
            }
        }
        c.add(format!("k={k} all {} lines unlinked", lines.len()), bad.is_empty(), bad.join(" "));
    }
    let g = build(Mode::AtMostK, 2, WindowSpec::level_cap(2))?;
    let edges: Vec<_> = g.edges().map(|(i, j)| (g.vertices()[i], g.vertices()[j])).collect();
    let linked = find_linked_pair(&edges);
    c.add("negative control F_<=2 links", linked.is_some(), format!("{linked:?}"));
    Ok(())
}

fn random_vertex(rng: &mut impl Rng, max_level: i64) -> FareyVertex {
    loop {
        let q = rng.gen_range(0..=max_level);
        let p = rng.gen_range(-max_level..=max_level);
        if let Ok(v) = FareyVertex::new(p, q) {
            if v.level().0 <= max_level as u64 {
                return v;
            }
        }
    }
}

fn lr_oracle(c: &mut Checks) -> Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x1f);
    let mut tested = 0;
    let mut bad = Vec::new();
    while tested < 200 {
        let (a, b) = (random_vertex(&mut rng, 50), random_vertex(&mut rng, 50));
        let d = det_pair(a, b);
        if d < 2 {
            continue;
        }
        tested += 1;
        let via = det_via_lr(a, b)?;
        let co = continuant_numerator(&lr_sequence_with(a, b, Reading::Co)?);
        let back = det_via_lr(b, a)?;
        if via != d.into() || co != via || back != via {
            bad.push(format!("{a} {b}"));
        }
    }
    c.add("200 random pairs", bad.is_empty(), bad.join(", "));
    let (a, b) = ("-2/1".parse()?, "1/3".parse()?);
    let readings = [
        lr_sequence_with(a, b, Reading::Primary)?,
        lr_sequence_with(a, b, Reading::Co)?,
        lr_sequence_with(b, a, Reading::Primary)?,
        lr_sequence_with(b, a, Reading::Co)?,
    ];
    let nums: Vec<String> = readings.iter().map(|s| continuant_numerator(s).to_string()).collect();
    c.add("worked example readings", nums.iter().all(|n| n == "7"), nums.join(" "));
    Ok(())
}

fn constructions(c: &mut Checks) -> Result<()> {
    for n in 2..=12u64 {
        for (name, sub, want) in [
            ("R", construct_r(n)?, (n + 1, n - 1)),
            ("S", construct_s(n)?, (2 * n + 2, 2 * n - 1)),
            ("T", construct_t(n)?, (12 * n, 12 * n - 4)),
        ] {
            let inc = incident_vertices(&sub);
            let got = (inc.v_k.len() as u64, max_pairwise_det(&inc.v_k));
            c.add(format!("{name}_{n}"), got == want, format!("|V|, I = {got:?}, want {want:?}"));
        }
    }
    Ok(())
}

fn coloring(c: &mut Checks) -> Result<()> {
    for k in 1..=30 {
        let r = next_prime(k);
        let res = color_by_lines(k, r, WindowSpec::level_cap(60));
        let (ok, detail) = match res {
            Ok(col) => (col.colors_used as u64 <= r + 1, format!("{} colors", col.colors_used)),
            Err(e) => (false, e.to_string()),
        };
        c.add(format!("k={k} phi_{r} proper, at most {} colors", r + 1), ok, detail);
    }
    let m = min_line_count_above(7, 30)?;
    c.add("min line count above 7", m == (11, 12), format!("{m:?}"));
    Ok(())
}
