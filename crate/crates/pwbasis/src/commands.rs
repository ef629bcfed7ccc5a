//! One runner per subcommand: read the parameters (collecting every schema
//! error), call the verifiers, and turn their reports into JSON results
//! plus pass/fail checks.

use serde_json::{json, Map, Value};

use pwbasis_core::domain::Domain;
use pwbasis_core::gabor::{gabor_gram, vv_onb_check, GaborSystem};
use pwbasis_core::numerics::{seeded_rng, SeededRng};
use pwbasis_core::paley_wiener::{
    convolution_factorization_check, reference_profiles, shannon_reconstruct, verify_frame_transfer,
    verify_riesz_transfer, zd_periodization, AxisWindow, BandlimitedSignal, FrameSpace, SpectralWeight, WindowProfile,
    NORM_BOUND_SLACK, PERIODIZATION_TOLERANCE,
};
use pwbasis_core::spectra::{
    exp_gram, is_orthonormal_system, riesz_bounds, BoundsReport, BoundsVerdict, FrequencySet, GramLabels, Provenance,
};
use pwbasis_core::tiling::{
    cube_equivalence_check, is_spectrum, search_complements, search_spectra, tiles, GroupInstance, SearchOptions,
    SearchResult, SPECTRUM_TOLERANCE,
};
use pwbasis_core::tolerance::{ABSOLUTE, DEGENERATE, SANDWICH, SUPPORT_THRESHOLD, UNIT_MEASURE};
use pwbasis_core::{Complex64, HypothesisCheck};

use crate::schema::{join, read_domain, read_freqs, read_weight, Reader, DEFAULT_NODES};

/// Exactness required of the sinc series when the reference is exact.
pub const SINC_TOLERANCE: f64 = 1e-12;

/// Round-trip residual allowed in the convolution factorization.
pub const FACTORIZATION_TOLERANCE: f64 = 1e-12;

/// Residual allowed between the Gabor Gram and its Kronecker factors.
pub const KRON_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Bounds,
    Transfer,
    FrameTransfer,
    Tiling,
    CubeCheck,
    Sample,
    Gabor,
    Periodization,
    Factorization,
}

impl Command {
    pub const ALL: [Command; 9] = [
        Command::Bounds,
        Command::Transfer,
        Command::FrameTransfer,
        Command::Tiling,
        Command::CubeCheck,
        Command::Sample,
        Command::Gabor,
        Command::Periodization,
        Command::Factorization,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::Bounds => "bounds",
            Command::Transfer => "transfer",
            Command::FrameTransfer => "frame-transfer",
            Command::Tiling => "tiling",
            Command::CubeCheck => "cube-check",
            Command::Sample => "sample",
            Command::Gabor => "gabor",
            Command::Periodization => "periodization",
            Command::Factorization => "factorization",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|c| c.name() == name)
    }

    pub fn names() -> Vec<&'static str> {
        Self::ALL.iter().map(|c| c.name()).collect()
    }
}

/// Run-wide settings from the command line.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Settings {
    /// Effective seed.
    pub seed: u64,
    /// Replaces the default threshold of the commands' own verdict checks.
    pub tol: Option<f64>,
}

/// One verdict: a measured value judged against a tolerance.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub measured: f64,
    pub tolerance: f64,
}

impl Check {
    pub fn new(name: impl Into<String>, passed: bool, measured: f64, tolerance: f64) -> Self {
        Self {
            name: name.into(),
            passed,
            measured,
            tolerance,
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "name": self.name,
            "passed": self.passed,
            "measured": self.measured,
            "tolerance": self.tolerance,
        })
    }
}

/// CSV table attached to a result (sampled curves).
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub results: Value,
    pub checks: Vec<Check>,
    pub hypotheses: Vec<HypothesisCheck>,
    pub warnings: Vec<String>,
    /// Headline numbers for batch summaries.
    pub key_numbers: Vec<(&'static str, f64)>,
    pub table: Option<Table>,
}

impl Outcome {
    fn new(results: Value) -> Self {
        Self {
            results,
            checks: Vec::new(),
            hypotheses: Vec::new(),
            warnings: Vec::new(),
            key_numbers: Vec::new(),
            table: None,
        }
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// Reads the parameters of `command` and runs it. `None` means the reader
/// holds at least one error.
pub fn execute(command: Command, r: &mut Reader, params: &Value, settings: &Settings) -> Option<Outcome> {
    match command {
        Command::Bounds => bounds(r, params, settings),
        Command::Transfer => transfer(r, params),
        Command::FrameTransfer => frame_transfer(r, params),
        Command::Tiling => tiling(r, params, settings),
        Command::CubeCheck => cube_check(r, params, settings),
        Command::Sample => sample(r, params, settings),
        Command::Gabor => gabor(r, params, settings),
        Command::Periodization => periodization(r, params),
        Command::Factorization => factorization(r, params, settings),
    }
}

const P: &str = "parameters";

fn verdict_name(v: BoundsVerdict) -> &'static str {
    match v {
        BoundsVerdict::RieszBasis => "riesz_basis",
        BoundsVerdict::FrameOnlyNotTested => "frame_only_not_tested",
        BoundsVerdict::Degenerate => "degenerate",
    }
}

fn provenance_name(p: Provenance) -> &'static str {
    match p {
        Provenance::ClosedForm => "closed_form",
        Provenance::Quadrature => "quadrature",
    }
}

fn bounds_json(b: &BoundsReport) -> Value {
    json!({
        "lower": b.lower,
        "upper": b.upper,
        "condition": b.condition,
        "verdict": verdict_name(b.verdict),
        "eigen_residual": b.residual,
        "degenerate_tolerance": DEGENERATE,
    })
}

fn freqs_json(f: &FrequencySet) -> Value {
    Value::Array(f.points().map(|p| json!(p)).collect())
}

fn hypothesis(name: &'static str, passed: bool, measured: f64, tolerance: f64) -> HypothesisCheck {
    HypothesisCheck::new(name, passed, measured, tolerance)
}

fn unit_measure(domain: &Domain) -> HypothesisCheck {
    let m = domain.measure();
    hypothesis("unit measure", (m - 1.0).abs() <= UNIT_MEASURE, m, UNIT_MEASURE)
}

fn nowhere_zero(name: &'static str, w: &SpectralWeight) -> HypothesisCheck {
    hypothesis(name, w.fully_supported() && w.inf_mod() > SUPPORT_THRESHOLD, w.inf_mod(), SUPPORT_THRESHOLD)
}

fn weight_json(w: &SpectralWeight) -> Value {
    let mut v = json!({
        "nodes": w.rule().len(),
        "inf_mod": w.inf_mod(),
        "sup_mod": w.sup_mod(),
        "support_fraction": w.support_fraction(),
        "support_threshold": SUPPORT_THRESHOLD,
    });
    if let Some(e) = w.exact_moduli() {
        v["exact_inf_mod"] = json!(e.inf);
        v["exact_sup_mod"] = json!(e.sup);
    }
    v
}

/// `domain`, `freqs` and a weight under `weight_key`, all required.
fn system(r: &mut Reader, params: &Value, extra: &[&str], weight_key: &str) -> Option<(Domain, FrequencySet, SpectralWeight)> {
    let map = r.object(P, params, &[&["domain", "freqs", weight_key], extra].concat())?;
    let domain = r.required(P, map, "domain").and_then(|v| read_domain(r, &join(P, "domain"), v));
    let freqs = r.required(P, map, "freqs").and_then(|v| read_freqs(r, &join(P, "freqs"), v));
    let weight = r
        .required(P, map, weight_key)
        .and_then(|v| read_weight(r, &join(P, weight_key), v, domain.as_ref(), &[]))
        .and_then(Result::ok);
    Some((domain?, freqs?, weight?))
}

fn bounds(r: &mut Reader, params: &Value, settings: &Settings) -> Option<Outcome> {
    let map = r.object(P, params, &["domain", "freqs", "weight", "claim", "emit_gram"])?;
    let domain = r.required(P, map, "domain").and_then(|v| read_domain(r, &join(P, "domain"), v));
    let freqs = r.required(P, map, "freqs").and_then(|v| read_freqs(r, &join(P, "freqs"), v));
    let weight = match map.get("weight") {
        None => Some(None),
        Some(v) => read_weight(r, &join(P, "weight"), v, domain.as_ref(), &[]).and_then(Result::ok).map(Some),
    };
    let claim = r.or_default(P, map, "claim", "none", |r, p, v| r.choice(p, v, &["none", "riesz", "orthonormal"]));
    let emit = r.or_default(P, map, "emit_gram", false, |r, p, v| r.boolean(p, v));
    let (domain, freqs, weight, claim, emit) = (domain?, freqs?, weight?, claim?, emit?);

    let gram = r.check(P, exp_gram(&domain, &freqs, weight.as_ref()))?;
    let b = r.check(P, riesz_bounds(&gram))?;
    let tol = settings.tol.unwrap_or(ABSOLUTE);
    let onb = is_orthonormal_system(&gram, tol);

    let mut results = json!({
        "order": gram.order(),
        "provenance": provenance_name(gram.provenance),
        "measure": domain.measure(),
        "frequencies": freqs_json(&freqs),
        "bounds": bounds_json(&b),
        "orthonormal": {
            "orthonormal": onb.orthonormal,
            "max_deviation": onb.max_deviation,
            "tolerance": tol,
        },
        "claim": claim,
    });
    if let Some(w) = &weight {
        results["weight"] = weight_json(w);
    }
    if emit {
        let n = gram.order();
        let rows = |f: fn(Complex64) -> f64| -> Value {
            (0..n).map(|i| (0..n).map(|j| f(gram.matrix.get(i, j))).collect::<Vec<_>>()).collect()
        };
        results["gram"] = json!({ "re": rows(|z| z.re), "im": rows(|z| z.im) });
    }

    let mut out = Outcome::new(results);
    match claim {
        "riesz" => out.checks.push(Check::new(
            "riesz basis",
            b.verdict == BoundsVerdict::RieszBasis,
            if b.upper > 0.0 { b.lower / b.upper } else { 0.0 },
            DEGENERATE,
        )),
        "orthonormal" => out.checks.push(Check::new("orthonormal", onb.orthonormal, onb.max_deviation, tol)),
        _ => {}
    }
    out.hypotheses.push(unit_measure(&domain));
    if let Some(w) = &weight {
        out.hypotheses.push(nowhere_zero("weight nowhere zero", w));
        let unimodular = (w.sup_mod() - 1.0).abs().max((w.inf_mod() - 1.0).abs());
        out.hypotheses.push(hypothesis("weight unimodular", unimodular <= ABSOLUTE, unimodular, ABSOLUTE));
        out.warnings.extend(w.warnings().iter().cloned());
    }
    out.key_numbers = vec![("lower", b.lower), ("upper", b.upper), ("max_deviation", onb.max_deviation)];
    Some(out)
}

fn transfer(r: &mut Reader, params: &Value) -> Option<Outcome> {
    let (domain, freqs, weight) = system(r, params, &[], "weight")?;
    let t = r.check(P, verify_riesz_transfer(&domain, &freqs, &weight))?;
    let converse_lower = t.exp_bounds.lower - t.trans_bounds.lower / (t.sup_mod * t.sup_mod);
    let converse_upper = t.trans_bounds.upper / (t.inf_mod * t.inf_mod) - t.exp_bounds.upper;
    let results = json!({
        "route": provenance_name(t.route),
        "order": freqs.len(),
        "exp_bounds": bounds_json(&t.exp_bounds),
        "trans_bounds": bounds_json(&t.trans_bounds),
        "inf_mod": t.inf_mod,
        "sup_mod": t.sup_mod,
        "predicted_lower": t.predicted_lower,
        "predicted_upper": t.predicted_upper,
        "lower_margin": t.lower_margin,
        "upper_margin": t.upper_margin,
        "sandwich_holds": t.sandwich_holds,
        "converse_lower_margin": converse_lower,
        "converse_upper_margin": converse_upper,
        "converse_holds": t.converse_holds,
        "relative_tolerance": SANDWICH,
        "weight": weight_json(&weight),
    });
    let mut out = Outcome::new(results);
    out.checks.push(Check::new("sandwich", t.sandwich_holds, t.lower_margin.min(t.upper_margin), SANDWICH));
    out.checks.push(Check::new("converse", t.converse_holds, converse_lower.min(converse_upper), SANDWICH));
    out.hypotheses = t.hypotheses.clone();
    out.warnings.extend(weight.warnings().iter().cloned());
    out.key_numbers = vec![
        ("lower_margin", t.lower_margin),
        ("upper_margin", t.upper_margin),
        ("trans_lower", t.trans_bounds.lower),
        ("trans_upper", t.trans_bounds.upper),
    ];
    Some(out)
}

fn frame_transfer(r: &mut Reader, params: &Value) -> Option<Outcome> {
    let (domain, freqs, weight) = system(r, params, &[], "weight")?;
    let f = r.check(P, verify_frame_transfer(&domain, &freqs, &weight))?;
    let space = match f.space {
        FrameSpace::SupportNodes => "support_nodes",
        FrameSpace::SystemSpan => "system_span",
    };
    let results = json!({
        "space": space,
        "support_nodes": f.support_nodes,
        "total_nodes": f.total_nodes,
        "support_fraction": f.support_fraction,
        "support_is_proper": f.support_is_proper,
        "m": f.m,
        "big_m": f.big_m,
        "exp_bounds": bounds_json(&f.exp_bounds),
        "frame_bounds": bounds_json(&f.frame_bounds),
        "predicted_lower": f.predicted_lower,
        "predicted_upper": f.predicted_upper,
        "lower_margin": f.lower_margin,
        "upper_margin": f.upper_margin,
        "sandwich_holds": f.sandwich_holds,
        "converse_holds": f.converse_holds,
        "parseval_unweighted": f.parseval_unweighted,
        "parseval_weighted": f.parseval_weighted,
        "relative_tolerance": SANDWICH,
        "caveat": f.caveat,
        "weight": weight_json(&weight),
    });
    let mut out = Outcome::new(results);
    out.checks.push(Check::new("frame sandwich", f.sandwich_holds, f.lower_margin.min(f.upper_margin), SANDWICH));
    let converse = (f.exp_bounds.lower - f.frame_bounds.lower / f.big_m).min(f.frame_bounds.upper / f.m - f.exp_bounds.upper);
    out.checks.push(Check::new("frame converse", f.converse_holds, converse, SANDWICH));
    out.hypotheses = f.hypotheses.clone();
    out.warnings.push(f.caveat.to_string());
    out.warnings.extend(weight.warnings().iter().cloned());
    out.key_numbers = vec![
        ("lower_margin", f.lower_margin),
        ("upper_margin", f.upper_margin),
        ("frame_lower", f.frame_bounds.lower),
        ("frame_upper", f.frame_bounds.upper),
    ];
    Some(out)
}

fn search_options(r: &mut Reader, map: &Map<String, Value>, seed: u64) -> Option<SearchOptions> {
    let d = SearchOptions::default();
    let node_budget = r.or_default(P, map, "node_budget", d.node_budget, |r, p, v| r.unsigned(p, v));
    let samples = r.or_default(P, map, "samples", d.samples, |r, p, v| r.count(p, v));
    Some(SearchOptions {
        node_budget: node_budget?,
        samples: samples?,
        seed,
    })
}

fn moduli(r: &mut Reader, map: &Map<String, Value>) -> Option<Vec<u32>> {
    let p = join(P, "moduli");
    let v = r.required(P, map, "moduli")?;
    let items = r.nonempty_array(&p, v)?;
    r.each(&p, items, |r, p, x| {
        let n = r.count(p, x)?;
        match u32::try_from(n) {
            Ok(n) => Some(n),
            Err(_) => {
                r.error(p, "modulus too large");
                None
            }
        }
    })
}

fn search_json(s: &SearchResult) -> Value {
    json!({
        "found": s.found,
        "count": s.found.len(),
        "exhaustive": s.exhaustive,
        "count_examined": s.count_examined,
        "note": s.note,
    })
}

fn to_i64(sets: &[Vec<u32>]) -> Vec<Vec<i64>> {
    sets.iter().map(|p| p.iter().map(|&x| i64::from(x)).collect()).collect()
}

/// Re-checks every set a search returned: tiling in both orders and the
/// counting identity, or orthogonality and `|A| = |Omega|`.
fn audit_search(moduli: &[u32], omega: &[Vec<i64>], s: &SearchResult, complements: bool) -> (bool, usize) {
    let order: usize = moduli.iter().map(|&n| n as usize).product();
    let mut bad = 0;
    for set in &s.found {
        let a = to_i64(set);
        let ok = match GroupInstance::new(moduli, omega, &a) {
            Ok(inst) if complements => {
                tiles(&inst).tiles && tiles(&inst.swapped()).tiles && omega.len() * a.len() == order
            }
            Ok(inst) => is_spectrum(&inst).is_spectrum && a.len() == omega.len(),
            Err(_) => false,
        };
        bad += usize::from(!ok);
    }
    (bad == 0, bad)
}

fn tiling(r: &mut Reader, params: &Value, settings: &Settings) -> Option<Outcome> {
    let map = r.object(
        P,
        params,
        &["moduli", "omega", "candidate", "search", "expect_tiles", "expect_spectrum", "node_budget", "samples"],
    )?;
    let moduli = moduli(r, map);
    let omega = r.required(P, map, "omega").and_then(|v| r.elements(&join(P, "omega"), v));
    let candidate = match map.get("candidate") {
        None => Some(None),
        Some(v) => r.elements(&join(P, "candidate"), v).map(Some),
    };
    let default_search = if map.contains_key("candidate") { "none" } else { "both" };
    let search = r.or_default(P, map, "search", default_search, |r, p, v| {
        r.choice(p, v, &["none", "complements", "spectra", "both"])
    });
    let expect_tiles = match map.get("expect_tiles") {
        None => Some(None),
        Some(v) => r.boolean(&join(P, "expect_tiles"), v).map(Some),
    };
    let expect_spectrum = match map.get("expect_spectrum") {
        None => Some(None),
        Some(v) => r.boolean(&join(P, "expect_spectrum"), v).map(Some),
    };
    let options = search_options(r, map, settings.seed);
    let (moduli, omega, candidate, search, expect_tiles, expect_spectrum, options) =
        (moduli?, omega?, candidate?, search?, expect_tiles?, expect_spectrum?, options?);
    if candidate.is_none() && (expect_tiles.is_some() || expect_spectrum.is_some()) {
        r.error(P, "expectations need a \"candidate\"");
        return None;
    }

    let order: usize = moduli.iter().map(|&n| n as usize).product();
    let mut results = json!({ "moduli": moduli, "group_order": order, "omega": omega });
    let mut out = Outcome::new(Value::Null);

    if let Some(a) = &candidate {
        let inst = r.check(P, GroupInstance::new(&moduli, &omega, a))?;
        let t = tiles(&inst);
        let s = is_spectrum(&inst);
        let dual = tiles(&inst.swapped()).tiles;
        results["candidate"] = json!({
            "elements": inst.candidate(),
            "tiles": t.tiles,
            "tiles_swapped": dual,
            "max_multiplicity": t.coverage.iter().copied().max().unwrap_or(0),
            "is_spectrum": s.is_spectrum,
            "max_defect": s.max_defect,
            "defect_tolerance": SPECTRUM_TOLERANCE * omega.len() as f64,
        });
        out.checks.push(Check::new("tiling symmetric in the pair", t.tiles == dual, 0.0, 0.0));
        if let Some(e) = expect_tiles {
            out.checks.push(Check::new("tiles as expected", t.tiles == e, f64::from(u8::from(t.tiles)), 0.0));
        }
        if let Some(e) = expect_spectrum {
            out.checks.push(Check::new(
                "spectrum as expected",
                s.is_spectrum == e,
                s.max_defect,
                SPECTRUM_TOLERANCE * omega.len() as f64,
            ));
        }
        out.key_numbers.push(("max_defect", s.max_defect));
    }
    if matches!(search, "complements" | "both") {
        let s = r.check(P, search_complements(&moduli, &omega, &options))?;
        let (ok, bad) = audit_search(&moduli, &omega, &s, true);
        out.checks.push(Check::new("complements tile both ways", ok, bad as f64, 0.0));
        out.hypotheses.push(hypothesis(
            "omega size divides group order",
            order % omega.len() == 0,
            (order % omega.len()) as f64,
            0.0,
        ));
        out.hypotheses.push(hypothesis("complement search exhaustive", s.exhaustive, s.count_examined as f64, options.node_budget as f64));
        out.key_numbers.push(("complements", s.found.len() as f64));
        results["complements"] = search_json(&s);
    }
    if matches!(search, "spectra" | "both") {
        let s = r.check(P, search_spectra(&moduli, &omega, &options))?;
        let (ok, bad) = audit_search(&moduli, &omega, &s, false);
        out.checks.push(Check::new("spectra orthogonal", ok, bad as f64, 0.0));
        out.hypotheses.push(hypothesis("spectrum search exhaustive", s.exhaustive, s.count_examined as f64, options.node_budget as f64));
        out.key_numbers.push(("spectra", s.found.len() as f64));
        results["spectra"] = search_json(&s);
    }
    out.results = results;
    Some(out)
}

fn cube_check(r: &mut Reader, params: &Value, settings: &Settings) -> Option<Outcome> {
    let map = r.object(P, params, &["moduli", "side", "node_budget", "samples"])?;
    let moduli = moduli(r, map);
    let side = r.required(P, map, "side").and_then(|v| r.count(&join(P, "side"), v));
    let options = search_options(r, map, settings.seed);
    let (moduli, side, options) = (moduli?, side?, options?);
    let Ok(side) = u32::try_from(side) else {
        r.error(&join(P, "side"), "side too large");
        return None;
    };
    let c = r.check(P, cube_equivalence_check(&moduli, side, &options))?;
    let mismatched = c.tilings.found.iter().filter(|s| !c.spectra.found.contains(s)).count()
        + c.spectra.found.iter().filter(|s| !c.tilings.found.contains(s)).count();
    let mut out = Outcome::new(json!({
        "moduli": c.moduli,
        "side": c.side,
        "tilings": search_json(&c.tilings),
        "spectra": search_json(&c.spectra),
        "equal": c.equal,
        "exhaustive": c.exhaustive(),
    }));
    out.checks.push(Check::new("tiling family equals spectrum family", c.equal, mismatched as f64, 0.0));
    let worst = moduli.iter().map(|n| n % side).max().unwrap_or(0);
    out.hypotheses.push(hypothesis("side divides every modulus", worst == 0, f64::from(worst), 0.0));
    out.hypotheses.push(hypothesis("searches exhaustive", c.exhaustive(), (c.tilings.count_examined + c.spectra.count_examined) as f64, options.node_budget as f64));
    if !c.exhaustive() {
        out.warnings.push("search was sampled, not exhaustive: the families may be incomplete".into());
    }
    out.key_numbers = vec![("tilings", c.tilings.found.len() as f64), ("spectra", c.spectra.found.len() as f64)];
    Some(out)
}

/// `f^(xi) = sum_j sum_{k <= 3} c_jk xi_j^k` with complex normal `c_jk`.
fn random_smooth(rng: &mut SeededRng, d: usize) -> impl Fn(&[f64]) -> Complex64 {
    let coeffs: Vec<Complex64> = (0..4 * d).map(|_| Complex64::new(rng.normal(), rng.normal())).collect();
    move |x: &[f64]| {
        let mut v = Complex64::new(0.0, 0.0);
        for (j, &t) in x.iter().enumerate() {
            let mut power = 1.0;
            for k in 0..4 {
                v += coeffs[4 * j + k] * power;
                power *= t;
            }
        }
        v
    }
}

/// A signal in the weight format, or `{"profile": "random", "nodes": n}`.
fn read_signal(r: &mut Reader, path: &str, v: &Value, domain: Option<&Domain>, rng: &mut SeededRng) -> Option<(BandlimitedSignal, String)> {
    let parsed = read_weight(r, path, v, domain, &["random"])?;
    let domain = domain?;
    match parsed {
        Ok(w) => {
            let profile = v["profile"].as_str().unwrap_or("table").to_string();
            let nodes = v.get("nodes").and_then(Value::as_u64).map_or(DEFAULT_NODES, |n| n as usize);
            r.check(path, BandlimitedSignal::new(domain, nodes, w.values().to_vec()))
                .map(|s| (s, profile))
        }
        Err((_, nodes)) => {
            let f = random_smooth(rng, domain.dimension());
            r.check(path, BandlimitedSignal::from_fn(domain, nodes, f)).map(|s| (s, "random".into()))
        }
    }
}

fn sinc(x: f64) -> f64 {
    if x == 0.0 {
        1.0
    } else {
        let t = std::f64::consts::PI * x;
        t.sin() / t
    }
}

fn sample(r: &mut Reader, params: &Value, settings: &Settings) -> Option<Outcome> {
    let map = r.object(P, params, &["domain", "signal", "truncations", "eval", "reference", "error_tolerance"])?;
    let domain = match map.get("domain") {
        None => Some(Domain::unit_interval_centered()),
        Some(v) => read_domain(r, &join(P, "domain"), v),
    };
    let mut rng = seeded_rng(settings.seed);
    let signal = r
        .required(P, map, "signal")
        .and_then(|v| read_signal(r, &join(P, "signal"), v, domain.as_ref(), &mut rng));
    let truncations = r.required(P, map, "truncations").and_then(|v| {
        let p = join(P, "truncations");
        let items = r.nonempty_array(&p, v)?;
        r.each(&p, items, |r, p, x| r.unsigned(p, x).map(|n| n as usize))
    });
    let points = r.required(P, map, "eval").and_then(|v| read_eval(r, &join(P, "eval"), v));
    let reference = match map.get("reference") {
        None => Some(None),
        Some(v) => r.choice(&join(P, "reference"), v, &["sinc", "quadrature"]).map(Some),
    };
    let error_tolerance = match map.get("error_tolerance") {
        None => Some(None),
        Some(v) => r.positive(&join(P, "error_tolerance"), v).map(Some),
    };
    let (signal, truncations, points, reference, error_tolerance) =
        (signal?, truncations?, points?, reference?, error_tolerance?);
    let (signal, profile) = signal;
    let reference = reference.unwrap_or(if profile == "indicator" { "sinc" } else { "quadrature" });
    if reference == "sinc" && profile != "indicator" {
        r.error(&join(P, "reference"), "the exact sinc reference needs the indicator signal");
        return None;
    }
    let exact: Vec<Complex64> = points
        .iter()
        .map(|&x| match reference {
            "sinc" => Complex64::new(sinc(x), 0.0),
            _ => signal.evaluate(&[x]),
        })
        .collect();
    let exact_norm = exact.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();

    let mut rows = Vec::new();
    let mut curve = Vec::new();
    let mut energies = Vec::new();
    let mut signal_energy = 0.0;
    for &n in &truncations {
        let s = r.check(&join(P, "truncations"), shannon_reconstruct(&signal, n, &points))?;
        let diff: Vec<f64> = s.reconstruction.iter().zip(&exact).map(|(a, b)| (a - b).norm_sqr().sqrt()).collect();
        let max_error = diff.iter().copied().fold(0.0, f64::max);
        let l2 = diff.iter().map(|e| e * e).sum::<f64>().sqrt();
        let relative = if exact_norm > 0.0 { l2 / exact_norm } else { l2 };
        signal_energy = s.signal_energy;
        energies.push(s.coefficient_energy);
        curve.push(json!({
            "truncation": n,
            "max_abs_error": max_error,
            "relative_l2_error": relative,
            "coefficient_energy": s.coefficient_energy,
            "tail_energy": s.tail_energy,
        }));
        rows.push((n, max_error, relative, s.coefficient_energy, s.tail_energy));
    }

    let mut out = Outcome::new(json!({
        "signal": profile,
        "reference": reference,
        "eval_points": points.len(),
        "signal_energy": signal_energy,
        "curve": curve,
    }));
    let mut order: Vec<usize> = (0..rows.len()).collect();
    order.sort_by_key(|&i| rows[i].0);
    let min_step = order.windows(2).map(|w| energies[w[1]] - energies[w[0]]).fold(f64::INFINITY, f64::min);
    let energy_slack = 1e-8;
    out.checks.push(Check::new(
        "coefficient energy non-decreasing in N",
        min_step >= -energy_slack * signal_energy,
        if min_step.is_finite() { min_step } else { 0.0 },
        energy_slack,
    ));
    let max_ratio = energies.iter().map(|e| if signal_energy > 0.0 { e / signal_energy - 1.0 } else { *e }).fold(f64::NEG_INFINITY, f64::max);
    out.checks.push(Check::new("coefficient energy bounded by signal energy", max_ratio <= energy_slack, max_ratio, energy_slack));
    if reference == "sinc" {
        let tol = settings.tol.unwrap_or(SINC_TOLERANCE);
        let worst = rows.iter().map(|r| r.1).fold(0.0, f64::max);
        out.checks.push(Check::new("sinc series exact", worst <= tol, worst, tol));
    }
    if let Some(tol) = error_tolerance {
        let last = rows[*order.last().expect("truncations are nonempty")].2;
        out.checks.push(Check::new("relative error at largest truncation", last <= tol, last, tol));
    }
    out.hypotheses.push(hypothesis("band is [-1/2, 1/2]", true, signal.domain().measure(), 1e-12));
    out.key_numbers = vec![
        ("max_abs_error", rows.iter().map(|r| r.1).fold(0.0, f64::max)),
        ("final_relative_error", rows[*order.last().expect("nonempty")].2),
    ];
    out.table = Some(Table {
        header: vec!["truncation", "max_abs_error", "relative_l2_error", "coefficient_energy", "tail_energy"],
        rows: rows
            .iter()
            .map(|&(n, a, b, c, d)| {
                vec![n.to_string(), crate::output::csv_number(a), crate::output::csv_number(b), crate::output::csv_number(c), crate::output::csv_number(d)]
            })
            .collect(),
    });
    Some(out)
}

/// `[x, ...]` or `{"lo": a, "hi": b, "count": n}` (inclusive, evenly spaced).
fn read_eval(r: &mut Reader, path: &str, v: &Value) -> Option<Vec<f64>> {
    if v.is_array() {
        return r.numbers(path, v);
    }
    let map = r.object(path, v, &["lo", "hi", "count"])?;
    let lo = r.required(path, map, "lo").and_then(|x| r.number(&join(path, "lo"), x));
    let hi = r.required(path, map, "hi").and_then(|x| r.number(&join(path, "hi"), x));
    let count = r.required(path, map, "count").and_then(|x| r.count(&join(path, "count"), x));
    let (lo, hi, count) = (lo?, hi?, count?);
    if count > 100_000 {
        r.error(&join(path, "count"), "at most 100000 evaluation points");
        return None;
    }
    if count == 1 {
        return Some(vec![lo]);
    }
    let step = (hi - lo) / (count - 1) as f64;
    Some((0..count).map(|i| if i + 1 == count { hi } else { lo + i as f64 * step }).collect())
}

fn gabor(r: &mut Reader, params: &Value, settings: &Settings) -> Option<Outcome> {
    let (domain, freqs, window) = system(r, params, &["claim"], "window")?;
    let map = params.as_object().expect("validated as an object");
    let claim = r.or_default(P, map, "claim", "none", |r, p, v| r.choice(p, v, &["none", "orthonormal"]))?;
    let sys = r.check(P, GaborSystem::new(&domain, &freqs, &window))?;
    let tol = settings.tol.unwrap_or(ABSOLUTE);
    let rep = r.check(P, vv_onb_check(&sys, tol))?;
    let g = r.check(P, gabor_gram(&sys))?;
    let pairs: Vec<Value> = match &g.labels {
        GramLabels::Pairs { freqs, pairs } => {
            pairs.iter().map(|&(ia, ib)| json!([freqs.point(ia), freqs.point(ib)])).collect()
        }
        GramLabels::Frequencies(_) => Vec::new(),
    };
    let mut out = Outcome::new(json!({
        "order": g.order(),
        "pairs": pairs,
        "translates_onb": rep.translates_onb,
        "gabor_onb": rep.gabor_onb,
        "exponentials_onb": rep.exponentials_onb,
        "equivalent": rep.equivalent,
        "lemma_direction_holds": rep.lemma_direction_holds,
        "translate_deviation": rep.translate_deviation,
        "gabor_deviation": rep.gabor_deviation,
        "exp_deviation": rep.exp_deviation,
        "orthonormal_tolerance": tol,
        "kron_residual": rep.kron_residual,
        "kron_tolerance": KRON_TOLERANCE,
        "note": rep.note,
        "claim": claim,
        "window": weight_json(&window),
    }));
    out.checks.push(Check::new("kronecker factorization", rep.kron_residual <= KRON_TOLERANCE, rep.kron_residual, KRON_TOLERANCE));
    out.checks.push(Check::new(
        "translates orthonormal iff gabor orthonormal",
        rep.equivalent,
        (rep.translate_deviation - rep.gabor_deviation).abs(),
        tol,
    ));
    out.checks.push(Check::new("orthonormal translates and exponentials give orthonormal gabor", rep.lemma_direction_holds, rep.gabor_deviation, tol));
    if claim == "orthonormal" {
        out.checks.push(Check::new("gabor orthonormal", rep.gabor_onb, rep.gabor_deviation, tol));
    }
    out.hypotheses = rep.hypotheses.clone();
    out.warnings.push(rep.note.to_string());
    out.warnings.extend(window.warnings().iter().cloned());
    out.key_numbers = vec![("kron_residual", rep.kron_residual), ("gabor_deviation", rep.gabor_deviation)];
    Some(out)
}

fn read_axis(r: &mut Reader, path: &str, v: &Value) -> Option<AxisWindow> {
    let map = v.as_object();
    let kind = match map.and_then(|m| m.get("kind")) {
        Some(k) => r.choice(&join(path, "kind"), k, &["indicator", "hat", "sqrt_hat", "gaussian"])?,
        None => {
            r.object(path, v, &["kind"])?;
            r.error(&join(path, "kind"), "missing required key");
            return None;
        }
    };
    if kind == "gaussian" {
        let map = r.object(path, v, &["kind", "center", "width"])?;
        let c = r.required(path, map, "center").and_then(|x| r.number(&join(path, "center"), x));
        let w = r.required(path, map, "width").and_then(|x| r.positive(&join(path, "width"), x));
        return Some(AxisWindow::Gaussian { center: c?, width: w? });
    }
    let map = r.object(path, v, &["kind", "lo", "hi"])?;
    let lo = r.required(path, map, "lo").and_then(|x| r.number(&join(path, "lo"), x));
    let hi = r.required(path, map, "hi").and_then(|x| r.number(&join(path, "hi"), x));
    let (lo, hi) = (lo?, hi?);
    Some(match kind {
        "indicator" => AxisWindow::Indicator { lo, hi },
        "hat" => AxisWindow::Hat { lo, hi },
        _ => AxisWindow::SqrtHat { lo, hi },
    })
}

fn periodization(r: &mut Reader, params: &Value) -> Option<Outcome> {
    let map = r.object(P, params, &["profile", "reference", "resolution", "translate_radius", "expect_onb"])?;
    let profile = match map.get("profile") {
        None => Some(None),
        Some(v) => {
            let p = join(P, "profile");
            r.object(&p, v, &["axes", "amplitude"]).and_then(|m| {
                let axes = r.required(&p, m, "axes").and_then(|a| {
                    let ap = join(&p, "axes");
                    let items = r.nonempty_array(&ap, a)?;
                    r.each(&ap, items, read_axis)
                });
                let amplitude = r.or_default(&p, m, "amplitude", 1.0, |r, p, x| r.number(p, x));
                Some(Some(WindowProfile::new(axes?, amplitude?)))
            })
        }
    };
    let reference = r.or_default(P, map, "reference", false, |r, p, v| r.boolean(p, v));
    let resolution = r.or_default(P, map, "resolution", 64, |r, p, v| r.count(p, v));
    let radius = r.or_default(P, map, "translate_radius", 4, |r, p, v| r.unsigned(p, v).map(|n| n as usize));
    let expect = match map.get("expect_onb") {
        None => Some(None),
        Some(v) => r.boolean(&join(P, "expect_onb"), v).map(Some),
    };
    let (profile, reference, resolution, radius, expect) = (profile?, reference?, resolution?, radius?, expect?);
    let cases: Vec<(String, WindowProfile, Option<bool>)> = match (profile, reference) {
        (Some(p), false) => vec![("profile".into(), p, expect)],
        (None, true) => {
            if expect.is_some() {
                r.error(&join(P, "expect_onb"), "reference profiles carry their own expectations");
                return None;
            }
            reference_profiles().into_iter().map(|(n, p, e)| (n.to_string(), p, Some(e))).collect()
        }
        _ => {
            r.error(P, "needs exactly one of \"profile\" or \"reference\": true");
            return None;
        }
    };
    let cells = resolution.checked_pow(cases.iter().map(|c| c.1.dimension()).max().unwrap_or(1) as u32);
    if cells.map_or(true, |c| c > 1 << 20) {
        r.error(&join(P, "resolution"), "grid exceeds 2^20 points");
        return None;
    }

    let mut out = Outcome::new(Value::Null);
    let mut entries = Vec::new();
    let mut worst_gap: f64 = 0.0;
    for (name, profile, expected) in &cases {
        let rep = r.check(P, zd_periodization(profile, resolution, radius))?;
        let mut entry = json!({
            "name": name,
            "dimension": profile.dimension(),
            "max_deviation": rep.max_deviation,
            "verdict": rep.verdict,
            "tolerance": PERIODIZATION_TOLERANCE,
            "gram_deviation": rep.gram_deviation,
            "gram_orthonormal": rep.gram_orthonormal,
            "agrees": rep.agrees,
        });
        if cases.len() == 1 {
            entry["values"] = json!(rep.values);
        }
        if let Some(e) = expected {
            entry["expected"] = json!(e);
            out.checks.push(Check::new(format!("verdict as expected: {name}"), rep.verdict == *e, rep.max_deviation, PERIODIZATION_TOLERANCE));
        }
        out.checks.push(Check::new(format!("periodization agrees with translate gram: {name}"), rep.agrees, rep.gram_deviation, PERIODIZATION_TOLERANCE));
        worst_gap = worst_gap.max(rep.max_deviation);
        entries.push(entry);
    }
    out.hypotheses.push(hypothesis("compact support", true, cases.len() as f64, 0.0));
    out.results = json!({ "resolution": resolution, "translate_radius": radius, "profiles": entries });
    out.key_numbers = vec![("profiles", cases.len() as f64), ("max_deviation", worst_gap)];
    Some(out)
}

fn factorization(r: &mut Reader, params: &Value, settings: &Settings) -> Option<Outcome> {
    let map = r.object(P, params, &["domain", "psi", "signal", "count"])?;
    let domain = r.required(P, map, "domain").and_then(|v| read_domain(r, &join(P, "domain"), v));
    let psi = r
        .required(P, map, "psi")
        .and_then(|v| read_weight(r, &join(P, "psi"), v, domain.as_ref(), &[]))
        .and_then(Result::ok);
    let count = r.or_default(P, map, "count", 1, |r, p, v| r.count(p, v));
    let signal_spec = r.required(P, map, "signal");
    let (domain, psi, count, signal_spec) = (domain?, psi?, count?, signal_spec?);
    let random = signal_spec.get("profile").and_then(Value::as_str) == Some("random");
    if count > 1 && !random {
        r.error(&join(P, "count"), "several signals need the random profile");
        return None;
    }
    if count > 1000 {
        r.error(&join(P, "count"), "at most 1000 signals");
        return None;
    }
    let mut rng = seeded_rng(settings.seed);
    let tol = settings.tol.unwrap_or(FACTORIZATION_TOLERANCE);
    let mut entries = Vec::new();
    let mut worst_residual: f64 = 0.0;
    let mut worst_bound = f64::NEG_INFINITY;
    let mut bound_ok = true;
    let mut hypotheses = Vec::new();
    for _ in 0..count {
        let (signal, _) = read_signal(r, &join(P, "signal"), signal_spec, Some(&domain), &mut rng)?;
        let rep = r.check(P, convolution_factorization_check(&psi, &signal))?;
        worst_residual = worst_residual.max(rep.residual);
        worst_bound = worst_bound.max(rep.factor_norm - rep.norm_bound);
        bound_ok &= rep.bound_holds;
        entries.push(json!({
            "residual": rep.residual,
            "signal_norm": rep.signal_norm,
            "factor_norm": rep.factor_norm,
            "norm_bound": rep.norm_bound,
            "bound_holds": rep.bound_holds,
        }));
        hypotheses = rep.hypotheses;
    }
    let mut out = Outcome::new(json!({
        "signals": entries,
        "max_residual": worst_residual,
        "residual_tolerance": tol,
        "norm_bound_slack": NORM_BOUND_SLACK,
        "psi": weight_json(&psi),
    }));
    out.checks.push(Check::new("roundtrip residual", worst_residual <= tol, worst_residual, tol));
    out.checks.push(Check::new("factor norm bound", bound_ok, worst_bound, NORM_BOUND_SLACK));
    out.hypotheses = hypotheses;
    out.warnings.extend(psi.warnings().iter().cloned());
    out.key_numbers = vec![("max_residual", worst_residual)];
    Some(out)
}
