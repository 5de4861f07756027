//! Builtin experiment suites.

use markov_groupoids::diagnostics::{
    approx_invariance_certificate, dense_zero_two, finite_fiber_oracle, free_group_radial_series,
    zero_two_decay, AmenabilityCertificate, Averaging, DecayCurve, Verdict, ZeroTwoThresholds,
};
use markov_groupoids::group::{
    BoundaryPoint, DirectProduct, FreeGroup, Group, Lattice, LatticePoint, Pair, Word,
};
use markov_groupoids::groupoid::{fiber_ball, GroupGroupoid, Groupoid, Singleton};
use markov_groupoids::harmonic::{
    boundary_equivariance_test, doob_transform, harmonic_measure_linear_solve,
    harmonic_measure_monte_carlo, harmonic_measure_oracle, minimality_test,
    strong_harmonic_residual, DynKernel, HarmonicFunction, LumpedTree, MinimalityReport,
    ProductKernel, TreeClass,
};
use markov_groupoids::measure::{Interval, MeasureSystem, SparseMeasure};
use markov_groupoids::models::random::{random_relation_operator, relation_fiber_chain};
use markov_groupoids::models::{
    action_isomorphism_check, build_model, preset, presets, simple_random_walk,
    EnvironmentOperator, ModelDescription,
};
use markov_groupoids::operator::{equivariance_check, InvariantOperator};
use markov_groupoids::weight::{rational, ArithmeticMode, Rational, Weight};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::config::Settings;
use crate::error::{LabError, Result};

/// Parameters a builtin runs with unless the config overrides them.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Defaults {
    pub horizon: usize,
    pub epsilon: f64,
    pub floor: f64,
    pub truncation: f64,
    pub arithmetic: ArithmeticMode,
    pub expect: &'static str,
    pub budget_secs: u64,
}

const BASE: Defaults = Defaults {
    horizon: 64,
    epsilon: 0.35,
    floor: 0.5,
    truncation: 1e-12,
    arithmetic: ArithmeticMode::Auto,
    expect: "amenable-consistent",
    budget_secs: 60,
};

/// What a suite produced: a verdict, the curves behind it and a certificate.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub verdict: String,
    pub verdict_text: String,
    pub horizon: usize,
    pub residual: Interval,
    pub curves: Vec<DecayCurve>,
    pub certificate: Value,
}

impl Outcome {
    fn from_verdict(
        verdict: &Verdict,
        horizon: usize,
        residual: Interval,
        curves: Vec<DecayCurve>,
        certificate: Value,
    ) -> Self {
        Outcome {
            verdict: verdict.tag().to_string(),
            verdict_text: verdict.to_string(),
            horizon,
            residual,
            curves,
            certificate,
        }
    }

    fn from_certificate(cert: AmenabilityCertificate) -> Self {
        let certificate = serde_json::to_value(&cert).expect("certificates serialize");
        Self::from_verdict(
            &cert.verdict,
            cert.horizon,
            cert.residual,
            vec![cert.residual_curve],
            certificate,
        )
    }
}

pub struct Builtin {
    pub name: &'static str,
    pub summary: &'static str,
    /// The result this suite exercises.
    pub anchor: &'static str,
    pub defaults: Defaults,
    pub takes_model: bool,
    run: fn(&Settings) -> Result<Outcome>,
}

impl Builtin {
    pub fn execute(&self, settings: &Settings) -> Result<Outcome> {
        (self.run)(settings)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub summary: &'static str,
    pub anchor: &'static str,
}

static BUILTINS: &[Builtin] = &[
    Builtin {
        name: "zd-liouville",
        summary: "Cesaro approximate-invariance certificate for the simple random walk on Z^2",
        anchor: "Liouville measured groupoids are amenable",
        defaults: Defaults {
            budget_secs: 30,
            ..BASE
        },
        takes_model: false,
        run: |s| by_mode!(s, zd_liouville),
    },
    Builtin {
        name: "z-lambda-harmonic",
        summary: "Doob transform of the walk on Z by 2^x with eigenvalue 5/4",
        anchor: "λ-harmonic functions give Doob transforms after dividing by λ",
        defaults: Defaults {
            horizon: 128,
            budget_secs: 10,
            ..BASE
        },
        takes_model: false,
        run: |s| by_mode!(s, z_lambda_harmonic),
    },
    Builtin {
        name: "free-group-nonliouville",
        summary: "Exact two-start curves of the simple random walk on F_2",
        anchor: "non-amenable groupoids are not Liouville (harmonic measure bound)",
        defaults: Defaults {
            horizon: 12,
            floor: 0.99,
            expect: "non-liouville",
            ..BASE
        },
        takes_model: false,
        run: |s| by_mode!(s, free_group_nonliouville),
    },
    Builtin {
        name: "tree-doob-minimality",
        summary: "Minimality of the tree kernels h_ξ on T_4 for five sampled ends",
        anchor: "minimality of φ is the Liouville property of the Doob transform",
        defaults: Defaults {
            epsilon: 0.2,
            arithmetic: ArithmeticMode::Float,
            expect: "minimal-consistent",
            budget_secs: 120,
            ..BASE
        },
        takes_model: false,
        run: |s| by_mode!(s, tree_doob_minimality),
    },
    Builtin {
        name: "two-end-nonminimal",
        summary: "The averaged two-end kernel on T_4 is not minimal",
        anchor: "minimality of φ is the Liouville property of the Doob transform",
        defaults: Defaults {
            horizon: 200,
            floor: 0.79,
            arithmetic: ArithmeticMode::Float,
            expect: "non-minimal",
            budget_secs: 120,
            ..BASE
        },
        takes_model: false,
        run: |s| by_mode!(s, two_end_nonminimal),
    },
    Builtin {
        name: "free-group-constant-nonminimal",
        summary: "The constant function on F_2 is not minimal",
        anchor: "minimality of φ is the Liouville property of the Doob transform",
        defaults: Defaults {
            horizon: 12,
            floor: 0.99,
            expect: "non-minimal",
            ..BASE
        },
        takes_model: false,
        run: |s| by_mode!(s, constant_nonminimal),
    },
    Builtin {
        name: "boundary-action",
        summary: "Cocycle identity and binomial curves of the Poisson extension of F_2",
        anchor: "boundary actions of hyperbolic groups are amenable",
        defaults: Defaults {
            horizon: 40,
            arithmetic: ArithmeticMode::Float,
            budget_secs: 120,
            ..BASE
        },
        takes_model: false,
        run: boundary_action,
    },
    Builtin {
        name: "strong-harmonic-product",
        summary: "Product kernel on T_4 × T_4: strong harmonicity and its Doob transform",
        anchor: "strongly harmonic functions of commuting families",
        defaults: Defaults {
            arithmetic: ArithmeticMode::Float,
            expect: "liouville-consistent",
            budget_secs: 120,
            ..BASE
        },
        takes_model: false,
        run: |s| by_mode!(s, strong_harmonic_product),
    },
    Builtin {
        name: "zero-two-oracle",
        summary:
            "0-2 verdicts on 200 random finite-fiber operators against the recurrent-class oracle",
        anchor: "0-2 law: Liouville iff the Cesaro differences vanish",
        defaults: Defaults {
            horizon: 2000,
            epsilon: 1e-6,
            floor: 0.01,
            arithmetic: ArithmeticMode::Float,
            expect: "oracle-agreement",
            ..BASE
        },
        takes_model: false,
        run: zero_two_oracle,
    },
    Builtin {
        name: "model-equivariance",
        summary: "Exact equivariance of the RWIDF, RWRTP and RWRE presets",
        anchor: "randomized models define invariant operators",
        defaults: Defaults {
            horizon: 2,
            arithmetic: ArithmeticMode::Exact,
            expect: "equivariant",
            budget_secs: 10,
            ..BASE
        },
        takes_model: true,
        run: model_equivariance,
    },
    Builtin {
        name: "rwrtp-periodic",
        summary: "2-periodic deterministic walk driven by a swap",
        anchor: "randomized models define invariant operators",
        defaults: Defaults {
            budget_secs: 10,
            ..BASE
        },
        takes_model: false,
        run: |s| by_mode!(s, rwrtp_periodic),
    },
    Builtin {
        name: "rwre-two-environment",
        summary: "Random walk on Z in a two-valued periodic environment",
        anchor: "randomized models define invariant operators",
        defaults: Defaults {
            horizon: 128,
            budget_secs: 10,
            ..BASE
        },
        takes_model: false,
        run: |s| by_mode!(s, rwre_two_environment),
    },
    Builtin {
        name: "harmonic-measure",
        summary: "Harmonic measure of T_4: closed form, Dirichlet solve and Monte Carlo",
        anchor: "non-amenable groupoids are not Liouville (harmonic measure bound)",
        defaults: Defaults {
            horizon: 20,
            arithmetic: ArithmeticMode::Float,
            expect: "consistent",
            ..BASE
        },
        takes_model: false,
        run: harmonic_measure,
    },
];

macro_rules! by_mode {
    ($s:expr, $f:ident) => {
        match $s.arithmetic {
            ArithmeticMode::Exact => $f::<Rational>($s),
            _ => $f::<f64>($s),
        }
    };
}
use by_mode;

pub fn builtins() -> &'static [Builtin] {
    BUILTINS
}

pub fn builtin(name: &str) -> Result<&'static Builtin> {
    BUILTINS
        .iter()
        .find(|b| b.name == name)
        .ok_or_else(|| LabError::ConfigInvalid(format!("unknown experiment {name:?}")))
}

/// Names, summaries and anchors, in catalog order.
pub fn list_experiments() -> Vec<CatalogEntry> {
    BUILTINS
        .iter()
        .map(|b| CatalogEntry {
            name: b.name,
            summary: b.summary,
            anchor: b.anchor,
        })
        .collect()
}

fn truncation<W: Weight>(s: &Settings) -> Option<W> {
    (!W::EXACT && s.truncation > 0.0)
        .then(|| W::from_text(&s.truncation.to_string()).expect("floats print readably"))
}

/// The five ends sampled throughout the tree suites.
pub fn sample_ends() -> Vec<BoundaryPoint> {
    ["|a", "|b", "|Ab", "B|a", "ab|AB"]
        .iter()
        .map(|e| BoundaryPoint::parse(e).expect("valid end"))
        .collect()
}

fn sup_residual(curves: &[DecayCurve]) -> Interval {
    curves
        .iter()
        .map(DecayCurve::last)
        .fold(Interval::point(0.0), Interval::sup)
}

fn zd_liouville<W: Weight>(s: &Settings) -> Result<Outcome> {
    let op = simple_random_walk::<_, W>(Lattice::new(2)).with_truncation(truncation(s));
    Ok(Outcome::from_certificate(approx_invariance_certificate(
        &op,
        None,
        &[Singleton],
        s.horizon,
        s.thresholds,
        s.seed,
    )?))
}

/// `2^x` on `Z`, harmonic for the simple random walk with `λ = 5/4`.
pub fn exponential<W: Weight>() -> HarmonicFunction<LatticePoint, W> {
    HarmonicFunction::new("2^x", W::from_ratio(5, 4), |x: &LatticePoint| {
        W::int_pow(2, x.coords()[0] as i32)
    })
}

fn z_lambda_harmonic<W: Weight>(s: &Settings) -> Result<Outcome> {
    let line = Lattice::new(1);
    let walk = simple_random_walk::<_, W>(line).with_truncation(truncation(s));
    let check: Vec<LatticePoint> = (-3..=3).map(|x| line.point(&[x])).collect();
    let doob = doob_transform(walk, exponential(), &check)?;
    let origin = SparseMeasure::dirac(0u8, line.point(&[0]));
    let steps = [line.point(&[1]), line.point(&[-1])];
    let curves = steps
        .iter()
        .map(|g| {
            let mut c = zero_two_decay(
                &doob,
                &SparseMeasure::dirac(0u8, g.clone()),
                &origin,
                s.horizon,
            )?;
            c.start = format!("{g} vs 0");
            Ok(c)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Outcome::from_certificate(
        AmenabilityCertificate::from_curves(
            steps.iter().map(ToString::to_string).collect(),
            vec!["0".into()],
            &curves,
            s.thresholds,
            s.seed,
            |horizon| Verdict::AmenableConsistent { horizon },
            |bound| Verdict::NonLiouville { bound },
        ),
    ))
}

fn free_group_nonliouville<W: Weight>(s: &Settings) -> Result<Outcome> {
    let curves: Vec<DecayCurve> = [Averaging::Cesaro, Averaging::Binomial]
        .into_iter()
        .map(|a| {
            DecayCurve::from_intervals(a, "a vs e", &free_group_radial_series::<W>(2, s.horizon, a))
        })
        .collect();
    let mut cert = AmenabilityCertificate::from_curves(
        vec!["a".into()],
        vec!["*".into()],
        &curves,
        s.thresholds,
        s.seed,
        |horizon| Verdict::AmenableConsistent { horizon },
        |bound| Verdict::NonLiouville { bound },
    );
    // A non-Liouville verdict must hold on every curve, not only on the sup.
    let floor = curves
        .iter()
        .map(|c| c.min_lo(0))
        .fold(f64::INFINITY, f64::min);
    if matches!(cert.verdict, Verdict::NonLiouville { .. }) {
        cert.verdict = if floor > s.thresholds.floor {
            Verdict::NonLiouville { bound: floor }
        } else {
            Verdict::Inconclusive
        };
        cert.verdict_text = cert.verdict.to_string();
    }
    let certificate = serde_json::to_value(&cert).expect("certificates serialize");
    Ok(Outcome::from_verdict(
        &cert.verdict,
        s.horizon,
        cert.residual,
        curves,
        certificate,
    ))
}

#[derive(Serialize)]
struct MinimalityRow {
    case: String,
    verdict: String,
    worst_hi: f64,
    best_lo: f64,
}

/// Joins several minimality runs: consistent only if every run is.
fn minimality_outcome(cases: Vec<(String, MinimalityReport)>, s: &Settings) -> Outcome {
    let all_minimal = cases
        .iter()
        .all(|(_, r)| matches!(r.verdict, Verdict::MinimalConsistent { .. }));
    let all_non = cases
        .iter()
        .all(|(_, r)| matches!(r.verdict, Verdict::NonMinimal { .. }));
    let floor = cases
        .iter()
        .map(|(_, r)| {
            r.cesaro
                .iter()
                .chain(&r.binomial)
                .map(|c| c.min_lo(0))
                .fold(f64::INFINITY, f64::min)
        })
        .fold(f64::INFINITY, f64::min);
    let verdict = if all_minimal {
        Verdict::MinimalConsistent { horizon: s.horizon }
    } else if all_non && floor > s.thresholds.floor {
        Verdict::NonMinimal { bound: floor }
    } else {
        Verdict::Inconclusive
    };
    let rows: Vec<MinimalityRow> = cases
        .iter()
        .map(|(case, r)| MinimalityRow {
            case: case.clone(),
            verdict: r.verdict.to_string(),
            worst_hi: r.worst_hi(),
            best_lo: r.best_lo(),
        })
        .collect();
    let curves: Vec<DecayCurve> = cases
        .into_iter()
        .flat_map(|(case, r)| {
            r.cesaro.into_iter().chain(r.binomial).map(move |mut c| {
                c.start = format!("{case}: {}", c.start);
                c
            })
        })
        .collect();
    let certificate = json!({ "thresholds": s.thresholds, "horizon": s.horizon, "cases": rows, "verdict": verdict });
    Outcome::from_verdict(
        &verdict,
        s.horizon,
        sup_residual(&curves),
        curves,
        certificate,
    )
}

fn tree_doob_minimality<W: Weight>(s: &Settings) -> Result<Outcome> {
    let pairs: Vec<(BoundaryPoint, Word)> = sample_ends()
        .into_iter()
        .flat_map(|xi| {
            FreeGroup::new(2)
                .generators()
                .into_iter()
                .map(move |g| (xi.clone(), g))
        })
        .collect();
    let cases = pairs
        .par_iter()
        .map(|(xi, g)| {
            let tree = LumpedTree::<W>::ray(3, xi, Some(g)).with_truncation(truncation(s));
            let report = minimality_test(
                tree.clone(),
                tree.end_kernel(),
                &[TreeClass::Spine(0)],
                &TreeClass::Spine(0),
                &[tree.classify(g)],
                s.horizon,
                s.thresholds,
            )?;
            Ok((format!("h[{xi}] from {g}"), report))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(minimality_outcome(cases, s))
}

fn two_end_nonminimal<W: Weight>(s: &Settings) -> Result<Outcome> {
    let (a, b) = (BoundaryPoint::parse("|a")?, BoundaryPoint::parse("|b")?);
    let tree = LumpedTree::<W>::line(3, &a, &b, None).with_truncation(truncation(s));
    let others: Vec<TreeClass> = ["a", "b"]
        .iter()
        .map(|g| tree.classify(&Word::parse(g).expect("valid word")))
        .collect();
    let report = minimality_test(
        tree.clone(),
        tree.two_end_kernel(),
        &[TreeClass::Spine(0)],
        &TreeClass::Spine(0),
        &others,
        s.horizon,
        s.thresholds,
    )?;
    Ok(minimality_outcome(
        vec![(format!("(h[{a}] + h[{b}])/2"), report)],
        s,
    ))
}

fn constant_nonminimal<W: Weight>(s: &Settings) -> Result<Outcome> {
    let xi = BoundaryPoint::parse("|a")?;
    let cases = FreeGroup::new(2)
        .generators()
        .iter()
        .map(|g| {
            let tree = LumpedTree::<W>::ray(3, &xi, Some(g)).with_truncation(truncation(s));
            let report = minimality_test(
                tree.clone(),
                HarmonicFunction::constant(),
                &[TreeClass::Spine(0)],
                &TreeClass::Spine(0),
                &[tree.classify(g)],
                s.horizon,
                s.thresholds,
            )?;
            Ok((format!("1 from {g}"), report))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(minimality_outcome(cases, s))
}

/// The first ten vertices of the radius-2 ball of `F_2`.
pub fn sample_vertices() -> Vec<Word> {
    fiber_ball(&GroupGroupoid::new(FreeGroup::new(2)), &Singleton, 2)
        .into_iter()
        .take(10)
        .collect()
}

fn boundary_action(s: &Settings) -> Result<Outcome> {
    let gens = FreeGroup::new(2).generators();
    let trunc =
        (s.arithmetic != ArithmeticMode::Exact && s.truncation > 0.0).then_some(s.truncation);
    let (cocycle, cert) = boundary_equivariance_test(
        2,
        &gens,
        &sample_ends(),
        &sample_vertices(),
        s.horizon,
        s.thresholds,
        trunc,
    )?;
    let monotone = cert.residual_curve.hi_nonincreasing();
    let (tag, text) = if !cocycle.exact() {
        (
            "cocycle-mismatch".to_string(),
            format!(
                "cocycle identity fails at {} of {} triples",
                cocycle.mismatches.len(),
                cocycle.checked
            ),
        )
    } else if !monotone {
        (
            "non-monotone".to_string(),
            "binomial curve increases somewhere".to_string(),
        )
    } else {
        (cert.verdict.tag().to_string(), cert.verdict.to_string())
    };
    let certificate = json!({ "cocycle": cocycle, "certificate": cert });
    Ok(Outcome {
        verdict: tag,
        verdict_text: text,
        horizon: cert.horizon,
        residual: cert.residual,
        curves: vec![cert.residual_curve],
        certificate,
    })
}

type Product = DirectProduct<FreeGroup, FreeGroup>;

/// `P_1` or `P_2` on `F_2 × F_2`: the walk moving only the chosen factor.
pub fn factor_walk(first: bool) -> InvariantOperator<GroupGroupoid<Product>, Rational> {
    let group = DirectProduct::new(FreeGroup::new(2), FreeGroup::new(2));
    let g = GroupGroupoid::new(group.clone());
    let gens: Vec<Pair<Word, Word>> = group
        .generators()
        .into_iter()
        .filter(|p| p.1.is_empty() == first)
        .collect();
    let system =
        MeasureSystem::constant(&g, gens.into_iter().map(|s| (s, rational(1, 4))).collect());
    InvariantOperator::from_system(&g, system, &[]).expect("uniform generator measures")
}

fn product_ends() -> (BoundaryPoint, BoundaryPoint) {
    (
        BoundaryPoint::parse("|a").expect("valid end"),
        BoundaryPoint::parse("|b").expect("valid end"),
    )
}

/// `h_ξ ⊗ h_η` on `F_2 × F_2`.
pub fn product_kernel() -> HarmonicFunction<Pair<Word, Word>, Rational> {
    let (xi, eta) = product_ends();
    let (h1, h2) = (
        markov_groupoids::harmonic::tree_kernel::<Rational>(&xi, 3),
        markov_groupoids::harmonic::tree_kernel::<Rational>(&eta, 3),
    );
    HarmonicFunction::new(
        format!("h[{xi}]⊗h[{eta}]"),
        rational(1, 1),
        move |p: &Pair<Word, Word>| h1.eval(&p.0) * h2.eval(&p.1),
    )
}

fn strong_harmonic_product<W: Weight>(s: &Settings) -> Result<Outcome> {
    let (p1, p2) = (factor_walk(true), factor_walk(false));
    let ball = fiber_ball(p1.groupoid(), &Singleton, 3);
    let family: Vec<DynKernel<'_, _, Rational>> = vec![&p1, &p2];
    let strong = strong_harmonic_residual(&family, &product_kernel(), &ball)?;

    let (xi, eta) = product_ends();
    let group = DirectProduct::new(FreeGroup::new(2), FreeGroup::new(2));
    let gens = group.generators();
    let starts: Vec<Pair<Word, Word>> = gens
        .into_iter()
        .filter(|p| {
            ["a", "A", "b", "B"].contains(&p.0.to_string().as_str())
                || ["b", "B"].contains(&p.1.to_string().as_str())
        })
        .collect();
    let starts: Vec<Pair<Word, Word>> = starts
        .into_iter()
        .filter(|p| {
            matches!(
                (p.0.to_string().as_str(), p.1.to_string().as_str()),
                ("a", "e") | ("A", "e") | ("e", "b") | ("e", "B")
            )
        })
        .collect();
    let curves = starts
        .par_iter()
        .map(|g| {
            let left = LumpedTree::<W>::ray(3, &xi, (!g.0.is_empty()).then_some(&g.0))
                .with_truncation(truncation(s));
            let right = LumpedTree::<W>::ray(3, &eta, (!g.1.is_empty()).then_some(&g.1))
                .with_truncation(truncation(s));
            let (hl, hr) = (left.end_kernel(), right.end_kernel());
            let phi =
                HarmonicFunction::new("h⊗h", W::one(), move |c: &Pair<TreeClass, TreeClass>| {
                    hl.eval(&c.0) * hr.eval(&c.1)
                });
            let here = Pair(left.classify(&g.0), right.classify(&g.1));
            let origin = Pair(TreeClass::Spine(0), TreeClass::Spine(0));
            let kernel = ProductKernel { left, right };
            let doob = doob_transform(kernel, phi, &[origin.clone(), here.clone()])?;
            let mut c = zero_two_decay(
                &doob,
                &SparseMeasure::dirac(0u8, here),
                &SparseMeasure::dirac(0u8, origin),
                s.horizon,
            )?;
            c.start = format!("{g} vs (e,e)");
            Ok(c)
        })
        .collect::<Result<Vec<_>>>()?;
    let cert = AmenabilityCertificate::from_curves(
        starts.iter().map(ToString::to_string).collect(),
        vec!["(e,e)".into()],
        &curves,
        s.thresholds,
        s.seed,
        |horizon| Verdict::LiouvilleConsistent { horizon },
        |bound| Verdict::NonLiouville { bound },
    );
    let (tag, text) = if strong.max > 0.0 || strong.average > 0.0 {
        (
            "not-harmonic".to_string(),
            format!(
                "residuals {:?}, average {}",
                strong.per_operator, strong.average
            ),
        )
    } else {
        (cert.verdict.tag().to_string(), cert.verdict.to_string())
    };
    let certificate = json!({ "strong_residual": strong, "ball_radius": 3, "certificate": cert });
    Ok(Outcome {
        verdict: tag,
        verdict_text: text,
        horizon: cert.horizon,
        residual: cert.residual,
        curves,
        certificate,
    })
}

/// How many random operators the oracle suite draws.
pub const ORACLE_TRIALS: usize = 200;
pub const ORACLE_MAX_STATES: usize = 50;

#[derive(Debug, Clone, Serialize)]
struct OracleRow {
    states: usize,
    recurrent_classes: usize,
    oracle: &'static str,
    numeric: &'static str,
    final_hi: f64,
    min_lo: f64,
}

fn zero_two_oracle(s: &Settings) -> Result<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(s.seed);
    let chains = (0..ORACLE_TRIALS)
        .map(|_| {
            let states = rng.random_range(2..=ORACLE_MAX_STATES);
            relation_fiber_chain(&random_relation_operator(&mut rng, states), 0)
        })
        .collect::<markov_groupoids::Result<Vec<_>>>()?;
    let thresholds = ZeroTwoThresholds {
        decay: s.thresholds.epsilon,
        floor: s.thresholds.floor,
    };
    let results: Vec<_> = chains
        .par_iter()
        .map(|c| {
            (
                finite_fiber_oracle(c),
                dense_zero_two(c, s.horizon, thresholds),
            )
        })
        .collect();
    let rows: Vec<OracleRow> = results
        .iter()
        .map(|(o, d)| OracleRow {
            states: o.states,
            recurrent_classes: o.recurrent_classes,
            oracle: if o.liouville {
                "liouville"
            } else {
                "non-liouville"
            },
            numeric: d.verdict.tag(),
            final_hi: d.curve.last().hi,
            min_lo: d.curve.min_lo(0),
        })
        .collect();
    let agree = rows
        .iter()
        .filter(|r| {
            (r.oracle == "liouville") == (r.numeric == "liouville-consistent")
                && (r.oracle == "non-liouville") == (r.numeric == "non-liouville")
        })
        .count();
    // The two curves closest to the thresholds: the slowest Liouville decay
    // and the smallest non-Liouville floor.
    let slowest = results
        .iter()
        .filter(|(o, _)| o.liouville)
        .max_by(|a, b| a.1.curve.last().hi.total_cmp(&b.1.curve.last().hi));
    let lowest = results
        .iter()
        .filter(|(o, _)| !o.liouville)
        .min_by(|a, b| a.1.curve.min_lo(0).total_cmp(&b.1.curve.min_lo(0)));
    let curves: Vec<DecayCurve> = slowest
        .map(|(_, d)| ("slowest liouville", d))
        .into_iter()
        .chain(lowest.map(|(_, d)| ("lowest non-liouville", d)))
        .map(|(label, d)| DecayCurve {
            start: format!("{label}: {}", d.curve.start),
            ..d.curve.clone()
        })
        .collect();
    let tag = if agree == rows.len() {
        "oracle-agreement"
    } else {
        "oracle-disagreement"
    };
    let text = format!(
        "{agree} of {} numeric verdicts match the oracle",
        rows.len()
    );
    let certificate = json!({ "seed": s.seed, "horizon": s.horizon, "thresholds": thresholds, "agree": agree, "trials": rows });
    Ok(Outcome {
        verdict: tag.into(),
        verdict_text: text,
        horizon: s.horizon,
        residual: sup_residual(&curves),
        curves,
        certificate,
    })
}

fn model_equivariance(s: &Settings) -> Result<Outcome> {
    let chosen: Vec<_> = presets()
        .into_iter()
        .filter(|p| s.model.as_deref().is_none_or(|m| m == p.name))
        .collect();
    let mut rows = Vec::new();
    let mut worst = 0.0f64;
    let mut exact = true;
    for p in &chosen {
        let op: EnvironmentOperator<_, Rational> = build_model(&p.description)?;
        let objects = op.groupoid().objects().expect("finite base space");
        let report = equivariance_check(&op, &objects, s.horizon);
        let iso = match p.description {
            ModelDescription::Rwre { .. } => {
                Some(action_isomorphism_check(op.groupoid(), s.horizon)?)
            }
            _ => None,
        };
        let ok = report.exact() && iso.as_ref().is_none_or(|r| r.passed());
        exact &= ok;
        worst = worst.max(report.max_discrepancy);
        rows.push(json!({
            "preset": p.name,
            "pairs_checked": report.pairs_checked,
            "mismatches": report.mismatches,
            "isomorphism": iso.map(|r| json!({ "morphisms_checked": r.morphisms_checked, "failures": r.failures })),
        }));
    }
    let (tag, text) = if exact {
        (
            "equivariant",
            format!(
                "{} presets equivariant on radius-{} balls",
                chosen.len(),
                s.horizon
            ),
        )
    } else {
        ("not-equivariant", format!("largest discrepancy {worst}"))
    };
    Ok(Outcome {
        verdict: tag.into(),
        verdict_text: text,
        horizon: s.horizon,
        residual: Interval::point(worst),
        curves: Vec::new(),
        certificate: json!({ "radius": s.horizon, "presets": rows }),
    })
}

fn rwrtp_periodic<W: Weight>(s: &Settings) -> Result<Outcome> {
    let op: EnvironmentOperator<_, W> = build_model(&preset("rwrtp-periodic")?.description)?;
    let op = op.with_truncation(truncation(s));
    // The support morphisms; the Z-generators carry the walk to a disjoint orbit.
    let steps: Vec<_> = [0, 1]
        .iter()
        .flat_map(|x| {
            op.base_at(x)
                .atoms()
                .iter()
                .map(|(m, _)| m.clone())
                .collect::<Vec<_>>()
        })
        .collect();
    Ok(Outcome::from_certificate(approx_invariance_certificate(
        &op,
        Some(&steps),
        &[0, 1],
        s.horizon,
        s.thresholds,
        s.seed,
    )?))
}

/// Environment `0110` of the two-environment preset.
pub const TWO_ENVIRONMENT_START: usize = 0b0110;

fn rwre_two_environment<W: Weight>(s: &Settings) -> Result<Outcome> {
    let op: EnvironmentOperator<_, W> = build_model(&preset("rwre-two-environment")?.description)?;
    let op = op.with_truncation(truncation(s));
    let x = TWO_ENVIRONMENT_START;
    let gamma = op.base_at(&x).atoms()[0].0.clone();
    let curve = zero_two_decay(
        &op,
        &SparseMeasure::dirac(x, gamma.clone()),
        &op.start(&x),
        s.horizon,
    )?;
    Ok(Outcome::from_certificate(
        AmenabilityCertificate::from_curves(
            vec![gamma.to_string()],
            vec![x.to_string()],
            &[curve],
            s.thresholds,
            s.seed,
            |horizon| Verdict::AmenableConsistent { horizon },
            |bound| Verdict::NonLiouville { bound },
        ),
    ))
}

pub const MONTE_CARLO_PATHS: usize = 1_000_000;

fn harmonic_measure(s: &Settings) -> Result<Outcome> {
    let starts = [Word::empty(), Word::parse("a")?];
    let mut rows = Vec::new();
    let mut solve_gap = 0.0f64;
    let mut worst_z = 0.0f64;
    for start in &starts {
        let exact = harmonic_measure_oracle::<Rational>(3, start, 1);
        let solved = harmonic_measure_linear_solve(3, start, s.horizon);
        let mc = harmonic_measure_monte_carlo(3, start, MONTE_CARLO_PATHS, s.seed);
        for ((c, m), (_, v)) in exact.cylinders.iter().zip(&solved.cylinders) {
            let (mean, se) = mc.get(c);
            let m = m.to_f64();
            solve_gap = solve_gap.max((m - v).abs());
            worst_z = worst_z.max((mean - m).abs() / se);
            rows.push(json!({ "start": start.to_string(), "cylinder": c.to_string(), "exact": m, "solve": v, "mc_mean": mean, "mc_stderr": se }));
        }
    }
    let e = harmonic_measure_oracle::<Rational>(3, &starts[0], 1);
    let a = harmonic_measure_oracle::<Rational>(3, &starts[1], 1);
    let tv = a.tv(&e);
    let ok = solve_gap < 1e-8 && worst_z <= 3.0 && tv == rational(1, 1);
    let tag = if ok { "consistent" } else { "inconsistent" };
    let text =
        format!("solve gap {solve_gap:e}, largest MC z-score {worst_z:.3}, ‖ν_a − ν_e‖ = {tv}");
    let certificate = json!({ "seed": s.seed, "paths": MONTE_CARLO_PATHS, "radius": s.horizon, "tv": tv.to_string(), "cylinders": rows });
    Ok(Outcome {
        verdict: tag.into(),
        verdict_text: text,
        horizon: s.horizon,
        residual: Interval::point(solve_gap),
        curves: Vec::new(),
        certificate,
    })
}
