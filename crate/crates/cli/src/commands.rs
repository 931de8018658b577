use serde::de::DeserializeOwned;
use serde::Deserialize;
use serde_json::{json, Value};

use qcircle::completion::{
    act, act_lazy, orbit_of, CompletionPoint, LazyAut, ModeRecipe, TransportRecipe,
};
use qcircle::factors::{check_equivariance, factor_apply, FactorId};
use qcircle::kernel::{
    between, circle_distance, cov_cells, cut_compare, format_ratio, locate, CoveringVariant, Cycle, RatPoint,
};
use qcircle::lab::{conjugation_check, maximality_witness, stabilization_index, witness_u1};
use qcircle::pl::{extend, random_point, seeded, sup_distance, PLAut};
use qcircle::Error;

use crate::{Context, Response};

pub const COMMANDS: [&str; 16] = [
    "axioms",
    "extend",
    "apply",
    "compose",
    "locate",
    "cov",
    "distance",
    "transport",
    "act",
    "orbit",
    "factor",
    "equivariance",
    "u1-witness",
    "max-witness",
    "conj-check",
    "stab-index",
];

enum Failure {
    Schema(String),
    Check(String),
    Module(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Module(e)
    }
}

type Outcome = Result<Value, Failure>;

fn parse<T: DeserializeOwned>(payload: &Value) -> Result<T, Failure> {
    T::deserialize(payload).map_err(|e| Failure::Schema(e.to_string()))
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("library values serialize")
}

pub fn run(command: &str, payload: &Value, ctx: &Context) -> Response {
    let outcome = match command {
        "axioms" => axioms(payload, ctx),
        "extend" => extend_cmd(payload),
        "apply" => apply(payload),
        "compose" => compose(payload),
        "locate" => locate_cmd(payload),
        "cov" => cov(payload),
        "distance" => distance(payload),
        "transport" => transport_cmd(payload, ctx),
        "act" => act_cmd(payload, ctx),
        "orbit" => orbit(payload),
        "factor" => factor(payload),
        "equivariance" => equivariance(payload, ctx),
        "u1-witness" => u1_witness(payload),
        "max-witness" => max_witness(payload),
        "conj-check" => conj_check(payload, ctx),
        "stab-index" => stab_index(payload),
        other => return Response::error(format!("unknown command \"{other}\"")),
    };
    match outcome {
        Ok(result) => Response::ok(result),
        Err(Failure::Schema(msg)) => Response::error(format!("schema violation: {msg}")),
        Err(Failure::Check(msg)) => Response::error(msg),
        Err(Failure::Module(e @ Error::Undecided(_))) => Response::undecided(e.to_string()),
        Err(Failure::Module(e)) => Response::error(e.to_string()),
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct AxiomsPayload {
    samples: Option<usize>,
    #[serde(default = "default_bound")]
    denominator_bound: u64,
}

fn default_bound() -> u64 {
    10_000
}

/// Counts violations of the four circular-order axioms and of the cut round-trip.
fn axioms(payload: &Value, ctx: &Context) -> Outcome {
    let p: AxiomsPayload = if payload.is_null() { parse(&json!({}))? } else { parse(payload)? };
    let samples = p.samples.unwrap_or(ctx.samples);
    let mut rng = seeded(ctx.seed);
    let mut fails = [0usize; 5];
    for _ in 0..samples {
        let [a, b, c, d, z] = std::array::from_fn(|_| random_point(&mut rng, p.denominator_bound));
        if between(&a, &b, &c) && !between(&b, &c, &a) {
            fails[0] += 1;
        }
        if between(&a, &b, &c) && between(&b, &a, &c) {
            fails[1] += 1;
        }
        if between(&a, &b, &c) && between(&a, &c, &d) && !between(&a, &b, &d) {
            fails[2] += 1;
        }
        let distinct = a != b && b != c && a != c;
        if distinct && between(&a, &b, &c) == between(&a, &c, &b) {
            fails[3] += 1;
        }
        let lt = |x: &RatPoint, y: &RatPoint| cut_compare(&z, x, y).is_lt();
        let rebuilt = (lt(&a, &b) && lt(&b, &c)) || (lt(&b, &c) && lt(&c, &a)) || (lt(&c, &a) && lt(&a, &b));
        if rebuilt != between(&a, &b, &c) {
            fails[4] += 1;
        }
    }
    let total: usize = fails.iter().sum();
    if total > 0 {
        return Err(Failure::Check(format!("{total} axiom violations: {fails:?}")));
    }
    Ok(json!({
        "samples": samples,
        "failures": {
            "cyclicity": fails[0],
            "asymmetry": fails[1],
            "transitivity": fails[2],
            "totality": fails[3],
            "cut_round_trip": fails[4],
        }
    }))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ExtendPayload {
    pairs: Vec<(RatPoint, RatPoint)>,
}

fn extend_cmd(payload: &Value) -> Outcome {
    let p: ExtendPayload = parse(payload)?;
    Ok(to_value(&extend(&p.pairs)?))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ApplyPayload {
    g: PLAut,
    x: RatPoint,
}

fn apply(payload: &Value) -> Outcome {
    let p: ApplyPayload = parse(payload)?;
    Ok(to_value(&p.g.apply(&p.x)))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ComposePayload {
    g: PLAut,
    h: Option<PLAut>,
    #[serde(default)]
    invert: bool,
}

/// `g ∘ h`, or `g⁻¹` with `"invert": true` and no `h`.
fn compose(payload: &Value) -> Outcome {
    let p: ComposePayload = parse(payload)?;
    let out = match (p.h, p.invert) {
        (Some(h), false) => p.g.compose(&h),
        (None, true) => p.g.inverse(),
        (None, false) => p.g.canonical(),
        (Some(_), true) => return Err(Failure::Schema("\"invert\" takes no \"h\"".into())),
    };
    Ok(to_value(&out))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct LocatePayload {
    cycle: Cycle,
    x: RatPoint,
    #[serde(default = "default_variant")]
    variant: CoveringVariant,
}

fn default_variant() -> CoveringVariant {
    CoveringVariant::Cov
}

fn locate_cmd(payload: &Value) -> Outcome {
    let p: LocatePayload = parse(payload)?;
    let index = locate(&p.cycle, &p.x, p.variant)?;
    let cell = &cov_cells(&p.cycle, p.variant).cells[index];
    Ok(json!({ "index": index, "cell": cell }))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CovPayload {
    cycle: Cycle,
    #[serde(default = "default_variant")]
    variant: CoveringVariant,
}

fn cov(payload: &Value) -> Outcome {
    let p: CovPayload = parse(payload)?;
    Ok(to_value(&cov_cells(&p.cycle, p.variant)))
}

#[derive(Deserialize)]
#[serde(untagged)]
enum DistancePayload {
    Points { a: RatPoint, b: RatPoint },
    Maps { g: PLAut, h: PLAut },
}

fn distance(payload: &Value) -> Outcome {
    let d = match parse::<DistancePayload>(payload)? {
        DistancePayload::Points { a, b } => circle_distance(&a, &b),
        DistancePayload::Maps { g, h } => sup_distance(&g, &h),
    };
    Ok(json!(format_ratio(&d)))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TransportPayload {
    u: qcircle::completion::IrrRecipe,
    v: qcircle::completion::IrrRecipe,
    #[serde(default = "plain")]
    mode: ModeRecipe,
    #[serde(default = "default_stages")]
    stages: usize,
}

fn plain() -> ModeRecipe {
    ModeRecipe::Plain
}

fn default_stages() -> usize {
    3
}

fn lazy_from(recipe: &TransportRecipe) -> Result<LazyAut, Failure> {
    Ok(LazyAut::from_recipe(recipe)?)
}

/// The transporter's recipe with its first stages and control intervals.
fn transport_cmd(payload: &Value, ctx: &Context) -> Outcome {
    let p: TransportPayload = parse(payload)?;
    if p.stages == 0 || p.stages > ctx.precision as usize {
        return Err(Failure::Schema(format!("stages must lie in 1..={}", ctx.precision)));
    }
    let recipe = TransportRecipe { u: p.u, v: p.v, mode: p.mode };
    let g = lazy_from(&recipe)?;
    let mut stages = Vec::new();
    let mut levels = Vec::new();
    for n in 1..=p.stages {
        stages.push(to_value(&g.stage(n)?));
        let pairs = |ivs: Vec<qcircle::completion::StreamInterval>| -> Vec<(RatPoint, RatPoint)> {
            ivs.into_iter().map(|iv| { let end = iv.end(); (iv.start, end) }).collect()
        };
        levels.push(json!({
            "domain": pairs(g.domain_intervals(n)?),
            "target": pairs(g.target_intervals(n)?),
        }));
    }
    Ok(json!({
        "transporter": recipe,
        "stages": stages,
        "intervals": levels,
        "protected": g.protected_interval().map(|iv| (iv.start.clone(), iv.end())),
    }))
}

#[derive(Deserialize)]
#[serde(untagged)]
enum Automorphism {
    Pl(PLAut),
    Lazy { transporter: TransportRecipe },
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ActPayload {
    g: Automorphism,
    x: CompletionPoint,
}

fn act_cmd(payload: &Value, ctx: &Context) -> Outcome {
    let p: ActPayload = parse(payload)?;
    let y = match &p.g {
        Automorphism::Pl(g) => act(g, &p.x),
        Automorphism::Lazy { transporter } => act_lazy(&lazy_from(transporter)?, &p.x)?,
    };
    if let CompletionPoint::Irr(s) = &y {
        // force the image up to the working precision so failures surface here
        s.interval(ctx.precision.max(1) as usize)?;
    }
    Ok(to_value(&y))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PointPayload {
    x: CompletionPoint,
}

fn orbit(payload: &Value) -> Outcome {
    let p: PointPayload = parse(payload)?;
    Ok(to_value(&orbit_of(&p.x)))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct FactorPayload {
    id: FactorId,
    point: CompletionPoint,
}

fn factor(payload: &Value) -> Outcome {
    let p: FactorPayload = parse(payload)?;
    Ok(factor_apply(p.id, &p.point).to_json())
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct EquivariancePayload {
    id: FactorId,
    g: PLAut,
    x: CompletionPoint,
}

fn equivariance(payload: &Value, ctx: &Context) -> Outcome {
    let p: EquivariancePayload = parse(payload)?;
    Ok(json!(check_equivariance(p.id, &p.g, &p.x, ctx.precision)?))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct U1Payload {
    cycle: Cycle,
    k: usize,
    f: PLAut,
    g: PLAut,
}

fn u1_witness(payload: &Value) -> Outcome {
    let p: U1Payload = parse(payload)?;
    Ok(to_value(&witness_u1(&p.cycle, p.k, &p.f, &p.g)?))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct MaxPayload {
    a: RatPoint,
    f: PLAut,
    g: PLAut,
}

fn max_witness(payload: &Value) -> Outcome {
    let p: MaxPayload = parse(payload)?;
    Ok(to_value(&maximality_witness(&p.a, &p.f, &p.g)?))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ConjPayload {
    g: PLAut,
    a: RatPoint,
    samples: Option<usize>,
}

fn conj_check(payload: &Value, ctx: &Context) -> Outcome {
    let p: ConjPayload = parse(payload)?;
    let report = conjugation_check(&p.g, &p.a, p.samples.unwrap_or(ctx.samples), ctx.seed)?;
    Ok(to_value(&report))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct StabPayload {
    transporter: TransportRecipe,
    x: RatPoint,
}

fn stab_index(payload: &Value) -> Outcome {
    let p: StabPayload = parse(payload)?;
    Ok(json!(stabilization_index(&lazy_from(&p.transporter)?, &p.x)?))
}
