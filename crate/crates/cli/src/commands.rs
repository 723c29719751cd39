use clap::{Args, ValueEnum};
use num_rational::BigRational;
use tatefgl::equivariant::{euler_class, unit_check, Block, EqBundle, EquivariantContext};
use tatefgl::fgl::x_space;
use tatefgl::genus::{self, ChernData, GenusSeries, LoopNormalization};
use tatefgl::prospectrum::ThomTower;
use tatefgl::quotient::{lubin_f, lubin_g, quotient_law, SubgroupPoints};
use tatefgl::tate::{self, SigmaOrders, TateGroup, TatePoint};
use tatefgl::{Error, FormalGroupLaw, MultiSeries, Result, Ring, SeriesSpace, Value};

use crate::document::{CheckDocument, SeriesDocument, ValueDocument};
use crate::manifold::parse_manifold;
use crate::{Format, Orders};

pub enum Output {
    Series(MultiSeries),
    Value(Ring, Value),
    Text(String),
    Check { name: String, passed: bool, details: Vec<String> },
}

impl Output {
    pub fn passed(&self) -> bool {
        !matches!(self, Output::Check { passed: false, .. })
    }

    pub fn render(&self, format: Format) -> String {
        match (self, format) {
            (Output::Series(s), Format::Text) => s.to_string(),
            (Output::Series(s), Format::Json) => json(&SeriesDocument::from_series(s)),
            (Output::Value(r, v), Format::Text) => r.format(v),
            (Output::Value(r, v), Format::Json) => json(&ValueDocument::new(r, v)),
            (Output::Text(t), Format::Text) => t.clone(),
            (Output::Text(t), Format::Json) => json(&serde_json::json!({ "text": t })),
            (Output::Check { name, passed, details }, Format::Text) => {
                let mut out = format!("{name}: {}", if *passed { "passed" } else { "failed" });
                for d in details {
                    out.push_str("\n  ");
                    out.push_str(d);
                }
                out
            }
            (Output::Check { name, passed, details }, Format::Json) => {
                json(&CheckDocument { check: name.clone(), passed: *passed, details: details.clone() })
            }
        }
    }
}

fn json<T: serde::Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("documents serialize")
}

fn check(name: &str, passed: bool, details: Vec<String>) -> Output {
    Output::Check { name: name.to_string(), passed, details }
}

fn rational(text: &str) -> Result<BigRational> {
    text.trim().parse().map_err(|_| Error::Parse(format!("bad rational {text:?}")))
}

/// `ga`, `gm`, `log:EXPR`, `poly:EXPR`, `series:EXPR` or `file:PATH`.
fn law_arg(text: &str, ring: &Ring, trunc: u32) -> Result<FormalGroupLaw> {
    let xy = || SeriesSpace::new(ring, &["x", "y"], trunc);
    match text.split_once(':') {
        None if text == "ga" => FormalGroupLaw::additive(ring, trunc),
        None if text == "gm" => FormalGroupLaw::multiplicative(ring, trunc),
        Some(("log", e)) => FormalGroupLaw::from_log(&x_space(ring, trunc)?.parse(e)?),
        Some(("poly", e)) => FormalGroupLaw::from_polynomial(xy()?.parse(e)?),
        Some(("series", e)) => FormalGroupLaw::from_series(xy()?.parse(e)?),
        Some(("file", path)) => {
            let text = std::fs::read_to_string(path).map_err(|e| Error::InvalidInput(format!("{path}: {e}")))?;
            let doc: SeriesDocument = serde_json::from_str(&text).map_err(|e| Error::Parse(e.to_string()))?;
            FormalGroupLaw::from_series(doc.to_series()?)
        }
        _ => Err(Error::Parse(format!("unknown law {text:?}"))),
    }
}

fn default_tail(o: &Orders) -> u32 {
    o.tail.unwrap_or(o.qorder.max(0) as u32 + 2 * o.trunc + 2 * o.n + 4)
}

fn context(law: &str, ring: &str, o: &Orders) -> Result<EquivariantContext> {
    let tail = default_tail(o);
    match law {
        "ga" => EquivariantContext::additive(o.qorder, tail, o.trunc),
        "gm" => EquivariantContext::multiplicative(o.qorder, tail, o.trunc),
        _ => {
            let ring: Ring = ring.parse()?;
            EquivariantContext::localized(&law_arg(law, &ring, o.trunc)?, o.qorder, tail, o.n)
        }
    }
}

// ------------------------------------------------------------------ fgl

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum FglAction {
    Construct,
    Validate,
    Log,
    Exp,
    Nseries,
    Transport,
}

#[derive(Args)]
pub struct FglArgs {
    #[arg(value_enum)]
    action: FglAction,
    #[arg(long, default_value = "ga")]
    law: String,
    #[arg(long, default_value = "QQ")]
    ring: String,
    #[arg(long, default_value_t = 6)]
    trunc: u32,
    #[arg(long, default_value_t = 2, allow_negative_numbers = true)]
    k: i64,
    /// ring element to evaluate `[k]` at
    #[arg(long)]
    at: Option<String>,
    /// coordinate change in `x`
    #[arg(long)]
    theta: Option<String>,
}

pub fn fgl(a: FglArgs) -> Result<Output> {
    let ring: Ring = a.ring.parse()?;
    let f = match (law_arg(&a.law, &ring, a.trunc), a.action) {
        (Err(Error::AxiomFailure(m)), FglAction::Validate) => return Ok(check("axioms", false, vec![m])),
        (f, _) => f?,
    };
    Ok(match a.action {
        FglAction::Construct => Output::Series(f.law().clone()),
        FglAction::Validate => match f.validate() {
            Ok(()) => check("axioms", true, vec![]),
            Err(Error::AxiomFailure(m)) => check("axioms", false, vec![m]),
            Err(e) => return Err(e),
        },
        FglAction::Log => Output::Series(f.log()?),
        FglAction::Exp => Output::Series(f.exp()?),
        FglAction::Nseries => match &a.at {
            Some(e) => Output::Value(ring.clone(), f.n_element(&ring, a.k, &ring.parse(e)?)?),
            None => Output::Series(f.n_series(a.k)?),
        },
        FglAction::Transport => {
            let text = a.theta.as_deref().ok_or_else(|| Error::InvalidInput("transport needs --theta".into()))?;
            let theta = x_space(&ring, a.trunc)?.parse(text)?;
            Output::Series(f.transport(&theta)?.0.law().clone())
        }
    })
}

// ------------------------------------------------------------- quotient

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum QuotientAction {
    F,
    G,
    Law,
    Defect,
}

#[derive(Args)]
pub struct QuotientArgs {
    #[arg(value_enum)]
    action: QuotientAction,
    #[arg(long, default_value = "gm")]
    law: String,
    #[arg(long, default_value = "QQ")]
    ring: String,
    /// subgroup points separated by `;`
    #[arg(long)]
    points: String,
    /// integer to invert before forming `g`
    #[arg(long)]
    invert: Option<i64>,
    #[arg(long, default_value_t = 6)]
    trunc: u32,
}

pub fn quotient(a: QuotientArgs) -> Result<Output> {
    let ring: Ring = a.ring.parse()?;
    let f = law_arg(&a.law, &ring, a.trunc)?;
    let pts: Vec<&str> = a.points.split(';').map(str::trim).collect();
    let h = SubgroupPoints::parse(&ring, &pts)?;
    Ok(match a.action {
        QuotientAction::F => Output::Series(lubin_f(&f, &h, a.trunc)?),
        QuotientAction::G => Output::Series(lubin_g(&f, &h, a.invert, a.trunc)?.g),
        QuotientAction::Law => Output::Series(quotient_law(&f, &h, a.invert, a.trunc)?.law.law().clone()),
        QuotientAction::Defect => {
            let q = quotient_law(&f, &h, a.invert, a.trunc)?;
            let src = f.change_ring(q.law.ring())?;
            let d = q.homomorphism_defect(&src)?;
            check("homomorphism", d.is_zero(), if d.is_zero() { vec![] } else { vec![d.to_string()] })
        }
    })
}

// ---------------------------------------------------------------- theta

#[derive(Args)]
pub struct ThetaArgs {
    #[arg(long, default_value = "ga")]
    law: String,
    #[arg(long, default_value = "QQ")]
    ring: String,
    #[command(flatten)]
    orders: Orders,
    /// check that the product vanishes at `[k]qhat` for `0 < |k| <= N`
    #[arg(long)]
    kernel: bool,
}

pub fn theta(a: ThetaArgs) -> Result<Output> {
    let mut o = a.orders.clone();
    if a.kernel {
        // evaluation away from zero needs the whole polynomial, degree 2N + 1
        o.trunc = o.trunc.max(2 * o.n + 1);
    }
    let ctx = context(&a.law, &a.ring, &o)?;
    let th = tate::theta(&ctx, a.orders.n)?;
    if !a.kernel {
        return Ok(Output::Series(th.series));
    }
    let mut bad = Vec::new();
    for k in (1..=a.orders.n as i64).flat_map(|k| [k, -k]) {
        let v = th.kernel_value(&ctx, k)?;
        if !ctx.ring().is_zero(&v) {
            bad.push(format!("Theta([{k}]qhat) = {}", ctx.ring().format(&v)));
        }
    }
    Ok(check("kernel", bad.is_empty(), bad))
}

// ---------------------------------------------------------------- sigma

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum SigmaAction {
    Expand,
    Functional,
    Modified,
}

#[derive(Args)]
pub struct SigmaArgs {
    #[arg(value_enum, default_value_t = SigmaAction::Expand)]
    action: SigmaAction,
    #[arg(long, default_value_t = 2)]
    qorder: i64,
    #[arg(long, default_value_t = 4)]
    lbound: i64,
    #[arg(long, default_value = "1/2", allow_hyphen_values = true)]
    r: String,
}

pub fn sigma(a: SigmaArgs) -> Result<Output> {
    let orders = SigmaOrders { qorder: a.qorder, lbound: a.lbound };
    Ok(match a.action {
        SigmaAction::Expand => {
            let ring = tate::sigma_ring(a.qorder, a.qorder.max(0) as u32 + 2)?;
            Output::Text(tate::sigma(&ring)?.to_string())
        }
        SigmaAction::Functional => check("sigma(qL) = -sigma(L)/L", tate::functional_equation_check(orders)?, vec![]),
        SigmaAction::Modified => {
            let r = rational(&a.r)?;
            check(&format!("sigma[qL, {}] = sigma[L, {r}]", &r + BigRational::from_integer(1.into())), tate::modified_identity_check(&r, orders)?, vec![])
        }
    })
}

// ----------------------------------------------------------------- tate

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum TateAction {
    Mul,
    Inv,
    Order,
    ExactSeq,
}

#[derive(Args)]
pub struct TateArgs {
    #[arg(value_enum)]
    action: TateAction,
    #[arg(long, default_value = "ga")]
    law: String,
    #[arg(long)]
    ring: String,
    #[arg(long)]
    qhat: String,
    /// point `g,a`
    #[arg(long, allow_hyphen_values = true)]
    p: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    q: Option<String>,
    /// sample `x,a` for the exact-sequence check (repeatable)
    #[arg(long, allow_hyphen_values = true)]
    sample: Vec<String>,
    #[arg(long, default_value_t = 64)]
    bound: u32,
    #[arg(long, default_value_t = 6)]
    trunc: u32,
}

fn pair(text: &str) -> Result<(&str, &str)> {
    text.rsplit_once(',').ok_or_else(|| Error::Parse(format!("expected `element,rational`, got {text:?}")))
}

fn tate_point(t: &TateGroup, text: Option<&str>) -> Result<TatePoint> {
    let text = text.ok_or_else(|| Error::InvalidInput("missing point".into()))?;
    let (g, a) = pair(text)?;
    t.point(t.ring().parse(g)?, rational(a)?)
}

pub fn tate(a: TateArgs) -> Result<Output> {
    let ring: Ring = a.ring.parse()?;
    let base = ring.presentation().map(|p| p.base.clone()).unwrap_or_else(|| ring.clone());
    let law = law_arg(&a.law, &base, a.trunc)?;
    let t = TateGroup::new(&law, &ring, ring.parse(&a.qhat)?)?;
    Ok(match a.action {
        TateAction::Mul => {
            let p = t.mul(&tate_point(&t, a.p.as_deref())?, &tate_point(&t, a.q.as_deref())?)?;
            Output::Text(t.format_point(&p))
        }
        TateAction::Inv => Output::Text(t.format_point(&t.inv(&tate_point(&t, a.p.as_deref())?)?)),
        TateAction::Order => {
            let n = t.torsion_order(&tate_point(&t, a.p.as_deref())?, a.bound)?;
            Output::Text(n.map_or_else(|| "none".to_string(), |n| n.to_string()))
        }
        TateAction::ExactSeq => {
            let mut samples = Vec::new();
            for s in &a.sample {
                let (g, r) = pair(s)?;
                samples.push((ring.parse(g)?, rational(r)?));
            }
            let rep = t.exact_sequence_check(&samples)?;
            check("exact sequence", rep.passed(), rep.failures)
        }
    })
}

// ---------------------------------------------------------------- euler

/// `ROOT,WEIGHT,MULT` with `ROOT` one of `0`, `x`, `3x`, `-y`.
fn block(text: &str) -> Result<Block> {
    let bad = || Error::Parse(format!("bad block {text:?}; expected ROOT,WEIGHT,MULT"));
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    let [root, w, m] = parts.as_slice() else { return Err(bad()) };
    let w: i64 = w.parse().map_err(|_| bad())?;
    let m: i64 = m.parse().map_err(|_| bad())?;
    if *root == "0" {
        return Ok(Block::new(None, w, m));
    }
    let split = root.find(|c: char| c.is_ascii_alphabetic()).ok_or_else(bad)?;
    let (scale, var) = root.split_at(split);
    let scale = match scale {
        "" | "+" => 1,
        "-" => -1,
        s => s.parse().map_err(|_| bad())?,
    };
    Ok(Block::new(Some((var, scale)), w, m))
}

fn bundle(blocks: &[String]) -> Result<(EqBundle, Vec<String>)> {
    let mut out = Vec::new();
    let mut vars: Vec<String> = Vec::new();
    for b in blocks {
        let b = block(b)?;
        if let Some(r) = &b.root {
            if !vars.contains(&r.var) {
                vars.push(r.var.clone());
            }
        }
        out.push(b);
    }
    Ok((EqBundle::new(out), vars))
}

#[derive(Args)]
pub struct EulerArgs {
    #[arg(long, default_value = "ga")]
    law: String,
    #[arg(long, default_value = "QQ")]
    ring: String,
    #[command(flatten)]
    orders: Orders,
    /// `ROOT,WEIGHT,MULT` (repeatable)
    #[arg(long = "block", allow_hyphen_values = true)]
    blocks: Vec<String>,
    /// report whether the Euler class is a unit instead of printing it
    #[arg(long)]
    unit_check: bool,
}

pub fn euler(a: EulerArgs) -> Result<Output> {
    let ctx = context(&a.law, &a.ring, &a.orders)?;
    let (b, vars) = bundle(&a.blocks)?;
    let names: Vec<&str> = vars.iter().map(String::as_str).collect();
    let s = ctx.space(&names, a.orders.trunc)?;
    if a.unit_check {
        return Ok(check("unit", unit_check(&ctx, &b, &s), vec![]));
    }
    Ok(Output::Series(euler_class(&ctx, &b, &s)?))
}

// ---------------------------------------------------------------- genus

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum GenusAction {
    Eval,
    Todd,
    Ahat,
    RrCheck,
    Loop,
    LoopVsQuotient,
    Chi,
    Witten,
    Euler,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Normalization {
    Renormalized,
    Sigma,
    Raw,
    Sine,
}

#[derive(Args)]
pub struct GenusArgs {
    #[arg(value_enum)]
    action: GenusAction,
    /// `pt`, `cpN`, `hypN_E`, products joined by `x`, or JSON Chern data
    #[arg(long, default_value = "pt")]
    manifold: String,
    #[arg(long, default_value = "gm")]
    law: String,
    #[arg(long, default_value = "QQ")]
    ring: String,
    /// characteristic series in `x` for `eval`
    #[arg(long)]
    series: Option<String>,
    /// strict coordinate change in `x` for `rr-check`
    #[arg(long)]
    theta: Option<String>,
    #[command(flatten)]
    orders: Orders,
    #[arg(long, default_value = "1/2", allow_hyphen_values = true)]
    r: String,
    #[arg(long, value_enum, default_value_t = Normalization::Renormalized)]
    normalization: Normalization,
}

pub fn genus(a: GenusArgs) -> Result<Output> {
    let x: ChernData = parse_manifold(&a.manifold)?;
    let d = x.dim();
    let ring: Ring = a.ring.parse()?;
    let value = |g: &GenusSeries| -> Result<Output> { Ok(Output::Value(g.ring().clone(), genus::genus_eval(&x, g)?)) };
    match a.action {
        GenusAction::Eval => {
            let text = a.series.as_deref().ok_or_else(|| Error::InvalidInput("eval needs --series".into()))?;
            value(&GenusSeries::new(x_space(&ring, d.max(a.orders.trunc))?.parse(text)?)?)
        }
        GenusAction::Todd => value(&genus::todd_series_of(&law_arg(&a.law, &ring, d + 1)?)?),
        GenusAction::Ahat => value(&genus::ahat_series(d)?),
        GenusAction::Euler => Ok(Output::Value(Ring::integers(), Ring::integers().from_bigint(&x.euler_characteristic()?))),
        GenusAction::RrCheck => {
            let f = law_arg(&a.law, &ring, d + 1)?;
            let text = a.theta.as_deref().ok_or_else(|| Error::InvalidInput("rr-check needs --theta".into()))?;
            let theta = x_space(&ring, d + 1)?.parse(text)?;
            let (l, r) = genus::rr_transform(&x, &f, &theta)?;
            let passed = ring.eq(&l, &r);
            Ok(check("riemann-roch", passed, vec![format!("lhs = {}", ring.format(&l)), format!("rhs = {}", ring.format(&r))]))
        }
        GenusAction::Loop => {
            let o = Orders { trunc: a.orders.trunc.max(d + 1), ..a.orders.clone() };
            match a.normalization {
                Normalization::Sine => {
                    let e = genus::sine_loop_genus(&x, &Ring::gaussian())?;
                    Ok(Output::Value(e.ring().clone(), e.value().clone()))
                }
                Normalization::Sigma if a.law == "gm" && x.c1().iter().all(|c| *c == 0) => {
                    let q = genus::witten_series(o.qorder, d)?;
                    value(&q)
                }
                norm => {
                    let ctx = context(&a.law, &a.ring, &o)?;
                    let v = match norm {
                        Normalization::Raw => genus::loop_genus_raw(&x, &ctx, o.n)?,
                        Normalization::Sigma => genus::loop_genus(&x, &ctx, o.n, LoopNormalization::Sigma)?,
                        _ => genus::loop_genus(&x, &ctx, o.n, LoopNormalization::Renormalized)?,
                    };
                    Ok(Output::Value(ctx.ring().clone(), v))
                }
            }
        }
        GenusAction::Witten => {
            let q = genus::witten_series(a.orders.qorder, d)?;
            let v = genus::witten_genus(&x, a.orders.qorder)?;
            Ok(Output::Value(q.ring().clone(), v))
        }
        GenusAction::LoopVsQuotient => {
            let o = Orders { trunc: a.orders.trunc.max(d + 1), ..a.orders.clone() };
            let ctx = context(&a.law, &a.ring, &o)?;
            Ok(check("loop genus = quotient genus", genus::loop_vs_quotient_check(&x, &ctx, o.n)?, vec![]))
        }
        GenusAction::Chi => {
            let e = genus::chi_residue(&x, &rational(&a.r)?)?;
            Ok(Output::Value(e.ring().clone(), e.value().clone()))
        }
    }
}

// ---------------------------------------------------------------- tower

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum TowerAction {
    Transition,
    U,
    OmegaCheck,
    Relative,
    Stabilize,
}

#[derive(Args)]
pub struct TowerArgs {
    #[arg(value_enum)]
    action: TowerAction,
    #[arg(long, default_value = "gm")]
    law: String,
    #[arg(long, default_value = "QQ")]
    ring: String,
    /// `ROOT,0,MULT` (repeatable); weights must be zero
    #[arg(long = "block", allow_hyphen_values = true)]
    blocks: Vec<String>,
    #[command(flatten)]
    orders: Orders,
    /// class in the root variables for `omega-check`
    #[arg(long, default_value = "1")]
    class: String,
    /// stabilize the product without the `L^N` normalization
    #[arg(long)]
    raw: bool,
}

pub fn tower(a: TowerArgs) -> Result<Output> {
    let (b, vars) = bundle(&a.blocks)?;
    let names: Vec<&str> = vars.iter().map(String::as_str).collect();
    let mut o = a.orders.clone();
    if a.law == "ga" || a.law == "gm" {
        // u_n has valuation up to rank * n(n+1)/2 in the series variable
        let need = b.rank().unsigned_abs() as i64 * (o.n as i64) * (o.n as i64 + 1);
        o.qorder = o.qorder.max(need + 1);
        o.tail = Some(o.tail.unwrap_or(0).max(default_tail(&o)).max(need as u32 + 2));
    }
    let ctx = context(&a.law, &a.ring, &o)?;
    let s = ctx.space(&names, o.trunc)?;
    let t = ThomTower::new(&ctx, &b, &s)?;
    Ok(match a.action {
        TowerAction::Transition => Output::Series(t.transition(o.n)?),
        TowerAction::U => Output::Series(t.unit_u(o.n)?),
        TowerAction::Relative => Output::Series(t.relative_omega(o.n)?),
        TowerAction::OmegaCheck => {
            let cls = s.parse(&a.class)?;
            let mut bad = Vec::new();
            for n in 1..=o.n {
                if !t.diagram_check(n, &cls)? {
                    bad.push(format!("j_{n} omega_{} != omega_{n}", n - 1));
                }
                if t.unit_u(n)? != t.unit_u(n - 1)?.mul(&t.transition(n)?)? {
                    bad.push(format!("u_{n} != u_{} * transition({n})", n - 1));
                }
            }
            check("thom tower", bad.is_empty(), bad)
        }
        TowerAction::Stabilize => {
            let st = t.stabilize(a.orders.qorder, !a.raw)?;
            Output::Text(format!("N_stable = {}\n{}", st.n_stable, st.series))
        }
    })
}
