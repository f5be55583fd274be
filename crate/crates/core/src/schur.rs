//! Shape specifications and dispatch to the cohomology engines, with
//! optional cross-validation between independent routes.

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use serde::{Serialize, Serializer};

use crate::arith::{poly_reverse, CohPoly, Prime};
use crate::closed_form::{hook_from_series, sym_stable_poly, truncated_sym_poly};
use crate::complexes::{ribbon_stable_poly, twocol_stable_poly};
use crate::error::{invalid, Error, Result};
use crate::hooks::hook_poly;
use crate::partitions::{composition_to_hook, hook_to_composition, RibbonComposition};

/// Largest complex (number of edges) that cross-validation will build on
/// its own initiative; explicitly requested complexes may go up to the
/// engine limit.
pub const CROSS_CHECK_EDGES: usize = 16;

/// A functor of `Omega` (or a flag weight) whose stable cohomology is wanted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ShapeSpec {
    /// `Sym^d`.
    Sym(u64),
    /// `Lambda^d`.
    Wedge(u64),
    /// The truncated power `T_p Sym^d`.
    Truncated(u64),
    /// `S_(a, 1^b)`.
    Hook { a: u64, b: u64 },
    /// `S_lambda` with `lambda = (2^d, 1^(m-d))`, i.e. two columns of lengths `m` and `d`.
    TwoCol { m: u64, d: u64 },
    /// The ribbon Schur functor with the given column lengths.
    Ribbon(RibbonComposition),
    /// A flag weight `(lambda_1, ..., lambda_r)` with `|lambda| = 0`.
    Weight(Vec<i64>),
}

impl ShapeSpec {
    /// The equivalent shape in the most specific form `weight_to_shape`
    /// produces; weights are resolved to their shape.
    pub fn canonical(&self) -> Result<ShapeSpec> {
        Ok(match *self {
            ShapeSpec::Hook { a: 1, b } => ShapeSpec::Wedge(b + 1),
            ShapeSpec::Hook { a, b: 0 } => ShapeSpec::Sym(a),
            ShapeSpec::TwoCol { m, d: 0 } => ShapeSpec::Wedge(m),
            ShapeSpec::TwoCol { m, d: 1 } => ShapeSpec::Hook { a: 2, b: m - 1 }.canonical()?,
            ShapeSpec::Wedge(1) => ShapeSpec::Sym(1),
            ShapeSpec::Wedge(0) => ShapeSpec::Sym(0),
            ShapeSpec::Weight(ref w) => weight_to_shape(w)?,
            ref other => other.clone(),
        })
    }

    fn validate(&self) -> Result<()> {
        match *self {
            ShapeSpec::Hook { a: 0, b } if b > 0 => invalid("hook needs a >= 1"),
            ShapeSpec::TwoCol { m, d } if d > m => {
                invalid(format!("two-column shape needs d <= m, got m={m} d={d}"))
            }
            _ => Ok(()),
        }
    }
}

fn join<T: ToString>(xs: &[T]) -> String {
    xs.iter().map(T::to_string).collect::<Vec<_>>().join(",")
}

impl fmt::Display for ShapeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ShapeSpec::Sym(d) => write!(f, "sym:{d}"),
            ShapeSpec::Wedge(d) => write!(f, "wedge:{d}"),
            ShapeSpec::Truncated(d) => write!(f, "trunc:{d}"),
            ShapeSpec::Hook { a, b } => write!(f, "hook:{a},{b}"),
            ShapeSpec::TwoCol { m, d } => write!(f, "twocol:{m},{d}"),
            ShapeSpec::Ribbon(w) => write!(f, "ribbon:{}", join(w.parts())),
            ShapeSpec::Weight(w) => write!(f, "weight:{}", join(w)),
        }
    }
}

impl Serialize for ShapeSpec {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

fn parse_list<T: FromStr>(s: &str, what: &str) -> Result<Vec<T>> {
    s.split(',')
        .map(|x| {
            x.trim()
                .parse::<T>()
                .map_err(|_| Error::Parse(format!("bad {what} parameter {x:?}")))
        })
        .collect()
}

fn parse_exact<const N: usize>(s: &str, what: &str) -> Result<[u64; N]> {
    let v: Vec<u64> = parse_list(s, what)?;
    v.try_into()
        .map_err(|_| Error::Parse(format!("{what} takes {N} parameter(s)")))
}

impl FromStr for ShapeSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (kind, args) = s
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("shape {s:?} is not of the form kind:params")))?;
        let shape = match kind.trim() {
            "sym" => ShapeSpec::Sym(parse_exact::<1>(args, "sym")?[0]),
            "wedge" => ShapeSpec::Wedge(parse_exact::<1>(args, "wedge")?[0]),
            "trunc" => ShapeSpec::Truncated(parse_exact::<1>(args, "trunc")?[0]),
            "hook" => {
                let [a, b] = parse_exact::<2>(args, "hook")?;
                ShapeSpec::Hook { a, b }
            }
            "twocol" => {
                let [m, d] = parse_exact::<2>(args, "twocol")?;
                ShapeSpec::TwoCol { m, d }
            }
            "ribbon" => ShapeSpec::Ribbon(RibbonComposition::new(parse_list(args, "ribbon")?)?),
            "weight" => ShapeSpec::Weight(parse_list(args, "weight")?),
            other => return Err(Error::Parse(format!("unknown shape kind {other:?}"))),
        };
        shape.validate()?;
        Ok(shape)
    }
}

/// Recognizes the flag weights `(-d, d)`, `(-r, 1^r)`, `(-a-b, a, 1^b)` and
/// `(-m-d, 2^d, 1^(m-d))`; trailing zeros are ignored.
pub fn weight_to_shape(weight: &[i64]) -> Result<ShapeSpec> {
    let Some((&first, tail)) = weight.split_first() else {
        return invalid("empty weight");
    };
    let total: i64 = weight.iter().sum();
    if total != 0 {
        return invalid(format!("weight {weight:?} has size {total}; stable cohomology needs size 0"));
    }
    let mut tail = tail.to_vec();
    while tail.last() == Some(&0) {
        tail.pop();
    }
    if tail.iter().any(|&x| x < 1) || tail.windows(2).any(|w| w[0] < w[1]) {
        return invalid(format!("weight tail {tail:?} is not a partition"));
    }
    debug_assert_eq!(-first, tail.iter().sum::<i64>());
    let r = tail.len() as u64;
    let head = tail.first().copied().unwrap_or(0);
    let ones = tail.iter().filter(|&&x| x == 1).count() as u64;
    let twos = tail.iter().filter(|&&x| x == 2).count() as u64;
    Ok(match (r, head) {
        (0, _) => ShapeSpec::Sym(0),
        (1, d) => ShapeSpec::Sym(d as u64),
        (_, 1) => ShapeSpec::Wedge(r),
        (_, a) if ones == r - 1 => ShapeSpec::Hook { a: a as u64, b: r - 1 },
        (_, 2) => ShapeSpec::TwoCol { m: r, d: twos },
        _ => return invalid(format!("no engine handles the weight tail {tail:?}")),
    })
}

/// The flag weight `(-|lambda|, lambda)` of a shape given by a partition.
pub fn shape_to_weight(shape: &ShapeSpec) -> Result<Vec<i64>> {
    let (size, tail): (u64, Vec<u64>) = match shape {
        ShapeSpec::Sym(d) => (*d, if *d == 0 { vec![] } else { vec![*d] }),
        ShapeSpec::Wedge(r) => (*r, vec![1; *r as usize]),
        ShapeSpec::Hook { a, b } => {
            let mut t = vec![*a];
            t.extend(std::iter::repeat_n(1, *b as usize));
            (a + b, t)
        }
        ShapeSpec::TwoCol { m, d } => {
            let mut t = vec![2; *d as usize];
            t.extend(std::iter::repeat_n(1, (m - d) as usize));
            (m + d, t)
        }
        ShapeSpec::Ribbon(w) => match composition_to_hook(w) {
            Some((a, b)) => return shape_to_weight(&ShapeSpec::Hook { a: a as u64, b: b as u64 }),
            None => return invalid("a ribbon that is not a hook has no flag weight"),
        },
        ShapeSpec::Weight(w) => return Ok(w.clone()),
        ShapeSpec::Truncated(_) => return invalid("truncated powers have no flag weight"),
    };
    let mut w = vec![-(size as i64)];
    w.extend(tail.into_iter().map(|x| x as i64));
    Ok(w)
}

/// One engine's answer.
#[derive(Clone, Debug, Serialize)]
pub struct RouteResult {
    pub name: &'static str,
    pub polynomial: CohPoly,
    #[serde(skip)]
    pub elapsed: Duration,
}

/// The answer for a shape together with every route that produced it.
#[derive(Clone, Debug)]
pub struct CohomologyReport {
    pub shape: ShapeSpec,
    pub prime: Prime,
    pub polynomial: CohPoly,
    pub routes: Vec<RouteResult>,
    /// Alternative routes that were applicable in principle but not run, with the reason.
    pub skipped: Vec<(&'static str, String)>,
}

impl CohomologyReport {
    /// True when every route agreed (mismatches are reported as errors, so
    /// an existing report always agrees; kept for serialization).
    pub fn agree(&self) -> bool {
        self.routes.iter().all(|r| r.polynomial == self.polynomial)
    }
}

type RouteFn<'a> = Box<dyn FnOnce() -> Result<CohPoly> + 'a>;

struct Plan<'a> {
    routes: Vec<(&'static str, RouteFn<'a>)>,
    skipped: Vec<(&'static str, String)>,
}

impl<'a> Plan<'a> {
    fn new(name: &'static str, f: impl FnOnce() -> Result<CohPoly> + 'a) -> Self {
        Plan { routes: vec![(name, Box::new(f))], skipped: Vec::new() }
    }

    fn also(&mut self, name: &'static str, f: impl FnOnce() -> Result<CohPoly> + 'a) {
        self.routes.push((name, Box::new(f)));
    }

    fn skip(&mut self, name: &'static str, reason: impl Into<String>) {
        self.skipped.push((name, reason.into()));
    }
}

fn hook_complex_route(a: u64, b: u64, p: Prime) -> Result<CohPoly> {
    let w = hook_to_composition(to_u32(a)?, to_u32(b)?)?;
    ribbon_stable_poly(&w, p)
}

fn to_u32(x: u64) -> Result<u32> {
    u32::try_from(x).map_err(|_| Error::InvalidArgument(format!("{x} is too large")))
}

fn plan<'a>(shape: &ShapeSpec, p: Prime) -> Result<Plan<'a>> {
    shape.validate()?;
    Ok(match shape.clone() {
        ShapeSpec::Sym(d) => {
            let mut plan = Plan::new("digit_formula", move || Ok(sym_stable_poly(d, p)));
            plan.also("hook_recursion", move || Ok(hook_poly(d, 0, p)));
            plan
        }
        ShapeSpec::Wedge(d) => {
            let exp = to_u32(d)?;
            let mut plan = Plan::new("exterior_power", move || Ok(CohPoly::t_pow(exp)));
            if d >= 1 {
                plan.also("hook_recursion", move || Ok(hook_poly(1, d - 1, p)));
            }
            plan
        }
        ShapeSpec::Truncated(d) => Plan::new("digit_formula", move || Ok(truncated_sym_poly(d, p))),
        ShapeSpec::Hook { a, b } => {
            let mut plan = Plan::new("hook_recursion", move || Ok(hook_poly(a, b, p)));
            if a == 0 {
                return Ok(plan);
            }
            if a - 1 <= CROSS_CHECK_EDGES as u64 {
                plan.also("ribbon_complex", move || hook_complex_route(a, b, p));
            } else {
                plan.skip("ribbon_complex", format!("{} edges exceed {CROSS_CHECK_EDGES}", a - 1));
            }
            plan.also("generating_function", move || hook_from_series(a, b, p));
            plan
        }
        ShapeSpec::TwoCol { m, d } => {
            let dual = move || poly_reverse(&hook_poly(d + 1, m - d, p), to_u32(2 * m + 1)?);
            if d <= CROSS_CHECK_EDGES as u64 {
                let mut plan = Plan::new("twocol_complex", move || twocol_stable_poly(m, d, p));
                plan.also("hook_duality", dual);
                plan
            } else {
                let mut plan = Plan::new("hook_duality", dual);
                plan.skip("twocol_complex", format!("{d} edges exceed {CROSS_CHECK_EDGES}"));
                plan
            }
        }
        ShapeSpec::Ribbon(w) => {
            let hook = composition_to_hook(&w);
            let w2 = w.clone();
            let mut plan = Plan::new("ribbon_complex", move || ribbon_stable_poly(&w2, p));
            if let Some((a, b)) = hook {
                plan.also("hook_recursion", move || Ok(hook_poly(a as u64, b as u64, p)));
            }
            plan
        }
        ShapeSpec::Weight(ref w) => plan(&weight_to_shape(w)?, p)?,
    })
}

/// Stable cohomology polynomial of `shape` in characteristic `p`.
///
/// With `cross_validate`, every applicable alternative route also runs and
/// any disagreement is returned as [`Error::RouteMismatch`].
pub fn stable_cohomology(shape: &ShapeSpec, p: Prime, cross_validate: bool) -> Result<CohomologyReport> {
    let mut plan = plan(shape, p)?;
    if !cross_validate {
        plan.routes.truncate(1);
        plan.skipped.clear();
    }
    let mut routes: Vec<RouteResult> = Vec::with_capacity(plan.routes.len());
    for (name, f) in plan.routes {
        let start = Instant::now();
        let polynomial = f()?;
        routes.push(RouteResult { name, polynomial, elapsed: start.elapsed() });
    }
    let first = &routes[0];
    if let Some(bad) = routes[1..].iter().find(|r| r.polynomial != first.polynomial) {
        return Err(Error::RouteMismatch {
            query: format!("{shape} at p={p}"),
            left_name: first.name.to_string(),
            left: first.polynomial.clone(),
            right_name: bad.name.to_string(),
            right: bad.polynomial.clone(),
        });
    }
    Ok(CohomologyReport {
        shape: shape.clone(),
        prime: p,
        polynomial: first.polynomial.clone(),
        routes,
        skipped: plan.skipped,
    })
}
