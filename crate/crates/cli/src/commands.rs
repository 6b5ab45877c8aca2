//! One function per subcommand, each returning an [`Outcome`].

use cheb_core::arith::{is_prime_u64, ApproxComplex, ApproxReal, Rat};
use cheb_core::baker::{corollary_scan, unit_circle_test_points, upper_half_root};
use cheb_core::chebyshev::{cheb_eval_rat, cheb_poly};
use cheb_core::equidist::{discrepancy_series, fit_loglog_slope, log_plus_integral, DiscrepancyConstants};
use cheb_core::harness::{scan_s_integral_orbits, size_threshold, theorem2_experiment, Theorem2Config};
use cheb_core::heights::{compare_heights, weil_height, weil_height_rational, DEFAULT_DOBROWOLSKI_C};
use cheb_core::integrality::{cor33_check, is_s_integral, Place, PlaceSet};
use cheb_core::{Beta, ChebMap, Error, PreperiodicOrbit, Result};
use clap::{Args, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::report::{big, bigs, to_value, Check, Outcome, Table};

const RESIDUAL_TOL: f64 = 1e-9;
const SEMICONJUGACY_TOL: f64 = 1e-9;
const MAX_CHEB_ITERATIONS: u32 = 16;

/// Comma list of places; `inf` must be present and every other token prime.
pub fn parse_places(s: &str) -> std::result::Result<PlaceSet, String> {
    let tokens: Vec<&str> = s.split(',').map(str::trim).filter(|t| !t.is_empty()).collect();
    if !tokens.iter().any(|t| matches!(*t, "inf" | "infty" | "oo" | "∞")) {
        return Err(format!("place list {s:?} must contain inf"));
    }
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_beta(s: &str) -> Result<Beta> {
    s.parse()
}

fn parse_rational(s: &str) -> Result<Rat> {
    match parse_beta(s)? {
        Beta::Rational(r) => Ok(r),
        b => Err(Error::Parse(format!("{b} is not rational"))),
    }
}

fn prime_powers(m: &std::collections::BTreeMap<num_bigint::BigUint, u64>) -> String {
    m.iter().map(|(p, e)| format!("{p}^{e}")).collect::<Vec<_>>().join(";")
}

#[derive(Args, Clone, Debug, Serialize)]
pub struct OrbitArgs {
    /// Order N of the root of unity.
    #[arg(long = "N")]
    #[serde(rename = "N")]
    pub n: u64,
}

pub fn orbit(args: &OrbitArgs) -> Result<Outcome> {
    let o = PreperiodicOrbit::new(args.n)?;
    let f = o.minpoly();
    let residuals = o.residuals();
    let max_residual = residuals.iter().map(|r| r.upper().abs().max(r.lower().abs())).fold(0.0, f64::max);
    let mut table = Table::new(&["N", "a", "value", "errorBound", "residual"]);
    let mut conj = Vec::new();
    for ((a, c), r) in o.numerators().iter().zip(o.conjugates()).zip(&residuals) {
        table.push(vec![
            args.n.to_string(),
            a.to_string(),
            c.value.to_string(),
            c.error_bound.to_string(),
            r.value.to_string(),
        ]);
        conj.push(json!({ "a": a, "value": c.value, "errorBound": c.error_bound, "residual": r.value }));
    }
    let checks = vec![
        Check::new("degreeEqualsSize", f.degree() == o.size(), f.degree(), o.size()),
        Check::new("monic", f.is_monic(), big(&f.lead()), 1),
        Check::at_most("maxResidual", max_residual, RESIDUAL_TOL),
    ];
    Ok(Outcome {
        config: to_value(args),
        results: json!({
            "N": args.n,
            "size": o.size(),
            "minpoly": bigs(f.coeffs()),
            "traceCoeffs": bigs(o.trace_coeffs()),
            "conjugates": conj,
        }),
        checks,
        table,
        notes: vec![],
    })
}

#[derive(Args, Clone, Debug, Serialize)]
pub struct ChebArgs {
    /// Degree d of the map T_d.
    #[arg(long, default_value_t = 2)]
    pub d: u32,
    /// Rational starting point.
    #[arg(long, allow_hyphen_values = true)]
    pub x: Option<String>,
    /// Number of forward iterates of x.
    #[arg(long, default_value_t = 6)]
    pub iterations: u32,
}

pub fn cheb(args: &ChebArgs) -> Result<Outcome> {
    let map = ChebMap::new(args.d)?;
    if args.iterations > MAX_CHEB_ITERATIONS {
        return Err(Error::Domain(format!("at most {MAX_CHEB_ITERATIONS} iterations")));
    }
    let poly = cheb_poly(args.d as u64)?;
    let mut worst: f64 = 0.0;
    for k in 0..64 {
        let t = 0.049 * k as f64;
        let x = ApproxComplex::real(ApproxReal::exact(2.0 * t.cos()));
        let lhs = map.apply_approx(&x).value.re;
        worst = worst.max((lhs - 2.0 * (args.d as f64 * t).cos()).abs());
    }
    let mut table = Table::new(&["k", "value", "height", "scaledHeight"]);
    let mut iterates = Vec::new();
    if let Some(x) = &args.x {
        let mut z = parse_rational(x)?;
        for k in 0..=args.iterations {
            let h = weil_height_rational(&z).value;
            let scaled = h / (args.d as f64).powi(k as i32);
            table.push(vec![k.to_string(), z.to_string(), h.to_string(), scaled.to_string()]);
            iterates.push(json!({ "k": k, "value": z.to_string(), "height": h, "scaledHeight": scaled }));
            if k < args.iterations {
                z = cheb_eval_rat(args.d as u64, &z);
            }
        }
    }
    Ok(Outcome {
        config: to_value(args),
        results: json!({ "d": args.d, "poly": bigs(poly.coeffs()), "iterates": iterates }),
        checks: vec![Check::at_most("semiconjugacy", worst, SEMICONJUGACY_TOL * (args.d as f64).powi(2))],
        table,
        notes: vec![],
    })
}

#[derive(Args, Clone, Debug, Serialize)]
pub struct HeightArgs {
    /// `p/q` or `poly:c0,c1,...,cd[@k]`.
    #[arg(long, allow_hyphen_values = true)]
    pub beta: String,
}

pub fn height(args: &HeightArgs) -> Result<Outcome> {
    let beta = parse_beta(&args.beta)?;
    let h = weil_height(&beta);
    let mut table = Table::new(&["beta", "degree", "height", "errorBound"]);
    table.push(vec![beta.to_string(), beta.degree().to_string(), h.value.to_string(), h.error_bound.to_string()]);
    Ok(Outcome {
        config: to_value(args),
        results: json!({
            "beta": beta.to_string(),
            "degree": beta.degree(),
            "minpoly": bigs(beta.minpoly().coeffs()),
            "height": h,
        }),
        checks: vec![Check::new("nonnegative", h.value + h.error_bound >= 0.0, h.value, 0.0)],
        table,
        notes: vec![],
    })
}

#[derive(Args, Clone, Debug, Serialize)]
pub struct CanonicalHeightArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub beta: String,
    #[arg(long, default_value_t = 2)]
    pub d: u32,
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
}

pub fn canonical_height(args: &CanonicalHeightArgs) -> Result<Outcome> {
    let beta = parse_beta(&args.beta)?;
    let cmp = compare_heights(&beta, ChebMap::new(args.d)?, args.tol)?;
    let mut table = Table::new(&["beta", "d", "weil", "canonical", "errorBound", "gap"]);
    table.push(vec![
        beta.to_string(),
        args.d.to_string(),
        cmp.weil.value.to_string(),
        cmp.canonical.value.to_string(),
        cmp.canonical.error_bound.to_string(),
        cmp.gap.to_string(),
    ]);
    let slack = cmp.canonical.error_bound + cmp.weil.error_bound;
    Ok(Outcome {
        config: to_value(args),
        results: json!({ "beta": beta.to_string(), "weil": cmp.weil, "canonical": cmp.canonical, "gap": cmp.gap }),
        checks: vec![Check::new(
            "heightDifferenceBound",
            cmp.gap <= 2f64.ln() + slack,
            cmp.gap,
            2f64.ln(),
        )],
        table,
        notes: vec![],
    })
}

#[derive(Args, Clone, Debug, Serialize)]
pub struct SIntegralArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub beta: String,
    #[arg(long = "N")]
    #[serde(rename = "N")]
    pub n: u64,
    /// Places, e.g. `inf,2,3`.
    #[arg(long = "S", default_value = "inf")]
    #[serde(rename = "S")]
    pub s: String,
}

pub fn sintegral(args: &SIntegralArgs) -> Result<Outcome> {
    let beta = parse_beta(&args.beta)?;
    let s = parse_places(&args.s).map_err(Error::Parse)?;
    let orbit = PreperiodicOrbit::new(args.n)?;
    let r = is_s_integral(&orbit, &beta, &s)?;
    let inside = r
        .meeting_primes
        .keys()
        .all(|p| num_traits::ToPrimitive::to_u64(p).is_some_and(|q| s.contains_prime(q)));
    let mut checks = Vec::new();
    if r.unfactored.is_none() {
        checks.push(Check::new("verdictMatchesMeetingPrimes", r.is_s_integral == inside, r.is_s_integral, inside));
    }
    let mut table = Table::new(&["N", "size", "beta", "S", "isSIntegral", "meetingPrimes", "witness"]);
    table.push(vec![
        args.n.to_string(),
        orbit.size().to_string(),
        beta.to_string(),
        s.to_string(),
        r.is_s_integral.to_string(),
        prime_powers(&r.meeting_primes),
        r.witness.as_ref().map(|w| w.to_string()).unwrap_or_default(),
    ]);
    Ok(Outcome {
        config: json!({ "beta": beta.to_string(), "N": args.n, "S": s }),
        results: to_value(&r),
        checks,
        table,
        notes: vec![],
    })
}

#[derive(Args, Clone, Debug, Serialize)]
pub struct ScanArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub beta: String,
    #[arg(long = "S", default_value = "inf")]
    #[serde(rename = "S")]
    pub s: String,
    #[arg(long = "Nmax")]
    #[serde(rename = "Nmax")]
    pub nmax: u64,
    /// `c` in the exceptional-size threshold `c D^12`.
    #[arg(long = "threshold-c", default_value_t = 1.0)]
    #[serde(rename = "thresholdC")]
    pub threshold_c: f64,
}

pub fn scan(args: &ScanArgs) -> Result<Outcome> {
    let beta = parse_beta(&args.beta)?;
    let s = parse_places(&args.s).map_err(Error::Parse)?;
    if args.nmax == 0 {
        return Err(Error::Domain("Nmax must be >= 1".into()));
    }
    let threshold = size_threshold(args.threshold_c, beta.degree());
    let r = scan_s_integral_orbits(&beta, &s, args.nmax, threshold)?;
    let mut table = Table::new(&["N", "size", "isSIntegral", "outsideBits"]);
    for o in &r.per_orbit {
        table.push(vec![
            o.orbit_n.to_string(),
            o.size.to_string(),
            o.is_s_integral.to_string(),
            o.outside_bits.to_string(),
        ]);
    }
    let notes = vec![format!("S-integral orbits: {:?}", r.orders())];
    Ok(Outcome {
        config: json!({ "beta": beta.to_string(), "S": s, "Nmax": args.nmax, "thresholdC": args.threshold_c }),
        checks: vec![Check::new(
            "exceptionalCount",
            r.threshold_holds,
            r.exceptional_count,
            r.exceptional_limit,
        )],
        results: to_value(&r),
        table,
        notes,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Orders {
    All,
    Prime,
}

#[derive(Args, Clone, Debug, Serialize)]
pub struct EquidistArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub beta: String,
    #[arg(long = "Nmin", default_value_t = 2)]
    #[serde(rename = "Nmin")]
    pub nmin: u64,
    #[arg(long = "Nmax")]
    #[serde(rename = "Nmax")]
    pub nmax: u64,
    /// `inf` or a prime.
    #[arg(long, default_value = "inf")]
    pub place: String,
    #[arg(long, value_enum, default_value_t = Orders::All)]
    pub orders: Orders,
    #[arg(long = "C", default_value_t = 1.0)]
    #[serde(rename = "C")]
    pub c: f64,
    #[arg(long, default_value_t = 0.25)]
    pub delta: f64,
    #[arg(long = "A", default_value_t = 1.0)]
    #[serde(rename = "A")]
    pub a: f64,
}

pub fn equidist(args: &EquidistArgs) -> Result<Outcome> {
    let beta = parse_beta(&args.beta)?;
    let place: Place = args.place.parse()?;
    if args.nmin == 0 || args.nmin > args.nmax {
        return Err(Error::Domain("need 1 <= Nmin <= Nmax".into()));
    }
    let orders: Vec<u64> = (args.nmin..=args.nmax)
        .filter(|&n| args.orders == Orders::All || is_prime_u64(n))
        .collect();
    let k = DiscrepancyConstants {
        c: args.c,
        delta: args.delta,
        a: args.a,
    };
    let recs = discrepancy_series(&beta, place, &orders, k)?;
    let pts: Vec<(f64, f64)> = recs.iter().map(|r| (r.orbit_size as f64, r.discrepancy)).collect();
    let slope = fit_loglog_slope(&pts);
    let mut table = Table::new(&[
        "N",
        "size",
        "discrepancy",
        "orbitAverage",
        "integral",
        "boundRhs",
        "withinBound",
        "hypothesisHolds",
    ]);
    for r in &recs {
        table.push(vec![
            r.orbit_n.to_string(),
            r.orbit_size.to_string(),
            r.discrepancy.to_string(),
            r.orbit_average.to_string(),
            r.integral_value.to_string(),
            r.bound_rhs.to_string(),
            r.within_bound.to_string(),
            r.hypothesis_holds.to_string(),
        ]);
    }
    // the rate bound carries sqrt(log |P|) and vanishes on singleton orbits
    let failing = recs
        .iter()
        .filter(|r| r.orbit_size >= 2 && r.hypothesis_holds && !r.within_bound)
        .count();
    let notes = vec![match slope {
        Some(s) => format!("fitted log-log slope: {s}"),
        None => "fitted log-log slope: undefined".into(),
    }];
    Ok(Outcome {
        config: json!({
            "beta": beta.to_string(),
            "Nmin": args.nmin,
            "Nmax": args.nmax,
            "place": place,
            "orders": args.orders,
            "constants": k,
        }),
        results: json!({
            "kappa": log_plus_integral()?.value,
            "slope": slope,
            "records": recs,
        }),
        checks: vec![Check::new("rateBound", failing == 0, failing, 0)],
        table,
        notes,
    })
}

#[derive(Args, Clone, Debug, Serialize)]
pub struct BakerArgs {
    /// Quadratic `poly:c0,c1,c2` with roots on the unit circle; repeatable.
    /// Defaults to the five built-in test points.
    #[arg(long = "point")]
    pub points: Vec<String>,
    #[arg(long = "Nmax", default_value_t = 10_000)]
    #[serde(rename = "Nmax")]
    pub nmax: u64,
    #[arg(long, default_value_t = 0.1)]
    pub eps: f64,
    /// Fixed `C_eps`; the explicit constant is used when absent.
    #[arg(long = "ceps")]
    #[serde(rename = "Ceps")]
    pub c_eps: Option<f64>,
}

pub fn baker(args: &BakerArgs) -> Result<Outcome> {
    let polys = if args.points.is_empty() {
        unit_circle_test_points()
    } else {
        args.points.iter().map(|p| Ok(parse_beta(p)?.minpoly())).collect::<Result<Vec<_>>>()?
    };
    let mut table = Table::new(&["point", "a", "N", "lhs", "lhsError", "rhs", "holds"]);
    let mut scans = Vec::new();
    let mut checks = Vec::new();
    for f in polys {
        let beta = upper_half_root(f)?;
        let scan = corollary_scan(&beta, args.nmax, args.eps, args.c_eps)?;
        for r in &scan.rows {
            table.push(vec![
                scan.beta.clone(),
                r.a.to_string(),
                r.n.to_string(),
                r.lhs.value.to_string(),
                r.lhs.error_bound.to_string(),
                r.rhs.to_string(),
                r.holds.to_string(),
            ]);
        }
        checks.push(Check::new(
            format!("violations:{}", scan.beta),
            scan.violations.is_empty(),
            scan.violations.len(),
            0,
        ));
        checks.push(Check::at_most(
            format!("calibratedBelowExplicit:{}", scan.beta),
            scan.calibrated_c_eps,
            scan.explicit_c_eps,
        ));
        scans.push(scan);
    }
    Ok(Outcome {
        config: to_value(args),
        results: json!({ "scans": scans }),
        checks,
        table,
        notes: vec![],
    })
}

#[derive(Args, Clone, Debug, Serialize)]
pub struct Cor33Args {
    /// Rational `p/q`.
    #[arg(long, allow_hyphen_values = true)]
    pub beta: String,
    #[arg(long)]
    pub p: u64,
    #[arg(long = "Nmax")]
    #[serde(rename = "Nmax")]
    pub nmax: u64,
}

pub fn cor33(args: &Cor33Args) -> Result<Outcome> {
    let beta = parse_rational(&args.beta)?;
    let r = cor33_check(&beta, args.p, args.nmax)?;
    let mut table = Table::new(&["N", "valuation", "count"]);
    for f in &r.flagged {
        table.push(vec![f.orbit_n.to_string(), f.valuation.to_string(), f.count.to_string()]);
    }
    Ok(Outcome {
        config: json!({ "beta": beta.to_string(), "p": args.p, "Nmax": args.nmax }),
        checks: vec![Check::new("atMostOneFlaggedPoint", r.holds, r.flagged_points, 1)],
        results: to_value(&r),
        table,
        notes: vec![],
    })
}

#[derive(Args, Clone, Debug, Serialize)]
pub struct Theorem2Args {
    #[arg(long = "S", default_value = "inf,2,3")]
    #[serde(rename = "S")]
    pub s: String,
    #[arg(long = "Dcap", default_value_t = 2)]
    #[serde(rename = "Dcap")]
    pub d_cap: usize,
    /// Defaults to log 100.
    #[arg(long = "height-cap")]
    #[serde(rename = "heightCap")]
    pub height_cap: Option<f64>,
    #[arg(long = "Nmax", default_value_t = 2000)]
    #[serde(rename = "Nmax")]
    pub nmax: u64,
    #[arg(long, default_value_t = 50)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long = "threshold-c", default_value_t = 1.0)]
    #[serde(rename = "thresholdC")]
    pub threshold_c: f64,
    #[arg(long = "dobrowolski-c", default_value_t = DEFAULT_DOBROWOLSKI_C)]
    #[serde(rename = "dobrowolskiC")]
    pub dobrowolski_c: f64,
}

pub fn theorem2(args: &Theorem2Args) -> Result<Outcome> {
    let s = parse_places(&args.s).map_err(Error::Parse)?;
    if args.trials == 0 {
        return Err(Error::Domain("trials must be >= 1".into()));
    }
    let cfg = Theorem2Config {
        s,
        d_cap: args.d_cap,
        height_cap: args.height_cap.unwrap_or(100f64.ln()),
        nmax: args.nmax,
        trials: args.trials,
        seed: args.seed,
        threshold_c: args.threshold_c,
        dobrowolski_c: args.dobrowolski_c,
    };
    let r = theorem2_experiment(&cfg)?;
    let mut table = Table::new(&[
        "beta",
        "degree",
        "height",
        "sIntegralOrbits",
        "maxOrbitSize",
        "threshold",
        "exceptionalCount",
        "holds",
        "minC",
    ]);
    for b in &r.betas {
        let orders: Vec<String> = b.s_integral_orbits.iter().map(|n| n.to_string()).collect();
        table.push(vec![
            b.beta.clone(),
            b.degree.to_string(),
            b.height.to_string(),
            orders.join(";"),
            b.max_orbit_size.to_string(),
            b.threshold.to_string(),
            b.exceptional_count.to_string(),
            b.holds.to_string(),
            b.min_c.to_string(),
        ]);
    }
    Ok(Outcome {
        config: to_value(&cfg),
        checks: vec![Check::new(
            "exceptionalOrbits",
            r.violations.is_empty(),
            r.max_exceptional,
            r.exceptional_limit,
        )],
        results: to_value(&r),
        table,
        notes: vec![format!("smallest passing c for this window: {}", r.min_c_for_window)],
    })
}
