//! One function per subcommand, each turning parsed arguments into a
//! [`Report`].

use gauss_nmr::{
    classify, count_primes, divisibility_witness, f_scan, factorize, find_ghosts,
    first_order_propagator, gauss_sum, gauss_sum_sampled, phase_residues, propagator_distance,
    sequence_propagator, simulate_signal, suppression_curve, sweep, truncation_bound, Amplitude,
    Error, FScanConfig, MPolicy, Propagation, PulseSequence, SumSpec, SweepConfig, TrialPolicy,
    Verdict,
};
use serde_json::json;

use crate::output::{num, Report, Table};

/// Exit code for a valid run whose check came out negative.
pub const EXIT_NON_FACTOR: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_VANISHING_REFERENCE: i32 = 3;

#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::VanishingReference { .. } => EXIT_VANISHING_REFERENCE,
            _ => EXIT_USAGE,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

type Outcome = Result<Report, Failure>;

fn report(command: &'static str, params: serde_json::Value) -> Report {
    Report {
        command,
        params,
        result: serde_json::Value::Null,
        human: Vec::new(),
        tables: Vec::new(),
        diagnostics: Vec::new(),
        exit_code: 0,
    }
}

fn verdict_of(remainder: u64) -> Verdict {
    if remainder == 0 {
        Verdict::Factor
    } else {
        Verdict::NonFactor
    }
}

pub struct CheckArgs {
    pub n: u64,
    pub l: u64,
    pub m: Option<u64>,
    pub j: u32,
    pub threshold: f64,
    pub sample: Option<(usize, u64)>,
}

pub fn check(args: CheckArgs) -> Outcome {
    let m = args.m.unwrap_or_else(|| truncation_bound(args.n.max(2)));
    let spec = SumSpec::new(args.n, args.l, m, args.j)?;
    let (is_factor, remainder) = divisibility_witness(args.n, args.l)?;
    if !(args.threshold > 0.0 && args.threshold < 1.0) {
        return Err(Error::InvalidThreshold(args.threshold).into());
    }
    let amplitude: Amplitude = match args.sample {
        Some((count, seed)) => gauss_sum_sampled(&spec, count, seed)?,
        None => gauss_sum(&spec),
    };
    let residues = phase_residues(&spec);
    let nonzero = residues.residues.iter().filter(|&&r| r != 0).count();
    let verdict = verdict_of(remainder);
    let magnitude_verdict = classify(&amplitude, args.threshold);

    let mut r = report(
        "check",
        json!({
            "n": args.n, "l": args.l, "m": m, "j": args.j, "threshold": args.threshold,
            "samples": args.sample.map(|s| s.0), "seed": args.sample.map(|s| s.1),
        }),
    );
    if magnitude_verdict != verdict {
        r.diagnostics.push(format!(
            "threshold {} gives {magnitude_verdict} but N mod l = {remainder}",
            num(args.threshold)
        ));
    }
    let preview: Vec<String> = residues
        .residues
        .iter()
        .take(8)
        .map(u64::to_string)
        .collect();
    let ellipsis = if residues.residues.len() > 8 {
        ", ..."
    } else {
        ""
    };
    r.human = vec![
        format!("N: {}", args.n),
        format!("l: {}", args.l),
        format!("M: {m}"),
        format!("j: {}", args.j),
    ];
    if let Some((count, seed)) = args.sample {
        r.human.push(format!("sampled: {count} draws, seed {seed}"));
    }
    r.human.extend([
        format!(
            "amplitude: {} {} {}i",
            num(amplitude.re),
            sign(amplitude.im),
            num(amplitude.im.abs())
        ),
        format!("magnitude: {}", num(amplitude.magnitude())),
        format!("phase: {}", num(amplitude.phase())),
        format!(
            "residues: {} terms, {nonzero} nonzero mod {} [{}{ellipsis}]",
            residues.residues.len(),
            args.l,
            preview.join(", ")
        ),
        format!("remainder: {remainder}"),
        format!("verdict: {verdict}"),
    ]);
    let mut table = Table::new(vec![
        "n",
        "l",
        "m",
        "j",
        "magnitude",
        "phase",
        "remainder",
        "verdict",
    ]);
    table.push(vec![
        args.n.to_string(),
        args.l.to_string(),
        m.to_string(),
        args.j.to_string(),
        num(amplitude.magnitude()),
        num(amplitude.phase()),
        remainder.to_string(),
        verdict.to_string(),
    ]);
    r.tables.push(table);
    r.result = json!({
        "re": amplitude.re, "im": amplitude.im,
        "magnitude": amplitude.magnitude(), "phase": amplitude.phase(),
        "nonzero_residues": nonzero, "remainder": remainder,
        "is_factor": is_factor, "verdict": verdict, "magnitude_verdict": magnitude_verdict,
    });
    r.exit_code = if is_factor { 0 } else { EXIT_NON_FACTOR };
    Ok(r)
}

fn sign(x: f64) -> char {
    if x.is_sign_negative() && x != 0.0 {
        '-'
    } else {
        '+'
    }
}

pub struct SweepArgs {
    pub n: u64,
    pub l_min: u64,
    pub l_max: u64,
    pub primes_only: bool,
    pub m: Option<u64>,
    pub threshold: f64,
}

pub fn sweep_cmd(args: SweepArgs) -> Outcome {
    let config = SweepConfig::new(args.n, args.l_min, args.l_max)?
        .with_trial_policy(if args.primes_only {
            TrialPolicy::PrimesOnly
        } else {
            TrialPolicy::AllIntegers
        })
        .with_m_policy(args.m.map_or(MPolicy::FourthRootCeiling, MPolicy::Fixed))
        .with_threshold(args.threshold)?;
    let m = config.m_policy.resolve(args.n);
    let rows = sweep(&config)?;

    let mut r = report(
        "sweep",
        json!({
            "n": args.n, "l_min": args.l_min, "l_max": args.l_max,
            "primes_only": args.primes_only, "m": m, "threshold": args.threshold,
        }),
    );
    let mut table = Table::new(vec!["l", "magnitude", "phase", "remainder", "verdict"]);
    r.human.push(format!(
        "N = {}, M = {m}, threshold = {}",
        args.n,
        num(args.threshold)
    ));
    r.human.push(format!(
        "{:>8}  {:<18}  {:<18}  {:>10}  verdict",
        "l", "magnitude", "phase", "remainder"
    ));
    for row in &rows {
        table.push(vec![
            row.l.to_string(),
            num(row.magnitude),
            num(row.phase),
            row.remainder_witness.to_string(),
            row.verdict.to_string(),
        ]);
        r.human.push(format!(
            "{:>8}  {:<18}  {:<18}  {:>10}  {}",
            row.l,
            num(row.magnitude),
            num(row.phase),
            row.remainder_witness,
            row.verdict
        ));
        if row.disagrees() {
            r.diagnostics.push(format!(
                "l = {}: threshold gives {} but remainder is {}",
                row.l, row.magnitude_verdict, row.remainder_witness
            ));
        }
    }
    let factors: Vec<u64> = rows
        .iter()
        .filter(|r| r.verdict == Verdict::Factor)
        .map(|r| r.l)
        .collect();
    r.human.push(format!(
        "{} trials, {} factors: {:?}",
        rows.len(),
        factors.len(),
        factors
    ));
    r.tables.push(table);
    r.result = json!({ "rows": rows, "factors": factors });
    Ok(r)
}

pub struct NmrArgs {
    pub n: u64,
    pub l: u64,
    pub theta: f64,
    pub m: Option<u64>,
    pub propagation: Propagation,
    pub compare: bool,
}

pub fn nmr(args: NmrArgs) -> Outcome {
    let m = args.m.unwrap_or_else(|| truncation_bound(args.n.max(2)));
    let spec = SumSpec::quadratic(args.n, args.l, m)?;
    let seq = PulseSequence::for_trial(args.theta, args.n, args.l, m)?;
    let signal = simulate_signal(&args.propagation.propagator(&seq))?;
    let estimate = gauss_nmr::estimate_gauss_with(&seq, args.propagation)?;
    let direct = gauss_sum(&spec);
    let difference = (estimate.re - direct.re).hypot(estimate.im - direct.im);
    let distance = args
        .compare
        .then(|| propagator_distance(&sequence_propagator(&seq), &first_order_propagator(&seq)));

    let mode = match args.propagation {
        Propagation::Exact => "exact",
        Propagation::FirstOrder => "first-order",
    };
    let mut r = report(
        "nmr",
        json!({
            "n": args.n, "l": args.l, "m": m, "theta": args.theta,
            "propagation": mode, "compare": args.compare,
        }),
    );
    let complex = |re: f64, im: f64| format!("{} {} {}i", num(re), sign(im), num(im.abs()));
    r.human = vec![
        format!(
            "N: {}, l: {}, M: {m}, theta: {} rad, propagator: {mode}",
            args.n,
            args.l,
            num(args.theta)
        ),
        format!(
            "signal: {} (magnitude {})",
            complex(signal.re, signal.im),
            num(signal.magnitude())
        ),
        format!("estimate: {}", complex(estimate.re, estimate.im)),
        format!("direct: {}", complex(direct.re, direct.im)),
        format!("difference: {}", num(difference)),
    ];
    if let Some(d) = distance {
        r.human.push(format!(
            "propagator distance (ordered vs combined): {}",
            num(d)
        ));
    }
    let mut header = vec![
        "signal_re",
        "signal_im",
        "estimate_re",
        "estimate_im",
        "direct_re",
        "direct_im",
        "difference",
    ];
    let mut row = vec![
        num(signal.re),
        num(signal.im),
        num(estimate.re),
        num(estimate.im),
        num(direct.re),
        num(direct.im),
        num(difference),
    ];
    if let Some(d) = distance {
        header.push("propagator_distance");
        row.push(num(d));
    }
    let mut table = Table::new(header);
    table.push(row);
    r.tables.push(table);
    r.result = json!({
        "signal": signal, "estimate": estimate, "direct": direct,
        "difference": difference, "propagator_distance": distance,
    });
    Ok(r)
}

pub struct FScanArgs {
    pub n: u64,
    pub f_min: f64,
    pub f_max: f64,
    pub step: f64,
    pub m: Option<u64>,
}

pub fn fscan(args: FScanArgs) -> Outcome {
    let m = args.m.unwrap_or_else(|| truncation_bound(args.n.max(2)));
    let config = FScanConfig::new(args.n, args.f_min, args.f_max, args.step, m)?;
    let scan = f_scan(&config)?;

    let mut r = report(
        "fscan",
        json!({ "n": args.n, "f_min": args.f_min, "f_max": args.f_max, "step": args.step, "m": m }),
    );
    let mut grid = Table::new(vec!["f", "magnitude"]);
    for &(f, mag) in &scan.points {
        grid.push(vec![num(f), num(mag)]);
    }
    let mut peaks = Table::new(vec!["f", "trial", "integer_trial", "divides"]);
    r.human
        .push(format!("{} grid points, M = {m}", scan.points.len()));
    for p in &scan.peaks {
        peaks.push(vec![
            num(p.f),
            num(p.trial),
            (p.integer_trial as u8).to_string(),
            (p.divides as u8).to_string(),
        ]);
        let note = match (p.integer_trial, p.divides) {
            (true, true) => "integer trial, divides N",
            (true, false) => "integer trial, does not divide N",
            _ => "non-integer trial",
        };
        r.human.push(format!(
            "peak f = {} |A| = {} N/f = {} ({note})",
            num(p.f),
            num(p.magnitude),
            num(p.trial)
        ));
    }
    if scan.peaks.is_empty() {
        r.human.push("no peaks".to_string());
    }
    r.tables.push(grid);
    r.tables.push(peaks);
    let points: Vec<_> = scan
        .points
        .iter()
        .map(|&(f, mag)| json!({ "f": f, "magnitude": mag }))
        .collect();
    r.result = json!({ "points": points, "peaks": scan.peaks });
    Ok(r)
}

pub fn ghosts(n: u64, m_small: u64, threshold: f64) -> Outcome {
    let g = find_ghosts(n, m_small, threshold)?;
    let mut r = report(
        "ghosts",
        json!({ "n": n, "m_small": m_small, "threshold": threshold }),
    );
    let opt = |x: Option<f64>| x.map_or_else(|| "n/a".to_string(), num);
    r.human.push(format!(
        "N = {n}: {} ghosts with |A| >= {} at M = {m_small}",
        g.ghosts.len(),
        num(threshold)
    ));
    let mut table = Table::new(vec!["l", "magnitude"]);
    for &(l, mag) in &g.ghosts {
        r.human.push(format!("  l = {l}: {}", num(mag)));
        table.push(vec![l.to_string(), num(mag)]);
    }
    r.human.push(format!(
        "max non-factor |A|: {} at M = {m_small}, {} at M = {}",
        opt(g.max_nonfactor_magnitude_at_small),
        opt(g.max_nonfactor_magnitude_at_suppressed),
        g.m_suppressed
    ));
    let strongest = g.ghosts.iter().copied().max_by(|a, b| a.1.total_cmp(&b.1));
    let mut curve_json = serde_json::Value::Null;
    if let Some((l, _)) = strongest {
        let curve = suppression_curve(n, l, g.m_suppressed)?;
        let text: Vec<String> = curve.iter().map(|&(_, mag)| num(mag)).collect();
        r.human.push(format!(
            "suppression of l = {l} for M = 0..={}: {}",
            g.m_suppressed,
            text.join(" ")
        ));
        curve_json = json!({ "l": l, "magnitudes": curve.iter().map(|c| c.1).collect::<Vec<_>>() });
    }
    r.tables.push(table);
    r.result = json!({ "report": g, "suppression_curve": curve_json });
    Ok(r)
}

pub fn factorize_cmd(n: u64) -> Outcome {
    let factors = factorize(n)?;
    let mut r = report("factorize", json!({ "n": n }));
    r.human.push(
        factors
            .iter()
            .map(u64::to_string)
            .collect::<Vec<_>>()
            .join(" "),
    );
    let mut table = Table::new(vec!["factor"]);
    for f in &factors {
        table.push(vec![f.to_string()]);
    }
    r.tables.push(table);
    r.result = json!({ "factors": factors });
    Ok(r)
}

pub fn primes(x: u64) -> Outcome {
    let count = count_primes(x)?;
    let mut r = report("primes", json!({ "x": x }));
    r.human.push(format!("pi({x}) = {}", count.exact));
    r.human.push(format!("x / ln x = {}", num(count.estimate)));
    let mut table = Table::new(vec!["x", "exact", "estimate"]);
    table.push(vec![
        x.to_string(),
        count.exact.to_string(),
        num(count.estimate),
    ]);
    r.tables.push(table);
    r.result = json!(count);
    Ok(r)
}
