use tempwork::sampler::{count_outcomes, jarzynski_from_counts, moments_from_counts, SamplerConfig};
use tempwork::temporal_bell::{
    chsh_value, classical_chsh_bound, classical_chsh_minimum, three_setting_bell, tsirelson_optimize,
    two_time_correlation, CHSHSettings, TwoTimeSetting, CLASSICAL_CHSH_BOUND, TSIRELSON_BOUND, VIOLATION_SLACK,
};
use tempwork::tpm::{
    backward_joint_distribution_with, crooks_prediction, free_energy_difference, jarzynski_average,
    joint_distribution, moment_closed_form, work_distribution, work_moment, CROOKS_DENOMINATOR_FLOOR,
    MAX_MOMENT_ORDER,
};
use tempwork::work_chsh::{
    classical_work_bounds, exp_work_bell_combination, quantum_work_extrema, settings_optimizer,
    work_bell_combination, work_bell_protocol_sum, WorkBellSettings,
};
use tempwork::{BlochVector, Sign};

use crate::args::{echo_chsh, Common, ConventionArg, EvolutionChoice, Protocol, Quantity, ScanDescriptor, ScanParam};
use crate::document::ResultDocument;
use crate::{CliError, Outcome};

pub const JARZYNSKI_TOL: f64 = 1e-10;
pub const CROOKS_TOL: f64 = 1e-10;
/// Backward probabilities at or below this are reported but not checked.
pub const CROOKS_CHECK_FLOOR: f64 = 1e-12;

const OPTIMAL_AXES_NOTE: &str = "optimal axes: a1=z, a2=x, b1=(z+x)/sqrt2, b2=(z-x)/sqrt2";

fn pair_label(n: Sign, m: Sign) -> String {
    let l = |s: Sign| if s == Sign::Plus { 'p' } else { 'm' };
    format!("{}{}", l(n), l(m))
}

fn check_order(order: u32) -> Result<u32, CliError> {
    if order == 0 || order > MAX_MOMENT_ORDER {
        return Err(CliError::Usage(format!("--order must be in 1..={MAX_MOMENT_ORDER}, got {order}")));
    }
    Ok(order)
}

pub fn jarzynski(c: &Common) -> Result<Outcome, CliError> {
    let p = c.protocol()?;
    let spec = p.spec()?;
    let mut doc = ResultDocument::new("jarzynski");
    p.echo(&mut doc);
    let avg = jarzynski_average(&spec);
    let deviation = (avg - 1.0).abs();
    doc.result("value", avg);
    doc.result("delta_f", free_energy_difference(&spec));
    doc.result("deviation", deviation);
    doc.result("tolerance", JARZYNSKI_TOL);
    let failure = (deviation > JARZYNSKI_TOL).then(|| format!("|<e^(beta(W+dF))> - 1| = {deviation:e} exceeds {JARZYNSKI_TOL:e}"));
    Ok(Outcome { doc, failure })
}

pub fn moments(c: &Common) -> Result<Outcome, CliError> {
    let p = c.protocol()?;
    let spec = p.spec()?;
    let order = check_order(c.order_or(4))?;
    let mut doc = ResultDocument::new("moments");
    p.echo(&mut doc);
    doc.echo("order", order);
    let closed_form = spec.has_equal_spectra() && p.evolution == EvolutionChoice::Quench;
    let mut rows = Vec::new();
    for k in 1..=order {
        let m = work_moment(&spec, k)?;
        doc.result(&format!("moment_{k}"), m);
        rows.push(vec![k as f64, m]);
        if closed_form {
            let cos = p.axis_i.dot(&p.axis_f).clamp(-1.0, 1.0);
            doc.result(&format!("closed_form_{k}"), moment_closed_form(p.energy, p.beta, cos, k)?);
        }
    }
    doc.set_table(&["order", "moment"], rows);
    Ok(doc.into())
}

pub fn work_dist(c: &Common) -> Result<Outcome, CliError> {
    let p = c.protocol()?;
    let spec = p.spec()?;
    let mut doc = ResultDocument::new("work-dist");
    p.echo(&mut doc);
    let joint = joint_distribution(&spec);
    for ((n, m), prob) in joint.entries() {
        doc.result(&format!("p_{}", pair_label(n, m)), prob);
    }
    doc.result("total", joint.total());
    doc.result("delta_f", free_energy_difference(&spec));
    doc.result("mean_work", work_moment(&spec, 1)?);
    let dist = work_distribution(&spec);
    doc.set_table(&["work", "probability"], dist.values().iter().map(|v| vec![v.work, v.probability]).collect());
    Ok(doc.into())
}

pub fn chsh(c: &Common) -> Result<Outcome, CliError> {
    let settings = c.chsh_axes(CHSHSettings::tsirelson)?;
    let state = c.state()?;
    let mut doc = ResultDocument::new("chsh");
    echo_chsh(&mut doc, &settings);
    doc.echo_vector("state", state.bloch());
    let value = chsh_value(&state, &settings);
    doc.result("value", value);
    doc.result("bloch_value", settings.bloch_value());
    doc.result("classical_bound", CLASSICAL_CHSH_BOUND);
    doc.result("tsirelson_bound", TSIRELSON_BOUND);
    doc.flag("violates_classical", value.abs() > CLASSICAL_CHSH_BOUND + VIOLATION_SLACK);
    if c.optimal {
        doc.note(OPTIMAL_AXES_NOTE);
    }
    Ok(doc.into())
}

pub fn bell3(c: &Common) -> Result<Outcome, CliError> {
    let (a, b1, b2) = c.bell3_axes()?;
    let state = c.state()?;
    let mut doc = ResultDocument::new("bell3");
    doc.echo_vector("axis_a1", a.components());
    doc.echo_vector("axis_b1", b1.components());
    doc.echo_vector("axis_b2", b2.components());
    doc.echo_vector("state", state.bloch());
    let corr = |x, y| two_time_correlation(&TwoTimeSetting::new(x, y, state));
    let report = three_setting_bell(&state, a, b1, b2, c.convention.into());
    doc.result("c_a_b1", corr(a, b1));
    doc.result("c_a_b2", corr(a, b2));
    doc.result("c_b1_b2", corr(b1, b2));
    doc.result("lhs", report.lhs);
    doc.result("rhs", report.rhs);
    doc.result("margin", report.lhs - report.rhs);
    doc.flag("violated", report.violated);
    match c.convention {
        ConventionArg::Minus => {
            doc.echo("convention", "minus");
            doc.note("convention minus: 1 - C(b1,b2) >= |C(a,b1) - C(a,b2)|; the commonly quoted plus form 1 + C(b1,b2) is available with --convention plus");
        }
        ConventionArg::Plus => {
            doc.echo("convention", "plus");
            doc.note("convention plus: 1 + C(b1,b2) >= |C(a,b1) - C(a,b2)|");
        }
    }
    Ok(doc.into())
}

fn work_bell_settings(c: &Common, order: u32, energy: f64, beta: f64) -> Result<WorkBellSettings, CliError> {
    let optimal = *WorkBellSettings::optimal(order, energy, beta)?.axes();
    Ok(WorkBellSettings::new(c.chsh_axes(|| optimal)?, energy, beta)?)
}

fn optimal_note(order: u32) -> String {
    if order % 2 == 1 {
        format!("{OPTIMAL_AXES_NOTE} (S = +2sqrt2, odd order)")
    } else {
        format!("{OPTIMAL_AXES_NOTE} with b1, b2 negated (S = -2sqrt2, even order)")
    }
}

pub fn work_bell(c: &Common) -> Result<Outcome, CliError> {
    let order = check_order(c.order_or(1))?;
    let s = work_bell_settings(c, order, c.energy, c.beta)?;
    let mut doc = ResultDocument::new("work-bell");
    doc.echo_number("energy", c.energy);
    doc.echo_number("beta", c.beta);
    doc.echo("order", order);
    echo_chsh(&mut doc, s.axes());
    let combo = work_bell_combination(&s, order)?;
    let (lo, hi) = classical_work_bounds(c.energy, c.beta, order)?;
    let (qlo, qhi) = quantum_work_extrema(c.energy, c.beta, order)?;
    doc.result("value", combo.value);
    doc.result("protocol_sum", work_bell_protocol_sum(&s, order)?);
    doc.result("chsh_bloch_term", combo.chsh_bloch_term);
    doc.result("classical_lower", lo);
    doc.result("classical_upper", hi);
    doc.result("quantum_lower", qlo);
    doc.result("quantum_upper", qhi);
    doc.result("exp_work_bell", exp_work_bell_combination(&s).combination);
    let slack = 1e-12 * hi.abs().max(1.0);
    doc.flag("outside_classical", combo.value < lo - slack || combo.value > hi + slack);
    if c.optimal {
        doc.note(optimal_note(order));
    }
    Ok(doc.into())
}

pub fn classical_bounds(c: &Common) -> Result<Outcome, CliError> {
    let order = check_order(c.order_or(1))?;
    let mut doc = ResultDocument::new("classical-bounds");
    doc.echo_number("energy", c.energy);
    doc.echo_number("beta", c.beta);
    doc.echo("order", order);
    let (lo, hi) = classical_work_bounds(c.energy, c.beta, order)?;
    let (qlo, qhi) = quantum_work_extrema(c.energy, c.beta, order)?;
    doc.result("lower", lo);
    doc.result("upper", hi);
    doc.result("quantum_lower", qlo);
    doc.result("quantum_upper", qhi);
    doc.result("chsh_classical_bound", classical_chsh_bound().0);
    doc.result("chsh_classical_minimum", classical_chsh_minimum());
    doc.result("tsirelson_bound", TSIRELSON_BOUND);
    Ok(doc.into())
}

pub fn optimize(c: &Common) -> Result<Outcome, CliError> {
    let quantity = c.quantity.unwrap_or(Quantity::Chsh);
    let mut doc = ResultDocument::new("optimize");
    doc.echo("quantity", quantity.name());
    doc.echo("restarts", c.restarts as u64);
    doc.echo("seed", c.seed);
    let (settings, value, target) = match quantity {
        Quantity::Chsh => {
            let (s, v) = tsirelson_optimize(c.restarts, c.seed)?;
            (s, v, TSIRELSON_BOUND)
        }
        Quantity::WorkBell => {
            let order = check_order(c.order_or(1))?;
            doc.echo_number("energy", c.energy);
            doc.echo_number("beta", c.beta);
            doc.echo("order", order);
            let (s, v) = settings_optimizer(c.energy, c.beta, order, c.restarts, c.seed)?;
            (*s.axes(), v, quantum_work_extrema(c.energy, c.beta, order)?.1)
        }
        other => {
            return Err(CliError::Usage(format!("optimize supports --quantity chsh or work-bell, not {}", other.name())))
        }
    };
    doc.result("value", value);
    doc.result("target", target);
    doc.result("gap", target - value);
    for (name, v) in [("a1", settings.a1), ("a2", settings.a2), ("b1", settings.b1), ("b2", settings.b2)] {
        let [x, y, z] = v.components();
        doc.result(&format!("{name}_x"), x);
        doc.result(&format!("{name}_y"), y);
        doc.result(&format!("{name}_z"), z);
    }
    Ok(doc.into())
}

pub fn crooks(c: &Common) -> Result<Outcome, CliError> {
    let p = c.protocol()?;
    let spec = p.spec()?;
    let mut doc = ResultDocument::new("crooks");
    p.echo(&mut doc);
    doc.echo("backward", match c.backward {
        crate::args::BackwardArg::Exact => "exact",
        crate::args::BackwardArg::InitialGenerated => "initial-generated",
    });
    let forward = joint_distribution(&spec);
    let backward = backward_joint_distribution_with(&spec, c.backward.into())?;
    let mut rows = Vec::new();
    let mut worst = 0.0_f64;
    let mut checked = 0u32;
    for n in Sign::ALL {
        for m in Sign::ALL {
            let label = pair_label(n, m);
            let pf = forward.get(n, m);
            let pb = backward.get(m, n);
            if pb <= CROOKS_DENOMINATOR_FLOOR {
                doc.note(format!("ratio {label} undefined: backward probability {pb:e}"));
                continue;
            }
            let ratio = pf / pb;
            let prediction = crooks_prediction(&spec, n, m);
            doc.result(&format!("ratio_{label}"), ratio);
            doc.result(&format!("prediction_{label}"), prediction);
            rows.push(vec![n.value(), m.value(), spec.work(n, m), pf, pb, ratio, prediction]);
            if pb > CROOKS_CHECK_FLOOR {
                worst = worst.max((ratio - prediction).abs() / prediction.max(1.0));
                checked += 1;
            }
        }
    }
    doc.result("max_deviation", worst);
    doc.result("checked_pairs", checked as f64);
    doc.result("tolerance", CROOKS_TOL);
    doc.set_table(&["n", "m", "work", "p_forward", "p_backward", "ratio", "prediction"], rows);
    let failure = (worst > CROOKS_TOL).then(|| format!("Crooks deviation {worst:e} exceeds {CROOKS_TOL:e}"));
    Ok(Outcome { doc, failure })
}

pub fn sample(c: &Common) -> Result<Outcome, CliError> {
    let p = c.protocol()?;
    let spec = p.spec()?;
    let order = check_order(c.order_or(2))?;
    let cfg = SamplerConfig::new(c.seed, c.samples, c.workers)?;
    let mut doc = ResultDocument::new("sample");
    p.echo(&mut doc);
    doc.echo("order", order);
    doc.echo("samples", c.samples);
    doc.echo("seed", c.seed);
    doc.echo("workers", c.workers as u64);
    let exact: Vec<f64> = (1..=order).map(|k| work_moment(&spec, k)).collect::<Result<_, _>>()?;
    let counts = count_outcomes(&spec, &cfg);
    for (i, (n, m)) in [(Sign::Plus, Sign::Plus), (Sign::Plus, Sign::Minus), (Sign::Minus, Sign::Plus), (Sign::Minus, Sign::Minus)]
        .into_iter()
        .enumerate()
    {
        doc.result(&format!("count_{}", pair_label(n, m)), counts.0[i] as f64);
    }
    let jar = jarzynski_from_counts(&spec, &counts);
    doc.result("jarzynski_mean", jar.mean);
    doc.result("jarzynski_std_error", jar.std_error);
    doc.result("jarzynski_exact", jarzynski_average(&spec));
    let orders: Vec<u32> = (1..=order).collect();
    let reports = moments_from_counts(&spec, &counts, &orders);
    let mut rows = Vec::new();
    for (r, (k, ex)) in reports.iter().zip(orders.iter().zip(&exact)) {
        doc.result(&format!("moment_{k}_mean"), r.mean);
        doc.result(&format!("moment_{k}_std_error"), r.std_error);
        doc.result(&format!("moment_{k}_exact"), *ex);
        rows.push(vec![*k as f64, r.mean, r.std_error, *ex]);
    }
    doc.set_table(&["order", "mean", "std_error", "exact"], rows);
    if !jar.std_error_defined {
        doc.note("standard errors are undefined for a single sample and reported as 0");
    }
    Ok(doc.into())
}

fn apply_scan(base: &Protocol, energy_final_given: bool, param: ScanParam, x: f64) -> Result<Protocol, CliError> {
    let mut p = *base;
    match param {
        ScanParam::Beta => p.beta = x,
        ScanParam::Energy => {
            p.energy = x;
            if !energy_final_given {
                p.energy_final = x;
            }
        }
        ScanParam::Time => match p.evolution {
            EvolutionChoice::FinalHt { .. } => p.evolution = EvolutionChoice::FinalHt { time: x },
            _ => return Err(CliError::Usage("scanning time requires --evolution final-ht".into())),
        },
        ScanParam::AngleThetaF => {
            let (_, phi) = p.axis_f.angles();
            p.axis_f = BlochVector::from_angles(x, phi)?;
        }
    }
    Ok(p)
}

pub fn scan(c: &Common) -> Result<Outcome, CliError> {
    let text = c.scan.as_deref().ok_or_else(|| CliError::Usage("scan requires --scan PARAM=START:STOP:STEPS".into()))?;
    let desc = ScanDescriptor::parse(text)?;
    let quantity = c.quantity.unwrap_or(Quantity::Jarzynski);
    let mut doc = ResultDocument::new("scan");
    doc.echo("scan", text);
    doc.echo("quantity", quantity.name());
    let points = desc.points();
    let mut values = Vec::with_capacity(points.len());
    match quantity {
        Quantity::Jarzynski | Quantity::Moment | Quantity::DeltaF => {
            let base = c.protocol()?;
            base.echo(&mut doc);
            let order = check_order(c.order_or(1))?;
            if quantity == Quantity::Moment {
                doc.echo("order", order);
            }
            for &x in &points {
                let spec = apply_scan(&base, c.energy_final.is_some(), desc.param, x)?.spec()?;
                values.push(match quantity {
                    Quantity::Jarzynski => jarzynski_average(&spec),
                    Quantity::Moment => work_moment(&spec, order)?,
                    _ => free_energy_difference(&spec),
                });
            }
        }
        Quantity::WorkBell | Quantity::ExpWorkBell => {
            if matches!(desc.param, ScanParam::Time | ScanParam::AngleThetaF) {
                return Err(CliError::Usage(format!(
                    "{} is evaluated on sudden-quench pairs of the CHSH axes; it cannot scan {}",
                    quantity.name(),
                    desc.param.name()
                )));
            }
            let order = check_order(c.order_or(1))?;
            let base = work_bell_settings(c, order, c.energy, c.beta)?;
            doc.echo_number("energy", c.energy);
            doc.echo_number("beta", c.beta);
            echo_chsh(&mut doc, base.axes());
            if quantity == Quantity::WorkBell {
                doc.echo("order", order);
            }
            if c.optimal {
                doc.note(optimal_note(order));
            }
            for &x in &points {
                let (e, b) = match desc.param {
                    ScanParam::Beta => (c.energy, x),
                    _ => (x, c.beta),
                };
                let s = WorkBellSettings::new(*base.axes(), e, b)?;
                values.push(match quantity {
                    Quantity::WorkBell => work_bell_combination(&s, order)?.value,
                    _ => exp_work_bell_combination(&s).combination,
                });
            }
        }
        Quantity::Chsh => {
            return Err(CliError::Usage(
                "the CHSH value does not depend on beta, energy, time or angle-theta-f; use chsh".into(),
            ))
        }
    }
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    doc.result("steps", desc.steps as f64);
    doc.result("min", min);
    doc.result("max", max);
    doc.result("first", values[0]);
    doc.result("last", *values.last().expect("steps >= 2"));
    let mut failure = None;
    if quantity == Quantity::Jarzynski {
        let worst = values.iter().map(|v| (v - 1.0).abs()).fold(0.0, f64::max);
        doc.result("max_deviation", worst);
        if worst > JARZYNSKI_TOL {
            failure = Some(format!("Jarzynski deviation {worst:e} exceeds {JARZYNSKI_TOL:e}"));
        }
    }
    doc.set_table(&["parameter", "value"], points.into_iter().zip(values).map(|(x, v)| vec![x, v]).collect());
    Ok(Outcome { doc, failure })
}
