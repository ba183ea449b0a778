use std::path::Path;

use hyperseed::certify::{full_certificate, full_certificate_at, Certificate};
use hyperseed::dynamics::{self, assemble, eigenvectors, start_vector, Arithmetic, OrbitTrace};
use hyperseed::exactcircle::{chord, CertComplex, CertScalar, PrecisionPolicy, MIN_BITS};
use hyperseed::induction::{self, ConstructionState, SearchLimits};
use serde::Serialize;

use crate::output::{csv_text, decimal, emit, ensure_writable, read_state, write_atomic, LOSSY_NOTE};
use crate::{
    ConstructArgs, ExportArgs, Failure, Format, OrbitArgs, OrbitOptions, VerifyArgs, What, EXIT_FAILING, EXIT_IO,
    EXIT_PRECISION, EXIT_USAGE,
};

type Outcome = Result<(), Failure>;

fn usage(msg: impl Into<String>) -> Failure {
    Failure::new(EXIT_USAGE, msg)
}

/// `log₂|μₙ − λₙ|` without leaving the float exponent range.
fn log2_gap(state: &ConstructionState) -> f64 {
    let s = state.steps.last().expect("nonempty state");
    let (m, e) = chord(&s.mu_n, &s.lambda_n, 128).lo().to_f64_exp();
    e as f64 + m.log2()
}

fn opt(v: Option<u32>) -> String {
    v.map_or_else(|| "-".into(), |m| m.to_string())
}

fn report_outcome(cert: &Certificate) -> Outcome {
    if cert.passing {
        println!("certificate PASSING ({} entries, state {})", cert.checks.len(), &cert.state_hash[..16]);
        Ok(())
    } else {
        Err(Failure::new(
            EXIT_FAILING,
            format!("certificate not passing; failing checks: {}", cert.failing_names().join(", ")),
        ))
    }
}

pub fn construct(a: ConstructArgs) -> Outcome {
    if a.precision_bits < MIN_BITS || a.precision_bits > a.precision_ceiling {
        return Err(usage(format!(
            "--precision-bits must lie in [{MIN_BITS}, --precision-ceiling = {}]",
            a.precision_ceiling
        )));
    }
    ensure_writable(&a.out)?;
    if let Some(r) = &a.report {
        ensure_writable(r)?;
    }
    let policy = PrecisionPolicy { initial_bits: a.precision_bits, ceiling_bits: a.precision_ceiling };
    println!("{:>4} {:>8} {:>8} {:>22} {:>8}", "n", "m", "m'", "log2|mu_n - lambda_n|", "bits");
    let state = induction::construct(&a.mu1_angle, a.depth as usize, policy, SearchLimits::default(), |s| {
        let st = s.steps.last().expect("nonempty state");
        println!(
            "{:>4} {:>8} {:>8} {:>22.3} {:>8}",
            st.n,
            opt(st.lambda_offset_exp),
            opt(st.mu_offset_exp),
            log2_gap(s),
            s.working_bits
        );
    })?;
    write_atomic(&a.out, state.to_json_pretty().as_bytes())?;
    let cert = full_certificate(&state);
    if let Some(r) = &a.report {
        write_atomic(r, cert.to_json_pretty().as_bytes())?;
    }
    report_outcome(&cert)
}

pub fn verify(a: VerifyArgs) -> Outcome {
    if let Some(r) = &a.report {
        ensure_writable(r)?;
    }
    let state = read_state(&a.input)?;
    let ceiling = a.precision_ceiling.unwrap_or(state.precision_policy.ceiling_bits);
    let mut bits = a.precision_bits.unwrap_or(state.working_bits);
    if bits < MIN_BITS || bits > ceiling {
        return Err(usage(format!("precision {bits} must lie in [{MIN_BITS}, {ceiling}]")));
    }
    let cert = loop {
        let cert = full_certificate_at(&state, bits);
        if cert.passing || !cert.failed_names().is_empty() || !cert.any_undecided() {
            break cert;
        }
        match bits.checked_mul(2).filter(|b| *b <= ceiling) {
            Some(next) => bits = next,
            None => {
                if let Some(r) = &a.report {
                    write_atomic(r, cert.to_json_pretty().as_bytes())?;
                }
                return Err(Failure::new(
                    EXIT_PRECISION,
                    format!("checks still undecided at the {ceiling}-bit ceiling: {}", cert.failing_names().join(", ")),
                ));
            }
        }
    };
    if let Some(r) = &a.report {
        write_atomic(r, cert.to_json_pretty().as_bytes())?;
    }
    report_outcome(&cert)
}

fn read_targets(path: &Path, bits: u32) -> Result<Vec<Vec<CertComplex>>, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::new(EXIT_IO, format!("{}: {e}", path.display())))?;
    let raw: Vec<Vec<[f64; 2]>> = serde_json::from_str(&text)
        .map_err(|e| usage(format!("{}: targets must be [[[re, im], ...], ...]: {e}", path.display())))?;
    Ok(raw
        .into_iter()
        .map(|v| {
            v.into_iter()
                .map(|[re, im]| CertComplex::new(CertScalar::from_f64(re, bits), CertScalar::from_f64(im, bits)))
                .collect()
        })
        .collect())
}

fn run_orbit(state: &ConstructionState, o: &OrbitOptions) -> Result<OrbitTrace, Failure> {
    let dim = o.dim.unwrap_or(state.depth());
    let t = assemble(state, dim)?;
    let bits = state.working_bits;
    let x0 = start_vector(&o.start, state, dim)?;
    let targets = match &o.targets {
        Some(p) => read_targets(p, bits)?,
        None => Vec::new(),
    };
    Ok(dynamics::orbit(&t, &x0, o.steps, &targets, bits, Arithmetic::Midpoint)?)
}

pub fn orbit(a: OrbitArgs) -> Outcome {
    if let Some(p) = &a.out {
        ensure_writable(p)?;
    }
    let state = read_state(&a.input)?;
    let trace = run_orbit(&state, &a.orbit)?;
    emit(a.out.as_deref(), &trace.to_csv())
}

#[derive(Serialize)]
struct EigenvectorView {
    i: usize,
    mu: String,
    u: Vec<CertComplex>,
}

#[derive(Serialize)]
struct TraceView<'a> {
    iter: usize,
    norm: f64,
    dists: &'a [f64],
}

fn json<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("export serializes")
}

pub fn export(a: ExportArgs) -> Outcome {
    if let Some(p) = &a.out {
        ensure_writable(p)?;
    }
    let state = read_state(&a.input)?;
    let text = match (a.what, a.format) {
        (What::State, Format::Json) => state.to_json_pretty(),
        (What::State, Format::Csv) => {
            let rows: Vec<Vec<String>> = state
                .steps
                .iter()
                .map(|s| {
                    vec![
                        s.n.to_string(),
                        s.j_n.to_string(),
                        s.lambda_n.to_string(),
                        s.mu_n.to_string(),
                        opt(s.lambda_offset_exp),
                        opt(s.mu_offset_exp),
                        decimal(&s.a_n),
                        decimal(&s.epsilon_n),
                        decimal(&s.c_n),
                        decimal(&s.b_norm),
                    ]
                })
                .collect();
            csv_text(&["n", "j_n", "lambda_n", "mu_n", "m", "m_prime", "a_n", "epsilon_n", "C_n", "B_n"], &rows)?
        }
        (What::Certificate, f) => {
            let cert = full_certificate(&state);
            if f == Format::Json {
                cert.to_json_pretty()
            } else {
                let rows: Vec<Vec<String>> = cert
                    .checks
                    .iter()
                    .map(|c| vec![c.name.clone(), c.scope.clone(), c.verdict.to_string(), decimal(&c.margin)])
                    .collect();
                csv_text(&["name", "scope", "verdict", "margin"], &rows)?
            }
        }
        (What::Eigenvectors, f) => {
            let dim = a.orbit.dim.unwrap_or(state.depth());
            let us = eigenvectors(&state, dim)?;
            if f == Format::Json {
                let view: Vec<EigenvectorView> = us
                    .into_iter()
                    .enumerate()
                    .map(|(i, u)| EigenvectorView { i: i + 1, mu: state.step(i + 1).mu_n.to_string(), u })
                    .collect();
                json(&view)
            } else {
                let mut rows = Vec::new();
                for (i, u) in us.iter().enumerate() {
                    for (l, z) in u.iter().enumerate() {
                        rows.push(vec![(i + 1).to_string(), (l + 1).to_string(), decimal(&z.re), decimal(&z.im)]);
                    }
                }
                csv_text(&["i", "l", "re", "im"], &rows)?
            }
        }
        (What::Operator, f) => {
            let t = assemble(&state, a.orbit.dim.unwrap_or(state.depth()))?;
            if f == Format::Json {
                t.to_json_pretty()
            } else {
                let rows: Vec<Vec<String>> = (0..t.dim())
                    .map(|l| {
                        vec![
                            (l + 1).to_string(),
                            t.diag[l].to_string(),
                            decimal(&t.a[l].re),
                            decimal(&t.b[l].re),
                            decimal(&t.b[l].im),
                        ]
                    })
                    .collect();
                csv_text(&["l", "lambda", "a", "b_re", "b_im"], &rows)?
            }
        }
        (What::Trace, f) => {
            let trace = run_orbit(&state, &a.orbit)?;
            if f == Format::Csv {
                format!("{LOSSY_NOTE}\n{}", trace.to_csv())
            } else {
                let view: Vec<TraceView> =
                    trace.records.iter().map(|r| TraceView { iter: r.iter, norm: r.norm, dists: &r.dists }).collect();
                json(&view)
            }
        }
    };
    emit(a.out.as_deref(), &text)
}
