//! Statistical checks of the symmetry claims: homogeneity of the Stiefel
//! factor, conjugation invariance of the positive factor, independence of
//! the two factors, two-sided invariance of Ginibre matrices and the
//! conjugation law of Gaussian symmetric matrices.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matcore::{householder_probe, Matrix, SymmetricMatrix};
use crate::montecarlo::estimator::{CovarianceState, EstimatorState};
use crate::montecarlo::exec::run_chunks;
use crate::montecarlo::report::{z_score, Component, Parameters, Report};
use crate::montecarlo::RunOptions;
use crate::sampling::{
    sample_gauss_symmetric, sample_ginibre, sample_polar, sample_posdef_part, sample_stiefel, RngStream,
};

/// Significance level of the Stiefel angle Kolmogorov–Smirnov test.
pub const KS_ALPHA: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum InvarianceKind {
    #[serde(rename = "left_stiefel")]
    LeftStiefel,
    #[serde(rename = "right_stiefel")]
    RightStiefel,
    #[serde(rename = "conjugation_P", alias = "conjugation_p")]
    ConjugationP,
    #[serde(rename = "independence_OP", alias = "independence_op")]
    IndependenceOP,
    #[serde(rename = "two_sided_gaussian")]
    TwoSidedGaussian,
    /// `VᵀSV` against its exact second moments.
    #[serde(rename = "symmetric_conjugation")]
    SymmetricConjugation,
    /// `VᵀSV` against the identity-covariance pattern `{0, 1}` of `S`
    /// itself. Holds for `V = I` or `k = 1` only.
    #[serde(rename = "symmetric_conjugation_delta")]
    SymmetricConjugationDelta,
    #[serde(rename = "stiefel_angle_ks")]
    StiefelAngleKs,
}

impl InvarianceKind {
    pub const ALL: [InvarianceKind; 8] = [
        InvarianceKind::LeftStiefel,
        InvarianceKind::RightStiefel,
        InvarianceKind::ConjugationP,
        InvarianceKind::IndependenceOP,
        InvarianceKind::TwoSidedGaussian,
        InvarianceKind::SymmetricConjugation,
        InvarianceKind::SymmetricConjugationDelta,
        InvarianceKind::StiefelAngleKs,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            InvarianceKind::LeftStiefel => "left_stiefel",
            InvarianceKind::RightStiefel => "right_stiefel",
            InvarianceKind::ConjugationP => "conjugation_P",
            InvarianceKind::IndependenceOP => "independence_OP",
            InvarianceKind::TwoSidedGaussian => "two_sided_gaussian",
            InvarianceKind::SymmetricConjugation => "symmetric_conjugation",
            InvarianceKind::SymmetricConjugationDelta => "symmetric_conjugation_delta",
            InvarianceKind::StiefelAngleKs => "stiefel_angle_ks",
        }
    }
}

impl fmt::Display for InvarianceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for InvarianceKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let norm = s.replace('-', "_").to_ascii_lowercase();
        Self::ALL
            .into_iter()
            .find(|k| k.as_str().to_ascii_lowercase() == norm)
            .ok_or_else(|| Error::Config(format!("unknown invariance kind `{s}`")))
    }
}

/// The fixed orthogonal matrix applied by the invariance checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Probe {
    /// Householder reflector built from `(1, 2, …, d)`.
    #[default]
    Householder,
    Identity,
}

impl Probe {
    pub fn as_str(self) -> &'static str {
        match self {
            Probe::Householder => "householder",
            Probe::Identity => "identity",
        }
    }

    pub fn matrix(self, dim: usize) -> Matrix {
        match self {
            Probe::Householder => householder_probe(dim),
            Probe::Identity => Matrix::identity(dim),
        }
    }
}

impl FromStr for Probe {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "householder" => Ok(Probe::Householder),
            "identity" => Ok(Probe::Identity),
            other => Err(Error::Config(format!("unknown probe `{other}`"))),
        }
    }
}

/// Exact `E[Q_ij Q_ab]` for `Q = VᵀSV` with `S` from
/// [`sample_gauss_symmetric`](crate::sampling::sample_gauss_symmetric).
pub fn push_forward_second_moment(v: &Matrix, (i, j): (usize, usize), (a, b): (usize, usize)) -> f64 {
    let k = v.rows();
    let mut acc = 0.0;
    for s in 0..k {
        for t in s..k {
            let basis = |p: usize, q: usize| {
                if s == t {
                    v[(s, p)] * v[(s, q)]
                } else {
                    v[(s, p)] * v[(t, q)] + v[(t, p)] * v[(s, q)]
                }
            };
            acc += basis(i, j) * basis(a, b);
        }
    }
    acc
}

/// Determinant of the linear map `S ↦ VᵀSV` in the coordinates
/// `(S_ij)_{i≤j}`. Equals `±1` for orthogonal `V`.
pub fn conjugation_jacobian_det(v: &Matrix) -> Result<f64> {
    let k = v.rows();
    if v.cols() != k {
        return Err(Error::Dimension(format!(
            "conjugating matrix must be square, got {k}x{}",
            v.cols()
        )));
    }
    let m = k * (k + 1) / 2;
    let mut map = Matrix::zeros(m, m);
    let mut col = 0;
    for s in 0..k {
        for t in s..k {
            let mut e = SymmetricMatrix::zeros(k);
            e.set(s, t, 1.0);
            let image = e.conjugate(v)?;
            for (row, &x) in image.upper().iter().enumerate() {
                map[(row, col)] = x;
            }
            col += 1;
        }
    }
    map.det()
}

/// Kolmogorov–Smirnov distance of the sample from `U[0, 1)`. Sorts in place.
pub fn ks_statistic_uniform(values: &mut [f64]) -> f64 {
    values.sort_by(f64::total_cmp);
    let n = values.len() as f64;
    let mut d = 0.0_f64;
    for (i, &u) in values.iter().enumerate() {
        let lo = i as f64 / n;
        let hi = (i + 1) as f64 / n;
        d = d.max(hi - u).max(u - lo);
    }
    d
}

/// Asymptotic one-sample KS critical value `√(−ln(α/2)/2)/√N`.
pub fn ks_critical_value(alpha: f64, samples: u64) -> f64 {
    (-(0.5 * alpha).ln() / 2.0).sqrt() / (samples as f64).sqrt()
}

fn merge_all<T: Clone>(a: Vec<T>, b: Vec<T>, merge: impl Fn(&T, &T) -> T) -> Vec<T> {
    if a.is_empty() {
        return b;
    }
    if b.is_empty() {
        return a;
    }
    a.iter().zip(&b).map(|(x, y)| merge(x, y)).collect()
}

/// Runs `fill` once per sample and accumulates the `m` statistics it writes.
fn battery<F>(opts: &RunOptions, samples: u64, seed: u64, m: usize, fill: F) -> Result<Vec<EstimatorState>>
where
    F: Fn(&mut RngStream, &mut [f64]) -> Result<()> + Sync + Send,
{
    run_chunks(
        opts.exec,
        samples,
        opts.chunk_size,
        |chunk, len| {
            let mut rng = RngStream::new(seed, chunk);
            let mut acc = vec![EstimatorState::new(); m];
            let mut buf = vec![0.0; m];
            for _ in 0..len {
                fill(&mut rng, &mut buf)?;
                for (s, &x) in acc.iter_mut().zip(&buf) {
                    s.update(x);
                }
            }
            Ok(acc)
        },
        |a, b| merge_all(a, b, EstimatorState::merge),
    )
}

fn frame_stats(o: &Matrix, out: &mut [f64]) {
    out[0] = o[(0, 0)];
    out[1] = o[(0, 0)] * o[(0, 0)];
    if out.len() > 2 {
        out[2] = o[(0, 0)] * o[(1, 0)];
    }
}

fn frame_names(n: usize) -> Vec<String> {
    let mut v = vec!["O11".to_string(), "O11^2".to_string()];
    if n >= 2 {
        v.push("O11*O21".into());
    }
    v
}

fn posdef_stats(p: &SymmetricMatrix, out: &mut [f64]) {
    out[0] = p.get(0, 0);
    out[1] = p.get(0, 0).powi(2);
    out[2] = p.trace();
    if out.len() > 3 {
        out[3] = p.get(0, 1).powi(2);
    }
}

fn posdef_names(k: usize) -> Vec<String> {
    let mut v = vec!["P11".to_string(), "P11^2".to_string(), "trP".to_string()];
    if k >= 2 {
        v.push("P12^2".into());
    }
    v
}

/// Gaussian product `Y_ij·Y_ab` (or `Y_ij` alone when the second index is
/// absent) and its analytic mean under a given second-moment function.
type Moment = ((usize, usize), Option<(usize, usize)>);

fn moment_names(moments: &[Moment], sym: &str) -> Vec<String> {
    moments
        .iter()
        .map(|&((i, j), second)| match second {
            None => format!("{sym}{}{}", i + 1, j + 1),
            Some((a, b)) if (a, b) == (i, j) => format!("{sym}{}{}^2", i + 1, j + 1),
            Some((a, b)) => format!("{sym}{}{}*{sym}{}{}", i + 1, j + 1, a + 1, b + 1),
        })
        .collect()
}

fn two_sided_moments(n: usize, k: usize) -> Vec<Moment> {
    let mut m: Vec<Moment> = vec![((0, 0), None), ((0, 0), Some((0, 0)))];
    if k >= 2 {
        m.push(((0, 0), Some((0, 1))));
    }
    if n >= 2 {
        m.push(((0, 0), Some((1, 0))));
    }
    if n >= 2 && k >= 2 {
        m.push(((1, 1), Some((1, 1))));
        m.push(((0, 0), Some((1, 1))));
    }
    m
}

fn symmetric_moments(k: usize) -> Vec<Moment> {
    let mut m: Vec<Moment> = vec![((0, 0), None), ((0, 0), Some((0, 0)))];
    if k >= 2 {
        m.push(((1, 1), Some((1, 1))));
        m.push(((0, 1), Some((0, 1))));
        m.push(((0, 0), Some((1, 1))));
        m.push(((0, 0), Some((0, 1))));
    }
    m
}

fn eval_moments(y: &Matrix, moments: &[Moment], out: &mut [f64]) {
    for (o, &((i, j), second)) in out.iter_mut().zip(moments) {
        *o = match second {
            None => y[(i, j)],
            Some((a, b)) => y[(i, j)] * y[(a, b)],
        };
    }
}

fn delta_reference(&((i, j), second): &Moment) -> f64 {
    match second {
        Some(p) if p == (i, j) => 1.0,
        _ => 0.0,
    }
}

fn check_dims(kind: InvarianceKind, n: usize, k: usize) -> Result<()> {
    match kind {
        InvarianceKind::StiefelAngleKs if (n, k) != (2, 1) => Err(Error::Dimension(format!(
            "stiefel_angle_ks needs (n, k) = (2, 1), got ({n}, {k})"
        ))),
        InvarianceKind::SymmetricConjugation | InvarianceKind::SymmetricConjugationDelta if k == 0 => {
            Err(Error::Dimension("need k >= 1".into()))
        }
        InvarianceKind::SymmetricConjugation | InvarianceKind::SymmetricConjugationDelta => Ok(()),
        _ if k == 0 || n < k => Err(Error::Dimension(format!("need n >= k >= 1, got n={n}, k={k}"))),
        _ => Ok(()),
    }
}

/// Builds a report whose headline is the component with the largest `|z|`.
#[allow(clippy::too_many_arguments)]
fn battery_report(
    params: Parameters,
    names: Vec<String>,
    states: &[EstimatorState],
    refs: &[f64],
    provenance: &str,
    samples: u64,
    seed: u64,
    opts: &RunOptions,
) -> Report {
    let components: Vec<Component> = names
        .into_iter()
        .zip(states)
        .zip(refs)
        .map(|((name, s), &r)| Component {
            name,
            estimate: s.mean,
            standard_error: s.std_error(),
            reference_value: r,
            z_score: Some(z_score(s.mean, r, s.std_error())),
        })
        .collect();
    let worst = components
        .iter()
        .enumerate()
        .max_by(|(ia, a), (ib, b)| {
            let za = a.z_score.unwrap_or(0.0).abs();
            let zb = b.z_score.unwrap_or(0.0).abs();
            // NaN ranks highest; ties keep the first component
            za.total_cmp(&zb).then(ib.cmp(ia))
        })
        .map(|(i, _)| i)
        .unwrap_or(0);
    let head = &components[worst];
    let mut report = Report::compare(
        "invariance",
        params,
        head.estimate,
        head.standard_error,
        head.reference_value,
        provenance,
        samples,
        seed,
        &opts.thresholds,
    );
    // statistical claims are judged on |z| alone; the headline reference is
    // often near zero, where a relative gap says nothing
    report.relative_gap = None;
    report.pass = opts.thresholds.judge(report.z_score.unwrap_or(f64::NAN), None);
    report.components = components;
    report
}

/// Battery of paired differences `s(g·x) − s(x)`. `states` holds the `m`
/// differences followed by the `m` untransformed statistics. Statistics that
/// are invariant sample by sample (such as `tr P`) differ only by rounding,
/// so the standard error is floored at a rounding scale.
fn paired_report(
    params: Parameters,
    names: Vec<String>,
    states: &[EstimatorState],
    samples: u64,
    seed: u64,
    opts: &RunOptions,
) -> Report {
    let m = names.len();
    let (diff, base) = states.split_at(m);
    let floored: Vec<EstimatorState> = diff
        .iter()
        .zip(base)
        .map(|(d, b)| {
            let floor = PAIRED_SE_FLOOR * (1.0 + b.mean.abs());
            let se = d.std_error();
            if se >= floor || d.count < 2 {
                *d
            } else {
                // rescale M2 so that the reported standard error is the floor
                let n = d.count as f64;
                EstimatorState {
                    m2: floor * floor * n * (n - 1.0),
                    ..*d
                }
            }
        })
        .collect();
    battery_report(
        params,
        names,
        &floored,
        &vec![0.0; m],
        "paired_difference",
        samples,
        seed,
        opts,
    )
}

/// Relative rounding scale below which paired differences count as zero.
const PAIRED_SE_FLOOR: f64 = 1e-12;

/// Runs the statistic battery for `kind` and reports the largest `|z|`.
pub fn verify_invariance(
    kind: InvarianceKind,
    n: usize,
    k: usize,
    samples: u64,
    seed: u64,
    probe: Probe,
    opts: &RunOptions,
) -> Result<Report> {
    let started = Instant::now();
    check_dims(kind, n, k)?;
    super::check_samples(samples)?;
    let params = Parameters {
        n: Some(n),
        k: Some(k),
        kind: Some(kind.as_str().to_string()),
        probe: Some(probe.as_str().to_string()),
        ..Default::default()
    };
    let u = probe.matrix(n);
    let v = probe.matrix(k);

    let mut report = match kind {
        InvarianceKind::LeftStiefel | InvarianceKind::RightStiefel => {
            let names = frame_names(n);
            let m = names.len();
            let left = kind == InvarianceKind::LeftStiefel;
            let states = battery(opts, samples, seed, 2 * m, |rng, out| {
                let o = sample_stiefel(n, k, rng)?;
                let moved = if left { o.left_mul(&u)? } else { o.right_mul(&v)? };
                let (diff, base) = out.split_at_mut(m);
                frame_stats(o.as_matrix(), base);
                frame_stats(moved.as_matrix(), diff);
                for (x, b) in diff.iter_mut().zip(base.iter()) {
                    *x -= b;
                }
                Ok(())
            })?;
            paired_report(params, names, &states, samples, seed, opts)
        }
        InvarianceKind::ConjugationP => {
            let names = posdef_names(k);
            let m = names.len();
            let states = battery(opts, samples, seed, 2 * m, |rng, out| {
                let p = sample_posdef_part(n, k, rng)?;
                let q = p.as_symmetric().conjugate(&v)?;
                let (diff, base) = out.split_at_mut(m);
                posdef_stats(p.as_symmetric(), base);
                posdef_stats(&q, diff);
                for (x, b) in diff.iter_mut().zip(base.iter()) {
                    *x -= b;
                }
                Ok(())
            })?;
            paired_report(params, names, &states, samples, seed, opts)
        }
        InvarianceKind::TwoSidedGaussian => {
            let moments = two_sided_moments(n, k);
            let refs: Vec<f64> = moments.iter().map(delta_reference).collect();
            let states = battery(opts, samples, seed, moments.len(), |rng, out| {
                let x = sample_ginibre(n, k, rng);
                let y = u.matmul(&x)?.matmul(&v)?;
                eval_moments(&y, &moments, out);
                Ok(())
            })?;
            let names = moment_names(&moments, "Y");
            battery_report(params, names, &states, &refs, "analytic", samples, seed, opts)
        }
        InvarianceKind::SymmetricConjugation | InvarianceKind::SymmetricConjugationDelta => {
            let moments = symmetric_moments(k);
            let refs: Vec<f64> = if kind == InvarianceKind::SymmetricConjugation {
                moments
                    .iter()
                    .map(|&(first, second)| second.map_or(0.0, |s| push_forward_second_moment(&v, first, s)))
                    .collect()
            } else {
                moments.iter().map(delta_reference).collect()
            };
            let states = battery(opts, samples, seed, moments.len(), |rng, out| {
                let q = sample_gauss_symmetric(k, rng)?.conjugate(&v)?;
                eval_moments(&q.to_full(), &moments, out);
                Ok(())
            })?;
            let names = moment_names(&moments, "Q");
            let provenance = if kind == InvarianceKind::SymmetricConjugation {
                "exact_push_forward"
            } else {
                "identity_covariance"
            };
            let mut r = battery_report(params, names, &states, &refs, provenance, samples, seed, opts);
            let jac = conjugation_jacobian_det(&v)?.abs();
            r.components.push(Component {
                name: "abs_jacobian_det".into(),
                estimate: jac,
                standard_error: 0.0,
                reference_value: 1.0,
                z_score: None,
            });
            if (jac - 1.0).abs() > 1e-12 {
                r.pass = false;
                r.warnings
                    .push(format!("|det| of the conjugation map is {jac}, expected 1"));
            }
            r
        }
        InvarianceKind::IndependenceOP => {
            let names = ["corr(O11,trP)", "corr(O11^2,detP)"];
            let states = run_chunks(
                opts.exec,
                samples,
                opts.chunk_size,
                |chunk, len| {
                    let mut rng = RngStream::new(seed, chunk);
                    let mut acc = vec![CovarianceState::default(); 2];
                    for _ in 0..len {
                        let f = sample_polar(n, k, &mut rng)?;
                        let o11 = f.frame.as_matrix()[(0, 0)];
                        let p = f.posdef.as_symmetric();
                        acc[0].update(o11, p.trace());
                        acc[1].update(o11 * o11, p.to_full().det()?);
                    }
                    Ok(acc)
                },
                |a, b| merge_all(a, b, CovarianceState::merge),
            )?;
            // report correlations with their Fisher-z standard errors
            let components: Vec<Component> = names
                .iter()
                .zip(&states)
                .map(|(name, s)| {
                    let r = s.correlation();
                    let z = s.independence_z();
                    Component {
                        name: name.to_string(),
                        estimate: r,
                        standard_error: 1.0 / ((s.count as f64) - 3.0).sqrt(),
                        reference_value: 0.0,
                        z_score: Some(z),
                    }
                })
                .collect();
            let worst = if components[1].z_score.unwrap().abs() > components[0].z_score.unwrap().abs() {
                1
            } else {
                0
            };
            let head = components[worst].clone();
            let mut r = Report::compare(
                "invariance",
                params,
                head.estimate,
                head.standard_error,
                0.0,
                "independence",
                samples,
                seed,
                &opts.thresholds,
            );
            // the Fisher transform replaces the plain correlation z
            r.z_score = head.z_score;
            r.pass = opts.thresholds.judge(head.z_score.unwrap(), None);
            r.components = components;
            r
        }
        InvarianceKind::StiefelAngleKs => {
            let mut angles = run_chunks(
                opts.exec,
                samples,
                opts.chunk_size,
                |chunk, len| {
                    let mut rng = RngStream::new(seed, chunk);
                    let mut out = Vec::with_capacity(len as usize);
                    for _ in 0..len {
                        let o = sample_stiefel(2, 1, &mut rng)?;
                        let m = o.as_matrix();
                        let mut t = m[(1, 0)].atan2(m[(0, 0)]) / (2.0 * PI);
                        if t < 0.0 {
                            t += 1.0;
                        }
                        out.push(t);
                    }
                    Ok(out)
                },
                |mut a, b| {
                    a.extend(b);
                    a
                },
            )?;
            let d = ks_statistic_uniform(&mut angles);
            let crit = ks_critical_value(KS_ALPHA, samples);
            Report {
                experiment_id: "invariance".into(),
                parameters: params,
                estimate: d,
                standard_error: 0.0,
                reference_value: crit,
                reference_provenance: "ks_critical_value".into(),
                z_score: None,
                relative_gap: None,
                pass: d <= crit,
                sample_count: samples,
                master_seed: seed,
                elapsed_wall_time_s: None,
                components: Vec::new(),
                warnings: Vec::new(),
            }
        }
    };
    opts.stamp(&mut report, started);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcore::householder;

    fn opts() -> RunOptions {
        RunOptions::default()
    }

    #[test]
    fn kind_names_round_trip() {
        for k in InvarianceKind::ALL {
            assert_eq!(k.as_str().parse::<InvarianceKind>().unwrap(), k);
            let json = serde_json::to_string(&k).unwrap();
            assert_eq!(json, format!("\"{}\"", k.as_str()));
        }
        assert_eq!(
            "conjugation-p".parse::<InvarianceKind>().unwrap(),
            InvarianceKind::ConjugationP
        );
    }

    #[test]
    fn identity_probe_gives_zero_z() {
        for kind in [
            InvarianceKind::ConjugationP,
            InvarianceKind::LeftStiefel,
            InvarianceKind::RightStiefel,
        ] {
            let r = verify_invariance(kind, 4, 2, 2000, 1, Probe::Identity, &opts()).unwrap();
            assert_eq!(r.z_score, Some(0.0), "{kind}");
            assert!(r.pass);
        }
    }

    #[test]
    fn batteries_pass_for_householder() {
        for kind in [
            InvarianceKind::LeftStiefel,
            InvarianceKind::RightStiefel,
            InvarianceKind::ConjugationP,
            InvarianceKind::IndependenceOP,
            InvarianceKind::TwoSidedGaussian,
            InvarianceKind::SymmetricConjugation,
        ] {
            let r = verify_invariance(kind, 4, 2, 20_000, 3, Probe::Householder, &opts()).unwrap();
            assert!(r.pass, "{kind}: {r:?}");
        }
    }

    #[test]
    fn identity_covariance_pattern_fails_under_reflection() {
        let r = verify_invariance(
            InvarianceKind::SymmetricConjugationDelta,
            3,
            3,
            50_000,
            2,
            Probe::Householder,
            &opts(),
        )
        .unwrap();
        assert!(!r.pass);
        let ok = verify_invariance(
            InvarianceKind::SymmetricConjugationDelta,
            3,
            3,
            20_000,
            2,
            Probe::Identity,
            &opts(),
        )
        .unwrap();
        assert!(ok.pass, "{ok:?}");
    }

    #[test]
    fn push_forward_moments_for_identity() {
        let v = Matrix::identity(3);
        assert_eq!(push_forward_second_moment(&v, (0, 0), (0, 0)), 1.0);
        assert_eq!(push_forward_second_moment(&v, (0, 1), (0, 1)), 1.0);
        assert_eq!(push_forward_second_moment(&v, (0, 0), (1, 1)), 0.0);
    }

    #[test]
    fn push_forward_diagonal_variance() {
        // Var(Q11) = 2 − Σ_s V_s1⁴
        let v = householder_probe(3);
        let quartic: f64 = (0..3).map(|s| v[(s, 0)].powi(4)).sum();
        assert!((push_forward_second_moment(&v, (0, 0), (0, 0)) - (2.0 - quartic)).abs() < 1e-14);
    }

    #[test]
    fn conjugation_map_is_unimodular() {
        for dim in 1..=5 {
            let d = conjugation_jacobian_det(&householder_probe(dim)).unwrap();
            assert!((d.abs() - 1.0).abs() < 1e-12, "dim {dim}: {d}");
        }
        let v = householder(&[0.3, -1.0, 2.0, 0.5]);
        assert!((conjugation_jacobian_det(&v).unwrap().abs() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn ks_on_the_circle() {
        let r = verify_invariance(
            InvarianceKind::StiefelAngleKs,
            2,
            1,
            20_000,
            4,
            Probe::Householder,
            &opts(),
        )
        .unwrap();
        assert!(r.pass, "{r:?}");
        assert!(verify_invariance(
            InvarianceKind::StiefelAngleKs,
            3,
            1,
            10,
            4,
            Probe::Householder,
            &opts()
        )
        .is_err());
    }

    #[test]
    fn ks_statistic_of_a_grid() {
        let mut v: Vec<f64> = (0..100).map(|i| (i as f64 + 0.5) / 100.0).collect();
        assert!((ks_statistic_uniform(&mut v) - 0.005).abs() < 1e-12);
        let mut skew: Vec<f64> = (0..100).map(|i| 0.5 * i as f64 / 100.0).collect();
        assert!(ks_statistic_uniform(&mut skew) > 0.49);
    }

    #[test]
    fn critical_value_at_one_per_mille() {
        assert!((ks_critical_value(KS_ALPHA, 1) - 1.9495).abs() < 1e-4);
    }
}
