use std::f64::consts::{LN_2, PI};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measures::gamma::log_gamma_unchecked;

/// Which closed form to use for the change-of-variables constant and the
/// Gaussian determinant moments.
///
/// `PaperLiteral` uses the alternative prefactors `(πk)^{k(n−k)/2}` with the
/// inverted Gamma ratio for `C_{n,k}` and `(k/2)^{−kr}` for the moments. They
/// disagree with direct computation (`C_{2,1}` should be `π`,
/// `E[Δ₂²]` should be `2`) and are kept so that the disagreement stays
/// visible and testable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub enum Variant {
    #[default]
    #[serde(rename = "corrected")]
    Corrected,
    #[serde(rename = "paper", alias = "paper-literal", alias = "paper_literal")]
    PaperLiteral,
}

impl Variant {
    pub fn as_str(self) -> &'static str {
        match self {
            Variant::Corrected => "corrected",
            Variant::PaperLiteral => "paper",
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "corrected" => Ok(Variant::Corrected),
            "paper" | "paper-literal" | "paper_literal" => Ok(Variant::PaperLiteral),
            other => Err(Error::Config(format!("unknown variant `{other}`"))),
        }
    }
}

pub(crate) fn check_dims(n: usize, k: usize) -> Result<()> {
    if k == 0 || n < k {
        return Err(Error::Dimension(format!("need n >= k >= 1, got n={n}, k={k}")));
    }
    Ok(())
}

/// `log D_{n,k}`: the total mass of the Stiefel manifold `O(n,k)`,
/// `Σ_{j=n−k+1}^{n} [log 2 + (j/2)·log π − log Γ(j/2)]`.
pub fn stiefel_log_volume(n: usize, k: usize) -> Result<f64> {
    check_dims(n, k)?;
    Ok((n - k + 1..=n)
        .map(|j| {
            let h = j as f64 / 2.0;
            LN_2 + h * PI.ln() - log_gamma_unchecked(h)
        })
        .sum())
}

/// `log C_{n,k}`, the constant in front of `|det|^{n−k}`.
pub fn bp_constant_c(n: usize, k: usize, variant: Variant) -> Result<f64> {
    check_dims(n, k)?;
    let (nf, kf) = (n as f64, k as f64);
    let excess = nf - kf;
    let gamma_sum = |sign: f64| -> f64 {
        (1..=k)
            .map(|j| {
                let j = j as f64;
                sign * (log_gamma_unchecked(j / 2.0) - log_gamma_unchecked((excess + j) / 2.0))
            })
            .sum()
    };
    Ok(match variant {
        Variant::Corrected => 0.5 * kf * excess * PI.ln() + gamma_sum(1.0),
        // (πk)^{k(n−k)/2} ∏ Γ((n−k+j)/2)/Γ(j/2)
        Variant::PaperLiteral => 0.5 * kf * excess * (PI * kf).ln() + gamma_sum(-1.0),
    })
}

/// `log E[|Δ_k|^{2r}]` for the determinant `Δ_k` of a `k × k` matrix with
/// i.i.d. standard normal entries. `r` may be any non-negative real.
pub fn gaussian_det_moment(k: usize, r: f64, variant: Variant) -> Result<f64> {
    if k == 0 {
        return Err(Error::Dimension("determinant moment needs k >= 1".into()));
    }
    if !(r >= 0.0) || !r.is_finite() {
        return Err(Error::Domain(format!("moment order r must be >= 0, got {r}")));
    }
    let kf = k as f64;
    let ratio: f64 = (1..=k)
        .map(|j| {
            let h = j as f64 / 2.0;
            log_gamma_unchecked(r + h) - log_gamma_unchecked(h)
        })
        .sum();
    Ok(match variant {
        Variant::Corrected => kf * r * LN_2 + ratio,
        // (k/2)^{−kr} prefactor
        Variant::PaperLiteral => -kf * r * (kf / 2.0).ln() + ratio,
    })
}

/// Log-domain constants for one `(n, k)` pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Constants {
    pub n: usize,
    pub k: usize,
    pub variant: Variant,
    #[serde(rename = "logD")]
    pub log_d: f64,
    #[serde(rename = "logC")]
    pub log_c: f64,
    #[serde(rename = "C", skip_serializing_if = "Option::is_none", default)]
    pub c: Option<f64>,
}

impl Constants {
    pub fn new(n: usize, k: usize, variant: Variant) -> Result<Self> {
        let log_d = stiefel_log_volume(n, k)?;
        let log_c = bp_constant_c(n, k, variant)?;
        // omitted when exp leaves the normal f64 range
        let c = Some(log_c.exp()).filter(|c| c.is_normal());
        Ok(Self {
            n,
            k,
            variant,
            log_d,
            log_c,
            c,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stiefel_volume_small_cases() {
        // O(1,1) = {±1}, S¹ has length 2π, S² has area 4π
        assert!((stiefel_log_volume(1, 1).unwrap() - 2f64.ln()).abs() < 1e-15);
        assert!((stiefel_log_volume(2, 1).unwrap() - (2.0 * PI).ln()).abs() < 1e-14);
        assert!((stiefel_log_volume(3, 1).unwrap() - (4.0 * PI).ln()).abs() < 1e-14);
        // vol O(2) = 2 · 2π (two circles)
        assert!((stiefel_log_volume(2, 2).unwrap() - (4.0 * PI).ln()).abs() < 1e-14);
        assert!(stiefel_log_volume(1, 2).is_err());
        assert!(stiefel_log_volume(3, 0).is_err());
    }

    #[test]
    fn corrected_constant_small_cases() {
        for k in 1..6 {
            assert!(bp_constant_c(k, k, Variant::Corrected).unwrap().abs() < 1e-15);
        }
        assert!((bp_constant_c(2, 1, Variant::Corrected).unwrap() - PI.ln()).abs() < 1e-14);
        assert!((bp_constant_c(3, 1, Variant::Corrected).unwrap() - (2.0 * PI).ln()).abs() < 1e-14);
    }

    #[test]
    fn literal_constant_is_one_for_the_plane() {
        assert!(bp_constant_c(2, 1, Variant::PaperLiteral).unwrap().abs() < 1e-14);
    }

    #[test]
    fn literal_and_corrected_coincide_at_four_two() {
        let a = bp_constant_c(4, 2, Variant::PaperLiteral).unwrap();
        let b = bp_constant_c(4, 2, Variant::Corrected).unwrap();
        assert!((a - b).abs() < 1e-13);
        assert!((b - (2.0 * PI * PI).ln()).abs() < 1e-13);
    }

    #[test]
    fn det_moment_small_cases() {
        assert!(gaussian_det_moment(1, 1.0, Variant::Corrected).unwrap().abs() < 1e-15);
        // E[(ad − bc)²] = E[a²]E[d²] + E[b²]E[c²] = 2
        assert!((gaussian_det_moment(2, 1.0, Variant::Corrected).unwrap() - 2f64.ln()).abs() < 1e-14);
        assert!((gaussian_det_moment(3, 1.0, Variant::Corrected).unwrap() - 6f64.ln()).abs() < 1e-14);
        assert!((gaussian_det_moment(2, 1.0, Variant::PaperLiteral).unwrap() - 0.5f64.ln()).abs() < 1e-14);
        assert_eq!(gaussian_det_moment(4, 0.0, Variant::Corrected).unwrap(), 0.0);
        assert!(gaussian_det_moment(2, -0.5, Variant::Corrected).is_err());
        assert!(gaussian_det_moment(0, 1.0, Variant::Corrected).is_err());
    }

    #[test]
    fn det_square_moment_is_factorial() {
        let mut fact = 1.0;
        for k in 1..=8 {
            fact *= k as f64;
            let m = gaussian_det_moment(k, 1.0, Variant::Corrected).unwrap().exp();
            assert!((m - fact).abs() <= 1e-12 * fact, "k={k}: {m} vs {fact}");
        }
    }

    #[test]
    fn constants_json_omits_overflowing_c() {
        let c = Constants::new(3, 1, Variant::Corrected).unwrap();
        assert!((c.c.unwrap() - 2.0 * PI).abs() < 1e-13);
        let big = Constants::new(400, 200, Variant::Corrected).unwrap();
        assert!(big.c.is_none());
        let json = serde_json::to_value(big).unwrap();
        assert!(json.get("C").is_none());
        assert_eq!(json["variant"], "corrected");
    }

    #[test]
    fn variant_parsing() {
        assert_eq!("paper".parse::<Variant>().unwrap(), Variant::PaperLiteral);
        assert_eq!("paper-literal".parse::<Variant>().unwrap(), Variant::PaperLiteral);
        assert_eq!("corrected".parse::<Variant>().unwrap(), Variant::Corrected);
        assert!("fixed".parse::<Variant>().is_err());
    }
}
