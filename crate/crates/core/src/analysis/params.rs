use serde::Serialize;

use crate::error::{Error, Result};

/// The two constants of the arc classification: `mu` decides which jobs are
/// imbalanced and `nu` decides when one length is "not much smaller" than
/// another.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AnalysisParams {
    mu: f64,
    nu: f64,
}

impl AnalysisParams {
    pub fn new(mu: f64, nu: f64) -> Result<Self> {
        if !(mu.is_finite() && mu > 1.0) {
            return Err(Error::InvalidParameter(format!(
                "mu must exceed 1, got {mu}"
            )));
        }
        if !(nu > 0.0 && nu < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "nu must lie in (0,1), got {nu}"
            )));
        }
        if mu * nu <= 1.0 {
            return Err(Error::InvalidParameter(format!(
                "mu must exceed 1/nu, got mu={mu}, nu={nu}"
            )));
        }
        if 1.0 + 1.0 / mu > nu + nu * nu {
            return Err(Error::InvalidParameter(format!(
                "need 1 + 1/mu <= nu + nu^2, got mu={mu}, nu={nu}"
            )));
        }
        Ok(AnalysisParams { mu, nu })
    }

    /// The minimising pair `(mu0, nu0)`.
    pub fn corollary() -> Self {
        let (mu, nu, _) = super::optimize::minimize_theorem1()
            .expect("the quintic has a bracketed root on [1, 20]");
        AnalysisParams { mu, nu }
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }

    pub fn bounds(&self) -> RatioBounds {
        RatioBounds::new(*self)
    }
}

/// Every ratio bound that appears in the 1-SORT analysis, evaluated at one
/// parameter pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RatioBounds {
    /// The nine terms of the maximum, in display order.
    pub terms: [f64; 9],
    /// Blue arcs: `1 + 1/(mu nu)`.
    pub blue: f64,
    /// Green arcs: `1 + 1/(nu + nu^2)`.
    pub green: f64,
    /// Arcs split into a special blue and a special green part.
    pub special: f64,
    /// Arcs that are not red.
    pub non_red: f64,
    /// Charging groups `C_k` (first seven terms).
    pub charging: f64,
}

impl RatioBounds {
    pub fn new(params: AnalysisParams) -> Self {
        let (mu, nu) = (params.mu, params.nu);
        let nn = nu + nu * nu;
        let red_max = 2.0 / nu + 2.0 / (mu * nu);
        let blue = 1.0 + 1.0 / (mu * nu);
        let green = 1.0 + 1.0 / nn;
        let special = 1.0 + 1.0 / (nu * (mu + 1.0));
        let terms = [
            (nn + 2.0 + 2.0 / mu) / (nn + 1.0 + 1.0 / mu),
            1.0 + 1.0 / (2.0 + nu),
            (2.0 * red_max + nn + 1.0) / (red_max + nn),
            (2.0 * red_max + nu + 1.0 / (mu + 1.0)) / (red_max + nu),
            (4.0 + 5.0 / mu + nu) / (2.0 + 2.0 / mu + nu),
            green,
            special,
            (2.0 * mu + 1.0) / (mu + 1.0),
            1.0 + nu,
        ];
        let non_red = terms[7].max(terms[8]);
        let charging = terms[..7].iter().copied().fold(f64::NEG_INFINITY, f64::max);
        RatioBounds {
            terms,
            blue,
            green,
            special,
            non_red,
            charging,
        }
    }

    pub fn single_red(&self) -> f64 {
        self.terms[0]
    }

    pub fn vertex_with_red(&self) -> f64 {
        self.terms[1]
    }

    pub fn two_red_green(&self) -> f64 {
        self.terms[2]
    }

    pub fn two_red_special_green(&self) -> f64 {
        self.terms[3]
    }

    pub fn two_red_blue(&self) -> f64 {
        self.terms[4]
    }

    /// The overall competitive-ratio bound (maximum of all nine terms).
    pub fn rho(&self) -> f64 {
        self.charging.max(self.non_red)
    }

    /// Index of the largest term.
    pub fn binding_term(&self) -> usize {
        let mut best = 0;
        for (i, &t) in self.terms.iter().enumerate() {
            if t > self.terms[best] {
                best = i;
            }
        }
        best
    }
}

/// Competitive-ratio bound of 1-SORT for the given parameters.
pub fn theorem1_rho(params: AnalysisParams) -> f64 {
    params.bounds().rho()
}
