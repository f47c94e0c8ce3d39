use crate::error::{Error, Result};

/// Leslie coefficients `mu_1..mu_6` with the derived `lambda_1 = mu_2 - mu_3`,
/// `lambda_2 = mu_5 - mu_6` and viscosity `nu = mu_4 / 2`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LeslieCoefficients {
    pub mu: [f64; 6],
    pub lambda1: f64,
    pub lambda2: f64,
    pub nu: f64,
}

impl LeslieCoefficients {
    /// `mu_1 = 1, mu_2 = -1, mu_3 = 0, mu_4 = 2 nu, mu_5 = 3, mu_6 = 1`.
    pub fn ansatz(nu: f64) -> Result<Self> {
        Self::new([1.0, -1.0, 0.0, 2.0 * nu, 3.0, 1.0])
    }

    pub fn new(mu: [f64; 6]) -> Result<Self> {
        let c = Self {
            mu,
            lambda1: mu[1] - mu[2],
            lambda2: mu[4] - mu[5],
            nu: 0.5 * mu[3],
        };
        c.validate()?;
        Ok(c)
    }

    /// Build from explicitly given `lambda`s, which must match the `mu`s.
    pub fn with_lambdas(mu: [f64; 6], lambda1: f64, lambda2: f64) -> Result<Self> {
        let c = Self::new(mu)?;
        let tol = 1e-12 * (1.0 + lambda1.abs().max(lambda2.abs()));
        if (c.lambda1 - lambda1).abs() > tol {
            return Err(Error::config(format!(
                "lambda1 = {lambda1} but mu2 - mu3 = {}",
                c.lambda1
            )));
        }
        if (c.lambda2 - lambda2).abs() > tol {
            return Err(Error::config(format!(
                "lambda2 = {lambda2} but mu5 - mu6 = {}",
                c.lambda2
            )));
        }
        Ok(c)
    }

    pub fn mu(&self, i: usize) -> f64 {
        self.mu[i - 1]
    }

    pub fn validate(&self) -> Result<()> {
        let [mu1, mu2, mu3, mu4, mu5, mu6] = self.mu;
        let (l1, l2) = (self.lambda1, self.lambda2);
        let all = [mu1, mu2, mu3, mu4, mu5, mu6, l1, l2, self.nu];
        if all.iter().any(|v| !v.is_finite()) {
            return Err(Error::config("Leslie coefficients must be finite"));
        }
        if l1 != mu2 - mu3 || l2 != mu5 - mu6 {
            return Err(Error::config(
                "lambda1 = mu2 - mu3 and lambda2 = mu5 - mu6 are required",
            ));
        }
        if !(l1 < 0.0) {
            return Err(Error::config(format!("lambda1 = {l1} must be negative")));
        }
        if !(mu1 >= 0.0) {
            return Err(Error::config(format!("mu1 = {mu1} must be nonnegative")));
        }
        if !(mu4 > 0.0) {
            return Err(Error::config(format!("mu4 = {mu4} must be positive")));
        }
        if self.nu != 0.5 * mu4 {
            return Err(Error::config("nu must equal mu4 / 2"));
        }
        let s = mu5 + mu6;
        if !(s >= 0.0) {
            return Err(Error::config(format!(
                "mu5 + mu6 = {s} must be nonnegative"
            )));
        }
        let parodi = mu2 + mu3 == mu6 - mu5 && (l2 == 0.0 || l2 * l2 / -l1 < s);
        let relaxed = (l2 - mu2 - mu3).abs() < 2.0 * (-l1).sqrt() * s.sqrt();
        if !(parodi || relaxed) {
            return Err(Error::config(
                "Leslie coefficients violate both the Parodi and the relaxed dissipation condition",
            ));
        }
        Ok(())
    }

    /// True when the coefficients are exactly the ansatz values for their `nu`.
    pub fn is_ansatz(&self) -> bool {
        self.mu == [1.0, -1.0, 0.0, 2.0 * self.nu, 3.0, 1.0]
    }

    /// Diffusivity of the director equation, `-1 / lambda_1`.
    pub fn director_diffusivity(&self) -> f64 {
        -1.0 / self.lambda1
    }
}
