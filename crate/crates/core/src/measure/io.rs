//! JSON spec files mirroring the measure type definitions. Scalars are
//! written as rationals (num/den) and built into truncated p-adic values
//! at a declared precision, so files stay human-writable and diffable.

use super::{MeasureError, ProductMeasureSpec, QGaussianSpec, SecondTypeSpec};
use crate::padic::{Ball, PAdic, DEFAULT_PRECISION};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RationalRepr {
    pub num: i64,
    pub den: i64,
}

impl RationalRepr {
    pub fn build(&self, p: u32, precision: usize) -> Result<PAdic, MeasureError> {
        Ok(PAdic::from_rational(self.num, self.den, p, precision)?)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WeightedBallRepr {
    pub center: RationalRepr,
    pub radius_exp: i64,
    pub weight: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PerturbationRepr {
    pub center: RationalRepr,
    pub radius_exp: i64,
    pub value: f64,
}

/// One JSON document describing a product measure.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum ProductMeasureFile {
    QGaussian {
        p: u32,
        #[serde(default = "default_precision")]
        precision: usize,
        beta: f64,
        gamma: RationalRepr,
        q: f64,
        scaling: Vec<RationalRepr>,
    },
    SecondType {
        p: u32,
        #[serde(default = "default_precision")]
        precision: usize,
        balls: Vec<WeightedBallRepr>,
        #[serde(default)]
        perturbation: Vec<PerturbationRepr>,
        scaling: Vec<RationalRepr>,
    },
}

fn default_precision() -> usize {
    DEFAULT_PRECISION
}

impl ProductMeasureFile {
    pub fn build(&self) -> Result<ProductMeasureSpec, MeasureError> {
        match self {
            ProductMeasureFile::QGaussian {
                p,
                precision,
                beta,
                gamma,
                q,
                scaling,
            } => {
                let gamma = gamma.build(*p, *precision)?;
                let scaling = scaling
                    .iter()
                    .map(|r| r.build(*p, *precision))
                    .collect::<Result<Vec<_>, _>>()?;
                ProductMeasureSpec::q_gaussian(*p, *beta, gamma, *q, scaling)
            }
            ProductMeasureFile::SecondType {
                p,
                precision,
                balls,
                perturbation,
                scaling,
            } => {
                let balls = balls
                    .iter()
                    .map(|b| {
                        Ok((
                            Ball::new(b.center.build(*p, *precision)?, b.radius_exp),
                            b.weight,
                        ))
                    })
                    .collect::<Result<Vec<_>, MeasureError>>()?;
                let perturbation = perturbation
                    .iter()
                    .map(|b| {
                        Ok((
                            Ball::new(b.center.build(*p, *precision)?, b.radius_exp),
                            b.value,
                        ))
                    })
                    .collect::<Result<Vec<_>, MeasureError>>()?;
                let unit = PAdic::one(*p, *precision);
                let template = SecondTypeSpec::new(*p, balls, perturbation, unit)?;
                let scaling = scaling
                    .iter()
                    .map(|r| r.build(*p, *precision))
                    .collect::<Result<Vec<_>, _>>()?;
                ProductMeasureSpec::second_type(&template, scaling)
            }
        }
    }

    pub fn from_json(text: &str) -> Result<Self, MeasureError> {
        serde_json::from_str(text)
            .map_err(|e| MeasureError::InvalidParameter(format!("spec file: {e}")))
    }
}

/// One JSON document describing a single q-Gaussian factor (used by the
/// density and sampling commands).
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QGaussianFile {
    pub p: u32,
    #[serde(default = "default_precision")]
    pub precision: usize,
    pub beta: f64,
    pub gamma: RationalRepr,
    pub q: f64,
}

impl QGaussianFile {
    pub fn build(&self) -> Result<QGaussianSpec, MeasureError> {
        QGaussianSpec::new(
            self.p,
            self.beta,
            self.gamma.build(self.p, self.precision)?,
            self.q,
        )
    }
}

/// One JSON document describing a single one-dimensional measure.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum OneDimMeasureFile {
    QGaussian {
        p: u32,
        #[serde(default = "default_precision")]
        precision: usize,
        beta: f64,
        gamma: RationalRepr,
        q: f64,
    },
    SecondType {
        p: u32,
        #[serde(default = "default_precision")]
        precision: usize,
        balls: Vec<WeightedBallRepr>,
        #[serde(default)]
        perturbation: Vec<PerturbationRepr>,
        /// Scaling element; defaults to 1.
        v: Option<RationalRepr>,
    },
}

impl OneDimMeasureFile {
    pub fn p(&self) -> u32 {
        match self {
            OneDimMeasureFile::QGaussian { p, .. } => *p,
            OneDimMeasureFile::SecondType { p, .. } => *p,
        }
    }

    pub fn build(&self) -> Result<super::OneDimMeasureSpec, MeasureError> {
        match self {
            OneDimMeasureFile::QGaussian {
                p,
                precision,
                beta,
                gamma,
                q,
            } => Ok(super::OneDimMeasureSpec::QGaussian(QGaussianSpec::new(
                *p,
                *beta,
                gamma.build(*p, *precision)?,
                *q,
            )?)),
            OneDimMeasureFile::SecondType {
                p,
                precision,
                balls,
                perturbation,
                v,
            } => {
                let balls = balls
                    .iter()
                    .map(|b| {
                        Ok((
                            Ball::new(b.center.build(*p, *precision)?, b.radius_exp),
                            b.weight,
                        ))
                    })
                    .collect::<Result<Vec<_>, MeasureError>>()?;
                let perturbation = perturbation
                    .iter()
                    .map(|b| {
                        Ok((
                            Ball::new(b.center.build(*p, *precision)?, b.radius_exp),
                            b.value,
                        ))
                    })
                    .collect::<Result<Vec<_>, MeasureError>>()?;
                let v = match v {
                    Some(r) => r.build(*p, *precision)?,
                    None => PAdic::one(*p, *precision),
                };
                Ok(super::OneDimMeasureSpec::SecondType(SecondTypeSpec::new(
                    *p,
                    balls,
                    perturbation,
                    v,
                )?))
            }
        }
    }

    pub fn from_json(text: &str) -> Result<Self, MeasureError> {
        serde_json::from_str(text)
            .map_err(|e| MeasureError::InvalidParameter(format!("measure file: {e}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn qgaussian_product_file_round_trip() {
        let text = r#"{
            "family": "q_gaussian",
            "p": 3,
            "beta": 1.0,
            "gamma": {"num": 0, "den": 1},
            "q": 1.0,
            "scaling": [{"num": 1, "den": 1}, {"num": 1, "den": 1}]
        }"#;
        let file = ProductMeasureFile::from_json(text).unwrap();
        let spec = file.build().unwrap();
        assert_eq!(spec.truncation(), 2);
    }

    #[test]
    fn unknown_fields_rejected() {
        let text = r#"{
            "family": "q_gaussian",
            "p": 3,
            "beta": 1.0,
            "gamma": {"num": 0, "den": 1, "extra": 2},
            "q": 1.0,
            "scaling": []
        }"#;
        assert!(ProductMeasureFile::from_json(text).is_err());
    }

    #[test]
    fn second_type_file_builds() {
        let text = r#"{
            "family": "second_type",
            "p": 3,
            "balls": [
                {"center": {"num": 0, "den": 1}, "radius_exp": 0, "weight": 0.5},
                {"center": {"num": 1, "den": 3}, "radius_exp": 0, "weight": 0.25},
                {"center": {"num": 2, "den": 3}, "radius_exp": 0, "weight": 0.25}
            ],
            "scaling": [{"num": 1, "den": 1}]
        }"#;
        let spec = ProductMeasureFile::from_json(text)
            .unwrap()
            .build()
            .unwrap();
        assert_eq!(spec.truncation(), 1);
    }
}
