//! JSON form of a weighted series:
//! `{"trunc_order": N, "coeffs": [{"j":..,"k":..,"l":..,"re":"p/q","im":"p/q"}]}`.

use serde::{Deserialize, Serialize};

use super::scalar::{format_rational, parse_rational};
use super::{GaussianRational, Grading, Mono, RealGraphSeries, Series};
use crate::error::{Error, Result};

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct CoeffJson {
    pub j: u32,
    pub k: u32,
    pub l: u32,
    pub re: String,
    #[serde(default = "zero_string")]
    pub im: String,
}

fn zero_string() -> String {
    "0".into()
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct SeriesJson {
    pub trunc_order: u32,
    pub coeffs: Vec<CoeffJson>,
}

impl SeriesJson {
    pub fn from_series(s: &Series<GaussianRational>) -> Self {
        SeriesJson {
            trunc_order: s.order(),
            coeffs: s
                .terms()
                .map(|(m, c)| CoeffJson {
                    j: m.j,
                    k: m.k,
                    l: m.l,
                    re: format_rational(&c.re),
                    im: format_rational(&c.im),
                })
                .collect(),
        }
    }

    /// Weighted series. Terms above `trunc_order` are rejected, not dropped.
    pub fn to_series(&self) -> Result<Series<GaussianRational>> {
        let mut s = Series::zero(self.trunc_order, Grading::Weight);
        for c in &self.coeffs {
            let m = Mono::new(c.j, c.k, c.l);
            if m.weight() > self.trunc_order {
                return Err(Error::Parse(format!(
                    "monomial {m} has weight {} above trunc_order {}",
                    m.weight(),
                    self.trunc_order
                )));
            }
            let v = GaussianRational::new(parse_rational(&c.re)?, parse_rational(&c.im)?);
            s.add_term(m, &v);
        }
        Ok(s)
    }
}

pub fn series_to_json(s: &Series<GaussianRational>) -> serde_json::Value {
    serde_json::to_value(SeriesJson::from_series(s)).expect("series serialization")
}

pub fn series_from_str(text: &str) -> Result<Series<GaussianRational>> {
    let parsed: SeriesJson = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    parsed.to_series()
}

/// Parses a hypersurface graph and enforces the reality invariant.
pub fn graph_from_str(text: &str) -> Result<RealGraphSeries<GaussianRational>> {
    let s = series_from_str(text)?;
    RealGraphSeries::new(s).map_err(|e| Error::Parse(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrip() {
        let text = r#"{"trunc_order":6,"coeffs":[{"j":1,"k":1,"l":0,"re":"1","im":"0"},
            {"j":4,"k":2,"l":0,"re":"2/20","im":"0"},{"j":2,"k":4,"l":0,"re":"1/10"}]}"#;
        let s = series_from_str(text).unwrap();
        let back = series_to_json(&s);
        assert_eq!(back["coeffs"][1]["re"], "1/10");
        let again = series_from_str(&back.to_string()).unwrap();
        assert_eq!(again, s);
        assert!(graph_from_str(text).is_ok());
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(series_from_str("{"), Err(Error::Parse(_))));
        let over = r#"{"trunc_order":4,"coeffs":[{"j":3,"k":2,"l":0,"re":"1","im":"0"}]}"#;
        assert!(matches!(series_from_str(over), Err(Error::Parse(_))));
        let unreal = r#"{"trunc_order":6,"coeffs":[{"j":2,"k":1,"l":0,"re":"1","im":"0"}]}"#;
        assert!(matches!(graph_from_str(unreal), Err(Error::Parse(_))));
    }
}
