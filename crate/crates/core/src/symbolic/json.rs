//! Canonical JSON form of [`MomentPoly`]:
//!
//! ```json
//! {"order": 3, "terms": [{"parts": [2, 1], "n_poly": {"2": "3", "1": "-3"}}]}
//! ```
//!
//! Coefficients are decimal strings so no integer width is lost.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::MomentPoly;
use crate::combinatorics::{NPoly, Partition};
use crate::Error;

#[derive(Serialize, Deserialize)]
struct TermWire {
    parts: Vec<u32>,
    n_poly: BTreeMap<u32, String>,
}

#[derive(Serialize, Deserialize)]
struct PolyWire {
    order: u32,
    terms: Vec<TermWire>,
}

impl From<&MomentPoly> for PolyWire {
    fn from(poly: &MomentPoly) -> Self {
        PolyWire {
            order: poly.order(),
            terms: poly
                .terms()
                .map(|(part, np)| TermWire {
                    parts: part.parts().to_vec(),
                    n_poly: np.terms().map(|(d, c)| (d, c.to_string())).collect(),
                })
                .collect(),
        }
    }
}

impl TryFrom<PolyWire> for MomentPoly {
    type Error = Error;

    fn try_from(wire: PolyWire) -> Result<Self, Error> {
        let mut out = MomentPoly::zero(wire.order);
        for term in wire.terms {
            let part = Partition::new(term.parts)?;
            let mut coeffs = Vec::with_capacity(term.n_poly.len());
            for (d, c) in term.n_poly {
                let c: BigInt = c
                    .parse()
                    .map_err(|_| Error::Parse(format!("`{c}` is not an integer")))?;
                coeffs.push((d, c));
            }
            out.add_term(part, NPoly::from_terms(coeffs))?;
        }
        Ok(out)
    }
}

impl Serialize for MomentPoly {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        PolyWire::from(self).serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for MomentPoly {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let wire = PolyWire::deserialize(deserializer)?;
        MomentPoly::try_from(wire).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::super::{moment_of_sum, Mode};
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn third_moment_json() {
        let e = moment_of_sum(3, Mode::General).unwrap();
        let json = serde_json::to_value(&e).unwrap();
        assert_eq!(
            json,
            serde_json::json!({
                "order": 3,
                "terms": [
                    {"parts": [3], "n_poly": {"1": "1"}},
                    {"parts": [2, 1], "n_poly": {"1": "-3", "2": "3"}},
                    {"parts": [1, 1, 1], "n_poly": {"1": "2", "2": "-3", "3": "1"}}
                ]
            })
        );
    }

    #[test]
    fn rejects_inconsistent_weight() {
        let bad = r#"{"order": 3, "terms": [{"parts": [2], "n_poly": {"1": "1"}}]}"#;
        assert!(serde_json::from_str::<MomentPoly>(bad).is_err());
        let bad = r#"{"order": 2, "terms": [{"parts": [2], "n_poly": {"1": "x"}}]}"#;
        assert!(serde_json::from_str::<MomentPoly>(bad).is_err());
    }

    proptest! {
        #[test]
        fn json_round_trip(p in 1u32..=14, symmetric in any::<bool>()) {
            let mode = if symmetric { Mode::Symmetric } else { Mode::General };
            let e = moment_of_sum(p, mode).unwrap();
            let text = serde_json::to_string(&e).unwrap();
            let back: MomentPoly = serde_json::from_str(&text).unwrap();
            prop_assert_eq!(back, e);
        }
    }
}
