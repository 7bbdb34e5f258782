//! JSON map files: a nilpotent spec plus the nonlinear terms of a map.

use serde::{Deserialize, Serialize, Serializer};

use crate::error::ParseError;
use crate::exact::{format_scalar, parse_scalar, ExactMatrix, Scalar};
use crate::nilpotent::{jordan_matrix, NilpotentSpec};
use crate::poly::{Monomial, VectorPoly};

pub(crate) fn serialize_scalar<S: Serializer>(s: &Scalar, ser: S) -> Result<S::Ok, S::Error> {
    ser.serialize_str(&format_scalar(s))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermRecord {
    pub coeff: String,
    pub exponents: Vec<u32>,
    /// One-based component.
    pub component: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MapRecord {
    pub n: usize,
    pub blocks: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub conjugator: Option<Vec<Vec<String>>>,
    pub terms: Vec<TermRecord>,
}

/// A parsed map file: `x -> n x + nonlinear(x)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MapFile {
    pub spec: NilpotentSpec,
    pub nonlinear: VectorPoly,
}

impl MapFile {
    /// The full map including its linear part.
    pub fn map(&self) -> VectorPoly {
        VectorPoly::linear(&jordan_matrix(&self.spec)).add(&self.nonlinear)
    }

    pub fn from_record(rec: &MapRecord) -> Result<Self, ParseError> {
        let fmt = |m: String| ParseError::Format(m);
        let spec = match &rec.conjugator {
            None => NilpotentSpec::new(&rec.blocks),
            Some(rows) => {
                let dense = rows
                    .iter()
                    .map(|r| r.iter().map(|c| parse_scalar(c)).collect::<Result<Vec<_>, _>>())
                    .collect::<Result<Vec<_>, _>>()?;
                let p = ExactMatrix::from_rows(dense).map_err(|e| fmt(e.to_string()))?;
                NilpotentSpec::with_conjugator(&rec.blocks, p)
            }
        }
        .map_err(|e| fmt(e.to_string()))?;
        if spec.dim() != rec.n {
            return Err(fmt(format!("blocks sum to {} but n = {}", spec.dim(), rec.n)));
        }
        let mut nonlinear = VectorPoly::zero(rec.n);
        for t in &rec.terms {
            if t.exponents.len() != rec.n {
                return Err(fmt(format!("term has {} exponents, expected {}", t.exponents.len(), rec.n)));
            }
            if t.component == 0 || t.component > rec.n {
                return Err(fmt(format!("component {} outside 1..={}", t.component, rec.n)));
            }
            let m = Monomial::new(t.exponents.clone());
            match m.degree() {
                0 => return Err(fmt("constant terms are not allowed".into())),
                1 => return Err(fmt("degree-one terms would perturb the linear part".into())),
                _ => {}
            }
            nonlinear.add_term(m, t.component - 1, parse_scalar(&t.coeff)?);
        }
        Ok(MapFile { spec, nonlinear })
    }

    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let rec: MapRecord = serde_json::from_str(text).map_err(|e| ParseError::Json(e.to_string()))?;
        Self::from_record(&rec)
    }

    /// Record of the nonlinear terms of `map` (its linear part is implied by `spec`).
    pub fn record(spec: &NilpotentSpec, map: &VectorPoly) -> MapRecord {
        let conjugator = spec
            .conjugator()
            .map(|p| p.to_dense().iter().map(|r| r.iter().map(format_scalar).collect()).collect());
        let terms = map
            .nonlinear_part()
            .canonical_terms()
            .into_iter()
            .map(|(m, j, c)| TermRecord { coeff: format_scalar(c), exponents: m.exponents().to_vec(), component: j + 1 })
            .collect();
        MapRecord { n: spec.dim(), blocks: spec.blocks().to_vec(), conjugator, terms }
    }
}
