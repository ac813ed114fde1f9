//! Canonical JSON form of a series.
//!
//! ```json
//! {"n":1,"context":"rational","trunc":{"dp":2,"dt":1,"nq":1},"mode":"torus",
//!  "terms":[[[-1],[1],1,"1"],[[0],[1],0,"1"]]}
//! ```
//!
//! Terms are sorted lexicographically by `(I, J, k)`, so equal series serialize to
//! identical bytes.

use serde::{Deserialize, Serialize};

use crate::scalar::ScalarContext;

use super::{BracketMode, PoissonSeries, SeriesError, SeriesSpace, TermKey, TruncationSpec};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WindowJson {
    pub dp: u32,
    pub dt: u32,
    pub nq: u32,
}

/// Serialized form of a [`PoissonSeries`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeriesJson {
    pub n: usize,
    pub context: ScalarContext,
    pub trunc: WindowJson,
    pub mode: BracketMode,
    pub terms: Vec<(Vec<i32>, Vec<u32>, u32, String)>,
}

impl From<&PoissonSeries> for SeriesJson {
    fn from(s: &PoissonSeries) -> Self {
        let t = s.trunc();
        SeriesJson {
            n: s.n(),
            context: s.context(),
            trunc: WindowJson { dp: t.dp, dt: t.dt, nq: t.nq },
            mode: s.mode(),
            terms: s.terms().map(|(k, c)| (k.q.clone(), k.p.clone(), k.t, c.literal())).collect(),
        }
    }
}

impl SeriesJson {
    pub fn space(&self) -> SeriesSpace {
        SeriesSpace::new(
            self.context,
            TruncationSpec::new(self.n, self.trunc.dp, self.trunc.dt, self.trunc.nq),
            self.mode,
        )
    }

    pub fn to_series(&self) -> Result<PoissonSeries, SeriesError> {
        if let ScalarContext::Quadratic(d) = self.context {
            ScalarContext::quadratic(d)?;
        }
        let space = self.space();
        let mut s = space.zero();
        for (q, p, t, lit) in &self.terms {
            let c = self.context.parse(lit)?;
            s.insert(TermKey::new(q.clone(), p.clone(), *t), c)?;
        }
        Ok(s)
    }
}

impl PoissonSeries {
    pub fn to_json(&self) -> String {
        serde_json::to_string(&SeriesJson::from(self)).expect("series always serializes")
    }

    pub fn from_json(text: &str) -> Result<PoissonSeries, SeriesError> {
        let doc: SeriesJson = serde_json::from_str(text).map_err(|e| SeriesError::Format(e.to_string()))?;
        doc.to_series()
    }
}

impl Serialize for PoissonSeries {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        SeriesJson::from(self).serialize(serializer)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_bytes() {
        let space = SeriesSpace::new(ScalarContext::Rational, TruncationSpec::new(1, 2, 1, 1), BracketMode::Torus);
        let s = space
            .p(0)
            .add(&space.monomial(vec![-1], vec![1], 1, space.context.one()).unwrap())
            .unwrap();
        assert_eq!(
            s.to_json(),
            r#"{"n":1,"context":"rational","trunc":{"dp":2,"dt":1,"nq":1},"mode":"torus","terms":[[[-1],[1],1,"1"],[[0],[1],0,"1"]]}"#
        );
        assert_eq!(PoissonSeries::from_json(&s.to_json()).unwrap(), s);
    }

    #[test]
    fn quadratic_literals() {
        let text = r#"{"n":2,"context":{"quadratic":2},"trunc":{"dp":1,"dt":0,"nq":0},"mode":"torus","terms":[[[0,0],[0,1],0,"[0, 1, 2]"],[[0,0],[1,0],0,"[1, 0, 2]"]]}"#;
        let s = PoissonSeries::from_json(text).unwrap();
        assert_eq!(s.len(), 2);
        assert_eq!(s.to_json(), text);
    }

    #[test]
    fn rejects_out_of_window_and_bad_literals() {
        let outside = r#"{"n":1,"context":"rational","trunc":{"dp":1,"dt":0,"nq":0},"mode":"torus","terms":[[[0],[2],0,"1"]]}"#;
        assert!(matches!(PoissonSeries::from_json(outside), Err(SeriesError::OutOfWindow(_))));
        let bad = r#"{"n":1,"context":"rational","trunc":{"dp":1,"dt":0,"nq":0},"mode":"torus","terms":[[[0],[1],0,"x"]]}"#;
        assert!(PoissonSeries::from_json(bad).is_err());
        let dims = r#"{"n":2,"context":"rational","trunc":{"dp":1,"dt":0,"nq":0},"mode":"torus","terms":[[[0],[1],0,"1"]]}"#;
        assert!(matches!(PoissonSeries::from_json(dims), Err(SeriesError::Dimension { .. })));
    }
}
