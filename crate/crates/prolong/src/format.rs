//! JSON file formats. Rationals are strings `"p/q"` (or `"p"`); tensor
//! indices are 1-based on disk and 0-based in memory.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use prolong_core::flat::{Poly, PolyField};
use prolong_core::linalg::Rational;
use prolong_core::prolong::CohomologyReport;
use prolong_core::young::SubspaceBasis;
use prolong_core::{ExactMatrix, Tensor};

use crate::error::CliError;

pub fn format_rational(r: &Rational) -> String {
    if r.denom() == &1.into() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn parse_rational(s: &str) -> Result<Rational, String> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num = num.parse().map_err(|_| format!("bad numerator in {s:?}"))?;
    let den: BigInt = den.parse().map_err(|_| format!("bad denominator in {s:?}"))?;
    if den.is_zero() {
        return Err(format!("zero denominator in {s:?}"));
    }
    Ok(Rational::new(num, den))
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct MatrixJson {
    pub rows: usize,
    pub cols: usize,
    /// `[row, col, value]`, 0-based, nonzero entries only.
    pub entries: Vec<(usize, usize, String)>,
}

impl MatrixJson {
    pub fn from_matrix(m: &ExactMatrix) -> Self {
        MatrixJson {
            rows: m.rows(),
            cols: m.cols(),
            entries: m.triplets().map(|(r, c, v)| (r, c, format_rational(v))).collect(),
        }
    }

    pub fn to_matrix(&self) -> Result<ExactMatrix, String> {
        let trip = self
            .entries
            .iter()
            .map(|(r, c, v)| Ok((*r, *c, parse_rational(v)?)))
            .collect::<Result<Vec<_>, String>>()?;
        ExactMatrix::from_triplets(self.rows, self.cols, trip).map_err(|e| e.to_string())
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct TensorJson {
    pub n: usize,
    pub arity: usize,
    /// `[[i1, …, ik], value]`, indices 1-based.
    pub entries: Vec<(Vec<usize>, String)>,
}

impl TensorJson {
    pub fn from_tensor(t: &Tensor) -> Self {
        TensorJson {
            n: t.n(),
            arity: t.arity(),
            entries: t.entries().map(|(idx, v)| (one_based(idx), format_rational(v))).collect(),
        }
    }

    pub fn to_tensor(&self) -> Result<Tensor, String> {
        let entries = self
            .entries
            .iter()
            .map(|(idx, v)| Ok((zero_based(idx, self.n)?, parse_rational(v)?)))
            .collect::<Result<Vec<_>, String>>()?;
        Tensor::from_entries(self.n, self.arity, entries).map_err(|e| e.to_string())
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct TermJson {
    pub exp: Vec<u32>,
    pub coef: String,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct FieldEntryJson {
    pub idx: Vec<usize>,
    pub poly: Vec<TermJson>,
}

/// Polynomial tensor field; entries not listed are zero.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct PolyFieldJson {
    pub n: usize,
    pub arity: usize,
    pub entries: Vec<FieldEntryJson>,
}

impl PolyFieldJson {
    pub fn from_field(f: &PolyField) -> Self {
        let entries = f
            .entries()
            .filter(|(_, p)| !p.is_zero())
            .map(|(idx, p)| FieldEntryJson {
                idx: one_based(&idx),
                poly: p.terms().map(|(e, c)| TermJson { exp: e.clone(), coef: format_rational(c) }).collect(),
            })
            .collect();
        PolyFieldJson { n: f.n(), arity: f.arity(), entries }
    }

    pub fn to_field(&self) -> Result<PolyField, String> {
        if self.n == 0 {
            return Err("n must be positive".into());
        }
        let mut f = PolyField::zeros(self.n, self.arity);
        let mut seen = BTreeSet::new();
        for (k, e) in self.entries.iter().enumerate() {
            if e.idx.len() != self.arity {
                return Err(format!(
                    "entry {k}: index {:?} has length {}, expected {}",
                    e.idx,
                    e.idx.len(),
                    self.arity
                ));
            }
            let idx = zero_based(&e.idx, self.n).map_err(|m| format!("entry {k}: {m}"))?;
            if !seen.insert(idx.clone()) {
                return Err(format!("entry {k}: index {:?} listed twice", e.idx));
            }
            let mut p = Poly::zero(self.n);
            for t in &e.poly {
                if t.exp.len() != self.n {
                    return Err(format!(
                        "entry {k}: exponent {:?} has length {}, expected {}",
                        t.exp,
                        t.exp.len(),
                        self.n
                    ));
                }
                p.add_term(t.exp.clone(), parse_rational(&t.coef).map_err(|m| format!("entry {k}: {m}"))?);
            }
            f.set(&idx, p);
        }
        Ok(f)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct BasisJson {
    pub n: usize,
    pub arity: usize,
    pub columns: Vec<Vec<(usize, String)>>,
    pub coord_rows: Vec<usize>,
}

impl BasisJson {
    pub fn from_basis(b: &SubspaceBasis) -> Self {
        BasisJson {
            n: b.n(),
            arity: b.arity(),
            columns: b.columns().iter().map(|c| c.iter().map(|(f, v)| (*f, format_rational(v))).collect()).collect(),
            coord_rows: b.coord_rows().to_vec(),
        }
    }

    pub fn to_basis(&self) -> Result<SubspaceBasis, String> {
        let columns = self
            .columns
            .iter()
            .map(|c| c.iter().map(|(f, v)| Ok((*f, parse_rational(v)?))).collect::<Result<Vec<_>, String>>())
            .collect::<Result<Vec<_>, String>>()?;
        SubspaceBasis::from_parts(self.n, self.arity, columns, self.coord_rows.clone()).map_err(|e| e.to_string())
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct CohomologyEntryJson {
    pub p: usize,
    pub computed: usize,
    pub diagram: Vec<usize>,
    pub predicted: u64,
    #[serde(rename = "match")]
    pub matches: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub dynkin_labels: Option<Vec<i64>>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct CohomologyReportJson {
    pub n: usize,
    pub ell: usize,
    pub space_dims: Vec<usize>,
    #[serde(rename = "H")]
    pub h: Vec<CohomologyEntryJson>,
}

impl CohomologyReportJson {
    pub fn from_report(r: &CohomologyReport) -> Self {
        CohomologyReportJson {
            n: r.n,
            ell: r.ell,
            space_dims: r.space_dims.clone(),
            h: r.entries
                .iter()
                .map(|e| CohomologyEntryJson {
                    p: e.p,
                    computed: e.computed,
                    diagram: e.diagram.clone(),
                    predicted: e.predicted,
                    matches: e.matches(),
                    dynkin_labels: e.dynkin_labels.clone(),
                })
                .collect(),
        }
    }
}

fn one_based(idx: &[usize]) -> Vec<usize> {
    idx.iter().map(|i| i + 1).collect()
}

fn zero_based(idx: &[usize], n: usize) -> Result<Vec<usize>, String> {
    idx.iter().map(|&i| if i >= 1 && i <= n { Ok(i - 1) } else { Err(format!("index {i} outside 1..={n}")) }).collect()
}

/// Parse JSON text, reporting line and column on failure.
pub fn parse_json<T: for<'de> Deserialize<'de>>(source: &str, text: &str) -> Result<T, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::Input {
        source_name: source.to_string(),
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use prolong_core::linalg::{rat, ratio};

    #[test]
    fn rationals_round_trip() {
        for r in [rat(0), rat(-7), ratio(3, 4), ratio(-5, 6)] {
            assert_eq!(parse_rational(&format_rational(&r)).unwrap(), r);
        }
        assert_eq!(parse_rational(" 6/8 ").unwrap(), ratio(3, 4));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn fields_round_trip() {
        let mut f = PolyField::zeros(2, 2);
        f.set(&[0, 0], Poly::var(2, 1).pow(2));
        let j = PolyFieldJson::from_field(&f);
        assert_eq!(j.entries[0].idx, vec![1, 1]);
        assert_eq!(j.to_field().unwrap(), f);
        let text = serde_json::to_string(&j).unwrap();
        let back: PolyFieldJson = serde_json::from_str(&text).unwrap();
        assert_eq!(back, j);
    }

    #[test]
    fn bad_indices_are_reported() {
        let j = PolyFieldJson { n: 2, arity: 1, entries: vec![FieldEntryJson { idx: vec![3], poly: vec![] }] };
        assert!(j.to_field().unwrap_err().contains("outside"));
    }
}
