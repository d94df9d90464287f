//! Reidemeister numbers of iterates, the Möbius congruences
//! `sum_{d | n} mu(d) R(phi^{n/d}) = 0 (mod n)`, and the leading
//! coefficients of `exp(sum_n R(phi^n) z^n / n)`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Serialize, Serializer};

use crate::abelian::{reidemeister_number, AbelianEndo, FgAbelianGroup};
use crate::error::{Error, Result};
use crate::group::{twisted_classes, Automorphism, FiniteGroup};
use crate::linalg::{ExtendedCount, JsonInt};

/// The Möbius function; `d` must be positive.
pub fn moebius(d: u64) -> i8 {
    assert!(d >= 1, "moebius is defined on positive integers");
    let mut n = d;
    let mut sign = 1i8;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            n /= p;
            if n.is_multiple_of(p) {
                return 0;
            }
            sign = -sign;
        }
        p += 1;
    }
    if n > 1 {
        sign = -sign;
    }
    sign
}

/// A group with an automorphism whose iterates are counted.
#[derive(Clone, Debug)]
pub enum Source {
    Finite {
        group: FiniteGroup,
        phi: Automorphism,
    },
    Abelian {
        group: FgAbelianGroup,
        psi: AbelianEndo,
    },
}

impl Source {
    pub fn describe(&self) -> String {
        match self {
            Source::Finite { group, phi } => {
                format!("finite group of order {} with map {:?}", group.order(), phi.map())
            }
            Source::Abelian { group, psi } => format!(
                "{group} with F = {}, B = {}, C = {}",
                psi.free_block(),
                psi.mixed_block(),
                psi.torsion_block()
            ),
        }
    }
}

/// `values[i]` is `R(phi^(i+1))`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReidemeisterSequence {
    pub source: String,
    pub values: Vec<ExtendedCount>,
}

pub fn reidemeister_sequence(source: &Source, len: usize) -> Result<ReidemeisterSequence> {
    let mut values = Vec::with_capacity(len);
    match source {
        Source::Finite { group, phi } => {
            let mut power = phi.clone();
            for _ in 0..len {
                let r = twisted_classes(group, &power).class_count();
                values.push(ExtendedCount::finite(r as u64));
                power = phi.compose(&power);
            }
        }
        Source::Abelian { group, psi } => {
            let mut power = psi.clone();
            for _ in 0..len {
                values.push(reidemeister_number(group, &power)?);
                power = psi.compose(group, &power);
            }
        }
    }
    Ok(ReidemeisterSequence {
        source: source.describe(),
        values,
    })
}

fn finite_values(seq: &ReidemeisterSequence) -> Result<Vec<BigInt>> {
    seq.values
        .iter()
        .enumerate()
        .map(|(i, v)| {
            v.as_finite()
                .map(|x| BigInt::from(x.clone()))
                .ok_or(Error::InfiniteEntry(i + 1))
        })
        .collect()
}

fn json_int<S: Serializer>(x: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    JsonInt(x).serialize(s)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CongruenceRecord {
    pub n: u64,
    #[serde(serialize_with = "json_int")]
    pub sum: BigInt,
    #[serde(serialize_with = "json_int")]
    pub residue: BigInt,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CongruenceReport {
    pub source: String,
    pub records: Vec<CongruenceRecord>,
    pub all_pass: bool,
}

impl CongruenceReport {
    /// One row per `n` with columns `n,sum,residue,pass`.
    pub fn to_csv(&self) -> Result<String> {
        let mut writer = csv::Writer::from_writer(Vec::new());
        for record in &self.records {
            writer
                .serialize(record)
                .map_err(|e| Error::Serialization(e.to_string()))?;
        }
        let bytes = writer
            .into_inner()
            .map_err(|e| Error::Serialization(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| Error::Serialization(e.to_string()))
    }
}

/// Evaluates every congruence up to the sequence length. Infinite entries
/// are refused.
pub fn verify_congruences(seq: &ReidemeisterSequence) -> Result<CongruenceReport> {
    let values = finite_values(seq)?;
    let records: Vec<CongruenceRecord> = (1..=values.len() as u64)
        .map(|n| {
            let sum: BigInt = (1..=n)
                .filter(|d| n % d == 0)
                .map(|d| BigInt::from(moebius(d)) * &values[(n / d - 1) as usize])
                .sum();
            let residue = sum.mod_floor(&BigInt::from(n));
            CongruenceRecord {
                n,
                pass: residue.is_zero(),
                sum,
                residue,
            }
        })
        .collect();
    Ok(CongruenceReport {
        source: seq.source.clone(),
        all_pass: records.iter().all(|r| r.pass),
        records,
    })
}

/// `a_0, ..., a_len` of `exp(sum_n R_n z^n / n)`, from
/// `n a_n = sum_{k=1..n} R_k a_{n-k}`.
pub fn zeta_coefficients(seq: &ReidemeisterSequence, len: usize) -> Result<Vec<BigRational>> {
    if len > seq.values.len() {
        return Err(Error::DimensionMismatch {
            expected: len,
            found: seq.values.len(),
        });
    }
    let values = finite_values(&ReidemeisterSequence {
        source: String::new(),
        values: seq.values[..len].to_vec(),
    })?;
    let mut coeffs = vec![BigRational::one()];
    for n in 1..=len {
        let total: BigRational = (1..=n)
            .map(|k| BigRational::from_integer(values[k - 1].clone()) * &coeffs[n - k])
            .sum();
        coeffs.push(total / BigRational::from_integer(BigInt::from(n)));
    }
    Ok(coeffs)
}
