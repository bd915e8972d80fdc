//! JSON wire formats. Rationals travel as `"p/q"` strings (or `"p"` for
//! integers), so serialization is bit-exact and round-trips are identities.
//!
//! The DTO structs here are deliberately dumb: all invariants are enforced
//! when converting into the domain types, never by serde itself.

use serde::{Deserialize, Serialize};

use crate::compatibility::Incompatibility;
use crate::isometry::IsometryDescriptor;
use crate::lifting::LiftedMap;
use crate::pl::PiecewiseLinear;
use crate::rational::{format, parse, Rational};
use crate::set::CompactSet;
use crate::StepFunction;
use crate::{Error, Result};

fn rationals_to_strings(xs: &[Rational]) -> Vec<String> {
    xs.iter().map(format).collect()
}

fn strings_to_rationals(xs: &[String]) -> Result<Vec<Rational>> {
    xs.iter().map(|s| parse(s)).collect()
}

/// `{"components": [["0","1"], ["2","2"]]}`
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CompactSetDto {
    pub components: Vec<(String, String)>,
}

impl From<&CompactSet> for CompactSetDto {
    fn from(k: &CompactSet) -> Self {
        CompactSetDto {
            components: k
                .components()
                .iter()
                .map(|(a, b)| (format(a), format(b)))
                .collect(),
        }
    }
}

impl TryFrom<&CompactSetDto> for CompactSet {
    type Error = Error;

    fn try_from(dto: &CompactSetDto) -> Result<CompactSet> {
        let intervals = dto
            .components
            .iter()
            .map(|(a, b)| Ok((parse(a)?, parse(b)?)))
            .collect::<Result<Vec<_>>>()?;
        CompactSet::new(intervals)
    }
}

/// `{"breakpoints": ["0","1"], "values": ["0","2"]}`
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PiecewiseLinearDto {
    pub breakpoints: Vec<String>,
    pub values: Vec<String>,
}

impl From<&PiecewiseLinear> for PiecewiseLinearDto {
    fn from(pl: &PiecewiseLinear) -> Self {
        PiecewiseLinearDto {
            breakpoints: rationals_to_strings(pl.breakpoints()),
            values: rationals_to_strings(pl.values()),
        }
    }
}

impl TryFrom<&PiecewiseLinearDto> for PiecewiseLinear {
    type Error = Error;

    fn try_from(dto: &PiecewiseLinearDto) -> Result<PiecewiseLinear> {
        PiecewiseLinear::from_breaks_values(
            strings_to_rationals(&dto.breakpoints)?,
            strings_to_rationals(&dto.values)?,
        )
    }
}

/// `{"domain": {...}, "t_breaks": ["0","1/2","1"], "values": ["1","-1"]}`
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StepFunctionDto {
    pub domain: CompactSetDto,
    pub t_breaks: Vec<String>,
    pub values: Vec<String>,
}

impl From<&StepFunction> for StepFunctionDto {
    fn from(f: &StepFunction) -> Self {
        StepFunctionDto {
            domain: f.domain().into(),
            t_breaks: rationals_to_strings(f.t_breaks()),
            values: rationals_to_strings(f.values()),
        }
    }
}

impl TryFrom<&StepFunctionDto> for StepFunction {
    type Error = Error;

    fn try_from(dto: &StepFunctionDto) -> Result<StepFunction> {
        let domain = CompactSet::try_from(&dto.domain)?;
        StepFunction::new(
            &domain,
            strings_to_rationals(&dto.t_breaks)?,
            strings_to_rationals(&dto.values)?,
        )
    }
}

/// `{"sign": 1, "psi": {...}, "source": {...}, "target": {...}}`
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IsometryDescriptorDto {
    pub sign: i8,
    pub psi: PiecewiseLinearDto,
    pub source: CompactSetDto,
    pub target: CompactSetDto,
}

impl From<&IsometryDescriptor> for IsometryDescriptorDto {
    fn from(d: &IsometryDescriptor) -> Self {
        IsometryDescriptorDto {
            sign: d.sign(),
            psi: d.psi().into(),
            source: d.source().into(),
            target: d.target().into(),
        }
    }
}

impl TryFrom<&IsometryDescriptorDto> for IsometryDescriptor {
    type Error = Error;

    fn try_from(dto: &IsometryDescriptorDto) -> Result<IsometryDescriptor> {
        IsometryDescriptor::new(
            dto.sign,
            PiecewiseLinear::try_from(&dto.psi)?,
            CompactSet::try_from(&dto.source)?,
            CompactSet::try_from(&dto.target)?,
        )
    }
}

/// A lifted homeomorphism: interval pieces (one per positive-length source
/// component, in order), isolated-point images, and the exact bi-Lipschitz
/// constants.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LiftedMapDto {
    pub source: CompactSetDto,
    pub target: CompactSetDto,
    pub interval_pieces: Vec<PiecewiseLinearDto>,
    pub point_images: Vec<(String, String)>,
    pub lip_forward: String,
    pub lip_inverse: String,
}

impl From<&LiftedMap> for LiftedMapDto {
    fn from(phi: &LiftedMap) -> Self {
        LiftedMapDto {
            source: phi.source().into(),
            target: phi.target().into(),
            interval_pieces: phi.interval_pieces().map(|p| p.into()).collect(),
            point_images: phi
                .point_images()
                .iter()
                .map(|(y, x)| (format(y), format(x)))
                .collect(),
            lip_forward: format(phi.lip_forward()),
            lip_inverse: format(phi.lip_inverse()),
        }
    }
}

/// A fiber-incompatibility verdict for machine consumption.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IncompatibilityDto {
    pub code: String,
    pub level: String,
    pub detail: String,
}

impl From<&Incompatibility> for IncompatibilityDto {
    fn from(r: &Incompatibility) -> Self {
        IncompatibilityDto {
            code: r.reason.code().to_string(),
            level: format(&r.level),
            detail: r.to_string(),
        }
    }
}

/// Reassembles a lifted map by running the conversion through the original
/// construction inputs; the pieces themselves are not trusted.
pub fn lifted_map_from_parts(
    dto: &LiftedMapDto,
    psi: &PiecewiseLinear,
) -> Result<LiftedMap> {
    let source = CompactSet::try_from(&dto.source)?;
    let target = CompactSet::try_from(&dto.target)?;
    let phi = crate::lifting::lift(&target, &source, psi)?;
    let roundtrip = LiftedMapDto::from(&phi);
    let serialized = serde_json::to_string(&roundtrip)
        .map_err(|e| Error::InternalInvariantViolation(e.to_string()))?;
    let given = serde_json::to_string(dto)
        .map_err(|e| Error::InternalInvariantViolation(e.to_string()))?;
    if serialized != given {
        return Err(Error::InvalidDescriptor(
            "serialized lift does not match its construction inputs".into(),
        ));
    }
    Ok(phi)
}

// convenience string-level helpers used by the CLI

pub fn compact_set_from_json(s: &str) -> Result<CompactSet> {
    let dto: CompactSetDto =
        serde_json::from_str(s).map_err(|e| Error::ParseRational(e.to_string()))?;
    CompactSet::try_from(&dto)
}

pub fn step_function_from_json(s: &str) -> Result<StepFunction> {
    let dto: StepFunctionDto =
        serde_json::from_str(s).map_err(|e| Error::ParseRational(e.to_string()))?;
    StepFunction::try_from(&dto)
}

pub fn piecewise_linear_from_json(s: &str) -> Result<PiecewiseLinear> {
    let dto: PiecewiseLinearDto =
        serde_json::from_str(s).map_err(|e| Error::ParseRational(e.to_string()))?;
    PiecewiseLinear::try_from(&dto)
}

pub fn descriptor_from_json(s: &str) -> Result<IsometryDescriptor> {
    let dto: IsometryDescriptorDto =
        serde_json::from_str(s).map_err(|e| Error::ParseRational(e.to_string()))?;
    IsometryDescriptor::try_from(&dto)
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("DTOs serialize infallibly")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    fn sample_set() -> CompactSet {
        CompactSet::new(vec![
            (int(0), int(1)),
            (int(2), int(2)),
            (rat(5, 2), int(4)),
        ])
        .unwrap()
    }

    #[test]
    fn compact_set_round_trips_bit_exactly() {
        let k = sample_set();
        let json = to_json(&CompactSetDto::from(&k));
        let back = compact_set_from_json(&json).unwrap();
        assert_eq!(back, k);
        // and the JSON itself is stable
        assert_eq!(to_json(&CompactSetDto::from(&back)), json);
    }

    #[test]
    fn compact_set_json_shape() {
        let k = CompactSet::new(vec![(int(0), int(1)), (int(2), int(2))]).unwrap();
        let compact = serde_json::to_string(&CompactSetDto::from(&k)).unwrap();
        assert_eq!(compact, r#"{"components":[["0","1"],["2","2"]]}"#);
    }

    #[test]
    fn step_function_round_trips() {
        let k = sample_set();
        let f = StepFunction::new(
            &k,
            vec![int(0), rat(1, 2), int(1), k.measure()],
            vec![int(1), int(-1), rat(3, 7)],
        )
        .unwrap();
        let json = to_json(&StepFunctionDto::from(&f));
        assert_eq!(step_function_from_json(&json).unwrap(), f);
    }

    #[test]
    fn descriptor_round_trips() {
        let k = sample_set();
        let m = CompactSet::new(vec![
            (int(0), int(2)),
            (int(3), int(3)),
            (int(4), int(7)),
        ])
        .unwrap();
        let psi = PiecewiseLinear::new(vec![
            (int(0), int(0)),
            (int(2), int(1)),
            (int(5), k.measure()),
        ])
        .unwrap();
        let d = IsometryDescriptor::new(-1, psi, k, m).unwrap();
        let json = to_json(&IsometryDescriptorDto::from(&d));
        assert_eq!(descriptor_from_json(&json).unwrap(), d);
    }

    #[test]
    fn invalid_payloads_are_rejected_on_conversion() {
        // parses as JSON but fails the domain invariants
        assert!(compact_set_from_json(r#"{"components":[["1","0"]]}"#).is_err());
        assert!(compact_set_from_json(r#"{"components":[["0","0"]]}"#).is_err());
        assert!(piecewise_linear_from_json(
            r#"{"breakpoints":["0","0"],"values":["0","1"]}"#
        )
        .is_err());
        // malformed rational
        assert!(compact_set_from_json(r#"{"components":[["0","1/0"]]}"#).is_err());
    }

    #[test]
    fn lifted_map_serializes() {
        let m = CompactSet::new(vec![(int(0), int(2)), (int(3), int(4))]).unwrap();
        let k = CompactSet::new(vec![(int(0), int(1)), (int(2), int(3))]).unwrap();
        let psi = PiecewiseLinear::new(vec![
            (int(0), int(0)),
            (int(2), int(1)),
            (int(3), int(2)),
        ])
        .unwrap();
        let phi = crate::lifting::lift(&k, &m, &psi).unwrap();
        let dto = LiftedMapDto::from(&phi);
        assert_eq!(dto.interval_pieces.len(), 2);
        assert_eq!(dto.lip_forward, "1");
        assert_eq!(dto.lip_inverse, "2");
        let back = lifted_map_from_parts(&dto, &psi).unwrap();
        assert_eq!(back, phi);
    }
}
