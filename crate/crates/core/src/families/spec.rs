use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::FamilyError;

/// Family names as used on the command line.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FamilyKind {
    AmicablePair,
    Perfect,
    AmicableNumber,
    Dickson,
    Yanney,
    CohenPair,
    Multiamicable,
    AlphaBeta,
    Pm,
    Wpm,
    Gm,
    Wgm,
    Hm,
    Whm,
    Feebly,
    Mp,
}

impl FamilyKind {
    pub const ALL: [FamilyKind; 16] = [
        FamilyKind::AmicablePair,
        FamilyKind::Perfect,
        FamilyKind::AmicableNumber,
        FamilyKind::Dickson,
        FamilyKind::Yanney,
        FamilyKind::CohenPair,
        FamilyKind::Multiamicable,
        FamilyKind::AlphaBeta,
        FamilyKind::Pm,
        FamilyKind::Wpm,
        FamilyKind::Gm,
        FamilyKind::Wgm,
        FamilyKind::Hm,
        FamilyKind::Whm,
        FamilyKind::Feebly,
        FamilyKind::Mp,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FamilyKind::AmicablePair => "amicable-pair",
            FamilyKind::Perfect => "perfect",
            FamilyKind::AmicableNumber => "amicable-number",
            FamilyKind::Dickson => "dickson",
            FamilyKind::Yanney => "yanney",
            FamilyKind::CohenPair => "cohen-pair",
            FamilyKind::Multiamicable => "multiamicable",
            FamilyKind::AlphaBeta => "alpha-beta",
            FamilyKind::Pm => "pm",
            FamilyKind::Wpm => "wpm",
            FamilyKind::Gm => "gm",
            FamilyKind::Wgm => "wgm",
            FamilyKind::Hm => "hm",
            FamilyKind::Whm => "whm",
            FamilyKind::Feebly => "feebly",
            FamilyKind::Mp => "mp",
        }
    }
}

impl fmt::Display for FamilyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FamilyKind {
    type Err = FamilyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        FamilyKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| FamilyError::UnknownFamily(s.to_string()))
    }
}

/// One tuple family together with its parameters.
///
/// Carmichael's multiply amicable pairs are `Multiamicable { alphas: [t, t] }`
/// and Mason's k-tuples are `Multiamicable` with all weights equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum FamilySpec {
    AmicablePair,
    Perfect,
    AmicableNumber,
    Dickson { k: usize },
    Yanney { k: usize },
    CohenPair { alpha: u64, beta: u64 },
    Multiamicable { alphas: Vec<u64> },
    AlphaBeta { alpha: u64, beta: u64 },
    Pm { k: usize, p: u32, q: u64 },
    Wpm { k: usize, p: u32 },
    Gm { k: usize },
    Wgm { k: usize },
    Hm { k: usize, p: u32, q: u64 },
    Whm { k: usize, p: u32 },
    Feebly { k: usize },
    Mp { k: usize, p: u32, q: u64 },
}

/// Raw parameters as they arrive from a command line or fixture.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FamilyParams {
    pub k: Option<usize>,
    pub p: Option<u32>,
    pub q: Option<u64>,
    pub alphas: Option<Vec<u64>>,
}

fn invalid(msg: impl Into<String>) -> FamilyError {
    FamilyError::InvalidParameter(msg.into())
}

impl FamilySpec {
    pub fn kind(&self) -> FamilyKind {
        match self {
            FamilySpec::AmicablePair => FamilyKind::AmicablePair,
            FamilySpec::Perfect => FamilyKind::Perfect,
            FamilySpec::AmicableNumber => FamilyKind::AmicableNumber,
            FamilySpec::Dickson { .. } => FamilyKind::Dickson,
            FamilySpec::Yanney { .. } => FamilyKind::Yanney,
            FamilySpec::CohenPair { .. } => FamilyKind::CohenPair,
            FamilySpec::Multiamicable { .. } => FamilyKind::Multiamicable,
            FamilySpec::AlphaBeta { .. } => FamilyKind::AlphaBeta,
            FamilySpec::Pm { .. } => FamilyKind::Pm,
            FamilySpec::Wpm { .. } => FamilyKind::Wpm,
            FamilySpec::Gm { .. } => FamilyKind::Gm,
            FamilySpec::Wgm { .. } => FamilyKind::Wgm,
            FamilySpec::Hm { .. } => FamilyKind::Hm,
            FamilySpec::Whm { .. } => FamilyKind::Whm,
            FamilySpec::Feebly { .. } => FamilyKind::Feebly,
            FamilySpec::Mp { .. } => FamilyKind::Mp,
        }
    }

    /// Tuple length the family expects.
    pub fn k(&self) -> usize {
        match self {
            FamilySpec::Perfect | FamilySpec::AmicableNumber => 1,
            FamilySpec::AmicablePair | FamilySpec::CohenPair { .. } | FamilySpec::AlphaBeta { .. } => 2,
            FamilySpec::Multiamicable { alphas } => alphas.len(),
            FamilySpec::Dickson { k }
            | FamilySpec::Yanney { k }
            | FamilySpec::Pm { k, .. }
            | FamilySpec::Wpm { k, .. }
            | FamilySpec::Gm { k }
            | FamilySpec::Wgm { k }
            | FamilySpec::Hm { k, .. }
            | FamilySpec::Whm { k, .. }
            | FamilySpec::Feebly { k }
            | FamilySpec::Mp { k, .. } => *k,
        }
    }

    /// Whether every permutation of a member is again a member.
    pub fn is_symmetric(&self) -> bool {
        match self {
            FamilySpec::CohenPair { alpha, beta } | FamilySpec::AlphaBeta { alpha, beta } => alpha == beta,
            FamilySpec::Multiamicable { alphas } => alphas.windows(2).all(|w| w[0] == w[1]),
            _ => true,
        }
    }

    pub fn validate(&self) -> Result<(), FamilyError> {
        let positive = |name: &str, v: u64| {
            if v == 0 {
                Err(invalid(format!("{name} must be at least 1")))
            } else {
                Ok(())
            }
        };
        match self {
            FamilySpec::AmicablePair | FamilySpec::Perfect | FamilySpec::AmicableNumber => Ok(()),
            FamilySpec::Dickson { k } | FamilySpec::Yanney { k } => {
                if *k < 2 {
                    Err(invalid(format!("{} needs k >= 2, got {k}", self.kind())))
                } else {
                    Ok(())
                }
            }
            FamilySpec::CohenPair { alpha, beta } | FamilySpec::AlphaBeta { alpha, beta } => {
                positive("alpha", *alpha)?;
                positive("beta", *beta)
            }
            FamilySpec::Multiamicable { alphas } => {
                if alphas.is_empty() {
                    return Err(invalid("multiamicable needs at least one weight"));
                }
                alphas.iter().try_for_each(|&a| positive("every alpha", a))
            }
            FamilySpec::Gm { k } | FamilySpec::Wgm { k } | FamilySpec::Feebly { k } => {
                positive("k", *k as u64)
            }
            FamilySpec::Wpm { k, p } | FamilySpec::Whm { k, p } => {
                positive("k", *k as u64)?;
                positive("p", *p as u64)
            }
            FamilySpec::Pm { k, p, q } | FamilySpec::Hm { k, p, q } => {
                positive("k", *k as u64)?;
                positive("p", *p as u64)?;
                positive("q", *q)
            }
            FamilySpec::Mp { k, p, q } => {
                positive("k", *k as u64)?;
                if *p < 2 {
                    return Err(invalid(format!("mp needs p >= 2, got {p}")));
                }
                positive("q", *q)
            }
        }
    }

    /// Builds and validates a spec from loose parameters, rejecting any
    /// parameter the family does not take.
    pub fn from_params(kind: FamilyKind, params: &FamilyParams) -> Result<Self, FamilyError> {
        let FamilyParams { k, p, q, alphas } = params.clone();
        let takes = |k_ok: bool, p_ok: bool, q_ok: bool, a_ok: bool| -> Result<(), FamilyError> {
            for (present, ok, name) in [
                (k.is_some(), k_ok, "k"),
                (p.is_some(), p_ok, "p"),
                (q.is_some(), q_ok, "q"),
                (alphas.is_some(), a_ok, "alphas"),
            ] {
                if present && !ok {
                    return Err(invalid(format!("{kind} does not take {name}")));
                }
            }
            Ok(())
        };
        let need_p = || p.ok_or_else(|| invalid(format!("{kind} needs p")));
        let need_q = || q.ok_or_else(|| invalid(format!("{kind} needs q")));
        let need_k = || k.ok_or_else(|| invalid(format!("{kind} needs k")));
        let pair_weights = || -> Result<(u64, u64), FamilyError> {
            match alphas.as_deref() {
                Some([a, b]) => Ok((*a, *b)),
                _ => Err(invalid(format!("{kind} needs exactly two alphas (alpha,beta)"))),
            }
        };
        let spec = match kind {
            FamilyKind::AmicablePair => {
                takes(false, false, false, false)?;
                FamilySpec::AmicablePair
            }
            FamilyKind::Perfect => {
                takes(false, false, false, false)?;
                FamilySpec::Perfect
            }
            FamilyKind::AmicableNumber => {
                takes(false, false, false, false)?;
                FamilySpec::AmicableNumber
            }
            FamilyKind::Dickson => {
                takes(true, false, false, false)?;
                FamilySpec::Dickson { k: need_k()? }
            }
            FamilyKind::Yanney => {
                takes(true, false, false, false)?;
                FamilySpec::Yanney { k: need_k()? }
            }
            FamilyKind::CohenPair => {
                takes(false, false, false, true)?;
                let (alpha, beta) = pair_weights()?;
                FamilySpec::CohenPair { alpha, beta }
            }
            FamilyKind::AlphaBeta => {
                takes(false, false, false, true)?;
                let (alpha, beta) = pair_weights()?;
                FamilySpec::AlphaBeta { alpha, beta }
            }
            FamilyKind::Multiamicable => {
                takes(true, false, false, true)?;
                let alphas = alphas.clone().ok_or_else(|| invalid("multiamicable needs alphas"))?;
                if let Some(k) = k {
                    if k != alphas.len() {
                        return Err(invalid(format!("k = {k} but {} alphas given", alphas.len())));
                    }
                }
                FamilySpec::Multiamicable { alphas }
            }
            FamilyKind::Pm => {
                takes(true, true, true, false)?;
                FamilySpec::Pm { k: need_k()?, p: need_p()?, q: need_q()? }
            }
            FamilyKind::Hm => {
                takes(true, true, true, false)?;
                FamilySpec::Hm { k: need_k()?, p: need_p()?, q: need_q()? }
            }
            FamilyKind::Mp => {
                takes(true, true, true, false)?;
                FamilySpec::Mp { k: need_k()?, p: need_p()?, q: need_q()? }
            }
            FamilyKind::Wpm => {
                takes(true, true, false, false)?;
                FamilySpec::Wpm { k: need_k()?, p: need_p()? }
            }
            FamilyKind::Whm => {
                takes(true, true, false, false)?;
                FamilySpec::Whm { k: need_k()?, p: need_p()? }
            }
            FamilyKind::Gm => {
                takes(true, false, false, false)?;
                FamilySpec::Gm { k: need_k()? }
            }
            FamilyKind::Wgm => {
                takes(true, false, false, false)?;
                FamilySpec::Wgm { k: need_k()? }
            }
            FamilyKind::Feebly => {
                takes(true, false, false, false)?;
                FamilySpec::Feebly { k: need_k()? }
            }
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Compact parameter string, e.g. `k=2,p=1,q=2` or `alphas=1,2`.
    pub fn params_string(&self) -> String {
        match self {
            FamilySpec::AmicablePair | FamilySpec::Perfect | FamilySpec::AmicableNumber => String::new(),
            FamilySpec::Dickson { k }
            | FamilySpec::Yanney { k }
            | FamilySpec::Gm { k }
            | FamilySpec::Wgm { k }
            | FamilySpec::Feebly { k } => format!("k={k}"),
            FamilySpec::CohenPair { alpha, beta } | FamilySpec::AlphaBeta { alpha, beta } => {
                format!("alpha={alpha},beta={beta}")
            }
            FamilySpec::Multiamicable { alphas } => format!("alphas={}", join(alphas)),
            FamilySpec::Wpm { k, p } | FamilySpec::Whm { k, p } => format!("k={k},p={p}"),
            FamilySpec::Pm { k, p, q } | FamilySpec::Hm { k, p, q } | FamilySpec::Mp { k, p, q } => {
                format!("k={k},p={p},q={q}")
            }
        }
    }
}

pub(crate) fn join(values: &[u64]) -> String {
    values.iter().map(u64::to_string).collect::<Vec<_>>().join(",")
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let params = self.params_string();
        if params.is_empty() {
            write!(f, "{}", self.kind())
        } else {
            write!(f, "{}({})", self.kind(), params)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for kind in FamilyKind::ALL {
            assert_eq!(kind.name().parse::<FamilyKind>().unwrap(), kind);
        }
        assert!(matches!("pmx".parse::<FamilyKind>(), Err(FamilyError::UnknownFamily(_))));
    }

    #[test]
    fn parameter_sets_must_match_kind() {
        let gm_with_p = FamilyParams { k: Some(2), p: Some(1), ..Default::default() };
        assert!(FamilySpec::from_params(FamilyKind::Gm, &gm_with_p).is_err());
        let mp_low_p = FamilyParams { k: Some(2), p: Some(1), q: Some(2), ..Default::default() };
        assert!(FamilySpec::from_params(FamilyKind::Mp, &mp_low_p).is_err());
        let pm = FamilyParams { k: Some(2), p: Some(1), q: Some(2), ..Default::default() };
        assert_eq!(
            FamilySpec::from_params(FamilyKind::Pm, &pm).unwrap(),
            FamilySpec::Pm { k: 2, p: 1, q: 2 }
        );
        let multi = FamilyParams { alphas: Some(vec![1, 2]), ..Default::default() };
        assert_eq!(
            FamilySpec::from_params(FamilyKind::Multiamicable, &multi).unwrap().k(),
            2
        );
        let zero_q = FamilyParams { k: Some(2), p: Some(1), q: Some(0), ..Default::default() };
        assert!(FamilySpec::from_params(FamilyKind::Hm, &zero_q).is_err());
    }

    #[test]
    fn serde_tag_uses_cli_names() {
        let json = serde_json::to_string(&FamilySpec::Pm { k: 2, p: 1, q: 2 }).unwrap();
        assert_eq!(json, r#"{"kind":"pm","k":2,"p":1,"q":2}"#);
        let json = serde_json::to_string(&FamilySpec::AlphaBeta { alpha: 1, beta: 3 }).unwrap();
        assert_eq!(json, r#"{"kind":"alpha-beta","alpha":1,"beta":3}"#);
    }
}
