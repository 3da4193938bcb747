use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

/// Floor for the denominator of a relative residual.
pub const SCALE_FLOOR: f64 = 1e-30;

/// Identities checked by the verification suite.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Identity {
    BracketJacobi,
    CoadjointDuality,
    CoadjointShortcut,
    Cocycle,
    CommutatorBlockForm,
    ConjIdentityB,
    ConjIdentityU,
    DerivativeB2,
    DerivativeTranslated,
    Jacobi,
    JacobiCancellation,
    JacobiClosedForm,
    SharpContraction,
}

impl Identity {
    pub const ALL: [Identity; 13] = [
        Identity::BracketJacobi,
        Identity::CoadjointDuality,
        Identity::CoadjointShortcut,
        Identity::Cocycle,
        Identity::CommutatorBlockForm,
        Identity::ConjIdentityB,
        Identity::ConjIdentityU,
        Identity::DerivativeB2,
        Identity::DerivativeTranslated,
        Identity::Jacobi,
        Identity::JacobiCancellation,
        Identity::JacobiClosedForm,
        Identity::SharpContraction,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Identity::BracketJacobi => "bracket-jacobi",
            Identity::CoadjointDuality => "coadjoint-duality",
            Identity::CoadjointShortcut => "coadjoint-shortcut",
            Identity::Cocycle => "cocycle",
            Identity::CommutatorBlockForm => "commutator-block-form",
            Identity::ConjIdentityB => "conj-identity-b",
            Identity::ConjIdentityU => "conj-identity-u",
            Identity::DerivativeB2 => "derivative-b2",
            Identity::DerivativeTranslated => "derivative-translated",
            Identity::Jacobi => "jacobi",
            Identity::JacobiCancellation => "jacobi-cancellation",
            Identity::JacobiClosedForm => "jacobi-closed-form",
            Identity::SharpContraction => "sharp-contraction",
        }
    }

    /// Relative tolerance used when no override is given.
    pub fn default_tolerance(self) -> f64 {
        match self {
            Identity::Cocycle => 1e-10,
            Identity::Jacobi | Identity::JacobiCancellation => 1e-9,
            Identity::JacobiClosedForm => 1e-10,
            Identity::ConjIdentityB | Identity::ConjIdentityU => 1e-11,
            Identity::DerivativeB2 | Identity::DerivativeTranslated => 1e-6,
            Identity::SharpContraction | Identity::CoadjointDuality => 1e-12,
            Identity::BracketJacobi => 1e-10,
            Identity::CoadjointShortcut | Identity::CommutatorBlockForm => 1e-13,
        }
    }
}

impl fmt::Display for Identity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Identity {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Identity::ALL
            .into_iter()
            .find(|id| id.name() == s)
            .ok_or_else(|| format!("unknown identity '{s}'"))
    }
}

impl Serialize for Identity {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(self.name())
    }
}

/// Outcome of one numerical identity check.
#[derive(Clone, Debug, PartialEq)]
pub struct ResidualRecord {
    pub identity: Identity,
    pub dim: usize,
    pub seed: u64,
    pub residual: f64,
    /// Magnitude of the identity's individual terms.
    pub scale: f64,
}

impl ResidualRecord {
    pub fn new(identity: Identity, dim: usize, residual: f64, scale: f64) -> Self {
        Self {
            identity,
            dim,
            seed: 0,
            residual: residual.abs(),
            scale: scale.abs(),
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn relative(&self) -> f64 {
        self.residual / self.scale.max(SCALE_FLOOR)
    }

    pub fn passes(&self, tolerance: f64) -> bool {
        self.relative() <= tolerance
    }

    /// One JSON line: `{"identity", "dim", "seed", "residual", "scale", "relative"}`.
    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("record serializes")
    }
}

impl Serialize for ResidualRecord {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut s = serializer.serialize_struct("ResidualRecord", 6)?;
        s.serialize_field("identity", &self.identity)?;
        s.serialize_field("dim", &self.dim)?;
        s.serialize_field("seed", &self.seed)?;
        s.serialize_field("residual", &self.residual)?;
        s.serialize_field("scale", &self.scale)?;
        s.serialize_field("relative", &self.relative())?;
        s.end()
    }
}

/// Largest absolute value in `terms`.
pub fn max_magnitude(terms: &[f64]) -> f64 {
    terms.iter().fold(0.0, |m, t| m.max(t.abs()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for id in Identity::ALL {
            assert_eq!(id.name().parse::<Identity>().unwrap(), id);
        }
        assert!("nope".parse::<Identity>().is_err());
    }

    #[test]
    fn relative_uses_floor() {
        let r = ResidualRecord::new(Identity::Cocycle, 2, 0.0, 0.0);
        assert_eq!(r.relative(), 0.0);
        let r = ResidualRecord::new(Identity::Cocycle, 2, 1e-40, 0.0);
        assert!((r.relative() - 1e-10).abs() < 1e-20);
    }

    #[test]
    fn json_line_shape() {
        let r = ResidualRecord::new(Identity::Jacobi, 4, 1.0, 4.0).with_seed(7);
        let v: serde_json::Value = serde_json::from_str(&r.to_json_line()).unwrap();
        assert_eq!(v["identity"], "jacobi");
        assert_eq!(v["dim"], 4);
        assert_eq!(v["seed"], 7);
        assert_eq!(v["relative"], 0.25);
    }
}
