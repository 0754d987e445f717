use crate::sheaf::{Cochain, LatticeSheaf};
use crate::{hodge, tarski, Result};

/// Which cohomology a [`FixedPointSet`] describes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FixedPointKind {
    /// `Post(L_k)` for the Tarski Laplacian.
    Tarski,
    /// `Post(L⁺_k)` for the up-Laplacian.
    HodgeUpper,
    /// `Pre(L⁻_k)` for the down-Laplacian.
    HodgeLower,
}

impl FixedPointKind {
    pub fn name(self) -> &'static str {
        match self {
            Self::Tarski => "tarski",
            Self::HodgeUpper => "hodge-upper",
            Self::HodgeLower => "hodge-lower",
        }
    }

    /// The endomorphism of `C^k` whose post- or pre-fixed points form the set.
    pub fn operator(self, sheaf: &LatticeSheaf, k: usize, x: &Cochain) -> Result<Cochain> {
        match self {
            Self::Tarski => tarski::tarski_laplacian(sheaf, k, x),
            Self::HodgeUpper => hodge::up_laplacian(sheaf, k, x),
            Self::HodgeLower => hodge::down_laplacian(sheaf, k, x),
        }
    }

    /// Membership test: `op(x) ⪰ x` for post sets, `op(x) ⪯ x` for pre sets.
    pub fn contains(self, sheaf: &LatticeSheaf, k: usize, x: &Cochain) -> Result<bool> {
        let image = self.operator(sheaf, k, x)?;
        match self {
            Self::Tarski | Self::HodgeUpper => sheaf.cochain_leq(x, &image),
            Self::HodgeLower => sheaf.cochain_leq(&image, x),
        }
    }

    fn is_post(self) -> bool {
        !matches!(self, Self::HodgeLower)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    /// List every member; requires `|C^k|` under the enumeration limit.
    Enumerate,
    /// Extremal members only, plus the membership predicate.
    Summary,
}

/// A post- or pre-fixed-point set inside `C^k`.
///
/// Post sets always contain `𝟎` and their maximum is found by the descending
/// flow `x ↦ x ∧ op(x)` from `𝟏`; pre sets always contain `𝟏` and their
/// minimum is found by the ascending flow `x ↦ x ∨ op(x)` from `𝟎`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixedPointSet {
    pub degree: usize,
    pub kind: FixedPointKind,
    pub max: Cochain,
    pub min: Cochain,
    /// Every member in lexicographic order, when enumerated.
    pub members: Option<Vec<Cochain>>,
}

impl FixedPointSet {
    pub fn compute(
        sheaf: &LatticeSheaf,
        kind: FixedPointKind,
        k: usize,
        mode: Mode,
    ) -> Result<Self> {
        let (max, min) = if kind.is_post() {
            (extremal(sheaf, kind, k, sheaf.top_cochain(k))?, sheaf.bottom_cochain(k))
        } else {
            (sheaf.top_cochain(k), extremal(sheaf, kind, k, sheaf.bottom_cochain(k))?)
        };
        let members = match mode {
            Mode::Summary => None,
            Mode::Enumerate => {
                let mut out = Vec::new();
                for x in sheaf.all_cochains(k)? {
                    if kind.contains(sheaf, k, &x)? {
                        out.push(x);
                    }
                }
                Some(out)
            }
        };
        Ok(Self {
            degree: k,
            kind,
            max,
            min,
            members,
        })
    }

    pub fn is_complete(&self) -> bool {
        self.members.is_some()
    }

    pub fn len(&self) -> Option<usize> {
        self.members.as_ref().map(Vec::len)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, sheaf: &LatticeSheaf, x: &Cochain) -> Result<bool> {
        match &self.members {
            Some(m) if x.degree() == self.degree => Ok(m.binary_search(x).is_ok()),
            _ => self.kind.contains(sheaf, self.degree, x),
        }
    }
}

/// Iterates `x ↦ x ∧ op(x)` (post sets) or `x ↦ x ∨ op(x)` (pre sets) to
/// its limit.
fn extremal(sheaf: &LatticeSheaf, kind: FixedPointKind, k: usize, start: Cochain) -> Result<Cochain> {
    if kind == FixedPointKind::Tarski {
        return Ok(tarski::harmonic_flow(sheaf, k, &start, Default::default())?.final_cochain);
    }
    let bound = sheaf.cochain_height(k) + 1;
    let mut x = start;
    for _ in 0..=bound {
        let image = kind.operator(sheaf, k, &x)?;
        let next = if kind.is_post() {
            sheaf.cochain_meet(&x, &image)?
        } else {
            sheaf.cochain_join(&x, &image)?
        };
        if next == x {
            return Ok(x);
        }
        x = next;
    }
    Err(crate::Error::StepBoundExceeded { bound })
}
