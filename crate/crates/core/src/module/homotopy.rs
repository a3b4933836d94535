//! Transfer between lifting problems in a map of short exact sequences
//!
//! ```text
//!   C --f--> C' --π--> C''      (π a cokernel of f)
//!   |h       |k        |ℓ
//!   N --ε--> M  --g--> L        (ε a kernel of g)
//! ```
//!
//! A `q: C'' → M` with `g q = ℓ` exists iff a `p: C' → N` with `p f = h` does.

use crate::error::{Error, Result};
use crate::linalg::EuclideanDomain;

use super::map::{factor_left, factor_right};
use super::ModuleMap;

#[derive(Clone, Debug)]
pub struct Diagram<R: EuclideanDomain> {
    pub f: ModuleMap<R>,
    pub pi: ModuleMap<R>,
    pub eps: ModuleMap<R>,
    pub g: ModuleMap<R>,
    pub h: ModuleMap<R>,
    pub k: ModuleMap<R>,
    pub l: ModuleMap<R>,
}

#[derive(Clone, Debug)]
pub enum TransferDirection<R: EuclideanDomain> {
    /// Given `q: C'' → M` with `g q = ℓ`, produce `p`.
    FromQ(ModuleMap<R>),
    /// Given `p: C' → N` with `p f = h`, produce `q`.
    FromP(ModuleMap<R>),
}

fn composable<R: EuclideanDomain>(second: &ModuleMap<R>, first: &ModuleMap<R>, name: &str) -> Result<ModuleMap<R>> {
    second.compose_after(first).map_err(|_| Error::Diagram(format!("{name} is not composable")))
}

fn require(ok: bool, what: &str) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::Diagram(what.to_string()))
    }
}

impl<R: EuclideanDomain> Diagram<R> {
    /// Checks exactness of both rows and commutativity of both squares.
    pub fn validate(&self) -> Result<()> {
        let pf = composable(&self.pi, &self.f, "π∘f")?;
        require(pf.is_zero(), "π∘f = 0")?;
        require(self.pi.is_surjective(), "π surjective")?;
        require(self.pi.kernel().equals(&self.f.image()), "ker π = im f")?;
        require(self.eps.is_injective(), "ε injective")?;
        let ge = composable(&self.g, &self.eps, "g∘ε")?;
        require(ge.is_zero(), "g∘ε = 0")?;
        require(self.g.kernel().equals(&self.eps.image()), "ker g = im ε")?;
        let kf = composable(&self.k, &self.f, "k∘f")?;
        let eh = composable(&self.eps, &self.h, "ε∘h")?;
        require(kf.equals(&eh), "k∘f = ε∘h")?;
        let lp = composable(&self.l, &self.pi, "ℓ∘π")?;
        let gk = composable(&self.g, &self.k, "g∘k")?;
        require(lp.equals(&gk), "ℓ∘π = g∘k")
    }
}

/// Runs the transfer in the requested direction and verifies the result by composition.
pub fn homotopy_transfer<R: EuclideanDomain>(d: &Diagram<R>, direction: &TransferDirection<R>) -> Result<ModuleMap<R>> {
    d.validate()?;
    match direction {
        TransferDirection::FromQ(q) => {
            let gq = composable(&d.g, q, "g∘q")?;
            require(gq.equals(&d.l), "g∘q = ℓ")?;
            // g(k - qπ) = 0, so k - qπ factors through ε = ker g
            let diff = d.k.add(&composable(q, &d.pi, "q∘π")?.neg())?;
            let p = factor_right(&d.eps, &diff)?
                .ok_or_else(|| Error::Diagram("k - q∘π does not factor through ε".into()))?;
            require(p.compose_after(&d.f)?.equals(&d.h), "p∘f = h")?;
            Ok(p)
        }
        TransferDirection::FromP(p) => {
            let pf = composable(p, &d.f, "p∘f")?;
            require(pf.equals(&d.h), "p∘f = h")?;
            // (k - εp) f = 0, so k - εp factors through π = coker f
            let diff = d.k.add(&composable(&d.eps, p, "ε∘p")?.neg())?;
            let q = factor_left(&d.pi, &diff)?
                .ok_or_else(|| Error::Diagram("k - ε∘p does not factor through π".into()))?;
            require(d.g.compose_after(&q)?.equals(&d.l), "g∘q = ℓ")?;
            Ok(q)
        }
    }
}
