use crate::field::{Domain, Field};
use crate::manifold::Potential;
use crate::{Error, Result};

/// Boundary treatment of a minimization problem.
#[derive(Clone, Debug)]
pub enum Anchoring {
    /// Values at the field's Dirichlet nodes are held at the data.
    Dirichlet { data: Field },
    /// Surface energy `∫_{∂Ω} W0 |u - Q_b|^2` on the faces of a box domain.
    Weak { strength: f64, preferred: Field },
    Free,
}

/// Data passed to [`Anchoring::dirichlet`] must lie on `N` to this tolerance.
pub const DIRICHLET_TOL: f64 = 1e-8;

impl Anchoring {
    /// Dirichlet anchoring; `data` must be `N`-valued at every Dirichlet node.
    pub fn dirichlet(data: Field, potential: &Potential) -> Result<Self> {
        check_on_manifold(&data, potential, |p| data.boundary_mask()[p])?;
        Ok(Anchoring::Dirichlet { data })
    }

    /// Weak anchoring with strength `W0 >= 0`; only box domains carry a
    /// surface quadrature.
    pub fn weak(strength: f64, preferred: Field, potential: &Potential) -> Result<Self> {
        if !(strength >= 0.0 && strength.is_finite()) {
            return Err(Error::domain(format!("anchoring strength {strength} must be >= 0")));
        }
        if preferred.grid().domain() != Domain::Box {
            return Err(Error::domain("weak anchoring is supported on box domains only"));
        }
        let g = preferred.grid().clone();
        check_on_manifold(&preferred, potential, |p| g.on_grid_boundary(p))?;
        Ok(Anchoring::Weak {
            strength,
            preferred,
        })
    }

    /// Nodes whose values the solver must not change.
    pub fn constrained(&self, field: &Field) -> Vec<bool> {
        match self {
            Anchoring::Dirichlet { .. } => field.boundary_mask().to_vec(),
            _ => vec![false; field.grid().len()],
        }
    }

    /// Copies the Dirichlet data into `field` at the constrained nodes.
    pub fn impose(&self, field: &mut Field) -> Result<()> {
        if let Anchoring::Dirichlet { data } = self {
            field.same_shape(data)?;
            let k = field.k();
            let mask = field.boundary_mask().to_vec();
            let vals = field.values_mut();
            for (p, &fixed) in mask.iter().enumerate() {
                if fixed {
                    vals[p * k..(p + 1) * k].copy_from_slice(data.at(p));
                }
            }
        }
        Ok(())
    }

    pub(crate) fn check_compatible(&self, field: &Field) -> Result<()> {
        match self {
            Anchoring::Dirichlet { data } => {
                field.same_shape(data)?;
                let k = field.k();
                for (p, &fixed) in field.boundary_mask().iter().enumerate() {
                    if fixed && field.at(p) != data.at(p) {
                        return Err(Error::Precondition(format!(
                            "field differs from Dirichlet data at node {p} (k = {k})"
                        )));
                    }
                }
                Ok(())
            }
            Anchoring::Weak { preferred, .. } => field.same_shape(preferred),
            Anchoring::Free => Ok(()),
        }
    }
}

fn check_on_manifold(
    data: &Field,
    potential: &Potential,
    select: impl Fn(usize) -> bool,
) -> Result<()> {
    if data.k() != potential.k() {
        return Err(Error::GridMismatch("anchoring data has the wrong target dimension".into()));
    }
    for p in 0..data.grid().len() {
        if select(p) {
            let d = potential.dist_to_n(&data.point(p));
            if d > DIRICHLET_TOL {
                return Err(Error::domain(format!(
                    "boundary data off the vacuum manifold at node {p} (dist {d:.3e})"
                )));
            }
        }
    }
    Ok(())
}
