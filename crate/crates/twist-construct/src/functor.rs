use std::sync::Arc;

use affine_fock::PBWVector;
use exact_kernel::{LogSeries, Scalar};

use crate::module::TwistedModule;
use crate::TwistError;

type MapFn = dyn Fn(&PBWVector<Scalar>) -> PBWVector<Scalar> + Send + Sync;

/// A linear map between the spaces of two modules.
#[derive(Clone)]
pub struct ModuleMap {
    pub label: String,
    f: Arc<MapFn>,
}

impl std::fmt::Debug for ModuleMap {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ModuleMap").field("label", &self.label).finish()
    }
}

impl ModuleMap {
    pub fn new(
        label: impl Into<String>,
        f: impl Fn(&PBWVector<Scalar>) -> PBWVector<Scalar> + Send + Sync + 'static,
    ) -> Self {
        ModuleMap {
            label: label.into(),
            f: Arc::new(f),
        }
    }

    pub fn identity() -> Self {
        Self::new("id", |w| w.clone())
    }

    pub fn scalar(c: Scalar) -> Self {
        Self::new(format!("{c}·id"), move |w| {
            let mut out = PBWVector::zero();
            out.axpy(&c, w);
            out
        })
    }

    pub fn zero() -> Self {
        Self::new("0", |_| PBWVector::zero())
    }

    pub fn apply(&self, w: &PBWVector<Scalar>) -> PBWVector<Scalar> {
        (self.f)(w)
    }

    fn apply_series(&self, s: &LogSeries<PBWVector<Scalar>>) -> Result<LogSeries<PBWVector<Scalar>>, TwistError> {
        let mut out = LogSeries::with_window(s.denom(), s.floor().cloned(), s.ceiling().cloned());
        for (e, k, v) in s.iter() {
            out.add_term::<Scalar>(e.clone(), k, self.apply(v))?;
        }
        Ok(out)
    }
}

/// Check `f(Y_1(v, x) w) = Y_2(v, x) f(w)` for every probe `v` and basis
/// vector `w` of the source up to `depth`, with exponents up to `ceiling`.
pub fn intertwines(
    f: &ModuleMap,
    src: &TwistedModule,
    dst: &TwistedModule,
    probes: &[PBWVector<Scalar>],
    depth: i64,
    ceiling: &Scalar,
) -> Result<(), TwistError> {
    for v in probes {
        for m in src.module().basis_to(depth) {
            let w = PBWVector::from_monomial(m.clone());
            let lhs = f.apply_series(&src.vertex_op(v, &w, ceiling)?)?;
            let rhs = dst.vertex_op(v, &f.apply(&w), ceiling)?;
            let lcm = num_integer::lcm(lhs.denom(), rhs.denom());
            if !lhs.with_denom(lcm)?.same_terms(&rhs.with_denom(lcm)?) {
                return Err(TwistError::NotIntertwining(format!(
                    "{} at v = {}, w = {}",
                    f.label,
                    src.vacuum().render(v),
                    src.module().render(&w)
                )));
            }
        }
    }
    Ok(())
}

/// The functor `Δ^{(u)}` on a module map: it checks that `f` intertwines
/// the bases, builds both twisted modules, confirms that the same linear
/// map intertwines them, and returns the twisted pair with the map.
pub fn functor_on_map(
    f: &ModuleMap,
    src: &Arc<TwistedModule>,
    dst: &Arc<TwistedModule>,
    u: &PBWVector<Scalar>,
    probes: &[PBWVector<Scalar>],
    depth: i64,
    ceiling: &Scalar,
) -> Result<(TwistedModule, TwistedModule, ModuleMap), TwistError> {
    intertwines(f, src, dst, probes, depth, ceiling)?;
    let src_t = TwistedModule::make_twisted(src, u)?;
    let dst_t = TwistedModule::make_twisted(dst, u)?;
    intertwines(f, &src_t, &dst_t, probes, depth, ceiling)?;
    Ok((src_t, dst_t, f.clone()))
}
