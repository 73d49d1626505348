//! Data-parallel helpers. With the `parallel` feature these run on rayon;
//! without it they fall back to ordinary iterators, so callers are written
//! once against this module.

/// Runtime choice between the parallel and the sequential path. Without the
/// `parallel` feature both variants run sequentially.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Exec {
    #[default]
    Parallel,
    Sequential,
}

#[cfg(feature = "parallel")]
pub mod prelude {
    pub use rayon::iter::{IndexedParallelIterator, ParallelIterator};
    use rayon::prelude::*;

    pub trait MaybeIntoParallelIterator: IntoParallelIterator {
        fn maybe_into_par_iter(self) -> Self::Iter;
    }

    impl<I: IntoParallelIterator> MaybeIntoParallelIterator for I {
        fn maybe_into_par_iter(self) -> Self::Iter {
            self.into_par_iter()
        }
    }
}

#[cfg(not(feature = "parallel"))]
pub mod prelude {
    pub trait MaybeIntoParallelIterator: IntoIterator {
        fn maybe_into_par_iter(self) -> Self::IntoIter;
    }

    impl<I: IntoIterator> MaybeIntoParallelIterator for I {
        fn maybe_into_par_iter(self) -> Self::IntoIter {
            self.into_iter()
        }
    }
}

/// Map `f` over `items`, preserving order.
pub fn map<T, R, F>(exec: Exec, items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    match exec {
        #[cfg(feature = "parallel")]
        Exec::Parallel => {
            use rayon::prelude::*;
            items.par_iter().map(f).collect()
        }
        _ => items.iter().map(f).collect(),
    }
}

/// Run two closures, in parallel when allowed.
pub fn join<A, B, RA, RB>(exec: Exec, a: A, b: B) -> (RA, RB)
where
    A: FnOnce() -> RA + Send,
    B: FnOnce() -> RB + Send,
    RA: Send,
    RB: Send,
{
    match exec {
        #[cfg(feature = "parallel")]
        Exec::Parallel => rayon::join(a, b),
        _ => (a(), b()),
    }
}

/// Whether the parallel path is compiled in.
pub const fn parallel_enabled() -> bool {
    cfg!(feature = "parallel")
}
