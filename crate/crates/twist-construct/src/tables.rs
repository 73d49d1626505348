use std::collections::{BTreeMap, BTreeSet};

use affine_fock::{InducedModule, PBWVector};
use delta_op::DeltaSign;
use exact_kernel::{factorial, int, is_integer, to_i64, Coeff, Matrix, Scalar};
use lie_core::{LieAlgebra, LieElt};
use num_traits::{One, Zero};

use crate::grading::class_mod_one;
use crate::module::{Layer, TwistedModule};
use crate::TwistError;

/// A finite combination `Σ c b_i(k) + c_0 · id` of untwisted modes.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ModeOp {
    pub modes: BTreeMap<(usize, i64), Scalar>,
    pub scalar: Scalar,
}

impl ModeOp {
    pub fn zero() -> Self {
        ModeOp::default()
    }

    pub fn is_zero(&self) -> bool {
        self.modes.is_empty() && self.scalar.is_zero()
    }

    /// `self += c · other`.
    pub fn axpy(&mut self, c: &Scalar, other: &ModeOp) {
        for (k, x) in &other.modes {
            let e = self.modes.entry(*k).or_insert_with(Scalar::zero);
            *e += c * x;
            if e.is_zero() {
                self.modes.remove(k);
            }
        }
        self.scalar += c * &other.scalar;
    }

    pub fn apply<K: Coeff>(&self, module: &InducedModule, w: &PBWVector<K>) -> PBWVector<K> {
        let mut out = PBWVector::zero();
        for ((i, k), c) in &self.modes {
            out.axpy(&K::from_scalar(c), &module.apply_mode(*i, *k, w));
        }
        if !self.scalar.is_zero() {
            out.axpy(&K::from_scalar(&self.scalar), w);
        }
        out
    }

    pub fn render(&self, names: &[String]) -> String {
        let mut parts = Vec::new();
        let coeff = |c: &Scalar| {
            if c.is_one() {
                String::new()
            } else if *c == -Scalar::one() {
                "-".to_string()
            } else {
                format!("{c}*")
            }
        };
        for ((i, k), c) in self.modes.iter().rev() {
            parts.push(format!("{}{}({})", coeff(c), names[*i], k));
        }
        if !self.scalar.is_zero() {
            parts.push(format!("{}*id", self.scalar));
        }
        if parts.is_empty() {
            return "0".to_string();
        }
        parts.join(" + ").replace("+ -", "- ")
    }
}

/// One row of a mode table: `b^{tw}(m, l)`, the coefficient of
/// `x^{-m-1} (log x)^l` in the twisted vertex operator of `b(-1)1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModeRow {
    pub m: Scalar,
    pub l: u32,
    pub op: ModeOp,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModeTable {
    pub generator: String,
    pub element: LieElt,
    pub rows: Vec<ModeRow>,
}

/// `b^{tw}(m, l)` in closed form through the construction chain. For a
/// step by `a` with `c_{λ,k} = (ad_a - λ)^k b_λ`,
/// `b^{new}(m, l) = Σ_{λ, k ≤ l} (-1)^k/k! c_{λ,k}^{base}(m - λ, l - k)
/// - δ_{m,0} δ_{l,0} (a, b) ℓ`.
pub fn closed_form_mode(tm: &TwistedModule, b: &LieElt, m: &Scalar, l: u32) -> Result<ModeOp, TwistError> {
    let alg = tm.vacuum().algebra();
    match tm.layer() {
        Layer::Untwisted => {
            let mut out = ModeOp::zero();
            if l == 0 && is_integer(m) {
                let k = to_i64(m).expect("mode in range");
                for (i, c) in b.support() {
                    out.modes.insert((i, k), c.clone());
                }
            }
            Ok(out)
        }
        Layer::Delta { base, delta } => {
            if delta.sign() != DeltaSign::Corrected {
                return Err(TwistError::Unsupported("closed forms use the corrected Δ".into()));
            }
            let a = delta.element();
            let mut out = ModeOp::zero();
            for (lam, chain) in eigen_chains(alg, a, b)? {
                for (k, c) in chain.iter().enumerate().take(l as usize + 1) {
                    let sign = if k % 2 == 0 { Scalar::one() } else { -Scalar::one() };
                    let coef = sign / factorial(k as u32);
                    let inner = closed_form_mode(base, c, &(m - &lam), l - k as u32)?;
                    out.axpy(&coef, &inner);
                }
            }
            if m.is_zero() && l == 0 {
                out.scalar -= alg.form(a, b) * tm.vacuum().level();
            }
            Ok(out)
        }
        Layer::Transport { base, tau_inv, .. } => closed_form_mode(base, &tau_inv.apply(b), m, l),
        Layer::External(_) => Err(TwistError::Unsupported(
            "closed-form modes need an explicit construction chain".into(),
        )),
    }
}

/// For each eigenvalue `λ` of `ad_a` met by `b`: the list
/// `(ad_a - λ)^k b_λ` for `k = 0, 1, ...` until it vanishes.
fn eigen_chains(alg: &LieAlgebra, a: &LieElt, b: &LieElt) -> Result<Vec<(Scalar, Vec<LieElt>)>, TwistError> {
    let ad = alg.ad(a);
    let projectors = ad.spectral_projectors().map_err(|_| TwistError::NeedsFieldExtension)?;
    let mut out = Vec::new();
    for (lam, p) in projectors {
        let mut cur = LieElt(p.apply(&b.0));
        let shifted = ad.sub(&Matrix::identity(alg.dim()).scale(&lam));
        let mut chain = Vec::new();
        while !cur.is_zero() {
            chain.push(cur.clone());
            cur = LieElt(shifted.apply(&cur.0));
        }
        if !chain.is_empty() {
            out.push((lam, chain));
        }
    }
    Ok(out)
}

/// Residues mod 1 that twisted mode indices of `b` can take.
fn mode_classes(tm: &TwistedModule, b: &LieElt) -> Result<BTreeSet<Scalar>, TwistError> {
    let alg = tm.vacuum().algebra();
    match tm.layer() {
        Layer::Untwisted => Ok(if b.is_zero() {
            BTreeSet::new()
        } else {
            BTreeSet::from([Scalar::zero()])
        }),
        Layer::Delta { base, delta } => {
            let mut out = BTreeSet::new();
            for (lam, chain) in eigen_chains(alg, delta.element(), b)? {
                for c in &chain {
                    for s in mode_classes(base, c)? {
                        out.insert(class_mod_one(&(s + &lam)));
                    }
                }
            }
            if !alg.form(delta.element(), b).is_zero() {
                out.insert(Scalar::zero());
            }
            Ok(out)
        }
        Layer::Transport { base, tau_inv, .. } => mode_classes(base, &tau_inv.apply(b)),
        Layer::External(_) => Err(TwistError::Unsupported(
            "closed-form modes need an explicit construction chain".into(),
        )),
    }
}

/// Closed-form rows `b^{tw}(m, l)` for `|m| ≤ range`, all log powers that
/// occur, skipping zero rows.
pub fn mode_table(tm: &TwistedModule, b: &LieElt, name: &str, range: i64) -> Result<ModeTable, TwistError> {
    let alg = tm.vacuum().algebra();
    let max_log = (tm.depth() * alg.dim()) as u32;
    let mut rows = Vec::new();
    for class in mode_classes(tm, b)? {
        for k in -range - 1..=range {
            let m = &class + int(k);
            if exact_kernel::abs(&m) > int(range) {
                continue;
            }
            for l in 0..=max_log {
                let op = closed_form_mode(tm, b, &m, l)?;
                if !op.is_zero() {
                    rows.push(ModeRow { m: m.clone(), l, op });
                }
            }
        }
    }
    rows.sort_by(|x, y| (&x.m, x.l).cmp(&(&y.m, y.l)));
    Ok(ModeTable {
        generator: name.to_string(),
        element: b.clone(),
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::sync::Arc;

    use affine_fock::InducedModule;
    use exact_kernel::rat;
    use lie_core::build_simple_lie;

    fn half_h() -> TwistedModule {
        let g = Arc::new(build_simple_lie("A", 1).unwrap());
        let v = Arc::new(InducedModule::vacuum(g.clone(), int(2), &int(2)).unwrap());
        let base = Arc::new(TwistedModule::untwisted(v.clone(), v.clone()).unwrap());
        let u = v.current_state(&g.element(&[("h", rat(1, 2))]).unwrap());
        TwistedModule::make_twisted(&base, &u).unwrap()
    }

    #[test]
    fn shifted_modes() {
        let t = half_h();
        let alg = t.vacuum().algebra().clone();
        let names = alg.names().to_vec();
        let e = alg.named("e").unwrap();
        let f = alg.named("f").unwrap();
        let h = alg.named("h").unwrap();
        for m in -3..=3 {
            assert_eq!(closed_form_mode(&t, &e, &int(m), 0).unwrap().render(&names), format!("e({})", m - 1));
            assert_eq!(closed_form_mode(&t, &f, &int(m), 0).unwrap().render(&names), format!("f({})", m + 1));
        }
        assert_eq!(closed_form_mode(&t, &h, &int(0), 0).unwrap().render(&names), "h(0) - 2*id");
        assert!(closed_form_mode(&t, &e, &int(0), 1).unwrap().is_zero());
        let table = mode_table(&t, &e, "e", 3).unwrap();
        assert_eq!(table.rows.len(), 7);
    }

    #[test]
    fn nilpotent_step_rows() {
        let t = Arc::new(half_h());
        let e = t.vacuum().generator_state(0);
        let n = TwistedModule::make_twisted(&t, &e).unwrap();
        let alg = n.vacuum().algebra().clone();
        let names = alg.names().to_vec();
        let f = alg.named("f").unwrap();
        let row = |m: i64, l: u32| closed_form_mode(&n, &f, &int(m), l).unwrap().render(&names);
        // f, -[e,f], (1/2)[e,[e,f]] on the shifted modes, with the
        // central term only in the log-free row.
        assert_eq!(row(0, 0), "f(1) - 2*id");
        assert_eq!(row(0, 1), "-h(0) + 2*id");
        assert_eq!(row(1, 0), "f(2)");
        assert_eq!(row(2, 2), "-e(1)");
        assert!(closed_form_mode(&n, &f, &int(2), 3).unwrap().is_zero());
        assert_eq!(row(1, 1), "-h(1)");
    }
}
