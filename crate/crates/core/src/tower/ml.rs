//! Image chains and the Mittag-Leffler decision.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{mat_mul, EuclideanDomain, Mat};
use crate::module::{FPModule, ModuleMap, Submodule};

use super::{Tail, Tower};

#[derive(Clone, Debug)]
pub enum ChainEntry<R: EuclideanDomain> {
    Known(Submodule<R>),
    /// The level needed for this entry lies past the end of a truncated tower.
    Undecided,
}

/// Entries `j = 0..=k` of the chain `λ_m ⋯ λ_{m+j-1}(H_{m+j}) ⊆ H_m`.
pub fn image_chain<R: EuclideanDomain>(t: &Tower<R>, m: usize, k: usize) -> Vec<ChainEntry<R>> {
    let Some(hm) = t.module_at(m) else {
        return vec![ChainEntry::Undecided; k + 1];
    };
    let ring = hm.ring();
    let mut acc = Mat::identity(ring, hm.gens());
    let mut out = Vec::with_capacity(k + 1);
    for j in 0..=k {
        if j > 0 {
            match t.map_at(m + j - 1) {
                Some(f) => acc = hm.reduce_columns(&mat_mul(ring, &acc, f.matrix()).expect("maps compose")),
                None => {
                    out.resize(k + 1, ChainEntry::Undecided);
                    return out;
                }
            }
        }
        out.push(ChainEntry::Known(Submodule::new(hm, acc.clone()).expect("rows match H_m").compact()));
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Stationary,
    NotML,
    UndecidedAtDepth,
}

/// `element` lies in chain entry `index` but not in entry `index + 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StrictStep<E> {
    pub index: usize,
    pub element: Vec<E>,
    /// A generator `b` of the level `m + index` with `λ_m⋯(b) = element`.
    pub preimage: Vec<E>,
}

#[derive(Clone, Debug)]
pub struct Witness<R: EuclideanDomain> {
    /// The level `m` whose chain never stabilizes.
    pub level: usize,
    pub chain: Vec<Submodule<R>>,
    pub steps: Vec<StrictStep<R::Elem>>,
}

#[derive(Clone, Debug)]
pub struct MLReport<R: EuclideanDomain> {
    pub verdict: Verdict,
    /// Minimal `l(m)` for `m = 1..=l.len()` (when stationary).
    pub l: Vec<usize>,
    /// Beyond the table, `l(m) = m + tail_shift`.
    pub tail_shift: Option<usize>,
    pub witness: Option<Witness<R>>,
    /// Chain steps examined.
    pub depth: usize,
    /// Steps after which a periodic chain that has not stabilized never will.
    pub bound: Option<usize>,
    /// Stable image inside the tail module, when stationary.
    pub stable: Option<Submodule<R>>,
}

impl<R: EuclideanDomain> MLReport<R> {
    pub fn l_at(&self, m: usize) -> Option<usize> {
        if m >= 1 && m <= self.l.len() {
            Some(self.l[m - 1])
        } else {
            self.tail_shift.map(|s| m + s)
        }
    }

    /// `max_m (l(m) - m)`: the smallest uniform shift that works at every level.
    pub fn max_offset(&self) -> Option<usize> {
        let s = self.tail_shift?;
        Some(self.l.iter().enumerate().map(|(i, l)| l - (i + 1)).fold(s, usize::max))
    }
}

/// A candidate stabilization sequence: `explicit[m-1]` for small `m`, then `m + tail_shift`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IndexSequence {
    pub explicit: Vec<usize>,
    pub tail_shift: usize,
}

impl IndexSequence {
    pub fn uniform(shift: usize) -> Self {
        IndexSequence { explicit: vec![], tail_shift: shift }
    }

    pub fn at(&self, m: usize) -> usize {
        if m >= 1 && m <= self.explicit.len() {
            self.explicit[m - 1]
        } else {
            m + self.tail_shift
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.tail_shift == 0 || self.explicit.iter().enumerate().any(|(i, &l)| l <= i + 1) {
            return Err(Error::InvalidInput("an index sequence needs l(m) > m".into()));
        }
        Ok(())
    }
}

struct TailChain<R: EuclideanDomain> {
    chain: Vec<Submodule<R>>,
    stable_from: Option<usize>,
    bound: usize,
}

fn next_image<R: EuclideanDomain>(map: &ModuleMap<R>, v: &Submodule<R>) -> Submodule<R> {
    let ring = map.ring();
    let g = mat_mul(ring, map.matrix(), v.generators()).expect("endomorphism");
    Submodule::new(map.target(), g).expect("rows match").compact()
}

/// Runs `V_j = λ^j(H)` until it stabilizes or provably never will.
fn analyze_tail<R: EuclideanDomain>(h: &FPModule<R>, map: &ModuleMap<R>) -> TailChain<R> {
    let length = h.torsion_length_bound() as usize;
    let mut chain = vec![Submodule::whole(h).compact()];
    let mut rank_stable: Option<usize> = None;
    let mut j = 0;
    loop {
        let next = next_image(map, &chain[j]);
        if rank_stable.is_none() && next.rank() == chain[j].rank() {
            rank_stable = Some(j);
        }
        let stable = chain[j].is_subset(&next);
        chain.push(next);
        if stable {
            let bound = rank_stable.unwrap_or(j) + length;
            return TailChain { chain, stable_from: Some(j), bound };
        }
        // past the rank stabilization, only the torsion part can still shrink,
        // and it does so at most `length` times
        if let Some(j0) = rank_stable {
            if j >= j0 + length {
                return TailChain { chain, stable_from: None, bound: j0 + length };
            }
        }
        j += 1;
    }
}

fn strict_step<R: EuclideanDomain>(
    h: &FPModule<R>,
    power: &Mat<R::Elem>,
    next: &Submodule<R>,
    index: usize,
) -> Option<StrictStep<R::Elem>> {
    // λ^j(H) is spanned by the images of the generators, so one of them escapes λ^{j+1}(H)
    let solver = next.membership_solver();
    (0..h.gens()).find_map(|i| {
        let x = power.column(i);
        solver.solve(&x).expect("dimensions agree").is_none().then(|| StrictStep {
            index,
            element: h.reduce(&x),
            preimage: h.unit_vector(i),
        })
    })
}

fn not_ml_witness<R: EuclideanDomain>(
    t: &Tower<R>,
    h: &FPModule<R>,
    map: &ModuleMap<R>,
    mut chain: Vec<Submodule<R>>,
    steps_wanted: usize,
) -> Witness<R> {
    while chain.len() <= steps_wanted {
        let next = next_image(map, chain.last().expect("chain starts with H"));
        chain.push(next);
    }
    let ring = h.ring();
    let mut power = Mat::identity(ring, h.gens());
    let mut steps = Vec::with_capacity(steps_wanted);
    for j in 0..steps_wanted {
        let step = strict_step(h, &power, &chain[j + 1], j).expect("a chain that never stabilizes is strict at every step");
        steps.push(step);
        power = h.reduce_columns(&mat_mul(ring, map.matrix(), &power).expect("endomorphism"));
    }
    chain.truncate(steps_wanted + 1);
    Witness { level: t.prefix_len() + 1, chain, steps }
}

/// Decides the Mittag-Leffler condition. Periodic tails get an exact
/// verdict; a truncated tower can always be continued either way, so it is
/// reported as undecided.
pub fn ml_check<R: EuclideanDomain>(t: &Tower<R>, depth: usize) -> MLReport<R> {
    let Tail::Periodic { module: h, map, .. } = t.tail() else {
        return MLReport {
            verdict: Verdict::UndecidedAtDepth,
            l: vec![],
            tail_shift: None,
            witness: None,
            depth: t.prefix_len(),
            bound: None,
            stable: None,
        };
    };
    let tail = analyze_tail(h, map);
    let d = t.prefix_len();
    let Some(big_j) = tail.stable_from else {
        let steps = depth.max(tail.bound + 2);
        let witness = not_ml_witness(t, h, map, tail.chain, steps);
        return MLReport {
            verdict: Verdict::NotML,
            l: vec![],
            tail_shift: None,
            witness: Some(witness),
            depth: steps,
            bound: Some(tail.bound),
            stable: None,
        };
    };
    let shift = big_j.max(1);
    let mut l = Vec::with_capacity(d + 1);
    for m in 1..=d {
        let last = (m + 1).max(d + 1 + big_j);
        let entries = image_chain(t, m, last - m);
        let ChainEntry::Known(stable) = &entries[last - m] else {
            unreachable!("periodic towers have every level")
        };
        let first = (m + 1..=last)
            .find(|&k| matches!(&entries[k - m], ChainEntry::Known(s) if s.is_subset(stable)))
            .expect("the last entry is stable");
        l.push(first);
    }
    l.push(d + 1 + shift);
    MLReport {
        verdict: Verdict::Stationary,
        l,
        tail_shift: Some(shift),
        witness: None,
        depth: tail.chain.len() - 1,
        bound: Some(tail.bound),
        stable: Some(tail.chain[big_j].clone()),
    }
}

/// Whether the tower is ML with respect to `l`; `None` when undecidable from the data.
pub fn ml_wrt<R: EuclideanDomain>(t: &Tower<R>, l: &IndexSequence) -> Result<Option<bool>> {
    l.validate()?;
    let rep = ml_check(t, 0);
    Ok(match rep.verdict {
        Verdict::UndecidedAtDepth => None,
        Verdict::NotML => Some(false),
        Verdict::Stationary => {
            let top = rep.l.len().max(l.explicit.len());
            let levels_ok = (1..=top).all(|m| l.at(m) >= rep.l_at(m).expect("stationary"));
            Some(levels_ok && l.tail_shift >= rep.tail_shift.expect("stationary"))
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Integers;
    use num_bigint::BigInt;

    fn z(n: i64) -> BigInt {
        BigInt::from(n)
    }

    fn times(h: &FPModule<Integers>, c: i64) -> ModuleMap<Integers> {
        ModuleMap::new(h, h, Mat::from_fn(h.gens(), h.gens(), |i, j| if i == j { z(c) } else { z(0) })).unwrap()
    }

    #[test]
    fn chain_of_doubling() {
        let r = Integers;
        let zz = FPModule::free(&r, 1);
        let t = Tower::periodic(&times(&zz, 2)).unwrap();
        let chain = image_chain(&t, 1, 4);
        for (j, e) in chain.iter().enumerate() {
            let ChainEntry::Known(s) = e else { panic!() };
            let want = Submodule::from_elements(&zz, &[vec![z(1 << j)]]).unwrap();
            assert!(s.equals(&want));
        }
    }

    #[test]
    fn doubling_is_not_ml() {
        let r = Integers;
        let zz = FPModule::free(&r, 1);
        let rep = ml_check(&Tower::periodic(&times(&zz, 2)).unwrap(), 12);
        assert_eq!(rep.verdict, Verdict::NotML);
        let w = rep.witness.unwrap();
        assert_eq!(w.steps.len(), 12);
        for s in &w.steps {
            assert_eq!(s.element, vec![z(1 << s.index)]);
        }
    }

    #[test]
    fn cyclic_two_power_towers() {
        let r = Integers;
        for k in 1..6u32 {
            let h = FPModule::cyclic(&r, &z(1 << k));
            let rep = ml_check(&Tower::periodic(&times(&h, 2)).unwrap(), 0);
            assert_eq!(rep.verdict, Verdict::Stationary);
            assert_eq!(rep.tail_shift, Some(k as usize));
            assert_eq!(rep.l_at(7), Some(7 + k as usize));
        }
    }

    #[test]
    fn identity_and_zero_maps() {
        let r = Integers;
        let zz = FPModule::free(&r, 2);
        let rep = ml_check(&Tower::constant(&zz), 0);
        assert_eq!(rep.l_at(1), Some(2));
        let rep = ml_check(&Tower::periodic(&times(&zz, 0)).unwrap(), 0);
        assert_eq!(rep.verdict, Verdict::Stationary);
        assert_eq!(rep.tail_shift, Some(1));
    }

    #[test]
    fn late_torsion_stabilization() {
        // Z ⊕ Z/8 with (x, t) ↦ (x, 2t): stable only after three steps
        let r = Integers;
        let h = FPModule::from_orders(&r, &[z(0), z(8)]);
        let f = ModuleMap::new(&h, &h, Mat::from_rows(vec![vec![z(1), z(0)], vec![z(0), z(2)]], 2).unwrap()).unwrap();
        let rep = ml_check(&Tower::periodic(&f).unwrap(), 0);
        assert_eq!(rep.verdict, Verdict::Stationary);
        assert_eq!(rep.tail_shift, Some(3));
        // (x, t) ↦ (2x, t) never stabilizes
        let g = ModuleMap::new(&h, &h, Mat::from_rows(vec![vec![z(2), z(0)], vec![z(0), z(1)]], 2).unwrap()).unwrap();
        assert_eq!(ml_check(&Tower::periodic(&g).unwrap(), 0).verdict, Verdict::NotML);
    }

    #[test]
    fn prefix_levels() {
        // Z/4 ←·2 Z/4 ←0 Z/4 ←id Z/4 ...: level 1 stabilizes at 3, level 2 at 3
        let r = Integers;
        let h = FPModule::cyclic(&r, &z(4));
        let t = Tower::new(
            vec![h.clone(), h.clone()],
            vec![times(&h, 2)],
            Tail::Periodic { module: h.clone(), map: times(&h, 1), attach: Some(times(&h, 0)) },
        )
        .unwrap();
        let rep = ml_check(&t, 0);
        assert_eq!(rep.l, vec![3, 3, 4]);
        assert_eq!(ml_wrt(&t, &IndexSequence::uniform(1)).unwrap(), Some(false));
        assert_eq!(ml_wrt(&t, &IndexSequence { explicit: vec![3, 3], tail_shift: 1 }).unwrap(), Some(true));
        assert_eq!(ml_wrt(&t, &IndexSequence::uniform(2)).unwrap(), Some(true));
    }

    #[test]
    fn truncated_is_undecided() {
        let r = Integers;
        let h = FPModule::cyclic(&r, &z(2));
        let t = Tower::truncated(vec![h.clone(), h.clone()], vec![times(&h, 1)]).unwrap();
        assert_eq!(ml_check(&t, 5).verdict, Verdict::UndecidedAtDepth);
        let chain = image_chain(&t, 1, 3);
        assert!(matches!(chain[1], ChainEntry::Known(_)));
        assert!(matches!(chain[2], ChainEntry::Undecided));
    }
}
