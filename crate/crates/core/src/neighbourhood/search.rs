//! Countermodel search over monotonic explicit frames or graded core frames.
//!
//! Candidates are numbered. The first block enumerates every frame and
//! valuation on one and then two worlds, as far as the budget allows; after
//! that candidate `i` is drawn from stream `i` of a generator seeded with
//! `seed`. The
//! reported countermodel is always the one with the lowest number.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{AnyNbhdFrame, CoreFrame, NbhdFrame};
use crate::error::Result;
use crate::formula::{Formula, Grade};
use crate::par;
use crate::semantics::{truth_set, Frame, Model, Valuation};
use crate::sets::{Universe, WorldSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SearchClass {
    /// Explicit frames whose every `ν_n(w)` is closed under supersets.
    Monotonic,
    /// Graded neighbourhood frames given by cores.
    Graded,
}

#[derive(Clone, Debug)]
pub struct SearchOptions {
    pub max_worlds: usize,
    /// Number of candidates (frame plus valuation) to try.
    pub budget: u64,
    pub seed: u64,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self { max_worlds: 4, budget: 100_000, seed: 0 }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum SearchOutcome {
    Found {
        model: Model<AnyNbhdFrame>,
        world: String,
        /// Number of the falsifying candidate.
        candidate: u64,
    },
    NotFound {
        candidates: u64,
    },
}

/// Looks for a model of the given class in which `f` fails at some world.
pub fn counterexample_search(f: &Formula, class: SearchClass, opts: &SearchOptions) -> Result<SearchOutcome> {
    let space = Space::new(f, class, opts);
    let hit = par::find_map_first(0..opts.budget, |i| {
        let (frame, val) = space.candidate(i);
        match truth_set(&frame, &val, f) {
            Ok(t) => full_minus(&frame, &t).map(|w| Ok((i, frame, val, w))),
            Err(e) => Some(Err(e)),
        }
    });
    match hit {
        None => Ok(SearchOutcome::NotFound { candidates: opts.budget }),
        Some(Err(e)) => Err(e),
        Some(Ok((candidate, frame, val, w))) => Ok(SearchOutcome::Found {
            world: frame.universe().name(w).to_string(),
            model: Model::new(frame, val)?,
            candidate,
        }),
    }
}

fn full_minus(frame: &AnyNbhdFrame, t: &WorldSet) -> Option<usize> {
    frame.universe().full().difference(t).iter().next()
}

struct Space {
    class: SearchClass,
    atoms: Vec<String>,
    max_grade: Grade,
    max_worlds: usize,
    seed: u64,
    /// `(worlds, count)` blocks enumerated exhaustively, in order.
    blocks: Vec<(usize, u64)>,
    /// Up-closed families over 1 and 2 worlds, as bitsets over subset masks.
    upsets: [Vec<u64>; 3],
}

impl Space {
    fn new(f: &Formula, class: SearchClass, opts: &SearchOptions) -> Self {
        let atoms: Vec<String> = f.atoms().into_iter().map(str::to_string).collect();
        let max_grade = f.max_grade().max(1);
        let upsets = [Vec::new(), upsets(1), upsets(2)];
        let mut space = Self {
            class,
            atoms,
            max_grade,
            max_worlds: opts.max_worlds.max(1),
            seed: opts.seed,
            blocks: Vec::new(),
            upsets,
        };
        let mut used = 0u64;
        for s in 1..=space.max_worlds.min(2) {
            match space.block_size(s) {
                Some(count) if used.saturating_add(count) <= opts.budget / 2 => {
                    space.blocks.push((s, count));
                    used += count;
                }
                _ => break,
            }
        }
        space
    }

    /// Frames times valuations on `s` worlds, if it fits in a `u64`.
    fn block_size(&self, s: usize) -> Option<u64> {
        let per_world: u64 = match self.class {
            SearchClass::Monotonic => (self.upsets[s].len() as u64).checked_pow(self.max_grade)?,
            SearchClass::Graded => 1 << s,
        };
        let frames = per_world.checked_pow(s as u32)?;
        let vals = 1u64.checked_shl((self.atoms.len() * s) as u32).filter(|_| self.atoms.len() * s < 64)?;
        frames.checked_mul(vals)
    }

    fn candidate(&self, mut i: u64) -> (AnyNbhdFrame, Valuation) {
        for &(s, count) in &self.blocks {
            if i < count {
                return self.enumerated(s, i);
            }
            i -= count;
        }
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(i);
        self.random(&mut rng)
    }

    fn enumerated(&self, s: usize, mut i: u64) -> (AnyNbhdFrame, Valuation) {
        let u = Universe::numbered(s);
        let mut digit = |radix: u64| {
            let d = i % radix;
            i /= radix;
            d
        };
        let frame = match self.class {
            SearchClass::Monotonic => {
                let ups = &self.upsets[s];
                let mut fam = vec![vec![0u64; self.max_grade as usize]; s];
                for row in fam.iter_mut() {
                    for slot in row.iter_mut() {
                        *slot = ups[digit(ups.len() as u64) as usize];
                    }
                }
                let frame = NbhdFrame::from_fn(u.clone(), self.max_grade, |w, n, x| {
                    fam[w][n as usize - 1] >> x.to_mask().expect("small") & 1 == 1
                })
                .expect("small frame");
                AnyNbhdFrame::Explicit(frame)
            }
            SearchClass::Graded => {
                let cores = (0..s).map(|_| WorldSet::from_mask(digit(1 << s))).collect();
                AnyNbhdFrame::Core(CoreFrame::new(u, cores).expect("cores fit"))
            }
        };
        let val = self.atoms.iter().map(|p| (p.clone(), WorldSet::from_mask(digit(1 << s)))).collect();
        (frame, val)
    }

    fn random(&self, rng: &mut ChaCha8Rng) -> (AnyNbhdFrame, Valuation) {
        let s = rng.random_range(1..=self.max_worlds);
        let u = Universe::numbered(s);
        let subset = |rng: &mut ChaCha8Rng| -> WorldSet { (0..s).filter(|_| rng.random_bool(0.5)).collect() };
        let frame = match self.class {
            SearchClass::Monotonic => {
                let gens: Vec<Vec<Vec<WorldSet>>> = (0..s)
                    .map(|_| {
                        (0..self.max_grade)
                            .map(|_| {
                                let k = rng.random_range(0..=3);
                                (0..k).map(|_| subset(rng)).collect()
                            })
                            .collect()
                    })
                    .collect();
                let frame = NbhdFrame::from_fn(u, self.max_grade, |w, n, x| {
                    gens[w][n as usize - 1].iter().any(|g| g.is_subset(x))
                })
                .expect("small frame");
                AnyNbhdFrame::Explicit(frame)
            }
            SearchClass::Graded => {
                let cores = (0..s).map(|_| subset(rng)).collect();
                AnyNbhdFrame::Core(CoreFrame::new(u, cores).expect("cores fit"))
            }
        };
        let val = self.atoms.iter().map(|p| (p.clone(), subset(rng))).collect();
        (frame, val)
    }
}

/// Up-closed families of subsets of an `s`-world set, each as a bitset
/// indexed by subset mask.
fn upsets(s: usize) -> Vec<u64> {
    let subsets = 1u64 << s;
    (0..1u64 << subsets)
        .filter(|&fam| (0..subsets).all(|x| fam >> x & 1 == 0 || (0..s).all(|a| fam >> (x | 1 << a) & 1 == 1)))
        .collect()
}

impl SearchOutcome {
    pub fn is_found(&self) -> bool {
        matches!(self, SearchOutcome::Found { .. })
    }
}

/// Sanity check used by tests: the found model really is monotonic.
#[cfg(test)]
fn monotone(frame: &AnyNbhdFrame) -> bool {
    matches!(super::is_monotonic(frame).unwrap(), super::Monotonicity::Pass { .. })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{parse, Axiom};

    #[test]
    fn upset_counts() {
        assert_eq!(upsets(1).len(), 3);
        assert_eq!(upsets(2).len(), 6);
    }

    #[test]
    fn top_has_no_countermodel() {
        let opts = SearchOptions { budget: 2000, ..Default::default() };
        let r = counterexample_search(&Formula::Top, SearchClass::Monotonic, &opts).unwrap();
        assert_eq!(r, SearchOutcome::NotFound { candidates: 2000 });
    }

    #[test]
    fn bot_fails_immediately() {
        let r = counterexample_search(&Formula::Bot, SearchClass::Monotonic, &SearchOptions::default()).unwrap();
        assert!(matches!(r, SearchOutcome::Found { candidate: 0, .. }));
    }

    #[test]
    fn ax4_holds_on_graded_frames() {
        let f = Axiom::Ax4 { n: 1 }.instance(parse("p").unwrap(), Formula::Top);
        let opts = SearchOptions { budget: 20_000, ..Default::default() };
        assert!(!counterexample_search(&f, SearchClass::Graded, &opts).unwrap().is_found());
        let r = counterexample_search(&f, SearchClass::Monotonic, &opts).unwrap();
        let SearchOutcome::Found { model, world, .. } = r else { panic!("no countermodel") };
        assert!(monotone(&model.frame));
        assert!(!model.eval(&world, &f).unwrap());
    }

    #[test]
    fn separation_fails_monotonically() {
        let f = Axiom::Separation { n: 2 }.instance(parse("p").unwrap(), parse("q").unwrap());
        let r = counterexample_search(&f, SearchClass::Monotonic, &SearchOptions::default()).unwrap();
        let SearchOutcome::Found { model, world, candidate } = r else { panic!("no countermodel") };
        assert!(candidate < 100_000);
        assert!(model.universe().len() <= 4);
        assert!(monotone(&model.frame));
        assert!(!model.eval(&world, &f).unwrap());
    }

    #[test]
    fn deterministic() {
        let f = parse("(imp (dia 1 p) (dia 2 p))").unwrap();
        let a = counterexample_search(&f, SearchClass::Graded, &SearchOptions::default()).unwrap();
        let b = counterexample_search(&f, SearchClass::Graded, &SearchOptions::default()).unwrap();
        assert_eq!(a, b);
    }
}
