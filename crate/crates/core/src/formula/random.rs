use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{is_atom_name, Formula, Grade};
use crate::error::{Error, Result};

/// Deterministic random formula: AST depth ≤ `depth`, grades ≤ `max_grade`,
/// letters drawn from `atoms`.
pub fn random_formula<S: AsRef<str>>(seed: u64, depth: usize, max_grade: Grade, atoms: &[S]) -> Result<Formula> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_formula_with(&mut rng, depth, max_grade, atoms)
}

pub fn random_formula_with<R: Rng + ?Sized, S: AsRef<str>>(
    rng: &mut R,
    depth: usize,
    max_grade: Grade,
    atoms: &[S],
) -> Result<Formula> {
    if atoms.is_empty() {
        return Err(Error::InvalidArgument("random formulas need at least one proposition letter".into()));
    }
    if let Some(bad) = atoms.iter().find(|a| !is_atom_name(a.as_ref())) {
        return Err(Error::InvalidArgument(format!("`{}` is not a proposition letter", bad.as_ref())));
    }
    Ok(generate(rng, depth, max_grade, atoms))
}

fn generate<R: Rng + ?Sized, S: AsRef<str>>(rng: &mut R, depth: usize, max_grade: Grade, atoms: &[S]) -> Formula {
    if depth == 0 || rng.random_bool(0.2) {
        return match rng.random_range(0..20) {
            0..=2 => Formula::Top,
            3..=5 => Formula::Bot,
            _ => Formula::atom(atoms[rng.random_range(0..atoms.len())].as_ref()),
        };
    }
    match rng.random_range(0..20) {
        0..=4 => Formula::not(generate(rng, depth - 1, max_grade, atoms)),
        5..=10 => Formula::or(generate(rng, depth - 1, max_grade, atoms), generate(rng, depth - 1, max_grade, atoms)),
        _ => {
            let n = rng.random_range(0..=max_grade);
            Formula::dia(n, generate(rng, depth - 1, max_grade, atoms))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn depth_zero_is_a_leaf() {
        for seed in 0..50 {
            let f = random_formula(seed, 0, 3, &["p"]).unwrap();
            assert!(matches!(f, Formula::Top | Formula::Bot) || f == Formula::atom("p"), "{f}");
        }
    }

    #[test]
    fn deterministic_per_seed() {
        let a = random_formula(1234, 4, 3, &["p", "q"]).unwrap();
        let b = random_formula(1234, 4, 3, &["p", "q"]).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn bounds_hold_over_many_seeds() {
        for seed in 0..1000 {
            let f = random_formula(seed, 3, 2, &["p", "q"]).unwrap();
            assert!(f.max_grade() <= 2);
            assert!(f.depth() <= 3);
            assert!(f.atoms().iter().all(|a| *a == "p" || *a == "q"));
        }
    }

    #[test]
    fn rejects_empty_or_bad_atoms() {
        let none: [&str; 0] = [];
        assert!(random_formula(1, 0, 1, &none).is_err());
        assert!(random_formula(1, 3, 1, &none).is_err());
        assert!(random_formula(1, 3, 1, &["top_", "Q"]).is_err());
    }
}
