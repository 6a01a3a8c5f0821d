#![allow(dead_code)]

use std::path::Path;

use coregular::cli::Instance;
use coregular::duality::DualModule;
use coregular::homalg::FGModule;
use coregular::integer::{AbelianGroup, ArtinianGroup};
use coregular::ring::{CoefficientField, Ideal, Monomial, Poly, PolyRing, RingRef};
use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub use rand::SeedableRng;
pub type TestRng = ChaCha8Rng;

pub fn rng(seed: u64) -> TestRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn local_ring(vars: &[&str]) -> RingRef {
    PolyRing::local(CoefficientField::Rationals, vars).unwrap()
}

pub fn monomial(r: &RingRef, exps: &[u32]) -> Poly {
    Poly::term(Monomial(exps.to_vec()), r.field().from_int(1))
}

/// Exponent vectors of a random nonzero proper monomial ideal.
pub fn random_monomial_exponents(rng: &mut TestRng, nvars: usize, max_exp: u32) -> Vec<Vec<u32>> {
    let count = rng.gen_range(1..=3);
    let mut gens = Vec::new();
    while gens.len() < count {
        let e: Vec<u32> = (0..nvars).map(|_| rng.gen_range(0..=max_exp)).collect();
        if e.iter().any(|&x| x > 0) {
            gens.push(e);
        }
    }
    gens
}

pub fn monomial_ideal(r: &RingRef, exps: &[Vec<u32>]) -> Ideal {
    Ideal::new(r, exps.iter().map(|e| monomial(r, e)).collect()).unwrap()
}

/// A monomial ideal has finite colength exactly when it holds a pure power
/// of every variable.
pub fn monomial_finite_colength(exps: &[Vec<u32>], nvars: usize) -> bool {
    (0..nvars).all(|v| exps.iter().any(|e| e[v] > 0 && e.iter().enumerate().all(|(j, &x)| j == v || x == 0)))
}

pub fn dual_of_quotient(i: &Ideal) -> DualModule {
    DualModule::new(FGModule::cyclic(i)).unwrap()
}

const SMALL_PRIMES: [u64; 3] = [2, 3, 5];

pub fn random_artinian_group(rng: &mut TestRng, allow_prufer: bool) -> ArtinianGroup {
    let finite: Vec<(u64, u32)> = (0..rng.gen_range(0..=2)).map(|_| (*SMALL_PRIMES.choose(rng).unwrap(), rng.gen_range(1..=3))).collect();
    let prufer: Vec<(u64, u32)> = if allow_prufer {
        (0..rng.gen_range(0..=2)).map(|_| (*SMALL_PRIMES.choose(rng).unwrap(), 1)).collect()
    } else {
        Vec::new()
    };
    ArtinianGroup::new(finite, prufer).unwrap()
}

pub fn random_finite_group(rng: &mut TestRng) -> AbelianGroup {
    let orders: Vec<BigInt> = (0..rng.gen_range(1..=2)).map(|_| BigInt::from(rng.gen_range(2..=12))).collect();
    AbelianGroup::from_cyclic_orders(0, &orders)
}

pub fn random_fg_group(rng: &mut TestRng) -> AbelianGroup {
    let orders: Vec<BigInt> = (0..rng.gen_range(0..=2)).map(|_| BigInt::from(rng.gen_range(2..=12))).collect();
    AbelianGroup::from_cyclic_orders(rng.gen_range(0..=1), &orders)
}

pub fn shipped_instances() -> Vec<(String, Instance)> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("instances");
    let mut out: Vec<(String, Instance)> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "inst"))
        .map(|p| {
            let name = p.file_stem().unwrap().to_string_lossy().into_owned();
            let inst = Instance::parse(&std::fs::read_to_string(&p).unwrap()).unwrap_or_else(|e| panic!("{name}: {e:?}"));
            (name, inst)
        })
        .collect();
    out.sort_by(|a, b| a.0.cmp(&b.0));
    out
}

pub fn graded_instances() -> Vec<(String, Instance)> {
    shipped_instances().into_iter().filter(|(_, i)| !i.is_integer()).collect()
}

pub fn integer_instances() -> Vec<(String, Instance)> {
    shipped_instances().into_iter().filter(|(_, i)| i.is_integer()).collect()
}
