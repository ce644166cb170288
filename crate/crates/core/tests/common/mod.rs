#![allow(dead_code)]

use std::collections::BTreeMap;
use std::sync::{Mutex, OnceLock};

use pi_conn::classifier::BasicClass;
use pi_conn::fixtures;
use pi_conn::scalar::Scalar;
use pi_conn::structure::PiManifold;
use pi_conn::synthetic::{class_basis, random_member};
use pi_conn::tensor::Tensor;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn base() -> PiManifold {
    fixtures::ex_0()
}

/// Class bases are shared across tests; computing them is the slow part.
pub fn basis(class: BasicClass) -> Vec<Tensor> {
    static CACHE: OnceLock<Mutex<BTreeMap<BasicClass, Vec<Tensor>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(b) = cache.lock().unwrap().get(&class) {
        return b.clone();
    }
    let b = class_basis(&base(), Some(class));
    cache.lock().unwrap().insert(class, b.clone());
    b
}

pub fn member(class: BasicClass, seed: u64) -> Tensor {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_member(&basis(class), base().dim(), &mut rng)
}

pub fn sum_of(classes: &[BasicClass], seed: u64) -> Tensor {
    classes
        .iter()
        .enumerate()
        .fold(Tensor::covariant(base().dim(), 3), |acc, (k, c)| {
            acc.add(&member(*c, seed.wrapping_mul(31).wrapping_add(k as u64)))
        })
}

/// `dη(x,y) = F(y,φx,ξ) - F(x,φy,ξ)`.
pub fn d_eta_from_f(inst: &PiManifold, f: &Tensor) -> Tensor {
    Tensor::covariant_from_fn(inst.dim(), 2, |i| {
        let (x, y) = (inst.e(i[0]), inst.e(i[1]));
        f.at(&[y, inst.phi_e(i[0]), inst.xi()]) - f.at(&[x, inst.phi_e(i[1]), inst.xi()])
    })
}

pub fn q(n: i64, d: i64) -> Scalar {
    Scalar::frac(n, d)
}
