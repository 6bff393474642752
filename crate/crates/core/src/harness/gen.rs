//! Deterministic instance generators: complex-Gaussian coefficients per
//! stream, plus the adversarial corner cases every check mixes in (single
//! monomial, equal coefficients, sign patterns).

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::poly::{DirichletPoly, MultiIndex, SubsetIndex, VPoly, WalshPoly};
use crate::spaces::{NormedSpace, Vector};

/// Stream `stream` of the generator seeded with `seed`; the pair fully
/// determines every draw, independent of scheduling.
pub fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Standard complex Gaussian via Box-Muller.
pub fn gaussian_complex(rng: &mut ChaCha8Rng) -> Complex64 {
    let u: f64 = 1.0 - rng.gen::<f64>();
    let v: f64 = rng.gen();
    let radius = (-2.0 * u.ln()).sqrt();
    let angle = 2.0 * std::f64::consts::PI * v;
    Complex64::new(radius * angle.cos(), radius * angle.sin())
}

pub fn gaussian_vector(rng: &mut ChaCha8Rng, dim: usize) -> Vector {
    Vector::new((0..dim).map(|_| gaussian_complex(rng)).collect())
}

/// A nonzero Gaussian vector.
pub fn nonzero_gaussian_vector(rng: &mut ChaCha8Rng, dim: usize) -> Vector {
    loop {
        let v = gaussian_vector(rng, dim);
        if !v.is_zero() {
            return v;
        }
    }
}

/// Coefficients for a degree-one instance `sum x_i z_i`.
pub fn degree_one_coeffs(rng: &mut ChaCha8Rng, space: &NormedSpace, n: usize) -> Vec<Vector> {
    (0..n).map(|_| gaussian_vector(rng, space.dim())).collect()
}

/// The degree-one polynomial built from explicit coefficients.
pub fn degree_one_poly(space: &NormedSpace, coeffs: &[Vector]) -> VPoly {
    let n = coeffs.len();
    let mut p = VPoly::new(n, space.clone());
    for (i, x) in coeffs.iter().enumerate() {
        let mut exps = vec![0u32; n];
        exps[i] = 1;
        p.add_term(MultiIndex::new(exps), x.clone()).expect("consistent shape");
    }
    p
}

/// Degree shape of a generated torus polynomial.
#[derive(Clone, Copy, Debug)]
pub enum DegreeSpec {
    /// Random support with total degree at most `m`.
    AtMost(u32),
    /// Every term of total degree exactly `m`.
    Homogeneous(u32),
    /// Tetrahedral with `|A| <= m`.
    Tetrahedral(u32),
    /// Tetrahedral and `m`-homogeneous.
    TetrahedralHomogeneous(u32),
}

/// Random sparse polynomial on `T^n_vars` with Gaussian coefficients.
pub fn random_vpoly(
    rng: &mut ChaCha8Rng,
    space: &NormedSpace,
    n_vars: usize,
    degree: DegreeSpec,
    n_terms: usize,
) -> VPoly {
    let mut p = VPoly::new(n_vars, space.clone());
    for _ in 0..n_terms {
        let alpha = random_index(rng, n_vars, degree);
        p.add_term(alpha, gaussian_vector(rng, space.dim()))
            .expect("consistent shape");
    }
    p
}

fn random_index(rng: &mut ChaCha8Rng, n_vars: usize, degree: DegreeSpec) -> MultiIndex {
    match degree {
        DegreeSpec::AtMost(m) => {
            let d = rng.gen_range(0..=m);
            composition(rng, n_vars, d)
        }
        DegreeSpec::Homogeneous(m) => composition(rng, n_vars, m),
        DegreeSpec::Tetrahedral(m) => {
            let d = rng.gen_range(0..=m.min(n_vars as u32));
            subset_index(rng, n_vars, d as usize)
        }
        DegreeSpec::TetrahedralHomogeneous(m) => {
            subset_index(rng, n_vars, (m.min(n_vars as u32)) as usize)
        }
    }
}

/// Distributes `d` exponent units over `n_vars` variables.
fn composition(rng: &mut ChaCha8Rng, n_vars: usize, d: u32) -> MultiIndex {
    let mut exps = vec![0u32; n_vars];
    for _ in 0..d {
        exps[rng.gen_range(0..n_vars)] += 1;
    }
    MultiIndex::new(exps)
}

/// A 0/1 exponent vector with exactly `card` ones.
fn subset_index(rng: &mut ChaCha8Rng, n_vars: usize, card: usize) -> MultiIndex {
    let mut vars: Vec<usize> = (0..n_vars).collect();
    for i in 0..card.min(n_vars) {
        let j = rng.gen_range(i..n_vars);
        vars.swap(i, j);
    }
    let mut exps = vec![0u32; n_vars];
    for &v in vars.iter().take(card.min(n_vars)) {
        exps[v] = 1;
    }
    MultiIndex::new(exps)
}

/// Random sparse Walsh polynomial with `|A| <= max_card`.
pub fn random_walsh(
    rng: &mut ChaCha8Rng,
    space: &NormedSpace,
    n_vars: usize,
    max_card: u32,
    n_terms: usize,
) -> WalshPoly {
    let mut w = WalshPoly::new(n_vars, space.clone());
    for _ in 0..n_terms {
        let card = rng.gen_range(0..=max_card.min(n_vars as u32)) as usize;
        let idx = subset_index(rng, n_vars, card);
        let subset: SubsetIndex = idx
            .exponents()
            .iter()
            .enumerate()
            .filter(|&(_, &e)| e == 1)
            .map(|(i, _)| i as u32 + 1)
            .collect();
        w.add_term(subset, gaussian_vector(rng, space.dim()))
            .expect("members within n_vars");
    }
    w
}

/// Random Dirichlet polynomial supported on `[1..=max_index]`.
pub fn random_dirichlet(
    rng: &mut ChaCha8Rng,
    space: &NormedSpace,
    max_index: u64,
    n_terms: usize,
) -> DirichletPoly {
    let mut d = DirichletPoly::new(space.clone());
    for _ in 0..n_terms {
        let n = rng.gen_range(1..=max_index);
        d.add_term(n, gaussian_vector(rng, space.dim()))
            .expect("positive index");
    }
    d
}

/// Corner-case torus polynomials: one monomial, equal coefficients on a
/// spread support, and a +/- sign pattern.
pub fn corner_vpolys(space: &NormedSpace, n_vars: usize, degree: DegreeSpec) -> Vec<VPoly> {
    let dim = space.dim();
    let e0 = {
        let mut v = Vector::zeros(dim);
        v.coords_mut()[0] = Complex64::new(1.0, 0.0);
        v
    };
    let (max_deg, tetrahedral, homogeneous) = match degree {
        DegreeSpec::AtMost(m) => (m, false, false),
        DegreeSpec::Homogeneous(m) => (m, false, true),
        DegreeSpec::Tetrahedral(m) => (m.min(n_vars as u32), true, false),
        DegreeSpec::TetrahedralHomogeneous(m) => (m.min(n_vars as u32), true, true),
    };
    let index_of = |d: u32| -> MultiIndex {
        let mut exps = vec![0u32; n_vars];
        if tetrahedral {
            exps.iter_mut().take(d as usize).for_each(|e| *e = 1);
        } else {
            exps[0] = d;
        }
        MultiIndex::new(exps)
    };

    let mut singles = VPoly::new(n_vars, space.clone());
    singles.add_term(index_of(max_deg), e0.clone()).expect("shape");

    let degrees: Vec<u32> = if homogeneous {
        vec![max_deg]
    } else {
        (0..=max_deg).collect()
    };

    let mut equal = VPoly::new(n_vars, space.clone());
    let mut signs = VPoly::new(n_vars, space.clone());
    for (pos, &d) in degrees.iter().enumerate() {
        // spread supports across variables by rotating the leading variable
        let mut exps = vec![0u32; n_vars];
        if tetrahedral {
            for i in 0..d as usize {
                exps[(i + pos) % n_vars] = 1;
            }
        } else if d > 0 {
            exps[pos % n_vars] = d;
        }
        let alpha = MultiIndex::new(exps);
        equal.add_term(alpha.clone(), e0.clone()).expect("shape");
        let sign = if pos % 2 == 0 { 1.0 } else { -1.0 };
        signs
            .add_term(alpha, e0.scaled(Complex64::new(sign, 0.0)))
            .expect("shape");
    }
    let mut out = vec![singles];
    if !equal.is_zero() {
        out.push(equal);
    }
    if !signs.is_zero() && degrees.len() > 1 {
        out.push(signs);
    }
    out
}
