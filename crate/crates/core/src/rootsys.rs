//! Exact root-system combinatorics of the simple complex Lie algebras,
//! including the data of the height grading: the grading element x₀ with
//! αᵢ(x₀) = 1, the highest root ψ, and h = ψ(x₀).
//!
//! Roots are stored as integer coefficient vectors over the simple roots.
//! Elements of the real Cartan t_ℝ are handled in two coordinate systems:
//!
//! * "sharp" coordinates: coefficients over the basis {αᵢ♯}, where αᵢ♯ is the
//!   Killing-dual of the simple root αᵢ (the Cartan part of the normalized
//!   Chevalley basis).
//! * "epsilon" coordinates: the functional values (α₁(x), …, α_ℓ(x)), i.e.
//!   coefficients over the dual basis εᵢ with αᵢ(εⱼ) = δᵢⱼ.
//!
//! The Killing form restricted to t_ℝ is represented by the exact Gram matrix
//! K with K_{ij} = B(αᵢ♯, αⱼ♯). Since B(x, y) = Σ_{φ∈Δ} φ(x)φ(y), the matrix
//! K is the exact inverse of M = Σ_{φ∈Δ} c_φ c_φᵀ over the integer coefficient
//! vectors c_φ, which also makes the εⱼ integral in sharp coordinates
//! (εⱼ = Σᵢ M_{ij} αᵢ♯).

use crate::error::{Error, Result};
use crate::linalg::invert_rat;
use crate::scalar::{rat_int, rat_to_f64, Rat};
use num::traits::Zero;
use serde::{Deserialize, Serialize};
use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

/// The seven families of simple complex Lie algebras.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash, Serialize, Deserialize)]
pub enum Family {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = match self {
            Family::A => 'A',
            Family::B => 'B',
            Family::C => 'C',
            Family::D => 'D',
            Family::E => 'E',
            Family::F => 'F',
            Family::G => 'G',
        };
        write!(f, "{}", c)
    }
}

/// A simple type such as A₂ or G₂, validated against the legal rank range of
/// its family.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash, Serialize, Deserialize)]
pub struct SimpleType {
    pub family: Family,
    pub rank: usize,
}

impl SimpleType {
    pub fn new(family: Family, rank: usize) -> Result<Self> {
        let ok = match family {
            Family::A => rank >= 1,
            Family::B => rank >= 2,
            Family::C => rank >= 3,
            Family::D => rank >= 4,
            Family::E => (6..=8).contains(&rank),
            Family::F => rank == 4,
            Family::G => rank == 2,
        };
        if ok {
            Ok(SimpleType { family, rank })
        } else {
            Err(Error::input(format!(
                "rank {} is not valid for family {}",
                rank, family
            )))
        }
    }

    /// Cartan matrix with the convention a[i][j] = 2(αᵢ,αⱼ)/(αⱼ,αⱼ).
    pub fn cartan_matrix(&self) -> Vec<Vec<i64>> {
        let l = self.rank;
        let mut a = vec![vec![0i64; l]; l];
        for (i, row) in a.iter_mut().enumerate() {
            row[i] = 2;
        }
        let mut bond = |i: usize, j: usize| {
            a[i][j] = -1;
            a[j][i] = -1;
        };
        match self.family {
            Family::A => {
                for i in 0..l.saturating_sub(1) {
                    bond(i, i + 1);
                }
            }
            Family::B => {
                for i in 0..l - 1 {
                    bond(i, i + 1);
                }
                // α_ℓ short: 2(α_{ℓ-1},α_ℓ)/(α_ℓ,α_ℓ) = -2
                a[l - 2][l - 1] = -2;
            }
            Family::C => {
                for i in 0..l - 1 {
                    bond(i, i + 1);
                }
                // α_ℓ long: 2(α_ℓ,α_{ℓ-1})/(α_{ℓ-1},α_{ℓ-1}) = -2
                a[l - 1][l - 2] = -2;
            }
            Family::D => {
                // chain 0-1-...-(l-2) plus the fork (l-3, l-1)
                for i in 0..l - 2 {
                    bond(i, i + 1);
                }
                bond(l - 3, l - 1);
            }
            Family::E => {
                // Bourbaki numbering: node 2 hangs off node 4 of the chain
                // 1-3-4-5-...; zero-indexed edges:
                bond(0, 2);
                bond(2, 3);
                bond(1, 3);
                for i in 3..l - 1 {
                    bond(i, i + 1);
                }
            }
            Family::F => {
                bond(0, 1);
                bond(2, 3);
                // α₂ long, α₃ short
                a[1][2] = -2;
                a[2][1] = -1;
            }
            Family::G => {
                // α₁ short, α₂ long
                a[0][1] = -1;
                a[1][0] = -3;
            }
        }
        a
    }

    /// Number of roots of the classical root system, used as a consistency
    /// check on the reflection closure.
    pub fn num_roots(&self) -> usize {
        let l = self.rank;
        match self.family {
            Family::A => l * (l + 1),
            Family::B | Family::C => 2 * l * l,
            Family::D => 2 * l * (l - 1),
            Family::E => match l {
                6 => 72,
                7 => 126,
                _ => 240,
            },
            Family::F => 48,
            Family::G => 12,
        }
    }
}

impl fmt::Display for SimpleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.family, self.rank)
    }
}

impl FromStr for SimpleType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.len() < 2 {
            return Err(Error::input(format!("cannot parse simple type '{}'", s)));
        }
        let family = match s.chars().next().unwrap().to_ascii_uppercase() {
            'A' => Family::A,
            'B' => Family::B,
            'C' => Family::C,
            'D' => Family::D,
            'E' => Family::E,
            'F' => Family::F,
            'G' => Family::G,
            c => return Err(Error::input(format!("unknown family '{}'", c))),
        };
        let rank: usize = s[1..]
            .parse()
            .map_err(|_| Error::input(format!("cannot parse rank in '{}'", s)))?;
        SimpleType::new(family, rank)
    }
}

/// A root as an integer coefficient vector over the simple roots.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct Root(pub Vec<i64>);

impl Root {
    pub fn simple(l: usize, i: usize) -> Root {
        let mut c = vec![0; l];
        c[i] = 1;
        Root(c)
    }

    pub fn height(&self) -> i64 {
        self.0.iter().sum()
    }

    pub fn neg(&self) -> Root {
        Root(self.0.iter().map(|c| -c).collect())
    }

    pub fn is_positive(&self) -> bool {
        self.height() > 0
    }

    pub fn add(&self, other: &Root) -> Root {
        Root(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    pub fn sub(&self, other: &Root) -> Root {
        Root(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a - b)
                .collect(),
        )
    }
}

impl fmt::Display for Root {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", c)?;
        }
        write!(f, ")")
    }
}

/// Exact root data of a simple complex Lie algebra.
#[derive(Clone, Debug)]
pub struct RootSystem {
    pub stype: SimpleType,
    pub cartan: Vec<Vec<i64>>,
    /// Positive roots sorted by (height, lexicographic coefficients); this
    /// ordering is the fixed total order used for the Chevalley sign
    /// convention downstream.
    pub positive: Vec<Root>,
    pub highest: Root,
    /// Coefficients ψᵢ of the highest root.
    pub psi: Vec<i64>,
    /// h = ψ(x₀) = Σψᵢ.
    pub h: i64,
    /// Killing Gram matrix K_{ij} = B(αᵢ♯, αⱼ♯), exact.
    pub killing_gram: Vec<Vec<Rat>>,
    /// M = K⁻¹ = Σ_{φ∈Δ} c_φ c_φᵀ, integral; column j gives εⱼ in sharp
    /// coordinates.
    pub gram_inv: Vec<Vec<Rat>>,
}

/// Reflection of a root in the simple root αⱼ, computed from the Cartan
/// matrix: s_j(β) = β − ⟨β, αⱼ∨⟩ αⱼ.
fn reflect(cartan: &[Vec<i64>], beta: &Root, j: usize) -> Root {
    let pairing: i64 = beta
        .0
        .iter()
        .enumerate()
        .map(|(i, &c)| c * cartan[i][j])
        .sum();
    let mut out = beta.clone();
    out.0[j] -= pairing;
    out
}

/// Closure of a set of roots under all simple reflections.
pub fn reflection_closure(cartan: &[Vec<i64>], seed: &[Root]) -> Vec<Root> {
    let l = cartan.len();
    let mut seen: HashSet<Root> = seed.iter().cloned().collect();
    let mut queue: Vec<Root> = seed.to_vec();
    while let Some(r) = queue.pop() {
        for j in 0..l {
            let image = reflect(cartan, &r, j);
            if seen.insert(image.clone()) {
                queue.push(image);
            }
        }
    }
    let mut all: Vec<Root> = seen.into_iter().collect();
    all.sort_by_key(|r| (r.height(), r.0.clone()));
    all
}

/// Build the full root system of a simple type.
pub fn build_root_system(stype: SimpleType) -> Result<RootSystem> {
    let l = stype.rank;
    let cartan = stype.cartan_matrix();
    let seed: Vec<Root> = (0..l).map(|i| Root::simple(l, i)).collect();
    let all = reflection_closure(&cartan, &seed);

    for r in &all {
        let pos = r.0.iter().all(|&c| c >= 0);
        let neg = r.0.iter().all(|&c| c <= 0);
        if !(pos || neg) {
            return Err(Error::numeric(format!(
                "closure produced a mixed-sign vector {}",
                r
            )));
        }
    }
    if all.len() != stype.num_roots() {
        return Err(Error::numeric(format!(
            "closure of {} found {} roots, expected {}",
            stype,
            all.len(),
            stype.num_roots()
        )));
    }

    let positive: Vec<Root> = all.iter().filter(|r| r.is_positive()).cloned().collect();
    let hmax = positive.iter().map(|r| r.height()).max().unwrap();
    let top: Vec<&Root> = positive.iter().filter(|r| r.height() == hmax).collect();
    if top.len() != 1 {
        return Err(Error::numeric(format!(
            "highest root of {} is not unique",
            stype
        )));
    }
    let highest = top[0].clone();
    let psi = highest.0.clone();

    // M = Σ_{φ∈Δ} c_φ c_φᵀ = 2 Σ_{φ∈Δ⁺} c_φ c_φᵀ;  K = M⁻¹.
    let mut m = vec![vec![Rat::zero(); l]; l];
    for r in &positive {
        for i in 0..l {
            for j in 0..l {
                m[i][j] += rat_int(2 * r.0[i] * r.0[j]);
            }
        }
    }
    let killing_gram = invert_rat(&m)?;

    Ok(RootSystem {
        stype,
        cartan,
        positive,
        highest,
        psi,
        h: hmax,
        killing_gram,
        gram_inv: m,
    })
}

impl RootSystem {
    pub fn rank(&self) -> usize {
        self.stype.rank
    }

    /// dim g = ℓ + |Δ|.
    pub fn dim_g(&self) -> usize {
        self.rank() + 2 * self.positive.len()
    }

    /// All roots: positives in order, then their negatives in the same order.
    pub fn all_roots(&self) -> Vec<Root> {
        let mut v = self.positive.clone();
        v.extend(self.positive.iter().map(Root::neg));
        v
    }

    /// Roots at height j (the root-space part of g^{(j)}; g^{(0)} is the
    /// Cartan subalgebra and contains no roots).
    pub fn grading_piece(&self, j: i64) -> Vec<Root> {
        if j == 0 || j.abs() > self.h {
            return Vec::new();
        }
        self.all_roots()
            .into_iter()
            .filter(|r| r.height() == j)
            .collect()
    }

    /// Π^Q = {α₁, …, α_ℓ, −ψ}: the roots whose spaces span the ω-eigenspace g₁
    /// of Ad(w); each has height ≡ 1 mod (h+1).
    pub fn weight_one_eigenroots(&self) -> Vec<Root> {
        let l = self.rank();
        let mut v: Vec<Root> = (0..l).map(|i| Root::simple(l, i)).collect();
        v.push(self.highest.neg());
        v
    }

    /// Exact Killing pairing (φ, φ')_B = c_φᵀ K c_φ' of two roots.
    pub fn root_pairing(&self, a: &Root, b: &Root) -> Rat {
        let l = self.rank();
        let mut acc = Rat::zero();
        for i in 0..l {
            if a.0[i] == 0 {
                continue;
            }
            for j in 0..l {
                if b.0[j] == 0 {
                    continue;
                }
                acc += rat_int(a.0[i] * b.0[j]) * &self.killing_gram[i][j];
            }
        }
        acc
    }

    /// Exact squared Killing length of a root.
    pub fn root_len_sq(&self, a: &Root) -> Rat {
        self.root_pairing(a, a)
    }

    /// φ(x) for x in sharp coordinates, exact: c_φᵀ K x.
    pub fn root_value(&self, phi: &Root, x_sharp: &[Rat]) -> Rat {
        let l = self.rank();
        let mut acc = Rat::zero();
        for i in 0..l {
            if phi.0[i] == 0 {
                continue;
            }
            for j in 0..l {
                acc += rat_int(phi.0[i]) * &self.killing_gram[i][j] * &x_sharp[j];
            }
        }
        acc
    }

    /// φ(x) for x in sharp coordinates, floating point.
    pub fn root_value_f64(&self, phi: &Root, x_sharp: &[f64]) -> f64 {
        let l = self.rank();
        let mut acc = 0.0;
        for i in 0..l {
            if phi.0[i] == 0 {
                continue;
            }
            for j in 0..l {
                acc += phi.0[i] as f64 * rat_to_f64(&self.killing_gram[i][j]) * x_sharp[j];
            }
        }
        acc
    }

    /// x₀ = Σεᵢ in sharp coordinates (integral: row sums of M).
    pub fn x0_sharp(&self) -> Vec<Rat> {
        let l = self.rank();
        (0..l)
            .map(|i| {
                let mut s = Rat::zero();
                for j in 0..l {
                    s += &self.gram_inv[i][j];
                }
                s
            })
            .collect()
    }

    /// Convert ε coordinates (functional values αᵢ(x)) to sharp coordinates:
    /// x = Σ vⱼ εⱼ = Σᵢ (Σⱼ M_{ij} vⱼ) αᵢ♯.
    pub fn eps_to_sharp(&self, v: &[f64]) -> Vec<f64> {
        let l = self.rank();
        (0..l)
            .map(|i| {
                (0..l)
                    .map(|j| rat_to_f64(&self.gram_inv[i][j]) * v[j])
                    .sum()
            })
            .collect()
    }

    /// Convert sharp coordinates to ε coordinates: vᵢ = αᵢ(x) = (K x)ᵢ.
    pub fn sharp_to_eps(&self, x: &[f64]) -> Vec<f64> {
        let l = self.rank();
        (0..l)
            .map(|i| {
                (0..l)
                    .map(|j| rat_to_f64(&self.killing_gram[i][j]) * x[j])
                    .sum()
            })
            .collect()
    }

    /// Killing norm √B(x,x) of a sharp-coordinate vector.
    pub fn killing_norm_f64(&self, x: &[f64]) -> f64 {
        let l = self.rank();
        let mut acc = 0.0;
        for i in 0..l {
            for j in 0..l {
                acc += x[i] * rat_to_f64(&self.killing_gram[i][j]) * x[j];
            }
        }
        acc.max(0.0).sqrt()
    }

    pub fn killing_gram_f64(&self) -> Vec<Vec<f64>> {
        self.killing_gram
            .iter()
            .map(|row| row.iter().map(rat_to_f64).collect())
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rs(s: &str) -> RootSystem {
        build_root_system(s.parse().unwrap()).unwrap()
    }

    #[test]
    fn invalid_ranks_rejected() {
        assert!("B1".parse::<SimpleType>().is_err());
        assert!("C2".parse::<SimpleType>().is_err());
        assert!("D3".parse::<SimpleType>().is_err());
        assert!("E5".parse::<SimpleType>().is_err());
        assert!("F3".parse::<SimpleType>().is_err());
        assert!("G3".parse::<SimpleType>().is_err());
        assert!("A1".parse::<SimpleType>().is_ok());
    }

    #[test]
    fn a2_positive_roots_and_highest() {
        let r = rs("A2");
        let expected = vec![
            Root(vec![0, 1]),
            Root(vec![1, 0]),
            Root(vec![1, 1]),
        ];
        let mut got = r.positive.clone();
        got.sort_by_key(|x| x.0.clone());
        assert_eq!(got, expected);
        assert_eq!(r.highest, Root(vec![1, 1]));
        assert_eq!(r.psi, vec![1, 1]);
        assert_eq!(r.h, 2);
    }

    #[test]
    fn a1_trivial() {
        let r = rs("A1");
        assert_eq!(r.positive, vec![Root(vec![1])]);
        assert_eq!(r.h, 1);
        // (α,α)_B = 1/2 for sl₂ under the honest Killing form
        assert_eq!(r.root_len_sq(&r.highest), crate::scalar::rat(1, 2));
    }

    #[test]
    fn g2_highest_root() {
        let r = rs("G2");
        assert_eq!(r.positive.len(), 6);
        assert_eq!(r.highest, Root(vec![3, 2]));
        assert_eq!(r.h, 5);
        assert_eq!(r.dim_g(), 14);
    }

    #[test]
    fn classical_dimensions() {
        for (name, dim) in [
            ("A1", 3),
            ("A2", 8),
            ("A3", 15),
            ("A4", 24),
            ("B2", 10),
            ("C3", 21),
            ("D4", 28),
            ("G2", 14),
            ("F4", 52),
            ("E6", 78),
        ] {
            assert_eq!(rs(name).dim_g(), dim, "{}", name);
        }
    }

    #[test]
    fn heights_mirror_and_psi_sum() {
        for name in ["A2", "A4", "B2", "C3", "D4", "G2", "F4"] {
            let r = rs(name);
            assert_eq!(r.psi.iter().sum::<i64>(), r.h, "{}", name);
            for j in 1..=r.h {
                assert_eq!(
                    r.grading_piece(j).len(),
                    r.grading_piece(-j).len(),
                    "{} height {}",
                    name,
                    j
                );
            }
            assert!(r.grading_piece(r.h + 1).is_empty());
            assert_eq!(r.grading_piece(r.h), vec![r.highest.clone()]);
        }
    }

    #[test]
    fn weight_one_eigenroots_examples() {
        let r = rs("A2");
        let pi_q = r.weight_one_eigenroots();
        assert_eq!(pi_q.len(), 3);
        assert_eq!(pi_q[2], Root(vec![-1, -1]));
        // heights ≡ 1 mod h+1
        for phi in &pi_q {
            assert_eq!(phi.height().rem_euclid(r.h + 1), 1);
        }
        let g = rs("G2");
        assert_eq!(g.weight_one_eigenroots().len(), 3);
        for phi in &g.weight_one_eigenroots() {
            assert_eq!(phi.height().rem_euclid(g.h + 1), 1);
        }
        let a1 = rs("A1");
        assert_eq!(
            a1.weight_one_eigenroots(),
            vec![Root(vec![1]), Root(vec![-1])]
        );
    }

    #[test]
    fn closure_is_idempotent() {
        for name in ["A3", "B2", "G2", "C3"] {
            let r = rs(name);
            let again = reflection_closure(&r.cartan, &r.all_roots());
            assert_eq!(again.len(), r.all_roots().len(), "{}", name);
        }
    }

    #[test]
    fn gram_matches_cartan_ratios() {
        // 2 K_{ij} / K_{jj} must reproduce the Cartan matrix
        for name in ["A2", "B2", "C3", "D4", "G2", "F4"] {
            let r = rs(name);
            let l = r.rank();
            for i in 0..l {
                for j in 0..l {
                    let lhs = rat_int(2) * &r.killing_gram[i][j] / &r.killing_gram[j][j];
                    assert_eq!(lhs, rat_int(r.cartan[i][j]), "{} ({},{})", name, i, j);
                }
            }
        }
    }

    #[test]
    fn x0_evaluates_to_one_on_simples() {
        for name in ["A2", "B2", "G2", "D4"] {
            let r = rs(name);
            let x0 = r.x0_sharp();
            for i in 0..r.rank() {
                let v = r.root_value(&Root::simple(r.rank(), i), &x0);
                assert_eq!(v, rat_int(1), "{} α_{}", name, i);
            }
            assert_eq!(r.root_value(&r.highest, &x0), rat_int(r.h), "{}", name);
        }
    }

    #[test]
    fn grading_piece_examples() {
        let a2 = rs("A2");
        let g1 = a2.grading_piece(1);
        assert_eq!(g1.len(), 2);
        assert!(a2.grading_piece(3).is_empty());
        let g2 = rs("G2");
        assert_eq!(g2.grading_piece(5), vec![Root(vec![3, 2])]);
    }
}
