//! The evolution-operator specification shared by every scale of the
//! hierarchy.
//!
//! A [`LiouvillianSpec`] describes one generator of motion for a set of
//! coordinates: a kinetic part (one mass per coordinate), a Hamiltonian
//! potential `Σ c_t · P_t(coords)`, and decoherence terms `(γ, g)` acting as
//! `γ {g, {g, ·}}` on classical densities and `−(γ/ħ²)[g, [g, ·]]` on density
//! matrices. Both term lists are stored normalized: polynomials are primitive
//! (coprime integer coefficients, positive leading sign) with numeric content
//! folded into the coefficient — for decoherence as `γ·s²`, which is exact
//! because the double bracket is bilinear in its generator.

use std::fmt;

use num::{Signed, Zero};

use crate::error::AlgebraError;
use crate::poly::{coeff_text, Coeff, Polynomial};
use crate::system::ParticleSystem;

/// One potential contribution `coefficient · polynomial`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HamiltonianTerm {
    pub coefficient: Coeff,
    /// Primitive polynomial over the full coordinate list of the spec.
    pub polynomial: Polynomial,
}

/// One decoherence channel `strength · {generator, {generator, ·}}`
/// (double commutator scaled by `1/ħ²` in the quantum realization).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecoherenceTerm {
    /// Nonnegative rate; negative values would break positivity of the
    /// evolution (the quantum form is Lindblad with Hermitian generator).
    pub strength: Coeff,
    /// Primitive non-constant polynomial over the spec coordinates.
    pub generator: Polynomial,
}

/// A scale-`level` evolution operator: kinetic masses, potential terms, and
/// double-bracket decoherence channels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LiouvillianSpec {
    /// Hierarchy depth: 0 for the microscopic system, +1 per reduction.
    pub level: u32,
    pub coordinates: Vec<String>,
    /// One positive mass per coordinate; fixes the kinetic part `Σ p²/2μ`.
    pub masses: Vec<Coeff>,
    pub hamiltonian: Vec<HamiltonianTerm>,
    pub decoherence: Vec<DecoherenceTerm>,
}

/// Display order for stored terms: ascending total degree, then canonical
/// text. Keeps golden files and logs stable across runs.
fn term_order(a: &Polynomial, b: &Polynomial) -> std::cmp::Ordering {
    a.total_degree()
        .cmp(&b.total_degree())
        .then_with(|| a.canonical_text().cmp(&b.canonical_text()))
}

/// Drop the constant monomial: additive constants in potentials and
/// generators act as the zero operator.
fn strip_constant(p: &Polynomial) -> Polynomial {
    let c = p
        .terms()
        .find(|(e, _)| e.iter().all(|&x| x == 0))
        .map(|(_, c)| c.clone());
    match c {
        Some(c) => p.sub(&Polynomial::constant(p.vars(), c)),
        None => p.clone(),
    }
}

impl LiouvillianSpec {
    /// Kinetic-only spec over the given coordinates.
    pub fn new(
        level: u32,
        coordinates: Vec<String>,
        masses: Vec<Coeff>,
    ) -> Result<Self, AlgebraError> {
        let spec = LiouvillianSpec {
            level,
            coordinates,
            masses,
            hamiltonian: Vec::new(),
            decoherence: Vec::new(),
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Microscopic (level-0) operator of a particle ensemble: coordinates
    /// `x1..xN`, per-pair potential `q_{j,k} U(x_j − x_k)` and per-particle
    /// external potential `q_j V(x_j)`.
    pub fn from_system(system: &ParticleSystem) -> Result<Self, AlgebraError> {
        system.validate()?;
        let n = system.len();
        let coords: Vec<String> = (1..=n).map(|j| format!("x{j}")).collect();
        let mut spec = Self::new(0, coords.clone(), system.masses.clone())?;
        for (&(j, k), q) in &system.pair_coupling {
            let xj = Polynomial::var(&coords, &coords[j]).unwrap();
            let xk = Polynomial::var(&coords, &coords[k]).unwrap();
            let shape = system.pair_potential.substitute(&[xj.sub(&xk)]);
            spec.add_potential(shape.scale(q))?;
        }
        for (j, q) in system.external_coupling.iter().enumerate() {
            if q.is_zero() {
                continue;
            }
            let xj = Polynomial::var(&coords, &coords[j]).unwrap();
            let shape = system.external_potential.substitute(&[xj]);
            spec.add_potential(shape.scale(q))?;
        }
        Ok(spec)
    }

    pub fn n_coordinates(&self) -> usize {
        self.coordinates.len()
    }

    /// Add a potential contribution, merging with any stored term of the
    /// same primitive shape. Constant offsets are dynamically inert and
    /// dropped silently; exact cancellations remove the term.
    pub fn add_potential(&mut self, contribution: Polynomial) -> Result<(), AlgebraError> {
        let embedded = contribution
            .embed(&self.coordinates)
            .map_err(|e| match e {
                AlgebraError::UnknownVariable(v) => AlgebraError::ForeignVariable(v),
                other => other,
            })?;
        let (content, prim) = strip_constant(&embedded).primitive();
        if content.is_zero() {
            return Ok(());
        }
        if let Some(t) = self.hamiltonian.iter_mut().find(|t| t.polynomial == prim) {
            t.coefficient += content;
            if t.coefficient.is_zero() {
                self.hamiltonian.retain(|t| !t.coefficient.is_zero());
            }
        } else {
            self.hamiltonian.push(HamiltonianTerm {
                coefficient: content,
                polynomial: prim,
            });
            self.hamiltonian
                .sort_by(|a, b| term_order(&a.polynomial, &b.polynomial));
        }
        Ok(())
    }

    /// Add a decoherence channel. The generator is reduced to its primitive
    /// part with the squared content folded into the strength
    /// (`γ{s·ĝ, {s·ĝ, ·}} = γs²{ĝ, {ĝ, ·}}`); channels with identical
    /// generators are independent noises, so their strengths add. Constant
    /// generators act as zero and are dropped.
    pub fn add_decoherence(
        &mut self,
        strength: Coeff,
        generator: Polynomial,
    ) -> Result<(), AlgebraError> {
        if strength.is_negative() {
            return Err(AlgebraError::NegativeStrength(generator.canonical_text()));
        }
        let embedded = generator.embed(&self.coordinates).map_err(|e| match e {
            AlgebraError::UnknownVariable(v) => AlgebraError::ForeignVariable(v),
            other => other,
        })?;
        let core = strip_constant(&embedded);
        if core.is_zero() || strength.is_zero() {
            return Ok(());
        }
        let (content, prim) = core.primitive();
        let folded = strength * &content * &content;
        if let Some(t) = self.decoherence.iter_mut().find(|t| t.generator == prim) {
            t.strength += folded;
        } else {
            self.decoherence.push(DecoherenceTerm {
                strength: folded,
                generator: prim,
            });
            self.decoherence
                .sort_by(|a, b| term_order(&a.generator, &b.generator));
        }
        Ok(())
    }

    /// Check every structural invariant of the stored data.
    pub fn validate(&self) -> Result<(), AlgebraError> {
        if self.coordinates.is_empty() {
            return Err(AlgebraError::BadCoordinates);
        }
        for (i, c) in self.coordinates.iter().enumerate() {
            if c.is_empty() || self.coordinates[..i].contains(c) {
                return Err(AlgebraError::BadCoordinates);
            }
        }
        if self.masses.len() != self.coordinates.len() {
            return Err(AlgebraError::CouplingLengthMismatch {
                expected: self.coordinates.len(),
                found: self.masses.len(),
            });
        }
        for (c, m) in self.coordinates.iter().zip(&self.masses) {
            if !m.is_positive() {
                return Err(AlgebraError::NonPositiveMass(c.clone()));
            }
        }
        for t in &self.hamiltonian {
            if t.polynomial.vars() != self.coordinates.as_slice() {
                return Err(AlgebraError::ForeignVariable(
                    t.polynomial.vars().join(","),
                ));
            }
        }
        for t in &self.decoherence {
            if t.generator.vars() != self.coordinates.as_slice() {
                return Err(AlgebraError::ForeignVariable(t.generator.vars().join(",")));
            }
            if t.strength.is_negative() {
                return Err(AlgebraError::NegativeStrength(t.generator.canonical_text()));
            }
            if t.generator.is_constant() {
                return Err(AlgebraError::ConstantGenerator(
                    t.generator.canonical_text(),
                ));
            }
        }
        Ok(())
    }

    /// Total potential `Σ c_t P_t` as one polynomial over the coordinates.
    pub fn potential_total(&self) -> Polynomial {
        let mut total = Polynomial::zero(&self.coordinates);
        for t in &self.hamiltonian {
            total = total.add(&t.polynomial.scale(&t.coefficient));
        }
        total
    }

    /// Deterministic human-readable rendering (one term per line); the
    /// format golden files are written in.
    pub fn canonical_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("level {}\n", self.level));
        out.push_str(&format!("coordinates {}\n", self.coordinates.join(" ")));
        for (c, m) in self.coordinates.iter().zip(&self.masses) {
            out.push_str(&format!("mass {} = {}\n", c, coeff_text(m)));
        }
        let mut h = self.hamiltonian.clone();
        h.sort_by(|a, b| term_order(&a.polynomial, &b.polynomial));
        for t in &h {
            out.push_str(&format!(
                "potential {} * ({})\n",
                coeff_text(&t.coefficient),
                t.polynomial.canonical_text()
            ));
        }
        let mut g = self.decoherence.clone();
        g.sort_by(|a, b| term_order(&a.generator, &b.generator));
        for t in &g {
            out.push_str(&format!(
                "decoherence {} * ({})\n",
                coeff_text(&t.strength),
                t.generator.canonical_text()
            ));
        }
        out
    }
}

impl fmt::Display for LiouvillianSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.canonical_text())
    }
}

/// Convenience for building one-coordinate specs in tests and scenarios.
pub fn single_coordinate_spec(mass: Coeff) -> LiouvillianSpec {
    LiouvillianSpec::new(0, vec!["x1".to_string()], vec![mass]).unwrap()
}

impl LiouvillianSpec {
    /// True when the spec is purely kinetic.
    pub fn is_free(&self) -> bool {
        self.hamiltonian.is_empty() && self.decoherence.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{rat, ratio};

    fn cluster_example_system() -> ParticleSystem {
        // four identical particles, all-to-all quadratic pair coupling,
        // cubic external potential
        ParticleSystem::uniform(
            vec![rat(1); 4],
            rat(1),
            rat(1),
            Polynomial::univariate("s", &[(2, rat(1))]),
            Polynomial::univariate("x", &[(3, rat(1))]),
        )
    }

    #[test]
    fn from_system_builds_pair_and_external_terms() {
        let spec = LiouvillianSpec::from_system(&cluster_example_system()).unwrap();
        assert_eq!(spec.level, 0);
        assert_eq!(spec.coordinates.len(), 4);
        // 6 pair shapes + 4 external cubes, all distinct primitives
        assert_eq!(spec.hamiltonian.len(), 10);
        assert!(spec.decoherence.is_empty());
        spec.validate().unwrap();
        let text = spec.canonical_text();
        assert!(text.contains("potential 1 * (x1^2 - 2*x1*x2 + x2^2)"));
        assert!(text.contains("potential 1 * (x4^3)"));
        assert!(text.contains("mass x3 = 1"));
    }

    #[test]
    fn equal_shapes_merge_and_cancel() {
        let coords = ["x1", "x2"];
        let mut spec = LiouvillianSpec::new(
            0,
            coords.iter().map(|s| s.to_string()).collect(),
            vec![rat(1), rat(1)],
        )
        .unwrap();
        let d = Polynomial::var(&coords, "x1")
            .unwrap()
            .sub(&Polynomial::var(&coords, "x2").unwrap());
        spec.add_potential(d.pow(2).scale(&rat(3))).unwrap();
        spec.add_potential(d.pow(2).scale(&rat(2))).unwrap();
        assert_eq!(spec.hamiltonian.len(), 1);
        assert_eq!(spec.hamiltonian[0].coefficient, rat(5));
        spec.add_potential(d.pow(2).scale(&rat(-5))).unwrap();
        assert!(spec.hamiltonian.is_empty());
    }

    #[test]
    fn constant_offsets_are_inert() {
        let mut spec = single_coordinate_spec(rat(1));
        let shifted = Polynomial::univariate("x1", &[(2, rat(1)), (0, rat(7))]);
        spec.add_potential(shifted).unwrap();
        assert_eq!(spec.potential_total().canonical_text(), "x1^2");
        spec.add_potential(Polynomial::constant(&["x1"], rat(9)))
            .unwrap();
        assert_eq!(spec.hamiltonian.len(), 1);
    }

    #[test]
    fn generator_content_folds_as_its_square() {
        // γ = 3 with generator 2x: same operator as γ = 12 with generator x
        let mut spec = single_coordinate_spec(rat(1));
        spec.add_decoherence(rat(3), Polynomial::univariate("x1", &[(1, rat(2))]))
            .unwrap();
        assert_eq!(spec.decoherence.len(), 1);
        assert_eq!(spec.decoherence[0].strength, rat(12));
        assert_eq!(spec.decoherence[0].generator.canonical_text(), "x1");
        // identical generators are independent channels: strengths add
        spec.add_decoherence(ratio(1, 2), Polynomial::univariate("x1", &[(1, rat(1))]))
            .unwrap();
        assert_eq!(spec.decoherence.len(), 1);
        assert_eq!(spec.decoherence[0].strength, ratio(25, 2));
    }

    #[test]
    fn constant_generators_are_pruned_on_insert_and_rejected_in_validate() {
        let mut spec = single_coordinate_spec(rat(1));
        spec.add_decoherence(rat(1), Polynomial::constant(&["x1"], rat(4)))
            .unwrap();
        assert!(spec.decoherence.is_empty());
        spec.decoherence.push(DecoherenceTerm {
            strength: rat(1),
            generator: Polynomial::constant(&["x1"], rat(4)),
        });
        assert!(matches!(
            spec.validate(),
            Err(AlgebraError::ConstantGenerator(_))
        ));
    }

    #[test]
    fn negative_strength_is_rejected() {
        let mut spec = single_coordinate_spec(rat(1));
        let err = spec.add_decoherence(rat(-1), Polynomial::univariate("x1", &[(1, rat(1))]));
        assert!(matches!(err, Err(AlgebraError::NegativeStrength(_))));
    }

    #[test]
    fn foreign_variables_are_rejected() {
        let mut spec = single_coordinate_spec(rat(1));
        let err = spec.add_potential(Polynomial::univariate("q9", &[(2, rat(1))]));
        assert!(matches!(err, Err(AlgebraError::ForeignVariable(_))));
    }

    #[test]
    fn masses_must_be_positive_and_coordinates_unique() {
        assert!(matches!(
            LiouvillianSpec::new(0, vec!["a".into(), "a".into()], vec![rat(1), rat(1)]),
            Err(AlgebraError::BadCoordinates)
        ));
        assert!(matches!(
            LiouvillianSpec::new(0, vec!["a".into()], vec![rat(0)]),
            Err(AlgebraError::NonPositiveMass(_))
        ));
    }
}
