//! Attacker and Patroller strategies and the closed-form game values.

mod file;
mod patrol;

pub use file::{parse_attack, parse_patrol, write_attack, write_patrol};
pub use patrol::{complete_patrolling, depth_first_tour, e_patrolling, factor_patrolling};

use crate::decomposition::{extremity_set, subtree_decomposition, Core};
use crate::ebd::{ebd, RootedSubtree};
use crate::error::{Error, Result};
use crate::factorization::Factorization;
use crate::measure::{SpatialMeasure, UniformPart};
use crate::network::{Network, Region, Walk};
use crate::rational::{format_rational, int, one, rat, zero, Rational};

/// Default optimality slack for the attack horizon.
pub fn default_epsilon() -> Rational {
    rat(1, 20)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GameConfig {
    pub alpha: Rational,
    pub epsilon: Rational,
    pub horizon: Rational,
}

impl GameConfig {
    /// Checks `alpha` against `net` and sets `T = 3 alpha / epsilon`.
    pub fn new(net: &Network, alpha: Rational, epsilon: Rational) -> Result<GameConfig> {
        net.validate_alpha(alpha)?;
        Ok(GameConfig {
            alpha,
            epsilon,
            horizon: epsilon_horizon(alpha, epsilon)?,
        })
    }

    pub fn with_horizon(net: &Network, alpha: Rational, horizon: Rational) -> Result<GameConfig> {
        net.validate_alpha(alpha)?;
        if horizon <= zero() {
            return Err(Error::InvalidParameter("horizon must be positive".into()));
        }
        Ok(GameConfig {
            alpha,
            epsilon: int(3) * alpha / horizon,
            horizon,
        })
    }
}

/// When the attack starts.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TemporalLaw {
    Fixed(Rational),
    /// Uniform on `[0, horizon]`, `horizon > 0`.
    Uniform(Rational),
}

impl TemporalLaw {
    /// Uniform law, collapsing to a fixed start at 0 when the horizon is 0.
    pub fn uniform(horizon: Rational) -> Result<TemporalLaw> {
        if horizon < zero() {
            return Err(Error::InvalidParameter("horizon must be nonnegative".into()));
        }
        Ok(if horizon == zero() {
            TemporalLaw::Fixed(zero())
        } else {
            TemporalLaw::Uniform(horizon)
        })
    }

    /// Latest possible start time.
    pub fn latest(&self) -> Rational {
        match *self {
            TemporalLaw::Fixed(t) | TemporalLaw::Uniform(t) => t,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct AttackStrategy {
    pub spatial: SpatialMeasure,
    pub temporal: TemporalLaw,
}

impl AttackStrategy {
    pub fn new(net: &Network, spatial: SpatialMeasure, temporal: TemporalLaw) -> Result<AttackStrategy> {
        spatial.validate(net)?;
        let total = spatial.total_mass();
        if total != one() {
            return Err(Error::InvalidParameter(format!(
                "attack masses sum to {}, not 1",
                format_rational(&total)
            )));
        }
        match temporal {
            TemporalLaw::Fixed(t) if t < zero() => {
                return Err(Error::InvalidParameter("start time must be nonnegative".into()))
            }
            TemporalLaw::Uniform(h) if h <= zero() => {
                return Err(Error::InvalidParameter("horizon must be positive".into()))
            }
            _ => {}
        }
        Ok(AttackStrategy { spatial, temporal })
    }
}

/// How a patrol component's clock is offset from the game clock.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Phase {
    /// Offset uniform over one period.
    Uniform,
    /// At game time `τ` the patrol is at `walk(τ + φ)`.
    Fixed(Rational),
}

/// One pure patrol of a mixture. Closed walks of positive duration repeat
/// forever; open walks stop at their end point and stay there; a walk of
/// zero duration never moves.
#[derive(Clone, Debug, PartialEq)]
pub struct PatrolComponent {
    pub walk: Walk,
    pub probability: Rational,
    pub phase: Phase,
}

impl PatrolComponent {
    pub fn is_periodic(&self) -> bool {
        self.walk.is_closed() && self.walk.duration() > zero()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PatrolStrategy {
    components: Vec<PatrolComponent>,
}

impl PatrolStrategy {
    pub fn new(components: Vec<PatrolComponent>) -> Result<PatrolStrategy> {
        if components.is_empty() {
            return Err(Error::InvalidParameter("patrol has no components".into()));
        }
        let mut total = zero();
        for c in &components {
            if c.probability <= zero() {
                return Err(Error::InvalidParameter("component probability must be positive".into()));
            }
            if c.phase == Phase::Uniform && !c.is_periodic() && c.walk.duration() > zero() {
                return Err(Error::InvalidWalk("uniform phase needs a closed walk".into()));
            }
            if let Phase::Fixed(p) = c.phase {
                if p < zero() {
                    return Err(Error::InvalidParameter("phase must be nonnegative".into()));
                }
            }
            total += c.probability;
        }
        if total != one() {
            return Err(Error::InvalidParameter(format!(
                "patrol probabilities sum to {}, not 1",
                format_rational(&total)
            )));
        }
        Ok(PatrolStrategy { components })
    }

    /// A single walk played with certainty.
    pub fn pure(walk: Walk, phase: Phase) -> Result<PatrolStrategy> {
        PatrolStrategy::new(vec![PatrolComponent { walk, probability: one(), phase }])
    }

    pub fn components(&self) -> &[PatrolComponent] {
        &self.components
    }

    pub fn validate_on(&self, net: &Network) -> Result<()> {
        for c in &self.components {
            Walk::new(net, c.walk.start(), c.walk.steps().to_vec())?;
        }
        Ok(())
    }
}

/// `alpha / (μ + λ(E))`.
pub fn game_value_tree(tree: &Network, alpha: Rational) -> Result<Rational> {
    let e = extremity_set(tree, alpha)?;
    Ok(alpha / (tree.total_length() + e.measure))
}

/// `T = 3 alpha / epsilon`.
pub fn epsilon_horizon(alpha: Rational, epsilon: Rational) -> Result<Rational> {
    if epsilon <= zero() {
        return Err(Error::InvalidParameter("epsilon must be positive".into()));
    }
    Ok(int(3) * alpha / epsilon)
}

/// Start uniform on `[0, T]`; location uniform on the core with mass
/// `λ(E⁰)/(μ+λ(E))`, and mass `2λ(Eʲ)/(μ+λ(E))` spread over the leaves of
/// each component by its EBD distribution.
pub fn tree_attack_strategy(tree: &Network, alpha: Rational, horizon: Rational) -> Result<AttackStrategy> {
    if horizon <= zero() {
        return Err(Error::InvalidParameter("horizon must be positive".into()));
    }
    let d = subtree_decomposition(tree, alpha)?;
    let denom = d.total_length + d.extremity_measure;
    let mut spatial = SpatialMeasure::default();
    if let Core::Region(core) = &d.core {
        let m = core.measure();
        if m > zero() {
            spatial.uniform.push(UniformPart { region: core.clone(), mass: m / denom });
        }
    }
    for c in &d.components {
        let sub = RootedSubtree::new(tree, c.region.clone(), c.root)?;
        let leaves = ebd(tree, &sub, int(2) * c.measure / denom)?;
        spatial.atoms.extend(leaves.atoms);
    }
    spatial.atoms.sort();
    AttackStrategy::new(tree, spatial, TemporalLaw::Uniform(horizon))
}

/// Location uniform over a connected zone.
pub fn uniform_attack(net: &Network, zone: &Region, temporal: TemporalLaw) -> Result<AttackStrategy> {
    if zone.measure() <= zero() {
        return Err(Error::ZeroMeasure);
    }
    if !zone.is_connected(net) {
        return Err(Error::InvalidParameter("attack zone is not connected".into()));
    }
    let spatial = SpatialMeasure {
        atoms: Vec::new(),
        uniform: vec![UniformPart { region: zone.clone(), mass: one() }],
    };
    AttackStrategy::new(net, spatial, temporal)
}

/// `alpha / μ`, only where the factorization patrol is known to be optimal,
/// i.e. `alpha <= μ - δ(F)`.
pub fn value_complete(net: &Network, f: &Factorization, alpha: Rational) -> Result<Rational> {
    let mu = net.total_length();
    let limit = mu - f.delta(net);
    if alpha <= zero() || alpha > limit {
        return Err(Error::InvalidAlpha {
            alpha: format_rational(&alpha),
            reason: format!("the value formula holds only for 0 < alpha <= {}", format_rational(&limit)),
        });
    }
    Ok(alpha / mu)
}

/// Uniform location on the unit `K₄`, start uniform on `[0, 6 - alpha]`,
/// for `4 < alpha <= 6`.
pub fn k4_window_attack(net: &Network, alpha: Rational) -> Result<AttackStrategy> {
    let unit_k4 = net.node_count() == 4 && net.is_complete() && net.arcs().iter().all(|a| a.length == one());
    if !unit_k4 {
        return Err(Error::InvalidNetwork("attack is defined on the unit K4 only".into()));
    }
    if alpha <= int(4) || alpha > int(6) {
        return Err(Error::InvalidAlpha {
            alpha: format_rational(&alpha),
            reason: "must lie in (4, 6]".into(),
        });
    }
    uniform_attack(net, &Region::whole(net), TemporalLaw::uniform(int(6) - alpha)?)
}
