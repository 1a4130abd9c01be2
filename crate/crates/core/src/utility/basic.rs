use serde::{Deserialize, Serialize};

use crate::engine::{
    all_profiles, check_profile, enumerate_equilibria, profile_count, profile_moves, FiniteGame, Game, LookaheadConfig,
    MoverPool, OrderModel, Orientation, PayoffModel, StateProfile,
};
use crate::error::{Error, Result};

/// Actions of the two-player game; `None` is the empty set.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Action {
    None,
    B,
    T,
    G,
}

impl Action {
    pub const ALL: [Action; 4] = [Action::None, Action::B, Action::T, Action::G];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Action {
        Action::ALL[i]
    }

    pub fn label(self) -> &'static str {
        match self {
            Action::None => "-",
            Action::B => "B",
            Action::T => "T",
            Action::G => "G",
        }
    }
}

/// Symmetric two-player game whose social function is built from a table of
/// marginal values. A state is a pair of action indices (0 = none, 1 = B,
/// 2 = T, 3 = G); payoffs are marginal contributions to `gamma`.
#[derive(Clone, Debug, PartialEq)]
pub struct BasicUtilityGame {
    kappa: f64,
    /// delta[i][j]: marginal of adding action i (B, T, G) next to j (none, B, T, G).
    delta: [[f64; 4]; 3],
}

impl BasicUtilityGame {
    pub fn new(kappa: f64) -> Result<Self> {
        if !(kappa.is_finite() && kappa > 12.0) {
            return Err(Error::InvalidInstance(format!("kappa must exceed 12, got {kappa}")));
        }
        let k = kappa;
        let delta = [[6.0, 6.0, 6.0, 1.0], [k - 9.0, k - 9.0, 7.0, 4.0], [k - 5.0, k - 10.0, 8.0, 5.0]];
        Ok(BasicUtilityGame { kappa, delta })
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    /// Marginal value of adding `action` next to the actions in `present`:
    /// the smallest table entry over `present`, or the empty-set column.
    pub fn marginal(&self, action: Action, present: &[Action]) -> f64 {
        let row = &self.delta[action.index() - 1];
        present.iter().filter(|a| **a != Action::None).map(|a| row[a.index()]).fold(None, |m: Option<f64>, v| {
            Some(m.map_or(v, |m| m.min(v)))
        })
        .unwrap_or(row[0])
    }

    /// Social value of a pair of (at most singleton) choices, adding the
    /// first player's action first.
    pub fn gamma(&self, a: Action, b: Action) -> f64 {
        self.gamma_in_order(&[a, b])
    }

    fn gamma_in_order(&self, actions: &[Action]) -> f64 {
        let mut present = Vec::new();
        let mut value = 0.0;
        for &a in actions {
            if a != Action::None {
                value += self.marginal(a, &present);
                present.push(a);
            }
        }
        value
    }

    /// Whether adding the two actions in either order gives the same value
    /// on every state.
    pub fn order_independent(&self) -> bool {
        Action::ALL.iter().all(|&a| {
            Action::ALL.iter().all(|&b| (self.gamma_in_order(&[a, b]) - self.gamma_in_order(&[b, a])).abs() < 1e-12)
        })
    }

    /// Counterexamples to decreasing marginals over the lattice where each
    /// player holds at most two actions: triples (X, Y, e) with X inside Y,
    /// e addable to Y, and marginal(e, X) < marginal(e, Y).
    pub fn submodularity_violations(&self) -> Vec<(Vec<Action>, Vec<Action>, Action)> {
        // ground elements: (player, action) for the three real actions
        let ground: Vec<(usize, Action)> = (0..2).flat_map(|p| [Action::B, Action::T, Action::G].map(|a| (p, a))).collect();
        let fits = |mask: u32| (0..2).all(|p| (0..3).filter(|&a| mask & (1 << (p * 3 + a)) != 0).count() <= 2);
        let actions = |mask: u32| -> Vec<Action> {
            ground.iter().enumerate().filter(|(i, _)| mask & (1 << i) != 0).map(|(_, &(_, a))| a).collect()
        };
        let mut out = Vec::new();
        for y in 0u32..64 {
            if !fits(y) {
                continue;
            }
            for (e, &(_, action)) in ground.iter().enumerate() {
                if y & (1 << e) != 0 || !fits(y | (1 << e)) {
                    continue;
                }
                let at_y = self.marginal(action, &actions(y));
                let mut x = y;
                loop {
                    let at_x = self.marginal(action, &actions(x));
                    if at_x < at_y - 1e-12 {
                        out.push((actions(x), actions(y), action));
                    }
                    if x == 0 {
                        break;
                    }
                    x = (x - 1) & y;
                }
            }
        }
        out
    }

    pub fn is_submodular(&self) -> bool {
        self.submodularity_violations().is_empty()
    }

    /// Marginal contribution of `player`'s action to the social value.
    pub fn vickrey_payoff(&self, state: &StateProfile, player: usize) -> f64 {
        let (a, b) = (Action::from_index(state[0]), Action::from_index(state[1]));
        let without = if player == 0 { self.gamma(Action::None, b) } else { self.gamma(a, Action::None) };
        self.gamma(a, b) - without
    }

    pub fn optimum(&self) -> f64 {
        self.kappa
    }
}

impl Game for BasicUtilityGame {
    type State = StateProfile;

    fn num_players(&self) -> usize {
        2
    }

    fn orientation(&self) -> Orientation {
        Orientation::Maximize
    }

    fn payoff(&self, player: usize, state: &StateProfile) -> f64 {
        self.vickrey_payoff(state, player)
    }

    fn social_value(&self, state: &StateProfile) -> f64 {
        self.gamma(Action::from_index(state[0]), Action::from_index(state[1]))
    }

    fn moves(&self, state: &StateProfile, player: usize) -> Vec<StateProfile> {
        profile_moves(state, player, 4)
    }

    fn check_state(&self, state: &StateProfile) -> Result<()> {
        check_profile(state, &[4, 4])
    }

    fn known_optimum(&self) -> Option<f64> {
        Some(self.kappa)
    }
}

impl FiniteGame for BasicUtilityGame {
    fn state_count(&self) -> u128 {
        profile_count(&[4, 4])
    }

    fn states(&self) -> Vec<StateProfile> {
        all_profiles(&[4, 4])
    }
}

/// Depth-2 leaf model in which the other player makes the reply.
pub fn basic_utility_config(depth: usize) -> LookaheadConfig {
    LookaheadConfig::uniform(2, depth, PayoffModel::Leaf, OrderModel::Average).with_pool(MoverPool::NoRepeat)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BasicUtilityReport {
    pub kappa: f64,
    pub equilibria: Vec<(Action, Action)>,
    pub equilibrium_value: Option<f64>,
    pub optimum: f64,
    /// Optimum over the worst equilibrium value.
    pub ratio: Option<f64>,
    pub submodular: bool,
}

pub fn basic_utility_equilibria(kappa: f64, depth: usize) -> Result<BasicUtilityReport> {
    let game = BasicUtilityGame::new(kappa)?;
    let eqs = enumerate_equilibria(&game, &basic_utility_config(depth), u128::MAX)?;
    let worst = eqs.iter().map(|s| game.social_value(s)).fold(None, |m: Option<f64>, v| Some(m.map_or(v, |m| m.min(v))));
    Ok(BasicUtilityReport {
        kappa,
        equilibria: eqs.iter().map(|s| (Action::from_index(s[0]), Action::from_index(s[1]))).collect(),
        equilibrium_value: worst,
        optimum: game.optimum(),
        ratio: worst.map(|w| Orientation::Maximize.ratio(w, game.optimum())),
        submodular: game.is_submodular(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use Action::*;

    #[test]
    fn listed_gamma_values() {
        let g = BasicUtilityGame::new(120.0).unwrap();
        let k = 120.0;
        assert_eq!(g.gamma(None, None), 0.0);
        assert_eq!(g.gamma(B, None), 6.0);
        assert_eq!(g.gamma(B, B), 12.0);
        assert_eq!(g.gamma(T, None), k - 9.0);
        assert_eq!(g.gamma(G, None), k - 5.0);
        assert_eq!(g.gamma(B, G), k - 4.0);
        assert_eq!(g.gamma(B, T), k - 3.0);
        assert_eq!(g.gamma(T, T), k - 2.0);
        assert_eq!(g.gamma(T, G), k - 1.0);
        assert_eq!(g.gamma(G, G), k);
    }

    #[test]
    fn vickrey_values() {
        let g = BasicUtilityGame::new(50.0).unwrap();
        let s = |a: Action, b: Action| StateProfile::new(vec![a.index(), b.index()]);
        assert_eq!(g.vickrey_payoff(&s(B, T), 0), 6.0);
        assert_eq!(g.vickrey_payoff(&s(T, G), 0), 4.0);
        assert_eq!(g.vickrey_payoff(&s(G, G), 0), 5.0);
        assert_eq!(g.vickrey_payoff(&s(None, G), 0), 0.0);
    }

    #[test]
    fn symmetric_and_order_independent() {
        for k in [13.0, 50.0, 120.0, 1e4] {
            let g = BasicUtilityGame::new(k).unwrap();
            assert!(g.order_independent());
            for a in Action::ALL {
                for b in Action::ALL {
                    assert_eq!(g.gamma(a, b), g.gamma(b, a));
                }
            }
        }
    }

    #[test]
    fn submodular_only_for_large_kappa() {
        assert!(!BasicUtilityGame::new(13.0).unwrap().is_submodular());
        assert!(!BasicUtilityGame::new(15.5).unwrap().is_submodular());
        for k in [16.0, 50.0, 120.0, 1e4] {
            assert!(BasicUtilityGame::new(k).unwrap().is_submodular(), "kappa {k}");
        }
        // the failing marginal at 13 is T added to nothing against T added next to T
        let v = BasicUtilityGame::new(13.0).unwrap().submodularity_violations();
        assert!(v.iter().any(|(x, y, e)| x.is_empty() && y == &vec![T] && *e == T));
    }

    #[test]
    fn rejects_small_kappa() {
        assert!(BasicUtilityGame::new(12.0).is_err());
        assert!(BasicUtilityGame::new(f64::NAN).is_err());
    }
}
