//! The `gmhg-v1` game format and the `strategy-v1` strategy format.
//!
//! JSON with a mandatory `format` field; unknown versions are rejected.
//! Strategy probabilities are accepted either as plain numbers or as exact
//! `"z/s"` rational strings; writers emit the rational form for grid
//! strategies so lattice round trips are lossless.

use serde::{Deserialize, Serialize};

use crate::discretization::LatticeStrategy;
use crate::error::{Error, Result};
use crate::game::{ActionSet, Gmhg, Hyperedge, PlayerId, Violation};
use crate::strategy::{JointMixedStrategy, MixedStrategy};

pub const GAME_FORMAT: &str = "gmhg-v1";
pub const STRATEGY_FORMAT: &str = "strategy-v1";

#[derive(Debug, Serialize, Deserialize)]
pub struct GameFile {
    pub format: String,
    pub players: Vec<PlayerEntry>,
    pub hyperedges: Vec<HyperedgeEntry>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct PlayerEntry {
    pub id: usize,
    pub actions: Vec<String>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct HyperedgeEntry {
    pub owner: usize,
    pub clique: Vec<usize>,
    pub payoffs: Vec<f64>,
}

/// One probability: a plain number or an exact `"z/s"` rational.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ProbEntry {
    Num(f64),
    Frac(String),
}

impl ProbEntry {
    pub fn value(&self) -> Result<f64> {
        match self {
            ProbEntry::Num(v) => Ok(*v),
            ProbEntry::Frac(s) => {
                let (num, den) = s
                    .split_once('/')
                    .ok_or_else(|| Error::Format(format!("bad rational {s:?}")))?;
                let z: u64 = num
                    .trim()
                    .parse()
                    .map_err(|_| Error::Format(format!("bad rational {s:?}")))?;
                let d: u64 = den
                    .trim()
                    .parse()
                    .map_err(|_| Error::Format(format!("bad rational {s:?}")))?;
                if d == 0 {
                    return Err(Error::Format(format!("zero denominator in {s:?}")));
                }
                Ok(z as f64 / d as f64)
            }
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
pub struct StrategyFile {
    pub format: String,
    pub mixed: Vec<Vec<ProbEntry>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub linf_distance: Option<f64>,
}

/// Serializes a game.
pub fn game_to_json(game: &Gmhg) -> String {
    let file = GameFile {
        format: GAME_FORMAT.to_string(),
        players: (0..game.num_players())
            .map(|i| PlayerEntry {
                id: i,
                actions: game.actions(PlayerId(i)).labels().to_vec(),
            })
            .collect(),
        hyperedges: game
            .hyperedges()
            .iter()
            .map(|e| HyperedgeEntry {
                owner: e.owner.0,
                clique: e.clique.iter().map(|m| m.0).collect(),
                payoffs: e.payoffs.clone(),
            })
            .collect(),
    };
    serde_json::to_string_pretty(&file).expect("serializable") + "\n"
}

/// Parses a game file, returning the constructed game (when ids permit
/// construction) and every violation found. JSON and format-version
/// problems error out; structural defects are reported as violations.
pub fn game_and_violations_from_json(s: &str) -> Result<(Option<Gmhg>, Vec<Violation>)> {
    let file: GameFile = serde_json::from_str(s)?;
    if file.format != GAME_FORMAT {
        return Err(Error::Format(format!(
            "unknown game format {:?}, expected {GAME_FORMAT:?}",
            file.format
        )));
    }
    let n = file.players.len();
    let mut violations = Vec::new();
    let mut slots: Vec<Option<ActionSet>> = vec![None; n];
    for p in &file.players {
        if p.id >= n {
            violations.push(Violation::PlayerIdNotDense { id: p.id, n });
        } else if slots[p.id].is_some() {
            violations.push(Violation::DuplicatePlayerId { id: p.id });
        } else {
            slots[p.id] = Some(ActionSet::new(p.actions.clone()));
        }
    }
    if !violations.is_empty() {
        return Ok((None, violations));
    }
    let actions: Vec<ActionSet> = slots.into_iter().map(|s| s.expect("dense ids")).collect();
    let edges: Vec<Hyperedge> = file
        .hyperedges
        .iter()
        .map(|e| Hyperedge {
            owner: PlayerId(e.owner),
            clique: e.clique.iter().map(|&m| PlayerId(m)).collect(),
            payoffs: e.payoffs.clone(),
        })
        .collect();
    match Gmhg::new(actions, edges) {
        Ok(game) => {
            let v = game.validate();
            Ok((Some(game), v))
        }
        Err(Error::PlayerOutOfRange { player, .. }) => {
            violations.push(Violation::PlayerIdNotDense { id: player, n });
            Ok((None, violations))
        }
        Err(e) => Err(e),
    }
}

/// Parses a game file, rejecting any violation.
pub fn game_from_json(s: &str) -> Result<Gmhg> {
    let (game, violations) = game_and_violations_from_json(s)?;
    match game {
        Some(g) if violations.is_empty() => Ok(g),
        _ => Err(Error::InvalidGame(
            violations
                .iter()
                .map(|v| v.to_string())
                .collect::<Vec<_>>()
                .join("; "),
        )),
    }
}

pub fn read_game(path: &std::path::Path) -> Result<Gmhg> {
    game_from_json(&std::fs::read_to_string(path)?)
}

pub fn write_game(path: &std::path::Path, game: &Gmhg) -> Result<()> {
    std::fs::write(path, game_to_json(game))?;
    Ok(())
}

/// Strategy file with plain numeric probabilities.
pub fn strategy_to_json(p: &JointMixedStrategy) -> String {
    let file = StrategyFile {
        format: STRATEGY_FORMAT.to_string(),
        mixed: p
            .players()
            .iter()
            .map(|s| s.probs().iter().map(|&v| ProbEntry::Num(v)).collect())
            .collect(),
        linf_distance: None,
    };
    serde_json::to_string_pretty(&file).expect("serializable") + "\n"
}

pub fn lattice_entries(profile: &[LatticeStrategy]) -> Vec<Vec<ProbEntry>> {
    profile
        .iter()
        .map(|l| {
            l.counts()
                .iter()
                .map(|&z| ProbEntry::Frac(format!("{z}/{}", l.denom())))
                .collect()
        })
        .collect()
}

/// Strategy file with exact `"z/s"` rationals, optionally annotated with
/// the rounding distance that produced it.
pub fn lattice_strategy_to_json(profile: &[LatticeStrategy], linf_distance: Option<f64>) -> String {
    let file = StrategyFile {
        format: STRATEGY_FORMAT.to_string(),
        mixed: lattice_entries(profile),
        linf_distance,
    };
    serde_json::to_string_pretty(&file).expect("serializable") + "\n"
}

pub fn strategy_from_json(s: &str) -> Result<JointMixedStrategy> {
    let file: StrategyFile = serde_json::from_str(s)?;
    if file.format != STRATEGY_FORMAT {
        return Err(Error::Format(format!(
            "unknown strategy format {:?}, expected {STRATEGY_FORMAT:?}",
            file.format
        )));
    }
    let mut players = Vec::with_capacity(file.mixed.len());
    for (i, entries) in file.mixed.iter().enumerate() {
        let probs: Vec<f64> = entries.iter().map(|e| e.value()).collect::<Result<_>>()?;
        players.push(MixedStrategy::new(probs).map_err(|e| match e {
            Error::BadStrategy { reason, .. } => Error::BadStrategy { player: i, reason },
            other => other,
        })?);
    }
    Ok(JointMixedStrategy::new(players))
}

pub fn read_strategy(path: &std::path::Path) -> Result<JointMixedStrategy> {
    strategy_from_json(&std::fs::read_to_string(path)?)
}
