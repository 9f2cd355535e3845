//! Game-series configuration.
//!
//! ```toml
//! [[game]]
//! n = 7
//! v = 8
//! e = 13
//! starts = ["empty"]            # optional, defaults to all six named starts
//!
//! [[game.explicit]]              # optional extra starts
//! red = [[1, 2]]
//! blue = [[0, 1]]
//! ```
//!
//! Games run in file order; each game takes move-ordering hints from the one
//! before it.

use std::path::Path;

use serde::Deserialize;

use crate::graph::Edge;
use crate::rules::{GameSpec, RulesError, StartPosition, StartTag};

/// Path order, vertex cap and edge budget of the bundled twelve-game series.
pub const DEFAULT_SERIES: [(usize, usize, usize); 12] = [
    (3, 4, 6),
    (4, 5, 8),
    (5, 6, 9),
    (6, 7, 11),
    (7, 8, 13),
    (7, 8, 12),
    (8, 9, 14),
    (9, 10, 16),
    (10, 11, 18),
    (11, 12, 20),
    (12, 13, 22),
    (13, 14, 24),
];

/// One game of a series with the starts to solve, in order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeriesGame {
    pub n: usize,
    pub v: usize,
    pub e: usize,
    pub starts: Vec<StartPosition>,
}

impl SeriesGame {
    pub fn new(n: usize, v: usize, e: usize) -> Self {
        SeriesGame {
            n,
            v,
            e,
            starts: StartTag::SERIES
                .iter()
                .map(|&t| StartPosition::named(t))
                .collect(),
        }
    }

    pub fn spec_for(&self, start: &StartPosition) -> GameSpec {
        GameSpec::rrc(self.n, self.v, self.e, start.clone())
    }

    /// Book file name for this game.
    pub fn book_file_name(&self) -> String {
        format!("C4P{}V{}E{}.txt", self.n, self.v, self.e)
    }
}

pub fn default_series() -> Vec<SeriesGame> {
    DEFAULT_SERIES
        .iter()
        .map(|&(n, v, e)| SeriesGame::new(n, v, e))
        .collect()
}

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("malformed series config: {0}")]
    Toml(#[from] toml::de::Error),
    #[error("malformed game `{0}`: expected n=..,v=..,e=..[,start=..]")]
    GameArg(String),
    #[error("game {index}: {source}")]
    Rules { index: usize, source: RulesError },
    #[error("series config lists no games")]
    Empty,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSeries {
    game: Vec<RawGame>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGame {
    n: usize,
    v: usize,
    e: usize,
    starts: Option<Vec<String>>,
    #[serde(default)]
    explicit: Vec<RawExplicit>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawExplicit {
    #[serde(default)]
    red: Vec<[u8; 2]>,
    #[serde(default)]
    blue: Vec<[u8; 2]>,
}

fn edges(list: &[[u8; 2]]) -> Vec<Edge> {
    list.iter().map(|&[a, b]| (a, b)).collect()
}

/// Parses a series from TOML text.
pub fn parse_series(text: &str) -> Result<Vec<SeriesGame>, ConfigError> {
    let raw: RawSeries = toml::from_str(text)?;
    if raw.game.is_empty() {
        return Err(ConfigError::Empty);
    }
    let mut games = Vec::with_capacity(raw.game.len());
    for (index, g) in raw.game.into_iter().enumerate() {
        let mut starts = match g.starts {
            None => StartTag::SERIES
                .iter()
                .map(|&t| StartPosition::named(t))
                .collect(),
            Some(names) => names
                .iter()
                .map(|s| s.parse::<StartTag>().map(StartPosition::named))
                .collect::<Result<Vec<_>, _>>()
                .map_err(|source| ConfigError::Rules { index, source })?,
        };
        starts.extend(
            g.explicit
                .iter()
                .map(|x| StartPosition::explicit(edges(&x.red), edges(&x.blue))),
        );
        let game = SeriesGame {
            n: g.n,
            v: g.v,
            e: g.e,
            starts,
        };
        check_game(&game).map_err(|source| ConfigError::Rules { index, source })?;
        games.push(game);
    }
    Ok(games)
}

/// Rejects parameters no start can be solved under. Starts that exceed the
/// vertex cap are skipped at solve time, not rejected.
fn check_game(game: &SeriesGame) -> Result<(), RulesError> {
    for start in &game.starts {
        let spec = game.spec_for(start);
        match spec.validate() {
            Err(RulesError::StartExceedsCap { .. }) => {}
            other => {
                other?;
            }
        }
    }
    Ok(())
}

pub fn load_series(path: &Path) -> Result<Vec<SeriesGame>, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_series(&text)
}

/// Parses a single game given as `n=3,v=4,e=6[,start=brr]`. Without a start
/// all six named starts are solved.
pub fn parse_game_arg(arg: &str) -> Result<SeriesGame, ConfigError> {
    let bad = || ConfigError::GameArg(arg.to_string());
    let (mut n, mut v, mut e, mut start) = (None, None, None, None);
    for part in arg.split(',') {
        let (k, val) = part.split_once('=').ok_or_else(bad)?;
        match k.trim() {
            "n" => n = Some(val.trim().parse().map_err(|_| bad())?),
            "v" => v = Some(val.trim().parse().map_err(|_| bad())?),
            "e" => e = Some(val.trim().parse().map_err(|_| bad())?),
            "start" => {
                start = Some(
                    val.trim()
                        .parse::<StartTag>()
                        .map_err(|source| ConfigError::Rules { index: 0, source })?,
                )
            }
            _ => return Err(bad()),
        }
    }
    let n: usize = n.ok_or_else(bad)?;
    let mut game = SeriesGame::new(n, v.unwrap_or(n + 1), e.unwrap_or(2 * n - 2));
    if let Some(t) = start {
        game.starts = vec![StartPosition::named(t)];
    }
    check_game(&game).map_err(|source| ConfigError::Rules { index: 0, source })?;
    Ok(game)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_series_parses_to_default() {
        let text = include_str!("../../../configs/series.toml");
        assert_eq!(parse_series(text).unwrap(), default_series());
    }

    #[test]
    fn explicit_starts() {
        let g = parse_series(
            "[[game]]\nn=4\nv=5\ne=8\nstarts=[]\n[[game.explicit]]\nred=[[0,1]]\nblue=[[1,2]]\n",
        )
        .unwrap();
        assert_eq!(g[0].starts.len(), 1);
        assert_eq!(g[0].starts[0].red, vec![(0, 1)]);
        assert_eq!(g[0].starts[0].blue, vec![(1, 2)]);
    }

    #[test]
    fn game_args() {
        let g = parse_game_arg("n=3,v=4,e=6").unwrap();
        assert_eq!((g.n, g.v, g.e, g.starts.len()), (3, 4, 6, 6));
        let g = parse_game_arg("n=5,start=brr").unwrap();
        assert_eq!((g.v, g.e), (6, 8));
        assert_eq!(g.starts[0].tag, StartTag::Brr);
        assert!(parse_game_arg("n=3,w=1").is_err());
        assert!(parse_game_arg("n=3,e=0,start=br").is_err());
    }

    #[test]
    fn rejects_empty_and_unknown() {
        assert!(parse_series("").is_err());
        assert!(parse_series("[[game]]\nn=3\nv=4\ne=6\nstarts=[\"zz\"]\n").is_err());
    }
}
