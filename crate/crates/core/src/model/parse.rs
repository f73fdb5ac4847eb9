use std::fmt::Write;

use super::{Date, Game, Guard, Interval, ModelError, Objectives, TimedNetwork, VertexId, WeightFn};

/// Parses the line-oriented game description.
///
/// ```text
/// players <n>
/// vertex <name> affine <a> <b>  |  vertex <name> table <w1> ... <wk>
/// edge <from> <to> <lo>..<hi|inf> [...]
/// objective all <src> <tgt>     |  objective count <src> <tgt> <m>
/// ```
pub fn parse_game(text: &str) -> Result<Game, ModelError> {
    let mut players: Option<usize> = None;
    let mut net = TimedNetwork::new();
    let mut symmetric: Option<(VertexId, VertexId)> = None;
    let mut groups: Vec<(VertexId, VertexId, usize)> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("");
        let toks: Vec<&str> = content.split_whitespace().collect();
        let Some((&kw, rest)) = toks.split_first() else { continue };
        let syntax = |msg: &str| ModelError::Syntax { line, msg: msg.to_string() };
        let vertex =
            |net: &TimedNetwork, name: &str| net.vertex_id(name).ok_or_else(|| ModelError::UnknownVertex { line, name: name.to_string() });
        match kw {
            "players" => {
                let [n] = rest else { return Err(syntax("expected `players <n>`")) };
                if players.is_some() {
                    return Err(syntax("`players` given twice"));
                }
                players = Some(number(n, line)?);
            }
            "vertex" => {
                let [name, kind, args @ ..] = rest else { return Err(syntax("expected `vertex <name> <kind> ...`")) };
                let weight = match (*kind, args) {
                    ("affine", [a, b]) => WeightFn::Affine { a: number(a, line)?, b: number(b, line)? },
                    ("affine", _) => return Err(syntax("expected `affine <a> <b>`")),
                    ("table", []) => return Err(syntax("empty weight table")),
                    ("table", entries) => WeightFn::Table(entries.iter().map(|e| number(e, line)).collect::<Result<_, _>>()?),
                    (other, _) => return Err(syntax(&format!("unknown weight kind `{other}`"))),
                };
                if let Some(problem) = weight.positivity_problem() {
                    return Err(syntax(&problem));
                }
                if net.add_vertex(*name, weight).is_none() {
                    return Err(ModelError::DuplicateVertex { line, name: name.to_string() });
                }
            }
            "edge" => {
                let [from, to, ivs @ ..] = rest else { return Err(syntax("expected `edge <from> <to> <intervals>`")) };
                let (from, to) = (vertex(&net, from)?, vertex(&net, to)?);
                if ivs.is_empty() {
                    return Err(ModelError::EmptyGuard { line: Some(line) });
                }
                let intervals = ivs.iter().map(|t| interval(t, line)).collect::<Result<Vec<_>, _>>()?;
                let guard = Guard::new(intervals).map_err(|e| match e {
                    ModelError::InvertedInterval { interval, .. } => ModelError::InvertedInterval { line: Some(line), interval },
                    ModelError::EmptyGuard { .. } => ModelError::EmptyGuard { line: Some(line) },
                    other => other,
                })?;
                net.add_edge(from, to, guard);
            }
            "objective" => match rest {
                ["all", s, t] => {
                    if symmetric.is_some() || !groups.is_empty() {
                        return Err(syntax("`objective all` must be the only objective"));
                    }
                    symmetric = Some((vertex(&net, s)?, vertex(&net, t)?));
                }
                ["count", s, t, m] => {
                    if symmetric.is_some() {
                        return Err(syntax("`objective count` cannot follow `objective all`"));
                    }
                    groups.push((vertex(&net, s)?, vertex(&net, t)?, number(m, line)?));
                }
                _ => return Err(syntax("expected `objective all <src> <tgt>` or `objective count <src> <tgt> <m>`")),
            },
            other => return Err(syntax(&format!("unknown keyword `{other}`"))),
        }
    }

    let players = players.ok_or(ModelError::Syntax { line: 0, msg: "missing `players` line".into() })?;
    let objectives = match symmetric {
        Some((src, tgt)) => Objectives::Symmetric { src, tgt },
        None if groups.is_empty() => return Err(ModelError::Objectives("no objective given".into())),
        None => Objectives::Asymmetric(groups),
    };
    Game::new(net, players, objectives)
}

fn number<T: std::str::FromStr>(tok: &str, line: usize) -> Result<T, ModelError> {
    tok.parse().map_err(|_| ModelError::Syntax { line, msg: format!("`{tok}` is not a non-negative integer") })
}

fn interval(tok: &str, line: usize) -> Result<Interval, ModelError> {
    let (lo, hi) = tok.split_once("..").ok_or_else(|| ModelError::Syntax { line, msg: format!("`{tok}` is not an interval `lo..hi`") })?;
    let lo: Date = number(lo, line)?;
    let hi = if hi == "inf" { None } else { Some(number(hi, line)?) };
    Ok(Interval::new(lo, hi))
}

/// Canonical text of a game; `parse_game(&render_game(g)) == g`.
pub fn render_game(g: &Game) -> String {
    let net = g.network();
    let mut out = String::new();
    writeln!(out, "players {}", g.player_count()).unwrap();
    for v in 0..net.vertex_count() {
        writeln!(out, "vertex {} {}", net.name(v), net.weight(v)).unwrap();
    }
    for e in net.edges() {
        writeln!(out, "edge {} {} {}", net.name(e.from), net.name(e.to), e.guard).unwrap();
    }
    match g.objectives() {
        Objectives::Symmetric { src, tgt } => writeln!(out, "objective all {} {}", net.name(*src), net.name(*tgt)).unwrap(),
        Objectives::Asymmetric(groups) => {
            for &(s, t, m) in groups {
                writeln!(out, "objective count {} {} {m}", net.name(s), net.name(t)).unwrap();
            }
        }
    }
    out
}
