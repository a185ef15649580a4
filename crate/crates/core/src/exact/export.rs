//! LP-format export of the feasibility program.
//!
//! Naming scheme (all indices 1-based; role 1 is the best-response
//! component, role 2 the payoff minimizer):
//!
//! | name                         | meaning                                   |
//! |------------------------------|-------------------------------------------|
//! | `p_j_i_s`                    | probability of strategy s, player i, role j |
//! | `u_j_i`                      | best attainable utility                   |
//! | `us_j_i_s`                   | utility of strategy s                     |
//! | `r_j_i_s`                    | regret of strategy s                      |
//! | `b_j_i_s`                    | support binary (1 = out of support)       |
//! | `pp_ja_jb_a_sa_b_sb`         | product `p_ja_a_sa * p_jb_b_sb`, a < b    |
//!
//! Two-player models are purely linear. Three-player models have player 1
//! protected (role 1 only) and add one bracketed quadratic equality per
//! product variable. Payoffs are normalized into [0, 1] per player first, and
//! the role-2 utilities use `c - u` with `c` the largest normalized payoff of
//! the targeted player, so all utility variables are nonnegative.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::game::{normalize_payoffs, EpsilonVector, Game};
use crate::lp::Relation;

use super::build_mifp_2p;

const TERMS_PER_LINE: usize = 6;

struct Row {
    name: String,
    linear: Vec<(String, f64)>,
    positions: HashMap<String, usize>,
    /// Products entering with the given coefficient.
    quad: Vec<(f64, String, String)>,
    relation: Relation,
    rhs: f64,
}

impl Row {
    fn new(name: String, relation: Relation, rhs: f64) -> Self {
        Self { name, linear: Vec::new(), positions: HashMap::new(), quad: Vec::new(), relation, rhs }
    }

    fn add(&mut self, var: String, coef: f64) {
        if coef == 0.0 {
            return;
        }
        match self.positions.get(&var) {
            Some(&k) => self.linear[k].1 += coef,
            None => {
                self.positions.insert(var.clone(), self.linear.len());
                self.linear.push((var, coef));
            }
        }
    }
}

fn signed(first: bool, coef: f64) -> String {
    let sign = if coef < 0.0 {
        "-"
    } else if first {
        ""
    } else {
        "+"
    };
    let mag = coef.abs();
    let body = if mag == 1.0 { String::new() } else { format!("{mag} ") };
    if sign.is_empty() {
        body
    } else {
        format!("{sign} {body}")
    }
}

fn render(rows: &[Row], binaries: &[String], header: &[String]) -> String {
    let mut out = String::new();
    for line in header {
        let _ = writeln!(out, "\\ {line}");
    }
    out.push_str("Minimize\n obj: 0\nSubject To\n");
    for row in rows {
        let mut line = format!(" {}:", row.name);
        let mut count = 0;
        for (var, coef) in &row.linear {
            if *coef == 0.0 {
                continue;
            }
            if count > 0 && count % TERMS_PER_LINE == 0 {
                line.push_str("\n   ");
            }
            let _ = write!(line, " {}{var}", signed(count == 0, *coef));
            count += 1;
        }
        if !row.quad.is_empty() {
            line.push_str(if count == 0 { " [" } else { " + [" });
            for (k, (coef, a, b)) in row.quad.iter().enumerate() {
                let _ = write!(line, " {}{a} * {b}", signed(k == 0, *coef));
            }
            line.push_str(" ]");
            count += 1;
        }
        if count == 0 {
            line.push_str(" 0");
        }
        let rel = match row.relation {
            Relation::Le => "<=",
            Relation::Eq => "=",
            Relation::Ge => ">=",
        };
        let _ = writeln!(line, " {rel} {}", row.rhs);
        out.push_str(&line);
    }
    out.push_str("Binary\n");
    for chunk in binaries.chunks(TERMS_PER_LINE) {
        let _ = writeln!(out, " {}", chunk.join(" "));
    }
    out.push_str("End\n");
    out
}

fn header(game: &Game, eps: &EpsilonVector) -> Vec<String> {
    let counts: Vec<String> = game.strategy_counts().iter().map(usize::to_string).collect();
    let eps: Vec<String> = eps.values().iter().map(f64::to_string).collect();
    vec![
        "epsilon-safe equilibrium feasibility model".to_string(),
        format!("players: {}; strategies: {}", game.num_players(), counts.join(" ")),
        format!("epsilon: {}", eps.join(" ")),
        "payoffs normalized per player onto the unit interval".to_string(),
    ]
}

/// Renders the model as LP-format text. Supports two and three players.
pub fn write_model(game: &Game, eps: &EpsilonVector) -> Result<String> {
    match game.num_players() {
        2 => Ok(write_two_player(game, eps)?),
        3 => {
            eps.check_for(game)?;
            if eps.get(0) != 0.0 {
                return Err(Error::InvalidArgument("player 1 is protected; its epsilon must be 0".into()));
            }
            Ok(write_three_player(game, eps))
        }
        n => {
            Err(Error::Unsupported(format!("model export covers 2 and 3 players, got {n}; use the approximate solver")))
        }
    }
}

/// Writes [`write_model`]'s output to `path`.
pub fn export_model(game: &Game, eps: &EpsilonVector, path: impl AsRef<Path>) -> Result<()> {
    let text = write_model(game, eps)?;
    std::fs::write(path, text)?;
    Ok(())
}

fn write_two_player(game: &Game, eps: &EpsilonVector) -> Result<String> {
    let model = build_mifp_2p(game, eps)?;
    let rows: Vec<Row> = model
        .relaxation
        .constraints
        .iter()
        .zip(&model.row_names)
        .map(|(c, name)| {
            let mut row = Row::new(name.clone(), c.relation, c.rhs);
            for (k, &a) in c.coeffs.iter().enumerate() {
                row.add(model.names[k].clone(), a);
            }
            row
        })
        .collect();
    let binaries: Vec<String> = model.binaries.iter().map(|&k| model.names[k].clone()).collect();
    Ok(render(&rows, &binaries, &header(game, eps)))
}

fn roles(player: usize) -> &'static [usize] {
    if player == 0 {
        &[1]
    } else {
        &[1, 2]
    }
}

fn spread(table: &[f64]) -> f64 {
    let lo = table.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = table.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    hi - lo
}

fn write_three_player(game: &Game, eps: &EpsilonVector) -> String {
    let (norm, _) = normalize_payoffs(game);
    let counts = game.strategy_counts();
    let weight = |i: usize, j: usize| if j == 1 { 1.0 - eps.get(i) } else { eps.get(i) };
    let p = |j: usize, i: usize, s: usize| format!("p_{j}_{}_{}", i + 1, s + 1);
    let pp = |ja: usize, jb: usize, a: usize, sa: usize, b: usize, sb: usize| {
        format!("pp_{ja}_{jb}_{}_{}_{}_{}", a + 1, sa + 1, b + 1, sb + 1)
    };
    let c0 = norm.payoffs(0).iter().copied().fold(f64::NEG_INFINITY, f64::max);

    let mut rows = Vec::new();
    let mut binaries = Vec::new();

    for (i, &count) in counts.iter().enumerate() {
        for &j in roles(i) {
            let mut row = Row::new(format!("sum_{j}_{}", i + 1), Relation::Eq, 1.0);
            for s in 0..count {
                row.add(p(j, i, s), 1.0);
            }
            rows.push(row);
        }
    }

    let mut idx = [0usize; 3];
    for i in 0..3 {
        let others: Vec<usize> = (0..3).filter(|&k| k != i).collect();
        let (a, b) = (others[0], others[1]);
        for &j in roles(i) {
            let big_m = if j == 1 { spread(norm.payoffs(i)) } else { spread(norm.payoffs(0)) };
            for s in 0..counts[i] {
                let tag = format!("{j}_{}_{}", i + 1, s + 1);
                let mut row = Row::new(format!("util_{tag}"), Relation::Eq, 0.0);
                row.add(format!("us_{tag}"), 1.0);
                for sa in 0..counts[a] {
                    for sb in 0..counts[b] {
                        idx[i] = s;
                        idx[a] = sa;
                        idx[b] = sb;
                        let coef = if j == 1 { norm.payoff(i, &idx) } else { c0 - norm.payoff(0, &idx) };
                        for &ja in roles(a) {
                            for &jb in roles(b) {
                                row.add(pp(ja, jb, a, sa, b, sb), -coef * weight(a, ja) * weight(b, jb));
                            }
                        }
                    }
                }
                rows.push(row);

                let mut row = Row::new(format!("regret_{tag}"), Relation::Eq, 0.0);
                row.add(format!("r_{tag}"), 1.0);
                row.add(format!("u_{j}_{}", i + 1), -1.0);
                row.add(format!("us_{tag}"), 1.0);
                rows.push(row);

                let mut row = Row::new(format!("supp_{tag}"), Relation::Le, 1.0);
                row.add(format!("p_{tag}"), 1.0);
                row.add(format!("b_{tag}"), 1.0);
                rows.push(row);

                let mut row = Row::new(format!("bigm_{tag}"), Relation::Le, 0.0);
                row.add(format!("r_{tag}"), 1.0);
                row.add(format!("b_{tag}"), -big_m);
                rows.push(row);

                binaries.push(format!("b_{tag}"));
            }
        }
    }

    for a in 0..3 {
        for b in a + 1..3 {
            for &ja in roles(a) {
                for &jb in roles(b) {
                    for sa in 0..counts[a] {
                        for sb in 0..counts[b] {
                            let name = pp(ja, jb, a, sa, b, sb);
                            let mut row = Row::new(format!("q{}", &name[1..]), Relation::Eq, 0.0);
                            row.add(name, 1.0);
                            row.quad.push((-1.0, p(ja, a, sa), p(jb, b, sb)));
                            rows.push(row);
                        }
                    }
                }
            }
        }
    }

    render(&rows, &binaries, &header(game, eps))
}
