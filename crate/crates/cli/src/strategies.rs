//! Strategy sources named on the command line: built-in strategies by
//! name, or JSON documents carrying their game.

use anyhow::{anyhow, bail, Context, Result};
use gamiso::arena::{interpret_type, Arena};
use gamiso::lang::parse_type;
use gamiso::plays::Arrow;
use gamiso::strategy::{cell, copycat, involution_i, hotel_strategies, Bounds, DefaultHotel, ShiftedHotel, Strategy, STRATEGY_FORMAT};
use serde_json::{json, Value};
use std::sync::Arc;

/// Natural number indices kept by the built-in hotel strategies.
const HOTEL_WIDTH: usize = 8;

pub const BUILTIN_HELP: &str = "copycat:TYPE, cell:TYPE, involution, hotel-forward, hotel-backward, \
shifted-hotel-forward, shifted-hotel-backward, or a strategy JSON file";

fn type_arena(src: &str) -> Result<Arena> {
    let mut fam = interpret_type(&parse_type(src)?)?;
    if fam.len() != 1 {
        bail!("`{src}` denotes a family of {} arenas; a single arena is needed", fam.len());
    }
    Ok(fam.remove(0))
}

pub fn load_strategy(source: &str) -> Result<Strategy> {
    if let Some(t) = source.strip_prefix("copycat:") {
        return Ok(copycat(&type_arena(t)?));
    }
    if let Some(t) = source.strip_prefix("cell:") {
        return Ok(cell(&interpret_type(&parse_type(t)?)?));
    }
    let hotel = |shifted: bool, forward: bool| {
        let (sigma, tau) = if shifted {
            hotel_strategies(Arc::new(ShiftedHotel), HOTEL_WIDTH)
        } else {
            hotel_strategies(Arc::new(DefaultHotel), HOTEL_WIDTH)
        };
        if forward {
            sigma
        } else {
            tau
        }
    };
    match source {
        "involution" => return Ok(involution_i()),
        "hotel-forward" => return Ok(hotel(false, true)),
        "hotel-backward" => return Ok(hotel(false, false)),
        "shifted-hotel-forward" => return Ok(hotel(true, true)),
        "shifted-hotel-backward" => return Ok(hotel(true, false)),
        _ => {}
    }
    let text = std::fs::read_to_string(source).with_context(|| format!("`{source}` is not one of {BUILTIN_HELP}"))?;
    let doc: Value = serde_json::from_str(&text).with_context(|| format!("{source} is not JSON"))?;
    let arena = |key: &str| -> Result<Arena> {
        let v = doc.get(key).ok_or_else(|| anyhow!("strategy document has no `{key}` arena"))?;
        Ok(Arena::from_json(v)?)
    };
    let game = Arrow::new(arena("left")?, arena("right")?);
    Ok(Strategy::from_json(game, &doc)?)
}

/// The materialization of `sigma` with its game, loadable by [`load_strategy`].
pub fn strategy_document(sigma: &Strategy, bounds: &Bounds) -> Result<Value> {
    let body = sigma.to_json(bounds)?;
    Ok(json!({
        "format": STRATEGY_FORMAT,
        "left": sigma.game().left.to_json(),
        "right": sigma.game().right.to_json(),
        "plays": body["plays"],
    }))
}
