//! Rank and filter the shipped equipment tables.

use spacelab_iqa::catalog::{filter, rank_by, shipped, Constraint, Direction, EquipmentKind, RangeRule};

fn main() {
    println!("backgrounds by reflectivity:");
    for r in rank_by(&shipped(EquipmentKind::Background), "reflectivity_pct", Direction::Asc).unwrap() {
        let value = r.sort_value.map(|v| format!("{v} %")).unwrap_or_else(|| "n/a".into());
        println!("  {:<20} {value}", r.record.name);
    }

    let lamps = shipped(EquipmentKind::Lamp);
    let cap = [Constraint::parse("power_w<=100").unwrap()];
    for rule in [RangeRule::Overlaps, RangeRule::Within] {
        let names: Vec<String> = filter(&lamps, &cap, rule).into_iter().map(|r| r.name).collect();
        println!("\nlamps with power_w<=100 ({rule:?}): {}", names.join(", "));
    }

    let budget = [Constraint::parse("cost_eur<=600").unwrap(), Constraint::parse("max_resolution_mpx>=10").unwrap()];
    let cams = filter(&shipped(EquipmentKind::Camera), &budget, RangeRule::Overlaps);
    println!("\ncameras under 600 EUR with at least 10 MP, best resolution first:");
    for r in rank_by(&cams, "max_resolution_mpx", Direction::Desc).unwrap() {
        let cost = r.record.cost_eur.as_ref().map(|c| c.to_string()).unwrap_or_default();
        println!("  {:<20} {} MP, {cost} EUR", r.record.name, r.sort_value.unwrap());
    }
}
