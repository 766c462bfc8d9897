//! Shortest key sequence from a chef to a station, with and without a
//! teammate in the way.

use coop_kitchen::agent::policy::plan_path;
use coop_kitchen::env::{Cell, Direction, Layout};

fn main() {
    let layout = Layout::counter_circuit();
    let from = Cell::new(3, 1);
    let plates = Cell::new(12, 6);

    let free = plan_path(&layout, &[], from, Direction::Down, plates).unwrap();
    println!("to the plates: {} presses {:?}", free.len(), free);

    let blocked = plan_path(&layout, &[Cell::new(4, 1)], from, Direction::Down, plates).unwrap();
    println!("around a teammate at (4,1): {} presses", blocked.len());

    match plan_path(&layout, &[], from, Direction::Down, Cell::new(6, 4)) {
        Ok(p) => println!("center counter: {p:?}"),
        Err(e) => println!("center counter: {e}"),
    }
}
