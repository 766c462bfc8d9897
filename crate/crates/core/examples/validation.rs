use coop_kitchen::session::{comparison_table, run_validation, BackendMode, ValidationOptions};

fn main() {
    let games = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(4);
    let tables: Vec<_> = [true, false].map(|tom| run_validation(&ValidationOptions::new(games, tom, BackendMode::Mock))).into();
    for t in &tables {
        println!("{}", t.per_game());
    }
    println!("{}", comparison_table(&tables.iter().collect::<Vec<_>>()));
}
