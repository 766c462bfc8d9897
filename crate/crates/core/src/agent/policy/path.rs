//! A* over (cell, facing).
//!
//! Each press costs one tick. A press always turns the chef; it also moves
//! the chef when the next cell is free floor. Reaching the goal means standing
//! next to the target while facing it.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use thiserror::Error;

use crate::env::{Cell, Direction, Layout};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum PathError {
    #[error("no path to a cell facing {target}")]
    NoPath { target: Cell },
    #[error("target {0} is floor; only stations and counters can be faced")]
    TargetIsFloor(Cell),
    #[error("start {0} is not a floor cell")]
    StartNotFloor(Cell),
}

/// Result of pressing `dir` from `(at, _)`.
pub fn press(layout: &Layout, occupied: &[Cell], at: Cell, dir: Direction) -> (Cell, Direction) {
    let next = at.step(dir);
    if layout.is_floor(next) && !occupied.contains(&next) {
        (next, dir)
    } else {
        (at, dir)
    }
}

/// Shortest press sequence that leaves the chef adjacent to and facing
/// `target`. Cells in `occupied` are impassable. Ties resolve by trying
/// directions in `Direction::ALL` order.
pub fn plan_path(
    layout: &Layout,
    occupied: &[Cell],
    from: Cell,
    facing: Direction,
    target: Cell,
) -> Result<Vec<Direction>, PathError> {
    if !layout.is_floor(from) {
        return Err(PathError::StartNotFloor(from));
    }
    if layout.is_floor(target) {
        return Err(PathError::TargetIsFloor(target));
    }
    let width = layout.width();
    let key = |c: Cell, d: Direction| (c.y as usize * width + c.x as usize) * 4 + d.index();
    let is_goal = |c: Cell, d: Direction| c.step(d) == target;
    let h = |c: Cell| c.manhattan(target).saturating_sub(1);

    let n = width * layout.height() * 4;
    let mut best = vec![u32::MAX; n];
    let mut parent: Vec<Option<(usize, Direction)>> = vec![None; n];
    let mut states: Vec<(Cell, Direction)> = vec![(from, facing); n];
    let mut heap = BinaryHeap::new();
    let mut order = 0u64;

    let start = key(from, facing);
    best[start] = 0;
    heap.push(Reverse((h(from), 0u32, order, start)));
    states[start] = (from, facing);

    while let Some(Reverse((_, g, _, k))) = heap.pop() {
        if g > best[k] {
            continue;
        }
        let (cell, dir) = states[k];
        if is_goal(cell, dir) {
            let mut path = Vec::with_capacity(g as usize);
            let mut cur = k;
            while let Some((prev, d)) = parent[cur] {
                path.push(d);
                cur = prev;
            }
            path.reverse();
            return Ok(path);
        }
        for d in Direction::ALL {
            let (nc, nd) = press(layout, occupied, cell, d);
            if (nc, nd) == (cell, dir) {
                continue;
            }
            let nk = key(nc, nd);
            let ng = g + 1;
            if ng < best[nk] {
                best[nk] = ng;
                parent[nk] = Some((k, d));
                states[nk] = (nc, nd);
                order += 1;
                heap.push(Reverse((ng + h(nc), ng, order, nk)));
            }
        }
    }
    Err(PathError::NoPath { target })
}
