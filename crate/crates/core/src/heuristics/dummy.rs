//! Look-ahead dummy rectangles.
//!
//! A dummy of height `H_k` and width `l` stands for `m = H_k / H_{k+1}` rows
//! of `l` columns. Rectangles of height `H_{k+1}` (real or dummy) are
//! distributed over such one-dimensional bags with a 1D bin-packing rule, and
//! one dummy is opened whenever nothing fits.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use crate::transform::RectId;
use crate::Time;

/// A piece of a shorter rectangle assigned to a dummy's bag. Optimistic
/// construction may split a rectangle across two dummies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Constituent {
    pub id: RectId,
    pub width: Time,
    pub bag: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Bag {
    pub capacity: Time,
    pub fill: Time,
    pub owner: u32,
}

impl Bag {
    pub fn vacancy(&self) -> Time {
        self.capacity - self.fill
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DummyRectangle {
    pub id: u32,
    /// Level `k` of the dummy; its height is `H_k`.
    pub level: usize,
    pub width: Time,
    pub constituents: Vec<Constituent>,
    pub bags: Vec<Bag>,
}

impl DummyRectangle {
    pub fn filled(&self) -> Time {
        self.bags.iter().map(|b| b.fill).sum()
    }

    pub fn capacity(&self) -> Time {
        self.bags.iter().map(|b| b.capacity).sum()
    }
}

fn widest_first(rects: &[(RectId, Time)]) -> Vec<(RectId, Time)> {
    let mut sorted = rects.to_vec();
    sorted.sort_by_key(|&(id, width)| (Reverse(width), id));
    sorted
}

/// Best-fit construction with `ratio` separate bags per dummy. Rectangles are
/// never split, so bags may keep holes.
pub fn build_dummies_pessimistic(
    rects: &[(RectId, Time)],
    ratio: Time,
    level: usize,
    next_id: &mut u32,
) -> Vec<DummyRectangle> {
    let mut dummies: Vec<DummyRectangle> = Vec::new();
    for (id, width) in widest_first(rects) {
        let best = dummies
            .iter()
            .enumerate()
            .flat_map(|(d, dummy)| {
                dummy
                    .bags
                    .iter()
                    .enumerate()
                    .map(move |(b, bag)| (d, b, bag))
            })
            .filter(|(_, _, bag)| bag.vacancy() >= width)
            .min_by_key(|&(d, b, bag)| (bag.vacancy() - width, d, b))
            .map(|(d, b, _)| (d, b));
        let (d, b) = match best {
            Some(slot) => slot,
            None => {
                let owner = *next_id;
                *next_id += 1;
                dummies.push(DummyRectangle {
                    id: owner,
                    level,
                    width,
                    constituents: Vec::new(),
                    bags: (0..ratio)
                        .map(|_| Bag {
                            capacity: width,
                            fill: 0,
                            owner,
                        })
                        .collect(),
                });
                (dummies.len() - 1, 0)
            }
        };
        let dummy = &mut dummies[d];
        dummy.bags[b].fill += width;
        dummy.constituents.push(Constituent { id, width, bag: b });
    }
    dummies
}

/// Construction keeping at most one bag not full: each dummy has a single bag
/// of `width * ratio` and rectangles are split across the boundary.
pub fn build_dummies_optimistic(
    rects: &[(RectId, Time)],
    ratio: Time,
    level: usize,
    next_id: &mut u32,
) -> Vec<DummyRectangle> {
    let mut heap: BinaryHeap<(Time, Reverse<RectId>)> =
        rects.iter().map(|&(id, w)| (w, Reverse(id))).collect();
    let mut dummies: Vec<DummyRectangle> = Vec::new();
    while let Some((width, Reverse(id))) = heap.pop() {
        let open = dummies.last_mut().filter(|d| d.bags[0].vacancy() > 0);
        match open {
            Some(dummy) => {
                let vacancy = dummy.bags[0].vacancy();
                let part = width.min(vacancy);
                dummy.bags[0].fill += part;
                dummy.constituents.push(Constituent {
                    id,
                    width: part,
                    bag: 0,
                });
                if part < width {
                    heap.push((width - part, Reverse(id)));
                }
            }
            None => {
                let owner = *next_id;
                *next_id += 1;
                dummies.push(DummyRectangle {
                    id: owner,
                    level,
                    width,
                    constituents: vec![Constituent { id, width, bag: 0 }],
                    bags: vec![Bag {
                        capacity: width * ratio,
                        fill: width,
                        owner,
                    }],
                });
            }
        }
    }
    dummies
}
