use std::sync::atomic::{AtomicBool, AtomicU64, AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

use rayon::prelude::*;

use super::table::{ConstraintTable, SlotMask};
use super::{Budget, SearchConfig};
use crate::error::{Error, Result};
use crate::pattern::PatternSpec;

/// A partial relative order of the values `1..=d`, listed left to right.
pub type Frontier = Vec<u8>;

/// Current relative order plus the inverse index.
#[derive(Debug, Clone)]
pub(crate) struct Order {
    pub seq: Vec<u8>,
    pub pos: Vec<u8>,
}

impl Order {
    pub fn new(n: usize) -> Self {
        Order {
            seq: Vec::with_capacity(n),
            pos: vec![0; n + 2],
        }
    }

    pub fn from_frontier(n: usize, f: &[u8]) -> Self {
        let mut o = Order::new(n);
        o.seq.extend_from_slice(f);
        for (i, &v) in f.iter().enumerate() {
            o.pos[v as usize] = i as u8;
        }
        o
    }

    pub fn len(&self) -> usize {
        self.seq.len()
    }

    pub fn insert(&mut self, slot: usize, v: u8) {
        self.seq.insert(slot, v);
        for i in slot..self.seq.len() {
            self.pos[self.seq[i] as usize] = i as u8;
        }
    }

    pub fn remove(&mut self, slot: usize) {
        self.seq.remove(slot);
        for i in slot..self.seq.len() {
            self.pos[self.seq[i] as usize] = i as u8;
        }
    }
}

pub(crate) fn all_slots(len: usize) -> SlotMask {
    super::table::slot_range(0, len)
}

/// Shared stop conditions and counters.
pub(crate) struct Control {
    nodes: AtomicU64,
    stop: AtomicBool,
    budget: Budget,
    started: Instant,
}

const FLUSH_EVERY: u64 = 1 << 10;

impl Control {
    pub fn new(budget: Budget) -> Self {
        Control {
            nodes: AtomicU64::new(0),
            stop: AtomicBool::new(false),
            budget,
            started: Instant::now(),
        }
    }

    pub fn nodes(&self) -> u64 {
        self.nodes.load(Ordering::Relaxed)
    }

    pub fn stopped(&self) -> bool {
        self.stop.load(Ordering::Relaxed)
    }

    pub fn started(&self) -> Instant {
        self.started
    }

    /// Adds a batch of visited nodes and re-evaluates the time budget.
    fn flush(&self, batch: u64) -> bool {
        let before = self.nodes.fetch_add(batch, Ordering::Relaxed);
        self.check_clock(before, before + batch);
        !self.stopped()
    }

    /// Claims one node under a node budget; false once the budget is used up.
    fn take_one(&self) -> bool {
        let m = self.budget.max_nodes.unwrap_or(u64::MAX);
        let claimed = self
            .nodes
            .fetch_update(Ordering::Relaxed, Ordering::Relaxed, |x| (x < m).then_some(x + 1));
        match claimed {
            Ok(before) => {
                self.check_clock(before, before + 1);
                !self.stopped()
            }
            Err(_) => {
                self.stop.store(true, Ordering::Relaxed);
                false
            }
        }
    }

    // the clock is only read once per FLUSH_EVERY nodes
    fn check_clock(&self, before: u64, total: u64) {
        if before / FLUSH_EVERY == total / FLUSH_EVERY {
            return;
        }
        if self
            .budget
            .max_time
            .is_some_and(|t| self.started.elapsed() >= t)
        {
            self.stop.store(true, Ordering::Relaxed);
        }
    }

    pub fn budget_reason(&self) -> Option<String> {
        if !self.stopped() {
            return None;
        }
        let nodes = self.nodes();
        Some(match self.budget.max_nodes {
            Some(m) if nodes >= m => format!("node budget of {m} exhausted"),
            _ => match self.budget.max_time {
                Some(t) => format!("time budget of {:.3}s exhausted", t.as_secs_f64()),
                None => "search interrupted".to_string(),
            },
        })
    }
}

/// Per-thread node counter that reports to [`Control`] in batches.
pub(crate) struct Tally<'a> {
    ctl: &'a Control,
    pending: u64,
}

impl<'a> Tally<'a> {
    pub fn new(ctl: &'a Control) -> Self {
        Tally { ctl, pending: 0 }
    }

    /// Counts one node; false once the run must stop.
    #[inline]
    pub fn tick(&mut self) -> bool {
        if self.ctl.budget.max_nodes.is_some() {
            // exact accounting so that a node budget is never overshot
            return self.ctl.take_one();
        }
        self.pending += 1;
        if self.pending >= FLUSH_EVERY {
            let batch = std::mem::take(&mut self.pending);
            return self.ctl.flush(batch);
        }
        !self.ctl.stopped()
    }
}

impl Drop for Tally<'_> {
    fn drop(&mut self) {
        if self.pending > 0 {
            self.ctl.flush(self.pending);
        }
    }
}

pub(crate) enum Flow {
    Found(Vec<u8>),
    Exhausted,
    Aborted,
}

/// Depth-first avoider search by insertion of `1..=n` in increasing value order.
pub(crate) struct Engine {
    pub n: usize,
    pub table: ConstraintTable,
    pub symmetry: bool,
    pub forward_check: bool,
}

impl Engine {
    pub fn new(n: usize, spec: &PatternSpec, cfg: &SearchConfig) -> Result<Self> {
        if n == 0 {
            return Err(Error::OutOfRange {
                what: "n",
                value: 0,
                limit: "n >= 1".into(),
            });
        }
        Ok(Engine {
            n,
            table: ConstraintTable::build(n, spec)?,
            symmetry: cfg.symmetry_breaking,
            forward_check: cfg.forward_checking,
        })
    }

    /// Gaps where `v` may be inserted without completing a hit.
    pub fn allowed_slots(&self, order: &Order, v: usize) -> SlotMask {
        let len = order.len();
        let mut allowed = all_slots(len);
        if self.symmetry && v == 2 {
            // reversal symmetry: 1 precedes 2
            allowed &= 1 << (order.pos[1] as usize + 1);
        }
        for t in self.table.tuples_with_max(v) {
            if allowed == 0 {
                break;
            }
            allowed &= !self.table.hit_slots(t, v as u8, &order.pos, len);
        }
        allowed
    }

    /// Every value still to come has a gap compatible with the tuples already decided.
    pub fn future_feasible(&self, order: &Order) -> bool {
        if !self.forward_check {
            return true;
        }
        let placed = order.len();
        let full = all_slots(placed);
        (placed + 1..=self.n).all(|w| {
            let mut allowed = full;
            for t in self.table.placed_tuples(w, placed) {
                allowed &= !self.table.hit_slots(t, w as u8, &order.pos, placed);
                if allowed == 0 {
                    return false;
                }
            }
            true
        })
    }

    pub fn root(&self) -> Order {
        let mut o = Order::new(self.n);
        o.insert(0, 1);
        o
    }

    /// Checks that `f` is an order of `1..=d` that the search itself could have produced.
    pub fn validate_frontier(&self, f: &[u8]) -> bool {
        let d = f.len();
        if d == 0 || d > self.n {
            return false;
        }
        let mut seen = vec![false; d + 1];
        for &v in f {
            if v == 0 || v as usize > d || std::mem::replace(&mut seen[v as usize], true) {
                return false;
            }
        }
        let mut order = self.root();
        for v in 2..=d as u8 {
            let slot = f
                .iter()
                .take_while(|&&x| x != v)
                .filter(|&&x| x < v)
                .count();
            if self.allowed_slots(&order, v as usize) & (1 << slot) == 0 {
                return false;
            }
            order.insert(slot, v);
        }
        true
    }

    /// `order` with `v` inserted at each slot in `slots`, left to right.
    fn children(order: &Order, v: usize, mut slots: SlotMask, out: &mut Vec<Frontier>) {
        while slots != 0 {
            let s = slots.trailing_zeros() as usize;
            slots &= slots - 1;
            let mut f = order.seq.clone();
            f.insert(s, v as u8);
            out.push(f);
        }
    }

    /// Depth-first search below `order`, whose values are `1..=order.len()`.
    ///
    /// On [`Flow::Aborted`] the unexplored part of the subtree is appended to `rest` in
    /// search order.
    pub fn dfs(
        &self,
        order: &mut Order,
        tally: &mut Tally,
        cancel: &dyn Fn() -> bool,
        rest: &mut Vec<Frontier>,
    ) -> Flow {
        let v = order.len() + 1;
        if v > self.n {
            return Flow::Found(order.seq.clone());
        }
        let mut slots = self.allowed_slots(order, v);
        while slots != 0 {
            let s = slots.trailing_zeros() as usize;
            if !tally.tick() || cancel() {
                Self::children(order, v, slots, rest);
                return Flow::Aborted;
            }
            slots &= slots - 1;
            order.insert(s, v as u8);
            if self.future_feasible(order) {
                match self.dfs(order, tally, cancel, rest) {
                    Flow::Exhausted => {}
                    Flow::Aborted => {
                        order.remove(s);
                        Self::children(order, v, slots, rest);
                        return Flow::Aborted;
                    }
                    found => {
                        order.remove(s);
                        return found;
                    }
                }
            }
            order.remove(s);
        }
        Flow::Exhausted
    }

    /// All surviving orders of `1..=depth`, in depth-first order.
    ///
    /// `Err` carries the work left when the budget ran out during the expansion.
    pub fn expand(&self, depth: usize, tally: &mut Tally) -> Result<Vec<Frontier>, Vec<Frontier>> {
        let depth = depth.clamp(1, self.n);
        let mut out = Vec::new();
        let mut order = self.root();
        if !self.future_feasible(&order) {
            return Ok(out);
        }
        if self.collect(&mut order, depth, &mut out, tally) {
            Ok(out)
        } else {
            Err(out)
        }
    }

    /// On abort, `out` ends with the unexplored remainder.
    fn collect(
        &self,
        order: &mut Order,
        depth: usize,
        out: &mut Vec<Frontier>,
        tally: &mut Tally,
    ) -> bool {
        if order.len() == depth {
            out.push(order.seq.clone());
            return true;
        }
        let v = order.len() + 1;
        let mut slots = self.allowed_slots(order, v);
        while slots != 0 {
            let s = slots.trailing_zeros() as usize;
            if !tally.tick() {
                Self::children(order, v, slots, out);
                return false;
            }
            slots &= slots - 1;
            order.insert(s, v as u8);
            let ok = !self.future_feasible(order) || self.collect(order, depth, out, tally);
            order.remove(s);
            if !ok {
                Self::children(order, v, slots, out);
                return false;
            }
        }
        true
    }
}

/// Result of exploring a list of frontier subtrees.
pub(crate) struct FrontierRun {
    pub witness: Option<Vec<u8>>,
    /// Unexplored work, in search order (only meaningful when the run was cut short).
    pub pending: Vec<Frontier>,
}

enum ItemState {
    Untouched,
    Done,
    Partial(Vec<Frontier>),
}

/// Explores `items` in order, stopping at the first avoider.
///
/// With more than one thread the subtrees are distributed over a pool; the reported
/// witness is still the one from the earliest subtree containing an avoider, so the
/// answer matches a sequential run.
pub(crate) fn run_frontier(
    engine: &Engine,
    items: &[Frontier],
    threads: usize,
    ctl: &Control,
) -> Result<FrontierRun> {
    let states: Vec<Mutex<ItemState>> = items
        .iter()
        .map(|_| Mutex::new(ItemState::Untouched))
        .collect();
    let best = AtomicUsize::new(usize::MAX);
    let found: Mutex<Option<(usize, Vec<u8>)>> = Mutex::new(None);

    let explore = |idx: usize, item: &Frontier| {
        if best.load(Ordering::Relaxed) < idx || ctl.stopped() {
            return;
        }
        let mut order = Order::from_frontier(engine.n, item);
        let state = if !engine.future_feasible(&order) {
            ItemState::Done
        } else {
            let mut tally = Tally::new(ctl);
            let cancel = || best.load(Ordering::Relaxed) < idx;
            let mut rest = Vec::new();
            match engine.dfs(&mut order, &mut tally, &cancel, &mut rest) {
                Flow::Found(w) => {
                    let mut slot = found.lock().expect("poisoned");
                    if slot.as_ref().is_none_or(|(i, _)| idx < *i) {
                        *slot = Some((idx, w));
                    }
                    best.fetch_min(idx, Ordering::Relaxed);
                    ItemState::Done
                }
                Flow::Exhausted => ItemState::Done,
                Flow::Aborted => ItemState::Partial(rest),
            }
        };
        *states[idx].lock().expect("poisoned") = state;
    };

    if threads <= 1 {
        for (idx, item) in items.iter().enumerate() {
            explore(idx, item);
            if best.load(Ordering::Relaxed) != usize::MAX || ctl.stopped() {
                break;
            }
        }
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| Error::InvalidSpec(format!("thread pool: {e}")))?;
        pool.install(|| {
            items
                .par_iter()
                .enumerate()
                .with_max_len(1)
                .for_each(|(idx, item)| explore(idx, item))
        });
    }

    let witness = found.into_inner().expect("poisoned").map(|(_, w)| w);
    let mut pending = Vec::new();
    for (item, state) in items.iter().zip(states) {
        match state.into_inner().expect("poisoned") {
            ItemState::Untouched => pending.push(item.clone()),
            ItemState::Done => {}
            ItemState::Partial(rest) => pending.extend(rest),
        }
    }
    Ok(FrontierRun { witness, pending })
}
