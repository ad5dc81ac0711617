//! Parallel execution of denominator slices on scoped threads.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use pftl_core::enumerate::{SliceOutcome, SliceRunner};
use pftl_core::Result;

/// Runs slices on a fixed number of threads.
///
/// Workers pull the next slice index from a shared counter, so long slices do not
/// stall the others. Results are stored by index, which keeps the merge order equal
/// to the input order whatever the scheduling was.
#[derive(Clone, Copy, Debug)]
pub struct ThreadRunner {
    workers: usize,
}

impl ThreadRunner {
    pub fn new(workers: usize) -> Self {
        ThreadRunner { workers: workers.max(1) }
    }

    pub fn workers(&self) -> usize {
        self.workers
    }
}

impl SliceRunner for ThreadRunner {
    fn run(&self, slices: &[u64], work: &(dyn Fn(u64) -> Result<SliceOutcome> + Sync)) -> Vec<Result<SliceOutcome>> {
        if self.workers == 1 || slices.len() <= 1 {
            return slices.iter().map(|&q| work(q)).collect();
        }
        let next = AtomicUsize::new(0);
        let results: Vec<Mutex<Option<Result<SliceOutcome>>>> = slices.iter().map(|_| Mutex::new(None)).collect();
        std::thread::scope(|scope| {
            for _ in 0..self.workers.min(slices.len()) {
                scope.spawn(|| loop {
                    let i = next.fetch_add(1, Ordering::Relaxed);
                    let Some(&q) = slices.get(i) else { break };
                    let r = work(q);
                    *results[i].lock().expect("slot lock") = Some(r);
                });
            }
        });
        results.into_iter().map(|slot| slot.into_inner().expect("slot lock").expect("every slice ran")).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn keeps_input_order() {
        let slices: Vec<u64> = (1..=50).collect();
        let work = |q: u64| -> Result<SliceOutcome> {
            // uneven work so that threads finish out of order
            std::thread::sleep(std::time::Duration::from_micros((q * 37) % 200));
            Ok(SliceOutcome { q, count: q * q, ..Default::default() })
        };
        let out = ThreadRunner::new(6).run(&slices, &work);
        let qs: Vec<u64> = out.iter().map(|r| r.as_ref().unwrap().q).collect();
        assert_eq!(qs, slices);
        assert!(out.iter().all(|r| matches!(r, Ok(o) if o.count == o.q * o.q)));
    }
}
