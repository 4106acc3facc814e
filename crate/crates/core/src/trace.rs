//! Records which expansion primitives a builder calls.
//!
//! Only outermost calls are logged: a primitive invoked from inside another
//! primitive is an implementation detail of the outer one. The log is used to
//! show that the two sides of an identity are computed along disjoint routes.

use std::cell::{Cell, RefCell};

thread_local! {
    static DEPTH: Cell<usize> = const { Cell::new(0) };
    static LOG: RefCell<Option<Vec<Call>>> = const { RefCell::new(None) };
}

/// One logged primitive call.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Call {
    pub name: &'static str,
    pub args: String,
}

/// Scope guard for a primitive call.
pub struct Guard(());

impl Drop for Guard {
    fn drop(&mut self) {
        DEPTH.with(|d| d.set(d.get() - 1));
    }
}

/// Marks entry into primitive `name`; `args` is only evaluated when recording.
pub fn enter(name: &'static str, args: impl FnOnce() -> String) -> Guard {
    let depth = DEPTH.with(|d| {
        let v = d.get();
        d.set(v + 1);
        v
    });
    if depth == 0 {
        LOG.with(|log| {
            if let Some(calls) = log.borrow_mut().as_mut() {
                calls.push(Call { name, args: args() });
            }
        });
    }
    Guard(())
}

/// Runs `f` and returns its result with the calls it made.
pub fn record<T>(f: impl FnOnce() -> T) -> (T, Vec<Call>) {
    let saved = LOG.with(|log| log.borrow_mut().replace(Vec::new()));
    let out = f();
    let calls = LOG.with(|log| std::mem::replace(&mut *log.borrow_mut(), saved)).unwrap_or_default();
    (out, calls)
}
