use crate::belief::Action;

/// Consecutive WAIT/IDLE actions that make an inactivity deadlock.
pub const DEADLOCK_RUN: usize = 4;

/// True iff the trace holds a run of at least `threshold` inactive actions,
/// ignoring the trailing IDLE-only run of a finished plan (one that directly
/// follows a real action).
pub fn detect_deadlock_with(trace: &[Action], threshold: usize) -> bool {
    let mut end = trace.len();
    while end > 0 && trace[end - 1] == Action::Idle {
        end -= 1;
    }
    if end > 0 && trace[end - 1].is_inactive() {
        end = trace.len();
    }
    let mut run = 0;
    for a in &trace[..end] {
        if a.is_inactive() {
            run += 1;
            if run >= threshold {
                return true;
            }
        } else {
            run = 0;
        }
    }
    false
}

pub fn detect_deadlock(trace: &[Action]) -> bool {
    detect_deadlock_with(trace, DEADLOCK_RUN)
}
