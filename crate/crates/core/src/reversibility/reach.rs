use std::collections::{BTreeSet, VecDeque};

use crate::formula::CapExceeded;
use crate::model::{PlanningTask, State};

/// All states reachable from the initial state of `task`, including it.
/// Fails once more than `cap` states have been discovered.
pub fn reachable_states(task: &PlanningTask, cap: usize) -> Result<BTreeSet<State>, CapExceeded> {
    let d = &task.domain;
    let mut seen = BTreeSet::from([task.init.clone()]);
    if seen.len() > cap {
        return Err(CapExceeded::States { cap });
    }
    let mut queue = VecDeque::from([task.init.clone()]);
    while let Some(s) = queue.pop_front() {
        for a in d.actions().iter().filter(|a| a.applicable_in(&s)) {
            let n = a.successor(&s);
            if !seen.contains(&n) {
                seen.insert(n.clone());
                if seen.len() > cap {
                    return Err(CapExceeded::States { cap });
                }
                queue.push_back(n);
            }
        }
    }
    Ok(seen)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::fixtures::{example1, rev2};

    #[test]
    fn example1_reaches_both_states() {
        let d = example1();
        let task = PlanningTask::new(d.clone(), d.empty_state(), d.empty_state()).unwrap();
        let r = reachable_states(&task, 100).unwrap();
        assert_eq!(
            r,
            BTreeSet::from([d.empty_state(), d.state(&["f"]).unwrap()])
        );
    }

    #[test]
    fn rev2_reaches_everything_but_f1_alone() {
        let d = rev2();
        let task = PlanningTask::new(d.clone(), d.empty_state(), d.empty_state()).unwrap();
        let r = reachable_states(&task, 100).unwrap();
        assert_eq!(r.len(), 3);
        assert!(!r.contains(&d.state(&["f1"]).unwrap()));
        let from_f1 =
            PlanningTask::new(d.clone(), d.state(&["f1"]).unwrap(), d.empty_state()).unwrap();
        assert_eq!(reachable_states(&from_f1, 100).unwrap().len(), 4);
    }

    #[test]
    fn cap_is_enforced() {
        let d = rev2();
        let task = PlanningTask::new(d.clone(), d.empty_state(), d.empty_state()).unwrap();
        assert_eq!(
            reachable_states(&task, 2),
            Err(CapExceeded::States { cap: 2 })
        );
        assert_eq!(reachable_states(&task, 3).unwrap().len(), 3);
    }
}
