use super::SchedulerError;
use crate::dag::Dag;

/// Chain `1..k` where task `k-2` also feeds `procs - 1` extra tasks that
/// all precede task `k`, next to a separate chain of `k - 1` tasks.
/// `n = 2k + procs - 2`; the optimal makespan is `k`.
pub fn hcpt_trap(k: usize, procs: usize) -> Result<Dag, SchedulerError> {
    if k < 3 || procs < 2 {
        return Err(SchedulerError::ParameterOutOfRange(format!(
            "hcpt_trap needs k >= 3 and at least 2 processors, got k = {k}, P = {procs}"
        )));
    }
    let extras = k..k + procs - 1;
    let second = k + procs - 1;
    let n = second + k - 1;
    let mut edges: Vec<(usize, usize)> = (1..k).map(|i| (i - 1, i)).collect();
    for x in extras {
        edges.push((k - 3, x));
        edges.push((x, k - 1));
    }
    edges.extend((second + 1..n).map(|i| (i - 1, i)));
    Ok(Dag::from_edges(n, edges).expect("trap construction is acyclic"))
}

/// Chain of `k` tasks plus `k (procs - 1)` independent tasks; `n = k procs`.
pub fn minmin_trap(k: usize, procs: usize) -> Result<Dag, SchedulerError> {
    if k < 2 || procs < 2 {
        return Err(SchedulerError::ParameterOutOfRange(format!(
            "minmin_trap needs k >= 2 and at least 2 processors, got k = {k}, P = {procs}"
        )));
    }
    Ok(Dag::from_edges(k * procs, (1..k).map(|i| (i - 1, i))).expect("chain is acyclic"))
}
