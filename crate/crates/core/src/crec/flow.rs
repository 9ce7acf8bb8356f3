//! Successive-shortest-path min-cost flow on integer costs.
//!
//! Node potentials keep reduced costs nonnegative so every phase is a
//! Dijkstra run. Within a phase all shortest augmenting paths are saturated
//! at once with a blocking flow over the zero-reduced-cost arcs. Flow is only
//! pushed while a shortest path has negative cost, which yields the
//! minimum-cost flow of *any* value: the right objective when demands are
//! upper bounds rather than equalities.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, VecDeque};

const INF: i64 = i64::MAX / 4;

#[derive(Debug, Clone)]
pub struct MinCostFlow {
    adj: Vec<Vec<usize>>,
    to: Vec<usize>,
    cap: Vec<i64>,
    cost: Vec<i64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct FlowOutcome {
    pub flow: i64,
    pub cost: i64,
    pub phases: u64,
    pub augmentations: u64,
}

impl MinCostFlow {
    pub fn new(nodes: usize) -> Self {
        MinCostFlow {
            adj: vec![Vec::new(); nodes],
            to: Vec::new(),
            cap: Vec::new(),
            cost: Vec::new(),
        }
    }

    pub fn nodes(&self) -> usize {
        self.adj.len()
    }

    /// Adds an arc and its residual twin; returns the arc id. The twin is
    /// `id ^ 1`.
    pub fn add_arc(&mut self, from: usize, to: usize, cap: i64, cost: i64) -> usize {
        assert!(cap >= 0, "negative capacity");
        let id = self.to.len();
        self.to.extend([to, from]);
        self.cap.extend([cap, 0]);
        self.cost.extend([cost, -cost]);
        self.adj[from].push(id);
        self.adj[to].push(id + 1);
        id
    }

    /// Flow currently carried by arc `id`.
    pub fn flow_on(&self, id: usize) -> i64 {
        self.cap[id ^ 1]
    }

    fn tail(&self, id: usize) -> usize {
        self.to[id ^ 1]
    }

    /// Pushes flow from `s` to `t` along successively cheaper-first paths
    /// while the path cost is negative.
    pub fn min_cost_any_flow(&mut self, s: usize, t: usize) -> FlowOutcome {
        let n = self.nodes();
        let mut out = FlowOutcome::default();
        let mut h = self.initial_potentials(s);
        let mut dist = vec![INF; n];
        let mut level = vec![u32::MAX; n];
        let mut iter = vec![0usize; n];
        loop {
            self.dijkstra(s, t, &h, &mut dist);
            if dist[t] >= INF {
                break;
            }
            let path_cost = dist[t] - h[s] + h[t];
            if path_cost >= 0 {
                break;
            }
            let dt = dist[t];
            for v in 0..n {
                h[v] += dist[v].min(dt);
            }
            out.phases += 1;
            loop {
                if !self.admissible_levels(s, t, &h, &mut level) {
                    break;
                }
                iter.iter_mut().for_each(|x| *x = 0);
                let (pushed, paths) = self.blocking_flow(s, t, &h, &level, &mut iter);
                if pushed == 0 {
                    break;
                }
                out.flow += pushed;
                out.cost += pushed * path_cost;
                out.augmentations += paths;
            }
        }
        out
    }

    // Bellman-Ford over arcs with residual capacity. Arcs added in
    // topological order converge in one sweep plus one confirming sweep.
    fn initial_potentials(&self, s: usize) -> Vec<i64> {
        let n = self.nodes();
        let mut h = vec![INF; n];
        h[s] = 0;
        for _ in 0..n {
            let mut changed = false;
            for a in 0..self.to.len() {
                if self.cap[a] <= 0 {
                    continue;
                }
                let u = self.tail(a);
                if h[u] >= INF {
                    continue;
                }
                let nd = h[u] + self.cost[a];
                if nd < h[self.to[a]] {
                    h[self.to[a]] = nd;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        // Unreachable nodes stay unreachable, their potential is irrelevant.
        for v in &mut h {
            if *v >= INF {
                *v = 0;
            }
        }
        h
    }

    fn dijkstra(&self, s: usize, t: usize, h: &[i64], dist: &mut [i64]) {
        dist.iter_mut().for_each(|d| *d = INF);
        dist[s] = 0;
        let mut heap = BinaryHeap::new();
        heap.push(Reverse((0i64, s)));
        while let Some(Reverse((d, u))) = heap.pop() {
            if d > dist[u] {
                continue;
            }
            if u == t {
                break;
            }
            for &a in &self.adj[u] {
                if self.cap[a] <= 0 {
                    continue;
                }
                let v = self.to[a];
                let nd = d + self.cost[a] + h[u] - h[v];
                debug_assert!(self.cost[a] + h[u] - h[v] >= 0, "negative reduced cost");
                if nd < dist[v] {
                    dist[v] = nd;
                    heap.push(Reverse((nd, v)));
                }
            }
        }
    }

    fn admissible(&self, a: usize, h: &[i64]) -> bool {
        self.cap[a] > 0 && self.cost[a] + h[self.tail(a)] - h[self.to[a]] == 0
    }

    fn admissible_levels(&self, s: usize, t: usize, h: &[i64], level: &mut [u32]) -> bool {
        level.iter_mut().for_each(|l| *l = u32::MAX);
        level[s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for &a in &self.adj[u] {
                let v = self.to[a];
                if level[v] == u32::MAX && self.admissible(a, h) {
                    level[v] = level[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        level[t] != u32::MAX
    }

    fn blocking_flow(
        &mut self,
        s: usize,
        t: usize,
        h: &[i64],
        level: &[u32],
        iter: &mut [usize],
    ) -> (i64, u64) {
        let mut total = 0;
        let mut paths = 0;
        let mut dead = vec![false; self.nodes()];
        let mut path: Vec<usize> = Vec::new();
        'search: loop {
            path.clear();
            let mut u = s;
            while u != t {
                let mut next = None;
                while iter[u] < self.adj[u].len() {
                    let a = self.adj[u][iter[u]];
                    let v = self.to[a];
                    if !dead[v] && level[v] == level[u] + 1 && self.admissible(a, h) {
                        next = Some(a);
                        break;
                    }
                    iter[u] += 1;
                }
                match next {
                    Some(a) => {
                        path.push(a);
                        u = self.to[a];
                    }
                    None => {
                        dead[u] = true;
                        match path.pop() {
                            None => break 'search,
                            Some(a) => {
                                u = self.tail(a);
                                iter[u] += 1;
                            }
                        }
                    }
                }
            }
            let push = path.iter().map(|&a| self.cap[a]).min().unwrap_or(0);
            for &a in &path {
                self.cap[a] -= push;
                self.cap[a ^ 1] += push;
            }
            total += push;
            paths += 1;
        }
        (total, paths)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stops_when_paths_become_unprofitable() {
        // s -> a -> t with cost -5, s -> b -> t with cost +2.
        let mut g = MinCostFlow::new(4);
        let sa = g.add_arc(0, 1, 1, 0);
        g.add_arc(1, 3, 1, -5);
        let sb = g.add_arc(0, 2, 1, 0);
        g.add_arc(2, 3, 1, 2);
        let out = g.min_cost_any_flow(0, 3);
        assert_eq!(out.flow, 1);
        assert_eq!(out.cost, -5);
        assert_eq!(g.flow_on(sa), 1);
        assert_eq!(g.flow_on(sb), 0);
    }

    #[test]
    fn reroutes_through_residual_arcs() {
        // Assignment: buyers 1,2 sellers 3,4; gains 4,1 / 2,3 → 7.
        let mut g = MinCostFlow::new(6);
        g.add_arc(0, 1, 1, 0);
        g.add_arc(0, 2, 1, 0);
        let e13 = g.add_arc(1, 3, 1, -4);
        let e14 = g.add_arc(1, 4, 1, -1);
        let e23 = g.add_arc(2, 3, 1, -2);
        let e24 = g.add_arc(2, 4, 1, -3);
        g.add_arc(3, 5, 1, 0);
        g.add_arc(4, 5, 1, 0);
        let out = g.min_cost_any_flow(0, 5);
        assert_eq!(out.cost, -7);
        assert_eq!(
            [e13, e14, e23, e24].map(|a| g.flow_on(a)),
            [1, 0, 0, 1]
        );
    }

    #[test]
    fn greedy_choice_is_undone() {
        // Taking the heaviest edge b1-s1 (10) first blocks two edges of 9.
        let mut g = MinCostFlow::new(6);
        g.add_arc(0, 1, 1, 0);
        g.add_arc(0, 2, 1, 0);
        g.add_arc(1, 3, 1, -10);
        g.add_arc(1, 4, 1, -9);
        g.add_arc(2, 3, 1, -9);
        g.add_arc(3, 5, 1, 0);
        g.add_arc(4, 5, 1, 0);
        assert_eq!(g.min_cost_any_flow(0, 5).cost, -18);
    }
}
