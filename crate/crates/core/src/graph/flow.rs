use std::collections::VecDeque;

/// Residual network for Dinic's algorithm. Arc `2k` is a forward arc and
/// `2k + 1` its reverse.
#[derive(Debug, Clone)]
pub(crate) struct FlowNetwork {
    adj: Vec<Vec<usize>>,
    to: Vec<usize>,
    cap: Vec<u64>,
    initial: Vec<u64>,
    level: Vec<i32>,
    next_arc: Vec<usize>,
}

impl FlowNetwork {
    pub fn new(nodes: usize) -> Self {
        FlowNetwork {
            adj: vec![Vec::new(); nodes],
            to: Vec::new(),
            cap: Vec::new(),
            initial: Vec::new(),
            level: vec![-1; nodes],
            next_arc: vec![0; nodes],
        }
    }

    pub fn add_arc(&mut self, from: usize, to: usize, cap: u64) {
        self.adj[from].push(self.to.len());
        self.to.push(to);
        self.cap.push(cap);
        self.adj[to].push(self.to.len());
        self.to.push(from);
        self.cap.push(0);
    }

    /// Freezes the current capacities as the state [`reset`](Self::reset)
    /// returns to.
    pub fn seal(&mut self) {
        self.initial = self.cap.clone();
    }

    pub fn reset(&mut self) {
        self.cap.copy_from_slice(&self.initial);
    }

    fn bfs(&mut self, source: usize, sink: usize) -> bool {
        self.level.fill(-1);
        self.level[source] = 0;
        let mut queue = VecDeque::from([source]);
        while let Some(u) = queue.pop_front() {
            for &e in &self.adj[u] {
                let v = self.to[e];
                if self.cap[e] > 0 && self.level[v] < 0 {
                    self.level[v] = self.level[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        self.level[sink] >= 0
    }

    fn dfs(&mut self, u: usize, sink: usize, pushed: u64) -> u64 {
        if u == sink {
            return pushed;
        }
        while self.next_arc[u] < self.adj[u].len() {
            let e = self.adj[u][self.next_arc[u]];
            let v = self.to[e];
            if self.cap[e] > 0 && self.level[v] == self.level[u] + 1 {
                let got = self.dfs(v, sink, pushed.min(self.cap[e]));
                if got > 0 {
                    self.cap[e] -= got;
                    self.cap[e ^ 1] += got;
                    return got;
                }
            }
            self.next_arc[u] += 1;
        }
        0
    }

    /// Maximum flow from `source` to `sink`, stopping early once the flow
    /// reaches `limit`.
    pub fn max_flow(&mut self, source: usize, sink: usize, limit: u64) -> u64 {
        let mut flow = 0u64;
        while flow < limit && self.bfs(source, sink) {
            self.next_arc.fill(0);
            loop {
                let pushed = self.dfs(source, sink, limit - flow);
                if pushed == 0 {
                    break;
                }
                flow += pushed;
                if flow >= limit {
                    break;
                }
            }
        }
        flow
    }

    /// Nodes reachable from `source` in the residual network.
    pub fn reachable(&self, source: usize) -> Vec<bool> {
        let mut seen = vec![false; self.adj.len()];
        seen[source] = true;
        let mut stack = vec![source];
        while let Some(u) = stack.pop() {
            for &e in &self.adj[u] {
                let v = self.to[e];
                if self.cap[e] > 0 && !seen[v] {
                    seen[v] = true;
                    stack.push(v);
                }
            }
        }
        seen
    }
}
