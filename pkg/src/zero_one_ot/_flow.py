"""Integer network-flow kernels used by the transport solvers.

Capacities and costs are Python ints, so results are exact. Callers clear
rational data to integers with a common denominator before calling in.
"""
from collections import deque


class FlowNetwork:
    """Residual graph in edge-list form; edge ``e ^ 1`` is the reverse of ``e``."""

    def __init__(self, n_nodes):
        self.n = n_nodes
        self.adj = [[] for _ in range(n_nodes)]
        self.head = []
        self.cap = []
        self.cost = []

    def add_edge(self, u, v, cap, cost=0):
        e = len(self.head)
        self.head += [v, u]
        self.cap += [cap, 0]
        self.cost += [cost, -cost]
        self.adj[u].append(e)
        self.adj[v].append(e + 1)
        return e

    def flow_on(self, e):
        return self.cap[e ^ 1]

    def reachable(self, source):
        """Nodes reachable from ``source`` through edges with residual capacity."""
        seen = [False] * self.n
        seen[source] = True
        queue = deque([source])
        head, cap, adj = self.head, self.cap, self.adj
        while queue:
            u = queue.popleft()
            for e in adj[u]:
                v = head[e]
                if cap[e] > 0 and not seen[v]:
                    seen[v] = True
                    queue.append(v)
        return seen


def max_flow(net, s, t):
    """Dinic's algorithm. Mutates ``net`` into its final residual graph."""
    head, cap, adj = net.head, net.cap, net.adj
    n = net.n
    total = 0
    while True:
        level = [-1] * n
        level[s] = 0
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for e in adj[u]:
                if cap[e] > 0 and level[head[e]] < 0:
                    level[head[e]] = level[u] + 1
                    queue.append(head[e])
        if level[t] < 0:
            return total
        it = [0] * n
        while True:
            pushed = _blocking_path(s, t, level, it, head, cap, adj)
            if not pushed:
                break
            total += pushed


def _blocking_path(s, t, level, it, head, cap, adj):
    # one augmenting path in the level graph, iterative DFS with edge pointers
    path = []
    u = s
    while True:
        if u == t:
            pushed = min(cap[e] for e in path)
            for e in path:
                cap[e] -= pushed
                cap[e ^ 1] += pushed
            return pushed
        edges = adj[u]
        advanced = False
        while it[u] < len(edges):
            e = edges[it[u]]
            v = head[e]
            if cap[e] > 0 and level[v] == level[u] + 1:
                path.append(e)
                u = v
                advanced = True
                break
            it[u] += 1
        if not advanced:
            if u == s:
                return 0
            level[u] = -1
            e = path.pop()
            u = head[e ^ 1]
            it[u] += 1


def min_cost_flow(net, s, t, demand):
    """Successive shortest paths (Bellman-Ford queue variant) pushing ``demand`` units.

    Returns ``(flow, cost)``; ``flow < demand`` when the network cannot carry it.
    Negative arc costs are allowed as long as no negative cycle is reachable.
    """
    head, cap, cost, adj = net.head, net.cap, net.cost, net.adj
    n = net.n
    flow = total_cost = 0
    while flow < demand:
        dist = [None] * n
        prev = [-1] * n
        in_queue = [False] * n
        dist[s] = 0
        queue = deque([s])
        while queue:
            u = queue.popleft()
            in_queue[u] = False
            du = dist[u]
            for e in adj[u]:
                if cap[e] > 0:
                    v = head[e]
                    nd = du + cost[e]
                    if dist[v] is None or nd < dist[v]:
                        dist[v] = nd
                        prev[v] = e
                        if not in_queue[v]:
                            in_queue[v] = True
                            queue.append(v)
        if dist[t] is None:
            break
        push = demand - flow
        v = t
        while v != s:
            e = prev[v]
            push = min(push, cap[e])
            v = head[e ^ 1]
        v = t
        while v != s:
            e = prev[v]
            cap[e] -= push
            cap[e ^ 1] += push
            v = head[e ^ 1]
        flow += push
        total_cost += push * dist[t]
    return flow, total_cost


def shortest_distances(n, arcs):
    """Bellman-Ford from a virtual root joined to every node with weight 0.

    ``arcs`` holds ``(u, v, w)`` triples; weights may be any exact ordered type.
    Raises ``ValueError`` on a negative cycle.
    """
    dist = [0] * n
    for _ in range(n):
        changed = False
        for u, v, w in arcs:
            nd = dist[u] + w
            if nd < dist[v]:
                dist[v] = nd
                changed = True
        if not changed:
            return dist
    raise ValueError("negative cycle in residual graph")
