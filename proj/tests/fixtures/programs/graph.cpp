#include <iostream>
#include <queue>
#include <vector>

namespace {

std::vector<int> bfs(const std::vector<std::vector<int>>& adj, int start) {
    std::vector<int> dist(adj.size(), -1);
    std::queue<int> q;
    dist[start] = 0;
    q.push(start);
    while (!q.empty()) {
        int u = q.front();
        q.pop();
        for (int v : adj[u]) {
            if (dist[v] != -1) {
                continue;
            }
            dist[v] = dist[u] + 1;
            q.push(v);
        }
    }
    return dist;
}

int components(const std::vector<std::vector<int>>& adj) {
    std::vector<bool> seen(adj.size(), false);
    int count = 0;
    for (size_t i = 0; i < adj.size(); i++) {
        if (seen[i]) continue;
        count += 1;
        std::vector<int> d = bfs(adj, static_cast<int>(i));
        for (size_t j = 0; j < d.size(); j++) {
            if (d[j] >= 0) seen[j] = true;
        }
    }
    return count;
}

}  // namespace

int main() {
    int n = 0;
    int m = 0;
    std::cin >> n >> m;
    std::vector<std::vector<int>> adj(n);
    for (int i = 0; i < m; i++) {
        int a, b;
        std::cin >> a >> b;
        if (a < 0 || b < 0 || a >= n || b >= n) continue;
        adj[a].push_back(b);
        adj[b].push_back(a);
    }
    if (n > 0) {
        std::vector<int> d = bfs(adj, 0);
        for (int i = 0; i < n; i++) {
            std::cout << i << ":" << d[i] << "\n";
        }
    }
    std::cout << "components " << components(adj) << "\n";
    return 0;
}
