#include "bpgd/tanner.hpp"

#include <queue>

namespace bpgd {

TannerGraph::TannerGraph(const BitMatrix& H) {
    num_vars = H.cols();
    num_checks = H.rows();
    check_offset.assign(num_checks + 1, 0);
    std::vector<std::int32_t> var_deg(num_vars, 0);

    for (std::size_t c = 0; c < num_checks; ++c) {
        auto sup = H.row(c).support();
        check_offset[c + 1] = check_offset[c] + static_cast<std::int32_t>(sup.size());
        for (std::size_t v : sup) {
            edge_var.push_back(static_cast<std::int32_t>(v));
            edge_check.push_back(static_cast<std::int32_t>(c));
            ++var_deg[v];
        }
    }
    var_offset.assign(num_vars + 1, 0);
    for (std::size_t v = 0; v < num_vars; ++v) var_offset[v + 1] = var_offset[v] + var_deg[v];
    var_edges.assign(edge_var.size(), 0);
    std::vector<std::int32_t> cursor(var_offset.begin(), var_offset.end() - 1);
    for (std::size_t e = 0; e < edge_var.size(); ++e)
        var_edges[cursor[edge_var[e]]++] = static_cast<std::int32_t>(e);
}

std::size_t TannerGraph::diameter() const {
    // nodes 0..num_vars-1 = variables, num_vars..num_vars+num_checks-1 = checks
    std::size_t total = num_vars + num_checks;
    auto bfs_far = [&](std::size_t start, std::size_t& far_dist) {
        std::vector<std::int32_t> dist(total, -1);
        std::queue<std::size_t> q;
        dist[start] = 0;
        q.push(start);
        std::size_t far = start;
        far_dist = 0;
        while (!q.empty()) {
            std::size_t u = q.front();
            q.pop();
            auto visit = [&](std::size_t w) {
                if (dist[w] < 0) {
                    dist[w] = dist[u] + 1;
                    if (static_cast<std::size_t>(dist[w]) > far_dist) {
                        far_dist = dist[w];
                        far = w;
                    }
                    q.push(w);
                }
            };
            if (u < num_vars) {
                for (std::int32_t i = var_offset[u]; i < var_offset[u + 1]; ++i)
                    visit(num_vars + edge_check[var_edges[i]]);
            } else {
                std::size_t c = u - num_vars;
                for (std::int32_t i = check_offset[c]; i < check_offset[c + 1]; ++i)
                    visit(edge_var[i]);
            }
        }
        return far;
    };

    std::vector<bool> seen(total, false);
    std::size_t best = 0;
    for (std::size_t s = 0; s < total; ++s) {
        if (seen[s]) continue;
        // mark the component
        std::size_t d0;
        std::size_t far = bfs_far(s, d0);
        {
            std::vector<std::int32_t> dist(total, -1);
            std::queue<std::size_t> q;
            dist[s] = 0;
            q.push(s);
            seen[s] = true;
            while (!q.empty()) {
                std::size_t u = q.front();
                q.pop();
                auto visit = [&](std::size_t w) {
                    if (dist[w] < 0) {
                        dist[w] = dist[u] + 1;
                        seen[w] = true;
                        q.push(w);
                    }
                };
                if (u < num_vars) {
                    for (std::int32_t i = var_offset[u]; i < var_offset[u + 1]; ++i)
                        visit(num_vars + edge_check[var_edges[i]]);
                } else {
                    std::size_t c = u - num_vars;
                    for (std::int32_t i = check_offset[c]; i < check_offset[c + 1]; ++i)
                        visit(edge_var[i]);
                }
            }
        }
        // double sweep: farthest-from-farthest is the component diameter on trees
        // and a solid lower bound in general
        std::size_t d1;
        bfs_far(far, d1);
        if (d1 > best) best = d1;
    }
    return best;
}

}  // namespace bpgd
