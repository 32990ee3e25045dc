#pragma once

#include <cstdint>
#include <vector>

#include "bpgd/gf2.hpp"

namespace bpgd {

// Bipartite adjacency of a parity-check matrix, with one shared edge id space
// indexed both per check and per variable. Edge ids are assigned row-major
// (check by check, columns ascending), so adjacency lists come out sorted.
struct TannerGraph {
    std::size_t num_vars = 0;
    std::size_t num_checks = 0;
    std::vector<std::int32_t> check_offset;  // size num_checks+1, into edge id space
    std::vector<std::int32_t> var_offset;    // size num_vars+1
    std::vector<std::int32_t> var_edges;     // edge ids grouped by variable
    std::vector<std::int32_t> edge_var;      // edge id -> variable
    std::vector<std::int32_t> edge_check;    // edge id -> check

    TannerGraph() = default;
    explicit TannerGraph(const BitMatrix& H);

    std::size_t num_edges() const { return edge_var.size(); }
    std::size_t check_degree(std::size_t c) const { return check_offset[c + 1] - check_offset[c]; }
    std::size_t var_degree(std::size_t v) const { return var_offset[v + 1] - var_offset[v]; }

    // Longest shortest path (in edges) over the bipartite graph; isolated
    // vertices are ignored, disconnected components take the max. Used to pick
    // iteration counts that fully propagate on cycle-free instances.
    std::size_t diameter() const;
};

}  // namespace bpgd
