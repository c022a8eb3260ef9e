#pragma once

#include <initializer_list>
#include <utility>
#include <vector>

#include "mstlab/multigraph.hpp"

namespace fx {

inline mstlab::Multigraph graph(int n, std::initializer_list<std::pair<int, int>> edges) {
    mstlab::Multigraph g(n);
    for (auto [u, v] : edges) g.add_edge(u, v);
    return g;
}

inline mstlab::Multigraph theta() { return graph(2, {{0, 1}, {0, 1}, {0, 1}}); }
inline mstlab::Multigraph triangle() { return graph(3, {{0, 1}, {1, 2}, {0, 2}}); }
inline mstlab::Multigraph k4() { return graph(4, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}); }

inline mstlab::Multigraph cycle(int n) {
    mstlab::Multigraph g(n);
    for (int i = 0; i < n; ++i) g.add_edge(i, (i + 1) % n);
    return g;
}

inline mstlab::Multigraph path(int n) {
    mstlab::Multigraph g(n);
    for (int i = 0; i + 1 < n; ++i) g.add_edge(i, i + 1);
    return g;
}

inline mstlab::Multigraph star(int leaves) {
    mstlab::Multigraph g(leaves + 1);
    for (int i = 1; i <= leaves; ++i) g.add_edge(0, i);
    return g;
}

// two triangles {0,1,2} and {3,4,5} joined by the bridge 2-3 (edge id 6)
inline mstlab::Multigraph bridged_triangles() {
    return graph(6, {{0, 1}, {1, 2}, {0, 2}, {3, 4}, {4, 5}, {3, 5}, {2, 3}});
}

}  // namespace fx
