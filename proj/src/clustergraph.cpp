// Licensed under the Apache License, Version 2.0 (the "License"); you
// may not use this file except in compliance with the License.  You
// may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or
// implied.  See the License for the specific language governing
// permissions and limitations under the License.

#include "widecorr/clustergraph.hpp"

#include "widecorr/unionfind.hpp"

#include <algorithm>
#include <map>

namespace widecorr {

ClusterGraph cluster_graph_from_edges(int vertex_count,
                                      const std::vector<std::pair<int, int>>& edges)
{
    ClusterGraph g;
    g.vertex_count = vertex_count;
    UnionFind uf(vertex_count);
    for (auto [a, b] : edges) {
        if (a == b) {
            continue; // self-contractions do not link distinct tensors
        }
        auto e = std::minmax(a, b);
        g.edges.emplace_back(e.first, e.second);
        uf.merge(a, b);
    }
    std::sort(g.edges.begin(), g.edges.end());
    g.edges.erase(std::unique(g.edges.begin(), g.edges.end()), g.edges.end());

    std::map<int, std::vector<int>> by_root;
    for (int v = 0; v < vertex_count; ++v) {
        by_root[uf.find(v)].push_back(v);
    }
    for (auto& [root, members] : by_root) {
        if (members.size() % 2 == 0) {
            ++g.n_even;
        } else {
            ++g.n_odd;
        }
        g.components.push_back(std::move(members));
    }
    std::sort(g.components.begin(), g.components.end());
    return g;
}

ClusterGraph build_cluster_graph(const CorrelationSpec& spec)
{
    std::vector<std::pair<int, int>> edges;
    for (const auto& p : spec.pairings()) {
        edges.emplace_back(p.first.tensor, p.second.tensor);
    }
    return cluster_graph_from_edges(spec.tensor_count(), edges);
}

HalfInt predict_exponent(const ClusterGraph& graph)
{
    // n_even + (n_odd - m) / 2, carried exactly in halves.
    return HalfInt::halves(2 * graph.n_even + graph.n_odd - graph.vertex_count);
}

HalfInt predict_variance_exponent(const ClusterGraph& graph)
{
    HalfInt s_c = predict_exponent(graph);
    HalfInt doubled = s_c + s_c;
    return graph.n_odd == 0 ? doubled - HalfInt::whole(1) : doubled;
}

CovarianceExponent predict_covariance_exponent(const ClusterGraph& gx, const ClusterGraph& gy)
{
    const int odd_total = gx.n_odd + gy.n_odd;
    if (odd_total % 2 != 0) {
        return CovarianceExponent{true, HalfInt{}};
    }
    HalfInt sum = predict_exponent(gx) + predict_exponent(gy);
    if (odd_total == 0) {
        return CovarianceExponent{false, sum - HalfInt::whole(1)};
    }
    return CovarianceExponent{false, sum};
}

} // namespace widecorr
