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

#pragma once

#include <numeric>
#include <vector>

namespace widecorr {

// Shared by the cluster-graph census and the contraction enumerator, where
// the same merge/count pattern runs millions of times.
class UnionFind {
public:
    explicit UnionFind(int size) : parent_(size)
    {
        std::iota(parent_.begin(), parent_.end(), 0);
    }

    int find(int v)
    {
        while (parent_[v] != v) {
            parent_[v] = parent_[parent_[v]]; // path halving
            v = parent_[v];
        }
        return v;
    }

    /// Returns true when the merge joined two distinct sets.
    bool merge(int a, int b)
    {
        a = find(a);
        b = find(b);
        if (a == b) {
            return false;
        }
        parent_[b] = a;
        return true;
    }

    int size() const { return static_cast<int>(parent_.size()); }

    int root_count()
    {
        int count = 0;
        for (int v = 0; v < size(); ++v) {
            if (find(v) == v) {
                ++count;
            }
        }
        return count;
    }

private:
    std::vector<int> parent_;
};

} // namespace widecorr
