#pragma once

#include <cstddef>
#include <vector>

namespace znec {

// Visit all size-k index subsets of [0, n) in lexicographic order. The
// visitor returns true to stop early; the function reports whether it did.
template <typename Fn>
bool for_each_subset(std::size_t n, std::size_t k, Fn&& fn) {
    if (k > n) return false;
    std::vector<std::size_t> idx(k);
    for (std::size_t i = 0; i < k; ++i) idx[i] = i;
    while (true) {
        if (fn(static_cast<const std::vector<std::size_t>&>(idx))) return true;
        std::size_t i = k;
        bool advanced = false;
        while (i > 0) {
            --i;
            if (idx[i] != i + n - k) {
                ++idx[i];
                for (std::size_t j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
                advanced = true;
                break;
            }
        }
        if (!advanced) return false;
    }
}

}  // namespace znec
