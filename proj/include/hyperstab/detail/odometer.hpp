#pragma once

#include <vector>

namespace hyperstab::detail {

/// Advances a base-n multi-index (last digit fastest, matching the row-major
/// entry layout); returns false after the last tuple wraps back to all zeros.
inline bool next_multi_index(std::vector<int>& idx, int n) {
    for (int pos = static_cast<int>(idx.size()) - 1; pos >= 0; --pos) {
        if (++idx[pos] < n) return true;
        idx[pos] = 0;
    }
    return false;
}

} // namespace hyperstab::detail
