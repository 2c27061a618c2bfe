#pragma once

#include <cstddef>
#include <vector>

namespace lsikit {

// Hard cluster assignment: one label in [0, k) per item.
class ClusterLabels {
public:
    ClusterLabels() = default;
    // Throws InvalidArgument if any label is >= k.
    ClusterLabels(std::vector<std::size_t> labels, std::size_t k);

    std::size_t k() const noexcept { return k_; }
    std::size_t size() const noexcept { return labels_.size(); }
    std::size_t operator[](std::size_t i) const noexcept { return labels_[i]; }
    const std::vector<std::size_t>& values() const noexcept { return labels_; }

    bool operator==(const ClusterLabels&) const = default;

private:
    std::vector<std::size_t> labels_;
    std::size_t k_ = 0;
};

}  // namespace lsikit
