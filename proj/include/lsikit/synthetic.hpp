#pragma once

#include <cstddef>
#include <cstdint>

#include "lsikit/dense.hpp"
#include "lsikit/labels.hpp"

namespace lsikit {

// Points stored as columns, with their generating class.
struct LabeledPoints {
    DenseMatrix points;  // dim × n
    ClusterLabels labels;
};

// Two concentric 2-D rings of radius 1 and 5, `per_ring` points each,
// radius jittered by N(0, noise²).
LabeledPoints two_rings(std::size_t per_ring, double noise, std::uint64_t seed);

// Two interleaved half circles of unit radius with N(0, noise²) jitter on both axes.
LabeledPoints half_moons(std::size_t per_moon, double noise, std::uint64_t seed);

// k isotropic Gaussian blobs in 2-D, centers spaced `spacing` apart on a circle.
LabeledPoints gaussian_blobs(std::size_t k, std::size_t per_blob, double spacing, double sigma, std::uint64_t seed);

}  // namespace lsikit
