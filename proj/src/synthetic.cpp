#include "lsikit/synthetic.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include "lsikit/error.hpp"
#include "lsikit/random.hpp"

namespace lsikit {
namespace {

LabeledPoints assemble(const std::vector<double>& xs, const std::vector<double>& ys, std::vector<std::size_t> labels,
                       std::size_t k) {
    DenseMatrix p(2, xs.size());
    for (std::size_t j = 0; j < xs.size(); ++j) {
        p(0, j) = xs[j];
        p(1, j) = ys[j];
    }
    return {std::move(p), ClusterLabels(std::move(labels), k)};
}

}  // namespace

LabeledPoints two_rings(std::size_t per_ring, double noise, std::uint64_t seed) {
    if (per_ring == 0 || noise < 0.0) throw InvalidArgument("two_rings: need per_ring > 0 and noise >= 0");
    Rng rng(seed);
    std::vector<double> xs, ys;
    std::vector<std::size_t> labels;
    const double radii[2] = {1.0, 5.0};
    for (std::size_t c = 0; c < 2; ++c) {
        for (std::size_t i = 0; i < per_ring; ++i) {
            const double t = 2.0 * std::numbers::pi * rng.uniform();
            const double r = radii[c] + noise * rng.normal();
            xs.push_back(r * std::cos(t));
            ys.push_back(r * std::sin(t));
            labels.push_back(c);
        }
    }
    return assemble(xs, ys, std::move(labels), 2);
}

LabeledPoints half_moons(std::size_t per_moon, double noise, std::uint64_t seed) {
    if (per_moon == 0 || noise < 0.0) throw InvalidArgument("half_moons: need per_moon > 0 and noise >= 0");
    Rng rng(seed);
    std::vector<double> xs, ys;
    std::vector<std::size_t> labels;
    for (std::size_t c = 0; c < 2; ++c) {
        for (std::size_t i = 0; i < per_moon; ++i) {
            const double t = std::numbers::pi * rng.uniform();
            double x = std::cos(t), y = std::sin(t);
            if (c == 1) {
                x = 1.0 - x;
                y = 0.5 - y;
            }
            xs.push_back(x + noise * rng.normal());
            ys.push_back(y + noise * rng.normal());
            labels.push_back(c);
        }
    }
    return assemble(xs, ys, std::move(labels), 2);
}

LabeledPoints gaussian_blobs(std::size_t k, std::size_t per_blob, double spacing, double sigma, std::uint64_t seed) {
    if (k == 0 || per_blob == 0 || sigma < 0.0) throw InvalidArgument("gaussian_blobs: bad parameters");
    Rng rng(seed);
    std::vector<double> xs, ys;
    std::vector<std::size_t> labels;
    const double radius = k == 1 ? 0.0 : spacing / (2.0 * std::sin(std::numbers::pi / static_cast<double>(k)));
    for (std::size_t c = 0; c < k; ++c) {
        const double t = 2.0 * std::numbers::pi * static_cast<double>(c) / static_cast<double>(k);
        for (std::size_t i = 0; i < per_blob; ++i) {
            xs.push_back(radius * std::cos(t) + sigma * rng.normal());
            ys.push_back(radius * std::sin(t) + sigma * rng.normal());
            labels.push_back(c);
        }
    }
    return assemble(xs, ys, std::move(labels), k);
}

}  // namespace lsikit
