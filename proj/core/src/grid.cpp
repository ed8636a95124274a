#include "subdiff/grid.hpp"

#include "subdiff/errors.hpp"

#include <algorithm>
#include <cmath>

namespace subdiff {

GridFunction::GridFunction(std::vector<double> nodes, std::vector<double> values)
    : nodes_(std::move(nodes)), values_(std::move(values)) {
    if (nodes_.size() != values_.size())
        throw DomainError("GridFunction: node/value length mismatch");
    if (nodes_.size() < 2) throw DomainError("GridFunction: need at least two nodes");
    spacing_ = nodes_[1] - nodes_[0];
    if (!(spacing_ > 0.0)) throw DomainError("GridFunction: nodes must increase");
    const double scale = std::max(std::fabs(nodes_.back()), 1.0);
    for (std::size_t i = 1; i < nodes_.size(); ++i) {
        if (std::fabs(nodes_[i] - nodes_[i - 1] - spacing_) > 1e-14 * scale)
            throw DomainError("GridFunction: grid is not uniform");
    }
}

GridFunction GridFunction::uniform(std::size_t n, double length) {
    return GridFunction(linspace(n, length), std::vector<double>(n + 1, 0.0));
}

std::vector<double> SpaceTimeField::time_slice(std::size_t m) const {
    return {values.begin() + static_cast<std::ptrdiff_t>(m * nx()),
            values.begin() + static_cast<std::ptrdiff_t>((m + 1) * nx())};
}

std::vector<double> SpaceTimeField::space_slice(std::size_t i) const {
    std::vector<double> out(nt());
    for (std::size_t m = 0; m < nt(); ++m) out[m] = at(i, m);
    return out;
}

double max_norm(std::span<const double> v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::fabs(x));
    return m;
}

double max_abs_diff(std::span<const double> a, std::span<const double> b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::fabs(a[i] - b[i]));
    return m;
}

std::vector<double> linspace(std::size_t n, double length) {
    std::vector<double> x(n + 1);
    for (std::size_t i = 0; i <= n; ++i)
        x[i] = length * static_cast<double>(i) / static_cast<double>(n);
    return x;
}

} // namespace subdiff
