#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace subdiff {

/// Values of a scalar function sampled on a uniform grid over [0, length]
/// (n+1 nodes including both endpoints).
class GridFunction {
public:
    GridFunction() = default;
    /// Validates uniform spacing (to 1e-14 relative) and matching lengths.
    GridFunction(std::vector<double> nodes, std::vector<double> values);

    /// Zero-valued function on a uniform grid with n intervals over [0, length].
    static GridFunction uniform(std::size_t n, double length = 1.0);

    const std::vector<double>& nodes() const { return nodes_; }
    const std::vector<double>& values() const { return values_; }
    std::vector<double>& values() { return values_; }

    std::size_t size() const { return values_.size(); }
    std::size_t intervals() const { return values_.empty() ? 0 : values_.size() - 1; }
    double spacing() const { return spacing_; }
    double length() const { return nodes_.empty() ? 0.0 : nodes_.back(); }

    double operator[](std::size_t i) const { return values_[i]; }
    double& operator[](std::size_t i) { return values_[i]; }

private:
    std::vector<double> nodes_;
    std::vector<double> values_;
    double spacing_ = 0.0;
};

/// Values of u(x,t) on the tensor grid of [0,1] x [0,T], time-major storage.
struct SpaceTimeField {
    std::vector<double> x_nodes;
    std::vector<double> t_nodes;
    std::vector<double> values; // values[m * nx() + i] = u(x_i, t_m)

    bool t0_extrapolated = false; // the t=0 row was filled by extrapolation
    std::string note;             // accuracy flags (e.g. extrapolation order)

    std::size_t nx() const { return x_nodes.size(); }
    std::size_t nt() const { return t_nodes.size(); }
    double at(std::size_t i, std::size_t m) const { return values[m * nx() + i]; }
    double& at(std::size_t i, std::size_t m) { return values[m * nx() + i]; }

    /// Copy of the row at time index m.
    std::vector<double> time_slice(std::size_t m) const;
    /// Copy of the history of node i over all times.
    std::vector<double> space_slice(std::size_t i) const;
};

double max_norm(std::span<const double> v);
double max_abs_diff(std::span<const double> a, std::span<const double> b);

/// n+1 equally spaced nodes covering [0, length].
std::vector<double> linspace(std::size_t n, double length);

} // namespace subdiff
