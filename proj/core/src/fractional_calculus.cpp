#include "subdiff/fractional_calculus.hpp"

#include "subdiff/errors.hpp"
#include "subdiff/special_functions.hpp"

#include <cmath>

namespace subdiff {

std::vector<double> rl_integral(std::span<const double> h, double dt, double sigma) {
    if (!(sigma > 0.0)) throw DomainError("rl_integral: order must be positive");
    if (h.size() < 2) throw DomainError("rl_integral: need at least two samples");
    const std::size_t n = h.size();
    std::vector<double> out(n, 0.0);

    // powers j^(sigma+1) reused across rows
    std::vector<double> pw(n + 1);
    for (std::size_t j = 0; j <= n; ++j)
        pw[j] = std::pow(static_cast<double>(j), sigma + 1.0);

    const double scale = std::pow(dt, sigma) * reciprocal_gamma(sigma + 2.0);
    for (std::size_t i = 1; i < n; ++i) {
        const double di = static_cast<double>(i);
        const double c0 = pw[i - 1] - pw[i] + (sigma + 1.0) * std::pow(di, sigma);
        double acc = c0 * h[0];
        double comp = 0.0;
        for (std::size_t j = 1; j < i; ++j) {
            const std::size_t d = i - j;
            const double c = pw[d + 1] - 2.0 * pw[d] + pw[d - 1];
            const double y = c * h[j] - comp;
            const double s = acc + y;
            comp = (s - acc) - y;
            acc = s;
        }
        out[i] = scale * (acc + h[i]); // c_{i,i} = 1
    }
    return out;
}

GridFunction rl_integral(const GridFunction& h, double sigma) {
    return GridFunction(h.nodes(), rl_integral(h.values(), h.spacing(), sigma));
}

std::vector<double> caputo_l1(std::span<const double> h, double dt, double alpha) {
    if (!(alpha > 0.0) || !(alpha < 1.0))
        throw DomainError("caputo_l1: order must lie in (0,1)");
    if (h.size() < 2) throw DomainError("caputo_l1: need at least two time points");
    const std::size_t n = h.size();
    std::vector<double> out(n, 0.0);

    std::vector<double> b(n);
    for (std::size_t k = 0; k < n; ++k)
        b[k] = std::pow(static_cast<double>(k + 1), 1.0 - alpha) -
               std::pow(static_cast<double>(k), 1.0 - alpha);

    const double scale = reciprocal_gamma(2.0 - alpha) / std::pow(dt, alpha);
    for (std::size_t i = 1; i < n; ++i) {
        // compensated history sum: long-memory weights accumulate error
        double acc = 0.0, comp = 0.0;
        for (std::size_t k = 0; k < i; ++k) {
            const double term = b[k] * (h[i - k] - h[i - k - 1]);
            const double y = term - comp;
            const double s = acc + y;
            comp = (s - acc) - y;
            acc = s;
        }
        out[i] = scale * acc;
    }
    return out;
}

GridFunction caputo_l1(const GridFunction& h, double alpha) {
    return GridFunction(h.nodes(), caputo_l1(h.values(), h.spacing(), alpha));
}

} // namespace subdiff
