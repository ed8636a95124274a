#include "subdiff/propagator.hpp"

#include "subdiff/errors.hpp"
#include "subdiff/quadrature.hpp"
#include "subdiff/special_functions.hpp"

#include <functional>
#include <algorithm>
#include <cmath>
#include <numbers>

namespace subdiff {

namespace detail {

namespace {

// Chebyshev fit of f on [lo, hi] with npts nodes; coefficients for Clenshaw.
std::vector<double> chebyshev_fit(double lo, double hi, int npts,
                                  const std::function<double(double)>& f) {
    const double pi = std::numbers::pi;
    std::vector<double> fv(npts);
    for (int k = 0; k < npts; ++k) {
        const double theta = pi * (k + 0.5) / npts;
        const double x = 0.5 * (lo + hi) + 0.5 * (hi - lo) * std::cos(theta);
        fv[k] = f(x);
    }
    std::vector<double> c(npts);
    for (int j = 0; j < npts; ++j) {
        double acc = 0.0;
        for (int k = 0; k < npts; ++k)
            acc += fv[k] * std::cos(pi * j * (k + 0.5) / npts);
        c[j] = 2.0 * acc / npts;
    }
    return c;
}

double clenshaw(const std::vector<double>& c, double lo, double hi, double x) {
    const double u = (2.0 * x - lo - hi) / (hi - lo);
    double b1 = 0.0, b2 = 0.0;
    for (std::size_t j = c.size(); j-- > 1;) {
        const double b0 = 2.0 * u * b1 - b2 + c[j];
        b2 = b1;
        b1 = b0;
    }
    return u * b1 - b2 + 0.5 * c[0];
}

} // namespace

WrightProfileTable::WrightProfileTable(double beta) {
    const WrightIndices idx{1.0, beta, 1.0, beta};
    const double w0 = wright_e(idx, 0.0);
    const double floor = 1e-18 * w0;

    double lo = 0.0, hi = 1.0;
    while (true) {
        const int deg = 40;
        segments_.push_back({lo, hi, chebyshev_fit(lo, hi, deg, [&](double y) {
                                 return wright_e(idx, -y);
                             })});
        y_cut_ = hi;
        if (wright_e(idx, -hi) < floor || hi > 512.0) break;
        lo = hi;
        hi *= 2.0;
    }
}

double WrightProfileTable::operator()(double y) const {
    if (y >= y_cut_) return 0.0;
    // geometric segments [0,1], [1,2], [2,4], ...
    std::size_t idx = 0;
    if (y >= 1.0) idx = 1 + static_cast<std::size_t>(std::floor(std::log2(y)));
    if (idx >= segments_.size()) return 0.0;
    const Segment& s = segments_[idx];
    return clenshaw(s.cheb, s.lo, s.hi, y);
}

} // namespace detail

std::vector<double> PropagatorKernel::apply(std::span<const double> g) const {
    std::vector<double> out(n + 1, 0.0);
    for (std::size_t i = 0; i <= n; ++i) {
        double acc = 0.0;
        const double* row = k.data() + i * (n + 1);
        for (std::size_t j = 0; j <= n; ++j) acc += xi_weights[j] * row[j] * g[j];
        out[i] = acc;
    }
    return out;
}

PropagatorAssembler::PropagatorAssembler(double alpha, std::size_t n, PropagatorConfig cfg)
    : alpha_(alpha), n_(n), cfg_(cfg), table_(0.5 * alpha) {
    if (!(alpha > 0.0) || !(alpha < 1.0))
        throw DomainError("PropagatorAssembler: alpha must lie in (0,1)");
    if (n < 2) throw DomainError("PropagatorAssembler: need at least two intervals");
    cfg_.green.alpha = alpha;
}

PropagatorKernel PropagatorAssembler::assemble(double t, int quad_order) const {
    if (!(t > 0.0)) throw DomainError("assemble_propagator: t must be positive");
    const double beta = 0.5 * alpha_;
    const double h = 1.0 / static_cast<double>(n_);
    const double rate = wright_decay_rate(beta);

    // The eta integral int_0^t (t-eta)^(-alpha) G(.,eta,.,0) d eta is split
    // at t/2. Writing G = eta^(beta-1) Psi(eta^(-beta)):
    //  - on [t/2, t]: Jacobi weight (t-eta)^(-alpha), the rest is analytic;
    //  - on [0, t/2]: eta = (t/2) sigma^(1/beta) absorbs eta^(beta-1) d eta
    //    exactly and moves the Wright transition layer (located at
    //    eta ~ |x-xi|^(1/beta), exponentially close to 0) to sigma ~ |x-xi|,
    //    where Gauss-Legendre nodes can resolve it.
    struct Node {
        double sb; // eta^(-beta)
        double w;  // includes all scalar factors except 1/Gamma(1-alpha)
    };
    std::vector<Node> nodes;
    nodes.reserve(2 * static_cast<std::size_t>(quad_order));
    const double c = 0.5 * t;

    const QuadRule upper = gauss_jacobi(quad_order, -alpha_, 0.0);
    for (std::size_t q = 0; q < upper.nodes.size(); ++q) {
        const double eta = c + c * upper.nodes[q]; // eta in [t/2, t]
        nodes.push_back({std::pow(eta, -beta),
                         std::pow(c, 1.0 - alpha_) * upper.weights[q] *
                             std::pow(eta, beta - 1.0)});
    }
    const QuadRule lower = gauss_legendre(quad_order);
    const double cb = std::pow(c, beta);
    for (std::size_t q = 0; q < lower.nodes.size(); ++q) {
        const double sigma = lower.nodes[q];
        const double eta = c * std::pow(sigma, 1.0 / beta);
        nodes.push_back({1.0 / (cb * sigma),
                         (cb / beta) * lower.weights[q] * std::pow(t - eta, -alpha_)});
    }

    // K_ij = C sum_q w_q Psi_ij(sb_q) with
    // Psi_ij(sb) = 0.5 [ SS(i-j) - SS(i+j) ](sb) and
    // SS(d) = sum_m w(|2m + d h| sb): accumulate the q-weighted profile
    // T(d) = sum_q 0.5 w_q SS_q(d) and fill the Toeplitz-minus-Hankel matrix.
    const int nn = static_cast<int>(n_);
    std::vector<double> profile(3 * n_ + 1, 0.0); // index d + n for d in [-n, 2n]

    for (const Node& node : nodes) {
        const double sb = node.sb;
        const double wq = 0.5 * node.w;

        // image cutoff per quadrature node (arguments shrink with eta)
        int M = cfg_.green.image_cutoff;
        if (cfg_.green.adaptive) {
            auto tail = [&](int m0) {
                double acc = 0.0;
                for (int m = m0 + 1; m <= m0 + 80; ++m) {
                    const double y = std::max(2.0 * m - 2.0, 0.5) * sb;
                    const double term =
                        8.0 * reciprocal_gamma(beta) * (1.0 + y) *
                        std::exp(-rate * std::pow(y, 1.0 / (1.0 - beta)));
                    acc += term;
                    if (term == 0.0 || term < 1e-3 * acc) break;
                }
                return acc;
            };
            while (M < cfg_.green.max_images && tail(M) > cfg_.green.tail_tol) M += 2;
        }

        for (int d = -nn; d <= 2 * nn; ++d) {
            const double base = d * h;
            double acc = table_(std::fabs(base) * sb);
            for (int m = 1; m <= M; ++m) {
                acc += table_(std::fabs(2.0 * m + base) * sb) +
                       table_(std::fabs(-2.0 * m + base) * sb);
            }
            profile[static_cast<std::size_t>(d + nn)] += wq * acc;
        }
    }

    PropagatorKernel ker;
    ker.t = t;
    ker.n = n_;
    ker.k.resize((n_ + 1) * (n_ + 1));
    ker.xi_weights = trapezoid_weights(n_ + 1, h);

    const double scale = reciprocal_gamma(1.0 - alpha_);
    for (int i = 0; i <= nn; ++i) {
        for (int j = 0; j <= nn; ++j) {
            ker.k[static_cast<std::size_t>(i) * (n_ + 1) + j] =
                scale * (profile[static_cast<std::size_t>(i - j + nn)] -
                         profile[static_cast<std::size_t>(i + j + nn)]);
        }
    }

    // mass non-amplification: xi-integral of the kernel against 1
    for (std::size_t i = 0; i <= n_; ++i) {
        double m = 0.0;
        for (std::size_t j = 0; j <= n_; ++j)
            m += ker.xi_weights[j] * ker.k[i * (n_ + 1) + j];
        ker.mass_max = std::max(ker.mass_max, m);
    }
    return ker;
}

PropagatorKernel PropagatorAssembler::assemble_checked_impl(double t, int& order_out) const {
    int order = cfg_.quad_order;
    PropagatorKernel coarse = assemble(t, order);
    while (order < cfg_.max_quad_order) {
        PropagatorKernel fine = assemble(t, 2 * order);
        double diff = 0.0, scale = 0.0;
        for (std::size_t e = 0; e < fine.k.size(); ++e) {
            diff = std::max(diff, std::fabs(fine.k[e] - coarse.k[e]));
            scale = std::max(scale, std::fabs(fine.k[e]));
        }
        if (diff <= cfg_.quad_check_tol * std::max(1.0, scale)) {
            order_out = 2 * order;
            return fine;
        }
        coarse = std::move(fine);
        order *= 2;
    }
    throw AccuracyError("assemble_propagator: quadrature self-check did not converge",
                        cfg_.quad_check_tol);
}

PropagatorKernel PropagatorAssembler::assemble_checked(double t) const {
    int order = 0;
    return assemble_checked_impl(t, order);
}

int PropagatorAssembler::checked_order(double t_ref) {
    if (checked_order_ == 0) {
        int order = 0;
        PropagatorKernel k = assemble_checked_impl(t_ref, order);
        checked_order_ = order;
        cache_.emplace(t_ref, std::move(k));
    }
    return checked_order_;
}

const PropagatorKernel& PropagatorAssembler::at_time(double t) {
    auto it = cache_.find(t);
    if (it == cache_.end()) it = cache_.emplace(t, assemble_checked(t)).first;
    return it->second;
}

PropagatorKernel assemble_propagator(double t, double alpha, std::size_t n,
                                     const PropagatorConfig& cfg) {
    PropagatorAssembler assembler(alpha, n, cfg);
    return assembler.assemble_checked(t);
}

} // namespace subdiff
