#pragma once

#include <utility>

namespace subdiff {

/// Evaluation controls for the image-series Green function.
struct GreenEvalConfig {
    double alpha = 0.5;    // fractional order, in (0,1)
    int image_cutoff = 8;  // base truncation: images with |m| <= M
    bool adaptive = true;  // grow M until the tail bound drops below tail_tol
    double tail_tol = 1e-12;
    int max_images = 96; // hard cap for adaptive growth

    void validate() const;
};

/// Diffusion kernel on the line for one image charge:
///   p_kernel(x, s) = s^(alpha/2 - 1)/2 * e^{1,alpha/2}_{1,alpha/2}(-|x| s^(-alpha/2)).
/// Positive for all x and s > 0.
double p_kernel(double x, double s, double alpha);

/// Green function of the Dirichlet problem on [0,1] via the image series
///   G(x,t,xi,tau) = sum_m [ P(2m + x - xi, t-tau) - P(2m + x + xi, t-tau) ].
/// Requires 0 <= tau < t; vanishes at x = 0 and x = 1.
double green(double x, double t, double xi, double tau, const GreenEvalConfig& cfg);

/// Independent eigenfunction-expansion evaluation,
///   2 sum_k (t-tau)^(alpha-1) E_{alpha,alpha}(-(k pi)^2 (t-tau)^alpha) sin(k pi x) sin(k pi xi).
/// Oracle-grade for t-tau bounded away from zero (mode decay is algebraic).
double green_spectral(double x, double t, double xi, double tau, double alpha, int modes);

/// Numerically estimated constant of the envelope |G| <= C (t-tau)^(alpha/2-1).
struct GreenEnvelope {
    double C = 0.0;     // max of |G| (t-tau)^(1-alpha/2) over the sample set, inflated
    double alpha = 0.0;
    double safety = 1.1;
    double raw_max = 0.0; // pre-inflation maximum
};

/// Scan |G| (t-tau)^(1-alpha/2) over a sample set with t-tau log-spaced over
/// s_range (must span at least two decades) and return the inflated maximum.
/// A scaled maximum still growing in the smallest decade signals that the
/// envelope estimate failed (AccuracyError).
GreenEnvelope estimate_envelope(double alpha, std::pair<double, double> s_range,
                                int samples_per_decade);

} // namespace subdiff
