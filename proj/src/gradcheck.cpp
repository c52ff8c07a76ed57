#include "playa/gradcheck.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace playa {

double finite_diff_check(const std::function<double()>& loss,
                         std::span<double> theta,
                         std::span<const double> analytic,
                         double eps) {
    if (theta.size() != analytic.size())
        throw std::invalid_argument("finite_diff_check: gradient length mismatch");
    double max_rel = 0.0;
    for (std::size_t i = 0; i < theta.size(); ++i) {
        const double saved = theta[i];
        theta[i] = saved + eps;
        const double lp = loss();
        theta[i] = saved - eps;
        const double lm = loss();
        theta[i] = saved;
        if (!std::isfinite(lp) || !std::isfinite(lm))
            throw std::runtime_error("finite_diff_check: non-finite loss at perturbed point");
        const double numeric = (lp - lm) / (2.0 * eps);
        const double a = analytic[i];
        const double rel = std::fabs(a - numeric) /
                           std::max({std::fabs(a), std::fabs(numeric), 1e-8});
        max_rel = std::max(max_rel, rel);
    }
    return max_rel;
}

} // namespace playa
