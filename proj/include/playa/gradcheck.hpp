#pragma once

#include <functional>
#include <span>

namespace playa {

// Central-difference gradient check over one parameter block.
//
// For every entry theta[i], evaluates loss at theta[i] +/- eps (restoring the
// entry afterwards) and compares (L+ - L-) / (2 eps) against analytic[i].
// Returns the maximum of |a - n| / max(|a|, |n|, 1e-8) over the block.
//
// loss must be pure and deterministic in the parameters it reads through
// `theta`. Throws std::runtime_error if loss evaluates non-finite at a
// perturbed point.
double finite_diff_check(const std::function<double()>& loss,
                         std::span<double> theta,
                         std::span<const double> analytic,
                         double eps = 1e-5);

} // namespace playa
