#pragma once

#include <string>
#include <string_view>

namespace ordinal {

/// Clamp bound for cumulative probabilities: results live in [kProbEps, 1 - kProbEps].
inline constexpr double kProbEps = 1e-15;

enum class LinkFunction { Logit, Probit, CLogLog };

std::string to_string(LinkFunction link);
LinkFunction link_from_string(std::string_view name);

/// Cumulative probability for argument z = b_q - f(x).
/// logit: 1/(1+e^-z), probit: Phi(z), clog-log: 1 - e^(-e^z).
/// Strictly increasing in z, clamped to [kProbEps, 1 - kProbEps].
double link_cdf(LinkFunction link, double z);

/// d/dz of link_cdf (unclamped form). Nonnegative.
double link_pdf(LinkFunction link, double z);

}  // namespace ordinal
