#include "ordinal/link.hpp"

#include <algorithm>
#include <cmath>

#include "ordinal/errors.hpp"

namespace ordinal {

std::string to_string(LinkFunction link) {
    switch (link) {
        case LinkFunction::Logit: return "logit";
        case LinkFunction::Probit: return "probit";
        case LinkFunction::CLogLog: return "cloglog";
    }
    throw DomainError("invalid LinkFunction variant");
}

LinkFunction link_from_string(std::string_view name) {
    if (name == "logit") return LinkFunction::Logit;
    if (name == "probit") return LinkFunction::Probit;
    if (name == "cloglog") return LinkFunction::CLogLog;
    throw DomainError("unknown link function: " + std::string(name));
}

namespace {

double clamp_prob(double p) {
    return std::clamp(p, kProbEps, 1.0 - kProbEps);
}

}  // namespace

double link_cdf(LinkFunction link, double z) {
    if (!std::isfinite(z)) throw DomainError("link_cdf: non-finite argument");
    switch (link) {
        case LinkFunction::Logit:
            return clamp_prob(1.0 / (1.0 + std::exp(-z)));
        case LinkFunction::Probit:
            // Phi(z) = erfc(-z/sqrt(2)) / 2
            return clamp_prob(0.5 * std::erfc(-z / std::sqrt(2.0)));
        case LinkFunction::CLogLog:
            // nested exponent overflows; saturate well before that point
            if (z > 30.0) return 1.0 - kProbEps;
            if (z < -30.0) return kProbEps;
            return clamp_prob(-std::expm1(-std::exp(z)));
    }
    throw DomainError("invalid LinkFunction variant");
}

double link_pdf(LinkFunction link, double z) {
    if (!std::isfinite(z)) throw DomainError("link_pdf: non-finite argument");
    switch (link) {
        case LinkFunction::Logit: {
            const double s = 1.0 / (1.0 + std::exp(-z));
            return s * (1.0 - s);
        }
        case LinkFunction::Probit:
            return std::exp(-0.5 * z * z) / std::sqrt(2.0 * M_PI);
        case LinkFunction::CLogLog:
            if (z > 30.0 || z < -30.0) return 0.0;
            return std::exp(z - std::exp(z));
    }
    throw DomainError("invalid LinkFunction variant");
}

}  // namespace ordinal
