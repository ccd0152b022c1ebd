#include <doctest.h>

#include <cmath>
#include <numeric>
#include <vector>

#include "ordinal/clm.hpp"
#include "ordinal/errors.hpp"
#include "ordinal/rng.hpp"

#include "oracles.hpp"

using namespace ordinal;

namespace {

ClmParameters sample_params(Rng& rng, int q) {
    ClmParameters p;
    p.q_classes = q;
    p.b1 = rng.uniform(-2.0, 2.0);
    p.alpha.resize(static_cast<std::size_t>(q - 2));
    for (double& a : p.alpha) a = rng.uniform(0.2, 1.5);
    p.tau = rng.uniform(0.3, 3.0);
    return p;
}

}  // namespace

TEST_CASE("initial parameters give evenly spaced thresholds on [-2, 2]") {
    const auto p = ClmParameters::initial(5);
    const auto t = build_thresholds(p);
    REQUIRE(t.size() == 4);
    CHECK(t[0] == doctest::Approx(-2.0).epsilon(1e-12));
    CHECK(t[3] == doctest::Approx(2.0).epsilon(1e-12));
    for (std::size_t j = 1; j < t.size(); ++j)
        CHECK(t[j] - t[j - 1] == doctest::Approx(4.0 / 3.0).epsilon(1e-12));
    CHECK(p.tau == 1.0);

    const auto p2 = ClmParameters::initial(2);
    CHECK(build_thresholds(p2) == std::vector<double>{0.0});
}

TEST_CASE("thresholds are nondecreasing for any parameter draw") {
    Rng rng(42);
    for (int rep = 0; rep < 10000; ++rep) {
        const int q = 2 + static_cast<int>(rng.below(7));
        ClmParameters p = sample_params(rng, q);
        // also allow negative raw alpha entries; squaring must still order them
        for (double& a : p.alpha)
            if (rng.uniform() < 0.5) a = -a;
        const auto t = build_thresholds(p);
        REQUIRE(t.size() == static_cast<std::size_t>(q - 1));
        for (std::size_t j = 1; j < t.size(); ++j) CHECK(t[j] >= t[j - 1]);
    }
}

TEST_CASE("parameter validation") {
    ClmParameters p = ClmParameters::initial(4);
    CHECK_NOTHROW(p.validate());
    p.tau = 0.0;
    CHECK_THROWS_AS(p.validate(), DomainError);
    p = ClmParameters::initial(4);
    p.alpha.pop_back();
    CHECK_THROWS_AS(p.validate(), DomainError);
    CHECK_THROWS_AS(ClmParameters::initial(1), DomainError);
    p = ClmParameters::initial(4);
    p.q_classes = 1;
    CHECK_THROWS_AS(p.validate(), DomainError);
}

TEST_CASE("Q=3 logit forward worked example") {
    // thresholds (0, 1), tau = 1, latent 0: cumulative = (0.5, sigma(1))
    ClmParameters p;
    p.q_classes = 3;
    p.b1 = 0.0;
    p.alpha = {1.0};
    p.tau = 1.0;
    const auto rec = clm_forward(p, LinkFunction::Logit, 0.0);
    REQUIRE(rec.cumulative.size() == 2);
    REQUIRE(rec.probs.size() == 3);
    CHECK(rec.projection == 0.0);
    CHECK(rec.cumulative[0] == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(rec.cumulative[1] == doctest::Approx(0.7310585786300049).epsilon(1e-15));
    CHECK(rec.probs[0] == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(rec.probs[1] == doctest::Approx(0.2310585786300049).epsilon(1e-12));
    CHECK(rec.probs[2] == doctest::Approx(0.2689414213699951).epsilon(1e-12));
}

TEST_CASE("forward probabilities are a valid distribution") {
    Rng rng(7);
    for (int rep = 0; rep < 10000; ++rep) {
        const int q = 2 + static_cast<int>(rng.below(7));
        const auto link = static_cast<LinkFunction>(rng.below(3));
        const ClmParameters p = sample_params(rng, q);
        const double latent = rng.uniform(-30.0, 30.0);
        const auto rec = clm_forward(p, link, latent);
        double sum = 0.0;
        for (double pr : rec.probs) {
            // the floor is applied before renormalization, which can shave at
            // most a relative ulp-scale factor off it afterwards
            CHECK(pr >= 0.5 * kProbEps);
            CHECK(pr > 0.0);
            sum += pr;
        }
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
        for (std::size_t j = 1; j < rec.cumulative.size(); ++j)
            CHECK(rec.cumulative[j] >= rec.cumulative[j - 1]);
    }
}

TEST_CASE("scaling latent and tau together leaves the forward pass unchanged") {
    Rng rng(19);
    for (int rep = 0; rep < 200; ++rep) {
        const int q = 2 + static_cast<int>(rng.below(5));
        const auto link = static_cast<LinkFunction>(rng.below(3));
        ClmParameters p = sample_params(rng, q);
        const double latent = rng.uniform(-4.0, 4.0);
        const double c = rng.uniform(0.5, 4.0);
        const auto base = clm_forward(p, link, latent);
        ClmParameters scaled = p;
        scaled.tau *= c;
        const auto rec = clm_forward(scaled, link, latent * c);
        for (int j = 0; j < q; ++j)
            CHECK(rec.probs[static_cast<std::size_t>(j)] ==
                  doctest::Approx(base.probs[static_cast<std::size_t>(j)]).epsilon(1e-12));
    }
}

TEST_CASE("analytic gradients match finite differences") {
    Rng rng(123);
    for (int rep = 0; rep < 400; ++rep) {
        const int q = 2 + static_cast<int>(rng.below(7));
        const auto link = static_cast<LinkFunction>(rng.below(3));
        const ClmParameters p = sample_params(rng, q);
        const double latent = rng.uniform(-3.0, 3.0);
        std::vector<double> upstream(static_cast<std::size_t>(q));
        for (double& u : upstream) u = rng.uniform(-1.0, 1.0);

        const auto g = clm_gradients(p, link, latent, upstream);
        REQUIRE(g.d_alpha.size() == p.alpha.size());

        // pack (b1, alpha..., tau, latent) into one vector for the FD probe
        std::vector<double> x;
        x.push_back(p.b1);
        x.insert(x.end(), p.alpha.begin(), p.alpha.end());
        x.push_back(p.tau);
        x.push_back(latent);
        auto loss = [&](const std::vector<double>& v) {
            ClmParameters pp = p;
            pp.b1 = v[0];
            for (std::size_t i = 0; i < pp.alpha.size(); ++i) pp.alpha[i] = v[1 + i];
            pp.tau = v[1 + pp.alpha.size()];
            const auto rec = clm_forward(pp, link, v[2 + pp.alpha.size()]);
            return std::inner_product(rec.probs.begin(), rec.probs.end(), upstream.begin(),
                                      0.0);
        };
        std::vector<double> analytic;
        analytic.push_back(g.d_b1);
        analytic.insert(analytic.end(), g.d_alpha.begin(), g.d_alpha.end());
        analytic.push_back(g.d_tau);
        analytic.push_back(g.d_latent);
        CHECK(oracle::max_grad_rel_err(loss, x, analytic) < 1e-6);
    }
}

TEST_CASE("interval rule picks the bracket of the projection") {
    ClmParameters p;
    p.q_classes = 4;
    p.b1 = -1.0;
    p.alpha = {1.0, 1.0};  // thresholds -1, 0, 1
    p.tau = 2.0;           // projection = latent / 2

    CHECK(predict_interval(p, -4.0) == 0);   // f = -2 <= -1
    CHECK(predict_interval(p, -2.0) == 0);   // boundary tie goes low
    CHECK(predict_interval(p, -1.0) == 1);
    CHECK(predict_interval(p, 0.0) == 1);    // boundary tie goes low
    CHECK(predict_interval(p, 1.0) == 2);
    CHECK(predict_interval(p, 2.0) == 2);    // boundary tie goes low
    CHECK(predict_interval(p, 3.0) == 3);
}

TEST_CASE("argmax rule breaks ties toward the lowest class") {
    const std::vector<double> probs = {0.25, 0.4, 0.4, 0.05};  // NOLINT
    CHECK(predict_argmax(probs) == 1);
    const std::vector<double> flat = {0.25, 0.25, 0.25, 0.25};
    CHECK(predict_argmax(flat) == 0);

    ClmParameters p = ClmParameters::initial(3);
    const auto rec = clm_forward(p, LinkFunction::Logit, 0.0);
    CHECK(predict_argmax(rec) == predict_argmax(rec.probs));
}

TEST_CASE("interval and argmax rules agree in the easy regime") {
    // When the projection is far from every threshold the modal class is the
    // bracket class for symmetric links.
    ClmParameters p;
    p.q_classes = 3;
    p.b1 = -3.0;
    p.alpha = {std::sqrt(6.0)};  // thresholds -3, 3
    p.tau = 1.0;
    for (double latent : {-8.0, 0.0, 8.0}) {
        const auto rec = clm_forward(p, LinkFunction::Logit, latent);
        CHECK(predict_interval(p, latent) == predict_argmax(rec));
    }
}

TEST_CASE("forward rejects non-finite latent") {
    const ClmParameters p = ClmParameters::initial(3);
    CHECK_THROWS_AS(clm_forward(p, LinkFunction::Logit, std::nan("")), DomainError);
}
