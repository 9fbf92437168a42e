#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numeric>
#include <utility>
#include <vector>

#include <secretary/lab.hpp>

using namespace secretary;
using Catch::Approx;

namespace {

using Frac = std::pair<std::int64_t, std::int64_t>;

std::vector<Frac> fractions(const std::vector<Convergent>& cs) {
    std::vector<Frac> out;
    for (const auto& c : cs) out.emplace_back(c.p, c.q);
    return out;
}

}  // namespace

TEST_CASE("continued fraction convergents", "[lab]") {
    const std::vector<Frac> inv_e_expected = {{0, 1},   {1, 2},    {1, 3},     {3, 8},     {4, 11},     {7, 19},
                                              {32, 87}, {39, 106}, {71, 193}, {465, 1264}, {536, 1457}, {1001, 2721}};
    CHECK(fractions(cf_convergents(inv_e, 12)) == inv_e_expected);

    const auto th = fractions(cf_convergents(theta(), 12));
    const std::vector<Frac> theta_head = {{0, 1}, {1, 4}, {1, 5}, {12, 59}, {13, 64}, {38, 187}, {51, 251}};
    CHECK(std::vector<Frac>(th.begin(), th.begin() + 7) == theta_head);
    CHECK(th[8] == Frac{1313, 6462});
    CHECK(th.back() == Frac{64082, 315383});

    CHECK(fractions(cf_convergents(0.5, 5)) == std::vector<Frac>{{0, 1}, {1, 2}});
    CHECK(cf_convergents(inv_e, 3).size() == 3);
    CHECK(cf_convergents(inv_e, 3)[2].index == 2);

    CHECK_THROWS_AS(cf_convergents(inv_e, 13), precision_error);
    CHECK_THROWS_AS(cf_convergents(theta(), 12, 1e-7), precision_error);
    CHECK_THROWS_AS(cf_convergents(1.5, 3), domain_error);
    CHECK_THROWS_AS(cf_convergents(0.3, 0), domain_error);
}

TEST_CASE("convergents are reduced and alternate around the target", "[lab][property]") {
    for (double x : {inv_e, theta(), std::log(2.0) - 0.5, std::sqrt(2.0) - 1.0, std::exp(-2.0)}) {
        const auto cs = cf_convergents(x, 10);
        for (std::size_t i = 0; i < cs.size(); ++i) {
            CHECK(std::gcd(cs[i].p, cs[i].q) == 1);
            if (i >= 1) {
                const long double a = static_cast<long double>(cs[i - 1].p) / cs[i - 1].q - x;
                const long double b = static_cast<long double>(cs[i].p) / cs[i].q - x;
                if (b != 0.0L) CHECK((a < 0.0L) != (b < 0.0L));
                CHECK(std::fabs(b) <= std::fabs(a));
            }
        }
    }
}

TEST_CASE("convergent denominators as horizons", "[lab]") {
    const auto c719 = verify_convergent_cutoffs(ConvergentFamily::classic_known, {{7, 19, 0}});
    CHECK(c719[0].match);
    CHECK(c719[0].cutoff == 7);
    const auto b1364 = verify_convergent_cutoffs(ConvergentFamily::bw_uniform, {{13, 64, 0}});
    CHECK(b1364[0].match);
    CHECK(b1364[0].cutoff == 13);
    CHECK(verify_convergent_cutoffs(ConvergentFamily::bw_uniform, {{1313, 6462, 0}})[0].match);
    CHECK_FALSE(verify_convergent_cutoffs(ConvergentFamily::bw_uniform, {{14, 64, 0}})[0].match);

    for (const auto& row : verify_convergent_cutoffs(ConvergentFamily::classic_known, cf_convergents(inv_e, 12))) {
        CHECK(row.match);
        CHECK(row.q <= 2721);
    }
    // at q = 2 both cutoffs 0 and 1 are optimal for the classic problem
    const auto half = verify_convergent_cutoffs(ConvergentFamily::classic_known, {{1, 2, 0}})[0];
    CHECK(half.match);
    CHECK(half.tie);
    CHECK(half.cutoff == 0);
    for (const auto& row : verify_convergent_cutoffs(ConvergentFamily::bw_uniform, cf_convergents(theta(), 12)))
        CHECK(row.match);
}

TEST_CASE("estimator failure scans", "[lab]") {
    const auto rt = scan_estimator_failures(EstimatorId::round_n_theta, 2, 121);
    const std::vector<std::int64_t> expected = {8,  13, 18, 23, 32, 37, 42, 47,  52,  57,  62,
                                               67, 72, 77, 82, 96, 101, 106, 111, 116, 121};
    CHECK(rt.failures == expected);
    CHECK(rt.max_deviation == 1);
    CHECK(scan_estimator_failures(EstimatorId::round_n_theta, 2, 3000).max_deviation == 1);

    const auto af = scan_estimator_failures(EstimatorId::affine_theta, 2, 3000);
    CHECK(af.failures == std::vector<std::int64_t>{3, 23, 2971});
    const auto lw = scan_estimator_failures(EstimatorId::lambert_uniform, 4, 3000);
    CHECK(lw.failures == std::vector<std::int64_t>{23, 2971});
    CHECK(lw.max_deviation == 1);

    const auto hl = scan_estimator_failures(EstimatorId::half_lambda_minus_one, 2, 40);
    CHECK(hl.from == 2);
    CHECK(hl.max_deviation <= 1);
    CHECK_THROWS_AS(scan_estimator_failures(EstimatorId::affine_theta, 0, 3), domain_error);
}

TEST_CASE("mixture of known-count optima over poisson counts", "[lab][property]") {
    for (double lambda : {0.5, 1.0, 2.0, 5.0, 10.0, 20.0, 30.0})
        CHECK(std::fabs(bw_mixture_closed_form(lambda) - bw_mixture_series(lambda)) <= 1e-10);
    CHECK(half_rate_partial(3.0) == 0.0);
    CHECK(half_rate_partial(10.0) < 0.0);
}

TEST_CASE("asymptote probe", "[lab]") {
    const auto probe = asymptote_probe();
    CHECK(probe.rows.size() == 16);
    CHECK(probe.poisson_shrinks);
    CHECK(probe.uniform_shrinks);
    CHECK(probe.mixture_shrinks);
    CHECK(probe.partial_shrinks);
    CHECK(probe.uniform_above_limit);
    for (const auto& row : probe.rows) {
        if (row.quantity == "uniform_best_prob" && row.parameter == 2000.0) {
            CHECK(row.value > 0.32380511);
            CHECK(row.gap == Approx(0.000398594).epsilon(1e-4));
        }
        if (row.quantity == "poisson_best_prob" && row.parameter == 200.0) CHECK(row.gap < 0.05);
    }
}
