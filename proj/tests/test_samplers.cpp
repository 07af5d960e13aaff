#include <doctest.h>

#include <cmath>
#include <map>
#include <vector>

#include "mvps/oracle.hpp"
#include "mvps/samplers.hpp"
#include "support/model_zoo.hpp"

using namespace mvps;

namespace {

struct ScriptedRng {
    std::vector<double> values;
    std::size_t next = 0;
    double next_u01() {
        const double v = values[next % values.size()];
        ++next;
        return v;
    }
};

}  // namespace

TEST_CASE("beta_stick is the Beta(1,alpha) inverse CDF") {
    CHECK(beta_stick(0.0, 3.7) == 0.0);
    CHECK(beta_stick(0.5, 1.0) == doctest::Approx(0.5));
    CHECK(beta_stick(0.75, 2.0) == doctest::Approx(0.5));
    CHECK_THROWS_AS(beta_stick(0.5, 0.0), InvalidAlphaError);
    CHECK_THROWS_AS(beta_stick(0.5, -1.0), InvalidAlphaError);
    CHECK_THROWS_AS(beta_stick(1.0, 1.0), InvalidAlphaError);
}

TEST_CASE("sample_path starts from nu and keeps a consistent trace") {
    const UrnModel model = validate_model(zoo::block3()).model;
    RngStream rng(2024, 0);
    const PathSample path = sample_path(model, 40, rng);
    REQUIRE(path.colors.size() == 40);
    REQUIRE(path.trace.size() == 40);
    CHECK(path.trace[0] == model.nu.weights);

    // every stored predictive equals the from-scratch evaluation on the
    // prefix it was computed from
    for (std::size_t t = 0; t < path.colors.size(); ++t) {
        const std::vector<std::size_t> prefix(path.colors.begin(),
                                              path.colors.begin() + t);
        const std::vector<double> expected = predictive_exact(model, prefix);
        for (std::size_t j = 0; j < expected.size(); ++j)
            CHECK(path.trace[t][j] == doctest::Approx(expected[j]).epsilon(1e-12));
        double sum = 0.0;
        for (double p : path.trace[t]) sum += p;
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("i.i.d. models keep the predictive at nu") {
    const UrnModel model = zoo::iid3_unbalanced();
    RngStream rng(5, 0);
    const PathSample path = sample_path(model, 100, rng);
    for (const auto& predictive : path.trace)
        CHECK(tv_distance(predictive, model.nu.weights) <= 1e-12);
}

TEST_CASE("sample_path is deterministic in (model, n, seed)") {
    const UrnModel model = zoo::polya3();
    RngStream a(77, 3), b(77, 3), c(77, 4);
    const PathSample pa = sample_path(model, 200, a);
    const PathSample pb = sample_path(model, 200, b);
    const PathSample pc = sample_path(model, 200, c);
    CHECK(pa.colors == pb.colors);
    CHECK(pa.trace == pb.trace);
    CHECK(pa.colors != pc.colors);
}

TEST_CASE("stick_breaking with a scripted half-splitting stream") {
    // alternating draws: W ~ beta_stick(0.5, 1) = 0.5, then Z
    ScriptedRng rng{{0.5, 0.25}};
    const UrnModel model = validate_model(zoo::polya2()).model;  // rows already mass 1
    const RandomMeasureDraw draw = stick_breaking(1.0, model, 1e-8, rng);

    // remaining mass halves every stick: ceil(log2(1e8)) = 27 sticks
    REQUIRE(draw.weights.size() == 27);
    for (std::size_t j = 0; j < draw.weights.size(); ++j)
        CHECK(draw.weights[j] == doctest::Approx(std::pow(0.5, double(j + 1))));
    CHECK(draw.truncation_mass == doctest::Approx(std::pow(0.5, 27.0)));
}

TEST_CASE("stick weights account for all mass") {
    const UrnModel model = validate_model(zoo::polya2()).model;
    for (std::uint64_t stream = 0; stream < 20; ++stream) {
        RngStream rng(31, stream);
        const RandomMeasureDraw draw = stick_breaking(2.0, model, 1e-8, rng);
        double v_total = 0.0;
        double remaining = 1.0;
        for (std::size_t j = 0; j < draw.weights.size(); ++j) {
            CHECK(draw.weights[j] == doctest::Approx(draw.sticks[j] * remaining));
            remaining *= 1.0 - draw.sticks[j];
            v_total += draw.weights[j];
            CHECK(draw.weights[j] > 0.0);
        }
        CHECK(v_total + draw.truncation_mass == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(draw.truncation_mass < 1e-8);
    }
}

TEST_CASE("Polya stick draws put the composite mass on the sampled atoms") {
    const UrnModel model = zoo::polya3();
    RngStream rng(8, 0);
    const RandomMeasureDraw draw = stick_breaking(1.0, model, 1e-10, rng);
    std::vector<double> histogram(3, 0.0);
    double v_total = 0.0;
    for (std::size_t j = 0; j < draw.weights.size(); ++j) {
        histogram[draw.sources[j]] += draw.weights[j];
        v_total += draw.weights[j];
    }
    for (double& h : histogram) h /= v_total;
    for (std::size_t i = 0; i < 3; ++i)
        CHECK(draw.composite[i] == doctest::Approx(histogram[i]).epsilon(1e-12));
}

TEST_CASE("block composites keep the exact within-block conditional") {
    const UrnModel model = zoo::block3();
    for (std::uint64_t stream = 0; stream < 10; ++stream) {
        RngStream rng(91, stream);
        const RandomMeasureDraw draw = stick_breaking(1.0, model, 1e-8, rng);
        const double block_mass = draw.composite[0] + draw.composite[1];
        if (block_mass > 0.0) {
            CHECK(draw.composite[0] / block_mass == doctest::Approx(0.4).epsilon(1e-12));
            CHECK(draw.composite[1] / block_mass == doctest::Approx(0.6).epsilon(1e-12));
        }
    }
}

TEST_CASE("stick_breaking rejects bad truncation thresholds") {
    const UrnModel model = zoo::polya2();
    RngStream rng(1, 0);
    CHECK_THROWS_AS(stick_breaking(1.0, model, 0.0, rng), NonPositiveEpsError);
    CHECK_THROWS_AS(stick_breaking(1.0, model, 1.0, rng), NonPositiveEpsError);
    CHECK_THROWS_AS(stick_breaking(0.0, model, 1e-8, rng), InvalidAlphaError);
}

TEST_CASE("dp_mixture_path structure") {
    SUBCASE("single block: constant labels") {
        const UrnModel model = validate_model(zoo::polya2()).model;
        RngStream rng(3, 0);
        const MixturePath mp =
            dp_mixture_path(model, single_block(2), 2.0, 50, rng);
        for (std::size_t b : mp.labels) CHECK(b == 0);
    }
    SUBCASE("singleton blocks: colors equal labels") {
        const UrnModel model = zoo::polya3();
        const Verdict verdict = classify(model);
        RngStream rng(4, 0);
        const MixturePath mp = dp_mixture_path(model, verdict, 100, rng);
        // classify returns singleton blocks in color order for R = I
        for (std::size_t t = 0; t < mp.colors.size(); ++t)
            CHECK(mp.colors[t] == mp.labels[t]);
    }
    SUBCASE("verdict without a partition throws") {
        const UrnModel model = zoo::iid3_unbalanced();
        const Verdict verdict = classify(model);
        RngStream rng(5, 0);
        CHECK_THROWS_AS(dp_mixture_path(model, verdict, 10, rng),
                        MissingPartitionError);
    }
}

TEST_CASE("dp_mixture_path colors match the predictive sampler in law") {
    // depth-2 empirical pmf agreement between the two samplers, block model
    const UrnModel model = zoo::block3();
    const Verdict verdict = classify(model);
    REQUIRE(verdict.kind == VerdictKind::Exchangeable);

    const std::size_t reps = 40000;
    std::map<std::pair<std::size_t, std::size_t>, double> mixture, direct;
    for (std::size_t r = 0; r < reps; ++r) {
        RngStream rng_a(612, 2 * r);
        const MixturePath mp = dp_mixture_path(model, verdict, 2, rng_a);
        mixture[{mp.colors[0], mp.colors[1]}] += 1.0;
        RngStream rng_b(613, 2 * r + 1);
        const PathSample ps = sample_path(model, 2, rng_b);
        direct[{ps.colors[0], ps.colors[1]}] += 1.0;
    }
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) {
            const double pa = mixture[{i, j}] / reps;
            const double pb = direct[{i, j}] / reps;
            const double se =
                std::sqrt(pa * (1 - pa) / reps + pb * (1 - pb) / reps) + 1e-12;
            CHECK(std::fabs(pa - pb) <= 4 * se);
        }
}

TEST_CASE("hybrid paths only repeat inside S") {
    for (const double s : {0.25, 0.5, 0.9}) {
        RngStream rng(2718, 0);
        const HybridPath path = hybrid_example_path(1.0, s, 4000, rng);
        REQUIRE(path.values.size() == 4000);
        std::map<double, int> counts;
        for (double v : path.values) {
            CHECK(v >= 0.0);
            CHECK(v < 1.0);
            ++counts[v];
        }
        bool repeats_exist = false;
        for (const auto& [value, count] : counts)
            if (count >= 2) {
                repeats_exist = true;
                CHECK(value < s);
            }
        CHECK(repeats_exist);  // theta = 1 copies often at this length
    }
}

TEST_CASE("hybrid path argument checks") {
    RngStream rng(1, 0);
    CHECK_THROWS_AS(hybrid_example_path(1.0, 0.0, 10, rng), InvalidSError);
    CHECK_THROWS_AS(hybrid_example_path(1.0, 1.0, 10, rng), InvalidSError);
    CHECK_THROWS_AS(hybrid_example_path(0.0, 0.5, 10, rng), InvalidThetaError);
}

TEST_CASE("hybrid path is deterministic") {
    RngStream a(5150, 2), b(5150, 2);
    const HybridPath pa = hybrid_example_path(2.0, 0.3, 500, a);
    const HybridPath pb = hybrid_example_path(2.0, 0.3, 500, b);
    CHECK(pa.values == pb.values);
}
