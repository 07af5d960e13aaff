#include <doctest.h>

#include <algorithm>

#include "mvps/analysis.hpp"
#include "support/model_zoo.hpp"

using namespace mvps;

namespace {

std::vector<std::vector<std::size_t>> sorted_blocks(const Partition& p) {
    auto blocks = p.blocks;
    for (auto& b : blocks) std::sort(b.begin(), b.end());
    std::sort(blocks.begin(), blocks.end());
    return blocks;
}

}  // namespace

TEST_CASE("balance_profile") {
    SUBCASE("identity rows are balanced with m = 1") {
        const BalanceProfile p = balance_profile(zoo::polya3());
        CHECK(p.balanced);
        CHECK(p.m == doctest::Approx(1.0));
        CHECK(p.row_masses == std::vector<double>{1, 1, 1});
    }
    SUBCASE("distinct row masses are unbalanced") {
        const auto fam = zoo::k_color_families(1, 2, 3, 1.0, 2.0, 3.0, 1.0);
        const BalanceProfile p = balance_profile(fam.iid);
        CHECK_FALSE(p.balanced);
        CHECK(p.row_masses[0] == doctest::Approx(2.0));
        CHECK(p.row_masses[1] == doctest::Approx(3.0));
        CHECK(p.row_masses[2] == doctest::Approx(1.0));
    }
    SUBCASE("block kernel is balanced") {
        const BalanceProfile p = balance_profile(zoo::block3());
        CHECK(p.balanced);
        CHECK(p.m == doctest::Approx(1.0));
    }
}

TEST_CASE("is_iid") {
    CHECK(is_iid(zoo::iid3_unbalanced()));
    CHECK_FALSE(is_iid(validate_model(zoo::polya2()).model));

    const UrnModel single = zoo::make_model(3.0, {1.0}, {{0.7}});
    CHECK(is_iid(single));
}

TEST_CASE("normalize_model") {
    SUBCASE("theta and rows divide by m") {
        const UrnModel m = zoo::make_model(2.0, {0.5, 0.5}, {{2, 0}, {0, 2}});
        const UrnModel n = normalize_model(m);
        CHECK(n.theta == doctest::Approx(1.0));
        CHECK(n.kernel.rows[0][0] == doctest::Approx(1.0));
        CHECK(n.kernel.rows[1][1] == doctest::Approx(1.0));
    }
    SUBCASE("block kernel with m = 0.5") {
        UrnModel m = zoo::block3();
        m.theta = 3.0;
        for (auto& row : m.kernel.rows)
            for (double& a : row) a *= 0.5;
        const UrnModel n = normalize_model(m);
        CHECK(n.theta == doctest::Approx(6.0));
        for (std::size_t i = 0; i < 3; ++i)
            CHECK(n.kernel.row_mass(i) == doctest::Approx(1.0));
    }
    SUBCASE("already normalized model is unchanged") {
        const UrnModel n = normalize_model(zoo::block3());
        CHECK(n.theta == zoo::block3().theta);
        CHECK(n.kernel.rows == zoo::block3().kernel.rows);
    }
    SUBCASE("unbalanced input throws") {
        CHECK_THROWS_AS(normalize_model(zoo::iid3_unbalanced()), UnbalancedInputError);
    }
}

TEST_CASE("symmetry_checks") {
    SUBCASE("identity rows satisfy both identities") {
        const SymmetryReport r = symmetry_checks(zoo::polya3());
        CHECK(r.all_ok());
        CHECK(r.max_residual_detailed_balance <= 1e-12);
        CHECK(r.max_residual_triple_product <= 1e-12);
    }
    SUBCASE("flip kernel passes the pair identity and fails the triple") {
        const SymmetryReport r = symmetry_checks(zoo::flip2());
        CHECK(r.detailed_balance_ok);
        CHECK_FALSE(r.triple_product_ok);
        // R_0(1) R_1(0) = 1 against R_0(0) R_0(1) = 0
        CHECK(r.max_residual_triple_product == doctest::Approx(1.0));
        REQUIRE(r.worst.has_value());
        CHECK(r.worst->kind == Witness::Kind::TripleProduct);
    }
    SUBCASE("block kernel satisfies both identities") {
        const SymmetryReport r = symmetry_checks(zoo::block3());
        CHECK(r.all_ok());
    }
    SUBCASE("unbalanced input throws") {
        CHECK_THROWS_AS(symmetry_checks(zoo::iid3_unbalanced()), UnbalancedInputError);
    }
}

TEST_CASE("detect_partition") {
    SUBCASE("block kernel yields blocks {0,1},{2}") {
        const PartitionResult r = detect_partition(zoo::block3());
        REQUIRE(r.found());
        CHECK(sorted_blocks(*r.partition) ==
              std::vector<std::vector<std::size_t>>{{0, 1}, {2}});
    }
    SUBCASE("identity rows yield singletons") {
        const PartitionResult r = detect_partition(zoo::polya3());
        REQUIRE(r.found());
        CHECK(sorted_blocks(*r.partition) ==
              std::vector<std::vector<std::size_t>>{{0}, {1}, {2}});
    }
    SUBCASE("near-diagonal kernel has no block structure") {
        const UrnModel m =
            zoo::make_model(1.0, {0.5, 0.5}, {{0.9, 0.1}, {0.1, 0.9}});
        const PartitionResult r = detect_partition(m);
        CHECK_FALSE(r.found());
        REQUIRE(r.witness.has_value());
        CHECK(r.witness->kind == Witness::Kind::PartitionMismatch);
        // rows have full support, so the failing comparison is against
        // nu(.|{0,1}) = (0.5, 0.5) at distance 0.4
        CHECK(r.witness->residual == doctest::Approx(0.4));
    }
}

TEST_CASE("classify the five 3-color families") {
    const auto fam = zoo::k_color_families(1.0, 2.0, 3.0, 0.7, 2.0, 3.0, 1.0, 1.5);

    const Verdict iid = classify(fam.iid);
    CHECK(iid.kind == VerdictKind::IID);
    REQUIRE(iid.normalized.has_value());
    CHECK(iid.normalized->kernel.rows[0] == iid.normalized->nu.weights);

    const Verdict b12 = classify(fam.block_12_3);
    REQUIRE(b12.kind == VerdictKind::Exchangeable);
    CHECK(sorted_blocks(*b12.partition) ==
          std::vector<std::vector<std::size_t>>{{0, 1}, {2}});
    CHECK(*b12.m == doctest::Approx(0.7));
    CHECK(b12.normalized->theta == doctest::Approx(1.5 / 0.7));

    const Verdict b13 = classify(fam.block_13_2);
    REQUIRE(b13.kind == VerdictKind::Exchangeable);
    CHECK(sorted_blocks(*b13.partition) ==
          std::vector<std::vector<std::size_t>>{{0, 2}, {1}});

    const Verdict b23 = classify(fam.block_23_1);
    REQUIRE(b23.kind == VerdictKind::Exchangeable);
    CHECK(sorted_blocks(*b23.partition) ==
          std::vector<std::vector<std::size_t>>{{0}, {1, 2}});

    const Verdict polya = classify(fam.polya);
    REQUIRE(polya.kind == VerdictKind::Exchangeable);
    CHECK(sorted_blocks(*polya.partition) ==
          std::vector<std::vector<std::size_t>>{{0}, {1}, {2}});
}

TEST_CASE("classify rejects the flip kernel") {
    const Verdict v = classify(zoo::flip2());
    CHECK(v.kind == VerdictKind::NotExchangeable);
    REQUIRE(v.witness.has_value());
    CHECK(v.witness->residual >= 1e-9);
}

TEST_CASE("classify reports unbalanced non-iid kernels with a balance witness") {
    UrnModel m = zoo::block3();
    m.kernel.rows[2] = {0.0, 0.0, 2.0};  // breaks balance but not the block rows
    const Verdict v = classify(m);
    CHECK(v.kind == VerdictKind::NotExchangeable);
    REQUIRE(v.witness.has_value());
    CHECK(v.witness->kind == Witness::Kind::UnbalancedRows);
    CHECK(v.witness->residual == doctest::Approx(1.0));
}

TEST_CASE("classify flags mass leaks") {
    const Verdict v = classify(zoo::leak3());
    CHECK(v.kind == VerdictKind::NotExchangeable);
    REQUIRE(v.witness.has_value());
    CHECK(v.witness->kind == Witness::Kind::MassLeak);
    REQUIRE(v.leaks.size() == 1);
}

TEST_CASE("classify keeps i.i.d. verdicts for unbalanced kernels") {
    const Verdict v = classify(zoo::iid3_unbalanced());
    CHECK(v.kind == VerdictKind::IID);
}

TEST_CASE("exchangeable verdicts carry normalized models with tiny residuals") {
    const Verdict v = classify(zoo::block3());
    REQUIRE(v.kind == VerdictKind::Exchangeable);
    const SymmetryReport r = symmetry_checks(*v.normalized);
    CHECK(r.max_residual_detailed_balance <= 1e-12);
    CHECK(r.max_residual_triple_product <= 1e-12);
}
