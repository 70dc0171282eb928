#include <catch2/catch_amalgamated.hpp>

#include <span>

#include "tip/autodiff.hpp"
#include "tip/rng.hpp"
#include "tip/vectorize.hpp"
#include "tip/wasserstein.hpp"

using namespace tip;

namespace {

Diagram<double> diagram_of(std::vector<std::pair<double, double>> pts) {
    Diagram<double> d;
    d.dim = 1;
    for (auto [b, dd] : pts) d.tuples.push_back({b, dd, 0});
    return d;
}

// exhaustive optimal partial matching, usable up to ~6 off-diagonal points
double brute_force_w1(const Diagram<double>& a, const Diagram<double>& b, GroundMetric m) {
    std::vector<std::pair<double, double>> pa, pb;
    for (const auto& t : a.tuples)
        if (t.death - t.birth > 1e-12) pa.emplace_back(t.birth, t.death);
    for (const auto& t : b.tuples)
        if (t.death - t.birth > 1e-12) pb.emplace_back(t.birth, t.death);
    auto point = [&](double b1, double d1, double b2, double d2) {
        double dx = std::abs(b1 - b2), dy = std::abs(d1 - d2);
        return m == GroundMetric::linf ? std::max(dx, dy) : std::sqrt(dx * dx + dy * dy);
    };
    auto diag = [&](double bb, double dd) {
        return m == GroundMetric::linf ? (dd - bb) / 2.0 : (dd - bb) / std::sqrt(2.0);
    };
    double best = std::numeric_limits<double>::infinity();
    std::vector<bool> used(pb.size(), false);
    auto rec = [&](auto&& self, std::size_t i, double acc) -> void {
        if (acc >= best) return;
        if (i == pa.size()) {
            double total = acc;
            for (std::size_t j = 0; j < pb.size(); ++j)
                if (!used[j]) total += diag(pb[j].first, pb[j].second);
            best = std::min(best, total);
            return;
        }
        self(self, i + 1, acc + diag(pa[i].first, pa[i].second));
        for (std::size_t j = 0; j < pb.size(); ++j) {
            if (used[j]) continue;
            used[j] = true;
            self(self, i + 1, acc + point(pa[i].first, pa[i].second, pb[j].first, pb[j].second));
            used[j] = false;
        }
    };
    rec(rec, 0, 0.0);
    return best;
}

} // namespace

TEST_CASE("hungarian assignment on known matrices", "[metrics]") {
    Mat<double> c1(2, 2, std::vector<double>{4, 1, 2, 3});
    std::vector<int> a1 = hungarian_assignment(c1);
    CHECK(a1 == std::vector<int>{1, 0});

    Mat<double> c2(3, 3, std::vector<double>{1, 2, 3, 2, 4, 6, 3, 6, 9});
    std::vector<int> a2 = hungarian_assignment(c2);
    double total = 0.0;
    for (std::size_t i = 0; i < 3; ++i) total += c2(i, static_cast<std::size_t>(a2[i]));
    CHECK(total == 10.0);

    CHECK(hungarian_assignment(Mat<double>(0, 0)).empty());
    CHECK_THROWS_AS(hungarian_assignment(Mat<double>(2, 3)), param_error);
}

TEST_CASE("wasserstein distance hand values", "[metrics]") {
    auto empty = diagram_of({});
    CHECK(wasserstein1(diagram_of({{0, 2}}), empty) == 1.0);
    CHECK(wasserstein1(diagram_of({{0, 2}}), diagram_of({{0, 4}})) == 2.0);
    CHECK(wasserstein1(empty, empty) == 0.0);
    CHECK_THAT(wasserstein1(diagram_of({{0, 2}}), empty, GroundMetric::l2),
               Catch::Matchers::WithinAbs(std::sqrt(2.0), 1e-12));
    // splitting beats matching when points are far apart
    CHECK(wasserstein1(diagram_of({{0, 1}}), diagram_of({{10, 11}})) == 1.0);
    // diagonal tuples are free
    CHECK(wasserstein1(diagram_of({{0, 2}, {0.5, 0.5}, {0.7, 0.7}}), diagram_of({{0, 2}})) == 0.0);
}

TEST_CASE("wasserstein matches brute force on random diagrams", "[metrics]") {
    Rng rng(77);
    for (int trial = 0; trial < 120; ++trial) {
        auto random_diagram = [&](int max_pts) {
            Diagram<double> d;
            d.dim = 1;
            int k = rng.uniform_int(0, max_pts);
            for (int i = 0; i < k; ++i) {
                double b = rng.uniform01();
                d.tuples.push_back({b, b + rng.uniform01(), 0});
            }
            if (rng.uniform01() < 0.5) {
                double b = rng.uniform01();
                d.tuples.push_back({b, b, 1}); // diagonal noise
            }
            return d;
        };
        Diagram<double> a = random_diagram(3);
        Diagram<double> b = random_diagram(3);
        GroundMetric m = trial % 2 == 0 ? GroundMetric::linf : GroundMetric::l2;
        double exact = wasserstein1(a, b, m);
        double brute = brute_force_w1(a, b, m);
        CHECK_THAT(exact, Catch::Matchers::WithinAbs(brute, 1e-9));
        CHECK_THAT(wasserstein1(b, a, m), Catch::Matchers::WithinAbs(exact, 1e-12));
    }
}

TEST_CASE("wasserstein loss tracks the exact distance and differentiates", "[metrics]") {
    Rng rng(78);
    for (int trial = 0; trial < 40; ++trial) {
        Diagram<double> a, b;
        a.dim = b.dim = 1;
        for (int i = 0; i < 3; ++i) {
            double x = rng.uniform01();
            a.tuples.push_back({x, x + rng.uniform01(), 0});
            double y = rng.uniform01();
            b.tuples.push_back({y, y + rng.uniform01(), 0});
        }
        CHECK_THAT(wasserstein_loss(a, b), Catch::Matchers::WithinAbs(wasserstein1(a, b), 1e-12));
    }

    ad::Tape tape;
    Diagram<ad::Var> a;
    a.dim = 1;
    ad::Var birth = tape.leaf(0.0);
    ad::Var death = tape.leaf(2.0);
    a.tuples.push_back({birth, death, 0});
    Diagram<ad::Var> b;
    b.dim = 1;
    b.tuples.push_back({tape.constant(0.3), tape.constant(0.3), 0});
    ad::Var loss = wasserstein_loss(a, b);
    CHECK(loss.value() == 1.0); // only the diagonal is available
    ad::Gradients g = tape.backward(loss);
    CHECK(g.at(death) == 0.5);
    CHECK(g.at(birth) == -0.5);

    Diagram<ad::Var> e1, e2;
    CHECK_THROWS_AS(wasserstein_loss(e1, e2), param_error);
}

TEST_CASE("wasserstein loss passes a numeric gradient check", "[metrics][autodiff]") {
    // coordinates are (b1, p1, b2, p2): two points per diagram via softplus
    // persistence so the off-diagonal set never changes under probes
    auto fn = [](auto&& xs) {
        using S = std::decay_t<decltype(xs[0])>;
        Diagram<S> a, b;
        a.dim = b.dim = 1;
        a.tuples.push_back({xs[0], xs[0] + softplus(xs[1]), 0});
        b.tuples.push_back({xs[2], xs[2] + softplus(xs[3]), 0});
        return wasserstein_loss(a, b, GroundMetric::l2);
    };
    std::vector<double> at = {0.1, 0.4, 0.9, -0.2};
    ad::GradCheckReport rep = ad::grad_check(fn, std::span<const double>(at));
    CHECK(rep.checked == 4);
    CHECK(rep.max_rel_error < 1e-5);
}

TEST_CASE("default transform has the documented layout", "[metrics]") {
    TransformConfig cfg = TransformConfig::defaults(1.0);
    CHECK(cfg.dim() == 19);
    CHECK(cfg.triangle_samples.size() == 8);
    CHECK(cfg.gaussian_centers.size() == 9);
    CHECK(cfg.lines.size() == 2);
    CHECK_THAT(cfg.triangle_samples[0], Catch::Matchers::WithinAbs(1.0 / 9.0, 1e-15));
    CHECK(cfg.gaussian_sigma == 0.25);
    CHECK_THROWS_AS(TransformConfig::defaults(0.0), param_error);

    TransformConfig wide = TransformConfig::defaults(2.0);
    CHECK(wide.gaussian_sigma == 0.5);
    CHECK_THAT(wide.triangle_samples[7], Catch::Matchers::WithinAbs(16.0 / 9.0, 1e-15));
}

TEST_CASE("vectorize hand values", "[metrics]") {
    TransformConfig cfg = TransformConfig::defaults(1.0);
    Diagram<double> d = diagram_of({{0.25, 0.75}, {0.3, 0.3}});
    auto vecs = vectorize(d, cfg);
    REQUIRE(vecs.size() == 2);
    REQUIRE(vecs[0].size() == 19);
    // tent at s = 4/9 over [1/4, 3/4]: min(7/36, 11/36)
    CHECK_THAT(vecs[0][3], Catch::Matchers::WithinAbs(7.0 / 36.0, 1e-12));
    // gaussian at (1/4, 1/4): exp(-(0 + 1/4) / (2 * (1/4)^2)) = exp(-2)
    CHECK_THAT(vecs[0][8], Catch::Matchers::WithinAbs(std::exp(-2.0), 1e-12));
    // projections of (b, d)
    CHECK_THAT(vecs[0][17], Catch::Matchers::WithinAbs(1.0 / std::sqrt(2.0), 1e-12));
    CHECK_THAT(vecs[0][18], Catch::Matchers::WithinAbs(0.5 / std::sqrt(2.0), 1e-12));
    // a diagonal tuple silences every tent
    for (int i = 0; i < 8; ++i) CHECK(vecs[1][static_cast<std::size_t>(i)] == 0.0);
    CHECK_THAT(vecs[1][18], Catch::Matchers::WithinAbs(0.0, 1e-15));

    TransformConfig none;
    CHECK_THROWS_AS(vectorize(d, none), param_error);
}

TEST_CASE("diagram stats and loss hand values", "[metrics]") {
    std::vector<std::vector<double>> vecs = {{1.0, 2.0}, {3.0, 6.0}};
    DiagramStats s = diagram_stats(vecs);
    CHECK(s.mean == std::vector<double>{2.0, 4.0});
    CHECK_THAT(s.stddev[0], Catch::Matchers::WithinAbs(1.0, 1e-12));
    CHECK_THAT(s.stddev[1], Catch::Matchers::WithinAbs(2.0, 1e-12));

    CHECK_THROWS_AS(diagram_stats(std::vector<std::vector<double>>{}), param_error);
    CHECK_THROWS_AS(diagram_stats(std::vector<std::vector<double>>{{1.0}, {1.0, 2.0}}), param_error);

    // a constant gap of c in every slot gives a loss of exactly c^2
    DiagramStats orig{{0.0, 0.0}, {0.0, 0.0}};
    DiagramStats off{{0.5, 0.5}, {0.5, 0.5}};
    CHECK_THAT(topo_loss(std::vector<DiagramStats>{off}, orig),
               Catch::Matchers::WithinAbs(0.25, 1e-15));
    CHECK(topo_loss(std::vector<DiagramStats>{orig, orig}, orig) == 0.0);
    CHECK_THROWS_AS(topo_loss(std::vector<DiagramStats>{}, orig), param_error);

    DiagramStats ragged{{0.0}, {0.0}};
    CHECK_THROWS_AS(topo_loss(std::vector<DiagramStats>{ragged}, orig), param_error);

    DiagramStats a{{1.0}, {2.0}}, b{{3.0}, {4.0}};
    DiagramStats joined = concat_stats(a, b);
    CHECK(joined.mean == std::vector<double>{1.0, 3.0});
    CHECK(joined.stddev == std::vector<double>{2.0, 4.0});
}

TEST_CASE("stats gradient reaches tuple coordinates", "[metrics][autodiff]") {
    auto fn = [](auto&& xs) {
        using S = std::decay_t<decltype(xs[0])>;
        Diagram<S> d;
        d.dim = 1;
        d.tuples.push_back({xs[0], xs[0] + softplus(xs[1]), 0});
        d.tuples.push_back({xs[2], xs[2] + softplus(xs[3]), 0});
        TransformConfig cfg = TransformConfig::defaults(1.0);
        auto stats = diagram_stats(vectorize(d, cfg));
        DiagramStatsT<S> target;
        for (std::size_t i = 0; i < stats.mean.size(); ++i) {
            target.mean.push_back(constant_like(xs[0], 0.1));
            target.stddev.push_back(constant_like(xs[0], 0.05));
        }
        return topo_loss(std::vector<DiagramStatsT<S>>{stats}, target);
    };
    std::vector<double> at = {0.15, -0.3, 0.5, 0.2};
    ad::GradCheckReport rep = ad::grad_check(fn, std::span<const double>(at));
    CHECK(rep.checked >= 3);
    CHECK(rep.max_rel_error < 1e-4);
}
